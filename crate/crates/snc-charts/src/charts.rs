//! Explicit local smoothing charts near double curves and triple points, and
//! the model fiber of `u¹u²u³ = ζ` in ℂ³.
//!
//! A double chart has coordinates `(x, y)` with the double curve at `y = 0`.
//! A triple chart has the two double curves through a triple point at
//! `x = 0` and `y = 0`. The gluing map `h` identifies the punctured chart of
//! one side with that of the other side in the smoothed fiber.

use serde::Serialize;

use crate::forms::{real_jacobian, Form2, OneForm, C64, I};
use crate::su2::SU2AtPoint;
use crate::ChartError;

/// A sign `±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    /// `+1`.
    Plus,
    /// `−1`.
    Minus,
}

impl Sign {
    /// The sign as a float.
    pub fn value(self) -> f64 {
        match self {
            Self::Plus => 1.0,
            Self::Minus => -1.0,
        }
    }

    /// The opposite sign.
    pub fn flip(self) -> Self {
        match self {
            Self::Plus => Self::Minus,
            Self::Minus => Self::Plus,
        }
    }

    /// Sign from an integer; any negative value maps to `Minus`.
    pub fn from_i64(v: i64) -> Self {
        if v < 0 {
            Self::Minus
        } else {
            Self::Plus
        }
    }
}

/// Type of a local chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ChartKind {
    /// Chart around a point of a double curve away from triple points.
    DoubleChart,
    /// Chart around a triple point, with the sign of the volume form.
    TripleChart {
        /// Sign of the volume form.
        sigma: Sign,
    },
}

fn nonzero(z: C64, what: &str) -> Result<(), ChartError> {
    if z.norm() == 0.0 || !z.re.is_finite() || !z.im.is_finite() {
        Err(ChartError::DomainError(format!(
            "{what} must be a finite nonzero number"
        )))
    } else {
        Ok(())
    }
}

fn check_point(kind: ChartKind, x: C64, y: C64) -> Result<(), ChartError> {
    nonzero(y, "y")?;
    if matches!(kind, ChartKind::TripleChart { .. }) {
        nonzero(x, "x")?;
    }
    Ok(())
}

/// The gluing map: `(x, ζ/y)` on double charts and `(x, ζ/(xy))` on triple
/// charts.
pub fn eval_h(kind: ChartKind, zeta: C64, x: C64, y: C64) -> Result<(C64, C64), ChartError> {
    nonzero(zeta, "zeta")?;
    check_point(kind, x, y)?;
    Ok(match kind {
        ChartKind::DoubleChart => (x, zeta / y),
        ChartKind::TripleChart { .. } => (x, zeta / (x * y)),
    })
}

/// Complex Jacobian `∂h_a/∂z_b` of the gluing map.
pub fn h_jacobian(kind: ChartKind, zeta: C64, x: C64, y: C64) -> Result<[[C64; 2]; 2], ChartError> {
    nonzero(zeta, "zeta")?;
    check_point(kind, x, y)?;
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    Ok(match kind {
        ChartKind::DoubleChart => [[one, zero], [zero, -zeta / (y * y)]],
        ChartKind::TripleChart { .. } => [[one, zero], [-zeta / (x * x * y), -zeta / (x * y * y)]],
    })
}

/// The cylindrical parameter: `−2 log|y|` on double charts and
/// `−log|x| − 2 log|y|` on triple charts.
pub fn eval_t(kind: ChartKind, x: C64, y: C64) -> Result<f64, ChartError> {
    check_point(kind, x, y)?;
    Ok(match kind {
        ChartKind::DoubleChart => -2.0 * y.norm().ln(),
        ChartKind::TripleChart { .. } => -x.norm().ln() - 2.0 * y.norm().ln(),
    })
}

/// Half the neck length, `T_ζ = −log|ζ|`.
pub fn t_zeta(zeta: C64) -> Result<f64, ChartError> {
    nonzero(zeta, "zeta")?;
    Ok(-zeta.norm().ln())
}

/// The SU(2)-structure on a double chart:
/// `Ω = −ε dx∧dy/y` and `ω = (i/2)(dx∧dx̄ + dy∧dȳ/|y|²)`.
pub fn eval_su2_double(x: C64, y: C64, eps: Sign) -> Result<SU2AtPoint, ChartError> {
    check_point(ChartKind::DoubleChart, x, y)?;
    let dx = OneForm::dz(0);
    let dy = OneForm::dz(1);
    let psi = Form2::wedge1(&dx, &dy) * (-eps.value() / y);
    let kappa = (Form2::wedge1(&dx, &dx.conj())
        + Form2::wedge1(&dy, &dy.conj()) * (1.0 / y.norm_sqr()))
        * (I * 0.5);
    Ok(SU2AtPoint { psi, kappa })
}

/// Logarithmic differentials `dx/x` and `dy/y`.
fn log_differentials(x: C64, y: C64) -> (OneForm, OneForm) {
    (OneForm::dz(0) * (1.0 / x), OneForm::dz(1) * (1.0 / y))
}

/// The SU(2)-structure on a triple chart: `Ω = −σ a∧b` and
/// `ω = (i/2√3){a∧ā + b∧b̄ + (a+b)∧(ā+b̄)}` with `a = dx/x`, `b = dy/y`.
pub fn eval_su2_triple(x: C64, y: C64, sigma: Sign) -> Result<SU2AtPoint, ChartError> {
    check_point(ChartKind::TripleChart { sigma }, x, y)?;
    let (a, b) = log_differentials(x, y);
    let psi = Form2::wedge1(&a, &b) * (-sigma.value());
    let s = a + b;
    let kappa = (Form2::wedge1(&a, &a.conj())
        + Form2::wedge1(&b, &b.conj())
        + Form2::wedge1(&s, &s.conj()))
        * (I / (2.0 * 3f64.sqrt()));
    Ok(SU2AtPoint { psi, kappa })
}

/// The Kähler form of a triple chart written through the cylindrical
/// parameter: `(√3/2)(i/2) a∧ā + (i/√3) ∂t∧∂̄t` with `∂t = −a/2 − b`.
pub fn triple_kappa_via_t(x: C64, y: C64) -> Result<Form2, ChartError> {
    check_point(ChartKind::TripleChart { sigma: Sign::Plus }, x, y)?;
    let (a, b) = log_differentials(x, y);
    let dt = a * (-0.5) - b;
    let sqrt3 = 3f64.sqrt();
    Ok(Form2::wedge1(&a, &a.conj()) * (I * (sqrt3 / 4.0))
        + Form2::wedge1(&dt, &dt.conj()) * (I / sqrt3))
}

/// The SU(2)-structure a chart kind carries at a point.
pub fn eval_su2(kind: ChartKind, sign: Sign, x: C64, y: C64) -> Result<SU2AtPoint, ChartError> {
    match kind {
        ChartKind::DoubleChart => eval_su2_double(x, y, sign),
        ChartKind::TripleChart { sigma } => eval_su2_triple(x, y, sigma),
    }
}

/// The chart kind seen from the opposite side of the gluing. The volume
/// form of the other side carries the opposite sign.
pub fn opposite(kind: ChartKind) -> ChartKind {
    match kind {
        ChartKind::DoubleChart => ChartKind::DoubleChart,
        ChartKind::TripleChart { sigma } => ChartKind::TripleChart {
            sigma: sigma.flip(),
        },
    }
}

/// Pulls the structure of the opposite side back through `h` and returns it
/// alongside the structure of this side at the same point.
pub fn pullback_through_h(
    kind: ChartKind,
    eps: Sign,
    zeta: C64,
    x: C64,
    y: C64,
) -> Result<(SU2AtPoint, SU2AtPoint), ChartError> {
    let (hx, hy) = eval_h(kind, zeta, x, y)?;
    let j = real_jacobian(h_jacobian(kind, zeta, x, y)?);
    let other = eval_su2(opposite(kind), eps.flip(), hx, hy)?;
    let here = eval_su2(kind, eps, x, y)?;
    Ok((other.pullback(&j), here))
}

/// Indices `(j, k)` with `j < k` complementary to `i` in `{1, 2, 3}`.
pub fn c3_complement(i: usize) -> Result<(usize, usize), ChartError> {
    match i {
        1 => Ok((2, 3)),
        2 => Ok((1, 3)),
        3 => Ok((1, 2)),
        _ => Err(ChartError::DomainError(format!(
            "model index {i} is not in 1..=3"
        ))),
    }
}

/// Sign of the permutation `(i, j, k)` of `(1, 2, 3)` with `j < k`.
fn c3_parity(i: usize) -> f64 {
    if i == 2 {
        -1.0
    } else {
        1.0
    }
}

/// The point of the fiber `u¹u²u³ = ζ` with chart coordinates
/// `(u^j, u^k) = (a, b)` in the chart that omits `u^i`.
pub fn c3_lift(i: usize, zeta: C64, a: C64, b: C64) -> Result<[C64; 3], ChartError> {
    let (j, k) = c3_complement(i)?;
    nonzero(zeta, "zeta")?;
    nonzero(a, "u^j")?;
    nonzero(b, "u^k")?;
    let mut u = [C64::new(0.0, 0.0); 3];
    u[j - 1] = a;
    u[k - 1] = b;
    u[i - 1] = zeta / (a * b);
    Ok(u)
}

/// Differentials `du¹, du², du³` restricted to the fiber, as 1-forms in the
/// chart coordinates of chart `i`.
pub fn c3_differentials(i: usize, zeta: C64, a: C64, b: C64) -> Result<[OneForm; 3], ChartError> {
    let (j, k) = c3_complement(i)?;
    c3_lift(i, zeta, a, b)?;
    let mut du = [OneForm::zero(); 3];
    du[j - 1] = OneForm::dz(0);
    du[k - 1] = OneForm::dz(1);
    // u^i = ζ/(ab): ∂/∂a = −ζ/(a²b), ∂/∂b = −ζ/(ab²).
    du[i - 1] = OneForm::holomorphic(-zeta / (a * a * b), -zeta / (a * b * b));
    Ok(du)
}

/// Logarithmic differentials `η^m = du^m/u^m` restricted to the fiber.
pub fn c3_eta(i: usize, zeta: C64, a: C64, b: C64) -> Result<[OneForm; 3], ChartError> {
    let u = c3_lift(i, zeta, a, b)?;
    let du = c3_differentials(i, zeta, a, b)?;
    Ok([0, 1, 2].map(|m| du[m] * (1.0 / u[m])))
}

/// The SU(2)-structure on the chart of the model fiber omitting `u^i`:
/// `Ω = −σ_ijk η^j∧η^k` and
/// `ω = (i/2√3){η^j∧η̄^j + η^k∧η̄^k + (η^j+η^k)∧(η̄^j+η̄^k)}`.
pub fn eval_c3_model(
    i: usize,
    zeta: C64,
    uj: C64,
    uk: C64,
    sigma123: Sign,
) -> Result<SU2AtPoint, ChartError> {
    let (j, k) = c3_complement(i)?;
    let eta = c3_eta(i, zeta, uj, uk)?;
    let (ej, ek) = (eta[j - 1], eta[k - 1]);
    let sigma = c3_parity(i) * sigma123.value();
    let psi = Form2::wedge1(&ej, &ek) * (-sigma);
    let s = ej + ek;
    let kappa = (Form2::wedge1(&ej, &ej.conj())
        + Form2::wedge1(&ek, &ek.conj())
        + Form2::wedge1(&s, &s.conj()))
        * (I / (2.0 * 3f64.sqrt()));
    Ok(SU2AtPoint { psi, kappa })
}

/// Restriction of `ω_{ℂ³} = (i/2√3) Σ_m η^m∧η̄^m` to the fiber, in the
/// chart omitting `u^i`.
pub fn c3_ambient_kappa(i: usize, zeta: C64, uj: C64, uk: C64) -> Result<Form2, ChartError> {
    let eta = c3_eta(i, zeta, uj, uk)?;
    Ok(eta
        .iter()
        .fold(Form2::zero(), |acc, e| acc + Form2::wedge1(e, &e.conj()))
        * (I / (2.0 * 3f64.sqrt())))
}

/// The transition `p_i ∘ p_j⁻¹` from the chart omitting `u^j` to the chart
/// omitting `u^i`, with its complex Jacobian.
pub fn c3_transition(
    from: usize,
    to: usize,
    zeta: C64,
    a: C64,
    b: C64,
) -> Result<((C64, C64), [[C64; 2]; 2]), ChartError> {
    let u = c3_lift(from, zeta, a, b)?;
    let du = c3_differentials(from, zeta, a, b)?;
    let (j, k) = c3_complement(to)?;
    let row = |m: usize| {
        let f = du[m - 1];
        // Holomorphic 1-forms store (c, i c) on each real pair.
        [f.0[0], f.0[2]]
    };
    Ok(((u[j - 1], u[k - 1]), [row(j), row(k)]))
}
