//! Seeded verification of every chart identity at random sample points.
//!
//! Each identity draws its own sample points from a ChaCha stream derived
//! from the suite seed and its position in [`IDENTITIES`], so results do not
//! depend on which identities run or on thread scheduling.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::charts::{self, ChartKind, Sign};
use crate::closedness::{numerical_d, FormField};
use crate::forms::{real_jacobian, to_real, Form2, Real4, C64};
use crate::projection::{defect_slope, project_theta};
use crate::su2::{complex_structure_from, sd_asd_split, square_defect, SU2AtPoint};
use crate::ChartError;

/// Seed used when none is supplied.
pub const DEFAULT_SEED: u64 = 1729;
/// Points per identity used when none is supplied.
pub const DEFAULT_SAMPLES: usize = 100;
/// Step of the finite-difference closedness check.
pub const CLOSEDNESS_STEP: f64 = 1e-4;
/// Perturbations used for the slope estimate, at most.
pub const SLOPE_SAMPLES: usize = 20;

/// How an identity's tolerance is set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ToleranceClass {
    /// Exact in real arithmetic; residuals are rounding noise. A global
    /// tolerance override applies.
    Exact,
    /// Limited by finite-difference truncation; keeps its own tolerance.
    FiniteDifference,
    /// A fitted exponent compared with its target; keeps its own tolerance.
    Exponent,
}

/// Static description of an identity.
#[derive(Clone, Copy, Debug)]
pub struct Identity {
    /// Stable identifier.
    pub name: &'static str,
    /// One-line description.
    pub description: &'static str,
    /// Default tolerance.
    pub tolerance: f64,
    /// Tolerance class.
    pub class: ToleranceClass,
    check: fn(&mut ChaCha8Rng) -> Result<f64, ChartError>,
}

/// Options of a suite run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteOptions {
    /// Sample points per identity.
    pub samples: usize,
    /// Override for the tolerance of exact identities.
    pub tolerance: Option<f64>,
    /// Random seed.
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            tolerance: None,
            seed: DEFAULT_SEED,
        }
    }
}

/// Outcome of one identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityResult {
    /// Identifier.
    pub name: String,
    /// Description.
    pub description: String,
    /// Points evaluated.
    pub samples: usize,
    /// Largest residual over the points.
    pub max_residual: f64,
    /// Tolerance applied.
    pub tolerance: f64,
    /// Tolerance class.
    pub class: ToleranceClass,
    /// Whether the largest residual is below the tolerance.
    pub passed: bool,
    /// First evaluation error, if any.
    pub error: Option<String>,
}

/// Outcome of a suite run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    /// Seed used.
    pub seed: u64,
    /// Points per identity requested.
    pub samples: usize,
    /// Per-identity results in [`IDENTITIES`] order.
    pub identities: Vec<IdentityResult>,
    /// Whether every identity passed.
    pub passed: bool,
    /// Remarks such as vacuous runs.
    pub warnings: Vec<String>,
}

fn annulus(rng: &mut ChaCha8Rng, rmin: f64, rmax: f64) -> C64 {
    C64::from_polar(rng.gen_range(rmin..rmax), rng.gen_range(-PI..PI))
}

fn chart_point(rng: &mut ChaCha8Rng) -> (C64, C64) {
    (annulus(rng, 0.2, 1.0), annulus(rng, 0.2, 1.0))
}

fn fiber_parameter(rng: &mut ChaCha8Rng) -> C64 {
    annulus(rng, 0.01, 0.1)
}

fn sign(rng: &mut ChaCha8Rng) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn triple(rng: &mut ChaCha8Rng) -> ChartKind {
    ChartKind::TripleChart { sigma: sign(rng) }
}

/// A real matrix `id + 0.3·U` with `U` uniform in `[−1, 1]` and positive
/// determinant.
pub fn random_gl_plus(rng: &mut ChaCha8Rng) -> Real4 {
    loop {
        let mut m = [[0.0; 4]; 4];
        for (p, row) in m.iter_mut().enumerate() {
            for (q, x) in row.iter_mut().enumerate() {
                *x = if p == q { 1.0 } else { 0.0 } + 0.3 * rng.gen_range(-1.0..1.0);
            }
        }
        if nalgebra::Matrix4::from_fn(|a, b| m[a][b]).determinant() > 0.1 {
            return m;
        }
    }
}

/// The flat structure pulled back along a random orientation-preserving
/// linear map, together with the map.
pub fn random_structure(rng: &mut ChaCha8Rng) -> (SU2AtPoint, Real4) {
    let m = random_gl_plus(rng);
    (SU2AtPoint::flat().pullback(&m), m)
}

/// A complex 2-form with coefficients uniform in the unit square.
pub fn random_form(rng: &mut ChaCha8Rng) -> Form2 {
    Form2::from_upper(std::array::from_fn(|_| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }))
}

/// A unit-norm anti-self-dual complex 2-form for the given structure.
pub fn random_asd(rng: &mut ChaCha8Rng, s: &SU2AtPoint) -> Result<Form2, ChartError> {
    let (_, asd) = sd_asd_split(&random_form(rng), s)?;
    Ok(asd * (1.0 / asd.norm()))
}

fn su2_double(rng: &mut ChaCha8Rng) -> Result<f64, ChartError> {
    let (x, y) = chart_point(rng);
    Ok(charts::eval_su2_double(x, y, sign(rng))?
        .residuals()
        .max_violation())
}

fn su2_triple(rng: &mut ChaCha8Rng) -> Result<f64, ChartError> {
    let (x, y) = chart_point(rng);
    Ok(charts::eval_su2_triple(x, y, sign(rng))?
        .residuals()
        .max_violation())
}

fn su2_c3(rng: &mut ChaCha8Rng) -> Result<f64, ChartError> {
    let i = rng.gen_range(1..=3);
    let (a, b) = chart_point(rng);
    let s = charts::eval_c3_model(i, fiber_parameter(rng), a, b, sign(rng))?;
    Ok(s.residuals().max_violation())
}

fn t_pullback(kind: ChartKind, rng: &mut ChaCha8Rng) -> Result<f64, ChartError> {
    let (x, y) = chart_point(rng);
    let zeta = fiber_parameter(rng);
    let (hx, hy) = charts::eval_h(kind, zeta, x, y)?;
    let lhs = charts::eval_t(kind, hx, hy)?;
    let rhs = 2.0 * charts::t_zeta(zeta)? - charts::eval_t(kind, x, y)?;
    Ok((lhs - rhs).abs())
}

fn t_pullback_double(rng: &mut ChaCha8Rng) -> Result<f64, ChartError> {
    t_pullback(ChartKind::DoubleChart, rng)
}

fn t_pullback_triple(rng: &mut ChaCha8Rng) -> Result<f64, ChartError> {
    let kind = triple(rng);
    t_pullback(kind, rng)
}

fn composition(kind: ChartKind, rng: &mut ChaCha8Rng) -> Result<f64, ChartError> {
    let (x, y) = chart_point(rng);
    let zeta = fiber_parameter(rng);
    let xi = fiber_parameter(rng);
    let (x1, y1) = charts::eval_h(kind, zeta, x, y)?;
    let (x2, y2) = charts::eval_h(charts::opposite(kind), xi, x1, y1)?;
    Ok((x2 - x).norm().max((y2 - xi * y / zeta).norm()))
}

fn composition_double(rng: &mut ChaCha8Rng) -> Result<f64, ChartError> {
    composition(ChartKind::DoubleChart, rng)
}

fn composition_triple(rng: &mut ChaCha8Rng) -> Result<f64, ChartError> {
    let kind = triple(rng);
    composition(kind, rng)
}

fn invariance(kind: ChartKind, rng: &mut ChaCha8Rng) -> Result<f64, ChartError> {
    let (x, y) = chart_point(rng);
    let zeta = fiber_parameter(rng);
    let (pulled, here) = charts::pullback_through_h(kind, sign(rng), zeta, x, y)?;
    Ok(pulled.distance(&here))
}

fn invariance_double(rng: &mut ChaCha8Rng) -> Result<f64, ChartError> {
    invariance(ChartKind::DoubleChart, rng)
}

fn invariance_triple(rng: &mut ChaCha8Rng) -> Result<f64, ChartError> {
    let kind = triple(rng);
    invariance(kind, rng)
}

fn triple_kappa_forms(rng: &mut ChaCha8Rng) -> Result<f64, ChartError> {
    let (x, y) = chart_point(rng);
    let direct = charts::eval_su2_triple(x, y, Sign::Plus)?.kappa;
    Ok((direct - charts::triple_kappa_via_t(x, y)?).max_abs())
}

fn eta_sum(rng: &mut ChaCha8Rng) -> Result<f64, ChartError> {
    let i = rng.gen_range(1..=3);
    let (a, b) = chart_point(rng);
    let eta = charts::c3_eta(i, fiber_parameter(rng), a, b)?;
    Ok((eta[0] + eta[1] + eta[2]).max_abs())
}

fn c3_transition(rng: &mut ChaCha8Rng) -> Result<f64, ChartError> {
    let from = rng.gen_range(1..=3);
    let to = (from + rng.gen_range(0..2)) % 3 + 1;
    let (a, b) = chart_point(rng);
    let zeta = fiber_parameter(rng);
    let sigma = sign(rng);
    let ((c, d), jac) = charts::c3_transition(from, to, zeta, a, b)?;
    let pulled = charts::eval_c3_model(to, zeta, c, d, sigma)?.pullback(&real_jacobian(jac));
    let here = charts::eval_c3_model(from, zeta, a, b, sigma)?;
    Ok(pulled.distance(&here))
}

fn c3_ambient(rng: &mut ChaCha8Rng) -> Result<f64, ChartError> {
    let i = rng.gen_range(1..=3);
    let (a, b) = chart_point(rng);
    let zeta = fiber_parameter(rng);
    let model = charts::eval_c3_model(i, zeta, a, b, Sign::Plus)?.kappa;
    Ok((model - charts::c3_ambient_kappa(i, zeta, a, b)?).max_abs())
}

fn closedness(rng: &mut ChaCha8Rng) -> Result<f64, ChartError> {
    // Away from the poles the truncation error of the central differences
    // stays well below the tolerance.
    let (x, y) = (annulus(rng, 0.6, 1.2), annulus(rng, 0.6, 1.2));
    let p = to_real(x, y);
    let fields = [
        FormField::DoubleOmega { eps: sign(rng) },
        FormField::DoubleKappa,
        FormField::TripleOmega { sigma: sign(rng) },
        FormField::TripleKappa,
        FormField::C3Omega {
            i: rng.gen_range(1..=3),
            zeta: {
                let z = fiber_parameter(rng);
                (z.re, z.im)
            },
            sigma123: sign(rng),
        },
    ];
    let mut worst: f64 = 0.0;
    for f in &fields {
        worst = worst.max(numerical_d(f, p, CLOSEDNESS_STEP)?);
    }
    Ok(worst)
}

/// Central-difference real Jacobian of a map on real coordinates.
pub fn fd_jacobian(
    f: impl Fn([f64; 4]) -> Result<[f64; 4], ChartError>,
    p: [f64; 4],
    step: f64,
) -> Result<Real4, ChartError> {
    let mut j = [[0.0; 4]; 4];
    for q in 0..4 {
        let mut plus = p;
        let mut minus = p;
        plus[q] += step;
        minus[q] -= step;
        let (fp, fm) = (f(plus)?, f(minus)?);
        for (row, (a, b)) in j.iter_mut().zip(fp.iter().zip(fm)) {
            row[q] = (a - b) / (2.0 * step);
        }
    }
    Ok(j)
}

fn max_diff(a: &Real4, b: &Real4) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn jacobian_consistency(rng: &mut ChaCha8Rng) -> Result<f64, ChartError> {
    let (x, y) = chart_point(rng);
    let zeta = fiber_parameter(rng);
    let p = to_real(x, y);
    let step = 1e-6;
    let mut worst: f64 = 0.0;
    for kind in [ChartKind::DoubleChart, triple(rng)] {
        let analytic = real_jacobian(charts::h_jacobian(kind, zeta, x, y)?);
        let numeric = fd_jacobian(
            |q| {
                let (a, b) = crate::forms::from_real(q);
                let (u, v) = charts::eval_h(kind, zeta, a, b)?;
                Ok(to_real(u, v))
            },
            p,
            step,
        )?;
        worst = worst.max(max_diff(&analytic, &numeric));
    }
    let from = rng.gen_range(1..=3);
    let to = (from + rng.gen_range(0..2)) % 3 + 1;
    let (_, jac) = charts::c3_transition(from, to, zeta, x, y)?;
    let numeric = fd_jacobian(
        |q| {
            let (a, b) = crate::forms::from_real(q);
            let ((u, v), _) = charts::c3_transition(from, to, zeta, a, b)?;
            Ok(to_real(u, v))
        },
        p,
        step,
    )?;
    Ok(worst.max(max_diff(&real_jacobian(jac), &numeric)))
}

fn invert(m: &Real4) -> Result<Real4, ChartError> {
    let inv = nalgebra::Matrix4::from_fn(|a, b| m[a][b])
        .try_inverse()
        .ok_or_else(|| ChartError::DegenerateStructure("singular change of basis".into()))?;
    Ok(std::array::from_fn(|a| {
        std::array::from_fn(|b| inv[(a, b)])
    }))
}

fn mul(a: &Real4, b: &Real4) -> Real4 {
    std::array::from_fn(|p| std::array::from_fn(|q| (0..4).map(|r| a[p][r] * b[r][q]).sum()))
}

fn complex_structure(rng: &mut ChaCha8Rng) -> Result<f64, ChartError> {
    let (s, m) = random_structure(rng);
    let i = complex_structure_from(&s.psi)?;
    // Direct oracle: the pulled-back structure is conjugate to the standard one.
    let i0 = complex_structure_from(&SU2AtPoint::flat().psi)?;
    let expected = mul(&invert(&m)?, &mul(&i0, &m));
    // ψ is of type (2,0): ψ(Iu, v) = i ψ(u, v).
    let mut type_defect: f64 = 0.0;
    for p in 0..4 {
        for q in 0..4 {
            let lhs: C64 = (0..4).map(|r| s.psi.m[r][q] * i[r][p]).sum();
            type_defect = type_defect.max((lhs - C64::i() * s.psi.m[p][q]).norm());
        }
    }
    let (x, y) = chart_point(rng);
    let chart = charts::eval_su2_triple(x, y, sign(rng))?;
    let chart_defect = square_defect(&complex_structure_from(&chart.psi)?);
    Ok(square_defect(&i)
        .max(max_diff(&i, &expected))
        .max(type_defect)
        .max(chart_defect))
}

fn self_duality(rng: &mut ChaCha8Rng) -> Result<f64, ChartError> {
    let (s, _) = random_structure(rng);
    let mut worst: f64 = 0.0;
    for f in [s.psi.re(), s.psi.im(), s.kappa] {
        let (sd, asd) = sd_asd_split(&f, &s)?;
        worst = worst.max((sd - f).max_abs()).max(asd.max_abs());
    }
    let eta = random_asd(rng, &s)?;
    let (sd, _) = sd_asd_split(&eta, &s)?;
    Ok(worst.max(sd.max_abs()))
}

fn idempotence(rng: &mut ChaCha8Rng) -> Result<f64, ChartError> {
    let (s, _) = random_structure(rng);
    let fixed = project_theta(&s.psi, &s.kappa)?.distance(&s);
    let psi = s.psi + random_form(rng) * 0.05;
    let kappa = s.kappa + random_form(rng).re() * 0.05;
    let once = project_theta(&psi, &kappa)?;
    let twice = project_theta(&once.psi, &once.kappa)?;
    Ok(fixed.max(once.distance(&twice)))
}

fn quadratic_defect(rng: &mut ChaCha8Rng) -> Result<f64, ChartError> {
    let (s, _) = random_structure(rng);
    let eta = random_asd(rng, &s)?;
    Ok((defect_slope(&s, &eta)? - 2.0).abs())
}

/// Every identity of the suite, in report order.
pub const IDENTITIES: &[Identity] = &[
    Identity {
        name: "su2_double",
        description: "SU(2) constraints of the double-chart structure",
        tolerance: 1e-9,
        class: ToleranceClass::Exact,
        check: su2_double,
    },
    Identity {
        name: "su2_triple",
        description: "SU(2) constraints of the triple-chart structure",
        tolerance: 1e-9,
        class: ToleranceClass::Exact,
        check: su2_triple,
    },
    Identity {
        name: "su2_c3_model",
        description: "SU(2) constraints of the model fiber structure",
        tolerance: 1e-9,
        class: ToleranceClass::Exact,
        check: su2_c3,
    },
    Identity {
        name: "t_pullback_double",
        description: "t(h(x,y)) = 2T_zeta - t(x,y) on double charts",
        tolerance: 1e-12,
        class: ToleranceClass::Exact,
        check: t_pullback_double,
    },
    Identity {
        name: "t_pullback_triple",
        description: "t(h(x,y)) = 2T_zeta - t(x,y) on triple charts",
        tolerance: 1e-12,
        class: ToleranceClass::Exact,
        check: t_pullback_triple,
    },
    Identity {
        name: "h_composition_double",
        description: "h_xi(h_zeta(x,y)) = (x, xi y / zeta) on double charts",
        tolerance: 1e-12,
        class: ToleranceClass::Exact,
        check: composition_double,
    },
    Identity {
        name: "h_composition_triple",
        description: "h_xi(h_zeta(x,y)) = (x, xi y / zeta) on triple charts",
        tolerance: 1e-12,
        class: ToleranceClass::Exact,
        check: composition_triple,
    },
    Identity {
        name: "h_pullback_double",
        description: "h pulls the opposite double-chart structure back to this one",
        tolerance: 1e-9,
        class: ToleranceClass::Exact,
        check: invariance_double,
    },
    Identity {
        name: "h_pullback_triple",
        description: "h pulls the opposite triple-chart structure back to this one",
        tolerance: 1e-9,
        class: ToleranceClass::Exact,
        check: invariance_triple,
    },
    Identity {
        name: "triple_kahler_forms",
        description: "both expressions of the triple-chart Kahler form agree",
        tolerance: 1e-12,
        class: ToleranceClass::Exact,
        check: triple_kappa_forms,
    },
    Identity {
        name: "c3_eta_sum",
        description: "eta1 + eta2 + eta3 = 0 on the model fiber",
        tolerance: 1e-12,
        class: ToleranceClass::Exact,
        check: eta_sum,
    },
    Identity {
        name: "c3_transition",
        description: "model chart transitions carry one structure to the other",
        tolerance: 1e-9,
        class: ToleranceClass::Exact,
        check: c3_transition,
    },
    Identity {
        name: "c3_ambient_kahler",
        description: "model Kahler form is the restriction of the ambient one",
        tolerance: 1e-12,
        class: ToleranceClass::Exact,
        check: c3_ambient,
    },
    Identity {
        name: "complex_structure",
        description:
            "I^2 = -id, psi of type (2,0), agreement with the conjugated standard structure",
        tolerance: 1e-9,
        class: ToleranceClass::Exact,
        check: complex_structure,
    },
    Identity {
        name: "self_duality",
        description: "Re psi, Im psi, kappa are self-dual; projected forms are anti-self-dual",
        tolerance: 1e-9,
        class: ToleranceClass::Exact,
        check: self_duality,
    },
    Identity {
        name: "theta_idempotence",
        description: "projection fixes structures and is idempotent",
        tolerance: 1e-9,
        class: ToleranceClass::Exact,
        check: idempotence,
    },
    Identity {
        name: "closedness",
        description: "central-difference exterior derivative of every chart form field",
        tolerance: 1e-6,
        class: ToleranceClass::FiniteDifference,
        check: closedness,
    },
    Identity {
        name: "jacobian_consistency",
        description: "analytic Jacobians agree with central differences",
        tolerance: 1e-6,
        class: ToleranceClass::FiniteDifference,
        check: jacobian_consistency,
    },
    Identity {
        name: "theta_quadratic_defect",
        description: "|slope - 2| of the projection defect for anti-self-dual perturbations",
        tolerance: 0.1,
        class: ToleranceClass::Exponent,
        check: quadratic_defect,
    },
];

fn stream_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Runs one identity.
pub fn run_identity(index: usize, options: &SuiteOptions) -> IdentityResult {
    let id = &IDENTITIES[index];
    let samples = match id.class {
        ToleranceClass::Exponent => options.samples.min(SLOPE_SAMPLES),
        _ => options.samples,
    };
    let tolerance = match (id.class, options.tolerance) {
        (ToleranceClass::Exact, Some(t)) => t,
        _ => id.tolerance,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(options.seed, index));
    let mut max_residual: f64 = 0.0;
    let mut error = None;
    for _ in 0..samples {
        match (id.check)(&mut rng) {
            Ok(r) if r.is_finite() => max_residual = max_residual.max(r),
            Ok(r) => {
                max_residual = f64::INFINITY;
                error.get_or_insert_with(|| format!("non-finite residual {r}"));
            }
            Err(e) => {
                max_residual = f64::INFINITY;
                error.get_or_insert_with(|| e.to_string());
            }
        }
    }
    IdentityResult {
        name: id.name.to_string(),
        description: id.description.to_string(),
        samples,
        max_residual,
        tolerance,
        class: id.class,
        passed: error.is_none() && max_residual < tolerance,
        error,
    }
}

/// Runs every identity, one worker thread per identity.
pub fn run_suite(options: &SuiteOptions) -> SuiteReport {
    let identities: Vec<IdentityResult> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..IDENTITIES.len())
            .map(|k| scope.spawn(move || run_identity(k, options)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("identity worker panicked"))
            .collect()
    });
    let mut warnings = Vec::new();
    if options.samples == 0 {
        warnings.push("no sample points requested; every identity passes vacuously".to_string());
    }
    SuiteReport {
        seed: options.seed,
        samples: options.samples,
        passed: identities.iter().all(|r| r.passed),
        identities,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_names_are_unique() {
        let mut names: Vec<_> = IDENTITIES.iter().map(|i| i.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), IDENTITIES.len());
    }

    #[test]
    fn zero_samples_pass_vacuously() {
        let r = run_suite(&SuiteOptions {
            samples: 0,
            ..SuiteOptions::default()
        });
        assert!(r.passed);
        assert_eq!(r.warnings.len(), 1);
    }
}
