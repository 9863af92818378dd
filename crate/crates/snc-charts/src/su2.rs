//! Pointwise SL(2,ℂ) and SU(2) structures: constraint residuals, the complex
//! structure determined by `ψ`, the associated metric, the Hodge star and
//! the self-dual / anti-self-dual splitting of 2-forms.

use nalgebra::{Matrix4, SymmetricEigen};
use serde::Serialize;

use crate::forms::{Form2, OneForm, Real4, C64, I};
use crate::ChartError;

/// Relative threshold below which a singular value of `ψ` counts as zero.
pub const KERNEL_THRESHOLD: f64 = 1e-8;

/// A pair `(ψ, κ)` at one tangent space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SU2AtPoint {
    /// Complex 2-form.
    pub psi: Form2,
    /// Real 2-form, stored with complex entries whose imaginary parts vanish.
    pub kappa: Form2,
}

/// Residuals of the defining conditions of an SU(2)-structure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Su2Residuals {
    /// `|ψ ∧ ψ|`.
    pub psi_psi: f64,
    /// `ψ ∧ ψ̄`, which must be positive.
    pub psi_psibar: f64,
    /// `|ψ ∧ κ|`.
    pub psi_kappa: f64,
    /// `|2κ∧κ − ψ∧ψ̄|`.
    pub normalization: f64,
    /// Largest imaginary part of `κ`.
    pub kappa_imag: f64,
    /// Smallest eigenvalue of the associated metric, or `-∞` when the
    /// complex structure could not be formed.
    pub metric_min_eigenvalue: f64,
}

impl Su2Residuals {
    /// The largest violation among all conditions. Positivity conditions
    /// contribute only when they fail.
    pub fn max_violation(&self) -> f64 {
        [
            self.psi_psi,
            self.psi_kappa,
            self.normalization,
            self.kappa_imag,
            (-self.psi_psibar).max(0.0),
            (-self.metric_min_eigenvalue).max(0.0),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl SU2AtPoint {
    /// The flat model `ψ = dx∧dy`, `κ = (i/2)(dx∧dx̄ + dy∧dȳ)`.
    pub fn flat() -> Self {
        let psi = Form2::wedge1(&OneForm::dz(0), &OneForm::dz(1));
        let kappa = (Form2::wedge1(&OneForm::dz(0), &OneForm::dzbar(0))
            + Form2::wedge1(&OneForm::dz(1), &OneForm::dzbar(1)))
            * (I * 0.5);
        Self { psi, kappa }
    }

    /// Pullback of both forms along a linear map.
    pub fn pullback(&self, j: &Real4) -> Self {
        Self {
            psi: self.psi.pullback(j),
            kappa: self.kappa.pullback(j),
        }
    }

    /// Largest coefficient difference to another pair.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.psi - other.psi)
            .max_abs()
            .max((self.kappa - other.kappa).max_abs())
    }

    /// Evaluates every defining condition.
    pub fn residuals(&self) -> Su2Residuals {
        let pp = self.psi.wedge(&self.psi);
        let ppb = self.psi.wedge(&self.psi.conj());
        let pk = self.psi.wedge(&self.kappa);
        let kk = self.kappa.wedge(&self.kappa);
        let metric_min_eigenvalue = match metric(self) {
            Ok(g) => SymmetricEigen::new(Matrix4::from_fn(|a, b| g[a][b]))
                .eigenvalues
                .min(),
            Err(_) => f64::NEG_INFINITY,
        };
        Su2Residuals {
            psi_psi: pp.norm(),
            psi_psibar: ppb.re,
            psi_kappa: pk.norm(),
            normalization: (kk * 2.0 - ppb).norm(),
            kappa_imag: self.kappa.imag_defect(),
            metric_min_eigenvalue,
        }
    }
}

fn to_matrix(f: &Form2) -> Matrix4<C64> {
    Matrix4::from_fn(|p, q| f.m[p][q])
}

/// The complex structure `I` with `ψ` of type (2,0).
///
/// The `−i` eigenspace of `I` is the kernel of `ψ` on complexified tangent
/// vectors and the `+i` eigenspace is its conjugate. The returned matrix acts
/// on tangent vectors in the real basis.
pub fn complex_structure_from(psi: &Form2) -> Result<Real4, ChartError> {
    let svd = to_matrix(psi).svd(false, true);
    let v_t = svd.v_t.ok_or_else(|| {
        ChartError::DegenerateStructure("singular value decomposition failed".into())
    })?;
    let smax = svd.singular_values.max();
    let cutoff = KERNEL_THRESHOLD * smax.max(1.0);
    let kernel: Vec<usize> = (0..4)
        .filter(|&k| svd.singular_values[k] < cutoff)
        .collect();
    if kernel.len() != 2 {
        return Err(ChartError::DegenerateStructure(format!(
            "kernel of psi has numerical dimension {}, expected 2",
            kernel.len()
        )));
    }
    let mut b = Matrix4::<C64>::zeros();
    for (slot, &k) in kernel.iter().enumerate() {
        for p in 0..4 {
            // Rows of v_t are conjugated right singular vectors.
            let v = v_t[(k, p)].conj();
            b[(p, slot)] = v.conj();
            b[(p, slot + 2)] = v;
        }
    }
    let b_inv = b.try_inverse().ok_or_else(|| {
        ChartError::DegenerateStructure("kernel of psi meets its conjugate".into())
    })?;
    let d = Matrix4::from_diagonal(&nalgebra::Vector4::new(I, I, -I, -I));
    let m = b * d * b_inv;
    let mut out = [[0.0; 4]; 4];
    for (p, row) in out.iter_mut().enumerate() {
        for (q, x) in row.iter_mut().enumerate() {
            *x = m[(p, q)].re;
        }
    }
    Ok(out)
}

fn mat_mul(a: &Real4, b: &Real4) -> Real4 {
    let mut out = [[0.0; 4]; 4];
    for (p, row) in out.iter_mut().enumerate() {
        for (q, x) in row.iter_mut().enumerate() {
            *x = (0..4).map(|r| a[p][r] * b[r][q]).sum();
        }
    }
    out
}

/// Frobenius norm of `I² + id`.
pub fn square_defect(i: &Real4) -> f64 {
    let sq = mat_mul(i, i);
    let mut s = 0.0;
    for (p, row) in sq.iter().enumerate() {
        for (q, x) in row.iter().enumerate() {
            let target = if p == q { -1.0 } else { 0.0 };
            s += (x - target).powi(2);
        }
    }
    s.sqrt()
}

/// The associated metric `g(u, v) = κ(v, Iu)`, so that `κ = g(I·, ·)`.
pub fn metric(s: &SU2AtPoint) -> Result<Real4, ChartError> {
    let i = complex_structure_from(&s.psi)?;
    let k: Real4 = s.kappa.m.map(|row| row.map(|c| c.re));
    let ki = mat_mul(&k, &i);
    let mut g = [[0.0; 4]; 4];
    for (a, row) in g.iter_mut().enumerate() {
        for (b, x) in row.iter_mut().enumerate() {
            *x = 0.5 * (ki[b][a] + ki[a][b]);
        }
    }
    Ok(g)
}

fn levi_civita(idx: [usize; 4]) -> f64 {
    let mut sign = 1.0;
    let v = idx;
    for a in 0..4 {
        for b in (a + 1)..4 {
            if v[a] == v[b] {
                return 0.0;
            }
            if v[a] > v[b] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Hodge star of a 2-form for the metric `g`, with orientation `e⁰¹²³`.
pub fn hodge_star(form: &Form2, g: &Real4) -> Result<Form2, ChartError> {
    let gm = Matrix4::from_fn(|a, b| g[a][b]);
    let det = gm.determinant();
    if det <= 0.0 {
        return Err(ChartError::DegenerateStructure(format!(
            "metric determinant {det:e} is not positive"
        )));
    }
    let gi = gm
        .try_inverse()
        .ok_or_else(|| ChartError::DegenerateStructure("metric is singular".into()))?;
    let mut raised = [[C64::new(0.0, 0.0); 4]; 4];
    for (k, row) in raised.iter_mut().enumerate() {
        for (l, x) in row.iter_mut().enumerate() {
            for p in 0..4 {
                for q in 0..4 {
                    *x += form.m[p][q] * (gi[(k, p)] * gi[(q, l)]);
                }
            }
        }
    }
    let vol = det.sqrt();
    let mut out = Form2::zero();
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = C64::new(0.0, 0.0);
            for (k, row) in raised.iter().enumerate() {
                for (l, x) in row.iter().enumerate() {
                    acc += x * levi_civita([k, l, i, j]);
                }
            }
            out.m[i][j] = acc * (0.5 * vol);
        }
    }
    Ok(out)
}

/// Splits a 2-form into its self-dual and anti-self-dual parts for the
/// metric of `structure`.
pub fn sd_asd_split(form: &Form2, structure: &SU2AtPoint) -> Result<(Form2, Form2), ChartError> {
    let g = metric(structure)?;
    let star = hodge_star(form, &g)?;
    Ok(((*form + star) * 0.5, (*form - star) * 0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_model_is_an_su2_structure() {
        let r = SU2AtPoint::flat().residuals();
        assert!(r.max_violation() < 1e-14, "{r:?}");
        assert!((r.psi_psibar - 4.0).abs() < 1e-14);
        assert!((r.metric_min_eigenvalue - 1.0).abs() < 1e-12);
    }

    #[test]
    fn standard_complex_structure() {
        let i = complex_structure_from(&SU2AtPoint::flat().psi).unwrap();
        let expected = [
            [0.0, -1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
            [0.0, 0.0, 1.0, 0.0],
        ];
        for p in 0..4 {
            for q in 0..4 {
                assert!((i[p][q] - expected[p][q]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn non_decomposable_form_is_degenerate() {
        let f = Form2::basis(0, 1) + Form2::basis(2, 3);
        assert!(matches!(
            complex_structure_from(&f),
            Err(ChartError::DegenerateStructure(_))
        ));
    }

    #[test]
    fn flat_hodge_star() {
        let g = metric(&SU2AtPoint::flat()).unwrap();
        let s = hodge_star(&Form2::basis(0, 1), &g).unwrap();
        assert!((s - Form2::basis(2, 3)).max_abs() < 1e-14);
        let s = hodge_star(&Form2::basis(0, 2), &g).unwrap();
        assert!((s + Form2::basis(1, 3)).max_abs() < 1e-14);
    }

    #[test]
    fn primitive_form_is_anti_self_dual() {
        let flat = SU2AtPoint::flat();
        let eta = Form2::basis(0, 1) - Form2::basis(2, 3);
        let (sd, asd) = sd_asd_split(&eta, &flat).unwrap();
        assert!(sd.max_abs() < 1e-14);
        assert!((asd - eta).max_abs() < 1e-14);
        let (sd, asd) = sd_asd_split(&flat.kappa, &flat).unwrap();
        assert!((sd - flat.kappa).max_abs() < 1e-14);
        assert!(asd.max_abs() < 1e-14);
    }
}
