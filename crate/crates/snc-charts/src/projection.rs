//! Projection of a nearby pair `(ψ, κ)` onto the set of SU(2)-structures.
//!
//! The pair is flattened to a vector `x ∈ ℝ¹⁸` (six complex coefficients of
//! `ψ`, six real coefficients of `κ`). The constraint map `r: ℝ¹⁸ → ℝ⁵`
//! collects the real and imaginary parts of `ψ∧ψ` and `ψ∧κ` together with
//! `2κ∧κ − ψ∧ψ̄`. The projector returns the point of `r = 0` closest to the
//! input in the coefficient norm, found by a damped Gauss–Newton iteration on
//! the linearized minimum-norm problem.

use nalgebra::{SMatrix, SVector};

use crate::forms::{Form2, C64};
use crate::su2::SU2AtPoint;
use crate::ChartError;

/// Iteration cap of the projector.
pub const MAX_ITERATIONS: usize = 200;
/// Residual the projector must reach.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

type Vec18 = SVector<f64, 18>;
type Vec5 = SVector<f64, 5>;
type Jac = SMatrix<f64, 5, 18>;

fn flatten(s: &SU2AtPoint) -> Vec18 {
    let mut x = Vec18::zeros();
    for (k, c) in s.psi.upper().iter().enumerate() {
        x[2 * k] = c.re;
        x[2 * k + 1] = c.im;
    }
    for (k, c) in s.kappa.upper().iter().enumerate() {
        x[12 + k] = c.re;
    }
    x
}

fn unflatten(x: &Vec18) -> SU2AtPoint {
    let psi = Form2::from_upper(std::array::from_fn(|k| C64::new(x[2 * k], x[2 * k + 1])));
    let kappa = Form2::from_upper(std::array::from_fn(|k| C64::new(x[12 + k], 0.0)));
    SU2AtPoint { psi, kappa }
}

fn residual(s: &SU2AtPoint) -> Vec5 {
    let pp = s.psi.wedge(&s.psi);
    let pk = s.psi.wedge(&s.kappa);
    let ppb = s.psi.wedge(&s.psi.conj());
    let kk = s.kappa.wedge(&s.kappa);
    Vec5::new(pp.re, pp.im, pk.re, pk.im, 2.0 * kk.re - ppb.re)
}

fn jacobian(s: &SU2AtPoint) -> Jac {
    let mut j = Jac::zeros();
    for (k, &(p, q)) in crate::forms::PAIRS.iter().enumerate() {
        let e = Form2::basis(p, q);
        let w_psi = s.psi.wedge(&e);
        let w_kappa = s.kappa.wedge(&e);
        // Derivatives along the real part of the ψ coefficient.
        let d_re = [2.0 * w_psi, w_kappa];
        // Along the imaginary part, the same directions times i.
        let d_im = [2.0 * w_psi * C64::i(), w_kappa * C64::i()];
        j[(0, 2 * k)] = d_re[0].re;
        j[(1, 2 * k)] = d_re[0].im;
        j[(2, 2 * k)] = d_re[1].re;
        j[(3, 2 * k)] = d_re[1].im;
        j[(4, 2 * k)] = -2.0 * w_psi.re;
        j[(0, 2 * k + 1)] = d_im[0].re;
        j[(1, 2 * k + 1)] = d_im[0].im;
        j[(2, 2 * k + 1)] = d_im[1].re;
        j[(3, 2 * k + 1)] = d_im[1].im;
        j[(4, 2 * k + 1)] = -2.0 * w_psi.im;
        // Derivatives along the κ coefficient.
        j[(2, 12 + k)] = w_psi.re;
        j[(3, 12 + k)] = w_psi.im;
        j[(4, 12 + k)] = 4.0 * w_kappa.re;
    }
    j
}

/// Largest absolute constraint residual of a pair.
pub fn constraint_residual(s: &SU2AtPoint) -> f64 {
    residual(s).amax()
}

/// Projects a pair onto the nearest SU(2)-structure.
///
/// The real part of `κ` is used and its imaginary part is discarded. Fails
/// with [`ChartError::NoConvergence`] when the residual does not drop below
/// [`RESIDUAL_TOLERANCE`] within [`MAX_ITERATIONS`] steps, and with
/// [`ChartError::DegenerateStructure`] when the constraints lose rank.
pub fn project_theta(psi_pert: &Form2, kappa_pert: &Form2) -> Result<SU2AtPoint, ChartError> {
    let start = SU2AtPoint {
        psi: *psi_pert,
        kappa: kappa_pert.re(),
    };
    let x0 = flatten(&start);
    let mut x = x0;
    let mut r = residual(&start);
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        let s = unflatten(&x);
        let j = jacobian(&s);
        let rhs = -r - j * (x0 - x);
        let jjt = j * j.transpose();
        let mu = jjt.lu().solve(&rhs).ok_or_else(|| {
            ChartError::DegenerateStructure("constraint Jacobian lost rank".into())
        })?;
        let target = x0 + j.transpose() * mu;
        let step = target - x;
        // Backtrack while the full step increases the residual.
        let mut alpha = 1.0;
        let mut next = target;
        let mut r_next = residual(&unflatten(&next));
        while r_next.amax() > r.amax() && alpha > 1e-6 {
            alpha *= 0.5;
            next = x + step * alpha;
            r_next = residual(&unflatten(&next));
        }
        let moved = (next - x).amax();
        x = next;
        r = r_next;
        iterations += 1;
        if r.amax() < 1e-15 * (1.0 + x.amax().powi(2)) || moved < 1e-16 * (1.0 + x.amax()) {
            break;
        }
    }
    let res = r.amax();
    if res < RESIDUAL_TOLERANCE {
        Ok(unflatten(&x))
    } else {
        Err(ChartError::NoConvergence {
            iterations,
            residual: res,
        })
    }
}

/// The defect of the projector: the coefficient distance between a pair and
/// its projection.
pub fn projection_defect(psi_pert: &Form2, kappa_pert: &Form2) -> Result<f64, ChartError> {
    let p = project_theta(psi_pert, kappa_pert)?;
    let start = SU2AtPoint {
        psi: *psi_pert,
        kappa: kappa_pert.re(),
    };
    Ok((flatten(&p) - flatten(&start)).norm())
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Perturbation sizes `t = 10^{-1}, 10^{-1.5}, …, 10^{-3}`.
pub fn perturbation_scales() -> [f64; 5] {
    [-1.0, -1.5, -2.0, -2.5, -3.0].map(|e: f64| 10f64.powf(e))
}

/// Log-log slope of the projection defect of `(ψ + tη, κ)` over
/// [`perturbation_scales`].
pub fn defect_slope(structure: &SU2AtPoint, eta: &Form2) -> Result<f64, ChartError> {
    let mut pts = Vec::new();
    for t in perturbation_scales() {
        let d = projection_defect(&(structure.psi + *eta * t), &structure.kappa)?;
        pts.push((t, d));
    }
    Ok(loglog_slope(&pts))
}
