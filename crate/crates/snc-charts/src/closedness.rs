//! Finite-difference exterior derivative of 2-form fields on charts.

use serde::Serialize;

use crate::charts::{self, Sign};
use crate::forms::{from_real, Form2, OneForm, C64};
use crate::ChartError;

/// A 2-form field on a chart, evaluated at real coordinates
/// `(Re x, Im x, Re y, Im y)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum FormField {
    /// Volume form of a double chart.
    DoubleOmega {
        /// Sign of the volume form.
        eps: Sign,
    },
    /// Kähler form of a double chart.
    DoubleKappa,
    /// Volume form of a triple chart.
    TripleOmega {
        /// Sign of the volume form.
        sigma: Sign,
    },
    /// Kähler form of a triple chart.
    TripleKappa,
    /// Volume form of the model fiber in the chart omitting `u^i`.
    C3Omega {
        /// Omitted coordinate.
        i: usize,
        /// Fiber parameter `(Re ζ, Im ζ)`.
        zeta: (f64, f64),
        /// Sign of the volume form.
        sigma123: Sign,
    },
    /// `Im(y) dx∧dy`, which is not closed.
    NonClosedProbe,
}

impl FormField {
    /// Evaluates the field at a point.
    pub fn eval(&self, p: [f64; 4]) -> Result<Form2, ChartError> {
        let (x, y) = from_real(p);
        match *self {
            Self::DoubleOmega { eps } => Ok(charts::eval_su2_double(x, y, eps)?.psi),
            Self::DoubleKappa => Ok(charts::eval_su2_double(x, y, Sign::Plus)?.kappa),
            Self::TripleOmega { sigma } => Ok(charts::eval_su2_triple(x, y, sigma)?.psi),
            Self::TripleKappa => Ok(charts::eval_su2_triple(x, y, Sign::Plus)?.kappa),
            Self::C3Omega { i, zeta, sigma123 } => {
                Ok(charts::eval_c3_model(i, C64::new(zeta.0, zeta.1), x, y, sigma123)?.psi)
            }
            Self::NonClosedProbe => Ok(Form2::wedge1(&OneForm::dz(0), &OneForm::dz(1)) * y.im),
        }
    }

    /// Distance from a point to the boundary of the field's domain.
    pub fn margin(&self, p: [f64; 4]) -> f64 {
        let (x, y) = from_real(p);
        match self {
            Self::DoubleOmega { .. } | Self::DoubleKappa => y.norm(),
            Self::TripleOmega { .. } | Self::TripleKappa | Self::C3Omega { .. } => {
                x.norm().min(y.norm())
            }
            Self::NonClosedProbe => f64::INFINITY,
        }
    }
}

/// Largest coefficient of `dA` at a point, computed by central differences
/// with step `h_step`.
///
/// With `∂_a A_bc` the partial derivatives, the 3-form coefficients are
/// `(dA)_abc = ∂_a A_bc − ∂_b A_ac + ∂_c A_ab` for `a < b < c`.
pub fn numerical_d(field: &FormField, point: [f64; 4], h_step: f64) -> Result<f64, ChartError> {
    if !(h_step > 0.0) {
        return Err(ChartError::DomainError(format!(
            "step {h_step} must be positive"
        )));
    }
    let margin = field.margin(point);
    if margin < 2.0 * h_step {
        return Err(ChartError::DomainError(format!(
            "point lies within {margin:e} of the chart boundary, below twice the step {h_step:e}"
        )));
    }
    let mut partial = [Form2::zero(); 4];
    for (a, slot) in partial.iter_mut().enumerate() {
        let mut plus = point;
        let mut minus = point;
        plus[a] += h_step;
        minus[a] -= h_step;
        *slot = (field.eval(plus)? - field.eval(minus)?) * (0.5 / h_step);
    }
    let mut worst: f64 = 0.0;
    for a in 0..4 {
        for b in (a + 1)..4 {
            for c in (b + 1)..4 {
                let v = partial[a].m[b][c] - partial[b].m[a][c] + partial[c].m[a][b];
                worst = worst.max(v.norm());
            }
        }
    }
    Ok(worst)
}
