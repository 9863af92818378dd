//! Combinatorial and algebraic model of simple normal crossing (SNC) complex
//! surfaces, together with the checks that decide whether such a surface can
//! be smoothed to a surface with trivial canonical bundle.
//!
//! The crate is organised bottom-up:
//!
//! * [`pic`] holds exact line-bundle class arithmetic on the double curves
//!   (degree on rational curves, degree plus an Abel–Jacobi point on elliptic
//!   curves).
//! * [`model`] holds the declarative surface description and its structural
//!   validation.
//! * [`blowup`] applies point blow-ups along double curves, detects marked
//!   point mismatches and plans blow-ups that trivialize normal classes.
//! * [`checks`] evaluates d-semistability, the anticanonical condition and
//!   residue matching through the residue matrix ρ.
//! * [`report`] computes the Euler number of the smoothed fiber, classifies it
//!   and assembles every verdict into a [`report::SmoothingReport`].
//!
//! All arithmetic in this crate is exact. Rationals are `i64` ratios and
//! Gaussian rationals are complex numbers over them.

pub mod blowup;
pub mod checks;
pub mod model;
pub mod pic;
pub mod report;

/// Exact rational number used throughout the crate.
pub type Rational = num_rational::Rational64;

/// Exact complex number with rational real and imaginary parts.
pub type GaussRational = num_complex::Complex<Rational>;

/// Builds a Gaussian rational from integer real and imaginary parts.
pub fn gauss(re: i64, im: i64) -> GaussRational {
    GaussRational::new(Rational::from_integer(re), Rational::from_integer(im))
}

/// Returns `i^k` as an exact Gaussian rational.
pub fn i_pow(k: i64) -> GaussRational {
    match k.rem_euclid(4) {
        0 => gauss(1, 0),
        1 => gauss(0, 1),
        2 => gauss(-1, 0),
        _ => gauss(0, -1),
    }
}

pub use blowup::{BlowupMode, BlowupPlan, BlowupStep};
pub use model::{Component, ComponentKind, DoubleCurve, Side, SncSurface, TripleMark, TriplePoint};
pub use pic::{CurveGeometry, CurvePoint, LatticePoint, LineBundleClass};
pub use report::{Classification, SmoothingReport};
