//! Pointwise exterior algebra on a real four-dimensional tangent space.
//!
//! The real cotangent basis is `(e⁰, e¹, e², e³) = (dRe x, dIm x, dRe y,
//! dIm y)`. A complex 1-form is a vector of four complex coefficients and a
//! 2-form is an antisymmetric 4×4 complex matrix `A` with
//! `A = Σ_{p<q} A_pq e^p ∧ e^q`. The wedge of two 2-forms is reported as its
//! coefficient on the volume form `e⁰ ∧ e¹ ∧ e² ∧ e³`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// Complex scalar.
pub type C64 = Complex64;

/// Real 4×4 matrix, row-major.
pub type Real4 = [[f64; 4]; 4];

/// The imaginary unit.
pub const I: C64 = C64::new(0.0, 1.0);

/// A complex 1-form at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OneForm(pub [C64; 4]);

impl OneForm {
    /// The zero form.
    pub fn zero() -> Self {
        Self([C64::new(0.0, 0.0); 4])
    }

    /// `dz` for the holomorphic coordinate `k` (0 for `x`, 1 for `y`).
    pub fn dz(k: usize) -> Self {
        let mut v = [C64::new(0.0, 0.0); 4];
        v[2 * k] = C64::new(1.0, 0.0);
        v[2 * k + 1] = I;
        Self(v)
    }

    /// `dz̄` for the holomorphic coordinate `k`.
    pub fn dzbar(k: usize) -> Self {
        Self::dz(k).conj()
    }

    /// Holomorphic form `a dx + b dy`.
    pub fn holomorphic(a: C64, b: C64) -> Self {
        Self::dz(0) * a + Self::dz(1) * b
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        Self(self.0.map(|c| c.conj()))
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Pullback along a map with real Jacobian `j` (`j[p][q] = ∂F_p/∂x_q`).
    pub fn pullback(&self, j: &Real4) -> Self {
        let mut out = [C64::new(0.0, 0.0); 4];
        for (q, o) in out.iter_mut().enumerate() {
            for p in 0..4 {
                *o += self.0[p] * j[p][q];
            }
        }
        Self(out)
    }
}

impl Add for OneForm {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut v = self.0;
        for (a, b) in v.iter_mut().zip(rhs.0) {
            *a += b;
        }
        Self(v)
    }
}

impl Sub for OneForm {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for OneForm {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|c| -c))
    }
}

impl Mul<C64> for OneForm {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        Self(self.0.map(|c| c * rhs))
    }
}

impl Mul<f64> for OneForm {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self(self.0.map(|c| c * rhs))
    }
}

/// A complex 2-form at a point, as an antisymmetric coefficient matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Form2 {
    /// Coefficients; `m[p][q] = −m[q][p]`.
    pub m: [[C64; 4]; 4],
}

/// Index pairs `p < q` in lexicographic order.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl Form2 {
    /// The zero form.
    pub fn zero() -> Self {
        Self {
            m: [[C64::new(0.0, 0.0); 4]; 4],
        }
    }

    /// Builds a form from its six upper-triangular coefficients in
    /// [`PAIRS`] order.
    pub fn from_upper(c: [C64; 6]) -> Self {
        let mut f = Self::zero();
        for (k, &(p, q)) in PAIRS.iter().enumerate() {
            f.m[p][q] = c[k];
            f.m[q][p] = -c[k];
        }
        f
    }

    /// The six upper-triangular coefficients in [`PAIRS`] order.
    pub fn upper(&self) -> [C64; 6] {
        PAIRS.map(|(p, q)| self.m[p][q])
    }

    /// The basis form `e^p ∧ e^q`.
    pub fn basis(p: usize, q: usize) -> Self {
        let mut f = Self::zero();
        f.m[p][q] = C64::new(1.0, 0.0);
        f.m[q][p] = C64::new(-1.0, 0.0);
        f
    }

    /// `α ∧ β` for 1-forms.
    pub fn wedge1(a: &OneForm, b: &OneForm) -> Self {
        let mut f = Self::zero();
        for p in 0..4 {
            for q in 0..4 {
                f.m[p][q] = a.0[p] * b.0[q] - a.0[q] * b.0[p];
            }
        }
        f
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            m: self.m.map(|row| row.map(|c| c.conj())),
        }
    }

    /// Real part.
    pub fn re(&self) -> Self {
        Self {
            m: self.m.map(|row| row.map(|c| C64::new(c.re, 0.0))),
        }
    }

    /// Imaginary part.
    pub fn im(&self) -> Self {
        Self {
            m: self.m.map(|row| row.map(|c| C64::new(c.im, 0.0))),
        }
    }

    /// Coefficient of `e⁰¹²³` in `self ∧ other`.
    pub fn wedge(&self, other: &Self) -> C64 {
        let a = &self.m;
        let b = &other.m;
        a[0][1] * b[2][3] - a[0][2] * b[1][3] + a[0][3] * b[1][2] + a[1][2] * b[0][3]
            - a[1][3] * b[0][2]
            + a[2][3] * b[0][1]
    }

    /// Pullback along a map with real Jacobian `j`: `Jᵀ A J`.
    pub fn pullback(&self, j: &Real4) -> Self {
        let mut out = Self::zero();
        for q in 0..4 {
            for s in 0..4 {
                let mut acc = C64::new(0.0, 0.0);
                for p in 0..4 {
                    for r in 0..4 {
                        acc += self.m[p][r] * (j[p][q] * j[r][s]);
                    }
                }
                out.m[q][s] = acc;
            }
        }
        out
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Euclidean norm of the six independent coefficients.
    pub fn norm(&self) -> f64 {
        self.upper()
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest imaginary part, measuring how far the form is from real.
    pub fn imag_defect(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|c| c.im.abs())
            .fold(0.0, f64::max)
    }

    /// Largest violation of antisymmetry.
    pub fn antisymmetry_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for p in 0..4 {
            for q in 0..4 {
                d = d.max((self.m[p][q] + self.m[q][p]).norm());
            }
        }
        d
    }
}

impl Add for Form2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for p in 0..4 {
            for q in 0..4 {
                out.m[p][q] += rhs.m[p][q];
            }
        }
        out
    }
}

impl Sub for Form2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Form2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            m: self.m.map(|row| row.map(|c| -c)),
        }
    }
}

impl Mul<C64> for Form2 {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        Self {
            m: self.m.map(|row| row.map(|c| c * rhs)),
        }
    }
}

impl Mul<f64> for Form2 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self {
            m: self.m.map(|row| row.map(|c| c * rhs)),
        }
    }
}

/// Real 4×4 Jacobian of a holomorphic map `ℂ² → ℂ²` from its complex
/// Jacobian `c[a][b] = ∂w_a/∂z_b`.
pub fn real_jacobian(c: [[C64; 2]; 2]) -> Real4 {
    let mut j = [[0.0; 4]; 4];
    for a in 0..2 {
        for b in 0..2 {
            let z = c[a][b];
            j[2 * a][2 * b] = z.re;
            j[2 * a][2 * b + 1] = -z.im;
            j[2 * a + 1][2 * b] = z.im;
            j[2 * a + 1][2 * b + 1] = z.re;
        }
    }
    j
}

/// Splits a complex pair into the real coordinates `(Re x, Im x, Re y, Im y)`.
pub fn to_real(x: C64, y: C64) -> [f64; 4] {
    [x.re, x.im, y.re, y.im]
}

/// Inverse of [`to_real`].
pub fn from_real(p: [f64; 4]) -> (C64, C64) {
    (C64::new(p[0], p[1]), C64::new(p[2], p[3]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahler_form_of_a_coordinate_is_a_basis_form() {
        let w = Form2::wedge1(&OneForm::dz(0), &OneForm::dzbar(0)) * (I * 0.5);
        let e01 = Form2::basis(0, 1);
        assert!((w - e01).max_abs() < 1e-15);
    }

    #[test]
    fn flat_volume_normalization() {
        let psi = Form2::wedge1(&OneForm::dz(0), &OneForm::dz(1));
        assert!((psi.wedge(&psi.conj()) - C64::new(4.0, 0.0)).norm() < 1e-15);
        assert!(psi.wedge(&psi).norm() < 1e-15);
        let kappa = Form2::basis(0, 1) + Form2::basis(2, 3);
        assert!((kappa.wedge(&kappa) * 2.0 - C64::new(4.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn basis_wedges_follow_permutation_signs() {
        // e^{01}∧e^{23} = +vol, e^{02}∧e^{13} = −vol, e^{03}∧e^{12} = +vol.
        assert_eq!(Form2::basis(0, 1).wedge(&Form2::basis(2, 3)).re, 1.0);
        assert_eq!(Form2::basis(0, 2).wedge(&Form2::basis(1, 3)).re, -1.0);
        assert_eq!(Form2::basis(0, 3).wedge(&Form2::basis(1, 2)).re, 1.0);
        assert_eq!(Form2::basis(0, 1).wedge(&Form2::basis(0, 2)).re, 0.0);
    }

    #[test]
    fn identity_pullback_is_trivial() {
        let mut id = [[0.0; 4]; 4];
        for (k, row) in id.iter_mut().enumerate() {
            row[k] = 1.0;
        }
        let psi = Form2::wedge1(&OneForm::dz(0), &OneForm::dz(1));
        assert_eq!(psi.pullback(&id), psi);
    }

    #[test]
    fn real_jacobian_of_multiplication() {
        // w = (i x, y): multiplication by i rotates (Re x, Im x).
        let j = real_jacobian([
            [I, C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        ]);
        assert_eq!(j[0][1], -1.0);
        assert_eq!(j[1][0], 1.0);
        assert_eq!(j[2][2], 1.0);
    }
}
