//! Exact line-bundle class arithmetic on double curves.
//!
//! A double curve is either rational (genus 0) or elliptic (genus 1). On a
//! rational curve a line bundle is determined by its degree. On an elliptic
//! curve `C = ℂ/Λ` with `Λ = ℤ + ℤτ`, the Abel–Jacobi map identifies
//! `Pic(C)` with `ℤ × C/Λ`: a class is a degree together with the point of
//! the Jacobian obtained by summing the divisor's points in the group law.
//! Points of `C/Λ` are stored as exact rational pairs `(a, b)` standing for
//! `a + bτ`, reduced to the fundamental domain `[0, 1)²`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::{GaussRational, Rational};

/// Errors raised by line-bundle arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PicError {
    /// The two classes live on curves with different geometry.
    #[error("line-bundle classes live on curves of different geometry")]
    MixedGeometry,
    /// The requested map does not preserve the period lattice.
    #[error("scalar {0} does not induce an automorphism of the period lattice")]
    NotAnAutomorphism(String),
    /// A point was given in a form that does not match the curve's genus.
    #[error("point {0} does not lie on a curve of genus {1}")]
    PointNotOnCurve(String, u8),
    /// The period `τ` of an elliptic curve must have nonzero imaginary part.
    #[error("elliptic curve period must have nonzero imaginary part")]
    DegenerateLattice,
}

/// Reduces a rational number into `[0, 1)`.
fn reduce_unit(r: Rational) -> Rational {
    r - r.floor()
}

/// Geometry of a double curve: a rational curve or an elliptic curve with an
/// explicit period lattice `ℤ + ℤτ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CurveGeometry {
    /// A smooth rational curve (genus 0).
    Rational,
    /// An elliptic curve `ℂ/(ℤ + ℤτ)`.
    Elliptic {
        /// The second period, with `Im τ ≠ 0`.
        tau: GaussRational,
    },
}

impl CurveGeometry {
    /// Builds an elliptic geometry, rejecting degenerate periods.
    pub fn elliptic(tau: GaussRational) -> Result<Self, PicError> {
        if tau.im.is_zero() {
            return Err(PicError::DegenerateLattice);
        }
        Ok(Self::Elliptic { tau })
    }

    /// The square lattice `ℤ + ℤi`.
    pub fn square_lattice() -> Self {
        Self::Elliptic {
            tau: GaussRational::new(Rational::zero(), Rational::one()),
        }
    }

    /// Genus of the curve, 0 or 1.
    pub fn genus(&self) -> u8 {
        match self {
            Self::Rational => 0,
            Self::Elliptic { .. } => 1,
        }
    }

    /// The period `τ` for elliptic curves.
    pub fn tau(&self) -> Option<GaussRational> {
        match self {
            Self::Rational => None,
            Self::Elliptic { tau } => Some(*tau),
        }
    }

    /// Topological Euler characteristic of the curve.
    pub fn euler_char(&self) -> i64 {
        match self {
            Self::Rational => 2,
            Self::Elliptic { .. } => 0,
        }
    }
}

/// A point `a + bτ` of `ℂ/Λ`, stored reduced to `[0, 1)²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    a: Rational,
    b: Rational,
}

impl LatticePoint {
    /// Builds the point `a + bτ` and reduces it modulo the lattice.
    pub fn new(a: Rational, b: Rational) -> Self {
        Self {
            a: reduce_unit(a),
            b: reduce_unit(b),
        }
    }

    /// Convenience constructor from numerator/denominator pairs.
    pub fn from_ratios(a: (i64, i64), b: (i64, i64)) -> Self {
        Self::new(Rational::new(a.0, a.1), Rational::new(b.0, b.1))
    }

    /// The group identity.
    pub fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    /// Coefficient of `1`.
    pub fn a(&self) -> Rational {
        self.a
    }

    /// Coefficient of `τ`.
    pub fn b(&self) -> Rational {
        self.b
    }

    /// Whether this is the group identity.
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Multiplies the point by an integer in the group law.
    pub fn scale(self, n: i64) -> Self {
        let n = Rational::from_integer(n);
        Self::new(self.a * n, self.b * n)
    }

    /// The four solutions `x` of `2x = self`.
    pub fn halves(self) -> [Self; 4] {
        let two = Rational::from_integer(2);
        let half = Rational::new(1, 2);
        let (a, b) = (self.a / two, self.b / two);
        [
            Self::new(a, b),
            Self::new(a + half, b),
            Self::new(a, b + half),
            Self::new(a + half, b + half),
        ]
    }
}

impl Add for LatticePoint {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Neg for LatticePoint {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl Sub for LatticePoint {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// A marked point on a double curve.
///
/// Points on rational curves are opaque labels, optionally carrying an exact
/// coordinate for documentation. Two labelled points coincide exactly when
/// their labels agree. Points on elliptic curves are lattice points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    /// A labelled point on a rational curve.
    Label {
        /// Identifying label.
        name: String,
        /// Optional exact affine coordinate.
        coord: Option<GaussRational>,
    },
    /// A point on an elliptic curve.
    Lattice(LatticePoint),
}

impl CurvePoint {
    /// A labelled point without coordinate.
    pub fn label(name: impl Into<String>) -> Self {
        Self::Label {
            name: name.into(),
            coord: None,
        }
    }

    /// A lattice point `a + bτ`.
    pub fn lattice(p: LatticePoint) -> Self {
        Self::Lattice(p)
    }

    /// Whether two points denote the same point of the curve.
    pub fn coincides(&self, other: &Self) -> bool {
        match (self, other) {
            (Self::Label { name: x, .. }, Self::Label { name: y, .. }) => x == y,
            (Self::Lattice(p), Self::Lattice(q)) => p == q,
            _ => false,
        }
    }

    /// Whether the point's representation matches the curve's genus.
    pub fn fits(&self, geometry: &CurveGeometry) -> bool {
        matches!(
            (self, geometry),
            (Self::Label { .. }, CurveGeometry::Rational)
                | (Self::Lattice(_), CurveGeometry::Elliptic { .. })
        )
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Label { name, .. } => write!(f, "{name}"),
            Self::Lattice(p) => write!(f, "{p}"),
        }
    }
}

/// Isomorphism class of a line bundle on a double curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineBundleClass {
    geometry: CurveGeometry,
    degree: i64,
    point: Option<LatticePoint>,
}

impl LineBundleClass {
    /// Builds a class, checking that the Jacobian point is present exactly
    /// on elliptic curves.
    pub fn new(
        geometry: CurveGeometry,
        degree: i64,
        point: Option<LatticePoint>,
    ) -> Result<Self, PicError> {
        match (&geometry, point) {
            (CurveGeometry::Rational, None) | (CurveGeometry::Elliptic { .. }, Some(_)) => {
                Ok(Self {
                    geometry,
                    degree,
                    point,
                })
            }
            (CurveGeometry::Rational, Some(p)) => Err(PicError::PointNotOnCurve(p.to_string(), 0)),
            (CurveGeometry::Elliptic { .. }, None) => {
                Err(PicError::PointNotOnCurve("(missing)".into(), 1))
            }
        }
    }

    /// The class of degree `degree` whose Jacobian point (if any) is zero.
    pub fn of_degree(geometry: CurveGeometry, degree: i64) -> Self {
        let point = match geometry {
            CurveGeometry::Rational => None,
            CurveGeometry::Elliptic { .. } => Some(LatticePoint::zero()),
        };
        Self {
            geometry,
            degree,
            point,
        }
    }

    /// The trivial class on a curve.
    pub fn trivial(geometry: CurveGeometry) -> Self {
        Self::of_degree(geometry, 0)
    }

    /// Geometry of the underlying curve.
    pub fn geometry(&self) -> &CurveGeometry {
        &self.geometry
    }

    /// Degree of the class.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Abel–Jacobi point, present on elliptic curves only.
    pub fn jacobian_point(&self) -> Option<LatticePoint> {
        self.point
    }

    /// The inverse class.
    pub fn inverse(&self) -> Self {
        Self {
            geometry: self.geometry.clone(),
            degree: -self.degree,
            point: self.point.map(|p| -p),
        }
    }
}

impl fmt::Display for LineBundleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.point {
            None => write!(f, "O({})", self.degree),
            Some(p) => write!(f, "O({}; {})", self.degree, p),
        }
    }
}

/// Serialized view of a class used by reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassSummary {
    /// Degree of the class.
    pub degree: i64,
    /// Jacobian point as `["a", "b"]`, absent on rational curves.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jacobian_point: Option<[String; 2]>,
    /// Whether the class is trivial.
    pub trivial: bool,
}

impl From<&LineBundleClass> for ClassSummary {
    fn from(c: &LineBundleClass) -> Self {
        Self {
            degree: c.degree,
            jacobian_point: c.point.map(|p| [p.a.to_string(), p.b.to_string()]),
            trivial: is_trivial(c),
        }
    }
}

/// Tensor product of two classes on the same curve.
pub fn tensor(a: &LineBundleClass, b: &LineBundleClass) -> Result<LineBundleClass, PicError> {
    if a.geometry != b.geometry {
        return Err(PicError::MixedGeometry);
    }
    let point = match (a.point, b.point) {
        (Some(p), Some(q)) => Some(p + q),
        _ => None,
    };
    Ok(LineBundleClass {
        geometry: a.geometry.clone(),
        degree: a.degree + b.degree,
        point,
    })
}

/// Whether a class is the trivial class.
pub fn is_trivial(c: &LineBundleClass) -> bool {
    c.degree == 0 && c.point.is_none_or(|p| p.is_zero())
}

/// Class of the divisor consisting of the single point `p`.
pub fn point_class(geometry: &CurveGeometry, p: &CurvePoint) -> Result<LineBundleClass, PicError> {
    match (geometry, p) {
        (CurveGeometry::Rational, CurvePoint::Label { .. }) => {
            Ok(LineBundleClass::of_degree(geometry.clone(), 1))
        }
        (CurveGeometry::Elliptic { .. }, CurvePoint::Lattice(q)) => Ok(LineBundleClass {
            geometry: geometry.clone(),
            degree: 1,
            point: Some(*q),
        }),
        _ => Err(PicError::PointNotOnCurve(p.to_string(), geometry.genus())),
    }
}

/// Writes a complex number in the basis `(1, τ)`, returning the coefficients.
fn in_lattice_basis(w: GaussRational, tau: GaussRational) -> (Rational, Rational) {
    let q = w.im / tau.im;
    let p = w.re - q * tau.re;
    (p, q)
}

/// Automorphism of an elliptic curve fixing the origin, `z ↦ u z`, written
/// as an integer matrix acting on lattice coordinates `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeAutomorphism {
    m: [[i64; 2]; 2],
}

impl LatticeAutomorphism {
    /// The identity map.
    pub fn identity() -> Self {
        Self {
            m: [[1, 0], [0, 1]],
        }
    }

    /// The automorphism `z ↦ u z` of `ℂ/(ℤ + ℤτ)`.
    ///
    /// Fails unless `uΛ = Λ`, i.e. both `u` and `uτ` have integer
    /// coordinates in the basis `(1, τ)` and the resulting matrix is
    /// unimodular.
    pub fn from_scalar(u: GaussRational, tau: GaussRational) -> Result<Self, PicError> {
        if tau.im.is_zero() {
            return Err(PicError::DegenerateLattice);
        }
        let (p1, q1) = in_lattice_basis(u, tau);
        let (p2, q2) = in_lattice_basis(u * tau, tau);
        let entries = [p1, p2, q1, q2];
        if entries.iter().any(|r| !r.is_integer()) {
            return Err(PicError::NotAnAutomorphism(format_gauss(u)));
        }
        let m = [
            [p1.to_integer(), p2.to_integer()],
            [q1.to_integer(), q2.to_integer()],
        ];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det.abs() != 1 {
            return Err(PicError::NotAnAutomorphism(format_gauss(u)));
        }
        Ok(Self { m })
    }

    /// Integer matrix acting on `(a, b)`.
    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.m
    }

    /// Image of a lattice point.
    pub fn apply(&self, p: LatticePoint) -> LatticePoint {
        let [[m00, m01], [m10, m11]] = self.m;
        let r = Rational::from_integer;
        LatticePoint::new(r(m00) * p.a + r(m01) * p.b, r(m10) * p.a + r(m11) * p.b)
    }

    /// The inverse automorphism.
    pub fn inverse(&self) -> Self {
        let [[a, b], [c, d]] = self.m;
        let det = a * d - b * c;
        // det is ±1, so dividing by it is multiplying by it.
        Self {
            m: [[d * det, -b * det], [-c * det, a * det]],
        }
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let a = self.m;
        let b = other.m;
        let mut m = [[0; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self { m }
    }
}

/// Formats a Gaussian rational as `re+im i` for diagnostics.
pub fn format_gauss(z: GaussRational) -> String {
    if z.im.is_zero() {
        z.re.to_string()
    } else if z.re.is_zero() {
        format!("{}i", z.im)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

/// Pushes a class forward along `z ↦ u z`.
///
/// On rational curves the degree is the whole class, so the class is
/// returned unchanged. On elliptic curves the Jacobian point is mapped by the
/// induced lattice automorphism.
pub fn apply_twist(c: &LineBundleClass, u: GaussRational) -> Result<LineBundleClass, PicError> {
    match c.geometry {
        CurveGeometry::Rational => Ok(c.clone()),
        CurveGeometry::Elliptic { tau } => {
            let aut = LatticeAutomorphism::from_scalar(u, tau)?;
            Ok(apply_automorphism(c, &aut))
        }
    }
}

/// Pushes a class forward along a lattice automorphism.
pub fn apply_automorphism(c: &LineBundleClass, aut: &LatticeAutomorphism) -> LineBundleClass {
    LineBundleClass {
        geometry: c.geometry.clone(),
        degree: c.degree,
        point: c.point.map(|p| aut.apply(p)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{gauss, i_pow};

    fn ell() -> CurveGeometry {
        CurveGeometry::square_lattice()
    }

    fn cls(deg: i64, a: (i64, i64), b: (i64, i64)) -> LineBundleClass {
        LineBundleClass::new(ell(), deg, Some(LatticePoint::from_ratios(a, b))).unwrap()
    }

    #[test]
    fn inverse_pair_tensors_to_trivial() {
        let x = cls(3, (1, 2), (0, 1));
        let y = cls(-3, (1, 2), (0, 1));
        let t = tensor(&x, &y).unwrap();
        assert!(is_trivial(&t));
        assert_eq!(t.jacobian_point(), Some(LatticePoint::zero()));
    }

    #[test]
    fn rational_degrees_add() {
        let g = CurveGeometry::Rational;
        let one = LineBundleClass::of_degree(g.clone(), 1);
        let two = LineBundleClass::of_degree(g, 2);
        let t = tensor(&tensor(&one, &one).unwrap(), &two).unwrap();
        assert_eq!(t.degree(), 4);
        assert!(!is_trivial(&t));
    }

    #[test]
    fn thirds_add_to_zero() {
        let t = tensor(&cls(1, (1, 3), (0, 1)), &cls(0, (2, 3), (0, 1))).unwrap();
        assert_eq!(t.degree(), 1);
        assert_eq!(t.jacobian_point(), Some(LatticePoint::zero()));
    }

    #[test]
    fn triviality_needs_zero_point() {
        assert!(is_trivial(&cls(0, (0, 1), (0, 1))));
        assert!(!is_trivial(&cls(0, (1, 2), (0, 1))));
    }

    #[test]
    fn point_classes() {
        let p = CurvePoint::lattice(LatticePoint::from_ratios((1, 4), (1, 4)));
        let c = point_class(&ell(), &p).unwrap();
        assert_eq!(c.degree(), 1);
        assert_eq!(
            c.jacobian_point(),
            Some(LatticePoint::from_ratios((1, 4), (1, 4)))
        );
        let q = point_class(&CurveGeometry::Rational, &CurvePoint::label("q")).unwrap();
        assert_eq!(q.degree(), 1);
        assert!(point_class(&CurveGeometry::Rational, &p).is_err());
    }

    #[test]
    fn mixed_geometry_is_rejected() {
        let r = LineBundleClass::of_degree(CurveGeometry::Rational, 1);
        assert_eq!(
            tensor(&r, &cls(1, (0, 1), (0, 1))),
            Err(PicError::MixedGeometry)
        );
        let other =
            CurveGeometry::elliptic(GaussRational::new(Rational::new(1, 2), Rational::new(1, 1)))
                .unwrap();
        let e = LineBundleClass::of_degree(other, 0);
        assert_eq!(
            tensor(&e, &cls(1, (0, 1), (0, 1))),
            Err(PicError::MixedGeometry)
        );
    }

    #[test]
    fn multiplication_by_i_rotates_coordinates() {
        let c = cls(2, (1, 2), (0, 1));
        let t = apply_twist(&c, gauss(0, 1)).unwrap();
        assert_eq!(
            t.jacobian_point(),
            Some(LatticePoint::from_ratios((0, 1), (1, 2)))
        );
        assert_eq!(t.degree(), 2);
        let general = cls(0, (1, 3), (1, 5));
        let rotated = apply_twist(&general, gauss(0, 1)).unwrap();
        // (a, b) ↦ (−b, a)
        assert_eq!(
            rotated.jacobian_point(),
            Some(LatticePoint::from_ratios((-1, 5), (1, 3)))
        );
    }

    #[test]
    fn identity_and_negation_twists() {
        let c = cls(1, (1, 7), (2, 7));
        assert_eq!(apply_twist(&c, gauss(1, 0)).unwrap(), c);
        let h = cls(0, (1, 2), (1, 2));
        assert_eq!(apply_twist(&h, gauss(-1, 0)).unwrap(), h);
    }

    #[test]
    fn non_automorphisms_are_rejected() {
        let c = cls(0, (1, 2), (0, 1));
        assert!(matches!(
            apply_twist(&c, gauss(2, 0)),
            Err(PicError::NotAnAutomorphism(_))
        ));
        let tau = GaussRational::new(Rational::new(1, 2), Rational::new(2, 1));
        let rect = LineBundleClass::of_degree(CurveGeometry::elliptic(tau).unwrap(), 0);
        assert!(matches!(
            apply_twist(&rect, gauss(0, 1)),
            Err(PicError::NotAnAutomorphism(_))
        ));
    }

    #[test]
    fn automorphism_inverse_and_powers() {
        let i = LatticeAutomorphism::from_scalar(gauss(0, 1), gauss(0, 1)).unwrap();
        assert_eq!(i.compose(&i.inverse()), LatticeAutomorphism::identity());
        let mut acc = LatticeAutomorphism::identity();
        for k in 0..8 {
            assert_eq!(
                acc,
                LatticeAutomorphism::from_scalar(i_pow(k), gauss(0, 1)).unwrap()
            );
            acc = i.compose(&acc);
        }
    }

    #[test]
    fn halves_double_back() {
        let p = LatticePoint::from_ratios((1, 3), (3, 5));
        for h in p.halves() {
            assert_eq!(h + h, p);
        }
    }

    #[test]
    fn degenerate_lattice_rejected() {
        assert_eq!(
            CurveGeometry::elliptic(gauss(2, 0)),
            Err(PicError::DegenerateLattice)
        );
    }
}
