//! Declarative data model of an SNC surface and its structural validation.
//!
//! A surface is a list of smooth components, a list of double curves (each
//! with exactly two sides) and a list of triple points. Components carry a
//! divisor-class basis, a canonical class and an Euler characteristic rather
//! than equations. Every check in this crate consumes only that data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::pic::{CurveGeometry, CurvePoint, LatticeAutomorphism, LineBundleClass};
use crate::GaussRational;

/// Errors raised by intersection-form queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    /// The component has no intersection form.
    #[error("component {0} has no intersection form")]
    UndefinedForm(String),
    /// A class vector has the wrong length for the component's basis.
    #[error(
        "class vector of length {got} does not match basis of length {expected} on {component}"
    )]
    ClassLength {
        /// Offending component.
        component: String,
        /// Basis length.
        expected: usize,
        /// Vector length.
        got: usize,
    },
}

/// Kind of a component, which fixes its intersection form and the data it
/// must carry before any blow-up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    /// The projective plane with hyperplane class `H`, `H² = 1`.
    ProjectivePlane,
    /// A smooth quadric `ℙ¹ × ℙ¹` with bidegree classes `A = (1,0)`, `B = (0,1)`.
    Quadric,
    /// The ruled surface `ℙ(O ⊕ L)` over an elliptic curve, with zero and
    /// infinity sections `D0`, `D∞` of self-intersection `degree` and
    /// `−degree`.
    RuledElliptic {
        /// Self-intersection of the zero section.
        degree: i64,
        /// The base curve.
        base: CurveGeometry,
    },
    /// Data taken at face value from a scenario, with an optional form on the
    /// non-exceptional part of the basis.
    Declared {
        /// Symmetric intersection matrix on the declared (pre-blow-up) basis.
        form: Option<Vec<Vec<i64>>>,
    },
}

impl ComponentKind {
    /// Short name used in reports and scenario files.
    pub fn name(&self) -> &'static str {
        match self {
            Self::ProjectivePlane => "projective_plane",
            Self::Quadric => "quadric",
            Self::RuledElliptic { .. } => "ruled_elliptic",
            Self::Declared { .. } => "declared",
        }
    }

    /// Basis, canonical class, Euler characteristic and form before blow-ups,
    /// for kinds that fix them.
    fn base_data(&self) -> Option<(Vec<&'static str>, Vec<i64>, i64, Vec<Vec<i64>>)> {
        match self {
            Self::ProjectivePlane => Some((vec!["H"], vec![-3], 3, vec![vec![1]])),
            Self::Quadric => Some((
                vec!["A", "B"],
                vec![-2, -2],
                4,
                vec![vec![0, 1], vec![1, 0]],
            )),
            Self::RuledElliptic { degree, .. } => Some((
                vec!["D0", "Dinf"],
                vec![-1, -1],
                0,
                vec![vec![*degree, 0], vec![0, -degree]],
            )),
            Self::Declared { .. } => None,
        }
    }
}

/// A smooth irreducible component of the surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Identifier, unique within the surface.
    pub id: String,
    /// Kind of the component.
    pub kind: ComponentKind,
    /// Names of the divisor-class basis elements; exceptional classes are
    /// appended at the end.
    pub class_basis: Vec<String>,
    /// Canonical class over `class_basis`.
    pub canonical_class: Vec<i64>,
    /// Topological Euler characteristic.
    pub euler_char: i64,
    /// Number of exceptional classes appended by blow-ups.
    pub blowup_count: usize,
}

impl Component {
    fn from_kind(id: impl Into<String>, kind: ComponentKind) -> Self {
        let (basis, canonical, euler, _) = kind.base_data().expect("built-in kind");
        Self {
            id: id.into(),
            kind,
            class_basis: basis.into_iter().map(String::from).collect(),
            canonical_class: canonical,
            euler_char: euler,
            blowup_count: 0,
        }
    }

    /// A projective plane.
    pub fn projective_plane(id: impl Into<String>) -> Self {
        Self::from_kind(id, ComponentKind::ProjectivePlane)
    }

    /// A smooth quadric surface.
    pub fn quadric(id: impl Into<String>) -> Self {
        Self::from_kind(id, ComponentKind::Quadric)
    }

    /// A ruled surface over an elliptic curve.
    pub fn ruled_elliptic(id: impl Into<String>, degree: i64, base: CurveGeometry) -> Self {
        Self::from_kind(id, ComponentKind::RuledElliptic { degree, base })
    }

    /// A component whose data is declared rather than derived from its kind.
    pub fn declared(
        id: impl Into<String>,
        class_basis: Vec<String>,
        canonical_class: Vec<i64>,
        euler_char: i64,
        form: Option<Vec<Vec<i64>>>,
    ) -> Self {
        Self {
            id: id.into(),
            kind: ComponentKind::Declared { form },
            class_basis,
            canonical_class,
            euler_char,
            blowup_count: 0,
        }
    }

    /// Number of basis classes that are not exceptional.
    pub fn base_rank(&self) -> usize {
        self.class_basis.len().saturating_sub(self.blowup_count)
    }

    /// The full intersection matrix over `class_basis`, when defined.
    pub fn intersection_form(&self) -> Option<Vec<Vec<i64>>> {
        let base = match &self.kind {
            ComponentKind::Declared { form } => form.clone()?,
            kind => kind.base_data()?.3,
        };
        let n = self.class_basis.len();
        let r = base.len();
        if r + self.blowup_count != n {
            return None;
        }
        let mut m = vec![vec![0; n]; n];
        for (i, row) in base.iter().enumerate() {
            if row.len() != r {
                return None;
            }
            m[i][..r].copy_from_slice(row);
        }
        for (k, row) in m.iter_mut().enumerate().skip(r) {
            row[k] = -1;
        }
        Some(m)
    }

    /// Intersection number of two classes.
    pub fn intersect(&self, a: &[i64], b: &[i64]) -> Result<i64, ModelError> {
        let form = self
            .intersection_form()
            .ok_or_else(|| ModelError::UndefinedForm(self.id.clone()))?;
        for v in [a, b] {
            if v.len() != form.len() {
                return Err(ModelError::ClassLength {
                    component: self.id.clone(),
                    expected: form.len(),
                    got: v.len(),
                });
            }
        }
        Ok(form
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().zip(b).map(|(m, y)| a[i] * m * y).sum::<i64>())
            .sum())
    }

    /// Whether canonical class and basis carry enough data for the
    /// anticanonical test.
    pub fn has_class_data(&self) -> bool {
        !self.class_basis.is_empty() && self.canonical_class.len() == self.class_basis.len()
    }
}

/// Self-intersection number of a class on a component.
pub fn self_intersection(component: &Component, class: &[i64]) -> Result<i64, ModelError> {
    component.intersect(class, class)
}

/// One side of a double curve: its embedding in a component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Side {
    /// Component containing this copy of the curve.
    pub component: String,
    /// Distinguishes the two copies when a component meets itself.
    pub label: Option<String>,
    /// Class of the curve in the component.
    pub curve_class: Vec<i64>,
    /// Normal bundle class of the curve in the component, in this side's own
    /// curve coordinate.
    pub normal_class: LineBundleClass,
}

/// A marked triple point on a double curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleMark {
    /// Triple point identifier.
    pub triple_point: String,
    /// Location on the curve, in the curve's reference coordinate.
    pub location: CurvePoint,
}

/// A double curve where two components (or two branches of one component)
/// are glued.
///
/// The curve's reference coordinate is that of side 0. For elliptic curves
/// `gluing_unit` is the scalar `u` such that a point with coordinate `w` on
/// side 1 is glued to the point `u·w` on side 0; it must preserve the lattice.
/// `twist` is the residue factor entering the residue matrix: the row of this
/// curve is `c₀ + twist·c₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCurve {
    /// Identifier, unique within the surface.
    pub id: String,
    /// Geometry of the curve.
    pub geometry: CurveGeometry,
    /// Exactly two sides.
    pub sides: Vec<Side>,
    /// Triple points on the curve.
    pub triple_marks: Vec<TripleMark>,
    /// Residue factor of the gluing isomorphism.
    pub twist: Option<GaussRational>,
    /// Lattice unit identifying side-1 coordinates with side-0 coordinates.
    pub gluing_unit: Option<GaussRational>,
}

impl DoubleCurve {
    /// Whether both sides lie on the same component.
    pub fn is_self_glued(&self) -> bool {
        self.sides.len() == 2 && self.sides[0].component == self.sides[1].component
    }

    /// The automorphism taking side-1 coordinates to side-0 coordinates.
    pub fn gluing_automorphism(&self) -> Result<LatticeAutomorphism, crate::pic::PicError> {
        match (&self.geometry, self.gluing_unit) {
            (CurveGeometry::Elliptic { tau }, Some(u)) => LatticeAutomorphism::from_scalar(u, *tau),
            _ => Ok(LatticeAutomorphism::identity()),
        }
    }
}

/// Incidence of a triple point with one component: the component and the two
/// double curves through the point that lie on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Incidence {
    /// Component identifier.
    pub component: String,
    /// The two double curves on this component passing through the point.
    pub curves: [String; 2],
}

/// A stored value of the sign `σ` for one ordering of the three components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaEntry {
    /// Ordered component identifiers.
    pub order: [String; 3],
    /// The sign, `+1` or `−1`.
    pub sign: i8,
}

/// A point where three components meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriplePoint {
    /// Identifier, unique within the surface.
    pub id: String,
    /// The three incident components.
    pub incident: Vec<Incidence>,
    /// Stored values of `σ`.
    pub sigma: Vec<SigmaEntry>,
}

/// Sign of the permutation taking `from` to `to`, if `to` is a permutation
/// of `from` with distinct entries.
pub fn permutation_sign<T: PartialEq>(from: &[T], to: &[T]) -> Option<i8> {
    if from.len() != to.len() {
        return None;
    }
    let mut idx = Vec::with_capacity(to.len());
    for t in to {
        let pos = from.iter().position(|f| f == t)?;
        if idx.contains(&pos) {
            return None;
        }
        idx.push(pos);
    }
    let mut sign = 1i8;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    Some(sign)
}

impl TriplePoint {
    /// Identifiers of the incident components in incidence order.
    pub fn components(&self) -> Vec<&str> {
        self.incident.iter().map(|i| i.component.as_str()).collect()
    }

    /// Value of `σ` for an ordering of the incident components, derived
    /// from the first stored entry by alternation.
    pub fn sigma_of(&self, order: [&str; 3]) -> Option<i8> {
        let entry = self.sigma.first()?;
        let stored: Vec<&str> = entry.order.iter().map(String::as_str).collect();
        let s = permutation_sign(&stored, &order)?;
        Some(entry.sign * s)
    }
}

/// A simple normal crossing surface given by declared data.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SncSurface {
    /// Components, whose order fixes the sign convention `ε`.
    pub components: Vec<Component>,
    /// Double curves.
    pub double_curves: Vec<DoubleCurve>,
    /// Triple points.
    pub triple_points: Vec<TriplePoint>,
}

impl SncSurface {
    /// Looks up a component.
    pub fn component(&self, id: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.id == id)
    }

    /// Index of a component.
    pub fn component_index(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    /// Looks up a double curve.
    pub fn curve(&self, id: &str) -> Option<&DoubleCurve> {
        self.double_curves.iter().find(|c| c.id == id)
    }

    /// Index of a double curve.
    pub fn curve_index(&self, id: &str) -> Option<usize> {
        self.double_curves.iter().position(|c| c.id == id)
    }

    /// The sign `ε_ij = (j−i)/|j−i|` induced by the component order, or
    /// `None` if either id is unknown or the ids agree.
    pub fn epsilon(&self, i: &str, j: &str) -> Option<i8> {
        let a = self.component_index(i)?;
        let b = self.component_index(j)?;
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(1),
            std::cmp::Ordering::Greater => Some(-1),
            std::cmp::Ordering::Equal => None,
        }
    }

    /// Structural validation; see [`validate_structure`].
    pub fn validate(&self) -> Vec<Diagnostic> {
        validate_structure(self)
    }
}

/// A violated structural invariant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Diagnostic {
    /// Short code naming the invariant.
    pub invariant: String,
    /// Human-readable description naming the offending ids.
    pub message: String,
}

impl Diagnostic {
    fn new(invariant: &str, message: impl Into<String>) -> Self {
        Self {
            invariant: invariant.to_string(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.invariant, self.message)
    }
}

fn duplicate_ids<'a>(kind: &str, ids: impl Iterator<Item = &'a str>, out: &mut Vec<Diagnostic>) {
    let mut seen = BTreeSet::new();
    for id in ids {
        if !seen.insert(id) {
            out.push(Diagnostic::new(
                "unique-id",
                format!("duplicate {kind} id {id}"),
            ));
        }
    }
}

fn validate_component(c: &Component, out: &mut Vec<Diagnostic>) {
    if c.blowup_count > c.class_basis.len() {
        out.push(Diagnostic::new(
            "component-data",
            format!(
                "component {} records more blow-ups than basis classes",
                c.id
            ),
        ));
        return;
    }
    match c.kind.base_data() {
        Some((basis, canonical, euler, _)) => {
            let r = basis.len();
            if c.class_basis.len() != r + c.blowup_count {
                out.push(Diagnostic::new(
                    "component-data",
                    format!(
                        "component {} of kind {} must have {} basis classes, found {}",
                        c.id,
                        c.kind.name(),
                        r + c.blowup_count,
                        c.class_basis.len()
                    ),
                ));
                return;
            }
            let mut expected_k = canonical;
            expected_k.extend(std::iter::repeat_n(1, c.blowup_count));
            if c.canonical_class != expected_k {
                out.push(Diagnostic::new(
                    "component-data",
                    format!(
                        "component {} canonical class {:?} differs from {:?} required by its kind",
                        c.id, c.canonical_class, expected_k
                    ),
                ));
            }
            if c.euler_char != euler + c.blowup_count as i64 {
                out.push(Diagnostic::new(
                    "component-data",
                    format!(
                        "component {} has Euler characteristic {} but its kind and {} blow-ups give {}",
                        c.id,
                        c.euler_char,
                        c.blowup_count,
                        euler + c.blowup_count as i64
                    ),
                ));
            }
            if let ComponentKind::RuledElliptic { base, .. } = &c.kind {
                if base.genus() != 1 {
                    out.push(Diagnostic::new(
                        "component-data",
                        format!("ruled component {} must have an elliptic base", c.id),
                    ));
                }
            }
        }
        None => {
            if !c.canonical_class.is_empty() && c.canonical_class.len() != c.class_basis.len() {
                out.push(Diagnostic::new(
                    "component-data",
                    format!(
                        "declared component {} has canonical class of wrong length",
                        c.id
                    ),
                ));
            }
            if let ComponentKind::Declared { form: Some(form) } = &c.kind {
                let r = c.base_rank();
                let square = form.len() == r && form.iter().all(|row| row.len() == r);
                let symmetric = square && (0..r).all(|i| (0..r).all(|j| form[i][j] == form[j][i]));
                if !symmetric {
                    out.push(Diagnostic::new(
                        "component-data",
                        format!(
                            "declared form on {} is not a symmetric {r}x{r} matrix",
                            c.id
                        ),
                    ));
                }
            }
        }
    }
}

fn validate_geometry(curve: &DoubleCurve, out: &mut Vec<Diagnostic>) {
    if let CurveGeometry::Elliptic { tau } = &curve.geometry {
        if tau.im == num_traits::Zero::zero() {
            out.push(Diagnostic::new(
                "geometry",
                format!("double curve {} has a degenerate period lattice", curve.id),
            ));
        }
    }
    match (&curve.geometry, curve.gluing_unit) {
        (CurveGeometry::Rational, Some(_)) => out.push(Diagnostic::new(
            "gluing",
            format!(
                "rational double curve {} cannot carry a lattice gluing unit",
                curve.id
            ),
        )),
        (CurveGeometry::Elliptic { .. }, Some(_)) if curve.gluing_automorphism().is_err() => {
            out.push(Diagnostic::new(
                "gluing",
                format!("gluing unit of {} does not preserve the lattice", curve.id),
            ));
        }
        _ => {}
    }
}

fn validate_curve(s: &SncSurface, curve: &DoubleCurve, out: &mut Vec<Diagnostic>) {
    validate_geometry(curve, out);
    if curve.sides.len() != 2 {
        out.push(Diagnostic::new(
            "side-arity",
            format!(
                "double curve {} requires two sides, found {}",
                curve.id,
                curve.sides.len()
            ),
        ));
    }
    if curve.is_self_glued() {
        let (a, b) = (&curve.sides[0].label, &curve.sides[1].label);
        if a.is_none() || b.is_none() || a == b {
            out.push(Diagnostic::new(
                "self-gluing",
                format!(
                    "double curve {} glues {} to itself and needs distinct side labels",
                    curve.id, curve.sides[0].component
                ),
            ));
        }
    }
    for (k, side) in curve.sides.iter().enumerate() {
        if side.normal_class.geometry() != &curve.geometry {
            out.push(Diagnostic::new(
                "geometry",
                format!(
                    "normal class on side {k} of {} has the wrong geometry",
                    curve.id
                ),
            ));
        }
        let Some(comp) = s.component(&side.component) else {
            out.push(Diagnostic::new(
                "dangling-id",
                format!(
                    "double curve {} references unknown component {}",
                    curve.id, side.component
                ),
            ));
            continue;
        };
        if side.curve_class.len() != comp.class_basis.len() {
            out.push(Diagnostic::new(
                "class-length",
                format!(
                    "side {k} of {} has a class of length {} on {} with basis of length {}",
                    curve.id,
                    side.curve_class.len(),
                    comp.id,
                    comp.class_basis.len()
                ),
            ));
            continue;
        }
        if let Ok(self_int) = self_intersection(comp, &side.curve_class) {
            if self_int != side.normal_class.degree() {
                out.push(Diagnostic::new(
                    "normal-degree",
                    format!(
                        "side {k} of {} on {} has normal degree {} but self-intersection {}",
                        curve.id,
                        comp.id,
                        side.normal_class.degree(),
                        self_int
                    ),
                ));
            }
        }
    }
    for (k, mark) in curve.triple_marks.iter().enumerate() {
        if !mark.location.fits(&curve.geometry) {
            out.push(Diagnostic::new(
                "point-genus",
                format!(
                    "triple mark {} on {} does not fit a curve of genus {}",
                    mark.triple_point,
                    curve.id,
                    curve.geometry.genus()
                ),
            ));
        }
        for other in &curve.triple_marks[..k] {
            if other.location.coincides(&mark.location) {
                out.push(Diagnostic::new(
                    "mark-distinct",
                    format!(
                        "triple marks {} and {} on {} share a location",
                        other.triple_point, mark.triple_point, curve.id
                    ),
                ));
            }
        }
        if !s.triple_points.iter().any(|t| t.id == mark.triple_point) {
            out.push(Diagnostic::new(
                "dangling-id",
                format!(
                    "double curve {} marks unknown triple point {}",
                    curve.id, mark.triple_point
                ),
            ));
        }
    }
}

fn validate_triple_point(s: &SncSurface, t: &TriplePoint, out: &mut Vec<Diagnostic>) {
    let comps = t.components();
    let distinct: BTreeSet<&str> = comps.iter().copied().collect();
    if t.incident.len() != 3 || distinct.len() != 3 {
        out.push(Diagnostic::new(
            "triple-arity",
            format!(
                "triple point {} must meet exactly three distinct components, found {:?}",
                t.id, comps
            ),
        ));
    }
    let marking: BTreeSet<&str> = s
        .double_curves
        .iter()
        .filter(|c| c.triple_marks.iter().any(|m| m.triple_point == t.id))
        .map(|c| c.id.as_str())
        .collect();
    if marking.len() != 3 {
        out.push(Diagnostic::new(
            "triple-incidence",
            format!(
                "triple point {} is marked on {} double curves, expected three",
                t.id,
                marking.len()
            ),
        ));
    }
    let mut listed = BTreeSet::new();
    for inc in &t.incident {
        if s.component(&inc.component).is_none() {
            out.push(Diagnostic::new(
                "dangling-id",
                format!(
                    "triple point {} references unknown component {}",
                    t.id, inc.component
                ),
            ));
        }
        for cid in &inc.curves {
            listed.insert(cid.as_str());
            let Some(curve) = s.curve(cid) else {
                out.push(Diagnostic::new(
                    "dangling-id",
                    format!(
                        "triple point {} references unknown double curve {cid}",
                        t.id
                    ),
                ));
                continue;
            };
            if !curve.triple_marks.iter().any(|m| m.triple_point == t.id) {
                out.push(Diagnostic::new(
                    "triple-incidence",
                    format!("double curve {cid} does not mark triple point {}", t.id),
                ));
            }
            if !curve
                .sides
                .iter()
                .any(|side| side.component == inc.component)
            {
                out.push(Diagnostic::new(
                    "triple-incidence",
                    format!(
                        "double curve {cid} listed at {} does not lie on {}",
                        t.id, inc.component
                    ),
                ));
            }
        }
    }
    if listed != marking && marking.len() == 3 {
        out.push(Diagnostic::new(
            "triple-incidence",
            format!(
                "triple point {} lists curves {:?} but is marked on {:?}",
                t.id, listed, marking
            ),
        ));
    }
    validate_sigma(t, &comps, out);
}

fn validate_sigma(t: &TriplePoint, comps: &[&str], out: &mut Vec<Diagnostic>) {
    let mut implied: Option<i8> = None;
    for entry in &t.sigma {
        if entry.sign != 1 && entry.sign != -1 {
            out.push(Diagnostic::new(
                "sigma-alternating",
                format!("sigma at triple point {} takes value {}", t.id, entry.sign),
            ));
            continue;
        }
        let order: Vec<&str> = entry.order.iter().map(String::as_str).collect();
        let Some(parity) = permutation_sign(comps, &order) else {
            out.push(Diagnostic::new(
                "sigma-alternating",
                format!(
                    "sigma at triple point {} is indexed by {:?}, not an ordering of {:?}",
                    t.id, order, comps
                ),
            ));
            continue;
        };
        let value = entry.sign * parity;
        match implied {
            None => implied = Some(value),
            Some(v) if v != value => {
                out.push(Diagnostic::new(
                    "sigma-alternating",
                    format!("sigma not alternating at triple point {}", t.id),
                ));
                return;
            }
            _ => {}
        }
    }
}

/// Checks every structural invariant of the surface.
///
/// Returns an empty list exactly when all invariants hold. Diagnostics are
/// sorted, so the result does not depend on the order of the input lists.
pub fn validate_structure(s: &SncSurface) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    duplicate_ids(
        "component",
        s.components.iter().map(|c| c.id.as_str()),
        &mut out,
    );
    duplicate_ids(
        "double curve",
        s.double_curves.iter().map(|c| c.id.as_str()),
        &mut out,
    );
    duplicate_ids(
        "triple point",
        s.triple_points.iter().map(|c| c.id.as_str()),
        &mut out,
    );
    for c in &s.components {
        validate_component(c, &mut out);
    }
    for curve in &s.double_curves {
        validate_curve(s, curve, &mut out);
    }
    for t in &s.triple_points {
        validate_triple_point(s, t, &mut out);
    }
    out.sort();
    out.dedup();
    out
}

/// Counts, for each component, the sides of double curves lying on it.
pub fn side_counts(s: &SncSurface) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for curve in &s.double_curves {
        for side in &curve.sides {
            *m.entry(side.component.clone()).or_insert(0) += 1;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_line_has_self_intersection_one() {
        let p = Component::projective_plane("H");
        assert_eq!(self_intersection(&p, &[1]), Ok(1));
        assert_eq!(self_intersection(&p, &[3]), Ok(9));
    }

    #[test]
    fn quadric_diagonal_has_self_intersection_two() {
        let q = Component::quadric("Q");
        assert_eq!(self_intersection(&q, &[1, 1]), Ok(2));
        assert_eq!(self_intersection(&q, &[1, 0]), Ok(0));
    }

    #[test]
    fn blown_up_cubic_class() {
        for d in 0..=3i64 {
            let mut p = Component::projective_plane("X");
            let n = (9 - 3 * d) as usize;
            for k in 0..n {
                p.class_basis.push(format!("E{k}"));
                p.canonical_class.push(1);
            }
            p.blowup_count = n;
            p.euler_char += n as i64;
            let mut class = vec![3];
            class.extend(std::iter::repeat_n(-1, n));
            assert_eq!(self_intersection(&p, &class), Ok(3 * d));
        }
    }

    #[test]
    fn declared_without_form_is_undefined() {
        let c = Component::declared("X", vec!["a".into()], vec![-1], 5, None);
        assert!(matches!(
            self_intersection(&c, &[1]),
            Err(ModelError::UndefinedForm(_))
        ));
    }

    #[test]
    fn ruled_sections() {
        let r = Component::ruled_elliptic("Y", 3, CurveGeometry::square_lattice());
        assert_eq!(self_intersection(&r, &[1, 0]), Ok(3));
        assert_eq!(self_intersection(&r, &[0, 1]), Ok(-3));
        assert_eq!(r.intersect(&[1, 0], &[0, 1]), Ok(0));
    }

    #[test]
    fn permutation_signs() {
        let base = ["a", "b", "c"];
        assert_eq!(permutation_sign(&base, &["a", "b", "c"]), Some(1));
        assert_eq!(permutation_sign(&base, &["b", "a", "c"]), Some(-1));
        assert_eq!(permutation_sign(&base, &["b", "c", "a"]), Some(1));
        assert_eq!(permutation_sign(&base, &["c", "b", "a"]), Some(-1));
        assert_eq!(permutation_sign(&base, &["a", "a", "c"]), None);
    }

    #[test]
    fn epsilon_follows_component_order() {
        let s = SncSurface {
            components: vec![
                Component::projective_plane("A"),
                Component::projective_plane("B"),
            ],
            ..Default::default()
        };
        assert_eq!(s.epsilon("A", "B"), Some(1));
        assert_eq!(s.epsilon("B", "A"), Some(-1));
        assert_eq!(s.epsilon("A", "A"), None);
    }
}
