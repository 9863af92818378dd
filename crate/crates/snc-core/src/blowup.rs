//! Blow-ups of an SNC surface at points of its double curves.
//!
//! A step blows up either one side of a double curve (the component on that
//! side) or both sides at a finite set of points. The bookkeeping follows the
//! standard rules for a point blow-up `π: X' → X`: each point appends one
//! exceptional class `E`, raises the Euler characteristic by one, adds `E` to
//! the canonical class and subtracts `E` from the class of the curve through
//! the point. On the curve itself the normal bundle loses the divisor of the
//! blown-up points.
//!
//! Points on the curve other than the centers are untouched, so proper
//! transforms act as the identity on marked points. The only way the two
//! sides of a curve can disagree is by blowing up a triple point, which
//! [`detect_mismatch`] reports.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::checks::{collective_normal_class, CheckError};
use crate::model::{DoubleCurve, SncSurface};
use crate::pic::{self, CurveGeometry, CurvePoint, LatticePoint, LineBundleClass, PicError};
use crate::Rational;

/// Which sides of the curve a step blows up.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BlowupMode {
    /// Blow up only the component on one side. `side` selects the side
    /// explicitly and is required when the curve is glued to itself.
    OneSide {
        /// Component on the chosen side.
        component: String,
        /// Optional side index (0 or 1).
        side: Option<usize>,
    },
    /// Blow up the components on both sides at the same points.
    BothSides,
}

impl BlowupMode {
    /// One side, identified by its component.
    pub fn one_side(component: impl Into<String>) -> Self {
        Self::OneSide {
            component: component.into(),
            side: None,
        }
    }
}

impl fmt::Display for BlowupMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::OneSide {
                component,
                side: None,
            } => write!(f, "OneSide({component})"),
            Self::OneSide {
                component,
                side: Some(k),
            } => write!(f, "OneSide({component}, side {k})"),
            Self::BothSides => write!(f, "BothSides"),
        }
    }
}

/// A single blow-up step.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlowupStep {
    /// The double curve carrying the centers.
    pub curve: String,
    /// Centers, in the curve's reference coordinate.
    pub points: Vec<CurvePoint>,
    /// Which sides are blown up.
    pub mode: BlowupMode,
}

impl BlowupStep {
    /// Number of point-side incidences of the step.
    pub fn incidences(&self) -> usize {
        match self.mode {
            BlowupMode::OneSide { .. } => self.points.len(),
            BlowupMode::BothSides => 2 * self.points.len(),
        }
    }
}

/// An ordered list of blow-up steps.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BlowupPlan {
    /// Steps in execution order.
    pub steps: Vec<BlowupStep>,
}

impl BlowupPlan {
    /// Total number of points over all steps.
    pub fn total_points(&self) -> usize {
        self.steps.iter().map(|s| s.points.len()).sum()
    }

    /// Total number of point-side incidences.
    pub fn total_incidences(&self) -> usize {
        self.steps.iter().map(BlowupStep::incidences).sum()
    }

    /// Per-curve totals of points and incidences.
    pub fn totals_by_curve(&self) -> BTreeMap<String, CurveTotals> {
        let mut m: BTreeMap<String, CurveTotals> = BTreeMap::new();
        for step in &self.steps {
            let e = m.entry(step.curve.clone()).or_default();
            e.points += step.points.len();
            e.incidences += step.incidences();
            match step.mode {
                BlowupMode::BothSides => e.both_sides += step.points.len(),
                BlowupMode::OneSide { .. } => e.one_side += step.points.len(),
            }
        }
        m
    }
}

/// Per-curve totals of a plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub struct CurveTotals {
    /// Number of centers.
    pub points: usize,
    /// Number of point-side incidences.
    pub incidences: usize,
    /// Centers blown up on both sides.
    pub both_sides: usize,
    /// Centers blown up on one side.
    pub one_side: usize,
}

/// Errors raised while applying a blow-up step.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlowupError {
    /// The step names a curve that does not exist.
    #[error("unknown double curve {0}")]
    UnknownCurve(String),
    /// The one-sided mode names a component that is not a side of the curve.
    #[error("component {component} is not a side of double curve {curve}")]
    NotASide {
        /// Curve identifier.
        curve: String,
        /// Component identifier.
        component: String,
    },
    /// The curve is glued to itself and the side was not specified.
    #[error("double curve {curve} lies twice on {component}; the side index must be given")]
    AmbiguousSide {
        /// Curve identifier.
        curve: String,
        /// Component identifier.
        component: String,
    },
    /// A center is listed twice.
    #[error("center {point} is listed twice on {curve}")]
    DuplicatePoint {
        /// Curve identifier.
        curve: String,
        /// Point.
        point: String,
    },
    /// A center coincides with a triple point.
    #[error("center {point} on {curve} is the triple point {triple_point}")]
    CenterOnTriplePoint {
        /// Curve identifier.
        curve: String,
        /// Point.
        point: String,
        /// Triple point identifier.
        triple_point: String,
    },
    /// A center does not fit the curve's geometry.
    #[error("center {point} does not lie on {curve}")]
    CenterNotOnCurve {
        /// Curve identifier.
        curve: String,
        /// Point.
        point: String,
    },
    /// The curve's data is inconsistent.
    #[error("inconsistent data on {curve}: {source}")]
    Pic {
        /// Curve identifier.
        curve: String,
        /// Underlying error.
        source: PicError,
    },
    /// Error annotated with the index of the failing step.
    #[error("step {index}: {source}")]
    AtStep {
        /// Zero-based step index.
        index: usize,
        /// Underlying error.
        source: Box<BlowupError>,
    },
}

/// Resolves the side indices affected by a mode.
pub fn resolve_sides(curve: &DoubleCurve, mode: &BlowupMode) -> Result<Vec<usize>, BlowupError> {
    match mode {
        BlowupMode::BothSides => Ok((0..curve.sides.len()).collect()),
        BlowupMode::OneSide { component, side } => {
            let matching: Vec<usize> = curve
                .sides
                .iter()
                .enumerate()
                .filter(|(_, s)| &s.component == component)
                .map(|(k, _)| k)
                .collect();
            let not_a_side = || BlowupError::NotASide {
                curve: curve.id.clone(),
                component: component.clone(),
            };
            match side {
                Some(k) if matching.contains(k) => Ok(vec![*k]),
                Some(_) => Err(not_a_side()),
                None => match matching.as_slice() {
                    [k] => Ok(vec![*k]),
                    [] => Err(not_a_side()),
                    _ => Err(BlowupError::AmbiguousSide {
                        curve: curve.id.clone(),
                        component: component.clone(),
                    }),
                },
            }
        }
    }
}

fn check_points(curve: &DoubleCurve, points: &[CurvePoint]) -> Result<(), BlowupError> {
    for (k, p) in points.iter().enumerate() {
        if !p.fits(&curve.geometry) {
            return Err(BlowupError::CenterNotOnCurve {
                curve: curve.id.clone(),
                point: p.to_string(),
            });
        }
        if points[..k].iter().any(|q| q.coincides(p)) {
            return Err(BlowupError::DuplicatePoint {
                curve: curve.id.clone(),
                point: p.to_string(),
            });
        }
        if let Some(m) = curve.triple_marks.iter().find(|m| m.location.coincides(p)) {
            return Err(BlowupError::CenterOnTriplePoint {
                curve: curve.id.clone(),
                point: p.to_string(),
                triple_point: m.triple_point.clone(),
            });
        }
    }
    Ok(())
}

/// Expresses a reference-coordinate point in the coordinate of the given
/// side.
fn in_side_coordinate(
    curve: &DoubleCurve,
    side: usize,
    p: &CurvePoint,
) -> Result<CurvePoint, PicError> {
    match p {
        CurvePoint::Lattice(q) if side == 1 => {
            let g = curve.gluing_automorphism()?;
            Ok(CurvePoint::Lattice(g.inverse().apply(*q)))
        }
        _ => Ok(p.clone()),
    }
}

/// Applies one blow-up step, returning the new surface.
pub fn blow_up(surface: &SncSurface, step: &BlowupStep) -> Result<SncSurface, BlowupError> {
    let ci = surface
        .curve_index(&step.curve)
        .ok_or_else(|| BlowupError::UnknownCurve(step.curve.clone()))?;
    let curve = &surface.double_curves[ci];
    let sides = resolve_sides(curve, &step.mode)?;
    check_points(curve, &step.points)?;
    let pic_err = |source| BlowupError::Pic {
        curve: curve.id.clone(),
        source,
    };

    let mut out = surface.clone();
    for &side in &sides {
        let comp_id = curve.sides[side].component.clone();
        let comp_idx = out
            .component_index(&comp_id)
            .ok_or_else(|| BlowupError::NotASide {
                curve: curve.id.clone(),
                component: comp_id.clone(),
            })?;
        for p in &step.points {
            let comp = &mut out.components[comp_idx];
            comp.blowup_count += 1;
            comp.euler_char += 1;
            comp.canonical_class.push(1);
            comp.class_basis
                .push(format!("E{}[{}@{}]", comp.blowup_count, curve.id, p));
            for other in out.double_curves.iter_mut() {
                for s in other.sides.iter_mut().filter(|s| s.component == comp_id) {
                    s.curve_class.push(0);
                }
            }
            let target = &mut out.double_curves[ci].sides[side];
            if let Some(last) = target.curve_class.last_mut() {
                *last = -1;
            }
            let local = in_side_coordinate(curve, side, p).map_err(pic_err)?;
            let removed = pic::point_class(&curve.geometry, &local).map_err(pic_err)?;
            target.normal_class =
                pic::tensor(&target.normal_class, &removed.inverse()).map_err(pic_err)?;
        }
    }
    Ok(out)
}

/// Record of where a marked point ends up after a plan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformEntry {
    /// Curve carrying the point.
    pub curve: String,
    /// Triple point the mark belongs to.
    pub triple_point: String,
    /// Location before the plan.
    pub original: CurvePoint,
    /// Location of the proper transform after the plan.
    pub image: CurvePoint,
}

/// Transform log of a plan: every original triple mark and its image, plus
/// the centers blown up at each step.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TransformLog {
    /// Proper transforms of the marked points.
    pub marks: Vec<TransformEntry>,
    /// Centers per step, as `(step index, curve, point)`.
    pub centers: Vec<(usize, String, CurvePoint)>,
}

/// Executes a plan step by step.
///
/// Errors are annotated with the index of the failing step.
pub fn run_plan(
    surface: &SncSurface,
    plan: &BlowupPlan,
) -> Result<(SncSurface, TransformLog), BlowupError> {
    let mut current = surface.clone();
    let mut log = TransformLog::default();
    for (index, step) in plan.steps.iter().enumerate() {
        current = blow_up(&current, step).map_err(|e| BlowupError::AtStep {
            index,
            source: Box::new(e),
        })?;
        for p in &step.points {
            log.centers.push((index, step.curve.clone(), p.clone()));
        }
    }
    for (before, after) in surface.double_curves.iter().zip(&current.double_curves) {
        for mark in &before.triple_marks {
            let image = after
                .triple_marks
                .iter()
                .find(|m| m.triple_point == mark.triple_point)
                .map(|m| m.location.clone())
                .unwrap_or_else(|| mark.location.clone());
            log.marks.push(TransformEntry {
                curve: before.id.clone(),
                triple_point: mark.triple_point.clone(),
                original: mark.location.clone(),
                image,
            });
        }
    }
    Ok((current, log))
}

/// Kind of a mismatch diagnostic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MismatchKind {
    /// A center of the step coincides with a triple mark of the curve.
    CenterOnTriplePoint,
    /// After the plan the two sides of the curve carry different triple-mark
    /// records, so they can no longer be glued by the declared isomorphism.
    MarkRecordMismatch,
}

/// A detected mismatch, attributed to a curve and a step.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MismatchDiagnostic {
    /// Curve identifier.
    pub curve: String,
    /// Zero-based step index.
    pub step: usize,
    /// Kind of mismatch.
    pub kind: MismatchKind,
    /// Human-readable description.
    pub message: String,
}

impl fmt::Display for MismatchDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (step {}): {}", self.curve, self.step, self.message)
    }
}

/// Simulates a plan on the triple-mark records of every side and reports
/// every place where gluing would break.
///
/// Blowing up a component at a triple point separates the two curves of
/// that component passing through it, so the sides on that component lose the
/// mark while the sides on the other components keep it. Steps that cannot be
/// resolved against the surface are skipped; [`run_plan`] reports them.
pub fn detect_mismatch(surface: &SncSurface, plan: &BlowupPlan) -> Vec<MismatchDiagnostic> {
    let mut records: Vec<Vec<BTreeSet<String>>> = surface
        .double_curves
        .iter()
        .map(|c| {
            let marks: BTreeSet<String> = c
                .triple_marks
                .iter()
                .map(|m| m.triple_point.clone())
                .collect();
            vec![marks; c.sides.len()]
        })
        .collect();
    let mut disturbed: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); surface.double_curves.len()];
    let mut out = BTreeSet::new();

    for (index, step) in plan.steps.iter().enumerate() {
        let Some(ci) = surface.curve_index(&step.curve) else {
            continue;
        };
        let curve = &surface.double_curves[ci];
        let Ok(sides) = resolve_sides(curve, &step.mode) else {
            continue;
        };
        let comps: BTreeSet<&str> = sides
            .iter()
            .map(|&k| curve.sides[k].component.as_str())
            .collect();
        for p in &step.points {
            let Some(mark) = curve.triple_marks.iter().find(|m| m.location.coincides(p)) else {
                continue;
            };
            out.insert(MismatchDiagnostic {
                curve: curve.id.clone(),
                step: index,
                kind: MismatchKind::CenterOnTriplePoint,
                message: format!(
                    "center {p} is the triple point {} (centers must avoid triple points)",
                    mark.triple_point
                ),
            });
            for (cj, other) in surface.double_curves.iter().enumerate() {
                if !other
                    .triple_marks
                    .iter()
                    .any(|m| m.triple_point == mark.triple_point)
                {
                    continue;
                }
                for (k, side) in other.sides.iter().enumerate() {
                    if comps.contains(side.component.as_str()) {
                        records[cj][k].remove(&mark.triple_point);
                        disturbed[cj].insert(index);
                    }
                }
            }
        }
    }

    for (ci, curve) in surface.double_curves.iter().enumerate() {
        let recs = &records[ci];
        if recs.windows(2).all(|w| w[0] == w[1]) {
            continue;
        }
        for &index in &disturbed[ci] {
            out.insert(MismatchDiagnostic {
                curve: curve.id.clone(),
                step: index,
                kind: MismatchKind::MarkRecordMismatch,
                message: format!(
                    "sides carry different triple marks after the plan: {:?} vs {:?}",
                    recs[0],
                    recs.get(1).cloned().unwrap_or_default()
                ),
            });
        }
    }
    out.into_iter().collect()
}

/// Errors raised by the planner.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    /// No sequence of blow-ups can trivialize the class on this curve.
    #[error("infeasible: {reason} on {curve}")]
    Infeasible {
        /// Obstructing curve.
        curve: String,
        /// Why the class cannot be trivialized.
        reason: String,
    },
    /// The collective class could not be computed.
    #[error(transparent)]
    Check(#[from] CheckError),
}

/// Counts chosen for one curve: two-sided centers and one-sided centers on
/// each side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Allocation {
    /// Two-sided centers.
    pub both: usize,
    /// One-sided centers on side 0.
    pub side0: usize,
    /// One-sided centers on side 1.
    pub side1: usize,
}

impl Allocation {
    /// Number of centers.
    pub fn points(&self) -> usize {
        self.both + self.side0 + self.side1
    }

    /// Degree removed from the collective class.
    pub fn incidences(&self) -> usize {
        2 * self.both + self.side0 + self.side1
    }
}

/// Minimal allocation removing `degree` from a collective class.
///
/// Searches every triple of counts bounded by the degree. The objective is
/// the number of centers; ties prefer more two-sided centers, then side 0.
pub fn allocate_counts(degree: usize) -> Allocation {
    let mut best: Option<(
        usize,
        std::cmp::Reverse<usize>,
        std::cmp::Reverse<usize>,
        Allocation,
    )> = None;
    for both in 0..=degree {
        for side0 in 0..=degree {
            for side1 in 0..=degree {
                let a = Allocation { both, side0, side1 };
                if a.incidences() != degree {
                    continue;
                }
                let key = (
                    a.points(),
                    std::cmp::Reverse(both),
                    std::cmp::Reverse(side0),
                    a,
                );
                if best.as_ref().is_none_or(|b| key < *b) {
                    best = Some(key);
                }
            }
        }
    }
    best.map(|b| b.3).unwrap_or(Allocation {
        both: 0,
        side0: 0,
        side1: 0,
    })
}

/// Chooses concrete centers for an allocation on one curve.
///
/// Rational curves get fresh labels. Elliptic curves get distinct lattice
/// points whose weighted sum (two-sided centers count twice) equals the
/// collective class's Jacobian point, so the class becomes trivial.
pub fn choose_points(
    curve: &DoubleCurve,
    alloc: Allocation,
    target: &LineBundleClass,
) -> Result<[Vec<CurvePoint>; 3], PlanError> {
    let taken = |p: &CurvePoint, chosen: &[CurvePoint]| {
        curve.triple_marks.iter().any(|m| m.location.coincides(p))
            || chosen.iter().any(|q| q.coincides(p))
    };
    let counts = [alloc.both, alloc.side0, alloc.side1];
    match &curve.geometry {
        CurveGeometry::Rational => {
            let mut chosen: Vec<CurvePoint> = Vec::new();
            let mut k = 0usize;
            let mut groups: [Vec<CurvePoint>; 3] = Default::default();
            for (g, &n) in counts.iter().enumerate() {
                while groups[g].len() < n {
                    k += 1;
                    let p = CurvePoint::label(format!("{}#q{k}", curve.id));
                    if !taken(&p, &chosen) {
                        chosen.push(p.clone());
                        groups[g].push(p);
                    }
                }
            }
            Ok(groups)
        }
        CurveGeometry::Elliptic { .. } => {
            let goal = target.jacobian_point().unwrap_or_else(LatticePoint::zero);
            let total = alloc.points();
            if total == 0 {
                return Ok(Default::default());
            }
            const MODULUS: i64 = 101;
            for offset in 0..MODULUS {
                let mut pts: Vec<LatticePoint> = (1..total as i64)
                    .map(|j| {
                        let n = j + offset;
                        LatticePoint::new(
                            Rational::new(n, MODULUS),
                            Rational::new((n * n + 1) % MODULUS, MODULUS),
                        )
                    })
                    .collect();
                // Weight 2 for two-sided centers, 1 otherwise; the last center
                // is solved from the remaining sum.
                let weight = |idx: usize| if idx < alloc.both { 2 } else { 1 };
                let partial = pts
                    .iter()
                    .enumerate()
                    .fold(LatticePoint::zero(), |acc, (i, p)| acc + p.scale(weight(i)));
                let rest = goal - partial;
                let candidates: Vec<LatticePoint> = if weight(total - 1) == 1 {
                    vec![rest]
                } else {
                    rest.halves().to_vec()
                };
                for last in candidates {
                    let mut trial = pts.clone();
                    trial.push(last);
                    let as_points: Vec<CurvePoint> =
                        trial.iter().map(|p| CurvePoint::Lattice(*p)).collect();
                    let clash = as_points
                        .iter()
                        .enumerate()
                        .any(|(i, p)| taken(p, &as_points[..i]));
                    if !clash {
                        pts = trial;
                        let mut groups: [Vec<CurvePoint>; 3] = Default::default();
                        let mut it = pts.into_iter().map(CurvePoint::Lattice);
                        for (g, &n) in counts.iter().enumerate() {
                            groups[g] = it.by_ref().take(n).collect();
                        }
                        return Ok(groups);
                    }
                }
            }
            Err(PlanError::Infeasible {
                curve: curve.id.clone(),
                reason: "no distinct centers found for the required Jacobian sum".into(),
            })
        }
    }
}

/// Finds a plan of minimal total point count after which every collective
/// normal class is trivial.
///
/// Curves are processed in ascending id order. For each curve the counts come
/// from [`allocate_counts`] and the centers from [`choose_points`].
pub fn plan_blowups_to_trivialize(surface: &SncSurface) -> Result<BlowupPlan, PlanError> {
    let classes = collective_normal_class(surface)?;
    let mut order: Vec<&DoubleCurve> = surface.double_curves.iter().collect();
    order.sort_by(|a, b| a.id.cmp(&b.id));
    let mut plan = BlowupPlan::default();
    for curve in order {
        let class = &classes.classes[&curve.id];
        if pic::is_trivial(class) {
            continue;
        }
        if class.degree() < 0 {
            return Err(PlanError::Infeasible {
                curve: curve.id.clone(),
                reason: format!("collective class has negative degree {}", class.degree()),
            });
        }
        if class.degree() == 0 {
            return Err(PlanError::Infeasible {
                curve: curve.id.clone(),
                reason: "collective class has degree 0 but a nonzero Jacobian point".into(),
            });
        }
        let alloc = allocate_counts(class.degree() as usize);
        let [both, side0, side1] = choose_points(curve, alloc, class)?;
        let self_glued = curve.is_self_glued();
        let one_side = |k: usize| BlowupMode::OneSide {
            component: curve.sides[k].component.clone(),
            side: self_glued.then_some(k),
        };
        for (points, mode) in [
            (both, BlowupMode::BothSides),
            (side0, one_side(0)),
            (side1, one_side(1)),
        ] {
            if !points.is_empty() {
                plan.steps.push(BlowupStep {
                    curve: curve.id.clone(),
                    points,
                    mode,
                });
            }
        }
    }
    Ok(plan)
}
