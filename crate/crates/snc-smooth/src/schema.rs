//! The JSON scenario format and its conversion to and from the core model.
//!
//! Exact rationals are strings `"p/q"` (or `"p"`), complex numbers are
//! two-element arrays `[re, im]` of such strings, and every object rejects
//! unknown fields. Parsing distinguishes three failure classes: malformed JSON
//! ([`ScenarioError::Parse`]), well-formed JSON that does not match the schema
//! ([`ScenarioError::Schema`], with the field path), and data whose ids do not
//! resolve ([`ScenarioError::Semantic`]).

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use snc_core::blowup::{BlowupMode, BlowupPlan, BlowupStep};
use snc_core::model::{
    validate_structure, Component, ComponentKind, DoubleCurve, Incidence, Side, SigmaEntry,
    SncSurface, TripleMark, TriplePoint,
};
use snc_core::pic::{CurveGeometry, CurvePoint, LatticePoint, LineBundleClass};
use snc_core::{GaussRational, Rational};

/// Version written to and required in every scenario file.
pub const SCHEMA_VERSION: u32 = 1;

/// Failure to turn text into a scenario.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    /// The text is not well-formed JSON.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        /// Description from the JSON reader.
        message: String,
        /// One-based line.
        line: usize,
        /// One-based column.
        column: usize,
    },
    /// The JSON does not match the schema.
    #[error("schema error at {path}: {message}")]
    Schema {
        /// Field path, e.g. `double_curves[2].sides[0].normal`.
        path: String,
        /// Description.
        message: String,
    },
    /// Identifiers do not resolve.
    #[error("semantic error: {}", .0.join("; "))]
    Semantic(Vec<String>),
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

/// An exact rational written as `"p/q"` or `"p"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RatStr(pub Rational);

impl fmt::Display for RatStr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.0.denom() == 1 {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl std::str::FromStr for RatStr {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let parse = |x: &str| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| format!("invalid rational {s:?}"))
        };
        let r = match t.split_once('/') {
            Some((n, d)) => {
                let d = parse(d)?;
                if d == 0 {
                    return Err(format!("zero denominator in {s:?}"));
                }
                Rational::new(parse(n)?, d)
            }
            None => Rational::from_integer(parse(t)?),
        };
        Ok(Self(r))
    }
}

impl Serialize for RatStr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RatStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// An exact complex number `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexStr(pub [RatStr; 2]);

impl ComplexStr {
    /// The Gaussian rational.
    pub fn value(&self) -> GaussRational {
        GaussRational::new(self.0[0].0, self.0[1].0)
    }

    /// From a Gaussian rational.
    pub fn from_value(z: GaussRational) -> Self {
        Self([RatStr(z.re), RatStr(z.im)])
    }
}

/// Kind tag of a component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindTag {
    /// Projective plane.
    ProjectivePlane,
    /// Smooth quadric.
    Quadric,
    /// Ruled surface over an elliptic curve.
    RuledElliptic,
    /// Data declared in the file.
    Declared,
}

/// A component entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDto {
    /// Identifier.
    pub id: String,
    /// Kind.
    pub kind: KindTag,
    /// Self-intersection of the zero section (ruled elliptic only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
    /// Period of the base curve (ruled elliptic only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<ComplexStr>,
    /// Class basis names (declared only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_basis: Option<Vec<String>>,
    /// Canonical class (declared only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical_class: Option<Vec<i64>>,
    /// Euler characteristic (declared only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_char: Option<i64>,
    /// Intersection form (declared only, optional).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<Vec<Vec<i64>>>,
}

/// Geometry of a double curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryDto {
    /// Genus, 0 or 1.
    pub genus: u8,
    /// Period (genus 1 only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<ComplexStr>,
}

/// A line-bundle class on a double curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassDto {
    /// Degree.
    pub degree: i64,
    /// Abel–Jacobi point `[a, b]` for `a + bτ` (genus 1 only, default 0).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jacobian_point: Option<[RatStr; 2]>,
}

/// A point on a double curve: a label or a lattice point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDto {
    /// Label (genus 0).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Optional exact coordinate of a labelled point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coord: Option<ComplexStr>,
    /// Lattice coordinates `[a, b]` for `a + bτ` (genus 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<[RatStr; 2]>,
}

/// A side of a double curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideDto {
    /// Component.
    pub component: String,
    /// Label distinguishing the two sides of a self-glued curve.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Class of the curve in the component.
    pub curve_class: Vec<i64>,
    /// Normal bundle class.
    pub normal: ClassDto,
}

/// A triple mark.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkDto {
    /// Triple point identifier.
    pub triple_point: String,
    /// Location on the curve.
    pub location: PointDto,
}

/// A double curve entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDto {
    /// Identifier.
    pub id: String,
    /// Geometry.
    pub geometry: GeometryDto,
    /// The two sides.
    pub sides: Vec<SideDto>,
    /// Triple marks.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub triple_marks: Vec<MarkDto>,
    /// Residue factor of the gluing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<ComplexStr>,
    /// Lattice unit carrying side-1 coordinates to side-0 coordinates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gluing_unit: Option<ComplexStr>,
}

/// Incidence of a triple point with a component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IncidenceDto {
    /// Component.
    pub component: String,
    /// The two curves through the point on this component.
    pub curves: [String; 2],
}

/// A stored sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaDto {
    /// Ordered components.
    pub order: [String; 3],
    /// `+1` or `−1`.
    pub sign: i8,
}

/// A triple point entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleDto {
    /// Identifier.
    pub id: String,
    /// Incidences.
    pub incident: Vec<IncidenceDto>,
    /// Stored signs.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sigma: Vec<SigmaDto>,
}

/// Mode tag of a blow-up step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeTag {
    /// Blow up both sides.
    BothSides,
    /// Blow up one side.
    OneSide,
}

/// A blow-up step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepDto {
    /// Curve carrying the centers.
    pub curve: String,
    /// Mode.
    pub mode: ModeTag,
    /// Component of the blown-up side (one-sided steps).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component: Option<String>,
    /// Side index (one-sided steps on self-glued curves).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<usize>,
    /// Centers.
    pub points: Vec<PointDto>,
}

/// Optional regression assertions.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    /// The blow-up plan is rejected by mismatch detection.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<bool>,
    /// Curves named by mismatch diagnostics.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mismatch_curves: Option<Vec<String>>,
    /// Structural validation passes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure_ok: Option<bool>,
    /// Every component passes the anticanonical test.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anticanonical_ok: Option<bool>,
    /// The surface is d-semistable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_semistable: Option<bool>,
    /// Degree of each collective class.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collective_degrees: Option<BTreeMap<String, i64>>,
    /// Residues match.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue_ok: Option<bool>,
    /// Dimension of the space of global volume forms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0_dim: Option<usize>,
    /// Euler characteristic of each component after the plan.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component_euler: Option<BTreeMap<String, i64>>,
    /// Euler characteristic of the smoothed fiber.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_fiber: Option<i64>,
    /// Classification, one of `K3`, `ComplexTorus`, `PrimaryKodaira`, `Unknown`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<String>,
}

/// A scenario file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    /// Format version.
    pub schema_version: u32,
    /// Scenario name.
    pub name: String,
    /// One-line description.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    /// Components.
    pub components: Vec<ComponentDto>,
    /// Double curves.
    pub double_curves: Vec<CurveDto>,
    /// Triple points.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub triple_points: Vec<TripleDto>,
    /// Blow-up steps executed before checking.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blowup_plan: Vec<StepDto>,
    /// First Betti number of the smoothed fiber, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_b1: Option<i64>,
    /// Regression assertions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
    /// Remarks copied into reports.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// A scenario in core terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    /// Name.
    pub name: String,
    /// One-line description.
    pub description: String,
    /// The surface before the plan.
    pub surface: SncSurface,
    /// The plan executed before checking.
    pub plan: BlowupPlan,
    /// First Betti number of the fiber, when known.
    pub declared_b1: Option<i64>,
    /// Regression assertions.
    pub expected: Expected,
    /// Remarks.
    pub notes: Vec<String>,
}

/// Parses and validates a scenario file.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let file: ScenarioFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        match inner.classify() {
            serde_json::error::Category::Data => schema(path, inner.to_string()),
            _ => ScenarioError::Parse {
                message: inner.to_string(),
                line: inner.line(),
                column: inner.column(),
            },
        }
    })?;
    de.end().map_err(|e| ScenarioError::Parse {
        message: e.to_string(),
        line: e.line(),
        column: e.column(),
    })?;
    file.to_scenario()
}

fn geometry_from(g: &GeometryDto, path: &str) -> Result<CurveGeometry, ScenarioError> {
    match (g.genus, g.tau) {
        (0, None) => Ok(CurveGeometry::Rational),
        (0, Some(_)) => Err(schema(path, "tau is only allowed on genus-1 curves")),
        (1, Some(t)) => CurveGeometry::elliptic(t.value()).map_err(|e| schema(path, e.to_string())),
        (1, None) => Err(schema(path, "genus-1 curves require tau")),
        (n, _) => Err(schema(
            path,
            format!("genus {n} is not supported (only 0 and 1)"),
        )),
    }
}

fn lattice_from(p: [RatStr; 2]) -> LatticePoint {
    LatticePoint::new(p[0].0, p[1].0)
}

fn point_from(p: &PointDto, path: &str) -> Result<CurvePoint, ScenarioError> {
    match (&p.label, p.lattice) {
        (Some(name), None) => Ok(CurvePoint::Label {
            name: name.clone(),
            coord: p.coord.map(|c| c.value()),
        }),
        (None, Some(l)) if p.coord.is_none() => Ok(CurvePoint::Lattice(lattice_from(l))),
        _ => Err(schema(
            path,
            "a point is either {\"label\", optional \"coord\"} or {\"lattice\"}",
        )),
    }
}

fn class_from(
    c: &ClassDto,
    g: &CurveGeometry,
    path: &str,
) -> Result<LineBundleClass, ScenarioError> {
    let point = match (g, c.jacobian_point) {
        (CurveGeometry::Rational, None) => None,
        (CurveGeometry::Rational, Some(_)) => {
            return Err(schema(
                path,
                "jacobian_point is only allowed on genus-1 curves",
            ))
        }
        (CurveGeometry::Elliptic { .. }, p) => {
            Some(p.map(lattice_from).unwrap_or_else(LatticePoint::zero))
        }
    };
    LineBundleClass::new(g.clone(), c.degree, point).map_err(|e| schema(path, e.to_string()))
}

fn component_from(c: &ComponentDto, path: &str) -> Result<Component, ScenarioError> {
    let extra = |present: bool, field: &str| {
        if present {
            Err(schema(
                format!("{path}.{field}"),
                format!("field not allowed for kind {:?}", c.kind),
            ))
        } else {
            Ok(())
        }
    };
    let declared_fields = [
        (c.class_basis.is_some(), "class_basis"),
        (c.canonical_class.is_some(), "canonical_class"),
        (c.euler_char.is_some(), "euler_char"),
        (c.form.is_some(), "form"),
    ];
    let ruled_fields = [(c.degree.is_some(), "degree"), (c.tau.is_some(), "tau")];
    match c.kind {
        KindTag::ProjectivePlane | KindTag::Quadric => {
            for (p, f) in declared_fields.iter().chain(&ruled_fields) {
                extra(*p, f)?;
            }
            Ok(if c.kind == KindTag::Quadric {
                Component::quadric(&c.id)
            } else {
                Component::projective_plane(&c.id)
            })
        }
        KindTag::RuledElliptic => {
            for (p, f) in &declared_fields {
                extra(*p, f)?;
            }
            let degree = c
                .degree
                .ok_or_else(|| schema(format!("{path}.degree"), "missing field"))?;
            let tau = c
                .tau
                .ok_or_else(|| schema(format!("{path}.tau"), "missing field"))?;
            let base = CurveGeometry::elliptic(tau.value())
                .map_err(|e| schema(format!("{path}.tau"), e.to_string()))?;
            Ok(Component::ruled_elliptic(&c.id, degree, base))
        }
        KindTag::Declared => {
            for (p, f) in &ruled_fields {
                extra(*p, f)?;
            }
            let basis = c
                .class_basis
                .clone()
                .ok_or_else(|| schema(format!("{path}.class_basis"), "missing field"))?;
            let canonical = c
                .canonical_class
                .clone()
                .ok_or_else(|| schema(format!("{path}.canonical_class"), "missing field"))?;
            let euler = c
                .euler_char
                .ok_or_else(|| schema(format!("{path}.euler_char"), "missing field"))?;
            Ok(Component::declared(
                &c.id,
                basis,
                canonical,
                euler,
                c.form.clone(),
            ))
        }
    }
}

impl ScenarioFile {
    /// Converts to core types, checking that every identifier resolves.
    pub fn to_scenario(&self) -> Result<Scenario, ScenarioError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(schema(
                "schema_version",
                format!(
                    "unsupported version {}, expected {SCHEMA_VERSION}",
                    self.schema_version
                ),
            ));
        }
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(k, c)| component_from(c, &format!("components[{k}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let mut double_curves = Vec::new();
        for (k, c) in self.double_curves.iter().enumerate() {
            let path = format!("double_curves[{k}]");
            let geometry = geometry_from(&c.geometry, &format!("{path}.geometry"))?;
            let sides = c
                .sides
                .iter()
                .enumerate()
                .map(|(s, side)| {
                    Ok(Side {
                        component: side.component.clone(),
                        label: side.label.clone(),
                        curve_class: side.curve_class.clone(),
                        normal_class: class_from(
                            &side.normal,
                            &geometry,
                            &format!("{path}.sides[{s}].normal"),
                        )?,
                    })
                })
                .collect::<Result<Vec<_>, ScenarioError>>()?;
            let triple_marks = c
                .triple_marks
                .iter()
                .enumerate()
                .map(|(m, mark)| {
                    Ok(TripleMark {
                        triple_point: mark.triple_point.clone(),
                        location: point_from(
                            &mark.location,
                            &format!("{path}.triple_marks[{m}].location"),
                        )?,
                    })
                })
                .collect::<Result<Vec<_>, ScenarioError>>()?;
            double_curves.push(DoubleCurve {
                id: c.id.clone(),
                geometry,
                sides,
                triple_marks,
                twist: c.twist.map(|t| t.value()),
                gluing_unit: c.gluing_unit.map(|u| u.value()),
            });
        }
        let triple_points = self
            .triple_points
            .iter()
            .map(|t| TriplePoint {
                id: t.id.clone(),
                incident: t
                    .incident
                    .iter()
                    .map(|i| Incidence {
                        component: i.component.clone(),
                        curves: i.curves.clone(),
                    })
                    .collect(),
                sigma: t
                    .sigma
                    .iter()
                    .map(|s| SigmaEntry {
                        order: s.order.clone(),
                        sign: s.sign,
                    })
                    .collect(),
            })
            .collect();
        let surface = SncSurface {
            components,
            double_curves,
            triple_points,
        };
        let mut steps = Vec::new();
        for (k, s) in self.blowup_plan.iter().enumerate() {
            let path = format!("blowup_plan[{k}]");
            let mode = match (s.mode, &s.component) {
                (ModeTag::BothSides, None) if s.side.is_none() => BlowupMode::BothSides,
                (ModeTag::OneSide, Some(c)) => BlowupMode::OneSide {
                    component: c.clone(),
                    side: s.side,
                },
                (ModeTag::BothSides, _) => {
                    return Err(schema(path, "both_sides steps take no component or side"))
                }
                (ModeTag::OneSide, None) => {
                    return Err(schema(
                        format!("{path}.component"),
                        "one_side steps require a component",
                    ))
                }
            };
            let points = s
                .points
                .iter()
                .enumerate()
                .map(|(p, pt)| point_from(pt, &format!("{path}.points[{p}]")))
                .collect::<Result<Vec<_>, _>>()?;
            steps.push(BlowupStep {
                curve: s.curve.clone(),
                points,
                mode,
            });
        }
        let plan = BlowupPlan { steps };
        let problems = unresolved_ids(&surface, &plan);
        if !problems.is_empty() {
            return Err(ScenarioError::Semantic(problems));
        }
        Ok(Scenario {
            name: self.name.clone(),
            description: self.description.clone(),
            surface,
            plan,
            declared_b1: self.declared_b1,
            expected: self.expected.clone().unwrap_or_default(),
            notes: self.notes.clone(),
        })
    }
}

/// Identifiers that do not resolve, in the surface or in the plan.
pub fn unresolved_ids(surface: &SncSurface, plan: &BlowupPlan) -> Vec<String> {
    let mut out: Vec<String> = validate_structure(surface)
        .into_iter()
        .filter(|d| d.invariant == "dangling-id" || d.invariant == "unique-id")
        .map(|d| d.message)
        .collect();
    for (k, step) in plan.steps.iter().enumerate() {
        match surface.curve(&step.curve) {
            None => out.push(format!(
                "blow-up step {k} references unknown double curve {}",
                step.curve
            )),
            Some(curve) => {
                if let BlowupMode::OneSide { component, .. } = &step.mode {
                    if !curve.sides.iter().any(|s| &s.component == component) {
                        out.push(format!(
                            "blow-up step {k} names component {component}, which is not a side of {}",
                            curve.id
                        ));
                    }
                }
            }
        }
    }
    out
}

fn point_to(p: &CurvePoint) -> PointDto {
    match p {
        CurvePoint::Label { name, coord } => PointDto {
            label: Some(name.clone()),
            coord: coord.map(ComplexStr::from_value),
            lattice: None,
        },
        CurvePoint::Lattice(l) => PointDto {
            label: None,
            coord: None,
            lattice: Some([RatStr(l.a()), RatStr(l.b())]),
        },
    }
}

fn geometry_to(g: &CurveGeometry) -> GeometryDto {
    GeometryDto {
        genus: g.genus(),
        tau: g.tau().map(ComplexStr::from_value),
    }
}

fn component_to(c: &Component) -> ComponentDto {
    let mut dto = ComponentDto {
        id: c.id.clone(),
        kind: KindTag::Declared,
        degree: None,
        tau: None,
        class_basis: None,
        canonical_class: None,
        euler_char: None,
        form: None,
    };
    match &c.kind {
        ComponentKind::ProjectivePlane => dto.kind = KindTag::ProjectivePlane,
        ComponentKind::Quadric => dto.kind = KindTag::Quadric,
        ComponentKind::RuledElliptic { degree, base } => {
            dto.kind = KindTag::RuledElliptic;
            dto.degree = Some(*degree);
            dto.tau = base.tau().map(ComplexStr::from_value);
        }
        ComponentKind::Declared { form } => {
            dto.class_basis = Some(c.class_basis.clone());
            dto.canonical_class = Some(c.canonical_class.clone());
            dto.euler_char = Some(c.euler_char);
            dto.form = form.clone();
        }
    }
    dto
}

/// File representation of a plan.
pub fn plan_to_dto(plan: &BlowupPlan) -> Vec<StepDto> {
    plan.steps
        .iter()
        .map(|step| {
            let (mode, component, side) = match &step.mode {
                BlowupMode::BothSides => (ModeTag::BothSides, None, None),
                BlowupMode::OneSide { component, side } => {
                    (ModeTag::OneSide, Some(component.clone()), *side)
                }
            };
            StepDto {
                curve: step.curve.clone(),
                mode,
                component,
                side,
                points: step.points.iter().map(point_to).collect(),
            }
        })
        .collect()
}

impl Scenario {
    /// Converts to the file representation.
    ///
    /// Components must be unblown: the format describes surfaces before the
    /// plan runs.
    pub fn to_file(&self) -> ScenarioFile {
        let s = &self.surface;
        ScenarioFile {
            schema_version: SCHEMA_VERSION,
            name: self.name.clone(),
            description: self.description.clone(),
            components: s.components.iter().map(component_to).collect(),
            double_curves: s
                .double_curves
                .iter()
                .map(|c| CurveDto {
                    id: c.id.clone(),
                    geometry: geometry_to(&c.geometry),
                    sides: c
                        .sides
                        .iter()
                        .map(|side| SideDto {
                            component: side.component.clone(),
                            label: side.label.clone(),
                            curve_class: side.curve_class.clone(),
                            normal: ClassDto {
                                degree: side.normal_class.degree(),
                                jacobian_point: side
                                    .normal_class
                                    .jacobian_point()
                                    .map(|p| [RatStr(p.a()), RatStr(p.b())]),
                            },
                        })
                        .collect(),
                    triple_marks: c
                        .triple_marks
                        .iter()
                        .map(|m| MarkDto {
                            triple_point: m.triple_point.clone(),
                            location: point_to(&m.location),
                        })
                        .collect(),
                    twist: c.twist.map(ComplexStr::from_value),
                    gluing_unit: c.gluing_unit.map(ComplexStr::from_value),
                })
                .collect(),
            triple_points: s
                .triple_points
                .iter()
                .map(|t| TripleDto {
                    id: t.id.clone(),
                    incident: t
                        .incident
                        .iter()
                        .map(|i| IncidenceDto {
                            component: i.component.clone(),
                            curves: i.curves.clone(),
                        })
                        .collect(),
                    sigma: t
                        .sigma
                        .iter()
                        .map(|e| SigmaDto {
                            order: e.order.clone(),
                            sign: e.sign,
                        })
                        .collect(),
                })
                .collect(),
            blowup_plan: plan_to_dto(&self.plan),
            declared_b1: self.declared_b1,
            expected: (self.expected != Expected::default()).then(|| self.expected.clone()),
            notes: self.notes.clone(),
        }
    }

    /// Pretty-printed JSON of the file representation, with a trailing
    /// newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("scenario serializes");
        s.push('\n');
        s
    }
}
