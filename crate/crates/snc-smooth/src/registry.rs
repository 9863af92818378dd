//! Built-in scenarios.
//!
//! Named scenarios are fixed configurations with regression assertions.
//! Families are parametrized constructions; every named scenario except the
//! plane configurations and the quadric pipeline is an instance of one.

use std::collections::BTreeMap;

use thiserror::Error;

use snc_core::blowup::{plan_blowups_to_trivialize, BlowupMode, BlowupPlan, BlowupStep};
use snc_core::model::{
    permutation_sign, Component, DoubleCurve, Incidence, Side, SigmaEntry, SncSurface, TripleMark,
    TriplePoint,
};
use snc_core::pic::{CurveGeometry, CurvePoint, LatticePoint, LineBundleClass};
use snc_core::{gauss, i_pow, GaussRational};

use crate::schema::{Expected, Scenario};

/// Failure to build a built-in scenario.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    /// Neither a named scenario nor a family.
    #[error("unknown scenario {0:?} (run `snc-smooth list`)")]
    Unknown(String),
    /// A parameter the family does not take.
    #[error("{family} has no parameter {param:?}")]
    UnknownParam {
        /// Family name.
        family: String,
        /// Offending parameter.
        param: String,
    },
    /// A parameter outside its range.
    #[error("{family}: parameter {param} = {value} is outside {min}..={max}")]
    OutOfRange {
        /// Family name.
        family: String,
        /// Parameter.
        param: String,
        /// Given value.
        value: i64,
        /// Smallest allowed value.
        min: i64,
        /// Largest allowed value.
        max: i64,
    },
    /// Parameters given to a fixed scenario.
    #[error("{0} is a fixed scenario and takes no parameters")]
    NotParametric(String),
}

/// One integer parameter of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamSpec {
    /// Name used with `--param name=value`.
    pub name: &'static str,
    /// Default value.
    pub default: i64,
    /// Smallest allowed value.
    pub min: i64,
    /// Largest allowed value.
    pub max: i64,
    /// One-line meaning.
    pub help: &'static str,
}

/// A parametrized construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilySpec {
    /// Family name.
    pub name: &'static str,
    /// One-line description.
    pub summary: &'static str,
    /// Parameters.
    pub params: &'static [ParamSpec],
}

const fn param(
    name: &'static str,
    default: i64,
    min: i64,
    max: i64,
    help: &'static str,
) -> ParamSpec {
    ParamSpec {
        name,
        default,
        min,
        max,
        help,
    }
}

/// Every family.
pub const FAMILIES: &[FamilySpec] = &[
    FamilySpec {
        name: "k3-double",
        summary: "two planes glued along a cubic, blown up at 9+3d and 9-3d points",
        params: &[param("d", 0, 0, 3, "degree shift of the blow-up split")],
    },
    FamilySpec {
        name: "torus-chain",
        summary: "cyclic chain of N ruled surfaces over an elliptic curve",
        params: &[
            param("N", 2, 1, 12, "number of components"),
            param("d", 0, 0, 3, "zero section self-intersection is 3d"),
        ],
    },
    FamilySpec {
        name: "typeII-chain",
        summary: "blown-up planes joined by a chain of N-2 ruled elliptic surfaces",
        params: &[
            param("N", 2, 2, 12, "number of components"),
            param("d", 1, 0, 3, "zero section self-intersection is 3d"),
        ],
    },
    FamilySpec {
        name: "fujita",
        summary: "two ruled elliptic surfaces glued with one gluing map rotated by i^k",
        params: &[param(
            "k",
            0,
            0,
            3,
            "rotation exponent of the second gluing",
        )],
    },
    FamilySpec {
        name: "fujita-general",
        summary: "four ruled elliptic surfaces in a cycle with gluings rotated by i^k1..i^k4",
        params: &[
            param("k1", 1, 0, 3, "rotation exponent of gluing 1"),
            param("k2", 1, 0, 3, "rotation exponent of gluing 2"),
            param("k3", 1, 0, 3, "rotation exponent of gluing 3"),
            param("k4", 1, 0, 3, "rotation exponent of gluing 4"),
        ],
    },
];

const FIXED: &[&str] = &[
    "tetrahedron",
    "tetra-blown",
    "two-triple",
    "two-triple-repaired",
    "three-triple",
    "three-triple-repaired",
    "quadric-initial",
    "quadric-naive",
    "quadric-pipeline",
    "fujita-general",
];

/// Names of every named scenario, in listing order.
pub fn scenario_names() -> Vec<String> {
    let mut out: Vec<String> = FIXED[..6].iter().map(|s| s.to_string()).collect();
    out.extend((0..=3).map(|d| format!("k3-double-d{d}")));
    for n in 1..=3 {
        out.extend((0..=3).map(|d| format!("torus-chain-N{n}-d{d}")));
    }
    out.extend((2..=5).map(|n| format!("typeII-chain-N{n}")));
    out.extend((0..=3).map(|k| format!("fujita-k{k}")));
    out.extend(FIXED[6..].iter().map(|s| s.to_string()));
    out
}

/// The family with the given name.
pub fn family_spec(name: &str) -> Option<&'static FamilySpec> {
    FAMILIES.iter().find(|f| f.name == name)
}

/// Builds a named scenario.
pub fn named_scenario(name: &str) -> Option<Scenario> {
    if !scenario_names().iter().any(|n| n == name) {
        return None;
    }
    let num = |s: &str| s.parse::<i64>().ok();
    let scenario = match name {
        "tetrahedron" => tetrahedron(),
        "tetra-blown" => tetra_blown(),
        "two-triple" => two_triple(false),
        "two-triple-repaired" => two_triple(true),
        "three-triple" => three_triple(false),
        "three-triple-repaired" => three_triple(true),
        "quadric-initial" => quadric(QuadricPlan::None),
        "quadric-naive" => quadric(QuadricPlan::Naive),
        "quadric-pipeline" => quadric(QuadricPlan::Pipeline),
        "fujita-general" => fujita_general([1, 1, 1, 1]),
        _ => {
            if let Some(d) = name.strip_prefix("k3-double-d") {
                k3_double(num(d)?)
            } else if let Some(rest) = name.strip_prefix("torus-chain-N") {
                let (n, d) = rest.split_once("-d")?;
                torus_chain(num(n)? as usize, num(d)?)
            } else if let Some(n) = name.strip_prefix("typeII-chain-N") {
                type_ii_chain(num(n)? as usize, 1)
            } else {
                let k = name.strip_prefix("fujita-k")?;
                fujita(num(k)?)
            }
        }
    };
    Some(scenario)
}

/// Builds a family instance. Missing parameters take their defaults.
pub fn family_scenario(
    name: &str,
    params: &BTreeMap<String, i64>,
) -> Result<Scenario, RegistryError> {
    let spec = family_spec(name).ok_or_else(|| RegistryError::Unknown(name.to_string()))?;
    for key in params.keys() {
        if !spec.params.iter().any(|p| p.name == key) {
            return Err(RegistryError::UnknownParam {
                family: name.to_string(),
                param: key.clone(),
            });
        }
    }
    let mut values = BTreeMap::new();
    for p in spec.params {
        let value = params.get(p.name).copied().unwrap_or(p.default);
        if value < p.min || value > p.max {
            return Err(RegistryError::OutOfRange {
                family: name.to_string(),
                param: p.name.to_string(),
                value,
                min: p.min,
                max: p.max,
            });
        }
        values.insert(p.name, value);
    }
    let v = |k: &str| values[k];
    Ok(match name {
        "k3-double" => k3_double(v("d")),
        "torus-chain" => torus_chain(v("N") as usize, v("d")),
        "typeII-chain" => type_ii_chain(v("N") as usize, v("d")),
        "fujita" => fujita(v("k")),
        "fujita-general" => fujita_general([v("k1"), v("k2"), v("k3"), v("k4")]),
        _ => unreachable!("every family spec has a builder"),
    })
}

/// Resolves a name with optional parameters.
///
/// Without parameters named scenarios take precedence. With parameters the
/// name must be a family.
pub fn resolve(name: &str, params: &BTreeMap<String, i64>) -> Result<Scenario, RegistryError> {
    if params.is_empty() {
        if let Some(s) = named_scenario(name) {
            return Ok(s);
        }
    }
    if family_spec(name).is_some() {
        return family_scenario(name, params);
    }
    if named_scenario(name).is_some() {
        return Err(RegistryError::NotParametric(name.to_string()));
    }
    Err(RegistryError::Unknown(name.to_string()))
}

/// Every named scenario, in listing order.
pub fn all_named() -> Vec<Scenario> {
    scenario_names()
        .iter()
        .map(|n| named_scenario(n).expect("listed scenarios build"))
        .collect()
}

// Construction helpers.

fn rational_side(component: &str, class: Vec<i64>, normal: i64) -> Side {
    Side {
        component: component.to_string(),
        label: None,
        curve_class: class,
        normal_class: LineBundleClass::of_degree(CurveGeometry::Rational, normal),
    }
}

fn elliptic_side(component: &str, label: Option<&str>, class: Vec<i64>, normal: i64) -> Side {
    Side {
        component: component.to_string(),
        label: label.map(String::from),
        curve_class: class,
        normal_class: LineBundleClass::of_degree(square_torus(), normal),
    }
}

fn square_torus() -> CurveGeometry {
    CurveGeometry::square_lattice()
}

fn labels(prefix: &str, n: usize) -> Vec<CurvePoint> {
    (1..=n)
        .map(|k| CurvePoint::label(format!("{prefix}{k}")))
        .collect()
}

fn one_side(curve: &str, component: &str, points: Vec<CurvePoint>) -> BlowupStep {
    BlowupStep {
        curve: curve.to_string(),
        points,
        mode: BlowupMode::one_side(component),
    }
}

fn declared_plane(id: &str) -> Component {
    Component::declared(id, vec!["H".into()], vec![-3], 3, Some(vec![vec![1]]))
}

fn minus_one() -> GaussRational {
    gauss(-1, 0)
}

/// Planes `H0..H3` with lines `Lij` for the given pairs and triple points
/// `Tijk` for the given triples. Lines have class `H` and normal degree 1 on
/// both sides; `σ` at `Tijk` is the sign of the permutation `(i, j, k, l)` of
/// `(0, 1, 2, 3)` where `l` is the missing index.
fn plane_configuration(
    declared: bool,
    lines: &[(usize, usize)],
    triples: &[(usize, usize, usize)],
) -> SncSurface {
    let plane = |i: usize| format!("H{i}");
    let line = |i: usize, j: usize| format!("L{}{}", i.min(j), i.max(j));
    let components = (0..4)
        .map(|i| {
            if declared {
                declared_plane(&plane(i))
            } else {
                Component::projective_plane(plane(i))
            }
        })
        .collect();
    let double_curves = lines
        .iter()
        .map(|&(i, j)| {
            let id = line(i, j);
            let triple_marks = triples
                .iter()
                .filter(|t| [t.0, t.1, t.2].contains(&i) && [t.0, t.1, t.2].contains(&j))
                .map(|&(a, b, c)| TripleMark {
                    triple_point: format!("T{a}{b}{c}"),
                    location: CurvePoint::label(format!("T{a}{b}{c}")),
                })
                .collect();
            DoubleCurve {
                id,
                geometry: CurveGeometry::Rational,
                sides: vec![
                    rational_side(&plane(i), vec![1], 1),
                    rational_side(&plane(j), vec![1], 1),
                ],
                triple_marks,
                twist: Some(minus_one()),
                gluing_unit: None,
            }
        })
        .collect();
    let triple_points = triples
        .iter()
        .map(|&(a, b, c)| {
            let l = (0..4)
                .find(|x| ![a, b, c].contains(x))
                .expect("three of four planes");
            let sign = permutation_sign(&[0, 1, 2, 3], &[a, b, c, l]).expect("permutation");
            TriplePoint {
                id: format!("T{a}{b}{c}"),
                incident: [(a, b, c), (b, a, c), (c, a, b)]
                    .iter()
                    .map(|&(x, y, z)| Incidence {
                        component: plane(x),
                        curves: [line(x, y), line(x, z)],
                    })
                    .collect(),
                sigma: vec![SigmaEntry {
                    order: [plane(a), plane(b), plane(c)],
                    sign,
                }],
            }
        })
        .collect();
    SncSurface {
        components,
        double_curves,
        triple_points,
    }
}

const ALL_LINES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn degrees(pairs: &[(&str, i64)]) -> Option<BTreeMap<String, i64>> {
    Some(pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect())
}

fn all_degrees(s: &SncSurface, degree: i64) -> Option<BTreeMap<String, i64>> {
    Some(
        s.double_curves
            .iter()
            .map(|c| (c.id.clone(), degree))
            .collect(),
    )
}

fn euler_after(surface: &SncSurface, plan: &BlowupPlan) -> BTreeMap<String, i64> {
    let mut out: BTreeMap<String, i64> = surface
        .components
        .iter()
        .map(|c| (c.id.clone(), c.euler_char))
        .collect();
    for step in &plan.steps {
        let curve = surface
            .curve(&step.curve)
            .expect("plan names a known curve");
        let comps: Vec<&str> = match &step.mode {
            BlowupMode::BothSides => curve.sides.iter().map(|s| s.component.as_str()).collect(),
            BlowupMode::OneSide { component, .. } => vec![component.as_str()],
        };
        for c in comps {
            *out.get_mut(c).expect("side component exists") += step.points.len() as i64;
        }
    }
    out
}

fn tetrahedron() -> Scenario {
    let surface = plane_configuration(
        false,
        &ALL_LINES,
        &[(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)],
    );
    Scenario {
        name: "tetrahedron".into(),
        description: "four coordinate planes of projective 3-space".into(),
        expected: Expected {
            structure_ok: Some(true),
            anticanonical_ok: Some(true),
            collective_degrees: all_degrees(&surface, 4),
            d_semistable: Some(false),
            residue_ok: Some(true),
            h0_dim: Some(1),
            chi_fiber: Some(0),
            classification: Some("Unknown".into()),
            ..Expected::default()
        },
        surface,
        plan: BlowupPlan::default(),
        declared_b1: None,
        notes: vec![
            "each line carries two triple points, so the collective class is O(4) everywhere"
                .into(),
        ],
    }
}

fn tetra_blown() -> Scenario {
    let base = tetrahedron();
    let plan = plan_blowups_to_trivialize(&base.surface).expect("tetrahedron is plannable");
    let euler = euler_after(&base.surface, &plan);
    Scenario {
        name: "tetra-blown".into(),
        description: "tetrahedron blown up at two points of every line on both sides".into(),
        expected: Expected {
            mismatch: Some(false),
            structure_ok: Some(true),
            anticanonical_ok: Some(true),
            collective_degrees: all_degrees(&base.surface, 0),
            d_semistable: Some(true),
            residue_ok: Some(true),
            h0_dim: Some(1),
            component_euler: Some(euler),
            chi_fiber: Some(24),
            classification: Some("K3".into()),
            ..Expected::default()
        },
        plan,
        notes: vec!["12 centers, each blown up on both planes through its line".into()],
        ..base
    }
}

fn two_triple(repaired: bool) -> Scenario {
    let lines = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)];
    let surface = plane_configuration(true, &lines, &[(0, 1, 2), (1, 2, 3)]);
    let chi_before = -2;
    let mut s = Scenario {
        name: "two-triple".into(),
        description: "four planes, five lines, two triple points (as declared)".into(),
        expected: Expected {
            structure_ok: Some(true),
            anticanonical_ok: Some(false),
            collective_degrees: degrees(&[("L01", 3), ("L02", 3), ("L12", 4), ("L13", 3), ("L23", 3)]),
            d_semistable: Some(false),
            residue_ok: Some(true),
            h0_dim: Some(1),
            chi_fiber: Some(chi_before),
            classification: Some("Unknown".into()),
            ..Expected::default()
        },
        surface,
        plan: BlowupPlan::default(),
        declared_b1: None,
        notes: vec![
            "the configuration is intended to smooth to a K3 surface with every line carrying O(4)".into(),
            "with the declared incidences singly marked lines carry degree 3 and H0, H3 fail the anticanonical test".into(),
        ],
    };
    if repaired {
        complete_with_planner(&mut s, "two-triple-repaired", 14);
    }
    s
}

fn three_triple(repaired: bool) -> Scenario {
    let surface = plane_configuration(true, &ALL_LINES, &[(0, 1, 3), (0, 2, 3), (1, 2, 3)]);
    let mut s = Scenario {
        name: "three-triple".into(),
        description: "four planes, six lines, three triple points (as declared)".into(),
        expected: Expected {
            structure_ok: Some(true),
            anticanonical_ok: Some(true),
            collective_degrees: degrees(&[
                ("L01", 3),
                ("L02", 3),
                ("L03", 4),
                ("L12", 3),
                ("L13", 4),
                ("L23", 4),
            ]),
            d_semistable: Some(false),
            residue_ok: Some(true),
            h0_dim: Some(1),
            chi_fiber: Some(-3),
            classification: Some("Unknown".into()),
            ..Expected::default()
        },
        surface,
        plan: BlowupPlan::default(),
        declared_b1: None,
        notes: vec![
            "the configuration is intended to smooth to a K3 surface with every line carrying O(4)"
                .into(),
            "with the declared incidences singly marked lines carry degree 3".into(),
        ],
    };
    if repaired {
        complete_with_planner(&mut s, "three-triple-repaired", 18);
    }
    s
}

/// Replaces the plan with the planner's and updates the expectations to the
/// values computed for the completed surface.
fn complete_with_planner(s: &mut Scenario, name: &str, chi: i64) {
    s.plan = plan_blowups_to_trivialize(&s.surface).expect("plane configurations are plannable");
    s.name = name.into();
    s.description = s
        .description
        .replace("(as declared)", "(planner-completed)");
    s.expected.mismatch = Some(false);
    s.expected.collective_degrees = all_degrees(&s.surface, 0);
    s.expected.d_semistable = Some(true);
    s.expected.component_euler = Some(euler_after(&s.surface, &s.plan));
    s.expected.chi_fiber = Some(chi);
    s.expected.classification = Some("Unknown".into());
    s.notes.push(format!(
        "after completion the fiber Euler number is {chi}, not the 24 of a K3 surface"
    ));
}

enum QuadricPlan {
    None,
    Naive,
    Pipeline,
}

fn quadric(which: QuadricPlan) -> Scenario {
    let marks = || {
        ["t1", "t2"]
            .iter()
            .map(|t| TripleMark {
                triple_point: t.to_string(),
                location: CurvePoint::label(*t),
            })
            .collect::<Vec<_>>()
    };
    let curve = |id: &str, sides: Vec<Side>| DoubleCurve {
        id: id.into(),
        geometry: CurveGeometry::Rational,
        sides,
        triple_marks: marks(),
        twist: Some(minus_one()),
        gluing_unit: None,
    };
    let surface = SncSurface {
        components: vec![
            Component::projective_plane("H1"),
            Component::projective_plane("H2"),
            Component::quadric("H3"),
        ],
        double_curves: vec![
            curve(
                "C1",
                vec![
                    rational_side("H2", vec![2], 4),
                    rational_side("H3", vec![1, 1], 2),
                ],
            ),
            curve(
                "C2",
                vec![
                    rational_side("H1", vec![2], 4),
                    rational_side("H3", vec![1, 1], 2),
                ],
            ),
            curve(
                "C3",
                vec![
                    rational_side("H1", vec![1], 1),
                    rational_side("H2", vec![1], 1),
                ],
            ),
        ],
        triple_points: ["t1", "t2"]
            .iter()
            .map(|t| TriplePoint {
                id: t.to_string(),
                incident: vec![
                    Incidence {
                        component: "H1".into(),
                        curves: ["C2".into(), "C3".into()],
                    },
                    Incidence {
                        component: "H2".into(),
                        curves: ["C1".into(), "C3".into()],
                    },
                    Incidence {
                        component: "H3".into(),
                        curves: ["C1".into(), "C2".into()],
                    },
                ],
                sigma: vec![SigmaEntry {
                    order: ["H1".into(), "H2".into(), "H3".into()],
                    sign: 1,
                }],
            })
            .collect(),
    };
    let base_expected = Expected {
        structure_ok: Some(true),
        anticanonical_ok: Some(true),
        residue_ok: Some(true),
        h0_dim: Some(1),
        ..Expected::default()
    };
    match which {
        QuadricPlan::None => Scenario {
            name: "quadric-initial".into(),
            description: "two planes and a quadric before any blow-up".into(),
            expected: Expected {
                collective_degrees: degrees(&[("C1", 8), ("C2", 8), ("C3", 4)]),
                d_semistable: Some(false),
                chi_fiber: Some(4),
                classification: Some("Unknown".into()),
                ..base_expected
            },
            surface,
            plan: BlowupPlan::default(),
            declared_b1: None,
            notes: vec!["the conics C1, C2 and the line C3 all pass through t1 and t2".into()],
        },
        QuadricPlan::Naive => {
            let mut c1 = labels("C1#n", 7);
            c1.insert(0, CurvePoint::label("t1"));
            Scenario {
                name: "quadric-naive".into(),
                description: "two planes and a quadric with a plan that blows up a triple point".into(),
                expected: Expected {
                    mismatch: Some(true),
                    mismatch_curves: Some(vec!["C1".into(), "C3".into()]),
                    ..Expected::default()
                },
                plan: BlowupPlan {
                    steps: vec![
                        one_side("C3", "H1", labels("C3#n", 4)),
                        one_side("C1", "H2", c1),
                        one_side("C2", "H3", labels("C2#n", 8)),
                    ],
                },
                surface,
                declared_b1: None,
                notes: vec![
                    "blowing up H2 at t1 separates C1 from C3 on H2 only, so the gluing of C1 and C3 breaks"
                        .into(),
                ],
            }
        }
        QuadricPlan::Pipeline => {
            let plan = BlowupPlan {
                steps: vec![
                    one_side("C2", "H1", labels("C2#p", 8)),
                    one_side("C1", "H2", labels("C1#p", 8)),
                    one_side("C3", "H1", labels("C3#p", 4)),
                ],
            };
            Scenario {
                name: "quadric-pipeline".into(),
                description:
                    "two planes and a quadric blown up one-sidedly away from triple points".into(),
                expected: Expected {
                    mismatch: Some(false),
                    collective_degrees: degrees(&[("C1", 0), ("C2", 0), ("C3", 0)]),
                    d_semistable: Some(true),
                    component_euler: Some(euler_after(&surface, &plan)),
                    chi_fiber: Some(24),
                    classification: Some("K3".into()),
                    ..base_expected
                },
                plan,
                surface,
                declared_b1: None,
                notes: vec![
                    "H1 absorbs 12 centers, H2 absorbs 8 and the quadric is untouched".into(),
                ],
            }
        }
    }
}

/// `n` distinct lattice points summing to zero, tagged by `batch` so that
/// different batches are disjoint.
fn zero_sum_points(n: usize, batch: i64) -> Vec<CurvePoint> {
    if n == 0 {
        return Vec::new();
    }
    const M: i64 = 97;
    let mut pts: Vec<LatticePoint> = (1..n as i64)
        .map(|j| LatticePoint::from_ratios((j, M), (batch + 1, M)))
        .collect();
    let sum = pts.iter().fold(LatticePoint::zero(), |acc, p| acc + *p);
    pts.push(-sum);
    pts.into_iter().map(CurvePoint::Lattice).collect()
}

fn k3_double(d: i64) -> Scenario {
    let geometry = square_torus();
    let surface = SncSurface {
        components: vec![
            Component::projective_plane("X1"),
            Component::projective_plane("X2"),
        ],
        double_curves: vec![DoubleCurve {
            id: "C".into(),
            geometry,
            sides: vec![
                elliptic_side("X1", None, vec![3], 9),
                elliptic_side("X2", None, vec![3], 9),
            ],
            triple_marks: Vec::new(),
            twist: Some(minus_one()),
            gluing_unit: Some(gauss(1, 0)),
        }],
        triple_points: Vec::new(),
    };
    let mut steps = vec![one_side(
        "C",
        "X1",
        zero_sum_points((9 + 3 * d) as usize, 0),
    )];
    if 9 - 3 * d > 0 {
        steps.push(one_side(
            "C",
            "X2",
            zero_sum_points((9 - 3 * d) as usize, 1),
        ));
    }
    let plan = BlowupPlan { steps };
    Scenario {
        name: format!("k3-double-d{d}"),
        description: format!(
            "two planes glued along a cubic, blown up at {} and {} points of it",
            9 + 3 * d,
            9 - 3 * d
        ),
        expected: Expected {
            mismatch: Some(false),
            structure_ok: Some(true),
            anticanonical_ok: Some(true),
            collective_degrees: degrees(&[("C", 0)]),
            d_semistable: Some(true),
            residue_ok: Some(true),
            h0_dim: Some(1),
            component_euler: Some(
                [("X1".to_string(), 12 + 3 * d), ("X2".to_string(), 12 - 3 * d)]
                    .into_iter()
                    .collect(),
            ),
            chi_fiber: Some(24),
            classification: Some("K3".into()),
            ..Expected::default()
        },
        surface,
        plan,
        declared_b1: None,
        notes: vec!["each batch of centers sums to zero in the group law, so the Jacobian point stays trivial".into()],
    }
}

/// Cyclic chain of ruled surfaces. Curve `Di` glues the infinity section of
/// `Xi` to the zero section of `X(i+1)` with the given twist and gluing unit.
fn ruled_cycle(n: usize, d: i64, gluings: &[(GaussRational, GaussRational)]) -> SncSurface {
    let comp = |i: usize| format!("X{}", (i % n) + 1);
    let components = (0..n)
        .map(|i| Component::ruled_elliptic(comp(i), 3 * d, square_torus()))
        .collect();
    let self_glued = n == 1;
    let double_curves = (0..n)
        .map(|i| {
            let (twist, unit) = gluings[i];
            DoubleCurve {
                id: format!("D{}", i + 1),
                geometry: square_torus(),
                sides: vec![
                    elliptic_side(&comp(i), self_glued.then_some("inf"), vec![0, 1], -3 * d),
                    elliptic_side(
                        &comp(i + 1),
                        self_glued.then_some("zero"),
                        vec![1, 0],
                        3 * d,
                    ),
                ],
                triple_marks: Vec::new(),
                twist: Some(twist),
                gluing_unit: Some(unit),
            }
        })
        .collect();
    SncSurface {
        components,
        double_curves,
        triple_points: Vec::new(),
    }
}

fn torus_chain(n: usize, d: i64) -> Scenario {
    let surface = ruled_cycle(n, d, &vec![(minus_one(), gauss(1, 0)); n]);
    let b1 = if d == 0 { 4 } else { 3 };
    Scenario {
        name: format!("torus-chain-N{n}-d{d}"),
        description: format!(
            "cycle of {n} ruled surface{} over the square torus, sections of self-intersection ±{}",
            if n == 1 { "" } else { "s" },
            3 * d
        ),
        expected: Expected {
            structure_ok: Some(true),
            anticanonical_ok: Some(true),
            collective_degrees: all_degrees(&surface, 0),
            d_semistable: Some(true),
            residue_ok: Some(true),
            h0_dim: Some(1),
            chi_fiber: Some(0),
            classification: Some(if d == 0 { "ComplexTorus" } else { "PrimaryKodaira" }.into()),
            ..Expected::default()
        },
        surface,
        plan: BlowupPlan::default(),
        declared_b1: Some(b1),
        notes: vec![format!(
            "the smoothed fiber is a circle bundle over a degree {} circle bundle on the torus, so b1 = {b1}",
            3 * d
        )],
    }
}

fn type_ii_chain(n: usize, d: i64) -> Scenario {
    let torus = square_torus();
    let end = |id: &str, blowups: i64| {
        let k = blowups as usize;
        let mut basis = vec!["H".to_string()];
        basis.extend((1..=k).map(|j| format!("E{j}")));
        let mut canonical = vec![-3];
        canonical.extend(std::iter::repeat_n(1, k));
        let form = (0..=k)
            .map(|r| {
                (0..=k)
                    .map(|c| {
                        if r != c {
                            0
                        } else if r == 0 {
                            1
                        } else {
                            -1
                        }
                    })
                    .collect()
            })
            .collect();
        Component::declared(id, basis, canonical, 3 + blowups, Some(form))
    };
    let cubic_class = |blowups: i64| {
        let mut c = vec![3];
        c.extend(std::iter::repeat_n(-1, blowups as usize));
        c
    };
    let last = format!("X{n}");
    let mut components = vec![end("X1", 9 + 3 * d)];
    components
        .extend((2..n).map(|i| Component::ruled_elliptic(format!("X{i}"), 3 * d, torus.clone())));
    components.push(end(&last, 9 - 3 * d));
    let side_of = |i: usize, toward_next: bool| -> Side {
        let id = format!("X{i}");
        if i == 1 {
            elliptic_side(&id, None, cubic_class(9 + 3 * d), -3 * d)
        } else if i == n {
            elliptic_side(&id, None, cubic_class(9 - 3 * d), 3 * d)
        } else if toward_next {
            elliptic_side(&id, None, vec![0, 1], -3 * d)
        } else {
            elliptic_side(&id, None, vec![1, 0], 3 * d)
        }
    };
    let double_curves: Vec<DoubleCurve> = (1..n)
        .map(|i| DoubleCurve {
            id: format!("D{i}"),
            geometry: torus.clone(),
            sides: vec![side_of(i, true), side_of(i + 1, false)],
            triple_marks: Vec::new(),
            twist: Some(minus_one()),
            gluing_unit: Some(gauss(1, 0)),
        })
        .collect();
    let surface = SncSurface {
        components,
        double_curves,
        triple_points: Vec::new(),
    };
    let name = if d == 1 {
        format!("typeII-chain-N{n}")
    } else {
        format!("typeII-chain-N{n}-d{d}")
    };
    Scenario {
        name,
        description: format!(
            "planes blown up at {} and {} points of a cubic, joined through {} ruled elliptic surface{}",
            9 + 3 * d,
            9 - 3 * d,
            n - 2,
            if n == 3 { "" } else { "s" }
        ),
        expected: Expected {
            structure_ok: Some(true),
            anticanonical_ok: Some(true),
            collective_degrees: all_degrees(&surface, 0),
            d_semistable: Some(true),
            residue_ok: Some(true),
            h0_dim: Some(1),
            chi_fiber: Some(24),
            classification: Some("K3".into()),
            ..Expected::default()
        },
        surface,
        plan: BlowupPlan::default(),
        declared_b1: None,
        notes: vec!["only the two ends contribute to the Euler number".into()],
    }
}

fn rotated(k: i64) -> (GaussRational, GaussRational) {
    (-i_pow(k), i_pow(-k))
}

fn fujita(k: i64) -> Scenario {
    let surface = ruled_cycle(2, 0, &[rotated(0), rotated(k)]);
    let trivial = k.rem_euclid(4) == 0;
    Scenario {
        name: format!("fujita-k{k}"),
        description: format!("two ruled elliptic surfaces, second gluing rotated by i^{k}"),
        expected: Expected {
            structure_ok: Some(true),
            anticanonical_ok: Some(true),
            collective_degrees: all_degrees(&surface, 0),
            d_semistable: Some(true),
            residue_ok: Some(trivial),
            h0_dim: Some(usize::from(trivial)),
            chi_fiber: Some(0),
            classification: Some(if trivial { "ComplexTorus" } else { "Unknown" }.into()),
            ..Expected::default()
        },
        surface,
        plan: BlowupPlan::default(),
        declared_b1: trivial.then_some(4),
        notes: vec![if trivial {
            "the untwisted cycle; volume forms glue".into()
        } else {
            "d-semistable, yet no nonzero volume form survives the rotated gluing".into()
        }],
    }
}

fn fujita_general(k: [i64; 4]) -> Scenario {
    let surface = ruled_cycle(4, 0, &k.map(rotated));
    let sum: i64 = k.iter().sum();
    let h0 = usize::from(sum.rem_euclid(4) == 0);
    let all_zero = k.iter().all(|x| x.rem_euclid(4) == 0);
    Scenario {
        name: if k == [1, 1, 1, 1] {
            "fujita-general".into()
        } else {
            format!("fujita-general-k{}-{}-{}-{}", k[0], k[1], k[2], k[3])
        },
        description: format!(
            "four ruled elliptic surfaces in a cycle with gluings rotated by i^{}, i^{}, i^{}, i^{}",
            k[0], k[1], k[2], k[3]
        ),
        expected: Expected {
            structure_ok: Some(true),
            anticanonical_ok: Some(true),
            d_semistable: Some(true),
            residue_ok: Some(all_zero),
            h0_dim: Some(h0),
            chi_fiber: Some(0),
            ..Expected::default()
        },
        surface,
        plan: BlowupPlan::default(),
        declared_b1: None,
        notes: vec![format!(
            "a volume form exists exactly when the exponents sum to 0 mod 4 (here {sum})"
        )],
    }
}
