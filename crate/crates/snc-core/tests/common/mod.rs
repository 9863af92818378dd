//! Surfaces shared by the integration tests.

#![allow(dead_code)]

use snc_core::model::{permutation_sign, Incidence, SigmaEntry};
use snc_core::{
    gauss, Component, CurveGeometry, CurvePoint, DoubleCurve, GaussRational, LatticePoint,
    LineBundleClass, Side, SncSurface, TripleMark, TriplePoint,
};

pub fn plane(i: usize) -> String {
    format!("H{i}")
}

pub fn line(i: usize, j: usize) -> String {
    format!("L{}{}", i.min(j), i.max(j))
}

pub fn rational_side(component: &str, normal: i64) -> Side {
    Side {
        component: component.to_string(),
        label: None,
        curve_class: vec![1],
        normal_class: LineBundleClass::of_degree(CurveGeometry::Rational, normal),
    }
}

pub fn elliptic_side(
    component: &str,
    label: Option<&str>,
    class: Vec<i64>,
    normal: LineBundleClass,
) -> Side {
    Side {
        component: component.to_string(),
        label: label.map(String::from),
        curve_class: class,
        normal_class: normal,
    }
}

/// Four coordinate planes of projective 3-space meeting along six lines and
/// four triple points.
pub fn tetrahedron() -> SncSurface {
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let triples = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)];
    let tid = |t: &(usize, usize, usize)| format!("T{}{}{}", t.0, t.1, t.2);
    let double_curves = pairs
        .iter()
        .map(|&(i, j)| DoubleCurve {
            id: line(i, j),
            geometry: CurveGeometry::Rational,
            sides: vec![rational_side(&plane(i), 1), rational_side(&plane(j), 1)],
            triple_marks: triples
                .iter()
                .filter(|t| [t.0, t.1, t.2].contains(&i) && [t.0, t.1, t.2].contains(&j))
                .map(|t| TripleMark {
                    triple_point: tid(t),
                    location: CurvePoint::label(tid(t)),
                })
                .collect(),
            twist: Some(gauss(-1, 0)),
            gluing_unit: None,
        })
        .collect();
    let triple_points = triples
        .iter()
        .map(|t| {
            let (a, b, c) = *t;
            let l = (0..4).find(|x| ![a, b, c].contains(x)).unwrap();
            TriplePoint {
                id: tid(t),
                incident: [(a, b, c), (b, a, c), (c, a, b)]
                    .iter()
                    .map(|&(x, y, z)| Incidence {
                        component: plane(x),
                        curves: [line(x, y), line(x, z)],
                    })
                    .collect(),
                sigma: vec![SigmaEntry {
                    order: [plane(a), plane(b), plane(c)],
                    sign: permutation_sign(&[0, 1, 2, 3], &[a, b, c, l]).unwrap(),
                }],
            }
        })
        .collect();
    SncSurface {
        components: (0..4)
            .map(|i| Component::projective_plane(plane(i)))
            .collect(),
        double_curves,
        triple_points,
    }
}

/// Centers `<curve>-p<k>` on every line of the tetrahedron, two per line.
pub fn tetrahedron_plan() -> snc_core::BlowupPlan {
    let s = tetrahedron();
    snc_core::BlowupPlan {
        steps: s
            .double_curves
            .iter()
            .map(|c| snc_core::BlowupStep {
                curve: c.id.clone(),
                points: (1..=2)
                    .map(|k| CurvePoint::label(format!("{}-p{k}", c.id)))
                    .collect(),
                mode: snc_core::BlowupMode::BothSides,
            })
            .collect(),
    }
}

pub fn square() -> CurveGeometry {
    CurveGeometry::square_lattice()
}

/// Two rational elliptic surfaces glued along a square torus, written as
/// declared components with the given Euler numbers and normal classes.
pub fn elliptic_pair(
    normal0: LineBundleClass,
    normal1: LineBundleClass,
    twist: GaussRational,
) -> SncSurface {
    let comp = |id: &str, euler: i64| {
        Component::declared(id, vec!["F".into()], vec![-1], euler, Some(vec![vec![0]]))
    };
    SncSurface {
        components: vec![comp("Y1", 12), comp("Y2", 12)],
        double_curves: vec![DoubleCurve {
            id: "D".into(),
            geometry: square(),
            sides: vec![
                elliptic_side("Y1", None, vec![1], normal0),
                elliptic_side("Y2", None, vec![1], normal1),
            ],
            triple_marks: Vec::new(),
            twist: Some(twist),
            gluing_unit: Some(gauss(1, 0)),
        }],
        triple_points: Vec::new(),
    }
}

pub fn elliptic_class(degree: i64, a: (i64, i64), b: (i64, i64)) -> LineBundleClass {
    LineBundleClass::new(square(), degree, Some(LatticePoint::from_ratios(a, b))).unwrap()
}
