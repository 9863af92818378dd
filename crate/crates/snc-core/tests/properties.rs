mod common;

use std::collections::BTreeMap;

use common::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use snc_core::blowup::{allocate_counts, run_plan};
use snc_core::checks::{collective_normal_class, h0_canonical_dimension, rref};
use snc_core::model::{permutation_sign, SigmaEntry};
use snc_core::pic::{apply_twist, is_trivial, tensor};
use snc_core::report::{euler_fiber, full_report};
use snc_core::{
    gauss, i_pow, BlowupMode, BlowupPlan, BlowupStep, Component, CurvePoint, GaussRational,
    LineBundleClass, SncSurface,
};

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn small_class() -> impl Strategy<Value = LineBundleClass> {
    (-5i64..6, 0i64..12, 0i64..12, 1i64..7)
        .prop_map(|(d, a, b, q)| elliptic_class(d, (a, q), (b, q)))
}

fn quadric_class() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-6i64..7, 2)
}

/// A random plan on the tetrahedron: per line, a mode and a number of
/// centers, the mode picking both sides or one of the two planes.
fn tetra_plan() -> impl Strategy<Value = BlowupPlan> {
    proptest::collection::vec((0usize..3, 0usize..4), 6).prop_map(|choices| {
        let s = tetrahedron();
        let steps = s
            .double_curves
            .iter()
            .zip(choices)
            .filter(|(_, (_, n))| *n > 0)
            .map(|(c, (mode, n))| BlowupStep {
                curve: c.id.clone(),
                points: (0..n)
                    .map(|k| CurvePoint::label(format!("{}-q{k}", c.id)))
                    .collect(),
                mode: match mode {
                    0 => BlowupMode::BothSides,
                    k => BlowupMode::one_side(c.sides[k - 1].component.clone()),
                },
            })
            .collect();
        BlowupPlan { steps }
    })
}

fn degrees(s: &SncSurface) -> BTreeMap<String, i64> {
    collective_normal_class(s)
        .unwrap()
        .iter()
        .map(|(id, c)| (id.to_string(), c.degree()))
        .collect()
}

/// Renames every component id through `f`.
fn relabel(s: &SncSurface, f: impl Fn(&str) -> String) -> SncSurface {
    let mut out = s.clone();
    for c in &mut out.components {
        c.id = f(&c.id);
    }
    for curve in &mut out.double_curves {
        for side in &mut curve.sides {
            side.component = f(&side.component);
        }
    }
    for t in &mut out.triple_points {
        for inc in &mut t.incident {
            inc.component = f(&inc.component);
        }
        for e in &mut t.sigma {
            e.order = e.order.clone().map(|x| f(&x));
        }
    }
    out
}

fn float_rank(m: &[Vec<GaussRational>], ncols: usize) -> usize {
    if m.is_empty() || ncols == 0 {
        return 0;
    }
    let a = DMatrix::from_fn(m.len(), ncols, |i, j| {
        Complex64::new(m[i][j].re.to_f64().unwrap(), m[i][j].im.to_f64().unwrap())
    });
    let sv = a.svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > 1e-9 * top.max(1.0)).count()
}

proptest! {
    #[test]
    fn sigma_alternates_under_every_reordering(t in 0usize..4, p in 0usize..6, q in 0usize..6) {
        let s = tetrahedron();
        let tp = &s.triple_points[t];
        let comps = tp.components();
        let order = |perm: [usize; 3]| [comps[perm[0]], comps[perm[1]], comps[perm[2]]];
        let (a, b) = (order(PERMS[p]), order(PERMS[q]));
        let rel = permutation_sign(&a, &b).unwrap();
        prop_assert_eq!(tp.sigma_of(b), tp.sigma_of(a).map(|x| x * rel));

        // A second stored entry passes validation exactly when it agrees.
        let mut with_entry = s.clone();
        let sign = tp.sigma_of(b).unwrap();
        with_entry.triple_points[t].sigma.push(SigmaEntry { order: b.map(String::from), sign });
        prop_assert!(with_entry.validate().is_empty());
        with_entry.triple_points[t].sigma.last_mut().unwrap().sign = -sign;
        prop_assert!(with_entry.validate().iter().any(|d| d.invariant == "sigma-alternating"));
    }

    #[test]
    fn intersection_form_is_symmetric_and_bilinear(
        x in quadric_class(), y in quadric_class(), z in quadric_class(), k in -4i64..5,
    ) {
        let q = Component::quadric("Q");
        let dot = |a: &[i64], b: &[i64]| q.intersect(a, b).unwrap();
        let comb: Vec<i64> = x.iter().zip(&y).map(|(a, b)| k * a + b).collect();
        prop_assert_eq!(dot(&x, &z), dot(&z, &x));
        prop_assert_eq!(dot(&comb, &z), k * dot(&x, &z) + dot(&y, &z));
    }

    #[test]
    fn tensor_product_is_an_abelian_group(
        a in small_class(), b in small_class(), c in small_class(),
    ) {
        let ab = tensor(&a, &b).unwrap();
        prop_assert_eq!(&ab, &tensor(&b, &a).unwrap());
        prop_assert_eq!(
            tensor(&ab, &c).unwrap(),
            tensor(&a, &tensor(&b, &c).unwrap()).unwrap()
        );
        let unit = LineBundleClass::trivial(square());
        prop_assert_eq!(&tensor(&a, &unit).unwrap(), &a);
        prop_assert!(is_trivial(&tensor(&a, &a.inverse()).unwrap()));
    }

    #[test]
    fn quarter_turns_compose(a in small_class(), j in 0i64..4, k in 0i64..4) {
        let twice = apply_twist(&apply_twist(&a, i_pow(j)).unwrap(), i_pow(k)).unwrap();
        prop_assert_eq!(&twice, &apply_twist(&a, i_pow(j + k)).unwrap());
        let b = apply_twist(&a, i_pow(j)).unwrap();
        prop_assert_eq!(b.degree(), a.degree());
        prop_assert_eq!(&apply_twist(&a, i_pow(4)).unwrap(), &a);
    }

    #[test]
    fn blowups_on_different_curves_commute(plan in tetra_plan()) {
        let s = tetrahedron();
        let mut reversed = plan.clone();
        reversed.steps.reverse();
        let (x, _) = run_plan(&s, &plan).unwrap();
        let (y, _) = run_plan(&s, &reversed).unwrap();
        let euler = |s: &SncSurface| -> Vec<i64> { s.components.iter().map(|c| c.euler_char).collect() };
        prop_assert_eq!(euler(&x), euler(&y));
        prop_assert_eq!(
            collective_normal_class(&x).unwrap(),
            collective_normal_class(&y).unwrap()
        );
        prop_assert_eq!(full_report(&x, None).classification, full_report(&y, None).classification);
    }

    #[test]
    fn each_center_adds_one_to_its_component(plan in tetra_plan()) {
        let s = tetrahedron();
        let (blown, _) = run_plan(&s, &plan).unwrap();
        let mut want: BTreeMap<String, i64> =
            s.components.iter().map(|c| (c.id.clone(), c.euler_char)).collect();
        let mut degree = degrees(&s);
        for step in &plan.steps {
            let curve = s.curve(&step.curve).unwrap();
            let hit: Vec<&str> = match &step.mode {
                BlowupMode::BothSides => curve.sides.iter().map(|x| x.component.as_str()).collect(),
                BlowupMode::OneSide { component, .. } => vec![component.as_str()],
            };
            for c in hit {
                *want.get_mut(c).unwrap() += step.points.len() as i64;
            }
            *degree.get_mut(&step.curve).unwrap() -= step.incidences() as i64;
        }
        for c in &blown.components {
            prop_assert_eq!(c.euler_char, want[&c.id], "{}", c.id);
        }
        prop_assert_eq!(euler_fiber(&blown), euler_fiber(&s) + plan.total_incidences() as i64);
        prop_assert_eq!(degrees(&blown), degree);
    }

    #[test]
    fn reports_do_not_depend_on_component_names(plan in tetra_plan()) {
        let (blown, _) = run_plan(&tetrahedron(), &plan).unwrap();
        let renamed = relabel(&blown, |id| format!("P{}", id.trim_start_matches('H')));
        prop_assert!(renamed.validate().is_empty());
        let (a, b) = (full_report(&blown, None), full_report(&renamed, None));
        prop_assert_eq!(a.collective_classes, b.collective_classes);
        prop_assert_eq!(a.h0_dim, b.h0_dim);
        prop_assert_eq!(a.chi_fiber, b.chi_fiber);
        prop_assert_eq!(a.classification, b.classification);

        let mut reordered = blown.clone();
        reordered.components.reverse();
        prop_assert_eq!(h0_canonical_dimension(&reordered).unwrap(), a.h0_dim.unwrap());
        prop_assert_eq!(full_report(&reordered, None).classification, a.classification);
    }

    #[test]
    fn allocation_covers_the_degree(degree in 0usize..40) {
        let a = allocate_counts(degree);
        prop_assert_eq!(a.incidences(), degree);
        prop_assert_eq!(a.points(), degree.div_ceil(2));
    }

    #[test]
    fn exact_rank_agrees_with_singular_values(
        rows in 1usize..6,
        cols in 1usize..6,
        entries in proptest::collection::vec((-3i64..4, -3i64..4), 36),
        dup in proptest::option::of((0usize..6, 0usize..6, 0i64..4)),
    ) {
        let mut m: Vec<Vec<GaussRational>> = (0..rows)
            .map(|i| (0..cols).map(|j| { let (a, b) = entries[i * 6 + j]; gauss(a, b) }).collect())
            .collect();
        // Force rank deficiency sometimes: row i becomes i^k times row j.
        if let Some((i, j, k)) = dup {
            let (i, j) = (i % rows, j % rows);
            if i != j {
                m[i] = m[j].iter().map(|z| z * i_pow(k)).collect();
            }
        }
        prop_assert_eq!(rref(&m, cols).1.len(), float_rank(&m, cols));
    }
}
