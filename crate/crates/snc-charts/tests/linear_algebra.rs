use nalgebra::Matrix4;
use proptest::prelude::*;

use snc_charts::charts::{pullback_through_h, ChartKind, Sign};
use snc_charts::forms::{Form2, OneForm, Real4, C64};
use snc_charts::{hodge_star, metric, project_theta, sd_asd_split, SU2AtPoint};

fn coeff() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| C64::new(a, b))
}

fn form() -> impl Strategy<Value = Form2> {
    proptest::array::uniform6(coeff()).prop_map(Form2::from_upper)
}

fn one_form() -> impl Strategy<Value = OneForm> {
    proptest::array::uniform4(coeff()).prop_map(OneForm)
}

/// Identity plus a perturbation of size at most 0.3 per entry, kept only
/// when orientation-preserving and well conditioned.
fn gl_plus() -> impl Strategy<Value = Real4> {
    proptest::array::uniform16(-0.3f64..0.3)
        .prop_map(|u| {
            std::array::from_fn(|p| std::array::from_fn(|q| u[4 * p + q] + f64::from(p == q)))
        })
        .prop_filter("det > 0.1", |m: &Real4| det(m) > 0.1)
}

fn det(m: &Real4) -> f64 {
    Matrix4::from_fn(|a, b| m[a][b]).determinant()
}

fn compose(a: &Real4, b: &Real4) -> Real4 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| a[i][k] * b[k][j]).sum()))
}

fn nonzero() -> impl Strategy<Value = C64> {
    coeff().prop_filter("away from zero", |z| z.norm() > 0.2)
}

proptest! {
    #[test]
    fn wedge_of_two_forms_is_symmetric(a in form(), b in form()) {
        prop_assert!((a.wedge(&b) - b.wedge(&a)).norm() < 1e-12);
    }

    #[test]
    fn decomposable_forms_square_to_zero(a in one_form(), b in one_form()) {
        let w = Form2::wedge1(&a, &b);
        prop_assert!(w.wedge(&w).norm() < 1e-12);
        prop_assert!((Form2::wedge1(&b, &a) + w).max_abs() < 1e-12);
    }

    #[test]
    fn pullback_respects_composition(a in form(), m in gl_plus(), n in gl_plus()) {
        let stepwise = a.pullback(&m).pullback(&n);
        let direct = a.pullback(&compose(&m, &n));
        prop_assert!((stepwise - direct).max_abs() < 1e-12);
    }

    #[test]
    fn top_degree_wedge_scales_by_determinant(a in form(), b in form(), m in gl_plus()) {
        let before = a.wedge(&b) * det(&m);
        let after = a.pullback(&m).wedge(&b.pullback(&m));
        prop_assert!((before - after).norm() < 1e-10);
    }

    #[test]
    fn pulled_back_flat_structures_stay_su2(m in gl_plus()) {
        let s = SU2AtPoint::flat().pullback(&m);
        prop_assert!(s.residuals().max_violation() < 1e-10, "{:?}", s.residuals());
        let projected = project_theta(&s.psi, &s.kappa).unwrap();
        prop_assert!(projected.distance(&s) < 1e-9);
    }

    #[test]
    fn hodge_star_is_an_involution_splitting_forms(a in form(), m in gl_plus()) {
        let s = SU2AtPoint::flat().pullback(&m);
        let g = metric(&s).unwrap();
        prop_assert!((hodge_star(&hodge_star(&a, &g).unwrap(), &g).unwrap() - a).max_abs() < 1e-9);
        let (sd, asd) = sd_asd_split(&a, &s).unwrap();
        prop_assert!((sd + asd - a).max_abs() < 1e-10);
        prop_assert!((hodge_star(&asd, &g).unwrap() + asd).max_abs() < 1e-9);
        prop_assert!(sd.wedge(&asd).norm() < 1e-9);
    }

    #[test]
    fn gluing_maps_identify_structures(zeta in nonzero(), x in nonzero(), y in nonzero(), s in any::<bool>()) {
        let sign = if s { Sign::Plus } else { Sign::Minus };
        for kind in [ChartKind::DoubleChart, ChartKind::TripleChart { sigma: sign }] {
            let (other, here) = pullback_through_h(kind, sign, zeta, x, y).unwrap();
            let scale = here.psi.max_abs().max(here.kappa.max_abs()).max(1.0);
            prop_assert!(other.distance(&here) < 1e-9 * scale, "{kind:?}: {}", other.distance(&here));
        }
    }
}
