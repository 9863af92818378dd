use snc_charts::suite::{run_suite, SuiteOptions, DEFAULT_SEED, SLOPE_SAMPLES};

#[test]
fn default_run_passes_every_identity() {
    let r = run_suite(&SuiteOptions::default());
    assert_eq!(r.seed, DEFAULT_SEED);
    assert!(r.passed);
    assert!(r.warnings.is_empty(), "{:?}", r.warnings);
    for i in &r.identities {
        assert!(
            i.passed,
            "{}: {:e} > {:e}",
            i.name, i.max_residual, i.tolerance
        );
        assert!(i.error.is_none(), "{}: {:?}", i.name, i.error);
        assert!(i.samples > 0, "{}", i.name);
    }
    let slope = r
        .identities
        .iter()
        .find(|i| i.name == "theta_quadratic_defect")
        .unwrap();
    assert_eq!(slope.samples, SLOPE_SAMPLES);
}

#[test]
fn tolerance_below_float_precision_fails_honestly() {
    let r = run_suite(&SuiteOptions {
        tolerance: Some(1e-15),
        ..SuiteOptions::default()
    });
    assert!(!r.passed);
    let failed: Vec<_> = r.identities.iter().filter(|i| !i.passed).collect();
    assert!(!failed.is_empty());
    for i in failed {
        assert!(
            i.max_residual > 1e-15,
            "{} failed with residual {:e}",
            i.name,
            i.max_residual
        );
    }
}

#[test]
fn same_seed_same_residuals() {
    let opts = SuiteOptions {
        samples: 10,
        ..SuiteOptions::default()
    };
    assert_eq!(run_suite(&opts), run_suite(&opts));
    let other = run_suite(&SuiteOptions { seed: 7, ..opts });
    assert_eq!(other.seed, 7);
    assert!(other.passed);
}

#[test]
fn zero_samples_warns_instead_of_passing_silently() {
    let r = run_suite(&SuiteOptions {
        samples: 0,
        ..SuiteOptions::default()
    });
    assert!(!r.warnings.is_empty());
}
