//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed. The
//! process fails when a criterion outside `KNOWN_UNATTAINABLE` fails, or when
//! a criterion listed there unexpectedly passes.

use std::collections::BTreeMap;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use snc_charts::suite::{run_suite, SuiteOptions, SuiteReport, SLOPE_SAMPLES};
use snc_core::blowup::{plan_blowups_to_trivialize, run_plan, Allocation, BlowupMode, BlowupPlan};
use snc_core::checks::{
    build_rho_matrix, collective_normal_class, h0_canonical_dimension, is_d_semistable,
};
use snc_core::pic::is_trivial;
use snc_core::report::{full_report, Classification, SmoothingReport};
use snc_core::SncSurface;
use snc_smooth::registry::{all_named, family_scenario, named_scenario};
use snc_smooth::runner::{run_check, run_plan_cmd, EXIT_MISMATCH};
use snc_smooth::Scenario;

/// Criteria that cannot hold for the shipped data, with the reason.
const KNOWN_UNATTAINABLE: &[(u32, &str)] = &[(
    11,
    "with the declared triple-point incidences the completed plane configurations have fiber Euler number 14 and 18, not 24",
)];

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn scenario(name: &str) -> Scenario {
    named_scenario(name).unwrap_or_else(|| panic!("unknown scenario {name}"))
}

fn after_plan(s: &Scenario) -> Result<SncSurface, String> {
    run_plan(&s.surface, &s.plan)
        .map(|(surface, _)| surface)
        .map_err(|e| format!("{}: {e}", s.name))
}

fn report(s: &Scenario) -> Result<SmoothingReport, String> {
    Ok(full_report(&after_plan(s)?, s.declared_b1))
}

fn all_trivial(surface: &SncSurface) -> Result<bool, String> {
    let classes = collective_normal_class(surface).map_err(|e| e.to_string())?;
    let trivial = classes.iter().all(|(_, c)| is_trivial(c));
    Ok(trivial)
}

fn criterion_1() -> Verdict {
    let s = scenario("tetrahedron");
    let classes = collective_normal_class(&s.surface).map_err(|e| e.to_string())?;
    let degrees: Vec<i64> = classes.iter().map(|(_, c)| c.degree()).collect();
    ensure(degrees == vec![4; 6], format!("degrees {degrees:?}"))?;
    let semi = is_d_semistable(&s.surface).map_err(|e| e.to_string())?;
    ensure(!semi.semistable, "reported d-semistable")?;
    Ok(format!("degrees {degrees:?}, not d-semistable"))
}

fn criterion_2() -> Verdict {
    let s = scenario("tetra-blown");
    ensure(
        s.plan.total_points() == 12,
        format!("{} centers", s.plan.total_points()),
    )?;
    ensure(
        s.plan
            .steps
            .iter()
            .all(|st| st.mode == BlowupMode::BothSides),
        "plan has one-sided steps",
    )?;
    let r = report(&s)?;
    ensure(
        r.collective_classes.iter().all(|c| c.class.trivial),
        "nontrivial class",
    )?;
    ensure(r.d_semistable == Some(true), "not d-semistable")?;
    ensure(r.chi_fiber == Some(24), format!("chi {:?}", r.chi_fiber))?;
    ensure(
        r.classification == Classification::K3,
        r.classification.to_string(),
    )?;
    Ok("12 two-sided centers, d-semistable, chi 24, K3".into())
}

fn criterion_3() -> Verdict {
    for d in 0..=3i64 {
        let s = scenario(&format!("k3-double-d{d}"));
        let r = report(&s)?;
        let euler: Vec<i64> = r.component_euler.iter().map(|c| c.euler_char).collect();
        ensure(
            euler == vec![12 + 3 * d, 12 - 3 * d],
            format!("d={d}: euler {euler:?}"),
        )?;
        ensure(
            r.chi_fiber == Some(24),
            format!("d={d}: chi {:?}", r.chi_fiber),
        )?;
        ensure(
            r.d_semistable == Some(true),
            format!("d={d}: not d-semistable"),
        )?;
        let c = &r.collective_classes[0].class;
        let zero = c
            .jacobian_point
            .as_ref()
            .is_some_and(|p| p[0] == "0" && p[1] == "0");
        ensure(c.degree == 0 && zero, format!("d={d}: class {c:?}"))?;
        ensure(
            r.classification == Classification::K3,
            format!("d={d}: {}", r.classification),
        )?;
    }
    Ok("d = 0..3: euler 12±3d, chi 24, trivial Jacobian point, K3".into())
}

fn criterion_4() -> Verdict {
    for n in 1..=3 {
        for d in 0..=1 {
            let s = scenario(&format!("torus-chain-N{n}-d{d}"));
            if n == 1 {
                ensure(
                    s.surface.double_curves[0].is_self_glued(),
                    "N=1 is not self-glued",
                )?;
            }
            let r = report(&s)?;
            ensure(
                r.chi_fiber == Some(0),
                format!("N={n} d={d}: chi {:?}", r.chi_fiber),
            )?;
            let want = if d == 0 {
                Classification::ComplexTorus
            } else {
                Classification::PrimaryKodaira
            };
            ensure(
                r.classification == want,
                format!("N={n} d={d}: {}", r.classification),
            )?;
        }
    }
    Ok("N = 1..3, d = 0,1: chi 0, ComplexTorus for d=0, PrimaryKodaira for d=1".into())
}

fn criterion_5() -> Verdict {
    for n in 2..=5 {
        let r = report(&scenario(&format!("typeII-chain-N{n}")))?;
        ensure(
            r.chi_fiber == Some(24),
            format!("N={n}: chi {:?}", r.chi_fiber),
        )?;
        ensure(
            r.d_semistable == Some(true),
            format!("N={n}: not d-semistable"),
        )?;
        ensure(
            r.classification == Classification::K3,
            format!("N={n}: {}", r.classification),
        )?;
    }
    Ok("N = 2..5: chi 24, d-semistable, K3".into())
}

/// Rank of a complex matrix from its singular values.
fn float_rank(m: &DMatrix<Complex64>) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > 1e-9 * smax.max(1.0)).count()
}

fn float_h0(surface: &SncSurface) -> Result<usize, String> {
    let rho = build_rho_matrix(surface).map_err(|e| e.to_string())?;
    let m = DMatrix::from_fn(rho.rows.len(), rho.cols.len(), |i, j| {
        let z = rho.entries[i][j];
        Complex64::new(z.re.to_f64().unwrap(), z.im.to_f64().unwrap())
    });
    Ok(rho.cols.len() - float_rank(&m))
}

fn criterion_6() -> Verdict {
    for k in 0..=3i64 {
        let s = scenario(&format!("fujita-k{k}"));
        let h0 = h0_canonical_dimension(&s.surface).map_err(|e| e.to_string())?;
        ensure(h0 == usize::from(k == 0), format!("k={k}: h0 {h0}"))?;
    }
    let mut cases = 0;
    for code in 0..256u32 {
        let ks: Vec<i64> = (0..4).map(|i| ((code >> (2 * i)) & 3) as i64).collect();
        let params: BTreeMap<String, i64> = ks
            .iter()
            .enumerate()
            .map(|(i, &k)| (format!("k{}", i + 1), k))
            .collect();
        let s = family_scenario("fujita-general", &params).map_err(|e| e.to_string())?;
        let exact = h0_canonical_dimension(&s.surface).map_err(|e| e.to_string())?;
        let float = float_h0(&s.surface)?;
        let want = usize::from(ks.iter().sum::<i64>() % 4 == 0);
        ensure(
            exact == float && exact == want,
            format!("k={ks:?}: exact {exact}, float {float}, expected {want}"),
        )?;
        cases += 1;
    }
    Ok(format!(
        "k = 0..3 single gluing; {cases} four-gluing cases agree with the float rank"
    ))
}

fn criterion_7() -> Verdict {
    let naive = run_check(&scenario("quadric-naive"));
    ensure(
        naive.exit_code == EXIT_MISMATCH,
        format!("naive exit {}", naive.exit_code),
    )?;
    ensure(!naive.mismatches.is_empty(), "no mismatch diagnostics")?;
    let s = scenario("quadric-pipeline");
    let surface = after_plan(&s)?;
    ensure(all_trivial(&surface)?, "pipeline leaves a nontrivial class")?;
    let h3 = surface.component("H3").map(|c| c.euler_char);
    ensure(h3 == Some(4), format!("chi(H3) = {h3:?}"))?;
    let r = full_report(&surface, s.declared_b1);
    ensure(r.chi_fiber == Some(24), format!("chi {:?}", r.chi_fiber))?;
    ensure(
        r.classification == Classification::K3,
        r.classification.to_string(),
    )?;
    let mut curves: Vec<&str> = naive.mismatches.iter().map(|m| m.curve.as_str()).collect();
    curves.dedup();
    Ok(format!(
        "naive exit 3 on {curves:?}; pipeline trivial, chi(H3)=4, chi 24, K3"
    ))
}

fn residual(r: &SuiteReport, name: &str) -> Result<f64, String> {
    let i = r
        .identities
        .iter()
        .find(|i| i.name == name)
        .ok_or_else(|| format!("identity {name} missing"))?;
    if let Some(e) = &i.error {
        return Err(format!("{name}: {e}"));
    }
    Ok(i.max_residual)
}

fn criterion_8(r: &SuiteReport) -> Verdict {
    ensure(r.samples == 100, format!("{} samples", r.samples))?;
    let limits: &[(&str, f64)] = &[
        ("su2_double", 1e-9),
        ("su2_triple", 1e-9),
        ("su2_c3_model", 1e-9),
        ("t_pullback_double", 1e-12),
        ("t_pullback_triple", 1e-12),
        ("h_composition_double", 1e-12),
        ("h_composition_triple", 1e-12),
        ("h_pullback_double", 1e-9),
        ("h_pullback_triple", 1e-9),
        ("c3_eta_sum", 1e-12),
        ("closedness", 1e-6),
    ];
    let mut worst = 0.0f64;
    for &(name, limit) in limits {
        let v = residual(r, name)?;
        ensure(v < limit, format!("{name}: {v:e} >= {limit:e}"))?;
        worst = worst.max(v / limit);
    }
    ensure(r.passed, "some identity of the suite failed")?;
    Ok(format!(
        "{} identities pass; worst residual/limit ratio {worst:.1e}",
        r.identities.len()
    ))
}

fn criterion_9(r: &SuiteReport) -> Verdict {
    let slope = r
        .identities
        .iter()
        .find(|i| i.name == "theta_quadratic_defect")
        .ok_or("slope identity missing")?;
    ensure(
        slope.samples == SLOPE_SAMPLES,
        format!("{} perturbations", slope.samples),
    )?;
    ensure(
        slope.max_residual < 0.1,
        format!("|slope - 2| = {}", slope.max_residual),
    )?;
    let idem = residual(r, "theta_idempotence")?;
    ensure(idem < 1e-9, format!("idempotence {idem:e}"))?;
    Ok(format!(
        "{SLOPE_SAMPLES} perturbations, max |slope - 2| = {:.2e}; idempotence {idem:.1e}",
        slope.max_residual
    ))
}

/// Independent minimizer: walks point counts upward and, at the first count
/// admitting a solution, takes the one with the most two-sided centers and
/// then the most centers on side 0.
fn brute_force(degree: usize) -> Allocation {
    for points in 0..=degree {
        let mut found = Vec::new();
        for both in 0..=points {
            for side0 in 0..=points - both {
                let side1 = points - both - side0;
                if 2 * both + side0 + side1 == degree {
                    found.push(Allocation { both, side0, side1 });
                }
            }
        }
        if let Some(best) = found.into_iter().max_by_key(|a| (a.both, a.side0)) {
            return best;
        }
    }
    unreachable!("degree centers on one side always suffice")
}

fn allocations_of(plan: &BlowupPlan, surface: &SncSurface) -> BTreeMap<String, Allocation> {
    let mut out = BTreeMap::new();
    for step in &plan.steps {
        let curve = surface.curve(&step.curve).expect("planned curve exists");
        let a = out.entry(step.curve.clone()).or_insert(Allocation {
            both: 0,
            side0: 0,
            side1: 0,
        });
        let n = step.points.len();
        match &step.mode {
            BlowupMode::BothSides => a.both += n,
            BlowupMode::OneSide { component, side } => {
                let k = side.unwrap_or_else(|| {
                    curve
                        .sides
                        .iter()
                        .position(|s| &s.component == component)
                        .expect("side")
                });
                if k == 0 {
                    a.side0 += n;
                } else {
                    a.side1 += n;
                }
            }
        }
    }
    out
}

fn criterion_10() -> Verdict {
    let mut checked = 0;
    let mut curves = 0;
    for s in all_named() {
        let surface = match after_plan(&s) {
            Ok(x) => x,
            Err(_) => s.surface.clone(),
        };
        let classes = collective_normal_class(&surface).map_err(|e| e.to_string())?;
        let degrees: BTreeMap<String, i64> = classes
            .iter()
            .map(|(id, c)| (id.to_string(), c.degree()))
            .collect();
        if degrees.values().any(|&d| !(0..=8).contains(&d)) {
            continue;
        }
        let plan = plan_blowups_to_trivialize(&surface).map_err(|e| format!("{}: {e}", s.name))?;
        let got = allocations_of(&plan, &surface);
        for (id, &d) in &degrees {
            let want = brute_force(d as usize);
            let have = got.get(id).copied().unwrap_or(Allocation {
                both: 0,
                side0: 0,
                side1: 0,
            });
            let trivial = is_trivial(&classes.classes[id]);
            let expect = if trivial {
                Allocation {
                    both: 0,
                    side0: 0,
                    side1: 0,
                }
            } else {
                want
            };
            ensure(
                have == expect,
                format!("{} {id}: planner {have:?}, brute force {expect:?}", s.name),
            )?;
            curves += 1;
        }
        let (blown, _) = run_plan(&surface, &plan).map_err(|e| format!("{}: {e}", s.name))?;
        ensure(
            all_trivial(&blown)?,
            format!("{}: plan leaves a nontrivial class", s.name),
        )?;
        ensure(
            run_plan_cmd(&s).exit_code == 0 || s.name == "quadric-naive",
            format!("{}: plan command failed", s.name),
        )?;
        checked += 1;
    }
    Ok(format!(
        "{checked} scenarios, {curves} curves match the exhaustive minimizer"
    ))
}

fn criterion_11() -> Verdict {
    let mut detail = Vec::new();
    for (name, singly, doubly) in [
        ("two-triple", vec!["L01", "L02", "L13", "L23"], vec!["L12"]),
        (
            "three-triple",
            vec!["L01", "L02", "L12"],
            vec!["L03", "L13", "L23"],
        ),
    ] {
        let r = report(&scenario(name))?;
        let deg: BTreeMap<&str, i64> = r
            .collective_classes
            .iter()
            .map(|c| (c.curve.as_str(), c.class.degree))
            .collect();
        for c in &singly {
            ensure(deg[c] == 3, format!("{name} {c}: degree {}", deg[c]))?;
        }
        for c in &doubly {
            ensure(deg[c] == 4, format!("{name} {c}: degree {}", deg[c]))?;
        }
        ensure(
            r.classification == Classification::Unknown,
            format!("{name}: {}", r.classification),
        )?;
    }
    detail.push("as-declared degrees 3/4 and Unknown".to_string());
    let mut failures = Vec::new();
    for name in ["two-triple-repaired", "three-triple-repaired"] {
        let r = report(&scenario(name))?;
        ensure(
            r.d_semistable == Some(true),
            format!("{name}: not d-semistable"),
        )?;
        if r.chi_fiber != Some(24) {
            failures.push(format!("{name} chi {:?}", r.chi_fiber));
        }
    }
    if failures.is_empty() {
        Ok(detail.join("; "))
    } else {
        Err(format!(
            "{}; repaired variants: {}",
            detail.join("; "),
            failures.join(", ")
        ))
    }
}

fn main() {
    let start = Instant::now();
    let suite = run_suite(&SuiteOptions::default());
    let results: Vec<(u32, &str, Verdict)> = vec![
        (1, "tetrahedron collective classes", criterion_1()),
        (2, "tetra-blown smooths to K3", criterion_2()),
        (3, "k3-double family", criterion_3()),
        (4, "torus chains", criterion_4()),
        (5, "type II chains", criterion_5()),
        (6, "rotated gluings and volume forms", criterion_6()),
        (7, "quadric pipeline", criterion_7()),
        (8, "chart identity suite", criterion_8(&suite)),
        (9, "quadratic projection defect", criterion_9(&suite)),
        (10, "planner against exhaustive search", criterion_10()),
        (
            11,
            "plane configurations with two and three triple points",
            criterion_11(),
        ),
    ];
    let mut unexpected = Vec::new();
    for (n, title, verdict) in &results {
        let known = KNOWN_UNATTAINABLE.iter().find(|(k, _)| k == n);
        match (verdict, known) {
            (Ok(msg), None) => println!("criterion {n:>2}: PASS  {title}: {msg}"),
            (Err(msg), Some((_, why))) => {
                println!("criterion {n:>2}: FAIL  {title}: {msg} (known: {why})")
            }
            (Err(msg), None) => {
                println!("criterion {n:>2}: FAIL  {title}: {msg}");
                unexpected.push(*n);
            }
            (Ok(msg), Some(_)) => {
                println!("criterion {n:>2}: PASS  {title}: {msg} (listed as unattainable)");
                unexpected.push(*n);
            }
        }
    }
    println!(
        "acceptance finished in {:.2} s",
        start.elapsed().as_secs_f64()
    );
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
