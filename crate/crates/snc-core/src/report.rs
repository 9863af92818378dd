//! Euler number of the smoothed fiber, its classification, and the combined
//! verdict over all checks.

use std::fmt;

use serde::Serialize;

use crate::checks::{self, AnticanonicalVerdict};
use crate::model::{validate_structure, Diagnostic, SncSurface};
use crate::pic::{format_gauss, ClassSummary};

/// Predicted type of the general fiber of a smoothing with trivial canonical
/// bundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    /// `χ = 24`.
    K3,
    /// `χ = 0`, `b₁ = 4`.
    ComplexTorus,
    /// `χ = 0`, `b₁ = 3`.
    PrimaryKodaira,
    /// Hypotheses fail or the numerical data do not decide.
    Unknown,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::K3 => "K3",
            Self::ComplexTorus => "ComplexTorus",
            Self::PrimaryKodaira => "PrimaryKodaira",
            Self::Unknown => "Unknown",
        };
        f.write_str(s)
    }
}

/// Euler characteristic of the smoothed fiber by Lee's formula:
/// `Σ χ(X_i) − 2 Σ χ(D) + 3 · #triple points`.
pub fn euler_fiber(s: &SncSurface) -> i64 {
    let comps: i64 = s.components.iter().map(|c| c.euler_char).sum();
    let curves: i64 = s
        .double_curves
        .iter()
        .map(|c| c.geometry.euler_char())
        .sum();
    comps - 2 * curves + 3 * s.triple_points.len() as i64
}

/// Classifies a surface with trivial canonical bundle from `χ` and, when
/// needed, the first Betti number.
pub fn classify_fiber(chi: i64, b1: Option<i64>) -> Classification {
    match (chi, b1) {
        (24, _) => Classification::K3,
        (0, Some(4)) => Classification::ComplexTorus,
        (0, Some(3)) => Classification::PrimaryKodaira,
        _ => Classification::Unknown,
    }
}

/// Anticanonical verdict for one component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentVerdict {
    /// Component identifier.
    pub component: String,
    /// Verdict.
    pub verdict: AnticanonicalVerdict,
}

/// Collective class of one curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveClass {
    /// Curve identifier.
    pub curve: String,
    /// The class.
    #[serde(flatten)]
    pub class: ClassSummary,
}

/// Euler characteristic of one component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentEuler {
    /// Component identifier.
    pub component: String,
    /// Euler characteristic.
    pub euler_char: i64,
}

/// All verdicts for one surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothingReport {
    /// Whether structural validation passed.
    pub structure_ok: bool,
    /// Structural diagnostics.
    pub structure_diagnostics: Vec<Diagnostic>,
    /// Whether every component passes the anticanonical test.
    pub anticanonical_ok: bool,
    /// Per-component anticanonical verdicts.
    pub anticanonical: Vec<ComponentVerdict>,
    /// Whether every collective class is trivial.
    pub d_semistable: Option<bool>,
    /// Curves with nontrivial collective class.
    pub witnesses: Vec<String>,
    /// Collective class of every curve.
    pub collective_classes: Vec<CurveClass>,
    /// Whether the all-ones vector lies in the kernel of the residue matrix.
    pub residue_ok: Option<bool>,
    /// Dimension of the kernel of the residue matrix.
    pub h0_dim: Option<usize>,
    /// Kernel basis of the residue matrix, entries formatted exactly.
    pub kernel_basis: Vec<Vec<String>>,
    /// Euler characteristic of each component.
    pub component_euler: Vec<ComponentEuler>,
    /// Euler characteristic of the smoothed fiber.
    pub chi_fiber: Option<i64>,
    /// First Betti number of the fiber, as declared by the scenario.
    pub declared_b1: Option<i64>,
    /// Predicted fiber type.
    pub classification: Classification,
    /// Free-form remarks.
    pub notes: Vec<String>,
}

/// Runs every check in dependency order and assembles the report.
///
/// The fiber is classified only when the surface is d-semistable, every
/// component passes the anticanonical test and the residues match. Otherwise
/// the classification is `Unknown` and the notes say which hypothesis failed.
pub fn full_report(s: &SncSurface, declared_b1: Option<i64>) -> SmoothingReport {
    let diagnostics = validate_structure(s);
    let mut report = SmoothingReport {
        structure_ok: diagnostics.is_empty(),
        structure_diagnostics: diagnostics,
        anticanonical_ok: false,
        anticanonical: Vec::new(),
        d_semistable: None,
        witnesses: Vec::new(),
        collective_classes: Vec::new(),
        residue_ok: None,
        h0_dim: None,
        kernel_basis: Vec::new(),
        component_euler: s
            .components
            .iter()
            .map(|c| ComponentEuler {
                component: c.id.clone(),
                euler_char: c.euler_char,
            })
            .collect(),
        chi_fiber: None,
        declared_b1,
        classification: Classification::Unknown,
        notes: Vec::new(),
    };
    if !report.structure_ok {
        report
            .notes
            .push("structural validation failed; no further checks were run".into());
        return report;
    }

    let verdicts = checks::check_anticanonical(s);
    report.anticanonical_ok = verdicts
        .iter()
        .all(|(_, v)| *v == AnticanonicalVerdict::Holds);
    for (id, v) in &verdicts {
        match v {
            AnticanonicalVerdict::Fails => report
                .notes
                .push(format!("double locus is not anticanonical on {id}")),
            AnticanonicalVerdict::Unverifiable => report
                .notes
                .push(format!("anticanonical condition unverifiable on {id}")),
            AnticanonicalVerdict::Holds => {}
        }
    }
    report.anticanonical = verdicts
        .into_iter()
        .map(|(component, verdict)| ComponentVerdict { component, verdict })
        .collect();

    match checks::collective_normal_class(s) {
        Ok(classes) => {
            report.collective_classes = classes
                .iter()
                .map(|(id, c)| CurveClass {
                    curve: id.to_string(),
                    class: c.into(),
                })
                .collect();
            report.witnesses = report
                .collective_classes
                .iter()
                .filter(|c| !c.class.trivial)
                .map(|c| c.curve.clone())
                .collect();
            report.d_semistable = Some(report.witnesses.is_empty());
            if !report.witnesses.is_empty() {
                report.notes.push(format!(
                    "not d-semistable: nontrivial collective class on {}",
                    report.witnesses.join(", ")
                ));
            }
        }
        Err(e) => report
            .notes
            .push(format!("collective class unavailable: {e}")),
    }

    match checks::build_rho_matrix(s) {
        Ok(rho) => {
            let ones = vec![num_traits::One::one(); rho.cols.len()];
            let residue_ok = rho.apply(&ones).iter().all(num_traits::Zero::is_zero);
            let basis = rho.kernel_basis();
            report.h0_dim = Some(basis.len());
            report.residue_ok = Some(residue_ok);
            report.kernel_basis = basis
                .iter()
                .map(|v| v.iter().map(|z| format_gauss(*z)).collect())
                .collect();
            if !residue_ok {
                report
                    .notes
                    .push("residues of the chosen volume forms do not match".into());
            }
            if basis.len() >= 2 {
                report.notes.push(format!(
                    "kernel of the residue matrix has dimension {}; see kernel_basis",
                    basis.len()
                ));
            }
        }
        Err(e) => report
            .notes
            .push(format!("residue matrix unavailable: {e}")),
    }

    let chi = euler_fiber(s);
    report.chi_fiber = Some(chi);
    let hypotheses = report.d_semistable == Some(true)
        && report.anticanonical_ok
        && report.residue_ok == Some(true);
    if hypotheses {
        report.classification = classify_fiber(chi, declared_b1);
        if report.classification == Classification::Unknown {
            report.notes.push(format!(
                "hypotheses hold but chi = {chi} with b1 = {declared_b1:?} does not determine the fiber"
            ));
        }
    } else {
        report
            .notes
            .push("smoothing hypotheses not all satisfied; fiber left unclassified".into());
    }
    report
}
