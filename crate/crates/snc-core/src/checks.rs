//! The three smoothability hypotheses: triviality of the collective normal
//! class (d-semistability), anticanonical double locus on every component,
//! and matching of Poincaré residues.
//!
//! Residue matching is decided through the residue matrix `ρ`. Each
//! component carries a one-dimensional space of meromorphic volume forms
//! with a chosen generator `Ω_i`. A global section is a vector of
//! coefficients `c`, and each double curve contributes the linear condition
//! `c₀ + twist·c₁ = 0` on the coefficients of its two sides. The space of
//! global holomorphic volume forms is the kernel of `ρ`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::model::SncSurface;
use crate::pic::{self, LineBundleClass, PicError};
use crate::GaussRational;

/// Errors raised by the checks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    /// The surface does not reference its own data consistently.
    #[error("structurally invalid surface: {0}")]
    Structure(String),
    /// Class arithmetic failed on a curve.
    #[error("class arithmetic on {curve}: {source}")]
    Pic {
        /// Curve identifier.
        curve: String,
        /// Underlying error.
        source: PicError,
    },
    /// A double curve carries no residue twist.
    #[error("double curve {0} has no gluing twist")]
    MissingTwist(String),
}

/// Collective normal class: one line-bundle class per double curve.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CollectiveNormalClass {
    /// Classes keyed by curve id.
    pub classes: BTreeMap<String, LineBundleClass>,
    /// Curve ids in surface order.
    pub order: Vec<String>,
}

impl CollectiveNormalClass {
    /// Classes in surface order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &LineBundleClass)> {
        self.order
            .iter()
            .map(move |id| (id.as_str(), &self.classes[id]))
    }
}

/// Computes `N₀ ⊗ N₁ ⊗ [T]` on every double curve, where `N₁` is carried to
/// the reference coordinate by the gluing map and `[T]` is the divisor of the
/// triple marks.
pub fn collective_normal_class(s: &SncSurface) -> Result<CollectiveNormalClass, CheckError> {
    let mut out = CollectiveNormalClass::default();
    for curve in &s.double_curves {
        if curve.sides.len() != 2 {
            return Err(CheckError::Structure(format!(
                "double curve {} does not have two sides",
                curve.id
            )));
        }
        let err = |source| CheckError::Pic {
            curve: curve.id.clone(),
            source,
        };
        let g = curve.gluing_automorphism().map_err(err)?;
        let n0 = curve.sides[0].normal_class.clone();
        let n1 = pic::apply_automorphism(&curve.sides[1].normal_class, &g);
        let mut total = pic::tensor(&n0, &n1).map_err(err)?;
        for mark in &curve.triple_marks {
            let pc = pic::point_class(&curve.geometry, &mark.location).map_err(err)?;
            total = pic::tensor(&total, &pc).map_err(err)?;
        }
        out.order.push(curve.id.clone());
        out.classes.insert(curve.id.clone(), total);
    }
    Ok(out)
}

/// Outcome of the d-semistability test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DSemistability {
    /// Whether every collective class is trivial.
    pub semistable: bool,
    /// Curves whose collective class is nontrivial.
    pub witnesses: Vec<String>,
}

/// Decides d-semistability and names the curves that violate it.
pub fn is_d_semistable(s: &SncSurface) -> Result<DSemistability, CheckError> {
    let classes = collective_normal_class(s)?;
    let witnesses: Vec<String> = classes
        .iter()
        .filter(|(_, c)| !pic::is_trivial(c))
        .map(|(id, _)| id.to_string())
        .collect();
    Ok(DSemistability {
        semistable: witnesses.is_empty(),
        witnesses,
    })
}

/// Verdict of the anticanonical test on one component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AnticanonicalVerdict {
    /// `K + ΣD = 0`.
    Holds,
    /// `K + ΣD ≠ 0`.
    Fails,
    /// The component carries no class data to decide.
    Unverifiable,
}

/// Tests `K_{X_i} + Σ D = 0` on every component, where the sum runs over all
/// sides of double curves lying on the component.
pub fn check_anticanonical(s: &SncSurface) -> Vec<(String, AnticanonicalVerdict)> {
    s.components
        .iter()
        .map(|comp| {
            if !comp.has_class_data() {
                return (comp.id.clone(), AnticanonicalVerdict::Unverifiable);
            }
            let mut sum = comp.canonical_class.clone();
            for side in s
                .double_curves
                .iter()
                .flat_map(|c| c.sides.iter())
                .filter(|side| side.component == comp.id)
            {
                if side.curve_class.len() != sum.len() {
                    return (comp.id.clone(), AnticanonicalVerdict::Unverifiable);
                }
                for (acc, x) in sum.iter_mut().zip(&side.curve_class) {
                    *acc += x;
                }
            }
            let verdict = if sum.iter().all(|&x| x == 0) {
                AnticanonicalVerdict::Holds
            } else {
                AnticanonicalVerdict::Fails
            };
            (comp.id.clone(), verdict)
        })
        .collect()
}

/// The residue matrix: rows are double curves, columns are components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoMatrix {
    /// Curve id of each row.
    pub rows: Vec<String>,
    /// Component id of each column.
    pub cols: Vec<String>,
    /// Entries over the Gaussian rationals.
    pub entries: Vec<Vec<GaussRational>>,
}

impl RhoMatrix {
    /// Exact rank over the Gaussian rationals.
    pub fn rank(&self) -> usize {
        rref(&self.entries, self.cols.len()).1.len()
    }

    /// A basis of the kernel, one vector per free column of the reduced
    /// row echelon form.
    pub fn kernel_basis(&self) -> Vec<Vec<GaussRational>> {
        kernel_basis(&self.entries, self.cols.len())
    }

    /// Product with a column vector.
    pub fn apply(&self, v: &[GaussRational]) -> Vec<GaussRational> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(GaussRational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }
}

/// Builds the residue matrix `ρ`.
///
/// The row of a double curve has `+1` in the column of its side-0 component
/// and the curve's twist in the column of its side-1 component. When both
/// sides lie on the same component the two entries add up.
pub fn build_rho_matrix(s: &SncSurface) -> Result<RhoMatrix, CheckError> {
    let cols: Vec<String> = s.components.iter().map(|c| c.id.clone()).collect();
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for curve in &s.double_curves {
        let twist = curve
            .twist
            .ok_or_else(|| CheckError::MissingTwist(curve.id.clone()))?;
        if curve.sides.len() != 2 {
            return Err(CheckError::Structure(format!(
                "double curve {} does not have two sides",
                curve.id
            )));
        }
        let mut row = vec![GaussRational::zero(); cols.len()];
        for (k, weight) in [(0, GaussRational::one()), (1, twist)] {
            let comp = &curve.sides[k].component;
            let j = s.component_index(comp).ok_or_else(|| {
                CheckError::Structure(format!(
                    "double curve {} references unknown component {comp}",
                    curve.id
                ))
            })?;
            row[j] += weight;
        }
        rows.push(curve.id.clone());
        entries.push(row);
    }
    Ok(RhoMatrix {
        rows,
        cols,
        entries,
    })
}

/// Reduced row echelon form by exact Gauss–Jordan elimination. Returns the
/// reduced matrix and the pivot columns.
pub fn rref(m: &[Vec<GaussRational>], ncols: usize) -> (Vec<Vec<GaussRational>>, Vec<usize>) {
    let mut a: Vec<Vec<GaussRational>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = GaussRational::one() / a[r][c];
        for x in a[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c];
                for j in 0..ncols {
                    let sub = f * a[r][j];
                    a[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    (a, pivots)
}

/// Kernel basis of a matrix with `ncols` columns.
pub fn kernel_basis(m: &[Vec<GaussRational>], ncols: usize) -> Vec<Vec<GaussRational>> {
    let (a, pivots) = rref(m, ncols);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![GaussRational::zero(); ncols];
            v[free] = GaussRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][free];
            }
            v
        })
        .collect()
}

/// Dimension of the space of global holomorphic volume forms, `N − rank ρ`.
pub fn h0_canonical_dimension(s: &SncSurface) -> Result<usize, CheckError> {
    let rho = build_rho_matrix(s)?;
    Ok(rho.cols.len() - rho.rank())
}

/// Whether the chosen generators `Ω_i` (all coefficients 1) satisfy every
/// residue condition, i.e. whether the all-ones vector lies in `ker ρ`.
pub fn check_residue_matching(s: &SncSurface) -> Result<bool, CheckError> {
    let rho = build_rho_matrix(s)?;
    let ones = vec![GaussRational::one(); rho.cols.len()];
    Ok(rho.apply(&ones).iter().all(Zero::is_zero))
}
