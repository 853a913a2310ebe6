//! Classification of coupling matrices: permutation, simple current,
//! type I / type II, heterotic, plus chiral indices and sector counts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::{FusionRing, SimpleCurrentGroup};
use crate::gram;
use crate::matrix::IntMatrix;
use crate::modular::{ModelSpec, ModularData};
use crate::par::{self, Exec};
use crate::spin::SpinAssignment;

pub const INDEX_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    #[serde(rename = "type I")]
    TypeI,
    #[serde(rename = "type II")]
    TypeII,
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Kind::TypeI => write!(f, "type I"),
            Kind::TypeII => write!(f, "type II"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiralIndices {
    pub w_plus: f64,
    pub w_minus: f64,
    pub w_alpha: f64,
    pub w_zero: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorCounts {
    pub trace: i64,
    pub sum_of_squares: i64,
    pub x_plus: i64,
    pub x_minus: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub z: IntMatrix,
    /// `ϑ` with `Z_{λ,ϑ(λ)} = 1`.
    pub permutation: Option<Vec<usize>>,
    pub vacuum_symmetric: bool,
    pub simple_current: bool,
    /// Rows of `b` with `bᵀb = Z`.
    pub type1_branching: Option<IntMatrix>,
    pub kind: Kind,
    pub heterotic: bool,
    /// Indices of `(Z⁺, Z⁻)` in the list the report was computed against.
    pub parents: Option<(usize, usize)>,
    pub indices: ChiralIndices,
    pub counts: SectorCounts,
}

impl InvariantReport {
    /// Relations every report must satisfy; non-empty means a bug upstream.
    pub fn consistency_issues(&self) -> Vec<String> {
        let mut issues = Vec::new();
        let ChiralIndices { w_plus, w_minus, w_alpha, w_zero } = self.indices;
        if (w_plus - w_minus).abs() > INDEX_TOLERANCE * w_plus.max(1.0) {
            issues.push(format!("w+ = {w_plus} differs from w- = {w_minus}"));
        }
        if (w_zero * w_alpha - w_plus * w_plus).abs() > INDEX_TOLERANCE * (w_plus * w_plus).max(1.0) {
            issues.push(format!("w0·wα = {} differs from w+² = {}", w_zero * w_alpha, w_plus * w_plus));
        }
        if let Some(b) = &self.type1_branching {
            match b.transpose().mul(b) {
                Ok(g) if g == self.z => {}
                _ => issues.push("branching table does not reproduce Z".into()),
            }
        }
        let column_trivial = (0..self.z.rows()).all(|l| self.z[(l, 0)] == i64::from(l == 0));
        if column_trivial != self.permutation.is_some() {
            issues.push("vacuum column is trivial but Z is not a permutation (or vice versa)".into());
        }
        issues
    }
}

/// `ϑ` if `Z` is a permutation matrix. A permutation that moves the
/// vacuum or breaks fusion rules or weights is reported as an error.
pub fn permutation_test(z: &IntMatrix, ring: &FusionRing, spins: &SpinAssignment) -> Result<Option<Vec<usize>>> {
    let Some(p) = z.as_permutation() else { return Ok(None) };
    if p[0] != 0 {
        return Err(Error::Inconsistent(format!("permutation invariant moves the vacuum to {}", p[0])));
    }
    let m = ring.rank();
    for l in 0..m {
        if spins.weight(l) != spins.weight(p[l]) {
            return Err(Error::Inconsistent(format!("permutation maps {l} to {} with a different weight", p[l])));
        }
        for mu in 0..m {
            for nu in 0..m {
                if ring.n(l, mu, nu) != ring.n(p[l], p[mu], p[nu]) {
                    return Err(Error::Inconsistent(format!("permutation breaks N_({l},{mu})^{nu}")));
                }
            }
        }
    }
    Ok(Some(p))
}

pub fn vacuum_symmetry(z: &IntMatrix) -> bool {
    z.row(0) == z.col(0).as_slice()
}

/// Every non-zero `Z_{λ,μ}` is linked by a simple current: `N_{σ,λ}^μ = 1`.
pub fn simple_current_test(z: &IntMatrix, ring: &FusionRing) -> Result<bool> {
    let d = ring.quantum_dimensions()?.d;
    let group = SimpleCurrentGroup::from_ring(ring, &d)?;
    let m = ring.rank();
    Ok((0..m).all(|l| {
        (0..m).all(|mu| z[(l, mu)] == 0 || group.elements.iter().any(|&s| ring.n(s, l, mu) == 1))
    }))
}

/// `b` with `bᵀb = Z` and `b_{0,·}` the vacuum row, rows sorted
/// descending; `None` if `Z` is not vacuum symmetric or no such `b`
/// exists.
pub fn type1_decomposition(z: &IntMatrix) -> Result<Option<IntMatrix>> {
    type1_decomposition_with_cap(z, gram::DEFAULT_GRAM_CAP)
}

pub fn type1_decomposition_with_cap(z: &IntMatrix, cap: u64) -> Result<Option<IntMatrix>> {
    if !vacuum_symmetry(z) || !z.is_symmetric() || !z.is_nonnegative() {
        return Ok(None);
    }
    let Some(mut rows) = gram::gram_factorize(z, Some(z.row(0)), cap)? else { return Ok(None) };
    rows.sort_by(|a, b| b.cmp(a));
    Ok(Some(IntMatrix::from_rows(&rows)?))
}

pub fn chiral_indices(z: &IntMatrix, md: &ModularData) -> ChiralIndices {
    let d = md.d();
    let w = md.global_index();
    let m = d.len();
    let col: f64 = (0..m).map(|l| d[l] * z[(l, 0)] as f64).sum();
    let row: f64 = (0..m).map(|l| z[(0, l)] as f64 * d[l]).sum();
    let deg: f64 = md.degenerate_sectors().iter().map(|&l| z[(0, l)] as f64 * d[l]).sum();
    let w_plus = w / col;
    let w_alpha = w / deg;
    ChiralIndices { w_plus, w_minus: w / row, w_alpha, w_zero: w_plus * w_plus / w_alpha }
}

pub fn sector_counts(z: &IntMatrix) -> SectorCounts {
    let m = z.rows();
    SectorCounts {
        trace: z.trace(),
        sum_of_squares: z.sum_of_squares(),
        x_plus: (0..m).map(|l| z[(l, 0)] * z[(l, 0)]).sum(),
        x_minus: (0..m).map(|l| z[(0, l)] * z[(0, l)]).sum(),
    }
}

/// Indices of the vacuum-symmetric type I matrices in `list` whose vacuum
/// row equals `Z`'s vacuum column (`Z⁺`) and vacuum row (`Z⁻`).
pub fn parent_candidates(z: &IntMatrix, list: &[IntMatrix]) -> Result<(Vec<usize>, Vec<usize>)> {
    let col0 = z.col(0);
    let row0 = z.row(0).to_vec();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (i, cand) in list.iter().enumerate() {
        if cand.rows() != z.rows() || !vacuum_symmetry(cand) {
            continue;
        }
        let hits_plus = cand.row(0) == col0.as_slice();
        let hits_minus = cand.row(0) == row0.as_slice();
        if (hits_plus || hits_minus) && type1_decomposition(cand)?.is_some() {
            if hits_plus {
                plus.push(i);
            }
            if hits_minus {
                minus.push(i);
            }
        }
    }
    Ok((plus, minus))
}

pub fn find_parents(z: &IntMatrix, list: &[IntMatrix]) -> Result<Option<(usize, usize)>> {
    let (plus, minus) = parent_candidates(z, list)?;
    Ok(plus.first().zip(minus.first()).map(|(&a, &b)| (a, b)))
}

/// Non-negative integer combination of `candidates` equal to `target`.
pub fn integer_decomposition(target: &IntMatrix, candidates: &[IntMatrix]) -> Option<Vec<i64>> {
    fn rec(rest: &IntMatrix, cands: &[IntMatrix], t: usize, coeffs: &mut Vec<i64>) -> bool {
        if rest.data().iter().all(|&x| x == 0) {
            coeffs.resize(cands.len(), 0);
            return true;
        }
        if t == cands.len() {
            return false;
        }
        let c = &cands[t];
        let max = c
            .data()
            .iter()
            .zip(rest.data())
            .filter(|(&a, _)| a > 0)
            .map(|(&a, &r)| r / a)
            .min()
            .unwrap_or(0);
        for k in (0..=max).rev() {
            let next = rest.add(&c.scale(-k)).expect("same shape");
            if !next.is_nonnegative() {
                continue;
            }
            coeffs.push(k);
            if rec(&next, cands, t + 1, coeffs) {
                return true;
            }
            coeffs.pop();
        }
        false
    }
    if candidates.iter().any(|c| c.rows() != target.rows() || c.cols() != target.cols()) || !target.is_nonnegative() {
        return None;
    }
    let mut coeffs = Vec::new();
    rec(target, candidates, 0, &mut coeffs).then_some(coeffs)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZzDiagnostics {
    pub ztz: IntMatrix,
    pub zzt: IntMatrix,
    pub ztz_decomposition: Option<Vec<i64>>,
    pub zzt_decomposition: Option<Vec<i64>>,
}

/// `ZᵀZ` and `ZZᵀ`, each expressed over `candidates` when possible.
pub fn zz_diagnostics(z: &IntMatrix, candidates: &[IntMatrix]) -> Result<ZzDiagnostics> {
    let ztz = z.transpose().mul(z)?;
    let zzt = z.mul(&z.transpose())?;
    Ok(ZzDiagnostics {
        ztz_decomposition: integer_decomposition(&ztz, candidates),
        zzt_decomposition: integer_decomposition(&zzt, candidates),
        ztz,
        zzt,
    })
}

/// Full report for `Z`, parents searched in `list`.
pub fn classify(spec: &ModelSpec, md: &ModularData, z: &IntMatrix, list: &[IntMatrix]) -> Result<InvariantReport> {
    let permutation = permutation_test(z, &spec.ring, &spec.spins)?;
    let vacuum_symmetric = vacuum_symmetry(z);
    let type1_branching = type1_decomposition(z)?;
    let kind = if type1_branching.is_some() { Kind::TypeI } else { Kind::TypeII };
    Ok(InvariantReport {
        z: z.clone(),
        permutation,
        vacuum_symmetric,
        simple_current: simple_current_test(z, &spec.ring)?,
        type1_branching,
        kind,
        heterotic: !vacuum_symmetric,
        parents: find_parents(z, list)?,
        indices: chiral_indices(z, md),
        counts: sector_counts(z),
    })
}

pub fn classify_all(spec: &ModelSpec, md: &ModularData, list: &[IntMatrix], exec: Exec) -> Result<Vec<InvariantReport>> {
    par::try_map(exec, list.to_vec(), |z| classify(spec, md, &z, list))
}

/// On an enumerated set, trivial vacuum column, trivial vacuum row and
/// being a permutation single out the same matrices.
pub fn check_permutation_equivalence(list: &[IntMatrix]) -> Result<()> {
    for z in list {
        let m = z.rows();
        let col = (0..m).all(|l| z[(l, 0)] == i64::from(l == 0));
        let row = (0..m).all(|l| z[(0, l)] == i64::from(l == 0));
        let perm = z.as_permutation().is_some();
        if col != row || row != perm {
            return Err(Error::Inconsistent(format!(
                "vacuum column trivial: {col}, vacuum row trivial: {row}, permutation: {perm} for\n{z}"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::enumerate::enumerate_invariants;

    fn setup(name: &str) -> (ModelSpec, ModularData, Vec<IntMatrix>) {
        let spec = catalog::by_name(name).unwrap();
        let md = spec.build().unwrap();
        let list = enumerate_invariants(&md).unwrap().invariants;
        (spec, md, list)
    }

    #[test]
    fn d5_is_a_simple_current_permutation() {
        let (spec, md, list) = setup("su2:6");
        let d5 = list.iter().find(|z| **z != IntMatrix::identity(7)).unwrap();
        let r = classify(&spec, &md, d5, &list).unwrap();
        assert_eq!(r.permutation, Some(vec![0, 5, 2, 3, 4, 1, 6]));
        assert!(r.simple_current);
        assert!(r.vacuum_symmetric);
        assert_eq!(r.kind, Kind::TypeII);
        let id = list.iter().position(|z| *z == IntMatrix::identity(7)).unwrap();
        assert_eq!(r.parents, Some((id, id)));
        assert!(r.consistency_issues().is_empty());
        assert_eq!(d5.transpose().mul(d5).unwrap(), IntMatrix::identity(7));
    }

    #[test]
    fn identity_report() {
        let (spec, md, list) = setup("su2:4");
        let id = IntMatrix::identity(5);
        let r = classify(&spec, &md, &id, &list).unwrap();
        assert_eq!(r.permutation, Some((0..5).collect()));
        assert_eq!(r.type1_branching, Some(IntMatrix::identity(5)));
        let w = md.global_index();
        for x in [r.indices.w_plus, r.indices.w_minus, r.indices.w_alpha, r.indices.w_zero] {
            assert!((x - w).abs() < 1e-9);
        }
        let zz = zz_diagnostics(&id, std::slice::from_ref(&id)).unwrap();
        assert_eq!(zz.ztz, id);
        assert_eq!(zz.ztz_decomposition, Some(vec![1]));
    }

    #[test]
    fn decomposition_search() {
        let a = IntMatrix::identity(2);
        let b = IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
        let target = a.scale(3).add(&b).unwrap();
        assert_eq!(integer_decomposition(&target, &[a.clone(), b.clone()]), Some(vec![3, 1]));
        assert_eq!(integer_decomposition(&b, &[a]), None);
    }
}
