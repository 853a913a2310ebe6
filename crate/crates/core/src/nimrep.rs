//! Non-negative integer matrix representations of fusion rings, spectrum
//! matching against invariant diagonals, the tadpole exclusion, and
//! orbifold quotients of graphs.

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::error::{Error, Result};
use crate::fusion::FusionRing;
use crate::graph::{self, Graph};
use crate::matrix::IntMatrix;
use crate::modular::ModularData;
use crate::par::{self, Exec};
use crate::spin::{frac, is_integer};

pub const SPECTRUM_TOLERANCE: f64 = 1e-6;
pub const PF_TOLERANCE: f64 = 1e-6;

/// `G_λ` for every label `λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nimrep {
    pub mats: Vec<IntMatrix>,
}

impl Nimrep {
    pub fn size(&self) -> usize {
        self.mats.first().map_or(0, IntMatrix::rows)
    }

    /// `G_λ G_μ = Σ_ν N_{λμ}^ν G_ν` for all pairs, and `G₀ = I`.
    pub fn satisfies(&self, ring: &FusionRing) -> bool {
        let m = ring.rank();
        if self.mats.len() != m || self.mats[0] != IntMatrix::identity(self.size()) {
            return false;
        }
        (0..m).all(|l| {
            (0..m).all(|mu| {
                let lhs = self.mats[l].mul(&self.mats[mu]).expect("square");
                let mut rhs = IntMatrix::zeros(self.size(), self.size());
                for nu in 0..m {
                    let c = ring.n(l, mu, nu) as i64;
                    if c != 0 {
                        rhs = rhs.add(&self.mats[nu].scale(c)).expect("square");
                    }
                }
                lhs == rhs
            })
        })
    }

    /// Labels whose matrix is not the transpose of the conjugate's.
    pub fn conjugation_warnings(&self, ring: &FusionRing) -> Vec<usize> {
        (0..self.mats.len()).filter(|&l| self.mats[ring.conj(l)] != self.mats[l].transpose()).collect()
    }
}

/// Extends `G₁` to the SU(2)_k nimrep through `G_{j+1} = G₁G_j − G_{j−1}`.
/// `None` unless the PF eigenvalue is `2cos(π/(k+2))`, every `G_j` is
/// non-negative, and the nimrep identity holds.
pub fn su2_nimrep_from_graph(k: usize, g1: &Graph) -> Result<Option<Nimrep>> {
    let target = 2.0 * (std::f64::consts::PI / (k as f64 + 2.0)).cos();
    if (g1.perron_frobenius() - target).abs() > PF_TOLERANCE {
        return Ok(None);
    }
    let n = g1.size();
    let mut mats = vec![IntMatrix::identity(n), g1.adjacency.clone()];
    for j in 1..k {
        let next = g1.adjacency.mul(&mats[j])?.add(&mats[j - 1].scale(-1))?;
        if !next.is_nonnegative() {
            return Ok(None);
        }
        mats.push(next);
    }
    mats.truncate(k + 1);
    let nim = Nimrep { mats };
    let ring = catalog::su2_model(k)?.ring;
    Ok(nim.satisfies(&ring).then_some(nim))
}

/// Eigenvalue/multiplicity comparison for one label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelSpectrum {
    pub label: usize,
    pub matched: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMatch {
    pub matched: bool,
    pub reason: Option<String>,
    /// `(ρ, Z_{ρρ})` for the exponents that occur.
    pub multiplicities: Vec<(usize, i64)>,
    pub labels: Vec<LabelSpectrum>,
}

/// Whether the eigenvalues of `g` are exactly the `expected` values with
/// the given multiplicities (greedy nearest matching).
pub fn match_spectrum(g: &IntMatrix, expected: &[(Complex64, i64)]) -> bool {
    let mut pool: Vec<Complex64> =
        expected.iter().flat_map(|&(z, m)| std::iter::repeat_n(z, m.max(0) as usize)).collect();
    let eig = graph::eigenvalues(g);
    if eig.len() != pool.len() {
        return false;
    }
    for e in eig {
        let best = pool
            .iter()
            .enumerate()
            .map(|(i, z)| (i, (z - e).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((i, dist)) if dist < SPECTRUM_TOLERANCE => {
                pool.swap_remove(i);
            }
            _ => return false,
        }
    }
    true
}

/// Checks that each `G_λ` has eigenvalues `S_{λρ}/S_{0ρ}` with
/// multiplicity `Z_{ρρ}`.
pub fn spectrum_match(nimrep: &Nimrep, md: &ModularData, z: &IntMatrix, exec: Exec) -> Result<SpectrumMatch> {
    let m = md.rank();
    let multiplicities: Vec<(usize, i64)> = (0..m).filter(|&r| z[(r, r)] != 0).map(|r| (r, z[(r, r)])).collect();
    let fail = |reason: String| SpectrumMatch { matched: false, reason: Some(reason), multiplicities: multiplicities.clone(), labels: vec![] };
    if nimrep.mats.len() != m {
        return Ok(fail(format!("{} matrices for {m} labels", nimrep.mats.len())));
    }
    if nimrep.size() as i64 != z.trace() {
        return Ok(fail(format!("nimrep of size {} against tr Z = {}", nimrep.size(), z.trace())));
    }
    let s = md.s()?;
    let labels = par::map(exec, (0..m).collect(), |l| {
        let expected: Vec<(Complex64, i64)> =
            multiplicities.iter().map(|&(r, mult)| (s[(l, r)] / s[(0, r)], mult)).collect();
        let matched = match_spectrum(&nimrep.mats[l], &expected);
        LabelSpectrum { label: l, matched }
    });
    let matched = labels.iter().all(|l| l.matched);
    Ok(SpectrumMatch {
        matched,
        reason: (!matched).then(|| "eigenvalues differ from the diagonal exponents".into()),
        multiplicities,
        labels,
    })
}

/// The catalog graphs that can carry the SU(2)_k nimrep of an invariant.
pub fn candidate_graphs(k: usize) -> Vec<Graph> {
    let mut out = vec![graph::a_graph(k + 1).expect("k ≥ 1")];
    if k.is_multiple_of(2) && k >= 4 {
        out.push(graph::d_graph(k / 2 + 2).expect("size ≥ 4"));
    }
    match k {
        10 => out.push(graph::e_graph(6).expect("E6")),
        16 => out.push(graph::e_graph(7).expect("E7")),
        28 => out.push(graph::e_graph(8).expect("E8")),
        _ => {}
    }
    if k % 2 == 1 {
        out.push(graph::tadpole(k.div_ceil(2)).expect("ℓ ≥ 1"));
    }
    out
}

/// Names of the catalog graphs whose nimrep spectrum matches the diagonal
/// of `z`.
pub fn ade_assignment(md: &ModularData, k: usize, z: &IntMatrix) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for g in candidate_graphs(k) {
        if g.size() as i64 != z.trace() {
            continue;
        }
        if let Some(nim) = su2_nimrep_from_graph(k, &g)? {
            if spectrum_match(&nim, md, z, Exec::Sequential)?.matched {
                out.push(g.name.clone());
            }
        }
    }
    Ok(out)
}

/// Why `T_ℓ` cannot be the graph of an SU(2)_k invariant at odd `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TadpoleRefutation {
    pub k: usize,
    pub ell: usize,
    /// Perron-Frobenius weights normalised to `Σ weight² = w`.
    pub weights: Vec<f64>,
    /// Deviation of the computed weights from `√2 · sin((j+1)π/(k+2))/sin(π/(k+2))`.
    pub formula_residual: f64,
    pub extremal_weight: f64,
    /// Weight of the current `σ = k`, `h = k/4`.
    pub current_weight: Rational64,
    /// `2h_σ mod 1`; zero would allow the index-2 extension.
    pub twice_weight_frac: Rational64,
    pub excluded: bool,
}

pub fn tadpole_exclusion(k: usize) -> Result<TadpoleRefutation> {
    if k.is_multiple_of(2) {
        return Err(Error::Parameters(format!("tadpole exclusion needs odd k, got {k}")));
    }
    let ell = k.div_ceil(2);
    let g = graph::tadpole(ell)?;
    let md = catalog::su2_model(k)?.build()?;
    let w = md.global_index();
    let eig = g.adjacency.to_real().symmetric_eigen();
    let top = (0..ell).max_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b])).expect("ℓ ≥ 1");
    let mut v: Vec<f64> = eig.eigenvectors.column(top).iter().copied().collect();
    if v[0] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    let norm2: f64 = v.iter().map(|x| x * x).sum();
    let scale = (w / norm2).sqrt();
    let weights: Vec<f64> = v.iter().map(|x| x * scale).collect();
    let pi = std::f64::consts::PI;
    let kk = k as f64 + 2.0;
    let formula_residual = weights
        .iter()
        .enumerate()
        .map(|(j, x)| (x - 2f64.sqrt() * ((j as f64 + 1.0) * pi / kk).sin() / (pi / kk).sin()).abs())
        .fold(0.0, f64::max);
    let kk_i = k as i64;
    let current_weight = Rational64::new(kk_i * (kk_i + 2), 4 * (kk_i + 2));
    let twice = frac(current_weight * 2);
    Ok(TadpoleRefutation {
        k,
        ell,
        extremal_weight: weights[0],
        weights,
        formula_residual,
        current_weight,
        twice_weight_frac: twice,
        excluded: formula_residual < 1e-9 && !is_integer(current_weight * 2),
    })
}

/// Quotient of `g` by the cyclic group generated by the automorphism
/// `sigma`: free orbits become single nodes, fixed points split into one
/// copy per group element.
pub fn orbifold_quotient(g: &Graph, sigma: &[usize]) -> Result<Graph> {
    let n = g.size();
    if !g.is_automorphism(sigma) {
        return Err(Error::Parameters("map is not a graph automorphism".into()));
    }
    let m = graph::permutation_order(sigma);
    let mut orbit_of = vec![usize::MAX; n];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if orbit_of[v] != usize::MAX {
            continue;
        }
        let mut orbit = vec![v];
        let mut u = sigma[v];
        while u != v {
            orbit.push(u);
            u = sigma[u];
        }
        if orbit.len() != 1 && orbit.len() != m {
            return Err(Error::Unsupported(format!("orbit of size {} under an automorphism of order {m}", orbit.len())));
        }
        for &u in &orbit {
            orbit_of[u] = orbits.len();
        }
        orbits.push(orbit);
    }
    let a = &g.adjacency;
    for f in orbits.iter().filter(|o| o.len() == 1).map(|o| o[0]) {
        if orbits.iter().filter(|o| o.len() == 1).any(|o| a[(f, o[0])] != 0) {
            return Err(Error::Unsupported(format!("fixed point {} is adjacent to a fixed point", g.node_names[f])));
        }
    }
    // node list: free orbits, then m copies of each fixed point
    let mut nodes: Vec<(usize, Option<usize>)> = Vec::new();
    let mut names = Vec::new();
    for (i, o) in orbits.iter().enumerate() {
        if o.len() == m && m > 1 {
            nodes.push((i, None));
            names.push(o.iter().map(|&v| g.node_names[v].clone()).collect::<Vec<_>>().join("+"));
        }
    }
    for (i, o) in orbits.iter().enumerate() {
        if o.len() == 1 && m > 1 {
            for c in 0..m {
                nodes.push((i, Some(c)));
                names.push(format!("{}#{c}", g.node_names[o[0]]));
            }
        }
    }
    if m == 1 {
        return Ok(g.clone());
    }
    let q = nodes.len();
    let mut adj = IntMatrix::zeros(q, q);
    for (x, &(ox, cx)) in nodes.iter().enumerate() {
        for (y, &(oy, cy)) in nodes.iter().enumerate() {
            let from = &orbits[ox];
            let to = &orbits[oy];
            adj[(x, y)] = match (cx, cy) {
                (None, None) => to.iter().map(|&u| a[(from[0], u)]).sum(),
                (None, Some(_)) => a[(from[0], to[0])],
                (Some(_), None) => {
                    let total: i64 = to.iter().map(|&u| a[(from[0], u)]).sum();
                    if total % m as i64 != 0 {
                        return Err(Error::Unsupported(format!(
                            "fixed point {} has {total} edges into an orbit of size {m}",
                            g.node_names[from[0]]
                        )));
                    }
                    total / m as i64
                }
                (Some(_), Some(_)) => 0,
            };
        }
    }
    let mut out = Graph::new(format!("{}/Z{m}", g.name), adj)?.with_names(names)?;
    if let Some(grading) = &g.grading {
        out = out.with_grading(nodes.iter().map(|&(o, _)| grading[orbits[o][0]]).collect())?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a7_nimrep_is_fusion() {
        let g = graph::graph_catalog("A7").unwrap();
        let nim = su2_nimrep_from_graph(6, &g).unwrap().unwrap();
        let ring = catalog::su2_model(6).unwrap().ring;
        for j in 0..7 {
            assert_eq!(nim.mats[j], ring.fusion_matrix(j).unwrap());
        }
        assert!(nim.conjugation_warnings(&ring).is_empty());
    }

    #[test]
    fn t2_at_level_three() {
        let g = graph::graph_catalog("T2").unwrap();
        let nim = su2_nimrep_from_graph(3, &g).unwrap().unwrap();
        assert_eq!(nim.mats[2].to_rows(), vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(nim.mats[3], IntMatrix::identity(2));
    }

    #[test]
    fn wrong_level_rejected() {
        let g = graph::graph_catalog("A7").unwrap();
        assert!(su2_nimrep_from_graph(5, &g).unwrap().is_none());
    }

    #[test]
    fn tadpole_negative_control() {
        let md = catalog::su2_model(5).unwrap().build().unwrap();
        let mut z = IntMatrix::zeros(6, 6);
        for j in [0, 2, 4] {
            z[(j, j)] = 1;
        }
        assert_eq!(ade_assignment(&md, 5, &z).unwrap(), vec!["T3".to_string()]);
    }

    #[test]
    fn tadpole_refutations() {
        let r = tadpole_exclusion(5).unwrap();
        assert!((r.extremal_weight - 2f64.sqrt()).abs() < 1e-9);
        assert_eq!(r.current_weight, Rational64::new(5, 4));
        assert_eq!(r.twice_weight_frac, Rational64::new(1, 2));
        assert!(r.excluded);
        assert_eq!(tadpole_exclusion(3).unwrap().current_weight, Rational64::new(3, 4));
        assert!(tadpole_exclusion(2).is_err());
    }

    #[test]
    fn d_from_a() {
        for rho in 2..=12usize {
            let a = graph::a_graph(2 * rho + 1).unwrap();
            let flip: Vec<usize> = (0..2 * rho + 1).rev().collect();
            let q = orbifold_quotient(&a, &flip).unwrap();
            assert_eq!(q.size(), rho + 2);
            assert!((q.perron_frobenius() - a.perron_frobenius()).abs() < 1e-9);
            // isomorphic to D_{ρ+2}: same spectrum and degree sequence
            let d = graph::d_graph(rho + 2).unwrap();
            let mut e1: Vec<f64> = q.eigenvalues().iter().map(|z| z.re).collect();
            let mut e2: Vec<f64> = d.eigenvalues().iter().map(|z| z.re).collect();
            e1.sort_by(f64::total_cmp);
            e2.sort_by(f64::total_cmp);
            assert!(e1.iter().zip(&e2).all(|(x, y)| (x - y).abs() < 1e-9));
        }
        let a7 = graph::a_graph(7).unwrap();
        assert!(orbifold_quotient(&a7, &[1, 0, 2, 3, 4, 5, 6]).is_err());
    }
}
