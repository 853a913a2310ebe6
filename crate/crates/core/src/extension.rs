//! Simple-current extensions, the ℤ_n invariant family and branching
//! restriction.

use num_integer::Integer;
use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::fusion::{FusionRing, SimpleCurrentGroup};
use crate::matrix::IntMatrix;
use crate::modular::{ModelSpec, ModularData};
use crate::par::{self, Exec};
use crate::spin::{is_integer, SpinAssignment};

/// Branching coefficients `b_{τ,λ}` of an extended theory (rows) over a
/// base theory (columns).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchingTable {
    pub name: String,
    pub ext_labels: Vec<String>,
    pub base_labels: Vec<String>,
    pub b: IntMatrix,
}

impl BranchingTable {
    pub fn new(
        name: impl Into<String>,
        ext_labels: Vec<String>,
        base_labels: Vec<String>,
        b: IntMatrix,
    ) -> Result<Self> {
        if b.rows() != ext_labels.len() || b.cols() != base_labels.len() {
            return Err(Error::Shape(format!(
                "{}x{} branching matrix for {} extended and {} base labels",
                b.rows(),
                b.cols(),
                ext_labels.len(),
                base_labels.len()
            )));
        }
        if b.rows() == 0 || b.cols() == 0 || b[(0, 0)] != 1 {
            return Err(Error::Parameters("branching table must have b[0][0] = 1".into()));
        }
        if !b.is_nonnegative() {
            return Err(Error::Parameters("branching coefficients must be non-negative".into()));
        }
        Ok(BranchingTable { name: name.into(), ext_labels, base_labels, b })
    }

    /// Identity table: the trivial extension.
    pub fn trivial(labels: Vec<String>) -> Self {
        let n = labels.len();
        BranchingTable { name: "trivial".into(), ext_labels: labels.clone(), base_labels: labels, b: IntMatrix::identity(n) }
    }

    /// Row 0 as the multiplicity vector of the vacuum of the extension.
    pub fn vacuum_row(&self) -> Vec<i64> {
        self.b.row(0).to_vec()
    }
}

/// A cyclic subgroup `⟨σ⟩` of the simple currents and the extension it
/// would define.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionRecord {
    pub generator: usize,
    pub order: usize,
    pub subgroup: Vec<usize>,
    /// `m·h_σ ∈ ℤ`.
    pub admissible: bool,
    /// Every element of the subgroup has integral weight.
    pub local: bool,
    /// `⟨θ, λ⟩` over the labels of the ring.
    pub theta: Vec<i64>,
}

/// Every cyclic subgroup of the simple current group, each listed once
/// under its smallest generator.
pub fn cyclic_extensions(ring: &FusionRing, spins: &SpinAssignment) -> Result<Vec<ExtensionRecord>> {
    let d = ring.quantum_dimensions()?.d;
    let group = SimpleCurrentGroup::from_ring(ring, &d)?;
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut out = Vec::new();
    for &sigma in &group.elements {
        let mut sub = group.cyclic_subgroup(sigma);
        sub.sort_unstable();
        if seen.contains(&sub) {
            continue;
        }
        seen.push(sub.clone());
        let order = sub.len();
        let h = spins.weight(sigma);
        let admissible = is_integer(h * Rational64::from(order as i64));
        let local = sub.iter().all(|&t| is_integer(spins.weight(t)));
        let mut theta = vec![0; ring.rank()];
        for &t in &sub {
            theta[t] = 1;
        }
        out.push(ExtensionRecord { generator: sigma, order, subgroup: sub, admissible, local, theta });
    }
    out.sort_by_key(|r| (r.order, r.generator));
    Ok(out)
}

/// The admissible cyclic extensions: `⟨σ⟩` of order `m` with `m·h_σ ∈ ℤ`.
pub fn rehren_admissible(ring: &FusionRing, spins: &SpinAssignment) -> Result<Vec<ExtensionRecord>> {
    Ok(cyclic_extensions(ring, spins)?.into_iter().filter(|r| r.admissible).collect())
}

/// ℤ_n ring carrying the SU(n)_k simple current weights
/// `h_j = kj(n−j)/2n`.
pub fn sun_current_model(n: usize, k: usize) -> Result<ModelSpec> {
    if n < 1 || k < 1 {
        return Err(Error::Parameters("n and k must be positive".into()));
    }
    let (n_i, k_i) = (n as i64, k as i64);
    let h = (0..n_i).map(|j| Rational64::new(k_i * j * (n_i - j), 2 * n_i));
    ModelSpec::new(format!("su{n}_{k}_currents"), FusionRing::cyclic(n)?, SpinAssignment::new(h))
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Orders of the admissible extensions of SU(n)_k by its centre: the
/// divisors of `n`, or of `n/2` when `n` is even and `k` odd. Checked
/// against [`rehren_admissible`] on the current data.
pub fn sun_divisor_table(n: usize, k: usize) -> Result<Vec<usize>> {
    let rule = if n.is_multiple_of(2) && k % 2 == 1 { divisors(n / 2) } else { divisors(n) };
    let spec = sun_current_model(n, k)?;
    let mut orders: Vec<usize> = rehren_admissible(&spec.ring, &spec.spins)?.iter().map(|r| r.order).collect();
    orders.sort_unstable();
    if orders != rule {
        return Err(Error::Inconsistent(format!(
            "SU({n})_{k}: divisor rule gives {rule:?}, admissibility gives {orders:?}"
        )));
    }
    Ok(rule)
}

/// Whether the order-`m` centre extension of SU(n)_k is local: with
/// `q = n/m`, `kq ∈ 2mℤ` for even `n` and `kq ∈ mℤ` for odd `n`. Cross
/// checked against integrality of `h_{kΛ_q}`.
pub fn locality_test(n: usize, k: usize, m: usize) -> Result<bool> {
    if m == 0 || !n.is_multiple_of(m) {
        return Err(Error::Parameters(format!("{m} does not divide {n}")));
    }
    let q = n / m;
    let kq = k * q;
    let rule = if n.is_multiple_of(2) { kq.is_multiple_of(2 * m) } else { kq.is_multiple_of(m) };
    let h = Rational64::new((k * q * (n - q)) as i64, 2 * n as i64);
    if rule != is_integer(h) {
        return Err(Error::Inconsistent(format!("locality rule and weight h = {h} disagree for n={n} k={k} m={m}")));
    }
    Ok(rule)
}

/// `ñ`: `n` for odd `n`, `n/2` for even.
pub fn zn_tilde(n: usize) -> usize {
    if n.is_multiple_of(2) {
        n / 2
    } else {
        n
    }
}

/// The divisors `δ` of `ñ` labelling the ℤ_n invariants.
pub fn zn_deltas(n: usize) -> Vec<usize> {
    divisors(zn_tilde(n))
}

/// `(α, ω)` for the invariant `Z^(δ)`: `α = gcd(δ, ñ/δ)` and
/// `ω = rñ/(δα) + sδ/α` where `rñ/(δα) − sδ/α = 1`, `0 ≤ s < ñ/(δα)`.
pub fn zn_parameters(n: usize, delta: usize) -> Result<(i64, i64)> {
    let nt = zn_tilde(n);
    if delta == 0 || !nt.is_multiple_of(delta) {
        return Err(Error::Parameters(format!("δ = {delta} does not divide ñ = {nt}")));
    }
    let alpha = delta.gcd(&(nt / delta)) as i64;
    let big_a = (nt / delta) as i64 / alpha;
    let big_b = delta as i64 / alpha;
    let s = if big_a == 1 {
        0
    } else {
        let inv = big_b.extended_gcd(&big_a);
        (-inv.x).rem_euclid(big_a)
    };
    let r_num = 1 + s * big_b;
    debug_assert_eq!(r_num % big_a, 0);
    let r = r_num / big_a;
    debug_assert_eq!(r * big_a - s * big_b, 1);
    Ok((alpha, r * big_a + s * big_b))
}

/// `Z_{j,j'} = 1` iff `j ≡ j' ≡ 0 (mod α)` and `j' ≡ ωj (mod n/α)`.
pub fn zn_support_matrix(n: usize, alpha: i64, omega: i64) -> IntMatrix {
    let n_i = n as i64;
    let modulus = n_i / alpha;
    let mut z = IntMatrix::zeros(n, n);
    for j in 0..n_i {
        for jp in 0..n_i {
            if j % alpha == 0 && jp % alpha == 0 && (jp - omega * j).rem_euclid(modulus) == 0 {
                z[(j as usize, jp as usize)] = 1;
            }
        }
    }
    z
}

/// The invariant `Z^(δ)` of the ℤ_n theory with parameter `a`.
pub fn zn_invariant(n: usize, a: i64, delta: usize) -> Result<IntMatrix> {
    if !crate::catalog::zn_valid_a(n).contains(&a.rem_euclid(2 * n as i64)) {
        return Err(Error::Parameters(format!("a = {a} is not valid for n = {n}")));
    }
    let (alpha, omega) = zn_parameters(n, delta)?;
    Ok(zn_support_matrix(n, alpha, omega))
}

/// All `Z^(δ)` for `δ | ñ`, in divisor order.
pub fn zn_family(n: usize, a: i64, exec: Exec) -> Result<Vec<(usize, IntMatrix)>> {
    par::try_map(exec, zn_deltas(n), |d| zn_invariant(n, a, d).map(|z| (d, z)))
}

/// `ε δ` with `ε = 2` for even `n`.
pub fn zn_expected_trace(n: usize, delta: usize) -> i64 {
    let eps = if n.is_multiple_of(2) { 2 } else { 1 };
    eps * delta as i64
}

/// `Z = b_leftᵀ Z_ext b_right`.
pub fn restrict(z_ext: &IntMatrix, left: &BranchingTable, right: &BranchingTable) -> Result<IntMatrix> {
    if z_ext.rows() != left.b.rows() || z_ext.cols() != right.b.rows() {
        return Err(Error::Shape(format!(
            "{}x{} extended invariant for tables with {} and {} extended labels",
            z_ext.rows(),
            z_ext.cols(),
            left.b.rows(),
            right.b.rows()
        )));
    }
    if left.base_labels != right.base_labels {
        return Err(Error::Shape("left and right tables have different base labels".into()));
    }
    left.b.transpose().mul(z_ext)?.mul(&right.b)
}

/// [`restrict`], then checks the result is an invariant of `base`.
pub fn restrict_checked(
    z_ext: &IntMatrix,
    left: &BranchingTable,
    right: &BranchingTable,
    base: &ModularData,
) -> Result<IntMatrix> {
    let z = restrict(z_ext, left, right)?;
    let check = crate::enumerate::is_invariant(base, &z)?;
    if !check.is_invariant() {
        return Err(Error::Inconsistent(format!("restricted matrix is not an invariant: {check:?}")));
    }
    Ok(z)
}

/// The six permutations of `{v, s, c}` as label permutations of SO(8)₁.
pub fn so8_permutations() -> Vec<Vec<usize>> {
    vec![
        vec![0, 1, 2, 3],
        vec![0, 1, 3, 2],
        vec![0, 3, 2, 1],
        vec![0, 2, 1, 3],
        vec![0, 2, 3, 1],
        vec![0, 3, 1, 2],
    ]
}

/// The two cyclic permutations of `{v, s, c}`, each checked against the
/// SO(8)₁ modular data. The full ℤ₂×ℤ₂ extension is realised by one of
/// them; both are returned and neither is preferred.
pub fn so8_full_extension_candidates() -> Result<Vec<IntMatrix>> {
    let md = crate::catalog::so8_level1_model().build()?;
    let mut out = Vec::new();
    for p in [[0, 2, 3, 1], [0, 3, 1, 2]] {
        let z = IntMatrix::permutation(&p);
        let check = crate::enumerate::is_invariant(&md, &z)?;
        if !check.is_invariant() {
            return Err(Error::Inconsistent(format!("cyclic permutation {p:?} is not invariant: {check:?}")));
        }
        out.push(z);
    }
    Ok(out)
}

/// `|χ₀ + χ₃₀ + χ₀₃|² + 3|χ₁₁|²` in the label order of the SO(8)₁ ⊃ SU(3)₃ table.
pub fn so8_d6_matrix(table: &BranchingTable) -> Result<IntMatrix> {
    let idx = |w: &str| {
        table.base_labels.iter().position(|x| x == w).ok_or_else(|| Error::UnknownLabel(w.to_string()))
    };
    let block = [idx("(0,0)")?, idx("(3,0)")?, idx("(0,3)")?];
    let adj = idx("(1,1)")?;
    let m = table.base_labels.len();
    let mut z = IntMatrix::zeros(m, m);
    for &a in &block {
        for &b in &block {
            z[(a, b)] = 1;
        }
    }
    z[(adj, adj)] = 3;
    Ok(z)
}

/// Restricts all six SO(8)₁ permutation invariants to SU(3)₃ and checks
/// they coincide with the D-type matrix with `3|χ₁₁|²`.
pub fn so8_restriction_sweep(exec: Exec) -> Result<Vec<IntMatrix>> {
    let table = crate::catalog::so8_to_su3_table();
    let expected = so8_d6_matrix(&table)?;
    let out = par::try_map(exec, so8_permutations(), |p| restrict(&IntMatrix::permutation(&p), &table, &table))?;
    for (p, z) in so8_permutations().iter().zip(&out) {
        if *z != expected {
            return Err(Error::Inconsistent(format!("permutation {p:?} restricts to\n{z}")));
        }
    }
    Ok(out)
}

/// `⟨θ, λ⟩ = Σ_τ θ_ext[τ] b_{τ,λ}`.
pub fn theta_from_table(table: &BranchingTable, theta_ext: &[i64]) -> Result<Vec<i64>> {
    if theta_ext.len() != table.b.rows() {
        return Err(Error::Shape(format!("θ over {} labels for {} table rows", theta_ext.len(), table.b.rows())));
    }
    Ok((0..table.b.cols()).map(|l| (0..table.b.rows()).map(|t| theta_ext[t] * table.b[(t, l)]).sum()).collect())
}

/// Indicator of the subgroup for a simple-current extension.
pub fn theta_vector(record: &ExtensionRecord) -> Vec<i64> {
    record.theta.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn divisor_rule_examples() {
        assert_eq!(sun_divisor_table(4, 6).unwrap(), vec![1, 2, 4]);
        assert_eq!(sun_divisor_table(4, 3).unwrap(), vec![1, 2]);
        for k in 1..=6 {
            assert_eq!(sun_divisor_table(3, k).unwrap(), vec![1, 3]);
        }
    }

    #[test]
    fn su2_odd_level_inadmissible() {
        for k in [1, 3, 5, 27] {
            let spec = catalog::su2_model(k).unwrap();
            let recs = cyclic_extensions(&spec.ring, &spec.spins).unwrap();
            let z2 = recs.iter().find(|r| r.order == 2).unwrap();
            assert!(!z2.admissible);
            assert_eq!(rehren_admissible(&spec.ring, &spec.spins).unwrap().len(), 1);
        }
        let spec = catalog::su2_model(6).unwrap();
        let recs = rehren_admissible(&spec.ring, &spec.spins).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].theta, vec![1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(theta_vector(&recs[1]), vec![1, 0, 0, 0, 0, 0, 1]);
        assert!(!recs[1].local);
    }

    #[test]
    fn locality_examples() {
        assert!(locality_test(2, 4, 2).unwrap());
        assert!(!locality_test(2, 6, 2).unwrap());
        assert!(locality_test(3, 9, 3).unwrap());
        assert!(locality_test(4, 6, 3).is_err());
    }

    #[test]
    fn zn_endpoints() {
        let c: Vec<usize> = (0..10).map(|j| (10 - j) % 10).collect();
        assert_eq!(zn_invariant(10, 9, 5).unwrap(), IntMatrix::identity(10));
        assert_eq!(zn_invariant(10, 9, 1).unwrap(), IntMatrix::permutation(&c));
        assert!(zn_invariant(10, 9, 2).is_err());
        assert!(zn_invariant(10, 2, 5).is_err());
    }

    #[test]
    fn zn_representative_choice_is_irrelevant() {
        for n in 1..=24usize {
            let nt = zn_tilde(n);
            for d in zn_deltas(n) {
                let (alpha, omega) = zn_parameters(n, d).unwrap();
                let big_a = (nt / d) as i64 / alpha;
                let big_b = d as i64 / alpha;
                for t in -2..=2i64 {
                    // (r + tB, s + tA) also solves the Bezout relation
                    let shifted = omega + 2 * t * big_a * big_b;
                    assert_eq!(zn_support_matrix(n, alpha, shifted), zn_support_matrix(n, alpha, omega));
                }
            }
        }
    }

    #[test]
    fn zn_traces() {
        for n in 1..=24 {
            for d in zn_deltas(n) {
                let a = catalog::zn_valid_a(n)[0];
                assert_eq!(zn_invariant(n, a, d).unwrap().trace(), zn_expected_trace(n, d), "n={n} δ={d}");
            }
        }
    }

    #[test]
    fn su10_restrictions() {
        let t = catalog::su10_to_su4_table();
        let id = restrict(&IntMatrix::identity(10), &t, &t).unwrap();
        assert_eq!(id, t.b.transpose().mul(&t.b).unwrap());
        assert_eq!(id.trace(), 32);
        let conj = zn_invariant(10, 9, 1).unwrap();
        assert_eq!(restrict(&conj, &t, &t).unwrap().trace(), 16);
    }

    #[test]
    fn e6_both_invariants_agree() {
        let t = catalog::e6_to_su3_table();
        let id = restrict(&IntMatrix::identity(3), &t, &t).unwrap();
        let c = restrict(&IntMatrix::permutation(&[0, 2, 1]), &t, &t).unwrap();
        assert_eq!(id, c);
        for a in 0..6 {
            for b in 0..9 {
                let expected = if b < 6 {
                    1
                } else {
                    0
                };
                assert_eq!(id[(a, b)], expected);
            }
        }
        for a in 6..9 {
            for b in 6..9 {
                assert_eq!(id[(a, b)], 2);
            }
        }
    }

    #[test]
    fn so8_sweep() {
        let out = so8_restriction_sweep(Exec::Sequential).unwrap();
        assert_eq!(out.len(), 6);
        assert_eq!(out[0].trace(), 6);
    }

    #[test]
    fn theta_from_su10() {
        let t = catalog::su10_to_su4_table();
        let ext: Vec<i64> = (0..10).map(|j| i64::from(j % 2 == 0)).collect();
        let theta = theta_from_table(&t, &ext).unwrap();
        assert_eq!(theta.iter().filter(|&&x| x > 0).count(), 14);
        assert_eq!(theta.iter().sum::<i64>(), 16);
        let twice: Vec<&String> = (0..theta.len()).filter(|&l| theta[l] == 2).map(|l| &t.base_labels[l]).collect();
        assert_eq!(twice, vec!["(3,0,3)", "(1,2,1)"]);
        let trivial = BranchingTable::trivial(vec!["0".into(), "1".into()]);
        assert_eq!(theta_from_table(&trivial, &[1, 0]).unwrap(), vec![1, 0]);
    }

    #[test]
    fn table_validation() {
        assert!(BranchingTable::new("x", vec!["0".into()], vec!["a".into()], IntMatrix::zeros(1, 1)).is_err());
        assert!(BranchingTable::new("x", vec!["0".into()], vec![], IntMatrix::identity(1)).is_err());
    }
}
