//! Commutative fusion rings with conjugation.
//!
//! A ring is stored as its structure constants `N[λ][μ][ν] = N_{λ,μ}^ν`
//! together with the conjugation permutation. Nothing about validity is
//! assumed at construction time: [`FusionRing::verify_axioms`] reports
//! every violated axiom, and the numerical quantities (quantum dimensions,
//! simple currents) refuse to run on a ring that fails it.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Residual bound for `d_λ d_μ = Σ_ν N_{λ,μ}^ν d_ν`.
pub const DIMENSION_TOLERANCE: f64 = 1e-9;
/// `|d_σ − 1|` below this marks a simple current.
pub const SIMPLE_CURRENT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorLabel {
    pub index: usize,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionRing {
    labels: Vec<SectorLabel>,
    n: Vec<u32>,
    conj: Vec<usize>,
}

/// One violated axiom, with the offending indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    /// `N_{0,μ}^ν ≠ δ_{μ,ν}`, reported at `(0, μ, ν)`.
    Identity { mu: usize, nu: usize, found: u32 },
    Commutativity { lambda: usize, mu: usize, nu: usize },
    Associativity { lambda: usize, mu: usize, nu: usize, sigma: usize },
    /// `N_{λ,μ}^0 ≠ δ_{μ,λ̄}`.
    Conjugation { lambda: usize, mu: usize, found: u32 },
    /// The conjugation map is not an involution fixing the vacuum.
    ConjugationMap { lambda: usize },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Identity { mu, nu, found } => {
                write!(f, "identity axiom violated at (0,{mu},{nu}): N = {found}")
            }
            AxiomViolation::Commutativity { lambda, mu, nu } => {
                write!(f, "commutativity violated at ({lambda},{mu},{nu})")
            }
            AxiomViolation::Associativity { lambda, mu, nu, sigma } => {
                write!(f, "associativity violated at ({lambda},{mu},{nu};{sigma})")
            }
            AxiomViolation::Conjugation { lambda, mu, found } => {
                write!(f, "conjugation axiom violated at ({lambda},{mu},0): N = {found}")
            }
            AxiomViolation::ConjugationMap { lambda } => {
                write!(f, "conjugation map is not an involution fixing 0 (label {lambda})")
            }
        }
    }
}

/// Result of [`FusionRing::verify_axioms`]. Frobenius reciprocity failures
/// are warnings only.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
    pub frobenius_warnings: Vec<(usize, usize, usize)>,
}

impl AxiomReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Quantum dimensions and the global index `w = Σ d²`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumDimensions {
    pub d: Vec<f64>,
    pub global_index: f64,
    pub residual: f64,
}

impl FusionRing {
    /// Builds a ring from display names, the flattened tensor
    /// (`n[(λ·m + μ)·m + ν]`) and the conjugation map. Only shapes are
    /// checked here.
    pub fn new(names: Vec<String>, n: Vec<u32>, conj: Vec<usize>) -> Result<Self> {
        let m = names.len();
        if m == 0 {
            return Err(Error::Shape("empty label set".into()));
        }
        if n.len() != m * m * m {
            return Err(Error::Shape(format!("fusion tensor has {} entries, expected {}", n.len(), m * m * m)));
        }
        if conj.len() != m || conj.iter().any(|&c| c >= m) {
            return Err(Error::Shape("conjugation map out of range".into()));
        }
        let labels = names.into_iter().enumerate().map(|(index, name)| SectorLabel { index, name }).collect();
        Ok(FusionRing { labels, n, conj })
    }

    /// Builds a ring from a rule `f(λ, μ, ν)`.
    pub fn from_rule(
        names: Vec<String>,
        conj: Vec<usize>,
        rule: impl Fn(usize, usize, usize) -> u32,
    ) -> Result<Self> {
        let m = names.len();
        let mut n = Vec::with_capacity(m * m * m);
        for l in 0..m {
            for mu in 0..m {
                for nu in 0..m {
                    n.push(rule(l, mu, nu));
                }
            }
        }
        Self::new(names, n, conj)
    }

    /// The cyclic group ring ℤ_n with labels `0..n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        let names = (0..n).map(|j| j.to_string()).collect();
        let conj = (0..n).map(|j| (n - j) % n).collect();
        Self::from_rule(names, conj, |a, b, c| u32::from((a + b) % n == c))
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[SectorLabel] {
        &self.labels
    }

    pub fn name(&self, l: usize) -> &str {
        &self.labels[l].name
    }

    pub fn names(&self) -> Vec<String> {
        self.labels.iter().map(|l| l.name.clone()).collect()
    }

    pub fn label_index(&self, name: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l.name == name)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    #[inline]
    pub fn n(&self, l: usize, mu: usize, nu: usize) -> u32 {
        let m = self.rank();
        self.n[(l * m + mu) * m + nu]
    }

    pub fn tensor(&self) -> &[u32] {
        &self.n
    }

    pub fn conj(&self, l: usize) -> usize {
        self.conj[l]
    }

    pub fn conjugation(&self) -> &[usize] {
        &self.conj
    }

    /// Overwrites one structure constant; meant for building broken fixtures.
    pub fn with_entry(mut self, l: usize, mu: usize, nu: usize, value: u32) -> Self {
        let m = self.rank();
        self.n[(l * m + mu) * m + nu] = value;
        self
    }

    /// `(N_λ)_{μ,ν} = N_{λ,μ}^ν`.
    pub fn fusion_matrix(&self, l: usize) -> Result<IntMatrix> {
        let m = self.rank();
        if l >= m {
            return Err(Error::UnknownLabel(l.to_string()));
        }
        let data = (0..m).flat_map(|mu| (0..m).map(move |nu| (mu, nu))).map(|(mu, nu)| self.n(l, mu, nu) as i64);
        IntMatrix::from_vec(m, m, data.collect())
    }

    pub fn verify_axioms(&self) -> AxiomReport {
        let m = self.rank();
        let mut report = AxiomReport::default();
        for mu in 0..m {
            for nu in 0..m {
                let found = self.n(0, mu, nu);
                if found != u32::from(mu == nu) {
                    report.violations.push(AxiomViolation::Identity { mu, nu, found });
                }
            }
        }
        for l in 0..m {
            for mu in (l + 1)..m {
                for nu in 0..m {
                    if self.n(l, mu, nu) != self.n(mu, l, nu) {
                        report.violations.push(AxiomViolation::Commutativity { lambda: l, mu, nu });
                    }
                }
            }
        }
        if self.conj[0] != 0 {
            report.violations.push(AxiomViolation::ConjugationMap { lambda: 0 });
        }
        for l in 0..m {
            if self.conj[self.conj[l]] != l {
                report.violations.push(AxiomViolation::ConjugationMap { lambda: l });
            }
            for mu in 0..m {
                let found = self.n(l, mu, 0);
                if found != u32::from(mu == self.conj[l]) {
                    report.violations.push(AxiomViolation::Conjugation { lambda: l, mu, found });
                }
            }
        }
        // (λμ)ν = λ(μν), compared coefficient-wise in σ
        for l in 0..m {
            for mu in 0..m {
                for nu in 0..m {
                    for sigma in 0..m {
                        let left: u64 = (0..m).map(|r| self.n(l, mu, r) as u64 * self.n(r, nu, sigma) as u64).sum();
                        let right: u64 = (0..m).map(|r| self.n(mu, nu, r) as u64 * self.n(l, r, sigma) as u64).sum();
                        if left != right {
                            report.violations.push(AxiomViolation::Associativity { lambda: l, mu, nu, sigma });
                        }
                    }
                }
            }
        }
        for l in 0..m {
            for mu in 0..m {
                for nu in 0..m {
                    if self.n(l, mu, nu) != self.n(self.conj[l], nu, mu) {
                        report.frobenius_warnings.push((l, mu, nu));
                    }
                }
            }
        }
        report
    }

    fn require_valid(&self) -> Result<()> {
        let report = self.verify_axioms();
        match report.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidRing(v.to_string())),
        }
    }

    /// Common Perron-Frobenius eigenvector of the fusion matrices,
    /// normalised to `d₀ = 1`.
    pub fn quantum_dimensions(&self) -> Result<QuantumDimensions> {
        self.require_valid()?;
        let m = self.rank();
        // Σ_λ (N_λ + N_λᵀ) is symmetric, non-negative and irreducible, and
        // shares the PF vector d with every N_λ.
        let mut sum = DMatrix::<f64>::zeros(m, m);
        for l in 0..m {
            for mu in 0..m {
                for nu in 0..m {
                    let v = self.n(l, mu, nu) as f64;
                    sum[(mu, nu)] += v;
                    sum[(nu, mu)] += v;
                }
            }
        }
        let eig = SymmetricEigen::new(sum);
        let top = eig.eigenvalues.imax();
        let v = eig.eigenvectors.column(top);
        if v[0].abs() < 1e-12 {
            return Err(Error::IllConditioned("Perron-Frobenius vector vanishes at the vacuum".into()));
        }
        let d: Vec<f64> = v.iter().map(|x| x / v[0]).collect();
        let residual = self.dimension_residual(&d);
        if residual.is_nan() || residual >= DIMENSION_TOLERANCE || d.iter().any(|&x| x < 1.0 - DIMENSION_TOLERANCE) {
            return Err(Error::IllConditioned(format!("dimension residual {residual:e}")));
        }
        let global_index = d.iter().map(|x| x * x).sum();
        Ok(QuantumDimensions { d, global_index, residual })
    }

    /// `max |d_λ d_μ − Σ_ν N_{λ,μ}^ν d_ν|`.
    pub fn dimension_residual(&self, d: &[f64]) -> f64 {
        let m = self.rank();
        let mut worst: f64 = 0.0;
        for l in 0..m {
            for mu in 0..m {
                let rhs: f64 = (0..m).map(|nu| self.n(l, mu, nu) as f64 * d[nu]).sum();
                worst = worst.max((d[l] * d[mu] - rhs).abs());
            }
        }
        worst
    }

    pub fn simple_currents(&self) -> Result<SimpleCurrentGroup> {
        let dims = self.quantum_dimensions()?;
        SimpleCurrentGroup::from_ring(self, &dims.d)
    }

    /// For a simple current `σ`, the label `σ × λ`.
    pub fn current_action(&self, sigma: usize, l: usize) -> Option<usize> {
        let m = self.rank();
        let targets: Vec<usize> = (0..m).filter(|&nu| self.n(sigma, l, nu) != 0).collect();
        match targets.as_slice() {
            [nu] if self.n(sigma, l, *nu) == 1 => Some(*nu),
            _ => None,
        }
    }

    /// Tensor product ring on pairs `(a, b) ↦ a·m₂ + b`.
    pub fn tensor_product(&self, other: &FusionRing) -> Result<FusionRing> {
        let (m1, m2) = (self.rank(), other.rank());
        let names = (0..m1 * m2)
            .map(|i| format!("{}⊗{}", self.name(i / m2), other.name(i % m2)))
            .collect();
        let conj = (0..m1 * m2).map(|i| self.conj(i / m2) * m2 + other.conj(i % m2)).collect();
        FusionRing::from_rule(names, conj, |a, b, c| {
            self.n(a / m2, b / m2, c / m2) * other.n(a % m2, b % m2, c % m2)
        })
    }
}

/// The group of invertible labels under fusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleCurrentGroup {
    /// Sorted label indices; always starts with 0.
    pub elements: Vec<usize>,
    /// `table[i][j]` = position in `elements` of `elements[i] × elements[j]`.
    pub table: Vec<Vec<usize>>,
    /// Invariant factors `n₁ | n₂ | …` of the abelian group.
    pub factors: Vec<usize>,
    /// One generator (label index) per factor.
    pub generators: Vec<usize>,
}

impl SimpleCurrentGroup {
    pub fn from_ring(ring: &FusionRing, d: &[f64]) -> Result<Self> {
        let elements: Vec<usize> =
            (0..ring.rank()).filter(|&l| (d[l] - 1.0).abs() < SIMPLE_CURRENT_TOLERANCE).collect();
        if elements.first() != Some(&0) {
            return Err(Error::CurrentClosure("vacuum is not a simple current".into()));
        }
        let pos = |l: usize| elements.iter().position(|&e| e == l);
        let mut table = vec![vec![0; elements.len()]; elements.len()];
        for (i, &a) in elements.iter().enumerate() {
            for l in 0..ring.rank() {
                if ring.current_action(a, l).is_none() {
                    return Err(Error::CurrentClosure(format!("fusion by {} is not a permutation", ring.name(a))));
                }
            }
            if pos(ring.conj(a)).is_none() {
                return Err(Error::CurrentClosure(format!("conjugate of {} is not a current", ring.name(a))));
            }
            for (j, &b) in elements.iter().enumerate() {
                let c = ring.current_action(a, b).expect("checked above");
                table[i][j] = pos(c).ok_or_else(|| {
                    Error::CurrentClosure(format!("{} × {} leaves the current set", ring.name(a), ring.name(b)))
                })?;
            }
        }
        let mut group = SimpleCurrentGroup { elements, table, factors: vec![], generators: vec![] };
        group.decompose();
        Ok(group)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, label: usize) -> bool {
        self.elements.contains(&label)
    }

    /// Order of the current with label `label`.
    pub fn element_order(&self, label: usize) -> usize {
        let i = self.elements.iter().position(|&e| e == label).expect("label is a current");
        let mut x = i;
        let mut k = 1;
        while x != 0 {
            x = self.table[x][i];
            k += 1;
        }
        k
    }

    /// Labels of the cyclic subgroup generated by `label`, sorted.
    pub fn cyclic_subgroup(&self, label: usize) -> Vec<usize> {
        let i = self.elements.iter().position(|&e| e == label).expect("label is a current");
        let mut out = BTreeSet::new();
        let mut x = 0;
        loop {
            out.insert(self.elements[x]);
            x = self.table[x][i];
            if x == 0 {
                break;
            }
        }
        out.into_iter().collect()
    }

    fn generated(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut set: BTreeSet<usize> = [0].into();
        let idx: Vec<usize> = gens.iter().map(|g| self.elements.iter().position(|e| e == g).unwrap()).collect();
        loop {
            let mut grew = false;
            for a in set.clone() {
                for &g in &idx {
                    grew |= set.insert(self.table[a][g]);
                }
            }
            if !grew {
                return set.into_iter().map(|i| self.elements[i]).collect();
            }
        }
    }

    fn decompose(&mut self) {
        let n = self.order();
        if n == 1 {
            return;
        }
        // invariant factors from the counts |{x : kx = 0}|
        let orders: Vec<usize> = self.elements.iter().map(|&e| self.element_order(e)).collect();
        let mut factors = Vec::new();
        let mut primes = Vec::new();
        let mut rest = n;
        let mut p = 2;
        while rest > 1 {
            if rest.is_multiple_of(p) {
                primes.push(p);
                while rest.is_multiple_of(p) {
                    rest /= p;
                }
            }
            p += 1;
        }
        // for each prime, exponents e_j of the p-primary cyclic factors
        let mut primary: Vec<(usize, Vec<u32>)> = Vec::new();
        for &p in &primes {
            let mut counts = vec![1usize];
            let mut pk = 1;
            loop {
                pk *= p;
                let c = orders.iter().filter(|&&o| pk % o == 0 && is_power_of(o, p)).count();
                counts.push(c);
                if c == *counts.iter().rev().nth(1).unwrap() {
                    break;
                }
            }
            // number of cyclic factors with exponent ≥ i is log_p(counts[i] / counts[i-1])
            let mut ge = Vec::new();
            for i in 1..counts.len() {
                let ratio = counts[i] / counts[i - 1];
                ge.push(ratio.ilog(p));
            }
            let mut exps = Vec::new();
            for (i, &g) in ge.iter().enumerate() {
                let next = ge.get(i + 1).copied().unwrap_or(0);
                for _ in 0..(g - next) {
                    exps.push(i as u32 + 1);
                }
            }
            exps.sort_unstable_by(|a, b| b.cmp(a));
            primary.push((p, exps));
        }
        let len = primary.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        for i in 0..len {
            let mut f = 1;
            for (p, exps) in &primary {
                if let Some(&e) = exps.get(i) {
                    f *= p.pow(e);
                }
            }
            factors.push(f);
        }
        factors.reverse();
        self.factors = factors;
        self.generators = self.find_generators(&orders);
    }

    fn find_generators(&self, orders: &[usize]) -> Vec<usize> {
        fn search(
            g: &SimpleCurrentGroup,
            orders: &[usize],
            depth: usize,
            chosen: &mut Vec<usize>,
        ) -> bool {
            if depth == g.factors.len() {
                return g.generated(chosen).len() == g.order();
            }
            for (i, &e) in g.elements.iter().enumerate() {
                if orders[i] == g.factors[depth] {
                    chosen.push(e);
                    let size = g.generated(chosen).len();
                    let expected: usize = g.factors[..=depth].iter().product();
                    if size == expected && search(g, orders, depth + 1, chosen) {
                        return true;
                    }
                    chosen.pop();
                }
            }
            false
        }
        let mut chosen = Vec::new();
        search(self, orders, 0, &mut chosen);
        chosen
    }
}

fn is_power_of(mut m: usize, p: usize) -> bool {
    while m > 1 && m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn cyclic_rings_are_valid() {
        for n in 1..=12 {
            let ring = FusionRing::cyclic(n).unwrap();
            assert!(ring.verify_axioms().is_valid(), "Z_{n}");
            let g = ring.simple_currents().unwrap();
            assert_eq!(g.order(), n);
            if n > 1 {
                assert_eq!(g.factors, vec![n]);
            }
        }
    }

    #[test]
    fn broken_identity_is_reported() {
        let ring = catalog::su2_model(6).unwrap().ring.with_entry(0, 1, 2, 1);
        let report = ring.verify_axioms();
        assert!(report
            .violations
            .contains(&AxiomViolation::Identity { mu: 1, nu: 2, found: 1 }));
        assert!(matches!(ring.quantum_dimensions(), Err(Error::InvalidRing(_))));
    }

    #[test]
    fn fusion_matrix_shapes() {
        let ring = catalog::su2_model(6).unwrap().ring;
        assert_eq!(ring.fusion_matrix(0).unwrap(), IntMatrix::identity(7));
        let n1 = ring.fusion_matrix(1).unwrap();
        for i in 0..7usize {
            for j in 0..7 {
                let expected = i64::from(i.abs_diff(j) == 1);
                assert_eq!(n1[(i, j)], expected);
            }
        }
        assert!(ring.fusion_matrix(7).is_err());
        let z4 = FusionRing::cyclic(4).unwrap().fusion_matrix(1).unwrap();
        assert_eq!(z4, IntMatrix::permutation(&[1, 2, 3, 0]));
    }

    #[test]
    fn klein_four_group() {
        let ring = catalog::so8_level1_model().ring;
        let g = ring.simple_currents().unwrap();
        assert_eq!(g.elements, vec![0, 1, 2, 3]);
        assert_eq!(g.factors, vec![2, 2]);
        assert_eq!(g.generators.len(), 2);
    }

    #[test]
    fn mixed_group_factors() {
        // ℤ₂ × ℤ₆ ≅ invariant factors (2, 6)
        let ring = FusionRing::cyclic(2).unwrap().tensor_product(&FusionRing::cyclic(6).unwrap()).unwrap();
        let g = ring.simple_currents().unwrap();
        assert_eq!(g.factors, vec![2, 6]);
        let ring = FusionRing::cyclic(3).unwrap().tensor_product(&FusionRing::cyclic(4).unwrap()).unwrap();
        assert_eq!(ring.simple_currents().unwrap().factors, vec![12]);
    }
}
