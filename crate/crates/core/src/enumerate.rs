//! Enumeration of physical invariants.
//!
//! Every invariant is `Z = Σ_i x_i B_i` over the echelon commutant basis,
//! where `x_i` is the value of `Z` at the pivot entry of `B_i` and is
//! therefore a non-negative integer below the entry bound. A depth-first
//! search over the pivot values, with interval propagation on every other
//! support entry and on the total sum, recovers all of them.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use crate::commutant::{self, CommutantBasis, TSupport};
use crate::error::{Error, Result};
use crate::matrix::{frobenius, CMatrix, IntMatrix};
use crate::modular::ModularData;
use crate::par::{self, Exec};

pub const BOUND_SLACK: f64 = 1e-9;
pub const SUM_SLACK: f64 = 1e-6;
pub const INTEGRALITY: f64 = 1e-6;
pub const INVARIANT_TOLERANCE: f64 = 1e-7;
pub const DEFAULT_NODE_CAP: u64 = 100_000_000;
pub const DEFAULT_ORACLE_CAP: u64 = 10_000_000;

/// Which matrix invariants are required to commute with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Commutation {
    S,
    /// Degenerate data: `Y` stands in for the missing `S`.
    YCommutant,
}

impl std::fmt::Display for Commutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Commutation::S => write!(f, "S-commutant"),
            Commutation::YCommutant => write!(f, "Y-commutant"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EnumerateOptions {
    pub exec: Exec,
    pub node_cap: u64,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { exec: Exec::default(), node_cap: DEFAULT_NODE_CAP }
    }
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    /// Sorted, duplicate free.
    pub invariants: Vec<IntMatrix>,
    pub nodes: u64,
    pub commutant_dim: usize,
    pub constraint: Commutation,
    pub float_fallback: bool,
    pub basis_residual: f64,
}

/// Outcome of checking a candidate coupling matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantCheck {
    pub residual: f64,
    pub t_support: bool,
    pub vacuum: bool,
    pub nonnegative: bool,
    pub entry_bounds: bool,
    pub sum_bound: bool,
}

impl InvariantCheck {
    pub fn is_invariant(&self) -> bool {
        self.residual < INVARIANT_TOLERANCE
            && self.t_support
            && self.vacuum
            && self.nonnegative
            && self.entry_bounds
            && self.sum_bound
    }
}

/// `⌊d_λ d_μ + 1e-9⌋`.
pub fn entry_bounds(md: &ModularData) -> IntMatrix {
    let d = md.d();
    let m = d.len();
    let data = (0..m).flat_map(|a| (0..m).map(move |b| (d[a] * d[b] + BOUND_SLACK).floor() as i64)).collect();
    IntMatrix::from_vec(m, m, data).expect("square")
}

pub fn constraint_of(md: &ModularData) -> Commutation {
    if md.nondegenerate {
        Commutation::S
    } else {
        Commutation::YCommutant
    }
}

pub fn is_invariant(md: &ModularData, z: &IntMatrix) -> Result<InvariantCheck> {
    let m = md.rank();
    if z.rows() != m || z.cols() != m {
        return Err(Error::Shape(format!("{}x{} matrix for a rank {m} model", z.rows(), z.cols())));
    }
    let mat = commutant::normalized_y(md);
    let zc = z.to_complex();
    let residual = frobenius(&(&mat * &zc - &zc * &mat));
    let support = commutant::t_support(&md.weights);
    let bounds = entry_bounds(md);
    let mut t_ok = true;
    let mut b_ok = true;
    for a in 0..m {
        for b in 0..m {
            if z[(a, b)] != 0 && !support.allows(a, b) {
                t_ok = false;
            }
            if z[(a, b)] > bounds[(a, b)] {
                b_ok = false;
            }
        }
    }
    Ok(InvariantCheck {
        residual,
        t_support: t_ok,
        vacuum: z[(0, 0)] == 1,
        nonnegative: z.is_nonnegative(),
        entry_bounds: b_ok,
        sum_bound: (z.sum() as f64) <= md.global_index() + SUM_SLACK,
    })
}

pub fn enumerate_invariants(md: &ModularData) -> Result<Enumeration> {
    enumerate_invariants_with(md, EnumerateOptions::default())
}

pub fn enumerate_invariants_with(md: &ModularData, opts: EnumerateOptions) -> Result<Enumeration> {
    let cb = commutant::commutant_basis(md)?;
    let problem = Problem::new(md, &cb);
    let counter = AtomicU64::new(0);
    let overflow = AtomicBool::new(false);
    let ctx = Ctx { problem: &problem, counter: &counter, cap: opts.node_cap, overflow: &overflow };

    let root = State { level: 0, partial: vec![0.0; problem.n], sum: 0.0, xs: Vec::new() };
    let mut frontier = vec![root];
    let mut leaves = Vec::new();
    while frontier.len() < 64 && frontier.iter().any(|s| s.level < problem.r) {
        let mut next = Vec::new();
        for s in frontier {
            if s.level == problem.r {
                leaves.push(s.xs);
            } else {
                ctx.children(&s, &mut next);
            }
        }
        frontier = next;
        if overflow.load(Ordering::Relaxed) {
            break;
        }
    }
    let found: Vec<Vec<Vec<i64>>> = par::map(opts.exec, frontier, |s| {
        let mut out = Vec::new();
        let mut s = s;
        ctx.dfs(&mut s, &mut out);
        out
    });
    if overflow.load(Ordering::Relaxed) {
        return Err(Error::SearchOverflow { cap: opts.node_cap, context: format!("enumeration of {} invariants", md.rank()) });
    }
    leaves.extend(found.into_iter().flatten());

    let mut invariants = Vec::new();
    for xs in leaves {
        let z = problem.assemble(&xs);
        if is_invariant(md, &z)?.is_invariant() {
            invariants.push(z);
        }
    }
    invariants.sort();
    invariants.dedup();
    Ok(Enumeration {
        invariants,
        nodes: counter.load(Ordering::Relaxed),
        commutant_dim: cb.dim(),
        constraint: constraint_of(md),
        float_fallback: cb.float_fallback(),
        basis_residual: cb.residual,
    })
}

struct Problem {
    m: usize,
    r: usize,
    n: usize,
    coords: Vec<(usize, usize)>,
    /// Non-zero coefficients of each basis row: `(coordinate, value)`.
    nz: Vec<Vec<(usize, f64)>>,
    var_lo: Vec<i64>,
    var_hi: Vec<i64>,
    entry_lo: Vec<f64>,
    entry_hi: Vec<f64>,
    /// `suffix_min[t][c]`: least contribution of variables `t..` to entry `c`.
    suffix_min: Vec<Vec<f64>>,
    suffix_max: Vec<Vec<f64>>,
    /// Per-variable contribution to the total sum.
    sum_coeff: Vec<f64>,
    sum_suffix_min: Vec<f64>,
    sum_cap: f64,
    /// Entries whose value is final once variable `t` is fixed.
    closes: Vec<Vec<usize>>,
}

impl Problem {
    fn new(md: &ModularData, cb: &CommutantBasis) -> Self {
        let m = md.rank();
        let r = cb.dim();
        let n = cb.coords.len();
        let bounds = entry_bounds(md);
        let is_vacuum = |c: usize| cb.coords[c] == (0, 0);
        let entry_lo: Vec<f64> = (0..n).map(|c| if is_vacuum(c) { 1.0 } else { 0.0 }).collect();
        let entry_hi: Vec<f64> =
            (0..n).map(|c| if is_vacuum(c) { 1.0 } else { bounds[cb.coords[c]] as f64 }).collect();
        let var_lo: Vec<i64> = cb.pivots.iter().map(|&p| entry_lo[p] as i64).collect();
        let var_hi: Vec<i64> = cb.pivots.iter().map(|&p| entry_hi[p] as i64).collect();
        let nz: Vec<Vec<(usize, f64)>> = cb
            .basis
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, v)| v.abs() > 1e-12).map(|(c, &v)| (c, v)).collect())
            .collect();

        let mut suffix_min = vec![vec![0.0; n]; r + 1];
        let mut suffix_max = vec![vec![0.0; n]; r + 1];
        for t in (0..r).rev() {
            suffix_min[t] = suffix_min[t + 1].clone();
            suffix_max[t] = suffix_max[t + 1].clone();
            for &(c, v) in &nz[t] {
                let (a, b) = (v * var_lo[t] as f64, v * var_hi[t] as f64);
                suffix_min[t][c] += a.min(b);
                suffix_max[t][c] += a.max(b);
            }
        }
        let sum_coeff: Vec<f64> = nz.iter().map(|row| row.iter().map(|&(_, v)| v).sum()).collect();
        let mut sum_suffix_min = vec![0.0; r + 1];
        for t in (0..r).rev() {
            let (a, b) = (sum_coeff[t] * var_lo[t] as f64, sum_coeff[t] * var_hi[t] as f64);
            sum_suffix_min[t] = sum_suffix_min[t + 1] + a.min(b);
        }
        let mut closes = vec![Vec::new(); r];
        for c in 0..n {
            if let Some(t) = (0..r).rev().find(|&t| cb.basis[t][c].abs() > 1e-12) {
                closes[t].push(c);
            }
        }
        Problem {
            m,
            r,
            n,
            coords: cb.coords.clone(),
            nz,
            var_lo,
            var_hi,
            entry_lo,
            entry_hi,
            suffix_min,
            suffix_max,
            sum_coeff,
            sum_suffix_min,
            sum_cap: md.global_index() + SUM_SLACK,
            closes,
        }
    }

    fn assemble(&self, xs: &[i64]) -> IntMatrix {
        let mut z = IntMatrix::zeros(self.m, self.m);
        let mut vals = vec![0.0; self.n];
        for (t, &x) in xs.iter().enumerate() {
            for &(c, v) in &self.nz[t] {
                vals[c] += v * x as f64;
            }
        }
        let mut data = z.to_rows();
        for (c, &(a, b)) in self.coords.iter().enumerate() {
            data[a][b] = vals[c].round() as i64;
        }
        z = IntMatrix::from_rows(&data).expect("square");
        z
    }

    /// Range of variable `t` compatible with every entry interval and the
    /// sum bound, given the partial contributions of earlier variables.
    fn range(&self, s: &State) -> Option<(i64, i64)> {
        let t = s.level;
        let mut lo = self.var_lo[t] as f64;
        let mut hi = self.var_hi[t] as f64;
        for &(c, beta) in &self.nz[t] {
            let low_need = self.entry_lo[c] - BOUND_SLACK - s.partial[c] - self.suffix_max[t + 1][c];
            let high_room = self.entry_hi[c] + BOUND_SLACK - s.partial[c] - self.suffix_min[t + 1][c];
            if beta > 0.0 {
                lo = lo.max(low_need / beta);
                hi = hi.min(high_room / beta);
            } else {
                lo = lo.max(high_room / beta);
                hi = hi.min(low_need / beta);
            }
        }
        let beta = self.sum_coeff[t];
        let room = self.sum_cap - s.sum - self.sum_suffix_min[t + 1];
        if beta > 1e-12 {
            hi = hi.min(room / beta);
        } else if beta < -1e-12 {
            lo = lo.max(room / beta);
        }
        let lo = (lo - 1e-7).ceil() as i64;
        let hi = (hi + 1e-7).floor() as i64;
        (lo <= hi).then_some((lo, hi))
    }
}

#[derive(Clone)]
struct State {
    level: usize,
    partial: Vec<f64>,
    sum: f64,
    xs: Vec<i64>,
}

struct Ctx<'a> {
    problem: &'a Problem,
    counter: &'a AtomicU64,
    cap: u64,
    overflow: &'a AtomicBool,
}

impl Ctx<'_> {
    fn tick(&self) -> bool {
        if self.counter.fetch_add(1, Ordering::Relaxed) >= self.cap {
            self.overflow.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    /// Assigns `x` to the current variable; false when a closed entry is
    /// not an in-range integer.
    fn assign(&self, s: &mut State, x: i64) -> bool {
        let p = self.problem;
        let t = s.level;
        for &(c, v) in &p.nz[t] {
            s.partial[c] += v * x as f64;
        }
        s.sum += p.sum_coeff[t] * x as f64;
        s.xs.push(x);
        s.level += 1;
        p.closes[t].iter().all(|&c| {
            let v = s.partial[c];
            (v - v.round()).abs() < INTEGRALITY && v.round() >= p.entry_lo[c] && v.round() <= p.entry_hi[c]
        })
    }

    fn children(&self, s: &State, out: &mut Vec<State>) {
        let Some((lo, hi)) = self.problem.range(s) else { return };
        for x in lo..=hi {
            if !self.tick() {
                return;
            }
            let mut child = s.clone();
            if self.assign(&mut child, x) {
                out.push(child);
            }
        }
    }

    fn dfs(&self, s: &mut State, out: &mut Vec<Vec<i64>>) {
        if self.overflow.load(Ordering::Relaxed) {
            return;
        }
        if s.level == self.problem.r {
            out.push(s.xs.clone());
            return;
        }
        let Some((lo, hi)) = self.problem.range(s) else { return };
        let saved_partial = s.partial.clone();
        let saved_sum = s.sum;
        for x in lo..=hi {
            if !self.tick() {
                return;
            }
            if self.assign(s, x) {
                self.dfs(s, out);
            }
            s.level -= 1;
            s.xs.pop();
            s.partial.copy_from_slice(&saved_partial);
            s.sum = saved_sum;
        }
    }
}

/// Independent exhaustive scan: every assignment of the T-support entries
/// within their bounds, filtered by commutation and the sum bound. Refuses
/// to run when the box has more than `cap` points.
pub fn brute_force_enumerate(md: &ModularData, cap: u64) -> Result<Enumeration> {
    let m = md.rank();
    let support: TSupport = commutant::t_support(&md.weights);
    let bounds = entry_bounds(md);
    let coords: Vec<(usize, usize)> = support.pairs().into_iter().filter(|&c| c != (0, 0)).collect();
    let mut total: u64 = 1;
    for &(a, b) in &coords {
        total = total.saturating_mul(bounds[(a, b)] as u64 + 1);
        if total > cap {
            return Err(Error::SearchOverflow { cap, context: format!("exhaustive scan over {} entries", coords.len()) });
        }
    }
    let mat: CMatrix = commutant::normalized_y(md);
    let mut z = vec![0i64; m * m];
    z[0] = 1;
    let mut resid = CMatrix::zeros(m, m);
    let shift = |resid: &mut CMatrix, (a, b): (usize, usize), delta: f64| {
        for i in 0..m {
            resid[(i, b)] += mat[(i, a)] * delta;
        }
        for j in 0..m {
            resid[(a, j)] -= mat[(b, j)] * delta;
        }
    };
    shift(&mut resid, (0, 0), 1.0);
    let sum_cap = md.global_index() + SUM_SLACK;
    let mut sum = 1i64;
    let mut invariants = Vec::new();
    let mut nodes = 0u64;
    loop {
        nodes += 1;
        if (sum as f64) <= sum_cap && frobenius(&resid) < 1e-6 {
            let cand = IntMatrix::from_vec(m, m, z.clone())?;
            if is_invariant(md, &cand)?.is_invariant() {
                invariants.push(cand);
            }
        }
        // odometer step
        let mut i = 0;
        loop {
            if i == coords.len() {
                invariants.sort();
                invariants.dedup();
                return Ok(Enumeration {
                    invariants,
                    nodes,
                    commutant_dim: 0,
                    constraint: constraint_of(md),
                    float_fallback: false,
                    basis_residual: 0.0,
                });
            }
            let (a, b) = coords[i];
            let k = a * m + b;
            if z[k] < bounds[(a, b)] {
                z[k] += 1;
                sum += 1;
                shift(&mut resid, (a, b), 1.0);
                break;
            }
            let back = z[k];
            z[k] = 0;
            sum -= back;
            shift(&mut resid, (a, b), -(back as f64));
            i += 1;
        }
        if nodes.is_multiple_of(4096) {
            // keep the running residual from drifting
            let zc = IntMatrix::from_vec(m, m, z.clone())?.to_complex();
            resid = &mat * &zc - &zc * &mat;
        }
    }
}

/// `‖MZ − ZM‖_F` for an arbitrary complex candidate, used by tests.
pub fn commutation_residual(md: &ModularData, z: &CMatrix) -> f64 {
    let mat = commutant::normalized_y(md);
    frobenius(&(&mat * z - z * &mat))
}
