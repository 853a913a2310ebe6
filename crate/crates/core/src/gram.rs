//! Non-negative integer Gram factorisation `G = Σ_t v_t v_tᵀ`.
//!
//! Used for type I branching tables (`Z = bᵀb`, rows of `b` are the
//! vectors) and for recovering sector matrices `M = AAᵀ` (columns of `A`).
//! The search fixes the first index `i` whose residual diagonal is still
//! positive, chooses the leading values `a_t` of all vectors that start at
//! `i` (a partition of `R_ii` into squares), then distributes every
//! off-diagonal `R_ij = Σ_t a_t x_{t,j}` column by column while keeping
//! the residual non-negative.

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

pub const DEFAULT_GRAM_CAP: u64 = 10_000_000;

/// First factorisation found, if any. With `pinned`, that vector is
/// subtracted first and is returned as the first vector.
pub fn gram_factorize(g: &IntMatrix, pinned: Option<&[i64]>, cap: u64) -> Result<Option<Vec<Vec<i64>>>> {
    let mut first = None;
    gram_search(g, pinned, cap, |v| {
        first = Some(v.to_vec());
        false
    })?;
    Ok(first)
}

/// Calls `visit` on every factorisation (vectors in discovery order, the
/// pinned vector first) until it returns `false`. Returns whether the
/// search ran to completion.
pub fn gram_search<F>(g: &IntMatrix, pinned: Option<&[i64]>, cap: u64, mut visit: F) -> Result<bool>
where
    F: FnMut(&[Vec<i64>]) -> bool,
{
    if !g.is_square() || !g.is_symmetric() || !g.is_nonnegative() {
        return Err(Error::Parameters("Gram factorisation needs a symmetric non-negative square matrix".into()));
    }
    let n = g.rows();
    let mut residual: Vec<i64> = g.data().to_vec();
    let mut acc = Vec::new();
    if let Some(p) = pinned {
        if p.len() != n {
            return Err(Error::Shape(format!("pinned vector of length {} for a {n}x{n} matrix", p.len())));
        }
        for a in 0..n {
            for b in 0..n {
                residual[a * n + b] -= p[a] * p[b];
                if residual[a * n + b] < 0 {
                    return Ok(true);
                }
            }
        }
        acc.push(p.to_vec());
    }
    let mut s = Search { n, cap, nodes: 0, visit: &mut visit, stopped: false };
    s.solve(&mut residual, &mut acc)?;
    Ok(!s.stopped)
}

struct Search<'a, F> {
    n: usize,
    cap: u64,
    nodes: u64,
    visit: &'a mut F,
    stopped: bool,
}

impl<F: FnMut(&[Vec<i64>]) -> bool> Search<'_, F> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::SearchOverflow { cap: self.cap, context: "Gram factorisation".into() });
        }
        Ok(())
    }

    fn solve(&mut self, r: &mut [i64], acc: &mut Vec<Vec<i64>>) -> Result<()> {
        let n = self.n;
        // an index with zero diagonal can no longer be covered
        for j in 0..n {
            if r[j * n + j] == 0 && (0..n).any(|k| r[j * n + k] != 0) {
                return Ok(());
            }
        }
        let Some(i) = (0..n).find(|&j| r[j * n + j] > 0) else {
            if !(self.visit)(acc) {
                self.stopped = true;
            }
            return Ok(());
        };
        for parts in square_partitions(r[i * n + i]) {
            let p = parts.len();
            let mut vecs = vec![vec![0i64; n]; p];
            for (t, &a) in parts.iter().enumerate() {
                vecs[t][i] = a;
            }
            self.columns(r, acc, &parts, &mut vecs, i, i + 1)?;
            if self.stopped {
                return Ok(());
            }
        }
        Ok(())
    }

    fn columns(
        &mut self,
        r: &mut [i64],
        acc: &mut Vec<Vec<i64>>,
        parts: &[i64],
        vecs: &mut Vec<Vec<i64>>,
        i: usize,
        j: usize,
    ) -> Result<()> {
        let n = self.n;
        if j == n {
            for v in vecs.iter() {
                for a in i..n {
                    if v[a] == 0 {
                        continue;
                    }
                    for b in i..n {
                        r[a * n + b] -= v[a] * v[b];
                    }
                }
            }
            let base = acc.len();
            acc.extend(vecs.iter().cloned());
            let ok = (0..n * n).all(|k| r[k] >= 0);
            if ok {
                self.solve(r, acc)?;
            }
            acc.truncate(base);
            for v in vecs.iter() {
                for a in i..n {
                    if v[a] == 0 {
                        continue;
                    }
                    for b in i..n {
                        r[a * n + b] += v[a] * v[b];
                    }
                }
            }
            return Ok(());
        }
        let target = r[i * n + j];
        let mut col = vec![0i64; parts.len()];
        self.distribute(r, acc, parts, vecs, i, j, target, 0, &mut col)
    }

    #[allow(clippy::too_many_arguments)]
    fn distribute(
        &mut self,
        r: &mut [i64],
        acc: &mut Vec<Vec<i64>>,
        parts: &[i64],
        vecs: &mut Vec<Vec<i64>>,
        i: usize,
        j: usize,
        remaining: i64,
        t: usize,
        col: &mut Vec<i64>,
    ) -> Result<()> {
        let n = self.n;
        if t == parts.len() {
            if remaining != 0 {
                return Ok(());
            }
            self.tick()?;
            // new entries must fit in the residual diagonal and the
            // residual entries against earlier columns
            let diag: i64 = col.iter().map(|x| x * x).sum();
            if diag > r[j * n + j] {
                return Ok(());
            }
            for jp in i + 1..j {
                let cross: i64 = (0..parts.len()).map(|u| col[u] * vecs[u][jp]).sum();
                if cross > r[jp * n + j] {
                    return Ok(());
                }
            }
            for (u, &x) in col.iter().enumerate() {
                vecs[u][j] = x;
            }
            self.columns(r, acc, parts, vecs, i, j + 1)?;
            for v in vecs.iter_mut() {
                v[j] = 0;
            }
            return Ok(());
        }
        let a = parts[t];
        let mut hi = remaining / a;
        hi = hi.min(isqrt(r[j * n + j]));
        // vectors with the same leading value stay in non-increasing order
        if t > 0 && parts[t - 1] == a && vecs[t - 1][i + 1..j] == vecs[t][i + 1..j] {
            hi = hi.min(col[t - 1]);
        }
        for x in (0..=hi).rev() {
            col[t] = x;
            self.distribute(r, acc, parts, vecs, i, j, remaining - a * x, t + 1, col)?;
            if self.stopped {
                break;
            }
        }
        col[t] = 0;
        Ok(())
    }
}

fn isqrt(x: i64) -> i64 {
    if x <= 0 {
        return 0;
    }
    let mut s = (x as f64).sqrt() as i64;
    while s * s > x {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= x {
        s += 1;
    }
    s
}

/// Non-increasing sequences of positive integers whose squares sum to `n`,
/// fewest parts first.
pub fn square_partitions(n: i64) -> Vec<Vec<i64>> {
    fn rec(n: i64, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for a in (1..=max.min(isqrt(n))).rev() {
            cur.push(a);
            rec(n - a * a, a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out.sort_by_key(Vec::len);
    out
}

/// Stacks vectors as the rows of a matrix.
pub fn rows_to_matrix(vectors: &[Vec<i64>], cols: usize) -> Result<IntMatrix> {
    if vectors.is_empty() {
        return Ok(IntMatrix::zeros(0, cols));
    }
    IntMatrix::from_rows(vectors)
}
