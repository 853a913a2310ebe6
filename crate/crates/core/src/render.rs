//! Partition functions `Σ Z_{λμ} χ_λ χ_μ*` as text.

use crate::error::Result;
use crate::fusion::SimpleCurrentGroup;
use crate::matrix::IntMatrix;
use crate::modular::ModelSpec;
use crate::spin::frac;

fn chi(names: &[String], l: usize) -> String {
    format!("χ{}", names[l])
}

fn with_coefficient(c: i64, term: String) -> String {
    if c == 1 {
        term
    } else {
        format!("{c}{term}")
    }
}

/// Labels with non-zero monodromy charge `h_σ + h_λ − h_{σλ}` under a
/// current `σ` that the invariant actually uses (some `Z_{λ,σλ} > 0` with
/// `σλ ≠ λ`).
pub fn twisted_labels(spec: &ModelSpec, z: &IntMatrix) -> Result<Vec<usize>> {
    let ring = &spec.ring;
    let m = ring.rank();
    let d = ring.quantum_dimensions()?.d;
    let group = SimpleCurrentGroup::from_ring(ring, &d)?;
    let used: Vec<usize> = group
        .elements
        .iter()
        .copied()
        .filter(|&s| {
            (0..m).any(|l| matches!(ring.current_action(s, l), Some(t) if t != l && z[(l, t)] > 0))
        })
        .collect();
    let h = spec.spins.weights();
    Ok((0..m)
        .filter(|&l| {
            used.iter().any(|&s| {
                let t = ring.current_action(s, l).expect("simple current");
                frac(h[s] + h[l] - h[t]) != num_rational::Rational64::from(0)
            })
        })
        .collect())
}

/// With a branching table, one `|Σ b_{τλ} χ_λ|²` block per distinct row
/// (repeated rows as a multiplicity). Otherwise the diagonal terms of
/// untwisted labels first, then every other non-zero entry row by row.
pub fn render_partition_function(spec: &ModelSpec, z: &IntMatrix, b: Option<&IntMatrix>) -> Result<String> {
    let names = spec.ring.names();
    let mut terms = Vec::new();
    if let Some(b) = b {
        let mut rows: Vec<(Vec<i64>, i64)> = Vec::new();
        for t in 0..b.rows() {
            let row = b.row(t).to_vec();
            match rows.iter_mut().find(|(r, _)| *r == row) {
                Some((_, count)) => *count += 1,
                None => rows.push((row, 1)),
            }
        }
        for (row, count) in rows {
            let inner: Vec<String> = row
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(l, &c)| with_coefficient(c, chi(&names, l)))
                .collect();
            terms.push(with_coefficient(count, format!("|{}|²", inner.join(" + "))));
        }
        return Ok(terms.join(" + "));
    }
    let m = z.rows();
    let twisted = twisted_labels(spec, z)?;
    let mut done = vec![false; m * m];
    for l in (0..m).filter(|l| !twisted.contains(l)) {
        if z[(l, l)] != 0 {
            terms.push(with_coefficient(z[(l, l)], format!("|{}|²", chi(&names, l))));
            done[l * m + l] = true;
        }
    }
    for a in 0..m {
        for c in 0..m {
            if z[(a, c)] != 0 && !done[a * m + c] {
                terms.push(with_coefficient(z[(a, c)], format!("{}{}*", chi(&names, a), chi(&names, c))));
            }
        }
    }
    Ok(terms.join(" + "))
}
