//! T-support classes and the real commutant of the modular data.
//!
//! An invariant can only be non-zero on pairs of labels with equal
//! conformal weight mod 1, so the unknowns are the entries on this
//! T-support. The commutant `{Z : SZ = ZS}` restricted to it is found as
//! the numerical nullspace of the real linear map `Z ↦ SZ − ZS`, brought
//! to reduced row echelon form so that each basis vector is pinned by one
//! matrix entry ("pivot"), and then rationalised.

use nalgebra::DMatrix;
use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::modular::ModularData;

pub const RANK_CUT: f64 = 1e-9;
pub const PIVOT_TOLERANCE: f64 = 1e-7;
pub const MAX_DENOMINATOR: i64 = 1_000_000;
pub const RATIONAL_TOLERANCE: f64 = 1e-9;
pub const BASIS_RESIDUAL: f64 = 1e-8;

/// Labels grouped by conformal weight mod 1, classes ordered by their
/// smallest label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TSupport {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
}

impl TSupport {
    pub fn allows(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    /// All pairs `(a, b)` in the same class, row-major.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let m = self.class_of.len();
        (0..m).flat_map(|a| (0..m).map(move |b| (a, b))).filter(|&(a, b)| self.allows(a, b)).collect()
    }
}

pub fn t_support(weights: &[Rational64]) -> TSupport {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = vec![0; weights.len()];
    for (l, h) in weights.iter().enumerate() {
        match classes.iter().position(|c| weights[c[0]] == *h) {
            Some(i) => {
                classes[i].push(l);
                class_of[l] = i;
            }
            None => {
                class_of[l] = classes.len();
                classes.push(vec![l]);
            }
        }
    }
    TSupport { classes, class_of }
}

/// The matrix every invariant must commute with, normalised as `Y/√w`
/// (this is `S` itself when the data is non-degenerate).
pub fn normalized_y(md: &ModularData) -> CMatrix {
    let scale = md.global_index().sqrt();
    md.y.map(|v| v / scale)
}

#[derive(Debug, Clone)]
pub struct CommutantBasis {
    /// Support coordinates, in the order used for the echelon form.
    pub coords: Vec<(usize, usize)>,
    /// `r` rows of length `coords.len()`, in reduced row echelon form.
    pub basis: Vec<Vec<f64>>,
    /// For each basis row, the coordinate index of its pivot.
    pub pivots: Vec<usize>,
    /// Exact basis when every entry rationalised.
    pub rational: Option<Vec<Vec<Rational64>>>,
    /// Max `‖M B_i − B_i M‖_F` over the basis matrices.
    pub residual: f64,
}

impl CommutantBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn float_fallback(&self) -> bool {
        self.rational.is_none()
    }

    pub fn matrix(&self, i: usize, m: usize) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(m, m);
        for (c, &(a, b)) in self.coords.iter().enumerate() {
            out[(a, b)] = self.basis[i][c];
        }
        out
    }
}

/// Support coordinates ordered so that pivots land on small-range entries:
/// the vacuum entry first, then the vacuum row and column, then everything
/// else by increasing entry bound.
pub fn coordinate_order(support: &TSupport, bounds: &[Vec<i64>]) -> Vec<(usize, usize)> {
    let mut coords = support.pairs();
    coords.sort_by_key(|&(a, b)| {
        let tier = if (a, b) == (0, 0) {
            0
        } else if a == 0 || b == 0 {
            1
        } else {
            2
        };
        (tier, bounds[a][b], a, b)
    });
    coords
}

pub fn commutant_basis(md: &ModularData) -> Result<CommutantBasis> {
    let support = t_support(&md.weights);
    let bounds = crate::enumerate::entry_bounds(md);
    let coords = coordinate_order(&support, &bounds.to_rows());
    let mat = normalized_y(md);
    let null = nullspace(&mat, &coords)?;
    let (basis, pivots) = rref(null);
    let rational = rationalize(&basis);
    let basis = match &rational {
        Some(q) => q.iter().map(|row| row.iter().map(|x| *x.numer() as f64 / *x.denom() as f64).collect()).collect(),
        None => basis,
    };
    let m = md.rank();
    let mut cb = CommutantBasis { coords, basis, pivots, rational, residual: 0.0 };
    for i in 0..cb.dim() {
        let b = cb.matrix(i, m).map(|x| num_complex::Complex64::new(x, 0.0));
        let r = crate::matrix::frobenius(&(&mat * &b - &b * &mat));
        cb.residual = cb.residual.max(r);
    }
    if cb.residual > BASIS_RESIDUAL {
        if cb.rational.is_some() {
            // rationalisation snapped onto a wrong value; keep the raw floats
            let raw = rref(nullspace(&mat, &cb.coords)?);
            cb.basis = raw.0;
            cb.pivots = raw.1;
            cb.rational = None;
            cb.residual = 0.0;
            for i in 0..cb.dim() {
                let b = cb.matrix(i, m).map(|x| num_complex::Complex64::new(x, 0.0));
                cb.residual = cb.residual.max(crate::matrix::frobenius(&(&mat * &b - &b * &mat)));
            }
        }
        if cb.residual > BASIS_RESIDUAL {
            return Err(Error::Inconsistent(format!("commutant basis residual {:e}", cb.residual)));
        }
    }
    Ok(cb)
}

/// Orthonormal basis (as rows) of `{x : M X − X M = 0}` where `X` is
/// supported on `coords`.
fn nullspace(mat: &CMatrix, coords: &[(usize, usize)]) -> Result<Vec<Vec<f64>>> {
    let m = mat.nrows();
    let n = coords.len();
    let rows = (2 * m * m).max(n);
    let mut a = DMatrix::<f64>::zeros(rows, n);
    for (c, &(p, q)) in coords.iter().enumerate() {
        // M E_pq puts column p of M into column q; E_pq M puts row q of M into row p
        for i in 0..m {
            let v = mat[(i, p)];
            let r = i * m + q;
            a[(2 * r, c)] += v.re;
            a[(2 * r + 1, c)] += v.im;
        }
        for j in 0..m {
            let v = mat[(q, j)];
            let r = p * m + j;
            a[(2 * r, c)] -= v.re;
            a[(2 * r + 1, c)] -= v.im;
        }
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.ok_or_else(|| Error::Inconsistent("SVD did not return right singular vectors".into()))?;
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cut = RANK_CUT * sigma_max.max(1.0);
    Ok((0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] < cut)
        .map(|i| v_t.row(i).iter().copied().collect())
        .collect())
}

/// Gauss-Jordan elimination with partial pivoting; returns the non-zero
/// rows and the pivot column of each.
pub fn rref(mut rows: Vec<Vec<f64>>) -> (Vec<Vec<f64>>, Vec<usize>) {
    let r = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut lead = 0;
    for col in 0..n {
        if lead == r {
            break;
        }
        let (best, val) = (lead..r)
            .map(|i| (i, rows[i][col].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty range");
        if val < PIVOT_TOLERANCE {
            continue;
        }
        rows.swap(lead, best);
        let p = rows[lead][col];
        for x in rows[lead].iter_mut() {
            *x /= p;
        }
        let pivot_row = rows[lead].clone();
        for (i, row) in rows.iter_mut().enumerate().take(r) {
            if i != lead {
                let f = row[col];
                if f != 0.0 {
                    for (x, &y) in row.iter_mut().zip(&pivot_row).take(n) {
                        *x -= f * y;
                    }
                }
            }
        }
        for x in rows[lead].iter_mut() {
            if x.abs() < 1e-13 {
                *x = 0.0;
            }
        }
        pivots.push(col);
        lead += 1;
    }
    rows.truncate(lead);
    (rows, pivots)
}

/// Best rational approximation with denominator at most `max_den`, if it
/// lies within `tol` of `x`.
pub fn rationalize_value(x: f64, max_den: i64, tol: f64) -> Option<Rational64> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() < tol {
            return Some(Rational64::new(h1, k1));
        }
        let frac = rest - a as f64;
        if frac.abs() < 1e-300 {
            break;
        }
        rest = 1.0 / frac;
    }
    (k1 != 0 && (x - h1 as f64 / k1 as f64).abs() < tol).then(|| Rational64::new(h1, k1))
}

fn rationalize(basis: &[Vec<f64>]) -> Option<Vec<Vec<Rational64>>> {
    basis
        .iter()
        .map(|row| {
            row.iter()
                .map(|&x| {
                    if x.abs() < RATIONAL_TOLERANCE {
                        Some(Rational64::zero())
                    } else {
                        rationalize_value(x, MAX_DENOMINATOR, RATIONAL_TOLERANCE)
                    }
                })
                .collect()
        })
        .collect()
}
