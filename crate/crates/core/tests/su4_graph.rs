//! Independent reconstruction of the SU(4)₆ graph attached to the
//! SU(10)₁ conformal inclusion, compared against the shipped catalog data.
//!
//! Route: Kac-Peterson `S` for all 84 SU(4)₆ weights, Verlinde fusion
//! rules, the sector matrix `M_{λμ} = Σ_ν ⟨θ,ν⟩ N_{νλ}^μ`, an integer Gram
//! factorisation `M = AAᵀ` whose first column is `θ`, and finally
//! `G = (AᵀA)⁻¹ Aᵀ N_□ A`.

use modinv_core::catalog;
use modinv_core::extension::{restrict, zn_invariant};
use modinv_core::graph::Graph;
use modinv_core::matrix::IntMatrix;
use modinv_core::nimrep::{match_spectrum, orbifold_quotient};
use nalgebra::DMatrix;
use num_complex::Complex64;

const K: i64 = 6;
const N: usize = 4;

fn weights() -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    for total in 0..=K {
        for p in (0..=total).rev() {
            for q in (0..=total - p).rev() {
                out.push([p, q, total - p - q]);
            }
        }
    }
    out
}

fn orthogonal(w: &[i64; 3]) -> [f64; 4] {
    let a = [w[0] + 1, w[1] + 1, w[2] + 1];
    let x = [(a[0] + a[1] + a[2]) as f64, (a[1] + a[2]) as f64, a[2] as f64, 0.0];
    let mean = x.iter().sum::<f64>() / 4.0;
    x.map(|v| v - mean)
}

fn permutations() -> Vec<([usize; 4], f64)> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    if p.iter().all(|&x| !std::mem::replace(&mut seen[x], true)) {
                        let inversions = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
                        out.push((p, if inversions % 2 == 0 { 1.0 } else { -1.0 }));
                    }
                }
            }
        }
    }
    out
}

fn kac_peterson(ws: &[[i64; 3]]) -> DMatrix<Complex64> {
    let perms = permutations();
    let xs: Vec<[f64; 4]> = ws.iter().map(orthogonal).collect();
    let m = ws.len();
    let kn = (K + N as i64) as f64;
    let mut s = DMatrix::from_element(m, m, Complex64::new(0.0, 0.0));
    for a in 0..m {
        for b in 0..m {
            let mut acc = Complex64::new(0.0, 0.0);
            for (p, sign) in &perms {
                let dot: f64 = (0..4).map(|i| xs[a][p[i]] * xs[b][i]).sum();
                acc += Complex64::from_polar(*sign, -2.0 * std::f64::consts::PI * dot / kn);
            }
            s[(a, b)] = acc;
        }
    }
    let norm = s.row(0).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let phase = s[(0, 0)] / s[(0, 0)].norm();
    s.map(|z| z / (norm * phase))
}

fn big_m(fusion: &impl Fn(usize, usize, usize) -> i64, theta: &[i64], m: usize) -> IntMatrix {
    let mut out = IntMatrix::zeros(m, m);
    for a in 0..m {
        for b in 0..m {
            out[(a, b)] = (0..m).map(|nu| theta[nu] * fusion(nu, a, b)).sum();
        }
    }
    out
}

fn n_fund(fusion: &impl Fn(usize, usize, usize) -> i64, fund: usize, m: usize) -> IntMatrix {
    let mut out = IntMatrix::zeros(m, m);
    for a in 0..m {
        for c in 0..m {
            out[(a, c)] = fusion(a, fund, c);
        }
    }
    out
}

struct Derived {
    ws: Vec<[i64; 3]>,
    g: IntMatrix,
    grading: Vec<i64>,
    names: Vec<String>,
}

fn derive() -> Derived {
    let ws = weights();
    assert_eq!(ws.len(), 84);
    let m = ws.len();
    let s = kac_peterson(&ws);
    let unit = &s * s.adjoint() - DMatrix::identity(m, m);
    assert!(unit.norm() < 1e-9);
    let index = |w: &[i64]| ws.iter().position(|x| x.as_slice() == w).unwrap();
    let fund = index(&[1, 0, 0]);
    let verlinde = |a: usize, b: usize, c: usize| -> i64 {
        let v: Complex64 = (0..m).map(|r| s[(a, r)] * s[(b, r)] * s[(c, r)].conj() / s[(0, r)]).sum();
        let n = v.re.round();
        assert!((v - n).norm() < 1e-6);
        n as i64
    };

    let mut n_tensor = vec![0i64; m * m * m];
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                n_tensor[(a * m + b) * m + c] = verlinde(a, b, c);
            }
        }
    }
    let fusion = |a: usize, b: usize, c: usize| n_tensor[(a * m + b) * m + c];
    let conj: Vec<usize> = ws.iter().map(|w| index(&[w[2], w[1], w[0]])).collect();

    let table = catalog::su10_to_su4_table();
    let base = catalog::table_weights(&table);
    let mut b = vec![vec![0i64; m]; 10];
    for (j, row) in b.iter_mut().enumerate() {
        for (l, w) in base.iter().enumerate() {
            row[index(w)] += table.b[(j, l)];
        }
    }

    // generators α_λ τ_j with ⟨α_λ τ_j, α_μ τ_k⟩ = Σ_ν N_{μ̄λ}^ν b_{k−j,ν}
    let gens: Vec<(usize, usize)> = (0..m).flat_map(|l| (0..10).map(move |j| (l, j))).collect();
    let gram_row = |x: (usize, usize)| -> Vec<i64> {
        gens.iter()
            .map(|&(mu, k)| (0..m).map(|nu| fusion(conj[mu], x.0, nu) * b[(k + 10 - x.1) % 10][nu]).sum())
            .collect()
    };
    // each irreducible is kept as an integer combination of generators
    // together with its inner products against every generator
    let mut irreducibles: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    let mut names = Vec::new();
    for (gi, &x) in gens.iter().enumerate() {
        let mut ip = gram_row(x);
        let mut coeff = vec![0i64; gens.len()];
        coeff[gi] = 1;
        for (ca, ia) in &irreducibles {
            let c = ia[gi];
            for (r, v) in ip.iter_mut().zip(ia) {
                *r -= c * v;
            }
            for (r, v) in coeff.iter_mut().zip(ca) {
                *r -= c * v;
            }
        }
        if ip[gi] == 1 {
            let (l, j) = x;
            let whole = gram_row(x)[gi] == 1;
            names.push(match (l, whole) {
                (0, _) => format!("τ{j}"),
                (_, true) => format!("α{}τ{j}", catalog::format_weight(&ws[l])),
                (_, false) => format!("α{}τ{j}'", catalog::format_weight(&ws[l])),
            });
            irreducibles.push((coeff, ip));
        }
    }
    let sectors = irreducibles.len();
    assert_eq!(sectors, 32);
    let mut a = IntMatrix::zeros(m, sectors);
    for (c, (_, ip)) in irreducibles.iter().enumerate() {
        for l in 0..m {
            a[(l, c)] = ip[l * 10];
        }
    }
    assert_eq!(a.mul(&a.transpose()).unwrap(), big_m(&fusion, &b[0], m));
    // G_ab = ⟨α_□ β_a, β_b⟩ with α_□ α_λ τ_j = Σ_ν N_{□λ}^ν α_ν τ_j
    let mut g = IntMatrix::zeros(sectors, sectors);
    for (ra, (ca, _)) in irreducibles.iter().enumerate() {
        for (rb, (_, ib)) in irreducibles.iter().enumerate() {
            let mut acc = 0;
            for (gi, &(l, j)) in gens.iter().enumerate() {
                if ca[gi] != 0 {
                    acc += ca[gi] * (0..m).map(|nu| fusion(fund, l, nu) * ib[nu * 10 + j]).sum::<i64>();
                }
            }
            g[(ra, rb)] = acc;
        }
    }
    assert_eq!(n_fund(&fusion, fund, m).mul(&a).unwrap(), a.mul(&g).unwrap());
    let grading: Vec<i64> = (0..sectors)
        .map(|col| {
            let alities: Vec<i64> =
                (0..m).filter(|&l| a[(l, col)] > 0).map(|l| catalog::sun_n_ality(N, &ws[l])).collect();
            assert!(alities.windows(2).all(|w| w[0] == w[1]), "sector {col} mixes 4-alities");
            alities[0]
        })
        .collect();
    Derived { ws, g, grading, names }
}

#[test]
fn derived_graph_matches_catalog() {
    let d = derive();
    assert_eq!(d.g.rows(), 32);
    if std::env::var_os("PRINT_SU4_GRAPH").is_some() {
        let edges: Vec<String> = (0..32)
            .flat_map(|i| (0..32).map(move |j| (i, j)))
            .filter(|&(i, j)| d.g[(i, j)] != 0)
            .map(|(i, j)| format!("({i}, {j}, {})", d.g[(i, j)]))
            .collect();
        println!("edges: [{}]", edges.join(", "));
        println!("names: {:?}", d.names);
        println!("grading: {:?}", d.grading);
    }
    let shipped = catalog::su4_level6_graph();
    assert_eq!(shipped.adjacency, d.g);
    assert_eq!(shipped.node_names, d.names);
    assert_eq!(shipped.grading.as_ref(), Some(&d.grading));
    assert_eq!(d.ws.len(), 84);
}

fn expected_spectrum(z: &IntMatrix) -> Vec<(Complex64, i64)> {
    let table = catalog::su10_to_su4_table();
    let base = catalog::table_weights(&table);
    (0..base.len())
        .filter(|&r| z[(r, r)] != 0)
        .map(|r| (catalog::sun_fundamental_character(N, K as usize, &base[r]), z[(r, r)]))
        .collect()
}

#[test]
fn shipped_graph_spectrum_and_orbifold() {
    let g: Graph = catalog::su4_level6_graph();
    let table = catalog::su10_to_su4_table();
    let z = restrict(&IntMatrix::identity(10), &table, &table).unwrap();
    assert_eq!(z.trace(), 32);
    assert!(match_spectrum(&g.adjacency, &expected_spectrum(&z)));

    let sigma = g.find_automorphism(5, 2).expect("order-5 symmetry with two fixed vertices");
    let q = orbifold_quotient(&g, &sigma).unwrap();
    assert_eq!(q.size(), 16);
    let zc = restrict(&zn_invariant(10, 9, 1).unwrap(), &table, &table).unwrap();
    assert_eq!(zc.trace(), 16);
    assert!(match_spectrum(&q.adjacency, &expected_spectrum(&zc)));
}
