//! Graphs given by adjacency matrices: the A-D-E and tadpole catalog,
//! spectra, automorphisms and DOT export.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub name: String,
    pub adjacency: IntMatrix,
    pub node_names: Vec<String>,
    /// n-ality of each node, when the graph carries one.
    pub grading: Option<Vec<i64>>,
}

impl Graph {
    pub fn new(name: impl Into<String>, adjacency: IntMatrix) -> Result<Self> {
        if !adjacency.is_square() {
            return Err(Error::Shape(format!("{}x{} adjacency matrix", adjacency.rows(), adjacency.cols())));
        }
        if !adjacency.is_nonnegative() {
            return Err(Error::Parameters("adjacency entries must be non-negative".into()));
        }
        let node_names = (0..adjacency.rows()).map(|i| i.to_string()).collect();
        Ok(Graph { name: name.into(), adjacency, node_names, grading: None })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.size() {
            return Err(Error::Shape(format!("{} names for {} nodes", names.len(), self.size())));
        }
        self.node_names = names;
        Ok(self)
    }

    pub fn with_grading(mut self, grading: Vec<i64>) -> Result<Self> {
        if grading.len() != self.size() {
            return Err(Error::Shape(format!("grading of length {} for {} nodes", grading.len(), self.size())));
        }
        self.grading = Some(grading);
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.adjacency.rows()
    }

    /// Eigenvalues of the adjacency matrix (complex for directed graphs).
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        eigenvalues(&self.adjacency)
    }

    /// Largest eigenvalue modulus.
    pub fn perron_frobenius(&self) -> f64 {
        self.eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Weakly connected.
    pub fn is_connected(&self) -> bool {
        let n = self.size();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for (u, s) in seen.iter_mut().enumerate() {
                if !*s && (self.adjacency[(v, u)] > 0 || self.adjacency[(u, v)] > 0) {
                    *s = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_automorphism(&self, p: &[usize]) -> bool {
        let n = self.size();
        p.len() == n
            && is_permutation(p)
            && (0..n).all(|i| (0..n).all(|j| self.adjacency[(p[i], p[j])] == self.adjacency[(i, j)]))
    }

    /// Automorphisms in lexicographic order, stopping once `visit` returns
    /// false.
    pub fn automorphisms<F: FnMut(&[usize]) -> bool>(&self, mut visit: F) {
        let n = self.size();
        let a = &self.adjacency;
        let signature = |v: usize| {
            let mut out: Vec<i64> = (0..n).map(|u| a[(v, u)]).collect();
            let mut inn: Vec<i64> = (0..n).map(|u| a[(u, v)]).collect();
            out.sort_unstable();
            inn.sort_unstable();
            (a[(v, v)], out, inn)
        };
        let sigs: Vec<_> = (0..n).map(signature).collect();
        let mut p = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn rec<F: FnMut(&[usize]) -> bool>(
            v: usize,
            n: usize,
            a: &IntMatrix,
            sigs: &[(i64, Vec<i64>, Vec<i64>)],
            p: &mut Vec<usize>,
            used: &mut Vec<bool>,
            visit: &mut F,
        ) -> bool {
            if v == n {
                return visit(p);
            }
            for img in 0..n {
                if used[img] || sigs[img] != sigs[v] {
                    continue;
                }
                if (0..v).any(|u| a[(p[u], img)] != a[(u, v)] || a[(img, p[u])] != a[(v, u)]) {
                    continue;
                }
                p[v] = img;
                used[img] = true;
                let go_on = rec(v + 1, n, a, sigs, p, used, visit);
                used[img] = false;
                p[v] = usize::MAX;
                if !go_on {
                    return false;
                }
            }
            true
        }
        rec(0, n, a, &sigs, &mut p, &mut used, &mut visit);
    }

    /// First automorphism of exact order `order` with exactly `fixed`
    /// fixed points.
    pub fn find_automorphism(&self, order: usize, fixed: usize) -> Option<Vec<usize>> {
        let mut found = None;
        self.automorphisms(|p| {
            if permutation_order(p) == order && p.iter().enumerate().filter(|(i, &x)| *i == x).count() == fixed {
                found = Some(p.to_vec());
                return false;
            }
            true
        });
        found
    }

    /// Graphviz rendering; undirected when the adjacency is symmetric.
    pub fn to_dot(&self) -> String {
        const SHAPES: [&str; 6] = ["circle", "box", "diamond", "triangle", "hexagon", "pentagon"];
        let n = self.size();
        let directed = !self.adjacency.is_symmetric();
        let (kind, edge) = if directed { ("digraph", "->") } else { ("graph", "--") };
        let mut s = String::new();
        let _ = writeln!(s, "{kind} \"{}\" {{", self.name);
        for i in 0..n {
            let shape = match &self.grading {
                Some(g) => SHAPES[g[i].rem_euclid(SHAPES.len() as i64) as usize],
                None => "circle",
            };
            let _ = writeln!(s, "  n{i} [label=\"{}\", shape={shape}];", self.node_names[i]);
        }
        for i in 0..n {
            let start = if directed { 0 } else { i };
            for j in start..n {
                for _ in 0..self.adjacency[(i, j)] {
                    let _ = writeln!(s, "  n{i} {edge} n{j};");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

pub fn eigenvalues(m: &IntMatrix) -> Vec<Complex64> {
    let real: DMatrix<f64> = m.to_real();
    if m.is_symmetric() {
        real.symmetric_eigenvalues().iter().map(|&x| Complex64::new(x, 0.0)).collect()
    } else {
        real.complex_eigenvalues().iter().copied().collect()
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

pub fn permutation_order(p: &[usize]) -> usize {
    let mut order = 1;
    let mut seen = vec![false; p.len()];
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            v = p[v];
            len += 1;
        }
        order = num_integer::lcm(order, len);
    }
    order
}

fn undirected(name: String, n: usize, edges: &[(usize, usize)]) -> Graph {
    let mut a = IntMatrix::zeros(n, n);
    for &(i, j) in edges {
        a[(i, j)] += 1;
        if i != j {
            a[(j, i)] += 1;
        }
    }
    Graph::new(name, a).expect("square")
}

fn path_edges(n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|i| (i - 1, i)).collect()
}

/// Path on `n` nodes.
pub fn a_graph(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(Error::Unknown { kind: "graph", name: format!("A{n}") });
    }
    Ok(undirected(format!("A{n}"), n, &path_edges(n)))
}

/// Path `0..n-2` with nodes `n-2` and `n-1` both attached to `n-3`.
pub fn d_graph(n: usize) -> Result<Graph> {
    if n < 4 {
        return Err(Error::Unknown { kind: "graph", name: format!("D{n}") });
    }
    let mut edges = path_edges(n - 1);
    edges.push((n - 3, n - 1));
    Ok(undirected(format!("D{n}"), n, &edges))
}

/// Chain `0..n-1` with the last node attached to node 2.
pub fn e_graph(n: usize) -> Result<Graph> {
    if !(6..=8).contains(&n) {
        return Err(Error::Unknown { kind: "graph", name: format!("E{n}") });
    }
    let mut edges = path_edges(n - 1);
    edges.push((2, n - 1));
    Ok(undirected(format!("E{n}"), n, &edges))
}

/// Path on `l` nodes with a loop on the last one.
pub fn tadpole(l: usize) -> Result<Graph> {
    if l < 1 {
        return Err(Error::Unknown { kind: "graph", name: format!("T{l}") });
    }
    let mut edges = path_edges(l);
    edges.push((l - 1, l - 1));
    Ok(undirected(format!("T{l}"), l, &edges))
}

/// `A7`, `D5`, `E6`, `T2`, …
pub fn graph_catalog(name: &str) -> Result<Graph> {
    let unknown = || Error::Unknown { kind: "graph", name: name.to_string() };
    let mut chars = name.chars();
    let family = chars.next().ok_or_else(unknown)?;
    let size: usize = chars.as_str().parse().map_err(|_| unknown())?;
    match family {
        'A' => a_graph(size),
        'D' => d_graph(size),
        'E' => e_graph(size),
        'T' => tadpole(size),
        _ => Err(unknown()),
    }
}
