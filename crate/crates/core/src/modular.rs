//! Modular data from a braided fusion ring: `Ω`, `Y`, the Gauss sum `z`,
//! the central charge and the normalised `S`, `T` matrices.
//!
//! `Y_{λ,μ} = Σ_ρ (ω_λ ω_μ / ω_ρ) N_{λ,μ}^ρ d_ρ`, `z = Σ_λ d_λ² ω_λ`,
//! `c = 4 arg z / π (mod 8)`, `S = Y/|z|`, `T = e^{−iπc/12} Ω`.
//! When `z` vanishes the central charge is undefined; the data is still
//! built (it is needed for degeneracy analysis) but `S` and `T` are absent.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::fusion::{FusionRing, QuantumDimensions};
use crate::matrix::{complex_identity, frobenius, CMatrix, IntMatrix};
use crate::spin::SpinAssignment;

pub const GAUSS_SUM_EPS: f64 = 1e-12;
pub const INDEX_TOLERANCE: f64 = 1e-6;
pub const UNITARITY_TOLERANCE: f64 = 1e-9;
pub const CONJUGATION_TOLERANCE: f64 = 1e-9;
pub const VERLINDE_TOLERANCE: f64 = 1e-8;
pub const DEGENERACY_TOLERANCE: f64 = 1e-6;

/// A fusion ring together with its conformal weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub name: String,
    pub ring: FusionRing,
    pub spins: SpinAssignment,
}

impl ModelSpec {
    pub fn new(name: impl Into<String>, ring: FusionRing, spins: SpinAssignment) -> Result<Self> {
        spins.validate(&ring)?;
        Ok(ModelSpec { name: name.into(), ring, spins })
    }

    pub fn rank(&self) -> usize {
        self.ring.rank()
    }

    /// Tensor product of two models (weights add).
    pub fn tensor(&self, other: &ModelSpec) -> Result<ModelSpec> {
        let ring = self.ring.tensor_product(&other.ring)?;
        let m2 = other.rank();
        let h = (0..ring.rank()).map(|i| self.spins.weight(i / m2) + other.spins.weight(i % m2));
        ModelSpec::new(format!("{}⊗{}", self.name, other.name), ring, SpinAssignment::new(h))
    }

    pub fn build(&self) -> Result<ModularData> {
        ModularData::build(self)
    }
}

/// `S`, `T` and the central charge; only defined when `z ≠ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    pub central_charge: f64,
    pub s: CMatrix,
    pub t: CMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModularData {
    pub dims: QuantumDimensions,
    pub weights: Vec<Rational64>,
    pub omega: Vec<Complex64>,
    pub y: CMatrix,
    pub z: Complex64,
    pub normalized: Option<Normalized>,
    /// Charge conjugation permutation (`C[λ] = λ̄`).
    pub conjugation: Vec<usize>,
    pub nondegenerate: bool,
    pub residuals: NondegeneracyResiduals,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NondegeneracyResiduals {
    /// `| |z|² − w |`.
    pub index_gap: f64,
    /// `‖S S† − I‖_F`, infinite when `S` is undefined.
    pub unitarity: f64,
}

impl ModularData {
    pub fn build(spec: &ModelSpec) -> Result<Self> {
        let ring = &spec.ring;
        spec.spins.validate(ring)?;
        let dims = ring.quantum_dimensions()?;
        let m = ring.rank();
        let omega: Vec<Complex64> = (0..m).map(|l| spec.spins.statistics_phase(l)).collect();
        let d = &dims.d;
        let y = CMatrix::from_fn(m, m, |l, mu| {
            (0..m)
                .filter(|&r| ring.n(l, mu, r) != 0)
                .map(|r| omega[l] * omega[mu] / omega[r] * (ring.n(l, mu, r) as f64 * d[r]))
                .sum()
        });
        let z: Complex64 = (0..m).map(|l| omega[l] * d[l] * d[l]).sum();
        let normalized = (z.norm() > GAUSS_SUM_EPS).then(|| {
            let mut c = 4.0 * z.arg() / PI;
            if c < 0.0 {
                c += 8.0;
            }
            if c >= 8.0 - 1e-12 {
                c -= 8.0;
            }
            let s = y.map(|v| v / z.norm());
            let prefactor = Complex64::from_polar(1.0, -PI * c / 12.0);
            let t = CMatrix::from_fn(m, m, |i, j| if i == j { prefactor * omega[i] } else { Complex64::new(0.0, 0.0) });
            Normalized { central_charge: c, s, t }
        });
        let w = dims.global_index;
        let index_gap = (z.norm_sqr() - w).abs();
        let unitarity = normalized
            .as_ref()
            .map_or(f64::INFINITY, |n| frobenius(&(&n.s * n.s.adjoint() - complex_identity(m))));
        let mut nondegenerate = index_gap < INDEX_TOLERANCE * w && unitarity < UNITARITY_TOLERANCE * m as f64;
        let mut conjugation = ring.conjugation().to_vec();
        if nondegenerate {
            let s = &normalized.as_ref().expect("nondegenerate implies z ≠ 0").s;
            match conjugation_from_s2(&(s * s)) {
                Some(c) => conjugation = c,
                None => nondegenerate = false,
            }
        }
        Ok(ModularData {
            dims,
            weights: spec.spins.weights().to_vec(),
            omega,
            y,
            z,
            normalized,
            conjugation,
            nondegenerate,
            residuals: NondegeneracyResiduals { index_gap, unitarity },
        })
    }

    pub fn rank(&self) -> usize {
        self.omega.len()
    }

    pub fn d(&self) -> &[f64] {
        &self.dims.d
    }

    pub fn global_index(&self) -> f64 {
        self.dims.global_index
    }

    pub fn s(&self) -> Result<&CMatrix> {
        self.normalized.as_ref().map(|n| &n.s).ok_or(Error::VanishingGaussSum)
    }

    pub fn t(&self) -> Result<&CMatrix> {
        self.normalized.as_ref().map(|n| &n.t).ok_or(Error::VanishingGaussSum)
    }

    pub fn central_charge(&self) -> Result<f64> {
        self.normalized.as_ref().map(|n| n.central_charge).ok_or(Error::VanishingGaussSum)
    }

    pub fn omega_matrix(&self) -> CMatrix {
        let m = self.rank();
        CMatrix::from_fn(m, m, |i, j| if i == j { self.omega[i] } else { Complex64::new(0.0, 0.0) })
    }

    pub fn conjugation_matrix(&self) -> IntMatrix {
        IntMatrix::permutation(&self.conjugation)
    }

    /// The matrix invariants must commute with: `S` when non-degenerate,
    /// otherwise `Y`.
    pub fn commutation_matrix(&self) -> &CMatrix {
        match (&self.normalized, self.nondegenerate) {
            (Some(n), true) => &n.s,
            _ => &self.y,
        }
    }

    pub fn is_nondegenerate(&self) -> (bool, NondegeneracyResiduals) {
        (self.nondegenerate, self.residuals)
    }

    /// Max over `(λ, μ, ν)` of `|Σ_ρ S_{λρ} S_{μρ} S*_{νρ} / S_{0ρ} − N_{λμ}^ν|`.
    pub fn verlinde_check(&self, ring: &FusionRing) -> Result<f64> {
        if !self.nondegenerate {
            return Err(Error::Degenerate);
        }
        let s = self.s()?;
        let m = self.rank();
        if ring.rank() != m {
            return Err(Error::Shape("ring and modular data disagree on rank".into()));
        }
        let mut worst: f64 = 0.0;
        for l in 0..m {
            let ratio: Vec<Complex64> = (0..m).map(|r| s[(l, r)] / s[(0, r)]).collect();
            for mu in 0..m {
                for nu in 0..m {
                    let v: Complex64 = (0..m).map(|r| ratio[r] * s[(mu, r)] * s[(nu, r)].conj()).sum();
                    worst = worst.max((v - ring.n(l, mu, nu) as f64).norm());
                }
            }
        }
        Ok(worst)
    }

    /// Labels whose `Y` row equals `d_λ d_μ` for every `μ`.
    pub fn degenerate_sectors(&self) -> Vec<usize> {
        let m = self.rank();
        let d = self.d();
        (0..m)
            .filter(|&l| (0..m).all(|mu| (self.y[(l, mu)] - d[l] * d[mu]).norm() < DEGENERACY_TOLERANCE))
            .collect()
    }

    /// Residuals of the standard identities, for the property suite.
    pub fn identity_residuals(&self) -> Result<ModularResiduals> {
        let m = self.rank();
        let om = self.omega_matrix();
        let oyoyo = frobenius(&(&om * &self.y * &om * &self.y * &om - self.y.map(|v| v * self.z)));
        let s = self.s()?;
        let t = self.t()?;
        let st = s * t;
        let s2 = s * s;
        let c = self.conjugation_matrix().to_complex();
        let tstst = frobenius(&(t * s * t * s * t - s));
        Ok(ModularResiduals {
            unitarity: frobenius(&(s * s.adjoint() - complex_identity(m))),
            st_cubed: frobenius(&(&st * &st * &st - &s2)),
            s_squared: frobenius(&(&s2 - &c)),
            ct_commutator: frobenius(&(&c * t - t * &c)),
            omega_y: oyoyo,
            tstst,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModularResiduals {
    pub unitarity: f64,
    pub st_cubed: f64,
    pub s_squared: f64,
    pub ct_commutator: f64,
    pub omega_y: f64,
    pub tstst: f64,
}

fn conjugation_from_s2(s2: &CMatrix) -> Option<Vec<usize>> {
    let m = s2.nrows();
    let mut perm = Vec::with_capacity(m);
    for i in 0..m {
        let j = (0..m).max_by(|&a, &b| s2[(i, a)].norm().total_cmp(&s2[(i, b)].norm()))?;
        let ok = (s2[(i, j)] - 1.0).norm() < CONJUGATION_TOLERANCE
            && (0..m).all(|k| k == j || s2[(i, k)].norm() < CONJUGATION_TOLERANCE);
        if !ok {
            return None;
        }
        perm.push(j);
    }
    Some(perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn z2_spec(h: Rational64) -> ModelSpec {
        ModelSpec::new("z2", FusionRing::cyclic(2).unwrap(), SpinAssignment::new([Rational64::from(0), h])).unwrap()
    }

    #[test]
    fn z2_semion_is_nondegenerate() {
        let md = z2_spec(Rational64::new(1, 4)).build().unwrap();
        let expect = [[1.0, 1.0], [1.0, -1.0]];
        for (i, row) in expect.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                assert!((md.y[(i, j)] - e).norm() < 1e-12);
            }
        }
        assert!((md.z.norm_sqr() - 2.0).abs() < 1e-12);
        assert!(md.nondegenerate);
        assert_eq!(md.degenerate_sectors(), vec![0]);
    }

    #[test]
    fn z2_fermion_is_degenerate() {
        let md = z2_spec(Rational64::new(1, 2)).build().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((md.y[(i, j)] - 1.0).norm() < 1e-12);
            }
        }
        assert!(md.z.norm() < 1e-12);
        assert!(!md.nondegenerate);
        assert!(matches!(md.s(), Err(Error::VanishingGaussSum)));
        assert!(matches!(md.verlinde_check(&FusionRing::cyclic(2).unwrap()), Err(Error::Degenerate)));
        assert_eq!(md.degenerate_sectors(), vec![0, 1]);
    }

    #[test]
    fn degenerate_part_of_a_product_is_the_first_factor() {
        let spec = z2_spec(Rational64::new(1, 2)).tensor(&z2_spec(Rational64::new(1, 4))).unwrap();
        let md = spec.build().unwrap();
        // labels (a,b) ↦ 2a + b; degenerate sectors are (0,0) and (1,0)
        assert_eq!(md.degenerate_sectors(), vec![0, 2]);
        assert!(!md.nondegenerate);
    }

    #[test]
    fn su2_level6_eigenvalue_data() {
        let spec = catalog::su2_model(6).unwrap();
        let md = spec.build().unwrap();
        assert!(md.nondegenerate);
        let s = md.s().unwrap();
        for rho in 0..7 {
            let ratio = s[(1, rho)] / s[(0, rho)];
            let expected = 2.0 * ((rho as f64 + 1.0) * PI / 8.0).cos();
            assert!((ratio.re - expected).abs() < 1e-12 && ratio.im.abs() < 1e-12);
        }
        assert!(md.verlinde_check(&spec.ring).unwrap() < VERLINDE_TOLERANCE);
    }

    #[test]
    fn verlinde_on_z5() {
        let spec = catalog::zn_model(5, 2).unwrap();
        let md = spec.build().unwrap();
        assert!(md.verlinde_check(&spec.ring).unwrap() < VERLINDE_TOLERANCE);
        let s = md.s().unwrap();
        // S_{j,j'} is 5^{-1/2} times a fifth root of unity; the phase
        // convention is fixed by the Y formula.
        for j in 0..5 {
            for jp in 0..5 {
                assert!((s[(j, jp)].norm() - 5f64.sqrt().recip()).abs() < 1e-12);
                let expected = Complex64::from_polar(5f64.sqrt().recip(), -2.0 * PI * (2 * j * jp) as f64 / 5.0);
                assert!((s[(j, jp)] - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn vacuum_verlinde_term_is_unit_row_norm() {
        let md = catalog::su2_model(6).unwrap().build().unwrap();
        let s = md.s().unwrap();
        let v: f64 = (0..7).map(|r| s[(0, r)].norm_sqr()).sum();
        assert!((v - 1.0).abs() < 1e-12);
    }
}
