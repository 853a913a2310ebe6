//! Exact conformal weights and statistics phases.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fusion::FusionRing;

/// Reduces a rational into `[0, 1)`.
pub fn frac(q: Rational64) -> Rational64 {
    q - q.floor()
}

pub fn is_integer(q: Rational64) -> bool {
    q.is_integer()
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: i64 = num.parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    let den: i64 = den.parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    if den == 0 {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rational64::new(num, den))
}

pub fn format_rational(q: Rational64) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Conformal weights modulo one, one per label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinAssignment {
    h: Vec<Rational64>,
}

impl SpinAssignment {
    /// Reduces every weight mod 1; no consistency checks against a ring.
    pub fn new(h: impl IntoIterator<Item = Rational64>) -> Self {
        SpinAssignment { h: h.into_iter().map(frac).collect() }
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn weights(&self) -> &[Rational64] {
        &self.h
    }

    pub fn weight(&self, label: usize) -> Rational64 {
        self.h[label]
    }

    /// `exp(2πi h)`.
    pub fn statistics_phase(&self, label: usize) -> Complex64 {
        phase(self.h[label])
    }

    /// Exact test `h_a ≡ h_b (mod 1)`.
    pub fn same_phase(&self, a: usize, b: usize) -> bool {
        self.h[a] == self.h[b]
    }

    /// Checks `h₀ = 0` and that conjugate labels carry equal weights.
    pub fn validate(&self, ring: &FusionRing) -> Result<()> {
        if self.h.len() != ring.rank() {
            return Err(Error::Shape(format!("{} weights for {} labels", self.h.len(), ring.rank())));
        }
        if !self.h[0].is_zero() {
            return Err(Error::InvalidSpins(format!("vacuum weight is {}", self.h[0])));
        }
        for l in 0..ring.rank() {
            let c = ring.conj(l);
            if self.h[l] != self.h[c] {
                return Err(Error::InvalidSpins(format!(
                    "label {} and its conjugate {} have weights {} and {}",
                    ring.name(l),
                    ring.name(c),
                    self.h[l],
                    self.h[c]
                )));
            }
        }
        Ok(())
    }
}

pub fn phase(h: Rational64) -> Complex64 {
    let h = frac(h);
    // exact values at quarter turns keep rational S matrices exact
    match (*h.numer(), *h.denom()) {
        (0, _) => Complex64::new(1.0, 0.0),
        (1, 4) => Complex64::new(0.0, 1.0),
        (1, 2) => Complex64::new(-1.0, 0.0),
        (3, 4) => Complex64::new(0.0, -1.0),
        (n, d) => Complex64::from_polar(1.0, 2.0 * PI * n as f64 / d as f64),
    }
}

/// Order of `exp(2πi h)` as a root of unity.
pub fn phase_order(h: Rational64) -> i64 {
    let f = frac(h);
    if f.is_zero() {
        1
    } else {
        *f.denom()
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}
