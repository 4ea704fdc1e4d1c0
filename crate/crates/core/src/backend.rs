//! Value backends for character-sum evaluation.
//!
//! Every quantity in this crate is a rational combination of roots of unity
//! `zeta_p^a zeta_{q-1}^b`. Sums are first tallied into a [`RootCounts`]
//! (pure integer bookkeeping, backend independent) and then handed to a
//! [`Backend`], which either canonicalizes them exactly ([`ExactBackend`])
//! or evaluates them in double precision ([`FloatBackend`]).

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::split::{SplitCyc, SplitRing};
use crate::cyclotomic::{ApproxNumber, CycNumber};
use crate::field::FiniteField;

/// Tally of `sum c_{a,b} zeta_p^a zeta_n^b`, divided by `den`.
#[derive(Clone, Debug)]
pub struct RootCounts {
    p: u32,
    n: u32,
    counts: Vec<i64>,
    den: i64,
}

impl RootCounts {
    pub fn new(field: &FiniteField, den: i64) -> Self {
        let (p, n) = (field.characteristic(), field.unit_order());
        RootCounts { p, n, counts: vec![0; (p * n) as usize], den }
    }

    /// Adds `coeff * zeta_p^a zeta_n^b`.
    #[inline]
    pub fn add(&mut self, a: u32, b: u32, coeff: i64) {
        self.counts[((a % self.p) * self.n + b % self.n) as usize] += coeff;
    }

    /// Adds `coeff * zeta_n^b`.
    #[inline]
    pub fn add_root(&mut self, b: u32, coeff: i64) {
        self.counts[(b % self.n) as usize] += coeff;
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Exact,
    Float,
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BackendKind::Exact => "exact",
            BackendKind::Float => "float",
        })
    }
}

impl FromStr for BackendKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(BackendKind::Exact),
            "float" => Ok(BackendKind::Float),
            other => Err(format!("unknown backend {other:?} (expected exact or float)")),
        }
    }
}

/// Outcome of comparing two sides of an identity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Comparison {
    pub equal: bool,
    /// `|lhs - rhs|` in the complex embedding.
    pub deviation: f64,
}

pub trait Backend: Send + Sync {
    type Value: Clone + fmt::Debug + Send + Sync;

    fn kind(&self) -> BackendKind;
    fn eval_counts(&self, counts: &RootCounts) -> Self::Value;
    fn zero(&self) -> Self::Value;
    fn rational(&self, num: i64, den: i64) -> Self::Value;
    fn add(&self, x: &Self::Value, y: &Self::Value) -> Self::Value;
    fn sub(&self, x: &Self::Value, y: &Self::Value) -> Self::Value;
    fn mul(&self, x: &Self::Value, y: &Self::Value) -> Self::Value;
    fn scale(&self, x: &Self::Value, num: i64, den: i64) -> Self::Value;
    /// Multiplies by `zeta_{q-1}^b`.
    fn mul_root(&self, x: &Self::Value, b: u32) -> Self::Value;
    /// Inverse of a nonzero Gauss sum `G(A)`, given `G(A-bar)` and
    /// `A(-1)`. The exact backend uses `G(A)^{-1} = A(-1) G(A-bar) / q`; the
    /// float backend divides directly.
    fn invert_gauss(&self, g: &Self::Value, g_conj: &Self::Value, sign: i64, q: u32)
        -> Self::Value;
    fn compare(&self, lhs: &Self::Value, rhs: &Self::Value) -> Comparison;
    fn approx(&self, x: &Self::Value) -> ApproxNumber;
    /// JSON rendering used in failure witnesses.
    fn to_json(&self, x: &Self::Value) -> serde_json::Value;
}

/// Exact canonical arithmetic via [`SplitRing`].
#[derive(Clone, Debug)]
pub struct ExactBackend {
    ring: SplitRing,
}

impl ExactBackend {
    pub fn new(field: &FiniteField) -> Self {
        ExactBackend { ring: SplitRing::new(field.characteristic(), field.unit_order()) }
    }

    pub fn ring(&self) -> &SplitRing {
        &self.ring
    }

    pub fn to_cyc(&self, x: &SplitCyc) -> CycNumber {
        self.ring.to_cyc_number(x)
    }
}

impl Backend for ExactBackend {
    type Value = SplitCyc;

    fn kind(&self) -> BackendKind {
        BackendKind::Exact
    }

    fn eval_counts(&self, counts: &RootCounts) -> SplitCyc {
        self.ring.eval_counts(&counts.counts, counts.den)
    }

    fn zero(&self) -> SplitCyc {
        self.ring.zero()
    }

    fn rational(&self, num: i64, den: i64) -> SplitCyc {
        self.ring.rational(num as i128, den as i128)
    }

    fn add(&self, x: &SplitCyc, y: &SplitCyc) -> SplitCyc {
        self.ring.add(x, y)
    }

    fn sub(&self, x: &SplitCyc, y: &SplitCyc) -> SplitCyc {
        self.ring.sub(x, y)
    }

    fn mul(&self, x: &SplitCyc, y: &SplitCyc) -> SplitCyc {
        self.ring.mul(x, y)
    }

    fn scale(&self, x: &SplitCyc, num: i64, den: i64) -> SplitCyc {
        self.ring.scale(x, num as i128, den as i128)
    }

    fn mul_root(&self, x: &SplitCyc, b: u32) -> SplitCyc {
        self.ring.mul_root(x, b)
    }

    fn invert_gauss(&self, _g: &SplitCyc, g_conj: &SplitCyc, sign: i64, q: u32) -> SplitCyc {
        self.ring.scale(g_conj, sign as i128, q as i128)
    }

    fn compare(&self, lhs: &SplitCyc, rhs: &SplitCyc) -> Comparison {
        if lhs == rhs {
            Comparison { equal: true, deviation: 0.0 }
        } else {
            let diff = self.ring.sub(lhs, rhs);
            Comparison { equal: false, deviation: self.approx(&diff).abs() }
        }
    }

    fn approx(&self, x: &SplitCyc) -> ApproxNumber {
        self.to_cyc(x).embed()
    }

    fn to_json(&self, x: &SplitCyc) -> serde_json::Value {
        serde_json::to_value(self.to_cyc(x)).expect("CycNumber serializes")
    }
}

/// Double-precision evaluation at `zeta_m = exp(2 pi i / m)`.
#[derive(Clone, Debug)]
pub struct FloatBackend {
    p: u32,
    n: u32,
    tolerance: f64,
    roots: Vec<Complex64>,
}

impl FloatBackend {
    /// Absolute tolerance for identity checks, `1e-6 q`.
    pub fn tolerance_for(field: &FiniteField) -> f64 {
        1e-6 * field.order() as f64
    }

    pub fn new(field: &FiniteField) -> Self {
        let (p, n) = (field.characteristic(), field.unit_order());
        let m = (p * n) as usize;
        let roots = (0..m).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / m as f64)).collect();
        FloatBackend { p, n, tolerance: Self::tolerance_for(field), roots }
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }
}

impl Backend for FloatBackend {
    type Value = Complex64;

    fn kind(&self) -> BackendKind {
        BackendKind::Float
    }

    fn eval_counts(&self, counts: &RootCounts) -> Complex64 {
        let (p, n) = (self.p as usize, self.n as usize);
        let m = p * n;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &c) in counts.counts.iter().enumerate() {
            if c != 0 {
                let (a, b) = (i / n, i % n);
                acc += self.roots[(a * n + b * p) % m] * c as f64;
            }
        }
        acc / counts.den as f64
    }

    fn zero(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    fn rational(&self, num: i64, den: i64) -> Complex64 {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn add(&self, x: &Complex64, y: &Complex64) -> Complex64 {
        x + y
    }

    fn sub(&self, x: &Complex64, y: &Complex64) -> Complex64 {
        x - y
    }

    fn mul(&self, x: &Complex64, y: &Complex64) -> Complex64 {
        x * y
    }

    fn scale(&self, x: &Complex64, num: i64, den: i64) -> Complex64 {
        x * (num as f64 / den as f64)
    }

    fn mul_root(&self, x: &Complex64, b: u32) -> Complex64 {
        let m = self.roots.len();
        x * self.roots[(b as usize % self.n as usize) * self.p as usize % m]
    }

    fn invert_gauss(&self, g: &Complex64, _g_conj: &Complex64, _sign: i64, _q: u32) -> Complex64 {
        g.inv()
    }

    fn compare(&self, lhs: &Complex64, rhs: &Complex64) -> Comparison {
        let deviation = (lhs - rhs).norm();
        Comparison { equal: deviation < self.tolerance, deviation }
    }

    fn approx(&self, x: &Complex64) -> ApproxNumber {
        (*x).into()
    }

    fn to_json(&self, x: &Complex64) -> serde_json::Value {
        serde_json::to_value(ApproxNumber::from(*x)).expect("ApproxNumber serializes")
    }
}
