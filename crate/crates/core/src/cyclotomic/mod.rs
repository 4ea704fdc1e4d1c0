//! Exact arithmetic in the cyclotomic field Q(zeta_m).
//!
//! [`CycNumber`] keeps the canonical residue modulo the m-th cyclotomic
//! polynomial in the power basis `1, zeta, ..., zeta^{phi(m)-1}` with
//! arbitrary-precision rational coefficients, so two values are equal
//! exactly when their coefficient vectors are. [`ApproxNumber`] is the
//! double-precision image under `zeta_m -> exp(2 pi i / m)`.
//!
//! The sweep engine works in [`split`], an integer kernel that represents
//! the same field as Q(zeta_p) (x) Q(zeta_{q-1}); see that module.

pub mod split;

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::CycError;

/// Largest conductor accepted when decoding untrusted input.
pub const MAX_CONDUCTOR: u64 = 1 << 40;

pub fn euler_phi(m: u64) -> u64 {
    let mut result = m;
    let mut rest = m;
    let mut d = 2;
    while d * d <= rest {
        if rest.is_multiple_of(d) {
            while rest.is_multiple_of(d) {
                rest /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if rest > 1 {
        result -= result / rest;
    }
    result
}

fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m.is_multiple_of(d) {
            small.push(d);
            if d * d != m {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn phi_memo() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static MEMO: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The m-th cyclotomic polynomial, low degree first, memoized per `m`.
///
/// Computed as `x^m - 1` divided exactly by `Phi_d` for every proper
/// divisor `d` of `m`.
pub fn cyclotomic_polynomial(m: u64) -> Arc<Vec<i64>> {
    assert!(m >= 1, "conductor must be positive");
    if let Some(found) = phi_memo().lock().expect("memo poisoned").get(&m) {
        return Arc::clone(found);
    }
    let mut num: Vec<i128> = vec![0; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in divisors(m) {
        if d == m {
            continue;
        }
        let divisor = cyclotomic_polynomial(d);
        num = exact_monic_division(&num, &divisor);
    }
    let poly: Vec<i64> = num
        .into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient fits in i64"))
        .collect();
    let poly = Arc::new(poly);
    phi_memo()
        .lock()
        .expect("memo poisoned")
        .entry(m)
        .or_insert_with(|| Arc::clone(&poly));
    poly
}

fn exact_monic_division(num: &[i128], den: &[i64]) -> Vec<i128> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i128; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k + i] -= c * d as i128;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "division must be exact");
    quot
}

fn reduce_rational_poly(poly: &mut Vec<BigRational>, modulus: &[i64]) {
    let deg = modulus.len() - 1;
    while poly.len() > deg {
        let lead = poly.pop().expect("non-empty");
        if lead.is_zero() {
            continue;
        }
        let shift = poly.len() - deg;
        for (i, &c) in modulus[..deg].iter().enumerate() {
            if c != 0 {
                poly[shift + i] -= &lead * BigInt::from(c);
            }
        }
    }
    poly.resize(deg, BigRational::zero());
}

/// An element of Q(zeta_m) in canonical power-basis form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNumber {
    m: u64,
    coeffs: Vec<BigRational>,
}

/// Reduces a rational polynomial in `zeta_m` to its canonical residue.
pub fn reduce_mod_cyclotomic(poly: &[BigRational], m: u64) -> CycNumber {
    let modulus = cyclotomic_polynomial(m);
    let mut coeffs = poly.to_vec();
    reduce_rational_poly(&mut coeffs, &modulus);
    CycNumber { m, coeffs }
}

/// `zeta_m^a`, exponent taken modulo `m`.
pub fn zeta(m: u64, a: i64) -> CycNumber {
    let e = a.rem_euclid(m as i64) as usize;
    let mut poly = vec![BigRational::zero(); e + 1];
    poly[e] = BigRational::one();
    reduce_mod_cyclotomic(&poly, m)
}

impl CycNumber {
    pub fn zero(m: u64) -> Self {
        CycNumber { m, coeffs: vec![BigRational::zero(); euler_phi(m) as usize] }
    }

    pub fn one(m: u64) -> Self {
        Self::from_rational(m, BigRational::one())
    }

    pub fn from_integer(m: u64, v: i64) -> Self {
        Self::from_rational(m, BigRational::from_integer(v.into()))
    }

    pub fn from_rational(m: u64, v: BigRational) -> Self {
        let mut out = Self::zero(m);
        out.coeffs[0] = v;
        out
    }

    /// Builds a value from a full canonical coefficient vector.
    pub fn from_coeffs(m: u64, coeffs: Vec<BigRational>) -> Result<Self, CycError> {
        if m == 0 {
            return Err(CycError::ZeroConductor);
        }
        let expected = euler_phi(m) as usize;
        if coeffs.len() != expected {
            return Err(CycError::WrongLength { m, expected, got: coeffs.len() });
        }
        Ok(CycNumber { m, coeffs })
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value if this element lies in Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.m, other.m, "{}", CycError::ConductorMismatch(self.m, other.m));
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycNumber { m: self.m, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    /// The automorphism `zeta_m -> zeta_m^{-1}` (complex conjugation).
    pub fn conj(&self) -> Self {
        let m = self.m as usize;
        let mut poly = vec![BigRational::zero(); m];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[(m - k) % m] += c;
            }
        }
        reduce_mod_cyclotomic(&poly, self.m)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x]
    /// against `Phi_m`.
    pub fn inverse(&self) -> Result<Self, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        let modulus: Vec<BigRational> = cyclotomic_polynomial(self.m)
            .iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect();
        let mut r0 = modulus;
        let mut r1 = trimmed(self.coeffs.clone());
        let mut s0: Vec<BigRational> = Vec::new();
        let mut s1 = vec![BigRational::one()];
        while !r1.is_empty() {
            let (quot, rem) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&quot, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // Phi_m is irreducible, so the last non-zero remainder is a constant
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].clone();
        let scaled: Vec<BigRational> = s0.iter().map(|s| s / &c).collect();
        Ok(reduce_mod_cyclotomic(&scaled, self.m))
    }

    pub fn div(&self, other: &Self) -> Result<Self, CycError> {
        self.check(other);
        Ok(self * &other.inverse()?)
    }

    /// Evaluates at `zeta_m = exp(2 pi i / m)`.
    pub fn embed(&self) -> ApproxNumber {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = TAU * k as f64 / self.m as f64;
            acc += Complex64::from_polar(1.0, angle) * c.to_f64().unwrap_or(f64::NAN);
        }
        acc.into()
    }

    /// Moves this value into the larger cyclotomic field Q(zeta_{m k}).
    pub fn lift(&self, target: u64) -> Result<Self, CycError> {
        if !target.is_multiple_of(self.m) {
            return Err(CycError::ConductorMismatch(self.m, target));
        }
        let step = (target / self.m) as usize;
        let mut poly = vec![BigRational::zero(); self.coeffs.len().max(1) * step];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[k * step] = c.clone();
        }
        Ok(reduce_mod_cyclotomic(&poly, target))
    }
}

fn trimmed(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trimmed(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trimmed(out)
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    if rem.len() < b.len() {
        return (Vec::new(), trimmed(rem));
    }
    let lead = b.last().expect("non-zero divisor");
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + b.len() - 1] / lead;
        if !c.is_zero() {
            for (i, y) in b.iter().enumerate() {
                rem[k + i] -= &c * y;
            }
        }
        quot[k] = c;
    }
    rem.truncate(b.len() - 1);
    (trimmed(quot), trimmed(rem))
}

impl Add for &CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: &CycNumber) -> CycNumber {
        self.check(rhs);
        CycNumber {
            m: self.m,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: &CycNumber) -> CycNumber {
        self.check(rhs);
        CycNumber {
            m: self.m,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber { m: self.m, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: &CycNumber) -> CycNumber {
        self.check(rhs);
        let prod = poly_mul(&self.coeffs, &rhs.coeffs);
        if prod.is_empty() {
            return CycNumber::zero(self.m);
        }
        reduce_mod_cyclotomic(&prod, self.m)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for CycNumber {
            type Output = CycNumber;
            fn $f(self, rhs: CycNumber) -> CycNumber {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNumber(m={}, {})", self.m, self)
    }
}

/// Human-readable form, e.g. `-1/5 + 2/5*z^3` with `z = zeta_m`.
impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "z^{k}")?,
                _ => write!(f, "{mag}*z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Renders a rational as `"a/b"` (always with an explicit denominator).
pub fn rational_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"a/b"` or `"a"`; the denominator must be non-zero.
pub fn parse_rational(s: &str) -> Result<BigRational, CycError> {
    let bad = || CycError::BadRational(s.chars().take(64).collect());
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = den.trim().parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

#[derive(Serialize, Deserialize)]
struct CycNumberRepr {
    m: u64,
    coeffs: Vec<String>,
}

impl Serialize for CycNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycNumberRepr { m: self.m, coeffs: self.coeffs.iter().map(rational_to_string).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = CycNumberRepr::deserialize(d)?;
        if repr.m == 0 || repr.m > MAX_CONDUCTOR {
            return Err(D::Error::custom(format!("conductor {} out of range", repr.m)));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|c| parse_rational(c))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        CycNumber::from_coeffs(repr.m, coeffs).map_err(D::Error::custom)
    }
}

/// A double-precision complex value.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct ApproxNumber {
    pub re: f64,
    pub im: f64,
}

impl ApproxNumber {
    pub fn new(re: f64, im: f64) -> Self {
        ApproxNumber { re, im }
    }

    pub fn abs(self) -> f64 {
        Complex64::from(self).norm()
    }

    pub fn dist(self, other: Self) -> f64 {
        (Complex64::from(self) - Complex64::from(other)).norm()
    }
}

impl From<Complex64> for ApproxNumber {
    fn from(c: Complex64) -> Self {
        ApproxNumber { re: c.re, im: c.im }
    }
}

impl From<ApproxNumber> for Complex64 {
    fn from(a: ApproxNumber) -> Self {
        Complex64::new(a.re, a.im)
    }
}

impl fmt::Display for ApproxNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_sign_negative() { '-' } else { '+' };
        write!(f, "{:.12} {} {:.12}i", self.re, sign, self.im.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // first cyclotomic polynomial with a coefficient outside {-1, 0, 1}
        assert!(cyclotomic_polynomial(105).contains(&-2));
        for m in [20u64, 24, 78, 120, 156, 272, 812] {
            assert_eq!(cyclotomic_polynomial(m).len() as u64, euler_phi(m) + 1);
        }
    }

    #[test]
    fn zeta_basics() {
        assert_eq!(zeta(7, 0), CycNumber::one(7));
        let s = (1..5).fold(CycNumber::zero(5), |acc, a| &acc + &zeta(5, a));
        assert_eq!(s, CycNumber::from_integer(5, -1));
        assert_eq!(zeta(12, 6), CycNumber::from_integer(12, -1));
        assert_eq!(zeta(9, 9), CycNumber::one(9));
        let all = (0..12).fold(CycNumber::zero(12), |acc, a| &acc + &zeta(12, a));
        assert!(all.is_zero());
    }

    #[test]
    fn reduce_known_polynomials() {
        let m = 12;
        let mut xm1 = vec![BigRational::zero(); 13];
        xm1[0] = rat(-1, 1);
        xm1[12] = rat(1, 1);
        assert!(reduce_mod_cyclotomic(&xm1, m).is_zero());
        let phi: Vec<BigRational> =
            cyclotomic_polynomial(m).iter().map(|&c| rat(c, 1)).collect();
        assert!(reduce_mod_cyclotomic(&phi, m).is_zero());

        for m in [5u64, 12, 20, 24] {
            let d = euler_phi(m) as usize;
            let mut mono = vec![BigRational::zero(); d + 1];
            mono[d] = rat(1, 1);
            let v = reduce_mod_cyclotomic(&mono, m).embed();
            let angle = TAU * d as f64 / m as f64;
            assert!((v.re - angle.cos()).abs() < 1e-10);
            assert!((v.im - angle.sin()).abs() < 1e-10);
        }
    }

    #[test]
    fn division() {
        let z = zeta(8, 1);
        assert_eq!(z.div(&z).unwrap(), CycNumber::one(8));
        let x = &CycNumber::from_integer(20, 3) + &zeta(20, 7);
        let y = &zeta(20, 1) - &zeta(20, 13).scale(&rat(2, 5));
        let q = x.div(&y).unwrap();
        assert_eq!(&q * &y, x);
        assert_eq!(
            CycNumber::one(8).div(&CycNumber::zero(8)).unwrap_err(),
            CycError::DivisionByZero
        );
    }

    #[test]
    fn embed_values() {
        assert_eq!(CycNumber::one(9).embed(), ApproxNumber::new(1.0, 0.0));
        let i = zeta(4, 1).embed();
        assert!(i.re.abs() < 1e-15 && (i.im - 1.0).abs() < 1e-15);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let x = &zeta(12, 5) - &CycNumber::from_rational(12, rat(3, 7));
        let s = serde_json::to_string(&x).unwrap();
        assert!(s.contains("\"-3/7\""), "{s}");
        let back: CycNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<CycNumber>(r#"{"m":12,"coeffs":["1/1"]}"#).is_err());
        assert!(serde_json::from_str::<CycNumber>(r#"{"m":1,"coeffs":["1/0"]}"#).is_err());
        assert!(serde_json::from_str::<CycNumber>(r#"{"m":0,"coeffs":[]}"#).is_err());
        let int: CycNumber = serde_json::from_str(r#"{"m":2,"coeffs":["4"]}"#).unwrap();
        assert_eq!(int, CycNumber::from_integer(2, 4));
    }

    #[test]
    fn lift_preserves_value() {
        let x = &zeta(5, 2) + &CycNumber::from_integer(5, 3);
        let lifted = x.lift(20).unwrap();
        assert_eq!(lifted, &zeta(20, 8) + &CycNumber::from_integer(20, 3));
        assert!(x.lift(12).is_err());
    }

    fn small_poly() -> impl Strategy<Value = Vec<(i64, i64)>> {
        prop::collection::vec((-4i64..=4, 1i64..=3), 0..30)
    }

    fn to_rats(v: &[(i64, i64)]) -> Vec<BigRational> {
        v.iter().map(|&(a, b)| rat(a, b)).collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn reduction_is_a_ring_map(a in small_poly(), b in small_poly(), m in prop::sample::select(vec![5u64, 8, 12, 15, 20, 24])) {
            let (pa, pb) = (to_rats(&a), to_rats(&b));
            let lhs = &reduce_mod_cyclotomic(&pa, m) * &reduce_mod_cyclotomic(&pb, m);
            let rhs = reduce_mod_cyclotomic(&poly_mul(&trimmed(pa), &trimmed(pb)), m);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn conjugation_is_an_involutive_automorphism(a in small_poly(), b in small_poly(), m in prop::sample::select(vec![5u64, 12, 20, 24])) {
            let x = reduce_mod_cyclotomic(&to_rats(&a), m);
            let y = reduce_mod_cyclotomic(&to_rats(&b), m);
            prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
            prop_assert_eq!(x.conj().conj(), x);
        }

        #[test]
        fn embedding_is_multiplicative(a in small_poly(), b in small_poly(), c in small_poly(), m in prop::sample::select(vec![5u64, 12, 20, 24])) {
            let xs = [&a, &b, &c].map(|v| reduce_mod_cyclotomic(&to_rats(v), m));
            let prod = &(&xs[0] * &xs[1]) * &xs[2];
            let expected = xs.iter().fold(Complex64::new(1.0, 0.0), |acc, x| acc * Complex64::from(x.embed()));
            prop_assert!(prod.embed().dist(expected.into()) < 1e-10 * (1.0 + expected.norm()));
        }
    }
}
