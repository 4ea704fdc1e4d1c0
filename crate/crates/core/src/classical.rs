//! Terminating classical `2F1` series over the rationals and the polynomial
//! identity
//!
//! ```text
//! (z-1)^{4n+2} 2F1(-n-1/4, -2n-1; -n+1/4 | -((z+1)/(z-1))^2)
//!     = -2z Gamma(2n+3) Gamma(3/4) / (Gamma(n+2) Gamma(n+3/4)) 2F1(-n-1/4, -n; 5/4 | z^4)
//! ```
//!
//! Both sides are expanded into dense rational polynomials and compared
//! coefficient by coefficient; every Gamma quotient reduces to Pochhammer
//! products, so no floating point is involved.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::backend::BackendKind;
use crate::cyclotomic::rational_to_string;
use crate::error::PochhammerError;
use crate::verify::{IdentityReport, SkipCount, Witness};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Dense polynomial with rational coefficients, lowest degree first and no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c, 1)).collect())
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `c z^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `z^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, z: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * z + c)
    }
}

impl Add for &RationalPoly {
    type Output = RationalPoly;

    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;

    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        self + &-rhs
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;

    fn neg(self) -> RationalPoly {
        RationalPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;

    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPoly::new(out)
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}*z")?,
                _ => write!(f, "{a}*z^{k}")?,
            }
        }
        Ok(())
    }
}

/// Rising factorial `(a)_k`.
pub fn pochhammer(a: &BigRational, k: usize) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, i| acc * (a + BigRational::from_integer(BigInt::from(i))))
}

fn non_positive_integer(r: &BigRational) -> Option<usize> {
    (r.is_integer() && !r.is_positive()).then(|| (-r.to_integer()).to_usize()).flatten()
}

/// `2F1(a, b; c | .)` with a non-positive integer upper parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TerminatingHypSeries {
    a: BigRational,
    b: BigRational,
    c: BigRational,
    length: usize,
}

impl TerminatingHypSeries {
    pub fn new(a: BigRational, b: BigRational, c: BigRational) -> Result<Self, PochhammerError> {
        let length = [&a, &b]
            .into_iter()
            .filter_map(non_positive_integer)
            .min()
            .ok_or(PochhammerError::NonTerminating)?;
        if let Some(m) = non_positive_integer(&c) {
            if m < length {
                return Err(PochhammerError::LowerParameterPole(c.to_string()));
            }
        }
        Ok(TerminatingHypSeries { a, b, c, length })
    }

    /// Index of the last possibly nonzero term.
    pub fn length(&self) -> usize {
        self.length
    }

    /// `(a)_k (b)_k / ((c)_k k!)` for `k = 0..=length`.
    pub fn coefficients(&self) -> Vec<BigRational> {
        let mut out = Vec::with_capacity(self.length + 1);
        let mut term = BigRational::one();
        out.push(term.clone());
        for k in 0..self.length {
            let kk = BigRational::from_integer(BigInt::from(k));
            term = term * (&self.a + &kk) * (&self.b + &kk)
                / ((&self.c + &kk) * BigRational::from_integer(BigInt::from(k + 1)));
            out.push(term.clone());
        }
        out
    }
}

/// `den^power * 2F1(series | num / den)`, i.e. `sum_k coef_k num^k den^(power - k)`.
pub fn terminating_2f1_cleared(
    series: &TerminatingHypSeries,
    num: &RationalPoly,
    den: &RationalPoly,
    power: usize,
) -> Result<RationalPoly, PochhammerError> {
    if power < series.length() {
        return Err(PochhammerError::ClearingPowerTooSmall { power, length: series.length() });
    }
    let mut acc = RationalPoly::zero();
    for (k, coef) in series.coefficients().iter().enumerate() {
        if coef.is_zero() {
            continue;
        }
        let term = &num.pow(k) * &den.pow(power - k);
        acc = &acc + &term.scale(coef);
    }
    Ok(acc)
}

/// `2F1(series | argument)` for a polynomial argument.
pub fn terminating_2f1_poly(
    series: &TerminatingHypSeries,
    argument: &RationalPoly,
) -> Result<RationalPoly, PochhammerError> {
    terminating_2f1_cleared(series, argument, &RationalPoly::one(), series.length())
}

/// `Gamma(2n+3) Gamma(3/4) / (Gamma(n+2) Gamma(n+3/4))`
/// `= (n+2)(n+3)...(2n+2) / (3/4)_n`.
pub fn gamma_ratio(n: i64) -> Result<BigRational, PochhammerError> {
    let n = usize::try_from(n).map_err(|_| PochhammerError::NegativeOrder)?;
    let top = (n + 2..=2 * n + 2).fold(BigRational::one(), |acc, k| acc * rat(k as i64, 1));
    Ok(top / pochhammer(&rat(3, 4), n))
}

/// Left and right sides of the identity for one `n`.
pub fn stanton_sides(n: u32) -> Result<(RationalPoly, RationalPoly), PochhammerError> {
    let n = n as i64;
    let upper = rat(-4 * n - 1, 4);
    let lhs_series = TerminatingHypSeries::new(upper.clone(), rat(-2 * n - 1, 1), rat(-4 * n + 1, 4))?;
    let z_plus_1 = RationalPoly::from_ints(&[1, 1]);
    let z_minus_1 = RationalPoly::from_ints(&[-1, 1]);
    let num = -&z_plus_1.pow(2);
    let den = z_minus_1.pow(2);
    let lhs = terminating_2f1_cleared(&lhs_series, &num, &den, (2 * n + 1) as usize)?;

    let rhs_series = TerminatingHypSeries::new(upper, rat(-n, 1), rat(5, 4))?;
    let z4 = RationalPoly::monomial(BigRational::one(), 4);
    let series = terminating_2f1_poly(&rhs_series, &z4)?;
    let factor = RationalPoly::monomial(rat(-2, 1) * gamma_ratio(n)?, 1);
    Ok((lhs, &factor * &series))
}

/// Checks the identity for `n = 0..=n_max`; each `n` is one tested case.
pub fn verify_stanton(n_max: u32) -> IdentityReport {
    let mut report = IdentityReport {
        identity: "stanton".into(),
        field: "Q".into(),
        backend: BackendKind::Exact,
        tested: 0,
        passed: 0,
        skipped: Vec::<SkipCount>::new(),
        failed: 0,
        witnesses: Vec::new(),
        millis: 0,
        applicable: true,
        max_deviation: 0.0,
        observations: Vec::new(),
        entries: Vec::new(),
    };
    for n in 0..=n_max {
        let (lhs, rhs) = stanton_sides(n).expect("parameters are admissible for n >= 0");
        let expected = 4 * n as usize + 1;
        let len = lhs.coeffs().len().max(rhs.coeffs().len());
        let mismatches: Vec<usize> = (0..len).filter(|&k| lhs.coeff(k) != rhs.coeff(k)).collect();
        let degrees_ok = lhs.degree() == Some(expected) && rhs.degree() == Some(expected);
        let ok = mismatches.is_empty() && degrees_ok;
        report.tested += 1;
        if ok {
            report.passed += 1;
        } else {
            report.failed += 1;
        }
        for &k in &mismatches {
            if report.witnesses.len() >= crate::verify::WITNESS_CAP {
                break;
            }
            let (l, r) = (lhs.coeff(k), rhs.coeff(k));
            report.witnesses.push(Witness {
                tuple: [("n".to_string(), n as u64), ("k".to_string(), k as u64)].into_iter().collect(),
                lhs: rational_to_string(&l).into(),
                rhs: rational_to_string(&r).into(),
                difference: rational_to_string(&(&l - &r)).into(),
                deviation: (&l - &r).abs().to_f64().unwrap_or(f64::INFINITY),
            });
        }
        report.entries.push(serde_json::json!({
            "n": n,
            "degree_lhs": lhs.degree(),
            "degree_rhs": rhs.degree(),
            "identical": mismatches.is_empty(),
            "mismatched_coefficients": mismatches.len(),
        }));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    // Lanczos approximation (g = 7, n = 9), good to ~1e-15 for positive reals
    fn gamma(x: f64) -> f64 {
        const G: f64 = 7.0;
        const C: [f64; 9] = [
            0.999_999_999_999_809_9,
            676.520_368_121_885_1,
            -1_259.139_216_722_402_8,
            771.323_428_777_653_1,
            -176.615_029_162_140_6,
            12.507_343_278_686_905,
            -0.138_571_095_265_720_12,
            9.984_369_578_019_572e-6,
            1.505_632_735_149_311_6e-7,
        ];
        if x < 0.5 {
            return std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x));
        }
        let x = x - 1.0;
        let t = x + G + 0.5;
        let s = C[1..].iter().enumerate().fold(C[0], |acc, (i, c)| acc + c / (x + i as f64 + 1.0));
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * s
    }

    #[test]
    fn gamma_ratio_values() {
        assert_eq!(gamma_ratio(0).unwrap(), rat(2, 1));
        assert_eq!(gamma_ratio(1).unwrap(), rat(16, 1));
        assert_eq!(gamma_ratio(-1), Err(PochhammerError::NegativeOrder));
        for n in 0..=10i64 {
            let nf = n as f64;
            let float = gamma(2.0 * nf + 3.0) * gamma(0.75) / (gamma(nf + 2.0) * gamma(nf + 0.75));
            let exact = gamma_ratio(n).unwrap().to_f64().unwrap();
            assert!(((exact - float) / float).abs() < 1e-9, "n = {n}: {exact} vs {float}");
        }
    }

    #[test]
    fn series_validation() {
        assert_eq!(
            TerminatingHypSeries::new(rat(1, 2), rat(1, 3), rat(1, 1)),
            Err(PochhammerError::NonTerminating)
        );
        assert!(matches!(
            TerminatingHypSeries::new(rat(-3, 1), rat(1, 2), rat(-1, 1)),
            Err(PochhammerError::LowerParameterPole(_))
        ));
        // lower pole beyond the last term is harmless
        assert!(TerminatingHypSeries::new(rat(-2, 1), rat(1, 2), rat(-2, 1)).is_ok());
        let s = TerminatingHypSeries::new(rat(-1, 4), rat(0, 1), rat(5, 4)).unwrap();
        assert_eq!(s.length(), 0);
        let x = RationalPoly::from_ints(&[0, 1]);
        assert_eq!(terminating_2f1_poly(&s, &x).unwrap(), RationalPoly::one());
        let s = TerminatingHypSeries::new(rat(-3, 1), rat(1, 1), rat(1, 1)).unwrap();
        assert_eq!(
            terminating_2f1_cleared(&s, &x, &RationalPoly::one(), 2),
            Err(PochhammerError::ClearingPowerTooSmall { power: 2, length: 3 })
        );
    }

    #[test]
    fn binomial_series() {
        // 2F1(-m, b; b | x) = (1 - x)^m
        for m in 0..6i64 {
            let s = TerminatingHypSeries::new(rat(-m, 1), rat(3, 7), rat(3, 7)).unwrap();
            let x = RationalPoly::from_ints(&[0, 1]);
            let expected = RationalPoly::from_ints(&[1, -1]).pow(m as usize);
            assert_eq!(terminating_2f1_poly(&s, &x).unwrap(), expected);
        }
    }

    #[test]
    fn n_zero_by_hand() {
        // 1 + (-1/4)(-1)/(1/4) * w = 1 + w, so the left side is (z-1)^2 - (z+1)^2 = -4z
        let (lhs, rhs) = stanton_sides(0).unwrap();
        assert_eq!(lhs, RationalPoly::from_ints(&[0, -4]));
        assert_eq!(rhs, RationalPoly::from_ints(&[0, -4]));
    }

    #[test]
    fn both_sides_agree_at_rational_points() {
        // evaluate the series directly at -((z+1)/(z-1))^2 and z^4 without clearing
        for n in 0..4u32 {
            let (lhs, rhs) = stanton_sides(n).unwrap();
            let ni = n as i64;
            for z in [rat(2, 1), rat(-3, 5), rat(7, 2)] {
                let one = BigRational::one();
                let w = -((&z + &one) / (&z - &one)).pow(2);
                let left_series = TerminatingHypSeries::new(rat(-4 * ni - 1, 4), rat(-2 * ni - 1, 1), rat(-4 * ni + 1, 4)).unwrap();
                let sum: BigRational = left_series
                    .coefficients()
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * w.pow(k as i32))
                    .sum();
                let direct = (&z - &one).pow(4 * ni as i32 + 2) * sum;
                assert_eq!(lhs.eval(&z), direct);
                let right_series = TerminatingHypSeries::new(rat(-4 * ni - 1, 4), rat(-ni, 1), rat(5, 4)).unwrap();
                let z4 = z.pow(4);
                let sum: BigRational = right_series
                    .coefficients()
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * z4.pow(k as i32))
                    .sum();
                assert_eq!(rhs.eval(&z), rat(-2, 1) * &z * gamma_ratio(ni).unwrap() * sum);
            }
        }
    }

    #[test]
    fn identity_through_ten() {
        let r = verify_stanton(10);
        assert_eq!((r.tested, r.passed, r.failed), (11, 11, 0));
        for n in 0..=10u32 {
            let (lhs, rhs) = stanton_sides(n).unwrap();
            assert_eq!(lhs.degree(), Some(4 * n as usize + 1));
            assert!(lhs.coeff(0).is_zero() && rhs.coeff(0).is_zero());
        }
    }

    #[test]
    fn polynomial_arithmetic() {
        let p = RationalPoly::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(RationalPoly::zero().degree(), None);
        assert_eq!((&p - &p), RationalPoly::zero());
        assert_eq!(p.pow(2), RationalPoly::from_ints(&[1, 4, 4]));
        assert_eq!(p.to_string(), "2*z + 1");
        assert_eq!(RationalPoly::from_ints(&[0, -1, 3]).to_string(), "3*z^2 - 1*z");
    }
}
