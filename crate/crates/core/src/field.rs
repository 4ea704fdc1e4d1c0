//! Fully tabulated finite fields of odd characteristic.
//!
//! Elements are stored as indices into the multiplicative enumeration:
//! index 0 is zero and index `k + 1` is `g^k` for the canonical generator
//! `g`. Multiplication is exponent addition, addition goes through a Zech
//! logarithm table, and the absolute trace is a table lookup.
//!
//! Independently of that enumeration every element has a *code*: the
//! integer `c_0 + c_1 p + ... + c_{n-1} p^{n-1}` of its coefficient vector
//! in the polynomial basis `1, x, ..., x^{n-1}` modulo the field's modulus.
//! For prime fields the code is the usual residue. Codes are what the CLI,
//! JSON dumps and failure witnesses use.

use std::fmt;

use serde::Serialize;

use crate::error::FieldError;

/// Largest field order for which the full tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// An element of a [`FiniteField`], identified by its enumeration index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);

    /// Raw enumeration index: 0 for zero, `k + 1` for `g^k`.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The field with `q = p^n` elements, `p` an odd prime.
#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    generator_code: u32,
    // power_code[k] = code of g^k, k in [0, q-1)
    power_code: Vec<u32>,
    // log_of_code[c] = k with code(g^k) = c; entry 0 unused
    log_of_code: Vec<u32>,
    // zech[k] = index of 1 + g^k
    zech: Vec<u32>,
    // trace (as a residue mod p) of each element, by index
    trace: Vec<u32>,
}

/// Dense polynomial over Z/p, low degree first.
type Poly = Vec<u32>;

fn is_prime(v: u64) -> bool {
    if v < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= v {
        if v.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= v {
        if v.is_multiple_of(d) {
            out.push(d);
            while v.is_multiple_of(d) {
                v /= d;
            }
        }
        d += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

/// Splits `q` into `(p, n)` with `q = p^n`, `p` prime.
pub fn prime_power_parts(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut n = 0;
    let mut rest = q;
    while rest > 1 {
        rest /= p;
        n += 1;
    }
    Some((p, n))
}

// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Poly {
    let mut r: Vec<u32> = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r.pop().unwrap_or(0);
        if lead == 0 {
            continue;
        }
        let shift = r.len() - dm;
        for (i, &c) in m[..dm].iter().enumerate() {
            let t = (lead as u64 * c as u64) % p as u64;
            let slot = &mut r[shift + i];
            *slot = ((*slot as u64 + p as u64 - t) % p as u64) as u32;
        }
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Poly {
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Poly = prod.into_iter().map(|v| v as u32).collect();
    let mut r = poly_rem(&prod, m, p);
    r.resize(m.len() - 1, 0);
    r
}

fn poly_powmod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Poly {
    let n = m.len() - 1;
    let mut acc = vec![0u32; n];
    acc[0] = 1 % p;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn code_of(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

fn coeffs_of(mut code: u32, p: u32, n: u32) -> Poly {
    (0..n)
        .map(|_| {
            let c = code % p;
            code /= p;
            c
        })
        .collect()
}

// Irreducible iff no monic factor of degree 1..=deg/2 divides it.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut divisor = coeffs_of(low as u32, p, d as u32);
            divisor.push(1);
            if poly_rem(f, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Least monic irreducible polynomial of degree `n` over Z/p, comparing the
/// coefficient tuple `(c_0, ..., c_{n-1})` lexicographically.
fn least_irreducible(p: u32, n: u32) -> Poly {
    let count = (p as u64).pow(n);
    for t in 0..count {
        // c_0 is the most significant digit of t
        let mut coeffs = vec![0u32; n as usize];
        let mut rest = t;
        for i in (0..n as usize).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs.push(1);
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FiniteField {
    /// Builds the field of order `p^n`.
    pub fn new(p: u64, n: u32) -> Result<Self, FieldError> {
        if n == 0 {
            return Err(FieldError::ZeroDegree);
        }
        if p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        // size first: primality is checked by trial division
        let q = (p as u128).checked_pow(n).filter(|&q| q <= MAX_FIELD_ORDER as u128);
        let Some(q) = q else {
            return Err(FieldError::TooLarge(format!("{p}^{n}")));
        };
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let (p, q) = (p as u32, q as u32);
        let modulus = least_irreducible(p, n);
        debug_assert!(is_irreducible(&modulus, p));

        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let generator_code = (1..q)
            .find(|&code| {
                let g = coeffs_of(code, p, n);
                factors.iter().all(|&r| {
                    let h = poly_powmod(&g, order / r, &modulus, p);
                    code_of(&h, p) != 1
                })
            })
            .expect("the multiplicative group is cyclic");

        let g = coeffs_of(generator_code, p, n);
        let mut power_code = Vec::with_capacity(order as usize);
        let mut log_of_code = vec![u32::MAX; q as usize];
        let mut cur = coeffs_of(1, p, n);
        for k in 0..order as u32 {
            let c = code_of(&cur, p);
            power_code.push(c);
            log_of_code[c as usize] = k;
            cur = poly_mulmod(&cur, &g, &modulus, p);
        }
        debug_assert_eq!(code_of(&cur, p), 1);

        let zech = power_code
            .iter()
            .map(|&c| {
                let c0 = c % p;
                let shifted = c - c0 + (c0 + 1) % p;
                if shifted == 0 {
                    0
                } else {
                    log_of_code[shifted as usize] + 1
                }
            })
            .collect();

        let mut field = FiniteField {
            p,
            n,
            q,
            modulus,
            generator_code,
            power_code,
            log_of_code,
            zech,
            trace: Vec::new(),
        };
        field.trace = (0..q).map(|i| field.compute_trace(FieldElement(i))).collect();
        Ok(field)
    }

    /// Builds the prime field of order `p`.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Self::new(p, 1)
    }

    /// Builds the field of order `q`, which must be an odd prime power.
    pub fn of_order(q: u64) -> Result<Self, FieldError> {
        if q.is_multiple_of(2) && q.is_power_of_two() {
            return Err(FieldError::EvenCharacteristic);
        }
        if q > MAX_FIELD_ORDER {
            return Err(FieldError::TooLarge(q.to_string()));
        }
        let (p, n) = prime_power_parts(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, n)
    }

    fn compute_trace(&self, y: FieldElement) -> u32 {
        if y.is_zero() {
            return 0;
        }
        let k = (y.0 - 1) as u64;
        let order = (self.q - 1) as u64;
        let mut acc = FieldElement::ZERO;
        let mut frob = k;
        for _ in 0..self.n {
            acc = self.add(acc, FieldElement(frob as u32 + 1));
            frob = frob * self.p as u64 % order;
        }
        let code = self.code(acc);
        assert!(code < self.p, "trace must land in the prime subfield");
        code
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Order of the multiplicative group, `q - 1`.
    pub fn unit_order(&self) -> u32 {
        self.q - 1
    }

    /// Monic modulus, low degree first (length `n + 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElement {
        FieldElement(2)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    pub fn minus_one(&self) -> FieldElement {
        FieldElement((self.q - 1) / 2 + 1)
    }

    /// All elements in enumeration order (zero first, then `g^0, g^1, ...`).
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(FieldElement)
    }

    /// All elements ordered by code (the natural order for prime fields).
    pub fn elements_by_code(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |c| self.from_code(c).expect("code in range"))
    }

    pub fn element_from_index(&self, index: u32) -> Option<FieldElement> {
        (index < self.q).then_some(FieldElement(index))
    }

    /// `g^k`, with `k` reduced modulo `q - 1`.
    pub fn power_of_generator(&self, k: i64) -> FieldElement {
        FieldElement(k.rem_euclid((self.q - 1) as i64) as u32 + 1)
    }

    /// Element with the given coefficient code.
    pub fn from_code(&self, code: u32) -> Option<FieldElement> {
        match code {
            0 => Some(FieldElement::ZERO),
            c if c < self.q => Some(FieldElement(self.log_of_code[c as usize] + 1)),
            _ => None,
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> FieldElement {
        let r = v.rem_euclid(self.p as i64) as u32;
        self.from_code(r).expect("residue below p")
    }

    pub fn code(&self, y: FieldElement) -> u32 {
        if y.is_zero() {
            0
        } else {
            self.power_code[(y.0 - 1) as usize]
        }
    }

    /// Coefficient vector `(c_0, ..., c_{n-1})` in the polynomial basis.
    pub fn coefficients(&self, y: FieldElement) -> Vec<u32> {
        coeffs_of(self.code(y), self.p, self.n)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Option<FieldElement> {
        if coeffs.len() > self.n as usize || coeffs.iter().any(|&c| c >= self.p) {
            return None;
        }
        self.from_code(code_of(coeffs, self.p))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let order = self.q - 1;
        let (la, lb) = (a.0 - 1, b.0 - 1);
        let diff = (lb + order - la) % order;
        match self.zech[diff as usize] {
            0 => FieldElement::ZERO,
            z => FieldElement((la + z - 1) % order + 1),
        }
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if a.is_zero() {
            a
        } else {
            let order = self.q - 1;
            FieldElement((a.0 - 1 + order / 2) % order + 1)
        }
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let order = self.q - 1;
        FieldElement((a.0 - 1 + b.0 - 1) % order + 1)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroNotInvertible);
        }
        let order = self.q - 1;
        Ok(FieldElement((order - (a.0 - 1)) % order + 1))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` for any integer `e`; `0^0 = 1`, negative powers of zero fail.
    pub fn pow(&self, a: FieldElement, e: i64) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return match e {
                0 => Ok(self.one()),
                e if e > 0 => Ok(FieldElement::ZERO),
                _ => Err(FieldError::ZeroNotInvertible),
            };
        }
        let order = (self.q - 1) as i64;
        let k = ((a.0 - 1) as i64 * e.rem_euclid(order)) % order;
        Ok(FieldElement(k as u32 + 1))
    }

    /// Discrete logarithm to the canonical generator, in `[0, q - 2]`.
    pub fn dlog(&self, a: FieldElement) -> Result<u32, FieldError> {
        if a.is_zero() {
            Err(FieldError::ZeroHasNoLogarithm)
        } else {
            Ok(a.0 - 1)
        }
    }

    /// Absolute trace to the prime field, as a residue in `[0, p - 1]`.
    pub fn trace(&self, a: FieldElement) -> u32 {
        self.trace[a.0 as usize]
    }

    /// The canonical square root of -1, `g^{(q-1)/4}`; needs `q = 1 (mod 4)`.
    pub fn sqrt_of_minus_one(&self) -> Result<FieldElement, FieldError> {
        if self.q % 4 != 1 {
            return Err(FieldError::NoFourthRootOfUnity { q: self.q });
        }
        Ok(self.power_of_generator(((self.q - 1) / 4) as i64))
    }

    /// Short descriptor: `"13"` for prime fields, `"3^3"` otherwise.
    pub fn descriptor(&self) -> String {
        if self.n == 1 {
            self.p.to_string()
        } else {
            format!("{}^{}", self.p, self.n)
        }
    }

    /// Serializable dump for cross-implementation comparison.
    pub fn dump(&self, with_tables: bool) -> FieldDump {
        FieldDump {
            descriptor: self.descriptor(),
            p: self.p,
            n: self.n,
            q: self.q,
            modulus: self.modulus.clone(),
            generator: self.coefficients(self.generator()),
            generator_code: self.generator_code,
            power_codes: with_tables.then(|| self.power_code.clone()),
            trace_by_code: with_tables.then(|| {
                self.elements_by_code().map(|y| self.trace(y)).collect()
            }),
        }
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.descriptor())
    }
}

/// JSON form of a field: modulus and generator as coefficient vectors (low
/// degree first); optionally the power table `code(g^k)` and the trace of
/// every element listed by code.
#[derive(Debug, Clone, Serialize)]
pub struct FieldDump {
    pub descriptor: String,
    pub p: u32,
    pub n: u32,
    pub q: u32,
    pub modulus: Vec<u32>,
    pub generator: Vec<u32>,
    pub generator_code: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power_codes: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_by_code: Option<Vec<u32>>,
}
