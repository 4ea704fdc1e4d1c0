//! Integer kernel for exact sweeps.
//!
//! Since `gcd(p, q - 1) = 1`, Q(zeta_m) with `m = p (q - 1)` is the tensor
//! product Q(zeta_p) (x) Q(zeta_n), `n = q - 1`. A [`SplitCyc`] stores the
//! coordinates in the basis `zeta_p^a zeta_n^b`, `a < p - 1`, `b < phi(n)`,
//! as `i128` numerators over one positive denominator, normalized so that
//! equal values have equal representations.
//!
//! Character sums arrive as counts over the group ring `Z[C_p x C_n]` and
//! are canonicalized in two passes: rows modulo `Phi_n`, then the row for
//! `zeta_p^{p-1}` folded back via `zeta_p^{p-1} = -(1 + ... + zeta_p^{p-2})`.
//! Elements of the subfield Q(zeta_n), which is where every hypergeometric
//! value lives, occupy row 0 only, so their products stay cheap.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::{cyclotomic_polynomial, euler_phi, reduce_mod_cyclotomic, CycNumber};

/// Canonical element of Q(zeta_p) (x) Q(zeta_n).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SplitCyc {
    num: Vec<i128>,
    den: i128,
}

impl SplitCyc {
    pub fn numerators(&self) -> &[i128] {
        &self.num
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|&c| c == 0)
    }
}

#[inline]
fn mac(acc: &mut i128, x: i128, y: i128) {
    *acc = x
        .checked_mul(y)
        .and_then(|t| acc.checked_add(t))
        .expect("coefficient overflow in exact kernel");
}

/// Arithmetic context for one pair `(p, n)`.
#[derive(Clone, Debug)]
pub struct SplitRing {
    p: usize,
    n: usize,
    phi: usize,
    // (i, c_i) for the non-zero coefficients of Phi_n below the leading term
    phi_terms: Vec<(usize, i128)>,
}

impl SplitRing {
    pub fn new(p: u32, n: u32) -> Self {
        assert!(p >= 3 && n >= 1, "need an odd prime p and n >= 1");
        let poly = cyclotomic_polynomial(n as u64);
        let phi = poly.len() - 1;
        let phi_terms = poly[..phi]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c as i128))
            .collect();
        SplitRing { p: p as usize, n: n as usize, phi, phi_terms }
    }

    pub fn p(&self) -> u32 {
        self.p as u32
    }

    pub fn n(&self) -> u32 {
        self.n as u32
    }

    pub fn conductor(&self) -> u64 {
        (self.p * self.n) as u64
    }

    /// Dimension over Q, `(p - 1) phi(n)`.
    pub fn dim(&self) -> usize {
        (self.p - 1) * self.phi
    }

    fn reduce_row(&self, row: &mut [i128]) {
        for k in (self.phi..row.len()).rev() {
            let c = std::mem::take(&mut row[k]);
            if c == 0 {
                continue;
            }
            let base = k - self.phi;
            for &(i, ci) in &self.phi_terms {
                mac(&mut row[base + i], -c, ci);
            }
        }
    }

    /// Canonicalizes `p` rows of `width` raw group-ring counts.
    fn canonical(&self, raw: &mut [i128], width: usize, rows_used: &[bool], den: i128) -> SplitCyc {
        debug_assert_eq!(raw.len(), self.p * width);
        for (a, used) in rows_used.iter().enumerate() {
            if *used {
                self.reduce_row(&mut raw[a * width..(a + 1) * width]);
            }
        }
        let mut num = vec![0i128; self.dim()];
        let last = self.p - 1;
        for a in 0..last {
            for b in 0..self.phi {
                let mut v = raw[a * width + b];
                if rows_used[last] {
                    v = v.checked_sub(raw[last * width + b]).expect("coefficient overflow");
                }
                num[a * self.phi + b] = v;
            }
        }
        normalize(num, den)
    }

    /// Value of `(1/den) * sum counts[a n + b] zeta_p^a zeta_n^b`.
    pub fn eval_counts(&self, counts: &[i64], den: i64) -> SplitCyc {
        assert_eq!(counts.len(), self.p * self.n);
        assert!(den != 0);
        let mut raw: Vec<i128> = counts.iter().map(|&c| c as i128).collect();
        let rows_used: Vec<bool> = counts.chunks(self.n).map(|r| r.iter().any(|&c| c != 0)).collect();
        self.canonical(&mut raw, self.n, &rows_used, den as i128)
    }

    pub fn zero(&self) -> SplitCyc {
        SplitCyc { num: vec![0; self.dim()], den: 1 }
    }

    pub fn rational(&self, num: i128, den: i128) -> SplitCyc {
        assert!(den != 0);
        let mut v = vec![0; self.dim()];
        v[0] = num;
        normalize(v, den)
    }

    /// `zeta_p^a zeta_n^b`.
    pub fn root(&self, a: u32, b: u32) -> SplitCyc {
        let mut counts = vec![0i64; self.p * self.n];
        counts[(a as usize % self.p) * self.n + b as usize % self.n] = 1;
        self.eval_counts(&counts, 1)
    }

    pub fn add(&self, x: &SplitCyc, y: &SplitCyc) -> SplitCyc {
        self.combine(x, y, 1)
    }

    pub fn sub(&self, x: &SplitCyc, y: &SplitCyc) -> SplitCyc {
        self.combine(x, y, -1)
    }

    fn combine(&self, x: &SplitCyc, y: &SplitCyc, sign: i128) -> SplitCyc {
        let l = x.den.lcm(&y.den);
        let (fx, fy) = (l / x.den, l / y.den * sign);
        let num = x
            .num
            .iter()
            .zip(&y.num)
            .map(|(&a, &b)| {
                let mut acc = 0;
                mac(&mut acc, a, fx);
                mac(&mut acc, b, fy);
                acc
            })
            .collect();
        normalize(num, l)
    }

    pub fn neg(&self, x: &SplitCyc) -> SplitCyc {
        SplitCyc { num: x.num.iter().map(|&c| -c).collect(), den: x.den }
    }

    pub fn scale(&self, x: &SplitCyc, num: i128, den: i128) -> SplitCyc {
        assert!(den != 0);
        let v = x.num.iter().map(|&c| c.checked_mul(num).expect("coefficient overflow")).collect();
        normalize(v, x.den.checked_mul(den).expect("denominator overflow"))
    }

    pub fn mul(&self, x: &SplitCyc, y: &SplitCyc) -> SplitCyc {
        let width = 2 * self.phi - 1;
        let mut raw = vec![0i128; self.p * width];
        let mut rows_used = vec![false; self.p];
        let nz_y: Vec<(usize, usize, i128)> = y
            .num
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i / self.phi, i % self.phi, c))
            .collect();
        for (i, &cx) in x.num.iter().enumerate() {
            if cx == 0 {
                continue;
            }
            let (ax, bx) = (i / self.phi, i % self.phi);
            for &(ay, by, cy) in &nz_y {
                let a = (ax + ay) % self.p;
                rows_used[a] = true;
                mac(&mut raw[a * width + bx + by], cx, cy);
            }
        }
        let den = x.den.checked_mul(y.den).expect("denominator overflow");
        self.canonical(&mut raw, width, &rows_used, den)
    }

    /// Multiplies by `zeta_n^b`.
    pub fn mul_root(&self, x: &SplitCyc, b: u32) -> SplitCyc {
        let shift = b as usize % self.n;
        let width = self.phi + shift;
        let mut raw = vec![0i128; self.p * width];
        let mut rows_used = vec![false; self.p];
        for (i, &c) in x.num.iter().enumerate() {
            if c != 0 {
                let (a, bb) = (i / self.phi, i % self.phi);
                rows_used[a] = true;
                raw[a * width + bb + shift] = c;
            }
        }
        self.canonical(&mut raw, width, &rows_used, x.den)
    }

    /// Converts to the power basis of Q(zeta_m), `m = p n`.
    pub fn to_cyc_number(&self, x: &SplitCyc) -> CycNumber {
        let m = self.p * self.n;
        let mut poly = vec![BigRational::zero(); m];
        let den = BigInt::from(x.den);
        for (i, &c) in x.num.iter().enumerate() {
            if c != 0 {
                let (a, b) = (i / self.phi, i % self.phi);
                // zeta_p = zeta_m^n, zeta_n = zeta_m^p
                let e = (a * self.n + b * self.p) % m;
                poly[e] += BigRational::new(BigInt::from(c), den.clone());
            }
        }
        let out = reduce_mod_cyclotomic(&poly, m as u64);
        debug_assert_eq!(out.coeffs().len() as u64, euler_phi(m as u64));
        out
    }
}

fn normalize(mut num: Vec<i128>, mut den: i128) -> SplitCyc {
    if den < 0 {
        den = -den;
        num.iter_mut().for_each(|c| *c = -*c);
    }
    let g = num.iter().fold(den, |g, &c| if c == 0 { g } else { g.gcd(&c) });
    if g > 1 {
        num.iter_mut().for_each(|c| *c /= g);
        den /= g;
    }
    if num.iter().all(|&c| c == 0) {
        den = 1;
    }
    SplitCyc { num, den }
}
