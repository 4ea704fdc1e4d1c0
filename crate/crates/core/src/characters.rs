//! Multiplicative characters of F_q^* (extended by 0 at 0) and the
//! canonical additive character.
//!
//! `chi_j(g^k) = zeta_{q-1}^{j k}` for the canonical generator `g`, so a
//! character is just its exponent `j` modulo `q - 1`. Character values are
//! handled as exponents of `zeta_{q-1}` wherever possible; see
//! [`Character::value_exponent`].

use std::fmt;
use std::ops::Mul;

use num_integer::Integer;

use crate::cyclotomic::{zeta, CycNumber};
use crate::error::FieldError;
use crate::field::{FieldElement, FiniteField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    exponent: u32,
    modulus: u32,
}

impl Character {
    /// `chi_j` on a field with `q - 1 = modulus`; `j` is reduced.
    pub fn new(j: i64, modulus: u32) -> Self {
        assert!(modulus > 0);
        Character { exponent: j.rem_euclid(modulus as i64) as u32, modulus }
    }

    pub fn of(field: &FiniteField, j: i64) -> Self {
        Self::new(j, field.unit_order())
    }

    /// All `q - 1` characters in exponent order.
    pub fn all(field: &FiniteField) -> impl Iterator<Item = Character> {
        let n = field.unit_order();
        (0..n).map(move |j| Character { exponent: j, modulus: n })
    }

    /// The trivial character epsilon.
    pub fn trivial(field: &FiniteField) -> Self {
        Self::of(field, 0)
    }

    /// The quadratic character phi = chi_{(q-1)/2}.
    pub fn quadratic(field: &FiniteField) -> Self {
        Self::of(field, (field.unit_order() / 2) as i64)
    }

    /// The canonical quartic character chi_{(q-1)/4}; needs `q = 1 (mod 4)`.
    pub fn quartic(field: &FiniteField) -> Result<Self, FieldError> {
        if field.order() % 4 != 1 {
            return Err(FieldError::NoFourthRootOfUnity { q: field.order() });
        }
        Ok(Self::of(field, (field.unit_order() / 4) as i64))
    }

    pub fn exponent(self) -> u32 {
        self.exponent
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_trivial(self) -> bool {
        self.exponent == 0
    }

    pub fn order(self) -> u32 {
        self.modulus / self.exponent.gcd(&self.modulus)
    }

    /// `chi(-1) = 1`, i.e. `j (q-1)/2 = 0 (mod q-1)`, i.e. `j` even.
    pub fn is_even(self) -> bool {
        (self.exponent as u64 * (self.modulus / 2) as u64).is_multiple_of(self.modulus as u64)
    }

    /// `chi(-1)` as `+1` or `-1`.
    pub fn sign(self) -> i64 {
        if self.is_even() {
            1
        } else {
            -1
        }
    }

    pub fn conj(self) -> Self {
        Self::new(-(self.exponent as i64), self.modulus)
    }

    pub fn pow(self, k: i64) -> Self {
        let e = (self.exponent as i128 * k as i128).rem_euclid(self.modulus as i128);
        Character { exponent: e as u32, modulus: self.modulus }
    }

    /// `e` with `chi(y) = zeta_{q-1}^e`, or `None` when `y = 0`.
    #[inline]
    pub fn value_exponent(self, field: &FiniteField, y: FieldElement) -> Option<u32> {
        let k = field.dlog(y).ok()?;
        Some(((self.exponent as u64 * k as u64) % self.modulus as u64) as u32)
    }

    /// `chi(y)` as an exact element of Q(zeta_m), `m = p (q - 1)`.
    pub fn eval(self, field: &FiniteField, y: FieldElement) -> CycNumber {
        let m = conductor(field);
        match self.value_exponent(field, y) {
            None => CycNumber::zero(m),
            Some(e) => zeta(m, (e * field.characteristic()) as i64),
        }
    }
}

impl Mul for Character {
    type Output = Character;

    fn mul(self, rhs: Character) -> Character {
        assert_eq!(self.modulus, rhs.modulus, "characters of different fields");
        Character {
            exponent: ((self.exponent as u64 + rhs.exponent as u64) % self.modulus as u64) as u32,
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi_{}", self.exponent)
    }
}

/// Conductor `p (q - 1)` of the field holding every character-sum value.
pub fn conductor(field: &FiniteField) -> u64 {
    field.characteristic() as u64 * field.unit_order() as u64
}

/// The additive character `zeta_p^{Tr(y)}`, lifted to conductor `p (q - 1)`.
pub fn additive(field: &FiniteField, y: FieldElement) -> CycNumber {
    zeta(conductor(field), (field.trace(y) * field.unit_order()) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_characters() {
        let f = FiniteField::prime(13).unwrap();
        let phi = Character::quadratic(&f);
        let chi4 = Character::quartic(&f).unwrap();
        assert_eq!(phi.exponent(), 6);
        assert_eq!(chi4.exponent(), 3);
        assert_eq!(chi4 * chi4, phi);
        assert_eq!(chi4.pow(2), phi);
        assert_eq!(chi4.order(), 4);
        assert!(phi.is_even());
        assert_eq!(phi.eval(&f, f.minus_one()), CycNumber::one(conductor(&f)));

        let f7 = FiniteField::prime(7).unwrap();
        assert!(Character::quartic(&f7).is_err());
        assert!(!Character::quadratic(&f7).is_even());
        assert!(Character::trivial(&f7).is_even());
    }

    #[test]
    fn values_at_zero_and_generator() {
        let f = FiniteField::of_order(9).unwrap();
        let m = conductor(&f);
        let eps = Character::trivial(&f);
        assert!(eps.eval(&f, f.zero()).is_zero());
        for y in f.elements().skip(1) {
            assert_eq!(eps.eval(&f, y), CycNumber::one(m));
        }
        let phi = Character::quadratic(&f);
        assert_eq!(phi.eval(&f, f.generator()), CycNumber::from_integer(m, -1));
    }

    #[test]
    fn additive_character() {
        let f = FiniteField::prime(5).unwrap();
        let m = conductor(&f);
        assert_eq!(additive(&f, f.zero()), CycNumber::one(m));
        assert_eq!(additive(&f, f.from_int(2)), zeta(m, 2 * 4));
        for q in [5u64, 9] {
            let f = FiniteField::of_order(q).unwrap();
            let m = conductor(&f);
            let total = f.elements().fold(CycNumber::zero(m), |acc, y| &acc + &additive(&f, y));
            assert!(total.is_zero());
            for y in f.elements() {
                for z in f.elements() {
                    assert_eq!(additive(&f, f.add(y, z)), &additive(&f, y) * &additive(&f, z));
                }
            }
        }
    }

    #[test]
    fn orthogonality_relations() {
        for q in [5u64, 7, 9, 13] {
            let f = FiniteField::of_order(q).unwrap();
            let n = f.unit_order() as i64;
            let m = conductor(&f);
            for chi in Character::all(&f) {
                let s = f.elements().fold(CycNumber::zero(m), |acc, y| &acc + &chi.eval(&f, y));
                let expected = if chi.is_trivial() { n } else { 0 };
                assert_eq!(s, CycNumber::from_integer(m, expected));
            }
            for y in f.elements().skip(1) {
                let s = Character::all(&f).fold(CycNumber::zero(m), |acc, c| &acc + &c.eval(&f, y));
                let expected = if y == f.one() { n } else { 0 };
                assert_eq!(s, CycNumber::from_integer(m, expected));
            }
        }
    }

    #[test]
    fn products_and_signs() {
        let f = FiniteField::of_order(25).unwrap();
        let m = conductor(&f);
        for a in Character::all(&f) {
            let at_minus_one = a.eval(&f, f.minus_one());
            assert_eq!(at_minus_one, CycNumber::from_integer(m, a.sign()));
            for b in Character::all(&f).step_by(5) {
                for y in f.elements().step_by(3) {
                    assert_eq!((a * b).eval(&f, y), &a.eval(&f, y) * &b.eval(&f, y));
                }
            }
            assert_eq!(a * a.conj(), Character::trivial(&f));
        }
    }
}
