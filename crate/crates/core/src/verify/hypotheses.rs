//! Admissibility predicates, one per identity.
//!
//! A tuple is screened by its argument first and by its characters second,
//! so a tuple failing both is charged to the argument rule. Every rejection
//! carries the reason string recorded in the report.

use crate::characters::Character;
use crate::field::{FieldElement, FiniteField};

pub const A_TRIVIAL: &str = "A trivial";
pub const A2_BBAR_TRIVIAL: &str = "A^2 B-bar trivial";
pub const PHI_A_BBAR_TRIVIAL: &str = "phi A B-bar trivial";
pub const X_MINUS_ONE: &str = "x = -1 excluded";
pub const X_ZERO: &str = "x = 0";
pub const X_ZERO_OR_ONE: &str = "x in {0, 1}";
pub const Y_ZERO_OR_ONE: &str = "y in {0, 1}";
pub const Z_DEGENERATE: &str = "z in {0, 1, -1}";

/// Which arguments an identity excludes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArgumentRule {
    /// Every argument is admissible.
    Any,
    /// `x != -1`.
    NotMinusOne,
    /// `x != 0`.
    NonZero,
    /// `x` not in `{0, 1}`, reported as an `x` rule.
    NotZeroOrOneX,
    /// `y` not in `{0, 1}`.
    NotZeroOrOneY,
    /// `z` not in `{0, 1, -1}`.
    NotZeroOrUnit,
}

impl ArgumentRule {
    pub fn check(self, field: &FiniteField, x: FieldElement) -> Option<&'static str> {
        let zero_or_one = x.is_zero() || x == field.one();
        match self {
            ArgumentRule::Any => None,
            ArgumentRule::NotMinusOne => (x == field.minus_one()).then_some(X_MINUS_ONE),
            ArgumentRule::NonZero => x.is_zero().then_some(X_ZERO),
            ArgumentRule::NotZeroOrOneX => zero_or_one.then_some(X_ZERO_OR_ONE),
            ArgumentRule::NotZeroOrOneY => zero_or_one.then_some(Y_ZERO_OR_ONE),
            ArgumentRule::NotZeroOrUnit => {
                (zero_or_one || x == field.minus_one()).then_some(Z_DEGENERATE)
            }
        }
    }
}

/// Which character tuples an identity excludes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharacterRule {
    Any,
    /// `A`, `A^2 B-bar` and `phi A B-bar` all nontrivial.
    QuadraticPair,
}

impl CharacterRule {
    /// `chars[0]` is `A`, `chars[1]` is `B`; further entries are ignored.
    pub fn check(self, field: &FiniteField, chars: &[Character]) -> Option<&'static str> {
        match self {
            CharacterRule::Any => None,
            CharacterRule::QuadraticPair => quadratic_pair(field, chars[0], chars[1]),
        }
    }
}

/// The shared hypothesis of the quadratic transformation and its lemma.
pub fn quadratic_pair(field: &FiniteField, a: Character, b: Character) -> Option<&'static str> {
    let phi = Character::quadratic(field);
    if a.is_trivial() {
        Some(A_TRIVIAL)
    } else if (a * a * b.conj()).is_trivial() {
        Some(A2_BBAR_TRIVIAL)
    } else if (phi * a * b.conj()).is_trivial() {
        Some(PHI_A_BBAR_TRIVIAL)
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Predicate {
    pub argument: ArgumentRule,
    pub characters: CharacterRule,
}

impl Predicate {
    pub fn check(
        &self,
        field: &FiniteField,
        chars: &[Character],
        x: FieldElement,
    ) -> Option<&'static str> {
        self.argument.check(field, x).or_else(|| self.characters.check(field, chars))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_pair_reasons() {
        let f = FiniteField::of_order(13).unwrap();
        let ch = |j| Character::of(&f, j);
        assert_eq!(quadratic_pair(&f, ch(0), ch(5)), Some(A_TRIVIAL));
        assert_eq!(quadratic_pair(&f, ch(0), ch(0)), Some(A_TRIVIAL));
        // A = chi_1: A^2 B-bar trivial iff B = chi_2, phi A B-bar trivial iff B = chi_7
        assert_eq!(quadratic_pair(&f, ch(1), ch(2)), Some(A2_BBAR_TRIVIAL));
        assert_eq!(quadratic_pair(&f, ch(1), ch(7)), Some(PHI_A_BBAR_TRIVIAL));
        for j in [0, 1, 3, 4, 5, 6, 8, 9, 10, 11] {
            assert_eq!(quadratic_pair(&f, ch(1), ch(j)), None, "B = chi_{j}");
        }
    }

    #[test]
    fn admissible_pairs_by_counting() {
        // for nontrivial A the two excluded B are A^2 and phi A, which coincide iff A = phi
        for q in [5u64, 9, 13, 25, 27] {
            let f = FiniteField::of_order(q).unwrap();
            let n = q - 1;
            let good = Character::all(&f)
                .flat_map(|a| Character::all(&f).map(move |b| (a, b)))
                .filter(|&(a, b)| quadratic_pair(&f, a, b).is_none())
                .count() as u64;
            let expected = (n - 2) * (n - 2) + (n - 1);
            assert_eq!(good, expected, "q = {q}");
        }
    }

    #[test]
    fn argument_rules() {
        let f = FiniteField::of_order(7).unwrap();
        let m1 = f.minus_one();
        assert_eq!(ArgumentRule::NotMinusOne.check(&f, m1), Some(X_MINUS_ONE));
        assert_eq!(ArgumentRule::NotMinusOne.check(&f, f.zero()), None);
        assert_eq!(ArgumentRule::NonZero.check(&f, f.zero()), Some(X_ZERO));
        assert_eq!(ArgumentRule::NotZeroOrOneY.check(&f, f.one()), Some(Y_ZERO_OR_ONE));
        assert_eq!(ArgumentRule::NotZeroOrOneX.check(&f, f.one()), Some(X_ZERO_OR_ONE));
        assert_eq!(ArgumentRule::NotZeroOrUnit.check(&f, m1), Some(Z_DEGENERATE));
        assert_eq!(ArgumentRule::NotZeroOrUnit.check(&f, f.from_int(2)), None);
        let p = Predicate { argument: ArgumentRule::NotMinusOne, characters: CharacterRule::QuadraticPair };
        let eps = Character::trivial(&f);
        assert_eq!(p.check(&f, &[eps, eps], m1), Some(X_MINUS_ONE));
        assert_eq!(p.check(&f, &[eps, eps], f.one()), Some(A_TRIVIAL));
    }
}
