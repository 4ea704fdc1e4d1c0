//! Both sides of each identity and the per-identity sweeps.

use std::collections::BTreeMap;

use super::hypotheses::quadratic_pair;
use super::report::{Tally, Witness};
use super::{Engine, IdentityId};
use crate::backend::{Backend, RootCounts};
use crate::characters::Character;
use crate::field::FieldElement;
use crate::hypergeometric::{fstar_char_sum, fstar_point_count, hyp2f1, FStarForm};
use crate::sums::SumContext;

const EDGE_ZERO: &str = "x = 0";
const EDGE_ONE: &str = "x = 1";
const EDGE_I: &str = "x = +-i";
const DIAGONAL: &str = "C = D";

/// `alpha = G(A^2 B-bar) G(phi A-bar B) sum_t (A-bar^2 B)(1 - t) (phi A B-bar)(y - t^2)`.
pub fn alpha<B: Backend>(ctx: &SumContext<B>, a: Character, b: Character, y: FieldElement) -> B::Value {
    let phi = ctx.quadratic();
    let g = ctx.gauss_quotient(&[a * a * b.conj(), phi * a.conj() * b], &[]);
    let f = ctx.field();
    let sum = two_factor_sum(ctx, a.conj() * a.conj() * b, phi * a * b.conj(), |t| {
        (f.sub(f.one(), t), f.sub(y, f.mul(t, t)))
    });
    ctx.backend().mul(&g, &sum)
}

/// `beta = (phi B A)(-1) (A^2 B-bar)(2) G(phi) G(A) sum_t (A^2 B-bar)(1 - t) A-bar(1 - y - t^2)`.
pub fn beta<B: Backend>(ctx: &SumContext<B>, a: Character, b: Character, y: FieldElement) -> B::Value {
    let phi = ctx.quadratic();
    let f = ctx.field();
    let a2b = a * a * b.conj();
    let g = ctx.gauss_quotient(&[phi, a], &[]);
    let g = ctx.backend().mul(&g, &ctx.char_value(a2b, f.from_int(2)));
    let g = ctx.backend().scale(&g, (phi * b * a).sign(), 1);
    let one_minus_y = f.sub(f.one(), y);
    let sum = two_factor_sum(ctx, a2b, a.conj(), |t| (f.sub(f.one(), t), f.sub(one_minus_y, f.mul(t, t))));
    ctx.backend().mul(&g, &sum)
}

/// `sum_t chi1(u(t)) chi2(v(t))` with `(u, v) = args(t)`.
fn two_factor_sum<B: Backend>(
    ctx: &SumContext<B>,
    chi1: Character,
    chi2: Character,
    args: impl Fn(FieldElement) -> (FieldElement, FieldElement),
) -> B::Value {
    let f = ctx.field();
    let mut counts = RootCounts::new(f, 1);
    for t in f.elements() {
        let (u, v) = args(t);
        if let (Some(e1), Some(e2)) = (chi1.value_exponent(f, u), chi2.value_exponent(f, v)) {
            counts.add_root(e1 + e2, 1);
        }
    }
    ctx.count_terms(f.order() as u64);
    ctx.backend().eval_counts(&counts)
}

/// `G(A^2 B-bar) G(phi A-bar B) / (G(phi) G(A))`.
fn gauss_ratio<B: Backend>(ctx: &SumContext<B>, a: Character, b: Character) -> B::Value {
    let phi = ctx.quadratic();
    ctx.gauss_quotient(&[a * a * b.conj(), phi * a.conj() * b], &[phi, a])
}

type Tuple = [(&'static str, u64)];

impl<B: Backend> Engine<'_, B> {
    /// Runs one identity; `None` when it does not apply to the field.
    pub fn run(&self, id: IdentityId) -> Option<Tally> {
        let pred = id.predicate().expect("field sweeps have predicates");
        Some(match id {
            IdentityId::HasseDavenport => self.hasse_davenport(),
            IdentityId::FstarForms => self.fstar_forms(),
            IdentityId::Lemma1 => self.pair_sweep(|a, b, y, t| self.fstar_relation(a, b, y, t), pred),
            IdentityId::AlphaBeta => self.pair_sweep(|a, b, y, t| self.alpha_beta(a, b, y, t), pred),
            IdentityId::Thm2 => self.pair_sweep(|a, b, x, t| self.quadratic(a, b, x, t), pred),
            IdentityId::Eq31 => self.pair_sweep(|a, b, x, t| self.quadratic_reparametrized(a, b, x, t), pred),
            IdentityId::Thm3 | IdentityId::Thm3Bar => {
                let chi4 = Character::quartic(self.ctx.field()).ok()?;
                let chi4 = if id == IdentityId::Thm3 { chi4 } else { chi4.conj() };
                self.quartic(chi4)
            }
            IdentityId::Eq42 => self.inversion(),
            IdentityId::Stanton => unreachable!("not a field sweep"),
        })
    }

    fn leading(&self) -> Vec<Character> {
        Character::all(self.ctx.field())
            .filter(|c| self.filter.characters.as_ref().is_none_or(|s| s.contains(&c.exponent())))
            .collect()
    }

    fn arguments(&self) -> Vec<FieldElement> {
        let f = self.ctx.field();
        f.elements_by_code()
            .filter(|&x| self.filter.elements.as_ref().is_none_or(|s| s.contains(&f.code(x))))
            .collect()
    }

    fn code(&self, x: FieldElement) -> u64 {
        self.ctx.field().code(x) as u64
    }

    fn record(&self, tally: &mut Tally, tuple: &Tuple, lhs: &B::Value, rhs: &B::Value) {
        let cmp = self.ctx.compare(lhs, rhs);
        if cmp.equal {
            tally.pass(cmp.deviation);
        } else {
            let be = self.ctx.backend();
            tally.fail(Witness {
                tuple: tuple.iter().map(|&(k, v)| (k.to_string(), v)).collect::<BTreeMap<_, _>>(),
                lhs: be.to_json(lhs),
                rhs: be.to_json(rhs),
                difference: be.to_json(&be.sub(lhs, rhs)),
                deviation: cmp.deviation,
            });
        }
    }

    fn observe(&self, tally: &mut Tally, label: &'static str, lhs: &B::Value, rhs: &B::Value) {
        let cmp = self.ctx.compare(lhs, rhs);
        tally.observe(label, cmp.equal, cmp.deviation);
    }

    fn hasse_davenport(&self) -> Tally {
        self.par_units(self.leading(), |&a, tally| {
            let (lhs, rhs) = self.ctx.hasse_davenport_sides(a);
            self.record(tally, &[("A", a.exponent() as u64)], &lhs, &rhs);
        })
    }

    fn fstar_forms(&self) -> Tally {
        let f = self.ctx.field();
        let pred = IdentityId::FstarForms.predicate().unwrap();
        let xs = self.arguments();
        let units: Vec<(Character, Character)> = self
            .leading()
            .into_iter()
            .flat_map(|c| Character::all(f).map(move |d| (c, d)))
            .collect();
        self.par_units(units, |&(c, d), tally| {
            for &x in &xs {
                if let Some(reason) = pred.check(f, &[c, d], x) {
                    tally.skip(reason);
                    continue;
                }
                let by_chars = fstar_char_sum(self.ctx, c, d, x);
                let by_points = fstar_point_count(self.ctx, c, d, x);
                if c == d {
                    self.observe(tally, DIAGONAL, &by_chars, &by_points);
                } else {
                    let tuple = [("C", c.exponent() as u64), ("D", d.exponent() as u64), ("x", self.code(x))];
                    self.record(tally, &tuple, &by_chars, &by_points);
                }
            }
        })
    }

    /// Sweeps `(A, B, x)` for the identities sharing the quadratic-pair hypothesis.
    fn pair_sweep<F>(&self, check: F, pred: super::Predicate) -> Tally
    where
        F: Fn(Character, Character, &[FieldElement], &mut Tally) + Sync + Send,
    {
        let f = self.ctx.field();
        let xs = self.arguments();
        let units: Vec<(Character, Character)> = self
            .leading()
            .into_iter()
            .flat_map(|a| Character::all(f).map(move |b| (a, b)))
            .collect();
        self.par_units(units, |&(a, b), tally| {
            let mut admissible = Vec::with_capacity(xs.len());
            for &x in &xs {
                match pred.check(f, &[a, b], x) {
                    Some(reason) => tally.skip(reason),
                    None => admissible.push(x),
                }
            }
            if !admissible.is_empty() {
                debug_assert!(quadratic_pair(f, a, b).is_none());
                check(a, b, &admissible, tally);
            }
        })
    }

    fn fstar(&self, c: Character, d: Character, x: FieldElement) -> B::Value {
        match self.form {
            FStarForm::CharSum => fstar_char_sum(self.ctx, c, d, x),
            FStarForm::PointCount => fstar_point_count(self.ctx, c, d, x),
        }
    }

    fn fstar_relation(&self, a: Character, b: Character, ys: &[FieldElement], tally: &mut Tally) {
        let (ctx, f, be) = (self.ctx, self.ctx.field(), self.ctx.backend());
        let phi = ctx.quadratic();
        let k = be.mul(&gauss_ratio(ctx, a, b), &ctx.char_value(a.conj().pow(2) * b, f.from_int(2)));
        let k = be.scale(&k, (phi * a * b).sign(), 1);
        for &y in ys {
            let lhs = self.fstar(b, a.conj() * b, y);
            let rhs = be.mul(&k, &self.fstar(b, phi * a, f.sub(f.one(), y)));
            let tuple = [("A", a.exponent() as u64), ("B", b.exponent() as u64), ("y", self.code(y))];
            self.record(tally, &tuple, &lhs, &rhs);
        }
    }

    fn alpha_beta(&self, a: Character, b: Character, ys: &[FieldElement], tally: &mut Tally) {
        for &y in ys {
            let lhs = alpha(self.ctx, a, b, y);
            let rhs = beta(self.ctx, a, b, y);
            let tuple = [("A", a.exponent() as u64), ("B", b.exponent() as u64), ("y", self.code(y))];
            self.record(tally, &tuple, &lhs, &rhs);
        }
    }

    /// `B^2(1 + x) 2F1(phi A-bar B, B; phi A | x^2)`, the common right-hand factor.
    fn quadratic_rhs(&self, a: Character, b: Character, x: FieldElement) -> B::Value {
        let (ctx, f) = (self.ctx, self.ctx.field());
        let phi = ctx.quadratic();
        let h = hyp2f1(ctx, phi * a.conj() * b, b, phi * a, f.mul(x, x));
        ctx.backend().mul(&h, &ctx.char_value(b * b, f.add(f.one(), x)))
    }

    fn quadratic(&self, a: Character, b: Character, xs: &[FieldElement], tally: &mut Tally) {
        let (ctx, f, be) = (self.ctx, self.ctx.field(), self.ctx.backend());
        let phi = ctx.quadratic();
        let k = be.mul(&gauss_ratio(ctx, a, b), &ctx.char_value(a.conj(), f.from_int(4)));
        let k = be.scale(&k, (phi * b).sign(), 1);
        for &x in xs {
            let s = f.add(f.one(), x);
            let arg = f.div(f.mul(f.from_int(4), x), f.mul(s, s)).expect("x != -1");
            let lhs = hyp2f1(ctx, a, b, a * a, arg);
            let rhs = be.mul(&k, &self.quadratic_rhs(a, b, x));
            let tuple = [("A", a.exponent() as u64), ("B", b.exponent() as u64), ("x", self.code(x))];
            self.record(tally, &tuple, &lhs, &rhs);
        }
    }

    fn quadratic_reparametrized(&self, a: Character, b: Character, xs: &[FieldElement], tally: &mut Tally) {
        let (ctx, f, be) = (self.ctx, self.ctx.field(), self.ctx.backend());
        let phi = ctx.quadratic();
        let i = f.sqrt_of_minus_one().ok();
        let k = be.mul(&gauss_ratio(ctx, a, b), &ctx.char_value(a.conj(), f.from_int(4)));
        let k = be.scale(&k, (phi * a * b).sign(), 1);
        for &x in xs {
            let (num, den) = (f.sub(f.one(), x), f.add(f.one(), x));
            let arg = f.div(f.mul(num, num), f.mul(den, den)).expect("x != -1");
            let lhs = hyp2f1(ctx, a, b, a.conj() * b, arg);
            let rhs = be.mul(&k, &self.quadratic_rhs(a, b, x));
            let edge = if x.is_zero() {
                Some(EDGE_ZERO)
            } else if x == f.one() {
                Some(EDGE_ONE)
            } else if i.is_some_and(|i| x == i || x == f.neg(i)) {
                Some(EDGE_I)
            } else {
                None
            };
            match edge {
                Some(label) => self.observe(tally, label, &lhs, &rhs),
                None => {
                    let tuple = [("A", a.exponent() as u64), ("B", b.exponent() as u64), ("x", self.code(x))];
                    self.record(tally, &tuple, &lhs, &rhs);
                }
            }
        }
    }

    fn quartic(&self, chi4: Character) -> Tally {
        let (ctx, f) = (self.ctx, self.ctx.field());
        let phi = ctx.quadratic();
        let pred = IdentityId::Thm3.predicate().unwrap();
        let zs = self.arguments();
        self.par_units(self.leading(), |&d, tally| {
            for &z in &zs {
                if let Some(reason) = pred.check(f, &[d], z) {
                    tally.skip(reason);
                    continue;
                }
                let (zm, zp) = (f.sub(z, f.one()), f.add(z, f.one()));
                let z2 = f.mul(z, z);
                let lhs = hyp2f1(ctx, d, d * chi4, chi4, f.mul(z2, z2));
                let lhs = ctx.backend().mul(&lhs, &ctx.char_value(d.pow(4), zm));
                let w = f.div(zp, zm).expect("z != 1");
                let rhs = hyp2f1(ctx, d, d * d * phi, d * phi, f.neg(f.mul(w, w)));
                self.record(tally, &[("D", d.exponent() as u64), ("z", self.code(z))], &lhs, &rhs);
            }
        })
    }

    fn inversion(&self) -> Tally {
        let (ctx, f) = (self.ctx, self.ctx.field());
        let pred = IdentityId::Eq42.predicate().unwrap();
        let xs = self.arguments();
        let units: Vec<(Character, Character, Character)> = self
            .leading()
            .into_iter()
            .flat_map(|a| Character::all(f).flat_map(move |b| Character::all(f).map(move |c| (a, b, c))))
            .collect();
        self.par_units(units, |&(a, b, c), tally| {
            let sign = (a * b * c).sign();
            for &x in &xs {
                if let Some(reason) = pred.check(f, &[a, b, c], x) {
                    tally.skip(reason);
                    continue;
                }
                let lhs = hyp2f1(ctx, a, b, c, x);
                let inv = f.inv(x).expect("x != 0");
                let rhs = hyp2f1(ctx, b * c.conj(), b, b * a.conj(), inv);
                let rhs = ctx.backend().mul(&rhs, &ctx.char_value(b.conj(), x));
                let rhs = ctx.backend().scale(&rhs, sign, 1);
                let tuple = [
                    ("A", a.exponent() as u64),
                    ("B", b.exponent() as u64),
                    ("C", c.exponent() as u64),
                    ("x", self.code(x)),
                ];
                self.record(tally, &tuple, &lhs, &rhs);
            }
        })
    }

    /// Quadratic sweep comparing each left side with twice itself.
    #[cfg(test)]
    pub fn pair_sweep_for_tests(&self, pred: super::Predicate) -> Tally {
        self.pair_sweep(
            |a, b, xs, tally| {
                for &x in xs {
                    let lhs = hyp2f1(self.ctx, a, b, a * a, x);
                    let rhs = self.ctx.backend().scale(&lhs, 2, 1);
                    let tuple = [("A", a.exponent() as u64), ("B", b.exponent() as u64), ("x", self.code(x))];
                    self.record(tally, &tuple, &lhs, &rhs);
                }
            },
            pred,
        )
    }
}
