//! The finite-field `2F1` and the pseudo-hypergeometric function `F*`.
//!
//! ```text
//! 2F1(A, B; C | x) = eps(x)/q * sum_y B(y) (B-bar C)(y - 1) A-bar(1 - x y)
//!
//! F*(C, D; x) = q/(q-1) * sum_chi (C chi^2 over chi) (C chi over D chi) chi(x/4)
//!               + CD(-1) C-bar(x/4) / q                          (character sum)
//!             = C(2)/q * sum_t (C D-bar^2)(1 - t) (C-bar D)(1 - x - t^2)
//!                                             (point count; C != D, x not 0, 1)
//! ```

use std::fmt;
use std::str::FromStr;

use crate::backend::{Backend, RootCounts};
use crate::characters::Character;
use crate::field::FieldElement;
use crate::sums::SumContext;

/// `2F1(A, B; C | x)`.
pub fn hyp2f1<B: Backend>(
    ctx: &SumContext<B>,
    a: Character,
    b: Character,
    c: Character,
    x: FieldElement,
) -> B::Value {
    if x.is_zero() {
        return ctx.backend().zero();
    }
    let f = ctx.field();
    let bbar_c = b.conj() * c;
    let abar = a.conj();
    let one = f.one();
    let mut counts = RootCounts::new(f, f.order() as i64);
    for y in f.elements().skip(1) {
        let Some(e1) = b.value_exponent(f, y) else { continue };
        let Some(e2) = bbar_c.value_exponent(f, f.sub(y, one)) else { continue };
        let Some(e3) = abar.value_exponent(f, f.sub(one, f.mul(x, y))) else { continue };
        counts.add_root(e1 + e2 + e3, 1);
    }
    ctx.count_terms(f.order() as u64);
    ctx.backend().eval_counts(&counts)
}

/// `F*(C, D; x)` from its defining character sum.
pub fn fstar_char_sum<B: Backend>(
    ctx: &SumContext<B>,
    c: Character,
    d: Character,
    x: FieldElement,
) -> B::Value {
    let f = ctx.field();
    let be = ctx.backend();
    let q = f.order() as i64;
    let x4 = f.div(x, f.from_int(4)).expect("4 is invertible in odd characteristic");
    let mut acc = be.zero();
    for chi in Character::all(f) {
        let Some(e) = chi.value_exponent(f, x4) else { continue };
        let term = be.mul(&ctx.binomial(c * chi * chi, chi), &ctx.binomial(c * chi, d * chi));
        acc = be.add(&acc, &be.mul_root(&term, e));
    }
    ctx.count_terms(f.unit_order() as u64);
    let mut out = be.scale(&acc, q, q - 1);
    if let Some(e) = c.conj().value_exponent(f, x4) {
        let tail = be.mul_root(&be.rational((c * d).sign(), q), e);
        out = be.add(&out, &tail);
    }
    out
}

/// `F*(C, D; x)` in point-count form, valid for `C != D`, `x` not in {0, 1}.
pub fn fstar_point_count<B: Backend>(
    ctx: &SumContext<B>,
    c: Character,
    d: Character,
    x: FieldElement,
) -> B::Value {
    let f = ctx.field();
    let first = c * d.conj().pow(2);
    let second = c.conj() * d;
    let one = f.one();
    let one_minus_x = f.sub(one, x);
    let Some(e2) = c.value_exponent(f, f.from_int(2)) else { unreachable!("2 != 0 for odd p") };
    let mut counts = RootCounts::new(f, f.order() as i64);
    for t in f.elements() {
        let Some(e_first) = first.value_exponent(f, f.sub(one, t)) else { continue };
        let Some(e_second) = second.value_exponent(f, f.sub(one_minus_x, f.mul(t, t))) else {
            continue;
        };
        counts.add_root(e2 + e_first + e_second, 1);
    }
    ctx.count_terms(f.order() as u64);
    ctx.backend().eval_counts(&counts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hyp2F1Params {
    pub a: Character,
    pub b: Character,
    pub c: Character,
    pub x: FieldElement,
}

impl Hyp2F1Params {
    pub fn eval<B: Backend>(&self, ctx: &SumContext<B>) -> B::Value {
        hyp2f1(ctx, self.a, self.b, self.c, self.x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FStarForm {
    CharSum,
    #[default]
    PointCount,
}

impl FromStr for FStarForm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "char" => Ok(FStarForm::CharSum),
            "point" => Ok(FStarForm::PointCount),
            other => Err(format!("unknown F* form {other:?} (expected char or point)")),
        }
    }
}

impl fmt::Display for FStarForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FStarForm::CharSum => "char",
            FStarForm::PointCount => "point",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FStarParams {
    pub c: Character,
    pub d: Character,
    pub x: FieldElement,
}

impl FStarParams {
    pub fn eval<B: Backend>(&self, ctx: &SumContext<B>, form: FStarForm) -> B::Value {
        match form {
            FStarForm::CharSum => fstar_char_sum(ctx, self.c, self.d, self.x),
            FStarForm::PointCount => fstar_point_count(ctx, self.c, self.d, self.x),
        }
    }
}
