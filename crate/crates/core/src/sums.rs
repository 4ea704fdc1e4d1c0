//! Gauss sums, Jacobi sums and the finite-field binomial coefficient.
//!
//! A [`SumContext`] bundles a field, a value backend and the per-field
//! caches: all `q - 1` Gauss sums are computed eagerly, Jacobi sums lazily
//! on first use. Every summand accumulated through the context is counted,
//! which lets tests pin the asymptotic cost of each evaluation.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use crate::backend::{Backend, Comparison, ExactBackend, FloatBackend, RootCounts};
use crate::characters::Character;
use crate::cyclotomic::CycNumber;
use crate::field::{FieldElement, FiniteField};

/// Cache of `G(chi_j)` for every `j` in `[0, q - 2]`.
#[derive(Clone, Debug)]
pub struct GaussTable<V> {
    values: Vec<V>,
}

impl<V> GaussTable<V> {
    pub fn get(&self, a: Character) -> &V {
        &self.values[a.exponent() as usize]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub struct SumContext<B: Backend> {
    field: Arc<FiniteField>,
    backend: B,
    gauss: GaussTable<B::Value>,
    jacobi: Vec<OnceLock<B::Value>>,
    terms: AtomicU64,
}

impl SumContext<ExactBackend> {
    pub fn exact(field: Arc<FiniteField>) -> Self {
        let backend = ExactBackend::new(&field);
        Self::new(field, backend)
    }

    /// Converts a kernel value to the power basis of Q(zeta_{p(q-1)}).
    pub fn to_cyc(&self, v: &<ExactBackend as Backend>::Value) -> CycNumber {
        self.backend.to_cyc(v)
    }
}

impl SumContext<FloatBackend> {
    pub fn float(field: Arc<FiniteField>) -> Self {
        let backend = FloatBackend::new(&field);
        Self::new(field, backend)
    }
}

impl<B: Backend> SumContext<B> {
    pub fn new(field: Arc<FiniteField>, backend: B) -> Self {
        let terms = AtomicU64::new(0);
        let values = Character::all(&field)
            .map(|a| {
                let mut counts = RootCounts::new(&field, 1);
                for y in field.elements().skip(1) {
                    let e = a.value_exponent(&field, y).expect("y nonzero");
                    counts.add(field.trace(y), e, 1);
                }
                terms.fetch_add(field.unit_order() as u64, Ordering::Relaxed);
                backend.eval_counts(&counts)
            })
            .collect();
        let n = field.unit_order() as usize;
        SumContext {
            field,
            backend,
            gauss: GaussTable { values },
            jacobi: (0..n * n).map(|_| OnceLock::new()).collect(),
            terms,
        }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn backend(&self) -> &B {
        &self.backend
    }

    pub fn gauss_table(&self) -> &GaussTable<B::Value> {
        &self.gauss
    }

    /// Number of summands accumulated so far (table builds included).
    pub fn terms(&self) -> u64 {
        self.terms.load(Ordering::Relaxed)
    }

    pub(crate) fn count_terms(&self, k: u64) {
        self.terms.fetch_add(k, Ordering::Relaxed);
    }

    pub fn character(&self, j: i64) -> Character {
        Character::of(&self.field, j)
    }

    pub fn trivial(&self) -> Character {
        Character::trivial(&self.field)
    }

    pub fn quadratic(&self) -> Character {
        Character::quadratic(&self.field)
    }

    pub fn one(&self) -> B::Value {
        self.backend.rational(1, 1)
    }

    /// `zeta_{q-1}^b`.
    pub fn root(&self, b: u32) -> B::Value {
        self.backend.mul_root(&self.one(), b)
    }

    /// `chi(y)` (zero at `y = 0`).
    pub fn char_value(&self, chi: Character, y: FieldElement) -> B::Value {
        match chi.value_exponent(&self.field, y) {
            None => self.backend.zero(),
            Some(e) => self.root(e),
        }
    }

    pub fn gauss(&self, a: Character) -> &B::Value {
        self.gauss.get(a)
    }

    /// `G(A)^{-1}`; every Gauss sum is nonzero (`G(epsilon) = -1`).
    pub fn gauss_inverse(&self, a: Character) -> B::Value {
        if a.is_trivial() {
            return self.backend.rational(-1, 1);
        }
        self.backend.invert_gauss(self.gauss(a), self.gauss(a.conj()), a.sign(), self.field.order())
    }

    /// `prod G(num_i) / prod G(den_j)`.
    pub fn gauss_quotient(&self, num: &[Character], den: &[Character]) -> B::Value {
        let mut acc = self.one();
        for &a in num {
            acc = self.backend.mul(&acc, self.gauss(a));
        }
        for &a in den {
            acc = self.backend.mul(&acc, &self.gauss_inverse(a));
        }
        acc
    }

    /// `J(A, B)` via the Gauss-sum ratio with the four-way case split; cached.
    pub fn jacobi(&self, a: Character, b: Character) -> B::Value {
        let n = self.field.unit_order() as usize;
        let slot = &self.jacobi[a.exponent() as usize * n + b.exponent() as usize];
        slot.get_or_init(|| self.jacobi_by_ratio(a, b)).clone()
    }

    fn jacobi_by_ratio(&self, a: Character, b: Character) -> B::Value {
        let q = self.field.order() as i64;
        match (a.is_trivial(), b.is_trivial()) {
            (true, true) => self.backend.rational(q - 2, 1),
            (true, false) | (false, true) => self.backend.rational(-1, 1),
            (false, false) if (a * b).is_trivial() => self.backend.rational(-a.sign(), 1),
            (false, false) => self.gauss_quotient(&[a, b], &[a * b]),
        }
    }

    /// `J(A, B) = sum_y A(y) B(1 - y)` by direct summation.
    pub fn jacobi_direct(&self, a: Character, b: Character) -> B::Value {
        let f = &*self.field;
        let mut counts = RootCounts::new(f, 1);
        for y in f.elements() {
            let (Some(ea), Some(eb)) =
                (a.value_exponent(f, y), b.value_exponent(f, f.sub(f.one(), y)))
            else {
                continue;
            };
            counts.add_root(ea + eb, 1);
        }
        self.count_terms(f.order() as u64);
        self.backend.eval_counts(&counts)
    }

    /// `(A over B) = B(-1) J(A, B-bar) / q`.
    pub fn binomial(&self, a: Character, b: Character) -> B::Value {
        let j = self.jacobi(a, b.conj());
        self.backend.scale(&j, b.sign(), self.field.order() as i64)
    }

    /// Both sides of `A(4) G(A) G(A phi) = G(A^2) G(phi)`.
    pub fn hasse_davenport_sides(&self, a: Character) -> (B::Value, B::Value) {
        let phi = self.quadratic();
        let four = self.field.from_int(4);
        let lhs = self.backend.mul(self.gauss(a), self.gauss(a * phi));
        let lhs = self.backend.mul(&lhs, &self.char_value(a, four));
        let rhs = self.backend.mul(self.gauss(a * a), self.gauss(phi));
        (lhs, rhs)
    }

    pub fn hasse_davenport_check(&self, a: Character) -> bool {
        let (l, r) = self.hasse_davenport_sides(a);
        self.compare(&l, &r).equal
    }

    pub fn compare(&self, lhs: &B::Value, rhs: &B::Value) -> Comparison {
        self.backend.compare(lhs, rhs)
    }
}
