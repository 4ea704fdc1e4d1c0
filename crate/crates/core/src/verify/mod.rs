//! Exhaustive identity sweeps over a finite field.
//!
//! A sweep enumerates every character tuple and argument of one identity,
//! screens each against the identity's [`Predicate`], evaluates both sides
//! and tallies the outcome. Work is split by character tuple across a rayon
//! pool; partial tallies are merged in enumeration order, so reports are
//! byte-identical for any worker count.

pub mod hypotheses;
mod identities;
pub mod report;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use rayon::ThreadPool;

use crate::backend::{Backend, BackendKind};
use crate::error::{ParseError, VerifyError};
use crate::field::FiniteField;
use crate::hypergeometric::FStarForm;
use crate::sums::SumContext;

pub use hypotheses::{ArgumentRule, CharacterRule, Predicate};
pub use identities::{alpha, beta};
pub use report::{IdentityReport, Observation, SkipCount, Witness, WITNESS_CAP};

use report::Tally;

/// Environment variable holding the default worker count.
pub const JOBS_ENV: &str = "HYPFQ_JOBS";

/// Default Stanton range.
pub const DEFAULT_N_MAX: u32 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    HasseDavenport,
    FstarForms,
    Lemma1,
    AlphaBeta,
    Thm2,
    Eq31,
    /// Quartic transformation with `chi4 = chi_{(q-1)/4}`.
    Thm3,
    /// Quartic transformation with the conjugate quartic character.
    Thm3Bar,
    Eq42,
    /// Polynomial identity over the rationals; not field indexed.
    Stanton,
}

impl IdentityId {
    pub const ALL: [IdentityId; 10] = [
        IdentityId::HasseDavenport,
        IdentityId::FstarForms,
        IdentityId::Lemma1,
        IdentityId::AlphaBeta,
        IdentityId::Thm2,
        IdentityId::Eq31,
        IdentityId::Thm3,
        IdentityId::Thm3Bar,
        IdentityId::Eq42,
        IdentityId::Stanton,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::HasseDavenport => "hasse_davenport",
            IdentityId::FstarForms => "fstar_forms",
            IdentityId::Lemma1 => "lemma1",
            IdentityId::AlphaBeta => "alpha_beta",
            IdentityId::Thm2 => "thm2",
            IdentityId::Eq31 => "eq31",
            IdentityId::Thm3 => "thm3",
            IdentityId::Thm3Bar => "thm3bar",
            IdentityId::Eq42 => "eq42",
            IdentityId::Stanton => "stanton",
        }
    }

    pub fn is_field_sweep(self) -> bool {
        self != IdentityId::Stanton
    }

    /// The admissibility predicate; `None` for the rational identity.
    pub fn predicate(self) -> Option<Predicate> {
        use ArgumentRule as R;
        use CharacterRule as C;
        let (argument, characters) = match self {
            IdentityId::HasseDavenport => (R::Any, C::Any),
            IdentityId::FstarForms => (R::NotZeroOrOneX, C::Any),
            IdentityId::Lemma1 | IdentityId::AlphaBeta => (R::NotZeroOrOneY, C::QuadraticPair),
            IdentityId::Thm2 | IdentityId::Eq31 => (R::NotMinusOne, C::QuadraticPair),
            IdentityId::Thm3 | IdentityId::Thm3Bar => (R::NotZeroOrUnit, C::Any),
            IdentityId::Eq42 => (R::NonZero, C::Any),
            IdentityId::Stanton => return None,
        };
        Some(Predicate { argument, characters })
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name() == s.trim())
            .ok_or_else(|| ParseError::Identity(s.chars().take(64).collect()))
    }
}

/// Optional restriction of a sweep.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepFilter {
    /// Exponents allowed for the leading character (`A`, `C` for the `F*`
    /// forms, `D` for the quartic transformation).
    pub characters: Option<Vec<u32>>,
    /// Codes allowed for the field argument.
    pub elements: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentitySweep {
    pub identity: IdentityId,
    /// `(p, n)` of the field.
    pub field: (u64, u32),
    pub backend: BackendKind,
    pub filter: SweepFilter,
    /// Which form of `F*` the lemma sweep evaluates.
    pub form: FStarForm,
    /// Largest `n` for the rational identity.
    pub n_max: u32,
    /// Record wall time; when off `millis` is zero and reports are reproducible.
    pub timing: bool,
}

impl IdentitySweep {
    pub fn new(identity: IdentityId, p: u64, n: u32) -> Self {
        IdentitySweep {
            identity,
            field: (p, n),
            backend: BackendKind::Exact,
            filter: SweepFilter::default(),
            form: FStarForm::default(),
            n_max: DEFAULT_N_MAX,
            timing: true,
        }
    }

    pub fn backend(mut self, backend: BackendKind) -> Self {
        self.backend = backend;
        self
    }

    pub fn filter(mut self, filter: SweepFilter) -> Self {
        self.filter = filter;
        self
    }

    pub fn form(mut self, form: FStarForm) -> Self {
        self.form = form;
        self
    }

    pub fn n_max(mut self, n_max: u32) -> Self {
        self.n_max = n_max;
        self
    }

    pub fn timing(mut self, timing: bool) -> Self {
        self.timing = timing;
        self
    }
}

/// Reads the worker count from [`JOBS_ENV`], falling back to the number of CPUs.
pub fn default_jobs() -> usize {
    std::env::var(JOBS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&j| j > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

pub fn build_pool(jobs: usize) -> Result<ThreadPool, VerifyError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| VerifyError::Pool(e.to_string()))
}

/// Builds the field and tables for `sweep` and runs it on `jobs` workers.
pub fn run_sweep(sweep: &IdentitySweep, jobs: usize) -> Result<IdentityReport, VerifyError> {
    let pool = build_pool(jobs)?;
    if !sweep.identity.is_field_sweep() {
        return Ok(timed(sweep.timing, || crate::classical::verify_stanton(sweep.n_max)));
    }
    let (p, n) = sweep.field;
    let field = Arc::new(FiniteField::new(p, n)?);
    Ok(match sweep.backend {
        BackendKind::Exact => sweep_in(&SumContext::exact(field), sweep, &pool),
        BackendKind::Float => sweep_in(&SumContext::float(field), sweep, &pool),
    })
}

/// Runs `sweep` against prepared tables; `sweep.field` and `sweep.backend`
/// are ignored in favour of the context's.
pub fn sweep_in<B: Backend>(
    ctx: &SumContext<B>,
    sweep: &IdentitySweep,
    pool: &ThreadPool,
) -> IdentityReport {
    if !sweep.identity.is_field_sweep() {
        return timed(sweep.timing, || crate::classical::verify_stanton(sweep.n_max));
    }
    timed(sweep.timing, || {
        let engine = Engine { ctx, filter: &sweep.filter, form: sweep.form, pool };
        let descriptor = ctx.field().descriptor();
        let kind = ctx.backend().kind();
        match engine.run(sweep.identity) {
            Some(tally) => tally.into_report(sweep.identity.name(), descriptor, kind, 0),
            None => {
                let mut r = Tally::default().into_report(sweep.identity.name(), descriptor, kind, 0);
                r.applicable = false;
                r
            }
        }
    })
}

fn timed(enabled: bool, run: impl FnOnce() -> IdentityReport) -> IdentityReport {
    let start = Instant::now();
    let mut report = run();
    report.millis = if enabled { start.elapsed().as_millis() as u64 } else { 0 };
    report
}

pub(crate) struct Engine<'a, B: Backend> {
    pub ctx: &'a SumContext<B>,
    pub filter: &'a SweepFilter,
    pub form: FStarForm,
    pool: &'a ThreadPool,
}

impl<B: Backend> Engine<'_, B> {
    /// Evaluates `work` on every unit in parallel and merges in unit order.
    pub fn par_units<U, F>(&self, units: Vec<U>, work: F) -> Tally
    where
        U: Sync,
        F: Fn(&U, &mut Tally) + Sync + Send,
    {
        let parts: Vec<Tally> = self.pool.install(|| {
            units
                .par_iter()
                .map(|u| {
                    let mut t = Tally::default();
                    work(u, &mut t);
                    t
                })
                .collect()
        });
        parts.into_iter().fold(Tally::default(), Tally::merge)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_names_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.name().parse::<IdentityId>().unwrap(), id);
        }
        assert!("thm4".parse::<IdentityId>().is_err());
    }

    use crate::characters::Character;
    use crate::field::FiniteField;
    use hypotheses::*;

    fn run(id: IdentityId, q: u64, backend: BackendKind, jobs: usize) -> IdentityReport {
        let (p, n) = crate::field::prime_power_parts(q).unwrap();
        run_sweep(&IdentitySweep::new(id, p, n).backend(backend).timing(false), jobs).unwrap()
    }

    fn bad_pairs(f: &FiniteField) -> u64 {
        let mut bad = 0;
        for a in Character::all(f) {
            let phi = Character::quadratic(f);
            for b in Character::all(f) {
                let a2b = (a.exponent() * 2 + f.unit_order() - b.exponent()) % f.unit_order();
                let pab = (phi.exponent() + a.exponent() + f.unit_order() - b.exponent()) % f.unit_order();
                if a.exponent() == 0 || a2b == 0 || pab == 0 {
                    bad += 1;
                }
            }
        }
        bad
    }

    #[test]
    fn quadratic_skip_accounting() {
        for q in [5u64, 13] {
            let f = FiniteField::of_order(q).unwrap();
            let r = run(IdentityId::Thm2, q, BackendKind::Exact, 2);
            let n = q - 1;
            let bad = bad_pairs(&f);
            assert_eq!(r.skipped_for(X_MINUS_ONE), n * n);
            assert_eq!(r.skipped_total(), bad * (q - 1) + n * n);
            assert_eq!(r.tested, (n * n - bad) * (q - 1));
            assert_eq!(r.failed, 0, "{:?}", r.witnesses.first());
        }
    }

    #[test]
    fn fstar_relation_admissible_count() {
        let f = FiniteField::of_order(13).unwrap();
        let r = run(IdentityId::Lemma1, 13, BackendKind::Exact, 4);
        let good = 12 * 12 - bad_pairs(&f);
        assert_eq!(r.tested, 11 * good);
        assert_eq!(r.failed, 0);
        assert_eq!(r.skipped_for(Y_ZERO_OR_ONE), 2 * 144);
        assert!(r.skipped_for(A_TRIVIAL) > 0);
        let ab = run(IdentityId::AlphaBeta, 13, BackendKind::Exact, 4);
        assert_eq!(ab.skipped, r.skipped);
        assert_eq!(ab.tested, r.tested);
        assert_eq!(ab.failed, 0);
    }

    #[test]
    fn hasse_davenport_counts() {
        let r = run(IdentityId::HasseDavenport, 27, BackendKind::Exact, 3);
        assert_eq!((r.tested, r.failed), (26, 0));
        assert_eq!(r.field, "3^3");
    }

    #[test]
    fn reports_do_not_depend_on_jobs() {
        for id in [IdentityId::Lemma1, IdentityId::Eq31, IdentityId::Thm3] {
            let one = serde_json::to_string(&run(id, 13, BackendKind::Exact, 1)).unwrap();
            let eight = serde_json::to_string(&run(id, 13, BackendKind::Exact, 8)).unwrap();
            assert_eq!(one, eight);
        }
        let one = serde_json::to_string(&run(IdentityId::Thm2, 9, BackendKind::Float, 1)).unwrap();
        let eight = serde_json::to_string(&run(IdentityId::Thm2, 9, BackendKind::Float, 8)).unwrap();
        assert_eq!(one, eight);
    }

    #[test]
    fn float_backend_matches_exact_partition() {
        for id in [IdentityId::Lemma1, IdentityId::Thm2, IdentityId::Eq42] {
            let exact = run(id, 5, BackendKind::Exact, 2);
            let float = run(id, 5, BackendKind::Float, 2);
            assert_eq!((exact.tested, exact.passed, exact.failed), (float.tested, float.passed, float.failed));
            assert_eq!(exact.skipped, float.skipped);
            assert!(float.max_deviation < 5e-6);
        }
    }

    #[test]
    fn quartic_sweep_applicability() {
        let r = run(IdentityId::Thm3, 7, BackendKind::Exact, 1);
        assert!(!r.applicable);
        assert_eq!(r.tested, 0);
        for id in [IdentityId::Thm3, IdentityId::Thm3Bar] {
            let r = run(id, 13, BackendKind::Exact, 2);
            assert_eq!(r.tested, 12 * 10);
            assert_eq!(r.skipped_for(Z_DEGENERATE), 12 * 3);
            assert_eq!(r.failed, 0);
        }
    }

    #[test]
    fn inversion_and_fstar_forms() {
        let r = run(IdentityId::Eq42, 5, BackendKind::Exact, 2);
        assert_eq!((r.tested, r.failed), (64 * 4, 0));
        assert_eq!(r.skipped_for(X_ZERO), 64);
        let r = run(IdentityId::FstarForms, 9, BackendKind::Exact, 2);
        assert_eq!((r.tested, r.failed), (8 * 7 * 7, 0));
        let diag = r.observation("C = D").unwrap();
        assert_eq!(diag.tested, 8 * 7);
    }

    #[test]
    fn reparametrized_edges_are_observed_not_counted() {
        let r = run(IdentityId::Eq31, 13, BackendKind::Exact, 2);
        assert_eq!(r.failed, 0);
        let labels: Vec<&str> = r.observations.iter().map(|o| o.label.as_str()).collect();
        assert_eq!(labels, ["x = +-i", "x = 0", "x = 1"]);
        let f = FiniteField::of_order(13).unwrap();
        let good = 144 - bad_pairs(&f);
        assert_eq!(r.tested, good * (12 - 4));
    }

    #[test]
    fn filters_restrict_the_sweep() {
        let filter = SweepFilter { characters: Some(vec![1]), elements: Some(vec![2, 3]) };
        let sweep = IdentitySweep::new(IdentityId::Thm2, 13, 1).filter(filter).timing(false);
        let r = run_sweep(&sweep, 1).unwrap();
        assert_eq!(r.tested + r.skipped_total(), 12 * 2);
    }

    #[test]
    fn alpha_equals_beta_on_small_field() {
        let ctx = SumContext::exact(Arc::new(FiniteField::of_order(5).unwrap()));
        let (a, b, y) = (ctx.character(1), ctx.character(1), ctx.field().from_int(3));
        assert_eq!(hypotheses::quadratic_pair(ctx.field(), a, b), None);
        assert_eq!(ctx.to_cyc(&alpha(&ctx, a, b, y)), ctx.to_cyc(&beta(&ctx, a, b, y)));
    }

    #[test]
    fn witnesses_capture_a_broken_identity() {
        // feed the quadratic sweep a deliberately wrong right-hand side
        let ctx = SumContext::exact(Arc::new(FiniteField::of_order(5).unwrap()));
        let pool = build_pool(2).unwrap();
        let filter = SweepFilter::default();
        let engine = Engine { ctx: &ctx, filter: &filter, form: FStarForm::PointCount, pool: &pool };
        let pred = IdentityId::Thm2.predicate().unwrap();
        let tally = engine.pair_sweep_for_tests(pred);
        let r = tally.into_report("broken", "5".into(), BackendKind::Exact, 0);
        assert!(r.failed > 0);
        let w = &r.witnesses[0];
        assert!(w.tuple.contains_key("A") && w.tuple.contains_key("x"));
        let lhs: crate::cyclotomic::CycNumber = serde_json::from_value(w.lhs.clone()).unwrap();
        let rhs: crate::cyclotomic::CycNumber = serde_json::from_value(w.rhs.clone()).unwrap();
        let diff: crate::cyclotomic::CycNumber = serde_json::from_value(w.difference.clone()).unwrap();
        assert_eq!(&lhs - &rhs, diff);
    }

    #[test]
    fn field_build_errors_surface() {
        let sweep = IdentitySweep::new(IdentityId::Thm2, 2, 3);
        assert!(matches!(run_sweep(&sweep, 1), Err(VerifyError::Field(_))));
        let sweep = IdentitySweep::new(IdentityId::Thm2, 15, 1);
        assert!(matches!(run_sweep(&sweep, 1), Err(VerifyError::Field(_))));
    }
}
