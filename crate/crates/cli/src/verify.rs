//! Seeded invariant suites behind `pierce verify`.

use std::fmt::Write as _;

use clap::ValueEnum;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use pierce_core::dyadic::{
    certificates, check_arch_bound, check_divisibility, check_quotient_monotone, profile,
};
use pierce_core::euler::{inv_e_bracket, inv_e_within, terms_for_width};
use pierce_core::exponent::{check_k2_expansion, exponent_budget, gamma, optimize_gamma};
use pierce_core::pmax::{pmax_naive, PmaxEngine};
use pierce_core::witness::{
    arithmetic_witness, check_elementary_inequality, elementary_threshold, predicted_b, required_steps,
    validate_witness, DEFAULT_C,
};
use pierce_core::{pierce_digits, reconstruct, steps_count, trajectory, Trajectory};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::output::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Core,
    Dyadic,
    Exponent,
    Witness,
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub suite: Suite,
    /// Every pair `1 <= a <= n <= n_max` is checked.
    pub n_max: u64,
    pub seed: u64,
    /// Random pairs added to the exhaustive corpus.
    pub samples: usize,
    pub sample_n_max: u64,
}

impl VerifyConfig {
    pub fn new(suite: Suite, n_max: u64, seed: u64) -> Self {
        VerifyConfig {
            suite,
            n_max,
            seed,
            samples: 10_000,
            sample_n_max: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tally {
    pub suite: &'static str,
    pub name: &'static str,
    pub checked: u64,
    pub violations: u64,
    pub first_violation: Option<String>,
}

impl Tally {
    fn new(suite: &'static str, name: &'static str) -> Self {
        Tally {
            suite,
            name,
            checked: 0,
            violations: 0,
            first_violation: None,
        }
    }

    fn check(&mut self, ok: bool, context: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.first_violation.is_none() {
                self.first_violation = Some(context());
            }
        }
    }

    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub suite: Suite,
    pub tallies: Vec<Tally>,
    /// Findings that do not fail the run, such as the largest valid `c`.
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.tallies.iter().all(Tally::pass)
    }

    pub fn get(&self, suite: &str, name: &str) -> Option<&Tally> {
        self.tallies.iter().find(|t| t.suite == suite && t.name == name)
    }

    pub fn render(&self, format: Format) -> String {
        let suite = self
            .suite
            .to_possible_value()
            .expect("named suite")
            .get_name()
            .to_string();
        match format {
            Format::Text => {
                let mut s = String::new();
                for t in &self.tallies {
                    let _ = write!(
                        s,
                        "{}.{}: {} checked, {} violations",
                        t.suite, t.name, t.checked, t.violations
                    );
                    if let Some(v) = &t.first_violation {
                        let _ = write!(s, " (first: {v})");
                    }
                    s.push('\n');
                }
                for n in &self.notes {
                    let _ = writeln!(s, "note: {n}");
                }
                let _ = writeln!(s, "verify {suite}: {}", if self.pass() { "PASS" } else { "FAIL" });
                s
            }
            Format::Csv => {
                let mut s = String::from("suite,invariant,checked,violations\n");
                for t in &self.tallies {
                    let _ = writeln!(s, "{},{},{},{}", t.suite, t.name, t.checked, t.violations);
                }
                s
            }
            Format::Json => {
                let v = json!({
                    "suite": suite,
                    "pass": self.pass(),
                    "invariants": self.tallies.iter().map(|t| json!({
                        "suite": t.suite,
                        "invariant": t.name,
                        "checked": t.checked,
                        "violations": t.violations,
                        "first_violation": t.first_violation,
                    })).collect::<Vec<_>>(),
                    "notes": self.notes,
                });
                serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
            }
        }
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

/// Exhaustive pairs up to `n_max`, then the seeded random pairs.
fn for_each_pair(cfg: &VerifyConfig, stream: u64, mut f: impl FnMut(u64, u64)) {
    for n in 1..=cfg.n_max {
        for a in 1..=n {
            f(a, n);
        }
    }
    let mut g = rng(cfg.seed, stream);
    for _ in 0..cfg.samples {
        let n = g.gen_range(1..=cfg.sample_n_max.max(1));
        f(g.gen_range(1..=n), n);
    }
}

fn core_suite(cfg: &VerifyConfig, out: &mut Vec<Tally>) {
    const S: &str = "core";
    let mut orbit = Tally::new(S, "orbit-decreasing-to-zero");
    let mut digits = Tally::new(S, "digits-increasing");
    let mut round = Tally::new(S, "round-trip");
    let mut count = Tally::new(S, "steps-count-equals-length");
    let mut above = Tally::new(S, "start-above-n-two-steps");
    let mut g = rng(cfg.seed, 1);
    for_each_pair(cfg, 0, |a, n| {
        let ctx = || format!("a = {a}, n = {n}");
        match trajectory(a, n, None) {
            Ok(t) => {
                let terms = t.terms();
                let ok = terms[0] == a
                    && terms.last() == Some(&0)
                    && terms.windows(2).all(|w| w[1] < w[0] && w[1] == n % w[0]);
                orbit.check(ok, ctx);
                count.check(steps_count(a, n).ok() == Some(t.length() as u64), ctx);
            }
            Err(e) => orbit.check(false, || format!("a = {a}, n = {n}: {e}")),
        }
        match pierce_digits(a, n) {
            Ok(e) => {
                digits.check(e.digits().windows(2).all(|w| w[0] < w[1]), ctx);
                round.check(reconstruct(&e).ok() == Some(r(a as i64, n as i64)), ctx);
            }
            Err(e) => digits.check(false, || format!("a = {a}, n = {n}: {e}")),
        }
        let big = n + g.gen_range(1..=n);
        above.check(steps_count(big, n).ok() == Some(2), || {
            format!("a = {big}, n = {n}")
        });
    });

    let mut oracle = Tally::new(S, "pmax-dp-equals-naive");
    let mut dominates = Tally::new(S, "pmax-dominates-samples");
    let mut engine = PmaxEngine::new();
    let same = |engine: &mut PmaxEngine, n: u64, t: &mut Tally| {
        let dp = engine.compute(n);
        t.check(dp.is_ok() && dp.ok() == pmax_naive(n).ok(), || format!("n = {n}"));
    };
    // the naive oracle is quadratic-ish, so the exhaustive part stops at 10^4
    for n in 1..=cfg.n_max.min(10_000) {
        same(&mut engine, n, &mut oracle);
    }
    let mut g = rng(cfg.seed, 2);
    for _ in 0..200 {
        let n = g.gen_range(1..=100_000u64);
        same(&mut engine, n, &mut oracle);
        let p = engine.compute(n).map(|r| u64::from(r.pmax)).unwrap_or(0);
        for _ in 0..100 {
            let a = g.gen_range(1..=n);
            dominates.check(steps_count(a, n).is_ok_and(|s| s <= p), || {
                format!("a = {a}, n = {n}")
            });
        }
    }
    out.extend([orbit, digits, round, count, above, oracle, dominates]);
}

fn dyadic_suite(cfg: &VerifyConfig, out: &mut Vec<Tally>) {
    const S: &str = "dyadic";
    let mut arch = Tally::new(S, "archimedean-bound");
    let mut mono = Tally::new(S, "quotient-monotone");
    let mut div = Tally::new(S, "divisibility");
    let mut cert = Tally::new(S, "two-step-integrality");
    let mut part = Tally::new(S, "bucket-partition");
    for_each_pair(cfg, 3, |a, n| {
        let t: Trajectory = match trajectory(a, n, None) {
            Ok(t) => t,
            Err(e) => return arch.check(false, || format!("a = {a}, n = {n}: {e}")),
        };
        let p = profile(&t);
        for row in check_arch_bound(&p).rows {
            arch.check(row.pass, || format!("a = {a}, n = {n}, A = 2^{}", row.exponent));
        }
        part.check(p.total() == t.length() as u64, || format!("a = {a}, n = {n}"));
        let m = check_quotient_monotone(&t);
        mono.checked += m.checked as u64;
        if let Some(j) = m.first_violation {
            mono.check(false, || format!("a = {a}, n = {n}, j = {j}"));
        }
        let d = check_divisibility(&t);
        div.checked += d.checked as u64;
        if let Some(j) = d.first_violation {
            div.check(false, || format!("a = {a}, n = {n}, j = {j}"));
        }
        match certificates(&t) {
            Ok(cs) => cs
                .iter()
                .for_each(|c| cert.check(c.verify(), || format!("n = {n}, a = {}, h = {}", c.a, c.h))),
            Err(e) => cert.check(false, || format!("a = {a}, n = {n}: {e}")),
        }
    });
    out.extend([arch, mono, div, cert, part]);
}

fn exponent_suite(cfg: &VerifyConfig, out: &mut Vec<Tally>) {
    const S: &str = "exponent";
    let mut exact = Tally::new(S, "reference-values");
    exact.check(gamma(&r(2, 177), &r(6, 177)).gamma == r(2, 177), || {
        "gamma(2/177, 6/177)".into()
    });
    let opt = optimize_gamma();
    exact.check(
        opt.point.feasible()
            && (&opt.point.delta, &opt.point.lambda, &opt.value) == (&r(2, 177), &r(2, 59), &r(2, 177)),
        || "optimize_gamma".into(),
    );
    exact.check(
        exponent_budget(&r(2, 177), &r(6, 177)).overall == r(1, 3) - r(2, 177),
        || "budget at optimum".into(),
    );
    exact.check(exponent_budget(&r(0, 1), &r(0, 1)).overall == r(1, 3), || {
        "budget at origin".into()
    });

    let mut g = rng(cfg.seed, 4);
    let mut recompute = Tally::new(S, "gamma-recompute");
    for _ in 0..1000 {
        let d = r(g.gen_range(-10_000..=10_000), g.gen_range(1..=10_000));
        let l = r(g.gen_range(-10_000..=10_000), g.gen_range(1..=10_000));
        let forms = [
            &l - r(2, 1) * &d,
            d.clone(),
            r(4, 63) - r(349, 84) * &d - r(13, 84) * &l,
        ];
        let want = forms.iter().min().expect("three forms").clone();
        let p = gamma(&d, &l);
        recompute.check(p.forms == forms && p.gamma == want, || {
            format!("delta = {d}, lambda = {l}")
        });
    }
    let mut audit = Tally::new(S, "optimality-audit");
    for _ in 0..10_000 {
        let d = r(g.gen_range(0..1_000_000), 18_000_000);
        let l = (r(1, 3) - &d) * r(g.gen_range(0..=1_000_000), 1_000_000);
        let p = gamma(&d, &l);
        audit.check(p.feasible() && p.gamma <= opt.value, || {
            format!("delta = {d}, lambda = {l}")
        });
    }
    let mut bracket = Tally::new(S, "inverse-e-bracket");
    for e in 1..=120u32 {
        let tol = BigRational::new(BigInt::one(), BigInt::from(10).pow(e));
        let b = inv_e_within(&tol);
        let inner = inv_e_bracket(terms_for_width(&tol) + 25);
        bracket.check(
            b.width() < tol && b.contains(inner.lo()) && b.contains(inner.hi()),
            || format!("tol = 1e-{e}"),
        );
    }
    let mut k2 = Tally::new(S, "k2-expansion-cubic-error");
    for k in 3..=50u64 {
        let ok = check_k2_expansion(k).is_ok_and(|e| {
            let worst = e.lo().abs().max(e.hi().abs());
            let lead_lo = e.lo() + BigRational::one() + r(1, (k * k) as i64);
            worst * BigRational::from_integer(BigInt::from(k).pow(3)) <= r(5, 1)
                && lead_lo > BigRational::one()
        });
        k2.check(ok, || format!("k = {k}"));
    }
    out.extend([exact, recompute, audit, bracket, k2]);
}

fn witness_suite(cfg: &VerifyConfig, out: &mut Vec<Tally>, notes: &mut Vec<String>) {
    const S: &str = "witness";
    let mut arith = Tally::new(S, "arithmetic-witness");
    for m in 2..=30u64 {
        let ok = arithmetic_witness(m).is_ok_and(|w| steps_count(m, w.n).ok() == Some(m));
        arith.check(ok, || format!("m = {m}"));
    }
    let mut ineq = Tally::new(S, "elementary-inequality");
    for n in [1_000_000u64, 1_000_000_000, 1_000_000_000_000] {
        for k in 1..=required_steps(n, DEFAULT_C) {
            ineq.check(check_elementary_inequality(k, n).unwrap_or(false), || {
                format!("k = {k}, n = {n}")
            });
        }
    }
    ineq.check(
        check_elementary_inequality(3, 1_000_000).ok() == Some(true),
        || "k = 3, n = 10^6".into(),
    );
    ineq.check(check_elementary_inequality(3, 100).ok() == Some(false), || {
        "k = 3, n = 100 should fail".into()
    });

    let mut threshold = Tally::new(S, "elementary-threshold");
    for k in 1..=12u64 {
        let ok = match elementary_threshold(k) {
            Ok(Some(t)) => {
                check_elementary_inequality(k, t).unwrap_or(false)
                    && (t == 2 || !check_elementary_inequality(k, t - 1).unwrap_or(true))
            }
            _ => false,
        };
        threshold.check(ok, || format!("k = {k}"));
    }

    let mut reference = Tally::new(S, "reference-witness");
    let ok = validate_witness(1_000_000, DEFAULT_C)
        .is_ok_and(|w| w.complete() && w.per_k.first().is_some_and(|s| s.a_k == 367_880 && s.pass()));
    reference.check(ok, || "n = 10^6".into());

    let mut random = Tally::new(S, "random-witness");
    let mut g = rng(cfg.seed, 5);
    for _ in 0..100 {
        let n = g.gen_range(10_000u64..=1_000_000_000_000);
        match validate_witness(n, DEFAULT_C) {
            Ok(w) => {
                if !w.complete() {
                    notes.push(format!(
                        "n = {n}: verified to k = {}, largest valid c = {:.4}",
                        w.max_valid_k,
                        w.max_valid_c()
                    ));
                }
                random.check(w.complete(), || format!("n = {n}"));
            }
            Err(e) => random.check(false, || format!("n = {n}: {e}")),
        }
    }

    let mut refine = Tally::new(S, "bracket-refinement");
    for _ in 0..500 {
        let k = g.gen_range(1..12u64);
        let n = g.gen_range(3..=1_000_000_000_000u64);
        let e = g.gen_range(1..8u32);
        let coarse = predicted_b(k, n, &BigRational::new(BigInt::one(), BigInt::from(10).pow(e)));
        let fine = predicted_b(
            k,
            n,
            &BigRational::new(BigInt::one(), BigInt::from(10).pow(e + 12)),
        );
        let decided = |b: &pierce_core::euler::RationalInterval| {
            let lo = b.lo().floor();
            (lo == b.hi().floor()).then_some(lo)
        };
        let ok = coarse.lo() <= coarse.hi()
            && fine.lo() <= fine.hi()
            && fine.lo() <= coarse.hi()
            && coarse.lo() <= fine.hi()
            && decided(&coarse).is_none_or(|f| decided(&fine) == Some(f));
        refine.check(ok, || format!("k = {k}, n = {n}"));
    }
    out.extend([arith, ineq, threshold, reference, random, refine]);
}

pub fn run_verify(cfg: &VerifyConfig) -> VerifyReport {
    let mut tallies = Vec::new();
    let mut notes = Vec::new();
    let all = cfg.suite == Suite::All;
    if all || cfg.suite == Suite::Core {
        core_suite(cfg, &mut tallies);
    }
    if all || cfg.suite == Suite::Dyadic {
        dyadic_suite(cfg, &mut tallies);
    }
    if all || cfg.suite == Suite::Exponent {
        exponent_suite(cfg, &mut tallies);
    }
    if all || cfg.suite == Suite::Witness {
        witness_suite(cfg, &mut tallies, &mut notes);
    }
    VerifyReport {
        suite: cfg.suite,
        tallies,
        notes,
    }
}
