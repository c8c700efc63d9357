//! Acceptance criteria 1–8. Prints one PASS/FAIL line per criterion.
//!
//! The process exits nonzero when a criterion's outcome differs from
//! `EXPECTED_RED`: a new failure, or a recorded failure that starts passing.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use degbound::degree::{alpha_value, degree_sum, gamma_value, lazy_degree_sum, ExcludedSet};
use degbound::families::{build, evaluate, Family, FamilyParams};
use degbound::generic::single_edge_bounds;
use degbound::model::{GenericInstance, ProblemInstance};
use degbound::oracle::mcmc::{mcmc_estimate, McmcConfig, McmcEvent};
use degbound::oracle::sweep::{
    bipartite_claim_sweep, bipartite_sandwich_sweep, generic_claim_sweep, generic_sandwich_sweep,
    ClaimConfig, SandwichConfig, SweepReport,
};
use degbound::oracle::{exact_probability, EventKind, DEFAULT_NODE_BUDGET};
use degbound::rational::{int, ratio, to_f64, to_ratio_string};
use degbound::{DegreeSequence, LabelledGraph, OrderPolicy, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Pinned tolerances and budgets.
const EX1_MAX_RATIO: f64 = 1.5;
const EX1_BAND: (f64, f64) = (0.7, 1.1);
const EX4_REL_TOL: f64 = 0.05;
const EX4_MAX_MULTIPLIER: f64 = 1.05;
const MCMC_SIGMAS: f64 = 3.0;
const MCMC_STEPS: u64 = 1_000_000;
const MCMC_SEED: u64 = 20;
const DEGREE_SUITE_INSTANCES: usize = 1000;
const DEGREE_SUITE_SEED: u64 = 0xde95ee;

/// Criteria known to fail, with the measured reason.
const EXPECTED_RED: &[(u32, &str)] = &[(
    7,
    "prod 1/g = 1.169 at n = 1e6 with the given order or the best of 6 sampled orders; it behaves like 1 + 2.3/ln n (1.55, 1.28, 1.21, 1.17 at n = 1e3..1e6)",
)];

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            pass: true,
            details: Vec::new(),
        }
    }

    /// Records one check; any failing check fails the criterion.
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        self.pass &= ok;
        let tag = if ok { "ok  " } else { "FAIL" };
        self.details.push(format!("[{tag}] {}", what.into()));
    }

    fn note(&mut self, what: impl Into<String>) {
        self.details.push(format!("       {}", what.into()));
    }
}

fn sweep_checks(out: &mut Outcome, name: &str, r: &SweepReport) {
    out.check(
        r.violations == 0,
        format!(
            "{name}: {} classes, {} instances, {} checks, {} violations",
            r.classes, r.instances, r.checks, r.violations
        ),
    );
    out.note(format!(
        "{name}: upper applicable {}, lower applicable {}, inapplicable {}",
        r.upper_applicable, r.lower_applicable, r.inapplicable
    ));
    for e in &r.examples {
        out.note(format!("violation: {e}"));
    }
}

fn time_limit(out: &mut Outcome, elapsed: Duration, limit_s: u64) {
    out.check(
        elapsed <= Duration::from_secs(limit_s),
        format!("runtime {:.1}s (limit {limit_s}s)", elapsed.as_secs_f64()),
    );
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::new();
    let t = Instant::now();
    let r = generic_sandwich_sweep(&SandwichConfig::generic_default());
    sweep_checks(&mut out, "generic sandwich (n ≤ 7, sum ≤ 12)", &r);
    out.check(r.checks > 0, "sweep is nonempty");
    time_limit(&mut out, t.elapsed(), 600);
    out
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::new();
    let t = Instant::now();
    let r = bipartite_sandwich_sweep(&SandwichConfig::bipartite_default());
    sweep_checks(&mut out, "bipartite sandwich (sides ≤ 4, sum ≤ 6)", &r);
    out.check(r.checks > 0, "sweep is nonempty");
    time_limit(&mut out, t.elapsed(), 300);
    out
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::new();
    let t = Instant::now();
    let g = generic_claim_sweep(&ClaimConfig::generic_default());
    sweep_checks(&mut out, "generic claims and totals", &g);
    let b = bipartite_claim_sweep(&ClaimConfig::bipartite_default());
    sweep_checks(&mut out, "bipartite claims and totals", &b);
    out.check(g.checks > 0 && b.checks > 0, "sweeps are nonempty");
    time_limit(&mut out, t.elapsed(), 600);
    out
}

fn matching(n: usize) -> (DegreeSequence, LabelledGraph) {
    (DegreeSequence::generic(vec![1; n]), LabelledGraph::empty(n))
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::new();
    let pins: [(usize, Rational, Option<Rational>); 3] = [
        (6, ratio(1, 5), None),
        (20, ratio(1, 19), Some(ratio(7, 207))),
        (8, ratio(1, 7), None),
    ];
    for (n, upper, lower) in pins {
        let (d, empty) = matching(n);
        let b = match single_edge_bounds(&d, &empty, &empty, (0, 1)) {
            Ok(b) => b,
            Err(e) => {
                out.check(false, format!("n = {n}: bound error {e}"));
                continue;
            }
        };
        let inst = ProblemInstance::Generic(GenericInstance::free(d));
        let exact = exact_probability(&inst, EventKind::Contains, &[(0, 1)], DEFAULT_NODE_BUDGET);
        let show = |r: Option<&Rational>| r.map_or("-".to_string(), to_ratio_string);
        let exact_s = exact
            .as_ref()
            .map_or_else(|e| format!("error {e}"), to_ratio_string);
        out.check(
            b.upper_raw() == Some(&upper) && exact.as_ref() == Ok(&upper),
            format!(
                "n = {n}: upper {} = exact {exact_s} = {}",
                show(b.upper_raw()),
                to_ratio_string(&upper)
            ),
        );
        if let Some(lo) = lower {
            out.check(
                b.lower_value() == Some(&lo),
                format!(
                    "n = {n}: lower {} = {}",
                    show(b.lower_value()),
                    to_ratio_string(&lo)
                ),
            );
        }
    }
    out
}

/// Random rational in `[0, 30)` with denominator below 12.
fn rand_rational(rng: &mut ChaCha8Rng) -> Rational {
    let den = rng.gen_range(1..12i64);
    ratio(rng.gen_range(0..30 * den), den)
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::new();
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(DEGREE_SUITE_SEED);
    let mut counts = [0u64; 7];
    let mut fails = [0u64; 7];
    let names = [
        "excluding x: d_x + D^A(k) ≤ D^(A-x)(k+1)",
        "monotone and midpoint concave in x",
        "d ≤ g componentwise ⇒ D(d) ≤ D(g)",
        "H1 ⊆ H2 ⇒ D_H2 ≤ D_H1",
        "agrees with the lazy sum at integers",
        "alpha_w ≤ gamma",
        "gamma ≤ max(n + l)",
    ];
    let mut tally = |i: usize, ok: bool| {
        counts[i] += 1;
        fails[i] += !ok as u64;
    };
    for _ in 0..DEGREE_SUITE_INSTANCES {
        let n = rng.gen_range(2..14usize);
        let d: Vec<u64> = (0..n).map(|_| rng.gen_range(0..25)).collect();
        let a: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).take(n - 1).collect();
        let ds = DegreeSequence::generic(d.clone());
        let aset = ExcludedSet::new(a.clone());
        let free = n - a.len();
        let ds_sum = |s: &DegreeSequence, x: &Rational| degree_sum(s, &aset, x).unwrap();

        for &x in &a {
            let without = ExcludedSet::new(a.iter().copied().filter(|&v| v != x));
            for k in 0..free {
                let lhs = int(d[x]) + ds_sum(&ds, &int(k as u64));
                tally(
                    0,
                    lhs <= degree_sum(&ds, &without, &int(k as u64 + 1)).unwrap(),
                );
            }
        }

        let mut xs = [
            rand_rational(&mut rng),
            rand_rational(&mut rng),
            rand_rational(&mut rng),
        ];
        xs.sort();
        let f: Vec<Rational> = xs.iter().map(|x| ds_sum(&ds, x)).collect();
        let mid = ds_sum(&ds, &((&xs[0] + &xs[2]) / int(2)));
        tally(
            1,
            f[0] <= f[1] && f[1] <= f[2] && mid * int(2) >= &f[0] + &f[2],
        );

        let g: Vec<u64> = d.iter().map(|&v| v + rng.gen_range(0..4)).collect();
        let gs = DegreeSequence::generic(g);
        tally(2, xs.iter().all(|x| ds_sum(&ds, x) <= ds_sum(&gs, x)));

        let h1: Vec<u64> = d.iter().map(|&v| rng.gen_range(0..=v)).collect();
        let h2: Vec<u64> = h1
            .iter()
            .zip(&d)
            .map(|(&h, &v)| h + rng.gen_range(0..=v - h))
            .collect();
        let res =
            |h: &[u64]| DegreeSequence::generic(d.iter().zip(h).map(|(a, b)| a - b).collect());
        let (r1, r2) = (res(&h1), res(&h2));
        tally(3, xs.iter().all(|x| ds_sum(&r2, x) <= ds_sum(&r1, x)));

        tally(
            4,
            (0..=free + 2).all(|k| {
                ds_sum(&ds, &int(k as u64))
                    == int(lazy_degree_sum(&ds, &aset, k.min(free)).unwrap())
            }),
        );

        let l: Vec<u64> = (0..n).map(|_| rng.gen_range(0..4)).collect();
        let ls = DegreeSequence::generic(l.clone());
        let hs = DegreeSequence::generic(h1.clone());
        let gamma = gamma_value(&ds, &ls, &ds, &hs).unwrap();
        tally(
            5,
            (0..n).all(|w| alpha_value(&ds, &ls, &ds, &hs, w).unwrap() <= gamma),
        );
        let max = d.iter().zip(&l).map(|(a, b)| a + b).max().unwrap();
        tally(6, gamma <= int(max));
    }
    for (i, name) in names.iter().enumerate() {
        out.check(
            fails[i] == 0 && counts[i] > 0,
            format!("{name}: {} checks, {} violations", counts[i], fails[i]),
        );
    }
    out.note(format!(
        "{DEGREE_SUITE_INSTANCES} instances, ChaCha8 seed {DEGREE_SUITE_SEED:#x}"
    ));
    time_limit(&mut out, t.elapsed(), 60);
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::new();
    let t = Instant::now();
    let mut ratios = Vec::new();
    for n in [1_000u64, 10_000, 100_000, 1_000_000] {
        let ev = build(Family::Ex1, FamilyParams::new(n))
            .map_err(|e| e.to_string())
            .and_then(|inst| evaluate(&inst, OrderPolicy::Given).map_err(|e| e.to_string()));
        match ev {
            Ok(ev) => {
                let r = ev.bound_ratio();
                let (lo, up) = ev.relative_to_leading();
                out.note(format!(
                    "n = {n:>7}: upper/lower {}, lower/Pi {}, upper/Pi {}",
                    fmt(r),
                    fmt(lo),
                    fmt(up)
                ));
                ratios.push(r);
                if n == 1_000_000 {
                    out.check(
                        r.is_some_and(|r| r <= EX1_MAX_RATIO),
                        format!("upper/lower ≤ {EX1_MAX_RATIO} at n = 1e6"),
                    );
                    let band =
                        |v: Option<f64>| v.is_some_and(|v| v >= EX1_BAND.0 && v <= EX1_BAND.1);
                    out.check(
                        band(lo) && band(up),
                        format!(
                            "both bounds within [{}, {}]·Pi at n = 1e6",
                            EX1_BAND.0, EX1_BAND.1
                        ),
                    );
                }
            }
            Err(e) => out.check(false, format!("n = {n}: {e}")),
        }
    }
    let ratios: Option<Vec<f64>> = ratios.into_iter().collect();
    out.check(
        ratios
            .as_ref()
            .is_some_and(|r| r.len() == 4 && r.windows(2).all(|w| w[1] <= w[0])),
        "upper/lower is non-increasing in n",
    );
    time_limit(&mut out, t.elapsed(), 60);
    out
}

fn fmt(v: Option<f64>) -> String {
    v.map_or("-".into(), |v| format!("{v:.6}"))
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::new();
    let n = 1_000_000;
    let ev = build(Family::Ex4, FamilyParams::new(n))
        .map_err(|e| e.to_string())
        .and_then(|inst| evaluate(&inst, OrderPolicy::Given).map_err(|e| e.to_string()));
    let ev = match ev {
        Ok(ev) => ev,
        Err(e) => {
            out.check(false, e);
            return out;
        }
    };
    let phi = to_f64(&ev.leading);
    let x = n as f64;
    let target = 0.8 / (1.0 + x.sqrt() / (4.0 * x.ln()));
    let rel = phi / target - 1.0;
    out.check(
        rel.abs() <= EX4_REL_TOL,
        format!(
            "(a) Phi = {phi:.9}, target = {target:.9}, relative error {:+.4} (tolerance {EX4_REL_TOL})",
            rel
        ),
    );
    let (lo, up) = ev.relative_to_leading();
    out.check(
        up.is_some_and(|m| m <= EX4_MAX_MULTIPLIER),
        format!(
            "(b) upper multiplier prod 1/g = {} (limit {EX4_MAX_MULTIPLIER})",
            fmt(up)
        ),
    );
    out.note(format!("lower / Phi = {}", fmt(lo)));
    out
}

fn criterion_8() -> Outcome {
    let mut out = Outcome::new();
    let t = Instant::now();
    let (d, empty) = matching(20);
    let b = single_edge_bounds(&d, &empty, &empty, (0, 1)).expect("matching bound");
    let lower = to_f64(b.lower_value().expect("lower applies"));
    let upper = to_f64(b.upper_raw().expect("upper applies"));
    let inst = ProblemInstance::Generic(GenericInstance::free(d));
    let cfg = McmcConfig {
        steps: MCMC_STEPS,
        seed: MCMC_SEED,
        ..McmcConfig::default()
    };
    let est = match mcmc_estimate(&inst, &McmcEvent::Contains(vec![(0, 1)]), &cfg) {
        Ok(e) => e,
        Err(e) => {
            out.check(false, format!("chain failed: {e}"));
            return out;
        }
    };
    let (p, s) = (est.estimate, est.std_error);
    let truth = 1.0 / 19.0;
    out.note(format!(
        "estimate {p:.6}, batch-means sigma {s:.6}, {} steps, seed {}",
        est.steps, est.seed
    ));
    out.check(
        (p - truth).abs() <= MCMC_SIGMAS * s,
        format!(
            "|estimate - 1/19| = {:.6} ≤ {MCMC_SIGMAS}σ",
            (p - truth).abs()
        ),
    );
    // The upper bound equals the exact value here, so an unbiased estimate
    // lands above it about half the time; the interval test carries the same
    // sampling tolerance as the point test.
    out.check(
        p >= lower - MCMC_SIGMAS * s && p <= upper + MCMC_SIGMAS * s,
        format!("estimate within {MCMC_SIGMAS}σ of [{lower:.6}, {upper:.6}]"),
    );
    out.note(format!(
        "strictly inside [lower, upper]: {}",
        p >= lower && p <= upper
    ));
    time_limit(&mut out, t.elapsed(), 60);
    out
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (1, "generic sandwich sweep", criterion_1),
        (2, "bipartite sandwich sweep", criterion_2),
        (3, "switching-claim suite", criterion_3),
        (4, "tightness pins", criterion_4),
        (5, "degree-sum property suite", criterion_5),
        (6, "example 1 trend", criterion_6),
        (7, "example 4 leading factor and multiplier", criterion_7),
        (8, "MCMC cross-check", criterion_8),
    ];
    let mut unexpected = 0;
    let mut failed = 0;
    for (id, name, run) in criteria {
        let t = Instant::now();
        let o = run();
        let red = EXPECTED_RED.iter().find(|(i, _)| *i == id);
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {id}: {status}  {name}  ({:.1}s)",
            t.elapsed().as_secs_f64()
        );
        for d in &o.details {
            println!("    {d}");
        }
        match (o.pass, red) {
            (false, Some((_, why))) => println!("    expected failure: {why}"),
            (true, Some(_)) => {
                println!("    unexpected pass: remove from EXPECTED_RED");
                unexpected += 1;
            }
            (false, None) => unexpected += 1,
            (true, None) => {}
        }
        failed += !o.pass as u32;
    }
    println!(
        "acceptance: {} of 8 criteria pass, {failed} fail, {unexpected} unexpected",
        8 - failed
    );
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
