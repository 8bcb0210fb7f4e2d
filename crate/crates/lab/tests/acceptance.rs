//! End-to-end acceptance criteria. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hermite_lab::experiment::{run_experiment, sample_thetas, AggregateReport, ExperimentConfig};
use hermite_lab_core::cf::{cf_expand, convergents, reduce_theta};
use hermite_lab_core::dynamics::{
    contraction_check, invariance_residual, mu_measure_v, step_t, step_t_inv, DomainPoint,
};
use hermite_lab_core::hermite::{
    delta_scan, flags_via_criterion, flags_via_envelope, HermiteFlags,
};
use hermite_lab_core::lattice::{
    check_basis, complete_sequence, is_minimal_bruteforce, MinimalVector,
};
use hermite_lab_core::numeric::{parse_real, RealSpec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const PROPORTION: f64 = 0.792_481_3;
const PROPORTION_TOL: f64 = 0.005;
const GROWTH: f64 = 1.497_283;
const GROWTH_REL_TOL: f64 = 0.015;
const LEVY: f64 = 1.186_569;
const LEVY_REL_TOL: f64 = 0.01;
const MU_V: f64 = 0.207_518_75;
const MU_TOL: f64 = 1e-8;
const MU_TIME: Duration = Duration::from_secs(1);
const RESIDUAL_TOL: f64 = 1e-12;

const SAMPLES: usize = 200;
const DEPTH: usize = 5000;
const SEED: u64 = 42;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Every flag list and sequence produced along the way, for the global checks.
#[derive(Default)]
struct Seen {
    flags: Vec<(String, HermiteFlags)>,
    pairs: usize,
    refined: usize,
    bad_pairs: Vec<String>,
}

impl Seen {
    fn flags(&mut self, label: String, f: HermiteFlags) {
        self.flags.push((label, f));
    }

    fn sequence(&mut self, label: &str, seq: &[MinimalVector]) {
        for w in seq.windows(2) {
            self.pairs += 1;
            if !check_basis(&w[0], &w[1]) {
                self.bad_pairs
                    .push(format!("{label} at index {}", w[0].index));
            }
        }
    }
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

fn random_rational(r: &mut ChaCha8Rng, max_den: i64) -> (i64, i64) {
    let v = r.gen_range(2..=max_den);
    let mut u = r.gen_range(1..v);
    while num_integer::gcd(u, v) != 1 {
        u = r.gen_range(1..v);
    }
    (u, v)
}

/// `(a + b sqrt(d)) / c` with `d` square-free enough to be irrational.
fn quadratics() -> Vec<RealSpec> {
    [
        "(-3+1*sqrt(21))/6",
        "(1+1*sqrt(5))/2",
        "1+1*sqrt(2)",
        "sqrt(3)",
        "(2+1*sqrt(7))/3",
        "(-1+1*sqrt(13))/2",
        "(5+3*sqrt(11))/7",
        "sqrt(67)",
        "(1+2*sqrt(19))/5",
        "(-7+1*sqrt(94))/9",
    ]
    .iter()
    .map(|s| parse_real(s).unwrap())
    .collect()
}

fn criteria_1_2(report: &AggregateReport) -> (Outcome, Outcome) {
    let p = report.proportion.mean;
    let c1 = outcome(
        (p - PROPORTION).abs() <= PROPORTION_TOL,
        format!(
            "mean proportion {p:.6} vs {PROPORTION} (tol {PROPORTION_TOL}); {} of {} samples accepted",
            report.accepted, report.sample_count
        ),
    );
    let g = report.hermite_growth.mean;
    let l = report.levy_rate.mean;
    let g_ok = (g - GROWTH).abs() <= GROWTH_REL_TOL * GROWTH;
    let l_ok = (l - LEVY).abs() <= LEVY_REL_TOL * LEVY;
    let c2 = outcome(
        g_ok && l_ok,
        format!(
            "hermite growth {g:.6} vs {GROWTH} ({:+.3}%, tol 1.5%); levy {l:.6} vs {LEVY} ({:+.3}%, tol 1%)",
            100.0 * (g - GROWTH) / GROWTH,
            100.0 * (l - LEVY) / LEVY
        ),
    );
    (c1, c2)
}

fn criterion_3(seen: &Seen) -> Outcome {
    let bad: Vec<&str> = seen
        .flags
        .iter()
        .filter(|(_, f)| f.consecutive_false().is_some())
        .map(|(l, _)| l.as_str())
        .collect();
    let total: usize = seen.flags.iter().map(|(_, f)| f.len()).sum();
    outcome(
        bad.is_empty(),
        format!(
            "{} flag lists, {total} flags, violations: {bad:?}",
            seen.flags.len()
        ),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mu = mu_measure_v(MU_TOL);
    let elapsed = start.elapsed();
    match mu {
        Ok(mu) => outcome(
            (mu - MU_V).abs() <= MU_TOL && elapsed < MU_TIME,
            format!(
                "mu(V) = {mu:.12}, |error| = {:.2e}, {elapsed:?}",
                (mu - MU_V).abs()
            ),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn cross_check(label: String, theta: &RealSpec, n: usize, seen: &mut Seen) -> Result<bool, String> {
    let seq = complete_sequence(theta, n).map_err(|e| format!("{label}: {e}"))?;
    seen.sequence(&label, &seq);
    let env = flags_via_envelope(theta, &seq).map_err(|e| format!("{label}: {e}"))?;
    let crit = flags_via_criterion(theta, n).map_err(|e| format!("{label}: {e}"))?;
    let scan = delta_scan(theta, n, None).map_err(|e| format!("{label}: {e}"))?;
    let clean = crit.mismatches(&env).is_empty()
        && env.mismatches(&scan.flags).is_empty()
        && crit.decided() == crit.len();
    seen.flags(format!("{label} criterion"), crit);
    seen.flags(format!("{label} envelope"), env);
    seen.flags(format!("{label} scan"), scan.flags);
    seen.refined += usize::from(scan.refined);
    Ok(clean)
}

fn criterion_5(seen: &mut Seen) -> Outcome {
    let mut r = rng(5);
    let mut failures = Vec::new();
    for _ in 0..100 {
        let (u, v) = random_rational(&mut r, 1_000_000);
        let theta = RealSpec::ratio(u, v).unwrap();
        // enough steps to reach the end of any expansion with denominator <= 10^6
        match cross_check(format!("{u}/{v}"), &theta, 64, seen) {
            Ok(true) => {}
            Ok(false) => failures.push(format!("{u}/{v}")),
            Err(e) => failures.push(e),
        }
    }
    for theta in quadratics() {
        match cross_check(theta.to_string(), &theta, 50, seen) {
            Ok(true) => {}
            Ok(false) => failures.push(theta.to_string()),
            Err(e) => failures.push(e),
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "100 rationals + 10 quadratics, {} scans refined once, mismatches: {failures:?}",
            seen.refined
        ),
    )
}

/// Best approximations of `u/v` by exhaustive search over `1 <= q <= v`, plus `(1, 0)`.
fn best_approximations(u: i64, v: i64) -> Vec<(i64, i64)> {
    let mut out = vec![(1, 0)];
    let mut best = i64::MAX;
    for q in 1..=v {
        // p nearest to q u / v, halves rounding down
        let p = (2 * q * u + v - 1).div_euclid(2 * v);
        let d = (p * v - q * u).abs();
        if d < best {
            best = d;
            out.push((p, q));
        }
    }
    out
}

fn criterion_6(seen: &mut Seen) -> Outcome {
    let mut r = rng(6);
    let mut failures = Vec::new();
    let mut checked = 0;
    for _ in 0..50 {
        let (u, v) = random_rational(&mut r, 10_000);
        let theta = RealSpec::ratio(u, v).unwrap();
        let seq = match complete_sequence(&theta, 64) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("{u}/{v}: {e}"));
                continue;
            }
        };
        seen.sequence(&format!("{u}/{v}"), &seq);
        let got: Vec<(BigInt, BigInt)> = seq.iter().map(|x| (x.p.clone(), x.q.clone())).collect();
        let want: Vec<(BigInt, BigInt)> = best_approximations(u, v)
            .into_iter()
            .map(|(p, q)| (p.into(), q.into()))
            .collect();
        let certified = seq
            .iter()
            .skip(1)
            .all(|x| is_minimal_bruteforce(&theta, &x.p, &x.q).unwrap_or(false));
        checked += seq.len();
        if got != want || !certified {
            failures.push(format!("{u}/{v}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!("50 rationals, {checked} minimal vectors, mismatches: {failures:?}"),
    )
}

fn criterion_7(seen: &mut Seen) -> Outcome {
    let mut notes = Vec::new();
    let sqrt21 = parse_real("(-3+1*sqrt(21))/6").unwrap();
    let n = 200;
    let seq = complete_sequence(&sqrt21, n).unwrap();
    let env = flags_via_envelope(&sqrt21, &seq).unwrap();
    let crit = flags_via_criterion(&sqrt21, n).unwrap();
    let periodic = env
        .flags
        .iter()
        .enumerate()
        .all(|(k, f)| *f == Some(k == 0 || k % 2 == 1));
    let proportion =
        env.flags[1..].iter().filter(|f| **f == Some(true)).count() as f64 / (n - 1) as f64;
    if !periodic || !crit.mismatches(&env).is_empty() || (proportion - 0.5).abs() > 0.01 {
        notes.push(format!("sqrt21 pattern broken, proportion {proportion}"));
    }
    seen.flags("sqrt21 fixture envelope".into(), env);
    seen.flags("sqrt21 fixture criterion".into(), crit);

    let golden = parse_real("(1+1*sqrt(5))/2").unwrap();
    let seq = complete_sequence(&golden, n).unwrap();
    let env = flags_via_envelope(&golden, &seq).unwrap();
    if env.flags.iter().any(|f| *f != Some(true)) {
        notes.push("golden ratio has a non-Hermite vector".into());
    }
    seen.flags("golden fixture envelope".into(), env);
    outcome(
        notes.is_empty(),
        format!(
            "(sqrt21-3)/6 period [t,f] with proportion {proportion:.3}; golden all true; {notes:?}"
        ),
    )
}

fn unit(r: &mut ChaCha8Rng) -> BigRational {
    let d: i64 = r.gen_range(2..1_000_000);
    BigRational::new(r.gen_range(1..d).into(), d.into())
}

fn criterion_8() -> Outcome {
    let mut r = rng(8);
    let mut notes = Vec::new();
    for _ in 0..1000 {
        let p = DomainPoint::new(unit(&mut r), unit(&mut r));
        if !invariance_residual(&p).unwrap().is_zero() {
            notes.push(format!("rational residual at {p:?}"));
        }
        if step_t_inv(&step_t(&p).unwrap()).unwrap() != p {
            notes.push(format!("inverse fails at {p:?}"));
        }
    }
    let mut worst = 0.0f64;
    for _ in 0..100_000 {
        let p = DomainPoint::new(r.gen_range(1e-9..1.0), r.gen_range(0.0..1.0));
        worst = worst.max(invariance_residual(&p).unwrap());
    }
    if worst >= RESIDUAL_TOL {
        notes.push(format!("float residual {worst:e}"));
    }
    let mut triples = 0;
    while triples < 100_000 {
        let (x, y, z) = (unit(&mut r), unit(&mut r), unit(&mut r));
        if step_t(&DomainPoint::new(x.clone(), BigRational::zero())).map_or(true, |p| p.x.is_zero())
        {
            continue;
        }
        triples += 1;
        let (g1, g2) = contraction_check(&x, &y, &z).unwrap();
        let d = (&z - &y).abs();
        if g1 > d || &g2 * BigRational::from_integer(2.into()) > d {
            notes.push(format!("contraction fails at {x}, {y}, {z}"));
        }
    }
    outcome(
        notes.is_empty(),
        format!("1000 exact points, 100000 float points (worst residual {worst:.1e}), {triples} triples; {notes:?}"),
    )
}

fn fold(quotients: &[BigInt]) -> BigRational {
    let mut acc = BigRational::zero();
    for a in quotients.iter().rev() {
        acc = (BigRational::from_integer(a.clone()) + acc).recip();
    }
    acc
}

fn criterion_9(seen: &Seen) -> Outcome {
    let mut notes: Vec<String> = seen.bad_pairs.clone();
    let mut r = rng(9);
    let mut thetas = quadratics();
    thetas.extend((0..10).map(|_| {
        let (u, v) = random_rational(&mut r, 1_000_000_000);
        RealSpec::ratio(u, v).unwrap()
    }));
    let mut identities = 0;
    for theta in &thetas {
        let x0 = reduce_theta(theta).unwrap().x0;
        let pq = cf_expand(&x0, 100).unwrap();
        let conv = convergents(&pq);
        let a: Vec<BigInt> = pq
            .quotients
            .iter()
            .map(|a| BigInt::from(a.clone()))
            .collect();
        for n in 0..a.len() {
            identities += 1;
            let reversed: Vec<BigInt> = a[..=n].iter().rev().cloned().collect();
            if BigRational::new(conv[n].q.clone(), conv[n + 1].q.clone()) != fold(&reversed) {
                notes.push(format!("mirror identity fails for {theta} at {n}"));
            }
        }
    }
    outcome(
        notes.is_empty(),
        format!(
            "{} consecutive pairs, {identities} mirror identities; {notes:?}",
            seen.pairs
        ),
    )
}

fn main() -> ExitCode {
    let mut seen = Seen::default();
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();

    let started = Instant::now();
    let cfg = ExperimentConfig::uniform(SAMPLES, DEPTH, SEED);
    let report = run_experiment(&cfg).expect("experiment runs");
    let (c1, c2) = criteria_1_2(&report);
    let elapsed = started.elapsed();
    results.push((1, "Hermite proportion", c1));
    results.push((2, "Hermite growth and Levy rate", c2));

    let sampled: Vec<(usize, HermiteFlags)> = sample_thetas(SEED, SAMPLES, cfg.precision_bits)
        .par_iter()
        .enumerate()
        .map(|(i, t)| (i, flags_via_criterion(t, DEPTH).expect("sampled theta")))
        .collect();
    for (i, f) in sampled {
        seen.flags(format!("sample {i}"), f);
    }

    results.push((4, "mu(V) quadrature", criterion_4()));
    results.push((5, "cross-oracle exactness", criterion_5(&mut seen)));
    results.push((
        6,
        "successor algorithm vs brute force",
        criterion_6(&mut seen),
    ));
    results.push((7, "deterministic fixtures", criterion_7(&mut seen)));
    results.push((8, "dynamics identities", criterion_8()));
    results.push((9, "structural invariants", criterion_9(&seen)));
    results.push((
        3,
        "no two consecutive non-Hermite vectors",
        criterion_3(&seen),
    ));
    results.sort_by_key(|(n, _, _)| *n);

    println!("acceptance: experiment {SAMPLES} x {DEPTH} (seed {SEED}) took {elapsed:.1?}");
    let mut failed = 0;
    for (n, name, o) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {n} ({name}): {}", o.detail);
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
