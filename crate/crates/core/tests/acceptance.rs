//! One PASS/FAIL line per acceptance criterion, written straight to stderr
//! so the lines survive output capture.

mod common;

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fanoci::bounds::{
    admissible_splits, beta, beta_sweep, exclusion_margins, graph_bound, graph_bound_sweep,
    hypertangent_chain, improved_4n2, improved_4n2_sweep, omega3, prop35_sweep, prop35_target,
    theorem02_minimum, theta_b, theta_b_worst, ChainVariant, Regime,
};
use fanoci::conditions::{check_global, check_local, CheckOptions, ConditionTag, Verdict};
use fanoci::expansion::{degree_profile, AmbientSetup, SequenceTag};
use fanoci::fieldpoly::PrimeField;
use fanoci::harness::{constructions, empirical_stats, sample_pair_at, SampleSpec};

struct Outcome {
    ok: bool,
    detail: String,
}

fn q(n: i128, d: i128) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn choose(n: i128, k: i128) -> i128 {
    if k < 0 || k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn criterion_1() -> Outcome {
    let m = 13i128;
    let want = [
        m * (m + 3) / 2,
        choose(m - 1, 2) + 1,
        choose(m + 2, 2) - 2,
        (m - 5) * (m - 6) / 2 - (m + 1),
        (m - 5) * (m - 6) / 2 - (m + 1),
        choose(m - 5, 2) + 1,
        choose(m - 9, 2) - 1,
    ];
    let fixture = [104, 67, 103, 14, 14, 29, 5];
    let target = (m - 9) * (m - 10) / 2 - 1;
    let l = theorem02_minimum(13, 6, 9).unwrap();

    let out = Command::new(env!("CARGO_BIN_EXE_fanoci"))
        .args([
            "bounds",
            "--M",
            "13",
            "--d1",
            "6",
            "--d2",
            "9",
            "--format",
            "structured",
        ])
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let ledger = &doc["ledger"];
    let cli_value = |tag: &str| {
        ledger["entries"]
            .as_array()
            .unwrap()
            .iter()
            .find(|e| e["tag"] == tag)
            .and_then(|e| e["value"].as_i64())
            .unwrap() as i128
    };
    let cli = [
        "R0.1-irred",
        "R0.1-rank",
        "R0.2",
        "R1",
        "R2.2",
        "R2.1",
        "R3.1",
    ]
    .map(cli_value);
    let r32 = cli_value("R3.2");

    let ok = want == fixture
        && l.values() == fixture
        && cli == fixture
        && r32 == 14
        && l.minimum == 5
        && target == 5
        && l.target == target
        && ledger["minimum"] == 5
        && out.status.success()
        && l.ok();
    Outcome {
        ok,
        detail: format!(
            "values {:?}, minimum {}, target {}",
            l.values(),
            l.minimum,
            target
        ),
    }
}

fn criterion_2() -> Outcome {
    let mut cases = 0;
    let mut bad = Vec::new();
    for m in 13..=60usize {
        let mi = m as i128;
        let lhs = choose(mi - 9, 2) - 1;
        let rhs = (mi - 9) * (mi - 10) / 2 - 1;
        for (d1, d2) in admissible_splits(m) {
            cases += 1;
            let l = theorem02_minimum(m, d1, d2).unwrap();
            if lhs != rhs || l.minimum != lhs || l.target != rhs || !l.ok() {
                bad.push((m, d1, d2));
            }
        }
    }
    Outcome {
        ok: bad.is_empty(),
        detail: format!("{cases} (M, d1, d2) cases, failures {bad:?}"),
    }
}

/// `Π ((i+1)/i)` over an explicit divisor list, built here from the chain's
/// description rather than taken from the library.
fn chain_oracle(d1: i128, d2: i128, v: ChainVariant) -> BigRational {
    let f = |i: i128| q(i + 1, i);
    let mut prod = q(1, 1);
    match v {
        ChainVariant::Smooth => prod = prod * f(1) * f(2),
        ChainVariant::QuadI => prod *= f(2),
        _ => {}
    }
    for i in 3..d1 {
        prod = prod * f(i) * f(i);
    }
    let end = match v {
        ChainVariant::Smooth => d2 - 3,
        ChainVariant::QuadI | ChainVariant::QuadII => d2 - 2,
        ChainVariant::Biquad => d2 - 1,
    };
    if end >= d1 {
        for i in d1..=end {
            prod *= f(i);
        }
    } else {
        for i in end + 1..d1 {
            prod /= f(i);
        }
    }
    prod
}

fn criterion_3() -> Outcome {
    let mut cases = 0;
    let mut bad = Vec::new();
    let mut equality_at_8 = 0;
    for d1 in 3..=31i128 {
        for d2 in d1..=(62 - d1) {
            for v in ChainVariant::ALL {
                cases += 1;
                let r = hypertangent_chain(d1 as u32, d2 as u32, v).unwrap();
                let closed = match v {
                    ChainVariant::Smooth => q(d1 * (d2 - 2), 3),
                    ChainVariant::QuadI => q(d1 * (d2 - 1), 6),
                    ChainVariant::QuadII => q(d1 * (d2 - 1), 9),
                    ChainVariant::Biquad => q(d1 * d2, 9),
                };
                let mut ok =
                    r.product == closed && chain_oracle(d1, d2, v) == closed && r.identity_holds;
                if d2 >= 8 {
                    let scaled = match v {
                        ChainVariant::Smooth => q(4 * (d2 - 2), 3 * d2),
                        ChainVariant::QuadI => q(7 * (d2 - 1), 6 * d2),
                        ChainVariant::QuadII => q(72 * (d2 - 1), 63 * d2),
                        ChainVariant::Biquad => q(1, 1),
                    };
                    let one = q(1, 1);
                    let holds = match v {
                        ChainVariant::QuadI => scaled > one,
                        _ => scaled >= one,
                    };
                    ok &= holds
                        && r.threshold
                            .as_ref()
                            .is_some_and(|t| t.holds && t.lhs == scaled);
                    if v == ChainVariant::QuadII && d2 == 8 {
                        ok &= scaled == one;
                        equality_at_8 += 1;
                    }
                } else {
                    ok &= r.threshold.is_none();
                }
                if !ok {
                    bad.push((d1, d2, v.as_str()));
                }
            }
        }
    }
    Outcome {
        ok: bad.is_empty() && equality_at_8 > 0,
        detail: format!(
            "{cases} chains, equality at d2 = 8 in {equality_at_8} cases, failures {bad:?}"
        ),
    }
}

/// Rationals with denominator at most 64 in `[lo, hi]`, left end optional.
fn grid(lo: &BigRational, hi: &BigRational, open_lo: bool) -> Vec<BigRational> {
    let mut v = Vec::new();
    for d in 1..=64i128 {
        for n in 0..=(64 * 4) {
            let x = q(n, d);
            if (&x > lo || (!open_lo && &x == lo)) && &x <= hi {
                v.push(x);
            }
        }
    }
    v.sort();
    v.dedup();
    v
}

fn criterion_4() -> Outcome {
    let one = q(1, 1);
    let mid = q(3, 2);
    let mut notes = Vec::new();
    let mut ok = improved_4n2(&q(2, 1)).unwrap() == q(4, 1);
    ok &= beta(&mid).unwrap() == q(27, 4);

    let left = grid(&one, &mid, true);
    let right = grid(&mid, &q(4, 1), false);
    let bl: Vec<_> = left.iter().map(|t| beta(t).unwrap()).collect();
    let br: Vec<_> = right.iter().map(|t| beta(t).unwrap()).collect();
    let dec = bl.windows(2).all(|w| &w[1] - &w[0] < q(0, 1));
    let inc = br.windows(2).all(|w| &w[1] - &w[0] > q(0, 1));
    ok &= dec && inc;
    notes.push(format!("beta grid {} + {} points", left.len(), right.len()));

    // Constrained minimum of the graph bound over su >= x0 sl is alpha^2/(alpha-1).
    let mut graph_ok = true;
    for a in grid(&one, &q(2, 1), true) {
        let floor = &a * &a / (&a - &one);
        let x0 = (q(2, 1) - &a) / (&a - &one);
        for sl in [q(1, 1), q(2, 1), q(7, 3)] {
            let base = &x0 * &sl;
            graph_ok &= graph_bound(&sl, &base).unwrap() == floor;
            for k in 1..=4 {
                graph_ok &= graph_bound(&sl, &(&base + q(k, 2))).unwrap() >= floor;
            }
        }
    }
    ok &= graph_ok;

    let sweeps_ok =
        improved_4n2_sweep(64).ok() && beta_sweep(64).ok() && graph_bound_sweep(64).ok();
    ok &= sweeps_ok;

    let margins = exclusion_margins(6, 9).unwrap();
    let has = |needle: &str| margins.iter().any(|c| c.name.contains(needle) && c.ok());
    for needle in [">= 16", "10 >", "32 >", "27/2", "72/7 < 27/2"] {
        if !has(needle) {
            ok = false;
            notes.push(format!("missing margin {needle}"));
        }
    }
    ok &= margins.iter().all(|c| c.ok());
    ok &= q(72, 7) < q(27, 2);
    notes.push(format!("{} exclusion margins", margins.len()));
    Outcome {
        ok,
        detail: notes.join(", "),
    }
}

/// Degrees `m_i` of the regular sequence: `i, i` for `2 <= i <= d1`, then
/// `d1+1, ..., d2`, cut to `M−2` (smooth) or `M−1` (singular) entries.
fn profile_oracle(m: usize, d1: u32, d2: u32, regime: Regime) -> Vec<i128> {
    let mut v = Vec::new();
    for i in 2..=d1 as i128 {
        v.push(i);
        v.push(i);
    }
    for i in d1 as i128 + 1..=d2 as i128 {
        v.push(i);
    }
    v.truncate(match regime {
        Regime::Smooth => m - 2,
        Regime::Singular => m - 1,
    });
    v
}

fn theta_oracle(m: usize, degrees: &[i128], b: usize, last: i128, regime: Regime) -> i128 {
    let base = match regime {
        Regime::Smooth => m as i128 - 1,
        Regime::Singular => m as i128,
    };
    let s: i128 = degrees[..b].iter().sum();
    (base - b as i128) * (s + last - b as i128) + 1
}

fn criterion_5() -> Outcome {
    let mut cases = 0;
    let mut bad = Vec::new();
    for m in 13..=60usize {
        let mi = m as i128;
        let target = (mi - 2) * (mi - 1) / 2 + 1;
        for (d1, d2) in admissible_splits(m) {
            let d2i = d2 as i128;
            for regime in [Regime::Smooth, Regime::Singular] {
                cases += 1;
                let degrees = profile_oracle(m, d1, d2, regime);
                let tag = if regime == Regime::Smooth {
                    SequenceTag::R1
                } else {
                    SequenceTag::R22
                };
                let mut ok = degree_profile(d1, d2, tag)
                    .into_iter()
                    .map(i128::from)
                    .collect::<Vec<_>>()
                    == degrees;
                let max_b = if regime == Regime::Smooth {
                    m - 4
                } else {
                    m - 3
                };
                let last = *degrees.last().unwrap();
                for b in 1..=max_b {
                    let t = theta_oracle(m, &degrees, b, last, regime);
                    ok &= t >= target && theta_b(m, d1, d2, b, regime).unwrap() == t;
                }
                if regime == Regime::Smooth {
                    let worst2 = theta_oracle(m, &degrees, 2, d2i - 2, regime);
                    ok &= worst2 == (mi - 3) * d2i + 1;
                    ok &= theta_b_worst(m, d1, d2, 2, regime).unwrap() == worst2;
                    let w3 = BigInt::from((mi - 2) * (d2i - 1) + 1);
                    ok &= omega3(m, d2, &q(0, 1)) == BigRational::from_integer(w3);
                }
                let report = prop35_sweep(m, d1, d2, regime).unwrap();
                ok &= report.passed && report.target == target && prop35_target(m) == target;
                if !ok {
                    bad.push((m, d1, d2, regime.to_string()));
                }
            }
        }
    }
    Outcome {
        ok: bad.is_empty(),
        detail: format!("{cases} (M, d1, d2, regime) sweeps, failures {bad:?}"),
    }
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut mono_bad = Vec::new();
    for i in 0..200 {
        let (n, gens) = common::random_monomial_ideal(&mut rng);
        let field = PrimeField::new(5).unwrap();
        let lib = common::library_dimension(
            gens.iter()
                .map(|e| common::monomial_to_library(e, &field))
                .collect(),
            n,
            5,
        );
        let oracle = common::monomial_dimension(&gens, n);
        if lib != oracle {
            mono_bad.push((i, lib, oracle));
        }
    }
    let mut sparse_bad = Vec::new();
    let mut by_dim = std::collections::BTreeMap::new();
    let field = PrimeField::new(5).unwrap();
    for i in 0..50 {
        let (n, gens) = common::random_sparse_ideal(&mut rng, 5);
        let lib = common::library_dimension(
            gens.iter()
                .map(|g| common::to_library(g, n, &field))
                .collect(),
            n,
            5,
        );
        let oracle = common::slicing_dimension(&gens, n, 5, 20, &mut rng);
        // Point counts over F_5 and F_25 must be consistent with the dimension.
        let n5 = common::brute_force_points(&gens, n, 5).len() as u64;
        let n25 = common::count_points_f25(&gens, n) as u64;
        let bezout: u64 = gens.iter().map(|g| common::degree(g) as u64).product();
        let counts_ok = if oracle < 0 {
            n5 == 0 && n25 == 0
        } else {
            n25 <= bezout * common::projective_count(25, oracle)
                && n5 <= bezout * common::projective_count(5, oracle)
        };
        *by_dim.entry(oracle).or_insert(0) += 1;
        if lib != oracle || !counts_ok {
            sparse_bad.push((i, lib, oracle, n5, n25));
        }
    }
    Outcome {
        ok: mono_bad.is_empty() && sparse_bad.is_empty(),
        detail: format!(
            "200 monomial ideals ({} disagree), 50 binomial/trinomial ideals over F_5 ({} disagree), oracle dimensions {:?}{}",
            mono_bad.len(),
            sparse_bad.len(),
            by_dim,
            if mono_bad.is_empty() && sparse_bad.is_empty() { String::new() } else { format!(", {mono_bad:?} {sparse_bad:?}") }
        ),
    }
}

fn criterion_7() -> Outcome {
    let opts = CheckOptions::default();
    let mut bad = Vec::new();
    let mut instances = constructions::all();
    let (f1, f2) = constructions::global_regular();
    let setup = AmbientSetup::new(4, 2, 4).unwrap();
    for tag in [ConditionTag::R01, ConditionTag::R02] {
        instances.push(constructions::ConstructedInstance {
            name: "global-fermat",
            tag,
            violating: false,
            setup,
            f1: f1.clone(),
            f2: f2.clone(),
            point: None,
        });
    }
    let mut violated = std::collections::BTreeSet::new();
    let mut passes = 0;
    for inst in &instances {
        let run = || match &inst.point {
            Some(o) => check_local(&inst.f1, &inst.f2, &inst.setup, o, &opts).unwrap(),
            None => check_global(&inst.f1, &inst.f2, &inst.setup, &opts).unwrap(),
        };
        let (a, b) = (run(), run());
        let Some(r) = a.iter().find(|r| r.tag == inst.tag) else {
            bad.push(format!("{}: not evaluated", inst.name));
            continue;
        };
        let want = if inst.violating {
            Verdict::Fail
        } else {
            Verdict::Pass
        };
        let mut ok = r.verdict == want && a == b;
        if inst.violating {
            ok &= !r.witness.is_empty();
            violated.insert(inst.tag);
        } else {
            passes += 1;
        }
        if !ok {
            bad.push(format!("{}: {:?}", inst.name, r.verdict));
        }
    }
    let all_tags = ConditionTag::ALL.iter().all(|t| violated.contains(t));
    Outcome {
        ok: bad.is_empty() && all_tags,
        detail: format!(
            "{} instances, violated tags {:?}, {passes} passing, failures {bad:?}",
            instances.len(),
            violated.iter().map(|t| t.as_str()).collect::<Vec<_>>()
        ),
    }
}

fn criterion_8() -> Outcome {
    let spec = SampleSpec {
        setup: AmbientSetup::new(4, 2, 4).unwrap(),
        p: 101,
        density: 1.0,
        seed: 8,
        count: 20,
    };
    let opts = CheckOptions::default();
    let a = empirical_stats(&spec, 10, &opts).unwrap().to_json();
    let b = empirical_stats(&spec, 10, &opts).unwrap().to_json();
    let report: serde_json::Value = serde_json::from_str(&a).unwrap();
    let pairs = report["pairs"].as_array().unwrap();
    let mut ok = a == b && pairs.len() == 20;
    let mut failing = 0;
    for (i, p) in pairs.iter().enumerate() {
        ok &= p["points_checked"].as_u64().unwrap() == 10;
        let reproducer = p["reproducer"].as_str().unwrap_or("");
        ok &= reproducer.contains(&format!("--seed {} ", spec.seed))
            && reproducer.ends_with(&format!("--index {i}"));
        if p["overall"] == "fail" {
            failing += 1;
        }
    }

    // The reproducer regenerates the pair: compare the CLI's document with the library's.
    let doc = Command::new(env!("CARGO_BIN_EXE_fanoci"))
        .args([
            "sample",
            "--M",
            "4",
            "--d1",
            "2",
            "--d2",
            "4",
            "--p",
            "101",
            "--seed",
            "8",
            "--density",
            "1",
            "--index",
            "7",
        ])
        .args(["--format", "structured"])
        .output()
        .unwrap();
    let pair = sample_pair_at(&spec, 7).unwrap();
    let want = fanoci::harness::PairDocument::new(spec.setup, &pair.f1, &pair.f2, &[]);
    let got: serde_json::Value = serde_json::from_slice(&doc.stdout).unwrap();
    ok &= got == serde_json::to_value(&want).unwrap();

    // Same through the command line, byte for byte.
    let cli = || {
        Command::new(env!("CARGO_BIN_EXE_fanoci"))
            .args([
                "stats", "--M", "4", "--d1", "2", "--d2", "4", "--p", "101", "--seed", "8",
                "--count", "20", "--points", "10",
            ])
            .args(["--format", "structured"])
            .output()
            .unwrap()
    };
    let (c1, c2) = (cli(), cli());
    ok &= c1.stdout == c2.stdout
        && !c1.stdout.is_empty()
        && c1.status.code() == Some(if failing > 0 { 1 } else { 0 });
    Outcome {
        ok,
        detail: format!(
            "20 pairs x 10 points, {} bytes, identical on rerun, {failing} failing pairs",
            a.len()
        ),
    }
}

#[test]
fn acceptance_criteria() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 8] = [
        ("ledger exactness", criterion_1, Duration::from_secs(1)),
        ("identity sweep", criterion_2, Duration::from_secs(5)),
        ("chain identities", criterion_3, Duration::from_secs(1)),
        ("inequality functions", criterion_4, Duration::from_secs(5)),
        ("theta sweep", criterion_5, Duration::from_secs(30)),
        (
            "Groebner oracle equivalence",
            criterion_6,
            Duration::from_secs(120),
        ),
        (
            "regular-sequence decision",
            criterion_7,
            Duration::from_secs(120),
        ),
        ("end-to-end desk run", criterion_8, Duration::from_secs(300)),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr();
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *limit;
        let pass = out.ok && in_time;
        let timing = format!("{:.3} s of {} s", elapsed.as_secs_f64(), limit.as_secs());
        let _ = writeln!(
            err,
            "acceptance {} {name}: {} ({timing}{}) {}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            if in_time { "" } else { ", over time" },
            out.detail
        );
        if !pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "criteria failing: {failed:?}");
}
