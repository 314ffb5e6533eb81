use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sample::{sample_pair_at, sample_points, SampleSpec, SampledPair};
use super::schema::SCHEMA;
use crate::conditions::{membership_report, CheckOptions, ConditionTag, MembershipReport, Verdict};
use crate::error::Result;
use crate::expansion::AmbientSetup;
use crate::fieldpoly::Field;

/// One pair of a batch run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRun {
    pub index: usize,
    /// Command line regenerating this pair.
    pub reproducer: String,
    pub points_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overall: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<MembershipReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub spec: SampleSpec,
    pub points_per_pair: usize,
    pub budget: usize,
    pub pairs: Vec<PairRun>,
    /// Fail verdicts per condition.
    pub failures: BTreeMap<ConditionTag, usize>,
    /// Evaluations per condition, budget-exceeded ones included.
    pub evaluations: BTreeMap<ConditionTag, usize>,
    pub budget_exceeded: BTreeMap<ConditionTag, usize>,
    /// Pairs by overall verdict, plus `error` for pairs that could not be run.
    pub overall: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The worst overall verdict of the run.
    pub fn verdict(&self) -> Verdict {
        Verdict::combine(self.pairs.iter().filter_map(|p| p.overall))
    }
}

fn point_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index as u64)
}

fn reproducer(spec: &SampleSpec, index: usize) -> String {
    format!(
        "fanoci sample --M {} --d1 {} --d2 {} --p {} --seed {} --density {} --index {}",
        spec.setup.m, spec.setup.d1, spec.setup.d2, spec.p, spec.seed, spec.density, index
    )
}

/// Checks the given pairs, each at up to `points_per_pair` sampled points.
/// Pairs run in parallel; results keep input order.
pub fn run_pairs<F: Field>(
    spec: &SampleSpec,
    setup: &AmbientSetup,
    pairs: &[SampledPair<F>],
    points_per_pair: usize,
    opts: &CheckOptions,
) -> RunReport {
    let start = Instant::now();
    let runs: Vec<PairRun> = pairs
        .par_iter()
        .map(|pair| {
            let outcome = sample_points(
                &pair.f1,
                &pair.f2,
                points_per_pair,
                point_seed(spec.seed, pair.index),
            )
            .and_then(|pts| {
                Ok((
                    pts.len(),
                    membership_report(&pair.f1, &pair.f2, setup, &pts, opts)?,
                ))
            });
            let mut run = PairRun {
                index: pair.index,
                reproducer: reproducer(spec, pair.index),
                points_checked: 0,
                overall: None,
                report: None,
                error: None,
            };
            match outcome {
                Ok((n, report)) => {
                    run.points_checked = n;
                    run.overall = Some(report.overall);
                    run.report = Some(report);
                }
                Err(e) => run.error = Some(e.to_string()),
            }
            run
        })
        .collect();

    let mut failures = BTreeMap::new();
    let mut evaluations = BTreeMap::new();
    let mut budget_exceeded = BTreeMap::new();
    let mut overall = BTreeMap::new();
    for run in &runs {
        let key = run
            .overall
            .map(|v| v.to_string())
            .unwrap_or_else(|| "error".into());
        *overall.entry(key).or_insert(0) += 1;
        if let Some(report) = &run.report {
            for r in report.all_reports() {
                *evaluations.entry(r.tag).or_insert(0) += 1;
                match r.verdict {
                    Verdict::Fail => *failures.entry(r.tag).or_insert(0) += 1,
                    Verdict::BudgetExceeded => *budget_exceeded.entry(r.tag).or_insert(0) += 1,
                    _ => {}
                }
            }
        }
    }
    RunReport {
        schema: SCHEMA.into(),
        spec: spec.clone(),
        points_per_pair,
        budget: opts.budget,
        pairs: runs,
        failures,
        evaluations,
        budget_exceeded,
        overall,
        elapsed_ms: opts.timing.then(|| start.elapsed().as_millis() as u64),
    }
}

/// Samples `spec.count` pairs and checks each at sampled points.
pub fn empirical_stats(
    spec: &SampleSpec,
    points_per_pair: usize,
    opts: &CheckOptions,
) -> Result<RunReport> {
    let pairs = (0..spec.count)
        .map(|i| sample_pair_at(spec, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(run_pairs(spec, &spec.setup, &pairs, points_per_pair, opts))
}
