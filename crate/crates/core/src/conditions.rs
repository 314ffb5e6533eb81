//! Verdicts for the regularity conditions on a pair `(f1, f2)`.
//!
//! Global conditions concern the hypersurface `F1 = {f1 = 0}` and the complete
//! intersection `V`; local conditions are checked at given points of `V` and
//! dispatched on the point type.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{
    condition_sequence, homogeneous_expansion, AmbientSetup, HomogeneousExpansion, SequenceTag,
};
use crate::fieldpoly::{squarefree_probabilistic, Field, MultiPoly};
use crate::grobner::{
    groebner_basis, is_regular_sequence, projective_dimension, IdealBasis, StepBudget,
};
use crate::harness::enumerate_points;
use crate::singular::{
    classify_point, pencil_rank_profile, point_quadric, singular_locus_at_most,
    singular_locus_dimension, PencilParam, PointClass, QuadraticForm,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConditionTag {
    #[serde(rename = "R0.1")]
    R01,
    #[serde(rename = "R0.2")]
    R02,
    #[serde(rename = "R1")]
    R1,
    #[serde(rename = "R2.1")]
    R21,
    #[serde(rename = "R2.2")]
    R22,
    #[serde(rename = "R3.1")]
    R31,
    #[serde(rename = "R3.2")]
    R32,
}

impl ConditionTag {
    pub const ALL: [ConditionTag; 7] = [
        ConditionTag::R01,
        ConditionTag::R02,
        ConditionTag::R1,
        ConditionTag::R21,
        ConditionTag::R22,
        ConditionTag::R31,
        ConditionTag::R32,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ConditionTag::R01 => "R0.1",
            ConditionTag::R02 => "R0.2",
            ConditionTag::R1 => "R1",
            ConditionTag::R21 => "R2.1",
            ConditionTag::R22 => "R2.2",
            ConditionTag::R31 => "R3.1",
            ConditionTag::R32 => "R3.2",
        }
    }
}

impl fmt::Display for ConditionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Partial,
    BudgetExceeded,
}

impl Verdict {
    /// Process exit status for a run whose overall verdict is `self`.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Pass | Verdict::Partial => 0,
            Verdict::Fail => 1,
            Verdict::BudgetExceeded => 3,
        }
    }

    /// Fail dominates, then budget exhaustion, then partial.
    pub fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::Pass;
        for v in verdicts {
            out = match (out, v) {
                (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
                (Verdict::BudgetExceeded, _) | (_, Verdict::BudgetExceeded) => {
                    Verdict::BudgetExceeded
                }
                (Verdict::Partial, _) | (_, Verdict::Partial) => Verdict::Partial,
                _ => Verdict::Pass,
            };
        }
        out
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Partial => "partial",
            Verdict::BudgetExceeded => "budget-exceeded",
        })
    }
}

/// Data backing a verdict. Empty fields are omitted from reports.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prefix_dimensions: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub achieved_codim: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_locus_dimension: Option<i64>,
    /// Certified upper bound when the exact dimension was not computed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_locus_dimension_at_most: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_point: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl Witness {
    pub fn is_empty(&self) -> bool {
        *self == Witness::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub tag: ConditionTag,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Witness::is_empty")]
    pub witness: Witness,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl ConditionReport {
    fn new(tag: ConditionTag, verdict: Verdict, witness: Witness) -> Self {
        ConditionReport {
            tag,
            verdict,
            point: None,
            witness,
            notes: Vec::new(),
            elapsed_ms: None,
        }
    }

    fn budget(tag: ConditionTag, budget: usize) -> Self {
        let w = Witness {
            message: Some(format!("Gröbner step budget of {budget} s-pairs exhausted")),
            ..Witness::default()
        };
        Self::new(tag, Verdict::BudgetExceeded, w)
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }
}

/// Tunables for the checks. Defaults follow the thresholds in the conditions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOptions {
    pub budget: usize,
    pub squarefree_trials: u32,
    pub seed: u64,
    /// Minimal rank at singular points of `F1`.
    pub r01_min_rank: usize,
    /// Minimal rank of a quadratic point.
    pub r21_min_rank: usize,
    /// Minimal codimension of `Sing Q` in the exceptional intersection `Q`.
    pub r31_min_codim: i64,
    /// Largest number of projective points scanned when listing singular points.
    pub point_scan_limit: usize,
    pub pencil_samples: usize,
    /// Record wall-clock times (makes reports non-reproducible byte for byte).
    pub timing: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            budget: StepBudget::default().0,
            squarefree_trials: 8,
            seed: 0,
            r01_min_rank: 5,
            r21_min_rank: 9,
            r31_min_codim: 11,
            point_scan_limit: 200_000,
            pencil_samples: 8,
            timing: false,
        }
    }
}

fn fmt_point<F: Field>(field: &F, p: &[F::Elem]) -> Vec<String> {
    p.iter().map(|c| field.format(c)).collect()
}

fn check_pair<F: Field>(f1: &MultiPoly<F>, f2: &MultiPoly<F>, setup: &AmbientSetup) -> Result<()> {
    setup.validate()?;
    let n = setup.homogeneous_vars();
    for (name, f, d) in [("f1", f1, setup.d1), ("f2", f2, setup.d2)] {
        if f.is_zero() {
            return Err(Error::Input(format!("{name} is zero")));
        }
        if f.nvars() != n {
            return Err(Error::Input(format!(
                "{name} has {} variables, expected M + 3 = {n}",
                f.nvars()
            )));
        }
        if f.homogeneous_degree() != Some(d) {
            return Err(Error::Input(format!(
                "{name} is not homogeneous of degree {d}"
            )));
        }
    }
    Ok(())
}

fn timed<T>(on: bool, f: impl FnOnce() -> T) -> (T, Option<u64>) {
    let start = Instant::now();
    let out = f();
    (out, on.then(|| start.elapsed().as_millis() as u64))
}

/// Global conditions R0.1 and R0.2.
pub fn check_global<F: Field>(
    f1: &MultiPoly<F>,
    f2: &MultiPoly<F>,
    setup: &AmbientSetup,
    opts: &CheckOptions,
) -> Result<Vec<ConditionReport>> {
    check_pair(f1, f2, setup)?;
    let (r01, t1) = timed(opts.timing, || check_r01(f1, setup, opts));
    let (r02, t2) = timed(opts.timing, || check_r02(f1, f2, setup, opts));
    let mut r01 = r01?;
    let mut r02 = r02?;
    r01.elapsed_ms = t1;
    r02.elapsed_ms = t2;
    Ok(vec![r01, r02])
}

fn check_r01<F: Field>(
    f1: &MultiPoly<F>,
    setup: &AmbientSetup,
    opts: &CheckOptions,
) -> Result<ConditionReport> {
    let tag = ConditionTag::R01;
    let field = f1.field();
    let n = setup.homogeneous_vars();
    let chain = "irreducibility of F1 follows from squarefreeness and codim(Sing F1 in F1) >= 2";
    if !squarefree_probabilistic(f1, opts.squarefree_trials, opts.seed)? {
        let w = Witness {
            message: Some(format!(
                "every one of {} random lines meets F1 with a repeated root",
                opts.squarefree_trials
            )),
            ..Witness::default()
        };
        return Ok(ConditionReport::new(tag, Verdict::Fail, w).note("f1 has a square factor"));
    }
    let ideal = IdealBasis::new(field, n, vec![f1.clone()])?;
    let s = match singular_locus_dimension(&ideal, 1, StepBudget(opts.budget)) {
        Ok((s, _)) => s,
        Err(Error::BudgetExceeded { budget }) => return Ok(ConditionReport::budget(tag, budget)),
        Err(e) => return Err(e),
    };
    let dim_f1 = n as i64 - 2;
    if dim_f1 - s < 2 {
        let w = Witness {
            singular_locus_dimension: Some(s),
            message: Some(format!("codim(Sing F1 in F1) = {} < 2", dim_f1 - s)),
            ..Witness::default()
        };
        return Ok(ConditionReport::new(tag, Verdict::Fail, w).note(chain));
    }
    let base = Witness {
        singular_locus_dimension: Some(s),
        ..Witness::default()
    };
    if s < 0 {
        return Ok(ConditionReport::new(tag, Verdict::Pass, base)
            .note(chain)
            .note("F1 is nonsingular"));
    }
    let (points, complete) = match singular_points(f1, opts) {
        Ok(found) => found,
        Err(Error::BudgetExceeded { budget }) => return Ok(ConditionReport::budget(tag, budget)),
        Err(e) => return Err(e),
    };
    let rank_note = "rank 5 is read as rank >= 5";
    for p in &points {
        let exp = homogeneous_expansion(f1, f1, p)?;
        let q = exp.q(1, 2);
        let r = QuadraticForm::from_poly(&q)?.rank();
        if r < opts.r01_min_rank {
            let w = Witness {
                rank: Some(r),
                singular_locus_dimension: Some(s),
                singular_point: Some(fmt_point(field, p)),
                message: Some(format!(
                    "singular point of rank {r} < {}",
                    opts.r01_min_rank
                )),
                ..Witness::default()
            };
            return Ok(ConditionReport::new(tag, Verdict::Fail, w)
                .note(chain)
                .note(rank_note));
        }
    }
    let min_rank = points
        .iter()
        .map(|p| {
            let exp = homogeneous_expansion(f1, f1, p).expect("checked above");
            QuadraticForm::from_poly(&exp.q(1, 2))
                .expect("checked above")
                .rank()
        })
        .min();
    let w = Witness {
        rank: min_rank,
        ..base
    };
    let report = ConditionReport::new(
        tag,
        if complete {
            Verdict::Pass
        } else {
            Verdict::Partial
        },
        w,
    )
    .note(chain)
    .note(rank_note)
    .note(format!("{} singular point(s) checked", points.len()));
    Ok(if complete {
        report
    } else {
        report.note("singular locus not exhaustively enumerated")
    })
}

/// Singular points of `F1`, and whether the list is known to be complete.
///
/// A complete list comes either from linear forms in the singular ideal that
/// pin down a single point, or from scanning all points of a small prime field.
fn singular_points<F: Field>(
    f1: &MultiPoly<F>,
    opts: &CheckOptions,
) -> Result<(Vec<Vec<F::Elem>>, bool)> {
    let field = f1.field();
    let n = f1.nvars();
    let mut gens = vec![f1.clone()];
    gens.extend((0..n).map(|v| f1.derivative(v)).filter(|g| !g.is_zero()));
    let ideal = IdealBasis::new(field, n, gens.clone())?;
    let gb = groebner_basis(&ideal, StepBudget(opts.budget))?;

    let mut rows: Vec<Vec<F::Elem>> = gb
        .basis
        .iter()
        .filter_map(|g| g.linear_coefficients())
        .collect();
    for v in 0..n {
        let x = MultiPoly::var(field, n, v);
        if (1..=4).any(|e| gb.contains(&x.pow(e))) {
            let mut r = vec![field.zero(); n];
            r[v] = field.one();
            rows.push(r);
        }
    }
    if let Some(p) = unique_kernel_point(field, rows, n) {
        return Ok((vec![p], true));
    }
    if field.elements().is_some() {
        let scan = enumerate_points(&gens, opts.point_scan_limit)?;
        if !scan.truncated {
            return Ok((scan.points, true));
        }
        return Ok((scan.points, false));
    }
    Ok((Vec::new(), false))
}

/// The projective point spanning the kernel of `rows`, if the kernel is a line.
fn unique_kernel_point<F: Field>(
    field: &F,
    mut rows: Vec<Vec<F::Elem>>,
    n: usize,
) -> Option<Vec<F::Elem>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(&rows[r][c]).unwrap();
        rows[r] = rows[r].iter().map(|x| field.mul(x, &inv)).collect();
        for i in 0..rows.len() {
            if i != r && !field.is_zero(&rows[i][c]) {
                let s = rows[i][c].clone();
                rows[i] = rows[i]
                    .iter()
                    .zip(&rows[r])
                    .map(|(a, b)| field.sub(a, &field.mul(&s, b)))
                    .collect();
            }
        }
        pivots.push(c);
        r += 1;
    }
    if r + 1 != n {
        return None;
    }
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let mut p = vec![field.zero(); n];
    p[free] = field.one();
    for (i, &c) in pivots.iter().enumerate() {
        p[c] = field.neg(&rows[i][free]);
    }
    Some(p)
}

fn check_r02<F: Field>(
    f1: &MultiPoly<F>,
    f2: &MultiPoly<F>,
    setup: &AmbientSetup,
    opts: &CheckOptions,
) -> Result<ConditionReport> {
    let tag = ConditionTag::R02;
    let field = f1.field();
    let n = setup.homogeneous_vars();
    let chain = "f2|F1 is irreducible and reduced since V is a connected complete intersection smooth in codimension 1";
    if f2.remainder(f1).is_zero() {
        let w = Witness {
            message: Some("f1 divides f2".into()),
            ..Witness::default()
        };
        return Ok(ConditionReport::new(tag, Verdict::Fail, w));
    }
    let ideal = IdealBasis::new(field, n, vec![f1.clone(), f2.clone()])?;
    let budget = StepBudget(opts.budget);
    let dim_v = match projective_dimension(&ideal, budget) {
        Ok((d, _)) => d,
        Err(Error::BudgetExceeded { budget }) => return Ok(ConditionReport::budget(tag, budget)),
        Err(e) => return Err(e),
    };
    let expected = setup.m as i64;
    if dim_v != expected {
        let w = Witness {
            dimension: Some(dim_v),
            message: Some(format!("V has dimension {dim_v}, expected {expected}")),
            ..Witness::default()
        };
        return Ok(ConditionReport::new(tag, Verdict::Fail, w));
    }
    // Sing V missing a general linear space of codimension M - 1 already
    // proves codim(Sing V in V) >= 2.
    match singular_locus_at_most(&ideal, 2, expected - 2, opts.seed, budget) {
        Ok((true, _)) => {
            let w = Witness {
                dimension: Some(dim_v),
                singular_locus_dimension_at_most: Some(expected - 2),
                ..Witness::default()
            };
            return Ok(ConditionReport::new(tag, Verdict::Pass, w).note(chain));
        }
        Ok((false, _)) => {}
        Err(Error::BudgetExceeded { budget }) => return Ok(ConditionReport::budget(tag, budget)),
        Err(e) => return Err(e),
    }
    let s = match singular_locus_dimension(&ideal, 2, budget) {
        Ok((s, _)) => s,
        Err(Error::BudgetExceeded { budget }) => return Ok(ConditionReport::budget(tag, budget)),
        Err(e) => return Err(e),
    };
    let codim = expected - s;
    let mut w = Witness {
        dimension: Some(dim_v),
        singular_locus_dimension: Some(s),
        ..Witness::default()
    };
    if s >= 0 && codim < 2 {
        w.message = Some(format!("codim(Sing V in V) = {codim} < 2"));
        return Ok(ConditionReport::new(tag, Verdict::Fail, w));
    }
    Ok(ConditionReport::new(tag, Verdict::Pass, w).note(chain))
}

/// Local conditions at a point of `V`.
pub fn check_local<F: Field>(
    f1: &MultiPoly<F>,
    f2: &MultiPoly<F>,
    setup: &AmbientSetup,
    o: &[F::Elem],
    opts: &CheckOptions,
) -> Result<Vec<ConditionReport>> {
    check_pair(f1, f2, setup)?;
    let exp = homogeneous_expansion(f1, f2, o)?;
    let class = classify_point(&exp);
    let tags: &[ConditionTag] = match class {
        PointClass::Smooth => &[ConditionTag::R1],
        PointClass::Quadratic { .. } => &[ConditionTag::R21, ConditionTag::R22],
        PointClass::Biquadratic => &[ConditionTag::R31, ConditionTag::R32],
    };
    let point = fmt_point(f1.field(), exp.point());
    let mut out = Vec::new();
    for &tag in tags {
        let (r, t) = timed(opts.timing, || evaluate_local(&exp, &class, tag, opts));
        let mut r = r?;
        r.point = Some(point.clone());
        r.elapsed_ms = t;
        out.push(r);
    }
    Ok(out)
}

/// Evaluates one local condition. Panics if `tag` does not belong to the
/// point type, so a mis-dispatch can never produce a verdict.
pub fn evaluate_local<F: Field>(
    exp: &HomogeneousExpansion<F>,
    class: &PointClass<F::Elem>,
    tag: ConditionTag,
    opts: &CheckOptions,
) -> Result<ConditionReport> {
    let allowed = matches!(
        (class, tag),
        (PointClass::Smooth, ConditionTag::R1)
            | (
                PointClass::Quadratic { .. },
                ConditionTag::R21 | ConditionTag::R22
            )
            | (
                PointClass::Biquadratic,
                ConditionTag::R31 | ConditionTag::R32
            )
    );
    assert!(allowed, "{tag} dispatched at a {} point", class.name());
    match tag {
        ConditionTag::R1 => check_sequence(exp, SequenceTag::R1, tag, opts),
        ConditionTag::R22 => check_sequence(exp, SequenceTag::R22, tag, opts),
        ConditionTag::R32 => check_sequence(exp, SequenceTag::R32, tag, opts),
        ConditionTag::R21 => check_r21(exp, class, opts),
        ConditionTag::R31 => check_r31(exp, opts),
        ConditionTag::R01 | ConditionTag::R02 => unreachable!(),
    }
}

fn check_sequence<F: Field>(
    exp: &HomogeneousExpansion<F>,
    seq_tag: SequenceTag,
    tag: ConditionTag,
    opts: &CheckOptions,
) -> Result<ConditionReport> {
    let seq = condition_sequence(exp, seq_tag)?;
    if seq.is_empty() {
        return Ok(
            ConditionReport::new(tag, Verdict::Pass, Witness::default()).note("empty sequence")
        );
    }
    let outcome = match is_regular_sequence(
        exp.field(),
        seq.nvars,
        &seq.forms(),
        StepBudget(opts.budget),
    ) {
        Ok(o) => o,
        Err(Error::BudgetExceeded { budget }) => return Ok(ConditionReport::budget(tag, budget)),
        Err(e) => return Err(e),
    };
    let mut w = Witness {
        prefix_dimensions: Some(outcome.prefix_dimensions.clone()),
        achieved_codim: Some(outcome.achieved_codim),
        ..Witness::default()
    };
    if outcome.regular {
        return Ok(ConditionReport::new(tag, Verdict::Pass, w));
    }
    let idx = outcome.first_failure.unwrap();
    w.failing_index = Some(idx);
    w.failing_form = seq.entries.get(idx - 1).map(|e| e.index.to_string());
    w.message = Some(outcome.diagnostic.unwrap_or_else(|| {
        format!("form {idx} does not cut the dimension of the preceding zero set")
    }));
    Ok(ConditionReport::new(tag, Verdict::Fail, w))
}

fn check_r21<F: Field>(
    exp: &HomogeneousExpansion<F>,
    class: &PointClass<F::Elem>,
    opts: &CheckOptions,
) -> Result<ConditionReport> {
    let tag = ConditionTag::R21;
    let field = exp.field();
    let PointClass::Quadratic { lambda, star } = class else {
        unreachable!()
    };
    let rank = QuadraticForm::from_poly(&point_quadric(exp)?)?.rank();
    let w = Witness {
        rank: Some(rank),
        lambda: Some(field.format(lambda)),
        message: (rank < opts.r21_min_rank).then(|| format!("rank {rank} < {}", opts.r21_min_rank)),
        ..Witness::default()
    };
    let verdict = if rank >= opts.r21_min_rank {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(ConditionReport::new(tag, verdict, w).note(format!("nonzero linear form q{star},1")))
}

/// The exceptional intersection `Q = {q12 = q22 = 0}` in the projectivized
/// tangent space must be a complete intersection whose singular locus has
/// codimension at least `r31_min_codim`, or be nonsingular.
fn check_r31<F: Field>(
    exp: &HomogeneousExpansion<F>,
    opts: &CheckOptions,
) -> Result<ConditionReport> {
    let tag = ConditionTag::R31;
    let field = exp.field();
    let n = exp.affine_vars();
    let q12 = exp.q(1, 2);
    let q22 = exp.q(2, 2);
    let budget = StepBudget(opts.budget);
    let reg = match is_regular_sequence(field, n, &[q12.clone(), q22.clone()], budget) {
        Ok(o) => o,
        Err(Error::BudgetExceeded { budget }) => return Ok(ConditionReport::budget(tag, budget)),
        Err(e) => return Err(e),
    };
    let mut notes = Vec::new();
    let g1 = QuadraticForm::from_poly(&q12)?;
    let g2 = QuadraticForm::from_poly(&q22)?;
    let prof = pencil_rank_profile(&g1, &g2, opts.pencil_samples, opts.seed)?;
    let at_inf = prof
        .samples
        .iter()
        .find(|s| s.0 == PencilParam::Infinity)
        .map(|s| s.1)
        .unwrap_or(0);
    notes.push(format!(
        "pencil ranks: q12 {at_inf}, minimum observed {}",
        prof.min_observed
    ));
    if let Some(m) = prof.exact_minimum {
        notes.push(format!("pencil minimum rank over the closure {m}"));
    }
    if !reg.regular {
        let w = Witness {
            dimension: reg.prefix_dimensions.last().copied(),
            failing_index: reg.first_failure,
            message: Some("q12, q22 do not cut a complete intersection".into()),
            ..Witness::default()
        };
        let mut r = ConditionReport::new(tag, Verdict::Fail, w);
        r.notes = notes;
        return Ok(r);
    }
    let dim_q = n as i64 - 3;
    let ideal = IdealBasis::new(field, n, vec![q12, q22])?;
    let s = match singular_locus_dimension(&ideal, 2, budget) {
        Ok((s, _)) => s,
        Err(Error::BudgetExceeded { budget }) => return Ok(ConditionReport::budget(tag, budget)),
        Err(e) => return Err(e),
    };
    let mut w = Witness {
        dimension: Some(dim_q),
        singular_locus_dimension: Some(s),
        ..Witness::default()
    };
    let ok = s < 0 || dim_q - s >= opts.r31_min_codim;
    if !ok {
        w.message = Some(format!(
            "codim(Sing Q in Q) = {} < {}",
            dim_q - s,
            opts.r31_min_codim
        ));
    }
    let mut r = ConditionReport::new(tag, if ok { Verdict::Pass } else { Verdict::Fail }, w);
    r.notes = notes;
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointReport {
    pub point: Vec<String>,
    pub class: String,
    pub reports: Vec<ConditionReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub overall: Verdict,
    pub global: Vec<ConditionReport>,
    pub local: Vec<PointReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl MembershipReport {
    pub fn all_reports(&self) -> impl Iterator<Item = &ConditionReport> + '_ {
        self.global
            .iter()
            .chain(self.local.iter().flat_map(|p| p.reports.iter()))
    }

    /// Reports with a fail verdict.
    pub fn failures(&self) -> Vec<&ConditionReport> {
        self.all_reports()
            .filter(|r| r.verdict == Verdict::Fail)
            .collect()
    }
}

/// Global checks once and local checks at every point, in input order.
pub fn membership_report<F: Field>(
    f1: &MultiPoly<F>,
    f2: &MultiPoly<F>,
    setup: &AmbientSetup,
    points: &[Vec<F::Elem>],
    opts: &CheckOptions,
) -> Result<MembershipReport> {
    let global = check_global(f1, f2, setup, opts)?;
    let mut local = Vec::with_capacity(points.len());
    for o in points {
        let exp = homogeneous_expansion(f1, f2, o)?;
        let reports = check_local(f1, f2, setup, o, opts)?;
        local.push(PointReport {
            point: fmt_point(f1.field(), exp.point()),
            class: classify_point(&exp).name().to_string(),
            reports,
        });
    }
    let mut overall = Verdict::combine(
        global
            .iter()
            .chain(local.iter().flat_map(|p| p.reports.iter()))
            .map(|r| r.verdict),
    );
    let mut notes = Vec::new();
    if points.is_empty() {
        notes.push("no points supplied; local conditions unchecked".into());
        if overall == Verdict::Pass {
            overall = Verdict::Partial;
        }
    }
    if setup.m < 13 {
        notes.push(format!(
            "M = {} is below the range M >= 13 of the theorems",
            setup.m
        ));
    }
    Ok(MembershipReport {
        overall,
        global,
        local,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldpoly::PrimeField;

    fn xs(f: &PrimeField, n: usize) -> Vec<MultiPoly<PrimeField>> {
        (0..n).map(|i| MultiPoly::var(f, n, i)).collect()
    }

    fn sum_sq(x: &[MultiPoly<PrimeField>]) -> MultiPoly<PrimeField> {
        x.iter()
            .fold(MultiPoly::zero(x[0].field(), x[0].nvars()), |a, v| {
                &a + &v.pow(2)
            })
    }

    #[test]
    fn cone_passes_r01() {
        // M = 4, d1 = 2, d2 = 4: f1 = x0^2 + ... + x5^2 is a rank 6 cone over [0:...:0:1]
        let f = PrimeField::new(101).unwrap();
        let x = xs(&f, 7);
        let f1 = sum_sq(&x[..6]);
        let f2 = &x[6].pow(4) + &x[0].pow(4);
        let setup = AmbientSetup::new(4, 2, 4).unwrap();
        let g = check_global(&f1, &f2, &setup, &CheckOptions::default()).unwrap();
        assert_eq!(g[0].tag, ConditionTag::R01);
        assert_eq!(g[0].verdict, Verdict::Pass, "{:?}", g[0]);
        assert_eq!(g[0].witness.rank, Some(6));
    }

    #[test]
    fn reducible_f1_fails_r01() {
        let f = PrimeField::new(101).unwrap();
        let x = xs(&f, 7);
        let f1 = &(&x[0] + &x[1]) * &(&x[2] + &x[3]);
        let f2 = sum_sq(&x).pow(2);
        let setup = AmbientSetup::new(4, 2, 4).unwrap();
        let g = check_global(&f1, &f2, &setup, &CheckOptions::default()).unwrap();
        assert_eq!(g[0].verdict, Verdict::Fail);
        assert!(!g[0].witness.is_empty());
    }

    #[test]
    fn divisibility_fails_r02() {
        let f = PrimeField::new(101).unwrap();
        let x = xs(&f, 7);
        let f1 = sum_sq(&x);
        let f2 = &f1 * &(&x[0].pow(2) + &x[3].pow(2));
        let setup = AmbientSetup::new(4, 2, 4).unwrap();
        let g = check_global(&f1, &f2, &setup, &CheckOptions::default()).unwrap();
        assert_eq!(g[1].verdict, Verdict::Fail);
        assert_eq!(g[1].witness.message.as_deref(), Some("f1 divides f2"));
    }

    #[test]
    fn verdict_combination() {
        use Verdict::*;
        assert_eq!(
            Verdict::combine([Pass, Partial, BudgetExceeded]),
            BudgetExceeded
        );
        assert_eq!(Verdict::combine([Pass, Fail, BudgetExceeded]), Fail);
        assert_eq!(Verdict::combine([Pass, Partial]), Partial);
        assert_eq!(Verdict::combine([]), Pass);
        assert_eq!(Fail.exit_code(), 1);
    }

    #[test]
    fn kernel_point() {
        let f = PrimeField::new(7).unwrap();
        let rows = vec![vec![1, 0, 0], vec![0, 1, 6]];
        assert_eq!(unique_kernel_point(&f, rows, 3), Some(vec![0, 1, 1]));
        assert_eq!(unique_kernel_point(&f, vec![vec![1, 0, 0]], 3), None);
    }
}
