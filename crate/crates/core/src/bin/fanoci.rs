use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use fanoci::bounds::{
    admissible_splits, beta_sweep, exclusion_margins, graph_bound_sweep, hypertangent_chain,
    improved_4n2_sweep, method1_table, prop35_sweep, theorem02_minimum, ChainResult, ChainVariant,
    Check, Regime, MIN_THEOREM_M,
};
use fanoci::conditions::{CheckOptions, MembershipReport, Verdict};
use fanoci::error::{Error, Result};
use fanoci::expansion::AmbientSetup;
use fanoci::fieldpoly::Field;
use fanoci::harness::{
    check_document, classify_document, empirical_stats, gb_document, sample_pair_at, sample_points,
    GbDocument, PairDocument, SampleSpec,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Parser)]
#[command(
    name = "fanoci",
    version,
    about = "Regularity conditions and exact bounds for codimension-2 Fano complete intersections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
}

#[derive(Args, Clone)]
struct Dims {
    #[arg(long = "M")]
    m: Option<usize>,
    #[arg(long)]
    d1: Option<u32>,
    #[arg(long)]
    d2: Option<u32>,
}

#[derive(Args, Clone)]
struct Engine {
    /// Gröbner s-pair budget.
    #[arg(long, default_value_t = CheckOptions::default().budget)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Clone)]
struct DocInput {
    /// Pair document (JSON); `-` reads stdin.
    input: PathBuf,
    /// Extra points: a JSON array of coordinate lists, or one point per line.
    #[arg(long)]
    points_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Per-condition codimension ledger, Method 1 tables and the θ_b sweep.
    Bounds {
        #[command(flatten)]
        dims: Dims,
    },
    /// Hypertangent products against their closed forms.
    Chains {
        #[arg(long)]
        d1: Option<u32>,
        #[arg(long)]
        d2: Option<u32>,
        #[arg(long)]
        variant: Option<String>,
    },
    /// Multiplicity inequalities and exclusion margins.
    Inequalities {
        #[arg(long, default_value_t = 6)]
        d1: u32,
        #[arg(long, default_value_t = 9)]
        d2: u32,
        /// Largest denominator of the rational grids.
        #[arg(long, default_value_t = 64)]
        den: i128,
    },
    /// Classify points of V as smooth, quadratic or biquadratic.
    Classify {
        #[command(flatten)]
        doc: DocInput,
    },
    /// Global and local regularity checks.
    Check {
        #[command(flatten)]
        doc: DocInput,
        #[command(flatten)]
        engine: Engine,
        /// Points to sample from V when the document lists none.
        #[arg(long, default_value_t = 0)]
        sample: usize,
    },
    /// Emit one random pair as a document.
    Sample {
        #[command(flatten)]
        dims: Dims,
        #[arg(long, default_value_t = 101)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        index: usize,
        /// Attach this many sampled points of V.
        #[arg(long, default_value_t = 0)]
        points: usize,
    },
    /// Check a stream of random pairs and count failures per condition.
    Stats {
        #[command(flatten)]
        dims: Dims,
        #[arg(long, default_value_t = 101)]
        p: u64,
        #[command(flatten)]
        engine: Engine,
        #[arg(long, default_value_t = 1.0)]
        density: f64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Sampled points per pair.
        #[arg(long, default_value_t = 10)]
        points: usize,
    },
    /// Reduced Gröbner basis of an ideal document.
    Gb {
        input: PathBuf,
        #[arg(long, default_value_t = CheckOptions::default().budget)]
        budget: usize,
    },
}

struct Outcome {
    verdict: Verdict,
    text: String,
    structured: serde_json::Value,
}

impl Outcome {
    fn new(verdict: Verdict, text: String, value: impl Serialize) -> Self {
        Outcome {
            verdict,
            text,
            structured: serde_json::to_value(value).expect("report serializes"),
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

/// A JSON array of coordinate lists (strings or integers), or one point
/// per line with coordinates separated by commas or whitespace.
fn parse_points(text: &str) -> Result<Vec<Vec<String>>> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        let raw: Vec<Vec<serde_json::Value>> = serde_json::from_str(trimmed)?;
        return raw
            .into_iter()
            .map(|p| {
                p.into_iter()
                    .map(|c| match c {
                        serde_json::Value::String(s) => Ok(s),
                        serde_json::Value::Number(n) => Ok(n.to_string()),
                        other => Err(Error::Input(format!("bad coordinate {other}"))),
                    })
                    .collect()
            })
            .collect();
    }
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect()
        })
        .collect())
}

fn load_doc(d: &DocInput) -> Result<(PairDocument, Vec<Vec<String>>)> {
    let doc = PairDocument::from_json(&read_input(&d.input)?)?;
    let extra = match &d.points_file {
        Some(p) => parse_points(&std::fs::read_to_string(p)?)?,
        None => Vec::new(),
    };
    Ok((doc, extra))
}

fn scope_notice(m: usize) {
    if m < MIN_THEOREM_M {
        eprintln!("notice: M = {m} is below {MIN_THEOREM_M}; the genericity statements only apply from M = {MIN_THEOREM_M} on");
    }
}

fn setup_of(dims: &Dims) -> Result<AmbientSetup> {
    let (Some(m), Some(d1), Some(d2)) = (dims.m, dims.d1, dims.d2) else {
        return Err(Error::Input("--M, --d1 and --d2 are required".into()));
    };
    AmbientSetup::new(m, d1, d2)
}

fn failing(checks: &[Check]) -> impl Iterator<Item = &Check> {
    checks.iter().filter(|c| !c.holds)
}

fn bounds(dims: &Dims) -> Result<Outcome> {
    let m = dims.m.unwrap_or(MIN_THEOREM_M);
    scope_notice(m);
    let splits: Vec<(u32, u32)> = match (dims.d1, dims.d2) {
        (Some(a), Some(b)) => vec![(a, b)],
        (Some(a), None) => vec![(a, (m as u32 + 2).saturating_sub(a))],
        (None, Some(b)) => vec![((m as u32 + 2).saturating_sub(b), b)],
        (None, None) => admissible_splits(m),
    };
    let single = splits.len() == 1;
    let mut text = String::new();
    let mut values = Vec::new();
    let mut ok = true;
    for (d1, d2) in splits {
        let ledger = theorem02_minimum(m, d1, d2)?;
        let tables = [
            method1_table(m, d1, d2, Regime::Smooth)?,
            method1_table(m, d1, d2, Regime::Singular)?,
        ];
        let sweeps = [
            prop35_sweep(m, d1, d2, Regime::Smooth)?,
            prop35_sweep(m, d1, d2, Regime::Singular)?,
        ];
        let split_ok = ledger.ok()
            && tables.iter().all(|t| t.required.ok())
            && sweeps.iter().all(|s| s.passed);
        ok &= split_ok;
        if single {
            let _ = writeln!(text, "ledger M={m} d1={d1} d2={d2}");
            for e in &ledger.entries {
                let _ = writeln!(
                    text,
                    "  {:<11} {:>8}   {}",
                    e.tag.as_str(),
                    e.value,
                    e.formula
                );
            }
            let tags: Vec<&str> = ledger.minimum_tags.iter().map(|t| t.as_str()).collect();
            let _ = writeln!(
                text,
                "minimum {} ({}), target {}",
                ledger.minimum,
                tags.join(", "),
                ledger.target
            );
            for c in &ledger.checks {
                let _ = writeln!(text, "  {c}");
            }
            for t in &tables {
                text.push('\n');
                text.push_str(&t.to_text());
            }
            for s in &sweeps {
                let _ = writeln!(text, "\ntheta_b, {} profile, target {}", s.regime, s.target);
                for r in &s.rows {
                    let _ = writeln!(
                        text,
                        "  b={:<3} theta={:<8} worst={}",
                        r.b, r.actual, r.worst
                    );
                }
                let _ = writeln!(text, "  plane count {}", s.plane);
                for c in failing(&s.checks) {
                    let _ = writeln!(text, "  {c}");
                }
                let _ = writeln!(
                    text,
                    "  {} of {} checks hold",
                    s.checks.iter().filter(|c| c.holds).count(),
                    s.checks.len()
                );
            }
            for w in &ledger.warnings {
                let _ = writeln!(text, "warning: {w}");
            }
        } else {
            let _ = writeln!(
                text,
                "M={m} d1={d1} d2={d2}: minimum {} target {} ledger {} method1 {}/{} theta {}/{}",
                ledger.minimum,
                ledger.target,
                mark(ledger.ok()),
                mark(tables[0].required.ok()),
                mark(tables[1].required.ok()),
                mark(sweeps[0].passed),
                mark(sweeps[1].passed),
            );
        }
        values.push(json!({ "ledger": ledger, "method1": tables, "theta": sweeps }));
    }
    let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
    let _ = writeln!(text, "verdict: {verdict}");
    let structured = if single {
        values.pop().expect("one split")
    } else {
        serde_json::Value::Array(values)
    };
    Ok(Outcome::new(verdict, text, structured))
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn chain_line(r: &ChainResult) -> String {
    let mut s = format!(
        "{:<8} d1={} d2={}: product {} closed form {} = {} [{}]",
        r.variant.as_str(),
        r.d1,
        r.d2,
        r.product,
        r.closed_form_text,
        r.closed_form,
        mark(r.identity_holds)
    );
    if let Some(t) = &r.threshold {
        let _ = write!(s, "; {t}");
    }
    for f in &r.flags {
        let _ = write!(s, "; flag: {f}");
    }
    s
}

fn chains(d1: Option<u32>, d2: Option<u32>, variant: Option<&str>) -> Result<Outcome> {
    let variants = match variant {
        Some(v) => vec![ChainVariant::parse(v)
            .ok_or_else(|| Error::Input(format!("unknown chain variant {v:?}")))?],
        None => ChainVariant::ALL.to_vec(),
    };
    let pairs: Vec<(u32, u32)> = match (d1, d2) {
        (Some(a), Some(b)) => vec![(a, b)],
        (None, None) => (3..=31)
            .flat_map(|a| (a..=62 - a).map(move |b| (a, b)))
            .collect(),
        _ => {
            return Err(Error::Input(
                "give both --d1 and --d2, or neither for the full sweep".into(),
            ))
        }
    };
    let single = pairs.len() == 1;
    let mut results = Vec::new();
    for (a, b) in pairs {
        for &v in &variants {
            results.push(hypertangent_chain(a, b, v)?);
        }
    }
    let ok = results.iter().all(ChainResult::ok);
    let mut text = String::new();
    if single {
        for r in &results {
            let _ = writeln!(text, "{}", chain_line(r));
        }
    } else {
        for r in results.iter().filter(|r| !r.ok()) {
            let _ = writeln!(text, "{}", chain_line(r));
        }
        let flagged = results.iter().filter(|r| !r.flags.is_empty()).count();
        let _ = writeln!(
            text,
            "{} chains over 3 <= d1 <= d2, d1 + d2 <= 62: {} ok, {} flagged",
            results.len(),
            results.iter().filter(|r| r.ok()).count(),
            flagged
        );
    }
    let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
    let _ = writeln!(text, "verdict: {verdict}");
    Ok(Outcome::new(verdict, text, &results))
}

fn inequalities(d1: u32, d2: u32, den: i128) -> Result<Outcome> {
    if den < 1 {
        return Err(Error::Input("--den must be positive".into()));
    }
    let sweeps = [
        improved_4n2_sweep(den),
        beta_sweep(den),
        graph_bound_sweep(den),
    ];
    let margins = exclusion_margins(d1, d2)?;
    let ok = sweeps.iter().all(|s| s.ok()) && margins.iter().all(Check::ok);
    let mut text = String::new();
    for s in &sweeps {
        let _ = writeln!(
            text,
            "{} on {} grid points: minimum {} at {}",
            s.name, s.points, s.minimum, s.argmin
        );
        for c in &s.checks {
            let _ = writeln!(text, "  {c}");
        }
    }
    let _ = writeln!(text, "exclusion margins, d1={d1} d2={d2}");
    for c in &margins {
        let _ = writeln!(text, "  {c}");
    }
    let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
    let _ = writeln!(text, "verdict: {verdict}");
    Ok(Outcome::new(
        verdict,
        text,
        json!({ "sweeps": sweeps, "exclusion_margins": margins }),
    ))
}

fn classify(d: &DocInput) -> Result<Outcome> {
    let (doc, extra) = load_doc(d)?;
    scope_notice(doc.setup.m);
    let points = classify_document(&doc, &extra)?;
    let mut text = String::new();
    for p in &points {
        let _ = write!(text, "({}) {}", p.point.join(", "), p.class);
        if let (Some(l), Some(r)) = (&p.lambda, p.rank) {
            let _ = write!(text, " lambda={l} rank={r}");
        }
        text.push('\n');
    }
    Ok(Outcome::new(Verdict::Pass, text, &points))
}

fn report_text(r: &MembershipReport) -> String {
    let mut text = String::new();
    let line = |text: &mut String, rep: &fanoci::conditions::ConditionReport| {
        let _ = write!(text, "  {:<5} {}", rep.tag.as_str(), rep.verdict);
        let w = serde_json::to_string(&rep.witness).expect("witness serializes");
        if w != "{}" {
            let _ = write!(text, " {w}");
        }
        text.push('\n');
    };
    let _ = writeln!(text, "global");
    for rep in &r.global {
        line(&mut text, rep);
    }
    for p in &r.local {
        let _ = writeln!(text, "point ({}) {}", p.point.join(", "), p.class);
        for rep in &p.reports {
            line(&mut text, rep);
        }
    }
    for n in &r.notes {
        let _ = writeln!(text, "note: {n}");
    }
    let _ = writeln!(text, "verdict: {}", r.overall);
    text
}

fn check(d: &DocInput, engine: &Engine, sample: usize) -> Result<Outcome> {
    let (doc, extra) = load_doc(d)?;
    scope_notice(doc.setup.m);
    let opts = CheckOptions {
        budget: engine.budget,
        seed: engine.seed,
        ..CheckOptions::default()
    };
    let report = check_document(&doc, &extra, sample, &opts)?;
    Ok(Outcome::new(report.overall, report_text(&report), &report))
}

fn sample(
    dims: &Dims,
    p: u64,
    seed: u64,
    density: f64,
    index: usize,
    points: usize,
) -> Result<Outcome> {
    let setup = setup_of(dims)?;
    let spec = SampleSpec {
        setup,
        p,
        density,
        seed,
        count: index + 1,
    };
    let pair = sample_pair_at(&spec, index)?;
    let pts = if points > 0 {
        sample_points(&pair.f1, &pair.f2, points, seed)?
    } else {
        Vec::new()
    };
    let doc = PairDocument::new(setup, &pair.f1, &pair.f2, &pts);
    let field = pair.f1.field();
    let mut text = format!("f1 = {}\nf2 = {}\n", pair.f1, pair.f2);
    for pt in &pts {
        let coords: Vec<String> = pt.iter().map(|c| field.format(c)).collect();
        let _ = writeln!(text, "point ({})", coords.join(", "));
    }
    Ok(Outcome::new(Verdict::Pass, text, &doc))
}

fn stats(
    dims: &Dims,
    p: u64,
    engine: &Engine,
    density: f64,
    count: usize,
    points: usize,
) -> Result<Outcome> {
    let setup = setup_of(dims)?;
    scope_notice(setup.m);
    let spec = SampleSpec {
        setup,
        p,
        density,
        seed: engine.seed,
        count,
    };
    let opts = CheckOptions {
        budget: engine.budget,
        seed: engine.seed,
        ..CheckOptions::default()
    };
    let report = empirical_stats(&spec, points, &opts)?;
    let mut text = format!(
        "{} pairs, M={} d1={} d2={} over F_{p}, {points} points each\n",
        count, setup.m, setup.d1, setup.d2
    );
    for (tag, n) in &report.evaluations {
        let fails = report.failures.get(tag).copied().unwrap_or(0);
        let budget = report.budget_exceeded.get(tag).copied().unwrap_or(0);
        let _ = writeln!(
            text,
            "  {:<5} {fails} fail / {n} evaluated, {budget} over budget",
            tag.as_str()
        );
    }
    for (k, n) in &report.overall {
        let _ = writeln!(text, "  pairs {k}: {n}");
    }
    for run in report
        .pairs
        .iter()
        .filter(|r| r.overall == Some(Verdict::Fail) || r.error.is_some())
    {
        let _ = writeln!(text, "  reproduce pair {}: {}", run.index, run.reproducer);
    }
    let verdict = report.verdict();
    let _ = writeln!(text, "verdict: {verdict}");
    Ok(Outcome::new(verdict, text, &report))
}

fn gb(input: &Path, budget: usize) -> Result<Outcome> {
    let doc = GbDocument::from_json(&read_input(input)?)?;
    let r = gb_document(&doc, budget)?;
    let mut text = String::new();
    for (g, lead) in r.basis.iter().zip(&r.leading) {
        let _ = writeln!(text, "{} terms, leading {:?}", g.len(), lead);
    }
    let _ = writeln!(text, "projective dimension {}", r.projective_dimension);
    let _ = writeln!(
        text,
        "{}",
        serde_json::to_string(&r.stats).expect("stats serialize")
    );
    Ok(Outcome::new(Verdict::Pass, text, &r))
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Bounds { dims } => bounds(dims),
        Command::Chains { d1, d2, variant } => chains(*d1, *d2, variant.as_deref()),
        Command::Inequalities { d1, d2, den } => inequalities(*d1, *d2, *den),
        Command::Classify { doc } => classify(doc),
        Command::Check {
            doc,
            engine,
            sample,
        } => check(doc, engine, *sample),
        Command::Sample {
            dims,
            p,
            seed,
            density,
            index,
            points,
        } => sample(dims, *p, *seed, *density, *index, *points),
        Command::Stats {
            dims,
            p,
            engine,
            density,
            count,
            points,
        } => stats(dims, *p, engine, *density, *count, *points),
        Command::Gb { input, budget } => gb(input, *budget),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Structured => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&out.structured).expect("report serializes")
                    )
                }
            }
            ExitCode::from(out.verdict.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::BudgetExceeded { .. } => 3,
                _ => 2,
            })
        }
    }
}
