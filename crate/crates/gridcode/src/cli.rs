//! Command-line experiments.
//!
//! Every command writes a self-describing report: CSV starts with a
//! `# gridcode <command> key=value ...` line naming every parameter,
//! and JSON carries the same set under `params`. Trial `i` of a run with
//! seed `s` draws from stream `i` of `s`; test inputs are built from
//! streams counted down from `u64::MAX`, so the two never overlap.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use gridcode_core::decoder::{decode_success_rate_with, DecodeMode, DecoderParams};
use gridcode_core::lowerbound::{span_size_for, t_span_contains, SpanCoefficients, SpanField, SpanInstance};
use gridcode_core::mc::{trial_rng, TrialRng};
use gridcode_core::oracle::{exact_delta_d, CodeSearch};
use gridcode_core::restrict::{
    exact_bucket_distribution, sample_buckets_cycle, sample_buckets_parent, sample_restriction_direct,
    sample_restriction_recursive,
};
use gridcode_core::tester::{estimate_rejection_probability_with, TesterParams};
use gridcode_core::tolerant::{tolerant_accept_rate_with, TolerantParams};
use gridcode_core::witness::{build_witness, verify_witness, SeparationMethod, Window};
use gridcode_core::{CubeFunction, Fraction, MultilinearPoly, PrimeField};

use crate::formats::{inline_polynomial, read_polynomial, read_truth_table, write_polynomial, write_truth_table};
use crate::runner::Parallel;

#[derive(Parser, Debug)]
#[command(name = "gridcode", version, about = "Seeded experiments on low-degree polynomial codes over {0,1}^n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Report format; `span` and `witness` default to json, the rest to csv.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rejection rate of the low-degree tester on corrupted polynomials.
    Test(TestArgs),
    /// Success rate of the local decoder on corrupted polynomials.
    Decode(DecodeArgs),
    /// Acceptance rate of the tolerant tester.
    Tolerant(TolerantArgs),
    /// Bucket-size distribution of random restrictions.
    Buckets(BucketArgs),
    /// Whether 1^n lies in the small span of random balanced vectors.
    Span(SpanArgs),
    /// Build and verify a dual witness.
    Witness(WitnessArgs),
    /// Exact distance of a truth table to the degree-d code.
    Oracle(OracleArgs),
    /// Convert between truth-table and polynomial files.
    Convert(ConvertArgs),
}

#[derive(Args, Debug)]
pub struct TestArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    /// Corruption rates, comma separated, as decimals or `a/b`.
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_fraction)]
    pub delta: Vec<Fraction>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    FullB,
    BPrime,
}

#[derive(Args, Debug)]
pub struct DecodeArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub d: u32,
    /// Corruption rates, comma separated; `tolerance` stands for the
    /// decoder's guaranteed tolerance.
    #[arg(long, value_delimiter = ',', default_value = "0,tolerance")]
    pub delta: Vec<String>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::FullB)]
    pub mode: ModeArg,
}

#[derive(Args, Debug)]
pub struct TolerantArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 1)]
    pub d: u32,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, value_parser = parse_fraction)]
    pub delta1: Fraction,
    #[arg(long, value_parser = parse_fraction)]
    pub delta2: Fraction,
    /// Restriction dimension.
    #[arg(long, default_value_t = 6)]
    pub k: u32,
    /// Sample size.
    #[arg(long, default_value_t = 200)]
    pub m: u64,
    /// Corruption rates of the inputs, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1/100,1/4", value_parser = parse_fraction)]
    pub corrupt: Vec<Fraction>,
    #[arg(long, default_value_t = 400)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sample points with replacement.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub replacement: bool,
    /// Repetitions of the step-1 tester.
    #[arg(long, default_value_t = 1)]
    pub reps: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SamplerArg {
    Cycle,
    Parent,
    Recursive,
    Direct,
}

#[derive(Args, Debug)]
pub struct BucketArgs {
    /// Ground-set size (the source dimension for restriction samplers).
    #[arg(long)]
    pub r: u32,
    #[arg(long)]
    pub k: u32,
    /// Exact distribution by enumeration instead of sampling.
    #[arg(long)]
    pub exact: bool,
    #[arg(long, value_enum, default_value_t = SamplerArg::Cycle)]
    pub sampler: SamplerArg,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct SpanArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub s: u32,
    /// Subset size; defaults to floor(log2 s / log2 log2 s).
    #[arg(long)]
    pub t: Option<usize>,
    /// Balanced vectors per trial.
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    /// `q` for the rationals or a prime.
    #[arg(long, default_value = "q")]
    pub field: String,
    #[arg(long, default_value_t = 20)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Affine instead of linear span.
    #[arg(long)]
    pub affine: bool,
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub d: u32,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    /// Window bounds; default (ceil(k/8), k - ceil(k/8)).
    #[arg(long, requires = "hi")]
    pub lo: Option<u32>,
    #[arg(long, requires = "lo")]
    pub hi: Option<u32>,
    /// Use the window (ceil(k/4), floor(3k/4)).
    #[arg(long, conflicts_with_all = ["lo", "hi"])]
    pub quarters: bool,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    /// Truth-table file.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub d: u32,
    /// Expected number of variables, checked against the file.
    #[arg(long)]
    pub n: Option<u32>,
    /// Expected field size, checked against the file.
    #[arg(long)]
    pub p: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FileKind {
    Table,
    Poly,
}

#[derive(Args, Debug)]
pub struct ConvertArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub from: FileKind,
    #[arg(long, value_enum)]
    pub to: FileKind,
}

/// Parses `a/b` or a decimal such as `0.025` into an exact fraction.
pub fn parse_fraction(s: &str) -> Result<Fraction, String> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: u64 = a.trim().parse().map_err(|_| format!("bad numerator in `{s}`"))?;
        let b: u64 = b.trim().parse().map_err(|_| format!("bad denominator in `{s}`"))?;
        if b == 0 {
            return Err(format!("zero denominator in `{s}`"));
        }
        return Ok(Fraction::new(a, b));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.len() > 15 || int.len() > 3 || !(int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())) {
        return Err(format!("`{s}` is not a decimal or a fraction a/b"));
    }
    if int.is_empty() && frac.is_empty() {
        return Err("empty number".into());
    }
    let den = 10u64.pow(frac.len() as u32);
    let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| format!("bad number `{s}`"))? };
    let fr: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| format!("bad number `{s}`"))? };
    Ok(Fraction::new(int * den + fr, den))
}

/// A tabular report with optional extra JSON fields.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub params: Vec<(&'static str, Value)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub extra: Map<String, Value>,
    pub default_format: Format,
}

impl Report {
    fn new(command: &'static str, params: Vec<(&'static str, Value)>, columns: Vec<&'static str>) -> Self {
        Report {
            command,
            params,
            columns,
            rows: Vec::new(),
            extra: Map::new(),
            default_format: Format::Csv,
        }
    }

    pub fn render(&self, format: Option<Format>) -> String {
        match format.unwrap_or(self.default_format) {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    fn to_csv(&self) -> String {
        let mut out = format!("# gridcode {}", self.command);
        for (k, v) in &self.params {
            out.push_str(&format!(" {k}={}", plain(v)));
        }
        for (k, v) in &self.extra {
            out.push_str(&format!(" {k}={}", plain(v)));
        }
        out.push('\n');
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| csv_cell(&plain(v))).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> String {
        let params: Map<String, Value> = self.params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect()))
            .collect();
        let mut obj = Map::new();
        obj.insert("command".into(), json!(self.command));
        obj.insert("params".into(), Value::Object(params));
        obj.insert("rows".into(), Value::Array(rows));
        for (k, v) in &self.extra {
            obj.insert(k.clone(), v.clone());
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("json values serialize");
        s.push('\n');
        s
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn value_name<T: ValueEnum>(v: T) -> Value {
    json!(v.to_possible_value().expect("no skipped variants").get_name())
}

fn frac(f: Fraction) -> Value {
    json!(f.to_string())
}

/// Stream index for building the `row`-th test input.
fn setup_rng(seed: u64, row: usize) -> TrialRng {
    trial_rng(seed, u64::MAX - row as u64)
}

fn field(p: u64) -> anyhow::Result<PrimeField> {
    Ok(PrimeField::new(p)?)
}

/// `P` of degree `d` and `f = P` with exactly `floor(delta 2^n)` values
/// changed.
fn corrupted_instance(
    n: u32,
    d: u32,
    field: PrimeField,
    delta: Fraction,
    rng: &mut TrialRng,
) -> anyhow::Result<(CubeFunction, CubeFunction)> {
    anyhow::ensure!(delta <= Fraction::ONE, "precondition `delta_in_unit_interval` violated: delta = {delta}");
    let truth = MultilinearPoly::random(n, d, field, rng)?.truth_table()?;
    let count = (delta.numer() as u128 * truth.len() as u128 / delta.denom() as u128) as usize;
    let f = truth.corrupt_count(count, rng);
    Ok((truth, f))
}

fn trials_positive(trials: u64) -> anyhow::Result<()> {
    if trials == 0 {
        bail!("precondition `trials_positive` violated: trials = 0");
    }
    Ok(())
}

pub fn run(cli: &Cli, runner: &Parallel) -> anyhow::Result<String> {
    let report = match &cli.command {
        Command::Test(a) => test(a, runner)?,
        Command::Decode(a) => decode(a, runner)?,
        Command::Tolerant(a) => tolerant(a, runner)?,
        Command::Buckets(a) => buckets(a)?,
        Command::Span(a) => span(a)?,
        Command::Witness(a) => witness(a)?,
        Command::Oracle(a) => oracle(a)?,
        Command::Convert(a) => return convert(a),
    };
    Ok(report.render(cli.format))
}

fn test(a: &TestArgs, runner: &Parallel) -> anyhow::Result<Report> {
    trials_positive(a.trials)?;
    let fld = field(a.p)?;
    let params = TesterParams::desk(a.d, a.k)?;
    if a.n <= a.k {
        bail!("precondition `n_greater_than_k` violated: n = {}, k = {}", a.n, a.k);
    }
    let mut report = Report::new(
        "test",
        vec![
            ("n", json!(a.n)),
            ("d", json!(a.d)),
            ("k", json!(a.k)),
            ("p", json!(a.p)),
            ("trials", json!(a.trials)),
            ("seed", json!(a.seed)),
        ],
        vec!["delta", "trials", "rejections", "rate", "stderr"],
    );
    for (row, &delta) in a.delta.iter().enumerate() {
        let (_, f) = corrupted_instance(a.n, a.d, fld, delta, &mut setup_rng(a.seed, row))?;
        let est = estimate_rejection_probability_with(runner, &f, &params, a.trials, a.seed)?;
        report
            .rows
            .push(vec![frac(delta), json!(est.trials), json!(est.hits), json!(est.rate()), json!(est.stderr())]);
    }
    Ok(report)
}

fn decode(a: &DecodeArgs, runner: &Parallel) -> anyhow::Result<Report> {
    trials_positive(a.trials)?;
    let fld = field(a.p)?;
    let params = DecoderParams::new(fld, a.d)?;
    let mode = match a.mode {
        ModeArg::FullB => DecodeMode::FullB,
        ModeArg::BPrime => DecodeMode::BPrimeOnly,
    };
    let queries = match mode {
        DecodeMode::FullB => params.query_budget,
        DecodeMode::BPrimeOnly => params.zero_tail_size(),
    };
    let mut report = Report::new(
        "decode",
        vec![
            ("n", json!(a.n)),
            ("p", json!(a.p)),
            ("d", json!(a.d)),
            ("k", json!(params.k)),
            ("mode", value_name(a.mode)),
            ("trials", json!(a.trials)),
            ("seed", json!(a.seed)),
        ],
        vec!["delta", "trials", "successes", "rate", "queries_per_call", "lower99"],
    );
    for (row, text) in a.delta.iter().enumerate() {
        let delta = if text.trim() == "tolerance" {
            params
                .tolerance()
                .context("the decoder tolerance does not fit a machine fraction")?
        } else {
            parse_fraction(text).map_err(anyhow::Error::msg)?
        };
        let (truth, f) = corrupted_instance(a.n, a.d, fld, delta, &mut setup_rng(a.seed, row))?;
        let est = decode_success_rate_with(runner, &f, &truth, &params, mode, a.trials, a.seed)?;
        report.rows.push(vec![
            frac(delta),
            json!(est.trials),
            json!(est.hits),
            json!(est.rate()),
            queries.map_or(Value::Null, |q| json!(q as u64)),
            json!(est.wilson_lower(gridcode_core::mc::Z_99)),
        ]);
    }
    Ok(report)
}

fn tolerant(a: &TolerantArgs, runner: &Parallel) -> anyhow::Result<Report> {
    trials_positive(a.trials)?;
    let fld = field(a.p)?;
    let params = TolerantParams::desk(a.d, a.delta1, a.delta2, a.k, a.m)?
        .with_replacement(a.replacement)
        .with_intolerant(TesterParams::desk(a.d, a.d + 2)?, a.reps);
    if a.n <= a.k.max(a.d + 2) {
        bail!("precondition `n_greater_than_k` violated: n = {}, k = {}", a.n, a.k.max(a.d + 2));
    }
    let mut report = Report::new(
        "tolerant",
        vec![
            ("n", json!(a.n)),
            ("d", json!(a.d)),
            ("p", json!(a.p)),
            ("delta1", frac(a.delta1)),
            ("delta2", frac(a.delta2)),
            ("k", json!(a.k)),
            ("m", json!(a.m)),
            ("replacement", json!(a.replacement)),
            ("reps", json!(a.reps)),
            ("trials", json!(a.trials)),
            ("seed", json!(a.seed)),
        ],
        vec!["delta", "delta_true", "mu_mean", "accept_rate", "trials"],
    );
    for (row, &delta) in a.corrupt.iter().enumerate() {
        let (_, f) = corrupted_instance(a.n, a.d, fld, delta, &mut setup_rng(a.seed, row))?;
        // Exact distance when the code is small enough to search.
        let delta_true = match CodeSearch::whole_cube(&f, a.d) {
            Ok(_) => frac(exact_delta_d(&f, a.d)?.0),
            Err(gridcode_core::Error::BudgetExceeded { .. }) => Value::Null,
            Err(e) => return Err(e.into()),
        };
        let summary = tolerant_accept_rate_with(runner, &f, &params, a.trials, a.seed)?;
        report.rows.push(vec![
            frac(delta),
            delta_true,
            summary.mu_mean.map_or(Value::Null, |m| json!(m)),
            json!(summary.accepts.rate()),
            json!(summary.accepts.trials),
        ]);
    }
    Ok(report)
}

fn sizes_key(sizes: &[u32]) -> String {
    sizes.iter().map(u32::to_string).collect::<Vec<_>>().join("-")
}

fn buckets(a: &BucketArgs) -> anyhow::Result<Report> {
    let mut params = vec![("r", json!(a.r)), ("k", json!(a.k)), ("exact", json!(a.exact))];
    if a.exact {
        let mut report = Report::new("buckets", params, vec!["sorted_sizes", "probability_num", "probability_den"]);
        for (sizes, prob) in exact_bucket_distribution(a.r, a.k)?.iter().rev() {
            report
                .rows
                .push(vec![json!(sizes_key(sizes)), json!(prob.numer().to_string()), json!(prob.denom().to_string())]);
        }
        return Ok(report);
    }
    trials_positive(a.trials)?;
    params.extend([
        ("sampler", value_name(a.sampler)),
        ("trials", json!(a.trials)),
        ("seed", json!(a.seed)),
    ]);
    let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for t in 0..a.trials {
        let rng = &mut trial_rng(a.seed, t);
        let sizes = match a.sampler {
            SamplerArg::Cycle => sample_buckets_cycle(a.r, a.k, rng)?.sorted_sizes(),
            SamplerArg::Parent => sample_buckets_parent(a.r, a.k, rng)?.sorted_sizes(),
            SamplerArg::Recursive => sample_restriction_recursive(a.r, a.k, rng)?.restriction.sorted_sizes(),
            SamplerArg::Direct => sample_restriction_direct(a.r, a.k, rng)?.sorted_sizes(),
        };
        *counts.entry(sizes).or_insert(0) += 1;
    }
    let mut report = Report::new("buckets", params, vec!["sorted_sizes", "count", "frequency"]);
    for (sizes, c) in counts.iter().rev() {
        report
            .rows
            .push(vec![json!(sizes_key(sizes)), json!(c), json!(*c as f64 / a.trials as f64)]);
    }
    Ok(report)
}

fn span(a: &SpanArgs) -> anyhow::Result<Report> {
    trials_positive(a.trials)?;
    let t = match a.t {
        Some(t) => t,
        None => span_size_for(a.s)? as usize,
    };
    let span_field = match a.field.trim() {
        "q" | "Q" | "rational" => SpanField::Rational,
        p => SpanField::Prime(field(p.parse().with_context(|| format!("--field must be `q` or a prime, got `{p}`"))?)?),
    };
    let mut report = Report::new(
        "span",
        vec![
            ("n", json!(a.n)),
            ("s", json!(a.s)),
            ("t", json!(t)),
            ("count", json!(a.count)),
            ("field", json!(a.field)),
            ("affine", json!(a.affine)),
            ("trials", json!(a.trials)),
            ("seed", json!(a.seed)),
        ],
        vec!["trial", "contained", "subsets_checked", "subset", "coefficients"],
    );
    report.default_format = Format::Json;
    let mut contained = 0u64;
    for trial in 0..a.trials {
        let inst = SpanInstance::sample(a.n, a.s, a.count, &mut trial_rng(a.seed, trial));
        let out = t_span_contains(&inst.target(), &inst.vectors, t, span_field, a.affine)?;
        contained += out.contained as u64;
        let (subset, coeffs) = match &out.witness {
            None => (Value::Null, Value::Null),
            Some(w) => {
                let coeffs: Vec<String> = match &w.coefficients {
                    SpanCoefficients::Rational { coeffs, .. } => coeffs.iter().map(|c| c.to_string()).collect(),
                    SpanCoefficients::Prime(c) => c.iter().map(|v| v.value().to_string()).collect(),
                };
                let subset: Vec<String> = w.subset.iter().map(usize::to_string).collect();
                (json!(subset.join(" ")), json!(coeffs.join(" ")))
            }
        };
        report
            .rows
            .push(vec![json!(trial), json!(out.contained), json!(out.subsets_checked), subset, coeffs]);
    }
    report.extra.insert("contained_trials".into(), json!(contained));
    Ok(report)
}

fn witness(a: &WitnessArgs) -> anyhow::Result<Report> {
    let fld = field(a.p)?;
    let window = match (a.lo, a.hi, a.quarters) {
        (Some(lo), Some(hi), _) => Window { lo, hi },
        (_, _, true) => Window::quarters(a.k),
        _ => Window::desk(a.k),
    };
    let w = build_witness(a.k, a.d, fld, window)?;
    let check = verify_witness(&w)?;
    let mut report = Report::new(
        "witness",
        vec![
            ("k", json!(a.k)),
            ("d", json!(a.d)),
            ("p", json!(a.p)),
            ("lo", json!(window.lo)),
            ("hi", json!(window.hi)),
        ],
        vec!["point", "weight"],
    );
    report.default_format = Format::Json;
    for (i, &y) in w.support.iter().enumerate() {
        let bits = gridcode_core::bits::BitString::from_mask(a.k, y);
        report.rows.push(vec![json!(bits.to_string()), json!(w.weight(i).value())]);
    }
    let method = match check.separation_method {
        SeparationMethod::PairEnumeration => "pair-enumeration",
        SeparationMethod::DifferenceEnumeration => "difference-enumeration",
        SeparationMethod::Implied => "implied",
    };
    report.extra.insert("support_size".into(), json!(w.support.len()));
    report.extra.insert(
        "report".into(),
        json!({
            "orthogonality": check.orthogonality,
            "window": check.window,
            "size": check.size,
            "one_point_separation": check.one_point_separation,
            "separation_method": method,
            "all_pass": check.all_pass(),
        }),
    );
    Ok(report)
}

fn read_file(path: &PathBuf) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn oracle(a: &OracleArgs) -> anyhow::Result<Report> {
    let f = read_truth_table(&read_file(&a.input)?)?;
    if let Some(n) = a.n {
        if n != f.n() {
            bail!("precondition `n_matches_file` violated: --n {n}, file has n = {}", f.n());
        }
    }
    if let Some(p) = a.p {
        if p != f.field().modulus() as u64 {
            bail!("precondition `p_matches_file` violated: --p {p}, file has p = {}", f.field().modulus());
        }
    }
    let (delta, nearest) = exact_delta_d(&f, a.d)?;
    let mut report = Report::new(
        "oracle",
        vec![
            ("n", json!(f.n())),
            ("d", json!(a.d)),
            ("p", json!(f.field().modulus())),
            ("in", json!(a.input.display().to_string())),
        ],
        vec!["delta_d", "disagreements", "nearest"],
    );
    let disagreements = f.disagreements(&nearest.truth_table()?)?;
    report.rows.push(vec![frac(delta), json!(disagreements), json!(inline_polynomial(&nearest))]);
    Ok(report)
}

fn convert(a: &ConvertArgs) -> anyhow::Result<String> {
    let text = read_file(&a.input)?;
    Ok(match (a.from, a.to) {
        (FileKind::Table, FileKind::Table) => write_truth_table(&read_truth_table(&text)?),
        (FileKind::Poly, FileKind::Poly) => write_polynomial(&read_polynomial(&text)?),
        (FileKind::Table, FileKind::Poly) => write_polynomial(&MultilinearPoly::from_truth_table(&read_truth_table(&text)?)),
        (FileKind::Poly, FileKind::Table) => write_truth_table(&read_polynomial(&text)?.truth_table()?),
    })
}

/// Parses `args` (without the program name) and runs the command.
pub fn execute<I, S>(args: I, runner: &Parallel) -> anyhow::Result<(Option<PathBuf>, String)>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(std::iter::once("gridcode".into()).chain(args.into_iter().map(Into::into)))?;
    let out = run(&cli, runner)?;
    Ok((cli.out.clone(), out))
}
