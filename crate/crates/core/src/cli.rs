//! Command-line surface: thresholds, curves and verification runs as CSV or
//! JSON tables.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Map, Number, Value};

use crate::analytic::{
    clause_pair_agreement_probability, clause_pair_agreement_ratio, expected_sat_pairs_exact,
    pair_sat_probability_exact, pairs_count_exact,
};
use crate::critical::{jump_indices, Active, CurvePoint, PhaseDiagram, Tolerances};
use crate::lab::{clause_pair_agreement_oracle, monte_carlo_expected_histogram, trial_formula, MAX_ORACLE_VARS};
use crate::{Error, Result};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const BUDGET: i32 = 3;
    pub const VERIFICATION: i32 = 4;
    pub const UNPROVEN: i32 = 5;
}

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "ksat-smj", version, about = "Major similarity degree phase transition of random k-SAT")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write the table here instead of standard output.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads for Monte Carlo trials and curve points (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Root-finding tolerance for s and r (at least 1e-14).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
pub enum Command {
    /// Critical points and r_cr for each clause length.
    Thresholds {
        /// Clause length or inclusive range, e.g. `5` or `5..7`.
        #[arg(long)]
        k: KRange,
    },
    /// Major similarity degree sampled over a grid of ratios.
    Curve {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r_min: f64,
        #[arg(long)]
        r_max: f64,
        #[arg(long)]
        step: f64,
    },
    /// Monte Carlo check of the expected satisfying-pair histogram.
    Verify {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write every trial formula as DIMACS CNF into this directory.
        #[arg(long)]
        dump_instances: Option<PathBuf>,
    },
    /// Pair satisfaction probability, analytic versus clause enumeration.
    Pairprob {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u64,
        /// Similarity number S.
        #[arg(long = "similarity", short = 'S')]
        similarity: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Inclusive clause-length range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KRange {
    pub lo: u32,
    pub hi: u32,
}

impl FromStr for KRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let k = parse(s)?;
                (k, k)
            }
        };
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(KRange { lo, hi })
    }
}

impl fmt::Display for KRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Float)
    }
}

/// Floats are written with 17 significant digits.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

impl Cell {
    fn csv_text(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format_float(*x),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json_value(&self) -> Value {
        match self {
            Cell::Int(i) => Value::Number(i.to_string().parse().expect("integer literal")),
            Cell::Float(x) if x.is_finite() => Value::Number(
                Number::from_str(&format_float(*x)).expect("float literal"),
            ),
            Cell::Float(_) | Cell::Empty => Value::Null,
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

/// A rendered result: a table plus metadata.
#[derive(Debug, Clone)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: Map<String, Value>,
    /// Human-readable lines for standard error.
    pub notes: Vec<String>,
    pub exit_code: i32,
}

impl Report {
    fn new(columns: Vec<&'static str>) -> Self {
        Report {
            columns,
            rows: Vec::new(),
            meta: Map::new(),
            notes: Vec::new(),
            exit_code: exit::SUCCESS,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_text))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), v.json_value()))
                        .collect(),
                )
            })
            .collect();
        let doc = json!({ "meta": self.meta, "rows": rows });
        let mut text = serde_json::to_string_pretty(&doc).expect("json");
        text.push('\n');
        text
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Exit code for a library error.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::InvalidParameter(_) | Error::Domain { .. } | Error::LengthMismatch { .. } => exit::USAGE,
        Error::Budget(_) => exit::BUDGET,
        Error::Unproven { .. } => exit::UNPROVEN,
        Error::NotBracketed(_) | Error::Overflow(_) => exit::FAILURE,
    }
}

/// Runs a parsed command line, honoring `--threads`.
pub fn run(cli: &Cli) -> Result<Report> {
    match cli.threads {
        Some(threads) => {
            if threads == 0 {
                return Err(Error::invalid("--threads must be at least 1"));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
            pool.install(|| run_command(cli))
        }
        None => run_command(cli),
    }
}

fn run_command(cli: &Cli) -> Result<Report> {
    let tolerances = match cli.tolerance {
        Some(t) => Tolerances::uniform(t)?,
        None => Tolerances::default(),
    };
    let mut report = match &cli.command {
        Command::Thresholds { k } => cmd_thresholds(*k, tolerances)?,
        Command::Curve { k, r_min, r_max, step } => cmd_curve(*k, *r_min, *r_max, *step, tolerances)?,
        Command::Verify {
            n,
            k,
            m,
            trials,
            seed,
            dump_instances,
        } => cmd_verify(*n, *k, *m, *trials, *seed, dump_instances.as_ref())?,
        Command::Pairprob { n, k, m, similarity } => cmd_pairprob(*n, *k, *m, *similarity)?,
    };
    let mut config = serde_json::to_value(cli).expect("config serializes");
    if let Value::Object(obj) = &mut config {
        // Output location and worker count do not change the results.
        obj.remove("output");
        obj.remove("threads");
    }
    report.meta.insert("config".into(), config);
    Ok(report)
}

pub fn cmd_thresholds(k: KRange, tolerances: Tolerances) -> Result<Report> {
    let mut report = Report::new(vec![
        "k", "status", "s01", "s02", "s03", "r_s01", "r_s03", "r_cr", "s1cr", "s3cr",
        "s3cr_complement", "residual",
    ]);
    let mut last_err = None;
    let mut successes = 0;
    for kk in k.lo..=k.hi {
        match PhaseDiagram::new(kk, tolerances) {
            Ok(d) => {
                successes += 1;
                let (c, t) = (d.critical, d.thresholds);
                report.rows.push(vec![
                    Cell::Int(kk as i128),
                    Cell::Text("ok".into()),
                    c.s01.into(),
                    c.s02.into(),
                    c.s03.into(),
                    c.r_at_s01.into(),
                    c.r_at_s03.into(),
                    t.r_cr.into(),
                    t.s1cr.into(),
                    t.s3cr.into(),
                    t.s3cr_complement.into(),
                    t.residual.into(),
                ]);
            }
            Err(e) => {
                report.notes.push(format!("k = {kk}: {e}"));
                let mut row = vec![Cell::Int(kk as i128), Cell::Text(e.to_string())];
                row.resize(report.columns.len(), Cell::Empty);
                report.rows.push(row);
                last_err = Some(e);
            }
        }
    }
    if successes == 0 {
        if let Some(e) = last_err {
            report.exit_code = exit_code_for(&e);
        }
    }
    Ok(report)
}

fn curve_row(p: &CurvePoint, jump: bool) -> Vec<Cell> {
    vec![
        p.r.into(),
        p.smj.into(),
        p.smj_complement.into(),
        p.smj_alt.into(),
        Cell::Text(p.active.label().into()),
        p.f_s1.into(),
        p.f_s3.into(),
        Cell::Int(jump as i128),
    ]
}

pub fn cmd_curve(k: u32, r_min: f64, r_max: f64, step: f64, tolerances: Tolerances) -> Result<Report> {
    let mut report = Report::new(vec![
        "r", "s_mj", "s_mj_complement", "s_mj_alt", "branch", "f_s1", "f_s3", "jump",
    ]);
    let grid = crate::critical::curve_grid(r_min, r_max, step)?;
    if grid.is_empty() {
        return Ok(report);
    }
    let diagram = PhaseDiagram::new(k, tolerances)?;
    let points = diagram.curve(r_min, r_max, step)?;
    let jumps = jump_indices(&points);
    for (i, p) in points.iter().enumerate() {
        report.rows.push(curve_row(p, jumps.contains(&i)));
    }
    let t = diagram.thresholds;
    report.meta.insert("r_cr".into(), float_value(t.r_cr));
    report.meta.insert("s1cr".into(), float_value(t.s1cr));
    report.meta.insert("s3cr".into(), float_value(t.s3cr));
    report.meta.insert("jumps".into(), json!(jumps.len()));
    report.meta.insert(
        "tie_points".into(),
        json!(points.iter().filter(|p| p.active == Active::Both).count()),
    );
    Ok(report)
}

fn float_value(x: f64) -> Value {
    Cell::Float(x).json_value()
}

/// Verdict on per-bucket z-scores: every `|z| <= 3`, except that a single
/// bucket in `(3, 4)` is tolerated.
pub fn z_scores_pass(z: &[f64]) -> bool {
    let over3 = z.iter().filter(|v| v.abs() > 3.0).count();
    let over4 = z.iter().filter(|v| v.is_nan() || v.abs() >= 4.0).count();
    over4 == 0 && over3 <= 1
}

pub fn cmd_verify(
    n: u32,
    k: u32,
    m: u64,
    trials: u64,
    seed: u64,
    dump_instances: Option<&PathBuf>,
) -> Result<Report> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let stats = monte_carlo_expected_histogram(n, k, m, trials, seed)?;
    if let Some(dir) = dump_instances {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::invalid(format!("cannot create {}: {e}", dir.display())))?;
        for t in 0..trials {
            let path = dir.join(format!("trial_{t:05}.cnf"));
            let text = trial_formula(n, k, m, seed, t)?.to_dimacs();
            std::fs::write(&path, text)
                .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))?;
        }
    }
    let mut report = Report::new(vec![
        "S", "s", "empirical_mean", "std_error", "exact_expectation", "z",
    ]);
    let mut zs = Vec::with_capacity(n as usize + 1);
    for s in 0..=n {
        let exact = match pairs_count_exact(n, s) {
            Ok(count) => count as f64 * pair_sat_probability_exact(n, k, m, s)?.value(),
            Err(_) => expected_sat_pairs_exact(n, k, m, s)?.value(),
        };
        let mean = stats.mean[s as usize];
        let se = stats.std_error[s as usize];
        let z = if se > 0.0 {
            (mean - exact) / se
        } else if mean == exact {
            0.0
        } else {
            (mean - exact).signum() * f64::INFINITY
        };
        zs.push(z);
        report.rows.push(vec![
            Cell::Int(s as i128),
            Cell::Float(s as f64 / n as f64),
            mean.into(),
            se.into(),
            exact.into(),
            z.into(),
        ]);
    }
    let pass = z_scores_pass(&zs);
    let max_abs_z = zs.iter().fold(0.0f64, |a, z| a.max(z.abs()));
    report.meta.insert("pass".into(), json!(pass));
    report.meta.insert("max_abs_z".into(), float_value(max_abs_z));
    report.meta.insert(
        "buckets_over_3".into(),
        json!(zs.iter().filter(|z| z.abs() > 3.0).count()),
    );
    report.meta.insert("mean_solutions".into(), float_value(stats.mean_solutions));
    report.notes.push(format!(
        "verify n={n} k={k} m={m} trials={trials} seed={seed}: {} (max |z| = {})",
        if pass { "pass" } else { "FAIL" },
        format_float(max_abs_z)
    ));
    if !pass {
        report.exit_code = exit::VERIFICATION;
    }
    Ok(report)
}

/// `p^m` from an exact per-clause ratio; equal ratios give identical values.
fn ratio_power(p: Ratio<u128>, m: u64) -> f64 {
    let miss = (p.denom() - p.numer()) as f64 / *p.denom() as f64;
    (m as f64 * (-miss).ln_1p()).exp()
}

fn ratio_text(p: Ratio<u128>) -> String {
    format!("{}/{}", p.numer(), p.denom())
}

fn ratio_gap(a: Ratio<u128>, b: Ratio<u128>) -> f64 {
    let d = if a >= b { a - b } else { b - a };
    *d.numer() as f64 / *d.denom() as f64
}

pub fn cmd_pairprob(n: u32, k: u32, m: u64, s_num: u32) -> Result<Report> {
    let mut report = Report::new(vec![
        "n", "k", "m", "S", "s", "clause_probability", "clause_ratio", "oracle_ratio",
        "clause_difference", "pair_probability", "ln_pair_probability", "oracle_pair_probability",
        "pair_difference", "exact_match",
    ]);
    let p = clause_pair_agreement_probability(n, k, s_num)?;
    let pair = pair_sat_probability_exact(n, k, m, s_num)?;
    let exact = clause_pair_agreement_ratio(n, k, s_num).ok();
    let oracle = if n <= MAX_ORACLE_VARS {
        Some(clause_pair_agreement_oracle(n, k, s_num)?)
    } else {
        report
            .notes
            .push(format!("clause-space oracle skipped: needs n <= {MAX_ORACLE_VARS}"));
        None
    };
    let both = exact.zip(oracle);
    report.rows.push(vec![
        Cell::Int(n as i128),
        Cell::Int(k as i128),
        Cell::Int(m as i128),
        Cell::Int(s_num as i128),
        Cell::Float(s_num as f64 / n as f64),
        p.into(),
        exact.map_or(Cell::Empty, |r| Cell::Text(ratio_text(r))),
        oracle.map_or(Cell::Empty, |r| Cell::Text(ratio_text(r))),
        both.map(|(a, b)| ratio_gap(a, b)).into(),
        pair.value().into(),
        pair.ln().into(),
        oracle.map(|o| ratio_power(o, m)).into(),
        both.map(|(a, b)| (ratio_power(a, m) - ratio_power(b, m)).abs()).into(),
        both.map_or(Cell::Empty, |(a, b)| Cell::Bool(a == b)),
    ]);
    Ok(report)
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::USAGE } else { exit::SUCCESS };
        }
    };
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    for note in &report.notes {
        eprintln!("{note}");
    }
    let text = report.render(cli.format);
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return exit::FAILURE;
    }
    report.exit_code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_range_parsing() {
        assert_eq!("5..7".parse::<KRange>().unwrap(), KRange { lo: 5, hi: 7 });
        assert_eq!("6".parse::<KRange>().unwrap(), KRange { lo: 6, hi: 6 });
        assert_eq!("5..=6".parse::<KRange>().unwrap(), KRange { lo: 5, hi: 6 });
        assert!("7..5".parse::<KRange>().is_err());
        assert!("x".parse::<KRange>().is_err());
    }

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(0.5), "5.0000000000000000e-1");
        assert_eq!(format_float(f64::INFINITY), "inf");
        let x = 20.621632772859527;
        assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn z_score_policy() {
        assert!(z_scores_pass(&[0.0, 2.9, -3.0]));
        assert!(z_scores_pass(&[0.0, 3.5, 1.0]));
        assert!(!z_scores_pass(&[3.5, -3.2]));
        assert!(!z_scores_pass(&[4.0]));
        assert!(!z_scores_pass(&[f64::INFINITY]));
    }

    #[test]
    fn csv_quotes_text() {
        let mut r = Report::new(vec!["a", "b"]);
        r.rows.push(vec![Cell::Text("x, y".into()), Cell::Float(1.0)]);
        assert_eq!(r.to_csv(), "a,b\n\"x, y\",1.0000000000000000e0\n");
    }

    #[test]
    fn pairprob_exact_agreement() {
        let r = cmd_pairprob(10, 5, 20, 7).unwrap();
        let row = &r.rows[0];
        assert_eq!(row[8], Cell::Float(0.0));
        assert_eq!(row[12], Cell::Float(0.0));
        assert_eq!(row[13], Cell::Bool(true));
        assert!(cmd_pairprob(10, 5, 20, 11).is_err());
    }
}
