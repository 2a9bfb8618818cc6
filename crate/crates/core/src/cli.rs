//! Command-line front end.
//!
//! Exit codes: 0 success, 1 an identity failed, 2 usage error, 3 the
//! requested precision could not resolve a quantity.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::certificate::{verify_telescope, CertificateReport, Status};
use crate::error::{Error, Result};
use crate::numerics::{
    asymptotes, bits_for_convergent, convergent_error_with, convergent_interval, eval_series, eval_target,
    eval_truncated, format_sci, format_upper_sci, verify_acceleration_consistency, Interval, PrecisionContext,
    Series,
};
use crate::scheme::{NormalizerStart, SchemeId, Transcription};
use crate::sequence::{convergents, ConvergentRecord};
use crate::serial::{format_rational, parse_rational};
use crate::verify::{verify_scheme, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IDENTITY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "qapery", version, about = "Exact verification of q-Apery irrationality schemes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cmd {
    Verify,
    Convergents,
    Measure,
    Series,
    Certify,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every identity of a scheme up to n-max.
    Verify(Flags),
    /// Tabulate a_n, b_n, the normalized pair and the error at q.
    Convergents(Flags),
    /// Error exponents and the resulting irrationality measure estimates.
    Measure(Flags),
    /// Evaluate the defining and accelerated series.
    Series(Flags),
    /// Published versus recovered telescoping certificates.
    Certify(Flags),
}

/// Command-line flags. Every field is optional so a config file can fill gaps.
#[derive(Args, Debug, Clone, Default)]
pub struct Flags {
    #[arg(long)]
    pub scheme: Option<String>,
    /// Base point, an integer or `p/q`.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub n_max: Option<i64>,
    #[arg(long)]
    pub precision_bits: Option<u32>,
    #[arg(long)]
    pub digits: Option<u32>,
    #[arg(long)]
    pub terms: Option<u32>,
    #[arg(long)]
    pub variant: Option<u8>,
    /// json, csv or table.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub strict_certificates: bool,
    #[arg(long)]
    pub compare: bool,
    /// ceil or floor.
    #[arg(long)]
    pub normalizer_start: Option<String>,
    /// corrected or printed.
    #[arg(long)]
    pub transcription: Option<String>,
    /// A key=value file supplying defaults for the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Table,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "table" => Ok(Format::Table),
            _ => Err(Error::usage(format!("unknown format `{s}` (expected json, csv or table)"))),
        }
    }
}

/// Validated settings for one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub scheme: SchemeId,
    pub n_max: u32,
    pub q: BigRational,
    pub precision_bits: Option<u32>,
    pub digits: u32,
    pub terms: Option<u32>,
    pub variant: Option<u8>,
    pub format: Format,
    pub strict: bool,
    pub compare: bool,
    pub start: NormalizerStart,
    pub transcription: Transcription,
}

const CONFIG_KEYS: [&str; 12] = [
    "scheme",
    "q",
    "n-max",
    "precision-bits",
    "digits",
    "terms",
    "variant",
    "format",
    "strict-certificates",
    "compare",
    "normalizer-start",
    "transcription",
];

/// Parses `key = value` lines; `#` starts a comment, `_` and `-` are interchangeable in keys.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::usage(format!("config line {}: expected key=value", i + 1)))?;
        let k = k.trim().replace('_', "-");
        if !CONFIG_KEYS.contains(&k.as_str()) {
            return Err(Error::usage(format!("config line {}: unknown key `{k}`", i + 1)));
        }
        map.insert(k, v.trim().to_string());
    }
    Ok(map)
}

fn load_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::usage(format!("invalid value `{v}` for {key}")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::usage(format!("invalid boolean `{v}` for {key}"))),
    }
}

fn parse_start(v: &str) -> Result<NormalizerStart> {
    match v {
        "ceil" => Ok(NormalizerStart::Ceil),
        "floor" => Ok(NormalizerStart::Floor),
        _ => Err(Error::usage(format!("unknown normalizer start `{v}` (expected ceil or floor)"))),
    }
}

fn parse_transcription(v: &str) -> Result<Transcription> {
    match v {
        "corrected" => Ok(Transcription::Corrected),
        "printed" => Ok(Transcription::Printed),
        _ => Err(Error::usage(format!("unknown transcription `{v}` (expected corrected or printed)"))),
    }
}

impl RunConfig {
    /// Merges flags over config-file values and validates the result.
    pub fn resolve(flags: &Flags, file: &BTreeMap<String, String>) -> Result<Self> {
        let get = |k: &str, flag: Option<String>| flag.or_else(|| file.get(k).cloned());

        let scheme = get("scheme", flags.scheme.clone())
            .ok_or_else(|| Error::usage("--scheme is required (harmonic or ln2)"))?
            .parse()?;

        let n_max = match get("n-max", flags.n_max.map(|v| v.to_string())) {
            Some(v) => parse_num::<i64>("n-max", &v)?,
            None => 10,
        };
        let n_max = u32::try_from(n_max).map_err(|_| Error::usage(format!("--n-max must be >= 0, got {n_max}")))?;

        let q_text = get("q", flags.q.clone()).unwrap_or_else(|| "2".into());
        let q = parse_rational(&q_text).map_err(|_| Error::usage(format!("cannot parse q = `{q_text}`")))?;
        if q.abs() <= BigRational::one() {
            return Err(Error::usage(format!("base point q = {q_text} must satisfy |q| > 1")));
        }

        let precision_bits = get("precision-bits", flags.precision_bits.map(|v| v.to_string()))
            .map(|v| parse_num::<u32>("precision-bits", &v))
            .transpose()?;
        if let Some(b) = precision_bits {
            if b < 16 {
                return Err(Error::usage(format!("precision {b} bits is below the minimum of 16")));
            }
        }
        let digits = get("digits", flags.digits.map(|v| v.to_string()))
            .map(|v| parse_num::<u32>("digits", &v))
            .transpose()?
            .unwrap_or(30);
        if digits == 0 || digits > 100_000 {
            return Err(Error::usage(format!("--digits must be in 1..=100000, got {digits}")));
        }
        let terms = get("terms", flags.terms.map(|v| v.to_string()))
            .map(|v| parse_num::<u32>("terms", &v))
            .transpose()?;
        if terms == Some(0) {
            return Err(Error::usage("--terms must be positive"));
        }
        let variant = get("variant", flags.variant.map(|v| v.to_string()))
            .map(|v| parse_num::<u8>("variant", &v))
            .transpose()?;
        if let Some(v) = variant {
            Series::from_variant(v)?;
        }
        let format = get("format", flags.format.clone()).map(|v| v.parse()).transpose()?.unwrap_or(Format::Json);
        let strict = flags.strict_certificates
            || file.get("strict-certificates").map(|v| parse_bool("strict-certificates", v)).transpose()?.unwrap_or(false);
        let compare = flags.compare || file.get("compare").map(|v| parse_bool("compare", v)).transpose()?.unwrap_or(false);
        let start = get("normalizer-start", flags.normalizer_start.clone())
            .map(|v| parse_start(&v))
            .transpose()?
            .unwrap_or_default();
        let transcription = get("transcription", flags.transcription.clone())
            .map(|v| parse_transcription(&v))
            .transpose()?
            .unwrap_or_default();

        Ok(RunConfig {
            scheme,
            n_max,
            q,
            precision_bits,
            digits,
            terms,
            variant,
            format,
            strict,
            compare,
            start,
            transcription,
        })
    }

    fn context(&self, auto_bits: u32) -> Result<PrecisionContext> {
        PrecisionContext::new(self.q.clone(), self.precision_bits.unwrap_or(auto_bits))
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) => EXIT_USAGE,
        Error::Precision(_) => EXIT_PRECISION,
        Error::Arith(_) | Error::Io(_) => EXIT_IDENTITY,
    }
}

/// Runs the CLI on `args` (including the program name), writing the report
/// to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let (cmd, flags) = match cli.command {
        Command::Verify(f) => (Cmd::Verify, f),
        Command::Convergents(f) => (Cmd::Convergents, f),
        Command::Measure(f) => (Cmd::Measure, f),
        Command::Series(f) => (Cmd::Series, f),
        Command::Certify(f) => (Cmd::Certify, f),
    };
    match dispatch(cmd, &flags) {
        Ok((code, text)) => {
            if let Err(e) = out.write_all(text.as_bytes()) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_IDENTITY;
            }
            if code != EXIT_OK {
                let _ = writeln!(err, "error: one or more identities failed");
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Cmd, flags: &Flags) -> Result<(i32, String)> {
    let file = match &flags.config {
        Some(p) => load_config(p)?,
        None => BTreeMap::new(),
    };
    let cfg = RunConfig::resolve(flags, &file)?;
    match cmd {
        Cmd::Verify => cmd_verify(&cfg),
        Cmd::Convergents => cmd_convergents(&cfg),
        Cmd::Measure => cmd_measure(&cfg),
        Cmd::Series => cmd_series(&cfg),
        Cmd::Certify => cmd_certify(&cfg),
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        let fields: Vec<String> = r.iter().map(|f| csv_field(f)).collect();
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    s
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (i, f) in r.iter().enumerate() {
            w[i] = w[i].max(f.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().enumerate().map(|(i, c)| format!("{c:<width$}", width = w[i])).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut s = line(header.to_vec());
    for r in rows {
        s.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    s
}

fn render(format: Format, header: &[&str], rows: &[Vec<String>], value: &impl Serialize) -> String {
    match format {
        Format::Json => json(value),
        Format::Csv => csv(header, rows),
        Format::Table => table(header, rows),
    }
}

/// `verify`: every identity check up to `n_max`.
pub fn cmd_verify(cfg: &RunConfig) -> Result<(i32, String)> {
    let report = verify_scheme(cfg.scheme, cfg.n_max, VerifyOptions { strict: cfg.strict, start: cfg.start });
    let header = ["check", "required", "passed", "cases", "failures", "first_failure"];
    let rows: Vec<Vec<String>> = report
        .checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                c.required.to_string(),
                c.passed.to_string(),
                c.cases.to_string(),
                c.failures.to_string(),
                c.first_failure.clone().unwrap_or_default(),
            ]
        })
        .collect();
    let code = if report.passed { EXIT_OK } else { EXIT_IDENTITY };
    Ok((code, render(cfg.format, &header, &rows, &report)))
}

#[derive(Serialize)]
struct ConvergentRow {
    #[serde(flatten)]
    record: ConvergentRecord,
    /// `a_n(q) / b_n(q)` to the requested digits.
    convergent: String,
    /// `target - convergent`.
    error: String,
    error_radius: String,
}

#[derive(Serialize)]
struct ConvergentTable {
    scheme: SchemeId,
    q: String,
    precision_bits: u32,
    target: String,
    target_radius: String,
    rows: Vec<ConvergentRow>,
}

/// `convergents`: exact rows `n = 0..=n_max` with numeric columns at `q`.
pub fn cmd_convergents(cfg: &RunConfig) -> Result<(i32, String)> {
    let ctx = cfg.context(bits_for_convergent(&cfg.q, cfg.n_max))?;
    let target = eval_target(cfg.scheme, &ctx)?;
    let recs = convergents(cfg.scheme, cfg.n_max, cfg.start);
    let mut rows = Vec::new();
    let mut failed = false;
    for rec in recs {
        let ce = convergent_interval(&target, &rec, &cfg.q)?;
        if ce.err.contains_zero() {
            return Err(Error::Precision(format!(
                "error at n = {} not resolved with {} bits",
                rec.n, ctx.bits
            )));
        }
        failed |= !rec.integral;
        rows.push(ConvergentRow {
            convergent: Interval::from_rational(&ce.convergent, ctx.bits).to_record(cfg.digits).value,
            error: format_sci(&ce.err.midpoint(), 12),
            error_radius: format_upper_sci(&ce.err.radius()),
            record: rec,
        });
    }
    let header = ["n", "deg_b", "deg_z", "integral", "convergent", "error", "error_radius"];
    let opt = |d: Option<usize>| d.map(|d| d.to_string()).unwrap_or_default();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.record.n.to_string(),
                opt(r.record.deg_b),
                opt(r.record.deg_z),
                r.record.integral.to_string(),
                r.convergent.clone(),
                r.error.clone(),
                r.error_radius.clone(),
            ]
        })
        .collect();
    let t = target.to_record(cfg.digits);
    let out = ConvergentTable {
        scheme: cfg.scheme,
        q: format_rational(&cfg.q),
        precision_bits: ctx.bits,
        target: t.value,
        target_radius: t.radius,
        rows,
    };
    let code = if failed { EXIT_IDENTITY } else { EXIT_OK };
    Ok((code, render(cfg.format, &header, &cells, &out)))
}

#[derive(Serialize)]
struct MeasureRow {
    n: u32,
    deg_z: usize,
    error: String,
    error_radius: String,
    eps: String,
    zeta: String,
    delta: String,
    mu: String,
}

#[derive(Serialize)]
struct ExactValue {
    exact: String,
    decimal: String,
}

#[derive(Serialize)]
struct AsymptoteRow {
    label: &'static str,
    eps: ExactValue,
    zeta: ExactValue,
    delta: ExactValue,
    mu: ExactValue,
}

#[derive(Serialize)]
struct MeasureTable {
    scheme: SchemeId,
    q: String,
    precision_bits: u32,
    rows: Vec<MeasureRow>,
    asymptote: AsymptoteRow,
}

fn f6(x: f64) -> String {
    format!("{x:.6}")
}

fn asymptote_row() -> AsymptoteRow {
    let [eps, zeta, delta, mu] = asymptotes().map(|r| ExactValue {
        exact: format_rational(&r),
        decimal: Interval::from_rational(&r, 64).to_record(5).value,
    });
    AsymptoteRow { label: "asymptote", eps, zeta, delta, mu }
}

/// `measure`: error exponents and measure estimates for `n = 1..=n_max`.
pub fn cmd_measure(cfg: &RunConfig) -> Result<(i32, String)> {
    if !cfg.q.is_integer() {
        return Err(Error::usage(format!(
            "measure needs an integer base point, got q = {}",
            format_rational(&cfg.q)
        )));
    }
    if cfg.n_max < 1 {
        return Err(Error::usage("measure needs --n-max >= 1"));
    }
    let ctx = cfg.context(bits_for_convergent(&cfg.q, cfg.n_max))?;
    let target = eval_target(cfg.scheme, &ctx)?;
    let recs = convergents(cfg.scheme, cfg.n_max, cfg.start);
    if let Some(r) = recs.iter().find(|r| !r.integral) {
        return Ok((EXIT_IDENTITY, format!("integrality failed at n = {}\n", r.n)));
    }
    let mut rows = Vec::new();
    for rec in recs.iter().skip(1) {
        let m = convergent_error_with(&target, &ctx, rec)?;
        rows.push(MeasureRow {
            n: m.n,
            deg_z: m.deg_z,
            error: m.err.value,
            error_radius: m.err.radius,
            eps: f6(m.eps),
            zeta: f6(m.zeta),
            delta: f6(m.delta),
            mu: f6(m.mu),
        });
    }
    let asym = asymptote_row();
    let header = ["n", "deg_z", "error", "error_radius", "eps", "zeta", "delta", "mu"];
    let mut cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.deg_z.to_string(),
                r.error.clone(),
                r.error_radius.clone(),
                r.eps.clone(),
                r.zeta.clone(),
                r.delta.clone(),
                r.mu.clone(),
            ]
        })
        .collect();
    let both = |v: &ExactValue| {
        if v.exact.contains('/') {
            format!("{} = {}", v.exact, v.decimal)
        } else {
            v.exact.clone()
        }
    };
    cells.push(vec![
        asym.label.into(),
        String::new(),
        String::new(),
        String::new(),
        both(&asym.eps),
        both(&asym.zeta),
        both(&asym.delta),
        both(&asym.mu),
    ]);
    let out = MeasureTable {
        scheme: cfg.scheme,
        q: format_rational(&cfg.q),
        precision_bits: ctx.bits,
        rows,
        asymptote: asym,
    };
    Ok((EXIT_OK, render(cfg.format, &header, &cells, &out)))
}

#[derive(Serialize)]
struct SeriesRow {
    series: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    terms: Option<u32>,
    value: String,
    radius: String,
    precision_bits: u32,
}

#[derive(Serialize)]
struct SeriesReport {
    scheme: SchemeId,
    q: String,
    digits: u32,
    values: Vec<SeriesRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<&'static str>,
}

/// `series`: the defining series and accelerated forms, optionally truncated.
pub fn cmd_series(cfg: &RunConfig) -> Result<(i32, String)> {
    let ctx = cfg.context(PrecisionContext::bits_for_digits(cfg.digits))?;
    let mut values = Vec::new();
    let mut verdict = None;
    if cfg.compare {
        let (agree, v) = verify_acceleration_consistency(cfg.scheme, &cfg.q, cfg.digits)?;
        for (series, iv) in Series::ALL.into_iter().zip(v) {
            let r = iv.to_record(cfg.digits);
            values.push(SeriesRow { series: series.name(), terms: None, value: r.value, radius: r.radius, precision_bits: r.precision_bits });
        }
        verdict = Some(if agree { "agree" } else { "disagree" });
    } else {
        let chosen: Vec<Series> = match cfg.variant {
            Some(v) => vec![Series::from_variant(v)?],
            None => Series::ALL.to_vec(),
        };
        for series in chosen {
            let iv = match cfg.terms {
                Some(t) => eval_truncated(cfg.scheme, series, &ctx, t),
                None => eval_series(cfg.scheme, series, &ctx)?,
            };
            let r = iv.to_record(cfg.digits);
            values.push(SeriesRow { series: series.name(), terms: cfg.terms, value: r.value, radius: r.radius, precision_bits: r.precision_bits });
        }
    }
    let header = ["series", "terms", "value", "radius", "precision_bits"];
    let mut cells: Vec<Vec<String>> = values
        .iter()
        .map(|r| {
            vec![
                r.series.into(),
                r.terms.map(|t| t.to_string()).unwrap_or_default(),
                r.value.clone(),
                r.radius.clone(),
                r.precision_bits.to_string(),
            ]
        })
        .collect();
    if let Some(v) = verdict {
        cells.push(vec!["verdict".into(), String::new(), v.into(), String::new(), String::new()]);
    }
    let report = SeriesReport { scheme: cfg.scheme, q: format_rational(&cfg.q), digits: cfg.digits, values, verdict };
    let code = if verdict == Some("disagree") { EXIT_IDENTITY } else { EXIT_OK };
    Ok((code, render(cfg.format, &header, &cells, &report)))
}

#[derive(Serialize)]
struct CertifyReport {
    scheme: SchemeId,
    transcription: Transcription,
    strict: bool,
    reports: Vec<CertificateReport>,
}

/// `certify`: entrywise comparison of the published certificates with the
/// ones recovered from the operator.
pub fn cmd_certify(cfg: &RunConfig) -> Result<(i32, String)> {
    let reports: Vec<CertificateReport> =
        (0..=cfg.n_max).map(|n| verify_telescope(cfg.scheme, n, n + 2, cfg.transcription)).collect();
    let recovered_ok = reports.iter().all(CertificateReport::recovered_ok);
    let printed_ok = reports.iter().all(CertificateReport::printed_ok);
    let code = if recovered_ok && (printed_ok || !cfg.strict) { EXIT_OK } else { EXIT_IDENTITY };

    let text = match cfg.format {
        Format::Json => json(&CertifyReport {
            scheme: cfg.scheme,
            transcription: cfg.transcription,
            strict: cfg.strict,
            reports,
        }),
        Format::Csv => {
            let header = ["n", "identity", "k", "status", "printed", "recovered"];
            let rows: Vec<Vec<String>> = reports
                .iter()
                .flat_map(|r| r.entries.iter())
                .map(|e| {
                    vec![
                        e.n.to_string(),
                        format!("{:?}", e.identity),
                        e.k.to_string(),
                        status_name(e.status).into(),
                        e.printed.to_string(),
                        e.recovered.to_string(),
                    ]
                })
                .collect();
            csv(&header, &rows)
        }
        Format::Table => {
            let header = ["n", "printed", "mismatches", "first_b", "first_a", "recovered", "presentation"];
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    let ok = |b: bool| status_name(if b { Status::Pass } else { Status::Mismatch }).to_string();
                    let k = |v: Option<i64>| v.map(|k| k.to_string()).unwrap_or_else(|| "-".into());
                    let pres = match &r.presentation {
                        Some(p) if p.verified => "verified",
                        Some(_) => "unverified",
                        None => "",
                    };
                    vec![
                        r.n.to_string(),
                        ok(r.printed_ok()),
                        r.discrepancies().count().to_string(),
                        k(r.first_failure_b),
                        k(r.first_failure_a),
                        ok(r.recovered_ok()),
                        pres.into(),
                    ]
                })
                .collect();
            table(&header, &rows)
        }
    };
    Ok((code, text))
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Mismatch => "mismatch",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["qapery"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors() {
        for args in [
            &["verify", "--scheme", "harmonic", "--n-max", "-1"][..],
            &["convergents", "--scheme", "harmonic", "--q", "1"],
            &["series", "--scheme", "ln2", "--q", "0"],
            &["verify", "--scheme", "zeta"],
            &["verify"],
            &["measure", "--scheme", "ln2", "--q", "5/2"],
            &["series", "--scheme", "ln2", "--variant", "3"],
            &["bogus"],
        ] {
            let (code, out, err) = run_args(args);
            assert_eq!(code, EXIT_USAGE, "{args:?}");
            assert!(out.is_empty());
            assert!(!err.is_empty());
        }
    }

    #[test]
    fn precision_error() {
        let (code, _, err) = run_args(&["convergents", "--scheme", "harmonic", "--n-max", "8", "--precision-bits", "32"]);
        assert_eq!(code, EXIT_PRECISION, "{err}");
    }

    #[test]
    fn config_merging() {
        let file = parse_config("# defaults\nscheme = ln2\nn_max=4\nq = -3\nformat=csv\n").unwrap();
        let flags = Flags { n_max: Some(2), ..Default::default() };
        let cfg = RunConfig::resolve(&flags, &file).unwrap();
        assert_eq!(cfg.scheme, SchemeId::Ln2);
        assert_eq!(cfg.n_max, 2);
        assert_eq!(cfg.q, BigRational::from_integer((-3).into()));
        assert_eq!(cfg.format, Format::Csv);
        assert!(parse_config("colour = red").is_err());
        assert!(parse_config("scheme").is_err());
    }

    #[test]
    fn asymptote_strings() {
        let a = asymptote_row();
        assert_eq!(a.delta.exact, "5/19");
        assert_eq!(a.delta.decimal, "0.26316");
        assert_eq!(a.mu.exact, "24/5");
        assert_eq!(a.zeta.exact, "19/8");
    }

    #[test]
    fn csv_quotes_commas() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("plain"), "plain");
    }
}
