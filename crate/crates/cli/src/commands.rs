use std::path::PathBuf;

use lambda_sieve_core::gaussfact::exceptional_verdicts;
use lambda_sieve_core::jacobi::{scan_lambda_rows_range, LambdaStatus, Normalization};
use lambda_sieve_core::modmath::{sieve_primes, PrimeRange};
use lambda_sieve_core::pell::{cd_search_range, PROGRESS_INTERVAL};
use lambda_sieve_core::quadfields::{class_number_charsum, is_square_free, make_field};
use lambda_sieve_core::scan::try_ordered_map;
use lambda_sieve_core::specialnums::{euler_last, glaisher_row};
use lambda_sieve_core::verify::{self, VerifyConfig};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::{Cli, Command, Format};
use crate::checkpoint::run_chunked;
use crate::output::{schema_columns, Rendered, Table};
use crate::rows::{
    ClassNumberRow, EulerRow, ExceptionalRow, GlaisherRow, InvariantRow, LambdaScanRow, PellRow,
};
use crate::{usage, CliResult};

/// Default size guards; `--max-bound` / `LAMBDA_SIEVE_MAX_BOUND` replaces them.
pub const SCAN_GUARD: u64 = 10_000_000;
pub const PELL_GUARD: u64 = 10_000;
pub const RECURRENCE_GUARD: u64 = 100_000;
pub const CLASS_NUMBER_GUARD: u64 = 100_000;

/// Primes per checkpoint block in the prime scans.
pub const SCAN_SPAN: u64 = 100_000;
/// Primes per checkpoint block in the Euler check.
pub const EULER_SPAN: u64 = 2_000;

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub workers: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
    pub max_bound: Option<u64>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            workers: 1,
            format: Format::Text,
            out: None,
            checkpoint: None,
            max_bound: None,
        }
    }
}

impl ScanConfig {
    fn guard(&self, name: &str, value: u64, default_limit: u64) -> CliResult<()> {
        let limit = self.max_bound.unwrap_or(default_limit);
        if value > limit {
            return Err(usage(format!(
                "{name} = {value} exceeds the guard {limit}; raise it with --max-bound or \
                 LAMBDA_SIEVE_MAX_BOUND"
            )));
        }
        Ok(())
    }
}

fn params(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn list(values: impl IntoIterator<Item = u64>) -> String {
    let items: Vec<String> = values.into_iter().map(|v| v.to_string()).collect();
    if items.is_empty() {
        "none".to_string()
    } else {
        items.join(", ")
    }
}

fn primes_one_mod(m: u64, lower: u64, upper: u64) -> Vec<u64> {
    if upper < lower.max(3) {
        return Vec::new();
    }
    let range = PrimeRange::new(lower.max(3), upper, Some((m, 1))).expect("valid range");
    sieve_primes(range).filter(|&p| p > m).collect()
}

pub fn cmd_scan_exceptional(
    m: u64,
    bound: u64,
    cfg: &ScanConfig,
) -> CliResult<Table<ExceptionalRow>> {
    if m < 2 {
        return Err(usage(format!("--m must be at least 2, got {m}")));
    }
    cfg.guard("--bound", bound, SCAN_GUARD)?;
    let command = "scan-exceptional";
    let p = params(&[("m", m.into()), ("bound", bound.into())]);
    let rows = run_chunked(
        command,
        &p,
        (3, bound.max(3)),
        SCAN_SPAN,
        cfg.checkpoint.as_deref(),
        |lo, hi| {
            let verdicts = exceptional_verdicts(lo, hi, m, cfg.workers)?;
            Ok(verdicts.iter().map(ExceptionalRow::from).collect())
        },
    )?;
    let hits = list(rows.iter().filter(|r| r.verdict).map(|r| r.p));
    let summary = format!("1-exceptional primes for m = {m} up to {bound}: {hits}");
    Ok(Table::new(command, p, rows).with_summary(summary))
}

fn check_d(d: u64) -> CliResult<()> {
    if d == 0 || !is_square_free(d) {
        return Err(usage(format!(
            "--d must be a positive square-free integer, got {d}"
        )));
    }
    Ok(())
}

pub fn cmd_scan_lambda(d: u64, bound: u64, cfg: &ScanConfig) -> CliResult<Table<LambdaScanRow>> {
    check_d(d)?;
    cfg.guard("--bound", bound, SCAN_GUARD)?;
    let field = make_field(d)?;
    let command = "scan-lambda";
    let p = params(&[("d", d.into()), ("bound", bound.into())]);
    let rows = run_chunked(
        command,
        &p,
        (3, bound.max(3)),
        SCAN_SPAN,
        cfg.checkpoint.as_deref(),
        |lo, hi| {
            let rows = scan_lambda_rows_range(&field, lo, hi, cfg.workers)?;
            Ok(rows.into_iter().map(LambdaScanRow::from).collect())
        },
    )?;
    let pick = |s: LambdaStatus| list(rows.iter().filter(|r| r.status == s).map(|r| r.p));
    let mut summary = format!(
        "non-trivial primes for Q(sqrt -{d}) up to {bound}: {}",
        pick(LambdaStatus::NonTrivial)
    );
    if rows.iter().any(|r| r.status == LambdaStatus::Inapplicable) {
        summary.push_str(&format!(
            "; inapplicable: {}",
            pick(LambdaStatus::Inapplicable)
        ));
    }
    Ok(Table::new(command, p, rows).with_summary(summary))
}

pub fn cmd_pell(q_bound: u64, cfg: &ScanConfig) -> CliResult<Table<PellRow>> {
    if q_bound < 3 {
        return Err(usage(format!(
            "--q-bound must be at least 3, got {q_bound}"
        )));
    }
    cfg.guard("--q-bound", q_bound, PELL_GUARD)?;
    let command = "pell";
    let p = params(&[("q_bound", q_bound.into())]);
    let ck = cfg.checkpoint.as_deref();
    let rows = run_chunked(
        command,
        &p,
        (1, q_bound),
        PROGRESS_INTERVAL,
        ck,
        |lo, hi| {
            let records = cd_search_range(lo, hi, cfg.workers)?;
            if ck.is_some() {
                eprintln!(
                    "pell: q <= {hi} done, {} candidates in this block",
                    records.len()
                );
            }
            Ok(records.iter().map(PellRow::from).collect())
        },
    )?;
    let summary = format!(
        "non-composite candidates for q <= {q_bound}: q = {}",
        list(rows.iter().map(|r| r.q))
    );
    Ok(Table::new(command, p, rows).with_summary(summary))
}

pub fn cmd_glaisher_table(bound: u64, cfg: &ScanConfig) -> CliResult<Table<GlaisherRow>> {
    cfg.guard("--bound", bound, RECURRENCE_GUARD)?;
    let primes = primes_one_mod(3, 7, bound);
    let rows = try_ordered_map(&primes, cfg.workers, |&p| glaisher_row(p))?;
    let zeros = list(rows.iter().filter(|r| r.mod_p2 == 0).map(|r| r.p));
    let summary = format!("G_(p-1) ≡ 0 (mod p^2) for p <= {bound}: {zeros}");
    let p = params(&[("bound", bound.into())]);
    Ok(Table::new("glaisher-table", p, rows).with_summary(summary))
}

pub fn cmd_euler_check(bound: u64, cfg: &ScanConfig) -> CliResult<Table<EulerRow>> {
    cfg.guard("--bound", bound, RECURRENCE_GUARD)?;
    let command = "euler-check";
    let p = params(&[("bound", bound.into())]);
    let rows = run_chunked(
        command,
        &p,
        (5, bound.max(5)),
        EULER_SPAN,
        cfg.checkpoint.as_deref(),
        |lo, hi| {
            let primes = primes_one_mod(4, lo, hi);
            Ok(try_ordered_map(&primes, cfg.workers, |&p| {
                let e = euler_last(p)?.value();
                Ok(EulerRow {
                    p,
                    euler_mod_p2: e,
                    non_trivial: e == 0,
                })
            })?)
        },
    )?;
    let hits = list(rows.iter().filter(|r| r.non_trivial).map(|r| r.p));
    let summary = format!("E_(p-1) ≡ 0 (mod p^2) for p <= {bound}: {hits}");
    Ok(Table::new(command, p, rows).with_summary(summary))
}

pub fn cmd_class_numbers(bound: u64, cfg: &ScanConfig) -> CliResult<Table<ClassNumberRow>> {
    if bound == 0 {
        return Err(usage("--bound must be positive"));
    }
    cfg.guard("--bound", bound, CLASS_NUMBER_GUARD)?;
    let ds: Vec<u64> = (1..=bound).filter(|&d| is_square_free(d)).collect();
    let rows = try_ordered_map(&ds, cfg.workers, |&d| {
        let field = make_field(d)?;
        Ok(ClassNumberRow {
            d,
            modulus: field.modulus(),
            discriminant: field.discriminant(),
            h_forms: field.class_number(),
            h_charsum: class_number_charsum(&field)?,
            maximal: field.is_maximal(),
        })
    })?;
    let maximal = list(rows.iter().filter(|r| r.maximal).map(|r| r.d));
    let disagree = list(
        rows.iter()
            .filter(|r| r.h_forms != r.h_charsum)
            .map(|r| r.d),
    );
    let summary = format!(
        "maximal class number for d <= {bound}: {maximal}; forms/character-sum disagreements: {disagree}"
    );
    let p = params(&[("bound", bound.into())]);
    Ok(Table::new("class-numbers", p, rows).with_summary(summary))
}

pub fn cmd_verify(
    only: Option<&str>,
    normalization: Normalization,
    cfg: &ScanConfig,
) -> CliResult<Table<InvariantRow>> {
    let config = VerifyConfig {
        only: only.map(String::from),
        workers: cfg.workers,
        normalization,
    };
    let report = verify::run(&config).map_err(|e| match e {
        lambda_sieve_core::Error::Precondition(msg) => usage(msg),
        other => other.into(),
    })?;
    let rows: Vec<InvariantRow> = report.outcomes.iter().map(InvariantRow::from).collect();
    let passed = rows.iter().filter(|r| r.passed).count();
    let failed: Vec<&str> = rows
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.name.as_str())
        .collect();
    let mut summary = format!("{passed}/{} invariants passed", rows.len());
    if !failed.is_empty() {
        summary.push_str(&format!("; failed: {}", failed.join(", ")));
    }
    let norm = match normalization {
        Normalization::Standard => "standard",
        Normalization::Flipped => "flipped",
    };
    let p = params(&[
        ("only", only.map_or(Value::Null, Value::from)),
        ("normalization", norm.into()),
    ]);
    Ok(Table::new("verify", p, rows).with_summary(summary))
}

fn render<R: Serialize>(table: Table<R>, format: Format) -> CliResult<Rendered> {
    let columns = schema_columns(&table.command);
    let header: Vec<&str> = columns.iter().map(String::as_str).collect();
    Ok(table.render(format, &header)?)
}

/// Runs a parsed command and renders its table; printing is left to the caller.
pub fn run(cli: &Cli) -> CliResult<Rendered> {
    let workers = match cli.common.workers {
        Some(0) => return Err(usage("--workers must be at least 1")),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let cfg = ScanConfig {
        workers,
        format: cli.common.format,
        out: cli.common.out.clone(),
        checkpoint: cli.common.checkpoint.clone(),
        max_bound: cli.common.max_bound,
    };
    let f = cfg.format;
    match &cli.command {
        Command::ScanExceptional { m, bound } => render(cmd_scan_exceptional(*m, *bound, &cfg)?, f),
        Command::ScanLambda { d, bound } => render(cmd_scan_lambda(*d, *bound, &cfg)?, f),
        Command::Pell { q_bound } => render(cmd_pell(*q_bound, &cfg)?, f),
        Command::GlaisherTable { bound } => render(cmd_glaisher_table(*bound, &cfg)?, f),
        Command::EulerCheck { bound } => render(cmd_euler_check(*bound, &cfg)?, f),
        Command::ClassNumbers { bound } => render(cmd_class_numbers(*bound, &cfg)?, f),
        Command::Verify {
            only,
            normalization,
        } => {
            let table = cmd_verify(only.as_deref(), (*normalization).into(), &cfg)?;
            let success = table.rows.iter().all(|r| r.passed);
            let mut rendered = render(table, f)?;
            rendered.success = success;
            Ok(rendered)
        }
    }
}
