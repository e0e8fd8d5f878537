use std::process::Command;

use lambda_sieve::commands::{
    cmd_class_numbers, cmd_euler_check, cmd_glaisher_table, cmd_pell, cmd_scan_exceptional,
    cmd_scan_lambda, cmd_verify, ScanConfig,
};
use lambda_sieve::output::{rows_from_csv, schema_columns, schema_params};
use lambda_sieve::rows::{
    ClassNumberRow, EulerRow, ExceptionalRow, GlaisherRow, InvariantRow, LambdaScanRow, PellRow,
};
use lambda_sieve::{Format, Table};
use lambda_sieve_core::jacobi::Normalization;
use serde::de::DeserializeOwned;
use serde::Serialize;

const BIN: &str = env!("CARGO_BIN_EXE_lambda-sieve");

fn cfg(workers: usize) -> ScanConfig {
    ScanConfig {
        workers,
        ..Default::default()
    }
}

fn header(command: &str) -> Vec<String> {
    schema_columns(command)
}

fn render<R: Serialize>(t: &Table<R>, format: Format) -> String {
    let cols = header(&t.command);
    let cols: Vec<&str> = cols.iter().map(String::as_str).collect();
    t.render(format, &cols).unwrap().body
}

/// JSON and CSV both parse back to the same rows, the CSV header and the
/// params are the frozen ones.
fn round_trip<R>(t: &Table<R>)
where
    R: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug,
{
    let json = render(t, Format::Json);
    let back = Table::<R>::from_json(&json).unwrap();
    assert_eq!(back.rows, t.rows);
    assert_eq!(back.params, t.params);
    assert_eq!(back.command, t.command);
    let csv = render(t, Format::Csv);
    assert!(!csv.contains('\r'));
    assert_eq!(csv.lines().next().unwrap(), header(&t.command).join(","));
    let rows: Vec<R> = rows_from_csv(&csv).unwrap();
    assert_eq!(rows, t.rows);
    let mut keys: Vec<String> = t.params.keys().cloned().collect();
    let mut frozen = schema_params(&t.command);
    keys.sort();
    frozen.sort();
    assert_eq!(keys, frozen, "{}", t.command);
}

#[test]
fn every_table_round_trips() {
    let c = cfg(2);
    round_trip::<ExceptionalRow>(&cmd_scan_exceptional(3, 3000, &c).unwrap());
    round_trip::<LambdaScanRow>(&cmd_scan_lambda(3, 3000, &c).unwrap());
    round_trip::<LambdaScanRow>(&cmd_scan_lambda(23, 3000, &c).unwrap());
    round_trip::<PellRow>(&cmd_pell(100, &c).unwrap());
    round_trip::<GlaisherRow>(&cmd_glaisher_table(193, &c).unwrap());
    round_trip::<EulerRow>(&cmd_euler_check(200, &c).unwrap());
    round_trip::<ClassNumberRow>(&cmd_class_numbers(200, &c).unwrap());
    round_trip::<InvariantRow>(&cmd_verify(Some("pell"), Normalization::Standard, &c).unwrap());
}

#[test]
fn output_is_identical_across_worker_counts() {
    for format in [Format::Csv, Format::Json] {
        let a = cmd_scan_exceptional(4, 20_000, &cfg(1)).unwrap();
        let b = cmd_scan_exceptional(4, 20_000, &cfg(3)).unwrap();
        assert_eq!(render(&a, format), render(&b, format));
        let a = cmd_scan_lambda(5, 20_000, &cfg(1)).unwrap();
        let b = cmd_scan_lambda(5, 20_000, &cfg(4)).unwrap();
        assert_eq!(render(&a, format), render(&b, format));
        let a = cmd_pell(200, &cfg(1)).unwrap();
        let b = cmd_pell(200, &cfg(3)).unwrap();
        assert_eq!(render(&a, format), render(&b, format));
        let a = cmd_class_numbers(500, &cfg(1)).unwrap();
        let b = cmd_class_numbers(500, &cfg(2)).unwrap();
        assert_eq!(render(&a, format), render(&b, format));
    }
}

#[test]
fn scan_exceptional_m6_matches_m3() {
    let t = cmd_scan_exceptional(6, 10_000, &cfg(2)).unwrap();
    let hits: Vec<u64> = t.rows.iter().filter(|r| r.verdict).map(|r| r.p).collect();
    assert_eq!(hits, [13, 181, 2521]);
    assert!(t
        .rows
        .iter()
        .all(|r| r.p % 6 == 1 && r.verdict == (r.xi == 0)));
}

#[test]
fn scan_lambda_reports_cross_checks_and_inapplicable_primes() {
    let t = cmd_scan_lambda(5, 10_000, &cfg(2)).unwrap();
    assert!(!t.rows.is_empty());
    assert!(t.rows.iter().all(|r| r.cross_checks == "jacobi"));
    // h(-23) = 3, and 3 ≡ 1 (mod 2) but not (mod 46): no row
    let t = cmd_scan_lambda(23, 1000, &cfg(1)).unwrap();
    assert!(t.rows.iter().all(|r| r.p % 46 == 1));
}

#[test]
fn class_number_rows() {
    let t = cmd_class_numbers(10, &cfg(1)).unwrap();
    let row = |d: u64| t.rows.iter().find(|r| r.d == d).unwrap().clone();
    assert_eq!((row(5).h_forms, row(5).maximal), (2, true));
    assert_eq!((row(7).h_forms, row(7).maximal), (1, false));
    assert!(t.rows.iter().all(|r| r.d != 4 && r.d != 8 && r.d != 9));
}

fn bin(args: &[&str]) -> std::process::Output {
    Command::new(BIN)
        .args(args)
        .env_remove("LAMBDA_SIEVE_MAX_BOUND")
        .output()
        .unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["pell", "--q-bound", "20"]).status.code(), Some(0));
    assert_eq!(
        bin(&["scan-exceptional", "--m", "1", "--bound", "10"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bin(&["scan-lambda", "--d", "12", "--bound", "10"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(bin(&["pell"]).status.code(), Some(2));
    assert_eq!(
        bin(&["glaisher-table", "--format", "xml"]).status.code(),
        Some(2)
    );
    assert_eq!(
        bin(&["verify", "--only", "nonsense"]).status.code(),
        Some(2)
    );
    let guarded = Command::new(BIN)
        .args(["scan-exceptional", "--m", "3", "--bound", "1000"])
        .env("LAMBDA_SIEVE_MAX_BOUND", "100")
        .output()
        .unwrap();
    assert_eq!(guarded.status.code(), Some(2));
    let ok = bin(&["verify", "--only", "pell.composite_indices"]);
    assert_eq!(ok.status.code(), Some(0));
    let faulty = bin(&[
        "verify",
        "--only",
        "route_agreement",
        "--normalization",
        "flipped",
        "--format",
        "csv",
    ]);
    assert_eq!(faulty.status.code(), Some(1));
    let out = String::from_utf8(faulty.stdout).unwrap();
    assert!(out.contains("d=3 p=13:"), "{out}");
}

#[test]
fn verify_filter_runs_only_pell() {
    let out = bin(&["verify", "--only=pell", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let t = Table::<InvariantRow>::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(t.rows.len(), 5);
    assert!(t.rows.iter().all(|r| r.module == "pell" && r.passed));
}

#[test]
fn out_file_and_checkpoint_resume() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let ck = dir.path().join("scan.ckpt");
    let args = [
        "scan-exceptional",
        "--m",
        "3",
        "--bound",
        "250000",
        "--format",
        "csv",
    ];
    let plain = bin(&args);
    assert_eq!(plain.status.code(), Some(0));

    let mut with_ck: Vec<&str> = args.to_vec();
    let (out_s, ck_s) = (out.to_str().unwrap(), ck.to_str().unwrap());
    with_ck.extend(["--out", out_s, "--checkpoint", ck_s]);
    assert_eq!(bin(&with_ck).status.code(), Some(0));
    assert_eq!(std::fs::read(&out).unwrap(), plain.stdout);
    let stored: serde_json::Value = serde_json::from_slice(&std::fs::read(&ck).unwrap()).unwrap();
    assert_eq!(stored["completed"], 250000);

    // a finished checkpoint resumes to the same table without new work
    std::fs::remove_file(&out).unwrap();
    assert_eq!(bin(&with_ck).status.code(), Some(0));
    assert_eq!(std::fs::read(&out).unwrap(), plain.stdout);

    // a checkpoint for other parameters is refused
    let other = [
        "scan-exceptional",
        "--m",
        "4",
        "--bound",
        "1000",
        "--checkpoint",
        ck_s,
    ];
    assert_eq!(bin(&other).status.code(), Some(1));
}

#[test]
fn text_output_truncates_long_candidates() {
    let out = bin(&["pell", "--q-bound", "79"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("381765135195...408101589361 (45 digits)"),
        "{text}"
    );
    assert!(text.ends_with("q = 3, 5, 7, 11, 13, 17, 19, 79\n"));
}
