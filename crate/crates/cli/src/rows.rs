//! Row types. Field order is the CSV column order and must match
//! `schema/lambda-sieve.v1.json`.

use lambda_sieve_core::gaussfact::ExceptionalVerdict;
use lambda_sieve_core::jacobi::{LambdaMethod, LambdaRow, LambdaStatus};
use lambda_sieve_core::modmath::PrimalityStatus;
use lambda_sieve_core::pell::PellRecord;
use lambda_sieve_core::verify::InvariantOutcome;
use serde::{Deserialize, Serialize};

pub use lambda_sieve_core::specialnums::GlaisherRow;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalRow {
    pub p: u64,
    pub xi: u64,
    pub verdict: bool,
}

impl From<&ExceptionalVerdict> for ExceptionalRow {
    fn from(v: &ExceptionalVerdict) -> Self {
        Self {
            p: v.p,
            xi: v.xi.value(),
            verdict: v.verdict,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaScanRow {
    pub p: u64,
    pub status: LambdaStatus,
    pub method: Option<LambdaMethod>,
    /// `;`-separated routes that agreed with `method`.
    pub cross_checks: String,
    pub criterion_value: Option<u64>,
    pub reason: Option<String>,
}

fn method_name(m: LambdaMethod) -> &'static str {
    match m {
        LambdaMethod::Jacobi => "jacobi",
        LambdaMethod::GaussRatio => "gauss_ratio",
        LambdaMethod::Cornacchia => "cornacchia",
        LambdaMethod::FermatQuotient => "fermat_quotient",
    }
}

impl From<LambdaRow> for LambdaScanRow {
    fn from(r: LambdaRow) -> Self {
        let checks: Vec<&str> = r.cross_checks.iter().map(|&m| method_name(m)).collect();
        Self {
            p: r.p,
            status: r.status,
            method: r.method,
            cross_checks: checks.join(";"),
            criterion_value: r.criterion_value,
            reason: r.reason,
        }
    }
}

/// `p` and `x` are decimal strings; they outgrow every machine integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellRow {
    pub q: u64,
    pub digits: usize,
    pub status: PrimalityStatus,
    pub p: String,
    pub x: String,
}

impl From<&PellRecord> for PellRow {
    fn from(r: &PellRecord) -> Self {
        Self {
            q: r.q,
            digits: r.digits,
            status: r.status,
            p: r.p_candidate.to_string(),
            x: r.x.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerRow {
    pub p: u64,
    pub euler_mod_p2: u64,
    pub non_trivial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassNumberRow {
    pub d: u64,
    #[serde(rename = "D")]
    pub modulus: u64,
    pub discriminant: i64,
    pub h_forms: u64,
    pub h_charsum: u64,
    pub maximal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantRow {
    pub module: String,
    pub name: String,
    pub passed: bool,
    pub checked: u64,
    pub failures: u64,
    /// ` | `-separated, capped.
    pub counterexamples: String,
}

impl From<&InvariantOutcome> for InvariantRow {
    fn from(o: &InvariantOutcome) -> Self {
        Self {
            module: o.module.clone(),
            name: o.name.clone(),
            passed: o.passed,
            checked: o.checked,
            failures: o.failures,
            counterexamples: o.counterexamples.join(" | "),
        }
    }
}
