//! Resumable scans. A checkpoint stores the rows found so far and the last
//! prime (or index) fully covered; a run with a matching command and
//! parameters continues after it.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::output::SCHEMA_VERSION;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint<R> {
    pub schema: String,
    pub command: String,
    pub params: Map<String, Value>,
    pub completed: u64,
    pub rows: Vec<R>,
}

fn load<R: DeserializeOwned>(
    path: &Path,
    command: &str,
    params: &Map<String, Value>,
) -> anyhow::Result<Option<Checkpoint<R>>> {
    if !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let ck: Checkpoint<R> = serde_json::from_str(&text)
        .with_context(|| format!("parsing checkpoint {}", path.display()))?;
    if ck.schema != SCHEMA_VERSION || ck.command != command || ck.params != *params {
        bail!(
            "checkpoint {} belongs to a different run ({} {:?})",
            path.display(),
            ck.command,
            ck.params
        );
    }
    Ok(Some(ck))
}

fn save<R: Serialize>(path: &Path, ck: &Checkpoint<R>) -> anyhow::Result<()> {
    let tmp = path.with_extension("partial");
    fs::write(&tmp, serde_json::to_vec(ck)?)
        .with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("replacing {}", path.display()))?;
    Ok(())
}

/// Covers `[lower, upper]` in blocks of `span`, calling `step(lo, hi)` per
/// block. Without a checkpoint path the whole range is one block.
pub fn run_chunked<R, F>(
    command: &str,
    params: &Map<String, Value>,
    (lower, upper): (u64, u64),
    span: u64,
    path: Option<&Path>,
    mut step: F,
) -> anyhow::Result<Vec<R>>
where
    R: Serialize + DeserializeOwned,
    F: FnMut(u64, u64) -> anyhow::Result<Vec<R>>,
{
    let Some(path) = path else {
        return step(lower, upper);
    };
    let mut ck = match load(path, command, params)? {
        Some(ck) => ck,
        None => Checkpoint {
            schema: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            params: params.clone(),
            completed: lower.saturating_sub(1),
            rows: Vec::new(),
        },
    };
    while ck.completed < upper {
        let lo = ck.completed + 1;
        let hi = lo.saturating_add(span - 1).min(upper);
        ck.rows.extend(step(lo, hi)?);
        ck.completed = hi;
        save(path, &ck)?;
    }
    Ok(ck.rows)
}
