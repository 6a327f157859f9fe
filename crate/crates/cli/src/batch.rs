//! Catalog sweeps with an append-only JSONL results log keyed by config hash,
//! one record per sandwich instance.

use std::collections::{BTreeSet, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Seek, SeekFrom, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::Context;
use serde::Serialize;

use rayon::prelude::*;

use sandwich_core::category::{Kind, ObjectId, MAX_MATRIX_DIM};
use sandwich_core::sandwich::Ambient;

use crate::config::{Budgets, CategoryConfig, Check, Outputs, RunConfig, Scope};
use crate::run::{ambient, analyze_instance, exit_code, instances, RunRecord};

/// Size tuples (non-decreasing, one or two objects) with entries up to `max`.
fn size_tuples(max: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (1..=max).map(|n| vec![n]).collect();
    for m in 1..=max {
        out.extend((m..=max).map(|n| vec![m, n]));
    }
    out
}

/// The default sweep: every kind with sizes up to 2, full maps up to 3.
pub fn desk_catalog() -> Vec<CategoryConfig> {
    Kind::ALL
        .into_iter()
        .flat_map(|kind| {
            let max = match kind {
                Kind::FullMap => 3,
                Kind::MatF2 => 2.min(MAX_MATRIX_DIM),
                _ => 2,
            };
            size_tuples(max).into_iter().map(move |sizes| CategoryConfig { kind, sizes })
        })
        .collect()
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct BatchSummary {
    /// Instance records appended by this run.
    pub completed: usize,
    /// Instances already present in the log.
    pub skipped: usize,
    pub violations: usize,
    pub budget_exhausted: bool,
    /// Categories not started because the batch time cap ran out.
    pub not_started: usize,
    pub seconds: f64,
}

/// Outcome of one catalog category within a batch.
#[derive(Debug, Clone)]
pub struct CategoryProgress {
    pub category: CategoryConfig,
    pub completed: usize,
    pub skipped: usize,
    pub violations: usize,
    pub budget_exhausted: bool,
    pub seconds: f64,
}

impl BatchSummary {
    pub fn exit_code(&self) -> i32 {
        exit_code(self.violations, self.budget_exhausted || self.not_started > 0)
    }
}

/// Config hashes already present in the log. Lines that do not parse (for
/// example a record cut short by an interrupt) do not count as completed.
pub fn completed_hashes(log: &Path) -> anyhow::Result<HashSet<String>> {
    let file = match File::open(log) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(HashSet::new()),
        Err(e) => return Err(e).with_context(|| format!("reading {}", log.display())),
    };
    let mut done = HashSet::new();
    for line in BufReader::new(file).lines() {
        let line = line.with_context(|| format!("reading {}", log.display()))?;
        if let Ok(value) = serde_json::from_str::<serde_json::Value>(&line) {
            if let Some(h) = value.get("config_hash").and_then(|h| h.as_str()) {
                done.insert(h.to_string());
            }
        }
    }
    Ok(done)
}

/// Open the log for appending, starting a fresh line if the previous run
/// stopped mid-record.
fn open_log(log: &Path) -> anyhow::Result<File> {
    let mut file = OpenOptions::new()
        .create(true)
        .read(true)
        .append(true)
        .open(log)
        .with_context(|| format!("opening {}", log.display()))?;
    let len = file.metadata()?.len();
    if len > 0 {
        let mut last = [0u8; 1];
        file.seek(SeekFrom::Start(len - 1))?;
        file.read_exact(&mut last)?;
        if last[0] != b'\n' {
            file.write_all(b"\n")?;
        }
    }
    Ok(file)
}

/// The single-instance config for `(i, j, a)` with `a` global.
fn instance_config(base: &RunConfig, amb: &Ambient, (i, j, a): (ObjectId, ObjectId, usize)) -> RunConfig {
    let local = a - amb.category().hom(j, i).start;
    RunConfig {
        scope: Scope::Single { i: i.0, j: j.0, a: local },
        ..base.clone()
    }
}

/// Sweep the catalog, appending one record per sandwich instance. Instances
/// whose config hash is already in the log are skipped; within a category the
/// pending instances run in parallel and are written in scope order.
pub fn batch(
    catalog: &[CategoryConfig],
    checks: &BTreeSet<Check>,
    budgets: Budgets,
    log: &Path,
    mut progress: impl FnMut(&CategoryProgress, &[RunRecord]),
) -> anyhow::Result<BatchSummary> {
    let start = Instant::now();
    let done = completed_hashes(log)?;
    let mut file = open_log(log)?;
    let mut summary = BatchSummary::default();
    for (k, category) in catalog.iter().enumerate() {
        if start.elapsed().as_secs_f64() > budgets.time_cap {
            summary.not_started = catalog.len() - k;
            break;
        }
        let cat_start = Instant::now();
        let base = RunConfig {
            category: category.clone(),
            scope: Scope::AllPairs,
            checks: checks.clone(),
            budgets,
            outputs: Outputs::default(),
        };
        let amb = ambient(&base)?;
        let all = instances(&amb, &Scope::AllPairs);
        let total = all.len();
        let pending: Vec<_> = all
            .into_iter()
            .map(|t| (instance_config(&base, &amb, t), t))
            .filter(|(config, _)| !done.contains(&config.hash()))
            .collect();
        let skipped = total - pending.len();
        let outcomes: Vec<anyhow::Result<RunRecord>> = pending
            .into_par_iter()
            .map(|(config, t)| {
                let t0 = Instant::now();
                let report = analyze_instance(&amb, t, &config.checks, &config.budgets)?;
                Ok(RunRecord::new(&config, vec![report], t0.elapsed().as_secs_f64()))
            })
            .collect();
        let mut records = Vec::with_capacity(outcomes.len());
        let mut failure = None;
        for outcome in outcomes {
            match outcome {
                Ok(record) => {
                    writeln!(file, "{}", serde_json::to_string(&record)?)
                        .with_context(|| format!("appending to {}", log.display()))?;
                    records.push(record);
                }
                Err(e) if failure.is_none() => failure = Some(e),
                Err(_) => {}
            }
        }
        file.flush().with_context(|| format!("appending to {}", log.display()))?;
        let cat = CategoryProgress {
            category: category.clone(),
            completed: records.len(),
            skipped,
            violations: records.iter().map(|r| r.violation_count).sum(),
            budget_exhausted: records.iter().any(|r| r.budget_exhausted),
            seconds: cat_start.elapsed().as_secs_f64(),
        };
        summary.completed += cat.completed;
        summary.skipped += cat.skipped;
        summary.violations += cat.violations;
        summary.budget_exhausted |= cat.budget_exhausted;
        progress(&cat, &records);
        if let Some(e) = failure {
            return Err(e);
        }
    }
    summary.seconds = start.elapsed().as_secs_f64();
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_catalog_contents() {
        let cat = desk_catalog();
        assert!(cat.iter().all(|c| c.sizes.iter().all(|&n| n <= 3)));
        assert!(cat.iter().any(|c| c.kind == Kind::FullMap && c.sizes == [3, 3]));
        assert!(!cat.iter().any(|c| c.kind == Kind::PartialMap && c.sizes.contains(&3)));
        assert_eq!(size_tuples(2), vec![vec![1], vec![2], vec![1, 1], vec![1, 2], vec![2, 2]]);
    }
}
