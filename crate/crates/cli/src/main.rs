//! `sandwich-kit`: analyze sandwich semigroups of the catalog categories,
//! draw their egg-boxes, sweep the catalog and compute ranks.
//!
//! Exit codes: 0 all checks pass, 1 a theorem check failed, 2 usage or I/O
//! error, 3 a budget ran out.

mod batch;
mod config;
mod render;
mod run;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use sandwich_core::category::{build_category_with, BuildOptions, Kind};
use sandwich_core::error::Error as CoreError;

use crate::config::{parse_checks, parse_sizes, resolve_a, Budgets, CategoryConfig, Check, Profile, RunConfig, Scope};
use crate::render::{LayoutCapExceeded, LAYOUT_CAP};
use crate::run::{RunRecord, TOOL_VERSION};

#[derive(Parser)]
#[command(name = "sandwich-kit", version = TOOL_VERSION, about = "Sandwich semigroups of finite categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run theorem checks on sandwich elements and write a JSON report.
    Analyze(Target),
    /// Draw paired egg-boxes of P and W (text and DOT).
    Eggbox(EggboxArgs),
    /// Sweep the catalog, appending one record per category to a JSONL log.
    Batch(BatchArgs),
    /// Brute-force ranks and the rank formulas.
    Rank(Target),
}

#[derive(Args, Clone)]
struct BudgetArgs {
    /// Budget profile (quick, desk, deep); defaults to $SANDWICH_KIT_BUDGET or desk.
    #[arg(long)]
    profile: Option<String>,
    /// Cap on the number of morphisms in the category.
    #[arg(long)]
    budget_elements: Option<usize>,
    /// Search nodes per rank computation.
    #[arg(long)]
    budget_rank_nodes: Option<u64>,
    /// Seconds per rank computation and per batch.
    #[arg(long)]
    budget_seconds: Option<f64>,
}

impl BudgetArgs {
    fn resolve(&self, base: Option<Budgets>) -> anyhow::Result<Budgets> {
        let mut b = match (&self.profile, base) {
            (Some(name), _) => name.parse::<Profile>()?.budgets(),
            (None, Some(b)) => b,
            (None, None) => Profile::from_env()?.budgets(),
        };
        if let Some(v) = self.budget_elements {
            b.element_cap = v;
        }
        if let Some(v) = self.budget_rank_nodes {
            b.rank_nodes = v;
        }
        if let Some(v) = self.budget_seconds {
            b.time_cap = v;
        }
        b.validate()?;
        Ok(b)
    }
}

#[derive(Args)]
struct Target {
    /// JSON file holding a RunConfig; flags given alongside override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Category kind: fullmap, partialmap, injpartial or matf2.
    #[arg(long)]
    kind: Option<String>,
    /// Object sizes, comma separated.
    #[arg(long)]
    sizes: Option<String>,
    /// Target object of a (a lies in S_ji).
    #[arg(long)]
    i: Option<usize>,
    /// Source object of a.
    #[arg(long)]
    j: Option<usize>,
    /// Sandwich element: an index into S_ji or a payload such as [21-].
    #[arg(long)]
    a: Option<String>,
    /// Every object pair and every sandwich element.
    #[arg(long, conflicts_with_all = ["i", "j", "a"])]
    all_pairs: bool,
    /// `all` or a comma-separated subset of green,psets,pullback,hat,fiber,mi,inverse,rank.
    #[arg(long)]
    checks: Option<String>,
    #[command(flatten)]
    budgets: BudgetArgs,
    /// Output file (JSON report, or text for eggbox).
    #[arg(long)]
    out: Option<PathBuf>,
    /// DOT output file for egg-boxes.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct EggboxArgs {
    #[command(flatten)]
    target: Target,
    /// Draw every D-class of the sandwich semigroup instead of the P/W pairs.
    #[arg(long)]
    whole: bool,
    /// Largest number of cells allowed in one egg-box.
    #[arg(long, default_value_t = LAYOUT_CAP)]
    layout_cap: usize,
}

#[derive(Args)]
struct BatchArgs {
    /// Append-only results log.
    #[arg(long, default_value = "results.jsonl")]
    log: PathBuf,
    /// Restrict the sweep to one kind.
    #[arg(long)]
    kind: Option<String>,
    /// `all` or a comma-separated subset of checks.
    #[arg(long, default_value = "all")]
    checks: String,
    #[command(flatten)]
    budgets: BudgetArgs,
}

/// Usage problems found after argument parsing.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

impl Target {
    fn config(&self, default_checks: &str) -> anyhow::Result<RunConfig> {
        let base: Option<RunConfig> = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                Some(serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?)
            }
            None => None,
        };
        let kind: Kind = match (&self.kind, &base) {
            (Some(k), _) => k.parse().map_err(|e: CoreError| usage(e.to_string()))?,
            (None, Some(b)) => b.category.kind,
            (None, None) => return Err(usage("--kind is required")),
        };
        let sizes = match (&self.sizes, &base) {
            (Some(s), _) => parse_sizes(s).map_err(|e| usage(e.to_string()))?,
            (None, Some(b)) => b.category.sizes.clone(),
            (None, None) => return Err(usage("--sizes is required")),
        };
        let checks = match (&self.checks, &base) {
            (Some(c), _) => parse_checks(c).map_err(|e| usage(e.to_string()))?,
            (None, Some(b)) => b.checks.clone(),
            (None, None) => parse_checks(default_checks)?,
        };
        let budgets = self.budgets.resolve(base.as_ref().map(|b| b.budgets)).map_err(|e| usage(e.to_string()))?;
        let scope = self.scope(kind, &sizes, budgets, base.as_ref().map(|b| b.scope.clone()))?;
        let mut outputs = base.map(|b| b.outputs).unwrap_or_default();
        if self.out.is_some() {
            outputs.out = self.out.clone();
        }
        if self.dot.is_some() {
            outputs.dot = self.dot.clone();
        }
        Ok(RunConfig {
            category: CategoryConfig { kind, sizes },
            scope,
            checks,
            budgets,
            outputs,
        })
    }

    fn scope(&self, kind: Kind, sizes: &[usize], budgets: Budgets, base: Option<Scope>) -> anyhow::Result<Scope> {
        if self.all_pairs {
            return Ok(Scope::AllPairs);
        }
        if self.i.is_none() && self.j.is_none() && self.a.is_none() {
            if let Some(s) = base {
                return Ok(s);
            }
        }
        let (i, j) = (self.i.unwrap_or(0), self.j.unwrap_or(0));
        match &self.a {
            None => Ok(Scope::AllA { i, j }),
            Some(text) => {
                let opts = BuildOptions {
                    max_elements: budgets.element_cap,
                    ..BuildOptions::default()
                };
                let cat = build_category_with(kind, sizes, &opts).map_err(|e| usage(e.to_string()))?;
                if i >= cat.object_count() || j >= cat.object_count() {
                    return Err(usage(format!("objects {i} and {j} must be below {}", cat.object_count())));
                }
                let a = resolve_a(&cat, i, j, text).map_err(|e| usage(e.to_string()))?;
                Ok(Scope::Single { i, j, a })
            }
        }
    }
}

fn write_or_print(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn summary_line(record: &RunRecord) -> String {
    format!(
        "{} {:?} ({}): {} instances, {} violations, budget {}, {:.2}s",
        record.config.category.kind,
        record.config.category.sizes,
        record.config.scope,
        record.instances.len(),
        record.violation_count,
        if record.budget_exhausted { "exhausted" } else { "ok" },
        record.wall_clock_seconds
    )
}

fn report_violations(record: &RunRecord) {
    for inst in &record.instances {
        for v in &inst.violations {
            eprintln!("violation at i={} j={} a={}: {} {:?}", inst.i, inst.j, inst.a_payload, v.clause, v.witness);
        }
    }
}

fn write_dot(config: &RunConfig) -> anyhow::Result<()> {
    let Some(path) = &config.outputs.dot else {
        return Ok(());
    };
    let amb = run::ambient(config)?;
    let rendered = run::instances(&amb, &config.scope)
        .into_iter()
        .map(|t| render::eggboxes(&amb, t, false, LAYOUT_CAP).map(|r| r.dot))
        .collect::<anyhow::Result<Vec<_>>>()?;
    std::fs::write(path, rendered.concat()).with_context(|| format!("writing {}", path.display()))
}

fn cmd_analyze(target: &Target) -> anyhow::Result<i32> {
    let config = target.config("all")?;
    let record = run::run(&config)?;
    report_violations(&record);
    let json = serde_json::to_string_pretty(&record)?;
    match &config.outputs.out {
        Some(path) => {
            std::fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
            println!("{}", summary_line(&record));
        }
        None => println!("{json}"),
    }
    write_dot(&config)?;
    Ok(record.exit_code())
}

fn cmd_eggbox(args: &EggboxArgs) -> anyhow::Result<i32> {
    let config = args.target.config("green")?;
    let amb = run::ambient(&config)?;
    let rendered = run::instances(&amb, &config.scope)
        .into_par_iter()
        .map(|t| render::eggboxes(&amb, t, args.whole, args.layout_cap))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let text: String = rendered.iter().map(|r| r.text.as_str()).collect::<Vec<_>>().join("\n");
    write_or_print(config.outputs.out.as_deref(), &text)?;
    if let Some(path) = &config.outputs.dot {
        let dot: String = rendered.iter().map(|r| r.dot.as_str()).collect();
        std::fs::write(path, dot).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(0)
}

fn cmd_rank(target: &Target) -> anyhow::Result<i32> {
    let mut config = target.config("rank")?;
    config.checks = BTreeSet::from([Check::Rank]);
    let record = run::run(&config)?;
    report_violations(&record);
    let show = |r: Option<usize>| r.map_or_else(|| "budget".to_string(), |v| v.to_string());
    println!("{:<10} {:>5} {:>6} {:>7} {:>7} {:>7} {:>9}", "a", "|S|", "bound", "rank S", "rank P", "rank EP", "idrank EP");
    for inst in &record.instances {
        let Some(section) = &inst.rank else { continue };
        let rank_s = section.sandwich_bound.rank.as_ref().and_then(|r| r.exact());
        let f = section.formulas.as_ref();
        println!(
            "{:<10} {:>5} {:>6} {:>7} {:>7} {:>7} {:>9}",
            inst.a_payload,
            inst.size,
            section.sandwich_bound.bound.bound,
            show(rank_s),
            f.map_or("-".into(), |f| show(f.rank_p.exact())),
            f.map_or("-".into(), |f| show(f.rank_ep.exact())),
            f.map_or("-".into(), |f| show(f.idrank_ep.exact())),
        );
    }
    if let Some(path) = &config.outputs.out {
        std::fs::write(path, serde_json::to_string_pretty(&record)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(record.exit_code())
}

fn cmd_batch(args: &BatchArgs) -> anyhow::Result<i32> {
    let checks = parse_checks(&args.checks).map_err(|e| usage(e.to_string()))?;
    let budgets = args.budgets.resolve(None).map_err(|e| usage(e.to_string()))?;
    let mut catalog = batch::desk_catalog();
    if let Some(k) = &args.kind {
        let kind: Kind = k.parse().map_err(|e: CoreError| usage(e.to_string()))?;
        catalog.retain(|c| c.kind == kind);
    }
    let summary = batch::batch(&catalog, &checks, budgets, &args.log, |cat, records| {
        records.iter().for_each(report_violations);
        println!(
            "{} {:?}: {} instances run, {} already logged, {} violations, budget {}, {:.2}s",
            cat.category.kind,
            cat.category.sizes,
            cat.completed,
            cat.skipped,
            cat.violations,
            if cat.budget_exhausted { "exhausted" } else { "ok" },
            cat.seconds
        );
    })?;
    println!("{}", serde_json::to_string(&summary)?);
    if summary.not_started > 0 {
        eprintln!("time cap reached with {} categories not started", summary.not_started);
    }
    Ok(summary.exit_code())
}

fn exit_code_for(err: &anyhow::Error) -> i32 {
    if err.chain().any(|e| e.is::<LayoutCapExceeded>()) {
        return 3;
    }
    if err
        .chain()
        .any(|e| matches!(e.downcast_ref::<CoreError>(), Some(CoreError::Budget { .. })))
    {
        return 3;
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Analyze(t) => cmd_analyze(t),
        Command::Eggbox(t) => cmd_eggbox(t),
        Command::Batch(b) => cmd_batch(b),
        Command::Rank(t) => cmd_rank(t),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err) as u8)
        }
    }
}
