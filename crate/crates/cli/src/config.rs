//! Run configuration, budget profiles and the config hash.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use sandwich_core::category::{Category, Kind, ObjectId, RawMorphism};
use sandwich_core::rank::RankBudget;

/// Environment variable naming the default budget profile.
pub const BUDGET_ENV: &str = "SANDWICH_KIT_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Green,
    Psets,
    Pullback,
    Hat,
    Fiber,
    Mi,
    Inverse,
    Rank,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::Green,
        Check::Psets,
        Check::Pullback,
        Check::Hat,
        Check::Fiber,
        Check::Mi,
        Check::Inverse,
        Check::Rank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Green => "green",
            Check::Psets => "psets",
            Check::Pullback => "pullback",
            Check::Hat => "hat",
            Check::Fiber => "fiber",
            Check::Mi => "mi",
            Check::Inverse => "inverse",
            Check::Rank => "rank",
        }
    }

    pub fn needs_frame(self) -> bool {
        matches!(self, Check::Pullback | Check::Hat | Check::Fiber | Check::Mi | Check::Inverse | Check::Rank)
    }
}

impl FromStr for Check {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .with_context(|| format!("unknown check `{s}`"))
    }
}

/// Parse `all` or a comma-separated list of check names.
pub fn parse_checks(text: &str) -> anyhow::Result<BTreeSet<Check>> {
    if text == "all" {
        return Ok(Check::ALL.into_iter().collect());
    }
    text.split(',').map(|t| t.trim().parse()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budgets {
    /// Cap on the number of morphisms in the category.
    pub element_cap: usize,
    /// Search nodes per rank computation.
    pub rank_nodes: u64,
    /// Wall-clock cap in seconds, per rank computation and per batch.
    pub time_cap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Quick,
    Desk,
    Deep,
}

impl FromStr for Profile {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        match s {
            "quick" => Ok(Profile::Quick),
            "desk" => Ok(Profile::Desk),
            "deep" => Ok(Profile::Deep),
            other => bail!("unknown budget profile `{other}` (expected quick, desk or deep)"),
        }
    }
}

impl Profile {
    /// Profile named by the environment, defaulting to `desk`.
    pub fn from_env() -> anyhow::Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(name) => name.parse(),
            Err(_) => Ok(Profile::Desk),
        }
    }

    pub fn budgets(self) -> Budgets {
        match self {
            Profile::Quick => Budgets {
                element_cap: 2_000,
                rank_nodes: 100_000,
                time_cap: 60.0,
            },
            Profile::Desk => Budgets {
                element_cap: 20_000,
                rank_nodes: 2_000_000,
                time_cap: 600.0,
            },
            Profile::Deep => Budgets {
                element_cap: 20_000,
                rank_nodes: 100_000_000,
                time_cap: 7_200.0,
            },
        }
    }
}

impl Budgets {
    pub fn rank(&self) -> RankBudget {
        RankBudget {
            max_nodes: self.rank_nodes,
            max_seconds: Some(self.time_cap),
            ..RankBudget::default()
        }
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.element_cap == 0 || self.rank_nodes == 0 || self.time_cap.is_nan() || self.time_cap <= 0.0 {
            bail!("budgets must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// One sandwich element; `a` indexes the hom-set `S_ji`.
    Single { i: usize, j: usize, a: usize },
    /// Every `a ∈ S_ji`.
    AllA { i: usize, j: usize },
    /// Every pair of objects and every sandwich element.
    AllPairs,
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Single { i, j, a } => write!(f, "i={i} j={j} a#{a}"),
            Scope::AllA { i, j } => write!(f, "i={i} j={j} all a"),
            Scope::AllPairs => f.write_str("all pairs"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CategoryConfig {
    pub kind: Kind,
    pub sizes: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outputs {
    pub out: Option<PathBuf>,
    pub dot: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub category: CategoryConfig,
    pub scope: Scope,
    pub checks: BTreeSet<Check>,
    pub budgets: Budgets,
    #[serde(default)]
    pub outputs: Outputs,
}

impl RunConfig {
    /// SHA-256 of the canonical JSON of everything except output paths.
    pub fn hash(&self) -> String {
        let canonical = serde_json::json!({
            "category": self.category,
            "scope": self.scope,
            "checks": self.checks,
            "budgets": self.budgets,
        });
        let digest = Sha256::digest(canonical.to_string().as_bytes());
        format!("{digest:x}")
    }

    pub fn validate(&self, cat: &Category) -> anyhow::Result<()> {
        self.budgets.validate()?;
        let k = cat.object_count();
        let check_obj = |o: usize| -> anyhow::Result<()> {
            if o >= k {
                bail!("object {o} does not exist (the category has {k} objects)");
            }
            Ok(())
        };
        match self.scope {
            Scope::Single { i, j, a } => {
                check_obj(i)?;
                check_obj(j)?;
                let n = cat.hom(ObjectId(j), ObjectId(i)).len();
                if a >= n {
                    bail!("a#{a} is out of range: S_{j}{i} has {n} elements");
                }
            }
            Scope::AllA { i, j } => {
                check_obj(i)?;
                check_obj(j)?;
            }
            Scope::AllPairs => {}
        }
        Ok(())
    }
}

/// Parse a comma-separated list of object sizes.
pub fn parse_sizes(text: &str) -> anyhow::Result<Vec<usize>> {
    let sizes: Vec<usize> = text
        .trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .map(|t| t.trim().parse::<usize>().with_context(|| format!("bad size `{t}`")))
        .collect::<anyhow::Result<_>>()?;
    if sizes.is_empty() || sizes.contains(&0) {
        bail!("sizes must be a non-empty list of positive integers");
    }
    Ok(sizes)
}

/// Resolve `--a`: a plain number indexes `S_ji`; a bracketed payload such as
/// `[21-]` or `[10/01]` names the morphism itself.
pub fn resolve_a(cat: &Category, i: usize, j: usize, text: &str) -> anyhow::Result<usize> {
    let hom = cat.hom(ObjectId(j), ObjectId(i));
    if let Ok(index) = text.parse::<usize>() {
        return Ok(index);
    }
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .with_context(|| format!("`{text}` is neither an index nor a bracketed payload"))?;
    let payload = inner
        .chars()
        .filter(|&c| c != '/')
        .map(|c| match c {
            '-' => Ok(0u8),
            d => d
                .to_digit(10)
                .map(|v| v as u8)
                .with_context(|| format!("bad payload character `{d}`")),
        })
        .collect::<anyhow::Result<Vec<u8>>>()?;
    let raw = RawMorphism {
        src: j,
        dst: i,
        payload,
    };
    let global = cat.locate_raw(&raw).with_context(|| format!("payload {text} is not in S_{j}{i}"))?;
    Ok(global - hom.start)
}
