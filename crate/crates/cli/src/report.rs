//! Report documents written by `analyze` and `verify`.

use hyperchain::analysis::lemmas::{LemmaSummary, TrialRecord};
use hyperchain::analysis::{ChainPropertyResult, MapFamily};
use serde::{Deserialize, Serialize};

use crate::spec::SystemSpec;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonResults {
    pub epsilon: String,
    pub results: Vec<ChainPropertyResult>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaSuiteReport {
    pub suite: Vec<String>,
    pub trials: usize,
    pub max_points: usize,
    pub family: MapFamily,
    pub hard_violation: bool,
    pub summaries: Vec<LemmaSummary>,
    pub records: Vec<TrialRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub tool_version: String,
    /// `analyze` or `verify`.
    pub command: String,
    pub seed: u64,
    pub budget: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<SystemSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub per_epsilon: Vec<EpsilonResults>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemma_suite: Option<LemmaSuiteReport>,
}

impl AnalysisReport {
    pub fn new(command: &str, seed: u64, budget: usize) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            seed,
            budget,
            spec: None,
            per_epsilon: Vec::new(),
            lemma_suite: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
