//! Run configuration, budgets and the reproducibility hash.

use serde::Serialize;
use sha2::{Digest, Sha256};
use sqfree_core::graph::DEFAULT_VERTEX_CAP;
use sqfree_core::{LengthSeq, SolverConfig};

use crate::error::CliError;

/// Overrides every default cap when set.
pub const BUDGET_ENV: &str = "SQFREE_BUDGET";

/// Parses `--s 3,5` (ascending, largest last).
pub fn parse_lengths(text: &str) -> Result<LengthSeq, CliError> {
    let values = text
        .split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<usize>()
                .map_err(|_| CliError::usage(format!("invalid length {part:?} in --s")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LengthSeq::new(values)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budgets {
    /// Cap on `l^N` when building `G(s)`.
    pub vertex_cap: u64,
    /// Cap on search nodes per block count in the exact solver.
    pub node_budget: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            vertex_cap: DEFAULT_VERTEX_CAP,
            node_budget: SolverConfig::DEFAULT_NODE_BUDGET,
        }
    }
}

impl Budgets {
    /// Defaults, replaced wholesale by `SQFREE_BUDGET` if it is set.
    pub fn from_env() -> Result<Self, CliError> {
        match std::env::var(BUDGET_ENV) {
            Ok(text) => {
                let cap = text.trim().parse::<u64>().map_err(|_| {
                    CliError::usage(format!(
                        "{BUDGET_ENV} must be a positive integer, got {text:?}"
                    ))
                })?;
                Ok(Budgets {
                    vertex_cap: cap,
                    node_budget: cap,
                })
            }
            Err(_) => Ok(Budgets::default()),
        }
    }

    pub fn with_overrides(self, vertex_cap: Option<u64>, node_budget: Option<u64>) -> Self {
        Budgets {
            vertex_cap: vertex_cap.unwrap_or(self.vertex_cap),
            node_budget: node_budget.unwrap_or(self.node_budget),
        }
    }
}

/// Everything that determines a command's output. Thread count and output format
/// are deliberately absent: they never change the result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    pub budgets: Budgets,
    /// Command-specific switches, sorted by name.
    pub options: std::collections::BTreeMap<String, String>,
}

impl RunConfig {
    pub fn new(command: &str, budgets: Budgets) -> Self {
        RunConfig {
            command: command.to_string(),
            s: None,
            l: None,
            seed: None,
            steps: None,
            k_max: None,
            budgets,
            options: Default::default(),
        }
    }

    pub fn option(mut self, key: &str, value: impl ToString) -> Self {
        self.options.insert(key.to_string(), value.to_string());
        self
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(canonical.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lengths() {
        assert_eq!(parse_lengths("3,5").unwrap().ascending(), &[3, 5]);
        assert_eq!(parse_lengths(" 2, 4 ,8").unwrap().ascending(), &[2, 4, 8]);
        assert!(parse_lengths("5,3")
            .unwrap_err()
            .message
            .contains("not strictly increasing"));
        assert!(parse_lengths("3,x").is_err());
        assert!(parse_lengths("0").is_err());
    }

    #[test]
    fn hash_tracks_content() {
        let a = RunConfig::new("orbits", Budgets::default());
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
        b.s = Some(vec![3, 5]);
        assert_ne!(a.hash(), b.hash());
    }
}
