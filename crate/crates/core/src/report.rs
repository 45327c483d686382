//! Outcome of a search strategy, shared by all three strategies.

use std::collections::BTreeMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::disc_grow::GrowStep;
use crate::oracle::{ContractibilityCert, HamCycle};
use crate::proper_tree::{CandidateTree, Disc};

/// Default backtracking node budget.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    ProperTree,
    PathTree,
    DiscGrow,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Found,
    NotFound,
    Obstructed,
    /// Greedy disc growing reached a state with no eligible face.
    Stuck,
    Timeout,
}

impl Status {
    /// Whether the search certified that no contractible Hamiltonian cycle exists.
    pub fn is_absent(self) -> bool {
        matches!(self, Status::NotFound | Status::Obstructed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    /// `(n - 2) / (p - 2)` is not an integer for an equivelar map.
    NonIntegerM { n: usize, p: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tree: Option<CandidateTree>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub disc: Option<Disc>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cycle: Option<HamCycle>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cert: Option<ContractibilityCert>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub prunes: BTreeMap<String, u64>,
    pub wall_time_ms: f64,
}

impl SearchStats {
    pub fn prune(&mut self, reason: &str) {
        *self.prunes.entry(reason.to_owned()).or_default() += 1;
    }

    pub fn merge(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        for (k, v) in &other.prunes {
            *self.prunes.entry(k.clone()).or_default() += v;
        }
    }

    pub fn set_elapsed(&mut self, d: Duration) {
        self.wall_time_ms = d.as_secs_f64() * 1e3;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub strategy: Strategy,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub obstruction: Option<Obstruction>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    pub stats: SearchStats,
    /// Brute force only: Hamiltonian cycles seen.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hamiltonian_count: Option<u64>,
    /// Brute force only: Hamiltonian cycles certified contractible.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub contractible_count: Option<u64>,
    /// Disc growing only: the accepted steps of the reported run.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub steps: Vec<GrowStep>,
    /// Candidates that passed a search's own tests but failed re-verification.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub anomalies: Vec<String>,
}

impl SearchReport {
    pub fn new(strategy: Strategy, status: Status) -> Self {
        SearchReport {
            strategy,
            status,
            obstruction: None,
            witness: None,
            stats: SearchStats::default(),
            hamiltonian_count: None,
            contractible_count: None,
            steps: Vec::new(),
            anomalies: Vec::new(),
        }
    }

    pub fn obstructed(strategy: Strategy, obstruction: Obstruction) -> Self {
        SearchReport {
            obstruction: Some(obstruction),
            ..SearchReport::new(strategy, Status::Obstructed)
        }
    }
}
