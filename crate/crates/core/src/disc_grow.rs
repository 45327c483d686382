//! Growing a disc of faces one face at a time on an equivelar map until its
//! boundary passes through every vertex.
//!
//! A face may join the disc when it meets the disc in exactly one edge and
//! that edge's two endpoints. Greedy mode works through uncovered vertices in
//! increasing order: it adds an eligible face through the vertex if there is
//! one (rule a), and otherwise follows an escape path of faces from the vertex
//! back to the disc and adds the path's last face (rule b). Backtracking mode
//! tries every eligible face and decides whether some growth succeeds.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::map::{FaceId, PolyhedralMap, VertexId};
use crate::oracle::certify_disc;
use crate::proper_tree::{run_in_pool, verify_tree_witness, CandidateTree, DiscState};
use crate::report::{
    Obstruction, SearchReport, SearchStats, Status, Strategy, Witness, DEFAULT_BUDGET,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowMode {
    Greedy,
    Backtracking,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GrowRule {
    /// Eligible face through the target vertex.
    #[serde(rename = "a")]
    A,
    /// Last face of an escape path from the target vertex.
    #[serde(rename = "b")]
    B,
    /// Choice made by the backtracking search.
    #[serde(rename = "search")]
    Search,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowStep {
    /// Disc size after this step.
    pub step: usize,
    pub face: FaceId,
    pub rule: GrowRule,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub target: Option<VertexId>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub escape_path: Vec<FaceId>,
    pub covered: usize,
}

/// Snapshot of a growing disc.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowState {
    /// Chosen faces in order.
    pub faces: Vec<FaceId>,
    pub covered: BTreeSet<VertexId>,
    pub step: usize,
    /// Number of faces a finished disc has.
    pub target: usize,
}

impl GrowState {
    /// State after choosing `faces` in order.
    pub fn new(map: &PolyhedralMap, faces: &[FaceId], target: usize) -> Self {
        GrowState {
            faces: faces.to_vec(),
            covered: faces
                .iter()
                .flat_map(|&f| map.face(f).vertices().iter().copied())
                .collect(),
            step: faces.len(),
            target,
        }
    }

    fn from_disc(state: &DiscState<'_>, target: usize) -> Self {
        GrowState::new(state.map, &state.order, target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrowError {
    #[error("NotEquivelar: disc growing needs an equivelar map")]
    NotEquivelar,
    #[error("seed face {0} does not exist")]
    BadSeed(FaceId),
    #[error("NoEscapePath: {0}")]
    NoEscapePath(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrowOptions {
    pub mode: GrowMode,
    pub budget: u64,
    pub threads: Option<usize>,
}

impl Default for GrowOptions {
    fn default() -> Self {
        GrowOptions {
            mode: GrowMode::Backtracking,
            budget: DEFAULT_BUDGET,
            threads: None,
        }
    }
}

/// Faces `P_1 .. P_r` leading from `target` back to the disc: `P_1` contains
/// the target, `P_1 .. P_{r-1}` avoid every covered vertex, consecutive faces
/// share an edge, and `P_r` is eligible to join the disc. Shortest paths are
/// preferred, then the lexicographically least face sequence.
pub fn dual_escape_path(
    map: &PolyhedralMap,
    state: &GrowState,
    target: VertexId,
) -> Result<Vec<FaceId>, GrowError> {
    let mut disc = DiscState::new(map);
    for &f in &state.faces {
        disc.push(f);
    }
    escape_path(&disc, target)
}

fn escape_path(disc: &DiscState<'_>, target: VertexId) -> Result<Vec<FaceId>, GrowError> {
    let map = disc.map;
    if disc.cover[target] > 0 {
        return Err(GrowError::NoEscapePath(format!(
            "vertex {target} is already covered"
        )));
    }
    let free = |f: FaceId| map.face(f).vertices().iter().all(|&v| disc.cover[v] == 0);
    let sources: Vec<FaceId> = map.faces_around(target).filter(|&f| free(f)).collect();
    if sources.is_empty() {
        return Err(GrowError::NoEscapePath(format!(
            "every face at vertex {target} meets the disc"
        )));
    }
    // hops[f]: faces still to come after interior face f on a shortest path
    let mut hops = vec![usize::MAX; map.num_faces()];
    let mut queue = VecDeque::new();
    for f in (0..map.num_faces()).filter(|&f| free(f)) {
        if map.face_neighbors(f).any(|(_, g)| disc.is_eligible(g)) {
            hops[f] = 1;
            queue.push_back(f);
        }
    }
    while let Some(f) = queue.pop_front() {
        for (_, g) in map.face_neighbors(f) {
            if hops[g] == usize::MAX && free(g) {
                hops[g] = hops[f] + 1;
                queue.push_back(g);
            }
        }
    }
    let Some(first) = sources
        .iter()
        .copied()
        .filter(|&f| hops[f] != usize::MAX)
        .min_by_key(|&f| (hops[f], f))
    else {
        return Err(GrowError::NoEscapePath(format!(
            "no face-disjoint route from vertex {target} reaches an eligible face"
        )));
    };
    let mut path = vec![first];
    let mut cur = first;
    while hops[cur] > 1 {
        cur = map
            .face_neighbors(cur)
            .map(|(_, g)| g)
            .filter(|&g| hops[g] == hops[cur] - 1)
            .min()
            .unwrap();
        path.push(cur);
    }
    let last = map
        .face_neighbors(cur)
        .map(|(_, g)| g)
        .filter(|&g| disc.is_eligible(g))
        .min()
        .unwrap();
    path.push(last);
    Ok(path)
}

struct Grower<'a> {
    state: DiscState<'a>,
    target: usize,
    p: usize,
    stats: SearchStats,
    budget: u64,
    timed_out: bool,
    steps: Vec<GrowStep>,
    seen: HashSet<Vec<u64>>,
}

impl<'a> Grower<'a> {
    fn add(
        &mut self,
        face: FaceId,
        rule: GrowRule,
        target: Option<VertexId>,
        escape_path: Vec<FaceId>,
    ) {
        self.state.push(face);
        let i = self.state.order.len();
        assert_eq!(
            self.state.covered,
            self.p + (i - 1) * (self.p - 2),
            "disc growth covered the wrong number of vertices"
        );
        self.steps.push(GrowStep {
            step: i,
            face,
            rule,
            target,
            escape_path,
            covered: self.state.covered,
        });
    }

    fn remove(&mut self) {
        self.state.pop();
        self.steps.pop();
    }

    fn done(&self) -> bool {
        self.state.order.len() == self.target && self.state.covered == self.state.map.n()
    }

    fn tick(&mut self) -> bool {
        self.stats.nodes += 1;
        if self.stats.nodes > self.budget {
            self.timed_out = true;
        }
        self.timed_out
    }

    fn greedy(&mut self) -> Status {
        while !self.done() {
            if self.tick() {
                return Status::Timeout;
            }
            let map = self.state.map;
            let mut chosen = None;
            for v in (0..map.n()).filter(|&v| self.state.cover[v] == 0) {
                let mut around: Vec<FaceId> = map.faces_around(v).collect();
                around.sort_unstable();
                if let Some(f) = around.into_iter().find(|&f| self.state.is_eligible(f)) {
                    chosen = Some((f, GrowRule::A, v, Vec::new()));
                    break;
                }
                match escape_path(&self.state, v) {
                    Ok(path) => {
                        chosen = Some((*path.last().unwrap(), GrowRule::B, v, path));
                        break;
                    }
                    Err(_) => self.stats.prune("no_escape_path"),
                }
            }
            match chosen {
                Some((f, rule, v, path)) => self.add(f, rule, Some(v), path),
                None => return Status::Stuck,
            }
        }
        Status::Found
    }

    fn key(&self) -> Vec<u64> {
        let mut bits = vec![0u64; self.state.chosen.len().div_ceil(64)];
        for &f in &self.state.order {
            bits[f / 64] |= 1 << (f % 64);
        }
        bits
    }

    fn backtrack(&mut self) -> bool {
        if self.done() {
            return true;
        }
        if self.state.order.len() >= self.target {
            return false;
        }
        if !self.seen.insert(self.key()) {
            self.stats.prune("revisited");
            return false;
        }
        let candidates: Vec<FaceId> = (0..self.state.map.num_faces())
            .filter(|&f| self.state.is_eligible(f))
            .collect();
        for f in candidates {
            if self.tick() {
                return false;
            }
            self.add(f, GrowRule::Search, None, Vec::new());
            if self.backtrack() {
                return true;
            }
            self.remove();
            if self.timed_out {
                return false;
            }
        }
        false
    }
}

fn equivelar_target(map: &PolyhedralMap) -> Result<(usize, Option<usize>), GrowError> {
    let sig = map.equivelar_signature().ok_or(GrowError::NotEquivelar)?;
    Ok((sig.p, sig.disc_face_count(map.n())))
}

/// Grow a disc from `seed`.
pub fn grow_disc(
    map: &PolyhedralMap,
    seed: FaceId,
    opts: GrowOptions,
) -> Result<SearchReport, GrowError> {
    let started = Instant::now();
    if seed >= map.num_faces() {
        return Err(GrowError::BadSeed(seed));
    }
    let (p, w) = equivelar_target(map)?;
    let Some(target) = w else {
        return Ok(SearchReport::obstructed(
            Strategy::DiscGrow,
            Obstruction::NonIntegerM { n: map.n(), p },
        ));
    };
    let mut g = Grower {
        state: DiscState::new(map),
        target,
        p,
        stats: SearchStats::default(),
        budget: opts.budget,
        timed_out: false,
        steps: Vec::new(),
        seen: HashSet::new(),
    };
    g.add(seed, GrowRule::A, None, Vec::new());
    let status = match opts.mode {
        GrowMode::Greedy => g.greedy(),
        GrowMode::Backtracking if g.backtrack() => Status::Found,
        GrowMode::Backtracking if g.timed_out => Status::Timeout,
        GrowMode::Backtracking => Status::NotFound,
    };
    let mut report = SearchReport::new(Strategy::DiscGrow, status);
    if status == Status::Found {
        match disc_witness(map, &g.state.order) {
            Ok(w) => report.witness = Some(w),
            Err(e) => {
                report.status = Status::NotFound;
                report.anomalies.push(format!(
                    "grown disc {:?} failed verification: {e}",
                    g.state.order
                ));
            }
        }
    }
    report.steps = g.steps;
    g.stats.set_elapsed(started.elapsed());
    report.stats = g.stats;
    Ok(report)
}

/// Verified witness for a grown face sequence: its induced dual tree, the
/// disc, the boundary cycle and the oracle's certificate for that disc.
pub fn disc_witness(map: &PolyhedralMap, faces: &[FaceId]) -> Result<Witness, String> {
    let dual = map.dual_map_lenient();
    let tree = CandidateTree::induced(&dual, faces.iter().copied()).map_err(|e| e.to_string())?;
    let (disc, cycle) = verify_tree_witness(map, &dual, &tree)?;
    let cert = certify_disc(map, &cycle, &disc.faces)?;
    Ok(Witness {
        tree: Some(tree),
        disc: Some(disc),
        cycle: Some(cycle),
        cert: Some(cert),
    })
}

/// Current state snapshot of a grown face sequence.
pub fn grow_state(map: &PolyhedralMap, faces: &[FaceId]) -> Result<GrowState, GrowError> {
    let (_, w) = equivelar_target(map)?;
    let mut disc = DiscState::new(map);
    for &f in faces {
        disc.push(f);
    }
    Ok(GrowState::from_disc(&disc, w.unwrap_or(0)))
}

/// Grow from every seed face, in parallel.
pub fn grow_each_seed(
    map: &PolyhedralMap,
    opts: GrowOptions,
) -> Result<Vec<SearchReport>, GrowError> {
    equivelar_target(map)?;
    run_in_pool(opts.threads, || {
        (0..map.num_faces())
            .into_par_iter()
            .map(|seed| grow_disc(map, seed, opts))
            .collect()
    })
}

/// Grow from every seed and report the least seed that succeeds. With no
/// success the status is Timeout if any seed ran out of budget, and otherwise
/// that of seed 0.
pub fn grow_all_seeds(map: &PolyhedralMap, opts: GrowOptions) -> Result<SearchReport, GrowError> {
    let started = Instant::now();
    let reports = grow_each_seed(map, opts)?;
    let mut stats = SearchStats::default();
    for r in &reports {
        stats.merge(&r.stats);
    }
    let timed_out = reports.iter().any(|r| r.status == Status::Timeout);
    let anomalies: Vec<String> = reports
        .iter()
        .flat_map(|r| r.anomalies.iter().cloned())
        .collect();
    let mut best = match reports.iter().position(|r| r.status == Status::Found) {
        Some(i) => reports.into_iter().nth(i).unwrap(),
        None if timed_out => SearchReport::new(Strategy::DiscGrow, Status::Timeout),
        None => reports.into_iter().next().unwrap(),
    };
    best.anomalies = anomalies;
    stats.set_elapsed(started.elapsed());
    best.stats = stats;
    Ok(best)
}
