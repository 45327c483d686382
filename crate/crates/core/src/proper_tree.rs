//! Proper trees in the dual map.
//!
//! A tree `T` on dual vertices `v_1..v_k` (primal faces) is proper when
//!
//! 1. `Σ deg(v_i) = n + 2(k - 1)`, degrees taken in the dual edge graph;
//! 2. whenever two tree vertices lie on a dual face `F`, one of the two arcs
//!    of `∂F` between them lies in `T`;
//! 3. every path of `T` inside `∂F` has length at most `|∂F| - 2`.
//!
//! The faces of a proper tree form a disc whose boundary is a Hamiltonian
//! cycle of the primal edge graph, and every contractible Hamiltonian cycle
//! bounds such a disc. This module checks the three conditions, extracts the
//! disc, and searches for proper trees.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::map::{Dual, EdgeKey, FaceId, PolyhedralMap, VertexId};
use crate::oracle::HamCycle;
use crate::report::{
    Obstruction, SearchReport, SearchStats, Status, Strategy, Witness, DEFAULT_BUDGET,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("NotATree: {0}")]
    NotATree(String),
    #[error("NonIntegerM: (n - 2) / (p - 2) = ({n} - 2) / ({p} - 2) is not an integer")]
    NonIntegerM { n: usize, p: usize },
    #[error("NotEquivelar: the construction needs an equivelar map")]
    NotEquivelar,
}

/// A tree in the dual edge graph. Dual vertex ids are primal face ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateTree {
    dvertices: BTreeSet<VertexId>,
    dedges: BTreeSet<EdgeKey>,
}

impl CandidateTree {
    pub fn new(
        dual: &Dual,
        dvertices: impl IntoIterator<Item = VertexId>,
        dedges: impl IntoIterator<Item = EdgeKey>,
    ) -> Result<Self, TreeError> {
        let tree = CandidateTree {
            dvertices: dvertices.into_iter().collect(),
            dedges: dedges.into_iter().collect(),
        };
        tree.validate(dual)?;
        Ok(tree)
    }

    /// The tree spanned by all dual edges among `dvertices`.
    pub fn induced(
        dual: &Dual,
        dvertices: impl IntoIterator<Item = VertexId>,
    ) -> Result<Self, TreeError> {
        let dvertices: BTreeSet<VertexId> = dvertices.into_iter().collect();
        if let Some(&v) = dvertices.iter().find(|&&v| v >= dual.map.n()) {
            return Err(TreeError::NotATree(format!(
                "dual vertex {v} does not exist"
            )));
        }
        let dedges: Vec<EdgeKey> = dvertices
            .iter()
            .flat_map(|&v| {
                dual.map
                    .link(v)
                    .iter()
                    .map(move |e| e.neighbor)
                    .filter(move |&w| w > v)
                    .map(move |w| EdgeKey::new(v, w))
            })
            .filter(|e| dvertices.contains(&e.hi))
            .collect();
        CandidateTree::new(dual, dvertices, dedges)
    }

    /// Path through consecutive dual vertices.
    pub fn path(dual: &Dual, seq: &[VertexId]) -> Result<Self, TreeError> {
        let edges: Vec<EdgeKey> = seq.windows(2).map(|w| EdgeKey::new(w[0], w[1])).collect();
        CandidateTree::new(dual, seq.iter().copied(), edges)
    }

    fn validate(&self, dual: &Dual) -> Result<(), TreeError> {
        let k = self.dvertices.len();
        if k == 0 {
            return Err(TreeError::NotATree("empty vertex set".into()));
        }
        if let Some(&v) = self.dvertices.iter().find(|&&v| v >= dual.map.n()) {
            return Err(TreeError::NotATree(format!(
                "dual vertex {v} does not exist"
            )));
        }
        for e in &self.dedges {
            if !self.dvertices.contains(&e.lo) || !self.dvertices.contains(&e.hi) {
                return Err(TreeError::NotATree(format!(
                    "edge {e} leaves the vertex set"
                )));
            }
            if !dual.map.has_edge(e.lo, e.hi) {
                return Err(TreeError::NotATree(format!("{e} is not a dual edge")));
            }
        }
        if self.dedges.len() + 1 != k {
            return Err(TreeError::NotATree(format!(
                "{k} vertices need {} edges, got {}",
                k - 1,
                self.dedges.len()
            )));
        }
        // k - 1 edges and connected means acyclic
        let index: BTreeMap<VertexId, usize> = self
            .dvertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let mut adj = vec![Vec::new(); k];
        for e in &self.dedges {
            adj[index[&e.lo]].push(index[&e.hi]);
            adj[index[&e.hi]].push(index[&e.lo]);
        }
        let mut seen = vec![false; k];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut reached = 1;
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                if !std::mem::replace(&mut seen[j], true) {
                    reached += 1;
                    queue.push_back(j);
                }
            }
        }
        if reached != k {
            return Err(TreeError::NotATree("disconnected".into()));
        }
        Ok(())
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.dvertices
    }

    pub fn edges(&self) -> &BTreeSet<EdgeKey> {
        &self.dedges
    }

    /// Number of tree vertices `k`.
    pub fn len(&self) -> usize {
        self.dvertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dvertices.is_empty()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.dvertices.contains(&v)
    }

    pub fn contains_edge(&self, a: VertexId, b: VertexId) -> bool {
        a != b && self.dedges.contains(&EdgeKey::new(a, b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSum {
    pub observed: usize,
    pub target: usize,
}

impl DegreeSum {
    pub fn pass(&self) -> bool {
        self.observed == self.target
    }
}

/// Two tree vertices on one dual face with neither boundary arc in the tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcViolation {
    pub u1: VertexId,
    pub u2: VertexId,
    /// The dual face, named by the primal vertex it surrounds.
    pub primal_vertex: VertexId,
}

/// A tree path along a dual face boundary that is too long.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathViolation {
    pub path: Vec<VertexId>,
    pub primal_vertex: VertexId,
    pub limit: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProperTreeVerdict {
    pub degree_sum: DegreeSum,
    pub arc_violation: Option<ArcViolation>,
    pub path_violation: Option<PathViolation>,
}

impl ProperTreeVerdict {
    pub fn condition1(&self) -> bool {
        self.degree_sum.pass()
    }

    pub fn condition2(&self) -> bool {
        self.arc_violation.is_none()
    }

    pub fn condition3(&self) -> bool {
        self.path_violation.is_none()
    }

    pub fn is_proper(&self) -> bool {
        self.condition1() && self.condition2() && self.condition3()
    }
}

/// Evaluate the three proper-tree conditions. Each dual face is the cyclic
/// sequence of faces around a primal vertex.
pub fn check_proper_tree(
    primal: &PolyhedralMap,
    dual: &Dual,
    tree: &CandidateTree,
) -> ProperTreeVerdict {
    let k = tree.len();
    let degree_sum = DegreeSum {
        observed: tree.vertices().iter().map(|&v| dual.degree(v)).sum(),
        target: primal.n() + 2 * (k - 1),
    };

    let mut arc_violation = None;
    let mut path_violation = None;
    for v in 0..primal.n() {
        if arc_violation.is_some() && path_violation.is_some() {
            break;
        }
        let ring: Vec<FaceId> = primal.faces_around(v).collect();
        let q = ring.len();
        // in_tree[i]: boundary edge ring[i] -- ring[i + 1] belongs to T
        let in_tree: Vec<bool> = (0..q)
            .map(|i| tree.contains_edge(ring[i], ring[(i + 1) % q]))
            .collect();
        let on_face: Vec<usize> = (0..q).filter(|&i| tree.contains_vertex(ring[i])).collect();

        if arc_violation.is_none() {
            let arc_in_tree = |from: usize, to: usize| {
                let mut i = from;
                while i != to {
                    if !in_tree[i] {
                        return false;
                    }
                    i = (i + 1) % q;
                }
                true
            };
            'pairs: for (x, &a) in on_face.iter().enumerate() {
                for &b in &on_face[x + 1..] {
                    if !arc_in_tree(a, b) && !arc_in_tree(b, a) {
                        arc_violation = Some(ArcViolation {
                            u1: ring[a].min(ring[b]),
                            u2: ring[a].max(ring[b]),
                            primal_vertex: v,
                        });
                        break 'pairs;
                    }
                }
            }
        }

        if path_violation.is_none() {
            let limit = q - 2;
            if in_tree.iter().all(|&t| t) {
                let mut path = ring.clone();
                path.push(ring[0]);
                path_violation = Some(PathViolation {
                    path,
                    primal_vertex: v,
                    limit,
                });
            } else {
                // maximal runs of tree edges along the ring
                let start = in_tree.iter().position(|&t| !t).unwrap();
                let mut run = 0;
                for step in 1..=q {
                    let i = (start + step) % q;
                    if in_tree[i] {
                        run += 1;
                        continue;
                    }
                    if run > limit {
                        let first = (i + q - run) % q;
                        let path = (0..=run).map(|j| ring[(first + j) % q]).collect();
                        path_violation = Some(PathViolation {
                            path,
                            primal_vertex: v,
                            limit,
                        });
                        break;
                    }
                    run = 0;
                }
            }
        }
    }

    ProperTreeVerdict {
        degree_sum,
        arc_violation,
        path_violation,
    }
}

/// Union of primal faces with its glued edges and boundary walk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disc {
    pub faces: BTreeSet<FaceId>,
    /// Edges lying in two faces of the disc.
    pub glue_edges: BTreeSet<EdgeKey>,
    /// Closed boundary walk, starting at its least vertex towards the lesser neighbor.
    pub boundary: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiscError {
    #[error("EmptyDisc: no faces")]
    Empty,
    #[error("DisconnectedDisc: the faces are not edge-connected")]
    Disconnected,
    #[error("BoundaryNotSimple: vertex {vertex} {reason}")]
    BoundaryNotSimple { vertex: VertexId, reason: String },
}

/// Disc spanned by `faces`, with its boundary extracted as one simple cycle.
pub fn disc_from_faces(
    map: &PolyhedralMap,
    faces: impl IntoIterator<Item = FaceId>,
) -> Result<Disc, DiscError> {
    let faces: BTreeSet<FaceId> = faces.into_iter().collect();
    let Some(&first) = faces.first() else {
        return Err(DiscError::Empty);
    };
    let mut seen = BTreeSet::from([first]);
    let mut queue = VecDeque::from([first]);
    while let Some(f) = queue.pop_front() {
        for (_, g) in map.face_neighbors(f) {
            if faces.contains(&g) && seen.insert(g) {
                queue.push_back(g);
            }
        }
    }
    if seen.len() != faces.len() {
        return Err(DiscError::Disconnected);
    }

    let mut glue_edges = BTreeSet::new();
    let mut boundary_edges = Vec::new();
    for &f in &faces {
        for (e, g) in map.face_neighbors(f) {
            if faces.contains(&g) {
                glue_edges.insert(e);
            } else {
                boundary_edges.push(e);
            }
        }
    }
    let boundary = simple_cycle(map.n(), &boundary_edges)?;
    Ok(Disc {
        faces,
        glue_edges,
        boundary,
    })
}

/// Arrange `edges` as one simple closed walk.
fn simple_cycle(n: usize, edges: &[EdgeKey]) -> Result<Vec<VertexId>, DiscError> {
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for e in edges {
        adj[e.lo].push(e.hi);
        adj[e.hi].push(e.lo);
    }
    if let Some(v) = (0..n).find(|&v| !adj[v].is_empty() && adj[v].len() != 2) {
        return Err(DiscError::BoundaryNotSimple {
            vertex: v,
            reason: format!("meets {} boundary edges", adj[v].len()),
        });
    }
    let Some(start) = (0..n).find(|&v| !adj[v].is_empty()) else {
        return Err(DiscError::BoundaryNotSimple {
            vertex: 0,
            reason: "no boundary edges".into(),
        });
    };
    let mut walk = vec![start];
    let mut prev = start;
    let mut cur = adj[start][0].min(adj[start][1]);
    while cur != start {
        walk.push(cur);
        let next = if adj[cur][0] == prev {
            adj[cur][1]
        } else {
            adj[cur][0]
        };
        prev = cur;
        cur = next;
    }
    if walk.len() != edges.len() {
        let on_walk: BTreeSet<VertexId> = walk.iter().copied().collect();
        let vertex = (0..n)
            .find(|v| !adj[*v].is_empty() && !on_walk.contains(v))
            .unwrap();
        return Err(DiscError::BoundaryNotSimple {
            vertex,
            reason: "lies on a second boundary cycle".into(),
        });
    }
    Ok(walk)
}

/// The disc of primal faces dual to the tree vertices.
pub fn dual_disc(
    primal: &PolyhedralMap,
    dual: &Dual,
    tree: &CandidateTree,
) -> Result<Disc, DiscError> {
    disc_from_faces(
        primal,
        tree.vertices()
            .iter()
            .map(|&d| dual.corr.dvertex_to_face(d)),
    )
}

/// Whether the boundary of the tree's disc is a Hamiltonian cycle.
pub fn is_admissible(primal: &PolyhedralMap, dual: &Dual, tree: &CandidateTree) -> bool {
    dual_disc(primal, dual, tree).is_ok_and(|d| d.boundary.len() == primal.n())
}

/// Vertices of `primal` covered by the faces of `tree`.
pub fn covered_vertices(
    primal: &PolyhedralMap,
    dual: &Dual,
    tree: &CandidateTree,
) -> BTreeSet<VertexId> {
    tree.vertices()
        .iter()
        .flat_map(|&d| {
            primal
                .face(dual.corr.dvertex_to_face(d))
                .vertices()
                .iter()
                .copied()
        })
        .collect()
}

/// Everything a proper-tree witness must satisfy: the three conditions,
/// admissibility, coverage of every vertex, and the boundary count
/// `Σ deg - 2(k - 1) = n`. Returns the disc and its boundary cycle.
pub fn verify_tree_witness(
    primal: &PolyhedralMap,
    dual: &Dual,
    tree: &CandidateTree,
) -> Result<(Disc, HamCycle), String> {
    let verdict = check_proper_tree(primal, dual, tree);
    if !verdict.is_proper() {
        return Err(format!("tree is not proper: {verdict:?}"));
    }
    let covered = covered_vertices(primal, dual, tree);
    if covered.len() != primal.n() {
        return Err(format!(
            "tree faces cover {} of {} vertices",
            covered.len(),
            primal.n()
        ));
    }
    let disc = dual_disc(primal, dual, tree).map_err(|e| e.to_string())?;
    let k = tree.len();
    let boundary_edges = verdict.degree_sum.observed - 2 * (k - 1);
    if disc.boundary.len() != boundary_edges || boundary_edges != primal.n() {
        return Err(format!(
            "boundary has {} edges, degree count gives {boundary_edges}, n = {}",
            disc.boundary.len(),
            primal.n()
        ));
    }
    let cycle = HamCycle::new(primal, &disc.boundary).map_err(|e| e.to_string())?;
    Ok((disc, cycle))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_BUDGET,
            threads: None,
        }
    }
}

pub(crate) fn run_in_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .expect("thread pool")
            .install(job),
        None => job(),
    }
}

/// Incremental disc state shared by the tree search, the path construction
/// and disc growing: chosen faces, per-vertex cover counts and per-face counts
/// of chosen neighbors.
#[derive(Debug, Clone)]
pub(crate) struct DiscState<'a> {
    pub map: &'a PolyhedralMap,
    pub chosen: Vec<bool>,
    pub order: Vec<FaceId>,
    pub cover: Vec<u32>,
    pub chosen_neighbors: Vec<u32>,
    pub covered: usize,
    /// `Σ (|face| - 2)` over chosen faces.
    pub excess: usize,
}

impl<'a> DiscState<'a> {
    pub fn new(map: &'a PolyhedralMap) -> Self {
        DiscState {
            map,
            chosen: vec![false; map.num_faces()],
            order: Vec::new(),
            cover: vec![0; map.n()],
            chosen_neighbors: vec![0; map.num_faces()],
            covered: 0,
            excess: 0,
        }
    }

    pub fn covered_count(&self, f: FaceId) -> usize {
        self.map
            .face(f)
            .vertices()
            .iter()
            .filter(|&&v| self.cover[v] > 0)
            .count()
    }

    /// A face may join when it touches the disc in exactly one edge of one
    /// chosen face and nowhere else.
    pub fn is_eligible(&self, f: FaceId) -> bool {
        !self.chosen[f] && self.chosen_neighbors[f] == 1 && self.covered_count(f) == 2
    }

    pub fn push(&mut self, f: FaceId) {
        debug_assert!(!self.chosen[f]);
        self.chosen[f] = true;
        self.order.push(f);
        self.excess += self.map.face(f).len() - 2;
        for &v in self.map.face(f).vertices() {
            if self.cover[v] == 0 {
                self.covered += 1;
            }
            self.cover[v] += 1;
        }
        for (_, g) in self.map.face_neighbors(f) {
            self.chosen_neighbors[g] += 1;
        }
    }

    pub fn pop(&mut self) -> FaceId {
        let f = self.order.pop().expect("non-empty disc");
        self.chosen[f] = false;
        self.excess -= self.map.face(f).len() - 2;
        for &v in self.map.face(f).vertices() {
            self.cover[v] -= 1;
            if self.cover[v] == 0 {
                self.covered -= 1;
            }
        }
        for (_, g) in self.map.face_neighbors(f) {
            self.chosen_neighbors[g] -= 1;
        }
        f
    }
}

struct Shared {
    nodes: AtomicU64,
    budget: u64,
    timed_out: AtomicBool,
    best_root: AtomicUsize,
}

struct RootOutcome {
    root: FaceId,
    found: Option<(CandidateTree, Disc, HamCycle)>,
    stats: SearchStats,
    anomalies: Vec<String>,
}

struct RootSearch<'a> {
    dual: &'a Dual,
    root: FaceId,
    target: usize,
    state: DiscState<'a>,
    shared: &'a Shared,
    stats: SearchStats,
    anomalies: Vec<String>,
    found: Option<(CandidateTree, Disc, HamCycle)>,
    aborted: bool,
}

impl<'a> RootSearch<'a> {
    /// Enumerate connected face sets whose least face is the root, each
    /// exactly once, extending only by eligible faces.
    fn extend(&mut self, mut ext: Vec<FaceId>) {
        if self.state.excess == self.target {
            self.evaluate();
            return;
        }
        while !ext.is_empty() {
            let w = ext.remove(0);
            if self.tick() {
                return;
            }
            let len = self.state.map.face(w).len();
            if self.state.excess + len - 2 > self.target {
                self.stats.prune("degree_sum");
                continue;
            }
            if !self.state.is_eligible(w) {
                self.stats.prune("arc_condition");
                continue;
            }
            // exclusive neighbors of w: not chosen and not yet adjacent to the set
            let mut next = ext.clone();
            for (_, u) in self.state.map.face_neighbors(w) {
                if u > self.root
                    && !self.state.chosen[u]
                    && self.state.chosen_neighbors[u] == 0
                    && !next.contains(&u)
                {
                    next.push(u);
                }
            }
            next.sort_unstable();
            self.state.push(w);
            self.extend(next);
            self.state.pop();
            if self.found.is_some() || self.aborted {
                return;
            }
        }
    }

    /// Count a node; true when the search must stop.
    fn tick(&mut self) -> bool {
        self.stats.nodes += 1;
        if self.shared.nodes.fetch_add(1, Ordering::Relaxed) >= self.shared.budget {
            self.shared.timed_out.store(true, Ordering::Relaxed);
            self.aborted = true;
        }
        if self.shared.best_root.load(Ordering::Relaxed) < self.root {
            self.aborted = true;
        }
        self.aborted
    }

    fn evaluate(&mut self) {
        let faces = self
            .state
            .order
            .iter()
            .map(|&f| self.dual.corr.face_to_dvertex(f));
        let tree = match CandidateTree::induced(self.dual, faces) {
            Ok(t) => t,
            Err(e) => {
                self.anomalies.push(format!(
                    "grown face set {:?} is not an induced tree: {e}",
                    self.state.order
                ));
                return;
            }
        };
        match verify_tree_witness(self.state.map, self.dual, &tree) {
            Ok((disc, cycle)) => {
                self.found = Some((tree, disc, cycle));
                self.shared
                    .best_root
                    .fetch_min(self.root, Ordering::Relaxed);
            }
            Err(e) => self
                .anomalies
                .push(format!("faces {:?}: {e}", self.state.order)),
        }
    }
}

fn search_root(map: &PolyhedralMap, dual: &Dual, root: FaceId, shared: &Shared) -> RootOutcome {
    let target = map.n() - 2;
    let mut search = RootSearch {
        dual,
        root,
        target,
        state: DiscState::new(map),
        shared,
        stats: SearchStats::default(),
        anomalies: Vec::new(),
        found: None,
        aborted: false,
    };
    if map.face(root).len() - 2 <= target && !search.tick() {
        search.state.push(root);
        let mut ext: Vec<FaceId> = map
            .face_neighbors(root)
            .map(|(_, g)| g)
            .filter(|&g| g > root)
            .collect();
        ext.sort_unstable();
        ext.dedup();
        search.extend(ext);
    }
    RootOutcome {
        root,
        found: search.found,
        stats: search.stats,
        anomalies: search.anomalies,
    }
}

fn non_integer_m(map: &PolyhedralMap) -> Option<Obstruction> {
    let sig = map.equivelar_signature()?;
    match sig.disc_face_count(map.n()) {
        Some(_) => None,
        None => Some(Obstruction::NonIntegerM {
            n: map.n(),
            p: sig.p,
        }),
    }
}

/// Exhaustive search for a proper tree in the dual of `map`.
///
/// Trees are grown from every root face in parallel; a root only adds faces
/// with larger ids, so each face set is visited once. The reported witness is
/// the first one found from the least successful root, independent of the
/// thread count. Equivelar maps with non-integer `(n - 2) / (p - 2)` are
/// reported as obstructed without searching.
pub fn find_proper_tree(map: &PolyhedralMap, opts: SearchOptions) -> SearchReport {
    let started = Instant::now();
    if let Some(obstruction) = non_integer_m(map) {
        let mut report = SearchReport::obstructed(Strategy::ProperTree, obstruction);
        report.stats.set_elapsed(started.elapsed());
        return report;
    }
    let dual = map.dual_map_lenient();
    let shared = Shared {
        nodes: AtomicU64::new(0),
        budget: opts.budget,
        timed_out: AtomicBool::new(false),
        best_root: AtomicUsize::new(usize::MAX),
    };
    let outcomes: Vec<RootOutcome> = run_in_pool(opts.threads, || {
        (0..map.num_faces())
            .into_par_iter()
            .map(|root| search_root(map, &dual, root, &shared))
            .collect()
    });

    let mut stats = SearchStats::default();
    let mut anomalies = Vec::new();
    for o in &outcomes {
        stats.merge(&o.stats);
        anomalies.extend(o.anomalies.iter().cloned());
    }
    let best = outcomes
        .into_iter()
        .filter(|o| o.found.is_some())
        .min_by_key(|o| o.root);
    let timed_out = shared.timed_out.load(Ordering::Relaxed);
    let mut report = match best {
        Some(o) => {
            let (tree, disc, cycle) = o.found.unwrap();
            let mut r = SearchReport::new(Strategy::ProperTree, Status::Found);
            r.witness = Some(Witness {
                tree: Some(tree),
                disc: Some(disc),
                cycle: Some(cycle),
                cert: None,
            });
            r
        }
        None if timed_out => SearchReport::new(Strategy::ProperTree, Status::Timeout),
        None => SearchReport::new(Strategy::ProperTree, Status::NotFound),
    };
    report.anomalies = anomalies;
    stats.set_elapsed(started.elapsed());
    report.stats = stats;
    report
}

/// Path construction for equivelar maps with integer `m = (n - 2) / (p - 2)`:
/// grow a path `v_1 v_2 ... v_m` in the dual where each `v_i` is adjacent to
/// `v_{i-1}` only and its face brings `p - 2` new primal vertices. Start
/// faces and next steps are tried in increasing id order with backtracking.
pub fn construct_lemma1_tree(
    map: &PolyhedralMap,
    opts: SearchOptions,
) -> Result<SearchReport, TreeError> {
    let started = Instant::now();
    let sig = map.equivelar_signature().ok_or(TreeError::NotEquivelar)?;
    let m = sig.disc_face_count(map.n()).ok_or(TreeError::NonIntegerM {
        n: map.n(),
        p: sig.p,
    })?;
    let dual = map.dual_map_lenient();
    let mut stats = SearchStats::default();
    let mut anomalies = Vec::new();
    let mut timed_out = false;

    fn grow(
        state: &mut DiscState<'_>,
        m: usize,
        stats: &mut SearchStats,
        budget: u64,
        timed_out: &mut bool,
    ) -> bool {
        if state.order.len() == m {
            return state.covered == state.map.n();
        }
        let last = *state.order.last().unwrap();
        let mut next: Vec<FaceId> = state.map.face_neighbors(last).map(|(_, g)| g).collect();
        next.sort_unstable();
        for g in next {
            stats.nodes += 1;
            if stats.nodes > budget {
                *timed_out = true;
                return false;
            }
            if !state.is_eligible(g) {
                stats.prune("arc_condition");
                continue;
            }
            state.push(g);
            if grow(state, m, stats, budget, timed_out) {
                return true;
            }
            state.pop();
            if *timed_out {
                return false;
            }
        }
        false
    }

    for start in 0..map.num_faces() {
        let mut state = DiscState::new(map);
        state.push(start);
        if grow(&mut state, m, &mut stats, opts.budget, &mut timed_out) {
            let tree = CandidateTree::path(&dual, &state.order).expect("grown path is a tree");
            match verify_tree_witness(map, &dual, &tree) {
                Ok((disc, cycle)) => {
                    let mut report = SearchReport::new(Strategy::PathTree, Status::Found);
                    report.witness = Some(Witness {
                        tree: Some(tree),
                        disc: Some(disc),
                        cycle: Some(cycle),
                        cert: None,
                    });
                    stats.set_elapsed(started.elapsed());
                    report.stats = stats;
                    report.anomalies = anomalies;
                    return Ok(report);
                }
                Err(e) => anomalies.push(format!("path {:?}: {e}", state.order)),
            }
        }
        if timed_out {
            break;
        }
    }
    let mut report = SearchReport::new(
        Strategy::PathTree,
        if timed_out {
            Status::Timeout
        } else {
            Status::NotFound
        },
    );
    stats.set_elapsed(started.elapsed());
    report.stats = stats;
    report.anomalies = anomalies;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapgen::{gen_platonic, gen_quad_torus, PlatonicSolid, TorusGridParams};

    fn cube() -> (PolyhedralMap, Dual) {
        let m = gen_platonic(PlatonicSolid::Cube);
        let d = m.dual_map().unwrap();
        (m, d)
    }

    fn face(m: &PolyhedralMap, vs: &[usize]) -> FaceId {
        m.face_id(vs).unwrap()
    }

    #[test]
    fn rejects_non_trees() {
        let (m, d) = cube();
        let bottom = face(&m, &[0, 1, 2, 3]);
        let top = face(&m, &[4, 5, 6, 7]);
        assert!(matches!(
            CandidateTree::path(&d, &[bottom, top]),
            Err(TreeError::NotATree(_))
        ));
        assert!(CandidateTree::new(&d, [], []).is_err());
        let front = face(&m, &[0, 1, 5, 4]);
        let right = face(&m, &[1, 2, 6, 5]);
        // the three faces at vertex 1 induce a triangle
        assert!(CandidateTree::induced(&d, [bottom, front, right]).is_err());
    }

    #[test]
    fn cube_strip_condition_values() {
        let (m, d) = cube();
        let strip = [
            face(&m, &[0, 1, 2, 3]),
            face(&m, &[0, 1, 5, 4]),
            face(&m, &[4, 5, 6, 7]),
        ];
        let tree = CandidateTree::path(&d, &strip).unwrap();
        let v = check_proper_tree(&m, &d, &tree);
        assert_eq!(
            v.degree_sum,
            DegreeSum {
                observed: 12,
                target: 12
            }
        );
        assert!(v.is_proper());
    }

    #[test]
    fn cube_corner_fails_condition3() {
        let (m, d) = cube();
        let (bottom, front, right) = (
            face(&m, &[0, 1, 2, 3]),
            face(&m, &[0, 1, 5, 4]),
            face(&m, &[1, 2, 6, 5]),
        );
        let tree = CandidateTree::path(&d, &[bottom, front, right]).unwrap();
        let v = check_proper_tree(&m, &d, &tree);
        assert!(v.condition1());
        // bottom and right share an edge that is not in T
        assert_eq!(v.arc_violation.unwrap().primal_vertex, 2);
        let bad = v.path_violation.unwrap();
        assert_eq!(bad.primal_vertex, 1);
        assert_eq!(bad.limit, 1);
        assert_eq!(bad.path.len(), 3);
    }

    #[test]
    fn cube_single_edge_fails_condition1() {
        let (m, d) = cube();
        let tree =
            CandidateTree::path(&d, &[face(&m, &[0, 1, 2, 3]), face(&m, &[0, 1, 5, 4])]).unwrap();
        let v = check_proper_tree(&m, &d, &tree);
        assert_eq!(
            v.degree_sum,
            DegreeSum {
                observed: 8,
                target: 10
            }
        );
        assert!(!v.condition1());
    }

    #[test]
    fn quad_torus_detour_fails_condition2() {
        let m = gen_quad_torus(TorusGridParams::new(4, 4, 0)).unwrap();
        let d = m.dual_map().unwrap();
        // square with lower left grid point (r, c), 1-based
        let sq = |r: usize, c: usize| {
            let v = |r: usize, c: usize| ((r - 1) % 4) * 4 + (c - 1) % 4;
            face(&m, &[v(r, c), v(r, c + 1), v(r + 1, c + 1), v(r + 1, c)])
        };
        let path = [sq(1, 1), sq(4, 1), sq(4, 2), sq(3, 2), sq(2, 2)];
        let tree = CandidateTree::path(&d, &path).unwrap();
        let v = check_proper_tree(&m, &d, &tree);
        let bad = v.arc_violation.expect("condition 2 fails");
        assert_eq!(
            (bad.u1, bad.u2),
            (sq(1, 1).min(sq(2, 2)), sq(1, 1).max(sq(2, 2)))
        );
        // grid point (2, 2) has index 5
        assert_eq!(bad.primal_vertex, 5);
    }

    #[test]
    fn tetrahedron_pair_disc() {
        let m = gen_platonic(PlatonicSolid::Tetrahedron);
        let d = m.dual_map().unwrap();
        let tree = CandidateTree::path(&d, &[0, 1]).unwrap();
        let disc = dual_disc(&m, &d, &tree).unwrap();
        assert_eq!(disc.faces.len(), 2);
        assert_eq!(disc.glue_edges.len(), 1);
        assert_eq!(disc.boundary.len(), 4);
        assert!(is_admissible(&m, &d, &tree));
    }

    #[test]
    fn cube_strip_and_corner_discs() {
        let (m, d) = cube();
        let strip = [
            face(&m, &[0, 1, 2, 3]),
            face(&m, &[0, 1, 5, 4]),
            face(&m, &[4, 5, 6, 7]),
        ];
        let tree = CandidateTree::path(&d, &strip).unwrap();
        let disc = dual_disc(&m, &d, &tree).unwrap();
        assert_eq!(disc.boundary.len(), 8);
        assert_eq!(disc.glue_edges.len(), 2);
        assert!(is_admissible(&m, &d, &tree));

        let corner = [
            face(&m, &[0, 1, 2, 3]),
            face(&m, &[0, 1, 5, 4]),
            face(&m, &[1, 2, 6, 5]),
        ];
        let tree = CandidateTree::path(&d, &corner).unwrap();
        let disc = dual_disc(&m, &d, &tree).unwrap();
        assert_eq!(disc.glue_edges.len(), 3);
        assert_eq!(disc.boundary.len(), 6);
        assert!(!is_admissible(&m, &d, &tree));
    }

    #[test]
    fn opposite_faces_are_not_a_disc() {
        let (m, _) = cube();
        let err =
            disc_from_faces(&m, [face(&m, &[0, 1, 2, 3]), face(&m, &[4, 5, 6, 7])]).unwrap_err();
        assert_eq!(err, DiscError::Disconnected);
    }

    #[test]
    fn band_boundary_is_not_simple() {
        let (m, _) = cube();
        let band = [
            face(&m, &[0, 1, 5, 4]),
            face(&m, &[1, 2, 6, 5]),
            face(&m, &[2, 3, 7, 6]),
            face(&m, &[3, 0, 4, 7]),
        ];
        let err = disc_from_faces(&m, band).unwrap_err();
        assert!(matches!(
            err,
            DiscError::BoundaryNotSimple { vertex: 4, .. }
        ));
    }

    #[test]
    fn cube_search_finds_three_faces() {
        let (m, _) = cube();
        let r = find_proper_tree(&m, SearchOptions::default());
        assert_eq!(r.status, Status::Found);
        let w = r.witness.unwrap();
        assert_eq!(w.tree.unwrap().len(), 3);
        assert_eq!(w.cycle.unwrap().order.len(), 8);
    }

    #[test]
    fn quad_torus_3x3_obstructed() {
        let m = gen_quad_torus(TorusGridParams::new(3, 3, 0)).unwrap();
        let r = find_proper_tree(&m, SearchOptions::default());
        assert_eq!(r.status, Status::Obstructed);
        assert_eq!(r.obstruction, Some(Obstruction::NonIntegerM { n: 9, p: 4 }));
        assert!(matches!(
            construct_lemma1_tree(&m, SearchOptions::default()),
            Err(TreeError::NonIntegerM { n: 9, p: 4 })
        ));
    }

    #[test]
    fn search_is_thread_independent() {
        let m = gen_platonic(PlatonicSolid::Icosahedron);
        let one = find_proper_tree(
            &m,
            SearchOptions {
                threads: Some(1),
                ..Default::default()
            },
        );
        let four = find_proper_tree(
            &m,
            SearchOptions {
                threads: Some(4),
                ..Default::default()
            },
        );
        assert_eq!(one.status, Status::Found);
        assert_eq!(one.witness, four.witness);
    }

    #[test]
    fn tiny_budget_times_out() {
        let m = gen_platonic(PlatonicSolid::Icosahedron);
        let r = find_proper_tree(
            &m,
            SearchOptions {
                budget: 3,
                threads: Some(1),
            },
        );
        assert_eq!(r.status, Status::Timeout);
    }

    #[test]
    fn path_construction_small_solids() {
        let t = gen_platonic(PlatonicSolid::Tetrahedron);
        let r = construct_lemma1_tree(&t, SearchOptions::default()).unwrap();
        assert_eq!(r.status, Status::Found);
        let w = r.witness.unwrap();
        assert_eq!(w.tree.unwrap().len(), 2);
        assert_eq!(w.disc.unwrap().boundary.len(), 4);

        let (c, _) = cube();
        let r = construct_lemma1_tree(&c, SearchOptions::default()).unwrap();
        assert_eq!(r.status, Status::Found);
        assert_eq!(r.witness.unwrap().tree.unwrap().len(), 3);
    }
}
