//! Brute-force ground truth: Hamiltonian cycle enumeration, disc
//! certificates for contractibility, and collapsibility.

use std::collections::{BTreeSet, VecDeque};
use std::ops::ControlFlow;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::map::{canonical_cycle, EdgeKey, FaceId, PolyhedralMap, VertexId};
use crate::report::{SearchReport, SearchStats, Status, Strategy, Witness, DEFAULT_BUDGET};

/// Hamiltonian cycle stored as its least vertex first, followed by the lesser
/// of that vertex's two cycle neighbors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HamCycle {
    pub order: Vec<VertexId>,
    pub edges: Vec<EdgeKey>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("cycle has {got} vertices, the map has {n}")]
    WrongLength { got: usize, n: usize },
    #[error("vertex {0} is repeated or out of range")]
    BadVertex(VertexId),
    #[error("{0} is not an edge of the map")]
    NotAnEdge(EdgeKey),
}

impl HamCycle {
    pub fn new(map: &PolyhedralMap, seq: &[VertexId]) -> Result<HamCycle, CycleError> {
        let n = map.n();
        if seq.len() != n || n < 3 {
            return Err(CycleError::WrongLength { got: seq.len(), n });
        }
        let mut seen = vec![false; n];
        for &v in seq {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(CycleError::BadVertex(v));
            }
        }
        let order = canonical_cycle(seq);
        let edges: Vec<EdgeKey> = (0..n)
            .map(|i| EdgeKey::new(order[i], order[(i + 1) % n]))
            .collect();
        if let Some(&e) = edges.iter().find(|e| !map.has_edge(e.lo, e.hi)) {
            return Err(CycleError::NotAnEdge(e));
        }
        Ok(HamCycle { order, edges })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn edge_set(&self) -> BTreeSet<EdgeKey> {
        self.edges.iter().copied().collect()
    }
}

/// A disc of faces bounded by a Hamiltonian cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractibilityCert {
    pub disc_faces: BTreeSet<FaceId>,
    /// Index of the component, among the faces cut apart by the cycle
    /// ordered by least face id, that holds the disc.
    pub side: usize,
    pub interior_edges: usize,
    /// `Σ l_i` over the disc faces.
    pub face_length_sum: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumOutcome {
    Complete,
    Stopped,
    Timeout,
}

/// Visit every Hamiltonian cycle once, in increasing lexicographic order of
/// the canonical vertex sequence. `budget` bounds the number of DFS nodes.
pub fn for_each_hamiltonian(
    map: &PolyhedralMap,
    budget: u64,
    mut visit: impl FnMut(HamCycle) -> ControlFlow<()>,
) -> (EnumOutcome, u64) {
    let n = map.n();
    let graph = map.edge_graph();
    let mut nodes = 0u64;
    if n < 3 {
        return (EnumOutcome::Complete, nodes);
    }
    let mut on_path = vec![false; n];
    let mut path = vec![0];
    on_path[0] = true;
    // explicit stack of next-neighbor indices
    let mut cursor = vec![0usize];
    while let Some(&v) = path.last() {
        let i = *cursor.last().unwrap();
        let nbrs = graph.neighbors(v);
        if i == nbrs.len() {
            cursor.pop();
            on_path[path.pop().unwrap()] = false;
            continue;
        }
        *cursor.last_mut().unwrap() += 1;
        let w = nbrs[i];
        if on_path[w] {
            continue;
        }
        nodes += 1;
        if nodes > budget {
            return (EnumOutcome::Timeout, nodes);
        }
        if path.len() + 1 == n {
            // close the cycle; count each undirected cycle once
            if graph.has_edge(w, 0) && path[1] < w {
                path.push(w);
                let cycle = HamCycle::new(map, &path).expect("enumerated cycle is valid");
                path.pop();
                if visit(cycle).is_break() {
                    return (EnumOutcome::Stopped, nodes);
                }
            }
            continue;
        }
        on_path[w] = true;
        path.push(w);
        cursor.push(0);
    }
    (EnumOutcome::Complete, nodes)
}

/// Up to `limit` Hamiltonian cycles in canonical order.
pub fn enumerate_hamiltonian(map: &PolyhedralMap, limit: Option<usize>) -> Vec<HamCycle> {
    let mut out = Vec::new();
    for_each_hamiltonian(map, u64::MAX, |c| {
        out.push(c);
        if limit.is_some_and(|l| out.len() >= l) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    out
}

/// Components of the face-adjacency graph once the dual edges crossing the
/// cycle are removed, sorted by least face.
pub fn cut_components(map: &PolyhedralMap, cycle: &HamCycle) -> Vec<BTreeSet<FaceId>> {
    let cut = cycle.edge_set();
    let mut comp = vec![usize::MAX; map.num_faces()];
    let mut out = Vec::new();
    for start in 0..map.num_faces() {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[start] = id;
        let mut members = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            for (e, g) in map.face_neighbors(f) {
                if !cut.contains(&e) && comp[g] == usize::MAX {
                    comp[g] = id;
                    members.insert(g);
                    queue.push_back(g);
                }
            }
        }
        out.push(members);
    }
    out
}

/// Check that `faces` form a disc bounded by `cycle`: its boundary edges are
/// exactly the cycle edges, its Euler characteristic is 1, and it has
/// `|faces| - 1` interior edges.
pub fn certify_disc(
    map: &PolyhedralMap,
    cycle: &HamCycle,
    faces: &BTreeSet<FaceId>,
) -> Result<ContractibilityCert, String> {
    if faces.is_empty() {
        return Err("no faces".into());
    }
    let mut boundary = BTreeSet::new();
    let mut interior = BTreeSet::new();
    let mut vertices = BTreeSet::new();
    let mut face_length_sum = 0;
    for &f in faces {
        face_length_sum += map.face(f).len();
        vertices.extend(map.face(f).vertices().iter().copied());
        for (e, g) in map.face_neighbors(f) {
            if faces.contains(&g) {
                interior.insert(e);
            } else {
                boundary.insert(e);
            }
        }
    }
    if boundary != cycle.edge_set() {
        return Err(format!(
            "boundary has {} edges, {} of them off the cycle",
            boundary.len(),
            boundary.difference(&cycle.edge_set()).count()
        ));
    }
    let chi = vertices.len() as i64 - (boundary.len() + interior.len()) as i64 + faces.len() as i64;
    if chi != 1 {
        return Err(format!("Euler characteristic {chi}"));
    }
    if interior.len() + 1 != faces.len() {
        return Err(format!(
            "{} interior edges for {} faces",
            interior.len(),
            faces.len()
        ));
    }
    let m = faces.len();
    assert_eq!(
        face_length_sum,
        map.n() + 2 * (m - 1),
        "certified disc violates the face-length count"
    );
    Ok(ContractibilityCert {
        disc_faces: faces.clone(),
        side: 0,
        interior_edges: interior.len(),
        face_length_sum,
    })
}

/// The least cut component that is a disc bounded by `cycle`.
pub fn certify_contractible(map: &PolyhedralMap, cycle: &HamCycle) -> Option<ContractibilityCert> {
    cut_components(map, cycle)
        .iter()
        .enumerate()
        .find_map(|(side, s)| {
            certify_disc(map, cycle, s)
                .ok()
                .map(|c| ContractibilityCert { side, ..c })
        })
}

/// Whether the subcomplex spanned by `faces` collapses to a point: faces with
/// a free edge are removed with that edge until none remain, and the leftover
/// graph must then be a tree.
pub fn collapse_to_point(map: &PolyhedralMap, faces: &BTreeSet<FaceId>) -> bool {
    if faces.is_empty() {
        return false;
    }
    let mut alive: BTreeSet<FaceId> = faces.clone();
    let mut edges: BTreeSet<EdgeKey> = faces.iter().flat_map(|&f| map.face(f).edges()).collect();
    let vertices: BTreeSet<VertexId> = faces
        .iter()
        .flat_map(|&f| map.face(f).vertices().iter().copied())
        .collect();
    let mut progress = true;
    while progress && !alive.is_empty() {
        progress = false;
        let snapshot: Vec<FaceId> = alive.iter().copied().collect();
        for f in snapshot {
            let free = map.face(f).edges().find(|e| {
                edges.contains(e)
                    && map
                        .edge_faces(*e)
                        .unwrap()
                        .iter()
                        .filter(|g| alive.contains(g))
                        .count()
                        == 1
            });
            if let Some(e) = free {
                alive.remove(&f);
                edges.remove(&e);
                progress = true;
            }
        }
    }
    if !alive.is_empty() {
        return false;
    }
    // a graph collapses to a point iff it is a tree
    if edges.len() + 1 != vertices.len() {
        return false;
    }
    let index: Vec<VertexId> = vertices.iter().copied().collect();
    let pos = |v: VertexId| index.binary_search(&v).unwrap();
    let mut adj = vec![Vec::new(); index.len()];
    for e in &edges {
        adj[pos(e.lo)].push(pos(e.hi));
        adj[pos(e.hi)].push(pos(e.lo));
    }
    let mut seen = vec![false; index.len()];
    seen[0] = true;
    let mut stack = vec![0];
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for &j in &adj[i] {
            if !std::mem::replace(&mut seen[j], true) {
                count += 1;
                stack.push(j);
            }
        }
    }
    count == index.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteOptions {
    pub budget: u64,
    /// Stop at the first certified cycle instead of counting all of them.
    pub stop_at_first: bool,
}

impl Default for BruteOptions {
    fn default() -> Self {
        BruteOptions {
            budget: DEFAULT_BUDGET,
            stop_at_first: false,
        }
    }
}

/// Enumerate Hamiltonian cycles and certify each. The witness is the
/// lexicographically least contractible cycle with its least disc. Every cut
/// component is also run through [`collapse_to_point`]; disagreements with
/// [`certify_disc`] are counted under the `collapse_mismatch` prune key and
/// listed as anomalies.
pub fn brute_search(map: &PolyhedralMap, opts: BruteOptions) -> SearchReport {
    let started = Instant::now();
    let mut stats = SearchStats::default();
    let mut ham = 0u64;
    let mut contractible = 0u64;
    let mut witness: Option<(HamCycle, ContractibilityCert)> = None;
    let mut anomalies = Vec::new();
    let (outcome, nodes) = for_each_hamiltonian(map, opts.budget, |cycle| {
        ham += 1;
        let mut cert = None;
        for (side, s) in cut_components(map, &cycle).iter().enumerate() {
            let disc = certify_disc(map, &cycle, s).ok();
            stats.prune("candidate_discs");
            if disc.is_some() != collapse_to_point(map, s) {
                stats.prune("collapse_mismatch");
                anomalies.push(format!(
                    "cycle {:?} side {side}: certificate and collapse disagree",
                    cycle.order
                ));
            }
            if cert.is_none() {
                cert = disc.map(|c| ContractibilityCert { side, ..c });
            }
        }
        if let Some(c) = cert {
            contractible += 1;
            if witness.is_none() {
                witness = Some((cycle, c));
            }
            if opts.stop_at_first {
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    });
    stats.nodes = nodes;
    let status = match (&witness, outcome) {
        (Some(_), _) => Status::Found,
        (None, EnumOutcome::Timeout) => Status::Timeout,
        (None, _) => Status::NotFound,
    };
    let mut report = SearchReport::new(Strategy::Brute, status);
    if outcome == EnumOutcome::Complete {
        report.hamiltonian_count = Some(ham);
        report.contractible_count = Some(contractible);
    }
    report.witness = witness.map(|(cycle, cert)| Witness {
        tree: None,
        disc: None,
        cycle: Some(cycle),
        cert: Some(cert),
    });
    report.anomalies = anomalies;
    stats.set_elapsed(started.elapsed());
    report.stats = stats;
    report
}
