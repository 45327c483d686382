//! Polyhedral maps on closed surfaces.
//!
//! A map is given as a list of faces, each a cyclic sequence of vertices.
//! Construction validates the closed-surface conditions (every edge in two
//! faces, every vertex link a single cycle), polyhedrality (two faces meet in
//! nothing, a vertex or a single edge) and connectivity, and derives the edge
//! set, per-vertex links and the Euler characteristic. A [`PolyhedralMap`] is
//! immutable once built.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::EdgeGraph;

/// Dense vertex index, `0..n`.
pub type VertexId = usize;
/// Index of a face in the canonical face order of a map.
pub type FaceId = usize;

/// Unordered vertex pair with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeKey {
    pub lo: VertexId,
    pub hi: VertexId,
}

impl EdgeKey {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        assert_ne!(a, b, "an edge needs two distinct endpoints");
        if a < b {
            EdgeKey { lo: a, hi: b }
        } else {
            EdgeKey { lo: b, hi: a }
        }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.lo == v || self.hi == v
    }

    /// The endpoint that is not `v`.
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.lo == v {
            self.hi
        } else {
            debug_assert_eq!(self.hi, v);
            self.lo
        }
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

/// A face boundary stored in canonical cyclic form: it starts at its least
/// vertex and runs in the direction whose second vertex is smaller.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Face(Vec<VertexId>);

impl Face {
    /// Canonical form of a cyclic sequence of pairwise distinct vertices.
    pub fn canonical(seq: &[VertexId]) -> Face {
        Face(canonical_cycle(seq))
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }

    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.0.iter().position(|&w| w == v)
    }

    /// Vertex at cyclic position `i`.
    pub fn at(&self, i: isize) -> VertexId {
        let len = self.0.len() as isize;
        self.0[i.rem_euclid(len) as usize]
    }

    /// Boundary edges in cyclic order, starting with `(v0, v1)`.
    pub fn edges(&self) -> impl Iterator<Item = EdgeKey> + '_ {
        let len = self.0.len();
        (0..len).map(move |i| EdgeKey::new(self.0[i], self.0[(i + 1) % len]))
    }

    pub fn has_edge(&self, e: EdgeKey) -> bool {
        match self.position(e.lo) {
            Some(i) => {
                let i = i as isize;
                self.at(i + 1) == e.hi || self.at(i - 1) == e.hi
            }
            None => false,
        }
    }
}

/// Least rotation of `seq` over both orientations. Entries must be distinct.
pub fn canonical_cycle<T: Ord + Copy>(seq: &[T]) -> Vec<T> {
    let len = seq.len();
    if len < 3 {
        let mut out = seq.to_vec();
        out.sort();
        return out;
    }
    let start = (0..len).min_by_key(|&i| seq[i]).unwrap();
    let forward = seq[(start + 1) % len];
    let backward = seq[(start + len - 1) % len];
    if forward <= backward {
        (0..len).map(|k| seq[(start + k) % len]).collect()
    } else {
        (0..len).map(|k| seq[(start + len - k) % len]).collect()
    }
}

/// `{p, q}` type of an equivelar map: every face a p-gon, every vertex of degree q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
}

impl Signature {
    pub fn transposed(self) -> Signature {
        Signature {
            p: self.q,
            q: self.p,
        }
    }

    /// `(n - 2) / (p - 2)` when it is a positive integer.
    pub fn disc_face_count(self, n: usize) -> Option<usize> {
        let denom = self.p - 2;
        (n > 2 && (n - 2).is_multiple_of(denom)).then(|| (n - 2) / denom)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.p, self.q)
    }
}

/// Reasons a face list does not describe a polyhedral map on a closed surface.
///
/// Face indices refer to the position of the face in the input list.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("NoFaces: the map has no faces")]
    NoFaces,
    #[error("FaceTooShort: face {face} has {len} vertices, at least 3 are required")]
    FaceTooShort { face: usize, len: usize },
    #[error("RepeatedVertexInFace: face {face} visits vertex {vertex} twice")]
    RepeatedVertexInFace { face: usize, vertex: String },
    #[error("EdgeNotInTwoFaces: edge {a}-{b} lies in {count} face(s)")]
    EdgeNotInTwoFaces { a: String, b: String, count: usize },
    #[error("PinchedVertex: the link of vertex {vertex} splits into {cycles} cycles")]
    PinchedVertex { vertex: String, cycles: usize },
    #[error(
        "NotPolyhedral: faces {first} and {second} share {shared_vertices} vertices and {shared_edges} edge(s)"
    )]
    NotPolyhedral {
        first: usize,
        second: usize,
        shared_vertices: usize,
        shared_edges: usize,
    },
    #[error("DisconnectedMap: the faces fall into {components} components")]
    DisconnectedMap { components: usize },
    #[error("DualNotPolyhedral: dual faces {first} and {second} violate polyhedrality")]
    DualNotPolyhedral { first: usize, second: usize },
}

impl MapError {
    /// Input face index the error points at, when it names one.
    pub fn face_index(&self) -> Option<usize> {
        match self {
            MapError::FaceTooShort { face, .. } | MapError::RepeatedVertexInFace { face, .. } => {
                Some(*face)
            }
            MapError::NotPolyhedral { first, .. } => Some(*first),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Reject maps where two faces meet in more than a vertex or an edge.
    /// When false the check still runs and its outcome is kept on the map.
    pub require_polyhedral: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            require_polyhedral: true,
        }
    }
}

/// One step of a vertex link: `face` is the face between the edge towards
/// `neighbor` and the edge towards the next entry's neighbor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkEntry {
    pub neighbor: VertexId,
    pub face: FaceId,
}

#[derive(Debug, Clone)]
pub struct PolyhedralMap {
    labels: Vec<String>,
    faces: Vec<Face>,
    face_index: HashMap<Face, FaceId>,
    edges: Vec<EdgeKey>,
    edge_faces: Vec<[FaceId; 2]>,
    edge_index: HashMap<EdgeKey, usize>,
    links: Vec<Vec<LinkEntry>>,
    polyhedral: bool,
}

/// Build a map from integer vertex ids. Ids need not be dense; they are
/// renumbered in increasing order and kept as labels.
pub fn build_map(faces: &[Vec<usize>]) -> Result<PolyhedralMap, MapError> {
    build_map_with(faces, BuildOptions::default())
}

pub fn build_map_with(faces: &[Vec<usize>], opts: BuildOptions) -> Result<PolyhedralMap, MapError> {
    check_face_lengths(faces.iter().map(Vec::len))?;
    let mut ids: Vec<usize> = faces.iter().flatten().copied().collect();
    ids.sort_unstable();
    ids.dedup();
    let dense: HashMap<usize, VertexId> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let labels = ids.iter().map(|id| id.to_string()).collect();
    let faces = faces
        .iter()
        .map(|f| f.iter().map(|id| dense[id]).collect())
        .collect();
    PolyhedralMap::from_dense(faces, labels, opts)
}

/// Build a map from textual vertex labels. Labels are renumbered in natural
/// order (`v2` before `v10`) and retained for output.
pub fn build_labeled_map<S: AsRef<str>>(
    faces: &[Vec<S>],
    opts: BuildOptions,
) -> Result<PolyhedralMap, MapError> {
    check_face_lengths(faces.iter().map(Vec::len))?;
    let mut labels: Vec<&str> = faces.iter().flatten().map(AsRef::as_ref).collect();
    labels.sort_by(|a, b| natural_cmp(a, b));
    labels.dedup();
    let dense: HashMap<&str, VertexId> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let faces = faces
        .iter()
        .map(|f| f.iter().map(|l| dense[l.as_ref()]).collect())
        .collect();
    let labels = labels.into_iter().map(str::to_owned).collect();
    PolyhedralMap::from_dense(faces, labels, opts)
}

fn check_face_lengths(lengths: impl Iterator<Item = usize>) -> Result<(), MapError> {
    let mut any = false;
    for (face, len) in lengths.enumerate() {
        any = true;
        if len < 3 {
            return Err(MapError::FaceTooShort { face, len });
        }
    }
    if any {
        Ok(())
    } else {
        Err(MapError::NoFaces)
    }
}

/// Compare labels treating runs of ASCII digits as numbers.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for ((da, sa), (db, sb)) in ca.iter().zip(cb.iter()) {
        let ord = if *da && *db {
            let (ta, tb) = (sa.trim_start_matches('0'), sb.trim_start_matches('0'));
            ta.len().cmp(&tb.len()).then_with(|| ta.cmp(tb))
        } else {
            sa.cmp(sb)
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

impl PolyhedralMap {
    fn from_dense(
        input: Vec<Vec<VertexId>>,
        labels: Vec<String>,
        opts: BuildOptions,
    ) -> Result<PolyhedralMap, MapError> {
        let n = labels.len();
        for (face, seq) in input.iter().enumerate() {
            let mut seen = vec![false; n];
            for &v in seq {
                if std::mem::replace(&mut seen[v], true) {
                    return Err(MapError::RepeatedVertexInFace {
                        face,
                        vertex: labels[v].clone(),
                    });
                }
            }
        }

        // Canonical face order; remember where each face came from for diagnostics.
        let mut order: Vec<(Face, usize)> = input
            .iter()
            .enumerate()
            .map(|(i, seq)| (Face::canonical(seq), i))
            .collect();
        order.sort();
        let origin: Vec<usize> = order.iter().map(|(_, i)| *i).collect();
        let faces: Vec<Face> = order.into_iter().map(|(f, _)| f).collect();

        let mut incidence: BTreeMap<EdgeKey, Vec<FaceId>> = BTreeMap::new();
        for (fid, face) in faces.iter().enumerate() {
            for e in face.edges() {
                incidence.entry(e).or_default().push(fid);
            }
        }
        if let Some((e, fs)) = incidence.iter().find(|(_, fs)| fs.len() != 2) {
            return Err(MapError::EdgeNotInTwoFaces {
                a: labels[e.lo].clone(),
                b: labels[e.hi].clone(),
                count: fs.len(),
            });
        }
        let edges: Vec<EdgeKey> = incidence.keys().copied().collect();
        let edge_faces: Vec<[FaceId; 2]> = incidence.values().map(|fs| [fs[0], fs[1]]).collect();
        let edge_index: HashMap<EdgeKey, usize> =
            edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();

        let mut links = Vec::with_capacity(n);
        for (v, label) in labels.iter().enumerate() {
            let (link, cycles) = walk_link(v, &faces, &edge_faces, &edge_index);
            if cycles != 1 {
                return Err(MapError::PinchedVertex {
                    vertex: label.clone(),
                    cycles,
                });
            }
            links.push(link);
        }

        let violation = polyhedrality_violation(&faces, &links, &edge_faces, &edge_index);
        if let (Some(bad), true) = (violation, opts.require_polyhedral) {
            let (a, b) = (origin[bad.0], origin[bad.1]);
            return Err(MapError::NotPolyhedral {
                first: a.min(b),
                second: a.max(b),
                shared_vertices: bad.2,
                shared_edges: bad.3,
            });
        }

        let components = face_components(faces.len(), &edge_faces);
        if components != 1 {
            return Err(MapError::DisconnectedMap { components });
        }

        let face_index = faces
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, f)| (f, i))
            .collect();
        Ok(PolyhedralMap {
            labels,
            faces,
            face_index,
            edges,
            edge_faces,
            edge_index,
            links,
            polyhedral: violation.is_none(),
        })
    }

    /// Number of vertices, `f0`.
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// `f0 - f1 + f2`.
    pub fn euler_characteristic(&self) -> i64 {
        self.n() as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    pub fn is_polyhedral(&self) -> bool {
        self.polyhedral
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    /// Replace the vertex labels. The count must match.
    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n());
        self.labels = labels;
        self
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: FaceId) -> &Face {
        &self.faces[f]
    }

    /// Id of the face with the given boundary, in any rotation or direction.
    pub fn face_id(&self, boundary: &[VertexId]) -> Option<FaceId> {
        self.face_index.get(&Face::canonical(boundary)).copied()
    }

    /// Sorted edge list.
    pub fn edges(&self) -> &[EdgeKey] {
        &self.edges
    }

    pub fn edge_id(&self, e: EdgeKey) -> Option<usize> {
        self.edge_index.get(&e).copied()
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        a != b && self.edge_index.contains_key(&EdgeKey::new(a, b))
    }

    /// The two faces containing `e`, in increasing order.
    pub fn edge_faces(&self, e: EdgeKey) -> Option<[FaceId; 2]> {
        self.edge_id(e).map(|i| self.edge_faces[i])
    }

    /// Faces sharing an edge with `f`, listed along the boundary of `f`.
    pub fn face_neighbors(&self, f: FaceId) -> impl Iterator<Item = (EdgeKey, FaceId)> + '_ {
        self.faces[f].edges().map(move |e| {
            let [a, b] = self.edge_faces[self.edge_index[&e]];
            (e, if a == f { b } else { a })
        })
    }

    /// The edge shared by two faces, if they are adjacent.
    pub fn shared_edge(&self, f: FaceId, g: FaceId) -> Option<EdgeKey> {
        self.face_neighbors(f)
            .find(|&(_, h)| h == g)
            .map(|(e, _)| e)
    }

    /// Cyclic link of `v`: neighbors and faces alternating around the vertex.
    pub fn link(&self, v: VertexId) -> &[LinkEntry] {
        &self.links[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.links[v].len()
    }

    /// Faces around `v` in cyclic order.
    pub fn faces_around(&self, v: VertexId) -> impl Iterator<Item = FaceId> + '_ {
        self.links[v].iter().map(|e| e.face)
    }

    pub fn equivelar_signature(&self) -> Option<Signature> {
        let p = self.faces[0].len();
        let q = self.degree(0);
        let uniform =
            self.faces.iter().all(|f| f.len() == p) && (0..self.n()).all(|v| self.degree(v) == q);
        uniform.then_some(Signature { p, q })
    }

    pub fn edge_graph(&self) -> EdgeGraph {
        EdgeGraph::from_edges(self.n(), self.edges.iter().map(|e| (e.lo, e.hi)))
    }

    /// Graph on faces, adjacent when they share an edge.
    pub fn face_adjacency(&self) -> EdgeGraph {
        EdgeGraph::from_edges(
            self.num_faces(),
            self.edge_faces.iter().map(|&[a, b]| (a, b)),
        )
    }
}

/// Walk the corners of `v` into link cycles. Returns the first cycle in
/// canonical orientation and the total number of cycles.
fn walk_link(
    v: VertexId,
    faces: &[Face],
    edge_faces: &[[FaceId; 2]],
    edge_index: &HashMap<EdgeKey, usize>,
) -> (Vec<LinkEntry>, usize) {
    // corner of face f at v: (prev, next)
    let mut corners: Vec<(FaceId, VertexId, VertexId)> = Vec::new();
    for (fid, face) in faces.iter().enumerate() {
        if let Some(i) = face.position(v) {
            let i = i as isize;
            corners.push((fid, face.at(i - 1), face.at(i + 1)));
        }
    }
    let mut used = vec![false; corners.len()];
    let corner_of = |f: FaceId| corners.iter().position(|c| c.0 == f).unwrap();
    let mut cycles = 0;
    let mut first = Vec::new();
    for start in 0..corners.len() {
        if used[start] {
            continue;
        }
        cycles += 1;
        let mut seq = Vec::new();
        let (f0, a0, _) = corners[start];
        let (mut face, mut from) = (f0, a0);
        loop {
            let c = corner_of(face);
            used[c] = true;
            let (_, a, b) = corners[c];
            let to = if a == from { b } else { a };
            seq.push(LinkEntry {
                neighbor: from,
                face,
            });
            let [g, h] = edge_faces[edge_index[&EdgeKey::new(v, to)]];
            face = if g == face { h } else { g };
            from = to;
            if face == f0 {
                break;
            }
        }
        if cycles == 1 {
            first = seq;
        }
    }
    (canonical_link(first), cycles)
}

fn canonical_link(seq: Vec<LinkEntry>) -> Vec<LinkEntry> {
    let len = seq.len();
    if len == 0 {
        return seq;
    }
    let start = (0..len).min_by_key(|&i| seq[i].neighbor).unwrap();
    let forward: Vec<LinkEntry> = (0..len).map(|k| seq[(start + k) % len]).collect();
    // Reverse direction: neighbors w0, w_{k-1}, ..., w1 with the faces between them.
    let backward: Vec<LinkEntry> = (0..len)
        .map(|k| LinkEntry {
            neighbor: seq[(start + len - k) % len].neighbor,
            face: seq[(start + 2 * len - k - 1) % len].face,
        })
        .collect();
    if forward[0].face <= backward[0].face {
        forward
    } else {
        backward
    }
}

/// First pair of faces (canonical ids) that meet in more than a vertex or a
/// single edge, with their shared vertex and edge counts.
fn polyhedrality_violation(
    faces: &[Face],
    links: &[Vec<LinkEntry>],
    edge_faces: &[[FaceId; 2]],
    edge_index: &HashMap<EdgeKey, usize>,
) -> Option<(FaceId, FaceId, usize, usize)> {
    let mut shared: BTreeMap<(FaceId, FaceId), usize> = BTreeMap::new();
    for link in links {
        for (i, a) in link.iter().enumerate() {
            for b in &link[i + 1..] {
                let key = (a.face.min(b.face), a.face.max(b.face));
                *shared.entry(key).or_default() += 1;
            }
        }
    }
    for ((f, g), count) in shared {
        if count < 2 {
            continue;
        }
        let edges = faces[f]
            .edges()
            .filter(|e| {
                let [a, b] = edge_faces[edge_index[e]];
                (a == f && b == g) || (a == g && b == f)
            })
            .count();
        if edges != 1 || count != 2 {
            return Some((f, g, count, edges));
        }
    }
    None
}

fn face_components(num_faces: usize, edge_faces: &[[FaceId; 2]]) -> usize {
    let mut adj = vec![Vec::new(); num_faces];
    for &[a, b] in edge_faces {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; num_faces];
    let mut components = 0;
    for s in 0..num_faces {
        if seen[s] {
            continue;
        }
        components += 1;
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(f) = queue.pop_front() {
            for &g in &adj[f] {
                if !std::mem::replace(&mut seen[g], true) {
                    queue.push_back(g);
                }
            }
        }
    }
    components
}

/// Bijections between the cells of a map and those of its dual.
///
/// Dual vertex `i` is primal face `i`; dual faces are the vertex links, so
/// their ids follow the dual's own canonical face order.
#[derive(Debug, Clone)]
pub struct DualCorrespondence {
    vertex_to_dface: Vec<FaceId>,
    dface_to_vertex: Vec<VertexId>,
    edge_to_dedge: BTreeMap<EdgeKey, EdgeKey>,
    dedge_to_edge: BTreeMap<EdgeKey, EdgeKey>,
}

impl DualCorrespondence {
    pub fn face_to_dvertex(&self, f: FaceId) -> VertexId {
        f
    }

    pub fn dvertex_to_face(&self, d: VertexId) -> FaceId {
        d
    }

    pub fn vertex_to_dface(&self, v: VertexId) -> FaceId {
        self.vertex_to_dface[v]
    }

    pub fn dface_to_vertex(&self, d: FaceId) -> VertexId {
        self.dface_to_vertex[d]
    }

    pub fn edge_to_dedge(&self, e: EdgeKey) -> Option<EdgeKey> {
        self.edge_to_dedge.get(&e).copied()
    }

    pub fn dedge_to_edge(&self, d: EdgeKey) -> Option<EdgeKey> {
        self.dedge_to_edge.get(&d).copied()
    }
}

/// A dual map together with its correspondence to the primal.
#[derive(Debug, Clone)]
pub struct Dual {
    pub map: PolyhedralMap,
    pub corr: DualCorrespondence,
}

impl Dual {
    /// Whether the dual satisfies polyhedrality. Proper-tree search only needs
    /// its edge graph and face boundaries, which exist either way.
    pub fn is_polyhedral(&self) -> bool {
        self.map.is_polyhedral()
    }

    /// Dual degree of the dual vertex standing for face `f`.
    pub fn degree(&self, f: FaceId) -> usize {
        self.map.degree(f)
    }

    /// Boundary of the dual face of primal vertex `v`: the faces around `v`.
    pub fn face_boundary(&self, v: VertexId) -> &Face {
        self.map.face(self.corr.vertex_to_dface(v))
    }
}

impl PolyhedralMap {
    /// Dual map; fails with `DualNotPolyhedral` when the dual violates
    /// polyhedrality. See [`PolyhedralMap::dual_map_lenient`] for map-only use.
    pub fn dual_map(&self) -> Result<Dual, MapError> {
        let dual = self.dual_map_lenient();
        if dual.is_polyhedral() {
            return Ok(dual);
        }
        let (first, second, ..) = polyhedrality_violation(
            &dual.map.faces,
            &dual.map.links,
            &dual.map.edge_faces,
            &dual.map.edge_index,
        )
        .expect("non-polyhedral map has a violating pair");
        Err(MapError::DualNotPolyhedral {
            first: dual.corr.dface_to_vertex(first),
            second: dual.corr.dface_to_vertex(second),
        })
    }

    pub fn dual_map_lenient(&self) -> Dual {
        let dual_faces: Vec<Vec<usize>> = (0..self.n())
            .map(|v| self.faces_around(v).collect())
            .collect();
        let map = PolyhedralMap::from_dense(
            dual_faces.clone(),
            (0..self.num_faces()).map(|f| format!("f{f}")).collect(),
            BuildOptions {
                require_polyhedral: false,
            },
        )
        .expect("the dual of a closed-surface map is a closed-surface map");
        let vertex_to_dface: Vec<FaceId> = dual_faces
            .iter()
            .map(|seq| map.face_id(seq).expect("dual face present"))
            .collect();
        let mut dface_to_vertex = vec![0; self.n()];
        for (v, &d) in vertex_to_dface.iter().enumerate() {
            dface_to_vertex[d] = v;
        }
        let mut edge_to_dedge = BTreeMap::new();
        let mut dedge_to_edge = BTreeMap::new();
        for (i, &e) in self.edges.iter().enumerate() {
            let [a, b] = self.edge_faces[i];
            let d = EdgeKey::new(a, b);
            edge_to_dedge.insert(e, d);
            dedge_to_edge.insert(d, e);
        }
        Dual {
            map,
            corr: DualCorrespondence {
                vertex_to_dface,
                dface_to_vertex,
                edge_to_dedge,
                dedge_to_edge,
            },
        }
    }
}
