//! Canonical form of a map up to combinatorial isomorphism.
//!
//! Flags `(vertex, edge, face)` of a connected map are permuted regularly by
//! its automorphisms, so a breadth-first walk over flags from a fixed start
//! flag labels vertices in an isomorphism-invariant order. The canonical form
//! is the least relabeled face list over all start flags.

use std::collections::VecDeque;

use crate::map::{EdgeKey, Face, FaceId, PolyhedralMap};

/// Relabeled, sorted face list; equal forms mean isomorphic maps.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(pub Vec<Face>);

/// Flag encoded as face, corner position in that face, and which of the two
/// face edges at the corner (`false`: towards the next vertex).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Flag {
    face: FaceId,
    corner: usize,
    back: bool,
}

struct FlagSpace<'a> {
    map: &'a PolyhedralMap,
    offsets: Vec<usize>,
}

impl<'a> FlagSpace<'a> {
    fn new(map: &'a PolyhedralMap) -> Self {
        let mut offsets = Vec::with_capacity(map.num_faces() + 1);
        let mut acc = 0;
        for f in map.faces() {
            offsets.push(acc);
            acc += 2 * f.len();
        }
        offsets.push(acc);
        FlagSpace { map, offsets }
    }

    fn count(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    fn index(&self, fl: Flag) -> usize {
        self.offsets[fl.face] + 2 * fl.corner + usize::from(fl.back)
    }

    fn flag(&self, idx: usize) -> Flag {
        let face = self.offsets.partition_point(|&o| o <= idx) - 1;
        let rel = idx - self.offsets[face];
        Flag {
            face,
            corner: rel / 2,
            back: rel % 2 == 1,
        }
    }

    fn vertex(&self, fl: Flag) -> usize {
        self.map.face(fl.face).vertices()[fl.corner]
    }

    fn other_end(&self, fl: Flag) -> usize {
        let f = self.map.face(fl.face);
        let step = if fl.back { -1 } else { 1 };
        f.at(fl.corner as isize + step)
    }

    /// Same face and edge, other vertex.
    fn r0(&self, fl: Flag) -> Flag {
        let len = self.map.face(fl.face).len();
        let corner = if fl.back {
            (fl.corner + len - 1) % len
        } else {
            (fl.corner + 1) % len
        };
        Flag {
            face: fl.face,
            corner,
            back: !fl.back,
        }
    }

    /// Same face and vertex, other edge.
    fn r1(&self, fl: Flag) -> Flag {
        Flag {
            back: !fl.back,
            ..fl
        }
    }

    /// Same vertex and edge, other face.
    fn r2(&self, fl: Flag) -> Flag {
        let v = self.vertex(fl);
        let w = self.other_end(fl);
        let [a, b] = self.map.edge_faces(EdgeKey::new(v, w)).unwrap();
        let g = if a == fl.face { b } else { a };
        let gf = self.map.face(g);
        let corner = gf.position(v).unwrap();
        let back = gf.at(corner as isize + 1) != w;
        Flag {
            face: g,
            corner,
            back,
        }
    }

    fn code_from(&self, start: Flag) -> Vec<Face> {
        let n = self.map.n();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut seen = vec![false; self.count()];
        seen[self.index(start)] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(fl) = queue.pop_front() {
            let v = self.vertex(fl);
            if label[v] == usize::MAX {
                label[v] = next;
                next += 1;
            }
            for nb in [self.r0(fl), self.r1(fl), self.r2(fl)] {
                let i = self.index(nb);
                if !seen[i] {
                    seen[i] = true;
                    queue.push_back(nb);
                }
            }
        }
        let mut faces: Vec<Face> = self
            .map
            .faces()
            .iter()
            .map(|f| {
                let relabeled: Vec<usize> = f.vertices().iter().map(|&v| label[v]).collect();
                Face::canonical(&relabeled)
            })
            .collect();
        faces.sort();
        faces
    }
}

pub fn canonical_form(map: &PolyhedralMap) -> CanonicalForm {
    let space = FlagSpace::new(map);
    let best = (0..space.count())
        .map(|i| space.code_from(space.flag(i)))
        .min()
        .expect("a map has at least one flag");
    CanonicalForm(best)
}

pub fn is_isomorphic(a: &PolyhedralMap, b: &PolyhedralMap) -> bool {
    a.n() == b.n()
        && a.num_edges() == b.num_edges()
        && a.num_faces() == b.num_faces()
        && canonical_form(a) == canonical_form(b)
}
