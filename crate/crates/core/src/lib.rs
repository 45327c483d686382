//! Contractible Hamiltonian cycles in polyhedral maps.
//!
//! A contractible Hamiltonian cycle of a map on a closed surface bounds a disc
//! of faces, and such discs correspond to proper trees in the dual map. The
//! crate searches for them three ways, by proper-tree search in the dual, by
//! growing a disc face by face, and by brute-force enumeration of Hamiltonian
//! cycles, and checks that the answers agree.

pub mod canon;
pub mod crosscheck;
pub mod disc_grow;
pub mod graph;
pub mod map;
pub mod mapgen;
pub mod oracle;
pub mod proper_tree;
pub mod report;

pub use crosscheck::{crosscheck, verify_witness, CrossOptions, CrosscheckReport, Verdict};
pub use disc_grow::{grow_all_seeds, grow_disc, GrowMode, GrowOptions};
pub use map::{
    build_labeled_map, build_map, BuildOptions, EdgeKey, Face, FaceId, MapError, PolyhedralMap,
    VertexId,
};
pub use oracle::{brute_search, certify_contractible, collapse_to_point, BruteOptions, HamCycle};
pub use proper_tree::{
    check_proper_tree, construct_lemma1_tree, find_proper_tree, CandidateTree, SearchOptions,
};
pub use report::{SearchReport, Status, Strategy, Witness};
