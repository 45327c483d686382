//! Running the three strategies side by side and re-verifying their witnesses.

use serde::{Deserialize, Serialize};

use crate::disc_grow::{grow_all_seeds, GrowMode, GrowOptions};
use crate::map::PolyhedralMap;
use crate::oracle::{brute_search, certify_disc, collapse_to_point, BruteOptions, HamCycle};
use crate::proper_tree::{
    check_proper_tree, dual_disc, find_proper_tree, CandidateTree, SearchOptions,
};
use crate::report::{SearchReport, Status, Witness, DEFAULT_BUDGET};

/// Re-check a witness from scratch against `map`. Whatever parts are present
/// must be consistent: a tree must be proper with a Hamiltonian disc boundary,
/// a disc must match the tree, a cycle must bound the disc, and a certificate
/// must pass the disc test, the collapse test and the face-length count.
pub fn verify_witness(map: &PolyhedralMap, w: &Witness) -> Result<(), String> {
    let dual = map.dual_map_lenient();
    let cycle = match &w.cycle {
        Some(c) => Some(HamCycle::new(map, &c.order).map_err(|e| format!("cycle: {e}"))?),
        None => None,
    };
    if let (Some(ours), Some(theirs)) = (&cycle, &w.cycle) {
        if ours != theirs {
            return Err("cycle is not in canonical form or its edge list is wrong".into());
        }
    }
    if let Some(tree) = &w.tree {
        let tree = CandidateTree::new(
            &dual,
            tree.vertices().iter().copied(),
            tree.edges().iter().copied(),
        )
        .map_err(|e| format!("tree: {e}"))?;
        let verdict = check_proper_tree(map, &dual, &tree);
        if !verdict.is_proper() {
            return Err(format!("tree is not proper: {verdict:?}"));
        }
        let disc = dual_disc(map, &dual, &tree).map_err(|e| format!("tree disc: {e}"))?;
        let k = tree.len();
        if disc.boundary.len() != map.n() || verdict.degree_sum.observed - 2 * (k - 1) != map.n() {
            return Err(format!(
                "tree disc boundary has {} vertices",
                disc.boundary.len()
            ));
        }
        if let Some(d) = &w.disc {
            if *d != disc {
                return Err("disc does not match the tree".into());
            }
        }
        let from_tree =
            HamCycle::new(map, &disc.boundary).map_err(|e| format!("tree boundary: {e}"))?;
        if let Some(c) = &cycle {
            if *c != from_tree {
                return Err("cycle is not the boundary of the tree's disc".into());
            }
        }
    }
    if let Some(cert) = &w.cert {
        let c = cycle.as_ref().ok_or("certificate without a cycle")?;
        let again = certify_disc(map, c, &cert.disc_faces)?;
        if again.interior_edges != cert.interior_edges
            || again.face_length_sum != cert.face_length_sum
        {
            return Err("certificate counts do not match".into());
        }
        let m = cert.disc_faces.len();
        if cert.interior_edges + 1 != m || cert.face_length_sum != map.n() + 2 * (m - 1) {
            return Err("certificate fails the face-length count".into());
        }
        if !collapse_to_point(map, &cert.disc_faces) {
            return Err("certified disc does not collapse".into());
        }
        let tree = CandidateTree::induced(&dual, cert.disc_faces.iter().copied())
            .map_err(|e| format!("certified disc's dual graph: {e}"))?;
        if !check_proper_tree(map, &dual, &tree).is_proper() {
            return Err("certified disc's dual tree is not proper".into());
        }
    }
    if w.tree.is_none() && w.cert.is_none() {
        return Err("witness has neither a tree nor a certificate".into());
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Agree,
    Disagree,
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrosscheckReport {
    pub verdict: Verdict,
    pub search: SearchReport,
    /// Absent for maps that are not equivelar.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grow: Option<SearchReport>,
    pub brute: SearchReport,
    /// Failed witness verifications and anomalies reported by the searches.
    pub issues: Vec<String>,
    /// Set when the map is equivelar with integer `(n - 2) / (p - 2)` and no
    /// proper tree exists.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lemma1_audit: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossOptions {
    pub budget: u64,
    pub threads: Option<usize>,
}

impl Default for CrossOptions {
    fn default() -> Self {
        CrossOptions {
            budget: DEFAULT_BUDGET,
            threads: None,
        }
    }
}

fn presence(status: Status) -> Option<bool> {
    match status {
        Status::Found => Some(true),
        s if s.is_absent() => Some(false),
        _ => None,
    }
}

pub fn crosscheck(map: &PolyhedralMap, opts: CrossOptions) -> CrosscheckReport {
    let search = find_proper_tree(
        map,
        SearchOptions {
            budget: opts.budget,
            threads: opts.threads,
        },
    );
    let grow = grow_all_seeds(
        map,
        GrowOptions {
            mode: GrowMode::Backtracking,
            budget: opts.budget,
            threads: opts.threads,
        },
    )
    .ok();
    let brute = brute_search(
        map,
        BruteOptions {
            budget: opts.budget,
            stop_at_first: false,
        },
    );

    let mut issues = Vec::new();
    let reports: Vec<&SearchReport> = [Some(&search), grow.as_ref(), Some(&brute)]
        .into_iter()
        .flatten()
        .collect();
    for r in &reports {
        issues.extend(r.anomalies.iter().map(|a| format!("{:?}: {a}", r.strategy)));
        if r.status == Status::Found {
            match &r.witness {
                Some(w) => {
                    if let Err(e) = verify_witness(map, w) {
                        issues.push(format!("{:?} witness: {e}", r.strategy));
                    }
                }
                None => issues.push(format!("{:?} reported Found without a witness", r.strategy)),
            }
        }
    }
    let answers: Vec<Option<bool>> = reports.iter().map(|r| presence(r.status)).collect();
    let verdict = if answers.iter().any(Option::is_none) {
        Verdict::Timeout
    } else if answers.windows(2).all(|w| w[0] == w[1]) && issues.is_empty() {
        Verdict::Agree
    } else {
        Verdict::Disagree
    };

    let lemma1_audit = map.equivelar_signature().and_then(|sig| {
        let m = sig.disc_face_count(map.n())?;
        (search.status == Status::NotFound).then(|| {
            format!(
                "{{{},{}}} map with n = {} and m = {m}: exhaustive search found no proper tree",
                sig.p,
                sig.q,
                map.n()
            )
        })
    });

    CrosscheckReport {
        verdict,
        search,
        grow,
        brute,
        issues,
        lemma1_audit,
    }
}
