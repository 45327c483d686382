//! Acceptance checks, one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hammap::canon::is_isomorphic;
use hammap::crosscheck::{crosscheck, verify_witness, CrossOptions, Verdict};
use hammap::disc_grow::{grow_all_seeds, grow_each_seed, GrowMode, GrowOptions};
use hammap::map::PolyhedralMap;
use hammap::mapgen::{corpus, quad_torus_9_fixture, read_map, serialize_pmap, tri_torus_8_fixture};
use hammap::oracle::{
    brute_search, certify_contractible, certify_disc, collapse_to_point, cut_components,
    enumerate_hamiltonian, for_each_hamiltonian, BruteOptions,
};
use hammap::proper_tree::{
    check_proper_tree, construct_lemma1_tree, dual_disc, find_proper_tree, CandidateTree,
    SearchOptions,
};
use hammap::report::{Obstruction, Status, Witness};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(started: Instant, limit: Duration) -> Result<Duration, String> {
    let took = started.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))?;
    Ok(took)
}

fn example_negative() -> Outcome {
    let started = Instant::now();
    let map = quad_torus_9_fixture();
    let search = find_proper_tree(&map, SearchOptions::default());
    let expected = Some(Obstruction::NonIntegerM { n: 9, p: 4 });
    ensure(
        search.status == Status::Obstructed && search.obstruction == expected,
        || format!("search: {:?} {:?}", search.status, search.obstruction),
    )?;
    let grow = grow_all_seeds(&map, GrowOptions::default()).map_err(|e| e.to_string())?;
    ensure(
        grow.status == Status::Obstructed && grow.obstruction == expected,
        || format!("grow: {:?}", grow.status),
    )?;
    let brute = brute_search(&map, BruteOptions::default());
    let ham = brute.hamiltonian_count.unwrap_or(0);
    ensure(brute.status == Status::NotFound && ham >= 1, || {
        format!("brute: {:?} with {ham} Hamiltonian cycles", brute.status)
    })?;
    let took = within(started, Duration::from_secs(1))?;
    Ok(format!(
        "obstructed twice, brute not found with {ham} Hamiltonian cycles, {took:?}"
    ))
}

fn example_positive() -> Outcome {
    let started = Instant::now();
    let map = tri_torus_8_fixture();
    let search = find_proper_tree(&map, SearchOptions::default());
    ensure(search.status == Status::Found, || {
        format!("search: {:?}", search.status)
    })?;
    let w = search.witness.as_ref().ok_or("no witness")?;
    let k = w.tree.as_ref().map_or(0, |t| t.len());
    ensure(k == 6, || format!("k = {k}"))?;
    let boundary = &w.disc.as_ref().ok_or("no disc")?.boundary;
    let distinct: BTreeSet<_> = boundary.iter().collect();
    ensure(boundary.len() == 8 && distinct.len() == 8, || {
        format!("boundary {boundary:?}")
    })?;
    let cycle = w.cycle.as_ref().ok_or("no cycle")?;
    ensure(certify_contractible(&map, cycle).is_some(), || {
        "oracle rejects the tree's cycle".into()
    })?;
    let brute = brute_search(&map, BruteOptions::default());
    ensure(brute.status == Status::Found, || {
        format!("brute: {:?}", brute.status)
    })?;
    verify_witness(&map, brute.witness.as_ref().unwrap())?;
    let took = within(started, Duration::from_secs(5))?;
    Ok(format!(
        "k = 6, boundary {boundary:?}, brute certified, {took:?}"
    ))
}

fn equivalence_sweep() -> Outcome {
    let started = Instant::now();
    let mut lines = Vec::new();
    for (name, map) in corpus() {
        let r = crosscheck(&map, CrossOptions::default());
        ensure(r.verdict == Verdict::Agree, || {
            format!("{name}: {:?} {:?}", r.verdict, r.issues)
        })?;
        ensure(
            r.grow.is_some() == map.equivelar_signature().is_some(),
            || format!("{name}: grow skipped"),
        )?;
        lines.push(format!("{name}={:?}", r.search.status));
    }
    let took = within(started, Duration::from_secs(120))?;
    Ok(format!(
        "{} maps agree [{}], {took:?}",
        lines.len(),
        lines.join(" ")
    ))
}

fn tree_identity(map: &PolyhedralMap, w: &Witness) -> Result<(), String> {
    let dual = map.dual_map_lenient();
    let tree = w.tree.as_ref().ok_or("witness without a tree")?;
    let deg: usize = tree.vertices().iter().map(|&v| dual.degree(v)).sum();
    let k = tree.len();
    let disc = dual_disc(map, &dual, tree).map_err(|e| e.to_string())?;
    ensure(
        disc.boundary.len() == deg - 2 * (k - 1) && disc.boundary.len() == map.n(),
        || {
            format!(
                "boundary {} vs {deg} - 2({k} - 1), n = {}",
                disc.boundary.len(),
                map.n()
            )
        },
    )
}

fn counting_identities() -> Outcome {
    let mut trees = 0;
    let mut certs = 0;
    for (name, map) in corpus() {
        let mut witnesses = Vec::new();
        witnesses.extend(find_proper_tree(&map, SearchOptions::default()).witness);
        if let Ok(reports) = grow_each_seed(&map, GrowOptions::default()) {
            witnesses.extend(reports.into_iter().filter_map(|r| r.witness));
        }
        for w in &witnesses {
            tree_identity(&map, w).map_err(|e| format!("{name}: {e}"))?;
            trees += 1;
        }
        let mut failure = None;
        for_each_hamiltonian(&map, u64::MAX, |c| {
            for s in cut_components(&map, &c) {
                if let Ok(cert) = certify_disc(&map, &c, &s) {
                    let m = cert.interior_edges + 1;
                    certs += 1;
                    if m != cert.disc_faces.len() || cert.face_length_sum != map.n() + 2 * (m - 1) {
                        failure = Some(format!("{name}: cert {cert:?}"));
                        return ControlFlow::Break(());
                    }
                }
            }
            ControlFlow::Continue(())
        });
        if let Some(f) = failure {
            return Err(f);
        }
    }
    Ok(format!(
        "{trees} trees and {certs} certificates satisfy both counts"
    ))
}

fn duality_suite() -> Outcome {
    let mut checked = 0;
    for (name, map) in corpus() {
        let Ok(d) = map.dual_map() else { continue };
        let Ok(dd) = d.map.dual_map() else { continue };
        ensure(is_isomorphic(&map, &dd.map), || {
            format!("{name}: dual of dual differs")
        })?;
        ensure(
            d.map.euler_characteristic() == map.euler_characteristic(),
            || format!("{name}: chi changed"),
        )?;
        let sig = map.equivelar_signature().map(|s| s.transposed());
        ensure(d.map.equivelar_signature() == sig, || {
            format!("{name}: signature not transposed")
        })?;
        // the dual also survives a trip through the file format
        let again = read_map(serialize_pmap(&d.map).as_bytes()).map_err(|e| e.to_string())?;
        ensure(is_isomorphic(&again, &d.map), || {
            format!("{name}: pmap round trip")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} maps"))
}

fn oracle_self_checks() -> Outcome {
    let corpus = corpus();
    let get = |n: &str| &corpus.iter().find(|(name, _)| name == n).unwrap().1;
    let tet = enumerate_hamiltonian(get("tetrahedron"), None).len();
    let cube = enumerate_hamiltonian(get("cube"), None).len();
    ensure(tet == 3 && cube == 6, || format!("counts {tet} and {cube}"))?;
    let mut sphere_cycles = 0;
    let mut discs = 0;
    for (name, map) in &corpus {
        let sphere = map.euler_characteristic() == 2;
        let dual = map.dual_map_lenient();
        let mut failure = None;
        for_each_hamiltonian(map, u64::MAX, |c| {
            let mut any = false;
            for s in cut_components(map, &c) {
                discs += 1;
                let cert = certify_disc(map, &c, &s).ok();
                if cert.is_some() != collapse_to_point(map, &s) {
                    failure = Some(format!(
                        "{name}: certificate and collapse disagree on {s:?}"
                    ));
                    return ControlFlow::Break(());
                }
                if cert.is_some() {
                    any = true;
                    let tree = CandidateTree::induced(&dual, s.iter().copied());
                    if !tree.is_ok_and(|t| check_proper_tree(map, &dual, &t).is_proper()) {
                        failure = Some(format!("{name}: disc {s:?} has no proper dual tree"));
                        return ControlFlow::Break(());
                    }
                }
            }
            if sphere {
                sphere_cycles += 1;
                if !any {
                    failure = Some(format!("{name}: cycle {:?} not certified", c.order));
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        });
        if let Some(f) = failure {
            return Err(f);
        }
    }
    Ok(format!(
        "tetrahedron 3, cube 6, {sphere_cycles} sphere cycles certified, {discs} candidate discs agree"
    ))
}

fn lemma1_audit() -> Outcome {
    let mut log = Vec::new();
    for (name, map) in corpus() {
        let r = crosscheck(&map, CrossOptions::default());
        if let Some(a) = r.lemma1_audit {
            log.push(format!("{name}: {a}"));
        }
    }
    for (name, map) in [
        ("fixture 3x3", quad_torus_9_fixture()),
        ("fixture (1,8,2)", tri_torus_8_fixture()),
    ] {
        if let Some(a) = crosscheck(&map, CrossOptions::default()).lemma1_audit {
            log.push(format!("{name}: {a}"));
        }
    }
    ensure(log.is_empty(), || log.join("; "))?;
    // informational: the literal path construction and greedy growth
    let mut paths = (0, 0);
    let mut greedy = (0, 0);
    for (_, map) in corpus() {
        if let Ok(r) = construct_lemma1_tree(&map, SearchOptions::default()) {
            paths.1 += 1;
            paths.0 += usize::from(r.status == Status::Found);
        }
        let opts = GrowOptions {
            mode: GrowMode::Greedy,
            ..Default::default()
        };
        if let Ok(reports) = grow_each_seed(&map, opts) {
            for r in reports.iter().filter(|r| r.status != Status::Obstructed) {
                greedy.1 += 1;
                greedy.0 += usize::from(r.status == Status::Stuck);
            }
        }
    }
    Ok(format!(
        "audit log empty; path construction found {}/{} maps; greedy growth stuck on {}/{} seeds",
        paths.0, paths.1, greedy.0, greedy.1
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        (
            "1 negative example on the 9-vertex {4,4} torus",
            example_negative,
        ),
        (
            "2 positive example on the 8-vertex {3,6} torus",
            example_positive,
        ),
        ("3 equivalence sweep over the corpus", equivalence_sweep),
        ("4 counting identities", counting_identities),
        ("5 duality suite", duality_suite),
        ("6 oracle self-checks", oracle_self_checks),
        ("7 path-construction audit", lemma1_audit),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
