use hammap::crosscheck::{crosscheck, verify_witness, CrossOptions, Verdict};
use hammap::disc_grow::{grow_disc, grow_each_seed, GrowMode, GrowOptions, GrowRule};
use hammap::map::{build_map, PolyhedralMap};
use hammap::mapgen::{
    corpus, gen_platonic, gen_quad_torus, tri_torus_8_fixture, PlatonicSolid, TorusGridParams,
};
use hammap::oracle::{brute_search, BruteOptions};
use hammap::proper_tree::{construct_lemma1_tree, find_proper_tree, SearchOptions, TreeError};
use hammap::report::Status;

fn pyramid() -> PolyhedralMap {
    build_map(&[
        vec![0, 1, 2, 3],
        vec![0, 1, 4],
        vec![1, 2, 4],
        vec![2, 3, 4],
        vec![3, 0, 4],
    ])
    .unwrap()
}

fn prism() -> PolyhedralMap {
    build_map(&[
        vec![0, 1, 2],
        vec![3, 4, 5],
        vec![0, 1, 4, 3],
        vec![1, 2, 5, 4],
        vec![2, 0, 3, 5],
    ])
    .unwrap()
}

#[test]
fn witnesses_do_not_depend_on_thread_count() {
    for (name, map) in corpus() {
        let one = find_proper_tree(
            &map,
            SearchOptions {
                threads: Some(1),
                ..Default::default()
            },
        );
        let many = find_proper_tree(
            &map,
            SearchOptions {
                threads: Some(3),
                ..Default::default()
            },
        );
        assert_eq!(one.status, many.status, "{name}");
        assert_eq!(one.witness, many.witness, "{name}");
    }
}

#[test]
fn backtracking_growth_is_seed_independent() {
    for (name, map) in corpus() {
        let reports = grow_each_seed(&map, GrowOptions::default()).unwrap();
        let first = reports[0].status;
        assert!(reports.iter().all(|r| r.status == first), "{name}");
        for r in reports.iter().filter(|r| r.status == Status::Found) {
            verify_witness(&map, r.witness.as_ref().unwrap()).unwrap();
        }
    }
}

#[test]
fn greedy_steps_keep_the_vertex_count() {
    for (name, map) in corpus() {
        let Some(sig) = map.equivelar_signature() else {
            continue;
        };
        let opts = GrowOptions {
            mode: GrowMode::Greedy,
            ..Default::default()
        };
        for seed in 0..map.num_faces() {
            let r = grow_disc(&map, seed, opts).unwrap();
            for (i, s) in r.steps.iter().enumerate() {
                assert_eq!(s.covered, sig.p + i * (sig.p - 2), "{name} seed {seed}");
                if s.rule == GrowRule::B {
                    assert_eq!(s.escape_path.last(), Some(&s.face));
                    assert!(s.escape_path.len() >= 2);
                }
            }
            if r.status == Status::Found {
                verify_witness(&map, r.witness.as_ref().unwrap()).unwrap();
            } else {
                assert!(
                    matches!(r.status, Status::Stuck | Status::Obstructed),
                    "{name}"
                );
            }
        }
    }
}

#[test]
fn path_construction_on_the_triangulated_torus() {
    let map = tri_torus_8_fixture();
    let r = construct_lemma1_tree(&map, SearchOptions::default()).unwrap();
    assert_eq!(r.status, Status::Found);
    let w = r.witness.unwrap();
    let tree = w.tree.as_ref().unwrap();
    assert_eq!(tree.len(), 6);
    assert_eq!(tree.edges().len(), 5);
    verify_witness(&map, &w).unwrap();
}

#[test]
fn path_construction_needs_an_integer_count() {
    assert!(matches!(
        construct_lemma1_tree(&pyramid(), SearchOptions::default()),
        Err(TreeError::NotEquivelar)
    ));
    let torus = gen_quad_torus(TorusGridParams::new(3, 5, 0)).unwrap();
    assert!(matches!(
        construct_lemma1_tree(&torus, SearchOptions::default()),
        Err(TreeError::NonIntegerM { n: 15, p: 4 })
    ));
}

#[test]
fn non_equivelar_maps_agree_without_growth() {
    for map in [pyramid(), prism()] {
        let r = crosscheck(&map, CrossOptions::default());
        assert!(r.grow.is_none());
        assert_eq!(r.verdict, Verdict::Agree, "{:?}", r.issues);
        assert_eq!(r.search.status, Status::Found);
    }
}

#[test]
fn single_face_tree_on_the_pyramid() {
    // the pyramid's base misses the apex, so no tree of one face works, but
    // base plus one triangle does
    let r = find_proper_tree(&pyramid(), SearchOptions::default());
    let tree = r.witness.unwrap().tree.unwrap();
    assert_eq!(tree.len(), 2);
}

#[test]
fn dodecahedron_agrees() {
    let map = gen_platonic(PlatonicSolid::Dodecahedron);
    let r = crosscheck(&map, CrossOptions::default());
    assert_eq!(r.verdict, Verdict::Agree, "{:?}", r.issues);
    assert_eq!(r.brute.hamiltonian_count, Some(30));
    assert_eq!(r.search.witness.unwrap().tree.unwrap().len(), 6);
}

#[test]
fn larger_quad_torus_without_the_oracle() {
    // 5x5: n = 25, (25 - 2) / 2 is not an integer
    let odd = gen_quad_torus(TorusGridParams::new(5, 5, 0)).unwrap();
    assert_eq!(
        find_proper_tree(&odd, SearchOptions::default()).status,
        Status::Obstructed
    );
    // 4x5: n = 20, nine squares
    let even = gen_quad_torus(TorusGridParams::new(4, 5, 0)).unwrap();
    let r = find_proper_tree(&even, SearchOptions::default());
    assert_eq!(r.status, Status::Found);
    assert_eq!(r.witness.as_ref().unwrap().tree.as_ref().unwrap().len(), 9);
    verify_witness(&even, r.witness.as_ref().unwrap()).unwrap();
}

#[test]
fn brute_first_stops_early() {
    let map = gen_platonic(PlatonicSolid::Icosahedron);
    let all = brute_search(&map, BruteOptions::default());
    let first = brute_search(
        &map,
        BruteOptions {
            stop_at_first: true,
            ..Default::default()
        },
    );
    assert_eq!(first.status, Status::Found);
    assert_eq!(first.witness, all.witness);
    assert!(first.stats.nodes < all.stats.nodes);
    assert_eq!(first.hamiltonian_count, None);
}
