mod common;

use std::collections::BTreeSet;

use common::{brute_automorphism_count, brute_covers, brute_cycles, random_instance};
use ochroma::catalog::{builtin, parse_vog, write_vog};
use ochroma::engine::o_colour;
use ochroma::graph::{edge_of, twin};
use ochroma::ocycle::{enumerate_decompositions, enumerate_o_cycles, step_options, validate_o_colouring, OCycle};
use ochroma::orientation::is_vogwoc;
use ochroma::symmetry::{act, automorphisms, encode, map_code, MapKind};
use ochroma::transforms::smooth;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const INSTANCES: u64 = 200;
const SEED: u64 = 0x0c0_1011;

#[test]
fn cycles_and_decompositions_match_brute_force_on_200_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut nontrivial = 0;
    for i in 0..INSTANCES {
        let (g, s) = random_instance(&mut rng, 5);
        let cycles = enumerate_o_cycles(&g, &s).unwrap();
        let ours: BTreeSet<Vec<usize>> = cycles.iter().map(|c| c.edge_set()).collect();
        assert_eq!(ours.len(), cycles.len(), "instance {i}: duplicate edge sets");
        let brute = brute_cycles(&g, &s);
        assert_eq!(ours, brute, "instance {i}");
        let (cycles, decs) = enumerate_decompositions(&g, &s).unwrap();
        let ours: BTreeSet<Vec<Vec<usize>>> = decs
            .iter()
            .map(|d| {
                let mut v: Vec<Vec<usize>> = d.cycles.iter().map(|&k| cycles[k].edge_set()).collect();
                v.sort();
                v
            })
            .collect();
        assert_eq!(ours.len(), decs.len());
        let list: Vec<Vec<usize>> = brute.into_iter().collect();
        assert_eq!(ours, brute_covers(g.edge_count(), &list), "instance {i}");
        if !decs.is_empty() && g.vertex_count() >= 3 {
            nontrivial += 1;
        }
    }
    assert!(nontrivial >= 20, "only {nontrivial} instances had a decomposition");
}

fn check_group(g: &ochroma::Graph) {
    let group = automorphisms(g);
    assert_eq!(group.len(), brute_automorphism_count(g));
    let distinct: BTreeSet<(&Vec<usize>, &Vec<usize>)> = group.iter().map(|a| (&a.vertex, &a.dart)).collect();
    assert_eq!(distinct.len(), group.len());
    for a in &group {
        assert!(a.is_valid(g));
    }
}

#[test]
fn automorphism_counts_match_brute_force() {
    for name in ["fig7a", "fig7b", "fig7c", "whitehead", "star6", "star8"] {
        check_group(&builtin(name).unwrap().graph);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    for _ in 0..40 {
        let (g, _) = random_instance(&mut rng, 8);
        check_group(&g);
    }
}

#[test]
fn map_automorphisms_fix_face_structure() {
    let g = builtin("star6").unwrap().graph;
    let faces = g.faces().unwrap();
    let face_of = |d: usize| faces.iter().position(|f| f.contains(&d)).unwrap();
    for a in automorphisms(&g).iter().filter(|a| a.kind(&g) == MapKind::Preserving) {
        for f in &faces {
            let images: BTreeSet<usize> = f.iter().map(|&d| face_of(a.dart[d])).collect();
            assert_eq!(images.len(), 1);
        }
    }
}

fn instance() -> impl Strategy<Value = (ochroma::Graph, ochroma::OrientationAssignment)> {
    (any::<u64>(), 1usize..=6).prop_map(|(seed, n)| random_instance(&mut ChaCha8Rng::seed_from_u64(seed), n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn step_options_leave_through_the_other_cell((g, s) in instance()) {
        for d in 0..g.dart_count() {
            let next = step_options(&g, &s, d).unwrap();
            let v = g.head(d);
            let o = s.orientation(&g, v).unwrap();
            prop_assert_eq!(next.len(), 2);
            for x in next {
                prop_assert_eq!(g.tail(x), v);
                prop_assert_ne!(o.cell_of(x), o.cell_of(twin(d)));
            }
        }
    }

    #[test]
    fn cycles_are_canonical_sorted_and_closed((g, s) in instance()) {
        let cycles = enumerate_o_cycles(&g, &s).unwrap();
        for w in cycles.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
        for c in &cycles {
            let ds = c.darts();
            let k = ds.len();
            for i in 0..k {
                prop_assert_eq!(g.head(ds[i]), g.tail(ds[(i + 1) % k]));
            }
            let mut vs = c.vertices().to_vec();
            vs.sort_unstable();
            vs.dedup();
            prop_assert_eq!(vs.len(), k);
            let rotated: Vec<usize> = (0..k).map(|i| ds[(i + 1) % k]).collect();
            prop_assert_eq!(&OCycle::new(&g, &rotated), c);
            let reversed: Vec<usize> = ds.iter().rev().map(|&d| twin(d)).collect();
            prop_assert_eq!(&OCycle::new(&g, &reversed), c);
        }
    }

    #[test]
    fn decompositions_partition_the_edges((g, s) in instance()) {
        let (cycles, decs) = enumerate_decompositions(&g, &s).unwrap();
        for d in &decs {
            let mut edges: Vec<usize> = d.cycles.iter().flat_map(|&k| cycles[k].edges()).collect();
            edges.sort_unstable();
            prop_assert_eq!(edges, (0..g.edge_count()).collect::<Vec<_>>());
        }
        for w in decs.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn engine_output_validates((g, s) in instance()) {
        if is_vogwoc(&g, &s).unwrap() {
            let (c, _) = o_colour(&g, &s).unwrap();
            prop_assert!(validate_o_colouring(&g, &s, &c.edge_colours(&g)));
        } else {
            prop_assert!(o_colour(&g, &s).is_err());
        }
    }

    #[test]
    fn vog_text_round_trips((g, s) in instance()) {
        let text = write_vog(&g, Some(&s));
        let doc = parse_vog(&text).unwrap();
        prop_assert_eq!(&doc.graph, &g);
        prop_assert_eq!(doc.orientation.as_ref(), Some(&s));
    }

    #[test]
    fn smoothing_removes_one_vertex_and_two_edges((g, s) in instance()) {
        for v in 0..g.vertex_count() {
            if g.loops_at(v) == 2 {
                prop_assert!(smooth(&g, &s, v).is_err());
            } else if let Ok(p) = smooth(&g, &s, v) {
                prop_assert_eq!(p.graph.vertex_count(), g.vertex_count() - 1);
                prop_assert_eq!(p.graph.edge_count(), g.edge_count() - 2);
                prop_assert!(p.circles.is_empty());
            }
        }
    }

    #[test]
    fn map_code_ignores_relabelling((g, _s) in instance(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pv: Vec<usize> = (0..g.vertex_count()).collect();
        let mut pe: Vec<usize> = (0..g.edge_count()).collect();
        pv.shuffle(&mut rng);
        pe.shuffle(&mut rng);
        let mut edges = vec![(0, 0); g.edge_count()];
        for e in 0..g.edge_count() {
            let (a, b) = g.endpoints(e);
            edges[pe[e]] = (pv[a], pv[b]);
        }
        let dart = |d: usize| 2 * pe[d / 2] + (d & 1);
        let mut rot = vec![Vec::new(); g.vertex_count()];
        for v in 0..g.vertex_count() {
            rot[pv[v]] = g.darts_at(v).iter().map(|&d| dart(d)).collect();
        }
        let h = ochroma::Graph::new(4, g.vertex_count(), &edges, Some(&rot)).unwrap();
        prop_assert_eq!(map_code(&g, false), map_code(&h, false));
        prop_assert_eq!(map_code(&g, true), map_code(&g.reflected(), true));
    }

    #[test]
    fn orbit_action_preserves_cycle_counts(code in 0usize..64) {
        let g = builtin("star6").unwrap().graph;
        let s = ochroma::symmetry::decode(&g, code);
        let (c0, d0) = enumerate_decompositions(&g, &s).unwrap();
        for a in automorphisms(&g).iter().filter(|a| a.kind(&g) != MapKind::Incompatible).take(8) {
            let t = act(&g, a, &s).unwrap();
            let (c1, d1) = enumerate_decompositions(&g, &t).unwrap();
            prop_assert_eq!((c0.len(), d0.len()), (c1.len(), d1.len()));
            prop_assert_eq!(encode(&g, &act(&g, &a.inverse(), &t).unwrap()), code);
        }
    }
}

#[test]
fn edge_sets_identify_cycles_on_catalog() {
    for name in ["star6", "star8", "whitehead"] {
        let b = builtin(name).unwrap();
        for (_, s) in &b.orientations {
            let cycles = enumerate_o_cycles(&b.graph, s).unwrap();
            let brute = brute_cycles(&b.graph, s);
            let ours: BTreeSet<Vec<usize>> = cycles.iter().map(|c| common::edge_set_of(c.darts())).collect();
            assert_eq!(ours, brute, "{name}");
            assert!(cycles.iter().all(|c| c.edges().iter().all(|&e| e == edge_of(2 * e))));
        }
    }
}
