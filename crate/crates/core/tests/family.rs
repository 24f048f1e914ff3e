mod common;

use std::collections::BTreeSet;

use common::generated_family;
use ochroma::engine::o_colour;
use ochroma::ocycle::{is_o_colourable, validate_o_colouring};
use ochroma::orientation::{enumerate_assignments, is_vogwoc};
use ochroma::symmetry::map_code;

#[test]
fn family_is_deduplicated_and_bounded() {
    let fam = generated_family(6);
    let codes: BTreeSet<Vec<usize>> = fam.iter().map(|g| map_code(g, true)).collect();
    assert_eq!(codes.len(), fam.len());
    assert!(fam.iter().all(|g| g.vertex_count() <= 6 && g.is_connected()));
    for n in 1..=6 {
        assert!(fam.iter().any(|g| g.vertex_count() == n), "no graph with {n} vertices");
    }
}

#[test]
fn engine_agrees_with_oracle_on_family() {
    let mut coloured = 0;
    for g in generated_family(6) {
        for s in enumerate_assignments(&g) {
            let oracle = is_o_colourable(&g, &s).unwrap();
            match o_colour(&g, &s) {
                Ok((c, trace)) => {
                    assert!(oracle);
                    assert!(validate_o_colouring(&g, &s, &c.edge_colours(&g)));
                    assert_eq!(c.palette, c.colour.iter().collect::<BTreeSet<_>>().len());
                    assert_eq!(trace.steps[0].palette, c.palette);
                    coloured += 1;
                }
                Err(_) => {
                    assert!(!is_vogwoc(&g, &s).unwrap());
                    assert!(!oracle);
                }
            }
        }
    }
    assert!(coloured > 1000);
}
