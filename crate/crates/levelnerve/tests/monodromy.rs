mod common;

use levelnerve::covers::{derived_cover, Cover, CoverSpec};
use levelnerve::limits::Limits;
use levelnerve::monodromy::{abelian_local_kernel, looijenga_local_kernel, smoothness_hypothesis};
use levelnerve::surface::graph::{enumerate_stable_graphs, max_edges, StableGraph};
use levelnerve::surface::standard_multicurve;
use proptest::prelude::*;

fn types_up_to(g: usize, n: usize, top_rank: usize) -> Vec<StableGraph> {
    let mut v = vec![StableGraph::trivial(g, n)];
    for k in 0..=top_rank.min(max_edges(g, n).saturating_sub(1)) {
        v.extend(enumerate_stable_graphs(g, n, k).unwrap());
    }
    v
}

#[test]
fn seven_types_of_genus_two() {
    assert_eq!(types_up_to(2, 0, 3).len(), 7);
}

#[test]
fn kernels_match_oracle_small_catalog() {
    for (g, n) in [(1, 1), (1, 2), (2, 0), (2, 1), (3, 0)] {
        for t in types_up_to(g, n, 3) {
            for m in [2, 3, 4, 6] {
                let k = abelian_local_kernel(&t, m).unwrap();
                assert_eq!(k.generators, common::kernel_oracle(&t, m), "{t:?} m={m}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn kernel_oracle_random(m in 2i64..12, which in 0usize..1000) {
        let all: Vec<StableGraph> = [(2, 1), (2, 2), (3, 0)]
            .iter()
            .flat_map(|&(g, n)| types_up_to(g, n, 3))
            .collect();
        let t = &all[which % all.len()];
        let k = abelian_local_kernel(t, m).unwrap();
        prop_assert_eq!(&k.generators, &common::kernel_oracle(t, m));
        let bridges = common::cycle_columns(t).iter().filter(|c| c.iter().all(|b| !b)).count();
        let free = t.edges.len() - bridges;
        // E/K is killed by m and has rank at most the number of non-bridges.
        prop_assert!(k.quotient.iter().all(|&q| q != 0 && m as i128 % q == 0));
        prop_assert!(k.quotient.len() <= free);
    }
}

#[test]
fn derived_cover_kernels_follow_deck_orders() {
    let lim = Limits::default();
    let base = Cover::new(&CoverSpec::identity(2, 0), &lim).unwrap();
    let spec = derived_cover(&base, 2, &lim).unwrap();
    let cover = Cover::new(&spec, &lim).unwrap();
    assert!(smoothness_hypothesis(&spec, &lim).unwrap().holds);
    for t in types_up_to(2, 0, 3).into_iter().skip(1) {
        let (_, cs) = standard_multicurve(&t).unwrap();
        let k = looijenga_local_kernel(&t, &spec, 2, &lim).unwrap();
        for e in 0..t.edges.len() {
            let c = cover.order(cover.eval(cs.curve_word(e))) as i64;
            assert!(c == 1 || c == 2);
            let mut row = vec![0; t.edges.len()];
            row[e] = 2 * c;
            assert_eq!(k.generators[e], row);
        }
    }
}
