mod oracles;

use hypermatch::absorbing::{absorb, sample_absorbing_family, AbsorbParams};
use hypermatch::closeness::barrier_deficit;
use hypermatch::combinatorics::{format_ratio, int, parse_ratio, parse_vertex_list, ratio};
use hypermatch::constructions::{build_parity, parity_obstructs, PartitionBarrier};
use hypermatch::exact::{greedy_matching, max_matching, validate_matching};
use hypermatch::fractional::{fractional_optimum, stable_completion};
use hypermatch::hypergraph::CompleteOracle;
use hypermatch::io::{from_json, to_json};
use hypermatch::pipeline::{almost_perfect_pipeline, round1_sample, round2_sparsify, PipelineParams};
use hypermatch::rng::Probability;
use hypermatch::stability::shadow;
use hypermatch::{Error, Hypergraph, Vertex, VertexSet};
use itertools::Itertools;
use proptest::prelude::*;

fn hypergraph(max_n: usize) -> impl Strategy<Value = Hypergraph> {
    (2usize..=3, 4usize..=max_n).prop_flat_map(|(k, n)| {
        let all: Vec<Vec<Vertex>> = (0..n as Vertex).combinations(k).collect();
        proptest::collection::vec(any::<bool>(), all.len()).prop_map(move |keep| {
            let edges = all.iter().zip(&keep).filter(|(_, &b)| b).map(|(e, _)| e.clone()).collect();
            Hypergraph::new(n, k, edges).unwrap()
        })
    })
}

fn with_subset(max_n: usize) -> impl Strategy<Value = (Hypergraph, VertexSet)> {
    hypergraph(max_n).prop_flat_map(|h| {
        let n = h.n();
        (Just(h), proptest::collection::vec(any::<bool>(), n)).prop_map(|(h, bits)| {
            let s = (0..h.n() as Vertex).filter(|&v| bits[v as usize]).collect();
            (h, VertexSet::from_sorted(s))
        })
    })
}

fn sub_hypergraph(h: &Hypergraph, bits: &[bool]) -> Hypergraph {
    let edges = h.edges().iter().zip(bits).filter(|(_, &b)| b).map(|(e, _)| e.clone()).collect();
    Hypergraph::new(h.n(), h.k(), edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn degree_is_link_size((h, s) in with_subset(9)) {
        let t = VertexSet::from_sorted(s.as_slice().iter().copied().take(h.k() - 1).collect());
        prop_assert_eq!(h.degree(&t).unwrap(), h.link(&t).unwrap().edge_count());
        prop_assert_eq!(h.degree(&t).unwrap(), oracles::degree(&h, t.as_slice()));
    }

    #[test]
    fn remove_is_induced_on_complement((h, s) in with_subset(9)) {
        let removed = h.remove(&s).unwrap();
        let induced = h.induced(&s.complement(h.n())).unwrap();
        prop_assert_eq!(&removed.graph, &induced.graph);
        prop_assert_eq!(s.complement(h.n()).complement(h.n()), s.clone());
        for e in removed.graph.edges() {
            let lifted = removed.lift(e);
            prop_assert!(h.contains_edge(&lifted));
            prop_assert!(lifted.iter().all(|&v| !s.contains(v)));
        }
    }

    #[test]
    fn json_round_trip(h in hypergraph(9)) {
        let back = from_json(&to_json(&h)).unwrap();
        prop_assert_eq!(&back, &h);
        prop_assert_eq!(to_json(&back), to_json(&h));
    }

    #[test]
    fn matching_number_bounds((h, s) in with_subset(9)) {
        let m = max_matching(&h).unwrap();
        prop_assert!(validate_matching(&h, &m));
        prop_assert_eq!(m.size(), oracles::nu(&h));
        prop_assert!(m.size() <= h.n() / h.k());
        let rest = h.remove(&s).unwrap();
        prop_assert!(oracles::nu(&rest.graph) + s.len() >= m.size());
    }

    #[test]
    fn greedy_witness_is_maximal(h in hypergraph(9)) {
        let g = greedy_matching(&h);
        prop_assert!(validate_matching(&h, &g));
        let used = g.vertices();
        prop_assert!(!h.edges().iter().any(|e| e.iter().all(|&v| !used.contains(v))));
    }

    #[test]
    fn degrees_average_to_edge_count(h in hypergraph(8), l in 1usize..=2) {
        let l = l.min(h.k() - 1);
        let total: usize = (0..h.n() as Vertex)
            .combinations(l)
            .map(|t| h.degree(&VertexSet::from_sorted(t)).unwrap())
            .sum();
        prop_assert_eq!(total as u128, h.edge_count() as u128 * oracles::binom(h.k() as u64, l as u64));
        prop_assert_eq!(h.min_degree(l).unwrap(), oracles::min_degree(&h, l));
    }

    #[test]
    fn shadow_is_monotone(h in hypergraph(9), bits in proptest::collection::vec(any::<bool>(), 84)) {
        let sub = sub_hypergraph(&h, &bits);
        prop_assert!(shadow(&sub).len() <= shadow(&h).len());
        prop_assert_eq!(shadow(&h).len(), oracles::shadow_size(&h));
    }

    #[test]
    fn closeness_is_monotone(h in hypergraph(9), bits in proptest::collection::vec(any::<bool>(), 84), m in 1usize..=3) {
        let sub = sub_hypergraph(&h, &bits);
        let w = VertexSet::range(0, m as u32);
        let s = h.k();
        let big = barrier_deficit(&h, m, s, &w).unwrap();
        let small = barrier_deficit(&sub, m, s, &w).unwrap();
        prop_assert!(small.deficit >= big.deficit);
        let reference = oracles::barrier(h.n(), h.k(), s, m);
        prop_assert_eq!(big.deficit as usize, reference.iter().filter(|e| !h.contains_edge(e)).count());
        prop_assert_eq!(big.per_vertex_deficits.iter().sum::<u128>(), big.deficit * h.k() as u128);
    }

    #[test]
    fn completion_is_stable(h in hypergraph(7)) {
        let done = stable_completion(&h).unwrap();
        prop_assert!(oracles::is_stable(&done.graph));
        let before = fractional_optimum(&h).unwrap();
        prop_assert_eq!(&fractional_optimum(&done.graph).unwrap().tau_star, &before.tau_star);
        let relabeled = h.permute(&done.relabeling).unwrap();
        prop_assert!(relabeled.edges().iter().all(|e| done.graph.contains_edge(e)));
    }

    #[test]
    fn barrier_edge_count_is_binomial_sum(n in 4usize..=12, k in 2usize..=4, s in 1usize..=4, m in 0usize..=4) {
        prop_assume!(k <= n && s <= k && m <= n);
        let b = PartitionBarrier::canonical(n, k, s, m).unwrap();
        let expected: u128 = (1..=s)
            .map(|i| oracles::binom(m as u64, i as u64) * oracles::binom((n - m) as u64, (k - i) as u64))
            .sum();
        prop_assert_eq!(b.edge_count(), expected);
        let built = b.build();
        prop_assert_eq!(built.edge_count() as u128, expected);
        prop_assert_eq!(built.edges().to_vec(), oracles::barrier(n, k, s, m));
    }

    #[test]
    fn parity_obstruction_blocks_perfect_matchings(na in 0usize..=6, nb in 0usize..=6, k in 2usize..=4) {
        prop_assume!(na + nb >= k);
        let h = build_parity(na, nb, k).unwrap();
        if parity_obstructs(na, nb, k) {
            prop_assert!(oracles::nu(&h) < (na + nb) / k);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn round_one_recount(n in 20usize..200, copies in 1usize..20, seed in any::<u64>()) {
        let oracle = CompleteOracle { n, k: 3 };
        let sample = round1_sample(&oracle, copies, &Probability::Exact(ratio(1, 4)), seed).unwrap();
        prop_assert_eq!(&sample.y_single, &sample.recount_single());
        let total: u32 = sample.y_single.iter().sum();
        prop_assert_eq!(total as usize, sample.copies.iter().map(|r| r.len()).sum::<usize>());
        for (r, raw) in sample.copies.iter().zip(&sample.raw_sizes) {
            prop_assert_eq!(r.len() % 3, 0);
            prop_assert!(r.len() <= *raw && raw - r.len() < 3);
        }
    }

    #[test]
    fn sparsified_edges_come_from_the_host(h in hypergraph(9), seed in any::<u64>()) {
        let sample = round1_sample(&h, 6, &Probability::Exact(ratio(2, 3)), seed).unwrap();
        let fracs: Vec<_> = sample
            .copies
            .iter()
            .map(|r| fractional_optimum(&h.induced(r).unwrap().graph).ok())
            .collect();
        match round2_sparsify(&h, &sample, &fracs, seed) {
            Ok(sparse) => prop_assert!(sparse.subgraph.edges().iter().all(|e| h.contains_edge(e))),
            Err(Error::Pipeline { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn pipeline_output_is_a_matching(h in hypergraph(9), seed in any::<u64>()) {
        let params = PipelineParams::new(4, Probability::Exact(ratio(1, 2)), seed);
        match almost_perfect_pipeline(&h, &params) {
            Ok(out) => {
                prop_assert!(oracles::is_matching_in(&h, out.matching.edges()));
                prop_assert_eq!(out.uncovered, h.n() - h.k() * out.matching.size());
            }
            Err(Error::Pipeline { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn absorption_keeps_a_matching(n in 9usize..=15, seed in any::<u64>(), bits in proptest::collection::vec(any::<bool>(), 15)) {
        let h = Hypergraph::complete(n, 3);
        let params = AbsorbParams::new(3, 2, 1, 2).unwrap();
        let family = sample_absorbing_family(&h, &params, &int(1), seed, 0).unwrap();
        let covered = family.covered();
        let s = VertexSet::from_sorted(covered.complement(n).iter().filter(|&v| bits[v as usize]).collect());
        match absorb(&h, &family, &s) {
            Ok(out) => {
                prop_assert!(oracles::is_matching_in(&h, out.matching.edges()));
                prop_assert!(out.uncovered.len() < params.r_size());
                prop_assert_eq!(out.matching.vertices().union(&out.uncovered), covered.union(&s));
            }
            Err(Error::AbsorptionStuck { set }) => prop_assert_eq!(set.len(), params.r_size()),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn ratio_text_round_trip(num in -1000i64..1000, den in 1i64..1000) {
        let r = ratio(num, den);
        prop_assert_eq!(parse_ratio(&format_ratio(&r)).unwrap(), r);
    }

    #[test]
    fn vertex_list_round_trip(mut v in proptest::collection::vec(0u32..1000, 0..20)) {
        v.sort_unstable();
        v.dedup();
        let text = v.iter().map(|x| x.to_string()).join(",");
        prop_assert_eq!(parse_vertex_list(&text).unwrap(), v);
    }
}
