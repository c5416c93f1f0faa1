#![allow(dead_code)]

use pathspace_core::{Hypergraph, ProblemInstance, ProcessSet};
use proptest::prelude::*;

/// Hypergraphs on `n_range` processes with up to `max_gens` generators.
pub fn hypergraph(n_range: std::ops::RangeInclusive<usize>, max_gens: usize) -> impl Strategy<Value = Hypergraph> {
    n_range.prop_flat_map(move |n| {
        let set = (0u32..1 << n)
            .prop_filter("at least two processes", |b| b.count_ones() >= 2)
            .prop_map(ProcessSet::from_bits);
        prop::collection::vec(set, 1..=max_gens).prop_map(move |gens| Hypergraph::new(n, gens).unwrap())
    })
}

pub fn instance(n_range: std::ops::RangeInclusive<usize>, max_gens: usize, max_k: u32) -> impl Strategy<Value = ProblemInstance> {
    hypergraph(n_range, max_gens).prop_flat_map(move |h| {
        prop::collection::vec(1..=max_k, h.n()).prop_map(move |k| ProblemInstance::new(h.clone(), k).unwrap())
    })
}

/// Relabels processes by `perm` (process `i` becomes `perm[i]`).
pub fn relabel(p: &ProblemInstance, perm: &[usize]) -> ProblemInstance {
    let n = p.n();
    let gens = p
        .hypergraph()
        .generators()
        .iter()
        .map(|g| ProcessSet::from_indices(g.iter().map(|i| perm[i])).unwrap());
    let mut k = vec![0; n];
    for (i, &ki) in p.k().iter().enumerate() {
        k[perm[i]] = ki;
    }
    ProblemInstance::new(Hypergraph::new(n, gens).unwrap(), k).unwrap()
}
