//! Fixtures shared by the benchmarks.

use qalink_core::{build_graph, enumerate_family_with_arity, PlumbingGraph, StandardForm};

/// Three tangles from {2, 3, 3/2, 4, 4/3}, `-3 <= e <= 4`.
pub fn acceptance_family() -> Vec<StandardForm> {
    enumerate_family_with_arity(3, 4, -3, 4)
        .expect("valid bounds")
        .collect()
}

/// Negative definite plumbings of the family members with nonzero determinant.
pub fn acceptance_graphs() -> Vec<PlumbingGraph> {
    acceptance_family()
        .iter()
        .filter(|sf| !sf.epsilon().is_zero())
        .map(|sf| {
            let oriented = if sf.epsilon().is_negative() {
                sf.clone()
            } else {
                sf.reflect().canonical_form()
            };
            build_graph(&oriented.to_negative_form()).expect("tangles below -1")
        })
        .collect()
}

pub fn e8() -> PlumbingGraph {
    "central: -2\nleg: -2\nleg: -2 -2\nleg: -2 -2 -2 -2\n"
        .parse()
        .expect("valid graph")
}

pub fn d4() -> PlumbingGraph {
    "central: -2\nleg: -2\nleg: -2\nleg: -2\n".parse().expect("valid graph")
}
