//! Small named instances shared by unit tests, integration tests and docs.

use crate::hypergraph::DecodingHypergraph;
use crate::weight::Weight;

fn unit(edges: &[&[usize]], vertex_count: usize) -> DecodingHypergraph {
    DecodingHypergraph::new(
        vertex_count,
        edges.iter().map(|e| (e.to_vec(), Weight::one())).collect(),
    )
    .expect("fixture is well formed")
}

/// Nullity-0 hypergraph on `v0..v3`: `e0 = {v0, v2}`, `e1 = {v0, v1}`,
/// `e2 = {v1, v2, v3}`, unit weights. With defect `v3` the only parity
/// factor is `{e0, e1, e2}`, and reaching dual value 3 needs subgraphs whose
/// edge set is smaller than `E[V_S]`.
pub fn f1() -> DecodingHypergraph {
    unit(&[&[0, 2], &[0, 1], &[1, 2, 3]], 4)
}

/// Triangle `a, b, c` with edges `ab`, `bc`, `ca`, unit weights.
pub fn f2() -> DecodingHypergraph {
    unit(&[&[0, 1], &[1, 2], &[2, 0]], 3)
}

/// One vertex with two parallel degree-1 edges of weight 2 and 5.
pub fn f3() -> DecodingHypergraph {
    DecodingHypergraph::new(
        1,
        vec![(vec![0], Weight::from_integer(2)), (vec![0], Weight::from_integer(5))],
    )
    .expect("fixture is well formed")
}

/// Distance-3 repetition code: checks `v1, v2` (ids 0, 1) and edges
/// `{v1}`, `{v1, v2}`, `{v2}` with unit weights.
pub fn f4() -> DecodingHypergraph {
    unit(&[&[0], &[0, 1], &[1]], 2)
}
