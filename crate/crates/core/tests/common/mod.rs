//! Test-only oracles and instance generators. Nothing here calls into the
//! decoder's own parity or LP code.

#![allow(dead_code)]

use mwpf_core::hypergraph::defects_of;
use mwpf_core::{Certificate, DecodingHypergraph, ErrorPattern, Syndrome, Weight};
use rand::Rng;

/// All edge subsets of a graph with at most 64 edges whose defects match the
/// syndrome, described as a particular solution plus a null-space basis.
pub struct SolutionSpace {
    pub particular: u64,
    pub basis: Vec<u64>,
}

fn vertex_masks(graph: &DecodingHypergraph) -> Vec<u64> {
    assert!(graph.edge_count() <= 64);
    let mut rows = vec![0u64; graph.vertex_count()];
    for (e, edge) in graph.edges().iter().enumerate() {
        for &v in &edge.vertices {
            rows[v] |= 1 << e;
        }
    }
    rows
}

/// Gaussian elimination on 64-bit row masks; `None` if unsatisfiable.
pub fn solution_space(graph: &DecodingHypergraph, syndrome: &Syndrome) -> Option<SolutionSpace> {
    let m = graph.edge_count();
    let mut rows: Vec<(u64, bool)> = vertex_masks(graph)
        .into_iter()
        .enumerate()
        .map(|(v, r)| (r, syndrome.contains(v)))
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..m {
        let bit = 1u64 << col;
        let Some(p) = (next..rows.len()).find(|&i| rows[i].0 & bit != 0) else {
            continue;
        };
        rows.swap(next, p);
        let pivot = rows[next];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != next && row.0 & bit != 0 {
                row.0 ^= pivot.0;
                row.1 ^= pivot.1;
            }
        }
        pivots.push(col);
        next += 1;
    }
    if rows[next..].iter().any(|r| r.1) {
        return None;
    }
    let mut particular = 0u64;
    for (i, &col) in pivots.iter().enumerate() {
        if rows[i].1 {
            particular |= 1 << col;
        }
    }
    let basis = (0..m)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = 1u64 << free;
            for (i, &col) in pivots.iter().enumerate() {
                if rows[i].0 & (1 << free) != 0 {
                    v |= 1 << col;
                }
            }
            v
        })
        .collect();
    Some(SolutionSpace { particular, basis })
}

pub fn mask_weight(graph: &DecodingHypergraph, mask: u64) -> Weight {
    (0..graph.edge_count())
        .filter(|e| mask & (1 << e) != 0)
        .map(|e| graph.weight(e).clone())
        .sum()
}

/// Minimum parity-factor weight by enumerating the whole solution space.
pub fn oracle_min_weight(graph: &DecodingHypergraph, syndrome: &Syndrome) -> Option<Weight> {
    let space = solution_space(graph, syndrome)?;
    assert!(space.basis.len() <= 20, "solution space too large for the oracle");
    let uniform = graph.edges().iter().all(|e| e.weight == graph.edges()[0].weight);
    let mut best: Option<(u64, u32)> = None;
    for combo in 0u64..(1 << space.basis.len()) {
        let mut mask = space.particular;
        for (i, b) in space.basis.iter().enumerate() {
            if combo & (1 << i) != 0 {
                mask ^= b;
            }
        }
        if uniform {
            let ones = mask.count_ones();
            if best.is_none_or(|(_, c)| ones < c) {
                best = Some((mask, ones));
            }
        } else {
            let w = mask_weight(graph, mask);
            if best.is_none_or(|(b, _)| w < mask_weight(graph, b)) {
                best = Some((mask, 0));
            }
        }
    }
    best.map(|(mask, _)| mask_weight(graph, mask))
}

/// Minimum weight by trying every subset of edges directly.
pub fn exhaustive_min_weight(graph: &DecodingHypergraph, syndrome: &Syndrome) -> Option<Weight> {
    let rows = vertex_masks(graph);
    let target: Vec<bool> = (0..graph.vertex_count()).map(|v| syndrome.contains(v)).collect();
    let mut best: Option<Weight> = None;
    for mask in 0u64..(1 << graph.edge_count()) {
        if rows
            .iter()
            .zip(&target)
            .all(|(r, &t)| ((r & mask).count_ones() % 2 == 1) == t)
        {
            let w = mask_weight(graph, mask);
            if best.as_ref().is_none_or(|b| &w < b) {
                best = Some(w);
            }
        }
    }
    best
}

pub fn nullity(graph: &DecodingHypergraph) -> usize {
    solution_space(graph, &Syndrome::default()).unwrap().basis.len()
}

/// Random hypergraph with `|V| <= max_v`, `1 <= |E| <= max_e`, edge degree
/// `1..=max_deg` and integer weights `1..=10`.
pub fn random_graph(rng: &mut impl Rng, max_v: usize, max_e: usize, max_deg: usize) -> DecodingHypergraph {
    let n = rng.gen_range(1..=max_v);
    let m = rng.gen_range(1..=max_e);
    let edges = (0..m)
        .map(|_| {
            let deg = rng.gen_range(1..=max_deg.min(n));
            let mut vs: Vec<usize> = (0..n).collect();
            for i in 0..deg {
                let j = rng.gen_range(i..n);
                vs.swap(i, j);
            }
            vs.truncate(deg);
            vs.sort_unstable();
            (vs, Weight::from_integer(rng.gen_range(1..=10)))
        })
        .collect();
    DecodingHypergraph::new(n, edges).unwrap()
}

/// Syndrome of a uniformly random error pattern, hence satisfiable.
pub fn random_syndrome(rng: &mut impl Rng, graph: &DecodingHypergraph) -> Syndrome {
    let pattern = ErrorPattern::new((0..graph.edge_count()).filter(|_| rng.gen_bool(0.5)));
    defects_of(graph, &pattern).unwrap()
}

/// Random graph whose full incidence matrix has nullity at most one.
pub fn random_nullity_le1_graph(rng: &mut impl Rng) -> DecodingHypergraph {
    loop {
        let g = random_graph(rng, 8, 10, 4);
        if nullity(&g) <= 1 {
            return g;
        }
    }
}

/// Checks, without the decoder's own code, that the certificate's pattern is
/// a parity factor of the stated weight, its dual is feasible with the
/// stated objective, and the gap is their difference.
pub fn check_certificate(graph: &DecodingHypergraph, syndrome: &Syndrome, cert: &Certificate) -> Result<(), String> {
    if &defects_of(graph, &cert.pattern).map_err(|e| e.to_string())? != syndrome {
        return Err("pattern is not a parity factor".into());
    }
    let primal: Weight = cert.pattern.edges().iter().map(|&e| graph.weight(e).clone()).sum();
    if primal != cert.primal_weight {
        return Err(format!("primal {} != stated {}", primal, cert.primal_weight));
    }
    assert!(!graph.has_negative_weights());
    let mut load = vec![Weight::zero(); graph.edge_count()];
    let mut total = cert.weight_offset.clone();
    for (key, y) in cert.dual.iter() {
        if !y.is_positive() {
            return Err("non-positive dual value".into());
        }
        total += y;
        if !subgraph_invalid(graph, syndrome, key.vertices(), key.edges()) {
            return Err(format!("dual key {:?} is not invalid", key.vertices()));
        }
        let inside: Vec<bool> = (0..graph.vertex_count()).map(|v| key.vertices().contains(&v)).collect();
        for (e, edge) in graph.edges().iter().enumerate() {
            let touches = edge.vertices.iter().any(|&v| inside[v]);
            if touches && !key.edges().contains(&e) {
                load[e] += y;
            }
        }
    }
    for (e, l) in load.iter().enumerate() {
        if l > &graph.weight(e).abs() {
            return Err(format!("edge {e} overloaded: {l} > {}", graph.weight(e).abs()));
        }
    }
    if total != cert.dual_objective {
        return Err(format!("dual {} != stated {}", total, cert.dual_objective));
    }
    if cert.gap != &cert.primal_weight - &cert.dual_objective || cert.gap.is_negative() {
        return Err(format!("bad gap {}", cert.gap));
    }
    if cert.certified_optimal != cert.gap.is_zero() {
        return Err("certified flag disagrees with gap".into());
    }
    Ok(())
}

/// Whether no subset of `edges` has defects equal to `syndrome` on
/// `vertices`; every edge must lie inside `vertices`.
pub fn subgraph_invalid(graph: &DecodingHypergraph, syndrome: &Syndrome, vertices: &[usize], edges: &[usize]) -> bool {
    let local = |v: usize| vertices.iter().position(|&u| u == v).expect("edge leaves the subgraph");
    let sub = DecodingHypergraph::new(
        vertices.len(),
        edges
            .iter()
            .map(|&e| {
                (
                    graph.edge(e).vertices.iter().map(|&v| local(v)).collect(),
                    Weight::one(),
                )
            })
            .collect(),
    )
    .unwrap();
    let d = Syndrome::new(
        vertices
            .iter()
            .enumerate()
            .filter(|(_, &v)| syndrome.contains(v))
            .map(|(i, _)| i),
    );
    solution_space(&sub, &d).is_none()
}
