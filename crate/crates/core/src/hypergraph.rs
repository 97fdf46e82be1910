//! Decoding hypergraphs, syndromes and error patterns.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::weight::Weight;

pub type VertexIndex = usize;
pub type EdgeIndex = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperEdge {
    /// sorted, non-empty, no duplicates
    pub vertices: Vec<VertexIndex>,
    pub weight: Weight,
}

/// One vertex per stabilizer measurement, one hyperedge per independent
/// error source. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodingHypergraph {
    vertex_count: usize,
    edges: Vec<HyperEdge>,
    adjacency: Vec<Vec<EdgeIndex>>,
}

impl DecodingHypergraph {
    /// Builds a graph with non-negative weights. Edge ids are list positions.
    pub fn new(vertex_count: usize, edges: Vec<(Vec<VertexIndex>, Weight)>) -> Result<Self, Error> {
        let graph = Self::with_signed_weights(vertex_count, edges)?;
        if let Some(edge) = graph.edges.iter().position(|e| e.weight.is_negative()) {
            return Err(Error::NegativeWeight {
                edge,
                weight: graph.edges[edge].weight.to_string(),
            });
        }
        Ok(graph)
    }

    /// Like [`DecodingHypergraph::new`] but accepts negative weights, as read
    /// from a problem file before [`preprocess_negative_weights`].
    pub fn with_signed_weights(vertex_count: usize, edges: Vec<(Vec<VertexIndex>, Weight)>) -> Result<Self, Error> {
        let mut adjacency = vec![Vec::new(); vertex_count];
        let mut built = Vec::with_capacity(edges.len());
        for (edge_index, (mut vertices, weight)) in edges.into_iter().enumerate() {
            if vertices.is_empty() {
                return Err(Error::EmptyEdge(edge_index));
            }
            if let Some(&vertex) = vertices.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::VertexOutOfRange {
                    edge: edge_index,
                    vertex,
                    vertex_count,
                });
            }
            vertices.sort_unstable();
            if let Some(pair) = vertices.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateVertex {
                    edge: edge_index,
                    vertex: pair[0],
                });
            }
            for &v in &vertices {
                adjacency[v].push(edge_index);
            }
            built.push(HyperEdge { vertices, weight });
        }
        Ok(Self {
            vertex_count,
            edges: built,
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[HyperEdge] {
        &self.edges
    }

    pub fn edge(&self, edge: EdgeIndex) -> &HyperEdge {
        &self.edges[edge]
    }

    pub fn weight(&self, edge: EdgeIndex) -> &Weight {
        &self.edges[edge].weight
    }

    /// Edge ids incident to `vertex`, ascending.
    pub fn incident(&self, vertex: VertexIndex) -> &[EdgeIndex] {
        &self.adjacency[vertex]
    }

    pub fn has_negative_weights(&self) -> bool {
        self.edges.iter().any(|e| e.weight.is_negative())
    }

    /// `E(V_S)`: edges touching at least one vertex of the set.
    pub fn incident_edges<'a>(&self, vertices: impl IntoIterator<Item = &'a VertexIndex>) -> BTreeSet<EdgeIndex> {
        vertices
            .into_iter()
            .flat_map(|&v| self.adjacency[v].iter().copied())
            .collect()
    }

    /// True when every vertex of `edge` satisfies `contains`.
    pub fn edge_inside(&self, edge: EdgeIndex, contains: impl Fn(VertexIndex) -> bool) -> bool {
        self.edges[edge].vertices.iter().all(|&v| contains(v))
    }

    fn check_edge(&self, edge: EdgeIndex) -> Result<(), Error> {
        if edge >= self.edges.len() {
            return Err(Error::InvalidEdge(edge));
        }
        Ok(())
    }

    fn check_vertex(&self, vertex: VertexIndex) -> Result<(), Error> {
        if vertex >= self.vertex_count {
            return Err(Error::InvalidVertex(vertex));
        }
        Ok(())
    }
}

/// Set of defect vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Syndrome {
    defects: Vec<VertexIndex>,
}

impl Syndrome {
    /// Sorts and deduplicates; does not range-check.
    pub fn new(defects: impl IntoIterator<Item = VertexIndex>) -> Self {
        let defects: BTreeSet<_> = defects.into_iter().collect();
        Self {
            defects: defects.into_iter().collect(),
        }
    }

    pub fn checked(graph: &DecodingHypergraph, defects: impl IntoIterator<Item = VertexIndex>) -> Result<Self, Error> {
        let syndrome = Self::new(defects);
        for &v in &syndrome.defects {
            graph.check_vertex(v)?;
        }
        Ok(syndrome)
    }

    pub fn defects(&self) -> &[VertexIndex] {
        &self.defects
    }

    pub fn contains(&self, vertex: VertexIndex) -> bool {
        self.defects.binary_search(&vertex).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.defects.is_empty()
    }

    pub fn len(&self) -> usize {
        self.defects.len()
    }

    /// Symmetric difference.
    pub fn xor(&self, other: &Syndrome) -> Syndrome {
        let a: BTreeSet<_> = self.defects.iter().copied().collect();
        let b: BTreeSet<_> = other.defects.iter().copied().collect();
        Syndrome::new(a.symmetric_difference(&b).copied())
    }
}

/// Set of edges that occurred.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ErrorPattern {
    edges: Vec<EdgeIndex>,
}

impl ErrorPattern {
    /// Sorts and deduplicates; does not range-check.
    pub fn new(edges: impl IntoIterator<Item = EdgeIndex>) -> Self {
        let edges: BTreeSet<_> = edges.into_iter().collect();
        Self {
            edges: edges.into_iter().collect(),
        }
    }

    pub fn checked(graph: &DecodingHypergraph, edges: impl IntoIterator<Item = EdgeIndex>) -> Result<Self, Error> {
        let pattern = Self::new(edges);
        for &e in &pattern.edges {
            graph.check_edge(e)?;
        }
        Ok(pattern)
    }

    pub fn edges(&self) -> &[EdgeIndex] {
        &self.edges
    }

    pub fn contains(&self, edge: EdgeIndex) -> bool {
        self.edges.binary_search(&edge).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn xor(&self, other: &ErrorPattern) -> ErrorPattern {
        let a: BTreeSet<_> = self.edges.iter().copied().collect();
        let b: BTreeSet<_> = other.edges.iter().copied().collect();
        ErrorPattern::new(a.symmetric_difference(&b).copied())
    }
}

/// A subgraph `(V_S, E_S)` with `E_S ⊆ E[V_S]`; both lists sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubgraphRef {
    pub vertices: Vec<VertexIndex>,
    pub edges: Vec<EdgeIndex>,
}

impl SubgraphRef {
    pub fn new(
        graph: &DecodingHypergraph,
        vertices: impl IntoIterator<Item = VertexIndex>,
        edges: impl IntoIterator<Item = EdgeIndex>,
    ) -> Result<Self, Error> {
        let vertices: Vec<_> = vertices.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let edges: Vec<_> = edges.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        for &v in &vertices {
            graph.check_vertex(v)?;
        }
        for &e in &edges {
            graph.check_edge(e)?;
            if !graph.edge_inside(e, |v| vertices.binary_search(&v).is_ok()) {
                return Err(Error::MalformedSubgraph(e));
            }
        }
        Ok(Self { vertices, edges })
    }

    pub fn contains_vertex(&self, vertex: VertexIndex) -> bool {
        self.vertices.binary_search(&vertex).is_ok()
    }

    pub fn contains_edge(&self, edge: EdgeIndex) -> bool {
        self.edges.binary_search(&edge).is_ok()
    }
}

/// Vertices incident to an odd number of pattern edges.
pub fn defects_of(graph: &DecodingHypergraph, pattern: &ErrorPattern) -> Result<Syndrome, Error> {
    let mut odd = BTreeSet::new();
    for &e in pattern.edges() {
        graph.check_edge(e)?;
        for &v in &graph.edge(e).vertices {
            if !odd.remove(&v) {
                odd.insert(v);
            }
        }
    }
    Ok(Syndrome {
        defects: odd.into_iter().collect(),
    })
}

pub fn weight_of(graph: &DecodingHypergraph, pattern: &ErrorPattern) -> Result<Weight, Error> {
    let mut total = Weight::zero();
    for &e in pattern.edges() {
        graph.check_edge(e)?;
        total += graph.weight(e);
    }
    Ok(total)
}

/// A problem with every negative edge flipped to an always-occurring error.
#[derive(Debug, Clone)]
pub struct Preprocessed {
    pub graph: DecodingHypergraph,
    pub syndrome: Syndrome,
    /// edges whose weight was negated
    pub flipped: ErrorPattern,
    /// sum of the original (negative) weights of the flipped edges; the
    /// original weight of a postprocessed pattern is its preprocessed weight
    /// plus this offset
    pub offset: Weight,
}

impl Preprocessed {
    /// Maps a parity factor of the preprocessed problem back to one of the
    /// original problem.
    pub fn postprocess(&self, pattern: &ErrorPattern) -> ErrorPattern {
        pattern.xor(&self.flipped)
    }
}

pub fn preprocess_negative_weights(graph: &DecodingHypergraph, syndrome: &Syndrome) -> Preprocessed {
    let flipped = ErrorPattern::new(
        graph
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.weight.is_negative())
            .map(|(i, _)| i),
    );
    let offset: Weight = flipped.edges().iter().map(|&e| graph.weight(e)).sum();
    let edges = graph
        .edges()
        .iter()
        .map(|e| (e.vertices.clone(), e.weight.abs()))
        .collect();
    let new_graph = DecodingHypergraph::new(graph.vertex_count(), edges).expect("edges were already validated");
    let flipped_defects = defects_of(graph, &flipped).expect("flipped edges are in range");
    Preprocessed {
        syndrome: syndrome.xor(&flipped_defects),
        graph: new_graph,
        flipped,
        offset,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn build_valid_and_empty() {
        let f1 = fixtures::f1();
        assert_eq!(f1.vertex_count(), 4);
        assert_eq!(f1.incident(2), &[0, 2]);
        let empty = DecodingHypergraph::new(0, vec![]).unwrap();
        assert_eq!(empty.edge_count(), 0);
    }

    #[test]
    fn build_errors() {
        assert_eq!(
            DecodingHypergraph::new(3, vec![(vec![5], Weight::one())]),
            Err(Error::VertexOutOfRange {
                edge: 0,
                vertex: 5,
                vertex_count: 3
            })
        );
        assert_eq!(
            DecodingHypergraph::new(3, vec![(vec![], Weight::one())]),
            Err(Error::EmptyEdge(0))
        );
        assert!(matches!(
            DecodingHypergraph::new(3, vec![(vec![1, 1], Weight::one())]),
            Err(Error::DuplicateVertex { .. })
        ));
        assert!(matches!(
            DecodingHypergraph::new(3, vec![(vec![1], Weight::from_integer(-1))]),
            Err(Error::NegativeWeight { .. })
        ));
    }

    #[test]
    fn defects_of_examples() {
        let f1 = fixtures::f1();
        assert_eq!(defects_of(&f1, &ErrorPattern::new([2])).unwrap().defects(), &[1, 2, 3]);
        assert_eq!(defects_of(&f1, &ErrorPattern::new([0, 1, 2])).unwrap().defects(), &[3]);
        assert!(defects_of(&f1, &ErrorPattern::default()).unwrap().is_empty());
        assert_eq!(defects_of(&f1, &ErrorPattern::new([7])), Err(Error::InvalidEdge(7)));
    }

    #[test]
    fn weight_of_examples() {
        let f1 = fixtures::f1();
        assert_eq!(weight_of(&f1, &ErrorPattern::default()).unwrap(), Weight::zero());
        assert_eq!(
            weight_of(&f1, &ErrorPattern::new([0, 1, 2])).unwrap(),
            Weight::from_integer(3)
        );
        let g = DecodingHypergraph::new(1, vec![(vec![0], Weight::new(1, 3)), (vec![0], Weight::new(1, 6))]).unwrap();
        assert_eq!(weight_of(&g, &ErrorPattern::new([0, 1])).unwrap(), Weight::new(1, 2));
    }

    #[test]
    fn preprocess_identity_when_nonnegative() {
        let f1 = fixtures::f1();
        let syndrome = Syndrome::new([3]);
        let pre = preprocess_negative_weights(&f1, &syndrome);
        assert_eq!(pre.graph, f1);
        assert_eq!(pre.syndrome, syndrome);
        assert!(pre.flipped.is_empty());
        assert!(pre.offset.is_zero());
    }

    #[test]
    fn preprocess_single_negative_edge() {
        let g = DecodingHypergraph::with_signed_weights(1, vec![(vec![0], Weight::from_integer(-2))]).unwrap();
        let pre = preprocess_negative_weights(&g, &Syndrome::default());
        assert_eq!(pre.graph.weight(0), &Weight::from_integer(2));
        assert_eq!(pre.syndrome.defects(), &[0]);
        assert_eq!(pre.flipped.edges(), &[0]);
        // decoding D' = {u} picks {e}; postprocessing returns the empty pattern
        let decoded = ErrorPattern::new([0]);
        let original = pre.postprocess(&decoded);
        assert!(original.is_empty());
        assert_eq!(
            weight_of(&g, &original).unwrap(),
            weight_of(&pre.graph, &decoded).unwrap() + &pre.offset
        );
    }

    #[test]
    fn preprocess_shared_vertex_xors() {
        // e0 = {0, 1}, e1 = {1, 2}: vertex 1 is flipped twice
        let g = DecodingHypergraph::with_signed_weights(
            3,
            vec![
                (vec![0, 1], Weight::from_integer(-1)),
                (vec![1, 2], Weight::from_integer(-3)),
            ],
        )
        .unwrap();
        let pre = preprocess_negative_weights(&g, &Syndrome::new([1]));
        assert_eq!(pre.syndrome.defects(), &[0, 1, 2]);
        assert_eq!(pre.offset, Weight::from_integer(-4));
    }
}
