use std::collections::BTreeSet;

use crate::dual::{Direction, DualVarKey};
use crate::error::Error;
use crate::hypergraph::{DecodingHypergraph, EdgeIndex, SubgraphRef, Syndrome, VertexIndex};
use crate::parity::ParityMatrix;
use crate::relaxer::{ClusterView, Relaxer, RelaxerFinder};
use crate::weight::Weight;

/// The rows of a hyperblossom matrix that lie below the last pivot of a
/// non-hair column, restricted to the tight hair columns and the syndrome.
#[derive(Debug, Clone)]
pub struct HairMatrixView {
    parent: ParityMatrix,
    hair_start: usize,
    row_start: usize,
}

impl HairMatrixView {
    /// The full reduced matrix, non-hair tight columns first.
    pub fn parent(&self) -> &ParityMatrix {
        &self.parent
    }

    pub fn row_start(&self) -> usize {
        self.row_start
    }

    /// Tight hair edges in column order.
    pub fn hair_edges(&self) -> &[EdgeIndex] {
        &self.parent.columns()[self.hair_start..]
    }

    pub fn row_count(&self) -> usize {
        self.parent.rows().len() - self.row_start
    }

    /// Hair bits followed by the syndrome bit.
    pub fn row(&self, index: usize) -> Vec<bool> {
        let row = &self.parent.rows()[self.row_start + index];
        (self.hair_start..=self.parent.syndrome_column())
            .map(|j| row.get(j))
            .collect()
    }

    pub fn is_odd(&self, index: usize) -> bool {
        self.parent.rows()[self.row_start + index].get(self.parent.syndrome_column())
    }

    pub fn first_odd_row(&self) -> Option<usize> {
        (0..self.row_count()).find(|&i| self.is_odd(i))
    }

    pub fn odd_row_count(&self) -> usize {
        (0..self.row_count()).filter(|&i| self.is_odd(i)).count()
    }

    /// Hair edges with a one in the given row.
    pub fn row_edges(&self, index: usize) -> Vec<EdgeIndex> {
        let row = &self.parent.rows()[self.row_start + index];
        (self.hair_start..self.parent.syndrome_column())
            .filter(|&j| row.get(j))
            .map(|j| self.parent.columns()[j])
            .collect()
    }

    /// Exactly one row and it is all ones, syndrome included.
    pub fn is_single_all_ones(&self) -> bool {
        self.row_count() == 1 && self.row(0).into_iter().all(|b| b)
    }
}

/// Reduces the parity matrix of `(cluster_vertices, tight_edges)` with the
/// tight hairs of `hyperblossom` moved to the right.
pub fn hyperblossom_hair_matrix(
    graph: &DecodingHypergraph,
    cluster_vertices: &[VertexIndex],
    tight_edges: &BTreeSet<EdgeIndex>,
    syndrome: &Syndrome,
    hyperblossom: &DualVarKey,
) -> Result<HairMatrixView, Error> {
    if let Some(v) = hyperblossom
        .vertices()
        .iter()
        .find(|v| cluster_vertices.binary_search(v).is_err())
    {
        return Err(Error::Internal(format!(
            "hyperblossom {hyperblossom:?} has vertex {v} outside the cluster"
        )));
    }
    let (hair, rest): (Vec<EdgeIndex>, Vec<EdgeIndex>) =
        tight_edges.iter().partition(|&&e| hyperblossom.hair_contains(e));
    let hair_start = rest.len();
    let mut order = rest;
    order.extend(hair);
    let parent = ParityMatrix::new(graph, cluster_vertices, &order, syndrome)?;
    let row_start = (0..hair_start)
        .filter_map(|j| parent.pivot_row(j))
        .max()
        .map_or(0, |r| r + 1);
    Ok(HairMatrixView {
        parent,
        hair_start,
        row_start,
    })
}

/// Looks for relaxers `{S: -1, S+: +1}` that swap one hyperblossom for a
/// cluster-wide invalid subgraph missing the edges of an Odd hair row.
#[derive(Debug, Clone, Copy, Default)]
pub struct SingleHair;

impl RelaxerFinder for SingleHair {
    fn name(&self) -> &'static str {
        "single-hair"
    }

    fn find(&self, view: &ClusterView<'_>) -> Result<Option<Relaxer>, Error> {
        let tight = view.tight_edges();
        if ParityMatrix::new(view.graph, view.vertices, &tight, view.syndrome)?.is_inconsistent() {
            return Ok(None);
        }
        for s in view.hyperblossoms {
            let matrix = hyperblossom_hair_matrix(view.graph, view.vertices, view.tight, view.syndrome, s)?;
            if matrix.is_single_all_ones() {
                continue;
            }
            let Some(row) = matrix.first_odd_row() else {
                return Err(Error::Internal(format!("no Odd row for hyperblossom {s:?}")));
            };
            let plus: BTreeSet<EdgeIndex> = matrix.row_edges(row).into_iter().collect();
            let s_plus = DualVarKey::new(
                view.graph,
                SubgraphRef {
                    vertices: view.vertices.to_vec(),
                    edges: tight.iter().copied().filter(|e| !plus.contains(e)).collect(),
                },
            );
            let direction: Direction = [(s.clone(), -Weight::one()), (s_plus, Weight::one())]
                .into_iter()
                .collect();
            return Relaxer::new(direction, view.dual, view.tight).map(Some);
        }
        Ok(None)
    }
}
