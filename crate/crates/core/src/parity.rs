//! GF(2) parity matrices in reduced row echelon form, and the exact
//! parity-factor enumeration built on them.
//!
//! A parity matrix has one row per vertex and one column per edge, plus a
//! rightmost augmented column holding the syndrome bit. A pattern `x` is a
//! parity factor iff `M (x, 1)^T = 0`. Row additions preserve that solution
//! space, so everything here works on the echelon form.

use std::collections::HashSet;
use std::ops::{AddAssign, SubAssign};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::Error;
use crate::hypergraph::{DecodingHypergraph, EdgeIndex, ErrorPattern, SubgraphRef, Syndrome, VertexIndex};
use crate::weight::{common_denominator, Weight};

/// Bit-packed GF(2) row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(bits: usize) -> Self {
        Self {
            words: vec![0; bits.div_ceil(64)],
        }
    }

    #[inline]
    pub fn get(&self, index: usize) -> bool {
        self.words[index / 64] >> (index % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, index: usize, value: bool) {
        let mask = 1u64 << (index % 64);
        if value {
            self.words[index / 64] |= mask;
        } else {
            self.words[index / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, index: usize) {
        self.words[index / 64] ^= 1u64 << (index % 64);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of set bits below `limit`, ascending.
    pub fn ones(&self, limit: usize) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(move |(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + bit)
            })
            .take_while(move |&i| i < limit)
        })
    }
}

impl std::fmt::Debug for BitRow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let bits: String = (0..self.words.len() * 64)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "{bits}")
    }
}

/// Augmented parity matrix over a chosen column order, reduced to RREF.
///
/// Column `j < columns.len()` holds edge `columns[j]`; column
/// `columns.len()` is the syndrome. The augmented column is eliminated like
/// any other, so an inconsistent system shows up as exactly one row that is
/// zero on every edge column and one on the syndrome column.
#[derive(Debug, Clone)]
pub struct ParityMatrix {
    columns: Vec<EdgeIndex>,
    rows: Vec<BitRow>,
    row_labels: Vec<VertexIndex>,
    /// pivot row of each edge column
    pivots: Vec<Option<usize>>,
}

impl ParityMatrix {
    /// Builds and reduces the matrix of `(vertices, column_order)`. Every
    /// column edge must lie inside the vertex set.
    pub fn new(
        graph: &DecodingHypergraph,
        vertices: &[VertexIndex],
        column_order: &[EdgeIndex],
        syndrome: &Syndrome,
    ) -> Result<Self, Error> {
        let mut seen = HashSet::with_capacity(column_order.len());
        if !column_order.iter().all(|e| seen.insert(*e)) {
            return Err(Error::BadColumnOrder);
        }
        let width = column_order.len() + 1;
        let mut row_of = std::collections::HashMap::with_capacity(vertices.len());
        let mut rows = Vec::with_capacity(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            if v >= graph.vertex_count() {
                return Err(Error::InvalidVertex(v));
            }
            row_of.insert(v, i);
            let mut row = BitRow::zeros(width);
            row.set(column_order.len(), syndrome.contains(v));
            rows.push(row);
        }
        for (j, &e) in column_order.iter().enumerate() {
            if e >= graph.edge_count() {
                return Err(Error::InvalidEdge(e));
            }
            for v in &graph.edge(e).vertices {
                let &r = row_of.get(v).ok_or(Error::MalformedSubgraph(e))?;
                rows[r].set(j, true);
            }
        }
        let mut matrix = Self {
            columns: column_order.to_vec(),
            rows,
            row_labels: vertices.to_vec(),
            pivots: vec![None; column_order.len()],
        };
        matrix.reduce();
        Ok(matrix)
    }

    fn reduce(&mut self) {
        let width = self.columns.len() + 1;
        let mut next = 0;
        for col in 0..width {
            let Some(found) = (next..self.rows.len()).find(|&r| self.rows[r].get(col)) else {
                continue;
            };
            self.rows.swap(next, found);
            self.row_labels.swap(next, found);
            let pivot = self.rows[next].clone();
            for (r, row) in self.rows.iter_mut().enumerate() {
                if r != next && row.get(col) {
                    row.xor_assign(&pivot);
                }
            }
            if col < self.columns.len() {
                self.pivots[col] = Some(next);
            }
            next += 1;
        }
        self.rows.truncate(next);
        self.row_labels.truncate(next);
    }

    pub fn columns(&self) -> &[EdgeIndex] {
        &self.columns
    }

    pub fn rows(&self) -> &[BitRow] {
        &self.rows
    }

    /// Vertex whose original row ended up at each position.
    pub fn row_labels(&self) -> &[VertexIndex] {
        &self.row_labels
    }

    pub fn pivot_row(&self, column: usize) -> Option<usize> {
        self.pivots[column]
    }

    pub fn syndrome_column(&self) -> usize {
        self.columns.len()
    }

    pub fn rank(&self) -> usize {
        self.pivots.iter().filter(|p| p.is_some()).count()
    }

    pub fn nullity(&self) -> usize {
        self.columns.len() - self.rank()
    }

    /// No parity factor exists: some row reads `0 = 1`.
    pub fn is_inconsistent(&self) -> bool {
        let s = self.syndrome_column();
        self.rows.iter().any(|row| row.get(s) && row.ones(s).next().is_none())
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.columns.len()).filter(|&j| self.pivots[j].is_none()).collect()
    }

    /// Solution with every free variable set to `assignment` bit `i` for the
    /// `i`-th free column. `None` when inconsistent.
    pub fn solution(&self, free_assignment: impl Fn(usize) -> bool) -> Option<BitRow> {
        if self.is_inconsistent() {
            return None;
        }
        let s = self.syndrome_column();
        let free = self.free_columns();
        let mut x = BitRow::zeros(self.columns.len().max(1));
        for (i, &j) in free.iter().enumerate() {
            x.set(j, free_assignment(i));
        }
        for (j, pivot) in self.pivots.iter().enumerate() {
            if let Some(r) = *pivot {
                let row = &self.rows[r];
                let mut bit = row.get(s);
                for &f in &free {
                    bit ^= row.get(f) && x.get(f);
                }
                x.set(j, bit);
            }
        }
        Some(x)
    }

    /// Null-space basis vector for a free column.
    fn null_vector(&self, free_column: usize) -> BitRow {
        let mut v = BitRow::zeros(self.columns.len().max(1));
        v.set(free_column, true);
        for (j, pivot) in self.pivots.iter().enumerate() {
            if let Some(r) = *pivot {
                if self.rows[r].get(free_column) {
                    v.set(j, true);
                }
            }
        }
        v
    }

    fn to_pattern(&self, x: &BitRow) -> ErrorPattern {
        ErrorPattern::new(x.ones(self.columns.len()).map(|j| self.columns[j]))
    }
}

/// Reduced parity matrix of `(vertex_set, edge_subset)` with the given
/// column order, which must be a permutation of `edge_subset`.
pub fn parity_matrix_rref(
    graph: &DecodingHypergraph,
    vertex_set: &[VertexIndex],
    edge_subset: &[EdgeIndex],
    syndrome: &Syndrome,
    column_order: &[EdgeIndex],
) -> Result<ParityMatrix, Error> {
    let mut a = edge_subset.to_vec();
    let mut b = column_order.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return Err(Error::BadColumnOrder);
    }
    ParityMatrix::new(graph, vertex_set, column_order, syndrome)
}

/// True iff no `E ⊆ E_S` generates exactly `D ∩ V_S`.
pub fn is_invalid(graph: &DecodingHypergraph, subgraph: &SubgraphRef, syndrome: &Syndrome) -> Result<bool, Error> {
    Ok(ParityMatrix::new(graph, &subgraph.vertices, &subgraph.edges, syndrome)?.is_inconsistent())
}

/// All parity factors of the subgraph, ordered by the free variables read as
/// a binary counter (first free column is the least significant bit).
pub fn enumerate_parity_factors(
    graph: &DecodingHypergraph,
    subgraph: &SubgraphRef,
    syndrome: &Syndrome,
    free_var_cap: usize,
) -> Result<Vec<ErrorPattern>, Error> {
    let matrix = ParityMatrix::new(graph, &subgraph.vertices, &subgraph.edges, syndrome)?;
    if matrix.is_inconsistent() {
        return Err(Error::Infeasible);
    }
    let nullity = matrix.nullity();
    if nullity > free_var_cap || nullity >= usize::BITS as usize - 1 {
        return Err(Error::Overflow {
            nullity,
            cap: free_var_cap,
        });
    }
    Ok((0..1usize << nullity)
        .map(|counter| {
            let x = matrix.solution(|i| counter >> i & 1 == 1).expect("consistent");
            matrix.to_pattern(&x)
        })
        .collect())
}

/// Minimum-weight parity factor of `(vertices, edges)`; ties go to the
/// lexicographically smallest sorted edge list.
pub fn min_weight_parity_factor(
    graph: &DecodingHypergraph,
    vertices: &[VertexIndex],
    edges: &[EdgeIndex],
    syndrome: &Syndrome,
    free_var_cap: usize,
) -> Result<(ErrorPattern, Weight), Error> {
    let matrix = ParityMatrix::new(graph, vertices, edges, syndrome)?;
    min_weight_from_matrix(graph, &matrix, free_var_cap)
}

pub(crate) fn min_weight_from_matrix(
    graph: &DecodingHypergraph,
    matrix: &ParityMatrix,
    free_var_cap: usize,
) -> Result<(ErrorPattern, Weight), Error> {
    if matrix.is_inconsistent() {
        return Err(Error::Infeasible);
    }
    let nullity = matrix.nullity();
    if nullity > free_var_cap || nullity >= 63 {
        return Err(Error::Overflow {
            nullity,
            cap: free_var_cap,
        });
    }
    let weights: Vec<&Weight> = matrix.columns().iter().map(|&e| graph.weight(e)).collect();
    let scale = common_denominator(weights.iter().copied());
    let scaled: Vec<BigInt> = weights
        .iter()
        .map(|w| w.numerator() * (&scale / w.denominator()))
        .collect();
    // i128 is exact as long as the total of all |weights| fits
    let total: BigInt = scaled
        .iter()
        .map(|w| if w < &BigInt::zero() { -w } else { w.clone() })
        .sum();
    let best = if total.to_i128().is_some() {
        let small: Vec<i128> = scaled.iter().map(|w| w.to_i128().expect("fits")).collect();
        gray_code_minimum(matrix, &small)
    } else {
        gray_code_minimum(matrix, &scaled)
    };
    let pattern = matrix.to_pattern(&best);
    let weight = pattern.edges().iter().map(|&e| graph.weight(e)).sum();
    Ok((pattern, weight))
}

/// Walks all `2^nullity` solutions in Gray-code order, one null vector
/// toggle per step.
fn gray_code_minimum<T>(matrix: &ParityMatrix, weights: &[T]) -> BitRow
where
    T: Clone + Ord + Zero + for<'a> AddAssign<&'a T> + for<'a> SubAssign<&'a T>,
{
    let width = matrix.columns().len();
    let free = matrix.free_columns();
    let basis: Vec<BitRow> = free.iter().map(|&f| matrix.null_vector(f)).collect();
    let mut x = matrix.solution(|_| false).expect("consistent");
    let mut weight = T::zero();
    for j in x.ones(width) {
        weight += &weights[j];
    }
    let sorted_edges = |x: &BitRow| -> Vec<EdgeIndex> {
        let mut edges: Vec<_> = x.ones(width).map(|j| matrix.columns()[j]).collect();
        edges.sort_unstable();
        edges
    };
    let mut best = x.clone();
    let mut best_weight = weight.clone();
    let mut best_edges: Option<Vec<EdgeIndex>> = None;
    for step in 1u64..(1u64 << free.len()) {
        let flip = &basis[step.trailing_zeros() as usize];
        for j in flip.ones(width) {
            if x.get(j) {
                weight -= &weights[j];
            } else {
                weight += &weights[j];
            }
        }
        x.xor_assign(flip);
        if weight < best_weight {
            best = x.clone();
            best_weight = weight.clone();
            best_edges = None;
        } else if weight == best_weight {
            let current = sorted_edges(&x);
            let incumbent = best_edges.get_or_insert_with(|| sorted_edges(&best));
            if current < *incumbent {
                best = x.clone();
                *incumbent = current;
            }
        }
    }
    best
}

/// Minimum-weight parity factor of the whole graph, used as a test and
/// benchmark oracle.
pub fn brute_force_mwpf(
    graph: &DecodingHypergraph,
    syndrome: &Syndrome,
    free_var_cap: usize,
) -> Result<(ErrorPattern, Weight), Error> {
    let vertices: Vec<_> = (0..graph.vertex_count()).collect();
    let edges: Vec<_> = (0..graph.edge_count()).collect();
    for &d in syndrome.defects() {
        if d >= graph.vertex_count() {
            return Err(Error::InvalidVertex(d));
        }
    }
    min_weight_parity_factor(graph, &vertices, &edges, syndrome, free_var_cap)
}

/// Null-space dimension of the incidence matrix of `(vertices, edges)`.
pub fn nullity(graph: &DecodingHypergraph, vertices: &[VertexIndex], edges: &[EdgeIndex]) -> Result<usize, Error> {
    Ok(ParityMatrix::new(graph, vertices, edges, &Syndrome::default())?.nullity())
}
