//! Relaxers, relaxer composition and batched relaxing.

use std::collections::BTreeSet;
use std::fmt;

use crate::dual::{check_feasible_direction_on, Direction, DualSolution, DualVarKey};
use crate::error::Error;
use crate::hypergraph::{DecodingHypergraph, EdgeIndex, Syndrome, VertexIndex};

/// A feasible direction with `Σ Δy >= 0` that strictly lowers the
/// contribution on at least one tight edge.
#[derive(Clone, PartialEq, Eq)]
pub struct Relaxer {
    direction: Direction,
    relaxed: BTreeSet<EdgeIndex>,
}

impl Relaxer {
    /// Validates `direction` against `dual` and the tight set `tight`; the
    /// relaxed set is every tight edge whose contribution strictly drops.
    pub fn new(direction: Direction, dual: &DualSolution, tight: &BTreeSet<EdgeIndex>) -> Result<Self, Error> {
        if let Some(violation) = check_feasible_direction_on(dual, tight, &direction).violation {
            return Err(Error::FinderContract(format!("infeasible relaxer: {violation}")));
        }
        if direction.sum().is_negative() {
            return Err(Error::FinderContract(format!(
                "relaxer decreases the objective by {}",
                -direction.sum()
            )));
        }
        let relaxed: BTreeSet<EdgeIndex> = direction
            .edge_deltas()
            .into_iter()
            .filter(|(e, delta)| delta.is_negative() && tight.contains(e))
            .map(|(e, _)| e)
            .collect();
        if relaxed.is_empty() {
            return Err(Error::FinderContract("relaxer relaxes no tight edge".into()));
        }
        Ok(Self { direction, relaxed })
    }

    pub fn direction(&self) -> &Direction {
        &self.direction
    }

    pub fn relaxed(&self) -> &BTreeSet<EdgeIndex> {
        &self.relaxed
    }

    pub fn into_direction(self) -> Direction {
        self.direction
    }
}

impl fmt::Debug for Relaxer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Relaxer")
            .field("direction", &self.direction)
            .field("relaxed", &self.relaxed)
            .finish()
    }
}

/// What a finder sees of one cluster: its vertices, the (possibly reduced)
/// tight set `T'` inside it, its hyperblossoms in canonical order, and the
/// global dual.
#[derive(Clone, Copy)]
pub struct ClusterView<'a> {
    pub graph: &'a DecodingHypergraph,
    pub syndrome: &'a Syndrome,
    pub vertices: &'a [VertexIndex],
    pub tight: &'a BTreeSet<EdgeIndex>,
    pub hyperblossoms: &'a [DualVarKey],
    pub dual: &'a DualSolution,
}

impl<'a> ClusterView<'a> {
    pub fn with_tight(self, tight: &'a BTreeSet<EdgeIndex>) -> Self {
        Self { tight, ..self }
    }

    pub fn tight_edges(&self) -> Vec<EdgeIndex> {
        self.tight.iter().copied().collect()
    }
}

pub trait RelaxerFinder {
    fn name(&self) -> &'static str;

    fn find(&self, view: &ClusterView<'_>) -> Result<Option<Relaxer>, Error>;
}

/// Adds relaxers to `direction` until no edge of `tight` covered by a
/// relaxed set grows. Edges are visited in ascending id; each violated edge
/// is fixed by the first relaxer that relaxes it, scaled to cancel exactly.
pub fn compose(relaxers: &[Relaxer], tight: &BTreeSet<EdgeIndex>, direction: &Direction) -> Result<Direction, Error> {
    let mut out = direction.clone();
    let covered: BTreeSet<EdgeIndex> = relaxers
        .iter()
        .flat_map(|r| r.relaxed.iter().copied())
        .filter(|e| tight.contains(e))
        .collect();
    for e in covered {
        let alpha = out.edge_delta(e);
        if !alpha.is_positive() {
            continue;
        }
        let relaxer = relaxers
            .iter()
            .find(|r| r.relaxed.contains(&e))
            .expect("edge is covered");
        let rate = -relaxer.direction.edge_delta(e);
        out.add_scaled(&relaxer.direction, &(&alpha / &rate));
    }
    for (e, delta) in out.edge_deltas() {
        if delta.is_positive() && tight.contains(&e) {
            return Err(Error::UncoveredViolation(e));
        }
    }
    Ok(out)
}

/// Calls the finders (first non-empty answer wins) on a shrinking tight
/// set, lifting each answer back to the full tight set of `view`.
pub fn batched_relaxing(view: &ClusterView<'_>, finders: &[&dyn RelaxerFinder]) -> Result<BatchOutcome, Error> {
    let full = view.tight;
    let mut reduced = full.clone();
    let mut relaxers: Vec<Relaxer> = Vec::new();
    let mut finder_calls = 0;
    'outer: loop {
        let current = view.with_tight(&reduced);
        for finder in finders {
            finder_calls += 1;
            let Some(raw) = finder.find(&current)? else {
                continue;
            };
            // re-validate on T' so a misbehaving finder is caught here
            let raw = Relaxer::new(raw.direction, view.dual, &reduced)
                .map_err(|e| Error::FinderContract(format!("{}: {e}", finder.name())))?;
            let lifted_direction = compose(&relaxers, full, &raw.direction)?;
            let lifted = Relaxer::new(lifted_direction, view.dual, full)?;
            if !raw.relaxed.is_subset(&lifted.relaxed) {
                return Err(Error::Internal("lifted relaxer lost a relaxed edge".into()));
            }
            for e in &lifted.relaxed {
                reduced.remove(e);
            }
            relaxers.push(lifted);
            if relaxers.len() > full.len() {
                return Err(Error::FinderContract("more relaxers than tight edges".into()));
            }
            continue 'outer;
        }
        break;
    }
    Ok(BatchOutcome { relaxers, finder_calls })
}

#[derive(Debug, Clone)]
pub struct BatchOutcome {
    /// each relaxer is valid against the full tight set
    pub relaxers: Vec<Relaxer>,
    pub finder_calls: usize,
}

impl BatchOutcome {
    pub fn relaxed_edges(&self) -> BTreeSet<EdgeIndex> {
        self.relaxers.iter().flat_map(|r| r.relaxed.iter().copied()).collect()
    }
}
