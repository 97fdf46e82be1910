//! Dual LP state: dual variables indexed by invalid subgraphs, per-edge
//! slack and tightness, feasible directions, growth, and the exact solve of
//! the LP restricted to a set of dual variables.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::Error;
use crate::hypergraph::{DecodingHypergraph, EdgeIndex, SubgraphRef, Syndrome};
use crate::parity::is_invalid;
use crate::simplex::{maximize, LpOutcome};
use crate::weight::Weight;

/// `δ(S) = E(V_S) \ E_S`, ascending.
pub fn hair_of(graph: &DecodingHypergraph, subgraph: &SubgraphRef) -> Vec<EdgeIndex> {
    graph
        .incident_edges(&subgraph.vertices)
        .into_iter()
        .filter(|e| !subgraph.contains_edge(*e))
        .collect()
}

struct KeyInner {
    subgraph: SubgraphRef,
    hair: Vec<EdgeIndex>,
}

/// Index of one dual variable `y_S`. Cheap to clone; the hair is computed
/// once at construction.
///
/// Keys order canonically by `(|V_S|, V_S, |E_S|, E_S)`.
#[derive(Clone)]
pub struct DualVarKey(Arc<KeyInner>);

impl DualVarKey {
    /// Does not check invalidity; see [`DualVarKey::invalid`].
    pub fn new(graph: &DecodingHypergraph, subgraph: SubgraphRef) -> Self {
        let hair = hair_of(graph, &subgraph);
        DualVarKey(Arc::new(KeyInner { subgraph, hair }))
    }

    /// Key for a subgraph that must be invalid for `syndrome`.
    pub fn invalid(graph: &DecodingHypergraph, subgraph: SubgraphRef, syndrome: &Syndrome) -> Result<Self, Error> {
        if !is_invalid(graph, &subgraph, syndrome)? {
            return Err(Error::Internal(format!(
                "subgraph {:?} is not invalid",
                (&subgraph.vertices, &subgraph.edges)
            )));
        }
        Ok(Self::new(graph, subgraph))
    }

    pub fn subgraph(&self) -> &SubgraphRef {
        &self.0.subgraph
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0.subgraph.vertices
    }

    pub fn edges(&self) -> &[EdgeIndex] {
        &self.0.subgraph.edges
    }

    pub fn hair(&self) -> &[EdgeIndex] {
        &self.0.hair
    }

    pub fn hair_contains(&self, edge: EdgeIndex) -> bool {
        self.0.hair.binary_search(&edge).is_ok()
    }
}

impl PartialEq for DualVarKey {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.subgraph == other.0.subgraph
    }
}

impl Eq for DualVarKey {}

impl Hash for DualVarKey {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.subgraph.hash(state);
    }
}

impl Ord for DualVarKey {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0.subgraph, &other.0.subgraph);
        a.vertices
            .len()
            .cmp(&b.vertices.len())
            .then_with(|| a.vertices.cmp(&b.vertices))
            .then_with(|| a.edges.len().cmp(&b.edges.len()))
            .then_with(|| a.edges.cmp(&b.edges))
    }
}

impl PartialOrd for DualVarKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for DualVarKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S(V{:?}, E{:?})", self.vertices(), self.edges())
    }
}

/// Sparse dual solution. Only strictly positive values are stored, so the
/// key set is exactly the set of hyperblossoms. The per-edge sum of
/// `y_S` over `S` with `e ∈ δ(S)` is cached.
#[derive(Clone, Default)]
pub struct DualSolution {
    values: BTreeMap<DualVarKey, Weight>,
    contributions: HashMap<EdgeIndex, Weight>,
}

impl DualSolution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &DualVarKey) -> Weight {
        self.values.get(key).cloned().unwrap_or_default()
    }

    pub fn contains(&self, key: &DualVarKey) -> bool {
        self.values.contains_key(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DualVarKey, &Weight)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sets `y_S`; zero evicts the entry. Panics on a negative value.
    pub fn set(&mut self, key: &DualVarKey, value: Weight) {
        assert!(!value.is_negative(), "negative dual value for {key:?}");
        let old = self.values.remove(key).unwrap_or_default();
        let delta = &value - &old;
        if !delta.is_zero() {
            self.bump(key, &delta);
        }
        if !value.is_zero() {
            self.values.insert(key.clone(), value);
        }
    }

    pub fn add(&mut self, key: &DualVarKey, delta: &Weight) {
        let value = self.get(key) + delta;
        self.set(key, value);
    }

    fn bump(&mut self, key: &DualVarKey, delta: &Weight) {
        for &e in key.hair() {
            let entry = self.contributions.entry(e).or_default();
            *entry += delta;
            if entry.is_zero() {
                self.contributions.remove(&e);
            }
        }
    }

    /// `Σ_{S: e ∈ δ(S)} y_S`
    pub fn contribution(&self, edge: EdgeIndex) -> Weight {
        self.contributions.get(&edge).cloned().unwrap_or_default()
    }

    pub fn slack(&self, graph: &DecodingHypergraph, edge: EdgeIndex) -> Weight {
        graph.weight(edge) - self.contribution(edge)
    }

    pub fn is_tight(&self, graph: &DecodingHypergraph, edge: EdgeIndex) -> bool {
        match self.contributions.get(&edge) {
            Some(c) => c == graph.weight(edge),
            None => graph.weight(edge).is_zero(),
        }
    }

    pub fn objective(&self) -> Weight {
        self.values.values().sum()
    }

    /// Edges with nonzero cached contribution.
    pub fn touched_edges(&self) -> impl Iterator<Item = EdgeIndex> + '_ {
        self.contributions.keys().copied()
    }

    /// Per-edge contributions recomputed from the stored values, ignoring
    /// the cache.
    pub fn contributions_from_scratch(&self) -> HashMap<EdgeIndex, Weight> {
        let mut out: HashMap<EdgeIndex, Weight> = HashMap::new();
        for (key, y) in &self.values {
            for &e in key.hair() {
                *out.entry(e).or_default() += y;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    pub fn cache_is_coherent(&self) -> bool {
        self.contributions_from_scratch() == self.contributions
    }

    /// Grows along `direction` in place; returns the length actually used.
    pub fn grow(
        &mut self,
        graph: &DecodingHypergraph,
        direction: &Direction,
        length: GrowthLength,
    ) -> Result<Weight, Error> {
        if let GrowthLength::Exact(l) = &length {
            if l.is_negative() {
                return Err(Error::NegativeLength(l.to_string()));
            }
        }
        if direction.is_empty() {
            return Ok(Weight::zero());
        }
        let report = check_feasible_direction(graph, self, direction);
        if let Some(violation) = report.violation {
            return Err(Error::InfeasibleDirection(violation.to_string()));
        }
        let maximum = self.max_length(graph, direction);
        let length = match (length, maximum) {
            (GrowthLength::Max, None) => return Err(Error::Unbounded),
            (GrowthLength::Max, Some(max)) => max,
            (GrowthLength::Exact(l), Some(max)) if l > max => {
                return Err(Error::LengthTooLong {
                    requested: l.to_string(),
                    maximum: max.to_string(),
                })
            }
            (GrowthLength::Exact(l), _) => l,
        };
        if length.is_zero() {
            return Ok(length);
        }
        for (key, delta) in direction.iter() {
            let value = self.get(key) + &(delta * &length);
            self.set(key, value);
        }
        Ok(length)
    }

    /// Largest feasible length, `None` when nothing binds.
    fn max_length(&self, graph: &DecodingHypergraph, direction: &Direction) -> Option<Weight> {
        let mut best: Option<Weight> = None;
        let mut consider = |bound: Weight| {
            if best.as_ref().is_none_or(|b| bound < *b) {
                best = Some(bound);
            }
        };
        for (edge, rate) in direction.edge_deltas() {
            if rate.is_positive() {
                consider(&self.slack(graph, edge) / &rate);
            }
        }
        for (key, delta) in direction.iter() {
            if delta.is_negative() {
                consider(&self.get(key) / &(-delta));
            }
        }
        best
    }
}

impl fmt::Debug for DualSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.values.iter()).finish()
    }
}

impl PartialEq for DualSolution {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrowthLength {
    Exact(Weight),
    Max,
}

/// Sparse signed update `Δy`; zero entries are never stored.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Direction {
    deltas: BTreeMap<DualVarKey, Weight>,
}

impl Direction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(key: DualVarKey, delta: Weight) -> Self {
        let mut d = Self::new();
        d.add(&key, &delta);
        d
    }

    pub fn add(&mut self, key: &DualVarKey, delta: &Weight) {
        let value = self.get(key) + delta;
        if value.is_zero() {
            self.deltas.remove(key);
        } else {
            self.deltas.insert(key.clone(), value);
        }
    }

    /// `self += factor * other`
    pub fn add_scaled(&mut self, other: &Direction, factor: &Weight) {
        for (key, delta) in other.iter() {
            self.add(key, &(delta * factor));
        }
    }

    pub fn get(&self, key: &DualVarKey) -> Weight {
        self.deltas.get(key).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DualVarKey, &Weight)> {
        self.deltas.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &DualVarKey> {
        self.deltas.keys()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    /// `Σ Δy_S`
    pub fn sum(&self) -> Weight {
        self.deltas.values().sum()
    }

    /// Net change of the contribution on every edge touched by some hair.
    pub fn edge_deltas(&self) -> BTreeMap<EdgeIndex, Weight> {
        let mut out: BTreeMap<EdgeIndex, Weight> = BTreeMap::new();
        for (key, delta) in &self.deltas {
            for &e in key.hair() {
                *out.entry(e).or_default() += delta;
            }
        }
        out
    }

    pub fn edge_delta(&self, edge: EdgeIndex) -> Weight {
        self.deltas
            .iter()
            .filter(|(k, _)| k.hair_contains(edge))
            .map(|(_, d)| d)
            .sum()
    }
}

impl fmt::Debug for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.deltas.iter()).finish()
    }
}

impl FromIterator<(DualVarKey, Weight)> for Direction {
    fn from_iter<I: IntoIterator<Item = (DualVarKey, Weight)>>(iter: I) -> Self {
        let mut d = Direction::new();
        for (k, v) in iter {
            d.add(&k, &v);
        }
        d
    }
}

/// Edges with zero slack.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TightSet(pub BTreeSet<EdgeIndex>);

/// Slack of every edge and the tight set. Fails on a negative slack.
pub fn slack_and_tight(graph: &DecodingHypergraph, dual: &DualSolution) -> Result<(Vec<Weight>, TightSet), Error> {
    let mut slacks = Vec::with_capacity(graph.edge_count());
    let mut tight = BTreeSet::new();
    for e in 0..graph.edge_count() {
        let slack = dual.slack(graph, e);
        if slack.is_negative() {
            return Err(Error::InfeasibleDual {
                edge: e,
                slack: slack.to_string(),
            });
        }
        if slack.is_zero() {
            tight.insert(e);
        }
        slacks.push(slack);
    }
    Ok((slacks, TightSet(tight)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// a negative delta on a variable that is currently zero
    ShrinksZeroVariable(DualVarKey),
    /// a positive net delta on a tight edge
    OvergrowsTightEdge { edge: EdgeIndex, delta: Weight },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ShrinksZeroVariable(key) => write!(f, "shrinks {key:?} which is zero"),
            Violation::OvergrowsTightEdge { edge, delta } => {
                write!(f, "grows tight edge {edge} by {delta}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    /// first violated constraint, if any
    pub violation: Option<Violation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violation.is_none()
    }
}

/// Feasibility against the tight set induced by `dual`.
pub fn check_feasible_direction(
    graph: &DecodingHypergraph,
    dual: &DualSolution,
    direction: &Direction,
) -> FeasibilityReport {
    check_direction(dual, direction, |e| dual.is_tight(graph, e))
}

/// Feasibility against an explicit tight set, used while batch relaxing on
/// a reduced tight set.
pub fn check_feasible_direction_on(
    dual: &DualSolution,
    tight: &BTreeSet<EdgeIndex>,
    direction: &Direction,
) -> FeasibilityReport {
    check_direction(dual, direction, |e| tight.contains(&e))
}

fn check_direction(
    dual: &DualSolution,
    direction: &Direction,
    is_tight: impl Fn(EdgeIndex) -> bool,
) -> FeasibilityReport {
    for (key, delta) in direction.iter() {
        if delta.is_negative() && !dual.contains(key) {
            return FeasibilityReport {
                violation: Some(Violation::ShrinksZeroVariable(key.clone())),
            };
        }
    }
    for (edge, delta) in direction.edge_deltas() {
        if delta.is_positive() && is_tight(edge) {
            return FeasibilityReport {
                violation: Some(Violation::OvergrowsTightEdge { edge, delta }),
            };
        }
    }
    FeasibilityReport { violation: None }
}

/// Returns the grown copy and the length used.
pub fn apply_direction(
    graph: &DecodingHypergraph,
    dual: &DualSolution,
    direction: &Direction,
    length: GrowthLength,
) -> Result<(DualSolution, Weight), Error> {
    let mut grown = dual.clone();
    let l = grown.grow(graph, direction, length)?;
    Ok((grown, l))
}

pub fn dual_objective(dual: &DualSolution) -> Weight {
    dual.objective()
}

/// Maximizes `Σ y_S` over `S ∈ history` with every other variable fixed at
/// zero, subject to `Σ_{S: e ∈ δ(S)} y_S <= w_e` for every `e` in
/// `edge_scope`.
pub fn solve_restricted_dlp(
    graph: &DecodingHypergraph,
    history: &BTreeSet<DualVarKey>,
    edge_scope: &BTreeSet<EdgeIndex>,
) -> Result<DualSolution, Error> {
    let capacities: BTreeMap<EdgeIndex, Weight> = edge_scope.iter().map(|&e| (e, graph.weight(e).clone())).collect();
    let values = solve_with_capacities(history, &capacities)?;
    let mut dual = DualSolution::new();
    for (key, y) in values {
        dual.set(&key, y);
    }
    Ok(dual)
}

/// Same LP with explicit per-edge capacities (the weight minus whatever
/// fixed variables outside `keys` already use). Returns only positive values.
pub fn solve_with_capacities(
    keys: &BTreeSet<DualVarKey>,
    capacities: &BTreeMap<EdgeIndex, Weight>,
) -> Result<Vec<(DualVarKey, Weight)>, Error> {
    let keys: Vec<&DualVarKey> = keys.iter().collect();
    for key in &keys {
        if !key.hair().iter().any(|e| capacities.contains_key(e)) {
            return Err(Error::EmptyHair(format!("{key:?}")));
        }
    }
    let rows_used: BTreeSet<EdgeIndex> = keys
        .iter()
        .flat_map(|k| k.hair().iter().copied())
        .filter(|e| capacities.contains_key(e))
        .collect();
    let row_index: HashMap<EdgeIndex, usize> = rows_used.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut rows = vec![vec![Weight::zero(); keys.len()]; rows_used.len()];
    for (j, key) in keys.iter().enumerate() {
        for e in key.hair() {
            if let Some(&i) = row_index.get(e) {
                rows[i][j] = Weight::one();
            }
        }
    }
    let rhs: Vec<Weight> = rows_used.iter().map(|e| capacities[e].clone()).collect();
    if let Some(e) = rows_used.iter().find(|e| capacities[e].is_negative()) {
        return Err(Error::InfeasibleDual {
            edge: *e,
            slack: capacities[e].to_string(),
        });
    }
    match maximize(&vec![Weight::one(); keys.len()], &rows, &rhs) {
        LpOutcome::Optimal { solution, .. } => Ok(keys
            .into_iter()
            .cloned()
            .zip(solution)
            .filter(|(_, y)| !y.is_zero())
            .collect()),
        LpOutcome::Unbounded => Err(Error::Unbounded),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn key(graph: &DecodingHypergraph, v: &[usize], e: &[usize]) -> DualVarKey {
        DualVarKey::new(
            graph,
            SubgraphRef::new(graph, v.iter().copied(), e.iter().copied()).unwrap(),
        )
    }

    #[test]
    fn hair_examples() {
        let f1 = fixtures::f1();
        assert_eq!(key(&f1, &[3], &[]).hair(), &[2]);
        assert_eq!(key(&f1, &[1, 2, 3], &[2]).hair(), &[0, 1]);
        assert!(key(&f1, &[0, 1, 2, 3], &[0, 1, 2]).hair().is_empty());
    }

    #[test]
    fn canonical_key_order() {
        let f1 = fixtures::f1();
        let mut keys = [
            key(&f1, &[0, 1, 2, 3], &[0, 1]),
            key(&f1, &[1, 2, 3], &[2]),
            key(&f1, &[3], &[]),
            key(&f1, &[0, 1, 2, 3], &[1]),
            key(&f1, &[1, 2, 3], &[]),
        ];
        keys.sort();
        let shapes: Vec<_> = keys.iter().map(|k| (k.vertices().len(), k.edges().to_vec())).collect();
        assert_eq!(
            shapes,
            vec![(1, vec![]), (3, vec![]), (3, vec![2]), (4, vec![1]), (4, vec![0, 1])]
        );
    }

    #[test]
    fn invalid_key_is_checked() {
        let f1 = fixtures::f1();
        let d = Syndrome::new([3]);
        let valid = SubgraphRef::new(&f1, 0..4, 0..3).unwrap();
        assert!(DualVarKey::invalid(&f1, valid, &d).is_err());
        let lone = SubgraphRef::new(&f1, [3], []).unwrap();
        assert!(DualVarKey::invalid(&f1, lone, &d).is_ok());
    }

    #[test]
    fn slack_and_tight_examples() {
        let f1 = fixtures::f1();
        let zero_edge =
            DecodingHypergraph::new(2, vec![(vec![0, 1], Weight::zero()), (vec![0], Weight::one())]).unwrap();
        let (_, tight) = slack_and_tight(&zero_edge, &DualSolution::new()).unwrap();
        assert_eq!(tight.0, BTreeSet::from([0]));

        let mut dual = DualSolution::new();
        dual.set(&key(&f1, &[3], &[]), Weight::one());
        let (slack, tight) = slack_and_tight(&f1, &dual).unwrap();
        assert_eq!(tight.0, BTreeSet::from([2]));
        assert_eq!(slack[0], Weight::one());
        assert_eq!(slack[1], Weight::one());

        let mut optimal = DualSolution::new();
        for e in 0..3 {
            let rest: Vec<_> = (0..3).filter(|&x| x != e).collect();
            optimal.set(&key(&f1, &[0, 1, 2, 3], &rest), Weight::one());
        }
        let (_, tight) = slack_and_tight(&f1, &optimal).unwrap();
        assert_eq!(tight.0, BTreeSet::from([0, 1, 2]));
        for e in 0..3 {
            assert_eq!(optimal.contribution(e), Weight::one());
        }

        optimal.set(&key(&f1, &[3], &[]), Weight::one());
        assert!(matches!(
            slack_and_tight(&f1, &optimal),
            Err(Error::InfeasibleDual { edge: 2, .. })
        ));
    }

    #[test]
    fn feasibility_examples() {
        let f1 = fixtures::f1();
        let s1 = key(&f1, &[3], &[]);
        let trivial = Direction::single(s1.clone(), Weight::one());
        assert!(check_feasible_direction(&f1, &DualSolution::new(), &trivial).is_feasible());

        let shrink = Direction::single(s1.clone(), -Weight::one());
        let report = check_feasible_direction(&f1, &DualSolution::new(), &shrink);
        assert_eq!(report.violation, Some(Violation::ShrinksZeroVariable(s1.clone())));

        // e2 tight via S1; swap S1 for a subgraph whose hair avoids e2
        let mut dual = DualSolution::new();
        dual.set(&s1, Weight::one());
        let s_plus = key(&f1, &[0, 1, 2, 3], &[1, 2]);
        assert!(!s_plus.hair_contains(2));
        let swap: Direction = [(s1.clone(), -Weight::one()), (s_plus, Weight::one())]
            .into_iter()
            .collect();
        assert!(check_feasible_direction(&f1, &dual, &swap).is_feasible());

        let overgrow = Direction::single(key(&f1, &[1, 2, 3], &[]), Weight::one());
        assert!(matches!(
            check_feasible_direction(&f1, &dual, &overgrow).violation,
            Some(Violation::OvergrowsTightEdge { edge: 2, .. })
        ));
    }

    #[test]
    fn apply_direction_examples() {
        let f1 = fixtures::f1();
        let s1 = key(&f1, &[3], &[]);
        let (grown, l) = apply_direction(
            &f1,
            &DualSolution::new(),
            &Direction::single(s1.clone(), Weight::one()),
            GrowthLength::Max,
        )
        .unwrap();
        assert_eq!(l, Weight::one());
        assert!(grown.is_tight(&f1, 2));

        let (same, l) = apply_direction(&f1, &grown, &Direction::new(), GrowthLength::Max).unwrap();
        assert_eq!(l, Weight::zero());
        assert_eq!(same, grown);

        let mut half = DualSolution::new();
        half.set(&s1, Weight::new(1, 2));
        let (shrunk, l) = apply_direction(
            &f1,
            &half,
            &Direction::single(s1.clone(), -Weight::one()),
            GrowthLength::Max,
        )
        .unwrap();
        assert_eq!(l, Weight::new(1, 2));
        assert!(shrunk.is_empty());
    }

    #[test]
    fn apply_direction_errors() {
        let f1 = fixtures::f1();
        let s1 = key(&f1, &[3], &[]);
        let grow = Direction::single(s1.clone(), Weight::one());
        assert!(matches!(
            apply_direction(
                &f1,
                &DualSolution::new(),
                &grow,
                GrowthLength::Exact(Weight::from_integer(-1))
            ),
            Err(Error::NegativeLength(_))
        ));
        assert!(matches!(
            apply_direction(
                &f1,
                &DualSolution::new(),
                &grow,
                GrowthLength::Exact(Weight::from_integer(2))
            ),
            Err(Error::LengthTooLong { .. })
        ));
        let whole = key(&f1, &[0, 1, 2, 3], &[0, 1, 2]);
        assert!(matches!(
            apply_direction(
                &f1,
                &DualSolution::new(),
                &Direction::single(whole, Weight::one()),
                GrowthLength::Max
            ),
            Err(Error::Unbounded)
        ));
        let mut dual = DualSolution::new();
        dual.set(&s1, Weight::one());
        assert!(matches!(
            apply_direction(&f1, &dual, &grow, GrowthLength::Max),
            Err(Error::InfeasibleDirection(_))
        ));
    }

    #[test]
    fn restricted_dlp_examples() {
        let f1 = fixtures::f1();
        let scope: BTreeSet<_> = (0..3).collect();
        let single = BTreeSet::from([key(&f1, &[3], &[])]);
        let dual = solve_restricted_dlp(&f1, &single, &scope).unwrap();
        assert_eq!(dual.objective(), Weight::one());

        let triple: BTreeSet<_> = (0..3)
            .map(|e| {
                let rest: Vec<_> = (0..3).filter(|&x| x != e).collect();
                key(&f1, &[0, 1, 2, 3], &rest)
            })
            .collect();
        let dual = solve_restricted_dlp(&f1, &triple, &scope).unwrap();
        assert_eq!(dual.objective(), Weight::from_integer(3));
        assert!(dual.iter().all(|(_, y)| *y == Weight::one()));

        // two keys whose only hair is e2
        let a = key(&f1, &[3], &[]);
        let b = key(&f1, &[0, 1, 2, 3], &[0, 1]);
        assert_eq!(a.hair(), b.hair());
        let both = BTreeSet::from([a.clone(), b.clone()]);
        let first = solve_restricted_dlp(&f1, &both, &scope).unwrap();
        assert_eq!(first.objective(), Weight::one());
        let second = solve_restricted_dlp(&f1, &both, &scope).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn restricted_dlp_empty_hair_is_an_error() {
        let f1 = fixtures::f1();
        let whole = BTreeSet::from([key(&f1, &[0, 1, 2, 3], &[0, 1, 2])]);
        assert!(matches!(
            solve_restricted_dlp(&f1, &whole, &(0..3).collect()),
            Err(Error::EmptyHair(_))
        ));
    }

    #[test]
    fn dual_objective_examples() {
        let f1 = fixtures::f1();
        assert_eq!(dual_objective(&DualSolution::new()), Weight::zero());
        let mut dual = DualSolution::new();
        dual.set(&key(&f1, &[3], &[]), Weight::new(1, 3));
        dual.set(&key(&f1, &[1, 2, 3], &[2]), Weight::new(1, 6));
        assert_eq!(dual_objective(&dual), Weight::new(1, 2));
        assert!(dual.cache_is_coherent());
    }
}
