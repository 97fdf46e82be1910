//! The primal-dual driver: clusters, the search and refine stages, and the
//! certificate returned to callers.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dual::{
    check_feasible_direction_on, slack_and_tight, solve_with_capacities, Direction, DualSolution, DualVarKey,
    GrowthLength,
};
use crate::error::Error;
use crate::finders::{hyperblossom_hair_matrix, FinderKind};
use crate::hypergraph::{
    defects_of, preprocess_negative_weights, weight_of, DecodingHypergraph, EdgeIndex, ErrorPattern, SubgraphRef,
    Syndrome, VertexIndex,
};
use crate::parity::{is_invalid, min_weight_from_matrix, ParityMatrix};
use crate::relaxer::{batched_relaxing, compose, ClusterView, RelaxerFinder};
use crate::weight::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    SearchRefine,
    SearchOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoderConfig {
    /// Maximum number of hyperblossoms a valid cluster may hold before it
    /// stops being refined; `None` is unbounded and `Some(0)` gives
    /// hypergraph union-find.
    pub cluster_limit: Option<usize>,
    /// Tried in order on every call; the first relaxer found wins.
    pub finders: Vec<FinderKind>,
    /// Largest cluster nullity for which local minimum-weight parity
    /// factors are enumerated.
    pub local_mwpf_free_var_cap: usize,
    pub stage: Stage,
    /// Re-check solver invariants after every step and fail loudly on a
    /// violation. Slow; meant for tests.
    pub audit: bool,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            cluster_limit: None,
            finders: vec![FinderKind::SingleHair],
            local_mwpf_free_var_cap: 16,
            stage: Stage::SearchRefine,
            audit: false,
        }
    }
}

impl DecoderConfig {
    pub fn single_hair() -> Self {
        Self::default()
    }

    pub fn union_find() -> Self {
        Self {
            cluster_limit: Some(0),
            finders: vec![FinderKind::UnionFind],
            ..Self::default()
        }
    }

    pub fn nullity() -> Self {
        Self {
            finders: vec![FinderKind::NullityLe1, FinderKind::SingleHair],
            ..Self::default()
        }
    }

    pub fn with_limit(mut self, limit: Option<usize>) -> Self {
        self.cluster_limit = limit;
        self
    }

    pub fn with_audit(mut self, audit: bool) -> Self {
        self.audit = audit;
        self
    }

    fn refines(&self) -> bool {
        self.stage == Stage::SearchRefine && self.cluster_limit != Some(0)
    }

    fn below_limit(&self, hyperblossoms: usize) -> bool {
        self.cluster_limit.is_none_or(|c| hyperblossoms < c)
    }
}

/// Invariant checks performed in audit mode.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditCounts {
    pub odd_row: usize,
    pub unique_row: usize,
    pub relaxer: usize,
    pub compose: usize,
    pub disjointness: usize,
    pub history_growth: usize,
    pub dual_feasibility: usize,
    pub cache_coherence: usize,
    pub objective_monotone: usize,
}

impl AuditCounts {
    pub fn total(&self) -> usize {
        self.odd_row
            + self.unique_row
            + self.relaxer
            + self.compose
            + self.disjointness
            + self.history_growth
            + self.dual_feasibility
            + self.cache_coherence
            + self.objective_monotone
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeStats {
    pub search_steps: usize,
    /// dual phases that applied a direction
    pub refine_iterations: usize,
    /// LP re-solves after search or a merge
    pub settle_solves: usize,
    /// individual relaxer finder invocations
    pub finder_calls: usize,
    pub clusters: usize,
    /// clusters left unrefined because of the cluster limit or overflow
    pub clusters_frozen: usize,
    /// clusters for which no finder produced a useful direction
    pub clusters_stuck: usize,
    pub history_size: usize,
    pub audit: AuditCounts,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub pattern: ErrorPattern,
    pub primal_weight: Weight,
    /// Dual over the graph with every negative weight flipped; identical to
    /// the input graph when no weight is negative.
    pub dual: DualSolution,
    /// `Σ y_S + weight_offset`, a lower bound on every parity factor
    pub dual_objective: Weight,
    pub gap: Weight,
    pub certified_optimal: bool,
    /// sum of the negative input weights
    pub weight_offset: Weight,
    /// edges whose weight was negative in the input
    pub flipped: ErrorPattern,
    pub stats: DecodeStats,
}

/// Decodes `syndrome` on `graph`, preprocessing negative weights if any.
pub fn decode(graph: &DecodingHypergraph, syndrome: &Syndrome, config: &DecoderConfig) -> Result<Certificate, Error> {
    for &d in syndrome.defects() {
        if d >= graph.vertex_count() {
            return Err(Error::InvalidVertex(d));
        }
    }
    if graph.has_negative_weights() {
        let pre = preprocess_negative_weights(graph, syndrome);
        let mut cert = Solver::new(&pre.graph, &pre.syndrome, config).run()?;
        cert.pattern = pre.postprocess(&cert.pattern);
        cert.primal_weight += &pre.offset;
        cert.dual_objective += &pre.offset;
        cert.weight_offset = pre.offset;
        cert.flipped = pre.flipped;
        return Ok(cert);
    }
    Solver::new(graph, syndrome, config).run()
}

/// `(valid, priority, smallest vertex)`; `None` priority marks an invalid
/// cluster.
type CandidateRank = (bool, Option<Weight>, VertexIndex);

#[derive(Debug, Clone, PartialEq, Eq)]
enum Local {
    Invalid,
    Overflow,
    Solved(ErrorPattern, Weight),
}

struct Cluster {
    vertices: BTreeSet<VertexIndex>,
    edges: BTreeSet<EdgeIndex>,
    history: BTreeSet<DualVarKey>,
    settled: bool,
    stuck: bool,
    version: u64,
    valid_cache: Option<(u64, bool)>,
    local_cache: Option<(u64, Local)>,
}

impl Cluster {
    fn singleton(v: VertexIndex) -> Self {
        Self {
            vertices: BTreeSet::from([v]),
            edges: BTreeSet::new(),
            history: BTreeSet::new(),
            settled: false,
            stuck: false,
            version: 0,
            valid_cache: None,
            local_cache: None,
        }
    }

    fn vertex_list(&self) -> Vec<VertexIndex> {
        self.vertices.iter().copied().collect()
    }

    fn subgraph(&self) -> SubgraphRef {
        SubgraphRef {
            vertices: self.vertex_list(),
            edges: self.edges.iter().copied().collect(),
        }
    }

    fn touch(&mut self) {
        self.version += 1;
        self.stuck = false;
    }
}

struct Solver<'a> {
    graph: &'a DecodingHypergraph,
    syndrome: &'a Syndrome,
    config: &'a DecoderConfig,
    dual: DualSolution,
    tight: BTreeSet<EdgeIndex>,
    clusters: Vec<Option<Cluster>>,
    owner: Vec<Option<usize>>,
    stats: DecodeStats,
    last_objective: Weight,
}

impl<'a> Solver<'a> {
    fn new(graph: &'a DecodingHypergraph, syndrome: &'a Syndrome, config: &'a DecoderConfig) -> Self {
        let tight = (0..graph.edge_count()).filter(|&e| graph.weight(e).is_zero()).collect();
        let mut solver = Self {
            graph,
            syndrome,
            config,
            dual: DualSolution::new(),
            tight,
            clusters: Vec::new(),
            owner: vec![None; graph.vertex_count()],
            stats: DecodeStats::default(),
            last_objective: Weight::zero(),
        };
        for &d in syndrome.defects() {
            solver.owner[d] = Some(solver.clusters.len());
            solver.clusters.push(Some(Cluster::singleton(d)));
        }
        let zero_weight: Vec<EdgeIndex> = solver.tight.iter().copied().collect();
        solver.absorb(zero_weight);
        for slot in solver.alive() {
            if !solver.is_valid(slot) {
                let cluster = solver.cluster(slot);
                let key = DualVarKey::new(graph, cluster.subgraph());
                solver.cluster_mut(slot).history.insert(key);
            }
        }
        solver
    }

    fn run(mut self) -> Result<Certificate, Error> {
        self.search()?;
        if self.config.refines() {
            self.refine()?;
        }
        self.assemble()
    }

    fn alive(&self) -> Vec<usize> {
        (0..self.clusters.len())
            .filter(|&i| self.clusters[i].is_some())
            .collect()
    }

    fn cluster(&self, slot: usize) -> &Cluster {
        self.clusters[slot].as_ref().expect("alive cluster")
    }

    fn cluster_mut(&mut self, slot: usize) -> &mut Cluster {
        self.clusters[slot].as_mut().expect("alive cluster")
    }

    fn hyperblossoms(&self, slot: usize) -> Vec<DualVarKey> {
        self.cluster(slot)
            .history
            .iter()
            .filter(|k| self.dual.contains(k))
            .cloned()
            .collect()
    }

    fn cluster_dual(&self, slot: usize) -> Weight {
        self.cluster(slot).history.iter().map(|k| self.dual.get(k)).sum()
    }

    fn is_valid(&mut self, slot: usize) -> bool {
        let cluster = self.cluster(slot);
        if let Some((version, valid)) = cluster.valid_cache {
            if version == cluster.version {
                return valid;
            }
        }
        let valid =
            !is_invalid(self.graph, &cluster.subgraph(), self.syndrome).expect("cluster subgraph is well formed");
        let cluster = self.cluster_mut(slot);
        cluster.valid_cache = Some((cluster.version, valid));
        valid
    }

    fn local(&mut self, slot: usize) -> Local {
        let cluster = self.cluster(slot);
        if let Some((version, local)) = &cluster.local_cache {
            if *version == cluster.version {
                return local.clone();
            }
        }
        let edges: Vec<EdgeIndex> = cluster.edges.iter().copied().collect();
        let matrix = ParityMatrix::new(self.graph, &cluster.vertex_list(), &edges, self.syndrome)
            .expect("cluster is well formed");
        let local = match min_weight_from_matrix(self.graph, &matrix, self.config.local_mwpf_free_var_cap) {
            Ok((pattern, weight)) => Local::Solved(pattern, weight),
            Err(Error::Infeasible) => Local::Invalid,
            Err(_) => Local::Overflow,
        };
        let cluster = self.cluster_mut(slot);
        cluster.valid_cache = Some((cluster.version, local != Local::Invalid));
        cluster.local_cache = Some((cluster.version, local.clone()));
        local
    }

    /// Re-derives tightness of `changed` edges, then merges clusters along
    /// every tight edge that touches one.
    fn refresh(&mut self, changed: impl IntoIterator<Item = EdgeIndex>) -> Result<(), Error> {
        let changed: BTreeSet<EdgeIndex> = changed.into_iter().collect();
        let mut affected = BTreeSet::new();
        for &e in &changed {
            let slack = self.dual.slack(self.graph, e);
            if slack.is_negative() {
                return Err(Error::InfeasibleDual {
                    edge: e,
                    slack: slack.to_string(),
                });
            }
            let now = slack.is_zero();
            let before = self.tight.contains(&e);
            if now != before {
                if now {
                    self.tight.insert(e);
                } else {
                    self.tight.remove(&e);
                }
                for &v in &self.graph.edge(e).vertices {
                    if let Some(slot) = self.owner[v] {
                        affected.insert(slot);
                    }
                }
            }
        }
        for slot in affected {
            let lost: Vec<EdgeIndex> = self
                .cluster(slot)
                .edges
                .iter()
                .copied()
                .filter(|e| !self.tight.contains(e))
                .collect();
            if !lost.is_empty() {
                let cluster = self.cluster_mut(slot);
                for e in lost {
                    cluster.edges.remove(&e);
                }
                cluster.touch();
            }
        }
        let grown: Vec<EdgeIndex> = changed.into_iter().filter(|e| self.tight.contains(e)).collect();
        self.absorb(grown);
        if self.config.audit {
            self.audit_state()?;
        }
        Ok(())
    }

    /// Merges along tight edges reachable from `start`.
    fn absorb(&mut self, start: Vec<EdgeIndex>) {
        let mut queue: VecDeque<EdgeIndex> = start.into();
        while let Some(e) = queue.pop_front() {
            if !self.tight.contains(&e) {
                continue;
            }
            let vertices = &self.graph.edge(e).vertices;
            let owners: BTreeSet<usize> = vertices.iter().filter_map(|&v| self.owner[v]).collect();
            let Some(&target) = owners.iter().next() else {
                continue;
            };
            let mut changed = !self.cluster(target).edges.contains(&e);
            for &other in owners.iter().skip(1) {
                let absorbed = self.clusters[other].take().expect("alive cluster");
                for &v in &absorbed.vertices {
                    self.owner[v] = Some(target);
                }
                let cluster = self.cluster_mut(target);
                cluster.vertices.extend(absorbed.vertices);
                cluster.edges.extend(absorbed.edges);
                cluster.history.extend(absorbed.history);
                changed = true;
            }
            let mut fresh = Vec::new();
            for &v in vertices {
                if self.owner[v].is_none() {
                    self.owner[v] = Some(target);
                    self.cluster_mut(target).vertices.insert(v);
                    fresh.push(v);
                }
            }
            self.cluster_mut(target).edges.insert(e);
            for v in fresh {
                changed = true;
                for &f in self.graph.incident(v) {
                    if self.tight.contains(&f) {
                        queue.push_back(f);
                    }
                }
            }
            if changed {
                let cluster = self.cluster_mut(target);
                cluster.touch();
                if owners.len() > 1 {
                    cluster.settled = false;
                }
            }
        }
    }

    fn growth_key(&self, slot: usize) -> Result<DualVarKey, Error> {
        let key = DualVarKey::new(self.graph, self.cluster(slot).subgraph());
        if key.hair().is_empty() {
            return Err(Error::Infeasible);
        }
        Ok(key)
    }

    /// Grows every invalid cluster at unit rate until all are valid.
    fn search(&mut self) -> Result<(), Error> {
        loop {
            let invalid: Vec<usize> = self.alive().into_iter().filter(|&s| !self.is_valid(s)).collect();
            if invalid.is_empty() {
                return Ok(());
            }
            let mut direction = Direction::new();
            let mut changed = BTreeSet::new();
            for slot in invalid {
                let key = self.growth_key(slot)?;
                changed.extend(key.hair().iter().copied());
                direction.add(&key, &Weight::one());
                self.cluster_mut(slot).history.insert(key);
            }
            self.dual.grow(self.graph, &direction, GrowthLength::Max)?;
            self.stats.search_steps += 1;
            self.refresh(changed)?;
        }
    }

    /// `(Σ y - W(local)) / (|E_C| + |B_C|)^3`, `None` for invalid clusters.
    fn priority(&mut self, slot: usize) -> Option<Weight> {
        let Local::Solved(_, weight) = self.local(slot) else {
            return None;
        };
        let size = (self.cluster(slot).edges.len() + self.hyperblossoms(slot).len()) as i64;
        if size == 0 {
            return Some(Weight::zero());
        }
        Some((self.cluster_dual(slot) - weight) / Weight::from_integer(size * size * size))
    }

    /// Invalid clusters first, then ascending priority, then smallest vertex.
    fn next_candidate(&mut self) -> Option<usize> {
        let mut best: Option<(CandidateRank, usize)> = None;
        for slot in self.alive() {
            if self.cluster(slot).stuck {
                continue;
            }
            let local = self.local(slot);
            let score = match local {
                Local::Overflow => continue,
                Local::Invalid => None,
                Local::Solved(_, ref weight) => {
                    if *weight == self.cluster_dual(slot) || !self.config.below_limit(self.hyperblossoms(slot).len()) {
                        continue;
                    }
                    self.priority(slot)
                }
            };
            let first = *self.cluster(slot).vertices.iter().next().expect("non-empty");
            let rank = (score.is_some(), score, first);
            if best.as_ref().is_none_or(|(b, _)| rank < *b) {
                best = Some((rank, slot));
            }
        }
        best.map(|(_, slot)| slot)
    }

    fn refine(&mut self) -> Result<(), Error> {
        while let Some(slot) = self.next_candidate() {
            if !self.cluster(slot).settled {
                self.settle(slot)?;
                continue;
            }
            match self.primal_phase(slot)? {
                Some(direction) => self.dual_phase(slot, direction)?,
                None => self.cluster_mut(slot).stuck = true,
            }
        }
        Ok(())
    }

    /// Re-solves the LP over the cluster history with everything else fixed.
    fn solve_history(&mut self, slot: usize) -> Result<(), Error> {
        let history = self.cluster(slot).history.clone();
        let mut capacities: BTreeMap<EdgeIndex, Weight> = BTreeMap::new();
        for key in &history {
            for &e in key.hair() {
                capacities.entry(e).or_insert_with(|| self.dual.slack(self.graph, e));
            }
        }
        for key in &history {
            let y = self.dual.get(key);
            if y.is_zero() {
                continue;
            }
            for &e in key.hair() {
                *capacities.get_mut(&e).expect("hair edge in scope") += &y;
            }
        }
        let solution: BTreeMap<DualVarKey, Weight> =
            solve_with_capacities(&history, &capacities)?.into_iter().collect();
        for key in &history {
            self.dual.set(key, solution.get(key).cloned().unwrap_or_default());
        }
        self.refresh(capacities.into_keys())
    }

    /// A merge during the solve clears the flag again.
    fn settle(&mut self, slot: usize) -> Result<(), Error> {
        self.cluster_mut(slot).settled = true;
        self.stats.settle_solves += 1;
        self.solve_history(slot)
    }

    fn primal_phase(&mut self, slot: usize) -> Result<Option<Direction>, Error> {
        let cluster = self.cluster(slot);
        let vertices = cluster.vertex_list();
        let tight = cluster.edges.clone();
        if !self.is_valid(slot) {
            return trivial_direction(self.graph, &vertices, &tight).map(Some);
        }
        let hyperblossoms = self.hyperblossoms(slot);
        let view = ClusterView {
            graph: self.graph,
            syndrome: self.syndrome,
            vertices: &vertices,
            tight: &tight,
            hyperblossoms: &hyperblossoms,
            dual: &self.dual,
        };
        if self.config.audit {
            audit_hair_matrices(&view, &mut self.stats.audit)?;
        }
        let finders: Vec<&dyn RelaxerFinder> = self.config.finders.iter().map(|f| f.finder()).collect();
        let outcome = batched_relaxing(&view, &finders)?;
        self.stats.finder_calls += outcome.finder_calls;
        if self.config.audit {
            for relaxer in &outcome.relaxers {
                for (key, delta) in relaxer.direction().iter() {
                    if delta.is_positive() && !is_invalid(self.graph, key.subgraph(), self.syndrome)? {
                        return Err(Error::Internal(format!("relaxer grows valid subgraph {key:?}")));
                    }
                }
                self.stats.audit.relaxer += 1;
            }
        }
        let relaxed = outcome.relaxed_edges();
        let reduced: BTreeSet<EdgeIndex> = tight.difference(&relaxed).copied().collect();
        let reduced_subgraph = SubgraphRef {
            vertices: vertices.clone(),
            edges: reduced.iter().copied().collect(),
        };
        if !is_invalid(self.graph, &reduced_subgraph, self.syndrome)? {
            return Ok(None);
        }
        let trivial = trivial_direction(self.graph, &vertices, &reduced)?;
        let direction = compose(&outcome.relaxers, &tight, &trivial)?;
        if self.config.audit {
            if direction.sum() < trivial.sum()
                || !check_feasible_direction_on(&self.dual, &tight, &direction).is_feasible()
            {
                return Err(Error::Internal("composed direction lost growth or feasibility".into()));
            }
            self.stats.audit.compose += 1;
        }
        Ok(Some(direction))
    }

    fn dual_phase(&mut self, slot: usize, direction: Direction) -> Result<(), Error> {
        let before_objective = self.dual.objective();
        let before_history = self.cluster(slot).history.len();
        for (key, delta) in direction.iter() {
            if delta.is_positive() {
                self.cluster_mut(slot).history.insert(key.clone());
            }
        }
        let after_history = self.cluster(slot).history.len();
        if self.config.audit {
            if after_history <= before_history {
                return Err(Error::Internal("history did not grow".into()));
            }
            self.stats.audit.history_growth += 1;
        }
        self.solve_history(slot)?;
        if self.dual.objective() <= before_objective {
            return Err(Error::Internal(format!(
                "dual objective did not increase: {} -> {}",
                before_objective,
                self.dual.objective()
            )));
        }
        self.stats.refine_iterations += 1;
        Ok(())
    }

    fn audit_state(&mut self) -> Result<(), Error> {
        let audit = &mut self.stats.audit;
        let mut seen_vertices = BTreeSet::new();
        let mut seen_edges = BTreeSet::new();
        let mut seen_keys = BTreeSet::new();
        for cluster in self.clusters.iter().flatten() {
            for &v in &cluster.vertices {
                if !seen_vertices.insert(v) {
                    return Err(Error::Internal(format!("vertex {v} in two clusters")));
                }
            }
            for &e in &cluster.edges {
                if !seen_edges.insert(e) {
                    return Err(Error::Internal(format!("edge {e} in two clusters")));
                }
            }
            for key in &cluster.history {
                if !key.vertices().iter().all(|v| cluster.vertices.contains(v)) {
                    return Err(Error::Internal(format!("key {key:?} escapes its cluster")));
                }
                if !seen_keys.insert(key.clone()) {
                    return Err(Error::Internal(format!("key {key:?} in two histories")));
                }
            }
        }
        for &d in self.syndrome.defects() {
            if !seen_vertices.contains(&d) {
                return Err(Error::Internal(format!("defect {d} outside every cluster")));
            }
        }
        for (key, _) in self.dual.iter() {
            if !seen_keys.contains(key) {
                return Err(Error::Internal(format!("hyperblossom {key:?} outside every history")));
            }
        }
        audit.disjointness += 1;
        let (_, tight) = slack_and_tight(self.graph, &self.dual)?;
        if tight.0 != self.tight {
            return Err(Error::Internal("tight set out of date".into()));
        }
        audit.dual_feasibility += 1;
        if !self.dual.cache_is_coherent() {
            return Err(Error::Internal("contribution cache incoherent".into()));
        }
        audit.cache_coherence += 1;
        let objective = self.dual.objective();
        if objective < self.last_objective {
            return Err(Error::Internal("dual objective decreased".into()));
        }
        self.last_objective = objective;
        audit.objective_monotone += 1;
        Ok(())
    }

    fn assemble(mut self) -> Result<Certificate, Error> {
        let mut edges = BTreeSet::new();
        let mut primal = Weight::zero();
        let mut exact = true;
        for slot in self.alive() {
            let (pattern, weight) = match self.local(slot) {
                Local::Solved(p, w) => (p, w),
                Local::Invalid => return Err(Error::Internal("cluster still invalid at assembly".into())),
                Local::Overflow => {
                    exact = false;
                    let cluster = self.cluster(slot);
                    let list: Vec<EdgeIndex> = cluster.edges.iter().copied().collect();
                    let matrix = ParityMatrix::new(self.graph, &cluster.vertex_list(), &list, self.syndrome)?;
                    let x = matrix.solution(|_| false).ok_or(Error::Infeasible)?;
                    let pattern = ErrorPattern::new(x.ones(list.len()).map(|j| matrix.columns()[j]));
                    let weight = weight_of(self.graph, &pattern)?;
                    (pattern, weight)
                }
            };
            let locally_optimal = weight == self.cluster_dual(slot);
            if !locally_optimal {
                if self.cluster(slot).stuck {
                    self.stats.clusters_stuck += 1;
                } else {
                    self.stats.clusters_frozen += 1;
                }
            }
            edges.extend(pattern.edges().iter().copied());
            primal += &weight;
        }
        let pattern = ErrorPattern::new(edges);
        let dual_objective = self.dual.objective();
        let gap = &primal - &dual_objective;
        if gap.is_negative() {
            return Err(Error::Internal(format!("negative gap {gap}")));
        }
        if defects_of(self.graph, &pattern)? != *self.syndrome {
            return Err(Error::Internal("assembled pattern violates parity".into()));
        }
        self.stats.clusters = self.alive().len();
        self.stats.history_size = self.clusters.iter().flatten().map(|c| c.history.len()).sum();
        let certified_optimal = gap.is_zero() && exact;
        Ok(Certificate {
            pattern,
            primal_weight: primal,
            dual: self.dual,
            dual_objective,
            gap,
            certified_optimal,
            weight_offset: Weight::zero(),
            flipped: ErrorPattern::default(),
            stats: self.stats,
        })
    }
}

/// `{(V_C, edges): +1}`; an empty hair means no parity factor exists.
fn trivial_direction(
    graph: &DecodingHypergraph,
    vertices: &[VertexIndex],
    edges: &BTreeSet<EdgeIndex>,
) -> Result<Direction, Error> {
    let key = DualVarKey::new(
        graph,
        SubgraphRef {
            vertices: vertices.to_vec(),
            edges: edges.iter().copied().collect(),
        },
    );
    if key.hair().is_empty() {
        return Err(Error::Infeasible);
    }
    Ok(Direction::single(key, Weight::one()))
}

/// Checks, for every hyperblossom of a valid cluster, that its hair matrix
/// has an Odd row, and that an Odd row covering every tight hair is the only
/// row.
pub fn audit_hair_matrices(view: &ClusterView<'_>, counts: &mut AuditCounts) -> Result<(), Error> {
    for s in view.hyperblossoms {
        let matrix = hyperblossom_hair_matrix(view.graph, view.vertices, view.tight, view.syndrome, s)?;
        let Some(row) = matrix.first_odd_row() else {
            return Err(Error::Internal(format!("hyperblossom {s:?} has no Odd row")));
        };
        counts.odd_row += 1;
        if matrix.row_edges(row).len() == matrix.hair_edges().len() {
            if matrix.row_count() != 1 {
                return Err(Error::Internal(format!(
                    "hyperblossom {s:?} has a full Odd row among {} rows",
                    matrix.row_count()
                )));
            }
            counts.unique_row += 1;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub failures: Vec<String>,
}

impl VerificationReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.failures.is_empty() {
            return f.write_str("ok");
        }
        for (i, failure) in self.failures.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            f.write_str(failure)?;
        }
        Ok(())
    }
}

/// Rechecks a certificate from scratch: parity, primal arithmetic, dual
/// feasibility and invalidity of every dual key, the dual objective, the gap
/// and the certified flag.
pub fn verify_certificate(graph: &DecodingHypergraph, syndrome: &Syndrome, cert: &Certificate) -> VerificationReport {
    let mut failures = Vec::new();
    match defects_of(graph, &cert.pattern) {
        Ok(d) if d == *syndrome => {}
        Ok(d) => failures.push(format!(
            "pattern produces defects {:?}, expected {:?}",
            d.defects(),
            syndrome.defects()
        )),
        Err(e) => failures.push(format!("pattern: {e}")),
    }
    match weight_of(graph, &cert.pattern) {
        Ok(w) if w == cert.primal_weight => {}
        Ok(w) => failures.push(format!(
            "primal weight is {w}, certificate claims {}",
            cert.primal_weight
        )),
        Err(e) => failures.push(format!("primal weight: {e}")),
    }
    let pre = preprocess_negative_weights(graph, syndrome);
    if pre.flipped != cert.flipped {
        failures.push("flipped edges disagree with the negative weights of the graph".into());
    }
    if pre.offset != cert.weight_offset {
        failures.push(format!(
            "weight offset is {}, certificate claims {}",
            pre.offset, cert.weight_offset
        ));
    }
    let mut load: BTreeMap<EdgeIndex, Weight> = BTreeMap::new();
    let mut total = Weight::zero();
    for (key, y) in cert.dual.iter() {
        if !y.is_positive() {
            failures.push(format!("dual value {y} of {key:?} is not positive"));
        }
        match SubgraphRef::new(&pre.graph, key.vertices().iter().copied(), key.edges().iter().copied()) {
            Ok(subgraph) => {
                match is_invalid(&pre.graph, &subgraph, &pre.syndrome) {
                    Ok(true) => {}
                    Ok(false) => failures.push(format!("dual key {key:?} is not an invalid subgraph")),
                    Err(e) => failures.push(format!("dual key {key:?}: {e}")),
                }
                let hair = DualVarKey::new(&pre.graph, subgraph);
                for &e in hair.hair() {
                    *load.entry(e).or_default() += y;
                }
            }
            Err(e) => failures.push(format!("dual key {key:?}: {e}")),
        }
        total += y;
    }
    for (e, l) in &load {
        if l > pre.graph.weight(*e) {
            failures.push(format!("edge {e} is overloaded: {l} > {}", pre.graph.weight(*e)));
        }
    }
    let objective = &total + &pre.offset;
    if objective != cert.dual_objective {
        failures.push(format!(
            "dual objective is {objective}, certificate claims {}",
            cert.dual_objective
        ));
    }
    if &cert.primal_weight - &cert.dual_objective != cert.gap {
        failures.push(format!(
            "gap {} differs from primal minus dual {}",
            cert.gap,
            &cert.primal_weight - &cert.dual_objective
        ));
    }
    if cert.gap.is_negative() {
        failures.push(format!("negative gap {}", cert.gap));
    }
    if cert.certified_optimal && !cert.gap.is_zero() {
        failures.push("certified with a nonzero gap".into());
    }
    if !cert.certified_optimal && cert.gap.is_zero() && failures.is_empty() {
        failures.push("zero gap but not marked certified".into());
    }
    VerificationReport { failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::parity::brute_force_mwpf;

    #[test]
    fn f1_golden() {
        let f1 = fixtures::f1();
        let d = Syndrome::new([3]);
        let cert = decode(&f1, &d, &DecoderConfig::single_hair().with_audit(true)).unwrap();
        assert_eq!(cert.pattern.edges(), &[0, 1, 2]);
        assert_eq!(cert.primal_weight, Weight::from_integer(3));
        assert_eq!(cert.dual_objective, Weight::from_integer(3));
        assert!(cert.gap.is_zero());
        assert!(cert.certified_optimal);
        assert!(verify_certificate(&f1, &d, &cert).is_ok());
    }

    #[test]
    fn initial_clusters() {
        let f1 = fixtures::f1();
        let d = Syndrome::new([3]);
        let config = DecoderConfig::default();
        let solver = Solver::new(&f1, &d, &config);
        assert_eq!(solver.alive().len(), 1);
        let c = solver.cluster(0);
        assert_eq!(c.vertices, BTreeSet::from([3]));
        assert!(c.edges.is_empty());
        let history: Vec<_> = c
            .history
            .iter()
            .map(|k| (k.vertices().to_vec(), k.edges().to_vec()))
            .collect();
        assert_eq!(history, vec![(vec![3], vec![])]);

        let zero = DecodingHypergraph::new(3, vec![(vec![0, 1], Weight::zero()), (vec![1, 2], Weight::one())]).unwrap();
        let d = Syndrome::new([0]);
        let solver = Solver::new(&zero, &d, &config);
        let c = solver.cluster(0);
        assert_eq!(c.vertices, BTreeSet::from([0, 1]));
        assert_eq!(c.edges, BTreeSet::from([0]));
    }

    #[test]
    fn f1_merge_after_first_growth() {
        let f1 = fixtures::f1();
        let d = Syndrome::new([3]);
        let config = DecoderConfig::default();
        let mut solver = Solver::new(&f1, &d, &config);
        let key = solver.growth_key(0).unwrap();
        solver
            .dual
            .grow(&f1, &Direction::single(key.clone(), Weight::one()), GrowthLength::Max)
            .unwrap();
        solver.refresh(key.hair().to_vec()).unwrap();
        let c = solver.cluster(0);
        assert_eq!(c.vertices, BTreeSet::from([1, 2, 3]));
        assert_eq!(c.edges, BTreeSet::from([2]));
    }

    #[test]
    fn empty_syndrome() {
        let f1 = fixtures::f1();
        let cert = decode(&f1, &Syndrome::default(), &DecoderConfig::default()).unwrap();
        assert!(cert.pattern.is_empty());
        assert!(cert.gap.is_zero() && cert.certified_optimal);
    }

    #[test]
    fn triangle_and_parallel_edges() {
        let f2 = fixtures::f2();
        let d = Syndrome::new([0, 1]);
        let cert = decode(&f2, &d, &DecoderConfig::default()).unwrap();
        assert_eq!(cert.pattern.edges(), &[0]);
        assert_eq!(cert.primal_weight, Weight::one());
        assert!(cert.certified_optimal);

        let f3 = fixtures::f3();
        let d = Syndrome::new([0]);
        let cert = decode(&f3, &d, &DecoderConfig::nullity()).unwrap();
        assert_eq!(cert.pattern.edges(), &[0]);
        assert_eq!(cert.primal_weight, Weight::from_integer(2));
        assert_eq!(cert.dual_objective, Weight::from_integer(2));
        assert!(cert.certified_optimal);
    }

    #[test]
    fn infeasible_syndrome() {
        let g = DecodingHypergraph::new(3, vec![(vec![0, 1], Weight::one())]).unwrap();
        assert_eq!(
            decode(&g, &Syndrome::new([2]), &DecoderConfig::default()),
            Err(Error::Infeasible)
        );
        assert_eq!(
            decode(&g, &Syndrome::new([0]), &DecoderConfig::default()),
            Err(Error::Infeasible)
        );
    }

    #[test]
    fn negative_weights() {
        let g = DecodingHypergraph::with_signed_weights(
            2,
            vec![
                (vec![0], Weight::from_integer(-2)),
                (vec![0, 1], Weight::one()),
                (vec![1], Weight::from_integer(3)),
            ],
        )
        .unwrap();
        let d = Syndrome::new([1]);
        let cert = decode(&g, &d, &DecoderConfig::default()).unwrap();
        assert!(
            verify_certificate(&g, &d, &cert).is_ok(),
            "{}",
            verify_certificate(&g, &d, &cert)
        );
        // {e0, e1} weighs -1, the best of the two parity factors
        assert_eq!(cert.pattern.edges(), &[0, 1]);
        assert_eq!(cert.primal_weight, Weight::from_integer(-1));
        assert!(cert.certified_optimal);
    }

    #[test]
    fn verification_catches_tampering() {
        let f1 = fixtures::f1();
        let d = Syndrome::new([3]);
        let cert = decode(&f1, &d, &DecoderConfig::default()).unwrap();

        let mut wrong_weight = cert.clone();
        wrong_weight.primal_weight = Weight::from_integer(4);
        assert!(!verify_certificate(&f1, &d, &wrong_weight).is_ok());

        let mut valid_key = cert.clone();
        let whole = DualVarKey::new(&f1, SubgraphRef::new(&f1, 0..4, 0..3).unwrap());
        valid_key.dual = DualSolution::new();
        valid_key.dual.set(&whole, Weight::one());
        let report = verify_certificate(&f1, &d, &valid_key);
        assert!(report.failures.iter().any(|f| f.contains("not an invalid subgraph")));
    }

    #[test]
    fn priority_formula() {
        // dual 2, local weight 3, three edges, two hyperblossoms
        let score = (Weight::from_integer(2) - Weight::from_integer(3)) / Weight::from_integer(125);
        assert_eq!(score, Weight::new(-1, 125));
    }

    #[test]
    fn union_find_mode_never_calls_finders() {
        let f1 = fixtures::f1();
        let d = Syndrome::new([3]);
        let cert = decode(&f1, &d, &DecoderConfig::union_find()).unwrap();
        assert_eq!(cert.stats.finder_calls, 0);
        assert_eq!(defects_of(&f1, &cert.pattern).unwrap(), d);
        assert_eq!(
            cert.primal_weight,
            brute_force_mwpf(&f1, &d, 16).unwrap().1,
            "the only parity factor"
        );
    }
}
