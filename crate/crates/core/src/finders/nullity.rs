use std::collections::{BTreeMap, BTreeSet};

use crate::dual::{Direction, DualVarKey};
use crate::error::Error;
use crate::hypergraph::{DecodingHypergraph, EdgeIndex, ErrorPattern, SubgraphRef};
use crate::parity::ParityMatrix;
use crate::relaxer::{ClusterView, Relaxer, RelaxerFinder};
use crate::weight::Weight;

/// An optimal dual of the cluster-local problem on `(V_C, T')` together
/// with the minimum-weight parity factor it certifies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalOptimum {
    pub values: BTreeMap<DualVarKey, Weight>,
    pub objective: Weight,
    pub pattern: ErrorPattern,
}

/// Builds the optimal local dual when `(V_C, T')` is valid with nullity at
/// most one; `None` otherwise.
///
/// With a unique parity factor every edge `e` of it gets
/// `y_(V, T' \ {e}) = w_e`. With two factors `E1` (the lighter, ties to the
/// lexicographically smaller) and `E2`, both are laid out on a line with
/// their shared edges first; each stretch of `[0, W(E1)]` covered by `e1`
/// on the first line and `e2` on the second contributes its length to
/// `y_(V, T' \ {e1, e2})`.
pub fn optimal_local_dual(view: &ClusterView<'_>) -> Result<Option<LocalOptimum>, Error> {
    let tight = view.tight_edges();
    let matrix = ParityMatrix::new(view.graph, view.vertices, &tight, view.syndrome)?;
    if matrix.is_inconsistent() || matrix.nullity() > 1 {
        return Ok(None);
    }
    let pattern_of = |free: bool| -> ErrorPattern {
        let x = matrix.solution(|_| free).expect("consistent");
        ErrorPattern::new(x.ones(tight.len()).map(|j| matrix.columns()[j]))
    };
    let weight = |p: &ErrorPattern| -> Weight { p.edges().iter().map(|&e| view.graph.weight(e)).sum() };

    let mut values: BTreeMap<DualVarKey, Weight> = BTreeMap::new();
    let mut credit = |removed: &[EdgeIndex], amount: &Weight| {
        let subgraph = SubgraphRef {
            vertices: view.vertices.to_vec(),
            edges: tight.iter().copied().filter(|e| !removed.contains(e)).collect(),
        };
        *values.entry(DualVarKey::new(view.graph, subgraph)).or_default() += amount;
    };

    let pattern = if matrix.nullity() == 0 {
        let only = pattern_of(false);
        for &e in only.edges() {
            let w = view.graph.weight(e);
            if w.is_positive() {
                credit(&[e], w);
            }
        }
        only
    } else {
        let (a, b) = (pattern_of(false), pattern_of(true));
        let (wa, wb) = (weight(&a), weight(&b));
        let (first, second) = if (&wa, a.edges()) <= (&wb, b.edges()) {
            (a, b)
        } else {
            (b, a)
        };
        let shared: BTreeSet<EdgeIndex> = first.edges().iter().copied().filter(|e| second.contains(*e)).collect();
        let line = |p: &ErrorPattern| -> Vec<EdgeIndex> {
            let mut out: Vec<EdgeIndex> = shared.iter().copied().collect();
            out.extend(p.edges().iter().copied().filter(|e| !shared.contains(e)));
            out
        };
        let (line1, line2) = (line(&first), line(&second));
        let (mut i, mut j) = (0, 0);
        let mut rem1 = line1.first().map(|&e| view.graph.weight(e).clone()).unwrap_or_default();
        let mut rem2 = line2.first().map(|&e| view.graph.weight(e).clone()).unwrap_or_default();
        while i < line1.len() {
            if rem1.is_zero() {
                i += 1;
                if let Some(&e) = line1.get(i) {
                    rem1 = view.graph.weight(e).clone();
                }
                continue;
            }
            if rem2.is_zero() {
                j += 1;
                let Some(&e) = line2.get(j) else {
                    return Err(Error::Internal("second line shorter than the first".into()));
                };
                rem2 = view.graph.weight(e).clone();
                continue;
            }
            let step = (&rem1).min(&rem2).clone();
            let pair = [line1[i], line2[j]];
            credit(if pair[0] == pair[1] { &pair[..1] } else { &pair[..] }, &step);
            rem1 -= &step;
            rem2 -= &step;
        }
        first
    };
    let objective = values.values().sum();
    Ok(Some(LocalOptimum {
        values,
        objective,
        pattern,
    }))
}

/// Steers the cluster dual toward the exact local optimum, available when
/// the tight subgraph has at most two parity factors.
#[derive(Debug, Clone, Copy, Default)]
pub struct NullityLe1;

impl RelaxerFinder for NullityLe1 {
    fn name(&self) -> &'static str {
        "nullity"
    }

    fn find(&self, view: &ClusterView<'_>) -> Result<Option<Relaxer>, Error> {
        let Some(optimum) = optimal_local_dual(view)? else {
            return Ok(None);
        };
        let current: Weight = view.hyperblossoms.iter().map(|s| view.dual.get(s)).sum();
        let gain = &optimum.objective - &current;
        if !gain.is_positive() {
            return Ok(None);
        }
        let Some((_, anchor)) = anchor(view.graph, view) else {
            return Ok(None);
        };
        let mut direction: Direction = optimum.values.into_iter().collect();
        for s in view.hyperblossoms {
            direction.add(s, &-view.dual.get(s));
        }
        direction.add(anchor, &-gain);
        Relaxer::new(direction, view.dual, view.tight).map(Some)
    }
}

/// Smallest positive-weight tight edge lying in the hair of some
/// hyperblossom, with the first such hyperblossom.
fn anchor<'a>(graph: &DecodingHypergraph, view: &ClusterView<'a>) -> Option<(EdgeIndex, &'a DualVarKey)> {
    view.tight
        .iter()
        .filter(|&&e| graph.weight(e).is_positive())
        .find_map(|&e| view.hyperblossoms.iter().find(|s| s.hair_contains(e)).map(|s| (e, s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::{check_feasible_direction_on, DualSolution};
    use crate::fixtures;
    use crate::hypergraph::Syndrome;
    use crate::parity::{brute_force_mwpf, is_invalid};

    fn key(graph: &DecodingHypergraph, v: &[usize], e: &[usize]) -> DualVarKey {
        DualVarKey::new(
            graph,
            SubgraphRef::new(graph, v.iter().copied(), e.iter().copied()).unwrap(),
        )
    }

    fn view<'a>(
        graph: &'a DecodingHypergraph,
        syndrome: &'a Syndrome,
        vertices: &'a [usize],
        tight: &'a BTreeSet<EdgeIndex>,
        hyperblossoms: &'a [DualVarKey],
        dual: &'a DualSolution,
    ) -> ClusterView<'a> {
        ClusterView {
            graph,
            syndrome,
            vertices,
            tight,
            hyperblossoms,
            dual,
        }
    }

    #[test]
    fn f3_at_optimum_gives_none() {
        let f3 = fixtures::f3();
        let syndrome = Syndrome::new([0]);
        let s = key(&f3, &[0], &[]);
        let mut dual = DualSolution::new();
        dual.set(&s, Weight::from_integer(2));
        let tight = BTreeSet::from([0]);
        let hb = [s];
        let v = view(&f3, &syndrome, &[0], &tight, &hb, &dual);
        assert!(NullityLe1.find(&v).unwrap().is_none());

        // with both parallel edges in scope the two lines give one interval
        let both = BTreeSet::from([0, 1]);
        let opt = optimal_local_dual(&v.with_tight(&both)).unwrap().unwrap();
        assert_eq!(opt.objective, Weight::from_integer(2));
        assert_eq!(opt.pattern.edges(), &[0]);
        assert_eq!(opt.values.len(), 1);
        let (only, y) = opt.values.iter().next().unwrap();
        assert!(only.edges().is_empty());
        assert_eq!(*y, Weight::from_integer(2));
    }

    #[test]
    fn f1_optimal_dual_and_relaxer() {
        let f1 = fixtures::f1();
        let syndrome = Syndrome::new([3]);
        let s1 = key(&f1, &[3], &[]);
        let s2 = key(&f1, &[1, 2, 3], &[2]);
        let mut dual = DualSolution::new();
        dual.set(&s1, Weight::one());
        dual.set(&s2, Weight::one());
        let tight = BTreeSet::from([0, 1, 2]);
        let hb = [s1, s2];
        let vertices = [0, 1, 2, 3];
        let v = view(&f1, &syndrome, &vertices, &tight, &hb, &dual);
        let opt = optimal_local_dual(&v).unwrap().unwrap();
        assert_eq!(opt.objective, Weight::from_integer(3));
        let expected: BTreeMap<_, _> = (0..3)
            .map(|e| {
                let rest: Vec<_> = (0..3).filter(|&x| x != e).collect();
                (key(&f1, &vertices, &rest), Weight::one())
            })
            .collect();
        assert_eq!(opt.values, expected);

        let relaxer = NullityLe1.find(&v).unwrap().unwrap();
        assert!(!relaxer.direction().sum().is_negative());
        assert!(!relaxer.relaxed().is_empty());
        assert!(check_feasible_direction_on(&dual, &tight, relaxer.direction()).is_feasible());
    }

    #[test]
    fn nullity_two_gives_none() {
        // three parallel edges on one defect
        let g = DecodingHypergraph::new(1, vec![(vec![0], Weight::one()); 3]).unwrap();
        let syndrome = Syndrome::new([0]);
        let dual = DualSolution::new();
        let tight = BTreeSet::from([0, 1, 2]);
        let v = view(&g, &syndrome, &[0], &tight, &[], &dual);
        assert!(optimal_local_dual(&v).unwrap().is_none());
        assert!(NullityLe1.find(&v).unwrap().is_none());
    }

    #[test]
    fn interval_construction_on_a_cycle() {
        // 4-cycle with one defect pair: two paths of weight 3 and 4
        let g = DecodingHypergraph::new(
            4,
            vec![
                (vec![0, 1], Weight::one()),
                (vec![1, 2], Weight::from_integer(2)),
                (vec![2, 3], Weight::from_integer(3)),
                (vec![3, 0], Weight::one()),
            ],
        )
        .unwrap();
        let syndrome = Syndrome::new([0, 2]);
        let dual = DualSolution::new();
        let tight = BTreeSet::from([0, 1, 2, 3]);
        let vertices = [0, 1, 2, 3];
        let v = view(&g, &syndrome, &vertices, &tight, &[], &dual);
        let opt = optimal_local_dual(&v).unwrap().unwrap();
        let (_, best) = brute_force_mwpf(&g, &syndrome, 8).unwrap();
        assert_eq!(opt.objective, best);
        let mut load = BTreeMap::new();
        for (k, y) in &opt.values {
            assert!(is_invalid(&g, k.subgraph(), &syndrome).unwrap());
            for &e in k.hair() {
                *load.entry(e).or_insert_with(Weight::zero) += y;
            }
        }
        for (e, l) in load {
            assert!(l <= *g.weight(e));
        }
    }
}
