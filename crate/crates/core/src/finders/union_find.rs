use crate::error::Error;
use crate::relaxer::{ClusterView, Relaxer, RelaxerFinder};

/// Never finds anything; the decoder then only grows invalid clusters,
/// which is weighted hypergraph union-find.
#[derive(Debug, Clone, Copy, Default)]
pub struct UnionFind;

impl RelaxerFinder for UnionFind {
    fn name(&self) -> &'static str {
        "union-find"
    }

    fn find(&self, _view: &ClusterView<'_>) -> Result<Option<Relaxer>, Error> {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::DualSolution;
    use crate::fixtures;
    use crate::hypergraph::Syndrome;
    use std::collections::BTreeSet;

    #[test]
    fn always_none() {
        let f1 = fixtures::f1();
        let syndrome = Syndrome::new([3]);
        let dual = DualSolution::new();
        let tight: BTreeSet<_> = (0..3).collect();
        let empty = BTreeSet::new();
        for (vertices, tight) in [(&[0, 1, 2, 3][..], &tight), (&[][..], &empty)] {
            let view = ClusterView {
                graph: &f1,
                syndrome: &syndrome,
                vertices,
                tight,
                hyperblossoms: &[],
                dual: &dual,
            };
            assert!(UnionFind.find(&view).unwrap().is_none());
        }
    }
}
