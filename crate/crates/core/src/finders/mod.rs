//! Relaxer finders and the configuration enum that selects them.

mod nullity;
mod single_hair;
mod union_find;

use std::fmt;
use std::str::FromStr;

pub use nullity::{optimal_local_dual, LocalOptimum, NullityLe1};
pub use single_hair::{hyperblossom_hair_matrix, HairMatrixView, SingleHair};
pub use union_find::UnionFind;

use crate::error::Error;
use crate::relaxer::RelaxerFinder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FinderKind {
    SingleHair,
    UnionFind,
    NullityLe1,
}

impl FinderKind {
    pub fn finder(self) -> &'static dyn RelaxerFinder {
        match self {
            FinderKind::SingleHair => &SingleHair,
            FinderKind::UnionFind => &UnionFind,
            FinderKind::NullityLe1 => &NullityLe1,
        }
    }

    pub fn name(self) -> &'static str {
        self.finder().name()
    }

    /// Parses a comma separated list such as `nullity,single-hair`.
    pub fn parse_list(text: &str) -> Result<Vec<FinderKind>, Error> {
        text.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl fmt::Display for FinderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FinderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "single-hair" | "singlehair" => Ok(FinderKind::SingleHair),
            "union-find" | "unionfind" | "uf" => Ok(FinderKind::UnionFind),
            "nullity" | "nullity-le1" | "nullity<=1" => Ok(FinderKind::NullityLe1),
            _ => Err(Error::Parse(format!("unknown relaxer finder `{s}`"))),
        }
    }
}
