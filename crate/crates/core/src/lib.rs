//! Certifying minimum-weight parity factor (MWPF) decoding on decoding
//! hypergraphs.
//!
//! [`decode`] returns a [`Certificate`]: a parity factor together with a
//! feasible dual solution whose objective lower-bounds every parity factor,
//! so a zero gap proves optimality.

pub mod api;
pub mod codes;
pub mod decoder;
pub mod dual;
pub mod error;
pub mod finders;
pub mod fixtures;
pub mod hypergraph;
pub mod io;
pub mod parity;
pub mod relaxer;
pub mod sampler;
pub mod simplex;
pub mod weight;

pub use decoder::{decode, verify_certificate, Certificate, DecoderConfig, Stage};
pub use error::Error;
pub use finders::FinderKind;
pub use hypergraph::{DecodingHypergraph, EdgeIndex, ErrorPattern, SubgraphRef, Syndrome, VertexIndex};
pub use weight::Weight;
