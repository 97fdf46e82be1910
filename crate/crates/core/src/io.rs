//! JSON problem and certificate files. Rationals are strings (`"3"`,
//! `"1/3"`) so nothing passes through floating point, and fields are
//! written in a fixed order so output is byte-reproducible.

use serde::{Deserialize, Serialize};

use crate::decoder::{Certificate, DecodeStats};
use crate::dual::{DualSolution, DualVarKey};
use crate::error::Error;
use crate::hypergraph::{DecodingHypergraph, ErrorPattern, SubgraphRef, Syndrome, VertexIndex};
use crate::weight::Weight;

pub const PROBLEM_VERSION: &str = "mwpf-problem/1";
pub const CERTIFICATE_VERSION: &str = "mwpf-certificate/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub vertices: Vec<VertexIndex>,
    pub weight: Weight,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Weight>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub syndrome: Option<Vec<VertexIndex>>,
    pub version: String,
    pub vertex_count: usize,
}

impl ProblemFile {
    pub fn from_graph(graph: &DecodingHypergraph, syndrome: Option<&Syndrome>, metadata: Option<Metadata>) -> Self {
        Self {
            edges: graph
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    vertices: e.vertices.clone(),
                    weight: e.weight.clone(),
                })
                .collect(),
            metadata,
            syndrome: syndrome.map(|s| s.defects().to_vec()),
            version: PROBLEM_VERSION.into(),
            vertex_count: graph.vertex_count(),
        }
    }

    /// Validates and builds the graph; negative weights are allowed.
    pub fn graph(&self) -> Result<DecodingHypergraph, Error> {
        if self.version != PROBLEM_VERSION {
            return Err(Error::Parse(format!("unsupported problem version `{}`", self.version)));
        }
        DecodingHypergraph::with_signed_weights(
            self.vertex_count,
            self.edges
                .iter()
                .map(|e| (e.vertices.clone(), e.weight.clone()))
                .collect(),
        )
    }

    pub fn syndrome(&self, graph: &DecodingHypergraph) -> Result<Option<Syndrome>, Error> {
        self.syndrome
            .as_ref()
            .map(|d| Syndrome::checked(graph, d.iter().copied()))
            .transpose()
    }
}

/// Parses a problem file into its graph and optional syndrome.
pub fn parse_problem(text: &str) -> Result<(DecodingHypergraph, Option<Syndrome>), Error> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let graph = file.graph()?;
    let syndrome = file.syndrome(&graph)?;
    Ok((graph, syndrome))
}

/// Canonical text of a problem: sorted fields, two-space indent, trailing
/// newline.
pub fn serialize_problem(graph: &DecodingHypergraph, syndrome: Option<&Syndrome>) -> String {
    to_text(&ProblemFile::from_graph(graph, syndrome, None))
}

pub fn to_text<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    text
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualEntry {
    pub edges: Vec<usize>,
    pub vertices: Vec<VertexIndex>,
    pub y: Weight,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub certified: bool,
    pub dual: Vec<DualEntry>,
    pub dual_objective: Weight,
    #[serde(default)]
    pub flipped: Vec<usize>,
    pub gap: Weight,
    pub pattern: Vec<usize>,
    pub primal_weight: Weight,
    #[serde(default)]
    pub stats: DecodeStats,
    pub version: String,
    #[serde(default)]
    pub weight_offset: Weight,
}

impl CertificateFile {
    pub fn from_certificate(cert: &Certificate) -> Self {
        Self {
            certified: cert.certified_optimal,
            dual: cert
                .dual
                .iter()
                .map(|(k, y)| DualEntry {
                    edges: k.edges().to_vec(),
                    vertices: k.vertices().to_vec(),
                    y: y.clone(),
                })
                .collect(),
            dual_objective: cert.dual_objective.clone(),
            flipped: cert.flipped.edges().to_vec(),
            gap: cert.gap.clone(),
            pattern: cert.pattern.edges().to_vec(),
            primal_weight: cert.primal_weight.clone(),
            stats: cert.stats.clone(),
            version: CERTIFICATE_VERSION.into(),
            weight_offset: cert.weight_offset.clone(),
        }
    }

    /// Rebuilds the certificate against `graph`; dual keys are checked to
    /// be well-formed subgraphs but not yet for invalidity.
    pub fn to_certificate(&self, graph: &DecodingHypergraph) -> Result<Certificate, Error> {
        if self.version != CERTIFICATE_VERSION {
            return Err(Error::Parse(format!(
                "unsupported certificate version `{}`",
                self.version
            )));
        }
        let mut dual = DualSolution::new();
        for entry in &self.dual {
            if !entry.y.is_positive() {
                return Err(Error::Parse(format!("dual value {} is not positive", entry.y)));
            }
            let subgraph = SubgraphRef::new(graph, entry.vertices.iter().copied(), entry.edges.iter().copied())?;
            dual.add(&DualVarKey::new(graph, subgraph), &entry.y);
        }
        Ok(Certificate {
            pattern: ErrorPattern::checked(graph, self.pattern.iter().copied())?,
            primal_weight: self.primal_weight.clone(),
            dual,
            dual_objective: self.dual_objective.clone(),
            gap: self.gap.clone(),
            certified_optimal: self.certified,
            weight_offset: self.weight_offset.clone(),
            flipped: ErrorPattern::checked(graph, self.flipped.iter().copied())?,
            stats: self.stats.clone(),
        })
    }
}

pub fn parse_certificate(text: &str, graph: &DecodingHypergraph) -> Result<Certificate, Error> {
    let file: CertificateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_certificate(graph)
}

pub fn serialize_certificate(cert: &Certificate) -> String {
    to_text(&CertificateFile::from_certificate(cert))
}

/// Parses `v3`, `3` or a comma separated list of either.
pub fn parse_vertex_list(text: &str) -> Result<Vec<VertexIndex>, Error> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.trim_start_matches(['v', 'V'])
                .parse::<VertexIndex>()
                .map_err(|_| Error::Parse(format!("bad vertex id `{s}`")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoder::{decode, verify_certificate, DecoderConfig};
    use crate::fixtures;

    const F1_TEXT: &str = r#"{
  "edges": [
    {
      "vertices": [
        0,
        2
      ],
      "weight": "1"
    },
    {
      "vertices": [
        0,
        1
      ],
      "weight": "1"
    },
    {
      "vertices": [
        1,
        2,
        3
      ],
      "weight": "1"
    }
  ],
  "syndrome": [
    3
  ],
  "version": "mwpf-problem/1",
  "vertex_count": 4
}
"#;

    #[test]
    fn f1_round_trip() {
        let (graph, syndrome) = parse_problem(F1_TEXT).unwrap();
        assert_eq!(graph, fixtures::f1());
        assert_eq!(syndrome, Some(Syndrome::new([3])));
        assert_eq!(serialize_problem(&graph, syndrome.as_ref()), F1_TEXT);
    }

    #[test]
    fn exact_rational_weights() {
        let text = r#"{"edges":[{"vertices":[0],"weight":"1/3"}],"version":"mwpf-problem/1","vertex_count":1}"#;
        let (graph, syndrome) = parse_problem(text).unwrap();
        assert_eq!(graph.weight(0), &Weight::new(1, 3));
        assert!(syndrome.is_none());
    }

    #[test]
    fn parse_errors() {
        let duplicate = r#"{"edges":[{"vertices":[0,0],"weight":"1"}],"version":"mwpf-problem/1","vertex_count":1}"#;
        assert!(matches!(parse_problem(duplicate), Err(Error::DuplicateVertex { .. })));
        let range = r#"{"edges":[{"vertices":[5],"weight":"1"}],"version":"mwpf-problem/1","vertex_count":3}"#;
        assert!(matches!(parse_problem(range), Err(Error::VertexOutOfRange { .. })));
        let float = r#"{"edges":[{"vertices":[0],"weight":"0.5"}],"version":"mwpf-problem/1","vertex_count":1}"#;
        assert!(matches!(parse_problem(float), Err(Error::Parse(_))));
        let version = r#"{"edges":[],"version":"other","vertex_count":0}"#;
        assert!(matches!(parse_problem(version), Err(Error::Parse(_))));
        assert!(matches!(parse_problem("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn certificate_round_trip() {
        let f1 = fixtures::f1();
        let d = Syndrome::new([3]);
        let cert = decode(&f1, &d, &DecoderConfig::default()).unwrap();
        let text = serialize_certificate(&cert);
        let back = parse_certificate(&text, &f1).unwrap();
        assert_eq!(back, cert);
        assert!(verify_certificate(&f1, &d, &back).is_ok());
        assert_eq!(serialize_certificate(&back), text);
    }

    #[test]
    fn vertex_lists() {
        assert_eq!(parse_vertex_list("v3").unwrap(), vec![3]);
        assert_eq!(parse_vertex_list("v1, 2,v10").unwrap(), vec![1, 2, 10]);
        assert!(parse_vertex_list("x").is_err());
    }
}
