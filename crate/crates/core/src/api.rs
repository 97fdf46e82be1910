//! Plain-data entry points for foreign-language bindings. Weights cross the
//! boundary as `(numerator, denominator)` integer pairs.

use num_bigint::BigInt;

use crate::decoder::{decode, verify_certificate, Certificate, DecoderConfig, VerificationReport};
use crate::error::Error;
use crate::finders::FinderKind;
use crate::hypergraph::{DecodingHypergraph, Syndrome, VertexIndex};
use crate::parity::brute_force_mwpf;
use crate::weight::Weight;

pub type Rational = (BigInt, BigInt);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiProblem {
    pub vertex_count: usize,
    pub edges: Vec<(Vec<VertexIndex>, Rational)>,
}

impl ApiProblem {
    pub fn graph(&self) -> Result<DecodingHypergraph, Error> {
        let edges = self
            .edges
            .iter()
            .map(|(v, (n, d))| Ok((v.clone(), Weight::from_big(n.clone(), d.clone())?)))
            .collect::<Result<Vec<_>, Error>>()?;
        DecodingHypergraph::with_signed_weights(self.vertex_count, edges)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiDecodeResult {
    pub pattern: Vec<usize>,
    pub primal: Rational,
    pub dual: Rational,
    pub gap: Rational,
    pub certified: bool,
}

pub fn to_pair(w: &Weight) -> Rational {
    (w.numerator().clone(), w.denominator().clone())
}

pub fn api_decode(
    problem: &ApiProblem,
    syndrome: &[VertexIndex],
    cluster_limit: Option<usize>,
    finders: Option<&[&str]>,
) -> Result<ApiDecodeResult, Error> {
    let graph = problem.graph()?;
    let syndrome = Syndrome::checked(&graph, syndrome.iter().copied())?;
    let mut config = DecoderConfig::default().with_limit(cluster_limit);
    if let Some(names) = finders {
        config.finders = names
            .iter()
            .map(|n| n.parse::<FinderKind>())
            .collect::<Result<_, _>>()?;
    }
    let cert: Certificate = decode(&graph, &syndrome, &config)?;
    Ok(ApiDecodeResult {
        pattern: cert.pattern.edges().to_vec(),
        primal: to_pair(&cert.primal_weight),
        dual: to_pair(&cert.dual_objective),
        gap: to_pair(&cert.gap),
        certified: cert.certified_optimal,
    })
}

pub fn api_oracle(problem: &ApiProblem, syndrome: &[VertexIndex], cap: usize) -> Result<(Vec<usize>, Rational), Error> {
    let graph = problem.graph()?;
    let syndrome = Syndrome::checked(&graph, syndrome.iter().copied())?;
    let pre = crate::hypergraph::preprocess_negative_weights(&graph, &syndrome);
    let (pattern, weight) = brute_force_mwpf(&pre.graph, &pre.syndrome, cap)?;
    Ok((
        pre.postprocess(&pattern).edges().to_vec(),
        to_pair(&(weight + &pre.offset)),
    ))
}

pub fn api_verify(
    problem: &ApiProblem,
    syndrome: &[VertexIndex],
    certificate_json: &str,
) -> Result<VerificationReport, Error> {
    let graph = problem.graph()?;
    let syndrome = Syndrome::checked(&graph, syndrome.iter().copied())?;
    let cert = crate::io::parse_certificate(certificate_json, &graph)?;
    Ok(verify_certificate(&graph, &syndrome, &cert))
}
