//! Code-capacity decoding graphs for the repetition code and the rotated
//! surface code.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::hypergraph::DecodingHypergraph;
use crate::parity::nullity;
use crate::weight::{Weight, DEFAULT_LOG_BITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodeKind {
    /// bit-flip errors on a distance-`d` repetition code
    Repetition,
    /// X errors seen by the Z checks of the rotated surface code
    SurfaceBitflip,
    /// Y errors seen by every check of the rotated surface code
    SurfaceBiasedY,
}

impl CodeKind {
    pub fn name(self) -> &'static str {
        match self {
            CodeKind::Repetition => "repetition",
            CodeKind::SurfaceBitflip => "surface-bitflip",
            CodeKind::SurfaceBiasedY => "surface-biased-y",
        }
    }
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CodeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "repetition" | "rep" => Ok(CodeKind::Repetition),
            "surface-bitflip" | "bitflip" => Ok(CodeKind::SurfaceBitflip),
            "surface-biased-y" | "surface-biasedy" | "biased-y" => Ok(CodeKind::SurfaceBiasedY),
            _ => Err(Error::Parse(format!("unknown code `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightPolicy {
    Uniform(Weight),
    /// `ln((1 - p) / p)` for every edge
    Probability(Weight),
}

impl WeightPolicy {
    fn weight(&self) -> Result<Weight, Error> {
        match self {
            WeightPolicy::Uniform(w) => Ok(w.clone()),
            WeightPolicy::Probability(p) => Weight::from_probability(p, DEFAULT_LOG_BITS),
        }
    }
}

/// Builds the decoding graph; `d` must be odd and at least 3.
pub fn generate_code(kind: CodeKind, d: usize, policy: &WeightPolicy) -> Result<DecodingHypergraph, Error> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(Error::Parse(format!("distance must be odd and at least 3, got {d}")));
    }
    let weight = policy.weight()?;
    let supports = match kind {
        CodeKind::Repetition => (0..d)
            .map(|q| match q {
                0 => vec![0],
                q if q == d - 1 => vec![d - 2],
                q => vec![q - 1, q],
            })
            .collect(),
        CodeKind::SurfaceBitflip => qubit_supports(d, false),
        CodeKind::SurfaceBiasedY => qubit_supports(d, true),
    };
    let vertex_count = match kind {
        CodeKind::Repetition => d - 1,
        CodeKind::SurfaceBitflip => (d * d - 1) / 2,
        CodeKind::SurfaceBiasedY => d * d - 1,
    };
    let graph = DecodingHypergraph::new(
        vertex_count,
        supports.into_iter().map(|s| (s, weight.clone())).collect(),
    )?;
    if kind == CodeKind::SurfaceBiasedY {
        let all_vertices: Vec<_> = (0..graph.vertex_count()).collect();
        let all_edges: Vec<_> = (0..graph.edge_count()).collect();
        let n = nullity(&graph, &all_vertices, &all_edges)?;
        if n != 1 {
            return Err(Error::Internal(format!("biased-Y graph has nullity {n}, expected 1")));
        }
    }
    Ok(graph)
}

/// Rotated-surface-code stabilizers as `(row, col)` plaquette corners in
/// `0..=d`, covering the data qubits `(row-1..=row, col-1..=col)`.
/// `(row + col)` even is a Z check.
fn plaquettes(d: usize) -> Vec<(usize, usize, bool)> {
    let mut out = Vec::new();
    for r in 0..=d {
        for c in 0..=d {
            let is_z = (r + c) % 2 == 0;
            let bulk = (1..d).contains(&r) && (1..d).contains(&c);
            let z_boundary = is_z && (r == 0 || r == d) && (1..d).contains(&c);
            let x_boundary = !is_z && (c == 0 || c == d) && (1..d).contains(&r);
            if bulk || z_boundary || x_boundary {
                out.push((r, c, is_z));
            }
        }
    }
    out
}

/// For every data qubit in row-major order, the ids of the checks that
/// detect its error. Checks are numbered in row-major plaquette order.
fn qubit_supports(d: usize, both_types: bool) -> Vec<Vec<usize>> {
    let checks: Vec<(usize, usize)> = plaquettes(d)
        .into_iter()
        .filter(|&(_, _, is_z)| both_types || is_z)
        .map(|(r, c, _)| (r, c))
        .collect();
    let mut supports = vec![Vec::new(); d * d];
    for (id, &(r, c)) in checks.iter().enumerate() {
        for qr in r.saturating_sub(1)..=r.min(d - 1) {
            for qc in c.saturating_sub(1)..=c.min(d - 1) {
                supports[qr * d + qc].push(id);
            }
        }
    }
    supports
}
