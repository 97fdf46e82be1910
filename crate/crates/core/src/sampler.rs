//! Reproducible code-capacity error sampling.
//!
//! The stream is SplitMix64 seeded with the user seed. Each shot consumes
//! one 64-bit word per edge, in edge order; an edge is included when the
//! word `u` satisfies `u * den < num * 2^64` for `p = num / den`.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::Error;
use crate::hypergraph::{defects_of, DecodingHypergraph, ErrorPattern, Syndrome};
use crate::weight::Weight;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shot {
    pub pattern: ErrorPattern,
    pub syndrome: Syndrome,
}

/// Exact Bernoulli(`num / den`) from uniform 64-bit words.
#[derive(Debug, Clone)]
enum Threshold {
    Small { num: u128, den: u128 },
    Big { num: BigUint, den: BigUint },
}

impl Threshold {
    fn new(p: &Weight) -> Result<Self, Error> {
        if p.is_negative() || p > &Weight::one() {
            return Err(Error::ProbabilityOutOfRange(p.to_string()));
        }
        let num = p.numerator().magnitude().clone();
        let den = p.denominator().magnitude().clone();
        Ok(match (num.to_u64(), den.to_u64()) {
            (Some(n), Some(d)) => Threshold::Small {
                num: (n as u128) << 64,
                den: d as u128,
            },
            _ => Threshold::Big { num: num << 64, den },
        })
    }

    fn accept(&self, u: u64) -> bool {
        match self {
            // both factors are below 2^64
            Threshold::Small { num, den } => (u as u128) * den < *num,
            Threshold::Big { num, den } => BigUint::from(u) * den < *num,
        }
    }
}

pub fn sample_syndromes(graph: &DecodingHypergraph, p: &Weight, shots: usize, seed: u64) -> Result<Vec<Shot>, Error> {
    let threshold = Threshold::new(p)?;
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut out = Vec::with_capacity(shots);
    for _ in 0..shots {
        let pattern = ErrorPattern::new((0..graph.edge_count()).filter(|_| threshold.accept(rng.next_u64())));
        let syndrome = defects_of(graph, &pattern)?;
        out.push(Shot { pattern, syndrome });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn splitmix_reference_stream() {
        let mut rng = SplitMix64::seed_from_u64(1234567);
        let words: Vec<u64> = (0..5).map(|_| rng.next_u64()).collect();
        assert_eq!(
            words,
            [
                6457827717110365317,
                3203168211198807973,
                9817491932198370423,
                4593380528125082431,
                16408922859458223821
            ]
        );
    }

    #[test]
    fn extreme_probabilities() {
        let f1 = fixtures::f1();
        for shot in sample_syndromes(&f1, &Weight::zero(), 50, 7).unwrap() {
            assert!(shot.pattern.is_empty() && shot.syndrome.is_empty());
        }
        for shot in sample_syndromes(&f1, &Weight::one(), 50, 7).unwrap() {
            assert_eq!(shot.pattern.edges(), &[0, 1, 2]);
            assert_eq!(shot.syndrome.defects(), &[3]);
        }
        assert!(sample_syndromes(&f1, &Weight::new(3, 2), 1, 0).is_err());
    }

    #[test]
    fn deterministic_streams() {
        let f1 = fixtures::f1();
        let p = Weight::new(1, 3);
        let a = sample_syndromes(&f1, &p, 100, 99).unwrap();
        let b = sample_syndromes(&f1, &p, 100, 99).unwrap();
        let c = sample_syndromes(&f1, &p, 100, 100).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn big_threshold_agrees_with_small() {
        let small = Threshold::new(&Weight::new(1, 3)).unwrap();
        let big = Threshold::Big {
            num: BigUint::from(1u32) << 64,
            den: BigUint::from(3u32),
        };
        let mut rng = SplitMix64::seed_from_u64(5);
        for _ in 0..1000 {
            let u = rng.next_u64();
            assert_eq!(small.accept(u), big.accept(u));
        }
        assert!(small.accept(0) && !small.accept(u64::MAX));
    }
}
