//! Binomial random graph sampling with a pinned determinism contract.

use super::Graph;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

/// Parameters for one `G(n,p)` sample.
///
/// The sampling contract: a `ChaCha12` stream seeded with `seed`, one
/// `f64` draw per vertex pair, pairs visited in lexicographic order
/// `(0,1), (0,2), …, (0,n-1), (1,2), …`; the pair becomes an edge iff
/// `draw < p`. ChaCha12's output stream is stable across releases of the
/// `rand_chacha` crate, so equal specs give equal graphs on every platform
/// this crate builds on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GnpSpec {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

impl GnpSpec {
    pub fn new(n: usize, p: f64, seed: u64) -> Self {
        GnpSpec { n, p, seed }
    }

    pub fn sample(&self) -> Result<Graph> {
        sample_gnp(self)
    }
}

/// Samples `G(n,p)` under the contract documented on [`GnpSpec`].
pub fn sample_gnp(spec: &GnpSpec) -> Result<Graph> {
    if !(spec.p >= 0.0 && spec.p <= 1.0) {
        return Err(Error::invalid(format!(
            "edge probability {} outside [0,1]",
            spec.p
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
    let mut g = Graph::empty(spec.n);
    for u in 0..spec.n {
        for v in u + 1..spec.n {
            // Exactly one draw per pair, even for p ∈ {0,1}, so edge sets
            // for different p are coupled through the same uniform stream.
            if rng.gen::<f64>() < spec.p {
                g.add_edge(u, v);
            }
        }
    }
    Ok(g)
}

/// Derives a per-trial seed from a master seed and a context path
/// (e.g. `[n, p_index, adversary_id, trial]`). SplitMix64-style mixing:
/// stable across platforms, and distant contexts give unrelated streams.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    let mut h = master ^ 0x9e3779b97f4a7c15;
    for &x in path {
        h = mix64(h.rotate_left(23) ^ x.wrapping_mul(0xbf58476d1ce4e5b9));
    }
    mix64(h)
}

fn mix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58476d1ce4e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extreme_probabilities() {
        let empty = sample_gnp(&GnpSpec::new(20, 0.0, 7)).unwrap();
        assert_eq!(empty.m(), 0);
        let full = sample_gnp(&GnpSpec::new(20, 1.0, 7)).unwrap();
        assert_eq!(full.m(), 20 * 19 / 2);
    }

    #[test]
    fn rejects_bad_probability() {
        assert!(sample_gnp(&GnpSpec::new(5, 1.5, 0)).is_err());
        assert!(sample_gnp(&GnpSpec::new(5, f64::NAN, 0)).is_err());
    }

    #[test]
    fn same_seed_same_graph_different_seed_different_graph() {
        let a = sample_gnp(&GnpSpec::new(100, 0.3, 42)).unwrap();
        let b = sample_gnp(&GnpSpec::new(100, 0.3, 42)).unwrap();
        let c = sample_gnp(&GnpSpec::new(100, 0.3, 43)).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert_ne!(a.edges(), c.edges());
    }

    #[test]
    fn golden_edge_set_hash_pins_the_stream() {
        // Frozen after the first implementation run; a change here means the
        // sampling contract broke.
        let g = sample_gnp(&GnpSpec::new(50, 0.2, 12345)).unwrap();
        assert_eq!(g.edge_set_hash(), GOLDEN_HASH_50_02_12345);
    }

    // Set by the determinism audit; see tests/sampling_contract.rs for the
    // cross-check that an independent re-walk of the pair stream produces
    // the same edge set.
    const GOLDEN_HASH_50_02_12345: u64 = 7942701467526072940;

    #[test]
    fn derive_seed_is_order_sensitive() {
        let a = derive_seed(1, &[2, 3]);
        let b = derive_seed(1, &[3, 2]);
        assert_ne!(a, b);
        assert_eq!(derive_seed(1, &[2, 3]), a);
    }

    #[test]
    fn coupling_monotone_in_p() {
        // Same seed, larger p ⇒ superset of edges (one draw per pair).
        let lo = sample_gnp(&GnpSpec::new(60, 0.1, 9)).unwrap();
        let hi = sample_gnp(&GnpSpec::new(60, 0.4, 9)).unwrap();
        for &(u, v) in lo.edges() {
            assert!(hi.has_edge(u, v));
        }
    }
}
