//! Tournaments, transitive subtournaments, and embedding oriented
//! cycle patterns into them.

use super::AcyclicCycleOrientation;
use crate::graph::OrientedGraph;
use crate::{Error, Result, Vertex};
use serde::{Deserialize, Serialize};

/// A tournament: exactly one arc between every pair of vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tournament {
    d: OrientedGraph,
}

impl Tournament {
    /// Wraps a digraph, checking the one-arc-per-pair invariant.
    pub fn from_oriented(d: OrientedGraph) -> Result<Self> {
        let expected = d.n() * d.n().saturating_sub(1) / 2;
        if d.arc_count() != expected {
            return Err(Error::invalid(format!(
                "tournament on {} vertices needs {expected} arcs, got {}",
                d.n(),
                d.arc_count()
            )));
        }
        for u in 0..d.n() {
            for v in u + 1..d.n() {
                if d.has_arc(u, v) == d.has_arc(v, u) {
                    return Err(Error::invalid(format!("pair ({u},{v}) not oriented exactly once")));
                }
            }
        }
        Ok(Tournament { d })
    }

    /// The transitive tournament: `u → v` whenever `u < v`.
    pub fn transitive(n: usize) -> Self {
        let mut d = OrientedGraph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                d.add_arc(u, v);
            }
        }
        Tournament { d }
    }

    /// A uniformly random tournament: one seeded draw per pair, pairs in
    /// lexicographic order.
    pub fn random(n: usize, seed: u64) -> Self {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        let mut d = OrientedGraph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen::<bool>() {
                    d.add_arc(u, v);
                } else {
                    d.add_arc(v, u);
                }
            }
        }
        Tournament { d }
    }

    pub fn n(&self) -> usize {
        self.d.n()
    }

    #[inline]
    pub fn has_arc(&self, u: Vertex, v: Vertex) -> bool {
        self.d.has_arc(u, v)
    }

    pub fn out_degree(&self, u: Vertex) -> usize {
        self.d.out_degree(u)
    }

    pub fn as_oriented(&self) -> &OrientedGraph {
        &self.d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransitiveMethod {
    /// Recursive majority-side halving; always succeeds for
    /// `n ≥ 2^{ell−1}`.
    Pigeonhole,
    /// Exhaustive chain search, used when the halving runs out of
    /// vertices; its failures are proofs of absence.
    Exhaustive,
}

/// A transitive subtournament, as a sequence in dominance order: every
/// earlier vertex beats every later one.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransitiveWitness {
    pub sequence: Vec<Vertex>,
    pub method: TransitiveMethod,
}

/// Finds a transitive subtournament on `ell` vertices. The recursive
/// pigeonhole argument (take the larger side of the smallest remaining
/// vertex, ties towards out-neighbours) is tried first and cannot fail
/// when `t.n() ≥ 2^{ell−1}`; below that threshold an exhaustive search
/// decides, so `None` is a certificate of absence.
pub fn find_transitive_subtournament(t: &Tournament, ell: usize) -> Result<Option<TransitiveWitness>> {
    if ell == 0 {
        return Err(Error::invalid("requested an empty subtournament"));
    }
    let avail: Vec<Vertex> = (0..t.n()).collect();
    if let Some(sequence) = pigeonhole(t, avail, ell) {
        debug_assert!(is_dominance_chain(t, &sequence));
        return Ok(Some(TransitiveWitness {
            sequence,
            method: TransitiveMethod::Pigeonhole,
        }));
    }
    debug_assert!(
        t.n() < 1 << (ell - 1),
        "pigeonhole must succeed at or above the guarantee"
    );
    Ok(exhaustive_chain(t, ell).map(|sequence| TransitiveWitness {
        sequence,
        method: TransitiveMethod::Exhaustive,
    }))
}

fn pigeonhole(t: &Tournament, avail: Vec<Vertex>, ell: usize) -> Option<Vec<Vertex>> {
    if ell == 0 {
        return Some(Vec::new());
    }
    let (&v, rest) = avail.split_first()?;
    let (outs, ins): (Vec<Vertex>, Vec<Vertex>) =
        rest.iter().partition(|&&w| t.has_arc(v, w));
    let take_outs = outs.len() >= ins.len();
    let side = if take_outs { outs } else { ins };
    let mut sequence = pigeonhole(t, side, ell - 1)?;
    if take_outs {
        sequence.insert(0, v);
    } else {
        sequence.push(v);
    }
    Some(sequence)
}

/// Lexicographically-first dominance chain of length `ell`, or `None`.
fn exhaustive_chain(t: &Tournament, ell: usize) -> Option<Vec<Vertex>> {
    let mut chain = Vec::with_capacity(ell);
    let all: Vec<Vertex> = (0..t.n()).collect();
    extend_chain(t, &mut chain, &all, ell).then_some(chain)
}

fn extend_chain(t: &Tournament, chain: &mut Vec<Vertex>, candidates: &[Vertex], ell: usize) -> bool {
    if chain.len() == ell {
        return true;
    }
    for &w in candidates {
        chain.push(w);
        let next: Vec<Vertex> = candidates
            .iter()
            .copied()
            .filter(|&x| t.has_arc(w, x))
            .collect();
        if extend_chain(t, chain, &next, ell) {
            return true;
        }
        chain.pop();
    }
    false
}

fn is_dominance_chain(t: &Tournament, seq: &[Vertex]) -> bool {
    seq.iter()
        .enumerate()
        .all(|(i, &u)| seq[i + 1..].iter().all(|&v| t.has_arc(u, v)))
}

/// Embeds an oriented cycle pattern into a dominance chain (earlier
/// beats later): position `i` of the pattern maps to
/// `chain[topological rank of i]`, so every pattern arc runs from an
/// earlier chain vertex to a later one. Returns the image indexed by
/// cycle position.
pub fn embed_acyclic_cycle_in_transitive(
    pattern: &AcyclicCycleOrientation,
    chain: &[Vertex],
) -> Result<Vec<Vertex>> {
    let ell = pattern.ell();
    if chain.len() != ell {
        return Err(Error::invalid(format!(
            "chain length {} does not match cycle length {ell}",
            chain.len()
        )));
    }
    let order = pattern
        .to_digraph()
        .topological_order()
        .expect("cycle orientations are acyclic by construction");
    let mut image = vec![0; ell];
    for (slot, &position) in order.iter().enumerate() {
        image[position] = chain[slot];
    }
    Ok(image)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transitive_tournament_shape() {
        let t = Tournament::transitive(5);
        assert!(t.has_arc(0, 4) && !t.has_arc(4, 0));
        let degrees: Vec<usize> = (0..5).map(|v| t.out_degree(v)).collect();
        assert_eq!(degrees, vec![4, 3, 2, 1, 0]);
    }

    #[test]
    fn from_oriented_validates() {
        let incomplete = OrientedGraph::from_arcs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(Tournament::from_oriented(incomplete).is_err());
        let triangle = OrientedGraph::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(Tournament::from_oriented(triangle).is_ok());
    }

    #[test]
    fn random_tournament_is_seed_deterministic() {
        let a = Tournament::random(9, 42);
        let b = Tournament::random(9, 42);
        let c = Tournament::random(9, 43);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn pigeonhole_on_every_four_vertex_tournament() {
        // n = 4 = 2^{3−1}: the guarantee holds for ell = 3, so all 64
        // tournaments must yield a chain via the pigeonhole route.
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for mask in 0..1u32 << 6 {
            let mut d = OrientedGraph::empty(4);
            for (i, &(u, v)) in pairs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    d.add_arc(u, v);
                } else {
                    d.add_arc(v, u);
                }
            }
            let t = Tournament::from_oriented(d).unwrap();
            let witness = find_transitive_subtournament(&t, 3).unwrap().unwrap();
            assert_eq!(witness.method, TransitiveMethod::Pigeonhole, "mask {mask:#b}");
            assert!(is_dominance_chain(&t, &witness.sequence));
            assert_eq!(witness.sequence.len(), 3);
        }
    }

    #[test]
    fn pigeonhole_on_random_eight_vertex_tournaments() {
        // n = 8 = 2^{4−1} meets the guarantee for ell = 4.
        for seed in 0..10_000u64 {
            let t = Tournament::random(8, seed);
            let witness = find_transitive_subtournament(&t, 4).unwrap().unwrap();
            assert_eq!(witness.method, TransitiveMethod::Pigeonhole, "seed {seed}");
            assert!(is_dominance_chain(&t, &witness.sequence), "seed {seed}");
        }
    }

    #[test]
    fn directed_triangle_has_no_transitive_triple() {
        let d = OrientedGraph::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let t = Tournament::from_oriented(d).unwrap();
        assert!(find_transitive_subtournament(&t, 3).unwrap().is_none());
        // Pairs are still fine.
        let pair = find_transitive_subtournament(&t, 2).unwrap().unwrap();
        assert!(is_dominance_chain(&t, &pair.sequence));
    }

    #[test]
    fn transitive_triple_found_below_guarantee() {
        let t = Tournament::transitive(3);
        let witness = find_transitive_subtournament(&t, 3).unwrap().unwrap();
        assert_eq!(witness.sequence, vec![0, 1, 2]);
    }

    #[test]
    fn embedding_realises_every_pattern() {
        for ell in [4usize, 6] {
            let t = Tournament::transitive(ell);
            let chain: Vec<Vertex> = (0..ell).collect();
            for pattern in AcyclicCycleOrientation::enumerate(ell).unwrap() {
                let image = embed_acyclic_cycle_in_transitive(&pattern, &chain).unwrap();
                for (tail, head) in pattern.arcs() {
                    assert!(
                        t.has_arc(image[tail], image[head]),
                        "bits {:#b}, arc {tail}→{head}",
                        pattern.bits()
                    );
                }
                let mut sorted = image.clone();
                sorted.sort_unstable();
                sorted.dedup();
                assert_eq!(sorted.len(), ell, "image must be injective");
            }
        }
    }

    #[test]
    fn embedding_composes_with_subtournament_search() {
        let t = Tournament::random(16, 7);
        let witness = find_transitive_subtournament(&t, 4).unwrap().unwrap();
        for pattern in AcyclicCycleOrientation::enumerate(4).unwrap() {
            let image = embed_acyclic_cycle_in_transitive(&pattern, &witness.sequence).unwrap();
            for (tail, head) in pattern.arcs() {
                assert!(t.has_arc(image[tail], image[head]));
            }
        }
    }

    #[test]
    fn embed_rejects_wrong_chain_length() {
        let pattern = AcyclicCycleOrientation::new(4, 0b0101).unwrap();
        assert!(embed_acyclic_cycle_in_transitive(&pattern, &[0, 1, 2]).is_err());
    }
}
