//! Acyclic orientations of a cycle and oriented-copy counting.

use super::MAX_CYCLE_VERTICES;
use crate::graph::{derive_seed, Graph, OrientedGraph};
use crate::patterns::VertexOrdering;
use crate::{Error, Result, Vertex};
use serde::{Deserialize, Serialize};

/// An orientation of the cycle on positions `0..ell`, encoded one bit per
/// edge: bit `i` covers the edge `{i, (i+1) mod ell}` and is set when the
/// arc runs `i → i+1` (with the cycle order). The two constant words are
/// the directed cycles and are rejected; everything else is acyclic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AcyclicCycleOrientation {
    ell: usize,
    bits: u32,
}

impl AcyclicCycleOrientation {
    pub fn new(ell: usize, bits: u32) -> Result<Self> {
        if !(3..=MAX_CYCLE_VERTICES).contains(&ell) {
            return Err(Error::invalid(format!(
                "cycle length {ell} outside 3..={MAX_CYCLE_VERTICES}"
            )));
        }
        let all = (1u32 << ell) - 1;
        if bits > all {
            return Err(Error::invalid("orientation word wider than the cycle"));
        }
        if bits == 0 || bits == all {
            return Err(Error::invalid(
                "constant orientation is a directed cycle, not acyclic",
            ));
        }
        Ok(AcyclicCycleOrientation { ell, bits })
    }

    /// The orientation induced by a linear order on positions: each edge
    /// runs from its earlier endpoint to its later one. Always acyclic.
    pub fn from_ordering(sigma: &VertexOrdering) -> Result<Self> {
        let ell = sigma.n();
        let mut bits = 0u32;
        for i in 0..ell {
            if sigma.rank(i) < sigma.rank((i + 1) % ell) {
                bits |= 1 << i;
            }
        }
        AcyclicCycleOrientation::new(ell, bits)
    }

    /// All `2^ell − 2` acyclic orientations, in ascending word order.
    pub fn enumerate(ell: usize) -> Result<Vec<Self>> {
        let all = 1u32
            .checked_shl(ell as u32)
            .ok_or_else(|| Error::invalid("cycle length too large"))?
            - 1;
        (1..all).map(|bits| AcyclicCycleOrientation::new(ell, bits)).collect()
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// True when the edge `{i, i+1}` is directed with the cycle order.
    pub fn forward(&self, i: usize) -> bool {
        self.bits >> (i % self.ell) & 1 == 1
    }

    /// Arcs as `(tail, head)` position pairs.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.ell)
            .map(|i| {
                let j = (i + 1) % self.ell;
                if self.forward(i) { (i, j) } else { (j, i) }
            })
            .collect()
    }

    /// The orientation as a digraph on `0..ell`.
    pub fn to_digraph(&self) -> OrientedGraph {
        let arcs = self.arcs();
        OrientedGraph::from_arcs(self.ell, &arcs).expect("cycle arcs are simple")
    }
}

/// Exact number of injective homomorphisms of the oriented cycle pattern
/// into `d`: maps from positions to distinct vertices such that every
/// pattern arc is an arc of `d` in the same direction.
pub fn count_orientation_copies(d: &OrientedGraph, pattern: &AcyclicCycleOrientation) -> u64 {
    let mut count = 0u64;
    walk_orientation_copies(d, pattern, &mut |_| {
        count += 1;
        true
    });
    count
}

/// First copy of the pattern (in DFS order) accepted by the predicate.
pub fn find_orientation_copy(
    d: &OrientedGraph,
    pattern: &AcyclicCycleOrientation,
    mut accept: impl FnMut(&[Vertex]) -> bool,
) -> Option<Vec<Vertex>> {
    let mut found = None;
    walk_orientation_copies(d, pattern, &mut |image| {
        if accept(image) {
            found = Some(image.to_vec());
            false
        } else {
            true
        }
    });
    found
}

/// Visits every injective copy of the pattern; the visitor returns
/// `false` to stop the walk.
fn walk_orientation_copies(
    d: &OrientedGraph,
    pattern: &AcyclicCycleOrientation,
    visit: &mut impl FnMut(&[Vertex]) -> bool,
) {
    let ell = pattern.ell();
    if d.n() < ell {
        return;
    }
    let mut used = vec![false; d.n()];
    let mut image = Vec::with_capacity(ell);
    for v in 0..d.n() {
        image.push(v);
        used[v] = true;
        let keep_going = extend_oriented(d, pattern, &mut image, &mut used, visit);
        used[v] = false;
        image.pop();
        if !keep_going {
            return;
        }
    }
}

fn extend_oriented(
    d: &OrientedGraph,
    pattern: &AcyclicCycleOrientation,
    image: &mut Vec<Vertex>,
    used: &mut [bool],
    visit: &mut impl FnMut(&[Vertex]) -> bool,
) -> bool {
    let ell = pattern.ell();
    let placed = image.len();
    if placed == ell {
        let closing_ok = if pattern.forward(ell - 1) {
            d.has_arc(image[ell - 1], image[0])
        } else {
            d.has_arc(image[0], image[ell - 1])
        };
        return !closing_ok || visit(image);
    }
    let prev = image[placed - 1];
    let candidates: Vec<Vertex> = if pattern.forward(placed - 1) {
        d.out_neighbors(prev).collect()
    } else {
        d.in_neighbors(prev).collect()
    };
    for w in candidates {
        if used[w] {
            continue;
        }
        image.push(w);
        used[w] = true;
        let keep_going = extend_oriented(d, pattern, image, used, visit);
        used[w] = false;
        image.pop();
        if !keep_going {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrientationSearchMode {
    /// Every orientation of the host was evaluated; the minimum is exact.
    Exhaustive,
    /// Seeded random restarts with arc-flip descent; the reported value
    /// is an upper bound on the true minimum.
    Heuristic { restarts: u32 },
}

/// Result of minimising, over orientations `D` of a host graph, the
/// scarcest acyclic `C_ell` pattern count in `D`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrientationPropertyReport {
    pub ell: usize,
    /// `min_D min_pattern #copies`; exact in exhaustive mode, otherwise
    /// the best (smallest) value the descent reached.
    pub min_count: u64,
    /// An orientation attaining `min_count`.
    pub witness: OrientedGraph,
    pub mode: OrientationSearchMode,
    pub patterns_considered: usize,
}

/// Edge count up to which every orientation is enumerated exactly.
pub const MAX_EXHAUSTIVE_ORIENTATION_EDGES: usize = 20;

/// Estimates how well `g` supports oriented `C_ell` copies under
/// adversarial orientation: the minimum over orientations of the count of
/// the scarcest acyclic pattern. Exhaustive for hosts with at most
/// [`MAX_EXHAUSTIVE_ORIENTATION_EDGES`] edges, otherwise seeded restarts
/// with single-arc-flip descent.
pub fn orientation_property_estimate(
    g: &Graph,
    ell: usize,
    restarts: u32,
) -> Result<OrientationPropertyReport> {
    let patterns = AcyclicCycleOrientation::enumerate(ell)?;
    let m = g.m();
    if m >= 64 {
        return Err(Error::cap(format!("host has {m} edges; orientation words use 64 bits")));
    }
    let worst = |mask: u64| -> u64 {
        let d = orient_by_mask(g, mask);
        patterns
            .iter()
            .map(|p| count_orientation_copies(&d, p))
            .min()
            .expect("at least one pattern")
    };

    if m <= MAX_EXHAUSTIVE_ORIENTATION_EDGES {
        let mut best_mask = 0u64;
        let mut best = u64::MAX;
        for mask in 0..1u64 << m {
            let value = worst(mask);
            if value < best {
                best = value;
                best_mask = mask;
            }
        }
        return Ok(OrientationPropertyReport {
            ell,
            min_count: best,
            witness: orient_by_mask(g, best_mask),
            mode: OrientationSearchMode::Exhaustive,
            patterns_considered: patterns.len(),
        });
    }

    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(derive_seed(
        g.edge_set_hash(),
        &[ell as u64, restarts as u64],
    ));
    let mut best_mask = 0u64;
    let mut best = u64::MAX;
    for _ in 0..restarts.max(1) {
        let mut mask: u64 = rng.gen::<u64>() & ((1u64 << m) - 1);
        let mut value = worst(mask);
        // First-improvement arc-flip descent.
        loop {
            let mut improved = false;
            for e in 0..m {
                let flipped = mask ^ (1 << e);
                let fv = worst(flipped);
                if fv < value {
                    mask = flipped;
                    value = fv;
                    improved = true;
                    break;
                }
            }
            if !improved {
                break;
            }
        }
        if value < best {
            best = value;
            best_mask = mask;
        }
    }
    Ok(OrientationPropertyReport {
        ell,
        min_count: best,
        witness: orient_by_mask(g, best_mask),
        mode: OrientationSearchMode::Heuristic { restarts: restarts.max(1) },
        patterns_considered: patterns.len(),
    })
}

/// Orientation encoded against the sorted edge list: bit `e` set sends
/// edge `e` from its smaller endpoint to its larger one.
fn orient_by_mask(g: &Graph, mask: u64) -> OrientedGraph {
    let mut idx = 0;
    OrientedGraph::orient(g, |_, _| {
        let towards_larger = mask >> idx & 1 == 1;
        idx += 1;
        towards_larger
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{sample_gnp, GnpSpec};
    use itertools::Itertools;

    /// Brute-force oriented-copy count: all injective position tuples.
    fn oracle_count(d: &OrientedGraph, pattern: &AcyclicCycleOrientation) -> u64 {
        let ell = pattern.ell();
        (0..d.n())
            .permutations(ell)
            .filter(|img| {
                (0..ell).all(|i| {
                    let j = (i + 1) % ell;
                    if pattern.forward(i) {
                        d.has_arc(img[i], img[j])
                    } else {
                        d.has_arc(img[j], img[i])
                    }
                })
            })
            .count() as u64
    }

    fn transitive_k4() -> OrientedGraph {
        OrientedGraph::orient(&Graph::complete(4), |_, _| true)
    }

    #[test]
    fn enumerate_sizes() {
        assert_eq!(AcyclicCycleOrientation::enumerate(4).unwrap().len(), 14);
        assert_eq!(AcyclicCycleOrientation::enumerate(6).unwrap().len(), 62);
        assert!(AcyclicCycleOrientation::new(4, 0).is_err());
        assert!(AcyclicCycleOrientation::new(4, 0b1111).is_err());
        assert!(AcyclicCycleOrientation::new(4, 0b10000).is_err());
    }

    #[test]
    fn every_pattern_is_acyclic() {
        for pattern in AcyclicCycleOrientation::enumerate(6).unwrap() {
            assert!(
                pattern.to_digraph().topological_order().is_some(),
                "bits {:#b}",
                pattern.bits()
            );
        }
    }

    #[test]
    fn ordering_induces_expected_bits() {
        let sigma = VertexOrdering::identity(4);
        let o = AcyclicCycleOrientation::from_ordering(&sigma).unwrap();
        assert_eq!(o.bits(), 0b0111);
        let rev = VertexOrdering::from_order(&[3, 2, 1, 0]).unwrap();
        assert_eq!(AcyclicCycleOrientation::from_ordering(&rev).unwrap().bits(), 0b1000);
    }

    #[test]
    fn transitive_k4_pattern_counts() {
        let d = transitive_k4();
        // Alternating pattern (two sources, two sinks): arcs 0→1, 2→1,
        // 2→3, 0→3. Its poset has 4 linear extensions, hence 4 copies in
        // a 4-vertex transitive tournament.
        let alternating = AcyclicCycleOrientation::new(4, 0b0101).unwrap();
        assert_eq!(count_orientation_copies(&d, &alternating), 4);
        assert_eq!(oracle_count(&d, &alternating), 4);
        // Chain pattern (one source, one sink): total order, 1 copy.
        let chain = AcyclicCycleOrientation::new(4, 0b0111).unwrap();
        assert_eq!(count_orientation_copies(&d, &chain), 1);
        assert_eq!(oracle_count(&d, &chain), 1);
    }

    #[test]
    fn transitive_k4_total_over_patterns_is_all_labelled_copies() {
        // A transitive host orients every C_4 copy acyclically, so the
        // pattern counts partition the 24 labelled copies of C_4 in K_4.
        let d = transitive_k4();
        let total: u64 = AcyclicCycleOrientation::enumerate(4)
            .unwrap()
            .iter()
            .map(|p| count_orientation_copies(&d, p))
            .sum();
        assert_eq!(total, 24);
    }

    #[test]
    fn orientation_histogram_matches_oracle_on_k4() {
        // For every orientation of K_4: classify all injective 4-tuples
        // by induced word and compare with the library counts; acyclic
        // plus cyclic words must account for all 24 labelled copies.
        let g = Graph::complete(4);
        let patterns = AcyclicCycleOrientation::enumerate(4).unwrap();
        for mask in 0..1u64 << 6 {
            let d = orient_by_mask(&g, mask);
            let mut histogram = [0u64; 16];
            for img in (0..4).permutations(4) {
                let mut bits = 0u32;
                let ok = (0..4).all(|i| {
                    let (a, b) = (img[i], img[(i + 1) % 4]);
                    if d.has_arc(a, b) {
                        bits |= 1 << i;
                        true
                    } else {
                        d.has_arc(b, a)
                    }
                });
                if ok {
                    histogram[bits as usize] += 1;
                }
            }
            let mut acyclic_total = 0u64;
            for p in &patterns {
                let c = count_orientation_copies(&d, p);
                assert_eq!(c, histogram[p.bits() as usize], "mask {mask:#b} bits {:#b}", p.bits());
                acyclic_total += c;
            }
            let cyclic = histogram[0] + histogram[0b1111];
            assert_eq!(acyclic_total + cyclic, 24, "mask {mask:#b}");
        }
    }

    #[test]
    fn counts_match_oracle_on_random_digraph() {
        let g = sample_gnp(&GnpSpec::new(7, 0.6, 31)).unwrap();
        let d = orient_by_mask(&g, 0b1011001101110_u64 & ((1 << g.m()) - 1));
        for p in AcyclicCycleOrientation::enumerate(4).unwrap() {
            assert_eq!(count_orientation_copies(&d, &p), oracle_count(&d, &p));
        }
        for p in AcyclicCycleOrientation::enumerate(6).unwrap().iter().step_by(7) {
            assert_eq!(count_orientation_copies(&d, p), oracle_count(&d, p));
        }
    }

    #[test]
    fn k4_orientation_property_exact() {
        let report = orientation_property_estimate(&Graph::complete(4), 4, 5).unwrap();
        assert_eq!(report.mode, OrientationSearchMode::Exhaustive);
        assert_eq!(report.patterns_considered, 14);
        // Oracle: recompute the exact minimum from scratch.
        let patterns = AcyclicCycleOrientation::enumerate(4).unwrap();
        let oracle = (0..1u64 << 6)
            .map(|mask| {
                let d = orient_by_mask(&Graph::complete(4), mask);
                patterns.iter().map(|p| oracle_count(&d, p)).min().unwrap()
            })
            .min()
            .unwrap();
        assert_eq!(report.min_count, oracle);
        // The witness really attains the reported value.
        let attained = patterns
            .iter()
            .map(|p| count_orientation_copies(&report.witness, p))
            .min()
            .unwrap();
        assert_eq!(attained, report.min_count);
    }

    #[test]
    fn heuristic_mode_is_deterministic_and_attained() {
        let g = sample_gnp(&GnpSpec::new(10, 0.55, 77)).unwrap();
        assert!(g.m() > MAX_EXHAUSTIVE_ORIENTATION_EDGES, "need heuristic regime, m = {}", g.m());
        let r1 = orientation_property_estimate(&g, 4, 3).unwrap();
        let r2 = orientation_property_estimate(&g, 4, 3).unwrap();
        assert_eq!(r1.min_count, r2.min_count);
        assert_eq!(r1.witness.arcs(), r2.witness.arcs());
        assert_eq!(r1.mode, OrientationSearchMode::Heuristic { restarts: 3 });
        let attained = AcyclicCycleOrientation::enumerate(4)
            .unwrap()
            .iter()
            .map(|p| count_orientation_copies(&r1.witness, p))
            .min()
            .unwrap();
        assert_eq!(attained, r1.min_count);
    }
}
