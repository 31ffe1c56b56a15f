//! Canonical colour patterns: monochromatic, rainbow, and lexicographic.
//!
//! A colouring of a copy of `H` is *lexicographic with respect to an
//! ordering σ* when every edge gets the colour of an injective labelling of
//! its σ-smaller endpoint. On a copy this constrains exactly (a) edges
//! sharing their σ-smaller endpoint (the block's *source*) to share a
//! colour, and (b) distinct blocks to get distinct colours — non-source
//! vertices receive labels unused elsewhere, which is always possible over
//! an unbounded colour alphabet. A lex pattern is therefore identified with
//! the partition of `E(H)` into source blocks; orderings inducing equal
//! partitions are interchangeable, and patterns equivalent under `Aut(H)`
//! are witnessed by the same copies composed with an automorphism.

mod copies;
mod decide;
mod densities;
mod partitions;

pub use copies::{
    find_canonical_copies, first_canonical_copy, validate_witness, CanonicalKind,
    CanonicalWitness, CopyMode, MAX_HOST_VERTICES,
};
pub use decide::{
    check_list_canonical, decide_canarrow, ArrowCounterexample, ArrowStrength, CanArrowReport,
    ListCanonicalReport, MAX_LIST_COLOURINGS,
};
pub use densities::{chromatic_number, m2_density, turan_density};
pub use partitions::{bell_number, enumerate_edge_partitions, EdgePartition};

use crate::graph::Graph;
use crate::{Error, Result, Vertex};
use serde::{Deserialize, Serialize};

/// A total order on the vertices of a host graph `H`, stored as ranks:
/// `rank[v]` is the position of `v` (0 = σ-smallest).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexOrdering {
    rank: Vec<usize>,
}

impl VertexOrdering {
    /// Identity ordering `0 ≺ 1 ≺ …`.
    pub fn identity(n: usize) -> Self {
        VertexOrdering {
            rank: (0..n).collect(),
        }
    }

    /// Builds from the sequence of vertices, σ-smallest first.
    pub fn from_order(order: &[Vertex]) -> Result<Self> {
        let n = order.len();
        let mut rank = vec![usize::MAX; n];
        for (pos, &v) in order.iter().enumerate() {
            if v >= n || rank[v] != usize::MAX {
                return Err(Error::invalid(format!(
                    "order {order:?} is not a permutation of 0..{n}"
                )));
            }
            rank[v] = pos;
        }
        Ok(VertexOrdering { rank })
    }

    pub fn n(&self) -> usize {
        self.rank.len()
    }

    pub fn rank(&self, v: Vertex) -> usize {
        self.rank[v]
    }

    /// The σ-smaller of two vertices.
    pub fn min(&self, u: Vertex, v: Vertex) -> Vertex {
        if self.rank[u] < self.rank[v] {
            u
        } else {
            v
        }
    }

    /// Vertices listed σ-smallest first.
    pub fn as_order(&self) -> Vec<Vertex> {
        let mut order = vec![0; self.rank.len()];
        for (v, &r) in self.rank.iter().enumerate() {
            order[r] = v;
        }
        order
    }
}

/// A lexicographic pattern of `H`: the partition of `E(H)` into blocks of
/// edges sharing their σ-smaller endpoint, together with one representative
/// ordering. Equality and deduplication look only at the block partition
/// (see the module docs for why that is the whole matching constraint).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LexPattern {
    /// Blocks of edge indices into `H.edges()`; each block sorted, blocks
    /// ordered by their first edge. This is the canonical form.
    blocks: Vec<Vec<usize>>,
    /// `block_of[e]` = index into `blocks`.
    block_of: Vec<usize>,
    /// Source vertex of each block under the representative ordering.
    sources: Vec<Vertex>,
    representative: VertexOrdering,
}

impl PartialEq for LexPattern {
    fn eq(&self, other: &Self) -> bool {
        self.blocks == other.blocks
    }
}

impl Eq for LexPattern {}

impl LexPattern {
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of_edge(&self, edge_index: usize) -> usize {
        self.block_of[edge_index]
    }

    /// Source vertices, parallel to [`LexPattern::blocks`].
    pub fn sources(&self) -> &[Vertex] {
        &self.sources
    }

    pub fn representative_ordering(&self) -> &VertexOrdering {
        &self.representative
    }

    /// Applies a vertex bijection of `H` to the pattern (relabelling each
    /// edge block through `h.edge_index`), returning the canonical form.
    fn relabelled(&self, h: &Graph, perm: &[Vertex]) -> Vec<Vec<usize>> {
        let mut blocks: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .map(|block| {
                let mut b: Vec<usize> = block
                    .iter()
                    .map(|&e| {
                        let (u, v) = h.edges()[e];
                        h.edge_index(perm[u], perm[v])
                            .expect("automorphism must preserve edges")
                    })
                    .collect();
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort();
        blocks
    }
}

/// The pattern induced on `H` by ordering `sigma`.
pub fn lex_pattern(h: &Graph, sigma: &VertexOrdering) -> Result<LexPattern> {
    if sigma.n() != h.n() {
        return Err(Error::invalid(format!(
            "ordering on {} vertices for a graph on {}",
            sigma.n(),
            h.n()
        )));
    }
    let mut by_source: std::collections::BTreeMap<Vertex, Vec<usize>> = Default::default();
    for (e, &(u, v)) in h.edges().iter().enumerate() {
        by_source.entry(sigma.min(u, v)).or_default().push(e);
    }
    let mut pairs: Vec<(Vec<usize>, Vertex)> = by_source
        .into_iter()
        .map(|(src, mut block)| {
            block.sort_unstable();
            (block, src)
        })
        .collect();
    pairs.sort();
    let mut block_of = vec![0; h.m()];
    for (i, (block, _)) in pairs.iter().enumerate() {
        for &e in block {
            block_of[e] = i;
        }
    }
    let (blocks, sources): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    Ok(LexPattern {
        blocks,
        block_of,
        sources,
        representative: sigma.clone(),
    })
}

/// All automorphisms of `h` (vertex bijections preserving adjacency), found
/// by backtracking. Intended for small pattern hosts (`v(H) ≤ 12`).
pub fn automorphisms(h: &Graph) -> Vec<Vec<Vertex>> {
    let n = h.n();
    let degs: Vec<usize> = (0..n).map(|v| h.degree(v)).collect();
    let mut result = Vec::new();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        h: &Graph,
        degs: &[usize],
        perm: &mut Vec<Vertex>,
        used: &mut Vec<bool>,
        v: usize,
        result: &mut Vec<Vec<Vertex>>,
    ) {
        let n = h.n();
        if v == n {
            result.push(perm.clone());
            return;
        }
        'cand: for img in 0..n {
            if used[img] || degs[img] != degs[v] {
                continue;
            }
            for w in 0..v {
                if h.has_edge(v, w) != h.has_edge(img, perm[w]) {
                    continue 'cand;
                }
            }
            perm[v] = img;
            used[img] = true;
            rec(h, degs, perm, used, v + 1, result);
            used[img] = false;
            perm[v] = usize::MAX;
        }
    }
    rec(h, &degs, &mut perm, &mut used, 0, &mut result);
    result
}

/// Enumerates the distinct lex patterns of `h` up to `Aut(h)`, each with a
/// canonical representative ordering, sorted by canonical block form.
///
/// For cycles the orderings factor through acyclic orientations (group the
/// edges by tail), so `2^ℓ − 2` orientations replace `ℓ!` orderings; other
/// hosts fall back to enumerating orderings, capped at 9 vertices.
pub fn enumerate_lex_patterns(h: &Graph) -> Result<Vec<LexPattern>> {
    let candidates = if is_cycle(h) {
        cycle_patterns(h)
    } else {
        if h.n() > 9 {
            return Err(Error::cap(format!(
                "lex-pattern enumeration by orderings needs v(H) ≤ 9, got {} (non-cycle host)",
                h.n()
            )));
        }
        ordering_patterns(h)?
    };
    Ok(dedup_up_to_aut(h, candidates))
}

fn is_cycle(h: &Graph) -> bool {
    let n = h.n();
    n >= 3 && h.m() == n && (0..n).all(|v| h.degree(v) == 2) && connected(h)
}

fn connected(h: &Graph) -> bool {
    let n = h.n();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for w in h.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

/// Pattern candidates for a cycle via acyclic orientations. Every ordering
/// induces an acyclic orientation (edges point σ-small → σ-large) and the
/// pattern is that orientation's tail partition; conversely a topological
/// order of an acyclic orientation induces it. The two cyclic orientations
/// are the only non-acyclic ones.
fn cycle_patterns(h: &Graph) -> Vec<LexPattern> {
    let ell = h.n();
    let ring = cycle_vertex_sequence(h);
    let mut out = Vec::new();
    for bits in 1u64..(1u64 << ell) - 1 {
        // Edge j joins ring[j] and ring[j+1]; bit j set ⇒ tail is ring[j].
        let mut d = crate::graph::OrientedGraph::empty(ell);
        for j in 0..ell {
            let a = ring[j];
            let b = ring[(j + 1) % ell];
            if bits >> j & 1 == 1 {
                d.add_arc(a, b);
            } else {
                d.add_arc(b, a);
            }
        }
        let Some(topo) = d.topological_order() else {
            continue; // one of the two cyclic orientations
        };
        let sigma = VertexOrdering::from_order(&topo).expect("topological order is a permutation");
        out.push(lex_pattern(h, &sigma).expect("sizes match"));
    }
    out
}

/// The vertices of a cycle graph in ring order, starting at 0.
fn cycle_vertex_sequence(h: &Graph) -> Vec<Vertex> {
    let mut seq = vec![0];
    let mut prev = usize::MAX;
    while seq.len() < h.n() {
        let cur = *seq.last().unwrap();
        let next = h
            .neighbors(cur)
            .find(|&w| w != prev)
            .expect("2-regular connected");
        seq.push(next);
        prev = cur;
    }
    seq
}

fn ordering_patterns(h: &Graph) -> Result<Vec<LexPattern>> {
    use itertools::Itertools;
    let n = h.n();
    let mut out = Vec::new();
    for order in (0..n).permutations(n) {
        let sigma = VertexOrdering::from_order(&order)?;
        out.push(lex_pattern(h, &sigma)?);
    }
    Ok(out)
}

fn dedup_up_to_aut(h: &Graph, candidates: Vec<LexPattern>) -> Vec<LexPattern> {
    let auts = automorphisms(h);
    let mut chosen: Vec<LexPattern> = Vec::new();
    let mut seen_keys: std::collections::BTreeSet<Vec<Vec<usize>>> = Default::default();
    for pat in candidates {
        // Orbit key: lexicographically least relabelling under Aut(h).
        let orbit_min = auts
            .iter()
            .map(|g| pat.relabelled(h, g))
            .min()
            .expect("identity is always an automorphism");
        if seen_keys.insert(orbit_min.clone()) {
            // Keep the orbit-minimal form as the canonical representative.
            let canonical = if pat.blocks == orbit_min {
                pat
            } else {
                // Push the representative ordering through the minimising
                // automorphism: if σ induces P then g∘σ induces g·P.
                let g = auts
                    .iter()
                    .find(|g| pat.relabelled(h, g) == orbit_min)
                    .expect("minimum came from some automorphism");
                let order: Vec<Vertex> =
                    pat.representative.as_order().iter().map(|&v| g[v]).collect();
                let sigma = VertexOrdering::from_order(&order).expect("bijection");
                lex_pattern(h, &sigma).expect("sizes match")
            };
            debug_assert_eq!(canonical.blocks, orbit_min);
            chosen.push(canonical);
        }
    }
    chosen.sort_by(|a, b| a.blocks.cmp(&b.blocks));
    chosen
}
