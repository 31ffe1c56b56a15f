//! Simple graphs with bitset adjacency, edge colourings, and orientations.

mod gnp;
mod io;
mod oriented;
mod rg;

pub use gnp::{derive_seed, sample_gnp, GnpSpec};
pub use io::{
    read_edge_list, write_coloured_edge_list, write_dot, write_edge_list, LoadedGraph,
};
pub use oriented::OrientedGraph;
pub use rg::{verify_rg_properties, CheckMode, PropertyCheck, RgPropertyReport, RgWitness};

use crate::{Colour, Error, Result, Vertex};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// An undirected simple graph on vertices `0..n`. No loops, no multi-edges.
///
/// Adjacency is kept both as a sorted edge list (for iteration and hashing)
/// and as row bitsets (for O(n/64) neighbourhood intersections, which the
/// subset-heavy verifiers lean on).
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    edges: Vec<(Vertex, Vertex)>,
    degrees: Vec<usize>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        Graph {
            n,
            words,
            adj: vec![0; n * words],
            edges: Vec::new(),
            degrees: vec![0; n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Cycle `C_n` on vertices `0..n` in natural order. Requires `n ≥ 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let mut g = Graph::empty(n);
        for u in 0..n {
            g.add_edge(u, (u + 1) % n);
        }
        g
    }

    /// Path with `n` vertices `0..n` in natural order.
    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 1..n {
            g.add_edge(u - 1, u);
        }
        g
    }

    /// Complete bipartite graph `K_{a,b}`: part `0..a` versus part `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Graph::empty(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edge density relative to all `n(n-1)/2` pairs; 0 for `n < 2`.
    pub fn empirical_density(&self) -> f64 {
        let pairs = self.n * (self.n.saturating_sub(1)) / 2;
        if pairs == 0 {
            0.0
        } else {
            self.m() as f64 / pairs as f64
        }
    }

    /// Adds edge `{u,v}`; returns false if already present. Panics on loops
    /// or out-of-range ids (programmer error — text input goes through
    /// [`Graph::try_add_edge`]).
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        assert!(u != v, "loop at vertex {u}");
        assert!(u < self.n && v < self.n, "edge ({u},{v}) out of range");
        if self.has_edge(u, v) {
            return false;
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.adj[a * self.words + b / WORD] |= 1 << (b % WORD);
        self.adj[b * self.words + a / WORD] |= 1 << (a % WORD);
        self.degrees[a] += 1;
        self.degrees[b] += 1;
        let pos = self.edges.partition_point(|&e| e < (a, b));
        self.edges.insert(pos, (a, b));
        true
    }

    fn try_add_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        if u == v {
            return Err(Error::invalid(format!("loop at vertex {u}")));
        }
        if u >= self.n || v >= self.n {
            return Err(Error::invalid(format!(
                "edge ({u},{v}) out of range for n={}",
                self.n
            )));
        }
        if self.has_edge(u, v) {
            return Err(Error::invalid(format!("duplicate edge ({u},{v})")));
        }
        self.add_edge(u, v);
        Ok(())
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        debug_assert!(u < self.n && v < self.n);
        u != v && self.adj[u * self.words + v / WORD] >> (v % WORD) & 1 == 1
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.degrees[v]
    }

    /// Edges as sorted `(u,v)` pairs with `u < v`.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// Index of edge `{u,v}` in [`Graph::edges`] order, if present.
    pub fn edge_index(&self, u: Vertex, v: Vertex) -> Option<usize> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&key).ok()
    }

    pub fn neighbors(&self, u: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        let row = &self.adj[u * self.words..(u + 1) * self.words];
        row.iter().enumerate().flat_map(|(w, &bits)| {
            let base = w * WORD;
            BitIter(bits).map(move |b| base + b)
        })
    }

    /// Bitset row of `u`'s neighbourhood (length `n.div_ceil(64)`).
    pub fn adjacency_row(&self, u: Vertex) -> &[u64] {
        &self.adj[u * self.words..(u + 1) * self.words]
    }

    /// Builds the bitset mask of a vertex set.
    pub fn mask_of(&self, set: &[Vertex]) -> Vec<u64> {
        let mut mask = vec![0u64; self.words];
        for &v in set {
            assert!(v < self.n, "vertex {v} out of range");
            mask[v / WORD] |= 1 << (v % WORD);
        }
        mask
    }

    /// Number of neighbours of `u` inside `mask`.
    #[inline]
    pub fn degree_into_mask(&self, u: Vertex, mask: &[u64]) -> usize {
        let row = self.adjacency_row(u);
        row.iter()
            .zip(mask)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// e(U): number of edges with both endpoints in `set`.
    pub fn edges_within(&self, set: &[Vertex]) -> u64 {
        let mask = self.mask_of(set);
        let total: usize = set.iter().map(|&u| self.degree_into_mask(u, &mask)).sum();
        debug_assert!(total % 2 == 0);
        (total / 2) as u64
    }

    /// e(U,W): ordered-pair count `|{(u,w) ∈ U×W : uw ∈ E}|`. For disjoint
    /// sets this is the number of crossing edges; each edge inside `U ∩ W`
    /// is counted twice by this convention.
    pub fn edges_between(&self, us: &[Vertex], ws: &[Vertex]) -> u64 {
        let wmask = self.mask_of(ws);
        us.iter()
            .map(|&u| self.degree_into_mask(u, &wmask) as u64)
            .sum()
    }

    /// FNV-1a hash of the sorted edge list (with `n`); the golden-value
    /// anchor for the sampling determinism contract.
    pub fn edge_set_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut absorb = |x: u64| {
            for byte in x.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        absorb(self.n as u64);
        for &(u, v) in &self.edges {
            absorb(u as u64);
            absorb(v as u64);
        }
        h
    }

    /// Induced subgraph on `set` (vertices relabelled to `0..set.len()` in
    /// the order given); returns the relabelling alongside.
    pub fn induced(&self, set: &[Vertex]) -> (Graph, Vec<Vertex>) {
        let mut sub = Graph::empty(set.len());
        for (i, &u) in set.iter().enumerate() {
            for (j, &v) in set.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    sub.add_edge(i, j);
                }
            }
        }
        (sub, set.to_vec())
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.m())
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// An edge-coloured graph: a [`Graph`] plus one colour per edge, stored in
/// parallel with the sorted edge list. Topology is fixed at construction.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColouredGraph {
    graph: Graph,
    colours: Vec<Colour>,
}

impl ColouredGraph {
    /// Colours every edge of `g` by `f(u, v)` (always called with `u < v`).
    pub fn colour_by(g: Graph, mut f: impl FnMut(Vertex, Vertex) -> Colour) -> Self {
        let colours = g.edges.iter().map(|&(u, v)| f(u, v)).collect();
        ColouredGraph { graph: g, colours }
    }

    /// Pairs `g` with a colour vector parallel to `g.edges()`.
    pub fn from_colour_vec(g: Graph, colours: Vec<Colour>) -> Result<Self> {
        if colours.len() != g.m() {
            return Err(Error::invalid(format!(
                "{} colours for {} edges",
                colours.len(),
                g.m()
            )));
        }
        Ok(ColouredGraph { graph: g, colours })
    }

    /// All edges in one colour.
    pub fn monochromatic(g: Graph, c: Colour) -> Self {
        ColouredGraph::colour_by(g, |_, _| c)
    }

    /// Every edge its own colour (in edge-list order).
    pub fn rainbow(g: Graph) -> Self {
        let mut next = 0;
        ColouredGraph::colour_by(g, |_, _| {
            next += 1;
            next - 1
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn m(&self) -> usize {
        self.graph.m()
    }

    pub fn colour(&self, u: Vertex, v: Vertex) -> Option<Colour> {
        self.graph.edge_index(u, v).map(|i| self.colours[i])
    }

    /// Colour of the i-th edge in [`Graph::edges`] order.
    pub fn colour_at(&self, edge_index: usize) -> Colour {
        self.colours[edge_index]
    }

    pub fn set_colour(&mut self, u: Vertex, v: Vertex, c: Colour) -> Result<()> {
        match self.graph.edge_index(u, v) {
            Some(i) => {
                self.colours[i] = c;
                Ok(())
            }
            None => Err(Error::invalid(format!("no edge ({u},{v})"))),
        }
    }

    pub fn colours(&self) -> &[Colour] {
        &self.colours
    }

    /// Distinct colours in use, ascending.
    pub fn palette(&self) -> Vec<Colour> {
        let set: BTreeSet<Colour> = self.colours.iter().copied().collect();
        set.into_iter().collect()
    }

    /// True if no two edges sharing a vertex have equal colour.
    pub fn is_proper_edge_colouring(&self) -> bool {
        let n = self.n();
        let mut seen: Vec<Vec<Colour>> = vec![Vec::new(); n];
        for (i, &(u, v)) in self.graph.edges().iter().enumerate() {
            let c = self.colours[i];
            if seen[u].contains(&c) || seen[v].contains(&c) {
                return false;
            }
            seen[u].push(c);
            seen[v].push(c);
        }
        true
    }

    /// Multiplicity of each colour among edges incident to `v`, as sorted
    /// `(colour, count)` pairs.
    pub fn incident_colour_counts(&self, v: Vertex) -> Vec<(Colour, usize)> {
        let mut counts: std::collections::BTreeMap<Colour, usize> = Default::default();
        for u in self.graph.neighbors(v) {
            let c = self.colour(u, v).expect("neighbour implies edge");
            *counts.entry(c).or_insert(0) += 1;
        }
        counts.into_iter().collect()
    }
}

impl std::fmt::Debug for ColouredGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ColouredGraph(n={}, m={}, colours={})",
            self.n(),
            self.m(),
            self.palette().len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_edge_counts() {
        let g = Graph::complete(4);
        assert_eq!(g.m(), 6);
        assert_eq!(g.edges_within(&[0, 1, 2]), 3);
        assert_eq!(g.degree(0), 3);
    }

    #[test]
    fn k33_cross_counts() {
        let g = Graph::complete_bipartite(3, 3);
        let a = [0, 1, 2];
        let b = [3, 4, 5];
        assert_eq!(g.edges_between(&a, &b), 9);
        assert_eq!(g.edges_within(&a), 0);
    }

    #[test]
    fn overlapping_between_counts_inner_edges_twice() {
        let g = Graph::complete(3);
        // U = W = {0,1,2}: each of the 3 edges counted once per direction.
        assert_eq!(g.edges_between(&[0, 1, 2], &[0, 1, 2]), 6);
    }

    #[test]
    fn degree_sum_is_twice_edges() {
        let g = Graph::cycle(7);
        let sum: usize = (0..7).map(|v| g.degree(v)).sum();
        assert_eq!(sum, 2 * g.m());
    }

    #[test]
    fn edges_are_sorted_and_deduplicated() {
        let mut g = Graph::empty(4);
        assert!(g.add_edge(3, 1));
        assert!(g.add_edge(0, 2));
        assert!(!g.add_edge(1, 3));
        assert_eq!(g.edges(), &[(0, 2), (1, 3)]);
        assert_eq!(g.edge_index(3, 1), Some(1));
    }

    #[test]
    fn from_edges_rejects_loops_and_duplicates() {
        assert!(Graph::from_edges(3, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 5)]).is_err());
    }

    #[test]
    fn proper_colouring_detection() {
        // C_4 with opposite edges paired is proper; a monochromatic path
        // is not. Sorted edges: (0,1),(0,3),(1,2),(2,3).
        let c4 = ColouredGraph::from_colour_vec(Graph::cycle(4), vec![0, 1, 1, 0]).unwrap();
        assert!(c4.is_proper_edge_colouring());
        let p3 = ColouredGraph::monochromatic(Graph::path(3), 0);
        assert!(!p3.is_proper_edge_colouring());
    }

    #[test]
    fn incident_colour_counts_on_star_centre() {
        // Star K_{1,4} centred at 0 with two colours.
        let mut g = Graph::empty(5);
        for v in 1..5 {
            g.add_edge(0, v);
        }
        let cg = ColouredGraph::colour_by(g, |_, v| (v % 2) as Colour);
        assert_eq!(cg.incident_colour_counts(0), vec![(0, 2), (1, 2)]);
    }
}
