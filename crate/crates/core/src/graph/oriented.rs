//! Directed simple graphs (at most one arc per ordered pair, no loops).

use super::{words_for, Graph, WORD};
use crate::{Error, Result, Vertex};
use serde::{Deserialize, Serialize};

/// A digraph on `0..n`. Antiparallel arc pairs are allowed in general;
/// orientations of undirected graphs simply never create them.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientedGraph {
    n: usize,
    words: usize,
    out: Vec<u64>,
    inn: Vec<u64>,
    arcs: Vec<(Vertex, Vertex)>,
}

impl OrientedGraph {
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        OrientedGraph {
            n,
            words,
            out: vec![0; n * words],
            inn: vec![0; n * words],
            arcs: Vec::new(),
        }
    }

    /// Orients every edge of `g` by `towards_larger(u,v)`: `true` puts the
    /// arc `u→v` (with `u < v`), `false` puts `v→u`.
    pub fn orient(g: &Graph, mut towards_larger: impl FnMut(Vertex, Vertex) -> bool) -> Self {
        let mut d = OrientedGraph::empty(g.n());
        for &(u, v) in g.edges() {
            if towards_larger(u, v) {
                d.add_arc(u, v);
            } else {
                d.add_arc(v, u);
            }
        }
        d
    }

    pub fn from_arcs(n: usize, arcs: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut d = OrientedGraph::empty(n);
        for &(u, v) in arcs {
            if u == v {
                return Err(Error::invalid(format!("loop arc at {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::invalid(format!("arc ({u},{v}) out of range")));
            }
            if !d.add_arc(u, v) {
                return Err(Error::invalid(format!("duplicate arc ({u},{v})")));
            }
        }
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Adds arc `u→v`; returns false if already present.
    pub fn add_arc(&mut self, u: Vertex, v: Vertex) -> bool {
        assert!(u != v && u < self.n && v < self.n);
        if self.has_arc(u, v) {
            return false;
        }
        self.out[u * self.words + v / WORD] |= 1 << (v % WORD);
        self.inn[v * self.words + u / WORD] |= 1 << (u % WORD);
        let pos = self.arcs.partition_point(|&a| a < (u, v));
        self.arcs.insert(pos, (u, v));
        true
    }

    #[inline]
    pub fn has_arc(&self, u: Vertex, v: Vertex) -> bool {
        debug_assert!(u < self.n && v < self.n);
        u != v && self.out[u * self.words + v / WORD] >> (v % WORD) & 1 == 1
    }

    /// Arcs as sorted `(tail, head)` pairs.
    pub fn arcs(&self) -> &[(Vertex, Vertex)] {
        &self.arcs
    }

    pub fn out_degree(&self, u: Vertex) -> usize {
        self.out[u * self.words..(u + 1) * self.words]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn in_degree(&self, u: Vertex) -> usize {
        self.inn[u * self.words..(u + 1) * self.words]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn out_neighbors(&self, u: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        row_bits(&self.out[u * self.words..(u + 1) * self.words])
    }

    pub fn in_neighbors(&self, u: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        row_bits(&self.inn[u * self.words..(u + 1) * self.words])
    }

    /// Arcs from `u` into the given mask, counted.
    pub fn out_degree_into_mask(&self, u: Vertex, mask: &[u64]) -> usize {
        self.out[u * self.words..(u + 1) * self.words]
            .iter()
            .zip(mask)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Number of arcs `a→b` with `a ∈ A`, `b ∈ B` (ordered-pair count).
    pub fn arcs_between(&self, a_set: &[Vertex], b_set: &[Vertex]) -> u64 {
        let mut mask = vec![0u64; self.words];
        for &b in b_set {
            mask[b / WORD] |= 1 << (b % WORD);
        }
        a_set
            .iter()
            .map(|&a| self.out_degree_into_mask(a, &mask) as u64)
            .sum()
    }

    /// The underlying undirected graph (antiparallel pairs collapse).
    pub fn underlying(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for &(u, v) in &self.arcs {
            if !g.has_edge(u, v) {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Kahn topological order with smallest-id tie-breaking; `None` if the
    /// digraph has a directed cycle.
    pub fn topological_order(&self) -> Option<Vec<Vertex>> {
        let mut indeg: Vec<usize> = (0..self.n).map(|v| self.in_degree(v)).collect();
        let mut ready: std::collections::BTreeSet<Vertex> = (0..self.n)
            .filter(|&v| indeg[v] == 0)
            .collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(&v) = ready.iter().next() {
            ready.remove(&v);
            order.push(v);
            for w in self.out_neighbors(v) {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.insert(w);
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }
}

impl std::fmt::Debug for OrientedGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "OrientedGraph(n={}, arcs={})", self.n, self.arcs.len())
    }
}

fn row_bits(row: &[u64]) -> impl Iterator<Item = Vertex> + '_ {
    row.iter().enumerate().flat_map(|(w, &bits)| {
        let base = w * WORD;
        std::iter::successors((bits != 0).then_some(bits), |&b| {
            let rest = b & (b - 1);
            (rest != 0).then_some(rest)
        })
        .map(move |b| base + b.trailing_zeros() as usize)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_arcs_and_degrees() {
        let d = OrientedGraph::from_arcs(4, &[(0, 1), (1, 2), (3, 1)]).unwrap();
        assert!(d.has_arc(0, 1));
        assert!(!d.has_arc(1, 0));
        assert_eq!(d.out_degree(1), 1);
        assert_eq!(d.in_degree(1), 2);
        assert_eq!(d.in_neighbors(1).collect::<Vec<_>>(), vec![0, 3]);
    }

    #[test]
    fn orient_by_comparison_gives_acyclic() {
        let g = Graph::complete(5);
        let d = OrientedGraph::orient(&g, |_, _| true); // low → high
        let order = d.topological_order().unwrap();
        assert_eq!(order, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn directed_triangle_has_no_topological_order() {
        let d = OrientedGraph::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(d.topological_order().is_none());
    }

    #[test]
    fn arcs_between_ordered_count() {
        let d = OrientedGraph::from_arcs(4, &[(0, 2), (1, 2), (2, 3)]).unwrap();
        assert_eq!(d.arcs_between(&[0, 1], &[2, 3]), 2);
        assert_eq!(d.arcs_between(&[2, 3], &[0, 1]), 0);
    }
}
