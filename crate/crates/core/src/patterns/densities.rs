//! Exact density parameters of small host graphs.

use crate::graph::Graph;
use crate::rational::Rat;
use crate::{Error, Result};

/// Subset enumeration cap for the 2-density.
pub const MAX_DENSITY_VERTICES: usize = 20;

/// The maximum 2-density `max (e(S) - 1) / (|S| - 2)` over vertex subsets
/// with at least three vertices, as an exact rational. Taking induced
/// subgraphs is enough: for a fixed vertex set the ratio grows with the
/// edge count.
pub fn m2_density(h: &Graph) -> Result<Rat> {
    let n = h.n();
    if n < 3 {
        return Err(Error::invalid(
            "2-density needs at least three vertices",
        ));
    }
    if n > MAX_DENSITY_VERTICES {
        return Err(Error::cap(format!(
            "2-density enumeration capped at {MAX_DENSITY_VERTICES} vertices, got {n}"
        )));
    }
    // Single-word adjacency rows; n ≤ 20 fits comfortably in u32 but u64
    // keeps the popcount arithmetic uniform.
    let rows: Vec<u64> = (0..n)
        .map(|v| h.neighbors(v).fold(0u64, |acc, w| acc | (1 << w)))
        .collect();
    let mut best: Option<Rat> = None;
    for mask in 0u64..(1 << n) {
        let size = mask.count_ones() as i64;
        if size < 3 {
            continue;
        }
        let mut twice_edges = 0i64;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            twice_edges += (rows[v] & mask).count_ones() as i64;
        }
        let ratio = Rat::new(twice_edges / 2 - 1, size - 2);
        if best.map_or(true, |b| ratio > b) {
            best = Some(ratio);
        }
    }
    Ok(best.expect("n >= 3 guarantees at least one subset"))
}

/// Exact chromatic number by iterative-deepening backtracking. Vertices
/// are assigned in descending-degree order and a fresh colour may only be
/// opened as `max used + 1`, which breaks colour symmetry.
pub fn chromatic_number(h: &Graph) -> Result<usize> {
    let n = h.n();
    if n == 0 {
        return Ok(0);
    }
    if n > MAX_DENSITY_VERTICES {
        return Err(Error::cap(format!(
            "chromatic number capped at {MAX_DENSITY_VERTICES} vertices, got {n}"
        )));
    }
    if h.m() == 0 {
        return Ok(1);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(h.degree(v)));
    for k in 2..=n {
        let mut colours = vec![usize::MAX; n];
        if colourable(h, &order, &mut colours, 0, k) {
            return Ok(k);
        }
    }
    Ok(n)
}

fn colourable(h: &Graph, order: &[usize], colours: &mut [usize], depth: usize, k: usize) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    let mut max_used = 0;
    for &u in &order[..depth] {
        max_used = max_used.max(colours[u] + 1);
    }
    let open = k.min(max_used + 1);
    'colour: for c in 0..open {
        for w in h.neighbors(v) {
            if colours[w] == c {
                continue 'colour;
            }
        }
        colours[v] = c;
        if colourable(h, order, colours, depth + 1, k) {
            return true;
        }
        colours[v] = usize::MAX;
    }
    false
}

/// The extremal edge-density threshold `(r - 2) / (r - 1)` where `r` is
/// the chromatic number. The graph must have an edge.
pub fn turan_density(h: &Graph) -> Result<Rat> {
    if h.m() == 0 {
        return Err(Error::invalid("extremal density needs at least one edge"));
    }
    let r = chromatic_number(h)? as i64;
    Ok(Rat::new(r - 2, r - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn even_cycle_two_density() {
        for k in 2..=6usize {
            let c = Graph::cycle(2 * k);
            let expect = Rat::new(2 * k as i64 - 1, 2 * k as i64 - 2);
            assert_eq!(m2_density(&c).unwrap(), expect, "cycle length {}", 2 * k);
        }
    }

    #[test]
    fn clique_two_density() {
        assert_eq!(m2_density(&Graph::complete(4)).unwrap(), Rat::new(5, 2));
        assert_eq!(m2_density(&Graph::complete(5)).unwrap(), Rat::new(3, 1));
    }

    #[test]
    fn chromatic_numbers_of_standards() {
        assert_eq!(chromatic_number(&Graph::complete(8)).unwrap(), 8);
        assert_eq!(chromatic_number(&Graph::cycle(5)).unwrap(), 3);
        assert_eq!(chromatic_number(&Graph::cycle(6)).unwrap(), 2);
        assert_eq!(chromatic_number(&Graph::complete_bipartite(3, 4)).unwrap(), 2);
        assert_eq!(chromatic_number(&Graph::empty(5)).unwrap(), 1);
    }

    #[test]
    fn turan_densities() {
        assert_eq!(turan_density(&Graph::complete(8)).unwrap(), Rat::new(6, 7));
        assert_eq!(turan_density(&Graph::cycle(5)).unwrap(), Rat::new(1, 2));
        assert_eq!(turan_density(&Graph::cycle(6)).unwrap(), Rat::new(0, 1));
        assert!(turan_density(&Graph::empty(3)).is_err());
    }

    /// Independent oracle: maximise over *all* subgraphs (any vertex
    /// subset, any edge subset inside it), which must coincide with the
    /// induced-only maximisation.
    fn m2_all_subgraphs(h: &Graph) -> Rat {
        let n = h.n();
        let mut best = Rat::new(-1, 1);
        for vmask in 0u32..(1 << n) {
            if vmask.count_ones() < 3 {
                continue;
            }
            let inside: Vec<usize> = h
                .edges()
                .iter()
                .enumerate()
                .filter(|(_, &(a, b))| vmask & (1 << a) != 0 && vmask & (1 << b) != 0)
                .map(|(i, _)| i)
                .collect();
            for pick in 0u32..(1 << inside.len()) {
                let e = pick.count_ones() as i64;
                let ratio = Rat::new(e - 1, vmask.count_ones() as i64 - 2);
                if ratio > best {
                    best = ratio;
                }
            }
        }
        best
    }

    #[test]
    fn two_density_matches_all_subgraph_oracle() {
        let mut rng = StdRng::seed_from_u64(2024);
        for _ in 0..40 {
            let mut g = Graph::empty(6);
            for u in 0..6 {
                for v in (u + 1)..6 {
                    if rng.gen_bool(0.5) {
                        g.add_edge(u, v);
                    }
                }
            }
            if g.m() == 0 {
                continue;
            }
            assert_eq!(m2_density(&g).unwrap(), m2_all_subgraphs(&g));
        }
    }

    #[test]
    fn caps_and_degenerate_inputs() {
        assert!(m2_density(&Graph::path(2)).is_err());
        assert!(m2_density(&Graph::empty(21)).is_err());
        assert!(chromatic_number(&Graph::empty(21)).is_err());
    }
}
