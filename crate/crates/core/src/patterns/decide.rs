//! Exact deciders for the canonical arrowing relation on small graphs.

use super::copies::{first_canonical_copy, run_search, CopyMode, PrimitiveSearch};
use super::partitions::{bell_number, enumerate_edge_partitions, EdgePartition, MAX_PARTITION_EDGES};
use super::{enumerate_lex_patterns, LexPattern};
use crate::graph::{ColouredGraph, Graph};
use crate::{Colour, Error, Result};
use serde::{Deserialize, Serialize};

/// Product cap for list colouring enumeration.
pub const MAX_LIST_COLOURINGS: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArrowStrength {
    /// Every colouring admits a canonical copy of some kind.
    Weak,
    /// Every colouring admits a monochromatic or rainbow copy, or a
    /// lexicographic copy for *every* pattern class of the host.
    Strong,
}

/// A colouring for which the arrowing requirement fails.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArrowCounterexample {
    /// Edge labels of the failing colouring, indexed like `g.edges()`.
    pub partition: EdgePartition,
    /// For strong failures without mono/rainbow copies: a pattern class
    /// admitting no lexicographic copy.
    pub missing_pattern: Option<LexPattern>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CanArrowReport {
    pub holds: bool,
    pub strength: ArrowStrength,
    pub colourings_checked: u64,
    pub total_colourings: u128,
    pub counterexample: Option<ArrowCounterexample>,
}

/// Decides whether every edge colouring of `g` yields a canonical copy of
/// `h`, by exhausting colourings up to colour renaming (set partitions of
/// `E(g)` in restricted-growth order). Stops at the first counterexample.
pub fn decide_canarrow(g: &Graph, h: &Graph, strength: ArrowStrength) -> Result<CanArrowReport> {
    if g.m() > MAX_PARTITION_EDGES {
        return Err(Error::cap(format!(
            "exhaustive arrowing decision capped at {MAX_PARTITION_EDGES} edges, got {}",
            g.m()
        )));
    }
    if h.m() == 0 {
        return Err(Error::invalid("host graph has no edges"));
    }
    let patterns = enumerate_lex_patterns(h)?;
    let total = bell_number(g.m());
    let mut checked = 0u64;
    for partition in enumerate_edge_partitions(g.m())? {
        checked += 1;
        let cg = ColouredGraph::from_colour_vec(g.clone(), partition.as_colours())?;
        match colouring_verdict(&cg, h, &patterns, strength)? {
            Verdict::Canonical => {}
            Verdict::Fails { missing_pattern } => {
                return Ok(CanArrowReport {
                    holds: false,
                    strength,
                    colourings_checked: checked,
                    total_colourings: total,
                    counterexample: Some(ArrowCounterexample {
                        partition,
                        missing_pattern,
                    }),
                });
            }
        }
    }
    Ok(CanArrowReport {
        holds: true,
        strength,
        colourings_checked: checked,
        total_colourings: total,
        counterexample: None,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ListCanonicalReport {
    pub holds: bool,
    pub colourings_checked: u64,
    pub total_colourings: u128,
    /// A failing assignment (colour per edge, respecting the lists).
    pub counterexample: Option<Vec<Colour>>,
}

/// Checks whether every colouring of `g` that picks each edge's colour
/// from its list yields a strongly canonical copy of `h`. Lists are
/// indexed like `g.edges()`; the product of list sizes is capped.
pub fn check_list_canonical(
    g: &Graph,
    lists: &[Vec<Colour>],
    h: &Graph,
) -> Result<ListCanonicalReport> {
    if lists.len() != g.m() {
        return Err(Error::invalid(format!(
            "expected one list per edge ({}), got {}",
            g.m(),
            lists.len()
        )));
    }
    if lists.iter().any(|l| l.is_empty()) {
        return Err(Error::invalid("every edge needs a non-empty colour list"));
    }
    let mut total: u128 = 1;
    for l in lists {
        total = total.saturating_mul(l.len() as u128);
        if total > MAX_LIST_COLOURINGS {
            return Err(Error::cap(format!(
                "list colouring space exceeds {MAX_LIST_COLOURINGS}"
            )));
        }
    }
    let patterns = enumerate_lex_patterns(h)?;
    // Odometer over the lists, least significant digit last, so the
    // enumeration order is lexicographic in the colour vector.
    let mut idx = vec![0usize; lists.len()];
    let mut checked = 0u64;
    loop {
        let colours: Vec<Colour> = idx.iter().zip(lists).map(|(&i, l)| l[i]).collect();
        checked += 1;
        let cg = ColouredGraph::from_colour_vec(g.clone(), colours.clone())?;
        if let Verdict::Fails { .. } = colouring_verdict(&cg, h, &patterns, ArrowStrength::Strong)?
        {
            return Ok(ListCanonicalReport {
                holds: false,
                colourings_checked: checked,
                total_colourings: total,
                counterexample: Some(colours),
            });
        }
        // Advance the odometer.
        let mut pos = lists.len();
        loop {
            if pos == 0 {
                return Ok(ListCanonicalReport {
                    holds: true,
                    colourings_checked: checked,
                    total_colourings: total,
                    counterexample: None,
                });
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < lists[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

enum Verdict {
    Canonical,
    Fails { missing_pattern: Option<LexPattern> },
}

/// Per-colouring check shared by both deciders. Weak passes on any kind
/// for any pattern; strong requires mono, rainbow, or all patterns.
fn colouring_verdict(
    cg: &ColouredGraph,
    h: &Graph,
    patterns: &[LexPattern],
    strength: ArrowStrength,
) -> Result<Verdict> {
    match strength {
        ArrowStrength::Weak => {
            if first_canonical_copy(cg, h, &CopyMode::Weak)?.is_some() {
                Ok(Verdict::Canonical)
            } else {
                Ok(Verdict::Fails {
                    missing_pattern: None,
                })
            }
        }
        ArrowStrength::Strong => {
            for prim in [PrimitiveSearch::Mono, PrimitiveSearch::Rainbow] {
                if exists(cg, h, &prim)? {
                    return Ok(Verdict::Canonical);
                }
            }
            for p in patterns {
                if !exists(cg, h, &PrimitiveSearch::Pattern(p.clone()))? {
                    return Ok(Verdict::Fails {
                        missing_pattern: Some(p.clone()),
                    });
                }
            }
            Ok(Verdict::Canonical)
        }
    }
}

fn exists(cg: &ColouredGraph, h: &Graph, prim: &PrimitiveSearch) -> Result<bool> {
    let mut hit = false;
    run_search(cg, h, prim, &mut |_| {
        hit = true;
        false
    })?;
    Ok(hit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_does_not_weakly_arrow_c4() {
        // Colour each perfect matching of K_4 with its own colour: every
        // 4-cycle alternates two colours on opposite edges, which is not
        // mono, not rainbow, and pairs non-adjacent edges (no common
        // endpoint), so no pattern class matches either.
        let report = decide_canarrow(&Graph::complete(4), &Graph::cycle(4), ArrowStrength::Weak)
            .unwrap();
        assert_eq!(report.total_colourings, bell_number(6));
        assert!(!report.holds);
        // The reported counterexample really admits no canonical copy.
        let ce = report.counterexample.unwrap();
        let cg =
            ColouredGraph::from_colour_vec(Graph::complete(4), ce.partition.as_colours()).unwrap();
        assert!(first_canonical_copy(&cg, &Graph::cycle(4), &CopyMode::Weak)
            .unwrap()
            .is_none());
    }

    #[test]
    fn matching_colouring_of_k4_defeats_c4_directly() {
        // Edges of K_4 in sorted order: 01,02,03,12,13,23; matchings
        // {01,23}, {02,13}, {03,12} get colours 0,1,2.
        let cg =
            ColouredGraph::from_colour_vec(Graph::complete(4), vec![0, 1, 2, 2, 1, 0]).unwrap();
        assert!(cg.is_proper_edge_colouring());
        assert!(first_canonical_copy(&cg, &Graph::cycle(4), &CopyMode::Weak)
            .unwrap()
            .is_none());
    }

    #[test]
    fn k3_strongly_arrows_p3() {
        // Two incident edges are either equal (mono) or distinct
        // (rainbow), and the two pattern classes of the path coincide with
        // those kinds, so K_3 suffices.
        let report =
            decide_canarrow(&Graph::complete(3), &Graph::path(3), ArrowStrength::Strong).unwrap();
        assert!(report.holds, "counterexample: {:?}", report.counterexample);
        assert_eq!(report.colourings_checked as u128, bell_number(3));
    }

    #[test]
    fn c4_does_not_strongly_arrow_c4() {
        // A 2-2 colouring of the 4-cycle pairing opposite edges is not
        // mono, not rainbow, and matches neither pattern class, so the
        // strong requirement fails.
        let report = decide_canarrow(&Graph::cycle(4), &Graph::cycle(4), ArrowStrength::Strong)
            .unwrap();
        assert!(!report.holds);
        let ce = report.counterexample.unwrap();
        assert!(ce.missing_pattern.is_some());
    }

    #[test]
    fn c4_weakly_arrows_itself() {
        // The only copy of C_4 in C_4 is the whole cycle; some colourings
        // (e.g. paired opposite edges) are neither mono, rainbow, nor lex.
        let report =
            decide_canarrow(&Graph::cycle(4), &Graph::cycle(4), ArrowStrength::Weak).unwrap();
        assert!(!report.holds);
    }

    #[test]
    fn cap_is_enforced() {
        let g = Graph::complete(6); // 15 edges
        assert!(decide_canarrow(&g, &Graph::cycle(4), ArrowStrength::Weak).is_err());
    }

    #[test]
    fn list_with_singletons_is_single_colouring() {
        let g = Graph::cycle(4);
        let lists = vec![vec![0], vec![0], vec![0], vec![0]];
        let report = check_list_canonical(&g, &lists, &Graph::cycle(4)).unwrap();
        assert!(report.holds);
        assert_eq!(report.colourings_checked, 1);
        assert_eq!(report.total_colourings, 1);
    }

    #[test]
    fn list_counterexample_respects_lists() {
        // Force the paired-opposite-edges colouring to be reachable.
        let g = Graph::cycle(4);
        let lists = vec![vec![0, 1], vec![0, 1], vec![0, 1], vec![0, 1]];
        let report = check_list_canonical(&g, &lists, &Graph::cycle(4)).unwrap();
        assert!(!report.holds);
        let ce = report.counterexample.unwrap();
        for (i, c) in ce.iter().enumerate() {
            assert!(lists[i].contains(c));
        }
        assert_eq!(report.total_colourings, 16);
    }

    #[test]
    fn empty_list_rejected() {
        let g = Graph::cycle(4);
        let lists = vec![vec![0], vec![], vec![0], vec![0]];
        assert!(check_list_canonical(&g, &lists, &Graph::cycle(4)).is_err());
    }
}
