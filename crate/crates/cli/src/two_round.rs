//! Two-round exposure pipeline demo.
//!
//! Round one samples `G₁ = G(n,p)` and colours it; if the colouring
//! already contains a monochromatic `C_{2k}` the pipeline reports it and
//! stops. Otherwise it builds the rainbow focused graph Γ(2k) and gives
//! every Γ-edge the list of `2k−1` colours on one witness rainbow path:
//! colouring that edge *off* its list closes a rainbow `C_{2k}`
//! immediately, so only list-respecting extensions are worth examining.
//! Round two samples `G₂` and asks, for the Γ∩G₂ edges, whether a
//! list-respecting extension can avoid canonical copies — exhaustively
//! over the union when the list product is small, else edge by edge.

use crate::adversary::AdversaryStrategy;
use canram_core::cycles::cycle_census;
use canram_core::graph::{derive_seed, sample_gnp, ColouredGraph, GnpSpec, Graph};
use canram_core::paths::rainbow_focused;
use canram_core::patterns::{
    check_list_canonical, first_canonical_copy, CanonicalWitness, CopyMode,
};
use canram_core::{Colour, Error, Result, Vertex};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// Γ construction enumerates all `2k`-vertex paths; keep the demo desk-sized.
pub const MAX_TWO_ROUND_N: usize = 2000;

/// Exhausting the union costs (list product) full canonical searches;
/// beyond this the demo falls back to per-edge forcing statistics.
pub const UNION_BUDGET: u128 = 2000;

/// Round-one colouring: the sweep adversaries plus two extremes that the
/// pipeline treats specially in its examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundColouring {
    /// Every edge its own colour — no repeats anywhere.
    Rainbow,
    /// Every edge colour 0 — trips the round-one monochromatic stop.
    Monochromatic,
    Adversary(AdversaryStrategy),
}

impl FromStr for RoundColouring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "rainbow" => RoundColouring::Rainbow,
            "monochromatic" => RoundColouring::Monochromatic,
            other => RoundColouring::Adversary(other.parse()?),
        })
    }
}

impl fmt::Display for RoundColouring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoundColouring::Rainbow => f.write_str("rainbow"),
            RoundColouring::Monochromatic => f.write_str("monochromatic"),
            RoundColouring::Adversary(a) => a.fmt(f),
        }
    }
}

impl RoundColouring {
    pub fn apply(&self, g: Graph, seed: u64) -> (ColouredGraph, String) {
        match self {
            RoundColouring::Rainbow => (ColouredGraph::rainbow(g), "rainbow".into()),
            RoundColouring::Monochromatic => {
                (ColouredGraph::monochromatic(g, 0), "monochromatic".into())
            }
            RoundColouring::Adversary(a) => a.apply(g, seed),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeDetail {
    pub edge: (Vertex, Vertex),
    /// False when the Γ∩G₂ edge was already sampled in round one.
    pub new_in_round2: bool,
    pub witness_path: Vec<Vertex>,
    /// The `2k−1` colours along the witness path.
    pub list: Vec<Colour>,
    /// Whether every list choice for this edge creates a canonical copy
    /// in `G₁ + edge`; absent for already-coloured edges.
    pub forced: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TwoRoundTrace {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub p: f64,
    pub colouring: String,
    pub effective_colouring: String,
    pub round1_edges: usize,
    /// `round1-mono`, `full-union`, or `statistics-only`.
    pub mode: String,
    pub round1_mono: Option<CanonicalWitness>,
    pub gamma_edges: usize,
    pub round2_edges: usize,
    pub overlap_existing: usize,
    pub overlap_new: usize,
    pub list_length: usize,
    pub forced_edges: usize,
    pub unforced_edges: usize,
    /// Populated only in full-union mode.
    pub union_colourings: Option<u64>,
    pub union_holds: Option<bool>,
    /// First 20 per-edge rows, in edge order.
    pub details: Vec<EdgeDetail>,
}

/// Runs the pipeline with the default `p = min(1, 2·n^(−1+1/(2k−1)))`.
pub fn run_two_round(
    n: usize,
    k: usize,
    seed: u64,
    colouring: &RoundColouring,
) -> Result<TwoRoundTrace> {
    if k < 2 {
        return Err(Error::invalid("two-round demo needs k >= 2"));
    }
    if n < 2 * k || n > MAX_TWO_ROUND_N {
        return Err(Error::invalid(format!(
            "two-round demo needs 2k <= n <= {MAX_TWO_ROUND_N}, got n={n}"
        )));
    }
    let ell = 2 * k;
    let p = (2.0 * (n as f64).powf(-1.0 + 1.0 / (ell - 1) as f64)).min(1.0);
    let g1_seed = derive_seed(seed, &[1]);
    let colour_seed = derive_seed(seed, &[2]);
    let g2_seed = derive_seed(seed, &[3]);

    let g1 = sample_gnp(&GnpSpec::new(n, p, g1_seed))?;
    let round1_edges = g1.m();
    let (cg1, effective_colouring) = colouring.apply(g1, colour_seed);
    let cycle = Graph::cycle(ell);

    let mut trace = TwoRoundTrace {
        n,
        k,
        seed,
        p,
        colouring: colouring.to_string(),
        effective_colouring,
        round1_edges,
        mode: String::new(),
        round1_mono: None,
        gamma_edges: 0,
        round2_edges: 0,
        overlap_existing: 0,
        overlap_new: 0,
        list_length: ell - 1,
        forced_edges: 0,
        unforced_edges: 0,
        union_colourings: None,
        union_holds: None,
        details: Vec::new(),
    };

    if let Some(w) = first_canonical_copy(&cg1, &cycle, &CopyMode::Monochromatic)? {
        trace.mode = "round1-mono".into();
        trace.round1_mono = Some(w);
        return Ok(trace);
    }

    let gamma = rainbow_focused(&cg1, ell)?;
    gamma.validate()?;
    trace.gamma_edges = gamma.gamma().m();

    let g2 = sample_gnp(&GnpSpec::new(n, p, g2_seed))?;
    trace.round2_edges = g2.m();

    let mut new_edges: Vec<((Vertex, Vertex), Vec<Colour>)> = Vec::new();
    for &(u, v) in g2.edges() {
        if !gamma.gamma().has_edge(u, v) {
            continue;
        }
        let path = gamma
            .witness_for(u, v)
            .expect("every Γ-edge stores a witness")
            .to_vec();
        let list: Vec<Colour> = path
            .windows(2)
            .map(|w| cg1.colour(w[0], w[1]).expect("witness path edge"))
            .collect();
        assert_eq!(list.len(), ell - 1, "a rainbow witness carries 2k−1 colours");
        if cg1.graph().has_edge(u, v) {
            trace.overlap_existing += 1;
            trace.details.push(EdgeDetail {
                edge: (u, v),
                new_in_round2: false,
                witness_path: path,
                list,
                forced: None,
            });
        } else {
            trace.overlap_new += 1;
            let forced = edge_forced(&cg1, (u, v), &list, &cycle)?;
            if forced {
                trace.forced_edges += 1;
            } else {
                trace.unforced_edges += 1;
            }
            new_edges.push(((u, v), list.clone()));
            trace.details.push(EdgeDetail {
                edge: (u, v),
                new_in_round2: true,
                witness_path: path,
                list,
                forced: Some(forced),
            });
        }
    }
    trace.details.truncate(20);

    let product = new_edges
        .iter()
        .try_fold(1u128, |acc, (_, l)| acc.checked_mul(l.len() as u128))
        .unwrap_or(u128::MAX);
    if product <= UNION_BUDGET {
        let mut union = cg1.graph().clone();
        for &((u, v), _) in &new_edges {
            union.add_edge(u, v);
        }
        let lists: Vec<Vec<Colour>> = union
            .edges()
            .iter()
            .map(|&(a, b)| match cg1.colour(a, b) {
                Some(c) => vec![c],
                None => {
                    new_edges
                        .iter()
                        .find(|&&((u, v), _)| (u.min(v), u.max(v)) == (a, b))
                        .expect("new union edge came from the overlap")
                        .1
                        .clone()
                }
            })
            .collect();
        let rep = check_list_canonical(&union, &lists, &cycle)?;
        trace.mode = "full-union".into();
        trace.union_colourings = Some(rep.colourings_checked);
        trace.union_holds = Some(rep.holds);
    } else {
        trace.mode = "statistics-only".into();
    }
    Ok(trace)
}

/// Every list choice for `f` must create a strongly canonical `C_{2k}`
/// somewhere in `G₁ + f` for the edge to count as forced.
fn edge_forced(
    cg1: &ColouredGraph,
    f: (Vertex, Vertex),
    list: &[Colour],
    cycle: &Graph,
) -> Result<bool> {
    let mut g = cg1.graph().clone();
    assert!(g.add_edge(f.0, f.1), "forced check is for new edges");
    let key = (f.0.min(f.1), f.0.max(f.1));
    let lists: Vec<Vec<Colour>> = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            if (a, b) == key {
                list.to_vec()
            } else {
                vec![cg1.colour(a, b).expect("existing edge")]
            }
        })
        .collect();
    Ok(check_list_canonical(&g, &lists, cycle)?.holds)
}

/// True when the underlying round-one sample contains any `C_{2k}` —
/// used by tests to scope assertions that need a cycle to exist.
pub fn round1_has_cycle(n: usize, k: usize, seed: u64) -> Result<bool> {
    let ell = 2 * k;
    let p = (2.0 * (n as f64).powf(-1.0 + 1.0 / (ell - 1) as f64)).min(1.0);
    let g1 = sample_gnp(&GnpSpec::new(n, p, derive_seed(seed, &[1])))?;
    Ok(cycle_census(&g1, k, &[])?.labelled > 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monochromatic_round_stops_immediately() {
        let t = run_two_round(20, 2, 5, &RoundColouring::Monochromatic).unwrap();
        assert_eq!(t.mode, "round1-mono");
        assert!(t.round1_mono.is_some());
        assert_eq!(t.gamma_edges, 0);
        assert_eq!(t.round2_edges, 0);
        assert!(t.details.is_empty());
        assert!(t.union_holds.is_none());
    }

    #[test]
    fn rainbow_round_gives_every_new_edge_a_full_list() {
        let t = run_two_round(30, 2, 3, &RoundColouring::Rainbow).unwrap();
        assert_ne!(t.mode, "round1-mono");
        assert!(t.gamma_edges > 0, "rainbow colouring makes Γ large");
        assert_eq!(t.overlap_new, t.forced_edges + t.unforced_edges);
        for d in &t.details {
            assert_eq!(d.list.len(), 3);
            assert_eq!(d.witness_path.len(), 4);
            assert_eq!(d.forced.is_some(), d.new_in_round2);
        }
        // Under an all-distinct colouring every C_4 of G₁ is already
        // rainbow, so any cycle in round one forces every new edge.
        if round1_has_cycle(30, 2, 3).unwrap() {
            assert_eq!(t.unforced_edges, 0);
            assert_eq!(t.forced_edges, t.overlap_new);
        }
    }

    #[test]
    fn parsing_accepts_extremes_and_adversaries() {
        assert_eq!(
            "rainbow".parse::<RoundColouring>().unwrap(),
            RoundColouring::Rainbow
        );
        assert!(matches!(
            "heavy-pair".parse::<RoundColouring>().unwrap(),
            RoundColouring::Adversary(_)
        ));
        assert!("sideways".parse::<RoundColouring>().is_err());
        assert_eq!(
            "monochromatic".parse::<RoundColouring>().unwrap().to_string(),
            "monochromatic"
        );
    }

    #[test]
    fn traces_are_deterministic() {
        let a = run_two_round(24, 2, 11, &RoundColouring::Rainbow).unwrap();
        let b = run_two_round(24, 2, 11, &RoundColouring::Rainbow).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn golden_trace_n60() {
        let t = run_two_round(60, 2, 7, &RoundColouring::Rainbow).unwrap();
        assert_eq!(t.mode, "statistics-only");
        assert_eq!(t.round1_edges, 229);
        assert_eq!(t.gamma_edges, 1741);
        assert_eq!(t.round2_edges, 204);
        assert_eq!(t.overlap_existing, 34);
        assert_eq!(t.overlap_new, 165);
        assert_eq!(t.forced_edges, 165);
        assert_eq!(t.unforced_edges, 0);
        assert_eq!(t.list_length, 3);
        assert_eq!(t.details.len(), 20);
    }

    #[test]
    fn small_union_is_checked_exhaustively() {
        // At n = 8 the rainbow colouring makes Γ complete and seed 2
        // leaves only three new overlap edges: 3³ = 27 list colourings,
        // comfortably inside the union budget.
        let t = run_two_round(8, 2, 2, &RoundColouring::Rainbow).unwrap();
        assert_eq!(t.mode, "full-union");
        assert_eq!(t.gamma_edges, 28);
        assert_eq!(t.overlap_new, 3);
        assert_eq!(t.union_colourings, Some(27));
        assert_eq!(t.union_holds, Some(true));
        assert_eq!(t.forced_edges, 3);
    }
}
