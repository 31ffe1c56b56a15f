//! Partition-level structures: equitable partitions, the reduced
//! digraph of an oriented host, and cyclic regular systems with exact
//! transversal cycle counts.

use super::{
    pair_density, pair_density_oriented, pair_regularity, pair_regularity_oriented, RegularityMode,
};
use crate::graph::{Graph, OrientedGraph};
use crate::rational::Rat;
use crate::{Error, Result, Vertex};
use serde::Serialize;
use std::fmt::Write as _;

/// Largest class size a [`RegularSystem`] accepts; adjacency into the
/// next class is stored as one machine word per vertex.
pub const MAX_SYSTEM_CLASS_SIZE: usize = 64;

/// Visited-state cap for the transversal cycle DFS.
const TRANSVERSAL_STATE_BUDGET: u64 = 50_000_000;

/// A (δ,k)-equitable partition: an exceptional class `V₀` with
/// `|V₀| ≤ δn` plus `k` classes of equal size, jointly covering
/// `{0, …, n−1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquitablePartition {
    exceptional: Vec<Vertex>,
    classes: Vec<Vec<Vertex>>,
    delta: Rat,
    n: usize,
}

impl EquitablePartition {
    pub fn new(exceptional: Vec<Vertex>, classes: Vec<Vec<Vertex>>, delta: Rat) -> Result<Self> {
        if delta <= Rat::from_integer(0) || delta > Rat::from_integer(1) {
            return Err(Error::invalid(format!("δ must lie in (0,1], got {delta}")));
        }
        if classes.is_empty() {
            return Err(Error::invalid("an equitable partition needs at least one class"));
        }
        let size = classes[0].len();
        if size == 0 {
            return Err(Error::invalid("classes must be nonempty"));
        }
        if let Some(bad) = classes.iter().find(|c| c.len() != size) {
            return Err(Error::invalid(format!(
                "classes must share one size, found {} and {size}",
                bad.len()
            )));
        }
        let mut exceptional = exceptional;
        exceptional.sort_unstable();
        let mut classes = classes;
        for c in &mut classes {
            c.sort_unstable();
        }
        let n = exceptional.len() + classes.len() * size;
        let mut seen = vec![false; n];
        for &v in exceptional.iter().chain(classes.iter().flatten()) {
            if v >= n {
                return Err(Error::invalid(format!(
                    "vertex {v} is out of range for the {n} vertices the partition covers"
                )));
            }
            if seen[v] {
                return Err(Error::invalid(format!("vertex {v} appears in two parts")));
            }
            seen[v] = true;
        }
        // Disjoint parts totalling n inside {0..n} must cover it.
        if Rat::from_integer(exceptional.len() as i64) > delta * Rat::from_integer(n as i64) {
            return Err(Error::invalid(format!(
                "exceptional class has {} vertices, above the δn = {}·{n} allowance",
                exceptional.len(),
                delta
            )));
        }
        Ok(EquitablePartition { exceptional, classes, delta, n })
    }

    /// Builds from `[V₀, V₁, …, V_k]`; the first array (possibly empty)
    /// is the exceptional class.
    pub fn from_class_arrays(arrays: &[Vec<Vertex>], delta: Rat) -> Result<Self> {
        if arrays.is_empty() {
            return Err(Error::invalid("expected [V0, V1, ..., Vk]"));
        }
        EquitablePartition::new(arrays[0].clone(), arrays[1..].to_vec(), delta)
    }

    /// Inverse of [`EquitablePartition::from_class_arrays`].
    pub fn to_class_arrays(&self) -> Vec<Vec<Vertex>> {
        let mut out = vec![self.exceptional.clone()];
        out.extend(self.classes.iter().cloned());
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn class_size(&self) -> usize {
        self.classes[0].len()
    }

    pub fn class(&self, i: usize) -> &[Vertex] {
        &self.classes[i]
    }

    pub fn classes(&self) -> &[Vec<Vertex>] {
        &self.classes
    }

    pub fn exceptional(&self) -> &[Vertex] {
        &self.exceptional
    }

    pub fn delta(&self) -> Rat {
        self.delta
    }
}

/// An arc of the reduced digraph; `certified` records whether the pair
/// behind it was exhaustively verified regular rather than merely not
/// refuted by sampling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedArc {
    pub from: usize,
    pub to: usize,
    pub density: Rat,
    pub certified: bool,
}

/// The reduced digraph of an oriented host over an equitable partition:
/// an arc `i → j` whenever the ordered class pair is not refuted as
/// (δ,p)-regular and its arc density reaches θ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedDigraph {
    pub k: usize,
    pub theta: Rat,
    pub delta: Rat,
    pub p: Rat,
    arcs: Vec<ReducedArc>,
}

impl ReducedDigraph {
    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        self.arcs.iter().any(|a| a.from == from && a.to == to)
    }

    pub fn arcs(&self) -> &[ReducedArc] {
        &self.arcs
    }

    /// Deterministic DOT rendering with exact density labels.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph reduced {\n");
        for i in 0..self.k {
            let _ = writeln!(s, "  {i};");
        }
        for a in &self.arcs {
            let _ = writeln!(s, "  {} -> {} [label=\"{}\"];", a.from, a.to, a.density);
        }
        s.push_str("}\n");
        s
    }
}

/// Builds the reduced digraph, scanning ordered class pairs in
/// row-major order.
pub fn reduced_digraph(
    d: &OrientedGraph,
    part: &EquitablePartition,
    theta: Rat,
    delta: Rat,
    p: Rat,
    mode: &RegularityMode,
) -> Result<ReducedDigraph> {
    if part.n() != d.n() {
        return Err(Error::invalid(format!(
            "partition covers {} vertices but the host has {}",
            part.n(),
            d.n()
        )));
    }
    if theta < Rat::from_integer(0) {
        return Err(Error::invalid(format!("θ must be nonnegative, got {theta}")));
    }
    let k = part.k();
    let mut arcs = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let verdict = pair_regularity_oriented(d, part.class(i), part.class(j), delta, p, mode)?;
            if verdict.refuted().is_some() {
                continue;
            }
            let density = pair_density_oriented(d, part.class(i), part.class(j), p)?.value;
            if density >= theta {
                arcs.push(ReducedArc {
                    from: i,
                    to: j,
                    density,
                    certified: verdict.certified_regular(),
                });
            }
        }
    }
    Ok(ReducedDigraph { k, theta, delta, p, arcs })
}

/// Regularity bookkeeping for one consecutive class pair of a
/// [`RegularSystem`]: recorded, never enforced, so degenerate systems
/// remain constructible and honestly labeled.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCertification {
    /// The pair is `(U_pair, U_{pair+1 mod ℓ})`.
    pub pair: usize,
    pub density: Rat,
    pub meets_theta: bool,
    pub certified_regular: bool,
    pub refuted: bool,
}

/// A cyclic system of ℓ ≥ 3 equal classes in which only the ℓ
/// consecutive-class bipartite graphs are consulted; transversal cycles
/// pick one vertex per class in cyclic order.
#[derive(Debug, Clone, Serialize)]
pub struct RegularSystem {
    ell: usize,
    u: usize,
    classes: Vec<Vec<Vertex>>,
    theta: Rat,
    delta: Rat,
    p: Rat,
    /// `bip[i][a]` masks the members of class `i+1 mod ℓ` adjacent to
    /// vertex `a` of class `i`.
    #[serde(skip)]
    bip: Vec<Vec<u64>>,
    certifications: Vec<PairCertification>,
}

impl RegularSystem {
    pub fn new(
        g: &Graph,
        classes: Vec<Vec<Vertex>>,
        theta: Rat,
        delta: Rat,
        p: Rat,
        mode: &RegularityMode,
    ) -> Result<Self> {
        let ell = classes.len();
        if ell < 3 {
            return Err(Error::invalid(format!("a cyclic system needs ℓ ≥ 3 classes, got {ell}")));
        }
        let u = classes[0].len();
        if u == 0 {
            return Err(Error::invalid("classes must be nonempty"));
        }
        if u > MAX_SYSTEM_CLASS_SIZE {
            return Err(Error::cap(format!(
                "class size {u} exceeds the supported maximum {MAX_SYSTEM_CLASS_SIZE}"
            )));
        }
        if classes.iter().any(|c| c.len() != u) {
            return Err(Error::invalid("classes must share one size"));
        }
        let mut classes = classes;
        for c in &mut classes {
            c.sort_unstable();
        }
        let mut seen = vec![false; g.n()];
        for &v in classes.iter().flatten() {
            if v >= g.n() {
                return Err(Error::invalid(format!("vertex {v} is outside the host graph")));
            }
            if seen[v] {
                return Err(Error::invalid(format!("vertex {v} appears in two classes")));
            }
            seen[v] = true;
        }
        let bip: Vec<Vec<u64>> = (0..ell)
            .map(|i| {
                let next = &classes[(i + 1) % ell];
                classes[i]
                    .iter()
                    .map(|&a| {
                        let mut m = 0u64;
                        for (bi, &b) in next.iter().enumerate() {
                            if g.has_edge(a, b) {
                                m |= 1 << bi;
                            }
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        let mut certifications = Vec::with_capacity(ell);
        for i in 0..ell {
            let next = (i + 1) % ell;
            let density = pair_density(g, &classes[i], &classes[next], p)?.value;
            let verdict = pair_regularity(g, &classes[i], &classes[next], delta, p, mode)?;
            certifications.push(PairCertification {
                pair: i,
                density,
                meets_theta: density >= theta,
                certified_regular: verdict.certified_regular(),
                refuted: verdict.refuted().is_some(),
            });
        }
        Ok(RegularSystem { ell, u, classes, theta, delta, p, bip, certifications })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn class(&self, i: usize) -> &[Vertex] {
        &self.classes[i]
    }

    pub fn theta(&self) -> Rat {
        self.theta
    }

    pub fn certifications(&self) -> &[PairCertification] {
        &self.certifications
    }

    /// True when every consecutive pair was exhaustively certified
    /// regular and meets the density threshold.
    pub fn fully_certified(&self) -> bool {
        self.certifications
            .iter()
            .all(|c| c.certified_regular && c.meets_theta)
    }
}

/// A counting lower bound of the form `ζ·(μpn)^ℓ` to compare an exact
/// transversal count against. The comparison is empirical (f64).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KlrBound {
    pub zeta: f64,
    pub mu: f64,
    pub p: f64,
    pub n: usize,
}

impl KlrBound {
    pub fn value(&self, ell: usize) -> f64 {
        self.zeta * (self.mu * self.p * self.n as f64).powi(ell as i32)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TransversalCount {
    pub ell: usize,
    pub count: u128,
    pub bound: Option<f64>,
    pub ratio: Option<f64>,
    pub meets_bound: Option<bool>,
}

/// Exact number of transversal ℓ-cycles: tuples `(v₀, …, v_{ℓ−1})` with
/// `vᵢ ∈ Uᵢ` and every consecutive pair (cyclically) an edge. Tuples
/// are counted as ordered with a fixed starting class, i.e. cycles are
/// *not* divided by automorphisms; classes are disjoint, so no tuple
/// repeats a vertex.
pub fn transversal_cycle_count(
    sys: &RegularSystem,
    bound: Option<&KlrBound>,
) -> Result<TransversalCount> {
    let mut budget = TRANSVERSAL_STATE_BUDGET;
    let mut count: u128 = 0;
    for start in 0..sys.u {
        count += close_cycles(sys, 0, start, start, &mut budget)?;
    }
    let bound_value = bound.map(|b| b.value(sys.ell));
    let ratio = bound_value.map(|b| if b > 0.0 { count as f64 / b } else { f64::INFINITY });
    let meets_bound = bound_value.map(|b| count as f64 >= b);
    Ok(TransversalCount { ell: sys.ell, count, bound: bound_value, ratio, meets_bound })
}

/// `cur` indexes a vertex of class `level`; walks forward and closes
/// back to `start` in class 0.
fn close_cycles(
    sys: &RegularSystem,
    level: usize,
    cur: usize,
    start: usize,
    budget: &mut u64,
) -> Result<u128> {
    if *budget == 0 {
        return Err(Error::cap(format!(
            "transversal cycle count exceeded {TRANSVERSAL_STATE_BUDGET} states"
        )));
    }
    *budget -= 1;
    if level == sys.ell - 1 {
        return Ok(u128::from(sys.bip[level][cur] >> start & 1));
    }
    let mut total = 0u128;
    let mut m = sys.bip[level][cur];
    while m != 0 {
        let next = m.trailing_zeros() as usize;
        m &= m - 1;
        total += close_cycles(sys, level + 1, next, start, budget)?;
    }
    Ok(total)
}
