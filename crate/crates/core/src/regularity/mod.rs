//! Sparse-regularity machinery: exact p-densities, (δ,p)-regular pair
//! checking, upper-uniformity, equitable partitions, reduced digraphs,
//! and cyclically-structured regular systems with exact transversal
//! cycle counts.
//!
//! Densities, thresholds, and deviations travel as exact rationals
//! ([`Rat`]), so verdicts at a tolerance boundary never depend on float
//! rounding. Exhaustive subpair enumeration is gated by an explicit
//! budget; anything established by sampling is labeled as such — a
//! sampled pass is a non-refutation, never a certificate.

mod system;

pub use system::{
    reduced_digraph, transversal_cycle_count, EquitablePartition, KlrBound, PairCertification,
    ReducedArc, ReducedDigraph, RegularSystem, TransversalCount, MAX_SYSTEM_CLASS_SIZE,
};

use crate::graph::{derive_seed, Graph, OrientedGraph};
use crate::rational::Rat;
use crate::{Error, Result, Vertex};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

/// Default cap on `2^{|A|} + 2^{|B|}` below which subpair checking is
/// exhaustive.
pub const DEFAULT_SUBSET_BUDGET: u64 = 1 << 21;

/// Default Monte Carlo rounds when a pair is too large for exhaustion.
pub const DEFAULT_SAMPLES: usize = 400;

/// Monte Carlo rounds for the sampled upper-uniformity path.
pub const UNIFORMITY_SAMPLES: usize = 200;

/// How a regularity question is to be answered: exhaustively while
/// `2^{|A|} + 2^{|B|}` fits `subset_budget`, by seeded sampling plus
/// greedy densest/sparsest-subpair descent otherwise.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RegularityMode {
    pub subset_budget: u64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for RegularityMode {
    fn default() -> Self {
        RegularityMode {
            subset_budget: DEFAULT_SUBSET_BUDGET,
            samples: DEFAULT_SAMPLES,
            seed: 0,
        }
    }
}

impl RegularityMode {
    /// Default budget with sampling fallback.
    pub fn exact() -> Self {
        RegularityMode::default()
    }

    /// Forces the sampling path regardless of pair size.
    pub fn sampled(samples: usize, seed: u64) -> Self {
        RegularityMode { subset_budget: 0, samples, seed }
    }

    fn exact_affordable(&self, a_len: usize, b_len: usize) -> bool {
        let cost = |s: usize| 1u128.checked_shl(s as u32).unwrap_or(u128::MAX);
        cost(a_len).saturating_add(cost(b_len)) <= u128::from(self.subset_budget)
    }
}

/// The p-density of a disjoint pair: `e(A,B) / (p·|A||B|)`, exact.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairDensity {
    pub a: Vec<Vertex>,
    pub b: Vec<Vertex>,
    pub edges: u64,
    pub p: Rat,
    pub value: Rat,
}

/// Density of an undirected pair, counting edges between `A` and `B`.
pub fn pair_density(g: &Graph, a: &[Vertex], b: &[Vertex], p: Rat) -> Result<PairDensity> {
    let (a, b) = checked_sides(g.n(), a, b)?;
    check_p(p)?;
    let edges = g.edges_between(&a, &b);
    let value = density_value(edges, a.len(), b.len(), p);
    Ok(PairDensity { a, b, edges, p, value })
}

/// Directed variant: counts only arcs running from `A` into `B`.
pub fn pair_density_oriented(
    d: &OrientedGraph,
    a: &[Vertex],
    b: &[Vertex],
    p: Rat,
) -> Result<PairDensity> {
    let (a, b) = checked_sides(d.n(), a, b)?;
    check_p(p)?;
    let bmask = mask_over(d.n(), &b);
    let edges = a
        .iter()
        .map(|&x| d.out_degree_into_mask(x, &bmask) as u64)
        .sum();
    let value = density_value(edges, a.len(), b.len(), p);
    Ok(PairDensity { a, b, edges, p, value })
}

fn mask_over(n: usize, verts: &[Vertex]) -> Vec<u64> {
    let mut mask = vec![0u64; n.div_ceil(64)];
    for &v in verts {
        mask[v / 64] |= 1 << (v % 64);
    }
    mask
}

fn density_value(edges: u64, a_len: usize, b_len: usize, p: Rat) -> Rat {
    Rat::new(edges as i64, (a_len * b_len) as i64) / p
}

fn check_p(p: Rat) -> Result<()> {
    if p <= Rat::from_integer(0) {
        return Err(Error::invalid(format!("p must be positive, got {p}")));
    }
    Ok(())
}

fn check_delta(delta: Rat) -> Result<()> {
    if delta <= Rat::from_integer(0) || delta > Rat::from_integer(1) {
        return Err(Error::invalid(format!("δ must lie in (0,1], got {delta}")));
    }
    Ok(())
}

/// Sorts, range-checks, and dedup-checks both sides, and checks
/// disjointness.
fn checked_sides(n: usize, a: &[Vertex], b: &[Vertex]) -> Result<(Vec<Vertex>, Vec<Vertex>)> {
    let clean = |side: &[Vertex], name: &str| -> Result<Vec<Vertex>> {
        if side.is_empty() {
            return Err(Error::invalid(format!("{name} is empty")));
        }
        let mut s = side.to_vec();
        s.sort_unstable();
        if let Some(&v) = s.iter().find(|&&v| v >= n) {
            return Err(Error::invalid(format!("{name} contains out-of-range vertex {v}")));
        }
        if s.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("{name} repeats a vertex")));
        }
        Ok(s)
    };
    let a = clean(a, "A")?;
    let b = clean(b, "B")?;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                return Err(Error::invalid(format!("A and B share vertex {}", a[i])));
            }
        }
    }
    Ok((a, b))
}

/// A re-validated refutation of (δ,p)-regularity: a qualifying subpair
/// whose density strays from the pair's by more than δ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrregularityWitness {
    pub x: Vec<Vertex>,
    pub y: Vec<Vertex>,
    pub pair_density: Rat,
    pub sub_density: Rat,
    pub deviation: Rat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RegularityVerdict {
    /// Exhaustively certified: no qualifying subpair deviates.
    Regular,
    Irregular { witness: IrregularityWitness },
    /// Sampling found no refutation; this certifies nothing.
    SampledNoRefutation { samples: usize },
}

impl RegularityVerdict {
    pub fn certified_regular(&self) -> bool {
        matches!(self, RegularityVerdict::Regular)
    }

    pub fn refuted(&self) -> Option<&IrregularityWitness> {
        match self {
            RegularityVerdict::Irregular { witness } => Some(witness),
            _ => None,
        }
    }

    /// True unless an irregularity witness was found.
    pub fn not_refuted(&self) -> bool {
        self.refuted().is_none()
    }
}

/// Decides (δ,p)-regularity of the undirected pair `(A,B)`: every
/// `X ⊆ A`, `Y ⊆ B` with `|X| ≥ δ|A|`, `|Y| ≥ δ|B|` must satisfy
/// `|d_p(X,Y) − d_p(A,B)| ≤ δ`.
pub fn pair_regularity(
    g: &Graph,
    a: &[Vertex],
    b: &[Vertex],
    delta: Rat,
    p: Rat,
    mode: &RegularityMode,
) -> Result<RegularityVerdict> {
    let (a, b) = checked_sides(g.n(), a, b)?;
    let view = BipView::build(&a, &b, |x, y| g.has_edge(x, y));
    let verdict = decide_regularity(&view, delta, p, mode)?;
    if let RegularityVerdict::Irregular { witness } = &verdict {
        validate_irregularity_witness(g, &a, &b, delta, p, witness)?;
    }
    Ok(verdict)
}

/// Directed variant over arcs `A → B`.
pub fn pair_regularity_oriented(
    d: &OrientedGraph,
    a: &[Vertex],
    b: &[Vertex],
    delta: Rat,
    p: Rat,
    mode: &RegularityMode,
) -> Result<RegularityVerdict> {
    let (a, b) = checked_sides(d.n(), a, b)?;
    let view = BipView::build(&a, &b, |x, y| d.has_arc(x, y));
    let verdict = decide_regularity(&view, delta, p, mode)?;
    if let RegularityVerdict::Irregular { witness } = &verdict {
        validate_irregularity_witness_oriented(d, &a, &b, delta, p, witness)?;
    }
    Ok(verdict)
}

/// Re-derives an irregularity witness from the graph alone and checks it
/// against the reported rationals exactly.
pub fn validate_irregularity_witness(
    g: &Graph,
    a: &[Vertex],
    b: &[Vertex],
    delta: Rat,
    p: Rat,
    w: &IrregularityWitness,
) -> Result<()> {
    let e_ab = g.edges_between(a, b);
    let e_xy = g.edges_between(&w.x, &w.y);
    validate_witness_arithmetic(a, b, e_ab, e_xy, delta, p, w)
}

/// Directed counterpart of [`validate_irregularity_witness`].
pub fn validate_irregularity_witness_oriented(
    d: &OrientedGraph,
    a: &[Vertex],
    b: &[Vertex],
    delta: Rat,
    p: Rat,
    w: &IrregularityWitness,
) -> Result<()> {
    let count = |xs: &[Vertex], ys: &[Vertex]| -> u64 {
        let mask = mask_over(d.n(), ys);
        xs.iter()
            .map(|&x| d.out_degree_into_mask(x, &mask) as u64)
            .sum()
    };
    validate_witness_arithmetic(a, b, count(a, b), count(&w.x, &w.y), delta, p, w)
}

fn validate_witness_arithmetic(
    a: &[Vertex],
    b: &[Vertex],
    e_ab: u64,
    e_xy: u64,
    delta: Rat,
    p: Rat,
    w: &IrregularityWitness,
) -> Result<()> {
    let contained = |sub: &[Vertex], sup: &[Vertex], name: &str| -> Result<()> {
        if sub.is_empty() {
            return Err(Error::invalid(format!("witness {name} is empty")));
        }
        if !sub.iter().all(|v| sup.binary_search(v).is_ok()) {
            return Err(Error::invalid(format!("witness {name} leaves its side")));
        }
        Ok(())
    };
    contained(&w.x, a, "X")?;
    contained(&w.y, b, "Y")?;
    let big = |len: usize, side: usize, name: &str| -> Result<()> {
        if Rat::from_integer(len as i64) < delta * Rat::from_integer(side as i64) {
            return Err(Error::invalid(format!("witness {name} is below the δ size floor")));
        }
        Ok(())
    };
    big(w.x.len(), a.len(), "X")?;
    big(w.y.len(), b.len(), "Y")?;
    let pair = density_value(e_ab, a.len(), b.len(), p);
    let sub = density_value(e_xy, w.x.len(), w.y.len(), p);
    if pair != w.pair_density || sub != w.sub_density {
        return Err(Error::invalid(format!(
            "witness densities do not re-derive: pair {pair} vs {}, sub {sub} vs {}",
            w.pair_density, w.sub_density
        )));
    }
    let dev = (sub - pair).abs();
    if dev != w.deviation {
        return Err(Error::invalid(format!(
            "witness deviation {} does not match recount {dev}",
            w.deviation
        )));
    }
    if dev <= delta {
        return Err(Error::invalid(format!("claimed witness deviates by only {dev} ≤ δ")));
    }
    Ok(())
}

/// Bit-matrix view of the bipartite graph between two cleaned sides.
struct BipView {
    a: Vec<Vertex>,
    b: Vec<Vertex>,
    words: usize,
    /// `rows[i]` masks the `b`-indices adjacent to `a[i]`.
    rows: Vec<Vec<u64>>,
}

impl BipView {
    fn build(a: &[Vertex], b: &[Vertex], has: impl Fn(Vertex, Vertex) -> bool) -> Self {
        let words = b.len().div_ceil(64);
        let rows = a
            .iter()
            .map(|&x| {
                let mut row = vec![0u64; words];
                for (j, &y) in b.iter().enumerate() {
                    if has(x, y) {
                        row[j / 64] |= 1 << (j % 64);
                    }
                }
                row
            })
            .collect();
        BipView { a: a.to_vec(), b: b.to_vec(), words, rows }
    }

    fn edges(&self) -> u64 {
        self.rows
            .iter()
            .flat_map(|r| r.iter())
            .map(|w| w.count_ones() as u64)
            .sum()
    }

    fn count(&self, x_idx: &[usize], ymask: &[u64]) -> u64 {
        x_idx
            .iter()
            .map(|&i| {
                self.rows[i]
                    .iter()
                    .zip(ymask)
                    .map(|(r, m)| (r & m).count_ones() as u64)
                    .sum::<u64>()
            })
            .sum()
    }
}

/// `⌈r·times⌉` for a positive rational `r`.
fn ceil_times(r: Rat, times: usize) -> usize {
    (r * Rat::from_integer(times as i64)).ceil().to_integer() as usize
}

fn decide_regularity(
    view: &BipView,
    delta: Rat,
    p: Rat,
    mode: &RegularityMode,
) -> Result<RegularityVerdict> {
    check_delta(delta)?;
    check_p(p)?;
    let (a_len, b_len) = (view.a.len(), view.b.len());
    if mode.exact_affordable(a_len, b_len) {
        exact_regularity(view, delta, p)
    } else {
        sampled_regularity(view, delta, p, mode)
    }
}

/// The best deviation found by the exhaustive scan, as the scale-free
/// numerator `|e(X,Y)·|A||B| − e(A,B)·|X||Y||` together with the sizes
/// that normalize it.
struct ScanBest {
    num: i64,
    s: usize,
    t: usize,
    mask: u64,
    take_max: bool,
}

/// Candidate comparison: larger deviation first (cross-multiplied,
/// exact), then the larger subpair, then whichever came first.
fn improves(num: i64, s: usize, t: usize, best: &ScanBest) -> bool {
    let lhs = num as i128 * (best.s * best.t) as i128;
    let rhs = best.num as i128 * (s * t) as i128;
    lhs > rhs || (lhs == rhs && s + t > best.s + best.t)
}

/// Exhaustive subpair scan. Subsets of the smaller side are enumerated
/// directly; for each such `X` and each admissible size `t`, the
/// deviation is extremal at the `t` largest or `t` smallest
/// `X`-degrees on the other side (`|e·c₁ − c₂|` is convex in `e`), so
/// scanning those two prefix sums covers every subpair exactly.
fn exact_regularity(view: &BipView, delta: Rat, p: Rat) -> Result<RegularityVerdict> {
    let enumerate_a = view.a.len() <= view.b.len();
    let (s_len, t_len) = if enumerate_a {
        (view.a.len(), view.b.len())
    } else {
        (view.b.len(), view.a.len())
    };
    // Adjacency of each non-enumerated vertex as a mask over the
    // enumerated side (which the budget keeps below 64 bits).
    let side_masks: Vec<u64> = if enumerate_a {
        (0..t_len)
            .map(|j| {
                let mut m = 0u64;
                for (i, row) in view.rows.iter().enumerate() {
                    if row[j / 64] >> (j % 64) & 1 == 1 {
                        m |= 1 << i;
                    }
                }
                m
            })
            .collect()
    } else {
        view.rows.iter().map(|row| row[0]).collect()
    };

    let s_min = ceil_times(delta, s_len);
    let t_min = ceil_times(delta, t_len).max(1);
    let e0 = view.edges() as i64;
    let ab = (view.a.len() * view.b.len()) as i64;

    let mut best = ScanBest { num: 0, s: 1, t: 1, mask: 0, take_max: true };
    let mut degs = vec![0u32; t_len];
    let mut prefix = vec![0i64; t_len + 1];
    for mask in 1u64..(1u64 << s_len) {
        let s = mask.count_ones() as usize;
        if s < s_min {
            continue;
        }
        let mut total = 0i64;
        for (j, &sm) in side_masks.iter().enumerate() {
            let d = (sm & mask).count_ones();
            degs[j] = d;
            total += d as i64;
        }
        degs.sort_unstable();
        for (j, &d) in degs.iter().enumerate() {
            prefix[j + 1] = prefix[j] + d as i64;
        }
        for t in t_min..=t_len {
            let e_min = prefix[t];
            let e_max = total - prefix[t_len - t];
            for (e, take_max) in [(e_max, true), (e_min, false)] {
                let num = (e * ab - e0 * (s * t) as i64).abs();
                if improves(num, s, t, &best) {
                    best = ScanBest { num, s, t, mask, take_max };
                }
            }
        }
    }

    // dev = num / (p·|A||B|·s·t) against δ, exactly.
    let dev = Rat::new(best.num, ab * (best.s * best.t) as i64) / p;
    if dev <= delta {
        return Ok(RegularityVerdict::Regular);
    }
    let witness = rebuild_exact_witness(view, &side_masks, &best, enumerate_a, p);
    Ok(RegularityVerdict::Irregular { witness })
}

fn rebuild_exact_witness(
    view: &BipView,
    side_masks: &[u64],
    best: &ScanBest,
    enumerate_a: bool,
    p: Rat,
) -> IrregularityWitness {
    let s_side: &[Vertex] = if enumerate_a { &view.a } else { &view.b };
    let t_side: &[Vertex] = if enumerate_a { &view.b } else { &view.a };
    let s_vertices: Vec<Vertex> = (0..s_side.len())
        .filter(|i| best.mask >> i & 1 == 1)
        .map(|i| s_side[i])
        .collect();
    let mut ranked: Vec<(u32, usize)> = side_masks
        .iter()
        .enumerate()
        .map(|(j, &m)| ((m & best.mask).count_ones(), j))
        .collect();
    if best.take_max {
        ranked.sort_by_key(|&(d, j)| (std::cmp::Reverse(d), j));
    } else {
        ranked.sort_by_key(|&(d, j)| (d, j));
    }
    let e_sub: u64 = ranked[..best.t].iter().map(|&(d, _)| d as u64).sum();
    let mut t_vertices: Vec<Vertex> = ranked[..best.t].iter().map(|&(_, j)| t_side[j]).collect();
    t_vertices.sort_unstable();
    let (x, y) = if enumerate_a {
        (s_vertices, t_vertices)
    } else {
        (t_vertices, s_vertices)
    };
    let pair_density = density_value(view.edges(), view.a.len(), view.b.len(), p);
    let sub_density = density_value(e_sub, x.len(), y.len(), p);
    IrregularityWitness {
        x,
        y,
        pair_density,
        sub_density,
        deviation: (sub_density - pair_density).abs(),
    }
}

/// Sampling plus first-improvement densest/sparsest-subpair descent.
/// Deterministic for a fixed mode seed.
fn sampled_regularity(
    view: &BipView,
    delta: Rat,
    p: Rat,
    mode: &RegularityMode,
) -> Result<RegularityVerdict> {
    let (a_len, b_len) = (view.a.len(), view.b.len());
    let s_min = ceil_times(delta, a_len);
    let t_min = ceil_times(delta, b_len).max(1);
    let e0 = view.edges() as i128;
    let ab = (a_len * b_len) as i128;
    let mut rng = ChaCha12Rng::seed_from_u64(mode.seed);

    let dev_num = |e: u64, s: usize, t: usize| -> i128 { (e as i128 * ab - e0 * (s * t) as i128).abs() };
    let better = |n1: i128, s1: usize, t1: usize, n2: i128, s2: usize, t2: usize| -> bool {
        n1 * (s2 * t2) as i128 > n2 * (s1 * t1) as i128
    };

    let mut best: Option<(i128, Vec<bool>, Vec<bool>, usize, usize)> = None;
    for _ in 0..mode.samples.max(1) {
        let s = rng.gen_range(s_min..=a_len);
        let t = rng.gen_range(t_min..=b_len);
        let x_sel = random_subset(&mut rng, a_len, s);
        let y_sel = random_subset(&mut rng, b_len, t);
        let e = count_selected(view, &x_sel, &y_sel);
        let num = dev_num(e, s, t);
        if best
            .as_ref()
            .map_or(true, |(bn, _, _, bs, bt)| better(num, s, t, *bn, *bs, *bt))
        {
            best = Some((num, x_sel, y_sel, s, t));
        }
    }
    let (_, mut x_sel, mut y_sel, mut s, mut t) = best.expect("at least one sample");

    // First-improvement toggles until no single-vertex move raises the
    // deviation; strict increase guarantees termination.
    loop {
        let e_cur = count_selected(view, &x_sel, &y_sel);
        let cur = dev_num(e_cur, s, t);
        let mut moved = false;
        for i in 0..a_len {
            let (ns, nt) = (if x_sel[i] { s - 1 } else { s + 1 }, t);
            if ns < s_min.max(1) || ns > a_len {
                continue;
            }
            x_sel[i] = !x_sel[i];
            let num = dev_num(count_selected(view, &x_sel, &y_sel), ns, nt);
            if better(num, ns, nt, cur, s, t) {
                s = ns;
                moved = true;
                break;
            }
            x_sel[i] = !x_sel[i];
        }
        if !moved {
            for j in 0..b_len {
                let (ns, nt) = (s, if y_sel[j] { t - 1 } else { t + 1 });
                if nt < t_min || nt > b_len {
                    continue;
                }
                y_sel[j] = !y_sel[j];
                let num = dev_num(count_selected(view, &x_sel, &y_sel), ns, nt);
                if better(num, ns, nt, cur, s, t) {
                    t = nt;
                    moved = true;
                    break;
                }
                y_sel[j] = !y_sel[j];
            }
        }
        if !moved {
            break;
        }
    }

    let e = count_selected(view, &x_sel, &y_sel);
    let pair_density = density_value(view.edges(), a_len, b_len, p);
    let sub_density = density_value(e, s, t, p);
    let deviation = (sub_density - pair_density).abs();
    if deviation > delta {
        let x: Vec<Vertex> = (0..a_len).filter(|&i| x_sel[i]).map(|i| view.a[i]).collect();
        let y: Vec<Vertex> = (0..b_len).filter(|&j| y_sel[j]).map(|j| view.b[j]).collect();
        return Ok(RegularityVerdict::Irregular {
            witness: IrregularityWitness { x, y, pair_density, sub_density, deviation },
        });
    }
    Ok(RegularityVerdict::SampledNoRefutation { samples: mode.samples.max(1) })
}

fn random_subset(rng: &mut ChaCha12Rng, len: usize, size: usize) -> Vec<bool> {
    let idx = rand::seq::index::sample(rng, len, size);
    let mut sel = vec![false; len];
    for i in idx {
        sel[i] = true;
    }
    sel
}

fn count_selected(view: &BipView, x_sel: &[bool], y_sel: &[bool]) -> u64 {
    let mut ymask = vec![0u64; view.words];
    for (j, &on) in y_sel.iter().enumerate() {
        if on {
            ymask[j / 64] |= 1 << (j % 64);
        }
    }
    let x_idx: Vec<usize> = (0..x_sel.len()).filter(|&i| x_sel[i]).collect();
    view.count(&x_idx, &ymask)
}

/// A re-validated breach of upper-uniformity: disjoint qualifying sets
/// carrying more than `D·p·|X||Y|` edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformityWitness {
    pub x: Vec<Vertex>,
    pub y: Vec<Vertex>,
    pub edges: u64,
    pub allowed: Rat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum UniformityVerdict {
    /// Exhaustively certified (or vacuous: no qualifying pair exists).
    UpperUniform,
    Violation { witness: UniformityWitness },
    /// Sampling found no refutation; this certifies nothing.
    SampledNoRefutation { samples: usize },
}

/// Checks (ξ,D,p)-upper-uniformity: `e(X,Y) ≤ D·p·|X||Y|` for all
/// disjoint `X`, `Y` with `|X|,|Y| ≥ ξn`. Exhaustive while `2ⁿ ≤ budget`
/// (enumerating `X` and taking, per size, the heaviest complement
/// prefix); otherwise seeded sampling with greedy adversarial growth.
pub fn upper_uniformity_check(
    g: &Graph,
    xi: Rat,
    d_bound: Rat,
    p: Rat,
    budget: u64,
) -> Result<UniformityVerdict> {
    if xi <= Rat::from_integer(0) || xi > Rat::from_integer(1) {
        return Err(Error::invalid(format!("ξ must lie in (0,1], got {xi}")));
    }
    if d_bound <= Rat::from_integer(0) {
        return Err(Error::invalid(format!("D must be positive, got {d_bound}")));
    }
    check_p(p)?;
    let n = g.n();
    let m = ceil_times(xi, n).max(1);
    if 2 * m > n {
        return Ok(UniformityVerdict::UpperUniform);
    }
    let exact = n < 64 && 1u128.checked_shl(n as u32).map_or(false, |c| c <= u128::from(budget));
    if exact {
        exact_uniformity(g, m, d_bound, p)
    } else {
        sampled_uniformity(g, m, d_bound, p, budget)
    }
}

/// Re-derives a uniformity violation from the graph alone.
pub fn validate_uniformity_witness(
    g: &Graph,
    xi: Rat,
    d_bound: Rat,
    p: Rat,
    w: &UniformityWitness,
) -> Result<()> {
    let n = g.n();
    let m = ceil_times(xi, n).max(1);
    if w.x.len() < m || w.y.len() < m {
        return Err(Error::invalid("witness sides are below the ξ size floor"));
    }
    let mut seen = vec![false; n];
    for &v in w.x.iter().chain(&w.y) {
        if v >= n || seen[v] {
            return Err(Error::invalid("witness sides overlap or leave the graph"));
        }
        seen[v] = true;
    }
    let e = g.edges_between(&w.x, &w.y);
    let allowed = d_bound * p * Rat::from_integer((w.x.len() * w.y.len()) as i64);
    if e != w.edges || allowed != w.allowed {
        return Err(Error::invalid(format!(
            "witness does not re-derive: e = {e} vs {}, allowed = {allowed} vs {}",
            w.edges, w.allowed
        )));
    }
    if Rat::from_integer(e as i64) <= allowed {
        return Err(Error::invalid("claimed violation is within the allowance"));
    }
    Ok(())
}

/// Scale-free excess `e·pd·Dd − Dn·pn·s·t`; positive iff the pair
/// violates the allowance.
fn uniformity_margin(e: i64, s: usize, t: usize, d_bound: Rat, p: Rat) -> i128 {
    let allow = d_bound * p;
    e as i128 * (*allow.denom() as i128) - *allow.numer() as i128 * (s * t) as i128
}

fn exact_uniformity(g: &Graph, m: usize, d_bound: Rat, p: Rat) -> Result<UniformityVerdict> {
    let n = g.n();
    let mut best: Option<(i128, u64, usize)> = None;
    let mut ranked = Vec::with_capacity(n);
    for mask in 1u64..(1u64 << n) {
        let s = mask.count_ones() as usize;
        if s < m || s + m > n {
            continue;
        }
        let words = [mask];
        ranked.clear();
        ranked.extend(
            (0..n)
                .filter(|&v| mask >> v & 1 == 0)
                .map(|v| g.degree_into_mask(v, &words) as i64),
        );
        ranked.sort_unstable_by(|x, y| y.cmp(x));
        let mut e = 0i64;
        for (t_idx, &d) in ranked.iter().enumerate() {
            e += d;
            let t = t_idx + 1;
            if t < m {
                continue;
            }
            let margin = uniformity_margin(e, s, t, d_bound, p);
            if margin > 0 && best.as_ref().map_or(true, |&(bm, _, _)| margin > bm) {
                best = Some((margin, mask, t));
            }
        }
    }
    let Some((_, mask, t)) = best else {
        return Ok(UniformityVerdict::UpperUniform);
    };
    let x: Vec<Vertex> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
    let words = [mask];
    let mut outside: Vec<(i64, Vertex)> = (0..n)
        .filter(|&v| mask >> v & 1 == 0)
        .map(|v| (g.degree_into_mask(v, &words) as i64, v))
        .collect();
    outside.sort_by_key(|&(d, v)| (std::cmp::Reverse(d), v));
    let mut y: Vec<Vertex> = outside[..t].iter().map(|&(_, v)| v).collect();
    y.sort_unstable();
    let witness = finish_uniformity_witness(g, x, y, d_bound, p)?;
    Ok(UniformityVerdict::Violation { witness })
}

fn finish_uniformity_witness(
    g: &Graph,
    x: Vec<Vertex>,
    y: Vec<Vertex>,
    d_bound: Rat,
    p: Rat,
) -> Result<UniformityWitness> {
    let edges = g.edges_between(&x, &y);
    let allowed = d_bound * p * Rat::from_integer((x.len() * y.len()) as i64);
    Ok(UniformityWitness { x, y, edges, allowed })
}

fn sampled_uniformity(
    g: &Graph,
    m: usize,
    d_bound: Rat,
    p: Rat,
    budget: u64,
) -> Result<UniformityVerdict> {
    let n = g.n();
    let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(g.edge_set_hash(), &[budget]));
    let margin_of = |x: &[Vertex], y: &[Vertex]| -> i128 {
        uniformity_margin(g.edges_between(x, y) as i64, x.len(), y.len(), d_bound, p)
    };
    let mut best: Option<(i128, Vec<Vertex>, Vec<Vertex>)> = None;
    for _ in 0..UNIFORMITY_SAMPLES {
        let sx = rng.gen_range(m..=(n - m));
        let sy = rng.gen_range(m..=(n - sx));
        let both = rand::seq::index::sample(&mut rng, n, sx + sy).into_vec();
        let (x, y) = both.split_at(sx);
        let (mut x, mut y) = (x.to_vec(), y.to_vec());
        x.sort_unstable();
        y.sort_unstable();
        let margin = margin_of(&x, &y);
        if best.as_ref().map_or(true, |&(bm, _, _)| margin > bm) {
            best = Some((margin, x, y));
        }
    }
    let (_, mut x, mut y) = best.expect("at least one sample");

    // Greedy growth: add outside vertices to either side or drop members
    // (above the size floor) while the excess strictly increases.
    loop {
        let cur = margin_of(&x, &y);
        let mut moved = false;
        let mut in_any = vec![false; n];
        for &v in x.iter().chain(&y) {
            in_any[v] = true;
        }
        'moves: for v in 0..n {
            if !in_any[v] {
                for side in [0, 1] {
                    let (xs, ys) = trial_add(&x, &y, v, side);
                    if margin_of(&xs, &ys) > cur {
                        x = xs;
                        y = ys;
                        moved = true;
                        break 'moves;
                    }
                }
            } else if x.binary_search(&v).is_ok() && x.len() > m {
                let xs: Vec<Vertex> = x.iter().copied().filter(|&u| u != v).collect();
                if margin_of(&xs, &y) > cur {
                    x = xs;
                    moved = true;
                    break 'moves;
                }
            } else if y.binary_search(&v).is_ok() && y.len() > m {
                let ys: Vec<Vertex> = y.iter().copied().filter(|&u| u != v).collect();
                if margin_of(&x, &ys) > cur {
                    y = ys;
                    moved = true;
                    break 'moves;
                }
            }
        }
        if !moved {
            break;
        }
    }

    if margin_of(&x, &y) > 0 {
        let witness = finish_uniformity_witness(g, x, y, d_bound, p)?;
        return Ok(UniformityVerdict::Violation { witness });
    }
    Ok(UniformityVerdict::SampledNoRefutation { samples: UNIFORMITY_SAMPLES })
}

fn trial_add(x: &[Vertex], y: &[Vertex], v: Vertex, side: usize) -> (Vec<Vertex>, Vec<Vertex>) {
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    if side == 0 {
        xs.push(v);
        xs.sort_unstable();
    } else {
        ys.push(v);
        ys.sort_unstable();
    }
    (xs, ys)
}
