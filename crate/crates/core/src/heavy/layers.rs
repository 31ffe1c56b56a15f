//! The inductive layered construction: disjoint vertex layers with
//! colour allocations refined level by level, post-hoc condition checks,
//! and exact counting of admissible rainbow paths through the layers.

use super::lemma::{select_w, Part3Outcome};
use super::{classify_edges, ColourAllocation, LambdaValue};
use crate::graph::ColouredGraph;
use crate::{Colour, Error, Result, Vertex};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// The numeric cascade driving the construction. Defaults follow the
/// closed formulas (`γ_i = (1/4)(1/20)^i`, `θ = γ_{k−1}/2^{4k}`, …),
/// which are astronomically small for honest `k`; overrides exist so
/// finite experiments can run in a regime where the thresholds bite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LayerConstants {
    pub k: usize,
    pub rho: f64,
    pub p: f64,
    pub gammas: Vec<f64>,
    pub theta: f64,
    pub d: f64,
    pub xi: f64,
    pub epsilon: f64,
    pub alpha: f64,
}

impl LayerConstants {
    /// The literal defaults. Note `α = ξ² = (ρ²d)²` couples α to ρ; the
    /// formulas are applied as written.
    pub fn from_formulas(k: usize, rho: f64, p: f64) -> Result<Self> {
        if !(2..=6).contains(&k) {
            return Err(Error::invalid(format!("k must lie in 2..=6, got {k}")));
        }
        if !(rho > 0.0 && rho <= 1.0) || !(p > 0.0 && p <= 1.0) {
            return Err(Error::invalid("need ρ ∈ (0,1] and p ∈ (0,1]"));
        }
        let gammas: Vec<f64> = (0..k).map(|i| 0.25 * 0.05f64.powi(i as i32)).collect();
        let theta = gammas[k - 1] / 2f64.powi(4 * k as i32);
        let d = 0.25
            * (theta / 4.0).powi(2 * k as i32)
            * gammas[1..].iter().map(|g| g * g).product::<f64>();
        let xi = rho * rho * d;
        Ok(LayerConstants {
            k,
            rho,
            p,
            gammas,
            theta,
            d,
            xi,
            epsilon: xi * xi,
            alpha: xi * xi,
        })
    }

    fn apply(mut self, overrides: &LayerOverrides) -> Result<Self> {
        if let Some(g) = &overrides.gammas {
            if g.len() != self.k {
                return Err(Error::invalid(format!(
                    "override supplies {} γ values for k = {}",
                    g.len(),
                    self.k
                )));
            }
            self.gammas = g.clone();
        }
        if let Some(v) = overrides.theta {
            self.theta = v;
        }
        if let Some(v) = overrides.d {
            self.d = v;
        }
        if let Some(v) = overrides.xi {
            self.xi = v;
        }
        if let Some(v) = overrides.epsilon {
            self.epsilon = v;
        }
        if let Some(v) = overrides.alpha {
            self.alpha = v;
        }
        Ok(self)
    }
}

/// Optional replacements for individual constants; `None` keeps the
/// formula value.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct LayerOverrides {
    pub gammas: Option<Vec<f64>>,
    pub theta: Option<f64>,
    pub d: Option<f64>,
    pub xi: Option<f64>,
    pub epsilon: Option<f64>,
    pub alpha: Option<f64>,
    /// Density used by every quantitative check; defaults to the host's
    /// empirical density.
    pub p: Option<f64>,
}

/// One re-checked condition: `margin ≥ 0` iff the condition holds, as
/// (actual − required) for lower bounds and (allowed − actual) for upper
/// bounds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub layer: usize,
    pub condition: String,
    pub pass: bool,
    pub margin: f64,
    pub detail: String,
}

/// Disjoint layers `U_0..U_{k−1}` with their allocations and the
/// constants they were built under. Construction never hands one back
/// without re-validating every condition from scratch; the diagnostics
/// carry the margins.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LayerSystem {
    pub k: usize,
    pub n: usize,
    pub constants: LayerConstants,
    pub layers: Vec<Vec<Vertex>>,
    pub allocations: Vec<ColourAllocation>,
    pub diagnostics: Vec<ConditionCheck>,
}

impl LayerSystem {
    pub fn all_conditions_pass(&self) -> bool {
        self.diagnostics.iter().all(|c| c.pass)
    }
}

/// The inductive step that could not be completed, with its margin.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LayerFailure {
    pub layer: usize,
    pub condition: String,
    pub margin: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum LayerBuildOutcome {
    Built(LayerSystem),
    Aborted(LayerFailure),
}

impl LayerBuildOutcome {
    pub fn built(&self) -> Option<&LayerSystem> {
        match self {
            LayerBuildOutcome::Built(ls) => Some(ls),
            LayerBuildOutcome::Aborted(_) => None,
        }
    }
}

/// Runs the layered construction from the seed set `S = U_0` (allocated
/// all-★). Each later layer filters the remaining pool by incoming
/// fresh-colour degree, drops vertices crowded by one λ colour class,
/// assigns the majority qualifying colour (threshold `θp|U_{i−1}|`, ties
/// to the smallest colour) or ★, and resolves the ★-count case split —
/// taking the well-spread set `W` from the light-edge orientation
/// argument in the heavy case of middle layers. All conditions are then
/// re-checked from scratch; any failure aborts with a localized margin.
pub fn build_layers(
    cg: &ColouredGraph,
    s: &[Vertex],
    k: usize,
    overrides: &LayerOverrides,
) -> Result<LayerBuildOutcome> {
    let n = cg.n();
    if s.is_empty() {
        return Err(Error::invalid("seed set S is empty"));
    }
    let mut seen = vec![false; n];
    for &v in s {
        if v >= n {
            return Err(Error::invalid(format!("S contains out-of-range vertex {v}")));
        }
        if seen[v] {
            return Err(Error::invalid(format!("S repeats vertex {v}")));
        }
        seen[v] = true;
    }
    let rho = s.len() as f64 / n as f64;
    let p = overrides.p.unwrap_or_else(|| cg.graph().empirical_density());
    let constants = LayerConstants::from_formulas(k, rho, p)?.apply(overrides)?;

    let mut used = seen;
    let mut u0: Vec<Vertex> = s.to_vec();
    u0.sort_unstable();
    let mut layers = vec![u0.clone()];
    let mut allocations = vec![ColourAllocation::all_star(&u0)?];

    for i in 1..k {
        let prev = &layers[i - 1];
        let lam_prev = &allocations[i - 1];
        let prev_len = prev.len() as f64;
        let in_prev = {
            let mut m = vec![false; n];
            for &v in prev {
                m[v] = true;
            }
            m
        };

        // Fresh-colour degrees into the previous layer: edge (u,z) with
        // u ∈ U_{i−1} counts when χ(uz) ≠ λ_{i−1}(u).
        let pool: Vec<Vertex> = (0..n).filter(|&v| !used[v]).collect();
        let mut fresh_counts: Vec<BTreeMap<Colour, u64>> = vec![BTreeMap::new(); n];
        for (idx, &(a, b)) in cg.graph().edges().iter().enumerate() {
            let chi = cg.colour_at(idx);
            for (u, z) in [(a, b), (b, a)] {
                if in_prev[u] && !used[z] {
                    let lam_u = lam_prev.get(u).expect("layer is allocation domain");
                    if lam_u.light_against(chi) {
                        *fresh_counts[z].entry(chi).or_insert(0) += 1;
                    }
                }
            }
        }

        let z_gate = constants.gammas[i - 1] / 4.0 * p * prev_len;
        let crowd_limit = constants.alpha * p * n as f64;
        let class_masks: Vec<Vec<u64>> = lam_prev
            .colours_used()
            .into_iter()
            .map(|c| cg.graph().mask_of(&lam_prev.preimage(c)))
            .collect();

        let quota = constants.theta * p * prev_len;
        let mut star_members = Vec::new();
        let mut coloured_members: Vec<(Vertex, Colour)> = Vec::new();
        for &z in &pool {
            let fresh_total: u64 = fresh_counts[z].values().sum();
            if (fresh_total as f64) < z_gate {
                continue;
            }
            let crowded = class_masks
                .iter()
                .any(|mask| cg.graph().degree_into_mask(z, mask) as f64 > crowd_limit);
            if crowded {
                continue;
            }
            let mut best: Option<(u64, Colour)> = None;
            for (&c, &count) in &fresh_counts[z] {
                if (count as f64) >= quota && best.map_or(true, |(bc, _)| count > bc) {
                    best = Some((count, c));
                }
            }
            match best {
                Some((_, c)) => coloured_members.push((z, c)),
                None => star_members.push(z),
            }
        }

        let target = (constants.gammas[i] * n as f64).ceil() as usize;
        if target == 0 {
            return Err(Error::invalid(format!("γ_{i}·n rounds to an empty layer")));
        }

        let (members, lambda) = if star_members.len() >= target {
            let chosen = star_members[..target].to_vec();
            let lambda = ColourAllocation::all_star(&chosen)?;
            (chosen, lambda)
        } else {
            let u_size = if i == k - 1 { target } else { 8 * target };
            if coloured_members.len() < u_size {
                return Ok(LayerBuildOutcome::Aborted(LayerFailure {
                    layer: i,
                    condition: "candidate-pool".into(),
                    margin: coloured_members.len() as f64 - u_size as f64,
                    detail: format!(
                        "{} ★-vertices (need {target}) and {} coloured candidates (need {u_size})",
                        star_members.len(),
                        coloured_members.len()
                    ),
                }));
            }
            let candidates: Vec<(Vertex, Colour)> = coloured_members[..u_size].to_vec();
            let cand_vertices: Vec<Vertex> = candidates.iter().map(|&(v, _)| v).collect();
            let lam_cand = ColourAllocation::from_pairs(
                &candidates
                    .iter()
                    .map(|&(v, c)| (v, LambdaValue::Colour(c)))
                    .collect::<Vec<_>>(),
            )?;
            if i == k - 1 {
                (cand_vertices, lam_cand)
            } else {
                let table = classify_edges(cg, &cand_vertices, &lam_cand)?;
                match select_w(cg, &cand_vertices, &lam_cand, &table, p) {
                    Part3Outcome::W { vertices, .. } => {
                        let lambda = lam_cand.restrict(&vertices)?;
                        (vertices, lambda)
                    }
                    Part3Outcome::Failure { step, margin, detail } => {
                        return Ok(LayerBuildOutcome::Aborted(LayerFailure {
                            layer: i,
                            condition: format!("W-selection-{step}"),
                            margin,
                            detail,
                        }));
                    }
                }
            }
        };

        for &v in &members {
            used[v] = true;
        }
        layers.push(members);
        allocations.push(lambda);
    }

    let mut ls = LayerSystem {
        k,
        n,
        constants,
        layers,
        allocations,
        diagnostics: Vec::new(),
    };
    let checks = validate_layer_system(cg, &ls)?;
    if let Some(fail) = checks.iter().find(|c| !c.pass) {
        return Ok(LayerBuildOutcome::Aborted(LayerFailure {
            layer: fail.layer,
            condition: fail.condition.clone(),
            margin: fail.margin,
            detail: fail.detail.clone(),
        }));
    }
    ls.diagnostics = checks;
    Ok(LayerBuildOutcome::Built(ls))
}

/// Re-derives every condition of a layer system from scratch. The five
/// conditions per layer `i`:
/// (i) `|U_i| = γ_i·n` within rounding; (ii) λ_i all-★ or α-heavy;
/// (iii) every `u ∈ U_i` keeps `θp|U_{i−1}|` good edges in its own
/// colour, or — for ★ — outside every set of `2k−1` colours;
/// (iv) no `u ∈ U_i` sends more than `(θ/2)p|U_{i−1}|` edges into any
/// `2k−1` λ_{i−1} colour classes; (v) middle layers keep `γ_i pn|U_i|`
/// fresh-colour edges into the remaining pool.
///
/// For (iii)(b) and (iv) the quantification over colour sets `C` with
/// `|C| ≤ 2k−1` is evaluated exactly via the extremal `C`: the sum of
/// the `2k−1` largest per-colour counts (removing the heaviest classes
/// minimizes what survives and maximizes what is hit, so the set form
/// and the top-sum form are equivalent).
pub fn validate_layer_system(cg: &ColouredGraph, ls: &LayerSystem) -> Result<Vec<ConditionCheck>> {
    let n = ls.n;
    if cg.n() != n {
        return Err(Error::invalid("layer system built over a different host"));
    }
    let k = ls.k;
    if ls.layers.len() != k || ls.allocations.len() != k {
        return Err(Error::invalid("layer/allocation count mismatch"));
    }
    let mut layer_of: Vec<Option<usize>> = vec![None; n];
    for (i, layer) in ls.layers.iter().enumerate() {
        for &v in layer {
            if layer_of[v].is_some() {
                return Err(Error::invalid(format!("vertex {v} lies in two layers")));
            }
            layer_of[v] = Some(i);
        }
    }
    let c = &ls.constants;
    let top = 2 * k - 1;
    let mut checks = Vec::new();

    for i in 0..k {
        let layer = &ls.layers[i];
        let lam = &ls.allocations[i];
        let len = layer.len() as f64;

        let want = c.gammas[i] * n as f64;
        let size_ok = layer.len() == want.floor() as usize || layer.len() == want.ceil() as usize;
        checks.push(ConditionCheck {
            layer: i,
            condition: "i".into(),
            pass: size_ok,
            margin: len - want,
            detail: format!("|U_{i}| = {} vs γ_{i}·n = {want:.3}", layer.len()),
        });

        if lam.domain() != layer.as_slice() {
            return Err(Error::invalid(format!(
                "allocation domain differs from layer {i}"
            )));
        }
        let heavy_ok = lam.is_all_star() || lam.is_alpha_heavy(cg, c.alpha);
        let violation = lam.alpha_heavy_violation(cg, c.alpha);
        checks.push(ConditionCheck {
            layer: i,
            condition: "ii".into(),
            pass: heavy_ok,
            margin: if heavy_ok { 0.0 } else { -1.0 },
            detail: match violation {
                Some((v, col)) if !heavy_ok => {
                    format!("vertex {v} claims colour {col} without α-heaviness")
                }
                _ => "all-★ or α-heavy".into(),
            },
        });

        if i >= 1 {
            let lam_prev = &ls.allocations[i - 1];
            let prev_len = ls.layers[i - 1].len() as f64;
            let quota = c.theta * c.p * prev_len;
            let cap = c.theta / 2.0 * c.p * prev_len;

            let mut worst_good = f64::INFINITY;
            let mut worst_good_detail = String::from("no vertices");
            let mut worst_cap = f64::INFINITY;
            let mut worst_cap_detail = String::from("no vertices");
            for &u in layer {
                // Good edges: into U_{i−1}, avoiding the lower λ value.
                let mut good: BTreeMap<Colour, u64> = BTreeMap::new();
                let mut class_hits: BTreeMap<Colour, u64> = BTreeMap::new();
                for v in cg.graph().neighbors(u) {
                    if layer_of[v] != Some(i - 1) {
                        continue;
                    }
                    let chi = cg.colour(u, v).expect("neighbour implies edge");
                    let lam_v = lam_prev.get(v).expect("layer is allocation domain");
                    if lam_v.light_against(chi) {
                        *good.entry(chi).or_insert(0) += 1;
                    }
                    if let Some(col) = lam_v.colour() {
                        *class_hits.entry(col).or_insert(0) += 1;
                    }
                }
                let margin = match lam.get(u).expect("layer is allocation domain") {
                    LambdaValue::Colour(col) => {
                        good.get(&col).copied().unwrap_or(0) as f64 - quota
                    }
                    LambdaValue::Star => {
                        let total: u64 = good.values().sum();
                        let mut counts: Vec<u64> = good.values().copied().collect();
                        counts.sort_unstable_by(|a, b| b.cmp(a));
                        let top_sum: u64 = counts.iter().take(top).sum();
                        (total - top_sum) as f64 - quota
                    }
                };
                if margin < worst_good {
                    worst_good = margin;
                    worst_good_detail = format!("vertex {u}");
                }
                let mut hits: Vec<u64> = class_hits.values().copied().collect();
                hits.sort_unstable_by(|a, b| b.cmp(a));
                let hit_sum: u64 = hits.iter().take(top).sum();
                let cap_margin = cap - hit_sum as f64;
                if cap_margin < worst_cap {
                    worst_cap = cap_margin;
                    worst_cap_detail = format!("vertex {u}");
                }
            }
            checks.push(ConditionCheck {
                layer: i,
                condition: "iii".into(),
                pass: worst_good >= 0.0,
                margin: if worst_good.is_finite() { worst_good } else { 0.0 },
                detail: format!("worst good-edge slack at {worst_good_detail} (quota {quota:.4})"),
            });
            checks.push(ConditionCheck {
                layer: i,
                condition: "iv".into(),
                pass: worst_cap >= 0.0,
                margin: if worst_cap.is_finite() { worst_cap } else { 0.0 },
                detail: format!(
                    "worst {top}-class crowding slack at {worst_cap_detail} (cap {cap:.4})"
                ),
            });
        }

        if i + 2 <= k {
            // The onward pool excludes layers 0..=i only; later layers
            // are still unclaimed at this step and stay eligible.
            let mut onward = 0u64;
            for &u in layer {
                let lam_u = lam.get(u).expect("layer is allocation domain");
                for v in cg.graph().neighbors(u) {
                    if layer_of[v].map_or(true, |l| l > i)
                        && lam_u.light_against(cg.colour(u, v).expect("neighbour implies edge"))
                    {
                        onward += 1;
                    }
                }
            }
            let want_onward = c.gammas[i] * c.p * n as f64 * len;
            checks.push(ConditionCheck {
                layer: i,
                condition: "v".into(),
                pass: onward as f64 >= want_onward,
                margin: onward as f64 - want_onward,
                detail: format!("{onward} onward fresh-colour edges vs {want_onward:.3}"),
            });
        }
    }
    Ok(checks)
}

/// Per-level count of admissible rainbow paths against its threshold.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathLevelCount {
    pub ell: usize,
    pub count: u64,
    pub beta: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LayeredPathCount {
    pub levels: Vec<PathLevelCount>,
}

/// Exact DFS count, for each `ℓ = 1..k`, of admissible rainbow paths on
/// `2ℓ` vertices running `U_{k−ℓ}, …, U_{k−1}, U_{k−1}, …, U_{k−ℓ}`.
/// Admissibility at every nesting level `j`: the two `U_{k−j}` endpoints
/// carry λ values that coincide only if both are ★ and that avoid all
/// colours of the enclosed subpath. At `ℓ = 1` this specializes to
/// "all edges" on an all-★ deepest layer and to "balanced and totally
/// light" on a coloured one. Counts are unordered; every counted path's
/// middle is itself counted at the previous level.
pub fn count_layered_paths(ls: &LayerSystem, cg: &ColouredGraph) -> Result<LayeredPathCount> {
    let k = ls.k;
    if cg.n() != ls.n {
        return Err(Error::invalid("layer system built over a different host"));
    }
    let mut layer_of: Vec<Option<usize>> = vec![None; ls.n];
    for (i, layer) in ls.layers.iter().enumerate() {
        for &v in layer {
            layer_of[v] = Some(i);
        }
    }

    let mut directed = vec![0u64; k + 1];
    let deepest = &ls.layers[k - 1];
    let mut state = PathState {
        cg,
        ls,
        layer_of: &layer_of,
        colours: Vec::new(),
        x_tip: 0,
        y_tip: 0,
    };
    for &x1 in deepest {
        for y1 in cg.graph().neighbors(x1) {
            if state.layer_of[y1] != Some(k - 1) {
                continue;
            }
            let chi = cg.colour(x1, y1).expect("neighbour implies edge");
            state.colours.push(chi);
            if state.endpoints_admissible(k - 1, x1, y1) {
                directed[1] += 1;
                state.x_tip = x1;
                state.y_tip = y1;
                extend_level(&mut state, 2, &mut directed);
            }
            state.colours.pop();
        }
    }

    let c = &ls.constants;
    let levels = (1..=k)
        .map(|ell| {
            debug_assert_eq!(directed[ell] % 2, 0, "reversal pairs up directed paths");
            let count = directed[ell] / 2;
            let mut beta = (c.theta / 4.0).powi(2 * ell as i32) * c.p.powi(2 * ell as i32 - 1);
            for j in 1..=ell {
                let size = ls.layers[k - j].len() as f64;
                beta *= size * size;
            }
            PathLevelCount {
                ell,
                count,
                beta,
                pass: count as f64 >= beta,
            }
        })
        .collect();
    Ok(LayeredPathCount { levels })
}

struct PathState<'a> {
    cg: &'a ColouredGraph,
    ls: &'a LayerSystem,
    layer_of: &'a [Option<usize>],
    colours: Vec<Colour>,
    x_tip: Vertex,
    y_tip: Vertex,
}

impl PathState<'_> {
    /// The two-endpoint admissibility rule at layer index `li`.
    fn endpoints_admissible(&self, li: usize, x: Vertex, y: Vertex) -> bool {
        let lam = &self.ls.allocations[li];
        let lx = lam.get(x).expect("layer is allocation domain");
        let ly = lam.get(y).expect("layer is allocation domain");
        if lx == ly && !lx.is_star() {
            return false;
        }
        for l in [lx, ly] {
            if let Some(col) = l.colour() {
                if self.colours.contains(&col) {
                    return false;
                }
            }
        }
        true
    }
}

fn extend_level(state: &mut PathState, j: usize, directed: &mut [u64]) {
    let k = state.ls.k;
    if j > k {
        return;
    }
    let li = k - j;
    let (x_prev, y_prev) = (state.x_tip, state.y_tip);
    let x_candidates: Vec<Vertex> = state
        .cg
        .graph()
        .neighbors(x_prev)
        .filter(|&v| state.layer_of[v] == Some(li))
        .collect();
    for x in x_candidates {
        let chi_x = state.cg.colour(x, x_prev).expect("neighbour implies edge");
        if state.colours.contains(&chi_x) {
            continue;
        }
        state.colours.push(chi_x);
        let y_candidates: Vec<Vertex> = state
            .cg
            .graph()
            .neighbors(y_prev)
            .filter(|&v| v != x && state.layer_of[v] == Some(li))
            .collect();
        for y in y_candidates {
            let chi_y = state.cg.colour(y, y_prev).expect("neighbour implies edge");
            if state.colours.contains(&chi_y) {
                continue;
            }
            state.colours.push(chi_y);
            if state.endpoints_admissible(li, x, y) {
                directed[j] += 1;
                state.x_tip = x;
                state.y_tip = y;
                extend_level(state, j + 1, directed);
            }
            state.colours.pop();
        }
        state.colours.pop();
    }
    state.x_tip = x_prev;
    state.y_tip = y_prev;
}
