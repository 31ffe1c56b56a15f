//! Heaviness taxonomy for coloured graphs: per-vertex heavy colours,
//! colour allocations with the ★ sentinel, edge classes
//! (balanced / light / totally light), the two structural lemmas built on
//! them, and the layered construction with its rainbow-path counts.

mod layers;
mod lemma;

pub use layers::{
    build_layers, count_layered_paths, validate_layer_system, ConditionCheck, LayerBuildOutcome,
    LayerConstants, LayerFailure, LayerOverrides, LayerSystem, LayeredPathCount, PathLevelCount,
};
pub use lemma::{
    heavy_lemma_verify, lex_via_orientation, HeavyLemmaReport, LexOrientationOutcome,
    LexOrientationReport, Part1Report, Part2Report, Part3Outcome,
};

use crate::graph::ColouredGraph;
use crate::{Colour, Error, Result, Vertex};
use serde::{Deserialize, Serialize};

/// Value of a colour allocation at one vertex: a genuine colour or the
/// ★ sentinel. ★ equals ★ and differs from every colour; no edge ever
/// carries ★.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LambdaValue {
    Star,
    Colour(Colour),
}

impl LambdaValue {
    /// True when an edge of colour `chi` is light at a vertex holding
    /// this value: ★ never matches an edge colour.
    pub fn light_against(self, chi: Colour) -> bool {
        match self {
            LambdaValue::Star => true,
            LambdaValue::Colour(c) => c != chi,
        }
    }

    pub fn colour(self) -> Option<Colour> {
        match self {
            LambdaValue::Star => None,
            LambdaValue::Colour(c) => Some(c),
        }
    }

    pub fn is_star(self) -> bool {
        matches!(self, LambdaValue::Star)
    }
}

impl std::fmt::Display for LambdaValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LambdaValue::Star => write!(f, "*"),
            LambdaValue::Colour(c) => write!(f, "{c}"),
        }
    }
}

// Serialized as the bare colour number, or the string "*" for ★, so
// allocation maps read naturally in JSON reports.
impl Serialize for LambdaValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LambdaValue::Star => s.serialize_str("*"),
            LambdaValue::Colour(c) => s.serialize_u32(*c),
        }
    }
}

impl<'de> Deserialize<'de> for LambdaValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = LambdaValue;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                write!(f, "a colour id or \"*\"")
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> std::result::Result<LambdaValue, E> {
                u32::try_from(v)
                    .map(LambdaValue::Colour)
                    .map_err(|_| E::custom("colour id out of range"))
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> std::result::Result<LambdaValue, E> {
                u32::try_from(v)
                    .map(LambdaValue::Colour)
                    .map_err(|_| E::custom("colour id out of range"))
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> std::result::Result<LambdaValue, E> {
                if v == "*" {
                    Ok(LambdaValue::Star)
                } else {
                    Err(E::custom("expected \"*\""))
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// Per-vertex heaviness at a fixed `α`: a vertex is heavy with colour
/// `c` when at least `α·d(v)` of its incident edges carry `c`, and
/// rainbow when no colour qualifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HeavyStatus {
    Heavy { colour: Colour },
    Rainbow,
}

/// Result of [`classify_heavy`]: one status and one threshold
/// (`α·d(v)`) per vertex.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HeavyClassification {
    pub alpha: f64,
    pub statuses: Vec<HeavyStatus>,
    pub thresholds: Vec<f64>,
}

impl HeavyClassification {
    pub fn status(&self, v: Vertex) -> HeavyStatus {
        self.statuses[v]
    }

    pub fn heavy_colour(&self, v: Vertex) -> Option<Colour> {
        match self.statuses[v] {
            HeavyStatus::Heavy { colour } => Some(colour),
            HeavyStatus::Rainbow => None,
        }
    }

    pub fn heavy_vertices(&self) -> Vec<Vertex> {
        (0..self.statuses.len())
            .filter(|&v| matches!(self.statuses[v], HeavyStatus::Heavy { .. }))
            .collect()
    }
}

/// Classifies every vertex as heavy (with the most frequent qualifying
/// colour, ties to the smallest colour id) or rainbow, by an exact scan
/// of incident colour multiplicities.
pub fn classify_heavy(cg: &ColouredGraph, alpha: f64) -> Result<HeavyClassification> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!("α must lie in (0,1), got {alpha}")));
    }
    let n = cg.n();
    let mut statuses = Vec::with_capacity(n);
    let mut thresholds = Vec::with_capacity(n);
    for v in 0..n {
        let threshold = alpha * cg.graph().degree(v) as f64;
        let mut best: Option<(usize, Colour)> = None;
        for (colour, count) in cg.incident_colour_counts(v) {
            if (count as f64) < threshold {
                continue;
            }
            // Ascending colour order: strict improvement keeps the
            // smallest colour among tied multiplicities.
            if best.map_or(true, |(bc, _)| count > bc) {
                best = Some((count, colour));
            }
        }
        statuses.push(match best {
            Some((_, colour)) => HeavyStatus::Heavy { colour },
            None => HeavyStatus::Rainbow,
        });
        thresholds.push(threshold);
    }
    Ok(HeavyClassification { alpha, statuses, thresholds })
}

/// A partial map λ from a vertex set `U` into colours-plus-★, stored as
/// a sorted domain with parallel values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColourAllocation {
    domain: Vec<Vertex>,
    values: Vec<LambdaValue>,
}

impl ColourAllocation {
    pub fn from_pairs(pairs: &[(Vertex, LambdaValue)]) -> Result<Self> {
        let mut sorted: Vec<(Vertex, LambdaValue)> = pairs.to_vec();
        sorted.sort_by_key(|&(v, _)| v);
        if sorted.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::invalid("duplicate vertex in allocation"));
        }
        let (domain, values) = sorted.into_iter().unzip();
        Ok(ColourAllocation { domain, values })
    }

    /// λ ≡ ★ on the given domain.
    pub fn all_star(domain: &[Vertex]) -> Result<Self> {
        let pairs: Vec<_> = domain.iter().map(|&v| (v, LambdaValue::Star)).collect();
        ColourAllocation::from_pairs(&pairs)
    }

    /// λ built by evaluating `f` over the domain.
    pub fn assign(domain: &[Vertex], mut f: impl FnMut(Vertex) -> LambdaValue) -> Result<Self> {
        let pairs: Vec<_> = domain.iter().map(|&v| (v, f(v))).collect();
        ColourAllocation::from_pairs(&pairs)
    }

    pub fn domain(&self) -> &[Vertex] {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn get(&self, v: Vertex) -> Option<LambdaValue> {
        self.domain
            .binary_search(&v)
            .ok()
            .map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, LambdaValue)> + '_ {
        self.domain.iter().copied().zip(self.values.iter().copied())
    }

    pub fn is_all_star(&self) -> bool {
        self.values.iter().all(|v| v.is_star())
    }

    pub fn star_preimage(&self) -> Vec<Vertex> {
        self.iter().filter(|(_, l)| l.is_star()).map(|(v, _)| v).collect()
    }

    pub fn preimage(&self, c: Colour) -> Vec<Vertex> {
        self.iter()
            .filter(|&(_, l)| l == LambdaValue::Colour(c))
            .map(|(v, _)| v)
            .collect()
    }

    /// Distinct genuine colours in the range.
    pub fn colours_used(&self) -> Vec<Colour> {
        let set: std::collections::BTreeSet<Colour> =
            self.values.iter().filter_map(|l| l.colour()).collect();
        set.into_iter().collect()
    }

    /// Restriction to a subset of the domain.
    pub fn restrict(&self, subset: &[Vertex]) -> Result<Self> {
        let pairs: Result<Vec<_>> = subset
            .iter()
            .map(|&v| {
                self.get(v)
                    .map(|l| (v, l))
                    .ok_or_else(|| Error::invalid(format!("{v} not in allocation domain")))
            })
            .collect();
        ColourAllocation::from_pairs(&pairs?)
    }

    /// First vertex whose claimed colour is not `α`-heavy for it, if any.
    /// ★ assignments claim nothing and never violate.
    pub fn alpha_heavy_violation(&self, cg: &ColouredGraph, alpha: f64) -> Option<(Vertex, Colour)> {
        for (v, lam) in self.iter() {
            if let LambdaValue::Colour(c) = lam {
                let count = cg
                    .incident_colour_counts(v)
                    .into_iter()
                    .find(|&(col, _)| col == c)
                    .map_or(0, |(_, k)| k);
                if (count as f64) < alpha * cg.graph().degree(v) as f64 {
                    return Some((v, c));
                }
            }
        }
        None
    }

    pub fn is_alpha_heavy(&self, cg: &ColouredGraph, alpha: f64) -> bool {
        self.alpha_heavy_violation(cg, alpha).is_none()
    }
}

/// Class flags for one edge of `G[U]`, endpoints stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClassRecord {
    pub u: Vertex,
    pub v: Vertex,
    pub colour: Colour,
    /// λ(u) ≠ λ(v), with ★ equal to ★.
    pub balanced: bool,
    /// χ(uv) ≠ λ(u) (light at the smaller endpoint).
    pub u_light: bool,
    /// χ(uv) ≠ λ(v) (light at the larger endpoint).
    pub v_light: bool,
    pub totally_light: bool,
}

/// Edge classes of `G[U]` under an allocation λ, sorted by endpoint
/// pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeClassTable {
    records: Vec<EdgeClassRecord>,
}

impl EdgeClassTable {
    pub fn records(&self) -> &[EdgeClassRecord] {
        &self.records
    }

    pub fn record_for(&self, u: Vertex, v: Vertex) -> Option<&EdgeClassRecord> {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.records
            .binary_search_by_key(&(a, b), |r| (r.u, r.v))
            .ok()
            .map(|i| &self.records[i])
    }

    pub fn balanced_count(&self) -> u64 {
        self.records.iter().filter(|r| r.balanced).count() as u64
    }

    pub fn totally_light_count(&self) -> u64 {
        self.records.iter().filter(|r| r.totally_light).count() as u64
    }

    pub fn balanced_totally_light_count(&self) -> u64 {
        self.records
            .iter()
            .filter(|r| r.balanced && r.totally_light)
            .count() as u64
    }
}

/// Computes the balanced / light / totally-light flags for every edge of
/// `G[U]`. Fails if λ is undefined at an endpoint of such an edge.
pub fn classify_edges(
    cg: &ColouredGraph,
    u_set: &[Vertex],
    lambda: &ColourAllocation,
) -> Result<EdgeClassTable> {
    let mut in_u = vec![false; cg.n()];
    for &v in u_set {
        if v >= cg.n() {
            return Err(Error::invalid(format!("U contains out-of-range vertex {v}")));
        }
        in_u[v] = true;
    }
    let mut records = Vec::new();
    for (i, &(u, v)) in cg.graph().edges().iter().enumerate() {
        if !in_u[u] || !in_u[v] {
            continue;
        }
        let lam_u = lambda
            .get(u)
            .ok_or_else(|| Error::invalid(format!("λ undefined at endpoint {u}")))?;
        let lam_v = lambda
            .get(v)
            .ok_or_else(|| Error::invalid(format!("λ undefined at endpoint {v}")))?;
        let colour = cg.colour_at(i);
        let u_light = lam_u.light_against(colour);
        let v_light = lam_v.light_against(colour);
        records.push(EdgeClassRecord {
            u,
            v,
            colour,
            balanced: lam_u != lam_v,
            u_light,
            v_light,
            totally_light: u_light && v_light,
        });
    }
    Ok(EdgeClassTable { records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{sample_gnp, GnpSpec, Graph};
    use rand::{Rng, SeedableRng};

    #[test]
    fn star_centre_and_leaves_heavy() {
        let mut g = Graph::empty(5);
        for v in 1..5 {
            g.add_edge(0, v);
        }
        let cg = ColouredGraph::monochromatic(g, 0);
        let hc = classify_heavy(&cg, 0.5).unwrap();
        for v in 0..5 {
            assert_eq!(hc.status(v), HeavyStatus::Heavy { colour: 0 });
        }
        assert_eq!(hc.thresholds[0], 2.0);
        assert_eq!(hc.thresholds[1], 0.5);
    }

    #[test]
    fn rainbow_triangle_all_rainbow() {
        let cg = ColouredGraph::rainbow(Graph::complete(3));
        let hc = classify_heavy(&cg, 2.0 / 3.0).unwrap();
        for v in 0..3 {
            assert_eq!(hc.status(v), HeavyStatus::Rainbow);
        }
    }

    #[test]
    fn classification_matches_recount_oracle() {
        let g = sample_gnp(&GnpSpec::new(100, 0.3, 424242)).unwrap();
        let cg = ColouredGraph::colour_by(g, |u, _| u as Colour);
        let alpha = 0.4;
        let hc = classify_heavy(&cg, alpha).unwrap();
        for v in 0..cg.n() {
            // Independent recount of incident multiplicities.
            let mut counts: std::collections::BTreeMap<Colour, usize> = Default::default();
            for w in cg.graph().neighbors(v) {
                *counts.entry(cg.colour(v, w).unwrap()).or_insert(0) += 1;
            }
            let d = cg.graph().degree(v) as f64;
            let expected = counts
                .iter()
                .filter(|&(_, &k)| k as f64 >= alpha * d)
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
                .map(|(&c, _)| c);
            assert_eq!(hc.heavy_colour(v), expected, "vertex {v}");
            // Smaller-endpoint colouring: a vertex with enough later
            // neighbours is heavy with its own id whenever the threshold
            // exceeds the multiplicity-1 noise floor.
            let later = cg.graph().neighbors(v).filter(|&w| w > v).count() as f64;
            if later >= alpha * d && alpha * d > 1.0 {
                assert_eq!(hc.heavy_colour(v), Some(v as Colour));
            }
        }
    }

    #[test]
    fn heavy_set_grows_as_alpha_shrinks() {
        let g = sample_gnp(&GnpSpec::new(60, 0.4, 7)).unwrap();
        let cg = ColouredGraph::colour_by(g, |u, v| ((u + v) % 5) as Colour);
        let strict = classify_heavy(&cg, 0.5).unwrap();
        let loose = classify_heavy(&cg, 0.2).unwrap();
        for v in 0..cg.n() {
            if matches!(strict.status(v), HeavyStatus::Heavy { .. }) {
                assert!(matches!(loose.status(v), HeavyStatus::Heavy { .. }));
            }
        }
    }

    #[test]
    fn alpha_is_validated() {
        let cg = ColouredGraph::rainbow(Graph::complete(3));
        assert!(classify_heavy(&cg, 0.0).is_err());
        assert!(classify_heavy(&cg, 1.0).is_err());
    }

    fn two_edge_fixture(lam_u: LambdaValue, lam_v: LambdaValue, chi: Colour) -> EdgeClassRecord {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let cg = ColouredGraph::from_colour_vec(g, vec![chi]).unwrap();
        let lambda = ColourAllocation::from_pairs(&[(0, lam_u), (1, lam_v)]).unwrap();
        classify_edges(&cg, &[0, 1], &lambda).unwrap().records()[0]
    }

    #[test]
    fn edge_class_fixtures() {
        use LambdaValue::{Colour as C, Star};
        let r = two_edge_fixture(C(0), C(1), 2);
        assert!(r.balanced && r.u_light && r.v_light && r.totally_light);

        let r = two_edge_fixture(C(0), C(0), 0);
        assert!(!r.balanced && !r.u_light && !r.v_light && !r.totally_light);

        let r = two_edge_fixture(Star, C(0), 0);
        assert!(r.balanced && r.u_light && !r.v_light && !r.totally_light);

        // ★ on both endpoints: not balanced, yet light everywhere.
        let r = two_edge_fixture(Star, Star, 3);
        assert!(!r.balanced && r.u_light && r.v_light && r.totally_light);
    }

    #[test]
    fn edge_classes_rederivable_by_independent_pass() {
        let g = sample_gnp(&GnpSpec::new(30, 0.3, 99)).unwrap();
        let cg = ColouredGraph::colour_by(g, |u, v| ((u * 7 + v) % 6) as Colour);
        let u_set: Vec<Vertex> = (0..20).collect();
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        let lambda = ColourAllocation::assign(&u_set, |_| {
            if rng.gen_bool(0.3) {
                LambdaValue::Star
            } else {
                LambdaValue::Colour(rng.gen_range(0..6))
            }
        })
        .unwrap();
        let table = classify_edges(&cg, &u_set, &lambda).unwrap();
        let mut seen = 0;
        for &(u, v) in cg.graph().edges() {
            if u >= 20 || v >= 20 {
                continue;
            }
            seen += 1;
            let r = *table.record_for(u, v).unwrap();
            let (lu, lv) = (lambda.get(u).unwrap(), lambda.get(v).unwrap());
            let chi = cg.colour(u, v).unwrap();
            assert_eq!(r.balanced, lu != lv);
            assert_eq!(r.u_light, lu.light_against(chi));
            assert_eq!(r.v_light, lv.light_against(chi));
            assert_eq!(r.totally_light, r.u_light && r.v_light);
        }
        assert_eq!(seen, table.records().len());
    }

    #[test]
    fn classify_edges_requires_lambda_on_endpoints() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let cg = ColouredGraph::monochromatic(g, 0);
        let lambda = ColourAllocation::all_star(&[0, 1]).unwrap();
        assert!(classify_edges(&cg, &[0, 1, 2], &lambda).is_err());
        assert!(classify_edges(&cg, &[0, 1], &lambda).is_ok());
    }

    #[test]
    fn allocation_accessors_and_heaviness() {
        let g = Graph::complete(4);
        let cg = ColouredGraph::monochromatic(g, 7);
        let lambda = ColourAllocation::from_pairs(&[
            (0, LambdaValue::Colour(7)),
            (2, LambdaValue::Star),
            (3, LambdaValue::Colour(9)),
        ])
        .unwrap();
        assert_eq!(lambda.get(0), Some(LambdaValue::Colour(7)));
        assert_eq!(lambda.get(1), None);
        assert_eq!(lambda.star_preimage(), vec![2]);
        assert_eq!(lambda.preimage(7), vec![0]);
        assert_eq!(lambda.colours_used(), vec![7, 9]);
        // Vertex 3 claims colour 9 but has zero incident 9-edges.
        assert_eq!(lambda.alpha_heavy_violation(&cg, 0.5), Some((3, 9)));
        let ok = lambda.restrict(&[0, 2]).unwrap();
        assert!(ok.is_alpha_heavy(&cg, 0.5));
        assert!(ColourAllocation::from_pairs(&[(1, LambdaValue::Star), (1, LambdaValue::Star)])
            .is_err());
    }

    #[test]
    fn lambda_value_serialization_uses_star_string() {
        let vals = vec![LambdaValue::Star, LambdaValue::Colour(4)];
        let json = serde_json::to_string(&vals).unwrap();
        assert_eq!(json, "[\"*\",4]");
        let back: Vec<LambdaValue> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vals);
    }
}
