//! Statistical verifier for the four standard `G(n,p)` properties:
//!
//! 1. `e(U) = (1±ε)·p|U|²/2` for all `U` with `|U| ≥ √(12n/(ε²p))`;
//! 2. `d(v) = (1±ε)·pn` for all vertices;
//! 3. `e(U,W) = (1±ε)·p|U||W|` for all disjoint `U,W` with `|U||W| ≥ 6n/(ε²p)`;
//! 4. for every `U` with `|U| ≥ εn`, all but at most `ε²n` vertices `v`
//!    have `d(v,U) = (1±ε)·p|U|`.
//!
//! These are asymptotic statements; at bench scale a size threshold can
//! exceed `n` (the check is then *vacuous* and says so), and exhaustive
//! subset enumeration is usually impossible (the check then samples within
//! a declared budget and says so). A sampled pass is a non-refutation, not
//! a certificate.

use super::Graph;
use crate::Vertex;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckMode {
    /// Every qualifying object examined.
    Exact,
    /// `samples` qualifying objects drawn at random.
    Sampled { samples: usize },
    /// No object qualifies at these parameters.
    Vacuous,
}

/// Worst violation found for a property, concrete enough to re-validate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum RgWitness {
    EdgeCount {
        u_set: Vec<Vertex>,
        actual: u64,
        lo: f64,
        hi: f64,
    },
    Degree {
        v: Vertex,
        actual: usize,
        lo: f64,
        hi: f64,
    },
    CrossingCount {
        u_set: Vec<Vertex>,
        w_set: Vec<Vertex>,
        actual: u64,
        lo: f64,
        hi: f64,
    },
    NeighbourhoodSpread {
        u_set: Vec<Vertex>,
        bad_vertices: Vec<Vertex>,
        allowed: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub mode: CheckMode,
    pub pass: bool,
    /// Objects examined (subsets, vertices, pairs).
    pub checked: u64,
    pub violations: u64,
    pub witness: Option<RgWitness>,
}

impl PropertyCheck {
    fn vacuous() -> Self {
        PropertyCheck {
            mode: CheckMode::Vacuous,
            pass: true,
            checked: 0,
            violations: 0,
            witness: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RgPropertyReport {
    pub epsilon: f64,
    pub p: f64,
    /// Checks for properties (1)–(4), in order.
    pub properties: [PropertyCheck; 4],
}

impl RgPropertyReport {
    pub fn all_pass(&self) -> bool {
        self.properties.iter().all(|c| c.pass)
    }
}

/// Verdict of one subset inspection. `deviation > 0` means violation; the
/// caller keeps the witness of the largest deviation seen.
struct Inspection {
    deviation: f64,
    witness: Option<RgWitness>,
}

/// Runs the four property checks on `g` against nominal density `p`.
///
/// `budget` bounds the number of sampled subsets per property when the
/// qualifying family is too large to enumerate; `seed` fixes the sampler.
/// Failures are report entries with witnesses, never errors.
pub fn verify_rg_properties(
    g: &Graph,
    p: f64,
    eps: f64,
    budget: usize,
    seed: u64,
) -> RgPropertyReport {
    assert!(eps > 0.0 && eps <= 1.0, "need 0 < eps <= 1");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let properties = [
        check_edge_counts(g, p, eps, budget, &mut rng),
        check_degrees(g, p, eps),
        check_crossing_counts(g, p, eps, budget, &mut rng),
        check_neighbourhood_spread(g, p, eps, budget, &mut rng),
    ];
    RgPropertyReport {
        epsilon: eps,
        p,
        properties,
    }
}

/// Property (1): subset edge counts.
fn check_edge_counts(
    g: &Graph,
    p: f64,
    eps: f64,
    budget: usize,
    rng: &mut ChaCha12Rng,
) -> PropertyCheck {
    let n = g.n();
    if p <= 0.0 {
        return PropertyCheck::vacuous();
    }
    let min_size = (12.0 * n as f64 / (eps * eps * p)).sqrt().ceil() as usize;
    if min_size > n {
        return PropertyCheck::vacuous();
    }
    run_subset_check(n, min_size, budget, rng, |u_set| {
        let s = u_set.len() as f64;
        let (lo, hi) = band(p * s * s / 2.0, eps);
        let actual = g.edges_within(u_set);
        Inspection {
            deviation: deviation(actual as f64, lo, hi),
            witness: Some(RgWitness::EdgeCount {
                u_set: u_set.to_vec(),
                actual,
                lo,
                hi,
            }),
        }
    })
}

/// Property (2): all degrees, always exact.
fn check_degrees(g: &Graph, p: f64, eps: f64) -> PropertyCheck {
    let n = g.n();
    let (lo, hi) = band(p * n as f64, eps);
    let mut check = PropertyCheck {
        mode: CheckMode::Exact,
        pass: true,
        checked: n as u64,
        violations: 0,
        witness: None,
    };
    let mut worst = 0.0;
    for v in 0..n {
        let d = g.degree(v);
        let dev = deviation(d as f64, lo, hi);
        if dev > 0.0 {
            check.violations += 1;
            if dev > worst {
                worst = dev;
                check.witness = Some(RgWitness::Degree {
                    v,
                    actual: d,
                    lo,
                    hi,
                });
            }
        }
    }
    check.pass = check.violations == 0;
    check
}

/// Property (3): crossing counts between disjoint subsets. Always sampled
/// unless vacuous — the family of qualifying pairs explodes immediately.
fn check_crossing_counts(
    g: &Graph,
    p: f64,
    eps: f64,
    budget: usize,
    rng: &mut ChaCha12Rng,
) -> PropertyCheck {
    let n = g.n();
    if p <= 0.0 {
        return PropertyCheck::vacuous();
    }
    let min_product = (6.0 * n as f64 / (eps * eps * p)).ceil() as u64;
    // Feasible sizes: a·b ≥ min_product with a+b ≤ n.
    let feasible_a: Vec<usize> = (1..n)
        .filter(|&a| (a as u64) * ((n - a) as u64) >= min_product)
        .collect();
    if feasible_a.is_empty() {
        return PropertyCheck::vacuous();
    }
    let samples = budget.max(1);
    let mut check = PropertyCheck {
        mode: CheckMode::Sampled { samples },
        pass: true,
        checked: 0,
        violations: 0,
        witness: None,
    };
    let mut worst = 0.0;
    let mut perm: Vec<Vertex> = (0..n).collect();
    for _ in 0..samples {
        // Size shape uniform over the feasible region, then uniform disjoint
        // sets of those sizes.
        let a = feasible_a[rng.gen_range(0..feasible_a.len())];
        let b_min = (min_product.div_ceil(a as u64) as usize).max(1);
        let b = rng.gen_range(b_min..=n - a);
        perm.shuffle(rng);
        let mut u_set = perm[..a].to_vec();
        let mut w_set = perm[a..a + b].to_vec();
        u_set.sort_unstable();
        w_set.sort_unstable();
        let (lo, hi) = band(p * (a * b) as f64, eps);
        let actual = g.edges_between(&u_set, &w_set);
        let dev = deviation(actual as f64, lo, hi);
        check.checked += 1;
        if dev > 0.0 {
            check.violations += 1;
            if dev > worst {
                worst = dev;
                check.witness = Some(RgWitness::CrossingCount {
                    u_set,
                    w_set,
                    actual,
                    lo,
                    hi,
                });
            }
        }
    }
    check.pass = check.violations == 0;
    check
}

/// Property (4): for each inspected `U`, exact per-vertex scan of `d(v,U)`.
fn check_neighbourhood_spread(
    g: &Graph,
    p: f64,
    eps: f64,
    budget: usize,
    rng: &mut ChaCha12Rng,
) -> PropertyCheck {
    let n = g.n();
    let min_size = (eps * n as f64).ceil().max(1.0) as usize;
    if min_size > n {
        return PropertyCheck::vacuous();
    }
    let allowed = eps * eps * n as f64;
    run_subset_check(n, min_size, budget, rng, |u_set| {
        let mask = g.mask_of(u_set);
        let (lo, hi) = band(p * u_set.len() as f64, eps);
        let bad: Vec<Vertex> = (0..n)
            .filter(|&v| deviation(g.degree_into_mask(v, &mask) as f64, lo, hi) > 0.0)
            .collect();
        let excess = bad.len() as f64 - allowed;
        Inspection {
            deviation: excess.max(0.0),
            witness: Some(RgWitness::NeighbourhoodSpread {
                u_set: u_set.to_vec(),
                bad_vertices: bad,
                allowed,
            }),
        }
    })
}

fn band(expected: f64, eps: f64) -> (f64, f64) {
    ((1.0 - eps) * expected, (1.0 + eps) * expected)
}

/// 0 when inside `[lo,hi]`, else the absolute distance to the band.
fn deviation(x: f64, lo: f64, hi: f64) -> f64 {
    if x < lo {
        lo - x
    } else if x > hi {
        x - hi
    } else {
        0.0
    }
}

/// Visits every subset of size ≥ `min_size` when their number fits in
/// `budget`, otherwise `budget` sampled ones (size uniform over the feasible
/// range, then a uniform set of that size).
fn run_subset_check(
    n: usize,
    min_size: usize,
    budget: usize,
    rng: &mut ChaCha12Rng,
    mut inspect: impl FnMut(&[Vertex]) -> Inspection,
) -> PropertyCheck {
    let exact = count_subsets_at_least(n, min_size, budget as u128).is_some();
    let mut check = PropertyCheck {
        mode: if exact {
            CheckMode::Exact
        } else {
            CheckMode::Sampled {
                samples: budget.max(1),
            }
        },
        pass: true,
        checked: 0,
        violations: 0,
        witness: None,
    };
    let mut worst = 0.0;
    let mut handle = |set: &[Vertex], check: &mut PropertyCheck| {
        check.checked += 1;
        let insp = inspect(set);
        if insp.deviation > 0.0 {
            check.violations += 1;
            if insp.deviation > worst {
                worst = insp.deviation;
                check.witness = insp.witness;
            }
        }
    };
    if exact {
        assert!(n < 64, "exact subset enumeration requires n < 64");
        let mut scratch = Vec::with_capacity(n);
        for mask in 0u64..(1u64 << n) {
            if (mask.count_ones() as usize) < min_size {
                continue;
            }
            scratch.clear();
            scratch.extend((0..n).filter(|&v| mask >> v & 1 == 1));
            handle(&scratch, &mut check);
        }
    } else {
        let mut perm: Vec<Vertex> = (0..n).collect();
        for _ in 0..budget.max(1) {
            let size = rng.gen_range(min_size..=n);
            perm.shuffle(rng);
            let mut set = perm[..size].to_vec();
            set.sort_unstable();
            handle(&set, &mut check);
        }
    }
    check.pass = check.violations == 0;
    check
}

/// `Σ_{s≥min} C(n,s)` if it is ≤ `cap`, else `None`.
fn count_subsets_at_least(n: usize, min_size: usize, cap: u128) -> Option<u128> {
    let mut total: u128 = 0;
    for s in min_size..=n {
        let mut c: u128 = 1;
        for i in 0..s {
            c = c.checked_mul((n - i) as u128)?;
            c /= (i + 1) as u128;
            if c > cap {
                return None;
            }
        }
        total = total.checked_add(c)?;
        if total > cap {
            return None;
        }
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{sample_gnp, GnpSpec};

    #[test]
    fn complete_graph_passes_everything() {
        let g = Graph::complete(30);
        let r = verify_rg_properties(&g, 1.0, 0.5, 200, 1);
        assert!(r.all_pass(), "{r:?}");
    }

    #[test]
    fn empty_graph_fails_degrees_with_vertex_zero() {
        let g = Graph::empty(10);
        let r = verify_rg_properties(&g, 0.5, 0.1, 50, 1);
        let deg = &r.properties[1];
        assert!(!deg.pass);
        match deg.witness {
            Some(RgWitness::Degree { v, actual, .. }) => {
                assert_eq!(v, 0);
                assert_eq!(actual, 0);
            }
            ref w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn vacuous_thresholds_are_reported() {
        // At n=200, p=0.05, eps=0.1: property (1) needs |U| ≥ 2191 > n and
        // property (3) needs |U||W| ≥ 2.4e6 > 10^4.
        let g = sample_gnp(&GnpSpec::new(200, 0.05, 3)).unwrap();
        let r = verify_rg_properties(&g, 0.05, 0.1, 10, 3);
        assert_eq!(r.properties[0].mode, CheckMode::Vacuous);
        assert_eq!(r.properties[2].mode, CheckMode::Vacuous);
        assert!(r.properties[0].pass && r.properties[2].pass);
    }

    #[test]
    fn subset_counting_caps() {
        assert_eq!(count_subsets_at_least(4, 3, 100), Some(5));
        assert_eq!(count_subsets_at_least(4, 0, 100), Some(16));
        assert_eq!(count_subsets_at_least(64, 1, 1_000_000), None);
    }

    #[test]
    fn dense_sample_passes_at_loose_tolerance() {
        // pn = 450 with eps=0.5: far outside any plausible fluctuation.
        let g = sample_gnp(&GnpSpec::new(900, 0.5, 11)).unwrap();
        let r = verify_rg_properties(&g, 0.5, 0.5, 60, 11);
        assert!(r.all_pass(), "{r:?}");
    }
}
