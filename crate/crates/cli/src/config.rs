//! Experiment configuration: JSON files, flag overrides, output routing.

use crate::adversary::AdversaryStrategy;
use canram_core::rational::Rat;
use canram_core::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Sweeps target `C_{2k}`; the interesting smallest case is `C_4`.
pub const DEFAULT_K: usize = 2;

/// Relative output paths resolve against this directory when set.
pub const OUT_DIR_ENV: &str = "CANRAM_OUT_DIR";

/// Probability grid for a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PGrid {
    /// Probabilities used verbatim for every `n`.
    Explicit { p_values: Vec<f64> },
    /// Threshold form `p = c · n^(−1+1/(2k−1)) · (ln n)^e`, one point per
    /// `c` — the scale at which canonical copies of `C_{2k}` appear.
    Form {
        c_values: Vec<f64>,
        #[serde(default)]
        log_exponent: f64,
    },
}

impl PGrid {
    pub fn len(&self) -> usize {
        match self {
            PGrid::Explicit { p_values } => p_values.len(),
            PGrid::Form { c_values, .. } => c_values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Concrete probabilities for one `n`, in grid order. Entries may
    /// fall outside `(0,1]`; callers skip those with a logged reason
    /// rather than erroring the whole sweep.
    pub fn points(&self, n: usize, k: usize) -> Vec<f64> {
        match self {
            PGrid::Explicit { p_values } => p_values.clone(),
            PGrid::Form {
                c_values,
                log_exponent,
            } => {
                let nf = n as f64;
                let base =
                    nf.powf(-1.0 + 1.0 / (2 * k - 1) as f64) * nf.ln().powf(*log_exponent);
                c_values.iter().map(|c| c * base).collect()
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    /// Target cycle is `C_{2k}`.
    #[serde(default = "default_k")]
    pub k: usize,
    pub n_values: Vec<usize>,
    pub p_grid: PGrid,
    /// Master seeds; one trial per (grid point, adversary, seed).
    pub seeds: Vec<u64>,
    /// Adversary names, parsed by [`AdversaryStrategy`].
    pub adversaries: Vec<String>,
    /// When set, each trial also counts distinct weak canonical copies
    /// instead of stopping at the first; existence is the default.
    #[serde(default)]
    pub count_copies: bool,
    /// Sweep CSV destination; stdout when absent.
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn default_k() -> usize {
    DEFAULT_K
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: ExperimentConfig = serde_json::from_str(&text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::invalid("k must be at least 2 (target cycle C_{2k})"));
        }
        if self.n_values.is_empty() {
            return Err(Error::invalid("n grid must be non-empty"));
        }
        if self.p_grid.is_empty() {
            return Err(Error::invalid("p grid must be non-empty"));
        }
        let finite = match &self.p_grid {
            PGrid::Explicit { p_values } => p_values.iter().all(|p| p.is_finite()),
            PGrid::Form {
                c_values,
                log_exponent,
            } => c_values.iter().all(|c| c.is_finite() && *c > 0.0) && log_exponent.is_finite(),
        };
        if !finite {
            return Err(Error::invalid("p grid entries must be finite (and c > 0)"));
        }
        if self.seeds.is_empty() {
            return Err(Error::invalid("seed list must be non-empty"));
        }
        let mut dedup = self.seeds.clone();
        dedup.sort_unstable();
        dedup.dedup();
        if dedup.len() != self.seeds.len() {
            return Err(Error::invalid("seeds must be distinct"));
        }
        if self.adversaries.is_empty() {
            return Err(Error::invalid("adversary list must be non-empty"));
        }
        for a in &self.adversaries {
            a.parse::<AdversaryStrategy>()?;
        }
        Ok(())
    }

    /// Parsed adversaries, in config order. Call after [`validate`].
    ///
    /// [`validate`]: ExperimentConfig::validate
    pub fn strategies(&self) -> Result<Vec<AdversaryStrategy>> {
        self.adversaries.iter().map(|a| a.parse()).collect()
    }
}

/// `count ≥ 2` points spaced geometrically from `lo` to `hi`, endpoints
/// included.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2, "a geometric grid needs at least two points");
    assert!(lo > 0.0 && hi > lo, "need 0 < lo < hi");
    (0..count)
        .map(|i| lo * (hi / lo).powf(i as f64 / (count - 1) as f64))
        .collect()
}

/// Resolves a relative output path against [`OUT_DIR_ENV`] when the
/// variable is set; absolute paths and unset environments pass through.
pub fn resolve_output(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Default density target `d` for the Γ-dense branch of the trichotomy.
///
/// The constant cascade behind the dense branch is
/// `γ_i = (1/4)(1/20)^i`, `θ = γ_{k−1}/2^{4k}`,
/// `d = (1/4)(θ/4)^{2k} ∏_{i=1}^{k−1} γ_i²`; already at `k = 2` the exact
/// fraction's denominator (`4·81920⁴·6400 ≈ 1.2·10²⁴`) overflows a
/// 64-bit rational, so this helper returns `10^(−15)` instead. Both
/// constants are below `1/C(s,2)` for every subset size `s < 4.5·10⁷`,
/// hence induce the identical ceiled quota `⌈d·C(s,2)⌉ = 1` on any graph
/// this binary can process: the density check is unchanged.
pub fn default_density(k: usize) -> Rat {
    assert!(k >= 2, "target cycle is C_{{2k}} with k >= 2");
    Rat::new(1, 1_000_000_000_000_000)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_config() -> ExperimentConfig {
        ExperimentConfig {
            name: "demo".into(),
            k: 2,
            n_values: vec![100, 200],
            p_grid: PGrid::Form {
                c_values: vec![0.5, 1.0, 2.0],
                log_exponent: 0.0,
            },
            seeds: vec![1, 2, 3],
            adversaries: vec!["random-3-colouring".into(), "proper-greedy".into()],
            count_copies: false,
            output: None,
        }
    }

    #[test]
    fn json_round_trip_and_defaults() {
        let cfg = sample_config();
        let json = serde_json::to_string(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back.n_values, cfg.n_values);
        assert_eq!(back.p_grid, cfg.p_grid);

        let minimal: ExperimentConfig = serde_json::from_str(
            r#"{
                "name": "m",
                "n_values": [50],
                "p_grid": {"kind": "explicit", "p_values": [0.1]},
                "seeds": [7],
                "adversaries": ["proper-greedy"]
            }"#,
        )
        .unwrap();
        assert_eq!(minimal.k, 2);
        assert!(!minimal.count_copies);
        assert!(minimal.output.is_none());
        minimal.validate().unwrap();
    }

    #[test]
    fn validation_rejects_bad_configs() {
        let mut dup = sample_config();
        dup.seeds = vec![1, 2, 1];
        assert!(dup.validate().is_err());

        let mut empty = sample_config();
        empty.n_values.clear();
        assert!(empty.validate().is_err());

        let mut unknown = sample_config();
        unknown.adversaries.push("majority-vote".into());
        assert!(unknown.validate().is_err());

        let mut low_k = sample_config();
        low_k.k = 1;
        assert!(low_k.validate().is_err());

        sample_config().validate().unwrap();
    }

    #[test]
    fn form_grid_matches_the_threshold_scale() {
        let grid = PGrid::Form {
            c_values: vec![0.5, 1.0, 2.0, 4.0],
            log_exponent: 0.0,
        };
        let pts = grid.points(200, 2);
        let base = (200f64).powf(-2.0 / 3.0);
        for (c, p) in [0.5, 1.0, 2.0, 4.0].iter().zip(&pts) {
            assert!((p - c * base).abs() < 1e-12);
        }
        // The log factor multiplies in.
        let logged = PGrid::Form {
            c_values: vec![1.0],
            log_exponent: 1.0,
        };
        let p = logged.points(200, 2)[0];
        assert!((p - base * (200f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn geometric_grid_hits_endpoints_and_increases() {
        let g = geometric_grid(0.5, 4.0, 10);
        assert_eq!(g.len(), 10);
        assert!((g[0] - 0.5).abs() < 1e-12);
        assert!((g[9] - 4.0).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        // Geometric means constant ratio between neighbours.
        let r0 = g[1] / g[0];
        for w in g.windows(2) {
            assert!((w[1] / w[0] - r0).abs() < 1e-9);
        }
    }

    #[test]
    fn default_density_quota_is_one_edge() {
        let d = default_density(2);
        for s in [30i64, 200, 4000, 1_000_000] {
            let pairs = Rat::new(s * (s - 1) / 2, 1);
            let quota = d * pairs;
            assert!(quota > Rat::new(0, 1) && quota <= Rat::new(1, 1), "s={s}");
        }
    }

    #[test]
    fn output_resolution_respects_the_env_var() {
        // Single test touching the variable, so no parallel interference.
        std::env::remove_var(OUT_DIR_ENV);
        assert_eq!(
            resolve_output(Path::new("out.csv")),
            PathBuf::from("out.csv")
        );
        std::env::set_var(OUT_DIR_ENV, "/tmp/canram-results");
        assert_eq!(
            resolve_output(Path::new("out.csv")),
            PathBuf::from("/tmp/canram-results/out.csv")
        );
        assert_eq!(
            resolve_output(Path::new("/abs/out.csv")),
            PathBuf::from("/abs/out.csv")
        );
        std::env::remove_var(OUT_DIR_ENV);
    }
}
