//! Argument parsing and command dispatch for the `canram` binary.
//!
//! Exit codes: 0 — the command ran and found no violation; 1 — a checked
//! property failed (arrowing refuted, a trichotomy with no branch, a
//! non-monotone sweep); 2 — usage or input errors.

use crate::config::{default_density, resolve_output, ExperimentConfig, PGrid};
use crate::k24::run_k24;
use crate::report::{run_report, write_report};
use crate::sweep::run_sweep;
use crate::two_round::{run_two_round, RoundColouring};
use canram_core::graph::{
    derive_seed, read_edge_list, sample_gnp, write_coloured_edge_list, write_dot, write_edge_list,
    GnpSpec, Graph, LoadedGraph,
};
use canram_core::paths::count_paths;
use canram_core::patterns::{decide_canarrow, ArrowStrength};
use canram_core::rational::parse_rational;
use canram_core::{Error, Result};
use clap::{Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;

const GAP_NOTE: &str = "The canonical Ramsey property quantifies over every edge colouring; no \
Monte Carlo run can exhaust that. The sweep substitutes a fixed family of adversary colouring \
strategies for the universal quantifier, so a sweep 'hit' is evidence against those adversaries \
only. Exhaustive ground truth lives in `canarrow` and `k24-verify`.";

#[derive(Parser)]
#[command(
    name = "canram",
    version,
    about = "Canonical Ramsey experiments on random graphs",
    long_about = None,
    after_help = GAP_NOTE
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Sample G(n,p) and write it as an edge list or DOT.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Colour the sample: rainbow, monochromatic, or an adversary
        /// (random-<r>-colouring, proper-greedy, smaller-endpoint-lex,
        /// heavy-pair, alternating-2-colouring).
        #[arg(long)]
        colour: Option<String>,
        /// Seed for seeded colourings; derived from --seed when absent.
        #[arg(long)]
        colour_seed: Option<u64>,
        /// Emit DOT instead of an edge list.
        #[arg(long)]
        dot: bool,
        /// Output file (resolved against $CANRAM_OUT_DIR); stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide exhaustively whether GRAPH canonically arrows TARGET.
    Canarrow {
        /// complete:N, cycle:N, path:N, complete-bipartite:A,B, empty:N,
        /// or an edge-list file.
        graph: String,
        #[arg(long, default_value = "cycle:4")]
        target: String,
        /// Demand mono, rainbow, or lex copies for every pattern class
        /// (default: for some class).
        #[arg(long)]
        strong: bool,
    },
    /// Count paths with ELL vertices between all vertex pairs.
    Paths {
        graph: String,
        #[arg(long, default_value_t = 4)]
        ell: usize,
    },
    /// Evaluate the mono / lex-all / Γ-dense trichotomy on a coloured
    /// edge list.
    Trichotomy {
        /// Edge-list file with a colour column (see `gen --colour`).
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Density threshold ρ as a rational or decimal, e.g. 1/4.
        #[arg(long, default_value = "1/4")]
        rho: String,
        /// Density target d; defaults to the cascade constant clamped to
        /// 64-bit rationals.
        #[arg(long)]
        d: Option<String>,
    },
    /// Exhaustively verify that K_{2,4} weakly arrows C_4, including the
    /// proper/non-proper sub-claims.
    K24Verify,
    /// Monte Carlo threshold sweep from a JSON config, CSV out.
    Sweep {
        config: PathBuf,
        /// Override the config's n grid (repeatable).
        #[arg(long = "n")]
        n_values: Vec<usize>,
        /// Replace the p grid with explicit values (repeatable).
        #[arg(long = "p", conflicts_with = "c_values")]
        p_values: Vec<f64>,
        /// Replace the p grid with c·n^(-1+1/(2k-1)) points (repeatable).
        #[arg(long = "c")]
        c_values: Vec<f64>,
        /// Override the seed list (repeatable).
        #[arg(long = "seed")]
        seeds: Vec<u64>,
        /// Override the adversary list (repeatable).
        #[arg(long = "adversary")]
        adversaries: Vec<String>,
        /// Also count distinct weak canonical copies per trial.
        #[arg(long)]
        count_copies: bool,
        /// Output CSV (resolved against $CANRAM_OUT_DIR); overrides the
        /// config's path; stdout when neither is set.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-round exposure pipeline demo, JSON trace out.
    TwoRound {
        #[arg(long, default_value_t = 60)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// rainbow, monochromatic, or an adversary name.
        #[arg(long, default_value = "rainbow")]
        colouring: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Aggregate sweep CSVs into frequency curves with Wilson intervals.
    Report {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Builds a graph from a constructor form or loads it from a file.
pub fn parse_graph_spec(spec: &str) -> Result<LoadedGraph> {
    if let Some((kind, args)) = spec.split_once(':') {
        let size = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| Error::invalid(format!("bad size in {spec:?}: {e}")))
        };
        let g = match kind {
            "complete" => Graph::complete(size(args)?),
            "cycle" => {
                let n = size(args)?;
                if n < 3 {
                    return Err(Error::invalid("cycle:N needs N >= 3"));
                }
                Graph::cycle(n)
            }
            "path" => Graph::path(size(args)?),
            "empty" => Graph::empty(size(args)?),
            "complete-bipartite" => {
                let (a, b) = args
                    .split_once(',')
                    .ok_or_else(|| Error::invalid("expected complete-bipartite:A,B"))?;
                Graph::complete_bipartite(size(a)?, size(b)?)
            }
            other => {
                return Err(Error::invalid(format!(
                    "unknown graph form {other:?}; try complete:N, cycle:N, path:N, \
                     complete-bipartite:A,B, empty:N, or a file path"
                )))
            }
        };
        return Ok(LoadedGraph::Plain(g));
    }
    let file = std::fs::File::open(spec)?;
    read_edge_list(std::io::BufReader::new(file))
}

fn open_output(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    match out {
        Some(path) => {
            let path = resolve_output(path);
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            Ok(Box::new(std::fs::File::create(path)?))
        }
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

/// Runs one parsed command; the returned code is the process exit code
/// (0 ok, 1 property violation). Errors map to exit code 2 in `main`.
pub fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Gen {
            n,
            p,
            seed,
            colour,
            colour_seed,
            dot,
            out,
        } => {
            let g = sample_gnp(&GnpSpec::new(n, p, seed))?;
            let mut w = open_output(&out)?;
            match colour {
                Some(spec) => {
                    let colouring: RoundColouring = spec.parse()?;
                    let cseed = colour_seed.unwrap_or_else(|| derive_seed(seed, &[1]));
                    let (cg, effective) = colouring.apply(g, cseed);
                    eprintln!("coloured with {effective}");
                    if dot {
                        write_dot(cg.graph(), Some(&cg), &mut w)?;
                    } else {
                        write_coloured_edge_list(&cg, &mut w)?;
                    }
                }
                None => {
                    if dot {
                        write_dot(&g, None, &mut w)?;
                    } else {
                        write_edge_list(&g, &mut w)?;
                    }
                }
            }
            Ok(0)
        }
        Command::Canarrow {
            graph,
            target,
            strong,
        } => {
            let g = parse_graph_spec(&graph)?;
            let h = parse_graph_spec(&target)?;
            let strength = if strong {
                ArrowStrength::Strong
            } else {
                ArrowStrength::Weak
            };
            let report = decide_canarrow(g.graph(), h.graph(), strength)?;
            println!(
                "{graph} =can=> {target} ({strength:?}): {}",
                if report.holds { "holds" } else { "refuted" }
            );
            println!(
                "colourings checked: {} of {}",
                report.colourings_checked, report.total_colourings
            );
            if let Some(ce) = &report.counterexample {
                println!("counterexample colours: {:?}", ce.partition.as_colours());
                if let Some(missing) = &ce.missing_pattern {
                    println!("no lexicographic copy for pattern {missing:?}");
                }
            }
            Ok(if report.holds { 0 } else { 1 })
        }
        Command::Paths { graph, ell } => {
            let g = parse_graph_spec(&graph)?;
            let table = count_paths(g.graph(), ell)?;
            let positive = table.positive_pairs();
            println!(
                "P_{ell} in {graph}: {} total, {} pairs joined",
                table.total(),
                positive.len()
            );
            if table.n() <= 20 {
                for (u, v) in positive {
                    println!("  {u} {v}: {}", table.pair(u, v));
                }
            }
            Ok(0)
        }
        Command::Trichotomy { graph, k, rho, d } => {
            let file = std::fs::File::open(&graph)?;
            let cg = read_edge_list(std::io::BufReader::new(file))?
                .into_coloured()
                .ok_or_else(|| {
                    Error::invalid("trichotomy needs a coloured edge list (u v c lines)")
                })?;
            let rho = parse_rational(&rho)?;
            let d = match d {
                Some(s) => parse_rational(&s)?,
                None => default_density(k),
            };
            let report = canram_core::paths::trichotomy(&cg, k, rho, d)?;
            println!("outcomes: {:?}", report.outcomes);
            println!(
                "gamma edges: {} (density check: {:?})",
                report.gamma_edges, report.gamma_report.verdict
            );
            if let Some(w) = &report.mono_witness {
                println!("mono witness: {:?}", w.embedding);
            }
            if let Some(ws) = &report.lex_witnesses {
                println!("lex witnesses: {} pattern classes realised", ws.len());
            }
            Ok(if report.outcomes.is_empty() { 1 } else { 0 })
        }
        Command::K24Verify => {
            let report = run_k24()?;
            for line in report.summary_lines() {
                println!("{line}");
            }
            Ok(if report.holds() { 0 } else { 1 })
        }
        Command::Sweep {
            config,
            n_values,
            p_values,
            c_values,
            seeds,
            adversaries,
            count_copies,
            out,
        } => {
            let mut cfg = ExperimentConfig::from_json_file(&config)?;
            if !n_values.is_empty() {
                cfg.n_values = n_values;
            }
            if !p_values.is_empty() {
                cfg.p_grid = PGrid::Explicit { p_values };
            }
            if !c_values.is_empty() {
                cfg.p_grid = PGrid::Form {
                    c_values,
                    log_exponent: 0.0,
                };
            }
            if !seeds.is_empty() {
                cfg.seeds = seeds;
            }
            if !adversaries.is_empty() {
                cfg.adversaries = adversaries;
            }
            if count_copies {
                cfg.count_copies = true;
            }
            if out.is_some() {
                cfg.output = out;
            }
            cfg.validate()?;

            let run = run_sweep(&cfg)?;
            for reason in &run.skipped {
                eprintln!("{reason}");
            }
            let mut w = open_output(&cfg.output)?;
            run.write_csv(&mut w)?;
            for m in &run.monotonicity {
                eprintln!(
                    "monotonicity n={} {}: {} inversion(s), {} allowed — {}",
                    m.n,
                    m.adversary,
                    m.inversions,
                    m.allowed,
                    if m.ok { "ok" } else { "VIOLATED" }
                );
            }
            Ok(if run.all_monotone() { 0 } else { 1 })
        }
        Command::TwoRound {
            n,
            k,
            seed,
            colouring,
            out,
        } => {
            let colouring: RoundColouring = colouring.parse()?;
            let trace = run_two_round(n, k, seed, &colouring)?;
            let mut w = open_output(&out)?;
            serde_json::to_writer_pretty(&mut w, &trace)?;
            writeln!(w)?;
            Ok(0)
        }
        Command::Report { inputs, out } => {
            let mut texts = Vec::new();
            for path in &inputs {
                let text = std::fs::read_to_string(path)?;
                texts.push((path.display().to_string(), text));
            }
            let rows = run_report(&texts)?;
            let mut w = open_output(&out)?;
            write_report(&rows, &mut w)?;
            Ok(0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_specs_build_the_right_graphs() {
        let g = parse_graph_spec("complete:5").unwrap();
        assert_eq!((g.graph().n(), g.graph().m()), (5, 10));
        let g = parse_graph_spec("complete-bipartite:2,4").unwrap();
        assert_eq!((g.graph().n(), g.graph().m()), (6, 8));
        let g = parse_graph_spec("cycle:6").unwrap();
        assert_eq!(g.graph().m(), 6);
        let g = parse_graph_spec("path:4").unwrap();
        assert_eq!(g.graph().m(), 3);
        let g = parse_graph_spec("empty:3").unwrap();
        assert_eq!((g.graph().n(), g.graph().m()), (3, 0));
        assert!(parse_graph_spec("cycle:2").is_err());
        assert!(parse_graph_spec("torus:9").is_err());
        assert!(parse_graph_spec("no-such-file.txt").is_err());
    }

    #[test]
    fn file_specs_round_trip_through_gen_output() {
        let g = sample_gnp(&GnpSpec::new(15, 0.3, 9)).unwrap();
        let mut bytes = Vec::new();
        write_edge_list(&g, &mut bytes).unwrap();
        let path = std::env::temp_dir().join("canram-cli-spec-test.edges");
        std::fs::write(&path, &bytes).unwrap();
        let loaded = parse_graph_spec(path.to_str().unwrap()).unwrap();
        assert_eq!(loaded.graph().edges(), g.edges());
        assert_eq!(loaded.graph().n(), g.n());
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn command_line_shapes_parse() {
        let cli = Cli::try_parse_from([
            "canram", "sweep", "cfg.json", "--n", "100", "--n", "200", "--seed", "1", "--seed",
            "2", "--adversary", "proper-greedy", "--count-copies",
        ])
        .unwrap();
        match cli.command {
            Command::Sweep {
                n_values,
                seeds,
                adversaries,
                count_copies,
                ..
            } => {
                assert_eq!(n_values, vec![100, 200]);
                assert_eq!(seeds, vec![1, 2]);
                assert_eq!(adversaries, vec!["proper-greedy".to_string()]);
                assert!(count_copies);
            }
            _ => panic!("wrong subcommand"),
        }

        assert!(Cli::try_parse_from(["canram", "k24-verify"]).is_ok());
        assert!(Cli::try_parse_from(["canram", "two-round", "--n", "40"]).is_ok());
        assert!(Cli::try_parse_from(["canram", "report"]).is_err(), "inputs required");
        assert!(Cli::try_parse_from([
            "canram", "sweep", "cfg.json", "--p", "0.1", "--c", "1.0"
        ])
        .is_err());
        assert!(Cli::try_parse_from(["canram", "frobnicate"]).is_err());
    }
}
