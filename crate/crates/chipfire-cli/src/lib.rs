//! Command-line front end over the chipfire library: simulation, period
//! analysis, assignments, verification sweeps, and staircase data.
//!
//! Exit codes: 0 when the command succeeds (and any verified claim holds),
//! 1 when a counterexample or falsification is found, 2 on usage or input
//! errors, 3 when a simulation budget is exceeded. All diagnostics go to
//! stderr with an `error:` prefix.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use chipfire::analysis::{activity, format_ratio};
use chipfire::assignment::{assignment_json, build_assignment, track_chips, AssignmentError};
use chipfire::bipartite::{verify_bipartite_lemmas, verify_theorem2, Theorem2Mode};
use chipfire::engine::{find_cycle, find_cycle_with, step, ChipConfig, CycleOptions, EngineError};
use chipfire::graph::{enumerate_connected, generate, parse_graph, Family, Graph};
use chipfire::sweep::{
    default_graph_stream, resolve_workers, staircase, staircase_csv, verify_conjecture1,
    verify_lemma_battery, verify_stabilization, verify_theorem1, RandomPhase, SweepOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser)]
#[command(
    name = "chipfire",
    version,
    about = "Parallel chip-firing games: simulate, analyze, and verify",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the configuration for rounds 0..=N.
    Simulate {
        /// Graph file, or a family spec like complete:4, cycle:5,
        /// complete_bipartite:3,3, path:4, random_connected:6,9,42.
        #[arg(long)]
        graph: String,
        /// Comma-separated chips per vertex, or @file.
        #[arg(long)]
        config: String,
        #[arg(long)]
        rounds: usize,
    },
    /// Print transient length t0, minimal period T, and exact activity.
    Period {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        config: String,
        #[arg(long, default_value_t = 1_000_000)]
        max_rounds: usize,
        /// Constant-memory cycle detection instead of the round-indexed map.
        #[arg(long)]
        low_memory: bool,
    },
    /// Sample activity against chip totals 0..=4|E| and write a CSV table.
    Staircase {
        #[arg(long)]
        graph: String,
        /// Samples per total.
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Cycle-detection budget per sample; exceeded samples flag the row.
        #[arg(long, default_value_t = 1_000_000)]
        transient_cap: usize,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run a verification sweep and print a JSON report.
    Verify {
        /// One of theorem1, conjecture1, theorem2, stabilization, lemmas.
        #[arg(long)]
        claim: String,
        /// Sweep all connected graphs up to this many vertices (default 5).
        #[arg(long)]
        n_max: Option<usize>,
        /// Sweep a single graph instead of the enumerated stream.
        #[arg(long)]
        graph: Option<String>,
        /// Side size for theorem2 / bipartite lemmas on K_{a,a}.
        #[arg(long)]
        a: Option<usize>,
        #[arg(long, default_value = "exhaustive")]
        mode: String,
        /// Sample count (theorem2 sample mode, stabilization high range,
        /// conjecture1 random phase).
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        threads: Option<usize>,
        /// Override the swept chip-total range, inclusive, as LO:HI.
        #[arg(long)]
        totals: Option<String>,
        /// Include elapsed_ms in the report (breaks byte-for-byte
        /// reproducibility between runs).
        #[arg(long)]
        timing: bool,
        #[arg(long, default_value_t = 1_000_000)]
        max_rounds: usize,
        /// Per-vertex cap for theorem2 sample mode (default 2a).
        #[arg(long)]
        cap: Option<u64>,
        /// Skip the per-game invariant battery.
        #[arg(long)]
        no_battery: bool,
    },
    /// Build, track, and print the chip assignment of a compliant game.
    Assign {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        config: String,
        #[arg(long, default_value_t = 1_000_000)]
        max_rounds: usize,
    },
    /// Stream connected graphs on n vertices in the graph file format.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// One representative per isomorphism class.
        #[arg(long)]
        dedup: bool,
    },
}

pub fn run<W: Write, E: Write>(args: &[String], out: &mut W, err: &mut E) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e);
                return EXIT_OK;
            }
            let _ = write!(err, "{}", e.render());
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(code) => code,
        Err(CmdError { message, code }) => {
            let _ = writeln!(err, "error: {}", message);
            code
        }
    }
}

struct CmdError {
    message: String,
    code: i32,
}

fn usage(message: impl Into<String>) -> CmdError {
    CmdError {
        message: message.into(),
        code: EXIT_USAGE,
    }
}

fn budget(message: impl Into<String>) -> CmdError {
    CmdError {
        message: message.into(),
        code: EXIT_BUDGET,
    }
}

fn falsification(message: impl Into<String>) -> CmdError {
    CmdError {
        message: message.into(),
        code: EXIT_COUNTEREXAMPLE,
    }
}

fn load_graph(spec: &str) -> Result<Graph, CmdError> {
    if spec.contains(':') {
        let family: Family = spec
            .parse()
            .map_err(|e| usage(format!("bad graph family {:?}: {}", spec, e)))?;
        return generate(&family).map_err(|e| usage(e.to_string()));
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| usage(format!("cannot read graph file {:?}: {}", spec, e)))?;
    parse_graph(&text).map_err(|e| usage(e.to_string()))
}

fn load_config(spec: &str, g: &Graph) -> Result<ChipConfig, CmdError> {
    let text = if let Some(path) = spec.strip_prefix('@') {
        std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config file {:?}: {}", path, e)))?
            .trim()
            .to_string()
    } else {
        spec.to_string()
    };
    let sigma: ChipConfig = text
        .parse()
        .map_err(|e: EngineError| usage(e.to_string()))?;
    if sigma.len() != g.n() {
        return Err(usage(format!(
            "config length {} != {} vertices",
            sigma.len(),
            g.n()
        )));
    }
    Ok(sigma)
}

fn parse_totals(spec: &str) -> Result<(u64, u64), CmdError> {
    let parse = |s: &str| {
        s.parse::<u64>()
            .map_err(|_| usage(format!("bad totals bound {:?}", s)))
    };
    let (lo, hi) = spec
        .split_once(':')
        .ok_or_else(|| usage("totals must be LO:HI"))?;
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if lo > hi {
        return Err(usage("totals LO must not exceed HI"));
    }
    Ok((lo, hi))
}

fn report_exit(pass: bool, incomplete: bool) -> i32 {
    if !pass {
        EXIT_COUNTEREXAMPLE
    } else if incomplete {
        EXIT_BUDGET
    } else {
        EXIT_OK
    }
}

fn dispatch<W: Write>(cmd: Cmd, out: &mut W) -> Result<i32, CmdError> {
    match cmd {
        Cmd::Simulate {
            graph,
            config,
            rounds,
        } => {
            let g = load_graph(&graph)?;
            let mut sigma = load_config(&config, &g)?;
            for t in 0..=rounds {
                let _ = writeln!(out, "t={} {}", t, sigma);
                if t < rounds {
                    sigma = step(&g, &sigma);
                }
            }
            Ok(EXIT_OK)
        }
        Cmd::Period {
            graph,
            config,
            max_rounds,
            low_memory,
        } => {
            let g = load_graph(&graph)?;
            let sigma = load_config(&config, &g)?;
            let opts = CycleOptions {
                max_rounds,
                low_memory,
            };
            let s = match find_cycle_with(&g, &sigma, &opts) {
                Ok(s) => s,
                Err(e @ EngineError::BudgetExceeded { .. }) => return Err(budget(e.to_string())),
                Err(e) => return Err(usage(e.to_string())),
            };
            let _ = writeln!(
                out,
                "t0={} T={} activity={}",
                s.t0(),
                s.period(),
                format_ratio(&activity(&s))
            );
            Ok(EXIT_OK)
        }
        Cmd::Staircase {
            graph,
            samples,
            seed,
            out: out_path,
            transient_cap,
            threads,
        } => {
            if samples == 0 {
                return Err(usage("need at least one sample per total"));
            }
            let g = load_graph(&graph)?;
            let opts = SweepOptions {
                workers: resolve_workers(threads),
                ..Default::default()
            };
            let table = staircase(&g, samples, seed, transient_cap, &opts);
            let csv = staircase_csv(&table);
            std::fs::write(&out_path, csv)
                .map_err(|e| usage(format!("cannot write {:?}: {}", out_path, e)))?;
            if !table.battery_failures.is_empty() {
                return Err(falsification(format!(
                    "invariant battery failed on {} sampled games; first: {}",
                    table.battery_failures.len(),
                    table.battery_failures[0].detail
                )));
            }
            Ok(EXIT_OK)
        }
        Cmd::Assign {
            graph,
            config,
            max_rounds,
        } => {
            let g = load_graph(&graph)?;
            let sigma = load_config(&config, &g)?;
            let s = match find_cycle(&g, &sigma, max_rounds) {
                Ok(s) => s,
                Err(e @ EngineError::BudgetExceeded { .. }) => return Err(budget(e.to_string())),
                Err(e) => return Err(usage(e.to_string())),
            };
            let a = match build_assignment(&g, &s) {
                Ok(a) => a,
                Err(e @ AssignmentError::NotCompliant { .. }) => return Err(usage(e.to_string())),
                Err(AssignmentError::Falsified(rec)) => {
                    return Err(falsification(format!("construction falsified: {}", rec)))
                }
                Err(e) => return Err(usage(e.to_string())),
            };
            let tr = match track_chips(&g, &s, &a) {
                Ok(tr) => tr,
                Err(AssignmentError::Falsified(rec)) => {
                    return Err(falsification(format!("tracking falsified: {}", rec)))
                }
                Err(e) => return Err(usage(e.to_string())),
            };
            let dump = assignment_json(&g, &s, &a, &tr);
            let _ = writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&dump).expect("json")
            );
            Ok(EXIT_OK)
        }
        Cmd::Enumerate { n, dedup } => {
            let stream = enumerate_connected(n, dedup).map_err(|e| usage(e.to_string()))?;
            let mut first = true;
            for g in stream {
                if !first {
                    let _ = writeln!(out);
                }
                first = false;
                let _ = write!(out, "{}", g.to_file_format());
            }
            Ok(EXIT_OK)
        }
        Cmd::Verify {
            claim,
            n_max,
            graph,
            a,
            mode,
            samples,
            seed,
            threads,
            totals,
            timing,
            max_rounds,
            cap,
            no_battery,
        } => {
            let mut opts = SweepOptions {
                max_rounds,
                workers: resolve_workers(threads),
                check_battery: !no_battery,
                totals_override: None,
            };
            if let Some(t) = totals.as_deref() {
                opts.totals_override = Some(parse_totals(t)?);
            }
            let graphs = || -> Result<Vec<Graph>, CmdError> {
                match graph.as_deref() {
                    Some(spec) => Ok(vec![load_graph(spec)?]),
                    None => {
                        let n_max = n_max.unwrap_or(5);
                        if !(2..=6).contains(&n_max) {
                            return Err(usage("n-max must be between 2 and 6"));
                        }
                        Ok(default_graph_stream(n_max))
                    }
                }
            };
            let start = std::time::Instant::now();
            let (json, pass, incomplete) = match claim.as_str() {
                "theorem1" => {
                    let mut r = verify_theorem1(&graphs()?, &opts);
                    if timing {
                        r.elapsed_ms = Some(start.elapsed().as_millis());
                    }
                    (r.to_json(), r.pass, r.incomplete)
                }
                "conjecture1" => {
                    let phase = samples.map(|s| RandomPhase {
                        samples: s,
                        n_min: 6,
                        n_max: 8,
                        seed,
                    });
                    let mut r = verify_conjecture1(&graphs()?, phase.as_ref(), &opts);
                    if timing {
                        r.elapsed_ms = Some(start.elapsed().as_millis());
                    }
                    (r.to_json(), r.pass, r.incomplete)
                }
                "stabilization" => {
                    let mut r =
                        verify_stabilization(&graphs()?, samples.unwrap_or(50), seed, &opts);
                    if timing {
                        r.elapsed_ms = Some(start.elapsed().as_millis());
                    }
                    (r.to_json(), r.pass, r.incomplete)
                }
                "theorem2" => {
                    let a = a.ok_or_else(|| usage("theorem2 needs --a"))?;
                    let mode = match mode.as_str() {
                        "exhaustive" => Theorem2Mode::Exhaustive,
                        "sample" => Theorem2Mode::Sample {
                            count: samples.unwrap_or(100_000),
                            seed,
                            cap: cap.unwrap_or(2 * a as u64),
                        },
                        other => return Err(usage(format!("unknown mode {:?}", other))),
                    };
                    let mut r =
                        verify_theorem2(a, &mode, &opts).map_err(|e| usage(e.to_string()))?;
                    if timing {
                        r.elapsed_ms = Some(start.elapsed().as_millis());
                    }
                    (r.to_json(), r.pass, r.incomplete)
                }
                "lemmas" => {
                    if let Some(a) = a {
                        let mut r =
                            verify_bipartite_lemmas(a, &opts).map_err(|e| usage(e.to_string()))?;
                        if timing {
                            r.elapsed_ms = Some(start.elapsed().as_millis());
                        }
                        (r.to_json(), r.pass, r.incomplete)
                    } else {
                        let mut r = verify_lemma_battery(&graphs()?, &opts);
                        if timing {
                            r.elapsed_ms = Some(start.elapsed().as_millis());
                        }
                        (r.to_json(), r.pass, r.incomplete)
                    }
                }
                other => {
                    return Err(usage(format!(
                        "unknown claim {:?}; expected theorem1, conjecture1, theorem2, stabilization, or lemmas",
                        other
                    )))
                }
            };
            let _ = writeln!(out, "{}", json);
            Ok(report_exit(pass, incomplete))
        }
    }
}
