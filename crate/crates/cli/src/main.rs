//! `pbpc`: command-line driver for the quantum-control language toolkit.
//!
//! Exit codes: 0 success; 1 internal error; 2 and up for domain results
//! (`check` uses 2 for well-founded width-1 programs that are not
//! polynomially branching and 3 for everything else; other commands use
//! 2 for rejected inputs or failed verification); 64 for usage errors.

use clap::{Args, Parser, Subcommand};
use pbp_core::analysis::classify_program;
use pbp_core::bench::bench_scaling;
use pbp_core::builtins::builtin_example;
use pbp_core::circuit;
use pbp_core::compiler::{compile, Strategy};
use pbp_core::eval::{run_program, Outcome, StateVector};
use pbp_core::sim::simulate_with_ancillas;
use pbp_core::verify::{verify_equivalence, DEFAULT_SEED};
use pbp_core::{load_program, Program};
use std::path::PathBuf;
use std::process::ExitCode;

/// Compile statistics in their documented field order.
#[derive(serde::Serialize)]
struct StatsOut {
    size: usize,
    depth: usize,
    wires: usize,
    ancillas: usize,
    anchors: usize,
    merges: usize,
    lowered_size: usize,
}

#[derive(Parser)]
#[command(name = "pbpc", version, about = "Quantum-control language toolkit")]
struct Cli {
    /// Seed for the pseudo-random verification states.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Emit machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Path to a `.pbp` source file.
    #[arg(value_name = "FILE", required_unless_present = "builtin")]
    file: Option<PathBuf>,
    /// Use a built-in program: pairs, qft, rec, add, route, cascade,
    /// chained(k), sum(r).
    #[arg(long, conflicts_with = "file")]
    builtin: Option<String>,
}

impl Source {
    fn load(&self) -> Result<(Program, String), String> {
        match (&self.file, &self.builtin) {
            (Some(path), None) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                let p = load_program(&text).map_err(|e| e.to_string())?;
                let id = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "program".into());
                Ok((p, id))
            }
            (None, Some(id)) => {
                let p = builtin_example(id).map_err(|e| e.to_string())?;
                Ok((p, id.clone()))
            }
            _ => unreachable!("clap enforces exactly one source"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify a program: well-foundedness, widths, ranks, basic calls.
    Check {
        #[command(flatten)]
        source: Source,
    },
    /// Run the reference interpreter on an input state.
    Run {
        #[command(flatten)]
        source: Source,
        /// Number of input qubits.
        #[arg(long)]
        n: Option<usize>,
        /// Basis input as a bitstring, e.g. 010110.
        #[arg(long)]
        input: Option<String>,
        /// JSON file holding 2^n amplitudes as [re, im] pairs.
        #[arg(long, conflicts_with = "input")]
        state: Option<PathBuf>,
    },
    /// Compile to a circuit and print statistics.
    Compile {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "merge")]
        strategy: Strategy,
        /// Write the circuit JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print size/depth/ancilla statistics.
        #[arg(long)]
        stats: bool,
    },
    /// Simulate a saved circuit on a basis input.
    Simulate {
        circuit: PathBuf,
        /// Basis input over the circuit's input wires.
        #[arg(long)]
        input: Option<String>,
        /// JSON file holding amplitudes as [re, im] pairs.
        #[arg(long, conflicts_with = "input")]
        state: Option<PathBuf>,
    },
    /// Check circuit-vs-interpreter equivalence on random and basis states.
    Verify {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value = "merge")]
        strategy: Strategy,
    },
    /// Compile across a size range and fit the size-growth exponent.
    Bench {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "merge")]
        strategy: Strategy,
        /// Size range start:stop[:step], e.g. 8:128:8.
        #[arg(long, value_name = "RANGE")]
        n: String,
        /// Emit CSV rows (n,size,depth,time,ancillas).
        #[arg(long, conflicts_with = "json")]
        csv: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    // dying quietly on a closed pipe beats a panic backtrace under `head`
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(64);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Check { source } => {
            let (p, id) = source.load()?;
            let report = classify_program(&p);
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?
                );
            } else {
                println!("program: {id}");
                println!("{:<12} {:>5} {:>5}  recursive", "procedure", "width", "rank");
                for proc in &report.procs {
                    println!(
                        "{:<12} {:>5} {:>5}  {}",
                        proc.name, proc.width, proc.rank, proc.recursive
                    );
                }
                println!("wf: {}", report.wf);
                for v in &report.wf_violations {
                    println!("  not well-founded: {v}");
                }
                println!("width<=1: {}", report.width_le_1);
                for v in &report.width_violations {
                    println!("  {v}");
                }
                println!("basic: {}", report.basic);
                if let Some(arg) = &report.unique_call_arg {
                    println!("  call argument: {arg}");
                }
                if !report.basic {
                    println!("  distinct call arguments: {}", report.call_args.join(" ; "));
                }
                println!("pbp: {}", report.pbp);
            }
            Ok(if report.pbp {
                0
            } else if report.wf_and_width() {
                2
            } else {
                3
            })
        }
        Command::Run {
            source,
            n,
            input,
            state,
        } => {
            let (p, _) = source.load()?;
            let psi = input_state(n, &input, &state)?;
            let r = run_program(&p, psi);
            let outcome = match r.outcome {
                Outcome::Done => "done",
                Outcome::Error => "error",
                Outcome::Diverged => "diverged",
            };
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "outcome": outcome,
                        "time": r.time,
                        "state": state_pairs(&r.state),
                    })
                );
            } else {
                println!("outcome: {outcome}");
                println!("time: {} procedure calls", r.time);
                print_state(&r.state);
            }
            Ok(if r.outcome == Outcome::Done { 0 } else { 2 })
        }
        Command::Compile {
            source,
            n,
            strategy,
            out,
            stats,
        } => {
            let (p, _) = source.load()?;
            let made = compile(&p, n, strategy).map_err(|e| e.to_string())?;
            let text = circuit::serialize(&made.circuit);
            if let Some(path) = &out {
                std::fs::write(path, &text).map_err(|e| e.to_string())?;
            }
            if stats || cli.json {
                let stats_out = StatsOut {
                    size: made.stats.size,
                    depth: made.stats.depth,
                    wires: made.circuit.wires,
                    ancillas: made.circuit.ancillas,
                    anchors: made.stats.anchor_events,
                    merges: made.stats.merge_events,
                    lowered_size: made.circuit.lowered_size(),
                };
                println!("{}", serde_json::to_string(&stats_out).map_err(|e| e.to_string())?);
            } else if out.is_none() {
                println!("{text}");
            }
            Ok(0)
        }
        Command::Simulate {
            circuit: path,
            input,
            state,
        } => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let c = circuit::deserialize(&text).map_err(|e| e.to_string())?;
            let psi = input_state(Some(c.wires), &input, &state)?;
            let run = simulate_with_ancillas(&c, &psi).map_err(|e| e.to_string())?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "state": state_pairs(&run.output),
                        "ancilla_garbage": run.ancilla_garbage,
                    })
                );
            } else {
                print_state(&run.output);
                if run.ancilla_garbage > 0.0 {
                    println!("ancilla garbage mass: {:.3e}", run.ancilla_garbage);
                }
            }
            Ok(0)
        }
        Command::Verify {
            source,
            n,
            trials,
            tol,
            strategy,
        } => {
            let (p, id) = source.load()?;
            let report = verify_equivalence(&p, &id, n, strategy, trials, tol, cli.seed)
                .map_err(|e| e.to_string())?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?
                );
            } else {
                println!(
                    "{} n={} strategy={}: max deviation {:.3e} over {} random + {} basis states \
                     (ancilla garbage {:.3e})",
                    report.program,
                    report.n,
                    report.strategy,
                    report.max_deviation,
                    report.trials,
                    report.basis_states,
                    report.max_ancilla_garbage,
                );
                println!("{}", if report.pass { "PASS" } else { "FAIL" });
            }
            Ok(if report.pass { 0 } else { 2 })
        }
        Command::Bench {
            source,
            strategy,
            n,
            csv,
            out,
        } => {
            let (p, id) = source.load()?;
            let sizes = parse_range(&n)?;
            let report = bench_scaling(&p, &id, strategy, &sizes);
            let text = if csv {
                report.to_csv()
            } else if cli.json {
                serde_json::to_string_pretty(&report.to_json()).map_err(|e| e.to_string())?
            } else {
                let mut t = format!(
                    "{} ({}): {:>6} {:>10} {:>8} {:>8} {:>9}\n",
                    report.program, report.strategy, "n", "size", "depth", "time", "ancillas"
                );
                for r in &report.rows {
                    t.push_str(&format!(
                        "{:>core$} {:>6} {:>10} {:>8} {:>8} {:>9}\n",
                        "",
                        r.n,
                        r.size.to_string(),
                        r.depth.map(|d| d.to_string()).unwrap_or_default(),
                        r.time,
                        r.ancillas.map(|a| a.to_string()).unwrap_or_default(),
                        core = report.program.len() + report.strategy.len() + 4
                    ));
                }
                if let Some(s) = report.slope {
                    t.push_str(&format!(
                        "fitted log-log slope (top half): {s:.3} (residual {:.3})\n",
                        report.residual.unwrap_or(0.0)
                    ));
                }
                for (n, why) in &report.skipped {
                    t.push_str(&format!("skipped n={n}: {why}\n"));
                }
                t
            };
            match out {
                Some(path) => std::fs::write(&path, text).map_err(|e| e.to_string())?,
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}

fn parse_range(spec: &str) -> Result<Vec<usize>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || format!("bad range `{spec}`; expected start:stop[:step]");
    match parts.as_slice() {
        [single] => Ok(vec![single.parse().map_err(|_| bad())?]),
        [start, stop] | [start, stop, _] => {
            let start: usize = start.parse().map_err(|_| bad())?;
            let stop: usize = stop.parse().map_err(|_| bad())?;
            let step: usize = if parts.len() == 3 {
                parts[2].parse().map_err(|_| bad())?
            } else {
                1
            };
            if step == 0 || stop < start {
                return Err(bad());
            }
            Ok((start..=stop).step_by(step).collect())
        }
        _ => Err(bad()),
    }
}

fn input_state(
    n: Option<usize>,
    bits: &Option<String>,
    state_file: &Option<PathBuf>,
) -> Result<StateVector, String> {
    match (bits, state_file) {
        (Some(b), None) => {
            if let Some(n) = n {
                if b.len() != n {
                    return Err(format!("--input has {} bits but --n is {n}", b.len()));
                }
            }
            StateVector::from_bits(b).ok_or_else(|| format!("bad bitstring `{b}`"))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let pairs: Vec<(f64, f64)> =
                serde_json::from_str(&text).map_err(|e| format!("bad state file: {e}"))?;
            let dim = pairs.len();
            if !dim.is_power_of_two() {
                return Err(format!("state length {dim} is not a power of two"));
            }
            let qubits = dim.trailing_zeros() as usize;
            if let Some(n) = n {
                if qubits != n {
                    return Err(format!("state has {qubits} qubits but --n is {n}"));
                }
            }
            let psi = StateVector {
                n: qubits,
                amps: pairs
                    .into_iter()
                    .map(|(re, im)| num_complex_from(re, im))
                    .collect(),
            };
            if (psi.norm() - 1.0).abs() > 1e-6 {
                return Err(format!("state is not normalized (norm {})", psi.norm()));
            }
            Ok(psi)
        }
        (None, None) => {
            let n = n.ok_or("need --n (or --input/--state)")?;
            Ok(StateVector::zero(n))
        }
        _ => unreachable!("clap forbids both"),
    }
}

fn num_complex_from(re: f64, im: f64) -> num_complex::Complex64 {
    num_complex::Complex64::new(re, im)
}

// re-exported through pbp-core's public deps
use pbp_core::num_complex;

fn state_pairs(psi: &StateVector) -> Vec<(f64, f64)> {
    psi.amps.iter().map(|a| (a.re, a.im)).collect()
}

fn print_state(psi: &StateVector) {
    let mut printed = 0;
    for (idx, amp) in psi.amps.iter().enumerate() {
        if amp.norm() > 1e-12 {
            println!(
                "|{idx:0width$b}>  {:+.9} {:+.9}i",
                amp.re,
                amp.im,
                width = psi.n.max(1)
            );
            printed += 1;
            if printed >= 64 {
                println!("... ({} amplitudes shown)", printed);
                break;
            }
        }
    }
}
