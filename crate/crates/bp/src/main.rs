//! `bp`: batch command-line front end for the ball-permuting toolkit.
//!
//! Every verb reads JSON inputs, computes exactly (sampling only where a
//! `--seed` is involved), and writes deterministic text to stdout. Exit
//! codes: 0 success, 1 domain error (valid input, infeasible computation),
//! 2 usage error (bad flags, malformed files).

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use ballperm::classical::{
    ball_adj_star_decide, ball_decide_bruteforce, classical_yb_check, wppp_brute, wppp_reduce,
    SwapProgram, WpppInstance,
};
use ballperm::encoded::{compile_qubit_circuit, zscheme_distribution, QubitCircuit};
use ballperm::irreps::{
    irrep_unitary, path_encode, project_identity_norm, syt_enumerate, two_row_encode, Partition,
};
use ballperm::perm::Permutation;
use ballperm::scatter::{
    compile_trajectories, compile_x_circuit_to_scattering, compile_x_gadget,
    gadget_effective_angle, scatter_program_distribution, ybe_residual, ScatterConfig,
};
use ballperm::state::{
    amplitude, distribution_with_success, run_and_sample, trace, trace_diagonal_sum, BallState,
    Circuit, Gate,
};

enum AppError {
    Usage(String),
    Domain(String),
}

impl From<ballperm::Error> for AppError {
    fn from(e: ballperm::Error) -> Self {
        AppError::Domain(e.to_string())
    }
}

type AppResult<T> = Result<T, AppError>;

fn usage<E: std::fmt::Display>(e: E) -> AppError {
    AppError::Usage(e.to_string())
}

#[derive(Parser)]
#[command(
    name = "bp",
    version,
    about = "Exact simulation and verification for ball-permuting models"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a circuit: exact output distribution, or sampled shots.
    Simulate(SimulateArgs),
    /// Exact amplitude ⟨bra|C|ket⟩ of a demolition-free circuit.
    Amplitude {
        #[arg(long)]
        circuit: String,
        #[arg(long)]
        bra: String,
        #[arg(long)]
        ket: String,
    },
    /// Trace of a demolition-free circuit (n!·⟨id|C|id⟩).
    Trace {
        #[arg(long)]
        circuit: String,
        /// Also compute the full diagonal sum and report agreement.
        #[arg(long)]
        diagonal: bool,
    },
    /// Compile a scattering configuration into rapidity gates.
    Scatter {
        #[arg(long)]
        config: String,
        /// Emit the compiled circuit as JSON instead of a gate listing.
        #[arg(long)]
        json: bool,
    },
    /// Postselected gadget compilation: one gadget, or a whole circuit.
    Gadget(GadgetArgs),
    /// Yang-Baxter residual at parameters (x, y).
    Ybe {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
    },
    /// Irrep image of a circuit on the block of a partition.
    Irrep {
        #[arg(long)]
        shape: String,
        #[arg(long)]
        circuit: String,
    },
    /// Standard tableaux of a shape, with optional compressed encodings.
    Tableaux {
        #[arg(long)]
        shape: String,
        /// Append the two-row bit encoding per tableau.
        #[arg(long)]
        encode: bool,
        /// Append the up/down path encoding per tableau.
        #[arg(long)]
        path: bool,
    },
    /// Projection weights of |12…n⟩ onto each irrep block.
    Project {
        #[arg(long)]
        n: usize,
        /// Restrict to a single shape.
        #[arg(long)]
        shape: Option<String>,
    },
    /// Classical ball-permuting oracles.
    Classical {
        #[command(subcommand)]
        sub: ClassicalCmd,
    },
    /// Word-problem feasibility via the swap-program reduction.
    Wppp {
        #[arg(long)]
        instance: String,
        #[arg(long)]
        target: String,
    },
    /// Compile a real qubit circuit into the two-label encoding.
    EncodeQubits {
        #[arg(long)]
        circuit: String,
        /// Emit the compiled permutation circuit as JSON.
        #[arg(long)]
        json: bool,
        /// Compare encoded and direct output distributions.
        #[arg(long)]
        compare: bool,
    },
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    circuit: String,
    /// Initial word, comma separated (default identity).
    #[arg(long)]
    state: Option<String>,
    /// Sample this many shots instead of printing the exact distribution.
    #[arg(long)]
    shots: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output format for distributions.
    #[arg(long, default_value = "tsv")]
    format: String,
}

#[derive(Args)]
struct GadgetArgs {
    /// First rapidity of a single four-ball gadget.
    #[arg(long)]
    z1: Option<f64>,
    /// Second rapidity of a single four-ball gadget.
    #[arg(long)]
    z2: Option<f64>,
    /// Compile this positional partial-swap circuit instead.
    #[arg(long)]
    circuit: Option<String>,
    /// Emit the compiled circuit as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum ClassicalCmd {
    /// Decide whether a target word is reachable.
    Decide {
        #[arg(long)]
        program: String,
        #[arg(long)]
        target: String,
        /// auto | brute | planar
        #[arg(long, default_value = "auto")]
        method: String,
    },
    /// Run the program once (deterministic or seeded randomized).
    Run {
        #[arg(long)]
        program: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        shots: usize,
    },
    /// Exact output distribution of a randomized program.
    Dist {
        #[arg(long)]
        program: String,
        #[arg(long, default_value = "tsv")]
        format: String,
    },
    /// Classical Yang-Baxter distance at (x, y).
    Yb {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn max_n() -> usize {
    std::env::var("BP_MAX_N")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(9)
}

fn check_cap(n: usize) -> AppResult<()> {
    let cap = max_n();
    if n > cap {
        return Err(AppError::Domain(format!(
            "n = {n} exceeds BP_MAX_N = {cap}"
        )));
    }
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &str) -> AppResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("cannot parse {path}: {e}")))
}

fn fmt_f(v: f64) -> String {
    format!("{v:.12}")
}

/// Formats a complex number as `a+bi` with 12 decimal places each.
fn fmt_complex(z: Complex64) -> String {
    let sign = if z.im < 0.0 { "-" } else { "+" };
    format!("{:.12}{}{:.12}i", z.re, sign, z.im.abs())
}

fn parse_word(s: &str) -> AppResult<Permutation> {
    Permutation::parse(s).map_err(usage)
}

fn rng_from(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

fn emit_distribution(dist: &BTreeMap<Permutation, f64>, format: &str) -> AppResult<()> {
    if dist.is_empty() {
        return Err(AppError::Domain("empty distribution".into()));
    }
    let sum: f64 = dist.values().sum();
    match format {
        "tsv" => {
            for (w, p) in dist {
                println!("{w}\t{}", fmt_f(*p));
            }
            println!("sum\t{}", fmt_f(sum));
        }
        "json" => {
            let mut obj = serde_json::Map::new();
            for (w, p) in dist {
                obj.insert(w.to_string(), serde_json::json!(p));
            }
            obj.insert("sum".into(), serde_json::json!(sum));
            println!("{}", serde_json::Value::Object(obj));
        }
        other => return Err(usage(format!("unknown format {other:?}"))),
    }
    Ok(())
}

fn run(cli: Cli) -> AppResult<()> {
    match cli.cmd {
        Cmd::Simulate(args) => simulate(args),
        Cmd::Amplitude { circuit, bra, ket } => {
            let c: Circuit = read_json(&circuit)?;
            check_cap(c.n)?;
            let a = amplitude(&c, &parse_word(&bra)?, &parse_word(&ket)?)?;
            println!("{}", fmt_complex(a));
            Ok(())
        }
        Cmd::Trace { circuit, diagonal } => {
            let c: Circuit = read_json(&circuit)?;
            check_cap(c.n)?;
            let t = trace(&c)?;
            println!("{}", fmt_complex(t));
            if diagonal {
                let d = trace_diagonal_sum(&c)?;
                println!("diagonal\t{}", fmt_complex(d));
                println!("{}", if (t - d).norm() < 1e-9 { "OK" } else { "FAIL" });
            }
            Ok(())
        }
        Cmd::Scatter { config, json } => {
            let cfg: ScatterConfig = read_json(&config)?;
            check_cap(cfg.n())?;
            let (circuit, signature) = compile_trajectories(&cfg)?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string(&circuit).map_err(usage)?
                );
            } else {
                for g in &circuit.gates {
                    if let Gate::R { z, pos } = g {
                        println!("R\t{}\t{pos}", fmt_f(*z));
                    }
                }
                println!("signature\t{signature}");
            }
            Ok(())
        }
        Cmd::Gadget(args) => gadget(args),
        Cmd::Ybe { x, y } => {
            let r = ybe_residual(x, y);
            println!("residual\t{r:.3e}");
            println!("{}", if r < 1e-12 { "OK" } else { "FAIL" });
            Ok(())
        }
        Cmd::Irrep { shape, circuit } => {
            let l = Partition::parse(&shape).map_err(usage)?;
            let c: Circuit = read_json(&circuit)?;
            check_cap(c.n)?;
            let u = irrep_unitary(&c, &l)?;
            for r in 0..u.dim() {
                let row: Vec<String> = (0..u.dim()).map(|cix| fmt_complex(u[(r, cix)])).collect();
                println!("{}", row.join("\t"));
            }
            println!("trace\t{}", fmt_complex(u.trace()));
            Ok(())
        }
        Cmd::Tableaux {
            shape,
            encode,
            path,
        } => {
            let l = Partition::parse(&shape).map_err(usage)?;
            let ts = syt_enumerate(&l);
            for t in &ts {
                let mut line = serde_json::to_string(t).map_err(usage)?;
                if encode {
                    line = format!("{line}\t{}", two_row_encode(t)?);
                }
                if path {
                    line = format!("{line}\t{}", path_encode(t)?);
                }
                println!("{line}");
            }
            println!("count\t{}", ts.len());
            println!("dim\t{}", l.hook_dim());
            Ok(())
        }
        Cmd::Project { n, shape } => {
            check_cap(n)?;
            let shapes = match shape {
                Some(s) => vec![Partition::parse(&s).map_err(usage)?],
                None => Partition::all(n),
            };
            let mut total = 0.0;
            for l in &shapes {
                let w = project_identity_norm(l)?;
                total += w;
                println!("{l}\t{}", fmt_f(w));
            }
            println!("sum\t{}", fmt_f(total));
            Ok(())
        }
        Cmd::Classical { sub } => classical(sub),
        Cmd::Wppp { instance, target } => {
            let inst: WpppInstance = read_json(&instance)?;
            check_cap(inst.n)?;
            let t = parse_word(&target)?;
            let direct = wppp_brute(&inst, &t)?;
            let reduced = wppp_reduce(&inst)?;
            let via_ball = ball_decide_bruteforce(&reduced, &t)?;
            if direct != via_ball.feasible {
                return Err(AppError::Domain(
                    "reduction disagrees with direct enumeration".into(),
                ));
            }
            println!("reduced-swaps\t{}", reduced.swaps.len());
            println!("{}", if direct { "YES" } else { "NO" });
            if let Some(w) = via_ball.witness {
                let parts: Vec<String> = w.iter().map(|i| i.to_string()).collect();
                println!("witness\t{}", parts.join(","));
            }
            Ok(())
        }
        Cmd::EncodeQubits {
            circuit,
            json,
            compare,
        } => {
            let qc: QubitCircuit = read_json(&circuit)?;
            check_cap(2 * qc.n)?;
            let compiled = compile_qubit_circuit(&qc)?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string(&compiled).map_err(usage)?
                );
            } else {
                println!("labels\t{}", compiled.n);
                println!("gates\t{}", compiled.gates.len());
            }
            if compare {
                let direct = qc.distribution()?;
                let encoded = zscheme_distribution(&qc)?;
                let keys: std::collections::BTreeSet<u32> =
                    direct.keys().chain(encoded.keys()).copied().collect();
                let mut tv = 0.0;
                for k in keys {
                    tv += (direct.get(&k).unwrap_or(&0.0) - encoded.get(&k).unwrap_or(&0.0))
                        .abs();
                }
                println!("tvd\t{:.3e}", tv / 2.0);
                println!("{}", if tv / 2.0 < 1e-9 { "OK" } else { "FAIL" });
            }
            Ok(())
        }
    }
}

fn simulate(args: SimulateArgs) -> AppResult<()> {
    let c: Circuit = read_json(&args.circuit)?;
    check_cap(c.n)?;
    let s0 = match &args.state {
        Some(s) => {
            let w = parse_word(s)?;
            if w.n() != c.n {
                return Err(usage(format!(
                    "initial word has {} labels, circuit expects {}",
                    w.n(),
                    c.n
                )));
            }
            BallState::basis(w)
        }
        None => BallState::basis(Permutation::identity(c.n)),
    };
    match args.shots {
        Some(shots) => {
            if shots == 0 {
                return Err(usage("--shots must be positive"));
            }
            let mut rng = rng_from(args.seed);
            for (records, word) in run_and_sample(&c, &s0, shots, &mut rng)? {
                let rec: Vec<String> = records.iter().map(|l| l.to_string()).collect();
                println!("{word}\t{}", rec.join(","));
            }
            Ok(())
        }
        None => {
            let (dist, success) = distribution_with_success(&c, &s0)?;
            emit_distribution(&dist, &args.format)?;
            if success < 1.0 - 1e-12 {
                println!("postselect-success\t{}", fmt_f(success));
            }
            Ok(())
        }
    }
}

fn gadget(args: GadgetArgs) -> AppResult<()> {
    match (args.z1, args.z2, &args.circuit) {
        (Some(z1), Some(z2), None) => {
            let g = compile_x_gadget(z1, z2)?;
            let (realized, fidelity, success) = gadget_effective_angle(&g)?;
            println!("effective-theta\t{}", fmt_f(g.effective_theta));
            println!("realized-theta\t{}", fmt_f(realized));
            println!("fidelity\t{}", fmt_f(fidelity));
            println!("success-probability\t{}", fmt_f(success));
            if args.json {
                println!(
                    "{}",
                    serde_json::to_string(&g.circuit).map_err(usage)?
                );
            }
            Ok(())
        }
        (None, None, Some(path)) => {
            let data: Circuit = read_json(path)?;
            check_cap(data.n)?;
            let prog = compile_x_circuit_to_scattering(&data)?;
            println!("data-n\t{}", prog.data_n);
            println!("total-n\t{}", prog.circuit.n);
            println!("gadgets\t{}", prog.gadget_count);
            println!("success-probability\t{}", fmt_f(prog.success_probability));
            if args.json {
                println!(
                    "{}",
                    serde_json::to_string(&prog.circuit).map_err(usage)?
                );
            } else {
                let (dist, success) = scatter_program_distribution(&prog)?;
                emit_distribution(&dist, "tsv")?;
                println!("realized-success\t{}", fmt_f(success));
            }
            Ok(())
        }
        _ => Err(usage(
            "pass either --z1 and --z2 for one gadget, or --circuit for a compilation",
        )),
    }
}

fn classical(sub: ClassicalCmd) -> AppResult<()> {
    match sub {
        ClassicalCmd::Decide {
            program,
            target,
            method,
        } => {
            let prog: SwapProgram = read_json(&program)?;
            check_cap(prog.n)?;
            let t = parse_word(&target)?;
            let use_planar = match method.as_str() {
                "brute" => false,
                "planar" => true,
                "auto" => {
                    prog.is_adjacent()
                        && prog
                            .probs
                            .as_ref()
                            .is_some_and(|ps| ps.iter().all(|&p| p > 0.0 && p < 1.0))
                }
                other => return Err(usage(format!("unknown method {other:?}"))),
            };
            if use_planar {
                let yes = ball_adj_star_decide(&prog, &t)?;
                println!("{}", if yes { "YES" } else { "NO" });
                if yes {
                    // A witness still comes from the subset semantics.
                    if let Some(w) = ball_decide_bruteforce(&prog, &t)?.witness {
                        let parts: Vec<String> = w.iter().map(|i| i.to_string()).collect();
                        println!("witness\t{}", parts.join(","));
                    }
                }
            } else {
                let d = ball_decide_bruteforce(&prog, &t)?;
                println!("{}", if d.feasible { "YES" } else { "NO" });
                if let Some(w) = d.witness {
                    let parts: Vec<String> = w.iter().map(|i| i.to_string()).collect();
                    println!("witness\t{}", parts.join(","));
                }
            }
            Ok(())
        }
        ClassicalCmd::Run {
            program,
            seed,
            shots,
        } => {
            let prog: SwapProgram = read_json(&program)?;
            check_cap(prog.n)?;
            if prog.probs.is_none() {
                println!("{}", prog.dball_run()?);
            } else {
                let mut rng = rng_from(seed);
                for _ in 0..shots.max(1) {
                    println!("{}", prog.rball_sample(&mut rng)?);
                }
            }
            Ok(())
        }
        ClassicalCmd::Dist { program, format } => {
            let prog: SwapProgram = read_json(&program)?;
            check_cap(prog.n)?;
            let dist = prog.rball_exact_dist()?;
            emit_distribution(&dist, &format)
        }
        ClassicalCmd::Yb { x, y } => {
            let d = classical_yb_check(x, y)?;
            println!("distance\t{d:.3e}");
            println!("{}", if d < 1e-12 { "OK" } else { "FAIL" });
            Ok(())
        }
    }
}
