//! `locc`: batch front end for ensemble construction, protocol synthesis,
//! exact evaluation, Monte Carlo simulation and bounds reports.
//!
//! Reports go to stdout as JSON, diagnostics to stderr. Exit codes: 0 on
//! success, 2 for invalid input or a violated precondition, 3 for a
//! numerical tolerance failure, 1 when `selftest` has a failing criterion.

mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use locc_core::bounds::verdict;
use locc_core::ensembles::StateEnsemble;
use locc_core::locc::{evaluate, simulate};
use locc_core::qstate::ComplexMatrix;
use locc_core::synth::{
    default_cub_candidates, find_cub, pairwise_eigenbasis_family, synthesize_cub_protocol,
    synthesize_three_qutrit_protocol, OneWayProtocolSpec,
};
use locc_core::{acceptance, Error, Result};
use serde_json::{json, Value};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "locc", version, about = "LOCC discrimination of bipartite pure states")]
struct Cli {
    /// Tolerance for structural predicates and for accepting a synthesized protocol as perfect.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Three maximally entangled qutrit pairs.
    #[value(alias = "prop1")]
    ThreeQutrit,
    /// Common unbiased basis for the pairwise products B_i†B_j.
    Cub,
}

#[derive(Subcommand)]
enum Command {
    /// Build an ensemble and report its structural predicates.
    Ensemble {
        /// Descriptor JSON or path.
        descriptor: String,
    },
    /// Synthesize a one-way protocol and verify it.
    Synthesize {
        /// Ensemble JSON or path.
        ensemble: String,
        #[arg(long, value_enum)]
        method: Method,
        /// Candidate bases for `cub`: auto, fourier, computational, or a JSON matrix (or list) / path.
        #[arg(long, default_value = "auto")]
        cub_source: String,
    },
    /// Exact success probability and mutual information.
    Evaluate {
        #[arg(long)]
        protocol: String,
        #[arg(long)]
        ensemble: String,
    },
    /// Monte Carlo estimate of the success probability.
    Simulate {
        #[arg(long)]
        protocol: String,
        #[arg(long)]
        ensemble: String,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Upper bounds and the perfect-discrimination verdict.
    Bounds {
        /// Ensemble JSON or path.
        ensemble: String,
    },
    /// Run the acceptance suite.
    Selftest,
}

fn report(command: &str, input: Value, body: Value) -> Value {
    let mut out = json!({ "version": VERSION, "command": command, "input": input });
    if let (Some(out), Value::Object(body)) = (out.as_object_mut(), body) {
        out.extend(body);
    }
    out
}

fn ensemble_summary(ensemble: &StateEnsemble, tol: f64) -> Value {
    let (m, n) = ensemble.dims();
    json!({
        "k": ensemble.len(),
        "dim_a": m,
        "dim_b": n,
        "is_orthogonal": ensemble.is_orthogonal(tol),
        "is_maximally_entangled": ensemble.is_maximally_entangled(tol),
        "is_uniform": ensemble.is_uniform(tol),
        "max_overlap": ensemble.max_overlap(),
    })
}

fn cub_candidates(source: &str, m: usize) -> Result<Vec<ComplexMatrix>> {
    match source {
        "auto" => Ok(default_cub_candidates(m)),
        "fourier" => Ok(vec![ComplexMatrix::fourier(m)]),
        "computational" => Ok(vec![ComplexMatrix::identity(m)]),
        other => input::candidate_bases(&input::read_json(other)?),
    }
}

fn synthesize(ensemble: &StateEnsemble, method: Method, cub_source: &str) -> Result<OneWayProtocolSpec> {
    match method {
        Method::ThreeQutrit => synthesize_three_qutrit_protocol(ensemble),
        Method::Cub => {
            let family = pairwise_eigenbasis_family(ensemble)?;
            let candidates = cub_candidates(cub_source, ensemble.dims().0)?;
            let cub = find_cub(&family, &candidates).ok_or_else(|| {
                Error::Precondition(format!(
                    "no candidate basis from '{cub_source}' is unbiased to every eigenbasis of B_i†B_j"
                ))
            })?;
            synthesize_cub_protocol(ensemble, &cub)
        }
    }
}

fn run(cli: &Cli) -> Result<(Value, ExitCode)> {
    let ok = ExitCode::SUCCESS;
    match &cli.command {
        Command::Ensemble { descriptor } => {
            let value = input::read_json(descriptor)?;
            let descriptor = input::ensemble_descriptor(&value)?;
            let ensemble = descriptor.build()?;
            let body = json!({ "ensemble": ensemble, "summary": ensemble_summary(&ensemble, cli.tol) });
            Ok((report("ensemble", json!({ "descriptor": descriptor }), body), ok))
        }
        Command::Synthesize { ensemble, method, cub_source } => {
            let value = input::read_json(ensemble)?;
            let descriptor = input::ensemble_descriptor(&value)?;
            let ensemble = descriptor.build()?;
            let spec = synthesize(&ensemble, *method, cub_source)?;
            let protocol = spec.to_protocol()?;
            let eval = evaluate(&protocol, &ensemble)?;
            let verified = eval.success_probability >= 1.0 - cli.tol;
            let method_name = match method {
                Method::ThreeQutrit => "three-qutrit",
                Method::Cub => "cub",
            };
            let body = json!({
                "ensemble": ensemble,
                "one_way_protocol": spec,
                "protocol": protocol,
                "verification": {
                    "max_bob_overlap": spec.max_bob_overlap(),
                    "success_probability": eval.success_probability,
                    "verified": verified,
                },
            });
            let input = json!({ "ensemble": descriptor, "method": method_name, "cub_source": cub_source, "tol": cli.tol });
            if !verified {
                eprintln!("synthesized protocol reaches success {} < 1 - {}", eval.success_probability, cli.tol);
            }
            Ok((report("synthesize", input, body), if verified { ok } else { ExitCode::from(3) }))
        }
        Command::Evaluate { protocol, ensemble } => {
            let protocol_value = input::read_json(protocol)?;
            let protocol = input::protocol(&protocol_value)?;
            let descriptor = input::ensemble_descriptor(&input::read_json(ensemble)?)?;
            let eval = evaluate(&protocol, &descriptor.build()?)?;
            let input = json!({ "protocol": protocol, "ensemble": descriptor });
            Ok((report("evaluate", input, json!({ "evaluation": eval })), ok))
        }
        Command::Simulate { protocol, ensemble, trials, seed } => {
            let protocol = input::protocol(&input::read_json(protocol)?)?;
            let descriptor = input::ensemble_descriptor(&input::read_json(ensemble)?)?;
            let ensemble = descriptor.build()?;
            let sim = simulate(&protocol, &ensemble, *trials, *seed)?;
            let exact = evaluate(&protocol, &ensemble)?.success_probability;
            let (low, high) = wilson_interval(sim.successes as f64, sim.trials as f64);
            let body = json!({
                "simulation": sim,
                "confidence_interval_95": [low, high],
                "exact_success_probability": exact,
                "agrees_with_exact": sim.agrees_with(exact),
            });
            let input = json!({ "protocol": protocol, "ensemble": descriptor, "trials": trials, "seed": seed });
            Ok((report("simulate", input, body), ok))
        }
        Command::Bounds { ensemble } => {
            let descriptor = input::ensemble_descriptor(&input::read_json(ensemble)?)?;
            let bounds = verdict(&descriptor.build()?)?;
            Ok((report("bounds", json!({ "ensemble": descriptor }), json!({ "report": bounds })), ok))
        }
        Command::Selftest => {
            let results = acceptance::run_all();
            for r in &results {
                eprintln!("{r}");
            }
            let passed = results.iter().all(|r| r.passed);
            let body = json!({ "passed": passed, "criteria": results });
            Ok((report("selftest", json!({}), body), if passed { ok } else { ExitCode::FAILURE }))
        }
    }
}

/// 95% Wilson score interval for `successes` out of `trials`.
fn wilson_interval(successes: f64, trials: f64) -> (f64, f64) {
    let z = 1.959_963_984_540_054;
    let p = successes / trials;
    let denom = 1.0 + z * z / trials;
    let centre = (p + z * z / (2.0 * trials)) / denom;
    let half = z * (p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Format::Json = cli.format;
    match run(&cli) {
        Ok((value, code)) => {
            let text = serde_json::to_string_pretty(&value).expect("reports serialize");
            match writeln!(std::io::stdout().lock(), "{text}") {
                Ok(()) => code,
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => code,
                Err(e) => {
                    eprintln!("error: cannot write report: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
