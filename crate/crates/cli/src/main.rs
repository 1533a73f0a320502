//! `alphatheta`: compute graph parameters and check the bounds between them.
//!
//! Exit status: 0 on success, 2 when a report contains a failing claim,
//! 1 on any input or solver error.

mod input;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use alphatheta::formulations::{FormulationKind, FormulationTag};
use alphatheta::graph::{complement, encode_graph6};
use alphatheta::parameters::{
    alpha0, alpha_tilde, bounds_report, copositive_bounds, cut_bounds, inv_theta_value, lovasz_theta,
    motzkin_straus_value, DEFAULT_ALPHA0_TOL, DEFAULT_ALPHA_TILDE_TOL, DEFAULT_SIMPLEX_SAMPLES,
};
use alphatheta::verify::{theorem_report, ReportConfig, TheoremReport};
use alphatheta::{Error, Graph, SolverOptions};

const MAX_ITERS_ENV: &str = "ALPHATHETA_MAX_ITERS";

#[derive(Parser, Debug)]
#[command(name = "alphatheta", version, about = "PSD threshold of A_alpha, Lovasz theta, max-cut and copositive bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Bisection tolerance for alpha0.
    #[arg(long, global = true, default_value_t = DEFAULT_ALPHA0_TOL)]
    tol: f64,
    /// Bisection tolerance for the weighted threshold.
    #[arg(long, global = true, default_value_t = DEFAULT_ALPHA_TILDE_TOL)]
    tilde_tol: f64,
    /// Seed for simplex sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of simplex samples for the clique program.
    #[arg(long, global = true, default_value_t = DEFAULT_SIMPLEX_SAMPLES)]
    samples: usize,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct GraphInput {
    /// Named family followed by its parameters, e.g. `--family cycle 5`.
    #[arg(long, num_args = 1.., value_name = "NAME [PARAMS]")]
    family: Option<Vec<String>>,
    /// graph6 string.
    #[arg(long)]
    graph6: Option<String>,
    /// Edge-list file (`n m` then one `u v` per line).
    #[arg(long, value_name = "PATH")]
    edges: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smallest alpha with alpha D + (1 - alpha) A positive semidefinite.
    Alpha0(GraphInput),
    /// Lovasz theta of the graph and of its complement.
    Theta(GraphInput),
    /// Weighted threshold by bisection over feasibility programs.
    AlphaTilde(GraphInput),
    /// All bounds on alpha0.
    Bounds(GraphInput),
    /// Exact maximum cut and its semidefinite relaxation.
    Maxcut(GraphInput),
    /// Clique number and the copositive bracket.
    Copositive(GraphInput),
    /// Check every bound and certificate; exit 2 on any failure.
    Verify(GraphInput),
    /// Run `verify` on every graph file in a directory.
    Batch {
        /// Directory of graph6 or edge-list files.
        dir: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Alpha0(_) => "alpha0",
            Command::Theta(_) => "theta",
            Command::AlphaTilde(_) => "alpha-tilde",
            Command::Bounds(_) => "bounds",
            Command::Maxcut(_) => "maxcut",
            Command::Copositive(_) => "copositive",
            Command::Verify(_) => "verify",
            Command::Batch { .. } => "batch",
        }
    }
}

struct Settings {
    alpha0_tol: f64,
    alpha_tilde_tol: f64,
    seed: u64,
    samples: usize,
    solver: SolverOptions,
}

impl Settings {
    fn report_config(&self) -> ReportConfig {
        ReportConfig {
            alpha0_tol: self.alpha0_tol,
            alpha_tilde_tol: self.alpha_tilde_tol,
            seed: self.seed,
            solver: self.solver.clone(),
        }
    }
}

/// A command result: the JSON body and whether a report failed.
struct Outcome {
    body: Value,
    failed: bool,
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn load(input: &GraphInput) -> Result<(Graph, String), String> {
    if let Some(words) = &input.family {
        Ok((input::family_graph(words)?, format!("family {}", words.join(" "))))
    } else if let Some(s) = &input.graph6 {
        Ok((alphatheta::graph::parse_graph6(s).map_err(err)?, format!("graph6 {}", s)))
    } else if let Some(p) = &input.edges {
        let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {}", p.display(), e))?;
        let g = alphatheta::graph::parse_edge_list(&text).map_err(|e| format!("{}: {}", p.display(), e))?;
        Ok((g, format!("edges {}", p.display())))
    } else {
        Err("no graph input given".into())
    }
}

fn statement(kind: FormulationKind) -> &'static str {
    FormulationTag::new(kind).statement
}

fn graph_json(g: &Graph) -> Value {
    json!({"n": g.n(), "m": g.m(), "graph6": encode_graph6(g).ok()})
}

fn run_alpha0(g: &Graph, s: &Settings) -> Result<Outcome, Error> {
    let r = alpha0(g, s.alpha0_tol)?;
    Ok(Outcome {
        body: json!({
            "alpha0": r.value,
            "method": r.method,
            "iterations": r.iterations,
            "lambda_min_at_value": r.lambda_min_at_value,
            "statements": {"alpha0": "min{a in [0,1] : aD + (1-a)A psd}"},
        }),
        failed: false,
    })
}

fn run_theta(g: &Graph, s: &Settings) -> Result<Outcome, Error> {
    let t = lovasz_theta(g, &s.solver)?;
    let tc = lovasz_theta(&complement(g), &s.solver)?;
    Ok(Outcome {
        body: json!({
            "theta": t.value,
            "theta_min_form": t.min_form_value,
            "theta_complement": tc.value,
            "statements": {
                "theta": statement(FormulationKind::ThetaMax),
                "theta_min_form": statement(FormulationKind::ThetaMin),
                "theta_complement": "theta of the complement graph",
            },
        }),
        failed: false,
    })
}

fn run_alpha_tilde(g: &Graph, s: &Settings) -> Result<Outcome, Error> {
    let r = alpha_tilde(g, s.alpha_tilde_tol, &s.solver)?;
    let inv = inv_theta_value(g, &s.solver)?;
    Ok(Outcome {
        body: json!({
            "alpha_tilde": r.value,
            "infeasible_below": r.infeasible_below,
            "t_at_value": r.t_at_value,
            "solves": r.solves,
            "inv_theta": inv,
            "statements": {
                "alpha_tilde": statement(FormulationKind::AlphaTildeFeas(0.5)),
                "inv_theta": statement(FormulationKind::InvTheta),
            },
        }),
        failed: false,
    })
}

fn run_bounds(g: &Graph, s: &Settings) -> Result<Outcome, Error> {
    let b = bounds_report(g, s.alpha0_tol, &s.solver)?;
    Ok(Outcome {
        body: json!({
            "alpha0": b.alpha0.value,
            "theta_complement": b.theta_complement,
            "maxcut": b.cuts.maxcut.size,
            "gw": b.cuts.gw,
            "bounds": {
                "degree_lower": b.degree_lower,
                "degree_upper": b.degree_upper,
                "degree_upper_vacuous": b.degree_upper_vacuous,
                "theta_lower": b.theta_lower,
                "maxcut_lower": b.cuts.lower_maxcut,
                "gw_lower": b.cuts.lower_gw,
                "maxcut_upper": b.cuts.maxcut_upper,
            },
            "copositive": {"lower": b.copositive.lower, "upper": b.copositive.upper, "dnn": b.copositive.dnn},
            "statements": {
                "bounds.degree_lower": "-lmin(A)/(Delta - lmin(A)) <= alpha0",
                "bounds.degree_upper": "alpha0 <= -lmin(A)/(delta - lmin(A))",
                "bounds.theta_lower": "1/theta(Gbar) <= alpha0",
                "bounds.maxcut_lower": "1 - |E|/(2M) <= alpha0",
                "bounds.gw_lower": "1 - |E|/(2M*) <= alpha0",
                "bounds.maxcut_upper": "M <= (|E|/2)(delta - lmin(A))/delta",
                "copositive.lower": "1/omega <= copositive value",
                "copositive.upper": "copositive value <= 1/2",
                "copositive.dnn": statement(FormulationKind::DnnCopositive),
            },
        }),
        failed: false,
    })
}

fn run_maxcut(g: &Graph, s: &Settings) -> Result<Outcome, Error> {
    let c = cut_bounds(g, &s.solver)?;
    Ok(Outcome {
        body: json!({
            "maxcut": c.maxcut.size,
            "side": c.maxcut.side,
            "gw": c.gw,
            "maxcut_upper": c.maxcut_upper,
            "statements": {
                "gw": statement(FormulationKind::Gw),
                "maxcut_upper": "M <= (|E|/2)(delta - lmin(A))/delta",
            },
        }),
        failed: false,
    })
}

fn run_copositive(g: &Graph, s: &Settings) -> Result<Outcome, Error> {
    let c = copositive_bounds(g, &s.solver)?;
    let ms = motzkin_straus_value(g, s.samples, s.seed)?;
    Ok(Outcome {
        body: json!({
            "omega": c.omega,
            "copositive": {"lower": c.lower, "upper": c.upper, "dnn": c.dnn},
            "motzkin_straus": {
                "certified": ms.certified,
                "attained": ms.attained,
                "clique": ms.clique,
                "empirical_min": ms.empirical_min,
                "samples": ms.samples,
            },
            "statements": {
                "copositive.lower": "1/omega <= copositive value",
                "copositive.upper": "copositive value <= 1/2",
                "copositive.dnn": statement(FormulationKind::DnnCopositive),
                "motzkin_straus.certified": "1/omega = min{x^T (Abar + I) x : x >= 0, 1^T x = 1}",
            },
        }),
        failed: false,
    })
}

fn report_json(r: &TheoremReport) -> Value {
    serde_json::to_value(r).expect("reports serialise")
}

fn run_verify(g: &Graph, s: &Settings) -> Result<Outcome, Error> {
    let r = theorem_report(g, &s.report_config())?;
    Ok(Outcome { body: json!({"passed": r.passed(), "report": report_json(&r)}), failed: !r.passed() })
}

fn graph_files(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| format!("{}: {}", dir.display(), e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    Ok(files)
}

fn run_batch(dir: &Path, s: &Settings) -> Result<Outcome, String> {
    let files = graph_files(dir)?;
    if files.is_empty() {
        return Err(format!("no graphs found in {}", dir.display()));
    }
    let cfg = s.report_config();
    let results: Vec<Value> = files
        .par_iter()
        .map(|path| {
            let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            log::debug!("batch: {}", name);
            let (status, report) = match input::read_graph_file(path) {
                Err(e) => (format!("error: {}", e), None),
                Ok(g) if g.m() == 0 => ("rejected: m = 0".to_string(), None),
                Ok(g) => match theorem_report(&g, &cfg) {
                    Ok(r) => (if r.passed() { "pass" } else { "fail" }.to_string(), Some(r)),
                    Err(e) => (format!("error: {}", e), None),
                },
            };
            let rows = report.as_ref().map(|r| format!("{}/{}", r.rows.len() - r.count(alphatheta::verify::Outcome::Fail), r.rows.len()));
            json!({"file": name, "status": status, "rows_ok": rows, "report": report.as_ref().map(report_json)})
        })
        .collect();
    let count = |pred: &dyn Fn(&str) -> bool| results.iter().filter(|r| pred(r["status"].as_str().unwrap_or(""))).count();
    let passed = count(&|st| st == "pass");
    let failed = count(&|st| st == "fail");
    let other = results.len() - passed - failed;
    Ok(Outcome {
        body: json!({
            "graphs": results,
            "summary": {"files": results.len(), "passed": passed, "failed": failed, "not_evaluated": other,
                        "line": format!("{}/{} pass", passed, passed + failed)},
        }),
        failed: failed > 0,
    })
}

fn settings(cli: &Cli) -> Result<Settings, String> {
    if !(cli.tol > 0.0) || !(cli.tilde_tol > 0.0) {
        return Err("tolerances must be positive".into());
    }
    let mut solver = SolverOptions::default();
    if let Ok(v) = std::env::var(MAX_ITERS_ENV) {
        solver.max_iters = v.trim().parse().map_err(|_| format!("{} must be a positive integer, got {:?}", MAX_ITERS_ENV, v))?;
        if solver.max_iters == 0 {
            return Err(format!("{} must be a positive integer", MAX_ITERS_ENV));
        }
    }
    Ok(Settings { alpha0_tol: cli.tol, alpha_tilde_tol: cli.tilde_tol, seed: cli.seed, samples: cli.samples, solver })
}

fn run(cli: &Cli) -> Result<(Value, bool), String> {
    let s = settings(cli)?;
    let mut config = json!({
        "command": cli.command.name(),
        "alpha0_tol": s.alpha0_tol,
        "alpha_tilde_tol": s.alpha_tilde_tol,
        "seed": s.seed,
        "samples": s.samples,
        "solver": serde_json::to_value(&s.solver).map_err(err)?,
    });
    let outcome = match &cli.command {
        Command::Batch { dir } => {
            config["input"] = json!(format!("dir {}", dir.display()));
            run_batch(dir, &s)?
        }
        Command::Alpha0(i)
        | Command::Theta(i)
        | Command::AlphaTilde(i)
        | Command::Bounds(i)
        | Command::Maxcut(i)
        | Command::Copositive(i)
        | Command::Verify(i) => {
            let (g, desc) = load(i)?;
            config["input"] = json!(desc);
            let run_one = match &cli.command {
                Command::Alpha0(_) => run_alpha0,
                Command::Theta(_) => run_theta,
                Command::AlphaTilde(_) => run_alpha_tilde,
                Command::Bounds(_) => run_bounds,
                Command::Maxcut(_) => run_maxcut,
                Command::Copositive(_) => run_copositive,
                _ => run_verify,
            };
            let o = run_one(&g, &s).map_err(err)?;
            config["graph"] = graph_json(&g);
            o
        }
    };
    let mut body = json!({"config": config});
    if let (Some(head), Value::Object(rest)) = (body.as_object_mut(), outcome.body) {
        head.extend(rest);
    }
    output::round_value(&mut body);
    Ok((body, outcome.failed))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((body, failed)) => {
            let text = if cli.json { output::render_json(&body) } else { output::render_table(&body) };
            print!("{}", text);
            ExitCode::from(if failed { 2 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(1)
        }
    }
}
