//! `tmdim`: validate meshes, compute spline space dimensions by several
//! methods, check the crossing-vertex graph identities and run seeded fuzz
//! batches.
//!
//! Exit codes: 0 when the input is valid and every method agrees, 1 on a
//! mismatch or an irregular mesh, 2 on unreadable or malformed input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};
use tmdim::cvr::{build_cvr, check_boundary_identity, check_cvr_equivalence};
use tmdim::fuzz::{generate, FuzzConfig};
use tmdim::hierarchy::{Division, HMesh};
use tmdim::oracle::Space;
use tmdim::report::{parse_methods, parse_space, run_methods, DimReport, Input, Method, Outcome, RunOptions};
use tmdim::{Error, Rational, TMesh};

#[derive(Parser)]
#[command(name = "tmdim", version, about = "Dimensions of spline spaces over hierarchical T-meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a mesh file tiles its domain and print its census.
    Validate {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Compute the dimension of a spline space by several methods.
    Dim {
        file: PathBuf,
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Build the crossing-vertex graph and check its identities.
    Cvr {
        file: PathBuf,
        /// Also write the graph alone to this path.
        #[arg(long)]
        graph_out: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Refine cells of a hierarchical mesh.
    Refine {
        file: PathBuf,
        /// Level of the cells to divide.
        #[arg(long, default_value_t = 0)]
        level: usize,
        /// Comma-separated cell indices within that level.
        #[arg(long, value_delimiter = ',', required = true)]
        cells: Vec<usize>,
        /// Destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write one seeded random hierarchical mesh.
    Generate {
        #[command(flatten)]
        fuzz: FuzzArgs,
        /// Which mesh of the batch to write.
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare methods on a seeded batch of random meshes.
    Fuzz {
        #[command(flatten)]
        fuzz: FuzzArgs,
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct SpaceArgs {
    /// `d` for S(d, d, d-1, d-1), or `m,n,alpha,beta`.
    #[arg(long, default_value = "3", value_parser = space_arg)]
    space: Space,
    /// Comma-separated subset of formula, cofactor, oracle.
    #[arg(long, default_value = "formula,cofactor,oracle", value_parser = methods_arg)]
    method: MethodList,
    /// Require vanishing to order one on the domain boundary.
    #[arg(long)]
    hbc: bool,
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    count: usize,
    #[arg(long, default_value = "2x2", value_parser = division_arg)]
    division: Division,
    /// Refinement rounds, at most.
    #[arg(long, default_value_t = 3)]
    max_level: usize,
    /// Level-0 cells per axis, at most.
    #[arg(long, default_value_t = 6)]
    max_level0: usize,
    /// Keep only meshes whose refined l-edges cross two or more coarser cells.
    #[arg(long)]
    n_ge_2: bool,
    /// Use evenly spaced level-0 lines.
    #[arg(long)]
    uniform: bool,
}

impl FuzzArgs {
    fn config(&self) -> FuzzConfig {
        FuzzConfig {
            seed: self.seed,
            count: self.count,
            division: self.division,
            max_level: self.max_level,
            max_level0: self.max_level0,
            n_ge_2: self.n_ge_2,
            random_lines: !self.uniform,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn space_arg(s: &str) -> Result<Space, String> {
    parse_space(s).map_err(|e| e.to_string())
}

#[derive(Clone)]
struct MethodList(Vec<Method>);

fn methods_arg(s: &str) -> Result<MethodList, String> {
    parse_methods(s).map(MethodList).map_err(|e| e.to_string())
}

fn division_arg(s: &str) -> Result<Division, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failure mapped onto the exit-code contract.
enum Failure {
    /// Irregular mesh or disagreeing methods.
    Mismatch(String),
    /// Unreadable or malformed input.
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::NotRegular(_) | Error::Overlap(_) | Error::Dangling(_) => Failure::Mismatch(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// What a command produced: a report and whether it counts as success.
struct Report {
    text: String,
    json: Value,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Mismatch(why)) => {
            eprintln!("error: {why}");
            ExitCode::from(1)
        }
        Err(Failure::Input(why)) => {
            eprintln!("error: {why}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<bool, Failure> {
    match command {
        Command::Validate { file, out } => emit(validate(&file)?, &out),
        Command::Dim { file, space, out } => {
            let input = read_input(&file)?;
            emit(dim(&input, &space), &out)
        }
        Command::Cvr { file, graph_out, out } => {
            let input = read_input(&file)?;
            let report = cvr(&input, graph_out.as_deref())?;
            emit(report, &out)
        }
        Command::Refine { file, level, cells, out } => {
            let h = match read_input(&file)? {
                Input::Hierarchical(h) => h,
                Input::Flat(_) => return Err(Failure::Input("refine needs a hierarchical mesh file".into())),
            };
            write_out(&h.refine(level, &cells)?.to_json(), out.as_deref())?;
            Ok(true)
        }
        Command::Generate { fuzz, index, out } => {
            write_out(&generate(&fuzz.config(), index).to_json(), out.as_deref())?;
            Ok(true)
        }
        Command::Fuzz { fuzz, space, out } => emit(fuzz_batch(&fuzz.config(), &space), &out),
    }
}

fn emit(report: Report, out: &Output) -> Result<bool, Failure> {
    let body = match out.format {
        Format::Text => report.text,
        Format::Json => serde_json::to_string_pretty(&report.json).expect("report serializes") + "\n",
    };
    write_out(&body, out.out.as_deref())?;
    Ok(report.ok)
}

fn write_out(body: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn read_input(path: &Path) -> Result<Input, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(Input::from_json(&text)?)
}

fn validate(path: &Path) -> Result<Report, Failure> {
    let input = match read_input(path) {
        Ok(i) => i,
        Err(Failure::Mismatch(why)) => {
            return Ok(Report {
                text: format!("invalid: {why}\n"),
                json: json!({ "valid": false, "reason": why }),
                ok: false,
            })
        }
        Err(e) => return Err(e),
    };
    let mesh = input.mesh();
    let c = mesh.census();
    let mut text = format!(
        "valid: {} cells\ncensus: V={} V+={} Vb={} E={} cross-cuts={} rays={} T-l-edges={}\n",
        mesh.cells().len(),
        c.v,
        c.v_plus,
        c.v_b,
        c.e,
        c.n_c,
        c.rays,
        c.t_ledges
    );
    let mut json = json!({ "valid": true, "cells": mesh.cells().len(), "census": c });
    if let Input::Hierarchical(h) = &input {
        text += &format!("levels: {} ({} division)\n", h.lev(), h.division());
        json["levels"] = json!(h.lev());
        json["division"] = json!(h.division());
    }
    Ok(Report { text, json, ok: true })
}

/// A report counts as a success when every computed value agrees and no
/// method failed outright.
fn report_ok(r: &DimReport) -> bool {
    r.agreement && !r.by_method.values().any(|o| matches!(o, Outcome::Error(_)))
}

fn dim(input: &Input, args: &SpaceArgs) -> Report {
    let opts = RunOptions { hbc: args.hbc, ..RunOptions::default() };
    let r = run_methods(input, args.space, &args.method.0, opts);
    Report {
        text: r.to_text(),
        json: serde_json::to_value(&r).expect("report serializes"),
        ok: report_ok(&r),
    }
}

/// The refinement history of a flat tensor-product mesh, so that tensor
/// grids can go through the same checks as hierarchical input.
fn as_tensor(mesh: &TMesh) -> Option<HMesh> {
    let mut xs: Vec<Rational> = mesh.vertices().iter().map(|v| v.x).collect();
    let mut ys: Vec<Rational> = mesh.vertices().iter().map(|v| v.y).collect();
    xs.sort();
    xs.dedup();
    ys.sort();
    ys.dedup();
    let full = (xs.len() - 1) * (ys.len() - 1) == mesh.cells().len();
    full.then(|| HMesh::new(Division::TwoByTwo, xs, ys).ok()).flatten()
}

fn cvr(input: &Input, graph_out: Option<&Path>) -> Result<Report, Failure> {
    let mesh = input.mesh();
    let graph = build_cvr(&mesh);
    let file = graph.to_file(mesh.domain().to_array());
    if let Some(p) = graph_out {
        write_out(&(serde_json::to_string_pretty(&file).expect("graph serializes") + "\n"), Some(p))?;
    }
    let census = graph.census();
    let identity = check_boundary_identity(&graph);
    let mut text = format!(
        "graph: {} vertices, {} edges, connected: {}\ntypes: 1={} 2={} 3={} T={} +={} L={}\n",
        graph.vertices.len(),
        graph.edges.len(),
        graph.connected,
        census.one,
        census.two,
        census.three,
        census.t,
        census.plus,
        census.l
    );
    let identity_json = match &identity {
        Ok(holds) => {
            text += &format!("boundary identity V2 = V3 + 4: {}\n", if *holds { "holds" } else { "fails" });
            json!(holds)
        }
        Err(e) => {
            text += &format!("boundary identity: skipped ({e})\n");
            json!({ "skipped": e.to_string() })
        }
    };
    let hierarchy = match input {
        Input::Hierarchical(h) => Some(h.clone()),
        Input::Flat(m) => as_tensor(m),
    };
    let (equality_json, equality_ok) = match hierarchy.as_ref().map(check_cvr_equivalence) {
        Some(Ok(eq)) => {
            text += &format!(
                "equality: mesh {} graph {} formula {}: {}\n",
                eq.mesh_dim,
                eq.graph_dim,
                eq.formula,
                if eq.holds() { "holds" } else { "fails" }
            );
            let ok = eq.holds();
            (json!({ "holds": ok, "detail": eq }), ok)
        }
        Some(Err(e)) => {
            text += &format!("equality: skipped ({e})\n");
            (json!({ "skipped": e.to_string() }), true)
        }
        None => {
            let why = "needs the refinement history of a hierarchical mesh";
            text += &format!("equality: skipped ({why})\n");
            (json!({ "skipped": why }), true)
        }
    };
    let ok = equality_ok && identity.as_ref().map_or(true, |h| *h);
    Ok(Report {
        text,
        json: json!({
            "graph": file,
            "census": census,
            "connected": graph.connected,
            "boundaryIdentity": identity_json,
            "equality": equality_json,
        }),
        ok,
    })
}

fn fuzz_batch(config: &FuzzConfig, args: &SpaceArgs) -> Report {
    let opts = RunOptions { hbc: args.hbc, ..RunOptions::default() };
    let reports: Vec<DimReport> = (0..config.count)
        .into_par_iter()
        .map(|i| run_methods(&Input::Hierarchical(generate(config, i)), args.space, &args.method.0, opts))
        .collect();
    let mismatches: Vec<usize> = (0..reports.len()).filter(|&i| !report_ok(&reports[i])).collect();
    let mut text = String::new();
    for (i, r) in reports.iter().enumerate() {
        let cells: Vec<String> = r.by_method.iter().map(|(m, o)| format!("{m}={o}")).collect();
        let mark = if report_ok(r) { "ok" } else { "MISMATCH" };
        text += &format!("{i:>4} {mark:<8} {}\n", cells.join("  "));
    }
    text += &format!(
        "seed {} count {}: {} mismatch(es)\n",
        config.seed,
        config.count,
        mismatches.len()
    );
    Report {
        text,
        json: json!({
            "config": config,
            "space": args.space,
            "hbc": args.hbc,
            "reports": reports,
            "mismatches": mismatches,
        }),
        ok: mismatches.is_empty(),
    }
}
