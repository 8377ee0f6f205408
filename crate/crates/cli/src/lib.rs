//! Command implementations behind the `slimlat` binary.
//!
//! Every command returns an [`Outcome`] holding stdout, stderr and the exit
//! code, so tests can drive commands without spawning a process. JSON goes
//! to stdout, human-readable text to stderr.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use slimlat::dot::{diagram_to_dot, grid_to_dot, lattice_to_dot, quotient_to_dot};
use slimlat::extract::{diagrams_of, extract_permutation};
use slimlat::grid::{beta_from_perm, phi0_quotient, render_grid_matrix, Grid};
use slimlat::groups::{
    csl_build, csl_dual_diagram, first_primes, jordan_holder_permutation, projectivity_witness,
};
use slimlat::io::{CongruenceJson, DiagramJson};
use slimlat::lattice::BorderedDiagram;
use slimlat::perm::{
    canonical_rep, count_classes, factorial, rho_class, Permutation, DEFAULT_ENUMERATION_CAP,
};

pub mod verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "slimlat",
    version,
    about = "Slim semimodular lattices and permutations"
)]
pub struct Cli {
    /// Worker threads; 0 uses one per core.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Ascii,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonical diagram of a permutation.
    Build {
        #[arg(long)]
        perm: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Permutation of a diagram given as JSON.
    Extract {
        #[arg(long)]
        diagram: PathBuf,
    },
    /// Segments and equivalence class of a permutation.
    Classify {
        #[arg(long)]
        perm: String,
    },
    /// Number of equivalence classes for every length up to n.
    Count {
        #[arg(long)]
        n: usize,
    },
    /// Runs the invariant suite for every length up to n.
    Verify {
        #[arg(long)]
        n: usize,
        /// Seed for the random samples drawn above the exhaustive range.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random permutations per length above the exhaustive range.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Composition series of a cyclic group realizing a permutation.
    GroupRealize {
        #[arg(long)]
        perm: String,
        /// Comma-separated distinct primes; defaults to the first n primes.
        #[arg(long)]
        primes: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Grid matrix of a permutation, or its grid congruence.
    RenderGrid {
        #[arg(long)]
        perm: String,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
    /// DOT of the canonical diagram of a permutation or of a JSON diagram.
    ExportDot {
        #[arg(long, conflicts_with = "diagram", required_unless_present = "diagram")]
        perm: Option<String>,
        #[arg(long)]
        diagram: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String, stderr: String) -> Self {
        Self {
            stdout,
            stderr,
            code: EXIT_OK,
        }
    }

    fn input_error(message: impl std::fmt::Display) -> Self {
        Self {
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
            code: EXIT_INPUT,
        }
    }
}

type CmdResult = Result<Outcome, String>;

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn parse_perm(text: &str) -> Result<Permutation, String> {
    Permutation::parse(text, None).map_err(|e| e.to_string())
}

pub fn parse_primes(text: &str) -> Result<Vec<u64>, String> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| format!("not a prime: {s:?}"))
        })
        .collect()
}

fn segments_of(perm: &Permutation) -> Vec<Vec<usize>> {
    perm.segments().to_vecs()
}

/// Runs a parsed command line inside a pool of `cli.jobs` workers.
pub fn run(cli: Cli) -> Outcome {
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
    {
        Ok(pool) => pool,
        Err(e) => return Outcome::input_error(e),
    };
    let result = pool.install(|| match cli.command {
        Command::Build { perm, format } => cmd_build(&perm, format),
        Command::Extract { diagram } => cmd_extract(&diagram),
        Command::Classify { perm } => cmd_classify(&perm),
        Command::Count { n } => cmd_count(n),
        Command::Verify {
            n,
            seed,
            samples,
            inject_fault,
        } => verify::cmd_verify(&verify::VerifyOptions {
            n,
            seed,
            samples,
            inject_fault,
        }),
        Command::GroupRealize {
            perm,
            primes,
            format,
        } => cmd_group_realize(&perm, primes.as_deref(), format),
        Command::RenderGrid { perm, format } => cmd_render_grid(&perm, format),
        Command::ExportDot { perm, diagram } => cmd_export_dot(perm.as_deref(), diagram.as_deref()),
    });
    result.unwrap_or_else(Outcome::input_error)
}

pub fn cmd_build(perm: &str, format: Format) -> CmdResult {
    let perm = parse_perm(perm)?;
    let q = phi0_quotient(&perm);
    let l = q.diagram.lattice();
    let stderr = format!(
        "{perm}: {} elements, length {}, {} narrows\n",
        l.size(),
        l.length(),
        l.narrows().len()
    );
    let stdout = match format {
        Format::Json => DiagramJson::from_diagram(&q.diagram).to_json() + "\n",
        Format::Dot => quotient_to_dot(&q, "canonical"),
        Format::Ascii => render_grid_matrix(&perm),
    };
    Ok(Outcome::ok(stdout, stderr))
}

fn read_diagram_json(path: &Path) -> Result<DiagramJson, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    DiagramJson::parse(&text).map_err(|e| e.to_string())
}

/// The chains given in the file, or the first diagram of the lattice.
fn diagram_from_json(j: &DiagramJson) -> Result<BorderedDiagram, String> {
    match j.diagram().map_err(|e| e.to_string())? {
        Some(d) => Ok(d),
        None => {
            let l = j.lattice().map_err(|e| e.to_string())?;
            let ds = diagrams_of(&l).map_err(|e| e.to_string())?;
            Ok(ds
                .into_iter()
                .next()
                .expect("slim semimodular lattices have a diagram"))
        }
    }
}

pub fn cmd_extract(path: &Path) -> CmdResult {
    let d = diagram_from_json(&read_diagram_json(path)?)?;
    let perm = extract_permutation(&d).map_err(|e| e.to_string())?;
    let class_size = rho_class(&perm).len();
    let out = json!({
        "permutation": perm,
        "one_line": perm.one_line(),
        "cycles": perm.cycle_string(),
        "segments": segments_of(&perm),
        "class_size": class_size,
    });
    let stderr = format!(
        "permutation {} = {}, {} segment(s), class size {class_size}\n",
        perm.one_line(),
        perm.cycle_string(),
        perm.segments().len()
    );
    Ok(Outcome::ok(to_json(&out), stderr))
}

pub fn cmd_classify(perm: &str) -> CmdResult {
    let perm = parse_perm(perm)?;
    let class = rho_class(&perm);
    let out = json!({
        "permutation": perm,
        "cycles": perm.cycle_string(),
        "segments": segments_of(&perm),
        "canonical_rep": canonical_rep(&perm),
        "class": class,
        "class_size": class.len(),
    });
    let stderr = format!(
        "{perm}: {} segment(s), class of size {} with representative {}\n",
        perm.segments().len(),
        class.len(),
        canonical_rep(&perm)
    );
    Ok(Outcome::ok(to_json(&out), stderr))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub n: usize,
    pub classes: usize,
    pub factorial: u64,
}

/// `|S_k / ρ|` for `k = 1..=n`, computed in parallel and reported in order.
pub fn class_counts(n: usize) -> Result<Vec<CountRow>, String> {
    (1..=n)
        .into_par_iter()
        .map(|k| {
            let classes = count_classes(k, DEFAULT_ENUMERATION_CAP).map_err(|e| e.to_string())?;
            Ok(CountRow {
                n: k,
                classes,
                factorial: factorial(k) as u64,
            })
        })
        .collect()
}

pub fn cmd_count(n: usize) -> CmdResult {
    let rows = class_counts(n)?;
    let mut stderr = String::from("n\tclasses\tn!\n");
    for r in &rows {
        stderr.push_str(&format!("{}\t{}\t{}\n", r.n, r.classes, r.factorial));
    }
    Ok(Outcome::ok(to_json(&json!({ "counts": rows })), stderr))
}

pub fn cmd_group_realize(perm: &str, primes: Option<&str>, format: Format) -> CmdResult {
    let perm = parse_perm(perm)?;
    let primes = match primes {
        Some(text) => parse_primes(text)?,
        None => first_primes(perm.len()),
    };
    let inst = csl_build(&primes, &perm).map_err(|e| e.to_string())?;
    let dual = csl_dual_diagram(&inst);
    let extracted = extract_permutation(&dual).map_err(|e| e.to_string())?;
    let jh = jordan_holder_permutation(&inst);
    let witnesses = (1..=perm.len())
        .map(|i| {
            let j = jh.apply(i);
            projectivity_witness(&inst, i, j)
                .map(|(x, y)| json!({ "i": i, "j": j, "x": x, "y": y }))
                .map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, _>>()?;
    let csl_dot = lattice_to_dot(&inst.lattice(), "csl");
    let dual_dot = diagram_to_dot(&dual, "csl_dual", None);
    let stderr = format!(
        "H orders {:?}\nK orders {:?}\nelements {:?}\nJordan-Hölder permutation {jh}\nread from the dual diagram {extracted}\n",
        inst.h_orders, inst.k_orders, inst.elements
    );
    let stdout = match format {
        Format::Json => to_json(&json!({
            "permutation": perm,
            "primes": inst.primes,
            "h_orders": inst.h_orders,
            "k_orders": inst.k_orders,
            "elements": inst.elements,
            "jordan_holder": jh,
            "dual_diagram_permutation": extracted,
            "witnesses": witnesses,
            "csl_dot": csl_dot,
            "dual_dot": dual_dot,
        })),
        Format::Dot => csl_dot + &dual_dot,
        Format::Ascii => return Err("group-realize supports json and dot".into()),
    };
    Ok(Outcome::ok(stdout, stderr))
}

pub fn cmd_render_grid(perm: &str, format: Format) -> CmdResult {
    let perm = parse_perm(perm)?;
    let matrix = render_grid_matrix(&perm);
    let beta = beta_from_perm(Grid::new(perm.len()), &perm).map_err(|e| e.to_string())?;
    let stdout = match format {
        Format::Ascii => matrix.clone(),
        Format::Dot => grid_to_dot(&beta, "grid"),
        Format::Json => to_json(&json!({
            "permutation": perm,
            "cells": (1..=perm.len()).map(|i| [i, perm.apply(i)]).collect::<Vec<_>>(),
            "congruence": CongruenceJson::from_congruence(&beta),
        })),
    };
    Ok(Outcome::ok(stdout, matrix))
}

pub fn cmd_export_dot(perm: Option<&str>, diagram: Option<&Path>) -> CmdResult {
    let stdout = match (perm, diagram) {
        (Some(p), _) => quotient_to_dot(&phi0_quotient(&parse_perm(p)?), "canonical"),
        (None, Some(path)) => {
            let j = read_diagram_json(path)?;
            match j.diagram().map_err(|e| e.to_string())? {
                Some(d) => diagram_to_dot(&d, "diagram", None),
                None => lattice_to_dot(&j.lattice().map_err(|e| e.to_string())?, "lattice"),
            }
        }
        (None, None) => return Err("either --perm or --diagram is required".into()),
    };
    Ok(Outcome::ok(stdout, String::new()))
}
