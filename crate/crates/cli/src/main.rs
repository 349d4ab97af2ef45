//! `facering`: run the verification suites from the command line.
//!
//! Every subcommand writes one report (JSON by default) and exits with 0
//! when all checks pass, 1 when a check fails and 2 on a usage or input
//! error.

mod report;
mod suites;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use facering::complex::SimplicialComplex;
use facering::corpus;
use facering::field::ExtField;
use facering::{Error, Result};

use report::{FieldInfo, Report};
use suites::{Env, Family, Named, Property};

#[derive(Parser, Debug)]
#[command(name = "facering", version, about = "Checks on generic Artinian reductions of simplicial spheres")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Complex as a JSON file or a bundled name (triangle, polygon4..8, simplex1..3, octahedron, join7).
    #[arg(long, global = true)]
    complex: Option<String>,
    /// Field characteristic (default 2).
    #[arg(long = "char", global = true)]
    characteristic: Option<u32>,
    /// Extension degree w of GF(p^w).
    #[arg(long, global = true)]
    ext_degree: Option<u32>,
    /// Comma-separated seeds; a single number k means the seeds 1..=k.
    #[arg(long, global = true, default_value = "1,2")]
    seeds: String,
    /// Time budget in seconds for the long-running suites.
    #[arg(long, global = true, default_value_t = 300)]
    budget: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Include per-check wall-clock timings (makes output nondeterministic).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Socle functional on facets and one-squared monomials: reduction path against direct and H-sum values.
    PsiCrosscheck,
    /// Differential-operator identities.
    VerifyIdentities {
        #[arg(long, value_enum)]
        family: Family,
        /// Largest operator order (minor identities) or bracket size (square identities) to run.
        #[arg(long, default_value_t = 5)]
        max_order: usize,
    },
    /// Nonzero-square certificates for every square-free basis monomial.
    Anisotropy {
        /// Highest degree to certify (default (n+1)/2).
        #[arg(long)]
        max_degree: Option<usize>,
        /// Random combinations of basis monomials checked per degree.
        #[arg(long, default_value_t = 4)]
        samples: usize,
    },
    /// Gram determinant, orthogonal basis, edge recovery and initial terms on polygons.
    PolygonSuite {
        /// Inclusive range of polygon sizes, e.g. 3..8.
        #[arg(long, default_value = "3..8", value_parser = suites::parse_range)]
        m_range: (u32, u32),
    },
    /// Weak or strong Lefschetz property through the suspension.
    Lefschetz {
        #[arg(long, value_enum, default_value_t = Property::Wlp)]
        property: Property,
    },
    /// Hilbert function of the reduction against the h-vector.
    Hilbert,
    /// Probe the modified-operator conjecture on small complexes.
    Conj141Probe {
        /// Lift the default size caps.
        #[arg(long)]
        allow_large: bool,
    },
}

fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    let parts: Vec<&str> = s.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    let nums = parts
        .iter()
        .map(|p| p.parse::<u64>().map_err(|e| Error::Config(format!("bad seed {p:?}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let seeds = match nums[..] {
        [k] => (1..=k).collect(),
        _ => nums,
    };
    if seeds.len() < 2 {
        return Err(Error::Config("at least two seeds are required".into()));
    }
    Ok(seeds)
}

fn load_complex(arg: &str) -> Result<Named> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{arg}: {e}")))?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or(arg).to_string();
        return Ok(Named { name, complex: SimplicialComplex::from_json(&text)? });
    }
    let name = arg.strip_suffix(".json").unwrap_or(arg);
    let name = Path::new(name).file_name().and_then(|s| s.to_str()).unwrap_or(name);
    if corpus::NAMES.contains(&name) {
        return Named::builtin(name);
    }
    Err(Error::Config(format!("{arg} is neither a readable file nor a bundled complex")))
}

fn run(cli: Cli) -> Result<Report> {
    let c = &cli.common;
    let seeds = parse_seeds(&c.seeds)?;
    let complex = c.complex.as_deref().map(load_complex).transpose()?;
    let mut env = Env {
        complex,
        char: c.characteristic,
        ext_degree: c.ext_degree,
        seeds: seeds.clone(),
        deadline: Instant::now() + Duration::from_secs(c.budget),
        checks: Vec::new(),
        times: Vec::new(),
    };
    let field = ExtField::new(env.config()?)?;
    match cli.command {
        Command::PsiCrosscheck => suites::psi_crosscheck(&mut env)?,
        Command::VerifyIdentities { family, max_order } => suites::verify_identities(&mut env, family, max_order)?,
        Command::Anisotropy { max_degree, samples } => suites::anisotropy(&mut env, max_degree, samples)?,
        Command::PolygonSuite { m_range } => suites::polygon_suite(&mut env, m_range)?,
        Command::Lefschetz { property } => suites::lefschetz(&mut env, property)?,
        Command::Hilbert => suites::hilbert(&mut env)?,
        Command::Conj141Probe { allow_large } => suites::conj141_probe(&mut env, allow_large)?,
    }
    let command: Vec<String> = std::env::args().skip(1).collect();
    let report = Report::new(command, FieldInfo::of(&field), seeds, env.checks);
    Ok(if c.timings { report.with_timings(env.times) } else { report })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (format, out) = (cli.common.format, cli.common.out.clone());
    let report = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let body = match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, body) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{body}"),
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
