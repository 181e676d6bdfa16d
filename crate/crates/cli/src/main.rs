use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kappa_calculus::chi::{genus_chi, parse_rational};
use kappa_calculus::dsl::{corolla_json, corolla_latex, corolla_text, graph_vector_json, graph_vector_text, parse_vector, ChiMode};
use kappa_calculus::trivalent::{ih_defect, IhShape, Trivalizer, UndecoratedGraph};
use kappa_calculus::{
    act, augment_external, blue_to_red, corolla_basis, project_labels, reduce, BrauerMorphism, CorollaVector, Error,
    Flavor, GraphVector, LegName,
};

#[derive(Parser)]
#[command(name = "kappa", version, about = "Graph calculus for twisted MMM classes")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Opts {
    #[arg(long, global = true, default_value = "closed")]
    flavor: String,
    #[arg(long, global = true, default_value_t = 1)]
    n: u32,
    /// symbolic, a rational number, or genus:<g>
    #[arg(long, global = true, default_value = "symbolic")]
    chi: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Text,
    Latex,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Reduce an expression to corollas
    Reduce { expr: Option<String> },
    /// Rewrite an expression as a combination of trivalent graphs
    Trivalize { expr: Option<String> },
    /// Convert between flavors and reduce
    Convert {
        #[arg(long)]
        to: String,
        expr: Option<String>,
    },
    /// Apply Φ to an undecorated trivalent graph given as JSON, then reduce
    Phi { graph: Option<String> },
    /// Check the IH relation at the internal edges of a trivalent graph given as JSON
    Ihcheck {
        #[arg(long)]
        edge: Option<usize>,
        graph: Option<String>,
    },
    /// Size of the corolla basis in one degree
    Dim {
        /// comma separated leg names
        #[arg(long, default_value = "")]
        legs: String,
        #[arg(long)]
        degree: i64,
    },
    /// Dimensions of the corolla basis without legs in degrees 0..=max
    Hilbert {
        #[arg(long)]
        max_degree: usize,
    },
    /// Act by a Brauer morphism given as JSON, then reduce
    Act {
        #[arg(long)]
        morphism: String,
        expr: Option<String>,
    },
}

enum Failure {
    Parse(String),
    Domain(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Json(_) => Failure::Parse(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

fn input(arg: Option<String>) -> Result<String, Failure> {
    match arg {
        Some(s) => Ok(s),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Other(e.to_string()))?;
            Ok(s.trim().to_string())
        }
    }
}

fn chi_mode(spec: &str, n: u32) -> Result<ChiMode, Failure> {
    if spec == "symbolic" {
        return Ok(ChiMode::Symbolic);
    }
    if let Some(g) = spec.strip_prefix("genus:") {
        let g: u64 = g.parse().map_err(|_| Failure::Parse(format!("bad genus in --chi {spec}")))?;
        return Ok(ChiMode::Value(genus_chi(n, g).map_err(Error::from)?));
    }
    parse_rational(spec).map(ChiMode::Value).ok_or_else(|| Failure::Parse(format!("bad --chi value {spec}")))
}

fn show_corollas(v: &CorollaVector, opts: &Opts, mode: &ChiMode) -> Result<String, Failure> {
    Ok(match opts.format {
        Format::Text => corolla_text(v, mode)?,
        Format::Latex => corolla_latex(v, mode)?,
        Format::Json => corolla_json(v, mode)?.to_string(),
    })
}

fn show_graphs(v: &GraphVector, opts: &Opts, mode: &ChiMode) -> Result<String, Failure> {
    Ok(match opts.format {
        Format::Json => graph_vector_json(v, mode)?.to_string(),
        _ => graph_vector_text(v, mode)?,
    })
}

fn legs_arg(s: &str) -> Vec<LegName> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(LegName::parse).collect()
}

fn run(cli: Cli) -> Result<String, Failure> {
    let opts = &cli.opts;
    let flavor: Flavor = opts.flavor.parse()?;
    let n = opts.n;
    let mode = chi_mode(&opts.chi, n)?;
    match cli.cmd {
        Cmd::Reduce { expr } => {
            let v = parse_vector(&input(expr)?, n, flavor)?;
            show_corollas(&reduce(&v), opts, &mode)
        }
        Cmd::Trivalize { expr } => {
            let v = parse_vector(&input(expr)?, n, flavor)?;
            let t = Trivalizer::new(flavor)?.trivalize(&v)?;
            show_graphs(&t, opts, &mode)
        }
        Cmd::Convert { to, expr } => {
            let target: Flavor = to.parse()?;
            let v = parse_vector(&input(expr)?, n, flavor)?;
            let w = match (flavor, target) {
                (Flavor::Theta, Flavor::ThetaPointed) | (Flavor::Closed, Flavor::Pointed) => blue_to_red(&v, target)?,
                (Flavor::Pointed, Flavor::ThetaPointed) | (Flavor::Closed, Flavor::Theta) => project_labels(&v)?,
                (Flavor::Pointed | Flavor::ThetaPointed, Flavor::Disc) => augment_external(&v)?,
                _ => return Err(Failure::Domain(format!("no conversion from {flavor} to {target}"))),
            };
            show_corollas(&reduce(&w), opts, &mode)
        }
        Cmd::Phi { graph } => {
            let g = UndecoratedGraph::from_json_str(&input(graph)?)?;
            let v = g.phi(g.legs())?;
            show_corollas(&reduce(&v), opts, &mode)
        }
        Cmd::Ihcheck { edge, graph } => {
            let g = UndecoratedGraph::from_json_str(&input(graph)?)?;
            let internal: Vec<usize> = (0..g.edges().len())
                .filter(|&k| matches!(g.edges()[k], (kappa_calculus::trivalent::Port::V(a), kappa_calculus::trivalent::Port::V(b)) if a != b))
                .collect();
            let edges = match edge {
                Some(k) if internal.contains(&k) => vec![k],
                Some(k) => return Err(Failure::Domain(format!("edge {k} is not an internal non-loop edge"))),
                None => internal,
            };
            let mut lines = Vec::new();
            let mut all = true;
            for k in edges {
                for (shape, name) in [(IhShape::Straight, "straight"), (IhShape::Crossed, "crossed")] {
                    let ok = reduce(&ih_defect(&g, k, shape)?).is_zero();
                    all &= ok;
                    lines.push(format!("edge {k} {name}: {}", if ok { "ok" } else { "FAILED" }));
                }
            }
            if !all {
                return Err(Failure::Other(lines.join("\n")));
            }
            Ok(if opts.format == Format::Json { serde_json::json!({ "sound": true, "checks": lines }).to_string() } else { lines.join("\n") })
        }
        Cmd::Dim { legs, degree } => {
            let basis = corolla_basis(&legs_arg(&legs), flavor, n, degree);
            Ok(if opts.format == Format::Json {
                serde_json::json!({ "dimension": basis.len(), "basis": basis }).to_string()
            } else {
                basis.len().to_string()
            })
        }
        Cmd::Hilbert { max_degree } => {
            let dims: Vec<usize> = (0..=max_degree as i64).map(|d| corolla_basis(&[], flavor, n, d).len()).collect();
            Ok(if opts.format == Format::Json {
                serde_json::json!(dims).to_string()
            } else {
                dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ")
            })
        }
        Cmd::Act { morphism, expr } => {
            let m: BrauerMorphism = serde_json::from_str(&morphism).map_err(|e| Failure::Parse(format!("morphism: {e}")))?;
            let m = m.normalized()?;
            let v = parse_vector(&input(expr)?, n, flavor)?;
            show_corollas(&reduce(&act(&m, &v)?), opts, &mode)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Parse(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Other(m)) => {
            eprintln!("{m}");
            ExitCode::from(1)
        }
    }
}
