mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tropicount::cuspidal::{count_cuspidal_with, sample_cuspidal_points};
use tropicount::enumeration::{
    count_nodal_with, count_welschinger_with, enumerate_nodal_subdivisions, sample_points,
    CountError, CountOptions, PointConfiguration,
};
use tropicount::io::{self, IoError};
use tropicount::lattice_geom::LatticePolygon;
use tropicount::parallel::{configure_threads, Execution};
use tropicount::patterns::{
    self, chebyshev_pattern, cuspidal_constants, parallelogram_node_count, rational_triangle_count,
    real_pattern_signature, PatternError,
};
use tropicount::rational::RationalPoint;
use tropicount::tropical_solver::{tropical_cramer, SolverError};
use tropicount::{corner_locus, TropicalCurve};

#[derive(Parser, Debug)]
#[command(name = "tropicount", version, about = "Exact tropical curve counts and renderings")]
struct Cli {
    /// Cap on worker threads for the counting engine.
    #[arg(long, global = true, env = "TROPICOUNT_THREADS")]
    threads: Option<usize>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also render the curves with their dual subdivisions as SVG.
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    /// Run the engine on a single thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Corner locus and dual subdivision of a tropical polynomial.
    Tropicalize {
        /// Polynomial file or inline JSON: [{"exp": [i, j], "val": "p/q"}, ...].
        #[arg(long)]
        poly: String,
    },
    /// The unique tropical polynomial on a support through given points.
    Cramer {
        /// Exponent vectors: [[i, j], ...].
        #[arg(long)]
        support: String,
        /// Points: [["p/q", "p/q"], ...].
        #[arg(long)]
        points: String,
    },
    /// Count curves through points.
    Count {
        #[arg(value_enum)]
        kind: CountKind,
        #[command(flatten)]
        target: Target,
        /// Number of nodes (nodal counts only).
        #[arg(long, default_value_t = 0)]
        nodes: usize,
        /// Explicit points; overrides sampling.
        #[arg(long, conflicts_with = "seed")]
        points: Option<String>,
        /// Seed for sampling generic points.
        #[arg(long)]
        seed: Option<u64>,
        /// Resampling attempts after a degenerate sample.
        #[arg(long, default_value_t = 5)]
        retries: u32,
    },
    /// All regular nodal subdivisions of a polygon with a given rank.
    EnumerateSubdivisions {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        rank: i64,
    },
    /// Multiplicities of local patterns.
    Patterns {
        #[command(subcommand)]
        pattern: PatternCommand,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Target {
    /// Polygon file or inline JSON: [[i, j], ...].
    #[arg(long)]
    polygon: Option<String>,
    /// Shortcut for the triangle of plane curves of this degree.
    #[arg(long)]
    degree: Option<i64>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CountKind {
    Nodal,
    Welschinger,
    Cuspidal,
}

#[derive(Subcommand, Debug)]
enum PatternCommand {
    /// Rational curves on a triangle through its edge orbits.
    Triangle {
        #[arg(long)]
        polygon: String,
        /// Indices of edges whose intersection points are fixed.
        #[arg(long, value_delimiter = ',')]
        pinned: Vec<usize>,
    },
    /// Nodes of a pair of binomial curves.
    Parallelogram {
        #[arg(long, allow_negative_numbers = true, num_args = 4, value_names = ["A", "B", "C", "D"])]
        exponents: Vec<i64>,
    },
    /// Chebyshev deformation pattern with its certificate.
    Chebyshev {
        #[arg(long)]
        degree: u32,
    },
    /// Real node signature of the two real patterns of a degree.
    Signature {
        #[arg(long)]
        degree: u32,
    },
    /// Constants used by the cuspidal weight.
    CuspidalConstants,
}

/// A failure with its process exit status.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn malformed(message: impl std::fmt::Display) -> Self {
        Failure { code: 2, message: message.to_string() }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::malformed(e)
    }
}

impl From<CountError> for Failure {
    fn from(e: CountError) -> Self {
        let code = match e {
            CountError::PointCount { .. } | CountError::RepeatedPoint => 2,
            CountError::Degenerate(_) => 3,
            CountError::NodesOutOfRange { .. } | CountError::NumericRange | CountError::Unsupported(_) => 4,
            CountError::Internal(_) => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        let code = match e {
            SolverError::Degenerate(_) => 3,
            SolverError::InvalidInput(_) => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<PatternError> for Failure {
    fn from(e: PatternError) -> Self {
        Failure { code: 4, message: e.to_string() }
    }
}

/// Parses `arg` as inline JSON when it looks like JSON, otherwise reads it as a path.
fn load_json(arg: &str) -> Result<Value, Failure> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::malformed(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::malformed(format!("invalid JSON in {arg}: {e}")))
}

fn load_polygon(target: &Target) -> Result<LatticePolygon, Failure> {
    match (&target.polygon, target.degree) {
        (Some(p), _) => Ok(io::read_polygon(&load_json(p)?)?),
        (None, Some(d)) if d >= 1 => Ok(LatticePolygon::standard_triangle(d)),
        (None, Some(d)) => Err(Failure::malformed(format!("degree {d} must be positive"))),
        (None, None) => Err(Failure::malformed("a polygon or a degree is required")),
    }
}

/// Result of a command: JSON plus the curves to draw.
struct Output {
    json: Value,
    drawings: Vec<(TropicalCurve, Vec<RationalPoint>, String)>,
}

impl Output {
    fn json(json: Value) -> Self {
        Output { json, drawings: Vec::new() }
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let execution = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    match &cli.command {
        Command::Tropicalize { poly } => {
            let f = io::read_polynomial(&load_json(poly)?)?;
            let curve = corner_locus(&f).map_err(Failure::malformed)?;
            Ok(Output {
                json: io::tropicalization_value(&f, &curve),
                drawings: vec![(curve, Vec::new(), "tropicalization".into())],
            })
        }
        Command::Cramer { support, points } => {
            let support = io::read_exponents(&load_json(support)?)?;
            let points = io::read_vectors(&load_json(points)?)?;
            let f = tropical_cramer(&support, &points)?;
            let mut json = json!({ "polynomial": io::polynomial_value(&f.normalized()) });
            let mut drawings = Vec::new();
            // Plane supports with a two-dimensional Newton polygon also get their curve.
            if f.dim() == 2 && f.newton_polygon().is_ok() {
                let curve = corner_locus(&f).map_err(Failure::malformed)?;
                json["curve"] = io::curve_value(&curve);
                json["subdivision"] = io::subdivision_value(curve.dual());
                let pts = points
                    .into_iter()
                    .map(|p| RationalPoint::new(p[0].clone(), p[1].clone()))
                    .collect();
                drawings.push((curve, pts, "interpolating curve".into()));
            }
            Ok(Output { json, drawings })
        }
        Command::Count { kind, target, nodes, points, seed, retries } => {
            let polygon = load_polygon(target)?;
            let options = CountOptions { execution };
            let attempt = |config: &PointConfiguration| -> Result<Output, Failure> {
                Ok(match kind {
                    CountKind::Nodal | CountKind::Welschinger => {
                        let (name, result) = match kind {
                            CountKind::Nodal => ("nodal", count_nodal_with(&polygon, *nodes, config, &options)?),
                            _ => ("welschinger", count_welschinger_with(&polygon, config, &options)?),
                        };
                        let drawings = result
                            .records
                            .iter()
                            .enumerate()
                            .map(|(k, r)| {
                                let caption = format!("record {k}: weight {} sign {}", r.weight, r.welschinger_sign);
                                (r.curve.clone(), result.points.points().to_vec(), caption)
                            })
                            .collect();
                        Output { json: io::nodal_result_value(name, &result), drawings }
                    }
                    CountKind::Cuspidal => {
                        let result = count_cuspidal_with(&polygon, config, &options)?;
                        let drawings = result
                            .records
                            .iter()
                            .enumerate()
                            .map(|(k, r)| {
                                let caption = format!("record {k}: {} weight {}", r.pattern.kind.name(), r.weight);
                                (r.curve.clone(), result.points.points().to_vec(), caption)
                            })
                            .collect();
                        Output { json: io::cuspidal_result_value(&result), drawings }
                    }
                })
            };
            if let Some(points) = points {
                let config = PointConfiguration::new(io::read_points(&load_json(points)?)?)?;
                return attempt(&config);
            }
            let seed = seed.ok_or_else(|| Failure::malformed("either --points or --seed is required"))?;
            let mut last = None;
            for k in 0..=u64::from(*retries) {
                let config = match kind {
                    CountKind::Nodal => sample_points(&polygon, *nodes, seed.wrapping_add(k))?,
                    CountKind::Welschinger => {
                        sample_points(&polygon, polygon.lattice_points().interior.len(), seed.wrapping_add(k))?
                    }
                    CountKind::Cuspidal => sample_cuspidal_points(&polygon, seed.wrapping_add(k))?,
                };
                match attempt(&config) {
                    Err(f) if f.code == 3 => {
                        eprintln!("seed {} is degenerate ({}); resampling", seed.wrapping_add(k), f.message);
                        last = Some(f);
                    }
                    other => return other,
                }
            }
            Err(last.expect("at least one attempt runs"))
        }
        Command::EnumerateSubdivisions { target, rank } => {
            let polygon = load_polygon(target)?;
            let all = enumerate_nodal_subdivisions(&polygon, *rank);
            Ok(Output::json(json!({
                "polygon": io::polygon_value(&polygon),
                "rank": rank,
                "count": all.len(),
                "subdivisions": all.iter().map(io::subdivision_value).collect::<Vec<_>>(),
            })))
        }
        Command::Patterns { pattern } => Ok(Output::json(run_pattern(pattern)?)),
    }
}

fn run_pattern(pattern: &PatternCommand) -> Result<Value, Failure> {
    Ok(match pattern {
        PatternCommand::Triangle { polygon, pinned } => {
            let triangle = io::read_polygon(&load_json(polygon)?)?;
            json!({
                "triangle": io::polygon_value(&triangle),
                "pinned": pinned,
                "count": rational_triangle_count(&triangle, pinned)?,
            })
        }
        PatternCommand::Parallelogram { exponents } => {
            let &[a, b, c, d] = exponents.as_slice() else {
                return Err(Failure::malformed("four exponents are required"));
            };
            json!({
                "exponents": [a, b, c, d],
                "parallelogram": io::polygon_value(&patterns::binomial_parallelogram(a, b, c, d)?),
                "nodes": parallelogram_node_count(a, b, c, d)?,
            })
        }
        PatternCommand::Chebyshev { degree } => {
            let p = chebyshev_pattern(*degree)?;
            json!({
                "degree": degree,
                "families": p.family_count,
                "nodes": p.node_count,
                "certificate": {
                    "dickson": p.certificate.dickson.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "repeated_critical": p.certificate.repeated_critical,
                    "critical_on_levels": p.certificate.critical_on_levels,
                    "verified": p.certificate.verify(),
                },
            })
        }
        PatternCommand::Signature { degree } => {
            let s = real_pattern_signature(*degree)?;
            json!({
                "degree": degree,
                "chebyshev_solitary": s.chebyshev_solitary,
                "variant_non_solitary": s.variant_non_solitary,
                "variant_imaginary": s.variant_imaginary,
                "cancels": s.cancels(),
            })
        }
        PatternCommand::CuspidalConstants => Value::Array(
            cuspidal_constants()
                .into_iter()
                .map(|(c, v)| json!({"name": c.name(), "polygon": io::polygon_value(&c.polygon()), "value": v}))
                .collect(),
        ),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        configure_threads(threads);
    }
    let output = match run(&cli) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code);
        }
    };
    let mut text = serde_json::to_string_pretty(&output.json).expect("JSON values serialize");
    text.push('\n');
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    if let Some(path) = &cli.svg {
        let rows: Vec<svg::Row> = output
            .drawings
            .iter()
            .map(|(curve, points, caption)| svg::Row { curve, points, caption: caption.clone() })
            .collect();
        if let Err(e) = std::fs::write(path, svg::render(&rows)) {
            eprintln!("error: cannot write SVG: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::SUCCESS
}
