//! Command-line front end: envelope evaluation, hull queries, regularity
//! probes, the built-in example family, two-qubit entanglement roofs, and
//! the verification suite. Identical arguments and seed reproduce
//! byte-identical output.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use convex_roof::analysis::{gradient_probe, oscillation, refinement_convergence};
use convex_roof::examples::{self, ExampleName};
use convex_roof::geometry::{convex_hull, Point};
use convex_roof::io::{self, format_significant};
use convex_roof::quantum::{
    concurrence_wootters, entanglement_of_formation, roof_entanglement_parallel, DensityMatrix,
    EntanglementMeasure, LinearEntropy, RoofOptions, VonNeumannEntropy,
};
use convex_roof::roof::SampledConvexProblem;
use convex_roof::{verify, Error};

#[derive(Parser)]
#[command(
    name = "convex-roof",
    version,
    about = "Convex roof extensions of sampled functions, with entanglement applications"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extreme points, affine dimension, and (d ≤ 3) facets of a cloud
    Hull {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluate the envelope at a query point
    Roof {
        #[command(flatten)]
        source: SourceArgs,
        /// Comma-separated query coordinates, e.g. 0.5,0.5
        #[arg(long)]
        query: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Envelope values on a bounding-box lattice (d ≤ 3)
    Grid {
        #[command(flatten)]
        source: SourceArgs,
        /// Lattice points per axis
        #[arg(long, default_value_t = 64)]
        grid_resolution: usize,
        /// Worker threads; results are independent of this
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Optimal support simplex and the affine functional on it
    Flat {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        query: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Supporting functional at a boundary point, if one exists under the
    /// gradient bound
    Hyperplane {
        #[command(flatten)]
        source: SourceArgs,
        /// Boundary point coordinates
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 100.0)]
        gradient_bound: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Smallest convex extension value at an outside query
    Extend {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        query: String,
        #[arg(long, default_value_t = 100.0)]
        gradient_bound: f64,
        /// Cap on the number of hull vertices used as boundary samples
        #[arg(long, default_value_t = 64)]
        boundary_samples: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Continuity / differentiability / convergence probes
    Probe {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_enum)]
        kind: ProbeKind,
        /// Probe point (oscillation, gradient, convergence)
        #[arg(long)]
        query: String,
        /// Radii for oscillation, e.g. 0.2,0.1,0.05
        #[arg(long, default_value = "0.2,0.1,0.05")]
        radii: String,
        #[arg(long, default_value_t = 200)]
        samples_per_radius: usize,
        /// Finite-difference step for gradient probes
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// Resolutions for convergence studies, e.g. 64,256,1024
        #[arg(long, default_value = "64,256")]
        resolutions: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Emit a built-in example cloud and its oracle comparison
    Example {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Numeric entanglement roof of a two-qubit state
    Entangle {
        /// bell | werner:p | random:seed:rank, or a path to a state JSON
        #[arg(long)]
        state: String,
        #[arg(long, value_enum, default_value_t = MeasureKind::LinearEntropy)]
        measure: MeasureKind,
        /// Ensemble size; defaults to min(2·rank, 8)
        #[arg(short = 'm', long)]
        ensemble_size: Option<usize>,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 300)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the property suite; nonzero exit on any failure
    Verify {
        /// Reduced sizes for a fast smoke run
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct SourceArgs {
    /// Built-in example name (tomato_can, nonclosed_extreme, combined_4d,
    /// punctured_no_extension, potato_chip, no_c2, strictly_convex_random)
    #[arg(long, conflicts_with = "input")]
    example: Option<String>,
    /// Point-cloud CSV with header x1,...,xd,f
    #[arg(long)]
    input: Option<PathBuf>,
    /// Sampling resolution for built-in examples
    #[arg(short = 'N', long, default_value_t = 64)]
    resolution: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write to a file instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProbeKind {
    Oscillation,
    Gradient,
    Convergence,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeasureKind {
    LinearEntropy,
    VonNeumann,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::NonTermination { .. } => 3,
        Error::UnknownExample(_)
        | Error::ResolutionTooLow { .. }
        | Error::Parse(_)
        | Error::DimensionMismatch { .. }
        | Error::Unsupported(_) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Hull { source, out } => {
            let (problem, _) = load_problem(&source)?;
            let hull = convex_hull(problem.cloud())?;
            let json = io::hull_json(&hull);
            emit(&out, |w, format| match format {
                Format::Json => write_json(w, &json),
                _ => {
                    writeln!(w, "vertices: {}", json.vertex_indices.len())?;
                    writeln!(w, "affine dimension: {}", json.affine_dim)?;
                    match &json.facets {
                        Some(f) => writeln!(w, "facets: {}", f.len())?,
                        None => writeln!(w, "facets: not computed (d > 3)")?,
                    }
                    writeln!(w, "vertex indices: {:?}", json.vertex_indices)?;
                    Ok(())
                }
            })
        }
        Command::Roof { source, query, out } => {
            let (problem, spec) = load_problem(&source)?;
            let q = parse_point(&query, problem.dim())?;
            let rv = problem.roof_eval(&q)?;
            let json = io::roof_value_json(&rv);
            let oracle = spec.as_ref().and_then(|s| s.oracle_at(q.coords()));
            emit(&out, |w, format| match format {
                Format::Json => write_json(w, &serde_json::json!({
                    "schema_version": io::SCHEMA_VERSION,
                    "roof": &json,
                    "oracle": oracle,
                })),
                _ => {
                    writeln!(w, "roof value: {}", format_significant(json.value, 6))?;
                    if let Some(o) = oracle {
                        writeln!(w, "oracle:     {}", format_significant(o, 6))?;
                        writeln!(
                            w,
                            "abs error:  {}",
                            format_significant((json.value - o).abs(), 6)
                        )?;
                    }
                    writeln!(w, "decomposition ({} points):", json.decomposition.len())?;
                    for e in &json.decomposition {
                        writeln!(
                            w,
                            "  index {:>5}  weight {}",
                            e.index,
                            format_significant(e.weight, 6)
                        )?;
                    }
                    Ok(())
                }
            })
        }
        Command::Grid {
            source,
            grid_resolution,
            jobs,
            out,
        } => {
            let (problem, _) = load_problem(&source)?;
            let grid = problem.roof_grid_parallel(grid_resolution, jobs.max(1))?;
            emit(&out, |w, format| match format {
                Format::Json => write_json(w, &io::grid_json(&grid)),
                Format::Csv => io::grid_to_csv(&mut *w, &grid),
                Format::Table => {
                    let inside = grid.values.iter().filter(|v| v.is_some()).count();
                    writeln!(
                        w,
                        "{} of {} lattice cells inside the hull",
                        inside,
                        grid.values.len()
                    )?;
                    io::grid_to_csv(&mut *w, &grid)
                }
            })
        }
        Command::Flat { source, query, out } => {
            let (problem, _) = load_problem(&source)?;
            let q = parse_point(&query, problem.dim())?;
            let flat = problem.flat_set(&q)?;
            let json = io::flat_set_json(&q, &flat);
            emit(&out, |w, format| match format {
                Format::Json => write_json(w, &json),
                _ => {
                    writeln!(w, "support indices: {:?}", json.support_indices)?;
                    for p in &json.support {
                        let coords: Vec<String> =
                            p.iter().map(|&c| format_significant(c, 6)).collect();
                        writeln!(w, "  ({})", coords.join(", "))?;
                    }
                    let g: Vec<String> = json
                        .functional
                        .gradient
                        .iter()
                        .map(|&x| format_significant(x, 6))
                        .collect();
                    writeln!(
                        w,
                        "functional: ({})·x + {}",
                        g.join(", "),
                        format_significant(json.functional.offset, 6)
                    )?;
                    writeln!(
                        w,
                        "barycenter error: {}",
                        format_significant(json.barycenter_error, 6)
                    )?;
                    Ok(())
                }
            })
        }
        Command::Hyperplane {
            source,
            point,
            gradient_bound,
            out,
        } => {
            let (problem, _) = load_problem(&source)?;
            let p = parse_point(&point, problem.dim())?;
            let functional = problem.supporting_hyperplane(&p, gradient_bound)?;
            let json = io::HyperplaneJson {
                schema_version: io::SCHEMA_VERSION,
                point: p.coords().to_vec(),
                gradient_bound,
                feasible: functional.is_some(),
                functional: functional.as_ref().map(io::functional_json),
            };
            emit(&out, |w, format| match format {
                Format::Json => write_json(w, &json),
                _ => {
                    if let Some(f) = &json.functional {
                        let g: Vec<String> =
                            f.gradient.iter().map(|&x| format_significant(x, 6)).collect();
                        writeln!(
                            w,
                            "supporting functional: ({})·x + {}",
                            g.join(", "),
                            format_significant(f.offset, 6)
                        )?;
                    } else {
                        writeln!(
                            w,
                            "vertical: no supporting functional with |g|_inf <= {gradient_bound}"
                        )?;
                    }
                    Ok(())
                }
            })
        }
        Command::Extend {
            source,
            query,
            gradient_bound,
            boundary_samples,
            out,
        } => {
            let (problem, _) = load_problem(&source)?;
            let q = parse_point(&query, problem.dim())?;
            let hull = problem.hull()?;
            let verts = &hull.vertex_indices;
            let stride = (verts.len().div_ceil(boundary_samples.max(1))).max(1);
            let boundary: Vec<Point<f64>> = verts
                .iter()
                .step_by(stride)
                .map(|&i| problem.cloud().point(i).clone())
                .collect();
            let value = problem.outer_extension(&q, &boundary, gradient_bound)?;
            emit(&out, |w, format| match format {
                Format::Json => write_json(w, &serde_json::json!({
                    "schema_version": io::SCHEMA_VERSION,
                    "query": q.coords(),
                    "gradient_bound": gradient_bound,
                    "boundary_samples": boundary.len(),
                    "value": value,
                })),
                _ => {
                    writeln!(
                        w,
                        "outer extension value: {} ({} boundary samples)",
                        format_significant(value, 6),
                        boundary.len()
                    )?;
                    Ok(())
                }
            })
        }
        Command::Probe {
            source,
            kind,
            query,
            radii,
            samples_per_radius,
            step,
            resolutions,
            out,
        } => run_probe(
            source,
            kind,
            query,
            radii,
            samples_per_radius,
            step,
            resolutions,
            out,
        ),
        Command::Example { source, out } => {
            let name = source.example.clone().ok_or(Error::Unsupported(
                "the example subcommand needs --example NAME",
            ))?;
            let name = ExampleName::from_str(&name)?;
            let (problem, spec) =
                examples::make_example::<f64>(name, source.resolution, source.seed)?;
            emit(&out, |w, format| match format {
                Format::Csv => io::write_point_cloud(&mut *w, problem.cloud(), problem.values()),
                Format::Json => {
                    let comparison = oracle_comparison(&problem, &spec, source.seed)?;
                    write_json(w, &serde_json::json!({
                        "schema_version": io::SCHEMA_VERSION,
                        "name": name.to_string(),
                        "resolution": source.resolution,
                        "seed": source.seed,
                        "points": problem.cloud().len(),
                        "dimension": problem.dim(),
                        "notes": spec.notes,
                        "oracle_comparison": comparison.iter().map(|r| serde_json::json!({
                            "probe": r.0, "roof": r.1, "oracle": r.2,
                        })).collect::<Vec<_>>(),
                    }))
                }
                Format::Table => {
                    writeln!(
                        w,
                        "{}: {} points in dimension {}",
                        name,
                        problem.cloud().len(),
                        problem.dim()
                    )?;
                    writeln!(w, "{}", spec.notes)?;
                    let comparison = oracle_comparison(&problem, &spec, source.seed)?;
                    if comparison.is_empty() {
                        writeln!(w, "(no analytic oracle)")?;
                    } else {
                        writeln!(w, "{:>28} {:>14} {:>14} {:>12}", "probe", "roof", "oracle", "abs_error")?;
                        for (probe, roof, oracle) in &comparison {
                            let p: Vec<String> =
                                probe.iter().map(|&c| format_significant(c, 4)).collect();
                            writeln!(
                                w,
                                "{:>28} {:>14} {:>14} {:>12}",
                                p.join(","),
                                format_significant(*roof, 6),
                                format_significant(*oracle, 6),
                                format_significant((roof - oracle).abs(), 6)
                            )?;
                        }
                    }
                    Ok(())
                }
            })
        }
        Command::Entangle {
            state,
            measure,
            ensemble_size,
            restarts,
            iters,
            seed,
            jobs,
            out,
        } => {
            let rho = load_state(&state)?;
            let options = RoofOptions {
                ensemble_size,
                restarts,
                max_iters: iters,
                seed,
                ..Default::default()
            };
            let (outcome, measure_name, oracle) = match measure {
                MeasureKind::LinearEntropy => {
                    let m = LinearEntropy;
                    let outcome = roof_entanglement_parallel(&rho, &m, &options, jobs.max(1))?;
                    let oracle = concurrence_wootters(&rho) / 2.0f64.sqrt();
                    (outcome, EntanglementMeasure::<f64>::name(&m), Some(oracle))
                }
                MeasureKind::VonNeumann => {
                    let m = VonNeumannEntropy;
                    let outcome = roof_entanglement_parallel(&rho, &m, &options, jobs.max(1))?;
                    let oracle = entanglement_of_formation(&rho);
                    (outcome, EntanglementMeasure::<f64>::name(&m), Some(oracle))
                }
            };
            let json = io::EntangleJson {
                schema_version: io::SCHEMA_VERSION,
                state: state.clone(),
                measure: measure_name.to_string(),
                upper_bound: outcome.upper_bound,
                oracle,
                gap: oracle.map(|o| outcome.upper_bound - o),
                ensemble_size: outcome.ensemble_size,
                restarts: outcome.restarts,
                converged: outcome.converged,
                ensemble: io::ensemble_json(&outcome.decomposition),
            };
            emit(&out, |w, format| match format {
                Format::Json => write_json(w, &json),
                _ => {
                    writeln!(
                        w,
                        "upper bound: {}  (numeric roof, {} restarts, ensemble size {})",
                        format_significant(json.upper_bound, 6),
                        json.restarts,
                        json.ensemble_size
                    )?;
                    if let Some(o) = json.oracle {
                        writeln!(w, "oracle:      {}", format_significant(o, 6))?;
                        writeln!(
                            w,
                            "gap:         {}",
                            format_significant(json.gap.unwrap_or(f64::NAN), 6)
                        )?;
                    }
                    writeln!(w, "ensemble:")?;
                    for m in &json.ensemble {
                        writeln!(w, "  p = {}", format_significant(m.probability, 6))?;
                    }
                    Ok(())
                }
            })
        }
        Command::Verify { quick, seed } => {
            let report = verify::run(quick, seed);
            print!("{}", verify::render_text(&report));
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run_probe(
    source: SourceArgs,
    kind: ProbeKind,
    query: String,
    radii: String,
    samples_per_radius: usize,
    step: f64,
    resolutions: String,
    out: OutputArgs,
) -> Result<ExitCode, Error> {
    match kind {
        ProbeKind::Oscillation => {
            let (problem, _) = load_problem(&source)?;
            let q = parse_point(&query, problem.dim())?;
            let radii = parse_list(&radii)?;
            let report = oscillation(&problem, &q, &radii, samples_per_radius, source.seed)?;
            emit(&out, |w, format| match format {
                Format::Json => write_json(w, &io::oscillation_json(&report)),
                _ => {
                    write!(w, "{}", io::oscillation_table(&report))?;
                    Ok(())
                }
            })
        }
        ProbeKind::Gradient => {
            let (problem, _) = load_problem(&source)?;
            let q = parse_point(&query, problem.dim())?;
            let probe = gradient_probe(&problem, &q, step)?;
            emit(&out, |w, format| match format {
                Format::Json => write_json(w, &io::gradient_probe_json(&probe)),
                _ => {
                    write!(w, "{}", io::gradient_probe_table(&probe))?;
                    Ok(())
                }
            })
        }
        ProbeKind::Convergence => {
            let name = source.example.clone().ok_or(Error::Unsupported(
                "convergence probes need a built-in --example",
            ))?;
            let name = ExampleName::from_str(&name)?;
            let resolutions: Vec<usize> = resolutions
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|e| Error::Parse(format!("bad resolution `{s}`: {e}")))
                })
                .collect::<Result<_, _>>()?;
            let coords = parse_list(&query)?;
            let probe = Point::new(coords)?;
            let table = refinement_convergence(name, &resolutions, &[probe], source.seed)?;
            emit(&out, |w, format| match format {
                Format::Json => write_json(w, &io::convergence_json(&table)),
                _ => {
                    write!(w, "{}", io::convergence_table_text(&table))?;
                    Ok(())
                }
            })
        }
    }
}

type Comparison = Vec<(Vec<f64>, f64, f64)>;

/// Deterministic oracle probes: seeded random in-hull points.
fn oracle_comparison(
    problem: &SampledConvexProblem<f64>,
    spec: &examples::ExampleSpec<f64>,
    seed: u64,
) -> Result<Comparison, Error> {
    if spec.oracle.is_none() {
        return Ok(Vec::new());
    }
    use convex_roof::scalar::Float as _;
    let mut rows = Vec::new();
    let n = problem.cloud().len();
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut found = 0usize;
    let mut attempts = 0usize;
    while found < 8 && attempts < 200 {
        attempts += 1;
        // random convex combination of a few cloud points
        let k = 3 + (next() * 3.0) as usize;
        let mut idx: Vec<usize> = (0..k).map(|_| (next() * n as f64) as usize % n).collect();
        idx.sort_unstable();
        idx.dedup();
        let mut w: Vec<f64> = idx.iter().map(|_| 0.05 + next()).collect();
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        let mut coords = vec![0.0; problem.dim()];
        for (&i, &wi) in idx.iter().zip(&w) {
            for (c, &x) in coords.iter_mut().zip(problem.cloud().coords(i)) {
                *c += wi * x;
            }
        }
        let Some(oracle) = spec.oracle_at(&coords) else {
            continue;
        };
        let roof = problem.roof_eval(&Point::new(coords.clone())?)?.value;
        rows.push((coords.iter().map(|&c| f64::of(c)).collect(), roof, oracle));
        found += 1;
    }
    Ok(rows)
}

fn load_problem(
    source: &SourceArgs,
) -> Result<(SampledConvexProblem<f64>, Option<examples::ExampleSpec<f64>>), Error> {
    match (&source.example, &source.input) {
        (Some(name), None) => {
            let name = ExampleName::from_str(name)?;
            let (problem, spec) =
                examples::make_example::<f64>(name, source.resolution, source.seed)?;
            Ok((problem, Some(spec)))
        }
        (None, Some(path)) => {
            let file = File::open(path)?;
            let (cloud, values) = io::read_point_cloud::<f64, _>(file)?;
            Ok((SampledConvexProblem::new(cloud, values)?, None))
        }
        _ => Err(Error::Unsupported(
            "exactly one of --example or --input is required",
        )),
    }
}

fn load_state(text: &str) -> Result<DensityMatrix<f64>, Error> {
    let path = std::path::Path::new(text);
    if path.exists() {
        let file = File::open(path)?;
        return io::density_matrix_from_json::<f64, _>(file);
    }
    io::parse_state_name::<f64>(text)
}

fn parse_list(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad number `{s}`: {e}")))
        })
        .collect()
}

fn parse_point(text: &str, dim: usize) -> Result<Point<f64>, Error> {
    let coords = parse_list(text)?;
    if coords.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: coords.len(),
        });
    }
    Point::new(coords)
}

fn emit<F>(out: &OutputArgs, body: F) -> Result<ExitCode, Error>
where
    F: Fn(&mut dyn Write, Format) -> Result<(), Error>,
{
    match &out.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            body(&mut w, out.format)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            body(&mut w, out.format)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn write_json<T: serde::Serialize>(w: &mut dyn Write, value: &T) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value)?;
    writeln!(w, "{text}")?;
    Ok(())
}
