mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ptolemy_core::sphere::SampleKind;
use ptolemy_core::tolerance::{EPS_REL, SEAM_TOL, T_MAX};

use commands::{Failure, Outcome};

/// Metric Möbius geometry on distance matrices and sampled curves.
///
/// Exit status: 0 when the checked property holds, 2 when it fails (a witness
/// is printed), 1 on usage, input or I/O errors. Set PTOLEMY_THREADS to cap
/// the number of worker threads.
#[derive(Debug, Parser)]
#[command(name = "ptolemy", version)]
struct Cli {
    /// Relative tolerance for Ptolemy, equality and symmetry checks.
    #[arg(long, global = true, default_value_t = EPS_REL)]
    eps: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ptolemy verdict, circle-quadruple census and line embedding of a matrix.
    Check { matrix: PathBuf },
    /// Invert at a point, or pass to the bounded metric based at a point.
    Invert(InvertArgs),
    /// Compare the cross ratio triples of two matrices.
    Equiv {
        source: PathBuf,
        target: PathBuf,
        /// JSON object mapping source labels to target labels (default: equal labels).
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Ptolemy segments: matrix to curve and back.
    #[command(subcommand)]
    Segment(CurveCommand),
    /// Ptolemy circles: matrix to curve and back.
    #[command(subcommand)]
    Circle(CurveCommand),
    /// Möbius map between two sampled segments or circles.
    #[command(subcommand)]
    Map(MapCommand),
    /// Seeded sample of a standard space, with its Ptolemy verdict.
    Sphere(SphereArgs),
    /// Bourdon metrics of the glued hyperbolic space at o and o'.
    Exotic(ExoticArgs),
}

#[derive(Debug, Args)]
struct InvertArgs {
    matrix: PathBuf,
    /// Label of the inversion point.
    #[arg(long, required_unless_present = "bound_at", conflicts_with = "bound_at")]
    at: Option<String>,
    /// Label of the base point of the bounded metric.
    #[arg(long)]
    bound_at: Option<String>,
    /// Output matrix (default: stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Skip the cross ratio comparison with the input.
    #[arg(long)]
    no_verify: bool,
}

#[derive(Debug, Subcommand)]
enum CurveCommand {
    /// Ptolemy parameterization of the points of a matrix.
    Classify(ClassifyArgs),
    /// Distance matrix of the samples of a curve file.
    Synth {
        curve: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    matrix: PathBuf,
    /// Comma-separated labels in curve order (default: file order).
    #[arg(long, value_delimiter = ',')]
    order: Option<Vec<String>>,
    /// Label of the point -1 (circles only; default: farthest from the first point).
    #[arg(long)]
    minus_one: Option<String>,
    /// Output curve JSON (default: stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Plot data: CSV of (t, a, b, alpha) for segments, (t, a, b) for circles.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum MapCommand {
    Segment(MapArgs),
    Circle(MapArgs),
}

#[derive(Debug, Args)]
struct MapArgs {
    source: PathBuf,
    target: PathBuf,
    /// Source anchors x1,x2,x3 (default: first, middle, last for segments;
    /// thirds of the order for circles).
    #[arg(long, value_delimiter = ',')]
    anchors: Option<Vec<String>>,
    /// Target anchors, sent from the source anchors in order.
    #[arg(long, value_delimiter = ',')]
    onto: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    order: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    target_order: Option<Vec<String>>,
    #[arg(long)]
    minus_one: Option<String>,
    #[arg(long)]
    target_minus_one: Option<String>,
    /// Largest crt deviation accepted between samples and images.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SphereArgs {
    #[arg(long, default_value_t = SampleKind::Sphere)]
    kind: SampleKind,
    /// Dimension n of Sⁿ or ℝⁿ (1 to 4).
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 12)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the sampled distance matrix here.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExoticArgs {
    /// Length of the gluing geodesic segment from o to o'.
    #[arg(long)]
    l: f64,
    #[arg(long, default_value_t = T_MAX)]
    tmax: f64,
    #[arg(long, default_value_t = SEAM_TOL)]
    seam_tol: f64,
    /// Number of equally spaced equator samples.
    #[arg(long, default_value_t = 6)]
    equator: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var("PTOLEMY_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| anyhow::anyhow!("PTOLEMY_THREADS={raw:?} is not a thread count"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    if !(cli.eps > 0.0 && cli.eps.is_finite()) {
        anyhow::bail!("--eps must be positive, got {}", cli.eps);
    }
    configure_threads()?;
    let eps = cli.eps;
    match cli.command {
        Command::Check { matrix } => commands::check(&matrix, eps),
        Command::Invert(a) => commands::invert(
            &a.matrix,
            a.at.as_deref(),
            a.bound_at.as_deref(),
            a.output.as_deref(),
            !a.no_verify,
            eps,
        ),
        Command::Equiv { source, target, map } => commands::equiv(&source, &target, map.as_deref(), eps),
        Command::Segment(CurveCommand::Classify(a)) => {
            if a.minus_one.is_some() {
                anyhow::bail!("--minus-one applies to circles only");
            }
            commands::segment_classify(&a.matrix, a.order, a.output.as_deref(), a.csv.as_deref(), eps)
        }
        Command::Segment(CurveCommand::Synth { curve, output }) => {
            commands::segment_synth(&curve, output.as_deref(), eps)
        }
        Command::Circle(CurveCommand::Classify(a)) => commands::circle_classify(
            &a.matrix,
            a.order,
            a.minus_one,
            a.output.as_deref(),
            a.csv.as_deref(),
            eps,
        ),
        Command::Circle(CurveCommand::Synth { curve, output }) => {
            commands::circle_synth(&curve, output.as_deref(), eps)
        }
        Command::Map(MapCommand::Segment(a)) => commands::map(commands::MapKind::Segment, a.into(), eps),
        Command::Map(MapCommand::Circle(a)) => commands::map(commands::MapKind::Circle, a.into(), eps),
        Command::Sphere(a) => commands::sphere(a.kind, a.n, a.count, a.seed, a.output.as_deref(), eps),
        Command::Exotic(a) => commands::exotic(a.l, a.tmax, a.seam_tol, a.equator, a.output.as_deref(), eps),
    }
}

impl From<MapArgs> for commands::MapRequest {
    fn from(a: MapArgs) -> Self {
        commands::MapRequest {
            source: a.source,
            target: a.target,
            anchors: a.anchors,
            onto: a.onto,
            order: a.order,
            target_order: a.target_order,
            minus_one: a.minus_one,
            target_minus_one: a.target_minus_one,
            tol: a.tol,
            output: a.output,
        }
    }
}

/// The error chain joined by ": ", skipping causes already quoted by their parent.
fn describe(e: &anyhow::Error) -> String {
    let mut out = String::new();
    let mut last = String::new();
    for cause in e.chain() {
        let msg = cause.to_string();
        if !last.contains(&msg) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&msg);
        }
        last = msg;
    }
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(Outcome::Holds) => ExitCode::SUCCESS,
        Ok(Outcome::Fails) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            if e.downcast_ref::<Failure>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
