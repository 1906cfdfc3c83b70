//! The `antipode-bridge` command line.
//!
//! Exit codes are a stable contract: 0 success, 1 check or precondition
//! failure, 2 input error, 3 internal self-test failure (a pipeline
//! violation or a broken oracle duality).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use antipode_core::{
    best_star_distance, brute_intersection, exposure_set, star_certificates, verify_cover,
    verify_kkm, verify_nondegenerate, violation_scan, ConstructionError, Cover, CoverKind,
    CoverSpec, CoverStats, GridPoint, PipelineOutcome, PipelineReport, SweepRow, Violation,
};

use crate::dto::{self, ExtendedCoverDoc, SweepRowDoc};
use crate::exec;
use crate::gen::generate_spec;
use crate::render::{render_svg, RenderOptions};
use crate::write_atomic;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SELF_TEST: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "antipode-bridge",
    version,
    about = "Exact rational verification of KKM covers and their antipode-free sphere extensions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a cover spec: coverage, the KKM condition, non-degeneracy.
    Verify(VerifyArgs),
    /// Run the extension pipeline: thicken if degenerate, then either
    /// report grid intersection points or build the antipode-free cover.
    Run(RunArgs),
    /// Independent oracles: brute-force intersection, star certificates,
    /// and the exposure duality cross-check; optionally sweep resolutions.
    Oracle(OracleArgs),
    /// Generate a seeded ratio cover spec (optionally degenerate).
    Gen(GenArgs),
    /// Render the unfolded octahedral sphere of a 2-dimensional cover.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Path to a cover spec JSON file.
    #[arg(long)]
    pub spec: PathBuf,
    /// Grid resolution N; defaults to the labeling resolution for grid
    /// specs.
    #[arg(long)]
    pub resolution: Option<u32>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub resolution: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Self-test hook: replace the assembled extension with this fixture
    /// before the final scans.
    #[arg(long, value_name = "PATH")]
    pub inject_extended: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub resolution: Option<u32>,
    /// Sweep these resolutions instead of reporting a single one.
    #[arg(long, value_delimiter = ',')]
    pub sweep: Vec<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Dimension of the generated cover.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Generator seed; the same seed yields byte-identical output.
    #[arg(long)]
    pub seed: u64,
    /// Generate a cover that fails non-degeneracy.
    #[arg(long)]
    pub degenerate: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub resolution: Option<u32>,
    /// Image width in pixels.
    #[arg(long, default_value_t = 800)]
    pub size: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Runs a parsed command and maps every outcome to the exit-code contract.
pub fn dispatch(cli: Cli) -> i32 {
    exec::init_thread_pool();
    let result = match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Run(args) => cmd_run(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Render(args) => cmd_render(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            EXIT_INPUT
        }
    }
}

fn load_spec(path: &Path) -> Result<CoverSpec> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading spec {}", path.display()))?;
    dto::spec_from_json(&text).with_context(|| format!("parsing spec {}", path.display()))
}

/// Resolution to work at: explicit flag, or the labeling's own resolution
/// for grid specs.
fn resolve_resolution(spec: &CoverSpec, flag: Option<u32>) -> Result<u32> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match &spec.kind {
        CoverKind::GridLabeling { resolution, .. } => Ok(*resolution),
        _ => Err(anyhow!("--resolution is required for this spec")),
    }
}

fn emit(out: &Option<PathBuf>, contents: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, contents)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{contents}"),
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let spec = load_spec(&args.spec)?;
    let cover = Cover::from_spec(spec.clone())?;
    let resolution = resolve_resolution(&spec, args.resolution)?;

    let coverage = verify_cover(&cover, resolution)?;
    let kkm = verify_kkm(&cover, resolution)?;
    let nondegenerate = verify_nondegenerate(&cover, resolution)?;
    let doc = dto::verify_report_doc(spec.dim, &coverage, &kkm, &nondegenerate);

    let rendered = match args.format {
        Format::Json => dto::to_json_string(&doc),
        Format::Text => {
            let mut text = String::new();
            let line = |passed: bool, n: usize| {
                if passed {
                    "PASS".to_string()
                } else {
                    format!("FAIL ({n} witnesses)")
                }
            };
            writeln!(text, "resolution: {resolution}").unwrap();
            writeln!(text, "cover: {}", line(coverage.passed(), coverage.uncovered.len())).unwrap();
            writeln!(text, "kkm: {}", line(kkm.passed(), kkm.violations.len())).unwrap();
            writeln!(
                text,
                "nondegenerate: {}",
                line(nondegenerate.passed(), nondegenerate.violations.len())
            )
            .unwrap();
            text
        }
    };
    emit(&args.out, &rendered)?;
    Ok(if doc.passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_run(args: RunArgs) -> Result<i32> {
    let spec = load_spec(&args.spec)?;
    let cover = Cover::from_spec(spec.clone())?;
    let resolution = resolve_resolution(&spec, args.resolution)?;

    let report = if let Some(fixture) = &args.inject_extended {
        run_with_injected_extension(&cover, resolution, fixture)?
    } else {
        match exec::run_pipeline_timed(&cover, resolution) {
            Ok(timed) => {
                eprintln!(
                    "pipeline: N={resolution} finished in {:.3} ms",
                    timed.elapsed.as_secs_f64() * 1e3
                );
                timed.report
            }
            Err(ConstructionError::KkmPrecondition { violations }) => {
                eprintln!(
                    "KKM precondition failed at {} grid points (first: {})",
                    violations.len(),
                    violations
                        .first()
                        .map(|p| p.to_string())
                        .unwrap_or_default()
                );
                return Ok(EXIT_CHECK_FAILED);
            }
            Err(other) => return Err(other.into()),
        }
    };

    let doc = dto::pipeline_report_doc(spec.dim, &report);
    let rendered = match args.format {
        Format::Json => dto::to_json_string(&doc),
        Format::Text => pipeline_text(&report),
    };
    emit(&args.out, &rendered)?;
    Ok(if report.is_violation() {
        EXIT_SELF_TEST
    } else {
        EXIT_OK
    })
}

/// The `--inject-extended` path: runs the pipeline stages with the
/// assembled extension replaced by a fixture, so the violation branch can
/// be exercised deliberately.
fn run_with_injected_extension(
    cover: &Cover,
    resolution: u32,
    fixture: &Path,
) -> Result<PipelineReport> {
    let text = std::fs::read_to_string(fixture)
        .with_context(|| format!("reading extension fixture {}", fixture.display()))?;
    let doc: ExtendedCoverDoc = serde_json::from_str(&text)
        .with_context(|| format!("parsing extension fixture {}", fixture.display()))?;
    let extension = doc
        .into_extension()
        .context("rebuilding extension fixture")?;
    if extension.dim() != cover.dim() || extension.resolution() != resolution {
        return Err(anyhow!(
            "fixture is d={} N={}, run wants d={} N={resolution}",
            extension.dim(),
            extension.resolution(),
            cover.dim()
        ));
    }

    let kkm = verify_kkm(cover, resolution)?;
    if !kkm.passed() {
        return Err(anyhow!("KKM precondition fails; fixture injection needs a KKM cover"));
    }
    let mut thickened = false;
    let mut working = cover.clone();
    if !verify_nondegenerate(&working, resolution)?.passed() {
        working = working.thicken();
        thickened = true;
    }
    let exposed = exposure_set(&working, resolution)?;
    if !exposed.is_empty() {
        return Err(anyhow!(
            "cover has {} grid intersection points; fixture injection needs an intersection-free run",
            exposed.len()
        ));
    }
    let outcome = match violation_scan(&extension) {
        Some(violation) => PipelineOutcome::Violation(violation),
        None => PipelineOutcome::AntipodeFreeCoverBuilt {
            stats: CoverStats::from_extension(&extension),
        },
    };
    Ok(PipelineReport {
        outcome,
        resolution,
        thickened,
    })
}

fn pipeline_text(report: &PipelineReport) -> String {
    let mut text = String::new();
    writeln!(text, "resolution: {}", report.resolution).unwrap();
    writeln!(text, "thickened: {}", report.thickened).unwrap();
    match &report.outcome {
        PipelineOutcome::KkmPointsFound { points } => {
            writeln!(text, "outcome: kkm points found").unwrap();
            for p in points {
                writeln!(text, "  {p}").unwrap();
            }
        }
        PipelineOutcome::AntipodeFreeCoverBuilt { stats } => {
            writeln!(text, "outcome: antipode-free cover built").unwrap();
            writeln!(
                text,
                "  sphere grid: {} points ({} top, {} bottom)",
                stats.sphere_points, stats.top_points, stats.bottom_points
            )
            .unwrap();
            writeln!(text, "  set sizes: {:?}", stats.set_sizes).unwrap();
        }
        PipelineOutcome::Violation(violation) => {
            writeln!(text, "outcome: VIOLATION (self-test failure)").unwrap();
            match violation {
                Violation::CoverageGap { points } => {
                    writeln!(text, "  coverage gaps: {}", join_points(points)).unwrap();
                }
                Violation::AntipodePairs { pairs } => {
                    for (i, p) in pairs {
                        writeln!(text, "  set {} contains {} and its antipode", i + 1, p).unwrap();
                    }
                }
            }
        }
    }
    text
}

fn join_points(points: &[GridPoint]) -> String {
    points
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn cmd_oracle(args: OracleArgs) -> Result<i32> {
    let spec = load_spec(&args.spec)?;

    if !args.sweep.is_empty() {
        let rows = exec::parallel_sweep(&spec, &args.sweep)?;
        let rendered = match args.format {
            Format::Json => {
                let docs: Vec<SweepRowDoc> = rows.iter().map(SweepRowDoc::from_row).collect();
                dto::to_json_string(&docs)
            }
            Format::Text => {
                let mut text = String::new();
                for row in &rows {
                    writeln!(text, "{}", sweep_line(row)).unwrap();
                }
                text
            }
        };
        emit(&args.out, &rendered)?;
        return Ok(EXIT_OK);
    }

    let cover = Cover::from_spec(spec.clone())?;
    let resolution = resolve_resolution(&spec, args.resolution)?;

    let intersection = brute_intersection(&cover, resolution)?;
    let exposure = exposure_set(&cover, resolution)?;
    let stars = star_certificates(&cover, resolution)?;

    // Duality self-test: the exposure set must be exactly the antipodal
    // image of the brute-force intersection.
    let mut mirrored: Vec<GridPoint> = intersection.iter().map(|p| p.antipode()).collect();
    mirrored.sort();
    let duality_holds = exposure == mirrored;

    let best = spec
        .target()
        .and_then(|t| best_star_distance(&stars, t));
    let doc = dto::OracleReportDoc {
        schema: "oracle-report/v1".into(),
        dim: spec.dim,
        resolution,
        intersection: intersection.iter().map(|p| p.k().to_vec()).collect(),
        exposure: exposure.iter().map(|p| p.k().to_vec()).collect(),
        stars: stars.iter().map(dto::StarDoc::from_certificate).collect(),
        best_star_distance: best.as_ref().map(dto::rational_to_string),
        duality_holds,
    };
    let rendered = match args.format {
        Format::Json => dto::to_json_string(&doc),
        Format::Text => {
            let mut text = String::new();
            writeln!(text, "resolution: {resolution}").unwrap();
            writeln!(text, "intersection: {}", join_points(&intersection)).unwrap();
            writeln!(text, "exposure: {}", join_points(&exposure)).unwrap();
            writeln!(
                text,
                "stars: {} (best distance {})",
                stars.len(),
                doc.best_star_distance.clone().unwrap_or_else(|| "-".into())
            )
            .unwrap();
            writeln!(text, "duality: {}", if duality_holds { "PASS" } else { "FAIL" }).unwrap();
            text
        }
    };
    emit(&args.out, &rendered)?;
    Ok(if duality_holds { EXIT_OK } else { EXIT_SELF_TEST })
}

fn sweep_line(row: &SweepRow) -> String {
    format!(
        "N={} intersection={} exposure={} stars={} best={}",
        row.resolution,
        row.intersection_count,
        row.exposure_count,
        row.star_count,
        row.best_star_distance
            .as_ref()
            .map(dto::rational_to_string)
            .unwrap_or_else(|| "-".into())
    )
}

fn cmd_gen(args: GenArgs) -> Result<i32> {
    let spec = generate_spec(args.dim, args.seed, args.degenerate)?;
    emit(&args.out, &dto::spec_to_json(&spec))?;
    Ok(EXIT_OK)
}

fn cmd_render(args: RenderArgs) -> Result<i32> {
    let spec = load_spec(&args.spec)?;
    let cover = Cover::from_spec(spec.clone())?;
    let resolution = resolve_resolution(&spec, args.resolution)?;
    let svg = render_svg(&cover, resolution, RenderOptions { size: args.size })?;
    emit(&args.out, &svg)?;
    Ok(EXIT_OK)
}
