//! Command-line front end for the two-slit toolkit: synthetic scenes,
//! projection, tensor estimation, two-view recovery, self-calibration and
//! the golden acceptance checks.
//!
//! Exit codes: 0 success, 1 failed verification, 2 invalid input or
//! configuration, 3 numerical degeneracy.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;
use twoslit::harness::format::{format_f64, to_json_string};
use twoslit::harness::golden::{all_criteria, CriterionReport};
use twoslit::harness::scene::rng;
use twoslit::harness::{
    analyze_selfcal, fixtures, generate_scene, random, run_selfcal_experiment, run_sfm_experiment,
    ExperimentReport, FailureKind, Outcome, SceneConfig, SelfcalConfig, Summary, SyntheticScene,
};
use twoslit::{
    epipolar_residual, estimate_tensor_linear, tensor_from_cameras, Camera, Correspondence,
    EpipolarTensor, Point,
};

#[derive(Parser)]
#[command(
    name = "twoslit",
    version,
    about = "Two-slit and pushbroom camera geometry"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// RNG seed for synthetic data.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Noise standard deviation (image coordinates for scenes, matrix
    /// entries for self-calibration).
    #[arg(long, global = true, allow_hyphen_values = true)]
    sigma: Option<f64>,
    /// Number of scene points.
    #[arg(long, global = true)]
    points: Option<usize>,
    /// Input file (JSON, or CSV correspondences for `tensor`).
    #[arg(long = "in", global = true, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Project points through a two-slit camera. Input: `{"camera": {..},
    /// "points": [[x, y, z, w], ..]}`; without input, the first reference
    /// camera and random points.
    Project,
    /// Epipolar tensor of a camera pair (`{"cameras": [A, B]}`) or its
    /// linear estimate from correspondences (CSV, a JSON list, or a scene).
    /// Without input, the tensor of the reference cameras.
    Tensor,
    /// Two-view recovery on a scene (or a stored sfm report); generates a
    /// scene from the reference cameras when no input is given.
    Sfm,
    /// Self-calibration of parallel cameras from a stored input (or
    /// report), or on freshly generated cameras.
    Selfcal {
        /// Number of cameras to generate.
        #[arg(long, default_value_t = 10)]
        cameras: usize,
    },
    /// Synthetic two-view scene with the reference cameras.
    Synth,
    /// Run the golden acceptance checks against the reference values.
    #[command(name = "verify-paper", alias = "verify")]
    Verify,
}

/// How a run ended, mapped onto the process exit code.
#[derive(Debug, PartialEq, Eq)]
enum Status {
    Success,
    VerificationFailed,
    Failed(FailureKind),
}

impl Status {
    fn of<R>(outcome: &Outcome<R>) -> Self {
        match outcome.failure() {
            None => Status::Success,
            Some(f) => Status::Failed(f.kind),
        }
    }

    fn code(&self) -> u8 {
        match self {
            Status::Success => 0,
            Status::VerificationFailed => 1,
            Status::Failed(FailureKind::Validation) => 2,
            Status::Failed(FailureKind::Degeneracy) => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(status) => ExitCode::from(status.code()),
        // a closed downstream pipe (`| head`) is not a failure
        Err(e)
            if e.downcast_ref::<io::Error>()
                .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let kind = match e.downcast_ref::<twoslit::Error>() {
                Some(err) if err.is_degeneracy() => FailureKind::Degeneracy,
                _ => FailureKind::Validation,
            };
            ExitCode::from(Status::Failed(kind).code())
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Status> {
    if let Some(s) = cli.sigma {
        if !(s.is_finite() && s >= 0.0) {
            return Err(anyhow!("--sigma must be finite and non-negative"));
        }
    }
    match &cli.command {
        Command::Synth => synth(cli),
        Command::Project => project(cli),
        Command::Tensor => tensor(cli),
        Command::Sfm => sfm(cli),
        Command::Selfcal { cameras } => selfcal(cli, *cameras),
        Command::Verify => verify(cli),
    }
}

fn scene_config(cli: &Cli) -> SceneConfig {
    let d = SceneConfig::default();
    SceneConfig {
        seed: cli.seed,
        sigma: cli.sigma.unwrap_or(d.sigma),
        points: cli.points.unwrap_or(d.points),
        ..d
    }
}

fn synth(cli: &Cli) -> anyhow::Result<Status> {
    let scene = generate_scene(&scene_config(cli))?;
    match cli.format {
        Format::Json => write_json(cli, &scene)?,
        Format::Csv => write_csv(
            cli,
            &CORRESPONDENCE_HEADER,
            correspondence_rows(&scene.correspondences),
        )?,
    }
    Ok(Status::Success)
}

#[derive(Serialize, serde::Deserialize)]
struct Projection {
    camera: Camera,
    points: Vec<Point>,
    #[serde(default, skip_deserializing)]
    images: Vec<[f64; 3]>,
}

fn project(cli: &Cli) -> anyhow::Result<Status> {
    let mut job: Projection = match &cli.input {
        Some(path) => {
            serde_json::from_str(&read(path)?).context("expected {\"camera\", \"points\"}")?
        }
        None => {
            let mut r = rng(cli.seed);
            let n = cli.points.unwrap_or(10);
            Projection {
                camera: fixtures::reference_cameras()[0],
                points: (0..n).map(|_| random::point(&mut r)).collect(),
                images: Vec::new(),
            }
        }
    };
    job.images = job
        .points
        .iter()
        .map(|x| job.camera.project(x).map(Into::into))
        .collect::<twoslit::Result<_>>()?;
    match cli.format {
        Format::Json => write_json(cli, &job)?,
        Format::Csv => {
            let rows = job.points.iter().zip(&job.images).map(|(x, u)| {
                x.coords()
                    .iter()
                    .chain(u.iter())
                    .copied()
                    .collect::<Vec<_>>()
            });
            write_csv(cli, &["x1", "x2", "x3", "x4", "u1", "u2", "u3"], rows)?
        }
    }
    Ok(Status::Success)
}

#[derive(Serialize)]
struct TensorOutput {
    source: &'static str,
    tensor: EpipolarTensor<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    epipolar_residual: Option<Summary>,
}

fn tensor(cli: &Cli) -> anyhow::Result<Status> {
    let out = match &cli.input {
        None => {
            let [a, b] = fixtures::reference_cameras();
            TensorOutput {
                source: "cameras",
                tensor: tensor_from_cameras(&a, &b),
                epipolar_residual: None,
            }
        }
        Some(path) if is_csv(path) => estimated(read_correspondences_csv(path)?)?,
        Some(path) => {
            let v: Value = serde_json::from_str(&read(path)?)?;
            if let Some(cams) = v
                .get("cameras")
                .filter(|_| v.get("correspondences").is_none())
            {
                let [a, b]: [Camera; 2] = serde_json::from_value(cams.clone())?;
                TensorOutput {
                    source: "cameras",
                    tensor: tensor_from_cameras(&a, &b),
                    epipolar_residual: None,
                }
            } else {
                let list = v.get("correspondences").cloned().unwrap_or(v);
                estimated(
                    serde_json::from_value(list).context("expected cameras or correspondences")?,
                )?
            }
        }
    };
    match cli.format {
        Format::Json => write_json(cli, &out)?,
        Format::Csv => {
            let header: Vec<String> = (0..16)
                .map(|n| {
                    format!(
                        "f{}{}{}{}",
                        1 + (n >> 3 & 1),
                        1 + (n >> 2 & 1),
                        1 + (n >> 1 & 1),
                        1 + (n & 1)
                    )
                })
                .collect();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            write_csv(cli, &header, std::iter::once(out.tensor.entries().to_vec()))?
        }
    }
    Ok(Status::Success)
}

fn estimated(corrs: Vec<Correspondence<f64>>) -> anyhow::Result<TensorOutput> {
    let tensor = estimate_tensor_linear(&corrs)?;
    let residual = Summary::of(corrs.iter().map(|c| epipolar_residual(&tensor, c).abs()));
    Ok(TensorOutput {
        source: "correspondences",
        tensor,
        epipolar_residual: Some(residual),
    })
}

fn sfm(cli: &Cli) -> anyhow::Result<Status> {
    let scene: SyntheticScene = match &cli.input {
        Some(path) => {
            let v: Value = serde_json::from_str(&read(path)?)?;
            // either a bare scene or a stored report wrapping one
            let scene = v.get("input").cloned().unwrap_or(v);
            serde_json::from_value(scene).context("expected a scene or an sfm report")?
        }
        None => generate_scene(&scene_config(cli))?,
    };
    let report = run_sfm_experiment(&scene);
    match cli.format {
        Format::Json => write_json(cli, &report)?,
        Format::Csv => {
            let header = [
                "configuration",
                "matching",
                "tensor_agreement",
                "reprojection_rms",
                "delta_to_truth",
            ];
            let rows: Vec<Vec<f64>> = match report.outcome.ok() {
                Some(r) => r
                    .configurations
                    .iter()
                    .enumerate()
                    .map(|(k, c)| {
                        let matching = f64::from(u8::from(k == r.matching_configuration));
                        vec![
                            (k + 1) as f64,
                            matching,
                            c.tensor_agreement,
                            c.reprojection_rms,
                            c.delta_to_truth,
                        ]
                    })
                    .collect(),
                None => Vec::new(),
            };
            write_csv(cli, &header, rows)?
        }
    }
    report_failure(&report);
    Ok(Status::of(&report.outcome))
}

fn selfcal(cli: &Cli, cameras: usize) -> anyhow::Result<Status> {
    let report = match &cli.input {
        Some(path) => {
            let v: Value = serde_json::from_str(&read(path)?)?;
            let seed = v.get("seed").and_then(Value::as_u64).unwrap_or(cli.seed);
            let sigma = v
                .get("sigma")
                .and_then(Value::as_f64)
                .or(cli.sigma)
                .unwrap_or(0.0);
            let input = v.get("input").cloned().unwrap_or(v);
            let input = serde_json::from_value(input)
                .context("expected a self-calibration input or report")?;
            let outcome = Outcome::from_result(analyze_selfcal(&input));
            ExperimentReport::new("selfcal", seed, sigma, input, outcome)
        }
        None => run_selfcal_experiment(&SelfcalConfig {
            cameras,
            seed: cli.seed,
            sigma: cli.sigma.unwrap_or(0.0),
            ..SelfcalConfig::default()
        }),
    };
    match cli.format {
        Format::Json => write_json(cli, &report)?,
        Format::Csv => {
            let rows: Vec<Vec<f64>> = match report.outcome.ok() {
                Some(r) => report
                    .input
                    .magnifications
                    .iter()
                    .zip(&r.recovered_magnifications)
                    .enumerate()
                    .map(|(k, (t, e))| vec![(k + 1) as f64, t.0, t.1, e.0, e.1])
                    .collect(),
                None => Vec::new(),
            };
            write_csv(
                cli,
                &[
                    "camera",
                    "true_k1",
                    "true_k2",
                    "recovered_k1",
                    "recovered_k2",
                ],
                rows,
            )?
        }
    }
    report_failure(&report);
    Ok(Status::of(&report.outcome))
}

fn verify(cli: &Cli) -> anyhow::Result<Status> {
    let reports = all_criteria();
    for r in &reports {
        eprintln!("{}", r.summary_line());
    }
    match cli.format {
        Format::Json => write_json(cli, &reports)?,
        Format::Csv => write_csv(
            cli,
            &["criterion", "passed", "checks", "elapsed_ms"],
            reports.iter().map(|r: &CriterionReport| {
                vec![
                    f64::from(r.criterion),
                    f64::from(u8::from(r.passed())),
                    r.checks.len() as f64,
                    r.elapsed_ms,
                ]
            }),
        )?,
    }
    Ok(if reports.iter().all(CriterionReport::passed) {
        Status::Success
    } else {
        Status::VerificationFailed
    })
}

fn report_failure<I, R>(report: &ExperimentReport<I, R>) {
    if let Some(f) = report.outcome.failure() {
        eprintln!("{} failed ({:?}): {}", report.experiment, f.kind, f.message);
    }
}

const CORRESPONDENCE_HEADER: [&str; 6] = ["u1", "u2", "u3", "v1", "v2", "v3"];

fn correspondence_rows(corrs: &[Correspondence<f64>]) -> impl Iterator<Item = Vec<f64>> + '_ {
    corrs
        .iter()
        .map(|c| c.u.iter().chain(c.uprime.iter()).copied().collect())
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_correspondences_csv(path: &Path) -> anyhow::Result<Vec<Correspondence<f64>>> {
    let mut reader =
        csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    reader
        .deserialize()
        .map(|r| r.with_context(|| format!("parsing {}", path.display())))
        .collect()
}

fn sink(cli: &Cli) -> anyhow::Result<Box<dyn Write>> {
    Ok(match &cli.out {
        Some(path) => Box::new(
            fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
        ),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<V: Serialize + ?Sized>(cli: &Cli, value: &V) -> anyhow::Result<()> {
    let mut w = sink(cli)?;
    writeln!(w, "{}", to_json_string(value)?)?;
    Ok(())
}

/// Rows of numbers at 17 significant digits.
fn write_csv<I>(cli: &Cli, header: &[&str], rows: I) -> anyhow::Result<()>
where
    I: IntoIterator<Item = Vec<f64>>,
{
    let mut w = csv::Writer::from_writer(sink(cli)?);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|v| format_f64(*v)))?;
    }
    w.flush()?;
    Ok(())
}
