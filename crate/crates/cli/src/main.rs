mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use radcube::Error;

const CONVENTIONS: &str = "\
Conventions:
  Units are SI (m, m/s, rad, Hz, s). JSON keys ending in _deg take degrees
  instead of radians, e.g. \"theta_deg\" or \"delta_theta_deg\".
  Velocity and angle axes are zero-centered: index M/2 is zero velocity and
  boresight. Positive azimuth is to the right of boresight and maps above M/2.
  Range bin m covers [m, m+1) range-bin widths from the radar.

Containers (.rcube) carry an axis tag:
  raw         frame,sample,chirp,rx            complex
  cube        frame,range,velocity,angle       complex
  ra view     frame,range,angle                complex
  rv view     frame,range,velocity             power
  va view     frame,velocity,angle             power
  labels      frame,range,angle,class          real, classes pedestrian,cyclist,car

Exit codes: 0 ok, 2 usage/schema/config/format, 3 value outside the radar's
operating envelope, 4 I/O.";

#[derive(Parser)]
#[command(
    name = "radcube",
    version,
    about = "FMCW radar cube synthesis, processing, augmentation and evaluation"
)]
#[command(after_long_help = CONVENTIONS)]
struct Cli {
    /// Worker threads for frame-level parallelism (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct ConfigArgs {
    /// Radar configuration JSON (default: the built-in AWR1843 setup).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Clone)]
pub struct ProcessingArgs {
    /// Processing JSON: windows and CFAR parameters.
    #[arg(long)]
    pub processing: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum View {
    Ra,
    Rv,
    Va,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Flops,
    Params,
    FeatureMap,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize raw ADC frames for a scene.
    Simulate {
        #[arg(long)]
        scene: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        out: PathBuf,
        /// Noise seed; each frame draws from its own stream.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Complex noise standard deviation per sample (0 for none).
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
    },
    /// Range, velocity and angle FFTs with CFAR-driven Doppler compensation.
    Process {
        /// Raw container from `simulate`.
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        processing: ProcessingArgs,
        #[arg(long)]
        out: PathBuf,
        /// Also write the CFAR detections of every frame as JSON.
        #[arg(long)]
        detections: Option<PathBuf>,
    },
    /// Extract RA, RV or VA heatmaps for every frame.
    Slice {
        /// Raw container (any view) or processed cube (rv, va).
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        view: View,
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        processing: ProcessingArgs,
        /// TDM cycle used for the RA snapshot.
        #[arg(long, default_value_t = 0)]
        chirp: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Apply an augmentation recipe to every frame of a processed cube.
    Augment {
        #[arg(long)]
        input: PathBuf,
        /// JSON list of steps: flip, translate_range, translate_angle, mix, interpolate.
        #[arg(long)]
        recipe: PathBuf,
        /// Scene the cube was made from; required by translations.
        #[arg(long)]
        scene: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
        /// Antenna gain samples over [-90, 90] degrees as a JSON list (default: flat).
        #[arg(long)]
        gain: Option<PathBuf>,
        /// Seed for refilling vacated cells.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Write the scene with target positions after augmentation.
        #[arg(long)]
        scene_out: Option<PathBuf>,
    },
    /// Rasterize Gaussian center-point labels for a scene.
    Label {
        #[arg(long)]
        scene: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Focal loss of a prediction map against labels; prints one number.
    Loss {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        /// Prediction of the branch without RA input, weighted by gamma.
        #[arg(long)]
        aux: Option<PathBuf>,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, default_value_t = 4.0)]
        beta: f64,
        #[arg(long, default_value_t = 4.0)]
        kappa: f64,
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        /// Normalizer (default: number of label cells equal to 1).
        #[arg(long)]
        n_obj: Option<usize>,
    },
    /// Precision and recall of prediction maps against scene ground truth.
    Eval {
        /// Prediction map; repeat together with --scene for several scenes.
        #[arg(long, required = true)]
        pred: Vec<PathBuf>,
        #[arg(long, required = true)]
        scene: Vec<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value_t = radcube::eval::DEFAULT_THRESHOLD)]
        threshold: f64,
        /// Also write per-class counts as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Multiply-accumulate count or memory of a layer stack.
    Flops {
        /// Model JSON path or bundled name (rodnet_cdc, ramp_cnn, 4d_cdc).
        #[arg(required = true)]
        models: Vec<String>,
        #[arg(long, value_enum, default_value_t = Metric::Flops)]
        metric: Metric,
        /// Print all metrics and pairwise ratios as JSON.
        #[arg(long)]
        report: bool,
    },
    /// Draw one frame of a heatmap as a binary PPM image.
    Render {
        /// Raw container, processed cube or view container.
        #[arg(long)]
        input: PathBuf,
        /// Required unless the input already is a view.
        #[arg(long, value_enum)]
        view: Option<View>,
        #[arg(long, default_value_t = 0)]
        frame: usize,
        #[arg(long, default_value = "jet")]
        colormap: String,
        /// Dynamic range shown below the peak.
        #[arg(long, default_value_t = 40.0)]
        floor_db: f64,
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        processing: ProcessingArgs,
        #[arg(long, default_value_t = 0)]
        chirp: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Domain(_) => 3,
        Error::Io(_) => 4,
        Error::Config(_) | Error::Shape(_) | Error::Format(_) | Error::Json(_) => 2,
    }
}

fn run(cli: Cli) -> radcube::Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Simulate {
            scene,
            config,
            out,
            seed,
            noise,
        } => commands::simulate(&scene, &config, &out, seed, noise),
        Command::Process {
            input,
            config,
            processing,
            out,
            detections,
        } => commands::process(&input, &config, &processing, &out, detections.as_deref()),
        Command::Slice {
            input,
            view,
            config,
            processing,
            chirp,
            out,
        } => commands::slice(&input, view, &config, &processing, chirp, &out),
        Command::Augment {
            input,
            recipe,
            scene,
            config,
            gain,
            seed,
            out,
            scene_out,
        } => commands::augment(commands::AugmentArgs {
            input: &input,
            recipe: &recipe,
            scene: scene.as_deref(),
            config: &config,
            gain: gain.as_deref(),
            seed,
            out: &out,
            scene_out: scene_out.as_deref(),
        }),
        Command::Label { scene, config, out } => commands::label(&scene, &config, &out),
        Command::Loss {
            pred,
            truth,
            aux,
            alpha,
            beta,
            kappa,
            gamma,
            n_obj,
        } => {
            let params = radcube::fusion::LossParams {
                alpha,
                beta,
                kappa,
                gamma,
                n_obj: 0,
            };
            let value = commands::loss(&pred, &truth, aux.as_deref(), params, n_obj)?;
            println!("{value}");
            Ok(())
        }
        Command::Eval {
            pred,
            scene,
            config,
            threshold,
            csv,
        } => commands::eval(&pred, &scene, &config, threshold, csv.as_deref()),
        Command::Flops { models, metric, report } => commands::flops(&models, metric, report),
        Command::Render {
            input,
            view,
            frame,
            colormap,
            floor_db,
            config,
            processing,
            chirp,
            out,
        } => commands::render(commands::RenderArgs {
            input: &input,
            view,
            frame,
            colormap: colormap.parse()?,
            floor_db,
            config: &config,
            processing: &processing,
            chirp,
            out: &out,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("radcube: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
