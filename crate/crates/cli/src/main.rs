use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;
use segpsnr::harness::{analyze, read_samples_csv, run_experiment, ExperimentConfig, HarnessError};
use segpsnr::image::{as_binary, GrayImage};
use segpsnr::maskgen::{fill_ground_truth, FillConfig};
use segpsnr::metrics::{psnr, PsnrVariant};
use segpsnr::pnm::{read_pnm, write_pnm, PnmFormat};
use segpsnr::stats::Alternative;
use segpsnr::{salt_pepper, NoiseConfig};

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

/// Measure whether PSNR prefers ideal segmentation masks over noisy ones.
#[derive(Debug, Parser)]
#[command(name = "segpsnr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the full experiment over a dataset directory.
    Run(RunArgs),
    /// PSNR between an image and a mask.
    Psnr {
        image: PathBuf,
        mask: PathBuf,
        #[arg(long, default_value_t = PsnrVariant::Standard)]
        variant: PsnrVariant,
    },
    /// Fill a ground-truth contour drawing into a region mask.
    Fill {
        ground_truth: PathBuf,
        out: PathBuf,
        #[command(flatten)]
        contours: ContourArgs,
        /// Write plain (P2) instead of raw (P5) output.
        #[arg(long)]
        ascii: bool,
    },
    /// Apply salt-and-pepper noise to a binary mask.
    Noise {
        mask: PathBuf,
        out: PathBuf,
        #[arg(long)]
        density: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        ascii: bool,
    },
    /// Re-run the statistical comparison on an existing samples.csv.
    Stats {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = Alternative::Less)]
        alternative: Alternative,
    },
}

#[derive(Debug, Args)]
struct ContourArgs {
    /// Pixels at or above this value are contour.
    #[arg(long, default_value_t = 128)]
    contour_threshold: u8,
    /// Treat dark pixels as contour instead.
    #[arg(long)]
    invert: bool,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Directory holding `images/` and `groundtruth/`.
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, default_value_t = PsnrVariant::Standard)]
    variant: PsnrVariant,
    /// Binarization threshold for the filled mask.
    #[arg(long, default_value_t = 127)]
    threshold: u8,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    contours: ContourArgs,
    #[arg(long, default_value_t = Alternative::Less)]
    alternative: Alternative,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        let code = match e {
            HarnessError::Config(_) | HarnessError::Noise(_) => EXIT_USAGE,
            HarnessError::Stats(_) => EXIT_NUMERIC,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_failure(message: String) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message,
    }
}

fn load(path: &Path) -> Result<GrayImage, Failure> {
    let bytes = fs::read(path).map_err(|e| input_failure(format!("{}: {e}", path.display())))?;
    read_pnm(&bytes).map_err(|e| input_failure(format!("{}: {e}", path.display())))
}

fn save(path: &Path, img: &GrayImage, ascii: bool) -> Result<(), Failure> {
    let format = if ascii { PnmFormat::P2 } else { PnmFormat::P5 };
    fs::write(path, write_pnm(img, format))
        .map_err(|e| input_failure(format!("{}: {e}", path.display())))
}

/// Prints a line to stdout; a closed pipe is not an error.
fn emit(line: &str) {
    let _ = writeln!(io::stdout().lock(), "{line}");
}

fn fill_config(c: &ContourArgs, binarize_threshold: u8) -> FillConfig {
    FillConfig {
        contour_threshold: c.contour_threshold,
        invert_contours: c.invert,
        binarize_threshold,
    }
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let mut cfg = ExperimentConfig::new(&args.dataset, &args.out);
    cfg.noise_density = args.density;
    cfg.seed = args.seed;
    cfg.alpha = args.alpha;
    cfg.psnr_variant = args.variant;
    cfg.alternative = args.alternative;
    cfg.fill = fill_config(&args.contours, args.threshold);
    let report = run_experiment(&cfg)?;
    let a = &report.analysis;
    emit(&format!(
        "processed {} pairs ({} skipped)",
        report.per_image.len(),
        report.skipped.len()
    ));
    if let (Some(p), Some(q)) = (a.p_summary.mean, a.p_prime_summary.mean) {
        emit(&format!("mean PSNR ideal {p:.4} dB, degraded {q:.4} dB"));
    }
    if let Some(c) = &a.comparison {
        emit(&format!(
            "F test p = {:.4e}; {} p = {:.4e}",
            c.f_test.p_value, c.chosen_mean_test, c.mean_test.p_value
        ));
    }
    emit(&format!("verdict: {:?} ({})", a.verdict, a.verdict_reason));
    emit(&format!("results written to {}", args.out.display()));
    Ok(())
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run(args) => run(args),
        Command::Psnr {
            image,
            mask,
            variant,
        } => {
            let (i, k) = (load(&image)?, load(&mask)?);
            let value = psnr(&i, &k, variant).map_err(|e| input_failure(e.to_string()))?;
            if value.is_infinite() {
                emit("inf");
            } else {
                emit(&format!("{value:.6}"));
            }
            Ok(())
        }
        Command::Fill {
            ground_truth,
            out,
            contours,
            ascii,
        } => {
            let g = load(&ground_truth)?;
            let filled = fill_ground_truth(&g, &fill_config(&contours, 127));
            save(&out, &filled, ascii)
        }
        Command::Noise {
            mask,
            out,
            density,
            seed,
            ascii,
        } => {
            let cfg = NoiseConfig::new(density, seed).map_err(|e| Failure {
                code: EXIT_USAGE,
                message: e.to_string(),
            })?;
            let m = as_binary(load(&mask)?)
                .map_err(|e| input_failure(format!("{}: {e}", mask.display())))?;
            let noisy = salt_pepper(&m, &cfg).map_err(HarnessError::from)?;
            info!(
                "foreground {} -> {}",
                m.foreground_count(),
                noisy.foreground_count()
            );
            save(&out, noisy.as_image(), ascii)
        }
        Command::Stats {
            csv,
            alpha,
            alternative,
        } => {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Failure {
                    code: EXIT_USAGE,
                    message: format!("alpha must lie in (0, 1), got {alpha}"),
                });
            }
            let rows = read_samples_csv(&csv)?;
            let analysis = analyze(&rows, alpha, alternative)?;
            let json = serde_json::to_string_pretty(&analysis).map_err(HarnessError::from)?;
            emit(&json);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
