//! `rankfilt` command line: inject noise, denoise, measure and sweep PGM images.
//!
//! Exit status is 0 on success, 1 on usage errors and 2 on I/O or format errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rankfilt::pgm::{self, FileError};
use rankfilt::sweep::{format_sig6, run_sweep_with};
use rankfilt::{
    inject, report_to_csv, synthetic_textured, AmfFallback, BorderPolicy, FilterSpec, GrayImage,
    MetricsReport, NoiseKind, NoiseMask, NoiseSpec, PgmVariant, SweepConfig,
};

#[derive(Parser, Debug)]
#[command(
    name = "rankfilt",
    version,
    about = "Rank-order filters for impulse noise removal"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Corrupt an image with seeded noise.
    Noise(NoiseArgs),
    /// Run one filter over an image.
    Denoise(DenoiseArgs),
    /// Print "mse,psnr_db,pona_pct" for a restoration.
    Metrics(MetricsArgs),
    /// Inject, denoise and measure over a range of noise densities.
    Sweep(SweepArgs),
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Kind {
    Sp,
    Fixed,
    Random,
    Gauss,
}

impl From<Kind> for NoiseKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Sp => NoiseKind::SaltPepper,
            Kind::Fixed => NoiseKind::FixedImpulse,
            Kind::Random => NoiseKind::RandomImpulse,
            Kind::Gauss => NoiseKind::Gaussian,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Border {
    Replicate,
    Reflect,
}

impl From<Border> for BorderPolicy {
    fn from(b: Border) -> Self {
        match b {
            Border::Replicate => BorderPolicy::ReplicateEdge,
            Border::Reflect => BorderPolicy::Reflect,
        }
    }
}

#[derive(Copy, Clone, Debug, Default, ValueEnum)]
enum Format {
    #[default]
    P5,
    P2,
}

impl From<Format> for PgmVariant {
    fn from(f: Format) -> Self {
        match f {
            Format::P5 => PgmVariant::Binary,
            Format::P2 => PgmVariant::Ascii,
        }
    }
}

#[derive(Args, Debug)]
struct NoiseArgs {
    #[arg(long, value_enum, default_value = "sp")]
    kind: Kind,
    /// Probability that a pixel is corrupted (impulse kinds).
    #[arg(long, default_value_t = 0.0)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    low: u8,
    #[arg(long, default_value_t = 255)]
    high: u8,
    /// Standard deviation in intensity units (gauss only).
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the corruption mask as a 0/255 P5 image.
    #[arg(long)]
    mask: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "p5")]
    format: Format,
    input: PathBuf,
    output: PathBuf,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FilterKind {
    Median,
    Wm,
    Cwm,
    Amf,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Fallback {
    Median,
    Center,
}

#[derive(Args, Debug)]
struct DenoiseArgs {
    #[arg(long, value_enum)]
    filter: FilterKind,
    /// Window side for median, wm and cwm.
    #[arg(long, default_value_t = 3)]
    side: usize,
    #[arg(long, default_value_t = 3)]
    center_weight: u32,
    /// Comma-separated row-major weights for wm (side*side values).
    #[arg(long, value_delimiter = ',')]
    weights: Vec<u32>,
    /// Starting window for amf.
    #[arg(long, default_value_t = 3)]
    winit: usize,
    /// Largest window for amf.
    #[arg(long, default_value_t = 7)]
    wmax: usize,
    #[arg(long, value_enum, default_value = "median")]
    fallback: Fallback,
    #[arg(long, value_enum, default_value = "replicate")]
    border: Border,
    #[arg(long, value_enum, default_value = "p5")]
    format: Format,
    input: PathBuf,
    output: PathBuf,
}

#[derive(Args, Debug)]
struct MetricsArgs {
    #[arg(long)]
    original: PathBuf,
    #[arg(long)]
    noisy: PathBuf,
    #[arg(long)]
    denoised: PathBuf,
    /// Mask image; any nonzero pixel counts as noisy.
    #[arg(long)]
    mask: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["image", "synthetic"])))]
struct SweepArgs {
    #[arg(long)]
    image: Option<PathBuf>,
    /// Generate a textured test image of the given size, e.g. 256x256.
    #[arg(long, value_parser = parse_size)]
    synthetic: Option<(usize, usize)>,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.05,0.10,0.15,0.20,0.25,0.30"
    )]
    densities: Vec<f64>,
    /// Filter shorthands: none, median[:side], cwm:weight[:side], amf:wmax[:center].
    #[arg(long, value_delimiter = ',', default_value = "cwm:3,amf:7")]
    filters: Vec<String>,
    #[arg(long, value_enum, default_value = "sp")]
    kind: Kind,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "replicate")]
    border: Border,
    #[arg(long)]
    out: PathBuf,
    /// Write every restored image to this directory.
    #[arg(long)]
    dump_images: Option<PathBuf>,
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, got '{s}'"))?;
    let w: usize = w.parse().map_err(|_| format!("bad width in '{s}'"))?;
    let h: usize = h.parse().map_err(|_| format!("bad height in '{s}'"))?;
    if w == 0 || h == 0 {
        return Err(format!("size must be positive, got '{s}'"));
    }
    Ok((w, h))
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    File(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::File(_) => 2,
        }
    }
}

impl From<rankfilt::Error> for CliError {
    fn from(e: rankfilt::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<FileError> for CliError {
    fn from(e: FileError) -> Self {
        CliError::File(e.to_string())
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::File(format!("{}: {e}", path.display())))
}

fn run_noise(args: NoiseArgs) -> Result<(), CliError> {
    let spec = NoiseSpec {
        kind: args.kind.into(),
        density: args.density,
        low: args.low,
        high: args.high,
        sigma: args.sigma,
        seed: args.seed,
    };
    spec.validate()?;
    let image = pgm::load(&args.input)?;
    let (noisy, mask) = inject(&image, &spec)?;
    pgm::save(&args.output, &noisy, args.format.into())?;
    if let Some(path) = &args.mask {
        pgm::save(path, &mask.to_image(), PgmVariant::Binary)?;
    }
    Ok(())
}

fn filter_spec(args: &DenoiseArgs) -> FilterSpec {
    match args.filter {
        FilterKind::Median => FilterSpec::Median { side: args.side },
        FilterKind::Wm => FilterSpec::WeightedMedian {
            side: args.side,
            weights: args.weights.clone(),
        },
        FilterKind::Cwm => FilterSpec::Cwm {
            side: args.side,
            center_weight: args.center_weight,
        },
        FilterKind::Amf => FilterSpec::Amf {
            w_init: args.winit,
            w_max: args.wmax,
            fallback: match args.fallback {
                Fallback::Median => AmfFallback::Median,
                Fallback::Center => AmfFallback::Center,
            },
        },
    }
}

fn run_denoise(args: DenoiseArgs) -> Result<(), CliError> {
    let spec = filter_spec(&args);
    spec.validate()?;
    let image = pgm::load(&args.input)?;
    let restored = spec.apply(&image, args.border.into())?;
    pgm::save(&args.output, &restored, args.format.into())?;
    Ok(())
}

fn run_metrics(args: MetricsArgs) -> Result<(), CliError> {
    let original = pgm::load(&args.original)?;
    let noisy = pgm::load(&args.noisy)?;
    let denoised = pgm::load(&args.denoised)?;
    let mask = match &args.mask {
        Some(path) => Some(NoiseMask::from_image(&pgm::load(path)?)),
        None => None,
    };
    let report = MetricsReport::evaluate(&original, &noisy, &denoised, mask.as_ref(), 0.0)
        .map_err(|e| CliError::File(e.to_string()))?;
    println!(
        "{},{},{}",
        format_sig6(report.mse),
        format_sig6(report.psnr_db),
        report.pona_pct.map(format_sig6).unwrap_or_default()
    );
    Ok(())
}

fn run_sweep(args: SweepArgs) -> Result<(), CliError> {
    let filters = args
        .filters
        .iter()
        .map(|f| f.parse::<FilterSpec>())
        .collect::<Result<Vec<_>, _>>()?;
    let source = match (&args.image, args.synthetic) {
        (Some(path), _) => pgm::load(path)?,
        (None, Some((w, h))) => synthetic_textured(w, h, args.seed)?,
        (None, None) => unreachable!("clap enforces one image source"),
    };
    let config = SweepConfig {
        densities: args.densities.clone(),
        noise: NoiseSpec::salt_pepper(0.0, 0).with_kind(args.kind.into()),
        filters,
        policy: args.border.into(),
        trials: args.trials,
        ..SweepConfig::new(source, args.seed)
    };
    config.validate()?;

    if let Some(dir) = &args.dump_images {
        fs::create_dir_all(dir).map_err(|e| CliError::File(format!("{}: {e}", dir.display())))?;
    }
    let mut dump_error = None;
    let report = run_sweep_with(&config, |row, image: &GrayImage| {
        let Some(dir) = &args.dump_images else { return };
        if dump_error.is_some() {
            return;
        }
        let name = format!(
            "{}_{}_{}.pgm",
            format_sig6(row.density),
            row.filter.replace(':', "-"),
            row.trial
        );
        if let Err(e) = pgm::save(dir.join(name), image, PgmVariant::Binary) {
            dump_error = Some(e);
        }
    })?;
    if let Some(e) = dump_error {
        return Err(e.into());
    }
    write_file(&args.out, report_to_csv(&report).as_bytes())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Noise(args) => run_noise(args),
        Command::Denoise(args) => run_denoise(args),
        Command::Metrics(args) => run_metrics(args),
        Command::Sweep(args) => run_sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(msg) => eprintln!("error: {msg}"),
                CliError::File(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
