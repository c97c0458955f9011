//! Noise-density sweeps: inject, denoise, measure, for every combination of
//! trial, density and filter.
//!
//! Within one (trial, density) cell every filter sees the same corrupted
//! image, so filter comparisons are paired.

use std::fmt::Write as _;
use std::time::Instant;

use crate::error::{CellId, Error, Result};
use crate::filters::FilterSpec;
use crate::image::{BorderPolicy, GrayImage};
use crate::metrics::MetricsReport;
use crate::noise::{inject, NoiseKind, NoiseSpec, SplitMix64};

pub const CSV_HEADER: &str = "density,filter,trial,mse,psnr_db,pona_pct,runtime_ms";

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub source: GrayImage,
    /// Strictly increasing, each in `(0, 1]`.
    pub densities: Vec<f64>,
    /// Kind and bounds of the injected noise; density and seed are set per cell.
    pub noise: NoiseSpec,
    pub filters: Vec<FilterSpec>,
    pub policy: BorderPolicy,
    pub seed: u64,
    pub trials: usize,
}

impl SweepConfig {
    /// Salt-and-pepper at 5%..30% in steps of 5%, CWM (weight 3) against
    /// AMF (`w_max` 7), five trials.
    pub fn new(source: GrayImage, seed: u64) -> Self {
        Self {
            source,
            densities: default_densities(),
            noise: NoiseSpec::salt_pepper(0.0, 0),
            filters: vec![FilterSpec::cwm(3), FilterSpec::amf(7)],
            policy: BorderPolicy::ReplicateEdge,
            seed,
            trials: 5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidSpec("trials must be at least 1".into()));
        }
        if self.filters.is_empty() {
            return Err(Error::InvalidSpec("no filters given".into()));
        }
        if let Some(d) = self.densities.iter().find(|d| !(**d > 0.0 && **d <= 1.0)) {
            return Err(Error::InvalidSpec(format!("density {d} outside (0, 1]")));
        }
        if self.densities.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpec(
                "densities must be strictly increasing".into(),
            ));
        }
        if self.noise.kind == NoiseKind::Gaussian {
            return Err(Error::InvalidSpec(
                "sweeps vary impulse density; gaussian noise is not supported".into(),
            ));
        }
        NoiseSpec {
            density: 0.0,
            ..self.noise.clone()
        }
        .validate()?;
        self.filters.iter().try_for_each(FilterSpec::validate)
    }

    /// Seed for the corrupted image of one (trial, density) cell.
    pub fn cell_seed(&self, trial: usize, density_index: usize) -> u64 {
        let index = (trial * self.densities.len() + density_index) as u64;
        SplitMix64::new(self.seed ^ index).next_u64()
    }
}

/// 0.05, 0.10, ..., 0.30.
pub fn default_densities() -> Vec<f64> {
    (1..=6).map(|k| k as f64 * 0.05).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub density: f64,
    pub filter: String,
    pub trial: usize,
    pub metrics: MetricsReport,
}

/// Mean of each metric over the trials of one (density, filter) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAggregate {
    pub density: f64,
    pub filter: String,
    pub metrics: MetricsReport,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepReport {
    /// Ordered by density, then filter (config order), then trial.
    pub rows: Vec<SweepRow>,
    pub aggregates: Vec<SweepAggregate>,
}

impl SweepReport {
    pub fn aggregate(&self, density: f64, filter: &str) -> Option<&SweepAggregate> {
        self.aggregates
            .iter()
            .find(|a| a.density == density && a.filter == filter)
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport> {
    run_sweep_with(config, |_, _| {})
}

/// Like [`run_sweep`], also handing every restored image to `on_restored`.
pub fn run_sweep_with(
    config: &SweepConfig,
    mut on_restored: impl FnMut(&SweepRow, &GrayImage),
) -> Result<SweepReport> {
    config.validate()?;
    let labels: Vec<String> = config.filters.iter().map(|f| f.to_string()).collect();
    let nd = config.densities.len();
    let nf = config.filters.len();
    let mut slots: Vec<Option<SweepRow>> = vec![None; nd * nf * config.trials];

    for trial in 0..config.trials {
        for (di, &density) in config.densities.iter().enumerate() {
            let spec = NoiseSpec {
                density,
                seed: config.cell_seed(trial, di),
                ..config.noise.clone()
            };
            let (noisy, mask) = inject(&config.source, &spec)?;
            for (fi, filter) in config.filters.iter().enumerate() {
                let cell = || CellId {
                    trial,
                    density,
                    filter: labels[fi].clone(),
                };
                let wrap = |e: Error| Error::Cell {
                    cell: cell(),
                    source: Box::new(e),
                };
                let start = Instant::now();
                let restored = filter.apply(&noisy, config.policy).map_err(wrap)?;
                let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
                let metrics = MetricsReport::evaluate(
                    &config.source,
                    &noisy,
                    &restored,
                    Some(&mask),
                    runtime_ms,
                )
                .map_err(wrap)?;
                let row = SweepRow {
                    density,
                    filter: labels[fi].clone(),
                    trial,
                    metrics,
                };
                on_restored(&row, &restored);
                slots[(di * nf + fi) * config.trials + trial] = Some(row);
            }
        }
    }

    let rows: Vec<SweepRow> = slots
        .into_iter()
        .map(|r| r.expect("every cell filled"))
        .collect();
    let aggregates = rows
        .chunks(config.trials)
        .map(|group| SweepAggregate {
            density: group[0].density,
            filter: group[0].filter.clone(),
            metrics: mean_metrics(group.iter().map(|r| &r.metrics)),
        })
        .collect();
    Ok(SweepReport { rows, aggregates })
}

fn mean_metrics<'a>(items: impl Iterator<Item = &'a MetricsReport>) -> MetricsReport {
    let items: Vec<&MetricsReport> = items.collect();
    let n = items.len() as f64;
    let pona: Vec<f64> = items.iter().filter_map(|m| m.pona_pct).collect();
    MetricsReport {
        mse: items.iter().map(|m| m.mse).sum::<f64>() / n,
        // Any infinite trial makes the mean infinite.
        psnr_db: items.iter().map(|m| m.psnr_db).sum::<f64>() / n,
        pona_pct: (!pona.is_empty()).then(|| pona.iter().sum::<f64>() / pona.len() as f64),
        runtime_ms: items.iter().map(|m| m.runtime_ms).sum::<f64>() / n,
    }
}

/// Formats a finite real with 6 significant digits, trailing zeros trimmed.
pub fn format_sig6(v: f64) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 || v.is_nan() {
        return if v.is_nan() { "nan".into() } else { "0".into() };
    }
    // Round first so that e.g. 999999.7 is classified by its rounded exponent.
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn push_record(out: &mut String, density: f64, filter: &str, trial: &str, m: &MetricsReport) {
    let pona = m.pona_pct.map(format_sig6).unwrap_or_default();
    writeln!(
        out,
        "{},{},{},{},{},{},{}",
        format_sig6(density),
        filter,
        trial,
        format_sig6(m.mse),
        format_sig6(m.psnr_db),
        pona,
        format_sig6(m.runtime_ms)
    )
    .unwrap();
}

/// Renders the report as CSV: header, one line per row, then one `mean`
/// line per (density, filter).
pub fn report_to_csv(report: &SweepReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        push_record(
            &mut out,
            r.density,
            &r.filter,
            &r.trial.to_string(),
            &r.metrics,
        );
    }
    for a in &report.aggregates {
        push_record(&mut out, a.density, &a.filter, "mean", &a.metrics);
    }
    out
}

/// Deterministic test image: a diagonal gradient (0..=160) plus a seeded
/// texture of 16x16 blocks with offsets in 0..=95, covering the full 8-bit range.
pub fn synthetic_textured(width: usize, height: usize, seed: u64) -> Result<GrayImage> {
    const BLOCK: usize = 16;
    let bw = width.div_ceil(BLOCK);
    let bh = height.div_ceil(BLOCK);
    let mut rng = SplitMix64::new(seed);
    let offsets: Vec<u8> = (0..bw * bh).map(|_| (rng.next_u64() % 96) as u8).collect();
    let span = (width + height).saturating_sub(2).max(1) as f64;
    GrayImage::from_fn(width, height, |x, y| {
        let gradient = (160.0 * (x + y) as f64 / span).round() as u8;
        gradient + offsets[(y / BLOCK) * bw + x / BLOCK]
    })
}
