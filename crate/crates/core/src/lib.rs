//! Nonlinear rank filters for 8-bit grayscale images.
//!
//! The crate provides the median, weighted median, center-weighted median
//! (CWM) and adaptive median (AMF) filters on top of a sliding-histogram
//! order-statistics engine, seeded impulse and Gaussian noise injection,
//! MSE / PSNR / PONA metrics, PGM I/O and a density sweep harness that
//! compares filters on paired noise realizations.
//!
//! ```
//! use rankfilt::{amf_filter, inject, psnr, AmfFallback, BorderPolicy, GrayImage, NoiseSpec};
//!
//! let clean = GrayImage::from_fn(64, 64, |x, y| (x * 2 + y) as u8).unwrap();
//! let (noisy, _mask) = inject(&clean, &NoiseSpec::salt_pepper(0.2, 42)).unwrap();
//! let restored = amf_filter(&noisy, 3, 7, BorderPolicy::ReplicateEdge, AmfFallback::Median).unwrap();
//! assert!(psnr(&clean, &restored).unwrap() > psnr(&clean, &noisy).unwrap());
//! ```

pub mod error;
pub mod filters;
pub mod image;
pub mod metrics;
pub mod noise;
pub mod pgm;
pub mod sweep;

pub use error::{CellId, Error, Result};
pub use filters::{
    amf_filter, cwm_filter, median_filter, sliding_stats_pass, weighted_median_filter, AmfFallback,
    FilterSpec, StatsGrid,
};
pub use image::{BorderPolicy, GrayImage, Window, WindowStats};
pub use metrics::{mse, pona, psnr, MetricsReport};
pub use noise::{inject, NoiseKind, NoiseMask, NoiseSpec, SplitMix64};
pub use pgm::{read_pgm, write_pgm, PgmVariant};
pub use sweep::{report_to_csv, run_sweep, synthetic_textured, SweepConfig, SweepReport};
