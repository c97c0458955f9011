//! Restoration quality: MSE, PSNR and percentage of noise attenuated (PONA).

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::noise::NoiseMask;

/// Peak intensity for 8-bit images.
pub const PEAK: f64 = 255.0;

fn check_shape(a: &GrayImage, b: &GrayImage) -> Result<()> {
    if !a.same_shape(b) {
        return Err(Error::Shape(format!(
            "{}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    Ok(())
}

/// Sum of squared differences, exact.
fn sse(a: &GrayImage, b: &GrayImage) -> u64 {
    a.pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&p, &q)| {
            let d = p as i64 - q as i64;
            (d * d) as u64
        })
        .sum()
}

/// Mean squared error over all pixels.
pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    check_shape(a, b)?;
    Ok(sse(a, b) as f64 / a.len() as f64)
}

/// `10 log10(255^2 / mse)` in dB, or `f64::INFINITY` for identical images.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    Ok(psnr_from_mse(mse(a, b)?))
}

pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (PEAK * PEAK / mse).log10()
    }
}

/// Percentage of masked pixels whose absolute error against `original`
/// strictly decreased from `noisy` to `denoised`. `None` when the mask is empty.
pub fn pona(
    original: &GrayImage,
    noisy: &GrayImage,
    denoised: &GrayImage,
    mask: &NoiseMask,
) -> Result<Option<f64>> {
    check_shape(original, noisy)?;
    check_shape(original, denoised)?;
    if !mask.matches(original) {
        return Err(Error::Shape(format!(
            "mask {}x{} vs image {}x{}",
            mask.width(),
            mask.height(),
            original.width(),
            original.height()
        )));
    }
    let mut masked = 0usize;
    let mut improved = 0usize;
    for (i, _) in mask.flags().iter().enumerate().filter(|(_, &f)| f) {
        masked += 1;
        let o = original.pixels()[i];
        let before = noisy.pixels()[i].abs_diff(o);
        let after = denoised.pixels()[i].abs_diff(o);
        if after < before {
            improved += 1;
        }
    }
    Ok((masked > 0).then(|| 100.0 * improved as f64 / masked as f64))
}

/// Metrics for one (noise level, filter) evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub mse: f64,
    /// dB; infinite when `mse == 0`.
    pub psnr_db: f64,
    /// `None` when no pixel was marked noisy.
    pub pona_pct: Option<f64>,
    pub runtime_ms: f64,
}

impl MetricsReport {
    /// Evaluates a restoration. `runtime_ms` is supplied by the caller.
    pub fn evaluate(
        original: &GrayImage,
        noisy: &GrayImage,
        denoised: &GrayImage,
        mask: Option<&NoiseMask>,
        runtime_ms: f64,
    ) -> Result<Self> {
        let mse = mse(original, denoised)?;
        let pona_pct = match mask {
            Some(mask) => pona(original, noisy, denoised, mask)?,
            None => {
                check_shape(original, noisy)?;
                None
            }
        };
        Ok(Self {
            mse,
            psnr_db: psnr_from_mse(mse),
            pona_pct,
            runtime_ms,
        })
    }
}
