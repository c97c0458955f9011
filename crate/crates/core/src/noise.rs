//! Seeded noise injection.
//!
//! The generator is pinned so that a given `(image, spec)` pair produces the
//! same corrupted raster on every platform: a SplitMix64 stream seeded with
//! the spec's seed, uniforms formed as `next_u64() / 2^64`, and Gaussian
//! deviates from Box-Muller on consecutive uniform pairs.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::image::GrayImage;

const TWO_POW_64: f64 = 18_446_744_073_709_551_616.0;

/// SplitMix64 output function applied to a single state value.
#[inline]
pub fn splitmix64_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// SplitMix64 stream generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        splitmix64_mix(self.state)
    }

    /// Uniform in `[0, 1)`; the top few outputs round up to exactly 1.0 in f64.
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        self.next_u64() as f64 / TWO_POW_64
    }

    /// Uniform integer in `low..=high`.
    #[inline]
    pub fn next_in_range(&mut self, low: u8, high: u8) -> u8 {
        let span = (high as u32 - low as u32 + 1) as f64;
        let k = (self.next_uniform() * span) as u32;
        (low as u32 + k).min(high as u32) as u8
    }

    /// Standard normal deviate from one Box-Muller pair (cosine branch).
    pub fn next_gaussian(&mut self) -> f64 {
        let u1 = self.next_uniform();
        let u2 = self.next_uniform();
        // 1 - u1 lies in (0, 1] unless u1 rounded up to 1.0.
        let r = (1.0 - u1).max(f64::MIN_POSITIVE);
        (-2.0 * r.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseKind {
    SaltPepper,
    FixedImpulse,
    RandomImpulse,
    Gaussian,
}

impl NoiseKind {
    pub fn label(self) -> &'static str {
        match self {
            NoiseKind::SaltPepper => "sp",
            NoiseKind::FixedImpulse => "fixed",
            NoiseKind::RandomImpulse => "random",
            NoiseKind::Gaussian => "gauss",
        }
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sp" | "salt-pepper" => Ok(NoiseKind::SaltPepper),
            "fixed" | "fixed-impulse" => Ok(NoiseKind::FixedImpulse),
            "random" | "random-impulse" => Ok(NoiseKind::RandomImpulse),
            "gauss" | "gaussian" => Ok(NoiseKind::Gaussian),
            other => Err(Error::InvalidSpec(format!("unknown noise kind '{other}'"))),
        }
    }
}

/// Description of one corruption run.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    /// Per-pixel corruption probability. Ignored for Gaussian noise.
    pub density: f64,
    pub low: u8,
    pub high: u8,
    /// Standard deviation in intensity units (Gaussian only).
    pub sigma: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn salt_pepper(density: f64, seed: u64) -> Self {
        Self {
            kind: NoiseKind::SaltPepper,
            density,
            low: 0,
            high: 255,
            sigma: 0.0,
            seed,
        }
    }

    pub fn gaussian(sigma: f64, seed: u64) -> Self {
        Self {
            kind: NoiseKind::Gaussian,
            density: 0.0,
            low: 0,
            high: 255,
            sigma,
            seed,
        }
    }

    pub fn with_kind(mut self, kind: NoiseKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn with_bounds(mut self, low: u8, high: u8) -> Self {
        self.low = low;
        self.high = high;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.density) {
            return Err(Error::InvalidSpec(format!(
                "density {} outside [0, 1]",
                self.density
            )));
        }
        match self.kind {
            NoiseKind::Gaussian => {
                if !(self.sigma.is_finite() && self.sigma >= 0.0) {
                    return Err(Error::InvalidSpec(format!(
                        "sigma {} must be >= 0",
                        self.sigma
                    )));
                }
            }
            _ => {
                if self.low >= self.high {
                    return Err(Error::InvalidSpec(format!(
                        "low ({}) must be below high ({})",
                        self.low, self.high
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Ground-truth record of which pixels the injector corrupted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoiseMask {
    width: usize,
    height: usize,
    flags: Vec<bool>,
}

impl NoiseMask {
    pub fn new(width: usize, height: usize, flags: Vec<bool>) -> Result<Self> {
        if flags.len() != width * height {
            return Err(Error::Shape(format!(
                "mask has {} flags for a {width}x{height} image",
                flags.len()
            )));
        }
        Ok(Self {
            width,
            height,
            flags,
        })
    }

    /// Decodes a mask image: any nonzero pixel is marked.
    pub fn from_image(image: &GrayImage) -> Self {
        Self {
            width: image.width(),
            height: image.height(),
            flags: image.pixels().iter().map(|&p| p != 0).collect(),
        }
    }

    /// Encodes the mask as a 0/255 image.
    pub fn to_image(&self) -> GrayImage {
        let raw = self
            .flags
            .iter()
            .map(|&f| if f { 255 } else { 0 })
            .collect();
        GrayImage::from_raw(self.width, self.height, raw).expect("mask dimensions are valid")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }

    pub fn count(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }

    pub fn matches(&self, image: &GrayImage) -> bool {
        self.width == image.width() && self.height == image.height()
    }
}

/// Corrupts `image` according to `spec`, returning the noisy image and its mask.
///
/// Pixels are visited row-major. For impulse kinds, one uniform draw per
/// pixel selects it when `draw < density`; a selected pixel then takes `low`
/// or `high` (second draw below/above 0.5) or, for random impulses, a uniform
/// integer in `[low, high]`. Gaussian noise perturbs every pixel and the mask
/// marks pixels whose stored value changed.
pub fn inject(image: &GrayImage, spec: &NoiseSpec) -> Result<(GrayImage, NoiseMask)> {
    spec.validate()?;
    let mut rng = SplitMix64::new(spec.seed);
    let mut out = image.clone();
    let mut flags = vec![false; image.len()];

    for (p, flag) in out.pixels_mut().iter_mut().zip(flags.iter_mut()) {
        match spec.kind {
            NoiseKind::SaltPepper | NoiseKind::FixedImpulse => {
                if rng.next_uniform() < spec.density {
                    *p = if rng.next_uniform() < 0.5 {
                        spec.low
                    } else {
                        spec.high
                    };
                    *flag = true;
                }
            }
            NoiseKind::RandomImpulse => {
                if rng.next_uniform() < spec.density {
                    *p = rng.next_in_range(spec.low, spec.high);
                    *flag = true;
                }
            }
            NoiseKind::Gaussian => {
                let v = (*p as f64 + spec.sigma * rng.next_gaussian()).round();
                let v = v.clamp(0.0, 255.0) as u8;
                *flag = v != *p;
                *p = v;
            }
        }
    }

    let mask = NoiseMask::new(image.width(), image.height(), flags)?;
    Ok((out, mask))
}
