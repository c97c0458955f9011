//! Shared fixtures for the criterion benchmarks.

use rankfilt::{inject, GrayImage, NoiseSpec};

/// Textured test image corrupted with salt-and-pepper noise.
pub fn noisy_fixture(side: usize, density: f64) -> GrayImage {
    let clean = rankfilt::synthetic_textured(side, side, 0x5EED).expect("valid size");
    inject(&clean, &NoiseSpec::salt_pepper(density, 1))
        .expect("valid spec")
        .0
}
