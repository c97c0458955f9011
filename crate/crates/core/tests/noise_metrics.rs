mod common;

use common::random_image;
use proptest::prelude::*;
use rankfilt::{inject, mse, pona, psnr, GrayImage, NoiseKind, NoiseMask, NoiseSpec};

fn arb_kind() -> impl Strategy<Value = NoiseKind> {
    prop_oneof![
        Just(NoiseKind::SaltPepper),
        Just(NoiseKind::FixedImpulse),
        Just(NoiseKind::RandomImpulse),
    ]
}

#[test]
fn corruption_fraction_converges() {
    let img = GrayImage::new(512, 512, 128).unwrap();
    for (p, seed) in [(0.05, 1u64), (0.3, 2), (0.6, 3)] {
        let (_, mask) = inject(&img, &NoiseSpec::salt_pepper(p, seed)).unwrap();
        let fraction = mask.count() as f64 / 262144.0;
        let bound = 4.0 * (p * (1.0 - p) / 262144.0).sqrt();
        assert!((fraction - p).abs() <= bound, "p={p} fraction={fraction}");
    }
}

#[test]
fn salt_and_pepper_split_is_even() {
    let img = GrayImage::new(256, 256, 128).unwrap();
    let (out, mask) = inject(&img, &NoiseSpec::salt_pepper(0.5, 8)).unwrap();
    let salt = out.pixels().iter().filter(|&&p| p == 255).count() as f64;
    let n = mask.count() as f64;
    assert!((salt / n - 0.5).abs() <= 4.0 * (0.25 / n).sqrt());
}

#[test]
fn golden_salt_pepper_prefix() {
    // Regenerate with: SplitMix64(seed=42), uniform = u64 / 2^64,
    // select if u < 0.5, then low if second u < 0.5 else high.
    let img = GrayImage::new(16, 1, 100).unwrap();
    let (out, _) = inject(&img, &NoiseSpec::salt_pepper(0.5, 42)).unwrap();
    assert_eq!(
        out.pixels(),
        &[100, 0, 0, 100, 255, 255, 0, 100, 100, 100, 0, 0, 100, 100, 255, 100]
    );
}

proptest! {
    #[test]
    fn injection_is_deterministic(seed in any::<u64>(), p in 0.0f64..=1.0, kind in arb_kind()) {
        let img = random_image(17, 9, seed ^ 0xABCD);
        let spec = NoiseSpec::salt_pepper(p, seed).with_kind(kind).with_bounds(3, 250);
        prop_assert_eq!(inject(&img, &spec).unwrap(), inject(&img, &spec).unwrap());
    }

    #[test]
    fn unmasked_pixels_unchanged(seed in any::<u64>(), p in 0.0f64..=1.0, kind in arb_kind(), lo in 0u8..100, hi in 150u8..=255) {
        let img = random_image(20, 20, seed);
        let spec = NoiseSpec::salt_pepper(p, seed).with_kind(kind).with_bounds(lo, hi);
        let (out, mask) = inject(&img, &spec).unwrap();
        for ((&o, &n), &m) in img.pixels().iter().zip(out.pixels()).zip(mask.flags()) {
            if !m {
                prop_assert_eq!(o, n);
            } else if kind == NoiseKind::RandomImpulse {
                prop_assert!((lo..=hi).contains(&n));
            } else {
                prop_assert!(n == lo || n == hi);
            }
        }
    }

    #[test]
    fn gaussian_deterministic(seed in any::<u64>(), sigma in 0.0f64..80.0) {
        let img = random_image(16, 16, seed);
        let spec = NoiseSpec::gaussian(sigma, seed);
        let (a, ma) = inject(&img, &spec).unwrap();
        prop_assert_eq!((a.clone(), ma.clone()), inject(&img, &spec).unwrap());
        for ((&o, &n), &m) in img.pixels().iter().zip(a.pixels()).zip(ma.flags()) {
            prop_assert_eq!(m, o != n);
        }
    }

    #[test]
    fn mse_symmetric_and_zero_on_self(sa in any::<u64>(), sb in any::<u64>()) {
        let a = random_image(13, 7, sa);
        let b = random_image(13, 7, sb);
        prop_assert_eq!(mse(&a, &b).unwrap(), mse(&b, &a).unwrap());
        prop_assert_eq!(psnr(&a, &b).unwrap(), psnr(&b, &a).unwrap());
        prop_assert_eq!(mse(&a, &a).unwrap(), 0.0);
        prop_assert!(psnr(&a, &a).unwrap().is_infinite());
    }

    #[test]
    fn psnr_strictly_decreasing_in_mse(m1 in 1e-6f64..65025.0, m2 in 1e-6f64..65025.0) {
        prop_assume!(m1 < m2);
        prop_assert!(rankfilt::metrics::psnr_from_mse(m1) > rankfilt::metrics::psnr_from_mse(m2));
    }

    #[test]
    fn pona_ignores_unmasked_pixels(seed in any::<u64>(), p in 0.05f64..0.9, junk in any::<u8>()) {
        let original = random_image(16, 16, seed);
        let (noisy, mask) = inject(&original, &NoiseSpec::salt_pepper(p, seed)).unwrap();
        let denoised = random_image(16, 16, seed.wrapping_add(1));
        let base = pona(&original, &noisy, &denoised, &mask).unwrap();
        let mut noisy2 = noisy.clone();
        let mut denoised2 = denoised.clone();
        for (i, &m) in mask.flags().iter().enumerate() {
            if !m {
                noisy2.pixels_mut()[i] = junk;
                denoised2.pixels_mut()[i] = junk.wrapping_mul(7);
            }
        }
        prop_assert_eq!(base, pona(&original, &noisy2, &denoised2, &mask).unwrap());
        if let Some(v) = base {
            prop_assert!((0.0..=100.0).contains(&v));
        }
    }
}

#[test]
fn pona_denominator_is_mask_count() {
    // A selected pixel whose noisy value equals the original still counts.
    let original = GrayImage::from_raw(2, 1, vec![0, 50]).unwrap();
    let noisy = GrayImage::from_raw(2, 1, vec![0, 255]).unwrap();
    let denoised = GrayImage::from_raw(2, 1, vec![0, 50]).unwrap();
    let mask = NoiseMask::new(2, 1, vec![true, true]).unwrap();
    assert_eq!(
        pona(&original, &noisy, &denoised, &mask).unwrap(),
        Some(50.0)
    );
}
