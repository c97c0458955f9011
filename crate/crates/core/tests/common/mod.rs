//! Brute-force oracles shared by the integration suites. They index the raw
//! raster directly and never go through the crate's window or histogram code.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rankfilt::{BorderPolicy, GrayImage};

pub fn random_image(width: usize, height: usize, seed: u64) -> GrayImage {
    let mut rng = StdRng::seed_from_u64(seed);
    let raw = (0..width * height).map(|_| rng.gen::<u8>()).collect();
    GrayImage::from_raw(width, height, raw).unwrap()
}

/// Random image with a limited palette, so windows contain plenty of ties.
pub fn tied_image(width: usize, height: usize, seed: u64) -> GrayImage {
    let mut rng = StdRng::seed_from_u64(seed);
    let palette = [0u8, 17, 17, 90, 128, 200, 255];
    let raw = (0..width * height)
        .map(|_| palette[rng.gen_range(0..palette.len())])
        .collect();
    GrayImage::from_raw(width, height, raw).unwrap()
}

fn map_coord(i: isize, n: usize, policy: BorderPolicy) -> usize {
    let n = n as isize;
    match policy {
        BorderPolicy::ReplicateEdge => i.max(0).min(n - 1) as usize,
        BorderPolicy::Reflect => {
            let mut i = i;
            // Fold repeatedly; each fold mirrors about an edge, repeating it.
            while i < 0 || i >= n {
                if i < 0 {
                    i = -i - 1;
                }
                if i >= n {
                    i = 2 * n - i - 1;
                }
            }
            i as usize
        }
    }
}

/// Row-major window values around `(x, y)`.
pub fn window(image: &GrayImage, x: usize, y: usize, side: usize, policy: BorderPolicy) -> Vec<u8> {
    let r = (side / 2) as isize;
    let raw = image.pixels();
    let w = image.width();
    let mut out = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            let sx = map_coord(x as isize + dx, image.width(), policy);
            let sy = map_coord(y as isize + dy, image.height(), policy);
            out.push(raw[sy * w + sx]);
        }
    }
    out
}

/// Replicate each value `weights[k]` times, sort, take the middle element.
pub fn replicate_then_sort(values: &[u8], weights: &[u32]) -> u8 {
    let mut expanded = Vec::new();
    for (&v, &w) in values.iter().zip(weights) {
        for _ in 0..w {
            expanded.push(v);
        }
    }
    expanded.sort();
    expanded[expanded.len() / 2]
}

pub fn weighted_oracle(
    image: &GrayImage,
    weights: &[u32],
    side: usize,
    policy: BorderPolicy,
) -> GrayImage {
    GrayImage::from_fn(image.width(), image.height(), |x, y| {
        replicate_then_sort(&window(image, x, y, side, policy), weights)
    })
    .unwrap()
}

pub fn median_oracle(image: &GrayImage, side: usize, policy: BorderPolicy) -> GrayImage {
    weighted_oracle(image, &vec![1; side * side], side, policy)
}

pub fn cwm_weights(side: usize, center_weight: u32) -> Vec<u32> {
    let mut w = vec![1; side * side];
    w[side * side / 2] = center_weight;
    w
}

pub fn cwm_oracle(
    image: &GrayImage,
    side: usize,
    center_weight: u32,
    policy: BorderPolicy,
) -> GrayImage {
    weighted_oracle(image, &cwm_weights(side, center_weight), side, policy)
}

/// (min, median, max) of every window by sorting.
pub fn stats_oracle(image: &GrayImage, side: usize, policy: BorderPolicy) -> Vec<(u8, u8, u8)> {
    let mut out = Vec::new();
    for y in 0..image.height() {
        for x in 0..image.width() {
            let mut v = window(image, x, y, side, policy);
            v.sort();
            out.push((v[0], v[v.len() / 2], v[v.len() - 1]));
        }
    }
    out
}
