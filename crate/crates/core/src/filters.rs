//! Rank filters: median, weighted median, center-weighted median and the
//! adaptive median filter, all driven by a sliding 256-bin histogram.
//!
//! # Engine
//!
//! Each output row starts from a freshly filled histogram of the first
//! window; moving one column right removes the leaving column and inserts
//! the entering one, so only `2 * side` bins change per step. Order
//! statistics are read with a two-level scan (16 coarse bins, then 16 fine
//! bins), and the extremes are tracked with monotone hints that only ever
//! move inward on a query. Results are bit-identical to sorting each window;
//! [`naive`] keeps the sorting path for comparison.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::image::{check_side, BorderPolicy, GrayImage, WindowStats};

/// Counts of intensities in the current window.
#[derive(Clone)]
struct RankHistogram {
    fine: [u64; 256],
    coarse: [u64; 16],
    total: u64,
    // Lower bound on the smallest occupied bin / upper bound on the largest.
    min_hint: u8,
    max_hint: u8,
}

impl RankHistogram {
    fn new() -> Self {
        Self {
            fine: [0; 256],
            coarse: [0; 16],
            total: 0,
            min_hint: 255,
            max_hint: 0,
        }
    }

    fn clear(&mut self) {
        self.fine.fill(0);
        self.coarse.fill(0);
        self.total = 0;
        self.min_hint = 255;
        self.max_hint = 0;
    }

    #[inline]
    fn add_n(&mut self, value: u8, n: u64) {
        self.fine[value as usize] += n;
        self.coarse[(value >> 4) as usize] += n;
        self.total += n;
        self.min_hint = self.min_hint.min(value);
        self.max_hint = self.max_hint.max(value);
    }

    #[inline]
    fn add(&mut self, value: u8) {
        self.add_n(value, 1);
    }

    #[inline]
    fn remove_n(&mut self, value: u8, n: u64) {
        debug_assert!(self.fine[value as usize] >= n, "histogram underflow");
        self.fine[value as usize] -= n;
        self.coarse[(value >> 4) as usize] -= n;
        self.total -= n;
    }

    #[inline]
    fn remove(&mut self, value: u8) {
        self.remove_n(value, 1);
    }

    #[inline]
    fn min(&mut self) -> u8 {
        debug_assert!(self.total > 0);
        while self.fine[self.min_hint as usize] == 0 {
            self.min_hint += 1;
        }
        self.min_hint
    }

    #[inline]
    fn max(&mut self) -> u8 {
        debug_assert!(self.total > 0);
        while self.fine[self.max_hint as usize] == 0 {
            self.max_hint -= 1;
        }
        self.max_hint
    }

    /// Value at 0-based position `rank` of the sorted multiset.
    #[inline]
    fn kth(&self, rank: u64) -> u8 {
        debug_assert!(rank < self.total);
        let mut seen = 0u64;
        let mut block = 0usize;
        while seen + self.coarse[block] <= rank {
            seen += self.coarse[block];
            block += 1;
        }
        let mut bin = block * 16;
        while seen + self.fine[bin] <= rank {
            seen += self.fine[bin];
            bin += 1;
        }
        bin as u8
    }

    /// Middle element of an odd-sized multiset.
    #[inline]
    fn median(&self) -> u8 {
        self.kth(self.total / 2)
    }
}

/// Image extended by `pad` pixels on every side according to a border policy.
struct Padded {
    stride: usize,
    pixels: Vec<u8>,
}

impl Padded {
    fn new(image: &GrayImage, pad: usize, policy: BorderPolicy) -> Self {
        let (w, h) = (image.width(), image.height());
        let stride = w + 2 * pad;
        let cols: Vec<usize> = (0..stride)
            .map(|c| policy.resolve(c as isize - pad as isize, w))
            .collect();
        let mut pixels = Vec::with_capacity(stride * (h + 2 * pad));
        for r in 0..h + 2 * pad {
            let sy = policy.resolve(r as isize - pad as isize, h);
            let row = &image.pixels()[sy * w..(sy + 1) * w];
            pixels.extend(cols.iter().map(|&c| row[c]));
        }
        Self { stride, pixels }
    }

    #[inline]
    fn at(&self, col: usize, row: usize) -> u8 {
        self.pixels[row * self.stride + col]
    }
}

/// Slides a `side` x `side` histogram over every pixel in row-major order,
/// calling `visit(x, y, hist)` with the window centered on `(x, y)`.
fn slide(
    image: &GrayImage,
    side: usize,
    policy: BorderPolicy,
    mut visit: impl FnMut(usize, usize, &mut RankHistogram),
) -> Result<()> {
    check_side(side)?;
    let padded = Padded::new(image, side / 2, policy);
    let mut hist = RankHistogram::new();
    for y in 0..image.height() {
        hist.clear();
        for row in y..y + side {
            for col in 0..side {
                hist.add(padded.at(col, row));
            }
        }
        visit(0, y, &mut hist);
        for x in 1..image.width() {
            let leaving = x - 1;
            let entering = x + side - 1;
            for row in y..y + side {
                hist.remove(padded.at(leaving, row));
                hist.add(padded.at(entering, row));
            }
            visit(x, y, &mut hist);
        }
    }
    Ok(())
}

/// Per-pixel window statistics for a whole image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatsGrid {
    width: usize,
    height: usize,
    side: usize,
    stats: Vec<WindowStats>,
}

impl StatsGrid {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn get(&self, x: usize, y: usize) -> WindowStats {
        self.stats[y * self.width + x]
    }

    /// Row-major statistics, one entry per pixel.
    pub fn as_slice(&self) -> &[WindowStats] {
        &self.stats
    }
}

/// Computes `(S_min, S_med, S_max)` for the window around every pixel.
pub fn sliding_stats_pass(
    image: &GrayImage,
    side: usize,
    policy: BorderPolicy,
) -> Result<StatsGrid> {
    let mut stats = Vec::with_capacity(image.len());
    slide(image, side, policy, |_, _, hist| {
        stats.push(WindowStats {
            s_min: hist.min(),
            s_med: hist.median(),
            s_max: hist.max(),
        });
    })?;
    Ok(StatsGrid {
        width: image.width(),
        height: image.height(),
        side,
        stats,
    })
}

/// Replaces each pixel with the median of its `side` x `side` window.
pub fn median_filter(image: &GrayImage, side: usize, policy: BorderPolicy) -> Result<GrayImage> {
    let mut out = Vec::with_capacity(image.len());
    slide(image, side, policy, |_, _, hist| out.push(hist.median()))?;
    GrayImage::from_raw(image.width(), image.height(), out)
}

/// Median of the multiset in which window position `k` is replicated
/// `weights[k]` times. Weights are row-major and their sum must be odd.
pub fn weighted_median_filter(
    image: &GrayImage,
    weights: &[u32],
    side: usize,
    policy: BorderPolicy,
) -> Result<GrayImage> {
    check_side(side)?;
    check_weights(weights, side)?;
    let padded = Padded::new(image, side / 2, policy);
    let mut hist = RankHistogram::new();
    let mut out = Vec::with_capacity(image.len());
    for y in 0..image.height() {
        for x in 0..image.width() {
            let mut k = 0;
            for row in y..y + side {
                for col in x..x + side {
                    hist.add_n(padded.at(col, row), weights[k] as u64);
                    k += 1;
                }
            }
            out.push(hist.median());
            hist.clear();
        }
    }
    GrayImage::from_raw(image.width(), image.height(), out)
}

fn check_weights(weights: &[u32], side: usize) -> Result<()> {
    if weights.len() != side * side {
        return Err(Error::Shape(format!(
            "{} weights supplied for a {side}x{side} window",
            weights.len()
        )));
    }
    if weights.contains(&0) {
        return Err(Error::InvalidWeights("weights must be positive".into()));
    }
    let total: u64 = weights.iter().map(|&w| w as u64).sum();
    if total.is_multiple_of(2) {
        return Err(Error::InvalidWeights(format!(
            "total weight {total} is even"
        )));
    }
    Ok(())
}

/// Weighted median whose only non-unit weight is `center_weight` at the center.
pub fn cwm_filter(
    image: &GrayImage,
    side: usize,
    center_weight: u32,
    policy: BorderPolicy,
) -> Result<GrayImage> {
    if center_weight == 0 || center_weight.is_multiple_of(2) {
        return Err(Error::InvalidWeights(format!(
            "center weight {center_weight} must be odd and positive"
        )));
    }
    let extra = center_weight as u64 - 1;
    let mut out = Vec::with_capacity(image.len());
    slide(image, side, policy, |x, y, hist| {
        let center = image.get(x, y);
        hist.add_n(center, extra);
        out.push(hist.median());
        hist.remove_n(center, extra);
    })?;
    GrayImage::from_raw(image.width(), image.height(), out)
}

/// What the adaptive filter outputs when no window up to `w_max` has a
/// median strictly between its extremes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum AmfFallback {
    /// Median of the largest window.
    #[default]
    Median,
    /// The original center pixel.
    Center,
}

impl FromStr for AmfFallback {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "median" => Ok(AmfFallback::Median),
            "center" => Ok(AmfFallback::Center),
            other => Err(Error::InvalidSpec(format!(
                "unknown AMF fallback '{other}'"
            ))),
        }
    }
}

fn check_amf(w_init: usize, w_max: usize) -> Result<()> {
    if w_init < 3 || w_init.is_multiple_of(2) || w_max.is_multiple_of(2) || w_init > w_max {
        return Err(Error::InvalidSpec(format!(
            "AMF windows must be odd with 3 <= w_init <= w_max (got {w_init}, {w_max})"
        )));
    }
    Ok(())
}

/// Adaptive median filter.
///
/// Per pixel, starting at `w_init`: while the window median is not strictly
/// between the window min and max, grow the window by 2 up to `w_max`. Once
/// a window passes, the pixel is kept if it too lies strictly between min and
/// max, and replaced by that window's median otherwise. If every size fails,
/// `fallback` decides the output.
pub fn amf_filter(
    image: &GrayImage,
    w_init: usize,
    w_max: usize,
    policy: BorderPolicy,
    fallback: AmfFallback,
) -> Result<GrayImage> {
    check_amf(w_init, w_max)?;
    let grids = (w_init..=w_max)
        .step_by(2)
        .map(|side| sliding_stats_pass(image, side, policy))
        .collect::<Result<Vec<_>>>()?;
    let largest = grids.last().expect("at least one window size");

    let out = image
        .pixels()
        .iter()
        .enumerate()
        .map(|(i, &center)| {
            for grid in &grids {
                let s = grid.stats[i];
                if s.median_is_interior() {
                    return if s.separates(center) { center } else { s.s_med };
                }
            }
            match fallback {
                AmfFallback::Median => largest.stats[i].s_med,
                AmfFallback::Center => center,
            }
        })
        .collect();
    GrayImage::from_raw(image.width(), image.height(), out)
}

/// Sorting-based reference implementations.
///
/// These materialize every window and sort it. They are slow and exist for
/// cross-checking and benchmarking the histogram engine.
pub mod naive {
    use super::*;

    pub fn stats_pass(image: &GrayImage, side: usize, policy: BorderPolicy) -> Result<StatsGrid> {
        check_side(side)?;
        let mut stats = Vec::with_capacity(image.len());
        for y in 0..image.height() {
            for x in 0..image.width() {
                stats.push(image.window_at(x, y, side, policy)?.stats());
            }
        }
        Ok(StatsGrid {
            width: image.width(),
            height: image.height(),
            side,
            stats,
        })
    }

    pub fn median_filter(
        image: &GrayImage,
        side: usize,
        policy: BorderPolicy,
    ) -> Result<GrayImage> {
        check_side(side)?;
        let mut out = Vec::with_capacity(image.len());
        for y in 0..image.height() {
            for x in 0..image.width() {
                let mut values = image.window_at(x, y, side, policy)?.values().to_vec();
                values.sort_unstable();
                out.push(values[values.len() / 2]);
            }
        }
        GrayImage::from_raw(image.width(), image.height(), out)
    }

    /// Literal per-pixel transcription of the adaptive procedure.
    pub fn amf_filter(
        image: &GrayImage,
        w_init: usize,
        w_max: usize,
        policy: BorderPolicy,
        fallback: AmfFallback,
    ) -> Result<GrayImage> {
        check_amf(w_init, w_max)?;
        let mut out = image.clone();
        for y in 0..image.height() {
            for x in 0..image.width() {
                let center = image.get(x, y);
                let mut side = w_init;
                let value = loop {
                    let s = image.window_at(x, y, side, policy)?.stats();
                    if s.median_is_interior() {
                        break if s.separates(center) { center } else { s.s_med };
                    }
                    side += 2;
                    if side > w_max {
                        break match fallback {
                            AmfFallback::Median => s.s_med,
                            AmfFallback::Center => center,
                        };
                    }
                };
                out.set(x, y, value);
            }
        }
        Ok(out)
    }
}

/// A filter and its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilterSpec {
    /// Passes the image through unchanged.
    Identity,
    Median {
        side: usize,
    },
    WeightedMedian {
        side: usize,
        weights: Vec<u32>,
    },
    Cwm {
        side: usize,
        center_weight: u32,
    },
    Amf {
        w_init: usize,
        w_max: usize,
        fallback: AmfFallback,
    },
}

impl FilterSpec {
    pub fn cwm(center_weight: u32) -> Self {
        FilterSpec::Cwm {
            side: 3,
            center_weight,
        }
    }

    pub fn amf(w_max: usize) -> Self {
        FilterSpec::Amf {
            w_init: 3,
            w_max,
            fallback: AmfFallback::Median,
        }
    }

    /// Checks parameters without running the filter.
    pub fn validate(&self) -> Result<()> {
        match self {
            FilterSpec::Identity => Ok(()),
            FilterSpec::Median { side } => check_side(*side),
            FilterSpec::WeightedMedian { side, weights } => {
                check_side(*side)?;
                check_weights(weights, *side)
            }
            FilterSpec::Cwm {
                side,
                center_weight,
            } => {
                check_side(*side)?;
                if *center_weight == 0 || center_weight.is_multiple_of(2) {
                    return Err(Error::InvalidWeights(format!(
                        "center weight {center_weight} must be odd and positive"
                    )));
                }
                Ok(())
            }
            FilterSpec::Amf { w_init, w_max, .. } => check_amf(*w_init, *w_max),
        }
    }

    pub fn apply(&self, image: &GrayImage, policy: BorderPolicy) -> Result<GrayImage> {
        match self {
            FilterSpec::Identity => Ok(image.clone()),
            FilterSpec::Median { side } => median_filter(image, *side, policy),
            FilterSpec::WeightedMedian { side, weights } => {
                weighted_median_filter(image, weights, *side, policy)
            }
            FilterSpec::Cwm {
                side,
                center_weight,
            } => cwm_filter(image, *side, *center_weight, policy),
            FilterSpec::Amf {
                w_init,
                w_max,
                fallback,
            } => amf_filter(image, *w_init, *w_max, policy, *fallback),
        }
    }
}

/// Short label, parseable back with [`FromStr`] (except weighted medians).
impl fmt::Display for FilterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterSpec::Identity => f.write_str("none"),
            FilterSpec::Median { side: 3 } => f.write_str("median"),
            FilterSpec::Median { side } => write!(f, "median:{side}"),
            FilterSpec::WeightedMedian { side, .. } => write!(f, "wm{side}"),
            FilterSpec::Cwm {
                side: 3,
                center_weight,
            } => write!(f, "cwm:{center_weight}"),
            FilterSpec::Cwm {
                side,
                center_weight,
            } => write!(f, "cwm:{center_weight}:{side}"),
            FilterSpec::Amf {
                w_init,
                w_max,
                fallback,
            } => {
                if *w_init == 3 {
                    write!(f, "amf:{w_max}")?;
                } else {
                    write!(f, "amf:{w_init}-{w_max}")?;
                }
                if *fallback == AmfFallback::Center {
                    f.write_str(":center")?;
                }
                Ok(())
            }
        }
    }
}

/// Parses sweep shorthand: `none`, `median[:side]`, `cwm:weight[:side]`,
/// `amf:w_max[:center]` or `amf:w_init-w_max[:center]`.
impl FromStr for FilterSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(format!("cannot parse filter '{s}'"));
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        let parts: Vec<&str> = s.split(':').collect();
        let spec = match parts.as_slice() {
            ["none"] | ["identity"] => FilterSpec::Identity,
            ["median"] => FilterSpec::Median { side: 3 },
            ["median", side] => FilterSpec::Median { side: num(side)? },
            ["cwm"] => FilterSpec::cwm(3),
            ["cwm", weight] => FilterSpec::cwm(num(weight)? as u32),
            ["cwm", weight, side] => FilterSpec::Cwm {
                side: num(side)?,
                center_weight: num(weight)? as u32,
            },
            ["amf", rest @ ..] if rest.len() <= 2 => {
                let (w_init, w_max) = match rest.first() {
                    None => (3, 7),
                    Some(range) => match range.split_once('-') {
                        Some((a, b)) => (num(a)?, num(b)?),
                        None => (3, num(range)?),
                    },
                };
                let fallback = match rest.get(1) {
                    None => AmfFallback::Median,
                    Some(f) => f.parse()?,
                };
                FilterSpec::Amf {
                    w_init,
                    w_max,
                    fallback,
                }
            }
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}
