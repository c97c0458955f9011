//! Grayscale image container, window extraction and window order statistics.
//!
//! Every filter in this crate consumes a [`GrayImage`] and reasons about the
//! odd-sided square neighborhood ([`Window`]) around each pixel. Coordinates
//! that fall outside the image are resolved by a [`BorderPolicy`].

use crate::error::{Error, Result};

/// Single-channel 8-bit image stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    /// Creates a `width` x `height` image with every pixel set to `fill`.
    pub fn new(width: usize, height: usize, fill: u8) -> Result<Self> {
        check_dims(width, height)?;
        Ok(Self {
            width,
            height,
            pixels: vec![fill; width * height],
        })
    }

    /// Wraps an existing row-major raster.
    pub fn from_raw(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        check_dims(width, height)?;
        if pixels.len() != width * height {
            return Err(Error::Shape(format!(
                "{} pixels supplied for a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self> {
        check_dims(width, height)?;
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    /// Always false; images have at least one pixel.
    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn into_raw(self) -> Vec<u8> {
        self.pixels
    }

    /// Intensity at column `x`, row `y`. Panics when out of range.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        assert!(
            x < self.width && y < self.height,
            "pixel ({x}, {y}) out of range"
        );
        self.pixels[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        assert!(
            x < self.width && y < self.height,
            "pixel ({x}, {y}) out of range"
        );
        self.pixels[y * self.width + x] = value;
    }

    /// Returns true when both images have the same width and height.
    pub fn same_shape(&self, other: &GrayImage) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Extracts the `side` x `side` neighborhood centered on `(x, y)`.
    ///
    /// Values are listed row-major, top-left first; coordinates outside the
    /// image are mapped back inside by `policy`.
    pub fn window_at(
        &self,
        x: usize,
        y: usize,
        side: usize,
        policy: BorderPolicy,
    ) -> Result<Window> {
        check_side(side)?;
        if x >= self.width || y >= self.height {
            return Err(Error::OutOfBounds {
                x,
                y,
                width: self.width,
                height: self.height,
            });
        }
        let r = (side / 2) as isize;
        let mut values = Vec::with_capacity(side * side);
        for dy in -r..=r {
            let sy = policy.resolve(y as isize + dy, self.height);
            let row = &self.pixels[sy * self.width..(sy + 1) * self.width];
            for dx in -r..=r {
                values.push(row[policy.resolve(x as isize + dx, self.width)]);
            }
        }
        Ok(Window { side, values })
    }
}

fn check_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidDimension { width, height });
    }
    Ok(())
}

/// Rejects window sides that are even or smaller than 3.
pub(crate) fn check_side(side: usize) -> Result<()> {
    if side < 3 || side.is_multiple_of(2) {
        return Err(Error::InvalidWindow(side));
    }
    Ok(())
}

/// How window coordinates outside the image are resolved.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum BorderPolicy {
    /// Clamp to the nearest valid row or column.
    #[default]
    ReplicateEdge,
    /// Mirror about the image edge, repeating the edge pixel
    /// (`-1 -> 0`, `-2 -> 1`, `n -> n-1`).
    Reflect,
}

impl BorderPolicy {
    /// Maps a possibly out-of-range coordinate onto `0..len`.
    #[inline]
    pub fn resolve(self, i: isize, len: usize) -> usize {
        let n = len as isize;
        if (0..n).contains(&i) {
            return i as usize;
        }
        match self {
            BorderPolicy::ReplicateEdge => i.clamp(0, n - 1) as usize,
            BorderPolicy::Reflect => {
                // Symmetric extension has period 2n.
                let period = 2 * n;
                let m = i.rem_euclid(period);
                (if m < n { m } else { period - 1 - m }) as usize
            }
        }
    }
}

impl std::str::FromStr for BorderPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "replicate" | "replicate-edge" => Ok(BorderPolicy::ReplicateEdge),
            "reflect" => Ok(BorderPolicy::Reflect),
            other => Err(Error::InvalidSpec(format!(
                "unknown border policy '{other}'"
            ))),
        }
    }
}

/// A square, odd-sided neighborhood of intensities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    side: usize,
    values: Vec<u8>,
}

impl Window {
    /// Builds a window from `side * side` row-major values.
    pub fn from_values(side: usize, values: Vec<u8>) -> Result<Self> {
        check_side(side)?;
        if values.len() != side * side {
            return Err(Error::Shape(format!(
                "window of side {side} needs {} values, got {}",
                side * side,
                values.len()
            )));
        }
        Ok(Self { side, values })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    /// The pixel at the geometric center.
    pub fn center_value(&self) -> u8 {
        self.values[self.values.len() / 2]
    }

    /// Minimum, median and maximum of the window's values.
    pub fn stats(&self) -> WindowStats {
        let mut sorted = self.values.clone();
        sorted.sort_unstable();
        WindowStats {
            s_min: sorted[0],
            s_med: sorted[sorted.len() / 2],
            s_max: sorted[sorted.len() - 1],
        }
    }
}

/// Order statistics of one window. Always `s_min <= s_med <= s_max`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct WindowStats {
    pub s_min: u8,
    pub s_med: u8,
    pub s_max: u8,
}

impl WindowStats {
    /// True when the median lies strictly between the extremes.
    #[inline]
    pub fn median_is_interior(&self) -> bool {
        self.s_min < self.s_med && self.s_med < self.s_max
    }

    /// True when `value` lies strictly between the extremes.
    #[inline]
    pub fn separates(&self, value: u8) -> bool {
        self.s_min < value && value < self.s_max
    }
}
