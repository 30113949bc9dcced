//! Image containers, availability masks, block tiling and channel handling.
//!
//! Every raster is stored row-major as `f64` samples. Files on disk are 8-bit
//! (see [`pnm`]); values are only quantized when writing.

pub mod pnm;

use crate::error::{Error, Result};

/// A real-valued raster, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PixelGrid {
    height: usize,
    width: usize,
    values: Vec<f64>,
}

impl PixelGrid {
    pub fn new(height: usize, width: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != height * width {
            return Err(Error::Dimension(format!(
                "{} values for a {height}x{width} grid",
                values.len()
            )));
        }
        Ok(Self {
            height,
            width,
            values,
        })
    }

    pub fn filled(height: usize, width: usize, value: f64) -> Self {
        Self {
            height,
            width,
            values: vec![value; height * width],
        }
    }

    pub fn zeros(height: usize, width: usize) -> Self {
        Self::filled(height, width, 0.0)
    }

    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(height * width);
        for r in 0..height {
            for c in 0..width {
                values.push(f(r, c));
            }
        }
        Self {
            height,
            width,
            values,
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_square(&self) -> bool {
        self.height == self.width
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.values[row * self.width + col] = value;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            height: self.height,
            width: self.width,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Position of the first non-finite sample, if any.
    pub fn first_non_finite(&self) -> Option<(usize, usize, f64)> {
        self.values
            .iter()
            .position(|v| !v.is_finite())
            .map(|i| (i / self.width, i % self.width, self.values[i]))
    }

    /// Copies the `height`x`width` window whose top-left corner is `origin`.
    pub fn window(&self, origin: (usize, usize), height: usize, width: usize) -> Self {
        let (r0, c0) = origin;
        let mut values = Vec::with_capacity(height * width);
        for r in r0..r0 + height {
            let start = r * self.width + c0;
            values.extend_from_slice(&self.values[start..start + width]);
        }
        Self {
            height,
            width,
            values,
        }
    }

    /// Top-left `height`x`width` region.
    pub fn crop(&self, height: usize, width: usize) -> Result<Self> {
        if height > self.height || width > self.width {
            return Err(Error::Dimension(format!(
                "cannot crop {}x{} to {height}x{width}",
                self.height, self.width
            )));
        }
        Ok(self.window((0, 0), height, width))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Per-pixel availability; `true` marks a known pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    height: usize,
    width: usize,
    available: Vec<bool>,
}

impl Mask {
    pub fn new(height: usize, width: usize, available: Vec<bool>) -> Result<Self> {
        if available.len() != height * width {
            return Err(Error::Dimension(format!(
                "{} flags for a {height}x{width} mask",
                available.len()
            )));
        }
        Ok(Self {
            height,
            width,
            available,
        })
    }

    pub fn all_available(height: usize, width: usize) -> Self {
        Self {
            height,
            width,
            available: vec![true; height * width],
        }
    }

    pub fn none_available(height: usize, width: usize) -> Self {
        Self {
            height,
            width,
            available: vec![false; height * width],
        }
    }

    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut available = Vec::with_capacity(height * width);
        for r in 0..height {
            for c in 0..width {
                available.push(f(r, c));
            }
        }
        Self {
            height,
            width,
            available,
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    #[inline]
    pub fn is_available(&self, row: usize, col: usize) -> bool {
        self.available[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, available: bool) {
        self.available[row * self.width + col] = available;
    }

    pub fn flags(&self) -> &[bool] {
        &self.available
    }

    pub fn available_count(&self) -> usize {
        self.available.iter().filter(|&&a| a).count()
    }

    pub fn missing_count(&self) -> usize {
        self.available.len() - self.available_count()
    }

    pub fn is_fully_available(&self) -> bool {
        self.available.iter().all(|&a| a)
    }

    /// Row-major linear indices of the missing pixels.
    pub fn missing_indices(&self) -> Vec<usize> {
        self.available
            .iter()
            .enumerate()
            .filter_map(|(i, &a)| (!a).then_some(i))
            .collect()
    }

    pub fn window(&self, origin: (usize, usize), height: usize, width: usize) -> Self {
        let (r0, c0) = origin;
        let mut available = Vec::with_capacity(height * width);
        for r in r0..r0 + height {
            let start = r * self.width + c0;
            available.extend_from_slice(&self.available[start..start + width]);
        }
        Self {
            height,
            width,
            available,
        }
    }

    pub fn crop(&self, height: usize, width: usize) -> Result<Self> {
        if height > self.height || width > self.width {
            return Err(Error::Dimension(format!(
                "cannot crop {}x{} mask to {height}x{width}",
                self.height, self.width
            )));
        }
        Ok(self.window((0, 0), height, width))
    }

    /// Renders as an 8-bit grid: 255 = available, 0 = missing.
    pub fn to_grid(&self) -> PixelGrid {
        PixelGrid {
            height: self.height,
            width: self.width,
            values: self
                .available
                .iter()
                .map(|&a| if a { 255.0 } else { 0.0 })
                .collect(),
        }
    }

    /// Inverse of [`Mask::to_grid`]. Any nonzero sample counts as available.
    pub fn from_grid(grid: &PixelGrid) -> Self {
        Self {
            height: grid.height,
            width: grid.width,
            available: grid.values.iter().map(|&v| v != 0.0).collect(),
        }
    }
}

/// One grayscale grid or three RGB grids of identical size.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    channels: Vec<PixelGrid>,
}

impl ChannelSet {
    pub fn gray(grid: PixelGrid) -> Self {
        Self {
            channels: vec![grid],
        }
    }

    pub fn rgb(r: PixelGrid, g: PixelGrid, b: PixelGrid) -> Result<Self> {
        merge_channels(vec![r, g, b])
    }

    pub fn channels(&self) -> &[PixelGrid] {
        &self.channels
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    pub fn is_color(&self) -> bool {
        self.channels.len() == 3
    }

    pub fn dims(&self) -> (usize, usize) {
        self.channels[0].dims()
    }

    pub fn map_channels(&self, f: impl Fn(&PixelGrid) -> PixelGrid) -> Result<Self> {
        merge_channels(self.channels.iter().map(f).collect())
    }
}

pub fn split_channels(set: ChannelSet) -> Vec<PixelGrid> {
    set.channels
}

pub fn merge_channels(grids: Vec<PixelGrid>) -> Result<ChannelSet> {
    if grids.len() != 1 && grids.len() != 3 {
        return Err(Error::Dimension(format!(
            "expected 1 or 3 channels, got {}",
            grids.len()
        )));
    }
    let dims = grids[0].dims();
    if let Some(bad) = grids.iter().find(|g| g.dims() != dims) {
        return Err(Error::Dimension(format!(
            "channel of {}x{} does not match {}x{}",
            bad.height, bad.width, dims.0, dims.1
        )));
    }
    Ok(ChannelSet { channels: grids })
}

/// An N×N piece of a larger grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Tile {
    pub origin: (usize, usize),
    pub block: PixelGrid,
    pub mask: Mask,
}

/// Cuts `grid` and `mask` into non-overlapping `block`x`block` tiles, row-major.
pub fn tile_blocks(grid: &PixelGrid, mask: &Mask, block: usize) -> Result<Vec<Tile>> {
    if grid.dims() != mask.dims() {
        return Err(Error::Dimension(format!(
            "grid {}x{} vs mask {}x{}",
            grid.height, grid.width, mask.height, mask.width
        )));
    }
    if block == 0 || !grid.height.is_multiple_of(block) || !grid.width.is_multiple_of(block) {
        return Err(Error::Tiling {
            height: grid.height,
            width: grid.width,
            block,
        });
    }
    let mut tiles = Vec::with_capacity((grid.height / block) * (grid.width / block));
    for r in (0..grid.height).step_by(block) {
        for c in (0..grid.width).step_by(block) {
            tiles.push(Tile {
                origin: (r, c),
                block: grid.window((r, c), block, block),
                mask: mask.window((r, c), block, block),
            });
        }
    }
    Ok(tiles)
}

/// Writes each block at its origin. The blocks must cover the target exactly once.
pub fn untile_blocks<'a, I>(blocks: I, height: usize, width: usize) -> Result<PixelGrid>
where
    I: IntoIterator<Item = (&'a PixelGrid, (usize, usize))>,
{
    let mut out = PixelGrid::zeros(height, width);
    let mut written = vec![false; height * width];
    for (block, (r0, c0)) in blocks {
        if r0 + block.height > height || c0 + block.width > width {
            return Err(Error::Assembly(format!(
                "{}x{} block at ({r0}, {c0}) exceeds {height}x{width}",
                block.height, block.width
            )));
        }
        for r in 0..block.height {
            for c in 0..block.width {
                let i = (r0 + r) * width + c0 + c;
                if written[i] {
                    return Err(Error::Assembly(format!(
                        "pixel ({}, {}) written twice",
                        r0 + r,
                        c0 + c
                    )));
                }
                written[i] = true;
                out.values[i] = block.get(r, c);
            }
        }
    }
    if let Some(i) = written.iter().position(|&w| !w) {
        return Err(Error::Assembly(format!(
            "pixel ({}, {}) not covered",
            i / width,
            i % width
        )));
    }
    Ok(out)
}

/// Grid and mask grown to multiples of the block size, plus the original size.
#[derive(Debug, Clone)]
pub struct Padded {
    pub grid: PixelGrid,
    pub mask: Mask,
    pub original: (usize, usize),
}

/// Edge-replicates the right and bottom borders up to the next multiple of
/// `block`. Padded pixels are marked available.
pub fn pad_to_multiple(grid: &PixelGrid, mask: &Mask, block: usize) -> Result<Padded> {
    if grid.dims() != mask.dims() {
        return Err(Error::Dimension(format!(
            "grid {}x{} vs mask {}x{}",
            grid.height, grid.width, mask.height, mask.width
        )));
    }
    if block == 0 {
        return Err(Error::Parameter("block size must be positive".into()));
    }
    if grid.is_empty() {
        return Err(Error::Dimension("cannot pad an empty grid".into()));
    }
    let (h, w) = grid.dims();
    let ph = h.div_ceil(block) * block;
    let pw = w.div_ceil(block) * block;
    let padded_grid = PixelGrid::from_fn(ph, pw, |r, c| grid.get(r.min(h - 1), c.min(w - 1)));
    let padded_mask = Mask::from_fn(ph, pw, |r, c| {
        if r < h && c < w {
            mask.is_available(r, c)
        } else {
            true
        }
    });
    Ok(Padded {
        grid: padded_grid,
        mask: padded_mask,
        original: (h, w),
    })
}

/// Clamps to `[0, 255]` and rounds half away from zero.
pub fn clamp_quantize(grid: &PixelGrid) -> Result<PixelGrid> {
    if let Some((row, col, value)) = grid.first_non_finite() {
        return Err(Error::NonFinite { row, col, value });
    }
    Ok(grid.map(|v| v.clamp(0.0, 255.0).round()))
}
