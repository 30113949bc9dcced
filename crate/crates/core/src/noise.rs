//! Salt-and-pepper corruption, its conversion into a missing-pixel problem,
//! and the median-filter baseline.
//!
//! All randomness goes through a seeded ChaCha8 stream and a partial
//! Fisher–Yates shuffle drawing `u64` indices, so corrupted positions are the
//! same on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::imagecore::{ChannelSet, Mask, PixelGrid};

pub const SALT: f64 = 255.0;
pub const PEPPER: f64 = 0.0;
/// Starting value for discarded impulse pixels.
pub const NEUTRAL: f64 = 128.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    /// Fraction of pixels corrupted.
    pub density: f64,
    pub seed: u64,
    /// Fraction of corrupted pixels that become salt (255) rather than pepper.
    pub salt_fraction: f64,
}

impl NoiseSpec {
    pub fn new(density: f64, seed: u64) -> Self {
        Self {
            density,
            seed,
            salt_fraction: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_density(self.density)?;
        if !(0.0..=1.0).contains(&self.salt_fraction) {
            return Err(Error::Parameter(format!(
                "salt_fraction {} outside [0, 1]",
                self.salt_fraction
            )));
        }
        Ok(())
    }
}

fn check_density(density: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Parameter(format!("density {density} outside [0, 1]")));
    }
    Ok(())
}

/// `count` distinct indices from `0..total` via a partial Fisher–Yates shuffle.
pub fn choose_positions(rng: &mut ChaCha8Rng, total: usize, count: usize) -> Vec<usize> {
    assert!(count <= total);
    let mut pool: Vec<usize> = (0..total).collect();
    for i in 0..count {
        let j = i + rng.gen_range(0..(total - i) as u64) as usize;
        pool.swap(i, j);
    }
    pool.truncate(count);
    pool
}

fn corrupted_count(density: f64, total: usize) -> usize {
    ((density * total as f64).round() as usize).min(total)
}

/// Mask with exactly `round(density * H * W)` missing pixels.
pub fn random_missing_mask(height: usize, width: usize, density: f64, seed: u64) -> Result<Mask> {
    check_density(density)?;
    let total = height * width;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mask = Mask::all_available(height, width);
    for i in choose_positions(&mut rng, total, corrupted_count(density, total)) {
        mask.set(i / width, i % width, false);
    }
    Ok(mask)
}

struct Impulses {
    positions: Vec<usize>,
    values: Vec<f64>,
}

fn draw_impulses(total: usize, spec: &NoiseSpec) -> Result<Impulses> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let positions = choose_positions(&mut rng, total, corrupted_count(spec.density, total));
    let values = positions
        .iter()
        .map(|_| if rng.gen::<f64>() < spec.salt_fraction { SALT } else { PEPPER })
        .collect();
    Ok(Impulses { positions, values })
}

fn apply_impulses(grid: &PixelGrid, imp: &Impulses) -> (PixelGrid, Mask) {
    let (h, w) = grid.dims();
    let mut out = grid.clone();
    let mut mask = Mask::all_available(h, w);
    for (&i, &v) in imp.positions.iter().zip(&imp.values) {
        out.values_mut()[i] = v;
        mask.set(i / w, i % w, false);
    }
    (out, mask)
}

/// Corrupts `round(density * H * W)` distinct pixels. The returned mask marks
/// the corrupted pixels as unavailable.
pub fn add_salt_pepper(grid: &PixelGrid, spec: &NoiseSpec) -> Result<(PixelGrid, Mask)> {
    let imp = draw_impulses(grid.len(), spec)?;
    Ok(apply_impulses(grid, &imp))
}

/// Color variant: the same pixels are hit in every channel with the same
/// impulse value.
pub fn add_salt_pepper_channels(set: &ChannelSet, spec: &NoiseSpec) -> Result<(ChannelSet, Mask)> {
    let (h, w) = set.dims();
    let imp = draw_impulses(h * w, spec)?;
    let mut mask = Mask::all_available(h, w);
    let grids = set
        .channels()
        .iter()
        .map(|g| {
            let (out, m) = apply_impulses(g, &imp);
            mask = m;
            out
        })
        .collect();
    Ok((crate::imagecore::merge_channels(grids)?, mask))
}

/// Marks every 0 or 255 pixel unavailable and resets it to 128; everything
/// else is copied and marked available. Clean pixels that happen to be 0 or
/// 255 are discarded too.
pub fn detect_salt_pepper(grid: &PixelGrid) -> (PixelGrid, Mask) {
    let (h, w) = grid.dims();
    let mut out = grid.clone();
    let mut mask = Mask::all_available(h, w);
    for (i, v) in out.values_mut().iter_mut().enumerate() {
        if *v == SALT || *v == PEPPER {
            *v = NEUTRAL;
            mask.set(i / w, i % w, false);
        }
    }
    (out, mask)
}

/// Affine map of `[0, 255]` onto `[1, 254]` so that clean content never
/// collides with impulse values.
pub fn prescale(grid: &PixelGrid) -> PixelGrid {
    grid.map(|v| 1.0 + v * 253.0 / 255.0)
}

/// Median over a `window`x`window` neighbourhood with edge replication.
pub fn median_filter(grid: &PixelGrid, window: usize) -> Result<PixelGrid> {
    if window != 3 && window != 5 {
        return Err(Error::Parameter(format!(
            "median window must be 3 or 5, got {window}"
        )));
    }
    if grid.is_empty() {
        return Err(Error::Dimension("median of an empty grid".into()));
    }
    let (h, w) = grid.dims();
    let r = (window / 2) as isize;
    let clamp = |v: isize, max: usize| v.clamp(0, max as isize - 1) as usize;
    let mut hood = Vec::with_capacity(window * window);
    Ok(PixelGrid::from_fn(h, w, |row, col| {
        hood.clear();
        for dr in -r..=r {
            let rr = clamp(row as isize + dr, h);
            for dc in -r..=r {
                hood.push(grid.get(rr, clamp(col as isize + dc, w)));
            }
        }
        let mid = hood.len() / 2;
        *hood.select_nth_unstable_by(mid, f64::total_cmp).1
    }))
}
