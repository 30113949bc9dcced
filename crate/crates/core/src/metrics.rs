//! MSE and PSNR against a reference image (peak 255).

use std::fmt;

use crate::error::{Error, Result};
use crate::imagecore::{ChannelSet, PixelGrid};

pub const PEAK: f64 = 255.0;

/// PSNR in dB; `Infinite` for identical images.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum Psnr {
    Finite(f64),
    Infinite,
}

impl Psnr {
    pub fn from_mse(mse: f64) -> Self {
        if mse == 0.0 {
            Psnr::Infinite
        } else {
            Psnr::Finite(10.0 * (PEAK * PEAK / mse).log10())
        }
    }

    /// `f64::INFINITY` for identical images.
    pub fn db(self) -> f64 {
        match self {
            Psnr::Finite(v) => v,
            Psnr::Infinite => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Psnr::Finite(_))
    }
}

impl fmt::Display for Psnr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psnr::Finite(v) => write!(f, "{v:.4}"),
            Psnr::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityScore {
    pub mse: f64,
    pub psnr: Psnr,
}

impl QualityScore {
    pub fn from_mse(mse: f64) -> Self {
        Self {
            mse,
            psnr: Psnr::from_mse(mse),
        }
    }
}

fn sum_squared(a: &PixelGrid, b: &PixelGrid) -> Result<f64> {
    if a.dims() != b.dims() {
        return Err(Error::Dimension(format!(
            "cannot compare {}x{} with {}x{}",
            a.height(),
            a.width(),
            b.height(),
            b.width()
        )));
    }
    Ok(a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y) * (x - y))
        .sum())
}

pub fn mse(a: &PixelGrid, b: &PixelGrid) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::Dimension("mse of empty grids".into()));
    }
    Ok(sum_squared(a, b)? / a.len() as f64)
}

pub fn psnr(a: &PixelGrid, b: &PixelGrid) -> Result<Psnr> {
    mse(a, b).map(Psnr::from_mse)
}

pub fn score(a: &PixelGrid, b: &PixelGrid) -> Result<QualityScore> {
    mse(a, b).map(QualityScore::from_mse)
}

/// Mean over every pixel of every channel.
pub fn score_channels(a: &ChannelSet, b: &ChannelSet) -> Result<QualityScore> {
    if a.channel_count() != b.channel_count() {
        return Err(Error::Dimension(format!(
            "{} channels vs {}",
            a.channel_count(),
            b.channel_count()
        )));
    }
    let mut total = 0.0;
    let mut count = 0;
    for (x, y) in a.channels().iter().zip(b.channels()) {
        total += sum_squared(x, y)?;
        count += x.len();
    }
    if count == 0 {
        return Err(Error::Dimension("mse of empty images".into()));
    }
    Ok(QualityScore::from_mse(total / count as f64))
}
