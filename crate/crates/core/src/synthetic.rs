//! Seeded test images.

use std::f64::consts::PI;

use rand::{seq::index::sample, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::imagecore::PixelGrid;
use crate::transform::{dct2_inverse, DctSpectrum};

/// A smooth, photo-like scene: a few low-frequency waves over a tilted
/// background plus two soft-edged discs. Values stay within `[16, 239]`.
pub fn scene(height: usize, width: usize, seed: u64) -> PixelGrid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let waves: Vec<(f64, f64, f64, f64)> = (0..4)
        .map(|_| {
            (
                rng.gen_range(10.0..30.0),
                rng.gen_range(0.5..3.0),
                rng.gen_range(0.5..3.0),
                rng.gen_range(0.0..2.0 * PI),
            )
        })
        .collect();
    let discs: Vec<(f64, f64, f64, f64)> = (0..2)
        .map(|_| {
            (
                rng.gen_range(0.2..0.8),
                rng.gen_range(0.2..0.8),
                rng.gen_range(0.1..0.25),
                rng.gen_range(-60.0..60.0),
            )
        })
        .collect();
    let tilt = (rng.gen_range(-30.0..30.0), rng.gen_range(-30.0..30.0));
    PixelGrid::from_fn(height, width, |r, c| {
        let y = r as f64 / height as f64;
        let x = c as f64 / width as f64;
        let mut v = 128.0 + tilt.0 * (y - 0.5) + tilt.1 * (x - 0.5);
        for &(amp, fy, fx, phase) in &waves {
            v += amp * (2.0 * PI * (fy * y + fx * x) + phase).sin();
        }
        for &(cy, cx, radius, amp) in &discs {
            let d = ((y - cy).powi(2) + (x - cx).powi(2)).sqrt();
            // logistic edge about two pixels wide
            let edge = 1.0 / (1.0 + ((d - radius) * height as f64 / 2.0).exp());
            v += amp * edge;
        }
        v.clamp(16.0, 239.0)
    })
}

/// A block with exactly `keep_k` nonzero DCT coefficients: a DC term giving a
/// mean in `[64, 192]` and `keep_k - 1` AC terms with magnitudes in
/// `[20, 150]` at random positions.
pub fn sparse_block(size: usize, keep_k: usize, seed: u64) -> Result<PixelGrid> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spectrum = DctSpectrum::zeros(size)?;
    spectrum.set(0, 0, rng.gen_range(64.0..192.0) * size as f64);
    if keep_k > 1 {
        for i in sample(&mut rng, size * size - 1, keep_k - 1) {
            let idx = i + 1;
            let magnitude = rng.gen_range(20.0..150.0);
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            spectrum.coeffs_mut()[idx] = sign * magnitude;
        }
    }
    dct2_inverse(&spectrum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::dct2_forward;

    #[test]
    fn scene_is_seeded_and_in_range() {
        let a = scene(32, 48, 3);
        assert_eq!(a, scene(32, 48, 3));
        assert_ne!(a, scene(32, 48, 4));
        assert!(a.values().iter().all(|v| (16.0..=239.0).contains(v)));
    }

    #[test]
    fn sparse_block_has_k_terms() {
        for seed in 0..10 {
            let b = sparse_block(8, 4, seed).unwrap();
            let y = dct2_forward(&b).unwrap();
            let nz = y.coeffs().iter().filter(|c| c.abs() > 1e-9).count();
            assert_eq!(nz, 4);
        }
    }
}
