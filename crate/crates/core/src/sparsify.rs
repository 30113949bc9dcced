//! Keep-K sparsification in the block DCT domain.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::imagecore::{tile_blocks, untile_blocks, Mask, PixelGrid};
use crate::transform::Dct2;

/// Number of DCT coefficients retained per block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SparsitySpec {
    pub keep_k: usize,
}

impl SparsitySpec {
    pub fn new(keep_k: usize) -> Self {
        Self { keep_k }
    }

    fn check(&self, block: usize) -> Result<()> {
        if self.keep_k == 0 || self.keep_k > block * block {
            return Err(Error::Parameter(format!(
                "keep_k = {} outside 1..={} for {block}x{block} blocks",
                self.keep_k,
                block * block
            )));
        }
        Ok(())
    }
}

/// Zeroes all but the `keep_k` largest-magnitude coefficients of `block`'s
/// spectrum and transforms back. Equal magnitudes at the cut are resolved in
/// favour of the lower row-major index.
pub fn sparsify_block(block: &PixelGrid, spec: SparsitySpec) -> Result<PixelGrid> {
    if !block.is_square() {
        return Err(Error::Dimension(format!(
            "block must be square, got {}x{}",
            block.height(),
            block.width()
        )));
    }
    let dct = Dct2::new(block.height())?;
    sparsify_with(&dct, block, spec)
}

fn sparsify_with(dct: &Dct2, block: &PixelGrid, spec: SparsitySpec) -> Result<PixelGrid> {
    spec.check(dct.size())?;
    let mut spectrum = dct.forward(block)?;
    keep_largest(spectrum.coeffs_mut(), spec.keep_k);
    dct.inverse(&spectrum)
}

/// Zeroes all but the `keep` largest magnitudes; ties go to the lower index.
fn keep_largest(coeffs: &mut [f64], keep: usize) {
    let mut order: Vec<usize> = (0..coeffs.len()).collect();
    order.sort_by(|&a, &b| coeffs[b].abs().total_cmp(&coeffs[a].abs()).then(a.cmp(&b)));
    for &i in &order[keep.min(coeffs.len())..] {
        coeffs[i] = 0.0;
    }
}

/// Applies [`sparsify_block`] to every `block`x`block` tile.
pub fn sparsify_image(grid: &PixelGrid, block: usize, spec: SparsitySpec) -> Result<PixelGrid> {
    let dct = Dct2::new(block)?;
    spec.check(block)?;
    let mask = Mask::all_available(grid.height(), grid.width());
    let tiles = tile_blocks(grid, &mask, block)?;
    let out = tiles
        .par_iter()
        .map(|t| sparsify_with(&dct, &t.block, spec))
        .collect::<Result<Vec<_>>>()?;
    untile_blocks(
        out.iter().zip(tiles.iter().map(|t| t.origin)),
        grid.height(),
        grid.width(),
    )
}
