//! Orthonormal 2-D DCT-II on square blocks.
//!
//! With the basis matrix `C[p][n] = a(p) cos(pi (2n + 1) p / 2N)`, where
//! `a(0) = sqrt(1/N)` and `a(p) = sqrt(2/N)` otherwise, the forward transform
//! is `Y = C X C^T` and the inverse is `X = C^T Y C`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::imagecore::PixelGrid;

/// N×N transform coefficients, row `p`, column `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct DctSpectrum {
    size: usize,
    coeffs: Vec<f64>,
}

impl DctSpectrum {
    pub fn new(size: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_size(size)?;
        if coeffs.len() != size * size {
            return Err(Error::Dimension(format!(
                "{} coefficients for a {size}x{size} spectrum",
                coeffs.len()
            )));
        }
        Ok(Self { size, coeffs })
    }

    pub fn zeros(size: usize) -> Result<Self> {
        Self::new(size, vec![0.0; size * size])
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize) -> f64 {
        self.coeffs[p * self.size + q]
    }

    pub fn set(&mut self, p: usize, q: usize, value: f64) {
        self.coeffs[p * self.size + q] = value;
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }
}

fn check_size(size: usize) -> Result<()> {
    if size < 2 {
        return Err(Error::Dimension(format!(
            "block size {size} is degenerate (need at least 2)"
        )));
    }
    Ok(())
}

/// Precomputed basis for one block size.
#[derive(Debug, Clone)]
pub struct Dct2 {
    size: usize,
    /// `basis[p * size + n]`
    basis: Vec<f64>,
}

impl Dct2 {
    pub fn new(size: usize) -> Result<Self> {
        check_size(size)?;
        let n = size as f64;
        let mut basis = Vec::with_capacity(size * size);
        for p in 0..size {
            let scale = if p == 0 { (1.0 / n).sqrt() } else { (2.0 / n).sqrt() };
            for k in 0..size {
                basis.push(scale * (PI * (2 * k + 1) as f64 * p as f64 / (2.0 * n)).cos());
            }
        }
        Ok(Self { size, basis })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Basis value `C[p][n]`.
    #[inline]
    pub fn basis(&self, p: usize, n: usize) -> f64 {
        self.basis[p * self.size + n]
    }

    fn check_block(&self, block: &PixelGrid) -> Result<()> {
        if !block.is_square() || block.height() != self.size {
            return Err(Error::Dimension(format!(
                "expected a {0}x{0} block, got {1}x{2}",
                self.size,
                block.height(),
                block.width()
            )));
        }
        Ok(())
    }

    pub fn forward(&self, block: &PixelGrid) -> Result<DctSpectrum> {
        self.check_block(block)?;
        let mut out = vec![0.0; self.size * self.size];
        self.forward_into(block.values(), &mut out);
        Ok(DctSpectrum {
            size: self.size,
            coeffs: out,
        })
    }

    /// Forward transform of a row-major `size*size` slice into `out`.
    pub fn forward_into(&self, block: &[f64], out: &mut [f64]) {
        let n = self.size;
        let c = &self.basis;
        // tmp = C X
        let mut tmp = vec![0.0; n * n];
        for p in 0..n {
            let row = &mut tmp[p * n..(p + 1) * n];
            for k in 0..n {
                let cpk = c[p * n + k];
                let xrow = &block[k * n..(k + 1) * n];
                for (t, &x) in row.iter_mut().zip(xrow) {
                    *t += cpk * x;
                }
            }
        }
        // Y = tmp C^T
        for p in 0..n {
            let trow = &tmp[p * n..(p + 1) * n];
            for q in 0..n {
                let crow = &c[q * n..(q + 1) * n];
                out[p * n + q] = trow.iter().zip(crow).map(|(a, b)| a * b).sum();
            }
        }
    }

    pub fn inverse(&self, spectrum: &DctSpectrum) -> Result<PixelGrid> {
        if spectrum.size != self.size {
            return Err(Error::Dimension(format!(
                "expected a {0}x{0} spectrum, got {1}x{1}",
                self.size, spectrum.size
            )));
        }
        let n = self.size;
        let c = &self.basis;
        let y = &spectrum.coeffs;
        // tmp = C^T Y
        let mut tmp = vec![0.0; n * n];
        for p in 0..n {
            let yrow = &y[p * n..(p + 1) * n];
            for k in 0..n {
                let cpk = c[p * n + k];
                let row = &mut tmp[k * n..(k + 1) * n];
                for (t, &v) in row.iter_mut().zip(yrow) {
                    *t += cpk * v;
                }
            }
        }
        // X = tmp C
        let mut out = vec![0.0; n * n];
        for k in 0..n {
            let trow = &tmp[k * n..(k + 1) * n];
            let orow = &mut out[k * n..(k + 1) * n];
            for (q, &t) in trow.iter().enumerate() {
                let crow = &c[q * n..(q + 1) * n];
                for (o, &cq) in orow.iter_mut().zip(crow) {
                    *o += t * cq;
                }
            }
        }
        PixelGrid::new(n, n, out)
    }
}

pub fn dct2_forward(block: &PixelGrid) -> Result<DctSpectrum> {
    if !block.is_square() {
        return Err(Error::Dimension(format!(
            "block must be square, got {}x{}",
            block.height(),
            block.width()
        )));
    }
    Dct2::new(block.height())?.forward(block)
}

pub fn dct2_inverse(spectrum: &DctSpectrum) -> Result<PixelGrid> {
    Dct2::new(spectrum.size)?.inverse(spectrum)
}

pub fn l1_norm(spectrum: &DctSpectrum) -> f64 {
    spectrum.l1_norm()
}

/// Spectra of unit impulses at every pixel position of an N×N block.
///
/// The spectrum of `δ(n-k, m-l)` is the outer product `C[p][k] C[q][l]`, so
/// the table keeps the N×N basis and forms entries on demand. Memory stays at
/// O(N²), which matters when a whole image is transformed as one block.
#[derive(Debug, Clone)]
pub struct ImpulseSpectrumTable {
    dct: Dct2,
    /// `columns[k * size + p] = C[p][k]`
    columns: Vec<f64>,
}

impl ImpulseSpectrumTable {
    pub fn new(size: usize) -> Result<Self> {
        let dct = Dct2::new(size)?;
        let mut columns = Vec::with_capacity(size * size);
        for k in 0..size {
            for p in 0..size {
                columns.push(dct.basis(p, k));
            }
        }
        Ok(Self { dct, columns })
    }

    pub fn size(&self) -> usize {
        self.dct.size
    }

    pub fn dct(&self) -> &Dct2 {
        &self.dct
    }

    /// Basis column `C[.][k]`: the 1-D spectrum of an impulse at `k`.
    #[inline]
    pub fn column(&self, k: usize) -> &[f64] {
        let n = self.dct.size;
        &self.columns[k * n..(k + 1) * n]
    }

    pub fn entry(&self, k: usize, l: usize) -> DctSpectrum {
        let (a, b) = (self.column(k), self.column(l));
        let coeffs = a
            .iter()
            .flat_map(|&ap| b.iter().map(move |&bq| ap * bq))
            .collect();
        DctSpectrum {
            size: self.dct.size,
            coeffs,
        }
    }
}

pub fn impulse_table(size: usize) -> Result<ImpulseSpectrumTable> {
    ImpulseSpectrumTable::new(size)
}
