//! Gradient reconstruction of missing pixels.
//!
//! The objective is the L1 norm of a block's 2-D DCT spectrum. Its partial
//! derivative with respect to each missing pixel is estimated by a central
//! difference with step `delta`, all missing pixels move together against the
//! estimate (a Jacobi step of size `mu`), and both `delta` and `mu` shrink by
//! a constant factor whenever the objective stops improving. Known pixels are
//! never touched.
//!
//! The perturbed spectra are formed as `Y ± delta * B_kl` where `B_kl` is the
//! spectrum of a unit impulse at `(k, l)`, so each iteration costs one forward
//! transform plus O(N²) work per missing pixel.

use std::fmt::{self, Write as _};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::imagecore::{
    merge_channels, pad_to_multiple, tile_blocks, untile_blocks, ChannelSet, Mask, PixelGrid,
};
use crate::transform::{dct2_forward, ImpulseSpectrumTable};

/// Relative objective decrease that counts as progress.
pub const IMPROVEMENT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconConfig {
    /// Initial perturbation, in intensity units.
    pub delta0: f64,
    /// Step size `mu` as a multiple of the current `delta`. The default, 1/8,
    /// is 1/N for the default block size; scale it with N for other sizes.
    pub mu_over_delta: f64,
    /// Factor applied to `delta` (and so to `mu`) when progress stalls.
    pub reduction: f64,
    /// Stop once `delta` falls below this.
    pub delta_min: f64,
    /// Iteration cap per block.
    pub max_iters: usize,
    /// Consecutive non-improving iterations tolerated before shrinking.
    pub patience: usize,
    /// Starting value for missing pixels; `None` keeps whatever the input
    /// block holds there.
    pub init_value: Option<f64>,
}

impl Default for ReconConfig {
    fn default() -> Self {
        Self {
            delta0: 128.0,
            mu_over_delta: 1.0 / 8.0,
            reduction: 0.1,
            delta_min: 1e-3,
            max_iters: 2000,
            patience: 1,
            init_value: Some(0.0),
        }
    }
}

impl ReconConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Parameter(msg));
        if !(self.delta_min > 0.0 && self.delta0 > self.delta_min) || !self.delta0.is_finite() {
            return bad(format!(
                "need delta0 > delta_min > 0, got delta0 = {}, delta_min = {}",
                self.delta0, self.delta_min
            ));
        }
        if !(self.reduction > 0.0 && self.reduction < 1.0) {
            return bad(format!("reduction {} not in (0, 1)", self.reduction));
        }
        if !(self.mu_over_delta > 0.0 && self.mu_over_delta.is_finite()) {
            return bad(format!("mu_over_delta {} must be positive", self.mu_over_delta));
        }
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1".into());
        }
        if self.patience == 0 {
            return bad("patience must be at least 1".into());
        }
        if let Some(v) = self.init_value {
            if !v.is_finite() {
                return bad(format!("init_value {v} is not finite"));
            }
        }
        Ok(())
    }
}

/// Gradient estimate per pixel; identically zero at available positions.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientField {
    mask: Mask,
    values: Vec<f64>,
}

impl GradientField {
    /// Entries at available positions of `mask` are forced to zero.
    pub fn new(mask: &Mask, mut values: Vec<f64>) -> Result<Self> {
        if values.len() != mask.height() * mask.width() {
            return Err(Error::Dimension(format!(
                "{} gradient values for a {}x{} mask",
                values.len(),
                mask.height(),
                mask.width()
            )));
        }
        for (v, &avail) in values.iter_mut().zip(mask.flags()) {
            if avail {
                *v = 0.0;
            }
        }
        Ok(Self {
            mask: mask.clone(),
            values,
        })
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.mask.width() + col]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mask(&self) -> &Mask {
        &self.mask
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    DeltaMin,
    MaxIters,
    NoMissing,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::DeltaMin => "delta_min",
            Termination::MaxIters => "max_iters",
            Termination::NoMissing => "no_missing",
        })
    }
}

/// Convergence trace of one block.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconReport {
    /// Top-left pixel of the block within its image.
    pub origin: (usize, usize),
    pub iterations: usize,
    pub reductions: usize,
    pub final_delta: f64,
    /// Objective of the current iterate: the initial value, then one entry
    /// per iteration.
    pub trajectory: Vec<f64>,
    /// `delta` in effect for each iteration.
    pub deltas: Vec<f64>,
    pub termination: Termination,
}

impl ReconReport {
    pub fn initial_objective(&self) -> f64 {
        self.trajectory[0]
    }

    /// Lowest objective reached; this is the objective of the returned block.
    pub fn best_objective(&self) -> f64 {
        self.trajectory.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Appends a `# block ...` header line and one `iter, J, delta` row per
    /// trajectory entry. Row 0 is the starting point.
    pub fn write_text(&self, out: &mut String) {
        let _ = writeln!(
            out,
            "# block origin={},{} iterations={} reductions={} final_delta={} termination={}",
            self.origin.0,
            self.origin.1,
            self.iterations,
            self.reductions,
            self.final_delta,
            self.termination
        );
        for (i, j) in self.trajectory.iter().enumerate() {
            let delta = if i == 0 {
                self.deltas.first().copied().unwrap_or(self.final_delta)
            } else {
                self.deltas[i - 1]
            };
            let _ = writeln!(out, "{i}, {j}, {delta}");
        }
    }
}

/// Renders reports for one or more channels as line-oriented text.
pub fn render_reports(channels: &[Vec<ReconReport>]) -> String {
    let mut out = String::from("# iter, J, delta\n");
    for (ch, reports) in channels.iter().enumerate() {
        if channels.len() > 1 {
            let _ = writeln!(out, "# channel {ch}");
        }
        for r in reports {
            r.write_text(&mut out);
        }
    }
    out
}

fn check_pair(block: &PixelGrid, mask: &Mask) -> Result<()> {
    if block.dims() != mask.dims() {
        return Err(Error::Dimension(format!(
            "block {}x{} vs mask {}x{}",
            block.height(),
            block.width(),
            mask.height(),
            mask.width()
        )));
    }
    Ok(())
}

/// Known pixels keep their value; missing ones are set to `init_value`.
pub fn init_measurement(block: &PixelGrid, mask: &Mask, init_value: f64) -> Result<PixelGrid> {
    check_pair(block, mask)?;
    let mut y = block.clone();
    for (v, &avail) in y.values_mut().iter_mut().zip(mask.flags()) {
        if !avail {
            *v = init_value;
        }
    }
    Ok(y)
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Parameter(format!("delta must be positive, got {delta}")));
    }
    Ok(())
}

fn check_block(y: &PixelGrid, mask: &Mask, size: usize) -> Result<()> {
    check_pair(y, mask)?;
    if !y.is_square() || y.height() != size {
        return Err(Error::Dimension(format!(
            "expected a {size}x{size} block, got {}x{}",
            y.height(),
            y.width()
        )));
    }
    Ok(())
}

/// Central-difference estimate of the spectral L1 gradient at every missing
/// pixel, using the impulse table for the perturbed spectra.
pub fn gradient_estimate(
    y: &PixelGrid,
    mask: &Mask,
    delta: f64,
    table: &ImpulseSpectrumTable,
) -> Result<GradientField> {
    check_delta(delta)?;
    check_block(y, mask, table.size())?;
    let n = table.size();
    let mut spectrum = vec![0.0; n * n];
    table.dct().forward_into(y.values(), &mut spectrum);
    let mut values = vec![0.0; n * n];
    fill_gradient(&spectrum, &mask.missing_indices(), delta, table, &mut values);
    GradientField::new(mask, values)
}

fn fill_gradient(
    spectrum: &[f64],
    missing: &[usize],
    delta: f64,
    table: &ImpulseSpectrumTable,
    out: &mut [f64],
) {
    let n = table.size();
    let inv = 1.0 / (2.0 * delta);
    let mut scaled_row = vec![0.0; n];
    for &idx in missing {
        let (k, l) = (idx / n, idx % n);
        let col_k = table.column(k);
        let col_l = table.column(l);
        let mut diff = 0.0;
        for (p, &ck) in col_k.iter().enumerate() {
            let s = delta * ck;
            for (d, &cl) in scaled_row.iter_mut().zip(col_l) {
                *d = s * cl;
            }
            let yrow = &spectrum[p * n..(p + 1) * n];
            for (&yv, &d) in yrow.iter().zip(&scaled_row) {
                diff += (yv + d).abs() - (yv - d).abs();
            }
        }
        out[idx] = diff * inv;
    }
}

/// Reference gradient: perturbs each missing pixel by `±delta`, runs two full
/// transforms, and differences the L1 norms. Slow; kept for cross-checking
/// [`gradient_estimate`].
pub fn gradient_estimate_literal(y: &PixelGrid, mask: &Mask, delta: f64) -> Result<GradientField> {
    check_delta(delta)?;
    check_pair(y, mask)?;
    let mut values = vec![0.0; y.len()];
    for idx in mask.missing_indices() {
        let (k, l) = (idx / y.width(), idx % y.width());
        let mut plus = y.clone();
        plus.set(k, l, y.get(k, l) + delta);
        let mut minus = y.clone();
        minus.set(k, l, y.get(k, l) - delta);
        let y1 = dct2_forward(&plus)?;
        let y2 = dct2_forward(&minus)?;
        // ||Y1||_1 - ||Y2||_1, differenced per coefficient: subtracting the two
        // totals loses ~eps * J / delta to cancellation at small delta.
        let dj: f64 = y1.coeffs().iter().zip(y2.coeffs()).map(|(a, b)| a.abs() - b.abs()).sum();
        values[idx] = dj / (2.0 * delta);
    }
    GradientField::new(mask, values)
}

/// `y - mu * gradient` at missing pixels; available pixels are copied.
pub fn gradient_step(y: &PixelGrid, gradient: &GradientField, mu: f64) -> Result<PixelGrid> {
    if y.dims() != gradient.mask.dims() {
        return Err(Error::Dimension(format!(
            "block {}x{} vs gradient {}x{}",
            y.height(),
            y.width(),
            gradient.mask.height(),
            gradient.mask.width()
        )));
    }
    let mut out = y.clone();
    for ((v, &g), &avail) in out
        .values_mut()
        .iter_mut()
        .zip(&gradient.values)
        .zip(gradient.mask.flags())
    {
        if !avail {
            *v -= mu * g;
        }
    }
    Ok(out)
}

/// Reusable solver state for one block size.
#[derive(Debug, Clone)]
pub struct BlockSolver {
    table: ImpulseSpectrumTable,
    config: ReconConfig,
}

impl BlockSolver {
    pub fn new(size: usize, config: ReconConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            table: ImpulseSpectrumTable::new(size)?,
            config,
        })
    }

    pub fn size(&self) -> usize {
        self.table.size()
    }

    pub fn config(&self) -> &ReconConfig {
        &self.config
    }

    fn objective(&self, y: &[f64], scratch: &mut [f64]) -> f64 {
        self.table.dct().forward_into(y, scratch);
        scratch.iter().map(|c| c.abs()).sum()
    }

    pub fn solve(&self, block: &PixelGrid, mask: &Mask) -> Result<(PixelGrid, ReconReport)> {
        check_block(block, mask, self.size())?;
        let cfg = &self.config;
        let n = self.size();

        let mut y = match cfg.init_value {
            Some(v) => init_measurement(block, mask, v)?,
            None => block.clone(),
        };
        let mut spectrum = vec![0.0; n * n];
        let initial = self.objective(y.values(), &mut spectrum);

        let mut report = ReconReport {
            origin: (0, 0),
            iterations: 0,
            reductions: 0,
            final_delta: cfg.delta0,
            trajectory: vec![initial],
            deltas: Vec::new(),
            termination: Termination::NoMissing,
        };
        if mask.is_fully_available() {
            return Ok((y, report));
        }
        if !initial.is_finite() {
            return Err(Error::Divergence {
                origin: None,
                report: Box::new(report),
            });
        }

        let missing = mask.missing_indices();
        let mut gradient = vec![0.0; n * n];
        let mut best = y.clone();
        let mut best_j = initial;
        let mut delta = cfg.delta0;
        let mut stalled = 0;

        while report.iterations < cfg.max_iters && delta >= cfg.delta_min {
            self.table.dct().forward_into(y.values(), &mut spectrum);
            fill_gradient(&spectrum, &missing, delta, &self.table, &mut gradient);
            let mu = cfg.mu_over_delta * delta;
            let mut trial = y.clone();
            {
                let values = trial.values_mut();
                for &idx in &missing {
                    values[idx] -= mu * gradient[idx];
                }
            }
            let trial_j = self.objective(trial.values(), &mut spectrum);
            report.iterations += 1;
            report.deltas.push(delta);
            if !trial_j.is_finite() {
                report.trajectory.push(trial_j);
                report.final_delta = delta;
                return Err(Error::Divergence {
                    origin: None,
                    report: Box::new(report),
                });
            }

            let current_j;
            let mut shrink = false;
            if trial_j < best_j * (1.0 - IMPROVEMENT_TOLERANCE) {
                best.clone_from(&trial);
                best_j = trial_j;
                y = trial;
                current_j = trial_j;
                stalled = 0;
            } else if trial_j > best_j * (1.0 + IMPROVEMENT_TOLERANCE) {
                y.clone_from(&best);
                current_j = best_j;
                shrink = true;
            } else {
                if trial_j < best_j {
                    best.clone_from(&trial);
                    best_j = trial_j;
                }
                y = trial;
                current_j = trial_j;
                stalled += 1;
                shrink = stalled >= cfg.patience;
            }
            if shrink {
                delta *= cfg.reduction;
                report.reductions += 1;
                stalled = 0;
            }
            report.trajectory.push(current_j);
        }

        report.final_delta = delta;
        report.termination = if delta < cfg.delta_min {
            Termination::DeltaMin
        } else {
            Termination::MaxIters
        };
        Ok((best, report))
    }
}

/// Runs the solver on a single square block.
pub fn reconstruct_block(
    block: &PixelGrid,
    mask: &Mask,
    config: &ReconConfig,
) -> Result<(PixelGrid, ReconReport)> {
    if !block.is_square() {
        return Err(Error::Dimension(format!(
            "block must be square, got {}x{}",
            block.height(),
            block.width()
        )));
    }
    BlockSolver::new(block.height(), *config)?.solve(block, mask)
}

/// Reconstructs every `block`x`block` tile independently (in parallel) and
/// reassembles. Reports come back in row-major tile order.
pub fn reconstruct_image(
    grid: &PixelGrid,
    mask: &Mask,
    block: usize,
    config: &ReconConfig,
) -> Result<(PixelGrid, Vec<ReconReport>)> {
    let solver = BlockSolver::new(block, *config)?;
    let tiles = tile_blocks(grid, mask, block)?;
    let results: Vec<Result<(PixelGrid, ReconReport)>> = tiles
        .par_iter()
        .map(|t| {
            solver
                .solve(&t.block, &t.mask)
                .map(|(b, mut r)| {
                    r.origin = t.origin;
                    (b, r)
                })
                .map_err(|e| match e {
                    Error::Divergence { mut report, .. } => {
                        report.origin = t.origin;
                        Error::Divergence {
                            origin: Some(t.origin),
                            report,
                        }
                    }
                    other => other,
                })
        })
        .collect();
    // first failure in row-major order, independent of scheduling
    let solved = results.into_iter().collect::<Result<Vec<_>>>()?;
    let image = untile_blocks(
        solved.iter().map(|(b, r)| (b, r.origin)),
        grid.height(),
        grid.width(),
    )?;
    Ok((image, solved.into_iter().map(|(_, r)| r).collect()))
}

/// Like [`reconstruct_image`] but for any size: pads by edge replication,
/// reconstructs, and crops back.
pub fn reconstruct_image_padded(
    grid: &PixelGrid,
    mask: &Mask,
    block: usize,
    config: &ReconConfig,
) -> Result<(PixelGrid, Vec<ReconReport>)> {
    let padded = pad_to_multiple(grid, mask, block)?;
    let (out, reports) = reconstruct_image(&padded.grid, &padded.mask, block, config)?;
    Ok((out.crop(padded.original.0, padded.original.1)?, reports))
}

/// Each channel is reconstructed separately with the shared mask.
pub fn reconstruct_color(
    channels: &ChannelSet,
    mask: &Mask,
    block: usize,
    config: &ReconConfig,
) -> Result<(ChannelSet, Vec<Vec<ReconReport>>)> {
    let masks = vec![mask.clone(); channels.channel_count()];
    reconstruct_channels(channels, &masks, block, config)
}

/// Per-channel reconstruction with one mask per channel. Any image size is
/// accepted; see [`reconstruct_image_padded`].
pub fn reconstruct_channels(
    channels: &ChannelSet,
    masks: &[Mask],
    block: usize,
    config: &ReconConfig,
) -> Result<(ChannelSet, Vec<Vec<ReconReport>>)> {
    if masks.len() != channels.channel_count() {
        return Err(Error::Dimension(format!(
            "{} masks for {} channels",
            masks.len(),
            channels.channel_count()
        )));
    }
    let mut grids = Vec::with_capacity(masks.len());
    let mut reports = Vec::with_capacity(masks.len());
    for (grid, mask) in channels.channels().iter().zip(masks) {
        let (g, r) = reconstruct_image_padded(grid, mask, block, config)?;
        grids.push(g);
        reports.push(r);
    }
    Ok((merge_channels(grids)?, reports))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::impulse_table;
    use rand::{seq::index::sample, Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_block(rng: &mut impl Rng, n: usize) -> PixelGrid {
        PixelGrid::from_fn(n, n, |_, _| rng.gen_range(0.0..255.0))
    }

    fn random_mask(rng: &mut impl Rng, n: usize, missing: usize) -> Mask {
        let mut m = Mask::all_available(n, n);
        for i in sample(rng, n * n, missing) {
            m.set(i / n, i % n, false);
        }
        m
    }

    #[test]
    fn config_validation() {
        assert!(ReconConfig::default().validate().is_ok());
        let bad = [
            ReconConfig { delta0: 1e-4, ..Default::default() },
            ReconConfig { delta_min: 0.0, ..Default::default() },
            ReconConfig { reduction: 1.0, ..Default::default() },
            ReconConfig { reduction: 0.0, ..Default::default() },
            ReconConfig { mu_over_delta: 0.0, ..Default::default() },
            ReconConfig { max_iters: 0, ..Default::default() },
            ReconConfig { patience: 0, ..Default::default() },
            ReconConfig { init_value: Some(f64::NAN), ..Default::default() },
        ];
        for cfg in bad {
            assert!(matches!(cfg.validate(), Err(Error::Parameter(_))), "{cfg:?}");
        }
    }

    #[test]
    fn init_measurement_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = random_block(&mut rng, 8);
        assert_eq!(init_measurement(&x, &Mask::all_available(8, 8), 0.0).unwrap(), x);
        let y = init_measurement(&x, &Mask::none_available(8, 8), 0.0).unwrap();
        assert!(y.values().iter().all(|&v| v == 0.0));
        let m = random_mask(&mut rng, 8, 10);
        let y = init_measurement(&x, &m, 128.0).unwrap();
        for r in 0..8 {
            for c in 0..8 {
                let expect = if m.is_available(r, c) { x.get(r, c) } else { 128.0 };
                assert_eq!(y.get(r, c), expect);
            }
        }
    }

    #[test]
    fn gradient_vanishes_at_zero_block() {
        let table = impulse_table(8).unwrap();
        let m = Mask::none_available(8, 8);
        let g = gradient_estimate(&PixelGrid::zeros(8, 8), &m, 3.0, &table).unwrap();
        assert!(g.values().iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn gradient_zero_at_available() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let table = impulse_table(8).unwrap();
        let y = random_block(&mut rng, 8);
        let m = random_mask(&mut rng, 8, 20);
        let g = gradient_estimate(&y, &m, 1.0, &table).unwrap();
        for r in 0..8 {
            for c in 0..8 {
                if m.is_available(r, c) {
                    assert_eq!(g.get(r, c), 0.0);
                }
            }
        }
        assert!(g.values().iter().any(|&v| v != 0.0));
    }

    #[test]
    fn gradient_matches_literal_single_pixel() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let table = impulse_table(8).unwrap();
        let y = random_block(&mut rng, 8);
        let mut m = Mask::all_available(8, 8);
        m.set(3, 5, false);
        let fast = gradient_estimate(&y, &m, 1.0, &table).unwrap();
        let slow = gradient_estimate_literal(&y, &m, 1.0).unwrap();
        assert!((fast.get(3, 5) - slow.get(3, 5)).abs() < 1e-9);
    }

    #[test]
    fn gradient_rejects_bad_delta() {
        let table = impulse_table(4).unwrap();
        let y = PixelGrid::zeros(4, 4);
        let m = Mask::none_available(4, 4);
        for d in [0.0, -1.0, f64::NAN] {
            assert!(matches!(
                gradient_estimate(&y, &m, d, &table),
                Err(Error::Parameter(_))
            ));
            assert!(gradient_estimate_literal(&y, &m, d).is_err());
        }
        assert!(gradient_estimate(&PixelGrid::zeros(8, 8), &Mask::none_available(8, 8), 1.0, &table).is_err());
    }

    #[test]
    fn step_arithmetic() {
        let mut m = Mask::all_available(4, 4);
        m.set(1, 2, false);
        let y = PixelGrid::filled(4, 4, 10.0);
        let zero = GradientField::new(&m, vec![0.0; 16]).unwrap();
        assert_eq!(gradient_step(&y, &zero, 0.5).unwrap(), y);

        let mut vals = vec![7.0; 16];
        vals[6] = 2.0;
        let g = GradientField::new(&m, vals).unwrap();
        // available entries were forced to zero
        assert_eq!(g.get(0, 0), 0.0);
        let out = gradient_step(&y, &g, 0.5).unwrap();
        assert_eq!(out.get(1, 2), 9.0);
        let changed = out.values().iter().filter(|&&v| v != 10.0).count();
        assert_eq!(changed, 1);
    }

    #[test]
    fn all_available_block_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = random_block(&mut rng, 8);
        let (y, report) = reconstruct_block(&x, &Mask::all_available(8, 8), &Default::default()).unwrap();
        assert_eq!(y, x);
        assert_eq!(report.iterations, 0);
        assert_eq!(report.termination, Termination::NoMissing);
        assert_eq!(report.trajectory.len(), 1);
    }

    #[test]
    fn recovers_constant_block() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = PixelGrid::filled(8, 8, 140.0);
        let m = random_mask(&mut rng, 8, 16);
        let (y, report) = reconstruct_block(&x, &m, &Default::default()).unwrap();
        assert!(y.max_abs_diff(&x) < 1e-2, "err {}", y.max_abs_diff(&x));
        assert_eq!(report.trajectory.len(), report.iterations + 1);
        assert!(report.best_objective() <= report.initial_objective());
    }

    #[test]
    fn non_finite_input_diverges() {
        let mut x = PixelGrid::filled(8, 8, 1.0);
        x.set(0, 0, f64::INFINITY);
        let mut m = Mask::all_available(8, 8);
        m.set(4, 4, false);
        match reconstruct_block(&x, &m, &Default::default()) {
            Err(Error::Divergence { report, .. }) => assert_eq!(report.iterations, 0),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn keep_existing_values_when_init_is_none() {
        let x = PixelGrid::filled(8, 8, 50.0);
        let mut m = Mask::all_available(8, 8);
        m.set(2, 2, false);
        let cfg = ReconConfig { init_value: None, ..Default::default() };
        let (_, report) = reconstruct_block(&x, &m, &cfg).unwrap();
        // starting from the true value there is nothing to gain
        assert_eq!(report.best_objective(), report.initial_objective());
    }

    #[test]
    fn report_text_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let x = random_block(&mut rng, 4);
        let m = random_mask(&mut rng, 4, 3);
        let cfg = ReconConfig { max_iters: 5, ..Default::default() };
        let (_, report) = reconstruct_block(&x, &m, &cfg).unwrap();
        let text = render_reports(&[vec![report.clone()]]);
        let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows.len(), report.iterations + 1);
        assert!(rows[0].starts_with("0, "));
        assert!(text.contains("termination=max_iters"));
    }

    #[test]
    fn channel_mask_count_mismatch() {
        let set = ChannelSet::gray(PixelGrid::zeros(8, 8));
        assert!(reconstruct_channels(&set, &[], 8, &Default::default()).is_err());
    }
}
