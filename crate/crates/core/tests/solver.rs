use dctcs::imagecore::tile_blocks;
use dctcs::recon::{
    gradient_estimate, gradient_estimate_literal, reconstruct_block, reconstruct_color,
    reconstruct_image, reconstruct_image_padded,
};
use dctcs::transform::{dct2_forward, dct2_inverse, impulse_table, DctSpectrum};
use dctcs::{noise, sparsify, synthetic, ChannelSet, Mask, PixelGrid, ReconConfig, SparsitySpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_grid(rng: &mut impl Rng, h: usize, w: usize) -> PixelGrid {
    PixelGrid::from_fn(h, w, |_, _| rng.gen_range(0.0..255.0))
}

fn assert_fidelity(out: &PixelGrid, input: &PixelGrid, mask: &Mask) {
    for r in 0..out.height() {
        for c in 0..out.width() {
            if mask.is_available(r, c) {
                assert_eq!(out.get(r, c).to_bits(), input.get(r, c).to_bits(), "({r}, {c})");
            }
        }
    }
}

#[test]
fn fast_gradient_matches_literal_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for n in [4, 8] {
        let table = impulse_table(n).unwrap();
        for _ in 0..25 {
            let y = random_grid(&mut rng, n, n);
            let mask = Mask::from_fn(n, n, |_, _| rng.gen_bool(0.6));
            let delta = rng.gen_range(0.01..150.0);
            let fast = gradient_estimate(&y, &mask, delta, &table).unwrap();
            let slow = gradient_estimate_literal(&y, &mask, delta).unwrap();
            for (a, b) in fast.values().iter().zip(slow.values()) {
                assert!((a - b).abs() < 1e-9, "{a} vs {b}");
            }
        }
    }
}

/// As delta shrinks the central difference approaches the subgradient
/// `sum sign(Y) B_kl`; once no coefficient can change sign it is exact.
#[test]
fn gradient_converges_to_analytic_subgradient() {
    let table = impulse_table(8).unwrap();
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // |Y| >= 0.003 everywhere, so delta = 0.01 (|delta B| <= 0.0025) never
        // crosses a kink while delta = 1 usually does.
        let coeffs = (0..64)
            .map(|_| {
                let m = rng.gen_range(0.003..2.0);
                if rng.gen() { m } else { -m }
            })
            .collect();
        let spectrum = DctSpectrum::new(8, coeffs).unwrap();
        let y = dct2_inverse(&spectrum).unwrap();
        let mask = Mask::none_available(8, 8);
        let signs: Vec<f64> = dct2_forward(&y)
            .unwrap()
            .coeffs()
            .iter()
            .map(|c| c.signum())
            .collect();

        let mut previous = f64::INFINITY;
        for delta in [1.0, 0.1, 0.01] {
            let g = gradient_estimate(&y, &mask, delta, &table).unwrap();
            let mut worst: f64 = 0.0;
            for k in 0..8 {
                for l in 0..8 {
                    let analytic: f64 = table
                        .entry(k, l)
                        .coeffs()
                        .iter()
                        .zip(&signs)
                        .map(|(b, s)| s * b)
                        .sum();
                    worst = worst.max((g.get(k, l) - analytic).abs());
                }
            }
            assert!(worst <= previous + 1e-12, "seed {seed} delta {delta}: {worst} > {previous}");
            previous = worst;
        }
        assert!(previous < 1e-8, "seed {seed}: {previous}");
    }
}

#[test]
fn solver_keeps_known_pixels_and_never_worsens() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..10 {
        let x = random_grid(&mut rng, 8, 8);
        let mask = Mask::from_fn(8, 8, |_, _| rng.gen_bool(0.5));
        let cfg = ReconConfig {
            max_iters: 300,
            init_value: if i % 2 == 0 { Some(0.0) } else { Some(128.0) },
            ..Default::default()
        };
        let (y, report) = reconstruct_block(&x, &mask, &cfg).unwrap();
        assert_fidelity(&y, &x, &mask);
        assert_eq!(report.trajectory.len(), report.iterations + 1);
        assert_eq!(report.deltas.len(), report.iterations);
        let mut best = f64::INFINITY;
        for &j in &report.trajectory {
            best = best.min(j);
        }
        let final_j = dct2_forward(&y).unwrap().l1_norm();
        assert!((final_j - best).abs() <= 1e-9 * best);
        assert!(final_j <= report.initial_objective());
    }
}

#[test]
fn recovers_four_sparse_block_at_quarter_missing() {
    let truth = synthetic::sparse_block(8, 4, 42).unwrap();
    let mask = noise::random_missing_mask(8, 8, 0.25, 42).unwrap();
    let (y, report) = reconstruct_block(&truth, &mask, &ReconConfig::default()).unwrap();
    assert!(y.max_abs_diff(&truth) < 1e-1, "{}", y.max_abs_diff(&truth));
    assert!(report.reductions > 0);
}

#[test]
fn image_level_equals_block_composition_and_is_deterministic() {
    let scene = synthetic::scene(16, 16, 3);
    let sparse = sparsify::sparsify_image(&scene, 8, SparsitySpec::new(8)).unwrap();
    let mask = noise::random_missing_mask(16, 16, 0.5, 11).unwrap();
    let cfg = ReconConfig::default();
    let (image, reports) = reconstruct_image(&sparse, &mask, 8, &cfg).unwrap();
    let (again, reports_again) = reconstruct_image(&sparse, &mask, 8, &cfg).unwrap();
    assert_eq!(image, again);
    assert_eq!(reports, reports_again);

    for (tile, report) in tile_blocks(&sparse, &mask, 8).unwrap().iter().zip(&reports) {
        let (block, single) = reconstruct_block(&tile.block, &tile.mask, &cfg).unwrap();
        assert_eq!(image.window(tile.origin, 8, 8), block);
        assert_eq!(report.origin, tile.origin);
        assert_eq!(report.trajectory, single.trajectory);
    }
    assert_fidelity(&image, &sparse, &mask);
}

#[test]
fn untouched_blocks_are_bit_identical() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = random_grid(&mut rng, 16, 24);
    let mask = Mask::from_fn(16, 24, |r, c| !(r >= 8 && c < 8 && (r + c) % 3 == 0));
    let (out, reports) = reconstruct_image(&g, &mask, 8, &ReconConfig::default()).unwrap();
    for (i, rep) in reports.iter().enumerate() {
        let (r0, c0) = rep.origin;
        if (r0, c0) == (8, 0) {
            assert!(rep.iterations > 0);
            continue;
        }
        assert_eq!(rep.iterations, 0, "block {i}");
        assert_eq!(out.window((r0, c0), 8, 8), g.window((r0, c0), 8, 8));
    }
    let all = Mask::all_available(16, 24);
    assert_eq!(reconstruct_image(&g, &all, 8, &Default::default()).unwrap().0, g);
}

#[test]
fn padded_reconstruction_handles_odd_sizes() {
    let scene = synthetic::scene(13, 21, 9);
    let mask = noise::random_missing_mask(13, 21, 0.3, 2).unwrap();
    let (out, reports) = reconstruct_image_padded(&scene, &mask, 8, &Default::default()).unwrap();
    assert_eq!(out.dims(), (13, 21));
    assert_eq!(reports.len(), 2 * 3);
    assert_fidelity(&out, &scene, &mask);
    assert!(dctcs::metrics::psnr(&out, &scene).unwrap().db() > 25.0);
}

#[test]
fn whole_image_as_one_block() {
    let truth = synthetic::sparse_block(16, 6, 3).unwrap();
    let mask = noise::random_missing_mask(16, 16, 0.25, 3).unwrap();
    let (out, reports) = reconstruct_image(&truth, &mask, 16, &Default::default()).unwrap();
    assert_eq!(reports.len(), 1);
    assert!(out.max_abs_diff(&truth) < 1e-1);
}

#[test]
fn color_channels_are_independent() {
    let r = synthetic::scene(16, 16, 1);
    let g = synthetic::scene(16, 16, 2);
    let b = synthetic::scene(16, 16, 3);
    let mask = noise::random_missing_mask(16, 16, 0.4, 8).unwrap();
    let cfg = ReconConfig::default();

    let gray = ChannelSet::gray(r.clone());
    let (gray_out, _) = reconstruct_color(&gray, &mask, 8, &cfg).unwrap();
    assert_eq!(gray_out.channels()[0], reconstruct_image(&r, &mask, 8, &cfg).unwrap().0);

    let rgb = ChannelSet::rgb(r.clone(), g.clone(), b.clone()).unwrap();
    let (out, reports) = reconstruct_color(&rgb, &mask, 8, &cfg).unwrap();
    assert_eq!(reports.len(), 3);
    for (o, src) in out.channels().iter().zip([&r, &g, &b]) {
        assert_eq!(o, &reconstruct_image(src, &mask, 8, &cfg).unwrap().0);
    }

    let same = ChannelSet::rgb(r.clone(), r.clone(), r.clone()).unwrap();
    let (out, _) = reconstruct_color(&same, &mask, 8, &cfg).unwrap();
    assert_eq!(out.channels()[0], out.channels()[1]);
    assert_eq!(out.channels()[1], out.channels()[2]);

    // one channel fully known, the others not
    let masks = [Mask::all_available(16, 16), mask.clone(), mask.clone()];
    let (out, reports) = dctcs::recon::reconstruct_channels(&rgb, &masks, 8, &cfg).unwrap();
    assert_eq!(out.channels()[0], r);
    assert!(reports[0].iter().all(|rep| rep.iterations == 0));
}

#[test]
fn divergence_reports_block_origin() {
    let mut g = PixelGrid::filled(16, 16, 10.0);
    g.set(9, 12, f64::NAN);
    let mut mask = Mask::all_available(16, 16);
    mask.set(10, 10, false);
    match reconstruct_image(&g, &mask, 8, &Default::default()) {
        Err(dctcs::Error::Divergence { origin, report }) => {
            assert_eq!(origin, Some((8, 8)));
            assert_eq!(report.origin, (8, 8));
            let msg = dctcs::Error::Divergence { origin, report }.to_string();
            assert!(msg.contains("(8, 8)"), "{msg}");
        }
        other => panic!("expected divergence, got {other:?}"),
    }
}
