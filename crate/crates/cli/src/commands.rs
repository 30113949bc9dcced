use std::fmt::Display;
use std::path::Path;

use dctcs::imagecore::{clamp_quantize, merge_channels, pad_to_multiple};
use dctcs::{
    load_image, load_mask, metrics, noise, recon, sparsify, store_image, store_mask, ChannelSet,
    Error, Mask, NoiseSpec, PixelGrid, ReconConfig, Result, SparsitySpec,
};

use crate::{Cli, Command, CorruptArgs, CorruptMode, MedianArgs, MetricsArgs, ReconstructArgs, SparsifyArgs};

pub const EXIT_IO: u8 = 1;
pub const EXIT_PARAMETER: u8 = 2;
pub const EXIT_FORMAT: u8 = 3;
pub const EXIT_DIVERGENCE: u8 = 4;

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parameter(_) | Error::Dimension(_) | Error::Tiling { .. } => EXIT_PARAMETER,
        Error::Format { .. } => EXIT_FORMAT,
        Error::Divergence { .. } | Error::NonFinite { .. } => EXIT_DIVERGENCE,
        Error::Io { .. } | Error::Assembly(_) => EXIT_IO,
    }
}

/// `# key=value` lines echoed before any result line.
struct Manifest(Vec<(&'static str, String)>);

impl Manifest {
    fn new(command: &str, seed: u64) -> Self {
        Self(vec![("command", command.to_string()), ("seed", seed.to_string())])
    }

    fn add(&mut self, key: &'static str, value: impl Display) -> &mut Self {
        self.0.push((key, value.to_string()));
        self
    }

    fn path(&mut self, key: &'static str, value: &Path) -> &mut Self {
        self.add(key, value.display())
    }

    fn print(&self) {
        for (k, v) in &self.0 {
            println!("# {k}={v}");
        }
    }
}

fn summary(score: dctcs::QualityScore, reference: &Path) {
    println!(
        "mse={:.6}, psnr={}, reference={}",
        score.mse,
        score.psnr,
        reference.display()
    );
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Sparsify(a) => cmd_sparsify(a, cli.seed),
        Command::Corrupt(a) => cmd_corrupt(a, cli.seed),
        Command::Reconstruct(a) => cmd_reconstruct(a, cli.seed),
        Command::Median(a) => cmd_median(a, cli.seed),
        Command::Metrics(a) => cmd_metrics(a, cli.seed),
    }
}

fn per_channel(set: &ChannelSet, f: impl Fn(&PixelGrid) -> Result<PixelGrid>) -> Result<ChannelSet> {
    merge_channels(set.channels().iter().map(f).collect::<Result<Vec<_>>>()?)
}

fn quantize(set: &ChannelSet) -> Result<ChannelSet> {
    per_channel(set, clamp_quantize)
}

fn cmd_sparsify(a: &SparsifyArgs, seed: u64) -> Result<()> {
    let mut m = Manifest::new("sparsify", seed);
    m.path("input", &a.input)
        .path("output", &a.output)
        .add("block_size", a.block_size)
        .add("keep_k", a.keep_k);
    m.print();

    let input = load_image(&a.input)?;
    let spec = SparsitySpec::new(a.keep_k);
    let sparse = per_channel(&input, |g| {
        let padded = pad_to_multiple(g, &Mask::all_available(g.height(), g.width()), a.block_size)?;
        let s = sparsify::sparsify_image(&padded.grid, a.block_size, spec)?;
        s.crop(padded.original.0, padded.original.1)
    })?;
    let out = quantize(&sparse)?;
    store_image(&a.output, &out)?;
    summary(metrics::score_channels(&out, &input)?, &a.input);
    Ok(())
}

fn cmd_corrupt(a: &CorruptArgs, seed: u64) -> Result<()> {
    let mut m = Manifest::new("corrupt", seed);
    m.path("input", &a.input)
        .path("output", &a.output)
        .add("mode", format!("{:?}", a.mode).to_lowercase())
        .add("density", a.density)
        .add("prescale", a.prescale);
    if let Some(mask) = &a.mask {
        m.path("mask", mask);
    }
    if a.mode == CorruptMode::Saltpepper {
        m.add("salt_fraction", a.salt_fraction);
    }
    m.print();

    if a.mode == CorruptMode::Missing && a.mask.is_none() {
        return Err(Error::Parameter("missing mode needs --mask".into()));
    }
    let mut input = load_image(&a.input)?;
    if a.prescale {
        input = quantize(&input.map_channels(noise::prescale)?)?;
    }
    let (h, w) = input.dims();
    let mask = match a.mode {
        CorruptMode::Missing => {
            let mask = noise::random_missing_mask(h, w, a.density, seed)?;
            // missing pixels are displayed white
            let shown = per_channel(&input, |g| {
                Ok(PixelGrid::from_fn(h, w, |r, c| {
                    if mask.is_available(r, c) {
                        g.get(r, c)
                    } else {
                        255.0
                    }
                }))
            })?;
            store_image(&a.output, &shown)?;
            mask
        }
        CorruptMode::Saltpepper => {
            let spec = NoiseSpec {
                density: a.density,
                seed,
                salt_fraction: a.salt_fraction,
            };
            let (noisy, mask) = noise::add_salt_pepper_channels(&input, &spec)?;
            store_image(&a.output, &noisy)?;
            mask
        }
    };
    if let Some(path) = &a.mask {
        store_mask(path, &mask)?;
    }
    println!("corrupted={} of {}", mask.missing_count(), h * w);
    Ok(())
}

fn cmd_reconstruct(a: &ReconstructArgs, seed: u64) -> Result<()> {
    let config = ReconConfig {
        delta0: a.delta0,
        mu_over_delta: a.mu_over_delta.unwrap_or(1.0 / a.block_size as f64),
        reduction: a.reduction,
        delta_min: a.delta_min,
        max_iters: a.max_iters,
        patience: a.patience,
        init_value: Some(a.init_value.unwrap_or(if a.detect_saltpepper {
            noise::NEUTRAL
        } else {
            0.0
        })),
    };
    let reference_path = a.reference.as_deref().unwrap_or(&a.input);

    let mut m = Manifest::new("reconstruct", seed);
    m.path("input", &a.input).path("output", &a.output);
    match &a.mask {
        Some(p) => m.path("mask", p),
        None => m.add("mask", "detect-saltpepper"),
    };
    m.add("block_size", a.block_size)
        .add("delta0", config.delta0)
        .add("mu_over_delta", config.mu_over_delta)
        .add("reduction", config.reduction)
        .add("delta_min", config.delta_min)
        .add("max_iters", config.max_iters)
        .add("patience", config.patience)
        .add("init_value", config.init_value.unwrap_or_default())
        .path("reference", reference_path);
    if let Some(r) = &a.report {
        m.path("report", r);
    }
    m.print();
    config.validate()?;

    let input = load_image(&a.input)?;
    let (working, masks) = if a.detect_saltpepper {
        let (grids, masks): (Vec<_>, Vec<_>) =
            input.channels().iter().map(noise::detect_salt_pepper).unzip();
        (merge_channels(grids)?, masks)
    } else {
        let path = a.mask.as_ref().expect("clap enforces --mask");
        let mask = load_mask(path)?;
        if mask.dims() != input.dims() {
            return Err(Error::Dimension(format!(
                "mask {}x{} does not match image {}x{}",
                mask.height(),
                mask.width(),
                input.dims().0,
                input.dims().1
            )));
        }
        let n = input.channel_count();
        (input.clone(), vec![mask; n])
    };
    let missing: usize = masks.iter().map(Mask::missing_count).sum();
    eprintln!(
        "reconstructing {} missing samples in {} channel(s)",
        missing,
        working.channel_count()
    );

    let (restored, reports) = recon::reconstruct_channels(&working, &masks, a.block_size, &config)?;
    let out = quantize(&restored)?;
    store_image(&a.output, &out)?;
    if let Some(path) = &a.report {
        std::fs::write(path, recon::render_reports(&reports)).map_err(|e| Error::Io {
            path: path.clone(),
            source: e,
        })?;
    }

    let reference = load_image(reference_path)?;
    summary(metrics::score_channels(&out, &reference)?, reference_path);
    Ok(())
}

fn cmd_median(a: &MedianArgs, seed: u64) -> Result<()> {
    let mut m = Manifest::new("median", seed);
    m.path("input", &a.input)
        .path("output", &a.output)
        .add("window", a.window);
    if let Some(r) = &a.reference {
        m.path("reference", r);
    }
    m.print();
    if a.window != 3 && a.window != 5 {
        return Err(Error::Parameter(format!("median window must be 3 or 5, got {}", a.window)));
    }

    let input = load_image(&a.input)?;
    let out = per_channel(&input, |g| noise::median_filter(g, a.window))?;
    store_image(&a.output, &out)?;
    if let Some(r) = &a.reference {
        summary(metrics::score_channels(&out, &load_image(r)?)?, r);
    }
    Ok(())
}

fn cmd_metrics(a: &MetricsArgs, seed: u64) -> Result<()> {
    let mut m = Manifest::new("metrics", seed);
    m.path("image", &a.image).path("reference", &a.reference);
    m.print();
    let score = metrics::score_channels(&load_image(&a.image)?, &load_image(&a.reference)?)?;
    summary(score, &a.reference);
    Ok(())
}
