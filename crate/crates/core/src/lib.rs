//! Recovery of images with missing or salt-and-pepper pixels.
//!
//! Missing pixels are filled in by gradient descent on the L1 norm of the
//! block 2-D DCT spectrum, each block solved independently while known pixels
//! stay fixed. Impulse noise is handled by discarding every 0/255 pixel and
//! treating it as missing. A median filter is included as a baseline, and
//! [`metrics`] scores results against a reference.
//!
//! ```
//! use dctcs::{noise, recon, synthetic, metrics, ReconConfig, PixelGrid};
//!
//! let truth = synthetic::sparse_block(8, 3, 1).unwrap();
//! let mask = noise::random_missing_mask(8, 8, 0.25, 7).unwrap();
//! let (restored, report) = recon::reconstruct_block(&truth, &mask, &ReconConfig::default()).unwrap();
//! assert!(report.best_objective() <= report.initial_objective());
//! assert!(metrics::psnr(&restored, &truth).unwrap().db() > 40.0);
//! ```

pub mod error;
pub mod imagecore;
pub mod metrics;
pub mod noise;
pub mod recon;
pub mod sparsify;
pub mod synthetic;
pub mod transform;

pub use error::{Error, Result};
pub use imagecore::pnm::{load_image, load_mask, store_image, store_mask};
pub use imagecore::{ChannelSet, Mask, PixelGrid};
pub use metrics::{Psnr, QualityScore};
pub use noise::NoiseSpec;
pub use recon::{ReconConfig, ReconReport, Termination};
pub use sparsify::SparsitySpec;
pub use transform::{DctSpectrum, ImpulseSpectrumTable};
