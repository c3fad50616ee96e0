//! Data plumbing for tensor completion: binary tensor and mask files,
//! binary PGM/PPM images and frame directories, seeded synthetic tensors
//! and observation masks.
//!
//! Randomness comes from `Pcg32` (PCG XSH-RR, 64-bit state, 32-bit output)
//! seeded through `SeedableRng::seed_from_u64`. Gaussian variates use the
//! ziggurat sampler of `rand_distr::StandardNormal`.

mod error;
mod format;
mod mask;
mod pnm;
mod rng;
mod synth;

pub use error::{DataError, Result};
pub use format::{
    decode_mask, decode_tensor, encode_mask, encode_tensor, read_mask, read_tensor, write_mask,
    write_tensor, MASK_MAGIC, TENSOR_MAGIC,
};
pub use mask::ObservationMask;
pub use pnm::{decode_pnm, encode_pnm, export_image, import_image, read_video_dir, write_video_dir, PnmKind};
pub use rng::{seeded_rng, standard_normal, Rng64};
pub use synth::{sample_mask, synth_smooth_sequence, synth_tensor};
