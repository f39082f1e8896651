//! Raster data model for the compression bench: images, masks, quality
//! metrics, the RAS1 on-disk container, and deterministic synthetic
//! dataset generators.

pub mod manifest;
pub mod metrics;
pub mod ras1;
pub mod raster;
pub mod synth;

pub use metrics::{bits_per_pixel, f1_scores, psnr, RdPoint};
pub use raster::{crop_patches, normalize_global_max, Mask, Raster};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("empty dataset")]
    EmptyDataset,
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("patch larger than scene: patch {patch} exceeds {height}x{width}")]
    PatchTooLarge {
        patch: usize,
        height: usize,
        width: usize,
    },
    #[error("invalid raster: {0}")]
    InvalidRaster(String),
    #[error("not a RAS1 file")]
    BadMagic,
    #[error("truncated")]
    Truncated,
    #[error("dimension overflow: {0}x{1}x{2}")]
    DimOverflow(u32, u32, u32),
    #[error("unsupported dtype tag {0}")]
    BadDtype(u32),
    #[error("invalid synth spec: {0}")]
    InvalidSpec(String),
    #[error("manifest error: {0}")]
    Manifest(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
