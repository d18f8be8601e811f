//! Dense stereo disparity estimation with semi-global matching.
//!
//! Given a rectified grayscale stereo pair, the pipeline computes a matching
//! cost volume (census/Hamming or inverted NCC), regularizes it by dynamic
//! programming along four or eight concentric paths, extracts the
//! winner-takes-all disparity and post-processes it with subpixel
//! refinement, a left-right consistency check and a 3x3 median filter.
//! Everything is deterministic: results are bitwise identical for any worker
//! count.
//!
//! The crate also ships the standard benchmark-evaluation toolbox (D1-all
//! and bad-theta error rates, density, background interpolation, resolution
//! rescaling, throughput figures) and bit-exact PGM/PFM disparity I/O.
//!
//! ```
//! use sgm_stereo::{estimate, CostFunction, DisparityRange, GrayImage, PipelineConfig};
//!
//! // A noise pair where the right image is the left shifted by 3 px.
//! let mut seed = 92u32;
//! let mut noise = move || {
//!     seed = seed.wrapping_mul(1664525).wrapping_add(1013904223);
//!     (seed >> 24) as u8
//! };
//! let wide = GrayImage::from_fn(67, 48, |_, _| noise());
//! let left = GrayImage::from_fn(64, 48, |x, y| wide.pixel(x, y));
//! let right = GrayImage::from_fn(64, 48, |x, y| wide.pixel(x + 3, y));
//!
//! let cfg = PipelineConfig::new(CostFunction::Census9x7, DisparityRange::to_max(15)?);
//! let (disparity, stats) = estimate(&left, &right, &cfg)?;
//! assert_eq!(disparity.get(32, 24).map(f32::round), Some(3.0));
//! assert!(stats.mde_per_s > 0.0);
//! # Ok::<(), sgm_stereo::Error>(())
//! ```
//!
//! The accompanying book under `book/` walks through each stage; its code
//! snippets are compiled and run as part of this crate's doc-tests.

mod config;
mod disparity;
mod error;
mod image;
mod parallel;
mod stages;
mod volume;

pub mod imgio;
pub mod matching;
pub mod metrics;
pub mod oracle;
pub mod pipeline;
pub mod postproc;
pub mod sgm;

pub use config::{
    default_workers, validate_config, CensusWindow, ConsistencyMode, CostFunction, NccPatch,
    PathCount, PipelineConfig,
};
pub use disparity::DisparityMap;
pub use error::Error;
pub use image::GrayImage;
pub use pipeline::{estimate, estimate_with, stripe_plan, PipelineStats, Workspace};
pub use volume::{
    cell_index, AggregatedCostVolume, CostVolume, CostVolumeView, DisparityRange, MAX_CELL_COST,
    MAX_DISPARITY_COUNT,
};

// The book chapters double as doc-tests so their snippets cannot rot.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            pub struct $name;
        };
    }
    chapter!(Introduction, "../../../book/src/introduction.md");
    chapter!(Pipeline, "../../../book/src/pipeline.md");
    chapter!(MatchingCosts, "../../../book/src/matching-costs.md");
    chapter!(Aggregation, "../../../book/src/aggregation.md");
    chapter!(PostProcessing, "../../../book/src/post-processing.md");
    chapter!(Evaluation, "../../../book/src/evaluation.md");
    chapter!(IoFormats, "../../../book/src/io-formats.md");
}
