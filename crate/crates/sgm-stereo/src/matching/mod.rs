//! Matching-cost computation: census/Hamming and inverted, truncated NCC.
//!
//! Both cost functions share the zero-margin border policy (samples outside
//! the image read as intensity 0) and both saturate cells whose matching
//! pixel would fall left of the image to [`crate::volume::MAX_CELL_COST`], so
//! those disparities never win the optimization.

mod census;
mod ncc;

pub use census::{census_transform, hamming_cost_volume};
pub use ncc::{ncc_cost_volume, patch_stats};

pub(crate) use census::{census_transform_with, fill_hamming_cost_volume};
pub(crate) use ncc::{fill_ncc_cost_volume, patch_stats_with};

use crate::config::{CensusWindow, NccPatch};

/// Per-pixel census descriptors.
///
/// Bit `k` of a descriptor corresponds to the `k`-th neighbor of the pixel in
/// row-major window order, skipping the center; the bit is 1 iff that
/// neighbor is strictly darker than the center. Both window sizes omit the
/// center comparison, so a 5x5 window yields 24 bits and a 9x7 window 62
/// bits, stored in the low bits of a 64-bit word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusImage {
    width: usize,
    height: usize,
    window: CensusWindow,
    descriptors: Vec<u64>,
}

impl CensusImage {
    pub(crate) fn from_descriptors(
        width: usize,
        height: usize,
        window: CensusWindow,
        descriptors: Vec<u64>,
    ) -> Self {
        debug_assert_eq!(descriptors.len(), width * height);
        Self {
            width,
            height,
            window,
            descriptors,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn window(&self) -> CensusWindow {
        self.window
    }

    #[inline]
    pub fn descriptor(&self, x: usize, y: usize) -> u64 {
        self.descriptors[y * self.width + x]
    }

    pub fn descriptors(&self) -> &[u64] {
        &self.descriptors
    }
}

/// Precomputed per-pixel patch statistics for the NCC.
///
/// Internally this stores exact integer sums (`sum`, `sum of squares`) over
/// the zero-padded patch; mean and population variance are derived on access
/// with a single floating-point division each, which keeps results
/// deterministic and lets the matching stage reuse the exact sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatchStatsImage {
    width: usize,
    height: usize,
    patch: NccPatch,
    sums: Vec<u64>,
    sum_sqs: Vec<u64>,
    centers: Vec<u8>,
}

impl PatchStatsImage {
    pub(crate) fn from_sums(
        width: usize,
        height: usize,
        patch: NccPatch,
        sums: Vec<u64>,
        sum_sqs: Vec<u64>,
        centers: Vec<u8>,
    ) -> Self {
        debug_assert_eq!(sums.len(), width * height);
        debug_assert_eq!(sum_sqs.len(), width * height);
        debug_assert_eq!(centers.len(), width * height);
        Self {
            width,
            height,
            patch,
            sums,
            sum_sqs,
            centers,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn patch(&self) -> NccPatch {
        self.patch
    }

    /// Mean intensity of the zero-padded patch centered at (x, y).
    pub fn mean(&self, x: usize, y: usize) -> f64 {
        self.sums[y * self.width + x] as f64 / self.patch.len() as f64
    }

    /// Population variance of the zero-padded patch centered at (x, y).
    pub fn variance(&self, x: usize, y: usize) -> f64 {
        let n = self.patch.len() as u64;
        let idx = y * self.width + x;
        let sum = self.sums[idx];
        let sq = self.sum_sqs[idx];
        (n * sq - sum * sum) as f64 / (n * n) as f64
    }

    /// Intensity of the center pixel itself.
    pub fn center(&self, x: usize, y: usize) -> u8 {
        self.centers[y * self.width + x]
    }

    /// Exact integer patch sums `(sum, sum of squares)`.
    #[inline]
    pub(crate) fn raw_sums(&self, x: usize, y: usize) -> (u64, u64) {
        let idx = y * self.width + x;
        (self.sums[idx], self.sum_sqs[idx])
    }
}
