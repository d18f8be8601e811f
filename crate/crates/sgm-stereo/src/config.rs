//! Pipeline configuration and its validation.

use crate::error::Error;
use crate::image::GrayImage;
use crate::volume::DisparityRange;

/// Census transform neighborhood.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusWindow {
    /// 5x5 pixels, 24 neighbor bits.
    W5x5,
    /// 9 pixels wide, 7 tall: 62 neighbor bits, the largest neighborhood
    /// whose descriptor fits a 64-bit word.
    W9x7,
}

impl CensusWindow {
    /// Half extent in x and y.
    pub fn radius(&self) -> (usize, usize) {
        match self {
            CensusWindow::W5x5 => (2, 2),
            CensusWindow::W9x7 => (4, 3),
        }
    }

    /// Number of descriptor bits (window area minus the skipped center).
    pub fn bits(&self) -> u32 {
        match self {
            CensusWindow::W5x5 => 24,
            CensusWindow::W9x7 => 62,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CensusWindow::W5x5 => "census 5x5",
            CensusWindow::W9x7 => "census 9x7",
        }
    }
}

/// Patch size for normalized cross-correlation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NccPatch {
    P5x5,
    P9x9,
}

impl NccPatch {
    pub fn radius(&self) -> usize {
        match self {
            NccPatch::P5x5 => 2,
            NccPatch::P9x9 => 4,
        }
    }

    /// Number of samples in the patch.
    pub fn len(&self) -> usize {
        let side = 2 * self.radius() + 1;
        side * side
    }

    pub fn name(&self) -> &'static str {
        match self {
            NccPatch::P5x5 => "ncc 5x5",
            NccPatch::P9x9 => "ncc 9x9",
        }
    }
}

/// Matching-cost function of the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostFunction {
    Census5x5,
    Census9x7,
    Ncc5x5,
    Ncc9x9,
}

impl CostFunction {
    pub fn census_window(&self) -> Option<CensusWindow> {
        match self {
            CostFunction::Census5x5 => Some(CensusWindow::W5x5),
            CostFunction::Census9x7 => Some(CensusWindow::W9x7),
            _ => None,
        }
    }

    pub fn ncc_patch(&self) -> Option<NccPatch> {
        match self {
            CostFunction::Ncc5x5 => Some(NccPatch::P5x5),
            CostFunction::Ncc9x9 => Some(NccPatch::P9x9),
            _ => None,
        }
    }

    /// Support window extent in x and y, used to check that images are large
    /// enough.
    pub fn window_extent(&self) -> (usize, usize) {
        match self {
            CostFunction::Census5x5 => (5, 5),
            CostFunction::Census9x7 => (9, 7),
            CostFunction::Ncc5x5 => (5, 5),
            CostFunction::Ncc9x9 => (9, 9),
        }
    }

    /// Default smoothness penalties `(p1, p2)` for this cost function.
    ///
    /// The census values are the empirically best-performing pairs for the
    /// respective window sizes. NCC costs are quantized to 8-bit cells on a
    /// 0..=255 scale, so the published penalties for the raw NCC scale are
    /// re-expressed here with the same ratio: (23, 224).
    pub fn default_penalties(&self) -> (u16, u16) {
        match self {
            CostFunction::Census5x5 => (11, 39),
            CostFunction::Census9x7 => (27, 86),
            CostFunction::Ncc5x5 | CostFunction::Ncc9x9 => (23, 224),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CostFunction::Census5x5 => "census5x5",
            CostFunction::Census9x7 => "census9x7",
            CostFunction::Ncc5x5 => "ncc5x5",
            CostFunction::Ncc9x9 => "ncc9x9",
        }
    }
}

/// Number of aggregation paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathCount {
    /// Horizontal and vertical paths only.
    Four,
    /// Horizontal, vertical and diagonal paths.
    Eight,
}

impl PathCount {
    pub fn count(&self) -> usize {
        match self {
            PathCount::Four => 4,
            PathCount::Eight => 8,
        }
    }
}

/// How the left-right consistency check obtains the right disparity map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConsistencyMode {
    /// No consistency check.
    Off,
    /// Right map approximated from the aggregated cost volume of the left
    /// view; cheap and the default.
    Approximate,
    /// Right map computed by mirroring the pair and running the full
    /// matching and aggregation again. Roughly halves throughput for a
    /// fraction of a percent of accuracy.
    Exact,
}

/// Full configuration of [`crate::pipeline::estimate`].
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub cost_function: CostFunction,
    pub range: DisparityRange,
    /// Penalty for disparity changes of exactly one between neighboring
    /// pixels on a path. Must satisfy `0 < p1 < p2`.
    pub p1: u16,
    /// Penalty for larger disparity changes.
    pub p2: u16,
    pub paths: PathCount,
    /// Parabola-fit subpixel refinement of the winning disparity.
    pub subpixel: bool,
    pub consistency: ConsistencyMode,
    /// Maximum left/right disagreement, in pixels, that survives the check.
    pub consistency_threshold: f32,
    /// 3x3 median filtering of the valid disparities.
    pub median: bool,
    /// Worker threads. Results are bitwise identical for any value.
    pub workers: usize,
}

impl PipelineConfig {
    /// A configuration with the defaults used throughout: the given cost
    /// function with its default penalties, eight paths, subpixel refinement,
    /// approximate consistency check with threshold 1, and median filtering.
    pub fn new(cost_function: CostFunction, range: DisparityRange) -> Self {
        let (p1, p2) = cost_function.default_penalties();
        Self {
            cost_function,
            range,
            p1,
            p2,
            paths: PathCount::Eight,
            subpixel: true,
            consistency: ConsistencyMode::Approximate,
            consistency_threshold: 1.0,
            median: true,
            workers: default_workers(),
        }
    }
}

/// Number of logical cores, the default worker count.
pub fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Checks a configuration against a concrete image pair.
///
/// All violations are collected and reported together.
pub fn validate_config(
    cfg: &PipelineConfig,
    left: &GrayImage,
    right: &GrayImage,
) -> Result<(), Error> {
    let mut issues = Vec::new();
    if left.width() != right.width() || left.height() != right.height() {
        issues.push(format!(
            "left image is {}x{} but right image is {}x{}",
            left.width(),
            left.height(),
            right.width(),
            right.height()
        ));
    }
    if cfg.p1 == 0 {
        issues.push("p1 must be positive".to_string());
    }
    if cfg.p1 >= cfg.p2 {
        issues.push(format!("p1 ({}) must be less than p2 ({})", cfg.p1, cfg.p2));
    }
    let (wx, wy) = cfg.cost_function.window_extent();
    if left.width() < wx || left.height() < wy {
        issues.push(format!(
            "{}x{} image is smaller than the {}x{} support window",
            left.width(),
            left.height(),
            wx,
            wy
        ));
    }
    if cfg.workers == 0 {
        issues.push("worker count must be at least 1".to_string());
    }
    if !cfg.consistency_threshold.is_finite() || cfg.consistency_threshold < 0.0 {
        issues.push("consistency threshold must be a non-negative number".to_string());
    }
    // The range type already caps the span at 256, so only the relation to
    // the image is left to check here.
    if issues.is_empty() {
        Ok(())
    } else {
        Err(Error::Config(issues))
    }
}
