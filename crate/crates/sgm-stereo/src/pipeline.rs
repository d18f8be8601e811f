//! The full estimation pipeline: matching costs, aggregation, disparity
//! extraction and post-processing, with striped multi-worker execution.
//!
//! Workers process disjoint row stripes in every stage except aggregation,
//! which assigns whole lines per direction instead; the stage boundaries
//! around aggregation are the only synchronization points. Outputs are
//! bitwise independent of the worker count.

use std::ops::Range;
use std::time::Instant;

use crate::config::{ConsistencyMode, PipelineConfig};
use crate::disparity::DisparityMap;
use crate::error::Error;
use crate::image::GrayImage;
use crate::metrics;
use crate::parallel;
use crate::postproc;
use crate::sgm;
use crate::stages;
use crate::volume::{AggregatedCostVolume, CostVolume};

/// Wall-clock timings and derived throughput of one [`estimate`] call.
///
/// Timings cover computation and cost-volume allocation; reading image files
/// is outside the measurement boundary. The post-processing time covers
/// refinement, consistency check and median filter together.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineStats {
    pub width: usize,
    pub height: usize,
    pub disparity_count: usize,
    pub time_cost_s: f64,
    pub time_aggregate_s: f64,
    pub time_post_s: f64,
    pub time_total_s: f64,
    /// Million disparity estimations per second over the total time.
    pub mde_per_s: f64,
    /// Frames per second implied by the total time.
    pub fps: f64,
}

/// Reusable buffers for repeated [`estimate_with`] calls.
///
/// The two cost volumes dominate the allocation cost of a pipeline run;
/// keeping a workspace alive across calls removes that noise from
/// benchmarks. A workspace serves one call at a time.
#[derive(Debug, Default)]
pub struct Workspace {
    cost: CostVolume,
    aggregated: AggregatedCostVolume,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    /// The aggregated cost volume of the most recent call, e.g. for
    /// inspecting the optimization result.
    pub fn aggregated(&self) -> &AggregatedCostVolume {
        &self.aggregated
    }
}

/// Estimates the disparity map of a rectified pair.
///
/// Stages run in fixed order: cost computation, path aggregation with the
/// winner-takes-all extraction, then optional subpixel refinement,
/// consistency check and median filter.
pub fn estimate(
    left: &GrayImage,
    right: &GrayImage,
    cfg: &PipelineConfig,
) -> Result<(DisparityMap, PipelineStats), Error> {
    estimate_with(&mut Workspace::new(), left, right, cfg)
}

/// [`estimate`] reusing the buffers of `workspace`.
pub fn estimate_with(
    workspace: &mut Workspace,
    left: &GrayImage,
    right: &GrayImage,
    cfg: &PipelineConfig,
) -> Result<(DisparityMap, PipelineStats), Error> {
    crate::config::validate_config(cfg, left, right)?;
    let workers = cfg.workers;
    let start = Instant::now();

    stages::fill_cost_volume(left, right, cfg, workers, &mut workspace.cost)?;
    let after_cost = Instant::now();

    sgm::fill_aggregate_all(
        &workspace.cost,
        cfg.paths,
        cfg.p1 as u32,
        cfg.p2 as u32,
        true,
        &mut workspace.aggregated,
        workers,
    )?;
    let mut disparity = sgm::wta_with(&workspace.aggregated, workers);
    let after_aggregate = Instant::now();

    if cfg.subpixel {
        disparity = postproc::subpixel_refine_with(&disparity, &workspace.aggregated, workers);
    }
    match cfg.consistency {
        ConsistencyMode::Off => {}
        ConsistencyMode::Approximate => {
            let right_map = postproc::approx_right_disparity_with(&workspace.aggregated, workers);
            disparity = postproc::consistency_check_with(
                &disparity,
                &right_map,
                cfg.consistency_threshold,
                workers,
            );
        }
        ConsistencyMode::Exact => {
            let right_map = postproc::exact_right_disparity(left, right, cfg)?;
            disparity = postproc::consistency_check_with(
                &disparity,
                &right_map,
                cfg.consistency_threshold,
                workers,
            );
        }
    }
    if cfg.median {
        disparity = postproc::median3x3_with(&disparity, workers);
    }
    let end = Instant::now();

    let time_total_s = end.duration_since(start).as_secs_f64();
    let stats = PipelineStats {
        width: left.width(),
        height: left.height(),
        disparity_count: cfg.range.count(),
        time_cost_s: after_cost.duration_since(start).as_secs_f64(),
        time_aggregate_s: after_aggregate.duration_since(after_cost).as_secs_f64(),
        time_post_s: end.duration_since(after_aggregate).as_secs_f64(),
        time_total_s,
        mde_per_s: metrics::throughput_mde_s(
            left.width(),
            left.height(),
            cfg.range.count(),
            time_total_s,
        )
        .unwrap_or(f64::NAN),
        fps: if time_total_s > 0.0 {
            1.0 / time_total_s
        } else {
            f64::NAN
        },
    };
    Ok((disparity, stats))
}

/// Splits `height` rows into `workers` contiguous, disjoint, covering
/// stripes whose sizes differ by at most one. Stripes may be empty when
/// there are more workers than rows.
pub fn stripe_plan(height: usize, workers: usize) -> Vec<Range<usize>> {
    assert!(workers >= 1, "worker count must be at least 1");
    parallel::stripes(height, workers)
}
