//! Cost-volume construction shared by the pipeline and the exact
//! consistency check.

use crate::config::{CostFunction, PipelineConfig};
use crate::error::Error;
use crate::image::GrayImage;
use crate::matching;
use crate::volume::CostVolume;

/// Fills `out` with the matching costs of the configured cost function.
pub(crate) fn fill_cost_volume(
    left: &GrayImage,
    right: &GrayImage,
    cfg: &PipelineConfig,
    workers: usize,
    out: &mut CostVolume,
) -> Result<(), Error> {
    match cfg.cost_function {
        CostFunction::Census5x5 | CostFunction::Census9x7 => {
            let window = cfg.cost_function.census_window().unwrap();
            let census_left = matching::census_transform_with(left, window, workers)?;
            let census_right = matching::census_transform_with(right, window, workers)?;
            matching::fill_hamming_cost_volume(&census_left, &census_right, cfg.range, out, workers)
        }
        CostFunction::Ncc5x5 | CostFunction::Ncc9x9 => {
            let patch = cfg.cost_function.ncc_patch().unwrap();
            let stats_left = matching::patch_stats_with(left, patch, workers)?;
            let stats_right = matching::patch_stats_with(right, patch, workers)?;
            matching::fill_ncc_cost_volume(
                &stats_left,
                &stats_right,
                left,
                right,
                cfg.range,
                out,
                workers,
            )
        }
    }
}
