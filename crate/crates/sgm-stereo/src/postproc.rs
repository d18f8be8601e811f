//! Post-processing: subpixel refinement, left-right consistency check and
//! 3x3 median filtering.
//!
//! The pipeline applies these in exactly this order. All three only ever
//! remove validity, never invent it.

use crate::config::PipelineConfig;
use crate::disparity::DisparityMap;
use crate::error::Error;
use crate::image::GrayImage;
use crate::parallel;
use crate::sgm;
use crate::stages;
use crate::volume::{AggregatedCostVolume, CostVolume};

/// Subpixel refinement by fitting a parabola through the aggregated costs of
/// the winning disparity and its two neighbors.
///
/// For a winner `d` strictly inside the range with neighbor costs
/// `(c_minus, c_0, c_plus)`, the vertex offset is
/// `(c_minus - c_plus) / (2 * (c_minus - 2*c_0 + c_plus))`, clamped to
/// `[-0.5, 0.5]`. Winners on the range boundary and flat cost triples keep
/// offset zero. `disp` must be the WTA result of `aggregated`.
pub fn subpixel_refine(disp: &DisparityMap, aggregated: &AggregatedCostVolume) -> DisparityMap {
    subpixel_refine_with(disp, aggregated, 1)
}

pub(crate) fn subpixel_refine_with(
    disp: &DisparityMap,
    aggregated: &AggregatedCostVolume,
    workers: usize,
) -> DisparityMap {
    assert_eq!(disp.width(), aggregated.width(), "dimension mismatch");
    assert_eq!(disp.height(), aggregated.height(), "dimension mismatch");
    let range = aggregated.range();
    let (w, h) = (disp.width(), disp.height());
    let mut out = disp.clone();
    let (values, valid, _) = out.rows_mut();
    parallel::for_each_row_slab2(values, valid, h, workers, |y, vrow, frow| {
        for x in 0..w {
            if !frow[x] {
                continue;
            }
            let d = vrow[x].round() as u16;
            if d <= range.min() || d >= range.max() {
                continue;
            }
            let i = (d - range.min()) as usize;
            let costs = aggregated.pixel_costs(x, y);
            let c_minus = costs[i - 1] as f64;
            let c_0 = costs[i] as f64;
            let c_plus = costs[i + 1] as f64;
            let denom = c_minus - 2.0 * c_0 + c_plus;
            let offset = if denom == 0.0 {
                0.0
            } else {
                ((c_minus - c_plus) / (2.0 * denom)).clamp(-0.5, 0.5)
            };
            vrow[x] = d as f32 + offset as f32;
        }
    });
    out
}

/// Right-view disparity map approximated from the aggregated cost volume of
/// the left view: the minimizing `d` of `aggregated((x + d, y), d)` over all
/// candidates that stay inside the image. Ties go to the smaller disparity;
/// pixels with no admissible candidate are invalid.
pub fn approx_right_disparity(aggregated: &AggregatedCostVolume) -> DisparityMap {
    approx_right_disparity_with(aggregated, 1)
}

pub(crate) fn approx_right_disparity_with(
    aggregated: &AggregatedCostVolume,
    workers: usize,
) -> DisparityMap {
    let range = aggregated.range();
    let (w, h) = (aggregated.width(), aggregated.height());
    let mut out = DisparityMap::invalid(w, h);
    let (values, valid, _) = out.rows_mut();
    parallel::for_each_row_slab2(values, valid, h, workers, |y, vrow, frow| {
        for x in 0..w {
            let mut best = u32::MAX;
            let mut best_d: Option<u16> = None;
            for (i, d) in range.iter().enumerate() {
                let lx = x + d as usize;
                if lx >= w {
                    break;
                }
                let c = aggregated.get(lx, y, i);
                if c < best {
                    best = c;
                    best_d = Some(d);
                }
            }
            if let Some(d) = best_d {
                vrow[x] = d as f32;
                frow[x] = true;
            }
        }
    });
    out
}

/// Left-right consistency check.
///
/// A left disparity survives iff the right map, looked up at the matched
/// column `x - round(d)`, is valid and differs by at most `threshold` pixels.
/// Everything else, including lookups that leave the image, is invalidated.
pub fn consistency_check(
    left: &DisparityMap,
    right: &DisparityMap,
    threshold: f32,
) -> DisparityMap {
    consistency_check_with(left, right, threshold, 1)
}

pub(crate) fn consistency_check_with(
    left: &DisparityMap,
    right: &DisparityMap,
    threshold: f32,
    workers: usize,
) -> DisparityMap {
    assert_eq!(left.width(), right.width(), "dimension mismatch");
    assert_eq!(left.height(), right.height(), "dimension mismatch");
    let (w, h) = (left.width(), left.height());
    let mut out = left.clone();
    let (values, valid, _) = out.rows_mut();
    parallel::for_each_row_slab2(values, valid, h, workers, |y, vrow, frow| {
        for x in 0..w {
            if !frow[x] {
                continue;
            }
            let d = vrow[x];
            let matched = x as isize - d.round() as isize;
            let consistent = matched >= 0
                && (matched as usize) < w
                && right
                    .get(matched as usize, y)
                    .is_some_and(|dr| (d - dr).abs() <= threshold);
            if !consistent {
                frow[x] = false;
            }
        }
    });
    out
}

/// The exact right disparity map: mirror both images horizontally, swap their
/// roles, run matching, aggregation and WTA, and mirror the result back onto
/// the right image's pixel grid. Shares all code paths with the normal
/// pipeline front end.
pub fn exact_right_disparity(
    left: &GrayImage,
    right: &GrayImage,
    cfg: &PipelineConfig,
) -> Result<DisparityMap, Error> {
    crate::config::validate_config(cfg, left, right)?;
    let mirrored_right = right.mirrored_horizontal();
    let mirrored_left = left.mirrored_horizontal();
    let mut cost = CostVolume::zeroed(right.width(), right.height(), cfg.range);
    stages::fill_cost_volume(&mirrored_right, &mirrored_left, cfg, cfg.workers, &mut cost)?;
    let mut aggregated = AggregatedCostVolume::zeroed(right.width(), right.height(), cfg.range);
    sgm::fill_aggregate_all(
        &cost,
        cfg.paths,
        cfg.p1 as u32,
        cfg.p2 as u32,
        true,
        &mut aggregated,
        cfg.workers,
    )?;
    Ok(sgm::wta_with(&aggregated, cfg.workers).mirrored_horizontal())
}

/// Median of nine values through the first five exchange stages of the
/// nine-wire bubble-sort network.
///
/// Stage `s` (starting at 0) compare-exchanges wires `(i, i + 1)` for
/// `i = 0..8-s`, moving the smaller value up. After five stages the five
/// highest values sit correctly sorted on the lower wires, so wire 4 holds
/// the median of all nine.
pub fn median9(values: [f32; 9]) -> f32 {
    let mut w = values;
    for stage in 0..5 {
        for i in 0..8 - stage {
            if w[i] > w[i + 1] {
                w.swap(i, i + 1);
            }
        }
    }
    w[4]
}

/// 3x3 median filter over the valid disparities.
///
/// Out-of-image and invalid neighbors enter the sorting network as a
/// sentinel greater than any disparity. A pixel whose median is the sentinel
/// (five or more missing samples) becomes invalid rather than fabricated;
/// already-invalid pixels stay invalid.
pub fn median3x3(disp: &DisparityMap) -> DisparityMap {
    median3x3_with(disp, 1)
}

pub(crate) fn median3x3_with(disp: &DisparityMap, workers: usize) -> DisparityMap {
    let (w, h) = (disp.width(), disp.height());
    let mut out = DisparityMap::invalid(w, h);
    let (values, valid, _) = out.rows_mut();
    parallel::for_each_row_slab2(values, valid, h, workers, |y, vrow, frow| {
        for x in 0..w {
            if !disp.is_valid(x, y) {
                continue;
            }
            let mut neighborhood = [f32::INFINITY; 9];
            let mut k = 0;
            for dy in -1isize..=1 {
                for dx in -1isize..=1 {
                    let nx = x as isize + dx;
                    let ny = y as isize + dy;
                    if nx >= 0 && ny >= 0 && (nx as usize) < w && (ny as usize) < h {
                        if let Some(v) = disp.get(nx as usize, ny as usize) {
                            neighborhood[k] = v;
                        }
                    }
                    k += 1;
                }
            }
            let median = median9(neighborhood);
            if median.is_finite() {
                vrow[x] = median;
                frow[x] = true;
            }
        }
    });
    out
}
