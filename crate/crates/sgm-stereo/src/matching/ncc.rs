//! Patch statistics and the inverted/truncated NCC cost volume.
//!
//! The NCC of two patches is 1 when they are identical, so it is inverted and
//! truncated before use as a matching cost: `s = 1 - max(0, phi)`. Cells are
//! quantized to `round(255 * s)`, which puts both cost functions on the same
//! 8-bit scale.
//!
//! The correlation itself is evaluated from exact integer sums:
//!
//! ```text
//! num   = n * sum(l * r) - sum(l) * sum(r)
//! den_i = n * sum(i * i) - sum(i)^2          (i = l, r)
//! phi   = clamp(num / (sqrt(den_l) * sqrt(den_r)), -1, 1)
//! ```
//!
//! A patch with zero variance carries no matching evidence; its correlation
//! is defined as 0, giving the maximal cost.

use super::PatchStatsImage;
use crate::config::NccPatch;
use crate::error::Error;
use crate::image::GrayImage;
use crate::parallel;
use crate::volume::{CostVolume, DisparityRange, MAX_CELL_COST};

/// Mean, variance and center intensity for the patch around every pixel,
/// using the same zero-valued margin as the census transform.
pub fn patch_stats(img: &GrayImage, patch: NccPatch) -> Result<PatchStatsImage, Error> {
    patch_stats_with(img, patch, 1)
}

pub(crate) fn patch_stats_with(
    img: &GrayImage,
    patch: NccPatch,
    workers: usize,
) -> Result<PatchStatsImage, Error> {
    let side = 2 * patch.radius() + 1;
    if img.width() < side || img.height() < side {
        return Err(Error::WindowTooLarge {
            window: patch.name(),
            width: img.width(),
            height: img.height(),
        });
    }
    let (w, h) = (img.width(), img.height());
    // Summed-area tables over intensities and squared intensities, with one
    // extra zero row/column. All integer arithmetic, so box sums are exact.
    let stride = w + 1;
    let mut sat = vec![0u64; stride * (h + 1)];
    let mut sat_sq = vec![0u64; stride * (h + 1)];
    for y in 0..h {
        let row = img.row(y);
        let mut run = 0u64;
        let mut run_sq = 0u64;
        for x in 0..w {
            let v = row[x] as u64;
            run += v;
            run_sq += v * v;
            sat[(y + 1) * stride + x + 1] = sat[y * stride + x + 1] + run;
            sat_sq[(y + 1) * stride + x + 1] = sat_sq[y * stride + x + 1] + run_sq;
        }
    }
    let box_sum = |table: &[u64], x0: usize, y0: usize, x1: usize, y1: usize| {
        // Inclusive rectangle [x0, x1] x [y0, y1].
        table[(y1 + 1) * stride + x1 + 1] + table[y0 * stride + x0]
            - table[y0 * stride + x1 + 1]
            - table[(y1 + 1) * stride + x0]
    };
    let r = patch.radius();
    let mut sums = vec![0u64; w * h];
    let mut sum_sqs = vec![0u64; w * h];
    let mut centers = vec![0u8; w * h];
    parallel::for_each_row_slab2(&mut sums, &mut sum_sqs, h, workers, |y, sum_row, sq_row| {
        let y0 = y.saturating_sub(r);
        let y1 = (y + r).min(h - 1);
        for x in 0..w {
            let x0 = x.saturating_sub(r);
            let x1 = (x + r).min(w - 1);
            // Samples clipped away lie in the zero margin and contribute 0.
            sum_row[x] = box_sum(&sat, x0, y0, x1, y1);
            sq_row[x] = box_sum(&sat_sq, x0, y0, x1, y1);
        }
    });
    for y in 0..h {
        centers[y * w..(y + 1) * w].copy_from_slice(img.row(y));
    }
    Ok(PatchStatsImage::from_sums(w, h, patch, sums, sum_sqs, centers))
}

/// NCC cost volume from precomputed patch statistics and the raw images
/// (needed for the cross term). Boundary disparities saturate like the
/// Hamming volume.
pub fn ncc_cost_volume(
    stats_left: &PatchStatsImage,
    stats_right: &PatchStatsImage,
    left: &GrayImage,
    right: &GrayImage,
    range: DisparityRange,
) -> Result<CostVolume, Error> {
    let mut out = CostVolume::zeroed(left.width(), left.height(), range);
    fill_ncc_cost_volume(stats_left, stats_right, left, right, range, &mut out, 1)?;
    Ok(out)
}

pub(crate) fn fill_ncc_cost_volume(
    stats_left: &PatchStatsImage,
    stats_right: &PatchStatsImage,
    left: &GrayImage,
    right: &GrayImage,
    range: DisparityRange,
    out: &mut CostVolume,
    workers: usize,
) -> Result<(), Error> {
    if stats_left.patch() != stats_right.patch() {
        return Err(Error::PatchMismatch);
    }
    if left.width() != right.width()
        || left.height() != right.height()
        || stats_left.width() != left.width()
        || stats_left.height() != left.height()
        || stats_right.width() != right.width()
        || stats_right.height() != right.height()
    {
        return Err(Error::DimensionMismatch {
            left_width: left.width(),
            left_height: left.height(),
            right_width: right.width(),
            right_height: right.height(),
        });
    }
    let patch = stats_left.patch();
    let (w, h) = (left.width(), left.height());
    out.reset(w, h, range);
    let count = range.count();
    let d_min = range.min() as usize;
    parallel::for_each_row_slab(out.cells_mut(), w * count, workers, |y, row| {
        for x in 0..w {
            let cell = &mut row[x * count..(x + 1) * count];
            for (i, c) in cell.iter_mut().enumerate() {
                let d = d_min + i;
                *c = if x < d {
                    MAX_CELL_COST
                } else {
                    ncc_cell(stats_left, stats_right, left, right, patch, x, x - d, y)
                };
            }
        }
    });
    Ok(())
}

fn ncc_cell(
    stats_left: &PatchStatsImage,
    stats_right: &PatchStatsImage,
    left: &GrayImage,
    right: &GrayImage,
    patch: NccPatch,
    xl: usize,
    xr: usize,
    y: usize,
) -> u8 {
    let n = patch.len() as i64;
    let r = patch.radius();
    let (sum_l, sq_l) = stats_left.raw_sums(xl, y);
    let (sum_r, sq_r) = stats_right.raw_sums(xr, y);
    // Cross term: products where either sample lies in the zero margin
    // vanish, so only the doubly in-image rectangle needs visiting.
    let (w, h) = (left.width(), left.height());
    let y0 = y.saturating_sub(r);
    let y1 = (y + r).min(h - 1);
    let dx0 = xr.min(xl).min(r);
    let dx1 = r.min(w - 1 - xl).min(w - 1 - xr);
    let mut cross = 0i64;
    for yy in y0..=y1 {
        let lrow = left.row(yy);
        let rrow = right.row(yy);
        for k in (xl - dx0)..=(xl + dx1) {
            cross += lrow[k] as i64 * rrow[k + xr - xl] as i64;
        }
    }
    let num = (n * cross - sum_l as i64 * sum_r as i64) as f64;
    let den_l = (n * sq_l as i64 - (sum_l * sum_l) as i64) as f64;
    let den_r = (n * sq_r as i64 - (sum_r * sum_r) as i64) as f64;
    let phi = if den_l > 0.0 && den_r > 0.0 {
        (num / (den_l.sqrt() * den_r.sqrt())).clamp(-1.0, 1.0)
    } else {
        0.0
    };
    (255.0 * (1.0 - phi.max(0.0))).round() as u8
}
