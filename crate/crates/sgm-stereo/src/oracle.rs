//! Naive reference implementations for verification.
//!
//! Everything in this module is written as the most literal possible
//! evaluation of its definition: plain loops, per-pixel recursion, full
//! sorts. None of it shares code with the optimized modules, so equivalence
//! tests between the two are meaningful. Performance is a non-goal here.

use crate::config::{CensusWindow, NccPatch, PathCount};
use crate::disparity::DisparityMap;
use crate::matching::CensusImage;
use crate::sgm::PathDirection;
use crate::volume::{AggregatedCostVolume, CostVolume, CostVolumeView, DisparityRange};

/// Census transform by literal double loop over the window.
///
/// Bit `k` of a descriptor is 1 iff the `k`-th neighbor in row-major window
/// order (center skipped) is strictly darker than the center pixel; samples
/// outside the image read as intensity 0.
pub fn naive_census(img: &crate::image::GrayImage, window: CensusWindow) -> CensusImage {
    let (rx, ry) = window.radius();
    let mut descriptors = Vec::with_capacity(img.width() * img.height());
    for y in 0..img.height() as isize {
        for x in 0..img.width() as isize {
            let center = img.pixel(x as usize, y as usize);
            let mut bits = 0u64;
            let mut k = 0;
            for dy in -(ry as isize)..=(ry as isize) {
                for dx in -(rx as isize)..=(rx as isize) {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    if img.pixel_or_zero(x + dx, y + dy) < center {
                        bits |= 1u64 << k;
                    }
                    k += 1;
                }
            }
            descriptors.push(bits);
        }
    }
    CensusImage::from_descriptors(img.width(), img.height(), window, descriptors)
}

/// Hamming-distance cost volume by direct per-cell evaluation.
pub fn naive_hamming_cost_volume(
    left: &CensusImage,
    right: &CensusImage,
    range: DisparityRange,
) -> CostVolume {
    assert_eq!(left.window(), right.window(), "windows must match");
    CostVolume::from_fn(left.width(), left.height(), range, |x, y, d| {
        let d = d as usize;
        if x < d {
            crate::volume::MAX_CELL_COST
        } else {
            (left.descriptor(x, y) ^ right.descriptor(x - d, y)).count_ones() as u8
        }
    })
}

/// Per-patch mean, population variance and center intensity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchMoments {
    pub mean: f64,
    pub variance: f64,
    pub center: u8,
}

/// Patch moments for every pixel by re-summing the full window each time.
///
/// Follows the same arithmetic route as the optimized implementation (integer
/// sums, then one floating-point division each), so results are bitwise
/// comparable.
pub fn naive_patch_moments(img: &crate::image::GrayImage, patch: NccPatch) -> Vec<PatchMoments> {
    let r = patch.radius() as isize;
    let n = patch.len() as u64;
    let mut out = Vec::with_capacity(img.width() * img.height());
    for y in 0..img.height() as isize {
        for x in 0..img.width() as isize {
            let mut sum = 0u64;
            let mut sum_sq = 0u64;
            for dy in -r..=r {
                for dx in -r..=r {
                    let v = img.pixel_or_zero(x + dx, y + dy) as u64;
                    sum += v;
                    sum_sq += v * v;
                }
            }
            let mean = sum as f64 / n as f64;
            let variance = (n * sum_sq - sum * sum) as f64 / (n * n) as f64;
            out.push(PatchMoments {
                mean,
                variance,
                center: img.pixel(x as usize, y as usize),
            });
        }
    }
    out
}

/// The inverted/truncated NCC matching cost for a single patch pair, from the
/// raw images.
///
/// The correlation is computed from exact integer sums:
/// `phi = (n*sum_lr - sum_l*sum_r) / (sqrt(n*sq_l - sum_l^2) * sqrt(n*sq_r - sum_r^2))`,
/// clamped to [-1, 1]; a zero denominator (textureless patch) defines
/// `phi = 0`. The cell value is `round(255 * (1 - max(0, phi)))`.
pub fn naive_ncc_cost(
    left: &crate::image::GrayImage,
    right: &crate::image::GrayImage,
    patch: NccPatch,
    xl: usize,
    xr: usize,
    y: usize,
) -> u8 {
    let r = patch.radius() as isize;
    let n = patch.len() as i64;
    let (mut sum_l, mut sum_r, mut sq_l, mut sq_r, mut cross) = (0i64, 0i64, 0i64, 0i64, 0i64);
    for dy in -r..=r {
        for dx in -r..=r {
            let a = left.pixel_or_zero(xl as isize + dx, y as isize + dy) as i64;
            let b = right.pixel_or_zero(xr as isize + dx, y as isize + dy) as i64;
            sum_l += a;
            sum_r += b;
            sq_l += a * a;
            sq_r += b * b;
            cross += a * b;
        }
    }
    let num = (n * cross - sum_l * sum_r) as f64;
    let den_l = (n * sq_l - sum_l * sum_l) as f64;
    let den_r = (n * sq_r - sum_r * sum_r) as f64;
    let phi = if den_l > 0.0 && den_r > 0.0 {
        (num / (den_l.sqrt() * den_r.sqrt())).clamp(-1.0, 1.0)
    } else {
        0.0
    };
    let score = 1.0 - phi.max(0.0);
    (255.0 * score).round() as u8
}

/// NCC cost volume by direct evaluation of every cell.
pub fn naive_ncc_cost_volume(
    left: &crate::image::GrayImage,
    right: &crate::image::GrayImage,
    patch: NccPatch,
    range: DisparityRange,
) -> CostVolume {
    CostVolume::from_fn(left.width(), left.height(), range, |x, y, d| {
        let d = d as usize;
        if x < d {
            crate::volume::MAX_CELL_COST
        } else {
            naive_ncc_cost(left, right, patch, x, x - d, y)
        }
    })
}

/// Path-cost recursion evaluated literally, with memoization per line.
///
/// `l(p, d) = s(p, d) + min_d'(l(p - r, d') + v(d, d'))` where `v` is 0 for
/// equal disparities, `p1` for a difference of one and `p2` otherwise; at a
/// line start `l(p, d) = s(p, d)`. With `normalize` the minimum of the
/// predecessor column is additionally subtracted.
fn naive_path_cost(
    cost: &CostVolume,
    dir: PathDirection,
    p1: u32,
    p2: u32,
    normalize: bool,
    memo: &mut [Option<u32>],
    x: usize,
    y: usize,
    d_index: usize,
) -> u32 {
    let count = cost.range().count();
    let idx = (y * cost.width() + x) * count + d_index;
    if let Some(v) = memo[idx] {
        return v;
    }
    let s = cost.get(x, y, d_index) as u32;
    let px = x as isize - dir.dx as isize;
    let py = y as isize - dir.dy as isize;
    let value = if px < 0 || py < 0 || px >= cost.width() as isize || py >= cost.height() as isize {
        s
    } else {
        let (px, py) = (px as usize, py as usize);
        let mut best = u32::MAX;
        let mut prev_min = u32::MAX;
        for dp in 0..count {
            let prev = naive_path_cost(cost, dir, p1, p2, normalize, memo, px, py, dp);
            prev_min = prev_min.min(prev);
            let diff = (dp as isize - d_index as isize).unsigned_abs();
            let penalty = match diff {
                0 => 0,
                1 => p1,
                _ => p2,
            };
            best = best.min(prev + penalty);
        }
        if normalize {
            s + best - prev_min
        } else {
            s + best
        }
    };
    memo[idx] = Some(value);
    value
}

/// One full path-cost volume for a single direction, by literal recursion.
pub fn naive_path_volume(
    cost: &CostVolume,
    dir: PathDirection,
    p1: u32,
    p2: u32,
    normalize: bool,
) -> AggregatedCostVolume {
    let count = cost.range().count();
    let mut memo = vec![None; cost.width() * cost.height() * count];
    let mut out = AggregatedCostVolume::zeroed(cost.width(), cost.height(), cost.range());
    for y in 0..cost.height() {
        for x in 0..cost.width() {
            for d in 0..count {
                let v = naive_path_cost(cost, dir, p1, p2, normalize, &mut memo, x, y, d);
                out.cells_mut()[(y * cost.width() + x) * count + d] = v;
            }
        }
    }
    out
}

/// Aggregated cost volume: the plain sum of all per-direction path volumes.
pub fn naive_sgm(
    cost: &CostVolume,
    paths: PathCount,
    p1: u32,
    p2: u32,
    normalize: bool,
) -> AggregatedCostVolume {
    let mut out = AggregatedCostVolume::zeroed(cost.width(), cost.height(), cost.range());
    for &dir in PathDirection::set(paths) {
        let path = naive_path_volume(cost, dir, p1, p2, normalize);
        for (acc, v) in out.cells_mut().iter_mut().zip(path.cells()) {
            *acc += *v;
        }
    }
    out
}

/// Winner-takes-all disparity by exhaustive scan; ties go to the smallest
/// disparity.
pub fn naive_wta<V: CostVolumeView>(volume: &V) -> DisparityMap {
    let range = volume.range();
    DisparityMap::from_fn(volume.width(), volume.height(), |x, y| {
        let mut best_d = range.min();
        let mut best = u32::MAX;
        for (i, d) in range.iter().enumerate() {
            let c = volume.cost(x, y, i);
            if c < best {
                best = c;
                best_d = d;
            }
        }
        Some(best_d as f32)
    })
}

/// Median of nine values by full sort.
pub fn naive_median9(values: &[f32; 9]) -> f32 {
    let mut sorted = *values;
    sorted.sort_unstable_by(f32::total_cmp);
    sorted[4]
}

/// 3x3 median filter by full sort per pixel. Out-of-image and invalid
/// neighbors contribute a sentinel greater than any disparity; pixels whose
/// median is the sentinel become invalid.
pub fn naive_median_filter(map: &DisparityMap) -> DisparityMap {
    DisparityMap::from_fn(map.width(), map.height(), |x, y| {
        map.get(x, y)?;
        let mut values = [f32::INFINITY; 9];
        let mut k = 0;
        for dy in -1isize..=1 {
            for dx in -1isize..=1 {
                let nx = x as isize + dx;
                let ny = y as isize + dy;
                if nx >= 0 && ny >= 0 && (nx as usize) < map.width() && (ny as usize) < map.height()
                {
                    if let Some(v) = map.get(nx as usize, ny as usize) {
                        values[k] = v;
                    }
                }
                k += 1;
            }
        }
        let median = naive_median9(&values);
        median.is_finite().then_some(median)
    })
}

/// Right-view disparity map from the aggregated cost volume of the left view,
/// by exhaustive evaluation: the minimizing `d` of `aggregated((x + d, y), d)`
/// over all candidates that stay inside the image.
pub fn naive_right_disparity(aggregated: &AggregatedCostVolume) -> DisparityMap {
    let range = aggregated.range();
    DisparityMap::from_fn(aggregated.width(), aggregated.height(), |x, y| {
        let mut best: Option<(u32, u16)> = None;
        for (i, d) in range.iter().enumerate() {
            let lx = x + d as usize;
            if lx >= aggregated.width() {
                continue;
            }
            let c = aggregated.get(lx, y, i);
            match best {
                Some((b, _)) if b <= c => {}
                _ => best = Some((c, d)),
            }
        }
        best.map(|(_, d)| d as f32)
    })
}
