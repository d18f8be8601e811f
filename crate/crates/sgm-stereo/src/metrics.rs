//! Benchmark evaluation: error rates, density, interpolation, rescaling and
//! throughput figures.
//!
//! Two error-rate families are provided. `d1_all` counts pixels whose
//! disparity error is *3 or more* pixels (note the non-strict comparison),
//! `bad_theta` counts errors *strictly greater* than a threshold. Both
//! average over ground-truth pixels; `d1_all` additionally distinguishes the
//! raw estimate (Est) from a background-interpolated dense version (All).

use crate::disparity::DisparityMap;
use crate::error::Error;

/// Thresholds (in pixels) reported by [`EvalReport`], in increasing order.
pub const BAD_THETAS: [f64; 4] = [0.5, 1.0, 2.0, 4.0];

/// Which estimate the D1 error rate is computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum D1Variant {
    /// The raw estimate; only pixels that carry both a ground-truth and an
    /// estimated disparity enter the average.
    Est,
    /// The background-interpolated, fully dense estimate, averaged over all
    /// ground-truth pixels.
    All,
}

fn check_dims(est: &DisparityMap, gt: &DisparityMap) -> Result<(), Error> {
    if est.width() != gt.width() || est.height() != gt.height() {
        return Err(Error::DimensionMismatch {
            left_width: est.width(),
            left_height: est.height(),
            right_width: gt.width(),
            right_height: gt.height(),
        });
    }
    Ok(())
}

/// Fraction of pixels whose disparity error is 3 px or more.
pub fn d1_all(est: &DisparityMap, gt: &DisparityMap, variant: D1Variant) -> Result<f64, Error> {
    check_dims(est, gt)?;
    let interpolated;
    let est = match variant {
        D1Variant::Est => est,
        D1Variant::All => {
            interpolated = background_interpolate(est)?;
            &interpolated
        }
    };
    let mut evaluated = 0u64;
    let mut erroneous = 0u64;
    for (x, y, gt_value) in gt.iter() {
        let Some(gt_value) = gt_value else { continue };
        let Some(est_value) = est.get(x, y) else {
            continue;
        };
        evaluated += 1;
        if (est_value as f64 - gt_value as f64).abs() >= 3.0 {
            erroneous += 1;
        }
    }
    if evaluated == 0 {
        return Err(Error::UndefinedMetric(
            "no pixel carries both a ground-truth and an estimated disparity",
        ));
    }
    Ok(erroneous as f64 / evaluated as f64)
}

/// Fraction of pixels whose disparity error strictly exceeds `theta` pixels,
/// over pixels valid in both maps.
pub fn bad_theta(est: &DisparityMap, gt: &DisparityMap, theta: f64) -> Result<f64, Error> {
    check_dims(est, gt)?;
    let mut evaluated = 0u64;
    let mut bad = 0u64;
    for (x, y, gt_value) in gt.iter() {
        let Some(gt_value) = gt_value else { continue };
        let Some(est_value) = est.get(x, y) else {
            continue;
        };
        evaluated += 1;
        if (est_value as f64 - gt_value as f64).abs() > theta {
            bad += 1;
        }
    }
    if evaluated == 0 {
        return Err(Error::UndefinedMetric(
            "no pixel carries both a ground-truth and an estimated disparity",
        ));
    }
    Ok(bad as f64 / evaluated as f64)
}

/// Fraction of pixels carrying a valid estimate.
pub fn density(est: &DisparityMap) -> f64 {
    est.valid_count() as f64 / est.pixel_count() as f64
}

/// Fills every invalid pixel with a background guess, producing a fully
/// dense map.
///
/// Within a row, each invalid run takes the smaller (that is, farther) of
/// the nearest valid disparities to its left and right; runs touching a row
/// edge copy their single neighbor. Rows without any valid pixel copy the
/// interpolated values of the nearest row that has one (the upper row on
/// ties). Fails on a map with no valid pixel at all.
pub fn background_interpolate(est: &DisparityMap) -> Result<DisparityMap, Error> {
    if est.valid_count() == 0 {
        return Err(Error::AllInvalid);
    }
    let (w, h) = (est.width(), est.height());
    let mut out = est.clone();
    let mut row_has_valid = vec![false; h];
    for y in 0..h {
        let mut any = false;
        let mut x = 0;
        while x < w {
            if est.is_valid(x, y) {
                any = true;
                x += 1;
                continue;
            }
            // Invalid run [x, run_end).
            let run_start = x;
            while x < w && !est.is_valid(x, y) {
                x += 1;
            }
            let left = run_start.checked_sub(1).and_then(|lx| est.get(lx, y));
            let right = (x < w).then(|| est.get(x, y).unwrap());
            let fill = match (left, right) {
                (Some(l), Some(r)) => Some(l.min(r)),
                (Some(l), None) => Some(l),
                (None, Some(r)) => Some(r),
                (None, None) => None,
            };
            if let Some(fill) = fill {
                for fx in run_start..x {
                    out.set(fx, y, fill);
                }
            }
        }
        row_has_valid[y] = any;
    }
    for y in 0..h {
        if row_has_valid[y] {
            continue;
        }
        let source = (0..h)
            .filter(|&sy| row_has_valid[sy])
            .min_by_key(|&sy| (sy.abs_diff(y), sy))
            .expect("at least one row has a valid pixel");
        for x in 0..w {
            let v = out.get(x, source).expect("source row is dense");
            out.set(x, y, v);
        }
    }
    Ok(out)
}

/// Nearest-neighbor upsampling by an integer factor, with valid disparities
/// multiplied by the same factor (a disparity measured on a downscaled pair
/// is proportionally smaller).
pub fn rescale_disparity(est: &DisparityMap, scale: usize) -> DisparityMap {
    assert!(scale >= 1, "scale factor must be at least 1");
    DisparityMap::from_fn(est.width() * scale, est.height() * scale, |x, y| {
        est.get(x / scale, y / scale).map(|v| v * scale as f32)
    })
}

/// Throughput in million disparity estimations per second:
/// `width * height * disparity_count / runtime / 1e6`.
pub fn throughput_mde_s(
    width: usize,
    height: usize,
    disparity_count: usize,
    runtime_s: f64,
) -> Result<f64, Error> {
    if !(runtime_s > 0.0) {
        return Err(Error::UndefinedMetric("runtime must be positive"));
    }
    Ok((width * height * disparity_count) as f64 / runtime_s / 1e6)
}

/// Frame rate implied by a throughput for a given image size and disparity
/// range.
pub fn expected_fps(mde_per_s: f64, width: usize, height: usize, disparity_count: usize) -> f64 {
    assert!(
        width > 0 && height > 0 && disparity_count > 0,
        "dimensions must be positive"
    );
    mde_per_s * 1e6 / (width * height * disparity_count) as f64
}

/// Power efficiency in frames per second per watt.
pub fn fps_per_watt(fps: f64, watts: f64) -> Result<f64, Error> {
    if !(watts > 0.0) {
        return Err(Error::UndefinedMetric("watts must be positive"));
    }
    Ok(fps / watts)
}

/// All accuracy figures of one estimate/ground-truth comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub d1_all_est: f64,
    pub d1_all_all: f64,
    pub bad_0_5: f64,
    pub bad_1: f64,
    pub bad_2: f64,
    pub bad_4: f64,
    pub density: f64,
    /// Ground-truth pixels.
    pub gt_valid_count: usize,
    /// Estimated pixels.
    pub est_valid_count: usize,
    /// Pixels entering the Est-variant averages (valid in both maps).
    pub evaluated_est_count: usize,
    pub total_pixels: usize,
}

/// Evaluates an estimate against a ground-truth map.
pub fn evaluate(est: &DisparityMap, gt: &DisparityMap) -> Result<EvalReport, Error> {
    check_dims(est, gt)?;
    let evaluated_est_count = gt
        .iter()
        .filter(|&(x, y, v)| v.is_some() && est.is_valid(x, y))
        .count();
    Ok(EvalReport {
        d1_all_est: d1_all(est, gt, D1Variant::Est)?,
        d1_all_all: d1_all(est, gt, D1Variant::All)?,
        bad_0_5: bad_theta(est, gt, BAD_THETAS[0])?,
        bad_1: bad_theta(est, gt, BAD_THETAS[1])?,
        bad_2: bad_theta(est, gt, BAD_THETAS[2])?,
        bad_4: bad_theta(est, gt, BAD_THETAS[3])?,
        density: density(est),
        gt_valid_count: gt.valid_count(),
        est_valid_count: est.valid_count(),
        evaluated_est_count,
        total_pixels: est.pixel_count(),
    })
}
