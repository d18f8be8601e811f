//! Census transform and its Hamming-distance cost volume.

use super::CensusImage;
use crate::config::CensusWindow;
use crate::error::Error;
use crate::image::GrayImage;
use crate::parallel;
use crate::volume::{CostVolume, DisparityRange, MAX_CELL_COST};

/// Census-transforms an image.
///
/// See [`CensusImage`] for the exact descriptor layout. The image must be at
/// least as large as the window.
pub fn census_transform(img: &GrayImage, window: CensusWindow) -> Result<CensusImage, Error> {
    census_transform_with(img, window, 1)
}

pub(crate) fn census_transform_with(
    img: &GrayImage,
    window: CensusWindow,
    workers: usize,
) -> Result<CensusImage, Error> {
    let (rx, ry) = window.radius();
    if img.width() < 2 * rx + 1 || img.height() < 2 * ry + 1 {
        return Err(Error::WindowTooLarge {
            window: window.name(),
            width: img.width(),
            height: img.height(),
        });
    }
    let mut descriptors = vec![0u64; img.width() * img.height()];
    parallel::for_each_row_slab(&mut descriptors, img.width(), workers, |y, row| {
        census_row(img, window, y, row);
    });
    Ok(CensusImage::from_descriptors(
        img.width(),
        img.height(),
        window,
        descriptors,
    ))
}

fn census_row(img: &GrayImage, window: CensusWindow, y: usize, out: &mut [u64]) {
    let (rx, ry) = window.radius();
    let w = img.width();
    let h = img.height();
    let interior_y = y >= ry && y + ry < h;
    for x in 0..w {
        let center = img.pixel(x, y);
        let mut bits = 0u64;
        let mut k = 0u32;
        if interior_y && x >= rx && x + rx < w {
            // Interior: every neighbor is in-image, index rows directly.
            for dy in 0..=2 * ry {
                let row = img.row(y + dy - ry);
                for dx in 0..=2 * rx {
                    if dx == rx && dy == ry {
                        continue;
                    }
                    bits |= ((row[x + dx - rx] < center) as u64) << k;
                    k += 1;
                }
            }
        } else {
            // Border: out-of-image neighbors read as a zero-valued margin.
            for dy in -(ry as isize)..=(ry as isize) {
                for dx in -(rx as isize)..=(rx as isize) {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let v = img.pixel_or_zero(x as isize + dx, y as isize + dy);
                    bits |= ((v < center) as u64) << k;
                    k += 1;
                }
            }
        }
        out[x] = bits;
    }
}

/// Cost volume from two census images: the Hamming distance of the left
/// descriptor at `(x, y)` and the right descriptor at `(x - d, y)`.
/// Disparities that reach over the left image border saturate to
/// [`MAX_CELL_COST`].
pub fn hamming_cost_volume(
    left: &CensusImage,
    right: &CensusImage,
    range: DisparityRange,
) -> Result<CostVolume, Error> {
    let mut out = CostVolume::zeroed(left.width(), left.height(), range);
    fill_hamming_cost_volume(left, right, range, &mut out, 1)?;
    Ok(out)
}

pub(crate) fn fill_hamming_cost_volume(
    left: &CensusImage,
    right: &CensusImage,
    range: DisparityRange,
    out: &mut CostVolume,
    workers: usize,
) -> Result<(), Error> {
    if left.window() != right.window() {
        return Err(Error::WindowMismatch);
    }
    if left.width() != right.width() || left.height() != right.height() {
        return Err(Error::DimensionMismatch {
            left_width: left.width(),
            left_height: left.height(),
            right_width: right.width(),
            right_height: right.height(),
        });
    }
    let (w, h) = (left.width(), left.height());
    out.reset(w, h, range);
    let count = range.count();
    let d_min = range.min() as usize;
    parallel::for_each_row_slab(out.cells_mut(), w * count, workers, |y, row| {
        for x in 0..w {
            let cell = &mut row[x * count..(x + 1) * count];
            let l = left.descriptor(x, y);
            for (i, c) in cell.iter_mut().enumerate() {
                let d = d_min + i;
                *c = if x < d {
                    MAX_CELL_COST
                } else {
                    (l ^ right.descriptor(x - d, y)).count_ones() as u8
                };
            }
        }
    });
    Ok(())
}
