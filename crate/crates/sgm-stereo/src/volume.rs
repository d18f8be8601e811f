//! Cost volumes and the disparity range they are evaluated over.
//!
//! Both volume types use the same memory order: cells are laid out as
//! `(y, x, d)` with the disparity index varying fastest, so all costs of one
//! pixel are contiguous and per-pixel minimum searches stay cache-local.

use crate::error::Error;

/// Maximum supported number of disparity candidates.
pub const MAX_DISPARITY_COUNT: usize = 256;

/// The saturation value written to cells whose matching pixel falls outside
/// the image. It is also the largest value any matching-cost function emits.
pub const MAX_CELL_COST: u8 = 0xFF;

/// An inclusive disparity search range `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DisparityRange {
    min: u16,
    max: u16,
}

impl DisparityRange {
    /// A range `[min, max]` with at most [`MAX_DISPARITY_COUNT`] candidates.
    pub fn new(min: u16, max: u16) -> Result<Self, Error> {
        if min > max {
            return Err(Error::InvalidRange { min, max });
        }
        let count = (max - min) as usize + 1;
        if count > MAX_DISPARITY_COUNT {
            return Err(Error::RangeTooWide { count });
        }
        Ok(Self { min, max })
    }

    /// The common case: `[0, max]`.
    pub fn to_max(max: u16) -> Result<Self, Error> {
        Self::new(0, max)
    }

    pub fn min(&self) -> u16 {
        self.min
    }

    pub fn max(&self) -> u16 {
        self.max
    }

    /// Number of disparity candidates, `max - min + 1`.
    pub fn count(&self) -> usize {
        (self.max - self.min) as usize + 1
    }

    /// True if the integer disparity `d` lies inside the range.
    pub fn contains(&self, d: u16) -> bool {
        d >= self.min && d <= self.max
    }

    /// Iterator over the disparities of the range, smallest first.
    pub fn iter(&self) -> impl Iterator<Item = u16> {
        self.min..=self.max
    }
}

/// Linear cell index for a `(y, x, d)`-ordered volume.
///
/// `d_index` is the offset inside the range (`d - d_min`), not the disparity
/// itself. The mapping is a bijection from `(x, y, d_index)` onto
/// `0..width * height * count`. Panics on out-of-bounds coordinates.
#[inline]
pub fn cell_index(x: usize, y: usize, d_index: usize, width: usize, count: usize) -> usize {
    debug_assert!(x < width, "x out of bounds");
    debug_assert!(d_index < count, "disparity index out of bounds");
    (y * width + x) * count + d_index
}

/// Read-only access shared by [`CostVolume`] and [`AggregatedCostVolume`],
/// wide enough for either cell type.
pub trait CostVolumeView {
    fn width(&self) -> usize;
    fn height(&self) -> usize;
    fn range(&self) -> DisparityRange;
    /// Cost at pixel `(x, y)` for the `d_index`-th disparity of the range.
    fn cost(&self, x: usize, y: usize, d_index: usize) -> u32;
}

/// Per-pixel, per-disparity matching costs with 8-bit cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostVolume {
    width: usize,
    height: usize,
    range: DisparityRange,
    cells: Vec<u8>,
}

impl CostVolume {
    /// An all-zero volume of the given shape.
    pub fn zeroed(width: usize, height: usize, range: DisparityRange) -> Self {
        Self {
            width,
            height,
            range,
            cells: vec![0; width * height * range.count()],
        }
    }

    /// Reshapes in place, reusing the existing allocation where possible.
    /// All cells are reset to zero.
    pub(crate) fn reset(&mut self, width: usize, height: usize, range: DisparityRange) {
        self.width = width;
        self.height = height;
        self.range = range;
        self.cells.clear();
        self.cells.resize(width * height * range.count(), 0);
    }

    /// Builds a volume by evaluating `f(x, y, d)` for every cell. `d` is the
    /// actual disparity, not the index.
    pub fn from_fn(
        width: usize,
        height: usize,
        range: DisparityRange,
        mut f: impl FnMut(usize, usize, u16) -> u8,
    ) -> Self {
        let mut v = Self::zeroed(width, height, range);
        for y in 0..height {
            for x in 0..width {
                for (i, d) in range.iter().enumerate() {
                    v.cells[cell_index(x, y, i, width, range.count())] = f(x, y, d);
                }
            }
        }
        v
    }

    /// The saturation value used for out-of-image disparities.
    pub fn max_cell_cost(&self) -> u8 {
        MAX_CELL_COST
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn range(&self) -> DisparityRange {
        self.range
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, d_index: usize) -> u8 {
        self.cells[cell_index(x, y, d_index, self.width, self.range.count())]
    }

    /// All costs of one pixel, ordered by disparity.
    #[inline]
    pub fn pixel_costs(&self, x: usize, y: usize) -> &[u8] {
        let count = self.range.count();
        let base = (y * self.width + x) * count;
        &self.cells[base..base + count]
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub(crate) fn cells_mut(&mut self) -> &mut [u8] {
        &mut self.cells
    }
}

impl Default for CostVolume {
    fn default() -> Self {
        Self::zeroed(1, 1, DisparityRange { min: 0, max: 0 })
    }
}

impl CostVolumeView for CostVolume {
    fn width(&self) -> usize {
        self.width
    }
    fn height(&self) -> usize {
        self.height
    }
    fn range(&self) -> DisparityRange {
        self.range
    }
    #[inline]
    fn cost(&self, x: usize, y: usize, d_index: usize) -> u32 {
        self.get(x, y, d_index) as u32
    }
}

/// Summed path costs with 32-bit cells.
///
/// Path costs grow along the aggregation path when normalization is off, so
/// cells need far more headroom than the 8-bit matching costs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AggregatedCostVolume {
    width: usize,
    height: usize,
    range: DisparityRange,
    cells: Vec<u32>,
}

impl AggregatedCostVolume {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn range(&self) -> DisparityRange {
        self.range
    }

    pub fn zeroed(width: usize, height: usize, range: DisparityRange) -> Self {
        Self {
            width,
            height,
            range,
            cells: vec![0; width * height * range.count()],
        }
    }

    pub(crate) fn reset(&mut self, width: usize, height: usize, range: DisparityRange) {
        self.width = width;
        self.height = height;
        self.range = range;
        self.cells.clear();
        self.cells.resize(width * height * range.count(), 0);
    }

    /// Builds a volume by evaluating `f(x, y, d)` for every cell. `d` is the
    /// actual disparity, not the index.
    pub fn from_fn(
        width: usize,
        height: usize,
        range: DisparityRange,
        mut f: impl FnMut(usize, usize, u16) -> u32,
    ) -> Self {
        let mut v = Self::zeroed(width, height, range);
        for y in 0..height {
            for x in 0..width {
                for (i, d) in range.iter().enumerate() {
                    v.cells[cell_index(x, y, i, width, range.count())] = f(x, y, d);
                }
            }
        }
        v
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, d_index: usize) -> u32 {
        self.cells[cell_index(x, y, d_index, self.width, self.range.count())]
    }

    #[inline]
    pub fn pixel_costs(&self, x: usize, y: usize) -> &[u32] {
        let count = self.range.count();
        let base = (y * self.width + x) * count;
        &self.cells[base..base + count]
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub(crate) fn cells_mut(&mut self) -> &mut [u32] {
        &mut self.cells
    }
}

impl Default for AggregatedCostVolume {
    fn default() -> Self {
        Self::zeroed(1, 1, DisparityRange { min: 0, max: 0 })
    }
}

impl CostVolumeView for AggregatedCostVolume {
    fn width(&self) -> usize {
        self.width
    }
    fn height(&self) -> usize {
        self.height
    }
    fn range(&self) -> DisparityRange {
        self.range
    }
    #[inline]
    fn cost(&self, x: usize, y: usize, d_index: usize) -> u32 {
        self.get(x, y, d_index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_limits() {
        assert!(DisparityRange::new(3, 2).is_err());
        assert!(DisparityRange::new(0, 255).is_ok());
        assert!(DisparityRange::new(0, 256).is_err());
        assert!(DisparityRange::new(1, 256).is_ok());
        let r = DisparityRange::new(2, 5).unwrap();
        assert_eq!(r.count(), 4);
        assert!(r.contains(2) && r.contains(5));
        assert!(!r.contains(1) && !r.contains(6));
    }

    #[test]
    fn cell_index_layout() {
        // First cell, then d fastest-varying, then row stride = width * count.
        assert_eq!(cell_index(0, 0, 0, 640, 128), 0);
        assert_eq!(cell_index(1, 0, 0, 640, 128), 128);
        assert_eq!(cell_index(0, 1, 0, 640, 128), 81920);
    }

    #[test]
    fn cell_index_is_bijective_on_small_dims() {
        let (w, h, count) = (5, 4, 3);
        let mut seen = vec![false; w * h * count];
        for y in 0..h {
            for x in 0..w {
                for d in 0..count {
                    let idx = cell_index(x, y, d, w, count);
                    assert!(!seen[idx], "index {idx} hit twice");
                    seen[idx] = true;
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn pixel_costs_slice_matches_get() {
        let range = DisparityRange::to_max(3).unwrap();
        let v = CostVolume::from_fn(4, 2, range, |x, y, d| (x + 2 * y) as u8 + d as u8);
        for y in 0..2 {
            for x in 0..4 {
                let slice = v.pixel_costs(x, y);
                for i in 0..range.count() {
                    assert_eq!(slice[i], v.get(x, y, i));
                }
            }
        }
    }
}
