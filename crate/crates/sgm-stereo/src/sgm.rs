//! Semi-global matching: path-wise cost aggregation and the winner-takes-all
//! disparity extraction.
//!
//! The matching costs are regularized by dynamic programming along up to
//! eight concentric paths per pixel. Along one path with direction `r`:
//!
//! ```text
//! L_r(p, d) = S(p, d) + min( L_r(p-r, d),
//!                            L_r(p-r, d-1) + P1,
//!                            L_r(p-r, d+1) + P1,
//!                            min_d' L_r(p-r, d') + P2 )
//! ```
//!
//! with `L_r(p, d) = S(p, d)` at the start of each maximal line. The `d±1`
//! terms are simply absent at the ends of the disparity range. With
//! `normalize` enabled, `min_d' L_r(p-r, d')` is additionally subtracted at
//! every step; this bounds cell growth to `S_max + P2` independent of path
//! length and provably never changes the winning disparity, which the test
//! suite enforces.
//!
//! All path costs are summed into an aggregated volume; since the per-cell
//! sums are exact integer arithmetic over disjoint regions, the result is
//! bitwise identical for any path order, worker count or schedule.

use crate::config::PathCount;
use crate::disparity::DisparityMap;
use crate::error::Error;
use crate::parallel::{self, SharedAccumulator};
use crate::volume::{AggregatedCostVolume, CostVolume, CostVolumeView};

/// One aggregation direction, as a unit step in image coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathDirection {
    pub dx: i8,
    pub dy: i8,
}

impl PathDirection {
    pub const LR: PathDirection = PathDirection { dx: 1, dy: 0 };
    pub const RL: PathDirection = PathDirection { dx: -1, dy: 0 };
    pub const TB: PathDirection = PathDirection { dx: 0, dy: 1 };
    pub const BT: PathDirection = PathDirection { dx: 0, dy: -1 };
    pub const TLBR: PathDirection = PathDirection { dx: 1, dy: 1 };
    pub const TRBL: PathDirection = PathDirection { dx: -1, dy: 1 };
    pub const BLTR: PathDirection = PathDirection { dx: 1, dy: -1 };
    pub const BRTL: PathDirection = PathDirection { dx: -1, dy: -1 };

    /// The horizontal and vertical directions used in 4-path mode.
    pub const STRAIGHT: &'static [PathDirection] =
        &[Self::LR, Self::RL, Self::TB, Self::BT];

    pub const DIAGONAL: &'static [PathDirection] =
        &[Self::TLBR, Self::TRBL, Self::BLTR, Self::BRTL];

    /// All eight canonical directions.
    pub const ALL: &'static [PathDirection] = &[
        Self::LR,
        Self::RL,
        Self::TB,
        Self::BT,
        Self::TLBR,
        Self::TRBL,
        Self::BLTR,
        Self::BRTL,
    ];

    /// The direction set for a path count.
    pub fn set(paths: PathCount) -> &'static [PathDirection] {
        match paths {
            PathCount::Four => Self::STRAIGHT,
            PathCount::Eight => Self::ALL,
        }
    }

    /// Start pixels of all maximal lines of this direction in a `w x h`
    /// image: exactly the pixels whose predecessor lies outside.
    fn line_starts(&self, w: usize, h: usize) -> Vec<(usize, usize)> {
        let mut starts = Vec::new();
        match (self.dx, self.dy) {
            (1, 0) => starts.extend((0..h).map(|y| (0, y))),
            (-1, 0) => starts.extend((0..h).map(|y| (w - 1, y))),
            (0, 1) => starts.extend((0..w).map(|x| (x, 0))),
            (0, -1) => starts.extend((0..w).map(|x| (x, h - 1))),
            (1, 1) => {
                starts.extend((0..w).map(|x| (x, 0)));
                starts.extend((1..h).map(|y| (0, y)));
            }
            (-1, 1) => {
                starts.extend((0..w).map(|x| (x, 0)));
                starts.extend((1..h).map(|y| (w - 1, y)));
            }
            (1, -1) => {
                starts.extend((0..w).map(|x| (x, h - 1)));
                starts.extend((0..h - 1).map(|y| (0, y)));
            }
            (-1, -1) => {
                starts.extend((0..w).map(|x| (x, h - 1)));
                starts.extend((0..h - 1).map(|y| (w - 1, y)));
            }
            _ => panic!("invalid path direction ({}, {})", self.dx, self.dy),
        }
        starts
    }
}

/// Walks one maximal line, feeding the sink the cell base index and the
/// freshly computed path costs for every visited pixel. `prev` and `cur` are
/// caller-provided scratch of length `count`.
fn walk_line<'a>(
    cost: &CostVolume,
    dir: PathDirection,
    start: (usize, usize),
    p1: u32,
    p2: u32,
    normalize: bool,
    mut prev: &'a mut [u32],
    mut cur: &'a mut [u32],
    mut sink: impl FnMut(usize, &[u32]),
) {
    let (w, h) = (cost.width(), cost.height());
    let count = cost.range().count();
    let (mut x, mut y) = (start.0 as isize, start.1 as isize);
    let mut first = true;
    let mut prev_min = 0u32;
    while x >= 0 && y >= 0 && x < w as isize && y < h as isize {
        let base = (y as usize * w + x as usize) * count;
        let s = cost.pixel_costs(x as usize, y as usize);
        let mut cur_min = u32::MAX;
        if first {
            for d in 0..count {
                cur[d] = s[d] as u32;
                cur_min = cur_min.min(cur[d]);
            }
            first = false;
        } else {
            let floor = prev_min + p2;
            for d in 0..count {
                let mut best = prev[d].min(floor);
                if d > 0 {
                    best = best.min(prev[d - 1] + p1);
                }
                if d + 1 < count {
                    best = best.min(prev[d + 1] + p1);
                }
                let l = if normalize {
                    s[d] as u32 + best - prev_min
                } else {
                    s[d] as u32 + best
                };
                cur[d] = l;
                cur_min = cur_min.min(l);
            }
        }
        sink(base, cur);
        std::mem::swap(&mut prev, &mut cur);
        prev_min = cur_min;
        x += dir.dx as isize;
        y += dir.dy as isize;
    }
}

/// Path-cost volume `L_r` for a single direction.
pub fn aggregate_path(
    cost: &CostVolume,
    dir: PathDirection,
    p1: u32,
    p2: u32,
    normalize: bool,
) -> AggregatedCostVolume {
    let mut out = AggregatedCostVolume::zeroed(cost.width(), cost.height(), cost.range());
    let count = cost.range().count();
    let cells = out.cells_mut();
    let mut prev = vec![0u32; count];
    let mut cur = vec![0u32; count];
    for start in dir.line_starts(cost.width(), cost.height()) {
        walk_line(cost, dir, start, p1, p2, normalize, &mut prev, &mut cur, |base, l| {
            cells[base..base + count].copy_from_slice(l);
        });
    }
    out
}

/// Aggregated cost volume: the sum of the path costs of the selected
/// direction set.
pub fn aggregate_all(
    cost: &CostVolume,
    paths: PathCount,
    p1: u32,
    p2: u32,
    normalize: bool,
) -> Result<AggregatedCostVolume, Error> {
    let mut out = AggregatedCostVolume::zeroed(cost.width(), cost.height(), cost.range());
    fill_aggregate_all(cost, paths, p1, p2, normalize, &mut out, 1)?;
    Ok(out)
}

pub(crate) fn fill_aggregate_all(
    cost: &CostVolume,
    paths: PathCount,
    p1: u32,
    p2: u32,
    normalize: bool,
    out: &mut AggregatedCostVolume,
    workers: usize,
) -> Result<(), Error> {
    // 32-bit cells must be provably sufficient. Without normalization a path
    // cost grows by at most S_max + P2 per step; with it, every path cost is
    // bounded by S_max + P2 outright.
    let step = crate::volume::MAX_CELL_COST as u128 + p2 as u128;
    let max_path = if normalize {
        step
    } else {
        step * cost.width().max(cost.height()) as u128
    };
    if max_path * paths.count() as u128 > u32::MAX as u128 {
        return Err(Error::AggregationOverflow);
    }
    out.reset(cost.width(), cost.height(), cost.range());
    let count = cost.range().count();
    let sum = SharedAccumulator::new(out.cells_mut());
    for &dir in PathDirection::set(paths) {
        let starts = dir.line_starts(cost.width(), cost.height());
        parallel::run_stripes(starts.len(), workers, |stripe| {
            let mut prev = vec![0u32; count];
            let mut cur = vec![0u32; count];
            for &start in &starts[stripe] {
                walk_line(cost, dir, start, p1, p2, normalize, &mut prev, &mut cur, |base, l| {
                    for (d, &v) in l.iter().enumerate() {
                        // Lines of one direction cover disjoint pixels, so
                        // no other worker touches these cells this pass.
                        unsafe { sum.add(base + d, v) };
                    }
                });
            }
        });
    }
    Ok(())
}

/// Winner-takes-all disparity map: the per-pixel argmin over the volume,
/// with ties broken toward the smaller disparity. Every pixel is valid.
pub fn wta<V: CostVolumeView + Sync>(volume: &V) -> DisparityMap {
    wta_with(volume, 1)
}

pub(crate) fn wta_with<V: CostVolumeView + Sync>(volume: &V, workers: usize) -> DisparityMap {
    let range = volume.range();
    let (w, h) = (volume.width(), volume.height());
    let mut map = DisparityMap::invalid(w, h);
    let (values, valid, _) = map.rows_mut();
    parallel::for_each_row_slab2(values, valid, h, workers, |y, vrow, frow| {
        for x in 0..w {
            let mut best = u32::MAX;
            let mut best_d = range.min();
            for (i, d) in range.iter().enumerate() {
                let c = volume.cost(x, y, i);
                if c < best {
                    best = c;
                    best_d = d;
                }
            }
            vrow[x] = best_d as f32;
            frow[x] = true;
        }
    });
    map
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::volume::DisparityRange;

    fn rng_volume(w: usize, h: usize, d_max: u16, seed: u64) -> CostVolume {
        let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15) | 1;
        CostVolume::from_fn(w, h, DisparityRange::to_max(d_max).unwrap(), |_, _, _| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 40) as u8
        })
    }

    #[test]
    fn recursion_base_single_pixel_lines() {
        let cost = rng_volume(1, 5, 3, 1);
        // LR lines in a 1-wide image have length one.
        let path = aggregate_path(&cost, PathDirection::LR, 5, 20, false);
        for y in 0..5 {
            for d in 0..4 {
                assert_eq!(path.get(0, y, d), cost.get(0, y, d) as u32);
            }
        }
    }

    #[test]
    fn two_pixel_line_by_hand() {
        // Two pixels wide, costs [2, 0] then [1, 3]; P1 = 1, P2 = 2.
        let range = DisparityRange::to_max(1).unwrap();
        let cost = CostVolume::from_fn(2, 1, range, |x, _, d| match (x, d) {
            (0, 0) => 2,
            (0, 1) => 0,
            (1, 0) => 1,
            (1, 1) => 3,
            _ => unreachable!(),
        });
        let path = aggregate_path(&cost, PathDirection::LR, 1, 2, false);
        assert_eq!(path.get(0, 0, 0), 2);
        assert_eq!(path.get(0, 0, 1), 0);
        assert_eq!(path.get(1, 0, 0), 2);
        assert_eq!(path.get(1, 0, 1), 3);
    }

    #[test]
    fn path_cost_dominates_matching_cost() {
        let cost = rng_volume(7, 6, 7, 42);
        for &dir in PathDirection::ALL {
            let path = aggregate_path(&cost, dir, 3, 11, true);
            for y in 0..6 {
                for x in 0..7 {
                    for d in 0..8 {
                        assert!(path.get(x, y, d) >= cost.get(x, y, d) as u32);
                    }
                }
            }
        }
    }

    #[test]
    fn single_pixel_image_sums_paths() {
        let cost = rng_volume(1, 1, 5, 9);
        let agg = aggregate_all(&cost, PathCount::Eight, 2, 7, false).unwrap();
        for d in 0..6 {
            assert_eq!(agg.get(0, 0, d), 8 * cost.get(0, 0, d) as u32);
        }
    }

    #[test]
    fn zero_volume_stays_zero() {
        let range = DisparityRange::to_max(4).unwrap();
        let cost = CostVolume::zeroed(6, 5, range);
        for normalize in [false, true] {
            let agg = aggregate_all(&cost, PathCount::Eight, 3, 10, normalize).unwrap();
            assert!(agg.cells().iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn matches_naive_recursion() {
        for seed in 0..12 {
            let cost = rng_volume(6, 4, 7, seed);
            for paths in [PathCount::Four, PathCount::Eight] {
                for normalize in [false, true] {
                    let fast = aggregate_all(&cost, paths, 2, 9, normalize).unwrap();
                    let slow = oracle::naive_sgm(&cost, paths, 2, 9, normalize);
                    assert_eq!(fast.cells(), slow.cells(), "seed {seed} {paths:?} {normalize}");
                }
            }
        }
    }

    #[test]
    fn per_direction_matches_naive() {
        let cost = rng_volume(5, 5, 5, 77);
        for &dir in PathDirection::ALL {
            for normalize in [false, true] {
                let fast = aggregate_path(&cost, dir, 1, 4, normalize);
                let slow = oracle::naive_path_volume(&cost, dir, 1, 4, normalize);
                assert_eq!(fast.cells(), slow.cells(), "{dir:?} {normalize}");
            }
        }
    }

    #[test]
    fn worker_count_does_not_change_the_sum() {
        let cost = rng_volume(9, 7, 7, 5);
        let mut one = AggregatedCostVolume::zeroed(9, 7, cost.range());
        let mut many = AggregatedCostVolume::zeroed(9, 7, cost.range());
        fill_aggregate_all(&cost, PathCount::Eight, 3, 12, true, &mut one, 1).unwrap();
        fill_aggregate_all(&cost, PathCount::Eight, 3, 12, true, &mut many, 5).unwrap();
        assert_eq!(one.cells(), many.cells());
    }

    #[test]
    fn overflow_guard_rejects_unbounded_growth() {
        let cost = rng_volume(8, 8, 3, 2);
        // Penalties this large cannot be accumulated without normalization.
        let r = aggregate_all(&cost, PathCount::Eight, 1, u32::MAX / 4, false);
        assert!(matches!(r, Err(Error::AggregationOverflow)));
        assert!(aggregate_all(&cost, PathCount::Eight, 1, 1000, false).is_ok());
    }

    #[test]
    fn wta_picks_minimum_and_breaks_ties_low() {
        let range = DisparityRange::to_max(2).unwrap();
        let unique = CostVolume::from_fn(1, 1, range, |_, _, d| [7, 3, 9][d as usize]);
        assert_eq!(wta(&unique).get(0, 0), Some(1.0));
        let tied = CostVolume::from_fn(1, 1, range, |_, _, d| [3, 1, 1][d as usize]);
        assert_eq!(wta(&tied).get(0, 0), Some(1.0));
    }

    #[test]
    fn wta_matches_exhaustive_scan() {
        let cost = rng_volume(6, 4, 7, 123);
        let agg = aggregate_all(&cost, PathCount::Eight, 2, 9, true).unwrap();
        assert_eq!(wta(&agg), oracle::naive_wta(&agg));
        assert_eq!(wta(&cost), oracle::naive_wta(&cost));
    }

    #[test]
    fn normalization_never_changes_the_winner() {
        for seed in 0..10 {
            let cost = rng_volume(8, 5, 7, seed * 31 + 1);
            let on = aggregate_all(&cost, PathCount::Eight, 2, 11, true).unwrap();
            let off = aggregate_all(&cost, PathCount::Eight, 2, 11, false).unwrap();
            assert_eq!(wta(&on), wta(&off), "seed {seed}");
        }
    }

    #[test]
    fn constant_shift_behaviour() {
        // Shifting every matching cost by a constant shifts normalized path
        // costs by exactly that constant; the winner never moves in either
        // mode.
        let raw = rng_volume(6, 3, 3, 8);
        let base = CostVolume::from_fn(6, 3, raw.range(), |x, y, d| raw.get(x, y, d as usize) / 2);
        let c = 5u8;
        let shifted = CostVolume::from_fn(6, 3, base.range(), |x, y, d| {
            base.get(x, y, (d - base.range().min()) as usize) + c
        });
        for &dir in PathDirection::ALL {
            let a = aggregate_path(&base, dir, 2, 6, true);
            let b = aggregate_path(&shifted, dir, 2, 6, true);
            for (va, vb) in a.cells().iter().zip(b.cells()) {
                assert_eq!(va + c as u32, *vb);
            }
        }
        for normalize in [false, true] {
            let a = aggregate_all(&base, PathCount::Eight, 2, 6, normalize).unwrap();
            let b = aggregate_all(&shifted, PathCount::Eight, 2, 6, normalize).unwrap();
            assert_eq!(wta(&a), wta(&b));
        }
    }

    #[test]
    fn unnormalized_shift_grows_with_path_position() {
        // Along a single LR line, pixel k gains (k + 1) * c without
        // normalization.
        let raw = rng_volume(5, 1, 2, 3);
        let base = CostVolume::from_fn(5, 1, raw.range(), |x, y, d| raw.get(x, y, d as usize) / 2);
        let c = 4u8;
        let shifted = CostVolume::from_fn(5, 1, base.range(), |x, y, d| {
            base.get(x, y, (d - base.range().min()) as usize) + c
        });
        let a = aggregate_path(&base, PathDirection::LR, 1, 3, false);
        let b = aggregate_path(&shifted, PathDirection::LR, 1, 3, false);
        for x in 0..5 {
            for d in 0..3 {
                assert_eq!(a.get(x, 0, d) + (x as u32 + 1) * c as u32, b.get(x, 0, d));
            }
        }
    }
}
