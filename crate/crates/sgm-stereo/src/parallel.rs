//! Stripe-based worker threading.
//!
//! Every parallel stage in this crate assigns workers contiguous, disjoint
//! stripes of rows (or aggregation lines) and lets them write disjoint output
//! regions. Because no two workers ever touch the same output cell and the
//! per-cell computation does not depend on scheduling, results are bitwise
//! identical for any worker count.

use std::marker::PhantomData;
use std::ops::Range;

/// Splits `0..len` into `workers` contiguous ranges whose sizes differ by at
/// most one. Trailing ranges may be empty when `workers > len`.
pub(crate) fn stripes(len: usize, workers: usize) -> Vec<Range<usize>> {
    assert!(workers >= 1, "worker count must be at least 1");
    let base = len / workers;
    let rem = len % workers;
    let mut plan = Vec::with_capacity(workers);
    let mut start = 0;
    for i in 0..workers {
        let size = base + usize::from(i < rem);
        plan.push(start..start + size);
        start += size;
    }
    plan
}

/// Runs `f` over every index stripe of `0..len` on up to `workers` threads.
pub(crate) fn run_stripes(len: usize, workers: usize, f: impl Fn(Range<usize>) + Sync) {
    if workers <= 1 || len <= 1 {
        f(0..len);
        return;
    }
    std::thread::scope(|scope| {
        for range in stripes(len, workers) {
            if range.is_empty() {
                continue;
            }
            let f = &f;
            scope.spawn(move || f(range));
        }
    });
}

/// Calls `f(y, row)` for every `row_len`-sized row of `data`, distributing
/// stripes of rows over `workers` threads.
pub(crate) fn for_each_row_slab<T: Send>(
    data: &mut [T],
    row_len: usize,
    workers: usize,
    f: impl Fn(usize, &mut [T]) + Sync,
) {
    debug_assert!(row_len > 0 && data.len() % row_len == 0);
    let rows = data.len() / row_len;
    if workers <= 1 || rows <= 1 {
        for (y, row) in data.chunks_mut(row_len).enumerate() {
            f(y, row);
        }
        return;
    }
    std::thread::scope(|scope| {
        let mut rest = data;
        for range in stripes(rows, workers) {
            if range.is_empty() {
                continue;
            }
            let (stripe, tail) = rest.split_at_mut(range.len() * row_len);
            rest = tail;
            let f = &f;
            let y0 = range.start;
            scope.spawn(move || {
                for (i, row) in stripe.chunks_mut(row_len).enumerate() {
                    f(y0 + i, row);
                }
            });
        }
    });
}

/// Like [`for_each_row_slab`] but for two parallel buffers of the same row
/// structure (e.g. disparity values and their validity flags).
pub(crate) fn for_each_row_slab2<A: Send, B: Send>(
    a: &mut [A],
    b: &mut [B],
    rows_a: usize,
    workers: usize,
    f: impl Fn(usize, &mut [A], &mut [B]) + Sync,
) {
    debug_assert!(rows_a > 0 && a.len() % rows_a == 0 && b.len() % rows_a == 0);
    let row_a = a.len() / rows_a;
    let row_b = b.len() / rows_a;
    if workers <= 1 || rows_a <= 1 {
        for (y, (ra, rb)) in a.chunks_mut(row_a).zip(b.chunks_mut(row_b)).enumerate() {
            f(y, ra, rb);
        }
        return;
    }
    std::thread::scope(|scope| {
        let mut rest_a = a;
        let mut rest_b = b;
        for range in stripes(rows_a, workers) {
            if range.is_empty() {
                continue;
            }
            let (sa, ta) = rest_a.split_at_mut(range.len() * row_a);
            let (sb, tb) = rest_b.split_at_mut(range.len() * row_b);
            rest_a = ta;
            rest_b = tb;
            let f = &f;
            let y0 = range.start;
            scope.spawn(move || {
                for (i, (ra, rb)) in sa.chunks_mut(row_a).zip(sb.chunks_mut(row_b)).enumerate() {
                    f(y0 + i, ra, rb);
                }
            });
        }
    });
}

/// A shared view of a `u32` buffer for concurrent accumulation into disjoint
/// cells.
///
/// Aggregation lines of one path direction cover disjoint pixel sets, but for
/// vertical and diagonal directions their cells interleave in memory, so the
/// disjointness cannot be expressed through slice splitting. This wrapper
/// makes the caller responsible for it instead.
pub(crate) struct SharedAccumulator<'a> {
    ptr: *mut u32,
    len: usize,
    _marker: PhantomData<&'a mut [u32]>,
}

unsafe impl Send for SharedAccumulator<'_> {}
unsafe impl Sync for SharedAccumulator<'_> {}

impl<'a> SharedAccumulator<'a> {
    pub(crate) fn new(cells: &'a mut [u32]) -> Self {
        Self {
            ptr: cells.as_mut_ptr(),
            len: cells.len(),
            _marker: PhantomData,
        }
    }

    /// Adds `value` to the cell at `index`.
    ///
    /// # Safety
    /// No other thread may read or write `index` while this call runs.
    #[inline]
    pub(crate) unsafe fn add(&self, index: usize, value: u32) {
        debug_assert!(index < self.len);
        *self.ptr.add(index) += value;
    }
}
