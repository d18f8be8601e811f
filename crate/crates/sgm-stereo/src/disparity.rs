//! Disparity maps with an explicit per-pixel validity flag.
//!
//! Invalidity is a flag, not a sentinel value: a pixel that has been
//! invalidated never yields a value again, regardless of what was stored
//! before. Sentinel encodings exist only in the file formats (see `imgio`).

/// A per-pixel disparity map. Values are real-valued to carry subpixel
/// refinement; before refinement they hold integers.
#[derive(Debug, Clone, PartialEq)]
pub struct DisparityMap {
    width: usize,
    height: usize,
    values: Vec<f32>,
    valid: Vec<bool>,
}

impl DisparityMap {
    /// A map with every pixel marked invalid.
    pub fn invalid(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            values: vec![0.0; width * height],
            valid: vec![false; width * height],
        }
    }

    /// Builds a map from a value function; `None` marks the pixel invalid.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> Option<f32>,
    ) -> Self {
        let mut map = Self::invalid(width, height);
        for y in 0..height {
            for x in 0..width {
                if let Some(v) = f(x, y) {
                    map.set(x, y, v);
                }
            }
        }
        map
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    fn idx(&self, x: usize, y: usize) -> usize {
        assert!(x < self.width && y < self.height, "pixel out of bounds");
        y * self.width + x
    }

    /// The disparity at (x, y), or `None` for invalid pixels.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Option<f32> {
        let i = self.idx(x, y);
        self.valid[i].then(|| self.values[i])
    }

    #[inline]
    pub fn is_valid(&self, x: usize, y: usize) -> bool {
        self.valid[self.idx(x, y)]
    }

    /// Stores a value and marks the pixel valid.
    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: f32) {
        let i = self.idx(x, y);
        self.values[i] = value;
        self.valid[i] = true;
    }

    /// Marks the pixel invalid; any stored value becomes unobservable.
    #[inline]
    pub fn invalidate(&mut self, x: usize, y: usize) {
        let i = self.idx(x, y);
        self.valid[i] = false;
    }

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    /// Number of pixels carrying a valid estimate.
    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|&&v| v).count()
    }

    /// Iterates over all pixels as `(x, y, Option<value>)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Option<f32>)> + '_ {
        (0..self.height).flat_map(move |y| (0..self.width).map(move |x| (x, y, self.get(x, y))))
    }

    /// The map mirrored around its vertical axis.
    pub fn mirrored_horizontal(&self) -> DisparityMap {
        DisparityMap::from_fn(self.width, self.height, |x, y| {
            self.get(self.width - 1 - x, y)
        })
    }

    pub(crate) fn rows_mut(&mut self) -> (&mut [f32], &mut [bool], usize) {
        (&mut self.values, &mut self.valid, self.width)
    }
}
