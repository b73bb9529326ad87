use serde::{Deserialize, Serialize};

/// Per-pixel score contributions with a validity flag.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScoreGrid {
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
    pub valid: Vec<bool>,
}

impl ScoreGrid {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            values: vec![0.0; width * height],
            valid: vec![false; width * height],
        }
    }

    #[inline]
    pub fn set(&mut self, index: usize, value: f64) {
        self.values[index] = value;
        self.valid[index] = true;
    }
}

/// Sum of the valid contributions and the number of valid pixels.
///
/// The accumulation order is the row-major scalar order, so the result is
/// bit-identical in count and sum to a naive loop over the grid.
pub fn reduce_sums(grid: &ScoreGrid) -> (f64, usize) {
    let mut sum = 0.0;
    let mut count = 0usize;
    for (value, valid) in grid.values.iter().zip(&grid.valid) {
        if *valid {
            sum += *value;
            count += 1;
        }
    }
    (sum, count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn all_invalid_is_zero() {
        let grid = ScoreGrid::new(8, 8);
        assert_eq!(reduce_sums(&grid), (0.0, 0));
    }

    #[test]
    fn constant_ones_count_pixels() {
        let mut grid = ScoreGrid::new(10, 4);
        for i in 0..17 {
            grid.set(i, 1.0);
        }
        let (sum, count) = reduce_sums(&grid);
        assert_eq!(count, 17);
        assert!((sum - 17.0).abs() < 1e-12);
    }

    #[test]
    fn random_vga_buffer_matches_naive_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut grid = ScoreGrid::new(640, 480);
        for i in 0..grid.values.len() {
            if rng.random::<f64>() < 0.8 {
                grid.set(i, rng.random::<f64>());
            }
        }
        let (sum, count) = reduce_sums(&grid);
        let mut naive_sum = 0.0;
        let mut naive_count = 0usize;
        for y in 0..480 {
            for x in 0..640 {
                let i = y * 640 + x;
                if grid.valid[i] {
                    naive_sum += grid.values[i];
                    naive_count += 1;
                }
            }
        }
        assert_eq!(count, naive_count);
        assert!((sum - naive_sum).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn reduce_equals_naive(values in proptest::collection::vec((0.0f64..1.0, any::<bool>()), 1..400)) {
            let width = values.len();
            let mut grid = ScoreGrid::new(width, 1);
            for (i, (v, ok)) in values.iter().enumerate() {
                if *ok {
                    grid.set(i, *v);
                }
            }
            let (sum, count) = reduce_sums(&grid);
            let mut ns = 0.0;
            let mut nc = 0usize;
            for i in 0..width {
                if grid.valid[i] {
                    ns += grid.values[i];
                    nc += 1;
                }
            }
            prop_assert_eq!(count, nc);
            prop_assert!((sum - ns).abs() < 1e-9);
        }
    }
}
