use crate::group::Ball;

/// Mask of `(row, column)` pairs of a dense section whose values are exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedRegion {
    rows: usize,
    cols: usize,
    mask: Vec<bool>,
}

impl CertifiedRegion {
    pub fn full(rows: usize, cols: usize) -> Self {
        CertifiedRegion {
            rows,
            cols,
            mask: vec![true; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut mask = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                mask.push(f(i, j));
            }
        }
        CertifiedRegion { rows, cols, mask }
    }

    /// All rows, columns restricted to `|y| <= r`. Empty when `r` is `None`.
    pub fn columns_within(ball: &Ball, r: Option<usize>) -> Self {
        let limit = r.map_or(0, |r| ball.prefix_len(r));
        Self::from_fn(ball.len(), ball.len(), |_, j| j < limit)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i < self.rows && j < self.cols && self.mask[i * self.cols + j]
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    pub fn intersect(&self, other: &CertifiedRegion) -> CertifiedRegion {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CertifiedRegion {
            rows: self.rows,
            cols: self.cols,
            mask: self.mask.iter().zip(&other.mask).map(|(a, b)| *a && *b).collect(),
        }
    }
}
