use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// An M-channel by N-sample matrix of finite reals; one row per signal.
///
/// Samples are stored column-major, so every time step `n` is a contiguous
/// length-M column. Sources, mixtures, whitened data and estimates all use
/// this type.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalMatrix(DMatrix<f64>);

impl SignalMatrix {
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        if data.nrows() == 0 || data.ncols() == 0 {
            return Err(Error::argument(
                "signal matrix must have at least one channel and one sample",
            ));
        }
        if let Some((idx, v)) = data.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            let (row, col) = (idx % data.nrows(), idx / data.nrows());
            return Err(Error::argument(format!(
                "non-finite value {v} at channel {row}, sample {col}"
            )));
        }
        Ok(Self(data))
    }

    /// Builds a matrix from equally long channel rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::argument(format!(
                "channel {i} has {} samples, expected {n}",
                rows[i].len()
            )));
        }
        Self::new(DMatrix::from_fn(m, n, |i, j| rows[i][j]))
    }

    pub(crate) fn from_matrix_unchecked(data: DMatrix<f64>) -> Self {
        debug_assert!(data.iter().all(|v| v.is_finite()));
        Self(data)
    }

    pub fn channels(&self) -> usize {
        self.0.nrows()
    }

    pub fn samples(&self) -> usize {
        self.0.ncols()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    /// Copies channel `i` out as a plain vector.
    pub fn row(&self, i: usize) -> Vec<f64> {
        self.0.row(i).iter().copied().collect()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.channels()).map(|i| self.row(i)).collect()
    }
}

/// Square matrix `A` of the instantaneous mixing model `x = A s`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingMatrix(DMatrix<f64>);

impl MixingMatrix {
    /// Determinants at or below this magnitude count as singular.
    pub const SINGULAR_DET: f64 = 1e-12;

    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        if a.nrows() == 0 || !a.is_square() {
            return Err(Error::argument(format!(
                "mixing matrix must be square and non-empty, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::argument("mixing matrix has non-finite entries"));
        }
        Ok(Self(a))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::argument(
                "mixing matrix rows must all have length equal to the row count",
            ));
        }
        Self::new(DMatrix::from_fn(m, m, |i, j| rows[i][j]))
    }

    pub fn size(&self) -> usize {
        self.0.nrows()
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    pub fn is_invertible(&self) -> bool {
        self.determinant().abs() > Self::SINGULAR_DET
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.0
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_ragged_and_non_finite() {
        assert!(SignalMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
        assert!(SignalMatrix::from_rows(&[vec![1.0, f64::NAN]]).is_err());
        assert!(SignalMatrix::from_rows(&[]).is_err());
    }

    #[test]
    fn rows_follow_channel_order() {
        let s = SignalMatrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
        assert_eq!(s.channels(), 2);
        assert_eq!(s.samples(), 3);
        assert_eq!(s.row(1), vec![4.0, 5.0, 6.0]);
    }

    #[test]
    fn mixing_matrix_must_be_square() {
        assert!(MixingMatrix::from_rows(&[vec![1.0, 2.0]]).is_err());
        let a = MixingMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(!a.is_invertible());
    }
}
