//! Centering and whitening (zero-lag, eigendecomposition based).

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::signal::SignalMatrix;

/// Eigenvalues below this fraction of the largest make the covariance rank deficient.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Subtracts each channel's sample mean.
///
/// `SignalMatrix` is never empty, so this cannot fail.
pub fn center(x: &SignalMatrix) -> (SignalMatrix, Vec<f64>) {
    let mean: Vec<f64> = x
        .as_matrix()
        .row_iter()
        .map(|r| r.iter().sum::<f64>() / r.len() as f64)
        .collect();
    let mut centered = x.as_matrix().clone();
    for mut col in centered.column_iter_mut() {
        for (v, m) in col.iter_mut().zip(&mean) {
            *v -= m;
        }
    }
    (SignalMatrix::from_matrix_unchecked(centered), mean)
}

/// `(1/N) X Xᵀ`. The caller is responsible for centering.
pub fn sample_covariance(x: &SignalMatrix) -> Result<DMatrix<f64>> {
    let n = x.samples();
    if n < 2 {
        return Err(Error::argument(format!(
            "covariance needs at least 2 samples, got {n}"
        )));
    }
    let m = x.as_matrix();
    let mut cov = m * m.transpose();
    cov /= n as f64;
    // exact symmetry regardless of summation order
    for i in 0..cov.nrows() {
        for j in 0..i {
            let v = 0.5 * (cov[(i, j)] + cov[(j, i)]);
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }
    Ok(cov)
}

/// The affine map taking raw mixtures to identity-covariance data.
#[derive(Debug, Clone, PartialEq)]
pub struct WhiteningModel {
    mean: Vec<f64>,
    whitener: DMatrix<f64>,
    dewhitener: DMatrix<f64>,
    eigenvalues: Vec<f64>,
}

impl WhiteningModel {
    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// `V = D^{-1/2} Eᵀ`.
    pub fn whitener(&self) -> &DMatrix<f64> {
        &self.whitener
    }

    /// `V⁻¹ = E D^{1/2}`.
    pub fn dewhitener(&self) -> &DMatrix<f64> {
        &self.dewhitener
    }

    /// Covariance eigenvalues, descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Centers `x` with the stored mean and applies the whitener.
    pub fn apply(&self, x: &SignalMatrix) -> Result<SignalMatrix> {
        if x.channels() != self.mean.len() {
            return Err(Error::argument(format!(
                "expected {} channels, got {}",
                self.mean.len(),
                x.channels()
            )));
        }
        let mut centered = x.as_matrix().clone();
        let mean = DVector::from_column_slice(&self.mean);
        for mut col in centered.column_iter_mut() {
            col -= &mean;
        }
        Ok(SignalMatrix::from_matrix_unchecked(
            &self.whitener * centered,
        ))
    }

    /// Maps whitened data back to the original (uncentered) space.
    pub fn reconstruct(&self, z: &SignalMatrix) -> Result<SignalMatrix> {
        if z.channels() != self.mean.len() {
            return Err(Error::argument(format!(
                "expected {} channels, got {}",
                self.mean.len(),
                z.channels()
            )));
        }
        let mut x = &self.dewhitener * z.as_matrix();
        let mean = DVector::from_column_slice(&self.mean);
        for mut col in x.column_iter_mut() {
            col += &mean;
        }
        Ok(SignalMatrix::from_matrix_unchecked(x))
    }
}

/// Centers and whitens `x` so that its sample covariance is the identity.
///
/// Eigenpairs are sorted by descending eigenvalue and each eigenvector is
/// signed so its largest-magnitude entry is positive (lowest index wins
/// ties), which makes the result deterministic.
pub fn whiten(x: &SignalMatrix) -> Result<(SignalMatrix, WhiteningModel)> {
    let (m, n) = (x.channels(), x.samples());
    if n < m {
        return Err(Error::argument(format!(
            "whitening needs at least as many samples as channels ({n} < {m})"
        )));
    }
    let (centered, mean) = center(x);
    let cov = sample_covariance(&centered)?;
    let (eigenvalues, vectors) = sorted_eigen(cov);

    let largest = eigenvalues[0];
    let threshold = RANK_TOLERANCE * largest.max(0.0);
    if let Some(index) = eigenvalues.iter().position(|&l| l <= threshold || l <= 0.0) {
        return Err(Error::RankDeficient {
            index,
            value: eigenvalues[index],
            threshold,
        });
    }

    let inv_sqrt = DMatrix::from_diagonal(&DVector::from_iterator(
        m,
        eigenvalues.iter().map(|l| 1.0 / l.sqrt()),
    ));
    let sqrt = DMatrix::from_diagonal(&DVector::from_iterator(
        m,
        eigenvalues.iter().map(|l| l.sqrt()),
    ));
    let whitener = &inv_sqrt * vectors.transpose();
    let dewhitener = &vectors * sqrt;
    let z = SignalMatrix::from_matrix_unchecked(&whitener * centered.as_matrix());
    Ok((
        z,
        WhiteningModel {
            mean,
            whitener,
            dewhitener,
            eigenvalues,
        },
    ))
}

fn sorted_eigen(cov: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let m = cov.nrows();
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = DMatrix::zeros(m, m);
    for (dst, &src) in order.iter().enumerate() {
        let v = eig.eigenvectors.column(src);
        let mut pivot = 0;
        for i in 1..m {
            if v[i].abs() > v[pivot].abs() {
                pivot = i;
            }
        }
        let sign = if v[pivot] < 0.0 { -1.0 } else { 1.0 };
        vectors.set_column(dst, &(v * sign));
    }
    (values, vectors)
}
