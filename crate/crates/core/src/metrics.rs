//! Correlation-coefficient scoring of separated signals.
//!
//! ICA recovers sources only up to order and sign, so estimates are
//! matched to sources through an optimal assignment on `|C|` before
//! averaging.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::SignalMatrix;

/// Pearson correlation `cov(x, y) / (sqrt(cov(x, x)) sqrt(cov(y, y)))`.
pub fn correlation(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::argument(format!(
            "correlation of length-{} and length-{} vectors",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::argument("correlation needs at least 2 samples"));
    }
    let (sxx, syy, sxy) = centered_moments(x, y);
    if sxx <= 0.0 {
        return Err(Error::Degenerate("first input has zero variance".into()));
    }
    if syy <= 0.0 {
        return Err(Error::Degenerate("second input has zero variance".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

fn centered_moments(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    (sxx, syy, sxy)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    /// `assignment[i]` is the estimate row matched to source `i`.
    pub assignment: Vec<usize>,
    /// Sign of the raw correlation of each matched pair.
    pub signs: Vec<i8>,
    pub pair_correlations: Vec<f64>,
    pub c_ave: f64,
}

/// Matches estimate rows to source rows maximizing the total `|C|`.
pub fn match_sources(sources: &SignalMatrix, estimates: &SignalMatrix) -> Result<MatchReport> {
    let m = sources.channels();
    if estimates.channels() != m {
        return Err(Error::argument(format!(
            "{m} sources but {} estimates",
            estimates.channels()
        )));
    }
    if estimates.samples() != sources.samples() {
        return Err(Error::argument(format!(
            "sources have {} samples, estimates {}",
            sources.samples(),
            estimates.samples()
        )));
    }
    let src = sources.rows();
    let est = estimates.rows();
    for (label, rows) in [("source", &src), ("estimate", &est)] {
        if let Some(i) = rows.iter().position(|r| constant(r)) {
            return Err(Error::Degenerate(format!(
                "{label} channel {i} has zero variance"
            )));
        }
    }

    let mut raw = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            raw[(i, j)] = correlation(&src[i], &est[j])?;
        }
    }
    let scores = raw.abs();
    let assignment = optimal_assignment(&scores);
    let pair_correlations: Vec<f64> = assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| scores[(i, j)])
        .collect();
    let signs = assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| if raw[(i, j)] < 0.0 { -1 } else { 1 })
        .collect();
    let c_ave = pair_correlations.iter().sum::<f64>() / m as f64;
    Ok(MatchReport {
        assignment,
        signs,
        pair_correlations,
        c_ave,
    })
}

fn constant(r: &[f64]) -> bool {
    r.iter().all(|&v| v == r[0])
}

/// Maximum-weight perfect matching on a square score matrix (Hungarian
/// method with potentials, O(M³)). Returns the column chosen for each row.
pub fn optimal_assignment(scores: &DMatrix<f64>) -> Vec<usize> {
    let n = scores.nrows();
    assert!(scores.is_square(), "assignment needs a square score matrix");
    // minimize cost = -score; 1-based arrays with a sentinel column 0
    let cost = |i: usize, j: usize| -scores[(i - 1, j - 1)];
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0, j) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0; n];
    for j in 1..=n {
        assignment[row_of[j] - 1] = j - 1;
    }
    assignment
}
