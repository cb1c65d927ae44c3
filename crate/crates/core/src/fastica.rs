//! Deflationary one-unit FastICA.
//!
//! Each component is found by iterating the fixed-point update
//! `w⁺ = E{z g(wᵀz)} − E{g'(wᵀz)} w` on whitened data `z`, projecting the
//! result off the already extracted directions and renormalizing, until
//! `1 − |⟨w⁺, w⟩| < ε`.

use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::nonlinearity::NonlinearityKind;
use crate::preprocess::{self, WhiteningModel};
use crate::signal::SignalMatrix;

/// Residual norms at or below this are treated as lying in the span of the previous vectors.
pub const DEFLATION_RESIDUAL_MIN: f64 = 1e-12;

/// Re-randomizations allowed per component before giving up.
pub const MAX_RESTARTS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct FastIcaConfig {
    pub nonlinearity: NonlinearityKind,
    /// Tolerance of the sign-invariant test `1 − |⟨w_new, w_old⟩| < epsilon`.
    pub epsilon: f64,
    pub max_iterations: usize,
    pub components: usize,
    /// Seeds the stream that draws each component's starting vector.
    pub seed: u64,
}

impl FastIcaConfig {
    pub const DEFAULT_EPSILON: f64 = 1e-6;
    pub const DEFAULT_MAX_ITERATIONS: usize = 1000;

    pub fn new(components: usize, nonlinearity: NonlinearityKind) -> Self {
        Self {
            nonlinearity,
            epsilon: Self::DEFAULT_EPSILON,
            max_iterations: Self::DEFAULT_MAX_ITERATIONS,
            components,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::argument(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::argument("max_iterations must be at least 1"));
        }
        if self.components == 0 {
            return Err(Error::argument("components must be at least 1"));
        }
        Ok(())
    }
}

/// Outcome of extracting a single component.
#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub w: Vec<f64>,
    /// Starting vector after normalization and deflation.
    pub initial: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct SeparationResult {
    /// Rows are the extracted weight vectors in extraction order.
    pub w: DMatrix<f64>,
    /// `Y = W Z`.
    pub estimates: SignalMatrix,
    pub iterations: Vec<usize>,
    pub converged: Vec<bool>,
    /// Starting vector of each component, for diagnostics.
    pub initial_vectors: Vec<Vec<f64>>,
    pub whitening: WhiteningModel,
    /// Wall clock from the start of whitening to the last extracted component.
    pub elapsed_seconds: f64,
}

impl SeparationResult {
    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }

    pub fn total_iterations(&self) -> usize {
        self.iterations.iter().sum()
    }

    /// `W V`, the full demixing matrix acting on centered mixtures.
    pub fn demixing(&self) -> DMatrix<f64> {
        &self.w * self.whitening.whitener()
    }

    pub fn weight_vector(&self, i: usize) -> Vec<f64> {
        self.w.row(i).iter().copied().collect()
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_dim(z: &SignalMatrix, w: &[f64]) -> Result<()> {
    if w.len() != z.channels() {
        return Err(Error::argument(format!(
            "weight vector has length {}, data has {} channels",
            w.len(),
            z.channels()
        )));
    }
    Ok(())
}

/// The un-normalized fixed-point step `E{z g(wᵀz)} − E{g'(wᵀz)} w`.
pub fn one_unit_update(z: &SignalMatrix, w: &[f64], kind: NonlinearityKind) -> Result<Vec<f64>> {
    check_dim(z, w)?;
    let m = w.len();
    let n = z.samples() as f64;
    let mut acc = vec![0.0; m];
    let mut gp_sum = 0.0;
    for col in z.as_matrix().as_slice().chunks_exact(m) {
        let (g, gp) = kind.eval(dot(w, col));
        for (a, c) in acc.iter_mut().zip(col) {
            *a += c * g;
        }
        gp_sum += gp;
    }
    let gp_mean = gp_sum / n;
    Ok(acc
        .iter()
        .zip(w)
        .map(|(a, wi)| a / n - gp_mean * wi)
        .collect())
}

/// Gram-Schmidt projection of `w` off `previous`, then normalization.
///
/// `previous` must be orthonormal.
pub fn deflate(w: &[f64], previous: &[Vec<f64>]) -> Result<Vec<f64>> {
    let mut r = w.to_vec();
    for p in previous {
        if p.len() != r.len() {
            return Err(Error::argument(format!(
                "cannot deflate a length-{} vector against a length-{} vector",
                r.len(),
                p.len()
            )));
        }
        let c = dot(w, p);
        for (ri, pi) in r.iter_mut().zip(p) {
            *ri -= c * pi;
        }
    }
    let norm = dot(&r, &r).sqrt();
    if norm <= DEFLATION_RESIDUAL_MIN {
        return Err(Error::DegenerateProjection { residual: norm });
    }
    r.iter_mut().for_each(|v| *v /= norm);
    Ok(r)
}

fn random_start<R: Rng + ?Sized>(
    m: usize,
    previous: &[Vec<f64>],
    rng: &mut R,
    restarts: &mut usize,
    component: usize,
) -> Result<Vec<f64>> {
    loop {
        let w: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..=1.0)).collect();
        match deflate(&w, previous) {
            Ok(w) => return Ok(w),
            Err(Error::DegenerateProjection { residual }) => {
                *restarts += 1;
                if *restarts > MAX_RESTARTS {
                    return Err(Error::ExtractionFailed {
                        component,
                        reason: format!(
                            "{MAX_RESTARTS} re-randomizations ended in degenerate projections \
                             (last residual {residual:e})"
                        ),
                    });
                }
            }
            Err(e) => return Err(e),
        }
    }
}

/// Finds one more independent direction orthogonal to `previous`.
pub fn extract_component<R: Rng + ?Sized>(
    z: &SignalMatrix,
    previous: &[Vec<f64>],
    config: &FastIcaConfig,
    rng: &mut R,
) -> Result<Extraction> {
    config.validate()?;
    let m = z.channels();
    let component = previous.len();
    if component >= m {
        return Err(Error::argument(format!(
            "already extracted {component} of {m} possible components"
        )));
    }
    let mut restarts = 0;
    let mut w = random_start(m, previous, rng, &mut restarts, component)?;
    let mut initial = w.clone();

    for iteration in 1..=config.max_iterations {
        let update = one_unit_update(z, &w, config.nonlinearity)?;
        let next = match deflate(&update, previous) {
            Ok(next) => next,
            Err(Error::DegenerateProjection { .. }) => {
                restarts += 1;
                if restarts > MAX_RESTARTS {
                    return Err(Error::ExtractionFailed {
                        component,
                        reason: format!("update collapsed {restarts} times"),
                    });
                }
                w = random_start(m, previous, rng, &mut restarts, component)?;
                initial = w.clone();
                continue;
            }
            Err(e) => return Err(e),
        };
        let distance = 1.0 - dot(&next, &w).abs();
        w = next;
        if distance < config.epsilon {
            return Ok(Extraction {
                w,
                initial,
                iterations: iteration,
                converged: true,
            });
        }
    }
    Ok(Extraction {
        w,
        initial,
        iterations: config.max_iterations,
        converged: false,
    })
}

/// Centers, whitens and extracts `config.components` components one by one.
pub fn run(x_mixed: &SignalMatrix, config: &FastIcaConfig) -> Result<SeparationResult> {
    config.validate()?;
    if x_mixed.channels() != config.components {
        return Err(Error::argument(format!(
            "input has {} channels but {} components were requested",
            x_mixed.channels(),
            config.components
        )));
    }
    let start = Instant::now();
    let (z, whitening) = preprocess::whiten(x_mixed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let m = config.components;
    let mut previous: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut iterations = Vec::with_capacity(m);
    let mut converged = Vec::with_capacity(m);
    let mut initial_vectors = Vec::with_capacity(m);
    for _ in 0..m {
        let e = extract_component(&z, &previous, config, &mut rng)?;
        iterations.push(e.iterations);
        converged.push(e.converged);
        initial_vectors.push(e.initial);
        previous.push(e.w);
    }
    let w = DMatrix::from_fn(m, m, |i, j| previous[i][j]);
    let estimates = SignalMatrix::from_matrix_unchecked(&w * z.as_matrix());
    let elapsed_seconds = start.elapsed().as_secs_f64();

    Ok(SeparationResult {
        w,
        estimates,
        iterations,
        converged,
        initial_vectors,
        whitening,
        elapsed_seconds,
    })
}

/// `{E[G(wᵀz)] − E[G(v)]}²`, the one-unit negentropy approximation.
pub fn negentropy_objective(w: &[f64], z: &SignalMatrix, kind: NonlinearityKind) -> Result<f64> {
    check_dim(z, w)?;
    let m = w.len();
    let total: f64 = z
        .as_matrix()
        .as_slice()
        .chunks_exact(m)
        .map(|col| kind.contrast_raw(dot(w, col)))
        .sum();
    let diff = total / z.samples() as f64 - kind.gaussian_expectation();
    Ok(diff * diff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, StandardNormal};

    use NonlinearityKind::*;

    fn uniform_unit_variance(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = 3f64.sqrt();
        (0..n).map(|_| rng.random_range(-a..a)).collect()
    }

    fn gaussian(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    fn laplacian(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let u: f64 = rng.random_range(-0.5..0.5);
                -u.signum() * (1.0 - 2.0 * u.abs()).ln()
            })
            .collect()
    }

    fn row(v: Vec<f64>) -> SignalMatrix {
        SignalMatrix::from_rows(&[v]).unwrap()
    }

    #[test]
    fn deflate_examples() {
        assert_eq!(deflate(&[0.0, 1.0], &[]).unwrap(), vec![0.0, 1.0]);
        assert_eq!(
            deflate(&[1.0, 0.0], &[vec![0.0, 1.0]]).unwrap(),
            vec![1.0, 0.0]
        );
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let d = deflate(&[s, s], &[vec![1.0, 0.0]]).unwrap();
        assert!(d[0].abs() < 1e-15 && (d[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn deflate_rejects_vectors_in_span() {
        assert!(matches!(
            deflate(&[2.0, 0.0], &[vec![1.0, 0.0]]),
            Err(Error::DegenerateProjection { .. })
        ));
        assert!(matches!(
            deflate(&[1.0], &[vec![1.0, 0.0]]),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn update_on_uniform_with_pow3() {
        let z = row(uniform_unit_variance(1_000_000, 1));
        let w = one_unit_update(&z, &[1.0], Pow3).unwrap();
        assert!((w[0] + 1.2).abs() < 0.01, "{w:?}");
    }

    #[test]
    fn update_on_gaussian_vanishes() {
        let z = row(gaussian(1_000_000, 2));
        for kind in NonlinearityKind::ALL {
            let w = one_unit_update(&z, &[1.0], kind).unwrap();
            assert!(w[0].abs() < 0.01, "{kind}: {w:?}");
        }
    }

    #[test]
    fn update_on_zero_data() {
        let z = SignalMatrix::from_rows(&[vec![0.0; 8], vec![0.0; 8]]).unwrap();
        let w = one_unit_update(&z, &[0.6, 0.8], Sin).unwrap();
        assert_eq!(w, vec![-0.6, -0.8]);
        assert!(one_unit_update(&z, &[1.0], Sin).is_err());
    }

    #[test]
    fn single_channel_extraction() {
        let (z, _) = preprocess::whiten(&row(uniform_unit_variance(5000, 3))).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let e = extract_component(&z, &[], &FastIcaConfig::new(1, Tanh), &mut rng).unwrap();
        assert!(e.converged);
        assert_eq!(e.w.len(), 1);
        assert_eq!(e.w[0].abs(), 1.0);
    }

    fn uniform_laplacian_mix() -> SignalMatrix {
        let u = uniform_unit_variance(20_000, 4);
        let l = laplacian(20_000, 5);
        let x0: Vec<f64> = u.iter().zip(&l).map(|(a, b)| 0.8 * a + 0.4 * b).collect();
        let x1: Vec<f64> = u.iter().zip(&l).map(|(a, b)| 0.3 * a - 0.9 * b).collect();
        SignalMatrix::from_rows(&[x0, x1]).unwrap()
    }

    #[test]
    fn two_dimensional_sin_extraction_converges() {
        let (z, _) = preprocess::whiten(&uniform_laplacian_mix()).unwrap();
        let config = FastIcaConfig::new(2, Sin).with_seed(11);
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let e = extract_component(&z, &[], &config, &mut rng).unwrap();
        assert!(e.converged);
        assert!(e.iterations <= 200, "{}", e.iterations);
    }

    #[test]
    fn iteration_budget_of_one() {
        let (z, _) = preprocess::whiten(&uniform_laplacian_mix()).unwrap();
        let config = FastIcaConfig::new(2, Tanh).with_max_iterations(1);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let e = extract_component(&z, &[], &config, &mut rng).unwrap();
        assert!(!e.converged);
        assert_eq!(e.iterations, 1);
    }

    #[test]
    fn last_component_is_forced() {
        let (z, _) = preprocess::whiten(&uniform_laplacian_mix()).unwrap();
        let config = FastIcaConfig::new(2, Gauss);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let first = extract_component(&z, &[], &config, &mut rng).unwrap();
        let second =
            extract_component(&z, std::slice::from_ref(&first.w), &config, &mut rng).unwrap();
        assert!(second.converged);
        assert!(dot(&first.w, &second.w).abs() < 1e-10);
        assert!(extract_component(&z, &[first.w, second.w], &config, &mut rng).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(FastIcaConfig::new(2, Sin).validate().is_ok());
        assert!(FastIcaConfig::new(0, Sin).validate().is_err());
        assert!(FastIcaConfig::new(2, Sin)
            .with_epsilon(0.0)
            .validate()
            .is_err());
        assert!(FastIcaConfig::new(2, Sin)
            .with_epsilon(1.0)
            .validate()
            .is_err());
        assert!(FastIcaConfig::new(2, Sin)
            .with_max_iterations(0)
            .validate()
            .is_err());
    }

    #[test]
    fn run_rejects_channel_mismatch() {
        let x = uniform_laplacian_mix();
        assert!(matches!(
            run(&x, &FastIcaConfig::new(3, Sin)),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn run_is_deterministic() {
        let x = uniform_laplacian_mix();
        let config = FastIcaConfig::new(2, Pow3).with_seed(9);
        let a = run(&x, &config).unwrap();
        let b = run(&x, &config).unwrap();
        assert_eq!(a.w, b.w);
        assert_eq!(a.estimates, b.estimates);
    }

    #[test]
    fn negentropy_examples() {
        let g = row(gaussian(1_000_000, 6));
        for kind in NonlinearityKind::ALL {
            let j = negentropy_objective(&[1.0], &g, kind).unwrap();
            assert!((0.0..1e-4).contains(&j), "{kind}: {j}");
        }
        let u = row(uniform_unit_variance(1_000_000, 7));
        let j = negentropy_objective(&[1.0], &u, Pow3).unwrap();
        assert!((j - 0.09).abs() < 0.005, "{j}");
        assert!(negentropy_objective(&[1.0, 0.0], &u, Pow3).is_err());
    }
}
