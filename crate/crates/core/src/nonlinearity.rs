//! Contrast functions `G`, their derivatives `g` (the nonlinearities) and
//! second derivatives `g'` for the four supported kinds.
//!
//! | kind    | G(u)            | g(u)            | g'(u)                |
//! |---------|-----------------|-----------------|----------------------|
//! | `tanh`  | log cosh u      | tanh u          | 1 - tanh² u          |
//! | `gauss` | -exp(-u²/2)     | u exp(-u²/2)    | (1 - u²) exp(-u²/2)  |
//! | `pow3`  | u⁴/4            | u³              | 3u²                  |
//! | `sin`   | -cos u          | sin u           | cos u                |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// E[log cosh v] for v ~ N(0, 1), from adaptive quadrature at 30 digits.
const LOGCOSH_GAUSSIAN_MEAN: f64 = 0.374_567_207_491_438;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NonlinearityKind {
    Tanh,
    Gauss,
    Pow3,
    Sin,
}

impl NonlinearityKind {
    pub const ALL: [NonlinearityKind; 4] = [
        NonlinearityKind::Tanh,
        NonlinearityKind::Gauss,
        NonlinearityKind::Pow3,
        NonlinearityKind::Sin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NonlinearityKind::Tanh => "tanh",
            NonlinearityKind::Gauss => "gauss",
            NonlinearityKind::Pow3 => "pow3",
            NonlinearityKind::Sin => "sin",
        }
    }

    /// The contrast function `G(u)`.
    pub fn contrast(self, u: f64) -> Result<f64> {
        finite(u)?;
        Ok(self.contrast_raw(u))
    }

    #[inline]
    pub(crate) fn contrast_raw(self, u: f64) -> f64 {
        match self {
            // log cosh u = |u| + log1p(e^{-2|u|}) - ln 2, stable for large |u|
            NonlinearityKind::Tanh => {
                let a = u.abs();
                a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
            }
            NonlinearityKind::Gauss => -(-0.5 * u * u).exp(),
            NonlinearityKind::Pow3 => u * u * u * u / 4.0,
            NonlinearityKind::Sin => -u.cos(),
        }
    }

    /// The nonlinearity `g(u) = G'(u)`.
    pub fn score(self, u: f64) -> Result<f64> {
        finite(u)?;
        Ok(self.eval(u).0)
    }

    /// `g'(u)`, used by the fixed-point update.
    pub fn score_derivative(self, u: f64) -> Result<f64> {
        finite(u)?;
        Ok(self.eval(u).1)
    }

    /// `E[G(v)]` for a standard normal `v`.
    pub fn gaussian_expectation(self) -> f64 {
        match self {
            NonlinearityKind::Tanh => LOGCOSH_GAUSSIAN_MEAN,
            // E[-exp(-v²/2)] = -1/sqrt(2)
            NonlinearityKind::Gauss => -std::f64::consts::FRAC_1_SQRT_2,
            // E[v⁴] = 3
            NonlinearityKind::Pow3 => 0.75,
            // E[cos v] = exp(-1/2)
            NonlinearityKind::Sin => -(-0.5f64).exp(),
        }
    }

    /// `(g(u), g'(u))` without the finiteness check.
    #[inline]
    pub(crate) fn eval(self, u: f64) -> (f64, f64) {
        match self {
            NonlinearityKind::Tanh => {
                let t = u.tanh();
                (t, 1.0 - t * t)
            }
            NonlinearityKind::Gauss => {
                let u2 = u * u;
                let e = (-0.5 * u2).exp();
                (u * e, (1.0 - u2) * e)
            }
            NonlinearityKind::Pow3 => {
                let u2 = u * u;
                (u2 * u, 3.0 * u2)
            }
            NonlinearityKind::Sin => u.sin_cos(),
        }
    }
}

fn finite(u: f64) -> Result<()> {
    if u.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(u))
    }
}

impl fmt::Display for NonlinearityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NonlinearityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tanh" => Ok(NonlinearityKind::Tanh),
            "gauss" => Ok(NonlinearityKind::Gauss),
            "pow3" => Ok(NonlinearityKind::Pow3),
            "sin" => Ok(NonlinearityKind::Sin),
            other => Err(Error::argument(format!(
                "unknown nonlinearity {other:?} (expected tanh, gauss, pow3 or sin)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    use NonlinearityKind::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn contrast_values() {
        assert_eq!(Tanh.contrast(0.0).unwrap(), 0.0);
        assert_eq!(Gauss.contrast(0.0).unwrap(), -1.0);
        assert_eq!(Pow3.contrast(2.0).unwrap(), 4.0);
        assert_eq!(Sin.contrast(0.0).unwrap(), -1.0);
        // stable form agrees with the naive one where the latter is accurate
        assert!(close(
            Tanh.contrast(1.3).unwrap(),
            1.3f64.cosh().ln(),
            1e-15
        ));
        assert!(Tanh.contrast(800.0).unwrap().is_finite());
    }

    #[test]
    fn score_values() {
        assert_eq!(Tanh.score(0.0).unwrap(), 0.0);
        assert_eq!(Pow3.score(2.0).unwrap(), 8.0);
        assert!(close(
            Tanh.score(1.0).unwrap(),
            0.761_594_155_955_764_9,
            1e-15
        ));
        assert!(close(
            Gauss.score(1.0).unwrap(),
            0.606_530_659_712_633_4,
            1e-15
        ));
    }

    #[test]
    fn score_derivative_values() {
        assert_eq!(Sin.score_derivative(0.0).unwrap(), 1.0);
        assert_eq!(Tanh.score_derivative(0.0).unwrap(), 1.0);
        assert_eq!(Gauss.score_derivative(1.0).unwrap(), 0.0);
    }

    #[test]
    fn non_finite_inputs_are_domain_errors() {
        for kind in NonlinearityKind::ALL {
            for u in [f64::NAN, f64::INFINITY, f64::NEG_INFINITY] {
                assert!(matches!(kind.contrast(u), Err(Error::Domain(_))));
                assert!(matches!(kind.score(u), Err(Error::Domain(_))));
                assert!(matches!(kind.score_derivative(u), Err(Error::Domain(_))));
            }
        }
    }

    #[test]
    fn parsing_is_exact() {
        for kind in NonlinearityKind::ALL {
            assert_eq!(kind.name().parse::<NonlinearityKind>().unwrap(), kind);
        }
        for bad in ["Tanh", "cos", "", "pow3 ", "gaussian"] {
            assert!(bad.parse::<NonlinearityKind>().is_err(), "{bad}");
        }
    }

    #[test]
    fn serde_uses_lowercase_names() {
        assert_eq!(serde_json::to_string(&Pow3).unwrap(), "\"pow3\"");
        let k: NonlinearityKind = serde_json::from_str("\"sin\"").unwrap();
        assert_eq!(k, Sin);
    }

    #[test]
    fn symmetry() {
        let pts: Vec<f64> = (0..=400).map(|i| -4.0 + 0.02 * i as f64).collect();
        for kind in NonlinearityKind::ALL {
            let tol = if matches!(kind, Pow3 | Sin) {
                0.0
            } else {
                1e-12
            };
            for &u in &pts {
                let odd = kind.score(-u).unwrap() + kind.score(u).unwrap();
                let even = kind.contrast(-u).unwrap() - kind.contrast(u).unwrap();
                assert!(odd.abs() <= tol, "{kind} score not odd at {u}");
                assert!(even.abs() <= tol, "{kind} contrast not even at {u}");
            }
        }
    }

    /// Composite Simpson rule for E[G(v)] with v ~ N(0,1) over [-12, 12].
    fn gaussian_quadrature(kind: NonlinearityKind) -> f64 {
        let (a, b, n) = (-12.0, 12.0, 24_000usize);
        let h = (b - a) / n as f64;
        let f = |v: f64| {
            kind.contrast(v).unwrap() * (-0.5 * v * v).exp() / (2.0 * std::f64::consts::PI).sqrt()
        };
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn expectation_constants_match_quadrature() {
        for kind in NonlinearityKind::ALL {
            let q = gaussian_quadrature(kind);
            assert!(close(q, kind.gaussian_expectation(), 1e-10), "{kind}: {q}");
        }
        assert!(close(Tanh.gaussian_expectation(), 0.374567, 1e-6));
        assert!(close(Gauss.gaussian_expectation(), -(0.5f64).sqrt(), 1e-15));
        assert!(close(Sin.gaussian_expectation(), -0.606531, 1e-6));
    }

    #[test]
    fn expectation_constants_match_monte_carlo() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let draws: Vec<f64> = (0..1_000_000)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        for kind in NonlinearityKind::ALL {
            let mean = draws
                .iter()
                .map(|&v| kind.contrast(v).unwrap())
                .sum::<f64>()
                / draws.len() as f64;
            assert!(
                close(mean, kind.gaussian_expectation(), 5e-3),
                "{kind}: {mean}"
            );
        }
    }
}
