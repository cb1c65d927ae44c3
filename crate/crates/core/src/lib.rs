//! Blind source separation with deflationary FastICA.
//!
//! The crate covers the whole pipeline: centering and whitening of the
//! observed mixtures, one-unit fixed-point extraction with Gram-Schmidt
//! deflation, four contrast/nonlinearity pairs (`tanh`, `gauss`, `pow3`
//! and `sin`), correlation-based scoring against known sources, and a small
//! benchmark harness that averages accuracy and runtime over seeded repeats.
//!
//! ```
//! use sinica::{fastica, harness, FastIcaConfig, NonlinearityKind, SourceSpec};
//!
//! let sources = harness::gen_sources(
//!     &[SourceSpec::sine(50), SourceSpec::uniform_noise(1)],
//!     2000,
//! )
//! .unwrap();
//! let a = sinica::MixingMatrix::from_rows(&[vec![1.0, 0.5], vec![0.3, 1.0]]).unwrap();
//! let mixed = harness::mix(&sources, &a).unwrap();
//! let config = FastIcaConfig::new(2, NonlinearityKind::Sin);
//! let result = fastica::run(&mixed, &config).unwrap();
//! let report = sinica::metrics::match_sources(&sources, &result.estimates).unwrap();
//! assert!(report.c_ave > 0.98);
//! ```

pub mod error;
pub mod fastica;
pub mod harness;
pub mod io;
pub mod metrics;
pub mod nonlinearity;
pub mod preprocess;
mod signal;

pub use error::{Error, Result};
pub use fastica::{FastIcaConfig, SeparationResult};
pub use harness::{BenchmarkReport, BenchmarkRow, SourceKind, SourceSpec};
pub use io::{AudioBuffer, ImageBuffer};
pub use metrics::MatchReport;
pub use nonlinearity::NonlinearityKind;
pub use preprocess::WhiteningModel;
pub use signal::{MixingMatrix, SignalMatrix};
