use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use sinica::io::{self, AudioBuffer};
use sinica::SignalMatrix;

/// Sample rate used when writing WAV output for non-audio input.
pub const DEFAULT_SAMPLE_RATE: u32 = 44_100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Wav,
    Pgm,
}

fn format_of(path: &Path) -> Result<Format> {
    match path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .as_deref()
    {
        Some("csv") => Ok(Format::Csv),
        Some("wav") => Ok(Format::Wav),
        Some("pgm") => Ok(Format::Pgm),
        _ => bail!(
            "{}: unrecognized extension (expected .csv, .wav or .pgm)",
            path.display()
        ),
    }
}

/// Signals loaded from disk, with the sample rate when they came from WAV.
pub struct Loaded {
    pub signal: SignalMatrix,
    pub sample_rate: Option<u32>,
}

/// Stacks the rows of every file. A CSV must come alone; WAV channels and
/// PGM images each become one row.
pub fn load_signals(paths: &[PathBuf]) -> Result<Loaded> {
    let first = paths.first().context("no input files given")?;
    let format = format_of(first)?;
    for p in paths {
        if format_of(p)? != format {
            bail!("cannot combine {} with {}", first.display(), p.display());
        }
    }
    match format {
        Format::Csv => {
            if paths.len() > 1 {
                bail!("pass a single CSV holding all channels");
            }
            Ok(Loaded {
                signal: io::read_csv_matrix(first)?,
                sample_rate: None,
            })
        }
        Format::Wav => {
            let mut rows = Vec::new();
            let mut rate = None;
            for p in paths {
                let buf = io::read_wav(p)?;
                rate.get_or_insert(buf.sample_rate());
                rows.extend(buf.signal().rows());
            }
            Ok(Loaded {
                signal: equal_length(rows, paths)?,
                sample_rate: rate,
            })
        }
        Format::Pgm => {
            let mut rows = Vec::new();
            for p in paths {
                rows.extend(io::read_pgm(p)?.signal().rows());
            }
            Ok(Loaded {
                signal: equal_length(rows, paths)?,
                sample_rate: None,
            })
        }
    }
}

fn equal_length(rows: Vec<Vec<f64>>, paths: &[PathBuf]) -> Result<SignalMatrix> {
    SignalMatrix::from_rows(&rows).with_context(|| {
        format!(
            "inputs {} differ in length",
            paths
                .iter()
                .map(|p| p.display().to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )
    })
}

pub fn write_signals(path: &Path, signal: &SignalMatrix, sample_rate: Option<u32>) -> Result<()> {
    match format_of(path)? {
        Format::Csv => io::write_csv_matrix(path, signal)?,
        Format::Wav => {
            let buf = AudioBuffer::peak_normalized(
                signal,
                sample_rate.unwrap_or(DEFAULT_SAMPLE_RATE),
                0.99,
            )?;
            io::write_wav(path, &buf)?;
        }
        Format::Pgm => bail!(
            "{}: PGM output is not supported, write CSV instead",
            path.display()
        ),
    }
    Ok(())
}
