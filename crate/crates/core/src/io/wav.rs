use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use crate::error::{Error, Result};
use crate::signal::SignalMatrix;

const SCALE: f64 = 32768.0;

/// Audio with one row per channel, samples in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    signal: SignalMatrix,
    sample_rate: u32,
}

impl AudioBuffer {
    pub fn new(signal: SignalMatrix, sample_rate: u32) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::argument("sample rate must be positive"));
        }
        if let Some(v) = signal.as_matrix().iter().find(|v| v.abs() > 1.0) {
            return Err(Error::argument(format!("audio sample {v} outside [-1, 1]")));
        }
        Ok(Self {
            signal,
            sample_rate,
        })
    }

    /// Scales every channel so its peak magnitude is `peak` (at most 1).
    pub fn peak_normalized(signal: &SignalMatrix, sample_rate: u32, peak: f64) -> Result<Self> {
        let mut m = signal.as_matrix().clone();
        for mut row in m.row_iter_mut() {
            let max = row.amax();
            if max > 0.0 {
                row /= max;
                row *= peak.min(1.0);
            }
        }
        Self::new(SignalMatrix::new(m)?, sample_rate)
    }

    pub fn signal(&self) -> &SignalMatrix {
        &self.signal
    }

    pub fn into_signal(self) -> SignalMatrix {
        self.signal
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }
}

fn map_hound(path: &Path, e: hound::Error) -> Error {
    match e {
        hound::Error::IoError(io) => Error::io(path, io),
        hound::Error::FormatError(msg) => Error::UnsupportedFormat {
            field: "header",
            detail: msg.to_string(),
        },
        hound::Error::Unsupported => Error::UnsupportedFormat {
            field: "audio_format",
            detail: "only PCM (format tag 1) is supported".into(),
        },
        other => Error::UnsupportedFormat {
            field: "header",
            detail: other.to_string(),
        },
    }
}

/// Reads a 16-bit PCM WAV; sample `s` becomes `s / 32768`.
pub fn read_wav(path: impl AsRef<Path>) -> Result<AudioBuffer> {
    let path = path.as_ref();
    let reader = WavReader::open(path).map_err(|e| map_hound(path, e))?;
    let spec = reader.spec();
    if spec.sample_format != SampleFormat::Int {
        return Err(Error::UnsupportedFormat {
            field: "audio_format",
            detail: "IEEE float samples are not supported, expected PCM".into(),
        });
    }
    if spec.bits_per_sample != 16 {
        return Err(Error::UnsupportedFormat {
            field: "bits_per_sample",
            detail: format!("{} bits per sample, expected 16", spec.bits_per_sample),
        });
    }
    let channels = spec.channels as usize;
    let interleaved = reader
        .into_samples::<i16>()
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| map_hound(path, e))?;
    let frames = interleaved.len() / channels;
    let data = nalgebra::DMatrix::from_fn(channels, frames, |c, n| {
        f64::from(interleaved[n * channels + c]) / SCALE
    });
    AudioBuffer::new(SignalMatrix::new(data)?, spec.sample_rate)
}

fn quantize(v: f64) -> i16 {
    (v * SCALE).round().clamp(-32768.0, 32767.0) as i16
}

/// Writes 16-bit PCM; `v` becomes `clamp(round(v * 32768), -32768, 32767)`.
pub fn write_wav(path: impl AsRef<Path>, buffer: &AudioBuffer) -> Result<()> {
    let path = path.as_ref();
    let signal = buffer.signal.as_matrix();
    let channels =
        u16::try_from(signal.nrows()).map_err(|_| Error::argument("too many channels for WAV"))?;
    let spec = WavSpec {
        channels,
        sample_rate: buffer.sample_rate,
        bits_per_sample: 16,
        sample_format: SampleFormat::Int,
    };
    let mut writer = WavWriter::create(path, spec).map_err(|e| map_hound(path, e))?;
    // column-major storage is already frame-interleaved
    for &v in signal.as_slice() {
        writer
            .write_sample(quantize(v))
            .map_err(|e| map_hound(path, e))?;
    }
    writer.finalize().map_err(|e| map_hound(path, e))
}
