//! Time- and frequency-domain characterization of force traces: extrema,
//! population moments (mean, std, Fisher-Pearson skewness, excess
//! kurtosis) and the dominant spectral frequency.

pub mod compare;
pub mod moments;
pub mod reference;
pub mod spectrum;

use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;
use thiserror::Error;

use crate::par::{self, Execution};
use crate::types::ForceTrace;
pub use compare::{
    compare_stats, compare_to_reference, ComparisonReport, FieldDelta, Tolerance, Tolerances,
};
pub use moments::Moments;
pub use reference::{reference_stats, Reference};
pub use spectrum::{Spectrum, DC_GUARD_HZ, MIN_SAMPLES};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("signal has zero variance; skewness, kurtosis and frequency are undefined")]
    ZeroVariance,
    #[error("window holds {got} samples, need at least {need}")]
    TooFewSamples { got: usize, need: usize },
    #[error("cannot write {path}: {cause}")]
    Io { path: String, cause: String },
}

/// The seven-number characterization of a force trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceStats {
    pub max: f64,
    pub min: f64,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub skew: Option<f64>,
    /// Excess kurtosis.
    pub kurt: Option<f64>,
    pub freq: Option<f64>,
}

/// Time-windowed view of a trace's normal force.
pub fn window_fz(trace: &ForceTrace, window: Option<(f64, f64)>) -> Vec<f64> {
    trace.samples[trace.window_range(window)]
        .iter()
        .map(|s| s.fz)
        .collect()
}

/// Statistics of an arbitrary uniformly sampled signal. Constant signals
/// yield `ZeroVariance`.
pub fn signal_stats(signal: &[f64], sample_rate: f64) -> Result<TraceStats, AnalysisError> {
    let (stats, flat) = describe_signal(signal, sample_rate)?;
    if flat {
        return Err(AnalysisError::ZeroVariance);
    }
    Ok(stats)
}

/// Like [`signal_stats`] but reports constant signals with the shape
/// statistics left empty instead of failing.
pub fn describe_signal(
    signal: &[f64],
    sample_rate: f64,
) -> Result<(TraceStats, bool), AnalysisError> {
    describe_signal_with(signal, sample_rate, Execution::Parallel)
}

fn describe_signal_with(
    signal: &[f64],
    sample_rate: f64,
    exec: Execution,
) -> Result<(TraceStats, bool), AnalysisError> {
    if signal.len() < MIN_SAMPLES {
        return Err(AnalysisError::TooFewSamples {
            got: signal.len(),
            need: MIN_SAMPLES,
        });
    }
    let max = signal.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = signal.iter().copied().fold(f64::INFINITY, f64::min);
    if spectrum::is_flat(signal) {
        let stats = TraceStats {
            max,
            min,
            mean: signal[0],
            std: 0.0,
            skew: None,
            kurt: None,
            freq: None,
        };
        return Ok((stats, true));
    }
    let m = Moments::of_with(signal, exec);
    let freq = spectrum::spectrum(signal, sample_rate)?.dominant();
    let stats = TraceStats {
        max,
        min,
        mean: m.mean,
        std: m.std(),
        skew: Some(m.skewness()),
        kurt: Some(m.excess_kurtosis()),
        freq,
    };
    Ok((stats, false))
}

pub fn trace_stats(
    trace: &ForceTrace,
    window: Option<(f64, f64)>,
) -> Result<TraceStats, AnalysisError> {
    signal_stats(&window_fz(trace, window), trace.sample_rate)
}

/// Lenient form used for reporting: constant windows produce stats with
/// `skew`, `kurt` and `freq` unset plus a warning.
pub fn summarize(
    trace: &ForceTrace,
    window: Option<(f64, f64)>,
) -> Result<(TraceStats, Vec<String>), AnalysisError> {
    let (stats, flat) = describe_signal(&window_fz(trace, window), trace.sample_rate)?;
    let mut warnings = Vec::new();
    if flat {
        warnings.push("constant force window: skew, kurt and freq are undefined".to_string());
    }
    Ok((stats, warnings))
}

pub fn dominant_frequency(
    trace: &ForceTrace,
    window: Option<(f64, f64)>,
) -> Result<f64, AnalysisError> {
    spectrum::dominant_frequency(&window_fz(trace, window), trace.sample_rate)
}

pub fn trace_spectrum(
    trace: &ForceTrace,
    window: Option<(f64, f64)>,
) -> Result<Spectrum, AnalysisError> {
    spectrum::spectrum(&window_fz(trace, window), trace.sample_rate)
}

/// Writes `freq_hz,magnitude` rows of the spectrum the dominant-frequency
/// estimate inspects.
pub fn export_spectrum(
    trace: &ForceTrace,
    window: Option<(f64, f64)>,
    path: &Path,
) -> Result<Spectrum, AnalysisError> {
    let spec = trace_spectrum(trace, window)?;
    write_spectrum(&spec, path)?;
    Ok(spec)
}

pub fn write_spectrum(spec: &Spectrum, path: &Path) -> Result<(), AnalysisError> {
    let io_err = |e: std::io::Error| AnalysisError::Io {
        path: path.display().to_string(),
        cause: e.to_string(),
    };
    let mut out = std::io::BufWriter::new(std::fs::File::create(path).map_err(io_err)?);
    writeln!(out, "freq_hz,magnitude").map_err(io_err)?;
    for (f, m) in spec.freqs.iter().zip(&spec.magnitude) {
        writeln!(out, "{f},{m}").map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

/// Statistics for many traces at once.
pub fn batch_stats(
    traces: &[(ForceTrace, Option<(f64, f64)>)],
    exec: Execution,
) -> Vec<Result<TraceStats, AnalysisError>> {
    par::map(traces, exec, |(trace, window)| {
        let (stats, flat) =
            describe_signal_with(&window_fz(trace, *window), trace.sample_rate, exec)?;
        if flat {
            return Err(AnalysisError::ZeroVariance);
        }
        Ok(stats)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{ForceSample, Pose};
    use std::f64::consts::PI;

    fn trace_from(fz: &[f64], fs: f64) -> ForceTrace {
        ForceTrace {
            sample_rate: fs,
            samples: fz
                .iter()
                .enumerate()
                .map(|(i, &fz)| ForceSample {
                    t: i as f64 / fs,
                    fz,
                    fy: 0.0,
                })
                .collect(),
            poses: vec![Pose::default(); fz.len()],
        }
    }

    #[test]
    fn constant_trace() {
        let tr = trace_from(&[5.0; 100], 100.0);
        assert_eq!(trace_stats(&tr, None), Err(AnalysisError::ZeroVariance));
        let (s, warn) = summarize(&tr, None).unwrap();
        assert_eq!((s.max, s.min, s.mean, s.std), (5.0, 5.0, 5.0, 0.0));
        assert_eq!((s.skew, s.kurt, s.freq), (None, None, None));
        assert_eq!(warn.len(), 1);
    }

    #[test]
    fn sine_moments() {
        let fs = 100.0;
        let fz: Vec<f64> = (0..1000)
            .map(|i| 10.0 + 3.0 * (2.0 * PI * i as f64 / fs).sin())
            .collect();
        let s = trace_stats(&trace_from(&fz, fs), None).unwrap();
        assert!((s.mean - 10.0).abs() < 1e-9);
        assert!((s.std - 3.0 / 2f64.sqrt()).abs() < 1e-6);
        assert!(s.skew.unwrap().abs() < 1e-9);
        assert!((s.kurt.unwrap() + 1.5).abs() < 0.01);
        assert!((s.freq.unwrap() - 1.0).abs() < 0.1);
    }

    #[test]
    fn windowing_and_short_windows() {
        let fz: Vec<f64> = (0..200).map(|i| (i % 7) as f64).collect();
        let tr = trace_from(&fz, 100.0);
        assert!(matches!(
            trace_stats(&tr, Some((0.0, 0.1))),
            Err(AnalysisError::TooFewSamples { got: 11, .. })
        ));
        assert!(matches!(
            trace_stats(&tr, Some((10.0, 11.0))),
            Err(AnalysisError::TooFewSamples { got: 0, .. })
        ));
        assert!(trace_stats(&tr, Some((0.5, 1.5))).is_ok());
    }

    #[test]
    fn spectrum_export_pure_tone() {
        let fs = 64.0;
        let fz: Vec<f64> = (0..640)
            .map(|i| 2.0 + (2.0 * PI * 4.0 * i as f64 / fs).sin())
            .collect();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("spectrum.csv");
        export_spectrum(&trace_from(&fz, fs), None, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("freq_hz,magnitude"));
        let rows: Vec<(f64, f64)> = lines
            .map(|l| {
                let (a, b) = l.split_once(',').unwrap();
                (a.parse().unwrap(), b.parse().unwrap())
            })
            .collect();
        let top = rows
            .iter()
            .cloned()
            .fold((0.0, f64::MIN), |a, r| if r.1 > a.1 { r } else { a });
        assert!((top.0 - 4.0).abs() <= fs / 1024.0, "{top:?}");
    }

    #[test]
    fn empty_window_spectrum() {
        let tr = trace_from(&[1.0, 2.0, 3.0], 10.0);
        let dir = tempfile::tempdir().unwrap();
        let err = export_spectrum(&tr, Some((5.0, 6.0)), &dir.path().join("s.csv")).unwrap_err();
        assert!(matches!(err, AnalysisError::TooFewSamples { got: 0, .. }));
    }

    #[test]
    fn batch_matches_single() {
        let traces: Vec<_> = (1..6)
            .map(|k| {
                let fz: Vec<f64> = (0..500).map(|i| ((i * k) % 13) as f64).collect();
                (trace_from(&fz, 100.0), None)
            })
            .collect();
        let seq = batch_stats(&traces, Execution::Sequential);
        let par = batch_stats(&traces, Execution::Parallel);
        assert_eq!(seq, par);
    }
}
