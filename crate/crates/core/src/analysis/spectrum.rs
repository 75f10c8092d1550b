//! Magnitude spectrum and dominant-frequency estimation.
//!
//! The signal is mean-removed, Hann windowed and zero padded to the next
//! power of two before the FFT. The dominant frequency is the largest bin
//! above [`DC_GUARD_HZ`], refined by a parabola through the peak and its two
//! neighbours.

use rustfft::{num_complex::Complex, FftPlanner};

use super::AnalysisError;

/// Bins at or below this frequency are never reported as dominant, Hz.
pub const DC_GUARD_HZ: f64 = 0.05;

/// Minimum number of samples for any spectral estimate.
pub const MIN_SAMPLES: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub freqs: Vec<f64>,
    /// Single-sided amplitude, in the signal's units.
    pub magnitude: Vec<f64>,
    /// Spacing of the zero-padded bins, Hz.
    pub bin_width: f64,
    /// `1 / window duration`, Hz.
    pub resolution: f64,
}

pub fn hann(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    let denom = (n - 1) as f64;
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / denom).cos())
        .collect()
}

pub fn spectrum(signal: &[f64], sample_rate: f64) -> Result<Spectrum, AnalysisError> {
    let n = signal.len();
    if n < MIN_SAMPLES {
        return Err(AnalysisError::TooFewSamples {
            got: n,
            need: MIN_SAMPLES,
        });
    }
    let mean = signal.iter().sum::<f64>() / n as f64;
    let window = hann(n);
    let padded = n.next_power_of_two();

    let mut buf: Vec<Complex<f64>> = signal
        .iter()
        .zip(&window)
        .map(|(x, w)| Complex::new((x - mean) * w, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(padded)
        .collect();
    FftPlanner::new().plan_fft_forward(padded).process(&mut buf);

    let gain: f64 = window.iter().sum();
    let half = padded / 2;
    let bin_width = sample_rate / padded as f64;
    let magnitude = buf[..=half]
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let scale = if k == 0 || k == half { 1.0 } else { 2.0 };
            scale * c.norm() / gain
        })
        .collect();
    Ok(Spectrum {
        freqs: (0..=half).map(|k| k as f64 * bin_width).collect(),
        magnitude,
        bin_width,
        resolution: sample_rate / n as f64,
    })
}

impl Spectrum {
    /// Index of the strongest bin above the DC guard.
    pub fn peak_bin(&self) -> Option<usize> {
        self.freqs
            .iter()
            .zip(&self.magnitude)
            .enumerate()
            .filter(|(_, (f, _))| **f > DC_GUARD_HZ)
            .max_by(|a, b| a.1 .1.total_cmp(b.1 .1))
            .map(|(k, _)| k)
    }

    /// Peak frequency with parabolic refinement.
    pub fn dominant(&self) -> Option<f64> {
        let k = self.peak_bin()?;
        let mag = &self.magnitude;
        if mag[k] <= 0.0 {
            return None;
        }
        let offset = if k > 0 && k + 1 < mag.len() {
            let (a, b, c) = (mag[k - 1], mag[k], mag[k + 1]);
            let denom = a - 2.0 * b + c;
            if denom.abs() > f64::EPSILON * b {
                (0.5 * (a - c) / denom).clamp(-0.5, 0.5)
            } else {
                0.0
            }
        } else {
            0.0
        };
        Some((k as f64 + offset) * self.bin_width)
    }
}

/// Dominant frequency of `signal`; `ZeroVariance` when it has no AC content.
pub fn dominant_frequency(signal: &[f64], sample_rate: f64) -> Result<f64, AnalysisError> {
    let spec = spectrum(signal, sample_rate)?;
    if is_flat(signal) {
        return Err(AnalysisError::ZeroVariance);
    }
    spec.dominant().ok_or(AnalysisError::ZeroVariance)
}

pub(crate) fn is_flat(signal: &[f64]) -> bool {
    let Some(&first) = signal.first() else {
        return true;
    };
    let scale = signal.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    signal.iter().all(|x| (x - first).abs() <= 1e-12 * scale)
}
