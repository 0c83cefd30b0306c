//! Background subtraction, windowed power spectra, and peak classification.
//!
//! Resistance traces ride on a smooth background; a low-order polynomial
//! least-squares fit in b is subtracted first. The one-sided power spectrum
//! over frequency f (in 1/tesla) comes from a direct DFT — n stays small
//! enough here that O(n²) with a fixed per-bin summation order is the simple
//! way to make results bit-for-bit reproducible regardless of how many
//! threads evaluate the bins. The enclosed-flux fundamental sits at
//! f = area·e/h; peak frequencies are reported both raw and as the
//! dimensionless flux ratio f/(area·e/h).

use crate::error::{Error, Result};
use crate::model::{RingConfig, CONSTANTS};
use rayon::prelude::*;

/// Spectral window applied before the DFT.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    Rect,
    /// Periodic Hann, w_j = ½(1 − cos(2πj/n)): an on-bin cosine spreads
    /// over exactly three bins with neighbor/peak power ratio ¼.
    Hann,
}

impl Window {
    pub fn name(self) -> &'static str {
        match self {
            Window::Rect => "rect",
            Window::Hann => "hann",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "rect" => Some(Window::Rect),
            "hann" => Some(Window::Hann),
            _ => None,
        }
    }

    fn weight(self, j: usize, n: usize) -> f64 {
        match self {
            Window::Rect => 1.0,
            Window::Hann => {
                0.5 * (1.0 - (2.0 * std::f64::consts::PI * j as f64 / n as f64).cos())
            }
        }
    }
}

/// One-sided power spectrum, DC through Nyquist.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Frequency grid (1/tesla), freq[0] = 0, spacing 1/(n·Δb).
    pub freq: Vec<f64>,
    /// |DFT coefficient|² per bin, nonnegative.
    pub power: Vec<f64>,
    pub window: Window,
    /// Detrend order of the column this was computed from, when known.
    pub detrend_order: Option<usize>,
}

impl Spectrum {
    pub fn bin_width(&self) -> f64 {
        if self.freq.len() > 1 {
            self.freq[1] - self.freq[0]
        } else {
            0.0
        }
    }
}

/// Peak classification relative to the strongest peak.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeakKind {
    Main,
    SideLow,
    SideHigh,
    Other,
}

impl PeakKind {
    pub fn label(self) -> &'static str {
        match self {
            PeakKind::Main => "main",
            PeakKind::SideLow => "side_low",
            PeakKind::SideHigh => "side_high",
            PeakKind::Other => "other",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub kind: PeakKind,
    /// Refined frequency (1/tesla).
    pub freq: f64,
    /// Refined power.
    pub power: f64,
    /// freq / (area·e/h): 1.0 at the enclosed-flux fundamental.
    pub flux_ratio: f64,
}

/// Detected peaks, sorted by frequency.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PeakReport {
    pub peaks: Vec<Peak>,
}

impl PeakReport {
    pub fn main(&self) -> Option<&Peak> {
        self.peaks.iter().find(|p| p.kind == PeakKind::Main)
    }

    pub fn of_kind(&self, kind: PeakKind) -> Option<&Peak> {
        self.peaks.iter().find(|p| p.kind == kind)
    }
}

/// Verify the grid is uniform to relative 1e-9 and return its spacing.
pub fn uniform_spacing(b: &[f64]) -> Result<f64> {
    if b.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: b.len(),
        });
    }
    let expected = (b[b.len() - 1] - b[0]) / (b.len() - 1) as f64;
    let scale = expected.abs().max(f64::MIN_POSITIVE);
    for (index, pair) in b.windows(2).enumerate() {
        let got = pair[1] - pair[0];
        if ((got - expected) / scale).abs() > 1e-9 {
            return Err(Error::NonUniformGrid {
                index,
                expected,
                got,
            });
        }
    }
    Ok(expected)
}

/// Subtract the least-squares polynomial of the given order in b.
///
/// The abscissa is mapped to [−1, 1] before building the normal equations,
/// which keeps them well-conditioned through order 6.
pub fn detrend(b: &[f64], column: &[f64], order: usize) -> Result<Vec<f64>> {
    if order > 6 {
        return Err(Error::OrderTooHigh(order));
    }
    if column.len() <= order + 1 || b.len() != column.len() {
        return Err(Error::ColumnTooShort {
            len: column.len(),
            order,
        });
    }
    let mid = 0.5 * (b[0] + b[b.len() - 1]);
    let half = 0.5 * (b[b.len() - 1] - b[0]);
    let scale = if half.abs() < f64::MIN_POSITIVE { 1.0 } else { half };
    let x: Vec<f64> = b.iter().map(|v| (v - mid) / scale).collect();

    let m = order + 1;
    let mut normal = nalgebra::DMatrix::<f64>::zeros(m, m);
    let mut rhs = nalgebra::DVector::<f64>::zeros(m);
    // power sums: normal[i][j] = Σ x^(i+j), rhs[i] = Σ y·x^i
    let mut power_sums = vec![0.0; 2 * m - 1];
    for &xi in &x {
        let mut p = 1.0;
        for sum in power_sums.iter_mut() {
            *sum += p;
            p *= xi;
        }
    }
    for i in 0..m {
        for j in 0..m {
            normal[(i, j)] = power_sums[i + j];
        }
    }
    for (xi, yi) in x.iter().zip(column) {
        let mut p = 1.0;
        for i in 0..m {
            rhs[i] += yi * p;
            p *= xi;
        }
    }
    let coefficients = normal
        .lu()
        .solve(&rhs)
        .ok_or(Error::DegenerateFit)?;

    Ok(x.iter()
        .zip(column)
        .map(|(xi, yi)| {
            let mut fit = 0.0;
            let mut p = 1.0;
            for c in coefficients.iter() {
                fit += c * p;
                p *= xi;
            }
            yi - fit
        })
        .collect())
}

/// Windowed one-sided power spectrum of a column over a uniform b grid.
///
/// Direct DFT: bin k holds |Σ_j w_j·x_j·e^{−2πijk/n}|². Bins are evaluated
/// in parallel; the sum within each bin runs in index order, so the output
/// is independent of thread count.
pub fn power_spectrum(b: &[f64], column: &[f64], window: Window) -> Result<Spectrum> {
    power_spectrum_padded(b, column, window, false)
}

/// [`power_spectrum`] with optional zero-padding to the next power of two
/// after windowing. Padding only interpolates the displayed spectrum; it
/// adds no information and is excluded from the acceptance checks.
pub fn power_spectrum_padded(
    b: &[f64],
    column: &[f64],
    window: Window,
    pad_pow2: bool,
) -> Result<Spectrum> {
    if column.len() < 16 {
        return Err(Error::TooFewPoints {
            needed: 16,
            got: column.len(),
        });
    }
    if b.len() != column.len() {
        return Err(Error::ColumnTooShort {
            len: column.len(),
            order: 0,
        });
    }
    let spacing = uniform_spacing(b)?;

    let n_data = column.len();
    let mut samples: Vec<f64> = (0..n_data)
        .map(|j| window.weight(j, n_data) * column[j])
        .collect();
    if pad_pow2 {
        samples.resize(n_data.next_power_of_two(), 0.0);
    }
    let n = samples.len();

    // Twiddle table: e^{−2πi·m/n} for m = 0..n, indexed by (j·k) mod n.
    let table: Vec<(f64, f64)> = (0..n)
        .map(|m| {
            let angle = -2.0 * std::f64::consts::PI * m as f64 / n as f64;
            (angle.cos(), angle.sin())
        })
        .collect();

    let n_bins = n / 2 + 1;
    let power: Vec<f64> = (0..n_bins)
        .into_par_iter()
        .map(|k| {
            let mut re = 0.0;
            let mut im = 0.0;
            for (j, &x) in samples.iter().enumerate() {
                let (c, s) = table[(j * k) % n];
                re += x * c;
                im += x * s;
            }
            re * re + im * im
        })
        .collect();
    let freq = (0..n_bins)
        .map(|k| k as f64 / (n as f64 * spacing))
        .collect();
    Ok(Spectrum {
        freq,
        power,
        window,
        detrend_order: None,
    })
}

/// freq / (area·e/h): the frequency in units of the enclosed-flux
/// fundamental.
pub fn flux_ratio(freq: f64, config: &RingConfig) -> f64 {
    freq / (config.area() * CONSTANTS.e / CONSTANTS.h)
}

/// Locate and classify spectral peaks.
///
/// A peak is a non-DC bin strictly greater than every neighbor within
/// `guard_band` bins, with power at least `min_prominence` of the largest
/// non-DC power. Each is refined by 3-point parabolic interpolation on log
/// power. The strongest is `main`; the nearest qualifying peaks below/above
/// it in frequency are `side_low`/`side_high`; the rest are `other`.
pub fn find_peaks(
    spectrum: &Spectrum,
    min_prominence: f64,
    guard_band: usize,
    config: &RingConfig,
) -> PeakReport {
    let power = &spectrum.power;
    let n = power.len();
    if n < 2 {
        return PeakReport::default();
    }
    let global_max = power[1..].iter().cloned().fold(0.0, f64::max);
    if global_max <= 0.0 {
        return PeakReport::default();
    }
    let threshold = min_prominence * global_max;

    let mut candidates: Vec<(f64, f64)> = Vec::new(); // (freq, power)
    let bin = spectrum.bin_width();
    for k in 1..n {
        if power[k] < threshold {
            continue;
        }
        let lo = k.saturating_sub(guard_band);
        let hi = (k + guard_band).min(n - 1);
        if (lo..=hi).any(|j| j != k && power[j] >= power[k]) {
            continue;
        }
        let (df, refined_power) = refine(power, k);
        candidates.push(((k as f64 + df) * bin, refined_power));
    }

    if candidates.is_empty() {
        return PeakReport::default();
    }
    let main_idx = candidates
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)
        .expect("nonempty candidates");
    let main_freq = candidates[main_idx].0;

    // nearest qualifying peaks on each side of the main frequency
    let side_low = candidates[..main_idx].last().map(|c| c.0);
    let side_high = candidates.get(main_idx + 1).map(|c| c.0);

    let peaks = candidates
        .iter()
        .map(|&(freq, power)| {
            let kind = if freq == main_freq {
                PeakKind::Main
            } else if Some(freq) == side_low {
                PeakKind::SideLow
            } else if Some(freq) == side_high {
                PeakKind::SideHigh
            } else {
                PeakKind::Other
            };
            Peak {
                kind,
                freq,
                power,
                flux_ratio: flux_ratio(freq, config),
            }
        })
        .collect();
    PeakReport { peaks }
}

/// 3-point parabolic refinement on log power; returns the sub-bin offset in
/// [−½, ½] and the interpolated peak power.
fn refine(power: &[f64], k: usize) -> (f64, f64) {
    if k == 0 || k + 1 >= power.len() {
        return (0.0, power[k]);
    }
    let (pl, pc, pr) = (power[k - 1], power[k], power[k + 1]);
    if pl <= 0.0 || pc <= 0.0 || pr <= 0.0 {
        return (0.0, pc);
    }
    let (l, c, r) = (pl.ln(), pc.ln(), pr.ln());
    let denom = l - 2.0 * c + r;
    if denom == 0.0 {
        return (0.0, pc);
    }
    let delta = (0.5 * (l - r) / denom).clamp(-0.5, 0.5);
    let log_peak = c - 0.25 * (l - r) * delta;
    (delta, log_peak.exp())
}
