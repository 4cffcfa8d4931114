//! Populations, concurrence, decay-rate fits and spectral diagnostics.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::dynamics::{Source, TimeSeries};
use crate::error::{Error, Result};

/// Slack on the single-excitation norm before a state is rejected.
pub const NORM_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSeries {
    pub t: Vec<f64>,
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
    pub concurrence: Vec<f64>,
    pub source: Source,
}

/// 2|C₁C₂*| for a single-excitation pure state.
pub fn concurrence(c1: Complex64, c2: Complex64) -> Result<f64> {
    let n = c1.norm_sqr() + c2.norm_sqr();
    if !(n <= 1.0 + NORM_SLACK) {
        return Err(Error::Validation(format!("amplitude norm {n} exceeds 1")));
    }
    Ok(2.0 * (c1 * c2.conj()).norm())
}

/// The same quantity written in collective amplitudes, |(Cs−Ca)(Cs*+Ca*)|.
pub fn concurrence_collective(cs: Complex64, ca: Complex64) -> f64 {
    ((cs - ca) * (cs.conj() + ca.conj())).norm()
}

impl ObservableSeries {
    pub fn from_series(ts: &TimeSeries) -> Result<Self> {
        let n = ts.len();
        let mut out = Self {
            t: Vec::with_capacity(n),
            p1: Vec::with_capacity(n),
            p2: Vec::with_capacity(n),
            concurrence: Vec::with_capacity(n),
            source: ts.source,
        };
        for s in &ts.states {
            out.t.push(s.t);
            out.p1.push(s.p1());
            out.p2.push(s.p2());
            out.concurrence.push(concurrence(s.c1, s.c2)?);
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn max_concurrence(&self) -> f64 {
        self.concurrence.iter().cloned().fold(0.0, f64::max)
    }

    fn channel(&self, channel: Channel) -> Vec<f64> {
        match channel {
            Channel::P1 => self.p1.clone(),
            Channel::P2 => self.p2.clone(),
            Channel::Total => self.p1.iter().zip(&self.p2).map(|(a, b)| a + b).collect(),
            Channel::Difference => self.p1.iter().zip(&self.p2).map(|(a, b)| a - b).collect(),
            Channel::Concurrence => self.concurrence.clone(),
        }
    }
}

/// Which population-like quantity an analysis acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    P1,
    P2,
    /// P₁ + P₂.
    Total,
    /// P₁ − P₂.
    Difference,
    Concurrence,
}

/// Whether a fitted rate refers to |C| or to |C|².
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateConvention {
    Amplitude,
    Population,
}

impl RateConvention {
    pub fn name(&self) -> &'static str {
        match self {
            RateConvention::Amplitude => "amplitude",
            RateConvention::Population => "population",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub rate: f64,
    /// RMS deviation of the log data from the fitted line.
    pub residual: f64,
    pub convention: RateConvention,
    pub points: usize,
}

/// Least-squares slope of ln y against t over `window`; returns
/// (slope, intercept, rms residual, points).
pub fn fit_log_slope(t: &[f64], y: &[f64], window: (f64, f64)) -> Result<(f64, f64, f64, usize)> {
    let (lo, hi) = window;
    if !(hi > lo) {
        return Err(Error::Fit(format!("empty window [{lo}, {hi}]")));
    }
    let (first, last) = match (t.first(), t.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Err(Error::Fit("empty series".into())),
    };
    let eps = 1e-9 * (last - first).abs().max(1.0);
    if lo < first - eps || hi > last + eps {
        return Err(Error::Fit(format!(
            "window [{lo}, {hi}] outside series span [{first}, {last}]"
        )));
    }
    let mut pts = Vec::new();
    for (&ti, &yi) in t.iter().zip(y) {
        if ti >= lo - eps && ti <= hi + eps {
            if !(yi > 0.0) {
                return Err(Error::Fit(format!("non-positive sample {yi} at t = {ti}")));
            }
            pts.push((ti, yi.ln()));
        }
    }
    if pts.len() < 2 {
        return Err(Error::Fit("fewer than two samples in window".into()));
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mt;
    let rms = (pts.iter().map(|p| (p.1 - icpt - slope * p.0).powi(2)).sum::<f64>() / n).sqrt();
    Ok((slope, icpt, rms, pts.len()))
}

/// Exponential decay rate of a population channel over `window`.
///
/// With [`RateConvention::Amplitude`] the rate is that of √P, i.e. half
/// the population rate.
pub fn extract_decay_rate(
    series: &ObservableSeries,
    window: (f64, f64),
    convention: RateConvention,
    channel: Channel,
) -> Result<DecayFit> {
    let y = series.channel(channel);
    let (slope, _, residual, points) = fit_log_slope(&series.t, &y, window)?;
    let pop_rate = -slope;
    let (rate, residual) = match convention {
        RateConvention::Population => (pop_rate, residual),
        RateConvention::Amplitude => (0.5 * pop_rate, 0.5 * residual),
    };
    Ok(DecayFit {
        rate,
        residual,
        convention,
        points,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Angular frequencies of the bins.
    pub omega: Vec<f64>,
    /// |X(ω)| of the tapered, zero-padded transform.
    pub magnitude: Vec<f64>,
    /// 2π/T, the intrinsic resolution of the record.
    pub resolution: f64,
    /// Sum of the taper weights (turns peak heights into amplitudes).
    pub taper_sum: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPeak {
    /// Interpolated angular frequency.
    pub frequency: f64,
    /// Estimated amplitude of the corresponding cosine component.
    pub weight: f64,
}

/// Tukey shape parameter of the taper; 1 is a full Hann window.
pub const TAPER_FRACTION: f64 = 1.0;
/// Zero-padding factor.
pub const PAD_FACTOR: usize = 8;

fn tukey(n: usize, alpha: f64) -> Vec<f64> {
    let m = (n - 1) as f64;
    let edge = alpha * m / 2.0;
    (0..n)
        .map(|i| {
            let x = i as f64;
            let d = x.min(m - x);
            if edge > 0.0 && d < edge {
                0.5 * (1.0 - (PI * d / edge).cos())
            } else {
                1.0
            }
        })
        .collect()
}

fn uniform_step(t: &[f64]) -> Result<f64> {
    if t.len() < 8 {
        return Err(Error::Measurement("series too short for a spectrum".into()));
    }
    let h = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    for w in t.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-6 * h {
            return Err(Error::Measurement("spectral analysis needs a uniform grid".into()));
        }
    }
    Ok(h)
}

/// Magnitude spectrum of y(t) after mean removal, cosine taper and
/// zero padding.
pub fn spectrum(t: &[f64], y: &[f64]) -> Result<Spectrum> {
    if t.len() != y.len() {
        return Err(Error::Measurement("time and value lengths differ".into()));
    }
    let h = uniform_step(t)?;
    let n = y.len();
    let mean = y.iter().sum::<f64>() / n as f64;
    let w = tukey(n, TAPER_FRACTION);
    let taper_sum: f64 = w.iter().sum();
    let npad = (n * PAD_FACTOR).next_power_of_two();
    let mut buf: Vec<Complex64> = (0..npad)
        .map(|i| {
            if i < n {
                Complex64::new((y[i] - mean) * w[i], 0.0)
            } else {
                Complex64::default()
            }
        })
        .collect();
    FftPlanner::<f64>::new().plan_fft_forward(npad).process(&mut buf);
    let half = npad / 2;
    let d_omega = 2.0 * PI / (npad as f64 * h);
    Ok(Spectrum {
        omega: (0..=half).map(|k| k as f64 * d_omega).collect(),
        magnitude: buf[..=half].iter().map(|c| c.norm()).collect(),
        resolution: 2.0 * PI / (n as f64 * h),
        taper_sum,
    })
}

impl Spectrum {
    /// Local maxima within `band`, strongest first, refined by a parabola
    /// through the log-magnitudes of the three bins around each maximum.
    pub fn peaks(&self, band: (f64, f64), min_relative: f64) -> Vec<SpectralPeak> {
        let m = &self.magnitude;
        let d_omega = self.omega[1] - self.omega[0];
        let top = (1..m.len() - 1)
            .filter(|&k| self.omega[k] >= band.0 && self.omega[k] <= band.1)
            .map(|k| m[k])
            .fold(0.0, f64::max);
        let mut out = Vec::new();
        for k in 1..m.len() - 1 {
            let w = self.omega[k];
            if w < band.0 || w > band.1 {
                continue;
            }
            if m[k] > m[k - 1] && m[k] >= m[k + 1] && m[k] >= min_relative * top && m[k] > 0.0 {
                let (a, b, c) = (m[k - 1].max(1e-300).ln(), m[k].ln(), m[k + 1].max(1e-300).ln());
                let den = a - 2.0 * b + c;
                let off = if den < 0.0 { 0.5 * (a - c) / den } else { 0.0 };
                let height = (b - 0.25 * (a - c) * off).exp();
                out.push(SpectralPeak {
                    frequency: w + off * d_omega,
                    weight: 2.0 * height / self.taper_sum,
                });
            }
        }
        out.sort_by(|x, y| y.weight.total_cmp(&x.weight));
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyEstimate {
    pub frequency: f64,
    pub resolution: f64,
    /// Number of periods of the measured oscillation inside the record.
    pub periods: f64,
}

/// Dominant angular frequency of P₁ − P₂ inside `band`.
pub fn exchange_frequency(series: &ObservableSeries, band: (f64, f64)) -> Result<FrequencyEstimate> {
    let y = series.channel(Channel::Difference);
    let spec = spectrum(&series.t, &y)?;
    let lo = band.0.max(spec.resolution);
    let peak = spec
        .peaks((lo, band.1), 0.0)
        .into_iter()
        .next()
        .ok_or_else(|| Error::Measurement(format!("no spectral peak in band [{lo}, {}]", band.1)))?;
    let span = series.t[series.len() - 1] - series.t[0];
    let periods = peak.frequency * span / (2.0 * PI);
    if periods < 3.0 {
        return Err(Error::Measurement(format!(
            "record spans only {periods:.2} periods of the {:.4} peak",
            peak.frequency
        )));
    }
    Ok(FrequencyEstimate {
        frequency: peak.frequency,
        resolution: spec.resolution,
        periods,
    })
}

/// Spectral peaks of P₁(t), strongest first, down to 2% of the largest.
///
/// A known common damping of the oscillating terms (γ/2 for P₁ when both
/// collective modes are above threshold) can be undone with
/// `envelope_rate` before the transform; without it the decaying mean
/// leaks a broad lobe into the low-frequency end of the spectrum.
pub fn revival_spectrum(series: &ObservableSeries, envelope_rate: Option<f64>) -> Result<Vec<SpectralPeak>> {
    let y: Vec<f64> = match envelope_rate {
        Some(r) => series.t.iter().zip(&series.p1).map(|(t, p)| p * (r * t).exp()).collect(),
        None => series.p1.clone(),
    };
    let spec = spectrum(&series.t, &y)?;
    let peaks = spec.peaks((0.5 * spec.resolution, f64::INFINITY), 0.02);
    if peaks.is_empty() {
        return Err(Error::Measurement("no spectral peaks in P1".into()));
    }
    Ok(peaks)
}
