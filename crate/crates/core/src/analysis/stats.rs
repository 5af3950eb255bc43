//! Signal-level statistics: autocorrelation, residual deviation, sample
//! difference, amplitude histogram.

use crate::cipher::VoiceSignal;
use crate::error::{Error, Result};

/// Mean-removed, non-circular autocorrelation normalized so `r(0) = 1`:
///
/// `r(tau) = sum_i (s_i - mu)(s_{i+tau} - mu) / sum_i (s_i - mu)^2`
///
/// Lags `0..=max_lag` are returned, capped at `len - 1`.
pub fn autocorrelation(seq: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = seq.len();
    if n < 2 {
        return Err(Error::Length(format!(
            "autocorrelation needs at least 2 values, got {n}"
        )));
    }
    let mean = seq.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = seq.iter().map(|v| v - mean).collect();
    let energy: f64 = centered.iter().map(|v| v * v).sum();
    if energy == 0.0 || !energy.is_finite() {
        return Err(Error::DegenerateInput(
            "autocorrelation of a constant sequence is undefined".into(),
        ));
    }
    let max_lag = max_lag.min(n - 1);
    Ok((0..=max_lag)
        .map(|lag| {
            let s: f64 = centered[..n - lag]
                .iter()
                .zip(&centered[lag..])
                .map(|(a, b)| a * b)
                .sum();
            s / energy
        })
        .collect())
}

/// Largest `|r(tau)|` over `tau >= 1`, with its lag.
pub fn max_offpeak(r: &[f64]) -> Option<(usize, f64)> {
    r.iter()
        .enumerate()
        .skip(1)
        .map(|(lag, v)| (lag, v.abs()))
        .fold(None, |best, (lag, v)| match best {
            Some((_, b)) if b >= v => best,
            _ => Some((lag, v)),
        })
}

/// Percent residual deviation `100 * sqrt(sum (O - E)^2 / sum O^2)`.
pub fn prd(original: &[f64], other: &[f64]) -> Result<f64> {
    if original.len() != other.len() {
        return Err(Error::Length(format!(
            "signals have different lengths: {} vs {}",
            original.len(),
            other.len()
        )));
    }
    let energy: f64 = original.iter().map(|o| o * o).sum();
    if energy == 0.0 {
        return Err(Error::DegenerateInput(
            "original signal has zero energy".into(),
        ));
    }
    let residual: f64 = original
        .iter()
        .zip(other)
        .map(|(o, e)| (o - e) * (o - e))
        .sum();
    Ok(100.0 * (residual / energy).sqrt())
}

/// Percentage of sample positions at which the two signals differ.
pub fn percent_difference(original: &VoiceSignal, recovered: &VoiceSignal) -> Result<f64> {
    if original.len() != recovered.len() {
        return Err(Error::Length(format!(
            "signals have different lengths: {} vs {}",
            original.len(),
            recovered.len()
        )));
    }
    if original.is_empty() {
        return Ok(0.0);
    }
    let differing = original
        .samples
        .iter()
        .zip(&recovered.samples)
        .filter(|(a, b)| a != b)
        .count();
    Ok(100.0 * differing as f64 / original.len() as f64)
}

/// Equal-width histogram over the full 16-bit range. Sample `v` lands in
/// bin `floor((v + 32768) * bins / 65536)`.
pub fn histogram(sig: &VoiceSignal, bins: usize) -> Result<Vec<usize>> {
    if bins < 2 {
        return Err(Error::Param(format!("need at least 2 bins, got {bins}")));
    }
    let mut counts = vec![0usize; bins];
    for &s in &sig.samples {
        let offset = (i64::from(s) + 32768) as u128;
        let bin = (offset * bins as u128 / 65536) as usize;
        counts[bin.min(bins - 1)] += 1;
    }
    Ok(counts)
}
