//! Phase-shifted sinusoids and the Pearson correlation, for the case-study
//! comparison between sign-aware similarity and linear correlation.

use std::f64::consts::PI;

use crate::embeddings::Signal;
use crate::error::{Error, Result};

/// `a_i = sin(2π t_i / T)` and `b_i = sin(2π (t_i − Δt) / T)` on `n` uniform
/// samples `t_i = i T / n` covering one period.
pub fn phase_shifted_pair(samples: usize, period: f64, shift: f64) -> Result<(Signal, Signal)> {
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    if !(period > 0.0 && period.is_finite()) || !shift.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "period must be positive and shift finite (period={period}, shift={shift})"
        )));
    }
    let times = (0..samples).map(|i| i as f64 * period / samples as f64);
    let (a, b): (Vec<f64>, Vec<f64>) = times
        .map(|t| {
            (
                (2.0 * PI * t / period).sin(),
                (2.0 * PI * (t - shift) / period).sin(),
            )
        })
        .unzip();
    Ok((Signal::new(a)?.with_id("A"), Signal::new(b)?.with_id("B")))
}

/// Sample Pearson correlation; `None` when either input has zero variance.
pub fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() || a.is_empty() {
        return None;
    }
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return None;
    }
    Some(sab / (saa * sbb).sqrt())
}
