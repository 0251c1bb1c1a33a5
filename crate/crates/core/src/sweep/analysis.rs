use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nonhermitian::Regime;

use super::SweepRecord;

pub const MIN_SAMPLES: usize = 50;

/// Largest spread over the final 20% of a series that still counts as a plateau.
pub const PLATEAU_TOL: f64 = 1e-6;

const RECOVERY_MARGIN: f64 = 1e-9;

/// Peaks lower than this fraction of the range below the global maximum are
/// ignored when measuring the period.
const PEAK_BAND: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesAnalysis {
    pub period_estimate: Option<f64>,
    pub plateau_value: Option<f64>,
    pub plateau_time: Option<f64>,
    pub max_value: f64,
    pub min_value: f64,
    /// Some later sample beats the initial value.
    pub recovery_exceeds_initial: bool,
}

/// Summarizes one `nh` curve (records in increasing `t` on a uniform grid).
pub fn analyze_series(records: &[SweepRecord]) -> Result<SeriesAnalysis> {
    if records.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: MIN_SAMPLES,
            got: records.len(),
        });
    }
    let ts: Vec<f64> = records.iter().map(|r| r.t).collect();
    let ms: Vec<f64> = records.iter().map(|r| r.metric).collect();
    let max_value = ms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_value = ms.iter().copied().fold(f64::INFINITY, f64::min);
    let initial = ms[0];
    let recovery_exceeds_initial = ms[1..].iter().any(|&m| m > initial + RECOVERY_MARGIN);

    let (plateau_value, plateau_time) = match plateau(&ts, &ms) {
        Some((v, t)) => (Some(v), Some(t)),
        None => (None, None),
    };

    let unbroken = records.iter().all(|r| r.regime == Regime::Unbroken);
    let period_estimate = if unbroken && max_value - min_value > PLATEAU_TOL {
        period(&ts, &ms, max_value, min_value)
    } else {
        None
    };

    Ok(SeriesAnalysis {
        period_estimate,
        plateau_value,
        plateau_time,
        max_value,
        min_value,
        recovery_exceeds_initial,
    })
}

/// Splits records into consecutive runs of equal `nh`.
pub fn group_by_nh(records: &[SweepRecord]) -> Vec<(f64, Vec<SweepRecord>)> {
    let mut groups: Vec<(f64, Vec<SweepRecord>)> = Vec::new();
    for r in records {
        match groups.last_mut() {
            Some((nh, group)) if *nh == r.nh => group.push(*r),
            _ => groups.push((r.nh, vec![*r])),
        }
    }
    groups
}

fn plateau(ts: &[f64], ms: &[f64]) -> Option<(f64, f64)> {
    let n = ms.len();
    let tail_start = n - (n as f64 * 0.2).ceil() as usize;
    let tail = &ms[tail_start..];
    let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
    if hi - lo >= PLATEAU_TOL {
        return None;
    }
    let value = ms[n - 1];
    let mut onset = n - 1;
    while onset > 0 && (ms[onset - 1] - value).abs() < PLATEAU_TOL {
        onset -= 1;
    }
    Some((value, ts[onset]))
}

/// Mean spacing of the highest maxima, located to sub-sample accuracy by
/// fitting a parabola through each peak and its two neighbours.
///
/// A series can peak more than once per period at the same height. Spacings
/// are therefore measured between every `k`-th peak, taking the smallest `k`
/// whose spacings agree and whose shift maps the series onto itself.
fn period(ts: &[f64], ms: &[f64], max_value: f64, min_value: f64) -> Option<f64> {
    let range = max_value - min_value;
    let floor = max_value - PEAK_BAND * range;
    let peaks: Vec<f64> = (1..ms.len() - 1)
        .filter(|&i| ms[i] > ms[i - 1] && ms[i] >= ms[i + 1] && ms[i] >= floor)
        .map(|i| {
            let (l, c, r) = (ms[i - 1], ms[i], ms[i + 1]);
            let curvature = l - 2.0 * c + r;
            let offset = if curvature < 0.0 {
                (0.5 * (l - r) / curvature).clamp(-0.5, 0.5)
            } else {
                0.0
            };
            let h = 0.5 * (ts[i + 1] - ts[i - 1]);
            ts[i] + offset * h
        })
        .collect();
    if peaks.len() < 2 {
        return None;
    }
    let step = (ts[ts.len() - 1] - ts[0]) / (ts.len() - 1) as f64;
    for stride in 1..peaks.len() {
        let spacings: Vec<f64> = peaks.windows(stride + 1).map(|w| w[stride] - w[0]).collect();
        let hi = spacings.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = spacings.iter().copied().fold(f64::INFINITY, f64::min);
        if hi - lo > 3.0 * step {
            continue;
        }
        let candidate = spacings.iter().sum::<f64>() / spacings.len() as f64;
        if self_similar(ts, ms, candidate, range) {
            return Some(candidate);
        }
    }
    None
}

/// Mean mismatch between the series and itself shifted by `lag`, using linear
/// interpolation, is small compared with its range.
fn self_similar(ts: &[f64], ms: &[f64], lag: f64, range: f64) -> bool {
    let t_last = ts[ts.len() - 1];
    let mut total = 0.0;
    let mut count = 0usize;
    for (i, &t) in ts.iter().enumerate() {
        let shifted = t + lag;
        if shifted > t_last {
            break;
        }
        total += (interpolate(ts, ms, shifted) - ms[i]).abs();
        count += 1;
    }
    count > 0 && total / count as f64 <= 0.02 * range
}

fn interpolate(ts: &[f64], ms: &[f64], t: f64) -> f64 {
    let j = ts.partition_point(|&x| x <= t).clamp(1, ts.len() - 1);
    let (t0, t1) = (ts[j - 1], ts[j]);
    let w = (t - t0) / (t1 - t0);
    ms[j - 1] * (1.0 - w) + ms[j] * w
}
