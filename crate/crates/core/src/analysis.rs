//! Turning receiver output into deliverables: per-frequency pattern cuts,
//! time-to-angle mapping, null spacing measurement, and the swept-receiver
//! versus envelope-detector comparison.

use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::receiver::PowerGrid;

/// Default prominence threshold for null detection, in dB.
pub const DEFAULT_NULL_PROMINENCE_DB: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutPoint {
    pub time: f64,
    /// Radians; populated by [`time_to_angle`].
    pub angle: Option<f64>,
    /// Peak-normalized, so always <= 0.
    pub power_db: f64,
}

/// Antenna-pattern samples versus time (or angle) at one frequency,
/// peak-normalized so the maximum reads 0 dB.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternCut {
    pub frequency: f64,
    pub points: Vec<CutPoint>,
    /// dB offset that was subtracted so the peak reads 0.
    pub normalization: f64,
}

impl PatternCut {
    /// Build a cut from raw (time, power_db) samples, normalizing the peak
    /// to 0 dB. Times must be strictly increasing.
    pub fn from_samples(frequency: f64, samples: &[(f64, f64)]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("pattern cut needs at least one sample"));
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::invalid("cut times must be strictly increasing"));
        }
        let peak = samples.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
        let points = samples
            .iter()
            .map(|&(time, db)| CutPoint { time, angle: None, power_db: db - peak })
            .collect();
        Ok(Self { frequency, points, normalization: peak })
    }

    /// Sample a closed-form pattern over an angle sweep; the time axis holds
    /// the angle values so spacing analysis stays uniform.
    pub fn from_angle_sweep(frequency: f64, samples: &[(f64, f64)]) -> Result<Self> {
        let mut cut = Self::from_samples(frequency, samples)?;
        for p in cut.points.iter_mut() {
            p.angle = Some(p.time);
        }
        Ok(cut)
    }

    pub fn power_values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.power_db).collect()
    }

    pub fn has_angles(&self) -> bool {
        !self.points.is_empty() && self.points.iter().all(|p| p.angle.is_some())
    }

    /// CSV with time, angle (blank when unmapped) and normalized power.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(w, "time_s,angle_deg,power_db")?;
        for p in &self.points {
            match p.angle {
                Some(a) => writeln!(w, "{},{},{}", p.time, a.to_degrees(), p.power_db)?,
                None => writeln!(w, "{},,{}", p.time, p.power_db)?,
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Plot-ready two-column file: angle in degrees (or time when no angle
    /// mapping exists) and normalized power.
    pub fn write_plot_csv(&self, path: &Path) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        if self.has_angles() {
            writeln!(w, "angle_deg,power_db")?;
            for p in &self.points {
                writeln!(w, "{},{}", p.angle.unwrap().to_degrees(), p.power_db)?;
            }
        } else {
            writeln!(w, "time_s,power_db")?;
            for p in &self.points {
                writeln!(w, "{},{}", p.time, p.power_db)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Null positions (angle when mapped, else time) with adjacent spacings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullReport {
    pub nulls: Vec<f64>,
    pub spacings: Vec<f64>,
    pub mean_spacing: Option<f64>,
    /// True when positions are angles in radians, false for seconds.
    pub on_angle_axis: bool,
}

/// Estimate quality of both receivers against an injected truth cut.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub nsr_correlation: f64,
    pub sed_correlation: f64,
    pub nsr_rms_error_db: f64,
    pub sed_rms_error_db: f64,
    /// `10*log10(var_sed / var_nsr)` of the truth-referenced residuals;
    /// `None` when the residuals are too small to measure (noiseless runs).
    pub measured_snr_gain_db: Option<f64>,
}

/// Pull one grid column out as a peak-normalized time series. The nearest
/// frequency bin within half a bin spacing is selected.
pub fn extract_pattern(grid: &PowerGrid, frequency: f64) -> Result<PatternCut> {
    grid.validate()?;
    if grid.frequencies.is_empty() {
        return Err(Error::invalid("grid has no frequency axis"));
    }
    let spacing = grid.frequency_spacing();
    let (col, nearest) = grid
        .frequencies
        .iter()
        .enumerate()
        .min_by(|a, b| {
            (a.1 - frequency).abs().partial_cmp(&(b.1 - frequency).abs()).unwrap()
        })
        .map(|(i, f)| (i, *f))
        .unwrap();
    let half_bin = if spacing > 0.0 { spacing / 2.0 } else { f64::INFINITY };
    if (nearest - frequency).abs() > half_bin {
        return Err(Error::invalid(format!(
            "frequency {frequency} Hz outside grid span [{}, {}] Hz",
            grid.frequencies.first().unwrap(),
            grid.frequencies.last().unwrap()
        )));
    }
    let samples: Vec<(f64, f64)> = grid
        .times
        .iter()
        .zip(&grid.power_db)
        .map(|(t, row)| (*t, row[col]))
        .collect();
    PatternCut::from_samples(nearest, &samples)
}

/// Map a cut's time axis to azimuth angle:
/// `angle(t) = arctan(v*(t - crossing_time)/range)`.
pub fn time_to_angle(
    cut: &PatternCut,
    ground_beam_speed: f64,
    range: f64,
    crossing_time: f64,
) -> Result<PatternCut> {
    if !(range > 0.0) {
        return Err(Error::invalid("range must be positive"));
    }
    let mut out = cut.clone();
    for p in out.points.iter_mut() {
        p.angle = Some((ground_beam_speed * (p.time - crossing_time) / range).atan());
    }
    Ok(out)
}

/// Locate pattern nulls: local minima at least `prominence_db` below their
/// adjacent peaks, refined by parabolic interpolation over three points.
/// Spacings use the angle axis when available, else the time axis.
pub fn find_nulls(cut: &PatternCut, prominence_db: f64) -> Result<NullReport> {
    if cut.points.len() < 3 {
        return Err(Error::invalid("cut needs at least 3 points"));
    }
    let on_angle_axis = cut.has_angles();
    let axis: Vec<f64> = cut
        .points
        .iter()
        .map(|p| if on_angle_axis { p.angle.unwrap() } else { p.time })
        .collect();
    let v: Vec<f64> = cut.points.iter().map(|p| p.power_db).collect();
    let n = v.len();

    let mut nulls = Vec::new();
    for i in 1..n - 1 {
        if !(v[i] < v[i - 1] && v[i] <= v[i + 1]) {
            continue;
        }
        // Highest level reached on either side before the curve dips back
        // below this minimum.
        let mut left_peak = v[i];
        for j in (0..i).rev() {
            left_peak = left_peak.max(v[j]);
            if v[j] < v[i] {
                break;
            }
        }
        let mut right_peak = v[i];
        for value in v.iter().take(n).skip(i + 1) {
            right_peak = right_peak.max(*value);
            if *value < v[i] {
                break;
            }
        }
        if left_peak.min(right_peak) - v[i] < prominence_db {
            continue;
        }
        // Parabolic vertex through the three samples around the minimum.
        let denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
        let position = if denom.abs() > 1e-12 {
            let delta = 0.5 * (v[i - 1] - v[i + 1]) / denom;
            let step = (axis[i + 1] - axis[i - 1]) / 2.0;
            axis[i] + delta.clamp(-0.5, 0.5) * step
        } else {
            axis[i]
        };
        nulls.push(position);
    }

    let spacings: Vec<f64> = nulls.windows(2).map(|w| w[1] - w[0]).collect();
    let mean_spacing = if spacings.is_empty() {
        None
    } else {
        Some(spacings.iter().sum::<f64>() / spacings.len() as f64)
    };
    Ok(NullReport { nulls, spacings, mean_spacing, on_angle_axis })
}

/// Analytic bandwidth-ratio SNR advantage of the swept receiver: `BPF/NBPF`.
pub fn snr_ratio(bpf: f64, nbpf: f64) -> Result<f64> {
    if !(bpf > 0.0) || !(nbpf > 0.0) {
        return Err(Error::invalid("bandwidths must be positive"));
    }
    if nbpf > bpf {
        return Err(Error::invalid("nbpf must not exceed bpf"));
    }
    Ok(bpf / nbpf)
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut da = 0.0;
    let mut db = 0.0;
    for (x, y) in a.iter().zip(b) {
        num += (x - ma) * (y - mb);
        da += (x - ma) * (x - ma);
        db += (y - mb) * (y - mb);
    }
    let den = (da * db).sqrt();
    if den == 0.0 {
        1.0 // both series constant: identical up to offset
    } else {
        num / den
    }
}

/// Sample variance (mean-removed), so constant normalization offsets do not
/// contribute.
fn residual_variance(est: &[f64], truth: &[f64]) -> f64 {
    let r: Vec<f64> = est.iter().zip(truth).map(|(e, t)| e - t).collect();
    let mean = r.iter().sum::<f64>() / r.len() as f64;
    r.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / r.len() as f64
}

/// Compare both receiver estimates to an injected truth cut. The wideband
/// video series is block-averaged over a `window` (the stop duration) around
/// each truth sample time before normalization.
pub fn compare_receivers(
    nsr_cut: &PatternCut,
    sed_series: &[(f64, f64)],
    truth: &PatternCut,
    window: f64,
) -> Result<ComparisonReport> {
    if nsr_cut.points.is_empty() || truth.points.is_empty() || sed_series.is_empty() {
        return Err(Error::invalid("empty inputs"));
    }
    if !(window > 0.0) {
        return Err(Error::invalid("averaging window must be positive"));
    }
    let n = nsr_cut.points.len().min(truth.points.len());
    let times: Vec<f64> = truth.points.iter().take(n).map(|p| p.time).collect();

    let sed_t0 = sed_series.first().unwrap().0;
    let sed_t1 = sed_series.last().unwrap().0;
    if times[0] > sed_t1 + window || times[n - 1] < sed_t0 - window {
        return Err(Error::invalid("time bases do not overlap"));
    }

    // Block-average the video over each window; assumes a sorted series.
    let mut sed_blocks = Vec::with_capacity(n);
    let mut lo = 0usize;
    for &t in &times {
        while lo < sed_series.len() && sed_series[lo].0 < t - window / 2.0 {
            lo += 1;
        }
        let mut sum = 0.0;
        let mut count = 0usize;
        let mut i = lo;
        while i < sed_series.len() && sed_series[i].0 <= t + window / 2.0 {
            sum += sed_series[i].1;
            count += 1;
            i += 1;
        }
        if count == 0 {
            return Err(Error::invalid(format!(
                "no video samples within the window at t={t}"
            )));
        }
        sed_blocks.push((t, sum / count as f64));
    }
    let sed_cut = PatternCut::from_samples(truth.frequency, &sed_blocks)?;

    let truth_v: Vec<f64> = truth.points.iter().take(n).map(|p| p.power_db).collect();
    let nsr_v: Vec<f64> = nsr_cut.points.iter().take(n).map(|p| p.power_db).collect();
    let sed_v: Vec<f64> = sed_cut.points.iter().take(n).map(|p| p.power_db).collect();

    let nsr_var = residual_variance(&nsr_v, &truth_v);
    let sed_var = residual_variance(&sed_v, &truth_v);
    let rms = |est: &[f64]| -> f64 {
        (est.iter()
            .zip(&truth_v)
            .map(|(e, t)| (e - t) * (e - t))
            .sum::<f64>()
            / n as f64)
            .sqrt()
    };

    let measured_snr_gain_db = if nsr_var < 1e-12 || sed_var < 1e-12 {
        None
    } else {
        Some(10.0 * (sed_var / nsr_var).log10())
    };

    Ok(ComparisonReport {
        nsr_correlation: pearson(&nsr_v, &truth_v),
        sed_correlation: pearson(&sed_v, &truth_v),
        nsr_rms_error_db: rms(&nsr_v),
        sed_rms_error_db: rms(&sed_v),
        measured_snr_gain_db,
    })
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    std::fs::write(path, text)?;
    Ok(())
}
