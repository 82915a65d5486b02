//! Behavioral models of the two receiver chains: the swept narrowband
//! receiver (ramp-driven stepped LO, narrowband filter, log detector, ADC)
//! and the wideband envelope detector, plus sweep-plan validation and
//! spectrum reconstruction.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::waveform::BasebandSignal;

/// Ramp/stair-step schedule for the swept filter. Step centers sit at
/// `start_frequency + (i + 1/2) * nbpf`, giving a 3 dB crossover between
/// adjacent ideal filter positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub ramp_period: f64,
    pub stop_duration: f64,
    pub nbpf_bandwidth: f64,
    pub bpf_bandwidth: f64,
    pub start_frequency: f64,
    pub step_count: usize,
}

impl SweepPlan {
    pub fn step_frequency(&self, step: usize) -> f64 {
        self.start_frequency + (step as f64 + 0.5) * self.nbpf_bandwidth
    }

    /// Recenter the swept span on an RF carrier.
    pub fn centered_at(mut self, rf_center: f64) -> Self {
        self.start_frequency = rf_center - self.bpf_bandwidth / 2.0;
        self
    }

    pub fn with_start_frequency(mut self, start: f64) -> Self {
        self.start_frequency = start;
        self
    }
}

/// Build a sweep plan from the swept span, filter bandwidth and ramp period:
/// `stop_duration = (NBPF/BPF) * T`.
pub fn make_sweep_plan(bpf: f64, nbpf: f64, ramp_period: f64) -> Result<SweepPlan> {
    if !(nbpf > 0.0) {
        return Err(Error::invalid("nbpf bandwidth must be positive"));
    }
    if nbpf > bpf {
        return Err(Error::invalid("nbpf bandwidth must not exceed the bpf span"));
    }
    if !(ramp_period > 0.0) {
        return Err(Error::invalid("ramp period must be positive"));
    }
    let step_count = (bpf / nbpf).round().max(1.0) as usize;
    Ok(SweepPlan {
        ramp_period,
        stop_duration: nbpf / bpf * ramp_period,
        nbpf_bandwidth: nbpf,
        bpf_bandwidth: bpf,
        start_frequency: -bpf / 2.0,
        step_count,
    })
}

/// Outcome of the dwell-versus-PRI check: a plan is valid iff
/// `stop_duration < pri` (strict).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepValidity {
    pub valid: bool,
    /// `pri - stop_duration`; negative when invalid.
    pub margin: f64,
    pub message: String,
}

pub fn validate_sweep_plan(plan: &SweepPlan, pri: f64) -> Result<SweepValidity> {
    if !(pri > 0.0) {
        return Err(Error::invalid("pri must be positive"));
    }
    let margin = pri - plan.stop_duration;
    let valid = plan.stop_duration < pri;
    let message = if valid {
        format!("valid: stop duration {:.6e} s < PRI {:.6e} s", plan.stop_duration, pri)
    } else {
        format!(
            "invalid: stop duration {:.6e} s must be strictly less than PRI {:.6e} s",
            plan.stop_duration, pri
        )
    };
    Ok(SweepValidity { valid, margin, message })
}

/// Log-video detector parameters. `slope` is volts per decade of input
/// power; the output saturates `dynamic_range` dB above the floor reading.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DlvaParams {
    pub slope: f64,
    pub offset: f64,
    pub dynamic_range: f64,
    pub noise_floor: f64,
}

impl Default for DlvaParams {
    fn default() -> Self {
        // Typical commercial log-video figures: 25 mV/dB slope, 70 dB
        // dynamic range, floor near thermal noise in a 10 MHz-class band.
        Self { slope: 0.25, offset: 4.0, dynamic_range: 70.0, noise_floor: 1.0e-16 }
    }
}

impl DlvaParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.slope > 0.0) {
            return Err(Error::invalid("dlva slope must be positive"));
        }
        if !(self.dynamic_range > 0.0) {
            return Err(Error::invalid("dlva dynamic range must be positive"));
        }
        if !(self.noise_floor > 0.0) {
            return Err(Error::invalid("dlva noise floor must be positive"));
        }
        Ok(())
    }

    /// Inverse of the linear log-video map: volts back to dBW.
    pub fn video_to_db(&self, volts: f64) -> f64 {
        10.0 * (volts - self.offset) / self.slope
    }

    pub fn floor_db(&self) -> f64 {
        10.0 * self.noise_floor.log10()
    }
}

/// Detected log-video voltage for an input power in watts.
pub fn dlva_detect(power: f64, params: &DlvaParams) -> f64 {
    let p = power.max(params.noise_floor);
    let v = params.slope * p.log10() + params.offset;
    let ceiling = params.slope * params.noise_floor.log10()
        + params.offset
        + params.slope * params.dynamic_range / 10.0;
    v.min(ceiling)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdcParams {
    pub bits: u32,
    pub full_scale: f64,
    pub sample_rate: f64,
}

impl Default for AdcParams {
    fn default() -> Self {
        Self { bits: 12, full_scale: 2.5, sample_rate: 10.0e6 }
    }
}

impl AdcParams {
    pub fn validate(&self) -> Result<()> {
        if !(4..=24).contains(&self.bits) {
            return Err(Error::invalid("adc bits must be in [4, 24]"));
        }
        if !(self.full_scale > 0.0) {
            return Err(Error::invalid("adc full scale must be positive"));
        }
        if !(self.sample_rate > 0.0) {
            return Err(Error::invalid("adc sample rate must be positive"));
        }
        Ok(())
    }

    pub fn lsb(&self) -> f64 {
        2.0 * self.full_scale / (1u64 << self.bits) as f64
    }

    fn quantize_one(&self, x: f64) -> f64 {
        let lsb = self.lsb();
        let max_level = self.full_scale - lsb / 2.0;
        (((x / lsb).floor() + 0.5) * lsb).clamp(-max_level, max_level)
    }
}

/// Mid-rise uniform quantization over [-full_scale, +full_scale], clipping
/// outside.
pub fn adc_quantize(samples: &[f64], params: &AdcParams) -> Vec<f64> {
    samples.iter().map(|&x| params.quantize_one(x)).collect()
}

/// Time x frequency matrix of detected log power: one row per ramp, one
/// column per stop frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerGrid {
    /// Ramp center times, one per row.
    pub times: Vec<f64>,
    /// Stop-step center frequencies (RF), ascending, spaced by NBPF.
    pub frequencies: Vec<f64>,
    /// Row-major: `power_db[row][col]` in dBW.
    pub power_db: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct PowerGridJson {
    times: Vec<f64>,
    frequencies: Vec<f64>,
    /// Row-major flattened matrix.
    power_db: Vec<f64>,
}

impl PowerGrid {
    pub fn validate(&self) -> Result<()> {
        if self.power_db.len() != self.times.len() {
            return Err(Error::invalid("grid row count must match the time axis"));
        }
        if self.power_db.iter().any(|r| r.len() != self.frequencies.len()) {
            return Err(Error::invalid("grid column count must match the frequency axis"));
        }
        if self.frequencies.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("frequency axis must be ascending"));
        }
        Ok(())
    }

    pub fn frequency_spacing(&self) -> f64 {
        if self.frequencies.len() > 1 {
            self.frequencies[1] - self.frequencies[0]
        } else {
            0.0
        }
    }

    /// CSV layout: first row is the frequency axis in Hz (after a `time_s`
    /// corner label), first column is the time axis in seconds, cells dBW.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        write!(w, "time_s")?;
        for f in &self.frequencies {
            write!(w, ",{f}")?;
        }
        writeln!(w)?;
        for (t, row) in self.times.iter().zip(&self.power_db) {
            write!(w, "{t}")?;
            for v in row {
                write!(w, ",{v}")?;
            }
            writeln!(w)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty grid csv".into()))?;
        let mut cols = header.split(',');
        let corner = cols.next().unwrap_or_default();
        if corner != "time_s" {
            return Err(Error::Parse("grid csv must start with a time_s column".into()));
        }
        let frequencies: Vec<f64> = cols
            .map(|c| c.parse().map_err(|_| Error::Parse(format!("bad frequency '{c}'"))))
            .collect::<Result<_>>()?;
        let mut times = Vec::new();
        let mut power_db = Vec::new();
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let mut cells = line.split(',');
            let t: f64 = cells
                .next()
                .ok_or_else(|| Error::Parse("missing time cell".into()))?
                .parse()
                .map_err(|_| Error::Parse("bad time cell".into()))?;
            let row: Vec<f64> = cells
                .map(|c| c.parse().map_err(|_| Error::Parse(format!("bad cell '{c}'"))))
                .collect::<Result<_>>()?;
            if row.len() != frequencies.len() {
                return Err(Error::Parse("ragged grid csv row".into()));
            }
            times.push(t);
            power_db.push(row);
        }
        let grid = PowerGrid { times, frequencies, power_db };
        grid.validate()?;
        Ok(grid)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let doc = PowerGridJson {
            times: self.times.clone(),
            frequencies: self.frequencies.clone(),
            power_db: self.power_db.iter().flatten().copied().collect(),
        };
        let text = serde_json::to_string_pretty(&doc)
            .map_err(|e| Error::Parse(e.to_string()))?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let doc: PowerGridJson =
            serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        let cols = doc.frequencies.len();
        if cols == 0 || doc.power_db.len() != doc.times.len() * cols {
            return Err(Error::Parse("grid json matrix size mismatch".into()));
        }
        let power_db = doc.power_db.chunks(cols).map(|c| c.to_vec()).collect();
        let grid = PowerGrid { times: doc.times, frequencies: doc.frequencies, power_db };
        grid.validate()?;
        Ok(grid)
    }
}

/// Brick-wall band weight for an FFT bin: 1 strictly inside the band, 1/sqrt(2)
/// on an edge (the 3 dB crossover), 0 outside.
fn band_weight(f: f64, lo: f64, hi: f64, tol: f64) -> f64 {
    if (f - lo).abs() <= tol || (f - hi).abs() <= tol {
        FRAC_1_SQRT_2
    } else if f > lo && f < hi {
        1.0
    } else {
        0.0
    }
}

fn check_band_coverage(signal: &BasebandSignal, lo_rf: f64, hi_rf: f64) -> Result<()> {
    let half = signal.sample_rate / 2.0;
    let tol = 1e-6 * signal.sample_rate;
    let lo_bb = lo_rf - signal.center_frequency;
    let hi_bb = hi_rf - signal.center_frequency;
    if lo_bb < -half - tol || hi_bb > half + tol {
        return Err(Error::invalid(format!(
            "band [{lo_rf}, {hi_rf}] Hz exceeds the represented span of the signal"
        )));
    }
    Ok(())
}

/// Band-limit a window in place via FFT, returning the filtered time-domain
/// samples. `lo`/`hi` are baseband edges; bins exactly on an edge are
/// weighted by 1/sqrt(2) so adjacent filter positions cross over at -3 dB.
pub fn band_filter(
    planner: &mut FftPlanner<f64>,
    window: &[Complex64],
    fs: f64,
    lo: f64,
    hi: f64,
) -> Vec<Complex64> {
    let n = window.len();
    let mut buf = window.to_vec();
    planner.plan_fft_forward(n).process(&mut buf);
    let bin_width = fs / n as f64;
    let tol = bin_width * 1e-6;
    for (k, v) in buf.iter_mut().enumerate() {
        let f = if k <= n / 2 { k as f64 * bin_width } else { (k as f64 - n as f64) * bin_width };
        *v *= band_weight(f, lo, hi, tol);
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
    buf
}

/// Run the stepped-LO narrowband chain over the signal. For each stop window
/// the signal slice is band-limited to the step's NBPF position, envelope
/// detected through the log-video model, quantized, and the window's peak
/// detected level is recorded. Successive ramps append rows.
pub fn nsr_process(
    signal: &BasebandSignal,
    plan: &SweepPlan,
    dlva: &DlvaParams,
    adc: &AdcParams,
) -> Result<PowerGrid> {
    dlva.validate()?;
    adc.validate()?;
    if signal.duration() + 0.5 / signal.sample_rate < plan.ramp_period {
        return Err(Error::invalid("signal must span at least one ramp period"));
    }
    check_band_coverage(
        signal,
        plan.start_frequency,
        plan.start_frequency + plan.bpf_bandwidth,
    )?;

    let fs = signal.sample_rate;
    let window_len = (plan.stop_duration * fs).round().max(1.0) as usize;
    let ramp_len = window_len * plan.step_count;
    let ramps = signal.samples.len() / ramp_len;
    if ramps == 0 {
        return Err(Error::invalid("signal shorter than one sampled ramp"));
    }

    let mut planner = FftPlanner::new();
    let mut times = Vec::with_capacity(ramps);
    let mut power_db = Vec::with_capacity(ramps);
    for r in 0..ramps {
        let ramp_start = r * ramp_len;
        let mut row = Vec::with_capacity(plan.step_count);
        for i in 0..plan.step_count {
            let lo = plan.start_frequency + i as f64 * plan.nbpf_bandwidth
                - signal.center_frequency;
            let hi = lo + plan.nbpf_bandwidth;
            let s = ramp_start + i * window_len;
            let filtered = band_filter(&mut planner, &signal.samples[s..s + window_len], fs, lo, hi);
            let peak_power = filtered.iter().map(|x| x.norm_sqr()).fold(0.0f64, f64::max);
            // Quantizing after the peak is equivalent: the quantizer is
            // monotone.
            let volts = adc.quantize_one(dlva_detect(peak_power, dlva));
            row.push(dlva.video_to_db(volts));
        }
        times.push(signal.start_time + (ramp_start as f64 + ramp_len as f64 / 2.0) / fs);
        power_db.push(row);
    }

    let frequencies = (0..plan.step_count).map(|i| plan.step_frequency(i)).collect();
    let grid = PowerGrid { times, frequencies, power_db };
    grid.validate()?;
    Ok(grid)
}

/// Wideband envelope chain: full-band filter, per-sample log-envelope
/// detection and quantization. Returns the video time series decimated to
/// the ADC rate.
pub fn sed_process(
    signal: &BasebandSignal,
    bpf: f64,
    dlva: &DlvaParams,
    adc: &AdcParams,
) -> Result<Vec<(f64, f64)>> {
    dlva.validate()?;
    adc.validate()?;
    if !(bpf > 0.0) {
        return Err(Error::invalid("bpf bandwidth must be positive"));
    }
    check_band_coverage(
        signal,
        signal.center_frequency - bpf / 2.0,
        signal.center_frequency + bpf / 2.0,
    )?;

    let fs = signal.sample_rate;
    let mut planner = FftPlanner::new();
    let filtered = band_filter(&mut planner, &signal.samples, fs, -bpf / 2.0, bpf / 2.0);
    let decim = (fs / adc.sample_rate).round().max(1.0) as usize;
    let mut out = Vec::with_capacity(filtered.len() / decim + 1);
    for (n, x) in filtered.iter().enumerate().step_by(decim) {
        let volts = adc.quantize_one(dlva_detect(x.norm_sqr(), dlva));
        out.push((signal.time_of(n), dlva.video_to_db(volts)));
    }
    Ok(out)
}

/// Per-frequency aggregate of a grid (max over time rows) with estimated
/// center frequency and -3 dB bandwidth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEstimate {
    /// (frequency Hz, power dBW), max over time rows.
    pub points: Vec<(f64, f64)>,
    /// Power-weighted centroid, resolution about NBPF/2.
    pub center_frequency: f64,
    /// -3 dB extent, resolution about NBPF/2.
    pub bandwidth_3db: f64,
}

impl SpectrumEstimate {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(w, "frequency_hz,power_db")?;
        for (f, p) in &self.points {
            writeln!(w, "{f},{p}")?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn reconstruct_spectrum(grid: &PowerGrid) -> Result<SpectrumEstimate> {
    grid.validate()?;
    if grid.times.is_empty() || grid.frequencies.is_empty() {
        return Err(Error::invalid("grid is empty"));
    }
    let cols = grid.frequencies.len();
    let mut points = Vec::with_capacity(cols);
    for c in 0..cols {
        let max = grid
            .power_db
            .iter()
            .map(|row| row[c])
            .fold(f64::NEG_INFINITY, f64::max);
        points.push((grid.frequencies[c], max));
    }

    // Power-weighted centroid in linear power.
    let mut num = 0.0;
    let mut den = 0.0;
    for (f, db) in &points {
        let p = 10.0f64.powf(db / 10.0);
        num += f * p;
        den += p;
    }
    let center_frequency = num / den;

    // -3 dB extent: outermost bins within 3 dB of the peak, counted as full
    // NBPF-wide bins.
    let peak = points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let spacing = grid.frequency_spacing();
    let occupied: Vec<usize> = points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.1 >= peak - 3.0)
        .map(|(i, _)| i)
        .collect();
    let bandwidth_3db = match (occupied.first(), occupied.last()) {
        (Some(&lo), Some(&hi)) if spacing > 0.0 => (hi - lo + 1) as f64 * spacing,
        _ => spacing.max(0.0),
    };

    Ok(SpectrumEstimate { points, center_frequency, bandwidth_3db })
}
