//! Pulsed-LFM synthesis at complex baseband, pass-geometry gain modulation,
//! link-budget arithmetic, and additive noise.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use std::f64::consts::PI;
use std::io::{Read, Write};
use std::path::Path;

use crate::antenna::{normalized_pattern, ArrayGeometry, ElementFactor, SPEED_OF_LIGHT};
use crate::error::{Error, Result};

pub const BOLTZMANN: f64 = 1.380649e-23;

/// Emitter waveform parameters. `duty_cycle` is derived from
/// `pulse_width / pri` at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseTrainParams {
    pub center_frequency: f64,
    pub chirp_bandwidth: f64,
    pub pulse_width: f64,
    pub pri: f64,
    pub duty_cycle: f64,
    pub sample_rate: f64,
}

impl PulseTrainParams {
    pub fn new(
        center_frequency: f64,
        chirp_bandwidth: f64,
        pulse_width: f64,
        pri: f64,
        sample_rate: f64,
    ) -> Result<Self> {
        if !(pulse_width > 0.0) || pulse_width > pri {
            return Err(Error::invalid("pulse width must satisfy 0 < pulse_width <= pri"));
        }
        if !(chirp_bandwidth >= 0.0) {
            return Err(Error::invalid("chirp bandwidth must be non-negative"));
        }
        if !(sample_rate >= 2.5 * chirp_bandwidth) || !(sample_rate > 0.0) {
            return Err(Error::invalid(
                "sample rate must be at least 2.5x the chirp bandwidth",
            ));
        }
        Ok(Self {
            center_frequency,
            chirp_bandwidth,
            pulse_width,
            pri,
            duty_cycle: pulse_width / pri,
            sample_rate,
        })
    }
}

/// Complex baseband sample buffer. Baseband 0 Hz represents
/// `center_frequency` at RF.
#[derive(Debug, Clone, PartialEq)]
pub struct BasebandSignal {
    pub samples: Vec<Complex64>,
    pub sample_rate: f64,
    pub start_time: f64,
    pub center_frequency: f64,
}

const IQ_MAGIC: &[u8; 4] = b"NIQ1";

impl BasebandSignal {
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }

    pub fn time_of(&self, index: usize) -> f64 {
        self.start_time + index as f64 / self.sample_rate
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum()
    }

    /// Binary I/Q layout (little-endian): magic `NIQ1`, then f64
    /// sample_rate, center_frequency, start_time, u64 sample count, then
    /// interleaved f32 I/Q pairs.
    pub fn write_iq(&self, path: &Path) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        w.write_all(IQ_MAGIC)?;
        w.write_all(&self.sample_rate.to_le_bytes())?;
        w.write_all(&self.center_frequency.to_le_bytes())?;
        w.write_all(&self.start_time.to_le_bytes())?;
        w.write_all(&(self.samples.len() as u64).to_le_bytes())?;
        for s in &self.samples {
            w.write_all(&(s.re as f32).to_le_bytes())?;
            w.write_all(&(s.im as f32).to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_iq(path: &Path) -> Result<Self> {
        let mut r = std::io::BufReader::new(std::fs::File::open(path)?);
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != IQ_MAGIC {
            return Err(Error::Parse("bad I/Q file magic".into()));
        }
        let mut f = [0u8; 8];
        let mut next = |r: &mut dyn Read| -> Result<f64> {
            r.read_exact(&mut f)?;
            Ok(f64::from_le_bytes(f))
        };
        let sample_rate = next(&mut r)?;
        let center_frequency = next(&mut r)?;
        let start_time = next(&mut r)?;
        let mut c = [0u8; 8];
        r.read_exact(&mut c)?;
        let count = u64::from_le_bytes(c) as usize;
        let mut samples = Vec::with_capacity(count);
        let mut pair = [0u8; 8];
        for _ in 0..count {
            r.read_exact(&mut pair)?;
            let re = f32::from_le_bytes(pair[0..4].try_into().unwrap()) as f64;
            let im = f32::from_le_bytes(pair[4..8].try_into().unwrap()) as f64;
            samples.push(Complex64::new(re, im));
        }
        Ok(Self { samples, sample_rate, start_time, center_frequency })
    }

    /// Two-column CSV (`time_s,i,q`) for small cases.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(w, "time_s,i,q")?;
        for (n, s) in self.samples.iter().enumerate() {
            writeln!(w, "{},{},{}", self.time_of(n), s.re, s.im)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Antenna gain model used while the beam sweeps past the receiver.
#[derive(Debug, Clone)]
pub enum AntennaCut {
    Isotropic,
    /// Uniform line array evaluated through the closed-form azimuth cut.
    UniformLine {
        geometry: ArrayGeometry,
        alpha_phase: f64,
        element: ElementFactor,
    },
}

impl AntennaCut {
    /// Normalized gain magnitude at a given RF frequency and azimuth angle.
    pub fn gain(&self, frequency: f64, theta: f64) -> Result<f64> {
        match self {
            AntennaCut::Isotropic => Ok(1.0),
            AntennaCut::UniformLine { geometry, alpha_phase, element } => {
                Ok(element.eval(theta) * normalized_pattern(geometry, *alpha_phase, frequency, theta)?)
            }
        }
    }
}

/// Satellite pass geometry and link budget.
#[derive(Debug, Clone)]
pub struct PassScenario {
    pub transmit_power: f64,
    pub tx_gain_boresight: f64,
    pub rx_gain: f64,
    pub range: f64,
    pub system_noise_temperature: f64,
    pub ground_beam_speed: f64,
    pub pass_duration: f64,
    pub antenna_cut: AntennaCut,
}

impl PassScenario {
    pub fn validate(&self) -> Result<()> {
        let positives = [
            ("transmit_power", self.transmit_power),
            ("tx_gain_boresight", self.tx_gain_boresight),
            ("rx_gain", self.rx_gain),
            ("range", self.range),
            ("system_noise_temperature", self.system_noise_temperature),
            ("ground_beam_speed", self.ground_beam_speed),
            ("pass_duration", self.pass_duration),
        ];
        for (name, v) in positives {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    /// Received signal power at boresight (no noise term).
    pub fn received_power(&self, frequency: f64) -> f64 {
        let lambda = SPEED_OF_LIGHT / frequency;
        self.transmit_power * self.tx_gain_boresight * self.rx_gain * lambda * lambda
            / (4.0 * PI * self.range).powi(2)
    }
}

/// Synthesize the pulsed LFM train. Within each pulse the instantaneous
/// frequency sweeps linearly from -BW/2 to +BW/2; amplitude is 1 inside
/// pulses and 0 between, with the phase restarting identically each pulse.
pub fn lfm_pulse_train(params: &PulseTrainParams, duration: f64) -> Result<BasebandSignal> {
    if !(duration > 0.0) {
        return Err(Error::invalid("duration must be positive"));
    }
    if params.sample_rate < 2.5 * params.chirp_bandwidth {
        return Err(Error::invalid("sample rate too low for chirp bandwidth"));
    }
    let n = (duration * params.sample_rate).round() as usize;
    let rate = if params.pulse_width > 0.0 {
        params.chirp_bandwidth / params.pulse_width
    } else {
        0.0
    };
    // Work in sample counts so every pulse sees the identical tau sequence;
    // deciding membership at sample centers keeps the pulse-edge comparison
    // from flipping between pulses through float rounding.
    let pri_samples = params.pri * params.sample_rate;
    let pw_samples = params.pulse_width * params.sample_rate;
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let k = ((i as f64 + 0.5) / pri_samples).floor();
        let offset = (i as f64 - k * pri_samples).max(0.0);
        if offset < pw_samples {
            let tau = offset / params.sample_rate;
            let phase = 2.0 * PI * (-0.5 * params.chirp_bandwidth * tau + 0.5 * rate * tau * tau);
            samples.push(Complex64::from_polar(1.0, phase));
        } else {
            samples.push(Complex64::new(0.0, 0.0));
        }
    }
    Ok(BasebandSignal {
        samples,
        sample_rate: params.sample_rate,
        start_time: 0.0,
        center_frequency: params.center_frequency,
    })
}

/// Slant-range resolution `c / (2 * BW * sin(psi))`.
pub fn range_resolution(chirp_bandwidth: f64, incidence_angle: f64) -> Result<f64> {
    if !(chirp_bandwidth > 0.0) {
        return Err(Error::invalid("chirp bandwidth must be positive"));
    }
    if !(incidence_angle > 0.0) || incidence_angle > PI / 2.0 {
        return Err(Error::invalid("incidence angle must be in (0, 90] degrees"));
    }
    Ok(SPEED_OF_LIGHT / (2.0 * chirp_bandwidth * incidence_angle.sin()))
}

/// One-way link-budget SNR: `Pt*Gt*Gr*lambda^2 / ((4*pi*R)^2 * K*T*BW)`.
pub fn link_budget_snr(scenario: &PassScenario, frequency: f64, receiver_bandwidth: f64) -> Result<f64> {
    if !(receiver_bandwidth > 0.0) {
        return Err(Error::invalid("receiver bandwidth must be positive"));
    }
    if !frequency.is_finite() || !(frequency > 0.0) {
        return Err(Error::invalid("frequency must be positive"));
    }
    let noise = BOLTZMANN * scenario.system_noise_temperature * receiver_bandwidth;
    Ok(scenario.received_power(frequency) / noise)
}

/// Scale each sample by the antenna gain at the pass angle
/// `theta(t) = arctan(v*(t - t_mid)/R)` evaluated at the sample's
/// instantaneous RF frequency, then by the boresight link-budget amplitude.
///
/// The instantaneous frequency is taken from the sample-to-sample phase
/// difference (stationary-phase approximation of the per-frequency gain).
pub fn apply_pass_gain(signal: &BasebandSignal, scenario: &PassScenario) -> Result<BasebandSignal> {
    scenario.validate()?;
    let amplitude = scenario.received_power(signal.center_frequency).sqrt();
    let t_mid = signal.start_time + signal.duration() / 2.0;
    let n = signal.samples.len();
    let fs = signal.sample_rate;

    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = signal.samples[i];
        if x.norm_sqr() == 0.0 {
            out.push(Complex64::new(0.0, 0.0));
            continue;
        }
        // Phase-difference instantaneous frequency; falls back to the
        // previous pair at a pulse's trailing edge.
        let f_inst = {
            let pair = if i + 1 < n && signal.samples[i + 1].norm_sqr() > 0.0 {
                Some((signal.samples[i], signal.samples[i + 1]))
            } else if i > 0 && signal.samples[i - 1].norm_sqr() > 0.0 {
                Some((signal.samples[i - 1], signal.samples[i]))
            } else {
                None
            };
            match pair {
                Some((a, b)) => (b * a.conj()).arg() * fs / (2.0 * PI),
                None => 0.0,
            }
        };
        let t = signal.time_of(i);
        let theta = (scenario.ground_beam_speed * (t - t_mid) / scenario.range).atan();
        let gain = scenario.antenna_cut.gain(signal.center_frequency + f_inst, theta)?;
        out.push(x * gain * amplitude);
    }
    Ok(BasebandSignal {
        samples: out,
        sample_rate: signal.sample_rate,
        start_time: signal.start_time,
        center_frequency: signal.center_frequency,
    })
}

/// Add circularly-symmetric complex Gaussian noise of the given total power,
/// deterministically under a fixed seed.
pub fn add_awgn(signal: &BasebandSignal, noise_power: f64, seed: u64) -> Result<BasebandSignal> {
    if !(noise_power >= 0.0) {
        return Err(Error::invalid("noise power must be non-negative"));
    }
    if noise_power == 0.0 {
        return Ok(signal.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, (noise_power / 2.0).sqrt())
        .map_err(|e| Error::invalid(e.to_string()))?;
    let samples = signal
        .samples
        .iter()
        .map(|s| s + Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng)))
        .collect();
    Ok(BasebandSignal {
        samples,
        sample_rate: signal.sample_rate,
        start_time: signal.start_time,
        center_frequency: signal.center_frequency,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antenna::null_angles;
    use rustfft::FftPlanner;

    fn tone_params(fs: f64) -> PulseTrainParams {
        PulseTrainParams::new(9.6e9, 0.0, 1.0e-3, 1.0e-3, fs).unwrap()
    }

    #[test]
    fn duty_cycle_fraction_of_nonzero_samples() {
        let params = PulseTrainParams::new(9.6e9, 1.0e5, 0.2e-3, 1.0e-3, 1.0e6).unwrap();
        assert!((params.duty_cycle - 0.2).abs() < 1e-12);
        let sig = lfm_pulse_train(&params, 5.0e-3).unwrap();
        let nonzero = sig.samples.iter().filter(|s| s.norm_sqr() > 0.0).count();
        let total = sig.samples.len();
        // 5 pulses, 20% duty, +- one sample per pulse edge.
        assert!((nonzero as i64 - (total as f64 * 0.2).round() as i64).abs() <= 5);

        // Exactly 5 pulse leading edges.
        let mut edges = 0;
        let mut prev = 0.0f64;
        for s in &sig.samples {
            let cur = s.norm_sqr();
            if cur > 0.0 && prev == 0.0 {
                edges += 1;
            }
            prev = cur;
        }
        assert_eq!(edges, 5);
    }

    #[test]
    fn zero_bandwidth_gives_rectangular_tone_train() {
        let params = PulseTrainParams::new(9.6e9, 0.0, 0.2e-3, 1.0e-3, 1.0e6).unwrap();
        let sig = lfm_pulse_train(&params, 2.0e-3).unwrap();
        for s in sig.samples.iter().filter(|s| s.norm_sqr() > 0.0) {
            assert!((s.re - 1.0).abs() < 1e-12 && s.im.abs() < 1e-12);
        }
    }

    #[test]
    fn single_pulse_spectrum_is_flat_inside_bandwidth() {
        // Time-bandwidth product 500.
        let bw = 1.0e6;
        let pw = 0.5e-3;
        let fs = 4.0e6;
        let params = PulseTrainParams::new(9.6e9, bw, pw, pw, fs).unwrap();
        let sig = lfm_pulse_train(&params, pw).unwrap();

        let mut buf = sig.samples.clone();
        buf.resize(4096, Complex64::new(0.0, 0.0));
        FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
        let n = buf.len();
        let bin = |f: f64| -> usize {
            let k = (f / fs * n as f64).round() as i64;
            k.rem_euclid(n as i64) as usize
        };
        let mag_db = |k: usize| 20.0 * buf[k].norm().log10();

        // Reference level mid-band; check flatness over +-0.4*BW and
        // rejection > 20 dB at 1.5*BW/2 outside.
        let reference = mag_db(bin(0.0));
        for frac in [-0.4, -0.2, 0.2, 0.4] {
            let level = mag_db(bin(frac * bw));
            assert!((level - reference).abs() < 3.0, "in-band ripple {level} vs {reference}");
        }
        for frac in [-1.0, 1.0] {
            let level = mag_db(bin(frac * bw));
            assert!(reference - level > 20.0, "out-of-band level {level} vs {reference}");
        }
    }

    #[test]
    fn pulse_train_periodicity() {
        let params = PulseTrainParams::new(9.6e9, 2.0e5, 0.2e-3, 1.0e-3, 1.0e6).unwrap();
        let sig = lfm_pulse_train(&params, 10.0e-3).unwrap();
        let period = (params.pri * params.sample_rate).round() as usize;
        for i in 0..sig.samples.len() - period {
            let d = (sig.samples[i] - sig.samples[i + period]).norm();
            assert!(d < 1e-9, "i={i} d={d}");
        }
    }

    #[test]
    fn sample_rate_too_low_rejected() {
        assert!(PulseTrainParams::new(9.6e9, 1.0e6, 0.2e-3, 1.0e-3, 2.0e6).is_err());
    }

    #[test]
    fn range_resolution_values() {
        let d = range_resolution(400.0e6, PI / 2.0).unwrap();
        assert!((d - 0.3747403325).abs() < 1e-6);
        let d30 = range_resolution(400.0e6, 30.0f64.to_radians()).unwrap();
        assert!((d30 - 2.0 * d).abs() < 1e-6);
        let half = range_resolution(200.0e6, PI / 2.0).unwrap();
        assert!((half - 2.0 * d).abs() < 1e-6);
        assert!(range_resolution(400.0e6, 0.0).is_err());
    }

    fn scenario(cut: AntennaCut) -> PassScenario {
        PassScenario {
            transmit_power: 1.0e3,
            tx_gain_boresight: 1.0,
            rx_gain: 1.0,
            range: 600.0e3,
            system_noise_temperature: 290.0,
            ground_beam_speed: 7.5e3,
            pass_duration: 1.0,
            antenna_cut: cut,
        }
    }

    #[test]
    fn link_budget_direct_formula() {
        let sc = scenario(AntennaCut::Isotropic);
        let f = 9.6e9;
        let snr = link_budget_snr(&sc, f, 10.0e6).unwrap();
        // Independent arithmetic check.
        let lambda = SPEED_OF_LIGHT / f;
        let expected = 1.0e3 * lambda * lambda
            / ((4.0 * PI * 600.0e3).powi(2) * BOLTZMANN * 290.0 * 10.0e6);
        assert!((snr - expected).abs() / expected < 1e-12);
    }

    #[test]
    fn link_budget_bandwidth_scaling() {
        let sc = scenario(AntennaCut::Isotropic);
        let a = link_budget_snr(&sc, 9.6e9, 10.0e6).unwrap();
        let b = link_budget_snr(&sc, 9.6e9, 5.0e6).unwrap();
        assert!((b / a - 2.0).abs() < 1e-12);
        let wide = link_budget_snr(&sc, 9.6e9, 400.0e6).unwrap();
        assert!((wide / a - 1.0 / 40.0).abs() < 1e-14);
    }

    #[test]
    fn isotropic_gain_scales_by_constant() {
        let params = tone_params(1.0e6);
        let sig = lfm_pulse_train(&params, 10.0e-3).unwrap();
        let sc = scenario(AntennaCut::Isotropic);
        let out = apply_pass_gain(&sig, &sc).unwrap();
        let a = sc.received_power(9.6e9).sqrt();
        for (x, y) in sig.samples.iter().zip(&out.samples) {
            assert!((y - x * a).norm() < 1e-20);
        }
    }

    #[test]
    fn pattern_null_crossing_suppresses_envelope() {
        // Place the first array null at a known pass time and check the
        // envelope collapses there.
        let geom = ArrayGeometry::line(100, 0.015).unwrap();
        let f = 9.6e9;
        let null = null_angles(&geom, 0.0, f, 1..=1).unwrap()[0];
        let mut sc = scenario(AntennaCut::UniformLine {
            geometry: geom,
            alpha_phase: 0.0,
            element: ElementFactor::Isotropic,
        });
        // theta(t) reaches the null at t = t_mid + R*tan(null)/v; speed is
        // raised so that time lands inside the pass.
        let duration = 2.0;
        sc.pass_duration = duration;
        sc.ground_beam_speed = 20.0e3;
        let t_null = duration / 2.0 + sc.range * null.tan() / sc.ground_beam_speed;
        assert!(t_null < duration);

        let params = PulseTrainParams::new(f, 0.0, 1.0e-3, 1.0e-3, 1.0e5).unwrap();
        let sig = lfm_pulse_train(&params, duration).unwrap();
        let out = apply_pass_gain(&sig, &sc).unwrap();

        let peak = out.samples.iter().map(|s| s.norm()).fold(0.0f64, f64::max);
        let idx = (t_null * params.sample_rate).round() as usize;
        let near_null = out.samples[idx].norm();
        assert!(near_null < 1e-4 * peak, "near_null={near_null} peak={peak}");
    }

    #[test]
    fn frequency_dependent_gain_shifts_null_times() {
        // Two tones 63.5 MHz apart see nulls at distinct pass times.
        let geom = ArrayGeometry::line(100, 0.015).unwrap();
        let cut = AntennaCut::UniformLine {
            geometry: geom.clone(),
            alpha_phase: 0.0,
            element: ElementFactor::Isotropic,
        };
        let mut sc = scenario(cut);
        sc.pass_duration = 2.0;
        sc.ground_beam_speed = 20.0e3;

        let null_time = |f: f64| -> f64 {
            let params = PulseTrainParams::new(f, 0.0, 1.0e-3, 1.0e-3, 1.0e5).unwrap();
            let sig = lfm_pulse_train(&params, 2.0).unwrap();
            let out = apply_pass_gain(&sig, &sc).unwrap();
            // Deepest envelope minimum after mid-pass (the first null is
            // the global minimum over this half for these geometries).
            let mid = out.samples.len() / 2;
            let mut best = (mid, f64::INFINITY);
            for i in mid + 10..out.samples.len() {
                let v = out.samples[i].norm();
                if v < best.1 {
                    best = (i, v);
                }
            }
            best.0 as f64 / out.sample_rate
        };

        let t1 = null_time(9551.0e6);
        let t2 = null_time(9614.5e6);
        assert!(t2 < t1, "higher frequency pulls the null inward: {t1} vs {t2}");
        assert!((t1 - t2).abs() > 1e-3);
    }

    #[test]
    fn gain_energy_conservation() {
        let geom = ArrayGeometry::line(16, 0.015).unwrap();
        let sc = scenario(AntennaCut::UniformLine {
            geometry: geom,
            alpha_phase: 0.0,
            element: ElementFactor::Isotropic,
        });
        let params = PulseTrainParams::new(9.6e9, 1.0e4, 0.2e-3, 1.0e-3, 1.0e5).unwrap();
        let sig = lfm_pulse_train(&params, 0.5).unwrap();
        let out = apply_pass_gain(&sig, &sc).unwrap();
        // Output energy equals the gain-weighted input energy by
        // construction; recompute independently per sample.
        let mut expected = 0.0;
        for (i, x) in sig.samples.iter().enumerate() {
            if x.norm_sqr() == 0.0 {
                continue;
            }
            let g = out.samples[i].norm() / x.norm();
            expected += g * g * x.norm_sqr();
        }
        let got = out.energy();
        assert!((got - expected).abs() / expected < 1e-9);
    }

    #[test]
    fn awgn_zero_power_is_identity() {
        let params = tone_params(1.0e5);
        let sig = lfm_pulse_train(&params, 1.0e-2).unwrap();
        let out = add_awgn(&sig, 0.0, 42).unwrap();
        assert_eq!(sig, out);
    }

    #[test]
    fn awgn_variance_matches_power() {
        let sig = BasebandSignal {
            samples: vec![Complex64::new(0.0, 0.0); 1_000_000],
            sample_rate: 1.0e6,
            start_time: 0.0,
            center_frequency: 0.0,
        };
        let p = 2.5e-3;
        let out = add_awgn(&sig, p, 7).unwrap();
        let var = out.energy() / out.samples.len() as f64;
        assert!((var - p).abs() / p < 0.01, "var={var}");
    }

    #[test]
    fn awgn_is_deterministic_per_seed() {
        let params = tone_params(1.0e5);
        let sig = lfm_pulse_train(&params, 1.0e-2).unwrap();
        let a = add_awgn(&sig, 1.0e-3, 99).unwrap();
        let b = add_awgn(&sig, 1.0e-3, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn awgn_independent_seeds_uncorrelated() {
        let sig = BasebandSignal {
            samples: vec![Complex64::new(0.0, 0.0); 1_000_000],
            sample_rate: 1.0e6,
            start_time: 0.0,
            center_frequency: 0.0,
        };
        let a = add_awgn(&sig, 1.0, 1).unwrap();
        let b = add_awgn(&sig, 1.0, 2).unwrap();
        let n = a.samples.len() as f64;
        let cross: Complex64 =
            a.samples.iter().zip(&b.samples).map(|(x, y)| x * y.conj()).sum();
        let rho = cross.norm() / n; // unit noise power on both sides
        assert!(rho < 0.01, "rho={rho}");
    }

    #[test]
    fn iq_round_trip() {
        let params = PulseTrainParams::new(9.6e9, 1.0e4, 0.2e-3, 1.0e-3, 1.0e5).unwrap();
        let sig = lfm_pulse_train(&params, 5.0e-3).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.iq");
        sig.write_iq(&path).unwrap();
        let back = BasebandSignal::read_iq(&path).unwrap();
        assert_eq!(back.samples.len(), sig.samples.len());
        assert_eq!(back.sample_rate, sig.sample_rate);
        assert_eq!(back.center_frequency, sig.center_frequency);
        for (a, b) in sig.samples.iter().zip(&back.samples) {
            assert!((a - b).norm() < 1e-6); // f32 storage
        }
    }
}
