//! Scenario configuration: a single TOML file with nested sections. All
//! physical quantities carry explicit units in their field names.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::antenna::{ArrayGeometry, ElementFactor};
use crate::error::{Error, Result};
use crate::receiver::{make_sweep_plan, validate_sweep_plan, AdcParams, DlvaParams, SweepPlan};
use crate::waveform::{AntennaCut, PassScenario, PulseTrainParams, BOLTZMANN};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmitterConfig {
    pub center_frequency_hz: f64,
    pub chirp_bandwidth_hz: f64,
    pub pulse_width_s: f64,
    pub pri_s: f64,
    pub sample_rate_hz: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PassConfig {
    pub transmit_power_w: f64,
    pub tx_gain: f64,
    pub rx_gain: f64,
    pub range_m: f64,
    pub noise_temperature_k: f64,
    pub ground_beam_speed_mps: f64,
    pub pass_duration_s: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AntennaConfig {
    pub m_count: usize,
    pub n_count: usize,
    pub spacing_x_m: f64,
    pub spacing_y_m: f64,
    #[serde(default)]
    pub alpha_phase_rad: f64,
    #[serde(default)]
    pub beta_phase_rad: f64,
    /// "isotropic" or "cosine".
    #[serde(default = "default_element_factor")]
    pub element_factor: String,
    #[serde(default = "default_cosine_exponent")]
    pub cosine_exponent: f64,
}

fn default_element_factor() -> String {
    "isotropic".to_string()
}

fn default_cosine_exponent() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DlvaConfig {
    #[serde(default = "default_dlva_slope")]
    pub slope_v_per_decade: f64,
    #[serde(default = "default_dlva_offset")]
    pub offset_v: f64,
    #[serde(default = "default_dlva_range")]
    pub dynamic_range_db: f64,
    /// Defaults to thermal noise in the receiver's own bandwidth.
    pub noise_floor_w: Option<f64>,
}

fn default_dlva_slope() -> f64 {
    0.25
}
fn default_dlva_offset() -> f64 {
    4.0
}
fn default_dlva_range() -> f64 {
    70.0
}

impl Default for DlvaConfig {
    fn default() -> Self {
        Self {
            slope_v_per_decade: default_dlva_slope(),
            offset_v: default_dlva_offset(),
            dynamic_range_db: default_dlva_range(),
            noise_floor_w: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdcConfig {
    #[serde(default = "default_adc_bits")]
    pub bits: u32,
    #[serde(default = "default_adc_full_scale")]
    pub full_scale_v: f64,
    #[serde(default = "default_adc_rate")]
    pub sample_rate_hz: f64,
}

fn default_adc_bits() -> u32 {
    12
}
fn default_adc_full_scale() -> f64 {
    2.5
}
fn default_adc_rate() -> f64 {
    10.0e6
}

impl Default for AdcConfig {
    fn default() -> Self {
        Self {
            bits: default_adc_bits(),
            full_scale_v: default_adc_full_scale(),
            sample_rate_hz: default_adc_rate(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NsrConfig {
    pub bpf_hz: f64,
    pub nbpf_hz: f64,
    pub ramp_period_s: f64,
    /// Defaults to a span centered on the emitter carrier.
    pub start_frequency_hz: Option<f64>,
    #[serde(default)]
    pub dlva: DlvaConfig,
    #[serde(default)]
    pub adc: AdcConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SedConfig {
    pub bpf_hz: f64,
    #[serde(default)]
    pub dlva: DlvaConfig,
    #[serde(default)]
    pub adc: AdcConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputConfig {
    pub directory: String,
    #[serde(default = "default_format")]
    pub format: OutputFormat,
    #[serde(default)]
    pub iq_dump: bool,
}

fn default_format() -> OutputFormat {
    OutputFormat::Csv
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub emitter: EmitterConfig,
    pub pass: PassConfig,
    pub antenna: AntennaConfig,
    pub nsr: NsrConfig,
    pub sed: SedConfig,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    pub outputs: OutputConfig,
}

fn default_seeds() -> Vec<u64> {
    vec![1]
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Collect every violated invariant; empty means valid.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |cond: bool, msg: &str| {
            if !cond {
                out.push(msg.to_string());
            }
        };

        let e = &self.emitter;
        check(e.pulse_width_s > 0.0, "emitter.pulse_width_s must be positive");
        check(
            e.pulse_width_s <= e.pri_s,
            "emitter.pulse_width_s must not exceed emitter.pri_s",
        );
        check(e.chirp_bandwidth_hz >= 0.0, "emitter.chirp_bandwidth_hz must be non-negative");
        check(
            e.sample_rate_hz >= 2.5 * e.chirp_bandwidth_hz,
            "emitter.sample_rate_hz must be at least 2.5x emitter.chirp_bandwidth_hz",
        );

        let p = &self.pass;
        for (name, v) in [
            ("pass.transmit_power_w", p.transmit_power_w),
            ("pass.tx_gain", p.tx_gain),
            ("pass.rx_gain", p.rx_gain),
            ("pass.range_m", p.range_m),
            ("pass.noise_temperature_k", p.noise_temperature_k),
            ("pass.ground_beam_speed_mps", p.ground_beam_speed_mps),
            ("pass.pass_duration_s", p.pass_duration_s),
        ] {
            check(v > 0.0 && v.is_finite(), &format!("{name} must be positive"));
        }

        let a = &self.antenna;
        check(a.m_count >= 1 && a.n_count >= 1, "antenna element counts must be at least 1");
        check(
            a.spacing_x_m > 0.0 && a.spacing_y_m > 0.0,
            "antenna element spacings must be positive",
        );
        check(
            matches!(a.element_factor.as_str(), "isotropic" | "cosine"),
            "antenna.element_factor must be 'isotropic' or 'cosine'",
        );
        check(a.cosine_exponent >= 0.0, "antenna.cosine_exponent must be >= 0");

        check(self.nsr.nbpf_hz > 0.0, "nsr.nbpf_hz must be positive");
        check(
            self.nsr.nbpf_hz <= self.nsr.bpf_hz,
            "nsr.nbpf_hz must not exceed nsr.bpf_hz",
        );
        check(self.nsr.ramp_period_s > 0.0, "nsr.ramp_period_s must be positive");
        check(self.sed.bpf_hz > 0.0, "sed.bpf_hz must be positive");
        check(
            self.nsr.bpf_hz <= e.sample_rate_hz,
            "nsr.bpf_hz must fit inside the simulated band (emitter.sample_rate_hz)",
        );
        check(
            self.sed.bpf_hz <= e.sample_rate_hz,
            "sed.bpf_hz must fit inside the simulated band (emitter.sample_rate_hz)",
        );

        for (name, d) in [("nsr.dlva", &self.nsr.dlva), ("sed.dlva", &self.sed.dlva)] {
            check(d.slope_v_per_decade > 0.0, &format!("{name}.slope_v_per_decade must be positive"));
            check(d.dynamic_range_db > 0.0, &format!("{name}.dynamic_range_db must be positive"));
            if let Some(floor) = d.noise_floor_w {
                check(floor > 0.0, &format!("{name}.noise_floor_w must be positive"));
            }
        }
        for (name, c) in [("nsr.adc", &self.nsr.adc), ("sed.adc", &self.sed.adc)] {
            check((4..=24).contains(&c.bits), &format!("{name}.bits must be in [4, 24]"));
            check(c.full_scale_v > 0.0, &format!("{name}.full_scale_v must be positive"));
            check(c.sample_rate_hz > 0.0, &format!("{name}.sample_rate_hz must be positive"));
        }

        check(!self.seeds.is_empty(), "seeds must list at least one seed");
        check(!self.outputs.directory.is_empty(), "outputs.directory must be set");

        // Dwell-versus-PRI gate: the stop duration must be strictly less
        // than the emitter PRI, i.e. (NBPF/BPF)*T < PRI.
        if let Ok(plan) = self.sweep_plan() {
            if e.pri_s > 0.0 {
                match validate_sweep_plan(&plan, e.pri_s) {
                    Ok(report) if !report.valid => out.push(format!(
                        "sweep plan violates the dwell constraint T_stop < PRI: {}",
                        report.message
                    )),
                    _ => {}
                }
            }
        }
        out
    }

    pub fn pulse_train_params(&self) -> Result<PulseTrainParams> {
        let e = &self.emitter;
        PulseTrainParams::new(
            e.center_frequency_hz,
            e.chirp_bandwidth_hz,
            e.pulse_width_s,
            e.pri_s,
            e.sample_rate_hz,
        )
    }

    pub fn array_geometry(&self) -> Result<ArrayGeometry> {
        let a = &self.antenna;
        ArrayGeometry::new(a.m_count, a.n_count, a.spacing_x_m, a.spacing_y_m)
    }

    pub fn element_factor(&self) -> Result<ElementFactor> {
        match self.antenna.element_factor.as_str() {
            "isotropic" => Ok(ElementFactor::Isotropic),
            "cosine" => ElementFactor::cosine_power(self.antenna.cosine_exponent),
            other => Err(Error::Config(format!("unknown element factor '{other}'"))),
        }
    }

    pub fn pass_scenario(&self) -> Result<PassScenario> {
        let p = &self.pass;
        let cut = AntennaCut::UniformLine {
            geometry: self.array_geometry()?,
            alpha_phase: self.antenna.alpha_phase_rad,
            element: self.element_factor()?,
        };
        let scenario = PassScenario {
            transmit_power: p.transmit_power_w,
            tx_gain_boresight: p.tx_gain,
            rx_gain: p.rx_gain,
            range: p.range_m,
            system_noise_temperature: p.noise_temperature_k,
            ground_beam_speed: p.ground_beam_speed_mps,
            pass_duration: p.pass_duration_s,
            antenna_cut: cut,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn sweep_plan(&self) -> Result<SweepPlan> {
        let plan = make_sweep_plan(self.nsr.bpf_hz, self.nsr.nbpf_hz, self.nsr.ramp_period_s)?;
        Ok(match self.nsr.start_frequency_hz {
            Some(start) => plan.with_start_frequency(start),
            None => plan.centered_at(self.emitter.center_frequency_hz),
        })
    }

    fn dlva_params(&self, cfg: &DlvaConfig, bandwidth: f64) -> DlvaParams {
        DlvaParams {
            slope: cfg.slope_v_per_decade,
            offset: cfg.offset_v,
            dynamic_range: cfg.dynamic_range_db,
            noise_floor: cfg
                .noise_floor_w
                .unwrap_or(BOLTZMANN * self.pass.noise_temperature_k * bandwidth),
        }
    }

    pub fn nsr_dlva(&self) -> DlvaParams {
        self.dlva_params(&self.nsr.dlva, self.nsr.nbpf_hz)
    }

    pub fn sed_dlva(&self) -> DlvaParams {
        self.dlva_params(&self.sed.dlva, self.sed.bpf_hz)
    }

    pub fn nsr_adc(&self) -> AdcParams {
        adc_params(&self.nsr.adc)
    }

    pub fn sed_adc(&self) -> AdcParams {
        adc_params(&self.sed.adc)
    }

    /// Total noise power across the simulated bandwidth: thermal density
    /// K*T times the sample rate.
    pub fn simulation_noise_power(&self) -> f64 {
        BOLTZMANN * self.pass.noise_temperature_k * self.emitter.sample_rate_hz
    }
}

fn adc_params(cfg: &AdcConfig) -> AdcParams {
    AdcParams { bits: cfg.bits, full_scale: cfg.full_scale_v, sample_rate: cfg.sample_rate_hz }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo_toml(pri_s: f64, nbpf_hz: f64) -> String {
        format!(
            r#"
[emitter]
center_frequency_hz = 9.6e9
chirp_bandwidth_hz = 320.0e3
pulse_width_s = {pw}
pri_s = {pri_s}
sample_rate_hz = 1.0e6

[pass]
transmit_power_w = 1.0e3
tx_gain = 1.0
rx_gain = 1.0
range_m = 600.0e3
noise_temperature_k = 290.0
ground_beam_speed_mps = 7.5e3
pass_duration_s = 0.4

[antenna]
m_count = 100
n_count = 1
spacing_x_m = 0.015
spacing_y_m = 0.015

[nsr]
bpf_hz = 400.0e3
nbpf_hz = {nbpf_hz}
ramp_period_s = 0.04

[sed]
bpf_hz = 400.0e3

seeds = [1]

[outputs]
directory = "out"
"#,
            pw = pri_s * 0.2,
        )
    }

    fn parse(text: &str) -> ScenarioConfig {
        toml::from_str(text).unwrap()
    }

    #[test]
    fn valid_defaulted_config_passes() {
        let cfg = parse(&demo_toml(2.0e-3, 10.0e3));
        assert!(cfg.violations().is_empty(), "{:?}", cfg.violations());
        assert_eq!(cfg.nsr.adc.bits, 12);
        assert_eq!(cfg.seeds, vec![1]);
        // Sweep span defaults to being centered on the carrier.
        let plan = cfg.sweep_plan().unwrap();
        assert!((plan.start_frequency - (9.6e9 - 200.0e3)).abs() < 1e-3);
    }

    #[test]
    fn dwell_violation_is_reported() {
        // T_stop = 1 ms, PRI = 0.5 ms -> T_stop = 2*PRI, invalid.
        let cfg = parse(&demo_toml(0.5e-3, 10.0e3));
        let violations = cfg.violations();
        assert!(
            violations.iter().any(|v| v.contains("T_stop < PRI")),
            "{violations:?}"
        );
    }

    #[test]
    fn nbpf_wider_than_bpf_names_the_field() {
        let cfg = parse(&demo_toml(2.0e-3, 800.0e3));
        let violations = cfg.violations();
        assert!(violations.iter().any(|v| v.contains("nsr.nbpf_hz")), "{violations:?}");
    }

    #[test]
    fn dlva_floor_defaults_to_thermal_noise_in_band() {
        let cfg = parse(&demo_toml(2.0e-3, 10.0e3));
        let dlva = cfg.nsr_dlva();
        let expected = BOLTZMANN * 290.0 * 10.0e3;
        assert!((dlva.noise_floor - expected).abs() / expected < 1e-12);
    }
}
