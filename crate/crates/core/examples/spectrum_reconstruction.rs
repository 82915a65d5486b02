//! Sweep a narrowband filter across a pulsed-LFM band and reconstruct the
//! chirp spectrum from the resulting grid. Also shows what happens when the
//! stop dwell is not shorter than the pulse repetition interval: the filter
//! resolves individual spectral lines of the pulse train and reads the
//! detector floor between them.
//!
//! Run with: cargo run --example spectrum_reconstruction

use nsr_sim::receiver::{
    make_sweep_plan, nsr_process, reconstruct_spectrum, validate_sweep_plan, AdcParams,
    DlvaParams,
};
use nsr_sim::waveform::{lfm_pulse_train, PulseTrainParams};

fn main() -> nsr_sim::Result<()> {
    let fs = 1.0e6;
    let dlva = DlvaParams { dynamic_range: 200.0, ..DlvaParams::default() };
    let adc = AdcParams { bits: 16, full_scale: 5.0, sample_rate: 10.0e6 };

    // Valid timing: 1 ms dwell against a 1.111 ms PRI.
    let params = PulseTrainParams::new(9.6e9, 320.0e3, 0.222e-3, 1.0 / 900.0, fs)?;
    let plan = make_sweep_plan(400.0e3, 10.0e3, 40.0e-3)?.centered_at(params.center_frequency);
    let report = validate_sweep_plan(&plan, params.pri)?;
    println!("{}", report.message);

    let signal = lfm_pulse_train(&params, 40.0e-3)?;
    let grid = nsr_process(&signal, &plan, &dlva, &adc)?;
    let estimate = reconstruct_spectrum(&grid)?;
    println!(
        "reconstructed center {:.4} GHz, -3 dB width {:.0} kHz (true chirp width 320 kHz)",
        estimate.center_frequency / 1e9,
        estimate.bandwidth_3db / 1e3
    );

    // Invalid timing: 0.1 ms dwell against a 0.05 ms PRI (dwell = 2 PRI).
    // The 10 kHz filter is narrower than the 20 kHz line spacing of the
    // pulse train, so alternate stop positions see no energy at all.
    let params_bad = PulseTrainParams::new(9.6e9, 320.0e3, 10.0e-6, 50.0e-6, fs)?;
    let plan_bad =
        make_sweep_plan(400.0e3, 10.0e3, 4.0e-3)?.with_start_frequency(9.6e9 - 205.0e3);
    let report_bad = validate_sweep_plan(&plan_bad, params_bad.pri)?;
    println!("\n{}", report_bad.message);

    let signal_bad = lfm_pulse_train(&params_bad, 4.0e-3)?;
    let grid_bad = nsr_process(&signal_bad, &plan_bad, &dlva, &adc)?;
    let row = &grid_bad.power_db[0];
    let floor = dlva.floor_db();
    let empty = row[5..35].iter().filter(|&&v| v < floor + 1.0).count();
    println!("interior stop positions reading only the detector floor: {empty} of 30");
    Ok(())
}
