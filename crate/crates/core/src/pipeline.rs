//! End-to-end run driver: synthesize the pass, run both receiver chains per
//! seed, export grids, video series and spectra, and write a checksummed
//! run manifest.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::receiver::{nsr_process, reconstruct_spectrum, sed_process, PowerGrid};
use crate::scenario::{OutputFormat, ScenarioConfig};
use crate::waveform::{add_awgn, apply_pass_gain, lfm_pulse_train};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestFile {
    pub name: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Written last (atomically) so partial runs are detectable by its absence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_digest: String,
    pub tool_version: String,
    pub files: Vec<ManifestFile>,
    pub wall_clock_s: f64,
}

pub const MANIFEST_NAME: &str = "manifest.json";

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("{:x}", hasher.finalize())
}

fn sha256_file(path: &Path) -> Result<String> {
    Ok(sha256_hex(&std::fs::read(path)?))
}

/// Write through a temp file in the same directory, then rename.
fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn record(files: &mut Vec<ManifestFile>, dir: &Path, name: &str) -> Result<()> {
    let path = dir.join(name);
    files.push(ManifestFile {
        name: name.to_string(),
        sha256: sha256_file(&path)?,
        bytes: std::fs::metadata(&path)?.len(),
    });
    Ok(())
}

/// Run the full synthesis -> receivers -> export pipeline described by a
/// config file. Outputs land in `out_dir`; the manifest is written last.
pub fn run_simulation(config_path: &Path, out_dir: &Path) -> Result<RunManifest> {
    let started = Instant::now();
    let config_bytes = std::fs::read(config_path)?;
    let config: ScenarioConfig =
        toml::from_str(std::str::from_utf8(&config_bytes).map_err(|e| Error::Parse(e.to_string()))?)
            .map_err(|e| Error::Parse(e.to_string()))?;
    let violations = config.violations();
    if !violations.is_empty() {
        return Err(Error::Config(violations.join("; ")));
    }
    std::fs::create_dir_all(out_dir)?;

    let params = config.pulse_train_params()?;
    let scenario = config.pass_scenario()?;
    let plan = config.sweep_plan()?;
    let nsr_dlva = config.nsr_dlva();
    let nsr_adc = config.nsr_adc();
    let sed_dlva = config.sed_dlva();
    let sed_adc = config.sed_adc();

    let clean = lfm_pulse_train(&params, scenario.pass_duration)?;
    let shaped = apply_pass_gain(&clean, &scenario)?;
    let noise_power = config.simulation_noise_power();

    let mut files = Vec::new();

    // Noiseless reference grid for truth-referenced analysis.
    let truth_grid = nsr_process(&shaped, &plan, &nsr_dlva, &nsr_adc)?;
    export_grid(&truth_grid, out_dir, "grid_truth", config.outputs.format, &mut files)?;

    for &seed in &config.seeds {
        let noisy = add_awgn(&shaped, noise_power, seed)?;
        let grid = nsr_process(&noisy, &plan, &nsr_dlva, &nsr_adc)?;
        export_grid(&grid, out_dir, &format!("grid_seed{seed}"), config.outputs.format, &mut files)?;

        let sed = sed_process(&noisy, config.sed.bpf_hz, &sed_dlva, &sed_adc)?;
        let sed_name = format!("sed_seed{seed}.csv");
        write_sed_csv(&sed, &out_dir.join(&sed_name))?;
        record(&mut files, out_dir, &sed_name)?;

        let spectrum = reconstruct_spectrum(&grid)?;
        let spec_name = format!("spectrum_seed{seed}.csv");
        spectrum.write_csv(&out_dir.join(&spec_name))?;
        record(&mut files, out_dir, &spec_name)?;

        if config.outputs.iq_dump {
            let iq_name = format!("iq_seed{seed}.iq");
            noisy.write_iq(&out_dir.join(&iq_name))?;
            record(&mut files, out_dir, &iq_name)?;
        }
    }

    let manifest = RunManifest {
        config_digest: sha256_hex(&config_bytes),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        files,
        wall_clock_s: started.elapsed().as_secs_f64(),
    };
    let text =
        serde_json::to_string_pretty(&manifest).map_err(|e| Error::Parse(e.to_string()))?;
    write_atomic(&out_dir.join(MANIFEST_NAME), text.as_bytes())?;
    Ok(manifest)
}

fn export_grid(
    grid: &PowerGrid,
    dir: &Path,
    stem: &str,
    format: OutputFormat,
    files: &mut Vec<ManifestFile>,
) -> Result<()> {
    let name = match format {
        OutputFormat::Csv => {
            let name = format!("{stem}.csv");
            grid.write_csv(&dir.join(&name))?;
            name
        }
        OutputFormat::Json => {
            let name = format!("{stem}.json");
            grid.write_json(&dir.join(&name))?;
            name
        }
    };
    record(files, dir, &name)
}

fn write_sed_csv(series: &[(f64, f64)], path: &Path) -> Result<()> {
    use std::io::Write;
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "time_s,power_db")?;
    for (t, p) in series {
        writeln!(w, "{t},{p}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sed_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.is_empty() {
            continue;
        }
        let mut cells = line.split(',');
        let t: f64 = cells
            .next()
            .and_then(|c| c.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad sed csv line {i}")))?;
        let p: f64 = cells
            .next()
            .and_then(|c| c.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad sed csv line {i}")))?;
        out.push((t, p));
    }
    Ok(out)
}

pub fn load_manifest(path: &Path) -> Result<RunManifest> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
}

/// Re-hash every file the manifest lists; returns the names that are missing
/// or whose checksum no longer matches.
pub fn verify_manifest(manifest: &RunManifest, dir: &Path) -> Vec<String> {
    let mut bad = Vec::new();
    for f in &manifest.files {
        let path: PathBuf = dir.join(&f.name);
        match sha256_file(&path) {
            Ok(digest) if digest == f.sha256 => {}
            _ => bad.push(f.name.clone()),
        }
    }
    bad
}

/// Load a power grid by extension (.csv or .json).
pub fn load_grid(path: &Path) -> Result<PowerGrid> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => PowerGrid::read_json(path),
        _ => PowerGrid::read_csv(path),
    }
}
