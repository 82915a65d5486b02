//! Scenario-driven command line: validate a config, run the simulation
//! pipeline, analyze a power grid, or verify a run manifest.
//!
//! Exit codes: 0 success, 1 validation failure, 2 runtime failure.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use nsr_sim::analysis::{
    compare_receivers, extract_pattern, find_nulls, time_to_angle, write_json,
    DEFAULT_NULL_PROMINENCE_DB,
};
use nsr_sim::pipeline::{load_grid, load_manifest, read_sed_csv, run_simulation, verify_manifest};
use nsr_sim::scenario::ScenarioConfig;

#[derive(Parser)]
#[command(name = "nsr", version, about = "Swept-receiver SAR pass simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a scenario config against every invariant, including the
    /// dwell constraint T_stop < PRI.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run synthesis, both receiver chains and exports for each seed.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; defaults to the config's outputs.directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the config's seed list, comma separated.
        #[arg(long, value_delimiter = ',')]
        seed: Vec<u64>,
        /// Also dump the noisy baseband I/Q per seed.
        #[arg(long)]
        iq_dump: bool,
    },
    /// Extract pattern cuts and null reports from a saved power grid.
    Analyze {
        /// Grid file (.csv or .json) from a simulate run.
        #[arg(long)]
        grid: PathBuf,
        /// Cut frequencies in MHz, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        freq: Vec<f64>,
        #[arg(long, default_value = "analysis_out")]
        out: PathBuf,
        /// Null-detection prominence in dB.
        #[arg(long, default_value_t = DEFAULT_NULL_PROMINENCE_DB)]
        prominence: f64,
        /// Ground beam speed (m/s) for time-to-angle mapping.
        #[arg(long)]
        speed: Option<f64>,
        /// Satellite-receiver range (m) for time-to-angle mapping.
        #[arg(long)]
        range: Option<f64>,
        /// Boresight crossing time (s) for time-to-angle mapping.
        #[arg(long)]
        crossing: Option<f64>,
        /// Wideband video series CSV to compare against the first cut.
        #[arg(long)]
        sed: Option<PathBuf>,
        /// Truth cut grid (noiseless run) for the comparison.
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Averaging window (s) for the comparison; defaults to the grid's
        /// row spacing divided by the column count.
        #[arg(long)]
        window: Option<f64>,
    },
    /// Verify a run manifest: every listed file exists and checksums match.
    Report {
        #[arg(long)]
        manifest: PathBuf,
    },
}

#[derive(serde::Serialize)]
struct NullSummary {
    frequency_hz: f64,
    report: nsr_sim::analysis::NullReport,
}

#[derive(serde::Serialize)]
struct SpacingRatio {
    frequency_a_hz: f64,
    frequency_b_hz: f64,
    /// mean spacing at b divided by mean spacing at a
    spacing_ratio: f64,
    wavelength_ratio: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> nsr_sim::Result<ExitCode> {
    match cli.command {
        Command::Validate { config } => {
            let cfg = ScenarioConfig::load(&config)?;
            let violations = cfg.violations();
            if violations.is_empty() {
                println!("config ok: {}", config.display());
                Ok(ExitCode::SUCCESS)
            } else {
                for v in &violations {
                    eprintln!("violation: {v}");
                }
                Ok(ExitCode::from(1))
            }
        }
        Command::Simulate { config, out, seed, iq_dump } => {
            let mut cfg = ScenarioConfig::load(&config)?;
            let violations = cfg.violations();
            if !violations.is_empty() {
                for v in &violations {
                    eprintln!("violation: {v}");
                }
                return Ok(ExitCode::from(1));
            }
            if !seed.is_empty() {
                cfg.seeds = seed;
            }
            if iq_dump {
                cfg.outputs.iq_dump = true;
            }
            let out_dir = out.unwrap_or_else(|| PathBuf::from(&cfg.outputs.directory));
            // Re-serialize overrides through a sibling temp config so the
            // manifest digest reflects what actually ran.
            let effective = toml::to_string(&cfg).map_err(|e| nsr_sim::Error::Parse(e.to_string()))?;
            std::fs::create_dir_all(&out_dir)?;
            let effective_path = out_dir.join("effective_config.toml");
            std::fs::write(&effective_path, effective)?;
            let manifest = run_simulation(&effective_path, &out_dir)?;
            println!(
                "wrote {} files to {} in {:.2} s",
                manifest.files.len(),
                out_dir.display(),
                manifest.wall_clock_s
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze {
            grid,
            freq,
            out,
            prominence,
            speed,
            range,
            crossing,
            sed,
            truth,
            window,
        } => {
            let grid_data = load_grid(&grid)?;
            std::fs::create_dir_all(&out)?;
            let mut cuts = Vec::new();
            let mut summaries = Vec::new();
            for f_mhz in &freq {
                let f_hz = f_mhz * 1.0e6;
                let mut cut = extract_pattern(&grid_data, f_hz)?;
                if let (Some(v), Some(r)) = (speed, range) {
                    let t_mid = crossing.unwrap_or_else(|| {
                        (grid_data.times.first().unwrap() + grid_data.times.last().unwrap()) / 2.0
                    });
                    cut = time_to_angle(&cut, v, r, t_mid)?;
                }
                let stem = format!("cut_{f_mhz}MHz");
                cut.write_csv(&out.join(format!("{stem}.csv")))?;
                cut.write_plot_csv(&out.join(format!("{stem}_plot.csv")))?;
                let report = find_nulls(&cut, prominence)?;
                summaries.push(NullSummary { frequency_hz: cut.frequency, report });
                cuts.push(cut);
            }

            let mut ratios = Vec::new();
            for pair in summaries.windows(2) {
                if let (Some(a), Some(b)) =
                    (pair[0].report.mean_spacing, pair[1].report.mean_spacing)
                {
                    ratios.push(SpacingRatio {
                        frequency_a_hz: pair[0].frequency_hz,
                        frequency_b_hz: pair[1].frequency_hz,
                        spacing_ratio: b / a,
                        wavelength_ratio: pair[0].frequency_hz / pair[1].frequency_hz,
                    });
                }
            }
            write_json(&summaries, &out.join("null_report.json"))?;
            if !ratios.is_empty() {
                write_json(&ratios, &out.join("spacing_ratios.json"))?;
                for r in &ratios {
                    println!(
                        "spacing ratio {:.1} MHz -> {:.1} MHz: {:.5} (wavelength ratio {:.5})",
                        r.frequency_a_hz / 1e6,
                        r.frequency_b_hz / 1e6,
                        r.spacing_ratio,
                        r.wavelength_ratio
                    );
                }
            }

            if let (Some(sed_path), Some(truth_path)) = (sed, truth) {
                let sed_series = read_sed_csv(&sed_path)?;
                let truth_grid = load_grid(&truth_path)?;
                let truth_cut = extract_pattern(&truth_grid, cuts[0].frequency)?;
                let w = window.unwrap_or_else(|| {
                    let row_spacing = if grid_data.times.len() > 1 {
                        grid_data.times[1] - grid_data.times[0]
                    } else {
                        1.0
                    };
                    row_spacing / grid_data.frequencies.len() as f64
                });
                let report = compare_receivers(&cuts[0], &sed_series, &truth_cut, w)?;
                write_json(&report, &out.join("comparison.json"))?;
                println!(
                    "comparison at {:.1} MHz: nsr r={:.4}, sed r={:.4}, gain={:?} dB",
                    cuts[0].frequency / 1e6,
                    report.nsr_correlation,
                    report.sed_correlation,
                    report.measured_snr_gain_db
                );
            }
            println!("analysis written to {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { manifest } => {
            let dir = manifest
                .parent()
                .map(|p| p.to_path_buf())
                .unwrap_or_else(|| PathBuf::from("."));
            let loaded = load_manifest(&manifest)?;
            println!(
                "run manifest {} (tool {}), {} files, {:.2} s wall clock",
                manifest.display(),
                loaded.tool_version,
                loaded.files.len(),
                loaded.wall_clock_s
            );
            let bad = verify_manifest(&loaded, &dir);
            for f in &loaded.files {
                let status = if bad.contains(&f.name) { "MISMATCH" } else { "ok" };
                println!("  {:<28} {:>10} bytes  {}", f.name, f.bytes, status);
            }
            if bad.is_empty() {
                println!("all checksums verified");
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("{} file(s) failed verification", bad.len());
                Ok(ExitCode::from(2))
            }
        }
    }
}
