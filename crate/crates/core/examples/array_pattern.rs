//! Evaluate the uniform line-array pattern at two X-band frequencies and
//! print the first few null angles for each.
//!
//! Run with: cargo run --example array_pattern

use nsr_sim::antenna::{magnitude_db, normalized_pattern, null_angles, ArrayGeometry};

fn main() -> nsr_sim::Result<()> {
    let geometry = ArrayGeometry::line(100, 0.015)?;
    let frequencies = [9551.0e6, 9614.5e6];

    for &f in &frequencies {
        println!("frequency {:.1} MHz", f / 1e6);
        let nulls = null_angles(&geometry, 0.0, f, 1..=4)?;
        for (k, theta) in nulls.iter().filter(|t| **t > 0.0).enumerate() {
            println!("  null {}: {:.4} deg", k + 1, theta.to_degrees());
        }

        // A short sweep through the main lobe and first sidelobe.
        println!("  angle(deg)  level(dB)");
        for i in 0..=12 {
            let theta = (i as f64 * 0.15f64).to_radians();
            let level = normalized_pattern(&geometry, 0.0, f, theta)?;
            println!("  {:9.2}  {:8.2}", theta.to_degrees(), magnitude_db(level));
        }
    }
    Ok(())
}
