//! Show that the angular spacing between adjacent pattern nulls scales with
//! wavelength: sweep several carrier frequencies, fit spacing against
//! wavelength, and print the ratio between the two X-band tones.
//!
//! Run with: cargo run --example null_wavelength_scaling

use nsr_sim::antenna::{null_angles, ArrayGeometry, SPEED_OF_LIGHT};

fn main() -> nsr_sim::Result<()> {
    let geometry = ArrayGeometry::line(100, 0.015)?;
    let frequencies = [9.2e9, 9.4e9, 9551.0e6, 9614.5e6, 9.8e9];

    let mut pairs = Vec::new();
    println!("freq(MHz)  wavelength(mm)  mean null spacing(deg)");
    for &f in &frequencies {
        let nulls = null_angles(&geometry, 0.0, f, 1..=6)?;
        let positive: Vec<f64> = nulls.into_iter().filter(|t| *t > 0.0).collect();
        let spacings: Vec<f64> = positive.windows(2).map(|w| w[1] - w[0]).collect();
        let mean = spacings.iter().sum::<f64>() / spacings.len() as f64;
        let lambda = SPEED_OF_LIGHT / f;
        println!("{:9.1}  {:14.3}  {:21.5}", f / 1e6, lambda * 1e3, mean.to_degrees());
        pairs.push((lambda, mean));
    }

    // Least-squares slope through the origin plus correlation.
    let sxy: f64 = pairs.iter().map(|(x, y)| x * y).sum();
    let sxx: f64 = pairs.iter().map(|(x, _)| x * x).sum();
    let slope = sxy / sxx;
    let mean_y = pairs.iter().map(|(_, y)| y).sum::<f64>() / pairs.len() as f64;
    let ss_res: f64 = pairs.iter().map(|(x, y)| (y - slope * x).powi(2)).sum();
    let ss_tot: f64 = pairs.iter().map(|(_, y)| (y - mean_y).powi(2)).sum();
    println!("\nspacing = {:.5} rad/m * wavelength, R^2 = {:.6}", slope, 1.0 - ss_res / ss_tot);

    let s_a = pairs[2].1;
    let s_b = pairs[3].1;
    println!(
        "spacing ratio 9614.5 MHz / 9551 MHz = {:.5} (wavelength ratio {:.5})",
        s_b / s_a,
        9551.0 / 9614.5
    );
    Ok(())
}
