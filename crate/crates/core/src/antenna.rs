//! Phased-array pattern evaluation: summation-form array factor, the
//! closed-form normalized cut, null-angle prediction, and the full beam
//! model with an error matrix.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Floor applied when converting an exact pattern null to decibels, so nulls
/// stay plottable.
pub const MAGNITUDE_DB_FLOOR: f64 = -200.0;

/// Rectangular array layout: `m_count` elements along x at `spacing_x`
/// meters, `n_count` along y at `spacing_y`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    pub m_count: usize,
    pub n_count: usize,
    pub spacing_x: f64,
    pub spacing_y: f64,
}

impl ArrayGeometry {
    pub fn new(m_count: usize, n_count: usize, spacing_x: f64, spacing_y: f64) -> Result<Self> {
        if m_count < 1 || n_count < 1 {
            return Err(Error::invalid("element counts must be at least 1"));
        }
        if !(spacing_x > 0.0) || !(spacing_y > 0.0) {
            return Err(Error::invalid("element spacings must be positive"));
        }
        Ok(Self { m_count, n_count, spacing_x, spacing_y })
    }

    /// Uniform linear array along x. The y spacing is a placeholder (one row).
    pub fn line(m_count: usize, spacing_x: f64) -> Result<Self> {
        Self::new(m_count, 1, spacing_x, spacing_x)
    }
}

/// Per-element excitation: linear phase gradients plus optional amplitude and
/// error matrices. A missing matrix means all ones.
#[derive(Debug, Clone, Default)]
pub struct ExcitationPlan {
    pub alpha_phase: f64,
    pub beta_phase: f64,
    pub amplitudes: Option<Vec<Vec<Complex64>>>,
    pub error_matrix: Option<Vec<Vec<Complex64>>>,
}

impl ExcitationPlan {
    pub fn uniform(alpha_phase: f64, beta_phase: f64) -> Self {
        Self { alpha_phase, beta_phase, amplitudes: None, error_matrix: None }
    }

    pub fn with_amplitudes(mut self, amplitudes: Vec<Vec<Complex64>>) -> Self {
        self.amplitudes = Some(amplitudes);
        self
    }

    pub fn with_error_matrix(mut self, error_matrix: Vec<Vec<Complex64>>) -> Self {
        self.error_matrix = Some(error_matrix);
        self
    }

    fn check_dims(&self, geom: &ArrayGeometry) -> Result<()> {
        for (name, mat) in [("amplitudes", &self.amplitudes), ("error_matrix", &self.error_matrix)]
        {
            if let Some(mat) = mat {
                let rows_ok = mat.len() == geom.m_count;
                let cols_ok = mat.iter().all(|row| row.len() == geom.n_count);
                if !rows_ok || !cols_ok {
                    return Err(Error::invalid(format!(
                        "{name} matrix must be {}x{}",
                        geom.m_count, geom.n_count
                    )));
                }
            }
        }
        Ok(())
    }

    fn amplitude(&self, m: usize, n: usize) -> Complex64 {
        match &self.amplitudes {
            Some(mat) => mat[m][n],
            None => Complex64::new(1.0, 0.0),
        }
    }

    fn error(&self, m: usize, n: usize) -> Complex64 {
        match &self.error_matrix {
            Some(mat) => mat[m][n],
            None => Complex64::new(1.0, 0.0),
        }
    }
}

/// Per-element radiation characteristic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElementFactor {
    Isotropic,
    /// cos(theta)^exponent, zero beyond 90 degrees off boresight.
    CosinePower { exponent: f64 },
}

impl ElementFactor {
    pub fn cosine_power(exponent: f64) -> Result<Self> {
        if !(exponent >= 0.0) {
            return Err(Error::invalid("cosine power exponent must be >= 0"));
        }
        Ok(ElementFactor::CosinePower { exponent })
    }

    pub fn eval(&self, theta: f64) -> f64 {
        match *self {
            ElementFactor::Isotropic => 1.0,
            ElementFactor::CosinePower { exponent } => {
                if theta.abs() > FRAC_PI_2 {
                    0.0
                } else {
                    theta.cos().powf(exponent)
                }
            }
        }
    }
}

/// One point of a pattern cut.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternSample {
    pub angle: f64,
    pub magnitude: f64,
    pub magnitude_db: f64,
}

impl PatternSample {
    pub fn from_magnitude(angle: f64, magnitude: f64) -> Self {
        Self { angle, magnitude, magnitude_db: magnitude_db(magnitude) }
    }
}

/// 20*log10 with the configured floor for zero magnitude.
pub fn magnitude_db(magnitude: f64) -> f64 {
    if magnitude <= 0.0 {
        MAGNITUDE_DB_FLOOR
    } else {
        (20.0 * magnitude.log10()).max(MAGNITUDE_DB_FLOOR)
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("non-finite input"));
    }
    Ok(())
}

/// Double-sum array factor. Element (m, n) contributes
/// `amp(m,n) * exp(j (m*psi_x + n*psi_y))` with
/// `psi_x = k0*a*sin(theta)*cos(phi) + alpha` and
/// `psi_y = k0*b*sin(theta)*sin(phi) + beta`.
pub fn array_factor(
    geom: &ArrayGeometry,
    exc: &ExcitationPlan,
    frequency: f64,
    theta: f64,
    phi: f64,
) -> Result<Complex64> {
    check_finite(&[frequency, theta, phi, exc.alpha_phase, exc.beta_phase])?;
    if !(frequency > 0.0) {
        return Err(Error::invalid("frequency must be positive"));
    }
    exc.check_dims(geom)?;

    let k0 = 2.0 * PI * frequency / SPEED_OF_LIGHT;
    let psi_x = k0 * geom.spacing_x * theta.sin() * phi.cos() + exc.alpha_phase;
    let psi_y = k0 * geom.spacing_y * theta.sin() * phi.sin() + exc.beta_phase;

    let mut sum = Complex64::new(0.0, 0.0);
    for m in 0..geom.m_count {
        let px = Complex64::from_polar(1.0, m as f64 * psi_x);
        for n in 0..geom.n_count {
            let py = Complex64::from_polar(1.0, n as f64 * psi_y);
            sum += exc.amplitude(m, n) * px * py;
        }
    }
    Ok(sum)
}

/// Closed-form normalized cut at phi = 0 for a uniform line array:
/// `|sin(M*psi/2) / (M*sin(psi/2))|` with `psi = k0*a*sin(theta) + alpha`.
/// The removable singularity at psi = 0 (mod 2*pi) evaluates to 1.
pub fn normalized_pattern(
    geom: &ArrayGeometry,
    alpha_phase: f64,
    frequency: f64,
    theta: f64,
) -> Result<f64> {
    check_finite(&[alpha_phase, frequency, theta])?;
    if !(frequency > 0.0) {
        return Err(Error::invalid("frequency must be positive"));
    }
    let m = geom.m_count as f64;
    let k0 = 2.0 * PI * frequency / SPEED_OF_LIGHT;
    let psi = k0 * geom.spacing_x * theta.sin() + alpha_phase;
    let half = psi / 2.0;
    if half.sin().abs() < 1e-12 {
        return Ok(1.0);
    }
    Ok(((m * half).sin() / (m * half.sin())).abs().min(1.0))
}

/// Predicted null angles `theta_k = arcsin(lambda*(k - alpha')/(M*a))` with
/// `alpha' = M*alpha/(2*pi)`. Values of k that land on a main-lobe or grating
/// peak (k a multiple of M) are excluded, as is any k whose arcsin argument
/// leaves [-1, 1].
pub fn null_angles(
    geom: &ArrayGeometry,
    alpha_phase: f64,
    frequency: f64,
    k_range: std::ops::RangeInclusive<i64>,
) -> Result<Vec<f64>> {
    check_finite(&[alpha_phase, frequency])?;
    if !(frequency > 0.0) {
        return Err(Error::invalid("frequency must be positive"));
    }
    let m = geom.m_count as f64;
    let lambda = SPEED_OF_LIGHT / frequency;
    let alpha_prime = m * alpha_phase / (2.0 * PI);

    let mut out = Vec::new();
    for k in k_range {
        if k.rem_euclid(geom.m_count as i64) == 0 {
            continue; // peak, not a null: numerator and denominator both vanish
        }
        let s = lambda * (k as f64 - alpha_prime) / (m * geom.spacing_x);
        if s.abs() <= 1.0 {
            out.push(s.asin());
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}

/// `|EF(theta)| * |AF(theta, phi)|`, optionally normalized by the boresight
/// (theta = 0) value.
pub fn combined_pattern(
    ef: &ElementFactor,
    geom: &ArrayGeometry,
    exc: &ExcitationPlan,
    frequency: f64,
    theta: f64,
    phi: f64,
    normalize: bool,
) -> Result<f64> {
    let value = ef.eval(theta) * array_factor(geom, exc, frequency, theta, phi)?.norm();
    if !normalize {
        return Ok(value);
    }
    let boresight = ef.eval(0.0) * array_factor(geom, exc, frequency, 0.0, phi)?.norm();
    if boresight <= 0.0 {
        return Err(Error::invalid("boresight value is zero, cannot normalize"));
    }
    Ok(value / boresight)
}

/// Full SAR beam model over elevation/azimuth with per-element coefficient
/// `C * amp(m,n) * err(m,n)` and centered per-element phases
/// `(n - (N-1)/2)` and `(m - (M-1)/2)`. The excitation phase gradients are
/// applied per element, so with a unit error matrix the phi = 0 cut agrees
/// with [`combined_pattern`] in magnitude.
pub fn sar_beam_pattern(
    geom: &ArrayGeometry,
    exc: &ExcitationPlan,
    ef: &ElementFactor,
    frequency: f64,
    epsilon: f64,
    azimuth: f64,
) -> Result<Complex64> {
    check_finite(&[frequency, epsilon, azimuth, exc.alpha_phase, exc.beta_phase])?;
    if !(frequency > 0.0) {
        return Err(Error::invalid("frequency must be positive"));
    }
    exc.check_dims(geom)?;

    let k0 = 2.0 * PI * frequency / SPEED_OF_LIGHT;
    // Angle off the array normal, for the element factor.
    let off_boresight = (epsilon.cos() * azimuth.cos()).clamp(-1.0, 1.0).acos();
    let c_elem = ef.eval(off_boresight);

    let phase_y = k0 * epsilon.sin() * azimuth.cos() * geom.spacing_y;
    let phase_x = k0 * epsilon.cos() * azimuth.sin() * geom.spacing_x;
    let m_center = (geom.m_count as f64 - 1.0) / 2.0;
    let n_center = (geom.n_count as f64 - 1.0) / 2.0;

    let mut sum = Complex64::new(0.0, 0.0);
    for m in 0..geom.m_count {
        let xm = m as f64 - m_center;
        for n in 0..geom.n_count {
            let yn = n as f64 - n_center;
            let steer = m as f64 * exc.alpha_phase + n as f64 * exc.beta_phase;
            let phase = phase_x * xm + phase_y * yn + steer;
            sum += c_elem
                * exc.amplitude(m, n)
                * exc.error(m, n)
                * Complex64::from_polar(1.0, phase);
        }
    }
    Ok(sum)
}
