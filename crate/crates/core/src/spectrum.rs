//! Fourier spectrum of the periodic invariant.
//!
//! `Lambda~(z) = Phi(z) - ln T(z)/alpha` is invariant under `Q`, so
//! `Lambda(z) = Lambda~(Pi(Q'(q)^z))` is 1-periodic. Sampling it on the line
//! `Im z = -y` and applying an FFT yields the normalized coefficients
//! `lh_m = e^{2 pi m y} lambda_m`, which stay O(1) while the raw `lambda_m`
//! decay exponentially. The quantities entering the asymptotics are the
//! stabilized ratios
//!
//! ```text
//! lambda_m / Gamma(-2 pi i m / beta)
//!     = exp( ln lh_m - ln Gamma(-2 pi i m / beta) - 2 pi m y ),
//! ```
//!
//! a quotient of two exponentially small numbers evaluated entirely in log
//! space.

use crate::boundary::{ln_t, BoundaryError};
use crate::conjugacy::{poincare_eval, ConjugacyError};
use crate::problem::ProblemSpec;
use num::complex::Complex64;
use num::Zero;
use rustfft::FftPlanner;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpectrumError {
    #[error("Phi series did not converge within 500 iterations")]
    PhiNoConvergence,
    #[error("grid on the line Im z = -{0} has non-finite values (shift too large)")]
    BadShift(f64),
    #[error("log-gamma pole at nonpositive integer {0}")]
    PoleOfGamma(f64),
    #[error("Fourier coefficient {0} underflowed to zero")]
    ZeroCoefficient(usize),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error(transparent)]
    Conjugacy(#[from] ConjugacyError),
}

/// `Phi(z) = P(z) + P(Q(z)) + P(Q_2(z)) + ...` by direct orbit summation.
///
/// Stops once `|P(Q_N(z))| < 1e-15` three times in a row.
pub fn phi_eval(spec: &ProblemSpec, z: Complex64) -> Result<Complex64, SpectrumError> {
    let mut total = Complex64::zero();
    let mut w = z;
    let mut small_run = 0;
    for _ in 0..500 {
        let term = spec.p.eval_complex(w);
        total += term;
        if term.norm() < 1e-15 {
            small_run += 1;
            if small_run == 3 {
                return Ok(total);
            }
        } else {
            small_run = 0;
        }
        w = spec.q.eval_complex(w);
        if !w.is_finite() {
            return Err(SpectrumError::PhiNoConvergence);
        }
    }
    Err(SpectrumError::PhiNoConvergence)
}

/// One period of `Lambda` sampled on the line `Im z = -y`.
#[derive(Debug, Clone)]
pub struct GridSample {
    /// Line shift; the sampled points are `x_j - i y`.
    pub y: f64,
    /// The grid starts at `x = -n_offset` (an integer, so the FFT needs no
    /// phase correction).
    pub n_offset: u32,
    /// `Lambda(-n + j/N - i y)`, `j = 0..N`.
    pub values: Vec<Complex64>,
}

impl GridSample {
    pub fn x(&self, j: usize) -> f64 {
        -(self.n_offset as f64) + j as f64 / self.values.len() as f64
    }
}

/// `Lambda(z)` at a single point `z = x - i y`.
pub fn lambda_value(spec: &ProblemSpec, x: f64, y: f64) -> Result<Complex64, SpectrumError> {
    let w = (spec.beta * Complex64::new(x, -y)).exp();
    let p = poincare_eval(spec, w)?;
    let phi = phi_eval(spec, p)?;
    let lt = ln_t(spec, p)?;
    Ok(phi - lt.value / spec.alpha)
}

/// Smallest `n >= 1` for which the whole grid period `[-n, -n+1)` maps into
/// the backward-convergence disk of radius `r0/2` around `q`.
fn choose_offset(spec: &ProblemSpec, y: f64, grid_n: usize) -> Result<u32, SpectrumError> {
    let target = 0.5 * spec.backward_radius();
    for n in 1..=64u32 {
        let x_worst = -(n as f64) + 1.0 - 1.0 / grid_n as f64;
        let w = (spec.beta * Complex64::new(x_worst, -y)).exp();
        let p = poincare_eval(spec, w).map_err(|_| SpectrumError::BadShift(y))?;
        if (p - Complex64::from(spec.fixed_point)).norm() < target {
            return Ok(n);
        }
    }
    Err(SpectrumError::BadShift(y))
}

/// Sample `Lambda` over one period on the line `Im z = -y`.
///
/// `grid_n` must be a power of two. When `n_offset` is `None` the smallest
/// workable period is chosen. Any evaluation failure or non-finite value is
/// reported as [`SpectrumError::BadShift`]: the line left the analyticity
/// strip.
pub fn lambda_line(
    spec: &ProblemSpec,
    y: f64,
    grid_n: usize,
    n_offset: Option<u32>,
) -> Result<GridSample, SpectrumError> {
    assert!(grid_n.is_power_of_two(), "grid size must be a power of two");
    let n = match n_offset {
        Some(n) => n,
        None => choose_offset(spec, y, grid_n)?,
    };
    let mut values = Vec::with_capacity(grid_n);
    for j in 0..grid_n {
        let x = -(n as f64) + j as f64 / grid_n as f64;
        let v = lambda_value(spec, x, y).map_err(|e| match e {
            SpectrumError::Boundary(BoundaryError::AtSingularity) => SpectrumError::BadShift(y),
            SpectrumError::PhiNoConvergence => SpectrumError::BadShift(y),
            SpectrumError::Conjugacy(ConjugacyError::NoConvergence)
            | SpectrumError::Conjugacy(ConjugacyError::NewtonDiverged(_)) => {
                SpectrumError::BadShift(y)
            }
            other => other,
        })?;
        if !v.is_finite() {
            return Err(SpectrumError::BadShift(y));
        }
        values.push(v);
    }
    Ok(GridSample {
        y,
        n_offset: n,
        values,
    })
}

/// Normalized Fourier data of `Lambda` on a shifted line.
#[derive(Debug, Clone)]
pub struct FourierSpectrum {
    /// Line shift used for the normalization `lh_m = e^{2 pi m y} lambda_m`.
    pub y: f64,
    /// Mean of `Lambda` (real for real-analytic `Lambda`).
    pub lambda0: f64,
    /// `lh_m` for `m = 1..=modes`.
    pub lambda_hat: Vec<Complex64>,
    /// `lambda_m / Gamma(-2 pi i m / beta)` for `m = 1..=modes`.
    pub ratios: Vec<Complex64>,
    /// Grid size the coefficients were extracted from.
    pub grid_size: usize,
}

impl FourierSpectrum {
    /// Crude decay check used by the shift scan: the last quarter of the
    /// retained modes must be well below the peak.
    pub fn decays(&self) -> bool {
        let peak = self
            .lambda_hat
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
        let tail_len = (self.lambda_hat.len() / 4)
            .max(2)
            .min(self.lambda_hat.len());
        let tail = self.lambda_hat[self.lambda_hat.len() - tail_len..]
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
        peak > 0.0 && tail < 0.05 * peak
    }
}

/// Extract `lh_0..lh_modes` from a grid by FFT and attach the stabilized
/// Gamma-ratios.
///
/// The grid starts at an integer `x`, so bin `m` of the forward DFT divided
/// by `N` is exactly `lh_m` (negative-frequency aliases are suppressed by
/// `e^{-2 pi m y}`).
pub fn fourier_extract(
    grid: &GridSample,
    modes: usize,
    beta: f64,
) -> Result<FourierSpectrum, SpectrumError> {
    let n = grid.values.len();
    assert!(modes < n / 2, "retained modes must be far below Nyquist");
    let mut buf = grid.values.clone();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    let lambda0 = buf[0].re * scale;
    let lambda_hat: Vec<Complex64> = (1..=modes).map(|m| buf[m] * scale).collect();
    // an exactly vanishing coefficient has a vanishing ratio; the
    // ZeroCoefficient error is for direct gamma_ratio calls only
    let ratios = lambda_hat
        .iter()
        .enumerate()
        .map(|(i, lh)| {
            if lh.norm() == 0.0 {
                Ok(Complex64::zero())
            } else {
                gamma_ratio(i + 1, *lh, grid.y, beta)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FourierSpectrum {
        y: grid.y,
        lambda0,
        lambda_hat,
        ratios,
        grid_size: n,
    })
}

// Stirling series coefficients B_{2n} / (2n (2n-1)).
const STIRLING: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
];

fn ln_sin_pi(z: Complex64) -> Complex64 {
    // sin(pi z) = (e^{i pi z} - e^{-i pi z}) / (2 i), factoring out the
    // dominant exponential so nothing overflows for large |Im z|
    let ipz = Complex64::i() * PI * z;
    let ln_2i = Complex64::new(2.0f64.ln(), PI / 2.0);
    if z.im <= 0.0 {
        ipz + (Complex64::from(1.0) - (-2.0 * ipz).exp()).ln() - ln_2i
    } else {
        -ipz + (Complex64::from(1.0) - (2.0 * ipz).exp()).ln() - ln_2i + Complex64::new(0.0, PI)
    }
}

/// Principal-branch complex log-gamma.
///
/// Arguments with `Re z >= 0.5` go through the shifted Stirling series; the
/// rest through the reflection formula (whose imaginary part is then only
/// fixed modulo 2 pi, which every consumer exponentiates away).
pub fn log_gamma(z: Complex64) -> Result<Complex64, SpectrumError> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor() {
        return Err(SpectrumError::PoleOfGamma(z.re));
    }
    if z.re < 0.5 {
        // Gamma(z) Gamma(1-z) = pi / sin(pi z)
        let refl = log_gamma(Complex64::from(1.0) - z)?;
        return Ok(Complex64::from(PI.ln()) - ln_sin_pi(z) - refl);
    }
    let mut shift = Complex64::zero();
    let mut w = z;
    while w.norm() < 16.0 {
        shift += w.ln();
        w += 1.0;
    }
    let mut series = Complex64::zero();
    let w2 = w * w;
    let mut pow = w;
    for c in STIRLING {
        series += c / pow;
        pow *= w2;
    }
    let stirling = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series;
    Ok(stirling - shift)
}

/// Stabilized `lambda_m / Gamma(-2 pi i m / beta)` from the normalized
/// coefficient `lh_m = e^{2 pi m y} lambda_m`.
pub fn gamma_ratio(
    m: usize,
    lambda_hat: Complex64,
    y: f64,
    beta: f64,
) -> Result<Complex64, SpectrumError> {
    if lambda_hat.norm() == 0.0 {
        return Err(SpectrumError::ZeroCoefficient(m));
    }
    let arg = Complex64::new(0.0, -2.0 * PI * m as f64 / beta);
    let lg = log_gamma(arg)?;
    Ok((lambda_hat.ln() - lg - 2.0 * PI * m as f64 * y).exp())
}

/// Try the candidate shifts and keep the largest one that produces a finite
/// grid with a stable, decaying spectrum.
///
/// Stability means the coefficients `m <= 5` agree to 1e-6 relative between
/// grids of size `grid_n/2` and `grid_n`.
pub fn scan_shift(
    spec: &ProblemSpec,
    candidates: &[f64],
    grid_n: usize,
    modes: usize,
) -> Result<(f64, FourierSpectrum), SpectrumError> {
    let mut best: Option<(f64, FourierSpectrum)> = None;
    for &y in candidates {
        let fine = match lambda_line(spec, y, grid_n, None) {
            Ok(g) => g,
            Err(_) => continue,
        };
        let coarse = match lambda_line(spec, y, grid_n / 2, None) {
            Ok(g) => g,
            Err(_) => continue,
        };
        let sp_fine = match fourier_extract(&fine, modes, spec.beta) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let sp_coarse = match fourier_extract(&coarse, modes, spec.beta) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let stable = sp_fine
            .lambda_hat
            .iter()
            .zip(&sp_coarse.lambda_hat)
            .take(5)
            .all(|(a, b)| (a - b).norm() <= 1e-6 * a.norm().max(1e-30));
        if stable && sp_fine.decays() {
            match &best {
                Some((by, _)) if *by >= y => {}
                _ => best = Some((y, sp_fine)),
            }
        }
    }
    best.ok_or(SpectrumError::BadShift(0.0))
}
