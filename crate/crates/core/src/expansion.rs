//! Assembly of the coefficient asymptotics.
//!
//! The generalized binomial coefficients entering the expansion satisfy
//!
//! ```text
//! (-1)^n binom(r, n) ~ 1/(Gamma(-r) n^{r+1}) (S_0(r) + S_2(r)/n + S_4(r)/n^2 + ...)
//! ```
//!
//! with universal rational polynomials `S_{2k}` generated by the recurrence
//! that the step identity `binom(r, n+1) = (r-n)/(n+1) binom(r, n)` imposes.
//! Combined with the Schroeder data and the Fourier ratios these form the
//! polynomials `A_r` and the 1-periodic functions
//!
//! ```text
//! K_1(x) = -1/alpha + 2 Re sum_m ratio_m e^{2 pi i m x},
//! K_r(x) =           2 Re sum_m ratio_m e^{2 pi i m x} A_{r-1}(2 pi i m),
//! ```
//!
//! so that `n q^n phi_n ~ K_1(x_n) + K_2(x_n)/n + ...` at
//! `x_n = (ln q - ln n)/beta`.

use crate::conjugacy::SchroderData;
use crate::problem::{Polynomial, ProblemSpec};
use crate::spectrum::{fourier_extract, lambda_line, FourierSpectrum, SpectrumError};
use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};
use std::f64::consts::PI;

/// Dense polynomial over exact rationals, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl RatPoly {
    fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
            coeffs.pop();
        }
        Self { coeffs }
    }

    fn constant(c: BigRational) -> Self {
        Self { coeffs: vec![c] }
    }

    fn one() -> Self {
        Self::constant(BigRational::one())
    }

    fn zero() -> Self {
        Self::constant(BigRational::zero())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    fn add(&self, other: &RatPoly) -> RatPoly {
        let mut out = vec![BigRational::zero(); self.coeffs.len().max(other.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        RatPoly::from_coeffs(out)
    }

    fn mul(&self, other: &RatPoly) -> RatPoly {
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::from_coeffs(out)
    }

    fn scale(&self, factor: &BigRational) -> RatPoly {
        RatPoly::from_coeffs(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Multiply by the linear factor `c0 + c1 r`.
    fn mul_linear(&self, c0: &BigRational, c1: &BigRational) -> RatPoly {
        let mut out = vec![BigRational::zero(); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c * c0;
            out[i + 1] += c * c1;
        }
        RatPoly::from_coeffs(out)
    }

    pub fn eval_rational(&self, r: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * r + c;
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_f64().expect("rational fits in f64");
        }
        acc
    }

    pub fn to_f64_poly(&self) -> Polynomial {
        Polynomial::raw(
            self.coeffs
                .iter()
                .map(|c| c.to_f64().expect("rational fits in f64"))
                .collect(),
        )
    }
}

/// The table `S_0, S_2, ..., S_{2K}`.
#[derive(Debug, Clone)]
pub struct SPolyTable {
    pub polys: Vec<RatPoly>,
}

impl SPolyTable {
    pub fn order(&self) -> usize {
        self.polys.len() - 1
    }
}

/// `binom(c - r, j)` as an exact polynomial in `r`.
fn binom_shift_poly(c: i64, j: usize) -> RatPoly {
    let mut acc = RatPoly::one();
    for i in 0..j {
        acc = acc.mul_linear(&rat(c - i as i64), &rat(-1));
    }
    let j_fact = (1..=j as i64).product::<i64>().max(1);
    acc.scale(&rat(j_fact).recip())
}

/// Build `S_0 .. S_{2K}` from the recurrence
///
/// ```text
/// (k-1) S_{2(k-1)}(r) = sum_{j=2}^{k} S_{2(k-j)}(r)
///     [ binom(-(k-j) - r - 1, j) + (-1)^{j-1} (r + 1) ],
/// ```
///
/// all in exact rational arithmetic.
pub fn s_polynomials(order: usize) -> SPolyTable {
    // the recurrence divides by j! held in an i64
    assert!(order < 20, "S table capped at S_38");
    let mut polys = vec![RatPoly::one()];
    for k in 1..=order {
        let kk = k + 1; // recurrence index: produces S_{2(kk-1)}
        let mut total = RatPoly::zero();
        for j in 2..=kk {
            let lower = &polys[kk - j];
            let binom_part = binom_shift_poly(-((kk - j) as i64) - 1, j);
            let sign = if j % 2 == 0 { rat(-1) } else { rat(1) };
            let linear = RatPoly::from_coeffs(vec![sign.clone(), sign]);
            let bracket = binom_part.add(&linear);
            total = total.add(&lower.mul(&bracket));
        }
        polys.push(total.scale(&rat(k as i64).recip()));
    }
    SPolyTable { polys }
}

const BINOM_DIRECT_LIMIT: usize = 4096;

/// Generalized binomial coefficient `binom(r, n) = r (r-1) ... (r-n+1) / n!`
/// for complex `r`.
///
/// Small `n` uses the running product `prod (r - i)/(i + 1)`; large `n`
/// switches to log space so nothing over- or underflows.
pub fn binom_general(r: Complex64, n: usize) -> Complex64 {
    if n == 0 {
        return Complex64::one();
    }
    if n <= BINOM_DIRECT_LIMIT {
        binom_product(r, n)
    } else {
        binom_log(r, n)
    }
}

fn binom_product(r: Complex64, n: usize) -> Complex64 {
    let mut acc = Complex64::one();
    for i in 0..n {
        acc *= (r - i as f64) / (i + 1) as f64;
    }
    acc
}

fn binom_log(r: Complex64, n: usize) -> Complex64 {
    let mut sum = Complex64::zero();
    for i in 0..n {
        sum += (r - i as f64).ln();
    }
    let ln_n_fact = crate::spectrum::log_gamma(Complex64::from(n as f64 + 1.0))
        .expect("positive real argument")
        .re;
    (sum - ln_n_fact).exp()
}

/// The polynomial
///
/// ```text
/// A_r(z) = sum_{j+k=r} q^j psi_j(z/beta) binom((-beta - z)/beta, j)
///          S_{2k}((j beta + z)/beta),
/// ```
///
/// with real coefficients (`A_0 = 1`).
pub fn a_polynomial(
    r_index: usize,
    spec: &ProblemSpec,
    schroder: &SchroderData,
    s_table: &SPolyTable,
) -> Polynomial {
    assert!(
        s_table.order() >= r_index,
        "S table too short for A_{r_index}"
    );
    assert!(
        r_index == 0 || schroder.psi.len() >= r_index,
        "psi table too short for A_{r_index}"
    );
    let beta = spec.beta;
    let q = spec.fixed_point;
    let mut total = Polynomial::raw(vec![0.0]);
    for j in 0..=r_index {
        let k = r_index - j;
        let s_part = s_table.polys[k]
            .to_f64_poly()
            .compose_affine(1.0 / beta, j as f64);
        let psi_part = if j == 0 {
            Polynomial::raw(vec![1.0])
        } else {
            schroder.psi[j - 1].compose_affine(1.0 / beta, 0.0)
        };
        let mut binom_part = Polynomial::raw(vec![1.0]);
        for i in 0..j {
            binom_part = binom_part.mul(&Polynomial::raw(vec![-((1 + i) as f64), -1.0 / beta]));
        }
        let j_fact: f64 = (1..=j).map(|v| v as f64).product::<f64>().max(1.0);
        let term = s_part
            .mul(&psi_part)
            .mul(&binom_part)
            .scale(q.powi(j as i32) / j_fact);
        total = total.add(&term);
    }
    total
}

/// Everything needed to evaluate the asymptotic series.
#[derive(Debug, Clone)]
pub struct ExpansionTable {
    pub spectrum: FourierSpectrum,
    pub s_table: SPolyTable,
    pub schroder: SchroderData,
    /// `A_0, A_1, ..., A_{R-1}`; `K_r` uses `A_{r-1}`.
    pub a_polys: Vec<Polynomial>,
    pub alpha: f64,
    pub beta: f64,
    pub fixed_point: f64,
}

impl ExpansionTable {
    /// Assemble from precomputed parts, keeping `terms_r` asymptotic terms.
    pub fn from_parts(
        spec: &ProblemSpec,
        schroder: SchroderData,
        spectrum: FourierSpectrum,
        terms_r: usize,
    ) -> Self {
        assert!(terms_r >= 1);
        let s_table = s_polynomials(terms_r - 1);
        let a_polys = (0..terms_r)
            .map(|r| a_polynomial(r, spec, &schroder, &s_table))
            .collect();
        Self {
            spectrum,
            s_table,
            schroder,
            a_polys,
            alpha: spec.alpha,
            beta: spec.beta,
            fixed_point: spec.fixed_point,
        }
    }

    /// Run the whole pipeline: Schroeder data, the `Lambda` grid on the line
    /// `Im z = -y`, FFT extraction of `modes` coefficients, and the `A`
    /// polynomials for `terms_r` asymptotic terms.
    pub fn build(
        spec: &ProblemSpec,
        y: f64,
        grid_n: usize,
        modes: usize,
        terms_r: usize,
    ) -> Result<Self, SpectrumError> {
        let schroder = SchroderData::new(spec, (terms_r + 2).max(8))?;
        let grid = lambda_line(spec, y, grid_n, None)?;
        let spectrum = fourier_extract(&grid, modes, spec.beta)?;
        Ok(Self::from_parts(spec, schroder, spectrum, terms_r))
    }

    pub fn terms_available(&self) -> usize {
        self.a_polys.len()
    }
}

/// `K_r(x)` summed over the first `modes` Fourier modes.
pub fn k_eval(r_index: usize, x: f64, table: &ExpansionTable, modes: usize) -> f64 {
    assert!(r_index >= 1 && r_index <= table.a_polys.len());
    let a = &table.a_polys[r_index - 1];
    let m_top = modes.min(table.spectrum.ratios.len());
    let mut acc = 0.0;
    for m in 1..=m_top {
        let freq = 2.0 * PI * m as f64;
        let phase = Complex64::new(0.0, freq * x).exp();
        let term = table.spectrum.ratios[m - 1] * phase * a.eval_complex(Complex64::new(0.0, freq));
        acc += 2.0 * term.re;
    }
    if r_index == 1 {
        acc -= 1.0 / table.alpha;
    }
    acc
}

/// Per-term breakdown of the asymptotic estimate at one index.
#[derive(Debug, Clone)]
pub struct AsymptoticEstimate {
    pub n: usize,
    /// `terms[r-1] = K_r(x_n) / n^r`; multiplying the partial sums by
    /// `q^{-n}` estimates `phi_n` itself.
    pub terms: Vec<f64>,
}

impl AsymptoticEstimate {
    /// Partial sum in normalized form: estimate of `n q^n phi_n` using the
    /// first `r` terms.
    pub fn normalized_partial(&self, r: usize) -> f64 {
        self.n as f64 * self.terms.iter().take(r).sum::<f64>()
    }
}

/// Evaluate the first `terms_r` asymptotic terms at index `n`. The series is
/// meaningful from `n = 2` on; `n = 1` is accepted for table output.
pub fn asymptotic_estimate(n: usize, terms_r: usize, table: &ExpansionTable) -> AsymptoticEstimate {
    assert!(n >= 1);
    assert!(terms_r <= table.terms_available());
    let x_n = (table.fixed_point.ln() - (n as f64).ln()) / table.beta;
    let modes = table.spectrum.ratios.len();
    let terms = (1..=terms_r)
        .map(|r| k_eval(r, x_n, table, modes) / (n as f64).powi(r as i32))
        .collect();
    AsymptoticEstimate { n, terms }
}

/// Estimate of `n q^n phi_n` by the first `terms_r` asymptotic terms
/// (`terms_r = 0` is the empty sum).
pub fn asymptotic_coeff(n: usize, terms_r: usize, table: &ExpansionTable) -> f64 {
    if terms_r == 0 {
        return 0.0;
    }
    asymptotic_estimate(n, terms_r, table).normalized_partial(terms_r)
}
