//! Shared oracles for the integration suites. These deliberately re-derive
//! reference values through routes independent of the code they check.

use funeq::dd::Dd;
use funeq::{Polynomial, ProblemSpec};
use num::complex::Complex64;

pub fn spec_23() -> ProblemSpec {
    ProblemSpec::new(
        Polynomial::from_coeffs(&[0.0, 1.0]),
        Polynomial::from_coeffs(&[0.0, 0.0, 1.0, 1.0]),
        (0.1, 0.9),
    )
    .unwrap()
}

pub fn spec_square() -> ProblemSpec {
    ProblemSpec::new(
        Polynomial::from_coeffs(&[0.0, 1.0]),
        Polynomial::from_coeffs(&[0.0, 0.0, 1.0]),
        (0.5, 1.5),
    )
    .unwrap()
}

/// Complex number with double-double components.
#[derive(Debug, Clone, Copy)]
pub struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

impl DdComplex {
    pub fn one() -> Self {
        Self {
            re: Dd::from_f64(1.0),
            im: Dd::ZERO,
        }
    }

    pub fn mul_complex(self, c: Complex64) -> Self {
        Self {
            re: self.re.mul_f64(c.re) + (-self.im.mul_f64(c.im)),
            im: self.re.mul_f64(c.im) + self.im.mul_f64(c.re),
        }
    }

    pub fn div_f64(self, x: f64) -> Self {
        Self {
            re: self.re.div_f64(x),
            im: self.im.div_f64(x),
        }
    }

    pub fn value(self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// `binom(r, n)` as the literal falling-factorial product, carried in
/// double-double precision (relative error ~1e-30, far below anything the
/// asymptotic checks need).
pub fn binom_dd(r: Complex64, n: usize) -> Complex64 {
    let mut acc = DdComplex::one();
    for i in 0..n {
        acc = acc.mul_complex(r - i as f64).div_f64((i + 1) as f64);
    }
    acc.value()
}

/// Coefficients `psi_m(r)` for integer `r` read directly off the truncated
/// series power `Psi(z)^r = (d_1 u + d_2 u^2 + ...)^r`, `u = q - z`, with
/// `d_k` taken from the Schroeder derivative table.
pub fn psi_oracle(derivs: &[f64], r: usize, m_top: usize) -> Vec<f64> {
    let order = r + m_top;
    let mut d = vec![0.0; order + 1];
    d[1] = 1.0;
    let mut fact = 1.0;
    for k in 2..=order {
        fact *= k as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        d[k] = sign * derivs[k - 2] / fact;
    }
    let mut pow = vec![0.0; order + 1];
    pow[0] = 1.0;
    for _ in 0..r {
        let mut next = vec![0.0; order + 1];
        for i in 0..=order {
            if pow[i] == 0.0 {
                continue;
            }
            for (j, dj) in d.iter().enumerate().take(order - i + 1) {
                next[i + j] += pow[i] * dj;
            }
        }
        pow = next;
    }
    let mut m_fact = 1.0;
    (1..=m_top)
        .map(|m| {
            m_fact *= m as f64;
            pow[r + m] * m_fact
        })
        .collect()
}

// --- residual sweeps shared by the property and acceptance suites ---

fn circle(center: Complex64, radius: f64, count: usize) -> impl Iterator<Item = Complex64> {
    (0..count).map(move |j| {
        let t = 2.0 * std::f64::consts::PI * j as f64 / count as f64;
        center + Complex64::from_polar(radius, t)
    })
}

/// Max of `|Psi(Q(z)) - Q'(q) Psi(z)|` over 20 points on `|z - q| = 0.05`.
pub fn max_conjugacy_residual(spec: &ProblemSpec) -> f64 {
    circle(Complex64::from(spec.fixed_point), 0.05, 20)
        .map(|z| {
            let lhs = funeq::psi_eval(spec, spec.q.eval_complex(z)).unwrap();
            let rhs = spec.multiplier * funeq::psi_eval(spec, z).unwrap();
            (lhs - rhs).norm()
        })
        .fold(0.0, f64::max)
}

/// Max of `|Pi(Q'(q) z) - Q(Pi(z))|` over 20 points on `|z| = 0.2`.
pub fn max_poincare_residual(spec: &ProblemSpec) -> f64 {
    circle(Complex64::from(0.0), 0.2, 20)
        .map(|z| {
            let lhs = funeq::poincare_eval(spec, spec.multiplier * z).unwrap();
            let rhs = spec.q.eval_complex(funeq::poincare_eval(spec, z).unwrap());
            (lhs - rhs).norm()
        })
        .fold(0.0, f64::max)
}

/// Max of `|Psi(Pi(z)) - z|` over 20 points on `|z| = 0.2`.
pub fn max_inverse_pair_residual(spec: &ProblemSpec) -> f64 {
    circle(Complex64::from(0.0), 0.2, 20)
        .map(|z| {
            let w = funeq::poincare_eval(spec, z).unwrap();
            (funeq::psi_eval(spec, w).unwrap() - z).norm()
        })
        .fold(0.0, f64::max)
}

/// Max of `|ln T(z) - alpha P(z) - ln T(Q(z))|` over 20 real points in
/// `(q - r0, q)`.
pub fn max_lnt_residual(spec: &ProblemSpec) -> f64 {
    let r0 = spec.backward_radius();
    (1..=20)
        .map(|j| {
            let z = Complex64::from(spec.fixed_point - r0 * j as f64 / 21.0);
            let lhs = funeq::ln_t(spec, z).unwrap().value;
            let rhs = spec.alpha * spec.p.eval_complex(z)
                + funeq::ln_t(spec, spec.q.eval_complex(z)).unwrap().value;
            (lhs - rhs).norm()
        })
        .fold(0.0, f64::max)
}

/// Max pointwise difference between the `Lambda` grids over two adjacent
/// periods.
pub fn max_periodicity_residual(spec: &ProblemSpec, y: f64, grid_n: usize) -> f64 {
    let g1 = funeq::lambda_line(spec, y, grid_n, None).unwrap();
    let g2 = funeq::lambda_line(spec, y, grid_n, Some(g1.n_offset + 1)).unwrap();
    g1.values
        .iter()
        .zip(&g2.values)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

/// Max relative error of `|Gamma(i x)|^2 = pi / (x sinh pi x)` at x = 1, 2, 5.
pub fn gamma_identity_residual() -> f64 {
    [1.0f64, 2.0, 5.0]
        .iter()
        .map(|&x| {
            let lg = funeq::log_gamma(Complex64::new(0.0, x)).unwrap();
            let got = (2.0 * lg.re).exp();
            let want = std::f64::consts::PI / (x * (std::f64::consts::PI * x).sinh());
            (got - want).abs() / want
        })
        .fold(0.0, f64::max)
}

/// Max relative deviation of `psi_m(r)` from the direct series oracle for
/// `m <= 5`, `r in {1, 2, 3}`.
pub fn psi_oracle_max_rel(spec: &ProblemSpec) -> f64 {
    let data = funeq::SchroderData::new(spec, 8).unwrap();
    let mut worst = 0.0f64;
    for r in 1..=3usize {
        let oracle = psi_oracle(&data.derivs, r, 5);
        for m in 1..=5usize {
            let got = data.psi[m - 1].eval(r as f64);
            let rel = (got - oracle[m - 1]).abs() / oracle[m - 1].abs().max(1.0);
            worst = worst.max(rel);
        }
    }
    worst
}

/// Max deviation of the assembled `A_1` from its closed form
/// `z (z + beta) (q Q''(q) + Q'(q) - Q'(q)^2) / (2 beta^2 (Q'(q) - Q'(q)^2))`
/// at five sample points (relative where the closed form is nonzero).
pub fn a1_identity_residual(spec: &ProblemSpec) -> f64 {
    let schroder = funeq::SchroderData::new(spec, 8).unwrap();
    let s_table = funeq::s_polynomials(2);
    let a1 = funeq::a_polynomial(1, spec, &schroder, &s_table);
    let q = spec.fixed_point;
    let lam = spec.multiplier;
    let qpp = spec.q.derivative_at(q, 2);
    let scale = (q * qpp + lam - lam * lam) / (2.0 * spec.beta * spec.beta * (lam - lam * lam));
    (1..=5)
        .map(|m| {
            let z = Complex64::new(0.0, 2.0 * std::f64::consts::PI * m as f64);
            let want = z * (z + spec.beta) * scale;
            let got = a1.eval_complex(z);
            (got - want).norm() / want.norm().max(1.0)
        })
        .fold(0.0, f64::max)
}

/// Empirical decay order of the binomial asymptotic truncated at `k <= 3`:
/// returns, for each sampled `r`, the pair `(err(n), err(2n))` against the
/// double-double product oracle.
pub fn s_truncation_errors(rs: &[Complex64], n: usize) -> Vec<(f64, f64)> {
    let table = funeq::s_polynomials(3);
    let mut out = Vec::with_capacity(rs.len());
    for &r in rs {
        let err = |nn: usize| -> f64 {
            let gamma = funeq::log_gamma(-r).unwrap().exp();
            let npow = ((r + 1.0) * (nn as f64).ln()).exp();
            let sign = if nn.is_multiple_of(2) { 1.0 } else { -1.0 };
            let x = sign * binom_dd(r, nn) * gamma * npow;
            let mut series = Complex64::new(0.0, 0.0);
            for (k, poly) in table.polys.iter().enumerate() {
                series += poly.eval_complex(r) / (nn as f64).powi(k as i32);
            }
            (x - series).norm()
        };
        out.push((err(n), err(2 * n)));
    }
    out
}

/// Deterministic scatter of complex `r` values with `|r| <= 3`, away from
/// the nonnegative integers where `Gamma(-r)` degenerates.
pub fn sample_rs(count: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(count);
    let mut state = 0x9e3779b97f4a7c15u64;
    while out.len() < count {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let a = ((state >> 11) as f64 / (1u64 << 53) as f64) * 6.0 - 3.0;
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let b = ((state >> 11) as f64 / (1u64 << 53) as f64) * 6.0 - 3.0;
        let r = Complex64::new(a, b);
        if r.norm() <= 3.0 && (r.im.abs() > 0.05 || r.re < -0.1) {
            out.push(r);
        }
    }
    out
}
