//! Schroeder conjugacy at the repelling fixed point.
//!
//! `Psi` linearizes `Q` near `q`: `Psi(Q(z)) = Q'(q) Psi(z)` with `Psi(q) = 0`
//! and `Psi'(q) = -1`; `Pi = Psi^{-1}` is the Poincare map with
//! `Pi(Q'(q) z) = Q(Pi(z))`, `Pi(0) = q`, `Pi'(0) = -1`. Both are computed by
//! their defining limits. The Taylor data of `Psi` at `q` comes from a
//! Faa di Bruno recurrence over partial Bell polynomials, and the polynomials
//! `psi_m(r)` describe the expansion of powers:
//!
//! ```text
//! Psi(z)^r = (q-z)^r + psi_1(r)/1! (q-z)^{r+1} + psi_2(r)/2! (q-z)^{r+2} + ...
//! ```

use crate::problem::{Polynomial, ProblemSpec};
use num::complex::Complex64;
use num::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConjugacyError {
    #[error("bell polynomial arguments: expected m - k + 1 = {expected} values, got {got}")]
    BadArity { expected: usize, got: usize },
    #[error("Newton iteration for Q^-1 diverged near {0}")]
    NewtonDiverged(Complex64),
    #[error("backward iteration left the convergence neighborhood of q")]
    NoConvergence,
    #[error("Poincare recursion not stabilized at depth {0}")]
    DepthExceeded(usize),
    #[error("neither sign reading of the psi recurrence matches the series oracle")]
    SignConventionMismatch,
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Partial Bell polynomial `B_{m,k}(x_1, ..., x_{m-k+1})`, by direct
/// enumeration of the index sequences `j_1 + j_2 + ... = k`,
/// `j_1 + 2 j_2 + 3 j_3 + ... = m`.
///
/// Note `B_{m,m}(x_1) = x_1^m` (single sequence `j_1 = m`).
pub fn bell_polynomial(m: usize, k: usize, xs: &[Complex64]) -> Result<Complex64, ConjugacyError> {
    if k < 1 || k > m || xs.len() != m - k + 1 {
        return Err(ConjugacyError::BadArity {
            expected: if k >= 1 && k <= m { m - k + 1 } else { 0 },
            got: xs.len(),
        });
    }
    let mut acc = Complex64::zero();
    let m_fact = factorial(m);
    // depth-first over j_i, i = 1..=len, with count and weight constraints
    fn rec(
        xs: &[Complex64],
        i: usize,
        count_left: usize,
        weight_left: usize,
        coef: f64,
        prod: Complex64,
        acc: &mut Complex64,
    ) {
        if i == xs.len() + 1 {
            if count_left == 0 && weight_left == 0 {
                *acc += coef * prod;
            }
            return;
        }
        let max_j = count_left.min(weight_left / i);
        for j in 0..=max_j {
            if i == xs.len() && (j != count_left || i * j != weight_left) {
                continue;
            }
            let term = (xs[i - 1] / factorial(i)).powu(j as u32);
            rec(
                xs,
                i + 1,
                count_left - j,
                weight_left - i * j,
                coef / factorial(j),
                prod * term,
                acc,
            );
        }
    }
    rec(xs, 1, k, m, 1.0, Complex64::new(1.0, 0.0), &mut acc);
    Ok(acc * m_fact)
}

/// Derivatives `[Psi''(q), Psi'''(q), ..., Psi^(m_max)(q)]` from the
/// linearization equation: differentiating `Psi(Q(z)) = Q'(q) Psi(z)` m times
/// at `q` gives
///
/// ```text
/// Psi^(m)(q) = 1/(Q'(q) - Q'(q)^m) * sum_{k=1}^{m-1} Psi^(k)(q)
///              B_{m,k}(Q'(q), Q''(q), ..., Q^(m-k+1)(q)).
/// ```
///
/// All denominators are nonzero because `Q'(q) > 1`.
pub fn schroder_derivatives(spec: &ProblemSpec, m_max: usize) -> Vec<f64> {
    assert!(m_max >= 2);
    let lam = spec.multiplier;
    let q = spec.fixed_point;
    // dq[i] = Q^(i)(q)
    let mut dq = vec![0.0; m_max + 1];
    let mut deriv = spec.q.clone();
    for slot in dq.iter_mut().take(m_max + 1).skip(1) {
        deriv = deriv.derivative();
        *slot = deriv.eval(q);
    }
    // psi[k] = Psi^(k)(q); Psi'(q) = -1 seeds the recurrence
    let mut psi = vec![0.0; m_max + 1];
    psi[1] = -1.0;
    for m in 2..=m_max {
        let mut sum = 0.0;
        for (k, &psi_k) in psi.iter().enumerate().take(m).skip(1) {
            let xs: Vec<Complex64> = (1..=m - k + 1).map(|i| Complex64::from(dq[i])).collect();
            let b = bell_polynomial(m, k, &xs).expect("arity by construction");
            sum += psi_k * b.re;
        }
        psi[m] = sum / (lam - lam.powi(m as i32));
    }
    psi[2..].to_vec()
}

/// Multiply `poly` by the linear factor `(r - root)`, in place semantics.
fn mul_linear(coeffs: &mut Vec<f64>, root: f64) {
    coeffs.push(0.0);
    for i in (0..coeffs.len() - 1).rev() {
        let c = coeffs[i];
        coeffs[i + 1] += c;
        coeffs[i] = -root * c;
    }
}

/// Coefficients of `u^m` in `(sum_j a_j u^j)^k` equal `k!/m! B_{m,k}(1! a_1,
/// 2! a_2, ...)`; this builds `psi_m(r)` for either sign reading of the
/// Taylor arguments.
fn psi_from_bell(derivs: &[f64], count: usize, alternating: bool) -> Vec<Polynomial> {
    // a[j] = sign * Psi^(j+1)(q) / (j+1), j = 1.., with sign = (-1)^(j-1)
    // (alternating, the Taylor-in-(q-z) reading) or -1 (uniform).
    let args: Vec<Complex64> = (1..=count)
        .map(|j| {
            let sign = if alternating {
                if j % 2 == 1 {
                    1.0
                } else {
                    -1.0
                }
            } else {
                -1.0
            };
            Complex64::from(sign * derivs[j - 1] / (j + 1) as f64)
        })
        .collect();
    let mut out = Vec::with_capacity(count);
    for m in 1..=count {
        // psi_m(r) = sum_{k=1}^m [r (r-1) ... (r-k+1)] B_{m,k}(a_1..a_{m-k+1})
        let mut total = vec![0.0; m + 1];
        let mut falling = vec![1.0]; // falling factorial polynomial in r
        for k in 1..=m {
            mul_linear(&mut falling, (k - 1) as f64);
            let b = bell_polynomial(m, k, &args[..m - k + 1]).expect("arity by construction");
            for (i, c) in falling.iter().enumerate() {
                total[i] += c * b.re;
            }
        }
        out.push(Polynomial::raw(total));
    }
    out
}

/// Taylor coefficients `d_k` of `Psi(z) = sum_k d_k (q-z)^k` from the
/// derivative table (`d_1 = 1`).
fn taylor_coeffs(derivs: &[f64], order: usize) -> Vec<f64> {
    let mut d = vec![0.0; order + 1];
    if order >= 1 {
        d[1] = 1.0;
    }
    for k in 2..=order {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        d[k] = sign * derivs[k - 2] / factorial(k);
    }
    d
}

/// Direct truncated-series exponentiation: `psi_m(r)` for integer `r` read
/// off from `(d_1 u + d_2 u^2 + ...)^r`.
fn psi_series_oracle(derivs: &[f64], r: usize, m_top: usize) -> Vec<f64> {
    let order = r + m_top;
    let d = taylor_coeffs(derivs, order);
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
    (1..=m_top).map(|m| pow[r + m] * factorial(m)).collect()
}

/// The polynomials `psi_1(r), ..., psi_count(r)`.
///
/// The Bell-polynomial route admits two sign readings for its arguments; the
/// one reproducing the direct series-exponentiation oracle is kept (the
/// alternating reading, consistent with `psi_1(r) = r Psi''(q)/2`).
pub fn psi_polys(derivs: &[f64], count: usize) -> Result<Vec<Polynomial>, ConjugacyError> {
    assert!(
        derivs.len() >= count,
        "need Psi derivatives through order count+1"
    );
    for alternating in [true, false] {
        let polys = psi_from_bell(derivs, count, alternating);
        let mut ok = true;
        for r in 1..=3usize {
            // the series oracle needs derivatives through order r + m
            let m_top = count.min(3).min((derivs.len() + 1).saturating_sub(r));
            if m_top == 0 {
                continue;
            }
            let oracle = psi_series_oracle(derivs, r, m_top);
            for m in 1..=m_top {
                let got = polys[m - 1].eval(r as f64);
                let want = oracle[m - 1];
                if (got - want).abs() > 1e-9 * want.abs().max(1.0) {
                    ok = false;
                }
            }
        }
        // anchor: psi_1(r) = r Psi''(q) / 2
        let anchor = derivs[0] / 2.0;
        if ok && (polys[0].eval(1.0) - anchor).abs() <= 1e-12 * anchor.abs().max(1.0) {
            return Ok(polys);
        }
    }
    Err(ConjugacyError::SignConventionMismatch)
}

/// Precomputed Taylor data of the Schroeder map at `q`.
#[derive(Debug, Clone)]
pub struct SchroderData {
    /// `[Psi''(q), ..., Psi^(m_max)(q)]`.
    pub derivs: Vec<f64>,
    /// `[psi_1, ..., psi_{m_max - 1}]`, polynomials in `r`.
    pub psi: Vec<Polynomial>,
}

impl SchroderData {
    pub fn new(spec: &ProblemSpec, m_max: usize) -> Result<Self, ConjugacyError> {
        let derivs = schroder_derivatives(spec, m_max);
        let psi = psi_polys(&derivs, m_max - 1)?;
        Ok(Self { derivs, psi })
    }

    /// Truncated Taylor series of `Psi` at `q`, using all stored derivatives.
    pub fn taylor_eval(&self, spec: &ProblemSpec, z: Complex64) -> Complex64 {
        let order = self.derivs.len() + 1;
        let d = taylor_coeffs(&self.derivs, order);
        let u = spec.fixed_point - z;
        let mut acc = Complex64::zero();
        for k in (1..=order).rev() {
            acc = (acc + d[k]) * u;
        }
        acc
    }
}

/// `R(q + d)` from the offset `d = z - q`, by Horner over the exact Taylor
/// coefficients of `Q` at `q`.
pub(crate) fn ratio_from_offset(spec: &ProblemSpec, d: Complex64) -> Complex64 {
    let c = &spec.shifted_q;
    let mut acc = Complex64::zero();
    for j in (1..c.len()).rev() {
        acc = acc * d + c[j];
    }
    acc
}

/// `S'(d)` for the offset form `S(d) = Q(q + d) - q = sum_j c_j d^j`.
fn offset_derivative(spec: &ProblemSpec, d: Complex64) -> Complex64 {
    let c = &spec.shifted_q;
    let mut acc = Complex64::zero();
    for j in (1..c.len()).rev() {
        acc = acc * d + j as f64 * c[j];
    }
    acc
}

/// `R(z) = (Q(z) - q)/(z - q)` with `R(q) = Q'(q)`.
///
/// Evaluated through the exact Taylor coefficients of `Q` at `q`, so the
/// removable singularity costs no precision.
pub fn ratio_r(spec: &ProblemSpec, z: Complex64) -> Complex64 {
    ratio_from_offset(spec, z - spec.fixed_point)
}

/// Newton solve of `Q(x) = w` from `seed`, staying on the branch the seed
/// selects.
pub fn inverse_q(
    spec: &ProblemSpec,
    w: Complex64,
    seed: Complex64,
) -> Result<Complex64, ConjugacyError> {
    let dq = spec.q.derivative();
    let tol = 1e-13 * w.norm().max(1.0);
    let mut x = seed;
    for _ in 0..100 {
        let f = spec.q.eval_complex(x) - w;
        if f.norm() <= tol {
            return Ok(x);
        }
        let d = dq.eval_complex(x);
        if d.norm() == 0.0 {
            return Err(ConjugacyError::NewtonDiverged(x));
        }
        x -= f / d;
        if !x.is_finite() {
            return Err(ConjugacyError::NewtonDiverged(x));
        }
    }
    Err(ConjugacyError::NewtonDiverged(x))
}

/// One backward step of the branch of `Q^{-1}` through `q`, entirely in
/// offset coordinates: given `t = z - q`, solve `Q(q + d) - q = t` for the
/// offset `d` of the preimage.
///
/// Offsets keep full relative precision arbitrarily close to `q`, which the
/// Schroeder limit needs: any absolute error there gets amplified by
/// `Q'(q)^N`.
pub(crate) fn backward_offset_step(
    spec: &ProblemSpec,
    t: Complex64,
) -> Result<Complex64, ConjugacyError> {
    let tol = 1e-14 * t.norm();
    let mut d = t / spec.multiplier;
    for _ in 0..100 {
        let residual = d * ratio_from_offset(spec, d) - t;
        if residual.norm() <= tol {
            return Ok(d);
        }
        let slope = offset_derivative(spec, d);
        if slope.norm() == 0.0 {
            return Err(ConjugacyError::NewtonDiverged(d));
        }
        d -= residual / slope;
        if !d.is_finite() {
            return Err(ConjugacyError::NewtonDiverged(d));
        }
    }
    Err(ConjugacyError::NewtonDiverged(d))
}

/// Schroeder map `Psi(z) = lim_N Q'(q)^N (q - Q_{-N}(z))`.
///
/// Outside the backward radius the argument is first pulled toward `q`
/// through `Psi(z) = Q'(q) Psi(Q^{-1}(z))`.
pub fn psi_eval(spec: &ProblemSpec, z: Complex64) -> Result<Complex64, ConjugacyError> {
    let lam = spec.multiplier;
    let r0 = spec.backward_radius();

    let mut d = z - spec.fixed_point;
    let mut factor = 1.0;
    let mut pulls = 0;
    while d.norm() > r0 {
        d = backward_offset_step(spec, d)?;
        factor *= lam;
        pulls += 1;
        if pulls > 64 {
            return Err(ConjugacyError::NoConvergence);
        }
    }

    let mut prev = -d;
    let mut scale = 1.0;
    for _ in 1..=200 {
        d = backward_offset_step(spec, d)?;
        if d.norm() > 1.5 * r0 {
            return Err(ConjugacyError::NoConvergence);
        }
        scale *= lam;
        let approx = -scale * d;
        if (approx - prev).norm() < 1e-13 {
            return Ok(factor * approx);
        }
        prev = approx;
    }
    Err(ConjugacyError::NoConvergence)
}

fn poincare_depth(spec: &ProblemSpec, z: Complex64, depth: usize) -> Complex64 {
    let lam = spec.multiplier;
    let mut w = z;
    for k in (1..=depth).rev() {
        let scale = lam.powi(k as i32);
        w = w * ratio_from_offset(spec, -w / scale) / lam;
    }
    spec.fixed_point - w
}

/// Poincare map `Pi(z) = lim_N Q_N(q - z / Q'(q)^N)`, by the downward
/// recursion `z <- z R(q - z/Q'(q)^N) / Q'(q)`; entire in `z` for
/// polynomial `Q`.
pub fn poincare_eval(spec: &ProblemSpec, z: Complex64) -> Result<Complex64, ConjugacyError> {
    let mut prev = poincare_depth(spec, z, 8);
    for depth in [16usize, 32, 64, 128, 200] {
        let cur = poincare_depth(spec, z, depth);
        if (cur - prev).norm() <= 1e-13 * cur.norm().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(ConjugacyError::DepthExceeded(200))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{Polynomial, ProblemSpec};

    fn spec_23() -> ProblemSpec {
        ProblemSpec::new(
            Polynomial::from_coeffs(&[0.0, 1.0]),
            Polynomial::from_coeffs(&[0.0, 0.0, 1.0, 1.0]),
            (0.1, 0.9),
        )
        .unwrap()
    }

    fn spec_square() -> ProblemSpec {
        ProblemSpec::new(
            Polynomial::from_coeffs(&[0.0, 1.0]),
            Polynomial::from_coeffs(&[0.0, 0.0, 1.0]),
            (0.5, 1.5),
        )
        .unwrap()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::from(x)
    }

    #[test]
    fn bell_diagonal_is_power() {
        // defining sum gives x_1^m on the diagonal
        for m in 1..=5 {
            let b = bell_polynomial(m, m, &[c(2.0)]).unwrap();
            assert!((b.re - 2.0f64.powi(m as i32)).abs() < 1e-12);
            assert_eq!(b.im, 0.0);
        }
    }

    #[test]
    fn bell_k1_picks_last_argument() {
        let xs = [c(1.0), c(2.0), c(3.0), c(7.0)];
        let b = bell_polynomial(4, 1, &xs).unwrap();
        assert!((b.re - 7.0).abs() < 1e-12);
    }

    #[test]
    fn bell_32_matches_hand_enumeration() {
        // single sequence (j1, j2) = (1, 1): 3!/(1!1!) (x1/1)(x2/2) = 3 x1 x2
        let b = bell_polynomial(3, 2, &[c(1.0), c(2.0)]).unwrap();
        assert!((b.re - 6.0).abs() < 1e-12);
    }

    #[test]
    fn bell_k2_matches_binomial_convolution() {
        // B_{m,2} = 1/2 sum_j C(m,j) x_j x_{m-j}
        let xs = [c(1.5), c(-0.5), c(2.0), c(0.25)];
        let m = 5;
        let b = bell_polynomial(m, 2, &xs).unwrap();
        let binom = [1.0, 5.0, 10.0, 10.0, 5.0, 1.0];
        let mut want = 0.0;
        for j in 1..m {
            want += binom[j] * xs[j - 1].re * xs[m - j - 1].re;
        }
        want *= 0.5;
        assert!((b.re - want).abs() < 1e-12);
    }

    #[test]
    fn bell_penultimate_diagonal() {
        // B_{m,m-1}(x1,x2) = C(m,2) x1^{m-2} x2
        let b = bell_polynomial(5, 4, &[c(1.5), c(2.0)]).unwrap();
        assert!((b.re - 10.0 * 1.5f64.powi(3) * 2.0).abs() < 1e-12);
    }

    #[test]
    fn bell_rejects_bad_arity() {
        assert!(matches!(
            bell_polynomial(4, 2, &[c(1.0), c(2.0)]),
            Err(ConjugacyError::BadArity { .. })
        ));
        assert!(matches!(
            bell_polynomial(2, 3, &[]),
            Err(ConjugacyError::BadArity { .. })
        ));
    }

    #[test]
    fn second_derivative_closed_form_23() {
        let spec = spec_23();
        let derivs = schroder_derivatives(&spec, 4);
        let q = spec.fixed_point;
        let qpp = 2.0 + 6.0 * q;
        let want = -qpp / (spec.multiplier - spec.multiplier * spec.multiplier);
        assert!((derivs[0] - want).abs() < 1e-13);
        assert!((derivs[0] - 1.734070).abs() < 2e-6);
    }

    #[test]
    fn second_derivative_square_map() {
        let spec = spec_square();
        let derivs = schroder_derivatives(&spec, 2);
        assert!((derivs[0] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn zero_curvature_gives_zero_second_derivative() {
        // Q = z^3 - 3 z^2 + 5 z - 2 fixes 1 with Q'(1) = 2, Q''(1) = 0
        let spec = ProblemSpec::new(
            Polynomial::from_coeffs(&[0.0, 1.0]),
            Polynomial::from_coeffs(&[-2.0, 5.0, -3.0, 1.0]),
            (0.5, 1.5),
        )
        .unwrap();
        let derivs = schroder_derivatives(&spec, 2);
        assert!(derivs[0].abs() < 1e-13);
    }

    #[test]
    fn derivative_recurrence_matches_log_conjugacy() {
        // for Q = z^2 at q = 1 the Schroeder map is -ln z, so
        // Psi^(m)(1) = (-1)^m (m-1)!
        let spec = spec_square();
        let derivs = schroder_derivatives(&spec, 5);
        let want = [1.0, -2.0, 6.0, -24.0];
        for (got, want) in derivs.iter().zip(want) {
            assert!((got - want).abs() < 1e-11 * want.abs());
        }
    }

    #[test]
    fn psi1_anchor_23() {
        let spec = spec_23();
        let data = SchroderData::new(&spec, 6).unwrap();
        // psi_1(r) = -r Q''(q) / (2 (Q'(q) - Q'(q)^2))
        let q = spec.fixed_point;
        let lam = spec.multiplier;
        let qpp = 2.0 + 6.0 * q;
        let slope = -qpp / (2.0 * (lam - lam * lam));
        assert!((data.psi[0].eval(1.0) - slope).abs() < 1e-13);
        assert!((slope - 0.867035).abs() < 2e-6);
    }

    #[test]
    fn schroder_data_builds_at_minimal_order() {
        for m_max in 2..=4 {
            let data = SchroderData::new(&spec_23(), m_max).unwrap();
            assert_eq!(data.derivs.len(), m_max - 1);
            assert_eq!(data.psi.len(), m_max - 1);
        }
    }

    #[test]
    fn psi_vanishes_at_zero() {
        let spec = spec_23();
        let data = SchroderData::new(&spec, 7).unwrap();
        for p in &data.psi {
            assert_eq!(p.eval(0.0), 0.0);
        }
    }

    #[test]
    fn psi2_for_log_conjugacy() {
        // Psi = -ln z at q = 1: Psi^r = (u + u^2/2 + u^3/3 + ...)^r, so
        // psi_2(r) = 2! [u^{r+2}] = 2r/3 + r(r-1)/4
        let spec = spec_square();
        let data = SchroderData::new(&spec, 6).unwrap();
        for r in [1.0, 2.0, 3.0, 0.5] {
            let want = 2.0 * r / 3.0 + r * (r - 1.0) / 4.0;
            assert!((data.psi[1].eval(r) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn psi_matches_series_oracle_23() {
        let spec = spec_23();
        let data = SchroderData::new(&spec, 8).unwrap();
        for r in 1..=3usize {
            let oracle = psi_series_oracle(&data.derivs, r, 5);
            for m in 1..=5usize {
                let got = data.psi[m - 1].eval(r as f64);
                assert!(
                    (got - oracle[m - 1]).abs() < 1e-10 * oracle[m - 1].abs().max(1.0),
                    "psi_{m}({r}) = {got} vs oracle {}",
                    oracle[m - 1]
                );
            }
        }
    }

    #[test]
    fn psi_eval_at_fixed_point_is_zero() {
        let spec = spec_23();
        let v = psi_eval(&spec, c(spec.fixed_point)).unwrap();
        assert!(v.norm() < 1e-13);
    }

    #[test]
    fn psi_slope_at_fixed_point() {
        let spec = spec_23();
        let h = 1e-5;
        let q = spec.fixed_point;
        let a = psi_eval(&spec, c(q - h)).unwrap();
        let b = psi_eval(&spec, c(q + h)).unwrap();
        let slope = (a - b) / (2.0 * h);
        assert!((slope.re - 1.0).abs() < 1e-8);
        assert!(slope.im.abs() < 1e-12);
    }

    #[test]
    fn psi_conjugates_q_to_multiplication() {
        let spec = spec_23();
        let z0 = c(spec.fixed_point - 0.05);
        let lhs = psi_eval(&spec, spec.q.eval_complex(z0)).unwrap();
        let rhs = psi_eval(&spec, z0).unwrap();
        assert!((lhs / rhs - spec.multiplier).norm() < 1e-10);
    }

    #[test]
    fn inverse_q_fixed_point() {
        let spec = spec_23();
        let q = c(spec.fixed_point);
        let x = inverse_q(&spec, q, q).unwrap();
        assert!((x - q).norm() < 1e-13);
    }

    #[test]
    fn inverse_q_square_root_branch() {
        let spec = spec_square();
        let x = inverse_q(&spec, c(0.25), c(1.0)).unwrap();
        assert!((x - c(0.5)).norm() < 1e-13);
    }

    #[test]
    fn inverse_q_cubic_branch_near_q() {
        let spec = spec_23();
        let x = inverse_q(&spec, c(0.5), c(spec.fixed_point)).unwrap();
        assert!((x.re - 0.56).abs() < 0.01);
        assert!((spec.q.eval_complex(x) - c(0.5)).norm() < 1e-13);
    }

    #[test]
    fn poincare_at_origin_is_q() {
        let spec = spec_23();
        let v = poincare_eval(&spec, Complex64::zero()).unwrap();
        assert!((v.re - spec.fixed_point).abs() < 1e-14);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn poincare_functional_equation() {
        let spec = spec_23();
        let z0 = c(0.1);
        let lhs = poincare_eval(&spec, spec.multiplier * z0).unwrap();
        let rhs = spec.q.eval_complex(poincare_eval(&spec, z0).unwrap());
        assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn psi_inverts_poincare() {
        let spec = spec_23();
        let z0 = c(0.05);
        let w = poincare_eval(&spec, z0).unwrap();
        let back = psi_eval(&spec, w).unwrap();
        assert!((back - z0).norm() < 1e-10);
    }

    #[test]
    fn ratio_r_values() {
        let spec = spec_23();
        let q = spec.fixed_point;
        let at_q = ratio_r(&spec, c(q));
        assert!((at_q.re - spec.multiplier).abs() < 1e-14);
        assert!((at_q.re - 2.381966).abs() < 1e-6);
        // Q(0) = 0 makes R(0) = (0 - q)/(0 - q) = 1
        assert!((ratio_r(&spec, Complex64::zero()).re - 1.0).abs() < 1e-14);

        let sq = spec_square();
        assert!((ratio_r(&sq, c(0.5)).re - 1.5).abs() < 1e-14);
    }
}
