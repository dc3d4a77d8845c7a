//! Exact Taylor coefficients of `Phi`, the ground truth for every asymptotic
//! claim.
//!
//! Two independent routes: truncated power-series composition of
//! `Phi = P + P(Q) + P(Q_2) + ...` in exact arithmetic, and (for the 2,3-tree
//! instance `P = z`, `Q = z^2 + z^3`) the combinatorial recurrence
//!
//! ```text
//! phi_n = sum_{2k + 3m = n} binom(k + m, k) phi_{k+m},    phi_1 = 1.
//! ```
//!
//! Coefficients grow like `q^{-n}` (phi_10000 has about 2900 digits), so the
//! normalized values `n q^n phi_n` are computed in log space.

use crate::dd::{ln_dd, Dd, LN2};
use crate::problem::ProblemSpec;
use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("composition oracle needs Q with a zero of order >= 2 at the origin")]
    UnsupportedSpec,
    #[error("recurrence oracle only applies to P = z, Q = z^2 + z^3")]
    WrongSpec,
}

/// Exact coefficients `phi_1 ... phi_n` (index 0 holds `phi_0 = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    pub coeffs: Vec<BigRational>,
}

impl CoefficientTable {
    /// Highest index stored.
    pub fn len(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    /// All coefficients as integers, when they are integers.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }
}

// --- exact truncated series helpers (index = degree) ---

fn series_mul<T>(a: &[T], b: &[T], top: usize) -> Vec<T>
where
    T: Clone + Zero + for<'a> std::ops::AddAssign<&'a T> + std::ops::Mul<Output = T>,
{
    let mut out = vec![T::zero(); top + 1];
    for (i, ai) in a.iter().enumerate().take(top + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(top + 1 - i) {
            let prod = ai.clone() * bj.clone();
            out[i + j] += &prod;
        }
    }
    out
}

/// `poly(series)` truncated, by Horner; `series` must have valuation >= 1.
fn poly_of_series<T>(poly: &[T], series: &[T], top: usize) -> Vec<T>
where
    T: Clone + Zero + for<'a> std::ops::AddAssign<&'a T> + std::ops::Mul<Output = T>,
{
    let mut acc = vec![T::zero(); top + 1];
    for c in poly.iter().rev() {
        acc = series_mul(&acc, series, top);
        acc[0] += c;
    }
    acc
}

fn compose_phi<T>(p: &[T], q: &[T], top: usize) -> Vec<T>
where
    T: Clone + Zero + One + for<'a> std::ops::AddAssign<&'a T> + std::ops::Mul<Output = T>,
{
    let mut total = vec![T::zero(); top + 1];
    // orbit of the identity series under composition with Q
    let mut orbit: Vec<T> = vec![T::zero(); top + 1];
    if top >= 1 {
        orbit[1] = T::one();
    }
    loop {
        let term = poly_of_series(p, &orbit, top);
        for (t, v) in total.iter_mut().zip(&term) {
            *t += v;
        }
        orbit = poly_of_series(q, &orbit, top);
        if orbit.iter().all(|c| c.is_zero()) {
            break;
        }
    }
    total
}

fn f64_to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite coefficient")
}

/// Exact `phi_1 ... phi_n` by truncated series composition of the orbit sum.
///
/// Requires `Q(0) = 0` with `Q'(0) = 0`: then the k-th orbit term only
/// contributes from degree `2^k`, so finitely many terms reach any degree.
/// Integer specs run on a pure big-integer path; anything else on exact
/// rationals.
pub fn coeffs_by_composition(
    spec: &ProblemSpec,
    n: usize,
) -> Result<CoefficientTable, OracleError> {
    let q_coeffs = spec.q.coeffs();
    if q_coeffs.first().is_some_and(|c| *c != 0.0) || q_coeffs.get(1).is_some_and(|c| *c != 0.0) {
        return Err(OracleError::UnsupportedSpec);
    }
    let all_integer = spec
        .p
        .coeffs()
        .iter()
        .chain(spec.q.coeffs())
        .all(|c| c.fract() == 0.0 && c.abs() < 2f64.powi(53));
    let coeffs = if all_integer {
        let p: Vec<BigInt> = spec
            .p
            .coeffs()
            .iter()
            .map(|c| BigInt::from(*c as i64))
            .collect();
        let q: Vec<BigInt> = spec
            .q
            .coeffs()
            .iter()
            .map(|c| BigInt::from(*c as i64))
            .collect();
        compose_phi(&p, &q, n)
            .into_iter()
            .map(BigRational::from_integer)
            .collect()
    } else {
        let p: Vec<BigRational> = spec
            .p
            .coeffs()
            .iter()
            .map(|c| f64_to_rational(*c))
            .collect();
        let q: Vec<BigRational> = spec
            .q
            .coeffs()
            .iter()
            .map(|c| f64_to_rational(*c))
            .collect();
        compose_phi(&p, &q, n)
    };
    Ok(CoefficientTable { coeffs })
}

/// Exact `phi_1 ... phi_n` for the 2,3-tree equation by the combinatorial
/// recurrence, with the binomials updated incrementally along each
/// anti-diagonal `2k + 3m = n`.
pub fn coeffs_by_recurrence_23(
    spec: &ProblemSpec,
    n: usize,
) -> Result<CoefficientTable, OracleError> {
    if spec.p.coeffs() != [0.0, 1.0] || spec.q.coeffs() != [0.0, 0.0, 1.0, 1.0] {
        return Err(OracleError::WrongSpec);
    }
    let mut phi: Vec<BigUint> = vec![BigUint::zero(); n + 1];
    if n >= 1 {
        phi[1] = BigUint::one();
    }
    for nn in 2..=n {
        let mut m = nn % 2;
        // largest k first: binom((nn-m)/2, (nn-3m)/2) starts at 1 or s
        let mut k = (nn - 3 * m) / 2;
        let mut s = (nn - m) / 2;
        let mut binom = if m == 0 {
            BigUint::one()
        } else {
            BigUint::from(s)
        };
        let mut acc = BigUint::zero();
        loop {
            acc += &binom * &phi[s];
            if 3 * (m + 2) > nn {
                break;
            }
            // step (k, s) -> (k - 3, s - 1):
            // binom *= k (k-1) (k-2) / (s (s-k+2) (s-k+1))
            let num = (k as u64) * (k as u64 - 1) * (k as u64 - 2);
            let den = (s as u64) * ((s - k) as u64 + 2) * ((s - k) as u64 + 1);
            binom = binom * num / den;
            m += 2;
            k -= 3;
            s -= 1;
        }
        phi[nn] = acc;
    }
    Ok(CoefficientTable {
        coeffs: phi
            .into_iter()
            .map(|c| BigRational::from_integer(BigInt::from(c)))
            .collect(),
    })
}

fn ln_abs_bigint(x: &BigInt) -> Dd {
    let bits = x.bits();
    if bits <= 62 {
        return ln_dd(x.abs().to_f64().expect("small integer"));
    }
    let shift = (bits - 62) as usize;
    let mant = (x.abs() >> shift).to_f64().expect("62-bit mantissa");
    ln_dd(mant) + LN2.mul_f64(shift as f64)
}

/// Normalized values `n q^n phi_n`, evaluated as
/// `exp(ln n + n ln q + ln phi_n)` with the exponent accumulated in
/// double-double arithmetic (the two large parts cancel to O(1)).
pub fn normalize(table: &CoefficientTable, spec: &ProblemSpec) -> Vec<f64> {
    let ln_q = ln_dd(spec.fixed_point);
    let mut out = Vec::with_capacity(table.len());
    for n in 1..=table.len() {
        let c = table.coeff(n);
        if c.is_zero() {
            out.push(0.0);
            continue;
        }
        let sign = if c.is_negative() { -1.0 } else { 1.0 };
        let ln_phi = ln_abs_bigint(c.numer()) + (-ln_abs_bigint(c.denom()));
        let exponent = ln_dd(n as f64) + ln_q.mul_f64(n as f64) + ln_phi;
        out.push(sign * exponent.value().exp());
    }
    out
}
