//! The boundary factor `T`, solution of `T(z) = e^{alpha P(z)} T(Q(z))` with
//! `T(q) = 0`, `T'(q) = -1`, computed in log form.
//!
//! With `w_m = Q_{-m}(z)` the backward orbit toward `q`,
//!
//! ```text
//! ln T(z) = ln(q - z) + sum_{m>=1} [ beta P(w_m)/P(q) - ln R(w_m) ],
//! ```
//!
//! which is the cancellation-free rearrangement of the telescoping form
//! `ln T(z) = ln(q - z) + sum_{m>=1} [ ln((q - w_m)/(q - w_{m-1})) - alpha P(w_m) ]`.
//! Terms decay geometrically at rate `1/Q'(q)`.

use crate::conjugacy::{backward_offset_step, ratio_from_offset, ConjugacyError};
use crate::problem::ProblemSpec;
use num::complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BoundaryError {
    #[error("ln T has a logarithmic singularity at z = q")]
    AtSingularity,
    #[error("backward series did not converge within {0} terms")]
    NoConvergence(usize),
    #[error("backward orbit failed: {0}")]
    Backward(#[from] ConjugacyError),
}

/// Value of `ln T(z)` together with convergence bookkeeping.
#[derive(Debug, Clone, Copy)]
pub struct LogTResult {
    pub value: Complex64,
    pub terms_used: usize,
    /// Geometric bound on the dropped tail.
    pub tail_bound: f64,
}

const MAX_TERMS: usize = 200;
const INCREMENT_TOL: f64 = 1e-13;

// The backward orbit lives in offset coordinates d_m = Q_{-m}(z) - q, which
// keep full relative precision as the orbit contracts into q.
fn run_series<F>(spec: &ProblemSpec, z: Complex64, term: F) -> Result<LogTResult, BoundaryError>
where
    F: Fn(Complex64, Complex64) -> Complex64,
{
    let mut d = z - spec.fixed_point;
    if d.norm() == 0.0 {
        return Err(BoundaryError::AtSingularity);
    }
    let mut value = (-d).ln();
    let rho = 1.0 / spec.multiplier;
    for m in 1..=MAX_TERMS {
        let next = backward_offset_step(spec, d)?;
        let t = term(next, d);
        value += t;
        d = next;
        if t.norm() < INCREMENT_TOL {
            return Ok(LogTResult {
                value,
                terms_used: m,
                tail_bound: t.norm() * rho / (1.0 - rho),
            });
        }
    }
    Err(BoundaryError::NoConvergence(MAX_TERMS))
}

/// `ln T(z)` by the production series (powers of the multiplier against `R`).
pub fn ln_t(spec: &ProblemSpec, z: Complex64) -> Result<LogTResult, BoundaryError> {
    let p_at_q = spec.p.eval(spec.fixed_point);
    let beta = spec.beta;
    let q = spec.fixed_point;
    run_series(spec, z, |d, _| {
        beta * spec.p.eval_complex(q + d) / p_at_q - ratio_from_offset(spec, d).ln()
    })
}

/// `ln T(z)` by the telescoping quotient form; kept as an independent
/// algebraic route for testing.
pub fn ln_t_quotient_form(spec: &ProblemSpec, z: Complex64) -> Result<LogTResult, BoundaryError> {
    let alpha = spec.alpha;
    let q = spec.fixed_point;
    run_series(spec, z, |d, prev| {
        (d / prev).ln() - alpha * spec.p.eval_complex(q + d)
    })
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

    fn c(x: f64) -> Complex64 {
        Complex64::from(x)
    }

    #[test]
    fn normalization_t_prime_is_minus_one() {
        // T(z)/(q - z) -> 1 as z -> q
        let spec = spec_23();
        let q = spec.fixed_point;
        let mut last = f64::INFINITY;
        for h in [1e-3, 1e-5, 1e-8] {
            let r = ln_t(&spec, c(q - h)).unwrap();
            let ratio = r.value.exp() / h;
            let err = (ratio - c(1.0)).norm();
            assert!(err < last, "ratio error should shrink with h");
            last = err;
        }
        assert!(last < 1e-6);
    }

    #[test]
    fn functional_equation_residual() {
        let spec = spec_23();
        let z = c(spec.fixed_point - 0.03);
        let lhs = ln_t(&spec, z).unwrap().value;
        let rhs = spec.alpha * spec.p.eval_complex(z)
            + ln_t(&spec, spec.q.eval_complex(z)).unwrap().value;
        assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn real_input_gives_real_log() {
        let spec = spec_23();
        let r = ln_t(&spec, c(spec.fixed_point - 0.1)).unwrap();
        assert!(r.value.im.abs() < 1e-14);
        assert!(r.value.re.is_finite());
    }

    #[test]
    fn quotient_and_power_forms_agree() {
        let spec = spec_23();
        for h in [0.02, 0.05, 0.1] {
            let z = c(spec.fixed_point - h);
            let a = ln_t(&spec, z).unwrap().value;
            let b = ln_t_quotient_form(&spec, z).unwrap().value;
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn singular_part_is_the_log() {
        // ln T(z) - ln(q - z) stays bounded (and tends to 0) as z -> q
        let spec = spec_23();
        let q = spec.fixed_point;
        for h in [1e-3, 1e-6, 1e-9] {
            let r = ln_t(&spec, c(q - h)).unwrap();
            let series_part = r.value - c(h).ln();
            assert!(series_part.norm() < 0.5);
        }
    }

    #[test]
    fn at_singularity_is_an_error() {
        let spec = spec_23();
        assert!(matches!(
            ln_t(&spec, c(spec.fixed_point)),
            Err(BoundaryError::AtSingularity)
        ));
    }

    #[test]
    fn tail_bound_is_tight_on_success() {
        let spec = spec_23();
        let r = ln_t(&spec, c(spec.fixed_point - 0.08)).unwrap();
        assert!(r.tail_bound <= 1e-12 * r.value.norm().max(1.0));
        assert!(r.terms_used < 60);
    }
}
