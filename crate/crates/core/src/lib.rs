//! Numerical pipeline for the coefficient asymptotics of solutions of the
//! functional equation `Phi(z) = P(z) + Phi(Q(z))`.
//!
//! The solution `Phi` has a power series `Phi(z) = phi_1 z + phi_2 z^2 + ...`
//! whose coefficients grow like `q^{-n}/n` times a bounded oscillation, where
//! `q > 0` is the repelling fixed point of `Q`. This crate computes the full
//! asymptotic series
//!
//! ```text
//! phi_n ~ q^{-n}/n * K_1(x_n) + q^{-n}/n^2 * K_2(x_n) + ...,
//! x_n = (ln q - ln n) / beta,  beta = ln Q'(q),
//! ```
//!
//! where the `K_r` are 1-periodic functions assembled from
//!
//! * the Schroeder conjugacy `Psi` at `q` and its Taylor data ([`conjugacy`]),
//! * the boundary factor `ln T` ([`boundary`]),
//! * the Fourier spectrum of the periodic invariant `Lambda` ([`spectrum`]),
//! * universal correction polynomials `S_{2k}` and `A_r` ([`expansion`]).
//!
//! Exact big-integer coefficient tables ([`oracle`]) provide ground truth for
//! everything above.
//!
//! ```
//! use funeq::{asymptotic_coeff, ExpansionTable, Polynomial, ProblemSpec};
//!
//! // f(z) = z + f(z^2 + z^3): phi_n counts 2,3-trees with n leaves
//! let spec = ProblemSpec::new(
//!     Polynomial::from_coeffs(&[0.0, 1.0]),
//!     Polynomial::from_coeffs(&[0.0, 0.0, 1.0, 1.0]),
//!     (0.1, 0.9),
//! )
//! .unwrap();
//! assert!((spec.fixed_point - 0.6180339887498949).abs() < 1e-15);
//!
//! // two asymptotic terms estimate n q^n phi_n at n = 1000 to ~3e-8
//! let table = ExpansionTable::build(&spec, 2.0, 512, 8, 2).unwrap();
//! let estimate = asymptotic_coeff(1000, 2, &table);
//! assert!((estimate - 0.784266).abs() < 1e-5);
//! ```

pub mod boundary;
pub mod conjugacy;
pub mod dd;
pub mod expansion;
pub mod oracle;
pub mod problem;
pub mod spectrum;

pub use boundary::{ln_t, ln_t_quotient_form, BoundaryError, LogTResult};
pub use conjugacy::{
    bell_polynomial, inverse_q, poincare_eval, psi_eval, psi_polys, ratio_r, schroder_derivatives,
    ConjugacyError, SchroderData,
};
pub use expansion::{
    a_polynomial, asymptotic_coeff, asymptotic_estimate, binom_general, k_eval, s_polynomials,
    AsymptoticEstimate, ExpansionTable, RatPoly, SPolyTable,
};
pub use oracle::{
    coeffs_by_composition, coeffs_by_recurrence_23, normalize, CoefficientTable, OracleError,
};
pub use problem::{
    derive_constants, find_fixed_point, validate_spec, Diagnostic, Polynomial, ProblemError,
    ProblemSpec,
};
pub use spectrum::{
    fourier_extract, gamma_ratio, lambda_line, lambda_value, log_gamma, phi_eval, scan_shift,
    FourierSpectrum, GridSample, SpectrumError,
};
