//! The functional-equation instance: polynomials `P`, `Q`, the repelling
//! fixed point `q` and the global constants `alpha`, `beta`.
//!
//! `Q` must fix the origin as an attracting point (`0 <= Q'(0) < 1`) and fix
//! `q > 0` as a repelling point (`Q'(q) > 1`); `P` must vanish at the origin
//! and not at `q`. The constants are `beta = ln Q'(q)` and
//! `alpha = -ln Q'(q) / P(q)`.

use num::complex::Complex64;
use thiserror::Error;

/// Errors from spec construction and fixed-point search.
#[derive(Debug, Error, PartialEq)]
pub enum ProblemError {
    #[error("polynomial needs at least one nonzero coefficient")]
    ZeroPolynomial,
    #[error("no fixed point of Q found in [{0}, {1}]")]
    NoFixedPoint(f64, f64),
    #[error("fixed point q = {q} is not repelling: Q'(q) = {multiplier}")]
    NotRepelling { q: f64, multiplier: f64 },
    #[error("degenerate spec: P(q) = 0 at q = {0}")]
    DegenerateSpec(f64),
}

/// Dense real polynomial, coefficients lowest degree first.
///
/// Evaluation is Horner's scheme in a fixed order, so results are
/// reproducible bit-for-bit across calls.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self, ProblemError> {
        if coeffs.iter().all(|c| *c == 0.0) {
            return Err(ProblemError::ZeroPolynomial);
        }
        Ok(Self { coeffs })
    }

    /// Panicking constructor for literals in tests and internal tables.
    pub fn from_coeffs(coeffs: &[f64]) -> Self {
        Self::new(coeffs.to_vec()).expect("nonzero polynomial")
    }

    /// Internal constructor for derived polynomials (which may legitimately
    /// be zero); trims trailing zero coefficients.
    pub(crate) fn raw(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub(crate) fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::raw(out)
    }

    pub(crate) fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = vec![0.0; self.coeffs.len().max(other.coeffs.len())];
        for (i, a) in self.coeffs.iter().enumerate() {
            out[i] += a;
        }
        for (i, b) in other.coeffs.iter().enumerate() {
            out[i] += b;
        }
        Polynomial::raw(out)
    }

    pub(crate) fn scale(&self, factor: f64) -> Polynomial {
        Polynomial::raw(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// `p(a z + b)` by Horner in polynomial arithmetic.
    pub(crate) fn compose_affine(&self, a: f64, b: f64) -> Polynomial {
        let mut acc = vec![0.0];
        for &c in self.coeffs.iter().rev() {
            let mut next = vec![0.0; acc.len() + 1];
            for (i, &t) in acc.iter().enumerate() {
                next[i] += t * b;
                next[i + 1] += t * a;
            }
            next[0] += c;
            acc = next;
        }
        Polynomial::raw(acc)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c != 0.0).unwrap_or(0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial { coeffs: vec![0.0] };
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| i as f64 * c)
            .collect();
        Polynomial { coeffs }
    }

    /// Value of the m-th derivative at `x` (m = 0 is the polynomial itself).
    pub fn derivative_at(&self, x: f64, m: usize) -> f64 {
        let mut p = self.clone();
        for _ in 0..m {
            p = p.derivative();
        }
        p.eval(x)
    }
}

/// A validated instance of `Phi(z) = P(z) + Phi(Q(z))`.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub p: Polynomial,
    pub q: Polynomial,
    /// Repelling fixed point of `Q`.
    pub fixed_point: f64,
    /// `Q'(fixed_point)`, cached for the inner loops.
    pub multiplier: f64,
    /// `-ln Q'(q) / P(q)`.
    pub alpha: f64,
    /// `ln Q'(q)`.
    pub beta: f64,
    /// Taylor coefficients of `Q` around the fixed point:
    /// `shifted_q[j] = Q^(j)(q) / j!`. Exact for polynomials, so
    /// `(Q(z) - q)/(z - q)` can be evaluated without cancellation.
    pub(crate) shifted_q: Vec<f64>,
}

impl ProblemSpec {
    /// Locate the fixed point in `bracket`, derive the constants, and check
    /// the hard requirements (`Q'(q) > 1`, `P(q) != 0`).
    ///
    /// The softer standing assumptions (attracting origin, `P(0) = 0`,
    /// orbits inside the ball tending to 0) are reported by
    /// [`validate_spec`], not enforced here.
    pub fn new(p: Polynomial, q: Polynomial, bracket: (f64, f64)) -> Result<Self, ProblemError> {
        let fixed_point = find_fixed_point(&q, bracket)?;
        let (alpha, beta) = derive_constants(&p, &q, fixed_point)?;
        let multiplier = q.derivative().eval(fixed_point);
        let mut shifted_q = Vec::with_capacity(q.degree() + 1);
        let mut deriv = q.clone();
        let mut fact = 1.0;
        for j in 0..=q.degree() {
            if j > 0 {
                deriv = deriv.derivative();
                fact *= j as f64;
            }
            shifted_q.push(deriv.eval(fixed_point) / fact);
        }
        Ok(Self {
            p,
            q,
            fixed_point,
            multiplier,
            alpha,
            beta,
            shifted_q,
        })
    }

    /// Backward-iteration radius around `q` used by the conjugacy and
    /// boundary evaluators.
    pub fn backward_radius(&self) -> f64 {
        0.25 * self.fixed_point
    }
}

/// Named violations of the standing assumptions.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    /// `Q'(0)` outside `[0, 1)`.
    AttractingOriginViolated { derivative: f64 },
    /// `P(0) != 0`.
    PNonzeroAtOrigin { value: f64 },
    /// `P(q) = 0`, which makes `alpha` undefined.
    PVanishesAtFixedPoint,
    /// No repelling fixed point in the bracket, or `Q'(q) <= 1`.
    NotRepellingFixedPoint { multiplier: Option<f64> },
    /// A sampled forward orbit inside the ball failed to reach 0.
    OrbitNotAttracted { start: Complex64 },
}

const FIXED_POINT_RTOL: f64 = 1e-14;

fn newton_fixed_point(q: &Polynomial, start: f64) -> Option<f64> {
    let dq = q.derivative();
    let mut x = start;
    for _ in 0..80 {
        let f = q.eval(x) - x;
        if f.abs() <= FIXED_POINT_RTOL * x.abs().max(1.0) {
            // one polishing step unless the derivative is degenerate
            let d = dq.eval(x) - 1.0;
            if d != 0.0 {
                let x2 = x - f / d;
                if (q.eval(x2) - x2).abs() <= f.abs() {
                    x = x2;
                }
            }
            return Some(x);
        }
        let d = dq.eval(x) - 1.0;
        if d == 0.0 || !x.is_finite() {
            return None;
        }
        x -= f / d;
    }
    let f = q.eval(x) - x;
    if x.is_finite() && f.abs() <= FIXED_POINT_RTOL * x.abs().max(1.0) {
        Some(x)
    } else {
        None
    }
}

/// Find `q > 0` with `Q(q) = q` inside `bracket`.
///
/// Bisection narrows a sign change of `Q(x) - x` to width 1e-6, then Newton
/// polishes to machine precision. Without a sign change, Newton runs from the
/// bracket midpoint. Fails with [`ProblemError::NotRepelling`] when the point
/// found has `Q'(q) <= 1`.
pub fn find_fixed_point(q: &Polynomial, bracket: (f64, f64)) -> Result<f64, ProblemError> {
    let (mut a, mut b) = bracket;
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    let g = |x: f64| q.eval(x) - x;
    let (ga, gb) = (g(a), g(b));

    let root = if ga == 0.0 {
        Some(a)
    } else if gb == 0.0 {
        Some(b)
    } else if ga * gb < 0.0 {
        let (mut lo, mut hi, mut glo) = (a, b, ga);
        while hi - lo > 1e-6 {
            let mid = 0.5 * (lo + hi);
            let gm = g(mid);
            if gm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if glo * gm < 0.0 {
                hi = mid;
            } else {
                lo = mid;
                glo = gm;
            }
        }
        newton_fixed_point(q, 0.5 * (lo + hi))
    } else {
        newton_fixed_point(q, 0.5 * (a + b))
    };

    let root = root.filter(|x| *x > 0.0 && *x >= a - 1e-9 && *x <= b + 1e-9);
    match root {
        None => Err(ProblemError::NoFixedPoint(a, b)),
        Some(x) => {
            let multiplier = q.derivative().eval(x);
            if multiplier <= 1.0 {
                Err(ProblemError::NotRepelling { q: x, multiplier })
            } else {
                Ok(x)
            }
        }
    }
}

/// `beta = ln Q'(q)` and `alpha = -beta / P(q)`.
pub fn derive_constants(
    p: &Polynomial,
    q: &Polynomial,
    fixed_point: f64,
) -> Result<(f64, f64), ProblemError> {
    let pq = p.eval(fixed_point);
    let scale = p.coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if pq.abs() <= 1e-12 * scale {
        return Err(ProblemError::DegenerateSpec(fixed_point));
    }
    let beta = q.derivative().eval(fixed_point).ln();
    let alpha = -beta / pq;
    Ok((alpha, beta))
}

const ORBIT_SAMPLES: usize = 64;
const ORBIT_ITERATIONS: usize = 200;
const ORBIT_TARGET: f64 = 1e-8;

/// Check the standing assumptions for raw `P`, `Q` and report every
/// violation as a named diagnostic. An empty list means all testable
/// assumptions hold.
///
/// The global Julia-set condition is sampled: 64 points on the circle of
/// radius `q (1 - 1e-3)` are iterated forward 200 times and must fall below
/// 1e-8 in modulus.
pub fn validate_spec(p: &Polynomial, q: &Polynomial, bracket: (f64, f64)) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    let dq0 = q.derivative().eval(0.0);
    if !(0.0..1.0).contains(&dq0) {
        out.push(Diagnostic::AttractingOriginViolated { derivative: dq0 });
    }
    let p0 = p.eval(0.0);
    if p0 != 0.0 {
        out.push(Diagnostic::PNonzeroAtOrigin { value: p0 });
    }

    let fixed = match find_fixed_point(q, bracket) {
        Ok(x) => Some(x),
        Err(ProblemError::NotRepelling { q: x, multiplier }) => {
            out.push(Diagnostic::NotRepellingFixedPoint {
                multiplier: Some(multiplier),
            });
            Some(x)
        }
        Err(_) => {
            out.push(Diagnostic::NotRepellingFixedPoint { multiplier: None });
            None
        }
    };

    if let Some(qfix) = fixed {
        if p.eval(qfix).abs() <= 1e-12 * p.coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs())) {
            out.push(Diagnostic::PVanishesAtFixedPoint);
        }
        let radius = qfix * (1.0 - 1e-3);
        for j in 0..ORBIT_SAMPLES {
            let angle = 2.0 * std::f64::consts::PI * j as f64 / ORBIT_SAMPLES as f64;
            let start = Complex64::from_polar(radius, angle);
            let mut z = start;
            let mut ok = false;
            for _ in 0..ORBIT_ITERATIONS {
                z = q.eval_complex(z);
                if !z.re.is_finite() || !z.im.is_finite() {
                    break;
                }
                if z.norm() < ORBIT_TARGET {
                    ok = true;
                    break;
                }
            }
            if !ok {
                out.push(Diagnostic::OrbitNotAttracted { start });
                break;
            }
        }
    }

    out
}
