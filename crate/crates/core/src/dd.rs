//! Minimal double-double arithmetic: an unevaluated sum `hi + lo` of two
//! doubles carrying roughly 106 bits of precision.
//!
//! Used where plain f64 rounding would be visible in the results: the log-space
//! normalization of huge integer coefficients, and the extended-precision
//! binomial products that back the test oracles.

use std::ops::{Add, Div, Mul, Neg};

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Exact sum of two doubles (Knuth two-sum).
#[inline]
pub fn two_sum(a: f64, b: f64) -> Dd {
    let hi = a + b;
    let v = hi - a;
    let lo = (a - (hi - v)) + (b - v);
    Dd { hi, lo }
}

/// Exact product of two doubles via fused multiply-add.
#[inline]
pub fn two_prod(a: f64, b: f64) -> Dd {
    let hi = a * b;
    let lo = a.mul_add(b, -hi);
    Dd { hi, lo }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add_f64(self, x: f64) -> Dd {
        self + Dd::from_f64(x)
    }

    #[inline]
    pub fn mul_f64(self, x: f64) -> Dd {
        let p = two_prod(self.hi, x);
        let lo = p.lo + self.lo * x;
        let r = two_sum(p.hi, lo);
        Dd { hi: r.hi, lo: r.lo }
    }

    #[inline]
    pub fn div_f64(self, x: f64) -> Dd {
        let q1 = self.hi / x;
        let p = two_prod(q1, x);
        let rem = self + (-p);
        let q2 = rem.value() / x;
        let s = two_sum(q1, q2);
        Dd { hi: s.hi, lo: s.lo }
    }

    #[inline]
    pub fn scale_pow2(self, k: i32) -> Dd {
        let f = (2.0f64).powi(k);
        Dd {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }
}

impl Add for Dd {
    type Output = Dd;

    #[inline]
    fn add(self, other: Dd) -> Dd {
        let s = two_sum(self.hi, other.hi);
        let lo = s.lo + self.lo + other.lo;
        let r = two_sum(s.hi, lo);
        Dd { hi: r.hi, lo: r.lo }
    }
}

impl Mul for Dd {
    type Output = Dd;

    #[inline]
    fn mul(self, other: Dd) -> Dd {
        let p = two_prod(self.hi, other.hi);
        let lo = p.lo + self.hi * other.lo + self.lo * other.hi;
        let r = two_sum(p.hi, lo);
        Dd { hi: r.hi, lo: r.lo }
    }
}

impl Div for Dd {
    type Output = Dd;

    #[inline]
    fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self + other.mul_f64(-q1);
        let q2 = r.value() / other.hi;
        let s = two_sum(q1, q2);
        Dd { hi: s.hi, lo: s.lo }
    }
}

impl Neg for Dd {
    type Output = Dd;

    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

/// `ln 2` split into high and low parts (fdlibm pair, ~85 accurate bits).
pub const LN2: Dd = Dd {
    hi: 6.931_471_803_691_238e-1,
    lo: 1.908_214_929_270_587_7e-10,
};

/// `exp(t)` in double-double for moderate `|t|` (below ~700).
///
/// Argument reduction by `ln 2`, a 13-term Taylor sum on `|u| <= ln2/128`,
/// then six squarings.
pub fn exp_dd(t: Dd) -> Dd {
    let k = (t.hi / LN2.hi).round();
    let reduced = t + LN2.mul_f64(-k);
    let u = reduced.scale_pow2(-6);
    // Horner for sum u^j / j!
    let mut acc = Dd::from_f64(1.0);
    for j in (1..=13u32).rev() {
        acc = (acc * u).div_f64(f64::from(j)).add_f64(1.0);
    }
    for _ in 0..6 {
        acc = acc * acc;
    }
    acc.scale_pow2(k as i32)
}

/// Natural log of a positive double, corrected to double-double accuracy.
///
/// One residual step: with `y0 = ln(x)` rounded, the correction is
/// `ln(x e^{-y0}) = ln(1 + r)` with tiny `r`, so `ln x = y0 + r - r^2/2 + ...`.
pub fn ln_dd(x: f64) -> Dd {
    assert!(x > 0.0 && x.is_finite());
    let y0 = x.ln();
    let z = exp_dd(Dd::from_f64(-y0)).mul_f64(x);
    let r = z.add_f64(-1.0);
    let corr = r + (-(r * r).scale_pow2(-1));
    Dd::from_f64(y0) + corr
}
