//! Extended-precision real arithmetic backed by `astro-float`.
//!
//! `Real` couples a big-float value with its working precision so that
//! arithmetic can be written infix. Binary operations use the larger of
//! the operand precisions; transcendental functions use a thread-local
//! constants cache, which keeps every operation pure and safe to call
//! from concurrent sweeps.

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

#[derive(Clone, Debug)]
pub struct Real {
    x: BigFloat,
    p: usize,
}

impl Real {
    fn wrap(x: BigFloat, p: usize) -> Self {
        Real { x, p }
    }

    pub fn zero(p: usize) -> Self {
        Real::wrap(BigFloat::from_f64(0.0, p), p)
    }

    pub fn one(p: usize) -> Self {
        Real::wrap(BigFloat::from_f64(1.0, p), p)
    }

    pub fn from_f64(v: f64, p: usize) -> Self {
        Real::wrap(BigFloat::from_f64(v, p), p)
    }

    pub fn from_u64(v: u64, p: usize) -> Self {
        Real::wrap(BigFloat::from_u64(v, p), p)
    }

    pub fn from_i64(v: i64, p: usize) -> Self {
        Real::wrap(BigFloat::from_i64(v, p), p)
    }

    /// Parse a decimal literal exactly at precision `p`.
    pub fn parse_decimal(s: &str, p: usize) -> Option<Self> {
        if !is_decimal_literal(s) {
            return None;
        }
        let x = with_consts(|cc| BigFloat::parse(s, Radix::Dec, p, RM, cc));
        if x.is_nan() {
            None
        } else {
            Some(Real::wrap(x, p))
        }
    }

    pub fn prec(&self) -> usize {
        self.p
    }

    pub fn inf(p: usize, negative: bool) -> Self {
        let mut x = BigFloat::from_f64(if negative { f64::NEG_INFINITY } else { f64::INFINITY }, p);
        x.set_sign(if negative { Sign::Neg } else { Sign::Pos });
        Real::wrap(x, p)
    }

    pub fn nan(p: usize) -> Self {
        Real::wrap(BigFloat::nan(None), p)
    }

    fn join(&self, o: &Real) -> usize {
        self.p.max(o.p)
    }

    pub fn add(&self, o: &Real) -> Real {
        let p = self.join(o);
        Real::wrap(self.x.add(&o.x, p, RM), p)
    }

    pub fn sub(&self, o: &Real) -> Real {
        let p = self.join(o);
        Real::wrap(self.x.sub(&o.x, p, RM), p)
    }

    pub fn mul(&self, o: &Real) -> Real {
        let p = self.join(o);
        Real::wrap(self.x.mul(&o.x, p, RM), p)
    }

    pub fn div(&self, o: &Real) -> Real {
        let p = self.join(o);
        Real::wrap(self.x.div(&o.x, p, RM), p)
    }

    pub fn neg(&self) -> Real {
        Real::wrap(self.x.neg(), self.p)
    }

    pub fn abs(&self) -> Real {
        Real::wrap(self.x.abs(), self.p)
    }

    pub fn recip(&self) -> Real {
        Real::wrap(self.x.reciprocal(self.p, RM), self.p)
    }

    pub fn exp(&self) -> Real {
        Real::wrap(with_consts(|cc| self.x.exp(self.p, RM, cc)), self.p)
    }

    pub fn ln(&self) -> Real {
        Real::wrap(with_consts(|cc| self.x.ln(self.p, RM, cc)), self.p)
    }

    pub fn sqrt(&self) -> Real {
        Real::wrap(self.x.sqrt(self.p, RM), self.p)
    }

    pub fn pow(&self, e: &Real) -> Real {
        let p = self.join(e);
        Real::wrap(with_consts(|cc| self.x.pow(&e.x, p, RM, cc)), p)
    }

    pub fn powi(&self, n: i64) -> Real {
        if n >= 0 {
            Real::wrap(self.x.powi(n as usize, self.p, RM), self.p)
        } else {
            let pos = self.x.powi((-n) as usize, self.p, RM);
            Real::wrap(pos.reciprocal(self.p, RM), self.p)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero()
    }

    pub fn is_nan(&self) -> bool {
        self.x.is_nan()
    }

    pub fn is_inf(&self) -> bool {
        self.x.is_inf()
    }

    pub fn is_finite(&self) -> bool {
        !self.x.is_nan() && !self.x.is_inf()
    }

    pub fn is_negative(&self) -> bool {
        self.x.is_negative() && !self.x.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.x.is_positive() && !self.x.is_zero()
    }

    /// Base-2 exponent of the value, if finite and non-zero.
    pub fn exponent(&self) -> Option<i64> {
        if self.x.is_zero() || self.x.is_inf() || self.x.is_nan() {
            None
        } else {
            self.x.exponent().map(|e| e as i64)
        }
    }

    /// Round-to-nearest conversion to `f64`, saturating to infinity.
    pub fn to_f64(&self) -> f64 {
        if self.x.is_nan() {
            return f64::NAN;
        }
        if self.x.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.x.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        if self.x.is_zero() {
            return 0.0;
        }
        let (words, _n, sign, e, _inexact) = self.x.as_raw_parts().expect("finite raw parts");
        // Mantissa words are little-endian; the most significant word has its
        // top bit set, so value = frac * 2^e with frac in [0.5, 1).
        let top = *words.last().expect("non-empty mantissa") as f64;
        let frac = top / (u64::MAX as f64 + 1.0);
        let mag = frac * exp2_f64(e as i64);
        if sign == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// Natural log of |self| as f64, usable far beyond the f64 exponent range.
    pub fn ln_abs_f64(&self) -> f64 {
        if self.x.is_zero() {
            return f64::NEG_INFINITY;
        }
        if self.x.is_inf() {
            return f64::INFINITY;
        }
        if self.x.is_nan() {
            return f64::NAN;
        }
        let (words, _n, _sign, e, _inexact) = self.x.as_raw_parts().expect("finite raw parts");
        let top = *words.last().expect("non-empty mantissa") as f64;
        let frac = top / (u64::MAX as f64 + 1.0);
        (e as f64) * std::f64::consts::LN_2 + frac.ln()
    }

    pub fn max(&self, o: &Real) -> Real {
        let p = self.join(o);
        Real::wrap(self.x.max(&o.x), p)
    }

    pub fn min(&self, o: &Real) -> Real {
        let p = self.join(o);
        Real::wrap(self.x.min(&o.x), p)
    }

    /// `n!` at precision `p`.
    pub fn factorial(n: usize, p: usize) -> Real {
        let mut acc = Real::one(p);
        for k in 2..=n {
            acc = acc.mul(&Real::from_u64(k as u64, p));
        }
        acc
    }

    /// True when |self - other| <= tol * max(|self|, |other|).
    pub fn approx_eq_rel(&self, o: &Real, tol: f64) -> bool {
        let scale = self.abs().max(&o.abs());
        if scale.is_zero() {
            return true;
        }
        let diff = self.sub(o).abs();
        diff.to_f64() <= tol * scale.to_f64() || diff.div(&scale).to_f64() <= tol
    }
}

fn is_decimal_literal(s: &str) -> bool {
    let s = s.strip_prefix('-').unwrap_or(s);
    let (mantissa, exponent) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, Some(e)),
        None => (s, None),
    };
    let mut parts = mantissa.splitn(2, '.');
    let int_part = parts.next().unwrap_or("");
    let frac_part = parts.next();
    let digits_ok = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let mantissa_ok = match frac_part {
        Some(f) => {
            (digits_ok(int_part) || int_part.is_empty()) && (digits_ok(f) || f.is_empty())
                && !(int_part.is_empty() && f.is_empty())
        }
        None => digits_ok(int_part),
    };
    let exp_ok = match exponent {
        None => true,
        Some(e) => {
            let e = e.strip_prefix(['+', '-']).unwrap_or(e);
            digits_ok(e)
        }
    };
    mantissa_ok && exp_ok
}

fn exp2_f64(e: i64) -> f64 {
    // f64 powi saturates cleanly outside the representable range.
    if e > 2000 {
        f64::INFINITY
    } else if e < -2000 {
        0.0
    } else {
        (e as f64).exp2()
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        matches!(self.x.cmp(&other.x), Some(0))
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.x.cmp(&other.x).map(|s| s.cmp(&0))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

macro_rules! impl_binop {
    ($trait:ident, $fn:ident) => {
        impl std::ops::$trait<&Real> for &Real {
            type Output = Real;
            fn $fn(self, rhs: &Real) -> Real {
                Real::$fn(self, rhs)
            }
        }
    };
}

impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);
impl_binop!(Div, div);

impl std::ops::Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: usize = 256;

    #[test]
    fn basic_arithmetic_round_trips() {
        let a = Real::from_f64(1.5, P);
        let b = Real::from_f64(0.25, P);
        assert_eq!((&a + &b).to_f64(), 1.75);
        assert_eq!((&a - &b).to_f64(), 1.25);
        assert_eq!((&a * &b).to_f64(), 0.375);
        assert_eq!((&a / &b).to_f64(), 6.0);
        assert_eq!((-&a).to_f64(), -1.5);
    }

    #[test]
    fn exp_ln_inverse() {
        let a = Real::from_f64(2.0, P);
        let e = a.exp().ln();
        assert!(e.approx_eq_rel(&a, 1e-70));
    }

    #[test]
    fn parse_decimal_exact() {
        let half = Real::parse_decimal("0.5", P).unwrap();
        assert_eq!(half.to_f64(), 0.5);
        let bad = Real::parse_decimal("0.5.5", P);
        assert!(bad.is_none());
    }

    #[test]
    fn to_f64_matches_known_values() {
        for v in [
            0.0,
            1.0,
            -1.0,
            0.3,
            1e300,
            -2.5e-300,
            std::f64::consts::PI,
        ] {
            let r = Real::from_f64(v, P);
            assert_eq!(r.to_f64(), v, "round trip of {v}");
        }
    }

    #[test]
    fn ln_abs_beyond_f64_range() {
        // 2^5000 overflows f64 but its log must come back accurately.
        let two = Real::from_f64(2.0, P);
        let big = two.powi(5000);
        let expect = 5000.0 * std::f64::consts::LN_2;
        assert!((big.ln_abs_f64() - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn factorial_small() {
        assert_eq!(Real::factorial(5, P).to_f64(), 120.0);
        assert_eq!(Real::factorial(0, P).to_f64(), 1.0);
    }

    #[test]
    fn ordering() {
        let a = Real::from_f64(-2.0, P);
        let b = Real::from_f64(3.0, P);
        assert!(a < b);
        assert!(b > a);
        assert!(a.is_negative() && b.is_positive());
    }
}
