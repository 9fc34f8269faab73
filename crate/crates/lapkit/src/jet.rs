//! Truncated power-series (jet) arithmetic in extended precision.
//!
//! A jet holds the coefficients `coeffs[k] = g^(k)(center)/k!` of a
//! function at a point, so jet arithmetic yields exact derivatives up to
//! the truncation order. This is the derivative engine behind Post-Widder
//! inversion and every tail estimate: the orders involved (up to a few
//! hundred) rule out both symbolic differentiation and finite differences.

use crate::error::{Error, Result};
use crate::expr::{Expression, Node};
use crate::precision::PrecisionConfig;
use crate::real::Real;

#[derive(Clone, Debug)]
pub struct Jet {
    pub center: Real,
    pub coeffs: Vec<Real>,
}

impl Jet {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn constant(v: Real, order: usize, bits: usize) -> Jet {
        let mut coeffs = vec![Real::zero(bits); order + 1];
        let center = Real::zero(bits);
        coeffs[0] = v;
        Jet { center, coeffs }
    }

    pub fn variable(center: Real, order: usize, bits: usize) -> Jet {
        let mut coeffs = vec![Real::zero(bits); order + 1];
        coeffs[0] = center.clone();
        if order >= 1 {
            coeffs[1] = Real::one(bits);
        }
        Jet { center, coeffs }
    }

    pub fn value(&self) -> &Real {
        &self.coeffs[0]
    }

    /// k-th derivative at the center: coeffs[k] * k!.
    pub fn derivative(&self, k: usize) -> Real {
        self.coeffs[k].mul(&Real::factorial(k, self.coeffs[k].prec()))
    }

    fn zip(&self, o: &Jet, f: impl Fn(&Real, &Real) -> Real) -> Jet {
        debug_assert_eq!(self.coeffs.len(), o.coeffs.len());
        Jet {
            center: self.center.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(o.coeffs.iter())
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, o: &Jet) -> Jet {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Jet) -> Jet {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Jet {
        Jet {
            center: self.center.clone(),
            coeffs: self.coeffs.iter().map(|a| a.neg()).collect(),
        }
    }

    pub fn scale(&self, s: &Real) -> Jet {
        Jet {
            center: self.center.clone(),
            coeffs: self.coeffs.iter().map(|a| a.mul(s)).collect(),
        }
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let n = self.coeffs.len();
        let bits = self.coeffs[0].prec();
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = Real::zero(bits);
            for i in 0..=k {
                acc = acc.add(&self.coeffs[i].mul(&o.coeffs[k - i]));
            }
            coeffs.push(acc);
        }
        Jet {
            center: self.center.clone(),
            coeffs,
        }
    }

    pub fn div(&self, o: &Jet) -> Result<Jet> {
        if o.coeffs[0].is_zero() || !o.coeffs[0].is_finite() {
            return Err(Error::Domain {
                op: "div",
                msg: format!("division by zero at center {}", self.center.to_f64()),
            });
        }
        let n = self.coeffs.len();
        let bits = self.coeffs[0].prec();
        let mut q: Vec<Real> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeffs[k].clone();
            for i in 0..k {
                acc = acc.sub(&q[i].mul(&o.coeffs[k - i]));
            }
            q.push(acc.div(&o.coeffs[0]));
        }
        let _ = bits;
        Ok(Jet {
            center: self.center.clone(),
            coeffs: q,
        })
    }

    pub fn exp(&self) -> Jet {
        let n = self.coeffs.len();
        let bits = self.coeffs[0].prec();
        let mut e: Vec<Real> = Vec::with_capacity(n);
        e.push(self.coeffs[0].exp());
        for k in 1..n {
            // e' = a' e  =>  k e_k = sum_{j=1..k} j a_j e_{k-j}
            let mut acc = Real::zero(bits);
            for j in 1..=k {
                let term = Real::from_u64(j as u64, bits)
                    .mul(&self.coeffs[j])
                    .mul(&e[k - j]);
                acc = acc.add(&term);
            }
            e.push(acc.div(&Real::from_u64(k as u64, bits)));
        }
        Jet {
            center: self.center.clone(),
            coeffs: e,
        }
    }

    pub fn log(&self) -> Result<Jet> {
        if !self.coeffs[0].is_positive() || !self.coeffs[0].is_finite() {
            return Err(Error::Domain {
                op: "log",
                msg: format!(
                    "log of non-positive value {} at center {}",
                    self.coeffs[0].to_f64(),
                    self.center.to_f64()
                ),
            });
        }
        let n = self.coeffs.len();
        let bits = self.coeffs[0].prec();
        let mut l: Vec<Real> = Vec::with_capacity(n);
        l.push(self.coeffs[0].ln());
        for k in 1..n {
            // a l' = a'  =>  l_k = (a_k - (1/k) sum_{j=1..k-1} j l_j a_{k-j}) / a_0
            let mut acc = Real::zero(bits);
            for j in 1..k {
                let term = Real::from_u64(j as u64, bits)
                    .mul(&l[j])
                    .mul(&self.coeffs[k - j]);
                acc = acc.add(&term);
            }
            let num = self.coeffs[k].sub(&acc.div(&Real::from_u64(k as u64, bits)));
            l.push(num.div(&self.coeffs[0]));
        }
        Ok(Jet {
            center: self.center.clone(),
            coeffs: l,
        })
    }

    /// Constant real exponent: integer exponents by repeated multiplication
    /// (valid for any non-zero leading value), fractional via exp(c*log(.)).
    pub fn pow(&self, c: &Real) -> Result<Jet> {
        let cf = c.to_f64();
        if cf.fract() == 0.0 && cf.abs() <= 512.0 {
            let k = cf as i64;
            return self.powi(k);
        }
        let l = self.log().map_err(|_| Error::Domain {
            op: "pow",
            msg: format!(
                "fractional power of non-positive value {} at center {}",
                self.coeffs[0].to_f64(),
                self.center.to_f64()
            ),
        })?;
        Ok(l.scale(c).exp())
    }

    pub fn powi(&self, k: i64) -> Result<Jet> {
        let bits = self.coeffs[0].prec();
        let order = self.order();
        if k == 0 {
            return Ok(Jet::constant_at(
                Real::one(bits),
                &self.center,
                order,
                bits,
            ));
        }
        let mut base = if k > 0 {
            self.clone()
        } else {
            Jet::constant_at(Real::one(bits), &self.center, order, bits).div(self)?
        };
        let mut e = k.unsigned_abs();
        let mut acc: Option<Jet> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc.expect("non-zero exponent"))
    }

    pub fn constant_at(v: Real, center: &Real, order: usize, bits: usize) -> Jet {
        let mut coeffs = vec![Real::zero(bits); order + 1];
        coeffs[0] = v;
        Jet {
            center: center.clone(),
            coeffs,
        }
    }
}

fn eval_node(node: &Node, var: &Jet, bits: usize) -> Result<Jet> {
    match node {
        Node::Const(text) => {
            let v = Real::parse_decimal(text, bits).ok_or_else(|| Error::Syntax {
                offset: 0,
                msg: format!("malformed numeric literal `{text}`"),
            })?;
            Ok(Jet::constant_at(v, &var.center, var.order(), bits))
        }
        Node::Var => Ok(var.clone()),
        Node::Add(a, b) => Ok(eval_node(a, var, bits)?.add(&eval_node(b, var, bits)?)),
        Node::Sub(a, b) => Ok(eval_node(a, var, bits)?.sub(&eval_node(b, var, bits)?)),
        Node::Mul(a, b) => Ok(eval_node(a, var, bits)?.mul(&eval_node(b, var, bits)?)),
        Node::Div(a, b) => eval_node(a, var, bits)?.div(&eval_node(b, var, bits)?),
        Node::Neg(a) => Ok(eval_node(a, var, bits)?.neg()),
        Node::Exp(a) => Ok(eval_node(a, var, bits)?.exp()),
        Node::Log(a) => eval_node(a, var, bits)?.log(),
        Node::Pow(a, b) => {
            let base = eval_node(a, var, bits)?;
            let c = eval_const(b, bits)?;
            base.pow(&c)
        }
    }
}

fn eval_const(node: &Node, bits: usize) -> Result<Real> {
    let dummy = Jet::variable(Real::zero(bits), 0, bits);
    let jet = eval_node(node, &dummy, bits)?;
    Ok(jet.coeffs[0].clone())
}

/// Evaluate `e` as a jet of the given order at `center`.
///
/// Domain checks are per operation node; negative centers are fine as long
/// as every log/division/fractional power stays inside its own domain.
pub fn eval_jet(e: &Expression, center: &Real, order: usize, prec: &PrecisionConfig) -> Result<Jet> {
    let bits = prec.significand_bits;
    let var = Jet::variable(center.clone(), order, bits);
    eval_node(&e.ast, &var, bits)
}

pub fn eval_jet_f64(e: &Expression, center: f64, order: usize, prec: &PrecisionConfig) -> Result<Jet> {
    eval_jet(e, &Real::from_f64(center, prec.significand_bits), order, prec)
}

/// n-th derivative of `e` at `lambda`.
pub fn nth_derivative(e: &Expression, n: usize, lambda: &Real, prec: &PrecisionConfig) -> Result<Real> {
    let jet = eval_jet(e, lambda, n, prec)?;
    Ok(jet.derivative(n))
}

/// Plain value of `e` at `lambda`.
pub fn eval_value(e: &Expression, lambda: &Real, prec: &PrecisionConfig) -> Result<Real> {
    Ok(eval_jet(e, lambda, 0, prec)?.coeffs[0].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    #[test]
    fn exp_jet_matches_closed_form() {
        // exp(-x) at 1, order 2: coefficients (e^-1, -e^-1, e^-1/2)
        let e = Expression::parse("exp(-x)").unwrap();
        let jet = eval_jet_f64(&e, 1.0, 2, &prec()).unwrap();
        let ei = (-1.0f64).exp();
        assert!((jet.coeffs[0].to_f64() - ei).abs() < 1e-15);
        assert!((jet.coeffs[1].to_f64() + ei).abs() < 1e-15);
        assert!((jet.coeffs[2].to_f64() - ei / 2.0).abs() < 1e-15);
    }

    #[test]
    fn reciprocal_third_derivative() {
        // 1/x at 2: f'''(2) = -6/16
        let e = Expression::parse("1/x").unwrap();
        let d3 = nth_derivative(&e, 3, &Real::from_f64(2.0, 256), &prec()).unwrap();
        assert!((d3.to_f64() + 0.375).abs() < 1e-20);
    }

    #[test]
    fn geometric_series_near_origin() {
        // 1/(1+x) at 1e-30: coefficients approach (-1)^k
        let e = Expression::parse("1/(1+x)").unwrap();
        let jet = eval_jet_f64(&e, 1e-30, 6, &prec()).unwrap();
        for (k, c) in jet.coeffs.iter().enumerate() {
            let expect = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((c.to_f64() - expect).abs() < 1e-28, "k={k}");
        }
    }

    #[test]
    fn first_derivative_of_simple_fraction() {
        let e = Expression::parse("1/(1+x)").unwrap();
        let d1 = nth_derivative(&e, 1, &Real::from_f64(1.0, 256), &prec()).unwrap();
        assert!((d1.to_f64() + 0.25).abs() < 1e-30);
    }

    #[test]
    fn second_derivative_of_log() {
        let e = Expression::parse("log(1+x)").unwrap();
        let d2 = nth_derivative(&e, 2, &Real::from_f64(0.5, 256), &prec()).unwrap();
        assert!((d2.to_f64() + 1.0 / 2.25).abs() < 1e-30);
    }

    #[test]
    fn negative_center_is_fine_when_nodes_allow() {
        // 1/(1+x) at -0.5: every node is well defined
        let e = Expression::parse("1/(1+x)").unwrap();
        let v = eval_value(&e, &Real::from_f64(-0.5, 256), &prec()).unwrap();
        assert!((v.to_f64() - 2.0).abs() < 1e-30);
        // but log(x) at -0.5 must fail with a domain error
        let l = Expression::parse("log(x)").unwrap();
        assert!(matches!(
            eval_value(&l, &Real::from_f64(-0.5, 256), &prec()),
            Err(Error::Domain { op: "log", .. })
        ));
    }

    #[test]
    fn division_by_zero_reports_domain() {
        let e = Expression::parse("1/x").unwrap();
        assert!(matches!(
            eval_value(&e, &Real::zero(256), &prec()),
            Err(Error::Domain { op: "div", .. })
        ));
    }

    #[test]
    fn fractional_power_against_finite_differences() {
        // 5th derivative of 1/(1+x^0.5) at 2 against a central finite
        // difference at 512 bits, relative error <= 1e-20.
        let e = Expression::parse("1/(1+x^0.5)").unwrap();
        let hi = PrecisionConfig::new(512, 8).unwrap();
        let jet_d5 = nth_derivative(&e, 5, &Real::from_f64(2.0, 512), &hi).unwrap();

        // central 5th difference with half-integer offsets, step 1e-12
        let h = Real::parse_decimal("1e-12", 512).unwrap();
        let mut acc = Real::zero(512);
        let binom = [1.0, -5.0, 10.0, -10.0, 5.0, -1.0];
        for (k, b) in binom.iter().enumerate() {
            let off = Real::from_f64(2.5 - k as f64, 512).mul(&h);
            let xk = Real::from_f64(2.0, 512).add(&off);
            let fx = eval_value(&e, &xk, &hi).unwrap();
            acc = acc.add(&fx.mul(&Real::from_f64(*b, 512)));
        }
        let fd = acc.div(&h.powi(5));
        let rel = jet_d5.sub(&fd).abs().div(&jet_d5.abs()).to_f64();
        assert!(rel <= 1e-20, "relative deviation {rel}");
    }

    #[test]
    fn jet_arithmetic_is_linear() {
        let e1 = Expression::parse("1/(1+x)").unwrap();
        let e2 = Expression::parse("exp(-x)").unwrap();
        let combo = Expression::parse("3*(1/(1+x))+0.5*exp(-x)").unwrap();
        let c = eval_jet_f64(&combo, 0.7, 12, &prec()).unwrap();
        let j1 = eval_jet_f64(&e1, 0.7, 12, &prec()).unwrap();
        let j2 = eval_jet_f64(&e2, 0.7, 12, &prec()).unwrap();
        for k in 0..=12 {
            let want = j1.coeffs[k]
                .mul(&Real::from_f64(3.0, 256))
                .add(&j2.coeffs[k].mul(&Real::from_f64(0.5, 256)));
            assert!(c.coeffs[k].approx_eq_rel(&want, 1e-70), "k={k}");
        }
    }

    #[test]
    fn cm_sign_alternation_for_catalog() {
        for text in ["1/(1+x)", "exp(-x)", "1/(1+x^0.5)", "1/(1+log(1+x))", "1/x"] {
            let e = Expression::parse(text).unwrap();
            for lam in [0.3, 1.0, 7.0] {
                let jet = eval_jet_f64(&e, lam, 16, &prec()).unwrap();
                for k in 0..=16 {
                    let v = jet.coeffs[k].to_f64();
                    let signed = if k % 2 == 0 { v } else { -v };
                    assert!(
                        signed >= -1e-40,
                        "{text} violates CM at k={k}, lambda={lam}: {v}"
                    );
                }
            }
        }
    }

    #[test]
    fn integer_power_at_negative_center() {
        let e = Expression::parse("x^2").unwrap();
        let v = eval_value(&e, &Real::from_f64(-3.0, 256), &prec()).unwrap();
        assert_eq!(v.to_f64(), 9.0);
    }
}
