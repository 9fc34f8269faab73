//! Post-Widder inversion of Laplace transforms and the monotone-density
//! condition checker.
//!
//! The distribution form recovers nu((0,x]) from one jet of f at a finite
//! lambda, with the last term as the truncation estimate. The density form
//! is the classical approximant nu_n(x) = ((-1)^n/n!) (n/x)^(n+1) f^(n)(n/x);
//! convergence is O(1/n) with x-dependent constants, so callers that need
//! tight oracles use the Richardson helper or the adaptive doubling ladder.

use crate::error::{Error, Result};
use crate::expr::Expression;
use crate::jet::eval_jet;
use crate::precision::PrecisionConfig;
use crate::real::Real;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct InversionResult {
    pub x: f64,
    pub lambda_used: f64,
    pub partial_sum: Real,
    pub error_estimate: Real,
}

/// nu((0,x]) ~ sum_{n <= lambda x} (-lambda)^n f^(n)(lambda) / n!.
pub fn invert_cdf(
    f: &Expression,
    x: f64,
    lambda: f64,
    prec: &PrecisionConfig,
) -> Result<InversionResult> {
    assert!(x > 0.0 && lambda > 0.0, "invert_cdf needs x > 0, lambda > 0");
    let k = (lambda * x).floor() as usize;
    if k > prec.jet_order {
        return Err(Error::JetOrderExceeded {
            needed: k,
            max: prec.jet_order,
        });
    }
    let bits = prec.significand_bits;
    let lam = Real::from_f64(lambda, bits);
    let jet = eval_jet(f, &lam, k, prec)?;
    // (-lambda)^n f^(n)(lambda)/n! = coeffs[n] * (-lambda)^n
    let neg_lam = lam.neg();
    let mut sum = Real::zero(bits);
    let mut pow = Real::one(bits);
    let mut max_term = Real::zero(bits);
    let mut last = Real::zero(bits);
    for n in 0..=k {
        if n > 0 {
            pow = pow.mul(&neg_lam);
        }
        let term = jet.coeffs[n].mul(&pow);
        max_term = max_term.max(&term.abs());
        sum = sum.add(&term);
        last = term;
    }
    if !sum.is_zero() {
        let loss = max_term.div(&sum.abs()).to_f64();
        if loss.is_finite() && loss > (2.0f64).powi((bits as i32).saturating_sub(16)) {
            return Err(Error::PrecisionLoss {
                msg: format!("term/sum ratio {loss:.3e} at lambda = {lambda}"),
            });
        }
    }
    Ok(InversionResult {
        x,
        lambda_used: lambda,
        partial_sum: sum,
        error_estimate: last.abs(),
    })
}

/// Default finite-lambda rule lambda = jet_order / (2x) for the CDF form.
pub fn default_cdf_lambda(x: f64, prec: &PrecisionConfig) -> f64 {
    prec.jet_order as f64 / (2.0 * x)
}

/// n-th Post-Widder density approximant at x.
pub fn invert_density(f: &Expression, x: f64, n: usize, prec: &PrecisionConfig) -> Result<Real> {
    assert!(x > 0.0, "invert_density needs x > 0");
    if n > prec.jet_order {
        return Err(Error::JetOrderExceeded {
            needed: n,
            max: prec.jet_order,
        });
    }
    let bits = prec.significand_bits;
    let lam = Real::from_u64(n as u64, bits).div(&Real::from_f64(x, bits));
    let jet = eval_jet(f, &lam, n, prec)?;
    // ((-1)^n/n!) lam^(n+1) f^(n)(lam) = (-1)^n lam^(n+1) coeffs[n]
    let v = lam.powi((n + 1) as i64).mul(&jet.coeffs[n]);
    Ok(if n % 2 == 0 { v } else { v.neg() })
}

/// One Richardson step over the pair {n/2, n}: 2 PW_n - PW_{n/2}.
pub fn invert_density_richardson(
    f: &Expression,
    x: f64,
    n: usize,
    prec: &PrecisionConfig,
) -> Result<Real> {
    let bits = prec.significand_bits;
    let lo = invert_density(f, x, n / 2, prec)?;
    let hi = invert_density(f, x, n, prec)?;
    Ok(hi.mul(&Real::from_u64(2, bits)).sub(&lo))
}

/// Density oracle with order doubling until two successive Richardson
/// values agree to `rel_tol` (or `n_max` is reached). Returns the value
/// and the last observed relative change.
pub fn density_adaptive(
    f: &Expression,
    x: f64,
    rel_tol: f64,
    n_start: usize,
    n_max: usize,
    prec: &PrecisionConfig,
) -> Result<(f64, f64)> {
    let mut n = n_start.max(8);
    let big = prec.with_order(n_max.max(prec.jet_order));
    let mut prev = invert_density_richardson(f, x, n, &big)?;
    let mut change = f64::INFINITY;
    while 2 * n <= n_max {
        n *= 2;
        let cur = invert_density_richardson(f, x, n, &big)?;
        let scale = cur.abs().max(&prev.abs());
        change = if scale.is_zero() {
            0.0
        } else {
            cur.sub(&prev).abs().div(&scale).to_f64()
        };
        prev = cur;
        if change <= rel_tol {
            break;
        }
    }
    Ok((prev.to_f64(), change))
}

#[derive(Clone, Debug, Serialize)]
pub struct MonotoneDensityReport {
    pub condition_i_ok: bool,
    pub first_violation: Option<(usize, f64)>,
    pub condition_ii_ok: bool,
    pub cbf_route_ok: Option<bool>,
}

/// Check the two sufficient conditions for a non-increasing density:
/// (i) the summands (-lambda)^n f^(n)(lambda)/n! are non-increasing in n,
/// (ii) f vanishes at infinity. `cbf_route_ok` reports the equivalent
/// sign condition (-1)^n (lambda f(lambda))^(n+1) >= 0.
pub fn check_monotone_density(
    f: &Expression,
    n_max: usize,
    lambda_grid: &[f64],
    prec: &PrecisionConfig,
) -> Result<MonotoneDensityReport> {
    assert!(n_max + 1 <= prec.jet_order.max(n_max + 1));
    let bits = prec.significand_bits;
    let slack = Real::parse_decimal("1e-20", bits).unwrap();

    let mut condition_i_ok = true;
    let mut first_violation = None;
    'outer: for &lambda in lambda_grid {
        let lam = Real::from_f64(lambda, bits);
        let jet = eval_jet(f, &lam, n_max + 1, prec)?;
        let neg_lam = lam.neg();
        let mut pow = Real::one(bits);
        let mut prev = jet.coeffs[0].clone();
        for n in 1..=n_max + 1 {
            pow = pow.mul(&neg_lam);
            let cur = jet.coeffs[n].mul(&pow);
            // prev >= cur within absolute slack scaled by magnitude
            let tol = slack.mul(&prev.abs().max(&cur.abs()).max(&Real::one(bits)));
            if prev.add(&tol) < cur {
                condition_i_ok = false;
                first_violation = Some((n - 1, lambda));
                break 'outer;
            }
            prev = cur;
        }
    }

    // f(10^k) must decay to zero; slow (logarithmic) decay is accepted
    // through the ratio of the last two decades.
    let mut samples = Vec::new();
    for k in 0..=8 {
        let lam = Real::from_f64(10f64.powi(k), bits);
        let v = eval_jet(f, &lam, 0, prec)?.coeffs[0].to_f64();
        samples.push(v);
    }
    let decreasing = samples.windows(2).all(|w| w[1] <= w[0] + 1e-18);
    let vanishing = samples[8].abs() <= 0.9 * samples[4].abs().max(1e-300) || samples[8].abs() < 1e-12;
    let condition_ii_ok = decreasing && vanishing;

    // Remark's equivalent route: signs of (lambda f(lambda))^(n+1).
    let lf = crate::expr::mul(Expression::var(), f.clone());
    let mut cbf_ok = true;
    for &lambda in lambda_grid {
        let lam = Real::from_f64(lambda, bits);
        let jet = eval_jet(&lf, &lam, n_max + 1, prec)?;
        for n in 0..=n_max {
            let d = &jet.coeffs[n + 1]; // (lambda f)^(n+1)/(n+1)!
            let signed = if n % 2 == 0 { d.clone() } else { d.neg() };
            let tol = slack.mul(&d.abs().max(&Real::one(bits)));
            if signed < tol.neg() {
                cbf_ok = false;
            }
        }
    }

    Ok(MonotoneDensityReport {
        condition_i_ok,
        first_violation,
        condition_ii_ok,
        cbf_route_ok: Some(cbf_ok),
    })
}
