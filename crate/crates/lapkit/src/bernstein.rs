//! Bernstein-function layer: representation triples (a, b, mu), the decay
//! rate beta of the Levy density, the star transform lambda/phi, the
//! shift test for complete monotonicity of e^(beta t) mu(t), and the
//! two-sided Levy-density envelopes.
//!
//! Everything reduces to the CM machinery applied to phi': its
//! representing measure is b delta_0 + t mu(dt), so the density bounds
//! for phi' translate verbatim into bounds for mu with one extra power
//! of t.

use crate::error::{Error, Result};
use crate::expr::{self, Expression};
use crate::jet::{eval_jet_f64, eval_value};
use crate::precision::PrecisionConfig;
use crate::quad;
use crate::real::Real;
use crate::spectral::{self, Extension};
use crate::tails::{self, EnvelopeCertificate};
use std::sync::Arc;

/// Post-Widder density of the representing measure of phi' - b, i.e.
/// t mu(t), computed from jets of phi (order n+1).
pub fn density_of_phi_prime(
    phi: &Expression,
    drift: f64,
    t: f64,
    n: usize,
    prec: &PrecisionConfig,
) -> Result<Real> {
    let bits = prec.significand_bits;
    let lam = Real::from_u64(n as u64, bits).div(&Real::from_f64(t, bits));
    let jet = crate::jet::eval_jet(phi, &lam, n + 1, prec)?;
    // (phi')^(n)(lam)/n! = (n+1) coeffs[n+1]; subtract the drift atom at order 0
    let mut c = jet.coeffs[n + 1].mul(&Real::from_u64((n + 1) as u64, bits));
    if n == 0 {
        c = c.sub(&Real::from_f64(drift, bits));
    }
    let v = lam.powi((n + 1) as i64).mul(&c);
    Ok(if n % 2 == 0 { v } else { v.neg() })
}

/// Adaptive Richardson ladder over `density_of_phi_prime`.
pub fn density_of_phi_prime_adaptive(
    phi: &Expression,
    drift: f64,
    t: f64,
    rel_tol: f64,
    n_max: usize,
    prec: &PrecisionConfig,
) -> Result<f64> {
    let bits = prec.significand_bits;
    let richardson = |n: usize| -> Result<Real> {
        let lo = density_of_phi_prime(phi, drift, t, n / 2, prec)?;
        let hi = density_of_phi_prime(phi, drift, t, n, prec)?;
        Ok(hi.mul(&Real::from_u64(2, bits)).sub(&lo))
    };
    let mut n = 32usize;
    let mut prev = richardson(n)?;
    while 2 * n <= n_max {
        n *= 2;
        let cur = richardson(n)?;
        let scale = cur.abs().max(&prev.abs());
        let change = if scale.is_zero() {
            0.0
        } else {
            cur.sub(&prev).abs().div(&scale).to_f64()
        };
        prev = cur;
        if change <= rel_tol {
            break;
        }
    }
    Ok(prev.to_f64())
}

/// Representation triple of a Bernstein function.
#[derive(Clone, Debug)]
pub struct BernsteinTriple {
    pub a: f64,
    pub b: f64,
    pub levy: LevyDensity,
    pub phi: Expression,
}

/// Density of the Levy measure: closed form where known, Post-Widder
/// recovery from phi' otherwise.
#[derive(Clone)]
pub enum LevyDensity {
    ClosedForm(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    PostWidder { phi: Expression, drift: f64, prec: PrecisionConfig },
    Zero,
}

impl LevyDensity {
    pub fn eval(&self, t: f64) -> Result<f64> {
        match self {
            LevyDensity::ClosedForm(f) => Ok(f(t)),
            LevyDensity::Zero => Ok(0.0),
            LevyDensity::PostWidder { phi, drift, prec } => {
                let v = density_of_phi_prime_adaptive(phi, *drift, t, 1e-5, 512, prec)?;
                Ok(v / t)
            }
        }
    }
}

impl std::fmt::Debug for LevyDensity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LevyDensity::ClosedForm(_) => write!(f, "ClosedForm"),
            LevyDensity::PostWidder { .. } => write!(f, "PostWidder"),
            LevyDensity::Zero => write!(f, "Zero"),
        }
    }
}

/// Sign pattern check: phi >= 0 and phi' completely monotone (sampled).
pub fn check_bernstein(phi: &Expression, prec: &PrecisionConfig) -> Result<()> {
    let probes = [0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 100.0];
    for &lam in &probes {
        let jet = eval_jet_f64(phi, lam, 9, prec)?;
        if jet.coeffs[0].to_f64() < -1e-25 {
            return Err(Error::NotBernstein {
                msg: format!("phi({lam}) = {} < 0", jet.coeffs[0].to_f64()),
            });
        }
        let scale = jet.coeffs[1].abs().to_f64().max(1e-300);
        for n in 1..=9usize {
            let v = jet.coeffs[n].to_f64();
            let signed = if (n - 1) % 2 == 0 { v } else { -v };
            if signed < -1e-25 * scale.max(v.abs()) {
                return Err(Error::NotBernstein {
                    msg: format!("sign violation at derivative {n}, lambda = {lam}"),
                });
            }
        }
    }
    Ok(())
}

/// Killing rate a = phi(0+), drift b = lim phi(lambda)/lambda, and the
/// Levy density recovered through phi'.
pub fn triple_of(phi: &Expression, prec: &PrecisionConfig) -> Result<BernsteinTriple> {
    check_bernstein(phi, prec)?;
    let bits = prec.significand_bits;

    // a = phi(0+): limit along 2^-j, deep enough that even sqrt-type
    // branches fall below the zero threshold after one Richardson step.
    let v1 = eval_value(phi, &Real::from_f64(2f64.powi(-100), bits), prec)?;
    let v2 = eval_value(phi, &Real::from_f64(2f64.powi(-101), bits), prec)?;
    let a = v2.mul(&Real::from_u64(2, bits)).sub(&v1).to_f64();
    let a = if a.abs() < 1e-12 { 0.0 } else { a };

    // b: lambda-doubling extrapolation of phi(lambda)/lambda. Two
    // Richardson levels cancel both the k/2^k and the 1/2^k transients
    // of logarithmic growth.
    let s = |k: i32| -> Result<f64> {
        let lam = Real::from_f64(2f64.powi(k), bits);
        Ok(eval_value(phi, &lam, prec)?.div(&lam).to_f64())
    };
    let (s38, s39, s40) = (s(38)?, s(39)?, s(40)?);
    let r38 = 2.0 * s39 - s38;
    let r39 = 2.0 * s40 - s39;
    let b = 2.0 * r39 - r38;
    let b = if b.abs() < 1e-12 { 0.0 } else { b };

    let levy = LevyDensity::PostWidder {
        phi: phi.clone(),
        drift: b,
        prec: *prec,
    };
    Ok(BernsteinTriple {
        a,
        b,
        levy,
        phi: phi.clone(),
    })
}

/// beta = -omega0 of phi', the exponential decay rate of the Levy density.
pub fn beta_of(phi: &Expression, prec: &PrecisionConfig) -> Result<f64> {
    beta_of_with_order(phi, prec.jet_order.max(64), prec)
}

pub fn beta_of_with_order(phi: &Expression, n: usize, prec: &PrecisionConfig) -> Result<f64> {
    check_bernstein(phi, prec)?;
    let ext = spectral::extend_derivative(phi, 1, n, prec)?;
    Ok(if ext.omega0.is_finite() { -ext.omega0 } else { f64::INFINITY })
}

/// The star transform lambda / phi(lambda).
pub fn star(phi: &Expression) -> Expression {
    expr::div(Expression::var(), phi.clone())
}

/// Complete-Bernstein shift test: for each a, check the Bernstein sign
/// pattern of h_a(lambda) = phi_e(lambda + a) - phi_e(a) via jets of the
/// extension, to order 12 on a log grid.
pub fn shift_test(
    phi: &Expression,
    a_values: &[f64],
    prec: &PrecisionConfig,
) -> Result<bool> {
    check_bernstein(phi, prec)?;
    let ext1 = spectral::extend_derivative(phi, 1, prec.jet_order.max(64), prec)?;
    let beta = -ext1.omega0;
    for &a in a_values {
        if a <= -beta {
            return Err(Error::NotBernstein {
                msg: format!("shift {a} outside (-beta, inf) with beta = {beta}"),
            });
        }
        for i in 0..10 {
            let lam = 10f64.powf(-2.0 + 4.0 * i as f64 / 9.0);
            // h_a^[m](lam) = phi_e^(m)(lam + a) for m >= 1
            let arg = lam + a;
            for m in 1..=12usize {
                // phi_e^(m) = (phi')_e^(m-1)
                let d = ext1.derivative(m - 1, arg)?;
                let v = d.to_f64();
                let signed = if (m - 1) % 2 == 0 { v } else { -v };
                if signed < -1e-20 * v.abs().max(1.0) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Levy-density envelope data for phi: rate beta and the constants of the
/// two-sided bound mu(t) <=> c t^-3 |phi_e''(1/t - beta)| e^(-beta t).
#[derive(Clone, Debug)]
pub struct LevyEnvelope {
    pub beta: f64,
    pub certificate: EnvelopeCertificate,
    ext1: Extension,
}

impl LevyEnvelope {
    /// (lower, upper) bounds on mu(t); lower only in the valid range.
    pub fn eval(&self, t: f64) -> Result<(Option<f64>, f64)> {
        let core = self.core(t)?;
        let upper = self.certificate.c1 * core;
        let lower = if t > self.certificate.valid_t_range.0 && t < self.certificate.valid_t_range.1
        {
            Some(self.certificate.c2 * core)
        } else {
            None
        };
        Ok((lower, upper))
    }

    /// t^-3 |phi_e''(1/t - beta)| e^(-beta t).
    pub fn core(&self, t: f64) -> Result<f64> {
        let arg = 1.0 / t - self.beta;
        let d = self.ext1.derivative(1, arg)?; // phi''_e
        Ok(t.powi(-3) * d.abs().to_f64() * (-self.beta * t).exp())
    }

    pub fn phi_prime_extension(&self) -> &Extension {
        &self.ext1
    }
}

/// Build the Levy envelope of phi: fit the ratio condition on phi_e''
/// (the machinery for f = phi', whose representing density is t mu(t)).
pub fn levy_envelope(
    phi: &Expression,
    mu: Option<&LevyDensity>,
    series_order: usize,
    prec: &PrecisionConfig,
) -> Result<LevyEnvelope> {
    check_bernstein(phi, prec)?;
    let ext1 = spectral::extend_derivative(phi, 1, series_order, prec)?;
    let beta = -ext1.omega0;
    if !beta.is_finite() {
        return Err(Error::A3Fit {
            msg: "phi' has omega0 = -infinity; no polynomial-type envelope".into(),
        });
    }
    // Monotonicity hypothesis: e^(beta t) mu(t) non-increasing, checked on
    // the density of phi' (which is t mu(t)) when a density is available.
    if let Some(mu) = mu {
        let grid: Vec<f64> = (0..33)
            .map(|i| 10f64.powf(-2.0 + 4.0 * i as f64 / 32.0))
            .collect();
        let density = |t: f64| mu.eval(t).map(|m| m * t).unwrap_or(f64::NAN);
        if !tails::check_a2(&density, -beta, &grid)? {
            return Err(Error::HypothesisFailed {
                which: "e^(beta t) mu(t) non-increasing",
                witness: (0.0, 0.0),
            });
        }
    }
    let cert = tails::fit_a3(&ext1, 0.0, f64::INFINITY, 1e4)?;
    let env = tails::envelope(&ext1, &cert);
    Ok(LevyEnvelope {
        beta,
        certificate: env,
        ext1,
    })
}

/// phi_1 = log(1+x), phi_{n+1} = phi_n o phi_1.
pub fn iterated_log(n: usize) -> Expression {
    assert!(n >= 1);
    let base = Expression::parse("log(1+x)").expect("static expression");
    let mut cur = base.clone();
    for _ in 1..n {
        cur = cur.compose(&base);
    }
    cur
}

/// Solve phi_e(lambda) = y on (-beta, 0] by bisection (phi_e is increasing).
pub fn invert_extension(
    ext_phi1: &Extension,
    phi: &Expression,
    beta: f64,
    y: f64,
    prec: &PrecisionConfig,
) -> Result<f64> {
    // phi_e(lambda) = phi(0+) + integral of phi_e'; evaluate through the
    // Taylor data of phi': phi_e(lambda) = sum_n a'_{n-1}/n lambda^n.
    let bits = prec.significand_bits;
    let phi_at = |lam: f64| -> Result<f64> {
        if lam > 0.0 {
            Ok(eval_value(phi, &Real::from_f64(lam, bits), prec)?.to_f64())
        } else {
            // integrate the phi' series term by term
            let t = &ext_phi1.taylor;
            let mut sum = Real::zero(bits);
            let mut pow = Real::from_f64(lam, bits);
            for k in 0..=t.order {
                let term = t.coeffs[k]
                    .mul(&pow)
                    .div(&Real::from_u64((k + 1) as u64, bits));
                sum = sum.add(&term);
                pow = pow.mul(&Real::from_f64(lam, bits));
            }
            Ok(sum.to_f64())
        }
    };
    let mut lo = -beta * (1.0 - 1e-9);
    let mut hi = 0.0;
    let flo = phi_at(lo)?;
    let fhi = phi_at(hi)?;
    if !(flo <= y && y <= fhi) {
        return Err(Error::Domain {
            op: "invert_extension",
            msg: format!("target {y} outside [{flo}, {fhi}]"),
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi_at(mid)? < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Reconstruct phi(lambda) from its triple by quadrature of
/// a + b lambda + integral (1 - e^(-lambda t)) mu(t) dt.
pub fn reconstruct_phi(triple: &BernsteinTriple, lambda: f64) -> Result<f64> {
    let mu = triple.levy.clone();
    let f = move |t: f64| {
        let m = mu.eval(t).unwrap_or(f64::NAN);
        (1.0 - (-lambda * t).exp()) * m
    };
    let r = quad::integrate_semi_inf(&f, 1.0 / lambda.max(1e-6), 1e-9)?;
    Ok(triple.a + triple.b * lambda + r.value)
}

/// Gamma function (Lanczos, g = 7), enough for catalog constants.
pub fn gamma_fn(x: f64) -> f64 {
    const G: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma_fn(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut a = G[0];
        let t = x + 7.5;
        for (i, &g) in G.iter().enumerate().skip(1) {
            a += g / (x + i as f64);
        }
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    #[test]
    fn triple_of_log() {
        // phi = log(1+x): a = 0, b = 0, mu(t) = e^-t / t.
        let phi = Expression::parse("log(1+x)").unwrap();
        let t = triple_of(&phi, &prec()).unwrap();
        assert_eq!(t.a, 0.0);
        assert_eq!(t.b, 0.0);
        for tt in [0.5, 1.0, 3.0] {
            let mu = t.levy.eval(tt).unwrap();
            let expect = (-tt).exp() / tt;
            assert!(
                ((mu - expect) / expect).abs() < 1e-3,
                "mu({tt}) = {mu}, expect {expect}"
            );
        }
    }

    #[test]
    fn triple_of_identity_is_pure_drift() {
        let phi = Expression::parse("x").unwrap();
        let t = triple_of(&phi, &prec()).unwrap();
        assert_eq!(t.a, 0.0);
        assert!((t.b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn triple_of_sqrt_matches_stable_density() {
        // phi = x^(1/2): mu(t) = t^(-3/2) / (2 sqrt(pi)).
        let phi = Expression::parse("x^0.5").unwrap();
        let t = triple_of(&phi, &prec()).unwrap();
        assert_eq!(t.a, 0.0);
        assert_eq!(t.b, 0.0);
        for tt in [0.3, 1.0, 4.0] {
            let mu = t.levy.eval(tt).unwrap();
            let expect = tt.powf(-1.5) / (2.0 * std::f64::consts::PI.sqrt());
            assert!(
                ((mu - expect) / expect).abs() < 1e-3,
                "mu({tt}) = {mu}, expect {expect}"
            );
        }
    }

    #[test]
    fn beta_of_iterated_log() {
        let phi = iterated_log(2);
        let b = beta_of_with_order(&phi, 128, &prec()).unwrap();
        let expect = 1.0 - (-1.0f64).exp();
        assert!((b - expect).abs() < 1e-3, "beta = {b}");
    }

    #[test]
    fn beta_of_relativistic() {
        let phi = Expression::parse("(x+1)^0.5-1").unwrap();
        let b = beta_of_with_order(&phi, 128, &prec()).unwrap();
        assert!((b - 1.0).abs() < 1e-3, "beta = {b}");
    }

    #[test]
    fn beta_of_sqrt_is_zero() {
        let phi = Expression::parse("x^0.5").unwrap();
        let b = beta_of(&phi, &prec()).unwrap();
        assert_eq!(b, 0.0);
    }

    #[test]
    fn star_transform() {
        let phi = Expression::parse("x").unwrap();
        let s = star(&phi);
        let v = eval_value(&s, &Real::from_f64(3.0, 256), &prec()).unwrap();
        assert_eq!(v.to_f64(), 1.0);
        // x^(1/2) is a fixed point of the star transform
        let phi2 = Expression::parse("x^0.5").unwrap();
        let s2 = star(&phi2);
        for lam in [0.3, 1.7] {
            let v = eval_value(&s2, &Real::from_f64(lam, 256), &prec()).unwrap();
            assert!((v.to_f64() - lam.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn star_of_log_has_cm_derivative_pattern() {
        // x/log(1+x): jet sign sampling to order 12
        let phi = Expression::parse("log(1+x)").unwrap();
        let s = star(&phi);
        for lam in [0.1, 1.0, 10.0] {
            let jet = eval_jet_f64(&s, lam, 12, &prec()).unwrap();
            for n in 1..=12usize {
                let v = jet.coeffs[n].to_f64();
                let signed = if (n - 1) % 2 == 0 { v } else { -v };
                assert!(signed >= -1e-20 * v.abs().max(1.0), "n={n} lam={lam}");
            }
        }
    }

    #[test]
    fn star_involution() {
        let phi = Expression::parse("log(1+x)").unwrap();
        let ss = star(&star(&phi));
        for lam in [0.2, 1.0, 5.0, 40.0] {
            let v = eval_value(&ss, &Real::from_f64(lam, 256), &prec())
                .unwrap()
                .to_f64();
            let expect = eval_value(&phi, &Real::from_f64(lam, 256), &prec())
                .unwrap()
                .to_f64();
            assert!(((v - expect) / expect).abs() < 1e-12);
        }
    }

    #[test]
    fn shift_test_iterated_log() {
        let phi = iterated_log(2);
        let ok = shift_test(&phi, &[-0.5, 0.0, 1.0], &prec()).unwrap();
        assert!(ok);
    }

    #[test]
    fn shift_test_relativistic() {
        let phi = Expression::parse("(x+1)^0.5-1").unwrap();
        let ok = shift_test(&phi, &[-0.9, 0.0, 2.0], &prec()).unwrap();
        assert!(ok);
    }

    #[test]
    fn shift_test_rejects_non_bernstein() {
        let phi = Expression::parse("x^2").unwrap();
        assert!(matches!(
            shift_test(&phi, &[0.0], &prec()),
            Err(Error::NotBernstein { .. })
        ));
    }

    #[test]
    fn levy_envelope_of_log_sandwiches_exactly() {
        // phi = log(1+x): |phi_e''(1/t - 1)| = t^2, so the core equals
        // e^-t / t = mu(t) and the ratio is exactly 1.
        let phi = Expression::parse("log(1+x)").unwrap();
        let mu = LevyDensity::ClosedForm(Arc::new(|t: f64| (-t).exp() / t));
        let env = levy_envelope(&phi, Some(&mu), 256, &prec()).unwrap();
        assert!((env.beta - 1.0).abs() < 1e-6);
        for t in [0.01, 0.5, 2.0, 10.0, 20.0] {
            let core = env.core(t).unwrap();
            let m = (-t).exp() / t;
            assert!(
                ((m / core) - 1.0).abs() < 2e-4,
                "t={t}: core {core}, mu {m}"
            );
            let (lower, upper) = env.eval(t).unwrap();
            assert!(m <= upper && m >= lower.unwrap());
        }
    }

    #[test]
    fn iterated_log_expressions() {
        assert_eq!(iterated_log(1), Expression::parse("log(1+x)").unwrap());
        assert_eq!(
            iterated_log(2),
            Expression::parse("log(1+log(1+x))").unwrap()
        );
    }

    #[test]
    fn beta_sequence_decreases_and_matches_inverse() {
        // beta_{n+1} = 1 - e^(-beta_n); the root of phi_n = -1 equals
        // -beta_{n+1}, computed here numerically rather than assumed.
        let mut prev_beta = f64::INFINITY;
        let mut betas = Vec::new();
        for n in 1..=4 {
            let phi = iterated_log(n);
            let b = beta_of_with_order(&phi, 96, &prec()).unwrap();
            assert!(b < prev_beta, "beta_{n} = {b} not decreasing");
            prev_beta = b;
            betas.push(b);
        }
        // recurrence check
        for w in betas.windows(2) {
            let pred = 1.0 - (-w[0]).exp();
            assert!((w[1] - pred).abs() < 5e-3, "recurrence: {w:?} vs {pred}");
        }
        // inverse relation for n = 2
        let phi2 = iterated_log(2);
        let ext1 = spectral::extend_derivative(&phi2, 1, 96, &prec()).unwrap();
        let root = invert_extension(&ext1, &phi2, betas[1], -1.0, &prec()).unwrap();
        assert!(
            (root + betas[2]).abs() < 5e-3,
            "phi_2^-1(-1) = {root} vs -beta_3 = {}",
            -betas[2]
        );
    }

    #[test]
    fn triple_round_trip_closed_forms() {
        // reconstruct phi from (a, b, mu) for the closed-form catalog
        let cases: Vec<(Expression, LevyDensity)> = vec![
            (
                Expression::parse("log(1+x)").unwrap(),
                LevyDensity::ClosedForm(Arc::new(|t: f64| (-t).exp() / t)),
            ),
            (
                Expression::parse("x^0.5").unwrap(),
                LevyDensity::ClosedForm(Arc::new(|t: f64| {
                    t.powf(-1.5) / (2.0 * std::f64::consts::PI.sqrt())
                })),
            ),
        ];
        for (phi, levy) in cases {
            let triple = BernsteinTriple {
                a: 0.0,
                b: 0.0,
                levy,
                phi: phi.clone(),
            };
            for lam in [0.01, 0.5, 3.0, 50.0] {
                let got = reconstruct_phi(&triple, lam).unwrap();
                let expect = eval_value(&phi, &Real::from_f64(lam, 256), &prec())
                    .unwrap()
                    .to_f64();
                assert!(
                    ((got - expect) / expect).abs() < 1e-6,
                    "{}: lambda={lam}, got {got}, expect {expect}",
                    phi.print()
                );
            }
        }
    }

    #[test]
    fn eq_4_2_identity_for_log() {
        // phi'(lambda) - b = integral e^(-lambda t) t mu(t) dt
        let phi = Expression::parse("log(1+x)").unwrap();
        for lam in [0.5, 2.0, 10.0] {
            let lhs = eval_jet_f64(&phi, lam, 1, &prec()).unwrap().coeffs[1].to_f64();
            let r = quad::integrate_semi_inf(&|t: f64| (-lam * t).exp() * (-t).exp(), 1.0, 1e-9)
                .unwrap();
            assert!(((lhs - r.value) / lhs).abs() < 1e-6);
        }
    }

    #[test]
    fn gamma_function_spot_values() {
        assert!((gamma_fn(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        assert!((gamma_fn(5.0) - 24.0).abs() < 1e-10);
        assert!((gamma_fn(1.5) - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }
}
