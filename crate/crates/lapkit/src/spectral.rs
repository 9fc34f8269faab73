//! Taylor data of a completely monotone function at the origin, the
//! abscissa of convergence, and the real-analytic extension to the left
//! of zero.
//!
//! The Taylor coefficients a_n = f^(n)(0+)/n! are limits along the
//! geometric sequence lambda_j = 2^-j. Each per-order sequence is either
//! accepted as finite (successive values stabilize), classified as
//! divergent (the common case being polynomial or logarithmic blow-up of
//! a derivative), or rejected as indeterminate. The abscissa comes from
//! the decay rate of the accepted coefficients; the extension evaluates
//! the series left of zero and the expression itself right of zero.

use crate::error::{Error, Result};
use crate::expr::Expression;
use crate::jet::{eval_jet, eval_jet_f64};
use crate::precision::PrecisionConfig;
use crate::real::Real;
use serde::Serialize;

/// Taylor coefficients of f at 0+ with per-order finiteness flags.
#[derive(Clone, Debug)]
pub struct TaylorAtZero {
    /// a_n = f^(n)(0+)/n!; meaningful only where `finite_flags[n]`.
    pub coeffs: Vec<Real>,
    pub finite_flags: Vec<bool>,
    /// Relative error estimate of each accepted coefficient.
    pub err_est: Vec<f64>,
    pub order: usize,
    pub prec: PrecisionConfig,
}

impl TaylorAtZero {
    pub fn all_finite(&self) -> bool {
        self.finite_flags.iter().all(|&f| f)
    }

    pub fn first_infinite(&self) -> Option<usize> {
        self.finite_flags.iter().position(|&f| !f)
    }

    /// Build directly from known coefficient data (used when a transform
    /// is supplied numerically, e.g. through its moment sequence).
    pub fn from_coeffs(coeffs: Vec<Real>, finite_flags: Vec<bool>, prec: PrecisionConfig) -> Self {
        assert_eq!(coeffs.len(), finite_flags.len());
        let order = coeffs.len() - 1;
        let err_est = vec![0.0; coeffs.len()];
        TaylorAtZero {
            coeffs,
            finite_flags,
            err_est,
            order,
            prec,
        }
    }
}

const J_MIN: u32 = 10;
const J_MAX: u32 = 60;
/// Acceptance tolerance for the limit sequences (three successive values).
const ACCEPT_RTOL: f64 = 1e-10;

/// Check the CM sign pattern (-1)^n f^(n) >= 0 by sampling jets.
///
/// Order zero is exempt: the machinery is also used on functions that are
/// completely monotone only up to an additive constant (their derivative
/// pattern is what matters for every formula downstream).
fn check_cm_signs(f: &Expression, max_order: usize, prec: &PrecisionConfig) -> Result<()> {
    let probes = [0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 100.0];
    let order = max_order.min(8).max(2);
    for &lam in &probes {
        let jet = eval_jet_f64(f, lam, order, prec)?;
        let scale = jet.coeffs[0].abs().to_f64().max(1e-300);
        for n in 1..=order {
            let v = jet.coeffs[n].to_f64();
            let signed = if n % 2 == 0 { v } else { -v };
            if signed < -1e-25 * scale.max(v.abs()) {
                return Err(Error::NotCompletelyMonotone { order: n, lambda: lam });
            }
        }
    }
    Ok(())
}

enum SeqClass {
    Finite { value: Real, rel_err: f64 },
    Infinite,
}

/// Classify one coefficient sequence v_j = a_n(2^-j), j = J_MIN..=j_last.
fn classify_sequence(vals: &[Real], bits: usize) -> Result<SeqClass> {
    let m = vals.len();
    debug_assert!(m >= 8);
    

    // Exactly-zero tail: the coefficient is zero.
    if vals[m - 4..].iter().all(|v| v.is_zero()) {
        return Ok(SeqClass::Finite {
            value: Real::zero(bits),
            rel_err: 0.0,
        });
    }

    // Overflow along the way is a clean divergence.
    if vals.iter().any(|v| v.is_inf()) {
        return Ok(SeqClass::Infinite);
    }

    // Stabilized: three successive values agree to ACCEPT_RTOL.
    let mut accepted = false;
    for j in 2..m {
        if vals[j].approx_eq_rel(&vals[j - 1], ACCEPT_RTOL)
            && vals[j - 1].approx_eq_rel(&vals[j - 2], ACCEPT_RTOL)
        {
            accepted = true;
            break;
        }
    }
    if accepted {
        // Error halves with lambda, so one Richardson step on the last
        // pair removes the leading term.
        let value = vals[m - 1]
            .mul(&Real::from_u64(2, bits))
            .sub(&vals[m - 2]);
        let rel = rel_diff(&vals[m - 1], &vals[m - 2]);
        return Ok(SeqClass::Finite {
            value,
            rel_err: rel,
        });
    }

    // Monotone growth by a factor >= 2 across five successive steps.
    let mono_tail = |k: usize| -> bool {
        (m - k..m).skip(1).all(|j| vals[j].abs() >= vals[j - 1].abs())
    };
    if m >= 6 && mono_tail(6) {
        let growth = vals[m - 1].abs().div(&vals[m - 6].abs()).to_f64();
        if growth >= 2.0 {
            return Ok(SeqClass::Infinite);
        }
    }

    // Difference-ratio classification. For a sequence converging like
    // c*lambda the ratio tends to 1/2; logarithmic divergence gives
    // constant differences (ratio near 1); polynomial divergence gives
    // ratio > 1.
    let tail = 9.min(m - 1);
    let mut ratios = Vec::new();
    let mut sign_consistent = true;
    let mut prev_diff: Option<Real> = None;
    for j in m - tail..m {
        let d = vals[j].sub(&vals[j - 1]);
        if let Some(pd) = &prev_diff {
            if pd.is_zero() || d.is_zero() {
                sign_consistent = false;
            } else {
                if d.is_negative() != pd.is_negative() {
                    sign_consistent = false;
                }
                ratios.push(d.div(pd).to_f64());
            }
        }
        prev_diff = Some(d);
    }
    if !sign_consistent || ratios.is_empty() {
        return Err(Error::IndeterminateLimit { order: 0 });
    }
    ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let rho = ratios[ratios.len() / 2];

    if rho <= 0.90 && rho > 0.0 {
        // Geometric tail: extrapolate the remaining error.
        let d_last = vals[m - 1].sub(&vals[m - 2]);
        let factor = Real::from_f64(rho / (1.0 - rho), bits);
        let value = vals[m - 1].add(&d_last.mul(&factor));
        let rel = rel_diff(&vals[m - 1], &vals[m - 2]) * rho / (1.0 - rho);
        return Ok(SeqClass::Finite {
            value,
            rel_err: rel.abs(),
        });
    }
    let increasing = mono_tail(tail);
    if rho >= 0.95 && increasing {
        return Ok(SeqClass::Infinite);
    }
    Err(Error::IndeterminateLimit { order: 0 })
}

fn rel_diff(a: &Real, b: &Real) -> f64 {
    let scale = a.abs().max(&b.abs());
    if scale.is_zero() {
        return 0.0;
    }
    a.sub(b).abs().div(&scale).to_f64()
}

/// Taylor data of `f` at 0+ to order `n_max`.
pub fn taylor_at_zero(f: &Expression, n_max: usize, prec: &PrecisionConfig) -> Result<TaylorAtZero> {
    check_cm_signs(f, n_max, prec)?;
    taylor_at_zero_unchecked(f, n_max, prec)
}

fn taylor_at_zero_unchecked(
    f: &Expression,
    n_max: usize,
    prec: &PrecisionConfig,
) -> Result<TaylorAtZero> {
    let bits = prec.significand_bits;

    // One jet per center; columns are the per-order limit sequences.
    let mut seqs: Vec<Vec<Real>> = vec![Vec::new(); n_max + 1];
    let mut settled: Vec<Option<bool>> = vec![None; n_max + 1]; // Some(finite?)
    for j in J_MIN..=J_MAX {
        let lam = Real::from_f64(2.0, bits).powi(-(j as i64));
        let jet = eval_jet(f, &lam, n_max, prec)?;
        for n in 0..=n_max {
            seqs[n].push(jet.coeffs[n].clone());
        }
        // Early break once every order has either stabilized or clearly
        // diverged, provided the centers are small enough that the final
        // values are sharp.
        if j >= 52 {
            let mut all_done = true;
            for n in 0..=n_max {
                if settled[n].is_some() {
                    continue;
                }
                let s = &seqs[n];
                let m = s.len();
                let stab = m >= 3
                    && s[m - 1].approx_eq_rel(&s[m - 2], ACCEPT_RTOL)
                    && s[m - 2].approx_eq_rel(&s[m - 3], ACCEPT_RTOL);
                let div = s[m - 1].is_inf()
                    || (m >= 6
                        && (m - 5..m).all(|i| s[i].abs() >= s[i - 1].abs())
                        && s[m - 1].abs().div(&s[m - 6].abs()).to_f64() >= 2.0);
                if stab {
                    settled[n] = Some(true);
                } else if div {
                    settled[n] = Some(false);
                } else {
                    all_done = false;
                }
            }
            if all_done {
                break;
            }
        }
    }

    let mut coeffs = Vec::with_capacity(n_max + 1);
    let mut finite_flags = Vec::with_capacity(n_max + 1);
    let mut err_est = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        match classify_sequence(&seqs[n], bits) {
            Ok(SeqClass::Finite { value, rel_err }) => {
                coeffs.push(value);
                finite_flags.push(true);
                err_est.push(rel_err);
            }
            Ok(SeqClass::Infinite) => {
                let negative = seqs[n].last().map(|v| v.is_negative()).unwrap_or(false);
                coeffs.push(Real::inf(bits, negative));
                finite_flags.push(false);
                err_est.push(f64::INFINITY);
            }
            Err(_) => return Err(Error::IndeterminateLimit { order: n }),
        }
    }

    // A divergent moment forces divergence of all higher moments; report
    // the flags that way regardless of how the tails classified.
    if let Some(first) = finite_flags.iter().position(|&f| !f) {
        for n in first..=n_max {
            finite_flags[n] = false;
        }
    }

    Ok(TaylorAtZero {
        coeffs,
        finite_flags,
        err_est,
        order: n_max,
        prec: *prec,
    })
}

/// Diagnostics accompanying an abscissa estimate.
#[derive(Clone, Debug, Serialize)]
pub struct Omega0Estimate {
    pub omega0: f64,
    pub radius_estimate: f64,
    /// |a_n|^(1/n) over the estimation window, for reporting.
    pub coeff_window: Vec<f64>,
}

/// Abscissa of convergence from Taylor data.
///
/// Divergent derivatives at 0+ force omega0 = 0 (the series branch of the
/// definition is empty). Otherwise the decay rate of |a_n| is estimated:
/// for alternating (CM) data the Richardson-corrected ratio of successive
/// magnitudes converges quadratically, with the windowed root test kept as
/// a fallback for irregular sign patterns. Growing magnitude ratios mean
/// radius zero (maps to 0); decaying ratios mean an entire extension
/// (negative infinity sentinel).
pub fn estimate_omega0(t: &TaylorAtZero) -> f64 {
    assert!(t.order >= 16, "estimate_omega0 needs Taylor order >= 16");
    estimate_omega0_full(t).omega0
}

pub fn estimate_omega0_full(t: &TaylorAtZero) -> Omega0Estimate {
    assert!(t.order >= 16, "estimate_omega0 needs Taylor order >= 16");
    let n = t.order;

    if !t.all_finite() {
        return Omega0Estimate {
            omega0: 0.0,
            radius_estimate: 0.0,
            coeff_window: Vec::new(),
        };
    }

    let ln_mag: Vec<f64> = t.coeffs.iter().map(|c| c.ln_abs_f64()).collect();
    let root_window: Vec<f64> = (n / 2..=n)
        .filter(|&k| k > 0 && ln_mag[k].is_finite())
        .map(|k| (ln_mag[k] / k as f64).exp())
        .collect();

    // Trailing zeros (finite Taylor polynomial) mean an entire function.
    if t.coeffs[n].is_zero() && t.coeffs[n - 1].is_zero() && t.coeffs[n - 2].is_zero() {
        return Omega0Estimate {
            omega0: f64::NEG_INFINITY,
            radius_estimate: f64::INFINITY,
            coeff_window: root_window,
        };
    }

    let alternating = (1..=n).all(|k| {
        let prev = if (k - 1) % 2 == 0 {
            !t.coeffs[k - 1].is_negative()
        } else {
            !t.coeffs[k - 1].is_positive()
        };
        let cur = if k % 2 == 0 {
            !t.coeffs[k].is_negative()
        } else {
            !t.coeffs[k].is_positive()
        };
        prev && cur
    });

    let med = |k0: usize, k1: usize| -> f64 {
        let mut r: Vec<f64> = (k0..k1)
            .filter(|&k| ln_mag[k].is_finite() && ln_mag[k + 1].is_finite())
            .map(|k| (ln_mag[k + 1] - ln_mag[k]).exp())
            .collect();
        if r.is_empty() {
            return f64::NAN;
        }
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        r[r.len() / 2]
    };

    let (inv_radius, growth) = if alternating {
        // Ratio test with a Richardson step between the window at N and
        // the window at N/2 (kills the O(1/n) bias of algebraic
        // singularities).
        let n2 = n - 3;
        let n1 = n / 2;
        let r_full = med(n - 6, n - 1);
        let r_half = med(n1.saturating_sub(3), n1 + 2);
        let est = if r_full.is_finite() && r_half.is_finite() && n2 > n1 {
            (n2 as f64 * r_full - n1 as f64 * r_half) / (n2 - n1) as f64
        } else {
            r_full
        };
        (est, r_full / r_half)
    } else {
        // Windowed-max root test over n in [N/2, N].
        let r_full = root_window.iter().cloned().fold(f64::NAN, f64::max);
        let half_window: Vec<f64> = (n / 4..=n / 2)
            .filter(|&k| k > 0 && ln_mag[k].is_finite())
            .map(|k| (ln_mag[k] / k as f64).exp())
            .collect();
        let r_half = half_window.iter().cloned().fold(f64::NAN, f64::max);
        (r_full, r_full / r_half)
    };

    if !inv_radius.is_finite() || growth.is_nan() {
        return Omega0Estimate {
            omega0: 0.0,
            radius_estimate: 0.0,
            coeff_window: root_window,
        };
    }
    if growth >= 1.35 {
        // Radius shrinking to zero: all derivatives finite but the series
        // diverges for every negative argument.
        return Omega0Estimate {
            omega0: 0.0,
            radius_estimate: 0.0,
            coeff_window: root_window,
        };
    }
    if growth <= 0.73 || inv_radius <= 0.0 {
        return Omega0Estimate {
            omega0: f64::NEG_INFINITY,
            radius_estimate: f64::INFINITY,
            coeff_window: root_window,
        };
    }
    Omega0Estimate {
        omega0: -1.0 / inv_radius,
        radius_estimate: 1.0 / inv_radius,
        coeff_window: root_window,
    }
}

/// Which function the extension's positive branch evaluates.
#[derive(Clone, Debug)]
enum BaseFn {
    /// The expression itself.
    Expr(Expression),
    /// The m-th derivative of the expression.
    DerivOf(Expression, usize),
}

/// Real-analytic extension of a CM function to (omega0, infinity).
#[derive(Clone, Debug)]
pub struct Extension {
    pub omega0: f64,
    pub taylor: TaylorAtZero,
    base: BaseFn,
    prec: PrecisionConfig,
}

impl Extension {
    pub fn prec(&self) -> &PrecisionConfig {
        &self.prec
    }

    /// Series length available for evaluation left of zero.
    pub fn series_order(&self) -> usize {
        self.taylor.order
    }
}

/// Extension of `f` with series length `prec.jet_order`.
pub fn extend(f: &Expression, prec: &PrecisionConfig) -> Result<Extension> {
    extend_with_order(f, prec.jet_order, prec)
}

pub fn extend_with_order(f: &Expression, n: usize, prec: &PrecisionConfig) -> Result<Extension> {
    let taylor = taylor_at_zero(f, n, prec)?;
    let omega0 = if n >= 16 {
        estimate_omega0(&taylor)
    } else {
        if taylor.all_finite() {
            f64::NEG_INFINITY
        } else {
            0.0
        }
    };
    Ok(Extension {
        omega0,
        taylor,
        base: BaseFn::Expr(f.clone()),
        prec: *prec,
    })
}

/// Extension of the m-th derivative of `f` (its Taylor data is a shift of
/// the Taylor data of `f`). Used for phi' and phi'' in the Bernstein layer,
/// where phi itself is Bernstein and only its derivative is CM.
pub fn extend_derivative(f: &Expression, m: usize, n: usize, prec: &PrecisionConfig) -> Result<Extension> {
    // Sign pattern of the derivative being extended: (-1)^k (f^(m))^(k) >= 0.
    let probes = [0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 100.0];
    for &lam in &probes {
        let jet = eval_jet_f64(f, lam, m + 8, prec)?;
        let scale = jet.coeffs[m].abs().to_f64().max(1e-300);
        for k in 1..=8usize {
            let v = jet.coeffs[m + k].to_f64();
            let signed = if k % 2 == 0 { v } else { -v };
            if signed < -1e-25 * scale.max(v.abs()) {
                return Err(Error::NotCompletelyMonotone { order: k, lambda: lam });
            }
        }
    }
    let base_taylor = taylor_at_zero_unchecked(f, n + m, prec)?;
    let bits = prec.significand_bits;
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut flags = Vec::with_capacity(n + 1);
    let mut errs = Vec::with_capacity(n + 1);
    for k in 0..=n {
        // (f^(m))^(k)(0+)/k! = binom(m+k, m) * a_{m+k} * m!/(m+k)!*... :
        // a'_k = a_{m+k} * (m+k)!/(m! k!) * m!/(m+k)! inverse — directly:
        // coefficient of the m-th derivative series is binom(m+k, k) * a_{m+k} * m!/m! ;
        // concretely a'_k = a_{m+k} * C(m+k, m) * m! / m! = a_{m+k} * C(m+k, k).
        let mut c = Real::one(bits);
        for i in 1..=m {
            c = c
                .mul(&Real::from_u64((k + i) as u64, bits))
                .div(&Real::from_u64(i as u64, bits));
        }
        coeffs.push(base_taylor.coeffs[m + k].mul(&c));
        flags.push(base_taylor.finite_flags[m + k]);
        errs.push(base_taylor.err_est[m + k]);
    }
    let taylor = TaylorAtZero {
        coeffs,
        finite_flags: flags,
        err_est: errs,
        order: n,
        prec: *prec,
    };
    let omega0 = estimate_omega0(&taylor);
    Ok(Extension {
        omega0,
        taylor,
        base: BaseFn::DerivOf(f.clone(), m),
        prec: *prec,
    })
}

impl Extension {
    /// f_e^(m)(lambda): series for lambda <= 0, jets on the base
    /// expression for lambda > 0.
    pub fn derivative(&self, m: usize, lambda: f64) -> Result<Real> {
        if lambda <= self.omega0 {
            return Err(Error::OutsideDomain {
                lambda,
                omega0: self.omega0,
            });
        }
        if lambda > 0.0 {
            self.derivative_base(m, lambda)
        } else {
            self.derivative_series(m, lambda).map(|(v, _)| v)
        }
    }

    pub fn value(&self, lambda: f64) -> Result<Real> {
        self.derivative(0, lambda)
    }

    fn derivative_base(&self, m: usize, lambda: f64) -> Result<Real> {
        let bits = self.prec.significand_bits;
        let lam = Real::from_f64(lambda, bits);
        match &self.base {
            BaseFn::Expr(e) => {
                let jet = eval_jet(e, &lam, m, &self.prec)?;
                Ok(jet.derivative(m))
            }
            BaseFn::DerivOf(e, mm) => {
                let jet = eval_jet(e, &lam, m + mm, &self.prec)?;
                Ok(jet.derivative(m + mm))
            }
        }
    }

    /// Series branch: value and a truncation bound.
    pub fn derivative_series(&self, m: usize, lambda: f64) -> Result<(Real, Real)> {
        if !self.taylor.all_finite() {
            // omega0 = 0 and the series branch is empty.
            return Err(Error::OutsideDomain {
                lambda,
                omega0: self.omega0,
            });
        }
        let bits = self.prec.significand_bits;
        let lam = Real::from_f64(lambda, bits);
        let n = self.taylor.order;
        // f^(m)(lambda) = m! * sum_k C(m+k, m) a_{m+k} lambda^k
        let mut sum = Real::zero(bits);
        let mut comp = Real::zero(bits); // Neumaier compensation
        let mut lam_pow = Real::one(bits);
        let mut binom = Real::one(bits);
        let mut last_term = Real::zero(bits);
        for k in 0..=(n - m) {
            if k > 0 {
                lam_pow = lam_pow.mul(&lam);
                // C(m+k, m) = C(m+k-1, m) * (m+k)/k
                binom = binom
                    .mul(&Real::from_u64((m + k) as u64, bits))
                    .div(&Real::from_u64(k as u64, bits));
            }
            let term = self.taylor.coeffs[m + k].mul(&binom).mul(&lam_pow);
            // compensated accumulation
            let t = sum.add(&term);
            let delta = if sum.abs() >= term.abs() {
                sum.sub(&t).add(&term)
            } else {
                term.sub(&t).add(&sum)
            };
            comp = comp.add(&delta);
            sum = t;
            last_term = term;
        }
        sum = sum.add(&comp);
        let mfact = Real::factorial(m, bits);
        let value = sum.mul(&mfact);

        // Geometric bound on the dropped tail.
        let q = if self.omega0.is_finite() && self.omega0 < 0.0 {
            (lambda / self.omega0).abs()
        } else {
            0.0
        };
        let bound = if q < 1.0 && q > 0.0 {
            last_term.abs().mul(&mfact).mul(&Real::from_f64(q / (1.0 - q), bits))
        } else {
            last_term.abs().mul(&mfact)
        };
        Ok((value, bound))
    }

    /// Relative mismatch of the two branches at lambda = 1e-6.
    pub fn branch_residual(&self) -> Result<f64> {
        if !self.taylor.all_finite() {
            return Ok(0.0);
        }
        let lam = 1e-6;
        let base = self.derivative_base(0, lam)?;
        let (series, _) = self.derivative_series(0, lam)?;
        let scale = base.abs().max(&series.abs());
        if scale.is_zero() {
            return Ok(0.0);
        }
        Ok(series.sub(&base).abs().div(&scale).to_f64())
    }

    /// Jet of f_e at an arbitrary point of the domain (series-derived for
    /// lambda <= 0), truncated at `order`.
    pub fn jet_at(&self, lambda: f64, order: usize) -> Result<crate::jet::Jet> {
        let bits = self.prec.significand_bits;
        if lambda <= self.omega0 {
            return Err(Error::OutsideDomain {
                lambda,
                omega0: self.omega0,
            });
        }
        if lambda > 0.0 {
            let lam = Real::from_f64(lambda, bits);
            match &self.base {
                BaseFn::Expr(e) => eval_jet(e, &lam, order, &self.prec),
                BaseFn::DerivOf(e, mm) => {
                    let jet = eval_jet(e, &lam, order + mm, &self.prec)?;
                    // shift down by mm: coefficients of the mm-th derivative
                    let mut coeffs = Vec::with_capacity(order + 1);
                    for k in 0..=order {
                        let mut c = Real::one(bits);
                        for i in 1..=*mm {
                            c = c
                                .mul(&Real::from_u64((k + i) as u64, bits))
                                .div(&Real::from_u64(i as u64, bits));
                        }
                        coeffs.push(jet.coeffs[k + mm].mul(&c));
                    }
                    Ok(crate::jet::Jet {
                        center: lam,
                        coeffs,
                    })
                }
            }
        } else {
            let mut coeffs = Vec::with_capacity(order + 1);
            for mth in 0..=order {
                let (v, _) = self.derivative_series(mth, lambda)?;
                coeffs.push(v.div(&Real::factorial(mth, bits)));
            }
            Ok(crate::jet::Jet {
                center: Real::from_f64(lambda, bits),
                coeffs,
            })
        }
    }
}
