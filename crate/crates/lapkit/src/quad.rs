//! Adaptive quadrature in f64: tanh-sinh on finite intervals, dyadic
//! segment sweeps for (0, infinity), and a cosine transform helper.
//!
//! Tanh-sinh clusters nodes double-exponentially at the endpoints, which
//! absorbs the integrable endpoint singularities showing up in kernel and
//! Levy-density integrands. Semi-infinite integrals walk dyadic intervals
//! outward from a caller-supplied scale (usually the saddle of the
//! integrand) until the segments stop contributing.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err: f64,
    pub evals: usize,
}

/// Tanh-sinh quadrature on [a, b].
///
/// Node positions are derived from the distance to the nearer endpoint,
/// so integrable endpoint singularities are sampled without cancellation.
pub fn tanh_sinh(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> QuadResult {
    debug_assert!(b > a);
    let half = 0.5 * (b - a);

    const MAX_LEVEL: u32 = 12;
    const T_MAX: f64 = 6.5;
    let mut evals = 0usize;

    // For t > 0: delta = 1 - tanh(pi/2 sinh t) = 2/(e^(2s)+1), the relative
    // distance of the node pair to its endpoint; weight as usual.
    let node = |t: f64| {
        let s = (std::f64::consts::FRAC_PI_2) * t.sinh();
        let delta = 2.0 / ((2.0 * s).exp() + 1.0);
        let ch = s.cosh();
        let w = if ch.is_finite() {
            (std::f64::consts::FRAC_PI_2) * t.cosh() / (ch * ch)
        } else {
            0.0
        };
        (delta, w)
    };

    let pair_sum = |t: f64, evals: &mut usize| -> f64 {
        let (delta, w) = node(t);
        let off = half * delta;
        if off <= 0.0 || w < 1e-300 {
            return 0.0;
        }
        let hi = b - off;
        let lo = a + off;
        let mut s = 0.0;
        if hi > a && hi < b {
            s += f(hi);
            *evals += 1;
        }
        if lo > a && lo < b {
            s += f(lo);
            *evals += 1;
        }
        w * s
    };

    let mut h = 1.0f64;
    let mut sum = {
        let center = 0.5 * (a + b);
        let mut s = f(center) * std::f64::consts::FRAC_PI_2;
        evals += 1;
        let mut k = 1;
        while h * k as f64 <= T_MAX {
            s += pair_sum(h * k as f64, &mut evals);
            k += 1;
        }
        s
    };
    let mut value = sum * h * half;
    let mut err = f64::INFINITY;

    for _level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut add = 0.0;
        let mut k = 1;
        while h * k as f64 <= T_MAX {
            add += pair_sum(h * k as f64, &mut evals);
            k += 2;
        }
        sum += add;
        let new_value = sum * h * half;
        err = (new_value - value).abs();
        value = new_value;
        if err <= rel_tol * value.abs().max(1e-300) {
            break;
        }
    }

    QuadResult {
        value,
        abs_err: err,
        evals,
    }
}

/// Integral over (0, infinity) by dyadic segments around `scale`.
///
/// Segments [scale*2^k, scale*2^(k+1)] are added outward in both
/// directions until their contribution falls below `trunc_eps` of the
/// running total several times in a row. The integrand is truncated
/// where it underflows relative to the observed peak.
pub fn integrate_semi_inf(
    f: &dyn Fn(f64) -> f64,
    scale: f64,
    rel_tol: f64,
) -> Result<QuadResult> {
    let scale = if scale.is_finite() && scale > 1e-280 {
        scale
    } else {
        1.0
    };
    let seg_tol = rel_tol * 0.25;
    let trunc_eps = (rel_tol * 1e-3).min(1e-12);
    const MAX_SEGS: i32 = 360;
    const STOP_AFTER: u32 = 3;

    let mut total = 0.0f64;
    let mut err = 0.0f64;
    let mut evals = 0usize;

    // upward from scale
    let mut quiet = 0u32;
    let mut zero_run = 0u32;
    let mut k = 0i32;
    loop {
        let a = scale * (2.0f64).powi(k);
        let b = scale * (2.0f64).powi(k + 1);
        if !b.is_finite() {
            break;
        }
        let r = tanh_sinh(f, a, b, seg_tol);
        total += r.value;
        err += r.abs_err;
        evals += r.evals;
        k += 1;
        if total == 0.0 {
            // nothing seen yet: keep searching for an off-scale peak,
            // but a long run of exact zeros means the integrand is zero
            zero_run += 1;
            if zero_run > 80 {
                break;
            }
            continue;
        }
        if r.value.abs() <= trunc_eps * total.abs() {
            quiet += 1;
            if quiet >= STOP_AFTER {
                break;
            }
        } else {
            quiet = 0;
        }
        if k > MAX_SEGS {
            return Err(Error::QuadratureFailure {
                msg: format!("upper tail did not decay by t = {b:.3e}"),
            });
        }
    }

    // downward from scale
    quiet = 0;
    zero_run = 0;
    k = 0;
    loop {
        let a = scale * (2.0f64).powi(-k - 1);
        let b = scale * (2.0f64).powi(-k);
        if a < 1e-300 {
            break;
        }
        let r = tanh_sinh(f, a, b, seg_tol);
        total += r.value;
        err += r.abs_err;
        evals += r.evals;
        k += 1;
        if total == 0.0 {
            zero_run += 1;
            if zero_run > 80 {
                break;
            }
            continue;
        }
        if r.value.abs() <= trunc_eps * total.abs() {
            quiet += 1;
            if quiet >= STOP_AFTER {
                break;
            }
        } else {
            quiet = 0;
        }
        if k > MAX_SEGS {
            return Err(Error::QuadratureFailure {
                msg: "lower end did not become integrable".into(),
            });
        }
    }

    Ok(QuadResult {
        value: total,
        abs_err: err,
        evals,
    })
}

/// Integral over [a, b] split at the given interior points.
pub fn integrate_split(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    splits: &[f64],
    rel_tol: f64,
) -> QuadResult {
    let mut pts = vec![a];
    for &s in splits {
        if s > a && s < b {
            pts.push(s);
        }
    }
    pts.push(b);
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut value = 0.0;
    let mut err = 0.0;
    let mut evals = 0;
    for w in pts.windows(2) {
        if w[1] > w[0] {
            let r = tanh_sinh(f, w[0], w[1], rel_tol);
            value += r.value;
            err += r.abs_err;
            evals += r.evals;
        }
    }
    QuadResult {
        value,
        abs_err: err,
        evals,
    }
}

/// 2 * integral over [0, cap] of k(x) cos(xi x) dx, segmented by both the
/// oscillation period and unit steps. Suitable for even kernels in d = 1.
pub fn cosine_transform(k: &dyn Fn(f64) -> f64, xi: f64, cap: f64, rel_tol: f64) -> QuadResult {
    let g = |x: f64| k(x) * (xi * x).cos();
    let seg = if xi.abs() > 1e-12 {
        (std::f64::consts::PI / (2.0 * xi.abs())).min(1.0)
    } else {
        1.0
    };
    let mut value = 0.0;
    let mut err = 0.0;
    let mut evals = 0;
    let mut a = 0.0f64;
    while a < cap {
        let b = (a + seg).min(cap);
        let r = tanh_sinh(&g, a, b, rel_tol);
        value += r.value;
        err += r.abs_err;
        evals += r.evals;
        a = b;
    }
    QuadResult {
        value: 2.0 * value,
        abs_err: 2.0 * err,
        evals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = tanh_sinh(&|x| x * x, 0.0, 1.0, 1e-12);
        assert!((r.value - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularity() {
        // integral of 1/sqrt(x) over (0,1) = 2
        let r = tanh_sinh(&|x| 1.0 / x.sqrt(), 0.0, 1.0, 1e-12);
        assert!((r.value - 2.0).abs() < 1e-10, "got {}", r.value);
    }

    #[test]
    fn gaussian_over_half_line() {
        let r = integrate_semi_inf(&|t| (-t * t).exp(), 1.0, 1e-10).unwrap();
        let expect = 0.5 * std::f64::consts::PI.sqrt();
        assert!((r.value - expect).abs() < 1e-10);
    }

    #[test]
    fn exponential_with_inverse_singularity() {
        // integral of t^(-1/2) e^-t = Gamma(1/2) = sqrt(pi)
        let r = integrate_semi_inf(&|t| t.powf(-0.5) * (-t).exp(), 1.0, 1e-10).unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn bessel_type_identity() {
        // integral of (4 pi t)^(-1/2) e^(-q/t - p t) dt = e^(-2 sqrt(pq)) / (2 sqrt(p))
        let p = 1.0;
        let q = 0.25;
        let f = |t: f64| (4.0 * std::f64::consts::PI * t).powf(-0.5) * (-q / t - p * t).exp();
        let r = integrate_semi_inf(&f, q.sqrt() / p.sqrt(), 1e-11).unwrap();
        let expect = (-2.0 * (p * q).sqrt()).exp() / (2.0 * p.sqrt());
        assert!(((r.value - expect) / expect).abs() < 1e-10, "got {}", r.value);
    }

    #[test]
    fn off_scale_peak_is_found() {
        // peak near t = 1000 but scale hint 1
        let f = |t: f64| (-(t - 1000.0) * (t - 1000.0) / 100.0).exp();
        let r = integrate_semi_inf(&f, 1.0, 1e-9).unwrap();
        let expect = (100.0f64 * std::f64::consts::PI).sqrt();
        assert!(((r.value - expect) / expect).abs() < 1e-8, "got {}", r.value);
    }

    #[test]
    fn divergent_tail_is_an_error() {
        let r = integrate_semi_inf(&|_t| 1.0, 1.0, 1e-9);
        assert!(r.is_err());
    }

    #[test]
    fn cosine_transform_of_exponential() {
        // 2 int_0^inf e^-x cos(xi x) = 2/(1+xi^2)
        for xi in [0.0, 0.5, 1.0, 2.0] {
            let r = cosine_transform(&|x| (-x).exp(), xi, 60.0, 1e-11);
            let expect = 2.0 / (1.0 + xi * xi);
            assert!(
                (r.value - expect).abs() < 1e-9,
                "xi={xi}: got {}, expect {expect}",
                r.value
            );
        }
    }
}
