//! Conserved quantities along extremals.
//!
//! The Lagrangian does not depend on the polar angle, so
//! `J = r^2 |r - 1|^alpha / sqrt(r^2 + r'^2)` is constant for every alpha.
//! For integer alpha the same information can be written as
//! `r'^2 = f(r) g(r)` with `f = r^4 (r - 1)^(2 alpha)` and `g` solving
//! `g' = 2((alpha + 1) r - 1) / (r^3 (r - 1)^(2 alpha + 1))`.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::model::{check_regular, PowerParams};
use crate::quadrature;

/// Most negative alpha for which [`g_polynomial`] is exact in `i64`.
pub const MIN_NEGATIVE_ALPHA: i32 = -30;

/// Angular momentum `J`.
pub fn momentum(params: &PowerParams, r: f64, dr: f64) -> Result<f64> {
    check_regular(r)?;
    Ok(r * r * params.distance_power(r) / r.hypot(dr))
}

/// `J` evaluated from a log-mode sample, with `q = 1/r'`.
fn momentum_from_q(params: &PowerParams, r: f64, q: f64) -> f64 {
    r * r * params.distance_power(r) * q.abs() / (r * r * q * q + 1.0).sqrt()
}

/// `max |J(s) - J(0)| / |J(0)|` over the samples and the log-mode tail.
pub fn momentum_drift(traj: &Trajectory) -> f64 {
    let p = traj.params();
    let j0 = traj.r0() * p.distance_power(traj.r0());
    let regular = traj
        .samples()
        .iter()
        .map(|s| (s.r * s.r * p.distance_power(s.r) / s.r.hypot(s.dr) - j0).abs());
    let tail = traj.tail().iter().map(|t| (momentum_from_q(p, t.r, t.q) - j0).abs());
    regular.chain(tail).fold(0.0, f64::max) / j0.abs()
}

/// The factorization `r'^2 = f(r) g(r)` for integer alpha.
///
/// `g = c - 1/(r^2 (r - 1)^(2 alpha))` for alpha > 0 and
/// `g = c - 1/r^2 - 2 alpha / r + P(r)` for alpha < 0.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstIntegralForm {
    alpha: i32,
    /// Coefficients of `P` in ascending degree; empty for alpha > 0.
    p: Vec<Ratio<i64>>,
}

impl FirstIntegralForm {
    pub fn new(params: &PowerParams) -> Result<Self> {
        let alpha = params
            .integer_alpha()
            .ok_or_else(|| Error::Unsupported(format!("no closed first integral for alpha = {}", params.alpha())))?;
        let p = if alpha < 0 { g_polynomial(alpha)? } else { Vec::new() };
        Ok(Self { alpha, p })
    }

    pub fn alpha(&self) -> i32 {
        self.alpha
    }

    /// Coefficients of `P` in ascending degree (alpha < 0 only).
    pub fn p_coefficients(&self) -> &[Ratio<i64>] {
        &self.p
    }

    /// `f(r) = r^4 (r - 1)^(2 alpha)`.
    pub fn f(&self, r: f64) -> f64 {
        r.powi(4) * (r - 1.0).powi(2 * self.alpha)
    }

    /// `g(r) - c`.
    pub fn g_tail(&self, r: f64) -> f64 {
        let a = self.alpha;
        if a > 0 {
            -1.0 / (r * r * (r - 1.0).powi(2 * a))
        } else {
            -1.0 / (r * r) - 2.0 * a as f64 / r + horner(&self.p, r)
        }
    }

    /// The constant `c` for which `g(r0) = 0`, i.e. `r'(0) = 0`.
    pub fn g_constant(&self, r0: f64) -> f64 {
        -self.g_tail(r0)
    }

    pub fn g(&self, r0: f64, r: f64) -> f64 {
        self.g_constant(r0) + self.g_tail(r)
    }

    /// Derivative of the represented `g`.
    pub fn g_derivative(&self, r: f64) -> f64 {
        let a = self.alpha;
        if a > 0 {
            let d = r - 1.0;
            let k = 2 * a;
            (2.0 * d + k as f64 * r) / (r.powi(3) * d.powi(k + 1))
        } else {
            let dp: f64 = self
                .p
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, c)| acc * r + k as f64 * ratio_to_f64(c));
            2.0 / r.powi(3) + 2.0 * a as f64 / (r * r) + dp
        }
    }
}

/// Right-hand side of the ODE for `g`.
pub fn g_ode_rhs(alpha: i32, r: f64) -> f64 {
    2.0 * ((alpha as f64 + 1.0) * r - 1.0) / (r.powi(3) * (r - 1.0).powi(2 * alpha + 1))
}

fn ratio_to_f64(c: &Ratio<i64>) -> f64 {
    *c.numer() as f64 / *c.denom() as f64
}

fn horner(coeffs: &[Ratio<i64>], r: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + ratio_to_f64(c))
}

/// Coefficients of `P(r)` in ascending degree, constant term included (and
/// always zero), for negative integer alpha.
///
/// With `alpha = -m`, `g' = N(r) / r^3` where
/// `N = 2((1 - m) r - 1)(r - 1)^(2m - 1)`. The `r^0` and `r^1` terms of `N`
/// integrate to `-1/r^2` and `-2 alpha / r`, the `r^2` term vanishes, and each
/// `n_k r^(k-3)` with `k >= 3` integrates to `n_k r^(k-2) / (k - 2)`.
pub fn g_polynomial(alpha: i32) -> Result<Vec<Ratio<i64>>> {
    if alpha >= 0 {
        return Err(Error::InvalidParameter(format!("alpha must be a negative integer, got {alpha}")));
    }
    if alpha < MIN_NEGATIVE_ALPHA {
        return Err(Error::Unsupported(format!("alpha below {MIN_NEGATIVE_ALPHA}")));
    }
    let m = -alpha as i64;
    let e = (2 * m - 1) as usize;
    // (r - 1)^e, ascending
    let mut binom = vec![0i64; e + 1];
    let mut c = 1i64;
    for (k, b) in binom.iter_mut().enumerate() {
        let sign = if (e - k) % 2 == 0 { 1 } else { -1 };
        *b = sign * c;
        c = c * (e - k) as i64 / (k as i64 + 1);
    }
    // N = 2((1 - m) r - 1) * (r - 1)^e
    let mut n = vec![0i64; e + 2];
    for (k, b) in binom.iter().enumerate() {
        n[k] += -2 * b;
        n[k + 1] += 2 * (1 - m) * b;
    }
    debug_assert_eq!(n[0], 2);
    debug_assert_eq!(n[1], 2 * alpha as i64);
    debug_assert_eq!(n[2], 0);
    let degree = e - 1;
    let mut p = vec![Ratio::from_integer(0); degree + 1];
    for d in 1..=degree {
        p[d] = Ratio::new(n[d + 2], d as i64);
    }
    Ok(p)
}

/// `(L - R)` for the first integral, divided by the larger of the two sides'
/// magnitudes, where a side's magnitude is the sum of the magnitudes of its
/// terms. Zero when both sides vanish.
///
/// For alpha > 0 the sides are `L = r'^2 w0` and `R = r^4 (r - 1)^(2 alpha) - r^2 w0`
/// with `w0 = r0^2 (r0 - 1)^(2 alpha)`; for alpha < 0 they are `L = r'^2` and
/// `R = f(r) g(r)` with `g(r0) = 0`. Both sides vanish at turning points, so
/// the term-wise magnitude keeps the ratio well conditioned there.
pub fn first_integral_residual(form: &FirstIntegralForm, r0: f64, r: f64, dr: f64) -> Result<f64> {
    check_regular(r0)?;
    check_regular(r)?;
    let (lhs, rhs, rhs_scale) = if form.alpha > 0 {
        let k = 2 * form.alpha;
        let w0 = r0 * r0 * (r0 - 1.0).powi(k);
        let outer = r.powi(4) * (r - 1.0).powi(k);
        let inner = r * r * w0;
        (dr * dr * w0, outer - inner, outer.abs() + inner.abs())
    } else {
        let f = form.f(r);
        let c = form.g_constant(r0);
        let terms = c.abs()
            + 1.0 / (r * r)
            + 2.0 * (form.alpha as f64).abs() / r
            + form.p.iter().rev().fold(0.0, |acc, k| acc * r + ratio_to_f64(k).abs());
        (dr * dr, f * form.g(r0, r), f.abs() * terms)
    };
    let scale = lhs.abs().max(rhs_scale);
    Ok(if scale == 0.0 { 0.0 } else { (lhs - rhs) / scale })
}

/// Angle at which the outer branch reaches infinity, from quadrature of
/// `ds = J dr / (r sqrt(r^2 (r - 1)^(2 alpha) - J^2))`, `J = r0 (r0 - 1)^alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainBound {
    /// `s(r_max)`.
    pub s_at_r_max: f64,
    /// Remaining angle from `r_max` to infinity.
    pub tail: f64,
    /// `s_at_r_max + tail`.
    pub s1: f64,
}

/// Quadrature of the blow-up angle for `alpha > 0`, `r0 > 1`.
///
/// The inverse square root at `r0` is removed by `r = r0 + t^2`; the range
/// from `2 r0` to `r_max` uses `r = e^x`, and the tail beyond `r_max` uses
/// `u = r_max / r` on `(0, 1]`.
pub fn domain_bound_quadrature(alpha: f64, r0: f64, r_max: f64) -> Result<DomainBound> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    if !(r0 > 1.0 && r0.is_finite()) {
        return Err(Error::InvalidParameter(format!("r0 must exceed 1, got {r0}")));
    }
    if !(r_max > r0) {
        return Err(Error::InvalidParameter(format!("r_max = {r_max} must exceed r0 = {r0}")));
    }
    // E = (r/r0) ((r-1)/(r0-1))^alpha - 1 as a function of d = r - r0,
    // accurate near r0; sqrt(E (E + 2)) = sqrt(r^2 (r-1)^(2 alpha) - J^2) / J
    let root = move |d: f64| {
        let e = ((d / r0).ln_1p() + alpha * (d / (r0 - 1.0)).ln_1p()).exp_m1();
        (e * (e + 2.0)).sqrt()
    };
    let (abs_tol, rel_tol, limit) = (1e-15, 1e-14, 2000);

    let r_a = r_max.min(2.0 * r0);
    let piece_a = quadrature::integrate(
        |t: f64| {
            let d = t * t;
            2.0 * t / ((r0 + d) * root(d))
        },
        0.0,
        (r_a - r0).sqrt(),
        abs_tol,
        rel_tol,
        limit,
    )?;
    let piece_b = if r_max > r_a {
        quadrature::integrate(|x: f64| 1.0 / root(x.exp() - r0), r_a.ln(), r_max.ln(), abs_tol, rel_tol, limit)?
            .value
    } else {
        0.0
    };
    let tail = quadrature::integrate(
        |u: f64| {
            let v = 1.0 / (u * root(r_max / u - r0));
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        abs_tol,
        rel_tol,
        limit,
    )?
    .value;
    let s_at_r_max = piece_a.value + piece_b;
    Ok(DomainBound { s_at_r_max, tail, s1: s_at_r_max + tail })
}
