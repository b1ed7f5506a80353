//! Pointwise geometry of radial graphs `r = r(s)` and the energy
//! `E_alpha = ∫ |r - 1|^alpha sqrt(r^2 + r'^2) ds`.
//!
//! Curvature is signed with respect to the normal
//! `N = (-r' sin s - r cos s, r' cos s - r sin s) / sqrt(r^2 + r'^2)`,
//! which points inward on circles centred at the origin. With that normal,
//! substituting the Euler–Lagrange equation into the polar curvature gives
//! `kappa = -alpha r / ((r - 1) sqrt(r^2 + r'^2)) = alpha cos(phi) / (r - 1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The exponent `alpha` of the energy and the constants derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PowerParams {
    alpha: f64,
    equilibrium_radius: Option<f64>,
}

impl PowerParams {
    /// `alpha = 0` is the length functional and is rejected.
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha must be finite, got {alpha}")));
        }
        if alpha == 0.0 {
            return Err(Error::InvalidParameter(
                "alpha = 0 is the length functional and has no catenaries".into(),
            ));
        }
        let equilibrium_radius = (alpha > -1.0).then(|| 1.0 / (1.0 + alpha));
        Ok(Self { alpha, equilibrium_radius })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Radius `1/(1+alpha)` of the constant solution; present iff `alpha > -1`.
    pub fn equilibrium_radius(&self) -> Option<f64> {
        self.equilibrium_radius
    }

    /// `Some(n)` when alpha is an integer.
    pub fn integer_alpha(&self) -> Option<i32> {
        let rounded = self.alpha.round();
        (rounded == self.alpha && rounded.abs() < i32::MAX as f64).then_some(rounded as i32)
    }

    /// `|r - 1|^alpha`. Integer exponents use repeated multiplication; other
    /// exponents go through `exp(alpha ln|r - 1|)`.
    pub fn distance_power(&self, r: f64) -> f64 {
        let d = (r - 1.0).abs();
        match self.integer_alpha() {
            Some(n) => d.powi(n),
            None => (self.alpha * d.ln()).exp(),
        }
    }
}

impl TryFrom<f64> for PowerParams {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        Self::new(alpha)
    }
}

impl From<PowerParams> for f64 {
    fn from(p: PowerParams) -> f64 {
        p.alpha
    }
}

/// A point `(r, r')` of the reduced state, away from the singular set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarState {
    r: f64,
    dr: f64,
}

impl PolarState {
    pub fn new(r: f64, dr: f64) -> Result<Self> {
        check_regular(r)?;
        if !dr.is_finite() {
            return Err(Error::InvalidParameter(format!("r' must be finite, got {dr}")));
        }
        Ok(Self { r, dr })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }
}

/// One sample `(s, r(s), r'(s))` of a radial graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub s: f64,
    pub r: f64,
    pub dr: f64,
}

impl Sample {
    pub fn new(s: f64, r: f64, dr: f64) -> Self {
        Self { s, r, dr }
    }
}

pub(crate) fn check_regular(r: f64) -> Result<()> {
    if !r.is_finite() || r <= 0.0 || r == 1.0 {
        return Err(Error::SingularState { r });
    }
    Ok(())
}

/// Signed curvature of `s -> r(s)(cos s, sin s)`.
pub fn curvature(r: f64, dr: f64, ddr: f64) -> f64 {
    let speed2 = r * r + dr * dr;
    (2.0 * dr * dr + r * r - r * ddr) / (speed2 * speed2.sqrt())
}

/// `cos(phi) = <N, gamma> / |gamma| = -r / sqrt(r^2 + r'^2)`.
pub fn cos_phi(r: f64, dr: f64) -> f64 {
    -r / r.hypot(dr)
}

/// `r(r-1) r'' - ((alpha+2) r - 2) r'^2 - ((alpha+1) r - 1) r^2`.
pub fn el_residual(params: &PowerParams, r: f64, dr: f64, ddr: f64) -> Result<f64> {
    check_regular(r)?;
    let a = params.alpha();
    Ok(r * (r - 1.0) * ddr - ((a + 2.0) * r - 2.0) * dr * dr - ((a + 1.0) * r - 1.0) * r * r)
}

/// Sum of the magnitudes of the monomials of [`el_residual`] expanded in
/// `r`, `r'`, `r''`. This bounds the rounding in evaluating the residual and
/// does not collapse where a coefficient such as `(alpha + 2) r - 2` vanishes.
pub fn el_scale(params: &PowerParams, r: f64, dr: f64, ddr: f64) -> f64 {
    let a = params.alpha();
    let (r2, v2) = (r * r, dr * dr);
    (r2 * ddr).abs()
        + (r * ddr).abs()
        + ((a + 2.0) * r * v2).abs()
        + 2.0 * v2
        + ((a + 1.0) * r2 * r).abs()
        + r2
}

/// `kappa - alpha cos(phi) / (r - 1)`.
pub fn curvature_relation_residual(params: &PowerParams, r: f64, dr: f64, ddr: f64) -> Result<f64> {
    check_regular(r)?;
    Ok(curvature(r, dr, ddr) - params.alpha() * cos_phi(r, dr) / (r - 1.0))
}

/// Integrand of the energy at one sample.
pub fn energy_density(params: &PowerParams, r: f64, dr: f64) -> f64 {
    params.distance_power(r) * r.hypot(dr)
}

/// Composite Simpson quadrature of the energy density over the samples.
///
/// Consecutive pairs of intervals use the three-point rule for unequal
/// spacing; an odd trailing interval is closed with the quadratic through
/// the last three samples.
pub fn energy(params: &PowerParams, curve: &[Sample]) -> Result<f64> {
    for (i, pair) in curve.windows(2).enumerate() {
        if !(pair[1].s > pair[0].s) {
            return Err(Error::NonMonotoneGrid { index: i + 1 });
        }
    }
    for p in curve {
        if !(p.r > 0.0) {
            return Err(Error::SingularState { r: p.r });
        }
    }
    let xs: Vec<f64> = curve.iter().map(|p| p.s).collect();
    let fs: Vec<f64> = curve.iter().map(|p| energy_density(params, p.r, p.dr)).collect();
    Ok(simpson(&xs, &fs))
}

pub(crate) fn simpson(xs: &[f64], fs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    if n == 2 {
        return 0.5 * (xs[1] - xs[0]) * (fs[0] + fs[1]);
    }
    let mut total = 0.0;
    let mut i = 0;
    while i + 2 < n {
        let h0 = xs[i + 1] - xs[i];
        let h1 = xs[i + 2] - xs[i + 1];
        let hs = h0 + h1;
        total += hs / 6.0
            * ((2.0 - h1 / h0) * fs[i] + hs * hs / (h0 * h1) * fs[i + 1] + (2.0 - h0 / h1) * fs[i + 2]);
        i += 2;
    }
    if i + 1 < n {
        // odd interval count: last interval from the parabola through i-1, i, i+1
        let h0 = xs[i] - xs[i - 1];
        let h1 = xs[i + 1] - xs[i];
        let a = (2.0 * h1 * h1 + 3.0 * h0 * h1) / (6.0 * (h0 + h1));
        let b = (h1 * h1 + 3.0 * h0 * h1) / (6.0 * h0);
        let c = h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
        total += a * fs[i + 1] + b * fs[i] - c * fs[i - 1];
    }
    total
}

/// `gamma(s) = r(s) (cos s, sin s)` for each sample.
pub fn to_cartesian(curve: &[Sample]) -> Vec<(f64, f64)> {
    curve.iter().map(|p| (p.r * p.s.cos(), p.r * p.s.sin())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn params(alpha: f64) -> PowerParams {
        PowerParams::new(alpha).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn params_reject_length_functional() {
        assert!(PowerParams::new(0.0).is_err());
        assert!(PowerParams::new(f64::NAN).is_err());
        assert_eq!(params(1.0).equilibrium_radius(), Some(0.5));
        assert_eq!(params(3.0).equilibrium_radius(), Some(0.25));
        assert_eq!(params(-1.0).equilibrium_radius(), None);
        assert_eq!(params(-2.5).equilibrium_radius(), None);
        assert_eq!(params(-0.5).equilibrium_radius(), Some(2.0));
    }

    #[test]
    fn distance_power_branches() {
        assert_eq!(params(2.0).distance_power(0.5), 0.25);
        assert_eq!(params(-2.0).distance_power(3.0), 0.25);
        assert!(close(params(0.5).distance_power(0.75), 0.5, 1e-15));
        assert!(close(params(-0.5).distance_power(5.0), 0.5, 1e-15));
    }

    #[test]
    fn polar_state_rejects_singular_set() {
        assert!(PolarState::new(0.0, 1.0).is_err());
        assert!(PolarState::new(1.0, 0.0).is_err());
        assert!(PolarState::new(-0.5, 0.0).is_err());
        let s = PolarState::new(0.5, -2.0).unwrap();
        assert_eq!((s.r(), s.dr()), (0.5, -2.0));
    }

    #[test]
    fn curvature_examples() {
        assert_eq!(curvature(0.5, 0.0, 0.0), 2.0);
        assert_eq!(curvature(1.0, 0.0, 0.0), 1.0);
        assert_eq!(curvature(2.0, 0.0, 6.0), -1.0);
        // same value from -r / ((r - 1) sqrt(r^2 + r'^2))
        assert_eq!(-2.0 / (1.0 * (4.0f64).sqrt()), -1.0);
    }

    #[test]
    fn cos_phi_examples() {
        assert_eq!(cos_phi(0.5, 0.0), -1.0);
        assert!(close(cos_phi(3f64.sqrt(), 1.0), -(3f64.sqrt()) / 2.0, 1e-15));
        assert!(cos_phi(1.3, 1e12).abs() < 1e-11);
        assert!(cos_phi(1.3, 1e12) < 0.0);
    }

    #[test]
    fn el_residual_examples() {
        assert_eq!(el_residual(&params(1.0), 0.5, 0.0, 0.0).unwrap(), 0.0);
        assert_eq!(el_residual(&params(3.0), 0.25, 0.0, 0.0).unwrap(), 0.0);
        assert_eq!(el_residual(&params(1.0), 2.0, 0.0, 6.0).unwrap(), 0.0);
        assert!(el_residual(&params(1.0), 1.0, 0.0, 0.0).is_err());
        assert!(el_residual(&params(1.0), 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn alpha_one_matches_the_expanded_equation() {
        // r(r-1)r'' + r'^2(2-3r) + r^2(1-2r) = 0 is the alpha = 1 case
        let p = params(1.0);
        for &(r, dr, ddr) in &[(0.3, 0.7, -1.1), (2.5, -3.0, 4.0), (0.9, 0.01, 12.0)] {
            let expanded = r * (r - 1.0) * ddr + dr * dr * (2.0 - 3.0 * r) + r * r * (1.0 - 2.0 * r);
            assert!(close(el_residual(&p, r, dr, ddr).unwrap(), expanded, 1e-14));
        }
    }

    #[test]
    fn curvature_relation_examples() {
        assert_eq!(curvature_relation_residual(&params(1.0), 0.5, 0.0, 0.0).unwrap(), 0.0);
        assert_eq!(curvature_relation_residual(&params(1.0), 2.0, 0.0, 6.0).unwrap(), 0.0);
        assert!(curvature_relation_residual(&params(1.0), 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn energy_of_centered_circles() {
        let circle: Vec<Sample> = (0..=400)
            .map(|i| Sample::new(2.0 * PI * i as f64 / 400.0, 0.5, 0.0))
            .collect();
        assert!(close(energy(&params(1.0), &circle).unwrap(), PI / 2.0, 1e-14));
        assert!(close(energy(&params(2.0), &circle).unwrap(), PI / 4.0, 1e-14));
        // odd number of intervals
        assert!(close(energy(&params(1.0), &circle[..400]).unwrap(), PI / 2.0 * 399.0 / 400.0, 1e-14));
    }

    #[test]
    fn energy_rejects_bad_grids() {
        let bad = [Sample::new(0.0, 0.5, 0.0), Sample::new(0.1, 0.5, 0.0), Sample::new(0.1, 0.5, 0.0)];
        assert_eq!(energy(&params(1.0), &bad), Err(Error::NonMonotoneGrid { index: 2 }));
        let neg = [Sample::new(0.0, 0.5, 0.0), Sample::new(0.1, -0.5, 0.0)];
        assert!(energy(&params(1.0), &neg).is_err());
    }

    #[test]
    fn simpson_is_exact_for_cubics_on_pairwise_uniform_grids() {
        // pairs share a spacing, spacing changes between pairs
        let xs = [0.0, 0.1, 0.2, 0.5, 0.8, 0.9, 1.0];
        let fs: Vec<f64> = xs.iter().map(|x| 1.0 - 2.0 * x + 3.0 * x * x * x).collect();
        let exact = 1.0 - 1.0 + 0.75;
        assert!(close(simpson(&xs, &fs), exact, 1e-14));
        // fully non-uniform grid: exact for quadratics
        let xs = [0.0, 0.13, 0.4, 0.47, 0.9, 1.0];
        let fs: Vec<f64> = xs.iter().map(|x| 2.0 + x - 4.0 * x * x).collect();
        assert!(close(simpson(&xs, &fs), 2.0 + 0.5 - 4.0 / 3.0, 1e-14));
    }

    #[test]
    fn cartesian_examples() {
        let pts = to_cartesian(&[
            Sample::new(0.0, 2.0, 0.0),
            Sample::new(PI / 2.0, 0.5, 0.0),
            Sample::new(PI, 3.0, 0.0),
        ]);
        assert_eq!(pts.len(), 3);
        assert_eq!(pts[0], (2.0, 0.0));
        assert!(pts[1].0.abs() < 1e-16 && pts[1].1 == 0.5);
        assert!(pts[2].0 == -3.0 && pts[2].1.abs() < 1e-15);
    }
}
