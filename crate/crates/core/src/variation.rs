//! First variation of the energy along compactly supported radial
//! perturbations `r -> r + h phi`.

use std::f64::consts::PI;

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::model::{energy_density, PowerParams};
use crate::quadrature;

const MAX_INTERVALS: usize = 4000;
/// Absolute accuracy asked of the difference integrand, relative to the
/// local energy it perturbs. Both perturbed energies carry rounding of
/// that order.
const ROUNDING_FLOOR: f64 = 1e-13;

/// A curve `r = r(s)` on a closed interval of angles.
pub trait RadialCurve {
    fn domain(&self) -> (f64, f64);
    /// `(r, r')` at `s` inside the domain.
    fn eval(&self, s: f64) -> (f64, f64);
}

impl RadialCurve for Trajectory {
    fn domain(&self) -> (f64, f64) {
        (-self.end_s(), self.end_s())
    }

    fn eval(&self, s: f64) -> (f64, f64) {
        let (r, dr, _) = Trajectory::eval(self, s).expect("s inside the trajectory domain");
        (r, dr)
    }
}

/// The circle `r = radius` over `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantCurve {
    pub radius: f64,
    pub lo: f64,
    pub hi: f64,
}

impl RadialCurve for ConstantCurve {
    fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    fn eval(&self, _s: f64) -> (f64, f64) {
        (self.radius, 0.0)
    }
}

/// Restriction of a curve to a sub-interval of its domain.
#[derive(Debug, Clone, Copy)]
pub struct Window<'a, C: RadialCurve + ?Sized> {
    pub curve: &'a C,
    pub lo: f64,
    pub hi: f64,
}

impl<'a, C: RadialCurve + ?Sized> Window<'a, C> {
    pub fn new(curve: &'a C, lo: f64, hi: f64) -> Result<Self> {
        let (a, b) = curve.domain();
        if !(a <= lo && lo < hi && hi <= b) {
            return Err(Error::InvalidParameter(format!("window [{lo}, {hi}] outside domain [{a}, {b}]")));
        }
        Ok(Self { curve, lo, hi })
    }
}

impl<C: RadialCurve + ?Sized> RadialCurve for Window<'_, C> {
    fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    fn eval(&self, s: f64) -> (f64, f64) {
        self.curve.eval(s)
    }
}

/// `amplitude * cos^4(pi (s - center) / width)` on `|s - center| < width / 2`,
/// zero elsewhere. The bump and its first three derivatives vanish at the
/// ends of its support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: f64,
    pub width: f64,
    pub amplitude: f64,
}

impl Bump {
    pub fn support(&self) -> (f64, f64) {
        (self.center - 0.5 * self.width, self.center + 0.5 * self.width)
    }

    /// `(phi, phi')` at `s`.
    pub fn eval(&self, s: f64) -> (f64, f64) {
        let x = (s - self.center) / self.width;
        if x.abs() >= 0.5 {
            return (0.0, 0.0);
        }
        let (sn, c) = (PI * x).sin_cos();
        let c3 = c * c * c;
        (self.amplitude * c3 * c, -4.0 * self.amplitude * PI / self.width * c3 * sn)
    }

    pub fn negated(&self) -> Self {
        Self { amplitude: -self.amplitude, ..*self }
    }
}

/// Disjoint bumps tiling `support` in equal windows.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpBasis {
    pub modes: Vec<Bump>,
    pub support: (f64, f64),
}

impl BumpBasis {
    pub fn new(count: usize, support: (f64, f64)) -> Result<Self> {
        let (lo, hi) = support;
        if count == 0 || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameter(format!("bad basis: {count} modes on [{lo}, {hi}]")));
        }
        let width = (hi - lo) / count as f64;
        let modes = (0..count)
            .map(|k| Bump { center: lo + (k as f64 + 0.5) * width, width, amplitude: 1.0 })
            .collect();
        Ok(Self { modes, support })
    }

    /// Eight modes on the middle 80% of the curve's domain.
    pub fn default_for(curve: &(impl RadialCurve + ?Sized)) -> Result<Self> {
        let (a, b) = curve.domain();
        let margin = 0.1 * (b - a);
        Self::new(8, (a + margin, b - margin))
    }

    pub fn with_mode(mut self, bump: Bump) -> Self {
        self.modes.push(bump);
        self
    }
}

/// Energy of the curve over its domain by adaptive quadrature.
pub fn curve_energy(params: &PowerParams, curve: &(impl RadialCurve + ?Sized)) -> Result<f64> {
    let (a, b) = curve.domain();
    let f = |s: f64| {
        let (r, dr) = curve.eval(s);
        energy_density(params, r, dr)
    };
    Ok(quadrature::integrate(f, a, b, 0.0, 1e-13, MAX_INTERVALS)?.value)
}

/// `(E[r + h phi] - E[r - h phi]) / (2h)` for a single bump.
pub fn directional_derivative(params: &PowerParams, curve: &(impl RadialCurve + ?Sized), bump: &Bump, h: f64) -> Result<f64> {
    let (a, b) = curve.domain();
    let (lo, hi) = bump.support();
    if !(a < lo && hi < b) {
        return Err(Error::InvalidParameter(format!("bump support [{lo}, {hi}] not inside ({a}, {b})")));
    }
    check_barriers(curve, bump, h)?;
    let f = |s: f64| {
        let (r, dr) = curve.eval(s);
        let (p, dp) = bump.eval(s);
        energy_density(params, r + h * p, dr + h * dp) - energy_density(params, r - h * p, dr - h * dp)
    };
    let scale = quadrature::integrate(
        |s| {
            let (r, dr) = curve.eval(s);
            energy_density(params, r, dr) * bump.eval(s).0.abs()
        },
        lo,
        hi,
        0.0,
        1e-6,
        MAX_INTERVALS,
    )?
    .value;
    let q = quadrature::integrate(f, lo, hi, ROUNDING_FLOOR * scale, 1e-12, MAX_INTERVALS)?;
    Ok(q.value / (2.0 * h))
}

/// Both perturbed curves must keep `r > 0` and stay on the same side of the
/// unit circle.
fn check_barriers(curve: &(impl RadialCurve + ?Sized), bump: &Bump, h: f64) -> Result<()> {
    let (lo, hi) = bump.support();
    let n = 256;
    for i in 0..=n {
        let s = lo + (hi - lo) * i as f64 / n as f64;
        let (r, _) = curve.eval(s);
        let d = h * bump.eval(s).0;
        for rp in [r + d, r - d] {
            if !(rp > 0.0) || (rp - 1.0).signum() != (r - 1.0).signum() || rp == 1.0 {
                return Err(Error::BarrierCrossing { s });
            }
        }
    }
    Ok(())
}

/// Largest `|dE[phi_k]|` over the modes, divided by the energy of the curve.
pub fn stationarity_defect(params: &PowerParams, curve: &(impl RadialCurve + ?Sized), basis: &BumpBasis, h: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!("step must be positive, got {h}")));
    }
    let e = curve_energy(params, curve)?;
    let mut worst: f64 = 0.0;
    for bump in &basis.modes {
        worst = worst.max(directional_derivative(params, curve, bump, h)?.abs());
    }
    Ok(worst / e)
}

/// `1e-4 (max r - min r)`, or `1e-5 r` on a circle where the spread is zero.
pub fn default_step(curve: &(impl RadialCurve + ?Sized)) -> f64 {
    let (a, b) = curve.domain();
    let n = 512;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..=n {
        let r = curve.eval(a + (b - a) * i as f64 / n as f64).0;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    let spread = hi - lo;
    if spread > 0.0 {
        1e-4 * spread
    } else {
        1e-5 * lo
    }
}

/// Least-squares slope of `ln defect` against `ln h`.
pub fn observed_order(hs: &[f64], defects: &[f64]) -> Result<f64> {
    if hs.len() != defects.len() || hs.len() < 2 {
        return Err(Error::InvalidParameter("need at least two (h, defect) pairs".into()));
    }
    if hs.iter().chain(defects).any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidParameter("steps and defects must be positive".into()));
    }
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = defects.iter().map(|d| d.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::period;
    use crate::dynamics::{integrate, SolverConfig};

    fn alpha_one() -> PowerParams {
        PowerParams::new(1.0).unwrap()
    }

    #[test]
    fn bump_vanishes_smoothly_at_its_ends() {
        let b = Bump { center: 1.0, width: 0.5, amplitude: 2.0 };
        assert_eq!(b.eval(1.0), (2.0, 0.0));
        let (p, dp) = b.eval(1.25 - 1e-9);
        assert!(p.abs() < 1e-30 && dp.abs() < 1e-20);
        assert_eq!(b.eval(1.3), (0.0, 0.0));
        let h = 1e-6;
        let fd = (b.eval(1.1 + h).0 - b.eval(1.1 - h).0) / (2.0 * h);
        assert!((fd - b.eval(1.1).1).abs() < 1e-8);
    }

    #[test]
    fn constant_extremal_is_stationary() {
        let c = ConstantCurve { radius: 0.5, lo: -PI, hi: PI };
        let basis = BumpBasis::default_for(&c).unwrap();
        let d = stationarity_defect(&alpha_one(), &c, &basis, default_step(&c)).unwrap();
        assert!(d <= 1e-8, "{d:e}");
    }

    #[test]
    fn non_extremal_control_is_not_stationary() {
        let c = ConstantCurve { radius: 0.6, lo: -PI, hi: PI };
        let basis = BumpBasis::default_for(&c).unwrap();
        let d = stationarity_defect(&alpha_one(), &c, &basis, default_step(&c)).unwrap();
        assert!(d >= 1e-2, "{d:e}");
    }

    #[test]
    fn periodic_solution_is_stationary_over_one_period() {
        let p = alpha_one();
        let traj = integrate(&p, 0.25, &SolverConfig::default()).unwrap();
        let t = period(&traj).unwrap();
        let w = Window::new(&traj, -0.5 * t, 0.5 * t).unwrap();
        let basis = BumpBasis::default_for(&w).unwrap();
        let d = stationarity_defect(&p, &w, &basis, default_step(&w)).unwrap();
        assert!(d <= 1e-6, "{d:e}");
        let flipped = BumpBasis { modes: basis.modes.iter().map(Bump::negated).collect(), ..basis.clone() };
        assert_eq!(stationarity_defect(&p, &w, &flipped, default_step(&w)).unwrap(), d);
        let extra = basis.with_mode(Bump { center: 0.1, width: 0.3, amplitude: 1.0 });
        assert!(stationarity_defect(&p, &w, &extra, default_step(&w)).unwrap() <= 1e-6);
    }

    #[test]
    fn defect_converges_quadratically_in_h() {
        let p = alpha_one();
        let traj = integrate(&p, 0.25, &SolverConfig::default()).unwrap();
        let t = period(&traj).unwrap();
        let w = Window::new(&traj, -0.5 * t, 0.5 * t).unwrap();
        let basis = BumpBasis::default_for(&w).unwrap();
        let hs = [1e-2, 1e-3, 1e-4];
        let ds: Vec<f64> = hs.iter().map(|&h| stationarity_defect(&p, &w, &basis, h).unwrap()).collect();
        let order = observed_order(&hs, &ds).unwrap();
        assert!(order >= 1.9, "order {order}, defects {ds:?}");
    }

    #[test]
    fn barrier_crossing_is_reported() {
        let c = ConstantCurve { radius: 0.99, lo: -1.0, hi: 1.0 };
        let basis = BumpBasis::new(1, (-0.5, 0.5)).unwrap();
        assert!(matches!(stationarity_defect(&alpha_one(), &c, &basis, 0.1), Err(Error::BarrierCrossing { .. })));
    }

    #[test]
    fn observed_order_of_exact_power() {
        let hs = [1e-1, 1e-2, 1e-3];
        let ds: Vec<f64> = hs.iter().map(|h| 3.0 * h * h).collect();
        assert!((observed_order(&hs, &ds).unwrap() - 2.0).abs() < 1e-12);
    }
}
