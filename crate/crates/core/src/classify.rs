//! Regime classification of solutions from measured features, and the
//! defect metrics that back it.
//!
//! Rays through the origin are also extremals; they are not radial graphs
//! `r = r(s)` and so never appear here.

use serde::{Deserialize, Serialize};

use crate::conservation::momentum_drift;
use crate::dynamics::{accel, integrate, v_zero_crossings, SolverConfig, StopReason, Trajectory};
use crate::error::{Error, Result};
use crate::model::{check_regular, cos_phi, PowerParams, Sample};
use crate::ode::{Dop853, StepControl};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    ConstantCircle,
    PeriodicInner,
    OuterAsymptotic,
    OrthogonalHitConvex,
    OrthogonalHitConcave,
    OuterUnboundedConvex,
    Unresolved,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::ConstantCircle => "ConstantCircle",
            Regime::PeriodicInner => "PeriodicInner",
            Regime::OuterAsymptotic => "OuterAsymptotic",
            Regime::OrthogonalHitConvex => "OrthogonalHitConvex",
            Regime::OrthogonalHitConcave => "OrthogonalHitConcave",
            Regime::OuterUnboundedConvex => "OuterUnboundedConvex",
            Regime::Unresolved => "Unresolved",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyConfig {
    pub solver: SolverConfig,
    /// Span is doubled up to this value while looking for a full period.
    pub max_span: f64,
    pub period_tol: f64,
    pub orthogonality_tol: f64,
    /// A metric supports a regime only if it beats its tolerance by this
    /// factor.
    pub confidence: f64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self {
            solver: SolverConfig::default(),
            max_span: 64.0 * std::f64::consts::PI,
            period_tol: 1e-6,
            orthogonality_tol: 1e-3,
            confidence: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub params: PowerParams,
    pub r0: f64,
    pub regime: Regime,
    pub period: Option<f64>,
    pub extrema: Option<(f64, f64)>,
    pub blowup_angle: Option<f64>,
    pub orthogonality_defect: Option<f64>,
    /// Total `|s|` range reached, both halves.
    pub angular_extent: f64,
    pub conservation_drift: f64,
    pub stop_reason: Option<StopReason>,
    pub solver: SolverConfig,
    pub accepted_steps: usize,
    pub evaluations: usize,
    pub samples: usize,
    pub notes: Vec<String>,
}

/// Regime predicted by the theorems for `(alpha, r0)`.
pub fn expected_regime(params: &PowerParams, r0: f64) -> Regime {
    let a = params.alpha();
    if is_equilibrium(params, r0) {
        return Regime::ConstantCircle;
    }
    if a > 0.0 {
        if r0 < 1.0 {
            Regime::PeriodicInner
        } else {
            Regime::OuterAsymptotic
        }
    } else if a > -1.0 {
        let eq = 1.0 / (1.0 + a);
        if r0 < 1.0 {
            Regime::OrthogonalHitConvex
        } else if r0 < eq {
            Regime::OrthogonalHitConcave
        } else {
            Regime::OuterUnboundedConvex
        }
    } else if r0 < 1.0 {
        Regime::OrthogonalHitConvex
    } else {
        Regime::OrthogonalHitConcave
    }
}

fn is_equilibrium(params: &PowerParams, r0: f64) -> bool {
    params.equilibrium_radius().is_some_and(|eq| r0 == eq || accel(params.alpha(), r0, 0.0) == 0.0)
}

/// Sign of `r''` over every sample and tail sample: `Some(1.0)` convex,
/// `Some(-1.0)` concave, `None` mixed or degenerate.
pub fn convexity(traj: &Trajectory) -> Option<f64> {
    let a = traj.params().alpha();
    let values = traj
        .samples()
        .iter()
        .map(|p| accel(a, p.r, p.dr))
        .chain(traj.tail().iter().map(|t| accel(a, t.r, 1.0 / t.q)));
    let mut sign = 0.0;
    for v in values {
        let s = if v > 0.0 {
            1.0
        } else if v < 0.0 {
            -1.0
        } else {
            return None;
        };
        if sign == 0.0 {
            sign = s;
        } else if s != sign {
            return None;
        }
    }
    (sign != 0.0).then_some(sign)
}

/// `sup |r(s + T) - r(s)|` over the samples with `s + T` inside the domain.
pub fn closure_defect(traj: &Trajectory, t: f64) -> f64 {
    let end = traj.end_s();
    traj.samples()
        .iter()
        .take_while(|p| p.s + t <= end)
        .filter_map(|p| traj.eval(p.s + t).map(|(r, _, _)| (r - p.r).abs()))
        .fold(0.0, f64::max)
}

/// Full period from alternate `r' = 0` crossings, checked against the
/// closure defect.
pub fn period(traj: &Trajectory) -> Result<f64> {
    period_with_tol(traj, 1e-6)
}

fn period_with_tol(traj: &Trajectory, tol: f64) -> Result<f64> {
    let c = v_zero_crossings(traj);
    if c.len() < 4 {
        return Err(Error::InsufficientCrossings { found: c.len(), needed: 4 });
    }
    let t = c[2] - c[0];
    let defect = closure_defect(traj, t);
    if !(defect <= tol) {
        return Err(Error::NotPeriodic { defect });
    }
    Ok(t)
}

/// `|cos(phi)|` extrapolated to `r = 1` from three tail samples. The samples
/// are the last one and the two nearest to 100 and 10^4 times its distance
/// `|r - 1|` (or a geometric split of the tail when it is shorter). Adjacent
/// samples sit too close in `|r - 1|` for the fit to resolve the exponent.
/// With fewer than three distinct samples, the value at the last one.
pub fn orthogonality_defect(traj: &Trajectory) -> Result<f64> {
    if traj.stop_reason() != StopReason::SingularUnit {
        return Err(Error::WrongStopReason {
            expected: "SingularUnit",
            found: traj.stop_reason().to_string(),
        });
    }
    let pts: Vec<(f64, f64)> = traj
        .tail()
        .iter()
        .map(|t| {
            let c = t.r * t.q.abs() / (t.r * t.r * t.q * t.q + 1.0).sqrt();
            ((t.r - 1.0).abs(), c)
        })
        .filter(|p| p.0 > 0.0)
        .collect();
    let Some(&last) = pts.last() else {
        let p = traj.samples()[traj.samples().len() - 1];
        return Ok(cos_phi(p.r, p.dr).abs());
    };
    let span = pts.iter().map(|p| p.0).fold(last.0, f64::max) / last.0;
    let ratio = span.sqrt().min(100.0);
    let nearest = |target: f64| {
        pts.iter()
            .copied()
            .min_by(|a, b| {
                let da = (a.0.ln() - target.ln()).abs();
                let db = (b.0.ln() - target.ln()).abs();
                da.total_cmp(&db)
            })
            .unwrap_or(last)
    };
    let (far, mid) = (nearest(last.0 * ratio * ratio), nearest(last.0 * ratio));
    if ratio < 1.5 || far.0 <= mid.0 || mid.0 <= last.0 {
        return Ok(last.1);
    }
    Ok(power_law_limit(&[far, mid, last]).abs())
}

/// Limit at `x -> 0` of `c = L + C x^p`, `p > 0`, fitted through three
/// points ordered by decreasing `x`. Along a solution `|cos(phi)|` behaves
/// like `|r - 1|^(-alpha)`, so the exponent is not known in advance. Falls
/// back to the last value when the data show no convergent power law.
fn power_law_limit(pts: &[(f64, f64); 3]) -> f64 {
    let [(x1, c1), (x2, c2), (x3, c3)] = *pts;
    let (d1, d2) = (c1 - c2, c2 - c3);
    if !(x1 > x2 && x2 > x3 && x3 > 0.0) || d2 == 0.0 || d1 * d2 <= 0.0 {
        return c3;
    }
    let target = d1 / d2;
    let (l1, l2, l3) = (x1.ln(), x2.ln(), x3.ln());
    // (x1^p - x2^p) / (x2^p - x3^p), increasing in p
    let ratio = |p: f64| {
        let e12 = (p * (l1 - l2)).exp_m1();
        let e23 = (p * (l2 - l3)).exp_m1();
        (p * (l2 - l3)).exp() * e12 / e23
    };
    let (mut lo, mut hi) = (1e-6, 1.0);
    if ratio(lo) >= target {
        return c3;
    }
    while ratio(hi) < target {
        hi *= 2.0;
        if hi > 1e3 {
            return c3;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ratio(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let p = 0.5 * (lo + hi);
    // C x3^p = d2 / ((x2/x3)^p - 1)
    c3 - d2 / (p * (l2 - l3)).exp_m1()
}

/// Angle at which a blowing-up trajectory reaches infinity.
///
/// Continues from the last sample in `tau = ln r` with state `(s, 1/r')`
/// until the remaining angle `~ r / ((1 + alpha) r')` is negligible, then
/// adds that remainder.
pub fn asymptote_angle(traj: &Trajectory) -> Result<f64> {
    if traj.stop_reason() != StopReason::Blowup {
        return Err(Error::WrongStopReason { expected: "Blowup", found: traj.stop_reason().to_string() });
    }
    let alpha = traj.params().alpha();
    if alpha <= -1.0 {
        return Err(Error::Unsupported("asymptote angle needs alpha > -1".into()));
    }
    let last = match traj.tail().last() {
        Some(t) => Sample::new(t.s, t.r, 1.0 / t.q),
        None => traj.samples()[traj.samples().len() - 1],
    };
    let rhs = move |tau: f64, y: &[f64; 2]| {
        let r = tau.exp();
        let q = y[1];
        [
            q * r,
            -(((alpha + 2.0) * r - 2.0) * q + ((alpha + 1.0) * r - 1.0) * r * r * q * q * q) / (r - 1.0),
        ]
    };
    let cfg = traj.config();
    let control = StepControl { rel_tol: cfg.rel_tol, abs_tol: [cfg.abs_tol, f64::MIN_POSITIVE], h_max: 1.0, h_init: None };
    let mut solver = Dop853::new(rhs, last.r.ln(), [last.s, 1.0 / last.dr], control)?;
    let tau_cap = 700.0;
    loop {
        let (s, q) = (solver.y()[0], solver.y()[1]);
        let remainder = q * solver.t().exp() / (1.0 + alpha);
        if remainder.abs() < 1e-16 * s.abs().max(1.0) || solver.t() >= tau_cap {
            return Ok(s + remainder);
        }
        solver.step(tau_cap, |y| y[1] > 0.0)?;
    }
}

/// Comparison of `r(.; r0)` shifted to its first interior critical point
/// with `r(.; 1 - r0)`, for `alpha = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwapDefect {
    /// Distance `Delta` from `s = 0` to the next critical point.
    pub shift: f64,
    /// `sup_{s in [0, T]} |r(s + Delta; r0) - r(s; 1 - r0)|`.
    pub curve: f64,
    /// `|r(Delta; r0) - (1 - r0)|`.
    pub extremum: f64,
}

impl SwapDefect {
    pub fn value(&self) -> f64 {
        self.curve.max(self.extremum)
    }
}

pub fn half_period_swap_defect(r0: f64, config: &SolverConfig) -> Result<SwapDefect> {
    if !(r0 > 0.0 && r0 < 1.0) {
        return Err(Error::InvalidParameter(format!("r0 must lie in (0, 1), got {r0}")));
    }
    let params = PowerParams::new(1.0)?;
    let a = integrate(&params, r0, config)?;
    let b = integrate(&params, 1.0 - r0, config)?;
    if a.is_constant() && b.is_constant() {
        return Ok(SwapDefect { shift: 0.0, curve: 0.0, extremum: (a.r0() - b.r0()).abs() });
    }
    let ca = v_zero_crossings(&a);
    if ca.len() < 4 {
        return Err(Error::InsufficientCrossings { found: ca.len(), needed: 4 });
    }
    let shift = ca[0];
    let t = ca[2] - ca[0];
    if shift + t > a.end_s() || t > b.end_s() {
        return Err(Error::InvalidParameter("span too short for a shifted period".into()));
    }
    let curve = b
        .samples()
        .iter()
        .take_while(|p| p.s <= t)
        .filter_map(|p| a.eval(p.s + shift).map(|(r, _, _)| (r - p.r).abs()))
        .fold(0.0, f64::max);
    let extremum = (a.eval(shift).map_or(f64::INFINITY, |v| v.0) - (1.0 - r0)).abs();
    Ok(SwapDefect { shift, curve, extremum })
}

/// `sup |r(s; r0) r(s; 1/r0) - 1|` for `alpha = -2` over the common domain of
/// the regular samples.
pub fn inversion_defect(r0: f64, config: &SolverConfig) -> Result<f64> {
    check_regular(r0)?;
    check_regular(1.0 / r0)?;
    let params = PowerParams::new(-2.0)?;
    let a = integrate(&params, r0, config)?;
    let b = integrate(&params, 1.0 / r0, config)?;
    let end = a.end_s().min(b.end_s());
    let one_way = |x: &Trajectory, y: &Trajectory| {
        x.samples()
            .iter()
            .take_while(|p| p.s <= end)
            .filter_map(|p| y.eval(p.s).map(|(r, _, _)| (p.r * r - 1.0).abs()))
            .fold(0.0, f64::max)
    };
    Ok(one_way(&a, &b).max(one_way(&b, &a)))
}

/// Hausdorff distance between the `alpha = 1` curve over one period
/// `s in [-T/2, T/2]` and the segment `{0} x [-1, 1]`.
pub fn hausdorff_to_segment(r0: f64, config: &SolverConfig) -> Result<f64> {
    let params = PowerParams::new(1.0)?;
    let traj = integrate(&params, r0, config)?;
    let t = period(&traj)?;
    let n = 4000;
    let pts: Vec<(f64, f64)> = (0..=n)
        .filter_map(|i| {
            let s = -0.5 * t + t * i as f64 / n as f64;
            traj.eval(s).map(|(r, _, _)| (r * s.cos(), r * s.sin()))
        })
        .collect();
    let to_segment = |&(x, y): &(f64, f64)| {
        let dy = (y.abs() - 1.0).max(0.0);
        x.hypot(dy)
    };
    let curve_to_segment = pts.iter().map(to_segment).fold(0.0, f64::max);
    let m = 2000;
    let segment_to_curve = (0..=m)
        .map(|j| {
            let y = -1.0 + 2.0 * j as f64 / m as f64;
            segment_distance_to_polyline((0.0, y), &pts)
        })
        .fold(0.0, f64::max);
    Ok(curve_to_segment.max(segment_to_curve))
}

fn segment_distance_to_polyline(p: (f64, f64), pts: &[(f64, f64)]) -> f64 {
    pts.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let (dx, dy) = (b.0 - a.0, b.1 - a.1);
            let len2 = dx * dx + dy * dy;
            let t = if len2 > 0.0 { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
            (p.0 - a.0 - t * dx).hypot(p.1 - a.1 - t * dy)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Integrates, measures, and assigns a regime. The measured regime must
/// agree with [`expected_regime`]; otherwise the report is `Unresolved`.
pub fn classify(params: &PowerParams, r0: f64, config: &ClassifyConfig) -> Result<ClassificationReport> {
    check_regular(r0)?;
    config.solver.validate()?;
    let expected = expected_regime(params, r0);
    let mut solver = config.solver;
    let mut notes = Vec::new();
    let mut report = ClassificationReport {
        params: *params,
        r0,
        regime: Regime::Unresolved,
        period: None,
        extrema: None,
        blowup_angle: None,
        orthogonality_defect: None,
        angular_extent: 0.0,
        conservation_drift: 0.0,
        stop_reason: None,
        solver,
        accepted_steps: 0,
        evaluations: 0,
        samples: 0,
        notes: Vec::new(),
    };

    let traj = loop {
        let traj = match integrate(params, r0, &solver) {
            Ok(t) => t,
            Err(e) => {
                report.notes.push(format!("integration failed: {e}"));
                return Ok(report);
            }
        };
        let needs_more = traj.stop_reason() == StopReason::Completed
            && !is_flat(&traj)
            && v_zero_crossings(&traj).len() < 4
            && solver.span < config.max_span;
        if !needs_more {
            break traj;
        }
        solver.span = (2.0 * solver.span).min(config.max_span);
    };

    report.solver = solver;
    report.stop_reason = Some(traj.stop_reason());
    report.angular_extent = 2.0 * traj.reach();
    report.conservation_drift = momentum_drift(&traj);
    report.accepted_steps = traj.stats().accepted_steps;
    report.evaluations = traj.stats().evaluations;
    report.samples = traj.samples().len();

    let measured = measure(&traj, config, &mut report, &mut notes);
    if measured == expected {
        report.regime = measured;
    } else {
        notes.push(format!("measured {measured}, theorem predicts {expected}"));
        report.regime = Regime::Unresolved;
    }
    if report.regime != Regime::PeriodicInner {
        report.period = None;
    }
    if report.regime != Regime::OuterAsymptotic {
        report.blowup_angle = None;
    }
    if !matches!(report.regime, Regime::OrthogonalHitConvex | Regime::OrthogonalHitConcave) {
        report.orthogonality_defect = None;
    }
    if !matches!(report.regime, Regime::PeriodicInner | Regime::ConstantCircle) {
        report.extrema = None;
    }
    if params.alpha() > -1.0 && params.alpha() < 0.0 && report.angular_extent > 2.0 * std::f64::consts::PI {
        notes.push(format!("angular extent {:.6} exceeds 2 pi", report.angular_extent));
    }
    report.notes = notes;
    Ok(report)
}

/// No sample strays from `r0` by more than `1e-9 r0`.
fn is_flat(traj: &Trajectory) -> bool {
    let r0 = traj.r0();
    traj.samples().iter().all(|p| (p.r - r0).abs() <= 1e-9 * r0)
}

fn measure(traj: &Trajectory, config: &ClassifyConfig, report: &mut ClassificationReport, notes: &mut Vec<String>) -> Regime {
    let alpha = traj.params().alpha();
    let inner = traj.r0() < 1.0;
    let margin = config.confidence;
    match traj.stop_reason() {
        StopReason::Completed if is_flat(traj) => {
            report.extrema = Some((traj.r0(), traj.r0()));
            Regime::ConstantCircle
        }
        StopReason::Completed => {
            if !inner {
                notes.push(format!("no event within span {:.6}", traj.config().span));
                return if alpha > -1.0 && alpha < 0.0 && convexity(traj) == Some(1.0) {
                    notes.push("convex and increasing, no blow-up reached".into());
                    Regime::OuterUnboundedConvex
                } else {
                    Regime::Unresolved
                };
            }
            match period_with_tol(traj, config.period_tol / margin) {
                Ok(t) => {
                    report.period = Some(t);
                    let c = v_zero_crossings(traj);
                    let r1 = traj.eval(c[0]).map_or(traj.r0(), |v| v.0);
                    report.extrema = Some((traj.r0().min(r1), traj.r0().max(r1)));
                    Regime::PeriodicInner
                }
                Err(e) => {
                    notes.push(format!("periodicity not established: {e}"));
                    Regime::Unresolved
                }
            }
        }
        StopReason::Blowup => {
            if !v_zero_crossings(traj).is_empty() || convexity(traj) != Some(1.0) {
                notes.push("blow-up without convex monotone growth".into());
                return Regime::Unresolved;
            }
            if alpha > 0.0 {
                match asymptote_angle(traj) {
                    Ok(s1) => {
                        report.blowup_angle = Some(s1);
                        Regime::OuterAsymptotic
                    }
                    Err(e) => {
                        notes.push(format!("asymptote angle failed: {e}"));
                        Regime::Unresolved
                    }
                }
            } else {
                notes.push(format!("blow-up measured at s = {:.12}", traj.reach()));
                Regime::OuterUnboundedConvex
            }
        }
        StopReason::SingularUnit => {
            let defect = match orthogonality_defect(traj) {
                Ok(d) => d,
                Err(e) => {
                    notes.push(e.to_string());
                    return Regime::Unresolved;
                }
            };
            report.orthogonality_defect = Some(defect);
            if !(defect * margin <= config.orthogonality_tol) {
                notes.push(format!("orthogonality defect {defect:e} not below tolerance with margin"));
                return Regime::Unresolved;
            }
            if !v_zero_crossings(traj).is_empty() {
                notes.push("interior critical points before reaching the circle".into());
                return Regime::Unresolved;
            }
            match convexity(traj) {
                Some(s) if s > 0.0 => Regime::OrthogonalHitConvex,
                Some(_) => Regime::OrthogonalHitConcave,
                None => {
                    notes.push("r'' changes sign".into());
                    Regime::Unresolved
                }
            }
        }
        other => {
            notes.push(format!("stopped with {other}"));
            Regime::Unresolved
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conservation::domain_bound_quadrature;
    use std::f64::consts::FRAC_PI_2;

    fn params(alpha: f64) -> PowerParams {
        PowerParams::new(alpha).unwrap()
    }

    #[test]
    fn classify_examples() {
        let cfg = ClassifyConfig::default();
        let r = classify(&params(1.0), 0.25, &cfg).unwrap();
        assert_eq!(r.regime, Regime::PeriodicInner, "{:?}", r.notes);
        let (lo, hi) = r.extrema.unwrap();
        assert!((lo - 0.25).abs() < 1e-6 && (hi - 0.75).abs() < 1e-6);
        assert!(r.period.is_some() && r.blowup_angle.is_none());
        let r = classify(&params(1.0), 2.0, &cfg).unwrap();
        assert_eq!(r.regime, Regime::OuterAsymptotic, "{:?}", r.notes);
        assert!(r.blowup_angle.unwrap() < FRAC_PI_2);
        let r = classify(&params(-0.5), 0.75, &cfg).unwrap();
        assert_eq!(r.regime, Regime::OrthogonalHitConvex, "{:?}", r.notes);
        assert!(r.orthogonality_defect.unwrap() <= 1e-3);
    }

    #[test]
    fn constant_circles() {
        for (a, r0) in [(1.0, 0.5), (3.0, 0.25), (-0.5, 2.0)] {
            let r = classify(&params(a), r0, &ClassifyConfig::default()).unwrap();
            assert_eq!(r.regime, Regime::ConstantCircle);
            assert_eq!(r.extrema, Some((r0, r0)));
            assert!(r.period.is_none());
        }
    }

    #[test]
    fn period_examples() {
        let cfg = SolverConfig::default();
        let t = integrate(&params(1.0), 0.5, &cfg).unwrap();
        assert!(period(&t).is_err());
        let t = integrate(&params(1.0), 0.25, &cfg).unwrap();
        let p = period(&t).unwrap();
        assert!(p > 0.0 && closure_defect(&t, p) <= 1e-6);
        let t = integrate(&params(3.0), 0.2, &cfg).unwrap();
        let p = period(&t).unwrap();
        let c = v_zero_crossings(&t);
        let r1 = t.eval(c[0]).unwrap().0;
        assert!(0.2 < 0.25 && r1 > 0.25, "max {r1} over period {p}");
    }

    #[test]
    fn swap_defect_examples() {
        let cfg = SolverConfig::default();
        let d = half_period_swap_defect(0.25, &cfg).unwrap();
        assert!(d.value() <= 1e-6, "{d:?}");
        assert_eq!(half_period_swap_defect(0.5, &cfg).unwrap().value(), 0.0);
        assert!(half_period_swap_defect(0.4, &cfg).unwrap().value() <= 1e-6);
        assert!(half_period_swap_defect(1.5, &cfg).is_err());
    }

    #[test]
    fn orthogonality_examples() {
        let cfg = SolverConfig::default();
        for (a, r0) in [(-0.5, 0.75), (-3.0, 0.25)] {
            let t = integrate(&params(a), r0, &cfg).unwrap();
            assert!(orthogonality_defect(&t).unwrap() <= 1e-3);
        }
        let t = integrate(&params(1.0), 0.25, &cfg).unwrap();
        assert!(matches!(orthogonality_defect(&t), Err(Error::WrongStopReason { .. })));
    }

    #[test]
    fn power_law_limit_recovers_the_offset() {
        for (l, c, p) in [(0.0, 2.0, 0.16), (0.3, -1.0, 0.5), (1e-3, 5.0, 2.0)] {
            let f = |x: f64| l + c * f64::powf(x, p);
            let pts = [(1e-7, f(1e-7)), (5e-8, f(5e-8)), (1e-8, f(1e-8))];
            let got = power_law_limit(&pts);
            assert!((got - l).abs() <= 1e-9 * (1.0 + c.abs()), "{l} {c} {p}: {got}");
        }
        let flat = [(1e-3, 1e-30), (1e-4, 1e-30), (1e-5, 1e-30)];
        assert_eq!(power_law_limit(&flat), 1e-30);
    }

    #[test]
    fn inversion_examples() {
        let cfg = SolverConfig::default();
        for r0 in [2.0, 3.0, 5.0] {
            let d = inversion_defect(r0, &cfg).unwrap();
            assert!(d <= 1e-6, "r0 {r0}: {d:e}");
        }
        assert!(inversion_defect(1.0, &cfg).is_err());
    }

    #[test]
    fn asymptote_angle_examples() {
        let cfg = SolverConfig::default();
        let mut seen = Vec::new();
        for r0 in [2.0, 3.0, 4.0] {
            let t = integrate(&params(1.0), r0, &cfg).unwrap();
            let s1 = asymptote_angle(&t).unwrap();
            let q = domain_bound_quadrature(1.0, r0, 1e6).unwrap().s1;
            assert!(s1 < FRAC_PI_2 && (s1 - q).abs() <= 1e-4, "{s1} vs {q}");
            seen.push(s1);
        }
        assert!(seen[0] != seen[1] && seen[1] != seen[2]);
        let t = integrate(&params(2.0), 2.0, &cfg).unwrap();
        assert!(asymptote_angle(&t).unwrap() < FRAC_PI_2);
        let t = integrate(&params(1.0), 0.25, &cfg).unwrap();
        assert!(asymptote_angle(&t).is_err());
    }

    #[test]
    fn hausdorff_trend() {
        let cfg = SolverConfig::default();
        let a = hausdorff_to_segment(1e-2, &cfg).unwrap();
        let b = hausdorff_to_segment(1e-3, &cfg).unwrap();
        assert!(b < a, "{a} {b}");
    }

    #[test]
    fn expected_table() {
        let p = params(-0.5);
        assert_eq!(expected_regime(&p, 0.75), Regime::OrthogonalHitConvex);
        assert_eq!(expected_regime(&p, 1.5), Regime::OrthogonalHitConcave);
        assert_eq!(expected_regime(&p, 2.0), Regime::ConstantCircle);
        assert_eq!(expected_regime(&p, 3.0), Regime::OuterUnboundedConvex);
        assert_eq!(expected_regime(&params(-2.0), 0.5), Regime::OrthogonalHitConvex);
        assert_eq!(expected_regime(&params(-2.0), 2.0), Regime::OrthogonalHitConcave);
        assert_eq!(expected_regime(&params(2.0), 0.3), Regime::PeriodicInner);
        assert_eq!(expected_regime(&params(2.0), 3.0), Regime::OuterAsymptotic);
    }

    #[test]
    fn decision_grid_matches_theorems() {
        let cfg = ClassifyConfig::default();
        for a in [3.0, 1.0, 0.5, -0.5, -1.0, -2.0, -3.0] {
            for r0 in [0.2, 0.4, 0.6, 0.8, 1.2, 2.0, 4.0] {
                let p = params(a);
                let r = classify(&p, r0, &cfg).unwrap();
                assert_eq!(r.regime, expected_regime(&p, r0), "alpha {a} r0 {r0}: {:?}", r.notes);
                if let (Regime::PeriodicInner, Some((lo, hi))) = (r.regime, r.extrema) {
                    let eq = 1.0 / (1.0 + a);
                    assert!(lo < eq && eq < hi);
                }
            }
        }
    }
}
