//! The phase system `u' = v, v' = F(u, v)`, its integration from
//! `(r0, 0)`, and the equilibrium of the linearized system.
//!
//! Integration runs on `s >= 0` only; the `s < 0` half is the mirror image.
//! For `alpha < 0` a trajectory heading into the unit circle switches to
//! `tau = -ln|r - 1|` as independent variable with state `(s, 1/r')`, which
//! stays regular all the way down to `|r - 1| = eps_unit`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{check_regular, PowerParams, Sample};
use crate::ode::{Dop853, OdeError, StepControl};

/// Largest spacing in `s` between stored samples.
const MAX_SAMPLE_SPACING: f64 = 0.02;
/// Largest spacing in `tau` between samples of the log-mode end game.
const MAX_TAU_SPACING: f64 = 0.005;
/// Minimum number of stored samples per accepted step.
const SAMPLES_PER_STEP: usize = 4;
const LOG_SWITCH_DISTANCE: f64 = 1e-3;
const LOG_SWITCH_SLOPE: f64 = 1e2;
/// Smallest spacing, relative to `max(1, |s|)`, between regular samples
/// produced by the log-mode end game.
const S_RESOLUTION: f64 = 1e-8;

/// A point `(u, v) = (r, r')` of the phase plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub u: f64,
    pub v: f64,
}

impl PhasePoint {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        check_regular(u)?;
        if !v.is_finite() {
            return Err(Error::InvalidParameter(format!("v must be finite, got {v}")));
        }
        Ok(Self { u, v })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StopReason {
    /// The requested span was reached.
    Completed,
    /// `|r - 1|` fell below `eps_unit`.
    SingularUnit,
    /// `r` fell below `eps_origin`.
    NearOrigin,
    /// `|r'|` exceeded `v_max`.
    Blowup,
    /// The step size collapsed before any event fired.
    StepUnderflow,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::Completed => "Completed",
            StopReason::SingularUnit => "SingularUnit",
            StopReason::NearOrigin => "NearOrigin",
            StopReason::Blowup => "Blowup",
            StopReason::StepUnderflow => "StepUnderflow",
        }
    }
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    /// Largest `|s|` to integrate to.
    pub span: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub eps_unit: f64,
    pub eps_origin: f64,
    pub v_max: f64,
    pub max_samples: usize,
    /// Also integrate the `s < 0` half independently instead of relying on
    /// reflection alone.
    pub two_sided: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            span: 4.0 * std::f64::consts::PI,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            eps_unit: 1e-9,
            eps_origin: 1e-9,
            v_max: 1e9,
            max_samples: 1_000_000,
            two_sided: false,
        }
    }
}

impl SolverConfig {
    pub fn with_span(mut self, span: f64) -> Self {
        self.span = span;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {x}")))
            }
        };
        positive("span", self.span)?;
        positive("rel_tol", self.rel_tol)?;
        positive("abs_tol", self.abs_tol)?;
        positive("eps_unit", self.eps_unit)?;
        positive("eps_origin", self.eps_origin)?;
        positive("v_max", self.v_max)?;
        if self.eps_unit >= LOG_SWITCH_DISTANCE {
            return Err(Error::InvalidParameter(format!(
                "eps_unit must be below {LOG_SWITCH_DISTANCE:e}"
            )));
        }
        if self.max_samples < 2 {
            return Err(Error::InvalidParameter("max_samples must be at least 2".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    pub accepted_steps: usize,
    pub evaluations: usize,
    /// `s` at which the log-variable end game took over, if it did.
    pub log_mode_from: Option<f64>,
}

/// A point past the last regular sample, where `s` no longer resolves the
/// motion: `q = 1/r'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailSample {
    pub s: f64,
    pub r: f64,
    pub q: f64,
}

/// Solution of the initial value problem `r(0) = r0, r'(0) = 0`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    params: PowerParams,
    r0: f64,
    samples: Vec<Sample>,
    tail: Vec<TailSample>,
    stop_reason: StopReason,
    config: SolverConfig,
    stats: SolverStats,
    backward: Option<Vec<Sample>>,
}

/// Energy over a trajectory, cut off where the integration stopped short of
/// the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub value: f64,
    pub truncated_at: Option<f64>,
}

impl Trajectory {
    pub fn params(&self) -> &PowerParams {
        &self.params
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    /// Samples on `s >= 0`, starting with `(0, r0, 0)`.
    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    /// Log-mode samples, densely spaced in `ln|r - 1|`, including those too
    /// close in `s` to be stored as regular samples.
    pub fn tail(&self) -> &[TailSample] {
        &self.tail
    }

    pub fn stop_reason(&self) -> StopReason {
        self.stop_reason
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn stats(&self) -> &SolverStats {
        &self.stats
    }

    /// Largest `s` covered by the regular samples.
    pub fn end_s(&self) -> f64 {
        self.samples.last().map_or(0.0, |p| p.s)
    }

    /// Largest `s` reached, including the log-mode tail.
    pub fn reach(&self) -> f64 {
        self.tail.last().map_or(self.end_s(), |t| t.s.max(self.end_s()))
    }

    /// Independently integrated `s <= 0` half in the reflected variable
    /// `sigma = -s`, present in two-sided mode.
    pub fn backward(&self) -> Option<&[Sample]> {
        self.backward.as_deref()
    }

    /// Every sample satisfies `r' = 0`.
    pub fn is_constant(&self) -> bool {
        self.samples.iter().all(|p| p.dr == 0.0)
    }

    /// Samples on `[-end_s, end_s]`, obtained by reflection.
    pub fn mirrored(&self) -> Vec<Sample> {
        let mut out = Vec::with_capacity(2 * self.samples.len() - 1);
        out.extend(self.samples.iter().skip(1).rev().map(|p| Sample::new(-p.s, p.r, -p.dr)));
        out.extend_from_slice(&self.samples);
        out
    }

    /// `(r, r', r'')` at any `s` with `|s| <= end_s`, by quintic Hermite
    /// interpolation between samples.
    pub fn eval(&self, s: f64) -> Option<(f64, f64, f64)> {
        let a = s.abs();
        if !(a <= self.end_s()) {
            return None;
        }
        let sign = if s < 0.0 { -1.0 } else { 1.0 };
        let i = self.samples.partition_point(|p| p.s <= a);
        let (r, dr, ddr) = if i == 0 {
            let p = self.samples[0];
            (p.r, p.dr, accel(self.params.alpha(), p.r, p.dr))
        } else if i >= self.samples.len() {
            let p = self.samples[self.samples.len() - 1];
            (p.r, p.dr, accel(self.params.alpha(), p.r, p.dr))
        } else {
            let (lo, hi) = (self.samples[i - 1], self.samples[i]);
            hermite(self.params.alpha(), &lo, &hi, (a - lo.s) / (hi.s - lo.s))
        };
        Some((r, sign * dr, ddr))
    }

    /// Energy over the mirrored samples.
    pub fn energy(&self) -> Result<EnergyReport> {
        let value = crate::model::energy(&self.params, &self.mirrored())?;
        let truncated_at = (self.stop_reason == StopReason::SingularUnit).then(|| self.end_s());
        Ok(EnergyReport { value, truncated_at })
    }
}

/// `F(u, v)`, the right-hand side of `v' = F`, without domain checks.
pub(crate) fn accel(alpha: f64, u: f64, v: f64) -> f64 {
    u * ((alpha + 1.0) * u - 1.0) / (u - 1.0) + ((alpha + 2.0) * u - 2.0) * v * v / (u * (u - 1.0))
}

/// `(du, dv)` of the phase system.
pub fn vector_field(params: &PowerParams, p: PhasePoint) -> Result<(f64, f64)> {
    check_regular(p.u)?;
    Ok((p.v, accel(params.alpha(), p.u, p.v)))
}

/// `r''` from the Euler–Lagrange equation; the `dv` component of
/// [`vector_field`].
pub fn second_derivative(params: &PowerParams, r: f64, dr: f64) -> Result<f64> {
    vector_field(params, PhasePoint { u: r, v: dr }).map(|(_, dv)| dv)
}

/// Quintic Hermite interpolation through `(r, r', r'')` at both ends, with
/// `r''` taken from the ODE. Returns `(r, r', r'')` at fraction `theta`.
pub(crate) fn hermite(alpha: f64, a: &Sample, b: &Sample, theta: f64) -> (f64, f64, f64) {
    let h = b.s - a.s;
    let (f0, f1) = (a.r, b.r);
    let (d0, d1) = (h * a.dr, h * b.dr);
    let (e0, e1) = (h * h * accel(alpha, a.r, a.dr), h * h * accel(alpha, b.r, b.dr));
    let c0 = f0;
    let c1 = d0;
    let c2 = 0.5 * e0;
    let big_a = f1 - (c0 + c1 + c2);
    let big_b = d1 - (c1 + 2.0 * c2);
    let big_c = e1 - 2.0 * c2;
    let c3 = 10.0 * big_a - 4.0 * big_b + 0.5 * big_c;
    let c4 = -15.0 * big_a + 7.0 * big_b - big_c;
    let c5 = 6.0 * big_a - 3.0 * big_b + 0.5 * big_c;
    let t = theta;
    let p = c0 + t * (c1 + t * (c2 + t * (c3 + t * (c4 + t * c5))));
    let dp = c1 + t * (2.0 * c2 + t * (3.0 * c3 + t * (4.0 * c4 + t * 5.0 * c5)));
    let ddp = 2.0 * c2 + t * (6.0 * c3 + t * (12.0 * c4 + t * 20.0 * c5));
    (p, dp / h, ddp / (h * h))
}

/// Largest `|el_residual| / el_scale` of the interpolant at the midpoint of
/// every pair of consecutive samples.
pub fn interpolation_residual(traj: &Trajectory) -> f64 {
    let alpha = traj.params.alpha();
    traj.samples
        .windows(2)
        .map(|w| {
            let (r, dr, ddr) = hermite(alpha, &w[0], &w[1], 0.5);
            let res = crate::model::el_residual(&traj.params, r, dr, ddr).unwrap_or(f64::INFINITY);
            let scale = crate::model::el_scale(&traj.params, r, dr, ddr);
            if res == 0.0 {
                0.0
            } else {
                res.abs() / scale
            }
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EquilibriumKind {
    Center,
    Saddle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumInfo {
    pub point: PhasePoint,
    pub jacobian: [[f64; 2]; 2],
    pub eigenvalues: [Complex64; 2],
    pub kind: EquilibriumKind,
}

/// The equilibrium `(1/(1+alpha), 0)` and its linearization; `None` when
/// `alpha <= -1`.
pub fn equilibrium(params: &PowerParams) -> Option<EquilibriumInfo> {
    let u = params.equilibrium_radius()?;
    let alpha = params.alpha();
    let k = -(alpha + 1.0) / alpha;
    let (eigenvalues, kind) = if k < 0.0 {
        let w = (-k).sqrt();
        ([Complex64::new(0.0, w), Complex64::new(0.0, -w)], EquilibriumKind::Center)
    } else {
        let w = k.sqrt();
        ([Complex64::new(w, 0.0), Complex64::new(-w, 0.0)], EquilibriumKind::Saddle)
    };
    Some(EquilibriumInfo {
        point: PhasePoint { u, v: 0.0 },
        jacobian: [[0.0, 1.0], [k, 0.0]],
        eigenvalues,
        kind,
    })
}

/// Interior `s > 0` where `r'` changes sign, refined on the interpolant.
/// A constant trajectory has none.
pub fn v_zero_crossings(traj: &Trajectory) -> Vec<f64> {
    let alpha = traj.params.alpha();
    let tol = traj.config.abs_tol;
    let samples = &traj.samples;
    let mut out = Vec::new();
    if traj.is_constant() {
        return out;
    }
    let last = samples.len() - 1;
    for i in 1..last {
        let (a, b) = (samples[i], samples[i + 1]);
        if a.dr == 0.0 {
            if samples[i - 1].dr * b.dr < 0.0 {
                out.push(a.s);
            }
            continue;
        }
        if a.dr * b.dr < 0.0 {
            let (mut lo, mut hi) = (0.0, 1.0);
            let h = b.s - a.s;
            while (hi - lo) * h > tol && hi - lo > 1e-15 {
                let mid = 0.5 * (lo + hi);
                let (_, dr, _) = hermite(alpha, &a, &b, mid);
                if dr * a.dr > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(a.s + 0.5 * (lo + hi) * h);
        }
    }
    out
}

/// Integrates from `(r0, 0)` until `span` or an event.
pub fn integrate(params: &PowerParams, r0: f64, config: &SolverConfig) -> Result<Trajectory> {
    check_regular(r0)?;
    config.validate()?;
    let forward = run(params, 0.0, r0, 0.0, config)?;
    let mut traj = Trajectory {
        params: *params,
        r0,
        samples: forward.samples,
        tail: forward.tail,
        stop_reason: forward.stop,
        config: *config,
        stats: forward.stats,
        backward: None,
    };
    if config.two_sided {
        // Start from a state well inside s > 0 and run through s = 0 into
        // the negative half, with the time-reversed state (u, -v).
        let anchor = traj.samples[traj.samples.len() / 2];
        let back = run(params, -anchor.s, anchor.r, -anchor.dr, config)?;
        traj.stats.accepted_steps += back.stats.accepted_steps;
        traj.stats.evaluations += back.stats.evaluations;
        traj.backward = Some(back.samples);
    }
    Ok(traj)
}

/// Largest `|r_backward(sigma) - r(sigma)|` relative to `max(1, r)` over
/// `|sigma| <= 0.99 end_s`; `None` unless the trajectory was integrated
/// two-sided. The last percent is left out because near an event the
/// solution is ill-conditioned in `s`.
pub fn reflection_defect(traj: &Trajectory) -> Option<f64> {
    let back = traj.backward()?;
    let limit = 0.99 * traj.end_s();
    Some(
        back.iter()
            .filter(|p| p.s.abs() <= limit)
            .filter_map(|p| {
                let (r, _, _) = traj.eval(p.s)?;
                Some((p.r - r).abs() / r.abs().max(1.0))
            })
            .fold(0.0, f64::max),
    )
}

struct HalfRun {
    samples: Vec<Sample>,
    tail: Vec<TailSample>,
    stop: StopReason,
    stats: SolverStats,
}

enum Event {
    LogSwitch,
    Stop(StopReason),
}

fn detect(alpha: f64, y: &[f64; 2], cfg: &SolverConfig) -> Option<Event> {
    let (u, v) = (y[0], y[1]);
    let d = u - 1.0;
    if alpha < 0.0 && v * d < 0.0 && (d.abs() < LOG_SWITCH_DISTANCE || v.abs() > LOG_SWITCH_SLOPE) {
        return Some(Event::LogSwitch);
    }
    stop_event(y, cfg).map(Event::Stop)
}

fn stop_event(y: &[f64; 2], cfg: &SolverConfig) -> Option<StopReason> {
    if y[0] < cfg.eps_origin {
        Some(StopReason::NearOrigin)
    } else if y[1].abs() > cfg.v_max {
        Some(StopReason::Blowup)
    } else if (y[0] - 1.0).abs() < cfg.eps_unit {
        Some(StopReason::SingularUnit)
    } else {
        None
    }
}

fn resolved(samples: &[Sample], s: f64) -> bool {
    samples.last().is_none_or(|q| s - q.s >= S_RESOLUTION * q.s.abs().max(1.0))
}

fn push(samples: &mut Vec<Sample>, p: Sample, limit: usize) -> Result<()> {
    if samples.last().is_some_and(|q| p.s <= q.s) {
        return Ok(());
    }
    if samples.len() >= limit {
        return Err(Error::SampleBudget { limit });
    }
    samples.push(p);
    Ok(())
}

/// Integrates in `t` from `(u0, v0)` at `t0` up to `cfg.span`.
fn run(params: &PowerParams, t0: f64, u0: f64, v0: f64, cfg: &SolverConfig) -> Result<HalfRun> {
    let alpha = params.alpha();
    let side = (u0 - 1.0).signum();
    let rhs = move |_t: f64, y: &[f64; 2]| [y[1], accel(alpha, y[0], y[1])];
    let valid = move |y: &[f64; 2]| y[0] > 0.0 && (y[0] - 1.0) * side > 0.0;
    let control = StepControl {
        rel_tol: cfg.rel_tol,
        abs_tol: [cfg.abs_tol; 2],
        h_max: 0.1,
        h_init: None,
    };
    let mut solver = Dop853::new(rhs, t0, [u0, v0], control)?;
    let mut samples = vec![Sample::new(t0, u0, v0)];
    let mut stats = SolverStats::default();

    let mut switch_at: Option<Sample> = None;
    let mut tail = Vec::new();
    let stop = 'outer: loop {
        if solver.t() >= cfg.span {
            break StopReason::Completed;
        }
        let step = match solver.step(cfg.span, valid) {
            Ok(step) => step,
            Err(OdeError::StepUnderflow { .. }) => break StopReason::StepUnderflow,
            Err(e) => return Err(e.into()),
        };
        let n = SAMPLES_PER_STEP.max((step.h / MAX_SAMPLE_SPACING).ceil() as usize);
        let mut prev = 0.0;
        for k in 1..=n {
            let theta = k as f64 / n as f64;
            let y = step.at_fraction(theta);
            let t = if k == n { step.t1() } else { step.t0 + theta * step.h };
            match detect(alpha, &y, cfg) {
                Some(Event::LogSwitch) => {
                    let p = Sample::new(t, y[0], y[1]);
                    push(&mut samples, p, cfg.max_samples)?;
                    switch_at = Some(p);
                    break 'outer StopReason::SingularUnit;
                }
                Some(Event::Stop(reason)) => {
                    let (mut lo, mut hi) = (prev, theta);
                    while (hi - lo) * step.h > cfg.abs_tol && hi - lo > 1e-15 {
                        let mid = 0.5 * (lo + hi);
                        if stop_event(&step.at_fraction(mid), cfg) == Some(reason) {
                            hi = mid;
                        } else {
                            lo = mid;
                        }
                    }
                    let y = step.at_fraction(hi);
                    let p = Sample::new(step.t0 + hi * step.h, y[0], y[1]);
                    if tail.is_empty() && p.dr.abs() > LOG_SWITCH_SLOPE && !resolved(&samples, p.s) {
                        let q = samples[samples.len() - 1];
                        tail.push(TailSample { s: q.s, r: q.r, q: 1.0 / q.dr });
                    }
                    if !tail.is_empty() {
                        tail.push(TailSample { s: p.s, r: p.r, q: 1.0 / p.dr });
                        break 'outer reason;
                    }
                    // The event sample replaces predecessors that `s`
                    // cannot separate from it.
                    while samples.len() > 1 && !resolved(&samples, p.s) {
                        samples.pop();
                    }
                    push(&mut samples, p, cfg.max_samples)?;
                    break 'outer reason;
                }
                None if !tail.is_empty() => tail.push(TailSample { s: t, r: y[0], q: 1.0 / y[1] }),
                // On a steep approach that `s` no longer resolves, the rest
                // goes to the tail, starting from the last sample.
                None if y[1].abs() > LOG_SWITCH_SLOPE && !resolved(&samples, t) => {
                    let q = samples[samples.len() - 1];
                    tail.push(TailSample { s: q.s, r: q.r, q: 1.0 / q.dr });
                    tail.push(TailSample { s: t, r: y[0], q: 1.0 / y[1] });
                }
                None => push(&mut samples, Sample::new(t, y[0], y[1]), cfg.max_samples)?,
            }
            prev = theta;
        }
    };
    stats.accepted_steps += solver.accepted_steps();
    stats.evaluations += solver.evaluations();

    if let Some(p) = switch_at {
        stats.log_mode_from = Some(p.s);
        run_log(alpha, p, cfg, &mut samples, &mut tail, &mut stats)?;
    }
    Ok(HalfRun { samples, tail, stop, stats })
}

/// End game towards the unit circle in `tau = -ln|r - 1|` with state
/// `(s, q = 1/r')`.
fn run_log(
    alpha: f64,
    start: Sample,
    cfg: &SolverConfig,
    samples: &mut Vec<Sample>,
    tail: &mut Vec<TailSample>,
    stats: &mut SolverStats,
) -> Result<()> {
    let sigma = (start.r - 1.0).signum();
    let tau0 = -(start.r - 1.0).abs().ln();
    let tau_end = -cfg.eps_unit.ln();
    let q0 = 1.0 / start.dr;
    tail.push(TailSample { s: start.s, r: start.r, q: q0 });
    if tau0 >= tau_end {
        return Ok(());
    }
    let rhs = move |tau: f64, y: &[f64; 2]| {
        let d = sigma * (-tau).exp();
        let r = 1.0 + d;
        let q = y[1];
        [
            -q * d,
            (((alpha + 2.0) * r - 2.0) * q + ((alpha + 1.0) * r - 1.0) * r * r * q * q * q) / r,
        ]
    };
    let control = StepControl {
        rel_tol: cfg.rel_tol,
        abs_tol: [cfg.abs_tol, f64::MIN_POSITIVE],
        h_max: 0.1,
        h_init: None,
    };
    let mut solver = Dop853::new(rhs, tau0, [start.s, q0], control)?;
    // Regular samples stop at the first one that `s` can no longer separate
    // from its predecessor; the tail carries on alone from there.
    let mut resolved = true;
    while solver.t() < tau_end {
        let step = solver.step(tau_end, |_| true)?;
        let n = SAMPLES_PER_STEP.max((step.h / MAX_TAU_SPACING).ceil() as usize);
        for k in 1..=n {
            let theta = k as f64 / n as f64;
            let y = step.at_fraction(theta);
            let tau = if k == n { step.t1() } else { step.t0 + theta * step.h };
            let r = 1.0 + sigma * (-tau).exp();
            tail.push(TailSample { s: y[0], r, q: y[1] });
            if resolved {
                resolved = self::resolved(samples, y[0]);
                if resolved {
                    push(samples, Sample::new(y[0], r, 1.0 / y[1]), cfg.max_samples)?;
                }
            }
        }
    }
    stats.accepted_steps += solver.accepted_steps();
    stats.evaluations += solver.evaluations();
    Ok(())
}
