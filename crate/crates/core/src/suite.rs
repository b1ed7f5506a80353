//! The invariant suite behind `catenary check`: one entry per acceptance
//! criterion, each with its tolerance.

use std::f64::consts::FRAC_PI_2;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{
    asymptote_angle, classify, convexity, half_period_swap_defect, hausdorff_to_segment, inversion_defect,
    orthogonality_defect, period, ClassifyConfig, Regime,
};
use crate::conservation::{domain_bound_quadrature, first_integral_residual, g_polynomial, momentum_drift, FirstIntegralForm};
use crate::dynamics::{
    accel, equilibrium, integrate, interpolation_residual, EquilibriumKind, SolverConfig, StopReason, Trajectory,
};
use crate::error::Result;
use crate::io::{read_csv, report_from_json, report_to_json, trajectory_rows, write_csv, ReportJson};
use crate::model::PowerParams;
use crate::variation::{default_step, observed_order, stationarity_defect, BumpBasis, ConstantCurve, Window};

/// Pairs covering every regime, used for the residual and drift checks.
pub const RESIDUAL_PAIRS: [(f64, f64); 20] = [
    (1.0, 0.25),
    (1.0, 0.4),
    (1.0, 0.5),
    (1.0, 2.0),
    (1.0, 4.0),
    (3.0, 0.2),
    (3.0, 2.0),
    (0.5, 0.4),
    (0.5, 1.5),
    (2.0, 0.3),
    (2.0, 3.0),
    (-0.5, 0.75),
    (-0.5, 1.5),
    (-0.5, 4.0),
    (-1.0, 0.5),
    (-1.0, 2.0),
    (-2.0, 0.5),
    (-2.0, 2.0),
    (-3.0, 0.25),
    (-3.0, 2.0),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Criterion {
    ElResidual = 1,
    Conservation = 2,
    GPolynomial = 3,
    PeriodicInner = 4,
    Blowup = 5,
    SingularUnit = 6,
    Inversion = 7,
    Equilibrium = 8,
    Stationarity = 9,
    LimitTrend = 10,
    RoundTrip = 11,
}

impl Criterion {
    pub const ALL: [Criterion; 11] = [
        Criterion::ElResidual,
        Criterion::Conservation,
        Criterion::GPolynomial,
        Criterion::PeriodicInner,
        Criterion::Blowup,
        Criterion::SingularUnit,
        Criterion::Inversion,
        Criterion::Equilibrium,
        Criterion::Stationarity,
        Criterion::LimitTrend,
        Criterion::RoundTrip,
    ];

    pub fn number(&self) -> u8 {
        *self as u8
    }

    pub fn name(&self) -> &'static str {
        match self {
            Criterion::ElResidual => "el-residual",
            Criterion::Conservation => "conservation",
            Criterion::GPolynomial => "g-polynomial",
            Criterion::PeriodicInner => "periodic-inner",
            Criterion::Blowup => "blowup",
            Criterion::SingularUnit => "singular-unit",
            Criterion::Inversion => "inversion",
            Criterion::Equilibrium => "equilibrium",
            Criterion::Stationarity => "stationarity",
            Criterion::LimitTrend => "limit-trend",
            Criterion::RoundTrip => "round-trip",
        }
    }

    /// Accepts a name, a number, or `all`.
    pub fn parse_list(text: &str) -> Option<Vec<Criterion>> {
        let mut out = Vec::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Criterion::ALL);
                continue;
            }
            let c = Criterion::ALL.into_iter().find(|c| c.name() == part || c.number().to_string() == part)?;
            out.push(c);
        }
        out.sort_by_key(Criterion::number);
        out.dedup();
        (!out.is_empty()).then_some(out)
    }

    pub fn run(&self) -> CriterionResult {
        let outcome = match self {
            Criterion::ElResidual => el_residual(),
            Criterion::Conservation => conservation(),
            Criterion::GPolynomial => g_polynomial_exactness(),
            Criterion::PeriodicInner => periodic_inner(),
            Criterion::Blowup => blowup(),
            Criterion::SingularUnit => singular_unit(),
            Criterion::Inversion => inversion(),
            Criterion::Equilibrium => equilibrium_dichotomy(),
            Criterion::Stationarity => stationarity(),
            Criterion::LimitTrend => limit_trend(),
            Criterion::RoundTrip => round_trip(),
        };
        let (passed, detail) = match outcome {
            Ok(checks) => {
                let failed: Vec<&Check> = checks.iter().filter(|c| !c.ok).collect();
                let detail = if failed.is_empty() {
                    checks.iter().map(|c| c.what.as_str()).collect::<Vec<_>>().join("; ")
                } else {
                    failed.iter().map(|c| format!("FAILED {}", c.what)).collect::<Vec<_>>().join("; ")
                };
                (failed.is_empty(), detail)
            }
            Err(e) => (false, format!("error: {e}")),
        };
        CriterionResult { number: self.number(), name: self.name(), passed, detail }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub number: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {:>2} {}: {}", self.number, self.name, self.detail)
    }
}

/// Runs the criteria in parallel; results come back in the given order.
pub fn run(criteria: &[Criterion]) -> Vec<CriterionResult> {
    criteria.par_iter().map(Criterion::run).collect()
}

struct Check {
    ok: bool,
    what: String,
}

fn check(ok: bool, what: impl Into<String>) -> Check {
    Check { ok, what: what.into() }
}

fn params(alpha: f64) -> Result<PowerParams> {
    PowerParams::new(alpha)
}

fn solve(alpha: f64, r0: f64) -> Result<Trajectory> {
    integrate(&params(alpha)?, r0, &SolverConfig::default())
}

fn solve_all(pairs: &[(f64, f64)]) -> Result<Vec<((f64, f64), Trajectory)>> {
    pairs.par_iter().map(|&(a, r0)| Ok(((a, r0), solve(a, r0)?))).collect()
}

fn el_residual() -> Result<Vec<Check>> {
    let runs = solve_all(&RESIDUAL_PAIRS)?;
    let (worst, at) = runs
        .iter()
        .map(|(p, t)| (interpolation_residual(t), *p))
        .fold((0.0, (0.0, 0.0)), |acc, x| if x.0 > acc.0 { x } else { acc });
    Ok(vec![check(
        worst <= 1e-6,
        format!("max midpoint |el_residual|/scale over {} pairs = {worst:.2e} at {at:?} (tol 1e-6)", runs.len()),
    )])
}

fn conservation() -> Result<Vec<Check>> {
    let runs = solve_all(&RESIDUAL_PAIRS)?;
    let regular: Vec<_> =
        runs.iter().filter(|(_, t)| !matches!(t.stop_reason(), StopReason::SingularUnit | StopReason::NearOrigin)).collect();
    let drift = regular.iter().map(|(_, t)| momentum_drift(t)).fold(0.0, f64::max);
    let mut out = vec![check(
        drift <= 1e-8,
        format!("momentum drift over {} non-singular runs = {drift:.2e} (tol 1e-8)", regular.len()),
    )];
    let fi_pairs = [(1.0, 0.25), (1.0, 2.0), (2.0, 0.3), (2.0, 2.0), (3.0, 0.2), (3.0, 1.5)]
        .into_iter()
        .chain([-1.0, -2.0, -3.0].into_iter().flat_map(|a| [(a, 0.5), (a, 2.0)]))
        .collect::<Vec<_>>();
    let fi_runs = solve_all(&fi_pairs)?;
    let mut worst: f64 = 0.0;
    for ((a, r0), t) in &fi_runs {
        let form = FirstIntegralForm::new(&params(*a)?)?;
        for p in t.samples() {
            worst = worst.max(first_integral_residual(&form, *r0, p.r, p.dr)?);
        }
    }
    out.push(check(
        worst <= 1e-8,
        format!("first integral residual, alpha in {{1,2,3,-1,-2,-3}} = {worst:.2e} (tol 1e-8)"),
    ));
    Ok(out)
}

fn big(c: &Ratio<i64>) -> BigRational {
    BigRational::new(BigInt::from(*c.numer()), BigInt::from(*c.denom()))
}

fn g_polynomial_exactness() -> Result<Vec<Check>> {
    let published: [(i32, &[i64]); 3] = [(-1, &[0]), (-2, &[0, 4, -1]), (-3, &[0, 20, -15, 6, -1])];
    let mut out = Vec::new();
    for (a, want) in published {
        let got = g_polynomial(a)?;
        let ok = got.len() == want.len() && got.iter().zip(want).all(|(g, w)| g.is_integer() && g.to_integer() == *w);
        let shown: Vec<String> = got.iter().map(|c| c.to_string()).collect();
        out.push(check(ok, format!("P for alpha = {a}: [{}]", shown.join(", "))));
    }
    // d/dr [c - 1/r^2 - 2 alpha/r + P(r)] against 2((alpha+1)r - 1)(r-1)^(-2 alpha - 1)/r^3, exactly
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for a in -6..=-1 {
        let p: Vec<BigRational> = g_polynomial(a)?.iter().map(big).collect();
        for _ in 0..40 {
            let q: i64 = rng.gen_range(2..=12);
            let n: i64 = rng.gen_range(1..=5 * q);
            if n == q {
                continue;
            }
            let r = BigRational::new(BigInt::from(n), BigInt::from(q));
            let alpha = BigRational::from_integer(BigInt::from(a));
            let two = BigRational::from_integer(BigInt::from(2));
            let r2 = &r * &r;
            let r3 = &r2 * &r;
            let mut dp = BigRational::zero();
            let mut rk = BigRational::one();
            for (k, c) in p.iter().enumerate().skip(1) {
                dp += c * BigRational::from_integer(BigInt::from(k)) * &rk;
                rk *= &r;
            }
            let assembled = &two / &r3 + &two * &alpha / &r2 + dp;
            let mut pw = BigRational::one();
            for _ in 0..(-2 * a - 1) {
                pw *= &r - BigRational::one();
            }
            let expected = &two * ((&alpha + BigRational::one()) * &r - BigRational::one()) * pw / &r3;
            let rel = if expected.is_zero() {
                ratio_to_f64(&(&assembled - &expected)).abs()
            } else {
                ratio_to_f64(&((&assembled - &expected) / &expected)).abs()
            };
            worst = worst.max(rel);
            points += 1;
        }
    }
    out.push(check(
        worst <= 1e-12,
        format!("g' against the g-equation at {points} random rationals, alpha -1..-6: max rel diff {worst:.1e} (tol 1e-12)"),
    ));
    Ok(out)
}

fn ratio_to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::INFINITY)
}

fn periodic_inner() -> Result<Vec<Check>> {
    let cfg = ClassifyConfig::default();
    let p = params(1.0)?;
    let mut out = Vec::new();
    for r0 in [0.2, 0.25, 0.4] {
        let rep = classify(&p, r0, &cfg)?;
        out.push(check(rep.regime == Regime::PeriodicInner, format!("r0 = {r0}: {}", rep.regime)));
        let (lo, hi) = rep.extrema.unwrap_or((f64::NAN, f64::NAN));
        let ext = (lo - r0).abs().max((hi - (1.0 - r0)).abs());
        out.push(check(ext <= 1e-6, format!("r0 = {r0}: extrema ({lo:.9}, {hi:.9}), defect {ext:.1e} (tol 1e-6)")));
        out.push(check(lo < 0.5 && 0.5 < hi, format!("r0 = {r0}: min < 1/2 < max")));
        let swap = half_period_swap_defect(r0, &cfg.solver)?;
        out.push(check(
            swap.value() <= 1e-6,
            format!("r0 = {r0}: half-period swap defect {:.1e} (tol 1e-6)", swap.value()),
        ));
    }
    Ok(out)
}

fn blowup() -> Result<Vec<Check>> {
    let pairs: Vec<(f64, f64)> =
        [1.0, 2.0, 3.0].into_iter().flat_map(|a| [1.5, 2.0, 3.0, 4.0].map(|r0| (a, r0))).collect();
    let runs = solve_all(&pairs)?;
    let mut out = Vec::new();
    let (mut worst_gap, mut max_s1): (f64, f64) = (0.0, 0.0);
    let mut all_blowup = true;
    let mut all_convex = true;
    for ((a, r0), t) in &runs {
        all_blowup &= t.stop_reason() == StopReason::Blowup;
        all_convex &= t.samples().iter().all(|p| accel(*a, p.r, p.dr) > 0.0)
            && t.tail().iter().all(|p| accel(*a, p.r, 1.0 / p.q) > 0.0);
        let s1 = asymptote_angle(t)?;
        let q = domain_bound_quadrature(*a, *r0, 1e6)?.s1;
        worst_gap = worst_gap.max((s1 - q).abs());
        max_s1 = max_s1.max(s1);
    }
    out.push(check(all_blowup, format!("all {} runs stop at Blowup", runs.len())));
    out.push(check(max_s1 < FRAC_PI_2, format!("max s1 = {max_s1:.9} < pi/2")));
    out.push(check(worst_gap <= 1e-4, format!("integration vs quadrature s1 gap {worst_gap:.1e} (tol 1e-4)")));
    out.push(check(all_convex, "r'' > 0 at every sample"));
    Ok(out)
}

fn singular_unit() -> Result<Vec<Check>> {
    let cases = [(-0.5, 0.75, 1.0), (-0.5, 1.5, -1.0), (-3.0, 0.25, 1.0), (-3.0, 2.0, -1.0)];
    let mut out = Vec::new();
    for (a, r0, sign) in cases {
        let t = solve(a, r0)?;
        let stop = t.stop_reason();
        out.push(check(stop == StopReason::SingularUnit, format!("({a}, {r0}) stops at {stop}")));
        if stop == StopReason::SingularUnit {
            let d = orthogonality_defect(&t)?;
            out.push(check(d <= 1e-3, format!("({a}, {r0}) orthogonality defect {d:.1e} (tol 1e-3)")));
        }
        let conv = convexity(&t);
        let label = if sign > 0.0 { "convex" } else { "concave" };
        out.push(check(conv == Some(sign), format!("({a}, {r0}) {label}")));
    }
    Ok(out)
}

fn inversion() -> Result<Vec<Check>> {
    let cfg = SolverConfig::default();
    [2.0, 3.0, 5.0]
        .into_iter()
        .map(|r0| {
            let d = inversion_defect(r0, &cfg)?;
            Ok(check(d <= 1e-6, format!("r0 = {r0}: {d:.1e} (tol 1e-6)")))
        })
        .collect()
}

fn equilibrium_dichotomy() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (a, kind) in [
        (0.5, EquilibriumKind::Center),
        (1.0, EquilibriumKind::Center),
        (3.0, EquilibriumKind::Center),
        (-0.25, EquilibriumKind::Saddle),
        (-0.5, EquilibriumKind::Saddle),
        (-0.75, EquilibriumKind::Saddle),
    ] {
        let got = equilibrium(&params(a)?).map(|e| e.kind);
        out.push(check(got == Some(kind), format!("alpha = {a}: {got:?}")));
    }
    for a in [-1.0, -2.0] {
        out.push(check(equilibrium(&params(a)?).is_none(), format!("alpha = {a}: none")));
    }
    let j = equilibrium(&params(1.0)?).map(|e| e.jacobian);
    out.push(check(j == Some([[0.0, 1.0], [-2.0, 0.0]]), format!("alpha = 1 jacobian {j:?}")));
    Ok(out)
}

fn stationarity() -> Result<Vec<Check>> {
    let p = params(1.0)?;
    let t = solve(1.0, 0.25)?;
    let period = period(&t)?;
    let w = Window::new(&t, -0.5 * period, 0.5 * period)?;
    let basis = BumpBasis::default_for(&w)?;
    let d = stationarity_defect(&p, &w, &basis, default_step(&w))?;
    let control = ConstantCurve { radius: 0.6, lo: -std::f64::consts::PI, hi: std::f64::consts::PI };
    let dc = stationarity_defect(&p, &control, &BumpBasis::default_for(&control)?, default_step(&control))?;
    let hs = [1e-2, 1e-3, 1e-4];
    let ds = hs.iter().map(|&h| stationarity_defect(&p, &w, &basis, h)).collect::<Result<Vec<_>>>()?;
    let order = observed_order(&hs, &ds)?;
    Ok(vec![
        check(d <= 1e-6, format!("solution defect {d:.1e} (tol 1e-6)")),
        check(dc >= 1e-2, format!("control defect {dc:.2e} (min 1e-2)")),
        check(order >= 1.9, format!("observed order {order:.3} (min 1.9)")),
    ])
}

fn limit_trend() -> Result<Vec<Check>> {
    let cfg = SolverConfig::default();
    let a = hausdorff_to_segment(1e-2, &cfg)?;
    let b = hausdorff_to_segment(1e-3, &cfg)?;
    Ok(vec![check(b < a, format!("Hausdorff distance {a:.4e} at r0 = 1e-2, {b:.4e} at r0 = 1e-3"))])
}

fn round_trip() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (a, r0) in [(1.0, 0.25), (-0.5, 0.75), (1.0, 2.0)] {
        let rows = trajectory_rows(&solve(a, r0)?)?;
        let mut text = Vec::new();
        write_csv(&mut text, &rows)?;
        let back = read_csv(&text[..])?;
        let mut again = Vec::new();
        write_csv(&mut again, &back)?;
        let bits = rows.len() == back.len()
            && rows.iter().zip(&back).all(|(x, y)| {
                [x.s, x.r, x.dr, x.kappa, x.j, x.x, x.y]
                    .iter()
                    .zip([y.s, y.r, y.dr, y.kappa, y.j, y.x, y.y])
                    .all(|(u, v)| u.to_bits() == v.to_bits())
            });
        out.push(check(bits && text == again, format!("CSV ({a}, {r0}): {} rows bit-exact", rows.len())));
        let rep = ReportJson::from(&classify(&params(a)?, r0, &ClassifyConfig::default())?);
        let json = report_to_json(&rep)?;
        let parsed = report_from_json(&json)?;
        out.push(check(parsed == rep && report_to_json(&parsed)? == json, format!("JSON ({a}, {r0}) round trip")));
    }
    Ok(out)
}
