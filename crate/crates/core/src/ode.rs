//! Dormand–Prince 8(5,3) stepper with 7th-order dense output.
//!
//! The stepper only advances forward in its independent variable; callers
//! that need to run backwards change variables instead. Each accepted step
//! hands back a [`DenseStep`] that can be evaluated anywhere on the step.

use thiserror::Error;

use coefficients::*;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("step size collapsed to {h:e} at t = {t}")]
    StepUnderflow { t: f64, h: f64 },
    #[error("right-hand side is not finite at the initial point t = {t}")]
    NonFiniteStart { t: f64 },
}

/// Controller and tolerance settings.
#[derive(Debug, Clone, Copy)]
pub struct StepControl<const N: usize> {
    pub rel_tol: f64,
    pub abs_tol: [f64; N],
    pub h_max: f64,
    pub h_init: Option<f64>,
}

/// Dense output for one accepted step on `[t0, t0 + h]`.
#[derive(Debug, Clone, Copy)]
pub struct DenseStep<const N: usize> {
    pub t0: f64,
    pub h: f64,
    pub y0: [f64; N],
    pub y1: [f64; N],
    cont: [[f64; N]; 8],
}

impl<const N: usize> DenseStep<N> {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    /// Evaluates the interpolant at `t`; `t` should lie in the step.
    pub fn at(&self, t: f64) -> [f64; N] {
        self.at_fraction((t - self.t0) / self.h)
    }

    /// Evaluates at fraction `theta` of the step. The end points return
    /// the stored states exactly.
    pub fn at_fraction(&self, theta: f64) -> [f64; N] {
        if theta <= 0.0 {
            return self.y0;
        }
        if theta >= 1.0 {
            return self.y1;
        }
        let t1 = 1.0 - theta;
        let c = &self.cont;
        let mut out = [0.0; N];
        for i in 0..N {
            let conpar = c[4][i] + theta * (c[5][i] + t1 * (c[6][i] + theta * c[7][i]));
            out[i] = c[0][i]
                + theta * (c[1][i] + t1 * (c[2][i] + theta * (c[3][i] + t1 * conpar)));
        }
        out
    }
}

pub struct Dop853<F, const N: usize>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    rhs: F,
    control: StepControl<N>,
    t: f64,
    y: [f64; N],
    dy: [f64; N],
    h: f64,
    facold: f64,
    rejected: bool,
    accepted: usize,
    evaluations: usize,
}

const SAFE: f64 = 0.9;
const FACC1: f64 = 1.0 / 0.333;
const FACC2: f64 = 1.0 / 6.0;
// Lund stabilisation: a PI controller on log(err).
const BETA: f64 = 0.04;
const EXPO1: f64 = 1.0 / 8.0 - BETA * 0.2;

fn is_finite<const N: usize>(y: &[f64; N]) -> bool {
    y.iter().all(|v| v.is_finite())
}

/// `y + h * sum(coef_j * k_j)`.
fn combine<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

fn lin<const N: usize>(terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = [0.0; N];
    for i in 0..N {
        for (c, k) in terms {
            out[i] += c * k[i];
        }
    }
    out
}

impl<F, const N: usize> Dop853<F, N>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    pub fn new(rhs: F, t0: f64, y0: [f64; N], control: StepControl<N>) -> Result<Self, OdeError> {
        let dy = rhs(t0, &y0);
        if !is_finite(&dy) || !is_finite(&y0) {
            return Err(OdeError::NonFiniteStart { t: t0 });
        }
        let mut solver = Self {
            rhs,
            control,
            t: t0,
            y: y0,
            dy,
            h: 0.0,
            facold: 1e-4,
            rejected: false,
            accepted: 0,
            evaluations: 1,
        };
        solver.h = match control.h_init {
            Some(h) => h.min(control.h_max),
            None => solver.initial_step(),
        };
        Ok(solver)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[f64; N] {
        &self.y
    }

    pub fn accepted_steps(&self) -> usize {
        self.accepted
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    fn scale(&self, i: usize, a: f64, b: f64) -> f64 {
        self.control.abs_tol[i] + self.control.rel_tol * a.abs().max(b.abs())
    }

    fn initial_step(&mut self) -> f64 {
        let mut dnf = 0.0;
        let mut dny = 0.0;
        for i in 0..N {
            let sk = self.scale(i, self.y[i], 0.0);
            dnf += (self.dy[i] / sk).powi(2);
            dny += (self.y[i] / sk).powi(2);
        }
        let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
            1e-6
        } else {
            (dny / dnf).sqrt() * 0.01
        };
        h = h.min(self.control.h_max);
        let probe = combine(&self.y, h, &[(1.0, &self.dy)]);
        let k2 = (self.rhs)(self.t + h, &probe);
        self.evaluations += 1;
        let mut der2 = 0.0;
        for i in 0..N {
            let sk = self.scale(i, self.y[i], 0.0);
            der2 += ((k2[i] - self.dy[i]) / sk).powi(2);
        }
        let der2 = if der2.is_finite() { der2.sqrt() / h } else { 0.0 };
        let der12 = der2.max(dnf.sqrt());
        let h1 = if der12 <= 1e-15 {
            (h * 1e-3).max(1e-6)
        } else {
            (0.01 / der12).powf(1.0 / 8.0)
        };
        (100.0 * h).min(h1).min(self.control.h_max)
    }

    /// Advances one accepted step, never past `t_limit`. A trial step whose
    /// end state fails `valid` (or is not finite) is rejected and retried
    /// with half the size.
    pub fn step<V>(&mut self, t_limit: f64, valid: V) -> Result<DenseStep<N>, OdeError>
    where
        V: Fn(&[f64; N]) -> bool,
    {
        loop {
            let remaining = t_limit - self.t;
            let mut h = self.h.min(self.control.h_max);
            let mut last = false;
            if h >= remaining {
                h = remaining;
                last = true;
            }
            let floor = 1e-15 * self.t.abs().max(1.0);
            if h <= floor {
                return Err(OdeError::StepUnderflow { t: self.t, h });
            }
            match self.attempt(h, last, t_limit, &valid) {
                Some(step) => return Ok(step),
                None => continue,
            }
        }
    }

    fn attempt<V>(&mut self, h: f64, last: bool, t_limit: f64, valid: &V) -> Option<DenseStep<N>>
    where
        V: Fn(&[f64; N]) -> bool,
    {
        let f = &self.rhs;
        let (t, y, k1) = (self.t, self.y, self.dy);
        let k2 = f(t + C2 * h, &combine(&y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &combine(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * h, &combine(&y, h, &[(A41, &k1), (A43, &k3)]));
        let k5 = f(t + C5 * h, &combine(&y, h, &[(A51, &k1), (A53, &k3), (A54, &k4)]));
        let k6 = f(t + C6 * h, &combine(&y, h, &[(A61, &k1), (A64, &k4), (A65, &k5)]));
        let k7 = f(
            t + C7 * h,
            &combine(&y, h, &[(A71, &k1), (A74, &k4), (A75, &k5), (A76, &k6)]),
        );
        let k8 = f(
            t + C8 * h,
            &combine(&y, h, &[(A81, &k1), (A84, &k4), (A85, &k5), (A86, &k6), (A87, &k7)]),
        );
        let k9 = f(
            t + C9 * h,
            &combine(
                &y,
                h,
                &[(A91, &k1), (A94, &k4), (A95, &k5), (A96, &k6), (A97, &k7), (A98, &k8)],
            ),
        );
        let k10 = f(
            t + C10 * h,
            &combine(
                &y,
                h,
                &[
                    (A101, &k1),
                    (A104, &k4),
                    (A105, &k5),
                    (A106, &k6),
                    (A107, &k7),
                    (A108, &k8),
                    (A109, &k9),
                ],
            ),
        );
        let k11 = f(
            t + C11 * h,
            &combine(
                &y,
                h,
                &[
                    (A111, &k1),
                    (A114, &k4),
                    (A115, &k5),
                    (A116, &k6),
                    (A117, &k7),
                    (A118, &k8),
                    (A119, &k9),
                    (A1110, &k10),
                ],
            ),
        );
        let t_new = if last { t_limit } else { t + h };
        let y12 = combine(
            &y,
            h,
            &[
                (A121, &k1),
                (A124, &k4),
                (A125, &k5),
                (A126, &k6),
                (A127, &k7),
                (A128, &k8),
                (A129, &k9),
                (A1210, &k10),
                (A1211, &k11),
            ],
        );
        let k12 = f(t_new, &y12);
        self.evaluations += 11;
        let incr = lin(&[
            (B1, &k1),
            (B6, &k6),
            (B7, &k7),
            (B8, &k8),
            (B9, &k9),
            (B10, &k10),
            (B11, &k11),
            (B12, &k12),
        ]);
        let y_new = combine(&y, h, &[(1.0, &incr)]);

        let mut err = 0.0;
        let mut err2 = 0.0;
        for i in 0..N {
            let sk = self.scale(i, y[i], y_new[i]);
            let e2 = incr[i] - BHH1 * k1[i] - BHH2 * k9[i] - BHH3 * k12[i];
            err2 += (e2 / sk).powi(2);
            let e = ER1 * k1[i]
                + ER6 * k6[i]
                + ER7 * k7[i]
                + ER8 * k8[i]
                + ER9 * k9[i]
                + ER10 * k10[i]
                + ER11 * k11[i]
                + ER12 * k12[i];
            err += (e / sk).powi(2);
        }
        let mut deno = err + 0.01 * err2;
        if deno <= 0.0 {
            deno = 1.0;
        }
        let err = h * err * (1.0 / (deno * N as f64)).sqrt();

        if !err.is_finite() || !is_finite(&y_new) || !valid(&y_new) {
            self.h = 0.5 * h;
            self.rejected = true;
            return None;
        }

        let fac11 = err.powf(EXPO1);
        let fac = FACC2.max(FACC1.min(fac11 / self.facold.powf(BETA) / SAFE));
        let mut h_new = h / fac;

        if err > 1.0 {
            self.h = h / FACC1.min(fac11 / SAFE);
            self.rejected = true;
            return None;
        }

        let k_new = f(t_new, &y_new);
        self.evaluations += 1;
        if !is_finite(&k_new) {
            self.h = 0.5 * h;
            self.rejected = true;
            return None;
        }

        // dense output
        let ydiff = lin(&[(1.0, &y_new), (-1.0, &y)]);
        let bspl = lin(&[(h, &k1), (-1.0, &ydiff)]);
        let cont3 = bspl;
        let cont4 = lin(&[(1.0, &ydiff), (-h, &k_new), (-1.0, &bspl)]);
        let mut c5 = lin(&[
            (D41, &k1),
            (D46, &k6),
            (D47, &k7),
            (D48, &k8),
            (D49, &k9),
            (D410, &k10),
            (D411, &k11),
            (D412, &k12),
        ]);
        let mut c6 = lin(&[
            (D51, &k1),
            (D56, &k6),
            (D57, &k7),
            (D58, &k8),
            (D59, &k9),
            (D510, &k10),
            (D511, &k11),
            (D512, &k12),
        ]);
        let mut c7 = lin(&[
            (D61, &k1),
            (D66, &k6),
            (D67, &k7),
            (D68, &k8),
            (D69, &k9),
            (D610, &k10),
            (D611, &k11),
            (D612, &k12),
        ]);
        let mut c8 = lin(&[
            (D71, &k1),
            (D76, &k6),
            (D77, &k7),
            (D78, &k8),
            (D79, &k9),
            (D710, &k10),
            (D711, &k11),
            (D712, &k12),
        ]);
        let k14 = f(
            t + C14 * h,
            &combine(
                &y,
                h,
                &[
                    (A141, &k1),
                    (A147, &k7),
                    (A148, &k8),
                    (A149, &k9),
                    (A1410, &k10),
                    (A1411, &k11),
                    (A1412, &k12),
                    (A1413, &k_new),
                ],
            ),
        );
        let k15 = f(
            t + C15 * h,
            &combine(
                &y,
                h,
                &[
                    (A151, &k1),
                    (A156, &k6),
                    (A157, &k7),
                    (A158, &k8),
                    (A1511, &k11),
                    (A1512, &k12),
                    (A1513, &k_new),
                    (A1514, &k14),
                ],
            ),
        );
        let k16 = f(
            t + C16 * h,
            &combine(
                &y,
                h,
                &[
                    (A161, &k1),
                    (A166, &k6),
                    (A167, &k7),
                    (A168, &k8),
                    (A169, &k9),
                    (A1613, &k_new),
                    (A1614, &k14),
                    (A1615, &k15),
                ],
            ),
        );
        self.evaluations += 3;
        for i in 0..N {
            c5[i] = h * (c5[i] + D413 * k_new[i] + D414 * k14[i] + D415 * k15[i] + D416 * k16[i]);
            c6[i] = h * (c6[i] + D513 * k_new[i] + D514 * k14[i] + D515 * k15[i] + D516 * k16[i]);
            c7[i] = h * (c7[i] + D613 * k_new[i] + D614 * k14[i] + D615 * k15[i] + D616 * k16[i]);
            c8[i] = h * (c8[i] + D713 * k_new[i] + D714 * k14[i] + D715 * k15[i] + D716 * k16[i]);
        }
        let dense = DenseStep {
            t0: t,
            h: t_new - t,
            y0: y,
            y1: y_new,
            cont: [y, ydiff, cont3, cont4, c5, c6, c7, c8],
        };

        self.facold = err.max(1e-4);
        if self.rejected {
            h_new = h_new.min(h);
        }
        self.rejected = false;
        self.accepted += 1;
        self.t = t_new;
        self.y = y_new;
        self.dy = k_new;
        self.h = h_new;
        Some(dense)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn control(rel: f64) -> StepControl<2> {
        StepControl { rel_tol: rel, abs_tol: [rel * 1e-2; 2], h_max: f64::INFINITY, h_init: None }
    }

    #[test]
    fn harmonic_oscillator_matches_closed_form() {
        let mut solver =
            Dop853::new(|_t, y: &[f64; 2]| [y[1], -y[0]], 0.0, [1.0, 0.0], control(1e-12)).unwrap();
        let mut worst: f64 = 0.0;
        while solver.t() < 20.0 {
            let step = solver.step(20.0, |_| true).unwrap();
            for j in 0..=10 {
                let t = step.t0 + step.h * j as f64 / 10.0;
                let y = step.at(t);
                worst = worst.max((y[0] - t.cos()).abs()).max((y[1] + t.sin()).abs());
            }
        }
        assert_eq!(solver.t(), 20.0);
        assert!(worst < 1e-10, "dense output error {worst:e}");
    }

    #[test]
    fn dense_output_is_seventh_order() {
        // one fixed step of size h on y' = y; the interpolant error at the
        // midpoint should shrink by about 2^8 when h halves
        let mid_err = |h: f64| {
            let ctl = StepControl { rel_tol: 1.0, abs_tol: [1.0], h_max: h, h_init: Some(h) };
            let mut s = Dop853::new(|_t, y: &[f64; 1]| [y[0]], 0.0, [1.0], ctl).unwrap();
            let step = s.step(h, |_| true).unwrap();
            (step.at(0.5 * h)[0] - (0.5 * h).exp()).abs()
        };
        let ratio = mid_err(0.4) / mid_err(0.2);
        assert!(ratio > 100.0, "ratio {ratio}");
    }

    #[test]
    fn invalid_states_are_rejected() {
        // y' = 1 from 0, refuse any state above 0.5: the solver must shrink
        // until it underflows instead of stepping over the wall
        let ctl = StepControl { rel_tol: 1e-8, abs_tol: [1e-10], h_max: 1.0, h_init: Some(1.0) };
        let mut s = Dop853::new(|_t, _y: &[f64; 1]| [1.0], 0.0, [0.0], ctl).unwrap();
        let mut result = Ok(());
        for _ in 0..10_000 {
            match s.step(2.0, |y| y[0] <= 0.5) {
                Ok(_) => {}
                Err(e) => {
                    result = Err(e);
                    break;
                }
            }
        }
        assert!(matches!(result, Err(OdeError::StepUnderflow { .. })));
        assert!(s.y()[0] <= 0.5);
    }
}

#[allow(clippy::excessive_precision, clippy::unreadable_literal)]
mod coefficients {
    pub(super) const A21: f64 = 5.26001519587677318785587544488E-2;
    pub(super) const A31: f64 = 1.97250569845378994544595329183E-2;
    pub(super) const A32: f64 = 5.91751709536136983633785987549E-2;
    pub(super) const A41: f64 = 2.95875854768068491816892993775E-2;
    pub(super) const A43: f64 = 8.87627564304205475450678981324E-2;
    pub(super) const A51: f64 = 2.41365134159266685502369798665E-1;
    pub(super) const A53: f64 = -8.84549479328286085344864962717E-1;
    pub(super) const A54: f64 = 9.24834003261792003115737966543E-1;
    pub(super) const A61: f64 = 3.7037037037037037037037037037E-2;
    pub(super) const A64: f64 = 1.70828608729473871279604482173E-1;
    pub(super) const A65: f64 = 1.25467687566822425016691814123E-1;
    pub(super) const A71: f64 = 3.7109375E-2;
    pub(super) const A74: f64 = 1.70252211019544039314978060272E-1;
    pub(super) const A75: f64 = 6.02165389804559606850219397283E-2;
    pub(super) const A76: f64 = -1.7578125E-2;
    pub(super) const A81: f64 = 3.70920001185047927108779319836E-2;
    pub(super) const A84: f64 = 1.70383925712239993810214054705E-1;
    pub(super) const A85: f64 = 1.07262030446373284651809199168E-1;
    pub(super) const A86: f64 = -1.53194377486244017527936158236E-2;
    pub(super) const A87: f64 = 8.27378916381402288758473766002E-3;
    pub(super) const A91: f64 = 6.24110958716075717114429577812E-1;
    pub(super) const A94: f64 = -3.36089262944694129406857109825E0;
    pub(super) const A95: f64 = -8.68219346841726006818189891453E-1;
    pub(super) const A96: f64 = 2.75920996994467083049415600797E1;
    pub(super) const A97: f64 = 2.01540675504778934086186788979E1;
    pub(super) const A98: f64 = -4.34898841810699588477366255144E1;
    pub(super) const A101: f64 = 4.77662536438264365890433908527E-1;
    pub(super) const A104: f64 = -2.48811461997166764192642586468E0;
    pub(super) const A105: f64 = -5.90290826836842996371446475743E-1;
    pub(super) const A106: f64 = 2.12300514481811942347288949897E1;
    pub(super) const A107: f64 = 1.52792336328824235832596922938E1;
    pub(super) const A108: f64 = -3.32882109689848629194453265587E1;
    pub(super) const A109: f64 = -2.03312017085086261358222928593E-2;
    pub(super) const A111: f64 = -9.3714243008598732571704021658E-1;
    pub(super) const A114: f64 = 5.18637242884406370830023853209E0;
    pub(super) const A115: f64 = 1.09143734899672957818500254654E0;
    pub(super) const A116: f64 = -8.14978701074692612513997267357E0;
    pub(super) const A117: f64 = -1.85200656599969598641566180701E1;
    pub(super) const A118: f64 = 2.27394870993505042818970056734E1;
    pub(super) const A119: f64 = 2.49360555267965238987089396762E0;
    pub(super) const A1110: f64 = -3.0467644718982195003823669022E0;
    pub(super) const A121: f64 = 2.27331014751653820792359768449E0;
    pub(super) const A124: f64 = -1.05344954667372501984066689879E1;
    pub(super) const A125: f64 = -2.00087205822486249909675718444E0;
    pub(super) const A126: f64 = -1.79589318631187989172765950534E1;
    pub(super) const A127: f64 = 2.79488845294199600508499808837E1;
    pub(super) const A128: f64 = -2.85899827713502369474065508674E0;
    pub(super) const A129: f64 = -8.87285693353062954433549289258E0;
    pub(super) const A1210: f64 = 1.23605671757943030647266201528E1;
    pub(super) const A1211: f64 = 6.43392746015763530355970484046E-1;
    pub(super) const A141: f64 = 5.61675022830479523392909219681E-2;
    pub(super) const A147: f64 = 2.53500210216624811088794765333E-1;
    pub(super) const A148: f64 = -2.46239037470802489917441475441E-1;
    pub(super) const A149: f64 = -1.24191423263816360469010140626E-1;
    pub(super) const A1410: f64 = 1.5329179827876569731206322685E-1;
    pub(super) const A1411: f64 = 8.20105229563468988491666602057E-3;
    pub(super) const A1412: f64 = 7.56789766054569976138603589584E-3;
    pub(super) const A1413: f64 = -8.298E-3;
    pub(super) const A151: f64 = 3.18346481635021405060768473261E-2;
    pub(super) const A156: f64 = 2.83009096723667755288322961402E-2;
    pub(super) const A157: f64 = 5.35419883074385676223797384372E-2;
    pub(super) const A158: f64 = -5.49237485713909884646569340306E-2;
    pub(super) const A1511: f64 = -1.08347328697249322858509316994E-4;
    pub(super) const A1512: f64 = 3.82571090835658412954920192323E-4;
    pub(super) const A1513: f64 = -3.40465008687404560802977114492E-4;
    pub(super) const A1514: f64 = 1.41312443674632500278074618366E-1;
    pub(super) const A161: f64 = -4.28896301583791923408573538692E-1;
    pub(super) const A166: f64 = -4.69762141536116384314449447206E0;
    pub(super) const A167: f64 = 7.68342119606259904184240953878E0;
    pub(super) const A168: f64 = 4.06898981839711007970213554331E0;
    pub(super) const A169: f64 = 3.56727187455281109270669543021E-1;
    pub(super) const A1613: f64 = -1.39902416515901462129418009734E-3;
    pub(super) const A1614: f64 = 2.9475147891527723389556272149E0;
    pub(super) const A1615: f64 = -9.15095847217987001081870187138E0;
    pub(super) const B1: f64 = 5.42937341165687622380535766363E-2;
    pub(super) const B6: f64 = 4.45031289275240888144113950566E0;
    pub(super) const B7: f64 = 1.89151789931450038304281599044E0;
    pub(super) const B8: f64 = -5.8012039600105847814672114227E0;
    pub(super) const B9: f64 = 3.1116436695781989440891606237E-1;
    pub(super) const B10: f64 = -1.52160949662516078556178806805E-1;
    pub(super) const B11: f64 = 2.01365400804030348374776537501E-1;
    pub(super) const B12: f64 = 4.47106157277725905176885569043E-2;
    pub(super) const BHH1: f64 = 0.244094488188976377952755905512E+00;
    pub(super) const BHH2: f64 = 0.733846688281611857341361741547E+00;
    pub(super) const BHH3: f64 = 0.220588235294117647058823529412E-01;
    pub(super) const C2: f64 = 0.526001519587677318785587544488E-01;
    pub(super) const C3: f64 = 0.789002279381515978178381316732E-01;
    pub(super) const C4: f64 = 0.118350341907227396726757197510E+00;
    pub(super) const C5: f64 = 0.281649658092772603273242802490E+00;
    pub(super) const C6: f64 = 0.333333333333333333333333333333E+00;
    pub(super) const C7: f64 = 0.25E+00;
    pub(super) const C8: f64 = 0.307692307692307692307692307692E+00;
    pub(super) const C9: f64 = 0.651282051282051282051282051282E+00;
    pub(super) const C10: f64 = 0.6E+00;
    pub(super) const C11: f64 = 0.857142857142857142857142857142E+00;
    pub(super) const C14: f64 = 0.1E+00;
    pub(super) const C15: f64 = 0.2E+00;
    pub(super) const C16: f64 = 0.777777777777777777777777777778E+00;
    pub(super) const ER1: f64 = 0.1312004499419488073250102996E-01;
    pub(super) const ER6: f64 = -0.1225156446376204440720569753E+01;
    pub(super) const ER7: f64 = -0.4957589496572501915214079952E+00;
    pub(super) const ER8: f64 = 0.1664377182454986536961530415E+01;
    pub(super) const ER9: f64 = -0.3503288487499736816886487290E+00;
    pub(super) const ER10: f64 = 0.3341791187130174790297318841E+00;
    pub(super) const ER11: f64 = 0.8192320648511571246570742613E-01;
    pub(super) const ER12: f64 = -0.2235530786388629525884427845E-01;
    pub(super) const D41: f64 = -0.84289382761090128651353491142E+01;
    pub(super) const D46: f64 = 0.56671495351937776962531783590E+00;
    pub(super) const D47: f64 = -0.30689499459498916912797304727E+01;
    pub(super) const D48: f64 = 0.23846676565120698287728149680E+01;
    pub(super) const D49: f64 = 0.21170345824450282767155149946E+01;
    pub(super) const D410: f64 = -0.87139158377797299206789907490E+00;
    pub(super) const D411: f64 = 0.22404374302607882758541771650E+01;
    pub(super) const D412: f64 = 0.63157877876946881815570249290E+00;
    pub(super) const D413: f64 = -0.88990336451333310820698117400E-01;
    pub(super) const D414: f64 = 0.18148505520854727256656404962E+02;
    pub(super) const D415: f64 = -0.91946323924783554000451984436E+01;
    pub(super) const D416: f64 = -0.44360363875948939664310572000E+01;
    pub(super) const D51: f64 = 0.10427508642579134603413151009E+02;
    pub(super) const D56: f64 = 0.24228349177525818288430175319E+03;
    pub(super) const D57: f64 = 0.16520045171727028198505394887E+03;
    pub(super) const D58: f64 = -0.37454675472269020279518312152E+03;
    pub(super) const D59: f64 = -0.22113666853125306036270938578E+02;
    pub(super) const D510: f64 = 0.77334326684722638389603898808E+01;
    pub(super) const D511: f64 = -0.30674084731089398182061213626E+02;
    pub(super) const D512: f64 = -0.93321305264302278729567221706E+01;
    pub(super) const D513: f64 = 0.15697238121770843886131091075E+02;
    pub(super) const D514: f64 = -0.31139403219565177677282850411E+02;
    pub(super) const D515: f64 = -0.93529243588444783865713862664E+01;
    pub(super) const D516: f64 = 0.35816841486394083752465898540E+02;
    pub(super) const D61: f64 = 0.19985053242002433820987653617E+02;
    pub(super) const D66: f64 = -0.38703730874935176555105901742E+03;
    pub(super) const D67: f64 = -0.18917813819516756882830838328E+03;
    pub(super) const D68: f64 = 0.52780815920542364900561016686E+03;
    pub(super) const D69: f64 = -0.11573902539959630126141871134E+02;
    pub(super) const D610: f64 = 0.68812326946963000169666922661E+01;
    pub(super) const D611: f64 = -0.10006050966910838403183860980E+01;
    pub(super) const D612: f64 = 0.77771377980534432092869265740E+00;
    pub(super) const D613: f64 = -0.27782057523535084065932004339E+01;
    pub(super) const D614: f64 = -0.60196695231264120758267380846E+02;
    pub(super) const D615: f64 = 0.84320405506677161018159903784E+02;
    pub(super) const D616: f64 = 0.11992291136182789328035130030E+02;
    pub(super) const D71: f64 = -0.25693933462703749003312586129E+02;
    pub(super) const D76: f64 = -0.15418974869023643374053993627E+03;
    pub(super) const D77: f64 = -0.23152937917604549567536039109E+03;
    pub(super) const D78: f64 = 0.35763911791061412378285349910E+03;
    pub(super) const D79: f64 = 0.93405324183624310003907691704E+02;
    pub(super) const D710: f64 = -0.37458323136451633156875139351E+02;
    pub(super) const D711: f64 = 0.10409964950896230045147246184E+03;
    pub(super) const D712: f64 = 0.29840293426660503123344363579E+02;
    pub(super) const D713: f64 = -0.43533456590011143754432175058E+02;
    pub(super) const D714: f64 = 0.96324553959188282948394950600E+02;
    pub(super) const D715: f64 = -0.39177261675615439165231486172E+02;
    pub(super) const D716: f64 = -0.14972683625798562581422125276E+03;
}
