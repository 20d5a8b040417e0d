//! Adaptive Dormand–Prince 5(4) integrator with PI step-size control.
//!
//! The right-hand side is any `Fn(t, &y) -> Option<[f64; N]>`; returning
//! `None` marks the state as outside the domain of the equation (for the
//! profile equations, `z <= 0`), in which case the step is rejected and
//! retried with a smaller size.

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

/// One Dormand–Prince step of size `h` from `(t, y)` with `k1 = f(t, y)`.
///
/// Returns the fifth-order solution, the derivative there (first stage of the
/// next step) and the embedded error estimate. `None` if any stage left the
/// domain of `f` or produced a non-finite value.
pub fn dopri_step<F, const N: usize>(
    f: &F,
    t: f64,
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
) -> Option<([f64; N], [f64; N], [f64; N])>
where
    F: Fn(f64, &[f64; N]) -> Option<[f64; N]>,
{
    let k2 = f(t + C2 * h, &axpy(y, h, &[(A21, k1)]))?;
    let k3 = f(t + C3 * h, &axpy(y, h, &[(A31, k1), (A32, &k2)]))?;
    let k4 = f(t + C4 * h, &axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]))?;
    let k5 = f(
        t + C5 * h,
        &axpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    )?;
    let k6 = f(
        t + h,
        &axpy(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
    )?;
    let y_new = axpy(y, h, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
    let k7 = f(t + h, &y_new)?;
    let err = axpy(
        &[0.0; N],
        h,
        &[(E1, k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)],
    );
    if y_new.iter().chain(k7.iter()).all(|v| v.is_finite()) {
        Some((y_new, k7, err))
    } else {
        None
    }
}

/// An accepted step, handed to the observer after each success.
#[derive(Debug, Clone, Copy)]
pub struct Step<const N: usize> {
    pub t0: f64,
    pub y0: [f64; N],
    pub k0: [f64; N],
    pub t1: f64,
    pub y1: [f64; N],
}

impl<const N: usize> Step<N> {
    /// Re-takes this step from its start with a shorter size `dt`
    /// (same sign as the step). Used to localise events to integrator accuracy.
    pub fn substep<F>(&self, f: &F, dt: f64) -> Option<[f64; N]>
    where
        F: Fn(f64, &[f64; N]) -> Option<[f64; N]>,
    {
        if dt == 0.0 {
            return Some(self.y0);
        }
        dopri_step(f, self.t0, &self.y0, &self.k0, dt).map(|(y, _, _)| y)
    }

    pub fn h(&self) -> f64 {
        self.t1 - self.t0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Reached the requested end point.
    Reached,
    /// The observer asked to stop.
    Stopped,
    /// The step size fell below the floating-point resolution of `t`.
    StepUnderflow,
    /// The step budget was exhausted.
    MaxSteps,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub rhs_evals: usize,
    pub accepted: usize,
    pub rejected: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Run<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    pub termination: Termination,
    pub stats: Stats,
}

/// Integrator settings. Error per component is scaled by
/// `atol + rtol * max(|y_old|, |y_new|)` and combined in the RMS norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: Option<f64>,
    pub h_max: f64,
    pub max_steps: usize,
    pub safety: f64,
    pub fac_min: f64,
    pub fac_max: f64,
    /// Proportional coefficient of the PI controller.
    pub pi_beta: f64,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-10,
            h_init: None,
            h_max: f64::INFINITY,
            max_steps: 1_000_000,
            safety: 0.9,
            fac_min: 0.2,
            fac_max: 10.0,
            pi_beta: 0.04,
        }
    }
}

impl Dopri5 {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            ..Self::default()
        }
    }

    fn error_norm<const N: usize>(&self, y0: &[f64; N], y1: &[f64; N], err: &[f64; N]) -> f64 {
        let mut sum = 0.0;
        for i in 0..N {
            let sc = self.atol + self.rtol * y0[i].abs().max(y1[i].abs());
            sum += (err[i] / sc).powi(2);
        }
        (sum / N as f64).sqrt()
    }

    fn initial_step<F, const N: usize>(&self, f: &F, t0: f64, y0: &[f64; N], k0: &[f64; N], dir: f64) -> f64
    where
        F: Fn(f64, &[f64; N]) -> Option<[f64; N]>,
    {
        let scale = |i: usize| self.atol + self.rtol * y0[i].abs();
        let d0 = (0..N).map(|i| (y0[i] / scale(i)).powi(2)).sum::<f64>().sqrt() / (N as f64).sqrt();
        let d1 = (0..N).map(|i| (k0[i] / scale(i)).powi(2)).sum::<f64>().sqrt() / (N as f64).sqrt();
        let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        h0 = h0.min(self.h_max);
        let y1 = axpy(y0, dir * h0, &[(1.0, k0)]);
        let d2 = match f(t0 + dir * h0, &y1) {
            Some(k1) => {
                (0..N)
                    .map(|i| ((k1[i] - k0[i]) / scale(i)).powi(2))
                    .sum::<f64>()
                    .sqrt()
                    / (N as f64).sqrt()
                    / h0
            }
            None => return h0 * 1e-3,
        };
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(self.h_max)
    }

    /// Integrates from `t0` towards `t_end`, calling `observer` after every
    /// accepted step. Integration runs backwards when `t_end < t0`.
    pub fn integrate<F, O, const N: usize>(
        &self,
        f: &F,
        t0: f64,
        y0: [f64; N],
        t_end: f64,
        mut observer: O,
    ) -> Run<N>
    where
        F: Fn(f64, &[f64; N]) -> Option<[f64; N]>,
        O: FnMut(&Step<N>) -> Control,
    {
        let mut stats = Stats::default();
        let dir = if t_end >= t0 { 1.0 } else { -1.0 };
        let mut t = t0;
        let mut y = y0;
        let Some(mut k) = f(t, &y) else {
            return Run { t, y, termination: Termination::StepUnderflow, stats };
        };
        stats.rhs_evals += 1;
        let mut h = self
            .h_init
            .unwrap_or_else(|| self.initial_step(f, t0, &y0, &k, dir))
            .abs()
            .min(self.h_max);
        let mut err_prev: f64 = 1e-4;
        let expo = 0.2 - 0.75 * self.pi_beta;

        loop {
            if (t_end - t) * dir <= 0.0 {
                return Run { t, y, termination: Termination::Reached, stats };
            }
            if stats.accepted + stats.rejected >= self.max_steps {
                return Run { t, y, termination: Termination::MaxSteps, stats };
            }
            let min_h = 16.0 * f64::EPSILON * t.abs().max(1e-300);
            if h <= min_h {
                return Run { t, y, termination: Termination::StepUnderflow, stats };
            }
            let mut last = false;
            if (t + dir * h - t_end) * dir >= 0.0 {
                h = (t_end - t).abs();
                last = true;
            }
            stats.rhs_evals += 6;
            match dopri_step(f, t, &y, &k, dir * h) {
                None => {
                    stats.rejected += 1;
                    h *= 0.25;
                }
                Some((y_new, k_new, err)) => {
                    let e = self.error_norm(&y, &y_new, &err);
                    if e <= 1.0 {
                        let step = Step { t0: t, y0: y, k0: k, t1: if last { t_end } else { t + dir * h }, y1: y_new };
                        t = step.t1;
                        y = y_new;
                        k = k_new;
                        stats.accepted += 1;
                        let fac = if e == 0.0 {
                            self.fac_max
                        } else {
                            (self.safety * e.powf(-expo) * err_prev.powf(self.pi_beta))
                                .clamp(self.fac_min, self.fac_max)
                        };
                        err_prev = e.max(1e-4);
                        h = (h * fac).min(self.h_max);
                        if observer(&step) == Control::Stop {
                            return Run { t, y, termination: Termination::Stopped, stats };
                        }
                    } else {
                        stats.rejected += 1;
                        let fac = (self.safety * e.powf(-0.2)).clamp(self.fac_min, 1.0);
                        h *= fac;
                    }
                }
            }
        }
    }
}

/// Finds `s` in `[0, h]` (or `[h, 0]`) where `g(s)` changes sign, given
/// `g(0)` and `g(h)` of opposite signs. Illinois false position with
/// bisection safeguard. `g` may return `None`, which is treated as lying
/// beyond the root (same side as `g(h)`).
pub(crate) fn locate_root<G>(mut g: G, h: f64, g0: f64, gh: f64, x_tol: f64, f_tol: f64) -> f64
where
    G: FnMut(f64) -> Option<f64>,
{
    let (mut a, mut fa) = (0.0, g0);
    let (mut b, mut fb) = (h, gh);
    let mut side = 0i8;
    for _ in 0..200 {
        if (b - a).abs() <= x_tol {
            break;
        }
        let mut m = (a * fb - b * fa) / (fb - fa);
        let lo = a.min(b);
        let hi = a.max(b);
        let span = hi - lo;
        if !m.is_finite() || m <= lo + 0.01 * span || m >= hi - 0.01 * span {
            m = 0.5 * (a + b);
        }
        let fm = match g(m) {
            Some(v) => v,
            None => {
                b = m;
                side = 0;
                continue;
            }
        };
        if fm.abs() <= f_tol {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = m;
            fb = fm;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    if fa.abs() < fb.abs() {
        a
    } else {
        b
    }
}
