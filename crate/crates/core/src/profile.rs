//! Rescaled similarity profiles.
//!
//! Planar profiles solve `z^{1+a} z''' = γ x^a` with `z(0) = 1, z'(0) = 0,
//! z''(0) = -1`; radial profiles solve `z^{1+a} (z'' + z'/x)' = γ x^a` with
//! `(1/x)(x z')' -> -1` at the origin. The equations are singular at
//! `x = 0` (radial) and at `z = 0`, so integration starts from a series
//! expansion at a small `x0` and stops at a working floor `z = δ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{locate_root, Control, Dopri5, Step, Termination};
use crate::params::Rheology;

/// Smallest accepted working floor.
pub const MIN_DELTA: f64 = 1e-12;
pub const DEFAULT_X0: f64 = 1e-4;
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Planar,
    Radial,
}

impl std::fmt::Display for Geometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Geometry::Planar => "planar",
            Geometry::Radial => "radial",
        })
    }
}

impl std::str::FromStr for Geometry {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "planar" => Ok(Geometry::Planar),
            "radial" => Ok(Geometry::Radial),
            other => Err(Error::Config(format!("unknown geometry '{other}'"))),
        }
    }
}

/// Integration state. `curv` is `z''` for planar profiles and
/// `v = z'' + z'/x` for radial ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileState {
    pub x: f64,
    pub z: f64,
    pub dz: f64,
    pub curv: f64,
}

impl ProfileState {
    fn from_vec(x: f64, v: &[f64; 3]) -> Self {
        Self { x, z: v[0], dz: v[1], curv: v[2] }
    }

    fn to_vec(self) -> [f64; 3] {
        [self.z, self.dz, self.curv]
    }

    /// Second derivative `z''` regardless of geometry.
    pub fn second_derivative(&self, geom: Geometry) -> f64 {
        match geom {
            Geometry::Planar => self.curv,
            Geometry::Radial => self.curv - self.dz / self.x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OutcomeKind {
    /// `z` decreased to the floor `δ` at `x = y` with slope `z'(y) < 0`.
    InterfaceHit { y: f64, slope: f64 },
    /// `z'` changed sign with `z_min > δ`: the profile never touches down.
    MinimumTurn { x_min: f64, z_min: f64 },
    BoundExceeded { x_stop: f64 },
    /// The step size collapsed before any other event.
    SingularStall { x_stop: f64, z_stop: f64 },
}

impl OutcomeKind {
    pub fn is_interface(&self) -> bool {
        matches!(self, OutcomeKind::InterfaceHit { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            OutcomeKind::InterfaceHit { .. } => "InterfaceHit",
            OutcomeKind::MinimumTurn { .. } => "MinimumTurn",
            OutcomeKind::BoundExceeded { .. } => "BoundExceeded",
            OutcomeKind::SingularStall { .. } => "SingularStall",
        }
    }
}

/// Terminal event of one integration, plus the state there and an optional
/// trace of accepted steps.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotOutcome {
    pub kind: OutcomeKind,
    pub terminal: ProfileState,
    pub trace: Option<Vec<ProfileState>>,
}

/// Options for [`integrate_to_event`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotConfig {
    pub delta: f64,
    /// Defaults to `4 B(γ)` for `γ > 0` and to 10 otherwise.
    pub x_max: Option<f64>,
    pub tol: f64,
    pub x0: f64,
    pub trace: bool,
    pub max_step: Option<f64>,
    /// Keep integrating after a positive minimum instead of reporting it.
    pub continue_past_minimum: bool,
}

impl Default for ShotConfig {
    fn default() -> Self {
        Self {
            delta: 1e-6,
            x_max: None,
            tol: DEFAULT_TOL,
            x0: DEFAULT_X0,
            trace: false,
            max_step: None,
            continue_past_minimum: false,
        }
    }
}

impl ShotConfig {
    pub fn with_delta(delta: f64) -> Self {
        Self { delta, ..Self::default() }
    }
}

fn raw_rhs(geom: Geometry, gamma: f64, a: f64, x: f64, s: &[f64; 3]) -> Option<[f64; 3]> {
    let z = s[0];
    if !(z > 0.0) || !(x > 0.0) {
        return None;
    }
    let third = if gamma == 0.0 { 0.0 } else { gamma * x.powf(a) * z.powf(-1.0 - a) };
    Some(match geom {
        Geometry::Planar => [s[1], s[2], third],
        Geometry::Radial => [s[1], s[2] - s[1] / x, third],
    })
}

/// Series start `z(x0)` with consistent `z'` and `curv`.
///
/// Planar: `z = 1 - x²/2 + γ x^{3+a} / ((1+a)(2+a)(3+a))`;
/// radial: `z = 1 - x²/4 + γ x^{3+a} / ((1+a)(3+a)²)`.
pub fn series_start(geom: Geometry, gamma: f64, r: &Rheology, x0: f64) -> Result<ProfileState> {
    if !(x0 > 0.0) || !x0.is_finite() {
        return Err(Error::Domain(format!("series start needs x0 > 0, got {x0}")));
    }
    if !gamma.is_finite() {
        return Err(Error::Domain(format!("gamma must be finite, got {gamma}")));
    }
    let a = r.a();
    Ok(match geom {
        Geometry::Planar => {
            let c = gamma / ((1.0 + a) * (2.0 + a) * (3.0 + a));
            ProfileState {
                x: x0,
                z: 1.0 - x0 * x0 / 2.0 + c * x0.powf(3.0 + a),
                dz: -x0 + c * (3.0 + a) * x0.powf(2.0 + a),
                curv: -1.0 + c * (3.0 + a) * (2.0 + a) * x0.powf(1.0 + a),
            }
        }
        Geometry::Radial => {
            let c = gamma / ((1.0 + a) * (3.0 + a) * (3.0 + a));
            ProfileState {
                x: x0,
                z: 1.0 - x0 * x0 / 4.0 + c * x0.powf(3.0 + a),
                dz: -x0 / 2.0 + c * (3.0 + a) * x0.powf(2.0 + a),
                curv: -1.0 + c * (3.0 + a) * (3.0 + a) * x0.powf(1.0 + a),
            }
        }
    })
}

/// Right-hand side `(z', (z')', curv')` of the first-order system.
pub fn rhs(geom: Geometry, state: &ProfileState, gamma: f64, r: &Rheology) -> Result<[f64; 3]> {
    if !(state.z > 0.0) {
        return Err(Error::Singular(format!(
            "profile equation evaluated at z = {} (x = {})",
            state.z, state.x
        )));
    }
    if !(state.x > 0.0) {
        return Err(Error::Domain(format!("x must be positive, got {}", state.x)));
    }
    raw_rhs(geom, gamma, r.a(), state.x, &state.to_vec())
        .ok_or_else(|| Error::NonFinite(format!("rhs at x = {}", state.x)))
}

/// Upper bound on the position of a δ-level crossing with negative slope
/// for `γ > 0`,
/// `B(γ) = ((1+a)(2+a)/γ)^{1/(1+a)}`.
pub fn interface_bound(gamma: f64, a: f64) -> f64 {
    ((1.0 + a) * (2.0 + a) / gamma).powf(1.0 / (1.0 + a))
}

fn default_x_max(gamma: f64, a: f64) -> f64 {
    if gamma > 0.0 {
        4.0 * interface_bound(gamma, a)
    } else {
        10.0
    }
}

/// Integrates the profile from its series start until the first terminal
/// event: `z` crossing `δ` from above, `z'` turning positive above `δ`, the
/// bound `x_max`, or a collapse of the step size.
pub fn integrate_to_event(geom: Geometry, gamma: f64, r: &Rheology, cfg: &ShotConfig) -> Result<ShotOutcome> {
    let delta = cfg.delta;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("working floor must lie in (0, 1), got {delta}")));
    }
    if delta < MIN_DELTA {
        return Err(Error::Domain(format!(
            "working floor {delta:e} is below the supported minimum {MIN_DELTA:e}"
        )));
    }
    if !(cfg.tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {}", cfg.tol)));
    }
    let a = r.a();
    let start = series_start(geom, gamma, r, cfg.x0)?;
    let x_max = cfg.x_max.unwrap_or_else(|| default_x_max(gamma, a));
    if !(x_max > cfg.x0) {
        return Err(Error::Domain(format!("x_max = {x_max} does not exceed x0 = {}", cfg.x0)));
    }
    let f = |x: f64, s: &[f64; 3]| raw_rhs(geom, gamma, a, x, s);
    let mut solver = Dopri5::with_tol(cfg.tol);
    solver.atol = cfg.tol * 1e-2;
    if let Some(h) = cfg.max_step {
        solver.h_max = h;
    }

    let mut trace = cfg.trace.then(|| vec![start]);
    let mut event: Option<(OutcomeKind, ProfileState)> = None;

    let run = solver.integrate(&f, start.x, start.to_vec(), x_max, |step: &Step<3>| {
        let here = ProfileState::from_vec(step.t1, &step.y1);
        if let Some(ev) = detect_event(&f, step, delta, cfg.tol, cfg.continue_past_minimum) {
            if let Some(t) = trace.as_mut() {
                t.push(ev.1);
            }
            event = Some(ev);
            return Control::Stop;
        }
        if let Some(t) = trace.as_mut() {
            t.push(here);
        }
        Control::Continue
    });

    let terminal = ProfileState::from_vec(run.t, &run.y);
    let (kind, terminal) = match (event, run.termination) {
        (Some(ev), _) => ev,
        (None, Termination::Reached) => (OutcomeKind::BoundExceeded { x_stop: run.t }, terminal),
        (None, Termination::StepUnderflow) => (
            OutcomeKind::SingularStall { x_stop: run.t, z_stop: run.y[0] },
            terminal,
        ),
        (None, Termination::MaxSteps) => {
            return Err(Error::Convergence(format!(
                "step budget exhausted at x = {} (z = {})",
                run.t, run.y[0]
            )))
        }
        (None, Termination::Stopped) => unreachable!("observer only stops on events"),
    };
    Ok(ShotOutcome { kind, terminal, trace })
}

fn detect_event<F>(
    f: &F,
    step: &Step<3>,
    delta: f64,
    tol: f64,
    continue_past_minimum: bool,
) -> Option<(OutcomeKind, ProfileState)>
where
    F: Fn(f64, &[f64; 3]) -> Option<[f64; 3]>,
{
    let h = step.h();
    let x_tol = 4.0 * f64::EPSILON * step.t1.abs();
    let state_at = |dt: f64| step.substep(f, dt).map(|v| ProfileState::from_vec(step.t0 + dt, &v));
    let crossing = |upto: f64, z_end: f64| {
        let dt = locate_root(
            |dt| step.substep(f, dt).map(|v| v[0] - delta),
            upto,
            step.y0[0] - delta,
            z_end - delta,
            x_tol,
            tol * delta,
        );
        let s = state_at(dt).unwrap_or(ProfileState::from_vec(step.t0 + upto, &step.y1));
        (OutcomeKind::InterfaceHit { y: s.x, slope: s.dz }, s)
    };

    if step.y0[1] < 0.0 && step.y1[1] >= 0.0 {
        // z' turns inside this step: find the minimum and compare with the floor
        let dt_min = locate_root(
            |dt| step.substep(f, dt).map(|v| v[1]),
            h,
            step.y0[1],
            step.y1[1],
            x_tol,
            0.0,
        );
        let m = state_at(dt_min).unwrap_or(ProfileState::from_vec(step.t1, &step.y1));
        if m.z <= delta {
            return Some(crossing(dt_min, m.z));
        }
        if continue_past_minimum {
            return None;
        }
        return Some((OutcomeKind::MinimumTurn { x_min: m.x, z_min: m.z }, m));
    }
    if step.y1[0] < delta && step.y0[0] >= delta && step.y0[1] < 0.0 {
        return Some(crossing(h, step.y1[0]));
    }
    None
}

/// Two-term finite-contact-angle expansion near an interface at `x = y`:
/// `z ≈ √2 θ (y-x) + B (y-x)^{2-a}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteAngleExpansion {
    pub y: f64,
    pub theta: f64,
    pub coeff: f64,
    pub a: f64,
}

impl FiniteAngleExpansion {
    pub fn z(&self, x: f64) -> f64 {
        let s = self.y - x;
        std::f64::consts::SQRT_2 * self.theta * s + self.coeff * s.powf(2.0 - self.a)
    }

    pub fn dz(&self, x: f64) -> f64 {
        let s = self.y - x;
        -std::f64::consts::SQRT_2 * self.theta - self.coeff * (2.0 - self.a) * s.powf(1.0 - self.a)
    }

    /// Contact slope `-√2 θ`.
    pub fn contact_slope(&self) -> f64 {
        -std::f64::consts::SQRT_2 * self.theta
    }
}

pub fn expand_finite_angle(y: f64, theta: f64, gamma: f64, r: &Rheology) -> Result<FiniteAngleExpansion> {
    let a = r.a();
    if a >= 1.0 {
        return Err(Error::UnsupportedRegime(format!(
            "no finite-angle expansion for a = {a} >= 1"
        )));
    }
    if !(y > 0.0) {
        return Err(Error::Domain(format!("interface position must be positive, got {y}")));
    }
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::Domain(format!("theta must lie in (0, 1], got {theta}")));
    }
    let coeff = gamma * y.powf(a)
        / (2f64.powf((1.0 + a) / 2.0) * theta.powf(1.0 + a) * a * (1.0 - a) * (2.0 - a));
    Ok(FiniteAngleExpansion { y, theta, coeff, a })
}

/// Leading-order zero-contact-angle expansion `z ≈ C (y-x)^{3/(2+a)}`, with
/// `C^{2+a} = γ y^a (2+a)³ / (3 (1-a)(1+2a))` from dominant balance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroAngleExpansion {
    pub y: f64,
    pub coeff: f64,
    pub exponent: f64,
}

impl ZeroAngleExpansion {
    pub fn z(&self, x: f64) -> f64 {
        self.coeff * (self.y - x).powf(self.exponent)
    }

    pub fn dz(&self, x: f64) -> f64 {
        -self.coeff * self.exponent * (self.y - x).powf(self.exponent - 1.0)
    }

    pub fn d2z(&self, x: f64) -> f64 {
        let p = self.exponent;
        self.coeff * p * (p - 1.0) * (self.y - x).powf(p - 2.0)
    }

    pub fn d3z(&self, x: f64) -> f64 {
        let p = self.exponent;
        -self.coeff * p * (p - 1.0) * (p - 2.0) * (self.y - x).powf(p - 3.0)
    }
}

pub fn expand_zero_angle(y: f64, gamma: f64, r: &Rheology) -> Result<ZeroAngleExpansion> {
    let a = r.a();
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::UnsupportedRegime(format!(
            "no zero-angle expansion for a = {a} outside (0, 1)"
        )));
    }
    if !(gamma > 0.0) {
        return Err(Error::UnsupportedRegime(format!(
            "zero-angle expansion needs gamma > 0, got {gamma}"
        )));
    }
    if !(y > 0.0) {
        return Err(Error::Domain(format!("interface position must be positive, got {y}")));
    }
    let base = gamma * y.powf(a) * (2.0 + a).powi(3) / (3.0 * (1.0 - a) * (1.0 + 2.0 * a));
    Ok(ZeroAngleExpansion {
        y,
        coeff: base.powf(1.0 / (2.0 + a)),
        exponent: 3.0 / (2.0 + a),
    })
}
