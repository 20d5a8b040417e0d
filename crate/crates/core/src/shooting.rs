//! Contact-angle targeting by shooting on `γ`.
//!
//! Interfaces are never integrated into directly. At a working floor
//! `δ > 0` the crossing `z(y) = δ` is well defined, and
//!
//! - `θ = 0`: `γ₀(δ)` is the supremum of `γ` for which the profile still
//!   crosses `δ` with negative slope, found by bisection on the outcome type;
//! - `0 < θ < 1`: `γ(δ, θ)` is the smallest positive root of
//!   `Δ(γ) = z'(y) + θ s₁(δ)`, found by an ascending scan and a bracketed
//!   root solve. `s₁(δ)` is the contact slope of the `γ = 0` parabola at the
//!   floor: `√(2(1-δ))` planar, `√(1-δ)` radial;
//! - `θ = 1`: `γ = 0`, the explicit parabola.
//!
//! A decreasing schedule of floors is then extrapolated to `δ = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::locate_root;
use crate::params::{gamma_to_kappa, Rheology};
use crate::profile::{
    integrate_to_event, interface_bound, Geometry, OutcomeKind, ShotConfig, DEFAULT_X0, MIN_DELTA,
};

/// Closed-form bounds for the shooting parameter and interface position.
///
/// Both come from comparing `z` with its series start while `0 < z < 1`.
/// Radial: `B(γ) = ((1+a)(3+a)/(2γ))^{1/(1+a)}`, `G = (1+a)(3+a)/2^{2+a}` and
/// the threshold `(1+a)(3+a)/2 · ((1+a)/(4(3+a)))^{(1+a)/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticBounds {
    pub geometry: Geometry,
    pub a: f64,
    /// Above this `γ` no profile has an interface.
    pub lemma1_threshold: f64,
    /// Strict upper bound on `γ₀(δ)`.
    pub g_max: f64,
}

impl AnalyticBounds {
    /// Upper bound for δ-level crossings; planar `((1+a)(2+a)/γ)^{1/(1+a)}`.
    pub fn b(&self, gamma: f64) -> f64 {
        match self.geometry {
            Geometry::Planar => interface_bound(gamma, self.a),
            Geometry::Radial => {
                let a = self.a;
                ((1.0 + a) * (3.0 + a) / (2.0 * gamma)).powf(1.0 / (1.0 + a))
            }
        }
    }
}

/// Planar bounds, which also bracket the search in both geometries.
pub fn analytic_bounds(r: &Rheology) -> Result<AnalyticBounds> {
    analytic_bounds_in(Geometry::Planar, r)
}

pub fn analytic_bounds_in(geom: Geometry, r: &Rheology) -> Result<AnalyticBounds> {
    let a = r.a();
    if !(a > 0.0) {
        return Err(Error::Domain(format!("bounds need a > 0, got {a}")));
    }
    let (lemma1_threshold, g_max) = match geom {
        Geometry::Planar => (
            ((1.0 + a) / (2.0 * (3.0 + a))).powf((1.0 + a) / 2.0) * (1.0 + a) * (2.0 + a),
            2f64.powf((1.0 + a) / 2.0) * (1.0 + a) * (2.0 + a),
        ),
        Geometry::Radial => (
            0.5 * (1.0 + a) * (3.0 + a) * ((1.0 + a) / (4.0 * (3.0 + a))).powf((1.0 + a) / 2.0),
            (1.0 + a) * (3.0 + a) / 2f64.powf(2.0 + a),
        ),
    };
    Ok(AnalyticBounds { geometry: geom, a, lemma1_threshold, g_max })
}

/// Solution of the contact-angle problem at one working floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaLevelSolve {
    pub delta: f64,
    pub theta: f64,
    pub gamma: f64,
    /// Position of the crossing `z = δ`.
    pub y: f64,
    /// `z'` at the crossing; never positive.
    pub slope: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    /// Stopping width for the `γ` bracket.
    pub gamma_tol: f64,
    /// Integrator tolerance for each shot.
    pub shot_tol: f64,
    pub max_iter: usize,
    pub x0: f64,
    /// Restrict the search to this interval instead of `(0, G)`.
    pub bracket: Option<(f64, f64)>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            gamma_tol: 1e-10,
            shot_tol: 1e-10,
            max_iter: 200,
            x0: DEFAULT_X0,
            bracket: None,
        }
    }
}

fn shot_cfg(delta: f64, cfg: &SolveConfig) -> ShotConfig {
    ShotConfig {
        delta,
        tol: cfg.shot_tol,
        x0: cfg.x0,
        ..ShotConfig::default()
    }
}

/// Slope magnitude of the `γ = 0` parabola where it crosses `z = δ`.
pub fn parabola_contact_slope(geom: Geometry, delta: f64) -> f64 {
    match geom {
        Geometry::Planar => (2.0 * (1.0 - delta)).sqrt(),
        Geometry::Radial => (1.0 - delta).sqrt(),
    }
}

/// Finds `γ(δ, θ)`: the outcome-type boundary for `θ = 0`, the smallest
/// positive root of `Δ` for `0 < θ < 1`, and `0` for `θ = 1`.
pub fn solve_delta_level(
    geom: Geometry,
    r: &Rheology,
    delta: f64,
    theta: f64,
    cfg: &SolveConfig,
) -> Result<DeltaLevelSolve> {
    if !(MIN_DELTA..=0.5).contains(&delta) {
        return Err(Error::Domain(format!("delta must lie in [1e-12, 0.5], got {delta}")));
    }
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::Domain(format!("theta must lie in [0, 1], got {theta}")));
    }
    let shot = shot_cfg(delta, cfg);
    if theta == 1.0 {
        let out = integrate_to_event(geom, 0.0, r, &shot)?;
        return match out.kind {
            OutcomeKind::InterfaceHit { y, slope } => Ok(DeltaLevelSolve {
                delta,
                theta,
                gamma: 0.0,
                y,
                slope,
                bracket: (0.0, 0.0),
                iterations: 0,
            }),
            other => Err(Error::Convergence(format!(
                "parabolic profile did not reach the floor: {other:?}"
            ))),
        };
    }
    let bounds = analytic_bounds(r)?;
    if theta == 0.0 {
        solve_zero_angle_level(geom, r, delta, &bounds, cfg)
    } else {
        solve_finite_angle_level(geom, r, delta, theta, &bounds, cfg)
    }
}

fn solve_zero_angle_level(
    geom: Geometry,
    r: &Rheology,
    delta: f64,
    bounds: &AnalyticBounds,
    cfg: &SolveConfig,
) -> Result<DeltaLevelSolve> {
    let shot = shot_cfg(delta, cfg);
    let hit = |g: f64| -> Result<Option<(f64, f64)>> {
        Ok(match integrate_to_event(geom, g, r, &shot)?.kind {
            OutcomeKind::InterfaceHit { y, slope } => Some((y, slope)),
            _ => None,
        })
    };

    let (mut lo, mut hi) = cfg.bracket.unwrap_or((0.0, bounds.g_max));
    let Some(mut best) = hit(lo)? else {
        return Err(Error::Bracket(format!(
            "lower end gamma = {lo} does not reach the floor {delta:e}"
        )));
    };
    if hit(hi)?.is_some() {
        if cfg.bracket.is_some() {
            return Err(Error::Bracket(format!(
                "upper end gamma = {hi} still reaches the floor {delta:e}"
            )));
        }
        let mut grown = false;
        for _ in 0..8 {
            lo = hi;
            hi *= 2.0;
            if hit(hi)?.is_none() {
                grown = true;
                break;
            }
        }
        if !grown {
            return Err(Error::Bracket(format!(
                "no change of outcome type in (0, {hi}) at delta = {delta:e}"
            )));
        }
        best = hit(lo)?.expect("checked above");
    }
    let bracket = (lo, hi);
    let mut iterations = 0;
    while hi - lo > cfg.gamma_tol && iterations < cfg.max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match hit(mid)? {
            Some(h) => {
                lo = mid;
                best = h;
            }
            None => hi = mid,
        }
        iterations += 1;
    }
    Ok(DeltaLevelSolve {
        delta,
        theta: 0.0,
        gamma: lo,
        y: best.0,
        slope: best.1,
        bracket,
        iterations,
    })
}

fn solve_finite_angle_level(
    geom: Geometry,
    r: &Rheology,
    delta: f64,
    theta: f64,
    bounds: &AnalyticBounds,
    cfg: &SolveConfig,
) -> Result<DeltaLevelSolve> {
    let shot = shot_cfg(delta, cfg);
    let target = theta * parabola_contact_slope(geom, delta);
    // Δ extended continuously past γ₀(δ), where the crossing disappears.
    let big_delta = |g: f64| -> Result<(f64, Option<(f64, f64)>)> {
        Ok(match integrate_to_event(geom, g, r, &shot)?.kind {
            OutcomeKind::InterfaceHit { y, slope } => (slope + target, Some((y, slope))),
            _ => (target, None),
        })
    };

    let (start, end) = cfg.bracket.unwrap_or((0.0, bounds.g_max));
    let step = bounds.g_max / 64.0;
    let (mut g_prev, (mut d_prev, _)) = (start, big_delta(start)?);
    if d_prev >= 0.0 {
        return Err(Error::Bracket(format!(
            "Delta is already non-negative at gamma = {start}"
        )));
    }
    let mut iterations = 0;
    let mut found = None;
    let mut g = start;
    while g < end {
        g = (g + step).min(end);
        let (d, _) = big_delta(g)?;
        iterations += 1;
        if d > 0.0 {
            found = Some((g, d));
            break;
        }
        g_prev = g;
        d_prev = d;
    }
    let Some((g_hi, d_hi)) = found else {
        return Err(Error::Bracket(format!(
            "no sign change of Delta in ({start}, {end}) for theta = {theta}, delta = {delta:e}"
        )));
    };
    let bracket = (g_prev, g_hi);

    let mut err = None;
    let root = locate_root(
        |dg| match big_delta(g_prev + dg) {
            Ok((d, _)) => {
                iterations += 1;
                Some(d)
            }
            Err(e) => {
                err = Some(e);
                None
            }
        },
        g_hi - g_prev,
        d_prev,
        d_hi,
        cfg.gamma_tol * 1e-3,
        1e-12,
    );
    if let Some(e) = err {
        return Err(e);
    }
    let gamma = g_prev + root;
    match big_delta(gamma)? {
        (_, Some((y, slope))) => Ok(DeltaLevelSolve {
            delta,
            theta,
            gamma,
            y,
            slope,
            bracket,
            iterations,
        }),
        _ => Err(Error::Convergence(format!(
            "root gamma = {gamma} no longer reaches the floor"
        ))),
    }
}

/// `δ_j = 10^{-2-j/2}` for `j = 0..=16`.
pub fn default_schedule() -> Vec<f64> {
    schedule(16)
}

/// `δ_j = 10^{-2-j/2}` for `j = 0..=last`.
pub fn schedule(last: usize) -> Vec<f64> {
    (0..=last).map(|j| 10f64.powf(-2.0 - j as f64 / 2.0)).collect()
}

/// Limit of a sequence `v(δ)` as `δ -> 0` under the model `v = v* + c δ^q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation {
    pub value: f64,
    /// Fitted order `q`; `None` when the sequence had already converged.
    pub order: Option<f64>,
    pub error_estimate: f64,
}

fn fit_triple(d: [f64; 3], v: [f64; 3]) -> Option<(f64, f64)> {
    let d1 = v[1] - v[0];
    let d2 = v[2] - v[1];
    if d1 * d2 <= 0.0 || d2.abs() >= d1.abs() {
        return None;
    }
    let target = d1 / d2;
    // (δ0^q - δ1^q)/(δ1^q - δ2^q) is increasing in q
    let ratio = |q: f64| (d[0].powf(q) - d[1].powf(q)) / (d[1].powf(q) - d[2].powf(q));
    let (mut lo, mut hi) = (1e-3, 8.0);
    if ratio(lo) > target || ratio(hi) < target {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ratio(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let q = 0.5 * (lo + hi);
    let c = d2 / (d[2].powf(q) - d[1].powf(q));
    Some((v[2] - c * d[2].powf(q), q))
}

/// Extrapolates the tail of `(δ, v)` pairs to `δ = 0`. Differences below
/// `noise` are treated as converged.
pub fn extrapolate(levels: &[(f64, f64)], noise: f64) -> Result<Extrapolation> {
    let n = levels.len();
    if n == 0 {
        return Err(Error::Convergence("no levels to extrapolate".into()));
    }
    let last = levels[n - 1].1;
    if n < 3 {
        let err = if n == 2 { (last - levels[0].1).abs() } else { f64::INFINITY };
        return Ok(Extrapolation { value: last, order: None, error_estimate: err });
    }
    let tail = &levels[n - 3..];
    let d2 = tail[2].1 - tail[1].1;
    if d2.abs() <= noise {
        return Ok(Extrapolation {
            value: last,
            order: None,
            error_estimate: d2.abs().max(noise),
        });
    }
    let triple = |s: &[(f64, f64)]| fit_triple([s[0].0, s[1].0, s[2].0], [s[0].1, s[1].1, s[2].1]);
    let Some((value, q)) = triple(tail) else {
        return Err(Error::Convergence(format!(
            "level sequence is not monotonically converging: {:?}",
            tail
        )));
    };
    let error_estimate = if n >= 4 {
        match triple(&levels[n - 4..n - 1]) {
            Some((prev, _)) => (value - prev).abs(),
            None => d2.abs(),
        }
    } else {
        d2.abs()
    };
    Ok(Extrapolation { value, order: Some(q), error_estimate })
}

/// Converged contact-angle solution in rescaled variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShootingResult {
    pub geometry: Geometry,
    pub lambda: f64,
    pub theta: f64,
    pub gamma_theta: f64,
    pub y_theta: f64,
    pub slope: f64,
    /// Initial curvature; `None` for the `θ = 1` parabola, where it is free.
    pub kappa: Option<f64>,
    pub levels: Vec<DeltaLevelSolve>,
    pub extrapolation_error_estimate: f64,
    /// Fitted convergence order of `γ(δ)`.
    pub gamma_order: Option<f64>,
}

/// Runs [`solve_delta_level`] along a decreasing schedule and extrapolates
/// `γ`, `y` and the contact slope to `δ = 0`.
pub fn continue_to_zero_delta(
    geom: Geometry,
    r: &Rheology,
    theta: f64,
    schedule: &[f64],
    cfg: &SolveConfig,
) -> Result<ShootingResult> {
    if schedule.is_empty() {
        return Err(Error::Domain("empty delta schedule".into()));
    }
    if schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Domain("delta schedule must be strictly decreasing".into()));
    }
    if schedule[0] > 0.5 || *schedule.last().unwrap() < MIN_DELTA {
        return Err(Error::Domain("delta schedule must lie within [1e-12, 0.5]".into()));
    }
    let mut levels: Vec<DeltaLevelSolve> = Vec::with_capacity(schedule.len());
    for &delta in schedule {
        let warm = if theta == 0.0 { warm_bracket(&levels) } else { None };
        let level = match warm {
            Some(bracket) => {
                let c = SolveConfig { bracket: Some(bracket), ..*cfg };
                match solve_delta_level(geom, r, delta, theta, &c) {
                    Ok(l) => l,
                    Err(Error::Bracket(_)) => solve_delta_level(geom, r, delta, theta, cfg)?,
                    Err(e) => return Err(e),
                }
            }
            None => solve_delta_level(geom, r, delta, theta, cfg)?,
        };
        levels.push(level);
    }

    let noise = 10.0 * cfg.gamma_tol;
    let pairs = |f: fn(&DeltaLevelSolve) -> f64| levels.iter().map(|l| (l.delta, f(l))).collect::<Vec<_>>();
    let trace = || {
        levels
            .iter()
            .map(|l| format!("({:e}, {}, {})", l.delta, l.gamma, l.y))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let gamma_x = extrapolate(&pairs(|l| l.gamma), noise)
        .map_err(|e| Error::Convergence(format!("gamma: {e}; levels {}", trace())))?;
    let y_x = extrapolate(&pairs(|l| l.y), noise)
        .map_err(|e| Error::Convergence(format!("y: {e}; levels {}", trace())))?;
    // at θ = 0 the slope limit is exact and the level slopes are bisection noise
    let slope = if theta == 0.0 {
        0.0
    } else {
        extrapolate(&pairs(|l| l.slope), noise)
            .map_err(|e| Error::Convergence(format!("slope: {e}; levels {}", trace())))?
            .value
            .min(0.0)
    };

    let gamma_theta = gamma_x.value.max(0.0);
    let kappa = if gamma_theta > 0.0 { Some(gamma_to_kappa(gamma_theta, r)?) } else { None };
    Ok(ShootingResult {
        geometry: geom,
        lambda: r.lambda(),
        theta,
        gamma_theta,
        y_theta: y_x.value,
        slope,
        kappa,
        levels,
        extrapolation_error_estimate: gamma_x.error_estimate,
        gamma_order: gamma_x.order,
    })
}

fn warm_bracket(levels: &[DeltaLevelSolve]) -> Option<(f64, f64)> {
    let last = levels.last()?;
    if last.gamma <= 0.0 {
        return None;
    }
    let width = match levels.len() {
        1 => 0.25 * last.gamma,
        n => 2.0 * (levels[n - 2].gamma - last.gamma).abs().max(1e-6),
    };
    Some(((last.gamma - width).max(0.0), last.gamma + 1e-9))
}

/// A converged profile expressed in the similarity variable `η`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalProfile {
    pub geometry: Geometry,
    pub lambda: f64,
    /// `None` for the parabola, which is drawn with `κ = 1`.
    pub kappa: Option<f64>,
    pub eta_front: f64,
    /// `(η, U(η), U'(η))` on `[0, η_front]`.
    pub samples: Vec<(f64, f64, f64)>,
    /// `∫ U dη` over the whole drop (planar) or `2π ∫ U η dη` (radial).
    pub mass: f64,
    /// Width exponent `β`: fronts move like `t^β`.
    pub beta: f64,
    /// Height decays like `t^{-height_exponent}` (`β` planar, `2β` radial).
    pub height_exponent: f64,
    pub amplitude: f64,
}

impl PhysicalProfile {
    /// `U(|η|)` by cubic Hermite interpolation, zero outside the support.
    pub fn eval(&self, eta: f64) -> f64 {
        let e = eta.abs();
        if e >= self.eta_front {
            return 0.0;
        }
        let s = &self.samples;
        let i = match s.binary_search_by(|p| p.0.partial_cmp(&e).unwrap()) {
            Ok(i) => return s[i].1,
            Err(0) => return s[0].1,
            Err(i) if i >= s.len() => return 0.0,
            Err(i) => i - 1,
        };
        let (x0, u0, d0) = s[i];
        let (x1, u1, d1) = s[i + 1];
        let h = x1 - x0;
        let t = (e - x0) / h;
        let h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
        let h10 = t * (1.0 - t) * (1.0 - t);
        let h01 = t * t * (3.0 - 2.0 * t);
        let h11 = t * t * (t - 1.0);
        (h00 * u0 + h10 * h * d0 + h01 * u1 + h11 * h * d1).max(0.0)
    }

    /// Mass of `u = A t^{-β} U(x/t^β)` (or its radial analogue).
    pub fn physical_mass(&self) -> f64 {
        self.amplitude * self.mass
    }
}

/// Converts a rescaled result to `η = x/√κ` with `U(η) = z(η√κ)` and
/// computes the drop mass by quadrature.
pub fn to_physical(result: &ShootingResult, r: &Rheology, geom: Geometry) -> Result<PhysicalProfile> {
    to_physical_with(result, r, geom, 1e-3)
}

/// [`to_physical`] with an explicit sampling step in the rescaled variable.
pub fn to_physical_with(
    result: &ShootingResult,
    r: &Rheology,
    geom: Geometry,
    max_step: f64,
) -> Result<PhysicalProfile> {
    if !result.y_theta.is_finite() || result.y_theta <= 0.0 {
        return Err(Error::Domain(format!("result has no interface (y = {})", result.y_theta)));
    }
    let beta = r.similarity_beta(geom);
    let height_exponent = match geom {
        Geometry::Planar => beta,
        Geometry::Radial => 2.0 * beta,
    };
    let base = PhysicalProfile {
        geometry: geom,
        lambda: r.lambda(),
        kappa: None,
        eta_front: 0.0,
        samples: Vec::new(),
        mass: 0.0,
        beta,
        height_exponent,
        amplitude: r.amp_a(),
    };

    if result.gamma_theta == 0.0 {
        // θ = 1: κ is free, draw the parabola at κ = 1
        let (c, front, mass) = match geom {
            Geometry::Planar => (0.5, 2f64.sqrt(), 4.0 * 2f64.sqrt() / 3.0),
            Geometry::Radial => (0.25, 2.0, 2.0 * std::f64::consts::PI),
        };
        let n = ((front / max_step).ceil() as usize).max(8);
        let samples = (0..=n)
            .map(|i| {
                let e = front * i as f64 / n as f64;
                (e, (1.0 - c * e * e).max(0.0), -2.0 * c * e)
            })
            .collect();
        return Ok(PhysicalProfile { kappa: None, eta_front: front, samples, mass, ..base });
    }

    let kappa = gamma_to_kappa(result.gamma_theta, r)?;
    let sk = kappa.sqrt();
    let delta = result.levels.last().map(|l| l.delta).unwrap_or(1e-10).min(1e-8);
    let cfg = ShotConfig {
        delta,
        trace: true,
        max_step: Some(max_step),
        x_max: Some(2.0 * result.y_theta),
        ..ShotConfig::default()
    };
    let out = integrate_to_event(geom, result.gamma_theta, r, &cfg)?;
    let mut trace = out.trace.unwrap_or_default();
    trace.retain(|s| s.x < result.y_theta);
    let x0 = trace.first().map(|s| s.x).unwrap_or(0.0);

    // Hermite-corrected trapezoid on the rescaled profile
    let weight = |x: f64| match geom {
        Geometry::Planar => 1.0,
        Geometry::Radial => x,
    };
    let mut integral = match geom {
        // [0, x0] with z ≈ 1
        Geometry::Planar => x0,
        Geometry::Radial => x0 * x0 / 2.0,
    };
    for w in trace.windows(2) {
        let (s0, s1) = (w[0], w[1]);
        let h = s1.x - s0.x;
        let (f0, f1) = (weight(s0.x) * s0.z, weight(s1.x) * s1.z);
        let (g0, g1) = match geom {
            Geometry::Planar => (s0.dz, s1.dz),
            Geometry::Radial => (s0.z + s0.x * s0.dz, s1.z + s1.x * s1.dz),
        };
        integral += h * (f0 + f1) / 2.0 + h * h * (g0 - g1) / 12.0;
    }
    if let Some(last) = trace.last() {
        // remaining sliver below the floor, z ~ (y - x)^p
        let p = r.p_front().max(1.0);
        integral += weight(last.x) * last.z.max(0.0) * (result.y_theta - last.x) * p / (p + 1.0);
    }
    let mass = match geom {
        Geometry::Planar => 2.0 * integral / sk,
        Geometry::Radial => 2.0 * std::f64::consts::PI * integral / kappa,
    };

    let mut samples: Vec<(f64, f64, f64)> = vec![(0.0, 1.0, 0.0)];
    samples.extend(trace.iter().map(|s| (s.x / sk, s.z.max(0.0), s.dz * sk)));
    let eta_front = result.y_theta / sk;
    samples.push((eta_front, 0.0, result.slope * sk));
    Ok(PhysicalProfile {
        kappa: Some(kappa),
        eta_front,
        samples,
        mass,
        ..base
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_examples() {
        let r = Rheology::new(2.0).unwrap();
        let b = analytic_bounds(&r).unwrap();
        assert!((b.g_max - 2f64.powf(0.75) * 3.75).abs() < 1e-14);
        assert!((b.g_max - 6.30672).abs() < 1e-5);
        assert!((b.lemma1_threshold - (1.5f64 / 7.0).powf(0.75) * 3.75).abs() < 1e-14);
        assert!((b.lemma1_threshold - 1.181071).abs() < 1e-6);
        assert!((b.b(1.0) - 3.75f64.powf(2.0 / 3.0)).abs() < 1e-14);
        assert!((b.b(1.0) - 2.413723).abs() < 1e-6);
    }

    #[test]
    fn threshold_below_g_for_all_a() {
        for i in 1..100 {
            let lambda = 1.0 / (i as f64 / 100.0);
            let b = analytic_bounds(&Rheology::new(lambda).unwrap()).unwrap();
            assert!(b.lemma1_threshold < b.g_max);
            let rb = analytic_bounds_in(Geometry::Radial, &Rheology::new(lambda).unwrap()).unwrap();
            assert!(rb.lemma1_threshold < rb.g_max);
            // the radial crossing bound equals 2 exactly at G
            assert!((rb.b(rb.g_max) - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn extrapolation_recovers_power_law_limit() {
        let levels: Vec<_> = schedule(10)
            .into_iter()
            .map(|d| (d, 0.75 + 0.3 * d.powf(0.44)))
            .collect();
        let e = extrapolate(&levels, 1e-14).unwrap();
        assert!((e.value - 0.75).abs() < 1e-10);
        assert!((e.order.unwrap() - 0.44).abs() < 1e-6);
    }

    #[test]
    fn extrapolation_rejects_oscillation() {
        let levels = vec![(1e-2, 1.0), (1e-3, 1.1), (1e-4, 1.05)];
        assert!(matches!(extrapolate(&levels, 1e-12), Err(Error::Convergence(_))));
    }

    #[test]
    fn extrapolation_of_converged_sequence() {
        let levels = vec![(1e-2, 0.0), (1e-3, 0.0), (1e-4, 0.0)];
        let e = extrapolate(&levels, 1e-12).unwrap();
        assert_eq!(e.value, 0.0);
        assert!(e.order.is_none());
    }

    #[test]
    fn schedule_shape() {
        let s = default_schedule();
        assert_eq!(s.len(), 17);
        assert!((s[0] - 1e-2).abs() < 1e-18 && (s[16] - 1e-10).abs() < 1e-24);
    }

    #[test]
    fn rejects_bad_arguments() {
        let r = Rheology::new(2.0).unwrap();
        let c = SolveConfig::default();
        assert!(solve_delta_level(Geometry::Planar, &r, 0.6, 0.0, &c).is_err());
        assert!(solve_delta_level(Geometry::Planar, &r, 1e-3, 1.5, &c).is_err());
        assert!(continue_to_zero_delta(Geometry::Planar, &r, 0.0, &[1e-3, 1e-2], &c).is_err());
        assert!(continue_to_zero_delta(Geometry::Planar, &r, 0.0, &[], &c).is_err());
    }
}
