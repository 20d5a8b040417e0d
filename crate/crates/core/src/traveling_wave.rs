//! Traveling waves `u = f(x + ct)` and the local behaviour of moving fronts.
//!
//! With the speed scaled out, fronts satisfy `f''' = -f^{-1-1/λ}`. In the
//! variables `x = f`, `y = f^{-α} f'`, `z = f^{β} f''` and the stretched
//! coordinate `dξ₁ = x^{-(α+β)} dξ` this becomes the autonomous system
//!
//! ```text
//! x' = x y,   y' = z - α y²,   z' = -1 + β y z
//! ```
//!
//! whose `(y, z)` projection has a single saddle `P`. Its four separatrices
//! `Γ₁..Γ₄` and their tails organise every possible front.
//!
//! Profiles computed here are for unit speed. A wave with speed `c` is
//! `|c|^{1/(2λ+1)} f`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{Control, Dopri5};
use crate::params::Rheology;

/// A point of the three-dimensional phase space, tagged with `ξ₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TWState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub xi1: f64,
}

impl TWState {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z, xi1: 0.0 }
    }
}

fn exponents(r: &Rheology) -> (f64, f64) {
    (r.tw_alpha(), r.tw_beta())
}

/// `(x', y', z')` at `state`.
pub fn tw_rhs(state: &TWState, r: &Rheology) -> Result<[f64; 3]> {
    if !(state.x > 0.0) {
        return Err(Error::Domain(format!("x must be positive, got {}", state.x)));
    }
    let (alpha, beta) = exponents(r);
    Ok([
        state.x * state.y,
        state.z - alpha * state.y * state.y,
        -1.0 + beta * state.y * state.z,
    ])
}

/// `(ln x, y, z)` right-hand side.
fn log_rhs(alpha: f64, beta: f64, s: &[f64; 3]) -> [f64; 3] {
    [s[1], s[2] - alpha * s[1] * s[1], -1.0 + beta * s[1] * s[2]]
}

/// The saddle `P` and its linearisation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub y_p: f64,
    pub z_p: f64,
    pub jacobian: [[f64; 2]; 2],
    /// `(unstable, stable)`.
    pub eigenvalues: (f64, f64),
    /// Unit eigenvectors, ordered as `eigenvalues`, with positive `y` component.
    pub eigenvectors: ([f64; 2], [f64; 2]),
}

impl Equilibrium {
    pub fn det(&self) -> f64 {
        let j = &self.jacobian;
        j[0][0] * j[1][1] - j[0][1] * j[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.jacobian[0][0] + self.jacobian[1][1]
    }

    /// `|y'| + |z'|` evaluated at `P`.
    pub fn residual(&self, r: &Rheology) -> f64 {
        let d = log_rhs(r.tw_alpha(), r.tw_beta(), &[0.0, self.y_p, self.z_p]);
        d[1].abs() + d[2].abs()
    }
}

pub fn equilibrium_analysis(r: &Rheology) -> Result<Equilibrium> {
    let (alpha, beta) = exponents(r);
    if !(alpha > 0.0) {
        return Err(Error::UnsupportedRegime(format!(
            "traveling-wave saddle needs lambda > 1, got {}",
            r.lambda()
        )));
    }
    let y_p = (beta * alpha).powf(-1.0 / 3.0);
    let z_p = alpha.cbrt() * beta.powf(-2.0 / 3.0);
    let jacobian = [[-2.0 * alpha * y_p, 1.0], [beta * z_p, beta * y_p]];
    let tr = jacobian[0][0] + jacobian[1][1];
    let det = jacobian[0][0] * jacobian[1][1] - jacobian[0][1] * jacobian[1][0];
    if !(det < 0.0) {
        return Err(Error::Singular(format!("equilibrium is not a saddle, det = {det}")));
    }
    let disc = (tr * tr - 4.0 * det).sqrt();
    let mu_u = 0.5 * (tr + disc);
    // product form avoids cancellation
    let mu_s = det / mu_u;
    let vec = |mu: f64| {
        let v = [1.0, mu - jacobian[0][0]];
        let n = v[0].hypot(v[1]);
        [v[0] / n, v[1] / n]
    };
    Ok(Equilibrium {
        y_p,
        z_p,
        jacobian,
        eigenvalues: (mu_u, mu_s),
        eigenvectors: (vec(mu_u), vec(mu_s)),
    })
}

/// The four separatrices of `P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Separatrix {
    /// Stable; `y → +∞`, `z → 0⁺` backwards.
    Gamma1,
    /// Stable; `y → -∞`, `z → +∞` backwards.
    Gamma2,
    /// Unstable; `y, z → +∞` forwards.
    Gamma3,
    /// Unstable; `y → -∞`, `z → 0⁻` forwards.
    Gamma4,
}

impl Separatrix {
    pub const ALL: [Separatrix; 4] = [Self::Gamma1, Self::Gamma2, Self::Gamma3, Self::Gamma4];

    pub fn is_stable(self) -> bool {
        matches!(self, Self::Gamma1 | Self::Gamma2)
    }

    fn escapes_positive(self) -> bool {
        matches!(self, Self::Gamma1 | Self::Gamma3)
    }
}

/// Launch offset from `P` along the eigenvector.
pub const SEPARATRIX_OFFSET: f64 = 1e-7;

/// Integration limits shared by separatrix tracing and classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Caps {
    /// Stop once `|y|` exceeds this.
    pub y_cap: f64,
    /// Longest `|Δξ₁|` explored in each direction.
    pub xi1_span: f64,
    /// An end counts as `P` when the orbit comes this close to it.
    pub p_tol: f64,
    /// Relative drift allowed in the tail ratio over the last decade of `|y|`.
    pub ratio_tol: f64,
    pub tol: f64,
    /// Largest step in `ξ₁`; bounds the sample spacing.
    pub max_step: f64,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            y_cap: 1e4,
            xi1_span: 80.0,
            p_tol: 1e-5,
            ratio_tol: 1e-2,
            tol: 1e-12,
            max_step: 0.05,
        }
    }
}

/// Samples of one orbit, ordered by increasing `ξ₁`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    pub samples: Vec<TWState>,
}

impl Orbit {
    /// `z·y` at the sample with largest `|y|`.
    pub fn tail_product(&self) -> f64 {
        let s = self.tail();
        s.z * s.y
    }

    /// `z/y²` at the sample with largest `|y|`.
    pub fn tail_ratio(&self) -> f64 {
        let s = self.tail();
        s.z / (s.y * s.y)
    }

    fn tail(&self) -> TWState {
        *self
            .samples
            .iter()
            .max_by(|a, b| a.y.abs().total_cmp(&b.y.abs()))
            .expect("orbit has samples")
    }
}

/// Raw integration in one direction from `start`, stopping at the `y` cap or
/// the end of the span.
fn trace(start: TWState, r: &Rheology, dir: f64, caps: &Caps) -> Result<(Vec<TWState>, bool)> {
    if !(start.x > 0.0) {
        return Err(Error::Domain(format!("x must be positive, got {}", start.x)));
    }
    let (alpha, beta) = exponents(r);
    let f = |_t: f64, s: &[f64; 3]| {
        let d = log_rhs(alpha, beta, s);
        d.iter().all(|v| v.is_finite()).then_some(d)
    };
    let solver = Dopri5 { h_max: caps.max_step, max_steps: 2_000_000, ..Dopri5::with_tol(caps.tol) };
    let mut out = vec![start];
    let mut capped = false;
    let run = solver.integrate(
        &f,
        start.xi1,
        [start.x.ln(), start.y, start.z],
        start.xi1 + dir * caps.xi1_span,
        |step| {
            let s = step.y1;
            out.push(TWState { x: s[0].exp(), y: s[1], z: s[2], xi1: step.t1 });
            if s[1].abs() >= caps.y_cap {
                capped = true;
                Control::Stop
            } else {
                Control::Continue
            }
        },
    );
    if matches!(run.termination, crate::ode::Termination::MaxSteps) {
        return Err(Error::Convergence("orbit integration exceeded its step budget".into()));
    }
    Ok((out, capped))
}

/// Follows one separatrix from `P ± ε v` until `|y|` passes `span`.
/// `x = 1` at the launch point.
pub fn integrate_separatrix(which: Separatrix, r: &Rheology, span: f64, tol: f64) -> Result<Orbit> {
    if !(span > 0.0) {
        return Err(Error::Domain(format!("span must be positive, got {span}")));
    }
    let eq = equilibrium_analysis(r)?;
    let (v, dir) = if which.is_stable() {
        (eq.eigenvectors.1, -1.0)
    } else {
        (eq.eigenvectors.0, 1.0)
    };
    let caps = Caps { y_cap: span, tol, ..Caps::default() };
    for sign in [1.0, -1.0] {
        let start = TWState::new(
            1.0,
            eq.y_p + sign * SEPARATRIX_OFFSET * v[0],
            eq.z_p + sign * SEPARATRIX_OFFSET * v[1],
        );
        let (mut samples, capped) = trace(start, r, dir, &caps)?;
        let last = *samples.last().unwrap();
        if capped && (last.y > 0.0) == which.escapes_positive() {
            if dir < 0.0 {
                samples.reverse();
            }
            return Ok(Orbit { samples });
        }
    }
    Err(Error::Singular(format!(
        "neither launch direction produced {which:?} within span {span}"
    )))
}

/// Asymptotic behaviours of a front profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FrontBehavior {
    /// Finite contact angle: `f ~ Kξ` at the front.
    LinearAtOrigin,
    /// `f ~ C_λ ξ^{3λ/(2λ+1)}` at the front.
    ZeroAngleAtOrigin,
    /// `f ~ C_λ ξ^{3λ/(2λ+1)}` far from the front.
    PowerLawFarField,
    /// `f ~ Kξ²` far away.
    QuadraticFarField,
    /// Vanishes linearly at a second point `ξ₀`.
    CompactSupport,
    /// `f` stays positive in both directions.
    NoFront,
    /// `f' < 0` throughout.
    Dewetting,
}

/// The invariant manifolds `Π_i = ℝ × Γ_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Manifold {
    Pi1,
    Pi2,
    Pi3,
    Pi4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TrajectoryLabel {
    EquilibriumOrbit,
    Gamma1,
    Gamma2,
    Gamma3,
    Gamma4,
    /// Approaches the first manifold and then the second.
    Mixed(Manifold, Manifold),
}

impl TrajectoryLabel {
    pub fn behaviors(self) -> &'static [FrontBehavior] {
        use FrontBehavior::*;
        use Manifold::*;
        match self {
            Self::EquilibriumOrbit => &[ZeroAngleAtOrigin, PowerLawFarField],
            Self::Gamma1 => &[LinearAtOrigin, PowerLawFarField],
            Self::Gamma2 => &[NoFront, QuadraticFarField, PowerLawFarField],
            Self::Gamma3 => &[ZeroAngleAtOrigin, QuadraticFarField],
            Self::Gamma4 => &[ZeroAngleAtOrigin, CompactSupport],
            Self::Mixed(Pi1, Pi4) => &[LinearAtOrigin, CompactSupport],
            Self::Mixed(Pi4, Pi2) => &[LinearAtOrigin, QuadraticFarField, Dewetting],
            Self::Mixed(Pi2, Pi3) => &[NoFront, QuadraticFarField],
            Self::Mixed(Pi3, Pi1) => &[LinearAtOrigin, QuadraticFarField],
            Self::Mixed(..) => &[],
        }
    }

    pub fn name(self) -> String {
        match self {
            Self::Mixed(a, b) => format!("mixed_{a:?}_{b:?}").to_lowercase(),
            other => format!("{other:?}").to_lowercase(),
        }
    }
}

/// Where one end of an orbit goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EndKind {
    Equilibrium,
    /// Tail of the named separatrix type.
    Tail(Separatrix),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndReport {
    pub kind: EndKind,
    pub last: TWState,
    /// `z·y` or `z/y²` at the cap, whichever the tail type predicts constant.
    pub tail_ratio: Option<f64>,
    /// Free constant of the local law: `y ≈ K x^{-α}` or `y ≈ K x^{β/2}`.
    pub k: Option<f64>,
    pub min_distance_to_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryClass {
    pub label: TrajectoryLabel,
    pub backward: EndReport,
    pub forward: EndReport,
}

impl TrajectoryClass {
    pub fn front_behavior(&self) -> &'static [FrontBehavior] {
        self.label.behaviors()
    }
}

fn classify_end(samples: &[TWState], capped: bool, dir: f64, eq: &Equilibrium, r: &Rheology, caps: &Caps) -> Result<EndReport> {
    let (alpha, beta) = exponents(r);
    let dist = |s: &TWState| (s.y - eq.y_p).hypot(s.z - eq.z_p);
    let min_d = samples.iter().map(dist).fold(f64::INFINITY, f64::min);
    let last = *samples.last().unwrap();
    if min_d < caps.p_tol {
        return Ok(EndReport { kind: EndKind::Equilibrium, last, tail_ratio: None, k: None, min_distance_to_p: min_d });
    }
    if !capped {
        return Err(Error::Classification(format!(
            "{} end neither reached a tail nor approached P within the span (last state y = {}, z = {}, closest approach {min_d:e})",
            if dir > 0.0 { "forward" } else { "backward" },
            last.y,
            last.z
        )));
    }
    let kind = match (dir > 0.0, last.y > 0.0) {
        (false, true) => Separatrix::Gamma1,
        (false, false) => Separatrix::Gamma2,
        (true, true) => Separatrix::Gamma3,
        (true, false) => Separatrix::Gamma4,
    };
    let product_type = matches!(kind, Separatrix::Gamma1 | Separatrix::Gamma4);
    let ratio = |s: &TWState| if product_type { s.z * s.y } else { s.z / (s.y * s.y) };
    let earlier = samples
        .iter()
        .rev()
        .find(|s| s.y.abs() <= 0.1 * caps.y_cap)
        .ok_or_else(|| Error::Classification("tail too short to check stationarity".into()))?;
    let (r0, r1) = (ratio(earlier), ratio(&last));
    if !((r1 - r0).abs() <= caps.ratio_tol * r1.abs()) {
        return Err(Error::Classification(format!(
            "{kind:?}-type tail ratio not stationary: {r0} at |y| = {}, {r1} at |y| = {}",
            earlier.y.abs(),
            last.y.abs()
        )));
    }
    let k = if product_type { last.y * last.x.powf(alpha) } else { last.y * last.x.powf(-beta / 2.0) };
    Ok(EndReport { kind: EndKind::Tail(kind), last, tail_ratio: Some(r1), k: Some(k), min_distance_to_p: min_d })
}

/// Integrates `initial` in both directions and names the family it belongs to.
pub fn classify_trajectory(initial: TWState, r: &Rheology, caps: &Caps) -> Result<TrajectoryClass> {
    let eq = equilibrium_analysis(r)?;
    let (bwd, bcap) = trace(initial, r, -1.0, caps)?;
    let (fwd, fcap) = trace(initial, r, 1.0, caps)?;
    let backward = classify_end(&bwd, bcap, -1.0, &eq, r, caps)?;
    let forward = classify_end(&fwd, fcap, 1.0, &eq, r, caps)?;
    use EndKind::*;
    use Manifold::*;
    use Separatrix as S;
    let label = match (backward.kind, forward.kind) {
        (Equilibrium, Equilibrium) => TrajectoryLabel::EquilibriumOrbit,
        (Tail(S::Gamma1), Equilibrium) => TrajectoryLabel::Gamma1,
        (Tail(S::Gamma2), Equilibrium) => TrajectoryLabel::Gamma2,
        (Equilibrium, Tail(S::Gamma3)) => TrajectoryLabel::Gamma3,
        (Equilibrium, Tail(S::Gamma4)) => TrajectoryLabel::Gamma4,
        (Tail(S::Gamma1), Tail(S::Gamma4)) => TrajectoryLabel::Mixed(Pi1, Pi4),
        (Tail(S::Gamma2), Tail(S::Gamma4)) => TrajectoryLabel::Mixed(Pi4, Pi2),
        (Tail(S::Gamma2), Tail(S::Gamma3)) => TrajectoryLabel::Mixed(Pi2, Pi3),
        (Tail(S::Gamma1), Tail(S::Gamma3)) => TrajectoryLabel::Mixed(Pi3, Pi1),
        (b, f) => {
            return Err(Error::Classification(format!("inconsistent ends {b:?} / {f:?}")));
        }
    };
    Ok(TrajectoryClass { label, backward, forward })
}

/// Traces the orbit through `initial` over `[xi1_from, xi1_to]` (relative to
/// `initial.xi1`), stopping early at the `y` cap.
pub fn trace_orbit(initial: TWState, r: &Rheology, xi1_from: f64, xi1_to: f64, caps: &Caps) -> Result<Orbit> {
    if !(xi1_from <= 0.0 && xi1_to >= 0.0) {
        return Err(Error::Domain("orbit window must contain the initial point".into()));
    }
    let mut samples = Vec::new();
    if xi1_from < 0.0 {
        let (mut b, _) = trace(initial, r, -1.0, &Caps { xi1_span: -xi1_from, ..*caps })?;
        b.reverse();
        b.pop();
        samples = b;
    }
    if xi1_to > 0.0 {
        let (f, _) = trace(initial, r, 1.0, &Caps { xi1_span: xi1_to, ..*caps })?;
        samples.extend(f);
    } else {
        samples.push(initial);
    }
    Ok(Orbit { samples })
}

/// One point of a reconstructed front.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontSample {
    pub xi: f64,
    pub f: f64,
    pub df: f64,
}

const GAUSS5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// Recovers `ξ` along an orbit from `dξ = x^{α+β} dξ₁` and returns
/// `(ξ, f = x, f' = y x^α)`.
///
/// When `x` grows along the orbit, the front `x → 0` lies before the first
/// sample; it is placed at `xi_anchor` and the missing piece is closed with
/// the local power law `y ∝ x^s`. Otherwise the first sample sits at
/// `xi_anchor`.
pub fn reconstruct_front(orbit: &Orbit, r: &Rheology, xi_anchor: f64) -> Result<Vec<FrontSample>> {
    let s = &orbit.samples;
    if s.is_empty() {
        return Err(Error::Domain("empty orbit".into()));
    }
    if s.iter().any(|p| !(p.x > 0.0)) {
        return Err(Error::Domain("orbit leaves x > 0".into()));
    }
    if s.windows(2).any(|w| !(w[1].xi1 > w[0].xi1)) {
        return Err(Error::Domain("orbit samples must increase in xi1".into()));
    }
    let (alpha, beta) = exponents(r);
    let ab = alpha + beta;
    let first = s[0];
    let mut xi = xi_anchor;
    if first.y > 0.0 {
        let slope = match s.get(1) {
            Some(n) if n.y > 0.0 && (n.x / first.x - 1.0).abs() > 1e-12 => {
                (n.y / first.y).ln() / (n.x / first.x).ln()
            }
            _ => 0.0,
        };
        if !(ab - slope > 0.0) {
            return Err(Error::NonFinite(format!(
                "front closure diverges: local exponent {slope} >= {ab}"
            )));
        }
        xi += first.x.powf(ab) / (first.y * (ab - slope));
    }
    let mut out = Vec::with_capacity(s.len());
    out.push(FrontSample { xi, f: first.x, df: first.y * first.x.powf(alpha) });
    for w in s.windows(2) {
        let (p, q) = (w[0], w[1]);
        let h = q.xi1 - p.xi1;
        let (g0, g1) = (ab * p.x.ln(), ab * q.x.ln());
        let (d0, d1) = (ab * p.y, ab * q.y);
        let mut acc = 0.0;
        for (node, weight) in GAUSS5 {
            let t = 0.5 * (node + 1.0);
            let h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
            let h10 = t * (1.0 - t) * (1.0 - t);
            let h01 = t * t * (3.0 - 2.0 * t);
            let h11 = t * t * (t - 1.0);
            let g = h00 * g0 + h10 * h * d0 + h01 * g1 + h11 * h * d1;
            acc += weight * g.exp();
        }
        xi += 0.5 * h * acc;
        if !xi.is_finite() {
            return Err(Error::NonFinite("xi quadrature overflowed".into()));
        }
        out.push(FrontSample { xi, f: q.x, df: q.y * q.x.powf(alpha) });
    }
    Ok(out)
}

/// The explicit zero-contact-angle front `f = C_λ ξ^p`, `p = 3λ/(2λ+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExplicitFront {
    pub c: f64,
    pub p: f64,
    pub a: f64,
}

impl ExplicitFront {
    pub fn f(&self, xi: f64) -> f64 {
        self.c * xi.powf(self.p)
    }

    /// `f''' + f^{-1-1/λ}`, which vanishes for the exact front.
    pub fn residual(&self, xi: f64) -> f64 {
        let p = self.p;
        let d3 = self.c * p * (p - 1.0) * (p - 2.0) * xi.powf(p - 3.0);
        d3 + self.f(xi).powf(-1.0 - self.a)
    }

    /// `C^{2+1/λ} p(p-1)(2-p)`, identically one.
    pub fn identity(&self) -> f64 {
        self.c.powf(2.0 + self.a) * self.p * (self.p - 1.0) * (2.0 - self.p)
    }
}

pub fn explicit_front(r: &Rheology) -> Result<ExplicitFront> {
    let (alpha, beta) = exponents(r);
    if !(alpha > 0.0) {
        return Err(Error::UnsupportedRegime(format!(
            "traveling-wave fronts need lambda > 1, got {}",
            r.lambda()
        )));
    }
    let ab = alpha + beta;
    let c = (ab * (beta * alpha).powf(-1.0 / 3.0)).powf(1.0 / ab);
    Ok(ExplicitFront { c, p: r.p_front(), a: r.a() })
}

/// Orbit of `ℝ × P` covering `x ∈ [x_from, x_to]`.
pub fn equilibrium_orbit(r: &Rheology, x_from: f64, x_to: f64, caps: &Caps) -> Result<Orbit> {
    if !(x_from > 0.0 && x_to > x_from) {
        return Err(Error::Domain(format!("need 0 < x_from < x_to, got {x_from}, {x_to}")));
    }
    let eq = equilibrium_analysis(r)?;
    let span = (x_to / x_from).ln() / eq.y_p;
    let start = TWState::new(x_from, eq.y_p, eq.z_p);
    let (samples, _) = trace(start, r, 1.0, &Caps { xi1_span: span, ..*caps })?;
    Ok(Orbit { samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r2() -> Rheology {
        Rheology::new(2.0).unwrap()
    }

    #[test]
    fn rhs_examples() {
        let r = r2();
        let d = tw_rhs(&TWState::new(1.0, 1.0, 0.0), &r).unwrap();
        assert!((d[1] + 1.0 / 6.0).abs() < 1e-15);
        assert!((d[2] + 1.0).abs() < 1e-15);
        assert!(tw_rhs(&TWState::new(0.0, 1.0, 0.0), &r).is_err());
        let eq = equilibrium_analysis(&r).unwrap();
        let d = tw_rhs(&TWState::new(3.0, eq.y_p, eq.z_p), &r).unwrap();
        assert!(d[1].abs() < 1e-13 && d[2].abs() < 1e-13);
        assert!((d[0] - 3.0 * eq.y_p).abs() < 1e-14);
    }

    #[test]
    fn equilibrium_lambda_two() {
        let eq = equilibrium_analysis(&r2()).unwrap();
        assert!((eq.y_p - 9f64.cbrt()).abs() < 1e-14);
        assert!((eq.y_p - 2.08008).abs() < 1e-5);
        assert!((eq.z_p - 0.72113).abs() < 1e-5);
        assert!((eq.det() + 3.0 * (1.0 / 6.0) * (2.0 / 3.0) * eq.y_p * eq.y_p).abs() < 1e-13);
        assert!((eq.det() + 1.44225).abs() < 1e-5);
        assert!((eq.trace() - 0.69336).abs() < 1e-5);
        let (u, s) = eq.eigenvalues;
        assert!((u - 1.5967).abs() < 1e-4 && (s + 0.9033).abs() < 1e-4);
        assert!((u * s - eq.det()).abs() < 1e-12);
        assert!((u + s - eq.trace()).abs() < 1e-12);
    }

    #[test]
    fn eigenvectors_satisfy_jacobian() {
        let eq = equilibrium_analysis(&Rheology::new(3.0).unwrap()).unwrap();
        let j = eq.jacobian;
        for (mu, v) in [(eq.eigenvalues.0, eq.eigenvectors.0), (eq.eigenvalues.1, eq.eigenvectors.1)] {
            let jv = [j[0][0] * v[0] + j[0][1] * v[1], j[1][0] * v[0] + j[1][1] * v[1]];
            assert!((jv[0] - mu * v[0]).abs() < 1e-12 && (jv[1] - mu * v[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_shear_thinning() {
        for l in [0.5, 1.0] {
            let r = Rheology::new(l).unwrap();
            assert!(matches!(equilibrium_analysis(&r), Err(Error::UnsupportedRegime(_))));
            assert!(explicit_front(&r).is_err());
        }
    }

    #[test]
    fn explicit_front_constant() {
        let f = explicit_front(&r2()).unwrap();
        assert!((f.c - (5.0 / 6.0 * 9f64.cbrt()).powf(1.2)).abs() < 1e-13);
        assert!((f.c - 1.934993).abs() < 1e-6);
        assert!((f.identity() - 1.0).abs() < 1e-12);
        for xi in [0.1, 1.0, 10.0] {
            assert!(f.residual(xi).abs() < 1e-9 * f.f(xi).powf(-1.5));
        }
    }

    #[test]
    fn separatrix_leaves_along_eigenline() {
        let r = r2();
        let eq = equilibrium_analysis(&r).unwrap();
        let orbit = integrate_separatrix(Separatrix::Gamma3, &r, 1e3, 1e-12).unwrap();
        let v = eq.eigenvectors.0;
        let mu = eq.eigenvalues.0;
        for s in orbit.samples.iter().take_while(|s| s.xi1 < 3.0) {
            let (dy, dz) = (s.y - eq.y_p, s.z - eq.z_p);
            let off_line = (dy * v[1] - dz * v[0]).abs();
            let along = SEPARATRIX_OFFSET * (mu * s.xi1).exp();
            assert!(off_line < 1e-2 * along + 1e-13, "at xi1 = {}", s.xi1);
        }
    }

    #[test]
    fn labels_have_documented_behaviors() {
        use FrontBehavior::*;
        assert!(TrajectoryLabel::Gamma4.behaviors().contains(&CompactSupport));
        assert!(TrajectoryLabel::Mixed(Manifold::Pi4, Manifold::Pi2).behaviors().contains(&Dewetting));
        assert_eq!(TrajectoryLabel::Mixed(Manifold::Pi4, Manifold::Pi2).name(), "mixed_pi4_pi2");
    }
}
