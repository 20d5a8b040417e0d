//! Conservative evolution of `u_t + (u^{λ+2} |u_xxx|^{λ-1} u_xxx)_x = 0` on a
//! uniform grid.
//!
//! Fluxes live on faces between nodes and are built from the centred third
//! difference there. Boundary fluxes are zero and ghost nodes are mirror
//! images, so the trapezoid mass `Σ wᵢ uᵢ` (`w = h`, halved at the ends)
//! telescopes exactly. Negative values produced by a step are clipped to zero
//! and the mass this adds is kept in a ledger.
//!
//! Two integrators are provided: [`step`], the explicit update with the
//! stability restriction `dt ~ h⁴`, and [`implicit_step`], backward Euler
//! solved by Newton's method with a pentadiagonal Jacobian. Long runs towards
//! self-similarity use the implicit one through [`evolve`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::Rheology;
use crate::shooting::PhysicalProfile;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if n < 5 || !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::Domain(format!(
                "grid needs n >= 5 and x_min < x_max, got [{x_min}, {x_max}] with {n} nodes"
            )));
        }
        Ok(Self { x_min, x_max, n })
    }

    pub fn h(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.h()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// Trapezoid weight of node `i`.
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i == self.n - 1 {
            0.5 * self.h()
        } else {
            self.h()
        }
    }
}

/// Film height on a grid at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field1D {
    pub grid: Grid,
    pub u: Vec<f64>,
    pub t: f64,
    /// Trapezoid mass, refreshed after every step.
    pub mass: f64,
    /// Total mass added by clipping negative values.
    pub clip_ledger: f64,
}

impl Field1D {
    pub fn new(grid: Grid, u: Vec<f64>, t: f64) -> Result<Self> {
        if u.len() != grid.n {
            return Err(Error::Domain(format!("{} values for {} nodes", u.len(), grid.n)));
        }
        if let Some(i) = u.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Domain(format!("u[{i}] = {} is not a finite non-negative value", u[i])));
        }
        let mass = trapezoid(&grid, &u);
        Ok(Self { grid, u, t, mass, clip_ledger: 0.0 })
    }

    pub fn x(&self) -> Vec<f64> {
        self.grid.nodes()
    }

    /// Outermost nodes with `u > threshold`, or `None` for an empty field.
    pub fn support(&self, threshold: f64) -> Option<(f64, f64)> {
        let first = self.u.iter().position(|&v| v > threshold)?;
        let last = self.u.iter().rposition(|&v| v > threshold)?;
        Some((self.grid.x(first), self.grid.x(last)))
    }

    /// True when the field is positive up to both boundaries.
    pub fn fills_domain(&self) -> bool {
        self.u[0] > 0.0 && self.u[self.grid.n - 1] > 0.0
    }

    /// Largest `|u_i - u_{n-1-i}|`.
    pub fn asymmetry(&self) -> f64 {
        let n = self.grid.n;
        (0..n / 2).map(|i| (self.u[i] - self.u[n - 1 - i]).abs()).fold(0.0, f64::max)
    }
}

fn trapezoid(grid: &Grid, u: &[f64]) -> f64 {
    u.iter().enumerate().map(|(i, v)| grid.weight(i) * v).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DropShape {
    /// `1 - ξ²` on the support, `ξ` the scaled offset from its centre.
    Parabola,
    /// Constant on the support; nodes exactly on an edge get half height.
    Rectangle,
    /// `A t₀^{-β} U(x/t₀^β)` from a converged profile; centred at the
    /// midpoint of the given support, whose width is not used.
    SelfSimilarSnapshot { profile: PhysicalProfile, t0: f64 },
}

/// A non-negative, compactly supported drop with trapezoid mass `mass_target`.
pub fn init_drop(shape: &DropShape, mass_target: f64, support: (f64, f64), grid: &Grid) -> Result<Field1D> {
    if !(mass_target > 0.0) || !mass_target.is_finite() {
        return Err(Error::Domain(format!("mass must be positive, got {mass_target}")));
    }
    let (lo, hi) = support;
    if !(lo < hi) || lo < grid.x_min || hi > grid.x_max {
        return Err(Error::Domain(format!(
            "support [{lo}, {hi}] must be a non-empty interval inside [{}, {}]",
            grid.x_min, grid.x_max
        )));
    }
    let c = 0.5 * (lo + hi);
    let hw = 0.5 * (hi - lo);
    let mut t = 0.0;
    let u: Vec<f64> = match shape {
        DropShape::Parabola => grid
            .nodes()
            .iter()
            .map(|&x| (1.0 - ((x - c) / hw).powi(2)).max(0.0))
            .collect(),
        DropShape::Rectangle => grid
            .nodes()
            .iter()
            .map(|&x| {
                // nodes on an edge carry half height, as the trapezoid rule sees a jump
                let d = (x - c).abs() - hw;
                if d.abs() <= 1e-12 * hw {
                    0.5
                } else if d < 0.0 {
                    1.0
                } else {
                    0.0
                }
            })
            .collect(),
        DropShape::SelfSimilarSnapshot { profile, t0 } => {
            if !(*t0 > 0.0) {
                return Err(Error::Domain(format!("snapshot time must be positive, got {t0}")));
            }
            let width = t0.powf(profile.beta);
            let reach = profile.eta_front * width;
            if c - reach < grid.x_min || c + reach > grid.x_max {
                return Err(Error::Domain(format!(
                    "snapshot support [{}, {}] leaves the grid",
                    c - reach,
                    c + reach
                )));
            }
            t = *t0;
            let amp = profile.amplitude / width;
            grid.nodes().iter().map(|&x| amp * profile.eval((x - c) / width)).collect()
        }
    };
    let m = trapezoid(grid, &u);
    if !(m > 0.0) {
        return Err(Error::Domain("support contains no grid node".into()));
    }
    let scale = mass_target / m;
    let u = u.into_iter().map(|v| v * scale).collect();
    Field1D::new(*grid, u, t)
}

/// Face mobility built from the two adjacent `u^{λ+2}` values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mobility {
    /// Donor value: the node the flux leaves from.
    #[default]
    Upwind,
    /// Smaller of the two.
    Min,
}

/// Per-face quantities: mobility, third difference and `|d|^{λ-1} d`.
struct Faces {
    m: Vec<f64>,
    d: Vec<f64>,
    phi: Vec<f64>,
    /// Node whose value sets the mobility.
    donor: Vec<usize>,
}

#[inline]
fn ghost(u: &[f64], k: isize) -> f64 {
    let n = u.len() as isize;
    let k = if k < 0 { -k } else if k >= n { 2 * (n - 1) - k } else { k };
    u[k as usize]
}

fn faces(u: &[f64], h: f64, lambda: f64, mobility: Mobility) -> Faces {
    let n = u.len();
    let h3 = h * h * h;
    let mut out = Faces {
        m: Vec::with_capacity(n - 1),
        d: Vec::with_capacity(n - 1),
        phi: Vec::with_capacity(n - 1),
        donor: Vec::with_capacity(n - 1),
    };
    let pow = |v: f64| v.max(0.0).powf(lambda + 2.0);
    for f in 0..n - 1 {
        let fi = f as isize;
        let d = (ghost(u, fi + 2) - 3.0 * u[f + 1] + 3.0 * u[f] - ghost(u, fi - 1)) / h3;
        let (ml, mr) = (pow(u[f]), pow(u[f + 1]));
        let donor = match mobility {
            Mobility::Upwind => {
                if d > 0.0 {
                    f
                } else {
                    f + 1
                }
            }
            Mobility::Min => {
                if ml <= mr {
                    f
                } else {
                    f + 1
                }
            }
        };
        out.m.push(if donor == f { ml } else { mr });
        out.phi.push(d.abs().powf(lambda - 1.0) * d);
        out.d.push(d);
        out.donor.push(donor);
    }
    out
}

/// `F_{f+1/2}` for every interior face.
fn fluxes(u: &[f64], h: f64, lambda: f64, mobility: Mobility) -> Vec<f64> {
    let fc = faces(u, h, lambda, mobility);
    fc.m.iter().zip(&fc.phi).map(|(m, p)| m * p).collect()
}

/// Largest linearised diffusivity `λ M |d|^{λ-1}` over the faces.
fn max_diffusivity(u: &[f64], h: f64, lambda: f64, mobility: Mobility) -> f64 {
    let fc = faces(u, h, lambda, mobility);
    fc.m
        .iter()
        .zip(&fc.d)
        .map(|(m, d)| lambda * m * d.abs().powf(lambda - 1.0))
        .fold(0.0, f64::max)
}

/// Explicit stability limit `h⁴ / (8 D_max)`; infinite for a flat field.
pub fn stability_bound(field: &Field1D, r: &Rheology, mobility: Mobility) -> f64 {
    let h = field.grid.h();
    let d = max_diffusivity(&field.u, h, r.lambda(), mobility);
    if d > 0.0 {
        h.powi(4) / (8.0 * d)
    } else {
        f64::INFINITY
    }
}

pub const DEFAULT_C_SAFE: f64 = 0.1;

/// Heuristic explicit time step `c_safe h⁴ / D_max`, capped at `dt_max`.
pub fn suggest_dt(field: &Field1D, r: &Rheology, mobility: Mobility, c_safe: f64, dt_max: f64) -> f64 {
    let h = field.grid.h();
    let d = max_diffusivity(&field.u, h, r.lambda(), mobility);
    if d > 0.0 {
        (c_safe * h.powi(4) / d).min(dt_max)
    } else {
        dt_max
    }
}

fn nan_report(u: &[f64], t: f64, dt: f64) -> Option<Error> {
    let i = u.iter().position(|v| !v.is_finite())?;
    let lo = i.saturating_sub(2);
    let hi = (i + 3).min(u.len());
    Some(Error::NonFinite(format!(
        "u[{i}] is {} at t = {t:e} (dt = {dt:e}); neighbourhood {:?}",
        u[i],
        &u[lo..hi]
    )))
}

fn clip(field: &mut Field1D) {
    let grid = field.grid;
    for (i, v) in field.u.iter_mut().enumerate() {
        if *v < 0.0 {
            field.clip_ledger -= grid.weight(i) * *v;
            *v = 0.0;
        }
    }
    field.mass = trapezoid(&grid, &field.u);
}

/// One explicit conservative step. Rejects `dt` above [`stability_bound`];
/// on a non-finite result the field is left untouched.
pub fn step(field: &mut Field1D, r: &Rheology, dt: f64, mobility: Mobility) -> Result<()> {
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("time step must be positive, got {dt}")));
    }
    let bound = stability_bound(field, r, mobility);
    if dt > bound * (1.0 + 1e-12) {
        return Err(Error::Stability { dt, bound });
    }
    let g = field.grid;
    let f = fluxes(&field.u, g.h(), r.lambda(), mobility);
    let n = g.n;
    let mut next = field.u.clone();
    for i in 0..n {
        let right = if i + 1 < n { f[i] } else { 0.0 };
        let left = if i > 0 { f[i - 1] } else { 0.0 };
        next[i] -= dt / g.weight(i) * (right - left);
    }
    if let Some(e) = nan_report(&next, field.t, dt) {
        return Err(e);
    }
    field.u = next;
    field.t += dt;
    clip(field);
    Ok(())
}

/// Square band matrix with `kl` sub- and `ku` super-diagonals, stored by row
/// with room for the fill produced by partial pivoting.
struct Band {
    n: usize,
    kl: usize,
    ku: usize,
    w: usize,
    data: Vec<f64>,
}

impl Band {
    fn new(n: usize, kl: usize, ku: usize) -> Self {
        let w = 2 * kl + ku + 1;
        Self { n, kl, ku, w, data: vec![0.0; n * w] }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.w + j + self.kl - i
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.idx(i, j)]
    }

    #[inline]
    fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    /// Solves `A x = b` in place by Gaussian elimination with partial pivoting.
    fn solve(mut self, b: &mut [f64]) -> Result<()> {
        let n = self.n;
        let reach = self.kl + self.ku;
        for k in 0..n {
            let last = (k + self.kl).min(n - 1);
            let mut p = k;
            for i in k + 1..=last {
                if self.get(i, k).abs() > self.get(p, k).abs() {
                    p = i;
                }
            }
            let piv = self.get(p, k);
            if piv == 0.0 || !piv.is_finite() {
                return Err(Error::Singular(format!("zero pivot in column {k}")));
            }
            let jmax = (k + reach).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    let (a, c) = (self.get(k, j), self.get(p, j));
                    self.set(k, j, c);
                    self.set(p, j, a);
                }
                b.swap(k, p);
            }
            for i in k + 1..=last {
                let l = self.get(i, k) / piv;
                if l != 0.0 {
                    for j in k + 1..=jmax {
                        let v = self.get(k, j);
                        self.add(i, j, -l * v);
                    }
                    b[i] -= l * b[k];
                }
                self.set(i, k, 0.0);
            }
        }
        for k in (0..n).rev() {
            let jmax = (k + reach).min(n - 1);
            let mut s = b[k];
            for j in k + 1..=jmax {
                s -= self.get(k, j) * b[j];
            }
            b[k] = s / self.get(k, k);
        }
        Ok(())
    }
}

/// Newton controls for [`implicit_step`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewtonConfig {
    /// Converged when `max|Δu| < tol · max|u|`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 30 }
    }
}

/// One backward-Euler step. Returns the Newton iteration count; on failure
/// the field is left untouched.
pub fn implicit_step(
    field: &mut Field1D,
    r: &Rheology,
    dt: f64,
    mobility: Mobility,
    newton: &NewtonConfig,
) -> Result<usize> {
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("time step must be positive, got {dt}")));
    }
    let g = field.grid;
    let n = g.n;
    let h = g.h();
    let h3 = h * h * h;
    let lambda = r.lambda();
    let m_exp = lambda + 2.0;
    let old = &field.u;
    let mut u = old.clone();
    for it in 1..=newton.max_iter {
        let fc = faces(&u, h, lambda, mobility);
        let mut res: Vec<f64> = (0..n).map(|i| u[i] - old[i]).collect();
        let mut jac = Band::new(n, 2, 2);
        for i in 0..n {
            jac.add(i, i, 1.0);
        }
        for f in 0..n - 1 {
            let flux = fc.m[f] * fc.phi[f];
            res[f] += dt / g.weight(f) * flux;
            res[f + 1] -= dt / g.weight(f + 1) * flux;

            let dphi = lambda * fc.d[f].abs().powf(lambda - 1.0);
            let mut cols = [(0usize, 0.0f64); 5];
            let mut nc = 0;
            let mut push = |k: usize, v: f64| {
                if let Some(c) = cols[..nc].iter_mut().find(|c| c.0 == k) {
                    c.1 += v;
                } else {
                    cols[nc] = (k, v);
                    nc += 1;
                }
            };
            let fi = f as isize;
            for (k, coef) in [(fi - 1, -1.0), (fi, 3.0), (fi + 1, -3.0), (fi + 2, 1.0)] {
                let k = if k < 0 { -k } else if k >= n as isize { 2 * (n as isize - 1) - k } else { k };
                push(k as usize, fc.m[f] * dphi * coef / h3);
            }
            let dn = fc.donor[f];
            push(dn, m_exp * u[dn].max(0.0).powf(m_exp - 1.0) * fc.phi[f]);
            for &(k, v) in &cols[..nc] {
                jac.add(f, k, dt / g.weight(f) * v);
                jac.add(f + 1, k, -dt / g.weight(f + 1) * v);
            }
        }
        let mut du: Vec<f64> = res.iter().map(|v| -v).collect();
        jac.solve(&mut du)?;
        let mut step_max: f64 = 0.0;
        let mut u_max: f64 = 0.0;
        for (ui, di) in u.iter_mut().zip(&du) {
            *ui += di;
            step_max = step_max.max(di.abs());
            u_max = u_max.max(ui.abs());
        }
        if !step_max.is_finite() {
            return Err(Error::Convergence(format!("Newton diverged at t = {:e}", field.t)));
        }
        if step_max <= newton.tol * u_max {
            if let Some(e) = nan_report(&u, field.t, dt) {
                return Err(e);
            }
            field.u = u;
            field.t += dt;
            clip(field);
            return Ok(it);
        }
    }
    Err(Error::Convergence(format!(
        "Newton did not converge in {} iterations at t = {:e}, dt = {dt:e}",
        newton.max_iter, field.t
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    #[default]
    Implicit,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolveConfig {
    pub t_end: f64,
    pub scheme: Scheme,
    pub mobility: Mobility,
    /// First implicit step; defaults to `10⁻⁴ t` (or `10⁻⁸` at `t = 0`).
    pub dt_init: Option<f64>,
    /// Growth factor after a quickly converged implicit step.
    pub dt_growth: f64,
    /// Implicit steps never exceed this fraction of the current time.
    pub dt_max_frac: f64,
    /// Steps converging in fewer Newton iterations than this allow growth.
    pub fast_iters: usize,
    pub newton: NewtonConfig,
    /// Explicit safety factor for [`suggest_dt`].
    pub c_safe: f64,
    pub max_steps: usize,
    /// Times at which to keep copies of `u`; hit exactly.
    pub snapshot_times: Vec<f64>,
    /// Nodes with `u` above this count as wet when tracking the front.
    pub front_threshold: f64,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        Self {
            t_end: 1.0,
            scheme: Scheme::Implicit,
            mobility: Mobility::Upwind,
            dt_init: None,
            dt_growth: 1.2,
            dt_max_frac: 0.05,
            fast_iters: 6,
            newton: NewtonConfig::default(),
            c_safe: DEFAULT_C_SAFE,
            max_steps: 10_000_000,
            snapshot_times: Vec::new(),
            front_threshold: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontSample {
    pub t: f64,
    pub left: f64,
    pub right: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolveReport {
    pub steps: usize,
    pub rejected: usize,
    pub initial_mass: f64,
    pub fronts: Vec<FrontSample>,
    pub snapshots: Vec<(f64, Vec<f64>)>,
}

impl EvolveReport {
    /// `|mass - ledger - m₀| / m₀` for the final field.
    pub fn mass_drift(&self, field: &Field1D) -> f64 {
        ((field.mass - field.clip_ledger - self.initial_mass) / self.initial_mass).abs()
    }

    /// Least-squares slope of `ln(half-width)` against `ln t` over `[t_from, t_to]`.
    pub fn front_exponent(&self, t_from: f64, t_to: f64) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .fronts
            .iter()
            .filter(|s| s.t >= t_from && s.t <= t_to && s.right > s.left)
            .map(|s| (s.t.ln(), (0.5 * (s.right - s.left)).ln()))
            .collect();
        if pts.len() < 3 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        (sxx > 0.0).then(|| sxy / sxx)
    }
}

fn record_front(field: &Field1D, thr: f64, fronts: &mut Vec<FrontSample>) {
    if let Some((left, right)) = field.support(thr) {
        fronts.push(FrontSample { t: field.t, left, right });
    }
}

/// Advances `field` to `cfg.t_end`. On error the field holds the last
/// accepted state, so callers can dump it.
pub fn evolve(field: &mut Field1D, r: &Rheology, cfg: &EvolveConfig) -> Result<EvolveReport> {
    if !(cfg.t_end > field.t) {
        return Err(Error::Domain(format!("t_end = {} is not after t = {}", cfg.t_end, field.t)));
    }
    let mut report = EvolveReport {
        steps: 0,
        rejected: 0,
        initial_mass: field.mass,
        fronts: Vec::new(),
        snapshots: Vec::new(),
    };
    record_front(field, cfg.front_threshold, &mut report.fronts);
    let mut stops: Vec<f64> = cfg.snapshot_times.iter().copied().filter(|&s| s > field.t && s <= cfg.t_end).collect();
    stops.sort_by(f64::total_cmp);
    stops.dedup();
    if stops.last() != Some(&cfg.t_end) {
        stops.push(cfg.t_end);
    }
    let snap_set: Vec<f64> = cfg.snapshot_times.clone();
    let mut dt = cfg.dt_init.unwrap_or(if field.t > 0.0 { 1e-4 * field.t } else { 1e-8 });
    let dt_floor = 1e-14 * cfg.t_end;

    for stop in stops {
        while field.t < stop {
            if report.steps >= cfg.max_steps {
                return Err(Error::Convergence(format!(
                    "step budget {} exhausted at t = {:e}",
                    cfg.max_steps, field.t
                )));
            }
            let remaining = stop - field.t;
            match cfg.scheme {
                Scheme::Explicit => {
                    let mut h = suggest_dt(field, r, cfg.mobility, cfg.c_safe, remaining);
                    if remaining - h < 1e-12 * stop {
                        h = remaining;
                    }
                    let target = field.t + h;
                    step(field, r, h, cfg.mobility)?;
                    if h == remaining {
                        field.t = stop;
                    } else {
                        field.t = target;
                    }
                }
                Scheme::Implicit => {
                    let cap = if field.t > 0.0 { cfg.dt_max_frac * field.t } else { f64::INFINITY };
                    let mut h = dt.min(cap.max(dt_floor));
                    let last = h >= remaining * (1.0 - 1e-12);
                    if last {
                        h = remaining;
                    }
                    match implicit_step(field, r, h, cfg.mobility, &cfg.newton) {
                        Ok(iters) => {
                            if last {
                                field.t = stop;
                            }
                            if iters < cfg.fast_iters {
                                dt = (h.max(dt) * cfg.dt_growth).min(if field.t > 0.0 {
                                    cfg.dt_max_frac * field.t
                                } else {
                                    f64::INFINITY
                                });
                            }
                        }
                        Err(Error::Convergence(_)) | Err(Error::Singular(_)) => {
                            report.rejected += 1;
                            dt = h / 3.0;
                            if dt < dt_floor {
                                return Err(Error::Convergence(format!(
                                    "time step collapsed below {dt_floor:e} at t = {:e}",
                                    field.t
                                )));
                            }
                            continue;
                        }
                        Err(e) => return Err(e),
                    }
                }
            }
            report.steps += 1;
            record_front(field, cfg.front_threshold, &mut report.fronts);
        }
        if snap_set.contains(&stop) {
            report.snapshots.push((field.t, field.u.clone()));
        }
    }
    Ok(report)
}

/// Distance between a rescaled field and a similarity profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityReport {
    pub t: f64,
    /// `max |v(η) - U(η)|` over the nodes, `v = t^β u(η t^β)/A`.
    pub linf: f64,
    /// `∫ |v - U| dη` by the trapezoid rule.
    pub l1: f64,
    /// Right front of the field divided by `t^β`; `NaN` when undetected.
    pub front_ratio: f64,
    pub profile_front: f64,
    pub front_detected: bool,
}

/// Rescales `field` by the similarity variables at its current time and
/// compares it with `profile`. The drop is assumed centred at `x = 0`.
pub fn rescale_compare(field: &Field1D, r: &Rheology, profile: &PhysicalProfile) -> Result<SimilarityReport> {
    if !(field.t > 0.0) {
        return Err(Error::Domain("similarity comparison needs t > 0".into()));
    }
    let beta = r.beta_planar();
    let width = field.t.powf(beta);
    let amp = profile.amplitude;
    let g = field.grid;
    let mut linf: f64 = 0.0;
    let mut l1 = 0.0;
    for (i, &u) in field.u.iter().enumerate() {
        let x = g.x(i);
        let v = width * u / amp;
        let e = (v - profile.eval(x / width)).abs();
        linf = linf.max(e);
        l1 += g.weight(i) / width * e;
    }
    let detected = !field.fills_domain() && field.support(0.0).is_some();
    let front_ratio = match field.support(0.0) {
        Some((_, right)) if detected => right / width,
        _ => f64::NAN,
    };
    Ok(SimilarityReport {
        t: field.t,
        linf,
        l1,
        front_ratio,
        profile_front: profile.eta_front,
        front_detected: detected,
    })
}
