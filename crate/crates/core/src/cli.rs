//! Batch front end: run configurations, output files and manifests.
//!
//! Every command reads a flat `key = value` config (TOML), applies flag
//! overrides, writes its data into an output directory and finishes with
//! `manifest.toml`, which `thinfilm replay` turns back into the same run.
//!
//! Curves are whitespace-separated columns under one header line; results are
//! `key=value` records, one per line. Floats are always printed as `{:.16e}`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::Rheology;
use crate::pde::{self, DropShape, EvolveConfig, Grid, Mobility, Scheme};
use crate::profile::{integrate_to_event, Geometry, OutcomeKind, ShotConfig};
use crate::shooting::{self, ShootingResult, SolveConfig};
use crate::traveling_wave::{self as tw, Caps, Separatrix, TWState};

/// Output directory variable, used when `--out` is absent.
pub const OUT_ENV: &str = "THINFILM_OUT";
pub const DEFAULT_OUT: &str = "thinfilm_out";
pub const MANIFEST: &str = "manifest.toml";

/// Process exit status for an error: 2 nonconvergence, 3 invalid
/// configuration, 4 numerical or internal failure.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Convergence(_) | Error::Bracket(_) | Error::Classification(_) => 2,
        Error::Config(_) | Error::Domain(_) | Error::UnsupportedRegime(_) => 3,
        Error::Singular(_) | Error::Stability { .. } | Error::NonFinite(_) | Error::Io(_) => 4,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileConfig {
    pub lambda: f64,
    pub gamma: f64,
    pub geometry: Geometry,
    pub delta: f64,
    pub tol: f64,
    pub x0: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_max: Option<f64>,
    pub max_step: f64,
    pub continue_past_minimum: bool,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        let s = ShotConfig::default();
        Self {
            lambda: 2.0,
            gamma: 0.0,
            geometry: Geometry::Planar,
            delta: s.delta,
            tol: s.tol,
            x0: s.x0,
            x_max: None,
            max_step: 1e-2,
            continue_past_minimum: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShootRunConfig {
    pub lambda: f64,
    pub geometry: Geometry,
    pub thetas: Vec<f64>,
    /// Decreasing working floors.
    pub schedule: Vec<f64>,
    pub gamma_tol: f64,
    pub shot_tol: f64,
    /// Sampling step of the written profiles, rescaled variable.
    pub profile_step: f64,
    /// Worker threads; 0 picks the machine's parallelism.
    pub threads: usize,
}

impl Default for ShootRunConfig {
    fn default() -> Self {
        let s = SolveConfig::default();
        Self {
            lambda: 2.0,
            geometry: Geometry::Planar,
            thetas: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            schedule: shooting::default_schedule(),
            gamma_tol: s.gamma_tol,
            shot_tol: s.shot_tol,
            profile_step: 1e-3,
            threads: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TwRunConfig {
    pub lambda: f64,
    pub y_cap: f64,
    pub tol: f64,
    pub xi1_span: f64,
    /// Seed grid `[min, max]` in `y` and `z`, with `seed_n = [ny, nz]` points.
    pub seed_y: [f64; 2],
    pub seed_z: [f64; 2],
    pub seed_n: [usize; 2],
    /// `x` range covered by the equilibrium front file.
    pub front_x: [f64; 2],
    pub threads: usize,
}

impl Default for TwRunConfig {
    fn default() -> Self {
        let c = Caps::default();
        Self {
            lambda: 2.0,
            y_cap: c.y_cap,
            tol: c.tol,
            xi1_span: c.xi1_span,
            seed_y: [-3.0, 5.0],
            seed_z: [-2.0, 4.0],
            seed_n: [9, 7],
            front_x: [1e-4, 1e3],
            threads: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    Rectangle,
    Parabola,
    Snapshot,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveRunConfig {
    pub lambda: f64,
    pub shape: ShapeKind,
    pub support: [f64; 2],
    pub x_min: f64,
    pub x_max: f64,
    pub nodes: usize,
    /// Drop mass; defaults to the mass of the zero-angle similarity solution.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    /// Start time; defaults to the time at which the similarity support
    /// matches the initial support.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    /// `t_end = t_end_factor · t0`.
    pub t_end_factor: f64,
    pub scheme: Scheme,
    pub mobility: Mobility,
    pub c_safe: f64,
    /// Log-spaced snapshots written between `t0` and `t_end`.
    pub snapshots: usize,
    /// Compare the final field with the zero-angle similarity profile.
    pub compare: bool,
    pub front_threshold: f64,
    pub max_steps: usize,
}

impl Default for EvolveRunConfig {
    fn default() -> Self {
        let e = EvolveConfig::default();
        Self {
            lambda: 2.0,
            shape: ShapeKind::Rectangle,
            support: [-0.5, 0.5],
            x_min: -2.5,
            x_max: 2.5,
            nodes: 801,
            mass: None,
            t0: None,
            t_end_factor: 1e7,
            scheme: Scheme::Implicit,
            mobility: Mobility::Upwind,
            c_safe: e.c_safe,
            snapshots: 5,
            compare: true,
            front_threshold: e.front_threshold,
            max_steps: e.max_steps,
        }
    }
}

/// A fully resolved run.
#[derive(Debug, Clone, PartialEq)]
pub enum RunConfig {
    Profile(ProfileConfig),
    Shoot(ShootRunConfig),
    Tw(TwRunConfig),
    Evolve(EvolveRunConfig),
}

impl RunConfig {
    pub fn command(&self) -> &'static str {
        match self {
            Self::Profile(_) => "profile",
            Self::Shoot(_) => "shoot",
            Self::Tw(_) => "tw",
            Self::Evolve(_) => "evolve",
        }
    }

    fn to_table(&self) -> Result<toml::Table> {
        let v = match self {
            Self::Profile(c) => toml::Table::try_from(c),
            Self::Shoot(c) => toml::Table::try_from(c),
            Self::Tw(c) => toml::Table::try_from(c),
            Self::Evolve(c) => toml::Table::try_from(c),
        };
        v.map_err(|e| Error::Config(e.to_string()))
    }

    /// Builds a config for `command` from a parsed table.
    pub fn from_table(command: &str, table: toml::Table) -> Result<Self> {
        fn parse<T: DeserializeOwned>(t: toml::Table) -> Result<T> {
            t.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))
        }
        Ok(match command {
            "profile" => Self::Profile(parse(table)?),
            "shoot" => Self::Shoot(parse(table)?),
            "tw" => Self::Tw(parse(table)?),
            "evolve" => Self::Evolve(parse(table)?),
            other => return Err(Error::Config(format!("unknown command `{other}`"))),
        })
    }
}

/// Written next to the outputs of every run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub command: String,
    pub files: Vec<String>,
    pub config: toml::Table,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn run_config(&self) -> Result<RunConfig> {
        RunConfig::from_table(&self.command, self.config.clone())
    }
}

/// Formats a float the way every output file does.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Whitespace-separated columns under a single header line.
pub fn columns(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut s = header.join(" ");
    s.push('\n');
    for row in rows {
        let line: Vec<String> = row.into_iter().map(fmt_f64).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

/// One `key=value` line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(Vec<(String, String)>);

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(mut self, key: &str, v: f64) -> Self {
        self.0.push((key.into(), fmt_f64(v)));
        self
    }

    pub fn int(mut self, key: &str, v: usize) -> Self {
        self.0.push((key.into(), v.to_string()));
        self
    }

    pub fn text(mut self, key: &str, v: &str) -> Self {
        self.0.push((key.into(), v.replace(char::is_whitespace, "_")));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn parse(line: &str) -> Self {
        Self(
            line.split_whitespace()
                .filter_map(|kv| kv.split_once('='))
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        )
    }
}

impl std::fmt::Display for Record {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(" "))
    }
}

fn records(rs: &[Record]) -> String {
    rs.iter().fold(String::new(), |mut s, r| {
        let _ = writeln!(s, "{r}");
        s
    })
}

/// Collects output files in memory and writes them in one go.
#[derive(Debug, Default)]
struct Outputs {
    files: Vec<(String, String)>,
}

impl Outputs {
    fn add(&mut self, name: impl Into<String>, body: String) {
        self.files.push((name.into(), body));
    }

    fn write(self, dir: &Path, cfg: &RunConfig) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for (name, body) in &self.files {
            let p = dir.join(name);
            fs::write(&p, body)?;
            written.push(p);
        }
        let manifest = Manifest {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: cfg.command().to_string(),
            files: self.files.iter().map(|(n, _)| n.clone()).collect(),
            config: cfg.to_table()?,
        };
        let text = toml::to_string(&manifest).map_err(|e| Error::Config(e.to_string()))?;
        let p = dir.join(MANIFEST);
        fs::write(&p, text)?;
        written.push(p);
        Ok(written)
    }
}

fn workers(requested: usize) -> usize {
    if requested > 0 {
        requested
    } else {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    }
}

/// Maps `f` over `items` on up to `threads` scoped workers, keeping order.
pub fn par_map<T: Sync, R: Send>(items: &[T], threads: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let threads = threads.clamp(1, items.len().max(1));
    if threads == 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<R>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

/// Executes `cfg` and writes its files (plus the manifest) into `out`.
pub fn run(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Outputs::default();
    let res = match cfg {
        RunConfig::Profile(c) => cmd_profile(c, &mut files),
        RunConfig::Shoot(c) => cmd_shoot(c, &mut files),
        RunConfig::Tw(c) => cmd_tw(c, &mut files),
        RunConfig::Evolve(c) => cmd_evolve(c, &mut files),
    };
    match res {
        Ok(()) => files.write(out, cfg),
        Err(e) => {
            // keep whatever diagnostics were produced, e.g. an aborted PDE state
            if !files.files.is_empty() {
                let _ = files.write(out, cfg);
            }
            Err(e)
        }
    }
}

/// Re-executes a manifest into `out`.
pub fn replay(manifest: &Path, out: &Path) -> Result<Vec<PathBuf>> {
    let m = Manifest::load(manifest)?;
    run(&m.run_config()?, out)
}

fn outcome_record(kind: &OutcomeKind) -> Record {
    let r = Record::new().text("outcome", kind.name());
    match *kind {
        OutcomeKind::InterfaceHit { y, slope } => r.num("y", y).num("slope", slope),
        OutcomeKind::MinimumTurn { x_min, z_min } => r.num("x_min", x_min).num("z_min", z_min),
        OutcomeKind::BoundExceeded { x_stop } => r.num("x_stop", x_stop),
        OutcomeKind::SingularStall { x_stop, z_stop } => r.num("x_stop", x_stop).num("z_stop", z_stop),
    }
}

fn cmd_profile(c: &ProfileConfig, out: &mut Outputs) -> Result<()> {
    let r = Rheology::new(c.lambda)?;
    let shot = ShotConfig {
        delta: c.delta,
        x_max: c.x_max,
        tol: c.tol,
        x0: c.x0,
        trace: true,
        max_step: Some(c.max_step),
        continue_past_minimum: c.continue_past_minimum,
    };
    let o = integrate_to_event(c.geometry, c.gamma, &r, &shot)?;
    let trace = o.trace.unwrap_or_default();
    out.add(
        "profile_trace.dat",
        columns(
            &["x", "z", "dz", "d2z", "curv"],
            trace.iter().map(|s| vec![s.x, s.z, s.dz, s.second_derivative(c.geometry), s.curv]),
        ),
    );
    let rec = Record::new()
        .num("lambda", c.lambda)
        .text("geometry", &c.geometry.to_string())
        .num("gamma", c.gamma)
        .num("delta", c.delta);
    let mut rec = Record(rec.0.into_iter().chain(outcome_record(&o.kind).0).collect());
    rec = rec.int("samples", trace.len());
    out.add("profile_outcome.rec", records(&[rec]));
    Ok(())
}

fn shooting_record(res: &ShootingResult) -> Record {
    let rec = Record::new()
        .num("lambda", res.lambda)
        .text("geometry", &res.geometry.to_string())
        .num("theta", res.theta)
        .num("gamma", res.gamma_theta)
        .num("y", res.y_theta)
        .num("slope", res.slope);
    let rec = match res.kappa {
        Some(k) => rec.num("kappa", k),
        None => rec.text("kappa", "free"),
    };
    let rec = rec.num("extrapolation_error", res.extrapolation_error_estimate);
    match res.gamma_order {
        Some(q) => rec.num("order", q),
        None => rec.text("order", "converged"),
    }
}

fn cmd_shoot(c: &ShootRunConfig, out: &mut Outputs) -> Result<()> {
    let r = Rheology::new(c.lambda)?;
    if c.thetas.is_empty() {
        return Err(Error::Config("no theta values given".into()));
    }
    let solve = SolveConfig { gamma_tol: c.gamma_tol, shot_tol: c.shot_tol, ..SolveConfig::default() };
    let results = par_map(&c.thetas, workers(c.threads), |&theta| {
        let res = shooting::continue_to_zero_delta(c.geometry, &r, theta, &c.schedule, &solve)?;
        let prof = shooting::to_physical_with(&res, &r, c.geometry, c.profile_step)?;
        Ok((res, prof))
    });
    let results: Vec<(ShootingResult, shooting::PhysicalProfile)> = results.into_iter().collect::<Result<_>>()?;

    let mut recs = Vec::new();
    let mut levels = Vec::new();
    for (idx, (res, prof)) in results.iter().enumerate() {
        recs.push(
            shooting_record(res)
                .num("eta_front", prof.eta_front)
                .num("mass", prof.mass)
                .num("physical_mass", prof.physical_mass())
                .num("beta", prof.beta)
                .num("height_exponent", prof.height_exponent),
        );
        for l in &res.levels {
            levels.push(vec![res.theta, l.delta, l.gamma, l.y, l.slope, l.iterations as f64]);
        }
        out.add(
            format!("shoot_profile_{idx}.dat"),
            columns(&["eta", "U", "dU"], prof.samples.iter().map(|&(e, u, d)| vec![e, u, d])),
        );
    }
    out.add("shoot_results.rec", records(&recs));
    out.add("shoot_levels.dat", columns(&["theta", "delta", "gamma", "y", "slope", "iterations"], levels));
    Ok(())
}

fn cmd_tw(c: &TwRunConfig, out: &mut Outputs) -> Result<()> {
    let r = Rheology::new(c.lambda)?;
    let eq = tw::equilibrium_analysis(&r)?;
    let front = tw::explicit_front(&r)?;
    let (alpha, beta) = (r.tw_alpha(), r.tw_beta());
    out.add(
        "tw_equilibrium.rec",
        records(&[Record::new()
            .num("lambda", c.lambda)
            .num("y_p", eq.y_p)
            .num("z_p", eq.z_p)
            .num("residual", eq.residual(&r))
            .num("det", eq.det())
            .num("trace", eq.trace())
            .num("mu_unstable", eq.eigenvalues.0)
            .num("mu_stable", eq.eigenvalues.1)
            .num("c_lambda", front.c)
            .num("p", front.p)
            .num("identity", front.identity())]),
    );

    let caps = Caps { y_cap: c.y_cap, tol: c.tol, xi1_span: c.xi1_span, ..Caps::default() };
    let mut sep_rows = Vec::new();
    let mut tails = Vec::new();
    for (k, which) in Separatrix::ALL.into_iter().enumerate() {
        let orbit = tw::integrate_separatrix(which, &r, c.y_cap, c.tol)?;
        let (name, value, expected) = match which {
            Separatrix::Gamma1 | Separatrix::Gamma4 => ("zy", orbit.tail_product(), 1.0 / (beta - alpha)),
            _ => ("z_over_y2", orbit.tail_ratio(), alpha + beta / 2.0),
        };
        tails.push(
            Record::new()
                .text("branch", &format!("{which:?}").to_lowercase())
                .text("quantity", name)
                .num("value", value)
                .num("expected", expected)
                .num("rel_error", (value / expected - 1.0).abs()),
        );
        sep_rows.extend(orbit.samples.iter().map(|s| vec![(k + 1) as f64, s.xi1, s.x, s.y, s.z]));
        if which == Separatrix::Gamma4 {
            let f = tw::reconstruct_front(&orbit, &r, 0.0)?;
            out.add("tw_gamma4_front.dat", columns(&["xi", "f", "df"], f.iter().map(|p| vec![p.xi, p.f, p.df])));
        }
    }
    out.add("tw_separatrices.dat", columns(&["branch", "xi1", "x", "y", "z"], sep_rows));
    out.add("tw_tails.rec", records(&tails));

    let orbit = tw::equilibrium_orbit(&r, c.front_x[0], c.front_x[1], &caps)?;
    let f = tw::reconstruct_front(&orbit, &r, 0.0)?;
    out.add(
        "tw_equilibrium_front.dat",
        columns(&["xi", "f", "df", "f_exact"], f.iter().map(|p| vec![p.xi, p.f, p.df, front.f(p.xi)])),
    );

    let [ny, nz] = c.seed_n;
    let lin = |lo: f64, hi: f64, n: usize, i: usize| if n <= 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
    let seeds: Vec<(f64, f64)> = (0..ny)
        .flat_map(|i| (0..nz).map(move |j| (i, j)))
        .map(|(i, j)| (lin(c.seed_y[0], c.seed_y[1], ny, i), lin(c.seed_z[0], c.seed_z[1], nz, j)))
        .collect();
    let classes = par_map(&seeds, workers(c.threads), |&(y, z)| tw::classify_trajectory(TWState::new(1.0, y, z), &r, &caps));
    let mut recs = Vec::new();
    for ((y, z), cl) in seeds.iter().zip(classes) {
        let rec = Record::new().num("y", *y).num("z", *z);
        recs.push(match cl {
            Ok(cl) => {
                let beh: Vec<String> = cl.front_behavior().iter().map(|b| format!("{b:?}")).collect();
                let rec = rec.text("label", &cl.label.name()).text("behaviors", &beh.join(","));
                let rec = match cl.backward.k {
                    Some(k) => rec.num("k_backward", k),
                    None => rec.text("k_backward", "none"),
                };
                match cl.forward.k {
                    Some(k) => rec.num("k_forward", k),
                    None => rec.text("k_forward", "none"),
                }
            }
            Err(Error::Classification(_)) => rec.text("label", "unclassified"),
            Err(e) => return Err(e),
        });
    }
    out.add("tw_classification.rec", records(&recs));
    Ok(())
}

/// Zero-angle planar similarity profile used by the PDE comparison.
fn similarity_profile(r: &Rheology) -> Result<shooting::PhysicalProfile> {
    let res = shooting::continue_to_zero_delta(
        Geometry::Planar,
        r,
        0.0,
        &shooting::default_schedule(),
        &SolveConfig::default(),
    )?;
    shooting::to_physical(&res, r, Geometry::Planar)
}

fn cmd_evolve(c: &EvolveRunConfig, out: &mut Outputs) -> Result<()> {
    let r = Rheology::new(c.lambda)?;
    let grid = Grid::new(c.x_min, c.x_max, c.nodes)?;
    let need_profile = c.compare || c.mass.is_none() || c.t0.is_none() || c.shape == ShapeKind::Snapshot;
    let profile = if need_profile { Some(similarity_profile(&r)?) } else { None };
    let beta = r.beta_planar();
    let hw = 0.5 * (c.support[1] - c.support[0]);
    let t0 = match (c.t0, &profile) {
        (Some(t), _) => t,
        (None, Some(p)) => (hw / p.eta_front).powf(1.0 / beta),
        (None, None) => unreachable!(),
    };
    let mass = match (c.mass, &profile) {
        (Some(m), _) => m,
        (None, Some(p)) => p.physical_mass(),
        (None, None) => unreachable!(),
    };
    let shape = match c.shape {
        ShapeKind::Rectangle => DropShape::Rectangle,
        ShapeKind::Parabola => DropShape::Parabola,
        ShapeKind::Snapshot => DropShape::SelfSimilarSnapshot { profile: profile.clone().unwrap(), t0 },
    };
    let mut field = pde::init_drop(&shape, mass, (c.support[0], c.support[1]), &grid)?;
    field.t = t0;
    let t_end = c.t_end_factor * t0;
    let snaps: Vec<f64> = (1..=c.snapshots)
        .map(|k| if k == c.snapshots { t_end } else { t0 * c.t_end_factor.powf(k as f64 / c.snapshots as f64) })
        .collect();
    let cfg = EvolveConfig {
        t_end,
        scheme: c.scheme,
        mobility: c.mobility,
        c_safe: c.c_safe,
        snapshot_times: snaps,
        front_threshold: c.front_threshold,
        max_steps: c.max_steps,
        ..EvolveConfig::default()
    };
    let x = grid.nodes();
    let initial = field.clone();
    let report = match pde::evolve(&mut field, &r, &cfg) {
        Ok(rep) => rep,
        Err(e) => {
            out.add(
                "evolve_abort_state.dat",
                columns(&["x", "u"], x.iter().zip(&field.u).map(|(x, u)| vec![*x, *u])),
            );
            return Err(e);
        }
    };

    let mut snap_rows: Vec<Vec<f64>> = x.iter().zip(&initial.u).map(|(x, u)| vec![initial.t, *x, *u]).collect();
    for (t, u) in &report.snapshots {
        snap_rows.extend(x.iter().zip(u).map(|(x, u)| vec![*t, *x, *u]));
    }
    out.add("evolve_snapshots.dat", columns(&["t", "x", "u"], snap_rows));
    out.add(
        "evolve_fronts.dat",
        columns(&["t", "left", "right"], report.fronts.iter().map(|f| vec![f.t, f.left, f.right])),
    );

    let mut rec = Record::new()
        .num("lambda", c.lambda)
        .num("t0", t0)
        .num("t_end", field.t)
        .int("steps", report.steps)
        .int("rejected", report.rejected)
        .num("initial_mass", report.initial_mass)
        .num("mass", field.mass)
        .num("mass_drift", report.mass_drift(&field))
        .num("clip_ledger", field.clip_ledger)
        .num("clip_ratio", field.clip_ledger / report.initial_mass)
        .num("beta", beta);
    if let Some(q) = report.front_exponent(t_end / 10.0, t_end) {
        rec = rec.num("front_exponent", q);
    }
    if let (true, Some(p)) = (c.compare, &profile) {
        let s = pde::rescale_compare(&field, &r, p)?;
        rec = rec
            .num("linf", s.linf)
            .num("l1", s.l1)
            .num("front_ratio", s.front_ratio)
            .num("profile_front", s.profile_front)
            .text("front_detected", if s.front_detected { "true" } else { "false" });
        let width = field.t.powf(beta);
        out.add(
            "evolve_rescaled.dat",
            columns(
                &["eta", "v", "U"],
                x.iter().zip(&field.u).map(|(x, u)| {
                    let eta = x / width;
                    vec![eta, width * u / p.amplitude, p.eval(eta)]
                }),
            ),
        );
    }
    out.add("evolve_report.rec", records(&[rec]));
    Ok(())
}

#[derive(Debug, Parser)]
#[command(name = "thinfilm", version, about = "Spreading of power-law thin films: similarity profiles, fronts, evolution")]
pub struct Cli {
    /// Output directory.
    #[arg(long, global = true, env = OUT_ENV)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one rescaled profile to its terminal event.
    Profile(ProfileArgs),
    /// Solve for contact angles and extrapolate to a zero floor.
    Shoot(ShootArgs),
    /// Traveling-wave phase plane, separatrices and front classification.
    Tw(TwArgs),
    /// Evolve a drop with the film equation.
    Evolve(EvolveArgs),
    /// Re-run a manifest.
    Replay {
        manifest: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub geometry: Option<Geometry>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub max_step: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ShootArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub geometry: Option<Geometry>,
    /// Comma-separated contact angles in [0, 1].
    #[arg(long, value_delimiter = ',')]
    pub theta: Option<Vec<f64>>,
    /// Use the floors 10^{-2-j/2}, j = 0..=levels.
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub gamma_tol: Option<f64>,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TwArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub y_cap: Option<f64>,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub shape: Option<String>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub t0: Option<f64>,
    #[arg(long)]
    pub t_end_factor: Option<f64>,
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long)]
    pub mobility: Option<String>,
    #[arg(long)]
    pub snapshots: Option<usize>,
}

fn load_table(path: Option<&Path>) -> Result<toml::Table> {
    match path {
        None => Ok(toml::Table::new()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            text.parse::<toml::Table>().map_err(|e| Error::Config(format!("{}: {e}", p.display())))
        }
    }
}

fn set<T: Serialize>(t: &mut toml::Table, key: &str, v: Option<T>) -> Result<()> {
    if let Some(v) = v {
        let v = toml::Value::try_from(v).map_err(|e| Error::Config(format!("{key}: {e}")))?;
        t.insert(key.to_string(), v);
    }
    Ok(())
}

impl Command {
    /// Merges the config file (if any) with the flags.
    pub fn resolve(self) -> Result<RunConfig> {
        match self {
            Command::Profile(a) => {
                let mut t = load_table(a.config.as_deref())?;
                set(&mut t, "lambda", a.lambda)?;
                set(&mut t, "gamma", a.gamma)?;
                set(&mut t, "geometry", a.geometry)?;
                set(&mut t, "delta", a.delta)?;
                set(&mut t, "tol", a.tol)?;
                set(&mut t, "x_max", a.x_max)?;
                set(&mut t, "max_step", a.max_step)?;
                RunConfig::from_table("profile", t)
            }
            Command::Shoot(a) => {
                let mut t = load_table(a.config.as_deref())?;
                set(&mut t, "lambda", a.lambda)?;
                set(&mut t, "geometry", a.geometry)?;
                set(&mut t, "thetas", a.theta)?;
                set(&mut t, "schedule", a.levels.map(shooting::schedule))?;
                set(&mut t, "gamma_tol", a.gamma_tol)?;
                set(&mut t, "threads", a.threads)?;
                RunConfig::from_table("shoot", t)
            }
            Command::Tw(a) => {
                let mut t = load_table(a.config.as_deref())?;
                set(&mut t, "lambda", a.lambda)?;
                set(&mut t, "y_cap", a.y_cap)?;
                set(&mut t, "threads", a.threads)?;
                RunConfig::from_table("tw", t)
            }
            Command::Evolve(a) => {
                let mut t = load_table(a.config.as_deref())?;
                set(&mut t, "lambda", a.lambda)?;
                set(&mut t, "shape", a.shape)?;
                set(&mut t, "nodes", a.nodes)?;
                set(&mut t, "mass", a.mass)?;
                set(&mut t, "t0", a.t0)?;
                set(&mut t, "t_end_factor", a.t_end_factor)?;
                set(&mut t, "scheme", a.scheme)?;
                set(&mut t, "mobility", a.mobility)?;
                set(&mut t, "snapshots", a.snapshots)?;
                RunConfig::from_table("evolve", t)
            }
            Command::Replay { manifest } => Manifest::load(&manifest)?.run_config(),
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let out = cli.out.unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let result = cli.command.resolve().and_then(|cfg| run(&cfg, &out));
    match result {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("thinfilm: {e}");
            exit_code(&e)
        }
    }
}
