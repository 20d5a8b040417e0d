mod common;

use common::{crossing, integrate, Geom};
use thinfilm::shooting::{
    analytic_bounds_in, continue_to_zero_delta, default_schedule, schedule, solve_delta_level, to_physical,
    PhysicalProfile, SolveConfig,
};
use thinfilm::{Error, Geometry, Rheology};

fn lam(l: f64) -> Rheology {
    Rheology::new(l).unwrap()
}

fn geom_ref(g: Geometry) -> Geom {
    match g {
        Geometry::Planar => Geom::Planar,
        Geometry::Radial => Geom::Radial,
    }
}

/// Reference γ₀(δ) check: just below it the profile reaches δ, just above it
/// turns at a minimum above δ.
fn confirm_zero_angle_level(g: Geometry, gamma: f64, delta: f64) {
    let below = integrate(geom_ref(g), gamma - 1e-6, 0.5, 1e-5, delta);
    let above = integrate(geom_ref(g), gamma + 1e-6, 0.5, 1e-5, delta);
    assert!(!below.turned, "{g:?}: γ₀ - 1e-6 should reach the floor");
    assert!(above.turned && above.z > delta, "{g:?}: γ₀ + 1e-6 should turn above the floor");
}

#[test]
fn zero_angle_level_fixtures() {
    let r = lam(2.0);
    let cfg = SolveConfig::default();
    for (g, gamma, y) in [(Geometry::Planar, 0.382515661170, 1.581591769866), (Geometry::Radial, 0.134887657966, 2.207775164687)] {
        let s = solve_delta_level(g, &r, 1e-3, 0.0, &cfg).unwrap();
        assert!((s.gamma - gamma).abs() < 1e-9, "{g:?}: {}", s.gamma);
        assert!((s.y - y).abs() < 1e-6, "{g:?}: {}", s.y);
        let b = analytic_bounds_in(g, &r).unwrap();
        assert!(s.gamma > 0.0 && s.gamma <= b.lemma1_threshold);
        confirm_zero_angle_level(g, s.gamma, 1e-3);
    }
}

#[test]
fn finite_angle_level_fixtures() {
    let r = lam(2.0);
    let cfg = SolveConfig::default();
    let delta = 1e-3;
    for (g, gamma, target) in [
        (Geometry::Planar, 0.319932066479, 0.5 * (2.0 * (1.0 - delta) as f64).sqrt()),
        (Geometry::Radial, 0.112582535303, 0.5 * (1.0 - delta as f64).sqrt()),
    ] {
        let s = solve_delta_level(g, &r, delta, 0.5, &cfg).unwrap();
        let g0 = solve_delta_level(g, &r, delta, 0.0, &cfg).unwrap().gamma;
        assert!(s.gamma > 0.0 && s.gamma < g0);
        assert!((s.gamma - gamma).abs() < 1e-9, "{g:?}: {}", s.gamma);
        assert!((s.slope + target).abs() < 1e-8, "{g:?}: {}", s.slope);
        let st = integrate(geom_ref(g), s.gamma, 0.5, 1e-6, delta);
        let (y_ref, slope_ref) = crossing(&st, geom_ref(g), delta);
        assert!((slope_ref + target).abs() < 1e-7, "{g:?}: reference slope {slope_ref}");
        assert!((y_ref - s.y).abs() < 1e-8, "{g:?}: reference crossing {y_ref}");
    }
}

#[test]
fn unit_angle_is_the_parabola() {
    let r = lam(2.0);
    for delta in [1e-2, 1e-6] {
        let s = solve_delta_level(Geometry::Planar, &r, delta, 1.0, &SolveConfig::default()).unwrap();
        assert_eq!(s.gamma, 0.0);
        assert!((s.y - (2.0 * (1.0 - delta)).sqrt()).abs() < 1e-9);
    }
    let res = continue_to_zero_delta(Geometry::Planar, &r, 1.0, &default_schedule(), &SolveConfig::default()).unwrap();
    assert_eq!(res.gamma_theta, 0.0);
    assert!((res.y_theta - 2f64.sqrt()).abs() < 1e-9);
    assert!((res.slope + 2f64.sqrt()).abs() < 1e-9);
    assert!(res.kappa.is_none());
}

#[test]
fn result_does_not_depend_on_the_bracket() {
    let r = lam(2.0);
    let base = SolveConfig::default();
    for theta in [0.0, 0.5] {
        let a = solve_delta_level(Geometry::Planar, &r, 1e-4, theta, &SolveConfig { bracket: Some((0.01, 2.0)), ..base }).unwrap();
        let b = solve_delta_level(Geometry::Planar, &r, 1e-4, theta, &SolveConfig { bracket: Some((0.2, 0.45)), ..base }).unwrap();
        assert!((a.gamma - b.gamma).abs() < 1e-9, "{theta}: {} vs {}", a.gamma, b.gamma);
    }
}

#[test]
fn invalid_requests() {
    let r = lam(2.0);
    let cfg = SolveConfig::default();
    assert!(matches!(solve_delta_level(Geometry::Planar, &r, 0.0, 0.0, &cfg), Err(Error::Domain(_))));
    assert!(matches!(solve_delta_level(Geometry::Planar, &r, 1e-3, 1.5, &cfg), Err(Error::Domain(_))));
    let no_root = SolveConfig { bracket: Some((2.0, 3.0)), ..cfg };
    assert!(matches!(solve_delta_level(Geometry::Planar, &r, 1e-3, 0.5, &no_root), Err(Error::Bracket(_))));
    assert!(continue_to_zero_delta(Geometry::Planar, &r, 0.0, &[1e-3, 1e-2], &cfg).is_err());
}

#[test]
fn newtonian_sequence_keeps_falling() {
    let r = lam(1.0);
    let cfg = SolveConfig::default();
    let g: Vec<f64> = schedule(8)
        .iter()
        .map(|&d| solve_delta_level(Geometry::Planar, &r, d, 0.0, &cfg).unwrap().gamma)
        .collect();
    assert!(g.windows(2).all(|w| w[1] < w[0]), "{g:?}");
}

#[test]
fn continued_zero_angle_fixtures() {
    let r = lam(2.0);
    let cfg = SolveConfig::default();
    for (g, gamma, y) in [(Geometry::Planar, 0.355663074944, 1.558546391431), (Geometry::Radial, 0.124052351165, 2.176930473434)] {
        let res = continue_to_zero_delta(g, &r, 0.0, &default_schedule(), &cfg).unwrap();
        assert!((res.gamma_theta - gamma).abs() < 1e-8, "{g:?}: {}", res.gamma_theta);
        assert!((res.y_theta - y).abs() < 1e-7, "{g:?}: {}", res.y_theta);
        assert!(res.extrapolation_error_estimate < 1e-6);
        let b = analytic_bounds_in(g, &r).unwrap();
        let floor = if g == Geometry::Planar { 2f64.sqrt() } else { 2.0 };
        assert!(res.y_theta > floor && res.y_theta < b.b(res.gamma_theta));
    }
}

fn quadrature(p: &PhysicalProfile, n: usize) -> f64 {
    let h = p.eta_front / n as f64;
    let w = |e: f64| match p.geometry {
        Geometry::Planar => 2.0 * p.eval(e),
        Geometry::Radial => 2.0 * std::f64::consts::PI * e * p.eval(e),
    };
    (0..=n).map(|i| {
        let c = if i == 0 || i == n { 0.5 } else { 1.0 };
        c * w(i as f64 * h)
    }).sum::<f64>()
        * h
}

#[test]
fn masses() {
    let r = lam(2.0);
    let cfg = SolveConfig::default();
    let par = continue_to_zero_delta(Geometry::Planar, &r, 1.0, &schedule(4), &cfg).unwrap();
    let p = to_physical(&par, &r, Geometry::Planar).unwrap();
    assert!((p.eta_front - 2f64.sqrt()).abs() < 1e-9);
    assert!((p.mass - 4.0 * 2f64.sqrt() / 3.0).abs() < 1e-9, "{}", p.mass);
    let rad = continue_to_zero_delta(Geometry::Radial, &r, 1.0, &schedule(4), &cfg).unwrap();
    let p = to_physical(&rad, &r, Geometry::Radial).unwrap();
    assert!((p.eta_front - 2.0).abs() < 1e-9);
    assert!((p.mass - 2.0 * std::f64::consts::PI).abs() < 1e-9, "{}", p.mass);

    for (g, pinned) in [(Geometry::Planar, 1.468578257428), (Geometry::Radial, 2.080290644266)] {
        let res = continue_to_zero_delta(g, &r, 0.0, &default_schedule(), &cfg).unwrap();
        let p = to_physical(&res, &r, g).unwrap();
        let (m1, m2) = (quadrature(&p, 20_000), quadrature(&p, 40_000));
        // trapezoid on a profile ending like s^{6/5}: error ~ h^{11/5}
        let rich = m2 + (m2 - m1) / (2f64.powf(2.2) - 1.0);
        assert!((p.mass - rich).abs() < 1e-7, "{g:?}: {} vs {rich}", p.mass);
        assert!((p.mass - pinned).abs() < 1e-8, "{g:?}: {}", p.mass);
    }
}

#[test]
fn finite_angles_order_between_zero_and_parabola() {
    let r = lam(2.0);
    let cfg = SolveConfig::default();
    for g in [Geometry::Planar, Geometry::Radial] {
        let mut last_gamma = f64::INFINITY;
        for theta in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let res = continue_to_zero_delta(g, &r, theta, &schedule(10), &cfg).unwrap();
            assert!(res.gamma_theta < last_gamma, "{g:?} {theta}");
            last_gamma = res.gamma_theta;
        }
        assert_eq!(last_gamma, 0.0);
    }
}
