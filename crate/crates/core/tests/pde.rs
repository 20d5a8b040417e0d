use thinfilm::pde::{
    evolve, init_drop, rescale_compare, step, suggest_dt, DropShape, EvolveConfig, Field1D, Grid, Mobility, Scheme,
};
use thinfilm::shooting::{continue_to_zero_delta, default_schedule, to_physical, PhysicalProfile, SolveConfig};
use thinfilm::{Error, Geometry, Rheology};

fn lam(l: f64) -> Rheology {
    Rheology::new(l).unwrap()
}

fn zero_angle_profile(r: &Rheology) -> PhysicalProfile {
    let res = continue_to_zero_delta(Geometry::Planar, r, 0.0, &default_schedule(), &SolveConfig::default()).unwrap();
    to_physical(&res, r, Geometry::Planar).unwrap()
}

#[test]
fn initial_shapes() {
    let g = Grid::new(-2.0, 2.0, 401).unwrap();
    let f = init_drop(&DropShape::Parabola, 4.0 * 2f64.sqrt() / 3.0, (-2f64.sqrt(), 2f64.sqrt()), &g).unwrap();
    for (x, u) in f.x().iter().zip(&f.u) {
        assert!((u - (1.0 - x * x / 2.0).max(0.0)).abs() < 1e-4, "{x}: {u}");
    }
    let f = init_drop(&DropShape::Rectangle, 1.0, (-0.5, 0.5), &g).unwrap();
    assert!(f.u.iter().all(|&u| u == 0.0 || (u - 0.5).abs() < 1e-12 || (u - 1.0).abs() < 1e-12));
    assert_eq!(f.u.iter().filter(|&&u| (u - 0.5).abs() < 1e-12).count(), 2);
    assert!(matches!(init_drop(&DropShape::Rectangle, 1.0, (-3.0, 0.5), &g), Err(Error::Domain(_))));
    assert!(matches!(init_drop(&DropShape::Rectangle, -1.0, (-0.5, 0.5), &g), Err(Error::Domain(_))));
    assert!(Field1D::new(g, vec![f64::NAN; 401], 0.0).is_err());
}

#[test]
fn zero_field_takes_the_cap() {
    let g = Grid::new(-1.0, 1.0, 51).unwrap();
    let f = Field1D::new(g, vec![0.0; 51], 0.0).unwrap();
    assert_eq!(suggest_dt(&f, &lam(2.0), Mobility::Upwind, 0.1, 0.25), 0.25);
}

#[test]
fn amplitude_scaling_of_the_time_step() {
    // diffusivity ~ u^{λ+2} |u_xxx|^{λ-1}, so doubling u divides dt by 2^{2λ+1}
    for l in [1.0, 2.0, 3.0] {
        let r = lam(l);
        let g = Grid::new(-2.0, 2.0, 201).unwrap();
        let f = init_drop(&DropShape::Parabola, 1.0, (-1.0, 1.0), &g).unwrap();
        let mut f2 = f.clone();
        f2.u.iter_mut().for_each(|v| *v *= 2.0);
        let ratio = suggest_dt(&f, &r, Mobility::Upwind, 0.1, 1.0) / suggest_dt(&f2, &r, Mobility::Upwind, 0.1, 1.0);
        assert!((ratio / 2f64.powf(2.0 * l + 1.0) - 1.0).abs() < 1e-9, "λ={l}: {ratio}");
    }
}

#[test]
fn explicit_steps_respect_the_bound() {
    let r = lam(2.0);
    let g = Grid::new(-2.0, 2.0, 101).unwrap();
    let mut f = init_drop(&DropShape::Parabola, 1.0, (-1.0, 1.0), &g).unwrap();
    let dt = suggest_dt(&f, &r, Mobility::Upwind, 0.1, 1.0);
    assert!(matches!(step(&mut f.clone(), &r, 100.0 * dt, Mobility::Upwind), Err(Error::Stability { .. })));
    let m0 = f.mass;
    for _ in 0..200 {
        let dt = suggest_dt(&f, &r, Mobility::Upwind, 0.1, 1.0);
        step(&mut f, &r, dt, Mobility::Upwind).unwrap();
    }
    assert!(((f.mass - m0) / m0).abs() < 1e-13);
    assert!(f.asymmetry() < 1e-13);
}

#[test]
fn snapshot_at_rest_matches_the_profile() {
    let r = lam(2.0);
    let p = zero_angle_profile(&r);
    let g = Grid::new(-2.0, 2.0, 801).unwrap();
    let f = init_drop(&DropShape::SelfSimilarSnapshot { profile: p.clone(), t0: 1.0 }, p.physical_mass(), (-1.0, 1.0), &g)
        .unwrap();
    let s = rescale_compare(&f, &r, &p).unwrap();
    assert!(s.linf < 1e-5, "{}", s.linf);
    assert!(s.front_detected && (s.front_ratio - p.eta_front).abs() < g.h());
}

#[test]
fn snapshot_error_falls_under_refinement() {
    let r = lam(2.0);
    let p = zero_angle_profile(&r);
    let mut last = f64::INFINITY;
    for n in [101, 201, 401] {
        let g = Grid::new(-2.0, 2.0, n).unwrap();
        let shape = DropShape::SelfSimilarSnapshot { profile: p.clone(), t0: 1.0 };
        let mut f = init_drop(&shape, p.physical_mass(), (-1.0, 1.0), &g).unwrap();
        let rep = evolve(&mut f, &r, &EvolveConfig { t_end: 2.0, ..EvolveConfig::default() }).unwrap();
        assert!(rep.mass_drift(&f) < 1e-13);
        let e = rescale_compare(&f, &r, &p).unwrap().linf;
        assert!(e < last, "n={n}: {e} after {last}");
        last = e;
    }
}

#[test]
fn explicit_and_implicit_schemes_agree() {
    let r = lam(2.0);
    let g = Grid::new(-2.0, 2.0, 81).unwrap();
    let f0 = init_drop(&DropShape::Parabola, 1.0, (-1.0, 1.0), &g).unwrap();
    let mut a = f0.clone();
    let mut b = f0.clone();
    evolve(&mut a, &r, &EvolveConfig { t_end: 1e-2, scheme: Scheme::Explicit, ..EvolveConfig::default() }).unwrap();
    let cfg = EvolveConfig { t_end: 1e-2, dt_max_frac: 1e-3, dt_init: Some(1e-7), ..EvolveConfig::default() };
    evolve(&mut b, &r, &cfg).unwrap();
    let diff = a.u.iter().zip(&b.u).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(diff < 5e-3, "{diff}");
}

#[test]
fn snapshots_are_hit_exactly() {
    let r = lam(2.0);
    let g = Grid::new(-2.0, 2.0, 101).unwrap();
    let mut f = init_drop(&DropShape::Parabola, 1.0, (-1.0, 1.0), &g).unwrap();
    let cfg = EvolveConfig { t_end: 1.0, snapshot_times: vec![0.01, 0.1, 0.5], ..EvolveConfig::default() };
    let rep = evolve(&mut f, &r, &cfg).unwrap();
    let times: Vec<f64> = rep.snapshots.iter().map(|s| s.0).collect();
    assert_eq!(times, vec![0.01, 0.1, 0.5]);
    assert_eq!(f.t, 1.0);
}
