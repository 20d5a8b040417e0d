use thinfilm::traveling_wave::{
    classify_trajectory, equilibrium_analysis, equilibrium_orbit, explicit_front, integrate_separatrix, reconstruct_front,
    trace_orbit, Caps, FrontBehavior, Manifold, Separatrix, TWState, TrajectoryLabel,
};
use thinfilm::{Error, Rheology};

fn lam(l: f64) -> Rheology {
    Rheology::new(l).unwrap()
}

#[test]
fn saddle_for_all_shear_thinning_exponents() {
    for l in [1.5, 2.0, 3.0, 5.0, 10.0] {
        let eq = equilibrium_analysis(&lam(l)).unwrap();
        assert!(eq.det() < 0.0, "{l}");
        assert!(eq.residual(&lam(l)) < 1e-13);
        let (mu_u, mu_s) = eq.eigenvalues;
        assert!(mu_u > 0.0 && mu_s < 0.0);
        assert!((mu_u * mu_s - eq.det()).abs() < 1e-12 && (mu_u + mu_s - eq.trace()).abs() < 1e-12);
    }
    let eq = equilibrium_analysis(&lam(2.0)).unwrap();
    assert!((eq.y_p - 9f64.cbrt()).abs() < 1e-14);
    assert!((eq.z_p - 0.72113).abs() < 1e-5);
    assert!(matches!(equilibrium_analysis(&lam(1.0)), Err(Error::UnsupportedRegime(_))));
}

#[test]
fn separatrix_tails() {
    for l in [1.5, 2.0, 5.0] {
        let r = lam(l);
        let (alpha, beta) = (r.tw_alpha(), r.tw_beta());
        for which in Separatrix::ALL {
            let o = integrate_separatrix(which, &r, 1e4, 1e-12).unwrap();
            let (got, want) = match which {
                Separatrix::Gamma1 | Separatrix::Gamma4 => (o.tail_product(), 1.0 / (beta - alpha)),
                _ => (o.tail_ratio(), alpha + beta / 2.0),
            };
            assert!((got / want - 1.0).abs() < 0.02, "λ={l} {which:?}: {got} vs {want}");
        }
    }
}

#[test]
fn equilibrium_point_gives_the_explicit_front() {
    let r = lam(2.0);
    let caps = Caps::default();
    let eq = equilibrium_analysis(&r).unwrap();
    let c = classify_trajectory(TWState::new(1.0, eq.y_p, eq.z_p), &r, &caps).unwrap();
    assert_eq!(c.label, TrajectoryLabel::EquilibriumOrbit);

    let ex = explicit_front(&r).unwrap();
    let orbit = equilibrium_orbit(&r, 1e-3, 1e2, &caps).unwrap();
    for p in reconstruct_front(&orbit, &r, 0.0).unwrap() {
        assert!((p.f / ex.f(p.xi) - 1.0).abs() < 1e-9, "{p:?}");
    }
}

#[test]
fn gamma4_member_is_compactly_supported() {
    let r = lam(2.0);
    let caps = Caps::default();
    let o = integrate_separatrix(Separatrix::Gamma4, &r, 1e4, 1e-12).unwrap();
    // a seed taken from the separatrix itself classifies as Γ₄
    let mid = o.samples[o.samples.len() / 2];
    let c = classify_trajectory(TWState::new(mid.x, mid.y, mid.z), &r, &caps).unwrap();
    assert_eq!(c.label, TrajectoryLabel::Gamma4);
    assert!(c.front_behavior().contains(&FrontBehavior::CompactSupport));

    let ex = explicit_front(&r).unwrap();
    let f = reconstruct_front(&o, &r, 0.0).unwrap();
    // starts on the equilibrium power law
    assert!((f[0].f / ex.f(f[0].xi) - 1.0).abs() < 1e-5);
    // and closes with a finite slope: f ~ K(ξ₀ - ξ)
    let tail = &f[f.len() - 100..];
    let k = tail.last().unwrap().df;
    assert!(k < 0.0);
    assert!(tail.iter().all(|p| (p.df / k - 1.0).abs() < 1e-3));
    assert!(tail.last().unwrap().f < 1e-10 * f.iter().map(|p| p.f).fold(0.0, f64::max));
}

#[test]
fn pi1_member_has_a_linear_front_with_the_tail_constant() {
    let r = lam(2.0);
    let caps = Caps::default();
    let seed = TWState::new(1.0, 3.0, 0.2);
    let c = classify_trajectory(seed, &r, &caps).unwrap();
    assert_eq!(c.label, TrajectoryLabel::Mixed(Manifold::Pi1, Manifold::Pi4));
    let k = c.backward.k.unwrap();
    let o = trace_orbit(seed, &r, c.backward.last.xi1, 0.0, &caps).unwrap();
    let f = reconstruct_front(&o, &r, 0.0).unwrap();
    // least-squares slope through the origin over the first samples
    let near = &f[..50];
    let slope = near.iter().map(|p| p.f * p.xi).sum::<f64>() / near.iter().map(|p| p.xi * p.xi).sum::<f64>();
    assert!((slope / k - 1.0).abs() < 1e-6, "{slope} vs {k}");
}

#[test]
fn generic_seed_below_is_a_dewetting_front() {
    let r = lam(2.0);
    let caps = Caps::default();
    let seed = TWState::new(1.0, -1.0, 0.5);
    let c = classify_trajectory(seed, &r, &caps).unwrap();
    assert_eq!(c.label, TrajectoryLabel::Mixed(Manifold::Pi4, Manifold::Pi2));
    assert!(c.front_behavior().contains(&FrontBehavior::Dewetting));
    let o = trace_orbit(seed, &r, c.backward.last.xi1, c.forward.last.xi1, &caps).unwrap();
    let f = reconstruct_front(&o, &r, 0.0).unwrap();
    assert!(f.iter().all(|p| p.df < 0.0));
}

#[test]
fn seed_grid_classifies() {
    let r = lam(2.0);
    let caps = Caps::default();
    let mut seen = std::collections::HashSet::new();
    for y in [-2.0, 0.0, 1.0, 3.0] {
        for z in [-1.0, 0.2, 3.0] {
            let c = classify_trajectory(TWState::new(1.0, y, z), &r, &caps).unwrap();
            seen.insert(c.label.name());
        }
    }
    assert!(seen.len() >= 3, "{seen:?}");
}

#[test]
fn orbit_window_must_contain_seed() {
    let r = lam(2.0);
    let caps = Caps::default();
    assert!(trace_orbit(TWState::new(1.0, 1.0, 1.0), &r, 1.0, 2.0, &caps).is_err());
    assert!(trace_orbit(TWState::new(-1.0, 1.0, 1.0), &r, -1.0, 1.0, &caps).is_err());
}
