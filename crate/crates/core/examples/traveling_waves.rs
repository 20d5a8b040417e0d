//! Phase plane of traveling fronts: the saddle, its four separatrices and a
//! few classified trajectories.

use thinfilm::traveling_wave::{
    classify_trajectory, equilibrium_analysis, explicit_front, integrate_separatrix, Caps, Separatrix, TWState,
};
use thinfilm::Rheology;

fn main() -> thinfilm::Result<()> {
    let r = Rheology::new(2.0)?;
    let eq = equilibrium_analysis(&r)?;
    println!("P = ({:.6}, {:.6}), det J = {:.6}, eigenvalues {:?}", eq.y_p, eq.z_p, eq.det(), eq.eigenvalues);
    let f = explicit_front(&r)?;
    println!("front through P: f = {:.6} xi^{:.6}", f.c, f.p);

    for which in Separatrix::ALL {
        let o = integrate_separatrix(which, &r, 1e4, 1e-12)?;
        let tail = match which {
            Separatrix::Gamma1 | Separatrix::Gamma4 => format!("z*y -> {:.5}", o.tail_product()),
            _ => format!("z/y^2 -> {:.5}", o.tail_ratio()),
        };
        println!("{which:?}: {} samples, {tail}", o.samples.len());
    }

    let caps = Caps::default();
    for (y, z) in [(-1.0, 0.5), (3.0, 0.2), (1.0, 2.0), (3.0, 3.0)] {
        let c = classify_trajectory(TWState::new(1.0, y, z), &r, &caps)?;
        println!("seed ({y}, {z}): {} {:?}", c.label.name(), c.front_behavior());
    }
    Ok(())
}
