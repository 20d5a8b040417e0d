//! A rectangular drop relaxing onto the zero-angle similarity solution.

use thinfilm::pde::{evolve, init_drop, rescale_compare, DropShape, EvolveConfig, Grid};
use thinfilm::shooting::{continue_to_zero_delta, default_schedule, to_physical, SolveConfig};
use thinfilm::{Geometry, Rheology};

fn main() -> thinfilm::Result<()> {
    let r = Rheology::new(2.0)?;
    let res = continue_to_zero_delta(Geometry::Planar, &r, 0.0, &default_schedule(), &SolveConfig::default())?;
    let profile = to_physical(&res, &r, Geometry::Planar)?;

    let grid = Grid::new(-2.5, 2.5, 801)?;
    let mut field = init_drop(&DropShape::Rectangle, profile.physical_mass(), (-0.5, 0.5), &grid)?;
    let t0 = (0.5 / profile.eta_front).powf(1.0 / profile.beta);
    field.t = t0;

    let mut t = t0;
    for _ in 0..7 {
        t *= 10.0;
        let rep = evolve(&mut field, &r, &EvolveConfig { t_end: t, ..EvolveConfig::default() })?;
        let s = rescale_compare(&field, &r, &profile)?;
        println!(
            "t = {t:.3e}: {:>4} steps, support {:?}, L-inf to similarity {:.4}",
            rep.steps,
            field.support(0.0).unwrap(),
            s.linf
        );
    }
    println!("mass {:.15} (clipped {:.1e})", field.mass, field.clip_ledger);
    Ok(())
}
