//! Axisymmetric drops: the same shooting problem with the radial operator.

use thinfilm::shooting::{analytic_bounds_in, continue_to_zero_delta, default_schedule, to_physical, SolveConfig};
use thinfilm::{Geometry, Rheology};

fn main() -> thinfilm::Result<()> {
    let r = Rheology::new(2.0)?;
    let b = analytic_bounds_in(Geometry::Radial, &r)?;
    println!("no interface above gamma = {:.6}; gamma0 below {:.6}", b.lemma1_threshold, b.g_max);
    for theta in [0.0, 0.5, 1.0] {
        let res = continue_to_zero_delta(Geometry::Radial, &r, theta, &default_schedule(), &SolveConfig::default())?;
        let p = to_physical(&res, &r, Geometry::Radial)?;
        println!(
            "theta = {theta}: gamma = {:.8}, y = {:.8}, slope = {:.8}, mass = {:.6}, radius ~ t^{:.6}",
            res.gamma_theta, res.y_theta, res.slope, p.physical_mass(), p.beta
        );
    }
    Ok(())
}
