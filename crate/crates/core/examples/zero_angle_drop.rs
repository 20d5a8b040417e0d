//! The zero-contact-angle drop: continuation in the floor, extrapolation,
//! and the profile in similarity variables.

use thinfilm::shooting::{continue_to_zero_delta, default_schedule, to_physical, SolveConfig};
use thinfilm::{Geometry, Rheology};

fn main() -> thinfilm::Result<()> {
    let r = Rheology::new(2.0)?;
    let res = continue_to_zero_delta(Geometry::Planar, &r, 0.0, &default_schedule(), &SolveConfig::default())?;
    println!("{:>10} {:>14} {:>14}", "delta", "gamma", "y");
    for l in &res.levels {
        println!("{:>10.1e} {:>14.10} {:>14.10}", l.delta, l.gamma, l.y);
    }
    println!(
        "limit: gamma0 = {:.10}, y0 = {:.10} (error estimate {:.1e}, order {:?})",
        res.gamma_theta, res.y_theta, res.extrapolation_error_estimate, res.gamma_order
    );

    let p = to_physical(&res, &r, Geometry::Planar)?;
    println!("kappa = {:.6}, front at eta = {:.6}, mass = {:.6}", res.kappa.unwrap(), p.eta_front, p.physical_mass());
    println!("width grows like t^{:.6}", p.beta);
    for i in 0..=8 {
        let eta = p.eta_front * i as f64 / 8.0;
        println!("  U({eta:.4}) = {:.6}", p.eval(eta));
    }
    Ok(())
}
