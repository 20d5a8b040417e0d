//! One drop per contact angle, from zero angle (theta = 0) up to the
//! parabola (theta = 1).

use thinfilm::shooting::{continue_to_zero_delta, schedule, SolveConfig};
use thinfilm::{Geometry, Rheology};

fn main() -> thinfilm::Result<()> {
    let r = Rheology::new(2.0)?;
    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "theta", "gamma", "y", "slope", "kappa");
    for i in 0..=8 {
        let theta = i as f64 / 8.0;
        let res = continue_to_zero_delta(Geometry::Planar, &r, theta, &schedule(12), &SolveConfig::default())?;
        let kappa = res.kappa.map_or("free".to_string(), |k| format!("{k:.6}"));
        println!(
            "{theta:>6.3} {:>12.8} {:>12.8} {:>12.8} {kappa:>12}",
            res.gamma_theta, res.y_theta, res.slope
        );
    }
    Ok(())
}
