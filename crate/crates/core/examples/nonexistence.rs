//! gamma0(delta) as the floor goes to zero: a positive limit for a
//! shear-thinning fluid, a sequence drifting to zero otherwise.

use thinfilm::shooting::{schedule, solve_delta_level, SolveConfig};
use thinfilm::{Geometry, Rheology};

fn main() -> thinfilm::Result<()> {
    let deltas = schedule(12);
    let lambdas = [2.0, 1.0, 0.8];
    print!("{:>10}", "delta");
    for l in lambdas {
        print!(" {:>12}", format!("lambda={l}"));
    }
    println!();
    let rows: Vec<Vec<f64>> = lambdas
        .iter()
        .map(|&l| {
            let r = Rheology::new(l)?;
            deltas
                .iter()
                .map(|&d| Ok(solve_delta_level(Geometry::Planar, &r, d, 0.0, &SolveConfig::default())?.gamma))
                .collect()
        })
        .collect::<thinfilm::Result<_>>()?;
    for (j, d) in deltas.iter().enumerate() {
        print!("{d:>10.1e}");
        for row in &rows {
            print!(" {:>12.6}", row[j]);
        }
        println!();
    }
    Ok(())
}
