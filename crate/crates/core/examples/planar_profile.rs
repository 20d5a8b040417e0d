//! Integrates the rescaled planar profile for a few shooting parameters and
//! reports how each one ends.

use thinfilm::profile::integrate_to_event;
use thinfilm::{Geometry, Rheology, ShotConfig};

fn main() -> thinfilm::Result<()> {
    let r = Rheology::new(2.0)?;
    let cfg = ShotConfig::with_delta(1e-6);
    for gamma in [-1.0, 0.0, 0.3, 0.3557, 0.4, 7.0] {
        let o = integrate_to_event(Geometry::Planar, gamma, &r, &cfg)?;
        println!("gamma = {gamma:>7}: {:?}", o.kind);
    }
    Ok(())
}
