//! Runs a configuration into a directory, then replays its manifest and
//! checks the outputs match byte for byte.

use std::fs;

use thinfilm::cli::{replay, run, Manifest, ProfileConfig, RunConfig, MANIFEST};

fn main() -> thinfilm::Result<()> {
    let base = std::env::temp_dir().join("thinfilm_batch_replay");
    let (first, second) = (base.join("first"), base.join("second"));
    let cfg = RunConfig::Profile(ProfileConfig { gamma: 0.3, ..ProfileConfig::default() });
    for f in run(&cfg, &first)? {
        println!("wrote {}", f.display());
    }
    replay(&first.join(MANIFEST), &second)?;
    let m = Manifest::load(&first.join(MANIFEST))?;
    for f in &m.files {
        let same = fs::read(first.join(f))? == fs::read(second.join(f))?;
        println!("{f}: {}", if same { "identical" } else { "DIFFERENT" });
    }
    Ok(())
}
