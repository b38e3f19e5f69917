//! Regenerates the scenario bundles under `fixtures/`.

use evirank_core::io::save_scenario;
use reproduction::fixtures;

fn main() -> evirank_core::Result<()> {
    let dir = fixtures::fixtures_dir();
    for s in [fixtures::reference30()?, fixtures::desk4()?, fixtures::desk4_skewed()?] {
        let out = dir.join(s.name());
        save_scenario(&s, &out)?;
        println!("wrote {}", out.display());
    }
    Ok(())
}
