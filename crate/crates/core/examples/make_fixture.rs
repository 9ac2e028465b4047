//! Regenerates the bundled synthetic fixture.
//!
//! Usage: `cargo run -p segpsnr-core --example make_fixture [DIR] [COUNT] [SEED]`

use std::path::PathBuf;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let dir = args.next().map_or_else(
        || PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/synthetic20"),
        PathBuf::from,
    );
    let count = args.next().map_or(Ok(20), |s| s.parse())?;
    let seed = args.next().map_or(Ok(20), |s| s.parse())?;
    segpsnr::synthetic::write_dataset(&dir, count, seed)?;
    println!("wrote {count} pairs to {}", dir.display());
    Ok(())
}
