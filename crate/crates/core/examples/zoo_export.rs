//! Regenerates the bundled corpus files under `zoo/v1`.
//!
//! `cargo run --example zoo_export [out_dir]`

use std::path::PathBuf;

use orbitlab::zoo::build_corpus;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("zoo/v1"));
    std::fs::create_dir_all(&dir)?;
    for (file, instances) in build_corpus() {
        let path = dir.join(format!("{file}.json"));
        std::fs::write(&path, serde_json::to_string_pretty(&instances)? + "\n")?;
        println!("{} entries -> {}", instances.len(), path.display());
    }
    Ok(())
}
