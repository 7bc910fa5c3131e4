//! Regenerates the `scenarios/` deck from the built-in configurations.
//!
//! Run from the workspace root: `cargo run -p minklab --example
//! emit_scenarios`. A test compares the files against the built-ins, so
//! edits to either side must be kept in sync by re-running this.

fn main() {
    let dir = std::path::Path::new("scenarios");
    std::fs::create_dir_all(dir).expect("create scenarios dir");
    for scenario in minklab::scenario::builtin_scenarios() {
        let path = dir.join(format!("{}.json", scenario.name));
        let mut text = serde_json::to_string_pretty(&scenario).expect("serialize");
        text.push('\n');
        std::fs::write(&path, text).expect("write scenario file");
        println!("wrote {}", path.display());
    }
}
