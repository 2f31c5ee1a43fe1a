//! Writes the two-zone regional system as a CSV dataset:
//! `cargo run -p gridcap --example write_toy -- data/toy`

use std::path::PathBuf;

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data/toy".into()));
    let ds = gridcap::fixtures::regional_dataset();
    if let Err(e) = gridcap::data::write_system_inputs(&ds, &dir) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
    println!("wrote {}", dir.display());
}
