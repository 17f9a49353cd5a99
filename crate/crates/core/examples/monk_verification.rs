//! Verifies properties of a small network trained for the MONK-1 style
//! target `(i1 ∧ i4) ∨ i5`, across several resolutions.
//!
//! cargo run --release --example monk_verification

use std::time::Instant;

use typik::network::{load_network, network_to_kb};
use typik::{entails, Algebra, PhiConfig};

fn main() -> typik::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/monk_synthetic.json");
    let net = load_network(&std::fs::read_to_string(path)?)?;
    let queries = [
        "T(o) -> (i1 & i4) | i5 >= 1",
        "T(o) -> i1 & i4 >= 1",
        "T(h1) -> i1 & i4 >= 1",
        "T(h2) -> i5 >= 1",
    ];
    for n in [1, 3, 5, 9] {
        let kb = network_to_kb(&net, n, Algebra::Goedel, PhiConfig::default(), true)?;
        println!("n = {n}");
        for text in queries {
            let start = Instant::now();
            let v = entails(&kb, &text.parse()?)?;
            let verdict = if v.entailed { "entailed" } else { "not entailed" };
            println!(
                "  {text:<30} {verdict:<13} {:>6.1} ms",
                start.elapsed().as_secs_f64() * 1e3
            );
            if let Some(w) = v.witness {
                println!("    witness {}", w.valuation);
            }
        }
    }
    Ok(())
}
