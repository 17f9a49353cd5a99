//! Satisfiability of a KB with assertions, followed by its first few
//! coherent valuations with weight sums.
//!
//! cargo run --example models

use typik::entailment::Satisfiability;
use typik::{check_satisfiable, list_models, parse_kb};

fn main() -> typik::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/students.json");
    let kb = parse_kb(&std::fs::read_to_string(path)?)?;

    match check_satisfiable(&kb)? {
        Satisfiability::Satisfiable { sample } => {
            println!("satisfiable");
            for (individual, v) in sample {
                println!("  {individual}: {v}");
            }
        }
        Satisfiability::Unsatisfiable { reason } => println!("unsatisfiable: {reason:?}"),
    }

    println!();
    for model in list_models(&kb, 8)? {
        print!("{}", model.valuation);
        for a in &model.annotations {
            print!("  {}: W={} φₙ={}", a.concept, a.weight_sum, a.phi_n);
        }
        println!();
    }
    Ok(())
}
