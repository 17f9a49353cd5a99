//! Weights of two birds with respect to `Bird` and `Penguin`, and which of
//! them is the more typical bird.
//!
//! cargo run --example penguin_weights

use num_rational::BigRational;
use typik::algebra::Valuation;
use typik::degree::format_decimal;
use typik::preference::{induced_preference, weight_W, weight_sum, ElementWeight};
use typik::{parse_kb, Concept};

fn main() -> typik::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/penguin.json");
    let kb = parse_kb(&std::fs::read_to_string(path)?)?;
    let sig = kb.signature();

    let reddy = Valuation::from_pairs(
        sig.clone(),
        [
            ("Bird", 5),
            ("Fly", 5),
            ("Has_Wings", 5),
            ("Has_Feather", 5),
            ("Red", 5),
            ("Black", 0),
            ("Penguin", 0),
        ],
    )?;
    let opus = Valuation::from_pairs(
        sig,
        [
            ("Bird", 4),
            ("Fly", 0),
            ("Has_Wings", 5),
            ("Has_Feather", 5),
            ("Red", 0),
            ("Black", 4),
            ("Penguin", 3),
        ],
    )?;

    // one unit of a weight sum is 1/(n·10^k)
    let units = kb.n * 10u32.pow(kb.precision);
    for concept in ["Bird", "Penguin"] {
        for (name, v) in [("reddy", &reddy), ("opus", &opus)] {
            let sum = weight_sum(v, concept, &kb)?;
            let w = match weight_W(v, concept, &kb)? {
                ElementWeight::NegInfinity => "-inf".to_string(),
                ElementWeight::Finite(_) => format_decimal(&BigRational::new(sum, units.into())),
            };
            println!("W_{concept}({name}) = {w}");
        }
    }

    let birds = [reddy, opus];
    let pref = induced_preference(&birds, &Concept::atom("Bird"), kb.algebra)?;
    let names = ["reddy", "opus"];
    for stratum in pref.strata() {
        let members: Vec<_> = stratum.iter().map(|&i| names[i]).collect();
        println!("Bird degree {}: {}", pref.degrees()[stratum[0]], members.join(", "));
    }
    Ok(())
}
