//! Builds a small weighted KB in code and decides typicality queries on it.
//!
//! cargo run --example entailment

use typik::{entails, Algebra, Concept, Relation, TypicalityQuery, WeightedKb};

fn main() -> typik::Result<()> {
    let mut kb = WeightedKb::new(4, Algebra::Goedel, ["Employee", "Student", "Young", "Has_Boss"]);
    kb.precision = 1;
    kb.add_typicality("Employee", Concept::atom("Has_Boss"), "2.5")?;
    kb.add_typicality("Employee", Concept::atom("Young"), "-0.8")?;
    kb.add_typicality("Employee", Concept::Top, "-0.5")?;
    kb.add_inclusion(
        Concept::and(Concept::atom("Student"), Concept::atom("Employee")),
        Concept::atom("Young"),
        Relation::Ge,
        "0.5",
    )?;

    for text in [
        "T(Employee) -> Has_Boss >= 0.75",
        "T(Employee) -> !Young >= 0.5",
        "T(Student) -> Young > 0",
        "T(Employee) -> Young >= 0.5",
    ] {
        let q: TypicalityQuery = text.parse()?;
        let v = entails(&kb, &q)?;
        println!("{q}");
        println!("  entailed: {} ({})", v.entailed, v.mode.name());
        if let Some(d) = v.typical_degree {
            println!("  typical degree: {d}");
        }
        if let Some(w) = &v.witness {
            println!("  witness: {}", w.valuation);
        }
    }
    Ok(())
}
