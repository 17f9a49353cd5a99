//! Writes the ASP encoding of an entailment problem and the matching asprin
//! preference program. Solve with `asprin program.lp preference.lp 0`.
//!
//! cargo run --example asp_export -- out/

use std::path::PathBuf;

use typik::asp::{emit_preference, emit_program};
use typik::parse_kb;

fn main() -> typik::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    std::fs::create_dir_all(&dir)?;
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/students.json");
    let kb = parse_kb(&std::fs::read_to_string(path)?)?;
    let program = emit_program(&kb, &"T(Student & Employee) -> !Pays_Taxes >= 0.3".parse()?)?;

    for section in &program.sections {
        println!("{:<34} {:>3} rules", section.title, section.lines.len());
    }
    std::fs::write(dir.join("program.lp"), program.text())?;
    std::fs::write(dir.join("preference.lp"), emit_preference())?;
    println!(
        "wrote {} and {}",
        dir.join("program.lp").display(),
        dir.join("preference.lp").display()
    );
    Ok(())
}
