//! Truth tables of the Gödel and Łukasiewicz connectives on a small chain.
//!
//! cargo run --example algebra_tables -- 4

use typik::{Algebra, TruthDegree};

fn table(title: &str, n: u32, op: impl Fn(u32, u32) -> u32) {
    println!("{title}");
    print!("{:>6}", "");
    for b in 0..=n {
        print!("{:>6}", TruthDegree::new(b, n).unwrap().to_string());
    }
    println!();
    for a in 0..=n {
        print!("{:>6}", TruthDegree::new(a, n).unwrap().to_string());
        for b in 0..=n {
            print!("{:>6}", TruthDegree::new(op(a, b), n).unwrap().to_string());
        }
        println!();
    }
    println!();
}

fn main() {
    let n: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    for alg in [Algebra::Goedel, Algebra::Lukasiewicz] {
        println!("== {alg}, n = {n} ==\n");
        table("a ⊗ b", n, |a, b| alg.t_norm(a, b, n));
        table("a ⊕ b", n, |a, b| alg.s_norm(a, b, n));
        table("a ▷ b", n, |a, b| alg.implication(a, b, n));
        let negs: Vec<String> = (0..=n)
            .map(|a| TruthDegree::new(alg.negation(a, n), n).unwrap().to_string())
            .collect();
        println!("⊖a for a = 0..n: {}\n", negs.join(" "));
    }
}
