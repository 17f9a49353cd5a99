#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use typik::degree::scaled_to_decimal;
use typik::kb::parse_kb;
use typik::network::{load_network, network_to_kb, Network};
use typik::{Algebra, Concept, PhiConfig, Relation, TypicalityQuery, WeightedKb};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
        .join(name)
}

pub fn load_fixture(name: &str) -> WeightedKb {
    parse_kb(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

pub fn monk_network() -> Network {
    load_network(&std::fs::read_to_string(fixture_path("monk_synthetic.json")).unwrap()).unwrap()
}

pub fn monk_kb(n: u32) -> WeightedKb {
    network_to_kb(&monk_network(), n, Algebra::Goedel, PhiConfig::default(), true).unwrap()
}

pub fn query(text: &str) -> TypicalityQuery {
    text.parse().unwrap()
}

/// KB/query pairs whose emitted programs are frozen under `tests/golden`.
pub struct GoldenCase {
    pub name: &'static str,
    pub query: &'static str,
    pub sum_aggregate: bool,
    kb: fn() -> WeightedKb,
}

impl GoldenCase {
    pub fn kb(&self) -> WeightedKb {
        (self.kb)()
    }
}

pub const GOLDEN_CASES: [GoldenCase; 5] = [
    GoldenCase {
        name: "penguin",
        query: "T(Bird) -> Fly >= 0.8",
        sum_aggregate: false,
        kb: || load_fixture("penguin.json"),
    },
    GoldenCase {
        name: "students",
        query: "T(Student & Employee) -> !Pays_Taxes >= 0.3",
        sum_aggregate: false,
        kb: || load_fixture("students.json"),
    },
    GoldenCase {
        name: "strict_only",
        query: "T(A) -> B >= 1",
        sum_aggregate: false,
        kb: || load_fixture("strict_only.json"),
    },
    GoldenCase {
        name: "monk_n3",
        query: "T(o) -> (i1 & i4) | i5 >= 1",
        sum_aggregate: false,
        kb: || monk_kb(3),
    },
    GoldenCase {
        name: "linear_bands",
        query: "T(Comfort) -> Heat < 0.5",
        sum_aggregate: true,
        kb: || load_fixture("linear_bands.json"),
    },
];

pub struct Case {
    pub kb: WeightedKb,
    pub query: TypicalityQuery,
}

const NAMES: [&str; 4] = ["A", "B", "C", "D"];
const ALPHAS: [&str; 8] = ["0", "0.2", "0.25", "0.5", "0.6", "0.75", "0.8", "1"];
const RELATIONS: [Relation; 4] = [Relation::Ge, Relation::Gt, Relation::Le, Relation::Lt];

fn random_concept(rng: &mut ChaCha8Rng, atoms: &[&str], depth: u32) -> Concept {
    let leaf = depth == 0 || rng.gen_bool(0.45);
    if leaf {
        return match rng.gen_range(0..10) {
            0 => Concept::Top,
            1 => Concept::Bottom,
            _ => Concept::atom(*atoms.choose(rng).unwrap()),
        };
    }
    match rng.gen_range(0..3) {
        0 => Concept::and(
            random_concept(rng, atoms, depth - 1),
            random_concept(rng, atoms, depth - 1),
        ),
        1 => Concept::or(
            random_concept(rng, atoms, depth - 1),
            random_concept(rng, atoms, depth - 1),
        ),
        _ => Concept::not(random_concept(rng, atoms, depth - 1)),
    }
}

fn random_phi(rng: &mut ChaCha8Rng) -> PhiConfig {
    let options = [
        "logistic",
        "logistic:0.5",
        "logistic:2.5",
        "clamped-linear:0.5:0.5",
        "clamped-linear:1:0.25",
        "clamped-linear:0:0.6",
    ];
    options.choose(rng).unwrap().parse().unwrap()
}

/// A random KB with at most 4 concepts, 2 distinguished concepts and 3
/// inclusions each, `n ≤ 5`, and a random query over its atoms.
pub fn random_case(rng: &mut ChaCha8Rng) -> Case {
    let m = rng.gen_range(1..=4);
    let atoms: Vec<&str> = NAMES[..m].to_vec();
    let n = rng.gen_range(1..=5);
    let algebra = if rng.gen_bool(0.5) {
        Algebra::Goedel
    } else {
        Algebra::Lukasiewicz
    };
    let mut kb = WeightedKb::new(n, algebra, atoms.iter().copied());
    kb.precision = rng.gen_range(0..=2);
    kb.phi = random_phi(rng);

    let k = rng.gen_range(0..=2.min(m));
    let mut subjects = atoms.clone();
    subjects.shuffle(rng);
    for subject in &subjects[..k] {
        for _ in 0..rng.gen_range(1..=3) {
            let scale = 10i64.pow(kb.precision);
            let w = rng.gen_range(-3 * scale..=3 * scale);
            let body = random_concept(rng, &atoms, 2);
            kb.add_typicality(subject, body, &scaled_to_decimal(&w.into(), kb.precision))
                .unwrap();
        }
    }
    for _ in 0..rng.gen_range(0..=2) {
        if rng.gen_bool(0.5) {
            continue;
        }
        let rel = if rng.gen_bool(0.5) { Relation::Ge } else { Relation::Gt };
        let lhs = random_concept(rng, &atoms, 1);
        let rhs = random_concept(rng, &atoms, 1);
        kb.add_inclusion(lhs, rhs, rel, ALPHAS.choose(rng).unwrap()).unwrap();
    }
    for _ in 0..rng.gen_range(0..=2) {
        let individual = if rng.gen_bool(0.5) { "a" } else { "b" };
        let c = random_concept(rng, &atoms, 1);
        let alpha = if rng.gen_bool(0.5) {
            "0"
        } else {
            ALPHAS.choose(rng).unwrap()
        };
        let rel = if rng.gen_bool(0.5) {
            Relation::Ge
        } else {
            *RELATIONS.choose(rng).unwrap()
        };
        kb.add_assertion(c, individual, rel, alpha).unwrap();
    }
    if rng.gen_bool(0.25) {
        kb.inputs = Some(kb.input_concepts());
        kb.binary_inputs = true;
    }
    assert!(typik::validate_kb(&kb).is_empty(), "generator produced an invalid KB");
    let query = TypicalityQuery {
        subject: random_concept(rng, &atoms, 1),
        property: random_concept(rng, &atoms, 2),
        relation: *RELATIONS.choose(rng).unwrap(),
        alpha: typik::degree::parse_decimal(ALPHAS.choose(rng).unwrap()).unwrap(),
    };
    Case { kb, query }
}

pub fn random_cases(seed: u64, count: usize) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_case(&mut rng)).collect()
}
