//! Element weights with respect to distinguished concepts, induced preferences,
//! typical elements, and the coherence / faithfulness / φₙ-coherence checks.
//!
//! Weight sums live on the scaled axis: a sum of `weight·10^k` times the body
//! degree numerator, so one unit is `1 / (n·10^k)` of a real weight.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{eval_concept, Algebra, Valuation};
use crate::concept::Concept;
use crate::degree::TruthDegree;
use crate::error::{Error, Result};
use crate::kb::WeightedKb;
use crate::phi::PhiN;

/// `W_i(x)`: a finite scaled sum, or `-∞` outside the distinguished concept.
/// Variant order gives `NegInfinity` below every finite value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementWeight {
    NegInfinity,
    Finite(BigInt),
}

/// `Σ_h w_h · D_h(v)` on the scaled axis.
pub fn weight_sum(v: &Valuation, ci: &str, kb: &WeightedKb) -> Result<BigInt> {
    let inclusions = kb
        .typicality
        .get(ci)
        .ok_or_else(|| Error::NotDistinguished(ci.to_string()))?;
    let mut sum = BigInt::zero();
    for inc in inclusions {
        let d = eval_concept(&inc.body, v, kb.algebra)?;
        sum += BigInt::from(inc.weight) * d.numerator();
    }
    Ok(sum)
}

#[allow(non_snake_case)]
pub fn weight_W(v: &Valuation, ci: &str, kb: &WeightedKb) -> Result<ElementWeight> {
    let sum = weight_sum(v, ci, kb)?;
    let own = eval_concept(&Concept::atom(ci), v, kb.algebra)?;
    Ok(if own.is_zero() {
        ElementWeight::NegInfinity
    } else {
        ElementWeight::Finite(sum)
    })
}

/// `x <_C y` iff `C(x) > C(y)`, over a fixed list of valuations.
#[derive(Clone, Debug)]
pub struct InducedPreference {
    degrees: Vec<TruthDegree>,
    strata: Vec<Vec<usize>>,
}

impl InducedPreference {
    /// `vs[x] <_C vs[y]`
    pub fn prefers(&self, x: usize, y: usize) -> bool {
        self.degrees[x] > self.degrees[y]
    }

    pub fn compare(&self, x: usize, y: usize) -> Ordering {
        self.degrees[y].cmp(&self.degrees[x])
    }

    /// Equivalence classes, most preferred (highest degree) first.
    pub fn strata(&self) -> &[Vec<usize>] {
        &self.strata
    }

    pub fn degrees(&self) -> &[TruthDegree] {
        &self.degrees
    }
}

pub fn induced_preference(vs: &[Valuation], c: &Concept, alg: Algebra) -> Result<InducedPreference> {
    let degrees = vs.iter().map(|v| eval_concept(c, v, alg)).collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..vs.len()).collect();
    order.sort_by(|&a, &b| degrees[b].cmp(&degrees[a]).then(a.cmp(&b)));
    let mut strata: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match strata.last_mut() {
            Some(last) if degrees[last[0]] == degrees[i] => last.push(i),
            _ => strata.push(vec![i]),
        }
    }
    Ok(InducedPreference { degrees, strata })
}

/// `min_{<_C}` of the elements with positive `C`-degree.
pub fn typical_elements<'a>(vs: &'a [Valuation], c: &Concept, alg: Algebra) -> Result<Vec<&'a Valuation>> {
    let degrees = vs.iter().map(|v| eval_concept(c, v, alg)).collect::<Result<Vec<_>>>()?;
    let Some(best) = degrees.iter().copied().max() else {
        return Ok(Vec::new());
    };
    if best.is_zero() {
        return Ok(Vec::new());
    }
    Ok(vs
        .iter()
        .zip(&degrees)
        .filter(|(_, d)| **d == best)
        .map(|(v, _)| v)
        .collect())
}

/// Per-element φₙ-coherence: `C_i(v) = φₙ(weight_sum)` for every distinguished `C_i`.
pub fn check_phi_coherent(v: &Valuation, kb: &WeightedKb, pn: &PhiN) -> Result<bool> {
    for ci in kb.distinguished() {
        let own = eval_concept(&Concept::atom(ci), v, kb.algebra)?;
        if own.numerator() != pn.level(&weight_sum(v, ci, kb)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn pairwise(model: &[Valuation], kb: &WeightedKb, accept: impl Fn(bool, bool) -> bool) -> Result<bool> {
    for ci in kb.distinguished() {
        let atom = Concept::atom(ci);
        let pref = induced_preference(model, &atom, kb.algebra)?;
        let weights = model.iter().map(|v| weight_W(v, ci, kb)).collect::<Result<Vec<_>>>()?;
        for x in 0..model.len() {
            for y in 0..model.len() {
                if !accept(pref.prefers(x, y), weights[x] > weights[y]) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `x <_{C_i} y ⇔ W_i(x) > W_i(y)` for all distinguished `C_i` and pairs.
pub fn check_coherent(model: &[Valuation], kb: &WeightedKb) -> Result<bool> {
    pairwise(model, kb, |preferred, heavier| preferred == heavier)
}

/// `x <_{C_i} y ⇒ W_i(x) > W_i(y)` for all distinguished `C_i` and pairs.
pub fn check_faithful(model: &[Valuation], kb: &WeightedKb) -> Result<bool> {
    pairwise(model, kb, |preferred, heavier| !preferred || heavier)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Signature;
    use crate::kb::parse_kb;
    use serde_json::json;
    use std::sync::Arc;

    fn penguin(n: u32) -> WeightedKb {
        let doc = json!({
            "n": n, "algebra": "goedel", "precision": 0,
            "concepts": ["Bird", "Penguin", "Fly", "Has_Wings", "Has_Feather", "Black", "Red"],
            "typicality": {
                "Bird": [ {"body": "Fly", "weight": 20}, {"body": "Has_Wings", "weight": 50},
                          {"body": "Has_Feather", "weight": 50} ],
                "Penguin": [ {"body": "Bird", "weight": 100}, {"body": "Fly", "weight": -70},
                             {"body": "Black", "weight": 50} ]
            }
        });
        parse_kb(&doc.to_string()).unwrap()
    }

    fn v(kb: &WeightedKb, pairs: &[(&str, u32)]) -> Valuation {
        Valuation::from_pairs(kb.signature(), pairs.iter().copied()).unwrap()
    }

    #[test]
    fn example_weights_at_n1() {
        let kb = penguin(1);
        let reddy = v(
            &kb,
            &[
                ("Fly", 1),
                ("Has_Wings", 1),
                ("Has_Feather", 1),
                ("Red", 1),
                ("Bird", 1),
            ],
        );
        let opus = v(&kb, &[("Has_Wings", 1), ("Has_Feather", 1), ("Bird", 1)]);
        assert_eq!(weight_sum(&reddy, "Bird", &kb).unwrap(), BigInt::from(120));
        assert_eq!(weight_sum(&opus, "Bird", &kb).unwrap(), BigInt::from(100));
        assert_eq!(
            weight_W(&reddy, "Bird", &kb).unwrap(),
            ElementWeight::Finite(120.into())
        );
    }

    #[test]
    fn penguin_weight_with_partial_degrees() {
        // Bird = Black = 0.8 = 4/5, Fly = 0: 4·100 + 4·50 = 600 = 120 · n
        let kb = penguin(5);
        let opus = v(&kb, &[("Bird", 4), ("Black", 4), ("Has_Wings", 5), ("Has_Feather", 5)]);
        assert_eq!(weight_sum(&opus, "Penguin", &kb).unwrap(), BigInt::from(120 * 5));
    }

    #[test]
    fn weight_is_neg_infinity_outside_concept() {
        let kb = penguin(5);
        let x = v(&kb, &[("Bird", 5)]);
        assert_eq!(weight_W(&x, "Penguin", &kb).unwrap(), ElementWeight::NegInfinity);
        let y = v(&kb, &[("Bird", 3)]);
        assert_eq!(
            weight_W(&y, "Bird", &kb).unwrap(),
            ElementWeight::Finite(BigInt::zero())
        );
        assert!(ElementWeight::NegInfinity < ElementWeight::Finite((-1_000_000).into()));
        assert!(matches!(weight_sum(&y, "Fly", &kb), Err(Error::NotDistinguished(_))));
    }

    fn one_concept(ns: &[u32], n: u32) -> (Arc<Signature>, Vec<Valuation>) {
        let sig = Signature::new(["C"], n);
        let vs = ns
            .iter()
            .map(|&d| Valuation::from_numerators(sig.clone(), vec![d]).unwrap())
            .collect();
        (sig, vs)
    }

    #[test]
    fn strata_by_descending_degree() {
        let (_, vs) = one_concept(&[5, 3, 3, 0], 5);
        let p = induced_preference(&vs, &Concept::atom("C"), Algebra::Goedel).unwrap();
        assert_eq!(p.strata(), &[vec![0], vec![1, 2], vec![3]]);
        assert!(p.prefers(0, 1) && !p.prefers(1, 2) && !p.prefers(3, 0));

        let (_, vs) = one_concept(&[2, 2, 2], 5);
        let p = induced_preference(&vs, &Concept::atom("C"), Algebra::Goedel).unwrap();
        assert!((0..3).all(|x| (0..3).all(|y| !p.prefers(x, y))));
    }

    #[test]
    fn typical_elements_cases() {
        let c = Concept::atom("C");
        let (_, vs) = one_concept(&[0, 0, 0], 5);
        assert!(typical_elements(&vs, &c, Algebra::Goedel).unwrap().is_empty());
        let (_, vs) = one_concept(&[1, 5], 5);
        assert_eq!(typical_elements(&vs, &c, Algebra::Goedel).unwrap(), vec![&vs[1]]);
        let (_, vs) = one_concept(&[3, 3, 1], 5);
        assert_eq!(
            typical_elements(&vs, &c, Algebra::Goedel).unwrap(),
            vec![&vs[0], &vs[1]]
        );
    }

    #[test]
    fn reddy_is_the_more_typical_bird() {
        let kb = penguin(1);
        let pn = kb.phi_n().unwrap();
        // φ₁ maps both positive sums to 1, so compare the weights directly and
        // check the induced order on a valuation set where Bird tracks the weight.
        let reddy = v(&kb, &[("Fly", 1), ("Has_Wings", 1), ("Has_Feather", 1), ("Bird", 1)]);
        let opus = v(&kb, &[("Has_Wings", 1), ("Has_Feather", 1), ("Bird", 1)]);
        assert!(weight_W(&reddy, "Bird", &kb).unwrap() > weight_W(&opus, "Bird", &kb).unwrap());
        assert_eq!(pn.level(&weight_sum(&reddy, "Bird", &kb).unwrap()), 1);

        let kb5 = penguin(5);
        let reddy5 = v(&kb5, &[("Fly", 5), ("Has_Wings", 5), ("Has_Feather", 5), ("Bird", 5)]);
        let opus5 = v(&kb5, &[("Has_Wings", 5), ("Has_Feather", 5), ("Bird", 4)]);
        let vs = [reddy5, opus5];
        let pref = induced_preference(&vs, &Concept::atom("Bird"), Algebra::Goedel).unwrap();
        assert!(pref.prefers(0, 1));
    }

    #[test]
    fn phi_coherence_cases() {
        let kb = WeightedKb::new(3, Algebra::Goedel, ["A"]);
        let pn = kb.phi_n().unwrap();
        let x = Valuation::from_numerators(kb.signature(), vec![2]).unwrap();
        assert!(check_phi_coherent(&x, &kb, &pn).unwrap());

        let mut kb = WeightedKb::new(2, Algebra::Goedel, ["C"]);
        kb.add_typicality("C", Concept::Top, "0").unwrap();
        let pn = kb.phi_n().unwrap();
        let half = Valuation::from_numerators(kb.signature(), vec![1]).unwrap();
        let zero = Valuation::from_numerators(kb.signature(), vec![0]).unwrap();
        assert!(check_phi_coherent(&half, &kb, &pn).unwrap());
        assert!(!check_phi_coherent(&zero, &kb, &pn).unwrap());
    }

    fn two_weight_kb() -> WeightedKb {
        let mut kb = WeightedKb::new(2, Algebra::Goedel, ["C", "A", "B"]);
        kb.add_typicality("C", Concept::atom("A"), "1").unwrap();
        kb.add_typicality("C", Concept::atom("B"), "2").unwrap();
        kb
    }

    #[test]
    fn coherence_and_faithfulness() {
        let kb = two_weight_kb();
        let sig = kb.signature(); // order: A, B, C
        let mk = |a, b, c| Valuation::from_numerators(sig.clone(), vec![a, b, c]).unwrap();

        assert!(check_coherent(&[mk(0, 0, 1)], &kb).unwrap());

        // equal C-degree, different finite weights: faithful, not coherent
        let model = [mk(2, 0, 1), mk(0, 2, 1)];
        assert!(check_faithful(&model, &kb).unwrap());
        assert!(!check_coherent(&model, &kb).unwrap());

        // preference contradicts weights: neither
        let model = [mk(2, 0, 2), mk(0, 2, 1)];
        assert!(!check_faithful(&model, &kb).unwrap());

        // zero-degree elements share -∞
        let model = [mk(2, 0, 0), mk(0, 2, 0), mk(2, 2, 2)];
        assert!(check_coherent(&model, &kb).unwrap());
    }
}
