//! Gödel and Łukasiewicz connectives on `{0, 1/n, ..., 1}` and concept evaluation.
//!
//! Degrees are handled as integer numerators with `n` as ambient context, so
//! every connective is integer arithmetic.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::concept::Concept;
use crate::degree::{NumeratorRange, Relation, TruthDegree};
use crate::error::{Error, Result};
use crate::kb::Assertion;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algebra {
    Goedel,
    Lukasiewicz,
}

impl Algebra {
    pub fn t_norm(self, a: u32, b: u32, n: u32) -> u32 {
        match self {
            Algebra::Goedel => a.min(b),
            Algebra::Lukasiewicz => (a + b).saturating_sub(n),
        }
    }

    pub fn s_norm(self, a: u32, b: u32, n: u32) -> u32 {
        match self {
            Algebra::Goedel => a.max(b),
            Algebra::Lukasiewicz => (a + b).min(n),
        }
    }

    pub fn implication(self, a: u32, b: u32, n: u32) -> u32 {
        match self {
            Algebra::Goedel => {
                if a <= b {
                    n
                } else {
                    b
                }
            }
            Algebra::Lukasiewicz => (n - a + b).min(n),
        }
    }

    pub fn negation(self, a: u32, n: u32) -> u32 {
        n - a
    }

    pub fn name(self) -> &'static str {
        match self {
            Algebra::Goedel => "goedel",
            Algebra::Lukasiewicz => "lukasiewicz",
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algebra {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "goedel" | "godel" | "gödel" | "g" => Ok(Algebra::Goedel),
            "lukasiewicz" | "łukasiewicz" | "l" => Ok(Algebra::Lukasiewicz),
            other => Err(Error::Schema(format!("unknown algebra `{other}`"))),
        }
    }
}

/// The concept names of a KB in canonical (sorted) order, with the resolution.
#[derive(Debug, PartialEq, Eq)]
pub struct Signature {
    n: u32,
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Signature {
    pub fn new<I, S>(names: I, n: u32) -> Arc<Signature>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        names.sort();
        names.dedup();
        let index = names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Arc::new(Signature { n, names, index })
    }

    pub fn resolution(&self) -> u32 {
        self.n
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::UnknownAtom(name.to_string()))
    }
}

/// A total assignment of degrees to the concept names of a signature. Stands in
/// for a domain element; two elements with the same valuation are
/// indistinguishable for the boolean fragment.
#[derive(Clone)]
pub struct Valuation {
    sig: Arc<Signature>,
    degrees: Vec<u32>,
}

impl Valuation {
    pub fn from_numerators(sig: Arc<Signature>, degrees: Vec<u32>) -> Result<Valuation> {
        if degrees.len() != sig.len() {
            return Err(Error::Schema(format!(
                "valuation has {} degrees for {} concepts",
                degrees.len(),
                sig.len()
            )));
        }
        if let Some(bad) = degrees.iter().find(|&&d| d > sig.n) {
            return Err(Error::Schema(format!("degree numerator {bad} exceeds n = {}", sig.n)));
        }
        Ok(Valuation { sig, degrees })
    }

    /// Builds a valuation from `(name, numerator)` pairs; unmentioned names get 0.
    pub fn from_pairs<'a, I>(sig: Arc<Signature>, pairs: I) -> Result<Valuation>
    where
        I: IntoIterator<Item = (&'a str, u32)>,
    {
        let mut degrees = vec![0; sig.len()];
        for (name, d) in pairs {
            degrees[sig.require(name)?] = d;
        }
        Valuation::from_numerators(sig, degrees)
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn numerators(&self) -> &[u32] {
        &self.degrees
    }

    pub fn resolution(&self) -> u32 {
        self.sig.n
    }

    pub fn degree(&self, name: &str) -> Option<TruthDegree> {
        let i = self.sig.index_of(name)?;
        TruthDegree::new(self.degrees[i], self.sig.n)
    }

    pub fn to_map(&self) -> BTreeMap<String, TruthDegree> {
        self.sig
            .names
            .iter()
            .zip(&self.degrees)
            .map(|(name, &d)| (name.clone(), TruthDegree::new(d, self.sig.n).expect("in range")))
            .collect()
    }
}

impl PartialEq for Valuation {
    fn eq(&self, other: &Self) -> bool {
        self.sig.n == other.sig.n && self.sig.names == other.sig.names && self.degrees == other.degrees
    }
}

impl Eq for Valuation {}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: lexicographic on numerators in signature order.
impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degrees.cmp(&other.degrees)
    }
}

impl std::hash::Hash for Valuation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.degrees.hash(state);
    }
}

impl fmt::Debug for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (name, d)) in self.sig.names.iter().zip(&self.degrees).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name}={d}/{}", self.sig.n)?;
        }
        f.write_str("}")
    }
}

/// A concept with atoms resolved to signature indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexedConcept {
    Atom(usize),
    Top,
    Bottom,
    And(Box<IndexedConcept>, Box<IndexedConcept>),
    Or(Box<IndexedConcept>, Box<IndexedConcept>),
    Neg(Box<IndexedConcept>),
}

impl IndexedConcept {
    pub fn compile(c: &Concept, sig: &Signature) -> Result<IndexedConcept> {
        Ok(match c {
            Concept::Atom(name) => IndexedConcept::Atom(sig.require(name)?),
            Concept::Top => IndexedConcept::Top,
            Concept::Bottom => IndexedConcept::Bottom,
            Concept::And(a, b) => IndexedConcept::And(
                Box::new(IndexedConcept::compile(a, sig)?),
                Box::new(IndexedConcept::compile(b, sig)?),
            ),
            Concept::Or(a, b) => IndexedConcept::Or(
                Box::new(IndexedConcept::compile(a, sig)?),
                Box::new(IndexedConcept::compile(b, sig)?),
            ),
            Concept::Neg(a) => IndexedConcept::Neg(Box::new(IndexedConcept::compile(a, sig)?)),
        })
    }

    pub fn eval(&self, degrees: &[u32], n: u32, alg: Algebra) -> u32 {
        match self {
            IndexedConcept::Atom(i) => degrees[*i],
            IndexedConcept::Top => n,
            IndexedConcept::Bottom => 0,
            IndexedConcept::And(a, b) => alg.t_norm(a.eval(degrees, n, alg), b.eval(degrees, n, alg), n),
            IndexedConcept::Or(a, b) => alg.s_norm(a.eval(degrees, n, alg), b.eval(degrees, n, alg), n),
            IndexedConcept::Neg(a) => alg.negation(a.eval(degrees, n, alg), n),
        }
    }

    pub fn atoms(&self, out: &mut Vec<usize>) {
        match self {
            IndexedConcept::Atom(i) => {
                if !out.contains(i) {
                    out.push(*i);
                }
            }
            IndexedConcept::Top | IndexedConcept::Bottom => {}
            IndexedConcept::And(a, b) | IndexedConcept::Or(a, b) => {
                a.atoms(out);
                b.atoms(out);
            }
            IndexedConcept::Neg(a) => a.atoms(out),
        }
    }
}

/// Degree of `c` under `v`.
pub fn eval_concept(c: &Concept, v: &Valuation, alg: Algebra) -> Result<TruthDegree> {
    let n = v.resolution();
    let d = eval_numerator(c, v, alg)?;
    Ok(TruthDegree::new(d, n).expect("closed on the chain"))
}

fn eval_numerator(c: &Concept, v: &Valuation, alg: Algebra) -> Result<u32> {
    let n = v.resolution();
    Ok(match c {
        Concept::Atom(name) => v.degrees[v.sig.require(name)?],
        Concept::Top => n,
        Concept::Bottom => 0,
        Concept::And(a, b) => alg.t_norm(eval_numerator(a, v, alg)?, eval_numerator(b, v, alg)?, n),
        Concept::Or(a, b) => alg.s_norm(eval_numerator(a, v, alg)?, eval_numerator(b, v, alg)?, n),
        Concept::Neg(a) => alg.negation(eval_numerator(a, v, alg)?, n),
    })
}

/// Per-element contribution `lhs(v) ▷ rhs(v)` to an inclusion degree.
pub fn inclusion_degree_at(lhs: &Concept, rhs: &Concept, v: &Valuation, alg: Algebra) -> Result<TruthDegree> {
    let n = v.resolution();
    let a = eval_numerator(lhs, v, alg)?;
    let b = eval_numerator(rhs, v, alg)?;
    Ok(TruthDegree::new(alg.implication(a, b, n), n).expect("closed on the chain"))
}

/// `v` is taken to be the valuation of the assertion's individual.
pub fn assertion_satisfied(a: &Assertion, v: &Valuation, alg: Algebra) -> Result<bool> {
    let d = eval_concept(&a.concept, v, alg)?;
    Ok(a.relation.degree_holds(d, &a.alpha))
}

/// A degree test `expr(v) θ α`, pre-resolved to a numerator range.
#[derive(Clone, Debug)]
pub struct DegreeTest {
    pub range: Option<NumeratorRange>,
}

impl DegreeTest {
    pub fn new(relation: Relation, alpha: &num_rational::BigRational, n: u32) -> Self {
        DegreeTest {
            range: relation.numerator_range(alpha, n),
        }
    }

    pub fn accepts(&self, v: u32) -> bool {
        self.range.is_some_and(|r| r.contains(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Arc<Signature> {
        Signature::new(["A", "B"], 5)
    }

    fn val(a: u32, b: u32) -> Valuation {
        Valuation::from_pairs(sig(), [("A", a), ("B", b)]).unwrap()
    }

    fn and_ab() -> Concept {
        Concept::and(Concept::atom("A"), Concept::atom("B"))
    }

    #[test]
    fn goedel_conjunction_is_min() {
        let d = eval_concept(&and_ab(), &val(2, 3), Algebra::Goedel).unwrap();
        assert_eq!(d, TruthDegree::new(2, 5).unwrap());
    }

    #[test]
    fn lukasiewicz_conjunction() {
        let d = eval_concept(&and_ab(), &val(2, 4), Algebra::Lukasiewicz).unwrap();
        assert_eq!(d, TruthDegree::new(1, 5).unwrap());
    }

    #[test]
    fn negated_top_is_zero() {
        for alg in [Algebra::Goedel, Algebra::Lukasiewicz] {
            let d = eval_concept(&Concept::not(Concept::Top), &val(0, 0), alg).unwrap();
            assert!(d.is_zero());
        }
    }

    #[test]
    fn inclusion_degrees() {
        let (a, b) = (Concept::atom("A"), Concept::atom("B"));
        let one = TruthDegree::one(5);
        assert_eq!(inclusion_degree_at(&a, &b, &val(3, 3), Algebra::Goedel).unwrap(), one);
        assert_eq!(
            inclusion_degree_at(&a, &b, &val(4, 1), Algebra::Goedel).unwrap(),
            TruthDegree::new(1, 5).unwrap()
        );
        assert_eq!(
            inclusion_degree_at(&a, &b, &val(4, 1), Algebra::Lukasiewicz).unwrap(),
            TruthDegree::new(2, 5).unwrap()
        );
    }

    #[test]
    fn assertions_compare_exactly() {
        use crate::degree::parse_decimal;
        let mk = |rel, alpha: &str| Assertion {
            concept: Concept::atom("A"),
            individual: "a".into(),
            relation: rel,
            alpha: parse_decimal(alpha).unwrap(),
        };
        let alg = Algebra::Goedel;
        assert!(assertion_satisfied(&mk(Relation::Ge, "0.8"), &val(4, 0), alg).unwrap());
        assert!(!assertion_satisfied(&mk(Relation::Gt, "0.8"), &val(4, 0), alg).unwrap());
        assert!(!assertion_satisfied(&mk(Relation::Lt, "1"), &val(5, 0), alg).unwrap());
    }

    #[test]
    fn unknown_atom_is_an_error() {
        let err = eval_concept(&Concept::atom("Z"), &val(0, 0), Algebra::Goedel).unwrap_err();
        assert!(matches!(err, Error::UnknownAtom(name) if name == "Z"));
    }

    #[test]
    fn indexed_matches_direct() {
        let c: Concept = "!(A & B) | (A & !B)".parse().unwrap();
        let s = sig();
        let ic = IndexedConcept::compile(&c, &s).unwrap();
        for alg in [Algebra::Goedel, Algebra::Lukasiewicz] {
            for a in 0..=5 {
                for b in 0..=5 {
                    let v = val(a, b);
                    let direct = eval_concept(&c, &v, alg).unwrap().numerator();
                    assert_eq!(ic.eval(v.numerators(), 5, alg), direct);
                }
            }
        }
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        let mut vs = vec![val(1, 0), val(0, 3), val(0, 1)];
        vs.sort();
        assert_eq!(vs, vec![val(0, 1), val(0, 3), val(1, 0)]);
    }
}
