//! Weighted knowledge bases, their JSON document form, and structural validation.
//!
//! A document looks like
//!
//! ```json
//! {
//!   "n": 5, "algebra": "goedel", "precision": 0,
//!   "phi": { "kind": "logistic", "gain": 1.0 },
//!   "concepts": ["Bird", "Fly"], "individuals": ["reddy"],
//!   "tbox": [ { "lhs": {"and": ["Black", "Red"]}, "rhs": "bot", "rel": ">=", "alpha": 1 } ],
//!   "typicality": { "Bird": [ { "body": "Fly", "weight": 20 } ] },
//!   "abox": [ { "concept": "Fly", "individual": "reddy", "rel": ">=", "alpha": 1 } ]
//! }
//! ```
//!
//! Weights are stored as integers scaled by `10^precision`; thresholds are exact
//! rationals.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::algebra::{Algebra, Signature};
use crate::concept::{is_identifier, Concept, RESERVED_NAMES};
use crate::degree::{format_decimal, in_unit_interval, parse_decimal, parse_scaled, scaled_to_decimal, Relation};
use crate::error::{Error, Result};
use crate::phi::{compute_thresholds, PhiConfig, PhiN};

pub const DEFAULT_PRECISION: u32 = 3;

/// `lhs ⊑ rhs θ α`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictInclusion {
    pub lhs: Concept,
    pub rhs: Concept,
    pub relation: Relation,
    pub alpha: BigRational,
}

/// `C(a) θ α`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assertion {
    pub concept: Concept,
    pub individual: String,
    pub relation: Relation,
    pub alpha: BigRational,
}

/// `(T(subject) ⊑ body, weight)` with `weight` scaled by `10^precision`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedTypicalityInclusion {
    pub subject: String,
    pub body: Concept,
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedKb {
    pub n: u32,
    pub algebra: Algebra,
    pub precision: u32,
    pub phi: PhiConfig,
    pub concepts: BTreeSet<String>,
    pub individuals: BTreeSet<String>,
    pub inputs: Option<BTreeSet<String>>,
    pub binary_inputs: bool,
    pub tbox: Vec<StrictInclusion>,
    pub typicality: BTreeMap<String, Vec<WeightedTypicalityInclusion>>,
    pub abox: Vec<Assertion>,
}

impl WeightedKb {
    /// An empty KB over the given concept names.
    pub fn new<I, S>(n: u32, algebra: Algebra, concepts: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        WeightedKb {
            n,
            algebra,
            precision: DEFAULT_PRECISION,
            phi: PhiConfig::default(),
            concepts: concepts.into_iter().map(Into::into).collect(),
            individuals: BTreeSet::new(),
            inputs: None,
            binary_inputs: false,
            tbox: Vec::new(),
            typicality: BTreeMap::new(),
            abox: Vec::new(),
        }
    }

    /// Adds `(T(subject) ⊑ body, weight)`; `weight` is a decimal literal.
    pub fn add_typicality(&mut self, subject: &str, body: Concept, weight: &str) -> Result<()> {
        let weight = parse_scaled(weight, self.precision)?;
        self.typicality
            .entry(subject.to_string())
            .or_default()
            .push(WeightedTypicalityInclusion {
                subject: subject.to_string(),
                body,
                weight,
            });
        Ok(())
    }

    pub fn add_inclusion(&mut self, lhs: Concept, rhs: Concept, relation: Relation, alpha: &str) -> Result<()> {
        self.tbox.push(StrictInclusion {
            lhs,
            rhs,
            relation,
            alpha: parse_decimal(alpha)?,
        });
        Ok(())
    }

    pub fn add_assertion(&mut self, concept: Concept, individual: &str, relation: Relation, alpha: &str) -> Result<()> {
        self.individuals.insert(individual.to_string());
        self.abox.push(Assertion {
            concept,
            individual: individual.to_string(),
            relation,
            alpha: parse_decimal(alpha)?,
        });
        Ok(())
    }

    pub fn distinguished(&self) -> impl Iterator<Item = &str> {
        self.typicality.keys().map(String::as_str)
    }

    pub fn is_distinguished(&self, name: &str) -> bool {
        self.typicality.contains_key(name)
    }

    /// Declared inputs, or every non-distinguished concept when none are declared.
    pub fn input_concepts(&self) -> BTreeSet<String> {
        match &self.inputs {
            Some(inputs) => inputs.clone(),
            None => self
                .concepts
                .iter()
                .filter(|c| !self.is_distinguished(c))
                .cloned()
                .collect(),
        }
    }

    /// Whether `name` is restricted to `{0, 1}`.
    pub fn is_binary(&self, name: &str) -> bool {
        self.binary_inputs && self.inputs.as_ref().is_some_and(|i| i.contains(name))
    }

    pub fn signature(&self) -> Arc<Signature> {
        Signature::new(self.concepts.iter().cloned(), self.n)
    }

    pub fn phi_n(&self) -> Result<PhiN> {
        compute_thresholds(&self.phi, self.n, self.precision)
    }

    pub fn inclusion_count(&self) -> usize {
        self.typicality.values().map(Vec::len).sum()
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(KbDocument::from(self)).expect("document serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagnosticKind {
    Resolution,
    UnknownAtom(String),
    UnknownIndividual(String),
    AlphaRange,
    TboxRelation,
    UndeclaredSubject(String),
    InputDistinguished(String),
    UnknownInput(String),
    ReservedName(String),
    BadName(String),
    Phi,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    #[serde(skip)]
    pub kind: DiagnosticKind,
    pub location: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// Every violated structural invariant, one diagnostic each. Empty means valid.
pub fn validate_kb(kb: &WeightedKb) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut push = |kind, location: String, message: String| {
        out.push(Diagnostic {
            kind,
            location,
            message,
        })
    };

    if kb.n < 1 {
        push(
            DiagnosticKind::Resolution,
            "n".into(),
            format!("n must be at least 1, got {}", kb.n),
        );
    }
    if let Some(problem) = kb.phi.problem() {
        push(DiagnosticKind::Phi, "phi".into(), problem);
    }
    for name in &kb.concepts {
        if RESERVED_NAMES.contains(&name.as_str()) {
            push(
                DiagnosticKind::ReservedName(name.clone()),
                "concepts".into(),
                format!("`{name}` is reserved"),
            );
        } else if !is_identifier(name) {
            push(
                DiagnosticKind::BadName(name.clone()),
                "concepts".into(),
                format!("`{name}` is not a valid name"),
            );
        }
    }

    let check_atoms = |c: &Concept, location: String, out: &mut Vec<Diagnostic>| {
        for atom in c.atoms() {
            if !kb.concepts.contains(atom) {
                out.push(Diagnostic {
                    kind: DiagnosticKind::UnknownAtom(atom.to_string()),
                    location: location.clone(),
                    message: format!("unknown atom `{atom}`"),
                });
            }
        }
    };

    for (i, ax) in kb.tbox.iter().enumerate() {
        let loc = format!("tbox[{i}]");
        check_atoms(&ax.lhs, loc.clone(), &mut out);
        check_atoms(&ax.rhs, loc.clone(), &mut out);
        if !in_unit_interval(&ax.alpha) {
            out.push(Diagnostic {
                kind: DiagnosticKind::AlphaRange,
                location: loc.clone(),
                message: format!("alpha {} is outside [0,1]", format_decimal(&ax.alpha)),
            });
        }
        if matches!(ax.relation, Relation::Le | Relation::Lt) {
            out.push(Diagnostic {
                kind: DiagnosticKind::TboxRelation,
                location: loc,
                message: format!("inclusion relation `{}` is not supported; use >= or >", ax.relation),
            });
        }
    }

    for (subject, inclusions) in &kb.typicality {
        if !kb.concepts.contains(subject) {
            out.push(Diagnostic {
                kind: DiagnosticKind::UndeclaredSubject(subject.clone()),
                location: format!("typicality.{subject}"),
                message: format!("distinguished concept `{subject}` is not declared"),
            });
        }
        for (h, inc) in inclusions.iter().enumerate() {
            let loc = format!("typicality.{subject}[{h}]");
            if &inc.subject != subject {
                out.push(Diagnostic {
                    kind: DiagnosticKind::UndeclaredSubject(inc.subject.clone()),
                    location: loc.clone(),
                    message: format!("inclusion subject `{}` filed under `{subject}`", inc.subject),
                });
            }
            check_atoms(&inc.body, loc, &mut out);
        }
    }

    for (i, a) in kb.abox.iter().enumerate() {
        let loc = format!("abox[{i}]");
        check_atoms(&a.concept, loc.clone(), &mut out);
        if !kb.individuals.contains(&a.individual) {
            out.push(Diagnostic {
                kind: DiagnosticKind::UnknownIndividual(a.individual.clone()),
                location: loc.clone(),
                message: format!("individual `{}` is not declared", a.individual),
            });
        }
        if !in_unit_interval(&a.alpha) {
            out.push(Diagnostic {
                kind: DiagnosticKind::AlphaRange,
                location: loc,
                message: format!("alpha {} is outside [0,1]", format_decimal(&a.alpha)),
            });
        }
    }

    if let Some(inputs) = &kb.inputs {
        for input in inputs {
            if !kb.concepts.contains(input) {
                out.push(Diagnostic {
                    kind: DiagnosticKind::UnknownInput(input.clone()),
                    location: "inputs".into(),
                    message: format!("input `{input}` is not a declared concept"),
                });
            }
            if kb.is_distinguished(input) {
                out.push(Diagnostic {
                    kind: DiagnosticKind::InputDistinguished(input.clone()),
                    location: "inputs".into(),
                    message: format!("input `{input}` must not be distinguished"),
                });
            }
        }
    }
    out
}

/// Reads a KB document and checks every invariant.
pub fn parse_kb(document: &str) -> Result<WeightedKb> {
    let kb = load_kb_unchecked(document)?;
    let diagnostics = validate_kb(&kb);
    if let Some(atom) = diagnostics.iter().find_map(|d| match &d.kind {
        DiagnosticKind::UnknownAtom(a) => Some(a.clone()),
        _ => None,
    }) {
        return Err(Error::UnknownAtom(atom));
    }
    if diagnostics.is_empty() {
        Ok(kb)
    } else {
        Err(Error::Invalid(diagnostics))
    }
}

/// Schema-level conversion only; run [`validate_kb`] on the result.
pub fn load_kb_unchecked(document: &str) -> Result<WeightedKb> {
    let doc: KbDocument = serde_json::from_str(document).map_err(|e| {
        let msg = e.to_string();
        if msg.contains("typicality operator") {
            Error::TypicalityNesting(msg)
        } else {
            Error::Schema(msg)
        }
    })?;
    doc.into_kb()
}

pub fn serialize_kb(kb: &WeightedKb) -> String {
    serde_json::to_string_pretty(&KbDocument::from(kb)).expect("document serializes")
}

/// A decimal literal that may appear as a JSON number or a string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct DecimalText(pub String);

impl<'de> Deserialize<'de> for DecimalText {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match Value::deserialize(deserializer)? {
            Value::Number(n) => Ok(DecimalText(n.to_string())),
            Value::String(s) => Ok(DecimalText(s)),
            other => Err(serde::de::Error::custom(format!("expected a decimal, found {other}"))),
        }
    }
}

impl Serialize for DecimalText {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.parse::<serde_json::Number>() {
            Ok(n) => n.serialize(serializer),
            Err(_) => self.0.serialize(serializer),
        }
    }
}

impl DecimalText {
    fn rational(&self) -> Result<BigRational> {
        parse_decimal(&self.0)
    }

    fn of(r: &BigRational) -> Self {
        DecimalText(format_decimal(r))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub(crate) enum PhiDocument {
    #[serde(rename = "logistic")]
    Logistic {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gain: Option<DecimalText>,
    },
    #[serde(rename = "clamped-linear")]
    ClampedLinear { slope: DecimalText, offset: DecimalText },
}

impl PhiDocument {
    pub(crate) fn into_config(self) -> Result<PhiConfig> {
        Ok(match self {
            PhiDocument::Logistic { gain } => PhiConfig::Logistic {
                gain: gain
                    .map(|g| g.rational())
                    .transpose()?
                    .unwrap_or_else(|| BigRational::from_integer(1.into())),
            },
            PhiDocument::ClampedLinear { slope, offset } => PhiConfig::ClampedLinear {
                slope: slope.rational()?,
                offset: offset.rational()?,
            },
        })
    }

    pub(crate) fn of(phi: &PhiConfig) -> Self {
        match phi {
            PhiConfig::Logistic { gain } => PhiDocument::Logistic {
                gain: Some(DecimalText::of(gain)),
            },
            PhiConfig::ClampedLinear { slope, offset } => PhiDocument::ClampedLinear {
                slope: DecimalText::of(slope),
                offset: DecimalText::of(offset),
            },
        }
    }
}

fn default_precision() -> u32 {
    DEFAULT_PRECISION
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InclusionDocument {
    lhs: Concept,
    rhs: Concept,
    rel: Relation,
    alpha: DecimalText,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TypicalityDocument {
    body: Concept,
    weight: DecimalText,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssertionDocument {
    concept: Concept,
    individual: String,
    rel: Relation,
    alpha: DecimalText,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KbDocument {
    n: i64,
    algebra: Algebra,
    #[serde(default = "default_precision")]
    precision: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phi: Option<PhiDocument>,
    #[serde(default)]
    concepts: Vec<String>,
    #[serde(default)]
    individuals: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inputs: Option<Vec<String>>,
    #[serde(default)]
    binary_inputs: bool,
    #[serde(default)]
    tbox: Vec<InclusionDocument>,
    #[serde(default)]
    typicality: BTreeMap<String, Vec<TypicalityDocument>>,
    #[serde(default)]
    abox: Vec<AssertionDocument>,
}

impl KbDocument {
    fn into_kb(self) -> Result<WeightedKb> {
        if self.n < 1 || self.n > i64::from(u32::MAX) {
            return Err(Error::InvalidResolution(self.n));
        }
        let precision = self.precision;
        let typicality = self
            .typicality
            .into_iter()
            .map(|(subject, docs)| {
                let inclusions = docs
                    .into_iter()
                    .map(|d| {
                        Ok(WeightedTypicalityInclusion {
                            subject: subject.clone(),
                            body: d.body,
                            weight: parse_scaled(&d.weight.0, precision)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((subject, inclusions))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(WeightedKb {
            n: self.n as u32,
            algebra: self.algebra,
            precision,
            phi: self.phi.map(PhiDocument::into_config).transpose()?.unwrap_or_default(),
            concepts: self.concepts.into_iter().collect(),
            individuals: self.individuals.into_iter().collect(),
            inputs: self.inputs.map(|i| i.into_iter().collect()),
            binary_inputs: self.binary_inputs,
            tbox: self
                .tbox
                .into_iter()
                .map(|d| {
                    Ok(StrictInclusion {
                        lhs: d.lhs,
                        rhs: d.rhs,
                        relation: d.rel,
                        alpha: d.alpha.rational()?,
                    })
                })
                .collect::<Result<_>>()?,
            typicality,
            abox: self
                .abox
                .into_iter()
                .map(|d| {
                    Ok(Assertion {
                        concept: d.concept,
                        individual: d.individual,
                        relation: d.rel,
                        alpha: d.alpha.rational()?,
                    })
                })
                .collect::<Result<_>>()?,
        })
    }
}

impl From<&WeightedKb> for KbDocument {
    fn from(kb: &WeightedKb) -> Self {
        KbDocument {
            n: i64::from(kb.n),
            algebra: kb.algebra,
            precision: kb.precision,
            phi: Some(PhiDocument::of(&kb.phi)),
            concepts: kb.concepts.iter().cloned().collect(),
            individuals: kb.individuals.iter().cloned().collect(),
            inputs: kb.inputs.as_ref().map(|i| i.iter().cloned().collect()),
            binary_inputs: kb.binary_inputs,
            tbox: kb
                .tbox
                .iter()
                .map(|ax| InclusionDocument {
                    lhs: ax.lhs.clone(),
                    rhs: ax.rhs.clone(),
                    rel: ax.relation,
                    alpha: DecimalText::of(&ax.alpha),
                })
                .collect(),
            typicality: kb
                .typicality
                .iter()
                .map(|(subject, incs)| {
                    let docs = incs
                        .iter()
                        .map(|inc| TypicalityDocument {
                            body: inc.body.clone(),
                            weight: DecimalText(scaled_to_decimal(&BigInt::from(inc.weight), kb.precision)),
                        })
                        .collect();
                    (subject.clone(), docs)
                })
                .collect(),
            abox: kb
                .abox
                .iter()
                .map(|a| AssertionDocument {
                    concept: a.concept.clone(),
                    individual: a.individual.clone(),
                    rel: a.relation,
                    alpha: DecimalText::of(&a.alpha),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn penguin_doc() -> Value {
        json!({
            "n": 5, "algebra": "goedel", "precision": 0,
            "concepts": ["Bird", "Penguin", "Fly", "Has_Wings", "Has_Feather", "Black", "Red"],
            "individuals": ["reddy", "opus"],
            "tbox": [ { "lhs": {"and": ["Black", "Red"]}, "rhs": "bot", "rel": ">=", "alpha": 1 } ],
            "typicality": {
                "Bird": [ {"body": "Fly", "weight": 20}, {"body": "Has_Wings", "weight": 50},
                          {"body": "Has_Feather", "weight": 50} ],
                "Penguin": [ {"body": "Bird", "weight": 100}, {"body": "Fly", "weight": -70},
                             {"body": "Black", "weight": 50} ]
            },
            "abox": []
        })
    }

    #[test]
    fn parses_penguin() {
        let kb = parse_kb(&penguin_doc().to_string()).unwrap();
        assert_eq!(kb.distinguished().collect::<Vec<_>>(), ["Bird", "Penguin"]);
        let mut weights: Vec<i64> = kb.typicality.values().flatten().map(|i| i.weight).collect();
        weights.sort();
        assert_eq!(weights, [-70, 20, 50, 50, 50, 100]);
        assert_eq!(kb.inclusion_count(), 6);
        assert!(validate_kb(&kb).is_empty());
    }

    #[test]
    fn empty_kb_is_valid() {
        let kb = parse_kb(r#"{"n": 1, "algebra": "lukasiewicz", "typicality": {}, "abox": []}"#).unwrap();
        assert_eq!(kb.distinguished().count(), 0);
        assert_eq!(kb.precision, DEFAULT_PRECISION);
        assert_eq!(kb.phi, PhiConfig::default());
    }

    #[test]
    fn rejects_typicality_on_the_right() {
        let mut doc = penguin_doc();
        doc["tbox"][0]["rhs"] = json!("T(Bird)");
        assert!(matches!(parse_kb(&doc.to_string()), Err(Error::TypicalityNesting(_))));
        let mut doc = penguin_doc();
        doc["typicality"]["Bird"][0]["body"] = json!({"T": "Penguin"});
        assert!(matches!(parse_kb(&doc.to_string()), Err(Error::TypicalityNesting(_))));
    }

    #[test]
    fn parse_errors() {
        let mut doc = penguin_doc();
        doc["n"] = json!(0);
        assert!(matches!(parse_kb(&doc.to_string()), Err(Error::InvalidResolution(0))));

        let mut doc = penguin_doc();
        doc["typicality"]["Bird"][0]["body"] = json!("Swims");
        assert!(matches!(parse_kb(&doc.to_string()), Err(Error::UnknownAtom(a)) if a == "Swims"));

        let mut doc = penguin_doc();
        doc["typicality"]["Bird"][0]["weight"] = json!(0.5);
        assert!(matches!(parse_kb(&doc.to_string()), Err(Error::WeightPrecision { .. })));

        let mut doc = penguin_doc();
        doc["surprise"] = json!(1);
        assert!(matches!(parse_kb(&doc.to_string()), Err(Error::Schema(_))));
        assert!(matches!(parse_kb("{"), Err(Error::Schema(_))));
    }

    #[test]
    fn validation_diagnostics() {
        let base = parse_kb(&penguin_doc().to_string()).unwrap();

        let mut kb = base.clone();
        kb.abox.push(Assertion {
            concept: Concept::atom("Fly"),
            individual: "tweety".into(),
            relation: Relation::Ge,
            alpha: parse_decimal("0.5").unwrap(),
        });
        let d = validate_kb(&kb);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, DiagnosticKind::UnknownIndividual("tweety".into()));

        let mut kb = base.clone();
        kb.tbox[0].alpha = parse_decimal("1.3").unwrap();
        let d = validate_kb(&kb);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, DiagnosticKind::AlphaRange);

        let mut kb = base.clone();
        kb.tbox[0].relation = Relation::Le;
        assert_eq!(validate_kb(&kb)[0].kind, DiagnosticKind::TboxRelation);

        let mut kb = base.clone();
        kb.inputs = Some(["Bird".to_string()].into());
        assert_eq!(
            validate_kb(&kb)[0].kind,
            DiagnosticKind::InputDistinguished("Bird".into())
        );

        let mut kb = base;
        kb.concepts.insert("top".into());
        assert_eq!(validate_kb(&kb)[0].kind, DiagnosticKind::ReservedName("top".into()));
    }

    #[test]
    fn serialization_round_trips() {
        let kb = parse_kb(&penguin_doc().to_string()).unwrap();
        let text = serialize_kb(&kb);
        assert_eq!(parse_kb(&text).unwrap(), kb);
    }

    #[test]
    fn builder_matches_document() {
        let mut kb = WeightedKb::new(5, Algebra::Goedel, ["Bird", "Fly"]);
        kb.precision = 0;
        kb.add_typicality("Bird", Concept::atom("Fly"), "20").unwrap();
        let text = serialize_kb(&kb);
        assert!(text.contains("\"weight\": 20"));
        assert_eq!(parse_kb(&text).unwrap(), kb);
    }
}
