//! Feedforward networks and their reading as weighted knowledge bases.
//!
//! Each unit becomes a concept name. An edge `h → i` with weight `w` becomes the
//! weighted typicality inclusion `(T(i) ⊑ h, w)`, and a nonzero bias `b` on `i`
//! becomes `(T(i) ⊑ ⊤, b)`, so the weight sum of `i` at an element is the
//! unit's induced local field.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::Deserialize;

use crate::algebra::Algebra;
use crate::concept::{is_identifier, Concept, RESERVED_NAMES};
use crate::degree::parse_scaled;
use crate::error::{Error, Result};
use crate::kb::{DecimalText, WeightedKb, WeightedTypicalityInclusion, DEFAULT_PRECISION};
use crate::oracle::phi_n_direct;
use crate::phi::PhiConfig;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unit {
    pub name: String,
    /// 0 for inputs, `i + 1` for units of the `i`-th layer.
    pub layer: usize,
}

/// A weighted connection; `weight` is scaled by `10^precision`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    pub precision: u32,
    pub inputs: Vec<String>,
    pub units: Vec<Unit>,
    pub edges: Vec<Edge>,
    /// Scaled by `10^precision`; units without an entry have bias 0.
    pub biases: BTreeMap<String, i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct UnitDocument {
    name: String,
    #[serde(default)]
    bias: Option<DecimalText>,
    #[serde(default)]
    weights_in: BTreeMap<String, DecimalText>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LayerDocument {
    units: Vec<UnitDocument>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkDocument {
    #[serde(default)]
    precision: Option<u32>,
    inputs: Vec<String>,
    #[serde(default)]
    layers: Vec<LayerDocument>,
}

impl Network {
    pub fn unit_names(&self) -> impl Iterator<Item = &str> {
        self.units.iter().map(|u| u.name.as_str())
    }

    pub fn is_input(&self, name: &str) -> bool {
        self.inputs.iter().any(|i| i == name)
    }

    pub fn incoming<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges.iter().filter(move |e| e.to == name)
    }

    pub fn bias(&self, name: &str) -> i64 {
        self.biases.get(name).copied().unwrap_or(0)
    }

    /// Checks names, references and acyclicity.
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for u in &self.units {
            if !is_identifier(&u.name) {
                return Err(Error::Network(format!("`{}` is not a valid unit name", u.name)));
            }
            if RESERVED_NAMES.contains(&u.name.as_str()) {
                return Err(Error::Network(format!("unit name `{}` is reserved", u.name)));
            }
            if !seen.insert(u.name.as_str()) {
                return Err(Error::Network(format!("duplicate unit `{}`", u.name)));
            }
        }
        for i in &self.inputs {
            if !self.units.iter().any(|u| &u.name == i && u.layer == 0) {
                return Err(Error::Network(format!("input `{i}` is not an input-layer unit")));
            }
        }
        for e in &self.edges {
            for end in [&e.from, &e.to] {
                if !seen.contains(end.as_str()) {
                    return Err(Error::Network(format!(
                        "edge {} -> {} names unknown unit `{end}`",
                        e.from, e.to
                    )));
                }
            }
            if self.is_input(&e.to) {
                return Err(Error::Network(format!("input `{}` has an incoming edge", e.to)));
            }
        }
        for name in self.biases.keys() {
            if !seen.contains(name.as_str()) {
                return Err(Error::Network(format!("bias for unknown unit `{name}`")));
            }
        }
        self.topological_order().map(|_| ())
    }

    /// Non-input units such that every unit follows all of its predecessors.
    pub fn topological_order(&self) -> Result<Vec<String>> {
        let mut done: BTreeSet<&str> = self.inputs.iter().map(String::as_str).collect();
        let mut pending: Vec<&str> = self.unit_names().filter(|u| !self.is_input(u)).collect();
        let mut order = Vec::with_capacity(pending.len());
        while !pending.is_empty() {
            let before = pending.len();
            pending.retain(|&u| {
                let ready = self.incoming(u).all(|e| done.contains(e.from.as_str()));
                if ready {
                    order.push(u.to_string());
                    done.insert(u);
                }
                !ready
            });
            if pending.len() == before {
                return Err(Error::CyclicDependency(pending[0].to_string()));
            }
        }
        Ok(order)
    }
}

/// Parses and validates a network document.
pub fn load_network(document: &str) -> Result<Network> {
    let doc: NetworkDocument = serde_json::from_str(document)?;
    let precision = doc.precision.unwrap_or(DEFAULT_PRECISION);
    let mut units: Vec<Unit> = doc
        .inputs
        .iter()
        .map(|name| Unit {
            name: name.clone(),
            layer: 0,
        })
        .collect();
    let mut edges = Vec::new();
    let mut biases = BTreeMap::new();
    for (i, layer) in doc.layers.into_iter().enumerate() {
        for u in layer.units {
            if let Some(b) = u.bias {
                let b = parse_scaled(&b.0, precision)?;
                if b != 0 {
                    biases.insert(u.name.clone(), b);
                }
            }
            for (from, w) in u.weights_in {
                edges.push(Edge {
                    from,
                    to: u.name.clone(),
                    weight: parse_scaled(&w.0, precision)?,
                });
            }
            units.push(Unit {
                name: u.name,
                layer: i + 1,
            });
        }
    }
    let net = Network {
        precision,
        inputs: doc.inputs,
        units,
        edges,
        biases,
    };
    net.validate()?;
    Ok(net)
}

/// The weighted KB whose φₙ-coherent models are the network's quantized runs.
pub fn network_to_kb(
    net: &Network,
    n: u32,
    algebra: Algebra,
    phi: PhiConfig,
    binary_inputs: bool,
) -> Result<WeightedKb> {
    if n == 0 {
        return Err(Error::InvalidResolution(0));
    }
    net.validate()?;
    let mut kb = WeightedKb::new(n, algebra, net.unit_names());
    kb.precision = net.precision;
    kb.phi = phi;
    kb.inputs = Some(net.inputs.iter().cloned().collect());
    kb.binary_inputs = binary_inputs;
    for u in net.unit_names().filter(|u| !net.is_input(u)) {
        let mut incs: Vec<WeightedTypicalityInclusion> = net
            .incoming(u)
            .map(|e| WeightedTypicalityInclusion {
                subject: u.to_string(),
                body: Concept::atom(e.from.as_str()),
                weight: e.weight,
            })
            .collect();
        let b = net.bias(u);
        if b != 0 {
            incs.push(WeightedTypicalityInclusion {
                subject: u.to_string(),
                body: Concept::Top,
                weight: b,
            });
        }
        kb.typicality.insert(u.to_string(), incs);
    }
    Ok(kb)
}

/// Runs the network on input numerators over `𝒞ₙ`, rounding every unit's
/// activation to the nearest chain value (boundaries round down).
pub fn forward_pass(
    net: &Network,
    inputs: &BTreeMap<String, u32>,
    n: u32,
    phi: &PhiConfig,
) -> Result<BTreeMap<String, u32>> {
    let mut values = BTreeMap::new();
    for i in &net.inputs {
        let v = *inputs
            .get(i)
            .ok_or_else(|| Error::InputMismatch(format!("missing `{i}`")))?;
        if v > n {
            return Err(Error::InputMismatch(format!("`{i}` = {v} exceeds {n}")));
        }
        values.insert(i.clone(), v);
    }
    for u in net.topological_order()? {
        let mut field = BigInt::from(net.bias(&u)) * n;
        for e in net.incoming(&u) {
            field += BigInt::from(e.weight) * values[&e.from];
        }
        values.insert(u, phi_n_direct(phi, n, net.precision, &field));
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::validate_kb;

    const SMALL: &str = r#"{
        "precision": 3,
        "inputs": ["a", "b"],
        "layers": [
            { "units": [ { "name": "h", "bias": -1.5, "weights_in": { "a": 2, "b": "-0.7" } } ] },
            { "units": [ { "name": "o", "bias": 0, "weights_in": { "h": 3.25 } } ] }
        ]
    }"#;

    #[test]
    fn loads_layers_and_scales_weights() {
        let net = load_network(SMALL).unwrap();
        assert_eq!(net.units.len(), 4);
        assert_eq!(
            net.units[2],
            Unit {
                name: "h".into(),
                layer: 1
            }
        );
        let w: Vec<(&str, i64)> = net.edges.iter().map(|e| (e.from.as_str(), e.weight)).collect();
        assert_eq!(w, [("a", 2000), ("b", -700), ("h", 3250)]);
        assert_eq!(net.bias("h"), -1500);
        assert_eq!(net.bias("o"), 0);
    }

    #[test]
    fn trivial_network() {
        let net = load_network(r#"{"inputs": ["x"]}"#).unwrap();
        assert_eq!(net.units.len(), 1);
        let kb = network_to_kb(&net, 1, Algebra::Goedel, PhiConfig::default(), true).unwrap();
        assert!(kb.typicality.is_empty());
    }

    #[test]
    fn bias_only_unit() {
        let net = load_network(r#"{"inputs": [], "layers": [{"units": [{"name": "o", "bias": 0.5}]}]}"#).unwrap();
        let kb = network_to_kb(&net, 3, Algebra::Goedel, PhiConfig::default(), true).unwrap();
        let incs = &kb.typicality["o"];
        assert_eq!(incs.len(), 1);
        assert_eq!(incs[0].body, Concept::Top);
        assert_eq!(incs[0].weight, 500);
    }

    #[test]
    fn load_errors() {
        let dangling = r#"{"inputs": ["a"], "layers": [{"units": [{"name": "o", "weights_in": {"z": 1}}]}]}"#;
        assert!(matches!(load_network(dangling), Err(Error::Network(_))));
        let cyclic = r#"{"inputs": [], "layers": [
            {"units": [{"name": "p", "weights_in": {"q": 1}}]},
            {"units": [{"name": "q", "weights_in": {"p": 1}}]}]}"#;
        assert!(matches!(load_network(cyclic), Err(Error::CyclicDependency(_))));
        let malformed = r#"{"inputs": ["a"], "layers": [{"units": [{"name": "o", "weights_in": {"a": "1.2.3"}}]}]}"#;
        assert!(load_network(malformed).is_err());
        let reserved = r#"{"inputs": ["top"]}"#;
        assert!(matches!(load_network(reserved), Err(Error::Network(_))));
        let too_precise =
            r#"{"precision": 1, "inputs": ["a"], "layers": [{"units": [{"name": "o", "weights_in": {"a": 0.25}}]}]}"#;
        assert!(matches!(load_network(too_precise), Err(Error::WeightPrecision { .. })));
    }

    #[test]
    fn kb_shape() {
        let net = load_network(SMALL).unwrap();
        let kb = network_to_kb(&net, 5, Algebra::Goedel, PhiConfig::default(), true).unwrap();
        assert_eq!(kb.inclusion_count(), net.edges.len() + net.biases.len());
        assert!(kb.tbox.is_empty());
        assert_eq!(kb.distinguished().collect::<Vec<_>>(), ["h", "o"]);
        assert!(validate_kb(&kb).is_empty());
        assert!(kb.is_binary("a") && !kb.is_binary("h"));
    }

    #[test]
    fn forward_pass_rounds_each_unit() {
        let net = load_network(SMALL).unwrap();
        let phi = PhiConfig::default();
        // a=1,b=0: field(h) = 0.5, φ = 0.622 -> 3/5; field(o) = 3.25·0.6 = 1.95, φ = 0.875 -> 4/5
        let out = forward_pass(&net, &BTreeMap::from([("a".into(), 5), ("b".into(), 0)]), 5, &phi).unwrap();
        assert_eq!(out["h"], 3);
        assert_eq!(out["o"], 4);
    }
}
