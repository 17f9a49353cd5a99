//! Answer set program text for a KB and a typicality query, plus the
//! concept-wise preference program used to select preferred answer sets.
//!
//! Concept and individual names become ASP constants: the first letter is
//! lowercased, characters outside `[A-Za-z0-9_]` become `_`, names not starting
//! with a letter get a `c_` prefix, and collisions (with each other or with
//! `top`, `bot`, `auxc`, `and`, `or`, `neg`, `not`) get a numeric suffix.
//!
//! Łukasiewicz connectives are encoded arithmetically:
//!
//! ```text
//! eval(and(A,B),X,V) :- concept(and(A,B)), eval(A,X,V1), eval(B,X,V2), V1+V2>n, V=V1+V2-n.
//! eval(and(A,B),X,0) :- concept(and(A,B)), eval(A,X,V1), eval(B,X,V2), V1+V2<=n.
//! eval(or(A,B),X,V) :- concept(or(A,B)), eval(A,X,V1), eval(B,X,V2), V1+V2<n, V=V1+V2.
//! eval(or(A,B),X,n) :- concept(or(A,B)), eval(A,X,V1), eval(B,X,V2), V1+V2>=n.
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::Algebra;
use crate::concept::{Concept, TypicalityQuery};
use crate::degree::{NumeratorRange, Relation};
use crate::error::{Error, Result};
use crate::kb::WeightedKb;
use crate::phi::{PhiN, Threshold};

const RESERVED: [&str; 7] = ["top", "bot", "auxc", "and", "or", "neg", "not"];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EmitOptions {
    /// Define `weight/3` with a single `#sum` aggregate instead of one rule
    /// per distinguished concept.
    pub sum_aggregate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub title: &'static str,
    pub lines: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AspProgram {
    pub sections: Vec<Section>,
}

impl AspProgram {
    pub fn lines(&self) -> impl Iterator<Item = &str> {
        self.sections.iter().flat_map(|s| s.lines.iter().map(String::as_str))
    }

    pub fn section(&self, title: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.title == title)
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "% {}", s.title);
            for line in &s.lines {
                out.push_str(line);
                out.push('\n');
            }
        }
        out
    }
}

/// Mapping from KB names to ASP constants.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AspNames {
    concepts: BTreeMap<String, String>,
    individuals: BTreeMap<String, String>,
}

fn base_constant(name: &str) -> String {
    let mut s: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    match s.chars().next() {
        Some(c) if c.is_ascii_uppercase() => s.replace_range(..1, &c.to_ascii_lowercase().to_string()),
        Some(c) if c.is_ascii_lowercase() => {}
        _ => s.insert_str(0, "c_"),
    }
    s
}

fn assign<'a>(names: impl Iterator<Item = &'a String>) -> BTreeMap<String, String> {
    let mut used: BTreeSet<String> = RESERVED.iter().map(|s| s.to_string()).collect();
    let mut out = BTreeMap::new();
    for name in names {
        let base = base_constant(name);
        let mut candidate = base.clone();
        let mut k = 2;
        while used.contains(&candidate) {
            candidate = format!("{base}_{k}");
            k += 1;
        }
        used.insert(candidate.clone());
        out.insert(name.clone(), candidate);
    }
    out
}

impl AspNames {
    pub fn for_kb(kb: &WeightedKb) -> AspNames {
        AspNames {
            concepts: assign(kb.concepts.iter()),
            individuals: assign(kb.individuals.iter()),
        }
    }

    pub fn concept(&self, name: &str) -> &str {
        &self.concepts[name]
    }

    pub fn individual(&self, name: &str) -> &str {
        &self.individuals[name]
    }

    pub fn term(&self, c: &Concept) -> String {
        match c {
            Concept::Atom(a) => self.concept(a).to_string(),
            Concept::Top => "top".into(),
            Concept::Bottom => "bot".into(),
            Concept::And(a, b) => format!("and({},{})", self.term(a), self.term(b)),
            Concept::Or(a, b) => format!("or({},{})", self.term(a), self.term(b)),
            Concept::Neg(a) => format!("neg({})", self.term(a)),
        }
    }
}

/// Body conditions `W > lower, W <= upper` of the `valphi` rule for `level`,
/// or `None` when the band is empty.
pub fn valphi_band(pn: &PhiN, level: u32) -> Option<(Option<BigInt>, Option<BigInt>)> {
    let ts = pn.thresholds();
    let lower = match level {
        0 => None,
        j => match &ts[j as usize - 1] {
            Threshold::NegInfinity => None,
            Threshold::Finite(k) => Some(k.clone()),
            Threshold::PosInfinity => return None,
        },
    };
    let upper = match ts.get(level as usize) {
        None => None,
        Some(Threshold::PosInfinity) => None,
        Some(Threshold::Finite(k)) => Some(k.clone()),
        Some(Threshold::NegInfinity) => return None,
    };
    if let (Some(lo), Some(hi)) = (&lower, &upper) {
        if lo >= hi {
            return None;
        }
    }
    Some((lower, upper))
}

fn range_of(relation: Relation, alpha: &BigRational, n: u32) -> Option<NumeratorRange> {
    relation.numerator_range(alpha, n)
}

fn axiom_constraints(
    alg: Algebra,
    n: u32,
    lhs: &str,
    rhs: &str,
    relation: Relation,
    alpha: &BigRational,
) -> Result<Vec<String>> {
    if matches!(relation, Relation::Le | Relation::Lt) {
        return Err(Error::Unsupported(format!("strict inclusion relation `{relation}`")));
    }
    let head = format!(":- eval({lhs},X,V1), eval({rhs},X,V2)");
    // for >= and > the admissible implication degrees are lo..=n
    let Some(r) = range_of(relation, alpha, n) else {
        return Ok(vec![format!("{head}.")]);
    };
    if r.lo == 0 {
        return Ok(Vec::new());
    }
    Ok(vec![match alg {
        Algebra::Goedel => format!("{head}, V1>V2, V2 < {}.", r.lo),
        Algebra::Lukasiewicz => format!("{head}, {n}-V1+V2 < {}.", r.lo),
    }])
}

fn value_conditions(range: NumeratorRange, n: u32) -> Vec<String> {
    let mut out = Vec::new();
    if range.lo > 0 {
        out.push(format!("V >= {}", range.lo));
    }
    if range.hi < n {
        out.push(format!("V <= {}", range.hi));
    }
    out
}

pub fn emit_program(kb: &WeightedKb, q: &TypicalityQuery) -> Result<AspProgram> {
    emit_program_with(kb, q, EmitOptions::default())
}

pub fn emit_program_with(kb: &WeightedKb, q: &TypicalityQuery, opts: EmitOptions) -> Result<AspProgram> {
    let sig = kb.signature();
    for atom in q.subject.atoms().into_iter().chain(q.property.atoms()) {
        sig.require(atom)?;
    }
    let n = kb.n;
    let names = &AspNames::for_kb(kb);
    let pn = kb.phi_n()?;
    let mut sections = Vec::new();
    let mut push = |title: &'static str, lines: Vec<String>| {
        if !lines.is_empty() {
            sections.push(Section { title, lines });
        }
    };

    push("truth values", vec![format!("val(0..{n}).")]);
    push(
        "individuals",
        kb.individuals
            .iter()
            .map(|a| format!("nom({}).", names.individual(a)))
            .collect(),
    );
    push(
        "concept names",
        kb.concepts
            .iter()
            .map(|c| format!("cls({}).", names.concept(c)))
            .collect(),
    );
    let binary: Vec<&String> = kb.concepts.iter().filter(|c| kb.is_binary(c)).collect();
    push(
        "binary concept names",
        binary.iter().map(|c| format!("bcls({}).", names.concept(c))).collect(),
    );
    push(
        "distinguished concepts",
        kb.distinguished()
            .map(|c| format!("dcls({}).", names.concept(c)))
            .collect(),
    );

    let mut compound = BTreeSet::new();
    let mut note = |c: &Concept| {
        if matches!(c, Concept::And(..) | Concept::Or(..) | Concept::Neg(..)) {
            compound.insert(names.term(c));
        }
    };
    for ax in &kb.tbox {
        note(&ax.lhs);
        note(&ax.rhs);
    }
    for a in &kb.abox {
        note(&a.concept);
    }
    for inc in kb.typicality.values().flatten() {
        note(&inc.body);
    }
    note(&q.subject);
    note(&q.property);
    let mut interest: Vec<String> = compound.into_iter().map(|t| format!("concept({t}).")).collect();
    interest.extend([
        "concept(A) :- concept(and(A,B)).".to_string(),
        "concept(B) :- concept(and(A,B)).".to_string(),
        "concept(A) :- concept(or(A,B)).".to_string(),
        "concept(B) :- concept(or(A,B)).".to_string(),
        "concept(A) :- concept(neg(A)).".to_string(),
    ]);
    push("concepts of interest", interest);

    // inclusions sharing a body are merged so each (C,D) pair has one weight
    let merged: Vec<(&String, Vec<(String, i64)>)> = kb
        .typicality
        .iter()
        .map(|(ci, incs)| {
            let mut bodies: Vec<(String, i64)> = Vec::new();
            for inc in incs {
                let t = names.term(&inc.body);
                match bodies.iter_mut().find(|(b, _)| *b == t) {
                    Some((_, w)) => *w += inc.weight,
                    None => bodies.push((t, inc.weight)),
                }
            }
            (ci, bodies)
        })
        .collect();
    push(
        "weighted typicality inclusions",
        merged
            .iter()
            .flat_map(|(ci, bodies)| {
                bodies
                    .iter()
                    .map(move |(d, w)| format!("subTyp({},{d},{w}).", names.concept(ci)))
            })
            .collect(),
    );

    let mut choice = Vec::new();
    if binary.is_empty() {
        choice.push("1{inst(X,A,V) : val(V)}1 :- cls(A), nom(X).".to_string());
    } else {
        choice.push("1{inst(X,A,V) : val(V)}1 :- cls(A), nom(X), not bcls(A).".to_string());
        choice.push(format!("1{{inst(X,A,0); inst(X,A,{n})}}1 :- bcls(A), nom(X)."));
    }
    push("valuations", choice);

    let mut eval = vec!["eval(A,X,V) :- cls(A), inst(X,A,V).".to_string()];
    match kb.algebra {
        Algebra::Goedel => eval.extend([
            "eval(and(A,B),X,V) :- concept(and(A,B)), eval(A,X,V1), eval(B,X,V2), min(V1,V2,V).".to_string(),
            "eval(or(A,B),X,V) :- concept(or(A,B)), eval(A,X,V1), eval(B,X,V2), max(V1,V2,V).".to_string(),
        ]),
        Algebra::Lukasiewicz => eval.extend([
            format!("eval(and(A,B),X,V) :- concept(and(A,B)), eval(A,X,V1), eval(B,X,V2), V1+V2>{n}, V=V1+V2-{n}."),
            format!("eval(and(A,B),X,0) :- concept(and(A,B)), eval(A,X,V1), eval(B,X,V2), V1+V2<={n}."),
            format!("eval(or(A,B),X,V) :- concept(or(A,B)), eval(A,X,V1), eval(B,X,V2), V1+V2<{n}, V=V1+V2."),
            format!("eval(or(A,B),X,{n}) :- concept(or(A,B)), eval(A,X,V1), eval(B,X,V2), V1+V2>={n}."),
        ]),
    }
    eval.push(format!("eval(neg(A),X,V) :- concept(neg(A)), eval(A,X,V1), V={n}-V1."));
    eval.push(format!("eval(top,X,{n}) :- nom(X)."));
    eval.push("eval(bot,X,0) :- nom(X).".to_string());
    if kb.algebra == Algebra::Goedel {
        eval.extend([
            "min(V1,V2,V1) :- val(V1), val(V2), V1<V2.".to_string(),
            "min(V1,V2,V1) :- val(V1), val(V2), V1=V2.".to_string(),
            "min(V1,V2,V2) :- val(V1), val(V2), V1>V2.".to_string(),
            "max(V1,V2,V2) :- val(V1), val(V2), V1<V2.".to_string(),
            "max(V1,V2,V1) :- val(V1), val(V2), V1=V2.".to_string(),
            "max(V1,V2,V1) :- val(V1), val(V2), V1>V2.".to_string(),
        ]);
    }
    push("evaluation", eval);

    if !merged.is_empty() {
        let mut weights = Vec::new();
        if opts.sum_aggregate {
            weights.push("weight(X,C,W) :- dcls(C), nom(X), W = #sum{ Wi*V,D : subTyp(C,D,Wi), eval(D,X,V) }.".into());
        } else {
            for (ci, bodies) in &merged {
                let c = names.concept(ci);
                if bodies.is_empty() {
                    weights.push(format!("weight(X,{c},0) :- nom(X)."));
                    continue;
                }
                let sum: Vec<String> = (1..=bodies.len()).map(|h| format!("W{h}*V{h}")).collect();
                let body: Vec<String> = bodies
                    .iter()
                    .enumerate()
                    .map(|(h, (d, _))| format!("subTyp({c},{d},W{i}), eval({d},X,V{i})", i = h + 1))
                    .collect();
                weights.push(format!(
                    "weight(X,{c},W) :- nom(X), W = {}, {}.",
                    sum.join("+"),
                    body.join(", ")
                ));
            }
        }
        weights.push("num(W) :- nom(X), weight(X,C,W), dcls(C).".into());
        for level in 0..=n {
            if let Some((lower, upper)) = valphi_band(&pn, level) {
                let mut conds = vec!["num(W)".to_string()];
                if let Some(lo) = lower {
                    conds.push(format!("W > {lo}"));
                }
                if let Some(hi) = upper {
                    conds.push(format!("W <= {hi}"));
                }
                weights.push(format!("valphi({n},W,{level}) :- {}.", conds.join(", ")));
            }
        }
        push("weights and activation", weights);
        push(
            "coherence",
            vec![format!(
                ":- nom(X), dcls(C), eval(C,X,V), weight(X,C,W), valphi({n},W,V1), V != V1."
            )],
        );
    }

    let mut strict = Vec::new();
    for ax in &kb.tbox {
        strict.extend(axiom_constraints(
            kb.algebra,
            n,
            &names.term(&ax.lhs),
            &names.term(&ax.rhs),
            ax.relation,
            &ax.alpha,
        )?);
    }
    push("strict inclusions", strict);

    push(
        "assertions",
        kb.abox
            .iter()
            .flat_map(|a| {
                let c = names.term(&a.concept);
                let x = names.individual(&a.individual);
                match range_of(a.relation, &a.alpha, n) {
                    None => vec![format!(":- nom({x}).")],
                    Some(r) => {
                        let mut out = Vec::new();
                        if r.lo > 0 {
                            out.push(format!(":- eval({c},{x},V), V < {}.", r.lo));
                        }
                        if r.hi < n {
                            out.push(format!(":- eval({c},{x},V), V > {}.", r.hi));
                        }
                        out
                    }
                }
            })
            .collect(),
    );

    let mut query = vec![
        "nom(auxc).".to_string(),
        format!("auxtc(auxc,{}).", names.term(&q.subject)),
    ];
    let d = names.term(&q.property);
    if let Some(r) = range_of(q.relation, &q.alpha, n) {
        let mut body = vec![format!("eval({d},auxc,V)")];
        body.extend(value_conditions(r, n));
        if body.len() == 1 {
            body.push("val(V)".into());
        }
        query.push(format!("ok :- {}.", body.join(", ")));
    }
    query.push("notok :- not ok.".to_string());
    push("query", query);

    Ok(AspProgram { sections })
}

/// The asprin program preferring answer sets where `auxc` has a higher
/// degree in the query subject. asprin 3 passes atoms to preference programs
/// wrapped as `atom(..)`, and only atoms listed in the preference statement
/// are visible there.
pub fn emit_preference() -> String {
    [
        "#preference(p,cwise) { eval(C,auxc,V) : auxtc(auxc,C), val(V); auxtc(auxc,C) : auxtc(auxc,C) }.",
        "#optimize(p).",
        "",
        "#program preference(cwise).",
        "better(P) :- preference(P,cwise), holds(atom(auxtc(auxc,C))), betterwrt(C).",
        "betterwrt(C) :- holds(atom(eval(C,auxc,V1))), holds'(atom(eval(C,auxc,V2))), V1>V2.",
        "",
    ]
    .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi::compute_thresholds;
    use crate::PhiConfig;

    #[test]
    fn constants() {
        assert_eq!(base_constant("Bird"), "bird");
        assert_eq!(base_constant("fly"), "fly");
        assert_eq!(base_constant("3d-shape"), "c_3d_shape");
        let kb = WeightedKb::new(1, Algebra::Goedel, ["Top", "and", "bird", "Bird"]);
        let names = AspNames::for_kb(&kb);
        assert_eq!(names.concept("Bird"), "bird");
        assert_eq!(names.concept("bird"), "bird_2");
        assert_eq!(names.concept("Top"), "top_2");
        assert_eq!(names.concept("and"), "and_2");
    }

    #[test]
    fn bands_partition_the_axis() {
        let pn = compute_thresholds(&PhiConfig::default(), 5, 0).unwrap();
        for w in -20..=20 {
            let hits: Vec<u32> = (0..=5)
                .filter(|&l| {
                    valphi_band(&pn, l).is_some_and(|(lo, hi)| {
                        let w = BigInt::from(w);
                        lo.is_none_or(|lo| w > lo) && hi.is_none_or(|hi| w <= hi)
                    })
                })
                .collect();
            assert_eq!(hits, [pn.level(&BigInt::from(w))]);
        }
    }

    #[test]
    fn strict_inclusion_shapes() {
        let half = crate::degree::parse_decimal("0.5").unwrap();
        let one = BigRational::from_integer(1.into());
        let zero = BigRational::from_integer(0.into());
        let c = |alg, rel, a: &BigRational| axiom_constraints(alg, 5, "e", "d", rel, a);
        assert_eq!(
            c(Algebra::Goedel, Relation::Ge, &half).unwrap(),
            [":- eval(e,X,V1), eval(d,X,V2), V1>V2, V2 < 3."]
        );
        assert_eq!(
            c(Algebra::Goedel, Relation::Gt, &half).unwrap(),
            [":- eval(e,X,V1), eval(d,X,V2), V1>V2, V2 < 3."]
        );
        assert_eq!(
            c(Algebra::Lukasiewicz, Relation::Ge, &one).unwrap(),
            [":- eval(e,X,V1), eval(d,X,V2), 5-V1+V2 < 5."]
        );
        assert!(c(Algebra::Goedel, Relation::Ge, &zero).unwrap().is_empty());
        assert_eq!(
            c(Algebra::Goedel, Relation::Gt, &one).unwrap(),
            [":- eval(e,X,V1), eval(d,X,V2)."]
        );
        assert!(matches!(
            c(Algebra::Goedel, Relation::Le, &half),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn preference_is_pure() {
        assert_eq!(emit_preference(), emit_preference());
        assert!(emit_preference().contains("holds(atom(eval(C,auxc,V1))), holds'(atom(eval(C,auxc,V2))), V1>V2"));
    }
}
