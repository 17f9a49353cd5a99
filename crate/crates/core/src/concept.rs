//! Boolean concept expressions and typicality queries.
//!
//! Two surface forms exist: the JSON tree used in KB documents
//! (`"A"`, `"top"`, `{"and": [e, e]}`, `{"or": [e, e]}`, `{"neg": e}`) and an
//! infix form used for queries (`a & b | !c`, with `top`/`bot`).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::degree::{format_decimal, parse_decimal, Relation};
use crate::error::{Error, Result};

pub const RESERVED_NAMES: [&str; 2] = ["top", "bot"];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Concept {
    Atom(String),
    Top,
    Bottom,
    And(Box<Concept>, Box<Concept>),
    Or(Box<Concept>, Box<Concept>),
    Neg(Box<Concept>),
}

impl Concept {
    pub fn atom(name: impl Into<String>) -> Self {
        Concept::Atom(name.into())
    }

    pub fn and(a: Concept, b: Concept) -> Self {
        Concept::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Concept, b: Concept) -> Self {
        Concept::Or(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Concept) -> Self {
        Concept::Neg(Box::new(a))
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Concept::Atom(name) => {
                out.insert(name.as_str());
            }
            Concept::Top | Concept::Bottom => {}
            Concept::And(a, b) | Concept::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Concept::Neg(a) => a.collect_atoms(out),
        }
    }

    /// Every sub-expression, children before parents, each listed once.
    pub fn subconcepts(&self) -> Vec<&Concept> {
        let mut out: Vec<&Concept> = Vec::new();
        self.collect_sub(&mut out);
        out
    }

    fn collect_sub<'a>(&'a self, out: &mut Vec<&'a Concept>) {
        match self {
            Concept::And(a, b) | Concept::Or(a, b) => {
                a.collect_sub(out);
                b.collect_sub(out);
            }
            Concept::Neg(a) => a.collect_sub(out),
            _ => {}
        }
        if !out.contains(&self) {
            out.push(self);
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Concept::Atom(name) => Value::String(name.clone()),
            Concept::Top => Value::String("top".into()),
            Concept::Bottom => Value::String("bot".into()),
            Concept::And(a, b) => json!({ "and": [a.to_json(), b.to_json()] }),
            Concept::Or(a, b) => json!({ "or": [a.to_json(), b.to_json()] }),
            Concept::Neg(a) => json!({ "neg": a.to_json() }),
        }
    }

    pub fn from_json(value: &Value) -> Result<Concept> {
        match value {
            Value::String(s) => {
                let s = s.trim();
                if s.starts_with("T(") || s.starts_with("T (") {
                    return Err(Error::TypicalityNesting(s.to_string()));
                }
                match s {
                    "top" => Ok(Concept::Top),
                    "bot" => Ok(Concept::Bottom),
                    _ if is_identifier(s) => Ok(Concept::Atom(s.to_string())),
                    _ => Err(Error::Schema(format!("`{s}` is not a concept name"))),
                }
            }
            Value::Object(map) => {
                if map.len() != 1 {
                    return Err(Error::Schema(format!(
                        "concept object must have exactly one key: {value}"
                    )));
                }
                let (key, inner) = map.iter().next().expect("one entry");
                match key.as_str() {
                    "and" | "or" => {
                        let items = inner
                            .as_array()
                            .ok_or_else(|| Error::Schema(format!("`{key}` expects an array")))?;
                        if items.len() < 2 {
                            return Err(Error::Schema(format!("`{key}` needs at least two operands")));
                        }
                        let mut parts = items.iter().map(Concept::from_json);
                        let first = parts.next().expect("nonempty")?;
                        parts.try_fold(first, |acc, next| {
                            let next = next?;
                            Ok(if key == "and" {
                                Concept::and(acc, next)
                            } else {
                                Concept::or(acc, next)
                            })
                        })
                    }
                    "neg" | "not" => Ok(Concept::not(Concept::from_json(inner)?)),
                    "T" | "typ" | "typicality" => Err(Error::TypicalityNesting(value.to_string())),
                    other => Err(Error::Schema(format!("unknown concept constructor `{other}`"))),
                }
            }
            other => Err(Error::Schema(format!("not a concept expression: {other}"))),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Concept::Or(..) => 1,
            Concept::And(..) => 2,
            _ => 3,
        }
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, c: &Concept, min: u8) -> fmt::Result {
            if c.precedence() < min {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        }
        match self {
            Concept::Atom(name) => f.write_str(name),
            Concept::Top => f.write_str("top"),
            Concept::Bottom => f.write_str("bot"),
            Concept::And(a, b) => {
                child(f, a, 2)?;
                f.write_str(" & ")?;
                child(f, b, 3)
            }
            Concept::Or(a, b) => {
                child(f, a, 1)?;
                f.write_str(" | ")?;
                child(f, b, 2)
            }
            Concept::Neg(a) => {
                f.write_str("!")?;
                child(f, a, 3)
            }
        }
    }
}

impl Serialize for Concept {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Concept {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let value = Value::deserialize(deserializer)?;
        Concept::from_json(&value).map_err(|e| match e {
            Error::Schema(m) => serde::de::Error::custom(m),
            other => serde::de::Error::custom(other),
        })
    }
}

impl FromStr for Concept {
    type Err = Error;

    fn from_str(s: &str) -> Result<Concept> {
        let tokens = tokenize(s)?;
        let mut parser = Parser {
            tokens: &tokens,
            pos: 0,
        };
        let c = parser.expr()?;
        if parser.pos != tokens.len() {
            return Err(Error::QuerySyntax(format!(
                "unexpected {:?} in `{s}`",
                tokens[parser.pos]
            )));
        }
        Ok(c)
    }
}

/// A query `T(subject) ⊑ property θ alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypicalityQuery {
    pub subject: Concept,
    pub property: Concept,
    pub relation: Relation,
    pub alpha: BigRational,
}

impl fmt::Display for TypicalityQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "T({}) -> {} {} {}",
            self.subject,
            self.property,
            self.relation,
            format_decimal(&self.alpha)
        )
    }
}

impl FromStr for TypicalityQuery {
    type Err = Error;

    /// Grammar: `T(<expr>) -> <expr> <rel> <decimal>`; `::` is accepted in place of `->`.
    fn from_str(s: &str) -> Result<TypicalityQuery> {
        let tokens = tokenize(s)?;
        let mut p = Parser {
            tokens: &tokens,
            pos: 0,
        };
        match p.next() {
            Some(Token::Ident(t)) if t == "T" => {}
            _ => return Err(Error::QuerySyntax(format!("query must start with `T(`: `{s}`"))),
        }
        p.expect(&Token::LParen)?;
        let subject = p.expr()?;
        p.expect(&Token::RParen)?;
        match p.next() {
            Some(Token::Arrow) => {}
            other => return Err(Error::QuerySyntax(format!("expected `->`, found {other:?}"))),
        }
        let property = p.expr()?;
        let relation = match p.next() {
            Some(Token::Rel(r)) => *r,
            other => return Err(Error::QuerySyntax(format!("expected a relation, found {other:?}"))),
        };
        let alpha = match p.next() {
            Some(Token::Number(text)) => parse_decimal(text)?,
            other => return Err(Error::QuerySyntax(format!("expected a threshold, found {other:?}"))),
        };
        if p.pos != tokens.len() {
            return Err(Error::QuerySyntax(format!("trailing input in `{s}`")));
        }
        Ok(TypicalityQuery {
            subject,
            property,
            relation,
            alpha,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Ident(String),
    Number(String),
    And,
    Or,
    Not,
    LParen,
    RParen,
    Arrow,
    Rel(Relation),
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        match c {
            _ if c.is_whitespace() => i += 1,
            '&' | '⊓' => {
                out.push(Token::And);
                i += 1;
            }
            '|' | '⊔' => {
                out.push(Token::Or);
                i += 1;
            }
            '!' | '¬' => {
                out.push(Token::Not);
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            '-' if next == Some('>') => {
                out.push(Token::Arrow);
                i += 2;
            }
            ':' if next == Some(':') => {
                out.push(Token::Arrow);
                i += 2;
            }
            '⊑' => {
                out.push(Token::Arrow);
                i += 1;
            }
            '>' | '<' => {
                let rel = match (c, next) {
                    ('>', Some('=')) => Relation::Ge,
                    ('<', Some('=')) => Relation::Le,
                    ('>', _) => Relation::Gt,
                    _ => Relation::Lt,
                };
                i += if next == Some('=') { 2 } else { 1 };
                out.push(Token::Rel(rel));
            }
            '≥' | '≤' => {
                out.push(Token::Rel(if c == '≥' { Relation::Ge } else { Relation::Le }));
                i += 1;
            }
            _ if c.is_ascii_digit() || c == '.' || c == '-' || c == '+' => {
                let start = i;
                i += 1;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                out.push(Token::Number(chars[start..i].iter().collect()));
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(Error::QuerySyntax(format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: &Token) -> Result<()> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            other => Err(Error::QuerySyntax(format!("expected {want:?}, found {other:?}"))),
        }
    }

    fn expr(&mut self) -> Result<Concept> {
        let mut lhs = self.conj()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            lhs = Concept::or(lhs, self.conj()?);
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Concept> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            lhs = Concept::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Concept> {
        match self.next() {
            Some(Token::Not) => Ok(Concept::not(self.unary()?)),
            Some(Token::LParen) => {
                let c = self.expr()?;
                self.expect(&Token::RParen)?;
                Ok(c)
            }
            Some(Token::Ident(name)) => {
                if self.peek() == Some(&Token::LParen) {
                    return Err(if name == "T" {
                        Error::TypicalityNesting("T(..) inside a concept".into())
                    } else {
                        Error::QuerySyntax(format!("`{name}(` is not a concept"))
                    });
                }
                Ok(match name.as_str() {
                    "top" => Concept::Top,
                    "bot" => Concept::Bottom,
                    _ => Concept::Atom(name.clone()),
                })
            }
            other => Err(Error::QuerySyntax(format!("expected a concept, found {other:?}"))),
        }
    }
}
