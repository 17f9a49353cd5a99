//! Typicality reasoning over weighted fuzzy knowledge bases on a finite truth chain.
//!
//! A knowledge base combines strict graded inclusions, graded assertions and
//! weighted typicality inclusions `(T(C) ⊑ D, w)`. Its canonical φₙ-coherent
//! model is the set of valuations in which every distinguished concept takes the
//! degree its weighted evidence maps to under `φₙ`. Entailment of a typicality
//! query is decided by exhaustive, exact enumeration of that set.

pub mod algebra;
pub mod asp;
pub mod cli;
pub mod concept;
pub mod degree;
pub mod entailment;
pub mod error;
pub mod kb;
pub mod network;
pub mod numeric;
pub mod oracle;
pub mod phi;
pub mod preference;

pub use algebra::{Algebra, Signature, Valuation};
pub use concept::{Concept, TypicalityQuery};
pub use degree::{Relation, TruthDegree};
pub use entailment::{
    check_satisfiable, entails, entails_with, enumerate_feasible, list_models, EntailmentVerdict, SearchOptions,
    Strategy, VerdictMode,
};
pub use error::{Error, Result};
pub use kb::{parse_kb, serialize_kb, validate_kb, WeightedKb};
pub use phi::{compute_thresholds, PhiConfig, PhiN};
