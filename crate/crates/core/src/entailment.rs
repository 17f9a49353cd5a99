//! Feasible valuations, canonical models, and φₙ-coherent entailment.
//!
//! A canonical φₙ-coherent model is represented by the set of all feasible
//! valuations: those satisfying every strict inclusion element-wise and the
//! φₙ-coherence equation for every distinguished concept. A query
//! `T(C) ⊑ D θ α` is entailed when every feasible valuation of maximal positive
//! `C`-degree satisfies `D θ α`.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::algebra::{Algebra, DegreeTest, IndexedConcept, Signature, Valuation};
use crate::concept::TypicalityQuery;
use crate::degree::TruthDegree;
use crate::error::{Error, Result};
use crate::kb::WeightedKb;
use crate::phi::PhiN;

pub const DEFAULT_NODE_CAP: u64 = 100_000_000;
pub const NODE_CAP_ENV: &str = "TYPIK_NODE_CAP";

/// How feasible valuations are produced. All strategies yield the same set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Feedforward propagation when the KB admits it, search otherwise.
    Auto,
    /// Depth-first assignment with constraint checks and forced values.
    Search,
    /// Enumerate input valuations and propagate through the dependency order.
    Feedforward,
    /// Filter every valuation of the full space; no pruning.
    Exhaustive,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub node_cap: u64,
    pub threads: Option<usize>,
    pub strategy: Strategy,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            node_cap: DEFAULT_NODE_CAP,
            threads: None,
            strategy: Strategy::Auto,
        }
    }
}

impl SearchOptions {
    /// Defaults, with the node cap taken from `TYPIK_NODE_CAP` when set.
    pub fn from_env() -> Result<Self> {
        let mut opts = SearchOptions::default();
        if let Ok(text) = std::env::var(NODE_CAP_ENV) {
            opts.node_cap = text
                .trim()
                .parse()
                .map_err(|_| Error::Schema(format!("{NODE_CAP_ENV} must be a non-negative integer, got `{text}`")))?;
        }
        Ok(opts)
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    fn run<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.threads {
            Some(t) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(t.max(1))
                    .build()
                    .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
                Ok(pool.install(f))
            }
            None => Ok(f()),
        }
    }
}

/// The valuations of the canonical model, in canonical order.
#[derive(Clone, Debug)]
pub struct FeasibleSet {
    signature: Arc<Signature>,
    valuations: Vec<Valuation>,
    nodes: u64,
}

impl FeasibleSet {
    pub fn valuations(&self) -> &[Valuation] {
        &self.valuations
    }

    pub fn into_valuations(self) -> Vec<Valuation> {
        self.valuations
    }

    pub fn len(&self) -> usize {
        self.valuations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.valuations.is_empty()
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    /// Candidate assignments examined while building the set.
    pub fn nodes_visited(&self) -> u64 {
        self.nodes
    }
}

struct CompiledAxiom {
    lhs: IndexedConcept,
    rhs: IndexedConcept,
    test: DegreeTest,
    atoms: Vec<usize>,
}

struct CompiledDistinguished {
    index: usize,
    terms: Vec<(BigInt, IndexedConcept)>,
    deps: Vec<usize>,
}

struct CompiledAssertion {
    individual: String,
    concept: IndexedConcept,
    test: DegreeTest,
}

/// A KB with names resolved to indices and thresholds precomputed.
pub(crate) struct Compiled {
    sig: Arc<Signature>,
    n: u32,
    alg: Algebra,
    pn: PhiN,
    axioms: Vec<CompiledAxiom>,
    dist: Vec<CompiledDistinguished>,
    dist_of: Vec<Option<usize>>,
    domains: Vec<Vec<u32>>,
    assertions: Vec<CompiledAssertion>,
}

impl Compiled {
    pub(crate) fn new(kb: &WeightedKb) -> Result<Compiled> {
        let sig = kb.signature();
        let n = kb.n;
        let pn = kb.phi_n()?;
        let axioms = kb
            .tbox
            .iter()
            .map(|ax| {
                let lhs = IndexedConcept::compile(&ax.lhs, &sig)?;
                let rhs = IndexedConcept::compile(&ax.rhs, &sig)?;
                let mut atoms = Vec::new();
                lhs.atoms(&mut atoms);
                rhs.atoms(&mut atoms);
                Ok(CompiledAxiom {
                    lhs,
                    rhs,
                    test: DegreeTest::new(ax.relation, &ax.alpha, n),
                    atoms,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut dist_of = vec![None; sig.len()];
        let dist = kb
            .typicality
            .iter()
            .enumerate()
            .map(|(d, (subject, incs))| {
                let index = sig.require(subject)?;
                dist_of[index] = Some(d);
                let mut deps = Vec::new();
                let terms = incs
                    .iter()
                    .map(|inc| {
                        let body = IndexedConcept::compile(&inc.body, &sig)?;
                        body.atoms(&mut deps);
                        Ok((BigInt::from(inc.weight), body))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(CompiledDistinguished { index, terms, deps })
            })
            .collect::<Result<Vec<_>>>()?;
        let domains = sig
            .names()
            .iter()
            .map(|name| {
                if kb.is_binary(name) {
                    vec![0, n]
                } else {
                    (0..=n).collect()
                }
            })
            .collect();
        let assertions = kb
            .abox
            .iter()
            .map(|a| {
                Ok(CompiledAssertion {
                    individual: a.individual.clone(),
                    concept: IndexedConcept::compile(&a.concept, &sig)?,
                    test: DegreeTest::new(a.relation, &a.alpha, n),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Compiled {
            sig,
            n,
            alg: kb.algebra,
            pn,
            axioms,
            dist,
            dist_of,
            domains,
            assertions,
        })
    }

    fn weight_sum(&self, d: usize, degrees: &[u32]) -> BigInt {
        let mut sum = BigInt::zero();
        for (w, body) in &self.dist[d].terms {
            let v = body.eval(degrees, self.n, self.alg);
            if v != 0 {
                sum += w * v;
            }
        }
        sum
    }

    fn forced_level(&self, d: usize, degrees: &[u32]) -> u32 {
        self.pn.level(&self.weight_sum(d, degrees))
    }

    fn coherent_at(&self, d: usize, degrees: &[u32]) -> bool {
        degrees[self.dist[d].index] == self.forced_level(d, degrees)
    }

    fn axiom_holds(&self, a: usize, degrees: &[u32]) -> bool {
        let ax = &self.axioms[a];
        let lhs = ax.lhs.eval(degrees, self.n, self.alg);
        let rhs = ax.rhs.eval(degrees, self.n, self.alg);
        ax.test.accepts(self.alg.implication(lhs, rhs, self.n))
    }

    fn axioms_hold(&self, degrees: &[u32]) -> bool {
        (0..self.axioms.len()).all(|a| self.axiom_holds(a, degrees))
    }

    fn feasible(&self, degrees: &[u32]) -> bool {
        self.axioms_hold(degrees) && (0..self.dist.len()).all(|d| self.coherent_at(d, degrees))
    }

    fn valuation(&self, degrees: Vec<u32>) -> Valuation {
        Valuation::from_numerators(self.sig.clone(), degrees).expect("degrees from the signature's domains")
    }
}

#[derive(Clone, Copy, Debug)]
enum Check {
    Axiom(usize),
    Coherence(usize),
}

/// Assignment order for the depth-first search.
struct Plan {
    order: Vec<usize>,
    forced: Vec<Option<usize>>,
    checks: Vec<Vec<Check>>,
    root_checks: Vec<Check>,
}

impl Plan {
    fn new(c: &Compiled) -> Plan {
        let m = c.sig.len();
        let mut assigned = vec![false; m];
        let mut order = Vec::with_capacity(m);
        let mut forced = Vec::with_capacity(m);
        while order.len() < m {
            let ready =
                c.dist.iter().enumerate().find(|(_, d)| {
                    !assigned[d.index] && !d.deps.contains(&d.index) && d.deps.iter().all(|&x| assigned[x])
                });
            let (next, force) = if let Some((di, d)) = ready {
                (d.index, Some(di))
            } else if let Some(free) = (0..m).find(|&i| !assigned[i] && c.dist_of[i].is_none()) {
                (free, None)
            } else {
                let d = c
                    .dist
                    .iter()
                    .filter(|d| !assigned[d.index])
                    .min_by_key(|d| d.deps.iter().filter(|&&x| !assigned[x]).count())
                    .expect("an unassigned concept remains");
                (d.index, None)
            };
            assigned[next] = true;
            order.push(next);
            forced.push(force);
        }

        let mut position = vec![0usize; m];
        for (step, &i) in order.iter().enumerate() {
            position[i] = step;
        }
        let mut checks = vec![Vec::new(); m];
        let mut root_checks = Vec::new();
        let mut schedule = |atoms: &mut dyn Iterator<Item = usize>, check: Check| match atoms.map(|a| position[a]).max()
        {
            Some(step) => checks[step].push(check),
            None => root_checks.push(check),
        };
        for (a, ax) in c.axioms.iter().enumerate() {
            schedule(&mut ax.atoms.iter().copied(), Check::Axiom(a));
        }
        for (d, dist) in c.dist.iter().enumerate() {
            if forced.contains(&Some(d)) {
                continue;
            }
            schedule(&mut dist.deps.iter().copied().chain([dist.index]), Check::Coherence(d));
        }
        Plan {
            order,
            forced,
            checks,
            root_checks,
        }
    }
}

fn passes(c: &Compiled, checks: &[Check], degrees: &[u32]) -> bool {
    checks.iter().all(|check| match *check {
        Check::Axiom(a) => c.axiom_holds(a, degrees),
        Check::Coherence(d) => c.coherent_at(d, degrees),
    })
}

struct NodeBudget<'a> {
    counter: &'a AtomicU64,
    cap: u64,
}

impl NodeBudget<'_> {
    fn spend(&self, k: u64) -> Result<()> {
        let before = self.counter.fetch_add(k, AtomicOrdering::Relaxed);
        if before + k > self.cap {
            Err(Error::ResourceCap { cap: self.cap })
        } else {
            Ok(())
        }
    }
}

fn dfs(
    c: &Compiled,
    plan: &Plan,
    step: usize,
    degrees: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
    budget: &NodeBudget<'_>,
) -> Result<()> {
    if step == plan.order.len() {
        out.push(degrees.clone());
        return Ok(());
    }
    let concept = plan.order[step];
    let forced_value;
    let values: &[u32] = match plan.forced[step] {
        Some(d) => {
            forced_value = [c.forced_level(d, degrees)];
            &forced_value
        }
        None => &c.domains[concept],
    };
    for &value in values {
        budget.spend(1)?;
        degrees[concept] = value;
        if passes(c, &plan.checks[step], degrees) {
            dfs(c, plan, step + 1, degrees, out, budget)?;
        }
    }
    degrees[concept] = 0;
    Ok(())
}

fn search(c: &Compiled, budget: &NodeBudget<'_>) -> Result<Vec<Vec<u32>>> {
    let plan = Plan::new(c);
    let m = c.sig.len();
    if !passes(c, &plan.root_checks, &vec![0; m]) {
        return Ok(Vec::new());
    }
    if m == 0 {
        return Ok(vec![Vec::new()]);
    }
    if plan.forced[0].is_some() {
        let mut out = Vec::new();
        dfs(c, &plan, 0, &mut vec![0; m], &mut out, budget)?;
        return Ok(out);
    }
    let first = plan.order[0];
    let branches = c.domains[first]
        .par_iter()
        .map(|&value| {
            budget.spend(1)?;
            let mut degrees = vec![0; m];
            degrees[first] = value;
            let mut out = Vec::new();
            if passes(c, &plan.checks[0], &degrees) {
                dfs(c, &plan, 1, &mut degrees, &mut out, budget)?;
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(branches.into_iter().flatten().collect())
}

/// Input concepts and the topological order of distinguished concepts.
struct FeedforwardPlan {
    inputs: Vec<usize>,
    topo: Vec<usize>,
}

fn feedforward_plan(kb: &WeightedKb, c: &Compiled) -> Result<FeedforwardPlan> {
    let inputs_by_name = kb.input_concepts();
    let mut inputs = Vec::new();
    for (i, name) in c.sig.names().iter().enumerate() {
        let is_input = inputs_by_name.contains(name);
        match (is_input, c.dist_of[i]) {
            (true, None) => inputs.push(i),
            (true, Some(_)) => return Err(Error::NotFeedforward(name.clone())),
            (false, Some(_)) => {}
            (false, None) => return Err(Error::NotFeedforward(name.clone())),
        }
    }
    // Kahn's algorithm over distinguished concepts
    let k = c.dist.len();
    let mut pending: Vec<usize> = c
        .dist
        .iter()
        .map(|d| d.deps.iter().filter(|&&x| c.dist_of[x].is_some()).count())
        .collect();
    let mut dependents: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (d, dist) in c.dist.iter().enumerate() {
        for &x in &dist.deps {
            if let Some(src) = c.dist_of[x] {
                dependents[src].push(d);
            }
        }
    }
    let mut ready: Vec<usize> = (0..k).filter(|&d| pending[d] == 0).collect();
    ready.reverse();
    let mut topo = Vec::with_capacity(k);
    while let Some(d) = ready.pop() {
        topo.push(d);
        for &e in &dependents[d] {
            pending[e] -= 1;
            if pending[e] == 0 {
                ready.push(e);
            }
        }
    }
    if topo.len() < k {
        let stuck = (0..k).find(|d| !topo.contains(d)).expect("some concept is on a cycle");
        return Err(Error::CyclicDependency(c.sig.names()[c.dist[stuck].index].clone()));
    }
    Ok(FeedforwardPlan { inputs, topo })
}

fn propagate(c: &Compiled, plan: &FeedforwardPlan, degrees: &mut [u32]) -> bool {
    for &d in &plan.topo {
        degrees[c.dist[d].index] = c.forced_level(d, degrees);
    }
    c.axioms_hold(degrees)
}

/// Mixed-radix decoding of `index` over the given domains, last position fastest.
fn decode(mut index: u64, positions: &[usize], domains: &[Vec<u32>], degrees: &mut [u32]) {
    for &p in positions.iter().rev() {
        let dom = &domains[p];
        let radix = dom.len() as u64;
        degrees[p] = dom[(index % radix) as usize];
        index /= radix;
    }
}

fn space_size(positions: &[usize], domains: &[Vec<u32>], cap: u64) -> Result<u64> {
    positions.iter().try_fold(1u64, |acc, &p| {
        acc.checked_mul(domains[p].len() as u64)
            .filter(|&s| s <= cap)
            .ok_or(Error::ResourceCap { cap })
    })
}

fn feedforward(c: &Compiled, plan: &FeedforwardPlan, budget: &NodeBudget<'_>) -> Result<Vec<Vec<u32>>> {
    let total = space_size(&plan.inputs, &c.domains, budget.cap)?;
    budget.spend(total)?;
    let m = c.sig.len();
    let found: Vec<Option<Vec<u32>>> = (0..total)
        .into_par_iter()
        .map(|i| {
            let mut degrees = vec![0; m];
            decode(i, &plan.inputs, &c.domains, &mut degrees);
            propagate(c, plan, &mut degrees).then_some(degrees)
        })
        .collect();
    Ok(found.into_iter().flatten().collect())
}

fn exhaustive(c: &Compiled, budget: &NodeBudget<'_>) -> Result<Vec<Vec<u32>>> {
    let m = c.sig.len();
    let positions: Vec<usize> = (0..m).collect();
    let total = space_size(&positions, &c.domains, budget.cap)?;
    budget.spend(total)?;
    let found: Vec<Option<Vec<u32>>> = (0..total)
        .into_par_iter()
        .map(|i| {
            let mut degrees = vec![0; m];
            decode(i, &positions, &c.domains, &mut degrees);
            c.feasible(&degrees).then_some(degrees)
        })
        .collect();
    Ok(found.into_iter().flatten().collect())
}

fn enumerate_compiled(kb: &WeightedKb, c: &Compiled, opts: &SearchOptions) -> Result<FeasibleSet> {
    let counter = AtomicU64::new(0);
    let budget = NodeBudget {
        counter: &counter,
        cap: opts.node_cap,
    };
    let mut rows = opts.run(|| match opts.strategy {
        Strategy::Search => search(c, &budget),
        Strategy::Exhaustive => exhaustive(c, &budget),
        Strategy::Feedforward => feedforward(c, &feedforward_plan(kb, c)?, &budget),
        Strategy::Auto => match feedforward_plan(kb, c) {
            Ok(plan) => feedforward(c, &plan, &budget),
            Err(_) => search(c, &budget),
        },
    })??;
    rows.sort_unstable();
    rows.dedup();
    Ok(FeasibleSet {
        signature: c.sig.clone(),
        valuations: rows.into_iter().map(|d| c.valuation(d)).collect(),
        nodes: counter.load(AtomicOrdering::Relaxed),
    })
}

pub fn enumerate_feasible(kb: &WeightedKb) -> Result<FeasibleSet> {
    enumerate_feasible_with(kb, &SearchOptions::default())
}

pub fn enumerate_feasible_with(kb: &WeightedKb, opts: &SearchOptions) -> Result<FeasibleSet> {
    let c = Compiled::new(kb)?;
    enumerate_compiled(kb, &c, opts)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Propagation {
    Accepted(Valuation),
    /// The propagated valuation violates the strict inclusion at this index.
    Rejected {
        valuation: Valuation,
        axiom: usize,
    },
}

/// Extends an assignment of the input concepts to the unique φₙ-coherent valuation.
pub fn propagate_feedforward(kb: &WeightedKb, inputs: &BTreeMap<String, TruthDegree>) -> Result<Propagation> {
    let c = Compiled::new(kb)?;
    let plan = feedforward_plan(kb, &c)?;
    let mut degrees = vec![0; c.sig.len()];
    for &i in &plan.inputs {
        let name = &c.sig.names()[i];
        let d = inputs
            .get(name)
            .ok_or_else(|| Error::InputMismatch(format!("missing `{name}`")))?;
        if d.resolution() != c.n {
            return Err(Error::InputMismatch(format!(
                "`{name}` has resolution {}",
                d.resolution()
            )));
        }
        degrees[i] = d.numerator();
    }
    if let Some(extra) = inputs
        .keys()
        .find(|k| c.sig.index_of(k).is_none_or(|i| !plan.inputs.contains(&i)))
    {
        return Err(Error::InputMismatch(format!("`{extra}` is not an input concept")));
    }
    for &d in &plan.topo {
        degrees[c.dist[d].index] = c.forced_level(d, &degrees);
    }
    let failed = (0..c.axioms.len()).find(|&a| !c.axiom_holds(a, &degrees));
    let valuation = c.valuation(degrees);
    Ok(match failed {
        None => Propagation::Accepted(valuation),
        Some(axiom) => Propagation::Rejected { valuation, axiom },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerdictMode {
    Proper,
    VacuousEmptyTypical,
    VacuousUnsatisfiable,
}

impl VerdictMode {
    pub fn name(self) -> &'static str {
        match self {
            VerdictMode::Proper => "Proper",
            VerdictMode::VacuousEmptyTypical => "VacuousEmptyTypical",
            VerdictMode::VacuousUnsatisfiable => "VacuousUnsatisfiable",
        }
    }
}

/// A typical subject element whose property degree violates the query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub valuation: Valuation,
    pub property_degree: TruthDegree,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub valuations_checked: u64,
    pub feasible_count: usize,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug)]
pub struct EntailmentVerdict {
    pub entailed: bool,
    pub mode: VerdictMode,
    pub witness: Option<Witness>,
    pub typical_degree: Option<TruthDegree>,
    pub stats: SearchStats,
}

impl EntailmentVerdict {
    /// Equality of everything except the search statistics.
    pub fn same_outcome(&self, other: &EntailmentVerdict) -> bool {
        self.entailed == other.entailed
            && self.mode == other.mode
            && self.witness == other.witness
            && self.typical_degree == other.typical_degree
    }

    pub fn to_json(&self) -> Value {
        let witness = match &self.witness {
            Some(w) => {
                let map: Map<String, Value> = w
                    .valuation
                    .to_map()
                    .into_iter()
                    .map(|(k, d)| (k, Value::String(d.to_string())))
                    .collect();
                Value::Object(map)
            }
            None => Value::Null,
        };
        json!({
            "entailed": self.entailed,
            "mode": self.mode.name(),
            "typical_degree": self.typical_degree.map(|d| d.to_string()),
            "witness": witness,
            "stats": {
                "valuations_checked": self.stats.valuations_checked,
                "feasible_count": self.stats.feasible_count,
                "elapsed_ms": self.stats.elapsed_ms,
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnsatReason {
    NoFeasibleValuation,
    /// No feasible valuation satisfies every assertion about this individual.
    Individual(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Satisfiability {
    Satisfiable { sample: BTreeMap<String, Valuation> },
    Unsatisfiable { reason: UnsatReason },
}

impl Satisfiability {
    pub fn is_satisfiable(&self) -> bool {
        matches!(self, Satisfiability::Satisfiable { .. })
    }

    pub fn to_json(&self) -> Value {
        match self {
            Satisfiability::Satisfiable { sample } => {
                let sample: Map<String, Value> = sample
                    .iter()
                    .map(|(a, v)| {
                        let degrees: Map<String, Value> = v
                            .to_map()
                            .into_iter()
                            .map(|(k, d)| (k, Value::String(d.to_string())))
                            .collect();
                        (a.clone(), Value::Object(degrees))
                    })
                    .collect();
                json!({ "satisfiable": true, "sample": sample })
            }
            Satisfiability::Unsatisfiable { reason } => {
                let reason = match reason {
                    UnsatReason::NoFeasibleValuation => json!({ "kind": "no-feasible-valuation" }),
                    UnsatReason::Individual(a) => json!({ "kind": "individual", "individual": a }),
                };
                json!({ "satisfiable": false, "reason": reason })
            }
        }
    }
}

fn satisfiability_of(kb: &WeightedKb, c: &Compiled, feasible: &FeasibleSet) -> Satisfiability {
    if feasible.is_empty() {
        return Satisfiability::Unsatisfiable {
            reason: UnsatReason::NoFeasibleValuation,
        };
    }
    let mut sample = BTreeMap::new();
    for individual in &kb.individuals {
        let about: Vec<&CompiledAssertion> = c.assertions.iter().filter(|a| &a.individual == individual).collect();
        let found = feasible.valuations().iter().find(|v| {
            about
                .iter()
                .all(|a| a.test.accepts(a.concept.eval(v.numerators(), c.n, c.alg)))
        });
        match found {
            Some(v) => {
                sample.insert(individual.clone(), v.clone());
            }
            None => {
                return Satisfiability::Unsatisfiable {
                    reason: UnsatReason::Individual(individual.clone()),
                };
            }
        }
    }
    Satisfiability::Satisfiable { sample }
}

pub fn check_satisfiable(kb: &WeightedKb) -> Result<Satisfiability> {
    check_satisfiable_with(kb, &SearchOptions::default())
}

pub fn check_satisfiable_with(kb: &WeightedKb, opts: &SearchOptions) -> Result<Satisfiability> {
    let c = Compiled::new(kb)?;
    let feasible = enumerate_compiled(kb, &c, opts)?;
    Ok(satisfiability_of(kb, &c, &feasible))
}

pub fn entails(kb: &WeightedKb, q: &TypicalityQuery) -> Result<EntailmentVerdict> {
    entails_with(kb, q, &SearchOptions::default())
}

pub fn entails_with(kb: &WeightedKb, q: &TypicalityQuery, opts: &SearchOptions) -> Result<EntailmentVerdict> {
    let start = Instant::now();
    let c = Compiled::new(kb)?;
    let subject = IndexedConcept::compile(&q.subject, &c.sig)?;
    let property = IndexedConcept::compile(&q.property, &c.sig)?;
    let test = DegreeTest::new(q.relation, &q.alpha, c.n);
    let feasible = enumerate_compiled(kb, &c, opts)?;

    let mut stats = SearchStats {
        valuations_checked: feasible.nodes_visited(),
        feasible_count: feasible.len(),
        elapsed_ms: 0,
    };
    let finish = |mut v: EntailmentVerdict, stats: &mut SearchStats| {
        stats.elapsed_ms = start.elapsed().as_millis() as u64;
        v.stats = stats.clone();
        v
    };

    if !satisfiability_of(kb, &c, &feasible).is_satisfiable() {
        let v = EntailmentVerdict {
            entailed: true,
            mode: VerdictMode::VacuousUnsatisfiable,
            witness: None,
            typical_degree: None,
            stats: SearchStats::default(),
        };
        return Ok(finish(v, &mut stats));
    }

    let degrees: Vec<u32> = feasible
        .valuations()
        .iter()
        .map(|v| subject.eval(v.numerators(), c.n, c.alg))
        .collect();
    let best = degrees.iter().copied().max().unwrap_or(0);
    let typical_degree = TruthDegree::new(best, c.n);
    if best == 0 {
        let v = EntailmentVerdict {
            entailed: true,
            mode: VerdictMode::VacuousEmptyTypical,
            witness: None,
            typical_degree,
            stats: SearchStats::default(),
        };
        return Ok(finish(v, &mut stats));
    }
    let witness = feasible
        .valuations()
        .iter()
        .zip(&degrees)
        .filter(|(_, &d)| d == best)
        .find_map(|(v, _)| {
            let pd = property.eval(v.numerators(), c.n, c.alg);
            (!test.accepts(pd)).then(|| Witness {
                valuation: v.clone(),
                property_degree: TruthDegree::new(pd, c.n).expect("closed on the chain"),
            })
        });
    let v = EntailmentVerdict {
        entailed: witness.is_none(),
        mode: VerdictMode::Proper,
        witness,
        typical_degree,
        stats: SearchStats::default(),
    };
    Ok(finish(v, &mut stats))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConceptAnnotation {
    pub concept: String,
    pub weight_sum: BigInt,
    pub phi_n: TruthDegree,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedModel {
    pub valuation: Valuation,
    pub annotations: Vec<ConceptAnnotation>,
}

impl AnnotatedModel {
    pub fn to_json(&self) -> Value {
        let degrees: Map<String, Value> = self
            .valuation
            .to_map()
            .into_iter()
            .map(|(k, d)| (k, Value::String(d.to_string())))
            .collect();
        let annotations: Map<String, Value> = self
            .annotations
            .iter()
            .map(|a| {
                (
                    a.concept.clone(),
                    json!({ "weight_sum": a.weight_sum.to_string(), "phi_n": a.phi_n.to_string() }),
                )
            })
            .collect();
        json!({ "degrees": degrees, "distinguished": annotations })
    }
}

/// The first `limit` feasible valuations in canonical order, annotated with
/// their weight sums and φₙ values per distinguished concept.
pub fn list_models(kb: &WeightedKb, limit: usize) -> Result<Vec<AnnotatedModel>> {
    list_models_with(kb, limit, &SearchOptions::default())
}

pub fn list_models_with(kb: &WeightedKb, limit: usize, opts: &SearchOptions) -> Result<Vec<AnnotatedModel>> {
    if limit == 0 {
        return Ok(Vec::new());
    }
    let c = Compiled::new(kb)?;
    let feasible = enumerate_compiled(kb, &c, opts)?;
    Ok(feasible
        .into_valuations()
        .into_iter()
        .take(limit)
        .map(|valuation| {
            let annotations = c
                .dist
                .iter()
                .enumerate()
                .map(|(d, dist)| {
                    let weight_sum = c.weight_sum(d, valuation.numerators());
                    let phi_n = c.pn.apply(&weight_sum);
                    ConceptAnnotation {
                        concept: c.sig.names()[dist.index].clone(),
                        weight_sum,
                        phi_n,
                    }
                })
                .collect();
            AnnotatedModel { valuation, annotations }
        })
        .collect())
}
