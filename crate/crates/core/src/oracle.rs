//! A reference implementation of feasibility and entailment that shares no
//! search code with [`crate::entailment`].
//!
//! Every valuation of the space is materialized and filtered. φₙ-coherence is
//! checked by evaluating `φ` at the rational point `w / (n·10^k)` and counting
//! the band boundaries it strictly exceeds, without the threshold table. The
//! logistic is compared through certified enclosures of `exp`, with a
//! floating-point fast path away from boundaries.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{assertion_satisfied, eval_concept, inclusion_degree_at, Valuation};
use crate::concept::{Concept, TypicalityQuery};
use crate::degree::TruthDegree;
use crate::entailment::VerdictMode;
use crate::error::{Error, Result};
use crate::kb::WeightedKb;
use crate::numeric::exp_bounds;
use crate::phi::{axis_scale, band_boundary, PhiConfig};

/// Upper bound on the number of valuations the oracle will materialize.
pub const ORACLE_CAP: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    pub entailed: bool,
    pub mode: VerdictMode,
    pub witness: Option<Valuation>,
    pub typical_degree: Option<TruthDegree>,
}

/// Decides `φ(x) > p` exactly.
pub fn phi_exceeds(phi: &PhiConfig, x: &BigRational, p: &BigRational) -> bool {
    match phi {
        PhiConfig::ClampedLinear { slope, offset } => {
            let y = slope * x + offset;
            let y = y.max(BigRational::zero()).min(BigRational::one());
            &y > p
        }
        PhiConfig::Logistic { gain } => {
            // 1/(1+e^(-gx)) > p  <=>  e^(-gx) < (1-p)/p
            let y = -(gain * x);
            let r = (BigRational::one() - p) / p;
            if y.is_zero() {
                return BigRational::one() < r;
            }
            if let (Some(yf), Some(rf)) = (y.to_f64(), r.to_f64()) {
                let e = yf.exp();
                if e.is_finite() && e > 0.0 && (e - rf).abs() > 1e-9 * rf.max(1.0) {
                    return e < rf;
                }
            }
            // e^y is irrational for rational y != 0, so refinement terminates
            let mut bits = 64;
            loop {
                let (lo, hi) = exp_bounds(&y, bits);
                if hi < r {
                    return true;
                }
                if lo >= r {
                    return false;
                }
                bits *= 2;
            }
        }
    }
}

/// Numerator of `φₙ(w)` computed from `φ` directly.
pub fn phi_n_direct(phi: &PhiConfig, n: u32, precision: u32, w: &BigInt) -> u32 {
    let x = BigRational::new(w.clone(), axis_scale(n, precision));
    (1..=n).filter(|&j| phi_exceeds(phi, &x, &band_boundary(j, n))).count() as u32
}

fn weighted_sum(v: &Valuation, incs: &[crate::kb::WeightedTypicalityInclusion], kb: &WeightedKb) -> Result<BigInt> {
    let mut sum = BigInt::zero();
    for inc in incs {
        let d = eval_concept(&inc.body, v, kb.algebra)?;
        sum += BigInt::from(inc.weight) * BigInt::from(d.numerator());
    }
    Ok(sum)
}

fn is_feasible(v: &Valuation, kb: &WeightedKb, memo: &mut HashMap<BigInt, u32>) -> Result<bool> {
    for ax in &kb.tbox {
        let d = inclusion_degree_at(&ax.lhs, &ax.rhs, v, kb.algebra)?;
        if !ax.relation.degree_holds(d, &ax.alpha) {
            return Ok(false);
        }
    }
    for (ci, incs) in &kb.typicality {
        let w = weighted_sum(v, incs, kb)?;
        let own = eval_concept(&Concept::atom(ci.as_str()), v, kb.algebra)?;
        let level = *memo
            .entry(w)
            .or_insert_with_key(|w| phi_n_direct(&kb.phi, kb.n, kb.precision, w));
        if own.numerator() != level {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All feasible valuations, in lexicographic order of numerators.
pub fn brute_force_feasible(kb: &WeightedKb) -> Result<Vec<Valuation>> {
    let sig = kb.signature();
    let n = kb.n;
    let domains: Vec<Vec<u32>> = sig
        .names()
        .iter()
        .map(|c| if kb.is_binary(c) { vec![0, n] } else { (0..=n).collect() })
        .collect();
    let mut size: u64 = 1;
    for d in &domains {
        size = size.saturating_mul(d.len() as u64);
    }
    if size > ORACLE_CAP {
        return Err(Error::ResourceCap { cap: ORACLE_CAP });
    }
    let mut idx = vec![0usize; domains.len()];
    let mut out = Vec::new();
    let mut memo = HashMap::new();
    loop {
        let degrees: Vec<u32> = idx.iter().zip(&domains).map(|(&i, d)| d[i]).collect();
        let v = Valuation::from_numerators(sig.clone(), degrees)?;
        if is_feasible(&v, kb, &mut memo)? {
            out.push(v);
        }
        // odometer, last position fastest
        let mut p = domains.len();
        loop {
            if p == 0 {
                return Ok(out);
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < domains[p].len() {
                break;
            }
            idx[p] = 0;
        }
    }
}

/// Whether every individual has a feasible valuation meeting all its assertions.
pub fn brute_force_satisfiable(kb: &WeightedKb, feasible: &[Valuation]) -> Result<bool> {
    if feasible.is_empty() {
        return Ok(false);
    }
    for a in &kb.individuals {
        let mut found = false;
        for v in feasible {
            let mut ok = true;
            for asr in kb.abox.iter().filter(|x| &x.individual == a) {
                if !assertion_satisfied(asr, v, kb.algebra)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn brute_force_entails(kb: &WeightedKb, q: &TypicalityQuery) -> Result<OracleVerdict> {
    let feasible = brute_force_feasible(kb)?;
    if !brute_force_satisfiable(kb, &feasible)? {
        return Ok(OracleVerdict {
            entailed: true,
            mode: VerdictMode::VacuousUnsatisfiable,
            witness: None,
            typical_degree: None,
        });
    }
    let mut best = TruthDegree::zero(kb.n);
    for v in &feasible {
        best = best.max(eval_concept(&q.subject, v, kb.algebra)?);
    }
    if best.is_zero() {
        return Ok(OracleVerdict {
            entailed: true,
            mode: VerdictMode::VacuousEmptyTypical,
            witness: None,
            typical_degree: Some(best),
        });
    }
    for v in &feasible {
        if eval_concept(&q.subject, v, kb.algebra)? != best {
            continue;
        }
        let d = eval_concept(&q.property, v, kb.algebra)?;
        if !q.relation.degree_holds(d, &q.alpha) {
            return Ok(OracleVerdict {
                entailed: false,
                mode: VerdictMode::Proper,
                witness: Some(v.clone()),
                typical_degree: Some(best),
            });
        }
    }
    Ok(OracleVerdict {
        entailed: true,
        mode: VerdictMode::Proper,
        witness: None,
        typical_degree: Some(best),
    })
}

/// `φ(w/(n·10^k))` in floating point, for display.
pub fn phi_at(phi: &PhiConfig, n: u32, precision: u32, w: &BigInt) -> f64 {
    let x = BigRational::new(w.clone(), axis_scale(n, precision));
    phi.eval_f64(x.to_f64().unwrap_or(if w.is_negative() { f64::MIN } else { f64::MAX }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi::compute_thresholds;

    #[test]
    fn direct_matches_thresholds_near_boundaries() {
        for phi in ["logistic", "logistic:0.7", "logistic:3", "clamped-linear:0.4:0.5"] {
            let phi: PhiConfig = phi.parse().unwrap();
            for n in 1..=6 {
                for k in 0..=2 {
                    let pn = compute_thresholds(&phi, n, k).unwrap();
                    for t in pn.thresholds() {
                        if let crate::phi::Threshold::Finite(t) = t {
                            for dw in -2..=2 {
                                let w = t + dw;
                                assert_eq!(pn.level(&w), phi_n_direct(&phi, n, k, &w), "{phi} n={n} k={k} w={w}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn logistic_midpoint_is_not_exceeded() {
        let half = BigRational::new(1.into(), 2.into());
        assert!(!phi_exceeds(&PhiConfig::default(), &BigRational::zero(), &half));
        assert!(phi_exceeds(
            &PhiConfig::default(),
            &BigRational::new(1.into(), 1000.into()),
            &half
        ));
    }

    #[test]
    fn oracle_refuses_huge_spaces() {
        let kb = WeightedKb::new(9, crate::algebra::Algebra::Goedel, ["a", "b", "c", "d", "e", "f", "g"]);
        assert!(matches!(brute_force_feasible(&kb), Err(Error::ResourceCap { .. })));
    }
}
