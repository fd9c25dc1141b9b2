//! The classical baseline: hereditary base-`k` representations, `mc`,
//! classical base change and the original Goodstein process below `ε₀`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{check_base, OrdinalError, Result};
use crate::goodstein::{GoodsteinTrace, TraceStep};
use crate::hierarchy::StepBudget;

/// A hereditary representation `Σ base^{eᵢ}·cᵢ` with strictly decreasing exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    terms: Vec<(Cnf, u64)>,
}

impl Cnf {
    pub fn zero() -> Self {
        Cnf::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(exponent, coefficient)` pairs, largest exponent first.
    pub fn terms(&self) -> &[(Cnf, u64)] {
        &self.terms
    }

    /// Builds from pairs; exponents must strictly decrease and coefficients be positive.
    pub fn from_terms(terms: Vec<(Cnf, u64)>) -> Result<Self> {
        if terms.iter().any(|(_, c)| *c == 0) {
            return Err(OrdinalError::Domain("coefficients must be positive".into()));
        }
        if terms.windows(2).any(|w| cmp_cnf(&w[0].0, &w[1].0).is_le()) {
            return Err(OrdinalError::Domain("exponents must strictly decrease".into()));
        }
        Ok(Cnf { terms })
    }

    /// Renders with `w` in place of the base.
    pub fn to_omega_string(&self) -> String {
        self.to_string()
    }
}

fn cmp_cnf(a: &Cnf, b: &Cnf) -> std::cmp::Ordering {
    for (x, y) in a.terms.iter().zip(&b.terms) {
        let c = cmp_cnf(&x.0, &y.0).then(x.1.cmp(&y.1));
        if c.is_ne() {
            return c;
        }
    }
    a.terms.len().cmp(&b.terms.len())
}

impl PartialOrd for Cnf {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cnf {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        cmp_cnf(self, other)
    }
}

fn is_one(e: &Cnf) -> bool {
    matches!(e.terms.as_slice(), [(z, 1)] if z.is_zero())
}

fn is_atom(e: &Cnf) -> bool {
    match e.terms.as_slice() {
        [(z, _)] if z.is_zero() => true,
        [(x, 1)] => is_one(x),
        _ => false,
    }
}

impl fmt::Display for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str("+")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            if is_one(e) {
                f.write_str("w")?;
            } else if is_atom(e) {
                write!(f, "w^{e}")?;
            } else {
                write!(f, "w^({e})")?;
            }
            if *c > 1 {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

/// The hereditary base-`k` representation of `n`.
pub fn hereditary(n: &BigUint, k: u64) -> Result<Cnf> {
    check_base(k)?;
    let radix = u32::try_from(k).map_err(|_| OrdinalError::BadBase(k))?;
    if radix > 256 {
        return Ok(hereditary_wide(n, k));
    }
    let digits = n.to_radix_le(radix);
    let mut terms = Vec::new();
    for (e, &d) in digits.iter().enumerate().rev() {
        if d != 0 {
            terms.push((hereditary(&BigUint::from(e), k)?, d as u64));
        }
    }
    Ok(Cnf { terms })
}

fn hereditary_wide(n: &BigUint, k: u64) -> Cnf {
    let kb = BigUint::from(k);
    let mut rest = n.clone();
    let mut digits = Vec::new();
    while !rest.is_zero() {
        digits.push((&rest % &kb).to_u64().expect("digit below base"));
        rest /= &kb;
    }
    let mut terms = Vec::new();
    for (e, &d) in digits.iter().enumerate().rev() {
        if d != 0 {
            terms.push((hereditary_wide(&BigUint::from(e), k), d));
        }
    }
    Cnf { terms }
}

/// The largest coefficient occurring anywhere in `e`.
pub fn mc(e: &Cnf) -> u64 {
    e.terms
        .iter()
        .map(|(x, c)| (*c).max(mc(x)))
        .max()
        .unwrap_or(0)
}

/// Evaluates `e` at base `l`.
pub fn classical_eval(e: &Cnf, l: u64) -> Result<BigUint> {
    classical_eval_with_budget(e, l, &StepBudget::default())
}

pub fn classical_eval_with_budget(e: &Cnf, l: u64, budget: &StepBudget) -> Result<BigUint> {
    check_base(l)?;
    let lb = BigUint::from(l);
    let mut total = BigUint::zero();
    for (x, c) in &e.terms {
        let ex = classical_eval_with_budget(x, l, budget)?;
        let too_big = || OrdinalError::BudgetExhausted(format!("value exceeds {} bits", budget.max_bits));
        let ex = ex.to_u64().ok_or_else(too_big)?;
        if ex.saturating_mul(lb.bits() - 1) > budget.max_bits {
            return Err(too_big());
        }
        let p = num_traits::pow(lb.clone(), ex as usize);
        total += p * BigUint::from(*c);
        budget.check_bits(&total)?;
    }
    Ok(total)
}

/// `N[k ↦ l]` by rewriting the hereditary base-`k` form in base `l`.
pub fn classical_base_change(n: &BigUint, k: u64, l: u64) -> Result<BigUint> {
    classical_eval(&hereditary(n, k)?, l)
}

/// The original Goodstein process; a budget overrun ends the trace early
/// and is recorded in [`GoodsteinTrace::stopped`].
pub fn classical_goodstein(
    n: &BigUint,
    k: u64,
    max_steps: u64,
    budget: &StepBudget,
) -> Result<GoodsteinTrace> {
    let start = hereditary(n, k)?;
    let mut trace = GoodsteinTrace {
        seed: n.to_string(),
        base: k,
        ordinal: start.to_string(),
        steps: Vec::new(),
        terminated: n.is_zero(),
        stopped: None,
    };
    let mut value = n.clone();
    let mut form = start;
    for l in 1..=max_steps {
        if value.is_zero() {
            break;
        }
        let b = k + l;
        let next = match classical_eval_with_budget(&form, b, budget) {
            Ok(v) => v - BigUint::one(),
            Err(e) if e.is_budget() => {
                trace.stopped = Some(e.to_string());
                return Ok(trace);
            }
            Err(e) => return Err(e),
        };
        form = hereditary(&next, b)?;
        trace.steps.push(TraceStep {
            l,
            base: b,
            value: next.to_string(),
            ordinal: form.to_string(),
        });
        value = next;
    }
    trace.terminated = value.is_zero();
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn representations() {
        let four = hereditary(&big(4), 2).unwrap();
        assert_eq!(four.to_string(), "w^w");
        assert!(hereditary(&big(0), 7).unwrap().is_zero());
        let h = hereditary(&big(100), 3).unwrap();
        assert_eq!(h.to_string(), "w^(w+1)+w^2*2+1");
        assert_eq!(mc(&h), 2);
        assert_eq!(mc(&Cnf::zero()), 0);
        assert_eq!(mc(&four), 1);
        assert!(matches!(hereditary(&big(3), 1), Err(OrdinalError::BadBase(1))));
    }

    #[test]
    fn evaluation_round_trips() {
        for k in [2u64, 3, 10, 300] {
            for n in (0..2000u64).step_by(7) {
                assert_eq!(classical_eval(&hereditary(&big(n), k).unwrap(), k).unwrap(), big(n));
            }
        }
    }

    #[test]
    fn base_changes() {
        assert_eq!(classical_base_change(&big(4), 2, 3).unwrap(), big(27));
        assert_eq!(classical_base_change(&big(3), 2, 3).unwrap(), big(4));
        assert_eq!(classical_base_change(&big(0), 2, 5).unwrap(), big(0));
    }

    #[test]
    fn goodstein_runs() {
        let b = StepBudget::default();
        let t = classical_goodstein(&big(3), 2, 10, &b).unwrap();
        assert!(t.terminated);
        assert_eq!(t.values_u64().unwrap(), vec![3, 3, 3, 2, 1, 0]);
        assert_eq!(t.ordinal, "w+1");
        let t = classical_goodstein(&big(1), 2, 10, &b).unwrap();
        assert_eq!(t.values_u64().unwrap(), vec![1, 0]);
        let t = classical_goodstein(&big(4), 2, 100, &b).unwrap();
        assert!(!t.terminated && t.stopped.is_none());
        assert_eq!(t.steps.len(), 100);
        assert_eq!(&t.values_u64().unwrap()[..4], &[4, 26, 41, 60]);
    }

    #[test]
    fn ordering_and_validation() {
        let w = hereditary(&big(2), 2).unwrap();
        let two = hereditary(&big(2), 3).unwrap();
        assert!(two < w);
        assert!(Cnf::from_terms(vec![(Cnf::zero(), 1), (w.clone(), 1)]).is_err());
        assert!(Cnf::from_terms(vec![(w, 0)]).is_err());
    }
}
