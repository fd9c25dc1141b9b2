//! Slow-growing functions `G_k`, predecessor functions `P_k`, the Hardy
//! hierarchy and the Goodstein length function `h_k`.
//!
//! Every evaluation here is non-elementary in general, so each one runs
//! against a [`StepBudget`] and fails with `BudgetExhausted` instead of hanging.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{check_base, OrdinalError, Result};
use crate::fundseq::{fs, support_of};
use crate::term::{holds_f, Principal, Term};

pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;
pub const DEFAULT_MAX_BITS: u64 = 1_000_000;
pub const DEFAULT_MAX_SIZE: u64 = 1_000_000;

/// Caps on recursion steps and on the bit length of computed values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepBudget {
    pub max_steps: u64,
    pub consumed: u64,
    pub max_bits: u64,
    /// Largest intermediate term, in θ-nodes, a descent may build.
    pub max_size: u64,
}

impl Default for StepBudget {
    fn default() -> Self {
        StepBudget::new(DEFAULT_MAX_STEPS, DEFAULT_MAX_BITS)
    }
}

impl StepBudget {
    pub fn new(max_steps: u64, max_bits: u64) -> Self {
        StepBudget {
            max_steps,
            consumed: 0,
            max_bits,
            max_size: DEFAULT_MAX_SIZE,
        }
    }

    pub fn with_max_size(mut self, max_size: u64) -> Self {
        self.max_size = max_size;
        self
    }

    pub fn check_size(&self, t: &Term) -> Result<()> {
        if t.size() > self.max_size {
            return Err(OrdinalError::BudgetExhausted(format!(
                "intermediate term exceeds {} nodes",
                self.max_size
            )));
        }
        Ok(())
    }

    pub fn tick(&mut self) -> Result<()> {
        if self.consumed >= self.max_steps {
            return Err(OrdinalError::BudgetExhausted(format!(
                "more than {} steps",
                self.max_steps
            )));
        }
        self.consumed += 1;
        Ok(())
    }

    pub fn check_bits(&self, v: &BigUint) -> Result<()> {
        if v.bits() > self.max_bits {
            return Err(OrdinalError::BudgetExhausted(format!(
                "value exceeds {} bits",
                self.max_bits
            )));
        }
        Ok(())
    }

    pub fn remaining(&self) -> u64 {
        self.max_steps - self.consumed
    }
}

fn require_countable(a: &Term) -> Result<()> {
    if a.is_countable() {
        Ok(())
    } else {
        Err(OrdinalError::Domain(format!("{a} is not below W1")))
    }
}

/// Recursion limit for [`SlowGrowing::eval_capped`].
const MAX_CAPPED_DEPTH: usize = 1500;

// a lower bound on `min(G_k(p), cap)`, exact when `exact`
#[derive(Clone, Copy)]
struct Bound {
    value: u64,
    exact: bool,
}

enum Plan {
    One,
    Times(Option<Principal>),
    Sum(Term),
    Power(Term),
}

/// Memoizing evaluator for `G_k` on terms below `Ω₁`.
///
/// Values are assembled structurally: `G_k` is additive over the normal form,
/// and additive principal successors `θ₀(η+1)` (or fixed-point successors)
/// evaluate to `k·G_k(support)`. Everything else descends to `α[k]`.
///
/// Below `ε₀` no fixed-point clause can fire, so `G_k(θ₀(η)) = k^{G_k(η)}`
/// there; this shortcut is on by default and [`SlowGrowing::exact`] turns it off.
pub struct SlowGrowing {
    k: u64,
    kbig: BigUint,
    memo: HashMap<Principal, BigUint>,
    capped: HashMap<Principal, u64>,
    cap: u64,
    power_shortcut: bool,
}

impl SlowGrowing {
    pub fn new(k: u64) -> Result<Self> {
        check_base(k)?;
        Ok(SlowGrowing {
            k,
            kbig: BigUint::from(k),
            memo: HashMap::new(),
            capped: HashMap::new(),
            cap: 0,
            power_shortcut: true,
        })
    }

    /// Evaluates by descent only, without the `k^{G(η)}` shortcut.
    pub fn exact(mut self) -> Self {
        self.power_shortcut = false;
        self
    }

    pub fn base(&self) -> u64 {
        self.k
    }

    pub fn eval(&mut self, a: &Term, budget: &mut StepBudget) -> Result<BigUint> {
        require_countable(a)?;
        let mut total = BigUint::zero();
        for s in a.blocks() {
            let v = self.eval_principal(&s.head, budget)?;
            total += v * BigUint::from(s.count);
        }
        budget.check_bits(&total)?;
        Ok(total)
    }

    /// `min(G_k(a), cap)`.
    ///
    /// When the budget runs out below some principal `p`, the evaluation
    /// continues with the bound `G_k(p) ≥ 1` in its place; the answer is
    /// returned whenever these lower bounds already reach `cap`, so terms
    /// whose value is far too large to compute still get a definite answer.
    pub fn eval_capped(&mut self, a: &Term, cap: u64, budget: &mut StepBudget) -> Result<u64> {
        require_countable(a)?;
        if cap != self.cap {
            self.capped.clear();
            self.cap = cap;
        }
        let mut exhausted = None;
        let b = self.bound_sum(a, budget, 0, &mut exhausted)?;
        match exhausted {
            Some(e) if !b.exact && b.value < cap => Err(e),
            _ => Ok(b.value.min(cap)),
        }
    }

    fn bound_sum(
        &mut self,
        t: &Term,
        budget: &mut StepBudget,
        depth: usize,
        exhausted: &mut Option<OrdinalError>,
    ) -> Result<Bound> {
        let mut acc = Bound { value: 0, exact: true };
        for s in t.blocks() {
            let b = self.bound_principal(&s.head, budget, depth, exhausted)?;
            acc.value = acc.value.saturating_add(b.value.saturating_mul(s.count)).min(self.cap);
            acc.exact &= b.exact;
            if acc.value == self.cap {
                return Ok(Bound { value: self.cap, exact: true });
            }
        }
        Ok(acc)
    }

    fn bound_principal(
        &mut self,
        p: &Principal,
        budget: &mut StepBudget,
        depth: usize,
        exhausted: &mut Option<OrdinalError>,
    ) -> Result<Bound> {
        if let Some(&value) = self.capped.get(p) {
            return Ok(Bound { value, exact: true });
        }
        let give_up = |e: OrdinalError, exhausted: &mut Option<OrdinalError>| {
            exhausted.get_or_insert(e);
            Ok(Bound { value: 1, exact: false })
        };
        if depth > MAX_CAPPED_DEPTH {
            return give_up(OrdinalError::BudgetExhausted("descent too deep".into()), exhausted);
        }
        if let Err(e) = budget.tick() {
            return give_up(e, exhausted);
        }
        let cap = self.cap;
        let b = match self.plan(p)? {
            Plan::One => Bound { value: 1.min(cap), exact: true },
            Plan::Times(None) => Bound { value: 0, exact: true },
            Plan::Times(Some(s)) => {
                let b = self.bound_principal(&s, budget, depth + 1, exhausted)?;
                let value = b.value.saturating_mul(self.k).min(cap);
                Bound { value, exact: b.exact || value == cap }
            }
            Plan::Power(t) => {
                let b = self.bound_sum(&t, budget, depth + 1, exhausted)?;
                let mut value = 1u64;
                for _ in 0..b.value {
                    value = value.saturating_mul(self.k);
                    if value >= cap {
                        break;
                    }
                }
                let value = value.min(cap);
                Bound { value, exact: b.exact || value == cap }
            }
            Plan::Sum(t) => {
                if let Err(e) = budget.check_size(&t) {
                    return give_up(e, exhausted);
                }
                self.bound_sum(&t, budget, depth + 1, exhausted)?
            }
        };
        if b.exact {
            self.capped.insert(p.clone(), b.value);
        }
        Ok(b)
    }

    fn combine(&self, t: &Term) -> BigUint {
        t.blocks().iter().fold(BigUint::zero(), |acc, s| {
            acc + &self.memo[&s.head] * BigUint::from(s.count)
        })
    }

    fn plan(&self, p: &Principal) -> Result<Plan> {
        if p.is_one() {
            return Ok(Plan::One);
        }
        if self.power_shortcut && p.below_epsilon0() {
            return Ok(Plan::Power(p.arg().clone()));
        }
        let split = p.split();
        let successor_like = split.delta.is_zero()
            && (split.eta.is_successor() || holds_f(p.index(), &split.delta, &split.eta));
        if successor_like {
            let s = support_of(p)?;
            return Ok(Plan::Times(s.as_principal().cloned()));
        }
        Ok(Plan::Sum(fs(&p.to_term(), &Term::nat(self.k))?))
    }

    fn eval_principal(&mut self, p: &Principal, budget: &mut StepBudget) -> Result<BigUint> {
        if let Some(v) = self.memo.get(p) {
            return Ok(v.clone());
        }
        let mut plans: HashMap<Principal, Plan> = HashMap::new();
        let mut stack = vec![p.clone()];
        while let Some(q) = stack.last().cloned() {
            if self.memo.contains_key(&q) {
                stack.pop();
                continue;
            }
            if !plans.contains_key(&q) {
                budget.tick()?;
                let plan = self.plan(&q)?;
                if let Plan::Sum(t) = &plan {
                    budget.check_size(t)?;
                }
                plans.insert(q.clone(), plan);
            }
            let plan = &plans[&q];
            let missing: Vec<Principal> = match plan {
                Plan::One | Plan::Times(None) => Vec::new(),
                Plan::Times(Some(s)) => (!self.memo.contains_key(s))
                    .then(|| s.clone())
                    .into_iter()
                    .collect(),
                Plan::Sum(t) | Plan::Power(t) => t
                    .blocks()
                    .iter()
                    .filter(|s| !self.memo.contains_key(&s.head))
                    .map(|s| s.head.clone())
                    .collect(),
            };
            if !missing.is_empty() {
                stack.extend(missing);
                continue;
            }
            let v = match plan {
                Plan::One => BigUint::one(),
                Plan::Times(None) => BigUint::zero(),
                Plan::Times(Some(s)) => &self.memo[s] * &self.kbig,
                Plan::Sum(t) => self.combine(t),
                Plan::Power(t) => {
                    let e = self.combine(t);
                    let bits = e
                        .to_u64()
                        .and_then(|e| e.checked_mul(self.kbig.bits() - 1))
                        .filter(|&b| b <= budget.max_bits);
                    if bits.is_none() {
                        return Err(OrdinalError::BudgetExhausted(format!(
                            "value exceeds {} bits",
                            budget.max_bits
                        )));
                    }
                    num_traits::pow(self.kbig.clone(), e.to_usize().expect("bounded"))
                }
            };
            budget.check_bits(&v)?;
            self.memo.insert(q, v);
            stack.pop();
        }
        Ok(self.memo[p].clone())
    }
}

/// `G_k(a)` for `a < Ω₁`.
pub fn slow_growing(k: u64, a: &Term, budget: &mut StepBudget) -> Result<BigUint> {
    SlowGrowing::new(k)?.eval(a, budget)
}

/// `P_k(a)`: descend along `·[k]` to the first successor and drop its last 1.
pub fn pred(k: u64, a: &Term) -> Result<Term> {
    pred_with_budget(k, a, &mut StepBudget::default())
}

/// [`pred`], charging one step per descent.
pub fn pred_with_budget(k: u64, a: &Term, budget: &mut StepBudget) -> Result<Term> {
    check_base(k)?;
    require_countable(a)?;
    let kt = Term::nat(k);
    let mut cur = a.clone();
    loop {
        if cur.is_zero() {
            return Ok(cur);
        }
        if cur.is_successor() {
            return Ok(cur.drop_last());
        }
        budget.tick()?;
        cur = fs(&cur, &kt)?;
        budget.check_size(&cur)?;
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HardyConvention {
    /// `H_λ(x) = H_{λ[x]}(x)`.
    Paper,
    /// `H_λ(x) = H_{λ[x+1]}(x)`, which matches `h_k(α) = H_α(k)` under `(η·ω)[k] = η·k`.
    #[default]
    Shifted,
}

impl FromStr for HardyConvention {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "paper" => Ok(HardyConvention::Paper),
            "shifted" => Ok(HardyConvention::Shifted),
            other => Err(format!("unknown convention {other:?}")),
        }
    }
}

impl fmt::Display for HardyConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HardyConvention::Paper => "paper",
            HardyConvention::Shifted => "shifted",
        })
    }
}

/// `H_a(x)`.
pub fn hardy(
    a: &Term,
    x: &BigUint,
    convention: HardyConvention,
    budget: &mut StepBudget,
) -> Result<BigUint> {
    require_countable(a)?;
    let mut cur = a.clone();
    let mut x = x.clone();
    loop {
        budget.tick()?;
        if cur.is_zero() {
            return Ok(x);
        }
        if cur.is_successor() {
            cur = cur.drop_last();
            x += 1u32;
            budget.check_bits(&x)?;
            continue;
        }
        let n = match convention {
            HardyConvention::Paper => x.clone(),
            HardyConvention::Shifted => &x + 1u32,
        };
        let n = n
            .to_u64()
            .ok_or_else(|| OrdinalError::BudgetExhausted("index exceeds 64 bits".into()))?;
        cur = fs(&cur, &Term::nat(n))?;
    }
}

/// `h_k(a) = k + min{l | P_{k+l}…P_{k+1} a = 0}`.
pub fn h_k(k: u64, a: &Term, budget: &mut StepBudget) -> Result<BigUint> {
    check_base(k)?;
    require_countable(a)?;
    let mut cur = a.clone();
    let mut l: u64 = 0;
    while !cur.is_zero() {
        budget.tick()?;
        l += 1;
        cur = pred_with_budget(k + l, &cur, budget)?;
    }
    Ok(BigUint::from(k) + BigUint::from(l))
}

/// `θ₀(θ₁(…θ_n(0)…))`.
pub fn takeuti_approx(n: u32) -> Term {
    let mut t = Term::zero();
    for i in (0..=n).rev() {
        t = Principal::new_unchecked(i, t).to_term();
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn t(s: &str) -> Term {
        parse(s).unwrap()
    }

    fn g(k: u64, s: &str) -> BigUint {
        slow_growing(k, &t(s), &mut StepBudget::default()).unwrap()
    }

    // literal count-down recursion, independent of the structural evaluator
    fn naive_g(k: u64, a: &Term, cap: u64) -> Option<u64> {
        let kt = Term::nat(k);
        let mut cur = a.clone();
        let mut v = 0u64;
        for _ in 0..cap {
            if cur.is_zero() {
                return Some(v);
            }
            if cur.is_successor() {
                v += 1;
                cur = cur.drop_last();
            } else {
                cur = fs(&cur, &kt).unwrap();
            }
        }
        None
    }

    #[test]
    fn slow_growing_values() {
        assert_eq!(g(2, "t0(e0)"), BigUint::from(8u32));
        assert_eq!(g(2, "t0(w+1)"), BigUint::from(8u32));
        assert_eq!(g(2, "e0"), BigUint::from(4u32));
        assert_eq!(g(3, "e0"), BigUint::from(7625597484987u64));
        assert_eq!(g(2, "0"), BigUint::zero());
        assert_eq!(g(2, "e0+w"), BigUint::from(6u32));
    }

    #[test]
    fn slow_growing_domain_and_budget() {
        assert!(matches!(
            slow_growing(2, &Term::big_omega(1), &mut StepBudget::default()),
            Err(OrdinalError::Domain(_))
        ));
        assert!(matches!(
            slow_growing(1, &Term::one(), &mut StepBudget::default()),
            Err(OrdinalError::BadBase(1))
        ));
        let r = slow_growing(4, &Term::epsilon0(), &mut StepBudget::new(1_000_000, 1000));
        assert!(matches!(r, Err(OrdinalError::BudgetExhausted(_))));
    }

    #[test]
    fn structural_matches_naive() {
        for s in ["w", "w+3", "t0(w)", "t0(w+1)+w", "e0", "t0(e0)", "t0(2)+t0(1)+1", "t0(t0(w))"] {
            for k in 2..=3 {
                let a = t(s);
                if let Some(v) = naive_g(k, &a, 20_000) {
                    assert_eq!(g(k, s), BigUint::from(v), "G_{k}({s})");
                }
            }
        }
    }

    #[test]
    fn power_shortcut_matches_descent() {
        for s in ["t0(w)", "t0(t0(3)+w+2)", "t0(t0(t0(2)))+t0(w+1)", "t0(e0)", "e0+t0(t0(w)+1)"] {
            for k in 2..=3 {
                let mut b = StepBudget::default();
                let fast = SlowGrowing::new(k).unwrap().eval(&t(s), &mut b).unwrap();
                let slow = SlowGrowing::new(k).unwrap().exact().eval(&t(s), &mut b).unwrap();
                assert_eq!(fast, slow, "G_{k}({s})");
            }
        }
    }

    #[test]
    fn capped_evaluation() {
        let mut g = SlowGrowing::new(2).unwrap();
        let mut b = StepBudget::default();
        for s in ["0", "w+3", "e0", "t0(e0)", "e0+w", "t0(t0(w))"] {
            let exact = g.eval(&t(s), &mut b).unwrap();
            for cap in [1u64, 5, 50, 1 << 40] {
                let want = exact.to_u64().map_or(cap, |v| v.min(cap));
                assert_eq!(g.eval_capped(&t(s), cap, &mut b).unwrap(), want, "{s} cap {cap}");
            }
        }
        let mut tight = StepBudget::new(2_000, 64).with_max_size(100);
        assert_eq!(g.eval_capped(&t("t0(t1(0)+1)"), 50, &mut tight).unwrap(), 50);
        assert!(g.eval_capped(&t("t0(t1(0)+1)"), 1 << 60, &mut StepBudget::new(50, 64)).is_err());
    }

    #[test]
    fn predecessor_values() {
        assert_eq!(pred(3, &Term::omega()).unwrap(), Term::nat(2));
        assert_eq!(pred(2, &t("t0(2)")).unwrap(), t("w+1"));
        assert_eq!(pred(7, &Term::zero()).unwrap(), Term::zero());
        assert!(pred(2, &Term::big_omega(1)).is_err());
    }

    #[test]
    fn hardy_values() {
        let mut b = StepBudget::default();
        let two = BigUint::from(2u32);
        assert_eq!(hardy(&Term::omega(), &two, HardyConvention::Paper, &mut b).unwrap(), BigUint::from(4u32));
        assert_eq!(hardy(&Term::omega(), &two, HardyConvention::Shifted, &mut b).unwrap(), BigUint::from(5u32));
        assert_eq!(hardy(&Term::epsilon0(), &two, HardyConvention::Paper, &mut b).unwrap(), BigUint::from(8u32));
        assert_eq!(
            hardy(&Term::zero(), &BigUint::from(9u32), HardyConvention::Paper, &mut b).unwrap(),
            BigUint::from(9u32)
        );
    }

    #[test]
    fn goodstein_length_values() {
        let mut b = StepBudget::default();
        assert_eq!(h_k(2, &Term::omega(), &mut b).unwrap(), BigUint::from(5u32));
        assert_eq!(h_k(2, &t("w+1"), &mut b).unwrap(), BigUint::from(7u32));
        assert_eq!(h_k(9, &Term::zero(), &mut b).unwrap(), BigUint::from(9u32));
    }

    #[test]
    fn takeuti_terms() {
        assert_eq!(takeuti_approx(0), Term::one());
        assert_eq!(takeuti_approx(1), Term::epsilon0());
        assert_eq!(takeuti_approx(2), t("t0(t1(W2))"));
    }
}
