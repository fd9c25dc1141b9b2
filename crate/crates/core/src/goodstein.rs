//! The inverse `G_k⁻¹` on `T°[k]`, base change of naturals, and the
//! generalized Goodstein process with a numeric and an ordinal execution path.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_base, OrdinalError, Result};
use crate::hierarchy::{pred_with_budget, SlowGrowing, StepBudget};
use crate::inversion::{imc, invert_all};
use crate::parse::format_term;
use crate::term::{add, Principal, Summand, Term};

/// Default bound on promotion steps inside a single successor computation.
pub const DEFAULT_PROMOTE_CAP: usize = 10_000;

/// Replaces `b` by the largest `β` with `β[k] = b` until `imc(b) < k`.
fn promote(mut b: Term, k: u64, cap: usize) -> Result<Term> {
    let kt = Term::nat(k);
    for _ in 0..cap {
        if imc(&b)? < k {
            return Ok(b);
        }
        let next = invert_all(&b)?
            .into_iter()
            .filter(|c| c.zeta == kt)
            .map(|c| c.beta)
            .max();
        b = next.ok_or_else(|| {
            OrdinalError::PromotionFailure(format!(
                "{b} has imc >= {k} but is not of the form beta[{k}]"
            ))
        })?;
    }
    Err(OrdinalError::PromotionFailure(format!(
        "no member of T°[{k}] reached after {cap} promotions"
    )))
}

/// Like [`promote`], but works on the shortest tail of `b`: the prefix in
/// front of it is a member of `T°[k]` and is only consulted when a witness
/// would not fit behind it.
fn promote_tail(b: Term, k: u64, cap: usize) -> Result<Term> {
    let kt = Term::nat(k);
    let mut prefix: Vec<Summand> = b.blocks().to_vec();
    let Some(last) = prefix.pop() else {
        return Ok(b);
    };
    let mut tail = Term::zero().push(&last.head, last.count);
    for _ in 0..cap {
        while let Some(p) = prefix.last() {
            if tail.leading().is_some_and(|l| p.head <= *l) {
                let p = prefix.pop().expect("nonempty");
                tail = add(&Term::zero().push(&p.head, p.count), &tail);
            } else {
                break;
            }
        }
        if imc(&tail)? < k {
            let mut t = Term::from_blocks(prefix);
            for s in tail.blocks() {
                t = t.push(&s.head, s.count);
            }
            return Ok(t);
        }
        let bound = prefix.last().map(|s| s.head.clone());
        let best = invert_all(&tail)?
            .into_iter()
            .filter(|c| c.zeta == kt)
            .map(|c| c.beta)
            .filter(|beta| bound.as_ref().is_none_or(|l| beta.leading() <= Some(l)))
            .max();
        match (best, prefix.pop()) {
            (Some(beta), popped) => {
                prefix.extend(popped);
                tail = beta;
            }
            (None, Some(p)) => tail = add(&Term::zero().push(&p.head, p.count), &tail),
            (None, None) => {
                return Err(OrdinalError::PromotionFailure(format!(
                    "{tail} has imc >= {k} but is not of the form beta[{k}]"
                )))
            }
        }
    }
    Err(OrdinalError::PromotionFailure(format!(
        "no member of T°[{k}] reached after {cap} promotions"
    )))
}

/// The least member of `T°[k]` above `a`.
pub fn succ_in_quotient(a: &Term, k: u64) -> Result<Term> {
    check_base(k)?;
    if !crate::inversion::member_tk(a, k)? {
        return Err(OrdinalError::Domain(format!("{a} is not in T°[{k}]")));
    }
    promote(add(a, &Term::one()), k, DEFAULT_PROMOTE_CAP)
}

/// `T°[k]` together with the principals `q_e` satisfying `G_k(q_e) = k^e`.
///
/// Every member is `Σ q_e·c_e` with `c_e < k`, so the base-`k` digits of `N`
/// name `G_k⁻¹(N)` directly; each rung is the successor of the largest member
/// below `k^e`.
pub struct Quotient {
    k: u64,
    ladder: Vec<Term>,
    eval: SlowGrowing,
    promote_cap: usize,
}

impl Quotient {
    pub fn new(k: u64) -> Result<Self> {
        check_base(k)?;
        Ok(Quotient {
            k,
            ladder: vec![Term::one()],
            eval: SlowGrowing::new(k)?,
            promote_cap: DEFAULT_PROMOTE_CAP,
        })
    }

    pub fn with_promote_cap(mut self, cap: usize) -> Self {
        self.promote_cap = cap.max(1);
        self
    }

    pub fn base(&self) -> u64 {
        self.k
    }

    /// `Σ_{j<e} q_j·(k-1)`, the largest member below `k^e`.
    fn top_below(&self, e: usize) -> Term {
        let mut t = Term::zero();
        for q in self.ladder[..e].iter().rev() {
            let p = q.as_principal().expect("rungs are principal");
            t = t.push(p, self.k - 1);
        }
        t
    }

    /// The rung `q_e`.
    ///
    /// A rung is the unique principal member with value `k^e`, so any
    /// candidate passing [`Quotient::verify_rung`] is correct. The first try is
    /// `θ₀(G_k⁻¹(e))`, promoted if needed; the fallback is the successor of
    /// the largest member below `k^e`.
    pub fn rung(&mut self, e: usize, budget: &mut StepBudget) -> Result<Term> {
        while self.ladder.len() <= e {
            budget.tick()?;
            let n = self.ladder.len();
            let want = BigUint::from(self.k).pow(n as u32);
            budget.check_bits(&want)?;
            let next = match self.guess_rung(n, &want, budget) {
                Ok(Some(t)) => t,
                Err(e) if e.is_budget() => return Err(e),
                _ => self.climb_rung(n, &want, budget)?,
            };
            self.ladder.push(next);
        }
        Ok(self.ladder[e].clone())
    }

    fn guess_rung(&mut self, n: usize, want: &BigUint, budget: &mut StepBudget) -> Result<Option<Term>> {
        let x = self.g_inverse(&BigUint::from(n), budget)?;
        let t = Principal::new_unchecked(0, x).to_term();
        let t = if imc(&t)? < self.k {
            t
        } else {
            promote(t, self.k, self.promote_cap)?
        };
        Ok(self.verify_rung(&t, want, budget)?.then_some(t))
    }

    fn climb_rung(&mut self, n: usize, want: &BigUint, budget: &mut StepBudget) -> Result<Term> {
        let start = add(&self.top_below(n), &Term::one());
        let fast = promote_tail(start.clone(), self.k, self.promote_cap)
            .and_then(|t| self.verify_rung(&t, want, budget).map(|ok| ok.then_some(t)));
        match fast {
            Ok(Some(t)) => return Ok(t),
            Err(e) if e.is_budget() => return Err(e),
            _ => {}
        }
        let t = promote(start, self.k, self.promote_cap)?;
        if !self.verify_rung(&t, want, budget)? {
            return Err(OrdinalError::PromotionFailure(format!(
                "rung {n} at base {} is {t}, which does not evaluate to {want}",
                self.k
            )));
        }
        Ok(t)
    }

    fn verify_rung(&mut self, t: &Term, want: &BigUint, budget: &mut StepBudget) -> Result<bool> {
        Ok(t.is_principal() && imc(t)? < self.k && self.eval.eval(t, budget)? == *want)
    }

    /// `G_k⁻¹(n)`, verified by evaluating `G_k` on the result.
    pub fn g_inverse(&mut self, n: &BigUint, budget: &mut StepBudget) -> Result<Term> {
        budget.check_bits(n)?;
        let digits = n.to_radix_le(self.k as u32);
        let mut t = Term::zero();
        for (e, &d) in digits.iter().enumerate().rev() {
            if d == 0 {
                continue;
            }
            let q = self.rung(e, budget)?;
            t = t.push(q.as_principal().expect("rungs are principal"), d as u64);
        }
        let back = self.eval.eval(&t, budget)?;
        if back != *n {
            return Err(OrdinalError::PromotionFailure(format!(
                "G_{}({t}) = {back}, expected {n}",
                self.k
            )));
        }
        Ok(t)
    }

    /// `G_k` on arbitrary countable terms, sharing this quotient's memo.
    pub fn slow_growing(&mut self, a: &Term, budget: &mut StepBudget) -> Result<BigUint> {
        self.eval.eval(a, budget)
    }

    /// The first `count` members of `T°[k]` in increasing order, by successor iteration.
    pub fn prefix(&self, count: usize) -> Result<Vec<Term>> {
        let mut out = Vec::with_capacity(count);
        let mut cur = Term::zero();
        for i in 0..count {
            if i > 0 {
                cur = promote(add(&cur, &Term::one()), self.k, self.promote_cap)?;
            }
            out.push(cur.clone());
        }
        Ok(out)
    }
}

/// `G_k⁻¹(n)` with the default budget.
pub fn g_inverse(n: &BigUint, k: u64) -> Result<Term> {
    Quotient::new(k)?.g_inverse(n, &mut StepBudget::default())
}

/// `G_k⁻¹(n)` as the `n`-fold successor of zero; linear in `n`.
pub fn g_inverse_by_succ(n: u64, k: u64) -> Result<Term> {
    check_base(k)?;
    let mut cur = Term::zero();
    for _ in 0..n {
        cur = promote(add(&cur, &Term::one()), k, DEFAULT_PROMOTE_CAP)?;
    }
    Ok(cur)
}

/// `N[k ↦ ω]`.
pub fn base_change_to_omega(n: &BigUint, k: u64) -> Result<Term> {
    g_inverse(n, k)
}

/// `N[k ↦ l] = G_l(G_k⁻¹(N))`.
pub fn base_change(n: &BigUint, k: u64, l: u64, budget: &mut StepBudget) -> Result<BigUint> {
    check_base(k)?;
    if l <= k {
        return Err(OrdinalError::Domain(format!("target base {l} must exceed {k}")));
    }
    let a = Quotient::new(k)?.g_inverse(n, budget)?;
    SlowGrowing::new(l)?.eval(&a, budget)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub l: u64,
    pub base: u64,
    pub value: String,
    pub ordinal: String,
}

/// A Goodstein run: the seed, its base, its ordinal, and one record per step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodsteinTrace {
    pub seed: String,
    pub base: u64,
    pub ordinal: String,
    pub steps: Vec<TraceStep>,
    pub terminated: bool,
    /// Why the run stopped early, when a budget ran out.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stopped: Option<String>,
}

impl GoodsteinTrace {
    fn new(seed: &BigUint, base: u64, ordinal: String) -> Self {
        GoodsteinTrace {
            seed: seed.to_string(),
            base,
            ordinal,
            steps: Vec::new(),
            terminated: seed.is_zero(),
            stopped: None,
        }
    }

    /// `N₀, N₁, …` as decimal strings.
    pub fn values(&self) -> Vec<String> {
        std::iter::once(self.seed.clone())
            .chain(self.steps.iter().map(|s| s.value.clone()))
            .collect()
    }

    /// The values as machine integers, if every one fits.
    pub fn values_u64(&self) -> Option<Vec<u64>> {
        self.values()
            .iter()
            .map(|v| v.parse::<BigUint>().ok().and_then(|b| b.to_u64()))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("seed {} base {} ordinal {}\n", self.seed, self.base, self.ordinal);
        for s in &self.steps {
            out.push_str(&format!("{}\t{}\t{}\t{}\n", s.l, s.base, s.value, s.ordinal));
        }
        match (&self.stopped, self.terminated) {
            (Some(why), _) => out.push_str(&format!("stopped: {why}\n")),
            (None, true) => out.push_str("terminated\n"),
            (None, false) => out.push_str("not terminated\n"),
        }
        out
    }
}

/// Per-base quotients reused across the steps of a run.
#[derive(Default)]
struct Quotients(HashMap<u64, Quotient>);

impl Quotients {
    fn get(&mut self, k: u64) -> Result<&mut Quotient> {
        if let std::collections::hash_map::Entry::Vacant(e) = self.0.entry(k) {
            e.insert(Quotient::new(k)?);
        }
        Ok(self.0.get_mut(&k).expect("inserted"))
    }
}

/// Runs at most `max_steps` steps of the process from `n` at base `k` and
/// returns the trace so far together with the error that stopped it, if any.
pub fn run_partial(
    n: &BigUint,
    k: u64,
    max_steps: u64,
    budget: &mut StepBudget,
) -> (GoodsteinTrace, Option<OrdinalError>) {
    let mut qs = Quotients::default();
    let start = match check_base(k).and_then(|_| qs.get(k)?.g_inverse(n, budget)) {
        Ok(a) => a,
        Err(e) => {
            let mut t = GoodsteinTrace::new(n, k, String::new());
            t.terminated = false;
            if e.is_budget() {
                t.stopped = Some(e.to_string());
            }
            return (t, Some(e));
        }
    };
    let mut trace = GoodsteinTrace::new(n, k, format_term(&start, false));
    let mut alpha = start;
    let mut value = n.clone();
    for l in 1..=max_steps {
        if value.is_zero() {
            break;
        }
        match goodstein_step(&mut qs, &alpha, &value, k, l, budget) {
            Ok((a, v)) => {
                trace.steps.push(TraceStep {
                    l,
                    base: k + l,
                    value: v.to_string(),
                    ordinal: format_term(&a, false),
                });
                alpha = a;
                value = v;
            }
            Err(e) => {
                if e.is_budget() {
                    trace.stopped = Some(e.to_string());
                }
                return (trace, Some(e));
            }
        }
    }
    trace.terminated = value.is_zero();
    (trace, None)
}

fn goodstein_step(
    qs: &mut Quotients,
    alpha: &Term,
    value: &BigUint,
    k: u64,
    l: u64,
    budget: &mut StepBudget,
) -> Result<(Term, BigUint)> {
    let b = k + l;
    let prev = qs.get(b - 1)?.g_inverse(value, budget)?;
    let numeric = qs.get(b)?.slow_growing(&prev, budget)? - BigUint::one();
    let next = pred_with_budget(b, alpha, budget)?;
    if next >= *alpha {
        return Err(OrdinalError::Domain(format!(
            "ordinal did not decrease at step {l}: {alpha} to {next}"
        )));
    }
    let ordinal_value = qs.get(b)?.slow_growing(&next, budget)?;
    if numeric != ordinal_value {
        return Err(OrdinalError::PathMismatch {
            step: l,
            numeric: numeric.to_string(),
            ordinal: ordinal_value.to_string(),
        });
    }
    Ok((next, numeric))
}

/// Runs the process, failing on the first error.
pub fn run(n: &BigUint, k: u64, max_steps: u64, budget: &mut StepBudget) -> Result<GoodsteinTrace> {
    match run_partial(n, k, max_steps, budget) {
        (t, None) => Ok(t),
        (_, Some(e)) => Err(e),
    }
}

/// Convenience for small seeds.
pub fn run_u64(n: u64, k: u64, max_steps: u64) -> Result<GoodsteinTrace> {
    run(&BigUint::from(n), k, max_steps, &mut StepBudget::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::slow_growing;
    use crate::parse::parse;

    fn t(s: &str) -> Term {
        parse(s).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn successor_examples() {
        assert_eq!(succ_in_quotient(&t("w+1"), 2).unwrap(), Term::epsilon0());
        assert_eq!(succ_in_quotient(&Term::zero(), 2).unwrap(), Term::one());
        assert_eq!(succ_in_quotient(&t("e0+w+1"), 2).unwrap(), t("t0(e0)"));
        assert!(matches!(
            succ_in_quotient(&t("w+2"), 2),
            Err(OrdinalError::Domain(_))
        ));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(g_inverse(&big(4), 2).unwrap(), Term::epsilon0());
        assert_eq!(g_inverse(&big(8), 2).unwrap(), t("t0(e0)"));
        assert_eq!(g_inverse(&big(0), 7).unwrap(), Term::zero());
        assert_eq!(base_change_to_omega(&big(2), 2).unwrap(), Term::omega());
        assert_eq!(base_change_to_omega(&big(1), 5).unwrap(), Term::one());
    }

    #[test]
    fn ladder_agrees_with_successor_iteration() {
        for k in 2..=4 {
            let mut q = Quotient::new(k).unwrap();
            let mut b = StepBudget::default();
            let chain = q.prefix(120).unwrap();
            for (n, a) in chain.iter().enumerate() {
                assert_eq!(&q.g_inverse(&big(n as u64), &mut b).unwrap(), a, "k={k} n={n}");
            }
            assert_eq!(g_inverse_by_succ(37, k).unwrap(), chain[37]);
        }
    }

    #[test]
    fn base_change_examples() {
        let mut b = StepBudget::default();
        assert_eq!(base_change(&big(4), 2, 3, &mut b).unwrap(), big(7625597484987));
        assert_eq!(base_change(&big(2), 2, 3, &mut b).unwrap(), big(3));
        assert_eq!(base_change(&big(0), 2, 9, &mut b).unwrap(), big(0));
        assert!(base_change(&big(3), 3, 3, &mut b).is_err());
    }

    #[test]
    fn runs() {
        let r = run_u64(3, 2, 10).unwrap();
        assert!(r.terminated);
        assert_eq!(r.values_u64().unwrap(), vec![3, 3, 3, 2, 1, 0]);
        assert_eq!(r.ordinal, "t0(1)+1");
        assert_eq!(r.steps[0].ordinal, "t0(1)");
        let r = run_u64(1, 2, 10).unwrap();
        assert_eq!(r.values_u64().unwrap(), vec![1, 0]);
        let r = run_u64(0, 2, 10).unwrap();
        assert!(r.terminated && r.steps.is_empty());
    }

    #[test]
    fn seed_four_keeps_running() {
        let (r, err) = run_partial(&big(4), 2, 10, &mut StepBudget::default());
        assert!(!r.terminated);
        assert_eq!(r.ordinal, "t0(t1(0))");
        assert_eq!(r.steps[0].value, (big(7625597484987) - 1u32).to_string());
        assert!(err.is_none_or(|e| e.is_budget()));
    }

    #[test]
    fn trace_json_shape() {
        let r = run_u64(3, 2, 10).unwrap();
        let j = serde_json::to_value(&r).unwrap();
        assert_eq!(j["seed"], "3");
        assert_eq!(j["base"], 2);
        assert_eq!(j["steps"][0]["l"], 1);
        assert_eq!(j["steps"][0]["base"], 3);
        assert_eq!(j["steps"][0]["value"], "3");
        assert!(j.get("stopped").is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let mut b = StepBudget::default();
        for s in ["e0", "t0(e0)", "e0+w+1", "w+1"] {
            let a = t(s);
            let v = slow_growing(2, &a, &mut b).unwrap();
            assert_eq!(g_inverse(&v, 2).unwrap(), a, "{s}");
        }
    }
}
