//! Syntactic inversion of fundamental sequences, the iterative maximal
//! coefficient `imc`, and membership in the quotients `T/k`, `T°/k`, `T°[k]`.
//!
//! Candidates are produced along the structural cases (cardinal, multiple,
//! sum tail, θ-argument, iteration, fixed-point level) and every one is
//! confirmed by evaluating `β[ζ]` forward before it is returned.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use crate::error::{check_base, OrdinalError, Result};
use crate::fundseq::{eta_aux, fs, support_of};
use crate::term::{add, chi, degree, holds_f, Principal, Summand, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseTag {
    /// `α ∈ [Ωᵢ, Ω_{i+1})` principal, `β = Ω_{i+1}`.
    Cardinal,
    /// `α = η·n`, `β = η·ω`.
    Multiple,
    /// The tail of a sum is itself an approximation.
    SumTail,
    /// The θ-argument remainder is an approximation.
    ThetaArg,
    /// Iterated approximation through a fixed-point level of cofinality `Ω_{j+1}`.
    ThetaIter,
    /// The fixed-point level is an approximation.
    ThetaDelta,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::Cardinal => "CARDINAL",
            CaseTag::Multiple => "MULTIPLE",
            CaseTag::SumTail => "SUM_TAIL",
            CaseTag::ThetaArg => "THETA_ARG",
            CaseTag::ThetaIter => "THETA_ITER",
            CaseTag::ThetaDelta => "THETA_DELTA",
        };
        f.write_str(s)
    }
}

/// A witness `α = β[ζ]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InversionCandidate {
    pub beta: Term,
    pub zeta: Term,
    pub case: CaseTag,
}

impl InversionCandidate {
    /// `ζ` is a natural `n ≥ 2` and `β` a countable-cofinality limit.
    pub fn finite_index(&self) -> Option<u64> {
        self.zeta.as_nat().filter(|&n| n >= 2)
    }
}

thread_local! {
    static INVERT_MEMO: RefCell<HashMap<Term, Rc<Vec<InversionCandidate>>>> = RefCell::new(HashMap::new());
    static IMC_MEMO: RefCell<HashMap<Term, u64>> = RefCell::new(HashMap::new());
}

const MEMO_CAP: usize = 200_000;

fn memo_get<V: Clone>(
    cell: &'static std::thread::LocalKey<RefCell<HashMap<Term, V>>>,
    key: &Term,
) -> Option<V> {
    cell.with(|m| m.borrow().get(key).cloned())
}

fn memo_put<V>(cell: &'static std::thread::LocalKey<RefCell<HashMap<Term, V>>>, key: Term, v: V) {
    cell.with(|m| {
        let mut m = m.borrow_mut();
        if m.len() >= MEMO_CAP {
            m.clear();
        }
        m.insert(key, v);
    })
}

/// Does `(β, ζ)` satisfy one of the two admissible shapes and evaluate to `α`?
fn confirms(beta: &Term, zeta: &Term, alpha: &Term) -> bool {
    let shape_ok = if let Some(n) = zeta.as_nat() {
        n >= 2 && beta.is_limit() && degree(beta) == 0
    } else if let Some(z) = zeta.as_principal() {
        !z.is_one() && chi(z.index(), beta)
    } else {
        false
    };
    shape_ok && fs(beta, zeta).is_ok_and(|v| v == *alpha)
}

fn admissible_shape(c: &InversionCandidate) -> bool {
    c.finite_index().is_some() || c.zeta.as_principal().is_some_and(|z| !z.is_one())
}

/// All witnesses `α = β[ζ]` with `ζ ∈ [2, ω)` and `β` a countable-cofinality
/// limit, or `ζ` a principal in `[Ωᵢ, Ω_{i+1})` above 1 and `χ^{Ω_{i+1}}(β) = 1`.
pub fn invert_all(a: &Term) -> Result<Vec<InversionCandidate>> {
    Ok(invert_rc(a)?.as_ref().clone())
}

fn invert_rc(a: &Term) -> Result<Rc<Vec<InversionCandidate>>> {
    if let Some(v) = memo_get(&INVERT_MEMO, a) {
        return Ok(v);
    }
    let v = Rc::new(invert_uncached(a)?);
    memo_put(&INVERT_MEMO, a.clone(), v.clone());
    Ok(v)
}

fn invert_uncached(a: &Term) -> Result<Vec<InversionCandidate>> {
    let mut raw: Vec<InversionCandidate> = Vec::new();
    let mut push = |beta: Term, zeta: Term, case: CaseTag| {
        raw.push(InversionCandidate { beta, zeta, case });
    };
    if a.is_zero() {
        return Ok(Vec::new());
    }

    // case 1
    if let Some(p) = a.as_principal() {
        if !p.is_one() {
            push(Term::big_omega(p.index() + 1), a.clone(), CaseTag::Cardinal);
        }
    }

    // case 2
    if let [s] = a.blocks() {
        if s.count >= 2 {
            push(
                principal_successor(&s.head).to_term(),
                Term::nat(s.count),
                CaseTag::Multiple,
            );
        }
    }

    // case 3: every split into a nonempty prefix and a nonempty tail
    for (prefix, tail) in suffix_splits(a) {
        let last = prefix.last().expect("nonempty prefix").clone();
        for c in invert_rc(&tail)?.iter() {
            let Some(eta) = c.beta.as_principal() else { continue };
            if eta.is_one() || *eta > last {
                continue;
            }
            push(prefix.push(eta, 1), c.zeta.clone(), CaseTag::SumTail);
        }
    }

    if let Some(p) = a.as_principal() {
        let j = p.index();
        let split = p.split();
        let (gamma, rho) = (split.delta, split.eta);

        // case 4(a)
        if !rho.is_zero() {
            for c in invert_rc(&rho)?.iter() {
                let eta = &c.beta;
                if eta.max_index().is_some_and(|m| m > j) || holds_f(j, &gamma, eta) {
                    continue;
                }
                let beta = Principal::new_unchecked(j, add(&gamma, eta)).to_term();
                push(beta, c.zeta.clone(), CaseTag::ThetaArg);
            }
        }

        // case 4(b)
        for (beta, m) in iteration_candidates(p)? {
            push(beta, Term::nat(m), CaseTag::ThetaIter);
        }

        // case 4(c)
        if !gamma.is_zero() {
            for c in invert_rc(&gamma)?.iter() {
                let delta = &c.beta;
                if !is_level(j, delta) {
                    continue;
                }
                if let Some(eta) = eta_aux(j, delta, &rho)? {
                    if eta.max_index().is_some_and(|m| m > j) {
                        continue;
                    }
                    let beta = Principal::new_unchecked(j, add(delta, &eta)).to_term();
                    push(beta, c.zeta.clone(), CaseTag::ThetaDelta);
                }
            }
        }
    }

    let mut out: Vec<InversionCandidate> = Vec::new();
    for c in raw {
        if out.contains(&c) || !admissible_shape(&c) {
            continue;
        }
        if confirms(&c.beta, &c.zeta, a) {
            out.push(c);
        }
    }
    Ok(out)
}

/// `Ω_{j+1} | Δ < Ω_{j+2}` and `Δ > 0`.
fn is_level(j: u32, delta: &Term) -> bool {
    !delta.is_zero()
        && delta
            .blocks()
            .iter()
            .all(|s| s.head.index() == j + 1)
}

/// The additive principal successor `ξ·ω` of a principal `ξ = θᵢ(Δ+η)`.
pub fn principal_successor(p: &Principal) -> Principal {
    let split = p.split();
    if split.delta.is_zero() {
        Principal::new_unchecked(p.index(), add(&split.eta, &Term::one()))
    } else {
        Principal::new_unchecked(p.index(), p.to_term())
    }
}

fn suffix_splits(a: &Term) -> Vec<(Term, Term)> {
    let blocks = a.blocks();
    let mut out = Vec::new();
    for (b, s) in blocks.iter().enumerate() {
        // tail starts inside block b, keeping `keep` copies in the prefix
        for keep in 0..s.count {
            if b == 0 && keep == 0 {
                continue;
            }
            let mut prefix: Vec<Summand> = blocks[..b].to_vec();
            if keep > 0 {
                prefix.push(Summand {
                    head: s.head.clone(),
                    count: keep,
                });
            }
            let mut tail = vec![Summand {
                head: s.head.clone(),
                count: s.count - keep,
            }];
            tail.extend_from_slice(&blocks[b + 1..]);
            out.push((Term::from_blocks(prefix), Term::from_blocks(tail)));
        }
    }
    out
}

/// Every contiguous tail of every sum occurring in `x`, plus zero.
fn sub_sums(x: &Term, out: &mut Vec<Term>) {
    if !out.contains(x) {
        out.push(x.clone());
    }
    for (_, tail) in suffix_splits(x) {
        if !out.contains(&tail) {
            out.push(tail);
        }
    }
    for s in x.blocks() {
        sub_sums(s.head.arg(), out);
    }
}

/// Values `ν < Ω_{j+1}` with `Δ[ν] = x`; principal `θⱼ`-values only if `principal_only`.
fn level_preimages(j: u32, delta: &Term, x: &Term, principal_only: bool) -> Result<Vec<Term>> {
    let mut cands: Vec<Term> = Vec::new();
    if principal_only {
        x.for_each_principal(&mut |p| {
            if p.index() == j {
                let t = p.to_term();
                if !cands.contains(&t) {
                    cands.push(t);
                }
            }
        });
    } else {
        cands.push(Term::zero());
        sub_sums(x, &mut cands);
    }
    let mut out = Vec::new();
    for nu in cands {
        if nu.max_index().is_some_and(|m| m > j) {
            continue;
        }
        if fs(delta, &nu)? == *x {
            out.push(nu);
        }
    }
    Ok(out)
}

/// Case 4(b): `α = θⱼ(Δ+η)[m]` reached by iterating `ξ_k = Δ[θⱼ(ξ_{k+1})]`.
fn iteration_candidates(p: &Principal) -> Result<Vec<(Term, u64)>> {
    let j = p.index();
    let xi1 = p.arg();
    let mut out = Vec::new();
    if xi1.is_zero() {
        return Ok(out);
    }
    for c in invert_rc(xi1)?.iter() {
        let Some(z) = c.zeta.as_principal() else { continue };
        if z.index() != j || !is_level(j, &c.beta) {
            continue;
        }
        iterate_level(j, &c.beta, z.arg(), 1, &mut out)?;
    }
    Ok(out)
}

fn iterate_level(
    j: u32,
    delta: &Term,
    x: &Term,
    steps: u64,
    out: &mut Vec<(Term, u64)>,
) -> Result<()> {
    if steps >= 2 {
        for nu in level_preimages(j, delta, x, false)? {
            if let Some(eta) = eta_aux(j, delta, &nu)? {
                if eta.max_index().is_some_and(|m| m > j) {
                    continue;
                }
                let beta = Principal::new_unchecked(j, add(delta, &eta)).to_term();
                if !out.contains(&(beta.clone(), steps)) {
                    out.push((beta, steps));
                }
            }
        }
    }
    for z in level_preimages(j, delta, x, true)? {
        let zp = z.as_principal().expect("principal").clone();
        iterate_level(j, delta, zp.arg(), steps + 1, out)?;
    }
    Ok(())
}

/// Largest `n ≥ 2` with `a = β[n]` for a countable-cofinality limit `β`; 1 if none.
pub fn max_finite_iteration(a: &Term) -> Result<u64> {
    if !a.is_principal() {
        return Err(OrdinalError::NotPrincipal(a.to_string()));
    }
    Ok(invert_rc(a)?
        .iter()
        .filter_map(InversionCandidate::finite_index)
        .max()
        .unwrap_or(1))
}

/// Iterative maximal coefficient.
pub fn imc(a: &Term) -> Result<u64> {
    if a.is_zero() {
        return Ok(0);
    }
    if let Some(v) = memo_get(&IMC_MEMO, a) {
        return Ok(v);
    }
    let v = match a.as_principal() {
        Some(p) => imc(p.arg())?
            .max(imc(&support_of(p)?)?)
            .max(max_finite_iteration(a)?),
        None => {
            let (xi, eta, l) = a.split_last_block().expect("nonzero");
            imc(&xi)?.max(imc(&eta.to_term())?).max(l)
        }
    };
    memo_put(&IMC_MEMO, a.clone(), v);
    Ok(v)
}

/// `a ∈ T/k`, via `imc(a) < k`.
pub fn member_quotient(a: &Term, k: u64) -> Result<bool> {
    check_base(k)?;
    Ok(imc(a)? < k)
}

/// `a ∈ T/k`, following the inductive definition clause by clause.
pub fn member_inductive(a: &Term, k: u64) -> Result<bool> {
    check_base(k)?;
    inductive(a, k)
}

fn inductive(a: &Term, k: u64) -> Result<bool> {
    if a.is_zero() {
        return Ok(true);
    }
    match a.as_principal() {
        None => {
            let (xi, eta, l) = a.split_last_block().expect("nonzero");
            Ok(l < k && inductive(&xi, k)? && inductive(&eta.to_term(), k)?)
        }
        Some(p) => {
            if !inductive(p.arg(), k)? {
                return Ok(false);
            }
            if !inductive(&support_of(p)?, k)? {
                return Ok(false);
            }
            let excluded = invert_rc(a)?
                .iter()
                .any(|c| c.finite_index().is_some_and(|n| n >= k));
            Ok(!excluded)
        }
    }
}

/// `a ∈ T°[k] = T°/k ∩ Ω₁`.
pub fn member_tk(a: &Term, k: u64) -> Result<bool> {
    check_base(k)?;
    Ok(a.is_countable() && degree(a) == 0 && imc(a)? < k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn t(s: &str) -> Term {
        parse(s).unwrap()
    }

    fn has(cs: &[InversionCandidate], beta: &str, zeta: &str, case: CaseTag) -> bool {
        cs.iter()
            .any(|c| c.beta == t(beta) && c.zeta == t(zeta) && c.case == case)
    }

    #[test]
    fn inversion_examples() {
        let cs = invert_all(&t("w+w")).unwrap();
        assert!(has(&cs, "t0(2)", "2", CaseTag::Multiple), "{cs:?}");
        let cs = invert_all(&t("t0(w)")).unwrap();
        assert!(has(&cs, "e0", "2", CaseTag::ThetaIter), "{cs:?}");
        let cs = invert_all(&Term::nat(5)).unwrap();
        assert!(has(&cs, "w", "5", CaseTag::Multiple), "{cs:?}");
        let cs = invert_all(&Term::epsilon0()).unwrap();
        assert!(cs.iter().all(|c| c.zeta.as_nat().is_none()), "{cs:?}");
        assert!(has(&cs, "W1", "e0", CaseTag::Cardinal));
    }

    #[test]
    fn non_unique_witnesses() {
        let cs = invert_all(&t("t0(w)")).unwrap();
        assert!(has(&cs, "e0", "2", CaseTag::ThetaIter));
        assert!(has(&cs, "W1", "t0(w)", CaseTag::Cardinal));
        let cs = invert_all(&t("e0+w+w")).unwrap();
        assert!(has(&cs, "e0+t0(2)", "2", CaseTag::SumTail), "{cs:?}");
    }

    #[test]
    fn omega_is_only_a_first_approximation() {
        assert_eq!(max_finite_iteration(&Term::omega()).unwrap(), 1);
        assert_eq!(max_finite_iteration(&t("t0(w)")).unwrap(), 2);
        assert_eq!(max_finite_iteration(&Term::epsilon0()).unwrap(), 1);
        assert!(max_finite_iteration(&t("w+1")).is_err());
    }

    #[test]
    fn imc_examples() {
        assert_eq!(imc(&t("t0(w+1)")).unwrap(), 2);
        assert_eq!(imc(&t("t0(e0)")).unwrap(), 1);
        assert_eq!(imc(&Term::zero()).unwrap(), 0);
        assert_eq!(imc(&t("w+w+w+w")).unwrap(), 4);
        assert_eq!(imc(&Term::epsilon0()).unwrap(), 1);
        assert_eq!(imc(&Term::nat(6)).unwrap(), 6);
    }

    #[test]
    fn membership_examples() {
        assert!(member_quotient(&t("w+1"), 2).unwrap());
        assert!(!member_quotient(&t("w+2"), 2).unwrap());
        assert!(member_quotient(&t("t0(w)"), 3).unwrap());
        assert!(!member_inductive(&t("t0(w)"), 2).unwrap());
        assert!(!member_inductive(&t("t0(w+1)"), 2).unwrap());
        assert!(member_inductive(&t("t0(e0)"), 2).unwrap());
        assert!(member_tk(&Term::epsilon0(), 2).unwrap());
        assert!(!member_tk(&Term::big_omega(1), 2).unwrap());
        assert!(!member_tk(&t("w+3"), 3).unwrap());
        assert!(matches!(member_tk(&Term::one(), 1), Err(OrdinalError::BadBase(1))));
    }
}
