//! Support terms and the fundamental sequences `α[ζ]`.
//!
//! The system is total on terms: zero, one and successors fall under the
//! additive clauses. Sequences of additive principal successors are indexed
//! so that `(η·ω)[k] = η·k`.

use std::cmp::Ordering;

use crate::error::{OrdinalError, Result};
use crate::term::{
    add, chi, compare, degree, holds_f, localize, star, ArgSplit, Principal, Term,
};

/// `Δ[0]^{⋆i} < α_{m-1} = Δ^{⋆i}` with `m > 1`, for the localization of `loc_of`.
fn localization_gap(i: u32, delta: &Term, loc_of: &Principal) -> Result<Option<Term>> {
    let delta_star = star(i, delta);
    // a localization predecessor sits at a level above `delta`
    match delta_star.as_principal() {
        Some(q) if q.split().delta > *delta => {}
        _ => return Ok(None),
    }
    let loc = localize(loc_of)?;
    if loc.len() <= 1 || *loc.predecessor().expect("m > 1") != delta_star {
        return Ok(None);
    }
    let d0 = fs(delta, &Term::zero())?;
    if compare(&star(i, &d0), &delta_star) == Ordering::Less {
        Ok(Some(delta_star))
    } else {
        Ok(None)
    }
}

/// The support term of a principal `θᵢ(Δ+η)`.
pub fn support(a: &Term) -> Result<Term> {
    let p = a
        .as_principal()
        .ok_or_else(|| OrdinalError::NotPrincipal(a.to_string()))?;
    support_of(p)
}

pub(crate) fn support_of(p: &Principal) -> Result<Term> {
    let i = p.index();
    let ArgSplit { delta, eta } = p.split();
    if holds_f(i, &delta, &eta) {
        let loc = localize(p)?;
        return Ok(loc.predecessor().cloned().unwrap_or_else(Term::zero));
    }
    if eta.is_zero() {
        if let Some(prev) = localization_gap(i, &delta, p)? {
            return Ok(prev);
        }
        return Ok(Term::zero());
    }
    if eta.is_successor() {
        let arg = add(&delta, &eta.drop_last());
        return Ok(Principal::new_unchecked(i, arg).to_term());
    }
    Ok(Term::zero())
}

/// The partial function `η(i, Δ, ρ)`; `None` where it is undefined.
pub fn eta_aux(i: u32, delta: &Term, rho: &Term) -> Result<Option<Term>> {
    if holds_f(i, delta, rho) {
        return Ok(Some(rho.clone()));
    }
    if rho.is_zero() {
        return Ok(Some(Term::zero()));
    }
    let base = Principal::new_unchecked(i, delta.clone());
    if let Some(prev) = localization_gap(i, delta, &base)? {
        if prev == *rho {
            return Ok(Some(Term::zero()));
        }
    }
    if let Some(p) = rho.as_principal() {
        if p.index() == i {
            let ArgSplit { delta: d, eta: nu } = p.split();
            if d == *delta {
                return Ok(Some(add(&nu, &Term::one())));
            }
        }
    }
    Ok(None)
}

fn nat_index(a: &Term, zeta: &Term) -> Result<u64> {
    zeta.as_nat().ok_or_else(|| OrdinalError::IndexOutOfDomain {
        term: a.to_string(),
        zeta: zeta.to_string(),
    })
}

/// Checks that `zeta` lies in `ℵ_{d(a)}`: a natural if `d(a) = 0`, else below `Ω_{d(a)}`.
pub fn check_index(a: &Term, zeta: &Term) -> Result<()> {
    let d = degree(a);
    let ok = if d == 0 {
        zeta.as_nat().is_some()
    } else {
        compare(zeta, &Term::big_omega(d)) == Ordering::Less
    };
    if ok {
        Ok(())
    } else {
        Err(OrdinalError::IndexOutOfDomain {
            term: a.to_string(),
            zeta: zeta.to_string(),
        })
    }
}

/// `a[zeta]`, with the index checked against the cofinality of `a`.
pub fn fund_seq(a: &Term, zeta: &Term) -> Result<Term> {
    check_index(a, zeta)?;
    fs(a, zeta)
}

/// `a[n]` for a natural index.
pub fn fund_seq_nat(a: &Term, n: u64) -> Result<Term> {
    fund_seq(a, &Term::nat(n))
}

pub(crate) fn fs(a: &Term, zeta: &Term) -> Result<Term> {
    if a.is_zero() {
        return Ok(Term::zero());
    }
    let Some(p) = a.as_principal() else {
        let (Some(last), rest) = (a.last(), a.drop_last()) else {
            unreachable!()
        };
        return Ok(add(&rest, &fs_principal(last, zeta)?));
    };
    fs_principal(p, zeta)
}

fn fs_principal(p: &Principal, zeta: &Term) -> Result<Term> {
    if p.is_one() {
        return Ok(Term::zero());
    }
    let i = p.index();
    let ArgSplit { delta, eta } = p.split();
    let theta = |arg: Term| Principal::new_unchecked(i, arg).to_term();
    if eta.is_limit() && !holds_f(i, &delta, &eta) {
        let inner = fs(&eta, zeta)?;
        return Ok(theta(add(&delta, &inner)));
    }
    if delta.is_zero() {
        if eta.is_zero() {
            return Ok(zeta.clone());
        }
        let n = nat_index(&p.to_term(), zeta)?;
        let s = support_of(p)?;
        return Ok(match (s.as_principal(), n) {
            (_, 0) => Term::zero(),
            (Some(h), n) => Term::zero().push(h, n),
            (None, _) => Term::zero(),
        });
    }
    if chi(i, &delta) {
        let n = nat_index(&p.to_term(), zeta)?;
        let mut cur = theta(fs(&delta, &support_of(p)?)?);
        for _ in 0..n {
            cur = theta(fs(&delta, &cur)?);
        }
        return Ok(cur);
    }
    let s = support_of(p)?;
    Ok(theta(add(&fs(&delta, zeta)?, &s)))
}

/// The descent `a, a[k], a[k][k], …` of at most `steps + 1` terms, stopping at zero.
pub fn expand(a: &Term, k: u64, steps: usize) -> Result<Vec<Term>> {
    let mut out = vec![a.clone()];
    let z = Term::nat(k);
    let mut cur = a.clone();
    for _ in 0..steps {
        if cur.is_zero() {
            break;
        }
        cur = fund_seq(&cur, &z)?;
        out.push(cur.clone());
    }
    Ok(out)
}

/// Regular cardinals `Ω_{i+1} = θ_{i+1}(0)`.
pub fn is_regular_cardinal(a: &Term) -> bool {
    a.as_principal()
        .is_some_and(|p| p.index() > 0 && p.is_omega_base())
}

/// Restricted Bachmann property for one pair: `a[ζ] < b < a` implies `a[ζ] ≤ b[1]`.
pub fn bachmann_check(a: &Term, b: &Term, zeta: &Term) -> Result<bool> {
    let az = fund_seq(a, zeta)?;
    if !(az < *b && *b < *a) {
        return Ok(true);
    }
    let b1 = fund_seq(b, &Term::one())?;
    Ok(az <= b1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn t(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn support_examples() {
        assert_eq!(support(&Term::one()).unwrap(), Term::zero());
        assert_eq!(support(&t("t0(w+1)")).unwrap(), t("t0(w)"));
        assert_eq!(support(&t("t0(e0)")).unwrap(), Term::epsilon0());
        assert_eq!(support(&Term::epsilon0()).unwrap(), Term::zero());
        assert!(support(&t("w+1")).is_err());
    }

    #[test]
    fn eta_aux_examples() {
        let w1 = Term::big_omega(1);
        assert_eq!(eta_aux(0, &w1, &Term::zero()).unwrap(), Some(Term::zero()));
        assert_eq!(
            eta_aux(0, &Term::zero(), &t("t0(w)")).unwrap(),
            Some(t("w+1"))
        );
        assert_eq!(eta_aux(0, &w1, &w1).unwrap(), None);
    }

    #[test]
    fn fundamental_sequence_examples() {
        assert_eq!(fund_seq_nat(&Term::omega(), 3).unwrap(), Term::nat(3));
        assert_eq!(fund_seq_nat(&Term::epsilon0(), 2).unwrap(), t("t0(w)"));
        assert_eq!(fund_seq_nat(&Term::epsilon0(), 1).unwrap(), Term::omega());
        assert_eq!(fund_seq_nat(&Term::epsilon0(), 0).unwrap(), Term::one());
        assert_eq!(
            fund_seq(&Term::big_omega(1), &Term::epsilon0()).unwrap(),
            Term::epsilon0()
        );
        assert_eq!(fund_seq_nat(&t("t0(w+1)"), 2).unwrap(), t("t0(w)+t0(w)"));
        assert_eq!(fund_seq_nat(&t("t0(e0)"), 3).unwrap(), t("e0+e0+e0"));
        // ε₁[0] = ε₀·ω, ε₁[1] = θ₀(ε₀·ω)
        assert_eq!(fund_seq_nat(&t("t0(W1+1)"), 0).unwrap(), t("t0(e0)"));
        assert_eq!(fund_seq_nat(&t("t0(W1+1)"), 1).unwrap(), t("t0(t0(e0))"));
        assert_eq!(fund_seq(&t("t1(W1)"), &Term::omega()).unwrap(), t("t1(w)"));
        assert_eq!(fund_seq(&t("W1+W1"), &Term::nat(5)).unwrap(), t("W1+5"));
    }

    #[test]
    fn successor_and_small_cases() {
        assert_eq!(fund_seq_nat(&t("w+1"), 7).unwrap(), Term::omega());
        assert_eq!(fund_seq_nat(&Term::zero(), 4).unwrap(), Term::zero());
        assert_eq!(fund_seq_nat(&Term::one(), 4).unwrap(), Term::zero());
    }

    #[test]
    fn index_domain() {
        assert!(matches!(
            fund_seq(&Term::omega(), &Term::omega()),
            Err(OrdinalError::IndexOutOfDomain { .. })
        ));
        assert!(matches!(
            fund_seq(&Term::big_omega(1), &Term::big_omega(1)),
            Err(OrdinalError::IndexOutOfDomain { .. })
        ));
    }

    #[test]
    fn expansions() {
        assert_eq!(
            expand(&Term::epsilon0(), 2, 3).unwrap(),
            vec![Term::epsilon0(), t("t0(w)"), t("t0(2)"), t("w+w")]
        );
        assert_eq!(expand(&Term::zero(), 5, 2).unwrap(), vec![Term::zero()]);
        assert_eq!(
            expand(&Term::omega(), 2, 2).unwrap(),
            vec![Term::omega(), Term::nat(2), Term::one()]
        );
    }

    #[test]
    fn bachmann_examples() {
        assert!(bachmann_check(&Term::epsilon0(), &t("t0(w)+t0(w)"), &Term::nat(2)).unwrap());
        assert!(bachmann_check(&Term::omega(), &Term::nat(5), &Term::one()).unwrap());
        assert!(bachmann_check(&Term::omega(), &Term::one(), &Term::nat(3)).unwrap());
    }
}
