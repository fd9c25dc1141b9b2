//! Structural invariants checked on randomly built canonical terms.

use std::cmp::Ordering;

use num_bigint::BigUint;
use proptest::prelude::*;

use ordinal_goodstein::classical::{classical_base_change, classical_eval, hereditary, mc};
use ordinal_goodstein::enumerate::{enumerate_quotient, gen_terms, GenConfig};
use ordinal_goodstein::fundseq::{check_index, eta_aux, fund_seq, fund_seq_nat, support};
use ordinal_goodstein::goodstein::{g_inverse, run_u64};
use ordinal_goodstein::hierarchy::{h_k, hardy, pred_with_budget, slow_growing, takeuti_approx, HardyConvention, StepBudget};
use ordinal_goodstein::inversion::{imc, invert_all, member_inductive, member_quotient, member_tk};
use ordinal_goodstein::term::{add, chi, compare, degree, theta};
use ordinal_goodstein::{format_term, parse, parse_strict, Term};

fn term_with(max_index: u32) -> impl Strategy<Value = Term> {
    Just(Term::zero()).prop_recursive(4, 24, 3, move |inner| {
        prop_oneof![
            (0..=max_index, inner.clone()).prop_filter_map("non-canonical", |(i, a)| theta(i, a).ok()),
            (inner.clone(), inner).prop_map(|(a, b)| add(&a, &b)),
        ]
    })
}

fn any_term() -> impl Strategy<Value = Term> {
    term_with(2)
}

fn countable() -> impl Strategy<Value = Term> {
    prop::collection::vec(term_with(1), 0..3).prop_map(|args| {
        args.into_iter()
            .map(|x| theta(0, x).expect("θ₀ accepts any argument"))
            .fold(Term::zero(), |acc, p| add(&acc, &p))
    })
}

fn countable_limit() -> impl Strategy<Value = Term> {
    (countable(), term_with(1).prop_filter("nonzero", |x| !x.is_zero()))
        .prop_map(|(a, x)| add(&a, &theta(0, x).expect("θ₀ accepts any argument")))
}

fn budget() -> StepBudget {
    StepBudget::new(2_000, 512).with_max_size(96)
}

fn g(k: u64, a: &Term) -> Option<BigUint> {
    slow_growing(k, a, &mut budget()).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn compare_is_a_total_order(a in any_term(), b in any_term(), c in any_term()) {
        prop_assert_eq!(compare(&a, &a), Ordering::Equal);
        prop_assert_eq!(compare(&a, &b), compare(&b, &a).reverse());
        prop_assert_eq!(compare(&a, &b) == Ordering::Equal, a == b);
        if a <= b && b <= c {
            prop_assert!(a <= c);
        }
    }

    #[test]
    fn principals_sit_between_their_cardinals(a in any_term()) {
        if let Some(p) = a.as_principal() {
            let i = p.index();
            prop_assert!(Term::big_omega(i) <= a);
            prop_assert!(a < Term::big_omega(i + 1));
        }
    }

    #[test]
    fn addition_associates(a in any_term(), b in any_term(), c in any_term()) {
        prop_assert_eq!(add(&add(&a, &b), &c), add(&a, &add(&b, &c)));
    }

    #[test]
    fn cofinality_partition(a in any_term()) {
        let top = a.max_index().unwrap_or(0);
        let hits: Vec<u32> = (0..top).filter(|&i| chi(i, &a)).collect();
        prop_assert!(hits.len() <= 1, "{a}: chi holds at {hits:?}");
        prop_assert_eq!(degree(&a), hits.first().map_or(0, |i| i + 1));
    }

    #[test]
    fn printing_round_trips(a in any_term()) {
        prop_assert_eq!(parse_strict(&format_term(&a, false)).unwrap(), a.clone());
        prop_assert_eq!(parse(&format_term(&a, true)).unwrap(), a);
    }

    #[test]
    fn sequences_descend_weakly_monotonically(a in any_term(), n in 0u64..5) {
        prop_assume!(!a.is_zero());
        let x = fund_seq_nat(&a, n).unwrap();
        let y = fund_seq_nat(&a, n + 1).unwrap();
        prop_assert!(x < a, "{a}[{n}] = {x}");
        prop_assert!(x <= y, "{a}[{n}] = {x} > {a}[{}] = {y}", n + 1);
    }

    #[test]
    fn sequences_descend_at_ordinal_indices(a in any_term(), z in any_term()) {
        prop_assume!(!a.is_zero() && check_index(&a, &z).is_ok());
        prop_assert!(fund_seq(&a, &z).unwrap() < a);
    }

    #[test]
    fn successors_collapse(a in any_term(), n in 0u64..6) {
        let succ = add(&a, &Term::one());
        prop_assert_eq!(fund_seq_nat(&succ, n).unwrap(), a);
        prop_assert!(fund_seq_nat(&Term::zero(), n).unwrap().is_zero());
        prop_assert!(fund_seq_nat(&Term::one(), n).unwrap().is_zero());
    }

    #[test]
    fn support_recovers_rho(i in 0u32..2, delta in any_term(), rho in any_term()) {
        if let Ok(Some(eta)) = eta_aux(i, &delta, &rho) {
            let Ok(a) = theta(i, add(&delta, &eta)) else { return Ok(()) };
            let p = a.as_principal().expect("principal");
            prop_assume!(p.split().delta == delta);
            prop_assert_eq!(support(&a).unwrap(), rho);
        }
    }

    #[test]
    fn inversion_candidates_round_trip(a in any_term()) {
        for c in invert_all(&a).unwrap() {
            prop_assert_eq!(fund_seq(&c.beta, &c.zeta).unwrap(), a.clone(), "{}[{}]", c.beta, c.zeta);
        }
    }

    #[test]
    fn inversion_finds_finite_indices(b in countable_limit(), n in 2u64..=6) {
        let a = fund_seq_nat(&b, n).unwrap();
        let found = invert_all(&a).unwrap();
        prop_assert!(!found.is_empty(), "{b}[{n}] = {a} has no inversion");
        for c in &found {
            prop_assert_eq!(fund_seq(&c.beta, &c.zeta).unwrap(), a.clone());
        }
    }

    #[test]
    fn membership_definitions_agree(a in any_term(), k in 2u64..=4) {
        prop_assert_eq!(member_inductive(&a, k).unwrap(), member_quotient(&a, k).unwrap(), "{} at {}", a, k);
    }

    #[test]
    fn quotients_increase(a in any_term(), k in 2u64..=5) {
        if member_quotient(&a, k).unwrap() {
            prop_assert!(member_quotient(&a, k + 1).unwrap());
        }
    }

    #[test]
    fn predecessor_commutes_with_g(a in countable(), k in 2u64..=3) {
        prop_assume!(!a.is_zero());
        let Ok(p) = pred_with_budget(k, &a, &mut budget()) else { return Ok(()) };
        if let (Some(x), Some(y)) = (g(k, &a), g(k, &p)) {
            prop_assert_eq!(y + 1u32, x, "P{}({}) = {}", k, a, p);
        }
    }

    #[test]
    fn g_adds_over_normal_form_splits(a in countable(), b in countable(), k in 2u64..=3) {
        let joinable = match (a.last(), b.leading()) {
            (Some(l), Some(h)) => l.to_term() >= h.to_term(),
            _ => true,
        };
        prop_assume!(joinable);
        let ab = add(&a, &b);
        if let (Some(x), Some(y), Some(z)) = (g(k, &a), g(k, &b), g(k, &ab)) {
            prop_assert_eq!(x + y, z);
        }
    }

    #[test]
    fn hereditary_notation_round_trips(n in 0u64..100_000, k in prop::sample::select(vec![2u64, 3, 10])) {
        let e = hereditary(&BigUint::from(n), k).unwrap();
        prop_assert!(mc(&e) < k);
        prop_assert_eq!(classical_eval(&e, k).unwrap(), BigUint::from(n));
    }

    #[test]
    fn classical_base_change_is_monotone(n in 0u64..2_000, d in 1u64..50, k in 2u64..=4) {
        let a = classical_base_change(&BigUint::from(n), k, k + 1).unwrap();
        let b = classical_base_change(&BigUint::from(n + d), k, k + 1).unwrap();
        prop_assert!(a < b);
    }
}

#[test]
fn hardy_matches_h_on_small_ordinals() {
    for s in ["0", "1", "3", "w", "w+2", "w+w", "w+w+w", "t0(2)", "t0(2)+w"] {
        let a = parse(s).unwrap();
        for k in [2u64, 3] {
            let h = h_k(k, &a, &mut StepBudget::default()).unwrap();
            let x = hardy(&a, &BigUint::from(k), HardyConvention::Shifted, &mut StepBudget::default()).unwrap();
            assert_eq!(h, x, "{s} at {k}");
        }
    }
}

#[test]
fn takeuti_approximations_have_imc_one() {
    for n in 1..=6 {
        assert_eq!(imc(&takeuti_approx(n)).unwrap(), 1, "approximation {n}");
    }
}

#[test]
fn quotient_prefix_is_the_sorted_population_slice() {
    let pop = gen_terms(&GenConfig::new(6, 1).countable());
    for (k, count) in [(2u64, 12usize), (3, 10)] {
        let chain = enumerate_quotient(k, count).unwrap();
        assert!(chain.windows(2).all(|w| w[0] < w[1]));
        for (i, a) in chain.iter().enumerate() {
            assert!(member_tk(a, k).unwrap());
            assert_eq!(g(k, a), Some(BigUint::from(i)));
            assert_eq!(&g_inverse(&BigUint::from(i), k).unwrap(), a);
        }
        let mut expected: Vec<Term> = pop
            .iter()
            .filter(|a| member_tk(a, k).unwrap())
            .filter(|a| g(k, a).is_some_and(|v| v < BigUint::from(count)))
            .cloned()
            .collect();
        expected.sort();
        assert_eq!(expected, chain, "k = {k}");
    }
}

#[test]
fn generated_terms_are_canonical() {
    for a in gen_terms(&GenConfig::new(6, 2)) {
        assert_eq!(parse_strict(&a.to_string()).unwrap(), a);
    }
}

#[test]
fn goodstein_ordinals_strictly_decrease() {
    for (n, k) in [(3u64, 2u64), (4, 3), (10, 3), (30, 3)] {
        let trace = run_u64(n, k, 40).unwrap();
        let mut prev = parse(&trace.ordinal).unwrap();
        for step in &trace.steps {
            let cur = parse(&step.ordinal).unwrap();
            assert!(cur < prev, "seed {n} base {k} step {}: {cur} !< {prev}", step.l);
            prev = cur;
        }
    }
}
