//! Exhaustive generation of small terms and brute-force oracles over them.

use crate::error::Result;
use crate::fundseq::fund_seq_nat;
use crate::goodstein::Quotient;
use crate::inversion::imc;
use crate::term::{degree, Principal, Summand, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub max_nodes: u64,
    pub max_index: u32,
    pub countable_only: bool,
    pub seed: u64,
}

impl GenConfig {
    pub fn new(max_nodes: u64, max_index: u32) -> Self {
        GenConfig {
            max_nodes: max_nodes.max(1),
            max_index,
            countable_only: false,
            seed: 0,
        }
    }

    pub fn countable(mut self) -> Self {
        self.countable_only = true;
        self
    }
}

/// All canonical terms with at most `max_nodes` θ-nodes and indices up to
/// `max_index`, sorted increasingly.
pub fn gen_terms(cfg: &GenConfig) -> Vec<Term> {
    let n = cfg.max_nodes as usize;
    // principals[s]: all principals with exactly s nodes
    let mut principals: Vec<Vec<Principal>> = vec![Vec::new(); n + 1];
    // terms[s]: all terms with exactly s nodes
    let mut terms: Vec<Vec<Term>> = vec![Vec::new(); n + 1];
    terms[0].push(Term::zero());
    for s in 1..=n {
        let mut ps = Vec::new();
        for arg in &terms[s - 1] {
            let lo = arg.max_index().map_or(0, |m| m.saturating_sub(1));
            for i in lo..=cfg.max_index {
                if let Ok(p) = Principal::new(i, arg.clone()) {
                    ps.push(p);
                }
            }
        }
        principals[s] = ps;
        let mut all: Vec<Principal> = principals[1..=s].iter().flatten().cloned().collect();
        all.sort_by(|a, b| b.cmp(a));
        let mut out = Vec::new();
        sums_of_size(&all, 0, s as u64, &mut Vec::new(), &mut out);
        terms[s] = out;
    }
    let mut all: Vec<Term> = terms.into_iter().flatten().collect();
    if cfg.countable_only {
        all.retain(|t| t.is_countable() && degree(t) == 0);
    }
    all.sort();
    all.dedup();
    all
}

// non-increasing sequences drawn from `desc` (sorted decreasingly) with total size exactly `left`
fn sums_of_size(
    desc: &[Principal],
    from: usize,
    left: u64,
    acc: &mut Vec<Summand>,
    out: &mut Vec<Term>,
) {
    if left == 0 {
        out.push(Term::from_blocks(acc.clone()));
        return;
    }
    for (j, p) in desc.iter().enumerate().skip(from) {
        let sz = p.size();
        let mut c = 1;
        while c * sz <= left {
            acc.push(Summand {
                head: p.clone(),
                count: c,
            });
            sums_of_size(desc, j + 1, left - c * sz, acc, out);
            acc.pop();
            c += 1;
        }
    }
}

/// The first `count` elements of `T°[k]`, in increasing order.
pub fn enumerate_quotient(k: u64, count: usize) -> Result<Vec<Term>> {
    Quotient::new(k)?.prefix(count)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DensityReport {
    pub chain_len: usize,
    pub generated: usize,
    pub limits_checked: usize,
    pub violations: Vec<String>,
}

impl DensityReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Cross-checks the successor chain of `T°[k]` against a generated population:
/// every generated member of `T°[k]` below the last chain element must be in
/// the chain, and no generated member of `T°/k` may lie in `[λ[k], λ)` for a
/// generated countable limit `λ`.
pub fn oracle_density_check(k: u64, count: usize, cfg: &GenConfig) -> Result<DensityReport> {
    let chain = enumerate_quotient(k, count)?;
    let population = gen_terms(cfg);
    oracle_density_check_on(k, &chain, &population)
}

pub fn oracle_density_check_on(
    k: u64,
    chain: &[Term],
    population: &[Term],
) -> Result<DensityReport> {
    let mut report = DensityReport {
        chain_len: chain.len(),
        generated: population.len(),
        ..Default::default()
    };
    let countable: Vec<&Term> = population
        .iter()
        .filter(|t| t.is_countable() && degree(t) == 0)
        .collect();
    let mut members = Vec::new();
    for t in &countable {
        if imc(t)? < k {
            members.push(*t);
        }
    }
    if let Some(top) = chain.last() {
        for m in &members {
            if *m <= top && chain.binary_search(m).is_err() {
                report
                    .violations
                    .push(format!("{m} is in T°[{k}] but missing from the chain"));
            }
        }
    }
    for lam in countable.iter().filter(|t| t.is_limit()) {
        report.limits_checked += 1;
        let low = fund_seq_nat(lam, k)?;
        for m in &members {
            if low <= **m && *m < *lam {
                report.violations.push(format!(
                    "{m} has imc < {k} but lies in [{low}, {lam})"
                ));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    #[test]
    fn small_generation() {
        let g = gen_terms(&GenConfig::new(2, 0));
        for s in ["0", "1", "2", "w"] {
            assert!(g.contains(&parse(s).unwrap()), "{s}");
        }
        let g = gen_terms(&GenConfig::new(1, 3));
        for s in ["0", "1", "W1", "W2", "W3"] {
            assert!(g.contains(&parse(s).unwrap()), "{s}");
        }
        assert_eq!(g.len(), 5);
    }

    #[test]
    fn generation_is_strictly_increasing_and_sized() {
        let cfg = GenConfig::new(5, 2);
        let g = gen_terms(&cfg);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(g.iter().all(|t| t.size() <= 5 && t.max_index().unwrap_or(0) <= 2));
    }

    #[test]
    fn countable_filter() {
        let g = gen_terms(&GenConfig::new(4, 2).countable());
        assert!(g.iter().all(|t| t.is_countable()));
        assert!(g.contains(&Term::epsilon0()));
    }
}
