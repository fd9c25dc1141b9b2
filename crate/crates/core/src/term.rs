//! Canonical terms of the notation system and the structural predicates on them.
//!
//! A [`Term`] is either zero or an additive normal form: a strictly decreasing
//! list of principal heads `θᵢ(arg)`, each carrying a positive repetition count.
//! The smart constructors keep every value canonical, so structural equality
//! coincides with ordinal equality and [`Ord`] is the ordinal order.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, LazyLock, Mutex, Weak};

use crate::error::{OrdinalError, Result};

struct Node {
    index: u32,
    arg: Term,
    size: u64,
    hash: u64,
    pure: bool,
}

/// A principal term `θᵢ(arg)`.
#[derive(Clone)]
pub struct Principal(Arc<Node>);

/// One block of an additive normal form: `head · count`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Summand {
    pub head: Principal,
    pub count: u64,
}

/// A canonical term. The empty block list is zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Term(Arc<[Summand]>);

/// Principals are interned, so equal terms share one allocation.
impl PartialEq for Principal {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Principal {}

impl Hash for Principal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

#[derive(PartialEq, Eq, Hash)]
struct InternKey {
    index: u32,
    children: Vec<(usize, u64)>,
}

struct Interner {
    map: HashMap<InternKey, Weak<Node>>,
    next_sweep: usize,
}

impl Interner {
    fn insert(&mut self, key: InternKey, node: Weak<Node>) {
        self.map.insert(key, node);
        if self.map.len() >= self.next_sweep {
            self.map.retain(|_, w| w.strong_count() > 0);
            self.next_sweep = (2 * self.map.len()).max(1 << 16);
        }
    }
}

static INTERNER: LazyLock<Mutex<Interner>> = LazyLock::new(|| {
    Mutex::new(Interner {
        map: HashMap::new(),
        next_sweep: 1 << 16,
    })
});

fn mix(index: u32, arg: &Term) -> u64 {
    use std::collections::hash_map::DefaultHasher;
    let mut h = DefaultHasher::new();
    index.hash(&mut h);
    for s in arg.blocks() {
        s.head.0.hash.hash(&mut h);
        s.count.hash(&mut h);
    }
    h.finish()
}

impl Principal {
    /// Builds `θ_index(arg)`, rejecting arguments at or above `Ω_{index+2}`.
    pub fn new(index: u32, arg: Term) -> Result<Principal> {
        if arg.max_index().is_some_and(|m| m > index + 1) {
            return Err(OrdinalError::ArgumentOutOfRange(format!(
                "t{index}({arg}): argument must be below W{}",
                index + 2
            )));
        }
        Ok(Self::new_unchecked(index, arg))
    }

    pub(crate) fn new_unchecked(index: u32, arg: Term) -> Principal {
        let key = InternKey {
            index,
            children: arg
                .blocks()
                .iter()
                .map(|s| (Arc::as_ptr(&s.head.0) as usize, s.count))
                .collect(),
        };
        let mut table = INTERNER.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(node) = table.map.get(&key).and_then(Weak::upgrade) {
            return Principal(node);
        }
        let size = 1 + arg.size();
        let hash = mix(index, &arg);
        let pure = index == 0 && arg.below_epsilon0();
        let node = Arc::new(Node {
            index,
            arg,
            size,
            hash,
            pure,
        });
        table.insert(key, Arc::downgrade(&node));
        Principal(node)
    }

    pub fn index(&self) -> u32 {
        self.0.index
    }

    pub fn arg(&self) -> &Term {
        &self.0.arg
    }

    /// Number of θ-nodes in the term.
    pub fn size(&self) -> u64 {
        self.0.size
    }

    /// Built from `θ₀` alone, hence below `ε₀`.
    pub fn below_epsilon0(&self) -> bool {
        self.0.pure
    }

    pub fn to_term(&self) -> Term {
        Term::from_blocks(vec![Summand {
            head: self.clone(),
            count: 1,
        }])
    }

    /// `θ₀(0) = 1`.
    pub fn is_one(&self) -> bool {
        self.0.index == 0 && self.0.arg.is_zero()
    }

    /// `θᵢ(0) = Ωᵢ`.
    pub fn is_omega_base(&self) -> bool {
        self.0.arg.is_zero()
    }

    /// The argument split into its `Ω_{i+1}`-multiple and the remainder.
    pub fn split(&self) -> ArgSplit {
        split_unchecked(self.index(), self.arg())
    }
}

impl Term {
    pub(crate) fn from_blocks(blocks: Vec<Summand>) -> Term {
        Term(blocks.into())
    }

    pub fn zero() -> Term {
        Term(Arc::from(Vec::new()))
    }

    pub fn one() -> Term {
        Term::nat(1)
    }

    /// The numeral `n`, i.e. `n` copies of `θ₀(0)`.
    pub fn nat(n: u64) -> Term {
        if n == 0 {
            return Term::zero();
        }
        Term::from_blocks(vec![Summand {
            head: Principal::new_unchecked(0, Term::zero()),
            count: n,
        }])
    }

    /// `ω = θ₀(1)`.
    pub fn omega() -> Term {
        theta(0, Term::one()).unwrap()
    }

    /// `Ωᵢ = θᵢ(0)`; `Ω₀ = 1`.
    pub fn big_omega(i: u32) -> Term {
        Principal::new_unchecked(i, Term::zero()).to_term()
    }

    /// `ε₀ = θ₀(Ω₁)`.
    pub fn epsilon0() -> Term {
        theta(0, Term::big_omega(1)).unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn blocks(&self) -> &[Summand] {
        &self.0
    }

    /// Summands expanded one principal at a time.
    pub fn summands(&self) -> impl Iterator<Item = &Principal> + '_ {
        self.0
            .iter()
            .flat_map(|s| std::iter::repeat_n(&s.head, s.count as usize))
    }

    pub fn summand_count(&self) -> u64 {
        self.0.iter().map(|s| s.count).sum()
    }

    pub fn leading(&self) -> Option<&Principal> {
        self.0.first().map(|s| &s.head)
    }

    pub fn last(&self) -> Option<&Principal> {
        self.0.last().map(|s| &s.head)
    }

    /// The principal if the term is a single additive principal.
    pub fn as_principal(&self) -> Option<&Principal> {
        match &*self.0 {
            [s] if s.count == 1 => Some(&s.head),
            _ => None,
        }
    }

    pub fn is_principal(&self) -> bool {
        self.as_principal().is_some()
    }

    pub fn max_index(&self) -> Option<u32> {
        self.0.first().map(|s| s.head.index())
    }

    /// Node count: every θ application counts once, zero counts nothing.
    pub fn size(&self) -> u64 {
        self.0.iter().map(|s| s.count * s.head.size()).sum()
    }

    /// `Some(n)` if the term is the numeral `n`.
    pub fn as_nat(&self) -> Option<u64> {
        match &*self.0 {
            [] => Some(0),
            [s] if s.head.is_one() => Some(s.count),
            _ => None,
        }
    }

    pub fn is_successor(&self) -> bool {
        self.last().is_some_and(Principal::is_one)
    }

    pub fn is_limit(&self) -> bool {
        !self.is_zero() && !self.is_successor()
    }

    /// Drops one copy of the last summand.
    pub(crate) fn drop_last(&self) -> Term {
        let mut v = self.0.to_vec();
        if let Some(last) = v.last_mut() {
            if last.count > 1 {
                last.count -= 1;
            } else {
                v.pop();
            }
        }
        Term::from_blocks(v)
    }

    /// Splits off the maximal tail block `η·l`, returning `(ξ, η, l)`.
    pub(crate) fn split_last_block(&self) -> Option<(Term, Principal, u64)> {
        let (last, rest) = self.0.split_last()?;
        Some((Term::from_blocks(rest.to_vec()), last.head.clone(), last.count))
    }

    /// Built from `θ₀` alone, hence below `ε₀`.
    pub fn below_epsilon0(&self) -> bool {
        self.0.iter().all(|s| s.head.below_epsilon0())
    }

    /// Is the term below `Ω₁`?
    pub fn is_countable(&self) -> bool {
        self.max_index().is_none_or(|i| i == 0)
    }

    /// Appends `p` to `self` without absorption; caller guarantees ANF.
    pub(crate) fn push(&self, p: &Principal, n: u64) -> Term {
        if n == 0 {
            return self.clone();
        }
        let mut v = self.0.to_vec();
        match v.last_mut() {
            Some(last) if last.head == *p => last.count += n,
            _ => v.push(Summand {
                head: p.clone(),
                count: n,
            }),
        }
        Term::from_blocks(v)
    }

    /// Visits every principal subterm, depth first, including heads of `self`.
    pub fn for_each_principal(&self, f: &mut impl FnMut(&Principal)) {
        for s in self.blocks() {
            f(&s.head);
            s.head.arg().for_each_principal(f);
        }
    }
}

/// Canonical principal term `θᵢ(arg)`.
pub fn theta(i: u32, arg: Term) -> Result<Term> {
    Ok(Principal::new(i, arg)?.to_term())
}

/// Ordinal addition with left absorption.
pub fn add(a: &Term, b: &Term) -> Term {
    let Some(lead) = b.leading() else {
        return a.clone();
    };
    let mut v: Vec<Summand> = Vec::with_capacity(a.blocks().len() + b.blocks().len());
    let keep = a
        .blocks()
        .partition_point(|s| compare_principal(&s.head, lead) != Ordering::Less);
    v.extend_from_slice(&a.blocks()[..keep]);
    let mut rest = b.blocks().iter();
    if let (Some(last), Some(first)) = (v.last_mut(), b.blocks().first()) {
        if last.head == first.head {
            last.count += first.count;
            rest.next();
        }
    }
    v.extend(rest.cloned());
    Term::from_blocks(v)
}

/// Sum of an arbitrary sequence of principals, normalized left to right.
pub fn sum_of<'a>(parts: impl IntoIterator<Item = &'a Principal>) -> Term {
    parts
        .into_iter()
        .fold(Term::zero(), |acc, p| add(&acc, &p.to_term()))
}

/// `p · n` for an additive principal `p` and `n > 0`.
pub fn times_nat(p: &Term, n: u64) -> Result<Term> {
    let head = p
        .as_principal()
        .ok_or_else(|| OrdinalError::NotPrincipal(p.to_string()))?;
    if n == 0 {
        return Err(OrdinalError::ArgumentOutOfRange(
            "multiplier must be positive".into(),
        ));
    }
    Ok(Term::from_blocks(vec![Summand {
        head: head.clone(),
        count: n,
    }]))
}

pub fn compare(a: &Term, b: &Term) -> Ordering {
    let (mut x, mut y) = (a.blocks().iter(), b.blocks().iter());
    loop {
        match (x.next(), y.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(s), Some(t)) => {
                let c = compare_principal(&s.head, &t.head);
                if c != Ordering::Equal {
                    return c;
                }
                if s.count != t.count {
                    return s.count.cmp(&t.count);
                }
            }
        }
    }
}

/// Principal comparison: indices first (the images of `θᵢ` are the
/// intervals `[Ωᵢ, Ω_{i+1})`), then the ⋆-rule on arguments.
pub fn compare_principal(a: &Principal, b: &Principal) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let i = a.index();
    match i.cmp(&b.index()) {
        Ordering::Equal => {}
        c => return c,
    }
    if a.size().min(b.size()) < MEMO_MIN_SIZE {
        return compare_same_index(i, a, b);
    }
    let key = (a.clone(), b.clone());
    if let Some(c) = COMPARISONS.with(|m| m.borrow().get(&key).copied()) {
        return c;
    }
    let c = compare_same_index(i, a, b);
    COMPARISONS.with(|m| cache_put(&mut m.borrow_mut(), key, c));
    c
}

// principals below this size are compared and starred without caching
const MEMO_MIN_SIZE: u64 = 6;
const MEMO_CAP: usize = 1 << 18;

thread_local! {
    static COMPARISONS: RefCell<HashMap<(Principal, Principal), Ordering>> = RefCell::new(HashMap::new());
    static STARS: RefCell<HashMap<(Principal, u32), Option<Principal>>> = RefCell::new(HashMap::new());
}

fn cache_put<K: Hash + Eq, V>(m: &mut HashMap<K, V>, k: K, v: V) {
    if m.len() >= MEMO_CAP {
        m.clear();
    }
    m.insert(k, v);
}

fn compare_same_index(i: u32, a: &Principal, b: &Principal) -> Ordering {
    match compare(a.arg(), b.arg()) {
        Ordering::Equal => Ordering::Equal,
        Ordering::Less => match star_principal(i, a.arg()) {
            Some(s) if compare_principal(&s, b) != Ordering::Less => Ordering::Greater,
            _ => Ordering::Less,
        },
        Ordering::Greater => match star_principal(i, b.arg()) {
            Some(s) if compare_principal(&s, a) != Ordering::Less => Ordering::Less,
            _ => Ordering::Greater,
        },
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        compare(self, other)
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Principal {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_principal(self, other)
    }
}

impl PartialOrd for Principal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Largest `θᵢ`-subterm, treating `θⱼ` for `j < i` as atomic.
pub fn star_principal(i: u32, a: &Term) -> Option<Principal> {
    let mut best: Option<Principal> = None;
    for s in a.blocks() {
        let p = &s.head;
        let (cand, done) = match p.index().cmp(&i) {
            Ordering::Less => (None, true),
            // later blocks are smaller and have index at most i
            Ordering::Equal => (Some(p.clone()), true),
            Ordering::Greater => (star_inside(i, p), false),
        };
        if let Some(c) = cand {
            if best
                .as_ref()
                .is_none_or(|b| compare_principal(&c, b) == Ordering::Greater)
            {
                best = Some(c);
            }
        }
        if done {
            break;
        }
    }
    best
}

// the ⋆ᵢ of the argument of `p`, whose index exceeds `i`
fn star_inside(i: u32, p: &Principal) -> Option<Principal> {
    if p.size() < MEMO_MIN_SIZE {
        return star_principal(i, p.arg());
    }
    let key = (p.clone(), i);
    if let Some(s) = STARS.with(|m| m.borrow().get(&key).cloned()) {
        return s;
    }
    let s = star_principal(i, p.arg());
    STARS.with(|m| cache_put(&mut m.borrow_mut(), key, s.clone()));
    s
}

/// `a^{⋆i}` as a term (zero if there is no such subterm).
pub fn star(i: u32, a: &Term) -> Term {
    star_principal(i, a).map_or_else(Term::zero, |p| p.to_term())
}

/// An argument of `θᵢ` split as `Δ + η` with `Ω_{i+1} | Δ` and `η < Ω_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArgSplit {
    pub delta: Term,
    pub eta: Term,
}

fn split_unchecked(i: u32, xi: &Term) -> ArgSplit {
    let cut = xi
        .blocks()
        .iter()
        .position(|s| s.head.index() <= i)
        .unwrap_or(xi.blocks().len());
    ArgSplit {
        delta: Term::from_blocks(xi.blocks()[..cut].to_vec()),
        eta: Term::from_blocks(xi.blocks()[cut..].to_vec()),
    }
}

pub fn split_arg(i: u32, xi: &Term) -> Result<ArgSplit> {
    if xi.max_index().is_some_and(|m| m > i + 1) {
        return Err(OrdinalError::ArgumentOutOfRange(format!(
            "{xi} is not below W{}",
            i + 2
        )));
    }
    Ok(split_unchecked(i, xi))
}

/// `F_i(Δ, η)`: `η = θᵢ(Γ+ρ)` with `Γ > Δ` and `η > Δ^{⋆i}`.
pub fn holds_f(i: u32, delta: &Term, eta: &Term) -> bool {
    let Some(p) = eta.as_principal() else {
        return false;
    };
    if p.index() != i {
        return false;
    }
    let gamma = p.split().delta;
    if compare(&gamma, delta) != Ordering::Greater {
        return false;
    }
    match star_principal(i, delta) {
        None => true,
        Some(s) => compare_principal(p, &s) == Ordering::Greater,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Class {
    Zero,
    Successor(Term),
    Limit,
}

pub fn classify(a: &Term) -> Class {
    if a.is_zero() {
        Class::Zero
    } else if a.is_successor() {
        Class::Successor(a.drop_last())
    } else {
        Class::Limit
    }
}

/// Characteristic function `χ^{Ω_{i+1}}`.
pub fn chi(i: u32, a: &Term) -> bool {
    let bound = Term::big_omega(i + 1);
    match compare(a, &bound) {
        Ordering::Less => false,
        Ordering::Equal => true,
        Ordering::Greater => match a.as_principal() {
            None => chi(i, &a.last().expect("nonzero").to_term()),
            Some(p) => {
                let ArgSplit { delta, eta } = p.split();
                if !eta.is_limit() || holds_f(p.index(), &delta, &eta) {
                    chi(i, &delta)
                } else {
                    chi(i, &eta)
                }
            }
        },
    }
}

/// `d(a)`: `i+1` if `χ^{Ω_{i+1}}(a) = 1`, else 0 (countable cofinality).
pub fn degree(a: &Term) -> u32 {
    let Some(top) = a.max_index() else { return 0 };
    (0..top)
        .find(|&i| chi(i, a))
        .map_or(0, |i| i + 1)
}

/// The `Ωᵢ`-localization `Ωᵢ = α₀ < α₁ < … < α_m = a` of a principal `θᵢ`-term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Localization {
    pub index: u32,
    pub chain: Vec<Term>,
}

impl Localization {
    /// `α_{m-1}`, or `None` when `m = 0`.
    pub fn predecessor(&self) -> Option<&Term> {
        let n = self.chain.len();
        (n >= 2).then(|| &self.chain[n - 2])
    }

    /// The `m` of the chain.
    pub fn len(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.chain.len() == 1
    }
}

fn uncollapsed(i: u32, a: &Term, seen: &mut HashSet<Principal>, out: &mut Vec<Principal>) {
    for s in a.blocks() {
        let p = &s.head;
        if p.index() < i || !seen.insert(p.clone()) {
            continue;
        }
        if p.index() == i {
            out.push(p.clone());
        }
        uncollapsed(i, p.arg(), seen, out);
    }
}

thread_local! {
    static LOCALIZATIONS: RefCell<HashMap<Principal, Localization>> = RefCell::new(HashMap::new());
}

const LOCALIZATION_CACHE: usize = 1 << 16;

pub fn localization(i: u32, a: &Term) -> Result<Localization> {
    let p = a
        .as_principal()
        .filter(|p| p.index() == i)
        .ok_or_else(|| OrdinalError::NotPrincipal(format!("{a} is not a t{i}-term")))?;
    localize(p)
}

pub(crate) fn localize(p: &Principal) -> Result<Localization> {
    if let Some(l) = LOCALIZATIONS.with(|m| m.borrow().get(p).cloned()) {
        return Ok(l);
    }
    let l = localize_uncached(p)?;
    LOCALIZATIONS.with(|m| {
        let mut m = m.borrow_mut();
        if m.len() >= LOCALIZATION_CACHE {
            m.clear();
        }
        m.insert(p.clone(), l.clone());
    });
    Ok(l)
}

fn localize_uncached(p: &Principal) -> Result<Localization> {
    let i = p.index();
    let base = Term::big_omega(i);
    if p.is_omega_base() {
        return Ok(Localization {
            index: i,
            chain: vec![base],
        });
    }
    let top_level = p.split().delta;
    let mut cands = Vec::new();
    uncollapsed(i, &p.to_term(), &mut HashSet::new(), &mut cands);
    // only candidates above the top level can precede it
    let mut cands: Vec<(Principal, Term)> = cands
        .into_iter()
        .filter(|c| c != p && !c.is_omega_base())
        .map(|c| {
            let level = c.split().delta;
            (c, level)
        })
        .filter(|(_, level)| *level > top_level)
        .collect();
    cands.sort_by(|x, y| compare_principal(&x.0, &y.0));
    let n = cands.len();
    // rank levels, larger levels first
    let mut by_level: Vec<usize> = (0..n).collect();
    by_level.sort_by(|&x, &y| compare(&cands[y].1, &cands[x].1));
    let mut rank = vec![0usize; n];
    for w in 1..n {
        let (prev, cur) = (by_level[w - 1], by_level[w]);
        rank[cur] = rank[prev] + usize::from(cands[prev].1 != cands[cur].1);
    }
    // longest chain ending at each candidate, via prefix maxima over higher levels
    let mut fenwick = vec![0usize; n + 1];
    let mut len = vec![0usize; n];
    for c in 0..n {
        let mut best = 0;
        let mut j = rank[c];
        while j > 0 {
            best = best.max(fenwick[j]);
            j &= j - 1;
        }
        len[c] = best + 1;
        let mut j = rank[c] + 1;
        while j <= n {
            fenwick[j] = fenwick[j].max(len[c]);
            j += j & j.wrapping_neg();
        }
    }
    // among maximal chains, take the largest predecessor at every step
    let mut chain = vec![p.to_term()];
    let mut need = len.iter().copied().max().unwrap_or(0);
    let mut bound = n;
    let mut level = top_level;
    while need > 0 {
        let d = (0..bound)
            .rev()
            .find(|&d| len[d] == need && cands[d].1 > level)
            .expect("a maximal chain continues");
        chain.push(cands[d].0.to_term());
        level = cands[d].1.clone();
        bound = d;
        need -= 1;
    }
    chain.push(base);
    chain.reverse();
    Ok(Localization { index: i, chain })
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::format_term(self, false))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::format_term(self, true))
    }
}

impl fmt::Display for Principal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_term(), f)
    }
}

impl fmt::Debug for Principal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.to_term(), f)
    }
}

impl fmt::Debug for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}*{}", self.head, self.count)
    }
}
