//! Brute-force ground truth over finite `p`-groups `⊕ Z/p^e_i`.
//!
//! Two layers. The literal layer enumerates every homomorphism and inspects images,
//! kernels and composites; it is only usable on tiny modules. The search layer decides
//! the same questions by exhaustive search over reduced data:
//! - surjections `A → C`: by Nakayama a map is onto iff it is onto `C/pC`, and the
//!   possible images of a generator of order `p^e` in `C/pC` are exactly the
//!   coordinate subspace spanned by the summands of `C` with exponent `≤ e`;
//! - injections `C → A`: a map of `p`-groups is injective iff it is injective on the
//!   socle `C[p]`, and the possible socle images of a summand of exponent `f` are the
//!   coordinate subspace of `A[p]` spanned by summands of exponent `≥ f`;
//! - split surjections `A → C`: exist iff `A ≅ C ⊕ X` for some `X`; every candidate `X`
//!   of the right order is tried and isomorphism is tested by the counts `|G[p^k]|`.
//!
//! Both layers are cross-checked against each other in the tests.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::ops::ControlFlow;

use crate::arith::{factorize, is_prime};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::module::{Capacity, Kind, LocalModule};

/// `⊕ Z/p^e_i` with exponents stored descending. The zero module has no prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteModule {
    p: Option<u64>,
    exps: Vec<u32>,
}

impl FiniteModule {
    /// From cyclic orders; every order must be a power of one common prime (1s are dropped).
    pub fn new(orders: &[u64]) -> Result<Self> {
        let mut p = None;
        let mut exps = Vec::new();
        for &q in orders {
            if q == 0 {
                return Err(Error::InvalidModule("cyclic order 0 is not finite".into()));
            }
            if q == 1 {
                continue;
            }
            let f = factorize(q, &Budget::default())?;
            if f.len() != 1 {
                return Err(Error::InvalidModule(format!("{q} is not a prime power")));
            }
            let (&r, &e) = f.iter().next().unwrap();
            if p.is_some_and(|p| p != r) {
                return Err(Error::InvalidModule("all cyclic orders must be powers of the same prime".into()));
            }
            p = Some(r);
            exps.push(e);
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        Ok(FiniteModule { p, exps })
    }

    pub fn from_exps(p: u64, exps: &[u32]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        let mut exps: Vec<u32> = exps.iter().copied().filter(|e| *e > 0).collect();
        exps.sort_unstable_by(|a, b| b.cmp(a));
        Ok(FiniteModule { p: if exps.is_empty() { None } else { Some(p) }, exps })
    }

    /// A torsion local module at `p` as a finite module.
    pub fn from_local(p: u64, m: &LocalModule) -> Result<Self> {
        if m.free > 0 {
            return Err(Error::InvalidModule("free summands are infinite; use a quotient proxy".into()));
        }
        FiniteModule::from_exps(p, &m.exps)
    }

    /// Replaces each free summand of `a` by `Z/p^h` with
    /// `h = maxexp(b) + 1 + maxexp(tor a) + extra`, high enough that every count
    /// `c(k)`, `k ≤ maxexp(b)`, is unchanged. `b` must be torsion.
    pub fn quotient_proxy(p: u64, a: &LocalModule, b: &LocalModule, extra: u32) -> Result<Self> {
        if b.free > 0 {
            return Err(Error::Unsupported("quotient proxy needs a torsion target".into()));
        }
        let h = b.max_exp() + 1 + a.max_exp() + extra;
        let exps: Vec<u32> = a.exps.iter().copied().chain(std::iter::repeat(h).take(a.free as usize)).collect();
        FiniteModule::from_exps(p, &exps)
    }

    pub fn prime(&self) -> Option<u64> {
        self.p
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn orders(&self) -> Vec<u64> {
        let p = self.p.unwrap_or(1);
        self.exps.iter().map(|e| p.pow(*e)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.exps.is_empty()
    }

    /// `log_p |M|`.
    pub fn log_size(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// `|M|`, or `None` on overflow.
    pub fn size(&self) -> Option<u64> {
        match self.p {
            None => Some(1),
            Some(p) => p.checked_pow(self.log_size()),
        }
    }

    pub fn power(&self, t: u32) -> FiniteModule {
        let mut exps: Vec<u32> = (0..t).flat_map(|_| self.exps.iter().copied()).collect();
        exps.sort_unstable_by(|a, b| b.cmp(a));
        FiniteModule { p: if exps.is_empty() { None } else { self.p }, exps }
    }

    /// `log_p |M[p^k]| = Σ min(e_i, k)`; these counts determine the isomorphism type.
    fn torsion_log(&self, k: u32) -> u32 {
        self.exps.iter().map(|e| (*e).min(k)).sum()
    }

    fn check_cap(&self, budget: &Budget) -> Result<()> {
        match self.size() {
            Some(s) if s <= budget.oracle_cap => Ok(()),
            _ => Err(Error::OracleCap(format!(
                "module {self} exceeds the oracle cap of {} elements",
                budget.oracle_cap
            ))),
        }
    }
}

impl fmt::Display for FiniteModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.orders().iter().map(|q| format!("Z/{q}")).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

fn common_prime(a: &FiniteModule, b: &FiniteModule) -> Result<Option<u64>> {
    match (a.p, b.p) {
        (Some(x), Some(y)) if x != y => Err(Error::MismatchedPrimes(x.to_string(), y.to_string())),
        (x, y) => Ok(x.or(y)),
    }
}

// ---------------------------------------------------------------------------
// literal layer

/// Elements are tuples of residues, one per cyclic summand.
type Elem = Vec<u64>;

fn add(x: &[u64], y: &[u64], orders: &[u64]) -> Elem {
    x.iter().zip(y).zip(orders).map(|((a, b), q)| (a + b) % q).collect()
}

fn scale(x: &[u64], k: u64, orders: &[u64]) -> Elem {
    x.iter().zip(orders).map(|(a, q)| ((*a as u128 * k as u128) % *q as u128) as u64).collect()
}

/// Image of `x = Σ x_i a_i` under the map with generator images `images`.
fn apply(images: &[Elem], x: &[u64], target_orders: &[u64]) -> Elem {
    let mut acc = vec![0; target_orders.len()];
    for (xi, img) in x.iter().zip(images) {
        acc = add(&acc, &scale(img, *xi, target_orders), target_orders);
    }
    acc
}

/// Size of the subgroup generated by `gens`.
fn subgroup_size(gens: &[Elem], orders: &[u64]) -> usize {
    let zero = vec![0; orders.len()];
    let mut seen: HashSet<Elem> = HashSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = add(&x, g, orders);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.len()
}

/// Elements `x` of the module with `orders` and `k·x = 0`.
fn killed_by(k: u64, orders: &[u64]) -> Vec<Elem> {
    let mut out = vec![vec![]];
    for &q in orders {
        // k·x ≡ 0 mod q  ⇔  x ∈ (q/gcd(k,q))·Z/q
        let step = q / num_integer::Integer::gcd(&k, &q);
        out = out
            .into_iter()
            .flat_map(|prefix: Elem| {
                (0..q).step_by(step as usize).map(move |v| {
                    let mut e = prefix.clone();
                    e.push(v);
                    e
                })
            })
            .collect();
    }
    out
}

/// Calls `visit` with the generator images of every homomorphism `a → b`, each exactly
/// once: a generator of order `q` may go to any element of `b` killed by `q`.
pub fn enumerate_homs<F>(a: &FiniteModule, b: &FiniteModule, budget: &Budget, mut visit: F) -> Result<()>
where
    F: FnMut(&[Elem]) -> ControlFlow<()>,
{
    common_prime(a, b)?;
    a.check_cap(budget)?;
    b.check_cap(budget)?;
    let tgt = b.orders();
    let choices: Vec<Vec<Elem>> = a.orders().iter().map(|q| killed_by(*q, &tgt)).collect();
    let mut idx = vec![0usize; choices.len()];
    let mut visited = 0u64;
    loop {
        visited += 1;
        if visited > budget.oracle_nodes {
            return Err(Error::OracleCap(format!("hom enumeration {a} → {b} exceeds the node budget")));
        }
        let images: Vec<Elem> = idx.iter().zip(&choices).map(|(i, c)| c[*i].clone()).collect();
        if visit(&images).is_break() {
            return Ok(());
        }
        // odometer step
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(());
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

pub fn count_homs(a: &FiniteModule, b: &FiniteModule, budget: &Budget) -> Result<u64> {
    let mut n = 0u64;
    enumerate_homs(a, b, budget, |_| {
        n += 1;
        ControlFlow::Continue(())
    })?;
    Ok(n)
}

fn unit_vectors(orders: &[u64]) -> Vec<Elem> {
    (0..orders.len())
        .map(|i| (0..orders.len()).map(|j| u64::from(i == j)).collect())
        .collect()
}

/// `Kind` test at `t` by full enumeration of homomorphisms.
pub fn literal_geq(kind: Kind, a: &FiniteModule, b: &FiniteModule, t: u32, budget: &Budget) -> Result<bool> {
    common_prime(a, b)?;
    let c = b.power(t);
    if c.is_zero() {
        return Ok(true);
    }
    let c_size = c.size().ok_or_else(|| Error::OracleCap("B^t overflows".into()))? as usize;
    let (a_orders, c_orders) = (a.orders(), c.orders());
    let mut found = false;
    match kind {
        Kind::Sur => enumerate_homs(a, &c, budget, |img| {
            found = subgroup_size(img, &c_orders) == c_size;
            if found { ControlFlow::Break(()) } else { ControlFlow::Continue(()) }
        })?,
        Kind::Inj => enumerate_homs(&c, a, budget, |img| {
            found = subgroup_size(img, &a_orders) == c_size;
            if found { ControlFlow::Break(()) } else { ControlFlow::Continue(()) }
        })?,
        Kind::Spl => {
            // f ∘ g = id splits over the generators of C: g(c_j) may be any element of
            // A killed by ord(c_j) with f(g(c_j)) = c_j
            let units = unit_vectors(&c_orders);
            let lifts: Vec<Vec<Elem>> = c_orders.iter().map(|q| killed_by(*q, &a_orders)).collect();
            let per_map = lifts.iter().map(Vec::len).sum::<usize>() as u64;
            let mut nodes = 0u64;
            let mut over = false;
            enumerate_homs(a, &c, budget, |f| {
                nodes += per_map;
                if nodes > budget.oracle_nodes {
                    over = true;
                    return ControlFlow::Break(());
                }
                found = units.iter().zip(&lifts).all(|(ej, xs)| xs.iter().any(|x| apply(f, x, &c_orders) == *ej));
                if found { ControlFlow::Break(()) } else { ControlFlow::Continue(()) }
            })?;
            if over {
                return Err(Error::OracleCap("split search exceeds the node budget".into()));
            }
        }
    }
    Ok(found)
}

// ---------------------------------------------------------------------------
// search layer

/// Row-reduced basis of a subspace of `F_p^d`; canonical, so equal spans compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Span(Vec<Vec<u64>>);

impl Span {
    fn dim(&self) -> usize {
        self.0.len()
    }

    /// Adds `v`; returns `None` when `v` is already in the span.
    fn with(&self, v: &[u64], p: u64) -> Option<Span> {
        let mut rows = self.0.clone();
        rows.push(v.to_vec());
        let before = self.dim();
        let reduced = rref(rows, p);
        (reduced.len() > before).then_some(Span(reduced))
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    crate::arith::pow_mod(a, p - 2, p)
}

fn rref(mut rows: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let d = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..d {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] % p != 0) else { continue };
        rows.swap(r, piv);
        let inv = inv_mod(rows[r][col], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let k = rows[i][col];
                for j in 0..d {
                    rows[i][j] = (rows[i][j] + (p - k) * rows[r][j]) % p;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// One vector per line of `F_p^d` supported on the coordinates in `mask` (first nonzero
/// entry 1), plus zero. Scaling a choice never changes the span it produces.
fn vectors_on(mask: &[bool], p: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &allowed in mask {
        let range = if allowed { 0..p } else { 0..1 };
        out = out
            .into_iter()
            .flat_map(|pre: Vec<u64>| {
                range.clone().map(move |v| {
                    let mut e = pre.clone();
                    e.push(v);
                    e
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().find(|x| **x != 0).map_or(true, |x| *x == 1));
    out
}

/// Level-by-level search over choices `v_i ∈ span(mask_i)`, deduplicating reachable
/// spans. `independent`: every choice must enlarge the span (injectivity); otherwise
/// success means reaching all of `F_p^d` (surjectivity).
fn choose(d: usize, masks: &[Vec<bool>], p: u64, independent: bool, budget: &Budget) -> Result<bool> {
    let mut level: BTreeSet<Span> = BTreeSet::from([Span(vec![])]);
    let mut nodes = 0u64;
    for (i, mask) in masks.iter().enumerate() {
        let remaining = masks.len() - i - 1;
        let vs = vectors_on(mask, p);
        let mut next = BTreeSet::new();
        for s in &level {
            if !independent && s.dim() == d {
                return Ok(true);
            }
            for v in &vs {
                nodes += 1;
                if nodes > budget.oracle_nodes {
                    return Err(Error::OracleCap("subspace search exceeds the node budget".into()));
                }
                match s.with(v, p) {
                    Some(bigger) => {
                        if independent || bigger.dim() + remaining >= d {
                            next.insert(bigger);
                        }
                    }
                    None if !independent => {
                        if s.dim() + remaining >= d {
                            next.insert(s.clone());
                        }
                    }
                    None => {}
                }
            }
        }
        level = next;
        if level.is_empty() {
            return Ok(false);
        }
    }
    Ok(if independent { !level.is_empty() } else { level.iter().any(|s| s.dim() == d) })
}

fn sur_search(a: &FiniteModule, c: &FiniteModule, p: u64, budget: &Budget) -> Result<bool> {
    let d = c.exps.len();
    if d > a.exps.len() || c.log_size() > a.log_size() {
        return Ok(false);
    }
    let masks: Vec<Vec<bool>> = a.exps.iter().map(|e| c.exps.iter().map(|f| f <= e).collect()).collect();
    choose(d, &masks, p, false, budget)
}

fn inj_search(a: &FiniteModule, c: &FiniteModule, p: u64, budget: &Budget) -> Result<bool> {
    if c.exps.len() > a.exps.len() || c.log_size() > a.log_size() {
        return Ok(false);
    }
    let masks: Vec<Vec<bool>> = c.exps.iter().map(|f| a.exps.iter().map(|e| e >= f).collect()).collect();
    choose(a.exps.len(), &masks, p, true, budget)
}

/// Partitions of `total` into at most `max_parts` parts, each `≤ max_part`, descending.
fn partitions(total: u32, max_part: u32, max_parts: usize) -> Vec<Vec<u32>> {
    if total == 0 {
        return vec![vec![]];
    }
    if max_parts == 0 || max_part == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    for first in (1..=max_part.min(total)).rev() {
        for mut rest in partitions(total - first, first, max_parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn spl_search(a: &FiniteModule, c: &FiniteModule) -> bool {
    if c.exps.len() > a.exps.len() || c.log_size() > a.log_size() {
        return false;
    }
    let top = a.exps.first().copied().unwrap_or(0);
    partitions(a.log_size() - c.log_size(), top, a.exps.len() - c.exps.len())
        .into_iter()
        .any(|x| (1..=top).all(|k| a.torsion_log(k) == c.torsion_log(k) + x.iter().map(|e| (*e).min(k)).sum::<u32>()))
}

/// Whether `kind(a, b) ≥ t`, by the search layer.
pub fn oracle_geq(kind: Kind, a: &FiniteModule, b: &FiniteModule, t: u32, budget: &Budget) -> Result<bool> {
    let Some(p) = common_prime(a, b)? else {
        // both zero
        return Ok(true);
    };
    a.check_cap(budget)?;
    let c = b.power(t);
    if c.is_zero() {
        return Ok(true);
    }
    if c.log_size() > a.log_size() {
        return Ok(false);
    }
    c.check_cap(budget)?;
    match kind {
        Kind::Sur => sur_search(a, &c, p, budget),
        Kind::Inj => inj_search(a, &c, p, budget),
        Kind::Spl => Ok(spl_search(a, &c)),
    }
}

fn capacity_by<F>(a: &FiniteModule, b: &FiniteModule, mut geq: F) -> Result<Capacity>
where
    F: FnMut(u32) -> Result<bool>,
{
    if b.is_zero() {
        return Ok(Capacity::Infinite);
    }
    // |B|^t ≤ |A| bounds t
    let bound = a.log_size() / b.log_size();
    let mut t = 0;
    while t < bound && geq(t + 1)? {
        t += 1;
    }
    Ok(Capacity::Finite(t as u64))
}

/// Largest `t` with `kind(a, b) ≥ t` (downward closed, so the first failure stops the scan).
pub fn oracle_capacity(kind: Kind, a: &FiniteModule, b: &FiniteModule, budget: &Budget) -> Result<Capacity> {
    common_prime(a, b)?;
    a.check_cap(budget)?;
    b.check_cap(budget)?;
    capacity_by(a, b, |t| oracle_geq(kind, a, b, t, budget))
}

pub fn literal_capacity(kind: Kind, a: &FiniteModule, b: &FiniteModule, budget: &Budget) -> Result<Capacity> {
    common_prime(a, b)?;
    a.check_cap(budget)?;
    b.check_cap(budget)?;
    capacity_by(a, b, |t| literal_geq(kind, a, b, t, budget))
}

/// Oracle value for local modules at `p`. Free summands of `a` go through the quotient
/// proxy (for `sur` and `spl`); `inj` uses the torsion of `a` plus rank arithmetic.
pub fn oracle_local(kind: Kind, p: u64, a: &LocalModule, b: &LocalModule, extra: u32, budget: &Budget) -> Result<Capacity> {
    if b.is_zero() {
        return Ok(Capacity::Infinite);
    }
    if b.free > 0 {
        return Err(Error::Unsupported("the oracle handles torsion targets only".into()));
    }
    let fb = FiniteModule::from_local(p, b)?;
    match kind {
        Kind::Inj => oracle_capacity(kind, &FiniteModule::from_local(p, &a.torsion())?, &fb, budget),
        _ => oracle_capacity(kind, &FiniteModule::quotient_proxy(p, a, b, extra)?, &fb, budget),
    }
}
