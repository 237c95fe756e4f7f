//! Finite abelian group tables: used both for the declared class groups of abstract
//! backends and for the enumerated form class groups of quadratic orders.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use crate::arith::factorize;
use crate::budget::Budget;

/// Converts cyclic orders `[m_1, …]` into elementary divisors `{p: [e_1 ≥ e_2 ≥ …]}`.
pub fn elementary_divisors(orders: &[u64]) -> BTreeMap<u64, Vec<u32>> {
    let mut out: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &m in orders {
        if m <= 1 {
            continue;
        }
        // orders are small declared group orders; the default budget always suffices
        let f = factorize(m, &Budget::default()).expect("class group order factorization");
        for (p, e) in f {
            out.entry(p).or_default().push(e);
        }
    }
    for v in out.values_mut() {
        v.sort_unstable_by(|a, b| b.cmp(a));
    }
    out
}

/// Invariant factors `d_1 | d_2 | … ` (ascending) from elementary divisors.
pub fn invariant_factors(divisors: &BTreeMap<u64, Vec<u32>>) -> Vec<u64> {
    let len = divisors.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for (p, exps) in divisors {
        // exps descending: the k-th largest goes to the k-th largest invariant factor
        for (k, e) in exps.iter().enumerate() {
            out[len - 1 - k] *= p.pow(*e);
        }
    }
    out
}

/// Structure of a finite abelian group given by its element list and a multiplication.
pub struct TableStructure<E> {
    pub invariants: Vec<u64>,
    pub generators: Vec<E>,
}

pub fn analyze<E, F>(elements: &[E], identity: &E, mul: F) -> TableStructure<E>
where
    E: Clone + Eq + Hash,
    F: Fn(&E, &E) -> E,
{
    let index: HashMap<E, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let id = index[identity];
    let n = elements.len();
    let mul_idx = |i: usize, j: usize| index[&mul(&elements[i], &elements[j])];
    let pow_idx = |i: usize, mut k: u64| {
        let (mut acc, mut base) = (id, i);
        while k > 0 {
            if k & 1 == 1 {
                acc = mul_idx(acc, base);
            }
            base = mul_idx(base, base);
            k >>= 1;
        }
        acc
    };

    // |G[p^k]| for every prime p | n determines the p-part
    let mut divisors: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for (p, _) in factorize(n as u64, &Budget::default()).expect("group order factorization") {
        let mut prev_log = 0u32;
        let mut counts_ge = Vec::new();
        let mut k = 1u32;
        loop {
            let q = p.pow(k);
            let size = (0..n).filter(|&i| pow_idx(i, q) == id).count() as u64;
            let mut log = 0u32;
            let mut s = size;
            while s > 1 {
                s /= p;
                log += 1;
            }
            if log == prev_log {
                break;
            }
            counts_ge.push(log - prev_log);
            prev_log = log;
            k += 1;
        }
        // counts_ge[k-1] = number of cyclic p-factors of exponent ≥ k
        let mut exps = Vec::new();
        for (k, &c) in counts_ge.iter().enumerate() {
            let next = counts_ge.get(k + 1).copied().unwrap_or(0);
            for _ in 0..(c - next) {
                exps.push(k as u32 + 1);
            }
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        divisors.insert(p, exps);
    }

    // greedy generating set
    let mut in_sub = vec![false; n];
    in_sub[id] = true;
    let mut sub = vec![id];
    let mut generators = Vec::new();
    for g in 0..n {
        if in_sub[g] {
            continue;
        }
        generators.push(elements[g].clone());
        let mut frontier = sub.clone();
        while let Some(x) = frontier.pop() {
            let y = mul_idx(x, g);
            if !in_sub[y] {
                in_sub[y] = true;
                sub.push(y);
                frontier.push(y);
            }
        }
    }
    TableStructure { invariants: invariant_factors(&divisors), generators }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_from_cyclic_orders() {
        assert_eq!(invariant_factors(&elementary_divisors(&[2, 3])), vec![6]);
        assert_eq!(invariant_factors(&elementary_divisors(&[4, 6])), vec![2, 12]);
        assert_eq!(invariant_factors(&elementary_divisors(&[])), Vec::<u64>::new());
    }

    #[test]
    fn analyze_product_group() {
        // Z/2 x Z/4 as pairs
        let els: Vec<(u64, u64)> = (0..2).flat_map(|a| (0..4).map(move |b| (a, b))).collect();
        let s = analyze(&els, &(0, 0), |x, y| ((x.0 + y.0) % 2, (x.1 + y.1) % 4));
        assert_eq!(s.invariants, vec![2, 4]);
        assert!(s.generators.len() <= 3);
    }
}
