//! Capacities over a localization `R_p` (a DVR, or `Z/p^k` for the `Z/n` backend),
//! by counting summands. Free summands behave as exponent `∞`.

use crate::error::{Error, Result};
use crate::module::{Capacity, Kind, LocalModule};

fn same_prime(a: &LocalModule, b: &LocalModule) -> Result<()> {
    match (&a.prime, &b.prime) {
        (Some(p), Some(q)) if p != q => Err(Error::MismatchedPrimes(p.to_string(), q.to_string())),
        _ => Ok(()),
    }
}

/// `min floor(num/den)` over constraints with `den > 0`; `∞` when there are none.
fn quotient_min(pairs: impl IntoIterator<Item = (u64, u64)>) -> Capacity {
    Capacity::min_of(pairs.into_iter().filter(|(_, d)| *d > 0).map(|(n, d)| Capacity::Finite(n / d)))
}

/// `c(k) = #{e ≥ k} + free`.
fn count(m: &LocalModule, k: u32) -> u64 {
    m.torsion_count(k) + u64::from(m.free)
}

/// `A ↠ B^t` iff `t·c_B(k) ≤ c_A(k)` for `k = 1..maxexp(B)` and for `k = ∞`.
pub fn sur_local(a: &LocalModule, b: &LocalModule) -> Result<Capacity> {
    same_prime(a, b)?;
    let finite = (1..=b.max_exp()).map(|k| (count(a, k), count(b, k)));
    let infinite = std::iter::once((u64::from(a.free), u64::from(b.free)));
    Ok(quotient_min(finite.chain(infinite)))
}

/// Krull-Schmidt: `B^t` is a summand of `A` iff every indecomposable type occurs in `A`
/// at least `t` times as often as in `B`.
pub fn spl_local(a: &LocalModule, b: &LocalModule) -> Result<Capacity> {
    same_prime(a, b)?;
    let mult = |m: &LocalModule, e: u32| m.exps.iter().filter(|x| **x == e).count() as u64;
    let mut types: Vec<u32> = b.exps.clone();
    types.dedup();
    let torsion = types.into_iter().map(|e| (mult(a, e), mult(b, e)));
    let free = std::iter::once((u64::from(a.free), u64::from(b.free)));
    Ok(quotient_min(torsion.chain(free)))
}

/// `B^t ↪ A` iff `Tor(B)^t ↪ Tor(A)` (counted without free parts) and
/// `t·rank(B) ≤ rank(A)`.
pub fn inj_local(a: &LocalModule, b: &LocalModule) -> Result<Capacity> {
    same_prime(a, b)?;
    let torsion = (1..=b.max_exp()).map(|k| (a.torsion_count(k), b.torsion_count(k)));
    let free = std::iter::once((u64::from(a.free), u64::from(b.free)));
    Ok(quotient_min(torsion.chain(free)))
}

pub fn local_capacity(kind: Kind, a: &LocalModule, b: &LocalModule) -> Result<Capacity> {
    match kind {
        Kind::Sur => sur_local(a, b),
        Kind::Spl => spl_local(a, b),
        Kind::Inj => inj_local(a, b),
    }
}
