//! Global capacities over Dedekind domains and `Z/n`.
//!
//! For `sur`/`spl` with `N ≠ 0`, `r = rank M`, `s = rank N` and
//! `t_loc = min_{m ∈ Ass(N)−{0}} local(M_m, N_m)`, the value is `≥ t` iff `t ≤ t_loc` and
//! either `s = 0`, or `r ≥ 1 + t·s`, or `r = t·s ≥ t` with `[M] = [N]^t`.
//! `inj` is the minimum of the local values over `Ass(N)` including the zero prime.
//! Over `Z/n` everything splits over the factors `Z/p^k`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::local::local_capacity;
use crate::module::{Capacity, FGModule, Kind};
use crate::ring::{ClassElement, PrimeId, RingDescriptor};
use crate::witness::Witness;

/// Where a local value was taken.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Site {
    Prime(PrimeId),
    /// Every maximal ideal outside `Ass(M) ∪ Ass(N)` (all give the same value).
    Generic,
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Prime(p) => write!(f, "{p}"),
            Site::Generic => write!(f, "generic"),
        }
    }
}

impl Serialize for Site {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalValue {
    pub prime: Site,
    /// Whether the site is a maximal ideal (as opposed to the zero prime).
    pub maximal: bool,
    pub value: Capacity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankData {
    pub r: u32,
    pub s: u32,
    /// `max(0, floor((r-1)/s))` for `s ≥ 1` over a domain; `∞` otherwise.
    pub t_rank: Capacity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassCheck {
    pub t: u64,
    pub class_m: ClassElement,
    pub class_n_pow: ClassElement,
    pub equal: bool,
}

/// The clause that decided a value or a `≥ t` test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `N = 0`: the value is `∞`.
    ZeroTarget,
    /// `t = 0` always holds.
    Trivial,
    /// `rank N = 0`: only the local values over `Ass(N)` matter.
    TorsionTarget,
    /// `rank M ≥ 1 + t·rank N` with local values `≥ t`.
    RankInequality,
    /// `rank M = t·rank N ≥ t`, `[M] = [N]^t`, local values `≥ t`.
    ClassEquality,
    /// Some local value at a prime of `Ass(N)` is below `t` (for `t = 1`: is zero).
    LocalFailure,
    /// `rank N ≥ 1 + rank M` (or, for `t > 1`, `rank M < t·rank N`).
    RankDeficit,
    /// `rank M = t·rank N ≥ t` but `[M] ≠ [N]^t`.
    ClassMismatch,
    /// Injective capacity: minimum over `Ass(N)` including the zero prime.
    LocalMinimum,
    /// `Z/n`: minimum over the factors `Z/p^k`.
    ProductOfLocal,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
        f.write_str(&s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CapacityReport {
    pub kind: Kind,
    pub value: Capacity,
    pub local_values: Vec<LocalValue>,
    pub rank_data: RankData,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_check: Option<ClassCheck>,
    pub condition: Condition,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CapacityReport {
    /// Minimum of the local values at maximal ideals in the support of `N`.
    pub fn min_maximal_local(&self) -> Capacity {
        Capacity::min_of(self.local_values.iter().filter(|l| l.maximal).map(|l| l.value))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeqReport {
    pub kind: Kind,
    pub t: u64,
    pub holds: bool,
    pub condition: Condition,
}

/// Local value, `Ass(N)` data and ranks shared by all kinds.
struct Setup {
    r: u32,
    s: u32,
    domain: bool,
    /// Local values over `Ass(N) − {0}`.
    at_ass: Vec<LocalValue>,
    t_loc: Capacity,
}

fn setup(kind: Kind, m: &FGModule, n: &FGModule, budget: &Budget) -> Result<Setup> {
    if m.ring() != n.ring() {
        return Err(Error::MixedRings);
    }
    let mut at_ass = Vec::new();
    for p in n.ass(false, budget)? {
        let value = local_capacity(kind, &m.localize(&p)?, &n.localize(&p)?)?;
        at_ass.push(LocalValue { prime: Site::Prime(p), maximal: true, value });
    }
    let t_loc = Capacity::min_of(at_ass.iter().map(|l| l.value));
    Ok(Setup { r: m.rank(), s: n.rank(), domain: m.ring().is_domain(), at_ass, t_loc })
}

fn floor_div(a: u32, b: u32) -> Capacity {
    Capacity::Finite(u64::from(a / b))
}

fn rank_data(st: &Setup) -> RankData {
    let t_rank = if st.domain && st.s > 0 {
        Capacity::Finite(u64::from(st.r.saturating_sub(1) / st.s))
    } else {
        Capacity::Infinite
    };
    RankData { r: st.r, s: st.s, t_rank }
}

/// Local values including the zero prime and a generic maximal ideal (when `rank N ≥ 1`
/// over a domain, where both equal `floor(r/s)` for every kind).
fn all_local_values(st: &Setup) -> Vec<LocalValue> {
    let mut out = st.at_ass.clone();
    if st.domain && st.s > 0 {
        let v = floor_div(st.r, st.s);
        out.push(LocalValue { prime: Site::Prime(PrimeId::Zero), maximal: false, value: v });
        out.push(LocalValue { prime: Site::Generic, maximal: true, value: v });
    }
    out
}

fn class_check(m: &FGModule, n: &FGModule, t: u64) -> Result<ClassCheck> {
    let ring = m.ring();
    let class_n_pow = ring.power(n.steinitz(), t)?;
    let equal = ring.class_eq(m.steinitz(), &class_n_pow)?;
    Ok(ClassCheck { t, class_m: m.steinitz().clone(), class_n_pow, equal })
}

fn sur_like(kind: Kind, m: &FGModule, n: &FGModule, budget: &Budget) -> Result<CapacityReport> {
    let st = setup(kind, m, n, budget)?;
    let mut report = CapacityReport {
        kind,
        value: Capacity::Infinite,
        local_values: all_local_values(&st),
        rank_data: rank_data(&st),
        class_check: None,
        condition: Condition::ZeroTarget,
        witness: None,
    };
    if n.is_zero() {
        return Ok(report);
    }
    if !st.domain {
        report.value = st.t_loc;
        report.condition = if st.t_loc == Capacity::Finite(0) { Condition::LocalFailure } else { Condition::ProductOfLocal };
        return Ok(report);
    }
    if st.s == 0 {
        report.value = st.t_loc;
        report.condition = if st.t_loc == Capacity::Finite(0) { Condition::LocalFailure } else { Condition::TorsionTarget };
        return Ok(report);
    }
    let (r, s) = (st.r, st.s);
    let t2 = st.t_loc.min(Capacity::Finite(u64::from(r.saturating_sub(1) / s)));
    let mut t3 = None;
    if r % s == 0 && r / s >= 1 {
        let k = u64::from(r / s);
        let check = class_check(m, n, k)?;
        if check.equal && st.t_loc.at_least(k) {
            t3 = Some(k);
        }
        report.class_check = Some(check);
    }
    match t3 {
        Some(k) if Capacity::Finite(k) > t2 => {
            report.value = Capacity::Finite(k);
            report.condition = Condition::ClassEquality;
        }
        _ => {
            report.value = t2;
            report.condition = if t2 != Capacity::Finite(0) {
                Condition::RankInequality
            } else if st.t_loc == Capacity::Finite(0) {
                Condition::LocalFailure
            } else if r < s {
                Condition::RankDeficit
            } else {
                // r = s: the class test at t = 1 failed
                Condition::ClassMismatch
            };
        }
    }
    Ok(report)
}

pub fn sur_global(m: &FGModule, n: &FGModule, budget: &Budget) -> Result<CapacityReport> {
    sur_like(Kind::Sur, m, n, budget)
}

pub fn spl_global(m: &FGModule, n: &FGModule, budget: &Budget) -> Result<CapacityReport> {
    sur_like(Kind::Spl, m, n, budget)
}

pub fn inj_global(m: &FGModule, n: &FGModule, budget: &Budget) -> Result<CapacityReport> {
    let st = setup(Kind::Inj, m, n, budget)?;
    let local_values = all_local_values(&st);
    let mut value = st.t_loc;
    if st.domain && st.s > 0 {
        value = value.min(floor_div(st.r, st.s));
    }
    let condition = if n.is_zero() {
        Condition::ZeroTarget
    } else if st.domain {
        Condition::LocalMinimum
    } else {
        Condition::ProductOfLocal
    };
    Ok(CapacityReport {
        kind: Kind::Inj,
        value,
        local_values,
        rank_data: rank_data(&st),
        class_check: None,
        condition,
        witness: None,
    })
}

pub fn capacity(kind: Kind, m: &FGModule, n: &FGModule, budget: &Budget) -> Result<CapacityReport> {
    match kind {
        Kind::Sur => sur_global(m, n, budget),
        Kind::Spl => spl_global(m, n, budget),
        Kind::Inj => inj_global(m, n, budget),
    }
}

/// Evaluates the clause test for `kind(M, N) ≥ t` directly, without computing the value.
pub fn geq(kind: Kind, m: &FGModule, n: &FGModule, t: u64, budget: &Budget) -> Result<GeqReport> {
    let st = setup(kind, m, n, budget)?;
    let verdict = |holds, condition| Ok(GeqReport { kind, t, holds, condition });
    if n.is_zero() {
        return verdict(true, Condition::ZeroTarget);
    }
    if t == 0 {
        return verdict(true, Condition::Trivial);
    }
    let local_ok = st.t_loc.at_least(t);
    if !st.domain {
        return verdict(local_ok, if local_ok { Condition::ProductOfLocal } else { Condition::LocalFailure });
    }
    if kind == Kind::Inj {
        let free_ok = st.s == 0 || u64::from(st.r) >= t * u64::from(st.s);
        return verdict(local_ok && free_ok, if local_ok { Condition::LocalMinimum } else { Condition::LocalFailure });
    }
    if !local_ok {
        return verdict(false, Condition::LocalFailure);
    }
    if st.s == 0 {
        return verdict(true, Condition::TorsionTarget);
    }
    let (r, ts) = (u64::from(st.r), t * u64::from(st.s));
    if r > ts {
        return verdict(true, Condition::RankInequality);
    }
    if r < ts {
        return verdict(false, Condition::RankDeficit);
    }
    let holds = class_check(m, n, t)?.equal;
    verdict(holds, if holds { Condition::ClassEquality } else { Condition::ClassMismatch })
}

/// Why `sur(M, N) = 0`, checking the three possible reasons in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroReason {
    LocalFailure,
    RankDeficit,
    ClassMismatch,
    Nonzero,
}

pub fn sur_zero_reason(m: &FGModule, n: &FGModule, budget: &Budget) -> Result<ZeroReason> {
    let st = setup(Kind::Sur, m, n, budget)?;
    if n.is_zero() {
        return Ok(ZeroReason::Nonzero);
    }
    if st.t_loc == Capacity::Finite(0) {
        return Ok(ZeroReason::LocalFailure);
    }
    if st.domain && st.s >= 1 + st.r {
        return Ok(ZeroReason::RankDeficit);
    }
    if st.domain && st.r == st.s && st.s >= 1 && !m.ring().class_eq(m.steinitz(), n.steinitz())? {
        return Ok(ZeroReason::ClassMismatch);
    }
    Ok(ZeroReason::Nonzero)
}

/// Splits a `Z/n` module into its components over `Z/p^k`, one per `p^k ‖ n`.
pub fn split_zmod(m: &FGModule, budget: &Budget) -> Result<Vec<(u64, FGModule)>> {
    let RingDescriptor::IntegersMod { .. } = m.ring() else {
        return Err(Error::Unsupported("only Z/n modules split into prime-power components".into()));
    };
    let mut out = Vec::new();
    for (p, k) in m.ring().modulus_primes(budget)? {
        let q = p.pow(k);
        let local = m.localize(&PrimeId::Rational(p))?;
        let orders: Vec<u64> = local.exps.iter().map(|e| p.pow(*e)).collect();
        out.push((p, FGModule::over_zmod(q, 0, &orders)?));
    }
    Ok(out)
}

/// Capacity of a finite product of rings: the minimum over the components. `Z/n`
/// components are first split into their `Z/p^k` factors.
pub fn product_capacity(kind: Kind, components: &[(FGModule, FGModule)], budget: &Budget) -> Result<Capacity> {
    let mut values = Vec::new();
    for (m, n) in components {
        if let RingDescriptor::IntegersMod { .. } = m.ring() {
            if m.ring() != n.ring() {
                return Err(Error::MixedRings);
            }
            for ((_, mp), (_, np)) in split_zmod(m, budget)?.iter().zip(&split_zmod(n, budget)?) {
                values.push(capacity(kind, mp, np, budget)?.value);
            }
        } else {
            values.push(capacity(kind, m, n, budget)?.value);
        }
    }
    Ok(Capacity::min_of(values))
}
