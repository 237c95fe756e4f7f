//! Checks the known inequalities between a global capacity and its local values.
//!
//! With `Y = Max(R) ∩ Supp(N)` and `X = j-Spec(R) ∩ Supp(N)`:
//! - (a) `value ≤ min_{m ∈ Y} local(m)`;
//! - (b) `value ≥ min_{m ∈ Y} local(m) − dim(Y)`;
//! - (c) `value ≥ inf_{p ∈ X} (local(p) − dim_X(p))`;
//! - (d) `value = ∞` iff `N = 0`;
//! - (e) over `Z/n` (`dim(Y) = 0`): `value = min local`.
//!
//! Local values are evaluated at every prime of `Ass(M) ∪ Ass(N)` in the support and at
//! one generic maximal ideal, which represents all the others.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::global::capacity;
use crate::local::local_capacity;
use crate::module::{Capacity, FGModule, Kind, Support};
use crate::ring::{PrimeId, RingDescriptor};

/// `ℤ ∪ {±∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ext {
    NegInf,
    Fin(i64),
    PosInf,
}

impl Ext {
    fn minus(self, d: Ext) -> Ext {
        match (self, d) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a - b),
            (Ext::PosInf, _) | (_, Ext::NegInf) => Ext::PosInf,
            _ => Ext::NegInf,
        }
    }
}

impl From<Capacity> for Ext {
    fn from(c: Capacity) -> Self {
        match c {
            Capacity::Finite(v) => Ext::Fin(v as i64),
            Capacity::Infinite => Ext::PosInf,
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::NegInf => write!(f, "-inf"),
            Ext::Fin(v) => write!(f, "{v}"),
            Ext::PosInf => write!(f, "inf"),
        }
    }
}

impl Serialize for Ext {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ext::Fin(v) => s.serialize_i64(*v),
            other => s.collect_str(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "iff")]
    Iff,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Inequality {
    pub label: &'static str,
    pub lhs: Ext,
    pub relation: Relation,
    pub rhs: Ext,
    /// The hypothesis does not apply (for example `N = 0`); counts as satisfied.
    pub vacuous: bool,
    pub holds: bool,
}

impl Inequality {
    fn new(label: &'static str, lhs: Ext, relation: Relation, rhs: Ext, vacuous: bool) -> Self {
        let holds = vacuous
            || match relation {
                Relation::Le => lhs <= rhs,
                Relation::Ge => lhs >= rhs,
                Relation::Eq => lhs == rhs,
                Relation::Iff => unreachable!("built by the caller"),
            };
        Inequality { label, lhs, relation, rhs, vacuous, holds }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SiteValue {
    pub prime: String,
    pub dim_x: i64,
    pub local: Capacity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub kind: Kind,
    pub value: Capacity,
    pub dim_y: Ext,
    pub sites: Vec<SiteValue>,
    pub checks: Vec<Inequality>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn violations(&self) -> Vec<&Inequality> {
        self.checks.iter().filter(|c| !c.holds).collect()
    }
}

/// A maximal ideal outside `Ass(M) ∪ Ass(N)`, when the ring has infinitely many.
fn generic_prime(ring: &RingDescriptor, avoid: &[PrimeId]) -> Result<Option<PrimeId>> {
    let below = |p: &PrimeId| match p {
        PrimeId::Rational(q) => Some(*q),
        PrimeId::Quadratic(q) => Some(q.p),
        _ => None,
    };
    let bad: Vec<u64> = avoid.iter().filter_map(below).collect();
    let q = (2u64..).find(|q| crate::arith::is_prime(*q) && !bad.contains(q)).expect("infinitely many primes");
    Ok(match ring {
        RingDescriptor::Integers => Some(PrimeId::Rational(q)),
        RingDescriptor::Quadratic { .. } => ring.prime_split(q)?.into_iter().next(),
        _ => None,
    })
}

/// Evaluates (a)-(e) for `kind ∈ {sur, spl}`. `dim_shift` is added to `dim(Y)` before
/// checking (b); it exists to confirm that the harness detects violations and is 0 in
/// normal use.
pub fn bound_report(kind: Kind, m: &FGModule, n: &FGModule, budget: &Budget, dim_shift: i64) -> Result<BoundReport> {
    if kind == Kind::Inj {
        return Err(Error::Unsupported("bound reports cover sur and spl".into()));
    }
    if m.ring() != n.ring() {
        return Err(Error::MixedRings);
    }
    let dims = n.dimension_data(budget)?;
    let value = capacity(kind, m, n, budget)?.value;

    // X as evaluated: the zero prime when present, primes of Ass(M) ∪ Ass(N) in the
    // support, and one generic maximal ideal when the support is everything
    let mut primes: Vec<PrimeId> = match &dims.support {
        Support::Empty => vec![],
        Support::Finite(ps) => ps.clone(),
        Support::Everything => {
            let mut ps = m.ass(false, budget)?;
            ps.extend(n.ass(false, budget)?);
            ps.sort();
            ps.dedup();
            if let Some(g) = generic_prime(m.ring(), &ps)? {
                ps.push(g);
            }
            ps.push(PrimeId::Zero);
            ps
        }
    };
    primes.dedup();
    let mut sites = Vec::new();
    for p in &primes {
        let dim_x = dims.dim_x_at(p).ok_or_else(|| Error::InvalidModule(format!("{p} is not in the support")))?;
        let local = local_capacity(kind, &m.localize(p)?, &n.localize(p)?)?;
        sites.push(SiteValue { prime: p.to_string(), dim_x, local });
    }
    let is_max = |s: &SiteValue| s.prime != PrimeId::Zero.to_string();
    let min_max: Ext = Capacity::min_of(sites.iter().filter(|s| is_max(s)).map(|s| s.local)).into();
    let dim_y = match dims.dim_y {
        None => Ext::NegInf,
        Some(d) => Ext::Fin(d),
    };
    let shifted = match dim_y {
        Ext::Fin(d) => Ext::Fin(d + dim_shift),
        other => other,
    };
    let x_inf = sites
        .iter()
        .map(|s| Ext::from(s.local).minus(Ext::Fin(s.dim_x)))
        .min()
        .unwrap_or(Ext::PosInf);
    let v = Ext::from(value);
    let empty = n.is_zero();
    let mut checks = vec![
        Inequality::new("upper_bound", v, Relation::Le, min_max, empty),
        Inequality::new("dim_y_lower_bound", v, Relation::Ge, min_max.minus(shifted), empty || min_max == Ext::PosInf),
        Inequality::new("j_spec_lower_bound", v, Relation::Ge, x_inf, empty),
    ];
    let inf_iff_zero = value.is_infinite() == empty;
    checks.push(Inequality {
        label: "infinite_iff_zero",
        lhs: v,
        relation: Relation::Iff,
        rhs: if empty { Ext::PosInf } else { Ext::Fin(0) },
        vacuous: false,
        holds: inf_iff_zero,
    });
    if let RingDescriptor::IntegersMod { .. } = m.ring() {
        checks.push(Inequality::new("quasisemilocal_exact", v, Relation::Eq, min_max, false));
    }
    Ok(BoundReport { kind, value, dim_y, sites, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn z_on_z() {
        let z = FGModule::over_z(1, &[]).unwrap();
        let r = bound_report(Kind::Sur, &z, &z, &b(), 0).unwrap();
        assert_eq!(r.value, Capacity::Finite(1));
        let c = r.checks.iter().find(|c| c.label == "j_spec_lower_bound").unwrap();
        assert_eq!(c.rhs, Ext::Fin(0));
        assert!(r.passed());
    }

    #[test]
    fn zero_target() {
        let m = FGModule::over_z(2, &[4]).unwrap();
        let zero = FGModule::over_z(0, &[]).unwrap();
        let r = bound_report(Kind::Sur, &m, &zero, &b(), 0).unwrap();
        assert_eq!(r.value, Capacity::Infinite);
        assert_eq!(r.dim_y, Ext::NegInf);
        assert!(r.passed());
    }

    #[test]
    fn zmod_exact() {
        let m = FGModule::over_zmod(12, 1, &[2]).unwrap();
        let n = FGModule::over_zmod(12, 0, &[2]).unwrap();
        let r = bound_report(Kind::Sur, &m, &n, &b(), 0).unwrap();
        assert_eq!(r.value, Capacity::Finite(2));
        let e = r.checks.iter().find(|c| c.label == "quasisemilocal_exact").unwrap();
        assert_eq!((e.lhs, e.rhs), (Ext::Fin(2), Ext::Fin(2)));
        assert!(r.passed());
        assert!(!bound_report(Kind::Sur, &m, &n, &b(), -1).unwrap().passed());
    }

    #[test]
    fn tamper_detected_over_z() {
        let m = FGModule::over_z(0, &[4, 2]).unwrap();
        let n = FGModule::over_z(0, &[2]).unwrap();
        assert!(bound_report(Kind::Sur, &m, &n, &b(), 0).unwrap().passed());
        assert!(!bound_report(Kind::Sur, &m, &n, &b(), -1).unwrap().passed());
        let m = FGModule::over_z(1, &[]).unwrap();
        assert!(bound_report(Kind::Spl, &m, &m, &b(), 0).unwrap().passed());
        assert!(!bound_report(Kind::Spl, &m, &m, &b(), -2).unwrap().passed());
    }

    #[test]
    fn quadratic_supported_abstract_not() {
        let r = RingDescriptor::quadratic(-20).unwrap();
        let g = r.class_from_ints(&[2, 2, 3]).unwrap();
        let m = FGModule::projective(r.clone(), 2, g.clone()).unwrap();
        let n = FGModule::projective(r, 1, g).unwrap();
        assert!(bound_report(Kind::Sur, &m, &n, &b(), 0).unwrap().passed());
        let c2 = RingDescriptor::abstract_group(vec![2], &[]).unwrap();
        let a = FGModule::projective(c2, 1, crate::ring::ClassElement::Vector(vec![0])).unwrap();
        assert!(matches!(bound_report(Kind::Sur, &a, &a, &b(), 0), Err(Error::Unsupported(_))));
    }
}
