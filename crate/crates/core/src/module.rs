//! Finitely generated modules in structure-theorem normal form:
//! `M ≅ R/I_1 ⊕ … ⊕ R/I_u ⊕ R^(r-1) ⊕ I` with `I_1 ⊆ … ⊆ I_u` and Steinitz class `[I]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::ring::{ClassElement, Ideal, PrimeId, RingDescriptor};

/// Which capacity: surjective, split surjective or injective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Sur,
    Spl,
    Inj,
}

impl Kind {
    pub const ALL: [Kind; 3] = [Kind::Sur, Kind::Spl, Kind::Inj];
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Sur => "sur",
            Kind::Spl => "spl",
            Kind::Inj => "inj",
        })
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sur" => Ok(Kind::Sur),
            "spl" => Ok(Kind::Spl),
            "inj" => Ok(Kind::Inj),
            _ => Err(Error::Parse(format!("unknown capacity kind `{s}` (expected sur, spl or inj)"))),
        }
    }
}

/// A value in `ℕ ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Capacity {
    Finite(u64),
    Infinite,
}

impl Capacity {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Capacity::Infinite)
    }

    pub fn finite(&self) -> Option<u64> {
        match self {
            Capacity::Finite(v) => Some(*v),
            Capacity::Infinite => None,
        }
    }

    /// Minimum over an iterator; the empty minimum is `∞`.
    pub fn min_of<I: IntoIterator<Item = Capacity>>(it: I) -> Capacity {
        it.into_iter().min().unwrap_or(Capacity::Infinite)
    }

    /// `self ≥ t` for a finite `t`.
    pub fn at_least(&self, t: u64) -> bool {
        match self {
            Capacity::Finite(v) => *v >= t,
            Capacity::Infinite => true,
        }
    }
}

impl From<u64> for Capacity {
    fn from(v: u64) -> Self {
        Capacity::Finite(v)
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Finite(v) => write!(f, "{v}"),
            Capacity::Infinite => write!(f, "∞"),
        }
    }
}

impl Serialize for Capacity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Capacity::Finite(v) => s.serialize_u64(*v),
            Capacity::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Capacity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(v) => Ok(Capacity::Finite(v)),
            Raw::S(s) if s == "inf" || s == "∞" => Ok(Capacity::Infinite),
            Raw::S(s) => Err(serde::de::Error::custom(format!("`{s}` is not a capacity"))),
        }
    }
}

/// A module over the localization at one prime: `R_p^free ⊕ ⊕ R_p/p^e`.
///
/// Over a `Z/n` backend localization has no free part; free summands of the global
/// module appear as exponent `v_p(n)` entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalModule {
    #[serde(default, skip_serializing_if = "Option::is_none", skip_deserializing)]
    pub prime: Option<PrimeId>,
    pub free: u32,
    pub exps: Vec<u32>,
}

impl LocalModule {
    /// Builds a local module; zero exponents are dropped and the rest sorted descending.
    pub fn new(free: u32, exps: impl IntoIterator<Item = u32>) -> Self {
        let mut exps: Vec<u32> = exps.into_iter().filter(|e| *e > 0).collect();
        exps.sort_unstable_by(|a, b| b.cmp(a));
        LocalModule { prime: None, free, exps }
    }

    pub fn at(mut self, p: PrimeId) -> Self {
        self.prime = Some(p);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.free == 0 && self.exps.is_empty()
    }

    pub fn max_exp(&self) -> u32 {
        self.exps.first().copied().unwrap_or(0)
    }

    /// Number of torsion summands with exponent `≥ k`.
    pub fn torsion_count(&self, k: u32) -> u64 {
        self.exps.iter().filter(|e| **e >= k).count() as u64
    }

    pub fn direct_sum(&self, other: &LocalModule) -> LocalModule {
        let mut out = LocalModule::new(self.free + other.free, self.exps.iter().chain(&other.exps).copied());
        out.prime = self.prime.clone().or_else(|| other.prime.clone());
        out
    }

    pub fn power(&self, t: u32) -> LocalModule {
        let mut out = LocalModule::new(self.free * t, (0..t).flat_map(|_| self.exps.iter().copied()));
        out.prime = self.prime.clone();
        out
    }

    pub fn torsion(&self) -> LocalModule {
        LocalModule { prime: self.prime.clone(), free: 0, exps: self.exps.clone() }
    }
}

impl fmt::Display for LocalModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(free {}, exps {:?})", self.free, self.exps)
    }
}

/// A finitely generated module in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FGModule {
    ring: RingDescriptor,
    rank: u32,
    steinitz: ClassElement,
    torsion: Vec<Ideal>,
}

impl FGModule {
    /// Strict constructor: `torsion` must already be a canonical invariant-factor chain
    /// of nonzero proper ideals. A rank-0 module's Steinitz class is normalized to the
    /// identity.
    pub fn new(ring: RingDescriptor, rank: u32, steinitz: ClassElement, torsion: Vec<Ideal>) -> Result<Self> {
        ring.validate()?;
        ring.check_class(&steinitz)?;
        for (k, ideal) in torsion.iter().enumerate() {
            ring.check_ideal(ideal)?;
            if ideal.is_unit() {
                return Err(Error::InvalidModule("torsion ideals must be proper".into()));
            }
            if k > 0 && !torsion[k - 1].contained_in(ideal) {
                return Err(Error::InvalidModule(format!(
                    "invariant factors must form a chain I_1 ⊆ I_2 ⊆ …, but {} ⊄ {}",
                    torsion[k - 1], ideal
                )));
            }
        }
        let steinitz = if rank == 0 || !ring.is_domain() { ring.identity_class()? } else { steinitz };
        Ok(FGModule { ring, rank, steinitz, torsion })
    }

    pub fn zero(ring: RingDescriptor) -> Result<Self> {
        let id = ring.identity_class()?;
        FGModule::new(ring, 0, id, vec![])
    }

    /// Free module `R^rank` (over a domain: `R^(rank-1) ⊕ I` with `[I] = steinitz`).
    pub fn projective(ring: RingDescriptor, rank: u32, steinitz: ClassElement) -> Result<Self> {
        FGModule::new(ring, rank, steinitz, vec![])
    }

    /// Builds the normal form of `R^(rank-1) ⊕ I ⊕ ⊕_k R/J_k` for arbitrary nonzero ideals `J_k`.
    pub fn from_cyclics(ring: RingDescriptor, rank: u32, steinitz: ClassElement, cyclics: &[Ideal]) -> Result<Self> {
        let mut ed: BTreeMap<PrimeId, Vec<u32>> = BTreeMap::new();
        for j in cyclics {
            let j = ring.canonicalize(j)?;
            for (p, e) in j.factors {
                ed.entry(p).or_default().push(e);
            }
        }
        FGModule::from_elementary_divisors(ring, rank, steinitz, &ed)
    }

    /// Integer convenience constructor over `Z`: `Z^rank ⊕ ⊕ Z/d_k`.
    pub fn over_z(rank: u32, cyclic_orders: &[u64]) -> Result<Self> {
        let ring = RingDescriptor::Integers;
        let b = Budget::default();
        let ideals: Vec<Ideal> = cyclic_orders
            .iter()
            .map(|d| ring.ideal_of_integer(*d, &b))
            .collect::<Result<_>>()?;
        FGModule::from_cyclics(ring, rank, ClassElement::Trivial, &ideals)
    }

    /// `(Z/n)^rank ⊕ ⊕ Z/d_k` over the `Z/n` backend; `Z/d` is read as `Z/gcd(d, n)`.
    pub fn over_zmod(n: u64, mut rank: u32, cyclic_orders: &[u64]) -> Result<Self> {
        let ring = RingDescriptor::zmod(n)?;
        let b = Budget::default();
        let mut ed: BTreeMap<PrimeId, Vec<u32>> = BTreeMap::new();
        for d in cyclic_orders {
            if *d == 0 {
                return Err(Error::ZeroIdeal);
            }
            let g = num_integer::Integer::gcd(d, &n);
            if g == n {
                rank += 1;
                continue;
            }
            for (p, e) in crate::arith::factorize(g, &b)? {
                ed.entry(PrimeId::Rational(p)).or_default().push(e);
            }
        }
        FGModule::from_elementary_divisors(ring, rank, ClassElement::Trivial, &ed)
    }

    /// Rebuilds the invariant-factor chain from elementary divisors: the k-th ideal is
    /// the product over primes of `p^(k-th largest exponent at p)`.
    pub fn from_elementary_divisors(
        ring: RingDescriptor,
        mut rank: u32,
        steinitz: ClassElement,
        divisors: &BTreeMap<PrimeId, Vec<u32>>,
    ) -> Result<Self> {
        let mut sorted: BTreeMap<PrimeId, Vec<u32>> = BTreeMap::new();
        for (p, exps) in divisors {
            if p.is_zero() {
                return Err(Error::ZeroIdeal);
            }
            ring.check_prime(p)?;
            let mut v: Vec<u32> = exps.iter().copied().filter(|e| *e > 0).collect();
            v.sort_unstable_by(|a, b| b.cmp(a));
            if !v.is_empty() {
                sorted.insert(p.clone(), v);
            }
        }
        let len = sorted.values().map(Vec::len).max().unwrap_or(0);
        let mut chain = Vec::with_capacity(len);
        for k in 0..len {
            let mut ideal = Ideal::unit();
            for (p, v) in &sorted {
                if let Some(e) = v.get(k) {
                    ideal.factors.insert(p.clone(), *e);
                }
            }
            match ring.canonicalize(&ideal) {
                Ok(c) => chain.push(c),
                // over Z/n a factor R/0 is a free summand
                Err(Error::ZeroIdeal) if !ring.is_domain() => rank += 1,
                Err(e) => return Err(e),
            }
        }
        FGModule::new(ring, rank, steinitz, chain)
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn steinitz(&self) -> &ClassElement {
        &self.steinitz
    }

    pub fn torsion(&self) -> &[Ideal] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_torsion(&self) -> bool {
        self.rank == 0
    }

    fn same_ring(&self, other: &FGModule) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::MixedRings);
        }
        Ok(())
    }

    /// Elementary divisors `{p: [e_1 ≥ e_2 ≥ …]}` of the torsion part.
    pub fn elementary_divisors(&self) -> BTreeMap<PrimeId, Vec<u32>> {
        let mut out: BTreeMap<PrimeId, Vec<u32>> = BTreeMap::new();
        for ideal in &self.torsion {
            for (p, e) in &ideal.factors {
                out.entry(p.clone()).or_default().push(*e);
            }
        }
        for v in out.values_mut() {
            v.sort_unstable_by(|a, b| b.cmp(a));
        }
        out
    }

    /// `Tor(M)`.
    pub fn torsion_part(&self) -> FGModule {
        FGModule {
            ring: self.ring.clone(),
            rank: 0,
            steinitz: self.ring.identity_class().expect("validated ring"),
            torsion: self.torsion.clone(),
        }
    }

    /// `M ⊕ N`. Steinitz classes multiply (`I ⊕ J ≅ R ⊕ IJ`).
    pub fn direct_sum(&self, other: &FGModule) -> Result<FGModule> {
        self.same_ring(other)?;
        let mut ed = self.elementary_divisors();
        for (p, v) in other.elementary_divisors() {
            ed.entry(p).or_default().extend(v);
        }
        let steinitz = match (self.rank, other.rank) {
            (0, _) => other.steinitz.clone(),
            (_, 0) => self.steinitz.clone(),
            _ => self.ring.compose(&self.steinitz, &other.steinitz)?,
        };
        FGModule::from_elementary_divisors(self.ring.clone(), self.rank + other.rank, steinitz, &ed)
    }

    /// `M^⊕t`.
    pub fn power(&self, t: u32) -> Result<FGModule> {
        let mut acc = FGModule::zero(self.ring.clone())?;
        for _ in 0..t {
            acc = acc.direct_sum(self)?;
        }
        Ok(acc)
    }

    /// Localization at the zero prime or at a maximal ideal.
    pub fn localize(&self, p: &PrimeId) -> Result<LocalModule> {
        self.ring.check_prime(p)?;
        if p.is_zero() {
            return Ok(LocalModule::new(self.rank, []).at(p.clone()));
        }
        let torsion = self.torsion.iter().map(|i| i.valuation(p));
        let local = match (&self.ring, p) {
            (RingDescriptor::IntegersMod { .. }, PrimeId::Rational(q)) => {
                let cap = self.ring.modulus_valuation(*q).unwrap_or(0);
                LocalModule::new(0, torsion.chain(std::iter::repeat(cap).take(self.rank as usize)))
            }
            _ => LocalModule::new(self.rank, torsion),
        };
        Ok(local.at(p.clone()))
    }

    /// Associated primes: primes dividing some invariant factor, plus the zero prime when
    /// asked for and `rank ≥ 1`. Over `Z/n` a free summand makes every `p | n` associated.
    pub fn ass(&self, include_zero: bool, budget: &Budget) -> Result<Vec<PrimeId>> {
        let mut out: BTreeSet<PrimeId> = self.torsion.iter().flat_map(|i| i.primes().cloned()).collect();
        if self.rank >= 1 {
            if self.ring.is_domain() {
                if include_zero {
                    out.insert(PrimeId::Zero);
                }
            } else {
                for (p, _) in self.ring.modulus_primes(budget)? {
                    out.insert(PrimeId::Rational(p));
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Dimension data for `Y = Max(R) ∩ Supp(N)` and `X = j-Spec(R) ∩ Supp(N)`.
    pub fn dimension_data(&self, budget: &Budget) -> Result<DimensionData> {
        if let RingDescriptor::Abstract { .. } = self.ring {
            return Err(Error::Unsupported("dimension data needs a concrete topology (Z, quadratic or Z/n)".into()));
        }
        if self.is_zero() {
            return Ok(DimensionData { dim_y: None, support: Support::Empty });
        }
        if self.ring.is_domain() && self.rank >= 1 {
            // Supp(N) = Spec(R); R Jacobson with infinitely many maximal ideals
            return Ok(DimensionData { dim_y: Some(1), support: Support::Everything });
        }
        Ok(DimensionData { dim_y: Some(0), support: Support::Finite(self.ass(false, budget)?) })
    }

    /// `M ≅ N`: equal ranks, equal invariant-factor chains and, for rank ≥ 1, equal
    /// Steinitz classes.
    pub fn iso(&self, other: &FGModule) -> Result<bool> {
        self.same_ring(other)?;
        Ok(self.rank == other.rank
            && self.torsion == other.torsion
            && (self.rank == 0 || self.ring.class_eq(&self.steinitz, &other.steinitz)?))
    }

    /// Minimal number of generators of a torsion module.
    pub fn mu_torsion(&self) -> Result<usize> {
        if self.rank != 0 {
            return Err(Error::InvalidModule("μ of the torsion normal form needs rank 0".into()));
        }
        Ok(self.torsion.len())
    }

    /// A `Z/n`-module viewed as a (finite) `Z`-module.
    pub fn as_integer_module(&self) -> Result<FGModule> {
        match self.ring {
            RingDescriptor::IntegersMod { .. } => {
                let mut ed: BTreeMap<PrimeId, Vec<u32>> = self.elementary_divisors();
                for (p, e) in self.ring.modulus_primes(&Budget::default())? {
                    for _ in 0..self.rank {
                        ed.entry(PrimeId::Rational(p)).or_default().push(e);
                    }
                }
                FGModule::from_elementary_divisors(RingDescriptor::Integers, 0, ClassElement::Trivial, &ed)
            }
            RingDescriptor::Integers => Ok(self.clone()),
            _ => Err(Error::Unsupported(format!("{} modules are not Z-modules here", self.ring))),
        }
    }

    /// Integer invariant factors `d_1, d_2, …` (largest first) for `Z` and `Z/n`.
    pub fn integer_invariants(&self) -> Result<Vec<u64>> {
        self.torsion
            .iter()
            .map(|i| {
                let mut d = 1u64;
                for (p, e) in &i.factors {
                    let PrimeId::Rational(q) = p else {
                        return Err(Error::Unsupported("integer invariants need Z or Z/n".into()));
                    };
                    d = d
                        .checked_mul(q.checked_pow(*e).ok_or_else(|| Error::Unsupported("overflow".into()))?)
                        .ok_or_else(|| Error::Unsupported("invariant factor overflows u64".into()))?;
                }
                Ok(d)
            })
            .collect()
    }
}

impl fmt::Display for FGModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] rank {}", self.ring, self.rank)?;
        if self.rank > 0 && self.ring.is_domain() && !matches!(self.steinitz, ClassElement::Trivial) {
            write!(f, " class {}", self.steinitz)?;
        }
        if !self.torsion.is_empty() {
            let parts: Vec<String> = self.torsion.iter().map(|i| format!("R/{i}")).collect();
            write!(f, " ⊕ {}", parts.join(" ⊕ "))?;
        }
        Ok(())
    }
}

/// Which primes make up `X = j-Spec(R) ∩ Supp(N)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    Empty,
    /// A finite set of maximal ideals (discrete, dimension 0 each).
    Finite(Vec<PrimeId>),
    /// All of `Spec(R)` for a domain with infinitely many maximal ideals.
    Everything,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionData {
    /// `dim(Y)`; `None` encodes `dim(∅) = −∞`.
    pub dim_y: Option<i64>,
    pub support: Support,
}

impl DimensionData {
    /// `dim_X(p)`, or `None` when `p ∉ X`.
    pub fn dim_x_at(&self, p: &PrimeId) -> Option<i64> {
        match &self.support {
            Support::Empty => None,
            Support::Finite(ps) => ps.contains(p).then_some(0),
            Support::Everything => Some(if p.is_zero() { 1 } else { 0 }),
        }
    }
}

/// Folds rank-`k_i` projectives with classes `c_i` into one normal form
/// (`I ⊕ J ≅ R ⊕ IJ`): rank `Σ k_i`, class `Π c_i`.
pub fn fold_projectives(ring: &RingDescriptor, summands: &[(u32, ClassElement)]) -> Result<FGModule> {
    if summands.is_empty() {
        return Err(Error::InvalidModule("nothing to fold".into()));
    }
    let mut rank = 0;
    let mut class = ring.identity_class()?;
    for (k, c) in summands {
        if *k == 0 {
            return Err(Error::InvalidModule("folded summands need rank ≥ 1".into()));
        }
        rank += k;
        class = ring.compose(&class, c)?;
    }
    FGModule::projective(ring.clone(), rank, class)
}

/// Folds a list of rank-one ideal classes `I_1 ⊕ … ⊕ I_k`.
pub fn direct_sum_fold(ring: &RingDescriptor, classes: &[ClassElement]) -> Result<FGModule> {
    let summands: Vec<(u32, ClassElement)> = classes.iter().map(|c| (1, c.clone())).collect();
    fold_projectives(ring, &summands)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> RingDescriptor {
        RingDescriptor::abstract_group(vec![2], &[("P", vec![1]), ("Q", vec![0])]).unwrap()
    }

    fn z(p: u64) -> PrimeId {
        PrimeId::Rational(p)
    }

    #[test]
    fn capacity_order_and_min() {
        assert!(Capacity::Finite(10) < Capacity::Infinite);
        assert_eq!(Capacity::min_of([]), Capacity::Infinite);
        assert_eq!(Capacity::min_of([3.into(), Capacity::Infinite, 1.into()]), Capacity::Finite(1));
        let s = serde_json::to_string(&[Capacity::Finite(2), Capacity::Infinite]).unwrap();
        assert_eq!(s, r#"[2,"inf"]"#);
        let back: Vec<Capacity> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![Capacity::Finite(2), Capacity::Infinite]);
    }

    #[test]
    fn localize_examples() {
        let m = FGModule::over_z(1, &[4]).unwrap();
        assert_eq!(m.localize(&z(2)).unwrap(), LocalModule::new(1, [2]).at(z(2)));
        let m = FGModule::over_z(0, &[12, 2]).unwrap();
        assert_eq!(m.localize(&z(3)).unwrap(), LocalModule::new(0, [1]).at(z(3)));
        assert_eq!(m.localize(&PrimeId::Zero).unwrap(), LocalModule::new(0, []).at(PrimeId::Zero));
    }

    #[test]
    fn localize_quadratic() {
        let r = RingDescriptor::quadratic(-20).unwrap();
        let p = r.parse_prime("2").unwrap();
        let g = r.class_from_ints(&[2, 2, 3]).unwrap();
        let m = FGModule::new(r.clone(), 1, g, vec![Ideal::prime_power(p.clone(), 2)]).unwrap();
        assert_eq!(m.localize(&p).unwrap().exps, vec![2]);
        assert_eq!(m.localize(&p).unwrap().free, 1);
        // the torsion ideal is (2, 1+ω)^2 = (2)
        assert_eq!(m.torsion()[0], r.ideal_of_integer(2, &Budget::default()).unwrap());
    }

    #[test]
    fn localize_zmodn_free_becomes_torsion() {
        let m = FGModule::over_zmod(12, 1, &[2]).unwrap();
        assert_eq!(m.localize(&z(2)).unwrap().exps, vec![2, 1]);
        assert_eq!(m.localize(&z(3)).unwrap().exps, vec![1]);
        assert!(m.localize(&PrimeId::Zero).is_err());
        // Z/4 ⊕ Z/3 over Z/12 is Z/12
        let n = FGModule::over_zmod(12, 0, &[4, 3]).unwrap();
        assert_eq!(n.rank(), 1);
        assert!(n.torsion().is_empty());
    }

    #[test]
    fn ass_examples() {
        let b = Budget::default();
        assert_eq!(FGModule::over_z(0, &[6]).unwrap().ass(false, &b).unwrap(), vec![z(2), z(3)]);
        assert_eq!(FGModule::over_z(2, &[]).unwrap().ass(true, &b).unwrap(), vec![PrimeId::Zero]);
        assert!(FGModule::over_z(0, &[]).unwrap().ass(true, &b).unwrap().is_empty());
    }

    #[test]
    fn dimension_examples() {
        let b = Budget::default();
        let d = FGModule::over_z(0, &[4]).unwrap().dimension_data(&b).unwrap();
        assert_eq!(d.dim_y, Some(0));
        assert_eq!(d.dim_x_at(&z(2)), Some(0));
        assert_eq!(d.dim_x_at(&z(3)), None);
        let d = FGModule::over_z(1, &[]).unwrap().dimension_data(&b).unwrap();
        assert_eq!(d.dim_y, Some(1));
        assert_eq!(d.dim_x_at(&PrimeId::Zero), Some(1));
        assert_eq!(d.dim_x_at(&z(101)), Some(0));
        let d = FGModule::over_z(0, &[]).unwrap().dimension_data(&b).unwrap();
        assert_eq!(d.dim_y, None);
        let a = FGModule::projective(c2(), 1, ClassElement::Vector(vec![0])).unwrap();
        assert!(matches!(a.dimension_data(&b), Err(Error::Unsupported(_))));
    }

    #[test]
    fn convert_examples() {
        let m = FGModule::over_z(0, &[6]).unwrap();
        let ed = m.elementary_divisors();
        assert_eq!(ed.get(&z(2)), Some(&vec![1]));
        assert_eq!(ed.get(&z(3)), Some(&vec![1]));
        let ed: BTreeMap<PrimeId, Vec<u32>> = [(z(2), vec![2, 1])].into_iter().collect();
        let m = FGModule::from_elementary_divisors(RingDescriptor::Integers, 0, ClassElement::Trivial, &ed).unwrap();
        assert_eq!(m.integer_invariants().unwrap(), vec![4, 2]);
        let ed: BTreeMap<PrimeId, Vec<u32>> = [(z(2), vec![2, 1]), (z(3), vec![1])].into_iter().collect();
        let m = FGModule::from_elementary_divisors(RingDescriptor::Integers, 0, ClassElement::Trivial, &ed).unwrap();
        assert_eq!(m.integer_invariants().unwrap(), vec![12, 2]);
        assert_eq!(m.elementary_divisors(), ed);
    }

    #[test]
    fn chain_is_enforced() {
        let r = RingDescriptor::Integers;
        let b = Budget::default();
        let two = r.ideal_of_integer(2, &b).unwrap();
        let four = r.ideal_of_integer(4, &b).unwrap();
        let three = r.ideal_of_integer(3, &b).unwrap();
        assert!(FGModule::new(r.clone(), 0, ClassElement::Trivial, vec![four.clone(), two.clone()]).is_ok());
        assert!(FGModule::new(r.clone(), 0, ClassElement::Trivial, vec![two.clone(), four]).is_err());
        assert!(FGModule::new(r.clone(), 0, ClassElement::Trivial, vec![two, three]).is_err());
        assert!(FGModule::new(r, 0, ClassElement::Trivial, vec![Ideal::unit()]).is_err());
    }

    #[test]
    fn iso_examples() {
        let r = c2();
        let e = ClassElement::Vector(vec![0]);
        let g = ClassElement::Vector(vec![1]);
        let m = FGModule::projective(r.clone(), 2, e.clone()).unwrap();
        let n = FGModule::projective(r.clone(), 2, g.clone()).unwrap();
        assert!(m.iso(&m).unwrap());
        assert!(!m.iso(&n).unwrap());
        let folded = direct_sum_fold(&r, &[g.clone(), g.clone()]).unwrap();
        assert!(m.iso(&folded).unwrap());
        assert!(m.iso(&FGModule::over_z(2, &[]).unwrap()).is_err());
    }

    #[test]
    fn fold_examples() {
        let r = c2();
        let e = ClassElement::Vector(vec![0]);
        let g = ClassElement::Vector(vec![1]);
        let f = direct_sum_fold(&r, &[g.clone(), g.clone()]).unwrap();
        assert_eq!((f.rank(), f.steinitz().clone()), (2, e.clone()));
        let f = direct_sum_fold(&r, &[e.clone()]).unwrap();
        assert_eq!((f.rank(), f.steinitz().clone()), (1, e.clone()));
        let f = direct_sum_fold(&r, &[g.clone(), g.clone(), g.clone()]).unwrap();
        assert_eq!((f.rank(), f.steinitz().clone()), (3, g));
        assert!(direct_sum_fold(&r, &[]).is_err());
    }

    #[test]
    fn mu_examples() {
        assert_eq!(FGModule::over_z(0, &[4, 2]).unwrap().mu_torsion().unwrap(), 2);
        assert_eq!(FGModule::over_z(0, &[6]).unwrap().mu_torsion().unwrap(), 1);
        assert_eq!(FGModule::over_z(0, &[]).unwrap().mu_torsion().unwrap(), 0);
        assert!(FGModule::over_z(1, &[2]).unwrap().mu_torsion().is_err());
    }

    #[test]
    fn rank_zero_class_normalized() {
        let r = c2();
        let m = FGModule::new(r.clone(), 0, ClassElement::Vector(vec![1]), vec![]).unwrap();
        assert_eq!(m.steinitz(), &ClassElement::Vector(vec![0]));
    }

    #[test]
    fn direct_sum_multiplies_classes() {
        let r = c2();
        let g = ClassElement::Vector(vec![1]);
        let n = FGModule::projective(r.clone(), 1, g.clone()).unwrap();
        let n2 = n.power(2).unwrap();
        assert_eq!((n2.rank(), n2.steinitz().clone()), (2, ClassElement::Vector(vec![0])));
        assert_eq!(n.power(3).unwrap().steinitz(), &g);
    }
}
