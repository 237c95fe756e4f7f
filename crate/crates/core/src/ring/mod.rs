//! Ring backends: the integers, integer quotients `Z/n`, imaginary quadratic orders and
//! abstract Dedekind domains with a declared finite class group.

pub mod group;
pub mod quadratic;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime, valuation};
use crate::budget::Budget;
use crate::error::{Error, Result};
pub use quadratic::{Form, QuadIdeal, QuadOrder, QuadPrime, SplitKind};

/// Which ring the modules live over.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", try_from = "RawRing", into = "RawRing")]
pub enum RingDescriptor {
    Integers,
    IntegersMod { n: u64 },
    Quadratic { disc: i64 },
    Abstract { class_group: Vec<u64>, primes: BTreeMap<String, Vec<u64>> },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind")]
enum RawRing {
    #[serde(rename = "Z")]
    Z,
    #[serde(rename = "ZmodN")]
    ZmodN { n: u64 },
    #[serde(rename = "quadratic")]
    Quadratic {
        #[serde(rename = "D")]
        d: i64,
    },
    #[serde(rename = "abstract")]
    Abstract {
        class_group: Vec<u64>,
        #[serde(default)]
        primes: BTreeMap<String, Vec<u64>>,
    },
}

impl TryFrom<RawRing> for RingDescriptor {
    type Error = Error;

    fn try_from(raw: RawRing) -> Result<Self> {
        let ring = match raw {
            RawRing::Z => RingDescriptor::Integers,
            RawRing::ZmodN { n } => RingDescriptor::IntegersMod { n },
            RawRing::Quadratic { d } => RingDescriptor::Quadratic { disc: d },
            RawRing::Abstract { class_group, primes } => RingDescriptor::Abstract { class_group, primes },
        };
        ring.validate()?;
        Ok(ring)
    }
}

impl From<RingDescriptor> for RawRing {
    fn from(r: RingDescriptor) -> Self {
        match r {
            RingDescriptor::Integers => RawRing::Z,
            RingDescriptor::IntegersMod { n } => RawRing::ZmodN { n },
            RingDescriptor::Quadratic { disc } => RawRing::Quadratic { d: disc },
            RingDescriptor::Abstract { class_group, primes } => RawRing::Abstract { class_group, primes },
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Integers => write!(f, "Z"),
            RingDescriptor::IntegersMod { n } => write!(f, "Z/{n}"),
            RingDescriptor::Quadratic { disc } => write!(f, "O(D={disc})"),
            RingDescriptor::Abstract { class_group, .. } => write!(f, "Dedekind(Pic = {class_group:?})"),
        }
    }
}

/// A prime ideal of one of the backends, or the zero prime of a domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimeId {
    Zero,
    Rational(u64),
    Quadratic(QuadPrime),
    Named(String),
}

impl PrimeId {
    pub fn is_zero(&self) -> bool {
        matches!(self, PrimeId::Zero)
    }
}

impl fmt::Display for PrimeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeId::Zero => write!(f, "0"),
            PrimeId::Rational(p) => write!(f, "{p}"),
            PrimeId::Quadratic(q) => write!(f, "{q}"),
            PrimeId::Named(n) => write!(f, "{n}"),
        }
    }
}

impl Serialize for PrimeId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A nonzero ideal as a formal product of primes. The unit ideal is the empty product.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Ideal {
    pub factors: BTreeMap<PrimeId, u32>,
}

impl Ideal {
    pub fn unit() -> Self {
        Ideal::default()
    }

    pub fn prime_power(p: PrimeId, e: u32) -> Self {
        let mut factors = BTreeMap::new();
        if e > 0 {
            factors.insert(p, e);
        }
        Ideal { factors }
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn valuation(&self, p: &PrimeId) -> u32 {
        self.factors.get(p).copied().unwrap_or(0)
    }

    pub fn primes(&self) -> impl Iterator<Item = &PrimeId> {
        self.factors.keys()
    }

    /// Formal product (no ring-specific normalization).
    pub fn times(&self, other: &Ideal) -> Ideal {
        let mut factors = self.factors.clone();
        for (p, e) in &other.factors {
            *factors.entry(p.clone()).or_insert(0) += e;
        }
        Ideal { factors }
    }

    /// `I ⊆ J` (i.e. `J | I`).
    pub fn contained_in(&self, other: &Ideal) -> bool {
        other.factors.iter().all(|(p, e)| self.valuation(p) >= *e)
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "(1)");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| if *e == 1 { format!("{p}") } else { format!("{p}^{e}") })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

impl Serialize for Ideal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        struct Factors<'a>(&'a BTreeMap<PrimeId, u32>);
        impl Serialize for Factors<'_> {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_map(self.0.iter().map(|(p, e)| (p.to_string(), e)))
            }
        }
        let mut m = s.serialize_map(Some(1))?;
        m.serialize_entry("factors", &Factors(&self.factors))?;
        m.end()
    }
}

/// An element of the class group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassElement {
    Trivial,
    Form(Form),
    Vector(Vec<u64>),
}

impl ClassElement {
    /// Integer encoding used by the JSON descriptors.
    pub fn to_json_vec(&self) -> Vec<i128> {
        match self {
            ClassElement::Trivial => vec![],
            ClassElement::Form(f) => vec![f.a, f.b, f.c],
            ClassElement::Vector(v) => v.iter().map(|x| *x as i128).collect(),
        }
    }
}

impl fmt::Display for ClassElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassElement::Trivial => write!(f, "e"),
            ClassElement::Form(form) => write!(f, "{form}"),
            ClassElement::Vector(v) => write!(f, "{v:?}"),
        }
    }
}

impl Serialize for ClassElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_vec().serialize(s)
    }
}

/// Class group table.
#[derive(Debug, Clone, Serialize)]
pub struct GroupTable {
    pub order: u64,
    pub invariants: Vec<u64>,
    pub generators: Vec<ClassElement>,
    pub elements: Vec<ClassElement>,
}

const MAX_TABLE: u64 = 1 << 20;

impl RingDescriptor {
    pub fn quadratic(disc: i64) -> Result<Self> {
        let r = RingDescriptor::Quadratic { disc };
        r.validate()?;
        Ok(r)
    }

    pub fn zmod(n: u64) -> Result<Self> {
        let r = RingDescriptor::IntegersMod { n };
        r.validate()?;
        Ok(r)
    }

    pub fn abstract_group(class_group: Vec<u64>, primes: &[(&str, Vec<u64>)]) -> Result<Self> {
        let r = RingDescriptor::Abstract {
            class_group,
            primes: primes.iter().map(|(n, v)| (n.to_string(), v.clone())).collect(),
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RingDescriptor::Integers => Ok(()),
            RingDescriptor::IntegersMod { n } => {
                if *n < 2 {
                    Err(Error::InvalidRing(format!("Z/n needs n ≥ 2, got {n}")))
                } else {
                    Ok(())
                }
            }
            RingDescriptor::Quadratic { disc } => QuadOrder::new(*disc).map(|_| ()),
            RingDescriptor::Abstract { class_group, primes } => {
                if let Some(o) = class_group.iter().find(|o| **o == 0) {
                    return Err(Error::InvalidRing(format!("class group factor of order {o} is not finite")));
                }
                for (name, class) in primes {
                    if name == "0" || name.is_empty() {
                        return Err(Error::InvalidRing(format!("`{name}` is not a valid prime name")));
                    }
                    self.check_vector(class).map_err(|_| {
                        Error::InvalidRing(format!("class {class:?} of prime {name} is not in Z/{class_group:?}"))
                    })?;
                }
                Ok(())
            }
        }
    }

    /// Dedekind domain backends (everything except `Z/n`).
    pub fn is_domain(&self) -> bool {
        !matches!(self, RingDescriptor::IntegersMod { .. })
    }

    pub fn quad_order(&self) -> Option<QuadOrder> {
        match self {
            RingDescriptor::Quadratic { disc } => QuadOrder::new(*disc).ok(),
            _ => None,
        }
    }

    fn order(&self) -> Result<QuadOrder> {
        self.quad_order().ok_or_else(|| Error::Unsupported(format!("{self} is not a quadratic backend")))
    }

    /// `v_p(n)` for the `Z/n` backend.
    pub fn modulus_valuation(&self, p: u64) -> Option<u32> {
        match self {
            RingDescriptor::IntegersMod { n } => Some(valuation(*n, p)),
            _ => None,
        }
    }

    /// Primes of `Z/n`, with `v_p(n)`.
    pub fn modulus_primes(&self, budget: &Budget) -> Result<Vec<(u64, u32)>> {
        match self {
            RingDescriptor::IntegersMod { n } => Ok(factorize(*n, budget)?.into_iter().collect()),
            _ => Err(Error::Unsupported(format!("{self} is not Z/n"))),
        }
    }

    pub fn check_prime(&self, p: &PrimeId) -> Result<()> {
        let bad = || Error::InvalidIdeal(format!("{p} is not a prime of {self}"));
        match (self, p) {
            (RingDescriptor::IntegersMod { .. }, PrimeId::Zero) => {
                Err(Error::InvalidIdeal("the zero prime does not exist in Z/n".into()))
            }
            (_, PrimeId::Zero) => Ok(()),
            (RingDescriptor::Integers, PrimeId::Rational(q)) if is_prime(*q) => Ok(()),
            (RingDescriptor::IntegersMod { n }, PrimeId::Rational(q)) if is_prime(*q) && n % q == 0 => Ok(()),
            (RingDescriptor::Quadratic { .. }, PrimeId::Quadratic(q)) => self.order()?.check_prime(q),
            (RingDescriptor::Abstract { primes, .. }, PrimeId::Named(n)) if primes.contains_key(n) => Ok(()),
            _ => Err(bad()),
        }
    }

    fn is_zero_ideal_mod(&self, ideal: &Ideal) -> Result<bool> {
        match self {
            RingDescriptor::IntegersMod { n } => {
                let f = factorize(*n, &Budget::default())?;
                Ok(f.iter().all(|(p, e)| ideal.valuation(&PrimeId::Rational(*p)) >= *e))
            }
            _ => Ok(false),
        }
    }

    /// Validates an ideal and puts it in canonical form. Over `Z/n`, exponents are capped
    /// at `v_p(n)`; the zero ideal is rejected everywhere.
    pub fn canonicalize(&self, ideal: &Ideal) -> Result<Ideal> {
        let mut out = Ideal::unit();
        for (p, e) in &ideal.factors {
            if p.is_zero() {
                return Err(Error::ZeroIdeal);
            }
            if *e == 0 {
                continue;
            }
            if let (RingDescriptor::IntegersMod { n }, PrimeId::Rational(q)) = (self, p) {
                if is_prime(*q) && n % q != 0 {
                    continue;
                }
            }
            self.check_prime(p)?;
            let cap = match p {
                PrimeId::Rational(q) => self.modulus_valuation(*q).unwrap_or(u32::MAX),
                _ => u32::MAX,
            };
            out.factors.insert(p.clone(), (*e).min(cap));
        }
        if self.is_zero_ideal_mod(&out)? {
            return Err(Error::ZeroIdeal);
        }
        Ok(out)
    }

    /// Strict validation: the ideal must already be canonical.
    pub fn check_ideal(&self, ideal: &Ideal) -> Result<()> {
        let canon = self.canonicalize(ideal)?;
        if &canon != ideal {
            return Err(Error::InvalidIdeal(format!("{ideal} is not in canonical form ({canon})")));
        }
        Ok(())
    }

    /// The principal ideal `(d)` for an integer `d`.
    pub fn ideal_of_integer(&self, d: u64, budget: &Budget) -> Result<Ideal> {
        if d == 0 {
            return Err(Error::ZeroIdeal);
        }
        let f = factorize(d, budget)?;
        match self {
            RingDescriptor::Integers | RingDescriptor::IntegersMod { .. } => {
                let raw = Ideal { factors: f.into_iter().map(|(p, e)| (PrimeId::Rational(p), e)).collect() };
                self.canonicalize(&raw)
            }
            RingDescriptor::Quadratic { .. } => {
                let o = self.order()?;
                let mut acc = Ideal::unit();
                for (p, e) in f {
                    for q in o.prime_split(p)? {
                        let mult = if q.kind == SplitKind::Ramified { 2 * e } else { e };
                        acc = acc.times(&Ideal::prime_power(PrimeId::Quadratic(q), mult));
                    }
                }
                Ok(acc)
            }
            RingDescriptor::Abstract { .. } => {
                Err(Error::Unsupported("abstract backends have no integer ideals".into()))
            }
        }
    }

    pub fn ideal_mul(&self, i: &Ideal, j: &Ideal) -> Result<Ideal> {
        self.check_ideal(i)?;
        self.check_ideal(j)?;
        self.canonicalize(&i.times(j))
    }

    /// Absolute norm `|R/I|`.
    pub fn ideal_norm(&self, i: &Ideal) -> Result<BigInt> {
        self.check_ideal(i)?;
        let mut acc = BigInt::one();
        for (p, e) in &i.factors {
            let base = match p {
                PrimeId::Rational(q) => BigInt::from(*q),
                PrimeId::Quadratic(q) if q.kind == SplitKind::Inert => BigInt::from(q.p) * q.p,
                PrimeId::Quadratic(q) => BigInt::from(q.p),
                _ => return Err(Error::Unsupported(format!("no norm for {p} over {self}"))),
            };
            acc *= num_traits::pow(base, *e as usize);
        }
        Ok(acc)
    }

    /// Two-element lattice of an ideal of a quadratic backend.
    pub fn to_lattice(&self, i: &Ideal) -> Result<QuadIdeal> {
        let o = self.order()?;
        self.check_ideal(i)?;
        let mut acc = QuadIdeal::unit();
        for (p, e) in &i.factors {
            let PrimeId::Quadratic(q) = p else { return Err(Error::MixedRings) };
            let pl = o.prime_ideal(q)?;
            acc = o.ideal_mul(&acc, &o.ideal_pow(&pl, *e)?)?;
        }
        Ok(acc)
    }

    /// Factored form of a lattice ideal of a quadratic backend.
    pub fn from_lattice(&self, l: &QuadIdeal, budget: &Budget) -> Result<Ideal> {
        let o = self.order()?;
        let f = o.factor_ideal(l, budget)?;
        Ok(Ideal { factors: f.into_iter().map(|(q, e)| (PrimeId::Quadratic(q), e)).collect() })
    }

    pub fn prime_split(&self, p: u64) -> Result<Vec<PrimeId>> {
        match self {
            RingDescriptor::Quadratic { .. } => {
                Ok(self.order()?.prime_split(p)?.into_iter().map(PrimeId::Quadratic).collect())
            }
            RingDescriptor::Integers if is_prime(p) => Ok(vec![PrimeId::Rational(p)]),
            RingDescriptor::Integers => Err(Error::NotPrime(p.to_string())),
            _ => Err(Error::Unsupported(format!("prime splitting over {self}"))),
        }
    }

    /// Parses a prime label as written in JSON keys and inline syntax.
    pub fn parse_prime(&self, label: &str) -> Result<PrimeId> {
        let label = label.trim();
        if label == "0" {
            let p = PrimeId::Zero;
            self.check_prime(&p)?;
            return Ok(p);
        }
        let p = match self {
            RingDescriptor::Integers | RingDescriptor::IntegersMod { .. } => PrimeId::Rational(
                label.parse().map_err(|_| Error::Parse(format!("`{label}` is not an integer prime")))?,
            ),
            RingDescriptor::Quadratic { .. } => {
                let inner = label.trim_start_matches('(').trim_end_matches(')').replace("+ω", "").replace("+w", "");
                let mut parts = inner.split(',').map(str::trim);
                let p: u64 = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("bad quadratic prime label `{label}`")))?;
                let above = self.order()?.prime_split(p)?;
                match parts.next() {
                    None if above.len() == 1 => PrimeId::Quadratic(above[0]),
                    None => {
                        return Err(Error::Parse(format!(
                            "{p} splits; write `{p},b` for the prime (p, b+ω)"
                        )))
                    }
                    Some(b) => {
                        let b: u64 = b.parse().map_err(|_| Error::Parse(format!("bad root in `{label}`")))?;
                        above
                            .into_iter()
                            .find(|q| q.kind != SplitKind::Inert && q.root == b % q.p)
                            .map(PrimeId::Quadratic)
                            .ok_or_else(|| Error::InvalidIdeal(format!("({p}, {b}+ω) is not a prime ideal")))?
                    }
                }
            }
            RingDescriptor::Abstract { .. } => PrimeId::Named(label.to_string()),
        };
        self.check_prime(&p)?;
        Ok(p)
    }

    // ---- class group -------------------------------------------------------

    fn check_vector(&self, v: &[u64]) -> Result<()> {
        match self {
            RingDescriptor::Abstract { class_group, .. } => {
                if v.len() != class_group.len() || v.iter().zip(class_group).any(|(x, m)| x >= m) {
                    Err(Error::MixedClassGroups)
                } else {
                    Ok(())
                }
            }
            _ => Err(Error::MixedClassGroups),
        }
    }

    pub fn check_class(&self, x: &ClassElement) -> Result<()> {
        match (self, x) {
            (RingDescriptor::Integers | RingDescriptor::IntegersMod { .. }, ClassElement::Trivial) => Ok(()),
            (RingDescriptor::Quadratic { disc }, ClassElement::Form(f)) => {
                if f.discriminant() == *disc as i128 && f.is_reduced() && f.a > 0 {
                    Ok(())
                } else {
                    Err(Error::MixedClassGroups)
                }
            }
            (RingDescriptor::Abstract { .. }, ClassElement::Vector(v)) => self.check_vector(v),
            _ => Err(Error::MixedClassGroups),
        }
    }

    /// Builds a class element from its JSON integer encoding. Quadratic forms are reduced.
    pub fn class_from_ints(&self, v: &[i128]) -> Result<ClassElement> {
        let x = match self {
            RingDescriptor::Integers | RingDescriptor::IntegersMod { .. } => {
                if v.iter().any(|x| *x != 0) {
                    return Err(Error::MixedClassGroups);
                }
                ClassElement::Trivial
            }
            RingDescriptor::Quadratic { disc } => {
                if v.is_empty() {
                    return self.identity_class();
                }
                let [a, b, c] = v else {
                    return Err(Error::Parse(format!("quadratic class must be [a,b,c], got {v:?}")));
                };
                let f = Form { a: *a, b: *b, c: *c };
                if f.discriminant() != *disc as i128 || f.a <= 0 {
                    return Err(Error::Parse(format!("{f} is not a positive definite form of discriminant {disc}")));
                }
                ClassElement::Form(f.reduced())
            }
            RingDescriptor::Abstract { class_group, .. } => {
                if v.is_empty() {
                    return self.identity_class();
                }
                if v.len() != class_group.len() || v.iter().any(|x| *x < 0) {
                    return Err(Error::MixedClassGroups);
                }
                ClassElement::Vector(v.iter().zip(class_group).map(|(x, m)| (*x as u64) % m).collect())
            }
        };
        self.check_class(&x)?;
        Ok(x)
    }

    pub fn identity_class(&self) -> Result<ClassElement> {
        Ok(match self {
            RingDescriptor::Integers | RingDescriptor::IntegersMod { .. } => ClassElement::Trivial,
            RingDescriptor::Quadratic { .. } => ClassElement::Form(self.order()?.identity_form()),
            RingDescriptor::Abstract { class_group, .. } => ClassElement::Vector(vec![0; class_group.len()]),
        })
    }

    pub fn compose(&self, x: &ClassElement, y: &ClassElement) -> Result<ClassElement> {
        self.check_class(x)?;
        self.check_class(y)?;
        Ok(match (self, x, y) {
            (RingDescriptor::Quadratic { .. }, ClassElement::Form(f), ClassElement::Form(g)) => {
                ClassElement::Form(self.order()?.compose(f, g))
            }
            (RingDescriptor::Abstract { class_group, .. }, ClassElement::Vector(a), ClassElement::Vector(b)) => {
                ClassElement::Vector(a.iter().zip(b).zip(class_group).map(|((s, t), m)| (s + t) % m).collect())
            }
            _ => ClassElement::Trivial,
        })
    }

    pub fn inverse(&self, x: &ClassElement) -> Result<ClassElement> {
        self.check_class(x)?;
        Ok(match (self, x) {
            (_, ClassElement::Form(f)) => ClassElement::Form(f.inverse()),
            (RingDescriptor::Abstract { class_group, .. }, ClassElement::Vector(a)) => {
                ClassElement::Vector(a.iter().zip(class_group).map(|(s, m)| (m - s) % m).collect())
            }
            _ => ClassElement::Trivial,
        })
    }

    /// `x^k` by square-and-multiply.
    pub fn power(&self, x: &ClassElement, mut k: u64) -> Result<ClassElement> {
        self.check_class(x)?;
        let mut acc = self.identity_class()?;
        let mut base = x.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.compose(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.compose(&base, &base)?;
            }
        }
        Ok(acc)
    }

    pub fn class_eq(&self, x: &ClassElement, y: &ClassElement) -> Result<bool> {
        self.check_class(x)?;
        self.check_class(y)?;
        Ok(x == y)
    }

    /// Class of a nonzero ideal in the Picard group.
    pub fn class_of_ideal(&self, i: &Ideal) -> Result<ClassElement> {
        self.check_ideal(i)?;
        match self {
            RingDescriptor::Integers | RingDescriptor::IntegersMod { .. } => Ok(ClassElement::Trivial),
            RingDescriptor::Quadratic { .. } => {
                let o = self.order()?;
                let mut acc = self.identity_class()?;
                for (p, e) in &i.factors {
                    let PrimeId::Quadratic(q) = p else { return Err(Error::MixedRings) };
                    let c = ClassElement::Form(o.class_of_lattice(&o.prime_ideal(q)?));
                    acc = self.compose(&acc, &self.power(&c, *e as u64)?)?;
                }
                Ok(acc)
            }
            RingDescriptor::Abstract { primes, .. } => {
                let mut acc = self.identity_class()?;
                for (p, e) in &i.factors {
                    let PrimeId::Named(name) = p else { return Err(Error::MixedRings) };
                    let c = ClassElement::Vector(primes[name].clone());
                    acc = self.compose(&acc, &self.power(&c, *e as u64)?)?;
                }
                Ok(acc)
            }
        }
    }

    /// Full class group table.
    pub fn class_group(&self) -> Result<GroupTable> {
        let elements: Vec<ClassElement> = match self {
            RingDescriptor::Integers | RingDescriptor::IntegersMod { .. } => vec![ClassElement::Trivial],
            RingDescriptor::Quadratic { .. } => {
                self.order()?.reduced_forms().into_iter().map(ClassElement::Form).collect()
            }
            RingDescriptor::Abstract { class_group, .. } => {
                let total: u64 = class_group.iter().try_fold(1u64, |acc, m| acc.checked_mul(*m)).unwrap_or(u64::MAX);
                if total > MAX_TABLE {
                    return Err(Error::Unsupported(format!("class group of order {total} is too large to tabulate")));
                }
                let mut els = vec![vec![]];
                for m in class_group {
                    els = els
                        .into_iter()
                        .flat_map(|v: Vec<u64>| {
                            (0..*m).map(move |x| {
                                let mut w = v.clone();
                                w.push(x);
                                w
                            })
                        })
                        .collect();
                }
                els.into_iter().map(ClassElement::Vector).collect()
            }
        };
        let id = self.identity_class()?;
        let s = group::analyze(&elements, &id, |x, y| self.compose(x, y).expect("class table closure"));
        Ok(GroupTable {
            order: elements.len() as u64,
            invariants: s.invariants,
            generators: s.generators,
            elements,
        })
    }
}
