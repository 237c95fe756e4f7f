//! Explicit integer-matrix certificates over `Z` and `Z/n`.
//!
//! Modules are presented by their primary decomposition: one generator per free summand
//! and one per cyclic summand `Z/p^e` (relation `p^e·g = 0`). A map is a
//! `g_src × g_tgt` matrix whose row `i` is the image of source generator `i`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::global::geq;
use crate::module::{FGModule, Kind};
use crate::ring::{PrimeId, RingDescriptor};
use crate::snf::{cokernel_is_zero, left_kernel, rowspace_contains, IntMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Summand {
    Free,
    Cyclic { p: u64, e: u32 },
}

impl Summand {
    fn exp_at(&self, p: u64) -> Option<u32> {
        match self {
            Summand::Free => Some(u32::MAX),
            Summand::Cyclic { p: q, e } => (*q == p).then_some(*e),
        }
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Summand::Free => write!(f, "Z"),
            Summand::Cyclic { p, e } => write!(f, "Z/{}", p.pow(*e)),
        }
    }
}

impl Serialize for Summand {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `Z^gens / rowspace(relations)` with the summand type of each generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub generators: Vec<Summand>,
    pub relations: IntMatrix,
}

impl Presentation {
    pub fn from_summands(generators: Vec<Summand>) -> Self {
        let cyclic: Vec<(usize, BigInt)> = generators
            .iter()
            .enumerate()
            .filter_map(|(i, s)| match s {
                Summand::Cyclic { p, e } => Some((i, BigInt::from(*p).pow(*e))),
                Summand::Free => None,
            })
            .collect();
        let mut relations = IntMatrix::zeros(cyclic.len(), generators.len());
        for (row, (i, q)) in cyclic.into_iter().enumerate() {
            relations[(row, i)] = q;
        }
        Presentation { generators, relations }
    }

    /// Presentation of a module over `Z`, or of a `Z/n`-module viewed over `Z`.
    pub fn of(m: &FGModule) -> Result<Self> {
        let z = match m.ring() {
            RingDescriptor::Integers => m.clone(),
            RingDescriptor::IntegersMod { .. } => m.as_integer_module()?,
            other => return Err(Error::Unsupported(format!("witnesses need Z or Z/n, not {other}"))),
        };
        let mut gens = vec![Summand::Free; z.rank() as usize];
        for (p, exps) in z.elementary_divisors() {
            let PrimeId::Rational(p) = p else { unreachable!("integer primes") };
            gens.extend(exps.into_iter().map(|e| Summand::Cyclic { p, e }));
        }
        Ok(Presentation::from_summands(gens))
    }

    pub fn power(&self, t: u32) -> Self {
        let gens: Vec<Summand> = (0..t).flat_map(|_| self.generators.iter().copied()).collect();
        Presentation::from_summands(gens)
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub kind: Kind,
    pub t: u64,
    /// `M` for sur/spl, `N^t` for inj.
    pub source: Presentation,
    pub target: Presentation,
    pub map: IntMatrix,
    /// For spl: a map `N^t → M` with `section·map = id`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub section: Option<IntMatrix>,
}

/// Matches target generators at one prime (descending exponents) against available
/// source generators (descending, free first); `fits(src_exp, tgt_exp)` decides a match.
fn match_at_prime(
    p: u64,
    src: &[Summand],
    src_avail: &[usize],
    tgt: &[Summand],
    tgt_idx: &[usize],
    fits: impl Fn(u32, u32) -> bool,
) -> Option<Vec<(usize, usize)>> {
    let mut s: Vec<usize> = src_avail.iter().copied().filter(|i| src[*i].exp_at(p).is_some()).collect();
    s.sort_by_key(|i| std::cmp::Reverse(src[*i].exp_at(p)));
    let mut t: Vec<usize> = tgt_idx.iter().copied().filter(|j| tgt[*j].exp_at(p).is_some()).collect();
    t.sort_by_key(|j| std::cmp::Reverse(tgt[*j].exp_at(p)));
    if t.len() > s.len() {
        return None;
    }
    let pairs: Vec<(usize, usize)> = s.into_iter().zip(t).collect();
    pairs
        .iter()
        .all(|(i, j)| fits(src[*i].exp_at(p).unwrap(), tgt[*j].exp_at(p).unwrap()))
        .then_some(pairs)
}

fn cyclic_primes(gens: &[Summand]) -> Vec<u64> {
    let mut ps: Vec<u64> = gens
        .iter()
        .filter_map(|s| match s {
            Summand::Cyclic { p, .. } => Some(*p),
            Summand::Free => None,
        })
        .collect();
    ps.sort_unstable();
    ps.dedup();
    ps
}

fn indices(gens: &[Summand], free: bool) -> Vec<usize> {
    gens.iter().enumerate().filter(|(_, s)| (**s == Summand::Free) == free).map(|(i, _)| i).collect()
}

fn internal(msg: impl Into<String>) -> Error {
    Error::WitnessRejected(msg.into())
}

/// Surjection `src ↠ tgt`: free targets take free sources one to one; at each prime the
/// remaining free sources (exponent ∞) and the cyclic sources are matched in sorted
/// order onto targets of smaller or equal exponent. A leftover free source may serve one
/// target at every prime at once.
fn build_sur(src: &Presentation, tgt: &Presentation) -> Result<IntMatrix> {
    let (sg, tg) = (&src.generators, &tgt.generators);
    let mut f = IntMatrix::zeros(sg.len(), tg.len());
    let src_free = indices(sg, true);
    let tgt_free = indices(tg, true);
    if tgt_free.len() > src_free.len() {
        return Err(internal("not enough free generators for a surjection"));
    }
    for (i, j) in src_free.iter().zip(&tgt_free) {
        f[(*i, *j)] = BigInt::one();
    }
    let spare_free = &src_free[tgt_free.len()..];
    let src_cyc = indices(sg, false);
    let avail: Vec<usize> = spare_free.iter().chain(&src_cyc).copied().collect();
    let tgt_cyc = indices(tg, false);
    for p in cyclic_primes(tg) {
        let pairs = match_at_prime(p, sg, &avail, tg, &tgt_cyc, |e, f| e >= f)
            .ok_or_else(|| internal(format!("local counts at {p} do not allow a surjection")))?;
        for (i, j) in pairs {
            f[(i, j)] = BigInt::one();
        }
    }
    Ok(f)
}

/// Split surjection: every target summand is matched with a source summand of the same
/// type; the map projects onto it and the section includes it back.
fn build_spl(src: &Presentation, tgt: &Presentation) -> Result<(IntMatrix, IntMatrix)> {
    let (sg, tg) = (&src.generators, &tgt.generators);
    let mut f = IntMatrix::zeros(sg.len(), tg.len());
    let mut g = IntMatrix::zeros(tg.len(), sg.len());
    let mut used = vec![false; sg.len()];
    for (j, ty) in tg.iter().enumerate() {
        let i = (0..sg.len())
            .find(|i| !used[*i] && sg[*i] == *ty)
            .ok_or_else(|| internal(format!("no free copy of {ty} left to split off")))?;
        used[i] = true;
        f[(i, j)] = BigInt::one();
        g[(j, i)] = BigInt::one();
    }
    Ok((f, g))
}

/// Injection `src ↪ tgt`: free to distinct free; a cyclic `Z/p^f` goes to a distinct
/// `Z/p^e`, `e ≥ f`, via `1 ↦ p^(e-f)`.
fn build_inj(src: &Presentation, tgt: &Presentation) -> Result<IntMatrix> {
    let (sg, tg) = (&src.generators, &tgt.generators);
    let mut f = IntMatrix::zeros(sg.len(), tg.len());
    let src_free = indices(sg, true);
    let tgt_free = indices(tg, true);
    if src_free.len() > tgt_free.len() {
        return Err(internal("not enough free generators for an injection"));
    }
    for (i, j) in src_free.iter().zip(&tgt_free) {
        f[(*i, *j)] = BigInt::one();
    }
    let src_cyc = indices(sg, false);
    let tgt_cyc = indices(tg, false);
    for p in cyclic_primes(sg) {
        // roles reversed: the "sources" of the matching are the targets of the map
        let pairs = match_at_prime(p, tg, &tgt_cyc, sg, &src_cyc, |e, f| e >= f)
            .ok_or_else(|| internal(format!("socle counts at {p} do not allow an injection")))?;
        for (j, i) in pairs {
            let (Summand::Cyclic { e, .. }, Summand::Cyclic { e: fe, .. }) = (tg[j], sg[i]) else { unreachable!() };
            f[(i, j)] = BigInt::from(p).pow(e - fe);
        }
    }
    Ok(f)
}

/// Builds the certificate for `kind(M, N) ≥ t` and verifies it before returning.
pub fn witness(kind: Kind, m: &FGModule, n: &FGModule, t: u64, budget: &Budget) -> Result<Witness> {
    let test = geq(kind, m, n, t, budget)?;
    if !test.holds {
        let claimed = crate::global::capacity(kind, m, n, budget)?.value;
        return Err(Error::CapacityTooSmall { claimed: claimed.to_string(), requested: t });
    }
    let t32 = u32::try_from(t).map_err(|_| Error::Unsupported("t too large for a witness".into()))?;
    let pm = Presentation::of(m)?;
    let pn = Presentation::of(n)?.power(t32);
    let w = match kind {
        Kind::Sur => Witness { kind, t, map: build_sur(&pm, &pn)?, source: pm, target: pn, section: None },
        Kind::Spl => {
            let (f, g) = build_spl(&pm, &pn)?;
            Witness { kind, t, map: f, source: pm, target: pn, section: Some(g) }
        }
        Kind::Inj => Witness { kind, t, map: build_inj(&pn, &pm)?, source: pn, target: pm, section: None },
    };
    let check = verify(&w)?;
    if !check.passed() {
        return Err(internal(format!("constructed {kind} witness failed verification: {check:?}")));
    }
    Ok(w)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub well_defined: bool,
    /// sur: cokernel zero; spl: `section·map = id`; inj: kernel zero.
    pub property: bool,
    /// spl only: the section is well defined.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub section_well_defined: Option<bool>,
}

impl WitnessCheck {
    pub fn passed(&self) -> bool {
        self.well_defined && self.property && self.section_well_defined.unwrap_or(true)
    }
}

/// Every source relation maps into the target relations.
pub fn well_defined(map: &IntMatrix, src: &Presentation, tgt: &Presentation) -> Result<bool> {
    if map.rows() != src.len() || map.cols() != tgt.len() {
        return Err(Error::DimensionMismatch(format!(
            "map is {}×{}, presentations have {} and {} generators",
            map.rows(),
            map.cols(),
            src.len(),
            tgt.len()
        )));
    }
    for i in 0..src.relations.rows() {
        let image = map.left_apply(src.relations.row(i))?;
        if !rowspace_contains(&tgt.relations, &image)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The induced map has trivial kernel: every `x` with `x·map ∈ rel_tgt` lies in `rel_src`.
pub fn kernel_is_zero(map: &IntMatrix, src: &Presentation, tgt: &Presentation) -> Result<bool> {
    let stacked = map.vstack(&tgt.relations)?;
    let kernel = left_kernel(&stacked);
    for i in 0..kernel.rows() {
        let x = &kernel.row(i)[..src.len()];
        if !rowspace_contains(&src.relations, x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `section·map ≡ id` modulo the relations of the target of `map`.
fn composite_is_identity(map: &IntMatrix, section: &IntMatrix, tgt: &Presentation) -> Result<bool> {
    let composite = section.mul(map)?;
    for j in 0..composite.rows() {
        let mut diff: Vec<BigInt> = composite.row(j).to_vec();
        diff[j] -= BigInt::one();
        if diff.iter().any(|d| !d.is_zero()) && !rowspace_contains(&tgt.relations, &diff)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Independent verification of a witness by SNF-based checks.
pub fn verify(w: &Witness) -> Result<WitnessCheck> {
    let well = well_defined(&w.map, &w.source, &w.target)?;
    let mut check = WitnessCheck { well_defined: well, ..WitnessCheck::default() };
    match w.kind {
        Kind::Sur => check.property = cokernel_is_zero(&w.map, &w.target.relations)?,
        Kind::Inj => check.property = kernel_is_zero(&w.map, &w.source, &w.target)?,
        Kind::Spl => {
            let section = w.section.as_ref().ok_or_else(|| internal("split witness without a section"))?;
            check.section_well_defined = Some(well_defined(section, &w.target, &w.source)?);
            check.property = composite_is_identity(&w.map, section, &w.target)?;
        }
    }
    Ok(check)
}

/// Summand counts by type, used in diagnostics.
pub fn summand_counts(p: &Presentation) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for s in &p.generators {
        *out.entry(s.to_string()).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn free_identity() {
        let m = FGModule::over_z(2, &[]).unwrap();
        let n = FGModule::over_z(1, &[]).unwrap();
        let w = witness(Kind::Sur, &m, &n, 2, &b()).unwrap();
        assert!(w.map.is_identity());
        assert!(verify(&w).unwrap().passed());
    }

    #[test]
    fn free_plus_torsion_onto_two_copies() {
        let m = FGModule::over_z(1, &[4]).unwrap();
        let n = FGModule::over_z(0, &[2]).unwrap();
        let w = witness(Kind::Sur, &m, &n, 2, &b()).unwrap();
        assert!(verify(&w).unwrap().passed());
        assert!(witness(Kind::Sur, &m, &n, 3, &b()).is_err());
    }

    #[test]
    fn split_refused_for_indecomposable() {
        let m = FGModule::over_z(0, &[4]).unwrap();
        let n = FGModule::over_z(0, &[2]).unwrap();
        assert!(matches!(witness(Kind::Spl, &m, &n, 1, &b()), Err(Error::CapacityTooSmall { .. })));
        let m = FGModule::over_z(1, &[4, 2]).unwrap();
        assert!(verify(&witness(Kind::Spl, &m, &n, 1, &b()).unwrap()).unwrap().passed());
    }

    #[test]
    fn injection_scales_generators() {
        let m = FGModule::over_z(0, &[8]).unwrap();
        let n = FGModule::over_z(0, &[2]).unwrap();
        let w = witness(Kind::Inj, &m, &n, 1, &b()).unwrap();
        assert_eq!(w.map[(0, 0)], BigInt::from(4));
        assert!(verify(&w).unwrap().passed());
    }

    #[test]
    fn verifier_rejects_bad_maps() {
        let pz = Presentation::from_summands(vec![Summand::Free]);
        let p2 = Presentation::from_summands(vec![Summand::Cyclic { p: 2, e: 1 }]);
        let p4 = Presentation::from_summands(vec![Summand::Cyclic { p: 2, e: 2 }]);
        // Z/2 → Z/4, 1 ↦ 1 is not well defined
        let bad = Witness {
            kind: Kind::Inj,
            t: 1,
            source: p2.clone(),
            target: p4.clone(),
            map: IntMatrix::from_rows(&[vec![1]]).unwrap(),
            section: None,
        };
        assert!(!verify(&bad).unwrap().well_defined);
        // Z → Z, 1 ↦ 2 is not onto
        let bad = Witness {
            kind: Kind::Sur,
            t: 1,
            source: pz.clone(),
            target: pz.clone(),
            map: IntMatrix::from_rows(&[vec![2]]).unwrap(),
            section: None,
        };
        assert!(!verify(&bad).unwrap().property);
        // Z/4 → Z/2 reduction is onto but not injective
        let red = IntMatrix::from_rows(&[vec![1]]).unwrap();
        assert!(!kernel_is_zero(&red, &p4, &p2).unwrap());
        assert!(cokernel_is_zero(&red, &p2.relations).unwrap());
    }

    #[test]
    fn zmod_witnesses() {
        let m = FGModule::over_zmod(12, 1, &[2]).unwrap();
        let n = FGModule::over_zmod(12, 0, &[2]).unwrap();
        for kind in Kind::ALL {
            let v = crate::global::capacity(kind, &m, &n, &b()).unwrap().value.finite().unwrap();
            assert!(v >= 1);
            assert!(verify(&witness(kind, &m, &n, v, &b()).unwrap()).unwrap().passed());
        }
    }
}
