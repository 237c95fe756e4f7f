//! Seeded pseudorandom instances for the test harnesses. The same seed and profile
//! always produce the same instance.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd_u64, is_prime};
use crate::budget::Budget;
use crate::error::Result;
use crate::glq::GlqInstance;
use crate::module::FGModule;
use crate::ring::{Ideal, RingDescriptor};
use crate::snf::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Backend {
    Integers,
    /// `n` drawn uniformly from `2..=max_n`.
    IntegersMod { max_n: u64 },
    Quadratic { disc: i64 },
    /// Torsion uses the ring's named primes.
    Abstract { ring: RingDescriptor },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub backend: Backend,
    pub min_rank: u32,
    pub max_rank: u32,
    /// Torsion primes (rational primes; over a quadratic ring, a prime above one).
    pub primes: Vec<u64>,
    pub max_exp: u32,
    pub max_summands: usize,
}

impl Profile {
    /// Rank ≤ 3, torsion primes {2, 3, 5}, exponents ≤ 3.
    pub fn integers() -> Self {
        Profile { backend: Backend::Integers, min_rank: 0, max_rank: 3, primes: vec![2, 3, 5], max_exp: 3, max_summands: 3 }
    }

    pub fn zmod(max_n: u64) -> Self {
        Profile {
            backend: Backend::IntegersMod { max_n },
            min_rank: 0,
            max_rank: 2,
            primes: vec![],
            max_exp: 0,
            max_summands: 3,
        }
    }

    pub fn torsion_only(mut self) -> Self {
        self.min_rank = 0;
        self.max_rank = 0;
        self
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn one_module(rng: &mut ChaCha8Rng, profile: &Profile, ring: &RingDescriptor, budget: &Budget) -> Result<FGModule> {
    let rank = rng.gen_range(profile.min_rank..=profile.max_rank.max(profile.min_rank));
    let summands = rng.gen_range(0..=profile.max_summands);
    match (&profile.backend, ring) {
        (Backend::IntegersMod { .. }, RingDescriptor::IntegersMod { n }) => {
            let orders: Vec<u64> = (0..summands).map(|_| rng.gen_range(2..=*n)).collect();
            FGModule::over_zmod(*n, rank, &orders)
        }
        _ => {
            let classes = ring.class_group()?.elements;
            let steinitz = classes.choose(rng).expect("class group is nonempty").clone();
            let named: Vec<String> = match ring {
                RingDescriptor::Abstract { primes, .. } => primes.keys().cloned().collect(),
                _ => vec![],
            };
            let mut cyclics = Vec::with_capacity(summands);
            for _ in 0..summands {
                let e = rng.gen_range(1..=profile.max_exp.max(1));
                let p = match ring {
                    RingDescriptor::Abstract { .. } if named.is_empty() => break,
                    RingDescriptor::Abstract { .. } => ring.parse_prime(named.choose(rng).expect("nonempty"))?,
                    _ if profile.primes.is_empty() => break,
                    _ => {
                        let q = *profile.primes.choose(rng).expect("nonempty");
                        let above = ring.ideal_of_integer(q, budget)?;
                        let first = above.primes().next().expect("a prime lies above q").clone();
                        first
                    }
                };
                cyclics.push(Ideal::prime_power(p, e));
            }
            FGModule::from_cyclics(ring.clone(), rank, steinitz, &cyclics)
        }
    }
}

/// A pair `(M, N)` over one ring drawn from `profile`.
pub fn random_instance(seed: u64, profile: &Profile) -> Result<(FGModule, FGModule)> {
    let mut rng = rng(seed);
    let budget = Budget::default();
    let ring = match &profile.backend {
        Backend::Integers => RingDescriptor::Integers,
        Backend::IntegersMod { max_n } => RingDescriptor::zmod(rng.gen_range(2..=(*max_n).max(2)))?,
        Backend::Quadratic { disc } => RingDescriptor::quadratic(*disc)?,
        Backend::Abstract { ring } => ring.clone(),
    };
    let m = one_module(&mut rng, profile, &ring, &budget)?;
    let n = if rng.gen_bool(0.5) {
        one_module(&mut rng, profile, &ring, &budget)?
    } else {
        piece_of(&mut rng, profile, &m)?
    };
    Ok((m, n))
}

/// A module assembled from parts of `m` (a subset of its elementary divisors with
/// lowered exponents, rank at most `rank m`), so that capacities are often positive.
fn piece_of(rng: &mut ChaCha8Rng, profile: &Profile, m: &FGModule) -> Result<FGModule> {
    let ring = m.ring();
    let mut divisors = BTreeMap::new();
    for (p, exps) in m.elementary_divisors() {
        let mut kept = Vec::new();
        for e in exps {
            if rng.gen_bool(0.5) {
                kept.push(rng.gen_range(1..=e));
            }
        }
        divisors.insert(p, kept);
    }
    let rank = rng.gen_range(profile.min_rank.min(m.rank())..=m.rank());
    let classes = ring.class_group()?.elements;
    let steinitz = classes.choose(rng).expect("class group is nonempty").clone();
    FGModule::from_elementary_divisors(ring.clone(), rank, steinitz, &divisors)
}

/// `n ∈ 2..=4`, each prime below 50 placed in a random set or left out, and `a`
/// present half the time.
pub fn random_glq_instance(seed: u64) -> Result<GlqInstance> {
    let mut rng = rng(seed);
    let n = rng.gen_range(2..=4usize);
    let mut lambdas = vec![BTreeSet::new(); n];
    for p in (2..50u64).filter(|p| is_prime(*p)) {
        let slot = rng.gen_range(0..=n);
        if slot < n {
            lambdas[slot].insert(p);
        }
    }
    let a = if rng.gen_bool(0.5) {
        let bad: u64 = lambdas[0].iter().product();
        let mut a: i64 = rng.gen_range(-1000..=1000);
        while a == 0 || gcd_u64(a.unsigned_abs(), bad) != 1 {
            a = rng.gen_range(-1000..=1000);
        }
        Some(a)
    } else {
        None
    };
    GlqInstance::new(n, lambdas, a)
}

/// Dimensions in `1..=max_dim`, entries in `[-bound, bound]`.
pub fn random_matrix(seed: u64, max_dim: usize, bound: i64) -> IntMatrix {
    let mut rng = rng(seed);
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    let data: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-bound..=bound)).collect();
    IntMatrix::from_i64(rows, cols, &data).expect("dimensions match")
}
