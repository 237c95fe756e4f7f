//! JSON and inline text forms of modules.
//!
//! JSON: `{"ring":{"kind":"Z"},"rank":2,"steinitz":[1],"torsion":[{"factors":{"2":2}},6]}`.
//! Torsion entries are cyclic factors `R/I`; plain integers `d` stand for `R/(d)` and are
//! accepted over `Z`, `Z/n` and quadratic rings. The entries need not form a chain.
//!
//! Inline: `Z:1+[4,2]` is `Z ⊕ Z/4 ⊕ Z/2`; `Z/12:0+[4]` is the `Z/12`-module `Z/4`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::module::FGModule;
use crate::ring::{Ideal, RingDescriptor};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TorsionEntry {
    Integer(u64),
    Factored { factors: BTreeMap<String, u32> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDescriptor {
    pub ring: RingDescriptor,
    #[serde(default)]
    pub rank: u32,
    #[serde(default)]
    pub steinitz: Vec<i128>,
    #[serde(default)]
    pub torsion: Vec<TorsionEntry>,
}

impl ModuleDescriptor {
    pub fn of(m: &FGModule) -> Self {
        ModuleDescriptor {
            ring: m.ring().clone(),
            rank: m.rank(),
            steinitz: m.steinitz().to_json_vec(),
            torsion: m
                .torsion()
                .iter()
                .map(|i| TorsionEntry::Factored {
                    factors: i.factors.iter().map(|(p, e)| (p.to_string(), *e)).collect(),
                })
                .collect(),
        }
    }

    pub fn build(&self, budget: &Budget) -> Result<FGModule> {
        let ring = &self.ring;
        ring.validate()?;
        let steinitz = ring.class_from_ints(&self.steinitz)?;
        if let RingDescriptor::IntegersMod { n } = ring {
            // cyclic factors as integers, so that R/(n) can be promoted to a free summand
            let mut orders = Vec::with_capacity(self.torsion.len());
            for t in &self.torsion {
                orders.push(match t {
                    TorsionEntry::Integer(d) => *d,
                    TorsionEntry::Factored { factors } => {
                        let mut d: u64 = 1;
                        for (label, e) in factors {
                            let p: u64 = label
                                .parse()
                                .map_err(|_| Error::Parse(format!("`{label}` is not a prime of Z/{n}")))?;
                            d = p
                                .checked_pow(*e)
                                .and_then(|q| d.checked_mul(q))
                                .ok_or_else(|| Error::InvalidIdeal(format!("{label}^{e} overflows")))?;
                        }
                        d
                    }
                });
            }
            return FGModule::over_zmod(*n, self.rank, &orders);
        }
        let cyclics: Vec<Ideal> = self
            .torsion
            .iter()
            .map(|t| match t {
                TorsionEntry::Integer(d) => ring.ideal_of_integer(*d, budget),
                TorsionEntry::Factored { factors } => {
                    let mut ideal = Ideal::unit();
                    for (label, e) in factors {
                        ideal = ideal.times(&Ideal::prime_power(ring.parse_prime(label)?, *e));
                    }
                    if ideal.is_unit() {
                        return Err(Error::InvalidModule("torsion ideals must be proper".into()));
                    }
                    Ok(ideal)
                }
            })
            .collect::<Result<_>>()?;
        if let Some(i) = cyclics.iter().position(Ideal::is_unit) {
            return Err(Error::InvalidModule(format!("torsion entry {} is the unit ideal", i + 1)));
        }
        FGModule::from_cyclics(ring.clone(), self.rank, steinitz, &cyclics)
    }
}

/// Parses a module given as JSON. Errors carry serde's line/column position.
pub fn module_from_json(text: &str, budget: &Budget) -> Result<FGModule> {
    let d: ModuleDescriptor = serde_json::from_str(text).map_err(|e| Error::Parse(format!("module JSON: {e}")))?;
    d.build(budget)
}

pub fn module_to_json(m: &FGModule) -> String {
    serde_json::to_string(&ModuleDescriptor::of(m)).expect("descriptors serialize")
}

/// Parses `Z:r+[d1,…]` or `Z/n:r+[d1,…]`. Errors name the byte offset of the problem.
pub fn module_from_inline(text: &str) -> Result<FGModule> {
    let err = |pos: usize, msg: &str| Error::Parse(format!("inline module at column {}: {msg}", pos + 1));
    let (ring, rest) = text.split_once(':').ok_or_else(|| err(0, "expected `Z:` or `Z/n:` prefix"))?;
    let offset = ring.len() + 1;
    let modulus = match ring.trim() {
        "Z" => None,
        r => match r.strip_prefix("Z/") {
            Some(n) => Some(n.trim().parse::<u64>().map_err(|_| err(2, "modulus is not an integer"))?),
            None => return Err(err(0, "ring must be `Z` or `Z/n`")),
        },
    };
    let (rank_text, tail) = match rest.split_once('+') {
        Some((r, t)) => (r, Some(t)),
        None => (rest, None),
    };
    let rank: u32 = rank_text.trim().parse().map_err(|_| err(offset, "rank is not a nonnegative integer"))?;
    let mut orders = Vec::new();
    if let Some(tail) = tail {
        let tail_at = offset + rank_text.len() + 1;
        let inner = tail
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| err(tail_at, "expected `[d1,d2,…]`"))?;
        for piece in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let d: u64 = piece.parse().map_err(|_| err(tail_at, &format!("`{piece}` is not a positive integer")))?;
            if d == 0 {
                return Err(err(tail_at, "cyclic orders must be positive"));
            }
            if d > 1 {
                orders.push(d);
            }
        }
    }
    match modulus {
        None => FGModule::over_z(rank, &orders),
        Some(n) => FGModule::over_zmod(n, rank, &orders),
    }
}

/// Inline syntax when the text does not start with `{`, JSON otherwise.
pub fn parse_module(text: &str, budget: &Budget) -> Result<FGModule> {
    if text.trim_start().starts_with('{') {
        module_from_json(text, budget)
    } else {
        module_from_inline(text.trim())
    }
}
