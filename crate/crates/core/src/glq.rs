//! Determinant-one matrices with prescribed reductions modulo finitely many primes.
//!
//! Given pairwise disjoint finite sets `Λ_1, …, Λ_n` of primes, build `Q` with `det Q = 1`
//! and units `s_1, …, s_n` (modulo every prime involved) such that
//! `Q ≡ P_i·diag(s_1, …, s_n) (mod p)` for all `p ∈ Λ_i`, where `P_i` swaps rows `i` and
//! `n`. Optionally the first row is `(1 − ab, 0, …, 0, ab)` for a given `a`.
//!
//! `Q` has the arrow shape
//! ```text
//! a_1  0  …  0  b_1
//!  0  a_2 …  0  b_2
//!  …
//! c_1 c_2 … c_{n-1} c_n
//! ```
//! with `a_i + b_i = 1` found by a chain of Bézout identities.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{crt, ext_gcd, ext_gcd_list, is_prime, json_int};
use crate::error::{Error, Result};
use crate::snf::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlqInstance {
    pub n: usize,
    /// `lambdas[i]` is `Λ_{i+1}`.
    pub lambdas: Vec<BTreeSet<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<i64>,
}

impl GlqInstance {
    pub fn new(n: usize, lambdas: Vec<BTreeSet<u64>>, a: Option<i64>) -> Result<Self> {
        let inst = GlqInstance { n, lambdas, a };
        inst.validate()?;
        Ok(inst)
    }

    /// Parses `"1:2,5;2:3"` (1-based set indices; unlisted sets are empty).
    pub fn parse(n: usize, spec: &str, a: Option<i64>) -> Result<Self> {
        let mut lambdas = vec![BTreeSet::new(); n];
        for part in spec.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (idx, primes) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected `index:p1,p2,…` in `{part}`")))?;
            let i: usize = idx.trim().parse().map_err(|_| Error::Parse(format!("bad set index `{idx}`")))?;
            if i == 0 || i > n {
                return Err(Error::InvalidInstance(format!("set index {i} outside 1..={n}")));
            }
            for p in primes.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let p: u64 = p.parse().map_err(|_| Error::Parse(format!("bad prime `{p}`")))?;
                lambdas[i - 1].insert(p);
            }
        }
        GlqInstance::new(n, lambdas, a)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidInstance("n must be at least 2".into()));
        }
        if self.lambdas.len() != self.n {
            return Err(Error::InvalidInstance(format!("expected {} prime sets, got {}", self.n, self.lambdas.len())));
        }
        let mut seen = BTreeMap::new();
        for (i, set) in self.lambdas.iter().enumerate() {
            for &p in set {
                if !is_prime(p) {
                    return Err(Error::InvalidInstance(format!("{p} is not prime")));
                }
                if let Some(j) = seen.insert(p, i) {
                    return Err(Error::InvalidInstance(format!("{p} lies in both Λ_{} and Λ_{}", j + 1, i + 1)));
                }
            }
        }
        if let Some(a) = self.a {
            for &p in &self.lambdas[0] {
                if a.rem_euclid(p as i64) == 0 {
                    return Err(Error::InvalidInstance(format!("a = {a} is divisible by {p} ∈ Λ_1")));
                }
            }
        }
        Ok(())
    }

    fn all_primes(&self) -> Vec<(u64, usize)> {
        let mut out: Vec<(u64, usize)> =
            self.lambdas.iter().enumerate().flat_map(|(i, s)| s.iter().map(move |p| (*p, i))).collect();
        out.sort_unstable();
        out
    }
}

/// One step of the Bézout chain: `a_i ∈ K_i`, `b_i ∈ L_i`, `a_i + b_i = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub i: usize,
    /// Generators whose sum is `K_i`.
    #[serde(serialize_with = "json_int::many")]
    pub k_generators: Vec<BigInt>,
    #[serde(serialize_with = "json_int::one")]
    pub k: BigInt,
    #[serde(serialize_with = "json_int::one")]
    pub l: BigInt,
    #[serde(serialize_with = "json_int::one")]
    pub a: BigInt,
    #[serde(serialize_with = "json_int::one")]
    pub b: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transcript {
    #[serde(serialize_with = "json_int::many")]
    pub i_ideals: Vec<BigInt>,
    #[serde(serialize_with = "json_int::many")]
    pub j_ideals: Vec<BigInt>,
    pub chain: Vec<ChainStep>,
    /// `coef_j·J_j` whose sum is the unit ideal in the final step.
    #[serde(serialize_with = "json_int::many")]
    pub final_generators: Vec<BigInt>,
    #[serde(serialize_with = "json_int::many")]
    pub c: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlqResult {
    pub q: IntMatrix,
    #[serde(serialize_with = "json_int::many")]
    pub s: Vec<BigInt>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "json_int::opt")]
    pub b: Option<BigInt>,
    pub transcript: Transcript,
}

fn product(xs: impl IntoIterator<Item = BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc * x)
}

/// `P_i` (1-based): the identity with rows `i` and `n` swapped; `P_n` is the identity.
pub fn permutation_matrix(i: usize, n: usize) -> Result<IntMatrix> {
    if i == 0 || i > n {
        return Err(Error::InvalidInstance(format!("permutation index {i} outside 1..={n}")));
    }
    let mut m = IntMatrix::zeros(n, n);
    for r in 0..n {
        let c = if r == i - 1 {
            n - 1
        } else if r == n - 1 {
            i - 1
        } else {
            r
        };
        m[(r, c)] = BigInt::one();
    }
    Ok(m)
}

pub fn build_glq(inst: &GlqInstance) -> Result<GlqResult> {
    inst.validate()?;
    let n = inst.n;
    let a_param = BigInt::from(inst.a.unwrap_or(1));
    let i_ideals: Vec<BigInt> = inst.lambdas.iter().map(|s| product(s.iter().map(|p| BigInt::from(*p)))).collect();
    let j_ideals: Vec<BigInt> =
        (0..n).map(|i| product((0..n).filter(|j| *j != i).map(|j| i_ideals[j].clone()))).collect();

    let mut a: Vec<BigInt> = Vec::with_capacity(n - 1);
    let mut b: Vec<BigInt> = Vec::with_capacity(n - 1);
    let mut chain = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        // K_i = Σ_{j<i} (a_0⋯b_j⋯a_{i-1}) J_j + Σ_{j>i} (a_0⋯a_{i-1}) J_j,  L_i = (a_0⋯a_{i-1}) J_i
        let prefix = product(a.iter().cloned());
        let mut gens = Vec::new();
        for j in 0..i {
            let coef = product((0..i).map(|k| if k == j { b[k].clone() } else { a[k].clone() }));
            gens.push(coef * &j_ideals[j]);
        }
        for jdx in j_ideals.iter().skip(i + 1) {
            gens.push(&prefix * jdx);
        }
        let (k, _) = ext_gcd_list(&gens);
        let l = if i == 0 { &a_param * &j_ideals[0] } else { &prefix * &j_ideals[i] };
        let (g, x, y) = ext_gcd(&k, &l);
        if !g.is_one() {
            return Err(Error::InvalidInstance(format!("K_{} + L_{} is not the unit ideal (gcd {g})", i + 1, i + 1)));
        }
        let ai = x * &k;
        let bi = y * &l;
        chain.push(ChainStep { i: i + 1, k_generators: gens, k, l, a: ai.clone(), b: bi.clone() });
        a.push(ai);
        b.push(bi);
    }

    // Σ_j coef_j J_j = 1 with coef_j = a_0⋯b_j⋯a_{n-2} (j < n-1), coef_{n-1} = a_0⋯a_{n-2}
    let mut final_generators = Vec::with_capacity(n);
    for j in 0..n - 1 {
        let coef = product((0..n - 1).map(|k| if k == j { b[k].clone() } else { a[k].clone() }));
        final_generators.push(coef * &j_ideals[j]);
    }
    final_generators.push(product(a.iter().cloned()) * &j_ideals[n - 1]);
    let (g, xs) = ext_gcd_list(&final_generators);
    if !g.is_one() {
        return Err(Error::InvalidInstance(format!("final generators have gcd {g}")));
    }
    // det Q = -Σ_{j<n-1} coef_j c_j + coef_{n-1} c_{n-1}
    let c: Vec<BigInt> = (0..n)
        .map(|j| {
            let v = &xs[j] * &j_ideals[j];
            if j < n - 1 {
                -v
            } else {
                v
            }
        })
        .collect();

    let mut q = IntMatrix::zeros(n, n);
    for i in 0..n - 1 {
        q[(i, i)] = a[i].clone();
        q[(i, n - 1)] = b[i].clone();
    }
    for (j, cj) in c.iter().enumerate() {
        q[(n - 1, j)] = cj.clone();
    }

    // s by CRT: s_i ≡ c_i on Λ_i, s_i ≡ a_i elsewhere (i < n); s_n ≡ c_n on Λ_n, b_i on Λ_i
    let primes = inst.all_primes();
    let moduli: Vec<BigInt> = primes.iter().map(|(p, _)| BigInt::from(*p)).collect();
    let s: Vec<BigInt> = (0..n)
        .map(|i| {
            if primes.is_empty() {
                return BigInt::one();
            }
            let residues: Vec<BigInt> = primes
                .iter()
                .map(|&(_, owner)| match (i == n - 1, owner == i) {
                    (_, true) => c[i].clone(),
                    (false, false) => a[i].clone(),
                    (true, false) => b[owner].clone(),
                })
                .collect();
            crt(&residues, &moduli)
        })
        .collect();

    let b_out = inst.a.map(|_| {
        let (quot, rem) = b[0].div_rem(&a_param);
        debug_assert!(rem.is_zero());
        quot
    });
    Ok(GlqResult {
        q,
        s,
        b: b_out,
        transcript: Transcript { i_ideals, j_ideals, chain, final_generators, c },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceItem {
    pub set: usize,
    pub prime: u64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlqCheck {
    pub shape: bool,
    pub determinant_one: bool,
    pub congruences: Vec<CongruenceItem>,
    pub s_coprime: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_row: Option<bool>,
}

impl GlqCheck {
    pub fn passed(&self) -> bool {
        self.shape
            && self.determinant_one
            && self.congruences.iter().all(|c| c.holds)
            && self.s_coprime
            && self.first_row.unwrap_or(true)
    }
}

/// Re-checks every claimed property of `res` from scratch.
pub fn verify_glq(inst: &GlqInstance, res: &GlqResult) -> GlqCheck {
    let n = inst.n;
    let shape = res.q.rows() == n && res.q.cols() == n && res.s.len() == n;
    let mut check = GlqCheck { shape, determinant_one: false, congruences: vec![], s_coprime: false, first_row: None };
    if !shape {
        return check;
    }
    check.determinant_one = res.q.det().map(|d| d.is_one()).unwrap_or(false);
    let mut diag = IntMatrix::zeros(n, n);
    for (i, s) in res.s.iter().enumerate() {
        diag[(i, i)] = s.clone();
    }
    for (i, set) in inst.lambdas.iter().enumerate() {
        let target = permutation_matrix(i + 1, n).and_then(|p| p.mul(&diag)).expect("square shapes");
        for &p in set {
            let pb = BigInt::from(p);
            let holds = res.q.data().iter().zip(target.data()).all(|(x, y)| (x - y).is_multiple_of(&pb));
            check.congruences.push(CongruenceItem { set: i + 1, prime: p, holds });
        }
    }
    check.s_coprime = inst
        .all_primes()
        .iter()
        .all(|(p, _)| res.s.iter().all(|s| !s.is_multiple_of(&BigInt::from(*p))));
    if let Some(a) = inst.a {
        let ab = res.b.as_ref().map(|b| BigInt::from(a) * b);
        check.first_row = Some(match ab {
            Some(ab) => {
                let row = res.q.row(0);
                row[0] == BigInt::one() - &ab
                    && row[n - 1] == ab
                    && row[1..n - 1].iter().all(Zero::is_zero)
            }
            None => false,
        });
    }
    check
}
