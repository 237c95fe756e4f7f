//! Integer helpers: gcd/Bézout, primality, budgeted factorization, square roots mod p, CRT.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::budget::Budget;
use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

/// Extended gcd over `BigInt`: returns `(g, x, y)` with `a*x + b*y = g >= 0`.
///
/// This is the plain Euclidean recurrence, so the cofactors are the minimal ones it
/// produces (`|x| <= |b|/(2g)`, `|y| <= |a|/(2g)` away from degenerate inputs).
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Bézout coefficients for a whole list: returns `(g, xs)` with `sum xs[i]*v[i] = g`.
pub fn ext_gcd_list(values: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut coeffs: Vec<BigInt> = Vec::with_capacity(values.len());
    for v in values {
        let (ng, x, y) = ext_gcd(&g, v);
        for c in coeffs.iter_mut() {
            *c *= &x;
        }
        coeffs.push(y);
        g = ng;
    }
    (g, coeffs)
}

/// Extended gcd over i128, same contract as [`ext_gcd`].
pub fn ext_gcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho. Returns a nontrivial factor or `None` once
/// `steps` is exhausted.
fn rho(n: u64, steps: &mut u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    for c in 1..u64::MAX {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut r = 1u64;
        let mut ys = 0u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let m = 128.min(r - k);
                for _ in 0..m {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                if *steps < m {
                    return None;
                }
                *steps -= m;
                g = gcd_u64(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
    None
}

/// Prime factorization `n = prod p^e`. Trial division up to 10^6, then Pollard rho
/// under `budget.factor_steps`.
pub fn factorize(n: u64, budget: &Budget) -> Result<BTreeMap<u64, u32>> {
    let mut out = BTreeMap::new();
    if n == 0 {
        return Err(Error::InvalidIdeal("cannot factor 0".into()));
    }
    let mut m = n;
    let mut p = 2u64;
    while p <= TRIAL_LIMIT && p * p <= m {
        while m % p == 0 {
            *out.entry(p).or_insert(0) += 1;
            m /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m == 1 {
        return Ok(out);
    }
    let mut steps = budget.factor_steps;
    let mut stack = vec![m];
    while let Some(x) = stack.pop() {
        if x == 1 {
            continue;
        }
        if is_prime(x) {
            *out.entry(x).or_insert(0) += 1;
            continue;
        }
        let d = rho(x, &mut steps).ok_or_else(|| Error::FactorizationBudget(n.to_string()))?;
        stack.push(d);
        stack.push(x / d);
    }
    Ok(out)
}

/// Factorization of a `BigInt`; values outside `u64` are reported as over budget.
pub fn factorize_big(n: &BigInt, budget: &Budget) -> Result<BTreeMap<u64, u32>> {
    let small: u64 = n
        .abs()
        .try_into()
        .map_err(|_| Error::FactorizationBudget(n.to_string()))?;
    factorize(small, budget)
}

pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n != 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Square roots of `a` modulo an odd prime `p` (Tonelli-Shanks); `None` for non-residues.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if p == 2 || a == 0 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Solves `x = residues[i] (mod moduli[i])` for pairwise coprime moduli; result in `[0, prod)`.
pub fn crt(residues: &[BigInt], moduli: &[BigInt]) -> BigInt {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (r, q) in residues.iter().zip(moduli) {
        let (g, inv, _) = ext_gcd(&m, q);
        debug_assert!(g.is_one(), "CRT moduli must be coprime");
        // x' = x + m * ((r - x) * m^{-1} mod q)
        let k = ((r - &x) * inv).mod_floor(q);
        x += &m * k;
        m *= q;
        x = x.mod_floor(&m);
    }
    x
}

/// Serde helpers writing integers as JSON numbers when they fit in `i64`, decimal strings otherwise.
pub mod json_int {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::ser::{SerializeSeq, Serializer};

    pub fn one<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match v.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&v.to_string()),
        }
    }

    pub fn many<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&Wrap(x))?;
        }
        seq.end()
    }

    pub fn opt<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => one(x, s),
            None => s.serialize_none(),
        }
    }

    struct Wrap<'a>(&'a BigInt);

    impl serde::Serialize for Wrap<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            one(self.0, s)
        }
    }
}
