//! Imaginary quadratic orders `Z[ω]` of fundamental discriminant `D < 0`.
//!
//! `ω = √(D/4)` when `D ≡ 0 (mod 4)` and `ω = (D + √D)/2` when `D ≡ 1 (mod 4)`, so in both
//! cases `ω² = Tω − Nm` with `T` the trace and `Nm` the norm of `ω`. Elements are pairs
//! `(x, y)` meaning `x + yω`.
//!
//! Ideals are kept as Hermite-form lattices `g·(aZ + (b+ω)Z)`; ideal classes as reduced
//! binary quadratic forms, composed with Gauss composition.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{ext_gcd_i128, gcd_i128, is_prime, sqrt_mod_prime};
use crate::error::{Error, Result};

/// Largest `|D|` accepted; keeps every intermediate of composition inside `i128`.
pub const MAX_ABS_DISCRIMINANT: i64 = 1_000_000_000_000;

/// Arithmetic data of `Z[ω]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadOrder {
    pub disc: i128,
    pub trace: i128,
    pub norm_omega: i128,
}

fn is_squarefree(mut n: i128) -> bool {
    n = n.abs();
    let mut p = 2i128;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

/// True when `d` is a negative fundamental discriminant.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    let d = d as i128;
    match d.rem_euclid(4) {
        1 => is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m)
        }
        _ => false,
    }
}

impl QuadOrder {
    pub fn new(disc: i64) -> Result<Self> {
        if disc.unsigned_abs() > MAX_ABS_DISCRIMINANT as u64 {
            return Err(Error::InvalidRing(format!("|D| = {} exceeds {MAX_ABS_DISCRIMINANT}", disc.unsigned_abs())));
        }
        if !is_fundamental_discriminant(disc) {
            return Err(Error::InvalidRing(format!("{disc} is not a negative fundamental discriminant")));
        }
        let d = disc as i128;
        let (trace, norm_omega) = if d.rem_euclid(4) == 0 { (0, -d / 4) } else { (d, (d * d - d) / 4) };
        Ok(QuadOrder { disc: d, trace, norm_omega })
    }

    /// Norm of `x + yω`.
    pub fn norm(&self, x: i128, y: i128) -> i128 {
        x * x + self.trace * x * y + self.norm_omega * y * y
    }

    pub fn mul(&self, (x1, y1): (i128, i128), (x2, y2): (i128, i128)) -> (i128, i128) {
        (x1 * x2 - self.norm_omega * y1 * y2, x1 * y2 + x2 * y1 + self.trace * y1 * y2)
    }

    /// The ideal generated (as an ideal) by the given elements.
    pub fn ideal_from_generators(&self, gens: &[(i128, i128)]) -> Result<QuadIdeal> {
        let mut rows = Vec::with_capacity(gens.len() * 2);
        for &g in gens {
            rows.push(g);
            rows.push(self.mul(g, (0, 1)));
        }
        QuadIdeal::from_lattice_rows(&rows)
    }

    pub fn ideal_mul(&self, i: &QuadIdeal, j: &QuadIdeal) -> Result<QuadIdeal> {
        let mut gens = Vec::with_capacity(4);
        for a in i.basis() {
            for b in j.basis() {
                gens.push(self.mul(a, b));
            }
        }
        self.ideal_from_generators(&gens)
    }

    pub fn ideal_pow(&self, i: &QuadIdeal, e: u32) -> Result<QuadIdeal> {
        let mut acc = QuadIdeal::unit();
        for _ in 0..e {
            acc = self.ideal_mul(&acc, i)?;
        }
        Ok(acc)
    }

    /// Checks and canonicalizes user-supplied two-element data `content·(a, b+ω)`.
    pub fn ideal_from_normal_form(&self, content: i128, a: i128, b: i128) -> Result<QuadIdeal> {
        if content == 0 || a == 0 {
            return Err(Error::ZeroIdeal);
        }
        if content < 0 || a < 0 {
            return Err(Error::InvalidIdeal(format!("normal form needs positive a and content, got a={a}, content={content}")));
        }
        if self.norm(b, 1) % a != 0 {
            return Err(Error::InvalidIdeal(format!("a = {a} does not divide Norm({b}+ω) = {}", self.norm(b, 1))));
        }
        self.ideal_from_generators(&[(content * a, 0), (content * b, content)])
    }

    /// Roots of the minimal polynomial of ω modulo `p`, i.e. residues `x` with `ω ≡ x`
    /// in some prime above `p`.
    fn omega_roots_mod(&self, p: u64) -> Vec<u64> {
        let pi = p as i128;
        if p == 2 {
            return (0..2).filter(|&x| self.norm(-(x as i128), 1).rem_euclid(2) == 0).collect();
        }
        let disc_mod = self.disc.rem_euclid(pi) as u64;
        let Some(s) = sqrt_mod_prime(disc_mod, p) else { return vec![] };
        let inv2 = (pi + 1) / 2;
        let t = self.trace.rem_euclid(pi);
        let mut roots: Vec<u64> = [s as i128, -(s as i128)]
            .iter()
            .map(|&r| ((t + r).rem_euclid(pi) * inv2).rem_euclid(pi) as u64)
            .collect();
        roots.sort_unstable();
        roots.dedup();
        roots
    }

    /// The primes above the rational prime `p`.
    pub fn prime_split(&self, p: u64) -> Result<Vec<QuadPrime>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        let roots = self.omega_roots_mod(p);
        let kind = match roots.len() {
            0 => SplitKind::Inert,
            1 => SplitKind::Ramified,
            _ => SplitKind::Split,
        };
        if kind == SplitKind::Inert {
            return Ok(vec![QuadPrime { p, kind, root: 0 }]);
        }
        // prime (p, ω - x) written as (p, b + ω) with b = -x mod p
        let mut out: Vec<QuadPrime> = roots
            .into_iter()
            .map(|x| QuadPrime { p, kind, root: (p - x % p) % p })
            .collect();
        out.sort();
        Ok(out)
    }

    pub fn prime_ideal(&self, q: &QuadPrime) -> Result<QuadIdeal> {
        let p = q.p as i128;
        match q.kind {
            SplitKind::Inert => self.ideal_from_generators(&[(p, 0)]),
            _ => {
                if self.norm(q.root as i128, 1).rem_euclid(p) != 0 {
                    return Err(Error::InvalidIdeal(format!("{q} is not a prime of discriminant {}", self.disc)));
                }
                self.ideal_from_generators(&[(p, 0), (q.root as i128, 1)])
            }
        }
    }

    /// Validates a prime label against this order.
    pub fn check_prime(&self, q: &QuadPrime) -> Result<()> {
        let above = self.prime_split(q.p)?;
        if above.contains(q) {
            Ok(())
        } else {
            Err(Error::InvalidIdeal(format!("{q} is not a prime of discriminant {}", self.disc)))
        }
    }

    /// Factorization of a lattice ideal into primes.
    pub fn factor_ideal(&self, i: &QuadIdeal, budget: &crate::budget::Budget) -> Result<BTreeMap<QuadPrime, u32>> {
        let mut out = BTreeMap::new();
        let content = u64::try_from(i.content).map_err(|_| Error::FactorizationBudget(i.content.to_string()))?;
        for (q, e) in crate::arith::factorize(content, budget)? {
            for prime in self.prime_split(q)? {
                let mult = if prime.kind == SplitKind::Ramified { 2 * e } else { e };
                *out.entry(prime).or_insert(0) += mult;
            }
        }
        let a = u64::try_from(i.a).map_err(|_| Error::FactorizationBudget(i.a.to_string()))?;
        for (q, e) in crate::arith::factorize(a, budget)? {
            let above = self.prime_split(q)?;
            let root = i.b.rem_euclid(q as i128) as u64;
            let prime = above
                .into_iter()
                .find(|pr| pr.kind != SplitKind::Inert && pr.root == root)
                .ok_or_else(|| Error::InvalidIdeal(format!("lattice {i} has no prime above {q} with root {root}")))?;
            *out.entry(prime).or_insert(0) += e;
        }
        Ok(out)
    }

    /// The reduced form attached to the class of a lattice ideal.
    pub fn class_of_lattice(&self, i: &QuadIdeal) -> Form {
        let b_form = -(2 * i.b + self.trace);
        let c = (b_form * b_form - self.disc) / (4 * i.a);
        Form { a: i.a, b: b_form, c }.reduced()
    }

    /// A primitive lattice ideal in the class of the form `(a, b, c)`.
    pub fn lattice_of_form(&self, f: &Form) -> QuadIdeal {
        let shift = -(f.b + self.trace) / 2;
        QuadIdeal { content: 1, a: f.a, b: shift.rem_euclid(f.a) }
    }

    pub fn identity_form(&self) -> Form {
        let b = self.disc.rem_euclid(2);
        Form { a: 1, b, c: (b * b - self.disc) / 4 }
    }

    /// All reduced forms of discriminant `D`, sorted.
    pub fn reduced_forms(&self) -> Vec<Form> {
        let d = self.disc;
        let mut out = Vec::new();
        let mut a = 1i128;
        while 3 * a * a <= -d {
            for b in -a + 1..=a {
                if (b - d).rem_euclid(2) != 0 {
                    continue;
                }
                let num = b * b - d;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                if c < a || (c == a && b < 0) {
                    continue;
                }
                if gcd_i128(gcd_i128(a, b), c) != 1 {
                    continue;
                }
                out.push(Form { a, b, c });
            }
            a += 1;
        }
        out.sort();
        out
    }

    pub fn compose(&self, f: &Form, g: &Form) -> Form {
        f.compose(g, self.disc).reduced()
    }
}

/// Splitting type of a rational prime in the order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitKind {
    Split,
    Inert,
    Ramified,
}

/// A nonzero prime of `Z[ω]`: `(p, root + ω)` when split or ramified, `(p)` when inert.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QuadPrime {
    pub p: u64,
    pub kind: SplitKind,
    pub root: u64,
}

impl fmt::Display for QuadPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SplitKind::Inert => write!(f, "({})", self.p),
            _ => write!(f, "({},{}+ω)", self.p, self.root),
        }
    }
}

/// The lattice `content·(aZ + (b+ω)Z)` with `a ≥ 1`, `0 ≤ b < a`, `content ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadIdeal {
    pub content: i128,
    pub a: i128,
    pub b: i128,
}

impl fmt::Display for QuadIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.content != 1 {
            write!(f, "{}·", self.content)?;
        }
        write!(f, "({}, {}+ω)", self.a, self.b)
    }
}

impl QuadIdeal {
    pub fn unit() -> Self {
        QuadIdeal { content: 1, a: 1, b: 0 }
    }

    /// Absolute norm, the index of the lattice in `Z[ω]`.
    pub fn norm(&self) -> i128 {
        self.content * self.content * self.a
    }

    /// Z-basis `{content·a, content·(b+ω)}`.
    pub fn basis(&self) -> [(i128, i128); 2] {
        [(self.content * self.a, 0), (self.content * self.b, self.content)]
    }

    /// Hermite form of the Z-lattice spanned by `rows` (coordinates in `(1, ω)`).
    fn from_lattice_rows(rows: &[(i128, i128)]) -> Result<Self> {
        // fold the ω-coordinates into one row by Bézout combinations
        let mut pivot = (0i128, 0i128);
        let mut rest: Vec<i128> = Vec::new();
        for &(x, y) in rows {
            if y == 0 {
                rest.push(x);
                continue;
            }
            if pivot.1 == 0 {
                pivot = (x, y);
                continue;
            }
            let (g, s, t) = ext_gcd_i128(pivot.1, y);
            let new_pivot = (s * pivot.0 + t * x, g);
            // the other lattice vector killed in the y-coordinate
            let (u, v) = (y / g, pivot.1 / g);
            rest.push(u * pivot.0 - v * x);
            pivot = new_pivot;
        }
        let x1 = rest.iter().fold(0i128, |acc, &v| gcd_i128(acc, v));
        if x1 == 0 || pivot.1 == 0 {
            return Err(Error::ZeroIdeal);
        }
        let g = pivot.1.abs();
        let x2 = if pivot.1 < 0 { -pivot.0 } else { pivot.0 };
        if x1 % g != 0 || x2 % g != 0 {
            return Err(Error::InvalidIdeal("lattice is not an ideal".into()));
        }
        let a = x1 / g;
        Ok(QuadIdeal { content: g, a, b: (x2 / g).rem_euclid(a) })
    }
}

/// A binary quadratic form `ax² + bxy + cy²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Form {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl PartialOrd for Form {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Form {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.a, self.b, self.c).cmp(&(other.a, other.b, other.c))
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

impl Form {
    pub fn discriminant(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// `|b| ≤ a ≤ c`, with `b ≥ 0` when `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        self.b.abs() <= self.a
            && self.a <= self.c
            && !((self.b.abs() == self.a || self.a == self.c) && self.b < 0)
    }

    fn normalized(mut self) -> Self {
        if -self.a < self.b && self.b <= self.a {
            return self;
        }
        let two_a = 2 * self.a;
        let r = (self.a - self.b).div_euclid(two_a);
        let new_b = self.b + two_a * r;
        self.c = (new_b * new_b - self.discriminant()) / (4 * self.a);
        self.b = new_b;
        self
    }

    /// Reduction of a positive definite form.
    pub fn reduced(self) -> Self {
        let mut f = self.normalized();
        while f.a > f.c {
            f = Form { a: f.c, b: -f.b, c: f.a }.normalized();
        }
        if f.a == f.c && f.b < 0 {
            f.b = -f.b;
        }
        f
    }

    pub fn inverse(&self) -> Self {
        Form { a: self.a, b: -self.b, c: self.c }.reduced()
    }

    /// Gauss composition (unreduced result).
    pub fn compose(&self, other: &Form, disc: i128) -> Form {
        let (mut f1, mut f2) = (*self, *other);
        if f1.a > f2.a {
            std::mem::swap(&mut f1, &mut f2);
        }
        let s = (f1.b + f2.b) / 2;
        let n = f2.b - s;
        let (y1, d) = if f2.a % f1.a == 0 {
            (0, f1.a)
        } else {
            let (d, u, _) = ext_gcd_i128(f2.a, f1.a);
            (u, d)
        };
        let (x2, y2, d1) = if s % d == 0 {
            (0, -1, d)
        } else {
            let (d1, u, v) = ext_gcd_i128(s, d);
            (u, -v, d1)
        };
        let v1 = f1.a / d1;
        let v2 = f2.a / d1;
        let r = (y1 * y2 % v1 * n - x2 * f2.c).rem_euclid(v1);
        let b3 = f2.b + 2 * v2 * r;
        let a3 = v1 * v2;
        let c3 = (b3 * b3 - disc) / (4 * a3);
        Form { a: a3, b: b3, c: c3 }
    }
}
