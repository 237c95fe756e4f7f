//! Integer matrices and Smith normal form with transforms.
//!
//! Presentations use the cokernel convention: columns are generators, rows are
//! relations, and the module is `Z^cols / rowspace`. Maps between presented modules
//! are `g_src × g_tgt` matrices acting on row vectors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::module::FGModule;
use crate::ring::{ClassElement, RingDescriptor};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}×{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Result<Self> {
        IntMatrix::new(rows, cols, data.iter().map(|v| BigInt::from(*v)).collect())
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        IntMatrix::from_i64(rows.len(), cols, &flat)
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = IntMatrix::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[BigInt] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!("vector of length {} against {} rows", v.len(), self.rows)));
        }
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += x * &self[(i, j)];
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!("cannot stack {} and {} columns", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix::new(self.rows + other.rows, self.cols, data)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == if i == j { BigInt::one() } else { BigInt::zero() }))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap_rows(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += k * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = k * &self[(src, j)];
            self[(dst, j)] += v;
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = k * &self[(i, src)];
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// JSON entry: small integers as numbers, large ones as decimal strings.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Small(i64),
    Big(String),
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Entry>,
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let data = self
            .data
            .iter()
            .map(|v| v.to_i64().map(Entry::Small).unwrap_or_else(|| Entry::Big(v.to_string())))
            .collect();
        RawMatrix { rows: self.rows, cols: self.cols, data }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawMatrix::deserialize(d)?;
        let data = raw
            .data
            .into_iter()
            .map(|e| match e {
                Entry::Small(v) => Ok(BigInt::from(v)),
                Entry::Big(s) => s.parse::<BigInt>().map_err(|_| format!("`{s}` is not an integer")),
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        IntMatrix::new(raw.rows, raw.cols, data).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Diagonal entries `d_1 | d_2 | …` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith normal form `U·A·V = D` with unimodular `U`, `V` and nonnegative
/// `d_1 | d_2 | …`, zeros last.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            // pivot: smallest nonzero |entry| in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !d[(i, j)].is_zero() && best.map_or(true, |(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(d, u, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                dirty |= !d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                dirty |= !d[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // divisibility: fold an offending row into row t and go again
            let pivot = d[(t, t)].clone();
            let offending = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(d, u, v)
}

fn finish(d: IntMatrix, u: IntMatrix, v: IntMatrix) -> SnfResult {
    SnfResult { d, u, v }
}

/// `Z^cols / rowspace(a)` in normal form.
pub fn module_from_presentation(a: &IntMatrix, budget: &Budget) -> Result<FGModule> {
    let res = snf(a);
    let diag = res.diagonal();
    let nonzero = diag.iter().filter(|x| !x.is_zero()).count();
    let rank = (a.cols - nonzero) as u32;
    let ring = RingDescriptor::Integers;
    let mut cyclics = Vec::new();
    for x in diag.iter().filter(|x| !x.is_zero() && !x.is_one()) {
        let small = x.to_u64().ok_or_else(|| Error::FactorizationBudget(x.to_string()))?;
        cyclics.push(ring.ideal_of_integer(small, budget)?);
    }
    FGModule::from_cyclics(ring, rank, ClassElement::Trivial, &cyclics)
}

/// `w ∈ rowspace(a)`.
pub fn rowspace_contains(a: &IntMatrix, w: &[BigInt]) -> Result<bool> {
    if w.len() != a.cols {
        return Err(Error::DimensionMismatch(format!("vector of length {} against {} columns", w.len(), a.cols)));
    }
    // w = x·A = x·U⁻¹·D·V⁻¹  ⇔  w·V = y·D
    let res = snf(a);
    let wv = res.v.left_apply(w)?;
    let diag = res.diagonal();
    Ok(wv.iter().enumerate().all(|(k, c)| match diag.get(k) {
        Some(dk) if !dk.is_zero() => c.is_multiple_of(dk),
        _ => c.is_zero(),
    }))
}

/// A basis of the left kernel `{x : x·A = 0}` as the rows of the result.
pub fn left_kernel(a: &IntMatrix) -> IntMatrix {
    let res = snf(a);
    let r = res.rank();
    let mut data = Vec::new();
    for i in r..a.rows {
        data.extend(res.u.row(i).iter().cloned());
    }
    IntMatrix { rows: a.rows - r, cols: a.rows, data }
}

/// Whether the map `f` (rows: source generators, columns: target generators) onto
/// `Z^g / rowspace(target_relations)` is surjective: the stacked matrix `[f; relations]`
/// must have Smith form with `g` unit diagonal entries.
pub fn cokernel_is_zero(f: &IntMatrix, target_relations: &IntMatrix) -> Result<bool> {
    let stacked = f.vstack(target_relations)?;
    if stacked.rows < stacked.cols {
        return Ok(false);
    }
    Ok(snf(&stacked).diagonal().iter().all(|d| d.is_one()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|x| BigInt::from(*x)).collect()
    }

    fn check(a: &IntMatrix) -> SnfResult {
        let r = snf(a);
        assert_eq!(r.u.mul(a).unwrap().mul(&r.v).unwrap(), r.d);
        assert!(r.u.det().unwrap().abs().is_one());
        assert!(r.v.det().unwrap().abs().is_one());
        r
    }

    #[test]
    fn snf_examples() {
        let r = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap());
        assert_eq!(r.diagonal(), big(&[1, 6]));
        let r = check(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]).unwrap());
        assert_eq!(r.diagonal(), big(&[2, 4]));
        let r = check(&IntMatrix::zeros(1, 2));
        assert_eq!(r.diagonal(), big(&[0]));
        assert_eq!((r.d.rows(), r.d.cols()), (1, 2));
        let r = check(&IntMatrix::zeros(0, 3));
        assert!(r.diagonal().is_empty());
    }

    #[test]
    fn presentation_examples() {
        let b = Budget::default();
        let m = module_from_presentation(&IntMatrix::zeros(0, 2), &b).unwrap();
        assert_eq!((m.rank(), m.torsion().len()), (2, 0));
        let m = module_from_presentation(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap(), &b).unwrap();
        assert_eq!((m.rank(), m.integer_invariants().unwrap()), (0, vec![6]));
        let m = module_from_presentation(&IntMatrix::from_rows(&[vec![4, 0], vec![0, 0]]).unwrap(), &b).unwrap();
        assert_eq!((m.rank(), m.integer_invariants().unwrap()), (1, vec![4]));
    }

    #[test]
    fn cokernel_examples() {
        let empty = |c| IntMatrix::zeros(0, c);
        assert!(cokernel_is_zero(&IntMatrix::identity(2), &empty(2)).unwrap());
        assert!(!cokernel_is_zero(&IntMatrix::from_rows(&[vec![2]]).unwrap(), &empty(1)).unwrap());
        // (2 3): Z² → Z, one column per target generator
        assert!(cokernel_is_zero(&IntMatrix::from_rows(&[vec![2], vec![3]]).unwrap(), &empty(1)).unwrap());
        assert!(cokernel_is_zero(&IntMatrix::identity(3), &empty(2)).is_err());
    }

    #[test]
    fn det_small() {
        let a = IntMatrix::from_rows(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]).unwrap();
        assert_eq!(a.det().unwrap(), BigInt::from(18));
        let p = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(p.det().unwrap(), BigInt::from(-1));
        let s = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(s.det().unwrap(), BigInt::zero());
    }

    #[test]
    fn membership_and_kernel() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap();
        assert!(rowspace_contains(&a, &big(&[4, 9])).unwrap());
        assert!(!rowspace_contains(&a, &big(&[1, 0])).unwrap());
        let a = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4], vec![0, 1]]).unwrap();
        let k = left_kernel(&a);
        assert_eq!(k.rows(), 1);
        assert!(k.mul(&a).unwrap().data().iter().all(Zero::is_zero));
    }

    #[test]
    fn json_roundtrip() {
        let a: IntMatrix = serde_json::from_str(r#"{"rows":2,"cols":2,"data":[2,4,6,8]}"#).unwrap();
        assert_eq!(a, IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]).unwrap());
        let mut b = a.clone();
        b[(0, 0)] = "123456789012345678901234567890".parse().unwrap();
        let s = serde_json::to_string(&b).unwrap();
        assert!(s.contains("\"123456789012345678901234567890\""));
        assert_eq!(serde_json::from_str::<IntMatrix>(&s).unwrap(), b);
        assert!(serde_json::from_str::<IntMatrix>(r#"{"rows":2,"cols":2,"data":[1]}"#).is_err());
    }
}
