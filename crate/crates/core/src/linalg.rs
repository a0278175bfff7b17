//! Exact linear algebra over Q(sqrt2): reduced row echelon bases of sparse
//! vectors, dense matrices, univariate polynomials, minimal polynomials and
//! the Jordan–Chevalley semisimple part.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type SparseVec<K> = BTreeMap<K, Scalar>;

fn axpy<K: Ord + Clone>(v: &mut SparseVec<K>, c: &Scalar, row: &SparseVec<K>) {
    for (k, r) in row {
        let delta = c * r;
        match v.get_mut(k) {
            Some(x) => {
                *x += &delta;
                if x.is_zero() {
                    v.remove(k);
                }
            }
            None => {
                if !delta.is_zero() {
                    v.insert(k.clone(), delta);
                }
            }
        }
    }
}

/// A subspace kept in fully reduced row echelon form.
///
/// The pivot of a row is its smallest coordinate; each pivot appears in
/// exactly one row and that row has pivot coefficient one. The reduced form
/// depends only on the subspace, so two equal spans have equal rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, SparseVec<K>>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows in ascending pivot order.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    /// Residue of `v` modulo the span.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let hits: Vec<(K, Scalar)> =
            v.iter().filter(|(k, _)| self.rows.contains_key(*k)).map(|(k, c)| (k.clone(), c.clone())).collect();
        let mut out = v.clone();
        for (k, c) in hits {
            axpy(&mut out, &-c, &self.rows[&k]);
        }
        out
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Coordinates of `v` on the rows (in pivot order), or `None` if `v` is outside the span.
    pub fn coordinates(&self, v: &SparseVec<K>) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.rows.keys().map(|k| v.get(k).cloned().unwrap_or_else(Scalar::zero)).collect())
    }

    /// Adds `v` to the span. Returns the new normalized row if the dimension grew.
    pub fn insert(&mut self, v: &SparseVec<K>) -> Option<SparseVec<K>> {
        let mut r = self.reduce(v);
        let (pivot, lead) = match r.iter().next() {
            Some((k, c)) => (k.clone(), c.clone()),
            None => return None,
        };
        let inv = lead.inv().expect("nonzero pivot");
        for c in r.values_mut() {
            *c = &*c * &inv;
        }
        for row in self.rows.values_mut() {
            if let Some(c) = row.get(&pivot).cloned() {
                axpy(row, &-c, &r);
            }
        }
        self.rows.insert(pivot, r.clone());
        Some(r)
    }

    /// True when every row of `self` lies in `other`.
    pub fn is_subspace_of(&self, other: &Echelon<K>) -> bool {
        self.rows.values().all(|r| other.contains(r))
    }
}

/// Dense square or rectangular matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Builds a matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(rows: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, c) in col.iter().enumerate() {
                m.set(i, j, c.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc += &(self.get(i, j) * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn pow(&self, n: usize) -> Matrix {
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_nilpotent(&self) -> bool {
        self.pow(self.rows).is_zero()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Gauss–Jordan inverse; `DivisionByZero` when singular.
    pub fn inverse(&self) -> Result<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero()).ok_or(Error::DivisionByZero)?;
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    inv.data.swap(piv * n + j, col * n + j);
                }
            }
            let f = a.get(col, col).inv()?;
            for j in 0..n {
                let v = a.get(col, j) * &f;
                a.set(col, j, v);
                let w = inv.get(col, j) * &f;
                inv.set(col, j, w);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in 0..n {
                    let v = a.get(r, j) - &(&factor * a.get(col, j));
                    a.set(r, j, v);
                    let w = inv.get(r, j) - &(&factor * inv.get(col, j));
                    inv.set(r, j, w);
                }
            }
        }
        Ok(inv)
    }
}

/// Univariate polynomial over Q(sqrt2), coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn one() -> Self {
        UniPoly::new(vec![Scalar::one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> &Scalar {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().inv().expect("nonzero lead");
        UniPoly::new(self.coeffs.iter().map(|c| c * &inv).collect())
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * &Scalar::from_int(k as i64)).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::new(vec![]);
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UniPoly::new(out)
    }

    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.lead().inv().expect("nonzero lead");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Scalar::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap() * &inv;
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &(&c * dc);
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, other: &UniPoly) -> UniPoly {
        let g = self.gcd(other);
        self.mul(other).div_rem(&g).0.monic()
    }

    /// `p / gcd(p, p')`, monic.
    pub fn squarefree_part(&self) -> UniPoly {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        let n = m.rows();
        let mut acc = Matrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m).add(&Matrix::identity(n).scale(c));
        }
        acc
    }
}

/// Minimal polynomial of `v` under `m` by Krylov iteration.
fn local_minimal_polynomial(m: &Matrix, v: Vec<Scalar>) -> UniPoly {
    let n = m.rows();
    // rows: (pivot, vector, combination of Krylov vectors producing it)
    let mut rows: Vec<(usize, Vec<Scalar>, Vec<Scalar>)> = Vec::new();
    let mut w = v;
    for k in 0..=n {
        let mut combo = vec![Scalar::zero(); n + 1];
        combo[k] = Scalar::one();
        let mut cur = w.clone();
        for (p, rv, rc) in &rows {
            let c = cur[*p].clone();
            if c.is_zero() {
                continue;
            }
            for i in 0..n {
                let t = &c * &rv[i];
                cur[i] -= &t;
            }
            for i in 0..=n {
                let t = &c * &rc[i];
                combo[i] -= &t;
            }
        }
        match cur.iter().position(|c| !c.is_zero()) {
            None => return UniPoly::new(combo[..=k].to_vec()),
            Some(p) => {
                let inv = cur[p].inv().expect("nonzero");
                let cur = cur.iter().map(|c| c * &inv).collect();
                let combo = combo.iter().map(|c| c * &inv).collect();
                rows.push((p, cur, combo));
            }
        }
        w = m.mul_vec(&w);
    }
    unreachable!("Krylov sequence of length n+1 is dependent")
}

pub fn minimal_polynomial(m: &Matrix) -> UniPoly {
    let n = m.rows();
    let mut acc = UniPoly::one();
    for j in 0..n {
        let mut e = vec![Scalar::zero(); n];
        e[j] = Scalar::one();
        acc = acc.lcm(&local_minimal_polynomial(m, e));
    }
    acc
}

/// Semisimple part of `m` via Newton iteration on the squarefree part of
/// the minimal polynomial; no eigenvalues are computed.
pub fn semisimple_part(m: &Matrix) -> Result<Matrix> {
    let n = m.rows();
    if n == 0 {
        return Ok(m.clone());
    }
    let q = minimal_polynomial(m).squarefree_part();
    let dq = q.derivative();
    let mut s = m.clone();
    // quadratic convergence: log2(n) + 1 steps always suffice
    for _ in 0..=(usize::BITS - n.leading_zeros()) {
        let qs = q.eval_matrix(&s);
        if qs.is_zero() {
            return Ok(s);
        }
        let inv = dq.eval_matrix(&s).inverse().map_err(|_| Error::FieldExtensionRequired)?;
        s = s.sub(&qs.mul(&inv));
    }
    if q.eval_matrix(&s).is_zero() {
        Ok(s)
    } else {
        Err(Error::FieldExtensionRequired)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_matrix(rows: &[&[i64]]) -> Matrix {
        let n = rows.len();
        let mut m = Matrix::zeros(n, rows[0].len());
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, Scalar::from_int(v));
            }
        }
        m
    }

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&v| Scalar::from_int(v)).collect())
    }

    #[test]
    fn echelon_is_canonical() {
        let v =
            |pairs: &[(u32, i64)]| -> SparseVec<u32> { pairs.iter().map(|&(k, c)| (k, Scalar::from_int(c))).collect() };
        let mut a = Echelon::new();
        a.insert(&v(&[(0, 1), (1, 2)]));
        a.insert(&v(&[(1, 1), (2, 1)]));
        let mut b = Echelon::new();
        b.insert(&v(&[(0, 1), (1, 3), (2, 1)]));
        b.insert(&v(&[(0, 2), (1, 3), (2, -1)]));
        assert_eq!(a, b);
        assert!(a.insert(&v(&[(0, 1), (1, 1), (2, -1)])).is_none());
        assert_eq!(a.coordinates(&v(&[(0, 2), (1, 5), (2, 1)])), Some(vec![Scalar::from_int(2), Scalar::from_int(5)]));
    }

    #[test]
    fn minimal_polynomial_of_jordan_block() {
        let m = int_matrix(&[&[1, 0, 0], &[1, 1, 0], &[0, 0, 1]]);
        assert_eq!(minimal_polynomial(&m), up(&[1, -2, 1]));
        assert_eq!(up(&[1, -2, 1]).squarefree_part(), up(&[-1, 1]));
    }

    #[test]
    fn semisimple_part_of_jordan_block() {
        let m = int_matrix(&[&[2, 0, 0], &[1, 2, 0], &[0, 1, 2]]);
        assert_eq!(semisimple_part(&m).unwrap(), int_matrix(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]]));
        let nil = int_matrix(&[&[0, 0], &[1, 0]]);
        assert!(semisimple_part(&nil).unwrap().is_zero());
    }

    #[test]
    fn semisimple_part_without_rational_eigenvalues() {
        // companion matrix of (t^2 - 2)^2: eigenvalues ±sqrt2, each with a 2-block
        let m = int_matrix(&[&[0, 0, 0, -4], &[1, 0, 0, 0], &[0, 1, 0, 4], &[0, 0, 1, 0]]);
        let s = semisimple_part(&m).unwrap();
        let nil = m.sub(&s);
        assert!(nil.is_nilpotent() && !nil.is_zero());
        assert_eq!(s.mul(&nil), nil.mul(&s));
        assert!(minimal_polynomial(&s).is_squarefree());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = int_matrix(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.mul(&m.inverse().unwrap()), Matrix::identity(2));
        assert_eq!(int_matrix(&[&[1, 1], &[1, 1]]).inverse(), Err(Error::DivisionByZero));
    }
}
