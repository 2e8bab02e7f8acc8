//! Exact integer linear algebra.
//!
//! All arithmetic is checked `i64`; overflow surfaces as [`Error::Arithmetic`].
//! The canonical form is the column-style Hermite normal form: `M·U = H`
//! with `U` unimodular and `H` in column echelon form, each pivot positive
//! and the entries to its left reduced into `[0, pivot)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

pub type Int = i64;

#[inline]
pub(crate) fn add(a: Int, b: Int) -> Result<Int> {
    a.checked_add(b).ok_or(Error::Arithmetic)
}

#[inline]
pub(crate) fn mul(a: Int, b: Int) -> Result<Int> {
    a.checked_mul(b).ok_or(Error::Arithmetic)
}

#[inline]
fn sub(a: Int, b: Int) -> Result<Int> {
    a.checked_sub(b).ok_or(Error::Arithmetic)
}

/// `(g, x, y)` with `g = gcd(a, b) ≥ 0` and `x·a + y·b = g`.
pub fn ext_gcd(a: Int, b: Int) -> Result<(Int, Int, Int)> {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1 as Int, 0 as Int);
    let (mut old_t, mut t) = (0 as Int, 1 as Int);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, sub(old_r, mul(q, r)?)?);
        (old_s, s) = (s, sub(old_s, mul(q, s)?)?);
        (old_t, t) = (t, sub(old_t, mul(q, t)?)?);
    }
    if old_r < 0 {
        Ok((
            old_r.checked_neg().ok_or(Error::Arithmetic)?,
            -old_s,
            -old_t,
        ))
    } else {
        Ok((old_r, old_s, old_t))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "IntMatrix{}x{}{:?}",
            self.rows,
            self.cols,
            self.to_rows()
        )
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn scalar(n: usize, c: Int) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Int>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data: rows.concat(),
        })
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Int>]) -> Result<Self> {
        let mut m = Self::zero(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::Dimension(format!(
                    "column of length {} in a {rows}-row matrix",
                    col.len()
                )));
            }
            for (i, &x) in col.iter().enumerate() {
                m.data[i * m.cols + j] = x;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Int {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Int) {
        self.data[r * self.cols + c] = x;
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows)
            .map(|r| self.data[r * self.cols..(r + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn column(&self, c: usize) -> Vec<Int> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Int>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b != 0 {
                        let idx = r * out.cols + c;
                        out.data[idx] = add(out.data[idx], mul(a, b)?)?;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Int]) -> Result<Vec<Int>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![0; self.rows];
        for (c, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let a = self.data[r * self.cols + c];
                if a != 0 {
                    *o = add(*o, mul(a, x)?)?;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(
                "adding matrices of different shape".into(),
            ));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| add(a, b))
            .collect::<Result<_>>()?;
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Columns of `self` followed by the columns of `other`.
    pub fn hcat(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows {
            return Err(Error::Dimension("hcat of different row counts".into()));
        }
        let mut out = Self::zero(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c));
            }
        }
        Ok(out)
    }

    // Column operation: (col_a, col_b) <- (x col_a + y col_b, z col_a + w col_b).
    fn combine_columns(
        &mut self,
        a: usize,
        b: usize,
        x: Int,
        y: Int,
        z: Int,
        w: Int,
    ) -> Result<()> {
        for r in 0..self.rows {
            let ca = self.get(r, a);
            let cb = self.get(r, b);
            let na = add(mul(x, ca)?, mul(y, cb)?)?;
            let nb = add(mul(z, ca)?, mul(w, cb)?)?;
            self.set(r, a, na);
            self.set(r, b, nb);
        }
        Ok(())
    }

    fn swap_columns(&mut self, a: usize, b: usize) {
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    fn negate_column(&mut self, a: usize) {
        for r in 0..self.rows {
            let i = r * self.cols + a;
            self.data[i] = -self.data[i];
        }
    }

    // col_a -= q * col_b
    fn axpy_column(&mut self, a: usize, b: usize, q: Int) -> Result<()> {
        for r in 0..self.rows {
            let v = sub(self.get(r, a), mul(q, self.get(r, b))?)?;
            self.set(r, a, v);
        }
        Ok(())
    }
}

/// Column-style Hermite normal form.
#[derive(Clone, Debug)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Pivot row of each of the first `rank` columns of `h`, strictly increasing.
    pub pivot_rows: Vec<usize>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }
}

pub fn hnf(m: &IntMatrix) -> Result<Hnf> {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.cols);
    let mut pivot_rows = Vec::new();
    let mut k = 0;
    for r in 0..m.rows {
        if k == m.cols {
            break;
        }
        for j in k + 1..m.cols {
            let b = h.get(r, j);
            if b == 0 {
                continue;
            }
            let a = h.get(r, k);
            if a == 0 {
                h.swap_columns(k, j);
                u.swap_columns(k, j);
                continue;
            }
            let (g, x, y) = ext_gcd(a, b)?;
            let (a1, b1) = (a / g, b / g);
            // [x, -b1; y, a1] has determinant 1
            h.combine_columns(k, j, x, y, -b1, a1)?;
            u.combine_columns(k, j, x, y, -b1, a1)?;
        }
        let p = h.get(r, k);
        if p == 0 {
            continue;
        }
        if p < 0 {
            h.negate_column(k);
            u.negate_column(k);
        }
        let p = h.get(r, k);
        for j in 0..k {
            let q = h.get(r, j).div_euclid(p);
            if q != 0 {
                h.axpy_column(j, k, q)?;
                u.axpy_column(j, k, q)?;
            }
        }
        pivot_rows.push(r);
        k += 1;
    }
    Ok(Hnf { h, u, pivot_rows })
}

/// Whether `v` is an integer combination of the columns of `m`; on success
/// returns a certificate `x` with `m·x = v`.
pub fn in_lattice(m: &IntMatrix, v: &[Int]) -> Result<Option<Vec<Int>>> {
    if v.len() != m.rows {
        return Err(Error::Dimension(format!(
            "vector of length {} against {} rows",
            v.len(),
            m.rows
        )));
    }
    let f = hnf(m)?;
    let mut w = v.to_vec();
    let mut y = vec![0; m.cols];
    let mut next = 0;
    for r in 0..m.rows {
        if next < f.rank() && f.pivot_rows[next] == r {
            let p = f.h.get(r, next);
            if w[r] % p != 0 {
                return Ok(None);
            }
            let q = w[r] / p;
            y[next] = q;
            if q != 0 {
                for (rr, wv) in w.iter_mut().enumerate().skip(r) {
                    *wv = sub(*wv, mul(q, f.h.get(rr, next))?)?;
                }
            }
            next += 1;
        } else if w[r] != 0 {
            return Ok(None);
        }
    }
    Ok(Some(f.u.mul_vec(&y)?))
}

/// Columns form a basis of the integer kernel lattice `{x : m·x = 0}`.
pub fn kernel_basis(m: &IntMatrix) -> Result<IntMatrix> {
    let f = hnf(m)?;
    let cols: Vec<Vec<Int>> = (f.rank()..m.cols).map(|c| f.u.column(c)).collect();
    IntMatrix::from_columns(m.cols, &cols)
}

/// Whether a square matrix is invertible over the integers.
pub fn is_unimodular(m: &IntMatrix) -> Result<bool> {
    if m.rows != m.cols {
        return Ok(false);
    }
    let f = hnf(m)?;
    Ok(f.rank() == m.rows && (0..m.rows).all(|i| f.h.get(i, i) == 1))
}

/// A sublattice of `Z^dim` kept as an echelon basis keyed by pivot row.
///
/// Vectors are inserted one at a time; memory stays `O(dim · rank)`
/// regardless of how many generators are fed in.
#[derive(Clone, Debug, Default)]
pub struct Lattice {
    dim: usize,
    basis: BTreeMap<usize, Vec<Int>>,
}

impl Lattice {
    pub fn new(dim: usize) -> Self {
        Lattice {
            dim,
            basis: BTreeMap::new(),
        }
    }

    pub fn from_columns(m: &IntMatrix) -> Result<Self> {
        let mut l = Lattice::new(m.rows());
        for c in 0..m.cols() {
            l.insert(m.column(c))?;
        }
        Ok(l)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn insert(&mut self, mut v: Vec<Int>) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::Dimension(format!(
                "vector of length {} in lattice of dimension {}",
                v.len(),
                self.dim
            )));
        }
        let mut start = 0;
        loop {
            let Some(r) = (start..self.dim).find(|&i| v[i] != 0) else {
                return Ok(());
            };
            let Some(b) = self.basis.get_mut(&r) else {
                if v[r] < 0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                self.basis.insert(r, v);
                return Ok(());
            };
            let (p, x) = (b[r], v[r]);
            if x % p == 0 {
                let q = x / p;
                for i in r..self.dim {
                    v[i] = sub(v[i], mul(q, b[i])?)?;
                }
            } else {
                let (g, s, t) = ext_gcd(p, x)?;
                let (p1, x1) = (p / g, x / g);
                for i in r..self.dim {
                    let (bi, vi) = (b[i], v[i]);
                    b[i] = add(mul(s, bi)?, mul(t, vi)?)?;
                    v[i] = sub(mul(p1, vi)?, mul(x1, bi)?)?;
                }
            }
            start = r + 1;
        }
    }

    pub fn contains(&self, v: &[Int]) -> Result<bool> {
        if v.len() != self.dim {
            return Err(Error::Dimension(format!(
                "vector of length {} in lattice of dimension {}",
                v.len(),
                self.dim
            )));
        }
        let mut w = v.to_vec();
        for r in 0..self.dim {
            if w[r] == 0 {
                continue;
            }
            let Some(b) = self.basis.get(&r) else {
                return Ok(false);
            };
            if w[r] % b[r] != 0 {
                return Ok(false);
            }
            let q = w[r] / b[r];
            for i in r..self.dim {
                w[i] = sub(w[i], mul(q, b[i])?)?;
            }
        }
        Ok(true)
    }

    /// Basis vectors as the columns of a `dim × rank` matrix.
    pub fn basis_matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<Int>> = self.basis.values().cloned().collect();
        IntMatrix::from_columns(self.dim, &cols).expect("basis vectors have length dim")
    }
}

/// The quotient `Z^dim / L` when it is free: a surjection `Z^dim -> Z^rank`
/// whose kernel is exactly `L`, together with a section.
#[derive(Clone, Debug)]
pub struct FreeQuotient {
    /// `rank × dim`.
    pub projection: IntMatrix,
    /// `dim × rank`, with `projection · lift = I`.
    pub lift: IntMatrix,
}

impl FreeQuotient {
    /// Returns `Ok(None)` when the quotient has torsion.
    pub fn new(lattice: &Lattice) -> Result<Option<Self>> {
        let dim = lattice.dim();
        let basis = lattice.basis_matrix();
        // Left kernel of the basis: rows y with y·B = 0. Its rows come from a
        // unimodular transform, so the projection they define is onto.
        let projection = kernel_basis(&basis.transpose())?.transpose();
        let rank = projection.rows();
        // ker(projection) is the saturation of L; L is saturated iff it
        // contains a basis of it.
        let saturation = kernel_basis(&projection)?;
        for c in 0..saturation.cols() {
            if !lattice.contains(&saturation.column(c))? {
                return Ok(None);
            }
        }
        let mut lift_cols = Vec::with_capacity(rank);
        for t in 0..rank {
            let mut e = vec![0; rank];
            e[t] = 1;
            let x = in_lattice(&projection, &e)?
                .ok_or_else(|| Error::Invalid("projection is not onto".into()))?;
            lift_cols.push(x);
        }
        let lift = IntMatrix::from_columns(dim, &lift_cols)?;
        Ok(Some(FreeQuotient { projection, lift }))
    }

    pub fn rank(&self) -> usize {
        self.projection.rows()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[Int]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn hnf_identity_and_zero() {
        let f = hnf(&IntMatrix::identity(3)).unwrap();
        assert_eq!(f.h, IntMatrix::identity(3));
        assert_eq!(f.u, IntMatrix::identity(3));
        let z = IntMatrix::zero(2, 3);
        let f = hnf(&z).unwrap();
        assert_eq!(f.h, z);
        assert_eq!(f.u, IntMatrix::identity(3));
        assert_eq!(f.rank(), 0);
    }

    #[test]
    fn hnf_of_row_is_gcd() {
        let m = mat(&[&[2, 4]]);
        let f = hnf(&m).unwrap();
        assert_eq!(f.h, mat(&[&[2, 0]]));
        assert_eq!(m.mul(&f.u).unwrap(), f.h);
        let f = hnf(&mat(&[&[6, -10, 15]])).unwrap();
        assert_eq!(f.h, mat(&[&[1, 0, 0]]));
    }

    #[test]
    fn lattice_examples() {
        let m = mat(&[&[2, 0], &[0, 1]]);
        assert_eq!(in_lattice(&m, &[0, 0]).unwrap(), Some(vec![0, 0]));
        assert_eq!(in_lattice(&m, &[1, 0]).unwrap(), None);
        let m = mat(&[&[1], &[1]]);
        assert_eq!(in_lattice(&m, &[3, 3]).unwrap(), Some(vec![3]));
        assert!(matches!(in_lattice(&m, &[1]), Err(Error::Dimension(_))));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&IntMatrix::identity(3)).unwrap().cols(), 0);
        let k = kernel_basis(&mat(&[&[1, 1]])).unwrap();
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        assert!(v == vec![1, -1] || v == vec![-1, 1]);
        assert_eq!(kernel_basis(&IntMatrix::zero(1, 2)).unwrap().cols(), 2);
    }

    #[test]
    fn overflow_is_reported() {
        let m = mat(&[&[Int::MAX, 2]]);
        let big = m.mul(&mat(&[&[2], &[1]]));
        assert_eq!(big, Err(Error::Arithmetic));
    }

    #[test]
    fn incremental_lattice_matches_hnf() {
        let m = mat(&[&[2, 4, 1], &[0, 6, 3], &[1, 1, 0]]);
        let l = Lattice::from_columns(&m).unwrap();
        for v in [[1, 3, 1], [2, 0, 1], [0, 0, 1], [5, 9, 2]] {
            assert_eq!(
                l.contains(&v).unwrap(),
                in_lattice(&m, &v).unwrap().is_some(),
                "{v:?}"
            );
        }
    }

    #[test]
    fn free_quotient_detects_torsion() {
        let mut l = Lattice::new(2);
        l.insert(vec![2, 1]).unwrap();
        let q = FreeQuotient::new(&l).unwrap().expect("Z^2/(2,1) is free");
        assert_eq!(q.rank(), 1);
        assert_eq!(q.projection.mul_vec(&[2, 1]).unwrap(), vec![0]);
        assert_eq!(q.projection.mul(&q.lift).unwrap(), IntMatrix::identity(1));
        let mut t = Lattice::new(1);
        t.insert(vec![2]).unwrap();
        assert!(FreeQuotient::new(&t).unwrap().is_none());
    }
}
