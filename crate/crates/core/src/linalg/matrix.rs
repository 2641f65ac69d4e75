use std::fmt;

use num_rational::BigRational;

use super::field::Field;
use super::scalar::{Arith, FpArith, QArith, Scalar};
use crate::error::{Error, Result};

/// A dense matrix over ℚ or 𝔽_p, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Entries,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Entries {
    Rational(Vec<BigRational>),
    Prime(Vec<u32>),
}

/// Result of [`Matrix::quotient_basis`]: a surjection `V → V/W` and a section of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    /// `dim × v` matrix whose kernel is exactly `span(W)`.
    pub projection: Matrix,
    /// `v × dim` matrix with `projection · section = id`.
    pub section: Matrix,
    pub dim: usize,
}

trait Kernel: Arith {
    fn wrap(&self, v: Vec<Self::E>) -> Entries;
    fn scalar_in(&self, s: &Scalar) -> Self::E;
}

impl Kernel for QArith {
    fn wrap(&self, v: Vec<BigRational>) -> Entries {
        Entries::Rational(v)
    }
    fn scalar_in(&self, s: &Scalar) -> BigRational {
        match s {
            Scalar::Rational(r) => r.clone(),
            Scalar::Mod { .. } => unreachable!("field checked by caller"),
        }
    }
}

impl Kernel for FpArith {
    fn wrap(&self, v: Vec<u32>) -> Entries {
        Entries::Prime(v)
    }
    fn scalar_in(&self, s: &Scalar) -> u32 {
        match s {
            Scalar::Mod { value, .. } => *value,
            Scalar::Rational(_) => unreachable!("field checked by caller"),
        }
    }
}

macro_rules! dispatch {
    ($m:expr, |$ar:ident, $d:ident| $body:expr) => {
        match (&$m.data, $m.field) {
            (Entries::Rational($d), _) => {
                let $ar = QArith;
                $body
            }
            (Entries::Prime($d), Field::Prime(p)) => {
                let $ar = FpArith(p);
                $body
            }
            _ => unreachable!("entries always match the field tag"),
        }
    };
}

macro_rules! dispatch_mut {
    ($m:expr, |$ar:ident, $d:ident| $body:expr) => {
        match (&mut $m.data, $m.field) {
            (Entries::Rational($d), _) => {
                let $ar = QArith;
                $body
            }
            (Entries::Prime($d), Field::Prime(p)) => {
                let $ar = FpArith(p);
                $body
            }
            _ => unreachable!("entries always match the field tag"),
        }
    };
}

macro_rules! dispatch2 {
    ($a:expr, $b:expr, |$ar:ident, $x:ident, $y:ident| $body:expr) => {{
        $a.field.ensure_same($b.field)?;
        match (&$a.data, &$b.data, $a.field) {
            (Entries::Rational($x), Entries::Rational($y), _) => {
                let $ar = QArith;
                $body
            }
            (Entries::Prime($x), Entries::Prime($y), Field::Prime(p)) => {
                let $ar = FpArith(p);
                $body
            }
            _ => unreachable!("entries always match the field tag"),
        }
    }};
}

fn zeros_of(field: Field, n: usize) -> Entries {
    match field {
        Field::Rational => Entries::Rational(vec![QArith.zero(); n]),
        Field::Prime(_) => Entries::Prime(vec![0; n]),
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: zeros_of(field, rows * cols) }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.add_int(i, i, 1);
        }
        m
    }

    /// Build from integer rows; `rows` must be rectangular.
    pub fn from_int_rows(field: Field, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged integer rows");
            for (j, v) in row.iter().enumerate() {
                if *v != 0 {
                    m.add_int(i, j, *v);
                }
            }
        }
        m
    }

    /// Build from scalars; every entry must belong to `field`.
    pub fn from_scalar_rows(field: Field, rows: usize, cols: usize, entries: &[Scalar]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let mut m = Self::zeros(field, rows, cols);
        for (k, s) in entries.iter().enumerate() {
            field.ensure_same(s.field())?;
            m.add_scalar(k / cols.max(1), k % cols.max(1), s);
        }
        Ok(m)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows && j < self.cols, "index out of range");
        dispatch!(self, |ar, d| ar.to_scalar(&d[i * self.cols + j]))
    }

    pub fn entry_is_zero(&self, i: usize, j: usize) -> bool {
        dispatch!(self, |ar, d| ar.is_zero(&d[i * self.cols + j]))
    }

    /// Add the integer `v` to entry `(i, j)`.
    pub fn add_int(&mut self, i: usize, j: usize, v: i64) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        let k = i * self.cols + j;
        dispatch_mut!(self, |ar, d| {
            let x = ar.from_i64(v);
            d[k] = ar.add(&d[k], &x);
        })
    }

    /// Add `s` to entry `(i, j)`; `s` must belong to this matrix's field.
    pub fn add_scalar(&mut self, i: usize, j: usize, s: &Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        assert_eq!(s.field(), self.field, "scalar from a foreign field");
        let k = i * self.cols + j;
        dispatch_mut!(self, |ar, d| {
            let x = ar.scalar_in(s);
            d[k] = ar.add(&d[k], &x);
        })
    }

    pub fn set(&mut self, i: usize, j: usize, s: &Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        assert_eq!(s.field(), self.field, "scalar from a foreign field");
        let k = i * self.cols + j;
        dispatch_mut!(self, |ar, d| d[k] = ar.scalar_in(s))
    }

    /// Nonzero entries of column `j` as `(row, value)` pairs.
    pub fn col_nonzeros(&self, j: usize) -> Vec<(usize, Scalar)> {
        dispatch!(self, |ar, d| (0..self.rows)
            .filter(|&i| !ar.is_zero(&d[i * self.cols + j]))
            .map(|i| (i, ar.to_scalar(&d[i * self.cols + j])))
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        dispatch!(self, |ar, d| d.iter().all(|x| ar.is_zero(x)))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Matrix::identity(self.field, self.rows)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (r, k, c) = (self.rows, self.cols, other.cols);
        let data = dispatch2!(self, other, |ar, x, y| {
            let mut out = vec![ar.zero(); r * c];
            for i in 0..r {
                for t in 0..k {
                    let a = &x[i * k + t];
                    if ar.is_zero(a) {
                        continue;
                    }
                    for j in 0..c {
                        let b = &y[t * c + j];
                        if !ar.is_zero(b) {
                            let prod = ar.mul(a, b);
                            out[i * c + j] = ar.add(&out[i * c + j], &prod);
                        }
                    }
                }
            }
            ar.wrap(out)
        });
        Ok(Matrix { field: self.field, rows: r, cols: c, data })
    }

    fn zip(&self, other: &Matrix, subtract: bool) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "shapes {:?} and {:?} differ",
                self.shape(),
                other.shape()
            )));
        }
        let data = dispatch2!(self, other, |ar, x, y| {
            let out: Vec<_> = x
                .iter()
                .zip(y.iter())
                .map(|(a, b)| if subtract { ar.sub(a, b) } else { ar.add(a, b) })
                .collect();
            ar.wrap(out)
        });
        Ok(Matrix { field: self.field, rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip(other, false)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip(other, true)
    }

    pub fn neg(&self) -> Matrix {
        let data = dispatch!(self, |ar, d| ar.wrap(d.iter().map(|x| ar.neg(x)).collect()));
        Matrix { data, ..*self.shell() }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        assert_eq!(s.field(), self.field, "scalar from a foreign field");
        let data = dispatch!(self, |ar, d| {
            let c = ar.scalar_in(s);
            ar.wrap(d.iter().map(|x| ar.mul(x, &c)).collect())
        });
        Matrix { data, ..*self.shell() }
    }

    fn shell(&self) -> Box<Matrix> {
        Box::new(Matrix { field: self.field, rows: self.rows, cols: self.cols, data: zeros_of(self.field, 0) })
    }

    pub fn transpose(&self) -> Matrix {
        let (r, c) = self.shape();
        let data = dispatch!(self, |ar, d| {
            let mut out = Vec::with_capacity(r * c);
            for j in 0..c {
                for i in 0..r {
                    out.push(d[i * c + j].clone());
                }
            }
            ar.wrap(out)
        });
        Matrix { field: self.field, rows: c, cols: r, data }
    }

    /// Copy `block` into this matrix with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert_eq!(block.field, self.field, "block from a foreign field");
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        let cols = self.cols;
        match (&mut self.data, &block.data) {
            (Entries::Rational(d), Entries::Rational(b)) => {
                for i in 0..block.rows {
                    for j in 0..block.cols {
                        d[(r0 + i) * cols + c0 + j] = b[i * block.cols + j].clone();
                    }
                }
            }
            (Entries::Prime(d), Entries::Prime(b)) => {
                for i in 0..block.rows {
                    for j in 0..block.cols {
                        d[(r0 + i) * cols + c0 + j] = b[i * block.cols + j];
                    }
                }
            }
            _ => unreachable!(),
        }
    }

    /// Horizontal concatenation; all parts need the same row count.
    pub fn hstack(field: Field, rows: usize, parts: &[&Matrix]) -> Result<Matrix> {
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut c0 = 0;
        for m in parts {
            field.ensure_same(m.field)?;
            if m.rows != rows {
                return Err(Error::DimensionMismatch("hstack row counts differ".into()));
            }
            out.set_block(0, c0, m);
            c0 += m.cols;
        }
        Ok(out)
    }

    /// Vertical concatenation; all parts need the same column count.
    pub fn vstack(field: Field, cols: usize, parts: &[&Matrix]) -> Result<Matrix> {
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut r0 = 0;
        for m in parts {
            field.ensure_same(m.field)?;
            if m.cols != cols {
                return Err(Error::DimensionMismatch("vstack column counts differ".into()));
            }
            out.set_block(r0, 0, m);
            r0 += m.rows;
        }
        Ok(out)
    }

    pub fn block_diag(field: Field, parts: &[&Matrix]) -> Result<Matrix> {
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for m in parts {
            field.ensure_same(m.field)?;
            out.set_block(r0, c0, m);
            r0 += m.rows;
            c0 += m.cols;
        }
        Ok(out)
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, cols.len());
        for (jj, &j) in cols.iter().enumerate() {
            for i in 0..self.rows {
                if !self.entry_is_zero(i, j) {
                    out.set(i, jj, &self.get(i, j));
                }
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        self.transpose().select_cols(rows).transpose()
    }

    pub fn column(&self, j: usize) -> Matrix {
        self.select_cols(&[j])
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let (rows, cols) = self.shape();
        let pivots = dispatch_mut!(m, |ar, d| rref_in_place(&ar, d, rows, cols));
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rank computed by eliminating the transpose; used as an independent self-check.
    pub fn rank_by_columns(&self) -> usize {
        self.transpose().rank()
    }

    /// Columns span the kernel; the column count is `cols - rank`.
    pub fn kernel_basis(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let n = self.cols;
        let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
        let mut out = Matrix::zeros(self.field, n, free.len());
        for (k, &f) in free.iter().enumerate() {
            out.add_int(f, k, 1);
            for (row, &p) in pivots.iter().enumerate() {
                if !r.entry_is_zero(row, f) {
                    out.set(p, k, &r.get(row, f).neg());
                }
            }
        }
        out
    }

    /// Columns form a basis of the column space (a subset of the original columns).
    pub fn image_basis(&self) -> Matrix {
        let (_, pivots) = self.rref();
        self.select_cols(&pivots)
    }

    /// Some `x` with `self · x = b`, or `None` when no solution exists.
    pub fn solve(&self, b: &Matrix) -> Result<Option<Matrix>> {
        if b.rows != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has {} rows, matrix has {}",
                b.rows, self.rows
            )));
        }
        let aug = Matrix::hstack(self.field, self.rows, &[self, b])?;
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                if !r.entry_is_zero(row, self.cols + j) {
                    x.set(p, j, &r.get(row, self.cols + j));
                }
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let id = Matrix::identity(self.field, self.rows);
        match self.solve(&id) {
            Ok(Some(x)) if self.rank() == self.rows => Some(x),
            _ => None,
        }
    }

    /// Quotient of `V = k^v_dim` by the span of the columns of `w`.
    pub fn quotient_basis(field: Field, v_dim: usize, w: &Matrix) -> Result<Quotient> {
        field.ensure_same(w.field)?;
        if w.rows != v_dim {
            return Err(Error::DimensionMismatch(format!(
                "subspace vectors have length {}, ambient dimension is {v_dim}",
                w.rows
            )));
        }
        let (basis, pivots) = w.transpose().rref();
        let free: Vec<usize> = (0..v_dim).filter(|j| !pivots.contains(j)).collect();
        let dim = free.len();
        let mut projection = Matrix::zeros(field, dim, v_dim);
        let mut section = Matrix::zeros(field, v_dim, dim);
        for (jj, &j) in free.iter().enumerate() {
            projection.add_int(jj, j, 1);
            section.add_int(j, jj, 1);
            for (row, &p) in pivots.iter().enumerate() {
                if !basis.entry_is_zero(row, j) {
                    projection.set(jj, p, &basis.get(row, j).neg());
                }
            }
        }
        Ok(Quotient { projection, section, dim })
    }

    /// Whether the map is injective (full column rank).
    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows
    }
}

fn rref_in_place<A: Arith>(ar: &A, d: &mut [A::E], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !ar.is_zero(&d[i * cols + c])) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                d.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = ar.inv(&d[r * cols + c]);
        for j in c..cols {
            d[r * cols + j] = ar.mul(&d[r * cols + j], &inv);
        }
        let pivot_row: Vec<A::E> = d[r * cols..(r + 1) * cols].to_vec();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = d[i * cols + c].clone();
            if ar.is_zero(&factor) {
                continue;
            }
            for j in c..cols {
                if !ar.is_zero(&pivot_row[j]) {
                    let t = ar.mul(&factor, &pivot_row[j]);
                    d[i * cols + j] = ar.sub(&d[i * cols + j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>{}x{} [", self.field, self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_int_rows(Field::Rational, rows)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(Field::Rational, 3).rank(), 3);
        assert_eq!(Matrix::zeros(Field::Prime(2), 2, 5).rank(), 0);
        assert_eq!(q(&[vec![1, 2], vec![2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(Field::Rational, 4).kernel_basis().cols(), 0);
        let z = Matrix::zeros(Field::Rational, 2, 3);
        let k = z.kernel_basis();
        assert_eq!(k.cols(), 3);
        assert_eq!(k.rank(), 3);
        let m = Matrix::from_int_rows(Field::Prime(2), &[vec![1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k, Matrix::from_int_rows(Field::Prime(2), &[vec![1], vec![1]]));
    }

    #[test]
    fn quotient_examples() {
        let w = q(&[vec![1], vec![1]]);
        let qt = Matrix::quotient_basis(Field::Rational, 2, &w).unwrap();
        assert_eq!(qt.dim, 1);
        assert!(qt.projection.mul(&w).unwrap().is_zero());
        assert!(qt.projection.mul(&qt.section).unwrap().is_identity());

        let zero = Matrix::zeros(Field::Rational, 3, 0);
        let qt = Matrix::quotient_basis(Field::Rational, 3, &zero).unwrap();
        assert!(qt.projection.is_identity());
        assert!(Matrix::quotient_basis(Field::Rational, 2, &zero).is_err());
    }

    #[test]
    fn solve_identity() {
        let b = q(&[vec![3], vec![-1]]);
        let x = Matrix::identity(Field::Rational, 2).solve(&b).unwrap().unwrap();
        assert_eq!(x, b);
        let singular = q(&[vec![1, 1], vec![1, 1]]);
        assert!(singular.solve(&q(&[vec![1], vec![0]])).unwrap().is_none());
    }

    #[test]
    fn field_mismatch_is_an_error() {
        let a = Matrix::identity(Field::Rational, 2);
        let b = Matrix::identity(Field::Prime(3), 2);
        assert!(matches!(a.mul(&b), Err(Error::FieldMismatch { .. })));
        let mixed = [Scalar::one(Field::Rational), Scalar::one(Field::Prime(2))];
        assert!(Matrix::from_scalar_rows(Field::Rational, 1, 2, &mixed).is_err());
    }

    #[test]
    fn inverse_over_f3() {
        let m = Matrix::from_int_rows(Field::Prime(3), &[vec![1, 2], vec![0, 2]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        assert!(Matrix::from_int_rows(Field::Prime(2), &[vec![1, 1], vec![1, 1]]).inverse().is_none());
    }
}
