//! Dense matrices over a [`FieldSpec`](crate::field::FieldSpec), row-major.
//!
//! Linear maps act on column vectors: a `rows × cols` matrix maps F^cols to F^rows.
//! Subspace bases, by contrast, are stored as rows.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
    field: Field,
}

/// Output of [`Matrix::rref`].
#[derive(Debug, Clone)]
pub struct Rref {
    /// Reduced row echelon form with zero rows removed.
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data && self.field == other.field
    }
}

impl Eq for Matrix {}

impl std::hash::Hash for Matrix {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} over {} [", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = u32;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &u32 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u32 {
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols], field: field.clone() }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from row-major entries, validating the shape and every entry.
    pub fn from_entries(field: &Field, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&a| !field.contains(a)) {
            return Err(Error::ElementOutOfRange { value: bad as u64, order: field.order() });
        }
        Ok(Matrix { rows, cols, data, field: field.clone() })
    }

    /// Builds a matrix from explicit rows of width `cols`.
    pub fn from_rows(field: &Field, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!("row of length {} in width {cols}", r.len())));
        }
        Self::from_entries(field, rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    fn check_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other[(k, j)];
                    if b != 0 {
                        out[(i, j)] = f.add(out[(i, j)], f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self · v` for a column vector `v`.
    pub fn apply(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("vector of length {} for width {}", v.len(), self.cols)));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect())
    }

    fn zip_with(&self, other: &Matrix, op: impl Fn(u32, u32) -> u32) -> Result<Matrix> {
        self.check_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| op(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data, field: self.field.clone() })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        let f = self.field.clone();
        self.zip_with(other, |a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        let f = self.field.clone();
        self.zip_with(other, |a, b| f.sub(a, b))
    }

    pub fn scale(&self, c: u32) -> Matrix {
        self.map(|f, a| f.mul(c, a))
    }

    /// Entrywise Frobenius power `a ↦ a^(p^j)`.
    pub fn frobenius(&self, j: u32) -> Matrix {
        if j % self.field.degree() == 0 {
            return self.clone();
        }
        self.map(|f, a| f.frobenius(a, j))
    }

    fn map(&self, op: impl Fn(&Field, u32) -> u32) -> Matrix {
        let data = self.data.iter().map(|&a| op(&self.field, a)).collect();
        Matrix { rows: self.rows, cols: self.cols, data, field: self.field.clone() }
    }

    /// Reinterprets a matrix over GF(p) as a matrix over an extension with the same
    /// characteristic; prime-field encodings are shared.
    pub fn embed(&self, target: &Field) -> Result<Matrix> {
        if !self.field.is_prime_field() || self.field.characteristic() != target.characteristic() {
            return Err(Error::FieldMismatch);
        }
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.clone(), field: target.clone() })
    }

    /// Reinterprets a matrix whose entries all lie in the prime subfield as a matrix over GF(p).
    pub fn restrict_to_prime_field(&self, prime: &Field) -> Result<Matrix> {
        if !prime.is_prime_field() || prime.characteristic() != self.field.characteristic() {
            return Err(Error::FieldMismatch);
        }
        if let Some(&bad) = self.data.iter().find(|&&a| !self.field.is_prime_subfield_element(a)) {
            return Err(Error::ElementOutOfRange { value: bad as u64, order: prime.order() });
        }
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.clone(), field: prime.clone() })
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!("vstack widths {} and {}", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, data, field: self.field.clone() })
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!("hstack heights {} and {}", self.rows, other.rows)));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(Matrix { rows: self.rows, cols, data, field: self.field.clone() })
    }

    /// Block diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        let mut out = Matrix::zeros(&self.field, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)];
            }
        }
        Ok(out)
    }

    /// Columns `range` of every row.
    pub fn columns(&self, range: std::ops::Range<usize>) -> Matrix {
        let cols = range.len();
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(&self.row(i)[range.clone()]);
        }
        Matrix { rows: self.rows, cols, data, field: self.field.clone() }
    }

    /// The rows at `indices`, in that order.
    pub fn select_rows(&self, indices: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Matrix { rows: indices.len(), cols: self.cols, data, field: self.field.clone() }
    }

    /// Reduced row echelon form by Gauss-Jordan elimination.
    pub fn rref(&self) -> Rref {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(piv) = (rank..m.rows).find(|&i| m[(i, col)] != 0) else {
                continue;
            };
            m.swap_rows(rank, piv);
            let inv = f.inv(m[(rank, col)]).expect("pivot is nonzero");
            if inv != 1 {
                for j in col..m.cols {
                    m[(rank, j)] = f.mul(m[(rank, j)], inv);
                }
            }
            for i in 0..m.rows {
                if i == rank {
                    continue;
                }
                let c = m[(i, col)];
                if c == 0 {
                    continue;
                }
                for j in col..m.cols {
                    let t = m[(rank, j)];
                    if t != 0 {
                        m[(i, j)] = f.sub(m[(i, j)], f.mul(c, t));
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        m.data.truncate(rank * m.cols);
        m.rows = rank;
        Rref { matrix: m, rank, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis (as rows) of the null space `{v : self · v = 0}`.
    pub fn kernel(&self) -> Matrix {
        let f = &self.field;
        let Rref { matrix: r, pivots, .. } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(f, free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out[(k, fc)] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                out[(k, pc)] = f.neg(r[(i, fc)]);
            }
        }
        out
    }

    /// Some solution `x` of `self · x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!("right-hand side of length {} for {} rows", b.len(), self.rows)));
        }
        let rhs = Matrix { rows: self.rows, cols: 1, data: b.to_vec(), field: self.field.clone() };
        let aug = self.hstack(&rhs)?;
        let Rref { matrix: r, pivots, .. } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u32; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(i, self.cols)];
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotInvertible);
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(&self.field, n))?;
        let Rref { matrix: r, rank, pivots } = aug.rref();
        if rank < n || pivots[n - 1] >= n {
            return Err(Error::NotInvertible);
        }
        Ok(r.columns(n..2 * n))
    }

    /// Whether this matrix is in reduced row echelon form without zero rows.
    pub fn is_rref(&self) -> bool {
        let mut last: Option<usize> = None;
        for i in 0..self.rows {
            let Some(pc) = self.row(i).iter().position(|&a| a != 0) else {
                return false;
            };
            if last.is_some_and(|l| pc <= l) || self[(i, pc)] != 1 {
                return false;
            }
            if (0..self.rows).any(|k| k != i && self[(k, pc)] != 0) {
                return false;
            }
            last = Some(pc);
        }
        true
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;
    use rand::{Rng, SeedableRng};

    fn random_matrix(f: &Field, rng: &mut impl Rng, rows: usize, cols: usize) -> Matrix {
        let q = f.order();
        let data = (0..rows * cols).map(|_| rng.gen_range(0..q) as u32).collect();
        Matrix::from_entries(f, rows, cols, data).unwrap()
    }

    #[test]
    fn rref_examples() {
        let f = build_field(2, 1).unwrap();
        let id = Matrix::identity(&f, 3);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 3);
        let z = Matrix::zeros(&f, 2, 2).rref();
        assert_eq!(z.rank, 0);
        assert_eq!(z.matrix.rows(), 0);
        let m = Matrix::from_rows(&f, 2, &[vec![1, 1], vec![1, 1]]).unwrap().rref();
        assert_eq!(m.matrix, Matrix::from_rows(&f, 2, &[vec![1, 1]]).unwrap());
        assert_eq!(m.rank, 1);
        assert_eq!(m.pivots, vec![0]);
    }

    #[test]
    fn kernel_examples() {
        let f = build_field(2, 1).unwrap();
        assert_eq!(Matrix::identity(&f, 3).kernel().rows(), 0);
        assert_eq!(Matrix::zeros(&f, 2, 2).kernel().rows(), 2);
        // enumerate all 4 vectors of GF(2)^2 and keep those killed by [[1,1]]
        let m = Matrix::from_rows(&f, 2, &[vec![1, 1]]).unwrap();
        let killed: Vec<Vec<u32>> = (0..4u32)
            .map(|c| vec![c & 1, c >> 1])
            .filter(|v| m.apply(v).unwrap() == vec![0])
            .filter(|v| v.iter().any(|&a| a != 0))
            .collect();
        assert_eq!(killed, vec![vec![1, 1]]);
        assert_eq!(m.kernel(), Matrix::from_rows(&f, 2, &[vec![1, 1]]).unwrap());
    }

    #[test]
    fn rank_nullity_and_rref_laws() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for (p, n) in [(2, 1), (3, 1), (2, 2), (2, 3), (3, 2), (5, 1)] {
            let f = build_field(p, n).unwrap();
            for _ in 0..200 {
                let rows = rng.gen_range(0..6);
                let cols = rng.gen_range(1..7);
                let m = random_matrix(&f, &mut rng, rows, cols);
                let r = m.rref();
                let k = m.kernel();
                assert_eq!(r.rank + k.rows(), cols);
                assert!(m.mul(&k.transpose()).unwrap().is_zero());
                assert!(r.matrix.is_rref());
                assert_eq!(r.matrix.rref().matrix, r.matrix);
                // row spaces contain each other
                assert_eq!(m.vstack(&r.matrix).unwrap().rank(), r.rank);
            }
        }
    }

    #[test]
    fn solve_and_inverse() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let f = build_field(3, 2).unwrap();
        for _ in 0..100 {
            let m = random_matrix(&f, &mut rng, 4, 4);
            match m.inverse() {
                Ok(inv) => assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(&f, 4)),
                Err(e) => {
                    assert_eq!(e, Error::NotInvertible);
                    assert!(m.rank() < 4);
                }
            }
            let x: Vec<u32> = (0..4).map(|_| rng.gen_range(0..9)).collect();
            let b = m.apply(&x).unwrap();
            let y = m.solve(&b).unwrap().expect("consistent");
            assert_eq!(m.apply(&y).unwrap(), b);
        }
        let z = Matrix::zeros(&f, 2, 2);
        assert_eq!(z.solve(&[1, 0]).unwrap(), None);
    }

    #[test]
    fn shape_errors() {
        let f = build_field(2, 1).unwrap();
        assert!(Matrix::from_entries(&f, 2, 2, vec![0, 1, 1]).is_err());
        assert!(Matrix::from_entries(&f, 1, 2, vec![0, 2]).is_err());
        let a = Matrix::identity(&f, 2);
        let b = Matrix::identity(&f, 3);
        assert!(a.mul(&b).is_err());
        let g = build_field(3, 1).unwrap();
        assert_eq!(a.add(&Matrix::identity(&g, 2)), Err(Error::FieldMismatch));
    }
}
