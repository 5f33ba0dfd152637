//! Linear subspaces of F^d in canonical form and their lattice operations.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

/// A subspace of F^d stored as its reduced row echelon basis.
///
/// The basis is canonical, so two subspaces are equal exactly when their basis matrices are.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Matrix,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}: {:?})", self.dim(), self.ambient_dim(), self.basis)
    }
}

impl Ord for Subspace {
    /// Dimension first, then the row-major basis entries.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ambient_dim(), self.dim(), self.basis.entries())
            .cmp(&(other.ambient_dim(), other.dim(), other.basis.entries()))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Subspace {
    /// Row span of `vectors`.
    pub fn span(vectors: &Matrix) -> Subspace {
        Subspace { basis: vectors.rref().matrix }
    }

    pub fn zero(field: &Field, ambient_dim: usize) -> Subspace {
        Subspace { basis: Matrix::zeros(field, 0, ambient_dim) }
    }

    pub fn full(field: &Field, ambient_dim: usize) -> Subspace {
        Subspace { basis: Matrix::identity(field, ambient_dim) }
    }

    /// Accepts a basis that is already canonical; anything else is rejected.
    pub fn from_canonical(basis: Matrix) -> Result<Subspace> {
        if !basis.is_rref() {
            return Err(Error::InvalidParameter("basis is not in reduced row echelon form".into()));
        }
        Ok(Subspace { basis })
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn field(&self) -> &Field {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    /// Column indices of the leading ones.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|i| self.basis.row(i).iter().position(|&a| a != 0).expect("canonical rows are nonzero"))
            .collect()
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() || self.field() != other.field() {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        if other.is_zero() || self.is_full() {
            return Ok(self.clone());
        }
        if self.is_zero() || other.is_full() {
            return Ok(other.clone());
        }
        Ok(Subspace::span(&self.basis.vstack(&other.basis)?))
    }

    /// Intersection via the Zassenhaus block matrix `[[A, A], [B, 0]]`: after row reduction,
    /// rows whose left half vanishes carry a basis of A ∩ B in their right half.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let d = self.ambient_dim();
        if self.is_zero() || other.is_full() {
            return Ok(self.clone());
        }
        if other.is_zero() || self.is_full() {
            return Ok(other.clone());
        }
        let top = self.basis.hstack(&self.basis)?;
        let bottom = other.basis.hstack(&Matrix::zeros(self.field(), other.dim(), d))?;
        let r = top.vstack(&bottom)?.rref();
        let lower: Vec<usize> = r.pivots.iter().enumerate().filter(|(_, &pc)| pc >= d).map(|(i, _)| i).collect();
        let block = r.matrix.select_rows(&lower).columns(d..2 * d);
        Ok(Subspace::span(&block))
    }

    /// `dim A/(A∩B)`, computed as `dim(A+B) - dim B`.
    pub fn quotient_dim(&self, other: &Subspace) -> Result<usize> {
        Ok(self.sum(other)?.dim() - other.dim())
    }

    /// Whether `self ⊆ other`.
    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        Ok(self.quotient_dim(other)? == 0)
    }

    pub fn contains(&self, v: &[u32]) -> Result<bool> {
        if v.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch(format!("vector of length {} in F^{}", v.len(), self.ambient_dim())));
        }
        let row = Matrix::from_entries(self.field(), 1, v.len(), v.to_vec())?;
        Subspace::span(&row).is_subspace_of(self)
    }

    /// Image `M·A` of the subspace under a linear map acting on column vectors.
    pub fn apply_map(&self, m: &Matrix) -> Result<Subspace> {
        if m.cols() != self.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "map of width {} on F^{}",
                m.cols(),
                self.ambient_dim()
            )));
        }
        if m.field() != self.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(Subspace::span(&self.basis.mul(&m.transpose())?))
    }

    /// Entrywise Frobenius image `σ^j A`.
    pub fn frobenius(&self, j: u32) -> Subspace {
        Subspace::span(&self.basis.frobenius(j))
    }
}

/// Canonical span of the given rows.
pub fn span(vectors: &Matrix) -> Subspace {
    Subspace::span(vectors)
}

pub fn sum(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.sum(b)
}

pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.intersect(b)
}

pub fn quotient_dim(a: &Subspace, b: &Subspace) -> Result<usize> {
    a.quotient_dim(b)
}

pub fn apply_map(m: &Matrix, a: &Subspace) -> Result<Subspace> {
    a.apply_map(m)
}
