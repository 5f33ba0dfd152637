//! Finite groups acting on F^d (linearly or Frobenius-semilinearly) and on finite sets.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::subspace::Subspace;

/// Default bound on the size of a group closure.
pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

/// The map `v ↦ M · σ^j(v)` where σ is the Frobenius automorphism applied entrywise.
///
/// A linear map is the case `j = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SemilinearElement {
    frobenius_power: u32,
    matrix: Matrix,
}

impl SemilinearElement {
    pub fn new(frobenius_power: u32, matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch("group elements must be square".into()));
        }
        let n = matrix.field().degree();
        Ok(SemilinearElement { frobenius_power: frobenius_power % n, matrix })
    }

    pub fn linear(matrix: Matrix) -> Result<Self> {
        Self::new(0, matrix)
    }

    /// The Frobenius power `σ^j` with identity matrix on F^d.
    pub fn frobenius(field: &Field, d: usize, j: u32) -> Self {
        SemilinearElement { frobenius_power: j % field.degree(), matrix: Matrix::identity(field, d) }
    }

    pub fn identity(field: &Field, d: usize) -> Self {
        Self::frobenius(field, d, 0)
    }

    pub fn frobenius_power(&self) -> u32 {
        self.frobenius_power
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_linear(&self) -> bool {
        self.frobenius_power == 0
    }

    /// `(j₁, M₁) ∘ (j₂, M₂) = (j₁ + j₂, M₁ · σ^{j₁}(M₂))`.
    pub fn compose(&self, other: &SemilinearElement) -> Result<SemilinearElement> {
        let twisted = other.matrix.frobenius(self.frobenius_power);
        let n = self.matrix.field().degree();
        Ok(SemilinearElement {
            frobenius_power: (self.frobenius_power + other.frobenius_power) % n,
            matrix: self.matrix.mul(&twisted)?,
        })
    }

    /// `(j, M)⁻¹ = (-j, σ^{-j}(M⁻¹))`.
    pub fn inverse(&self) -> Result<SemilinearElement> {
        let n = self.matrix.field().degree();
        let back = (n - self.frobenius_power) % n;
        Ok(SemilinearElement { frobenius_power: back, matrix: self.matrix.inverse()?.frobenius(back) })
    }

    pub fn apply_vector(&self, v: &[u32]) -> Result<Vec<u32>> {
        let f = self.matrix.field();
        let twisted: Vec<u32> = v.iter().map(|&a| f.frobenius(a, self.frobenius_power)).collect();
        self.matrix.apply(&twisted)
    }

    pub fn apply_subspace(&self, a: &Subspace) -> Result<Subspace> {
        if a.ambient_dim() != self.dim() || a.field() != self.matrix.field() {
            return Err(Error::AmbientMismatch);
        }
        let twisted = a.basis().frobenius(self.frobenius_power);
        Ok(Subspace::span(&twisted.mul(&self.matrix.transpose())?))
    }

    fn sort_key(&self) -> (u32, &[u32]) {
        (self.frobenius_power, self.matrix.entries())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Linear,
    Semilinear,
}

/// A finite group materialized as its full element list, identity first.
#[derive(Debug, Clone)]
pub struct MatrixGroup {
    field: Field,
    ambient_dim: usize,
    kind: GroupKind,
    elements: Vec<SemilinearElement>,
}

impl MatrixGroup {
    pub fn trivial(field: &Field, d: usize) -> Self {
        MatrixGroup {
            field: field.clone(),
            ambient_dim: d,
            kind: GroupKind::Linear,
            elements: vec![SemilinearElement::identity(field, d)],
        }
    }

    /// Breadth-first closure of `generators` with the default cap.
    pub fn close(field: &Field, d: usize, generators: &[SemilinearElement]) -> Result<Self> {
        Self::close_with_cap(field, d, generators, DEFAULT_CLOSURE_CAP)
    }

    pub fn close_linear(field: &Field, d: usize, generators: &[Matrix]) -> Result<Self> {
        let gens = generators.iter().cloned().map(SemilinearElement::linear).collect::<Result<Vec<_>>>()?;
        Self::close(field, d, &gens)
    }

    /// Elements appear in discovery order: identity, then breadth-first products `e ∘ s`
    /// with generators `s` taken in sorted order.
    pub fn close_with_cap(field: &Field, d: usize, generators: &[SemilinearElement], cap: usize) -> Result<Self> {
        let mut gens: Vec<SemilinearElement> = Vec::with_capacity(generators.len());
        for g in generators {
            if g.dim() != d || g.matrix.field() != field {
                return Err(Error::AmbientMismatch);
            }
            if g.matrix.rank() < d {
                return Err(Error::NotInvertible);
            }
            gens.push(g.clone());
        }
        gens.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        gens.dedup();
        let kind = if gens.iter().all(SemilinearElement::is_linear) { GroupKind::Linear } else { GroupKind::Semilinear };

        let id = SemilinearElement::identity(field, d);
        let mut seen: HashSet<SemilinearElement> = HashSet::from([id.clone()]);
        let mut elements = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(e) = queue.pop_front() {
            for s in &gens {
                let prod = e.compose(s)?;
                if seen.insert(prod.clone()) {
                    if elements.len() >= cap {
                        return Err(Error::ClosureCapExceeded { cap });
                    }
                    elements.push(prod.clone());
                    queue.push_back(prod);
                }
            }
        }
        Ok(MatrixGroup { field: field.clone(), ambient_dim: d, kind, elements })
    }

    /// Wraps an explicit element list, checking that it is a group with identity first.
    pub fn from_elements(field: &Field, d: usize, elements: Vec<SemilinearElement>) -> Result<Self> {
        let id = SemilinearElement::identity(field, d);
        if elements.first() != Some(&id) {
            return Err(Error::InvalidParameter("element list must start with the identity".into()));
        }
        let set: HashSet<&SemilinearElement> = elements.iter().collect();
        if set.len() != elements.len() {
            return Err(Error::InvalidParameter("duplicate group elements".into()));
        }
        for a in &elements {
            if a.dim() != d || a.matrix.field() != field {
                return Err(Error::AmbientMismatch);
            }
            for b in &elements {
                if !set.contains(&a.compose(b)?) {
                    return Err(Error::InvalidParameter("element list is not closed under composition".into()));
                }
            }
        }
        let kind = if elements.iter().all(SemilinearElement::is_linear) { GroupKind::Linear } else { GroupKind::Semilinear };
        Ok(MatrixGroup { field: field.clone(), ambient_dim: d, kind, elements })
    }

    /// Like [`MatrixGroup::from_elements`] but allows repeated elements, for the image of an
    /// abstract group under an action that need not be faithful. `order` then counts the
    /// abstract group.
    pub fn from_elements_paired(field: &Field, d: usize, elements: Vec<SemilinearElement>) -> Result<Self> {
        let id = SemilinearElement::identity(field, d);
        if elements.first() != Some(&id) {
            return Err(Error::InvalidParameter("element list must start with the identity".into()));
        }
        let set: HashSet<&SemilinearElement> = elements.iter().collect();
        for a in &set {
            if a.dim() != d || a.matrix.field() != field {
                return Err(Error::AmbientMismatch);
            }
            for b in &set {
                if !set.contains(&a.compose(b)?) {
                    return Err(Error::InvalidParameter("element list is not closed under composition".into()));
                }
            }
        }
        let kind = if elements.iter().all(SemilinearElement::is_linear) { GroupKind::Linear } else { GroupKind::Semilinear };
        Ok(MatrixGroup { field: field.clone(), ambient_dim: d, kind, elements })
    }

    /// The cyclic group generated by Frobenius acting entrywise on E^d.
    pub fn frobenius_group(field: &Field, d: usize) -> Self {
        let elements = (0..field.degree()).map(|j| SemilinearElement::frobenius(field, d, j)).collect();
        let kind = if field.degree() == 1 { GroupKind::Linear } else { GroupKind::Semilinear };
        MatrixGroup { field: field.clone(), ambient_dim: d, kind, elements }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[SemilinearElement] {
        &self.elements
    }

    /// Linear elements as plain matrices; fails for a semilinear group.
    pub fn matrices(&self) -> Result<Vec<&Matrix>> {
        if self.kind != GroupKind::Linear {
            return Err(Error::InvalidParameter("group is not linear".into()));
        }
        Ok(self.elements.iter().map(|e| &e.matrix).collect())
    }

    /// Deduplicated `{g·A : g ∈ G}` in order of first appearance.
    pub fn orbit_subspace(&self, a: &Subspace) -> Result<Vec<Subspace>> {
        if a.ambient_dim() != self.ambient_dim || a.field() != &self.field {
            return Err(Error::AmbientMismatch);
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for g in &self.elements {
            let image = g.apply_subspace(a)?;
            if seen.insert(image.clone()) {
                out.push(image);
            }
        }
        Ok(out)
    }

    /// Whether `g·W = W` for every element.
    pub fn is_invariant(&self, w: &Subspace) -> Result<bool> {
        if w.ambient_dim() != self.ambient_dim || w.field() != &self.field {
            return Err(Error::AmbientMismatch);
        }
        for g in &self.elements {
            if &g.apply_subspace(w)? != w {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn orbit_subspace(group: &MatrixGroup, a: &Subspace) -> Result<Vec<Subspace>> {
    group.orbit_subspace(a)
}

/// The hypothesis constant of a collection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RValue {
    /// `max dim A_x/(A_x∩A_y)` over ordered pairs.
    pub raw: usize,
    /// `max(raw, 1)`.
    pub r: usize,
    /// A pair attaining the maximum.
    pub pair: (usize, usize),
}

pub fn compute_r(xs: &[Subspace]) -> Result<RValue> {
    if xs.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let mut best = RValue { raw: 0, r: 1, pair: (0, 0) };
    for (i, a) in xs.iter().enumerate() {
        for (j, b) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            let q = a.quotient_dim(b)?;
            if q > best.raw {
                best.raw = q;
                best.pair = (i, j);
            }
        }
    }
    best.r = best.raw.max(1);
    Ok(best)
}

/// A permutation in one-line notation: `perm[i]` is the image of `i`.
pub type Permutation = Vec<usize>;

/// A finite permutation group on `0..degree`, identity first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    elements: Vec<Permutation>,
}

fn check_permutation(p: &[usize], degree: usize) -> Result<()> {
    if p.len() != degree {
        return Err(Error::DimensionMismatch(format!("permutation of length {} on {degree} points", p.len())));
    }
    let mut hit = vec![false; degree];
    for &x in p {
        if x >= degree || std::mem::replace(&mut hit[x], true) {
            return Err(Error::NotInvertible);
        }
    }
    Ok(())
}

/// `(a ∘ b)(x) = a(b(x))`.
pub fn compose_perm(a: &[usize], b: &[usize]) -> Permutation {
    b.iter().map(|&x| a[x]).collect()
}

pub fn invert_perm(a: &[usize]) -> Permutation {
    let mut out = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x] = i;
    }
    out
}

impl PermGroup {
    pub fn close(degree: usize, generators: &[Permutation]) -> Result<Self> {
        Self::close_with_cap(degree, generators, DEFAULT_CLOSURE_CAP)
    }

    pub fn close_with_cap(degree: usize, generators: &[Permutation], cap: usize) -> Result<Self> {
        for g in generators {
            check_permutation(g, degree)?;
        }
        let mut gens = generators.to_vec();
        gens.sort();
        gens.dedup();
        let id: Permutation = (0..degree).collect();
        let mut index: HashMap<Permutation, usize> = HashMap::from([(id.clone(), 0)]);
        let mut elements = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(e) = queue.pop_front() {
            for s in &gens {
                let prod = compose_perm(&e, s);
                if !index.contains_key(&prod) {
                    if elements.len() >= cap {
                        return Err(Error::ClosureCapExceeded { cap });
                    }
                    index.insert(prod.clone(), elements.len());
                    elements.push(prod.clone());
                    queue.push_back(prod);
                }
            }
        }
        Ok(PermGroup { degree, elements })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    /// Image of a subset under `g`, sorted.
    pub fn apply_set(g: &[usize], set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&x| g[x]).collect();
        out.sort_unstable();
        out
    }

    /// Permutation matrix of `g` acting on F^degree by `e_i ↦ e_{g(i)}`.
    pub fn permutation_matrix(field: &Field, g: &[usize]) -> Matrix {
        let n = g.len();
        let mut m = Matrix::zeros(field, n, n);
        for (i, &gi) in g.iter().enumerate() {
            m[(gi, i)] = 1;
        }
        m
    }
}
