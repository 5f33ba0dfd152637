//! Approximating an almost-equivariant operator `T: V → V'` by an exactly equivariant one.
//!
//! The graph of `T` is almost invariant under the diagonal action on `V ⊕ V'`, so the
//! [Wagner engine](crate::wagner) yields an invariant `A₀` close to it. From `A₀` we read off
//! `K = {v' : (0, v') ∈ A₀}` and `I = p₁(A₀)`, and `A₀` is the graph of a map `I → V'/K`.
//! Composing with equivariant projectors `p_I: V → I` and `p_C: V' → C` (kernel `K`) gives
//! `T₀ = p_C ∘ T̄₀ ∘ p_I` with `rk(T - T₀) ≤ 2r + r(r+1)^(r+1)`.
//!
//! Maps act on column vectors: `T` is a `d' × d` matrix.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::group::{MatrixGroup, SemilinearElement};
use crate::matrix::Matrix;
use crate::subspace::Subspace;
use crate::wagner::{dim_bound, wagner_approximate, WagnerCertificate};

/// Paired actions of one abstract group on `V` and `V'`, plus the operator.
#[derive(Debug, Clone)]
pub struct OperatorInstance {
    group_v: MatrixGroup,
    group_w: MatrixGroup,
    t: Matrix,
}

impl OperatorInstance {
    /// Element `i` of `group_v` is paired with element `i` of `group_w`.
    pub fn new(group_v: MatrixGroup, group_w: MatrixGroup, t: Matrix) -> Result<Self> {
        if group_v.order() != group_w.order() {
            return Err(Error::InvalidParameter("paired groups have different orders".into()));
        }
        if group_v.field() != group_w.field() || t.field() != group_v.field() {
            return Err(Error::FieldMismatch);
        }
        group_v.matrices()?;
        group_w.matrices()?;
        if t.cols() != group_v.ambient_dim() || t.rows() != group_w.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{} but the spaces have dimensions {} and {}",
                t.rows(),
                t.cols(),
                group_v.ambient_dim(),
                group_w.ambient_dim()
            )));
        }
        let inst = OperatorInstance { group_v, group_w, t };
        // The pairing must be a bijection that respects composition.
        let diag = inst.diagonal_elements()?;
        let index: HashMap<&Matrix, usize> = diag.iter().enumerate().map(|(i, m)| (m, i)).collect();
        if index.len() != diag.len() {
            return Err(Error::InvalidParameter("pairing is not injective".into()));
        }
        for a in &diag {
            for b in &diag {
                if !index.contains_key(&a.mul(b)?) {
                    return Err(Error::InvalidParameter("pairing does not respect composition".into()));
                }
            }
        }
        Ok(inst)
    }

    /// Closes the block-diagonal generators `diag(g, g')` and splits the result into the
    /// paired actions.
    pub fn from_generator_pairs(field: &Field, pairs: &[(Matrix, Matrix)], t: Matrix) -> Result<Self> {
        let d = t.cols();
        let dp = t.rows();
        let mut gens = Vec::with_capacity(pairs.len());
        for (g, gp) in pairs {
            if g.rows() != d || !g.is_square() || gp.rows() != dp || !gp.is_square() {
                return Err(Error::DimensionMismatch("generator pair does not match the operator".into()));
            }
            gens.push(SemilinearElement::linear(g.block_diag(gp)?)?);
        }
        let big = MatrixGroup::close(field, d + dp, &gens)?;
        let mut left = Vec::with_capacity(big.order());
        let mut right = Vec::with_capacity(big.order());
        for e in big.elements() {
            let m = e.matrix();
            left.push(SemilinearElement::linear(m.columns(0..d).select_rows(&(0..d).collect::<Vec<_>>()))?);
            right.push(SemilinearElement::linear(m.columns(d..d + dp).select_rows(&(d..d + dp).collect::<Vec<_>>()))?);
        }
        // The two halves may repeat elements when an action is not faithful, so they are kept
        // as paired lists rather than re-closed.
        let group_v = MatrixGroup::from_elements_paired(field, d, left)?;
        let group_w = MatrixGroup::from_elements_paired(field, dp, right)?;
        Self::new(group_v, group_w, t)
    }

    pub fn group_v(&self) -> &MatrixGroup {
        &self.group_v
    }

    pub fn group_w(&self) -> &MatrixGroup {
        &self.group_w
    }

    pub fn operator(&self) -> &Matrix {
        &self.t
    }

    pub fn order(&self) -> usize {
        self.group_v.order()
    }

    /// `diag(g_V, g_V')` for every paired element.
    pub fn diagonal_elements(&self) -> Result<Vec<Matrix>> {
        self.group_v
            .elements()
            .iter()
            .zip(self.group_w.elements())
            .map(|(a, b)| a.matrix().block_diag(b.matrix()))
            .collect()
    }

    /// The diagonal action on `V ⊕ V'` as a group.
    pub fn diagonal_group(&self) -> Result<MatrixGroup> {
        let els = self.diagonal_elements()?.into_iter().map(SemilinearElement::linear).collect::<Result<Vec<_>>>()?;
        MatrixGroup::from_elements(self.t.field(), self.t.cols() + self.t.rows(), els)
    }

    /// `max_g rk(g' T g⁻¹ - T)`.
    pub fn defect(&self) -> Result<usize> {
        let mut best = 0;
        for (g, gp) in self.group_v.elements().iter().zip(self.group_w.elements()) {
            let conj = gp.matrix().mul(&self.t)?.mul(&g.matrix().inverse()?)?;
            best = best.max(conj.sub(&self.t)?.rank());
        }
        Ok(best)
    }
}

/// Certificate for [`approximate_operator`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorCertificate {
    pub r: usize,
    pub r_raw: usize,
    pub inner: WagnerCertificate,
    /// `K ⊂ V'`.
    pub k: Subspace,
    /// `I ⊂ V`.
    pub i: Subspace,
    pub t0: Matrix,
    /// `rk(T - T₀)`.
    pub rank_defect: usize,
    /// `rk(T̄ - T̄₀)`: the rank of `T - T₀` restricted to `I` and taken modulo `K`.
    pub restricted_defect: usize,
    /// `2r + r(r+1)^(r+1)`.
    pub bound: u64,
}

/// Subspace `{(v, Tv)}` of `V ⊕ V'`, spanned by `[I_d | Tᵀ]`.
pub fn graph(t: &Matrix) -> Result<Subspace> {
    let id = Matrix::identity(t.field(), t.cols());
    Ok(Subspace::span(&id.hstack(&t.transpose())?))
}

/// Coordinate projector onto `U` along the non-pivot coordinates: `Q = Bᵀ S` where `B` is
/// the canonical basis and `S` selects the pivot coordinates.
pub fn coordinate_projector(u: &Subspace) -> Matrix {
    let d = u.ambient_dim();
    let f = u.field();
    let mut q = Matrix::zeros(f, d, d);
    for (i, &pc) in u.pivots().iter().enumerate() {
        for row in 0..d {
            q[(row, pc)] = u.basis()[(i, row)];
        }
    }
    q
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectorMode {
    /// Image `U`.
    Onto,
    /// Kernel `U`, image an invariant complement.
    Killing,
}

/// Equivariant projector built by averaging `g Q g⁻¹` over the group.
pub fn invariant_projector(group: &MatrixGroup, u: &Subspace, mode: ProjectorMode) -> Result<Matrix> {
    let f = group.field();
    let order = group.order();
    if order as u64 % f.characteristic() as u64 == 0 {
        return Err(Error::CharDividesGroupOrder { p: f.characteristic(), order });
    }
    if !group.is_invariant(u)? {
        return Err(Error::NotInvariant);
    }
    let d = u.ambient_dim();
    let q = coordinate_projector(u);
    let mut acc = Matrix::zeros(f, d, d);
    for g in group.matrices()? {
        acc = acc.add(&g.mul(&q)?.mul(&g.inverse()?)?)?;
    }
    let inv_order = f.inv(f.from_int(order as u64)).expect("order is a unit");
    let onto = acc.scale(inv_order);
    match mode {
        ProjectorMode::Onto => Ok(onto),
        ProjectorMode::Killing => Matrix::identity(f, d).sub(&onto),
    }
}

/// Pieces read off an approximating subspace of `V ⊕ V'`.
pub(crate) struct GraphParts {
    pub k: Subspace,
    pub i: Subspace,
    /// For each basis row of `I`, a `v'` with `(v, v') ∈ A₀`.
    pub lifts: Vec<Vec<u32>>,
}

/// Splits `a0 ⊂ F^d ⊕ F^d'` into `K`, `I`, and one lift per basis vector of `I`.
pub(crate) fn graph_parts(a0: &Subspace, d: usize) -> Result<GraphParts> {
    let f = a0.field();
    let total = a0.ambient_dim();
    let dp = total - d;
    let left = a0.basis().columns(0..d);
    let right = a0.basis().columns(d..total);

    let mut p1 = Matrix::zeros(f, d, total);
    for j in 0..d {
        p1[(j, j)] = 1;
    }
    let i = a0.apply_map(&p1)?;

    let mut second = Matrix::zeros(f, dp, total);
    for j in 0..dp {
        second[(j, d + j)] = 1;
    }
    let axis = Subspace::span(&second);
    let k = a0.intersect(&axis)?.apply_map(&second)?;

    // Lifts: solve c·L = v, then v' = c·R.
    let lt = left.transpose();
    let mut lifts = Vec::with_capacity(i.dim());
    for row in 0..i.dim() {
        let c = lt.solve(i.basis().row(row))?.ok_or_else(|| Error::Internal("basis vector of I has no lift".into()))?;
        let cm = Matrix::from_entries(f, 1, c.len(), c)?;
        lifts.push(cm.mul(&right)?.row(0).to_vec());
    }

    // Two lifts of one vector differ by an element of K.
    let ambiguity = lt.kernel();
    if ambiguity.rows() > 0 {
        let diffs = Subspace::span(&ambiguity.mul(&right)?);
        if !diffs.is_subspace_of(&k)? {
            return Err(Error::Internal("lifts are not well defined modulo K".into()));
        }
    }
    Ok(GraphParts { k, i, lifts })
}

/// `T₀ = p_C ∘ L ∘ p_I`, where `L` sends each canonical basis vector of `I` to its lift.
pub(crate) fn assemble(parts: &GraphParts, p_i: &Matrix, p_c: &Matrix, d: usize, dp: usize) -> Result<Matrix> {
    let f = p_i.field();
    let pivots = parts.i.pivots();
    let mut t0 = Matrix::zeros(f, dp, d);
    for col in 0..d {
        let u = p_i.column(col);
        let mut lifted = vec![0u32; dp];
        for (row, &pc) in pivots.iter().enumerate() {
            let a = u[pc];
            if a == 0 {
                continue;
            }
            for (slot, &x) in lifted.iter_mut().zip(&parts.lifts[row]) {
                *slot = f.add(*slot, f.mul(a, x));
            }
        }
        let image = p_c.apply(&lifted)?;
        for (row, &x) in image.iter().enumerate() {
            t0[(row, col)] = x;
        }
    }
    Ok(t0)
}

/// `dim((T-T₀)(I) + K) - dim K`.
pub(crate) fn restricted_defect(diff: &Matrix, i: &Subspace, k: &Subspace) -> Result<usize> {
    let image = i.apply_map(diff)?;
    image.quotient_dim(k)
}

pub fn approximate_operator(inst: &OperatorInstance) -> Result<OperatorCertificate> {
    let f = inst.t.field().clone();
    let p = f.characteristic();
    if inst.order() as u64 % p as u64 == 0 {
        return Err(Error::CharDividesGroupOrder { p, order: inst.order() });
    }
    let d = inst.t.cols();
    let dp = inst.t.rows();
    let r_raw = inst.defect()?;
    let r = r_raw.max(1);

    let diag = inst.diagonal_group()?;
    let orbit = diag.orbit_subspace(&graph(&inst.t)?)?;
    let inner = wagner_approximate(&orbit, Some(r))?;
    let parts = graph_parts(&inner.w, d)?;

    let p_i = invariant_projector(&inst.group_v, &parts.i, ProjectorMode::Onto)?;
    let p_c = invariant_projector(&inst.group_w, &parts.k, ProjectorMode::Killing)?;
    let t0 = assemble(&parts, &p_i, &p_c, d, dp)?;

    let diff = inst.t.sub(&t0)?;
    let rank_defect = diff.rank();
    let restricted = restricted_defect(&diff, &parts.i, &parts.k)?;
    let bound = (2 * r as u64).saturating_add(dim_bound(r));

    let cert = OperatorCertificate {
        r,
        r_raw,
        inner,
        k: parts.k,
        i: parts.i,
        t0,
        rank_defect,
        restricted_defect: restricted,
        bound,
    };
    check_operator_laws(&cert, d, Some(inst))?;
    Ok(cert)
}

/// Bounds shared by the equivariant and Galois operator constructions.
pub(crate) fn check_operator_laws(c: &OperatorCertificate, d: usize, inst: Option<&OperatorInstance>) -> Result<()> {
    let fail = |msg: String| Err(Error::Internal(msg));
    let codim_i = d - c.i.dim();
    if c.k.dim() > c.r {
        return fail(format!("dim K = {} exceeds r = {}", c.k.dim(), c.r));
    }
    if codim_i as u64 > dim_bound(c.r) {
        return fail(format!("codim I = {codim_i} exceeds {}", dim_bound(c.r)));
    }
    if c.restricted_defect > c.r {
        return fail(format!("restricted defect {} exceeds r = {}", c.restricted_defect, c.r));
    }
    if c.rank_defect > c.k.dim() + codim_i + c.restricted_defect {
        return fail("rank decomposition rk(T-T0) <= dim K + codim I + rk(restricted) fails".into());
    }
    if c.rank_defect as u64 > c.bound {
        return fail(format!("rk(T-T0) = {} exceeds {}", c.rank_defect, c.bound));
    }
    if let Some(inst) = inst {
        for (g, gp) in inst.group_v.elements().iter().zip(inst.group_w.elements()) {
            if gp.matrix().mul(&c.t0)? != c.t0.mul(g.matrix())? {
                return fail("T0 is not equivariant".into());
            }
        }
    }
    Ok(())
}
