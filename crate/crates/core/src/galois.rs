//! Descent from E = GF(p^n) to k = GF(p) for almost Frobenius-stable subspaces and operators.
//!
//! The Galois group of E/k is generated by Frobenius, acting entrywise on E^d. Running the
//! Wagner engine on the conjugates `σ^j A` (with E-dimensions) gives a Frobenius-stable
//! E-subspace `W`, and such a subspace is the extension of scalars of its fixed points
//! `W₀ = W^σ ⊂ k^d`.

use crate::error::{Error, Result};
use crate::field::{build_field, Field};
use crate::group::MatrixGroup;
use crate::matrix::Matrix;
use crate::operator::{check_operator_laws, coordinate_projector, graph, graph_parts, assemble, restricted_defect, OperatorCertificate};
use crate::subspace::Subspace;
use crate::wagner::{dim_bound, wagner_approximate, WagnerCertificate};

/// The extension E/k together with the Frobenius group.
#[derive(Debug, Clone)]
pub struct GaloisContext {
    big: Field,
    prime: Field,
}

impl GaloisContext {
    pub fn new(p: u32, n: u32) -> Result<Self> {
        Ok(GaloisContext { big: build_field(p, n)?, prime: build_field(p, 1)? })
    }

    pub fn from_field(big: &Field) -> Result<Self> {
        Ok(GaloisContext { big: big.clone(), prime: build_field(big.characteristic(), 1)? })
    }

    /// E.
    pub fn extension(&self) -> &Field {
        &self.big
    }

    /// k.
    pub fn base(&self) -> &Field {
        &self.prime
    }

    pub fn degree(&self) -> u32 {
        self.big.degree()
    }

    /// `{σ^j : j = 0..n}` acting on E^d.
    pub fn group(&self, d: usize) -> MatrixGroup {
        MatrixGroup::frobenius_group(&self.big, d)
    }

    /// `σ^j A`.
    pub fn conjugate_subspace(&self, a: &Subspace, j: u32) -> Subspace {
        a.frobenius(j)
    }

    /// The distinct conjugates `σ^j A`, `j = 0..n`.
    pub fn conjugates(&self, a: &Subspace) -> Vec<Subspace> {
        let mut out: Vec<Subspace> = Vec::new();
        for j in 0..self.degree() {
            let c = a.frobenius(j);
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }

    /// Basis over k of `{w ∈ W : σw = w}`.
    ///
    /// W is viewed as a k-space with basis `x^i b_j` (`b_j` the canonical E-basis, `i < n`),
    /// Frobenius is written as a k-linear matrix in those coordinates, and the kernel of
    /// `σ - 1` is taken over k.
    pub fn fixed_space(&self, w: &Subspace) -> Result<Matrix> {
        let e = &self.big;
        let k = &self.prime;
        let n = self.degree() as usize;
        let d = w.ambient_dim();
        let m = w.dim();
        for j in 1..self.degree() {
            if &w.frobenius(j) != w {
                return Err(Error::NotStable(j));
            }
        }
        let pivots = w.pivots();
        // σ(b_j) = Σ_l mix[j][l] b_l; for a canonical basis the coefficients sit at the pivots.
        let images: Vec<Vec<u32>> = (0..m).map(|j| w.basis().row(j).iter().map(|&a| e.frobenius(a, 1)).collect()).collect();
        let mix: Vec<Vec<u32>> = images.iter().map(|v| pivots.iter().map(|&pc| v[pc]).collect()).collect();

        // Row (j, i) holds the k-coordinates of σ(x^i b_j) = Σ_l σ(x^i) mix[j][l] b_l.
        let size = n * m;
        let mut frob = Matrix::zeros(k, size, size);
        let mut power = 1u32; // x^i
        let x = e.generator_x();
        for i in 0..n {
            let s = e.frobenius(power, 1);
            for j in 0..m {
                for l in 0..m {
                    let coeff = e.mul(s, mix[j][l]);
                    for (t, digit) in e.digits(coeff).into_iter().enumerate() {
                        frob[(j * n + i, l * n + t)] = digit;
                    }
                }
            }
            power = e.mul(power, x);
        }
        // Fixed vectors c satisfy c·F = c, i.e. (F - 1)ᵀ cᵀ = 0.
        let shifted = frob.sub(&Matrix::identity(k, size))?;
        let kernel = shifted.transpose().kernel();

        let mut fixed = Matrix::zeros(e, kernel.rows(), d);
        for row in 0..kernel.rows() {
            for j in 0..m {
                let coeff = e.from_digits(&kernel.row(row)[j * n..(j + 1) * n]);
                if coeff == 0 {
                    continue;
                }
                for col in 0..d {
                    fixed[(row, col)] = e.add(fixed[(row, col)], e.mul(coeff, w.basis()[(j, col)]));
                }
            }
        }
        let w0 = fixed
            .restrict_to_prime_field(k)
            .map_err(|_| Error::DescentFailed("fixed vector has an entry outside the prime field".into()))?;
        let w0 = w0.rref().matrix;
        if w0.rows() != m {
            return Err(Error::DescentFailed(format!("fixed space has k-dimension {} but dim_E W = {m}", w0.rows())));
        }
        if &Subspace::span(&w0.embed(e)?) != w {
            return Err(Error::DescentFailed("E-span of the fixed space differs from W".into()));
        }
        Ok(w0)
    }

    pub fn descend_subspace(&self, a: &Subspace) -> Result<DescentCertificate> {
        if a.field() != &self.big {
            return Err(Error::FieldMismatch);
        }
        let inner = wagner_approximate(&self.conjugates(a), None)?;
        let w = inner.w.clone();
        let w0 = self.fixed_space(&w)?;
        let bounds = (w.quotient_dim(a)?, a.quotient_dim(&w)?);
        if bounds.0 > inner.r || bounds.1 as u64 > inner.bound_dim {
            return Err(Error::Internal(format!("descent bounds {bounds:?} violated for r = {}", inner.r)));
        }
        Ok(DescentCertificate { r: inner.r, bounds, inner, w, w0 })
    }

    /// `max_j rk_E(σ^j(T) - T)`.
    pub fn operator_defect(&self, t: &Matrix) -> Result<usize> {
        let mut best = 0;
        for j in 1..self.degree() {
            best = best.max(t.frobenius(j).sub(t)?.rank());
        }
        Ok(best)
    }

    pub fn descend_operator(&self, t: &Matrix) -> Result<GaloisOperatorCertificate> {
        if t.field() != &self.big {
            return Err(Error::FieldMismatch);
        }
        let d = t.cols();
        let dp = t.rows();
        let r_raw = self.operator_defect(t)?;
        let r = r_raw.max(1);

        let inner = wagner_approximate(&self.conjugates(&graph(t)?), Some(r))?;
        let w = inner.w.clone();
        let w0 = self.fixed_space(&w)?;

        // Over k the complements are coordinate complements; no averaging is needed.
        let parts = graph_parts(&Subspace::span(&w0), d)?;
        let p_i = coordinate_projector(&parts.i);
        let p_c = Matrix::identity(&self.prime, dp).sub(&coordinate_projector(&parts.k))?;
        let t0 = assemble(&parts, &p_i, &p_c, d, dp)?;

        let t0_e = t0.embed(&self.big)?;
        let diff = t.sub(&t0_e)?;
        let k_e = Subspace::span(&parts.k.basis().embed(&self.big)?);
        let i_e = Subspace::span(&parts.i.basis().embed(&self.big)?);
        let operator = OperatorCertificate {
            r,
            r_raw,
            inner,
            rank_defect: diff.rank(),
            restricted_defect: restricted_defect(&diff, &i_e, &k_e)?,
            k: parts.k,
            i: parts.i,
            t0,
            bound: (2 * r as u64).saturating_add(dim_bound(r)),
        };
        check_operator_laws(&operator, d, None)?;
        Ok(GaloisOperatorCertificate { operator, w, w0 })
    }
}

/// Certificate for [`GaloisContext::descend_subspace`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentCertificate {
    pub r: usize,
    pub inner: WagnerCertificate,
    /// Frobenius-stable E-subspace.
    pub w: Subspace,
    /// Basis over k of its fixed points; its E-span is `w`.
    pub w0: Matrix,
    /// `(dim_E W/(W∩A), dim_E A/(W∩A))`.
    pub bounds: (usize, usize),
}

/// Certificate for [`GaloisContext::descend_operator`]. The operator certificate's `k`, `i`
/// and `t0` live over k; `rank_defect` is measured over E against `(T₀)_E`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisOperatorCertificate {
    pub operator: OperatorCertificate,
    pub w: Subspace,
    pub w0: Matrix,
}

/// Flattens an E-subspace of E^d to the k-subspace of k^(nd) it spans, using the
/// coordinates of the power basis `1, x, ..., x^(n-1)` in each slot.
pub fn restrict_scalars(ctx: &GaloisContext, a: &Subspace) -> Result<Subspace> {
    let e = ctx.extension();
    let n = ctx.degree() as usize;
    let d = a.ambient_dim();
    let x = e.generator_x();
    let mut rows = Matrix::zeros(ctx.base(), n * a.dim(), n * d);
    for j in 0..a.dim() {
        let mut power = 1u32;
        for i in 0..n {
            for col in 0..d {
                let v = e.mul(power, a.basis()[(j, col)]);
                for (t, digit) in e.digits(v).into_iter().enumerate() {
                    rows[(j * n + i, col * n + t)] = digit;
                }
            }
            power = e.mul(power, x);
        }
    }
    Ok(Subspace::span(&rows))
}
