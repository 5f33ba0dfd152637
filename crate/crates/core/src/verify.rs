//! Independent re-checking of certificates against their instances.
//!
//! Everything is recomputed from the instance with field, matrix, subspace and group
//! primitives only: the `h` table by brute force over all subsets, `W` from the recomputed
//! witnesses, projectors and `T₀` from scratch. Every certificate field must match exactly,
//! and every bound the construction promises is checked.

use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::error::Error;
use crate::field::{build_field, Field};
use crate::group::{MatrixGroup, PermGroup, SemilinearElement};
use crate::io::{
    self, field_from_json, matrix_from_rows, parse_certificate_envelope, parse_instance, subspace_from_rows,
    wagner_collection, GaloisOperatorCertJson, GaloisSubspaceCertJson, Instance, OperatorCertJson, OperatorInput,
    Rows, SetMajorityCertJson, SetMajorityInput, WagnerCertJson,
};
use crate::matrix::Matrix;
use crate::subspace::Subspace;

/// Why verification did not succeed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyError {
    /// The instance itself could not be read.
    Instance(Error),
    /// A named assertion failed.
    Failed(String),
}

impl VerifyError {
    pub fn exit_code(&self) -> i32 {
        match self {
            VerifyError::Instance(e) => e.exit_code(),
            VerifyError::Failed(_) => 1,
        }
    }
}

impl std::fmt::Display for VerifyError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerifyError::Instance(e) => write!(f, "instance: {e}"),
            VerifyError::Failed(what) => write!(f, "verification failed: {what}"),
        }
    }
}

impl std::error::Error for VerifyError {}

type Check<T = ()> = std::result::Result<T, VerifyError>;

fn fail<T>(what: impl Into<String>) -> Check<T> {
    Err(VerifyError::Failed(what.into()))
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        fail(what())
    }
}

fn same<T: PartialEq + std::fmt::Debug>(claimed: &T, actual: &T, name: &str) -> Check {
    ensure(claimed == actual, || format!("{name}: certificate has {claimed:?}, recomputed {actual:?}"))
}

/// Errors from primitives while recomputing are failures of the certificate, not crashes.
fn prim<T>(r: crate::error::Result<T>, name: &str) -> Check<T> {
    r.map_err(|e| VerifyError::Failed(format!("{name}: {e}")))
}

fn instance_err(e: Error) -> VerifyError {
    VerifyError::Instance(e)
}

fn body<T: DeserializeOwned>(v: Value) -> Check<T> {
    serde_json::from_value(v).map_err(|e| VerifyError::Failed(format!("certificate schema: {e}")))
}

fn canonical(f: &Field, rows: &Rows, d: usize, name: &str) -> Check<Subspace> {
    let m = prim(matrix_from_rows(f, rows, None, d, name), name)?;
    prim(Subspace::from_canonical(m), name)
}

/// `r(r+1)^(r+1)`, saturating.
fn theorem_bound(r: usize) -> u64 {
    let base = r as u64 + 1;
    let mut pow = 1u64;
    for _ in 0..=r {
        pow = pow.saturating_mul(base);
    }
    (r as u64).saturating_mul(pow)
}

fn pow_sat(base: u64, e: usize) -> u64 {
    (0..e).fold(1u64, |acc, _| acc.saturating_mul(base))
}

const MAX_COLLECTION: usize = 16;

/// Checks a subspace certificate for the collection `raw` and returns its `W`.
fn check_wagner(c: &WagnerCertJson, f: &Field, d: usize, raw: &[Subspace], given_r: Option<usize>) -> Check<Subspace> {
    let mut xs = raw.to_vec();
    xs.sort();
    xs.dedup();
    let n = xs.len();
    ensure(n > 0 && n <= MAX_COLLECTION, || format!("collection size {n} outside 1..={MAX_COLLECTION}"))?;
    let claimed: Vec<Subspace> =
        c.collection.iter().map(|rows| canonical(f, rows, d, "collection")).collect::<Check<_>>()?;
    same(&claimed, &xs, "collection")?;

    let mut r_raw = 0;
    for a in &xs {
        for b in &xs {
            r_raw = r_raw.max(prim(a.quotient_dim(b), "r")?);
        }
    }
    let r = match given_r {
        Some(r) => {
            ensure(r_raw <= r, || format!("hypothesis: observed {r_raw} exceeds r = {r}"))?;
            r
        }
        None => r_raw.max(1),
    };
    same(&c.r_raw, &r_raw, "r_raw")?;
    same(&c.r, &r, "r")?;

    // A_S and its level for every nonempty subset, by bitmask.
    let full = 1usize << n;
    let mut inter: Vec<Option<Subspace>> = vec![None; full];
    let mut level = vec![usize::MAX; full];
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let a_s = match &inter[rest] {
            Some(prev) => prim(prev.intersect(&xs[low]), "intersection")?,
            None => xs[low].clone(),
        };
        let mut lv = 0;
        for x in &xs {
            lv = lv.max(prim(a_s.quotient_dim(x), "level")?);
        }
        level[mask] = lv;
        inter[mask] = Some(a_s);
    }
    let h: Vec<usize> = (0..=r)
        .map(|m| (1..full).filter(|&s| level[s] <= m).map(|s| s.count_ones() as usize).min().unwrap_or(usize::MAX))
        .collect();
    same(&c.h_table, &h, "h_table")?;
    ensure(h.windows(2).all(|w| w[0] >= w[1]), || "h_table is not non-increasing".into())?;
    ensure(h[r] == 1, || format!("h(r) = {} instead of 1", h[r]))?;

    let chosen = (1..=r).rev().find(|&m| h[m - 1] > (r + 1) * h[m] + 1);
    same(&c.chosen_m, &chosen, "chosen_m")?;
    same(&c.case, &(if chosen.is_some() { 1u8 } else { 2u8 }), "case")?;
    let m = chosen.unwrap_or(0);
    let mut witnesses: Vec<Vec<usize>> = (1..full)
        .filter(|&s| level[s] <= m && s.count_ones() as usize == h[m])
        .map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect())
        .collect();
    witnesses.sort();
    same(&c.witness_subsets, &witnesses, "witness_subsets")?;

    let w = match chosen {
        Some(m) => {
            ensure(h[m] as u64 <= pow_sat(r as u64 + 1, r), || format!("h({m}) = {} exceeds (r+1)^r", h[m]))?;
            let mut w = Subspace::zero(f, d);
            for s in &witnesses {
                let mask = s.iter().fold(0usize, |acc, i| acc | 1 << i);
                w = prim(w.sum(inter[mask].as_ref().expect("computed")), "W")?;
            }
            w
        }
        None => {
            ensure(h[0] as u64 <= pow_sat(r as u64 + 1, r + 1), || format!("h(0) = {} exceeds (r+1)^(r+1)", h[0]))?;
            inter[full - 1].clone().expect("computed")
        }
    };
    same(&canonical(f, &c.w, d, "W")?, &w, "W")?;
    same(&c.dim_w, &w.dim(), "dim_w")?;

    let bounds: Vec<[usize; 2]> = xs
        .iter()
        .map(|x| Ok([prim(w.quotient_dim(x), "bound")?, prim(x.quotient_dim(&w), "bound")?]))
        .collect::<Check<_>>()?;
    same(&c.per_x_bounds, &bounds, "per_x_bounds")?;
    same(&c.bound_codim, &(r as u64), "bound_codim")?;
    same(&c.bound_dim, &theorem_bound(r), "bound_dim")?;
    for (i, [a, b]) in bounds.iter().enumerate() {
        ensure(*a <= r, || format!("bound: dim W/(W∩A_{i}) = {a} exceeds r = {r}"))?;
        ensure(*b as u64 <= theorem_bound(r), || format!("bound: dim A_{i}/(W∩A_{i}) = {b} exceeds r(r+1)^(r+1)"))?;
    }
    Ok(w)
}

fn verify_wagner(cert: Value, input: &io::WagnerInput) -> Check {
    let c: WagnerCertJson = body(cert)?;
    let (f, group, xs) = wagner_collection(input).map_err(instance_err)?;
    if let Some(g) = &group {
        let claimed = canonical(&f, &c.w, input.ambient_dim, "W")?;
        ensure(prim(g.is_invariant(&claimed), "invariance")?, || "invariance: W is not invariant under the group".into())?;
    }
    let w = check_wagner(&c, &f, input.ambient_dim, &xs, input.r)?;
    match group {
        Some(g) => {
            same(&c.group_order, &Some(g.order()), "group_order")?;
            same(&c.invariant, &Some(true), "invariant")?;
            ensure(prim(g.is_invariant(&w), "invariance")?, || "invariance: W is not invariant under the group".into())
        }
        None => {
            same(&c.group_order, &None, "group_order")?;
            same(&c.invariant, &None, "invariant")
        }
    }
}

/// `{(v, Tv)}` as the row space of `[I | Tᵀ]`.
fn graph_of(t: &Matrix) -> Check<Subspace> {
    let id = Matrix::identity(t.field(), t.cols());
    Ok(Subspace::span(&prim(id.hstack(&t.transpose()), "graph")?))
}

/// `(K, I, lifts)` for `A ⊂ F^d ⊕ F^d'`: `K = {v' : (0, v') ∈ A}`, `I` the projection to
/// `F^d`, and for each canonical basis row of `I` one `v'` with `(v, v') ∈ A`.
fn split_graph(a: &Subspace, d: usize) -> Check<(Subspace, Subspace, Vec<Vec<u32>>)> {
    let f = a.field();
    let total = a.ambient_dim();
    let left = a.basis().columns(0..d);
    let right = a.basis().columns(d..total);
    let i = Subspace::span(&left);
    let kernel = left.transpose().kernel();
    let k = Subspace::span(&prim(kernel.mul(&right), "K")?);
    let lt = left.transpose();
    let mut lifts = Vec::new();
    for row in 0..i.dim() {
        let Some(c) = prim(lt.solve(i.basis().row(row)), "lift")? else {
            return fail("lift: basis vector of I has no preimage");
        };
        let cm = prim(Matrix::from_entries(f, 1, c.len(), c), "lift")?;
        lifts.push(prim(cm.mul(&right), "lift")?.row(0).to_vec());
    }
    Ok((k, i, lifts))
}

/// Projection onto `U` killing the non-pivot coordinates.
fn pivot_projector(u: &Subspace) -> Matrix {
    let d = u.ambient_dim();
    let mut q = Matrix::zeros(u.field(), d, d);
    for (row, &pc) in u.pivots().iter().enumerate() {
        for i in 0..d {
            q[(i, pc)] = u.basis()[(row, i)];
        }
    }
    q
}

fn average(mats: &[(Matrix, Matrix)], q: &Matrix) -> Check<Matrix> {
    let f = q.field();
    let mut acc = Matrix::zeros(f, q.rows(), q.cols());
    for (g, gi) in mats {
        acc = prim(acc.add(&prim(prim(g.mul(q), "projector")?.mul(gi), "projector")?), "projector")?;
    }
    let order = f.from_int(mats.len() as u64);
    let Some(inv) = f.inv(order) else {
        return fail("projector: group order is not invertible");
    };
    Ok(acc.scale(inv))
}

fn t0_from(lifts: &[Vec<u32>], i: &Subspace, p_i: &Matrix, p_c: &Matrix, d: usize, dp: usize) -> Check<Matrix> {
    let f = p_i.field();
    let pivots = i.pivots();
    let mut t0 = Matrix::zeros(f, dp, d);
    for col in 0..d {
        let u = p_i.column(col);
        let mut v = vec![0u32; dp];
        for (row, &pc) in pivots.iter().enumerate() {
            for (slot, &x) in v.iter_mut().zip(&lifts[row]) {
                *slot = f.add(*slot, f.mul(u[pc], x));
            }
        }
        for (row, x) in prim(p_c.apply(&v), "T0")?.into_iter().enumerate() {
            t0[(row, col)] = x;
        }
    }
    Ok(t0)
}

/// Shared checks on `K`, `I`, `T₀` and the rank bounds. `diff` is `T - T₀` over the
/// operator's field, with `k_big` and `i_big` the matching subspaces.
#[allow(clippy::too_many_arguments)]
fn check_operator_numbers(
    c: &OperatorCertJson,
    r: usize,
    d: usize,
    k: &Subspace,
    i: &Subspace,
    diff: &Matrix,
    k_big: &Subspace,
    i_big: &Subspace,
) -> Check {
    let f = k.field();
    same(&canonical(f, &c.k, k.ambient_dim(), "K")?, k, "K")?;
    same(&canonical(f, &c.i, d, "I")?, i, "I")?;
    same(&c.dim_k, &k.dim(), "dim_k")?;
    same(&c.codim_i, &(d - i.dim()), "codim_i")?;
    let rank = diff.rank();
    let restricted = prim(prim(i_big.apply_map(diff), "restricted_defect")?.quotient_dim(k_big), "restricted_defect")?;
    same(&c.rank_defect, &rank, "rank_defect")?;
    same(&c.restricted_defect, &restricted, "restricted_defect")?;
    let bound = (2 * r as u64).saturating_add(theorem_bound(r));
    same(&c.bound, &bound, "bound")?;
    ensure(k.dim() <= r, || format!("bound: dim K = {} exceeds r = {r}", k.dim()))?;
    ensure((d - i.dim()) as u64 <= theorem_bound(r), || "bound: codim I exceeds r(r+1)^(r+1)".into())?;
    ensure(restricted <= r, || format!("bound: restricted defect {restricted} exceeds r = {r}"))?;
    ensure(rank <= k.dim() + (d - i.dim()) + restricted, || "bound: rank decomposition fails".into())?;
    ensure(rank as u64 <= bound, || format!("bound: rk(T-T0) = {rank} exceeds {bound}"))
}

fn verify_operator(cert: Value, input: &OperatorInput) -> Check {
    let c: OperatorCertJson = body(cert)?;
    let f = field_from_json(&input.field).map_err(instance_err)?;
    let (d, dp) = (input.d, input.d_prime);
    let t = matrix_from_rows(&f, &input.t, Some(dp), d, "t").map_err(instance_err)?;
    let mut gens = Vec::new();
    for g in &input.generators {
        let a = matrix_from_rows(&f, &g.v, Some(d), d, "v").map_err(instance_err)?;
        let b = matrix_from_rows(&f, &g.v_prime, Some(dp), dp, "v_prime").map_err(instance_err)?;
        gens.push(prim(SemilinearElement::linear(prim(a.block_diag(&b), "group")?), "group")?);
    }
    let diag = MatrixGroup::close(&f, d + dp, &gens).map_err(instance_err)?;
    let order = diag.order();
    ensure(order as u64 % f.characteristic() as u64 != 0, || "hypothesis: characteristic divides |G|".into())?;
    let halves: Vec<(Matrix, Matrix)> = diag
        .elements()
        .iter()
        .map(|e| {
            let m = e.matrix();
            let top: Vec<usize> = (0..d).collect();
            let bottom: Vec<usize> = (d..d + dp).collect();
            (m.columns(0..d).select_rows(&top), m.columns(d..d + dp).select_rows(&bottom))
        })
        .collect();

    let mut r_raw = 0;
    for (g, gp) in &halves {
        let gi = prim(g.inverse(), "group")?;
        let conj = prim(prim(gp.mul(&t), "r")?.mul(&gi), "r")?;
        r_raw = r_raw.max(prim(conj.sub(&t), "r")?.rank());
    }
    let r = r_raw.max(1);
    same(&c.r_raw, &r_raw, "r_raw")?;
    same(&c.r, &r, "r")?;

    let gt = graph_of(&t)?;
    let orbit: Vec<Subspace> =
        diag.elements().iter().map(|e| prim(e.apply_subspace(&gt), "orbit")).collect::<Check<_>>()?;
    let w = check_wagner(&c.graph, &f, d + dp, &orbit, Some(r))?;
    ensure(prim(diag.is_invariant(&w), "invariance")?, || "invariance: graph approximation is not invariant".into())?;
    same(&c.graph.group_order, &None, "graph.group_order")?;
    same(&c.graph.invariant, &None, "graph.invariant")?;

    let (k, i, lifts) = split_graph(&w, d)?;
    let inv_v: Vec<(Matrix, Matrix)> =
        halves.iter().map(|(g, _)| Ok((g.clone(), prim(g.inverse(), "group")?))).collect::<Check<_>>()?;
    let inv_w: Vec<(Matrix, Matrix)> =
        halves.iter().map(|(_, g)| Ok((g.clone(), prim(g.inverse(), "group")?))).collect::<Check<_>>()?;
    let p_i = average(&inv_v, &pivot_projector(&i))?;
    let p_c = prim(Matrix::identity(&f, dp).sub(&average(&inv_w, &pivot_projector(&k))?), "projector")?;
    let t0 = t0_from(&lifts, &i, &p_i, &p_c, d, dp)?;
    same(&matrix_from_rows(&f, &c.t0, Some(dp), d, "t0").map_err(|e| VerifyError::Failed(format!("T0: {e}")))?, &t0, "T0")?;
    for (g, gp) in &halves {
        ensure(prim(gp.mul(&t0), "T0")? == prim(t0.mul(g), "T0")?, || "equivariance: T0 does not commute with G".into())?;
    }
    let diff = prim(t.sub(&t0), "T0")?;
    check_operator_numbers(&c, r, d, &k, &i, &diff, &k, &i)?;
    same(&c.group_order, &Some(order), "group_order")?;
    same(&c.equivariant, &Some(true), "equivariant")
}

fn distinct_conjugates(a: &Subspace, n: u32) -> Vec<Subspace> {
    let mut out: Vec<Subspace> = Vec::new();
    for j in 0..n {
        let c = a.frobenius(j);
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Checks a claimed rational basis of `W` and returns it as a subspace over k.
fn check_rational_form(w0_rows: &Rows, w: &Subspace, e: &Field, k: &Field) -> Check<Subspace> {
    let d = w.ambient_dim();
    let w0 = canonical(k, w0_rows, d, "W0")?;
    same(&w0.dim(), &w.dim(), "dim W0")?;
    let span = Subspace::span(&prim(w0.basis().embed(e), "W0")?);
    ensure(&span == w, || "W0: its E-span differs from W".into())?;
    ensure(&w.frobenius(1) == w, || "stability: W is not Frobenius-stable".into())?;
    Ok(w0)
}

fn galois_fields(p: u32, n: u32) -> Check<(Field, Field)> {
    Ok((build_field(p, n).map_err(instance_err)?, build_field(p, 1).map_err(instance_err)?))
}

fn verify_galois_subspace(cert: Value, input: &io::GaloisSubspaceInput) -> Check {
    let c: GaloisSubspaceCertJson = body(cert)?;
    let (e, k) = galois_fields(input.p, input.n)?;
    let a = subspace_from_rows(&e, &input.basis, input.d, "basis").map_err(instance_err)?;
    let w = check_wagner(&c.conjugates, &e, input.d, &distinct_conjugates(&a, input.n), None)?;
    same(&c.conjugates.group_order, &None, "conjugates.group_order")?;
    same(&c.conjugates.invariant, &None, "conjugates.invariant")?;
    same(&c.r, &c.conjugates.r, "r")?;
    same(&canonical(&e, &c.w, input.d, "W")?, &w, "W")?;
    same(&c.dim_w, &w.dim(), "dim_w")?;
    check_rational_form(&c.w0, &w, &e, &k)?;
    let bounds = [prim(w.quotient_dim(&a), "bounds")?, prim(a.quotient_dim(&w), "bounds")?];
    same(&c.bounds, &bounds, "bounds")?;
    ensure(bounds[0] <= c.r, || format!("bound: dim W/(W∩A) = {} exceeds r", bounds[0]))?;
    ensure(bounds[1] as u64 <= theorem_bound(c.r), || format!("bound: dim A/(W∩A) = {} exceeds r(r+1)^(r+1)", bounds[1]))
}

fn verify_galois_operator(cert: Value, input: &io::GaloisOperatorInput) -> Check {
    let c: GaloisOperatorCertJson = body(cert)?;
    let op = &c.operator;
    let (e, k) = galois_fields(input.p, input.n)?;
    let (d, dp) = (input.d, input.d_prime);
    let t = matrix_from_rows(&e, &input.t, Some(dp), d, "t").map_err(instance_err)?;
    let mut r_raw = 0;
    for j in 1..input.n {
        r_raw = r_raw.max(prim(t.frobenius(j).sub(&t), "r")?.rank());
    }
    let r = r_raw.max(1);
    same(&op.r_raw, &r_raw, "r_raw")?;
    same(&op.r, &r, "r")?;
    let w = check_wagner(&op.graph, &e, d + dp, &distinct_conjugates(&graph_of(&t)?, input.n), Some(r))?;
    same(&op.graph.group_order, &None, "graph.group_order")?;
    same(&op.graph.invariant, &None, "graph.invariant")?;
    same(&canonical(&e, &c.w, d + dp, "W")?, &w, "W")?;
    let w0 = check_rational_form(&c.w0, &w, &e, &k)?;

    let (kk, ii, lifts) = split_graph(&w0, d)?;
    let p_i = pivot_projector(&ii);
    let p_c = prim(Matrix::identity(&k, dp).sub(&pivot_projector(&kk)), "projector")?;
    let t0 = t0_from(&lifts, &ii, &p_i, &p_c, d, dp)?;
    let claimed = matrix_from_rows(&k, &op.t0, Some(dp), d, "t0").map_err(|e| VerifyError::Failed(format!("T0: {e}")))?;
    same(&claimed, &t0, "T0")?;
    let diff = prim(t.sub(&prim(t0.embed(&e), "T0")?), "T0")?;
    let k_e = Subspace::span(&prim(kk.basis().embed(&e), "K")?);
    let i_e = Subspace::span(&prim(ii.basis().embed(&e), "I")?);
    check_operator_numbers(op, r, d, &kk, &ii, &diff, &k_e, &i_e)?;
    same(&op.group_order, &None, "group_order")?;
    same(&op.equivariant, &None, "equivariant")
}

fn verify_set_majority(cert: Value, input: &SetMajorityInput) -> Check {
    let c: SetMajorityCertJson = body(cert)?;
    let n = input.x_size;
    for g in &input.generators {
        let mut seen = vec![false; n];
        let ok = g.len() == n && g.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true));
        if !ok {
            return Err(instance_err(Error::Schema(format!("generator {g:?} is not a permutation of 0..{n}"))));
        }
    }
    if let Some(bad) = input.a.iter().find(|&&x| x >= n) {
        return Err(instance_err(Error::Schema(format!("point {bad} outside 0..{n}"))));
    }
    let group = PermGroup::close(n, &input.generators).map_err(instance_err)?;
    let order = group.order();
    let mut in_a = vec![false; n];
    for &x in &input.a {
        in_a[x] = true;
    }
    let a: Vec<usize> = (0..n).filter(|&x| in_a[x]).collect();

    // counts[x] = |{g : gx ∈ A}|; r = max_g |A ∖ gA|.
    let counts: Vec<usize> = (0..n).map(|x| group.elements().iter().filter(|g| in_a[g[x]]).count()).collect();
    let r = group
        .elements()
        .iter()
        .map(|g| {
            let image: Vec<usize> = a.iter().map(|&x| g[x]).collect();
            a.iter().filter(|x| !image.contains(x)).count()
        })
        .max()
        .unwrap_or(0);
    let a0: Vec<usize> = (0..n).filter(|&x| 2 * counts[x] > order).collect();
    let symdiff = |b: &[usize]| a.iter().filter(|x| !b.contains(x)).count() + b.iter().filter(|x| !in_a[**x]).count();
    same(&c.group_order, &order, "group_order")?;
    same(&c.r, &r, "r")?;
    same(&c.a0, &a0, "a0")?;
    same(&c.symdiff, &symdiff(&a0), "symdiff")?;
    same(&c.bound, &(2 * r), "bound")?;
    ensure(symdiff(&a0) <= 2 * r, || format!("bound: |A Δ A0| = {} exceeds 2r", symdiff(&a0)))?;

    let in_a0: Vec<bool> = (0..n).map(|x| a0.contains(&x)).collect();
    let (mut p, mut p1, mut p2, mut both) = (0, 0, 0, 0);
    for &x in &a {
        for g in group.elements() {
            if in_a[g[x]] {
                continue;
            }
            p += 1;
            p1 += !in_a0[x] as usize;
            p2 += in_a0[g[x]] as usize;
            both += (!in_a0[x] && in_a0[g[x]]) as usize;
        }
    }
    let acc = &c.accounting;
    let a_minus = a.iter().filter(|&&x| !in_a0[x]).count();
    let a0_minus = a0.iter().filter(|&&x| !in_a[x]).count();
    same(&(acc.p, acc.p1, acc.p2), &(p, p1, p2), "accounting")?;
    same(&(acc.a_minus_a0, acc.a0_minus_a, acc.disjoint), &(a_minus, a0_minus, both == 0), "accounting")?;
    let holds = p <= r * order && 2 * p1 >= order * a_minus && 2 * p2 >= order * a0_minus && both == 0;
    ensure(holds && acc.holds, || "accounting: counting inequalities fail".into())?;

    let core: Vec<usize> = (0..n).filter(|&x| counts[x] == order).collect();
    let applies = r > 0 && a0 == core;
    match (&c.refined, applies) {
        (None, false) => Ok(()),
        (Some(rc), true) => {
            let refined: Vec<usize> = (0..n).filter(|&x| 2 * counts[x] >= order).collect();
            same(&rc.a0, &refined, "refined.a0")?;
            same(&rc.symdiff, &symdiff(&refined), "refined.symdiff")?;
            same(&rc.strict, &true, "refined.strict")?;
            ensure(symdiff(&refined) < 2 * r, || "bound: refined set is not strictly within 2r".into())
        }
        (Some(_), false) => fail("refined: present although the refinement does not apply"),
        (None, true) => fail("refined: missing although the refinement applies"),
    }
}

fn verify_conjecture(cert: Value, inst: &Instance) -> Check {
    let report = io::run(inst, None).map_err(instance_err)?;
    let io::Certificate::Conjecture(report) = report else {
        return fail("kind");
    };
    let expected = serde_json::to_value(&report.summary).expect("summary serializes");
    ensure(cert == expected, || "summary: does not match a rerun from the seed".into())
}

/// Checks a certificate file against an instance file. `Ok` carries a short description.
pub fn verify_text(certificate: &str, instance: &str) -> Check<String> {
    let (kind, cert) = parse_certificate_envelope(certificate).map_err(VerifyError::Failed)?;
    let inst = parse_instance(instance, Some(kind)).map_err(|e| match e {
        Error::Schema(msg) if msg.contains("does not match") => VerifyError::Failed(format!("kind: {msg}")),
        other => instance_err(other),
    })?;
    same(&kind, &inst.kind(), "kind").map_err(|_| VerifyError::Failed("kind".into()))?;
    match &inst {
        Instance::Wagner(x) => verify_wagner(cert, x)?,
        Instance::Operator(x) => verify_operator(cert, x)?,
        Instance::GaloisSubspace(x) => verify_galois_subspace(cert, x)?,
        Instance::GaloisOperator(x) => verify_galois_operator(cert, x)?,
        Instance::SetMajority(x) => verify_set_majority(cert, x)?,
        Instance::Conjecture(_) => verify_conjecture(cert, &inst)?,
    }
    Ok(format!("{kind}: all assertions hold"))
}
