#![allow(dead_code)]

use almost_invariant::io::{FieldJson, GroupJson, Rows, SemilinearJson};
use almost_invariant::{Field, Matrix, MatrixGroup, PermGroup, SemilinearElement, Subspace};
use rand::Rng;

pub type Perm = Vec<usize>;

pub fn cycle(k: usize) -> Perm {
    (0..k).map(|i| (i + 1) % k).collect()
}

pub fn flip(k: usize) -> Perm {
    (0..k).map(|i| (k - i) % k).collect()
}

/// Small permutation groups by name, degree and generators, with orders at most `max_order`.
pub fn perm_catalog(max_degree: usize, max_order: usize) -> Vec<(String, usize, Vec<Perm>)> {
    let mut all: Vec<(String, usize, Vec<Perm>)> = Vec::new();
    for k in 2..=max_degree {
        all.push((format!("C{k}"), k, vec![cycle(k)]));
    }
    for k in 3..=max_degree {
        all.push((format!("D{k}"), k, vec![cycle(k), flip(k)]));
    }
    if max_degree >= 3 {
        all.push(("S3".into(), 3, vec![vec![1, 0, 2], cycle(3)]));
    }
    if max_degree >= 4 {
        all.push(("S4".into(), 4, vec![vec![1, 0, 2, 3], cycle(4)]));
        all.push(("A4".into(), 4, vec![vec![1, 2, 0, 3], vec![0, 2, 3, 1]]));
        all.push(("C2xC2".into(), 4, vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]]));
    }
    all.into_iter().filter(|(_, k, g)| PermGroup::close(*k, g).unwrap().order() <= max_order).collect()
}

pub fn shuffle<T>(rng: &mut impl Rng, v: &mut [T]) {
    for i in (1..v.len()).rev() {
        v.swap(i, rng.gen_range(0..=i));
    }
}

/// Extends `g` on `k` points to `d` points, placing the moved points at `positions`.
pub fn embed_perm(g: &[usize], positions: &[usize], d: usize) -> Perm {
    let mut full: Perm = (0..d).collect();
    for (i, &gi) in g.iter().enumerate() {
        full[positions[i]] = positions[gi];
    }
    full
}

pub fn random_positions(rng: &mut impl Rng, d: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..d).collect();
    shuffle(rng, &mut p);
    p
}

pub fn random_vector(rng: &mut impl Rng, f: &Field, d: usize) -> Vec<u32> {
    (0..d).map(|_| rng.gen_range(0..f.order()) as u32).collect()
}

pub fn random_matrix(rng: &mut impl Rng, f: &Field, rows: usize, cols: usize) -> Matrix {
    let data = (0..rows * cols).map(|_| rng.gen_range(0..f.order()) as u32).collect();
    Matrix::from_entries(f, rows, cols, data).unwrap()
}

pub fn random_invertible(rng: &mut impl Rng, f: &Field, d: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, f, d, d);
        if m.rank() == d {
            return m;
        }
    }
}

pub fn random_subspace(rng: &mut impl Rng, f: &Field, d: usize, max_gens: usize) -> Subspace {
    let k = rng.gen_range(0..=max_gens);
    let rows: Vec<Vec<u32>> = (0..k).map(|_| random_vector(rng, f, d)).collect();
    if rows.is_empty() {
        return Subspace::zero(f, d);
    }
    Subspace::span(&Matrix::from_rows(f, d, &rows).unwrap())
}

pub fn rows(m: &Matrix) -> Rows {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

pub fn field_json(f: &Field) -> FieldJson {
    FieldJson { p: f.characteristic(), n: Some(f.degree()), modulus: None }
}

/// A random linear group of order at most `max_order` on `F^d`: a catalog permutation group
/// on some coordinates, optionally conjugated by a random invertible matrix.
pub fn random_linear_group(rng: &mut impl Rng, f: &Field, d: usize, max_order: usize) -> (GroupJson, MatrixGroup) {
    let catalog = perm_catalog(d, max_order);
    if catalog.is_empty() {
        let id = rows(&Matrix::identity(f, d));
        return (GroupJson::Linear(vec![id]), MatrixGroup::trivial(f, d));
    }
    let (_, k, gens) = &catalog[rng.gen_range(0..catalog.len())];
    let pos = random_positions(rng, d);
    let perms: Vec<Perm> = gens.iter().map(|g| embed_perm(g, &pos[..*k], d)).collect();
    let mut mats: Vec<Matrix> = perms.iter().map(|p| PermGroup::permutation_matrix(f, p)).collect();
    if rng.gen_bool(0.5) {
        let c = random_invertible(rng, f, d);
        let ci = c.inverse().unwrap();
        mats = mats.iter().map(|m| c.mul(m).unwrap().mul(&ci).unwrap()).collect();
    }
    let group = MatrixGroup::close_linear(f, d, &mats).unwrap();
    (GroupJson::Linear(mats.iter().map(rows).collect()), group)
}

/// `v ↦ P·σ(v)` with `P` a cyclic coordinate shift on `k` coordinates.
pub fn random_semilinear_group(rng: &mut impl Rng, f: &Field, d: usize, max_order: usize) -> (GroupJson, MatrixGroup) {
    let n = f.degree() as usize;
    let max_k = (max_order / n).min(d).max(1);
    let k = rng.gen_range(1..=max_k);
    let pos = random_positions(rng, d);
    let p = PermGroup::permutation_matrix(f, &embed_perm(&cycle(k), &pos[..k], d));
    let gen = SemilinearElement::new(1, p.clone()).unwrap();
    let group = MatrixGroup::close(f, d, &[gen]).unwrap();
    (GroupJson::Semilinear(vec![SemilinearJson { frobenius: 1, matrix: rows(&p) }]), group)
}

/// An invariant subspace: the span of the orbit of a random subspace.
pub fn random_invariant(rng: &mut impl Rng, group: &MatrixGroup, max_gens: usize) -> Subspace {
    let f = group.field();
    let d = group.ambient_dim();
    let u = random_subspace(rng, f, d, max_gens);
    let mut sum = Subspace::zero(f, d);
    for g in group.elements() {
        sum = sum.sum(&g.apply_subspace(&u).unwrap()).unwrap();
    }
    sum
}

/// Replaces up to `swaps` basis vectors of `b` with random vectors.
pub fn perturb(rng: &mut impl Rng, b: &Subspace, swaps: usize) -> Subspace {
    let f = b.field();
    let d = b.ambient_dim();
    let mut rs: Vec<Vec<u32>> = rows(b.basis());
    for _ in 0..swaps {
        let v = random_vector(rng, f, d);
        if rs.is_empty() || rng.gen_bool(0.25) {
            rs.push(v);
        } else {
            let i = rng.gen_range(0..rs.len());
            rs[i] = v;
        }
    }
    if rs.is_empty() {
        return Subspace::zero(f, d);
    }
    Subspace::span(&Matrix::from_rows(f, d, &rs).unwrap())
}

pub fn theorem_bound(r: usize) -> u64 {
    r as u64 * (r as u64 + 1).pow(r as u32 + 1)
}
