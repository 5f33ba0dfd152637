mod common;

use almost_invariant::io::{self, Instance, SetMajorityInput, WagnerInput};
use almost_invariant::set_majority::{majority_set, SetInstance};
use almost_invariant::verify::verify_text;
use almost_invariant::{build_field, wagner_approximate, Field, Matrix, PermGroup, Subspace};
use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field_params() -> impl Strategy<Value = (u32, u32)> {
    prop_oneof![Just((2, 1)), Just((3, 1)), Just((5, 1)), Just((2, 2)), Just((2, 3)), Just((3, 2)), Just((7, 2))]
}

fn field_and_elements() -> impl Strategy<Value = (Field, u32, u32, u32)> {
    field_params().prop_flat_map(|(p, n)| {
        let f = build_field(p, n).unwrap();
        let q = f.order() as u32;
        (Just(f), 0..q, 0..q, 0..q)
    })
}

fn subspace_from(f: &Field, d: usize, entries: &[u32], k: usize) -> Subspace {
    let q = f.order() as u32;
    let rows: Vec<Vec<u32>> = (0..k).map(|i| (0..d).map(|j| entries[i * d + j] % q).collect()).collect();
    if rows.is_empty() {
        return Subspace::zero(f, d);
    }
    Subspace::span(&Matrix::from_rows(f, d, &rows).unwrap())
}

fn two_subspaces() -> impl Strategy<Value = (Subspace, Subspace)> {
    (field_params(), 1usize..=6, 0usize..=6, 0usize..=6, prop::collection::vec(any::<u32>(), 72)).prop_map(
        |((p, n), d, ka, kb, entries)| {
            let f = build_field(p, n).unwrap();
            let a = subspace_from(&f, d, &entries[..36], ka);
            let b = subspace_from(&f, d, &entries[36..], kb);
            (a, b)
        },
    )
}

proptest! {
    #[test]
    fn field_axioms((f, a, b, c) in field_and_elements()) {
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        match f.inv(a) {
            Some(i) => prop_assert_eq!(f.mul(a, i), 1),
            None => prop_assert_eq!(a, 0),
        }
        prop_assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
        prop_assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
        prop_assert_eq!(f.frobenius(a, f.degree()), a);
        prop_assert_eq!(f.pow(a, f.order()), a);
    }

    #[test]
    fn subspace_lattice_laws((a, b) in two_subspaces()) {
        let s = a.sum(&b).unwrap();
        let i = a.intersect(&b).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
        prop_assert!(i.is_subspace_of(&a).unwrap() && i.is_subspace_of(&b).unwrap());
        prop_assert!(a.is_subspace_of(&s).unwrap() && b.is_subspace_of(&s).unwrap());
        prop_assert_eq!(a.quotient_dim(&b).unwrap(), a.dim() - i.dim());
        prop_assert_eq!(Subspace::span(a.basis()), a.clone());
        prop_assert!(a.basis().is_rref());
        prop_assert_eq!(a.intersect(&s).unwrap(), a.clone());
        prop_assert_eq!(a.sum(&i).unwrap(), a.clone());
        prop_assert_eq!(a.quotient_dim(&b).unwrap() == 0, a.is_subspace_of(&b).unwrap());
        prop_assert!(a.quotient_dim(&s).unwrap() <= a.quotient_dim(&b).unwrap());
        prop_assert!(a.quotient_dim(&b).unwrap() <= a.quotient_dim(&i).unwrap());
    }

    /// `dim A/(A∩σ^j A) = dim A/(A∩σ^{n-j} A)`, so checking the powers of the generator suffices.
    #[test]
    fn frobenius_defect_is_symmetric((a, _) in two_subspaces()) {
        let n = a.field().degree();
        for j in 1..n {
            prop_assert_eq!(a.quotient_dim(&a.frobenius(j)).unwrap(), a.quotient_dim(&a.frobenius(n - j)).unwrap());
            prop_assert_eq!(a.frobenius(j).frobenius(n - j), a.clone());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// Random collections, with no relation between members, still satisfy both bounds.
    #[test]
    fn wagner_bounds_hold(seed in any::<u64>(), p in prop_oneof![Just(2u32), Just(3)], d in 1usize..=5, size in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = build_field(p, 1).unwrap();
        let base = random_subspace(&mut rng, &f, d, d);
        let xs: Vec<Subspace> = (0..size).map(|_| perturb(&mut rng, &base, 1)).collect();
        let c = wagner_approximate(&xs, None).unwrap();
        prop_assert_eq!(c.h_table[c.r], 1);
        prop_assert!(c.h_table.windows(2).all(|w| w[0] >= w[1]));
        for x in &xs {
            prop_assert!(c.w.quotient_dim(x).unwrap() <= c.r);
            prop_assert!(c.w.quotient_dim(x).unwrap() as u64 <= c.bound_codim);
            prop_assert!(x.quotient_dim(&c.w).unwrap() as u64 <= theorem_bound(c.r));
        }
        let mut rebuilt = Subspace::zero(&f, d);
        if c.chosen_m.is_some() {
            for s in &c.witness_subsets {
                let meet = s[1..].iter().fold(c.collection[s[0]].clone(), |acc, &i| acc.intersect(&c.collection[i]).unwrap());
                rebuilt = rebuilt.sum(&meet).unwrap();
            }
        } else {
            rebuilt = c.collection[1..].iter().fold(c.collection[0].clone(), |acc, x| acc.intersect(x).unwrap());
        }
        prop_assert_eq!(&rebuilt, &c.w);
        let permuted: Vec<Subspace> = xs.iter().rev().cloned().collect();
        prop_assert_eq!(wagner_approximate(&permuted, None).unwrap(), c);
    }

    /// With a group, the output is invariant and the certificate verifies.
    #[test]
    fn wagner_group_runs_verify(seed in any::<u64>(), p in prop_oneof![Just(2u32), Just(3)], d in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = build_field(p, 1).unwrap();
        let (gj, group) = random_linear_group(&mut rng, &f, d, 6);
        let b = random_invariant(&mut rng, &group, d);
        let a = perturb(&mut rng, &b, 1);
        let inst = Instance::Wagner(WagnerInput {
            field: field_json(&f),
            ambient_dim: d,
            group: Some(gj),
            subspaces: vec![rows(a.basis())],
            r: None,
        });
        let text = inst.to_json();
        let cert = io::run_text(&text, None, None).unwrap();
        let io::Certificate::Wagner(c) = &cert else { panic!("wrong kind") };
        let w = if c.w.is_empty() { Subspace::zero(&f, d) } else { Subspace::span(&Matrix::from_rows(&f, d, &c.w).unwrap()) };
        prop_assert!(group.is_invariant(&w).unwrap());
        prop_assert!(verify_text(&cert.to_json(), &text).is_ok());
    }

    /// An invariant subspace is its own approximation.
    #[test]
    fn invariant_subspaces_are_fixed(seed in any::<u64>(), d in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = build_field(3, 1).unwrap();
        let (_, group) = random_linear_group(&mut rng, &f, d, 8);
        let b = random_invariant(&mut rng, &group, d);
        let orbit = group.orbit_subspace(&b).unwrap();
        prop_assert_eq!(orbit.len(), 1);
        let c = wagner_approximate(&orbit, None).unwrap();
        prop_assert_eq!(c.r_raw, 0);
        prop_assert_eq!(c.w, b);
    }
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

fn set_case() -> impl Strategy<Value = (usize, Vec<Vec<usize>>, Vec<bool>)> {
    (1usize..=6).prop_flat_map(|n| (Just(n), prop::collection::vec(permutation(n), 1..=2), prop::collection::vec(any::<bool>(), n)))
}

proptest! {
    #[test]
    fn majority_set_is_close((n, gens, inside) in set_case()) {
        let a: Vec<usize> = (0..n).filter(|&x| inside[x]).collect();
        let group = PermGroup::close(n, &gens).unwrap();
        let inst = SetInstance::new(group.clone(), a.clone()).unwrap();
        let c = majority_set(&inst).unwrap();
        prop_assert!(c.symdiff <= 2 * c.r);
        for g in group.elements() {
            let moved = PermGroup::apply_set(g, &c.a0);
            prop_assert_eq!(&moved, &c.a0);
        }
        if c.r == 0 {
            prop_assert_eq!(&c.a0, &a);
        }
        let mut closure: Vec<usize> = group.elements().iter().flat_map(|g| PermGroup::apply_set(g, &a)).collect();
        closure.sort_unstable();
        closure.dedup();
        let enlarged = majority_set(&SetInstance::new(group.clone(), closure.clone()).unwrap()).unwrap();
        prop_assert_eq!(enlarged.symdiff, 0);
        prop_assert_eq!(enlarged.a0, closure);
        let input = Instance::SetMajority(SetMajorityInput { x_size: n, generators: gens, a });
        let text = input.to_json();
        let cert = io::run_text(&text, None, None).unwrap();
        prop_assert!(verify_text(&cert.to_json(), &text).is_ok());
    }
}
