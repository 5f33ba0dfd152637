//! The majority construction for almost-invariant subsets of a finite G-set.
//!
//! For `A ⊂ X` with `|A ∖ gA| ≤ r`, the set `A₀ = ⋃_{|S|>|G|/2} ⋂_{g∈S} gA` is invariant and
//! `|A ∖ A₀| + |A₀ ∖ A| ≤ 2r`. A point lies in `A₀` exactly when more than half of the
//! translates `gA` contain it, which is how it is computed here.

use crate::error::{Error, Result};
use crate::group::PermGroup;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetInstance {
    x_size: usize,
    group: PermGroup,
    a: Vec<usize>,
}

impl SetInstance {
    pub fn new(group: PermGroup, mut a: Vec<usize>) -> Result<Self> {
        let x_size = group.degree();
        if let Some(&bad) = a.iter().find(|&&x| x >= x_size) {
            return Err(Error::InvalidParameter(format!("point {bad} outside a set of size {x_size}")));
        }
        a.sort_unstable();
        a.dedup();
        Ok(SetInstance { x_size, group, a })
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn subset(&self) -> &[usize] {
        &self.a
    }

    fn membership(&self) -> Vec<bool> {
        let mut m = vec![false; self.x_size];
        for &x in &self.a {
            m[x] = true;
        }
        m
    }

    /// `max_g |A ∖ gA|`.
    pub fn r(&self) -> usize {
        let mut best = 0;
        for g in self.group.elements() {
            let mut image = vec![false; self.x_size];
            for &x in &self.a {
                image[g[x]] = true;
            }
            best = best.max(self.a.iter().filter(|&&x| !image[x]).count());
        }
        best
    }

    /// `|{g : g·x ∈ A}|` for every point.
    pub fn counts(&self) -> Vec<usize> {
        let inside = self.membership();
        (0..self.x_size).map(|x| self.group.elements().iter().filter(|g| inside[g[x]]).count()).collect()
    }

    /// `A ∩ gA` over all g.
    pub fn core(&self) -> Vec<usize> {
        let order = self.group.order();
        self.counts().iter().enumerate().filter(|(_, &c)| c == order).map(|(x, _)| x).collect()
    }

    pub fn is_invariant(&self) -> bool {
        self.r() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCertificate {
    pub r: usize,
    pub a0: Vec<usize>,
    /// `|A ∖ A₀| + |A₀ ∖ A|`.
    pub symdiff: usize,
    /// Whether the `≥ |G|/2` threshold was used.
    pub refined: bool,
    /// `symdiff < 2r`.
    pub strict: bool,
}

fn symdiff(a: &[usize], b: &[usize]) -> usize {
    let only_a = a.iter().filter(|x| b.binary_search(x).is_err()).count();
    let only_b = b.iter().filter(|x| a.binary_search(x).is_err()).count();
    only_a + only_b
}

fn threshold_set(inst: &SetInstance, keep: impl Fn(usize) -> bool) -> Vec<usize> {
    inst.counts().iter().enumerate().filter(|(_, &c)| keep(c)).map(|(x, _)| x).collect()
}

fn certificate(inst: &SetInstance, a0: Vec<usize>, refined: bool) -> SetCertificate {
    let r = inst.r();
    let symdiff = symdiff(inst.subset(), &a0);
    SetCertificate { r, a0, symdiff, refined, strict: symdiff < 2 * r }
}

/// Points lying in more than half of the translates `gA`.
pub fn majority_set(inst: &SetInstance) -> Result<SetCertificate> {
    let order = inst.group.order();
    let cert = certificate(inst, threshold_set(inst, |c| 2 * c > order), false);
    if cert.symdiff > 2 * cert.r {
        return Err(Error::Internal(format!("majority set misses by {} > 2r = {}", cert.symdiff, 2 * cert.r)));
    }
    Ok(cert)
}

/// Whether [`refined_majority`] applies: `A` is not invariant and the majority set is
/// already the core `⋂ gA`.
pub fn refinement_applies(inst: &SetInstance) -> bool {
    if inst.is_invariant() {
        return false;
    }
    let order = inst.group.order();
    threshold_set(inst, |c| 2 * c > order) == inst.core()
}

/// Points lying in at least half of the translates; valid only in the degenerate case
/// described by [`refinement_applies`], where it improves the bound to a strict one.
pub fn refined_majority(inst: &SetInstance) -> Result<SetCertificate> {
    if !refinement_applies(inst) {
        return Err(Error::NotApplicable(
            "the subset is invariant or its majority set is larger than its core".into(),
        ));
    }
    let order = inst.group.order();
    let cert = certificate(inst, threshold_set(inst, |c| 2 * c >= order), true);
    if !cert.strict {
        return Err(Error::Internal(format!("refined set misses by {} >= 2r = {}", cert.symdiff, 2 * cert.r)));
    }
    Ok(cert)
}

/// Counts behind the `2r` bound, with `P = {(a, g) : a ∈ A, ga ∉ A}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofAccounting {
    pub group_order: usize,
    pub r: usize,
    pub p: usize,
    /// Pairs with `a ∈ A ∖ A₀`.
    pub p1: usize,
    /// Pairs with `ga ∈ A₀ ∖ A`.
    pub p2: usize,
    pub a_minus_a0: usize,
    pub a0_minus_a: usize,
    pub disjoint: bool,
}

impl ProofAccounting {
    /// `|P| ≤ r|G|`, `|P₁| ≥ |G|/2·|A∖A₀|`, `|P₂| ≥ |G|/2·|A₀∖A|` and `P₁ ∩ P₂ = ∅`.
    pub fn holds(&self) -> bool {
        self.p <= self.r * self.group_order
            && 2 * self.p1 >= self.group_order * self.a_minus_a0
            && 2 * self.p2 >= self.group_order * self.a0_minus_a
            && self.disjoint
    }
}

pub fn verify_proof_accounting(inst: &SetInstance, cert: &SetCertificate) -> ProofAccounting {
    let inside = inst.membership();
    let mut in_a0 = vec![false; inst.x_size];
    for &x in &cert.a0 {
        if x < inst.x_size {
            in_a0[x] = true;
        }
    }
    let (mut p, mut p1, mut p2, mut both) = (0, 0, 0, 0);
    for &a in inst.subset() {
        for g in inst.group.elements() {
            let ga = g[a];
            if inside[ga] {
                continue;
            }
            p += 1;
            let first = !in_a0[a];
            let second = in_a0[ga];
            p1 += first as usize;
            p2 += second as usize;
            both += (first && second) as usize;
        }
    }
    ProofAccounting {
        group_order: inst.group.order(),
        r: inst.r(),
        p,
        p1,
        p2,
        a_minus_a0: inst.subset().iter().filter(|&&x| !in_a0[x]).count(),
        a0_minus_a: cert.a0.iter().filter(|&&x| x < inst.x_size && !inside[x]).count(),
        disjoint: both == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Permutation;
    use rand::{Rng, SeedableRng};

    fn swap_instance() -> SetInstance {
        SetInstance::new(PermGroup::close(2, &[vec![1, 0]]).unwrap(), vec![0]).unwrap()
    }

    #[test]
    fn swap_example() {
        let inst = swap_instance();
        let c = majority_set(&inst).unwrap();
        assert_eq!((c.r, c.a0.clone(), c.symdiff, c.strict), (1, vec![], 1, true));
        let acc = verify_proof_accounting(&inst, &c);
        assert_eq!((acc.p, acc.p1, acc.p2), (1, 1, 0));
        assert!(acc.holds());

        assert!(refinement_applies(&inst));
        let rc = refined_majority(&inst).unwrap();
        assert_eq!((rc.a0.clone(), rc.symdiff, rc.refined), (vec![0, 1], 1, true));
    }

    #[test]
    fn invariant_and_trivial_cases() {
        let g = PermGroup::close(4, &[vec![1, 0, 3, 2]]).unwrap();
        let inst = SetInstance::new(g, vec![2, 3]).unwrap();
        let c = majority_set(&inst).unwrap();
        assert_eq!((c.r, c.a0.clone(), c.symdiff), (0, vec![2, 3], 0));
        let acc = verify_proof_accounting(&inst, &c);
        assert_eq!((acc.p, acc.p1, acc.p2), (0, 0, 0));
        assert!(matches!(refined_majority(&inst), Err(Error::NotApplicable(_))));

        let trivial = SetInstance::new(PermGroup::close(5, &[]).unwrap(), vec![4, 1, 1]).unwrap();
        assert_eq!(majority_set(&trivial).unwrap().a0, vec![1, 4]);
        assert!(SetInstance::new(PermGroup::close(2, &[]).unwrap(), vec![2]).is_err());
    }

    #[test]
    fn odd_order_refinement_changes_nothing() {
        let g = PermGroup::close(3, &[vec![1, 2, 0]]).unwrap();
        let inst = SetInstance::new(g, vec![0]).unwrap();
        assert!(refinement_applies(&inst));
        assert_eq!(refined_majority(&inst).unwrap().a0, majority_set(&inst).unwrap().a0);
    }

    /// `⋃_{|S|>|G|/2} ⋂_{g∈S} gA`, by enumerating every subset of the group.
    fn union_of_intersections(inst: &SetInstance, at_least_half: bool) -> Vec<usize> {
        let els: &[Permutation] = inst.group().elements();
        let order = els.len();
        let translates: Vec<Vec<bool>> = els
            .iter()
            .map(|g| {
                let mut m = vec![false; inst.x_size()];
                for &a in inst.subset() {
                    m[g[a]] = true;
                }
                m
            })
            .collect();
        let mut out = vec![false; inst.x_size()];
        for mask in 1u32..1 << order {
            let size = mask.count_ones() as usize;
            let big = if at_least_half { 2 * size >= order } else { 2 * size > order };
            if !big {
                continue;
            }
            for x in 0..inst.x_size() {
                if (0..order).filter(|i| mask >> i & 1 == 1).all(|i| translates[i][x]) {
                    out[x] = true;
                }
            }
        }
        (0..inst.x_size()).filter(|&x| out[x]).collect()
    }

    #[test]
    fn majority_count_equals_union_of_intersections() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        let gens: Vec<(usize, Vec<Permutation>)> = vec![
            (4, vec![vec![1, 2, 3, 0]]),
            (4, vec![vec![1, 2, 3, 0], vec![3, 2, 1, 0]]),
            (3, vec![vec![1, 0, 2], vec![1, 2, 0]]),
            (5, vec![vec![1, 2, 3, 4, 0]]),
            (6, vec![vec![1, 0, 3, 2, 5, 4], vec![2, 3, 0, 1, 4, 5]]),
        ];
        for _ in 0..100 {
            let (deg, g) = &gens[rng.gen_range(0..gens.len())];
            let group = PermGroup::close(*deg, g).unwrap();
            let a: Vec<usize> = (0..*deg).filter(|_| rng.gen_bool(0.5)).collect();
            let inst = SetInstance::new(group, a).unwrap();
            assert_eq!(majority_set(&inst).unwrap().a0, union_of_intersections(&inst, false));
            if refinement_applies(&inst) {
                assert_eq!(refined_majority(&inst).unwrap().a0, union_of_intersections(&inst, true));
            }
        }
    }
}
