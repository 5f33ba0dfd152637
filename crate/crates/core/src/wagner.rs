//! Certified invariant approximation of a finite collection of subspaces.
//!
//! Given subspaces `A_x` with `dim A_x/(A_x∩A_y) ≤ r` for every pair, write `A_S` for the
//! intersection over a subset `S` and let `𝒮_m` be the nonempty `S` with
//! `dim (A_S+A_x)/A_x ≤ m` for every `x`. With `h(m)` the least size of a member of `𝒮_m`:
//!
//! * if some `m ∈ 1..=r` has `h(m-1) > (r+1)·h(m) + 1`, take the largest such `m` and
//!   let `W` be the sum of `A_S` over all `S ∈ 𝒮_m` of size `h(m)`;
//! * otherwise `W` is the intersection of the whole collection.
//!
//! In both cases `dim W/(W∩A_x) ≤ r` and `dim A_x/(W∩A_x) ≤ r·(r+1)^(r+1)`, and `W` is
//! invariant under any group permuting the collection.

use std::collections::HashMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::group::{compute_r, MatrixGroup};
use crate::subspace::Subspace;

/// Default cap on the size of the collection; the class sweep is exponential in it.
pub const DEFAULT_MAX_COLLECTION: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WagnerConfig {
    pub max_collection: usize,
}

impl Default for WagnerConfig {
    fn default() -> Self {
        WagnerConfig { max_collection: DEFAULT_MAX_COLLECTION }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WagnerCase {
    /// A sharp drop in `h` at the chosen level.
    Drop,
    /// No drop; `W` is the total intersection.
    Intersection,
}

impl WagnerCase {
    pub fn number(self) -> u8 {
        match self {
            WagnerCase::Drop => 1,
            WagnerCase::Intersection => 2,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(WagnerCase::Drop),
            2 => Some(WagnerCase::Intersection),
            _ => None,
        }
    }
}

/// Full transcript of one run of [`wagner_approximate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WagnerCertificate {
    pub r: usize,
    /// Observed `max dim A_x/(A_x∩A_y)`.
    pub r_raw: usize,
    /// The collection after sorting and deduplication; subsets index into it.
    pub collection: Vec<Subspace>,
    /// `h(m)` for `m = 0..=r`.
    pub h_table: Vec<usize>,
    pub case: WagnerCase,
    pub chosen_m: Option<usize>,
    /// Case 1: every `S ∈ 𝒮_m` with `|S| = h(m)`. Case 2: the members of `𝒮_0` of size `h(0)`.
    pub witness_subsets: Vec<Vec<usize>>,
    pub w: Subspace,
    /// `(dim W/(W∩A_x), dim A_x/(W∩A_x))` for each member of the collection.
    pub per_x_bounds: Vec<(usize, usize)>,
    pub bound_codim: u64,
    pub bound_dim: u64,
}

/// `r·(r+1)^(r+1)`, saturating.
pub fn dim_bound(r: usize) -> u64 {
    (r as u64).saturating_mul(pow_sat(r as u64 + 1, r as u32 + 1))
}

/// `(r+1)^e`, saturating.
pub fn pow_sat(base: u64, e: u32) -> u64 {
    (0..e).fold(1u64, |acc, _| acc.saturating_mul(base))
}

/// Sorted, deduplicated copy of the collection, after checking it is usable.
pub fn canonical_collection(xs: &[Subspace]) -> Result<Vec<Subspace>> {
    let first = xs.first().ok_or(Error::EmptyCollection)?;
    if xs.iter().any(|x| x.ambient_dim() != first.ambient_dim() || x.field() != first.field()) {
        return Err(Error::AmbientMismatch);
    }
    let mut out = xs.to_vec();
    out.sort();
    out.dedup();
    Ok(out)
}

fn intersection_of(xs: &[Subspace], subset: &[usize]) -> Result<Subspace> {
    let (&first, rest) = subset.split_first().ok_or(Error::EmptySubset)?;
    rest.iter().try_fold(xs[first].clone(), |acc, &i| acc.intersect(&xs[i]))
}

/// `max_x dim (A_S + A_x)/A_x`: the least `m` with `S ∈ 𝒮_m`.
fn class_level(a_s: &Subspace, xs: &[Subspace]) -> Result<usize> {
    xs.iter().try_fold(0, |acc, x| Ok(acc.max(a_s.quotient_dim(x)?)))
}

/// Whether `S ∈ 𝒮_m`.
pub fn in_class_m(subset: &[usize], xs: &[Subspace], m: usize) -> Result<bool> {
    if subset.iter().any(|&i| i >= xs.len()) {
        return Err(Error::InvalidParameter("subset index out of range".into()));
    }
    let a_s = intersection_of(xs, subset)?;
    for x in xs {
        if a_s.quotient_dim(x)? > m {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `h(m)` and all members of `𝒮_m` of that size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HValue {
    pub h: usize,
    pub witnesses: Vec<Vec<usize>>,
}

pub fn compute_h(xs: &[Subspace], m: usize) -> Result<HValue> {
    let mut levels = sweep_classes(xs, &[m])?;
    Ok(levels.remove(&m).expect("every level is resolved"))
}

/// Computes `h(m)` and its witnesses for every requested level.
///
/// Subsets are visited by increasing size and lexicographically within a size, with `A_S`
/// built incrementally from the previous size. Membership in `𝒮_m` is upward closed, so the
/// sweep stops after the size at which the last requested level is first met.
fn sweep_classes(xs: &[Subspace], levels: &[usize]) -> Result<HashMap<usize, HValue>> {
    if xs.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let n = xs.len();
    let mut pending: Vec<usize> = levels.to_vec();
    pending.sort_unstable();
    pending.dedup();
    let mut found: HashMap<usize, HValue> = HashMap::new();
    let mut prev: HashMap<Vec<usize>, Subspace> = HashMap::new();

    for size in 1..=n {
        let mut current: HashMap<Vec<usize>, Subspace> = HashMap::new();
        let mut hits: HashMap<usize, Vec<Vec<usize>>> = HashMap::new();
        for subset in (0..n).combinations(size) {
            let a_s = if size == 1 {
                xs[subset[0]].clone()
            } else {
                let (&last, head) = subset.split_last().expect("size >= 2");
                prev[head].intersect(&xs[last])?
            };
            let level = class_level(&a_s, xs)?;
            for &m in pending.iter().filter(|&&m| m >= level) {
                hits.entry(m).or_default().push(subset.clone());
            }
            current.insert(subset, a_s);
        }
        pending.retain(|m| match hits.remove(m) {
            Some(witnesses) => {
                found.insert(*m, HValue { h: size, witnesses });
                false
            }
            None => true,
        });
        if pending.is_empty() {
            break;
        }
        prev = current;
    }
    // The whole collection has level 0, so every level resolves by size n.
    debug_assert!(pending.is_empty());
    Ok(found)
}

/// Runs the construction on `xs`. If `r` is given the hypothesis is checked against it,
/// otherwise `r = max(1, observed)`.
pub fn wagner_approximate(xs: &[Subspace], r: Option<usize>) -> Result<WagnerCertificate> {
    wagner_approximate_with(xs, r, &WagnerConfig::default())
}

pub fn wagner_approximate_with(xs: &[Subspace], r: Option<usize>, cfg: &WagnerConfig) -> Result<WagnerCertificate> {
    let xs = canonical_collection(xs)?;
    if xs.len() > cfg.max_collection {
        return Err(Error::CollectionTooLarge { size: xs.len(), cap: cfg.max_collection });
    }
    let observed = compute_r(&xs)?;
    let r = match r {
        Some(0) => return Err(Error::InvalidParameter("r must be at least 1".into())),
        Some(r) if observed.raw > r => {
            return Err(Error::HypothesisViolated { pair: observed.pair, observed: observed.raw, r })
        }
        Some(r) => r,
        None => observed.r,
    };

    let levels: Vec<usize> = (0..=r).collect();
    let mut classes = sweep_classes(&xs, &levels)?;
    let h_table: Vec<usize> = levels.iter().map(|m| classes[m].h).collect();

    let chosen_m = (1..=r).rev().find(|&m| h_table[m - 1] > (r + 1) * h_table[m] + 1);
    let (case, witness_subsets, w) = match chosen_m {
        Some(m) => {
            let witnesses = classes.remove(&m).expect("level computed").witnesses;
            let mut w = Subspace::zero(xs[0].field(), xs[0].ambient_dim());
            for s in &witnesses {
                w = w.sum(&intersection_of(&xs, s)?)?;
            }
            (WagnerCase::Drop, witnesses, w)
        }
        None => {
            let all: Vec<usize> = (0..xs.len()).collect();
            let w = intersection_of(&xs, &all)?;
            let witnesses = classes.remove(&0).expect("level computed").witnesses;
            (WagnerCase::Intersection, witnesses, w)
        }
    };

    let per_x_bounds = xs
        .iter()
        .map(|x| Ok((w.quotient_dim(x)?, x.quotient_dim(&w)?)))
        .collect::<Result<Vec<_>>>()?;

    let cert = WagnerCertificate {
        r,
        r_raw: observed.raw,
        collection: xs,
        h_table,
        case,
        chosen_m,
        witness_subsets,
        w,
        per_x_bounds,
        bound_codim: r as u64,
        bound_dim: dim_bound(r),
    };
    check_certificate_laws(&cert)?;
    Ok(cert)
}

/// Internal consistency checks on a freshly built certificate. A failure here is a bug.
fn check_certificate_laws(c: &WagnerCertificate) -> Result<()> {
    let r = c.r;
    let fail = |msg: String| Err(Error::Internal(msg));
    if c.h_table[r] != 1 {
        return fail(format!("h({r}) = {} instead of 1", c.h_table[r]));
    }
    if c.h_table.windows(2).any(|w| w[0] < w[1]) {
        return fail(format!("h table {:?} is not non-increasing", c.h_table));
    }
    match (c.case, c.chosen_m) {
        (WagnerCase::Drop, Some(m)) => {
            if c.h_table[m] as u64 > pow_sat(r as u64 + 1, r as u32) {
                return fail(format!("h({m}) = {} exceeds (r+1)^r", c.h_table[m]));
            }
        }
        (WagnerCase::Intersection, None) => {
            if c.h_table[0] as u64 > pow_sat(r as u64 + 1, r as u32 + 1) {
                return fail(format!("h(0) = {} exceeds (r+1)^(r+1)", c.h_table[0]));
            }
        }
        _ => return fail("case and chosen level disagree".into()),
    }
    for (i, &(codim, dim)) in c.per_x_bounds.iter().enumerate() {
        if codim as u64 > c.bound_codim {
            return fail(format!("dim W/(W∩A_{i}) = {codim} exceeds r = {r}"));
        }
        if dim as u64 > c.bound_dim {
            return fail(format!("dim A_{i}/(W∩A_{i}) = {dim} exceeds {}", c.bound_dim));
        }
    }
    Ok(())
}

/// Whether `g·W = W` for every element of the group.
pub fn certify_invariance(group: &MatrixGroup, w: &Subspace) -> Result<bool> {
    group.is_invariant(w)
}
