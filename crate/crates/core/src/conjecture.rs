//! Randomized experiments on the majority subspace `A₀ = Σ_{|S|>|G|/2} ⋂_{g∈S} gA`.
//!
//! Each trial draws a small group and an almost-invariant subspace, measures
//! `dim A/(A₀∩A)` and `dim A₀/(A₀∩A)` against `r`, and runs the Wagner engine on the
//! orbit of `A` for comparison. Candidate bounds `c(r)` are data: exceeding one is a
//! finding, not an error.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{build_field, Field};
use crate::group::{MatrixGroup, PermGroup, Permutation};
use crate::matrix::Matrix;
use crate::operator::coordinate_projector;
use crate::subspace::Subspace;
use crate::wagner::{dim_bound, wagner_approximate};

pub const MAJORITY_GROUP_CAP: usize = 12;

/// `Σ_{|S|>|G|/2} ⋂_{g∈S} gA`.
///
/// Only subsets of size `⌊|G|/2⌋+1` are visited: shrinking `S` enlarges `⋂_{g∈S} gA`.
pub fn majority_subspace(group: &MatrixGroup, a: &Subspace) -> Result<Subspace> {
    majority_subspace_with_cap(group, a, MAJORITY_GROUP_CAP)
}

pub fn majority_subspace_with_cap(group: &MatrixGroup, a: &Subspace, cap: usize) -> Result<Subspace> {
    let order = group.order();
    if order > cap {
        return Err(Error::GroupTooLarge { order, cap });
    }
    if a.ambient_dim() != group.ambient_dim() || a.field() != group.field() {
        return Err(Error::AmbientMismatch);
    }
    let translates: Vec<Subspace> = group.elements().iter().map(|g| g.apply_subspace(a)).collect::<Result<_>>()?;
    let size = order / 2 + 1;
    let mut acc = Subspace::zero(a.field(), a.ambient_dim());
    // Depth-first over combinations, reusing the running intersection of each prefix.
    let mut stack: Vec<(usize, Subspace)> = Vec::with_capacity(size);
    let mut next = 0;
    loop {
        if stack.len() == size {
            acc = acc.sum(&stack.last().expect("nonempty").1)?;
        }
        if stack.len() == size || next >= order || order - next < size - stack.len() {
            match stack.pop() {
                Some((i, _)) => {
                    next = i + 1;
                    continue;
                }
                None => break,
            }
        }
        let cur = match stack.last() {
            Some((_, s)) => s.intersect(&translates[next])?,
            None => translates[next].clone(),
        };
        stack.push((next, cur));
        next += 1;
    }
    if !group.is_invariant(&acc)? {
        return Err(Error::Internal("majority subspace is not invariant".into()));
    }
    Ok(acc)
}

/// A bound `c(r)` to compare observed dimensions against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Candidate {
    TwoR,
    RSquared,
    Proven,
}

impl Candidate {
    pub const DEFAULT: [Candidate; 3] = [Candidate::TwoR, Candidate::RSquared, Candidate::Proven];

    pub fn eval(self, r: usize) -> u64 {
        let r = r as u64;
        match self {
            Candidate::TwoR => 2 * r,
            Candidate::RSquared => r * r,
            Candidate::Proven => dim_bound(r as usize),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Candidate::TwoR => "2r",
            Candidate::RSquared => "r^2",
            Candidate::Proven => "r(r+1)^(r+1)",
        }
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Candidate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "2r" => Ok(Candidate::TwoR),
            "r^2" => Ok(Candidate::RSquared),
            "r(r+1)^(r+1)" => Ok(Candidate::Proven),
            other => Err(Error::InvalidParameter(format!(
                "unknown candidate {other:?}; expected 2r, r^2 or r(r+1)^(r+1)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub p: u32,
    pub n: u32,
    /// Largest ambient dimension; each trial draws `d` in `2..=dim`.
    pub dim: usize,
    pub group_cap: usize,
    /// Most vectors swapped into the invariant starting subspace.
    pub budget: usize,
    pub trials: usize,
    pub seed: u64,
    pub candidates: Vec<Candidate>,
    /// Worker threads; `None` uses the rayon default.
    pub threads: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            p: 2,
            n: 1,
            dim: 6,
            group_cap: 8,
            budget: 1,
            trials: 100,
            seed: 0,
            candidates: Candidate::DEFAULT.to_vec(),
            threads: None,
        }
    }
}

impl ExperimentConfig {
    fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::InvalidParameter("dim must be at least 2".into()));
        }
        if self.group_cap < 1 || self.group_cap > MAJORITY_GROUP_CAP {
            return Err(Error::InvalidParameter(format!("group cap must lie in 1..={MAJORITY_GROUP_CAP}")));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidParameter("thread count must be positive".into()));
        }
        Ok(())
    }
}

/// Seed of trial `index`, a function of the master seed and the index only.
pub fn trial_seed(master: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index as u64);
    rng.next_u64()
}

/// A random group together with its name in the catalog.
#[derive(Debug, Clone)]
pub struct Instance {
    pub group_name: String,
    pub group: MatrixGroup,
    pub a: Subspace,
}

fn catalog(d: usize) -> Vec<(String, usize, Vec<Permutation>)> {
    let cycle = |k: usize| -> Permutation { (0..k).map(|i| (i + 1) % k).collect() };
    let flip = |k: usize| -> Permutation { (0..k).map(|i| (k - i) % k).collect() };
    let mut out = Vec::new();
    for k in 2..=d {
        out.push((format!("C{k}"), k, vec![cycle(k)]));
    }
    for k in 3..=d {
        out.push((format!("D{k}"), k, vec![cycle(k), flip(k)]));
    }
    if d >= 3 {
        out.push(("S3".into(), 3, vec![vec![1, 0, 2], cycle(3)]));
    }
    if d >= 4 {
        out.push(("S4".into(), 4, vec![vec![1, 0, 2, 3], cycle(4)]));
        out.push(("C2xC2".into(), 4, vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]]));
    }
    out
}

fn random_vector(rng: &mut impl Rng, f: &Field, d: usize) -> Vec<u32> {
    (0..d).map(|_| rng.gen_range(0..f.order()) as u32).collect()
}

fn random_invertible(rng: &mut impl Rng, f: &Field, d: usize) -> Matrix {
    loop {
        let data = (0..d * d).map(|_| rng.gen_range(0..f.order()) as u32).collect();
        let m = Matrix::from_entries(f, d, d, data).expect("shape");
        if m.rank() == d {
            return m;
        }
    }
}

fn random_group(rng: &mut impl Rng, f: &Field, d: usize, cap: usize) -> Result<(String, MatrixGroup)> {
    let options: Vec<_> = catalog(d)
        .into_iter()
        .filter_map(|(name, k, gens)| {
            let g = PermGroup::close_with_cap(k, &gens, cap).ok()?;
            Some((name, k, g))
        })
        .collect();
    if options.is_empty() {
        return Ok(("1".into(), MatrixGroup::trivial(f, d)));
    }
    let (name, k, perms) = &options[rng.gen_range(0..options.len())];
    // Move the k active coordinates to random positions among the d.
    let mut positions: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        positions.swap(i, rng.gen_range(0..=i));
    }
    let embed = |g: &Permutation| -> Permutation {
        let mut full: Permutation = (0..d).collect();
        for i in 0..*k {
            full[positions[i]] = positions[g[i]];
        }
        full
    };
    let mut gens: Vec<Matrix> =
        perms.elements().iter().map(|g| PermGroup::permutation_matrix(f, &embed(g))).collect();
    let mut name = name.clone();
    if rng.gen_bool(0.5) {
        let c = random_invertible(rng, f, d);
        let ci = c.inverse()?;
        gens = gens.iter().map(|g| c.mul(g)?.mul(&ci)).collect::<Result<_>>()?;
        name.push_str("^conj");
    }
    Ok((name, MatrixGroup::close_linear(f, d, &gens)?))
}

/// Image of `Σ_g g Q g⁻¹` for a coordinate projector `Q` onto a random subspace, falling
/// back to the orbit sum when that image is zero. Either way the result is invariant.
fn random_invariant(rng: &mut impl Rng, group: &MatrixGroup, d: usize) -> Result<Subspace> {
    let f = group.field();
    let k = rng.gen_range(1..=d);
    let rows: Vec<Vec<u32>> = (0..k).map(|_| random_vector(rng, f, d)).collect();
    let u = Subspace::span(&Matrix::from_rows(f, d, &rows)?);
    let q = coordinate_projector(&u);
    let mut acc = Matrix::zeros(f, d, d);
    for g in group.matrices()? {
        acc = acc.add(&g.mul(&q)?.mul(&g.inverse()?)?)?;
    }
    let image = Subspace::span(&acc.transpose());
    if !image.is_zero() {
        return Ok(image);
    }
    let mut sum = Subspace::zero(f, d);
    for gu in group.orbit_subspace(&u)? {
        sum = sum.sum(&gu)?;
    }
    Ok(sum)
}

/// Deterministic instance for one trial seed.
pub fn random_instance(seed: u64, cfg: &ExperimentConfig) -> Result<Instance> {
    cfg.validate()?;
    let f = build_field(cfg.p, cfg.n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = rng.gen_range(2..=cfg.dim);
    let (group_name, group) = random_group(&mut rng, &f, d, cfg.group_cap)?;
    let b = random_invariant(&mut rng, &group, d)?;
    let mut rows: Vec<Vec<u32>> = (0..b.dim()).map(|i| b.basis().row(i).to_vec()).collect();
    let swaps = rng.gen_range(0..=cfg.budget);
    for _ in 0..swaps {
        let v = random_vector(&mut rng, &f, d);
        if rows.is_empty() {
            rows.push(v);
        } else {
            let i = rng.gen_range(0..rows.len());
            rows[i] = v;
        }
    }
    let a = if rows.is_empty() { Subspace::zero(&f, d) } else { Subspace::span(&Matrix::from_rows(&f, d, &rows)?) };
    Ok(Instance { group_name, group, a })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub p: u32,
    pub n: u32,
    pub d: usize,
    pub group: String,
    pub group_order: usize,
    pub r: usize,
    pub dim_a: usize,
    pub dim_a0: usize,
    /// `dim A/(A₀∩A)`.
    pub a_over_a0: usize,
    /// `dim A₀/(A₀∩A)`.
    pub a0_over_a: usize,
    pub dim_w: usize,
    /// `dim W/(W∩A)` for the Wagner subspace `W` of the orbit of `A`.
    pub w_over_a: usize,
    /// `dim A/(W∩A)`.
    pub a_over_w: usize,
    pub a0_equals_w: bool,
    pub theorem_bound: u64,
    /// Candidate names whose value `A` or `A₀` exceeds.
    pub exceeded: Vec<Candidate>,
}

pub fn run_trial(index: usize, cfg: &ExperimentConfig) -> Result<TrialRecord> {
    let seed = trial_seed(cfg.seed, index);
    let inst = random_instance(seed, cfg)?;
    let a = &inst.a;
    let orbit = inst.group.orbit_subspace(a)?;
    let mut r = 0;
    for ga in &orbit {
        r = r.max(a.quotient_dim(ga)?);
    }
    let a0 = majority_subspace_with_cap(&inst.group, a, cfg.group_cap.max(1))?;
    let a_over_a0 = a.quotient_dim(&a0)?;
    let a0_over_a = a0.quotient_dim(a)?;
    let wagner = wagner_approximate(&orbit, None)?;
    let w = &wagner.w;
    let theorem_bound = dim_bound(r);
    let a0_equals_w = &a0 == w;
    if a0_equals_w && (a0_over_a > r || a_over_a0 as u64 > theorem_bound) {
        return Err(Error::Internal(format!("trial {index}: A0 = W but the engine bounds fail")));
    }
    let worst = a_over_a0.max(a0_over_a) as u64;
    let exceeded = cfg.candidates.iter().copied().filter(|c| worst > c.eval(r)).collect();
    Ok(TrialRecord {
        trial: index,
        seed,
        p: cfg.p,
        n: cfg.n,
        d: a.ambient_dim(),
        group: inst.group_name,
        group_order: inst.group.order(),
        r,
        dim_a: a.dim(),
        dim_a0: a0.dim(),
        a_over_a0,
        a0_over_a,
        dim_w: w.dim(),
        w_over_a: w.quotient_dim(a)?,
        a_over_w: a.quotient_dim(w)?,
        a0_equals_w,
        theorem_bound,
        exceeded,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RSummary {
    pub r: usize,
    pub trials: usize,
    pub max_a_over_a0: usize,
    pub max_a0_over_a: usize,
    pub max_w_over_a: usize,
    pub max_a_over_w: usize,
    pub theorem_bound: u64,
    /// Trials with `max(dim A/(A₀∩A), dim A₀/(A₀∩A)) > c(r)`, per candidate.
    pub exceedances: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub trial: usize,
    pub seed: u64,
    pub candidate: String,
    pub r: usize,
    pub limit: u64,
    pub a_over_a0: usize,
    pub a0_over_a: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub p: u32,
    pub n: u32,
    pub dim: usize,
    pub group_cap: usize,
    pub budget: usize,
    pub trials: usize,
    pub seed: u64,
    pub candidates: Vec<String>,
    pub per_r: Vec<RSummary>,
    /// Trials exceeding `r(r+1)^(r+1)` in either dimension.
    pub theorem_bound_exceeded: usize,
    pub findings: Vec<Finding>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub records: Vec<TrialRecord>,
    pub summary: Summary,
}

pub const CSV_HEADER: [&str; 19] = [
    "trial",
    "seed",
    "p",
    "n",
    "d",
    "group",
    "group_order",
    "r",
    "dim_a",
    "dim_a0",
    "a_over_a0",
    "a0_over_a",
    "dim_w",
    "w_over_a",
    "a_over_w",
    "a0_equals_w",
    "theorem_bound",
    "exceeds_theorem_bound",
    "exceeded_candidates",
];

impl Report {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Internal(format!("csv: {e}"));
        w.write_record(CSV_HEADER).map_err(io)?;
        for t in &self.records {
            let exceeded: Vec<&str> = t.exceeded.iter().map(|c| c.name()).collect();
            let over = t.a_over_a0.max(t.a0_over_a) as u64 > t.theorem_bound;
            w.write_record([
                t.trial.to_string(),
                t.seed.to_string(),
                t.p.to_string(),
                t.n.to_string(),
                t.d.to_string(),
                t.group.clone(),
                t.group_order.to_string(),
                t.r.to_string(),
                t.dim_a.to_string(),
                t.dim_a0.to_string(),
                t.a_over_a0.to_string(),
                t.a0_over_a.to_string(),
                t.dim_w.to_string(),
                t.w_over_a.to_string(),
                t.a_over_w.to_string(),
                t.a0_equals_w.to_string(),
                t.theorem_bound.to_string(),
                over.to_string(),
                exceeded.join(";"),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Internal(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
    }

    pub fn summary_json(&self) -> String {
        crate::io::to_json_string(&serde_json::to_value(&self.summary).expect("summary serializes"))
    }
}

fn summarize(cfg: &ExperimentConfig, records: &[TrialRecord]) -> Summary {
    let mut per_r: BTreeMap<usize, RSummary> = BTreeMap::new();
    let mut findings = Vec::new();
    let mut theorem_bound_exceeded = 0;
    for t in records {
        let e = per_r.entry(t.r).or_insert_with(|| RSummary {
            r: t.r,
            trials: 0,
            max_a_over_a0: 0,
            max_a0_over_a: 0,
            max_w_over_a: 0,
            max_a_over_w: 0,
            theorem_bound: t.theorem_bound,
            exceedances: cfg.candidates.iter().map(|c| (c.name().to_string(), 0)).collect(),
        });
        e.trials += 1;
        e.max_a_over_a0 = e.max_a_over_a0.max(t.a_over_a0);
        e.max_a0_over_a = e.max_a0_over_a.max(t.a0_over_a);
        e.max_w_over_a = e.max_w_over_a.max(t.w_over_a);
        e.max_a_over_w = e.max_a_over_w.max(t.a_over_w);
        for c in &t.exceeded {
            *e.exceedances.entry(c.name().to_string()).or_insert(0) += 1;
            findings.push(Finding {
                trial: t.trial,
                seed: t.seed,
                candidate: c.name().to_string(),
                r: t.r,
                limit: c.eval(t.r),
                a_over_a0: t.a_over_a0,
                a0_over_a: t.a0_over_a,
            });
        }
        if t.a_over_a0.max(t.a0_over_a) as u64 > t.theorem_bound {
            theorem_bound_exceeded += 1;
        }
    }
    Summary {
        p: cfg.p,
        n: cfg.n,
        dim: cfg.dim,
        group_cap: cfg.group_cap,
        budget: cfg.budget,
        trials: cfg.trials,
        seed: cfg.seed,
        candidates: cfg.candidates.iter().map(|c| c.name().to_string()).collect(),
        per_r: per_r.into_values().collect(),
        theorem_bound_exceeded,
        findings,
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    build_field(cfg.p, cfg.n)?;
    let work = || -> Result<Vec<TrialRecord>> { (0..cfg.trials).into_par_iter().map(|i| run_trial(i, cfg)).collect() };
    let records = match cfg.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };
    let summary = summarize(cfg, &records);
    Ok(Report { records, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::SemilinearElement;

    fn swap_group(f: &Field) -> MatrixGroup {
        let s = Matrix::from_rows(f, 2, &[vec![0, 1], vec![1, 0]]).unwrap();
        MatrixGroup::close_linear(f, 2, &[s]).unwrap()
    }

    #[test]
    fn swap_line_has_zero_majority() {
        let f = build_field(2, 1).unwrap();
        let g = swap_group(&f);
        let a = Subspace::span(&Matrix::from_rows(&f, 2, &[vec![1, 0]]).unwrap());
        let a0 = majority_subspace(&g, &a).unwrap();
        assert!(a0.is_zero());
        assert_eq!((a.quotient_dim(&a0).unwrap(), a0.quotient_dim(&a).unwrap()), (1, 0));
    }

    #[test]
    fn invariant_input_is_fixed() {
        let f = build_field(3, 1).unwrap();
        let g = swap_group(&f);
        let diag = Subspace::span(&Matrix::from_rows(&f, 2, &[vec![1, 1]]).unwrap());
        assert_eq!(majority_subspace(&g, &diag).unwrap(), diag);
    }

    #[test]
    fn cap_is_enforced() {
        let f = build_field(2, 1).unwrap();
        let gens = [vec![1, 0, 2, 3], vec![1, 2, 3, 0]];
        let mats: Vec<Matrix> = gens.iter().map(|g| PermGroup::permutation_matrix(&f, g)).collect();
        let s4 = MatrixGroup::close_linear(&f, 4, &mats).unwrap();
        let a = Subspace::zero(&f, 4);
        assert!(matches!(majority_subspace(&s4, &a), Err(Error::GroupTooLarge { order: 24, cap: 12 })));
    }

    /// Sum over every subset with `|S| > |G|/2`, by bitmask.
    fn full_sum(group: &MatrixGroup, a: &Subspace) -> Subspace {
        let translates: Vec<Subspace> = group.elements().iter().map(|g| g.apply_subspace(a).unwrap()).collect();
        let order = translates.len();
        let mut acc = Subspace::zero(a.field(), a.ambient_dim());
        for mask in 1u32..1 << order {
            if 2 * mask.count_ones() as usize <= order {
                continue;
            }
            let mut s = Subspace::full(a.field(), a.ambient_dim());
            for (i, t) in translates.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    s = s.intersect(t).unwrap();
                }
            }
            acc = acc.sum(&s).unwrap();
        }
        acc
    }

    #[test]
    fn minimal_size_reduction_matches_full_sum() {
        let cfg = ExperimentConfig { p: 2, n: 1, dim: 5, group_cap: 6, budget: 2, ..Default::default() };
        for s in 0..60 {
            let inst = random_instance(s, &cfg).unwrap();
            assert_eq!(majority_subspace(&inst.group, &inst.a).unwrap(), full_sum(&inst.group, &inst.a));
        }
        let f4 = build_field(2, 2).unwrap();
        let frob = MatrixGroup::close(&f4, 2, &[SemilinearElement::frobenius(&f4, 2, 1)]).unwrap();
        let a = Subspace::span(&Matrix::from_rows(&f4, 2, &[vec![1, 2]]).unwrap());
        assert_eq!(majority_subspace(&frob, &a).unwrap(), full_sum(&frob, &a));
    }

    #[test]
    fn zero_budget_gives_invariant_instances() {
        let cfg = ExperimentConfig { budget: 0, trials: 30, dim: 5, ..Default::default() };
        let report = run_experiment(&cfg).unwrap();
        assert!(report.records.iter().all(|t| t.r == 0 && t.a_over_a0 == 0 && t.a0_over_a == 0));
        assert_eq!(report.summary.per_r.len(), 1);
    }

    #[test]
    fn instances_and_reports_are_deterministic() {
        let cfg = ExperimentConfig { trials: 20, seed: 99, ..Default::default() };
        let a = random_instance(5, &cfg).unwrap();
        let b = random_instance(5, &cfg).unwrap();
        assert_eq!((a.group.elements(), &a.a), (b.group.elements(), &b.a));

        let one = run_experiment(&ExperimentConfig { threads: Some(1), ..cfg.clone() }).unwrap();
        let four = run_experiment(&ExperimentConfig { threads: Some(4), ..cfg }).unwrap();
        assert_eq!(one.to_csv().unwrap(), four.to_csv().unwrap());
        assert_eq!(one.summary_json(), four.summary_json());
    }

    #[test]
    fn single_swap_moves_r_by_at_most_two() {
        let cfg = ExperimentConfig { dim: 6, group_cap: 4, budget: 1, ..Default::default() };
        for s in 0..40 {
            let inst = random_instance(s, &cfg).unwrap();
            let r = inst
                .group
                .elements()
                .iter()
                .map(|g| inst.a.quotient_dim(&g.apply_subspace(&inst.a).unwrap()).unwrap())
                .max()
                .unwrap();
            assert!(r <= 2);
            assert!(inst.group.order() <= 4);
        }
    }

    #[test]
    fn candidates_parse_and_evaluate() {
        for c in Candidate::DEFAULT {
            assert_eq!(c.name().parse::<Candidate>().unwrap(), c);
        }
        assert_eq!(Candidate::Proven.eval(1), 4);
        assert_eq!(Candidate::Proven.eval(2), 54);
        assert_eq!(Candidate::RSquared.eval(3), 9);
        assert!("3r".parse::<Candidate>().is_err());
    }
}
