//! Exact combinatorial dimensions of finite classes.
//!
//! The central object is the shattering core: the unique maximal
//! subfamily of a projection in which every member keeps, in every
//! coordinate `i`, at least `N_i` distinct `i`-neighbors. Cores are
//! computed by iterative peeling to the greatest fixed point (the union
//! of two qualifying families qualifies, so the fixed point is
//! order-independent). On top of cores sit the dimension searches:
//!
//! - `bds_dimension`: maximize the profile total over instance subsets
//!   and neighbor profiles (the feasible profiles of a subset form a
//!   downward-closed set, which the lattice walk exploits);
//! - `ds_l_dimension`: longest subset feasible for the constant profile
//!   `(L, ..., L)`;
//! - `l_exponential_dimension`: largest subset on which the class
//!   realizes at least `(L+1)^d` patterns;
//! - `natarajan_dimension`: largest subset shattered with two candidate
//!   labels per point.
//!
//! Searches enumerate distinct-instance subsets only; repeated instances
//! admit no neighbors at the repeated coordinates, so they never help
//! (tested exhaustively at small sizes). Budgets cap the number of
//! evaluated search nodes; exhaustion yields a flagged partial report
//! rather than a failure.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::concept_class::{restrict, ConceptClass, ProjectedClass};
use crate::error::Error;
use crate::Result;

/// Per-coordinate neighbor requirements; every entry is at least one.
/// Entries above `K - 1` are representable but unsatisfiable (a vector
/// has at most `K - 1` distinct `i`-neighbors).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct NeighborProfile(Vec<u32>);

impl<'de> serde::Deserialize<'de> for NeighborProfile {
    fn deserialize<D>(deserializer: D) -> core::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let values = Vec::<u32>::deserialize(deserializer)?;
        NeighborProfile::new(values).map_err(serde::de::Error::custom)
    }
}

impl NeighborProfile {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        if values.iter().any(|&v| v == 0) {
            return Err(Error::InvalidParameter(
                "neighbor requirements must be at least 1; drop the coordinate instead".into(),
            ));
        }
        Ok(Self(values))
    }

    pub fn uniform(arity: usize, l: u32) -> Result<Self> {
        Self::new(alloc::vec![l; arity])
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the requirements (the quantity the bandit-DS search
    /// maximizes).
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// Certificate that a sequence and profile are pseudo-box shattered: the
/// surviving family together with what it must satisfy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoBoxWitness {
    pub seq: Vec<usize>,
    pub profile: NeighborProfile,
    pub family: Vec<Vec<u16>>,
}

impl PseudoBoxWitness {
    /// Re-validates the certificate from scratch against a class.
    pub fn validate(&self, class: &ConceptClass) -> Result<()> {
        if self.profile.len() != self.seq.len() {
            return Err(Error::WitnessInvalid("profile arity differs from sequence".into()));
        }
        if self.family.is_empty() {
            return Err(Error::WitnessInvalid("family is empty".into()));
        }
        let proj = restrict(class, &self.seq)?;
        let distinct: BTreeSet<&Vec<u16>> = self.family.iter().collect();
        if distinct.len() != self.family.len() {
            return Err(Error::WitnessInvalid("family has duplicates".into()));
        }
        for f in &self.family {
            if !proj.contains(f) {
                return Err(Error::WitnessInvalid("family member not realized by class".into()));
            }
            for (i, &need) in self.profile.values().iter().enumerate() {
                let have = self
                    .family
                    .iter()
                    .filter(|g| {
                        g[i] != f[i] && g.iter().enumerate().all(|(j, &v)| j == i || v == f[j])
                    })
                    .count();
                if (have as u32) < need {
                    return Err(Error::WitnessInvalid(alloc::format!(
                        "member lacks {need} neighbors at coordinate {i}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Search accounting. `truncated` marks a budget-exhausted partial
/// result: the reported value is a valid lower bound, never an answer
/// presented as exact.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes_visited: u64,
    pub cache_hits: u64,
    pub truncated: bool,
}

/// Witness attached to a dimension report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DimensionWitness {
    PseudoBox(PseudoBoxWitness),
    ExponentialSet { instances: Vec<usize>, patterns: u64 },
    NatarajanSet { instances: Vec<usize>, label_pairs: Vec<(u16, u16)> },
}

/// Result of a dimension computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub value: u32,
    pub witness: Option<DimensionWitness>,
    pub stats: SearchStats,
}

/// Direction buckets of a projection, shared by every profile evaluated
/// on the same subset. Two patterns are `i`-neighbors or equal iff they
/// share the bucket `bucket_of[i][..]`.
struct BucketIndex {
    arity: usize,
    members: usize,
    bucket_of: Vec<Vec<usize>>,  // [direction][pattern] -> bucket id
    bucket_count: Vec<usize>,    // buckets per direction
    max_bucket_size: Vec<usize>, // per direction
}

impl BucketIndex {
    fn new(proj: &ProjectedClass) -> Self {
        let arity = proj.arity();
        let members = proj.len();
        let mut bucket_of = Vec::with_capacity(arity);
        let mut bucket_count = Vec::with_capacity(arity);
        let mut max_bucket_size = Vec::with_capacity(arity);
        for i in 0..arity {
            let buckets = proj.direction_buckets(i);
            let mut of = alloc::vec![0usize; members];
            let mut largest = 0usize;
            for (b, (_, idxs)) in buckets.iter().enumerate() {
                largest = largest.max(idxs.len());
                for &v in idxs {
                    of[v] = b;
                }
            }
            bucket_of.push(of);
            bucket_count.push(buckets.len());
            max_bucket_size.push(largest);
        }
        Self { arity, members, bucket_of, bucket_count, max_bucket_size }
    }

    /// Largest possible neighbor requirement per coordinate.
    fn caps(&self) -> Vec<u32> {
        self.max_bucket_size.iter().map(|&s| s.saturating_sub(1) as u32).collect()
    }

    /// Peels `start` down to the greatest family in which every member
    /// has bucket occupancy at least `N_i + 1` in every direction.
    fn peel(&self, profile: &[u32], start: &[bool]) -> Vec<bool> {
        debug_assert_eq!(profile.len(), self.arity);
        let mut alive = start.to_vec();
        let mut counts: Vec<Vec<u32>> =
            self.bucket_count.iter().map(|&c| alloc::vec![0u32; c]).collect();
        for v in 0..self.members {
            if alive[v] {
                for i in 0..self.arity {
                    counts[i][self.bucket_of[i][v]] += 1;
                }
            }
        }
        loop {
            let mut changed = false;
            for v in 0..self.members {
                if !alive[v] {
                    continue;
                }
                let violated =
                    (0..self.arity).any(|i| counts[i][self.bucket_of[i][v]] < profile[i] + 1);
                if violated {
                    alive[v] = false;
                    changed = true;
                    for i in 0..self.arity {
                        counts[i][self.bucket_of[i][v]] -= 1;
                    }
                }
            }
            if !changed {
                return alive;
            }
        }
    }
}

fn collect_alive(proj: &ProjectedClass, alive: &[bool]) -> Vec<Vec<u16>> {
    proj.patterns()
        .iter()
        .zip(alive)
        .filter(|(_, &a)| a)
        .map(|(p, _)| p.clone())
        .collect()
}

/// The unique maximal subfamily of `proj` in which every member has at
/// least `profile[i]` distinct `i`-neighbors inside the family, for every
/// coordinate; possibly empty.
pub fn shattering_core(proj: &ProjectedClass, profile: &NeighborProfile) -> Result<Vec<Vec<u16>>> {
    if profile.len() != proj.arity() {
        return Err(Error::ArityMismatch { expected: proj.arity(), got: profile.len() });
    }
    let index = BucketIndex::new(proj);
    let alive = index.peel(profile.values(), &alloc::vec![true; proj.len()]);
    Ok(collect_alive(proj, &alive))
}

/// Witness iff the core of `restrict(class, seq)` under `profile` is
/// nonempty. Repeats in `seq` are permitted and simply never shatter.
pub fn is_bds_shattered(
    class: &ConceptClass,
    seq: &[usize],
    profile: &NeighborProfile,
) -> Result<Option<PseudoBoxWitness>> {
    let proj = restrict(class, seq)?;
    let family = shattering_core(&proj, profile)?;
    if family.is_empty() {
        return Ok(None);
    }
    Ok(Some(PseudoBoxWitness { seq: seq.to_vec(), profile: profile.clone(), family }))
}

/// Nonempty subsets of `0..n` ordered by (size, lexicographic).
fn subsets_by_size(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..=n {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            out.push(combo.clone());
            let mut i = size;
            let mut advanced = false;
            while i > 0 {
                i -= 1;
                if combo[i] != i + n - size {
                    combo[i] += 1;
                    for j in i + 1..size {
                        combo[j] = combo[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
    out
}

struct BestWitness {
    value: u32,
    seq: Vec<usize>,
    profile: Vec<u32>,
    family: Vec<Vec<u16>>,
}

impl BestWitness {
    /// Keeps the larger value; on ties the lexicographically smaller
    /// (seq, profile) pair, so results are scheduling-independent.
    fn offer(
        this: &mut Option<Self>,
        value: u32,
        seq: &[usize],
        profile: &[u32],
        family: impl FnOnce() -> Vec<Vec<u16>>,
    ) {
        let better = match this {
            None => true,
            Some(b) => {
                value > b.value
                    || (value == b.value
                        && (seq, profile) < (b.seq.as_slice(), b.profile.as_slice()))
            }
        };
        if better {
            *this = Some(BestWitness {
                value,
                seq: seq.to_vec(),
                profile: profile.to_vec(),
                family: family(),
            });
        }
    }
}

/// Maximum over distinct-instance subsets `S` and neighbor profiles `N`
/// of the total `sum(N_i)` with a nonempty shattering core. The lattice
/// walk expands only feasible profiles (downward closure of feasibility)
/// and peels each child from its parent's core.
pub fn bds_dimension(class: &ConceptClass, node_budget: u64) -> DimensionReport {
    let mut stats = SearchStats::default();
    let mut best: Option<BestWitness> = None;
    'subsets: for seq in subsets_by_size(class.n()) {
        let proj = restrict(class, &seq).expect("subset indices are valid");
        let index = BucketIndex::new(&proj);
        let caps = index.caps();
        if caps.iter().any(|&c| c == 0) {
            continue;
        }
        if let Some(b) = &best {
            // subsets that cannot reach the best value are skipped, but
            // potential ties stay in play for the canonical witness
            if caps.iter().sum::<u32>() < b.value {
                continue;
            }
        }
        let d = seq.len();
        let ones = alloc::vec![1u32; d];
        if stats.nodes_visited >= node_budget {
            stats.truncated = true;
            break;
        }
        stats.nodes_visited += 1;
        let root_alive = index.peel(&ones, &alloc::vec![true; proj.len()]);
        if !root_alive.iter().any(|&a| a) {
            continue;
        }
        let mut visited: BTreeSet<Vec<u32>> = BTreeSet::new();
        visited.insert(ones.clone());
        let mut queue: VecDeque<(Vec<u32>, Vec<bool>)> = VecDeque::new();
        queue.push_back((ones, root_alive));
        while let Some((profile, alive)) = queue.pop_front() {
            BestWitness::offer(&mut best, profile.iter().sum(), &seq, &profile, || {
                collect_alive(&proj, &alive)
            });
            for i in 0..d {
                if profile[i] >= caps[i] {
                    continue;
                }
                let mut child = profile.clone();
                child[i] += 1;
                if !visited.insert(child.clone()) {
                    stats.cache_hits += 1;
                    continue;
                }
                if stats.nodes_visited >= node_budget {
                    stats.truncated = true;
                    break 'subsets;
                }
                stats.nodes_visited += 1;
                let child_alive = index.peel(&child, &alive);
                if child_alive.iter().any(|&a| a) {
                    queue.push_back((child, child_alive));
                }
            }
        }
    }
    finish_pseudo_box_report(best, stats)
}

fn finish_pseudo_box_report(best: Option<BestWitness>, stats: SearchStats) -> DimensionReport {
    match best {
        None => DimensionReport { value: 0, witness: None, stats },
        Some(b) => DimensionReport {
            value: b.value,
            witness: Some(DimensionWitness::PseudoBox(PseudoBoxWitness {
                seq: b.seq,
                profile: NeighborProfile(b.profile),
                family: b.family,
            })),
            stats,
        },
    }
}

/// Longest distinct-instance subset shattered with the constant profile
/// `(L, ..., L)`; `L = 1` recovers the DS dimension.
pub fn ds_l_dimension(class: &ConceptClass, l: u32, node_budget: u64) -> Result<DimensionReport> {
    if l == 0 {
        return Err(Error::InvalidParameter("list size L must be at least 1".into()));
    }
    let mut stats = SearchStats::default();
    let mut best: Option<BestWitness> = None;
    for seq in subsets_by_size(class.n()) {
        if let Some(b) = &best {
            if seq.len() as u32 <= b.value {
                continue;
            }
        }
        let proj = restrict(class, &seq).expect("subset indices are valid");
        let index = BucketIndex::new(&proj);
        if index.caps().iter().any(|&c| c < l) {
            continue;
        }
        if stats.nodes_visited >= node_budget {
            stats.truncated = true;
            break;
        }
        stats.nodes_visited += 1;
        let profile = alloc::vec![l; seq.len()];
        let alive = index.peel(&profile, &alloc::vec![true; proj.len()]);
        if alive.iter().any(|&a| a) {
            BestWitness::offer(&mut best, seq.len() as u32, &seq, &profile, || {
                collect_alive(&proj, &alive)
            });
        }
    }
    Ok(finish_pseudo_box_report(best, stats))
}

/// Largest instance set (set semantics) on which the class realizes at
/// least `(L+1)^d` distinct patterns.
pub fn l_exponential_dimension(
    class: &ConceptClass,
    l: u32,
    node_budget: u64,
) -> Result<DimensionReport> {
    if l == 0 {
        return Err(Error::InvalidParameter("list size L must be at least 1".into()));
    }
    let mut stats = SearchStats::default();
    let mut best: Option<(u32, Vec<usize>, u64)> = None;
    for seq in subsets_by_size(class.n()) {
        if let Some((v, _, _)) = &best {
            if seq.len() as u32 <= *v {
                continue;
            }
        }
        if stats.nodes_visited >= node_budget {
            stats.truncated = true;
            break;
        }
        stats.nodes_visited += 1;
        let realized = restrict(class, &seq).expect("subset indices are valid").len() as u128;
        // an overflowing threshold can never be met by an enumerable class
        let needed = match (l as u128 + 1).checked_pow(seq.len() as u32) {
            Some(v) => v,
            None => continue,
        };
        if realized >= needed {
            best = Some((seq.len() as u32, seq, realized as u64));
        }
    }
    Ok(match best {
        None => DimensionReport { value: 0, witness: None, stats },
        Some((value, instances, patterns)) => DimensionReport {
            value,
            witness: Some(DimensionWitness::ExponentialSet { instances, patterns }),
            stats,
        },
    })
}

/// Largest subset admitting per-point label pairs `(a_x, b_x)` with all
/// `2^d` mixed patterns realized.
pub fn natarajan_dimension(class: &ConceptClass, node_budget: u64) -> DimensionReport {
    let mut stats = SearchStats::default();
    let mut best: Option<(u32, Vec<usize>, Vec<(u16, u16)>)> = None;
    for seq in subsets_by_size(class.n()) {
        if let Some((v, _, _)) = &best {
            if seq.len() as u32 <= *v {
                continue;
            }
        }
        if stats.nodes_visited >= node_budget {
            stats.truncated = true;
            break;
        }
        stats.nodes_visited += 1;
        let proj = restrict(class, &seq).expect("subset indices are valid");
        let d = seq.len();
        let mut present: Vec<Vec<u16>> = alloc::vec![Vec::new(); d];
        for p in proj.patterns() {
            for (j, &v) in p.iter().enumerate() {
                if !present[j].contains(&v) {
                    present[j].push(v);
                }
            }
        }
        if present.iter().any(|labels| labels.len() < 2) {
            continue;
        }
        for labels in &mut present {
            labels.sort_unstable();
        }
        let set: BTreeSet<&Vec<u16>> = proj.patterns().iter().collect();
        let mut pairs: Vec<(u16, u16)> = Vec::with_capacity(d);
        if pick_pairs(&present, &set, &mut pairs, 0, d) {
            best = Some((d as u32, seq, pairs));
        }
    }
    match best {
        None => DimensionReport { value: 0, witness: None, stats },
        Some((value, instances, label_pairs)) => DimensionReport {
            value,
            witness: Some(DimensionWitness::NatarajanSet { instances, label_pairs }),
            stats,
        },
    }
}

fn pick_pairs(
    present: &[Vec<u16>],
    set: &BTreeSet<&Vec<u16>>,
    pairs: &mut Vec<(u16, u16)>,
    depth: usize,
    d: usize,
) -> bool {
    if depth == d {
        for mask in 0u32..(1 << d) {
            let pattern: Vec<u16> = (0..d)
                .map(|j| if mask >> j & 1 == 0 { pairs[j].0 } else { pairs[j].1 })
                .collect();
            if !set.contains(&pattern) {
                return false;
            }
        }
        return true;
    }
    let labels = &present[depth];
    for ai in 0..labels.len() {
        for bi in ai + 1..labels.len() {
            pairs.push((labels[ai], labels[bi]));
            if pick_pairs(present, set, pairs, depth + 1, d) {
                return true;
            }
            pairs.pop();
        }
    }
    false
}

/// `max over 1 <= L <= K-1 of L * ds_l_dimension(class, L)`; never
/// exceeds `bds_dimension(class)` because the constant-profile boxes are
/// among the profiles the bandit search ranges over.
pub fn bds_lower_bound_from_ds(class: &ConceptClass, node_budget: u64) -> DimensionReport {
    let mut stats = SearchStats::default();
    let mut best: Option<(u32, DimensionReport)> = None;
    for l in 1..class.k() as u32 {
        let report = ds_l_dimension(class, l, node_budget.saturating_sub(stats.nodes_visited))
            .expect("l >= 1");
        stats.nodes_visited += report.stats.nodes_visited;
        stats.cache_hits += report.stats.cache_hits;
        stats.truncated |= report.stats.truncated;
        let value = l * report.value;
        let better = match &best {
            None => true,
            Some((v, _)) => value > *v,
        };
        if better {
            best = Some((value, report));
        }
        if stats.truncated {
            break;
        }
    }
    match best {
        None => DimensionReport { value: 0, witness: None, stats },
        Some((value, inner)) => DimensionReport { value, witness: inner.witness, stats },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn full(n: usize, k: u16) -> ConceptClass {
        ConceptClass::full(n, k, 1 << 24).unwrap()
    }

    fn triangle() -> ConceptClass {
        ConceptClass::new(2, 2, vec![vec![1, 1], vec![1, 2], vec![2, 1]]).unwrap()
    }

    fn singleton() -> ConceptClass {
        ConceptClass::new(3, 2, vec![vec![3, 3]]).unwrap()
    }

    const BUDGET: u64 = 1 << 40;

    /// Order-free reference peeling: remove the first violator found,
    /// restart from scratch, repeat until stable.
    fn naive_core(patterns: &[Vec<u16>], profile: &[u32]) -> Vec<Vec<u16>> {
        let mut family: Vec<Vec<u16>> = patterns.to_vec();
        'outer: loop {
            for (idx, f) in family.iter().enumerate() {
                for (i, &need) in profile.iter().enumerate() {
                    let have = family
                        .iter()
                        .filter(|g| {
                            g[i] != f[i]
                                && g.iter().enumerate().all(|(j, &v)| j == i || v == f[j])
                        })
                        .count();
                    if (have as u32) < need {
                        family.remove(idx);
                        continue 'outer;
                    }
                }
            }
            return family;
        }
    }

    fn profiles_box(d: usize, cap: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut profile = vec![1u32; d];
        loop {
            out.push(profile.clone());
            let mut pos = d;
            let mut advanced = false;
            while pos > 0 {
                pos -= 1;
                if profile[pos] < cap {
                    profile[pos] += 1;
                    for p in &mut profile[pos + 1..] {
                        *p = 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
        out
    }

    /// Exhaustive reference for the bandit-DS value: every distinct
    /// subset, every profile in the full box, naive peeling.
    fn naive_bds(class: &ConceptClass) -> u32 {
        let mut best = 0;
        for seq in subsets_by_size(class.n()) {
            let proj = restrict(class, &seq).unwrap();
            for profile in profiles_box(seq.len(), (class.k() - 1) as u32) {
                if !naive_core(proj.patterns(), &profile).is_empty() {
                    best = best.max(profile.iter().sum());
                }
            }
        }
        best
    }

    #[test]
    fn core_of_full_cube_is_everything() {
        let proj = restrict(&full(2, 3), &[0, 1]).unwrap();
        let core = shattering_core(&proj, &NeighborProfile::new(vec![2, 2]).unwrap()).unwrap();
        assert_eq!(core.len(), 9);
    }

    #[test]
    fn core_of_triangle_peels_to_empty() {
        let proj = restrict(&triangle(), &[0, 1]).unwrap();
        let core = shattering_core(&proj, &NeighborProfile::new(vec![1, 1]).unwrap()).unwrap();
        assert!(core.is_empty());
    }

    #[test]
    fn core_on_single_coordinate_survives() {
        let proj = restrict(&triangle(), &[1]).unwrap();
        let core = shattering_core(&proj, &NeighborProfile::new(vec![1]).unwrap()).unwrap();
        assert_eq!(core, vec![vec![1], vec![2]]);
    }

    #[test]
    fn core_rejects_arity_mismatch() {
        let proj = restrict(&triangle(), &[0, 1]).unwrap();
        let err = shattering_core(&proj, &NeighborProfile::new(vec![1]).unwrap()).unwrap_err();
        assert_eq!(err, Error::ArityMismatch { expected: 2, got: 1 });
    }

    #[test]
    fn core_matches_naive_reference_on_random_classes() {
        for seed in 0..40u64 {
            let class = ConceptClass::random(3, 3, 1 + seed % 20, seed).unwrap();
            let proj = restrict(&class, &[0, 1, 2]).unwrap();
            for profile in [[1u32, 1, 1], [1, 2, 1], [2, 2, 2]] {
                let fast =
                    shattering_core(&proj, &NeighborProfile::new(profile.to_vec()).unwrap())
                        .unwrap();
                let slow = naive_core(proj.patterns(), &profile);
                assert_eq!(fast, slow, "seed {seed} profile {profile:?}");
            }
        }
    }

    #[test]
    fn is_bds_shattered_examples() {
        let w = is_bds_shattered(&full(2, 3), &[0, 1], &NeighborProfile::new(vec![2, 2]).unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(w.family.len(), 9);
        w.validate(&full(2, 3)).unwrap();

        // at most K-1 distinct neighbors can exist
        let none =
            is_bds_shattered(&full(2, 3), &[0], &NeighborProfile::new(vec![3]).unwrap()).unwrap();
        assert!(none.is_none());

        let none =
            is_bds_shattered(&triangle(), &[0, 1], &NeighborProfile::new(vec![1, 1]).unwrap())
                .unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn bds_dimension_examples() {
        assert_eq!(bds_dimension(&full(2, 3), BUDGET).value, 4);
        assert_eq!(bds_dimension(&singleton(), BUDGET).value, 0);
        assert_eq!(bds_dimension(&triangle(), BUDGET).value, 1);
    }

    #[test]
    fn bds_dimension_matches_naive_on_random_classes() {
        for seed in 0..30u64 {
            let class = ConceptClass::random(2, 3, 1 + seed % 9, 1000 + seed).unwrap();
            let fast = bds_dimension(&class, BUDGET);
            assert_eq!(fast.value, naive_bds(&class), "seed {seed}");
            if let Some(DimensionWitness::PseudoBox(w)) = &fast.witness {
                w.validate(&class).unwrap();
                assert_eq!(w.profile.total(), fast.value);
            } else {
                assert_eq!(fast.value, 0);
            }
        }
    }

    #[test]
    fn bds_tie_break_prefers_lexicographically_smaller_witness() {
        // value 2 is reached first by ({1}, [2]) and later by the
        // lex-smaller ({0,2}, [1,1]); the tie-break must keep the latter
        let class = ConceptClass::new(
            3,
            3,
            vec![
                vec![1, 1, 1],
                vec![1, 2, 1],
                vec![1, 3, 1],
                vec![1, 1, 2],
                vec![2, 1, 1],
                vec![2, 1, 2],
            ],
        )
        .unwrap();
        let report = bds_dimension(&class, BUDGET);
        assert_eq!(report.value, 2);
        let Some(DimensionWitness::PseudoBox(w)) = report.witness else {
            panic!("expected a pseudo-box witness");
        };
        assert_eq!(w.seq, vec![0, 2]);
        assert_eq!(w.profile.values(), &[1, 1]);
        w.validate(&class).unwrap();
    }

    #[test]
    fn bds_of_full_class_is_n_times_k_minus_1() {
        for n in 1..=3usize {
            for k in 2..=4u16 {
                assert_eq!(
                    bds_dimension(&full(n, k), BUDGET).value,
                    (n as u32) * (k as u32 - 1),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn ds_l_dimension_examples() {
        for (d, l) in [(1usize, 1u32), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)] {
            let class = full(d, (l + 1) as u16);
            assert_eq!(
                ds_l_dimension(&class, l, BUDGET).unwrap().value,
                d as u32,
                "d={d} l={l}"
            );
        }
        // L >= K admits no profile at all
        assert_eq!(ds_l_dimension(&full(2, 3), 3, BUDGET).unwrap().value, 0);
        assert_eq!(ds_l_dimension(&triangle(), 1, BUDGET).unwrap().value, 1);
        assert!(ds_l_dimension(&triangle(), 0, BUDGET).is_err());
    }

    #[test]
    fn exponential_dimension_examples() {
        assert_eq!(l_exponential_dimension(&full(2, 3), 2, BUDGET).unwrap().value, 2);
        assert_eq!(l_exponential_dimension(&full(2, 3), 3, BUDGET).unwrap().value, 0);
        assert_eq!(l_exponential_dimension(&singleton(), 1, BUDGET).unwrap().value, 0);
        let w = l_exponential_dimension(&full(2, 3), 1, BUDGET).unwrap();
        assert_eq!(w.value, 2);
        assert!(matches!(w.witness, Some(DimensionWitness::ExponentialSet { patterns: 9, .. })));
    }

    #[test]
    fn natarajan_examples() {
        assert_eq!(natarajan_dimension(&full(2, 2), BUDGET).value, 2);
        assert_eq!(natarajan_dimension(&full(2, 3), BUDGET).value, 2);
        assert_eq!(natarajan_dimension(&singleton(), BUDGET).value, 0);
    }

    #[test]
    fn binary_natarajan_equals_ds_one_exhaustively() {
        // All binary classes on up to 3 points: DS_1 and Natarajan agree.
        for n in 1..=3usize {
            let total = 1usize << (1usize << n);
            for mask in 1..total {
                let mut rows = Vec::new();
                for v in 0..(1usize << n) {
                    if mask >> v & 1 == 1 {
                        let row: Vec<u16> = (0..n).map(|j| ((v >> j) & 1) as u16 + 1).collect();
                        rows.push(row);
                    }
                }
                let class = ConceptClass::new(2, n, rows).unwrap();
                assert_eq!(
                    ds_l_dimension(&class, 1, BUDGET).unwrap().value,
                    natarajan_dimension(&class, BUDGET).value,
                    "n={n} mask={mask}"
                );
            }
        }
    }

    #[test]
    fn lower_bound_from_ds_examples() {
        assert_eq!(bds_lower_bound_from_ds(&full(2, 3), BUDGET).value, 4);
        assert_eq!(bds_lower_bound_from_ds(&singleton(), BUDGET).value, 0);
        assert_eq!(bds_lower_bound_from_ds(&triangle(), BUDGET).value, 1);
    }

    #[test]
    fn lower_bound_never_exceeds_bds() {
        for seed in 0..25u64 {
            let class = ConceptClass::random(3, 4, 1 + seed % 30, 7 + seed).unwrap();
            assert!(
                bds_lower_bound_from_ds(&class, BUDGET).value
                    <= bds_dimension(&class, BUDGET).value,
                "seed {seed}"
            );
        }
    }

    #[test]
    fn repeated_instances_never_shatter_more() {
        // Exhaustive over sequences with repeats (length <= 4) on small
        // random classes: the best total over sequences equals the best
        // over distinct subsets.
        fn sequences(n: usize, max_len: usize) -> Vec<Vec<usize>> {
            let mut out: Vec<Vec<usize>> = Vec::new();
            let mut frontier: Vec<Vec<usize>> = vec![vec![]];
            for _ in 0..max_len {
                let mut next = Vec::new();
                for s in &frontier {
                    for i in 0..n {
                        let mut t = s.clone();
                        t.push(i);
                        next.push(t);
                    }
                }
                out.extend(next.iter().cloned());
                frontier = next;
            }
            out
        }
        for seed in 0..8u64 {
            let class = ConceptClass::random(3, 3, 1 + seed % 12, 31 + seed).unwrap();
            let distinct = bds_dimension(&class, BUDGET).value;
            let mut with_repeats = 0u32;
            for seq in sequences(class.n(), 4) {
                let proj = restrict(&class, &seq).unwrap();
                for profile in profiles_box(seq.len(), (class.k() - 1) as u32) {
                    if !naive_core(proj.patterns(), &profile).is_empty() {
                        with_repeats = with_repeats.max(profile.iter().sum());
                    }
                }
            }
            assert_eq!(distinct, with_repeats, "seed {seed}");
        }
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let report = bds_dimension(&full(2, 3), 2);
        assert!(report.stats.truncated);
        assert!(report.value <= 4);
        let exact = bds_dimension(&full(2, 3), BUDGET);
        assert!(!exact.stats.truncated);
    }

    #[test]
    fn profile_feasibility_is_downward_closed() {
        for seed in 0..20u64 {
            let class = ConceptClass::random(2, 4, 2 + seed % 14, 97 + seed).unwrap();
            let proj = restrict(&class, &[0, 1]).unwrap();
            let feasible = |p: &[u32]| !naive_core(proj.patterns(), p).is_empty();
            for a in 1..=3u32 {
                for b in 1..=3u32 {
                    if feasible(&[a, b]) {
                        for a2 in 1..=a {
                            for b2 in 1..=b {
                                assert!(feasible(&[a2, b2]), "seed {seed} {a},{b} -> {a2},{b2}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn peel_order_confluence() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        // Randomized removal order reaches the same fixed point.
        for seed in 0..20u64 {
            let class = ConceptClass::random(3, 3, 4 + seed % 18, 55 + seed).unwrap();
            let proj = restrict(&class, &[0, 1, 2]).unwrap();
            let profile = [1u32, 1, 2];
            let canonical =
                shattering_core(&proj, &NeighborProfile::new(profile.to_vec()).unwrap()).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut family: Vec<Vec<u16>> = proj.patterns().to_vec();
            loop {
                let mut violators: Vec<usize> = (0..family.len())
                    .filter(|&idx| {
                        let f = &family[idx];
                        profile.iter().enumerate().any(|(i, &need)| {
                            let have = family
                                .iter()
                                .filter(|g| {
                                    g[i] != f[i]
                                        && g.iter()
                                            .enumerate()
                                            .all(|(j, &v)| j == i || v == f[j])
                                })
                                .count();
                            (have as u32) < need
                        })
                    })
                    .collect();
                if violators.is_empty() {
                    break;
                }
                violators.shuffle(&mut rng);
                family.remove(violators[0]);
            }
            assert_eq!(family, canonical, "seed {seed}");
        }
    }
}
