//! List learners built on the one-inclusion orientation.
//!
//! The transductive predictor restricts the class to the sample instances
//! plus the query, solves the min-max L-outdegree orientation, locates the
//! edge consistent with the observed labels in the query direction, and
//! emits the selected vertices' labels there. Predictions are computed on
//! the deduplicated, sorted instance set: repeated coordinates of the raw
//! sequence only ever contribute singleton edges (a repeat admits no
//! neighbors), so the deduplicated graph is prediction-equivalent — and it
//! makes the predictor permutation-invariant by construction.
//!
//! On top of the predictor sit list majority voting with deterministic
//! truncation/padding, the prefix-majority wrapper that votes predictors
//! trained on growing sample prefixes, and exact (rational) list error and
//! leave-one-out error evaluation.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::concept_class::{restrict, ConceptClass};
use crate::error::Error;
use crate::one_inclusion::{build_graph, min_max_outdegree_orientation};
use crate::rat::{rat, rat_int, rat_to_f64, Rat};
use crate::Result;

/// One labeled example: (instance index, label).
pub type LabeledPair = (usize, u16);

/// Evaluation table from instances to bounded-size label lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListHypothesis {
    cap: usize,
    lists: Vec<Vec<u16>>,
}

impl ListHypothesis {
    /// Validates that every list is duplicate-free and no longer than
    /// `cap`. Lists are ordered (vote output first, padding appended), not
    /// sorted.
    pub fn new(cap: usize, lists: Vec<Vec<u16>>) -> Result<Self> {
        for list in &lists {
            if list.len() > cap {
                return Err(Error::InvalidParameter(alloc::format!(
                    "list of size {} exceeds cap {cap}",
                    list.len()
                )));
            }
            let mut sorted = list.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter("list labels must be distinct".into()));
            }
        }
        Ok(Self { cap, lists })
    }

    /// The all-labels predictor (each list is `1..=k`).
    pub fn uniform_full(n: usize, k: u16) -> Self {
        let all: Vec<u16> = (1..=k).collect();
        Self { cap: k as usize, lists: alloc::vec![all; n] }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn get(&self, x: usize) -> &[u16] {
        &self.lists[x]
    }

    pub fn lists(&self) -> &[Vec<u16>] {
        &self.lists
    }

    pub fn domain_size(&self) -> usize {
        self.lists.len()
    }

    /// Deterministic truncation to a smaller cap: keeps the smallest
    /// labels of every list.
    pub fn truncate_to(&self, cap: usize) -> Self {
        let lists = self
            .lists
            .iter()
            .map(|l| l.iter().copied().take(cap).collect())
            .collect();
        Self { cap, lists }
    }
}

/// A finite distribution over instances, paired with its target concept.
/// Masses are exact rationals, nonnegative, and must sum to one within
/// 1e-12.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDistribution {
    masses: Vec<Rat>,
    cumulative: Vec<f64>,
    target: Vec<u16>,
}

impl FiniteDistribution {
    pub fn new(masses: Vec<Rat>, target: Vec<u16>, class: &ConceptClass) -> Result<Self> {
        if masses.len() != class.n() {
            return Err(Error::DomainMismatch { expected: class.n(), got: masses.len() });
        }
        if target.len() != class.n() {
            return Err(Error::DomainMismatch { expected: class.n(), got: target.len() });
        }
        if masses.iter().any(|m| m < &rat_int(0)) {
            return Err(Error::InvalidMasses("negative mass".into()));
        }
        let total: Rat = masses.iter().sum();
        let tolerance = rat(1, 1_000_000_000_000);
        let deviation = if total >= rat_int(1) { total.clone() - rat_int(1) } else { rat_int(1) - total.clone() };
        if deviation > tolerance {
            return Err(Error::InvalidMasses(alloc::format!(
                "masses sum to {} which is farther than 1e-12 from 1",
                crate::rat::rat_to_string(&total)
            )));
        }
        if !class.contains(&target) {
            return Err(Error::TargetNotInClass);
        }
        let mut cumulative = Vec::with_capacity(masses.len());
        let mut acc = 0.0f64;
        for m in &masses {
            acc += rat_to_f64(m);
            cumulative.push(acc);
        }
        Ok(Self { masses, cumulative, target })
    }

    pub fn n(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[Rat] {
        &self.masses
    }

    pub fn mass(&self, x: usize) -> &Rat {
        &self.masses[x]
    }

    pub fn target(&self) -> &[u16] {
        &self.target
    }

    pub fn target_label(&self, x: usize) -> u16 {
        self.target[x]
    }

    /// Draws `(x, c*(x))` by inverse CDF over the float image of the
    /// masses; deterministic given the generator state.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> (usize, u16) {
        let u: f64 = rng.gen();
        let mut idx = self.cumulative.partition_point(|&c| c <= u);
        if idx >= self.masses.len() {
            idx = self
                .masses
                .iter()
                .rposition(|m| m > &rat_int(0))
                .unwrap_or(self.masses.len() - 1);
        }
        (idx, self.target[idx])
    }
}

/// Collapses a sample to its distinct (instance -> label) observations;
/// conflicting labels at one instance mean no consistent hypothesis
/// exists.
pub fn dedup_sample(class: &ConceptClass, sample: &[LabeledPair]) -> Result<BTreeMap<usize, u16>> {
    let mut map = BTreeMap::new();
    for &(x, y) in sample {
        if x >= class.n() {
            return Err(Error::InstanceOutOfRange { index: x, domain: class.n() });
        }
        if y == 0 || y > class.k() {
            return Err(Error::LabelOutOfRange { label: y, k: class.k() });
        }
        match map.insert(x, y) {
            Some(prev) if prev != y => return Err(Error::NonRealizableSample),
            _ => {}
        }
    }
    Ok(map)
}

fn consistent_exists(class: &ConceptClass, map: &BTreeMap<usize, u16>) -> bool {
    class.hypotheses().iter().any(|h| map.iter().all(|(&x, &y)| h[x] == y))
}

/// Prediction from a deduplicated observation map. Callers must have
/// verified the map is realizable.
fn predict_from_map(
    class: &ConceptClass,
    map: &BTreeMap<usize, u16>,
    x: usize,
    l: u32,
) -> Result<Vec<u16>> {
    if let Some(&y) = map.get(&x) {
        // the consistent edge pins the observed label
        return Ok(alloc::vec![y]);
    }
    let mut seq: Vec<usize> = map.keys().copied().collect();
    seq.push(x);
    seq.sort_unstable();
    let pos = seq.binary_search(&x).expect("query is in the sequence");
    let proj = restrict(class, &seq)?;
    let graph = build_graph(&proj);
    let (orientation, _) = min_max_outdegree_orientation(&graph, l);
    let off_pattern: Vec<u16> = seq.iter().filter(|&&z| z != x).map(|z| map[z]).collect();
    let edge = graph.edge_lookup(pos, &off_pattern).ok_or(Error::NonRealizableSample)?;
    let labels: Vec<u16> = orientation.selected[edge]
        .iter()
        .map(|&v| graph.vertices()[v][pos])
        .collect();
    debug_assert!(labels.windows(2).all(|w| w[0] < w[1]));
    Ok(labels)
}

/// The one-inclusion list prediction for query `x` given a realizable
/// sample: restrict to sample instances plus `x`, orient the graph with
/// minimum maximum L-outdegree, read the selected labels off the edge
/// consistent with the observations.
pub fn one_inclusion_list_predict(
    class: &ConceptClass,
    sample: &[LabeledPair],
    x: usize,
    l: u32,
) -> Result<Vec<u16>> {
    if l == 0 {
        return Err(Error::InvalidParameter("list size L must be at least 1".into()));
    }
    if x >= class.n() {
        return Err(Error::InstanceOutOfRange { index: x, domain: class.n() });
    }
    let map = dedup_sample(class, sample)?;
    if !consistent_exists(class, &map) {
        return Err(Error::NonRealizableSample);
    }
    predict_from_map(class, &map, x, l)
}

/// Labels contained in at least half of the lists, ascending.
pub fn majority_vote(lists: &[Vec<u16>]) -> Vec<u16> {
    let mut counts: BTreeMap<u16, usize> = BTreeMap::new();
    for list in lists {
        for &y in list {
            *counts.entry(y).or_insert(0) += 1;
        }
    }
    counts
        .into_iter()
        .filter(|&(_, c)| 2 * c >= lists.len())
        .map(|(y, _)| y)
        .collect()
}

/// Appends the smallest labels of `1..=k` not already present until the
/// list reaches `target`.
pub fn pad_list(list: &[u16], target: usize, k: u16) -> Result<Vec<u16>> {
    if target > k as usize {
        return Err(Error::PadTargetExceedsLabels { target, k });
    }
    if list.len() > target {
        return Err(Error::InvalidParameter(alloc::format!(
            "list of size {} longer than pad target {target}",
            list.len()
        )));
    }
    let mut out = list.to_vec();
    for y in 1..=k {
        if out.len() == target {
            break;
        }
        if !list.contains(&y) {
            out.push(y);
        }
    }
    Ok(out)
}

/// Which prefixes join the majority vote: up to the penultimate prefix
/// `n-1`, or up to the full sample `n`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum VoteRange {
    /// Prefixes `ceil(n/4) ..= n-1` (clamped to at least one voter).
    #[default]
    StopBeforeLast,
    /// Prefixes `ceil(n/4) ..= n`.
    IncludeLast,
}

/// Prefix-majority output: the hypothesis plus how many majority lists
/// had to be truncated to the cap. A majority over v lists of size at
/// most L has at most 2L-1 labels for odd v but can reach 2L for even
/// v (and more below three voters), so truncation is a real, counted
/// event rather than dead code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixMajorityOutput {
    pub hypothesis: ListHypothesis,
    pub truncations: u64,
}

/// Majority vote of one-inclusion predictors trained on the sample
/// prefixes `ceil(n/4)` through `n-1` (or `n`), padded to exactly
/// `min(2L-1, K)`. Predictions are memoized per distinct observation map
/// over the finite domain; the map changes only when a prefix first
/// reveals a new instance, so at most `n_domain + 1` solver runs happen
/// per query.
pub fn prefix_majority_learner(
    class: &ConceptClass,
    sample: &[LabeledPair],
    l: u32,
    range: VoteRange,
) -> Result<PrefixMajorityOutput> {
    if l == 0 {
        return Err(Error::InvalidParameter("list size L must be at least 1".into()));
    }
    let n = sample.len();
    if n == 0 {
        return Err(Error::InvalidParameter("prefix majority needs a nonempty sample".into()));
    }
    let full_map = dedup_sample(class, sample)?;
    if !consistent_exists(class, &full_map) {
        return Err(Error::NonRealizableSample);
    }
    let lo = n.div_ceil(4);
    let hi = match range {
        VoteRange::StopBeforeLast => (n - 1).max(lo),
        VoteRange::IncludeLast => n,
    };
    // maps per voter prefix, grouped by identity: the observation map only
    // grows at prefixes revealing a new instance
    let mut groups: Vec<(BTreeMap<usize, u16>, u64)> = Vec::new();
    let mut current: BTreeMap<usize, u16> = BTreeMap::new();
    let mut boundaries: Vec<(usize, BTreeMap<usize, u16>)> = Vec::new(); // (prefix length threshold, map)
    boundaries.push((0, current.clone()));
    for (t, &(x, y)) in sample.iter().enumerate() {
        if !current.contains_key(&x) {
            current.insert(x, y);
            boundaries.push((t + 1, current.clone()));
        }
    }
    for (idx, (start, map)) in boundaries.iter().enumerate() {
        let end = boundaries.get(idx + 1).map(|(s, _)| s - 1).unwrap_or(n);
        // voters t with this map satisfy start <= t <= end and lo <= t <= hi
        let a = (*start).max(lo);
        let b = end.min(hi);
        if a <= b {
            groups.push((map.clone(), (b - a + 1) as u64));
        }
    }
    let voters: u64 = groups.iter().map(|(_, w)| w).sum();
    debug_assert_eq!(voters, (hi - lo + 1) as u64);
    let cap = (2 * l as usize - 1).min(class.k() as usize);
    let mut truncations = 0u64;
    let mut lists = Vec::with_capacity(class.n());
    let mut memo: BTreeMap<(usize, usize), Vec<u16>> = BTreeMap::new(); // (group idx, x) -> prediction
    for x in 0..class.n() {
        let mut counts: BTreeMap<u16, u64> = BTreeMap::new();
        for (gi, (map, weight)) in groups.iter().enumerate() {
            let pred = match memo.get(&(gi, x)) {
                Some(p) => p.clone(),
                None => {
                    let p = predict_from_map(class, map, x, l)?;
                    memo.insert((gi, x), p.clone());
                    p
                }
            };
            for y in pred {
                *counts.entry(y).or_insert(0) += weight;
            }
        }
        let mut majority: Vec<u16> = counts
            .into_iter()
            .filter(|&(_, c)| 2 * c >= voters)
            .map(|(y, _)| y)
            .collect();
        if majority.len() > cap {
            truncations += 1;
            majority.truncate(cap);
        }
        lists.push(pad_list(&majority, cap, class.k())?);
    }
    Ok(PrefixMajorityOutput { hypothesis: ListHypothesis::new(cap, lists)?, truncations })
}

/// Exact list error: the mass of instances whose target label the list
/// misses.
pub fn list_error(hypothesis: &ListHypothesis, dist: &FiniteDistribution) -> Result<Rat> {
    if hypothesis.domain_size() != dist.n() {
        return Err(Error::DomainMismatch { expected: dist.n(), got: hypothesis.domain_size() });
    }
    let mut err = rat_int(0);
    for x in 0..dist.n() {
        if !hypothesis.get(x).contains(&dist.target_label(x)) {
            err += dist.mass(x).clone();
        }
    }
    Ok(err)
}

/// Exact leave-one-out error: the average over all hold-out positions of
/// "the held-out label is missing from the prediction trained on the
/// rest". Positions holding identical pairs give identical terms, so the
/// average is computed per distinct pair with multiplicity.
pub fn loo_error_exact(class: &ConceptClass, sample: &[LabeledPair], l: u32) -> Result<Rat> {
    if l == 0 {
        return Err(Error::InvalidParameter("list size L must be at least 1".into()));
    }
    if sample.is_empty() {
        return Err(Error::InvalidParameter("leave-one-out needs a nonempty sample".into()));
    }
    let full_map = dedup_sample(class, sample)?;
    if !consistent_exists(class, &full_map) {
        return Err(Error::NonRealizableSample);
    }
    let mut multiplicity: BTreeMap<LabeledPair, u64> = BTreeMap::new();
    for &pair in sample {
        *multiplicity.entry(pair).or_insert(0) += 1;
    }
    let mut misses = 0u64;
    for (&(x, y), &count) in &multiplicity {
        let mut train = full_map.clone();
        if count == 1 {
            train.remove(&x);
        }
        let pred = predict_from_map(class, &train, x, l)?;
        if !pred.contains(&y) {
            misses += count;
        }
    }
    Ok(rat(misses as i64, sample.len() as i64))
}
