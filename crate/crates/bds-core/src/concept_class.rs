//! Finite concept classes, restrictions, and neighbor queries.
//!
//! A concept class is a deduplicated, lexicographically sorted set of
//! label vectors over a finite instance domain. Labels are `1..=k`;
//! instance indices are `0..n`. Coordinates of projected vectors are
//! likewise zero-based positions into the projecting sequence. Every
//! value is immutable after construction and all iteration orders are
//! canonical, so outputs are bitwise reproducible.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::seeding::{rng_for, streams};
use crate::Result;

/// Ordered list of instance indices; repeats are permitted at the type
/// level (operations that cannot use them say so).
pub type InstanceSequence = Vec<usize>;

/// A finite concept class: `hypotheses` is sorted and duplicate-free,
/// every label lies in `1..=k`, every vector has length `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConceptClass {
    k: u16,
    n: usize,
    hypotheses: Vec<Vec<u16>>,
}

impl<'de> Deserialize<'de> for ConceptClass {
    fn deserialize<D>(deserializer: D) -> core::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw {
            k: u16,
            n: usize,
            hypotheses: Vec<Vec<u16>>,
        }
        let raw = Raw::deserialize(deserializer)?;
        ConceptClass::new(raw.k, raw.n, raw.hypotheses).map_err(serde::de::Error::custom)
    }
}

impl ConceptClass {
    /// Builds a class from raw vectors, validating labels, lengths, and
    /// rejecting duplicates (duplicates indicate corpus bugs, so they are
    /// an error rather than silently collapsed).
    pub fn new(k: u16, n: usize, mut hypotheses: Vec<Vec<u16>>) -> Result<Self> {
        if k < 2 {
            return Err(Error::LabelCountTooSmall { k });
        }
        if hypotheses.is_empty() {
            return Err(Error::EmptyClass);
        }
        for h in &hypotheses {
            if h.len() != n {
                return Err(Error::HypothesisLength { expected: n, got: h.len() });
            }
            for &label in h {
                if label == 0 || label > k {
                    return Err(Error::LabelOutOfRange { label, k });
                }
            }
        }
        hypotheses.sort_unstable();
        if hypotheses.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateHypothesis);
        }
        Ok(Self { k, n, hypotheses })
    }

    /// Number of labels K.
    pub fn k(&self) -> u16 {
        self.k
    }

    /// Domain size n.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Sorted hypothesis vectors.
    pub fn hypotheses(&self) -> &[Vec<u16>] {
        &self.hypotheses
    }

    /// Number of hypotheses.
    pub fn len(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hypotheses.is_empty()
    }

    /// Membership test (binary search over the sorted store).
    pub fn contains(&self, h: &[u16]) -> bool {
        self.hypotheses.binary_search_by(|v| v.as_slice().cmp(h)).is_ok()
    }

    /// All `k^n` vectors, provided that count stays within `cap`.
    pub fn full(n: usize, k: u16, cap: u128) -> Result<Self> {
        if k < 2 {
            return Err(Error::LabelCountTooSmall { k });
        }
        let total = (k as u128).checked_pow(n as u32).ok_or(Error::EnumerationCapExceeded {
            required: u128::MAX,
            cap,
        })?;
        if total > cap {
            return Err(Error::EnumerationCapExceeded { required: total, cap });
        }
        let mut hypotheses = Vec::with_capacity(total as usize);
        let mut current = alloc::vec![1u16; n];
        loop {
            hypotheses.push(current.clone());
            // mixed-radix increment, most significant coordinate first
            let mut pos = n;
            loop {
                if pos == 0 {
                    return Self::new(k, n, hypotheses);
                }
                pos -= 1;
                if current[pos] < k {
                    current[pos] += 1;
                    for c in &mut current[pos + 1..] {
                        *c = 1;
                    }
                    break;
                }
            }
        }
    }

    /// Exactly `count` distinct vectors chosen uniformly without
    /// replacement among all `k^n`, deterministic in `seed`.
    pub fn random(n: usize, k: u16, count: u64, seed: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::LabelCountTooSmall { k });
        }
        let total = (k as u128)
            .checked_pow(n as u32)
            .ok_or(Error::CountOutOfRange { count, max: u128::MAX })?;
        if count == 0 || (count as u128) > total {
            return Err(Error::CountOutOfRange { count, max: total });
        }
        let mut rng = rng_for(seed, streams::CORPUS, 0);
        // Floyd's sampling: uniform `count`-subset of 0..total.
        let mut chosen = alloc::collections::BTreeSet::new();
        let start = total - count as u128;
        for j in start..total {
            let t = gen_range_u128(&mut rng, j + 1);
            if !chosen.insert(t) {
                chosen.insert(j);
            }
        }
        let hypotheses = chosen.into_iter().map(|idx| decode_vector(idx, n, k)).collect();
        Self::new(k, n, hypotheses)
    }
}

fn gen_range_u128<R: Rng>(rng: &mut R, bound: u128) -> u128 {
    if bound <= u64::MAX as u128 {
        rng.gen_range(0..bound as u64) as u128
    } else {
        // Desk-scale classes never get here, but stay correct: rejection
        // sampling over the full width.
        loop {
            let hi = rng.gen::<u64>() as u128;
            let lo = rng.gen::<u64>() as u128;
            let v = (hi << 64) | lo;
            if v < u128::MAX - (u128::MAX % bound) {
                return v % bound;
            }
        }
    }
}

fn decode_vector(mut index: u128, n: usize, k: u16) -> Vec<u16> {
    let mut v = alloc::vec![1u16; n];
    for pos in (0..n).rev() {
        v[pos] = (index % k as u128) as u16 + 1;
        index /= k as u128;
    }
    v
}

/// Deduplicated restriction of a class to an instance sequence. Vectors
/// have length `|seq|`; every vector extends to a hypothesis of the
/// parent class by construction. Serializes for reports; never
/// deserialized (restrictions are recomputed, not loaded).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectedClass {
    k: u16,
    arity: usize,
    patterns: Vec<Vec<u16>>,
}

/// Projects every hypothesis onto `seq` and deduplicates; output order is
/// canonical (lexicographic).
pub fn restrict(class: &ConceptClass, seq: &[usize]) -> Result<ProjectedClass> {
    for &i in seq {
        if i >= class.n() {
            return Err(Error::InstanceOutOfRange { index: i, domain: class.n() });
        }
    }
    let mut patterns: Vec<Vec<u16>> = class
        .hypotheses()
        .iter()
        .map(|h| seq.iter().map(|&i| h[i]).collect())
        .collect();
    patterns.sort_unstable();
    patterns.dedup();
    Ok(ProjectedClass { k: class.k(), arity: seq.len(), patterns })
}

impl ProjectedClass {
    /// Label count K inherited from the parent class.
    pub fn k(&self) -> u16 {
        self.k
    }

    /// Length of the projected vectors.
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Sorted, deduplicated pattern vectors.
    pub fn patterns(&self) -> &[Vec<u16>] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn contains(&self, f: &[u16]) -> bool {
        self.patterns.binary_search_by(|v| v.as_slice().cmp(f)).is_ok()
    }

    /// Reinterprets the projection as a concept class over `arity`
    /// instances (projections are valid classes in their own right, which
    /// lets dimension searches recurse into restrictions).
    pub fn to_class(&self) -> Result<ConceptClass> {
        ConceptClass::new(self.k, self.arity, self.patterns.clone())
    }

    /// All `g` in the projection with `g[coord] != f[coord]` and
    /// `g[j] == f[j]` elsewhere. Distinct neighbors carry pairwise
    /// distinct labels at `coord`, so at most `k - 1` are returned.
    pub fn i_neighbors(&self, f: &[u16], coord: usize) -> Result<Vec<Vec<u16>>> {
        if coord >= self.arity {
            return Err(Error::CoordinateOutOfRange { index: coord, arity: self.arity });
        }
        if !self.contains(f) {
            return Err(Error::VectorNotInProjection);
        }
        Ok(self
            .patterns
            .iter()
            .filter(|g| {
                g[coord] != f[coord]
                    && g.iter().enumerate().all(|(j, &v)| j == coord || v == f[j])
            })
            .cloned()
            .collect())
    }

    /// Groups pattern indices by their off-`coord` pattern. Two patterns
    /// share a bucket iff they are equal or `coord`-neighbors; buckets in
    /// key order are the direction-`coord` edges of the one-inclusion
    /// graph.
    pub fn direction_buckets(&self, coord: usize) -> BTreeMap<Vec<u16>, Vec<usize>> {
        let mut buckets: BTreeMap<Vec<u16>, Vec<usize>> = BTreeMap::new();
        for (idx, p) in self.patterns.iter().enumerate() {
            let mut off = p.clone();
            off.remove(coord);
            buckets.entry(off).or_default().push(idx);
        }
        buckets
    }
}
