//! Bandit-feedback protocol and the cascading list learner.
//!
//! The protocol: each round the environment draws `(x, y)` from a finite
//! realizable distribution, the learner predicts a label, and only the
//! bit `[prediction == y]` comes back. The cascade runs `floor(log2 K)`
//! epochs; in epoch `t` it explores uniformly inside the previous list
//! predictor, keeps exactly the positively confirmed pairs, and trains a
//! prefix-majority list predictor of list size `L_t = ceil(K / 2^(t+1))`
//! on them, so the working list roughly halves per epoch until a
//! single-label hypothesis remains.
//!
//! Epoch budgets follow the schedule
//! `m_t - m_{t-1} = ceil(scale * (4 L_{t-1} / (1 - (t-1) eps / log2 K)) *
//! (n_t + log2(2 log2 K / delta)))` with
//! `n_t = 10 (6 d_(ceil(L_{t-1}/2)) log2 K + log2(2 log2 K / delta)) log2 K / eps`,
//! where `d_l` is the DS dimension of the class at list size `l`. At
//! `scale = 1` the budgets match those formulas exactly; the scale knob
//! exists because the constants make full-fidelity runs infeasible for
//! larger K. All logarithms are base 2.
//!
//! Every random choice derives from (master seed, round index), so a
//! round's draw never depends on batching or threading. Learners are
//! [`BanditPolicy`] values driven by [`run_protocol`]; the cascade is one
//! such policy, and the hard-instance baselines are others.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::concept_class::ConceptClass;
use crate::error::Error;
use crate::list_learning::{
    list_error, prefix_majority_learner, FiniteDistribution, LabeledPair, ListHypothesis,
    VoteRange,
};
use crate::rat::{rat_serde, Rat};
use crate::seeding::{rng_for, streams};
use crate::Result;

/// A finite realizable environment: distribution plus working class plus
/// the master seed all round randomness derives from.
#[derive(Debug, Clone)]
pub struct Environment {
    pub class: ConceptClass,
    pub dist: FiniteDistribution,
    pub seed: u64,
}

impl Environment {
    pub fn new(class: ConceptClass, dist: FiniteDistribution, seed: u64) -> Result<Self> {
        if dist.n() != class.n() {
            return Err(Error::DomainMismatch { expected: class.n(), got: dist.n() });
        }
        if !class.contains(dist.target()) {
            return Err(Error::TargetNotInClass);
        }
        Ok(Self { class, dist, seed })
    }

    /// One protocol draw: `x` from the masses, `y = c*(x)`.
    pub fn sample_round<R: Rng>(&self, rng: &mut R) -> (usize, u16) {
        self.dist.sample(rng)
    }
}

/// One row of the interaction record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub round: u64,
    pub instance: usize,
    pub predicted: u16,
    pub feedback: bool,
}

/// The resolved epoch plan: list sizes `L_0..=L_T`, per-epoch round
/// budgets, and collection targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochSchedule {
    pub k: u16,
    pub epsilon: f64,
    pub delta: f64,
    pub scale: f64,
    /// `L_t = ceil(K / 2^(t+1))` for `t = 0..=epochs`.
    pub list_sizes: Vec<u32>,
    /// Rounds granted to epoch `t` (index `t-1`).
    pub budgets: Vec<u64>,
    /// Unrounded collection targets `n_t` (index `t-1`).
    pub targets: Vec<f64>,
    /// DS dimension values used, keyed by list size.
    pub ds_values: BTreeMap<u32, u32>,
}

impl EpochSchedule {
    pub fn epochs(&self) -> usize {
        self.budgets.len()
    }

    pub fn total_rounds(&self) -> u64 {
        self.budgets.iter().sum()
    }
}

/// List sizes whose DS dimension the schedule for label count `k` needs:
/// `ceil(L_(t-1) / 2)` for every epoch `t`.
pub fn required_ds_list_sizes(k: u16) -> Vec<u32> {
    let epochs = (k as u32).ilog2() as usize;
    let mut needed: Vec<u32> = (0..epochs)
        .map(|t| {
            let l_prev = (k as u32).div_ceil(1 << (t + 1));
            l_prev.div_ceil(2)
        })
        .collect();
    needed.sort_unstable();
    needed.dedup();
    needed
}

/// Builds the epoch schedule. At `scale = 1` the budgets match the
/// formulas in the module docs exactly (ceiling-rounded).
pub fn epoch_schedule(
    k: u16,
    epsilon: f64,
    delta: f64,
    ds_values: &BTreeMap<u32, u32>,
    scale: f64,
) -> Result<EpochSchedule> {
    if k < 2 {
        return Err(Error::LabelCountTooSmall { k });
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter("epsilon must lie in (0, 1)".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter("delta must lie in (0, 1)".into()));
    }
    if !(scale > 0.0 && scale <= 1.0) {
        return Err(Error::InvalidParameter("scale must lie in (0, 1]".into()));
    }
    let epochs = (k as u32).ilog2() as usize;
    let list_sizes: Vec<u32> = (0..=epochs).map(|t| (k as u32).div_ceil(1u32 << (t + 1))).collect();
    debug_assert_eq!(*list_sizes.last().expect("k >= 2 has epochs >= 1"), 1);
    let log2k = libm::log2(k as f64);
    let log_term = libm::log2(2.0 * log2k / delta);
    let mut budgets = Vec::with_capacity(epochs);
    let mut targets = Vec::with_capacity(epochs);
    for t in 1..=epochs {
        let l_prev = list_sizes[t - 1];
        let need = l_prev.div_ceil(2);
        let d = *ds_values.get(&need).ok_or(Error::MissingDimensionValue { list_size: need })?;
        let denom = 1.0 - ((t - 1) as f64) * epsilon / log2k;
        if denom <= 0.0 {
            return Err(Error::DegenerateSchedule { epoch: t });
        }
        let n_t = 10.0 * (6.0 * d as f64 * log2k + log_term) * log2k / epsilon;
        let raw = (4.0 * l_prev as f64 / denom) * (n_t + log_term);
        let budget = libm::ceil(scale * raw);
        if !(budget.is_finite() && budget >= 1.0) {
            return Err(Error::InvalidParameter("schedule budget overflows".into()));
        }
        budgets.push(budget as u64);
        targets.push(n_t);
    }
    Ok(EpochSchedule {
        k,
        epsilon,
        delta,
        scale,
        list_sizes,
        budgets,
        targets,
        ds_values: ds_values.clone(),
    })
}

/// An online bandit learner: predicts, digests feedback, and finally
/// emits a single-label hypothesis.
pub trait BanditPolicy {
    fn predict(&mut self, x: usize, rng: &mut dyn RngCore) -> u16;
    fn observe(&mut self, x: usize, predicted: u16, feedback: bool) -> Result<()>;
    fn finish(&mut self) -> Result<Vec<u16>>;
}

/// Environment-side record of one protocol run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolRun {
    pub transcript: Vec<TranscriptEntry>,
    /// How often each instance was drawn.
    pub draw_counts: Vec<u64>,
}

/// Plays exactly `rounds` protocol rounds between `env` and `policy`.
/// Round `i` derives its generator from `(env.seed, ROUND, i)`.
pub fn run_protocol(
    env: &Environment,
    policy: &mut dyn BanditPolicy,
    rounds: u64,
    record_transcript: bool,
) -> Result<ProtocolRun> {
    let mut draw_counts = alloc::vec![0u64; env.class.n()];
    let mut transcript = Vec::new();
    for round in 1..=rounds {
        let mut rng = rng_for(env.seed, streams::ROUND, round);
        let (x, y) = env.sample_round(&mut rng);
        draw_counts[x] += 1;
        let predicted = policy.predict(x, &mut rng);
        let feedback = predicted == y;
        policy.observe(x, predicted, feedback)?;
        if record_transcript {
            transcript.push(TranscriptEntry { round, instance: x, predicted, feedback });
        }
    }
    Ok(ProtocolRun { transcript, draw_counts })
}

/// What one closed epoch leaves behind.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub list_size: u32,
    pub rounds: u64,
    pub collected: u64,
    pub target: u64,
    pub shortfall: bool,
    pub zero_collection: bool,
    pub truncations: u64,
    /// The predictor trained at the end of this epoch.
    pub predictor: ListHypothesis,
}

/// The cascade as an online policy. Epoch boundaries are tracked by
/// round count; a protocol that ends early simply leaves later epochs
/// with zero rounds, which triggers the truncation fallback.
pub struct CascadePolicy {
    class: ConceptClass,
    schedule: EpochSchedule,
    vote_range: VoteRange,
    current: ListHypothesis,
    closed_epochs: usize,
    round_in_epoch: u64,
    collected: Vec<LabeledPair>,
    records: Vec<EpochRecord>,
}

impl CascadePolicy {
    pub fn new(class: ConceptClass, schedule: EpochSchedule, vote_range: VoteRange) -> Result<Self> {
        if schedule.k != class.k() {
            return Err(Error::InvalidParameter(alloc::format!(
                "schedule built for K={} but class has K={}",
                schedule.k,
                class.k()
            )));
        }
        let current = ListHypothesis::uniform_full(class.n(), class.k());
        Ok(Self {
            class,
            schedule,
            vote_range,
            current,
            closed_epochs: 0,
            round_in_epoch: 0,
            collected: Vec::new(),
            records: Vec::new(),
        })
    }

    pub fn epoch_records(&self) -> &[EpochRecord] {
        &self.records
    }

    fn close_epoch(&mut self) -> Result<()> {
        let t = self.closed_epochs + 1;
        let l_t = self.schedule.list_sizes[t];
        let cap_t = (2 * l_t as usize - 1).min(self.class.k() as usize);
        let (next, truncations, zero_collection) = if self.collected.is_empty() {
            // nothing confirmed: deterministically truncate the previous
            // list instead of learning
            (self.current.truncate_to(cap_t), 0, true)
        } else {
            let out = prefix_majority_learner(&self.class, &self.collected, l_t, self.vote_range)?;
            (out.hypothesis, out.truncations, false)
        };
        let target = libm::ceil(self.schedule.targets[t - 1]) as u64;
        self.records.push(EpochRecord {
            epoch: t,
            list_size: l_t,
            rounds: self.round_in_epoch,
            collected: self.collected.len() as u64,
            target,
            shortfall: (self.collected.len() as u64) < target,
            zero_collection,
            truncations,
            predictor: next.clone(),
        });
        self.current = next;
        self.closed_epochs += 1;
        self.round_in_epoch = 0;
        self.collected.clear();
        Ok(())
    }
}

impl BanditPolicy for CascadePolicy {
    fn predict(&mut self, x: usize, rng: &mut dyn RngCore) -> u16 {
        let list = self.current.get(x);
        list[rng.gen_range(0..list.len())]
    }

    fn observe(&mut self, x: usize, predicted: u16, feedback: bool) -> Result<()> {
        self.round_in_epoch += 1;
        if feedback {
            // positive feedback reveals the true label
            self.collected.push((x, predicted));
        }
        if self.closed_epochs < self.schedule.epochs()
            && self.round_in_epoch == self.schedule.budgets[self.closed_epochs]
        {
            self.close_epoch()?;
        }
        Ok(())
    }

    fn finish(&mut self) -> Result<Vec<u16>> {
        while self.closed_epochs < self.schedule.epochs() {
            self.close_epoch()?;
        }
        Ok((0..self.class.n())
            .map(|x| {
                let list = self.current.get(x);
                debug_assert_eq!(list.len(), 1, "final predictor must be a unit list");
                list[0]
            })
            .collect())
    }
}

/// Cascade knobs beyond the schedule.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CascadeConfig {
    /// Which prefixes vote inside the per-epoch list learner.
    pub vote_range: VoteRange,
    /// Hard cap on total protocol rounds; epochs beyond the cap collect
    /// nothing and fall back to truncation.
    pub max_rounds: Option<u64>,
    /// Whether to keep the full transcript in the result.
    pub record_transcript: bool,
}

impl Default for CascadeConfig {
    fn default() -> Self {
        Self { vote_range: VoteRange::StopBeforeLast, max_rounds: None, record_transcript: true }
    }
}

/// Per-epoch accounting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochStats {
    pub epoch: usize,
    pub list_size: u32,
    pub rounds: u64,
    pub collected: u64,
    /// Ceiling of the schedule's collection target `n_t`.
    pub target: u64,
    /// Collected fewer pairs than the target.
    pub shortfall: bool,
    /// Epoch collected nothing; the list was truncated from the previous
    /// predictor instead of learned.
    pub zero_collection: bool,
    /// Majority lists truncated to the cap (possible for even or tiny
    /// vote counts).
    pub truncations: u64,
    /// Exact list error of the epoch's predictor under the environment.
    #[serde(with = "rat_serde")]
    pub list_error: Rat,
}

/// Everything a cascade run produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeResult {
    /// Final single-label hypothesis, one label per instance.
    pub hypothesis: Vec<u16>,
    pub epochs: Vec<EpochStats>,
    pub transcript: Vec<TranscriptEntry>,
    pub seed: u64,
}

/// Runs the cascade under `schedule` against `env`.
pub fn list_cascade(
    env: &Environment,
    schedule: &EpochSchedule,
    config: &CascadeConfig,
) -> Result<CascadeResult> {
    let mut policy = CascadePolicy::new(env.class.clone(), schedule.clone(), config.vote_range)?;
    let rounds = schedule.total_rounds().min(config.max_rounds.unwrap_or(u64::MAX));
    let run = run_protocol(env, &mut policy, rounds, config.record_transcript)?;
    let hypothesis = policy.finish()?;
    let epochs = policy
        .epoch_records()
        .iter()
        .map(|r| {
            Ok(EpochStats {
                epoch: r.epoch,
                list_size: r.list_size,
                rounds: r.rounds,
                collected: r.collected,
                target: r.target,
                shortfall: r.shortfall,
                zero_collection: r.zero_collection,
                truncations: r.truncations,
                list_error: list_error(&r.predictor, &env.dist)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CascadeResult { hypothesis, epochs, transcript: run.transcript, seed: env.seed })
}

/// Exact error rate of a single-label hypothesis table.
pub fn evaluate_hypothesis(hypothesis: &[u16], dist: &FiniteDistribution) -> Result<Rat> {
    if hypothesis.len() != dist.n() {
        return Err(Error::DomainMismatch { expected: dist.n(), got: hypothesis.len() });
    }
    let mut err = crate::rat::rat_int(0);
    for x in 0..dist.n() {
        if hypothesis[x] != dist.target_label(x) {
            err += dist.mass(x).clone();
        }
    }
    Ok(err)
}
