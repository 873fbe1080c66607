//! Lower-bound hard instances and restricted-error estimation.
//!
//! A pseudo-box witness turns into a hard bandit environment: the anchor
//! point (smallest neighbor requirement after ascending canonicalization)
//! carries mass `1 - 16 eps`, every other witness point carries mass
//! proportional to its requirement, and the target concept is drawn
//! uniformly from the witness family lifted to full hypotheses. Unless a
//! learner samples point `i` on the order of `N_i` times, the unexplored
//! neighbors stay indistinguishable under bandit feedback, which keeps
//! the restricted error (error mass off the anchor) high. A two-point
//! variant with masses `(1 - 2 eps, 2 eps)` drives the
//! `log(1/delta)`-style sample floor.
//!
//! Estimation is Monte-Carlo over trials: each trial draws its target,
//! plays exactly `budget` protocol rounds against a learner, and
//! evaluates the restricted error exactly (rational arithmetic
//! throughout). Per-point undersampling frequencies (how often a point
//! was drawn at most `N_i / 2` times) are recorded alongside.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_traits::ToPrimitive;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::bandit_cascade::{
    epoch_schedule, required_ds_list_sizes, run_protocol, BanditPolicy, CascadePolicy,
    Environment,
};
use crate::concept_class::ConceptClass;
use crate::dimensions::{ds_l_dimension, PseudoBoxWitness};
use crate::error::Error;
use crate::list_learning::{FiniteDistribution, VoteRange};
use crate::rat::{rat, rat_int, rat_vec_serde, Rat};
use crate::seeding::{derive_seed, rng_for, streams};
use crate::Result;

/// Which construction produced an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HardInstanceKind {
    PseudoBox,
    TwoPoint,
}

/// A hard bandit environment: the working class (witness family lifted to
/// full hypotheses), exact masses over the parent domain, and the
/// witness bookkeeping needed by the bound checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardInstance {
    pub kind: HardInstanceKind,
    /// Lifted family as a concept class over the parent domain.
    pub class: ConceptClass,
    /// Exact masses per parent-domain instance (zero off the support).
    #[serde(with = "rat_vec_serde")]
    pub masses: Vec<Rat>,
    #[serde(with = "crate::rat::rat_serde")]
    pub epsilon: Rat,
    /// Witness instances, anchor first, remaining points in ascending
    /// neighbor-requirement order.
    pub support: Vec<usize>,
    /// Neighbor requirements aligned with `support` (empty for the
    /// two-point construction).
    pub profile: Vec<u32>,
    /// The anchor instance (`support[0]`).
    pub anchor: usize,
}

/// Lifts each witness pattern to the lexicographically smallest parent
/// hypothesis extending it.
fn lift_family(
    class: &ConceptClass,
    seq: &[usize],
    family: &[Vec<u16>],
) -> Result<Vec<Vec<u16>>> {
    let mut lifted = Vec::with_capacity(family.len());
    for pattern in family {
        let h = class
            .hypotheses()
            .iter()
            .find(|h| seq.iter().zip(pattern).all(|(&x, &y)| h[x] == y))
            .ok_or_else(|| Error::WitnessInvalid("pattern has no extending hypothesis".into()))?;
        lifted.push(h.clone());
    }
    Ok(lifted)
}

/// Builds the pseudo-box hard instance from a validated witness:
/// `p(anchor) = 1 - 16 eps` and `p(x_i) = 16 N_i eps / sum_(j>=2) N_j`
/// for the remaining points, after sorting the witness coordinates by
/// ascending requirement.
pub fn bds_hard_instance(
    class: &ConceptClass,
    witness: &PseudoBoxWitness,
    epsilon: &Rat,
) -> Result<HardInstance> {
    witness.validate(class)?;
    let d = witness.seq.len();
    if d < 2 {
        return Err(Error::InvalidParameter(
            "pseudo-box instance needs at least two witness points".into(),
        ));
    }
    if !(epsilon > &rat_int(0) && epsilon <= &rat(1, 16)) {
        return Err(Error::InvalidParameter("epsilon must lie in (0, 1/16]".into()));
    }
    // ascending requirement order, original position breaking ties
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by_key(|&j| (witness.profile.values()[j], j));
    let support: Vec<usize> = order.iter().map(|&j| witness.seq[j]).collect();
    let profile: Vec<u32> = order.iter().map(|&j| witness.profile.values()[j]).collect();
    let rest_total: u32 = profile[1..].iter().sum();
    let mut masses = alloc::vec![rat_int(0); class.n()];
    masses[support[0]] = rat_int(1) - rat_int(16) * epsilon.clone();
    for (i, &x) in support.iter().enumerate().skip(1) {
        masses[x] = rat_int(16) * rat_int(profile[i] as i64) * epsilon.clone()
            / rat_int(rest_total as i64);
    }
    debug_assert_eq!(masses.iter().sum::<Rat>(), rat_int(1));
    let lifted = lift_family(class, &witness.seq, &witness.family)?;
    let family_class = ConceptClass::new(class.k(), class.n(), lifted)?;
    Ok(HardInstance {
        kind: HardInstanceKind::PseudoBox,
        class: family_class,
        masses,
        epsilon: epsilon.clone(),
        support,
        profile,
        anchor: 0,
    }
    .with_anchor())
}

impl HardInstance {
    fn with_anchor(mut self) -> Self {
        self.anchor = self.support[0];
        self
    }

    /// Exact restricted error of a hypothesis against a target: the error
    /// mass on the non-anchor support.
    pub fn restricted_error(&self, hypothesis: &[u16], target: &[u16]) -> Result<Rat> {
        if hypothesis.len() != self.class.n() {
            return Err(Error::DomainMismatch { expected: self.class.n(), got: hypothesis.len() });
        }
        let mut err = rat_int(0);
        for &x in &self.support[1..] {
            if hypothesis[x] != target[x] {
                err += self.masses[x].clone();
            }
        }
        Ok(err)
    }
}

/// Two hypotheses agreeing on one instance and disagreeing on another,
/// with masses `(1 - 2 eps, 2 eps)`. The first qualifying pair in
/// canonical order is chosen.
pub fn two_point_instance(epsilon: &Rat, class: &ConceptClass) -> Result<HardInstance> {
    if !(epsilon > &rat_int(0) && epsilon <= &rat(1, 2)) {
        return Err(Error::InvalidParameter("epsilon must lie in (0, 1/2]".into()));
    }
    let hyps = class.hypotheses();
    for a in 0..hyps.len() {
        for b in a + 1..hyps.len() {
            let agree = (0..class.n()).find(|&x| hyps[a][x] == hyps[b][x]);
            let disagree = (0..class.n()).find(|&x| hyps[a][x] != hyps[b][x]);
            if let (Some(x1), Some(x2)) = (agree, disagree) {
                let mut masses = alloc::vec![rat_int(0); class.n()];
                masses[x1] = rat_int(1) - rat_int(2) * epsilon.clone();
                masses[x2] = rat_int(2) * epsilon.clone();
                let family_class = ConceptClass::new(
                    class.k(),
                    class.n(),
                    alloc::vec![hyps[a].clone(), hyps[b].clone()],
                )?;
                return Ok(HardInstance {
                    kind: HardInstanceKind::TwoPoint,
                    class: family_class,
                    masses,
                    epsilon: epsilon.clone(),
                    support: alloc::vec![x1, x2],
                    profile: Vec::new(),
                    anchor: x1,
                });
            }
        }
    }
    Err(Error::NoQualifyingPair)
}

/// `floor(sum_(i>=2) N_i / (64 eps))`, exposed separately so the formula
/// can be unit-checked without building a witness.
pub fn pseudo_box_budget(profile: &[u32], epsilon: &Rat) -> u64 {
    let rest: u32 = profile[1..].iter().sum();
    let m = rat_int(rest as i64) / (rat_int(64) * epsilon.clone());
    m.floor().to_integer().to_u64().unwrap_or(0)
}

/// The sample budget below which the pseudo-box bound bites.
pub fn lower_bound_budget(instance: &HardInstance) -> Result<u64> {
    match instance.kind {
        HardInstanceKind::PseudoBox => Ok(pseudo_box_budget(&instance.profile, &instance.epsilon)),
        HardInstanceKind::TwoPoint => Err(Error::InvalidParameter(
            "lower-bound budget is defined for pseudo-box instances".into(),
        )),
    }
}

/// A factory for online bandit learners. `dist` is supplied so that
/// oracle baselines can cheat; honest learners must ignore the target
/// inside it.
pub trait BanditLearner {
    fn name(&self) -> &'static str;
    fn make_policy(
        &self,
        class: &ConceptClass,
        dist: &FiniteDistribution,
        trial_seed: u64,
    ) -> Result<Box<dyn BanditPolicy>>;
}

/// The cascade, schedule derived from the working class's DS dimensions.
#[derive(Debug, Clone)]
pub struct CascadeLearner {
    pub epsilon: f64,
    pub delta: f64,
    pub scale: f64,
    pub vote_range: VoteRange,
    pub dim_budget: u64,
}

impl Default for CascadeLearner {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            delta: 0.2,
            scale: 1.0,
            vote_range: VoteRange::StopBeforeLast,
            dim_budget: 1 << 32,
        }
    }
}

impl BanditLearner for CascadeLearner {
    fn name(&self) -> &'static str {
        "cascade"
    }

    fn make_policy(
        &self,
        class: &ConceptClass,
        _dist: &FiniteDistribution,
        _trial_seed: u64,
    ) -> Result<Box<dyn BanditPolicy>> {
        let mut ds_values = alloc::collections::BTreeMap::new();
        for l in required_ds_list_sizes(class.k()) {
            ds_values.insert(l, ds_l_dimension(class, l, self.dim_budget)?.value);
        }
        let schedule = epoch_schedule(class.k(), self.epsilon, self.delta, &ds_values, self.scale)?;
        Ok(Box::new(CascadePolicy::new(class.clone(), schedule, self.vote_range)?))
    }
}

/// Version-space baseline: keep every hypothesis consistent with all
/// feedback, predict the plurality label of the survivors (smallest label
/// on ties).
#[derive(Debug, Clone, Default)]
pub struct GreedyConsistentLearner;

struct GreedyConsistentPolicy {
    class: ConceptClass,
    alive: Vec<bool>,
}

impl GreedyConsistentPolicy {
    fn plurality(&self, x: usize) -> u16 {
        let mut counts = alloc::collections::BTreeMap::new();
        for (h, &alive) in self.class.hypotheses().iter().zip(&self.alive) {
            if alive {
                *counts.entry(h[x]).or_insert(0usize) += 1;
            }
        }
        counts
            .iter()
            .max_by_key(|&(&label, &c)| (c, core::cmp::Reverse(label)))
            .map(|(&label, _)| label)
            .unwrap_or(1)
    }
}

impl BanditPolicy for GreedyConsistentPolicy {
    fn predict(&mut self, x: usize, _rng: &mut dyn RngCore) -> u16 {
        self.plurality(x)
    }

    fn observe(&mut self, x: usize, predicted: u16, feedback: bool) -> Result<()> {
        for (h, alive) in self.class.hypotheses().iter().zip(self.alive.iter_mut()) {
            if *alive {
                let matches = h[x] == predicted;
                if matches != feedback {
                    *alive = false;
                }
            }
        }
        Ok(())
    }

    fn finish(&mut self) -> Result<Vec<u16>> {
        Ok((0..self.class.n()).map(|x| self.plurality(x)).collect())
    }
}

impl BanditLearner for GreedyConsistentLearner {
    fn name(&self) -> &'static str {
        "greedy-consistent"
    }

    fn make_policy(
        &self,
        class: &ConceptClass,
        _dist: &FiniteDistribution,
        _trial_seed: u64,
    ) -> Result<Box<dyn BanditPolicy>> {
        Ok(Box::new(GreedyConsistentPolicy {
            class: class.clone(),
            alive: alloc::vec![true; class.len()],
        }))
    }
}

/// Cheating baseline with oracle access to the target; the sanity floor
/// for restricted-error estimates.
#[derive(Debug, Clone, Default)]
pub struct OracleLearner;

struct OraclePolicy {
    target: Vec<u16>,
}

impl BanditPolicy for OraclePolicy {
    fn predict(&mut self, x: usize, _rng: &mut dyn RngCore) -> u16 {
        self.target[x]
    }

    fn observe(&mut self, _x: usize, _predicted: u16, _feedback: bool) -> Result<()> {
        Ok(())
    }

    fn finish(&mut self) -> Result<Vec<u16>> {
        Ok(self.target.clone())
    }
}

impl BanditLearner for OracleLearner {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn make_policy(
        &self,
        _class: &ConceptClass,
        dist: &FiniteDistribution,
        _trial_seed: u64,
    ) -> Result<Box<dyn BanditPolicy>> {
        Ok(Box::new(OraclePolicy { target: dist.target().to_vec() }))
    }
}

/// One Monte-Carlo trial's outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub restricted_error: Rat,
    /// Per non-anchor support point: was it drawn at most `N_i / 2`
    /// times.
    pub undersampled: Vec<bool>,
}

/// Plays one trial: draw the target uniformly from the family, run the
/// learner for exactly `budget` protocol rounds, evaluate the restricted
/// error exactly.
pub fn restricted_error_trial(
    learner: &dyn BanditLearner,
    instance: &HardInstance,
    budget: u64,
    trial_seed: u64,
) -> Result<TrialOutcome> {
    let family = instance.class.hypotheses();
    let mut target_rng = rng_for(trial_seed, streams::TARGET, 0);
    let target = family[target_rng.gen_range(0..family.len())].clone();
    let dist = FiniteDistribution::new(instance.masses.clone(), target.clone(), &instance.class)?;
    let env = Environment::new(instance.class.clone(), dist.clone(), trial_seed)?;
    let mut policy = learner.make_policy(&instance.class, &dist, trial_seed)?;
    let run = run_protocol(&env, policy.as_mut(), budget, false)?;
    let hypothesis = policy.finish()?;
    let restricted_error = instance.restricted_error(&hypothesis, &target)?;
    let undersampled = instance
        .support
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &x)| {
            let half = instance.profile.get(i).map(|&n| (n / 2) as u64).unwrap_or(0);
            run.draw_counts[x] <= half
        })
        .collect();
    Ok(TrialOutcome { restricted_error, undersampled })
}

/// Monte-Carlo statistics of the restricted error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestrictedErrorStats {
    /// Exact mean of the per-trial restricted errors.
    #[serde(with = "crate::rat::rat_serde")]
    pub mean_restricted_error: Rat,
    /// Per non-anchor support point: fraction of trials it was drawn at
    /// most `N_i / 2` times.
    pub undersampling_freq: Vec<f64>,
    /// Fraction of trials with restricted error at least epsilon
    /// (reported only).
    pub exceed_epsilon_freq: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Runs `trials` independent trials (seeds derived per trial) and
/// aggregates. The mean stays exact; only the frequencies are floats.
pub fn expected_restricted_error(
    learner: &dyn BanditLearner,
    instance: &HardInstance,
    budget: u64,
    trials: u64,
    seed: u64,
) -> Result<RestrictedErrorStats> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let mut total = rat_int(0);
    let points = instance.support.len().saturating_sub(1);
    let mut under = alloc::vec![0u64; points];
    let mut exceed = 0u64;
    for trial in 0..trials {
        let outcome =
            restricted_error_trial(learner, instance, budget, derive_seed(seed, streams::TRIAL, trial))?;
        if outcome.restricted_error >= instance.epsilon {
            exceed += 1;
        }
        total += outcome.restricted_error;
        for (slot, flag) in under.iter_mut().zip(&outcome.undersampled) {
            if *flag {
                *slot += 1;
            }
        }
    }
    Ok(RestrictedErrorStats {
        mean_restricted_error: total / rat_int(trials as i64),
        undersampling_freq: under.iter().map(|&c| c as f64 / trials as f64).collect(),
        exceed_epsilon_freq: exceed as f64 / trials as f64,
        trials,
        seed,
    })
}

/// Fraction of trials in which `instance.support[1]` is never drawn over
/// `rounds` protocol draws; for the two-point instance this should match
/// `(1 - 2 eps)^rounds`.
pub fn never_sampled_frequency(
    instance: &HardInstance,
    rounds: u64,
    trials: u64,
    seed: u64,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let target = instance.class.hypotheses()[0].clone();
    let dist = FiniteDistribution::new(instance.masses.clone(), target, &instance.class)?;
    let watched = instance.support[1];
    let mut missing = 0u64;
    for trial in 0..trials {
        let trial_seed = derive_seed(seed, streams::TRIAL, trial);
        let mut seen = false;
        for round in 1..=rounds {
            let mut rng = rng_for(trial_seed, streams::ROUND, round);
            let (x, _) = dist.sample(&mut rng);
            if x == watched {
                seen = true;
                break;
            }
        }
        if !seen {
            missing += 1;
        }
    }
    Ok(missing as f64 / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimensions::{bds_dimension, DimensionWitness, NeighborProfile};
    use crate::rat::rat_to_f64;
    use alloc::vec;

    /// The [2] x [3] x [3] box as a class: requirement profile (1, 2, 2).
    pub(crate) fn box_class() -> ConceptClass {
        let mut rows = Vec::new();
        for a in 1..=2u16 {
            for b in 1..=3u16 {
                for c in 1..=3u16 {
                    rows.push(vec![a, b, c]);
                }
            }
        }
        ConceptClass::new(3, 3, rows).unwrap()
    }

    fn box_witness(class: &ConceptClass) -> PseudoBoxWitness {
        let witness = PseudoBoxWitness {
            seq: vec![0, 1, 2],
            profile: NeighborProfile::new(vec![1, 2, 2]).unwrap(),
            family: class.hypotheses().to_vec(),
        };
        witness.validate(class).unwrap();
        witness
    }

    #[test]
    fn mass_formula_on_the_reference_instance() {
        let class = box_class();
        let inst = bds_hard_instance(&class, &box_witness(&class), &rat(1, 32)).unwrap();
        assert_eq!(inst.masses, vec![rat(1, 2), rat(1, 4), rat(1, 4)]);
        assert_eq!(inst.support, vec![0, 1, 2]);
        assert_eq!(inst.profile, vec![1, 2, 2]);
        assert_eq!(inst.anchor, 0);
        assert_eq!(inst.class.len(), 18);
    }

    #[test]
    fn boundary_epsilon_zeroes_the_anchor() {
        let class = box_class();
        let inst = bds_hard_instance(&class, &box_witness(&class), &rat(1, 16)).unwrap();
        assert_eq!(inst.masses[inst.anchor], rat_int(0));
        assert_eq!(inst.masses.iter().sum::<Rat>(), rat_int(1));
    }

    #[test]
    fn masses_always_sum_to_one() {
        for seed in 0..10u64 {
            let class = ConceptClass::random(3, 3, 12 + seed % 10, 900 + seed).unwrap();
            let report = bds_dimension(&class, 1 << 30);
            let Some(DimensionWitness::PseudoBox(w)) = report.witness else { continue };
            if w.seq.len() < 2 {
                continue;
            }
            let inst = bds_hard_instance(&class, &w, &rat(1, 20)).unwrap();
            assert_eq!(inst.masses.iter().sum::<Rat>(), rat_int(1), "seed {seed}");
        }
    }

    #[test]
    fn profile_is_canonicalized_ascending() {
        // witness with requirements out of order: single coordinate with 2
        // neighbors listed first
        let class = box_class();
        let witness = PseudoBoxWitness {
            seq: vec![1, 0, 2],
            profile: NeighborProfile::new(vec![2, 1, 2]).unwrap(),
            family: class
                .hypotheses()
                .iter()
                .map(|h| vec![h[1], h[0], h[2]])
                .collect(),
        };
        witness.validate(&class).unwrap();
        let inst = bds_hard_instance(&class, &witness, &rat(1, 32)).unwrap();
        assert_eq!(inst.profile, vec![1, 2, 2]);
        assert_eq!(inst.support[0], 0);
    }

    #[test]
    fn rejects_bad_epsilon_and_tiny_witnesses() {
        let class = box_class();
        assert!(bds_hard_instance(&class, &box_witness(&class), &rat(1, 8)).is_err());
        assert!(bds_hard_instance(&class, &box_witness(&class), &rat_int(0)).is_err());
        let single = PseudoBoxWitness {
            seq: vec![1],
            profile: NeighborProfile::new(vec![2]).unwrap(),
            family: crate::concept_class::restrict(&class, &[1]).unwrap().patterns().to_vec(),
        };
        assert!(bds_hard_instance(&class, &single, &rat(1, 32)).is_err());
    }

    #[test]
    fn two_point_examples() {
        let class = ConceptClass::full(2, 2, 10).unwrap();
        let inst = two_point_instance(&rat(1, 10), &class).unwrap();
        assert_eq!(inst.masses, vec![rat(4, 5), rat(1, 5)]);
        assert_eq!(inst.class.len(), 2);

        let boundary = two_point_instance(&rat(1, 2), &class).unwrap();
        assert_eq!(boundary.masses, vec![rat_int(0), rat_int(1)]);

        let singleton = ConceptClass::new(3, 2, vec![vec![3, 3]]).unwrap();
        assert_eq!(
            two_point_instance(&rat(1, 10), &singleton).unwrap_err(),
            Error::NoQualifyingPair
        );
    }

    #[test]
    fn budget_formula_examples() {
        assert_eq!(pseudo_box_budget(&[1, 2, 2], &rat(1, 32)), 2);
        assert_eq!(pseudo_box_budget(&[1, 1], &rat(1, 64)), 1);
        // sum of non-anchor requirements 64 at eps = 1/64
        let profile: Vec<u32> = core::iter::once(1).chain(core::iter::repeat(8).take(8)).collect();
        assert_eq!(pseudo_box_budget(&profile, &rat(1, 64)), 64);

        let class = box_class();
        let inst = bds_hard_instance(&class, &box_witness(&class), &rat(1, 32)).unwrap();
        assert_eq!(lower_bound_budget(&inst).unwrap(), 2);
        let two = two_point_instance(&rat(1, 10), &ConceptClass::full(2, 2, 10).unwrap()).unwrap();
        assert!(lower_bound_budget(&two).is_err());
    }

    #[test]
    fn oracle_learner_scores_zero() {
        let class = box_class();
        let inst = bds_hard_instance(&class, &box_witness(&class), &rat(1, 32)).unwrap();
        let stats = expected_restricted_error(&OracleLearner, &inst, 2, 50, 7).unwrap();
        assert_eq!(stats.mean_restricted_error, rat_int(0));
        assert_eq!(stats.exceed_epsilon_freq, 0.0);
    }

    #[test]
    fn budget_zero_matches_closed_form_exactly() {
        // With no rounds both honest learners output a deterministic
        // hypothesis; averaging the restricted error over every target in
        // the box family gives sum_(i>=2) mass_i * (1 - 1/3) = 1/3.
        let class = box_class();
        let inst = bds_hard_instance(&class, &box_witness(&class), &rat(1, 32)).unwrap();
        let learners: [&dyn BanditLearner; 2] = [
            &CascadeLearner { epsilon: 1.0 / 32.0, ..CascadeLearner::default() },
            &GreedyConsistentLearner,
        ];
        for learner in learners {
            let mut total = rat_int(0);
            for target in inst.class.hypotheses() {
                let dist =
                    FiniteDistribution::new(inst.masses.clone(), target.clone(), &inst.class)
                        .unwrap();
                let mut policy = learner.make_policy(&inst.class, &dist, 0).unwrap();
                let hypothesis = policy.finish().unwrap();
                total += inst.restricted_error(&hypothesis, target).unwrap();
            }
            let mean = total / rat_int(inst.class.len() as i64);
            assert_eq!(mean, rat(1, 3), "learner {}", learner.name());
            assert!(mean >= rat_int(4) * inst.epsilon.clone());
        }
    }

    #[test]
    fn undersampling_frequencies_clear_the_markov_floor() {
        let class = box_class();
        let inst = bds_hard_instance(&class, &box_witness(&class), &rat(1, 32)).unwrap();
        let budget = lower_bound_budget(&inst).unwrap();
        let stats =
            expected_restricted_error(&GreedyConsistentLearner, &inst, budget, 400, 21).unwrap();
        let sigma = libm::sqrt(0.25 / 400.0);
        for (i, freq) in stats.undersampling_freq.iter().enumerate() {
            assert!(*freq >= 0.5 - 3.0 * sigma, "point {i} frequency {freq}");
        }
    }

    #[test]
    fn restricted_error_at_budget_exceeds_three_epsilon() {
        let class = box_class();
        let inst = bds_hard_instance(&class, &box_witness(&class), &rat(1, 32)).unwrap();
        let budget = lower_bound_budget(&inst).unwrap();
        let learner = CascadeLearner { epsilon: 1.0 / 32.0, ..CascadeLearner::default() };
        let stats = expected_restricted_error(&learner, &inst, budget, 500, 33).unwrap();
        let floor = rat_int(3) * inst.epsilon.clone();
        assert!(
            stats.mean_restricted_error >= floor,
            "mean {} below 3 eps",
            rat_to_f64(&stats.mean_restricted_error)
        );
        // restricted error can never exceed the off-anchor mass 16 eps
        assert!(stats.mean_restricted_error <= rat_int(16) * inst.epsilon.clone());
    }

    #[test]
    fn never_sampled_matches_closed_form() {
        let class = ConceptClass::full(2, 2, 10).unwrap();
        let inst = two_point_instance(&rat(1, 10), &class).unwrap();
        let (rounds, trials) = (5u64, 2000u64);
        let freq = never_sampled_frequency(&inst, rounds, trials, 99).unwrap();
        let expected = libm::pow(0.8, rounds as f64);
        let sigma = libm::sqrt(expected * (1.0 - expected) / trials as f64);
        assert!((freq - expected).abs() <= 3.0 * sigma, "freq {freq} expected {expected}");
    }
}
