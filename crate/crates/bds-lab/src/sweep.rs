//! Sample-complexity sweeps: run the cascade across a grid of epsilon
//! values and budget multipliers, aggregate exact per-trial errors into
//! CSV rows. CSV is the canonical data product; the SVG renderer only
//! consumes CSV.

use anyhow::{ensure, Result};
use serde::{Deserialize, Serialize};

use bds_core::bandit_cascade::{
    epoch_schedule, evaluate_hypothesis, list_cascade, required_ds_list_sizes, CascadeConfig,
    Environment,
};
use bds_core::concept_class::ConceptClass;
use bds_core::dimensions::ds_l_dimension;
use bds_core::list_learning::{FiniteDistribution, VoteRange};
use bds_core::rat::{rat_from_f64, rat_to_f64, Rat};
use bds_core::seeding::{derive_seed, streams};

use crate::io::Meta;
use crate::parallel::parallel_map;

/// Grid and trial parameters of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub epsilons: Vec<f64>,
    /// Budget multipliers, applied as the schedule scale (each must lie
    /// in (0, 1]).
    pub multipliers: Vec<f64>,
    pub delta: f64,
    pub trials: u64,
    pub seed: u64,
    pub dim_budget: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            epsilons: vec![0.1],
            multipliers: vec![1.0],
            delta: 0.2,
            trials: 50,
            seed: 7,
            dim_budget: 100_000_000,
        }
    }
}

/// One grid point, aggregated over trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    /// Total protocol rounds of the schedule at this grid point.
    pub budget: u64,
    pub trials: u64,
    pub error_mean: f64,
    pub error_q95: f64,
    /// Fraction of trials with final error above epsilon.
    pub failure_rate: f64,
    /// Total epochs flagged (shortfall or zero collection) across trials.
    pub epochs_flagged: u64,
}

/// Runs the grid; rows come back sorted by (epsilon, budget).
pub fn sweep(
    class: &ConceptClass,
    dist: &FiniteDistribution,
    config: &SweepConfig,
) -> Result<Vec<SweepRow>> {
    ensure!(config.trials >= 1, "need at least one trial");
    ensure!(!config.epsilons.is_empty(), "need at least one epsilon");
    ensure!(!config.multipliers.is_empty(), "need at least one multiplier");
    let mut ds_values = std::collections::BTreeMap::new();
    for l in required_ds_list_sizes(class.k()) {
        ds_values.insert(l, ds_l_dimension(class, l, config.dim_budget)?.value);
    }
    let mut epsilons = config.epsilons.clone();
    epsilons.sort_by(f64::total_cmp);
    let mut multipliers = config.multipliers.clone();
    multipliers.sort_by(f64::total_cmp);
    let mut rows = Vec::new();
    let mut row_index = 0u64;
    for &epsilon in &epsilons {
        for &scale in &multipliers {
            let schedule = epoch_schedule(class.k(), epsilon, config.delta, &ds_values, scale)?;
            let row_seed = derive_seed(config.seed, streams::TRIAL, row_index);
            let outcomes: Vec<(Rat, u64)> = parallel_map(config.trials, |t| {
                let env = Environment::new(
                    class.clone(),
                    dist.clone(),
                    derive_seed(row_seed, streams::TRIAL, t),
                )
                .expect("environment is valid");
                let cfg = CascadeConfig {
                    vote_range: VoteRange::StopBeforeLast,
                    max_rounds: None,
                    record_transcript: false,
                };
                let result = list_cascade(&env, &schedule, &cfg).expect("cascade runs");
                let err =
                    evaluate_hypothesis(&result.hypothesis, &env.dist).expect("domains match");
                let flagged = result
                    .epochs
                    .iter()
                    .filter(|e| e.shortfall || e.zero_collection)
                    .count() as u64;
                (err, flagged)
            });
            let eps_rat = rat_from_f64(epsilon)?;
            let mut errors: Vec<Rat> = outcomes.iter().map(|(e, _)| e.clone()).collect();
            let mean: Rat =
                errors.iter().sum::<Rat>() / bds_core::rat::rat_int(config.trials as i64);
            errors.sort();
            let q95_index = ((config.trials as f64 * 0.95).ceil() as usize)
                .clamp(1, config.trials as usize)
                - 1;
            let failures = errors.iter().filter(|e| *e > &eps_rat).count();
            rows.push(SweepRow {
                epsilon,
                budget: schedule.total_rounds(),
                trials: config.trials,
                error_mean: rat_to_f64(&mean),
                error_q95: rat_to_f64(&errors[q95_index]),
                failure_rate: failures as f64 / config.trials as f64,
                epochs_flagged: outcomes.iter().map(|(_, f)| f).sum(),
            });
            row_index += 1;
        }
    }
    rows.sort_by(|a, b| a.epsilon.total_cmp(&b.epsilon).then(a.budget.cmp(&b.budget)));
    Ok(rows)
}

/// Canonical CSV bytes: a comment header with reproducibility metadata,
/// the column header, rows sorted by (epsilon, budget).
pub fn sweep_to_csv(rows: &[SweepRow], meta: &Meta) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# {} sweep v{} seed={} config_sha256={}\n",
        meta.tool, meta.version, meta.seed, meta.config_sha256
    ));
    out.push_str("epsilon,budget,trials,error_mean,error_q95,failure_rate,epochs_flagged\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.epsilon, r.budget, r.trials, r.error_mean, r.error_q95, r.failure_rate,
            r.epochs_flagged
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use bds_core::rat::{rat, rat_int};

    fn singleton_setup() -> (ConceptClass, FiniteDistribution) {
        let class = ConceptClass::new(2, 2, vec![vec![2, 1]]).unwrap();
        let dist =
            FiniteDistribution::new(vec![rat(1, 2), rat(1, 2)], vec![2, 1], &class).unwrap();
        (class, dist)
    }

    #[test]
    fn singleton_class_sweeps_to_zero_error() {
        let (class, dist) = singleton_setup();
        let config = SweepConfig {
            epsilons: vec![0.2, 0.1],
            multipliers: vec![0.01],
            trials: 5,
            ..SweepConfig::default()
        };
        let rows = sweep(&class, &dist, &config).unwrap();
        assert_eq!(rows.len(), 2);
        // sorted ascending by epsilon
        assert!(rows[0].epsilon < rows[1].epsilon);
        for row in &rows {
            assert_eq!(row.error_mean, 0.0);
            assert_eq!(row.failure_rate, 0.0);
        }
    }

    #[test]
    fn csv_bytes_are_reproducible() {
        let (class, dist) = singleton_setup();
        let config =
            SweepConfig { epsilons: vec![0.1], multipliers: vec![0.01], trials: 3, ..SweepConfig::default() };
        let rows1 = sweep(&class, &dist, &config).unwrap();
        let rows2 = sweep(&class, &dist, &config).unwrap();
        let meta = Meta::new(config.seed, &config).unwrap();
        assert_eq!(sweep_to_csv(&rows1, &meta), sweep_to_csv(&rows2, &meta));
    }

    #[test]
    fn error_mean_is_nonincreasing_in_budget_for_a_learnable_class() {
        // two-point environment on the full binary class; more budget
        // cannot hurt beyond noise at these trial counts
        let class = ConceptClass::full(1, 2, 10).unwrap();
        let dist = FiniteDistribution::new(vec![rat_int(1)], vec![2], &class).unwrap();
        let config = SweepConfig {
            epsilons: vec![0.1],
            multipliers: vec![0.002, 0.05],
            trials: 60,
            ..SweepConfig::default()
        };
        let rows = sweep(&class, &dist, &config).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].budget < rows[1].budget);
        assert!(rows[1].error_mean <= rows[0].error_mean + 0.1);
    }
}
