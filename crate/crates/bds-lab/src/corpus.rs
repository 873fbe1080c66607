//! Deterministic corpora of random classes, realizable samples, and
//! small one-inclusion graphs for the verification suites.

use rand::Rng;
use serde::{Deserialize, Serialize};

use bds_core::concept_class::{restrict, ConceptClass};
use bds_core::list_learning::LabeledPair;
use bds_core::one_inclusion::{build_graph, OneInclusionGraph};
use bds_core::seeding::{derive_seed, rng_for, streams};

/// Parameters of the random-class corpus. Everything derives from
/// `seed`, so two corpora with equal configs are identical.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusConfig {
    pub classes: u64,
    pub max_n: usize,
    pub min_k: u16,
    pub max_k: u16,
    /// Cap on the number of hypotheses per class.
    pub max_size: u64,
    pub seed: u64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self { classes: 1000, max_n: 4, min_k: 2, max_k: 6, max_size: 120, seed: 2024 }
    }
}

impl CorpusConfig {
    pub fn describe(&self) -> String {
        format!(
            "{} random classes, n in 1..={}, K in {}..={}, size in 1..=min(K^n, {}), seed {}",
            self.classes, self.max_n, self.min_k, self.max_k, self.max_size, self.seed
        )
    }
}

/// The `i`-th corpus class (uniform n, K, and size given the caps).
pub fn corpus_class(config: &CorpusConfig, index: u64) -> ConceptClass {
    let mut rng = rng_for(config.seed, streams::CORPUS, index);
    let n = rng.gen_range(1..=config.max_n);
    let k = rng.gen_range(config.min_k..=config.max_k);
    let total = (k as u128).pow(n as u32).min(config.max_size as u128) as u64;
    let count = rng.gen_range(1..=total);
    ConceptClass::random(n, k, count, derive_seed(config.seed, streams::CORPUS, index))
        .expect("corpus parameters are valid")
}

pub fn corpus(config: &CorpusConfig) -> Vec<ConceptClass> {
    (0..config.classes).map(|i| corpus_class(config, i)).collect()
}

/// A realizable sample: instances drawn uniformly, labels from one
/// hypothesis of the class.
pub fn realizable_sample(class: &ConceptClass, len: usize, seed: u64) -> Vec<LabeledPair> {
    let mut rng = rng_for(seed, streams::SAMPLE, 0);
    let target = &class.hypotheses()[rng.gen_range(0..class.len())];
    (0..len)
        .map(|_| {
            let x = rng.gen_range(0..class.n());
            (x, target[x])
        })
        .collect()
}

/// Small graphs for orientation oracle comparisons: random classes whose
/// full-domain one-inclusion graph stays within the vertex and edge caps.
pub fn orientation_corpus(
    count: usize,
    max_vertices: usize,
    max_edges: usize,
    seed: u64,
) -> Vec<OneInclusionGraph> {
    let mut graphs = Vec::with_capacity(count);
    let mut index = 0u64;
    while graphs.len() < count {
        let mut rng = rng_for(seed, streams::CORPUS, index);
        let n = rng.gen_range(2..=3usize);
        let k = rng.gen_range(2..=4u16);
        let total = (k as u128).pow(n as u32).min(max_vertices as u128) as u64;
        let size = rng.gen_range(1..=total);
        let class = ConceptClass::random(n, k, size, derive_seed(seed, streams::CORPUS, index))
            .expect("valid parameters");
        let seq: Vec<usize> = (0..class.n()).collect();
        let graph = build_graph(&restrict(&class, &seq).expect("full domain"));
        if graph.vertices().len() <= max_vertices && graph.edges().len() <= max_edges {
            graphs.push(graph);
        }
        index += 1;
    }
    graphs
}
