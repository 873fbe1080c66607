//! Designated classes, environments, and witnesses used by the
//! verification suites and documented in the README.

use bds_core::concept_class::ConceptClass;
use bds_core::dimensions::{NeighborProfile, PseudoBoxWitness};
use bds_core::list_learning::FiniteDistribution;
use bds_core::rat::rat;

/// The diagonal class over two points with four labels:
/// `{(1,1), (2,2), (3,3), (4,4)}`. Its DS dimension at list size 1 is 1,
/// which keeps full-fidelity cascade budgets around 4e4 rounds.
pub fn diagonal_k4_class() -> ConceptClass {
    let rows = (1..=4u16).map(|v| vec![v, v]).collect();
    ConceptClass::new(4, 2, rows).expect("diagonal class is valid")
}

/// Companion environment: masses (3/4, 1/4), target `(2,2)`.
pub fn diagonal_k4_distribution(class: &ConceptClass) -> FiniteDistribution {
    FiniteDistribution::new(vec![rat(3, 4), rat(1, 4)], vec![2, 2], class)
        .expect("fixture environment is valid")
}

/// The `[2] x [3] x [3]` box as a concept class over three points with
/// three labels: every member has one neighbor in direction 1 and two in
/// directions 2 and 3.
pub fn box_1_2_2_class() -> ConceptClass {
    let mut rows = Vec::new();
    for a in 1..=2u16 {
        for b in 1..=3u16 {
            for c in 1..=3u16 {
                rows.push(vec![a, b, c]);
            }
        }
    }
    ConceptClass::new(3, 3, rows).expect("box class is valid")
}

/// The witness certifying the (1, 2, 2) requirement profile on the box.
pub fn box_1_2_2_witness() -> PseudoBoxWitness {
    let class = box_1_2_2_class();
    let witness = PseudoBoxWitness {
        seq: vec![0, 1, 2],
        profile: NeighborProfile::new(vec![1, 2, 2]).expect("positive profile"),
        family: class.hypotheses().to_vec(),
    };
    witness.validate(&class).expect("box witness validates");
    witness
}
