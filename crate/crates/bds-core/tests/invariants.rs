//! Generated-case invariants across the core modules.

use std::collections::BTreeSet;

use bds_core::bandit_cascade::{epoch_schedule, list_cascade, CascadeConfig, Environment};
use bds_core::concept_class::{restrict, ConceptClass};
use bds_core::dimensions::{
    bds_dimension, is_bds_shattered, shattering_core, DimensionWitness, NeighborProfile,
};
use bds_core::hard_instances::bds_hard_instance;
use bds_core::list_learning::{
    majority_vote, one_inclusion_list_predict, pad_list, FiniteDistribution,
};
use bds_core::one_inclusion::{build_graph, max_outdegree, min_max_outdegree_orientation};
use bds_core::rat::{rat, rat_int, Rat};
use proptest::prelude::*;

fn small_class() -> impl Strategy<Value = ConceptClass> {
    (1usize..=3, 2u16..=4).prop_flat_map(|(n, k)| {
        let max = (k as u64).pow(n as u32);
        (Just(n), Just(k), 1u64..=max, any::<u64>()).prop_map(|(n, k, count, seed)| {
            ConceptClass::random(n, k, count, seed).expect("valid parameters")
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn restriction_composes(class in small_class(), raw_s in proptest::collection::vec(0usize..3, 1..4), raw_t in proptest::collection::vec(0usize..4, 1..4)) {
        let s: Vec<usize> = raw_s.iter().map(|i| i % class.n()).collect();
        let t: Vec<usize> = raw_t.iter().map(|j| j % s.len()).collect();
        let step = restrict(&restrict(&class, &s).unwrap().to_class().unwrap(), &t).unwrap();
        let composed: Vec<usize> = t.iter().map(|&j| s[j]).collect();
        let direct = restrict(&class, &composed).unwrap();
        prop_assert_eq!(step.patterns(), direct.patterns());
    }

    #[test]
    fn neighbor_counts_respect_label_cap(class in small_class()) {
        let seq: Vec<usize> = (0..class.n()).collect();
        let proj = restrict(&class, &seq).unwrap();
        for f in proj.patterns() {
            for coord in 0..proj.arity() {
                let ns = proj.i_neighbors(f, coord).unwrap();
                let labels: BTreeSet<u16> = ns.iter().map(|g| g[coord]).collect();
                prop_assert_eq!(labels.len(), ns.len());
                prop_assert!(ns.len() <= (class.k() - 1) as usize);
            }
        }
    }

    #[test]
    fn core_members_keep_their_neighbors(class in small_class(), raw_profile in proptest::collection::vec(1u32..=3, 1..=3)) {
        let width = raw_profile.len().min(class.n());
        let seq: Vec<usize> = (0..width).collect();
        let profile = NeighborProfile::new(raw_profile[..width].to_vec()).unwrap();
        let proj = restrict(&class, &seq).unwrap();
        let core = shattering_core(&proj, &profile).unwrap();
        for f in &core {
            for (i, &need) in profile.values().iter().enumerate() {
                let have = core
                    .iter()
                    .filter(|g| {
                        g[i] != f[i] && g.iter().enumerate().all(|(j, &v)| j == i || v == f[j])
                    })
                    .count();
                prop_assert!(have as u32 >= need);
            }
        }
        // maximality: the core is a fixed point, so re-peeling is identity
        let again = shattering_core(
            &bds_core::concept_class::restrict(
                &ConceptClass::new(class.k(), width, core.clone())
                    .unwrap_or_else(|_| class.clone()),
                &(0..width).collect::<Vec<_>>(),
            )
            .unwrap(),
            &profile,
        );
        if !core.is_empty() {
            prop_assert_eq!(again.unwrap(), core);
        }
    }

    #[test]
    fn orientation_contract_holds(class in small_class(), l in 1u32..=3) {
        let seq: Vec<usize> = (0..class.n()).collect();
        let graph = build_graph(&restrict(&class, &seq).unwrap());
        let (orientation, achieved) = min_max_outdegree_orientation(&graph, l);
        orientation.validate(&graph).unwrap();
        prop_assert_eq!(max_outdegree(&graph, &orientation).unwrap(), achieved);
        for (e, sel) in orientation.selected.iter().enumerate() {
            let members = &graph.edges()[e].members;
            prop_assert_eq!(sel.len(), (l as usize).min(members.len()));
            prop_assert!(sel.iter().all(|v| members.contains(v)));
        }
        if l > 1 {
            let (_, smaller_l) = min_max_outdegree_orientation(&graph, l - 1);
            prop_assert!(achieved <= smaller_l);
        }
    }

    #[test]
    fn majority_size_respects_the_parity_exact_bound(lists in proptest::collection::vec(proptest::collection::btree_set(1u16..=6, 0..=2), 3..8)) {
        // with the >= n/2 threshold, q labels qualifying means
        // q * ceil(n/2) <= n * L, so odd vote counts cap the majority at
        // 2L - 1 while even ones can reach 2L (handled downstream by
        // deterministic truncation)
        let l = 2usize;
        let voted: Vec<Vec<u16>> = lists.iter().map(|s| s.iter().copied().collect()).collect();
        let out = majority_vote(&voted);
        if voted.len() % 2 == 1 {
            prop_assert!(out.len() <= 2 * l - 1);
        } else {
            prop_assert!(out.len() <= 2 * l);
        }
    }

    #[test]
    fn padding_contract(list in proptest::collection::btree_set(1u16..=6, 0..=4), extra in 0usize..=2) {
        let k = 6u16;
        let list: Vec<u16> = list.into_iter().collect();
        let target = (list.len() + extra).min(k as usize);
        if target >= list.len() {
            let padded = pad_list(&list, target, k).unwrap();
            prop_assert_eq!(padded.len(), target);
            prop_assert_eq!(&padded[..list.len()], &list[..]);
            let distinct: BTreeSet<u16> = padded.iter().copied().collect();
            prop_assert_eq!(distinct.len(), padded.len());
        }
    }

    #[test]
    fn prediction_is_a_valid_list(class in small_class(), l in 1u32..=3, pick in any::<u64>()) {
        // realizable sample drawn from a hypothesis of the class itself
        let h = &class.hypotheses()[(pick % class.len() as u64) as usize];
        let sample: Vec<(usize, u16)> = (0..class.n()).map(|x| (x, h[x])).collect();
        for x in 0..class.n() {
            let list = one_inclusion_list_predict(&class, &sample, x, l).unwrap();
            prop_assert!(!list.is_empty());
            prop_assert!(list.len() <= l as usize);
            let distinct: BTreeSet<u16> = list.iter().copied().collect();
            prop_assert_eq!(distinct.len(), list.len());
            // the observed label is forced
            prop_assert_eq!(list, vec![h[x]]);
        }
    }

    #[test]
    fn cascade_exploration_and_retention_are_valid(seed in any::<u64>()) {
        let class = ConceptClass::full(2, 2, 16).unwrap();
        let dist = FiniteDistribution::new(vec![rat(3, 4), rat(1, 4)], vec![1, 2], &class).unwrap();
        let env = Environment::new(class, dist, seed).unwrap();
        let ds = [(1u32, 1u32)].into_iter().collect();
        let schedule = epoch_schedule(2, 0.2, 0.2, &ds, 0.02).unwrap();
        let result = list_cascade(&env, &schedule, &CascadeConfig::default()).unwrap();
        for entry in &result.transcript {
            prop_assert_eq!(entry.feedback, entry.predicted == env.dist.target_label(entry.instance));
            prop_assert!(entry.predicted >= 1 && entry.predicted <= 2);
        }
        prop_assert_eq!(result.hypothesis.len(), 2);
        for stats in &result.epochs {
            prop_assert!((stats.list_size as usize) <= 2);
            prop_assert!(stats.list_error >= rat_int(0) && stats.list_error <= rat_int(1));
        }
    }

    #[test]
    fn hard_instance_masses_are_exact(eps_den in 16i64..=640, seed in any::<u64>()) {
        let class = ConceptClass::random(3, 3, 14, seed).unwrap();
        let report = bds_dimension(&class, 1 << 30);
        if let Some(DimensionWitness::PseudoBox(w)) = report.witness {
            if w.seq.len() >= 2 {
                let eps: Rat = rat(1, eps_den);
                let inst = bds_hard_instance(&class, &w, &eps).unwrap();
                prop_assert_eq!(inst.masses.iter().sum::<Rat>(), rat_int(1));
                prop_assert_eq!(
                    inst.masses[inst.anchor].clone(),
                    rat_int(1) - rat_int(16) * eps
                );
            }
        }
    }

    #[test]
    fn shattering_witnesses_revalidate(class in small_class()) {
        let report = bds_dimension(&class, 1 << 30);
        if let Some(DimensionWitness::PseudoBox(w)) = report.witness {
            w.validate(&class).unwrap();
            prop_assert_eq!(w.profile.total(), report.value);
            // and the certified pair really is shattered
            let again = is_bds_shattered(&class, &w.seq, &w.profile).unwrap();
            prop_assert!(again.is_some());
        } else {
            prop_assert_eq!(report.value, 0);
        }
    }
}
