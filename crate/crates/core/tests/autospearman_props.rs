use std::collections::BTreeSet;

use corrsel::autospearman::{satisfies_thresholds, spearman_phase_with, MeanReference};
use corrsel::data::{generate_synthetic, CloneGroup, SyntheticSpec};
use corrsel::{auto_spearman, AutoSpearmanParams, Dataset, Phase};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_dataset(rng: &mut ChaCha8Rng) -> Dataset {
    loop {
        let base = rng.gen_range(3..15);
        let groups = rng.gen_range(0..4.min(base));
        let spec = SyntheticSpec {
            base_metric_count: base,
            clone_groups: (0..groups)
                .map(|g| CloneGroup {
                    source: g,
                    count: rng.gen_range(1..3),
                    noise_sd: [0.0, 0.05, 0.2, 0.6][rng.gen_range(0..4)],
                })
                .collect(),
            module_count: rng.gen_range(50..400),
            signal_coefficients: (0..base).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            seed: rng.gen(),
        };
        if let Ok(d) = generate_synthetic(&spec) {
            return d;
        }
    }
}

#[test]
fn output_meets_thresholds_and_trace_partitions_metrics() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let params = AutoSpearmanParams::default();
    for _ in 0..120 {
        let d = random_dataset(&mut rng);
        let (kept, trace) = auto_spearman(&d, &params).unwrap();
        assert!(satisfies_thresholds(&d, &kept, 0.7, 5.0).unwrap());
        let removed: BTreeSet<&str> = trace.removed().collect();
        let kept_set: BTreeSet<&str> = kept.iter().map(String::as_str).collect();
        assert_eq!(removed.len(), trace.len(), "a metric was removed twice");
        assert!(removed.is_disjoint(&kept_set));
        let all: BTreeSet<&str> = d.metric_names().iter().map(String::as_str).collect();
        assert_eq!(removed.union(&kept_set).copied().collect::<BTreeSet<_>>(), all);
        // Spearman-phase steps precede VIF-phase steps
        let first_vif = trace.steps.iter().position(|s| s.phase == Phase::Vif).unwrap_or(trace.len());
        assert!(trace.steps[first_vif..].iter().all(|s| s.phase == Phase::Vif));
    }
}

#[test]
fn elimination_is_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let params = AutoSpearmanParams::default();
    for _ in 0..40 {
        let d = random_dataset(&mut rng);
        let (kept, _) = auto_spearman(&d, &params).unwrap();
        let (again, trace) = auto_spearman(&d.project(&kept).unwrap(), &params).unwrap();
        assert_eq!(again, kept);
        assert!(trace.is_empty());
    }
}

#[test]
fn spearman_phase_ignores_monotone_transforms_and_outcome() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..40 {
        let d = random_dataset(&mut rng);
        let (kept, _) = spearman_phase_with(&d, 0.7, MeanReference::Original);
        let mut t = d.clone();
        for j in 0..d.n_metrics() {
            let col: Vec<f64> = d.column(j).iter().map(|v| (v * 0.5).exp() * 3.0 + 1.0).collect();
            t = t.with_column(j, col).unwrap();
        }
        assert_eq!(spearman_phase_with(&t, 0.7, MeanReference::Original).0, kept);
        let flipped = d.with_outcome(d.outcome().iter().map(|y| !y).collect()).unwrap();
        assert_eq!(spearman_phase_with(&flipped, 0.7, MeanReference::Original).0, kept);
    }
}

#[test]
fn full_elimination_ignores_the_outcome() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let params = AutoSpearmanParams::default();
    for _ in 0..30 {
        let d = random_dataset(&mut rng);
        let flipped = d.with_outcome(d.outcome().iter().map(|y| !y).collect()).unwrap();
        assert_eq!(auto_spearman(&d, &params).unwrap().0, auto_spearman(&flipped, &params).unwrap().0);
    }
}

#[test]
fn planted_clones_leave_one_member_per_group() {
    for seed in 0..10 {
        let d = generate_synthetic(&SyntheticSpec {
            base_metric_count: 7,
            clone_groups: (0..3).map(|s| CloneGroup { source: s, count: 1, noise_sd: 0.01 }).collect(),
            module_count: 300,
            signal_coefficients: vec![],
            seed,
        })
        .unwrap();
        let (kept, _) = auto_spearman(&d, &AutoSpearmanParams::default()).unwrap();
        assert_eq!(kept.len(), 7);
        for k in 0..3 {
            let members = [SyntheticSpec::base_name(k), SyntheticSpec::clone_name(k, 0)];
            assert_eq!(members.iter().filter(|m| kept.contains(m)).count(), 1);
        }
    }
}

#[test]
fn both_mean_references_satisfy_the_postcondition() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let d = random_dataset(&mut rng);
        let params = AutoSpearmanParams {
            mean_reference: MeanReference::Remaining,
            ..AutoSpearmanParams::default()
        };
        let (kept, _) = auto_spearman(&d, &params).unwrap();
        assert!(satisfies_thresholds(&d, &kept, 0.7, 5.0).unwrap());
    }
}
