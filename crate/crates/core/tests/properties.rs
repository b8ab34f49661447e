use corrsel::data::bootstrap_sample;
use corrsel::evaluation::auc;
use corrsel::harness::consistency;
use corrsel::stats::{discretize_equal_frequency, entropy, information_gain, rank_with_ties, spearman, vif_scores};
use corrsel::{Dataset, MetricSubset};
use proptest::prelude::*;

fn column(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50i32..50, len).prop_map(|v| v.into_iter().map(f64::from).collect())
}

proptest! {
    #[test]
    fn ranks_sum_to_triangular_number(v in column(1..60)) {
        let n = v.len() as f64;
        prop_assert_eq!(rank_with_ties(&v).iter().sum::<f64>(), n * (n + 1.0) / 2.0);
    }

    #[test]
    fn spearman_is_symmetric_and_bounded(pair in (2usize..40).prop_flat_map(|n| (column(n..n + 1), column(n..n + 1)))) {
        let (x, y) = pair;
        let a = spearman(&x, &y).unwrap();
        prop_assert_eq!(a, spearman(&y, &x).unwrap());
        prop_assert!((-1.0..=1.0).contains(&a));
    }

    #[test]
    fn spearman_ignores_monotone_transforms(pair in (3usize..40).prop_flat_map(|n| (column(n..n + 1), column(n..n + 1)))) {
        let (x, y) = pair;
        let tx: Vec<f64> = x.iter().map(|v| (v / 10.0).exp()).collect();
        prop_assert!((spearman(&x, &y).unwrap() - spearman(&tx, &y).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn auc_of_negated_labels_is_complement(
        data in prop::collection::vec((0u8..6, any::<bool>()), 2..60)
    ) {
        let scores: Vec<f64> = data.iter().map(|(s, _)| f64::from(*s)).collect();
        let labels: Vec<bool> = data.iter().map(|(_, l)| *l).collect();
        prop_assume!(labels.iter().any(|&l| l) && labels.iter().any(|&l| !l));
        let flipped: Vec<bool> = labels.iter().map(|l| !l).collect();
        let a = auc(&scores, &labels).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!((auc(&scores, &flipped).unwrap() - (1.0 - a)).abs() < 1e-15);
    }

    #[test]
    fn bootstrap_partitions_rows(n in 2usize..200, seed in any::<u64>()) {
        let d = Dataset::from_columns(
            vec!["x".into()],
            vec![(0..n).map(|i| i as f64).collect()],
            (0..n).map(|i| i % 2 == 0).collect(),
        ).unwrap();
        match bootstrap_sample(&d, seed) {
            Ok(split) => {
                prop_assert_eq!(split.train.n_rows(), n);
                prop_assert_eq!(split.test.n_rows(), split.test_indices.len());
                let mut seen = vec![false; n];
                for &i in &split.draw_indices { seen[i] = true; }
                for &i in &split.test_indices { prop_assert!(!seen[i]); seen[i] = true; }
                prop_assert!(seen.iter().all(|&s| s));
            }
            Err(e) => prop_assert!(matches!(e, corrsel::Error::EmptyTestSet)),
        }
    }

    #[test]
    fn discretisation_is_monotone(v in column(10..80), bins in 2usize..10) {
        let dc = discretize_equal_frequency(&v, bins).unwrap();
        prop_assert!(dc.bin_count() <= bins);
        for i in 0..v.len() {
            prop_assert!(dc.labels[i] < dc.bin_count());
            prop_assert_eq!(dc.label_for(v[i]), dc.labels[i]);
            for j in 0..v.len() {
                if v[i] < v[j] { prop_assert!(dc.labels[i] <= dc.labels[j]); }
                if v[i] == v[j] { prop_assert_eq!(dc.labels[i], dc.labels[j]); }
            }
        }
    }

    #[test]
    fn information_gain_is_bounded_by_class_entropy(
        data in prop::collection::vec((-20i32..20, any::<bool>()), 10..80)
    ) {
        let v: Vec<f64> = data.iter().map(|(x, _)| f64::from(*x)).collect();
        let y: Vec<bool> = data.iter().map(|(_, l)| *l).collect();
        let dc = discretize_equal_frequency(&v, 5).unwrap();
        let pos = y.iter().filter(|&&l| l).count();
        let h = entropy(&[pos, y.len() - pos]);
        let ig = information_gain(&dc, &y).unwrap();
        prop_assert!(ig >= -1e-12 && ig <= h + 1e-12);
    }

    #[test]
    fn vif_is_at_least_one(cols in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 30), 2..5)) {
        let names: Vec<String> = (0..cols.len()).map(|j| format!("x{j}")).collect();
        let d = Dataset::from_columns(names, cols, (0..30).map(|i| i % 3 == 0).collect()).unwrap();
        for (_, v) in vif_scores(&d, &d.all_metrics()).unwrap().entries {
            prop_assert!(v.value() >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn consistency_is_order_free_and_bounded(masks in prop::collection::vec(0u8..32, 1..6)) {
        let fam: Vec<MetricSubset> = masks
            .iter()
            .map(|m| MetricSubset::new((0..5).filter(|b| m & (1 << b) != 0).map(|b| format!("m{b}")).collect()).unwrap())
            .collect();
        let (pct, inter, union) = consistency(&fam);
        prop_assert!((0.0..=100.0).contains(&pct));
        prop_assert!(inter <= union);
        let mut rev = fam.clone();
        rev.reverse();
        prop_assert_eq!(consistency(&rev), (pct, inter, union));
    }
}
