use corrsel::classifiers::ClassifierKind;
use corrsel::data::{generate_synthetic, CloneGroup, SyntheticSpec};
use corrsel::harness::{
    build_report, correlation_flags, performance_for_sample, run_experiment, run_selection_grid, sample_split,
    strip_timestamp, CellOutcome, DatasetSource, ExperimentConfig, Measure,
};
use corrsel::{Dataset, MetricSubset, SelectorConfig, SelectorId};

fn fixture() -> Dataset {
    generate_synthetic(&SyntheticSpec {
        base_metric_count: 5,
        clone_groups: vec![CloneGroup { source: 0, count: 1, noise_sd: 0.01 }],
        module_count: 200,
        signal_coefficients: vec![1.0, 0.5, 0.0, -0.5, 0.0],
        seed: 3,
    })
    .unwrap()
}

fn config(out: std::path::PathBuf) -> ExperimentConfig {
    serde_json::from_value(serde_json::json!({
        "dataset": {
            "base_metric_count": 5,
            "clone_groups": [{"source": 0, "count": 1, "noise_sd": 0.01}],
            "module_count": 200,
            "signal_coefficients": [1.0, 0.5, 0.0, -0.5, 0.0],
            "seed": 3
        },
        "selectors": ["AutoSpearman", "IG", "CFS"],
        "bootstrap_count": 4,
        "output": out,
    }))
    .unwrap()
}

#[test]
fn grid_is_complete_and_deterministic() {
    let d = fixture();
    let selectors = [SelectorId::AutoSpearman, SelectorId::Ig, SelectorId::StepBwd];
    let a = run_selection_grid(&d, "fx", &selectors, 3, 11, &SelectorConfig::default());
    let b = run_selection_grid(&d, "fx", &selectors, 3, 11, &SelectorConfig::default());
    assert_eq!(a, b);
    assert_eq!(a.cells.len(), 9);
    let one = run_selection_grid(&d, "fx", &selectors, 1, 11, &SelectorConfig::default());
    assert_eq!(one.cells.len(), 3);
    assert_eq!(one.get(SelectorId::Ig, 0), a.get(SelectorId::Ig, 0));
}

#[test]
fn single_row_dataset_cells_fail_with_records() {
    let d = Dataset::from_columns(vec!["x".into()], vec![vec![1.0, 2.0]], vec![true, false]).unwrap();
    // two rows: some draws cover both rows, the retry loop must still find a split
    let grid = run_selection_grid(&d, "tiny", &[SelectorId::AutoSpearman], 5, 1, &SelectorConfig::default());
    assert_eq!(grid.cells.len(), 5);
    for cell in grid.cells.values() {
        if let CellOutcome::Failed { error } = cell {
            assert!(!error.is_empty());
        }
    }
}

#[test]
fn all_metrics_subset_has_zero_deltas_and_empty_subset_scores_half() {
    let d = fixture();
    let (_, split) = sample_split(&d, 5, 0).unwrap();
    let mut reversed: Vec<String> = d.metric_names().to_vec();
    reversed.reverse();
    let subsets = vec![
        (SelectorId::Cfs, d.all_metrics()),
        (SelectorId::Ig, MetricSubset::new(reversed).unwrap()),
        (SelectorId::Chisq, MetricSubset::empty()),
    ];
    let g = performance_for_sample(&split, 0, &subsets, &ClassifierKind::ALL, 5);
    assert!(g.failures.is_empty(), "{:?}", g.failures);
    for delta in &g.deltas {
        match delta.selector {
            SelectorId::Chisq => {
                if delta.measure == Measure::Auc {
                    assert_eq!(delta.p_selected, 0.5);
                }
            }
            _ => assert_eq!(delta.delta_pts, 0.0, "{delta:?}"),
        }
    }
    assert_eq!(g.deltas.len(), 3 * 2 * 3);
}

#[test]
fn autospearman_subsets_never_flag() {
    let d = fixture();
    let grid = run_selection_grid(&d, "fx", &[SelectorId::AutoSpearman], 6, 2, &SelectorConfig::default());
    for j in 0..6 {
        let (_, split) = sample_split(&d, 2, j).unwrap();
        let s = grid.get(SelectorId::AutoSpearman, j).and_then(CellOutcome::subset).unwrap();
        let f = correlation_flags(s, &split.train).unwrap();
        assert!(!f.has_collinearity && !f.has_multicollinearity);
    }
}

#[test]
fn flags_on_clone_pair_and_degenerate_subsets() {
    let d = fixture();
    let pair = MetricSubset::new(vec!["m0".into(), "m0_c0".into()]).unwrap();
    assert!(correlation_flags(&pair, &d).unwrap().has_collinearity);
    for s in [MetricSubset::empty(), MetricSubset::new(vec!["m1".into()]).unwrap()] {
        let f = correlation_flags(&s, &d).unwrap();
        assert!(!f.has_collinearity && !f.has_multicollinearity);
    }
}

#[test]
fn report_is_reproducible_from_its_echoed_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path().join("r.json"));
    let report = run_experiment(&cfg).unwrap();
    assert_eq!(report.schema_version, 1);
    assert_eq!(report.config.sp_t, 0.7);
    assert_eq!(report.config.vif_t, 5.0);
    let written: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    let echoed: ExperimentConfig = serde_json::from_value(written["config"].clone()).unwrap();
    let (id, d) = echoed.load_dataset().unwrap();
    let again = build_report(&echoed, &id, &d).unwrap();
    let again: serde_json::Value = serde_json::from_str(&serde_json::to_string(&again).unwrap()).unwrap();
    assert_eq!(strip_timestamp(again), strip_timestamp(written));
    let auto = report.correlation_flags.iter().find(|f| f.selector == SelectorId::AutoSpearman).unwrap();
    assert_eq!(auto.collinearity_pct, 0.0);
    assert_eq!(auto.multicollinearity_pct, 0.0);
    assert_eq!(report.consistency_across_selectors.len(), 4);
}

#[test]
fn csv_output_lists_every_delta() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(dir.path().join("r.json"));
    cfg.csv_output = Some(dir.path().join("cells.csv"));
    cfg.classifiers = vec![ClassifierKind::Logistic];
    run_experiment(&cfg).unwrap();
    let text = std::fs::read_to_string(dir.path().join("cells.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "sample,selector,classifier,measure,p_selected,p_all,delta_pts");
    assert_eq!(lines.count(), 4 * 3 * 3);
}

#[test]
fn csv_dataset_needs_an_outcome_column() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(dir.path().join("r.json"));
    cfg.dataset = DatasetSource::Path(dir.path().join("data.csv"));
    let err = cfg.load_dataset().unwrap_err();
    assert_eq!(err.class(), corrsel::ErrorClass::Usage);
}
