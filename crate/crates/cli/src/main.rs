use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use corrsel::autospearman::{DEFAULT_SP_T, DEFAULT_VIF_T};
use corrsel::data::{generate_synthetic, load_csv, write_csv, CloneGroup, SyntheticSpec};
use corrsel::harness::{correlation_flags_at, load_config, run_experiment, DEFAULT_SEED};
use corrsel::stats::{spearman_matrix, vif_scores};
use corrsel::{auto_spearman, AutoSpearmanParams, Error, ErrorClass, MetricSubset, SelectorConfig, SelectorId};

#[derive(Parser)]
#[command(name = "corrsel", version, about = "Correlated-metric elimination and feature-selection benchmarking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Select metrics from a CSV dataset.
    Select(SelectArgs),
    /// Show pairwise Spearman correlations, VIF scores and correlation flags.
    Diagnose(DiagnoseArgs),
    /// Run a bootstrap experiment described by a JSON config.
    Experiment {
        config: PathBuf,
    },
    /// Write a synthetic dataset with planted clone metrics.
    Synth(SynthArgs),
}

#[derive(Args)]
struct SelectArgs {
    dataset: PathBuf,
    /// Name of the 0/1 (or clean/defective) outcome column.
    #[arg(long)]
    outcome: String,
    #[arg(long, default_value = "AutoSpearman")]
    selector: SelectorId,
    #[arg(long = "sp-t", default_value_t = DEFAULT_SP_T)]
    sp_t: f64,
    #[arg(long = "vif-t", default_value_t = DEFAULT_VIF_T)]
    vif_t: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    bins: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DiagnoseArgs {
    dataset: PathBuf,
    /// Name of the 0/1 (or clean/defective) outcome column.
    #[arg(long)]
    outcome: String,
    /// Comma-separated metric names; all metrics when omitted.
    #[arg(long, value_delimiter = ',')]
    metrics: Option<Vec<String>>,
    #[arg(long = "sp-t", default_value_t = DEFAULT_SP_T)]
    sp_t: f64,
    #[arg(long = "vif-t", default_value_t = DEFAULT_VIF_T)]
    vif_t: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long = "base-metrics", default_value_t = 4)]
    base_metrics: usize,
    /// Number of clone groups, planted on base metrics 0, 1, ...
    #[arg(long = "clone-groups", default_value_t = 3)]
    clone_groups: usize,
    /// Clones per group.
    #[arg(long = "clone-count", default_value_t = 1)]
    clone_count: usize,
    #[arg(long = "noise-sd", default_value_t = 0.01)]
    noise_sd: f64,
    #[arg(long, default_value_t = 500)]
    modules: usize,
    /// Comma-separated log-odds weights, one per base metric.
    #[arg(long, value_delimiter = ',')]
    signal: Option<Vec<f64>>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value = "bug")]
    outcome: String,
    #[arg(long)]
    out: PathBuf,
}

fn exit_code(e: &Error) -> u8 {
    match e.class() {
        ErrorClass::Usage => 2,
        ErrorClass::Data => 3,
        ErrorClass::Computation => 4,
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var("CORRSEL_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("CORRSEL_THREADS must be a non-negative integer, got {raw:?}")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    }
    Ok(())
}

fn cmd_select(a: SelectArgs) -> Result<(), Error> {
    let params = AutoSpearmanParams::new(a.sp_t, a.vif_t)?;
    let d = load_csv(&a.dataset, &a.outcome)?;
    let config = SelectorConfig {
        bins: a.bins,
        base_seed: a.seed,
        autospearman: params,
        ..SelectorConfig::default()
    };
    config.validate()?;
    let (subset, trace) = if a.selector == SelectorId::AutoSpearman {
        let (s, t) = auto_spearman(&d, &params)?;
        (s, Some(t))
    } else {
        (corrsel::selectors::select(a.selector, &d, &config, a.seed)?, None)
    };
    if a.json {
        let mut out = serde_json::json!({
            "selector": a.selector,
            "seed": a.seed,
            "selected": subset,
        });
        if let Some(t) = trace {
            out["trace"] = serde_json::to_value(t)?;
        }
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        for name in subset.iter() {
            println!("{name}");
        }
        if let Some(t) = trace {
            for step in &t.steps {
                let kept = step.kept.as_deref().map(|k| format!(" kept {k}")).unwrap_or_default();
                eprintln!("# {:?}: removed {}{kept} ({})", step.phase, step.removed, step.statistic);
            }
        }
    }
    Ok(())
}

fn cmd_diagnose(a: DiagnoseArgs) -> Result<(), Error> {
    let d = load_csv(&a.dataset, &a.outcome)?;
    let subset = match a.metrics {
        Some(names) => MetricSubset::new(names.into_iter().map(|n| n.trim().to_string()).collect())?,
        None => d.all_metrics(),
    };
    let proj = d.project(&subset)?;
    let rho = spearman_matrix(&proj);
    let vifs = vif_scores(&proj, &proj.all_metrics())?;
    let flags = correlation_flags_at(&subset, &d, a.sp_t, a.vif_t)?;
    if a.json {
        let out = serde_json::json!({
            "metrics": subset,
            "spearman": rho.rows(),
            "vif": vifs.entries.iter().map(|(n, v)| serde_json::json!({"metric": n, "vif": v})).collect::<Vec<_>>(),
            "flags": flags,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(());
    }
    let names = subset.names();
    let width = names.iter().map(|n| n.len()).max().unwrap_or(0).max(7);
    println!("Spearman correlation");
    print!("{:width$}", "");
    for n in names {
        print!(" {n:>width$}");
    }
    println!();
    for (i, n) in names.iter().enumerate() {
        print!("{n:width$}");
        for j in 0..names.len() {
            print!(" {:>width$.3}", rho.get(i, j));
        }
        println!();
    }
    println!();
    println!("VIF");
    for (n, v) in &vifs.entries {
        match v.is_unbounded() {
            true => println!("{n:width$} inf"),
            false => println!("{n:width$} {:.3}", v.value()),
        }
    }
    println!();
    println!("has_collinearity: {}", flags.has_collinearity);
    println!("has_multicollinearity: {}", flags.has_multicollinearity);
    Ok(())
}

fn cmd_experiment(path: PathBuf) -> Result<(), Error> {
    let config = load_config(&path)?;
    let report = run_experiment(&config)?;
    println!("report written to {}", config.output.display());
    println!();
    println!("{:<14} {:>12}", "selector", "consistency");
    for c in &report.consistency_across_samples {
        println!("{:<14} {:>11.1}%", c.selector.to_string(), c.percentage);
    }
    if !report.performance.is_empty() {
        println!();
        println!("{:<14} {:<10} {:<5} {:>12}", "selector", "classifier", "meas", "median dpts");
        for p in &report.performance {
            println!(
                "{:<14} {:<10} {:<5} {:>12.2}",
                p.selector.to_string(),
                p.classifier.to_string(),
                p.measure.to_string(),
                p.median
            );
        }
    }
    if !report.failures.is_empty() {
        eprintln!("{} cell(s) failed; see the report's failure records", report.failures.len());
    }
    Ok(())
}

fn cmd_synth(a: SynthArgs) -> Result<(), Error> {
    let spec = SyntheticSpec {
        base_metric_count: a.base_metrics,
        clone_groups: (0..a.clone_groups)
            .map(|source| CloneGroup {
                source,
                count: a.clone_count,
                noise_sd: a.noise_sd,
            })
            .collect(),
        module_count: a.modules,
        signal_coefficients: a.signal.unwrap_or_default(),
        seed: a.seed,
    };
    let d = generate_synthetic(&spec)?;
    write_csv(&d, &a.out, &a.outcome)?;
    println!("{}", a.out.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Select(a) => cmd_select(a),
        Command::Diagnose(a) => cmd_diagnose(a),
        Command::Experiment { config } => cmd_experiment(config),
        Command::Synth(a) => cmd_synth(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
