//! Implementations of the three subcommands.

use std::fs;
use std::path::Path;
use std::time::Instant;

use pokm_core::calibration::{interval_geometry, OverlapSpec};
use pokm_core::datagen::{self, ScenarioConfig};
use pokm_core::engine::{self, FitConfig, InitMethod};
use pokm_core::graph;

use crate::schema::{
    ConfigEcho, ModelFile, PairCount, ReportFile, Timing, TruthFile, REPORT_SCHEMA_VERSION,
    TRUTH_SCHEMA_VERSION,
};
use crate::{CliError, ClusterArgs, GenerateArgs, InitArg};

type CliResult = Result<(), CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn data(err: impl std::fmt::Display) -> CliError {
    CliError::Data(err.to_string())
}

/// Resolves the exponent / overlap pair from the flags; the default is an
/// overlap level of 1/3.
fn resolve_overlap(m: Option<f64>, overlap: Option<f64>) -> Result<OverlapSpec, CliError> {
    match (m, overlap) {
        (Some(m), None) => {
            OverlapSpec::from_m(m).map_err(|_| usage(format!("--m must be at least 1, got {m}")))
        }
        (None, Some(r)) => OverlapSpec::from_overlap(r)
            .map_err(|_| usage(format!("--overlap must lie in [0, 1), got {r}"))),
        (None, None) => Ok(OverlapSpec::from_overlap(1.0 / 3.0).expect("1/3 is in range")),
        (Some(_), Some(_)) => Err(usage("--m conflicts with --overlap".to_string())),
    }
}

pub fn run_cluster(args: &ClusterArgs) -> CliResult {
    let spec = resolve_overlap(args.m, args.overlap)?;
    if !args.gamma.is_finite() || !(0.0..=1.0).contains(&args.gamma) {
        return Err(usage(format!(
            "--gamma must lie in [0, 1], got {}",
            args.gamma
        )));
    }
    if args.k == 0 {
        return Err(usage("--k must be at least 1"));
    }
    if args.restarts == 0 {
        return Err(usage("--restarts must be at least 1"));
    }
    if args.max_iter == 0 {
        return Err(usage("--max-iter must be at least 1"));
    }
    if args.label_column.is_some() && !args.has_header {
        return Err(usage("--label-column requires --has-header"));
    }

    let mut dataset = datagen::load_csv(&args.input, args.has_header, args.label_column.as_deref())
        .map_err(data)?;
    if args.standardize {
        dataset = datagen::standardize(&dataset).map_err(data)?;
    }

    let config = FitConfig {
        k: args.k,
        m: spec.m,
        init: match args.init {
            InitArg::RandomPoints => InitMethod::RandomPoints,
            InitArg::GreedySpread => InitMethod::GreedySpread,
        },
        restarts: args.restarts,
        max_iterations: args.max_iter,
        seed: args.seed,
    };

    let started = Instant::now();
    let outcome = engine::fit_restarts(&dataset, &config).map_err(data)?;
    let elapsed = started.elapsed().as_secs_f64();
    let model = &outcome.best;
    let relations = graph::extract_graph(model, args.gamma).map_err(data)?;

    let report = ReportFile {
        schema_version: REPORT_SCHEMA_VERSION,
        config: ConfigEcho {
            input: args.input.display().to_string(),
            has_header: args.has_header,
            label_column: args.label_column.clone(),
            standardize: args.standardize,
            k: args.k,
            m: spec.m,
            overlap: spec.r_overlap,
            gamma: args.gamma,
            restarts: args.restarts,
            max_iterations: args.max_iter,
            init: match args.init {
                InitArg::RandomPoints => "random-points".to_string(),
                InitArg::GreedySpread => "greedy-spread".to_string(),
            },
            seed: args.seed,
        },
        per_restart_objectives: outcome.objectives.clone(),
        winning_restart: outcome.winner,
        objective: model.objective,
        iterations: model.iterations,
        converged: model.converged,
        cluster_sizes: model.cluster_sizes(),
        overlap_counts: graph::count_overlaps(model)
            .into_iter()
            .map(|((a, b), count)| PairCount { a, b, count })
            .collect(),
        edges: relations
            .edges()
            .iter()
            .map(|e| PairCount {
                a: e.a,
                b: e.b,
                count: e.overlap_count,
            })
            .collect(),
        timing: Timing {
            wall_clock_seconds: elapsed,
        },
    };

    fs::create_dir_all(&args.out).map_err(data)?;
    write_json(
        &args.out.join("model.json"),
        &ModelFile::new(model, &dataset),
    )?;
    fs::write(args.out.join("graph.json"), relations.to_json()).map_err(data)?;
    fs::write(args.out.join("graph.dot"), relations.to_dot()).map_err(data)?;
    write_json(&args.out.join("report.json"), &report)?;

    println!(
        "fitted k={} m={:.6} from {} restarts: objective {:.6} (restart {}, {} iterations{})",
        args.k,
        spec.m,
        args.restarts,
        model.objective,
        outcome.winner,
        model.iterations,
        if model.converged {
            ""
        } else {
            ", iteration cap hit"
        },
    );
    println!("cluster sizes: {:?}", model.cluster_sizes());
    if relations.edges().is_empty() {
        println!("relations: none above gamma={}", args.gamma);
    } else {
        for e in relations.edges() {
            println!(
                "relation C{} -- C{} (overlap {})",
                e.a, e.b, e.overlap_count
            );
        }
    }
    println!(
        "wrote model.json, graph.json, graph.dot, report.json to {}",
        args.out.display()
    );
    Ok(())
}

pub fn run_generate(args: &GenerateArgs) -> CliResult {
    let text = fs::read_to_string(&args.scenario).map_err(data)?;
    let config: ScenarioConfig = serde_json::from_str(&text)
        .map_err(|e| usage(format!("malformed scenario config: {e}")))?;
    let truth = datagen::generate_scenario(&config.blobs, &config.bridges, config.seed)
        .map_err(|e| usage(e.to_string()))?;
    fs::create_dir_all(&args.out).map_err(data)?;
    datagen::write_csv(&truth.dataset, &args.out.join("dataset.csv")).map_err(data)?;
    let truth_file = TruthFile {
        schema_version: TRUTH_SCHEMA_VERSION,
        seed: config.seed,
        n_points: truth.dataset.len(),
        true_bridges: truth.true_bridges.iter().copied().collect(),
    };
    write_json(&args.out.join("truth.json"), &truth_file)?;
    println!(
        "wrote {} points and {} true bridge pair(s) to {}",
        truth.dataset.len(),
        truth_file.true_bridges.len(),
        args.out.display()
    );
    Ok(())
}

pub fn run_calibrate(m: Option<f64>, overlap: Option<f64>) -> CliResult {
    if m.is_none() && overlap.is_none() {
        return Err(usage("provide exactly one of --overlap or --m"));
    }
    let spec = resolve_overlap(m, overlap)?;
    let geometry = interval_geometry(spec.m, 1.0).expect("validated above");
    println!("overlap level: {:.6}", spec.r_overlap);
    println!("exponent m:    {:.6}", spec.m);
    println!("interval geometry on a unit interval between two means:");
    println!("  exclusive (each side): {:.6}", geometry.l_exclusive);
    println!("  overlap:               {:.6}", geometry.l_overlap);
    println!("  total:                 {:.6}", geometry.l_total);
    Ok(())
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> CliResult {
    let mut text = serde_json::to_string_pretty(value).map_err(data)?;
    text.push('\n');
    fs::write(path, text).map_err(data)
}
