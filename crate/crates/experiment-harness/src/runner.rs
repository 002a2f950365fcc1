use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use serde_json::json;

use dynamics_core::{ProductSystem, SystemPoint};
use ergodic_stats::{
    basin_survey, lyapunov_estimate, rotation_weyl_modulus_joint, sandwich_check,
    transitivity_probe, weyl_sums, FrequencyBox, Observable, Sampler,
};
use lattice_fourier::ergodicity_certificate;

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::csvout::{fmt_f64, CsvFile};
use crate::manifest::{Assertion, RunManifest};

/// Tolerance for checks that compare two floating routes to the same number
/// (closed forms vs compensated sums).
const CROSS_ROUTE_TOL: f64 = 1e-12;

struct RunOutput {
    outputs: Vec<String>,
    assertions: Vec<Assertion>,
    metrics: BTreeMap<String, serde_json::Value>,
}

/// Execute one experiment: validate, compute, write CSVs, write the
/// manifest. The manifest is written even when assertions fail; only
/// configuration and I/O errors abort before that.
pub fn run(config: &ExperimentConfig) -> anyhow::Result<RunManifest> {
    let started = Instant::now();
    config.validate()?;
    let kind = config.kind()?;
    let system = config.build_system()?;

    let out_dir = resolve_out_dir(config, kind);
    std::fs::create_dir_all(&out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .context("building worker pool")?;

    let result = pool.install(|| -> anyhow::Result<RunOutput> {
        match kind {
            ExperimentKind::Certify => run_certify(config, &system, &out_dir),
            ExperimentKind::Weyl => run_weyl(config, &system, &out_dir),
            ExperimentKind::Lyapunov => run_lyapunov(config, &system, &out_dir),
            ExperimentKind::Basins => run_basins(config, &system, &out_dir),
            ExperimentKind::Sandwich => run_sandwich(config, &system, &out_dir),
            ExperimentKind::Transitivity => run_transitivity(config, &system, &out_dir),
            ExperimentKind::Simulate => run_simulate(config, &system, &out_dir),
        }
    })?;

    let mut echo = config.clone();
    echo.kind = Some(kind);
    echo.out = Some(out_dir.clone());
    let manifest = RunManifest {
        tool: "phlab".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        kind: kind.to_string(),
        config: echo,
        outputs: result.outputs,
        passed: result.assertions.iter().all(|a| a.passed),
        assertions: result.assertions,
        metrics: result.metrics,
        wall_time_secs: started.elapsed().as_secs_f64(),
    };
    manifest
        .write(&out_dir)
        .with_context(|| format!("writing manifest into {}", out_dir.display()))?;
    Ok(manifest)
}

fn resolve_out_dir(config: &ExperimentConfig, kind: ExperimentKind) -> PathBuf {
    if let Some(out) = &config.out {
        return out.clone();
    }
    let root = std::env::var_os("PHLAB_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("runs"));
    root.join(kind.to_string())
}

/// The initial point of orbit-driven experiments: stream 0 of the seeded
/// counter-based sampler.
fn initial_point(config: &ExperimentConfig, system: &ProductSystem) -> SystemPoint {
    let seed = config.seed.expect("validation demands a seed here");
    Sampler::Uniform { seed }.sample(system, 0, 1)
}

fn run_certify(
    config: &ExperimentConfig,
    system: &ProductSystem,
    out_dir: &Path,
) -> anyhow::Result<RunOutput> {
    let cert = ergodicity_certificate(
        system,
        config.box_bound,
        config.k_bound,
        config.margin_floor,
        config.step_budget,
    )?;

    let mut escape_csv = CsvFile::new("escape.csv", "escape-v1", &["m", "n", "steps"]);
    for entry in &cert.escape.entries {
        escape_csv.row(&[
            entry.m.to_string(),
            entry.n.to_string(),
            entry.steps.to_string(),
        ]);
    }

    let r = system.rotation_count();
    let k_cols: Vec<String> = (1..=r).map(|i| format!("k_{i}")).collect();
    let mut header: Vec<&str> = k_cols.iter().map(String::as_str).collect();
    header.push("margin");
    let mut margins_csv = CsvFile::new("margins.csv", "margins-v1", &header);
    for entry in &cert.margins {
        let mut row: Vec<String> = entry.k.iter().map(i64::to_string).collect();
        row.push(fmt_f64(entry.margin));
        margins_csv.row(&row);
    }

    let expected = (2 * cert.escape.box_bound as usize + 1).pow(2) - 1;
    let assertions = vec![
        Assertion::new(
            "escape_enumeration_complete",
            cert.escape.index_count() == expected,
            format!("{} of {expected} indices", cert.escape.index_count()),
        ),
        Assertion::new(
            "escape_within_budget",
            cert.escape.passed(),
            format!(
                "{} failures, max escape step {}",
                cert.escape.failures.len(),
                cert.escape.max_steps
            ),
        ),
        Assertion::new(
            "rotation_margins_above_floor",
            cert.margin_failures.is_empty(),
            format!(
                "min margin {} at k = {:?} (floor {})",
                cert.min_margin, cert.min_margin_k, cert.margin_floor
            ),
        ),
    ];

    let mut metrics = BTreeMap::new();
    metrics.insert("box_bound".into(), json!(cert.escape.box_bound));
    metrics.insert("k_bound".into(), json!(cert.k_bound));
    metrics.insert("index_count".into(), json!(cert.escape.index_count()));
    metrics.insert("max_escape_steps".into(), json!(cert.escape.max_steps));
    metrics.insert("min_margin".into(), json!(cert.min_margin));
    metrics.insert("min_margin_k".into(), json!(cert.min_margin_k));
    metrics.insert("margin_floor".into(), json!(cert.margin_floor));

    Ok(RunOutput {
        outputs: vec![escape_csv.write(out_dir)?, margins_csv.write(out_dir)?],
        assertions,
        metrics,
    })
}

fn run_weyl(
    config: &ExperimentConfig,
    system: &ProductSystem,
    out_dir: &Path,
) -> anyhow::Result<RunOutput> {
    let p0 = initial_point(config, system);
    let fbox = FrequencyBox {
        m_max: config.weyl_m,
        n_max: config.weyl_n,
        k_max: config.weyl_k,
        j_max: config.weyl_j,
    };
    let table = weyl_sums(system, &p0, &fbox, config.n)?;

    let r = system.rotation_count();
    let k_cols: Vec<String> = (1..=r).map(|i| format!("k_{i}")).collect();
    let mut header = vec!["m", "n"];
    header.extend(k_cols.iter().map(String::as_str));
    if system.has_center() {
        header.push("j");
    }
    header.extend(["samples", "modulus"]);
    let mut csv = CsvFile::new("weyl.csv", "weyl-v1", &header);

    let mut zero_row_exact = false;
    let mut max_modulus: f64 = 0.0;
    let mut closed_form_err: f64 = 0.0;
    for row in &table.rows {
        let mut fields = vec![row.index.m.to_string(), row.index.n.to_string()];
        fields.extend(row.index.k.iter().map(i64::to_string));
        if system.has_center() {
            fields.push(row.index.j.unwrap_or(0).to_string());
        }
        fields.push(row.samples.to_string());
        fields.push(fmt_f64(row.modulus));
        csv.row(&fields);

        if row.index.is_zero() {
            zero_row_exact = row.modulus == 1.0;
        } else {
            max_modulus = max_modulus.max(row.modulus);
        }
        // Pure rotation rows admit a closed form for the rounded angles.
        let pure_rotation = row.index.m == 0
            && row.index.n == 0
            && row.index.j.unwrap_or(0) == 0
            && row.index.k.iter().any(|&k| k != 0);
        if pure_rotation {
            let expected = rotation_weyl_modulus_joint(system.rotations(), &row.index.k, config.n);
            closed_form_err = closed_form_err.max((row.modulus - expected).abs());
        }
    }
    let bounded = table.rows.iter().all(|row| row.modulus <= 1.0 + 1e-12);

    let assertions = vec![
        Assertion::new(
            "zero_frequency_row_is_one",
            zero_row_exact,
            "constant character averages to exactly 1",
        ),
        Assertion::new(
            "moduli_at_most_one",
            bounded,
            "triangle inequality on every row",
        ),
        Assertion::new(
            "rotation_rows_match_closed_form",
            closed_form_err <= CROSS_ROUTE_TOL,
            format!("max |direct - closed form| = {closed_form_err:e}"),
        ),
    ];

    let mut metrics = BTreeMap::new();
    metrics.insert("rows".into(), json!(table.rows.len()));
    metrics.insert("max_nonzero_modulus".into(), json!(max_modulus));
    metrics.insert("rotation_closed_form_max_error".into(), json!(closed_form_err));
    metrics.insert("samples".into(), json!(config.n));

    Ok(RunOutput {
        outputs: vec![csv.write(out_dir)?],
        assertions,
        metrics,
    })
}

fn run_lyapunov(
    config: &ExperimentConfig,
    system: &ProductSystem,
    out_dir: &Path,
) -> anyhow::Result<RunOutput> {
    let p0 = initial_point(config, system);
    let est = lyapunov_estimate(system, &p0, config.n)?;

    let mut csv = CsvFile::new("lyapunov.csv", "lyapunov-v1", &["block", "index", "exponent"]);
    for (i, e) in est.cat_exponents.iter().enumerate() {
        csv.row(&["cat".into(), i.to_string(), fmt_f64(*e)]);
    }
    for (i, e) in est.rotation_exponents.iter().enumerate() {
        csv.row(&["rotation".into(), i.to_string(), fmt_f64(*e)]);
    }
    if let Some(e) = est.center_exponent {
        csv.row(&["center".into(), "0".into(), fmt_f64(e)]);
    }

    let rotations_zero = est.rotation_exponents.iter().all(|&e| e == 0.0);
    let symmetric = est.cat_exponents[0] == -est.cat_exponents[1];
    let assertions = vec![
        Assertion::new(
            "rotation_exponents_exactly_zero",
            rotations_zero,
            "identity derivative on every rotation factor",
        ),
        Assertion::new(
            "cat_exponents_sum_to_zero",
            symmetric,
            "unimodular matrix preserves area",
        ),
    ];

    let mut metrics = BTreeMap::new();
    metrics.insert("log_lambda_u".into(), json!(est.cat_exponents[1]));
    metrics.insert("center_exponent".into(), json!(est.center_exponent));
    metrics.insert("samples".into(), json!(est.samples));

    Ok(RunOutput {
        outputs: vec![csv.write(out_dir)?],
        assertions,
        metrics,
    })
}

fn run_basins(
    config: &ExperimentConfig,
    system: &ProductSystem,
    out_dir: &Path,
) -> anyhow::Result<RunOutput> {
    let sampler = if config.grid_sampler {
        Sampler::CenterGrid
    } else {
        Sampler::Uniform {
            seed: config.seed.expect("validation demands a seed here"),
        }
    };
    let report = basin_survey(system, &sampler, config.samples, config.max_iter, config.radius)?;

    let mut csv = CsvFile::new(
        "basins.csv",
        "basins-v1",
        &["sink_index", "position", "count", "fraction", "half_width_3sigma"],
    );
    for sink in &report.sinks {
        csv.row(&[
            sink.sink_index.to_string(),
            fmt_f64(sink.position),
            sink.count.to_string(),
            fmt_f64(sink.fraction),
            fmt_f64(sink.half_width_3sigma),
        ]);
    }

    let counted: u64 = report.sinks.iter().map(|s| s.count).sum();
    let ell = system
        .center()
        .map(|h| h.sink_count())
        .expect("basins run on a center system") as f64;
    let max_fraction_error = report
        .sinks
        .iter()
        .map(|s| (s.fraction - 1.0 / ell).abs())
        .fold(0.0, f64::max);

    let assertions = vec![Assertion::new(
        "counts_sum_to_total",
        counted + report.unresolved == report.total,
        format!(
            "{counted} resolved + {} unresolved = {}",
            report.unresolved, report.total
        ),
    )];

    let mut metrics = BTreeMap::new();
    metrics.insert("ell".into(), json!(ell as u64));
    metrics.insert("sinks_found".into(), json!(report.sinks_found()));
    metrics.insert("unresolved".into(), json!(report.unresolved));
    metrics.insert("total".into(), json!(report.total));
    metrics.insert("max_fraction_error".into(), json!(max_fraction_error));

    Ok(RunOutput {
        outputs: vec![csv.write(out_dir)?],
        assertions,
        metrics,
    })
}

fn run_sandwich(
    config: &ExperimentConfig,
    system: &ProductSystem,
    out_dir: &Path,
) -> anyhow::Result<RunOutput> {
    let p0 = initial_point(config, system);
    let obs = Observable::Character(config.parse_observable()?);
    let report = sandwich_check(
        system,
        &obs,
        &p0,
        config.eps,
        config.n,
        config.max_iter,
        config.radius,
    )?;

    let mut csv = CsvFile::new(
        "sandwich.csv",
        "sandwich-v1",
        &["n", "deviation", "bound", "passed"],
    );
    for rung in &report.ladder {
        csv.row(&[
            rung.n.to_string(),
            fmt_f64(rung.deviation),
            fmt_f64(rung.bound),
            rung.passed.to_string(),
        ]);
    }

    let assertions = vec![Assertion::new(
        "bound_holds_at_every_rung",
        report.passed,
        format!(
            "N_delta = {}, delta = {}, P = {}",
            report.n_delta, report.delta, report.sup_norm
        ),
    )];

    let final_deviation = report.ladder.last().map(|r| r.deviation).unwrap_or(0.0);
    let mut metrics = BTreeMap::new();
    metrics.insert("n_delta".into(), json!(report.n_delta));
    metrics.insert("delta".into(), json!(report.delta));
    metrics.insert("sup_norm".into(), json!(report.sup_norm));
    metrics.insert("sink_index".into(), json!(report.sink_index));
    metrics.insert("final_deviation".into(), json!(final_deviation));
    metrics.insert("lipschitz_estimated".into(), json!(report.lipschitz_estimated));

    Ok(RunOutput {
        outputs: vec![csv.write(out_dir)?],
        assertions,
        metrics,
    })
}

fn run_transitivity(
    config: &ExperimentConfig,
    system: &ProductSystem,
    out_dir: &Path,
) -> anyhow::Result<RunOutput> {
    let p0 = initial_point(config, system);
    let report = transitivity_probe(system, &p0, config.eps, config.n)?;

    let mut csv = CsvFile::new(
        "transitivity.csv",
        "transitivity-v1",
        &["boxes_per_axis", "dimensions", "total_boxes", "visited", "fraction"],
    );
    csv.row(&[
        report.boxes_per_axis.to_string(),
        report.dimensions.to_string(),
        report.total_boxes.to_string(),
        report.visited.to_string(),
        fmt_f64(report.fraction),
    ]);

    let mut metrics = BTreeMap::new();
    metrics.insert("total_boxes".into(), json!(report.total_boxes));
    metrics.insert("visited".into(), json!(report.visited));
    metrics.insert("fraction".into(), json!(report.fraction));
    metrics.insert("samples".into(), json!(config.n));

    Ok(RunOutput {
        outputs: vec![csv.write(out_dir)?],
        assertions: Vec::new(),
        metrics,
    })
}

fn run_simulate(
    config: &ExperimentConfig,
    system: &ProductSystem,
    out_dir: &Path,
) -> anyhow::Result<RunOutput> {
    let p0 = initial_point(config, system);
    let r = system.rotation_count();
    let w_cols: Vec<String> = (1..=r).map(|i| format!("w_{i}")).collect();
    let mut header = vec!["step", "x", "y"];
    header.extend(w_cols.iter().map(String::as_str));
    if system.has_center() {
        header.push("z");
    }
    let mut csv = CsvFile::new("orbit.csv", "orbit-v1", &header);

    for (i, p) in system.orbit(p0, config.n, config.stride)?.enumerate() {
        let mut fields = vec![
            (i as u64 * config.stride).to_string(),
            fmt_f64(p.x.to_f64()),
            fmt_f64(p.y.to_f64()),
        ];
        fields.extend(p.w.iter().map(|w| fmt_f64(w.to_f64())));
        if let Some(z) = p.z {
            fields.push(fmt_f64(z));
        }
        csv.row(&fields);
    }

    let mut metrics = BTreeMap::new();
    metrics.insert("samples".into(), json!(config.n));
    metrics.insert("stride".into(), json!(config.stride));

    Ok(RunOutput {
        outputs: vec![csv.write(out_dir)?],
        assertions: Vec::new(),
        metrics,
    })
}
