use std::io::Write;

use serde::Serialize;

use exceedance::io::{ingest_csv, ingest_csv_djfm};
use exceedance::{
    cluster_size_distribution, cluster_size_distribution_bootstrap, detect_clusters, extremogram,
    pattern_distribution, pattern_distribution_bootstrap, resolve_threshold, BlockSpec, BootstrapConfig, Estimate,
    Series, ThresholdSpec,
};

use crate::args::{AnalyzeArgs, Common, Format};
use crate::output::{emit, format_or, write_json, Header};
use crate::{CliError, CliResult};

/// Fixed blocks used for single-segment input when `--block` is absent.
const DEFAULT_BLOCK_COUNT: usize = 50;

#[derive(Debug, Serialize)]
struct InputSummary {
    path: String,
    value_col: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    segment_col: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    djfm_date_col: Option<String>,
    n_observations: usize,
    n_segments: usize,
}

#[derive(Debug, Serialize)]
struct BootstrapSummary {
    n_replicates: usize,
    block: String,
    ci_level: f64,
}

#[derive(Debug, Serialize)]
struct PatternResult {
    length: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    estimate: Option<Estimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Debug, Serialize)]
struct ThresholdResult {
    spec: ThresholdSpec<f64>,
    threshold: f64,
    n_exceedances: u64,
    n_clusters: usize,
    n_boundary_truncated: usize,
    cluster_size: Estimate,
    patterns: Vec<PatternResult>,
    extremogram: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct AnalysisReport {
    #[serde(flatten)]
    header: Header,
    input: InputSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    bootstrap: Option<BootstrapSummary>,
    results: Vec<ThresholdResult>,
}

pub(crate) fn run(common: &Common, args: &AnalyzeArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let series: Series = match &args.djfm_date_col {
        Some(date) => ingest_csv_djfm(&args.input, &args.value_col, date)?,
        None => ingest_csv(&args.input, &args.value_col, args.segment_col.as_deref())?,
    };

    let mut specs: Vec<ThresholdSpec<f64>> = args.quantile.iter().map(|&q| ThresholdSpec::Quantile(q)).collect();
    specs.extend(args.threshold.iter().map(|&u| ThresholdSpec::Absolute(u)));
    if specs.is_empty() {
        specs.push(ThresholdSpec::Quantile(0.95));
    }

    let boot = if args.bootstrap_reps > 0 {
        let block = match &args.block {
            Some(b) => b.parse::<BlockSpec>().map_err(CliError::from)?,
            None if series.n_segments() >= 2 => BlockSpec::Segments,
            None => BlockSpec::Fixed(series.len().div_ceil(DEFAULT_BLOCK_COUNT).max(1)),
        };
        Some(BootstrapConfig { n_replicates: args.bootstrap_reps, block, seed: common.seed, ci_level: args.ci_level })
    } else {
        None
    };

    let mut results = Vec::with_capacity(specs.len());
    for spec in specs {
        results.push(analyze_threshold(&series, spec, args, boot.as_ref())?);
    }

    let report = AnalysisReport {
        header: Header::new("analyze", common),
        input: InputSummary {
            path: args.input.display().to_string(),
            value_col: args.value_col.clone(),
            segment_col: args.segment_col.clone(),
            djfm_date_col: args.djfm_date_col.clone(),
            n_observations: series.len(),
            n_segments: series.n_segments(),
        },
        bootstrap: boot.map(|b| BootstrapSummary {
            n_replicates: b.n_replicates,
            block: b.block.to_string(),
            ci_level: b.ci_level,
        }),
        results,
    };
    match format_or(common, Format::Json) {
        Format::Json => emit(common, stdout, |out| write_json(out, &report)),
        Format::Csv => emit(common, stdout, |out| write_plot_data(out, &report)),
    }
}

fn analyze_threshold(
    series: &Series,
    spec: ThresholdSpec<f64>,
    args: &AnalyzeArgs,
    boot: Option<&BootstrapConfig>,
) -> CliResult<ThresholdResult> {
    let u = resolve_threshold(series, spec)?;
    let clusters = detect_clusters(series, u);
    let cluster_size = match boot {
        Some(cfg) => cluster_size_distribution_bootstrap(series, u, args.l_max, cfg)?,
        None => cluster_size_distribution(series, u, args.l_max)?,
    };
    let mut patterns = Vec::new();
    for &len in &args.pattern_len {
        let est = match boot {
            Some(cfg) => pattern_distribution_bootstrap(series, u, len, cfg),
            None => pattern_distribution(series, u, len),
        };
        patterns.push(match est {
            Ok(e) => PatternResult { length: len, estimate: Some(e), note: None },
            // Too few size-`len` clusters for this length; keep the other results.
            Err(e @ (exceedance::Error::NoData(_) | exceedance::Error::DegenerateBootstrap { .. })) => {
                PatternResult { length: len, estimate: None, note: Some(e.to_string()) }
            }
            Err(e) => return Err(e.into()),
        });
    }
    Ok(ThresholdResult {
        spec,
        threshold: u,
        n_exceedances: clusters.n_exceedances_total as u64,
        n_clusters: clusters.len(),
        n_boundary_truncated: clusters.n_boundary_truncated,
        cluster_size,
        patterns,
        extremogram: extremogram(series, u, args.extremogram_max)?,
    })
}

/// Bar heights and interval bounds per figure, one row per bar.
fn write_plot_data(out: &mut dyn Write, report: &AnalysisReport) -> std::io::Result<()> {
    writeln!(out, "figure,threshold,atom,estimate,ci_lo,ci_hi,count")?;
    for r in &report.results {
        let mut bars = |figure: &str, e: &Estimate| -> std::io::Result<()> {
            for i in 0..e.probs.len() {
                writeln!(
                    out,
                    "{figure},{},\"{}\",{},{},{},{}",
                    r.threshold, e.support[i], e.probs[i], e.ci_lo[i], e.ci_hi[i], e.counts[i]
                )?;
            }
            Ok(())
        };
        bars("cluster_size", &r.cluster_size)?;
        for p in &r.patterns {
            if let Some(e) = &p.estimate {
                bars(&format!("pattern_{}", p.length), e)?;
            }
        }
        for (h, v) in r.extremogram.iter().enumerate() {
            writeln!(out, "extremogram,{},{h},{v},{v},{v},", r.threshold)?;
        }
    }
    Ok(())
}
