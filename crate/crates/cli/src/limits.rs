use std::io::Write;

use serde::Serialize;

use exceedance::limit::{
    asymptotic_covariance, limit_cluster_size_mc, limit_pattern_mc, mar_limit_cluster_size_distribution,
    mixing_diagnostics, MixingReport, RateSchedule, TailProcessSampler,
};
use exceedance::{Covariance, Estimate, Model, ModelSpec, WindowEvent};

use crate::args::{Common, Format, LimitsArgs};
use crate::output::{emit, format_or, write_json, Header};
use crate::simulate::model_spec;
use crate::{CliError, CliResult};

#[derive(Debug, Serialize)]
struct ExtremalCoefficient {
    h: i64,
    theta: f64,
}

#[derive(Debug, Serialize)]
struct LimitPattern {
    length: usize,
    estimate: Estimate,
}

#[derive(Debug, Serialize)]
struct CovarianceReport {
    events: Vec<String>,
    #[serde(flatten)]
    result: Covariance,
    /// `sqrt(diag(transformed))`: asymptotic standard deviations of the
    /// cluster-size ratios per unit `sqrt(n P(X_0 > u))`.
    asymptotic_sd: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct LimitsReport {
    #[serde(flatten)]
    header: Header,
    model: Model,
    n_mc: usize,
    cluster_size: Estimate,
    patterns: Vec<LimitPattern>,
    #[serde(skip_serializing_if = "Option::is_none")]
    extremal_coefficients: Option<Vec<ExtremalCoefficient>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    covariance: Option<CovarianceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mixing: Option<MixingReport<f64>>,
}

pub(crate) fn run(common: &Common, args: &LimitsArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let model = model_spec(&args.model)?;
    let end = args.pattern_len.iter().copied().fold(args.l_max, usize::max);
    let sampler = TailProcessSampler::new(model, end)?;
    let seed = common.seed;

    let cluster_size = match model {
        ModelSpec::Mar { a } => mar_limit_cluster_size_distribution(a, args.l_max)?,
        _ => limit_cluster_size_mc(&sampler, args.l_max, args.n_mc, seed)?,
    };
    let patterns = args
        .pattern_len
        .iter()
        .map(|&l| Ok(LimitPattern { length: l, estimate: limit_pattern_mc(&sampler, l, args.n_mc, seed)? }))
        .collect::<CliResult<Vec<_>>>()?;

    let extremal_coefficients = args.extremal_coefficients.map(|(lo, hi)| {
        (lo..=hi)
            .map(|h| ExtremalCoefficient {
                h,
                theta: match model {
                    ModelSpec::BrownResnick { variogram } => variogram.extremal_coefficient(h),
                    // X_h = max(a^h X_0, independent part), so θ(h) = 2 - a^|h|.
                    ModelSpec::Mar { a } => 2.0 - a.powi(h.unsigned_abs() as i32),
                    ModelSpec::MovingMax => unreachable!("rejected by the tail sampler"),
                },
            })
            .collect()
    });

    let covariance = if args.covariance {
        let mut events = vec![WindowEvent::cluster_start()];
        let mut names = vec!["cluster_start".to_string()];
        for l in 1..=args.l_max {
            events.push(WindowEvent::cluster_of_size(l)?);
            names.push(format!("cluster_size_{l}"));
        }
        let result = asymptotic_covariance(&sampler, &events, args.h_trunc, args.n_mc, seed)?;
        let asymptotic_sd =
            (0..result.transformed.rows()).map(|i| result.transformed[(i, i)].max(0.0).sqrt()).collect();
        Some(CovarianceReport { events: names, result, asymptotic_sd })
    } else {
        None
    };

    let mixing = if args.mixing_diagnostics {
        let ModelSpec::BrownResnick { variogram } = model else {
            return Err(CliError::usage("mixing diagnostics need --model brown-resnick"));
        };
        Some(mixing_diagnostics(
            &variogram,
            &[10.0, 100.0, 1000.0],
            &[5, 10, 20, 40],
            &[1, 2, 5, 10],
            200,
            Some(&RateSchedule::default()),
        )?)
    } else {
        None
    };

    let report = LimitsReport {
        header: Header::new("limits", common),
        model,
        n_mc: args.n_mc,
        cluster_size,
        patterns,
        extremal_coefficients,
        covariance,
        mixing,
    };
    match format_or(common, Format::Json) {
        Format::Json => emit(common, stdout, |out| write_json(out, &report)),
        Format::Csv => emit(common, stdout, |out| write_csv(out, &report)),
    }
}

fn write_csv(out: &mut dyn Write, report: &LimitsReport) -> std::io::Result<()> {
    writeln!(out, "figure,atom,estimate,ci_lo,ci_hi,se")?;
    let mut bars = |figure: &str, e: &Estimate| -> std::io::Result<()> {
        for i in 0..e.probs.len() {
            let se = e.se.as_ref().map(|s| s[i].to_string()).unwrap_or_default();
            writeln!(out, "{figure},\"{}\",{},{},{},{se}", e.support[i], e.probs[i], e.ci_lo[i], e.ci_hi[i])?;
        }
        Ok(())
    };
    bars("cluster_size", &report.cluster_size)?;
    for p in &report.patterns {
        bars(&format!("pattern_{}", p.length), &p.estimate)?;
    }
    if let Some(coefs) = &report.extremal_coefficients {
        for c in coefs {
            writeln!(out, "extremal_coefficient,{},{},{},{},0", c.h, c.theta, c.theta, c.theta)?;
        }
    }
    Ok(())
}
