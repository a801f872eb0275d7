use std::io::Write;

use serde::Serialize;

use exceedance::io::write_series;
use exceedance::simulate::{simulate_brown_resnick_path, simulate_mar, simulate_moving_max};
use exceedance::{Model, ModelSpec, PowerVariogram, Series};

use crate::args::{Common, Format, ModelArgs, ModelKind, SimulateArgs};
use crate::output::{emit, format_or, write_json, Header};
use crate::{CliError, CliResult};

pub(crate) fn model_spec(m: &ModelArgs) -> CliResult<Model> {
    let spec = match m.model {
        ModelKind::Mar => {
            let a = m.a.ok_or_else(|| CliError::usage("--model mar needs --a"))?;
            ModelSpec::Mar { a }
        }
        ModelKind::MovingMax => ModelSpec::MovingMax,
        ModelKind::BrownResnick => ModelSpec::BrownResnick { variogram: PowerVariogram::new(m.scale, m.exponent)? },
    };
    spec.validate()?;
    Ok(spec)
}

#[derive(Serialize)]
struct SimulationReport<'a> {
    #[serde(flatten)]
    header: Header,
    model: &'a Model,
    n: usize,
    n_segments: usize,
    ks_statistic: f64,
    segments: &'a [Vec<f64>],
}

pub(crate) fn run(common: &Common, args: &SimulateArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let model = model_spec(&args.model)?;
    let series: Series = match model {
        ModelSpec::Mar { a } => Series::single(simulate_mar(a, args.n, common.seed)?)?,
        ModelSpec::MovingMax => Series::single(simulate_moving_max(args.n, common.seed)?)?,
        ModelSpec::BrownResnick { .. } => simulate_brown_resnick_path(&model, args.n, args.block, common.seed)?,
    };
    let ks = ks_unit_frechet(&series);
    writeln!(
        stderr,
        "simulated {} values in {} segment(s); Kolmogorov-Smirnov distance to unit Frechet: {ks:.6}",
        series.len(),
        series.n_segments()
    )?;
    match format_or(common, Format::Csv) {
        Format::Csv => emit(common, stdout, |out| write_series(&series, out).map_err(to_io)),
        Format::Json => {
            let report = SimulationReport {
                header: Header::new("simulate", common),
                model: &model,
                n: series.len(),
                n_segments: series.n_segments(),
                ks_statistic: ks,
                segments: series.segments(),
            };
            emit(common, stdout, |out| write_json(out, &report))
        }
    }
}

fn to_io(e: exceedance::Error) -> std::io::Error {
    match e {
        exceedance::Error::Io(e) => e,
        other => std::io::Error::other(other.to_string()),
    }
}

/// `sup_x |F_n(x) - exp(-1/x)|` over the pooled values.
pub(crate) fn ks_unit_frechet(series: &Series) -> f64 {
    let mut v: Vec<f64> = series.values().collect();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = if x > 0.0 { (-1.0 / x).exp() } else { 0.0 };
            ((i as f64 + 1.0) / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_small_for_frechet_sample() {
        let s = Series::single(simulate_mar(0.0, 20_000, 1).unwrap()).unwrap();
        // 1.63 / sqrt(n) is the 1% critical value.
        assert!(ks_unit_frechet(&s) < 1.63 / (20_000f64).sqrt());
    }
}
