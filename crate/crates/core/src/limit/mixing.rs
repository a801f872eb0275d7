use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;
use crate::simulate::PowerVariogram;

/// Parametric threshold and block sequences `u_n = n^{β1}`, `r_n = ⌈n^{β2}⌉`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateSchedule {
    pub beta1: f64,
    pub beta2: f64,
    /// Polynomial decay exponent assumed for the mixing coefficients.
    pub delta: f64,
    pub n_grid: Vec<f64>,
}

impl Default for RateSchedule {
    fn default() -> Self {
        Self {
            beta1: 0.5,
            beta2: 0.25,
            delta: 8.0,
            n_grid: (3..=9).map(|e| 10f64.powi(e)).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MixingRow<T> {
    pub u: T,
    pub r: usize,
    pub value: T,
    /// Last included term.
    pub remainder: T,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnticlusteringRow<T> {
    pub k: usize,
    pub r: usize,
    pub value: T,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlphaBoundRow<T> {
    pub h: usize,
    pub bound: T,
    pub remainder: T,
}

#[derive(Debug, Clone, Serialize)]
pub struct RateRow {
    pub n: f64,
    pub u_n: f64,
    pub r_n: usize,
    pub p_n: f64,
    pub n_p: f64,
    pub r_p: f64,
    pub consistency: f64,
    pub add_cond: f64,
    pub add_cond_delta0: f64,
    pub mixing: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrendCheck {
    pub quantity: String,
    /// `"infinity"` or `"zero"`.
    pub required_limit: String,
    /// Least-squares slope of `ln|value|` against `ln n` over the upper half of the grid.
    pub log_slope: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MixingReport<T> {
    pub h_trunc: usize,
    pub mixing_series: Vec<MixingRow<T>>,
    pub anticlustering: Vec<AnticlusteringRow<T>>,
    pub alpha_bounds: Vec<AlphaBoundRow<T>>,
    pub rates: Vec<RateRow>,
    pub trends: Vec<TrendCheck>,
    pub notes: Vec<String>,
}

/// Diagnostics for a Brown–Resnick variogram. The α-mixing bound is
/// evaluated at every lag in `r_grid`.
pub fn mixing_diagnostics<T: Real>(
    variogram: &PowerVariogram<T>,
    u_grid: &[T],
    r_grid: &[usize],
    k_grid: &[usize],
    h_trunc: usize,
    schedule: Option<&RateSchedule>,
) -> Result<MixingReport<T>> {
    variogram.validate()?;
    mixing_diagnostics_with(|h| variogram.extremal_dependence(h), u_grid, r_grid, k_grid, h_trunc, schedule)
}

/// As [`mixing_diagnostics`] for an arbitrary dependence function
/// `h -> 2 - θ(h)`.
pub fn mixing_diagnostics_with<T: Real>(
    dependence: impl Fn(i64) -> T,
    u_grid: &[T],
    r_grid: &[usize],
    k_grid: &[usize],
    h_trunc: usize,
    schedule: Option<&RateSchedule>,
) -> Result<MixingReport<T>> {
    if h_trunc == 0 {
        return Err(Error::invalid("h_trunc must be >= 1"));
    }
    if u_grid.iter().any(|u| !u.is_finite()) {
        return Err(Error::invalid("u grid must be finite"));
    }
    let two = T::lit(2.0);
    let dep = |h: usize| dependence(h as i64);

    let mixing_sum = |u: T, r: usize| {
        let term = |h: usize| T::lit((h * h) as f64) * dep(h + r);
        let value = (1..=h_trunc).map(term).sum::<T>() * u;
        (value, u * term(h_trunc))
    };

    let mut mixing_series = Vec::new();
    for &u in u_grid {
        for &r in r_grid {
            let (value, remainder) = mixing_sum(u, r);
            mixing_series.push(MixingRow { u, r, value, remainder });
        }
    }

    let mut anticlustering = Vec::new();
    for &r in r_grid {
        for &k in k_grid {
            let value = (k.max(1)..=r).map(dep).sum();
            anticlustering.push(AnticlusteringRow { k, r, value });
        }
    }

    let alpha_bounds = r_grid
        .iter()
        .map(|&h| {
            let term = |s: usize| two * T::lit((s + 1) as f64) * dep(s + h);
            AlphaBoundRow { h, bound: (0..=h_trunc).map(term).sum(), remainder: term(h_trunc) }
        })
        .collect();

    let mut rates = Vec::new();
    let mut trends = Vec::new();
    let mut notes = vec![
        "the bias condition for centering at the limit ratio is not checked; it depends on second-order behaviour".to_string(),
    ];
    if let Some(s) = schedule {
        if !(s.beta1 > 0.0 && s.beta1 < 1.0 && s.beta2 > 0.0 && s.beta2 < s.beta1) {
            notes.push(format!(
                "rate exponents beta1 = {}, beta2 = {} violate 0 < beta2 < beta1 < 1",
                s.beta1, s.beta2
            ));
        }
        for &n in &s.n_grid {
            let u_n = n.powf(s.beta1);
            let r_n = n.powf(s.beta2).ceil() as usize;
            let p_n = -(-1.0 / u_n).exp_m1();
            let (mix, _) = mixing_sum(T::lit(u_n), r_n);
            rates.push(RateRow {
                n,
                u_n,
                r_n,
                p_n,
                n_p: n * p_n,
                r_p: r_n as f64 * p_n,
                consistency: n.powf(s.delta / (1.0 + s.delta)) * p_n,
                add_cond: n.powf(s.delta / (4.0 + s.delta)) * p_n,
                add_cond_delta0: n.sqrt() * p_n.powf(1.5) / p_n.ln().abs(),
                mixing: mix.as_f64(),
            });
        }
        let column = |f: fn(&RateRow) -> f64| rates.iter().map(|r| (r.n, f(r))).collect::<Vec<_>>();
        type Check = (&'static str, bool, fn(&RateRow) -> f64);
        let checks: [Check; 6] = [
            ("n_p", true, |r| r.n_p),
            ("r_p", false, |r| r.r_p),
            ("consistency", true, |r| r.consistency),
            ("add_cond", true, |r| r.add_cond),
            ("add_cond_delta0", true, |r| r.add_cond_delta0),
            ("mixing", false, |r| r.mixing),
        ];
        for (name, to_infinity, f) in checks {
            trends.push(trend(name, to_infinity, &column(f)));
        }
    }

    Ok(MixingReport { h_trunc, mixing_series, anticlustering, alpha_bounds, rates, trends, notes })
}

fn trend(name: &str, to_infinity: bool, points: &[(f64, f64)]) -> TrendCheck {
    let upper = &points[points.len() / 2..];
    let all_zero = upper.iter().all(|&(_, v)| v == 0.0);
    let pts: Vec<(f64, f64)> = upper
        .iter()
        .filter(|&&(_, v)| v != 0.0)
        .map(|&(n, v)| (n.ln(), v.abs().ln()))
        .collect();
    let slope = if pts.len() < 2 {
        0.0
    } else {
        let m = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        if sxx > 0.0 {
            sxy / sxx
        } else {
            0.0
        }
    };
    let satisfied = if to_infinity { slope > 0.0 } else { all_zero || slope < 0.0 };
    TrendCheck {
        quantity: name.to_string(),
        required_limit: if to_infinity { "infinity" } else { "zero" }.to_string(),
        log_slope: slope,
        satisfied,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_variogram() -> PowerVariogram<f64> {
        PowerVariogram::new(0.1, 1.75).unwrap()
    }

    #[test]
    fn independence_gives_zero_series() {
        let independent = |h: i64| if h == 0 { 1.0 } else { 0.0 };
        let rep = mixing_diagnostics_with(independent, &[10.0, 100.0], &[5, 40], &[1, 3], 50, None).unwrap();
        assert!(rep.mixing_series.iter().all(|r| r.value == 0.0));
        assert!(rep.anticlustering.iter().all(|r| r.value == 0.0));
    }

    #[test]
    fn anticlustering_decreases_in_k() {
        let rep = mixing_diagnostics(&reference_variogram(), &[1.0], &[40], &[1, 2, 5, 10, 20], 50, None).unwrap();
        let vals: Vec<f64> = rep.anticlustering.iter().map(|r| r.value).collect();
        assert!(vals.iter().all(|v| v.is_finite()));
        assert!(vals.windows(2).all(|w| w[1] < w[0]), "{vals:?}");
        // Dominated by small lags.
        assert!(vals[0] - vals[3] > 0.5 * vals[0]);
    }

    #[test]
    fn alpha_bound_decays_fast() {
        let rep = mixing_diagnostics(&reference_variogram(), &[1.0], &[10, 20], &[1], 100, None).unwrap();
        let b10 = rep.alpha_bounds[0].bound;
        let b20 = rep.alpha_bounds[1].bound;
        assert!(b20 * 10.0 < b10, "{b10} {b20}");
        assert!(rep.alpha_bounds[1].remainder < 1e-12);
    }

    #[test]
    fn default_rates_trend_correctly() {
        let sched = RateSchedule::default();
        let rep = mixing_diagnostics(&reference_variogram(), &[], &[], &[], 100, Some(&sched)).unwrap();
        assert_eq!(rep.rates.len(), sched.n_grid.len());
        let ok = |name: &str| rep.trends.iter().find(|t| t.quantity == name).unwrap().satisfied;
        assert!(ok("n_p"));
        assert!(ok("r_p"));
        assert!(ok("consistency"));
        assert!(ok("add_cond"));
        // n^{1/2} p^{3/2} / |log p| ~ n^{(1 - 3β1)/2} diverges only for β1 < 1/3.
        assert!(!ok("add_cond_delta0"));
    }

    #[test]
    fn rejects_zero_truncation() {
        assert!(mixing_diagnostics(&reference_variogram(), &[1.0], &[1], &[1], 0, None).is_err());
    }
}
