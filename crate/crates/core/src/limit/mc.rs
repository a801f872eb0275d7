use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimate::{Atom, DistributionEstimate, Method};
use crate::event::WindowEvent;
use crate::ordinal::{all_patterns, pattern_of};
use crate::real::{normal_quantile, Real};
use crate::simulate::stream_rng;

use super::TailProcessSampler;

/// Smallest accepted Monte Carlo sample size.
pub const MIN_MC_DRAWS: usize = 1000;

/// Draws per RNG stream. Chunk `c` uses stream `c`, so results do not
/// depend on how rayon schedules the chunks.
const CHUNK: usize = 4096;

/// Runs `n_mc` draws and sums the integer tallies `visit` writes into a
/// buffer of length `width`.
pub(crate) fn tally<T, F>(sampler: &TailProcessSampler<T>, n_mc: usize, seed: u64, width: usize, visit: F) -> Vec<u64>
where
    T: Real,
    F: Fn(&[T], &mut [u64]) + Sync,
{
    let n_chunks = n_mc.div_ceil(CHUNK);
    let partial: Vec<Vec<u64>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c as u64);
            let mut acc = vec![0u64; width];
            let mut y = vec![T::zero(); sampler.window_len()];
            let todo = CHUNK.min(n_mc - c * CHUNK);
            for _ in 0..todo {
                sampler.sample_into(&mut rng, &mut y);
                visit(&y, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0u64; width];
    for p in partial {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    total
}

fn check_draws(n_mc: usize) -> Result<()> {
    if n_mc < MIN_MC_DRAWS {
        return Err(Error::invalid(format!("n_mc = {n_mc} below the minimum {MIN_MC_DRAWS}")));
    }
    Ok(())
}

fn check_window<T: Real>(sampler: &TailProcessSampler<T>, end: usize) -> Result<()> {
    if sampler.end() < end {
        return Err(Error::invalid(format!(
            "tail-process window ends at {} but offset {end} is needed",
            sampler.end()
        )));
    }
    Ok(())
}

/// Count ratios with binomial standard errors and 95% normal intervals.
fn mc_estimate<T: Real>(support: Vec<Atom>, counts: Vec<u64>, den: u64, what: &str) -> Result<DistributionEstimate<T>> {
    if den == 0 {
        return Err(Error::no_data(format!("no tail-process draws satisfy the {what} conditioning event")));
    }
    let mut est = DistributionEstimate::from_counts(support, counts, den, T::one(), Method::LimitMc);
    let n = T::from_count(den);
    let se = est.probs.iter().map(|&p| (p * (T::one() - p) / n).sqrt()).collect();
    est.set_normal_intervals(se, normal_quantile(T::lit(0.975)));
    Ok(est)
}

/// Limit cluster-size law: among draws with `Y_{-1} <= 1`, the length of the
/// run of `Y_k > 1` starting at 0, on `1..=l_max` plus an overflow atom.
pub fn limit_cluster_size_mc<T: Real>(
    sampler: &TailProcessSampler<T>,
    l_max: usize,
    n_mc: usize,
    seed: u64,
) -> Result<DistributionEstimate<T>> {
    check_draws(n_mc)?;
    if l_max == 0 {
        return Err(Error::invalid("l_max must be >= 1"));
    }
    check_window(sampler, l_max)?;
    let one = T::one();
    // Slot l - 1 counts size l; slot l_max counts the denominator.
    let acc = tally(sampler, n_mc, seed, l_max + 1, |y, acc| {
        if y[0] > one || !(y[1] > one) {
            return;
        }
        acc[l_max] += 1;
        let run = y[1..].iter().take_while(|&&v| v > one).count();
        if run <= l_max {
            acc[run - 1] += 1;
        }
    });
    let den = acc[l_max];
    let mut counts = acc[..l_max].to_vec();
    counts.push(den - counts.iter().sum::<u64>());
    let mut support: Vec<Atom> = (1..=l_max).map(Atom::Size).collect();
    support.push(Atom::Overflow(l_max));
    mc_estimate(support, counts, den, "cluster-start")
}

/// Ordinal-pattern law of `(Y_0, ..., Y_{l-1})` given a cluster of size
/// exactly `l` starting at 0.
pub fn limit_pattern_mc<T: Real>(
    sampler: &TailProcessSampler<T>,
    l: usize,
    n_mc: usize,
    seed: u64,
) -> Result<DistributionEstimate<T>> {
    check_draws(n_mc)?;
    if !(2..=6).contains(&l) {
        return Err(Error::invalid(format!("pattern length {l} outside 2..=6")));
    }
    check_window(sampler, l)?;
    let event = WindowEvent::cluster_of_size(l)?;
    let patterns = all_patterns(l)?;
    let n_atoms = patterns.len();
    let acc = tally(sampler, n_mc, seed, n_atoms + 1, |y, acc| {
        if event.matches(&y[..event.span()], T::one()) {
            acc[n_atoms] += 1;
            if let Ok(p) = pattern_of(&y[1..=l]) {
                acc[p.rank() as usize] += 1;
            }
        }
    });
    let den = acc[n_atoms];
    let support = patterns.into_iter().map(Atom::Pattern).collect();
    mc_estimate(support, acc[..n_atoms].to_vec(), den, "cluster-of-size")
}

/// Limit extremogram `P(Y_h > 1)` for `h = 0..=h_max` with binomial SEs.
pub fn limit_extremogram_mc<T: Real>(
    sampler: &TailProcessSampler<T>,
    h_max: usize,
    n_mc: usize,
    seed: u64,
) -> Result<(Vec<T>, Vec<T>)> {
    check_draws(n_mc)?;
    check_window(sampler, h_max)?;
    let one = T::one();
    let acc = tally(sampler, n_mc, seed, h_max + 1, |y, acc| {
        for h in 0..=h_max {
            if y[h + 1] > one {
                acc[h] += 1;
            }
        }
    });
    let n = T::from_count(n_mc as u64);
    let probs: Vec<T> = acc.iter().map(|&c| T::from_count(c) / n).collect();
    let se = probs.iter().map(|&p| (p * (one - p) / n).sqrt()).collect();
    Ok((probs, se))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limit::mar_limit_cluster_size;
    use crate::ordinal::OrdinalPattern;
    use crate::simulate::{ModelSpec, PowerVariogram};

    fn br(end: usize) -> TailProcessSampler<f64> {
        let variogram = PowerVariogram::new(0.1, 1.75).unwrap();
        TailProcessSampler::new(ModelSpec::BrownResnick { variogram }, end).unwrap()
    }

    #[test]
    fn mar_matches_geometric_law() {
        for a in [0.3f64, 0.5, 0.7] {
            let s = TailProcessSampler::new(ModelSpec::Mar { a }, 5).unwrap();
            let est = limit_cluster_size_mc(&s, 5, 100_000, 11).unwrap();
            let se = est.se.as_ref().unwrap();
            for l in 1..=5 {
                let exact = mar_limit_cluster_size(a, l).unwrap();
                let tol = 3.0 * se[l - 1].max(1e-3 / 3.0);
                assert!((est.probs[l - 1] - exact).abs() < tol, "a={a} l={l}: {} vs {exact}", est.probs[l - 1]);
            }
            assert!((est.total() - 1.0).abs() < 1e-12);
            assert_eq!(est.method, Method::LimitMc);
        }
    }

    #[test]
    fn independence_gives_singletons() {
        let s = TailProcessSampler::new(ModelSpec::Mar { a: 0.0f64 }, 1).unwrap();
        let est = limit_cluster_size_mc(&s, 1, 2000, 0).unwrap();
        assert_eq!(est.probs[0], 1.0);
    }

    #[test]
    fn mar_patterns_are_decreasing() {
        let s = TailProcessSampler::new(ModelSpec::Mar { a: 0.6f64 }, 3).unwrap();
        let est = limit_pattern_mc(&s, 2, 20_000, 3).unwrap();
        assert_eq!(est.support.len(), 2);
        assert_eq!(est.prob_of(&Atom::Pattern(OrdinalPattern::identity(2))), Some(1.0));
        assert!((est.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn br_patterns_seed_stable() {
        let s = br(3);
        let a = limit_pattern_mc(&s, 3, 50_000, 1).unwrap();
        let b = limit_pattern_mc(&s, 3, 50_000, 2).unwrap();
        let (sa, sb) = (a.se.as_ref().unwrap(), b.se.as_ref().unwrap());
        for i in 0..6 {
            let tol = 3.0 * (sa[i] * sa[i] + sb[i] * sb[i]).sqrt() + 1e-9;
            assert!((a.probs[i] - b.probs[i]).abs() <= tol.max(3e-3));
        }
        // Patterns with Y_0 or Y_1 on top carry most of the mass.
        let top01: f64 = a
            .support
            .iter()
            .zip(&a.probs)
            .filter(|(atom, _)| matches!(atom, Atom::Pattern(p) if p.perm()[0] <= 1))
            .map(|(_, &p)| p)
            .sum();
        assert!(top01 > 0.5, "{top01}");
    }

    #[test]
    fn br_extremogram_matches_extremal_coefficient() {
        let s = br(4);
        let (p, se) = limit_extremogram_mc(&s, 4, 50_000, 5).unwrap();
        assert_eq!(p[0], 1.0);
        let v = PowerVariogram::new(0.1, 1.75).unwrap();
        for h in 1..=4 {
            let t = 2.0 - v.extremal_coefficient(h as i64);
            assert!((p[h] - t).abs() < 3.0 * se[h].max(1e-4), "h={h}: {} vs {t}", p[h]);
        }
    }

    #[test]
    fn argument_checks() {
        let s = br(2);
        assert!(limit_cluster_size_mc(&s, 2, 999, 0).is_err());
        assert!(limit_cluster_size_mc(&s, 3, 1000, 0).is_err());
        assert!(limit_pattern_mc(&s, 1, 1000, 0).is_err());
        let det = limit_cluster_size_mc(&s, 2, 5000, 9).unwrap();
        assert_eq!(det, limit_cluster_size_mc(&s, 2, 5000, 9).unwrap());
    }
}
