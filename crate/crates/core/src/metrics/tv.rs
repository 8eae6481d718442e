use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::Configuration;

use super::distance::OccupancyStatistic;

/// Plug-in total-variation estimate between two empirical laws, with a
/// delta-method standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TvEstimate {
    pub tv: f64,
    pub std_error: f64,
    pub n_a: usize,
    pub n_b: usize,
}

/// `1/2 sum |p - q|` for two probability vectors (shorter one zero-padded).
pub fn tv_between_pmfs(p: &[f64], q: &[f64]) -> f64 {
    let n = p.len().max(q.len());
    let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    0.5 * (0..n).map(|i| (at(p, i) - at(q, i)).abs()).sum::<f64>()
}

/// Empirical pmf of outcome indices `0..len`.
pub fn empirical_pmf(counts: &[u64]) -> Vec<f64> {
    let n: u64 = counts.iter().sum();
    counts.iter().map(|&c| c as f64 / n.max(1) as f64).collect()
}

fn signed_variance(signs: &[f64], p: &[f64], n: usize) -> f64 {
    let m1: f64 = signs.iter().zip(p).map(|(s, x)| s * x).sum();
    let m2: f64 = signs.iter().zip(p).map(|(s, x)| s * s * x).sum();
    (m2 - m1 * m1).max(0.0) / n as f64
}

/// TV between the empirical laws of two outcome samples.
pub fn tv_from_outcomes<K: Ord + Clone>(a: &[K], b: &[K]) -> Result<TvEstimate> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut table: BTreeMap<K, (u64, u64)> = BTreeMap::new();
    for k in a {
        table.entry(k.clone()).or_default().0 += 1;
    }
    for k in b {
        table.entry(k.clone()).or_default().1 += 1;
    }
    let pa: Vec<f64> = table.values().map(|c| c.0 as f64 / a.len() as f64).collect();
    let pb: Vec<f64> = table.values().map(|c| c.1 as f64 / b.len() as f64).collect();
    let signs: Vec<f64> = pa.iter().zip(&pb).map(|(x, y)| sign(x - y)).collect();
    let tv = tv_between_pmfs(&pa, &pb);
    let var = 0.25 * (signed_variance(&signs, &pa, a.len()) + signed_variance(&signs, &pb, b.len()));
    Ok(TvEstimate {
        tv,
        std_error: var.sqrt(),
        n_a: a.len(),
        n_b: b.len(),
    })
}

/// TV between outcome counts and an exactly known pmf.
pub fn tv_to_reference(counts: &[u64], reference: &[f64]) -> Result<TvEstimate> {
    let n: u64 = counts.iter().sum();
    if n == 0 {
        return Err(Error::EmptySamples);
    }
    let p = empirical_pmf(counts);
    let len = p.len().max(reference.len());
    let pad = |v: &[f64]| (0..len).map(|i| v.get(i).copied().unwrap_or(0.0)).collect::<Vec<_>>();
    let (p, q) = (pad(&p), pad(reference));
    let signs: Vec<f64> = p.iter().zip(&q).map(|(x, y)| sign(x - y)).collect();
    Ok(TvEstimate {
        tv: tv_between_pmfs(&p, &q),
        std_error: (0.25 * signed_variance(&signs, &p, n as usize)).sqrt(),
        n_a: n as usize,
        n_b: 0,
    })
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Data-processing lower bound on the projected TV distance: the plug-in TV
/// of the statistic's empirical laws.
pub fn tv_lower_bound_from_statistics(
    samples_a: &[Configuration],
    samples_b: &[Configuration],
    stat: &OccupancyStatistic,
) -> Result<TvEstimate> {
    let ka: Vec<_> = samples_a.iter().map(|c| stat.evaluate(c)).collect();
    let kb: Vec<_> = samples_b.iter().map(|c| stat.evaluate(c)).collect();
    tv_from_outcomes(&ka, &kb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::model::ModelParams;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identical_and_disjoint() {
        let a = vec![0u8, 1, 1, 2];
        assert_eq!(tv_from_outcomes(&a, &a).unwrap().tv, 0.0);
        assert_eq!(tv_from_outcomes(&[0u8, 0], &[1u8, 2]).unwrap().tv, 1.0);
        assert_eq!(tv_from_outcomes::<u8>(&[], &a).unwrap_err(), Error::EmptySamples);
    }

    #[test]
    fn bernoulli_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let n = 100_000;
        let a: Vec<bool> = (0..n).map(|_| rng.random::<f64>() < 0.5).collect();
        let b: Vec<bool> = (0..n).map(|_| rng.random::<f64>() < 0.75).collect();
        let t = tv_from_outcomes(&a, &b).unwrap();
        assert!((t.tv - 0.25).abs() < 0.005, "{t:?}");
        assert!((t.std_error - 0.0021).abs() < 0.0003, "{t:?}");
    }

    #[test]
    fn reference_tv() {
        let t = tv_to_reference(&[50, 50], &[0.5, 0.5]).unwrap();
        assert_eq!(t.tv, 0.0);
        let t = tv_to_reference(&[100, 0], &[0.5, 0.5, 0.0]).unwrap();
        assert_eq!(t.tv, 0.5);
        assert!(tv_to_reference(&[0, 0], &[1.0]).is_err());
        assert_eq!(tv_between_pmfs(&[1.0], &[0.0, 1.0]), 1.0);
    }

    #[test]
    fn coarser_statistic_never_larger() {
        let p = ModelParams::cube(2, 8.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut draw = |bias: f64| -> Vec<Configuration> {
            (0..400)
                .map(|_| {
                    let k = rng.random_range(0..3);
                    let pts: Vec<Point> = (0..k)
                        .map(|_| Point::new([1.0 + 6.0 * rng.random::<f64>().powf(bias), 1.0 + 6.0 * rng.random::<f64>()]))
                        .collect();
                    Configuration::from_points(&p, pts).unwrap()
                })
                .collect()
        };
        let a = draw(1.0);
        let b = draw(2.0);
        let tv = |g: usize| tv_lower_bound_from_statistics(&a, &b, &OccupancyStatistic::new(p.domain.clone(), g)).unwrap().tv;
        let (t0, t2, t4) = (tv(0), tv(2), tv(4));
        assert!(t0 <= t2 + 1e-15 && t2 <= t4 + 1e-15, "{t0} {t2} {t4}");
        assert!(t4 > 0.0);
    }
}
