use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    KendallTauB,
    Pearson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationResult {
    pub statistic: Statistic,
    pub value: f64,
    pub n: usize,
}

fn check_pairs(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::InvalidParameter(format!(
            "paired samples differ in length ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::Undefined("correlation needs at least two pairs".into()));
    }
    if x.iter().chain(y).any(|v| v.is_nan()) {
        return Err(Error::InvalidParameter("NaN in correlation input".into()));
    }
    Ok(())
}

fn tied_pairs(sorted: impl Iterator<Item = (f64, f64)>, by_both: bool) -> u64 {
    let mut total = 0u64;
    let mut run = 0u64;
    let mut prev: Option<(f64, f64)> = None;
    for cur in sorted {
        let same = prev.is_some_and(|p| p.0 == cur.0 && (!by_both || p.1 == cur.1));
        if same {
            run += 1;
        } else {
            total += run * (run.saturating_sub(1)) / 2;
            run = 1;
        }
        prev = Some(cur);
    }
    total + run * run.saturating_sub(1) / 2
}

/// Sorts `v` and returns the number of inversions (pairs i < j with v[i] > v[j]).
fn sort_counting_inversions(v: &mut [f64], buf: &mut Vec<f64>) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = sort_counting_inversions(&mut v[..mid], buf) + sort_counting_inversions(&mut v[mid..], buf);
    buf.clear();
    let (mut i, mut j) = (0, mid);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf.push(v[j]);
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf.push(v[i]);
            i += 1;
        }
    }
    buf.extend_from_slice(&v[i..mid]);
    buf.extend_from_slice(&v[j..n]);
    v.copy_from_slice(buf);
    swaps
}

/// Kendall's τ-b in O(n log n) (Knight's merge-sort formulation).
///
/// Fails when either variable is constant.
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    check_pairs(x, y)?;
    let n = x.len();
    let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let n0 = (n as u64) * (n as u64 - 1) / 2;
    let ties_x = tied_pairs(pairs.iter().copied(), false);
    let ties_xy = tied_pairs(pairs.iter().copied(), true);

    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut buf = Vec::with_capacity(n);
    let swaps = sort_counting_inversions(&mut ys, &mut buf);
    let ties_y = tied_pairs(ys.iter().map(|&v| (v, 0.0)), false);

    if ties_x == n0 || ties_y == n0 {
        return Err(Error::Undefined(
            "Kendall tau is undefined when a variable is constant".into(),
        ));
    }
    let numerator = n0 as f64 - ties_x as f64 - ties_y as f64 + ties_xy as f64 - 2.0 * swaps as f64;
    let denominator = ((n0 - ties_x) as f64 * (n0 - ties_y) as f64).sqrt();
    Ok(CorrelationResult {
        statistic: Statistic::KendallTauB,
        value: (numerator / denominator).clamp(-1.0, 1.0),
        n,
    })
}

/// Product-moment correlation. Fails on zero variance.
pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    check_pairs(x, y)?;
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Undefined("Pearson r is undefined for zero variance".into()));
    }
    Ok(CorrelationResult {
        statistic: Statistic::Pearson,
        value: (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0),
        n: x.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_distr::{Distribution, StandardNormal};

    /// O(n²) concordant/discordant count with tie corrections.
    pub(crate) fn kendall_brute(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len();
        let (mut s, mut tx, mut ty) = (0.0, 0.0, 0.0);
        let n0 = (n * (n - 1) / 2) as f64;
        for i in 0..n {
            for j in i + 1..n {
                let dx = (x[i] - x[j]).signum() * if x[i] == x[j] { 0.0 } else { 1.0 };
                let dy = (y[i] - y[j]).signum() * if y[i] == y[j] { 0.0 } else { 1.0 };
                s += dx * dy;
                if x[i] == x[j] {
                    tx += 1.0;
                }
                if y[i] == y[j] {
                    ty += 1.0;
                }
            }
        }
        s / ((n0 - tx) * (n0 - ty)).sqrt()
    }

    #[test]
    fn perfect_orders() {
        assert_eq!(kendall_tau(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap().value, 1.0);
        assert_eq!(kendall_tau(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap().value, -1.0);
    }

    #[test]
    fn constant_variable_is_undefined() {
        assert!(matches!(
            kendall_tau(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::Undefined(_))
        ));
        assert!(matches!(kendall_tau(&[1.0], &[1.0]), Err(Error::Undefined(_))));
        assert!(matches!(pearson_r(&[1.0, 2.0], &[4.0, 4.0]), Err(Error::Undefined(_))));
    }

    #[test]
    fn fast_tau_matches_brute_force_with_ties() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let x: Vec<f64> = (0..500).map(|_| rng.random_range(0..20) as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| v + rng.random_range(0..15) as f64).collect();
        let fast = kendall_tau(&x, &y).unwrap();
        assert!((fast.value - kendall_brute(&x, &y)).abs() < 1e-12);
        assert_eq!(fast.n, 500);
    }

    #[test]
    fn pearson_linear_and_anti() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        assert!((pearson_r(&x, &y).unwrap().value - 1.0).abs() < 1e-15);
        assert_eq!(pearson_r(&[0.0, 1.0], &[1.0, 0.0]).unwrap().value, -1.0);
    }

    #[test]
    fn pearson_independent_noise_is_small() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let x: Vec<f64> = (0..10_000).map(|_| StandardNormal.sample(&mut rng)).collect();
        let y: Vec<f64> = (0..10_000).map(|_| StandardNormal.sample(&mut rng)).collect();
        assert!(pearson_r(&x, &y).unwrap().value.abs() < 0.05);
    }
}
