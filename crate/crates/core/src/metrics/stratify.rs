//! Deterministic grouping of scientists by a scalar key.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::topic::SeriesEntry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Group 1 holds the top `k` percent, group 0 everyone else.
    TopPercent(u32),
    /// Groups 0..=9 by ascending value.
    Deciles,
    /// Group = lower edge of a `width`-wide bin aligned to multiples of `width`.
    YearBins(i32),
}

fn by_value_then_id(a: &(String, f64), b: &(String, f64)) -> Ordering {
    a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0))
}

/// Ids of the top `k` percent by value: `ceil(k·n/100)` of them, at least one.
/// Equal values at the cut go to the smaller id.
pub fn top_percent(items: &[(String, f64)], k: u32) -> Result<Vec<String>> {
    if k == 0 || k > 100 {
        return Err(Error::InvalidParameter(format!(
            "top-k percent must be in 1..=100, got {k}"
        )));
    }
    if items.is_empty() {
        return Ok(Vec::new());
    }
    let mut sorted = items.to_vec();
    sorted.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let take = (items.len() * k as usize).div_ceil(100).max(1);
    let mut ids: Vec<String> = sorted.into_iter().take(take).map(|(id, _)| id).collect();
    ids.sort();
    Ok(ids)
}

/// Decile 0..=9 per id, rank-based on (value, id).
pub fn deciles(items: &[(String, f64)]) -> BTreeMap<String, u32> {
    let mut sorted = items.to_vec();
    sorted.sort_by(by_value_then_id);
    let n = sorted.len();
    sorted
        .into_iter()
        .enumerate()
        .map(|(rank, (id, _))| (id, (rank * 10 / n) as u32))
        .collect()
}

pub fn year_bins(items: &[(String, i32)], width: i32) -> BTreeMap<String, i32> {
    let width = width.max(1);
    items
        .iter()
        .map(|(id, y)| (id.clone(), y.div_euclid(width) * width))
        .collect()
}

/// Group label per id under `scheme`. Year bins read values as integer years.
pub fn stratify(items: &[(String, f64)], scheme: Scheme) -> Result<BTreeMap<String, i64>> {
    Ok(match scheme {
        Scheme::TopPercent(k) => {
            let top = top_percent(items, k)?;
            items
                .iter()
                .map(|(id, _)| (id.clone(), i64::from(top.binary_search(id).is_ok())))
                .collect()
        }
        Scheme::Deciles => deciles(items).into_iter().map(|(id, d)| (id, i64::from(d))).collect(),
        Scheme::YearBins(width) => {
            let years: Vec<(String, i32)> = items.iter().map(|(id, v)| (id.clone(), v.floor() as i32)).collect();
            year_bins(&years, width)
                .into_iter()
                .map(|(id, y)| (id, i64::from(y)))
                .collect()
        }
    })
}

/// The part of a career series published within `window` years of `start`.
pub fn first_career_years(series: &[SeriesEntry], start: i32, window: i32) -> Vec<SeriesEntry> {
    series.iter().filter(|e| e.year - start < window).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn items(values: &[f64]) -> Vec<(String, f64)> {
        values
            .iter()
            .enumerate()
            .map(|(i, &v)| (format!("a{i:03}"), v))
            .collect()
    }

    #[test]
    fn top_one_percent_of_hundred() {
        let mut v: Vec<f64> = (0..100).map(f64::from).collect();
        v[37] = 1000.0;
        assert_eq!(top_percent(&items(&v), 1).unwrap(), ["a037"]);
        assert_eq!(top_percent(&items(&v), 10).unwrap().len(), 10);
        assert!(top_percent(&items(&v), 0).is_err());
    }

    #[test]
    fn boundary_ties_go_to_smaller_id() {
        let v = items(&[5.0, 5.0, 5.0, 1.0]);
        assert_eq!(top_percent(&v, 20).unwrap(), ["a000"]);
    }

    #[test]
    fn deciles_are_balanced() {
        let d = deciles(&items(&(0..50).map(f64::from).collect::<Vec<_>>()));
        let mut counts = [0; 10];
        for g in d.values() {
            counts[*g as usize] += 1;
        }
        assert_eq!(counts, [5; 10]);
        assert_eq!(d["a000"], 0);
        assert_eq!(d["a049"], 9);
    }

    #[test]
    fn decade_cohorts_partition() {
        let v: Vec<(String, i32)> = (0..40).map(|i| (format!("a{i}"), 1950 + i * 2)).collect();
        let bins = year_bins(&v, 10);
        assert_eq!(bins.len(), 40);
        assert_eq!(bins["a0"], 1950);
        assert_eq!(bins["a39"], 2020);
        let s = stratify(&items(&[1979.0, 1980.0]), Scheme::YearBins(10)).unwrap();
        assert_eq!(s["a000"], 1970);
        assert_eq!(s["a001"], 1980);
    }

    #[test]
    fn order_invariance() {
        let mut v = items(&[3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0]);
        let a = stratify(&v, Scheme::Deciles).unwrap();
        let b = stratify(&v, Scheme::TopPercent(20)).unwrap();
        v.reverse();
        assert_eq!(a, stratify(&v, Scheme::Deciles).unwrap());
        assert_eq!(b, stratify(&v, Scheme::TopPercent(20)).unwrap());
    }

    #[test]
    fn truncation_matches_recount() {
        let series: Vec<SeriesEntry> = (0..50)
            .map(|i| SeriesEntry {
                paper_id: format!("p{i}"),
                year: 1970 + i,
                topic: None,
                c10: 0,
            })
            .collect();
        let kept = first_career_years(&series, 1970, 30);
        assert_eq!(kept.len(), series.iter().filter(|e| e.year <= 1999).count());
        assert!(kept.iter().all(|e| e.year - 1970 < 30));
    }
}
