//! Which existing collaborators follow a scientist into a newly started topic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::decompose::CollaboratorSeries;
use crate::error::{Error, Result};
use crate::topic::{SeriesEntry, TopicAssignment};

use super::correlation::{kendall_tau, CorrelationResult};

/// z for a two-sided 95% interval.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct JoinOptions {
    /// Joint papers before the topic start needed to count as existing.
    pub min_copub: usize,
    /// Calendar years, ending at the start year, that make a collaborator recent.
    pub recent_window: i32,
}

impl Default for JoinOptions {
    fn default() -> Self {
        Self {
            min_copub: 1,
            recent_window: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JoinCandidate {
    pub collaborator: String,
    /// Joint papers published before the topic start year.
    pub past_copub: usize,
    pub mean_past_c10: f64,
    pub recent: bool,
    pub joined: bool,
}

/// The start of one topic after the first and the existing collaborators at
/// that moment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JoinEvent {
    pub focal: String,
    pub topic: u32,
    pub start_year: i32,
    /// Years since the focal scientist's first paper.
    pub career_year: i32,
    /// Existing collaborators, sorted by id.
    pub candidates: Vec<JoinCandidate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum JoinMode {
    Overall,
    Recent,
}

impl JoinMode {
    pub const ALL: [JoinMode; 2] = [Self::Overall, Self::Recent];

    pub fn name(self) -> &'static str {
        match self {
            Self::Overall => "overall",
            Self::Recent => "recent",
        }
    }
}

impl JoinEvent {
    pub fn candidates(&self, mode: JoinMode) -> impl Iterator<Item = &JoinCandidate> {
        self.candidates
            .iter()
            .filter(move |c| mode == JoinMode::Overall || c.recent)
    }

    pub fn existing(&self) -> impl Iterator<Item = &str> {
        self.candidates.iter().map(|c| c.collaborator.as_str())
    }

    pub fn recent(&self) -> impl Iterator<Item = &str> {
        self.candidates(JoinMode::Recent).map(|c| c.collaborator.as_str())
    }

    pub fn joiners(&self) -> impl Iterator<Item = &str> {
        self.candidates
            .iter()
            .filter(|c| c.joined)
            .map(|c| c.collaborator.as_str())
    }

    /// `(joiners, candidates)` under `mode`.
    pub fn counts(&self, mode: JoinMode) -> (usize, usize) {
        self.candidates(mode)
            .fold((0, 0), |(j, n), c| (j + usize::from(c.joined), n + 1))
    }
}

/// One event per major topic except the first. `collaborators` should hold
/// every coauthor of the focal scientist (no joint-paper minimum).
pub fn join_events(
    series: &[SeriesEntry],
    topics: &TopicAssignment,
    collaborators: &[CollaboratorSeries],
    options: JoinOptions,
) -> Vec<JoinEvent> {
    let Some(first) = series.first() else {
        return Vec::new();
    };
    let career_start = first.year;
    let min_copub = options.min_copub.max(1);
    let mut events = Vec::new();
    for info in topics.major_topics.iter().skip(1) {
        let start = info.first_year;
        let mut candidates = Vec::new();
        for c in collaborators {
            let past: Vec<_> = c.papers.iter().filter(|p| p.year < start).collect();
            if past.len() < min_copub {
                continue;
            }
            let recent = c
                .papers
                .iter()
                .any(|p| p.year <= start && p.year > start - options.recent_window);
            candidates.push(JoinCandidate {
                collaborator: c.collaborator.clone(),
                past_copub: past.len(),
                mean_past_c10: past.iter().map(|p| f64::from(p.c10)).sum::<f64>() / past.len() as f64,
                recent,
                joined: c.involved_topics.contains(&info.id),
            });
        }
        candidates.sort_by(|a, b| a.collaborator.cmp(&b.collaborator));
        events.push(JoinEvent {
            focal: topics.owner.clone(),
            topic: info.id,
            start_year: start,
            career_year: start - career_start,
            candidates,
        });
    }
    events
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum JoinBinning {
    /// One bin per past joint-paper count.
    PastCopubLinear,
    /// Doubling bins [1,2), [2,4), ... over past joint-paper count.
    PastCopubLog,
    /// [0,1), [1,2), [2,4), ... over mean c10 of past joint papers.
    PastMeanC10,
    /// Years since the focal scientist's first paper, in bins of `width`.
    CareerStage { width: i32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Averaging {
    /// Σ joiners / Σ candidates over everything in the bin.
    Pooled,
    /// Mean of per-focal pooled ratios.
    PerFocal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JoinRow {
    pub bin_low: f64,
    pub bin_high: f64,
    pub mode: JoinMode,
    pub joiners: usize,
    pub candidates: usize,
    pub probability: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
}

fn log2_bin(v: f64) -> i64 {
    if v < 1.0 {
        0
    } else {
        v.log2().floor() as i64 + 1
    }
}

impl JoinBinning {
    fn key(self, event: &JoinEvent, c: &JoinCandidate) -> i64 {
        match self {
            Self::PastCopubLinear => c.past_copub as i64,
            Self::PastCopubLog => log2_bin(c.past_copub as f64),
            Self::PastMeanC10 => log2_bin(c.mean_past_c10),
            Self::CareerStage { width } => i64::from(event.career_year.div_euclid(width.max(1))),
        }
    }

    fn bounds(self, key: i64) -> (f64, f64) {
        match self {
            Self::PastCopubLinear => (key as f64, key as f64 + 1.0),
            Self::PastCopubLog | Self::PastMeanC10 => {
                if key == 0 {
                    (0.0, 1.0)
                } else {
                    (2f64.powi(key as i32 - 1), 2f64.powi(key as i32))
                }
            }
            Self::CareerStage { width } => {
                let w = i64::from(width.max(1));
                ((key * w) as f64, ((key + 1) * w) as f64)
            }
        }
    }
}

/// Wilson score interval for `successes` out of `n` at 95% confidence.
pub fn wilson_interval(successes: usize, n: usize) -> Option<(f64, f64)> {
    if n == 0 {
        return None;
    }
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    Some(((center - half).max(0.0), (center + half).min(1.0)))
}

/// `(joiners, candidates, ratio)` over every event; `None` without candidates.
pub fn pooled_join_probability(events: &[JoinEvent], mode: JoinMode) -> Option<(usize, usize, f64)> {
    let (j, n) = events.iter().fold((0, 0), |(j, n), e| {
        let (ej, en) = e.counts(mode);
        (j + ej, n + en)
    });
    (n > 0).then(|| (j, n, j as f64 / n as f64))
}

/// Join probability per bin. Every bin between the lowest and highest
/// occupied one gets a row; empty bins carry `None`.
pub fn join_probability(
    events: &[JoinEvent],
    mode: JoinMode,
    binning: JoinBinning,
    averaging: Averaging,
) -> Result<Vec<JoinRow>> {
    if events.is_empty() {
        return Err(Error::Undefined(
            "join probability needs at least one topic-start event".into(),
        ));
    }
    // bin -> focal -> (joiners, candidates)
    let mut bins: BTreeMap<i64, BTreeMap<&str, (usize, usize)>> = BTreeMap::new();
    for e in events {
        for c in e.candidates(mode) {
            let cell = bins
                .entry(binning.key(e, c))
                .or_default()
                .entry(e.focal.as_str())
                .or_default();
            cell.0 += usize::from(c.joined);
            cell.1 += 1;
        }
    }
    let (Some(&lo), Some(&hi)) = (bins.keys().next(), bins.keys().next_back()) else {
        return Ok(Vec::new());
    };
    let mut rows = Vec::new();
    for key in lo..=hi {
        let (bin_low, bin_high) = binning.bounds(key);
        let per_focal = bins.get(&key);
        let (joiners, candidates) = per_focal
            .map(|m| m.values().fold((0, 0), |(j, n), &(a, b)| (j + a, n + b)))
            .unwrap_or((0, 0));
        let (probability, ci) = match (averaging, per_focal) {
            (_, None) => (None, None),
            (Averaging::Pooled, Some(_)) => (
                Some(joiners as f64 / candidates as f64),
                wilson_interval(joiners, candidates),
            ),
            (Averaging::PerFocal, Some(m)) => {
                let ratios: Vec<f64> = m.values().map(|&(j, n)| j as f64 / n as f64).collect();
                let (mean, se) = crate::decompose::mean_and_se(&ratios);
                let ci = mean
                    .zip(se)
                    .map(|(m, s)| ((m - Z95 * s).max(0.0), (m + Z95 * s).min(1.0)));
                (mean, ci)
            }
        };
        rows.push(JoinRow {
            bin_low,
            bin_high,
            mode,
            joiners,
            candidates,
            probability,
            ci_low: ci.map(|c| c.0),
            ci_high: ci.map(|c| c.1),
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum JoinCovariate {
    PastCopub,
    PastMeanC10,
}

/// Kendall τ between a candidate covariate and the 0/1 joined outcome.
pub fn join_covariate_tau<'a>(
    events: impl IntoIterator<Item = &'a JoinEvent>,
    mode: JoinMode,
    covariate: JoinCovariate,
) -> Result<CorrelationResult> {
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for e in events {
        for c in e.candidates(mode) {
            x.push(match covariate {
                JoinCovariate::PastCopub => c.past_copub as f64,
                JoinCovariate::PastMeanC10 => c.mean_past_c10,
            });
            y.push(if c.joined { 1.0 } else { 0.0 });
        }
    }
    kendall_tau(&x, &y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::CoPaper;

    fn entry(id: &str, year: i32, topic: Option<u32>) -> SeriesEntry {
        SeriesEntry {
            paper_id: id.into(),
            year,
            topic,
            c10: 4,
        }
    }

    fn collab(name: &str, papers: &[(&str, i32, Option<u32>)]) -> CollaboratorSeries {
        let papers = papers
            .iter()
            .map(|&(id, year, topic)| CoPaper {
                paper_id: id.into(),
                year,
                topic,
                c10: 4,
            })
            .collect();
        CollaboratorSeries::new("f", name, papers)
    }

    fn fixture() -> (Vec<SeriesEntry>, TopicAssignment) {
        let series = vec![
            entry("p90", 1990, Some(0)),
            entry("p92", 1992, Some(0)),
            entry("p95", 1995, Some(1)),
            entry("p96", 1996, Some(1)),
        ];
        let ta = TopicAssignment::from_series("f", &series);
        (series, ta)
    }

    #[test]
    fn existing_collaborator_joins() {
        let (series, ta) = fixture();
        let a = collab("a", &[("p92", 1992, Some(0)), ("p96", 1996, Some(1))]);
        let events = join_events(&series, &ta, &[a], JoinOptions::default());
        assert_eq!(events.len(), 1);
        let e = &events[0];
        assert_eq!((e.topic, e.start_year, e.career_year), (1, 1995, 5));
        assert_eq!(e.existing().collect::<Vec<_>>(), ["a"]);
        assert_eq!(e.joiners().collect::<Vec<_>>(), ["a"]);
        assert_eq!(e.recent().count(), 0);
    }

    #[test]
    fn first_paper_in_new_topic_is_not_existing() {
        let (series, ta) = fixture();
        let b = collab("b", &[("p95", 1995, Some(1))]);
        let events = join_events(&series, &ta, &[b], JoinOptions::default());
        assert_eq!(events[0].existing().count(), 0);
    }

    #[test]
    fn recent_window_covers_start_year_and_year_before() {
        let series = vec![
            entry("a", 1990, Some(0)),
            entry("b", 1994, Some(0)),
            entry("c", 1995, Some(1)),
        ];
        let ta = TopicAssignment::from_series("f", &series);
        let list = [
            collab("old", &[("a", 1990, Some(0))]),
            collab("prev", &[("a", 1990, Some(0)), ("b", 1994, Some(0))]),
        ];
        let e = &join_events(&series, &ta, &list, JoinOptions::default())[0];
        assert_eq!(e.recent().collect::<Vec<_>>(), ["prev"]);
    }

    #[test]
    fn single_topic_has_no_events() {
        let series = vec![entry("a", 1990, Some(0))];
        let ta = TopicAssignment::from_series("f", &series);
        assert!(join_events(&series, &ta, &[], JoinOptions::default()).is_empty());
    }

    fn event(joined: &[bool]) -> JoinEvent {
        JoinEvent {
            focal: "f".into(),
            topic: 1,
            start_year: 2000,
            career_year: 7,
            candidates: joined
                .iter()
                .enumerate()
                .map(|(i, &j)| JoinCandidate {
                    collaborator: format!("c{i}"),
                    past_copub: i + 1,
                    mean_past_c10: i as f64 * 3.0,
                    recent: i % 2 == 0,
                    joined: j,
                })
                .collect(),
        }
    }

    #[test]
    fn four_existing_one_joiner() {
        let events = [event(&[true, false, false, false])];
        assert_eq!(pooled_join_probability(&events, JoinMode::Overall), Some((1, 4, 0.25)));
        let rows = join_probability(
            &events,
            JoinMode::Overall,
            JoinBinning::CareerStage { width: 5 },
            Averaging::Pooled,
        )
        .unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].probability, Some(0.25));
        assert_eq!((rows[0].bin_low, rows[0].bin_high), (5.0, 10.0));
    }

    #[test]
    fn all_joined_gives_one_everywhere() {
        let events = [event(&[true; 6])];
        for binning in [
            JoinBinning::PastCopubLinear,
            JoinBinning::PastCopubLog,
            JoinBinning::PastMeanC10,
        ] {
            let rows = join_probability(&events, JoinMode::Overall, binning, Averaging::Pooled).unwrap();
            for r in rows.iter().filter(|r| r.candidates > 0) {
                assert_eq!(r.probability, Some(1.0));
            }
        }
    }

    #[test]
    fn empty_bins_are_null_and_bins_pool_back() {
        let events = [event(&[true, false, true, false, false, false, false, false, true])];
        let rows = join_probability(&events, JoinMode::Overall, JoinBinning::PastMeanC10, Averaging::Pooled).unwrap();
        let (j, n) = rows.iter().fold((0, 0), |a, r| (a.0 + r.joiners, a.1 + r.candidates));
        assert_eq!((j, n), (3, 9));
        assert!(rows.iter().any(|r| r.candidates == 0 && r.probability.is_none()));
        assert!(join_probability(&[], JoinMode::Overall, JoinBinning::PastCopubLinear, Averaging::Pooled).is_err());
    }

    #[test]
    fn wilson_bounds() {
        let (lo, hi) = wilson_interval(1, 4).unwrap();
        assert!(lo < 0.25 && 0.25 < hi && lo >= 0.0 && hi <= 1.0);
        // reference value for 1/4
        assert!((lo - 0.045_586).abs() < 1e-5 && (hi - 0.699_358).abs() < 1e-5);
        assert_eq!(wilson_interval(0, 0), None);
    }

    #[test]
    fn covariate_tau() {
        let events = [event(&[false, false, true, true])];
        let tau = join_covariate_tau(&events, JoinMode::Overall, JoinCovariate::PastCopub).unwrap();
        assert!(tau.value > 0.8);
    }
}
