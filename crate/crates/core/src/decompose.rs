//! Per-collaborator partial series and topic-involvement statistics.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ingest::Corpus;
use crate::nullmodel::AuthorshipBipartite;
use crate::topic::SeriesEntry;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoPaper {
    pub paper_id: String,
    pub year: i32,
    pub topic: Option<u32>,
    pub c10: u32,
}

/// The papers one collaborator coauthored with the focal scientist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollaboratorSeries {
    pub focal: String,
    pub collaborator: String,
    /// Chronological.
    pub papers: Vec<CoPaper>,
    pub first_year: i32,
    pub last_year: i32,
    /// Major topics among the papers; unlabelled papers contribute nothing.
    pub involved_topics: BTreeSet<u32>,
}

impl CollaboratorSeries {
    /// `papers` must be non-empty and chronological.
    pub fn new(focal: &str, collaborator: &str, papers: Vec<CoPaper>) -> Self {
        assert!(!papers.is_empty(), "a collaborator series needs at least one paper");
        let involved_topics = papers.iter().filter_map(|p| p.topic).collect();
        Self {
            focal: focal.to_string(),
            collaborator: collaborator.to_string(),
            first_year: papers[0].year,
            last_year: papers[papers.len() - 1].year,
            papers,
            involved_topics,
        }
    }

    pub fn n_copub(&self) -> usize {
        self.papers.len()
    }

    pub fn n_topics_involved(&self) -> usize {
        self.involved_topics.len()
    }

    /// The same collaboration restricted to papers published before `year`.
    pub fn before(&self, year: i32) -> Option<Self> {
        let papers: Vec<CoPaper> = self.papers.iter().filter(|p| p.year < year).cloned().collect();
        (!papers.is_empty()).then(|| Self::new(&self.focal, &self.collaborator, papers))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DecomposeOptions {
    pub min_copub: usize,
    /// Count papers outside every major topic toward `n_copub`.
    pub count_minor_papers: bool,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        Self {
            min_copub: 2,
            count_minor_papers: true,
        }
    }
}

/// One series per coauthor of `focal` with at least `min_copub` joint papers,
/// sorted by collaborator id.
pub fn decompose(
    corpus: &Corpus,
    series: &[SeriesEntry],
    focal: &str,
    options: DecomposeOptions,
) -> Result<Vec<CollaboratorSeries>> {
    if corpus.author_papers(focal).is_none() {
        return Err(Error::UnknownAuthor(focal.to_string()));
    }
    let bip = AuthorshipBipartite::from_series(corpus, focal, series)?;
    Ok(decompose_bipartite(&bip, series, options))
}

/// Decomposition driven by an authorship bipartite graph, real or reshuffled.
pub fn decompose_bipartite(
    bip: &AuthorshipBipartite,
    series: &[SeriesEntry],
    options: DecomposeOptions,
) -> Vec<CollaboratorSeries> {
    let mut per_collaborator: Vec<Vec<usize>> = vec![Vec::new(); bip.collaborators.len()];
    for &(c, p) in &bip.links {
        per_collaborator[c as usize].push(bip.papers[p as usize].series_pos);
    }
    let min = options.min_copub.max(1);
    bip.collaborators
        .iter()
        .zip(per_collaborator)
        .filter_map(|(name, mut positions)| {
            positions.sort_unstable();
            let papers: Vec<CoPaper> = positions
                .into_iter()
                .map(|pos| &series[pos])
                .filter(|e| options.count_minor_papers || e.topic.is_some())
                .map(|e| CoPaper {
                    paper_id: e.paper_id.clone(),
                    year: e.year,
                    topic: e.topic,
                    c10: e.c10,
                })
                .collect();
            (papers.len() >= min).then(|| CollaboratorSeries::new(&bip.focal, name, papers))
        })
        .collect()
}

/// `collaborator_id,n_copub,first_year,last_year,n_topics_involved,topics`
/// with topics `;`-joined.
pub fn write_collaborator_csv<W: Write>(out: W, list: &[CollaboratorSeries]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "collaborator_id",
        "n_copub",
        "first_year",
        "last_year",
        "n_topics_involved",
        "topics",
    ])?;
    for s in list {
        let topics: Vec<String> = s.involved_topics.iter().map(u32::to_string).collect();
        w.write_record([
            s.collaborator.clone(),
            s.n_copub().to_string(),
            s.first_year.to_string(),
            s.last_year.to_string(),
            s.n_topics_involved().to_string(),
            topics.join(";"),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Topic-involvement summary for one focal scientist.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollaboratorStats {
    pub min_copub: usize,
    /// Collaborators with at least one labelled paper.
    pub n_qualifying: usize,
    /// Collaborators whose joint papers all sit outside major topics.
    pub n_without_topic: usize,
    /// Fraction of qualifying collaborators per involved-topic count.
    pub distribution: BTreeMap<usize, f64>,
    pub fraction_single: Option<f64>,
}

impl CollaboratorStats {
    pub fn is_empty(&self) -> bool {
        self.n_qualifying == 0
    }

    pub fn fraction_with(&self, n_topics: usize) -> f64 {
        self.distribution.get(&n_topics).copied().unwrap_or(0.0)
    }
}

pub fn collaborator_stats(list: &[CollaboratorSeries]) -> CollaboratorStats {
    let min = list.iter().map(CollaboratorSeries::n_copub).min().unwrap_or(1);
    collaborator_stats_at(list, min)
}

/// Statistics over the collaborators with at least `min_copub` joint papers.
pub fn collaborator_stats_at(list: &[CollaboratorSeries], min_copub: usize) -> CollaboratorStats {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    let mut without = 0;
    for s in list.iter().filter(|s| s.n_copub() >= min_copub) {
        match s.n_topics_involved() {
            0 => without += 1,
            k => *counts.entry(k).or_default() += 1,
        }
    }
    let n: usize = counts.values().sum();
    let distribution = counts.iter().map(|(&k, &c)| (k, c as f64 / n as f64)).collect();
    CollaboratorStats {
        min_copub,
        n_qualifying: n,
        n_without_topic: without,
        fraction_single: (n > 0).then(|| counts.get(&1).copied().unwrap_or(0) as f64 / n as f64),
        distribution,
    }
}

/// Mean over scientists of their own topic-count distributions; every
/// scientist with qualifying collaborators weighs the same.
pub fn pooled_topic_distribution(all: &[CollaboratorStats]) -> Option<BTreeMap<usize, f64>> {
    let used: Vec<&CollaboratorStats> = all.iter().filter(|s| !s.is_empty()).collect();
    if used.is_empty() {
        return None;
    }
    let keys: BTreeSet<usize> = used.iter().flat_map(|s| s.distribution.keys().copied()).collect();
    Some(
        keys.into_iter()
            .map(|k| {
                let sum: f64 = used.iter().map(|s| s.fraction_with(k)).sum();
                (k, sum / used.len() as f64)
            })
            .collect(),
    )
}

/// Co-publication bin holding `n`: exact counts 1..=5, then bins
/// `[6,10), [10,18), [18,34), ...` whose widths double.
pub fn copub_bin(n: usize) -> (usize, usize) {
    if n <= 5 {
        return (n, n + 1);
    }
    let (mut low, mut width) = (6, 4);
    while n >= low + width {
        low += width;
        width *= 2;
    }
    (low, low + width)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CopubBinRow {
    pub bin_low: usize,
    /// Exclusive.
    pub bin_high: usize,
    pub n: usize,
    pub mean_topics: Option<f64>,
    pub se_topics: Option<f64>,
    pub fraction_single: Option<f64>,
    pub se_fraction: Option<f64>,
}

/// Mean involved-topic count and single-topic fraction per co-publication
/// bin. Collaborators without any labelled paper are skipped. Every bin
/// between the smallest and largest occupied one is emitted.
pub fn topics_vs_copub<'a>(series: impl IntoIterator<Item = &'a CollaboratorSeries>) -> Vec<CopubBinRow> {
    let mut bins: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for s in series {
        if s.n_topics_involved() > 0 {
            bins.entry(copub_bin(s.n_copub()))
                .or_default()
                .push(s.n_topics_involved());
        }
    }
    let (Some(&first), Some(&last)) = (bins.keys().next(), bins.keys().next_back()) else {
        return Vec::new();
    };
    let mut rows = Vec::new();
    let mut bin = first;
    loop {
        let values = bins.get(&bin).map(Vec::as_slice).unwrap_or(&[]);
        let n = values.len();
        let topics: Vec<f64> = values.iter().map(|&k| k as f64).collect();
        let single: Vec<f64> = values.iter().map(|&k| if k == 1 { 1.0 } else { 0.0 }).collect();
        let (mean_topics, se_topics) = mean_and_se(&topics);
        let (fraction_single, se_fraction) = mean_and_se(&single);
        rows.push(CopubBinRow {
            bin_low: bin.0,
            bin_high: bin.1,
            n,
            mean_topics,
            se_topics,
            fraction_single,
            se_fraction,
        });
        if bin == last {
            break;
        }
        bin = copub_bin(bin.1);
    }
    rows
}

/// Mean and standard error (sample standard deviation / √n).
pub fn mean_and_se(values: &[f64]) -> (Option<f64>, Option<f64>) {
    let n = values.len();
    if n == 0 {
        return (None, None);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (Some(mean), None);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (Some(mean), Some((var / n as f64).sqrt()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopicSpanStats {
    /// Inclusive span in years -> number of (collaborator, topic) pairs.
    pub spans: BTreeMap<i32, usize>,
    /// Papers on the topic -> number of (collaborator, topic) pairs.
    pub paper_counts: BTreeMap<usize, usize>,
    pub n_pairs: usize,
    pub mean_span: Option<f64>,
    pub mean_papers: Option<f64>,
}

/// Collaboration length and volume per (collaborator, topic) pair.
pub fn topic_span_stats<'a>(series: impl IntoIterator<Item = &'a CollaboratorSeries>) -> TopicSpanStats {
    let mut spans: BTreeMap<i32, usize> = BTreeMap::new();
    let mut paper_counts: BTreeMap<usize, usize> = BTreeMap::new();
    let (mut n_pairs, mut span_sum, mut paper_sum) = (0usize, 0i64, 0usize);
    for s in series {
        let mut per_topic: BTreeMap<u32, (i32, i32, usize)> = BTreeMap::new();
        for p in &s.papers {
            if let Some(t) = p.topic {
                let e = per_topic.entry(t).or_insert((p.year, p.year, 0));
                e.0 = e.0.min(p.year);
                e.1 = e.1.max(p.year);
                e.2 += 1;
            }
        }
        for (first, last, count) in per_topic.into_values() {
            let span = last - first + 1;
            *spans.entry(span).or_default() += 1;
            *paper_counts.entry(count).or_default() += 1;
            n_pairs += 1;
            span_sum += span as i64;
            paper_sum += count;
        }
    }
    TopicSpanStats {
        spans,
        paper_counts,
        n_pairs,
        mean_span: (n_pairs > 0).then(|| span_sum as f64 / n_pairs as f64),
        mean_papers: (n_pairs > 0).then(|| paper_sum as f64 / n_pairs as f64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::PaperRecord;

    fn corpus(papers: &[(i32, &[&str], Option<u32>)]) -> (Corpus, Vec<SeriesEntry>) {
        let recs: Vec<PaperRecord> = papers
            .iter()
            .enumerate()
            .map(|(i, (year, authors, _))| PaperRecord {
                paper_id: format!("p{i:02}"),
                year: *year,
                author_ids: authors.iter().map(|s| s.to_string()).collect(),
                reference_ids: vec![],
                c10: i as u32,
            })
            .collect();
        let c = Corpus::from_records(recs).unwrap();
        let series = papers
            .iter()
            .enumerate()
            .map(|(i, (year, _, topic))| SeriesEntry {
                paper_id: format!("p{i:02}"),
                year: *year,
                topic: *topic,
                c10: i as u32,
            })
            .collect();
        (c, series)
    }

    fn opts(min_copub: usize) -> DecomposeOptions {
        DecomposeOptions {
            min_copub,
            count_minor_papers: true,
        }
    }

    fn with_topics(n_topics: &[usize]) -> Vec<CollaboratorSeries> {
        n_topics
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let papers = (0..k.max(1))
                    .map(|t| CoPaper {
                        paper_id: format!("x{i}-{t}"),
                        year: 2000,
                        topic: (k > 0).then_some(t as u32),
                        c10: 0,
                    })
                    .collect();
                CollaboratorSeries::new("f", &format!("c{i}"), papers)
            })
            .collect()
    }

    #[test]
    fn min_copub_filter() {
        let (c, s) = corpus(&[
            (2000, &["f", "a"], Some(0)),
            (2001, &["f", "a"], Some(0)),
            (2002, &["f", "b"], Some(1)),
        ]);
        let list = decompose(&c, &s, "f", opts(2)).unwrap();
        assert_eq!(list.len(), 1);
        assert_eq!((list[0].collaborator.as_str(), list[0].n_copub()), ("a", 2));
        assert_eq!(list[0].involved_topics, BTreeSet::from([0]));
    }

    #[test]
    fn solo_focal_has_no_collaborators() {
        let (c, s) = corpus(&[(2000, &["f"], Some(0)), (2001, &["f"], Some(0))]);
        assert!(decompose(&c, &s, "f", opts(1)).unwrap().is_empty());
        assert!(matches!(decompose(&c, &s, "zz", opts(1)), Err(Error::UnknownAuthor(_))));
    }

    #[test]
    fn unlabelled_papers_count_toward_copub_unless_excluded() {
        let (c, s) = corpus(&[(2000, &["f", "a"], Some(0)), (2003, &["f", "a"], None)]);
        let list = decompose(&c, &s, "f", opts(2)).unwrap();
        assert_eq!(list[0].n_copub(), 2);
        assert_eq!(list[0].n_topics_involved(), 1);
        assert_eq!((list[0].first_year, list[0].last_year), (2000, 2003));
        let strict = DecomposeOptions {
            min_copub: 2,
            count_minor_papers: false,
        };
        assert!(decompose(&c, &s, "f", strict).unwrap().is_empty());
    }

    #[test]
    fn copub_total_matches_coauthor_count() {
        let (c, s) = corpus(&[
            (2000, &["f", "a", "b"], Some(0)),
            (2001, &["f"], Some(0)),
            (2002, &["a", "f", "c"], Some(1)),
            (2003, &["f", "c"], None),
        ]);
        let list = decompose(&c, &s, "f", opts(1)).unwrap();
        let total: usize = list.iter().map(CollaboratorSeries::n_copub).sum();
        assert_eq!(total, 2 + 2 + 1);
        for l in &list {
            assert!(l.n_topics_involved() <= l.n_copub().min(2));
        }
    }

    #[test]
    fn stats_arithmetic() {
        let st = collaborator_stats(&with_topics(&[1, 1, 2, 3]));
        assert_eq!(st.distribution, BTreeMap::from([(1, 0.5), (2, 0.25), (3, 0.25)]));
        assert_eq!(st.fraction_single, Some(0.5));
        let all_single = collaborator_stats(&with_topics(&[1, 1, 1]));
        assert_eq!(all_single.fraction_single, Some(1.0));
        let empty = collaborator_stats(&[]);
        assert!(empty.is_empty());
        assert_eq!(empty.fraction_single, None);
    }

    #[test]
    fn topicless_collaborators_reported_separately() {
        let st = collaborator_stats(&with_topics(&[0, 1, 2, 0]));
        assert_eq!((st.n_qualifying, st.n_without_topic), (2, 2));
        assert!((st.distribution.values().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pooled_is_mean_of_means() {
        let a = collaborator_stats(&with_topics(&[1]));
        let b = collaborator_stats(&with_topics(&[1, 2]));
        let pooled = pooled_topic_distribution(&[a.clone(), b, collaborator_stats(&[])]).unwrap();
        assert_eq!(pooled, BTreeMap::from([(1, 0.75), (2, 0.25)]));
        assert_eq!(
            pooled_topic_distribution(std::slice::from_ref(&a)).unwrap(),
            a.distribution
        );
        assert!(pooled_topic_distribution(&[]).is_none());
    }

    #[test]
    fn bin_edges() {
        let bins: Vec<(usize, usize)> = [1, 2, 5, 6, 9, 10, 17, 18, 33, 34]
            .iter()
            .map(|&n| copub_bin(n))
            .collect();
        assert_eq!(
            bins,
            [
                (1, 2),
                (2, 3),
                (5, 6),
                (6, 10),
                (6, 10),
                (10, 18),
                (10, 18),
                (18, 34),
                (18, 34),
                (34, 66)
            ]
        );
    }

    #[test]
    fn single_topic_everywhere() {
        let list: Vec<CollaboratorSeries> = (1..30)
            .map(|n| {
                let papers = (0..n)
                    .map(|i| CoPaper {
                        paper_id: format!("{n}-{i}"),
                        year: 2000 + i,
                        topic: Some(0),
                        c10: 0,
                    })
                    .collect();
                CollaboratorSeries::new("f", &format!("c{n}"), papers)
            })
            .collect();
        let rows = topics_vs_copub(&list);
        assert_eq!(rows.first().map(|r| r.bin_low), Some(1));
        assert_eq!(rows.last().map(|r| (r.bin_low, r.bin_high)), Some((18, 34)));
        assert!(rows.iter().all(|r| r.fraction_single == Some(1.0)));
    }

    #[test]
    fn inclusive_topic_span() {
        let mk = |years: &[i32]| {
            let papers = years
                .iter()
                .map(|&y| CoPaper {
                    paper_id: y.to_string(),
                    year: y,
                    topic: Some(0),
                    c10: 0,
                })
                .collect();
            CollaboratorSeries::new("f", "a", papers)
        };
        let s = topic_span_stats(&[mk(&[1990, 1993])]);
        assert_eq!(s.spans, BTreeMap::from([(4, 1)]));
        assert_eq!(s.paper_counts, BTreeMap::from([(2, 1)]));
        let single = topic_span_stats(&[mk(&[1990])]);
        assert_eq!(single.spans, BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn truncation_keeps_earlier_papers() {
        let papers = [1990, 1995, 2000]
            .iter()
            .map(|&y| CoPaper {
                paper_id: y.to_string(),
                year: y,
                topic: Some((y / 5 % 2) as u32),
                c10: 0,
            })
            .collect();
        let s = CollaboratorSeries::new("f", "a", papers);
        let t = s.before(1996).unwrap();
        assert_eq!(t.n_copub(), 2);
        assert!(s.before(1990).is_none());
    }

    #[test]
    fn collaborator_table() {
        let mut buf = Vec::new();
        write_collaborator_csv(&mut buf, &with_topics(&[2])).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1), Some("c0,2,2000,2000,2,0;1"));
    }
}
