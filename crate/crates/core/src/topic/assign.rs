use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::cocite::CoCitingNetwork;
use crate::error::{Error, Result};
use crate::ingest::Corpus;

use super::modularity::ModularityContext;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TopicInfo {
    pub id: u32,
    pub size: usize,
    pub first_year: i32,
    pub first_paper: String,
}

/// Papers of one scientist labelled with major topics.
///
/// Topics are numbered by the position of their first paper in the
/// chronological series, so topic 0 is the one the scientist started first.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicAssignment {
    pub owner: String,
    pub paper_ids: Vec<String>,
    pub years: Vec<i32>,
    pub topic_of: Vec<Option<u32>>,
    pub major_topics: Vec<TopicInfo>,
}

impl TopicAssignment {
    pub fn n_topics(&self) -> usize {
        self.major_topics.len()
    }

    pub fn topic_first_year(&self, topic: u32) -> Option<i32> {
        self.major_topics.get(topic as usize).map(|t| t.first_year)
    }

    /// Rebuild topic metadata from an exported series.
    pub fn from_series(owner: &str, series: &[SeriesEntry]) -> Self {
        let mut major_topics: Vec<TopicInfo> = Vec::new();
        for entry in series {
            if let Some(t) = entry.topic {
                let t = t as usize;
                if major_topics.len() <= t {
                    major_topics.resize_with(t + 1, || TopicInfo {
                        id: 0,
                        size: 0,
                        first_year: i32::MAX,
                        first_paper: String::new(),
                    });
                }
                let info = &mut major_topics[t];
                if info.size == 0 {
                    info.id = t as u32;
                    info.first_year = entry.year;
                    info.first_paper = entry.paper_id.clone();
                }
                info.size += 1;
            }
        }
        Self {
            owner: owner.to_string(),
            paper_ids: series.iter().map(|e| e.paper_id.clone()).collect(),
            years: series.iter().map(|e| e.year).collect(),
            topic_of: series.iter().map(|e| e.topic).collect(),
            major_topics,
        }
    }
}

/// Keep communities holding strictly more than `threshold` of the
/// scientist's papers. Everything else, including papers without references,
/// is labelled `None`.
pub fn assign_topics(net: &CoCitingNetwork, ctx: &ModularityContext, threshold: f64) -> TopicAssignment {
    assert_eq!(
        ctx.assignment().len(),
        net.n_nodes(),
        "partition must cover the network"
    );
    debug_assert!(threshold > 0.0 && threshold < 1.0);
    let n = net.n_nodes();
    let mut sizes = vec![0usize; ctx.n_communities()];
    let mut first = vec![usize::MAX; ctx.n_communities()];
    for (i, &c) in ctx.assignment().iter().enumerate() {
        if net.has_references[i] {
            sizes[c] += 1;
            first[c] = first[c].min(i);
        }
    }
    let mut major: Vec<usize> = (0..sizes.len())
        .filter(|&c| sizes[c] > 0 && sizes[c] as f64 / n as f64 > threshold)
        .collect();
    major.sort_by_key(|&c| first[c]);

    let mut topic_of_community = vec![None; sizes.len()];
    for (t, &c) in major.iter().enumerate() {
        topic_of_community[c] = Some(t as u32);
    }
    let topic_of = ctx
        .assignment()
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            if net.has_references[i] {
                topic_of_community[c]
            } else {
                None
            }
        })
        .collect();
    let major_topics = major
        .iter()
        .enumerate()
        .map(|(t, &c)| TopicInfo {
            id: t as u32,
            size: sizes[c],
            first_year: net.years[first[c]],
            first_paper: net.paper_ids[first[c]].clone(),
        })
        .collect();

    TopicAssignment {
        owner: net.owner.clone(),
        paper_ids: net.paper_ids.clone(),
        years: net.years.clone(),
        topic_of,
        major_topics,
    }
}

/// One point of a scientist's publication series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesEntry {
    pub paper_id: String,
    pub year: i32,
    pub topic: Option<u32>,
    pub c10: u32,
}

/// The owner's chronological series with topic labels and citation counts.
pub fn colored_series(corpus: &Corpus, ta: &TopicAssignment) -> Result<Vec<SeriesEntry>> {
    ta.paper_ids
        .iter()
        .zip(&ta.topic_of)
        .map(|(id, &topic)| {
            let p = corpus.get(id).ok_or_else(|| {
                Error::InvalidParameter(format!("paper `{id}` of `{}` is not in the corpus", ta.owner))
            })?;
            Ok(SeriesEntry {
                paper_id: id.clone(),
                year: p.year,
                topic,
                c10: p.c10,
            })
        })
        .collect()
}

/// `paper_id,year,topic_id,c10`, with topic -1 for unlabelled papers.
pub fn write_series_csv<W: Write>(out: W, series: &[SeriesEntry]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["paper_id", "year", "topic_id", "c10"])?;
    for e in series {
        let topic = e.topic.map_or(-1, i64::from);
        w.write_record([
            e.paper_id.clone(),
            e.year.to_string(),
            topic.to_string(),
            e.c10.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_series_csv<R: Read>(input: R) -> Result<Vec<SeriesEntry>> {
    #[derive(Deserialize)]
    struct Row {
        paper_id: String,
        year: i32,
        topic_id: i64,
        c10: u32,
    }
    let mut reader = csv::Reader::from_reader(input);
    reader
        .deserialize::<Row>()
        .map(|row| {
            let row = row?;
            Ok(SeriesEntry {
                paper_id: row.paper_id,
                year: row.year,
                topic: u32::try_from(row.topic_id).ok(),
                c10: row.c10,
            })
        })
        .collect()
}
