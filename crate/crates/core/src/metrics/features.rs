use serde::Serialize;

use crate::decompose::CollaboratorSeries;
use crate::error::{Error, Result};
use crate::ingest::Corpus;

/// A collaborator's standing in the year they first wrote with the focal scientist.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InitialCollaboratorFeatures {
    pub collaborator: String,
    pub first_joint_year: i32,
    /// Years since the collaborator's own first paper; 0 for newcomers.
    pub past_career_years: i32,
    /// Papers published in earlier years.
    pub past_publications: usize,
    /// Mean c10 over those papers.
    pub citations_per_past_paper: Option<f64>,
}

impl InitialCollaboratorFeatures {
    pub fn is_newcomer(&self) -> bool {
        self.past_publications == 0
    }
}

pub fn initial_collaborator_features(
    corpus: &Corpus,
    collaborators: &[CollaboratorSeries],
) -> Result<Vec<InitialCollaboratorFeatures>> {
    collaborators
        .iter()
        .map(|s| {
            let year = s.first_year;
            let papers = corpus
                .author_papers(&s.collaborator)
                .ok_or_else(|| Error::UnknownAuthor(s.collaborator.clone()))?;
            let prior: Vec<_> = papers
                .iter()
                .map(|&p| corpus.paper(p))
                .take_while(|p| p.year < year)
                .collect();
            Ok(InitialCollaboratorFeatures {
                collaborator: s.collaborator.clone(),
                first_joint_year: year,
                past_career_years: prior.first().map_or(0, |p| year - p.year),
                past_publications: prior.len(),
                citations_per_past_paper: (!prior.is_empty())
                    .then(|| prior.iter().map(|p| f64::from(p.c10)).sum::<f64>() / prior.len() as f64),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::CoPaper;
    use crate::ingest::PaperRecord;

    fn paper(id: &str, year: i32, authors: &[&str], c10: u32) -> PaperRecord {
        PaperRecord {
            paper_id: id.into(),
            year,
            author_ids: authors.iter().map(|s| s.to_string()).collect(),
            reference_ids: Vec::new(),
            c10,
        }
    }

    fn joint(id: &str, year: i32) -> CoPaper {
        CoPaper {
            paper_id: id.into(),
            year,
            topic: Some(0),
            c10: 0,
        }
    }

    #[test]
    fn newcomer_and_veteran() {
        let corpus = Corpus::from_records(vec![
            paper("v1", 1990, &["v"], 0),
            paper("v2", 1993, &["v"], 5),
            paper("v3", 1995, &["v"], 10),
            paper("v4", 2000, &["v", "f"], 99),
            paper("n1", 2001, &["n", "f"], 3),
            paper("n2", 2001, &["n"], 3),
        ])
        .unwrap();
        let list = [
            CollaboratorSeries::new("f", "n", vec![joint("n1", 2001)]),
            CollaboratorSeries::new("f", "v", vec![joint("v4", 2000)]),
        ];
        let feats = initial_collaborator_features(&corpus, &list).unwrap();
        assert_eq!(feats[0].past_career_years, 0);
        assert_eq!(feats[0].past_publications, 0);
        assert_eq!(feats[0].citations_per_past_paper, None);
        assert!(feats[0].is_newcomer());
        assert_eq!(feats[1].past_career_years, 10);
        assert_eq!(feats[1].past_publications, 3);
        assert_eq!(feats[1].citations_per_past_paper, Some(5.0));
    }
}
