//! Reference-set similarity between a focal scientist and a collaborator.
//!
//! Γ is the union of reference ids over a set of papers. `Overall` compares
//! each side's papers excluding the ones they wrote together; `Before` only
//! uses papers published before their first joint paper.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ingest::Corpus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SimilarityMetric {
    Jaccard,
    Cosine,
    Lhn,
}

impl SimilarityMetric {
    pub const ALL: [SimilarityMetric; 3] = [Self::Jaccard, Self::Cosine, Self::Lhn];

    pub fn name(self) -> &'static str {
        match self {
            Self::Jaccard => "jaccard",
            Self::Cosine => "cosine",
            Self::Lhn => "lhn",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SimilarityVariant {
    Overall,
    Before,
}

impl SimilarityVariant {
    pub const ALL: [SimilarityVariant; 2] = [Self::Overall, Self::Before];

    pub fn name(self) -> &'static str {
        match self {
            Self::Overall => "overall",
            Self::Before => "before",
        }
    }
}

/// `None` when either set is empty.
pub fn set_similarity<T: Eq + std::hash::Hash>(
    a: &HashSet<T>,
    b: &HashSet<T>,
    metric: SimilarityMetric,
) -> Option<f64> {
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let shared = small.iter().filter(|r| large.contains(*r)).count() as f64;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    Some(match metric {
        SimilarityMetric::Jaccard => shared / (na + nb - shared),
        SimilarityMetric::Cosine => shared / (na * nb).sqrt(),
        SimilarityMetric::Lhn => shared / (na * nb),
    })
}

/// Both reference sets for one pair, or `None` if the variant has no papers
/// to draw from (no joint paper for `Before`).
fn reference_sets<'c>(
    corpus: &'c Corpus,
    focal_papers: &[usize],
    collaborator_papers: &[usize],
    variant: SimilarityVariant,
) -> Option<(HashSet<&'c str>, HashSet<&'c str>)> {
    let joint: HashSet<usize> = collaborator_papers
        .iter()
        .copied()
        .filter(|p| focal_papers.binary_search_by(|q| cmp_chrono(corpus, *q, *p)).is_ok())
        .collect();
    let keep: Box<dyn Fn(usize) -> bool> = match variant {
        SimilarityVariant::Overall => Box::new(|p| !joint.contains(&p)),
        SimilarityVariant::Before => {
            let start = joint.iter().map(|&p| corpus.paper(p).year).min()?;
            Box::new(move |p| corpus.paper(p).year < start)
        }
    };
    let gamma = |papers: &[usize]| -> HashSet<&'c str> {
        papers
            .iter()
            .copied()
            .filter(|&p| keep(p))
            .flat_map(|p| corpus.paper(p).reference_ids.iter().map(String::as_str))
            .collect()
    };
    Some((gamma(focal_papers), gamma(collaborator_papers)))
}

/// Author paper lists are ordered by (year, paper_id), which is also the order
/// of corpus indices within a year.
fn cmp_chrono(corpus: &Corpus, a: usize, b: usize) -> std::cmp::Ordering {
    corpus.paper(a).year.cmp(&corpus.paper(b).year).then(a.cmp(&b))
}

fn papers_of<'c>(corpus: &'c Corpus, author: &str) -> Result<&'c [usize]> {
    corpus
        .author_papers(author)
        .ok_or_else(|| Error::UnknownAuthor(author.to_string()))
}

/// Similarity of the two scientists' reference sets; `None` when a set is empty
/// or the variant is undefined for this pair.
pub fn reference_similarity(
    corpus: &Corpus,
    focal: &str,
    collaborator: &str,
    metric: SimilarityMetric,
    variant: SimilarityVariant,
) -> Result<Option<f64>> {
    let fp = papers_of(corpus, focal)?;
    let cp = papers_of(corpus, collaborator)?;
    Ok(reference_sets(corpus, fp, cp, variant).and_then(|(a, b)| set_similarity(&a, &b, metric)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollaboratorSimilarity {
    pub collaborator: String,
    /// Indexed `[variant][metric]` in `ALL` order.
    pub values: [[Option<f64>; 3]; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityProfile {
    pub focal: String,
    pub collaborators: Vec<CollaboratorSimilarity>,
    /// Means over defined values, indexed like `values`.
    pub means: [[Option<f64>; 3]; 2],
}

impl SimilarityProfile {
    pub fn mean(&self, variant: SimilarityVariant, metric: SimilarityMetric) -> Option<f64> {
        self.means[variant as usize][metric as usize]
    }

    pub fn values(&self, variant: SimilarityVariant, metric: SimilarityMetric) -> impl Iterator<Item = f64> + '_ {
        self.collaborators
            .iter()
            .filter_map(move |c| c.values[variant as usize][metric as usize])
    }
}

pub fn similarity_profile(corpus: &Corpus, focal: &str, collaborators: &[String]) -> Result<SimilarityProfile> {
    let fp = papers_of(corpus, focal)?;
    let mut rows = Vec::with_capacity(collaborators.len());
    for c in collaborators {
        let cp = papers_of(corpus, c)?;
        let mut values = [[None; 3]; 2];
        for variant in SimilarityVariant::ALL {
            if let Some((a, b)) = reference_sets(corpus, fp, cp, variant) {
                for metric in SimilarityMetric::ALL {
                    values[variant as usize][metric as usize] = set_similarity(&a, &b, metric);
                }
            }
        }
        rows.push(CollaboratorSimilarity {
            collaborator: c.clone(),
            values,
        });
    }
    let mut means = [[None; 3]; 2];
    for variant in SimilarityVariant::ALL {
        for metric in SimilarityMetric::ALL {
            let defined: Vec<f64> = rows
                .iter()
                .filter_map(|r| r.values[variant as usize][metric as usize])
                .collect();
            if !defined.is_empty() {
                means[variant as usize][metric as usize] = Some(defined.iter().sum::<f64>() / defined.len() as f64);
            }
        }
    }
    Ok(SimilarityProfile {
        focal: focal.to_string(),
        collaborators: rows,
        means,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::PaperRecord;
    use rand::{Rng, SeedableRng};

    fn set(items: &[&'static str]) -> HashSet<&'static str> {
        items.iter().copied().collect()
    }

    #[test]
    fn identical_pair() {
        let a = set(&["r1", "r2"]);
        assert_eq!(set_similarity(&a, &a, SimilarityMetric::Jaccard), Some(1.0));
        assert_eq!(set_similarity(&a, &a, SimilarityMetric::Cosine), Some(1.0));
        assert_eq!(set_similarity(&a, &a, SimilarityMetric::Lhn), Some(0.5));
    }

    #[test]
    fn worked_triple() {
        let a = set(&["r1", "r2", "r3"]);
        let b = set(&["r2", "r3", "r4"]);
        assert!((set_similarity(&a, &b, SimilarityMetric::Jaccard).unwrap() - 0.5).abs() < 1e-15);
        assert!((set_similarity(&a, &b, SimilarityMetric::Cosine).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((set_similarity(&a, &b, SimilarityMetric::Lhn).unwrap() - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn disjoint_and_empty() {
        let a = set(&["x"]);
        let b = set(&["y", "z"]);
        for m in SimilarityMetric::ALL {
            assert_eq!(set_similarity(&a, &b, m), Some(0.0));
            assert_eq!(set_similarity(&a, &HashSet::new(), m), None);
        }
    }

    #[test]
    fn jaccard_never_exceeds_cosine() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let a: HashSet<u8> = (0..rng.random_range(1..15)).map(|_| rng.random_range(0..30)).collect();
            let b: HashSet<u8> = (0..rng.random_range(1..15)).map(|_| rng.random_range(0..30)).collect();
            let j = set_similarity(&a, &b, SimilarityMetric::Jaccard).unwrap();
            let c = set_similarity(&a, &b, SimilarityMetric::Cosine).unwrap();
            assert!(j <= c + 1e-15 && (0.0..=1.0).contains(&c));
        }
    }

    fn paper(id: &str, year: i32, authors: &[&str], refs: &[&str]) -> PaperRecord {
        PaperRecord {
            paper_id: id.into(),
            year,
            author_ids: authors.iter().map(|s| s.to_string()).collect(),
            reference_ids: refs.iter().map(|s| s.to_string()).collect(),
            c10: 0,
        }
    }

    fn corpus() -> Corpus {
        Corpus::from_records(vec![
            paper("f1", 2000, &["f"], &["r1", "r2"]),
            paper("c1", 2001, &["c"], &["r2", "r3"]),
            paper("j1", 2003, &["f", "c"], &["z"]),
            paper("f2", 2005, &["f"], &["r9"]),
            paper("c2", 2006, &["c"], &["r1"]),
        ])
        .unwrap()
    }

    #[test]
    fn variants_select_papers() {
        let c = corpus();
        // before 2003: {r1,r2} vs {r2,r3}
        let before = reference_similarity(&c, "f", "c", SimilarityMetric::Jaccard, SimilarityVariant::Before).unwrap();
        assert_eq!(before, Some(1.0 / 3.0));
        // overall, excluding j1: {r1,r2,r9} vs {r2,r3,r1}
        let overall =
            reference_similarity(&c, "f", "c", SimilarityMetric::Jaccard, SimilarityVariant::Overall).unwrap();
        assert_eq!(overall, Some(0.5));
    }

    #[test]
    fn before_is_undefined_without_prior_papers() {
        let c = Corpus::from_records(vec![
            paper("j1", 2003, &["f", "c"], &["z"]),
            paper("f2", 2005, &["f"], &["r9"]),
        ])
        .unwrap();
        let v = reference_similarity(&c, "f", "c", SimilarityMetric::Cosine, SimilarityVariant::Before).unwrap();
        assert_eq!(v, None);
        let p = similarity_profile(&c, "f", &["c".to_string()]).unwrap();
        assert_eq!(p.mean(SimilarityVariant::Before, SimilarityMetric::Cosine), None);
        // c has no papers outside the joint one
        assert_eq!(p.mean(SimilarityVariant::Overall, SimilarityMetric::Cosine), None);
    }

    #[test]
    fn profile_means() {
        let c = corpus();
        let p = similarity_profile(&c, "f", &["c".to_string()]).unwrap();
        assert_eq!(p.mean(SimilarityVariant::Overall, SimilarityMetric::Jaccard), Some(0.5));
        assert_eq!(
            p.values(SimilarityVariant::Before, SimilarityMetric::Jaccard).count(),
            1
        );
        assert!(similarity_profile(&c, "f", &["ghost".to_string()]).is_err());
    }
}
