//! Randomized counterparts of a focal scientist's collaboration data.
//!
//! * [`reshuffle_time_controlled`] swaps collaborator-paper authorship links
//!   between papers published in the same year.
//! * [`rewire_degree_preserved`] applies double-edge swaps to the network
//!   among collaborators.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::{Read, Write};

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::Corpus;
use crate::seed::{derive_seed, rng_from_seed};
use crate::topic::{louvain, modularity, ModularityContext, SeriesEntry, WeightedGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkedPaper {
    /// Position of the paper in the focal scientist's series.
    pub series_pos: usize,
    pub paper_id: String,
    pub year: i32,
}

/// Collaborators on one side, the focal scientist's coauthored papers on the
/// other; a link means the collaborator is an author of the paper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthorshipBipartite {
    pub focal: String,
    /// Sorted ascending.
    pub collaborators: Vec<String>,
    /// In series order.
    pub papers: Vec<LinkedPaper>,
    /// `(collaborator, paper)` index pairs, sorted.
    pub links: Vec<(u32, u32)>,
}

impl AuthorshipBipartite {
    /// Links between the focal scientist's coauthors and the papers in `series`.
    pub fn from_series(corpus: &Corpus, focal: &str, series: &[SeriesEntry]) -> Result<Self> {
        let mut papers = Vec::new();
        let mut raw: Vec<(&str, u32)> = Vec::new();
        for (pos, entry) in series.iter().enumerate() {
            let record = corpus
                .get(&entry.paper_id)
                .ok_or_else(|| Error::InvalidParameter(format!("paper `{}` is not in the corpus", entry.paper_id)))?;
            let coauthors: Vec<&str> = record
                .author_ids
                .iter()
                .map(String::as_str)
                .filter(|a| *a != focal)
                .collect();
            if coauthors.is_empty() {
                continue;
            }
            let idx = papers.len() as u32;
            papers.push(LinkedPaper {
                series_pos: pos,
                paper_id: entry.paper_id.clone(),
                year: record.year,
            });
            raw.extend(coauthors.into_iter().map(|a| (a, idx)));
        }
        let collaborators: Vec<String> = raw
            .iter()
            .map(|&(a, _)| a)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(str::to_string)
            .collect();
        let mut links: Vec<(u32, u32)> = raw
            .iter()
            .map(|&(a, p)| {
                let c = collaborators
                    .binary_search_by(|x| x.as_str().cmp(a))
                    .expect("collected above");
                (c as u32, p)
            })
            .collect();
        links.sort_unstable();
        Ok(Self {
            focal: focal.to_string(),
            collaborators,
            papers,
            links,
        })
    }

    pub fn collaborator_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.collaborators.len()];
        for &(c, _) in &self.links {
            d[c as usize] += 1;
        }
        d
    }

    pub fn paper_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.papers.len()];
        for &(_, p) in &self.links {
            d[p as usize] += 1;
        }
        d
    }

    /// Sorted publication years of each collaborator's links.
    pub fn collaborator_years(&self) -> Vec<Vec<i32>> {
        let mut years = vec![Vec::new(); self.collaborators.len()];
        for &(c, p) in &self.links {
            years[c as usize].push(self.papers[p as usize].year);
        }
        for y in &mut years {
            y.sort_unstable();
        }
        years
    }

    /// `collaborator_id,paper_id,year` rows.
    pub fn write_links_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["collaborator_id", "paper_id", "year"])?;
        for &(c, p) in &self.links {
            let paper = &self.papers[p as usize];
            w.write_record([
                self.collaborators[c as usize].as_str(),
                paper.paper_id.as_str(),
                &paper.year.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Rebuild from exported links. Papers are taken from `series`; a link
    /// naming a paper outside the series is an error.
    pub fn read_links_csv<R: Read>(focal: &str, series: &[SeriesEntry], input: R) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            collaborator_id: String,
            paper_id: String,
        }
        let position: BTreeMap<&str, usize> = series
            .iter()
            .enumerate()
            .map(|(i, e)| (e.paper_id.as_str(), i))
            .collect();
        let mut rows = Vec::new();
        for row in csv::Reader::from_reader(input).deserialize::<Row>() {
            let row = row?;
            let pos = *position.get(row.paper_id.as_str()).ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "linked paper `{}` not in the series of `{focal}`",
                    row.paper_id
                ))
            })?;
            rows.push((row.collaborator_id, pos));
        }
        let positions: BTreeSet<usize> = rows.iter().map(|&(_, p)| p).collect();
        let papers: Vec<LinkedPaper> = positions
            .iter()
            .map(|&pos| LinkedPaper {
                series_pos: pos,
                paper_id: series[pos].paper_id.clone(),
                year: series[pos].year,
            })
            .collect();
        let collaborators: Vec<String> = rows
            .iter()
            .map(|(c, _)| c.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut links: Vec<(u32, u32)> = rows
            .iter()
            .map(|(c, pos)| {
                let ci = collaborators.binary_search(c).expect("collected above");
                let pi = papers
                    .binary_search_by_key(pos, |p| p.series_pos)
                    .expect("collected above");
                (ci as u32, pi as u32)
            })
            .collect();
        links.sort_unstable();
        links.dedup();
        Ok(Self {
            focal: focal.to_string(),
            collaborators,
            papers,
            links,
        })
    }
}

/// Same-year authorship reshuffling.
///
/// Makes `rounds_factor × |links|` attempts. Each attempt draws a link `(a, j)`
/// uniformly, then a link `(b, i)` uniformly among links whose paper has the
/// same year as `j`, and rewires them to `(a, i)` and `(b, j)`. Attempts with
/// `a == b`, `i == j`, or that would duplicate an existing link are rejected
/// but still count toward the budget.
pub fn reshuffle_time_controlled(bip: &AuthorshipBipartite, rounds_factor: usize, seed: u64) -> AuthorshipBipartite {
    let mut out = bip.clone();
    let n_links = out.links.len();
    if n_links < 2 {
        return out;
    }
    let mut rng = rng_from_seed(seed);

    let mut by_year: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (l, &(_, p)) in out.links.iter().enumerate() {
        by_year.entry(out.papers[p as usize].year).or_default().push(l);
    }
    // link index -> (year bucket, position inside it is irrelevant)
    let buckets: Vec<Vec<usize>> = by_year.into_values().collect();
    let mut bucket_of = vec![0usize; n_links];
    for (b, links) in buckets.iter().enumerate() {
        for &l in links {
            bucket_of[l] = b;
        }
    }

    let mut present: HashSet<(u32, u32)> = out.links.iter().copied().collect();
    let attempts = rounds_factor * n_links;
    for _ in 0..attempts {
        let first = rng.random_range(0..n_links);
        let bucket = &buckets[bucket_of[first]];
        let second = bucket[rng.random_range(0..bucket.len())];
        let (a, j) = out.links[first];
        let (b, i) = out.links[second];
        if a == b || i == j || present.contains(&(a, i)) || present.contains(&(b, j)) {
            continue;
        }
        present.remove(&(a, j));
        present.remove(&(b, i));
        present.insert((a, i));
        present.insert((b, j));
        out.links[first] = (a, i);
        out.links[second] = (b, j);
    }
    out.links.sort_unstable();
    out
}

/// Network among a focal scientist's collaborators: two collaborators are
/// linked when they coauthor at least one of the focal scientist's papers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollabNetwork {
    pub focal: String,
    pub nodes: Vec<String>,
    /// `(u, v)` with `u < v`, sorted, no duplicates.
    pub edges: Vec<(u32, u32)>,
}

impl CollabNetwork {
    pub fn from_bipartite(bip: &AuthorshipBipartite) -> Self {
        let mut authors: Vec<Vec<u32>> = vec![Vec::new(); bip.papers.len()];
        for &(c, p) in &bip.links {
            authors[p as usize].push(c);
        }
        let mut edges = BTreeSet::new();
        for list in &authors {
            for (x, &u) in list.iter().enumerate() {
                for &v in &list[x + 1..] {
                    edges.insert((u.min(v), u.max(v)));
                }
            }
        }
        Self {
            focal: bip.focal.clone(),
            nodes: bip.collaborators.clone(),
            edges: edges.into_iter().collect(),
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.nodes.len()];
        for &(u, v) in &self.edges {
            d[u as usize] += 1;
            d[v as usize] += 1;
        }
        d
    }

    pub fn to_graph(&self) -> WeightedGraph {
        let edges: Vec<_> = self.edges.iter().map(|&(u, v)| (u as usize, v as usize, 1.0)).collect();
        WeightedGraph::from_edges(self.nodes.len(), &edges)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rewired {
    pub network: CollabNetwork,
    pub accepted: usize,
    /// Set when the input had fewer than two edges and was returned as is.
    pub degenerate: bool,
}

/// Degree-preserving double-edge swaps.
///
/// `rounds_factor × |edges|` attempts; each picks two edges `(a, b)`, `(c, d)`
/// (the second with a random orientation) and replaces them by `(a, d)`,
/// `(c, b)` unless that creates a self-loop or a multi-edge.
pub fn rewire_degree_preserved(net: &CollabNetwork, rounds_factor: usize, seed: u64) -> Rewired {
    let n_edges = net.edges.len();
    if n_edges < 2 {
        log::warn!(
            "collaboration network of `{}` has {} edge(s); nothing to rewire",
            net.focal,
            n_edges
        );
        return Rewired {
            network: net.clone(),
            accepted: 0,
            degenerate: true,
        };
    }
    let mut rng = rng_from_seed(seed);
    let mut edges = net.edges.clone();
    let mut present: HashSet<(u32, u32)> = edges.iter().copied().collect();
    let norm = |u: u32, v: u32| (u.min(v), u.max(v));
    let mut accepted = 0;
    for _ in 0..rounds_factor * n_edges {
        let x = rng.random_range(0..n_edges);
        let y = rng.random_range(0..n_edges);
        if x == y {
            continue;
        }
        let (a, b) = edges[x];
        let (mut c, mut d) = edges[y];
        if rng.random_bool(0.5) {
            std::mem::swap(&mut c, &mut d);
        }
        if a == d || c == b {
            continue;
        }
        let e1 = norm(a, d);
        let e2 = norm(c, b);
        if present.contains(&e1) || present.contains(&e2) {
            continue;
        }
        present.remove(&edges[x]);
        present.remove(&edges[y]);
        present.insert(e1);
        present.insert(e2);
        edges[x] = e1;
        edges[y] = e2;
        accepted += 1;
    }
    edges.sort_unstable();
    Rewired {
        network: CollabNetwork {
            focal: net.focal.clone(),
            nodes: net.nodes.clone(),
            edges,
        },
        accepted,
        degenerate: false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QSignificance {
    pub q_real: f64,
    pub q_rand_mean: f64,
    /// `None` when the rewired networks have no positive modularity.
    pub ratio: Option<f64>,
}

/// Maximized modularity of the network against the mean over `n_rewires`
/// degree-preserved rewirings.
pub fn q_significance(net: &CollabNetwork, n_rewires: usize, rounds_factor: usize, seed: u64) -> Result<QSignificance> {
    if net.edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if n_rewires == 0 {
        return Err(Error::InvalidParameter("n_rewires must be at least 1".into()));
    }
    let max_q = |n: &CollabNetwork, s: u64| -> Result<f64> {
        let g = n.to_graph();
        let c = louvain(&g, s)?;
        Ok(modularity(&ModularityContext::new(g, &c)?))
    };
    let q_real = max_q(net, derive_seed(seed, &["real"]))?;
    let mut total = 0.0;
    for r in 0..n_rewires {
        let tag = r.to_string();
        let rewired = rewire_degree_preserved(net, rounds_factor, derive_seed(seed, &["rewire", &tag]));
        total += max_q(&rewired.network, derive_seed(seed, &["detect", &tag]))?;
    }
    let q_rand_mean = total / n_rewires as f64;
    Ok(QSignificance {
        q_real,
        q_rand_mean,
        ratio: (q_rand_mean > 0.0).then(|| q_real / q_rand_mean),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::PaperRecord;

    fn bip(papers: &[(i32, &[&str])]) -> AuthorshipBipartite {
        let recs: Vec<PaperRecord> = papers
            .iter()
            .enumerate()
            .map(|(i, (year, authors))| PaperRecord {
                paper_id: format!("p{i:02}"),
                year: *year,
                author_ids: std::iter::once("f")
                    .chain(authors.iter().copied())
                    .map(String::from)
                    .collect(),
                reference_ids: vec![],
                c10: 0,
            })
            .collect();
        let corpus = Corpus::from_records(recs).unwrap();
        let series: Vec<SeriesEntry> = corpus
            .author_papers("f")
            .unwrap()
            .iter()
            .map(|&i| {
                let p = corpus.paper(i);
                SeriesEntry {
                    paper_id: p.paper_id.clone(),
                    year: p.year,
                    topic: None,
                    c10: 0,
                }
            })
            .collect();
        AuthorshipBipartite::from_series(&corpus, "f", &series).unwrap()
    }

    #[test]
    fn bipartite_links_exclude_focal_and_solo_papers() {
        let b = bip(&[(2000, &["a", "b"]), (2001, &[]), (2002, &["a"])]);
        assert_eq!(b.collaborators, ["a", "b"]);
        assert_eq!(b.papers.len(), 2);
        assert_eq!(b.papers[1].series_pos, 2);
        assert_eq!(b.links, [(0, 0), (0, 1), (1, 0)]);
    }

    #[test]
    fn distinct_years_are_fixed_points() {
        let b = bip(&[(2000, &["a", "b"]), (2001, &["c"]), (2002, &["a", "c"]), (2003, &["b"])]);
        for seed in 0..10 {
            assert_eq!(reshuffle_time_controlled(&b, 4, seed), b);
        }
    }

    #[test]
    fn two_by_two_swap_crosses_links() {
        let b = bip(&[(2000, &["a"]), (2000, &["b"])]);
        let crossed = vec![(0, 1), (1, 0)];
        let mut seen_crossed = false;
        for seed in 0..50 {
            let s = reshuffle_time_controlled(&b, 1, seed);
            assert!(s.links == b.links || s.links == crossed);
            seen_crossed |= s.links == crossed;
            assert_eq!(s.collaborator_degrees(), b.collaborator_degrees());
            assert_eq!(s.paper_degrees(), b.paper_degrees());
        }
        assert!(seen_crossed);
    }

    #[test]
    fn links_csv_roundtrip() {
        let b = bip(&[(2000, &["a", "b"]), (2001, &[]), (2002, &["a"])]);
        let mut buf = Vec::new();
        b.write_links_csv(&mut buf).unwrap();
        let series: Vec<SeriesEntry> = ["p00", "p01", "p02"]
            .iter()
            .zip([2000, 2001, 2002])
            .map(|(id, y)| SeriesEntry {
                paper_id: id.to_string(),
                year: y,
                topic: None,
                c10: 0,
            })
            .collect();
        let back = AuthorshipBipartite::read_links_csv("f", &series, buf.as_slice()).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn star_is_rigid() {
        let net = CollabNetwork {
            focal: "f".into(),
            nodes: (0..6).map(|i| format!("c{i}")).collect(),
            edges: (1..6).map(|v| (0, v)).collect(),
        };
        for seed in 0..10 {
            let r = rewire_degree_preserved(&net, 4, seed);
            assert_eq!(r.network, net);
            assert_eq!(r.accepted, 0);
        }
    }

    #[test]
    fn single_edge_is_degenerate() {
        let net = CollabNetwork {
            focal: "f".into(),
            nodes: vec!["a".into(), "b".into()],
            edges: vec![(0, 1)],
        };
        assert!(rewire_degree_preserved(&net, 4, 0).degenerate);
    }

    #[test]
    fn collab_network_from_coauthorship() {
        let b = bip(&[(2000, &["a", "b", "c"]), (2001, &["c", "d"]), (2002, &["e"])]);
        let net = CollabNetwork::from_bipartite(&b);
        assert_eq!(net.edges, [(0, 1), (0, 2), (1, 2), (2, 3)]);
        assert_eq!(net.degrees(), [2, 2, 3, 1, 0]);
    }

    #[test]
    fn empty_network_has_no_significance() {
        let net = CollabNetwork {
            focal: "f".into(),
            nodes: vec!["a".into()],
            edges: vec![],
        };
        assert!(matches!(q_significance(&net, 10, 4, 0), Err(Error::EmptyGraph)));
    }
}
