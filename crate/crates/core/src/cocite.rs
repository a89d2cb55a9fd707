//! Per-scientist co-citing networks.
//!
//! Nodes are one scientist's papers in chronological order; two papers are
//! linked when their reference lists intersect, with the intersection size as
//! edge weight. Construction goes through a reference -> papers inverted
//! index, so cost follows the number of linked pairs rather than n².

use std::collections::HashMap;
use std::io::Write;

use crate::error::{Error, Result};
use crate::ingest::Corpus;
use crate::topic::WeightedGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoCitingNetwork {
    pub owner: String,
    /// Corpus indices of the owner's papers, ordered by (year, paper_id).
    pub papers: Vec<usize>,
    pub paper_ids: Vec<String>,
    pub years: Vec<i32>,
    /// Whether each paper has a non-empty reference list.
    pub has_references: Vec<bool>,
    /// `(u, v, weight)` with `u < v`, sorted.
    pub edges: Vec<(u32, u32, u32)>,
    adjacency: Vec<Vec<(u32, u32)>>,
}

impl CoCitingNetwork {
    pub fn n_nodes(&self) -> usize {
        self.papers.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// `(neighbor, weight)` pairs of node `i`, sorted by neighbor.
    pub fn neighbors(&self, i: usize) -> &[(u32, u32)] {
        &self.adjacency[i]
    }

    /// Graph view for community detection. With `weighted == false` every
    /// edge counts once regardless of how many references the pair shares.
    pub fn to_graph(&self, weighted: bool) -> WeightedGraph {
        let edges: Vec<(usize, usize, f64)> = self
            .edges
            .iter()
            .map(|&(u, v, w)| (u as usize, v as usize, if weighted { w as f64 } else { 1.0 }))
            .collect();
        WeightedGraph::from_edges(self.n_nodes(), &edges)
    }

    /// `paper_u,paper_v,weight` edge list.
    pub fn write_edge_list<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["paper_u", "paper_v", "weight"])?;
        for &(u, v, weight) in &self.edges {
            w.write_record([
                self.paper_ids[u as usize].as_str(),
                self.paper_ids[v as usize].as_str(),
                &weight.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn build_cociting(corpus: &Corpus, author: &str) -> Result<CoCitingNetwork> {
    let papers = corpus
        .author_papers(author)
        .ok_or_else(|| Error::UnknownAuthor(author.to_string()))?
        .to_vec();
    Ok(build_from_papers(corpus, author, papers))
}

pub(crate) fn build_from_papers(corpus: &Corpus, owner: &str, papers: Vec<usize>) -> CoCitingNetwork {
    let n = papers.len();
    let mut index: HashMap<&str, Vec<u32>> = HashMap::new();
    for (local, &p) in papers.iter().enumerate() {
        for r in &corpus.paper(p).reference_ids {
            index.entry(r.as_str()).or_default().push(local as u32);
        }
    }

    let mut counts = vec![0u32; n];
    let mut touched: Vec<u32> = Vec::new();
    let mut edges = Vec::new();
    for (u, &p) in papers.iter().enumerate() {
        for r in &corpus.paper(p).reference_ids {
            let holders = &index[r.as_str()];
            // holders is ascending; only look at later nodes
            let start = holders.partition_point(|&v| v as usize <= u);
            for &v in &holders[start..] {
                if counts[v as usize] == 0 {
                    touched.push(v);
                }
                counts[v as usize] += 1;
            }
        }
        touched.sort_unstable();
        for &v in &touched {
            edges.push((u as u32, v, counts[v as usize]));
            counts[v as usize] = 0;
        }
        touched.clear();
    }

    let mut adjacency = vec![Vec::new(); n];
    for &(u, v, w) in &edges {
        adjacency[u as usize].push((v, w));
        adjacency[v as usize].push((u, w));
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }

    CoCitingNetwork {
        owner: owner.to_string(),
        paper_ids: papers.iter().map(|&p| corpus.paper(p).paper_id.clone()).collect(),
        years: papers.iter().map(|&p| corpus.paper(p).year).collect(),
        has_references: papers
            .iter()
            .map(|&p| !corpus.paper(p).reference_ids.is_empty())
            .collect(),
        papers,
        edges,
        adjacency,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::PaperRecord;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn corpus_of(refs: &[&[&str]]) -> Corpus {
        Corpus::from_records(
            refs.iter()
                .enumerate()
                .map(|(i, r)| PaperRecord {
                    paper_id: format!("p{i:03}"),
                    year: 2000 + i as i32,
                    author_ids: vec!["f".into()],
                    reference_ids: r.iter().map(|s| s.to_string()).collect(),
                    c10: 0,
                })
                .collect(),
        )
        .unwrap()
    }

    /// O(n²) pairwise-intersection oracle.
    fn brute_force(corpus: &Corpus, author: &str) -> Vec<(u32, u32, u32)> {
        let papers = corpus.author_papers(author).unwrap();
        let sets: Vec<BTreeSet<&String>> = papers
            .iter()
            .map(|&p| corpus.paper(p).reference_ids.iter().collect())
            .collect();
        let mut edges = Vec::new();
        for u in 0..sets.len() {
            for v in u + 1..sets.len() {
                let shared = sets[u].intersection(&sets[v]).count() as u32;
                if shared > 0 {
                    edges.push((u as u32, v as u32, shared));
                }
            }
        }
        edges
    }

    #[test]
    fn shared_reference_links() {
        let c = corpus_of(&[&["r1", "r2"], &["r2", "r3"], &["r4"]]);
        let net = build_cociting(&c, "f").unwrap();
        assert_eq!(net.edges, [(0, 1, 1)]);
        assert!(net.neighbors(2).is_empty());
        assert_eq!(net.n_nodes(), 3);
    }

    #[test]
    fn common_reference_gives_complete_graph() {
        let c = corpus_of(&[&["r"], &["r", "x"], &["r"], &["r", "x"]]);
        let net = build_cociting(&c, "f").unwrap();
        assert_eq!(net.n_edges(), 6);
        assert!(net.edges.contains(&(1, 3, 2)));
    }

    #[test]
    fn reference_less_papers_are_isolated() {
        let c = corpus_of(&[&[], &["a"], &["a"]]);
        let net = build_cociting(&c, "f").unwrap();
        assert_eq!(net.has_references, [false, true, true]);
        assert!(net.neighbors(0).is_empty());
    }

    #[test]
    fn unknown_author() {
        let c = corpus_of(&[&["a"]]);
        assert!(matches!(build_cociting(&c, "nobody"), Err(Error::UnknownAuthor(_))));
    }

    #[test]
    fn edge_list_export() {
        let c = corpus_of(&[&["r1", "r2"], &["r1", "r2"]]);
        let mut buf = Vec::new();
        build_cociting(&c, "f").unwrap().write_edge_list(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "paper_u,paper_v,weight\np000,p001,2\n");
    }

    proptest! {
        #[test]
        fn inverted_index_matches_pairwise_oracle(
            refs in prop::collection::vec(prop::collection::btree_set(0u8..40, 0..6), 1..120)
        ) {
            let owned: Vec<Vec<String>> = refs.iter().map(|s| s.iter().map(|r| format!("r{r}")).collect()).collect();
            let borrowed: Vec<Vec<&str>> = owned.iter().map(|v| v.iter().map(String::as_str).collect()).collect();
            let slices: Vec<&[&str]> = borrowed.iter().map(Vec::as_slice).collect();
            let c = corpus_of(&slices);
            let net = build_cociting(&c, "f").unwrap();
            prop_assert_eq!(&net.edges, &brute_force(&c, "f"));
            for &(u, v, w) in &net.edges {
                prop_assert!(w > 0 && u < v);
                prop_assert!(net.neighbors(v as usize).contains(&(u, w)));
            }
        }
    }
}
