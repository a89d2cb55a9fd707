use std::collections::BTreeMap;

/// Undirected weighted graph with optional self-loops.
///
/// Each non-loop edge appears in both endpoint adjacency lists. A self-loop
/// of weight `w` contributes `2w` to its node's degree.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    adjacency: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
    total_weight: f64,
}

impl WeightedGraph {
    /// Parallel edges are merged by summing their weights.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Self {
        let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        let mut self_loops = vec![0.0; n];
        for &(u, v, w) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} nodes");
            if u == v {
                self_loops[u] += w;
            } else {
                *merged.entry((u.min(v), u.max(v))).or_insert(0.0) += w;
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut total_weight: f64 = self_loops.iter().sum();
        for (&(u, v), &w) in &merged {
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
            total_weight += w;
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(j, _)| j);
        }
        Self {
            adjacency,
            self_loops,
            total_weight,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adjacency[i]
    }

    pub fn self_loop(&self, i: usize) -> f64 {
        self.self_loops[i]
    }

    /// m: sum of edge weights, each edge counted once.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn degree(&self, i: usize) -> f64 {
        self.adjacency[i].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self.self_loops[i]
    }

    pub fn degrees(&self) -> Vec<f64> {
        (0..self.n_nodes()).map(|i| self.degree(i)).collect()
    }

    /// Collapse each community of `partition` (labels `0..k`) into one node.
    /// Internal edges become self-loops.
    pub(crate) fn aggregate(&self, partition: &[usize], k: usize) -> WeightedGraph {
        let mut edges = Vec::new();
        for i in 0..self.n_nodes() {
            if self.self_loops[i] != 0.0 {
                edges.push((partition[i], partition[i], self.self_loops[i]));
            }
            for &(j, w) in &self.adjacency[i] {
                if i < j {
                    edges.push((partition[i], partition[j], w));
                }
            }
        }
        WeightedGraph::from_edges(k, &edges)
    }
}
