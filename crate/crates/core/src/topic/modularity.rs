use crate::error::{Error, Result};

use super::graph::WeightedGraph;

/// A graph together with a partition of its nodes.
///
/// Community labels are relabelled to `0..K` in order of first appearance.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularityContext {
    graph: WeightedGraph,
    degrees: Vec<f64>,
    total_weight: f64,
    assignment: Vec<usize>,
    n_communities: usize,
}

impl ModularityContext {
    pub fn new(graph: WeightedGraph, assignment: &[usize]) -> Result<Self> {
        if assignment.len() != graph.n_nodes() {
            return Err(Error::InvalidParameter(format!(
                "assignment covers {} nodes, graph has {}",
                assignment.len(),
                graph.n_nodes()
            )));
        }
        let total_weight = graph.total_weight();
        if total_weight <= 0.0 {
            return Err(Error::EmptyGraph);
        }
        let (assignment, n_communities) = relabel(assignment);
        Ok(Self {
            degrees: graph.degrees(),
            graph,
            total_weight,
            assignment,
            n_communities,
        })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn n_communities(&self) -> usize {
        self.n_communities
    }

    /// Members of each community, ascending.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_communities];
        for (i, &c) in self.assignment.iter().enumerate() {
            out[c].push(i);
        }
        out
    }
}

/// Q = (1/2m) Σ_ij [A_ij − k_i k_j / 2m] δ(c_i, c_j), evaluated per community
/// as Σ_c [ in_c / m − (tot_c / 2m)² ].
pub fn modularity(ctx: &ModularityContext) -> f64 {
    let g = &ctx.graph;
    let m = ctx.total_weight;
    let mut inside = vec![0.0; ctx.n_communities];
    let mut total = vec![0.0; ctx.n_communities];
    for i in 0..g.n_nodes() {
        let c = ctx.assignment[i];
        total[c] += ctx.degrees[i];
        inside[c] += g.self_loop(i);
        for &(j, w) in g.neighbors(i) {
            if i < j && ctx.assignment[j] == c {
                inside[c] += w;
            }
        }
    }
    inside
        .iter()
        .zip(&total)
        .map(|(&l, &d)| l / m - (d / (2.0 * m)).powi(2))
        .sum()
}

pub(crate) fn relabel(assignment: &[usize]) -> (Vec<usize>, usize) {
    let max = assignment.iter().copied().max().map_or(0, |x| x + 1);
    let mut map = vec![usize::MAX; max];
    let mut next = 0;
    let out = assignment
        .iter()
        .map(|&c| {
            if map[c] == usize::MAX {
                map[c] = next;
                next += 1;
            }
            map[c]
        })
        .collect();
    (out, next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    /// Literal double sum over a dense adjacency matrix.
    fn literal(n: usize, edges: &[(usize, usize)], c: &[usize]) -> f64 {
        let mut a = vec![vec![0.0; n]; n];
        for &(u, v) in edges {
            a[u][v] += 1.0;
            a[v][u] += 1.0;
        }
        let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
        let two_m: f64 = k.iter().sum();
        let mut q = 0.0;
        for i in 0..n {
            for j in 0..n {
                if c[i] == c[j] {
                    q += a[i][j] - k[i] * k[j] / two_m;
                }
            }
        }
        q / two_m
    }

    fn ctx(n: usize, edges: &[(usize, usize)], c: &[usize]) -> ModularityContext {
        let e: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
        ModularityContext::new(WeightedGraph::from_edges(n, &e), c).unwrap()
    }

    #[test]
    fn two_disjoint_edges() {
        assert_eq!(modularity(&ctx(4, &[(0, 1), (2, 3)], &[0, 0, 1, 1])), 0.5);
    }

    #[test]
    fn triangle_single_community_is_zero() {
        let q = modularity(&ctx(3, &[(0, 1), (1, 2), (0, 2)], &[0, 0, 0]));
        assert!(q.abs() < 1e-15);
    }

    #[test]
    fn singleton_partition_is_minus_sum_of_squared_degree_shares() {
        let edges = [(0, 1), (1, 2), (2, 3), (1, 3)];
        let q = modularity(&ctx(4, &edges, &[0, 1, 2, 3]));
        let k = [1.0, 3.0, 2.0, 2.0];
        let expected = -k.iter().map(|x: &f64| x * x).sum::<f64>() / 64.0;
        assert!((q - expected).abs() < 1e-15);
    }

    #[test]
    fn empty_graph_is_an_error() {
        let g = WeightedGraph::from_edges(3, &[]);
        assert!(matches!(ModularityContext::new(g, &[0, 1, 2]), Err(Error::EmptyGraph)));
    }

    #[test]
    fn labels_are_made_contiguous() {
        let c = ctx(4, &[(0, 1), (2, 3)], &[7, 7, 3, 3]);
        assert_eq!(c.assignment(), &[0, 0, 1, 1]);
        assert_eq!(c.n_communities(), 2);
        assert_eq!(c.communities(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn matches_literal_sum_on_random_graphs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.random_range(2..=30);
            let p = rng.random_range(0.05..0.6);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            if edges.is_empty() {
                edges.push((0, 1));
            }
            let k = rng.random_range(1..=n);
            let c: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
            let q = modularity(&ctx(n, &edges, &c));
            assert!((q - literal(n, &edges, &c)).abs() < 1e-12);
            assert!((-0.5..1.0).contains(&q));
        }
    }
}
