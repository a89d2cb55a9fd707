//! Multi-level modularity maximization (fast unfolding).
//!
//! Each level repeatedly moves single nodes to the neighboring community with
//! the largest modularity gain until a full pass makes no move, then collapses
//! communities into nodes and starts again. When no level improves, the
//! projected partition is polished with single-node moves on the original
//! graph; if that polish moves anything the levels run again. The returned
//! partition therefore admits no single-node move that raises Q.
//!
//! Visit order is shuffled with the supplied seed. Equal gains go to the
//! lowest community id, and a node only leaves its community for a strictly
//! better gain.

use rand::seq::SliceRandom;

use crate::cocite::CoCitingNetwork;
use crate::error::{Error, Result};
use crate::seed::{rng_from_seed, Rng};

use super::graph::WeightedGraph;
use super::modularity::{relabel, ModularityContext};

/// Smallest modularity change that counts as an improvement.
const MIN_GAIN: f64 = 1e-12;

pub fn detect_communities(net: &CoCitingNetwork, weighted: bool, seed: u64) -> Result<ModularityContext> {
    let graph = net.to_graph(weighted);
    let assignment = louvain(&graph, seed)?;
    ModularityContext::new(graph, &assignment)
}

/// Community label per node, contiguous from 0.
pub fn louvain(graph: &WeightedGraph, seed: u64) -> Result<Vec<usize>> {
    if graph.total_weight() <= 0.0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = rng_from_seed(seed);
    let n = graph.n_nodes();
    let mut membership: Vec<usize> = (0..n).collect();
    let mut n_communities = n;

    loop {
        let mut level = graph.aggregate(&membership, n_communities);
        loop {
            let singletons: Vec<usize> = (0..level.n_nodes()).collect();
            let (part, moved) = local_moving(&level, singletons, &mut rng);
            if !moved {
                break;
            }
            let (part, k) = relabel(&part);
            for c in membership.iter_mut() {
                *c = part[*c];
            }
            if k == level.n_nodes() {
                break;
            }
            level = level.aggregate(&part, k);
        }

        let (part, moved) = local_moving(graph, membership, &mut rng);
        let (part, k) = relabel(&part);
        membership = part;
        n_communities = k;
        if !moved {
            return Ok(membership);
        }
    }
}

/// Single-node moves from `init` until a full pass changes nothing.
/// Labels in `init` must be below the node count.
fn local_moving(graph: &WeightedGraph, init: Vec<usize>, rng: &mut Rng) -> (Vec<usize>, bool) {
    let n = graph.n_nodes();
    let m = graph.total_weight();
    let two_m = 2.0 * m;
    let eps = MIN_GAIN * m;
    let degree = graph.degrees();

    let mut comm = init;
    let mut total = vec![0.0; n];
    let mut size = vec![0usize; n];
    for i in 0..n {
        total[comm[i]] += degree[i];
        size[comm[i]] += 1;
    }
    let mut empty: Vec<usize> = (0..n).rev().filter(|&c| size[c] == 0).collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut link = vec![0.0; n];
    let mut seen = vec![false; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut moved_any = false;

    loop {
        let mut moved = false;
        for &i in &order {
            let own = comm[i];
            for &(j, w) in graph.neighbors(i) {
                let c = comm[j];
                if !seen[c] {
                    seen[c] = true;
                    touched.push(c);
                }
                link[c] += w;
            }
            total[own] -= degree[i];
            size[own] -= 1;

            let gain = |c: usize| link[c] - total[c] * degree[i] / two_m;
            let stay = gain(own);

            touched.sort_unstable();
            let mut best: Option<(usize, f64)> = None;
            for &c in &touched {
                if c == own {
                    continue;
                }
                let g = gain(c);
                if best.is_none_or(|(_, b)| g > b + eps) {
                    best = Some((c, g));
                }
            }

            let mut target = own;
            let mut target_gain = stay;
            if let Some((c, g)) = best {
                if g > stay + eps {
                    target = c;
                    target_gain = g;
                }
            }
            // leaving for an empty community has gain 0
            if size[own] > 0 && target_gain < -eps {
                target = *empty.last().expect("a non-singleton community leaves a free label");
            }

            total[target] += degree[i];
            size[target] += 1;
            if target != own {
                comm[i] = target;
                moved = true;
                if empty.last() == Some(&target) {
                    empty.pop();
                }
                if size[own] == 0 {
                    empty.push(own);
                }
            }

            for &c in &touched {
                link[c] = 0.0;
                seen[c] = false;
            }
            touched.clear();
        }
        if !moved {
            break;
        }
        moved_any = true;
    }
    (comm, moved_any)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topic::modularity;
    use rand::{Rng as _, SeedableRng};

    fn graph(n: usize, edges: &[(usize, usize)]) -> WeightedGraph {
        let e: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
        WeightedGraph::from_edges(n, &e)
    }

    fn q(g: &WeightedGraph, c: &[usize]) -> f64 {
        modularity(&ModularityContext::new(g.clone(), c).unwrap())
    }

    fn two_cliques() -> WeightedGraph {
        let mut edges = Vec::new();
        for base in [0, 5] {
            for u in 0..5 {
                for v in u + 1..5 {
                    edges.push((base + u, base + v));
                }
            }
        }
        edges.push((4, 5));
        graph(10, &edges)
    }

    #[test]
    fn bridged_cliques_split_in_two() {
        let g = two_cliques();
        for seed in 0..20 {
            let c = louvain(&g, seed).unwrap();
            assert_eq!(c[..5], [c[0]; 5]);
            assert_eq!(c[5..], [c[5]; 5]);
            assert_ne!(c[0], c[5]);
        }
        // every alternative split into two contiguous blocks or one/three groups scores lower
        let best = q(&g, &louvain(&g, 1).unwrap());
        assert!(best > q(&g, &[0; 10]));
        for cut in 1..10 {
            let alt: Vec<usize> = (0..10).map(|i| usize::from(i >= cut)).collect();
            assert!(best >= q(&g, &alt) - 1e-15);
            for cut2 in cut + 1..10 {
                let alt3: Vec<usize> = (0..10)
                    .map(|i| usize::from(i >= cut) + usize::from(i >= cut2))
                    .collect();
                assert!(best >= q(&g, &alt3) - 1e-15);
            }
        }
    }

    #[test]
    fn complete_graph_is_one_community() {
        let mut edges = Vec::new();
        for u in 0..6 {
            for v in u + 1..6 {
                edges.push((u, v));
            }
        }
        let c = louvain(&graph(6, &edges), 3).unwrap();
        assert_eq!(c, vec![0; 6]);
    }

    #[test]
    fn edgeless_graph_is_an_error() {
        assert!(matches!(louvain(&graph(4, &[]), 0), Err(Error::EmptyGraph)));
    }

    #[test]
    fn same_seed_same_partition() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut edges = Vec::new();
        for u in 0..40 {
            for v in u + 1..40 {
                if rng.random_bool(0.12) {
                    edges.push((u, v));
                }
            }
        }
        let g = graph(40, &edges);
        assert_eq!(louvain(&g, 9).unwrap(), louvain(&g, 9).unwrap());
    }

    #[test]
    fn isolated_nodes_stay_alone() {
        let g = graph(5, &[(0, 1), (1, 2), (0, 2)]);
        let c = louvain(&g, 0).unwrap();
        assert_eq!(&c[..3], &[0, 0, 0]);
        assert!(c[3] != c[0] && c[4] != c[0] && c[3] != c[4]);
    }
}
