//! Louvain-style greedy modularity community detection.
//!
//! Digraphs are symmetrized with summed weights first. Vertices are visited
//! in a seeded shuffled order, so the result is deterministic given the seed;
//! ties in the gain break toward the smallest community id. The reported
//! modularity is recomputed from the final membership with the plain formula,
//! not taken from the incremental bookkeeping.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::Graph;
use crate::rng::stream_rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityAssignment {
    pub membership: BTreeMap<String, usize>,
    pub modularity: f64,
}

/// Weighted modularity of a membership under the given resolution:
/// `(1/2m) * sum_ij (A_ij - r * k_i k_j / 2m) delta(c_i, c_j)`, evaluated via
/// per-community totals.
pub fn modularity(graph: &Graph, membership: &BTreeMap<String, usize>, resolution: f64) -> f64 {
    let sym = graph.symmetrized();
    let n = sym.vertex_count();
    if n == 0 {
        return 0.0;
    }
    let comm: Vec<usize> = (0..n)
        .map(|u| *membership.get(sym.name(u)).expect("every vertex assigned"))
        .collect();
    let mut k = vec![0.0f64; n];
    let mut m2 = 0.0;
    for u in 0..n {
        for &(_, w) in sym.out_neighbors(u) {
            k[u] += w;
            m2 += w;
        }
    }
    if m2 == 0.0 {
        return 0.0;
    }
    let mut internal: BTreeMap<usize, f64> = BTreeMap::new(); // sum of intra edge weights, both directions
    let mut total: BTreeMap<usize, f64> = BTreeMap::new(); // sum of degrees
    for u in 0..n {
        *total.entry(comm[u]).or_insert(0.0) += k[u];
        for &(v, w) in sym.out_neighbors(u) {
            if comm[v] == comm[u] {
                *internal.entry(comm[u]).or_insert(0.0) += w;
            }
        }
    }
    let mut q = 0.0;
    for (c, tot) in &total {
        let int = internal.get(c).copied().unwrap_or(0.0);
        q += int / m2 - resolution * (tot / m2) * (tot / m2);
    }
    q
}

/// Greedy modularity optimization. Returns every vertex's community and the
/// independently recomputed modularity of the partition.
pub fn detect_communities(graph: &Graph, resolution: f64, seed: u64) -> CommunityAssignment {
    let sym = graph.symmetrized();
    let n = sym.vertex_count();
    if n == 0 {
        return CommunityAssignment {
            membership: BTreeMap::new(),
            modularity: 0.0,
        };
    }

    // Working copy at the current aggregation level.
    let mut adj: Vec<Vec<(usize, f64)>> = (0..n).map(|u| sym.out_neighbors(u).to_vec()).collect();
    // membership of original vertices in terms of current-level nodes
    let mut assignment: Vec<usize> = (0..n).collect();
    let mut rng = stream_rng(seed, 0);

    loop {
        let level_n = adj.len();
        let mut k = vec![0.0f64; level_n];
        let mut m2 = 0.0;
        for (u, nbrs) in adj.iter().enumerate() {
            for &(_, w) in nbrs {
                k[u] += w;
                m2 += w;
            }
        }
        if m2 == 0.0 {
            break;
        }

        let mut community: Vec<usize> = (0..level_n).collect();
        let mut comm_total = k.clone();

        let mut order: Vec<usize> = (0..level_n).collect();
        order.shuffle(&mut rng);

        let mut moved_any = false;
        loop {
            let mut moved = false;
            for &u in &order {
                let current = community[u];
                // Weights from u to each adjacent community.
                let mut to_comm: BTreeMap<usize, f64> = BTreeMap::new();
                for &(v, w) in &adj[u] {
                    if v != u {
                        *to_comm.entry(community[v]).or_insert(0.0) += w;
                    }
                }
                comm_total[current] -= k[u];
                let w_current = to_comm.get(&current).copied().unwrap_or(0.0);
                let gain_stay = w_current - resolution * k[u] * comm_total[current] / m2;
                // Best strictly-improving move; BTreeMap order makes the
                // smallest community id win ties.
                let mut best = (current, gain_stay);
                for (&c, &w_uc) in &to_comm {
                    if c == current {
                        continue;
                    }
                    let gain = w_uc - resolution * k[u] * comm_total[c] / m2;
                    if gain > best.1 + 1e-12 {
                        best = (c, gain);
                    }
                }
                comm_total[best.0] += k[u];
                if best.0 != current {
                    community[u] = best.0;
                    moved = true;
                    moved_any = true;
                }
            }
            if !moved {
                break;
            }
        }

        if !moved_any {
            break;
        }

        // Renumber communities densely (ascending by old id).
        let mut renumber: BTreeMap<usize, usize> = BTreeMap::new();
        for &c in community.iter() {
            let next = renumber.len();
            renumber.entry(c).or_insert(next);
        }
        let n_comm = renumber.len();
        for a in assignment.iter_mut() {
            *a = renumber[&community[*a]];
        }
        if n_comm == adj.len() {
            break;
        }

        // Aggregate the graph: communities become nodes. Internal weight is
        // kept as a self-loop so next-level degrees stay correct; it is
        // excluded from move gains (`v != u` below) but counts toward k.
        let mut agg: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); n_comm];
        for (u, nbrs) in adj.iter().enumerate() {
            let cu = renumber[&community[u]];
            for &(v, w) in nbrs {
                let cv = renumber[&community[v]];
                *agg[cu].entry(cv).or_insert(0.0) += w;
            }
        }
        adj = agg
            .into_iter()
            .map(|m| m.into_iter().collect())
            .collect();
    }

    // Final densely renumbered membership keyed by vertex name, community ids
    // ordered by smallest member index.
    let mut renumber: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in &assignment {
        let next = renumber.len();
        renumber.entry(c).or_insert(next);
    }
    let membership: BTreeMap<String, usize> = (0..n)
        .map(|u| (sym.name(u).to_string(), renumber[&assignment[u]]))
        .collect();
    let q = modularity(graph, &membership, resolution);
    CommunityAssignment {
        membership,
        modularity: q,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cliques() -> Graph {
        let mut b = Graph::builder(false);
        for group in 0..2 {
            for i in 0..5 {
                for j in (i + 1)..5 {
                    b.add_edge(&format!("g{group}v{i}"), &format!("g{group}v{j}"), 1.0);
                }
            }
        }
        b.add_edge("g0v0", "g1v0", 1.0); // bridge
        b.build()
    }

    #[test]
    fn single_clique_one_community() {
        let mut b = Graph::builder(false);
        for i in 0..5 {
            for j in (i + 1)..5 {
                b.add_edge(&format!("v{i}"), &format!("v{j}"), 1.0);
            }
        }
        let assignment = detect_communities(&b.build(), 1.0, 42);
        let ids: std::collections::HashSet<_> = assignment.membership.values().collect();
        assert_eq!(ids.len(), 1);
    }

    #[test]
    fn recovers_two_planted_cliques() {
        let g = two_cliques();
        let assignment = detect_communities(&g, 1.0, 7);
        let c0 = assignment.membership["g0v0"];
        let c1 = assignment.membership["g1v0"];
        assert_ne!(c0, c1);
        for i in 0..5 {
            assert_eq!(assignment.membership[&format!("g0v{i}")], c0);
            assert_eq!(assignment.membership[&format!("g1v{i}")], c1);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let g = two_cliques();
        let a = detect_communities(&g, 1.0, 99);
        let b = detect_communities(&g, 1.0, 99);
        assert_eq!(a, b);
    }

    #[test]
    fn reported_modularity_matches_direct_formula() {
        let g = two_cliques();
        let assignment = detect_communities(&g, 1.0, 3);
        // Direct O(n^2) evaluation over vertex pairs.
        let n = g.vertex_count();
        let mut a = vec![vec![0.0f64; n]; n];
        for (u, v, w) in g.edges() {
            a[u][v] = w;
            a[v][u] = w;
        }
        let k: Vec<f64> = (0..n).map(|u| a[u].iter().sum()).collect();
        let m2: f64 = k.iter().sum();
        let comm: Vec<usize> = (0..n).map(|u| assignment.membership[g.name(u)]).collect();
        let mut q = 0.0;
        for u in 0..n {
            for v in 0..n {
                if comm[u] == comm[v] {
                    q += a[u][v] - k[u] * k[v] / m2;
                }
            }
        }
        q /= m2;
        assert!(
            (q - assignment.modularity).abs() < 1e-12,
            "direct {q} vs reported {}",
            assignment.modularity
        );
    }

    #[test]
    fn beats_singleton_partition() {
        let g = two_cliques();
        let assignment = detect_communities(&g, 1.0, 11);
        let singleton: BTreeMap<String, usize> = g
            .names()
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        assert!(assignment.modularity >= modularity(&g, &singleton, 1.0));
    }

    #[test]
    fn digraph_is_symmetrized() {
        let mut b = Graph::builder(true);
        b.add_edge("a", "b", 2.0);
        b.add_edge("b", "a", 3.0);
        b.add_edge("c", "d", 1.0);
        let assignment = detect_communities(&b.build(), 1.0, 1);
        assert_eq!(
            assignment.membership["a"], assignment.membership["b"],
            "{assignment:?}"
        );
        assert_ne!(assignment.membership["a"], assignment.membership["c"]);
    }
}
