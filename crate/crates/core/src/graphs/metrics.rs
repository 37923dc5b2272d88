//! Graph metrics: density, degrees, components, betweenness centrality.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// Edge density: `2m / n(n-1)` undirected, `m / n(n-1)` directed, counting
/// distinct edges.
pub fn density(graph: &Graph) -> Result<f64> {
    let n = graph.vertex_count() as f64;
    if n < 2.0 {
        return Err(Error::parameter(
            "density undefined for graphs with fewer than 2 vertices",
        ));
    }
    let m = graph.edge_count() as f64;
    let pairs = n * (n - 1.0);
    Ok(if graph.directed() { m / pairs } else { 2.0 * m / pairs })
}

/// Mean vertex degree: `2m/n` undirected; `m/n` directed (mean in-degree =
/// mean out-degree).
pub fn average_degree(graph: &Graph) -> Result<f64> {
    let n = graph.vertex_count() as f64;
    if n < 1.0 {
        return Err(Error::parameter("average degree undefined for empty graph"));
    }
    let m = graph.edge_count() as f64;
    Ok(if graph.directed() { m / n } else { 2.0 * m / n })
}

/// Weakly connected component sizes, descending. Sizes sum to |V|.
pub fn components(graph: &Graph) -> Vec<usize> {
    let n = graph.vertex_count();
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut size = 0;
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for v in graph.neighbors_any(u) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        sizes.push(size);
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeMode {
    In,
    Out,
    Total,
}

/// Exact degree (distinct neighbors) per vertex, including zero-degree
/// vertices. `Total` applies to undirected graphs, `In`/`Out` to digraphs.
pub fn degree_sequence(graph: &Graph, mode: DegreeMode) -> Result<Vec<(String, u64)>> {
    match (graph.directed(), mode) {
        (true, DegreeMode::Total) => {
            return Err(Error::parameter(
                "total degree is for undirected graphs; use in or out",
            ))
        }
        (false, DegreeMode::In) | (false, DegreeMode::Out) => {
            return Err(Error::parameter(
                "in/out degrees are for directed graphs; use total",
            ))
        }
        _ => {}
    }
    Ok((0..graph.vertex_count())
        .map(|u| {
            let d = match mode {
                DegreeMode::In => graph.in_neighbors(u).len(),
                DegreeMode::Out | DegreeMode::Total => graph.out_neighbors(u).len(),
            };
            (graph.name(u).to_string(), d as u64)
        })
        .collect())
}

/// Brandes betweenness centrality over unweighted shortest paths. Directed
/// graphs accumulate over ordered pairs (raw scores); undirected graphs halve
/// the accumulation so each unordered pair counts once.
pub fn betweenness(graph: &Graph) -> BTreeMap<String, f64> {
    let scores = brandes(graph.vertex_count(), |u| {
        graph.out_neighbors(u).iter().map(|&(v, _)| v).collect()
    });
    let halve = !graph.directed();
    graph
        .names()
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), if halve { scores[i] / 2.0 } else { scores[i] }))
        .collect()
}

/// Betweenness of the symmetrized graph (for digraphs where undirected
/// shortest paths are wanted).
pub fn betweenness_undirected(graph: &Graph) -> BTreeMap<String, f64> {
    let scores = brandes(graph.vertex_count(), |u| graph.neighbors_any(u));
    graph
        .names()
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), scores[i] / 2.0))
        .collect()
}

fn brandes<F: Fn(usize) -> Vec<usize>>(n: usize, neighbors: F) -> Vec<f64> {
    let mut centrality = vec![0.0; n];
    let mut stack: Vec<usize> = Vec::with_capacity(n);
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    let mut delta = vec![0.0f64; n];
    let mut queue = VecDeque::new();

    for s in 0..n {
        stack.clear();
        for v in 0..n {
            pred[v].clear();
            sigma[v] = 0.0;
            dist[v] = -1;
            delta[v] = 0.0;
        }
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            stack.push(u);
            for v in neighbors(u) {
                if dist[v] < 0 {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
                if dist[v] == dist[u] + 1 {
                    sigma[v] += sigma[u];
                    pred[v].push(u);
                }
            }
        }
        while let Some(w) = stack.pop() {
            for &v in &pred[w] {
                delta[v] += (sigma[v] / sigma[w]) * (1.0 + delta[w]);
            }
            if w != s {
                centrality[w] += delta[w];
            }
        }
    }
    centrality
}
