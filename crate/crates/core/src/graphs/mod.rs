//! Communication and hashtag networks.
//!
//! A single weighted [`Graph`] type backs the directed @-mention network and
//! the undirected hashtag co-occurrence network. Vertices are identified by
//! (case-folded) strings; adjacency is index-based internally.

mod export;
mod louvain;
mod metrics;

pub use export::{edge_list_csv, graphml};
pub use louvain::{detect_communities, modularity, CommunityAssignment};
pub use metrics::{
    average_degree, betweenness, betweenness_undirected, components, degree_sequence, density,
    DegreeMode,
};

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{looks_like_retweet, Corpus};
use crate::error::{Error, Result};

/// A simple weighted graph (no self-loops, one edge per vertex pair).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Graph {
    directed: bool,
    names: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, usize>,
    /// Outgoing adjacency, sorted by neighbor index. For undirected graphs
    /// each edge appears in both endpoint lists.
    out_adj: Vec<Vec<(usize, f64)>>,
    /// Incoming adjacency (directed graphs only).
    in_adj: Vec<Vec<(usize, f64)>>,
    edge_count: usize,
}

impl Graph {
    pub fn builder(directed: bool) -> GraphBuilder {
        GraphBuilder {
            directed,
            names: Vec::new(),
            index: HashMap::new(),
            weights: BTreeMap::new(),
        }
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn out_neighbors(&self, u: usize) -> &[(usize, f64)] {
        &self.out_adj[u]
    }

    pub fn in_neighbors(&self, u: usize) -> &[(usize, f64)] {
        if self.directed {
            &self.in_adj[u]
        } else {
            &self.out_adj[u]
        }
    }

    /// Neighbor indices ignoring direction, deduplicated.
    pub fn neighbors_any(&self, u: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.out_adj[u].iter().map(|&(v, _)| v).collect();
        if self.directed {
            out.extend(self.in_adj[u].iter().map(|&(v, _)| v));
            out.sort_unstable();
            out.dedup();
        }
        out
    }

    /// Every distinct edge once: `(src, dst, weight)` with `src <= dst` for
    /// undirected graphs.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 0..self.names.len() {
            for &(v, w) in &self.out_adj[u] {
                if !self.directed && v < u {
                    continue;
                }
                out.push((u, v, w));
            }
        }
        out
    }

    /// Restores the name index after deserialization.
    pub fn rebuild_index(&mut self) {
        self.index = self
            .names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
    }

    /// Undirected view with summed weights (identity for undirected graphs).
    pub fn symmetrized(&self) -> Graph {
        if !self.directed {
            return self.clone();
        }
        let mut b = Graph::builder(false);
        for name in &self.names {
            b.vertex(name);
        }
        for (u, v, w) in self.edges() {
            b.add_edge_idx(u, v, w);
        }
        b.build()
    }
}

pub struct GraphBuilder {
    directed: bool,
    names: Vec<String>,
    index: HashMap<String, usize>,
    weights: BTreeMap<(usize, usize), f64>,
}

impl GraphBuilder {
    /// Interns a vertex and returns its index.
    pub fn vertex(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    /// Adds weight to an edge; self-loops are dropped.
    pub fn add_edge(&mut self, a: &str, b: &str, w: f64) {
        let (ia, ib) = (self.vertex(a), self.vertex(b));
        self.add_edge_idx(ia, ib, w);
    }

    pub fn add_edge_idx(&mut self, a: usize, b: usize, w: f64) {
        if a == b {
            return;
        }
        let key = if self.directed || a <= b { (a, b) } else { (b, a) };
        *self.weights.entry(key).or_insert(0.0) += w;
    }

    pub fn build(self) -> Graph {
        let n = self.names.len();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); if self.directed { n } else { 0 }];
        let edge_count = self.weights.len();
        for (&(a, b), &w) in &self.weights {
            out_adj[a].push((b, w));
            if self.directed {
                in_adj[b].push((a, w));
            } else {
                out_adj[b].push((a, w));
            }
        }
        for adj in out_adj.iter_mut().chain(in_adj.iter_mut()) {
            adj.sort_unstable_by_key(|&(v, _)| v);
        }
        Graph {
            directed: self.directed,
            names: self.names,
            index: self.index,
            out_adj,
            in_adj,
            edge_count,
        }
    }
}

// ---------------------------------------------------------------------------
// Mention graph

/// Directed @-mention communication graph; edge weight is the number of
/// messages from the author to the mentioned user.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MentionGraph {
    pub graph: Graph,
}

#[derive(Debug, Clone, Copy)]
pub struct MentionOptions {
    /// Count mentions inside the leading `RT @user:` prefix (default true).
    pub include_retweet_prefix: bool,
}

impl Default for MentionOptions {
    fn default() -> Self {
        MentionOptions {
            include_retweet_prefix: true,
        }
    }
}

/// `@` followed by up to 15 letters/digits/underscores, terminated by any
/// other character. Case-folded.
pub fn extract_mentions(text: &str) -> Vec<String> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] != b'@' {
            i += 1;
            continue;
        }
        let start = i + 1;
        let mut end = start;
        while end < bytes.len()
            && end - start < 15
            && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_')
        {
            end += 1;
        }
        if end > start {
            out.push(text[start..end].to_lowercase());
        }
        i = end.max(i + 1);
    }
    out
}

pub fn build_mention_graph(corpus: &Corpus) -> MentionGraph {
    build_mention_graph_with(corpus, MentionOptions::default())
}

/// One weighted edge per (author, mentioned user) pair per message; multiple
/// mentions of the same user in one message count once. Self-mentions are
/// dropped; every author appears as a vertex even when isolated.
pub fn build_mention_graph_with(corpus: &Corpus, options: MentionOptions) -> MentionGraph {
    let mut b = Graph::builder(true);
    for r in &corpus.records {
        let author = r.author.to_lowercase();
        b.vertex(&author);
        let text: &str = if options.include_retweet_prefix {
            &r.text
        } else {
            strip_retweet_prefix(&r.text)
        };
        let mut seen = HashSet::new();
        for target in extract_mentions(text) {
            if target != author && seen.insert(target.clone()) {
                b.add_edge(&author, &target, 1.0);
            }
        }
    }
    MentionGraph { graph: b.build() }
}

fn strip_retweet_prefix(text: &str) -> &str {
    let mut t = text.trim_start();
    while looks_like_retweet(t) {
        match t.find(':') {
            Some(pos) => t = t[pos + 1..].trim_start(),
            None => return "",
        }
    }
    t
}

// ---------------------------------------------------------------------------
// Hashtag graph

/// Undirected hashtag co-occurrence graph; edge weight counts the messages
/// in which the unordered pair occurred together.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HashtagGraph {
    pub graph: Graph,
    /// Case-folded tag -> most frequent surface form (ties break
    /// lexicographically), kept for display.
    pub display: BTreeMap<String, String>,
}

pub fn build_hashtag_graph(corpus: &Corpus) -> HashtagGraph {
    let mut b = Graph::builder(false);
    let mut surface: HashMap<String, BTreeMap<String, u64>> = HashMap::new();
    for r in &corpus.records {
        let mut tags: Vec<String> = Vec::new();
        // Raw surface forms for the display map.
        let mut chars = r.text.chars().peekable();
        while let Some(c) = chars.next() {
            if c != '#' {
                continue;
            }
            let mut raw = String::new();
            while let Some(&n) = chars.peek() {
                if n.is_alphanumeric() || n == '_' {
                    raw.push(n);
                    chars.next();
                } else {
                    break;
                }
            }
            if !raw.is_empty() {
                let folded = format!("#{}", raw.to_lowercase());
                *surface
                    .entry(folded.clone())
                    .or_default()
                    .entry(format!("#{raw}"))
                    .or_insert(0) += 1;
                tags.push(folded);
            }
        }
        tags.sort_unstable();
        tags.dedup();
        for tag in &tags {
            b.vertex(tag);
        }
        for i in 0..tags.len() {
            for j in (i + 1)..tags.len() {
                b.add_edge(&tags[i], &tags[j], 1.0);
            }
        }
    }
    let display = surface
        .into_iter()
        .map(|(folded, forms)| {
            let best = forms
                .iter()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
                .map(|(f, _)| f.clone())
                .expect("non-empty");
            (folded, best)
        })
        .collect();
    HashtagGraph {
        graph: b.build(),
        display,
    }
}

// ---------------------------------------------------------------------------
// Hashtag categories and ego networks

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum HashtagCategory {
    Supporting,
    Against,
    General,
    ImportantTopics,
    Other,
}

impl HashtagCategory {
    pub const REPORTED: [HashtagCategory; 4] = [
        HashtagCategory::Supporting,
        HashtagCategory::Against,
        HashtagCategory::General,
        HashtagCategory::ImportantTopics,
    ];

    pub fn parse(s: &str) -> Result<HashtagCategory> {
        match s.trim().to_ascii_lowercase().as_str() {
            "supporting" => Ok(HashtagCategory::Supporting),
            "against" => Ok(HashtagCategory::Against),
            "general" => Ok(HashtagCategory::General),
            "importanttopics" | "important_topics" | "important topics" => {
                Ok(HashtagCategory::ImportantTopics)
            }
            "other" => Ok(HashtagCategory::Other),
            _ => Err(Error::config(format!("unknown hashtag category {s:?}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            HashtagCategory::Supporting => "Supporting",
            HashtagCategory::Against => "Against",
            HashtagCategory::General => "General",
            HashtagCategory::ImportantTopics => "ImportantTopics",
            HashtagCategory::Other => "Other",
        }
    }
}

/// Analyst-supplied category map CSV: `hashtag,category` (no header). The
/// tool never guesses categories.
pub fn load_category_map<R: std::io::Read>(reader: R) -> Result<BTreeMap<String, HashtagCategory>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(reader);
    let mut out = BTreeMap::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let tag = row
            .get(0)
            .filter(|t| t.starts_with('#'))
            .ok_or_else(|| Error::config(format!("category row {}: tag must start with '#'", i + 1)))?
            .to_lowercase();
        let cat = HashtagCategory::parse(row.get(1).unwrap_or(""))?;
        out.insert(tag, cat);
    }
    Ok(out)
}

/// The 1-step neighborhood of a focal vertex with induced edges.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EgoNetwork {
    pub ego: String,
    pub graph: Graph,
    /// Labels for vertices present in the category map.
    pub labels: BTreeMap<String, HashtagCategory>,
}

/// Extracts the ego network of `vertex`: the ego, its direct neighbors, and
/// all edges among them. When a category map is given, vertices found in it
/// are labeled.
pub fn ego_network(
    graph: &Graph,
    vertex: &str,
    categories: Option<&BTreeMap<String, HashtagCategory>>,
) -> Result<EgoNetwork> {
    let ego_idx = graph
        .index_of(vertex)
        .ok_or_else(|| Error::NotFound(format!("vertex {vertex:?}")))?;
    let mut members: HashSet<usize> = HashSet::new();
    members.insert(ego_idx);
    members.extend(graph.neighbors_any(ego_idx));
    Ok(induced(graph, vertex, &members, categories))
}

fn induced(
    graph: &Graph,
    ego: &str,
    members: &HashSet<usize>,
    categories: Option<&BTreeMap<String, HashtagCategory>>,
) -> EgoNetwork {
    let mut b = Graph::builder(graph.directed());
    let mut sorted: Vec<usize> = members.iter().copied().collect();
    sorted.sort_unstable();
    for &m in &sorted {
        b.vertex(graph.name(m));
    }
    for &u in &sorted {
        for &(v, w) in graph.out_neighbors(u) {
            if members.contains(&v) && (graph.directed() || u <= v) {
                b.add_edge(graph.name(u), graph.name(v), w);
            }
        }
    }
    let sub = b.build();
    let labels = categories
        .map(|map| {
            sub.names()
                .iter()
                .filter_map(|n| map.get(n).map(|&c| (n.clone(), c)))
                .collect()
        })
        .unwrap_or_default();
    EgoNetwork {
        ego: ego.to_string(),
        graph: sub,
        labels,
    }
}

impl EgoNetwork {
    /// Drops labeled vertices whose category is in `exclude` (the ego itself
    /// is always kept) and re-induces the edges.
    pub fn filtered(&self, parent: &Graph, exclude: &[HashtagCategory]) -> EgoNetwork {
        let keep: HashSet<usize> = self
            .graph
            .names()
            .iter()
            .filter(|n| {
                **n == self.ego
                    || !self
                        .labels
                        .get(*n)
                        .map(|c| exclude.contains(c))
                        .unwrap_or(false)
            })
            .filter_map(|n| parent.index_of(n))
            .collect();
        let mut net = induced(
            parent,
            &self.ego,
            &keep,
            if self.labels.is_empty() { None } else { Some(&self.labels) },
        );
        if net.labels.is_empty() && !self.labels.is_empty() {
            net.labels = self.labels.clone();
        }
        net
    }

    /// Relative category sizes in percent over the four reported categories
    /// (`Other` is excluded). Zero categories are reported, not omitted.
    pub fn category_shares(&self) -> Result<BTreeMap<HashtagCategory, f64>> {
        hashtag_category_shares(self)
    }
}

/// Percentage of labeled vertices per reported category; sums to 100 up to
/// rounding. Errors when no vertex carries a reported label.
pub fn hashtag_category_shares(ego: &EgoNetwork) -> Result<BTreeMap<HashtagCategory, f64>> {
    let mut counts: BTreeMap<HashtagCategory, u64> = BTreeMap::new();
    for cat in ego.labels.values() {
        if *cat != HashtagCategory::Other {
            *counts.entry(*cat).or_insert(0) += 1;
        }
    }
    let total: u64 = counts.values().sum();
    if total == 0 {
        return Err(Error::NotFound(
            "no vertices labeled with a reported category".into(),
        ));
    }
    Ok(HashtagCategory::REPORTED
        .iter()
        .map(|&c| {
            let n = counts.get(&c).copied().unwrap_or(0);
            (c, 100.0 * n as f64 / total as f64)
        })
        .collect())
}
