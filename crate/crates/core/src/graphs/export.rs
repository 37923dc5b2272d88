//! Deterministic graph exports: edge-list CSV and GraphML.

use std::collections::BTreeMap;

use super::{Graph, HashtagCategory};

/// `src,dst,weight,directed` rows sorted by (src, dst) names.
pub fn edge_list_csv(graph: &Graph) -> String {
    let mut rows: Vec<(String, String, f64)> = graph
        .edges()
        .into_iter()
        .map(|(u, v, w)| (graph.name(u).to_string(), graph.name(v).to_string(), w))
        .collect();
    rows.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    let mut out = String::from("src,dst,weight,directed\n");
    let flag = if graph.directed() { "true" } else { "false" };
    for (src, dst, w) in rows {
        out.push_str(&format!("{},{},{},{}\n", csv_field(&src), csv_field(&dst), w, flag));
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// GraphML with optional per-vertex category and community attributes.
/// Vertices and edges are emitted in sorted order so output is byte-stable.
pub fn graphml(
    graph: &Graph,
    categories: Option<&BTreeMap<String, HashtagCategory>>,
    communities: Option<&BTreeMap<String, usize>>,
) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    out.push_str("  <key id=\"w\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n");
    if categories.is_some() {
        out.push_str(
            "  <key id=\"cat\" for=\"node\" attr.name=\"category\" attr.type=\"string\"/>\n",
        );
    }
    if communities.is_some() {
        out.push_str(
            "  <key id=\"com\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n",
        );
    }
    out.push_str(&format!(
        "  <graph edgedefault=\"{}\">\n",
        if graph.directed() { "directed" } else { "undirected" }
    ));

    let mut names: Vec<&String> = graph.names().iter().collect();
    names.sort();
    for name in &names {
        let cat = categories.and_then(|m| m.get(*name));
        let com = communities.and_then(|m| m.get(*name));
        if cat.is_none() && com.is_none() {
            out.push_str(&format!("    <node id=\"{}\"/>\n", xml_escape(name)));
        } else {
            out.push_str(&format!("    <node id=\"{}\">\n", xml_escape(name)));
            if let Some(c) = cat {
                out.push_str(&format!("      <data key=\"cat\">{}</data>\n", c.name()));
            }
            if let Some(c) = com {
                out.push_str(&format!("      <data key=\"com\">{c}</data>\n"));
            }
            out.push_str("    </node>\n");
        }
    }

    let mut edges: Vec<(String, String, f64)> = graph
        .edges()
        .into_iter()
        .map(|(u, v, w)| (graph.name(u).to_string(), graph.name(v).to_string(), w))
        .collect();
    edges.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    for (src, dst, w) in edges {
        out.push_str(&format!(
            "    <edge source=\"{}\" target=\"{}\"><data key=\"w\">{w}</data></edge>\n",
            xml_escape(&src),
            xml_escape(&dst)
        ));
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_is_sorted_and_flagged() {
        let mut b = Graph::builder(true);
        b.add_edge("b", "a", 2.0);
        b.add_edge("a", "b", 1.0);
        let csv = edge_list_csv(&b.build());
        assert_eq!(csv, "src,dst,weight,directed\na,b,1,true\nb,a,2,true\n");
    }

    #[test]
    fn graphml_carries_attributes() {
        let mut b = Graph::builder(false);
        b.add_edge("#x", "#y", 3.0);
        let g = b.build();
        let mut cats = BTreeMap::new();
        cats.insert("#x".to_string(), HashtagCategory::Supporting);
        let mut coms = BTreeMap::new();
        coms.insert("#y".to_string(), 1usize);
        let xml = graphml(&g, Some(&cats), Some(&coms));
        assert!(xml.contains("<data key=\"cat\">Supporting</data>"));
        assert!(xml.contains("<data key=\"com\">1</data>"));
        assert!(xml.contains("edgedefault=\"undirected\""));
        // Deterministic.
        assert_eq!(xml, graphml(&g, Some(&cats), Some(&coms)));
    }
}
