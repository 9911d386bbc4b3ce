//! DOT and GraphML writers for mention graphs and itemset-formation
//! graphs. Output order is deterministic (sorted vertices and edges).

use std::fmt::Write;

use crate::graph::{MentionGraph, Partition};
use crate::itemsets::ItemsetGraph;
use crate::layout::Layout;

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// DOT rendering with `weight` edge attributes and, when available,
/// `community` and `x`/`y` vertex attributes.
pub fn mention_graph_to_dot(
    g: &MentionGraph,
    partition: Option<&Partition>,
    layout: Option<&Layout>,
) -> String {
    let mut out = String::from("graph mentions {\n");
    for (handle, _) in g.vertices() {
        let mut attrs = Vec::new();
        if let Some(p) = partition {
            if let Some(c) = p.assignment.get(handle) {
                attrs.push(format!("community={c}"));
            }
        }
        if let Some(l) = layout {
            if let Some((x, y)) = l.positions.get(handle) {
                attrs.push(format!("x={x:.6}"));
                attrs.push(format!("y={y:.6}"));
            }
        }
        let attrs = if attrs.is_empty() {
            String::new()
        } else {
            format!(" [{}]", attrs.join(", "))
        };
        writeln!(out, "  \"{}\"{};", dot_escape(handle), attrs).unwrap();
    }
    for (a, b, w) in g.edges() {
        writeln!(
            out,
            "  \"{}\" -- \"{}\" [weight={w}];",
            dot_escape(a),
            dot_escape(b)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// GraphML rendering with the same attribute set as the DOT writer.
pub fn mention_graph_to_graphml(
    g: &MentionGraph,
    partition: Option<&Partition>,
    layout: Option<&Layout>,
) -> String {
    let mut out = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n\
         \x20 <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n",
    );
    if partition.is_some() {
        out.push_str(
            "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"long\"/>\n",
        );
    }
    if layout.is_some() {
        out.push_str("  <key id=\"x\" for=\"node\" attr.name=\"x\" attr.type=\"double\"/>\n");
        out.push_str("  <key id=\"y\" for=\"node\" attr.name=\"y\" attr.type=\"double\"/>\n");
    }
    out.push_str("  <graph id=\"mentions\" edgedefault=\"undirected\">\n");
    for (handle, _) in g.vertices() {
        let id = xml_escape(handle);
        let mut data = String::new();
        if let Some(p) = partition {
            if let Some(c) = p.assignment.get(handle) {
                write!(data, "<data key=\"community\">{c}</data>").unwrap();
            }
        }
        if let Some(l) = layout {
            if let Some((x, y)) = l.positions.get(handle) {
                write!(data, "<data key=\"x\">{x:.6}</data>").unwrap();
                write!(data, "<data key=\"y\">{y:.6}</data>").unwrap();
            }
        }
        if data.is_empty() {
            writeln!(out, "    <node id=\"{id}\"/>").unwrap();
        } else {
            writeln!(out, "    <node id=\"{id}\">{data}</node>").unwrap();
        }
    }
    for (idx, (a, b, w)) in g.edges().enumerate() {
        writeln!(
            out,
            "    <edge id=\"e{idx}\" source=\"{}\" target=\"{}\">\
             <data key=\"weight\">{w}</data></edge>",
            xml_escape(a),
            xml_escape(b)
        )
        .unwrap();
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

/// Bipartite itemset graph as DOT; itemset nodes carry their support.
pub fn itemset_graph_to_dot(g: &ItemsetGraph) -> String {
    let mut out = String::from("graph itemsets {\n");
    for (idx, (label, support)) in g.itemset_nodes.iter().enumerate() {
        writeln!(
            out,
            "  \"set{idx}\" [label=\"{}\", support={support:.9}, shape=box];",
            dot_escape(label)
        )
        .unwrap();
    }
    for item in &g.item_nodes {
        writeln!(out, "  \"{}\";", dot_escape(item)).unwrap();
    }
    for (idx, item) in &g.edges {
        writeln!(out, "  \"set{idx}\" -- \"{}\";", dot_escape(item)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Bipartite itemset graph as GraphML.
pub fn itemset_graph_to_graphml(g: &ItemsetGraph) -> String {
    let mut out = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n\
         \x20 <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n\
         \x20 <key id=\"support\" for=\"node\" attr.name=\"support\" attr.type=\"double\"/>\n\
         \x20 <graph id=\"itemsets\" edgedefault=\"undirected\">\n",
    );
    for (idx, (label, support)) in g.itemset_nodes.iter().enumerate() {
        writeln!(
            out,
            "    <node id=\"set{idx}\"><data key=\"label\">{}</data>\
             <data key=\"support\">{support:.9}</data></node>",
            xml_escape(label)
        )
        .unwrap();
    }
    for item in &g.item_nodes {
        writeln!(
            out,
            "    <node id=\"item_{0}\"><data key=\"label\">{0}</data></node>",
            xml_escape(item)
        )
        .unwrap();
    }
    for (eidx, (idx, item)) in g.edges.iter().enumerate() {
        writeln!(
            out,
            "    <edge id=\"e{eidx}\" source=\"set{idx}\" target=\"item_{}\"/>",
            xml_escape(item)
        )
        .unwrap();
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}
