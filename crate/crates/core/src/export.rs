//! Graph and partition serialization: GraphML, DOT, JSON, CSV.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::communities::{community_graph_export, Partition};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// DOT fill colors for books 1 to 7; later books wrap around.
pub const BOOK_PALETTE: [&str; 7] = [
    "blue", "green", "orange", "yellow", "pink", "darkblue", "grey",
];

/// Palette entry for a book id such as `book:3`, `white` for anything else.
pub fn book_color(book: &str) -> &'static str {
    book.strip_prefix("book:")
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .map_or("white", |n| BOOK_PALETTE[(n - 1) % BOOK_PALETTE.len()])
}

/// Formats like C's `%g`: six significant digits, trailing zeros trimmed,
/// exponent form below 1e-4 or from 1e6 on.
pub fn sig6(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Quotes an identifier for DOT.
pub fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    GraphMl,
    Dot,
    Json,
    Csv,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<ExportFormat> {
        match s.to_ascii_lowercase().as_str() {
            "graphml" => Ok(ExportFormat::GraphMl),
            "dot" => Ok(ExportFormat::Dot),
            "json" => Ok(ExportFormat::Json),
            "csv" => Ok(ExportFormat::Csv),
            _ => Err(Error::Usage(format!(
                "unknown export format `{s}` (expected graphml, dot, json or csv)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexRecord {
    pub id: String,
    pub kind: String,
    pub book: String,
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeRecord {
    pub source: String,
    pub target: String,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphDocument {
    pub nodes: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
}

impl GraphDocument {
    /// Kind and book come from `corpus` when given, and are empty otherwise.
    pub fn new(graph: &Graph, corpus: Option<&Corpus>) -> Result<GraphDocument> {
        let nodes = (0..graph.n())
            .map(|v| {
                let id = graph.label(v);
                let (kind, book) = match corpus {
                    Some(c) => {
                        let node = c.get(id).ok_or_else(|| Error::UnknownNode(id.into()))?;
                        (
                            node.kind.to_string(),
                            c.book_of(id)?.unwrap_or_default().to_string(),
                        )
                    }
                    None => (String::new(), String::new()),
                };
                Ok(VertexRecord {
                    id: id.to_string(),
                    kind,
                    book,
                    degree: graph.degree(v),
                })
            })
            .collect::<Result<_>>()?;
        let edges = graph
            .edges()
            .map(|(u, v, multiplicity)| EdgeRecord {
                source: graph.label(u).to_string(),
                target: graph.label(v).to_string(),
                multiplicity,
            })
            .collect();
        Ok(GraphDocument { nodes, edges })
    }
}

pub fn export_graph(
    graph: &Graph,
    corpus: Option<&Corpus>,
    format: ExportFormat,
) -> Result<String> {
    let doc = GraphDocument::new(graph, corpus)?;
    match format {
        ExportFormat::GraphMl => Ok(graphml(&doc)),
        ExportFormat::Dot => Ok(dot(&doc)),
        ExportFormat::Json => Ok(serde_json::to_string_pretty(&doc)? + "\n"),
        ExportFormat::Csv => {
            let mut w = csv_writer();
            for e in &doc.edges {
                w.serialize(e)?;
            }
            finish_csv(w)
        }
    }
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Consistency(e.to_string()))
}

fn graphml(doc: &GraphDocument) -> String {
    let mut out = String::from(concat!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n",
        "  <key id=\"kind\" for=\"node\" attr.name=\"kind\" attr.type=\"string\"/>\n",
        "  <key id=\"book\" for=\"node\" attr.name=\"book\" attr.type=\"string\"/>\n",
        "  <key id=\"degree\" for=\"node\" attr.name=\"degree\" attr.type=\"int\"/>\n",
        "  <key id=\"multiplicity\" for=\"edge\" attr.name=\"multiplicity\" attr.type=\"int\"/>\n",
        "  <graph id=\"G\" edgedefault=\"undirected\">\n",
    ));
    for n in &doc.nodes {
        let _ = writeln!(
            out,
            "    <node id=\"{}\"><data key=\"kind\">{}</data><data key=\"book\">{}</data><data key=\"degree\">{}</data></node>",
            xml_escape(&n.id),
            xml_escape(&n.kind),
            xml_escape(&n.book),
            n.degree
        );
    }
    for e in &doc.edges {
        let _ = writeln!(
            out,
            "    <edge source=\"{}\" target=\"{}\"><data key=\"multiplicity\">{}</data></edge>",
            xml_escape(&e.source),
            xml_escape(&e.target),
            e.multiplicity
        );
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

fn dot(doc: &GraphDocument) -> String {
    let mut out = String::from("graph citations {\n  node [style=filled];\n");
    for n in &doc.nodes {
        let _ = writeln!(
            out,
            "  {} [kind={}, book={}, degree={}, fillcolor={}];",
            dot_quote(&n.id),
            dot_quote(&n.kind),
            dot_quote(&n.book),
            n.degree,
            book_color(&n.book)
        );
    }
    for e in &doc.edges {
        let _ = writeln!(
            out,
            "  {} -- {} [multiplicity={}];",
            dot_quote(&e.source),
            dot_quote(&e.target),
            e.multiplicity
        );
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct AssignmentRow<'a> {
    vertex: &'a str,
    community: usize,
}

/// JSON is the full partition, DOT the community graph, GraphML the
/// community graph with sizes and weights, CSV the vertex assignment.
pub fn export_partition(partition: &Partition, format: ExportFormat) -> Result<String> {
    match format {
        ExportFormat::Json => Ok(serde_json::to_string_pretty(partition)? + "\n"),
        ExportFormat::Dot => Ok(community_graph_export(partition)),
        ExportFormat::Csv => {
            let mut w = csv_writer();
            for (vertex, &community) in &partition.assignment {
                w.serialize(AssignmentRow { vertex, community })?;
            }
            finish_csv(w)
        }
        ExportFormat::GraphMl => {
            let mut out = String::from(concat!(
                "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
                "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n",
                "  <key id=\"size\" for=\"node\" attr.name=\"size\" attr.type=\"int\"/>\n",
                "  <key id=\"central\" for=\"node\" attr.name=\"central\" attr.type=\"boolean\"/>\n",
                "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"int\"/>\n",
                "  <graph id=\"communities\" edgedefault=\"undirected\">\n",
            ));
            for c in &partition.communities {
                let _ = writeln!(
                    out,
                    "    <node id=\"c{}\"><data key=\"size\">{}</data><data key=\"central\">false</data></node>",
                    c.id, c.size
                );
            }
            for a in &partition.central_vertices {
                let _ = writeln!(
                    out,
                    "    <node id=\"{}\"><data key=\"size\">1</data><data key=\"central\">true</data></node>",
                    xml_escape(&a.vertex)
                );
            }
            for e in &partition.inter_edges {
                let _ = writeln!(
                    out,
                    "    <edge source=\"c{}\" target=\"c{}\"><data key=\"weight\">{}</data></edge>",
                    e.a, e.b, e.count
                );
            }
            for a in &partition.central_vertices {
                for (c, count) in &a.edges_to {
                    let _ = writeln!(
                        out,
                        "    <edge source=\"{}\" target=\"c{c}\"><data key=\"weight\">{count}</data></edge>",
                        xml_escape(&a.vertex)
                    );
                }
            }
            out.push_str("  </graph>\n</graphml>\n");
            Ok(out)
        }
    }
}
