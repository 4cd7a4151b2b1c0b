//! Central-vertex removal, reinsertion, and per-community book profiles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::export::{book_color, dot_quote};
use crate::graph::Graph;
use crate::metrics::BetweennessScores;

/// Dominance above which a community is drawn in its book's color.
pub const COLOR_THRESHOLD: f64 = 0.75;

/// Book key for vertices outside every book.
pub const NO_BOOK: &str = "none";

/// The graph left after deleting the highest-betweenness vertices.
#[derive(Debug, Clone)]
pub struct Removal {
    pub reduced: Graph,
    /// Original index of each vertex of `reduced`.
    pub kept: Vec<usize>,
    /// Original indices, by decreasing betweenness.
    pub centrals: Vec<usize>,
    /// Original indices of vertices with no neighbor left, ascending.
    pub isolated: Vec<usize>,
}

/// Removes the `count` vertices of highest betweenness (ties by label).
pub fn remove_centrals(graph: &Graph, scores: &BetweennessScores, count: usize) -> Result<Removal> {
    if scores.as_slice().len() != graph.n() {
        return Err(Error::Consistency(format!(
            "{} betweenness scores for {} vertices",
            scores.as_slice().len(),
            graph.n()
        )));
    }
    if count > graph.n() {
        return Err(Error::Domain(format!(
            "cannot remove {count} centrals from {} vertices",
            graph.n()
        )));
    }
    let centrals: Vec<usize> = scores.ranking(graph).into_iter().take(count).collect();
    let removed: BTreeSet<usize> = centrals.iter().copied().collect();
    let kept: Vec<usize> = (0..graph.n()).filter(|v| !removed.contains(v)).collect();
    let reduced = graph.induced_subgraph(&kept)?;
    let isolated = (0..reduced.n())
        .filter(|&v| reduced.degree(v) == 0)
        .map(|v| kept[v])
        .collect();
    Ok(Removal {
        reduced,
        kept,
        centrals,
        isolated,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BookProfile {
    pub book_fractions: BTreeMap<String, f64>,
    pub dominant_book: String,
    pub dominant_fraction: f64,
    pub colored: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Community {
    pub id: usize,
    /// Vertex labels in graph order.
    pub members: Vec<String>,
    pub size: usize,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub profile: Option<BookProfile>,
}

/// A removed central vertex and the communities it touches.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CentralAnnotation {
    pub vertex: String,
    pub adjacent_communities: Vec<usize>,
    /// Edge count from this central to each adjacent community.
    pub edges_to: BTreeMap<usize, usize>,
    pub adjacent_centrals: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InterEdge {
    pub a: usize,
    pub b: usize,
    pub count: usize,
}

/// Community structure of the analyzed graph.
///
/// Ids run by decreasing size, equal sizes by smallest member index.
/// Central vertices belong to no community.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partition {
    pub assignment: BTreeMap<String, usize>,
    pub communities: Vec<Community>,
    pub central_vertices: Vec<CentralAnnotation>,
    /// Edges between distinct communities, `a < b`, central-incident edges
    /// excluded.
    pub inter_edges: Vec<InterEdge>,
}

impl Partition {
    pub fn community_count(&self) -> usize {
        self.communities.len()
    }

    pub fn community_of(&self, label: &str) -> Option<usize> {
        self.assignment.get(label).copied()
    }

    pub fn singleton_count(&self) -> usize {
        self.communities.iter().filter(|c| c.size == 1).count()
    }

    /// Attaches the book profile to every community.
    pub fn with_profiles(mut self, corpus: &Corpus) -> Result<Partition> {
        let profiles = book_profile(&self, corpus)?;
        for (c, p) in self.communities.iter_mut().zip(profiles) {
            c.profile = Some(p);
        }
        Ok(self)
    }
}

/// Builds the partition of `graph` from cluster labels on the reduced graph.
///
/// `raw[i]` is the cluster of `removal.reduced` vertex `i`; any raw label
/// values are accepted and renumbered canonically.
pub fn reinsert_centrals(raw: &[usize], removal: &Removal, graph: &Graph) -> Result<Partition> {
    if raw.len() != removal.kept.len() {
        return Err(Error::Consistency(format!(
            "{} cluster labels for {} remaining vertices",
            raw.len(),
            removal.kept.len()
        )));
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &label) in raw.iter().enumerate() {
        groups.entry(label).or_default().push(removal.kept[i]);
    }
    let mut groups: Vec<Vec<usize>> = groups.into_values().collect();
    groups.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));

    let mut community = vec![None; graph.n()];
    for (id, members) in groups.iter().enumerate() {
        for &v in members {
            community[v] = Some(id);
        }
    }

    let central_set: BTreeSet<usize> = removal.centrals.iter().copied().collect();
    let mut central_vertices = Vec::with_capacity(removal.centrals.len());
    for &c in &removal.centrals {
        let mut edges_to = BTreeMap::new();
        let mut adjacent_centrals = Vec::new();
        for &w in graph.neighbors(c) {
            match community[w] {
                Some(id) => *edges_to.entry(id).or_insert(0) += 1,
                None => adjacent_centrals.push(graph.label(w).to_string()),
            }
        }
        central_vertices.push(CentralAnnotation {
            vertex: graph.label(c).to_string(),
            adjacent_communities: edges_to.keys().copied().collect(),
            edges_to,
            adjacent_centrals,
        });
    }

    let mut inter: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (u, v, _) in graph.edges() {
        if central_set.contains(&u) || central_set.contains(&v) {
            continue;
        }
        let (a, b) = (community[u].unwrap(), community[v].unwrap());
        if a != b {
            *inter.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
    }

    let assignment = (0..graph.n())
        .filter_map(|v| community[v].map(|c| (graph.label(v).to_string(), c)))
        .collect();
    let communities = groups
        .into_iter()
        .enumerate()
        .map(|(id, members)| Community {
            id,
            size: members.len(),
            members: members
                .iter()
                .map(|&v| graph.label(v).to_string())
                .collect(),
            profile: None,
        })
        .collect();
    Ok(Partition {
        assignment,
        communities,
        central_vertices,
        inter_edges: inter
            .into_iter()
            .map(|((a, b), count)| InterEdge { a, b, count })
            .collect(),
    })
}

/// Book composition of each community, in partition order (largest first).
///
/// The dominant book is the most frequent one; ties go to the book listed
/// first in the corpus.
pub fn book_profile(partition: &Partition, corpus: &Corpus) -> Result<Vec<BookProfile>> {
    partition
        .communities
        .iter()
        .map(|c| {
            let mut counts: BTreeMap<String, (usize, usize)> = BTreeMap::new();
            for label in &c.members {
                let book = corpus.book_of(label)?;
                let order = match book {
                    Some(id) => corpus.position(id).unwrap_or(usize::MAX),
                    None => usize::MAX,
                };
                counts
                    .entry(book.unwrap_or(NO_BOOK).to_string())
                    .or_insert((0, order))
                    .0 += 1;
            }
            let size = c.members.len().max(1) as f64;
            let (dominant_book, &(top, _)) = counts
                .iter()
                .max_by(|a, b| a.1 .0.cmp(&b.1 .0).then(b.1 .1.cmp(&a.1 .1)))
                .ok_or_else(|| Error::Consistency(format!("community {} is empty", c.id)))?;
            let dominant_fraction = top as f64 / size;
            Ok(BookProfile {
                dominant_book: dominant_book.clone(),
                dominant_fraction,
                colored: dominant_fraction > COLOR_THRESHOLD,
                book_fractions: counts
                    .iter()
                    .map(|(b, &(n, _))| (b.clone(), n as f64 / size))
                    .collect(),
            })
        })
        .collect()
}

/// Community-level graph in DOT: one node per community with its size,
/// one weighted edge per connected pair, centrals as diamonds.
pub fn community_graph_export(partition: &Partition) -> String {
    let mut out = String::from("graph communities {\n  node [shape=circle, style=filled];\n");
    for c in &partition.communities {
        let (book, colored) = match &c.profile {
            Some(p) => (p.dominant_book.as_str(), p.colored),
            None => (NO_BOOK, false),
        };
        let fill = if colored { book_color(book) } else { "white" };
        let _ = writeln!(
            out,
            "  c{id} [label=\"{id}\", size={size}, dominant_book={book}, colored={colored}, fillcolor={fill}];",
            id = c.id,
            size = c.size,
            book = dot_quote(book),
        );
    }
    for a in &partition.central_vertices {
        let _ = writeln!(
            out,
            "  {} [shape=diamond, fillcolor=red, central=true];",
            dot_quote(&a.vertex)
        );
    }
    for e in &partition.inter_edges {
        let _ = writeln!(
            out,
            "  c{} -- c{} [weight={count}, penwidth={count}];",
            e.a,
            e.b,
            count = e.count
        );
    }
    for a in &partition.central_vertices {
        for (c, count) in &a.edges_to {
            let _ = writeln!(
                out,
                "  {} -- c{c} [weight={count}, penwidth={count}];",
                dot_quote(&a.vertex)
            );
        }
    }
    out.push_str("}\n");
    out
}
