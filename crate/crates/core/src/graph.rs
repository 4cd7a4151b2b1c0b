//! The undirected simple reference network.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use crate::citations::ExtractionReport;
use crate::corpus::{Corpus, NodeKind};
use crate::error::{Error, Result};

/// Undirected simple graph over labelled vertices.
///
/// Parallel citations collapse into one edge whose multiplicity records how
/// many references (in either direction) support it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    adjacency: Vec<Vec<usize>>,
    multiplicity: BTreeMap<(usize, usize), u32>,
}

impl Graph {
    /// A graph on `labels` with no edges. Labels must be unique.
    pub fn with_labels(labels: Vec<String>) -> Result<Graph> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Consistency(format!("duplicate vertex `{l}`")));
            }
        }
        Ok(Graph {
            adjacency: vec![Vec::new(); labels.len()],
            labels,
            index,
            multiplicity: BTreeMap::new(),
        })
    }

    /// A graph on `n` vertices labelled `v0`, `v1`, ... (zero padded so
    /// that label order equals index order).
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let width = n.saturating_sub(1).to_string().len();
        let labels = (0..n).map(|i| format!("v{i:0width$}")).collect();
        let mut g = Graph::with_labels(labels)?;
        for &(u, v) in edges {
            g.add_edge(u, v, 1)?;
        }
        Ok(g)
    }

    /// Adds `count` to the multiplicity of `{u, v}`, creating the edge if needed.
    pub fn add_edge(&mut self, u: usize, v: usize, count: u32) -> Result<()> {
        let n = self.n();
        if u >= n || v >= n {
            return Err(Error::Consistency(format!(
                "edge ({u}, {v}) outside 0..{n}"
            )));
        }
        if u == v {
            return Err(Error::Consistency(format!(
                "self-loop on `{}`",
                self.labels[u]
            )));
        }
        let key = (u.min(v), u.max(v));
        let entry = self.multiplicity.entry(key).or_insert(0);
        if *entry == 0 {
            insert_sorted(&mut self.adjacency[u], v);
            insert_sorted(&mut self.adjacency[v], u);
        }
        *entry += count;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn m(&self) -> usize {
        self.multiplicity.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Sorted neighbor indices.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Number of underlying references for `{u, v}`; 0 when not adjacent.
    pub fn multiplicity(&self, u: usize, v: usize) -> u32 {
        self.multiplicity
            .get(&(u.min(v), u.max(v)))
            .copied()
            .unwrap_or(0)
    }

    /// Edges as `(u, v, multiplicity)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.multiplicity.iter().map(|(&(u, v), &c)| (u, v, c))
    }

    /// Subgraph induced by `keep` (indices into this graph), which keeps
    /// this graph's vertex order.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Result<Graph> {
        let mut selected = vec![false; self.n()];
        for &v in keep {
            if v >= self.n() {
                return Err(Error::UnknownNode(format!("vertex #{v}")));
            }
            selected[v] = true;
        }
        let order: Vec<usize> = (0..self.n()).filter(|&v| selected[v]).collect();
        let mut remap = vec![usize::MAX; self.n()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let mut sub = Graph::with_labels(order.iter().map(|&v| self.labels[v].clone()).collect())?;
        for (u, v, c) in self.edges() {
            if selected[u] && selected[v] {
                sub.add_edge(remap[u], remap[v], c)?;
            }
        }
        Ok(sub)
    }

    /// Subgraph induced by vertex labels.
    pub fn induced_by_labels<S: AsRef<str>>(&self, keep: &[S]) -> Result<Graph> {
        let idx = keep
            .iter()
            .map(|l| {
                self.index_of(l.as_ref())
                    .ok_or_else(|| Error::UnknownNode(l.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        self.induced_subgraph(&idx)
    }

    /// Hop distances from `source`; `None` for unreachable vertices.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &w in &self.adjacency[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

fn insert_sorted(list: &mut Vec<usize>, v: usize) {
    if let Err(pos) = list.binary_search(&v) {
        list.insert(pos, v);
    }
}

/// Builds the reference network: every corpus node except the root is a
/// vertex; every pair with at least one citation is an edge.
pub fn build_graph(corpus: &Corpus, refs: &ExtractionReport) -> Result<Graph> {
    let labels = corpus.nodes()[1..].iter().map(|n| n.id.clone()).collect();
    let mut graph = Graph::with_labels(labels)?;
    for r in &refs.resolved {
        let endpoint = |id: &str| {
            graph
                .index_of(id)
                .ok_or_else(|| Error::Consistency(format!("citation touches unknown node `{id}`")))
        };
        let (u, v) = (endpoint(&r.source)?, endpoint(&r.target)?);
        if u == v {
            return Err(Error::Consistency(format!(
                "self-citation of `{}`",
                r.source
            )));
        }
        graph.add_edge(u, v, 1)?;
    }
    Ok(graph)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IsolatedCensus {
    pub total: usize,
    pub headings: usize,
    pub articles: usize,
}

/// Degree-0 vertices, split into articles and headings.
pub fn isolated_census(graph: &Graph, corpus: &Corpus) -> Result<IsolatedCensus> {
    let mut census = IsolatedCensus {
        total: 0,
        headings: 0,
        articles: 0,
    };
    for v in (0..graph.n()).filter(|&v| graph.degree(v) == 0) {
        let node = corpus
            .get(graph.label(v))
            .ok_or_else(|| Error::UnknownNode(graph.label(v).to_string()))?;
        census.total += 1;
        if node.kind == NodeKind::Article {
            census.articles += 1;
        } else {
            census.headings += 1;
        }
    }
    Ok(census)
}

/// Connected components, numbered so that component 0 is the greatest;
/// equal sizes are ordered by their smallest vertex index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentDecomposition {
    pub component_id: Vec<usize>,
    pub sizes: Vec<usize>,
    pub greatest: usize,
}

impl ComponentDecomposition {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    /// Vertex indices of component `c`, ascending.
    pub fn members(&self, c: usize) -> Vec<usize> {
        (0..self.component_id.len())
            .filter(|&v| self.component_id[v] == c)
            .collect()
    }
}

pub fn components(graph: &Graph) -> ComponentDecomposition {
    let n = graph.n();
    let mut raw = vec![usize::MAX; n];
    let mut raw_sizes = Vec::new();
    for start in 0..n {
        if raw[start] != usize::MAX {
            continue;
        }
        let label = raw_sizes.len();
        raw[start] = label;
        let mut size = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            size += 1;
            for &w in graph.neighbors(u) {
                if raw[w] == usize::MAX {
                    raw[w] = label;
                    queue.push_back(w);
                }
            }
        }
        raw_sizes.push(size);
    }
    // Discovery order is already "smallest vertex first", so a stable sort
    // by size gives the required tie-break.
    let mut order: Vec<usize> = (0..raw_sizes.len()).collect();
    order.sort_by(|&a, &b| raw_sizes[b].cmp(&raw_sizes[a]));
    let mut relabel = vec![0; raw_sizes.len()];
    for (new, &old) in order.iter().enumerate() {
        relabel[old] = new;
    }
    ComponentDecomposition {
        component_id: raw.iter().map(|&c| relabel[c]).collect(),
        sizes: order.iter().map(|&c| raw_sizes[c]).collect(),
        greatest: 0,
    }
}

/// The subgraph induced by the greatest connected component.
pub fn greatest_component(graph: &Graph) -> Result<Graph> {
    if graph.n() == 0 {
        return Ok(graph.clone());
    }
    let decomposition = components(graph);
    graph.induced_subgraph(&decomposition.members(decomposition.greatest))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeRow {
    pub vertex: String,
    pub degree: usize,
}

/// The `k` highest-degree vertices; ties go to the smaller label.
pub fn degree_table(graph: &Graph, k: usize) -> Result<Vec<DegreeRow>> {
    if k == 0 {
        return Err(Error::Domain("degree table needs k >= 1".into()));
    }
    Ok(top_by_degree(graph, k)
        .into_iter()
        .map(|v| DegreeRow {
            vertex: graph.label(v).to_string(),
            degree: graph.degree(v),
        })
        .collect())
}

pub(crate) fn top_by_degree(graph: &Graph, k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..graph.n()).collect();
    order.sort_by(|&a, &b| {
        graph
            .degree(b)
            .cmp(&graph.degree(a))
            .then_with(|| graph.label(a).cmp(graph.label(b)))
    });
    order.truncate(k);
    order
}
