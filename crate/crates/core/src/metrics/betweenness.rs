//! Freeman betweenness by dependency accumulation over BFS trees.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Sources handled per work unit. Partial sums are reduced in chunk order,
/// so the result does not depend on the number of threads.
const SOURCES_PER_CHUNK: usize = 32;

/// Unnormalized betweenness per vertex: for every unordered pair `{s, t}`
/// with `v` strictly between them, the fraction of shortest `s`-`t` paths
/// through `v`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct BetweennessScores(pub Vec<f64>);

impl BetweennessScores {
    pub fn get(&self, v: usize) -> f64 {
        self.0[v]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Vertex indices by decreasing score, ties by label.
    pub fn ranking(&self, graph: &Graph) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.0.len()).collect();
        order.sort_by(|&a, &b| {
            self.0[b]
                .total_cmp(&self.0[a])
                .then_with(|| graph.label(a).cmp(graph.label(b)))
        });
        order
    }
}

pub fn betweenness(graph: &Graph) -> BetweennessScores {
    let n = graph.n();
    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCES_PER_CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; n];
            let mut scratch = Scratch::new(n);
            for &s in chunk {
                scratch.accumulate(graph, s, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; n];
    for partial in partials {
        for (t, p) in total.iter_mut().zip(partial) {
            *t += p;
        }
    }
    // every unordered pair was seen from both endpoints
    for t in &mut total {
        *t /= 2.0;
    }
    BetweennessScores(total)
}

struct Scratch {
    sigma: Vec<f64>,
    dist: Vec<i64>,
    delta: Vec<f64>,
    preds: Vec<Vec<usize>>,
    stack: Vec<usize>,
    queue: VecDeque<usize>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            sigma: vec![0.0; n],
            dist: vec![-1; n],
            delta: vec![0.0; n],
            preds: vec![Vec::new(); n],
            stack: Vec::with_capacity(n),
            queue: VecDeque::with_capacity(n),
        }
    }

    fn accumulate(&mut self, graph: &Graph, s: usize, acc: &mut [f64]) {
        for &v in &self.stack {
            self.sigma[v] = 0.0;
            self.dist[v] = -1;
            self.delta[v] = 0.0;
            self.preds[v].clear();
        }
        self.stack.clear();

        self.sigma[s] = 1.0;
        self.dist[s] = 0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.stack.push(v);
            for &w in graph.neighbors(v) {
                if self.dist[w] < 0 {
                    self.dist[w] = self.dist[v] + 1;
                    self.queue.push_back(w);
                }
                if self.dist[w] == self.dist[v] + 1 {
                    self.sigma[w] += self.sigma[v];
                    self.preds[w].push(v);
                }
            }
        }
        for i in (0..self.stack.len()).rev() {
            let w = self.stack[i];
            let coeff = (1.0 + self.delta[w]) / self.sigma[w];
            for j in 0..self.preds[w].len() {
                let v = self.preds[w][j];
                self.delta[v] += self.sigma[v] * coeff;
            }
            if w != s {
                acc[w] += self.delta[w];
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetweennessRow {
    pub vertex: String,
    pub betweenness: f64,
    pub degree: usize,
}

/// The `k` most central vertices with their degrees.
pub fn betweenness_table(
    graph: &Graph,
    scores: &BetweennessScores,
    k: usize,
) -> Result<Vec<BetweennessRow>> {
    if k == 0 {
        return Err(Error::Domain("betweenness table needs k >= 1".into()));
    }
    Ok(scores
        .ranking(graph)
        .into_iter()
        .take(k)
        .map(|v| BetweennessRow {
            vertex: graph.label(v).to_string(),
            betweenness: scores.get(v),
            degree: graph.degree(v),
        })
        .collect())
}
