//! Brute-force reference implementations shared by the integration tests.
//! Deliberately naive: no code is shared with the library.

#![allow(dead_code)]

use std::collections::VecDeque;
use std::path::PathBuf;

use codexgraph::communities::{KChoice, SpectralConfig};
use codexgraph::corpus::Corpus;
use codexgraph::graph::Graph;
use codexgraph::pipeline::{build_stage, communities_stage, PipelineConfig};
use codexgraph::synth::{synth_corpus, SynthSpec};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

pub fn minicode() -> codexgraph::corpus::Corpus {
    codexgraph::corpus::load_corpus(&std::fs::read_to_string(fixture("minicode.json")).unwrap())
        .unwrap()
}

/// Compares with a committed file; `UPDATE_GOLDEN=1` rewrites it instead.
pub fn check_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("missing golden {}: {e}", path.display()));
    assert!(
        expected == actual,
        "output differs from golden {}",
        path.display()
    );
}

pub fn adjacency_matrix(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.n();
    let mut a = vec![vec![false; n]; n];
    for (u, v, _) in g.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

/// All-pairs hop distances; `None` when unreachable.
pub fn floyd_warshall(g: &Graph) -> Vec<Vec<Option<u64>>> {
    let n = g.n();
    let a = adjacency_matrix(g);
    let mut d = vec![vec![None; n]; n];
    for i in 0..n {
        d[i][i] = Some(0);
        for j in 0..n {
            if a[i][j] {
                d[i][j] = Some(1);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(x), Some(y)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|z| x + y < z) {
                        d[i][j] = Some(x + y);
                    }
                }
            }
        }
    }
    d
}

/// Median over vertices of the mean distance to all others; needs a connected graph.
pub fn brute_path_length(g: &Graph) -> f64 {
    let n = g.n();
    let d = floyd_warshall(g);
    let mut means: Vec<f64> = (0..n)
        .map(|i| {
            let total: u64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| d[i][j].expect("connected"))
                .sum();
            total as f64 / (n - 1) as f64
        })
        .collect();
    means.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if n % 2 == 1 {
        means[n / 2]
    } else {
        (means[n / 2 - 1] + means[n / 2]) / 2.0
    }
}

/// Mean local clustering over vertices of degree >= 2, by triple loop.
pub fn brute_clustering(g: &Graph) -> Option<f64> {
    let n = g.n();
    let a = adjacency_matrix(g);
    let mut values = Vec::new();
    for v in 0..n {
        let nb: Vec<usize> = (0..n).filter(|&u| a[v][u]).collect();
        let k = nb.len();
        if k < 2 {
            continue;
        }
        let mut links = 0;
        for i in 0..k {
            for j in i + 1..k {
                if a[nb[i]][nb[j]] {
                    links += 1;
                }
            }
        }
        values.push(2.0 * links as f64 / (k * (k - 1)) as f64);
    }
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

fn bfs(g: &Graph, s: usize) -> Vec<Option<usize>> {
    let mut d = vec![None; g.n()];
    d[s] = Some(0);
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &w in g.neighbors(u) {
            if d[w].is_none() {
                d[w] = Some(d[u].unwrap() + 1);
                q.push_back(w);
            }
        }
    }
    d
}

/// Betweenness by listing every shortest path of every unordered pair.
pub fn brute_betweenness(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let dist: Vec<Vec<Option<usize>>> = (0..n).map(|s| bfs(g, s)).collect();
    let mut score = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            let Some(target) = dist[s][t] else { continue };
            let mut paths: Vec<Vec<usize>> = Vec::new();
            let mut stack = vec![vec![s]];
            while let Some(path) = stack.pop() {
                let last = *path.last().unwrap();
                if last == t {
                    paths.push(path);
                    continue;
                }
                for &w in g.neighbors(last) {
                    if dist[s][w] == Some(path.len()) && dist[w][t] == Some(target - path.len()) {
                        let mut next = path.clone();
                        next.push(w);
                        stack.push(next);
                    }
                }
            }
            for p in &paths {
                for &v in &p[1..p.len() - 1] {
                    score[v] += 1.0 / paths.len() as f64;
                }
            }
        }
    }
    score
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
#[allow(clippy::needless_range_loop)]
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-22 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// `I - D^-1/2 A D^-1/2` from the definition, zero rows for isolated vertices.
pub fn brute_laplacian(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.n();
    let a = adjacency_matrix(g);
    let deg: Vec<f64> = (0..n)
        .map(|i| a[i].iter().filter(|&&x| x).count() as f64)
        .collect();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let diag = if i == j && deg[i] > 0.0 { 1.0 } else { 0.0 };
                    let off = if a[i][j] {
                        1.0 / (deg[i] * deg[j]).sqrt()
                    } else {
                        0.0
                    };
                    diag - off
                })
                .collect()
        })
        .collect()
}

/// The 2-partition minimizing the normalized cut, as a side-of-vertex vector
/// with vertex 0 on side `false`.
pub fn min_normalized_cut(g: &Graph) -> Vec<bool> {
    let n = g.n();
    assert!(n <= 22, "exhaustive search");
    let mut best = (f64::INFINITY, 0u64);
    for mask in 1u64..(1 << (n - 1)) {
        let mask = mask << 1;
        let side = |v: usize| mask >> v & 1 == 1;
        let (mut cut, mut vol_a, mut vol_b) = (0.0, 0.0, 0.0);
        for (u, v, _) in g.edges() {
            if side(u) != side(v) {
                cut += 1.0;
            }
        }
        for v in 0..n {
            if side(v) {
                vol_b += g.degree(v) as f64;
            } else {
                vol_a += g.degree(v) as f64;
            }
        }
        if vol_a == 0.0 || vol_b == 0.0 {
            continue;
        }
        let ncut = cut / vol_a + cut / vol_b;
        if ncut < best.0 - 1e-12 {
            best = (ncut, mask);
        }
    }
    (0..n).map(|v| best.1 >> v & 1 == 1).collect()
}

pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, &edges).unwrap()
}

pub fn disjoint_cliques(count: usize, size: usize) -> Graph {
    let mut edges = Vec::new();
    for c in 0..count {
        for i in 0..size {
            for j in i + 1..size {
                edges.push((c * size + i, c * size + j));
            }
        }
    }
    Graph::from_edges(count * size, &edges).unwrap()
}

/// Best fraction of items whose predicted label maps to their true label
/// under a one-to-one relabeling, by exhaustive search over label maps.
pub fn relabeled_agreement(truth: &[usize], predicted: &[Option<usize>]) -> f64 {
    let kt = truth.iter().max().map_or(0, |&m| m + 1);
    let kp = predicted.iter().flatten().max().map_or(0, |&m| m + 1);
    let mut overlap = vec![vec![0usize; kt]; kp];
    for (t, p) in truth.iter().zip(predicted) {
        if let Some(p) = p {
            overlap[*p][*t] += 1;
        }
    }
    // Only the predicted labels that are some block's majority can matter
    // for a near-perfect match, but search them all while small.
    assert!(kp <= 9 && kt <= 9, "exhaustive relabeling");
    fn search(p: usize, used: &mut Vec<bool>, overlap: &[Vec<usize>]) -> usize {
        if p == overlap.len() {
            return 0;
        }
        let mut best = search(p + 1, used, overlap);
        for t in 0..used.len() {
            if !used[t] {
                used[t] = true;
                best = best.max(overlap[p][t] + search(p + 1, used, overlap));
                used[t] = false;
            }
        }
        best
    }
    let matched = search(0, &mut vec![false; kt], &overlap);
    matched as f64 / truth.len() as f64
}

/// Agreement between planted blocks and detected communities over all
/// articles; articles left out of the partition count as misses.
pub fn planted_agreement(seed: u64, k: KChoice) -> (f64, usize) {
    let spec = SynthSpec {
        books: 4,
        chapters_per_book: 1,
        articles_per_chapter: 30,
        p_in: 0.3,
        p_out: 0.01,
        seed,
        ..SynthSpec::default()
    };
    let synth = synth_corpus(&spec).unwrap();
    let corpus = Corpus::from_value(&synth.document).unwrap();
    let (_, _, core) = build_stage(&corpus).unwrap();
    let config = PipelineConfig {
        seed,
        communities: SpectralConfig {
            centrals_removed: 0,
            k,
            ..SpectralConfig::default()
        },
        ..PipelineConfig::default()
    };
    let d = communities_stage(&core, &corpus, &config).unwrap();
    let (truth, predicted): (Vec<usize>, Vec<Option<usize>>) = synth
        .truth
        .blocks
        .iter()
        .map(|(id, &b)| (b, d.partition.community_of(id)))
        .unzip();
    (relabeled_agreement(&truth, &predicted), d.k)
}
