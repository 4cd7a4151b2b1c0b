//! Normalized Laplacian `I - D^{-1/2} A D^{-1/2}` and its low eigenvectors.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest accepted `‖L v − λ v‖₂` for a returned eigenpair.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

/// Symmetric normalized Laplacian. Degree-0 vertices get an all-zero row
/// and column. With `weighted`, edge multiplicities replace the 0/1 entries.
pub fn normalized_laplacian(graph: &Graph, weighted: bool) -> DMatrix<f64> {
    let n = graph.n();
    let weight = |u: usize, v: usize| {
        if weighted {
            f64::from(graph.multiplicity(u, v))
        } else {
            1.0
        }
    };
    let strength: Vec<f64> = (0..n)
        .map(|v| graph.neighbors(v).iter().map(|&w| weight(v, w)).sum())
        .collect();
    let mut lap = DMatrix::zeros(n, n);
    for v in 0..n {
        if strength[v] > 0.0 {
            lap[(v, v)] = 1.0;
        }
    }
    for (u, v, _) in graph.edges() {
        let entry = -weight(u, v) / (strength[u] * strength[v]).sqrt();
        lap[(u, v)] = entry;
        lap[(v, u)] = entry;
    }
    lap
}

/// Full eigendecomposition of the Laplacian restricted to non-isolated
/// vertices.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Graph indices of the vertices that take part in the embedding.
    pub vertices: Vec<usize>,
    /// Degree-0 vertices, set aside as singleton communities.
    pub isolated: Vec<usize>,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
    laplacian: DMatrix<f64>,
}

pub fn laplacian_spectrum(graph: &Graph, weighted: bool) -> Result<Spectrum> {
    let (vertices, isolated): (Vec<usize>, Vec<usize>) =
        (0..graph.n()).partition(|&v| graph.degree(v) > 0);
    let core = graph.induced_subgraph(&vertices)?;
    let laplacian = normalized_laplacian(&core, weighted);
    let size = laplacian.nrows();
    if size == 0 {
        return Ok(Spectrum {
            vertices,
            isolated,
            eigenvalues: Vec::new(),
            eigenvectors: DMatrix::zeros(0, 0),
            laplacian,
        });
    }
    let eig = SymmetricEigen::try_new(laplacian.clone(), 1e-15, 0)
        .ok_or_else(|| Error::Numerical("symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .total_cmp(&eig.eigenvalues[b])
            .then(a.cmp(&b))
    });
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = DMatrix::zeros(size, size);
    for (col, &i) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(i).into_owned();
        orient(&mut v);
        eigenvectors.set_column(col, &v);
    }
    Ok(Spectrum {
        vertices,
        isolated,
        eigenvalues,
        eigenvectors,
        laplacian,
    })
}

/// Fixes the sign so that the entry of largest magnitude (first on ties)
/// is positive.
fn orient(v: &mut DVector<f64>) {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i].abs() > v[best].abs() + 1e-12 {
            best = i;
        }
    }
    if !v.is_empty() && v[best] < 0.0 {
        v.neg_mut();
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralEmbedding {
    /// Ascending Laplacian spectrum of the non-isolated part.
    pub eigenvalues: Vec<f64>,
    /// Graph indices, one per row of `coordinates`.
    pub vertices: Vec<usize>,
    /// Unit-normalized rows of the `k` lowest eigenvectors (zero rows stay zero).
    pub coordinates: Vec<Vec<f64>>,
    pub isolated_preassigned: Vec<usize>,
    /// `‖L v − λ v‖₂` for each of the `k` eigenpairs used.
    pub residuals: Vec<f64>,
}

impl Spectrum {
    /// Row-normalized coordinates in the `k` lowest eigenvectors.
    pub fn embedding(&self, k: usize) -> Result<SpectralEmbedding> {
        let size = self.vertices.len();
        if k == 0 || k > size {
            return Err(Error::Domain(format!(
                "embedding dimension {k} needs between 1 and {size} non-isolated vertices"
            )));
        }
        let mut residuals = Vec::with_capacity(k);
        for j in 0..k {
            let v = self.eigenvectors.column(j);
            let r = (&self.laplacian * v - v * self.eigenvalues[j]).norm();
            if r > RESIDUAL_TOLERANCE || !r.is_finite() {
                return Err(Error::Numerical(format!(
                    "eigenpair {j} residual {r:e} exceeds {RESIDUAL_TOLERANCE:e}"
                )));
            }
            residuals.push(r);
        }
        let coordinates = (0..size)
            .map(|row| {
                let mut x: Vec<f64> = (0..k).map(|j| self.eigenvectors[(row, j)]).collect();
                let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
                if norm > 0.0 {
                    x.iter_mut().for_each(|a| *a /= norm);
                }
                x
            })
            .collect();
        Ok(SpectralEmbedding {
            eigenvalues: self.eigenvalues.clone(),
            vertices: self.vertices.clone(),
            coordinates,
            isolated_preassigned: self.isolated.clone(),
            residuals,
        })
    }
}

pub fn spectral_embedding(graph: &Graph, k: usize, weighted: bool) -> Result<SpectralEmbedding> {
    laplacian_spectrum(graph, weighted)?.embedding(k)
}

/// Eigengap choice of the community count: the `i` in `2..=max_k`
/// maximizing `λ_{i+1} − λ_i` (1-based), smaller `i` on ties.
pub fn choose_k(eigenvalues: &[f64], max_k: usize) -> Result<usize> {
    if eigenvalues.len() < 3 {
        return Err(Error::Domain(format!(
            "eigengap selection needs at least 3 eigenvalues, got {}",
            eigenvalues.len()
        )));
    }
    let top = max_k.min(eigenvalues.len() - 1);
    if top < 2 {
        return Err(Error::Domain(format!("max_k must be >= 2, got {max_k}")));
    }
    // Gaps equal up to rounding count as ties.
    const TIE: f64 = 1e-12;
    let mut best = 2;
    let mut best_gap = eigenvalues[2] - eigenvalues[1];
    for i in 3..=top {
        let gap = eigenvalues[i] - eigenvalues[i - 1];
        if gap > best_gap + TIE {
            best = i;
            best_gap = gap;
        }
    }
    Ok(best)
}
