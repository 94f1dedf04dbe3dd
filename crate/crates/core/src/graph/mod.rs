//! Weighted undirected graphs: ingestion, synthetic generation and density.

mod generate;
mod io;

use crate::error::{DpcdError, Result};
use crate::matrix::CsrMatrix;

pub use generate::{planted_partition, PlantedGraph};
pub use io::{
    load_edge_list, load_matrix_market, write_edge_list, write_matrix_market, LoadStats,
    LoadedGraph,
};

/// Symmetric weighted adjacency `W` with zero diagonal.
///
/// Each undirected edge is stored once as `(i, j, w)` with `i < j`; the CSR
/// view holds both orientations.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseGraph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    adjacency: CsrMatrix,
    total_weight: f64,
}

impl SparseGraph {
    /// Edges must have `i != j`, positive finite weights, ids below `n`.
    /// Repeated pairs are summed.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut canon = Vec::new();
        for (i, j, w) in edges {
            if i == j {
                return Err(DpcdError::domain(format!("self-loop at node {i}")));
            }
            if i >= n || j >= n {
                return Err(DpcdError::domain(format!(
                    "edge ({i}, {j}) references a node >= n = {n}"
                )));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(DpcdError::domain(format!(
                    "edge ({i}, {j}) has non-positive weight {w}"
                )));
            }
            canon.push((i.min(j), i.max(j), w));
        }
        canon.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(canon.len());
        for (i, j, w) in canon {
            match merged.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += w,
                _ => merged.push((i, j, w)),
            }
        }
        Ok(SparseGraph::from_canonical(n, merged))
    }

    fn from_canonical(n: usize, edges: Vec<(usize, usize, f64)>) -> Self {
        let triplets: Vec<_> = edges
            .iter()
            .flat_map(|&(i, j, w)| [(i, j, w), (j, i, w)])
            .collect();
        let adjacency = CsrMatrix::from_triplets(n, &triplets).expect("ids checked");
        let total_weight = 2.0 * edges.iter().map(|e| e.2).sum::<f64>();
        SparseGraph {
            n,
            edges,
            adjacency,
            total_weight,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Undirected edges `(i, j, w)`, `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn adjacency(&self) -> &CsrMatrix {
        &self.adjacency
    }

    /// `1^T W 1`: every edge counts twice.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.adjacency.get(i, j)
    }

    pub fn weighted_degrees(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.adjacency.row(i).map(|(_, w)| w).sum()).collect()
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.adjacency.row(i)
    }
}

/// `x^T W x / k` for the indicator `x` of `selection` (`k = |selection|`).
pub fn density(w: &SparseGraph, selection: &[usize]) -> Result<f64> {
    if selection.is_empty() {
        return Err(DpcdError::domain("selection must contain at least one node"));
    }
    let mut member = vec![false; w.node_count()];
    for &v in selection {
        if v >= w.node_count() {
            return Err(DpcdError::domain(format!("node {v} out of range")));
        }
        if member[v] {
            return Err(DpcdError::domain(format!("node {v} selected twice")));
        }
        member[v] = true;
    }
    let inside: f64 = w
        .edges()
        .iter()
        .filter(|&&(i, j, _)| member[i] && member[j])
        .map(|e| e.2)
        .sum();
    Ok(2.0 * inside / selection.len() as f64)
}
