//! The column graph of a matrix and its exact tree-depth.

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;

use crate::arith::{RatMatrix, Rational};
use crate::error::{Error, Result};

pub const DEFAULT_TREE_DEPTH_MAX_VERTICES: usize = 20;

/// Simple undirected graph on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl MatrixGraph {
    /// Self-loops are dropped; each edge is stored once as `(min, max)`.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (j, k) in edges {
            if j >= n || k >= n {
                return Err(Error::Dimension(format!("edge ({j}, {k}) outside 0..{n}")));
            }
            if j != k {
                set.insert((j.min(k), j.max(k)));
            }
        }
        Ok(MatrixGraph { n, edges: set })
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("in range")
    }

    pub fn complete(n: usize) -> Self {
        Self::from_edges(n, (0..n).flat_map(|j| (j + 1..n).map(move |k| (j, k)))).expect("in range")
    }

    /// Center `0` joined to `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Self::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("in range")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, j: usize, k: usize) -> bool {
        self.edges.contains(&(j.min(k), j.max(k)))
    }

    /// Neighbourhoods as bitmasks; requires `n <= 64`.
    pub fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.n <= 64);
        let mut adj = vec![0u64; self.n];
        for &(j, k) in &self.edges {
            adj[j] |= 1 << k;
            adj[k] |= 1 << j;
        }
        adj
    }
}

/// `G(A)`: columns `j, k` adjacent iff some row has `A_ij · A_ik != 0`.
/// Pass `A^T` to get the row graph.
pub fn matrix_graph(a: &RatMatrix) -> MatrixGraph {
    let mut edges = Vec::new();
    for i in 0..a.nrows() {
        let support: Vec<usize> = (0..a.ncols()).filter(|&j| !a.get(i, j).is_zero()).collect();
        for (x, &j) in support.iter().enumerate() {
            for &k in &support[x + 1..] {
                edges.push((j, k));
            }
        }
    }
    MatrixGraph::from_edges(a.ncols(), edges).expect("columns in range")
}

fn components(set: u64, adj: &[u64]) -> Vec<u64> {
    let mut rest = set;
    let mut out = Vec::new();
    while rest != 0 {
        let start = rest & rest.wrapping_neg();
        let mut comp = start;
        let mut frontier = start;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = adj[v] & set & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        rest &= !comp;
        out.push(comp);
    }
    out
}

fn td_rec(set: u64, adj: &[u64], memo: &mut HashMap<u64, usize>) -> usize {
    if set == 0 {
        return 0;
    }
    if set.count_ones() == 1 {
        return 1;
    }
    if let Some(&v) = memo.get(&set) {
        return v;
    }
    let comps = components(set, adj);
    let value = if comps.len() > 1 {
        comps.into_iter().map(|c| td_rec(c, adj, memo)).max().unwrap_or(0)
    } else {
        let mut best = usize::MAX;
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            best = best.min(1 + td_rec(set & !(1 << v), adj, memo));
            // a connected graph on two or more vertices has td >= 2
            if best == 2 {
                break;
            }
        }
        best
    };
    memo.insert(set, value);
    value
}

/// Exact tree-depth: `td` of a connected graph is `1 + min_v td(G - v)`,
/// of a disconnected graph the maximum over its components; memoized over
/// vertex subsets.
pub fn tree_depth(g: &MatrixGraph, max_vertices: usize) -> Result<usize> {
    let n = g.vertex_count();
    if n > max_vertices.min(64) {
        return Err(Error::BudgetExceeded {
            needed: format!("{n} vertices"),
            budget: max_vertices as u64,
        });
    }
    let adj = g.adjacency_masks();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    Ok(td_rec(all, &adj, &mut HashMap::new()))
}

/// `max|A_ij| <= max_entry` and `min(td(A), td(A^T)) <= depth`.
pub fn in_sparse_regime(a: &RatMatrix, max_entry: &Rational, depth: usize, max_vertices: usize) -> Result<bool> {
    if a.max_abs_entry() > *max_entry {
        return Ok(false);
    }
    let columns = tree_depth(&matrix_graph(a), max_vertices)?;
    let rows = tree_depth(&matrix_graph(&a.transpose()), max_vertices)?;
    Ok(columns.min(rows) <= depth)
}
