//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use circuitwalk::arith::{rat, rref, RatMatrix, RatVector, Rational};
use circuitwalk::hardness::{random_feasible_instance, seeded_rng, RandomInstanceConfig};
use circuitwalk::lp::LpInstance;
use circuitwalk::sparsity::MatrixGraph;
use itertools::Itertools;
use num_traits::Signed;
use rand::Rng;

/// Max of `w·x` over all vertices, found by trying every split of the
/// coordinates into at-lower / at-upper / free and solving for the free ones.
pub fn vertex_enumeration_optimum(inst: &LpInstance) -> Option<Rational> {
    let n = inst.nvars();
    let a = inst.a();
    let mut best: Option<Rational> = None;
    for pattern in (0..n).map(|_| 0..3u8).multi_cartesian_product() {
        let free: Vec<usize> = (0..n).filter(|&i| pattern[i] == 2).collect();
        let mut x = RatVector::zeros(n);
        for (i, side) in pattern.iter().enumerate() {
            match side {
                0 => x.set(i, inst.lower()[i].clone()),
                1 => x.set(i, inst.upper()[i].clone()),
                _ => {}
            }
        }
        let rhs = inst.b() - &a.mul_vec(&x);
        let mut rows = Vec::new();
        for r in 0..a.nrows() {
            let mut row: Vec<Rational> = free.iter().map(|&j| a.get(r, j).clone()).collect();
            row.push(rhs[r].clone());
            rows.push(row);
        }
        let red = rref(&RatMatrix::from_rows(rows, free.len() + 1).unwrap());
        // free columns must be independent and the system consistent
        if red.pivots.contains(&free.len()) || red.rank != free.len() {
            continue;
        }
        for (k, &j) in free.iter().enumerate() {
            x.set(j, red.matrix.get(k, free.len()).clone());
        }
        if !inst.is_feasible(&x, false) {
            continue;
        }
        let obj = inst.objective(&x);
        if best.as_ref().is_none_or(|b| obj > *b) {
            best = Some(obj);
        }
    }
    best
}

/// Random instance with `m` rows and `n` columns, entries in `[-2, 2]`.
pub fn random_instance(seed: u64, m: usize, n: usize, bounds: (i64, i64)) -> (LpInstance, RatVector) {
    let cfg = RandomInstanceConfig {
        rows: m,
        cols: n,
        max_entry: 2,
        bound_range: bounds,
        max_weight: 3,
    };
    random_feasible_instance(&mut seeded_rng(seed), &cfg)
}

pub fn random_matrix(seed: u64, m: usize, n: usize, max_entry: i64) -> RatMatrix {
    let mut rng = seeded_rng(seed);
    let rows: Vec<Vec<Rational>> = (0..m)
        .map(|_| (0..n).map(|_| rat(rng.gen_range(-max_entry..=max_entry))).collect())
        .collect();
    RatMatrix::from_rows(rows, n).unwrap()
}

/// Tree-depth as the least height over all elimination orders: the first
/// vertex of the order inside a component becomes its root, recursively.
pub fn tree_depth_by_orders(g: &MatrixGraph) -> usize {
    let n = g.vertex_count();
    let adj: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| g.has_edge(i, j)).collect()).collect();
    (0..n)
        .permutations(n)
        .map(|order| forest_height(&adj, &order, (0..n).collect()))
        .min()
        .unwrap_or(0)
}

fn forest_height(adj: &[Vec<bool>], order: &[usize], vertices: Vec<usize>) -> usize {
    let mut height = 0;
    for comp in split_components(adj, &vertices) {
        let root = *order.iter().find(|v| comp.contains(v)).unwrap();
        let rest: Vec<usize> = comp.into_iter().filter(|&v| v != root).collect();
        height = height.max(1 + forest_height(adj, order, rest));
    }
    height
}

fn split_components(adj: &[Vec<bool>], vertices: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; adj.len()];
    let mut out = Vec::new();
    for &s in vertices {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut k = 0;
        while k < comp.len() {
            let v = comp[k];
            for &u in vertices {
                if !seen[u] && adj[v][u] {
                    seen[u] = true;
                    comp.push(u);
                }
            }
            k += 1;
        }
        out.push(comp);
    }
    out
}

pub fn example1_matrix() -> RatMatrix {
    RatMatrix::from_i64_rows(&[
        [2, 1, 0, 1, 2, 2, 1],
        [0, 1, 1, 1, 0, 1, 0],
        [2, 2, 1, 0, 0, 1, 1],
    ])
}

/// A nonzero integer kernel vector with `||h||_∞ <= max_inf`: a small integer
/// combination of kernel vectors on random matroid circuits, or `None`.
pub fn random_kernel_vector(a: &RatMatrix, seed: u64, max_inf: i64) -> Option<RatVector> {
    use circuitwalk::arith::kernel_vector_on_support;
    use circuitwalk::circuits::find_matroid_circuit;
    let mut rng = seeded_rng(seed);
    let n = a.ncols();
    for _ in 0..20 {
        let mut h = RatVector::zeros(n);
        for _ in 0..3 {
            let cols: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.8)).collect();
            if let Ok(c) = find_matroid_circuit(a, &cols) {
                let v = kernel_vector_on_support(a, &c).ok()?;
                h = &h + &v.scale(&rat(rng.gen_range(-2..=2)));
            }
        }
        if !h.is_zero() && h.iter().all(|v| v.abs() <= rat(max_inf)) {
            return Some(h);
        }
    }
    None
}
