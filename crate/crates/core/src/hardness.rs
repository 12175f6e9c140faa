//! Subset-sum reductions to Graver-membership and Graver-walk instances,
//! a brute-force subset-sum oracle, and seeded instance generators.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{int_to_rat, rat, RatMatrix, RatVector, Rational};
use crate::error::{Error, Result};
use crate::lp::LpInstance;

/// Default cap on the `2^r` subsets scanned by [`brute_force_subset_sum`].
pub const DEFAULT_SUBSET_BUDGET: u64 = 1 << 24;

/// Positive integers `a0; a_1..a_r`: is some subset of the `a_i` summing to `a0`?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetSumInstance {
    a0: BigInt,
    a: Vec<BigInt>,
}

impl SubsetSumInstance {
    pub fn new(a0: BigInt, a: Vec<BigInt>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidInstance("subset-sum needs at least one item".into()));
        }
        if a0 < BigInt::one() || a.iter().any(|v| *v < BigInt::one()) {
            return Err(Error::InvalidInstance("subset-sum entries must be positive".into()));
        }
        Ok(SubsetSumInstance { a0, a })
    }

    pub fn from_u64(a0: u64, a: &[u64]) -> Result<Self> {
        Self::new(BigInt::from(a0), a.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn target(&self) -> &BigInt {
        &self.a0
    }

    pub fn items(&self) -> &[BigInt] {
        &self.a
    }

    /// The single-row matrix `[a_1, …, a_r, -a0, a0 - Σa_i]`.
    pub fn row(&self) -> RatMatrix {
        let total: BigInt = self.a.iter().sum();
        let mut row: Vec<Rational> = self.a.iter().map(int_to_rat).collect();
        row.push(int_to_rat(&-&self.a0));
        row.push(int_to_rat(&(&self.a0 - total)));
        let n = row.len();
        RatMatrix::from_rows(vec![row], n).expect("single row")
    }
}

/// `(A, 1)`: the all-ones vector fails to be a Graver-element of `A` exactly
/// when the subset-sum instance is a YES instance.
pub fn reduce_to_graver_instance(s: &SubsetSumInstance) -> (RatMatrix, RatVector) {
    let a = s.row();
    let ones = RatVector::new(vec![rat(1); a.ncols()]);
    (a, ones)
}

/// The walk instance `b = 0, l = x0 = 0, u = w = 1` over the same row, with
/// the all-ones vector as its unique optimum. Returns `(instance, x0, x̄)`.
pub fn reduce_to_walk_instance(s: &SubsetSumInstance) -> (LpInstance, RatVector, RatVector) {
    let (a, ones) = reduce_to_graver_instance(s);
    let n = a.ncols();
    let zeros = RatVector::zeros(n);
    let inst = LpInstance::new(a, RatVector::zeros(1), zeros.clone(), ones.clone(), ones.clone())
        .expect("reduction data is consistent");
    (inst, zeros, ones)
}

/// First subset (0-based item indices) in bitmask order hitting `a0`.
pub fn brute_force_subset_sum(s: &SubsetSumInstance, budget: u64) -> Result<Option<Vec<usize>>> {
    let r = s.a.len();
    if r >= 64 || (1u64 << r) > budget {
        return Err(Error::BudgetExceeded {
            needed: (BigInt::one() << r).to_string(),
            budget,
        });
    }
    for mask in 1u64..(1u64 << r) {
        let mut total = BigInt::zero();
        for (i, ai) in s.a.iter().enumerate() {
            if mask >> i & 1 == 1 {
                total += ai;
            }
        }
        if total == s.a0 {
            return Ok(Some((0..r).filter(|i| mask >> i & 1 == 1).collect()));
        }
    }
    Ok(None)
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn reachable_sums(items: &[u64]) -> Vec<bool> {
    let total: u64 = items.iter().sum();
    let mut reach = vec![false; total as usize + 1];
    reach[0] = true;
    for &v in items {
        for s in (v as usize..reach.len()).rev() {
            if reach[s - v as usize] {
                reach[s] = true;
            }
        }
    }
    reach
}

/// A random instance with `r` items drawn uniformly from `1..=max_item`.
///
/// YES instances take `a0` as the sum of a random nonempty subset. NO
/// instances take `a0` uniformly among the values in `1..=Σa_i` that no subset
/// reaches; item vectors without such a value are redrawn.
pub fn random_subset_sum<R: Rng>(rng: &mut R, r: usize, max_item: u64, yes: bool) -> SubsetSumInstance {
    assert!(r >= 1 && max_item >= 1);
    assert!(yes || max_item >= 2, "every target is reachable with unit items");
    loop {
        let items: Vec<u64> = (0..r).map(|_| rng.gen_range(1..=max_item)).collect();
        let a0 = if yes {
            let mask = rng.gen_range(1u64..(1u64 << r));
            (0..r).filter(|i| mask >> i & 1 == 1).map(|i| items[i]).sum()
        } else {
            let reach = reachable_sums(&items);
            let misses: Vec<u64> = (1..reach.len()).filter(|&s| !reach[s]).map(|s| s as u64).collect();
            match misses.choose(rng) {
                Some(&a0) => a0,
                None => continue,
            }
        };
        return SubsetSumInstance::from_u64(a0, &items).expect("positive by construction");
    }
}

/// `count` instances alternating YES and NO (starting with YES), item count
/// uniform in `1..=max_r`.
pub fn subset_sum_sample(seed: u64, count: usize, max_r: usize, max_item: u64) -> Vec<(SubsetSumInstance, bool)> {
    let mut rng = seeded_rng(seed);
    (0..count)
        .map(|k| {
            let yes = k % 2 == 0;
            let r = rng.gen_range(1..=max_r);
            (random_subset_sum(&mut rng, r, max_item, yes), yes)
        })
        .collect()
}

/// Shape of a random instance with an integral feasible point built in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomInstanceConfig {
    pub rows: usize,
    pub cols: usize,
    /// entries of `A` are uniform in `[-max_entry, max_entry]`
    pub max_entry: i64,
    /// both bounds are drawn from this range, then ordered
    pub bound_range: (i64, i64),
    /// entries of `w` are uniform in `[-max_weight, max_weight]`
    pub max_weight: i64,
}

impl Default for RandomInstanceConfig {
    fn default() -> Self {
        RandomInstanceConfig {
            rows: 2,
            cols: 5,
            max_entry: 2,
            bound_range: (-5, 9),
            max_weight: 3,
        }
    }
}

/// A random instance together with an integer point `x0` in its box; `b` is
/// set to `A x0`, so `x0` is feasible (integrally so).
pub fn random_feasible_instance<R: Rng>(rng: &mut R, cfg: &RandomInstanceConfig) -> (LpInstance, RatVector) {
    let (m, n) = (cfg.rows, cfg.cols);
    let (lo, hi) = cfg.bound_range;
    assert!(lo <= hi);
    let rows: Vec<Vec<Rational>> = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| rat(rng.gen_range(-cfg.max_entry..=cfg.max_entry)))
                .collect()
        })
        .collect();
    let a = RatMatrix::from_rows(rows, n).expect("rectangular");
    let mut l = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    let mut x0 = Vec::with_capacity(n);
    for _ in 0..n {
        let p = rng.gen_range(lo..=hi);
        let q = rng.gen_range(lo..=hi);
        let (li, ui) = (p.min(q), p.max(q));
        l.push(rat(li));
        u.push(rat(ui));
        x0.push(rat(rng.gen_range(li..=ui)));
    }
    let w: Vec<Rational> = (0..n)
        .map(|_| rat(rng.gen_range(-cfg.max_weight..=cfg.max_weight)))
        .collect();
    let x0 = RatVector::new(x0);
    let b = a.mul_vec(&x0);
    let inst = LpInstance::new(a, b, RatVector::new(l), RatVector::new(u), RatVector::new(w))
        .expect("generated data is consistent");
    (inst, x0)
}
