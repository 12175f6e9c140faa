//! Integer programming: an exact branch-and-bound oracle, extraction of
//! Graver-elements conformal to a kernel vector, and exhaustive oracles.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{int_to_rat, RatMatrix, RatVector, Rational};
use crate::circuits::is_conformal;
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LpInstance, SolveStatus};

/// Default number of candidate points a brute-force oracle may visit.
pub const DEFAULT_BRUTE_FORCE_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IpSolution {
    pub status: SolveStatus,
    /// Optimal integer point; empty when infeasible.
    pub x: RatVector,
    pub objective: Rational,
}

impl IpSolution {
    fn infeasible() -> Self {
        IpSolution {
            status: SolveStatus::Infeasible,
            x: RatVector::default(),
            objective: Rational::zero(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

struct Node {
    bound: Rational,
    depth: usize,
    seq: usize,
    inst: LpInstance,
    x: RatVector,
}

// Best bound first, then deeper nodes, then earlier creation.
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .cmp(&other.bound)
            .then(self.depth.cmp(&other.depth))
            .then(other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

/// Exact integer optimum by best-bound branch-and-bound over LP relaxations,
/// branching on the lowest-index fractional coordinate.
pub fn solve_ip(inst: &LpInstance) -> IpSolution {
    let mut seq = 0;
    let mut heap = BinaryHeap::new();
    let root = solve_lp(inst);
    if !root.is_optimal() {
        return IpSolution::infeasible();
    }
    heap.push(Node {
        bound: root.objective,
        depth: 0,
        seq,
        inst: inst.clone(),
        x: root.x,
    });
    let mut incumbent: Option<(RatVector, Rational)> = None;

    while let Some(node) = heap.pop() {
        if let Some((_, best)) = &incumbent {
            // the objective is integral on integer points
            if int_to_rat(&node.bound.floor().to_integer()) <= *best {
                break;
            }
        }
        let Some(j) = (0..node.x.len()).find(|&i| !node.x[i].is_integer()) else {
            let obj = node.bound.clone();
            if incumbent.as_ref().is_none_or(|(_, best)| obj > *best) {
                incumbent = Some((node.x, obj));
            }
            continue;
        };
        let floor = node.x[j].floor();
        let ceil = node.x[j].ceil();
        let mut down_u = node.inst.upper().clone();
        down_u.set(j, floor);
        let mut up_l = node.inst.lower().clone();
        up_l.set(j, ceil);
        let children = [
            node.inst.with_bounds(node.inst.lower().clone(), down_u),
            node.inst.with_bounds(up_l, node.inst.upper().clone()),
        ];
        for child in children.into_iter().flatten() {
            let sol = solve_lp(&child);
            if !sol.is_optimal() {
                continue;
            }
            seq += 1;
            heap.push(Node {
                bound: sol.objective,
                depth: node.depth + 1,
                seq,
                inst: child,
                x: sol.x,
            });
        }
    }
    match incumbent {
        Some((x, objective)) => IpSolution {
            status: SolveStatus::Optimal,
            x,
            objective,
        },
        None => IpSolution::infeasible(),
    }
}

fn integer_kernel_input(a: &RatMatrix, h: &RatVector) -> Result<Vec<BigInt>> {
    if h.len() != a.ncols() {
        return Err(Error::Dimension(format!(
            "vector of length {} for a matrix with {} columns",
            h.len(),
            a.ncols()
        )));
    }
    if !a.is_integral() {
        return Err(Error::Precondition("A must be integral".into()));
    }
    let ints = h
        .to_ints()
        .ok_or_else(|| Error::Precondition("h must be integral".into()))?;
    if h.is_zero() {
        return Err(Error::Precondition("h must be nonzero".into()));
    }
    if !a.mul_vec(h).is_zero() {
        return Err(Error::Precondition("h is not in the kernel of A".into()));
    }
    Ok(ints)
}

/// `sign(h_i)` with the convention `+1` on zero entries.
fn orientation(h: &[BigInt]) -> Vec<Rational> {
    h.iter()
        .map(|v| {
            if v.is_negative() {
                -Rational::one()
            } else {
                Rational::one()
            }
        })
        .collect()
}

/// `A diag(σ)`: the matrix in the orthant-flipped variables `y = σx`.
fn oriented_matrix(a: &RatMatrix, sigma: &[Rational]) -> Vec<Vec<Rational>> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a.get(i, j) * &sigma[j]).collect())
        .collect()
}

fn unflip(y: &RatVector, sigma: &[Rational]) -> RatVector {
    RatVector::new((0..sigma.len()).map(|i| &y[i] * &sigma[i]).collect())
}

/// A Graver-element conformal to the integer kernel vector `h`: an optimum of
/// `min { ||x||_1 : Ax = 0, ||x||_1 >= 1, x ⪯ h, x integral }`.
///
/// The norm constraint is one extra row `Σ y_i - s = 1` with a bounded slack.
pub fn extract_graver(a: &RatMatrix, h: &RatVector) -> Result<RatVector> {
    let ints = integer_kernel_input(a, h)?;
    let sigma = orientation(&ints);
    let (m, n) = (a.nrows(), a.ncols());
    let norm: BigInt = ints.iter().map(|v| v.abs()).sum();

    let mut rows: Vec<Vec<Rational>> = oriented_matrix(a, &sigma)
        .into_iter()
        .map(|mut r| {
            r.push(Rational::zero());
            r
        })
        .collect();
    let mut norm_row = vec![Rational::one(); n];
    norm_row.push(-Rational::one());
    rows.push(norm_row);
    let matrix = RatMatrix::from_rows(rows, n + 1)?;

    let mut b = vec![Rational::zero(); m];
    b.push(Rational::one());
    let l = RatVector::zeros(n + 1);
    let mut u: Vec<Rational> = ints.iter().map(|v| int_to_rat(&v.abs())).collect();
    u.push(int_to_rat(&(norm - 1)));
    let mut w = vec![-Rational::one(); n];
    w.push(Rational::zero());

    let inst = LpInstance::new(matrix, RatVector::new(b), l, RatVector::new(u), RatVector::new(w))?;
    let sol = solve_ip(&inst);
    if !sol.is_optimal() {
        return Err(Error::Internal("auxiliary program infeasible although h is feasible".into()));
    }
    let y = RatVector::new(sol.x.entries()[..n].to_vec());
    Ok(unflip(&y, &sigma))
}

/// Same contract as [`extract_graver`], solved as one standard-form program
/// per support coordinate `k` (with `σ_k x_k >= 1`), keeping the smallest norm
/// and the lowest `k` on ties.
pub fn extract_graver_standard_form(a: &RatMatrix, h: &RatVector) -> Result<RatVector> {
    let ints = integer_kernel_input(a, h)?;
    let sigma = orientation(&ints);
    let (m, n) = (a.nrows(), a.ncols());
    let matrix = RatMatrix::from_rows(oriented_matrix(a, &sigma), n)?;
    let b = RatVector::zeros(m);
    let u = RatVector::new(ints.iter().map(|v| int_to_rat(&v.abs())).collect());
    let w = RatVector::new(vec![-Rational::one(); n]);

    let mut best: Option<(Rational, RatVector)> = None;
    for k in h.support() {
        let mut l = RatVector::zeros(n);
        l.set(k, Rational::one());
        let inst = LpInstance::new(matrix.clone(), b.clone(), l, u.clone(), w.clone())?;
        let sol = solve_ip(&inst);
        if !sol.is_optimal() {
            continue;
        }
        let norm = -sol.objective;
        if best.as_ref().is_none_or(|(bn, _)| norm < *bn) {
            best = Some((norm, sol.x));
        }
    }
    let (_, y) = best.ok_or_else(|| Error::Internal("no coordinate program was feasible".into()))?;
    Ok(unflip(&y, &sigma))
}

/// Product of `(span_i + 1)`, compared against `budget`.
fn check_box_budget(spans: &[BigInt], budget: u64) -> Result<()> {
    let needed: BigInt = spans.iter().map(|s| s + 1).product();
    if needed > BigInt::from(budget) {
        return Err(Error::BudgetExceeded {
            needed: needed.to_string(),
            budget,
        });
    }
    Ok(())
}

/// Decides Graver-membership by scanning every integer vector in the
/// conformal box of `g` for a nonzero kernel vector strictly below `g`.
pub fn is_graver_element(a: &RatMatrix, g: &RatVector, budget: u64) -> Result<bool> {
    if g.len() != a.ncols() {
        return Err(Error::Dimension("vector length does not match A".into()));
    }
    let Some(ints) = g.to_ints() else {
        return Ok(false);
    };
    if g.is_zero() || !a.mul_vec(g).is_zero() {
        return Ok(false);
    }
    let spans: Vec<BigInt> = ints.iter().map(|v| v.abs()).collect();
    check_box_budget(&spans, budget)?;

    let support = g.support();
    let columns: Vec<RatVector> = support.iter().map(|&j| a.column(j)).collect();
    let limits: Vec<i64> = support
        .iter()
        .map(|&j| spans[j].to_i64().expect("within budget"))
        .collect();
    let signs: Vec<Rational> = support
        .iter()
        .map(|&j| if ints[j].is_negative() { -Rational::one() } else { Rational::one() })
        .collect();

    // odometer over f restricted to supp(g), tracking A f incrementally
    let mut counts = vec![0i64; support.len()];
    let mut residual = RatVector::zeros(a.nrows());
    loop {
        let mut k = 0;
        loop {
            if k == counts.len() {
                return Ok(true);
            }
            if counts[k] < limits[k] {
                counts[k] += 1;
                residual = &residual + &columns[k].scale(&signs[k]);
                break;
            }
            residual = &residual - &columns[k].scale(&(&signs[k] * Rational::from_integer(counts[k].into())));
            counts[k] = 0;
            k += 1;
        }
        let is_top = counts.iter().zip(&limits).all(|(c, l)| c == l);
        if !is_top && residual.is_zero() {
            return Ok(false);
        }
    }
}

/// Exhaustive integer optimum over the box `[l, u]`; ties keep the first
/// point in lexicographic scan order.
pub fn brute_force_ip(inst: &LpInstance, budget: u64) -> Result<IpSolution> {
    let n = inst.nvars();
    let lo: Vec<BigInt> = inst.lower().iter().map(|v| v.ceil().to_integer()).collect();
    let hi: Vec<BigInt> = inst.upper().iter().map(|v| v.floor().to_integer()).collect();
    if (0..n).any(|i| lo[i] > hi[i]) {
        return Ok(IpSolution::infeasible());
    }
    let spans: Vec<BigInt> = (0..n).map(|i| &hi[i] - &lo[i]).collect();
    check_box_budget(&spans, budget)?;

    let a = inst.a();
    let columns: Vec<RatVector> = (0..n).map(|j| a.column(j)).collect();
    let mut x: Vec<BigInt> = lo.clone();
    let mut point = RatVector::from_ints(&x);
    let mut residual = &a.mul_vec(&point) - inst.b();
    let mut objective = inst.objective(&point);
    let mut best: Option<(RatVector, Rational)> = None;
    loop {
        if residual.is_zero() && best.as_ref().is_none_or(|(_, b)| objective > *b) {
            best = Some((point.clone(), objective.clone()));
        }
        // advance the odometer, last coordinate fastest
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(match best {
                    Some((x, objective)) => IpSolution {
                        status: SolveStatus::Optimal,
                        x,
                        objective,
                    },
                    None => IpSolution::infeasible(),
                });
            }
            k -= 1;
            if x[k] < hi[k] {
                x[k] += 1;
                point.set(k, int_to_rat(&x[k]));
                residual = &residual + &columns[k];
                objective += &inst.w()[k];
                break;
            }
            let back = int_to_rat(&(&x[k] - &lo[k]));
            residual = &residual - &columns[k].scale(&back);
            objective -= &inst.w()[k] * &back;
            x[k] = lo[k].clone();
            point.set(k, int_to_rat(&x[k]));
        }
    }
}

/// Checks the output contract shared by both extraction routes.
pub fn is_conformal_kernel_vector(a: &RatMatrix, g: &RatVector, h: &RatVector) -> bool {
    !g.is_zero() && g.is_integral() && a.mul_vec(g).is_zero() && is_conformal(g, h).unwrap_or(false)
}
