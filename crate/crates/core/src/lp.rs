//! Standard-form programs `max { wx : Ax = b, l <= x <= u }` and an exact
//! bounded-variable primal simplex.
//!
//! The simplex works on a dense tableau over [`Rational`]. Variables are
//! shifted to `0 <= y <= u - l`; phase one drives artificial variables to
//! zero, phase two optimizes `w`. Bland's smallest-index rule picks both the
//! entering and the leaving variable (a bound flip of the entering variable
//! competes in the ratio test under its own index), so no cycling occurs.

use num_traits::{Signed, Zero};

use crate::arith::{RatMatrix, RatVector, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpInstance {
    a: RatMatrix,
    b: RatVector,
    l: RatVector,
    u: RatVector,
    w: RatVector,
}

impl LpInstance {
    /// Validates dimensions, integrality of all data and `l <= u`.
    pub fn new(a: RatMatrix, b: RatVector, l: RatVector, u: RatVector, w: RatVector) -> Result<Self> {
        let (m, n) = (a.nrows(), a.ncols());
        for (name, len, want) in [("b", b.len(), m), ("l", l.len(), n), ("u", u.len(), n), ("w", w.len(), n)] {
            if len != want {
                return Err(Error::Dimension(format!("{name} has length {len}, expected {want}")));
            }
        }
        if !a.is_integral() {
            return Err(Error::InvalidInstance("A must be integral".into()));
        }
        for (name, v) in [("b", &b), ("l", &l), ("u", &u), ("w", &w)] {
            if !v.is_integral() {
                return Err(Error::InvalidInstance(format!("{name} must be integral")));
            }
        }
        if let Some(i) = (0..n).find(|&i| l[i] > u[i]) {
            return Err(Error::InvalidInstance(format!("l[{i}] > u[{i}]")));
        }
        Ok(LpInstance { a, b, l, u, w })
    }

    pub fn a(&self) -> &RatMatrix {
        &self.a
    }

    pub fn b(&self) -> &RatVector {
        &self.b
    }

    pub fn lower(&self) -> &RatVector {
        &self.l
    }

    pub fn upper(&self) -> &RatVector {
        &self.u
    }

    pub fn w(&self) -> &RatVector {
        &self.w
    }

    pub fn nvars(&self) -> usize {
        self.a.ncols()
    }

    pub fn nrows(&self) -> usize {
        self.a.nrows()
    }

    pub fn objective(&self, x: &RatVector) -> Rational {
        self.w.dot(x)
    }

    /// Same data with different (integral) bounds.
    pub fn with_bounds(&self, l: RatVector, u: RatVector) -> Result<Self> {
        Self::new(self.a.clone(), self.b.clone(), l, u, self.w.clone())
    }

    pub fn within_bounds(&self, x: &RatVector) -> bool {
        x.len() == self.nvars() && (0..x.len()).all(|i| self.l[i] <= x[i] && x[i] <= self.u[i])
    }

    /// `Ax = b` and `l <= x <= u`, and `x` integral when `integral` is set.
    pub fn is_feasible(&self, x: &RatVector, integral: bool) -> bool {
        self.within_bounds(x) && self.a.mul_vec(x) == self.b && (!integral || x.is_integral())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub status: SolveStatus,
    /// Optimal vertex; empty when infeasible.
    pub x: RatVector,
    pub objective: Rational,
    /// Simplex iterations over both phases, bound flips included.
    pub iterations: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

pub fn solve_lp(inst: &LpInstance) -> LpSolution {
    let res = maximize(inst.a(), inst.b(), inst.lower(), inst.upper(), inst.w());
    match res.x {
        Some(x) => LpSolution {
            objective: inst.objective(&x),
            status: SolveStatus::Optimal,
            x,
            iterations: res.iterations,
        },
        None => LpSolution {
            status: SolveStatus::Infeasible,
            x: RatVector::default(),
            objective: Rational::zero(),
            iterations: res.iterations,
        },
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Status {
    Basic,
    AtLower,
    AtUpper,
}

struct Tableau {
    rows: usize,
    cols: usize,
    t: Vec<Rational>,
    /// current value of the basic variable of each row
    beta: Vec<Rational>,
    basis: Vec<usize>,
    status: Vec<Status>,
    upper: Vec<Option<Rational>>,
    /// excluded columns never enter the basis
    excluded: Vec<bool>,
    iterations: usize,
}

struct Outcome {
    x: Option<RatVector>,
    iterations: usize,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> &Rational {
        &self.t[i * self.cols + j]
    }

    fn value(&self, j: usize) -> Rational {
        match self.status[j] {
            Status::AtLower => Rational::zero(),
            Status::AtUpper => self.upper[j].clone().expect("finite upper bound"),
            Status::Basic => {
                let row = self.basis.iter().position(|&b| b == j).expect("basic row");
                self.beta[row].clone()
            }
        }
    }

    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        (0..self.cols)
            .map(|j| {
                if self.status[j] == Status::Basic {
                    return Rational::zero();
                }
                let mut d = cost[j].clone();
                for i in 0..self.rows {
                    let cb = &cost[self.basis[i]];
                    if !cb.is_zero() {
                        d -= cb * self.at(i, j);
                    }
                }
                d
            })
            .collect()
    }

    /// Runs primal simplex iterations maximizing `cost` until optimal.
    fn optimize(&mut self, cost: &[Rational]) {
        loop {
            let d = self.reduced_costs(cost);
            let entering = (0..self.cols).find(|&j| {
                if self.excluded[j] {
                    return false;
                }
                match self.status[j] {
                    Status::AtLower => d[j].is_positive() && self.upper[j].as_ref().is_none_or(|u| !u.is_zero()),
                    Status::AtUpper => d[j].is_negative(),
                    Status::Basic => false,
                }
            });
            let Some(j) = entering else { return };
            self.iterations += 1;
            let increasing = self.status[j] == Status::AtLower;

            // (step length, leaving variable, leaving row, leaves at upper)
            let mut best: Option<(Rational, usize, Option<usize>, bool)> =
                self.upper[j].clone().map(|u| (u, j, None, increasing));
            for i in 0..self.rows {
                let tij = self.at(i, j);
                if tij.is_zero() {
                    continue;
                }
                // rate of change of the basic variable per unit step
                let rate = if increasing { -tij } else { tij.clone() };
                let bi = self.basis[i];
                let cand = if rate.is_negative() {
                    Some((&self.beta[i] / -&rate, false))
                } else {
                    self.upper[bi].as_ref().map(|u| ((u - &self.beta[i]) / &rate, true))
                };
                let Some((theta, to_upper)) = cand else { continue };
                let better = match &best {
                    None => true,
                    Some((bt, bv, _, _)) => theta < *bt || (theta == *bt && bi < *bv),
                };
                if better {
                    best = Some((theta, bi, Some(i), to_upper));
                }
            }
            let (theta, _, row, to_upper) = best.expect("finite bounds block every direction");

            for i in 0..self.rows {
                let tij = self.at(i, j).clone();
                if tij.is_zero() {
                    continue;
                }
                let delta = &theta * &tij;
                if increasing {
                    self.beta[i] -= delta;
                } else {
                    self.beta[i] += delta;
                }
            }
            match row {
                None => {
                    self.status[j] = if increasing { Status::AtUpper } else { Status::AtLower };
                }
                Some(r) => {
                    let entering_value = if increasing {
                        theta
                    } else {
                        self.upper[j].clone().expect("at upper implies finite") - theta
                    };
                    let leaving = self.basis[r];
                    self.status[leaving] = if to_upper { Status::AtUpper } else { Status::AtLower };
                    self.pivot(r, j);
                    self.beta[r] = entering_value;
                    self.basis[r] = j;
                    self.status[j] = Status::Basic;
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let cols = self.cols;
        let inv = self.at(r, j).recip();
        for k in 0..cols {
            let v = &self.t[r * cols + k] * &inv;
            self.t[r * cols + k] = v;
        }
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.at(i, j).clone();
            if f.is_zero() {
                continue;
            }
            for k in 0..cols {
                let delta = &f * &self.t[r * cols + k];
                self.t[i * cols + k] -= delta;
            }
        }
    }
}

/// Maximizes `cost · x` over `{Ax = b, lo <= x <= hi}` with finite bounds.
fn maximize(a: &RatMatrix, b: &RatVector, lo: &RatVector, hi: &RatVector, cost: &RatVector) -> Outcome {
    let (m, n) = (a.nrows(), a.ncols());
    let cols = n + m;
    // shifted right-hand side b - A lo, rows negated to make it nonnegative
    let shifted = b - &a.mul_vec(lo);
    let mut t = Vec::with_capacity(m * cols);
    let mut beta = Vec::with_capacity(m);
    for i in 0..m {
        let flip = shifted[i].is_negative();
        for j in 0..n {
            let v = a.get(i, j).clone();
            t.push(if flip { -v } else { v });
        }
        for k in 0..m {
            t.push(if k == i { Rational::from_integer(1.into()) } else { Rational::zero() });
        }
        beta.push(shifted[i].abs());
    }
    let mut upper: Vec<Option<Rational>> = (0..n).map(|j| Some(&hi[j] - &lo[j])).collect();
    upper.extend((0..m).map(|_| None));
    let mut status = vec![Status::AtLower; n];
    status.extend(vec![Status::Basic; m]);
    let mut tab = Tableau {
        rows: m,
        cols,
        t,
        beta,
        basis: (n..cols).collect(),
        status,
        upper,
        excluded: vec![false; cols],
        iterations: 0,
    };

    let mut phase1 = vec![Rational::zero(); cols];
    for c in phase1.iter_mut().skip(n) {
        *c = Rational::from_integer((-1).into());
    }
    tab.optimize(&phase1);
    let infeasibility: Rational = (n..cols).map(|j| tab.value(j)).sum();
    if infeasibility.is_positive() {
        return Outcome {
            x: None,
            iterations: tab.iterations,
        };
    }

    // Artificials are pinned at zero; basic ones leave through degenerate pivots.
    for j in n..cols {
        tab.upper[j] = Some(Rational::zero());
        if tab.status[j] != Status::Basic {
            tab.excluded[j] = true;
        }
    }
    let mut phase2: Vec<Rational> = cost.iter().cloned().collect();
    phase2.extend((0..m).map(|_| Rational::zero()));
    tab.optimize(&phase2);

    let x = RatVector::new((0..n).map(|j| &lo[j] + tab.value(j)).collect());
    Outcome {
        x: Some(x),
        iterations: tab.iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rank};

    pub(crate) fn example2() -> LpInstance {
        LpInstance::new(
            RatMatrix::from_i64_rows(&[
                [2, 1, 0, 1, 2, 2, 1],
                [0, 1, 1, 1, 0, 1, 0],
                [2, 2, 1, 0, 0, 1, 1],
            ]),
            RatVector::from_i64(&[0, 0, 0]),
            RatVector::from_i64(&[-5, -5, 0, -5, 0, -5, 0]),
            RatVector::from_i64(&[0, 0, 9, 0, 9, 0, 9]),
            RatVector::from_i64(&[1, 1, -1, 1, -1, 1, -1]),
        )
        .unwrap()
    }

    #[test]
    fn feasibility_checks() {
        let inst = example2();
        assert!(inst.is_feasible(&RatVector::from_i64(&[-2, -5, 9, -1, 4, -3, 8]), true));
        assert!(!inst.is_feasible(inst.upper(), false));
        let zero = LpInstance::new(
            RatMatrix::zeros(1, 2),
            RatVector::from_i64(&[0]),
            RatVector::from_i64(&[-1, 0]),
            RatVector::from_i64(&[1, 0]),
            RatVector::from_i64(&[0, 0]),
        )
        .unwrap();
        assert!(zero.is_feasible(&RatVector::zeros(2), true));
        let half = RatVector::new(vec![crate::arith::ratio(1, 2), rat(0)]);
        assert!(zero.is_feasible(&half, false));
        assert!(!zero.is_feasible(&half, true));
    }

    #[test]
    fn worked_example_optimum_is_origin() {
        let sol = solve_lp(&example2());
        assert!(sol.is_optimal());
        assert_eq!(sol.objective, rat(0));
        assert_eq!(sol.x, RatVector::zeros(7));
    }

    #[test]
    fn box_optimum_without_constraints() {
        let inst = LpInstance::new(
            RatMatrix::zeros(1, 2),
            RatVector::from_i64(&[0]),
            RatVector::from_i64(&[0, 0]),
            RatVector::from_i64(&[3, 3]),
            RatVector::from_i64(&[1, -1]),
        )
        .unwrap();
        let sol = solve_lp(&inst);
        assert_eq!(sol.x, RatVector::from_i64(&[3, 0]));
        assert_eq!(sol.objective, rat(3));
    }

    #[test]
    fn infeasible_equality() {
        let inst = LpInstance::new(
            RatMatrix::from_i64_rows(&[[1]]),
            RatVector::from_i64(&[1]),
            RatVector::from_i64(&[0]),
            RatVector::from_i64(&[0]),
            RatVector::from_i64(&[1]),
        )
        .unwrap();
        assert_eq!(solve_lp(&inst).status, SolveStatus::Infeasible);
    }

    #[test]
    fn redundant_rows_are_handled() {
        // second row duplicates the first; optimum x = (2, 0, 1)
        let inst = LpInstance::new(
            RatMatrix::from_i64_rows(&[[1, 1, 1], [2, 2, 2]]),
            RatVector::from_i64(&[3, 6]),
            RatVector::from_i64(&[0, 0, 0]),
            RatVector::from_i64(&[2, 2, 2]),
            RatVector::from_i64(&[3, 1, 2]),
        )
        .unwrap();
        let sol = solve_lp(&inst);
        assert_eq!(sol.objective, rat(8));
        assert!(inst.is_feasible(&sol.x, false));
        let strict = (0..3).filter(|&i| inst.lower()[i] < sol.x[i] && sol.x[i] < inst.upper()[i]).count();
        assert!(strict <= rank(inst.a()));
    }

    #[test]
    fn rejects_bad_instances() {
        let bad_bounds = LpInstance::new(
            RatMatrix::zeros(0, 1),
            RatVector::default(),
            RatVector::from_i64(&[1]),
            RatVector::from_i64(&[0]),
            RatVector::from_i64(&[0]),
        );
        assert!(matches!(bad_bounds, Err(Error::InvalidInstance(_))));
        let bad_len = LpInstance::new(
            RatMatrix::zeros(1, 2),
            RatVector::from_i64(&[0]),
            RatVector::from_i64(&[0]),
            RatVector::from_i64(&[0, 0]),
            RatVector::from_i64(&[0, 0]),
        );
        assert!(matches!(bad_len, Err(Error::Dimension(_))));
    }
}
