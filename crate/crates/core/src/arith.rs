//! Exact rational scalars, vectors and matrices.
//!
//! Everything here is arbitrary precision. Vectors and matrices are plain
//! dense containers over [`Rational`]; the linear algebra is Gauss-Jordan
//! elimination over the rationals plus a fraction-free (Bareiss) determinant
//! for integer matrices.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Canonical arbitrary-precision rational (denominator positive, reduced).
pub type Rational = BigRational;

/// Default number of square-submatrix determinants `delta_exact` may evaluate.
pub const DEFAULT_DELTA_BUDGET: u64 = 1_000_000;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_to_rat(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// `ceil(ln q)` for a positive rational `q`.
///
/// Uses bit lengths to keep the logarithm finite for huge operands. `e^k` is
/// irrational for every integer `k != 0`, so `q` never sits exactly on a
/// boundary except at `q = 1`, which is handled exactly.
pub fn ceil_ln(q: &Rational) -> i64 {
    assert!(q.is_positive(), "ceil_ln of a non-positive value");
    if q.is_one() {
        return 0;
    }
    let ln = ln_big(q.numer()) - ln_big(q.denom());
    ln.ceil() as i64
}

fn ln_big(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    top.to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct RatVector(Vec<Rational>);

impl RatVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        RatVector(entries)
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        RatVector(entries.iter().map(|&v| rat(v)).collect())
    }

    pub fn from_ints(entries: &[BigInt]) -> Self {
        RatVector(entries.iter().map(int_to_rat).collect())
    }

    pub fn zeros(n: usize) -> Self {
        RatVector(vec![Rational::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rational::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    pub fn set(&mut self, i: usize, value: Rational) {
        self.0[i] = value;
    }

    /// Indices of the nonzero entries, increasing.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|v| v.is_integer())
    }

    pub fn dot(&self, other: &RatVector) -> Rational {
        assert_eq!(self.len(), other.len(), "dot product length mismatch");
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn l1_norm(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, v| acc + v.abs())
    }

    pub fn scale(&self, factor: &Rational) -> RatVector {
        RatVector(self.0.iter().map(|v| v * factor).collect())
    }

    /// Integer entries as `BigInt`s, or `None` if some entry is fractional.
    pub fn to_ints(&self) -> Option<Vec<BigInt>> {
        self.0
            .iter()
            .map(|v| v.is_integer().then(|| v.to_integer()))
            .collect()
    }

    /// Splits a nonzero vector as `self = content * p` with `p` an integer
    /// vector of coprime entries and `content > 0`. The signs of `p` follow
    /// the signs of `self`.
    pub fn primitive_split(&self) -> Option<(RatVector, Rational)> {
        if self.is_zero() {
            return None;
        }
        let lcm_den = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let scaled: Vec<BigInt> = self
            .0
            .iter()
            .map(|v| v.numer() * (&lcm_den / v.denom()))
            .collect();
        let g = scaled.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let prim: Vec<BigInt> = scaled.iter().map(|v| v / &g).collect();
        let content = Rational::new(g, lcm_den);
        Some((RatVector::from_ints(&prim), content))
    }

    /// The primitive integer vector with the same direction as `self`.
    pub fn primitive(&self) -> Option<RatVector> {
        self.primitive_split().map(|(p, _)| p)
    }

    /// Primitive representative of the line through `self`, oriented so that
    /// the first nonzero entry is positive.
    pub fn canonical_primitive(&self) -> Option<RatVector> {
        let p = self.primitive()?;
        let first_negative = p.0.iter().find(|v| !v.is_zero())?.is_negative();
        Some(if first_negative { -&p } else { p })
    }
}

impl Index<usize> for RatVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl From<Vec<Rational>> for RatVector {
    fn from(v: Vec<Rational>) -> Self {
        RatVector(v)
    }
}

impl<'a> Add<&'a RatVector> for &'a RatVector {
    type Output = RatVector;
    fn add(self, rhs: &'a RatVector) -> RatVector {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        RatVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a RatVector> for &'a RatVector {
    type Output = RatVector;
    fn sub(self, rhs: &'a RatVector) -> RatVector {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        RatVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RatVector {
    type Output = RatVector;
    fn neg(self) -> RatVector {
        RatVector(self.0.iter().map(|v| -v).collect())
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(", "))
    }
}

/// Dense row-major rational matrix with fixed dimensions.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(RatMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        let m = rows.len();
        let mut data = Vec::with_capacity(m * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(RatMatrix { rows: m, cols, data })
    }

    /// Builds an integer matrix from literal rows. Panics on ragged input.
    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let rows = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| rat(v)).collect())
            .collect();
        Self::from_rows(rows, cols).expect("ragged matrix literal")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> RatVector {
        RatVector((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    /// The submatrix `A^J` of the listed columns, in the listed order.
    pub fn select_columns(&self, columns: &[usize]) -> RatMatrix {
        let mut data = Vec::with_capacity(self.rows * columns.len());
        for i in 0..self.rows {
            for &j in columns {
                data.push(self.get(i, j).clone());
            }
        }
        RatMatrix {
            rows: self.rows,
            cols: columns.len(),
            data,
        }
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        RatMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// `A x`. Panics if `x.len() != ncols`.
    pub fn mul_vec(&self, x: &RatVector) -> RatVector {
        assert_eq!(x.len(), self.cols, "matrix-vector length mismatch");
        RatVector(
            (0..self.rows)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .zip(x.iter())
                        .filter(|(_, v)| !v.is_zero())
                        .fold(Rational::zero(), |acc, (a, v)| acc + a * v)
                })
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|v| v.is_integer())
    }

    pub fn max_abs_entry(&self) -> Rational {
        self.data
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "[{}]", self.row(i).iter().join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: RatMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Reduced row-echelon form by Gauss-Jordan elimination over the rationals.
pub fn rref(m: &RatMatrix) -> Rref {
    let mut r = m.clone();
    let (rows, cols) = (r.rows, r.cols);
    let mut pivots = Vec::new();
    let mut lead = 0;
    for col in 0..cols {
        if lead == rows {
            break;
        }
        let Some(p) = (lead..rows).find(|&i| !r.get(i, col).is_zero()) else {
            continue;
        };
        r.swap_rows(lead, p);
        let inv = r.get(lead, col).recip();
        for j in col..cols {
            let v = &r.data[lead * cols + j] * &inv;
            r.data[lead * cols + j] = v;
        }
        for i in 0..rows {
            if i == lead {
                continue;
            }
            let factor = r.get(i, col).clone();
            if factor.is_zero() {
                continue;
            }
            for j in col..cols {
                let delta = &factor * &r.data[lead * cols + j];
                r.data[i * cols + j] -= delta;
            }
        }
        pivots.push(col);
        lead += 1;
    }
    let rank = pivots.len();
    Rref {
        matrix: r,
        pivots,
        rank,
    }
}

pub fn rank(m: &RatMatrix) -> usize {
    rref(m).rank
}

/// Rank of the column submatrix `A^J`.
pub fn rank_of_columns(a: &RatMatrix, columns: &[usize]) -> usize {
    if columns.is_empty() {
        return 0;
    }
    rank(&a.select_columns(columns))
}

/// The primitive integer kernel vector supported exactly on the matroid
/// circuit `circuit`, normalized so its first nonzero entry is positive.
pub fn kernel_vector_on_support(a: &RatMatrix, circuit: &[usize]) -> Result<RatVector> {
    if circuit.iter().any(|&j| j >= a.ncols()) {
        return Err(Error::Dimension("circuit index out of range".into()));
    }
    let sub = a.select_columns(circuit);
    let Rref {
        matrix: r,
        pivots,
        rank,
    } = rref(&sub);
    let nullity = circuit.len() - rank;
    if nullity != 1 {
        return Err(Error::NotACircuit { nullity });
    }
    let free = (0..circuit.len())
        .find(|j| !pivots.contains(j))
        .expect("nullity one leaves one free column");
    let mut local = vec![Rational::zero(); circuit.len()];
    local[free] = Rational::one();
    for (row, &p) in pivots.iter().enumerate() {
        local[p] = -r.get(row, free);
    }
    if local.iter().any(Zero::is_zero) {
        // Nullity one but the kernel misses a column: a smaller circuit lives inside.
        return Err(Error::NotACircuit { nullity });
    }
    let mut full = RatVector::zeros(a.ncols());
    for (k, &j) in circuit.iter().enumerate() {
        full.0[j] = local[k].clone();
    }
    Ok(full.canonical_primitive().expect("nonzero kernel vector"))
}

/// Determinant of a square integer matrix by Bareiss fraction-free elimination.
pub fn integer_determinant(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn integer_entries(a: &RatMatrix) -> Result<Vec<Vec<BigInt>>> {
    if !a.is_integral() {
        return Err(Error::Precondition("matrix must be integral".into()));
    }
    Ok((0..a.nrows())
        .map(|i| a.row(i).iter().map(|v| v.to_integer()).collect())
        .collect())
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Number of square submatrices of an `m x n` matrix.
pub fn square_submatrix_count(m: usize, n: usize) -> BigInt {
    (1..=m.min(n)).map(|k| binomial(m, k) * binomial(n, k)).sum()
}

/// Δ(A): the largest absolute subdeterminant, by exhaustive enumeration.
pub fn delta_exact(a: &RatMatrix, budget: u64) -> Result<BigInt> {
    let entries = integer_entries(a)?;
    let needed = square_submatrix_count(a.nrows(), a.ncols());
    if needed > BigInt::from(budget) {
        return Err(Error::BudgetExceeded {
            needed: needed.to_string(),
            budget,
        });
    }
    let mut best = BigInt::zero();
    for k in 1..=a.nrows().min(a.ncols()) {
        for rows in (0..a.nrows()).combinations(k) {
            for cols in (0..a.ncols()).combinations(k) {
                let sub: Vec<Vec<BigInt>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| entries[i][j].clone()).collect())
                    .collect();
                let d = integer_determinant(&sub).abs();
                if d > best {
                    best = d;
                }
            }
        }
    }
    Ok(best)
}

/// Hadamard-type upper bound `ceil(max|A_ij|^m * m^(m/2))` on Δ(A).
pub fn delta_bound(a: &RatMatrix) -> Result<BigInt> {
    let entries = integer_entries(a)?;
    let m = a.nrows();
    let max = entries
        .iter()
        .flatten()
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    let base: BigInt = Pow::pow(&max, m as u32);
    let mm = BigInt::from(m);
    if m.is_multiple_of(2) {
        return Ok(base * Pow::pow(&mm, (m / 2) as u32));
    }
    // odd m: base * m^((m-1)/2) * sqrt(m), rounded up exactly
    let k = base * Pow::pow(&mm, ((m - 1) / 2) as u32);
    let square = &k * &k * &mm;
    let root = square.sqrt();
    Ok(if &root * &root == square { root } else { root + 1 })
}
