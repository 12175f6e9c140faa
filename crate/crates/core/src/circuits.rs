//! Circuits of a matrix and conformal circuit decompositions of kernel
//! vectors, using only rank computations and exact elimination.

use num_traits::{Signed, Zero};

use crate::arith::{kernel_vector_on_support, rank_of_columns, RatMatrix, RatVector, Rational};
use crate::error::{Error, Result};

/// `h = sum(terms)` with every term a multiple of a circuit conformal to `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitDecomposition {
    pub h: RatVector,
    pub terms: Vec<RatVector>,
}

impl CircuitDecomposition {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Checks every structural invariant against `a`; returns the violations.
    pub fn violations(&self, a: &RatMatrix) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.h.len();
        if self.terms.len() > n {
            out.push(format!("{} terms exceed n = {n}", self.terms.len()));
        }
        let mut sum = RatVector::zeros(n);
        for (k, d) in self.terms.iter().enumerate() {
            if d.len() != n {
                out.push(format!("term {k} has length {}", d.len()));
                continue;
            }
            sum = &sum + d;
            if !is_circuit_multiple(a, d) {
                out.push(format!("term {k} is not a multiple of a circuit"));
            }
            if !is_conformal(d, &self.h).unwrap_or(false) {
                out.push(format!("term {k} is not conformal to h"));
            }
        }
        if sum != self.h {
            out.push("terms do not sum to h".into());
        }
        out
    }

    pub fn is_valid(&self, a: &RatMatrix) -> bool {
        self.violations(a).is_empty()
    }
}

fn check_lengths(c: &RatVector, h: &RatVector) -> Result<()> {
    if c.len() != h.len() {
        return Err(Error::Dimension(format!(
            "vectors of length {} and {}",
            c.len(),
            h.len()
        )));
    }
    Ok(())
}

/// `c ⪯ h`: same sign pattern and no larger in absolute value, entrywise.
pub fn is_conformal(c: &RatVector, h: &RatVector) -> Result<bool> {
    check_lengths(c, h)?;
    Ok(c.iter().zip(h.iter()).all(|(ci, hi)| {
        let prod = ci * hi;
        !prod.is_negative() && ci.abs() <= hi.abs()
    }))
}

/// `supp(c) ⊆ supp(h)` and `c_i h_i >= 0` for all `i`.
pub fn is_dominated(c: &RatVector, h: &RatVector) -> Result<bool> {
    check_lengths(c, h)?;
    Ok(c.iter().zip(h.iter()).all(|(ci, hi)| {
        if ci.is_zero() {
            return true;
        }
        (ci * hi).is_positive()
    }))
}

/// True iff `c` is a nonzero kernel vector of `a` with inclusion-minimal support.
pub fn is_circuit(a: &RatMatrix, c: &RatVector) -> bool {
    if c.len() != a.ncols() || c.is_zero() || !a.mul_vec(c).is_zero() {
        return false;
    }
    let support = c.support();
    rank_of_columns(a, &support) + 1 == support.len()
}

/// A circuit scaled by any nonzero rational is still a circuit; this is the
/// same test, named for readability at call sites that hold multiples.
pub fn is_circuit_multiple(a: &RatMatrix, d: &RatVector) -> bool {
    is_circuit(a, d)
}

/// Finds a matroid circuit inside the dependent column set `h_set` by growing
/// a prefix of `h_set` until the rank stalls, then keeping the columns whose
/// removal leaves the rank unchanged.
pub fn find_matroid_circuit(a: &RatMatrix, h_set: &[usize]) -> Result<Vec<usize>> {
    let mut set = h_set.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.iter().any(|&j| j >= a.ncols()) {
        return Err(Error::Dimension("column index out of range".into()));
    }
    if rank_of_columns(a, &set) == set.len() {
        return Err(Error::Precondition(
            "columns are linearly independent; no circuit exists".into(),
        ));
    }
    let mut prev_rank = 0;
    let mut len = 1;
    let mut cur_rank = rank_of_columns(a, &set[..1]);
    while cur_rank > prev_rank {
        prev_rank = cur_rank;
        len += 1;
        cur_rank = rank_of_columns(a, &set[..len]);
    }
    let prefix = &set[..len];
    let circuit = prefix
        .iter()
        .copied()
        .filter(|&j| {
            let rest: Vec<usize> = prefix.iter().copied().filter(|&k| k != j).collect();
            rank_of_columns(a, &rest) == cur_rank
        })
        .collect();
    Ok(circuit)
}

/// Reduces `h` by the circuit multiple `c`: returns `(h - d, d)` with `d = αc`
/// chosen so that `h - d` is dominated by `h` and gains a zero entry.
///
/// `α = h_i / c_i` at the coordinate minimizing `|h_i / c_i|` over `supp(c)`,
/// lowest index on ties.
pub fn reduce_by_circuit(h: &RatVector, c: &RatVector) -> Result<(RatVector, RatVector)> {
    check_lengths(c, h)?;
    if h.is_zero() || c.is_zero() {
        return Err(Error::Precondition("reduction needs nonzero h and c".into()));
    }
    let support = c.support();
    if support.iter().any(|&i| h[i].is_zero()) {
        return Err(Error::Precondition("supp(c) is not contained in supp(h)".into()));
    }
    let mut best: Option<Rational> = None;
    for &i in &support {
        let r = &h[i] / &c[i];
        if best.as_ref().is_none_or(|b| r.abs() < b.abs()) {
            best = Some(r);
        }
    }
    let alpha = best.expect("nonempty support");
    let d = c.scale(&alpha);
    let reduced = h - &d;
    let shrinks = reduced.support().len() < h.support().len();
    if !shrinks || !is_dominated(&reduced, h)? {
        return Err(Error::Internal("circuit reduction failed to shrink support".into()));
    }
    Ok((reduced, d))
}

fn check_kernel(a: &RatMatrix, h: &RatVector) -> Result<()> {
    if h.len() != a.ncols() {
        return Err(Error::Dimension(format!(
            "vector of length {} for a matrix with {} columns",
            h.len(),
            a.ncols()
        )));
    }
    if h.is_zero() {
        return Err(Error::Precondition("h must be nonzero".into()));
    }
    if !a.mul_vec(h).is_zero() {
        return Err(Error::Precondition("h is not in the kernel of A".into()));
    }
    Ok(())
}

/// Returns a circuit multiple dominated by the kernel vector `h`.
///
/// Walks the reduction chain `g⁰ = h, g¹, …`, stopping early as soon as a
/// circuit met on the way, or its negation, is dominated by `h`.
pub fn find_dominated_circuit(a: &RatMatrix, h: &RatVector) -> Result<RatVector> {
    check_kernel(a, h)?;
    let mut g = h.clone();
    loop {
        let circuit = find_matroid_circuit(a, &g.support())?;
        let c = kernel_vector_on_support(a, &circuit)?;
        if is_dominated(&c, h)? {
            return Ok(c);
        }
        let neg = -&c;
        if is_dominated(&neg, h)? {
            return Ok(neg);
        }
        let (next, _) = reduce_by_circuit(&g, &c)?;
        if next.is_zero() {
            // g was itself a multiple of c, and every g in the chain is dominated by h
            return Ok(g);
        }
        g = next;
    }
}

/// Writes the kernel vector `h` as a conformal sum of at most `n` circuit
/// multiples, each iteration removing at least one coordinate from the support.
pub fn conformal_circuit_decomposition(a: &RatMatrix, h: &RatVector) -> Result<CircuitDecomposition> {
    check_kernel(a, h)?;
    let mut rest = h.clone();
    let mut terms = Vec::new();
    while !rest.is_zero() {
        let c = find_dominated_circuit(a, &rest)?;
        let (next, d) = reduce_by_circuit(&rest, &c)?;
        terms.push(d);
        rest = next;
    }
    Ok(CircuitDecomposition {
        h: h.clone(),
        terms,
    })
}
