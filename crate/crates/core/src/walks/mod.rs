//! Monotone augmentation walks to an optimum.
//!
//! A circuit walk moves from a feasible point by maximal steps along circuits
//! of `A`; it needs one LP solve plus linear algebra. A Graver walk moves by
//! maximal integer steps along Graver-elements and calls the IP oracle for the
//! optimum and for every Graver-element it extracts.
//!
//! Both walks run the same decay loop: decompose `x̄ - x` conformally, step
//! along the term of largest objective gain, repeat. The gap to the optimum
//! shrinks by a factor `1 - 1/n` (circuit) or `1 - 1/(2n²Δ)` (Graver) per
//! step. The circuit walk finishes with a face descent that steps to a vertex.

mod verify;

pub use verify::{verify_circuit_walk, verify_graver_walk, Failure, VerifyReport};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{
    ceil_ln, delta_bound, delta_exact, int_to_rat, kernel_vector_on_support, rank_of_columns, RatMatrix,
    RatVector, Rational, DEFAULT_DELTA_BUDGET,
};
use crate::circuits::{conformal_circuit_decomposition, find_matroid_circuit, is_conformal};
use crate::error::{Error, Result};
use crate::ip::{extract_graver, extract_graver_standard_form, solve_ip};
use crate::lp::{solve_lp, LpInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    /// geometric-decay step towards the optimum
    Decay,
    /// step inside the current face towards a vertex
    Descent,
    /// coordinate step for a zero constraint matrix
    Trivial,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Decay => "decay",
            Phase::Descent => "descent",
            Phase::Trivial => "trivial",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkMode {
    Circuit,
    Graver,
}

impl WalkMode {
    pub fn as_str(self) -> &'static str {
        match self {
            WalkMode::Circuit => "circuit",
            WalkMode::Graver => "graver",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkStep {
    pub direction: RatVector,
    pub multiplier: Rational,
    pub phase: Phase,
    pub objective_after: Rational,
}

impl WalkStep {
    pub fn displacement(&self) -> RatVector {
        self.direction.scale(&self.multiplier)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkCertificate {
    pub instance: LpInstance,
    pub start: RatVector,
    pub steps: Vec<WalkStep>,
    pub terminal: RatVector,
    pub mode: WalkMode,
}

impl WalkCertificate {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `x⁰, x¹, …` obtained by replaying the steps from `start`.
    pub fn points(&self) -> Vec<RatVector> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let mut x = self.start.clone();
        out.push(x.clone());
        for step in &self.steps {
            x = &x + &step.displacement();
            out.push(x.clone());
        }
        out
    }

    /// Indices of decay steps whose gap to `optimum` did not shrink by `factor`.
    pub fn decay_violations(&self, optimum: &Rational, factor: &Rational) -> Vec<usize> {
        let mut before = optimum - self.instance.objective(&self.start);
        let mut bad = Vec::new();
        for (k, step) in self.steps.iter().enumerate() {
            let after = optimum - &step.objective_after;
            if step.phase == Phase::Decay && after > factor * &before {
                bad.push(k);
            }
            before = after;
        }
        bad
    }

    pub fn count_phase(&self, phase: Phase) -> usize {
        self.steps.iter().filter(|s| s.phase == phase).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DeltaChoice {
    /// exhaustive Δ(A) when within budget, otherwise the Hadamard-type bound
    #[default]
    Auto,
    Exact,
    Bound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GraverExtraction {
    /// one program with the norm row `Σσx >= 1`
    #[default]
    Auxiliary,
    /// one standard-form program per support coordinate
    StandardForm,
}

#[derive(Clone, Debug)]
pub struct WalkOptions {
    pub delta: DeltaChoice,
    pub delta_budget: u64,
    pub step_limit: usize,
    pub extraction: GraverExtraction,
}

impl Default for WalkOptions {
    fn default() -> Self {
        WalkOptions {
            delta: DeltaChoice::Auto,
            delta_budget: DEFAULT_DELTA_BUDGET,
            step_limit: 100_000,
            extraction: GraverExtraction::Auxiliary,
        }
    }
}

/// The upper bound Δ̂ on Δ(A) used by the stopping rules and step bounds.
pub fn delta_hat(a: &RatMatrix, choice: DeltaChoice, budget: u64) -> Result<BigInt> {
    match choice {
        DeltaChoice::Exact => delta_exact(a, budget),
        DeltaChoice::Bound => delta_bound(a),
        DeltaChoice::Auto => match delta_exact(a, budget) {
            Err(Error::BudgetExceeded { .. }) => delta_bound(a),
            other => other,
        },
    }
}

/// Length bound `n⌈ln(Δ̂·gap₀)⌉ + n` for a circuit walk, the logarithmic term
/// clamped at zero. `Δ̂` is taken as at least 1 (the empty minor), which keeps
/// the bound meaningful for a zero matrix.
pub fn circuit_step_bound(n: usize, delta_hat: &BigInt, gap0: &Rational) -> usize {
    if !gap0.is_positive() {
        return 0;
    }
    let delta = int_to_rat(delta_hat.max(&BigInt::one()));
    let decay = ceil_ln(&(delta * gap0)).max(0) as usize;
    n * decay + n
}

/// `2n²Δ̂⌈ln gap₀⌉` for an integral gap `gap₀ >= 1`, with `Δ̂` at least 1.
/// Note that a unit gap gives 0 although it takes one step to close.
pub fn graver_step_bound(n: usize, delta_hat: &BigInt, gap0: &Rational) -> BigInt {
    if gap0 < &Rational::one() {
        return BigInt::zero();
    }
    BigInt::from(2 * n * n) * delta_hat.max(&BigInt::one()) * BigInt::from(ceil_ln(gap0).max(0))
}

/// Largest `α > 0` with `l <= x + αc <= u` (largest integer `α` when
/// `integral`). Zero step lengths are reported as [`Error::DegenerateStep`].
pub fn max_step(x: &RatVector, c: &RatVector, l: &RatVector, u: &RatVector, integral: bool) -> Result<Rational> {
    let n = x.len();
    if c.len() != n || l.len() != n || u.len() != n {
        return Err(Error::Dimension("max_step operands differ in length".into()));
    }
    if c.is_zero() {
        return Err(Error::Precondition("direction must be nonzero".into()));
    }
    let mut best: Option<Rational> = None;
    for i in 0..n {
        let ratio = if c[i].is_positive() {
            (&u[i] - &x[i]) / &c[i]
        } else if c[i].is_negative() {
            (&l[i] - &x[i]) / &c[i]
        } else {
            continue;
        };
        if best.as_ref().is_none_or(|b| ratio < *b) {
            best = Some(ratio);
        }
    }
    let mut alpha = best.ok_or(Error::Unbounded)?;
    if integral {
        alpha = alpha.floor();
    }
    if !alpha.is_positive() {
        return Err(Error::DegenerateStep);
    }
    Ok(alpha)
}

fn check_start(inst: &LpInstance, x0: &RatVector, integral: bool) -> Result<()> {
    if x0.len() != inst.nvars() {
        return Err(Error::Dimension(format!(
            "start has length {}, expected {}",
            x0.len(),
            inst.nvars()
        )));
    }
    if !inst.is_feasible(x0, integral) {
        return Err(Error::InfeasibleStart);
    }
    Ok(())
}

struct Builder<'a> {
    inst: &'a LpInstance,
    x: RatVector,
    steps: Vec<WalkStep>,
    limit: usize,
}

impl<'a> Builder<'a> {
    fn new(inst: &'a LpInstance, x0: &RatVector, limit: usize) -> Self {
        Builder {
            inst,
            x: x0.clone(),
            steps: Vec::new(),
            limit,
        }
    }

    fn push(&mut self, direction: RatVector, multiplier: Rational, phase: Phase) -> Result<()> {
        if self.steps.len() >= self.limit {
            return Err(Error::StepLimit(self.limit));
        }
        self.x = &self.x + &direction.scale(&multiplier);
        let objective_after = self.inst.objective(&self.x);
        self.steps.push(WalkStep {
            direction,
            multiplier,
            phase,
            objective_after,
        });
        Ok(())
    }

    fn gap(&self, optimum: &Rational) -> Rational {
        optimum - self.inst.objective(&self.x)
    }

    fn finish(self, start: &RatVector, mode: WalkMode) -> WalkCertificate {
        WalkCertificate {
            instance: self.inst.clone(),
            start: start.clone(),
            steps: self.steps,
            terminal: self.x,
            mode,
        }
    }
}

/// Zero constraint matrix: move each coordinate with nonzero objective
/// coefficient to its best bound, one unit direction at a time.
fn coordinate_walk(builder: &mut Builder<'_>) -> Result<()> {
    let inst = builder.inst;
    for i in 0..inst.nvars() {
        let wi = &inst.w()[i];
        if wi.is_zero() {
            continue;
        }
        let target = if wi.is_positive() { &inst.upper()[i] } else { &inst.lower()[i] };
        let delta = target - &builder.x[i];
        if delta.is_zero() {
            continue;
        }
        let mut dir = RatVector::zeros(inst.nvars());
        dir.set(i, if delta.is_positive() { Rational::one() } else { -Rational::one() });
        builder.push(dir, delta.abs(), Phase::Trivial)?;
    }
    Ok(())
}

/// Index of the first term with the largest `w · term`.
fn best_term<'t>(w: &RatVector, terms: impl Iterator<Item = &'t RatVector>) -> Option<usize> {
    let mut best: Option<(usize, Rational)> = None;
    for (k, t) in terms.enumerate() {
        let gain = w.dot(t);
        if best.as_ref().is_none_or(|(_, g)| gain > *g) {
            best = Some((k, gain));
        }
    }
    best.map(|(k, _)| k)
}

fn decay_phase(builder: &mut Builder<'_>, target: &RatVector, optimum: &Rational, threshold: &Rational) -> Result<()> {
    let inst = builder.inst;
    while builder.gap(optimum) >= *threshold {
        let h = target - &builder.x;
        let dec = conformal_circuit_decomposition(inst.a(), &h)?;
        let k = best_term(inst.w(), dec.terms.iter()).expect("nonzero h has terms");
        let d = dec.terms[k].clone();
        let alpha = max_step(&builder.x, &d, inst.lower(), inst.upper(), false)?;
        builder.push(d, alpha, Phase::Decay)?;
    }
    Ok(())
}

/// Maximal circuit steps inside the minimal face of the current point until
/// the free columns are independent, i.e. the point is a vertex.
fn descent_phase(builder: &mut Builder<'_>) -> Result<()> {
    let inst = builder.inst;
    loop {
        let free: Vec<usize> = (0..inst.nvars())
            .filter(|&i| inst.lower()[i] < builder.x[i] && builder.x[i] < inst.upper()[i])
            .collect();
        if rank_of_columns(inst.a(), &free) == free.len() {
            return Ok(());
        }
        let circuit = find_matroid_circuit(inst.a(), &free)?;
        let mut c = kernel_vector_on_support(inst.a(), &circuit)?;
        if inst.w().dot(&c).is_negative() {
            c = -&c;
        }
        let alpha = match max_step(&builder.x, &c, inst.lower(), inst.upper(), false) {
            Ok(alpha) => alpha,
            Err(Error::DegenerateStep) if inst.w().dot(&c).is_zero() => {
                c = -&c;
                max_step(&builder.x, &c, inst.lower(), inst.upper(), false)?
            }
            Err(e) => return Err(e),
        };
        builder.push(c, alpha, Phase::Descent)?;
    }
}

/// Computes a circuit walk from the feasible point `x0` to an optimal point.
pub fn circuit_walk(inst: &LpInstance, x0: &RatVector, opts: &WalkOptions) -> Result<WalkCertificate> {
    check_start(inst, x0, false)?;
    let mut builder = Builder::new(inst, x0, opts.step_limit);
    if inst.a().is_zero() {
        coordinate_walk(&mut builder)?;
        return Ok(builder.finish(x0, WalkMode::Circuit));
    }
    let lp = solve_lp(inst);
    if !lp.is_optimal() {
        return Err(Error::Internal("LP infeasible although x0 is feasible".into()));
    }
    let delta = int_to_rat(&delta_hat(inst.a(), opts.delta, opts.delta_budget)?);

    // Vertex objectives are multiples of 1/|det B| for their own basis B, so
    // two vertices can differ by less than 1/Δ̂ but never by less than 1/Δ̂².
    // The first round stops at 1/Δ̂; should descent then land on a non-optimal
    // vertex the walk continues with the 1/Δ̂² threshold, which is always enough.
    let mut threshold = delta.recip();
    let mut rounds = 0;
    while builder.gap(&lp.objective).is_positive() {
        if rounds == 2 {
            return Err(Error::Internal("face descent ended at a non-optimal vertex".into()));
        }
        decay_phase(&mut builder, &lp.x, &lp.objective, &threshold)?;
        if builder.gap(&lp.objective).is_positive() {
            descent_phase(&mut builder)?;
        }
        threshold = &threshold * &threshold;
        rounds += 1;
    }
    Ok(builder.finish(x0, WalkMode::Circuit))
}

/// `h = Σ λᵢ gⁱ` with positive integers `λᵢ` and Graver-elements `gⁱ ⪯ h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraverDecomposition {
    pub h: RatVector,
    pub terms: Vec<(BigInt, RatVector)>,
}

impl GraverDecomposition {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn replay(&self) -> RatVector {
        self.terms
            .iter()
            .fold(RatVector::zeros(self.h.len()), |acc, (lambda, g)| &acc + &g.scale(&int_to_rat(lambda)))
    }

    /// Structural checks that need no Graver-membership test: exact sum,
    /// positive integer coefficients, integral conformal kernel vectors.
    pub fn violations(&self, a: &RatMatrix) -> Vec<String> {
        let mut out = Vec::new();
        if self.replay() != self.h {
            out.push("terms do not replay to h".into());
        }
        for (k, (lambda, g)) in self.terms.iter().enumerate() {
            if !lambda.is_positive() {
                out.push(format!("term {k} has non-positive coefficient"));
            }
            if !g.is_integral() || g.is_zero() || !a.mul_vec(g).is_zero() {
                out.push(format!("term {k} is not a nonzero integer kernel vector"));
            }
            if !is_conformal(g, &self.h).unwrap_or(false) {
                out.push(format!("term {k} is not conformal to h"));
            }
        }
        out
    }
}

fn extract(a: &RatMatrix, h: &RatVector, how: GraverExtraction) -> Result<RatVector> {
    match how {
        GraverExtraction::Auxiliary => extract_graver(a, h),
        GraverExtraction::StandardForm => extract_graver_standard_form(a, h),
    }
}

/// Graver decomposition of an integer kernel vector: primitive parts of a
/// conformal circuit decomposition with their integer multiplicities, plus
/// Graver-elements extracted one at a time from the fractional residual.
pub fn graver_decomposition(a: &RatMatrix, h: &RatVector, delta_hat: &BigInt) -> Result<GraverDecomposition> {
    graver_decomposition_with(a, h, delta_hat, GraverExtraction::Auxiliary)
}

pub fn graver_decomposition_with(
    a: &RatMatrix,
    h: &RatVector,
    delta_hat: &BigInt,
    how: GraverExtraction,
) -> Result<GraverDecomposition> {
    if !h.is_integral() {
        return Err(Error::Precondition("h must be integral".into()));
    }
    let circuits = conformal_circuit_decomposition(a, h)?;
    let n = h.len();

    let mut integer_parts: Vec<(BigInt, RatVector)> = Vec::new();
    let mut residual = RatVector::zeros(n);
    for term in &circuits.terms {
        let (prim, alpha) = term.primitive_split().expect("terms are nonzero");
        let whole = alpha.floor();
        let frac = &alpha - &whole;
        if whole.is_positive() {
            integer_parts.push((whole.to_integer(), prim.clone()));
        }
        if frac.is_positive() {
            residual = &residual + &prim.scale(&frac);
        }
    }
    if !residual.is_integral() {
        return Err(Error::Internal("fractional residual is not integral".into()));
    }

    let cap = BigInt::from(n * n) * delta_hat;
    let mut terms: Vec<(BigInt, RatVector)> = Vec::new();
    let mut extracted = BigInt::zero();
    while !residual.is_zero() {
        extracted += 1;
        if extracted > cap {
            return Err(Error::Internal("residual needed more than n²Δ̂ extractions".into()));
        }
        let g = extract(a, &residual, how)?;
        residual = &residual - &g;
        terms.push((BigInt::one(), g));
    }
    terms.extend(integer_parts);

    let mut merged: Vec<(BigInt, RatVector)> = Vec::new();
    for (lambda, g) in terms {
        match merged.iter_mut().find(|(_, existing)| *existing == g) {
            Some((acc, _)) => *acc += lambda,
            None => merged.push((lambda, g)),
        }
    }
    Ok(GraverDecomposition {
        h: h.clone(),
        terms: merged,
    })
}

/// Computes a Graver walk from the integer feasible point `x0` to an integer
/// optimum, calling the IP oracle for the optimum and each extraction.
pub fn graver_walk(inst: &LpInstance, x0: &RatVector, opts: &WalkOptions) -> Result<WalkCertificate> {
    check_start(inst, x0, true)?;
    let mut builder = Builder::new(inst, x0, opts.step_limit);
    if inst.a().is_zero() {
        coordinate_walk(&mut builder)?;
        return Ok(builder.finish(x0, WalkMode::Graver));
    }
    let ip = solve_ip(inst);
    if !ip.is_optimal() {
        return Err(Error::Internal("IP infeasible although x0 is feasible".into()));
    }
    let delta = delta_hat(inst.a(), opts.delta, opts.delta_budget)?;
    // integral gap: anything below 1 is zero
    while builder.gap(&ip.objective).is_positive() {
        let h = &ip.x - &builder.x;
        let dec = graver_decomposition_with(inst.a(), &h, &delta, opts.extraction)?;
        let scaled: Vec<RatVector> = dec
            .terms
            .iter()
            .map(|(lambda, g)| g.scale(&int_to_rat(lambda)))
            .collect();
        let k = best_term(inst.w(), scaled.iter()).expect("nonzero h has terms");
        let g = dec.terms[k].1.clone();
        let lambda = max_step(&builder.x, &g, inst.lower(), inst.upper(), true)?;
        builder.push(g, lambda, Phase::Decay)?;
    }
    Ok(builder.finish(x0, WalkMode::Graver))
}
