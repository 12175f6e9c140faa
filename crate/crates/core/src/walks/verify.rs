//! Independent certificate checks. Nothing here trusts the walk builders:
//! every point is replayed, every step re-derived from the bounds, and the
//! terminal objective compared with a fresh LP or IP solve.

use std::fmt;

use num_traits::Signed;

use super::{max_step, Phase, WalkCertificate, WalkMode};
use crate::circuits::is_circuit;
use crate::error::Error;
use crate::ip::{is_graver_element, solve_ip};
use crate::lp::{solve_lp, LpInstance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    ModeMismatch,
    InstanceMismatch,
    DimensionMismatch { step: Option<usize> },
    StartInfeasible,
    NonPositiveMultiplier { step: usize },
    NonIntegralStep { step: usize },
    PointInfeasible { step: usize },
    ObjectiveMismatch { step: usize },
    NotIncreasing { step: usize },
    NotACircuit { step: usize },
    NotGraver { step: usize },
    GraverCheckOverBudget { step: usize },
    NotMaximal { step: usize },
    TerminalMismatch,
    TerminalNotOptimal,
}

impl Failure {
    /// Stable machine-readable tag.
    pub fn code(&self) -> &'static str {
        match self {
            Failure::ModeMismatch => "mode-mismatch",
            Failure::InstanceMismatch => "instance-mismatch",
            Failure::DimensionMismatch { .. } => "dimension-mismatch",
            Failure::StartInfeasible => "start-infeasible",
            Failure::NonPositiveMultiplier { .. } => "non-positive-multiplier",
            Failure::NonIntegralStep { .. } => "non-integral-step",
            Failure::PointInfeasible { .. } => "point-infeasible",
            Failure::ObjectiveMismatch { .. } => "objective-mismatch",
            Failure::NotIncreasing { .. } => "not-increasing",
            Failure::NotACircuit { .. } => "not-a-circuit",
            Failure::NotGraver { .. } => "not-graver",
            Failure::GraverCheckOverBudget { .. } => "graver-check-over-budget",
            Failure::NotMaximal { .. } => "not-maximal",
            Failure::TerminalMismatch => "terminal-mismatch",
            Failure::TerminalNotOptimal => "terminal-not-optimal",
        }
    }

    fn step(&self) -> Option<usize> {
        match *self {
            Failure::DimensionMismatch { step } => step,
            Failure::NonPositiveMultiplier { step }
            | Failure::NonIntegralStep { step }
            | Failure::PointInfeasible { step }
            | Failure::ObjectiveMismatch { step }
            | Failure::NotIncreasing { step }
            | Failure::NotACircuit { step }
            | Failure::NotGraver { step }
            | Failure::GraverCheckOverBudget { step }
            | Failure::NotMaximal { step } => Some(step),
            _ => None,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self {
            Failure::ModeMismatch => "certificate mode does not match the verifier",
            Failure::InstanceMismatch => "certificate was produced for another instance",
            Failure::DimensionMismatch { .. } => "vector length does not match the instance",
            Failure::StartInfeasible => "start point infeasible",
            Failure::NonPositiveMultiplier { .. } => "multiplier not positive",
            Failure::NonIntegralStep { .. } => "step not integral",
            Failure::PointInfeasible { .. } => "point infeasible",
            Failure::ObjectiveMismatch { .. } => "recorded objective does not match",
            Failure::NotIncreasing { .. } => "objective not increasing",
            Failure::NotACircuit { .. } => "direction is not a circuit",
            Failure::NotGraver { .. } => "direction is not a Graver-element",
            Failure::GraverCheckOverBudget { .. } => "Graver check exceeds budget",
            Failure::NotMaximal { .. } => "step not maximal",
            Failure::TerminalMismatch => "terminal does not match replayed steps",
            Failure::TerminalNotOptimal => "terminal not optimal",
        };
        match self.step() {
            Some(k) => write!(f, "step {}: {what}", k + 1),
            None => f.write_str(what),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub failures: Vec<Failure>,
    /// Descent steps with no objective gain; permitted, but reported.
    pub flat_descent_steps: Vec<usize>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn has(&self, code: &str) -> bool {
        self.failures.iter().any(|f| f.code() == code)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            f.write_str("ok")?;
        } else {
            for (i, failure) in self.failures.iter().enumerate() {
                if i > 0 {
                    f.write_str("; ")?;
                }
                write!(f, "{failure}")?;
            }
        }
        if !self.flat_descent_steps.is_empty() {
            write!(f, " ({} flat descent steps)", self.flat_descent_steps.len())?;
        }
        Ok(())
    }
}

pub fn verify_circuit_walk(inst: &LpInstance, cert: &WalkCertificate) -> VerifyReport {
    verify(inst, cert, WalkMode::Circuit, 0)
}

/// `budget` caps each brute-force Graver-membership check.
pub fn verify_graver_walk(inst: &LpInstance, cert: &WalkCertificate, budget: u64) -> VerifyReport {
    verify(inst, cert, WalkMode::Graver, budget)
}

fn verify(inst: &LpInstance, cert: &WalkCertificate, mode: WalkMode, budget: u64) -> VerifyReport {
    let mut report = VerifyReport::default();
    let fail = |report: &mut VerifyReport, f: Failure| report.failures.push(f);
    if cert.mode != mode {
        fail(&mut report, Failure::ModeMismatch);
    }
    if cert.instance != *inst {
        fail(&mut report, Failure::InstanceMismatch);
    }
    let n = inst.nvars();
    let integral = mode == WalkMode::Graver;
    if cert.start.len() != n || cert.terminal.len() != n {
        fail(&mut report, Failure::DimensionMismatch { step: None });
        return report;
    }
    if !inst.is_feasible(&cert.start, integral) {
        fail(&mut report, Failure::StartInfeasible);
    }

    let mut x = cert.start.clone();
    let mut objective = inst.objective(&x);
    for (k, step) in cert.steps.iter().enumerate() {
        if step.direction.len() != n {
            fail(&mut report, Failure::DimensionMismatch { step: Some(k) });
            return report;
        }
        if !step.multiplier.is_positive() || step.direction.is_zero() {
            fail(&mut report, Failure::NonPositiveMultiplier { step: k });
            continue;
        }
        if integral && (!step.multiplier.is_integer() || !step.direction.is_integral()) {
            fail(&mut report, Failure::NonIntegralStep { step: k });
        }

        // Direction check. A Graver step is a positive integer multiple of a
        // Graver-element; an integral multiple of a non-primitive direction is
        // that too, so the primitive part is what gets tested.
        match mode {
            WalkMode::Circuit => {
                if !is_circuit(inst.a(), &step.direction) {
                    fail(&mut report, Failure::NotACircuit { step: k });
                }
            }
            WalkMode::Graver => {
                let prim = step.direction.primitive().expect("nonzero direction");
                match is_graver_element(inst.a(), &prim, budget) {
                    Ok(true) => {}
                    Ok(false) => fail(&mut report, Failure::NotGraver { step: k }),
                    Err(_) => fail(&mut report, Failure::GraverCheckOverBudget { step: k }),
                }
            }
        }

        // Maximality: compare against the largest feasible multiple of the
        // primitive direction; the Graver case is an integer comparison, i.e.
        // one more unit step leaves P ∩ Z^n.
        let displacement = step.displacement();
        let maximal = match mode {
            WalkMode::Circuit => {
                max_step(&x, &step.direction, inst.lower(), inst.upper(), false).map(|a| a == step.multiplier)
            }
            WalkMode::Graver => {
                let (prim, content) = displacement.primitive_split().expect("nonzero");
                max_step(&x, &prim, inst.lower(), inst.upper(), true).map(|a| a == content)
            }
        };
        match maximal {
            Ok(true) => {}
            Ok(false) | Err(Error::DegenerateStep) | Err(_) => fail(&mut report, Failure::NotMaximal { step: k }),
        }

        x = &x + &displacement;
        if !inst.is_feasible(&x, integral) {
            fail(&mut report, Failure::PointInfeasible { step: k });
        }
        let next = inst.objective(&x);
        if next != step.objective_after {
            fail(&mut report, Failure::ObjectiveMismatch { step: k });
        }
        match step.phase {
            Phase::Descent if next == objective => report.flat_descent_steps.push(k),
            Phase::Descent if next < objective => fail(&mut report, Failure::NotIncreasing { step: k }),
            Phase::Descent => {}
            Phase::Decay | Phase::Trivial => {
                if next <= objective {
                    fail(&mut report, Failure::NotIncreasing { step: k });
                }
            }
        }
        objective = next;
    }

    if x != cert.terminal {
        fail(&mut report, Failure::TerminalMismatch);
    }
    let optimum = match mode {
        WalkMode::Circuit => {
            let sol = solve_lp(inst);
            sol.is_optimal().then_some(sol.objective)
        }
        WalkMode::Graver => {
            let sol = solve_ip(inst);
            sol.is_optimal().then_some(sol.objective)
        }
    };
    let optimal = inst.is_feasible(&cert.terminal, integral)
        && optimum.is_some_and(|opt| opt == inst.objective(&cert.terminal));
    if !optimal {
        fail(&mut report, Failure::TerminalNotOptimal);
    }
    report
}
