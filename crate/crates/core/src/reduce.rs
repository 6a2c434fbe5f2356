//! Path-sum rewriting with the `[HH]` and `[ω]` rules.
//!
//! Both rules eliminate a path variable `y0` that no output mentions, after
//! factoring the phase as `Φ = y0·P + R` with `R` free of `y0`.
//!
//! * `[HH]`: every coefficient of `P` is π and `P = y1 + Q` with `y1` a path
//!   variable absent from `Q`. Summing `y0` forces `y1 = Q̄`, so both vanish
//!   and `R[y1 := Q̄]` remains.
//! * `[ω]`: `P = π/2 + π·Q` (or `3π/2 + π·Q`, folded as `Q + 1`). Summing
//!   `y0` yields `√2·e^{iπ/4}·e^{-iπ/2·Q̄}`.

use std::fmt;
use std::time::Instant;

use log::debug;
use serde::Serialize;

use crate::angle::Angle;
use crate::pathsum::PathSum;
use crate::poly::{mod2_lift, IntPoly, Monomial, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Hh,
    Omega,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Hh => write!(f, "HH"),
            Rule::Omega => write!(f, "omega"),
        }
    }
}

/// One applied rewrite. Indices refer to the path sum before the step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub rule: Rule,
    pub y0: u32,
    pub y1: Option<u32>,
    pub m_after: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    /// Stopped because the step budget or deadline ran out.
    pub exhausted: bool,
}

impl ReductionTrace {
    pub fn count(&self, rule: Rule) -> usize {
        self.steps.iter().filter(|s| s.rule == rule).count()
    }

    /// Path variables eliminated by all steps.
    pub fn removed_vars(&self) -> usize {
        self.steps
            .iter()
            .map(|s| match s.rule {
                Rule::Hh => 2,
                Rule::Omega => 1,
            })
            .sum()
    }

    pub fn extend(&mut self, other: ReductionTrace) {
        self.steps.extend(other.steps);
        self.exhausted |= other.exhausted;
    }
}

/// Limits on a reduction run.
#[derive(Clone, Copy, Debug, Default)]
pub struct ReduceBudget {
    pub max_steps: Option<usize>,
    pub deadline: Option<Instant>,
}

impl ReduceBudget {
    pub fn unlimited() -> Self {
        ReduceBudget::default()
    }

    fn spent(&self, steps: usize) -> bool {
        self.max_steps.is_some_and(|k| steps >= k)
            || self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

/// Applies `[HH]` at the first eligible `(y0, y1)` in ascending order.
pub fn try_hh(ps: &mut PathSum) -> Option<ReductionStep> {
    for j0 in 0..ps.m as u32 {
        let y0 = Var::Path(j0);
        if ps.in_outputs(y0) {
            continue;
        }
        let p = ps.phase.factor_of(y0);
        if p.is_empty() {
            continue;
        }
        let Ok(q_all) = IntPoly::from_phase_over_pi(&p) else {
            continue;
        };
        let candidates = (0..ps.m as u32).filter(|&j1| {
            let y1 = Var::Path(j1);
            j1 != j0
                && q_all.coeff(&Monomial::var(y1)) != 0
                && q_all.terms().filter(|(m, _)| m.contains(y1)).count() == 1
        });
        for j1 in candidates {
            let y1 = Var::Path(j1);
            let mut q = q_all.clone();
            q.add_term(Monomial::var(y1), -1);
            let lift = match mod2_lift(&q) {
                Ok(l) => l,
                Err(e) => {
                    debug!("HH y{j0},y{j1} skipped: {e}");
                    continue;
                }
            };
            if ps.in_outputs(y1) && lift.as_parity().is_none() {
                continue;
            }
            let mut next = ps.clone();
            next.phase.split_off_var(y0);
            if let Err(e) = next.substitute(y1, &lift) {
                debug!("HH y{j0},y{j1} skipped: {e}");
                continue;
            }
            next.remove_path_vars(&[j0, j1]);
            *ps = next;
            return Some(ReductionStep {
                rule: Rule::Hh,
                y0: j0,
                y1: Some(j1),
                m_after: ps.m,
            });
        }
    }
    None
}

/// Applies `[ω]` at the first eligible `y0` in ascending order.
pub fn try_omega(ps: &mut PathSum) -> Option<ReductionStep> {
    let half = Angle::dyadic(1, 1);
    let three_halves = Angle::dyadic(3, 1);
    for j0 in 0..ps.m as u32 {
        let y0 = Var::Path(j0);
        if ps.in_outputs(y0) {
            continue;
        }
        let mut p = ps.phase.factor_of(y0);
        let c = p.constant_term();
        let flip = if c == half {
            false
        } else if c == three_halves {
            true
        } else {
            continue;
        };
        p.add_term(Monomial::one(), c.neg());
        let Ok(mut q) = IntPoly::from_phase_over_pi(&p) else {
            continue;
        };
        if flip {
            q.add_term(Monomial::one(), 1);
        }
        let lift = match mod2_lift(&q) {
            Ok(l) => l,
            Err(e) => {
                debug!("omega y{j0} skipped: {e}");
                continue;
            }
        };
        let lifted = match lift.lifted_mod(Some(2)) {
            Ok(l) => l,
            Err(e) => {
                debug!("omega y{j0} skipped: {e}");
                continue;
            }
        };
        let mut next = ps.clone();
        next.phase.split_off_var(y0);
        next.phase.add_term(Monomial::one(), Angle::dyadic(1, 2));
        next.phase.add_scaled(&three_halves, &lifted);
        next.remove_path_vars(&[j0]);
        *ps = next;
        return Some(ReductionStep {
            rule: Rule::Omega,
            y0: j0,
            y1: None,
            m_after: ps.m,
        });
    }
    None
}

/// Applies `[HH]`, then `[ω]`, repeatedly until neither fires or the budget
/// is spent.
pub fn reduce_fixpoint(ps: &mut PathSum, budget: ReduceBudget) -> ReductionTrace {
    let mut trace = ReductionTrace::default();
    loop {
        if budget.spent(trace.steps.len()) {
            trace.exhausted = true;
            return trace;
        }
        let step = try_hh(ps).or_else(|| try_omega(ps));
        match step {
            Some(s) => {
                debug!("{} at y{}: m = {}", s.rule, s.y0, s.m_after);
                trace.steps.push(s);
            }
            None => return trace,
        }
    }
}

/// What a reduced miter path sum says on its own.
#[derive(Clone, Debug, PartialEq)]
pub enum ResidueClass {
    Identity,
    IdentityUpToPhase(Angle),
    Unknown,
}

pub fn classify(ps: &PathSum) -> ResidueClass {
    let identity_outputs = ps
        .outputs
        .iter()
        .enumerate()
        .all(|(i, o)| o.as_var() == Some(Var::Input(i as u32)));
    if ps.m != 0 || ps.phase.has_variable_terms() || !identity_outputs {
        return ResidueClass::Unknown;
    }
    let c = ps.phase.constant_term();
    if c.is_zero() {
        ResidueClass::Identity
    } else {
        ResidueClass::IdentityUpToPhase(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Circuit, Gate};

    fn build(n: usize, gates: Vec<Gate>) -> PathSum {
        PathSum::build(&Circuit::from_gates(n, gates).unwrap()).unwrap()
    }

    #[test]
    fn hh_collapses_double_hadamard() {
        let mut ps = build(1, vec![Gate::h(0), Gate::h(0)]);
        let trace = reduce_fixpoint(&mut ps, ReduceBudget::unlimited());
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.count(Rule::Hh), 1);
        assert_eq!(ps.to_string(), "⟨{}, 0, [x0]⟩");
        assert_eq!(classify(&ps), ResidueClass::Identity);
    }

    #[test]
    fn omega_on_hsh() {
        // H S H = e^{iπ/4} · Rx(π/2)-like; reduces to an m = 1 sum
        let mut ps = build(1, vec![Gate::h(0), Gate::s(0), Gate::h(0)]);
        let before = ps.to_matrix().unwrap();
        let trace = reduce_fixpoint(&mut ps, ReduceBudget::unlimited());
        assert_eq!(trace.count(Rule::Omega), 1);
        assert!(ps.to_matrix().unwrap().approx_eq(&before, 1e-12));
    }

    #[test]
    fn reduction_preserves_matrix() {
        let mut ps = build(
            2,
            vec![
                Gate::h(0),
                Gate::cnot(0, 1),
                Gate::h(0),
                Gate::s(1),
                Gate::h(1),
                Gate::cz(0, 1),
                Gate::h(1),
                Gate::h(0),
            ],
        );
        let before = ps.to_matrix().unwrap();
        reduce_fixpoint(&mut ps, ReduceBudget::unlimited());
        assert!(ps.to_matrix().unwrap().approx_eq(&before, 1e-12));
    }

    #[test]
    fn step_budget() {
        let mut ps = build(2, vec![Gate::h(0), Gate::h(0), Gate::h(1), Gate::h(1)]);
        let trace = reduce_fixpoint(
            &mut ps,
            ReduceBudget {
                max_steps: Some(1),
                deadline: None,
            },
        );
        assert_eq!(trace.steps.len(), 1);
        assert!(trace.exhausted);
        assert_eq!(ps.m, 2);
    }

    #[test]
    fn global_phase_residue() {
        let mut ps = build(
            1,
            vec![
                Gate::h(0),
                Gate::s(0),
                Gate::h(0),
                Gate::s(0),
                Gate::h(0),
                Gate::s(0),
            ],
        );
        let before = ps.to_matrix().unwrap();
        reduce_fixpoint(&mut ps, ReduceBudget::unlimited());
        assert!(ps.to_matrix().unwrap().approx_eq(&before, 1e-12));
        assert!(matches!(classify(&ps), ResidueClass::IdentityUpToPhase(_)));
    }
}
