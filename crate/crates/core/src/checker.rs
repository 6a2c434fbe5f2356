//! Equivalence checking of two circuits through the miter `C1 · C2†`.
//!
//! `Σ_x ⟨x|C1 C2†|x⟩ = 2^n e^{iθ}` holds exactly when the circuits agree up
//! to the global phase `θ`. Reduction may prove this alone; otherwise the
//! diagonal sum is computed by weighted model counting.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed};
use serde::Serialize;
use thiserror::Error;

use crate::angle::Angle;
use crate::circuit::{dagger, decompose, Circuit, CircuitError, GateKind};
use crate::counter::{count, CountError, CountOptions, CountStats};
use crate::cyclotomic::Cyclotomic;
use crate::exec::Exec;
use crate::pathsum::{PathSum, PathSumError};
use crate::reduce::{classify, reduce_fixpoint, ReduceBudget, ReductionTrace, ResidueClass};
use crate::weight::ComplexWeight;
use crate::wmc::{encode, Backend, BackendChoice, WmcError};

/// Relative tolerance on `|S|` against `2^n` for the float backend.
pub const FLOAT_EPS: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rr,
    Wmc,
    #[default]
    Hybrid,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Rr => "rr",
            Mode::Wmc => "wmc",
            Mode::Hybrid => "hybrid",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhasePolicy {
    Exact,
    #[default]
    UpToGlobalPhase,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CheckConfig {
    pub mode: Mode,
    pub phase_policy: PhasePolicy,
    pub backend: BackendChoice,
    pub timeout: Option<Duration>,
    pub max_reduction_steps: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Equivalent,
    EquivalentUpToGlobalPhase(Angle),
    NotEquivalent,
    Unknown,
    Timeout,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Equivalent => "equivalent",
            Status::EquivalentUpToGlobalPhase(_) => "equivalent_up_to_global_phase",
            Status::NotEquivalent => "not_equivalent",
            Status::Unknown => "unknown",
            Status::Timeout => "timeout",
        }
    }

    /// Equivalent, possibly up to a global phase.
    pub fn is_equivalent(&self) -> bool {
        matches!(
            self,
            Status::Equivalent | Status::EquivalentUpToGlobalPhase(_)
        )
    }

    pub fn theta(&self) -> Option<&Angle> {
        match self {
            Status::EquivalentUpToGlobalPhase(t) => Some(t),
            _ => None,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::EquivalentUpToGlobalPhase(t) => write!(f, "{} (theta = {t})", self.as_str()),
            _ => f.write_str(self.as_str()),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CheckError {
    #[error("circuits act on {0} and {1} qubits")]
    QubitMismatch(usize, usize),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    PathSum(#[from] PathSumError),
    #[error(transparent)]
    Wmc(#[from] WmcError),
}

/// The diagonal sum `S = count / √2^m` of a miter.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagSum {
    /// Weighted model count including the constant phase.
    pub count: ComplexWeight,
    pub m: usize,
    pub n: usize,
}

fn pow2(k: usize) -> BigInt {
    BigInt::one() << k
}

/// Attaches the `√2^{-m}` scale to a count.
pub fn diag_sum_from_count(count: ComplexWeight, m: usize, n: usize) -> DiagSum {
    DiagSum { count, m, n }
}

impl DiagSum {
    pub fn to_complex(&self) -> Complex64 {
        self.count.to_complex() / 2f64.powf(self.m as f64 / 2.0)
    }

    /// `S` as a ring element, when it has integer coordinates.
    pub fn exact(&self) -> Option<Cyclotomic> {
        let ComplexWeight::Cyclotomic(c) = &self.count else {
            return None;
        };
        if self.m.is_multiple_of(2) {
            c.exact_div(&pow2(self.m / 2))
        } else {
            let size = c.size().max(4);
            let root2 = Cyclotomic::sqrt2(size).expect("size is at least 4");
            c.lift_to(size)
                .mul(&root2)
                .exact_div(&pow2(self.m.div_ceil(2)))
        }
    }

    /// `|S|² · 2^m = count · conj(count)`; compared against `4^n · 2^m`.
    fn modulus_matches(&self) -> bool {
        match &self.count {
            ComplexWeight::Cyclotomic(c) => {
                c.modulus_squared().as_integer() == Some(&pow2(2 * self.n + self.m))
            }
            ComplexWeight::FloatC(_) => {
                let target = 2f64.powi(self.n as i32);
                (self.to_complex().norm() - target).abs() <= FLOAT_EPS * target
            }
        }
    }

    fn equals_two_to_n(&self) -> bool {
        match &self.count {
            ComplexWeight::Cyclotomic(_) => self
                .exact()
                .is_some_and(|s| s.as_integer() == Some(&pow2(self.n))),
            ComplexWeight::FloatC(_) => {
                let target = 2f64.powi(self.n as i32);
                (self.to_complex() - target).norm() <= FLOAT_EPS * target
            }
        }
    }

    /// `θ` with `S = 2^n e^{iθ}`: exact when `S / 2^n` is `±ω^t`.
    pub fn theta(&self) -> Angle {
        if let Some(unit) = self.exact().and_then(|s| s.exact_div(&pow2(self.n))) {
            if let Some((coef, t)) = unit.as_monomial() {
                if coef.abs().is_one() {
                    let size = unit.size();
                    let t = t + if coef.is_negative() { size } else { 0 };
                    return Angle::dyadic(t as i64, size.trailing_zeros());
                }
            }
        }
        Angle::float(self.to_complex().arg())
    }

    /// Human-readable `S`: exact ring element when available.
    pub fn render_exact(&self) -> Option<String> {
        match (&self.count, self.exact()) {
            (_, Some(s)) => Some(s.to_string()),
            (ComplexWeight::Cyclotomic(c), None) => Some(format!("({c}) / sqrt(2)^{}", self.m)),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Timings {
    pub parse: f64,
    pub build: f64,
    pub reduce: f64,
    pub encode: f64,
    pub count: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub mode: Mode,
    pub n: usize,
    pub gates_1: usize,
    pub gates_2: usize,
    /// Path variables introduced while building the miter.
    pub m_before_reduction: usize,
    pub m_after_reduction: usize,
    pub trace: ReductionTrace,
    pub wmc_vars: Option<usize>,
    pub wmc_clauses: Option<usize>,
    pub diag_sum: Option<DiagSum>,
    pub backend: Option<Backend>,
    pub count_stats: Option<CountStats>,
    pub timings: Timings,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagSumReport {
    pub re: f64,
    pub im: f64,
    pub exact: Option<String>,
}

/// The JSON verdict document.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictReport {
    pub status: &'static str,
    pub mode: Mode,
    pub n: usize,
    pub gates_1: usize,
    pub gates_2: usize,
    pub m_before_reduction: usize,
    pub m_after_reduction: usize,
    pub reduction_steps: usize,
    pub wmc_vars: Option<usize>,
    pub wmc_clauses: Option<usize>,
    pub diag_sum: Option<DiagSumReport>,
    pub theta: Option<String>,
    pub timings_ms: Timings,
    pub backend: Option<Backend>,
    pub warnings: Vec<String>,
}

impl Verdict {
    pub fn report(&self) -> VerdictReport {
        VerdictReport {
            status: self.status.as_str(),
            mode: self.mode,
            n: self.n,
            gates_1: self.gates_1,
            gates_2: self.gates_2,
            m_before_reduction: self.m_before_reduction,
            m_after_reduction: self.m_after_reduction,
            reduction_steps: self.trace.steps.len(),
            wmc_vars: self.wmc_vars,
            wmc_clauses: self.wmc_clauses,
            diag_sum: self.diag_sum.as_ref().map(|d| {
                let c = d.to_complex();
                DiagSumReport {
                    re: c.re,
                    im: c.im,
                    exact: d.render_exact(),
                }
            }),
            theta: self.status.theta().map(|t| t.to_string()),
            timings_ms: self.timings,
            backend: self.backend,
            warnings: self.warnings.clone(),
        }
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

struct Pipeline {
    deadline: Option<Instant>,
    max_steps: Option<usize>,
    trace: ReductionTrace,
    reduce_time: Duration,
}

impl Pipeline {
    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn reduce(&mut self, ps: &mut PathSum) {
        let t = Instant::now();
        let budget = ReduceBudget {
            max_steps: self
                .max_steps
                .map(|k| k.saturating_sub(self.trace.steps.len())),
            deadline: self.deadline,
        };
        let tr = reduce_fixpoint(ps, budget);
        self.trace.extend(tr);
        self.reduce_time += t.elapsed();
    }
}

/// Decides `c1 ≡ c2` according to `cfg`.
pub fn check_equivalence(
    c1: &Circuit,
    c2: &Circuit,
    cfg: &CheckConfig,
) -> Result<Verdict, CheckError> {
    if c1.n != c2.n {
        return Err(CheckError::QubitMismatch(c1.n, c2.n));
    }
    c1.validate()?;
    c2.validate()?;
    let start = Instant::now();
    let mut pipe = Pipeline {
        deadline: cfg.timeout.map(|t| start + t),
        max_steps: cfg.max_reduction_steps,
        trace: ReductionTrace::default(),
        reduce_time: Duration::ZERO,
    };
    let mut warnings = Vec::new();
    let mut policy = cfg.phase_policy;
    let downgraded = policy == PhasePolicy::Exact
        && (c1.has_phase_shifting_gates() || c2.has_phase_shifting_gates());
    if downgraded {
        policy = PhasePolicy::UpToGlobalPhase;
        warnings.push(
            "rx/ry decompositions are exact only up to global phase; \
             exact phase policy downgraded"
                .to_string(),
        );
    }

    let miter = decompose(&c1.concat(&dagger(c2))?);
    let mut verdict = Verdict {
        status: Status::Unknown,
        mode: cfg.mode,
        n: c1.n,
        gates_1: c1.len(),
        gates_2: c2.len(),
        m_before_reduction: 0,
        m_after_reduction: 0,
        trace: ReductionTrace::default(),
        wmc_vars: None,
        wmc_clauses: None,
        diag_sum: None,
        backend: None,
        count_stats: None,
        timings: Timings::default(),
        warnings,
    };

    let interleave = cfg.mode != Mode::Wmc;
    let build_start = Instant::now();
    let mut ps = PathSum::identity(c1.n);
    let mut timed_out = false;
    for g in &miter.gates {
        ps.apply_gate(g)?;
        if interleave && g.kind == GateKind::H {
            pipe.reduce(&mut ps);
        }
        if pipe.expired() {
            timed_out = true;
            break;
        }
    }
    if interleave && !timed_out {
        pipe.reduce(&mut ps);
    }
    timed_out |= pipe.trace.exhausted && pipe.expired();
    verdict.timings.build = ms(build_start.elapsed().saturating_sub(pipe.reduce_time));
    verdict.timings.reduce = ms(pipe.reduce_time);
    verdict.m_after_reduction = ps.m;
    verdict.trace = std::mem::take(&mut pipe.trace);
    verdict.m_before_reduction = ps.m + verdict.trace.removed_vars();
    if timed_out {
        verdict.status = Status::Timeout;
        return Ok(finish(verdict, downgraded));
    }

    if interleave {
        let rr_status = match classify(&ps) {
            ResidueClass::Identity => Some(Status::Equivalent),
            ResidueClass::IdentityUpToPhase(theta) if policy == PhasePolicy::UpToGlobalPhase => {
                Some(Status::EquivalentUpToGlobalPhase(theta))
            }
            _ => None,
        };
        match (rr_status, cfg.mode) {
            (Some(s), _) => {
                verdict.status = s;
                return Ok(finish(verdict, downgraded));
            }
            (None, Mode::Rr) => {
                verdict.status = Status::Unknown;
                return Ok(finish(verdict, downgraded));
            }
            _ => {}
        }
    }

    let t = Instant::now();
    let inst = encode(&ps);
    verdict.timings.encode = ms(t.elapsed());
    verdict.wmc_vars = Some(inst.var_count);
    verdict.wmc_clauses = Some(inst.clauses.len());
    let t = Instant::now();
    let opts = CountOptions {
        backend: cfg.backend,
        deadline: pipe.deadline,
        use_cache: true,
    };
    let result = count(&inst, opts);
    verdict.timings.count = ms(t.elapsed());
    let result = match result {
        Ok(r) => r,
        Err(CountError::Timeout(stats)) => {
            verdict.count_stats = Some(stats);
            verdict.status = Status::Timeout;
            return Ok(finish(verdict, downgraded));
        }
        Err(CountError::Wmc(e)) => return Err(e.into()),
        Err(CountError::TooLarge(_)) => unreachable!("only brute force has a size limit"),
    };
    verdict.backend = Some(result.backend);
    verdict.count_stats = Some(result.stats);
    let diag = diag_sum_from_count(result.value, ps.m, ps.n);
    verdict.status = decide(&diag, policy);
    verdict.diag_sum = Some(diag);
    Ok(finish(verdict, downgraded))
}

/// Applies the decision rule to a diagonal sum.
pub fn decide(diag: &DiagSum, policy: PhasePolicy) -> Status {
    match policy {
        PhasePolicy::Exact if diag.equals_two_to_n() => Status::Equivalent,
        PhasePolicy::Exact => Status::NotEquivalent,
        PhasePolicy::UpToGlobalPhase if diag.modulus_matches() => {
            Status::EquivalentUpToGlobalPhase(diag.theta())
        }
        PhasePolicy::UpToGlobalPhase => Status::NotEquivalent,
    }
}

fn finish(mut v: Verdict, downgraded: bool) -> Verdict {
    if downgraded && v.status == Status::Equivalent {
        v.status = Status::EquivalentUpToGlobalPhase(Angle::zero());
    }
    v
}

/// Checks many pairs, in parallel when `exec` allows.
pub fn check_batch(
    pairs: &[(Circuit, Circuit)],
    cfg: &CheckConfig,
    exec: Exec,
) -> Vec<Result<Verdict, CheckError>> {
    exec.map_slice(pairs, |(a, b)| check_equivalence(a, b, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    fn circ(n: usize, gates: Vec<Gate>) -> Circuit {
        Circuit::from_gates(n, gates).unwrap()
    }

    fn cfg(mode: Mode) -> CheckConfig {
        CheckConfig {
            mode,
            ..Default::default()
        }
    }

    #[test]
    fn hh_rr_equivalent() {
        let hh = circ(1, vec![Gate::h(0), Gate::h(0)]);
        let v = check_equivalence(&hh, &Circuit::new(1), &cfg(Mode::Rr)).unwrap();
        assert_eq!(v.status, Status::Equivalent);
        assert_eq!(v.trace.steps.len(), 1);
        assert!(v.wmc_vars.is_none());
    }

    #[test]
    fn injected_rz_detected() {
        let a = circ(2, vec![Gate::h(0), Gate::cnot(0, 1), Gate::t(1)]);
        let mut b = a.clone();
        b.push(Gate::rz(Angle::dyadic(1, 2), 0)).unwrap();
        for mode in [Mode::Wmc, Mode::Hybrid] {
            let v = check_equivalence(&a, &b, &cfg(mode)).unwrap();
            assert_eq!(v.status, Status::NotEquivalent, "{mode}");
        }
    }

    #[test]
    fn global_phase_only() {
        // X·Z·X·Z = −I
        let a = Circuit::new(1);
        let b = circ(1, vec![Gate::x(0), Gate::z(0), Gate::x(0), Gate::z(0)]);
        let v = check_equivalence(&a, &b, &cfg(Mode::Wmc)).unwrap();
        assert_eq!(v.status, Status::EquivalentUpToGlobalPhase(Angle::pi()));
        let exact = CheckConfig {
            mode: Mode::Wmc,
            phase_policy: PhasePolicy::Exact,
            ..Default::default()
        };
        let v = check_equivalence(&a, &b, &exact).unwrap();
        assert_eq!(v.status, Status::NotEquivalent);
    }

    #[test]
    fn diag_sum_examples() {
        let d = diag_sum_from_count(ComplexWeight::Cyclotomic(Cyclotomic::from_int(1, 8)), 2, 2);
        assert_eq!(d.exact(), Some(Cyclotomic::from_int(1, 4)));
        assert_eq!(decide(&d, PhasePolicy::Exact), Status::Equivalent);
        let z = diag_sum_from_count(ComplexWeight::Cyclotomic(Cyclotomic::zero(1)), 0, 2);
        assert_eq!(
            decide(&z, PhasePolicy::UpToGlobalPhase),
            Status::NotEquivalent
        );
        // 2^n·ω with ω = e^{iπ/4}
        let w = diag_sum_from_count(
            ComplexWeight::Cyclotomic(Cyclotomic::omega_pow(4, 1).scale(&BigInt::from(2))),
            0,
            1,
        );
        assert_eq!(
            decide(&w, PhasePolicy::UpToGlobalPhase),
            Status::EquivalentUpToGlobalPhase(Angle::dyadic(1, 2))
        );
    }

    #[test]
    fn odd_m_exact_division() {
        // count = 2·√2 with m = 1 gives S = 2
        let c = Cyclotomic::sqrt2(4).unwrap().scale(&BigInt::from(2));
        let d = diag_sum_from_count(ComplexWeight::Cyclotomic(c), 1, 1);
        assert_eq!(d.exact(), Some(Cyclotomic::from_int(4, 2)));
        assert_eq!(decide(&d, PhasePolicy::Exact), Status::Equivalent);
    }

    #[test]
    fn qubit_mismatch() {
        assert_eq!(
            check_equivalence(&Circuit::new(1), &Circuit::new(2), &cfg(Mode::Rr)),
            Err(CheckError::QubitMismatch(1, 2))
        );
    }

    #[test]
    fn ry_downgrades_exact_policy() {
        let a = circ(1, vec![Gate::ry(Angle::float(0.4), 0)]);
        let exact = CheckConfig {
            mode: Mode::Hybrid,
            phase_policy: PhasePolicy::Exact,
            ..Default::default()
        };
        let v = check_equivalence(&a, &a, &exact).unwrap();
        assert!(v.status.is_equivalent());
        assert_ne!(v.status, Status::Equivalent);
        assert_eq!(v.warnings.len(), 1);
    }
}
