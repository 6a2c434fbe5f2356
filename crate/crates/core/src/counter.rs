//! Exact complex-weighted model counting.
//!
//! A DPLL search with watched-literal unit propagation, connected-component
//! decomposition and a component cache, generic over the weight semiring. A
//! brute-force enumerator serves as the reference.

use std::collections::HashMap;
use std::time::Instant;

use log::debug;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::Cyclotomic;
use crate::exec::Exec;
use crate::weight::{ComplexWeight, Weight};
use crate::wmc::{Backend, BackendChoice, LiteralWeight, WmcError, WmcInstance};

/// Variables and clause ids of one connected component.
type Component = (Vec<u32>, Vec<u32>);

/// Variable limit for [`brute_force_count`].
pub const BRUTE_FORCE_MAX_VARS: usize = 25;
/// Decisions between deadline checks.
const DEADLINE_CHECK_INTERVAL: u64 = 1 << 12;
const SOLVER_STACK_BYTES: usize = 512 << 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CountStats {
    pub decisions: u64,
    pub propagations: u64,
    pub components: u64,
    pub cache_hits: u64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CountError {
    #[error("model counting timed out after {} decisions", .0.decisions)]
    Timeout(CountStats),
    #[error(transparent)]
    Wmc(#[from] WmcError),
    #[error("brute force limited to {BRUTE_FORCE_MAX_VARS} variables, instance has {0}")]
    TooLarge(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountResult {
    /// Weighted model count times `e^{i·phase_offset}`.
    pub value: ComplexWeight,
    /// Weighted model count alone.
    pub raw: ComplexWeight,
    pub backend: Backend,
    pub stats: CountStats,
}

#[derive(Clone, Copy, Debug)]
pub struct CountOptions {
    pub backend: BackendChoice,
    pub deadline: Option<Instant>,
    pub use_cache: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            backend: BackendChoice::Auto,
            deadline: None,
            use_cache: true,
        }
    }
}

/// Literal `2v + neg` over 0-based variable `v`.
type Lit = u32;

fn lit_of(dimacs: i32) -> Lit {
    let v = dimacs.unsigned_abs() - 1;
    2 * v + (dimacs < 0) as u32
}

fn var_of(l: Lit) -> usize {
    (l >> 1) as usize
}

fn is_neg(l: Lit) -> bool {
    l & 1 == 1
}

const UNASSIGNED: i8 = -1;

struct Solver<W: Weight> {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    /// Clauses each variable occurs in.
    occurs: Vec<Vec<usize>>,
    assign: Vec<i8>,
    trail: Vec<usize>,
    qhead: usize,
    w0: Vec<W>,
    w1: Vec<W>,
    zero: W,
    one: W,
    cache: HashMap<(Vec<u32>, Vec<u32>), W>,
    use_cache: bool,
    deadline: Option<Instant>,
    stats: CountStats,
    // scratch space for component search, indexed by variable / clause
    var_mark: Vec<u32>,
    clause_mark: Vec<u32>,
    stamp: u32,
}

enum Setup {
    Unsat,
    Ready,
}

impl<W: Weight> Solver<W> {
    fn new(inst: &WmcInstance, w0: Vec<W>, w1: Vec<W>, one: W, opts: &CountOptions) -> Self {
        let nv = inst.var_count;
        let mut clauses = Vec::with_capacity(inst.clauses.len());
        for c in &inst.clauses {
            let mut lits: Vec<Lit> = c.iter().map(|&l| lit_of(l)).collect();
            lits.sort_unstable();
            lits.dedup();
            // tautologies hold under every assignment
            if lits.windows(2).any(|w| w[0] ^ 1 == w[1]) {
                continue;
            }
            clauses.push(lits);
        }
        let mut occurs = vec![Vec::new(); nv];
        for (ci, c) in clauses.iter().enumerate() {
            for &l in c {
                occurs[var_of(l)].push(ci);
            }
        }
        let nc = clauses.len();
        Solver {
            clauses,
            watches: vec![Vec::new(); 2 * nv],
            occurs,
            assign: vec![UNASSIGNED; nv],
            trail: Vec::new(),
            qhead: 0,
            w0,
            w1,
            zero: one.zero_like(),
            one,
            cache: HashMap::new(),
            use_cache: opts.use_cache,
            deadline: opts.deadline,
            stats: CountStats::default(),
            var_mark: vec![0; nv],
            clause_mark: vec![0; nc],
            stamp: 0,
        }
    }

    fn value(&self, l: Lit) -> i8 {
        match self.assign[var_of(l)] {
            UNASSIGNED => UNASSIGNED,
            a => (a == 1) as i8 ^ is_neg(l) as i8,
        }
    }

    fn enqueue(&mut self, l: Lit) {
        self.assign[var_of(l)] = !is_neg(l) as i8;
        self.trail.push(var_of(l));
    }

    fn setup(&mut self) -> Setup {
        let mut units = Vec::new();
        for (ci, c) in self.clauses.iter().enumerate() {
            match c.len() {
                0 => return Setup::Unsat,
                1 => units.push(c[0]),
                _ => {
                    self.watches[(c[0] ^ 1) as usize].push(ci);
                    self.watches[(c[1] ^ 1) as usize].push(ci);
                }
            }
        }
        for l in units {
            match self.value(l) {
                0 => return Setup::Unsat,
                1 => {}
                _ => self.enqueue(l),
            }
        }
        if self.propagate() {
            Setup::Ready
        } else {
            Setup::Unsat
        }
    }

    /// Unit propagation from `qhead`. Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let v = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            // the literal of v that just became false
            let false_lit = 2 * v as u32 + (self.assign[v] == 1) as u32;
            let watch_idx = (false_lit ^ 1) as usize;
            let mut ws = std::mem::take(&mut self.watches[watch_idx]);
            let mut i = 0;
            let mut ok = true;
            while i < ws.len() {
                let ci = ws[i];
                let c = &mut self.clauses[ci];
                if c[0] == false_lit {
                    c.swap(0, 1);
                }
                let first = c[0];
                if self.assign[var_of(first)] != UNASSIGNED
                    && (self.assign[var_of(first)] == 1) != is_neg(first)
                {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..c.len() {
                    let l = c[k];
                    let a = self.assign[var_of(l)];
                    if a == UNASSIGNED || (a == 1) != is_neg(l) {
                        c.swap(1, k);
                        self.watches[(c[1] ^ 1) as usize].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    ws.swap_remove(i);
                    continue;
                }
                i += 1;
                match self.value(first) {
                    0 => {
                        ok = false;
                        break;
                    }
                    UNASSIGNED => self.enqueue(first),
                    _ => {}
                }
            }
            // watch lists may have grown for this literal meanwhile
            let grown = std::mem::take(&mut self.watches[watch_idx]);
            ws.extend(grown);
            self.watches[watch_idx] = ws;
            if !ok {
                self.qhead = self.trail.len();
                return false;
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        for &v in &self.trail[mark..] {
            self.assign[v] = UNASSIGNED;
        }
        self.trail.truncate(mark);
        self.qhead = mark;
    }

    fn clause_satisfied(&self, ci: usize) -> bool {
        self.clauses[ci].iter().any(|&l| self.value(l) == 1)
    }

    fn weight_of(&self, v: usize, val: bool) -> &W {
        if val {
            &self.w1[v]
        } else {
            &self.w0[v]
        }
    }

    fn next_stamp(&mut self) -> u32 {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.var_mark.iter_mut().for_each(|m| *m = 0);
            self.clause_mark.iter_mut().for_each(|m| *m = 0);
            self.stamp = 1;
        }
        self.stamp
    }

    /// Splits the unsatisfied clauses among `clauses` into connected
    /// components over unassigned variables. Unassigned variables of `vars`
    /// outside every component are returned as free.
    fn components(&mut self, vars: &[u32], clauses: &[u32]) -> (Vec<Component>, Vec<u32>) {
        let live: Vec<u32> = clauses
            .iter()
            .copied()
            .filter(|&ci| !self.clause_satisfied(ci as usize))
            .collect();
        let stamp = self.next_stamp();
        for &ci in &live {
            self.clause_mark[ci as usize] = stamp;
        }
        let visited = self.next_stamp();
        let mut comps = Vec::new();
        for &start in &live {
            if self.clause_mark[start as usize] != stamp {
                continue;
            }
            self.clause_mark[start as usize] = visited;
            let mut comp_clauses = vec![start];
            let mut comp_vars = Vec::new();
            let mut head = 0;
            while head < comp_clauses.len() {
                let ci = comp_clauses[head] as usize;
                head += 1;
                for k in 0..self.clauses[ci].len() {
                    let v = var_of(self.clauses[ci][k]);
                    if self.assign[v] != UNASSIGNED || self.var_mark[v] == visited {
                        continue;
                    }
                    self.var_mark[v] = visited;
                    comp_vars.push(v as u32);
                    for &cj in &self.occurs[v] {
                        if self.clause_mark[cj] == stamp {
                            self.clause_mark[cj] = visited;
                            comp_clauses.push(cj as u32);
                        }
                    }
                }
            }
            comp_vars.sort_unstable();
            comp_clauses.sort_unstable();
            comps.push((comp_vars, comp_clauses));
        }
        let free = vars
            .iter()
            .copied()
            .filter(|&v| {
                self.assign[v as usize] == UNASSIGNED && self.var_mark[v as usize] != visited
            })
            .collect();
        (comps, free)
    }

    /// Product of the component counts and free-variable sums.
    fn count_residual(&mut self, vars: &[u32], clauses: &[u32]) -> Result<W, CountError> {
        let (comps, free) = self.components(vars, clauses);
        let mut acc = self.one.clone();
        for v in free {
            let v = v as usize;
            acc = acc.mul(&self.w0[v].add(&self.w1[v]));
        }
        for (cv, cc) in comps {
            if acc.is_zero() {
                break;
            }
            let c = self.count_component(cv, cc)?;
            acc = acc.mul(&c);
        }
        Ok(acc)
    }

    fn pick_branch(&self, clauses: &[u32]) -> usize {
        let residual_len = |ci: usize| {
            self.clauses[ci]
                .iter()
                .filter(|&&l| self.assign[var_of(l)] == UNASSIGNED)
                .count()
        };
        let shortest = clauses
            .iter()
            .map(|&ci| residual_len(ci as usize))
            .min()
            .expect("components are non-empty");
        let mut counts: HashMap<usize, u32> = HashMap::new();
        for &ci in clauses {
            let ci = ci as usize;
            if residual_len(ci) != shortest {
                continue;
            }
            for &l in &self.clauses[ci] {
                if self.assign[var_of(l)] == UNASSIGNED {
                    *counts.entry(var_of(l)).or_default() += 1;
                }
            }
        }
        counts
            .into_iter()
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .map(|(v, _)| v)
            .expect("shortest clause has an unassigned literal")
    }

    fn count_component(&mut self, vars: Vec<u32>, clauses: Vec<u32>) -> Result<W, CountError> {
        self.stats.components += 1;
        let key = (vars, clauses);
        if self.use_cache {
            if let Some(w) = self.cache.get(&key) {
                self.stats.cache_hits += 1;
                return Ok(w.clone());
            }
        }
        let (vars, clauses) = &key;
        let v = self.pick_branch(clauses);
        let mut total = self.zero.clone();
        for val in [false, true] {
            let w = self.weight_of(v, val).clone();
            if w.is_zero() {
                continue;
            }
            self.stats.decisions += 1;
            if (self.stats.decisions - 1).is_multiple_of(DEADLINE_CHECK_INTERVAL)
                && self.deadline.is_some_and(|d| Instant::now() >= d)
            {
                return Err(CountError::Timeout(self.stats));
            }
            let mark = self.trail.len();
            self.enqueue(2 * v as u32 + (!val) as u32);
            if self.propagate() {
                let mut prod = w;
                for i in mark + 1..self.trail.len() {
                    let u = self.trail[i];
                    prod = prod.mul(self.weight_of(u, self.assign[u] == 1));
                }
                if !prod.is_zero() {
                    let rest = self.count_residual(vars, clauses);
                    match rest {
                        Ok(r) => total = total.add(&prod.mul(&r)),
                        Err(e) => {
                            self.undo(mark);
                            return Err(e);
                        }
                    }
                }
            }
            self.undo(mark);
        }
        if self.use_cache {
            self.cache.insert(key, total.clone());
        }
        Ok(total)
    }

    fn run(mut self) -> Result<(W, CountStats), CountError> {
        if let Setup::Unsat = self.setup() {
            return Ok((self.zero.clone(), self.stats));
        }
        let mut forced = self.one.clone();
        for i in 0..self.trail.len() {
            let u = self.trail[i];
            forced = forced.mul(self.weight_of(u, self.assign[u] == 1));
        }
        let vars: Vec<u32> = (0..self.assign.len() as u32).collect();
        let clauses: Vec<u32> = (0..self.clauses.len() as u32).collect();
        let rest = self.count_residual(&vars, &clauses)?;
        Ok((forced.mul(&rest), self.stats))
    }
}

fn weights_as<W: Weight>(
    inst: &WmcInstance,
    one: &W,
    conv: impl Fn(&LiteralWeight) -> W,
) -> (Vec<W>, Vec<W>) {
    let mut w0 = vec![one.clone(); inst.var_count];
    let mut w1 = vec![one.clone(); inst.var_count];
    for (&v, w) in &inst.weights {
        let i = v as usize - 1;
        w0[i] = conv(&w.neg);
        w1[i] = conv(&w.pos);
    }
    (w0, w1)
}

fn run_on_big_stack<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> T {
    std::thread::Builder::new()
        .name("wmc-solver".into())
        .stack_size(SOLVER_STACK_BYTES)
        .spawn(f)
        .expect("spawning the solver thread")
        .join()
        .unwrap_or_else(|e| std::panic::resume_unwind(e))
}

fn offset_factor(inst: &WmcInstance, ring: Option<usize>) -> ComplexWeight {
    match ring {
        Some(n) => ComplexWeight::Cyclotomic(
            Cyclotomic::from_angle(n, &inst.phase_offset).expect("ring covers the offset"),
        ),
        None => ComplexWeight::FloatC(LiteralWeight::Phase(inst.phase_offset.clone()).to_complex()),
    }
}

fn finish(
    inst: &WmcInstance,
    ring: Option<usize>,
    raw: ComplexWeight,
    stats: CountStats,
) -> CountResult {
    let value = raw
        .mul(&offset_factor(inst, ring))
        .expect("offset lives in the count's ring");
    CountResult {
        value,
        raw,
        backend: if ring.is_some() {
            Backend::Cyclotomic
        } else {
            Backend::Float
        },
        stats,
    }
}

/// Weighted model count of `inst`, times `e^{i·phase_offset}`.
pub fn count(inst: &WmcInstance, opts: CountOptions) -> Result<CountResult, CountError> {
    let ring = inst.resolve_backend(opts.backend)?;
    let owned = inst.clone();
    let (raw, stats) = match ring {
        Some(n) => run_on_big_stack(move || {
            let one = Cyclotomic::one(n);
            let (w0, w1) = weights_as(&owned, &one, |w| {
                w.to_cyclotomic(n).expect("ring covers every weight")
            });
            Solver::new(&owned, w0, w1, one, &opts)
                .run()
                .map(|(w, s)| (ComplexWeight::Cyclotomic(w), s))
        })?,
        None => run_on_big_stack(move || {
            let one = Complex64::new(1.0, 0.0);
            let (w0, w1) = weights_as(&owned, &one, LiteralWeight::to_complex);
            Solver::new(&owned, w0, w1, one, &opts)
                .run()
                .map(|(w, s)| (ComplexWeight::FloatC(w), s))
        })?,
    };
    debug!(
        "counted {} vars / {} clauses: {} decisions, {} cache hits",
        inst.var_count,
        inst.clauses.len(),
        stats.decisions,
        stats.cache_hits
    );
    Ok(finish(inst, ring, raw, stats))
}

/// Number of equal-size enumeration chunks; fixed so the float summation
/// order does not depend on the thread count.
const BRUTE_FORCE_CHUNKS: usize = 64;

pub fn brute_force_count(
    inst: &WmcInstance,
    backend: BackendChoice,
) -> Result<CountResult, CountError> {
    brute_force_count_with(inst, backend, Exec::default())
}

/// Sums weight products over all `2^var_count` assignments satisfying every
/// clause.
pub fn brute_force_count_with(
    inst: &WmcInstance,
    backend: BackendChoice,
    exec: Exec,
) -> Result<CountResult, CountError> {
    let nv = inst.var_count;
    if nv > BRUTE_FORCE_MAX_VARS {
        return Err(CountError::TooLarge(nv));
    }
    let ring = inst.resolve_backend(backend)?;
    // clause as (positive mask, negative mask)
    let masks: Vec<(u32, u32)> = inst
        .clauses
        .iter()
        .map(|c| {
            c.iter().fold((0u32, 0u32), |(p, n), &l| {
                let bit = 1u32 << (l.unsigned_abs() - 1);
                if l > 0 {
                    (p | bit, n)
                } else {
                    (p, n | bit)
                }
            })
        })
        .collect();
    let satisfies = |a: u32| masks.iter().all(|&(p, n)| a & p != 0 || !a & n != 0);
    let weighted: Vec<(usize, &LiteralWeight, &LiteralWeight)> = inst
        .weights
        .iter()
        .map(|(&v, w)| (v as usize - 1, &w.neg, &w.pos))
        .collect();
    let total: u64 = 1u64 << nv;
    let chunks = BRUTE_FORCE_CHUNKS.min(total as usize);
    let per = total / chunks as u64;

    let raw = match ring {
        Some(n) => {
            // every exact weight is a power of ω, so count exponents mod 2N
            let exps: Vec<(usize, i64, i64)> = weighted
                .iter()
                .map(|&(v, neg, pos)| (v, omega_exponent(neg, n), omega_exponent(pos, n)))
                .collect();
            let hists = exec.map_indices(chunks, |k| {
                let mut hist = vec![0u64; 2 * n];
                for a in (k as u64 * per)..((k as u64 + 1) * per) {
                    let a = a as u32;
                    if !satisfies(a) {
                        continue;
                    }
                    let t: i64 = exps
                        .iter()
                        .map(|&(v, e0, e1)| if a >> v & 1 == 1 { e1 } else { e0 })
                        .sum();
                    hist[t.rem_euclid(2 * n as i64) as usize] += 1;
                }
                hist
            });
            let mut acc = Cyclotomic::zero(n);
            for hist in hists {
                for (t, &c) in hist.iter().enumerate() {
                    if c > 0 {
                        acc = acc.add(&Cyclotomic::omega_pow(n, t as i64).scale(&c.into()));
                    }
                }
            }
            ComplexWeight::Cyclotomic(acc)
        }
        None => {
            let vals: Vec<(usize, Complex64, Complex64)> = weighted
                .iter()
                .map(|&(v, neg, pos)| (v, neg.to_complex(), pos.to_complex()))
                .collect();
            let sums = exec.map_indices(chunks, |k| {
                let mut s = Complex64::new(0.0, 0.0);
                for a in (k as u64 * per)..((k as u64 + 1) * per) {
                    let a = a as u32;
                    if !satisfies(a) {
                        continue;
                    }
                    let w: Complex64 = vals
                        .iter()
                        .map(|&(v, w0, w1)| if a >> v & 1 == 1 { w1 } else { w0 })
                        .product();
                    s += w;
                }
                s
            });
            ComplexWeight::FloatC(sums.into_iter().sum())
        }
    };
    Ok(finish(inst, ring, raw, CountStats::default()))
}

fn omega_exponent(w: &LiteralWeight, n: usize) -> i64 {
    let LiteralWeight::Phase(a) = w else {
        unreachable!("exact rings only hold phase weights")
    };
    let c = Cyclotomic::from_angle(n, a).expect("ring covers every weight");
    let (coef, t) = c.as_monomial().expect("phases are single powers of ω");
    if coef.sign() == num_bigint::Sign::Minus {
        t as i64 + n as i64
    } else {
        t as i64
    }
}
