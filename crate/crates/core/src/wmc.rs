//! Weighted CNF encoding of a path sum's diagonal sum.
//!
//! Variables are numbered from 1: inputs `x_i → i+1`, path variables
//! `y_j → n+j+1`, then one `s` per phase monomial, then XOR auxiliaries.
//! Each `s` is defined as the conjunction of its monomial and carries
//! `W(s,1) = e^{ik}`, `W(s,0) = 1`. The constraint `O(x,y) = x` selects the
//! diagonal. The constant phase term is kept aside as `phase_offset`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::angle::Angle;
use crate::cyclotomic::Cyclotomic;
use crate::pathsum::PathSum;
use crate::poly::{Monomial, Var};

/// XOR constraints up to this many literals are expanded directly.
pub const XOR_DIRECT_MAX: usize = 6;
/// Largest ring size the automatic backend choice will use.
pub const AUTO_RING_MAX: usize = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WmcError {
    #[error("exact backend requested but the instance has a non-dyadic weight")]
    FloatInExact,
}

/// Requested numeric backend.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendChoice {
    #[default]
    Auto,
    Exact,
    Float,
}

/// Numeric backend actually used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Cyclotomic,
    Float,
}

/// Weight of one literal polarity.
#[derive(Clone, Debug, PartialEq)]
pub enum LiteralWeight {
    /// `e^{iθ}`.
    Phase(Angle),
    Complex(Complex64),
}

impl LiteralWeight {
    pub fn one() -> Self {
        LiteralWeight::Phase(Angle::zero())
    }

    /// Quarter-turn unit values become exact phases.
    pub fn complex(re: f64, im: f64) -> Self {
        match (re, im) {
            (1.0, 0.0) => LiteralWeight::Phase(Angle::zero()),
            (0.0, 1.0) => LiteralWeight::Phase(Angle::dyadic(1, 1)),
            (-1.0, 0.0) => LiteralWeight::Phase(Angle::pi()),
            (0.0, -1.0) => LiteralWeight::Phase(Angle::dyadic(3, 1)),
            _ => LiteralWeight::Complex(Complex64::new(re, im)),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            LiteralWeight::Phase(a) => {
                let (c, s) = a.cos_sin();
                Complex64::new(c, s)
            }
            LiteralWeight::Complex(c) => *c,
        }
    }

    /// Ring size needed to represent this weight exactly.
    fn ring_size(&self) -> Option<usize> {
        match self {
            LiteralWeight::Phase(a) => dyadic_ring_size(a),
            LiteralWeight::Complex(_) => None,
        }
    }

    pub fn to_cyclotomic(&self, n: usize) -> Option<Cyclotomic> {
        match self {
            LiteralWeight::Phase(a) => Cyclotomic::from_angle(n, a),
            LiteralWeight::Complex(_) => None,
        }
    }
}

fn dyadic_ring_size(a: &Angle) -> Option<usize> {
    let b = a.log2_den()?;
    (b < 48).then(|| 1usize << b)
}

/// Weights of both polarities of one variable.
#[derive(Clone, Debug, PartialEq)]
pub struct VarWeight {
    pub neg: LiteralWeight,
    pub pos: LiteralWeight,
}

/// A weighted CNF instance. Unlisted literals have weight 1.
#[derive(Clone, Debug, PartialEq)]
pub struct WmcInstance {
    pub var_count: usize,
    /// DIMACS clauses: nonzero signed 1-based variable indices.
    pub clauses: Vec<Vec<i32>>,
    pub weights: BTreeMap<u32, VarWeight>,
    pub n: usize,
    pub m: usize,
    pub phase_offset: Angle,
}

impl WmcInstance {
    /// Smallest ring size representing every weight and the offset exactly.
    pub fn exact_ring_size(&self) -> Option<usize> {
        let mut size = dyadic_ring_size(&self.phase_offset)?;
        for w in self.weights.values() {
            size = size.max(w.neg.ring_size()?).max(w.pos.ring_size()?);
        }
        Some(size)
    }

    /// Resolves a backend request. `Some(N)` means cyclotomic with ring size `N`.
    pub fn resolve_backend(&self, choice: BackendChoice) -> Result<Option<usize>, WmcError> {
        let exact = self.exact_ring_size();
        match choice {
            BackendChoice::Float => Ok(None),
            BackendChoice::Exact => exact.map(Some).ok_or(WmcError::FloatInExact),
            BackendChoice::Auto => Ok(exact.filter(|&n| n <= AUTO_RING_MAX)),
        }
    }

    pub fn weight(&self, var: u32) -> Option<&VarWeight> {
        self.weights.get(&var)
    }
}

/// Non-constant phase monomials with their coefficients, and the constant term.
pub fn extract_monomials(ps: &PathSum) -> (Vec<(Angle, Monomial)>, Angle) {
    let monos = ps
        .phase
        .terms()
        .filter(|(m, _)| !m.is_one())
        .map(|(m, a)| (a.clone(), m.clone()))
        .collect();
    (monos, ps.phase.constant_term())
}

fn dimacs_var(ps: &PathSum, v: Var) -> i32 {
    match v {
        Var::Input(i) => i as i32 + 1,
        Var::Path(j) => (ps.n + j as usize) as i32 + 1,
    }
}

/// Appends clauses forcing `⊕ vars = rhs`, using fresh auxiliaries from
/// `next_var` for long parities.
fn encode_xor(vars: &[i32], rhs: bool, clauses: &mut Vec<Vec<i32>>, next_var: &mut i32) {
    if vars.len() > XOR_DIRECT_MAX {
        // t ↔ ⊕ head, then ⊕ (t, tail) = rhs
        let split = XOR_DIRECT_MAX - 1;
        let t = *next_var;
        *next_var += 1;
        let mut head: Vec<i32> = vars[..split].to_vec();
        head.push(t);
        encode_xor(&head, false, clauses, next_var);
        let mut rest = vec![t];
        rest.extend_from_slice(&vars[split..]);
        encode_xor(&rest, rhs, clauses, next_var);
        return;
    }
    let k = vars.len();
    for bits in 0u32..(1 << k) {
        // exclude assignment `bits` when its parity is wrong
        if (bits.count_ones() % 2 == 1) == rhs {
            continue;
        }
        let clause = vars
            .iter()
            .enumerate()
            .map(|(i, &v)| if bits >> i & 1 == 1 { -v } else { v })
            .collect();
        clauses.push(clause);
    }
}

/// Encodes `Σ_x ⟨x|ps|x⟩ · √2^m` as a weighted model count.
pub fn encode(ps: &PathSum) -> WmcInstance {
    let (monos, offset) = extract_monomials(ps);
    let first_s = (ps.n + ps.m) as i32 + 1;
    let mut clauses = Vec::new();
    let mut weights = BTreeMap::new();
    for (idx, (k, mono)) in monos.iter().enumerate() {
        let s = first_s + idx as i32;
        let lits: Vec<i32> = mono.vars().iter().map(|&v| dimacs_var(ps, v)).collect();
        for &l in &lits {
            clauses.push(vec![-s, l]);
        }
        let mut back: Vec<i32> = lits.iter().map(|l| -l).collect();
        back.push(s);
        clauses.push(back);
        weights.insert(
            s as u32,
            VarWeight {
                neg: LiteralWeight::one(),
                pos: LiteralWeight::Phase(k.clone()),
            },
        );
    }
    let mut next_var = first_s + monos.len() as i32;
    for (i, o) in ps.outputs.iter().enumerate() {
        let parity = o.xor(&crate::poly::ParityExpr::var(Var::Input(i as u32)));
        let vars: Vec<i32> = parity.vars().iter().map(|&v| dimacs_var(ps, v)).collect();
        if vars.is_empty() {
            if parity.constant {
                clauses.push(Vec::new());
            }
            continue;
        }
        encode_xor(&vars, parity.constant, &mut clauses, &mut next_var);
    }
    WmcInstance {
        var_count: (next_var - 1) as usize,
        clauses,
        weights,
        n: ps.n,
        m: ps.m,
        phase_offset: offset,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Circuit, Gate};
    use crate::poly::{ParityExpr, PhasePolynomial};

    #[test]
    fn identity_has_no_clauses() {
        let inst = encode(&PathSum::identity(3));
        assert_eq!(inst.var_count, 3);
        assert!(inst.clauses.is_empty());
        assert!(inst.weights.is_empty());
    }

    #[test]
    fn single_monomial() {
        let mut phase = PhasePolynomial::zero();
        phase.add_term(Monomial::var(Var::Input(0)), Angle::pi());
        let ps = PathSum {
            n: 1,
            m: 0,
            phase,
            outputs: vec![ParityExpr::var(Var::Input(0))],
        };
        let inst = encode(&ps);
        assert_eq!(inst.var_count, 2);
        assert_eq!(inst.clauses, vec![vec![-2, 1], vec![-1, 2]]);
        assert_eq!(inst.weights[&2].pos, LiteralWeight::Phase(Angle::pi()));
    }

    #[test]
    fn constant_goes_to_offset() {
        let mut phase = PhasePolynomial::zero();
        phase.add_term(Monomial::one(), Angle::dyadic(1, 2));
        let ps = PathSum {
            n: 1,
            m: 0,
            phase,
            outputs: vec![ParityExpr::var(Var::Input(0))],
        };
        let (monos, off) = extract_monomials(&ps);
        assert!(monos.is_empty());
        assert_eq!(off, Angle::dyadic(1, 2));
    }

    #[test]
    fn flipped_output_is_unsat() {
        let ps = PathSum::build(&Circuit::from_gates(1, vec![Gate::x(0)]).unwrap()).unwrap();
        let inst = encode(&ps);
        assert_eq!(inst.clauses, vec![Vec::<i32>::new()]);
    }

    #[test]
    fn long_xor_uses_auxiliaries() {
        let mut clauses = Vec::new();
        let mut next = 20;
        encode_xor(&(1..=9).collect::<Vec<_>>(), true, &mut clauses, &mut next);
        assert_eq!(next, 21);
        // brute-force: projected onto 1..=9, exactly the odd assignments survive
        for a in 0u32..(1 << 9) {
            let sat = |t: bool| {
                clauses.iter().all(|c| {
                    c.iter().any(|&l| {
                        let v = l.unsigned_abs();
                        let val = if v == 20 { t } else { a >> (v - 1) & 1 == 1 };
                        val == (l > 0)
                    })
                })
            };
            let models = [false, true].iter().filter(|&&t| sat(t)).count();
            assert_eq!(models, (a.count_ones() % 2) as usize);
        }
    }

    #[test]
    fn backend_resolution() {
        let mut phase = PhasePolynomial::zero();
        phase.add_term(Monomial::var(Var::Input(0)), Angle::dyadic(1, 2));
        let mut ps = PathSum::identity(1);
        ps.phase = phase;
        let inst = encode(&ps);
        assert_eq!(inst.resolve_backend(BackendChoice::Auto), Ok(Some(4)));
        ps.phase
            .add_term(Monomial::var(Var::Input(0)), Angle::float(0.1));
        let inst = encode(&ps);
        assert_eq!(inst.resolve_backend(BackendChoice::Auto), Ok(None));
        assert_eq!(
            inst.resolve_backend(BackendChoice::Exact),
            Err(WmcError::FloatInExact)
        );
    }
}
