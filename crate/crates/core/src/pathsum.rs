//! Path-sum representation `⟨y, Φ, O⟩` of a circuit's unitary.
//!
//! `⟨x'|U|x⟩ = 2^{-m/2} Σ_{y ∈ {0,1}^m} e^{iΦ(x,y)} [x' = O(x,y)]`.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::angle::Angle;
use crate::circuit::{decompose, Circuit, Gate, GateKind};
use crate::exec::Exec;
use crate::matrix::DenseMatrix;
use crate::poly::{IntPoly, Mod2Lift, Monomial, ParityExpr, PhasePolynomial, PolyError, Var};

/// `n + m` above which brute-force evaluation is refused.
pub const EVAL_MAX_VARS: usize = 22;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PathSumError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("path sums over {left} and {right} qubits cannot be composed")]
    QubitCountMismatch { left: usize, right: usize },
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("brute-force evaluation over {vars} variables exceeds the limit of {EVAL_MAX_VARS}")]
    TooLargeToEvaluate { vars: usize },
    #[error("substituted variable {0} occurs in an output but its replacement is not affine")]
    NonAffineOutput(Var),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathSum {
    pub n: usize,
    pub m: usize,
    pub phase: PhasePolynomial,
    pub outputs: Vec<ParityExpr>,
}

/// Modulus (as a power of two) under which integer multiples of `a` are
/// taken modulo 2π; `None` for float angles.
pub(crate) fn coeff_modulus(a: &Angle) -> Option<u32> {
    a.log2_den().map(|b| b + 1)
}

impl PathSum {
    /// `⟨∅, 0, [x_0, …, x_{n-1}]⟩`.
    pub fn identity(n: usize) -> Self {
        PathSum {
            n,
            m: 0,
            phase: PhasePolynomial::zero(),
            outputs: (0..n)
                .map(|i| ParityExpr::var(Var::Input(i as u32)))
                .collect(),
        }
    }

    /// Path sum of a circuit, built gate by gate from the identity.
    pub fn build(c: &Circuit) -> Result<Self, PathSumError> {
        let mut ps = PathSum::identity(c.n);
        for g in &decompose(c).gates {
            ps.apply_gate(g)?;
        }
        Ok(ps)
    }

    pub fn path_var(&mut self) -> Var {
        let v = Var::Path(self.m as u32);
        self.m += 1;
        v
    }

    fn output(&self, q: usize) -> Result<&ParityExpr, PathSumError> {
        self.outputs.get(q).ok_or(PathSumError::QubitOutOfRange {
            qubit: q,
            n: self.n,
        })
    }

    /// Integer cast of output `q`, or a gadget variable equal to it when the
    /// cast is too large to expand.
    fn cast_output(&mut self, q: usize, modulus: Option<u32>) -> Result<IntPoly, PathSumError> {
        let parity = self.output(q)?.clone();
        match IntPoly::cast(&parity, modulus) {
            Ok(p) => Ok(p),
            Err(PolyError::CastTooLarge(_) | PolyError::TooManyTerms) => {
                Ok(IntPoly::var(self.parity_gadget(&parity)))
            }
            Err(e) => Err(e.into()),
        }
    }

    /// Adds path variables `w, z` with phase `π·w·(z ⊕ parity)`. Summing
    /// over `w` contributes `2·[z = parity]`, which cancels the two extra
    /// `1/√2` factors, so `z` stands for the parity. Returns `z`.
    pub fn parity_gadget(&mut self, parity: &ParityExpr) -> Var {
        let w = self.path_var();
        let z = self.path_var();
        let linked = parity.xor(&ParityExpr::var(z));
        let linear = IntPoly::cast(&linked, Some(1)).expect("parities are linear modulo 2");
        self.phase
            .add_scaled(&Angle::pi(), &linear.mul_monomial(&Monomial::var(w)));
        z
    }

    /// Appends one gate. Non-primitive gates are decomposed first.
    pub fn apply_gate(&mut self, g: &Gate) -> Result<(), PathSumError> {
        match g.kind {
            GateKind::H => {
                let t = g.qubits[0];
                let parity = IntPoly::cast(self.output(t)?, Some(1))?;
                let y = self.path_var();
                self.phase
                    .add_scaled(&Angle::pi(), &parity.mul_monomial(&Monomial::var(y)));
                self.outputs[t] = ParityExpr::var(y);
            }
            GateKind::X => {
                let t = g.qubits[0];
                self.outputs[t] = self.output(t)?.negate();
            }
            GateKind::Cnot => {
                let (c, t) = (g.qubits[0], g.qubits[1]);
                self.outputs[t] = self.output(t)?.xor(self.output(c)?);
            }
            GateKind::Rz => {
                let theta = g.angle.as_ref().expect("rz carries an angle");
                let modulus = coeff_modulus(theta);
                let p = self.cast_output(g.qubits[0], modulus)?;
                self.phase.add_scaled(theta, &p);
            }
            GateKind::Crz => {
                let theta = g.angle.as_ref().expect("crz carries an angle");
                let modulus = coeff_modulus(theta);
                let pc = self.cast_output(g.qubits[0], modulus)?;
                let pt = self.cast_output(g.qubits[1], modulus)?;
                let prod = match pc.mul(&pt, modulus) {
                    Ok(p) => p,
                    Err(PolyError::TooManyTerms) => {
                        let zc = self.parity_gadget(&self.output(g.qubits[0])?.clone());
                        let zt = self.parity_gadget(&self.output(g.qubits[1])?.clone());
                        IntPoly::monomial(Monomial::from_vars([zc, zt]), 1)
                    }
                    Err(e) => return Err(e.into()),
                };
                self.phase.add_scaled(theta, &prod);
            }
            _ => {
                let single = Circuit {
                    n: self.n,
                    gates: vec![g.clone()],
                };
                for h in decompose(&single).gates {
                    self.apply_gate(&h)?;
                }
            }
        }
        Ok(())
    }

    /// The path sum of "`self` then `other`": `other`'s inputs are replaced
    /// by `self`'s outputs and its path variables are shifted past `self`'s.
    pub fn compose(&self, other: &PathSum) -> Result<PathSum, PathSumError> {
        if self.n != other.n {
            return Err(PathSumError::QubitCountMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let shift = self.m as u32;
        let rename = move |v: Var| match v {
            Var::Path(j) => Var::Path(j + shift),
            x => x,
        };
        let mut phase = self.phase.clone();
        for (mono, a) in other.phase.terms() {
            let modulus = coeff_modulus(a);
            let mut term = IntPoly::constant(1);
            for &v in mono.vars() {
                let factor = match v {
                    Var::Input(i) => IntPoly::cast(&self.outputs[i as usize], modulus)?,
                    p => IntPoly::var(rename(p)),
                };
                term = term.mul(&factor, modulus)?;
            }
            phase.add_scaled(a, &term);
        }
        let outputs = other
            .outputs
            .iter()
            .map(|o| {
                let mut out = ParityExpr::from_vars([], o.constant);
                for &v in o.vars() {
                    let part = match v {
                        Var::Input(i) => self.outputs[i as usize].clone(),
                        p => ParityExpr::var(rename(p)),
                    };
                    out = out.xor(&part);
                }
                out
            })
            .collect();
        Ok(PathSum {
            n: self.n,
            m: self.m + other.m,
            phase,
            outputs,
        })
    }

    pub fn in_outputs(&self, v: Var) -> bool {
        self.outputs.iter().any(|o| o.contains(v))
    }

    /// Replaces path variable `v` everywhere by the Boolean function `by`.
    /// Outputs mentioning `v` require `by` to be affine.
    pub fn substitute(&mut self, v: Var, by: &Mod2Lift) -> Result<(), PathSumError> {
        if self.in_outputs(v) {
            let parity = by.as_parity().ok_or(PathSumError::NonAffineOutput(v))?;
            for o in &mut self.outputs {
                *o = o.substitute(v, &parity);
            }
        }
        let with_v = self.phase.split_off_var(v);
        let mut lifted: HashMap<Option<u32>, IntPoly> = HashMap::new();
        for (rest, a) in with_v.terms() {
            let modulus = coeff_modulus(a);
            if let std::collections::hash_map::Entry::Vacant(e) = lifted.entry(modulus) {
                e.insert(by.lifted_mod(modulus)?);
            }
            let l = &lifted[&modulus];
            self.phase.add_scaled(a, &l.mul_monomial(rest));
        }
        Ok(())
    }

    /// Drops the given path variables (which must no longer occur) and
    /// renumbers the remaining ones densely, preserving order.
    pub fn remove_path_vars(&mut self, removed: &[u32]) {
        let mut removed = removed.to_vec();
        removed.sort_unstable();
        removed.dedup();
        debug_assert!(removed
            .iter()
            .all(|&j| !self.phase.mentions(Var::Path(j)) && !self.in_outputs(Var::Path(j))));
        let rename = |v: Var| match v {
            Var::Path(j) => Var::Path(j - removed.partition_point(|&r| r < j) as u32),
            x => x,
        };
        self.phase = self.phase.map_vars(rename);
        self.outputs = self.outputs.iter().map(|o| o.map_vars(rename)).collect();
        self.m -= removed.len();
    }

    /// Path variables that occur nowhere in the phase or outputs.
    pub fn unused_path_vars(&self) -> Vec<u32> {
        (0..self.m as u32)
            .filter(|&j| {
                let v = Var::Path(j);
                !self.phase.mentions(v) && !self.in_outputs(v)
            })
            .collect()
    }

    fn check_eval_size(&self) -> Result<(), PathSumError> {
        let vars = self.n + self.m;
        if vars > EVAL_MAX_VARS {
            return Err(PathSumError::TooLargeToEvaluate { vars });
        }
        Ok(())
    }

    /// Column `x` of the represented operator.
    fn column(&self, x: usize) -> Vec<Complex64> {
        let mut col = vec![Complex64::new(0.0, 0.0); 1 << self.n];
        let norm = 2f64.powf(-(self.m as f64) / 2.0);
        for y in 0..(1usize << self.m) {
            let assign = |v: Var| match v {
                Var::Input(i) => x >> i & 1 == 1,
                Var::Path(j) => y >> j & 1 == 1,
            };
            let out = self
                .outputs
                .iter()
                .enumerate()
                .fold(0usize, |acc, (i, o)| acc | (o.eval(&assign) as usize) << i);
            col[out] += Complex64::from_polar(norm, self.phase.eval(&assign));
        }
        col
    }

    /// `⟨out|U|input⟩` by summing over all path assignments.
    pub fn evaluate(&self, input: usize, out: usize) -> Result<Complex64, PathSumError> {
        self.check_eval_size()?;
        Ok(self.column(input)[out])
    }

    /// The dense matrix of the represented operator.
    pub fn to_matrix(&self) -> Result<DenseMatrix, PathSumError> {
        self.to_matrix_with(Exec::default())
    }

    pub fn to_matrix_with(&self, exec: Exec) -> Result<DenseMatrix, PathSumError> {
        self.check_eval_size()?;
        Ok(DenseMatrix::from_columns(
            exec.map_indices(1 << self.n, |x| self.column(x)),
        ))
    }
}

impl fmt::Display for PathSum {
    /// `⟨{y0,y1}, pi*(x0*y0 + y0*y1), [y1]⟩`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ys: Vec<String> = (0..self.m).map(|j| format!("y{j}")).collect();
        let outs: Vec<String> = self.outputs.iter().map(|o| o.to_string()).collect();
        write!(
            f,
            "⟨{{{}}}, {}, [{}]⟩",
            ys.join(","),
            self.phase,
            outs.join(", ")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::dagger;
    use crate::matrix::unitary_oracle;

    fn circ(n: usize, gates: Vec<Gate>) -> Circuit {
        Circuit::from_gates(n, gates).unwrap()
    }

    #[test]
    fn single_h() {
        let ps = PathSum::build(&circ(1, vec![Gate::h(0)])).unwrap();
        assert_eq!(ps.to_string(), "⟨{y0}, pi*x0*y0, [y0]⟩");
    }

    #[test]
    fn hh_before_reduction() {
        let ps = PathSum::build(&circ(1, vec![Gate::h(0), Gate::h(0)])).unwrap();
        assert_eq!(ps.to_string(), "⟨{y0,y1}, pi*(x0*y0 + y0*y1), [y1]⟩");
        assert!(ps.to_matrix().unwrap().is_identity(1e-12));
    }

    #[test]
    fn crz_phase() {
        let ps = PathSum::build(&circ(2, vec![Gate::crz(Angle::dyadic(1, 1), 0, 1)])).unwrap();
        assert_eq!(ps.m, 0);
        assert_eq!(ps.phase.to_string(), "pi/2*x0*x1");
    }

    #[test]
    fn matches_oracle() {
        let c = circ(
            3,
            vec![
                Gate::h(0),
                Gate::cnot(0, 1),
                Gate::t(1),
                Gate::h(2),
                Gate::crz(Angle::dyadic(3, 2), 2, 0),
                Gate::x(1),
                Gate::ccx(0, 1, 2),
                Gate::rz(Angle::float(0.3), 2),
                Gate::h(1),
            ],
        );
        let ps = PathSum::build(&c).unwrap();
        let u = unitary_oracle(&c).unwrap();
        assert!(ps.to_matrix().unwrap().approx_eq(&u, 1e-9));
    }

    #[test]
    fn compose_is_product() {
        let a = circ(2, vec![Gate::h(0), Gate::cnot(0, 1), Gate::s(1)]);
        let b = circ(
            2,
            vec![Gate::h(1), Gate::crz(Angle::dyadic(1, 2), 1, 0), Gate::x(0)],
        );
        let pa = PathSum::build(&a).unwrap();
        let pb = PathSum::build(&b).unwrap();
        let composed = pa.compose(&pb).unwrap().to_matrix().unwrap();
        let want = unitary_oracle(&b)
            .unwrap()
            .mul(&unitary_oracle(&a).unwrap());
        assert!(composed.approx_eq(&want, 1e-9));
    }

    #[test]
    fn miter_is_identity() {
        let a = circ(
            2,
            vec![Gate::h(0), Gate::cnot(0, 1), Gate::t(0), Gate::h(1)],
        );
        let ps = PathSum::build(&a.concat(&dagger(&a)).unwrap()).unwrap();
        assert!(ps.to_matrix().unwrap().is_identity(1e-9));
    }

    #[test]
    fn gadget_preserves_operator() {
        // rz after a cnot ladder, with the cast forced through the gadget
        let c = circ(
            3,
            vec![Gate::h(0), Gate::cnot(0, 1), Gate::cnot(1, 2), Gate::h(2)],
        );
        let mut direct = PathSum::build(&c).unwrap();
        let mut gadget = direct.clone();
        let theta = Angle::dyadic(3, 3);
        direct.apply_gate(&Gate::rz(theta.clone(), 1)).unwrap();
        let parity = gadget.outputs[1].clone();
        let z = gadget.parity_gadget(&parity);
        gadget.phase.add_scaled(&theta, &IntPoly::var(z));
        let a = direct.to_matrix().unwrap();
        let b = gadget.to_matrix().unwrap();
        assert!(a.approx_eq(&b, 1e-12));
    }

    #[test]
    fn long_parity_uses_gadget() {
        let n = 20;
        let mut gates: Vec<Gate> = (0..n - 1).map(|i| Gate::cnot(i, n - 1)).collect();
        gates.push(Gate::rz(Angle::float(0.25), n - 1));
        let ps = PathSum::build(&circ(n, gates)).unwrap();
        assert_eq!(ps.m, 2);
    }

    #[test]
    fn eval_guard() {
        let mut ps = PathSum::identity(12);
        ps.m = 11;
        assert!(matches!(
            ps.to_matrix(),
            Err(PathSumError::TooLargeToEvaluate { vars: 23 })
        ));
    }
}
