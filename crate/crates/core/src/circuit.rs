//! Gate-level circuit IR, inversion, and lowering to the primitive gate set.

use std::fmt;

use smallvec::{smallvec, SmallVec};
use thiserror::Error;

use crate::angle::Angle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    X,
    Cnot,
    Rz,
    Crz,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    Cz,
    Ry,
    Rx,
    Ccx,
    Swap,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Cz | GateKind::Crz | GateKind::Swap => 2,
            GateKind::Ccx => 3,
            _ => 1,
        }
    }

    pub fn has_angle(self) -> bool {
        matches!(
            self,
            GateKind::Rz | GateKind::Crz | GateKind::Ry | GateKind::Rx
        )
    }

    /// Gates the path-sum builder handles natively.
    pub fn is_primitive(self) -> bool {
        matches!(
            self,
            GateKind::H | GateKind::X | GateKind::Cnot | GateKind::Rz | GateKind::Crz
        )
    }

    /// Gates whose unitary is diagonal in the computational basis.
    pub fn is_diagonal(self) -> bool {
        matches!(
            self,
            GateKind::Rz
                | GateKind::Crz
                | GateKind::Z
                | GateKind::S
                | GateKind::Sdg
                | GateKind::T
                | GateKind::Tdg
                | GateKind::Cz
        )
    }

    /// OpenQASM 2 mnemonic.
    pub fn qasm_name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Cnot => "cx",
            GateKind::Rz => "rz",
            GateKind::Crz => "crz",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Cz => "cz",
            GateKind::Ry => "ry",
            GateKind::Rx => "rx",
            GateKind::Ccx => "ccx",
            GateKind::Swap => "swap",
        }
    }

    pub fn from_qasm_name(name: &str) -> Option<GateKind> {
        Some(match name {
            "h" => GateKind::H,
            "x" => GateKind::X,
            "cx" | "CX" => GateKind::Cnot,
            "rz" => GateKind::Rz,
            "crz" => GateKind::Crz,
            "z" => GateKind::Z,
            "s" => GateKind::S,
            "sdg" => GateKind::Sdg,
            "t" => GateKind::T,
            "tdg" => GateKind::Tdg,
            "cz" => GateKind::Cz,
            "ry" => GateKind::Ry,
            "rx" => GateKind::Rx,
            "ccx" => GateKind::Ccx,
            "swap" => GateKind::Swap,
            _ => return None,
        })
    }
}

/// A gate application. For controlled gates the controls come first and the
/// target last.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: SmallVec<[usize; 3]>,
    pub angle: Option<Angle>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("gate {kind:?} expects {expected} qubits, got {got}")]
    Arity {
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("qubit index {index} out of range for a {n}-qubit circuit")]
    QubitOutOfRange { index: usize, n: usize },
    #[error("gate {0:?} uses the same qubit twice")]
    RepeatedQubit(GateKind),
    #[error("gate {0:?} angle presence does not match its kind")]
    AngleMismatch(GateKind),
    #[error("qubit counts differ: {0} vs {1}")]
    QubitCountMismatch(usize, usize),
}

impl Gate {
    fn new(kind: GateKind, qubits: SmallVec<[usize; 3]>, angle: Option<Angle>) -> Self {
        Gate {
            kind,
            qubits,
            angle,
        }
    }

    pub fn h(q: usize) -> Self {
        Gate::new(GateKind::H, smallvec![q], None)
    }
    pub fn x(q: usize) -> Self {
        Gate::new(GateKind::X, smallvec![q], None)
    }
    pub fn z(q: usize) -> Self {
        Gate::new(GateKind::Z, smallvec![q], None)
    }
    pub fn s(q: usize) -> Self {
        Gate::new(GateKind::S, smallvec![q], None)
    }
    pub fn sdg(q: usize) -> Self {
        Gate::new(GateKind::Sdg, smallvec![q], None)
    }
    pub fn t(q: usize) -> Self {
        Gate::new(GateKind::T, smallvec![q], None)
    }
    pub fn tdg(q: usize) -> Self {
        Gate::new(GateKind::Tdg, smallvec![q], None)
    }
    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::new(GateKind::Cnot, smallvec![control, target], None)
    }
    pub fn cz(a: usize, b: usize) -> Self {
        Gate::new(GateKind::Cz, smallvec![a, b], None)
    }
    pub fn swap(a: usize, b: usize) -> Self {
        Gate::new(GateKind::Swap, smallvec![a, b], None)
    }
    pub fn ccx(c0: usize, c1: usize, target: usize) -> Self {
        Gate::new(GateKind::Ccx, smallvec![c0, c1, target], None)
    }
    pub fn rz(theta: Angle, q: usize) -> Self {
        Gate::new(GateKind::Rz, smallvec![q], Some(theta))
    }
    pub fn crz(theta: Angle, control: usize, target: usize) -> Self {
        Gate::new(GateKind::Crz, smallvec![control, target], Some(theta))
    }
    pub fn ry(theta: Angle, q: usize) -> Self {
        Gate::new(GateKind::Ry, smallvec![q], Some(theta))
    }
    pub fn rx(theta: Angle, q: usize) -> Self {
        Gate::new(GateKind::Rx, smallvec![q], Some(theta))
    }

    /// Builds a gate from parts, checking arity, distinctness, and angle presence.
    pub fn try_new(
        kind: GateKind,
        qubits: &[usize],
        angle: Option<Angle>,
    ) -> Result<Self, CircuitError> {
        let g = Gate::new(kind, qubits.iter().copied().collect(), angle);
        g.check_shape()?;
        Ok(g)
    }

    fn check_shape(&self) -> Result<(), CircuitError> {
        if self.qubits.len() != self.kind.arity() {
            return Err(CircuitError::Arity {
                kind: self.kind,
                expected: self.kind.arity(),
                got: self.qubits.len(),
            });
        }
        if self.kind.has_angle() != self.angle.is_some() {
            return Err(CircuitError::AngleMismatch(self.kind));
        }
        for (i, q) in self.qubits.iter().enumerate() {
            if self.qubits[..i].contains(q) {
                return Err(CircuitError::RepeatedQubit(self.kind));
            }
        }
        Ok(())
    }

    pub fn validate(&self, n: usize) -> Result<(), CircuitError> {
        self.check_shape()?;
        if let Some(&index) = self.qubits.iter().find(|&&q| q >= n) {
            return Err(CircuitError::QubitOutOfRange { index, n });
        }
        Ok(())
    }

    pub fn inverse(&self) -> Gate {
        let kind = match self.kind {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::T => GateKind::Tdg,
            GateKind::Tdg => GateKind::T,
            k => k,
        };
        Gate {
            kind,
            qubits: self.qubits.clone(),
            angle: self.angle.as_ref().map(Angle::neg),
        }
    }

    fn angle_unchecked(&self) -> &Angle {
        self.angle.as_ref().expect("rotation gate without angle")
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.qasm_name())?;
        if let Some(a) = &self.angle {
            write!(f, "({a})")?;
        }
        let qs: Vec<String> = self.qubits.iter().map(|q| format!("q[{q}]")).collect();
        write!(f, " {}", qs.join(","))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub n: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Circuit {
            n,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n: usize, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        let c = Circuit { n, gates };
        c.validate()?;
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.validate(self.n)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        self.gates.iter().try_for_each(|g| g.validate(self.n))
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// True when every gate is in the primitive set {H, X, CNOT, Rz, CRz}.
    pub fn is_primitive(&self) -> bool {
        self.gates.iter().all(|g| g.kind.is_primitive())
    }

    /// True when lowering would insert a global phase (Rx/Ry present).
    pub fn has_phase_shifting_gates(&self) -> bool {
        self.gates
            .iter()
            .any(|g| matches!(g.kind, GateKind::Rx | GateKind::Ry))
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Circuit) -> Result<Circuit, CircuitError> {
        if self.n != other.n {
            return Err(CircuitError::QubitCountMismatch(self.n, other.n));
        }
        let mut gates = self.gates.clone();
        gates.extend(other.gates.iter().cloned());
        Ok(Circuit { n: self.n, gates })
    }

    pub fn count_kind(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }
}

/// The inverse circuit: gates reversed, each replaced by its inverse.
pub fn dagger(c: &Circuit) -> Circuit {
    Circuit {
        n: c.n,
        gates: c.gates.iter().rev().map(Gate::inverse).collect(),
    }
}

/// Lowers `c` onto {H, X, CNOT, Rz, CRz}. Semantics are preserved exactly,
/// except for Rx/Ry which pick up a global phase of `θ/2` each.
pub fn decompose(c: &Circuit) -> Circuit {
    let mut out = Vec::with_capacity(c.gates.len());
    for g in &c.gates {
        lower_gate(g, &mut out);
    }
    Circuit { n: c.n, gates: out }
}

fn lower_gate(g: &Gate, out: &mut Vec<Gate>) {
    let q = &g.qubits;
    match g.kind {
        GateKind::H | GateKind::X | GateKind::Cnot | GateKind::Rz | GateKind::Crz => {
            out.push(g.clone())
        }
        GateKind::Z => out.push(Gate::rz(Angle::pi(), q[0])),
        GateKind::S => out.push(Gate::rz(Angle::dyadic(1, 1), q[0])),
        GateKind::Sdg => out.push(Gate::rz(Angle::dyadic(3, 1), q[0])),
        GateKind::T => out.push(Gate::rz(Angle::dyadic(1, 2), q[0])),
        GateKind::Tdg => out.push(Gate::rz(Angle::dyadic(7, 2), q[0])),
        GateKind::Cz => out.push(Gate::crz(Angle::pi(), q[0], q[1])),
        GateKind::Swap => {
            out.push(Gate::cnot(q[0], q[1]));
            out.push(Gate::cnot(q[1], q[0]));
            out.push(Gate::cnot(q[0], q[1]));
        }
        GateKind::Rx => {
            out.push(Gate::h(q[0]));
            out.push(Gate::rz(g.angle_unchecked().clone(), q[0]));
            out.push(Gate::h(q[0]));
        }
        GateKind::Ry => {
            out.push(Gate::rz(Angle::dyadic(3, 1), q[0]));
            out.push(Gate::h(q[0]));
            out.push(Gate::rz(g.angle_unchecked().clone(), q[0]));
            out.push(Gate::h(q[0]));
            out.push(Gate::rz(Angle::dyadic(1, 1), q[0]));
        }
        GateKind::Ccx => {
            let (a, b, t) = (q[0], q[1], q[2]);
            let seq = [
                Gate::h(t),
                Gate::cnot(b, t),
                Gate::tdg(t),
                Gate::cnot(a, t),
                Gate::t(t),
                Gate::cnot(b, t),
                Gate::tdg(t),
                Gate::cnot(a, t),
                Gate::t(b),
                Gate::t(t),
                Gate::h(t),
                Gate::cnot(a, b),
                Gate::t(a),
                Gate::tdg(b),
                Gate::cnot(a, b),
            ];
            for s in &seq {
                lower_gate(s, out);
            }
        }
    }
}
