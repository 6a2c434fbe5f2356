//! Dense complex matrices and the brute-force circuit unitary used as a test
//! oracle.

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::exec::Exec;

/// Largest qubit count [`unitary_oracle`] accepts.
pub const ORACLE_MAX_QUBITS: usize = 12;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("dense oracle limited to {max} qubits, circuit has {n}")]
    TooLarge { n: usize, max: usize },
}

/// Square complex matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = DenseMatrix::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(columns: Vec<Vec<Complex64>>) -> Self {
        let dim = columns.len();
        let mut m = DenseMatrix::zeros(dim);
        for (c, col) in columns.into_iter().enumerate() {
            assert_eq!(col.len(), dim, "ragged column");
            for (r, v) in col.into_iter().enumerate() {
                m.data[r * dim + c] = v;
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "ragged row");
            data.extend_from_slice(row);
        }
        DenseMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[row * self.dim + col] = v;
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut out = DenseMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * rhs.data[k * d + j];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> DenseMatrix {
        let d = self.dim;
        let mut out = DenseMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.data[j * d + i] = self.data[i * d + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, s: Complex64) -> DenseMatrix {
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry-wise deviation after multiplying `other` by the global
    /// phase that best aligns it with `self`.
    pub fn phase_aligned_diff(&self, other: &DenseMatrix) -> f64 {
        let overlap: Complex64 = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| b.conj() * a)
            .sum();
        let phase = if overlap.norm() > 1e-300 {
            overlap / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        self.max_abs_diff(&other.scale(phase))
    }

    pub fn approx_eq(&self, other: &DenseMatrix, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn approx_eq_up_to_phase(&self, other: &DenseMatrix, tol: f64) -> bool {
        self.phase_aligned_diff(other) <= tol
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&DenseMatrix::identity(self.dim), tol)
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The 2×2 matrix of a single-qubit gate (Rz is `diag(1, e^{iθ})`).
fn single_qubit_matrix(g: &Gate) -> [[Complex64; 2]; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let phase = |(cs, sn): (f64, f64)| [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(cs, sn)]];
    match g.kind {
        GateKind::H => [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]],
        GateKind::X | GateKind::Cnot | GateKind::Ccx => {
            [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]
        }
        GateKind::Z | GateKind::Cz => phase((-1.0, 0.0)),
        GateKind::S => phase((0.0, 1.0)),
        GateKind::Sdg => phase((0.0, -1.0)),
        GateKind::T => phase((s, s)),
        GateKind::Tdg => phase((s, -s)),
        GateKind::Rz | GateKind::Crz => phase(g.angle.as_ref().unwrap().cos_sin()),
        GateKind::Ry => {
            let t = g.angle.as_ref().unwrap().radians() / 2.0;
            [
                [c(t.cos(), 0.0), c(-t.sin(), 0.0)],
                [c(t.sin(), 0.0), c(t.cos(), 0.0)],
            ]
        }
        GateKind::Rx => {
            let t = g.angle.as_ref().unwrap().radians() / 2.0;
            [
                [c(t.cos(), 0.0), c(0.0, -t.sin())],
                [c(0.0, -t.sin()), c(t.cos(), 0.0)],
            ]
        }
        GateKind::Swap => unreachable!("swap has no 2x2 form"),
    }
}

/// Applies `g` in place to a state vector over `n` qubits. Qubit `i` is bit
/// `i` of the basis index.
pub fn apply_gate_to_state(state: &mut [Complex64], g: &Gate) {
    if g.kind == GateKind::Swap {
        let (a, b) = (1usize << g.qubits[0], 1usize << g.qubits[1]);
        for i in 0..state.len() {
            if i & a != 0 && i & b == 0 {
                state.swap(i, (i & !a) | b);
            }
        }
        return;
    }
    let arity = g.qubits.len();
    let target = 1usize << g.qubits[arity - 1];
    let control_mask: usize = match g.kind {
        GateKind::Cnot | GateKind::Crz | GateKind::Cz | GateKind::Ccx => g.qubits[..arity - 1]
            .iter()
            .fold(0, |m, q| m | (1usize << q)),
        _ => 0,
    };
    let u = single_qubit_matrix(g);
    for i in 0..state.len() {
        if i & target != 0 || i & control_mask != control_mask {
            continue;
        }
        let j = i | target;
        let (a0, a1) = (state[i], state[j]);
        state[i] = u[0][0] * a0 + u[0][1] * a1;
        state[j] = u[1][0] * a0 + u[1][1] * a1;
    }
}

/// The full `2^n × 2^n` unitary of `c`.
pub fn unitary_oracle(c: &Circuit) -> Result<DenseMatrix, OracleError> {
    unitary_oracle_with(c, Exec::default())
}

pub fn unitary_oracle_with(c: &Circuit, exec: Exec) -> Result<DenseMatrix, OracleError> {
    if c.n > ORACLE_MAX_QUBITS {
        return Err(OracleError::TooLarge {
            n: c.n,
            max: ORACLE_MAX_QUBITS,
        });
    }
    let dim = 1usize << c.n;
    let columns = exec.map_indices(dim, |col| {
        let mut state = vec![Complex64::new(0.0, 0.0); dim];
        state[col] = Complex64::new(1.0, 0.0);
        for g in &c.gates {
            apply_gate_to_state(&mut state, g);
        }
        state
    });
    Ok(DenseMatrix::from_columns(columns))
}
