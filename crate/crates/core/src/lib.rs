//! Quantum circuit equivalence checking with path sums.
//!
//! Two circuits `C1`, `C2` are compared through the miter `C1 · C2†`. Its
//! path-sum form is simplified with the `[HH]` and `[ω]` rewrite rules; if
//! the residue is not already the identity, the diagonal sum
//! `Σ_x ⟨x|C1 C2†|x⟩` is computed exactly by complex-weighted model
//! counting, and the circuits are equivalent up to a global phase exactly
//! when its modulus is `2^n`.
//!
//! ```
//! use pathsum_equiv::{check_equivalence, parse_qasm, CheckConfig, Status};
//!
//! let a = parse_qasm("OPENQASM 2.0; qreg q[2]; crz(pi) q[0],q[1];").unwrap();
//! let b = parse_qasm("OPENQASM 2.0; qreg q[2]; h q[1]; cx q[0],q[1]; h q[1];").unwrap();
//! let v = check_equivalence(&a, &b, &CheckConfig::default()).unwrap();
//! assert!(v.status.is_equivalent());
//! ```

pub mod angle;
pub mod checker;
pub mod circuit;
pub mod counter;
pub mod cyclotomic;
pub mod exec;
pub mod gen;
pub mod matrix;
pub mod pathsum;
pub mod poly;
pub mod qasm;
pub mod reduce;
pub mod wcnf;
pub mod weight;
pub mod wmc;

pub use angle::Angle;
pub use checker::{
    check_batch, check_equivalence, decide, diag_sum_from_count, CheckConfig, CheckError, DiagSum,
    Mode, PhasePolicy, Status, Verdict, VerdictReport,
};
pub use circuit::{dagger, decompose, Circuit, CircuitError, Gate, GateKind};
pub use counter::{brute_force_count, count, CountError, CountOptions, CountResult};
pub use cyclotomic::Cyclotomic;
pub use exec::Exec;
pub use matrix::{unitary_oracle, DenseMatrix};
pub use pathsum::PathSum;
pub use qasm::{parse_qasm, to_qasm, ParseError};
pub use reduce::{classify, reduce_fixpoint, ReduceBudget, ResidueClass};
pub use weight::ComplexWeight;
pub use wmc::{encode, Backend, BackendChoice, WmcInstance};
