//! Benchmark circuit families, seeded fault injection, random circuits and
//! equivalence-preserving rewrites.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::angle::Angle;
use crate::circuit::{Circuit, Gate, GateKind};
use crate::wmc::{LiteralWeight, VarWeight, WmcInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Ghz,
    Qft,
    GraphState,
    WStateLike,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("unknown circuit family `{0}` (expected ghz, qft, graphstate or wstate-like)")]
    UnknownFamily(String),
    #[error("size must be at least 1")]
    ZeroSize,
    #[error("family {0} has no commuted variant")]
    NoCommutedVariant(Family),
}

impl FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ghz" => Ok(Family::Ghz),
            "qft" => Ok(Family::Qft),
            "graphstate" => Ok(Family::GraphState),
            "wstate-like" => Ok(Family::WStateLike),
            other => Err(GenError::UnknownFamily(other.to_string())),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Ghz => "ghz",
            Family::Qft => "qft",
            Family::GraphState => "graphstate",
            Family::WStateLike => "wstate-like",
        })
    }
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn build(n: usize, gates: Vec<Gate>) -> Circuit {
    Circuit::from_gates(n, gates).expect("generated gates are in range")
}

pub fn ghz(n: usize) -> Circuit {
    let mut gates = vec![Gate::h(0)];
    gates.extend((0..n.saturating_sub(1)).map(|i| Gate::cnot(i, i + 1)));
    build(n, gates)
}

fn qft_gates(n: usize, commuted: bool) -> Vec<Gate> {
    let mut gates = Vec::new();
    for j in 0..n {
        gates.push(Gate::h(j));
        let mut block: Vec<Gate> = (j + 1..n)
            .map(|k| Gate::crz(Angle::dyadic(1, (k - j) as u32), k, j))
            .collect();
        // controlled phases on a common target commute
        if commuted {
            block.reverse();
        }
        gates.extend(block);
    }
    for i in 0..n / 2 {
        gates.push(Gate::swap(i, n - 1 - i));
    }
    gates
}

pub fn qft(n: usize) -> Circuit {
    build(n, qft_gates(n, false))
}

/// QFT with the controlled phases of every block in reverse order.
pub fn qft_commuted(n: usize) -> Circuit {
    build(n, qft_gates(n, true))
}

fn ring_edges(n: usize) -> Vec<(usize, usize)> {
    match n {
        0 | 1 => vec![],
        2 => vec![(0, 1)],
        _ => (0..n).map(|i| (i, (i + 1) % n)).collect(),
    }
}

/// Graph state on a ring.
pub fn graph_state(n: usize, commuted: bool) -> Circuit {
    let mut gates: Vec<Gate> = (0..n).map(Gate::h).collect();
    let mut edges: Vec<Gate> = ring_edges(n)
        .into_iter()
        .map(|(a, b)| Gate::cz(a, b))
        .collect();
    if commuted {
        edges.reverse();
    }
    gates.extend(edges);
    build(n, gates)
}

/// A W-state-style preparation ladder with float rotation angles.
pub fn wstate_like(n: usize) -> Circuit {
    let mut gates = vec![Gate::x(0)];
    for i in 0..n.saturating_sub(1) {
        let remaining = (n - i) as f64;
        let theta = 2.0 * (1.0 / remaining).sqrt().acos();
        gates.push(Gate::ry(Angle::float(theta / 2.0), i + 1));
        gates.push(Gate::cz(i, i + 1));
        gates.push(Gate::ry(Angle::float(-theta / 2.0), i + 1));
        gates.push(Gate::cnot(i + 1, i));
    }
    build(n, gates)
}

pub fn generate(family: Family, size: usize, commuted: bool) -> Result<Circuit, GenError> {
    if size == 0 {
        return Err(GenError::ZeroSize);
    }
    Ok(match (family, commuted) {
        (Family::Ghz, false) => ghz(size),
        (Family::Qft, false) => qft(size),
        (Family::Qft, true) => qft_commuted(size),
        (Family::GraphState, c) => graph_state(size, c),
        (Family::WStateLike, false) => wstate_like(size),
        (f, true) => return Err(GenError::NoCommutedVariant(f)),
    })
}

/// `Rz(kπ/2^b)` with odd `k` and `b ∈ 1..=3`, never the identity.
pub fn random_fault_angle(rng: &mut impl Rng) -> Angle {
    let b = rng.gen_range(1..=3u32);
    let k = 2 * rng.gen_range(0..(1i64 << b)) + 1;
    Angle::dyadic(k, b)
}

/// Inserts one seeded `Rz` fault at a seeded position and qubit.
pub fn inject_fault(c: &Circuit, seed: u64) -> Circuit {
    let mut rng = seeded_rng(seed);
    inject_fault_with(c, &mut rng)
}

pub fn inject_fault_with(c: &Circuit, rng: &mut impl Rng) -> Circuit {
    let pos = rng.gen_range(0..=c.gates.len());
    let q = rng.gen_range(0..c.n);
    let mut gates = c.gates.clone();
    gates.insert(pos, Gate::rz(random_fault_angle(rng), q));
    build(c.n, gates)
}

/// Gate alphabets for random circuits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateSet {
    /// H, X, S, Z, Sdg, CNOT, CZ.
    Clifford,
    /// H, X, S, T, CNOT, CZ, Rz, CRz with dyadic angles.
    Mixed,
}

fn random_dyadic(rng: &mut impl Rng) -> Angle {
    let b = rng.gen_range(0..=3u32);
    Angle::dyadic(rng.gen_range(1..(2i64 << b)), b)
}

fn distinct_pair(rng: &mut impl Rng, n: usize) -> (usize, usize) {
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

pub fn random_gate(rng: &mut impl Rng, n: usize, set: GateSet) -> Gate {
    let kinds: &[GateKind] = match (set, n) {
        (GateSet::Clifford, 1) => &[
            GateKind::H,
            GateKind::X,
            GateKind::S,
            GateKind::Z,
            GateKind::Sdg,
        ],
        (GateSet::Clifford, _) => &[
            GateKind::H,
            GateKind::X,
            GateKind::S,
            GateKind::Z,
            GateKind::Sdg,
            GateKind::Cnot,
            GateKind::Cz,
        ],
        (GateSet::Mixed, 1) => &[
            GateKind::H,
            GateKind::X,
            GateKind::S,
            GateKind::T,
            GateKind::Rz,
        ],
        (GateSet::Mixed, _) => &[
            GateKind::H,
            GateKind::X,
            GateKind::S,
            GateKind::T,
            GateKind::Cnot,
            GateKind::Cz,
            GateKind::Rz,
            GateKind::Crz,
        ],
    };
    let kind = *kinds.choose(rng).expect("non-empty alphabet");
    match kind {
        GateKind::Cnot | GateKind::Cz | GateKind::Crz => {
            let (a, b) = distinct_pair(rng, n);
            match kind {
                GateKind::Cnot => Gate::cnot(a, b),
                GateKind::Cz => Gate::cz(a, b),
                _ => Gate::crz(random_dyadic(rng), a, b),
            }
        }
        GateKind::Rz => Gate::rz(random_dyadic(rng), rng.gen_range(0..n)),
        k => Gate::try_new(k, &[rng.gen_range(0..n)], None).expect("single-qubit gate"),
    }
}

pub fn random_circuit(rng: &mut impl Rng, n: usize, len: usize, set: GateSet) -> Circuit {
    let gates = (0..len).map(|_| random_gate(rng, n, set)).collect();
    build(n, gates)
}

fn disjoint(a: &Gate, b: &Gate) -> bool {
    a.qubits.iter().all(|q| !b.qubits.contains(q))
}

fn commute(a: &Gate, b: &Gate) -> bool {
    disjoint(a, b) || (a.kind.is_diagonal() && b.kind.is_diagonal())
}

/// One random exactly-equivalent rewrite; returns false when the chosen
/// rewrite had no applicable site.
fn rewrite_once(gates: &mut Vec<Gate>, n: usize, rng: &mut impl Rng) -> bool {
    match rng.gen_range(0..4) {
        0 => {
            let sites: Vec<usize> = (0..gates.len().saturating_sub(1))
                .filter(|&i| commute(&gates[i], &gates[i + 1]))
                .collect();
            let Some(&i) = sites.choose(rng) else {
                return false;
            };
            gates.swap(i, i + 1);
        }
        1 => {
            let sites: Vec<usize> = (0..gates.len())
                .filter(|&i| {
                    matches!(
                        gates[i].kind,
                        GateKind::S | GateKind::Z | GateKind::Sdg | GateKind::Cz
                    )
                })
                .collect();
            let Some(&i) = sites.choose(rng) else {
                return false;
            };
            let g = gates[i].clone();
            let q = g.qubits[0];
            let replacement = match g.kind {
                GateKind::S => vec![Gate::t(q), Gate::t(q)],
                GateKind::Z => vec![Gate::s(q), Gate::s(q)],
                GateKind::Sdg => vec![Gate::tdg(q), Gate::tdg(q)],
                _ => {
                    let t = g.qubits[1];
                    vec![Gate::h(t), Gate::cnot(q, t), Gate::h(t)]
                }
            };
            gates.splice(i..=i, replacement);
        }
        2 => {
            let q = rng.gen_range(0..n);
            let pos = rng.gen_range(0..=gates.len());
            let pair = match rng.gen_range(0..3) {
                0 => [Gate::h(q), Gate::h(q)],
                1 => [Gate::x(q), Gate::x(q)],
                _ => [Gate::s(q), Gate::sdg(q)],
            };
            gates.splice(pos..pos, pair);
        }
        _ => {
            let sites: Vec<usize> = (0..gates.len().saturating_sub(1))
                .filter(|&i| {
                    gates[i].kind == GateKind::Rz
                        && gates[i + 1].kind == GateKind::Rz
                        && gates[i].qubits == gates[i + 1].qubits
                })
                .collect();
            let Some(&i) = sites.choose(rng) else {
                return false;
            };
            let sum = gates[i]
                .angle
                .as_ref()
                .unwrap()
                .add(gates[i + 1].angle.as_ref().unwrap());
            let q = gates[i].qubits[0];
            if sum.is_zero() {
                gates.drain(i..=i + 1);
            } else {
                gates.splice(i..=i + 1, [Gate::rz(sum, q)]);
            }
        }
    }
    true
}

/// A circuit with the same unitary as `c`, produced by `rewrites` random
/// local rewrites: commuting swaps, gate splitting, identity-pair insertion
/// and rotation merging.
pub fn equivalent_variant(c: &Circuit, rng: &mut impl Rng, rewrites: usize) -> Circuit {
    let mut gates = c.gates.clone();
    let mut applied = 0;
    let mut attempts = 0;
    while applied < rewrites && attempts < 20 * rewrites.max(1) {
        attempts += 1;
        if rewrite_once(&mut gates, c.n, rng) {
            applied += 1;
        }
    }
    build(c.n, gates)
}

fn random_literal_weight(rng: &mut impl Rng, float_weights: bool) -> LiteralWeight {
    if float_weights {
        LiteralWeight::Complex(num_complex::Complex64::new(
            rng.gen_range(-1.5..1.5),
            rng.gen_range(-1.5..1.5),
        ))
    } else if rng.gen_bool(0.3) {
        LiteralWeight::one()
    } else {
        LiteralWeight::Phase(random_dyadic(rng))
    }
}

/// Random weighted CNF over `1..=max_vars` variables with 0 to 3·vars
/// clauses of width 1 to 3. Weights are dyadic phases of denominator at
/// most 2^3, or arbitrary complex values when `float_weights` is set.
pub fn random_wmc_instance(
    rng: &mut impl Rng,
    max_vars: usize,
    float_weights: bool,
) -> WmcInstance {
    let nv = rng.gen_range(1..=max_vars);
    let clauses = (0..rng.gen_range(0..=3 * nv))
        .map(|_| {
            let mut c: Vec<i32> = (0..rng.gen_range(1..=3.min(nv)))
                .map(|_| rng.gen_range(1..=nv as i32))
                .collect();
            c.sort_unstable();
            c.dedup();
            c.into_iter()
                .map(|v| if rng.gen_bool(0.5) { v } else { -v })
                .collect()
        })
        .collect();
    let mut weights = BTreeMap::new();
    for v in 1..=nv as u32 {
        if rng.gen_bool(0.8) {
            let neg = random_literal_weight(rng, float_weights);
            let pos = random_literal_weight(rng, float_weights);
            weights.insert(v, VarWeight { neg, pos });
        }
    }
    WmcInstance {
        var_count: nv,
        clauses,
        weights,
        n: 0,
        m: 0,
        phase_offset: Angle::zero(),
    }
}
