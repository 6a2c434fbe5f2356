//! Seeded property checks shared by the property and acceptance targets.
//! Each returns `Err` with a description of the first counterexample.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;

use pathsum_equiv::circuit::GateKind;
use pathsum_equiv::cyclotomic::Cyclotomic;
use pathsum_equiv::gen::{
    equivalent_variant, inject_fault_with, random_circuit, random_wmc_instance, seeded_rng, GateSet,
};
use pathsum_equiv::poly::{IntPoly, ParityExpr, Var};
use pathsum_equiv::reduce::{try_hh, try_omega};
use pathsum_equiv::wcnf::{export_wcnf_string, parse_wcnf};
use pathsum_equiv::{
    brute_force_count, check_equivalence, count, dagger, decompose, encode, unitary_oracle, Angle,
    BackendChoice, CheckConfig, Circuit, ComplexWeight, CountOptions, Gate, Mode, PathSum, Status,
};

pub const MATRIX_TOL: f64 = 1e-9;
/// Phase-aligned oracle tolerance for verdict comparisons.
pub const ORACLE_TOL: f64 = 1e-7;
/// Relative tolerance of the float counting backend.
pub const FLOAT_COUNT_TOL: f64 = 1e-9;

pub type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_angle(rng: &mut impl Rng) -> Angle {
    if rng.gen_bool(0.2) {
        Angle::float(rng.gen_range(-3.0..3.0))
    } else {
        let b = rng.gen_range(0..=4u32);
        Angle::dyadic(rng.gen_range(0..(2i64 << b)), b)
    }
}

/// Any gate kind on up to three qubits, with dyadic or float angles.
pub fn random_any_gate(rng: &mut impl Rng) -> (usize, Gate) {
    use GateKind::*;
    let kinds = [
        H, X, Cnot, Rz, Crz, Z, S, Sdg, T, Tdg, Cz, Ry, Rx, Ccx, Swap,
    ];
    let kind = kinds[rng.gen_range(0..kinds.len())];
    let n = 3;
    let mut qubits: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        qubits.swap(i, rng.gen_range(0..=i));
    }
    qubits.truncate(kind.arity());
    let angle = kind.has_angle().then(|| random_angle(rng));
    (
        n,
        Gate::try_new(kind, &qubits, angle).expect("well-formed gate"),
    )
}

/// Appending a gate to a random path sum multiplies its matrix by the
/// gate's matrix (up to global phase for the rotations whose decomposition
/// carries one).
pub fn gate_soundness(seed: u64) -> Check {
    let mut rng = seeded_rng(seed);
    let (n, g) = random_any_gate(&mut rng);
    let len = rng.gen_range(0..6);
    let prefix = random_circuit(&mut rng, n, len, GateSet::Mixed);
    let mut ps = PathSum::build(&prefix).unwrap();
    let before = ps.to_matrix().unwrap();
    ps.apply_gate(&g).map_err(|e| format!("{g:?}: {e}"))?;
    let got = ps.to_matrix().unwrap();
    let gate = unitary_oracle(&Circuit::from_gates(n, vec![g.clone()]).unwrap()).unwrap();
    let want = gate.mul(&before);
    let ok = if matches!(g.kind, GateKind::Rx | GateKind::Ry) {
        got.approx_eq_up_to_phase(&want, MATRIX_TOL)
    } else {
        got.approx_eq(&want, MATRIX_TOL)
    };
    ensure(ok, || format!("{g:?} after {prefix:?}: path sum {ps}"))
}

/// `PS(A).compose(PS(B))` evaluates to the matrix of `A` then `B`.
pub fn compose_matches_product(seed: u64) -> Check {
    let mut rng = seeded_rng(seed);
    let n = rng.gen_range(1..=3);
    let (la, lb) = (rng.gen_range(0..8), rng.gen_range(0..8));
    let a = random_circuit(&mut rng, n, la, GateSet::Mixed);
    let b = random_circuit(&mut rng, n, lb, GateSet::Mixed);
    let pa = PathSum::build(&a).unwrap();
    let pb = PathSum::build(&b).unwrap();
    let composed = pa.compose(&pb).map_err(|e| e.to_string())?;
    let want = unitary_oracle(&b)
        .unwrap()
        .mul(&unitary_oracle(&a).unwrap());
    ensure(
        composed.to_matrix().unwrap().approx_eq(&want, MATRIX_TOL),
        || format!("compose mismatch: {pa} ; {pb} = {composed}"),
    )
}

/// Every single `[HH]` or `[ω]` step preserves the operator exactly.
pub fn reduction_step_soundness(seed: u64) -> Check {
    let mut rng = seeded_rng(seed);
    let n = rng.gen_range(1..=3);
    let set = if rng.gen_bool(0.5) {
        GateSet::Clifford
    } else {
        GateSet::Mixed
    };
    let len = rng.gen_range(1..16);
    let c = random_circuit(&mut rng, n, len, set);
    let mut ps = PathSum::build(&c).unwrap();
    let want = ps.to_matrix().unwrap();
    loop {
        let before = ps.to_string();
        let step = try_hh(&mut ps).or_else(|| try_omega(&mut ps));
        let Some(step) = step else { return Ok(()) };
        let got = ps.to_matrix().unwrap();
        ensure(got.approx_eq(&want, MATRIX_TOL), || {
            format!("{} at y{} broke {before} into {ps}", step.rule, step.y0)
        })?;
    }
}

/// The integer cast of a parity agrees with the parity on every assignment,
/// with and without modular truncation.
pub fn cast_pointwise(seed: u64) -> Check {
    let mut rng = seeded_rng(seed);
    let k = rng.gen_range(0..=6u32);
    let vars: Vec<Var> = (0..k)
        .filter(|_| rng.gen_bool(0.7))
        .map(|i| {
            if i % 2 == 0 {
                Var::Input(i)
            } else {
                Var::Path(i)
            }
        })
        .collect();
    let e = ParityExpr::from_vars(vars.clone(), rng.gen_bool(0.5));
    let modulus = if rng.gen_bool(0.5) {
        None
    } else {
        Some(rng.gen_range(1..=5u32))
    };
    let p = IntPoly::cast(&e, modulus).map_err(|err| err.to_string())?;
    for bits in 0u32..(1 << vars.len()) {
        let assign = |v: Var| {
            vars.iter()
                .position(|&w| w == v)
                .is_some_and(|i| bits >> i & 1 == 1)
        };
        let want = e.eval(&assign) as i64;
        let got = p.eval(&assign);
        let agree = match modulus {
            None => got == want,
            Some(b) => (got - want).rem_euclid(1 << b) == 0,
        };
        ensure(agree, || {
            format!("cast({e}) = {p} gives {got} at {bits:b}, parity {want}")
        })?;
    }
    Ok(())
}

/// Export then parse reproduces the instance, for random instances and for
/// encoded miters.
pub fn wcnf_round_trip(seed: u64) -> Check {
    let mut rng = seeded_rng(seed);
    let inst = if rng.gen_bool(0.5) {
        let float = rng.gen_bool(0.3);
        random_wmc_instance(&mut rng, 12, float)
    } else {
        let n = rng.gen_range(1..=3);
        let len = rng.gen_range(1..12);
        let c = random_circuit(&mut rng, n, len, GateSet::Mixed);
        encode(&PathSum::build(&c).unwrap())
    };
    let text = export_wcnf_string(&inst);
    let back = parse_wcnf(&text).map_err(|e| format!("{e}\n{text}"))?;
    ensure(back == inst, || {
        format!("round trip changed the instance:\n{text}")
    })
}

/// Ring identities of the cyclotomic integers, checked against complex
/// floating point.
pub fn cyclotomic_identities(seed: u64) -> Check {
    let mut rng = seeded_rng(seed);
    let n = 1usize << rng.gen_range(2..=5);
    let random = |rng: &mut rand_chacha::ChaCha8Rng| {
        (0..3).fold(Cyclotomic::zero(n), |acc, _| {
            let t = rng.gen_range(0..2 * n as i64);
            let k: i64 = rng.gen_range(-5..=5);
            acc.add(&Cyclotomic::omega_pow(n, t).scale(&k.into()))
        })
    };
    let (a, b, c) = (random(&mut rng), random(&mut rng), random(&mut rng));
    let close =
        |x: &Cyclotomic, z: Complex64| (x.to_complex() - z).norm() <= 1e-9 * (1.0 + z.norm());
    ensure(
        Cyclotomic::omega_pow(n, n as i64) == Cyclotomic::from_int(n, -1),
        || "ω^N != -1".into(),
    )?;
    let s = Cyclotomic::sqrt2(n).unwrap();
    ensure(s.mul(&s) == Cyclotomic::from_int(n, 2), || {
        "√2·√2 != 2".into()
    })?;
    ensure(a.mul(&b).mul(&c) == a.mul(&b.mul(&c)), || {
        "mul not associative".into()
    })?;
    ensure(a.mul(&b.add(&c)) == a.mul(&b).add(&a.mul(&c)), || {
        "mul not distributive".into()
    })?;
    ensure(a.mul(&b).conj() == a.conj().mul(&b.conj()), || {
        "conj not multiplicative".into()
    })?;
    ensure(close(&a.mul(&b), a.to_complex() * b.to_complex()), || {
        "mul disagrees with C".into()
    })?;
    ensure(close(&a.conj(), a.to_complex().conj()), || {
        "conj disagrees with C".into()
    })?;
    ensure(close(&a.lift_to(2 * n), a.to_complex()), || {
        "lift changes value".into()
    })
}

fn weights_agree(got: &ComplexWeight, want: &ComplexWeight) -> bool {
    match (got, want) {
        (ComplexWeight::Cyclotomic(a), ComplexWeight::Cyclotomic(b)) => a == b,
        _ => {
            let (a, b) = (got.to_complex(), want.to_complex());
            (a - b).norm() <= FLOAT_COUNT_TOL * b.norm().max(1.0)
        }
    }
}

/// The component-caching counter agrees with enumeration: exactly in the
/// cyclotomic backend, to [`FLOAT_COUNT_TOL`] relative in floats.
pub fn counter_matches_brute_force(seed: u64, float: bool) -> Check {
    let mut rng = seeded_rng(seed);
    let float_weights = float && rng.gen_bool(0.5);
    let inst = random_wmc_instance(&mut rng, 20, float_weights);
    let backend = if float {
        BackendChoice::Float
    } else {
        BackendChoice::Exact
    };
    let want = brute_force_count(&inst, backend).map_err(|e| e.to_string())?;
    for use_cache in [true, false] {
        let got = count(
            &inst,
            CountOptions {
                backend,
                deadline: None,
                use_cache,
            },
        )
        .map_err(|e| e.to_string())?;
        ensure(got.backend == want.backend, || "backend differs".into())?;
        ensure(weights_agree(&got.raw, &want.raw), || {
            format!(
                "count {:?} vs brute force {:?} (cache {use_cache}) on\n{}",
                got.raw.to_complex(),
                want.raw.to_complex(),
                export_wcnf_string(&inst)
            )
        })?;
    }
    Ok(())
}

/// Equivalence class of a verdict for cross-mode comparison.
pub fn class(s: &Status) -> Option<bool> {
    match s {
        Status::Equivalent | Status::EquivalentUpToGlobalPhase(_) => Some(true),
        Status::NotEquivalent => Some(false),
        Status::Unknown | Status::Timeout => None,
    }
}

pub fn config(mode: Mode) -> CheckConfig {
    CheckConfig {
        mode,
        ..CheckConfig::default()
    }
}

/// Whether the dense oracle says `a ≡ b` up to global phase.
pub fn oracle_equivalent(a: &Circuit, b: &Circuit) -> bool {
    let ua = unitary_oracle(a).unwrap();
    let ub = unitary_oracle(b).unwrap();
    ua.approx_eq_up_to_phase(&ub, ORACLE_TOL)
}

/// Random pair: even seeds rewrite to an equivalent circuit, odd seeds
/// inject an Rz fault.
pub fn random_pair(seed: u64, max_n: usize, max_len: usize) -> (Circuit, Circuit) {
    let mut rng = seeded_rng(seed);
    let n = rng.gen_range(1..=max_n);
    let len = rng.gen_range(1..=max_len);
    let c = random_circuit(&mut rng, n, len, GateSet::Mixed);
    let other = if seed.is_multiple_of(2) {
        let rewrites = rng.gen_range(1..=6);
        equivalent_variant(&c, &mut rng, rewrites)
    } else {
        inject_fault_with(&c, &mut rng)
    };
    (c, other)
}

/// RR, WMC and Hybrid never disagree on the equivalence class, and each
/// decisive verdict matches the oracle.
pub fn mode_consistency(seed: u64) -> Check {
    let (a, b) = random_pair(seed, 3, 12);
    let truth = oracle_equivalent(&a, &b);
    for mode in [Mode::Rr, Mode::Wmc, Mode::Hybrid] {
        let v = check_equivalence(&a, &b, &config(mode)).map_err(|e| e.to_string())?;
        if let Some(eq) = class(&v.status) {
            ensure(eq == truth, || {
                format!("{mode} says {} but oracle says {truth}", v.status)
            })?;
        } else {
            ensure(mode == Mode::Rr, || format!("{mode} returned {}", v.status))?;
        }
    }
    Ok(())
}

/// Miter of a pair, decomposed to primitive gates.
pub fn miter(a: &Circuit, b: &Circuit) -> Circuit {
    decompose(&a.concat(&dagger(b)).unwrap())
}
