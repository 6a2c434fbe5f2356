//! Weighted DIMACS reader and writer.
//!
//! ```text
//! c pse meta n <n> m <m> offset <angle>
//! p cnf <vars> <clauses>
//! <lit> ... 0
//! c p weight <lit> <re> <im> 0
//! c pse phase <var> <angle>
//! ```
//!
//! Weight lines cover both polarities of every weighted variable. The
//! `c pse` lines are comments to other tools and carry the exact angles.

use std::collections::BTreeMap;
use std::io::{self, Write};

use thiserror::Error;

use crate::angle::Angle;
use crate::wmc::{LiteralWeight, VarWeight, WmcInstance};

#[derive(Debug, Error)]
pub enum WcnfError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn fmt_f64(x: f64) -> String {
    // -0 prints as 0
    if x == 0.0 {
        "0".into()
    } else {
        x.to_string()
    }
}

pub fn export_wcnf(inst: &WmcInstance, sink: &mut impl Write) -> io::Result<()> {
    writeln!(
        sink,
        "c pse meta n {} m {} offset {}",
        inst.n, inst.m, inst.phase_offset
    )?;
    writeln!(sink, "p cnf {} {}", inst.var_count, inst.clauses.len())?;
    for clause in &inst.clauses {
        for lit in clause {
            write!(sink, "{lit} ")?;
        }
        writeln!(sink, "0")?;
    }
    for (&v, w) in &inst.weights {
        for (lit, lw) in [(v as i64, &w.pos), (-(v as i64), &w.neg)] {
            let c = lw.to_complex();
            writeln!(
                sink,
                "c p weight {lit} {} {} 0",
                fmt_f64(c.re),
                fmt_f64(c.im)
            )?;
        }
    }
    for (&v, w) in &inst.weights {
        for (lit, lw) in [(v as i64, &w.pos), (-(v as i64), &w.neg)] {
            if let LiteralWeight::Phase(a) = lw {
                if !a.is_zero() {
                    writeln!(sink, "c pse phase {lit} {a}")?;
                }
            }
        }
    }
    Ok(())
}

pub fn export_wcnf_string(inst: &WmcInstance) -> String {
    let mut buf = Vec::new();
    export_wcnf(inst, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("export is ASCII")
}

pub fn parse_wcnf(text: &str) -> Result<WmcInstance, WcnfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut pending: Vec<i32> = Vec::new();
    let mut weights: BTreeMap<u32, VarWeight> = BTreeMap::new();
    let mut phases: Vec<(i64, Angle)> = Vec::new();
    let (mut n, mut m, mut offset) = (0usize, 0usize, Angle::zero());

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |msg: &str| WcnfError::Syntax {
            line,
            msg: msg.to_string(),
        };
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            ["c", "pse", "meta", "n", nv, "m", mv, "offset", off] => {
                n = nv.parse().map_err(|_| err("bad qubit count"))?;
                m = mv.parse().map_err(|_| err("bad path-variable count"))?;
                offset = off.parse().map_err(|_| err("bad offset angle"))?;
            }
            ["c", "pse", "phase", lit, angle] => {
                let lit: i64 = lit.parse().map_err(|_| err("bad literal"))?;
                let a: Angle = angle.parse().map_err(|_| err("bad angle"))?;
                phases.push((lit, a));
            }
            ["c", "p", "weight", lit, re, im, "0"] | ["c", "p", "weight", lit, re, im] => {
                let lit: i64 = lit.parse().map_err(|_| err("bad literal"))?;
                let re: f64 = re.parse().map_err(|_| err("bad real part"))?;
                let im: f64 = im.parse().map_err(|_| err("bad imaginary part"))?;
                set_weight(&mut weights, lit, LiteralWeight::complex(re, im)).map_err(&err)?;
            }
            ["c", ..] => {}
            ["p", "cnf", v, c] => {
                if header.is_some() {
                    return Err(err("duplicate header"));
                }
                let v = v.parse().map_err(|_| err("bad variable count"))?;
                let c = c.parse().map_err(|_| err("bad clause count"))?;
                header = Some((v, c));
            }
            ["p", ..] => return Err(err("expected `p cnf <vars> <clauses>`")),
            lits => {
                let (vars, _) = header.ok_or_else(|| err("clause before header"))?;
                for tok in lits {
                    let l: i32 = tok.parse().map_err(|_| err("bad literal"))?;
                    if l == 0 {
                        clauses.push(std::mem::take(&mut pending));
                    } else if l.unsigned_abs() as usize > vars {
                        return Err(err("literal exceeds declared variable count"));
                    } else {
                        pending.push(l);
                    }
                }
            }
        }
    }
    let (var_count, clause_count) = header.ok_or(WcnfError::Syntax {
        line: 0,
        msg: "missing `p cnf` header".into(),
    })?;
    if !pending.is_empty() {
        return Err(WcnfError::Syntax {
            line: text.lines().count(),
            msg: "unterminated clause".into(),
        });
    }
    if clauses.len() != clause_count {
        return Err(WcnfError::Syntax {
            line: 0,
            msg: format!(
                "header declares {clause_count} clauses, found {}",
                clauses.len()
            ),
        });
    }
    for (lit, a) in phases {
        set_weight(&mut weights, lit, LiteralWeight::Phase(a)).map_err(|m| WcnfError::Syntax {
            line: 0,
            msg: m.into(),
        })?;
    }
    if let Some(&v) = weights.keys().find(|&&v| v as usize > var_count) {
        return Err(WcnfError::Syntax {
            line: 0,
            msg: format!("weight for undeclared variable {v}"),
        });
    }
    Ok(WmcInstance {
        var_count,
        clauses,
        weights,
        n,
        m,
        phase_offset: offset,
    })
}

fn set_weight(
    weights: &mut BTreeMap<u32, VarWeight>,
    lit: i64,
    w: LiteralWeight,
) -> Result<(), &'static str> {
    if lit == 0 || lit.unsigned_abs() > u32::MAX as u64 {
        return Err("bad literal");
    }
    let entry = weights
        .entry(lit.unsigned_abs() as u32)
        .or_insert(VarWeight {
            neg: LiteralWeight::one(),
            pos: LiteralWeight::one(),
        });
    if lit > 0 {
        entry.pos = w;
    } else {
        entry.neg = w;
    }
    Ok(())
}
