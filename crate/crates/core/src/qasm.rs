//! OpenQASM 2.0 subset reader and writer.
//!
//! Accepted: optional `OPENQASM 2.0;`, optional `include "qelib1.inc";`,
//! exactly one `qreg`, and the gates h, x, z, s, sdg, t, tdg, cx, cz, swap,
//! ccx, rz, crz, ry, rx. Angle expressions are decimal literals and `pi`
//! combined with `*`, `/`, unary minus and parentheses.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::angle::Angle;
use crate::circuit::{Circuit, Gate, GateKind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{line}:{col}: unsupported gate `{name}`")]
    UnsupportedGate {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("{line}:{col}: qubit index {index} out of range for register of size {size}")]
    QubitOutOfRange {
        line: usize,
        col: usize,
        index: usize,
        size: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Str(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: tl,
                col: tc,
            });
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()))
        {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Number(chars[start..i].iter().collect()),
                line: tl,
                col: tc,
            });
            continue;
        }
        if c == '"' {
            let start = i + 1;
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(ParseError::Syntax {
                    line: tl,
                    col: tc,
                    msg: "unterminated string".into(),
                });
            }
            let s: String = chars[start..i].iter().collect();
            i += 1;
            col += s.chars().count() + 2;
            out.push(Token {
                tok: Tok::Str(s),
                line: tl,
                col: tc,
            });
            continue;
        }
        if "[](),;*/-".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                line: tl,
                col: tc,
            });
            i += 1;
            col += 1;
            continue;
        }
        return Err(ParseError::Syntax {
            line: tl,
            col: tc,
            msg: format!("unexpected character `{c}`"),
        });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

/// Exact value `coef·π^pi_pow` alongside its floating-point approximation.
#[derive(Clone, Debug)]
struct Value {
    coef: BigRational,
    pi_pow: i32,
    approx: f64,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map(|t| (t.line, t.col)).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError::Syntax {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Sym(s), ..
            }) if *s == c => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected `{c}`")),
        }
    }

    fn at_sym(&self, c: char) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Sym(s), .. }) if *s == c)
    }

    fn expect_ident(&mut self) -> Result<Token, ParseError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(_), ..
            }) => Ok(self.next().unwrap()),
            _ => self.err("expected identifier"),
        }
    }

    fn expect_uint(&mut self) -> Result<usize, ParseError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Number(s),
                ..
            }) if s.chars().all(|c| c.is_ascii_digit()) => {
                let v = s.parse::<usize>();
                match v {
                    Ok(v) => {
                        self.pos += 1;
                        Ok(v)
                    }
                    Err(_) => self.err("integer too large"),
                }
            }
            _ => self.err("expected non-negative integer"),
        }
    }

    fn expr(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.at_sym('*') {
                self.pos += 1;
                let rhs = self.unary()?;
                acc = Value {
                    coef: acc.coef * rhs.coef,
                    pi_pow: acc.pi_pow + rhs.pi_pow,
                    approx: acc.approx * rhs.approx,
                };
            } else if self.at_sym('/') {
                self.pos += 1;
                let rhs = self.unary()?;
                if rhs.coef.is_zero() {
                    return self.err("division by zero");
                }
                acc = Value {
                    coef: acc.coef / rhs.coef,
                    pi_pow: acc.pi_pow - rhs.pi_pow,
                    approx: acc.approx / rhs.approx,
                };
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Value, ParseError> {
        if self.at_sym('-') {
            self.pos += 1;
            let v = self.unary()?;
            return Ok(Value {
                coef: -v.coef,
                pi_pow: v.pi_pow,
                approx: -v.approx,
            });
        }
        if self.at_sym('(') {
            self.pos += 1;
            let v = self.expr()?;
            self.expect_sym(')')?;
            return Ok(v);
        }
        match self.peek().cloned() {
            Some(Token {
                tok: Tok::Ident(id),
                ..
            }) if id == "pi" => {
                self.pos += 1;
                Ok(Value {
                    coef: BigRational::one(),
                    pi_pow: 1,
                    approx: std::f64::consts::PI,
                })
            }
            Some(Token {
                tok: Tok::Number(s),
                ..
            }) => {
                let Some(coef) = decimal_to_rational(&s) else {
                    return self.err(format!("malformed number `{s}`"));
                };
                let approx: f64 = match s.parse() {
                    Ok(v) => v,
                    Err(_) => return self.err(format!("malformed number `{s}`")),
                };
                self.pos += 1;
                Ok(Value {
                    coef,
                    pi_pow: 0,
                    approx,
                })
            }
            _ => self.err("expected angle expression"),
        }
    }

    fn qubit_arg(&mut self, reg: &str, size: usize) -> Result<usize, ParseError> {
        let id = self.expect_ident()?;
        if let Tok::Ident(name) = &id.tok {
            if name != reg {
                return Err(ParseError::Syntax {
                    line: id.line,
                    col: id.col,
                    msg: format!("unknown register `{name}`"),
                });
            }
        }
        self.expect_sym('[')?;
        let (line, col) = self.here();
        let index = self.expect_uint()?;
        self.expect_sym(']')?;
        if index >= size {
            return Err(ParseError::QubitOutOfRange {
                line,
                col,
                index,
                size,
            });
        }
        Ok(index)
    }
}

fn decimal_to_rational(s: &str) -> Option<BigRational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let mut parts = mantissa.split('.');
    let int_part = parts.next().unwrap_or("");
    let frac_part = parts.next().unwrap_or("");
    if parts.next().is_some() || (int_part.is_empty() && frac_part.is_empty()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = digits.parse().ok()?;
    let scale = exp - frac_part.len() as i64;
    if scale.unsigned_abs() > 4096 {
        return None;
    }
    let ten = BigInt::from(10);
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    Some(if scale >= 0 {
        BigRational::from_integer(num * pow)
    } else {
        BigRational::new(num, pow)
    })
}

fn value_to_angle(v: &Value) -> Angle {
    if v.coef.is_zero() {
        return Angle::zero();
    }
    if v.pi_pow == 1 {
        let den = v.coef.denom();
        if den.is_positive() && (den & (den - BigInt::one())).is_zero() {
            let b = den.bits() - 1;
            if b <= u32::MAX as u64 {
                return Angle::dyadic(v.coef.numer().clone(), b as u32);
            }
        }
    }
    Angle::float(v.approx)
}

/// Parses the OpenQASM subset into a [`Circuit`].
pub fn parse_qasm(text: &str) -> Result<Circuit, ParseError> {
    let toks = lex(text)?;
    let end = {
        let lines = text.split('\n').count().max(1);
        let last = text.rsplit('\n').next().unwrap_or("");
        (lines, last.chars().count() + 1)
    };
    let mut p = Parser { toks, pos: 0, end };
    let mut reg: Option<(String, usize)> = None;
    let mut gates = Vec::new();
    let mut first = true;
    while let Some(tok) = p.peek().cloned() {
        let Tok::Ident(word) = &tok.tok else {
            return p.err("expected statement");
        };
        match word.as_str() {
            "OPENQASM" => {
                if !first {
                    return p.err("OPENQASM header must come first");
                }
                p.pos += 1;
                match p.next() {
                    Some(Token {
                        tok: Tok::Number(v),
                        ..
                    }) if v == "2.0" || v == "2" => {}
                    _ => {
                        p.pos = p.pos.saturating_sub(1);
                        return p.err("only OPENQASM 2.0 is supported");
                    }
                }
                p.expect_sym(';')?;
            }
            "include" => {
                p.pos += 1;
                match p.next() {
                    Some(Token {
                        tok: Tok::Str(s), ..
                    }) if s == "qelib1.inc" => {}
                    _ => {
                        p.pos = p.pos.saturating_sub(1);
                        return p.err("only `include \"qelib1.inc\";` is accepted");
                    }
                }
                p.expect_sym(';')?;
            }
            "qreg" => {
                if reg.is_some() {
                    return p.err("only one qreg declaration is supported");
                }
                p.pos += 1;
                let id = p.expect_ident()?;
                p.expect_sym('[')?;
                let size = p.expect_uint()?;
                p.expect_sym(']')?;
                p.expect_sym(';')?;
                let Tok::Ident(name) = id.tok else {
                    unreachable!()
                };
                reg = Some((name, size));
            }
            name => {
                let Some(kind) = GateKind::from_qasm_name(name) else {
                    return Err(ParseError::UnsupportedGate {
                        line: tok.line,
                        col: tok.col,
                        name: name.to_string(),
                    });
                };
                let Some((reg_name, size)) = reg.clone() else {
                    return p.err("gate before qreg declaration");
                };
                p.pos += 1;
                let angle = if kind.has_angle() {
                    p.expect_sym('(')?;
                    let v = p.expr()?;
                    p.expect_sym(')')?;
                    Some(value_to_angle(&v))
                } else {
                    if p.at_sym('(') {
                        return p.err(format!("gate `{name}` takes no parameters"));
                    }
                    None
                };
                let mut qubits = vec![p.qubit_arg(&reg_name, size)?];
                while p.at_sym(',') {
                    p.pos += 1;
                    qubits.push(p.qubit_arg(&reg_name, size)?);
                }
                if !p.at_sym(';') {
                    return p.err("expected `;`");
                }
                let gate = Gate::try_new(kind, &qubits, angle).map_err(|e| ParseError::Syntax {
                    line: tok.line,
                    col: tok.col,
                    msg: e.to_string(),
                })?;
                p.pos += 1;
                gates.push(gate);
            }
        }
        first = false;
    }
    let Some((_, n)) = reg else {
        return p.err("missing qreg declaration");
    };
    Ok(Circuit { n, gates })
}

/// Renders a circuit in the same subset; `parse_qasm(&to_qasm(c)) == c`.
pub fn to_qasm(c: &Circuit) -> String {
    let mut s = String::from("OPENQASM 2.0;\n");
    s.push_str(&format!("qreg q[{}];\n", c.n));
    for g in &c.gates {
        s.push_str(g.kind.qasm_name());
        if let Some(a) = &g.angle {
            s.push('(');
            s.push_str(&angle_expr(a));
            s.push(')');
        }
        s.push(' ');
        let args: Vec<String> = g.qubits.iter().map(|q| format!("q[{q}]")).collect();
        s.push_str(&args.join(","));
        s.push_str(";\n");
    }
    s
}

fn angle_expr(a: &Angle) -> String {
    match a {
        Angle::Dyadic { num, log2_den } => {
            if num.is_zero() {
                return "0".into();
            }
            let mut s = if num.is_one() {
                "pi".to_string()
            } else {
                format!("{num}*pi")
            };
            // powers of two beyond u64 are written as repeated halvings
            let mut b = *log2_den;
            while b > 0 {
                let step = b.min(62);
                s.push_str(&format!("/{}", 1u64 << step));
                b -= step;
            }
            s
        }
        Angle::Float(r) => {
            let t = format!("{r:?}");
            if r.is_sign_negative() {
                format!("({t})")
            } else {
                t
            }
        }
    }
}
