//! Boolean variables, multilinear monomials, integer and phase polynomials,
//! parity expressions, and the bool-to-int cast between them.

use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

use crate::angle::Angle;

/// Parities with more variables than this are not cast without a modulus.
pub const CAST_VAR_LIMIT: usize = 16;
/// Upper bound on the number of terms any cast or lift may produce.
pub const TERM_LIMIT: usize = 1 << 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("casting a parity over {0} variables exceeds the expansion limit")]
    CastTooLarge(usize),
    #[error("polynomial expansion exceeds {TERM_LIMIT} terms")]
    TooManyTerms,
    #[error("integer coefficient overflow")]
    Overflow,
    #[error("coefficient {0} is not an integer multiple of pi")]
    NonIntegerCoefficient(String),
}

/// An input variable `x_i` or a path variable `y_j`. The derived order puts
/// every input before every path variable, each ascending by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Input(u32),
    Path(u32),
}

impl Var {
    pub fn is_path(self) -> bool {
        matches!(self, Var::Path(_))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Input(i) => write!(f, "x{i}"),
            Var::Path(j) => write!(f, "y{j}"),
        }
    }
}

/// A product of distinct variables, kept sorted. The empty monomial is `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(SmallVec<[Var; 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var) -> Self {
        let mut s = SmallVec::new();
        s.push(v);
        Monomial(s)
    }

    pub fn from_vars(vars: impl IntoIterator<Item = Var>) -> Self {
        let mut s: SmallVec<[Var; 4]> = vars.into_iter().collect();
        s.sort_unstable();
        s.dedup();
        Monomial(s)
    }

    pub fn vars(&self) -> &[Var] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Var) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Multilinear product (`v·v = v`).
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn without(&self, v: Var) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&w| w != v).collect())
    }

    /// Renames variables; `f` must be injective on this monomial.
    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> Monomial {
        Monomial::from_vars(self.0.iter().map(|&v| f(v)))
    }

    pub fn eval(&self, assign: &impl Fn(Var) -> bool) -> bool {
        self.0.iter().all(|&v| assign(v))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// `constant ⊕ (⊕ vars)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ParityExpr {
    vars: SmallVec<[Var; 4]>,
    pub constant: bool,
}

impl ParityExpr {
    pub fn zero() -> Self {
        ParityExpr::default()
    }

    pub fn var(v: Var) -> Self {
        ParityExpr::from_vars([v], false)
    }

    /// Variables appearing an even number of times cancel.
    pub fn from_vars(vars: impl IntoIterator<Item = Var>, constant: bool) -> Self {
        let mut s: SmallVec<[Var; 4]> = vars.into_iter().collect();
        s.sort_unstable();
        let mut out: SmallVec<[Var; 4]> = SmallVec::new();
        for v in s {
            if out.last() == Some(&v) {
                out.pop();
            } else {
                out.push(v);
            }
        }
        ParityExpr {
            vars: out,
            constant,
        }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.vars.is_empty() && !self.constant
    }

    pub fn contains(&self, v: Var) -> bool {
        self.vars.binary_search(&v).is_ok()
    }

    /// Single variable with no constant.
    pub fn as_var(&self) -> Option<Var> {
        (!self.constant && self.vars.len() == 1).then(|| self.vars[0])
    }

    pub fn xor(&self, other: &ParityExpr) -> ParityExpr {
        let (a, b) = (&self.vars, &other.vars);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        ParityExpr {
            vars: out,
            constant: self.constant ^ other.constant,
        }
    }

    pub fn negate(&self) -> ParityExpr {
        ParityExpr {
            vars: self.vars.clone(),
            constant: !self.constant,
        }
    }

    /// Replaces `v` (if present) by `by`.
    pub fn substitute(&self, v: Var, by: &ParityExpr) -> ParityExpr {
        if !self.contains(v) {
            return self.clone();
        }
        let mut rest = self.clone();
        rest.vars.retain(|w| *w != v);
        rest.xor(by)
    }

    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> ParityExpr {
        ParityExpr::from_vars(self.vars.iter().map(|&v| f(v)), self.constant)
    }

    pub fn eval(&self, assign: &impl Fn(Var) -> bool) -> bool {
        self.vars
            .iter()
            .fold(self.constant, |acc, &v| acc ^ assign(v))
    }
}

impl fmt::Display for ParityExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.constant {
            parts.push("1".into());
        }
        parts.extend(self.vars.iter().map(|v| v.to_string()));
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join("⊕"))
    }
}

/// Multilinear polynomial with integer coefficients, optionally reduced
/// modulo `2^k` (a ring homomorphism, so all operations commute with it).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntPoly {
    terms: BTreeMap<Monomial, i64>,
}

fn reduce_coeff(c: i64, modulus_log2: Option<u32>) -> i64 {
    match modulus_log2 {
        Some(k) if k < 62 => {
            let m = 1i64 << k;
            let r = c.rem_euclid(m);
            if r > m / 2 {
                r - m
            } else {
                r
            }
        }
        _ => c,
    }
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn constant(c: i64) -> Self {
        let mut p = IntPoly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(v: Var) -> Self {
        IntPoly::monomial(Monomial::var(v), 1)
    }

    pub fn monomial(m: Monomial, c: i64) -> Self {
        let mut p = IntPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(m);
        match e {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let v = o.get().wrapping_add(c);
                if v == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.contains(v))
    }

    /// True when every monomial has degree at most one.
    pub fn is_affine(&self) -> bool {
        self.terms.keys().all(|m| m.degree() <= 1)
    }

    fn reduced(mut self, modulus_log2: Option<u32>) -> Self {
        if modulus_log2.is_some() {
            self.terms.retain(|_, c| {
                *c = reduce_coeff(*c, modulus_log2);
                *c != 0
            });
        }
        self
    }

    pub fn add(&self, other: &IntPoly, modulus_log2: Option<u32>) -> Result<IntPoly, PolyError> {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            let cur = out.coeff(m);
            let s = cur.checked_add(*c).ok_or(PolyError::Overflow)?;
            out.terms.remove(m);
            out.add_term(m.clone(), s);
        }
        Ok(out.reduced(modulus_log2))
    }

    pub fn scale(&self, k: i64, modulus_log2: Option<u32>) -> Result<IntPoly, PolyError> {
        let mut out = IntPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.checked_mul(k).ok_or(PolyError::Overflow)?);
        }
        Ok(out.reduced(modulus_log2))
    }

    /// Multilinear product.
    pub fn mul(&self, other: &IntPoly, modulus_log2: Option<u32>) -> Result<IntPoly, PolyError> {
        let mut out = IntPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca.checked_mul(*cb).ok_or(PolyError::Overflow)?;
                let c = reduce_coeff(c, modulus_log2);
                let m = ma.mul(mb);
                let cur = out.coeff(&m);
                let s = reduce_coeff(cur.checked_add(c).ok_or(PolyError::Overflow)?, modulus_log2);
                out.terms.remove(&m);
                out.add_term(m, s);
            }
            if out.len() > TERM_LIMIT {
                return Err(PolyError::TooManyTerms);
            }
        }
        Ok(out)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> IntPoly {
        let mut out = IntPoly::zero();
        for (ma, c) in &self.terms {
            out.add_term(ma.mul(m), *c);
        }
        out
    }

    /// `a ⊕ b` lifted to integers: `a + b − 2ab`.
    pub fn xor_lift(
        &self,
        other: &IntPoly,
        modulus_log2: Option<u32>,
    ) -> Result<IntPoly, PolyError> {
        let prod = self.mul(other, modulus_log2)?.scale(-2, modulus_log2)?;
        self.add(other, modulus_log2)?.add(&prod, modulus_log2)
    }

    /// Bool-to-int cast of a parity: `x⊕y ↦ x + y − 2xy`, `¬b ↦ 1 − b`,
    /// folded over the variables in ascending order. With `modulus_log2`
    /// the result is reduced modulo `2^k`.
    pub fn cast(e: &ParityExpr, modulus_log2: Option<u32>) -> Result<IntPoly, PolyError> {
        if modulus_log2.is_none() && e.vars().len() > CAST_VAR_LIMIT {
            return Err(PolyError::CastTooLarge(e.vars().len()));
        }
        let mut acc = IntPoly::zero();
        for &v in e.vars() {
            // acc + v − 2·acc·v; acc never mentions v so no terms merge.
            let mut next = acc.clone();
            next.add_term(Monomial::var(v), 1);
            for (m, c) in &acc.terms {
                let c2 = reduce_coeff(c.checked_mul(-2).ok_or(PolyError::Overflow)?, modulus_log2);
                next.add_term(m.mul(&Monomial::var(v)), c2);
            }
            if next.len() > TERM_LIMIT {
                return Err(PolyError::CastTooLarge(e.vars().len()));
            }
            acc = next;
        }
        if e.constant {
            acc = IntPoly::constant(1).add(&acc.scale(-1, modulus_log2)?, modulus_log2)?;
        }
        Ok(acc.reduced(modulus_log2))
    }

    /// Divides a phase polynomial by π, requiring every coefficient to be an
    /// integer multiple of π (i.e. exactly 0 or π modulo 2π).
    pub fn from_phase_over_pi(p: &PhasePolynomial) -> Result<IntPoly, PolyError> {
        let mut out = IntPoly::zero();
        for (m, a) in p.terms() {
            if !a.is_pi() {
                return Err(PolyError::NonIntegerCoefficient(a.to_string()));
            }
            out.add_term(m.clone(), 1);
        }
        Ok(out)
    }

    pub fn eval(&self, assign: &impl Fn(Var) -> bool) -> i64 {
        self.terms
            .iter()
            .filter(|(m, _)| m.eval(assign))
            .map(|(_, c)| *c)
            .sum()
    }

    pub fn map_vars(&self, f: impl Fn(Var) -> Var + Copy) -> IntPoly {
        let mut out = IntPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.map_vars(f), *c);
        }
        out
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = (*c < 0, c.unsigned_abs());
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

/// The mod-2 lift `Q̄` of an integer polynomial: monomials with odd
/// coefficient, read as `⊕_m ∧m`, and the multilinear integer cast of that
/// Boolean function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mod2Lift {
    pub xor: Vec<Monomial>,
    pub lifted: IntPoly,
}

impl Mod2Lift {
    /// The lift as a parity when every surviving monomial has degree ≤ 1.
    pub fn as_parity(&self) -> Option<ParityExpr> {
        if self.xor.iter().any(|m| m.degree() > 1) {
            return None;
        }
        let constant = self.xor.iter().any(Monomial::is_one);
        Some(ParityExpr::from_vars(
            self.xor.iter().flat_map(|m| m.vars().iter().copied()),
            constant,
        ))
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.xor.iter().any(|m| m.contains(v))
    }

    /// The lifted polynomial reduced modulo `2^k`, folded directly so large
    /// lifts stay small when only low-order coefficients matter.
    pub fn lifted_mod(&self, modulus_log2: Option<u32>) -> Result<IntPoly, PolyError> {
        if modulus_log2.is_none() {
            return Ok(self.lifted.clone());
        }
        fold_xor(&self.xor, modulus_log2)
    }
}

fn fold_xor(monomials: &[Monomial], modulus_log2: Option<u32>) -> Result<IntPoly, PolyError> {
    let mut acc = IntPoly::zero();
    for m in monomials {
        acc = acc.xor_lift(&IntPoly::monomial(m.clone(), 1), modulus_log2)?;
        if acc.len() > TERM_LIMIT {
            return Err(PolyError::TooManyTerms);
        }
    }
    Ok(acc)
}

/// Drops even-coefficient monomials of `q` and lifts the remaining XOR of
/// conjunctions back to a {0,1}-valued integer polynomial.
pub fn mod2_lift(q: &IntPoly) -> Result<Mod2Lift, PolyError> {
    let xor: Vec<Monomial> = q
        .terms()
        .filter(|(_, c)| c.rem_euclid(2) == 1)
        .map(|(m, _)| m.clone())
        .collect();
    if xor.len() > CAST_VAR_LIMIT {
        return Err(PolyError::CastTooLarge(xor.len()));
    }
    let lifted = fold_xor(&xor, None)?;
    Ok(Mod2Lift { xor, lifted })
}

/// Multilinear polynomial with angle coefficients, reduced modulo 2π. Zero
/// coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PhasePolynomial {
    terms: BTreeMap<Monomial, Angle>,
}

impl PhasePolynomial {
    pub fn zero() -> Self {
        PhasePolynomial::default()
    }

    pub fn add_term(&mut self, m: Monomial, a: Angle) {
        if a.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&a);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(a);
            }
        }
    }

    pub fn add(&mut self, other: &PhasePolynomial) {
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a.clone());
        }
    }

    /// `self += a · p`, skipping terms that `a` annihilates modulo 2π.
    pub fn add_scaled(&mut self, a: &Angle, p: &IntPoly) {
        for (m, c) in p.terms() {
            if a.annihilated_by(c) {
                continue;
            }
            self.add_term(m.clone(), a.mul_int(c));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Angle)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&Angle> {
        self.terms.get(m)
    }

    pub fn constant_term(&self) -> Angle {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(Angle::zero)
    }

    /// True when some stored monomial mentions a variable.
    pub fn has_variable_terms(&self) -> bool {
        self.terms.keys().any(|m| !m.is_one())
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.contains(v))
    }

    pub fn all_dyadic(&self) -> bool {
        self.terms.values().all(Angle::is_dyadic)
    }

    /// Removes and returns the terms mentioning `v`, with `v` divided out.
    pub fn split_off_var(&mut self, v: Var) -> PhasePolynomial {
        let mut with = PhasePolynomial::zero();
        let keys: Vec<Monomial> = self
            .terms
            .keys()
            .filter(|m| m.contains(v))
            .cloned()
            .collect();
        for m in keys {
            let a = self.terms.remove(&m).unwrap();
            with.terms.insert(m.without(v), a);
        }
        with
    }

    /// Terms mentioning `v` with `v` divided out, leaving `self` intact.
    pub fn factor_of(&self, v: Var) -> PhasePolynomial {
        PhasePolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.contains(v))
                .map(|(m, a)| (m.without(v), a.clone()))
                .collect(),
        }
    }

    pub fn map_vars(&self, f: impl Fn(Var) -> Var + Copy) -> PhasePolynomial {
        let mut out = PhasePolynomial::zero();
        for (m, a) in &self.terms {
            out.add_term(m.map_vars(f), a.clone());
        }
        out
    }

    /// Phase in radians for a full assignment.
    pub fn eval(&self, assign: &impl Fn(Var) -> bool) -> f64 {
        self.terms
            .iter()
            .filter(|(m, _)| m.eval(assign))
            .map(|(_, a)| a.radians())
            .sum()
    }
}

impl fmt::Display for PhasePolynomial {
    /// Groups monomials sharing a coefficient: `pi*(x0*y0 + y0*y1) + pi/4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut groups: Vec<(String, Vec<String>)> = Vec::new();
        for (m, a) in &self.terms {
            let key = a.to_string();
            match groups.iter_mut().find(|(k, _)| *k == key) {
                Some((_, ms)) => ms.push(m.to_string()),
                None => groups.push((key, vec![m.to_string()])),
            }
        }
        let rendered: Vec<String> = groups
            .into_iter()
            .map(|(a, ms)| {
                if ms.len() == 1 && ms[0] == "1" {
                    a
                } else if ms.len() == 1 {
                    format!("{a}*{}", ms[0])
                } else {
                    format!("{a}*({})", ms.join(" + "))
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const X0: Var = Var::Input(0);
    const X1: Var = Var::Input(1);
    const Y0: Var = Var::Path(0);

    #[test]
    fn var_order_inputs_first() {
        assert!(Var::Input(5) < Var::Path(0));
        assert!(Var::Path(1) < Var::Path(2));
        let m = Monomial::from_vars([Y0, X1, X0]);
        assert_eq!(m.vars(), &[X0, X1, Y0]);
    }

    #[test]
    fn cast_examples() {
        assert_eq!(
            IntPoly::cast(&ParityExpr::var(X0), None).unwrap(),
            IntPoly::var(X0)
        );
        let e = ParityExpr::from_vars([X0, Y0], false);
        let mut want = IntPoly::var(X0);
        want.add_term(Monomial::var(Y0), 1);
        want.add_term(Monomial::from_vars([X0, Y0]), -2);
        assert_eq!(IntPoly::cast(&e, None).unwrap(), want);
        let e = ParityExpr::from_vars([X0], true);
        let mut want = IntPoly::constant(1);
        want.add_term(Monomial::var(X0), -1);
        assert_eq!(IntPoly::cast(&e, None).unwrap(), want);
    }

    #[test]
    fn cast_guard() {
        let e = ParityExpr::from_vars((0..17).map(Var::Input), false);
        assert_eq!(IntPoly::cast(&e, None), Err(PolyError::CastTooLarge(17)));
        // modulo 2 only the linear part survives
        let p = IntPoly::cast(&e, Some(1)).unwrap();
        assert_eq!(p.len(), 17);
    }

    #[test]
    fn mod2_lift_examples() {
        let q = IntPoly::monomial(Monomial::var(X0), 2);
        let l = mod2_lift(&q).unwrap();
        assert!(l.xor.is_empty());
        assert!(l.lifted.is_zero());

        let z = Var::Input(1);
        let l = mod2_lift(&IntPoly::var(z)).unwrap();
        assert_eq!(l.lifted, IntPoly::var(z));

        let mut q = IntPoly::var(X0);
        q.add_term(Monomial::var(X1), 1);
        let l = mod2_lift(&q).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                let assign = |v: Var| match v {
                    Var::Input(0) => a == 1,
                    _ => b == 1,
                };
                assert_eq!(l.lifted.eval(&assign), (a + b) % 2);
            }
        }
        assert_eq!(l.as_parity(), Some(ParityExpr::from_vars([X0, X1], false)));
    }

    #[test]
    fn parity_xor_cancels() {
        let a = ParityExpr::from_vars([X0, X1], false);
        let b = ParityExpr::from_vars([X1, Y0], true);
        assert_eq!(a.xor(&b), ParityExpr::from_vars([X0, Y0], true));
        assert!(a.xor(&a).is_zero());
    }

    #[test]
    fn phase_add_two_pi_noop() {
        let mut p = PhasePolynomial::zero();
        p.add_term(Monomial::var(X0), Angle::dyadic(1, 2));
        let before = p.clone();
        p.add_term(Monomial::var(X0), Angle::dyadic(4, 1));
        assert_eq!(p, before);
        p.add_term(Monomial::var(X0), Angle::dyadic(7, 2));
        assert!(p.is_empty());
    }

    #[test]
    fn display_groups_coefficients() {
        let mut p = PhasePolynomial::zero();
        p.add_term(Monomial::from_vars([X0, Y0]), Angle::pi());
        p.add_term(Monomial::from_vars([Y0, Var::Path(1)]), Angle::pi());
        assert_eq!(p.to_string(), "pi*(x0*y0 + y0*y1)");
        p.add_term(Monomial::one(), Angle::dyadic(1, 2));
        assert_eq!(p.to_string(), "pi/4 + pi*(x0*y0 + y0*y1)");
    }
}
