//! Literal weights and counts: exact cyclotomic or complex double.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::cyclotomic::Cyclotomic;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("weights from different rings: {0} vs {1}")]
    OrderMismatch(String, String),
}

/// Semiring operations the counter needs. `zero_like` / `one_like` build
/// constants compatible with `self` (same ring size for cyclotomics).
pub trait Weight: Clone + Send + Sync + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Weight for Cyclotomic {
    fn zero_like(&self) -> Self {
        Cyclotomic::zero(self.size())
    }
    fn one_like(&self) -> Self {
        Cyclotomic::one(self.size())
    }
    fn add(&self, o: &Self) -> Self {
        Cyclotomic::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Cyclotomic::mul(self, o)
    }
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
}

impl Weight for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one_like(&self) -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn is_zero(&self) -> bool {
        *self == Complex64::new(0.0, 0.0)
    }
}

/// A weight or count value in one of the two numeric backends.
#[derive(Clone, Debug, PartialEq)]
pub enum ComplexWeight {
    /// Element of `Z[ω]/(ω^N + 1)`; see [`Cyclotomic`].
    Cyclotomic(Cyclotomic),
    FloatC(Complex64),
}

impl ComplexWeight {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            ComplexWeight::Cyclotomic(z) => z.to_complex(),
            ComplexWeight::FloatC(c) => *c,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ComplexWeight::Cyclotomic(_))
    }

    fn pair<'a>(
        &'a self,
        o: &'a ComplexWeight,
    ) -> Result<(&'a Cyclotomic, &'a Cyclotomic), Option<(Complex64, Complex64)>> {
        match (self, o) {
            (ComplexWeight::Cyclotomic(a), ComplexWeight::Cyclotomic(b))
                if a.size() == b.size() =>
            {
                Ok((a, b))
            }
            (ComplexWeight::FloatC(a), ComplexWeight::FloatC(b)) => Err(Some((*a, *b))),
            _ => Err(None),
        }
    }

    fn mismatch(&self, o: &ComplexWeight) -> WeightError {
        WeightError::OrderMismatch(self.ring_name(), o.ring_name())
    }

    fn ring_name(&self) -> String {
        match self {
            ComplexWeight::Cyclotomic(z) => format!("cyclotomic N={}", z.size()),
            ComplexWeight::FloatC(_) => "float".into(),
        }
    }

    pub fn add(&self, o: &ComplexWeight) -> Result<ComplexWeight, WeightError> {
        match self.pair(o) {
            Ok((a, b)) => Ok(ComplexWeight::Cyclotomic(a.add(b))),
            Err(Some((a, b))) => Ok(ComplexWeight::FloatC(a + b)),
            Err(None) => Err(self.mismatch(o)),
        }
    }

    pub fn mul(&self, o: &ComplexWeight) -> Result<ComplexWeight, WeightError> {
        match self.pair(o) {
            Ok((a, b)) => Ok(ComplexWeight::Cyclotomic(a.mul(b))),
            Err(Some((a, b))) => Ok(ComplexWeight::FloatC(a * b)),
            Err(None) => Err(self.mismatch(o)),
        }
    }

    pub fn neg(&self) -> ComplexWeight {
        match self {
            ComplexWeight::Cyclotomic(z) => ComplexWeight::Cyclotomic(z.neg()),
            ComplexWeight::FloatC(c) => ComplexWeight::FloatC(-c),
        }
    }

    pub fn conj(&self) -> ComplexWeight {
        match self {
            ComplexWeight::Cyclotomic(z) => ComplexWeight::Cyclotomic(z.conj()),
            ComplexWeight::FloatC(c) => ComplexWeight::FloatC(c.conj()),
        }
    }

    /// `w · conj(w)`, a real value (not necessarily a rational integer).
    pub fn modulus_squared(&self) -> ComplexWeight {
        match self {
            ComplexWeight::Cyclotomic(z) => ComplexWeight::Cyclotomic(z.modulus_squared()),
            ComplexWeight::FloatC(c) => ComplexWeight::FloatC(Complex64::new(c.norm_sqr(), 0.0)),
        }
    }
}

impl fmt::Display for ComplexWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexWeight::Cyclotomic(z) => write!(f, "{z}"),
            ComplexWeight::FloatC(c) => write!(f, "{} + {}i", c.re, c.im),
        }
    }
}
