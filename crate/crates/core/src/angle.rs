//! Rotation angles, either exact dyadic multiples of π or plain radians.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Float coefficients closer than this to a multiple of 2π are treated as zero.
pub const FLOAT_ZERO_TOL: f64 = 1e-12;

/// An angle in radians.
///
/// `Dyadic { num, log2_den }` denotes `num·π / 2^log2_den`. It is kept in a
/// canonical form: `0 <= num < 2^(log2_den+1)` and `num` is odd unless the
/// angle is zero (in which case `log2_den == 0`). Two dyadic angles are equal
/// exactly when their fields are equal.
///
/// `Float(r)` stores radians reduced into `(-π, π]`, which makes negation exact.
#[derive(Clone, Debug, PartialEq)]
pub enum Angle {
    Dyadic { num: BigInt, log2_den: u32 },
    Float(f64),
}

impl Angle {
    pub fn zero() -> Self {
        Angle::Dyadic {
            num: BigInt::zero(),
            log2_den: 0,
        }
    }

    /// `π`.
    pub fn pi() -> Self {
        Angle::dyadic(1, 0)
    }

    /// `num·π / 2^log2_den`, canonicalized.
    pub fn dyadic(num: impl Into<BigInt>, log2_den: u32) -> Self {
        let mut num: BigInt = num.into();
        let mut log2_den = log2_den;
        let modulus = BigInt::one() << (log2_den + 1);
        num = num.mod_floor(&modulus);
        if num.is_zero() {
            return Angle::zero();
        }
        while log2_den > 0 && num.is_even() {
            num >>= 1u32;
            log2_den -= 1;
        }
        Angle::Dyadic { num, log2_den }
    }

    pub fn float(radians: f64) -> Self {
        Angle::Float(reduce_radians(radians))
    }

    pub fn is_dyadic(&self) -> bool {
        matches!(self, Angle::Dyadic { .. })
    }

    /// Zero modulo 2π (within [`FLOAT_ZERO_TOL`] for floats).
    pub fn is_zero(&self) -> bool {
        match self {
            Angle::Dyadic { num, .. } => num.is_zero(),
            Angle::Float(r) => r.abs() <= FLOAT_ZERO_TOL,
        }
    }

    /// Exactly π.
    pub fn is_pi(&self) -> bool {
        matches!(self, Angle::Dyadic { num, log2_den: 0 } if num.is_one())
    }

    /// The `(num, log2_den)` pair of a dyadic angle.
    pub fn as_dyadic(&self) -> Option<(&BigInt, u32)> {
        match self {
            Angle::Dyadic { num, log2_den } => Some((num, *log2_den)),
            Angle::Float(_) => None,
        }
    }

    /// Power-of-two exponent of the denominator, `None` for floats.
    pub fn log2_den(&self) -> Option<u32> {
        self.as_dyadic().map(|(_, b)| b)
    }

    pub fn radians(&self) -> f64 {
        match self {
            Angle::Dyadic { num, log2_den } => dyadic_to_f64(num, *log2_den) * PI,
            Angle::Float(r) => *r,
        }
    }

    pub fn add(&self, other: &Angle) -> Angle {
        match (self, other) {
            (
                Angle::Dyadic {
                    num: a,
                    log2_den: b,
                },
                Angle::Dyadic {
                    num: c,
                    log2_den: d,
                },
            ) => {
                let den = (*b).max(*d);
                let lhs = a << (den - b);
                let rhs = c << (den - d);
                Angle::dyadic(lhs + rhs, den)
            }
            _ => Angle::float(self.radians() + other.radians()),
        }
    }

    pub fn neg(&self) -> Angle {
        match self {
            Angle::Dyadic { num, log2_den } => Angle::dyadic(-num, *log2_den),
            Angle::Float(r) => Angle::float(-r),
        }
    }

    pub fn sub(&self, other: &Angle) -> Angle {
        self.add(&other.neg())
    }

    pub fn mul_int(&self, k: i64) -> Angle {
        match self {
            Angle::Dyadic { num, log2_den } => Angle::dyadic(num * k, *log2_den),
            Angle::Float(r) => Angle::float(r * k as f64),
        }
    }

    /// True when `k·self` vanishes modulo 2π for this dyadic angle, i.e. when
    /// `2^(log2_den+1)` divides `k`. Always false for floats.
    pub fn annihilated_by(&self, k: i64) -> bool {
        match self {
            Angle::Dyadic { num, log2_den } => {
                if num.is_zero() {
                    return true;
                }
                let shift = log2_den + 1;
                shift < 63 && k % (1i64 << shift) == 0
            }
            Angle::Float(_) => false,
        }
    }

    /// `(cos, sin)` of the angle, exact for multiples of π/2.
    pub fn cos_sin(&self) -> (f64, f64) {
        if let Angle::Dyadic { num, log2_den } = self {
            if *log2_den <= 1 {
                // num·π/2^b with b <= 1 is a quarter turn multiple
                let quarter = if *log2_den == 0 { num * 2 } else { num.clone() };
                return match quarter.mod_floor(&BigInt::from(4)).to_u8() {
                    Some(0) => (1.0, 0.0),
                    Some(1) => (0.0, 1.0),
                    Some(2) => (-1.0, 0.0),
                    _ => (0.0, -1.0),
                };
            }
        }
        let r = self.radians();
        (r.cos(), r.sin())
    }
}

impl Default for Angle {
    fn default() -> Self {
        Angle::zero()
    }
}

impl fmt::Display for Angle {
    /// `0`, `pi`, `pi/4`, `3*pi/8`, or the float radians.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Dyadic { num, log2_den } => {
                if num.is_zero() {
                    return write!(f, "0");
                }
                if num.is_one() {
                    write!(f, "pi")?;
                } else {
                    write!(f, "{num}*pi")?;
                }
                if *log2_den > 0 {
                    if *log2_den < 64 {
                        write!(f, "/{}", 1u128 << log2_den)?;
                    } else {
                        write!(f, "/2^{log2_den}")?;
                    }
                }
                Ok(())
            }
            Angle::Float(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("malformed angle `{0}`")]
pub struct ParseAngleError(String);

impl FromStr for Angle {
    type Err = ParseAngleError;

    /// Accepts the [`fmt::Display`] forms: `0`, `pi`, `3*pi/4`, `pi/2^70`, or
    /// plain radians.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseAngleError(s.to_string());
        let s = s.trim();
        let Some(pos) = s.find("pi") else {
            let r: f64 = s.parse().map_err(|_| err())?;
            return Ok(if r == 0.0 {
                Angle::zero()
            } else {
                Angle::float(r)
            });
        };
        let num: BigInt = match &s[..pos] {
            "" => BigInt::one(),
            lhs => lhs
                .strip_suffix('*')
                .and_then(|n| n.parse().ok())
                .ok_or_else(err)?,
        };
        let log2_den = match &s[pos + 2..] {
            "" => 0,
            rhs => {
                let den = rhs.strip_prefix('/').ok_or_else(err)?;
                if let Some(b) = den.strip_prefix("2^") {
                    b.parse().map_err(|_| err())?
                } else {
                    let d: u128 = den.parse().map_err(|_| err())?;
                    if !d.is_power_of_two() {
                        return Err(err());
                    }
                    d.trailing_zeros()
                }
            }
        };
        Ok(Angle::dyadic(num, log2_den))
    }
}

fn reduce_radians(r: f64) -> f64 {
    if !r.is_finite() {
        return r;
    }
    let mut x = r;
    if !(x > -PI && x <= PI) {
        x = r.rem_euclid(TAU);
        if x > PI {
            x -= TAU;
        }
    }
    if x.abs() <= FLOAT_ZERO_TOL {
        return 0.0;
    }
    x
}

fn dyadic_to_f64(num: &BigInt, log2_den: u32) -> f64 {
    if log2_den <= 60 {
        num.to_f64().unwrap_or(f64::NAN) / (1u64 << log2_den) as f64
    } else {
        let drop = log2_den - 60;
        let top: BigInt = num >> drop;
        top.to_f64().unwrap_or(f64::NAN) / (1u64 << 60) as f64
    }
}
