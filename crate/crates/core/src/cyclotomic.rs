//! Exact arithmetic in `Z[ω]/(ω^N + 1)`, `ω = e^{iπ/N}`, `N` a power of two.
//!
//! Elements are integer vectors over the basis `1, ω, …, ω^{N-1}`. The basis
//! is linearly independent over the rationals, so equality is exact.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::angle::Angle;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    coeffs: Vec<BigInt>,
}

impl Cyclotomic {
    pub fn zero(n: usize) -> Self {
        assert!(n.is_power_of_two(), "ring size must be a power of two");
        Cyclotomic {
            coeffs: vec![BigInt::zero(); n],
        }
    }

    pub fn from_int(n: usize, k: impl Into<BigInt>) -> Self {
        let mut z = Cyclotomic::zero(n);
        z.coeffs[0] = k.into();
        z
    }

    pub fn one(n: usize) -> Self {
        Cyclotomic::from_int(n, 1)
    }

    /// `ω^t` for any integer `t`.
    pub fn omega_pow(n: usize, t: i64) -> Self {
        let mut z = Cyclotomic::zero(n);
        let t = t.rem_euclid(2 * n as i64) as usize;
        if t < n {
            z.coeffs[t] = BigInt::one();
        } else {
            z.coeffs[t - n] = -BigInt::one();
        }
        z
    }

    /// `e^{iθ}` for a dyadic `θ = a·π/2^b` with `2^b ≤ n`.
    pub fn from_angle(n: usize, theta: &Angle) -> Option<Self> {
        let (num, b) = theta.as_dyadic()?;
        if (1usize << b.min(63)) > n || b >= 63 {
            return None;
        }
        let step = (n >> b) as i64;
        let t = (num % BigInt::from(2 * n as i64)).to_i64()?;
        Some(Cyclotomic::omega_pow(n, t * step))
    }

    /// `√2 = ω^{N/4} − ω^{3N/4}`; requires `N ≥ 4`.
    pub fn sqrt2(n: usize) -> Option<Self> {
        if n < 4 {
            return None;
        }
        let mut z = Cyclotomic::zero(n);
        z.coeffs[n / 4] = BigInt::one();
        z.coeffs[3 * n / 4] = -BigInt::one();
        Some(z)
    }

    /// `N`, the number of basis elements.
    pub fn size(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, o: &Cyclotomic) -> Cyclotomic {
        assert_eq!(self.size(), o.size(), "cyclotomic size mismatch");
        Cyclotomic {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, o: &Cyclotomic) -> Cyclotomic {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    /// Negacyclic convolution.
    pub fn mul(&self, o: &Cyclotomic) -> Cyclotomic {
        assert_eq!(self.size(), o.size(), "cyclotomic size mismatch");
        let n = self.size();
        let mut out = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let p = a * b;
                if i + j < n {
                    out[i + j] += p;
                } else {
                    out[i + j - n] -= p;
                }
            }
        }
        Cyclotomic { coeffs: out }
    }

    pub fn scale(&self, k: &BigInt) -> Cyclotomic {
        Cyclotomic {
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }

    /// Complex conjugate: `ω^t ↦ ω^{-t} = −ω^{N−t}`.
    pub fn conj(&self) -> Cyclotomic {
        let n = self.size();
        let mut out = vec![BigInt::zero(); n];
        out[0] = self.coeffs[0].clone();
        for t in 1..n {
            out[n - t] = -&self.coeffs[t];
        }
        Cyclotomic { coeffs: out }
    }

    pub fn modulus_squared(&self) -> Cyclotomic {
        self.mul(&self.conj())
    }

    /// Embeds into the ring of size `m ≥ N` via `ω ↦ ω'^{m/N}`.
    pub fn lift_to(&self, m: usize) -> Cyclotomic {
        assert!(
            m.is_power_of_two() && m >= self.size(),
            "cannot lift to a smaller ring"
        );
        let step = m / self.size();
        let mut out = vec![BigInt::zero(); m];
        for (t, a) in self.coeffs.iter().enumerate() {
            out[t * step] = a.clone();
        }
        Cyclotomic { coeffs: out }
    }

    /// The rational integer this element equals, if it has no `ω^t`, `t > 0`, part.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    /// `(c, t)` when this element is `c·ω^t` with a single nonzero coefficient.
    pub fn as_monomial(&self) -> Option<(&BigInt, usize)> {
        let mut found = None;
        for (t, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                if found.is_some() {
                    return None;
                }
                found = Some((a, t));
            }
        }
        found
    }

    /// Divides every coefficient by `d` when all are divisible.
    pub fn exact_div(&self, d: &BigInt) -> Option<Cyclotomic> {
        let mut out = Vec::with_capacity(self.size());
        for a in &self.coeffs {
            let (q, r) = a.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(Cyclotomic { coeffs: out })
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.size() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(t, a)| {
                let theta = std::f64::consts::PI * t as f64 / n;
                let v = a.to_f64().unwrap_or(f64::NAN);
                Complex64::new(v * theta.cos(), v * theta.sin())
            })
            .sum()
    }
}

impl fmt::Display for Cyclotomic {
    /// `3 + 2*w^2 - w^5` with `w = e^{iπ/N}`; `0` for zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (t, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mag = a.abs();
            if first {
                if a.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if a.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match (t, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "w^{t}")?,
                (_, false) => write!(f, "{mag}*w^{t}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_integers() {
        let n = 2;
        let a = Cyclotomic::one(n).add(&Cyclotomic::omega_pow(n, 1));
        let b = Cyclotomic::one(n).sub(&Cyclotomic::omega_pow(n, 1));
        assert_eq!(a.mul(&b), Cyclotomic::from_int(n, 2));
    }

    #[test]
    fn defining_relation() {
        let w = Cyclotomic::omega_pow(4, 1);
        let w4 = w.mul(&w).mul(&w).mul(&w);
        assert_eq!(w4, Cyclotomic::from_int(4, -1));
    }

    #[test]
    fn sqrt2_squares_to_two() {
        let s = Cyclotomic::sqrt2(8).unwrap();
        assert_eq!(s.mul(&s), Cyclotomic::from_int(8, 2));
        assert!(Cyclotomic::sqrt2(2).is_none());
    }

    #[test]
    fn conj_involution_and_modulus() {
        let z = Cyclotomic::omega_pow(8, 3).add(&Cyclotomic::from_int(8, 2));
        assert_eq!(z.conj().conj(), z);
        let m = z.modulus_squared().to_complex();
        assert!((m - z.to_complex().norm_sqr()).norm() < 1e-12);
        assert_eq!(
            Cyclotomic::omega_pow(8, 5).modulus_squared(),
            Cyclotomic::one(8)
        );
    }

    #[test]
    fn angles_map_exactly() {
        let t = Cyclotomic::from_angle(4, &Angle::dyadic(1, 2)).unwrap();
        assert_eq!(t, Cyclotomic::omega_pow(4, 1));
        let minus = Cyclotomic::from_angle(4, &Angle::pi()).unwrap();
        assert_eq!(minus, Cyclotomic::from_int(4, -1));
        assert!(Cyclotomic::from_angle(2, &Angle::dyadic(1, 2)).is_none());
        assert!(Cyclotomic::from_angle(4, &Angle::float(0.1)).is_none());
    }

    #[test]
    fn lift_preserves_value() {
        let z = Cyclotomic::omega_pow(4, 3).add(&Cyclotomic::from_int(4, 5));
        let l = z.lift_to(16);
        assert!((l.to_complex() - z.to_complex()).norm() < 1e-12);
        assert_eq!(l.mul(&l), z.mul(&z).lift_to(16));
    }

    #[test]
    fn display() {
        let z = Cyclotomic::from_int(4, 3)
            .add(&Cyclotomic::omega_pow(4, 2).scale(&BigInt::from(2)))
            .sub(&Cyclotomic::omega_pow(4, 3));
        assert_eq!(z.to_string(), "3 + 2*w^2 - w^3");
        assert_eq!(Cyclotomic::zero(4).to_string(), "0");
    }
}
