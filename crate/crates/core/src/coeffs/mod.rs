//! Exact coefficient arithmetic.
//!
//! Everything above this layer is generic over [`Coeff`], which has two
//! implementations: [`QRat`] (rational functions of the formal parameter
//! `q`, the default) and [`Num`] (rationals at a fixed generic value `q0`).
//! [`HSeries`] only implements [`Ring`]; it is the target of the `q = e^h`
//! expansions used by the classical-limit checks.

mod cyclo;
mod hseries;
mod numeric;
mod qpoly;
mod qrat;

use std::fmt;

use malachite_base::num::basic::traits::Zero;

use crate::error::Result;

pub use hseries::{h_expand, HSeries, MAX_H_ORDER};
pub use numeric::{numeric_q0, set_numeric_q0, Num};
pub use qpoly::QPoly;
pub use qrat::QRat;

/// Arbitrary precision rational number.
pub type Rat = malachite_q::Rational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::from_signeds(n, d)
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(n)
}

/// A commutative ring with exact equality.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rat(r: &Rat) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rat(&rat_int(n))
    }

    fn add_assign(&mut self, other: &Self) {
        *self = self.add(other);
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// A field of coefficients containing the parameter `q`.
pub trait Coeff: Ring {
    /// `q^k`.
    fn q_pow(k: i64) -> Self;

    /// Multiplicative inverse; fails on zero.
    fn inv(&self) -> Result<Self>;

    fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// `self * q^k`.
    fn mul_qpow(&self, k: i64) -> Self {
        if k == 0 {
            self.clone()
        } else {
            self.mul(&Self::q_pow(k))
        }
    }

    /// The value of `f(q^m)` for a rational function `f` of one variable
    /// with rational coefficients.
    fn eval_qpow(f: &QRat, m: i64) -> Result<Self> {
        let n = Self::poly_at_qpow(&f.num(), m);
        let d = Self::poly_at_qpow(&f.den(), m);
        n.div(&d)
    }

    fn poly_at_qpow(p: &QPoly, m: i64) -> Self {
        let mut acc = Self::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            if *c != Rat::ZERO {
                acc.add_assign(&Self::from_rat(c).mul_qpow(m * k as i64));
            }
        }
        acc
    }

    /// Whether this type carries the formal parameter (exact mode).
    fn is_exact() -> bool;
}
