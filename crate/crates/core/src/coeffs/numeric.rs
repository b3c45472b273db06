use std::fmt;
use std::sync::RwLock;

use malachite_base::num::arithmetic::traits::{Pow, Reciprocal};
use malachite_base::num::basic::traits::{NegativeOne, One, Zero};

use super::{rat, Coeff, QRat, Rat, Ring};
use crate::error::{Error, Result};

static Q0: RwLock<Option<Rat>> = RwLock::new(None);

/// The value substituted for `q` in numeric mode. Defaults to `3/2`.
pub fn numeric_q0() -> Rat {
    Q0.read().unwrap().clone().unwrap_or_else(|| rat(3, 2))
}

/// Sets the process-wide numeric `q0`. Zero and roots of unity are rejected.
pub fn set_numeric_q0(q0: Rat) -> Result<()> {
    if q0 == Rat::ZERO || q0 == Rat::ONE || q0 == Rat::NEGATIVE_ONE {
        return Err(Error::Config(format!("q0 = {q0} is not generic")));
    }
    *Q0.write().unwrap() = Some(q0);
    Ok(())
}

/// A rational number standing for a rational function evaluated at `q0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Num(pub Rat);

impl Num {
    pub fn from_qrat(a: &QRat) -> Result<Self> {
        a.eval(&numeric_q0()).map(Num)
    }
}

impl Ring for Num {
    fn zero() -> Self {
        Num(Rat::ZERO)
    }
    fn one() -> Self {
        Num(Rat::ONE)
    }
    fn is_zero(&self) -> bool {
        self.0 == Rat::ZERO
    }
    fn add(&self, o: &Self) -> Self {
        Num(&self.0 + &o.0)
    }
    fn sub(&self, o: &Self) -> Self {
        Num(&self.0 - &o.0)
    }
    fn mul(&self, o: &Self) -> Self {
        Num(&self.0 * &o.0)
    }
    fn neg(&self) -> Self {
        Num(-&self.0)
    }
    fn from_rat(r: &Rat) -> Self {
        Num(r.clone())
    }
}

impl Coeff for Num {
    fn q_pow(k: i64) -> Self {
        let q0 = numeric_q0();
        Num(q0.pow(k))
    }

    fn inv(&self) -> Result<Self> {
        if self.0 == Rat::ZERO {
            return Err(Error::DivisionByZero);
        }
        Ok(Num((&self.0).reciprocal()))
    }

    fn eval_qpow(f: &QRat, m: i64) -> Result<Self> {
        let x = Self::q_pow(m).0;
        f.eval(&x).map(Num)
    }

    fn is_exact() -> bool {
        false
    }
}

impl fmt::Debug for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
