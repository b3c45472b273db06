use std::fmt;

use malachite_base::num::arithmetic::traits::{Abs, Reciprocal};
use malachite_base::num::basic::traits::{One, Zero};

use super::{rat_int, Rat};

/// Dense univariate polynomial with rational coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    c: Vec<Rat>,
}

impl QPoly {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(|x| *x == Rat::ZERO) {
            c.pop();
        }
        QPoly { c }
    }

    pub fn zero() -> Self {
        QPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly { c: vec![Rat::ONE] }
    }

    pub fn constant(r: Rat) -> Self {
        QPoly::new(vec![r])
    }

    /// `c * q^k`.
    pub fn monomial(r: Rat, k: usize) -> Self {
        let mut c = vec![Rat::ZERO; k + 1];
        c[k] = r;
        QPoly::new(c)
    }

    /// Builds from small integer coefficients, lowest degree first.
    pub fn from_ints(c: &[i64]) -> Self {
        QPoly::new(c.iter().map(|&x| rat_int(x)).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == Rat::ONE
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Rat> {
        self.c.last()
    }

    /// Multiplicity of the root `q = 0`.
    pub fn low_order(&self) -> usize {
        self.c.iter().take_while(|x| **x == Rat::ZERO).count()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.c.get(i);
            let b = o.c.get(i);
            c.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        QPoly::new(c)
    }

    pub fn neg(&self) -> Self {
        QPoly {
            c: self.c.iter().map(|x| -x).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut c = vec![Rat::ZERO; self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if *a == Rat::ZERO {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if *b != Rat::ZERO {
                    c[i + j] += a * b;
                }
            }
        }
        QPoly::new(c)
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if *r == Rat::ZERO {
            return QPoly::zero();
        }
        QPoly {
            c: self.c.iter().map(|x| x * r).collect(),
        }
    }

    /// Multiplication by `q^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut c = vec![Rat::ZERO; k];
        c.extend(self.c.iter().cloned());
        QPoly { c }
    }

    /// Division by `q^k`; the caller guarantees `k <= low_order()`.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(k <= self.low_order() || self.is_zero());
        QPoly {
            c: self.c.iter().skip(k).cloned().collect(),
        }
    }

    /// Euclidean division; `d` must be nonzero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        if self.c.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let inv_lead = (&d.c[dd]).reciprocal();
        let mut r = self.c.clone();
        let mut q = vec![Rat::ZERO; r.len() - dd];
        for i in (0..q.len()).rev() {
            let t = &r[i + dd] * &inv_lead;
            if t == Rat::ZERO {
                continue;
            }
            for (j, dj) in d.c.iter().enumerate() {
                if *dj != Rat::ZERO {
                    r[i + j] -= &t * dj;
                }
            }
            q[i] = t;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    /// Scales to a monic polynomial; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.lead() {
            None => QPoly::zero(),
            Some(l) if *l == Rat::ONE => self.clone(),
            Some(l) => self.scale(&l.reciprocal()),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut x, mut y) = (a.monic(), b.monic());
        if x.degree() < y.degree() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_zero() {
            if y.degree() == Some(0) {
                return QPoly::one();
            }
            let (_, r) = x.divrem(&y);
            x = y;
            y = r.monic();
        }
        x
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::ZERO;
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Polynomial in `q^k`: substitutes `q -> q^k` for `k >= 1`.
    pub fn compose_power(&self, k: usize) -> Self {
        if k == 1 || self.c.len() <= 1 {
            return self.clone();
        }
        let mut c = vec![Rat::ZERO; (self.c.len() - 1) * k + 1];
        for (i, x) in self.c.iter().enumerate() {
            c[i * k] = x.clone();
        }
        QPoly::new(c)
    }

    /// Reverses coefficients of a polynomial of formal degree `n`:
    /// `q^n p(1/q)`.
    pub fn reversed(&self, n: usize) -> Self {
        let mut c = vec![Rat::ZERO; n + 1];
        for (i, x) in self.c.iter().enumerate() {
            c[n - i] = x.clone();
        }
        QPoly::new(c)
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Prints terms highest degree first, e.g. `q^2 - 3/2*q + 1`.
impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.c.iter().enumerate().rev() {
            if *c == Rat::ZERO {
                continue;
            }
            let neg = *c < Rat::ZERO;
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let body = match k {
                0 => None,
                1 => Some("q".to_string()),
                _ => Some(format!("q^{k}")),
            };
            match body {
                None => write!(f, "{a}")?,
                Some(b) if a == Rat::ONE => write!(f, "{b}")?,
                Some(b) => write!(f, "{a}*{b}")?,
            }
        }
        Ok(())
    }
}
