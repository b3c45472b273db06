use std::fmt;

use malachite_base::num::arithmetic::traits::{Pow, Reciprocal};
use malachite_base::num::basic::traits::{One, Zero};

use super::{QPoly, QRat, Rat, Ring};
use crate::error::{Error, Result};

/// Largest expansion order `h_expand` accepts.
pub const MAX_H_ORDER: i64 = 256;

/// Truncated Laurent series in `h`:
/// `sum_{k = val}^{prec - 1} c[k - val] h^k + O(h^prec)`.
///
/// Exact values (polynomials in `h`) carry `prec = i64::MAX`. The zero
/// series has `val = prec`.
#[derive(Clone)]
pub struct HSeries {
    val: i64,
    c: Vec<Rat>,
    prec: i64,
}

impl HSeries {
    pub fn new(val: i64, c: Vec<Rat>, prec: i64) -> Self {
        let mut s = HSeries { val, c, prec };
        s.normalize();
        s
    }

    /// `c h^k`, exact.
    pub fn monomial(c: Rat, k: i64) -> Self {
        HSeries::new(k, vec![c], i64::MAX)
    }

    /// The zero series known up to `O(h^prec)`.
    pub fn zero_to(prec: i64) -> Self {
        HSeries {
            val: prec,
            c: Vec::new(),
            prec,
        }
    }

    fn normalize(&mut self) {
        let cut = (self.prec.saturating_sub(self.val)).max(0);
        if (cut as u128) < self.c.len() as u128 {
            self.c.truncate(cut as usize);
        }
        let lead = self.c.iter().take_while(|x| **x == Rat::ZERO).count();
        if lead > 0 {
            self.c.drain(..lead);
            self.val += lead as i64;
        }
        while self.c.last().is_some_and(|x| *x == Rat::ZERO) {
            self.c.pop();
        }
        if self.c.is_empty() {
            self.val = self.prec;
        }
    }

    /// Lowest exponent with a nonzero coefficient (`prec` for zero).
    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == i64::MAX
    }

    /// Coefficient of `h^k`; `None` when `k` lies beyond the precision.
    pub fn coeff(&self, k: i64) -> Option<Rat> {
        if k >= self.prec {
            return None;
        }
        if k < self.val {
            return Some(Rat::ZERO);
        }
        Some(
            self.c
                .get((k - self.val) as usize)
                .cloned()
                .unwrap_or(Rat::ZERO),
        )
    }

    /// Lowers the precision to `prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        HSeries::new(self.val, self.c.clone(), self.prec.min(prec))
    }

    /// Division by a series with a nonzero leading coefficient.
    pub fn div(&self, d: &HSeries) -> Result<HSeries> {
        if d.c.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let val = self.val - d.val;
        // relative precision of the quotient
        let rel = (self.prec.saturating_sub(self.val)).min(d.prec.saturating_sub(d.val));
        if self.c.is_empty() {
            return Ok(HSeries::zero_to(self.prec.saturating_sub(d.val)));
        }
        let n = if rel == i64::MAX || rel > MAX_H_ORDER * 4 {
            // exact numerator/denominator: caller decides the length later
            return Err(Error::ExpansionCapacity {
                requested: rel,
                capacity: MAX_H_ORDER * 4,
            });
        } else {
            rel as usize
        };
        let inv_lead = (&d.c[0]).reciprocal();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.c.get(k).cloned().unwrap_or(Rat::ZERO);
            for j in 1..=k.min(d.c.len().saturating_sub(1)) {
                acc -= &d.c[j] * &out[k - j];
            }
            out.push(acc * &inv_lead);
        }
        Ok(HSeries::new(val, out, val + n as i64))
    }
}

impl PartialEq for HSeries {
    /// Equality on the common precision.
    fn eq(&self, o: &Self) -> bool {
        let p = self.prec.min(o.prec);
        let lo = self.val.min(o.val);
        if p == i64::MAX {
            return self.val == o.val && self.c == o.c;
        }
        (lo..p).all(|k| self.coeff(k) == o.coeff(k))
    }
}

impl Ring for HSeries {
    fn zero() -> Self {
        HSeries::zero_to(i64::MAX)
    }
    fn one() -> Self {
        HSeries::monomial(Rat::ONE, 0)
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        if self.c.is_empty() {
            return o.truncate(prec);
        }
        if o.c.is_empty() {
            return self.truncate(prec);
        }
        let val = self.val.min(o.val);
        let top = (self.val + self.c.len() as i64)
            .max(o.val + o.c.len() as i64)
            .min(prec);
        let c = (val..top.max(val))
            .map(|k| self.coeff(k).unwrap_or_default() + o.coeff(k).unwrap_or_default())
            .collect();
        HSeries::new(val, c, prec)
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let prec = self
            .prec
            .saturating_add(o.val)
            .min(o.prec.saturating_add(self.val));
        if self.c.is_empty() || o.c.is_empty() {
            return HSeries::zero_to(prec);
        }
        let val = self.val + o.val;
        let len =
            ((prec.saturating_sub(val)) as u128).min((self.c.len() + o.c.len()) as u128) as usize;
        let mut c = vec![Rat::ZERO; len];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                if i + j < len {
                    c[i + j] += a * b;
                }
            }
        }
        HSeries::new(val, c, prec)
    }
    fn neg(&self) -> Self {
        HSeries {
            val: self.val,
            c: self.c.iter().map(|x| -x).collect(),
            prec: self.prec,
        }
    }
    fn from_rat(r: &Rat) -> Self {
        HSeries::monomial(r.clone(), 0)
    }
}

/// Expansion of `p(e^h)` as an exact-coefficient series to `O(h^prec)`.
fn poly_at_exp(p: &QPoly, prec: i64) -> HSeries {
    // p(e^h) = sum_k h^k / k! * sum_j c_j j^k
    let n = prec.max(0) as usize;
    let mut out = Vec::with_capacity(n);
    let mut fact = Rat::ONE;
    for k in 0..n {
        if k > 0 {
            fact *= Rat::from(k as u64);
        }
        let mut s = Rat::ZERO;
        for (j, c) in p.coeffs().iter().enumerate() {
            if *c != Rat::ZERO {
                s += c * Rat::from(j as u64).pow(k as u64);
            }
        }
        out.push(s / &fact);
    }
    HSeries::new(0, out, prec)
}

/// Order of vanishing of `p` at `q = 1`.
fn order_at_one(p: &QPoly) -> i64 {
    let root = QPoly::from_ints(&[-1, 1]);
    let mut p = p.clone();
    let mut k = 0;
    while !p.is_zero() {
        let (quo, r) = p.divrem(&root);
        if !r.is_zero() {
            break;
        }
        p = quo;
        k += 1;
    }
    k
}

/// Laurent expansion of `a(e^h)` at `h = 0`, valid to `O(h^order)`.
pub fn h_expand(a: &QRat, order: i64) -> Result<HSeries> {
    if !(1..=MAX_H_ORDER).contains(&order) {
        return Err(Error::ExpansionCapacity {
            requested: order,
            capacity: MAX_H_ORDER,
        });
    }
    if a.is_zero() {
        return Ok(HSeries::zero_to(order));
    }
    let (num, den) = (a.num(), a.den());
    let vn = order_at_one(&num);
    let vd = order_at_one(&den);
    // quotient valuation is vn - vd; ask for enough relative precision
    let rel = order - (vn - vd);
    if rel <= 0 {
        return Ok(HSeries::zero_to(order));
    }
    let n = poly_at_exp(&num, vn + rel);
    let d = poly_at_exp(&den, vd + rel);
    let q = n.div(&d)?;
    Ok(q.truncate(order))
}

impl fmt::Debug for HSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for HSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.c.iter().enumerate() {
            if *c == Rat::ZERO {
                continue;
            }
            let k = self.val + i as i64;
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*h")?,
                _ => write!(f, "{c}*h^{k}")?,
            }
        }
        if self.prec != i64::MAX {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "O(h^{})", self.prec)?;
        } else if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{rat, rat_int, Coeff};

    fn inv_series(c: &[i64]) -> QRat {
        QRat::new(QPoly::one(), QPoly::from_ints(c)).unwrap()
    }

    #[test]
    fn exponential_series() {
        let s = h_expand(&QRat::q(), 3).unwrap();
        assert_eq!(s.coeff(0), Some(rat_int(1)));
        assert_eq!(s.coeff(1), Some(rat_int(1)));
        assert_eq!(s.coeff(2), Some(rat(1, 2)));
        assert_eq!(s.coeff(3), None);
    }

    #[test]
    fn regular_quotient() {
        // 1/(1 + e^h) = 1/2 - h/4 + O(h^2)
        let s = h_expand(&inv_series(&[1, 1]), 2).unwrap();
        assert_eq!(s.coeff(0), Some(rat(1, 2)));
        assert_eq!(s.coeff(1), Some(rat(-1, 4)));
    }

    #[test]
    fn simple_pole() {
        // 1/(1 - e^h) = -1/h + 1/2 - h/12 + O(h^2)
        let s = h_expand(&inv_series(&[1, -1]), 2).unwrap();
        assert_eq!(s.valuation(), -1);
        assert_eq!(s.coeff(-1), Some(rat_int(-1)));
        assert_eq!(s.coeff(0), Some(rat(1, 2)));
        assert_eq!(s.coeff(1), Some(rat(-1, 12)));
        assert_eq!(s.precision(), 2);
    }

    #[test]
    fn capacity_error() {
        assert!(matches!(
            h_expand(&QRat::q(), MAX_H_ORDER + 1),
            Err(Error::ExpansionCapacity { .. })
        ));
        assert!(h_expand(&QRat::q(), 0).is_err());
    }

    #[test]
    fn expansion_is_multiplicative() {
        let a = QRat::one_plus_qpow(2)
            .div(&QRat::one_minus_qpow(3))
            .unwrap();
        let b = QRat::one_minus_qpow(1)
            .div(&QRat::one_plus_qpow(1))
            .unwrap();
        let k = 6;
        let lhs = h_expand(&a.mul(&b), k).unwrap();
        let rhs = h_expand(&a, k + 2)
            .unwrap()
            .mul(&h_expand(&b, k + 2).unwrap());
        assert_eq!(lhs, rhs.truncate(k));
    }
}
