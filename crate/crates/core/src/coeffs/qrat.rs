use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use malachite_base::num::arithmetic::traits::{DivExact, Gcd, Lcm, Pow};
use malachite_base::num::basic::traits::{One, Zero};
use malachite_nz::integer::Integer;
use malachite_nz::natural::Natural;

use super::cyclo::{self, ZPoly};
use super::{Coeff, QPoly, Rat, Ring};
use crate::error::{Error, Result};

/// Rational function of `q` in canonical form
/// `q^v a(q) / (s * prod_d Φ_d(q)^{e_d} * o(q))`.
///
/// `a` is an integer polynomial with `a(0) != 0` whose content is coprime
/// to the positive integer `s`; no `Φ_d` of the denominator divides `a`.
/// `o` collects whatever part of the denominator is not cyclotomic; it is
/// primitive with positive leading coefficient, `o(0) != 0`, and coprime to
/// `a`. The form is unique, so equality is structural.
///
/// Denominators arising from the q-difference calculus are products of
/// `q^k` and `1 - q^m`, which keeps `o` trivial and arithmetic gcd-free on
/// the common path.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QRat {
    v: i64,
    a: ZPoly,
    s: Natural,
    cyc: Vec<(u32, u32)>,
    other: Option<Arc<ZPoly>>,
}

fn merge_max(x: &[(u32, u32)], y: &[(u32, u32)]) -> Vec<(u32, u32)> {
    merge_with(x, y, u32::max)
}

fn merge_sum(x: &[(u32, u32)], y: &[(u32, u32)]) -> Vec<(u32, u32)> {
    merge_with(x, y, |a, b| a + b)
}

fn merge_with(x: &[(u32, u32)], y: &[(u32, u32)], f: impl Fn(u32, u32) -> u32) -> Vec<(u32, u32)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take = match (x.get(i), y.get(j)) {
            (Some(a), Some(b)) if a.0 == b.0 => {
                out.push((a.0, f(a.1, b.1)));
                i += 1;
                j += 1;
                continue;
            }
            (Some(a), Some(b)) => a.0 < b.0,
            (Some(_), None) => true,
            _ => false,
        };
        if take {
            out.push((x[i].0, f(x[i].1, 0)));
            i += 1;
        } else {
            out.push((y[j].0, f(0, y[j].1)));
            j += 1;
        }
    }
    out.retain(|e| e.1 > 0);
    out
}

/// Multiplies `a` by `Φ_d^e` for every listed factor.
fn mul_cyc(mut a: ZPoly, f: &[(u32, u32)]) -> ZPoly {
    for (d, e) in f {
        let p = cyclo::phi(*d);
        for _ in 0..*e {
            a = cyclo::zmul_small(&a, &p);
        }
    }
    a
}

/// Divides out of `a` every factor of `cyc` that divides it, lowering the
/// exponents in place.
fn cancel_cyc(a: &mut ZPoly, cyc: &mut Vec<(u32, u32)>) {
    for (d, e) in cyc.iter_mut() {
        let p = cyclo::phi(*d);
        while *e > 0 {
            match cyclo::zdiv_monic(a, &p) {
                Some(q) => {
                    *a = q;
                    *e -= 1;
                }
                None => break,
            }
        }
    }
    cyc.retain(|e| e.1 > 0);
}

fn zpoly_to_qpoly(a: &[Integer]) -> QPoly {
    QPoly::new(a.iter().map(|x| Rat::from(x.clone())).collect())
}

/// Clears denominators: `p = z / s` with `z` integral, `s > 0`, and the
/// content of `z` coprime to `s`.
fn qpoly_to_zpoly(p: &QPoly) -> (ZPoly, Natural) {
    let mut l = Natural::ONE;
    for c in p.coeffs() {
        l = l.lcm(c.denominator_ref());
    }
    let li = Rat::from(l.clone());
    let z: ZPoly = p
        .coeffs()
        .iter()
        .map(|c| Integer::try_from(c * &li).expect("integral after clearing denominators"))
        .collect();
    let g = cyclo::content(&z).gcd(&l);
    if g == Natural::ONE {
        (z, l)
    } else {
        (cyclo::zdiv_scalar(&z, &g), l.div_exact(&g))
    }
}

fn low_zeros(a: &[Integer]) -> usize {
    a.iter().take_while(|x| **x == Integer::ZERO).count()
}

impl QRat {
    fn zero_value() -> Self {
        QRat {
            v: 0,
            a: Vec::new(),
            s: Natural::ONE,
            cyc: Vec::new(),
            other: None,
        }
    }

    /// Finishes a value whose denominator parts are already canonical:
    /// strips powers of `q` from `a`, cancels cyclotomic factors when asked
    /// and reduces the content against `s`.
    fn finish(
        mut v: i64,
        mut a: ZPoly,
        mut s: Natural,
        mut cyc: Vec<(u32, u32)>,
        check: bool,
    ) -> Self {
        cyclo::trim(&mut a);
        if a.is_empty() {
            return QRat::zero_value();
        }
        let z = low_zeros(&a);
        if z > 0 {
            a.drain(..z);
            v += z as i64;
        }
        if check && !cyc.is_empty() {
            cancel_cyc(&mut a, &mut cyc);
        }
        if s != Natural::ONE {
            let g = cyclo::content(&a).gcd(&s);
            if g != Natural::ONE {
                a = cyclo::zdiv_scalar(&a, &g);
                s = s.div_exact(&g);
            }
        }
        QRat {
            v,
            a,
            s,
            cyc,
            other: None,
        }
    }

    /// Builds `num / den`, reducing to canonical form.
    pub fn new(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(QRat::zero_value());
        }
        let g = QPoly::gcd(&num, &den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.divrem(&g).0, den.divrem(&g).0)
        };
        let (mut a, sa) = qpoly_to_zpoly(&num);
        let (mut d, sd) = qpoly_to_zpoly(&den);
        // num/den = (a/sa) / (d/sd) = (a*sd) / (sa*d)
        a = cyclo::zscale(&a, &Integer::from(sd));
        let va = low_zeros(&a);
        a.drain(..va);
        let vd = low_zeros(&d);
        d.drain(..vd);
        let (cyc, rest) = cyclo::cyclotomic_part(&d);
        // rest = sign * c * o with o primitive, positive leading coefficient
        let c = cyclo::content(&rest);
        let mut o = cyclo::zdiv_scalar(&rest, &c);
        if *o.last().unwrap() < Integer::ZERO {
            o = o.iter().map(|x| -x).collect();
            a = a.iter().map(|x| -x).collect();
        }
        let s = sa * c;
        let mut r = QRat::finish(va as i64 - vd as i64, a, s, cyc, false);
        if o.len() > 1 {
            r.other = Some(Arc::new(o));
        }
        Ok(r)
    }

    pub fn from_poly(p: QPoly) -> Self {
        QRat::new(p, QPoly::one()).unwrap()
    }

    /// Numerator of the reduced fraction with monic denominator.
    pub fn num(&self) -> QPoly {
        self.parts().0
    }

    /// Monic denominator of the reduced fraction.
    pub fn den(&self) -> QPoly {
        self.parts().1
    }

    fn parts(&self) -> (QPoly, QPoly) {
        if self.a.is_empty() {
            return (QPoly::zero(), QPoly::one());
        }
        let mut n = zpoly_to_qpoly(&self.a);
        let mut d = zpoly_to_qpoly(&mul_cyc(vec![Integer::ONE], &self.cyc));
        if let Some(o) = &self.other {
            d = d.mul(&zpoly_to_qpoly(o));
        }
        if self.v >= 0 {
            n = n.shift_up(self.v as usize);
        } else {
            d = d.shift_up((-self.v) as usize);
        }
        let lead = d.lead().unwrap().clone() * Rat::from(self.s.clone());
        let inv = Rat::ONE / lead;
        (n.scale(&inv), d.monic())
    }

    /// The formal parameter itself.
    pub fn q() -> Self {
        QRat::q_pow(1)
    }

    pub fn is_polynomial(&self) -> bool {
        self.cyc.is_empty() && self.other.is_none() && self.v >= 0
    }

    /// Exact value at `q = q0`.
    pub fn eval(&self, q0: &Rat) -> Result<Rat> {
        if self.a.is_empty() {
            return Ok(Rat::ZERO);
        }
        let pole = || Error::Pole(q0.to_string());
        let ev = |p: &[Integer]| {
            let mut acc = Rat::ZERO;
            for c in p.iter().rev() {
                acc = acc * q0 + Rat::from(c.clone());
            }
            acc
        };
        let mut den = Rat::from(self.s.clone());
        for (d, e) in &self.cyc {
            let p: ZPoly = cyclo::phi(*d).iter().map(|&x| Integer::from(x)).collect();
            den *= ev(&p).pow(*e as u64);
        }
        if let Some(o) = &self.other {
            den *= ev(o);
        }
        if den == Rat::ZERO {
            return Err(pole());
        }
        let mut val = ev(&self.a) / den;
        if self.v != 0 {
            if *q0 == Rat::ZERO {
                if self.v < 0 {
                    return Err(pole());
                }
                return Ok(Rat::ZERO);
            }
            val *= q0.pow(self.v);
        }
        Ok(val)
    }

    pub fn pow_i(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(Ring::pow(self, e as u32))
        } else {
            Ok(Ring::pow(&self.inv()?, (-e) as u32))
        }
    }

    /// `(1 - q^a)` for any integer `a`.
    pub fn one_minus_qpow(a: i64) -> Self {
        QRat::one().sub(&QRat::q_pow(a))
    }

    /// `(1 + q^a)`.
    pub fn one_plus_qpow(a: i64) -> Self {
        QRat::one().add(&QRat::q_pow(a))
    }

    fn general(&self) -> (QPoly, QPoly) {
        self.parts()
    }
}

impl Ring for QRat {
    fn zero() -> Self {
        QRat::zero_value()
    }

    fn one() -> Self {
        QRat {
            v: 0,
            a: vec![Integer::ONE],
            s: Natural::ONE,
            cyc: Vec::new(),
            other: None,
        }
    }

    fn is_zero(&self) -> bool {
        self.a.is_empty()
    }

    fn is_one(&self) -> bool {
        self.v == 0
            && self.a.len() == 1
            && self.a[0] == Integer::ONE
            && self.s == Natural::ONE
            && self.cyc.is_empty()
            && self.other.is_none()
    }

    fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.other.is_some() || o.other.is_some() {
            let (n1, d1) = self.general();
            let (n2, d2) = o.general();
            return QRat::new(n1.mul(&d2).add(&n2.mul(&d1)), d1.mul(&d2)).unwrap();
        }
        let v = self.v.min(o.v);
        let (a1, a2) = if self.cyc == o.cyc {
            (
                cyclo::zshift(&self.a, (self.v - v) as usize),
                cyclo::zshift(&o.a, (o.v - v) as usize),
            )
        } else {
            let cyc = merge_max(&self.cyc, &o.cyc);
            let miss = |c: &[(u32, u32)]| -> Vec<(u32, u32)> {
                cyc.iter()
                    .map(|(d, e)| {
                        let have = c.iter().find(|x| x.0 == *d).map_or(0, |x| x.1);
                        (*d, e - have)
                    })
                    .filter(|x| x.1 > 0)
                    .collect()
            };
            (
                cyclo::zshift(
                    &mul_cyc(self.a.clone(), &miss(&self.cyc)),
                    (self.v - v) as usize,
                ),
                cyclo::zshift(&mul_cyc(o.a.clone(), &miss(&o.cyc)), (o.v - v) as usize),
            )
        };
        let cyc = merge_max(&self.cyc, &o.cyc);
        let (a, s) = if self.s == o.s {
            (cyclo::zadd(&a1, &a2), self.s.clone())
        } else {
            let s = (&self.s).lcm(&o.s);
            let f1 = Integer::from((&s).div_exact(&self.s));
            let f2 = Integer::from((&s).div_exact(&o.s));
            (
                cyclo::zadd(&cyclo::zscale(&a1, &f1), &cyclo::zscale(&a2, &f2)),
                s,
            )
        };
        QRat::finish(v, a, s, cyc, true)
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return QRat::zero();
        }
        if self.other.is_some() || o.other.is_some() {
            let (n1, d1) = self.general();
            let (n2, d2) = o.general();
            return QRat::new(n1.mul(&n2), d1.mul(&d2)).unwrap();
        }
        let mut a1 = self.a.clone();
        let mut c2 = o.cyc.clone();
        if !c2.is_empty() && a1.len() > 1 {
            cancel_cyc(&mut a1, &mut c2);
        }
        let mut a2 = o.a.clone();
        let mut c1 = self.cyc.clone();
        if !c1.is_empty() && a2.len() > 1 {
            cancel_cyc(&mut a2, &mut c1);
        }
        let a = if a1.len() == 1 && a1[0] == Integer::ONE {
            a2
        } else if a2.len() == 1 && a2[0] == Integer::ONE {
            a1
        } else {
            cyclo::zmul(&a1, &a2)
        };
        let s = &self.s * &o.s;
        QRat::finish(self.v + o.v, a, s, merge_sum(&c1, &c2), false)
    }

    fn neg(&self) -> Self {
        let mut r = self.clone();
        for x in r.a.iter_mut() {
            *x = -&*x;
        }
        r
    }

    fn from_rat(r: &Rat) -> Self {
        let (n, d) = r.to_numerator_and_denominator();
        let mut a = Integer::from(n);
        if *r < Rat::ZERO {
            a = -a;
        }
        QRat::finish(0, vec![a], d, Vec::new(), false)
    }
}

type EvalCache = RwLock<HashMap<(QRat, i64), QRat>>;

fn eval_cache() -> &'static EvalCache {
    static C: OnceLock<EvalCache> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

impl Coeff for QRat {
    fn q_pow(k: i64) -> Self {
        QRat {
            v: k,
            a: vec![Integer::ONE],
            s: Natural::ONE,
            cyc: Vec::new(),
            other: None,
        }
    }

    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.other.is_some() {
            let (n, d) = self.general();
            return QRat::new(d, n);
        }
        let (cyc, rest) = cyclo::cyclotomic_part(&self.a);
        if rest.len() > 1 {
            let (n, d) = self.general();
            return QRat::new(d, n);
        }
        // self = q^v * c * prod Φ^f / (s * prod Φ^e)
        let c = &rest[0];
        let mut a = mul_cyc(vec![Integer::from(self.s.clone())], &self.cyc);
        if *c < Integer::ZERO {
            a = a.iter().map(|x| -x).collect();
        }
        Ok(QRat::finish(
            -self.v,
            a,
            c.unsigned_abs_ref().clone(),
            cyc,
            false,
        ))
    }

    fn mul_qpow(&self, k: i64) -> Self {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        let mut r = self.clone();
        r.v += k;
        r
    }

    fn eval_qpow(f: &QRat, m: i64) -> Result<Self> {
        let key = (f.clone(), m);
        if let Some(r) = eval_cache().read().unwrap().get(&key) {
            return Ok(r.clone());
        }
        let r = eval_qpow_uncached(f, m)?;
        eval_cache().write().unwrap().insert(key, r.clone());
        Ok(r)
    }

    fn is_exact() -> bool {
        true
    }
}

fn eval_qpow_uncached(f: &QRat, m: i64) -> Result<QRat> {
    let (num, den) = f.general();
    if m == 0 {
        let d = den.eval(&Rat::ONE);
        if d == Rat::ZERO {
            return Err(Error::Pole("1".into()));
        }
        return Ok(QRat::from_rat(&(num.eval(&Rat::ONE) / d)));
    }
    if m > 0 {
        let m = m as usize;
        return QRat::new(num.compose_power(m), den.compose_power(m));
    }
    // f(q^-k) = q^{k*dn} n(q^-k) / (q^{k*dd} d(q^-k)) * q^{k*(dd-dn)}
    let k = (-m) as usize;
    let dn = num.degree().unwrap_or(0);
    let dd = den.degree().unwrap_or(0);
    let n = num.compose_power(k).reversed(dn * k);
    let d = den.compose_power(k).reversed(dd * k);
    let r = QRat::new(n, d)?;
    Ok(r.mul_qpow((k * dd) as i64 - (k * dn) as i64))
}

impl fmt::Debug for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `num` alone when the denominator is 1, otherwise `(num)/(den)`.
impl fmt::Display for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.parts();
        if den.is_one() {
            let s = num.to_string();
            if num.coeffs().iter().filter(|c| **c != Rat::ZERO).count() > 1 {
                write!(f, "({s})")
            } else {
                write!(f, "{s}")
            }
        } else {
            write!(f, "({num})/({den})")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{rat, rat_int};

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_ints(c)
    }

    #[test]
    fn cancels_common_factor() {
        let a = QRat::new(p(&[1, 0, -1]), p(&[1, -1])).unwrap();
        assert_eq!(a, QRat::from_poly(p(&[1, 1])));
    }

    #[test]
    fn sum_over_common_denominator() {
        let d = p(&[1, 1]);
        let a = QRat::new(p(&[1]), d.clone()).unwrap();
        let b = QRat::new(p(&[0, 1]), d).unwrap();
        assert!(a.add(&b).is_one());
    }

    #[test]
    fn product_reduces() {
        let a = QRat::new(p(&[1, 0, 0, -1]), p(&[1, 1])).unwrap();
        let b = QRat::new(p(&[1, 1]), p(&[1, -1])).unwrap();
        assert_eq!(a.mul(&b), QRat::from_poly(p(&[1, 1, 1])));
    }

    #[test]
    fn evaluation_and_poles() {
        let a = QRat::new(p(&[1, 0, -1]), p(&[1, -1])).unwrap();
        assert_eq!(a.eval(&rat_int(2)).unwrap(), rat_int(3));
        let b = QRat::new(p(&[1]), p(&[1, 1])).unwrap();
        assert_eq!(b.eval(&rat_int(1)).unwrap(), rat(1, 2));
        let c = QRat::new(p(&[1]), p(&[1, 0, -1])).unwrap();
        assert!(matches!(c.eval(&rat_int(1)), Err(Error::Pole(_))));
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(QRat::zero().inv(), Err(Error::DivisionByZero));
        assert!(QRat::new(p(&[1]), QPoly::zero()).is_err());
    }

    #[test]
    fn q_powers_and_shifts() {
        let a = QRat::new(p(&[0, 0, 1, 1]), p(&[0, 1, 0, 1])).unwrap();
        for k in -4..=4 {
            assert_eq!(a.mul_qpow(k), a.mul(&QRat::q_pow(k)), "k={k}");
        }
    }

    #[test]
    fn eval_at_q_power_matches_composition() {
        // f(x) = (1 - x)/(1 + x^2)
        let f = QRat::new(p(&[1, -1]), p(&[1, 0, 1])).unwrap();
        for m in -3..=3i64 {
            let direct = QRat::one()
                .sub(&QRat::q_pow(m))
                .div(&QRat::one().add(&QRat::q_pow(2 * m)))
                .unwrap();
            assert_eq!(QRat::eval_qpow(&f, m).unwrap(), direct, "m={m}");
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(QRat::q_pow(-2).to_string(), "(1)/(q^2)");
        assert_eq!(QRat::one_minus_qpow(1).to_string(), "(-q + 1)");
        assert_eq!(QRat::from_rat(&rat(-3, 2)).to_string(), "-3/2");
    }

    #[test]
    fn non_cyclotomic_denominators() {
        let a = QRat::new(p(&[1]), p(&[2, 1])).unwrap();
        let b = QRat::new(p(&[1]), p(&[1, -1])).unwrap();
        let s = a.add(&b);
        assert_eq!(s, QRat::new(p(&[3]), p(&[2, 1]).mul(&p(&[1, -1]))).unwrap());
        assert_eq!(s.sub(&a), b);
        assert_eq!(a.mul(&a.inv().unwrap()), QRat::one());
        assert_eq!(a.eval(&rat_int(2)).unwrap(), rat(1, 4));
    }

    #[test]
    fn canonical_after_mixed_operations() {
        let x = QRat::one_minus_qpow(3)
            .div(&QRat::one_plus_qpow(-1))
            .unwrap();
        let y = QRat::from_rat(&rat(2, 3)).mul(&QRat::one_minus_qpow(-2));
        let z = x
            .add(&y)
            .mul(&y.inv().unwrap())
            .sub(&x.mul(&y.inv().unwrap()));
        assert!(z.is_one());
        let (n, d) = x.parts();
        assert_eq!(QRat::new(n, d).unwrap(), x);
    }
}
