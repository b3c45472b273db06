//! Integer polynomials and the cyclotomic polynomials `Φ_d`.

use std::sync::{Arc, OnceLock, RwLock};

use malachite_base::num::arithmetic::traits::{DivExact, Gcd};
use malachite_base::num::basic::traits::{One, Zero};
use malachite_nz::integer::Integer;
use malachite_nz::natural::Natural;

/// Dense integer polynomial, lowest degree first, no trailing zeros.
pub(crate) type ZPoly = Vec<Integer>;

pub(crate) fn trim(a: &mut ZPoly) {
    while a.last().is_some_and(|x| *x == Integer::ZERO) {
        a.pop();
    }
}

pub(crate) fn zadd(a: &[Integer], b: &[Integer]) -> ZPoly {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut r: ZPoly = long.to_vec();
    for (x, y) in r.iter_mut().zip(short) {
        *x += y;
    }
    trim(&mut r);
    r
}

pub(crate) fn zmul(a: &[Integer], b: &[Integer]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![Integer::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == Integer::ZERO {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    trim(&mut r);
    r
}

/// Product with a polynomial with machine-size coefficients.
pub(crate) fn zmul_small(a: &[Integer], b: &[i64]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![Integer::ZERO; a.len() + b.len() - 1];
    for (j, y) in b.iter().enumerate() {
        if *y == 0 {
            continue;
        }
        let y = Integer::from(*y);
        for (i, x) in a.iter().enumerate() {
            r[i + j] += x * &y;
        }
    }
    trim(&mut r);
    r
}

pub(crate) fn zscale(a: &[Integer], c: &Integer) -> ZPoly {
    if *c == Integer::ONE {
        return a.to_vec();
    }
    let mut r: ZPoly = a.iter().map(|x| x * c).collect();
    trim(&mut r);
    r
}

pub(crate) fn zshift(a: &[Integer], k: usize) -> ZPoly {
    if k == 0 || a.is_empty() {
        return a.to_vec();
    }
    let mut r = vec![Integer::ZERO; k];
    r.extend_from_slice(a);
    r
}

/// Exact quotient by a monic polynomial, or `None` if it does not divide.
pub(crate) fn zdiv_monic(a: &[Integer], d: &[i64]) -> Option<ZPoly> {
    let dd = d.len() - 1;
    if a.len() <= dd {
        return None;
    }
    let mut r: ZPoly = a.to_vec();
    let mut q = vec![Integer::ZERO; a.len() - dd];
    for i in (0..q.len()).rev() {
        let t = std::mem::replace(&mut r[i + dd], Integer::ZERO);
        if t == Integer::ZERO {
            continue;
        }
        for (j, dj) in d[..dd].iter().enumerate() {
            if *dj != 0 {
                r[i + j] -= &t * Integer::from(*dj);
            }
        }
        q[i] = t;
    }
    if r[..dd].iter().any(|x| *x != Integer::ZERO) {
        return None;
    }
    trim(&mut q);
    Some(q)
}

/// Gcd of the absolute values of the coefficients.
pub(crate) fn content(a: &[Integer]) -> Natural {
    let mut g = Natural::ZERO;
    for x in a {
        g = g.gcd(x.unsigned_abs_ref());
        if g == Natural::ONE {
            break;
        }
    }
    g
}

pub(crate) fn zdiv_scalar(a: &[Integer], c: &Natural) -> ZPoly {
    let c = Integer::from(c.clone());
    a.iter().map(|x| x.div_exact(&c)).collect()
}

pub(crate) fn totient(mut n: u32) -> u32 {
    let mut r = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

type PhiCache = RwLock<Vec<Option<Arc<Vec<i64>>>>>;

fn cache() -> &'static PhiCache {
    static C: OnceLock<PhiCache> = OnceLock::new();
    C.get_or_init(|| RwLock::new(Vec::new()))
}

/// `Φ_d(q)`, lowest degree first.
pub(crate) fn phi(d: u32) -> Arc<Vec<i64>> {
    assert!(d >= 1);
    if let Some(Some(p)) = cache().read().unwrap().get(d as usize) {
        return p.clone();
    }
    // q^d - 1 divided by Φ_e for the proper divisors e of d
    let mut num: Vec<i64> = vec![0; d as usize + 1];
    num[0] = -1;
    num[d as usize] = 1;
    for e in 1..d {
        if d.is_multiple_of(e) {
            num = div_small(&num, &phi(e));
        }
    }
    let p = Arc::new(num);
    let mut c = cache().write().unwrap();
    if c.len() <= d as usize {
        c.resize(d as usize + 1, None);
    }
    c[d as usize] = Some(p.clone());
    p
}

fn div_small(a: &[i64], d: &[i64]) -> Vec<i64> {
    let dd = d.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![0i64; a.len() - dd];
    for i in (0..q.len()).rev() {
        let t = r[i + dd];
        for (j, dj) in d.iter().enumerate() {
            r[i + j] = r[i + j]
                .checked_sub(t.checked_mul(*dj).expect("cyclotomic overflow"))
                .expect("cyclotomic overflow");
        }
        q[i] = t;
    }
    debug_assert!(r.iter().all(|x| *x == 0));
    q
}

/// Splits off every cyclotomic factor: returns the factors as sorted
/// `(d, multiplicity)` pairs and the cofactor.
pub(crate) fn cyclotomic_part(a: &[Integer]) -> (Vec<(u32, u32)>, ZPoly) {
    let mut rest = a.to_vec();
    let mut out = Vec::new();
    let mut d = 1u32;
    loop {
        let deg = rest.len().saturating_sub(1) as u32;
        if deg == 0 {
            break;
        }
        // φ(d) >= sqrt(d / 2), so larger d cannot fit
        if (d as u64) > 2 * (deg as u64) * (deg as u64) + 2 {
            break;
        }
        if totient(d) <= deg {
            let p = phi(d);
            let mut e = 0;
            while let Some(q) = zdiv_monic(&rest, &p) {
                rest = q;
                e += 1;
            }
            if e > 0 {
                out.push((d, e));
            }
        }
        d += 1;
    }
    (out, rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(*phi(1), vec![-1, 1]);
        assert_eq!(*phi(2), vec![1, 1]);
        assert_eq!(*phi(6), vec![1, -1, 1]);
        assert_eq!(*phi(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(totient(12), 4);
    }

    #[test]
    fn factor_q_power_minus_one() {
        let a: ZPoly = [-1i64, 0, 0, 0, 0, 0, 1]
            .iter()
            .map(|&x| Integer::from(x))
            .collect();
        let (f, rest) = cyclotomic_part(&a);
        assert_eq!(f, vec![(1, 1), (2, 1), (3, 1), (6, 1)]);
        assert_eq!(rest, vec![Integer::ONE]);
    }
}
