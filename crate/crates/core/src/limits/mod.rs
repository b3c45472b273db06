//! The `q = e^h`, `h -> 0` limit: `t = 2 - h^2 u` (N = 2) and
//! `Λ_i = 1 - h v_i`, with every `q`-rational coefficient expanded in `h`.
//! The shift acts on mode `m` as `q^{-m} = e^{-hm}`, so everything stays in
//! mode space.

use crate::coeffs::{h_expand, HSeries, QRat, Rat, Ring};
use crate::error::{Error, Result};
use crate::modering::{Family, Gen, Monomial, Poly};

pub mod verify;

#[cfg(test)]
mod tests;

/// `u[m]`, the classical field of the N = 2 limit.
pub fn u(m: i32) -> Gen {
    Gen::new(Family::U, 1, m)
}

/// `v_i[m]`.
pub fn v(i: u16, m: i32) -> Gen {
    Gen::new(Family::V, i, m)
}

/// `a_i[m]`; the Toda `A_i` keep their generators and become `a_i`.
pub fn a(i: u16, m: i32) -> Gen {
    Gen::new(Family::A, i, m)
}

fn exact(c: Rat, k: i64) -> HSeries {
    HSeries::monomial(c, k)
}

fn delta(m: i32, c: i64) -> Poly<HSeries> {
    if m == 0 {
        Poly::constant(exact(Rat::from(c), 0))
    } else {
        Poly::zero()
    }
}

/// Image of a generator: `t_1[m] -> 2δ_{m,0} - h^2 u[m]`,
/// `Λ_i[m] -> δ_{m,0} - h v_i[m]`; other families are kept.
pub fn classical_image(g: &Gen) -> Option<Poly<HSeries>> {
    match g.family {
        Family::T if g.comp == 1 => Some(delta(g.mode, 2).sub(&Poly::term(
            exact(Rat::from(1), 2),
            Monomial::gen(u(g.mode)),
        ))),
        Family::Lam => Some(delta(g.mode, 1).sub(&Poly::term(
            exact(Rat::from(1), 1),
            Monomial::gen(v(g.comp, g.mode)),
        ))),
        _ => None,
    }
}

fn truncate(p: &Poly<HSeries>, order: i64) -> Poly<HSeries> {
    p.map_coeffs(|c| c.truncate(order))
}

/// `1 / x` for `x = 1 + O(h)`: the geometric series to `O(h^order)`.
fn inverse_unit(x: &Poly<HSeries>, order: i64) -> Result<Poly<HSeries>> {
    let one: Poly<HSeries> = Poly::one();
    let y = one.sub(x);
    for (m, c) in y.terms() {
        if c.valuation() < 1 {
            return Err(Error::Config(format!(
                "cannot invert: term {c}*{m} is not O(h)"
            )));
        }
    }
    let mut acc = one.clone();
    let mut pw = one;
    for _ in 0..order {
        pw = truncate(&pw.mul_exact(&y), order);
        acc = acc.add(&pw);
    }
    Ok(truncate(&acc, order))
}

/// Substitutes the classical images into `p` and expands every coefficient
/// to `O(h^order)`. Negative powers are allowed on generators whose image is
/// `1 + O(h)`.
pub fn substitute_h(
    p: &Poly<QRat>,
    order: i64,
    image: impl Fn(&Gen) -> Option<Poly<HSeries>>,
) -> Result<Poly<HSeries>> {
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        let mut acc = Poly::constant(h_expand(c, order)?);
        for &(g, e) in m.factors() {
            let f = match image(&g) {
                Some(img) if e < 0 => inverse_unit(&img, order)?,
                Some(img) => img,
                None => {
                    acc = acc.mul_exact(&Poly::term(
                        exact(Rat::from(1), 0),
                        Monomial::from_factors(vec![(g, e)]),
                    ));
                    continue;
                }
            };
            for _ in 0..e.unsigned_abs() {
                acc = truncate(&acc.mul_exact(&f), order);
            }
        }
        out = out.add(&acc);
    }
    Ok(out)
}

/// Coefficient of `h^k`, failing if some coefficient is not known to that
/// order.
pub fn h_coeff(p: &Poly<HSeries>, k: i64) -> Result<Poly<QRat>> {
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        match c.coeff(k) {
            Some(r) => out.add_term(m.clone(), QRat::from_rat(&r)),
            None => {
                return Err(Error::CheckFailed(format!(
                    "coefficient of {m} is only known to O(h^{})",
                    c.precision()
                )));
            }
        }
    }
    Ok(out)
}

/// Lowest `k < order` with a nonzero `h^k` coefficient.
pub fn leading_order(p: &Poly<HSeries>, order: i64) -> Result<Option<i64>> {
    let lo = p.terms().map(|(_, c)| c.valuation()).min().unwrap_or(order);
    for k in lo.min(order)..order {
        if !h_coeff(p, k)?.is_zero() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Virasoro target `(a - b) u[a+b] + (a^3/2) δ_{a+b,0}`.
pub fn virasoro(a: i32, b: i32) -> Poly<QRat> {
    let mut p = Poly::term(QRat::from_i64((a - b) as i64), Monomial::gen(u(a + b)));
    if a + b == 0 {
        p.add_term(
            Monomial::one(),
            QRat::from_rat(&Rat::from_signeds((a as i64).pow(3), 2)),
        );
    }
    p
}

/// Heisenberg target `H_ij a δ_{a+b,0}`, `H_ii = -(N-1)/N`, `H_ij = 1/N`.
pub fn heisenberg(n: u16, i: u16, j: u16, a: i32, b: i32) -> Poly<QRat> {
    if a + b != 0 {
        return Poly::zero();
    }
    let h = if i == j {
        Rat::from_signeds(-(n as i64 - 1), n as i64)
    } else {
        Rat::from_signeds(1, n as i64)
    };
    Poly::constant(QRat::from_rat(&h).mul(&QRat::from_i64(a as i64)))
}
