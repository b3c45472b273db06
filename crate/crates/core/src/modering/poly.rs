use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use super::{Gen, Window};
use crate::coeffs::{Coeff, Ring};

/// Product of generator powers, sorted by generator with no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Gen, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn gen(g: Gen) -> Self {
        Monomial(vec![(g, 1)])
    }

    pub fn from_factors(mut f: Vec<(Gen, i32)>) -> Self {
        f.sort_by_key(|a| a.0);
        let mut out: Vec<(Gen, i32)> = Vec::with_capacity(f.len());
        for (g, e) in f {
            match out.last_mut() {
                Some((h, x)) if *h == g => *x += e,
                _ => out.push((g, e)),
            }
        }
        out.retain(|(_, e)| *e != 0);
        Monomial(out)
    }

    pub fn factors(&self) -> &[(Gen, i32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &o.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn exponent(&self, g: &Gen) -> i32 {
        self.0
            .binary_search_by(|(h, _)| h.cmp(g))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    /// `∂/∂g` of the monomial: the exponent and the lowered monomial.
    pub fn derivative(&self, g: &Gen) -> Option<(i32, Monomial)> {
        let i = self.0.binary_search_by(|(h, _)| h.cmp(g)).ok()?;
        let e = self.0[i].1;
        let mut f = self.0.clone();
        if e == 1 {
            f.remove(i);
        } else {
            f[i].1 = e - 1;
        }
        Some((e, Monomial(f)))
    }

    /// Degree in generators other than the formal units.
    pub fn degree(&self) -> u32 {
        self.0
            .iter()
            .filter(|(g, _)| !g.is_unit())
            .map(|(_, e)| *e as u32)
            .sum()
    }

    /// Sum of modes weighted by exponents.
    pub fn mode_sum(&self) -> i64 {
        self.0.iter().map(|(g, e)| g.mode as i64 * *e as i64).sum()
    }

    pub fn gens(&self) -> impl Iterator<Item = &Gen> {
        self.0.iter().map(|(g, _)| g)
    }

    /// Splits into the formal-unit part and the rest.
    pub fn split_units(&self) -> (Monomial, Monomial) {
        let (u, r): (Vec<_>, Vec<_>) = self.0.iter().partition(|(g, _)| g.is_unit());
        (Monomial(u), Monomial(r))
    }

    pub fn map_gens(&self, f: impl Fn(&Gen) -> Gen) -> Monomial {
        Monomial::from_factors(self.0.iter().map(|(g, e)| (f(g), *e)).collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (g, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial over a coefficient ring; zero is the empty map.
#[derive(Clone, PartialEq)]
pub struct Poly<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Ring> Default for Poly<C> {
    fn default() -> Self {
        Poly::zero()
    }
}

impl<C: Ring> Poly<C> {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn one() -> Self {
        Poly::constant(C::one())
    }

    pub fn gen(g: Gen) -> Self {
        Poly::term(C::one(), Monomial::gen(g))
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, C)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// The constant term.
    pub fn constant_term(&self) -> C {
        self.coeff(&Monomial::one())
    }

    /// The first monomial in the canonical order, used as a failure witness.
    pub fn first_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next()
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let (mut big, small) = if self.len() >= o.len() {
            (self.clone(), o)
        } else {
            (o.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn neg(&self) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.neg());
        }
        r
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x.mul(c)))
                .collect(),
        }
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn try_map_coeffs<D: Ring, E>(&self, f: impl Fn(&C) -> Result<D, E>) -> Result<Poly<D>, E> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Product with monomials outside the window discarded.
    pub fn mul(&self, o: &Self, w: &Window) -> Self {
        self.mul_filtered(o, |m| w.admits(m))
    }

    /// Untruncated product.
    pub fn mul_exact(&self, o: &Self) -> Self {
        self.mul_filtered(o, |_| true)
    }

    fn mul_filtered(&self, o: &Self, keep: impl Fn(&Monomial) -> bool) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if self.len() == 1 && self.terms.keys().next().unwrap().is_one() {
            let c = self.terms.values().next().unwrap();
            return Poly::from_terms(
                o.terms
                    .iter()
                    .filter(|(m, _)| keep(m))
                    .map(|(m, x)| (m.clone(), c.mul(x))),
            );
        }
        if o.len() == 1 && o.terms.keys().next().unwrap().is_one() {
            return o.mul_filtered(self, keep);
        }
        let mut acc: HashMap<Monomial, C> = HashMap::with_capacity(self.len() * o.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = ma.mul(mb);
                if !keep(&m) {
                    continue;
                }
                let p = ca.mul(cb);
                match acc.entry(m) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        let s = e.get().add(&p);
                        *e.get_mut() = s;
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(p);
                    }
                }
            }
        }
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Drops monomials the window does not admit.
    pub fn truncate(&self, w: &Window) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| w.admits(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Formal partial derivative.
    pub fn derivative(&self, g: &Gen) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if let Some((e, d)) = m.derivative(g) {
                out.add_term(d, c.mul(&C::from_i64(e as i64)));
            }
        }
        out
    }

    /// All generators occurring.
    pub fn gens(&self) -> BTreeSet<Gen> {
        self.terms.keys().flat_map(|m| m.gens().copied()).collect()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Homogeneous component of the given non-unit degree.
    pub fn degree_part(&self, d: u32) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Renames generators; images must keep the monomial order consistent
    /// after re-sorting, which `Monomial::map_gens` guarantees.
    pub fn map_gens(&self, f: impl Fn(&Gen) -> Gen) -> Self {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.map_gens(&f), c.clone())))
    }

    /// Substitutes generators by polynomials. `f` returns `None` to keep a
    /// generator as is. Negative exponents are only allowed on kept
    /// generators.
    pub fn substitute(&self, f: impl Fn(&Gen) -> Option<Poly<C>>, w: Option<&Window>) -> Self {
        let mut cache: HashMap<Gen, Option<Poly<C>>> = HashMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            let mut kept = Vec::new();
            for (g, e) in m.factors() {
                let img = cache.entry(*g).or_insert_with(|| f(g)).clone();
                match img {
                    None => kept.push((*g, *e)),
                    Some(p) => {
                        assert!(*e > 0, "negative power of substituted generator {g}");
                        for _ in 0..*e {
                            acc = match w {
                                Some(w) => acc.mul(&p, w),
                                None => acc.mul_exact(&p),
                            };
                        }
                    }
                }
            }
            let k = Poly::term(C::one(), Monomial::from_factors(kept));
            let t = match w {
                Some(w) => acc.mul(&k, w),
                None => acc.mul_exact(&k),
            };
            out.add_assign(&t);
        }
        out
    }

    /// Sets every generator outside `keep` to zero.
    pub fn restrict(&self, keep: impl Fn(&Gen) -> bool) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.gens().all(&keep))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

impl<C: Coeff> Poly<C> {
    /// Multiplies every monomial by `q^{k * mode_sum}`; used by shifts of
    /// coefficients that are themselves mode-homogeneous.
    pub fn scale_qpow(&self, k: i64) -> Self {
        if k == 0 {
            return self.clone();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.mul_qpow(k)))
                .collect(),
        }
    }
}

impl<C: Ring> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Canonical text: `c*m + c*m ...` in monomial order; zero prints as `0`.
impl<C: Ring> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let body = if m.is_one() {
                String::new()
            } else {
                m.to_string()
            };
            write_term(f, i == 0, &c.to_string(), &body)?;
        }
        Ok(())
    }
}

/// Writes `c*body` as one summand: unit coefficients are dropped and a
/// leading minus on a single-token coefficient becomes the separator.
pub(crate) fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &str,
    body: &str,
) -> fmt::Result {
    let mut c = c;
    if !first {
        match c.strip_prefix('-') {
            Some(rest) if !c.contains(' ') => {
                write!(f, " - ")?;
                c = rest;
            }
            _ => write!(f, " + ")?,
        }
    }
    match (c, body) {
        (c, "") => write!(f, "{c}"),
        ("1", b) => write!(f, "{b}"),
        ("-1", b) => write!(f, "-{b}"),
        (c, b) => write!(f, "{c}*{b}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::QRat;

    type P = Poly<QRat>;

    #[test]
    fn gradient_examples() {
        let a = Gen::t(1, 1);
        let b = Gen::t(1, -1);
        let f = P::gen(a).mul_exact(&P::gen(b));
        assert_eq!(f.derivative(&a), P::gen(b));

        let t0 = Gen::t(1, 0);
        let cube = P::gen(t0).mul_exact(&P::gen(t0)).mul_exact(&P::gen(t0));
        let expect = P::term(QRat::from_i64(3), Monomial::from_factors(vec![(t0, 2)]));
        assert_eq!(cube.derivative(&t0), expect);

        let l0 = Gen::lam(1, 0);
        let inv2 = P::term(QRat::one(), Monomial::from_factors(vec![(l0, -2)]));
        let expect = P::term(QRat::from_i64(-2), Monomial::from_factors(vec![(l0, -3)]));
        assert_eq!(inv2.derivative(&l0), expect);
    }

    #[test]
    fn window_truncation_in_products() {
        let w = Window::point(1, 1).with_jet(1, 3);
        let inside = P::gen(Gen::t(1, 1));
        let outside = P::gen(Gen::t(1, 3));
        assert_eq!(inside.mul(&outside, &w).len(), 1);
        assert!(outside.mul(&outside, &w).is_zero());
    }

    #[test]
    fn units_cancel() {
        let l0 = Gen::lam(1, 0);
        let a = P::term(QRat::one(), Monomial::from_factors(vec![(l0, 2)]));
        let b = P::term(QRat::one(), Monomial::from_factors(vec![(l0, -2)]));
        assert_eq!(a.mul_exact(&b), P::one());
    }
}
