use std::collections::BTreeMap;
use std::fmt;

use super::{Family, Gen, Monomial, Poly, Window};
use crate::coeffs::Coeff;
use crate::error::{Error, Result};

/// A z-series `sum_m f[m] z^{-m}` with polynomial coefficients.
///
/// Only finitely many modes are ever nonzero: every coefficient is built
/// from window generators, so the support is bounded by degree times the
/// expression window and no clipping is needed.
#[derive(Clone)]
pub struct Series<C> {
    w: Window,
    c: BTreeMap<i32, Poly<C>>,
}

/// Equality of values; the windows are not compared.
impl<C: Coeff> PartialEq for Series<C> {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}

impl<C: Coeff> Series<C> {
    pub fn zero(w: Window) -> Self {
        Series {
            w,
            c: BTreeMap::new(),
        }
    }

    pub fn constant(w: Window, c: C) -> Self {
        Series::from_mode(w, 0, Poly::constant(c))
    }

    pub fn one(w: Window) -> Self {
        Series::constant(w, C::one())
    }

    /// `p z^{-m}`.
    pub fn from_mode(w: Window, m: i32, p: Poly<C>) -> Self {
        let mut s = Series::zero(w);
        s.add_at(m, p);
        s
    }

    /// The generating series `g(z) = sum_m g[m] z^{-m}` over the window.
    pub fn gen_series(w: Window, family: Family, comp: u16) -> Self {
        let r = if w.jet > 0 { w.m_expr } else { w.m_pt };
        let mut s = Series::zero(w);
        for m in -r..=r {
            let g = Gen::new(family, comp, m);
            s.add_at(m, Poly::gen(g).truncate(&w));
        }
        s
    }

    pub fn window(&self) -> &Window {
        &self.w
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeff(&self, m: i32) -> Poly<C> {
        self.c.get(&m).cloned().unwrap_or_default()
    }

    pub fn coeff_ref(&self, m: i32) -> Option<&Poly<C>> {
        self.c.get(&m)
    }

    /// The 0th Fourier coefficient, i.e. the functional `∫f`.
    pub fn integral(&self) -> Poly<C> {
        self.coeff(0)
    }

    pub fn modes(&self) -> impl Iterator<Item = (i32, &Poly<C>)> {
        self.c.iter().map(|(m, p)| (*m, p))
    }

    pub fn add_at(&mut self, m: i32, p: Poly<C>) {
        if p.is_zero() {
            return;
        }
        let e = self.c.entry(m).or_default();
        e.add_assign(&p);
        if e.is_zero() {
            self.c.remove(&m);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, p) in &o.c {
            r.add_at(*m, p.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, p) in &o.c {
            r.add_at(*m, p.neg());
        }
        r
    }

    pub fn neg(&self) -> Self {
        self.map_polys(|p| p.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_polys(|p| p.scale(c))
    }

    /// Multiplies every coefficient by a polynomial.
    pub fn mul_poly(&self, p: &Poly<C>) -> Self {
        let w = self.w;
        self.map_polys(|x| x.mul(p, &w))
    }

    pub fn map_polys(&self, f: impl Fn(&Poly<C>) -> Poly<C>) -> Self {
        let mut r = Series::zero(self.w);
        for (m, p) in &self.c {
            r.add_at(*m, f(p));
        }
        r
    }

    /// Mode-wise map with access to the mode index.
    pub fn map_modes(&self, f: impl Fn(i32, &Poly<C>) -> Poly<C>) -> Self {
        let mut r = Series::zero(self.w);
        for (m, p) in &self.c {
            r.add_at(*m, f(*m, p));
        }
        r
    }

    /// Cauchy product, truncated by the window.
    pub fn mul(&self, o: &Self) -> Self {
        let w = self.w;
        let mut r = Series::zero(w);
        for (a, fa) in &self.c {
            for (b, gb) in &o.c {
                r.add_at(a + b, fa.mul(gb, &w));
            }
        }
        r
    }

    /// `f(zq^j)`: mode `m` picks up `q^{-jm}`.
    pub fn q_shift(&self, j: i64) -> Self {
        if j == 0 {
            return self.clone();
        }
        self.map_modes(|m, p| p.map_coeffs(|c| c.mul_qpow(-j * m as i64)))
    }

    /// Solves `(1 + D + ... + D^{n-1}) f = self` mode by mode.
    pub fn cyclic_sum_invert(&self, n: u32) -> Result<Self> {
        let mut r = Series::zero(self.w);
        for (m, p) in &self.c {
            let mut d = C::zero();
            for j in 0..n as i64 {
                d.add_assign(&C::q_pow(-j * *m as i64));
            }
            if d.is_zero() {
                return Err(Error::SingularCyclicSum(*m));
            }
            let inv = d.inv()?;
            r.add_at(*m, p.scale(&inv));
        }
        Ok(r)
    }

    /// `(1 - D) self`.
    pub fn one_minus_d(&self) -> Self {
        self.sub(&self.q_shift(1))
    }

    /// The `g` with `(1 - D) g = self` and `g[0] = 0`; fails when the 0th
    /// coefficient is nonzero.
    pub fn total_difference_witness(&self) -> Result<Self> {
        if let Some(p) = self.c.get(&0) {
            let (m, c) = p.first_term().expect("stored coefficients are nonzero");
            return Err(Error::NotTotalDifference(format!(
                "0th coefficient has term {c}*{m}"
            )));
        }
        let mut r = Series::zero(self.w);
        for (m, p) in &self.c {
            let d = C::one().sub(&C::q_pow(-(*m as i64)));
            r.add_at(*m, p.scale(&d.inv()?));
        }
        Ok(r)
    }

    /// Inverse of `c (1 + r)` with `c` a unit monomial and `r` of positive
    /// degree, as a geometric series up to the window's degree cap.
    pub fn inverse(&self) -> Result<Self> {
        let cap = self
            .w
            .degcap
            .ok_or_else(|| Error::Config("series inverse needs a degree cap".into()))?;
        let mut unit: Option<(Monomial, C)> = None;
        for (m, p) in &self.c {
            for (mono, c) in p.terms() {
                if mono.degree() == 0 {
                    if *m != 0 || unit.is_some() {
                        return Err(Error::NotUnit);
                    }
                    unit = Some((mono.clone(), c.clone()));
                }
            }
        }
        let (mono, c) = unit.ok_or(Error::NotUnit)?;
        let inv_mono =
            Monomial::from_factors(mono.factors().iter().map(|(g, e)| (*g, -e)).collect());
        let cinv = Poly::term(c.inv()?, inv_mono);
        // self = c (1 + r)
        let r = self.mul_poly(&cinv).sub(&Series::one(self.w));
        let minus_r = r.neg();
        let mut acc = Series::one(self.w);
        let mut pow = Series::one(self.w);
        for _ in 0..cap {
            pow = pow.mul(&minus_r);
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow);
        }
        Ok(acc.mul_poly(&cinv))
    }

    /// Drops whatever the given window does not admit and adopts it.
    pub fn with_window(&self, w: Window) -> Self {
        let mut r = Series::zero(w);
        for (m, p) in &self.c {
            r.add_at(*m, p.truncate(&w));
        }
        r
    }

    /// Restriction to the point window.
    pub fn at_point(&self) -> Self {
        self.with_window(self.w.at_point())
    }

    pub fn substitute(&self, f: &(dyn Fn(&Gen) -> Option<Poly<C>> + Sync)) -> Self {
        let w = self.w;
        self.map_polys(|p| p.substitute(f, Some(&w)))
    }

    pub fn max_abs_mode(&self) -> i32 {
        self.c.keys().map(|m| m.abs()).max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }
}

impl<C: Coeff> fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `(p)*z^-m + ...` in increasing mode order.
impl<C: Coeff> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, p)) in self.c.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *m == 0 {
                write!(f, "({p})")?;
            } else {
                write!(f, "({p})*z^{}", -m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{QRat, Ring};

    type S = Series<QRat>;

    fn w() -> Window {
        Window::point(2, 4)
    }

    fn t(m: i32) -> Poly<QRat> {
        Poly::gen(Gen::t(1, m))
    }

    #[test]
    fn shift_single_mode() {
        let f = S::from_mode(w(), 1, t(1));
        let g = f.q_shift(1);
        assert_eq!(g.coeff(1), t(1).scale(&QRat::q_pow(-1)));
        assert_eq!(f.q_shift(0), f);
        assert_eq!(f.q_shift(1).q_shift(-1), f);
    }

    #[test]
    fn convolution_mode_zero() {
        let w1 = Window::point(1, 4);
        let f = S::gen_series(w1, Family::T, 1);
        let sq = f.mul(&f);
        let expect = t(-1)
            .mul_exact(&t(1))
            .scale(&QRat::from_i64(2))
            .add(&t(0).mul_exact(&t(0)));
        assert_eq!(sq.coeff(0), expect);
        assert_eq!(f.mul(&S::one(w1)), f);
        let g = S::gen_series(w1, Family::T, 2);
        assert_eq!(f.q_shift(1).mul(&g.q_shift(1)), f.mul(&g).q_shift(1));
    }

    #[test]
    fn cyclic_sum_examples() {
        let f = S::gen_series(w(), Family::T, 1).neg();
        let b = f.cyclic_sum_invert(2).unwrap();
        for m in -2..=2 {
            let d = QRat::one().add(&QRat::q_pow(-m as i64));
            assert_eq!(b.coeff(m), t(m).neg().scale(&d.inv().unwrap()));
        }
        assert_eq!(b.add(&b.q_shift(1)), f);

        let c = S::constant(w(), QRat::from_i64(5));
        assert_eq!(
            c.cyclic_sum_invert(3).unwrap(),
            S::constant(w(), QRat::from_i64(5).div(&QRat::from_i64(3)).unwrap())
        );

        let z = S::from_mode(w(), 1, Poly::one());
        let d = QRat::one().add(&QRat::q_pow(-1)).add(&QRat::q_pow(-2));
        assert_eq!(
            z.cyclic_sum_invert(3).unwrap(),
            S::from_mode(w(), 1, Poly::constant(d.inv().unwrap()))
        );
    }

    #[test]
    fn total_difference() {
        let r = S::from_mode(w(), 1, Poly::constant(QRat::one().sub(&QRat::q_pow(-1))));
        assert_eq!(
            r.total_difference_witness().unwrap(),
            S::from_mode(w(), 1, Poly::one())
        );
        assert!(matches!(
            S::from_mode(w(), 0, t(0)).total_difference_witness(),
            Err(Error::NotTotalDifference(_))
        ));
        let r = S::from_mode(w(), 1, t(1)).sub(&S::from_mode(w(), 1, t(1).scale(&QRat::q_pow(-1))));
        assert_eq!(
            r.total_difference_witness().unwrap(),
            S::from_mode(w(), 1, t(1))
        );
    }

    #[test]
    fn geometric_inverse() {
        let wc = w().with_degcap(2);
        let l0 = Poly::gen(Gen::lam(1, 0));
        let f = S::from_mode(wc, 0, l0.clone());
        let inv = f.inverse().unwrap();
        assert_eq!(
            inv.coeff(0),
            Poly::term(
                QRat::one(),
                Monomial::from_factors(vec![(Gen::lam(1, 0), -1)])
            )
        );

        let l1 = Poly::gen(Gen::lam(1, 1));
        let f = S::one(wc).sub(&S::from_mode(wc, 1, l1.clone()));
        let inv = f.inverse().unwrap();
        let expect = S::one(wc)
            .add(&S::from_mode(wc, 1, l1.clone()))
            .add(&S::from_mode(wc, 2, l1.mul_exact(&l1)));
        assert_eq!(inv, expect);
        assert_eq!(f.mul(&inv), S::one(wc));

        let g = S::gen_series(wc, Family::Lam, 1);
        assert_eq!(g.mul(&g.inverse().unwrap()), S::one(wc));
        assert!(matches!(
            S::gen_series(wc, Family::T, 1).inverse(),
            Err(Error::NotUnit)
        ));
    }
}
