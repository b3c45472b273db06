//! Local densities in the shifted fields `Λ_k(zq^j)`.
//!
//! An element is `sum_e Q^e(z) p_e` where `Q^e(z) = prod Q_k(z)^{e_k}` sits
//! at the base point and `p_e` is a Laurent polynomial in the shifted fields.
//! `Λ_k(zq^j)` is stored as `Gen::lam(k, j)`: the mode slot holds the shift.
//! Shifting uses `Q_k(zq) = Λ_k(z) Q_k(z)`, so products and shifts are exact
//! and no inverse is ever truncated.

use std::collections::BTreeMap;
use std::fmt;

use crate::coeffs::Coeff;
use crate::error::{Error, Result};
use crate::modering::{write_term, Gen, Monomial, Poly};

pub type Grade = Vec<i32>;

/// Number of fields and whether `Λ_1 ... Λ_N = 1` (then `Q_1 ... Q_N = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ctx {
    pub n: u16,
    pub reduced: bool,
}

impl Ctx {
    pub fn new(n: u16, reduced: bool) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config(format!("N must be >= 2, got {n}")));
        }
        Ok(Ctx { n, reduced })
    }

    pub fn fields(&self) -> std::ops::RangeInclusive<u16> {
        1..=if self.reduced { self.n - 1 } else { self.n }
    }

    /// 1-based cyclic index.
    pub fn idx(&self, k: i32) -> u16 {
        ((k - 1).rem_euclid(self.n as i32) + 1) as u16
    }

    fn norm_mono(&self, m: &Monomial) -> Monomial {
        if !self.reduced || m.gens().all(|g| g.comp != self.n) {
            return m.clone();
        }
        let mut f = Vec::new();
        for &(g, e) in m.factors() {
            if g.comp == self.n {
                f.extend((1..self.n).map(|k| (Gen::lam(k, g.mode), -e)));
            } else {
                f.push((g, e));
            }
        }
        Monomial::from_factors(f)
    }

    fn norm_poly<C: Coeff>(&self, p: &Poly<C>) -> Poly<C> {
        if !self.reduced {
            return p.clone();
        }
        Poly::from_terms(p.terms().map(|(m, c)| (self.norm_mono(m), c.clone())))
    }

    fn norm_grade(&self, mut e: Grade) -> Grade {
        if self.reduced {
            let last = e[self.n as usize - 1];
            e.iter_mut().for_each(|x| *x -= last);
        }
        e
    }

    pub fn zero<C: Coeff>(&self) -> QExt<C> {
        QExt {
            ctx: *self,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant<C: Coeff>(&self, c: C) -> QExt<C> {
        self.graded(vec![0; self.n as usize], Poly::constant(c))
    }

    pub fn one<C: Coeff>(&self) -> QExt<C> {
        self.constant(C::one())
    }

    /// `Q^e(z) p`.
    pub fn graded<C: Coeff>(&self, e: Grade, p: Poly<C>) -> QExt<C> {
        let mut out = self.zero();
        out.add_part(self.norm_grade(e), self.norm_poly(&p));
        out
    }

    /// `prod Λ_k(zq^j)^p` over `(k, j, p)`, indices cyclic.
    pub fn fields_mono<C: Coeff>(&self, f: &[(i32, i32, i32)]) -> QExt<C> {
        let m = Monomial::from_factors(
            f.iter()
                .map(|&(k, j, p)| (Gen::lam(self.idx(k), j), p))
                .collect(),
        );
        self.graded(vec![0; self.n as usize], Poly::term(C::one(), m))
    }

    /// `Λ_k(zq^j)`.
    pub fn lam<C: Coeff>(&self, k: i32, j: i32) -> QExt<C> {
        self.fields_mono(&[(k, j, 1)])
    }

    /// `Q_k(z)^p`.
    pub fn q<C: Coeff>(&self, k: i32, p: i32) -> QExt<C> {
        let mut e = vec![0; self.n as usize];
        e[self.idx(k) as usize - 1] = p;
        self.graded(e, Poly::one())
    }

    /// `ρ_e` with `Q^e(zq) = ρ_e(z) Q^e(z)`.
    pub fn rho(&self, e: &[i32]) -> Monomial {
        self.norm_mono(&Monomial::from_factors(
            e.iter()
                .enumerate()
                .map(|(k, &x)| (Gen::lam(k as u16 + 1, 0), x))
                .collect(),
        ))
    }

    /// `Q^e(zq^s) / Q^e(z)`.
    pub fn shift_factor(&self, e: &[i32], s: i32) -> Monomial {
        let rho = self.rho(e);
        let mut out = Monomial::one();
        if s > 0 {
            for l in 0..s {
                out = out.mul(&shift_mono(&rho, l));
            }
        } else {
            for l in s..0 {
                out = out.mul(&inv_mono(&shift_mono(&rho, l)));
            }
        }
        out
    }
}

pub fn shift_mono(m: &Monomial, s: i32) -> Monomial {
    if s == 0 {
        return m.clone();
    }
    m.map_gens(|g| g.with_mode(g.mode + s))
}

pub fn inv_mono(m: &Monomial) -> Monomial {
    Monomial::from_factors(m.factors().iter().map(|&(g, e)| (g, -e)).collect())
}

#[derive(Clone, PartialEq)]
pub struct QExt<C> {
    ctx: Ctx,
    terms: BTreeMap<Grade, Poly<C>>,
}

impl<C: Coeff> QExt<C> {
    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn parts(&self) -> impl Iterator<Item = (&Grade, &Poly<C>)> {
        self.terms.iter()
    }

    pub fn part(&self, e: &[i32]) -> Poly<C> {
        self.terms.get(e).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_part(&mut self, e: Grade, p: Poly<C>) {
        let s = match self.terms.remove(&e) {
            Some(q) => q.add(&p),
            None => p,
        };
        if !s.is_zero() {
            self.terms.insert(e, s);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, p) in &o.terms {
            out.add_part(e.clone(), p.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        QExt {
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .map(|(e, p)| (e.clone(), p.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = self.ctx.zero();
        for (e, p) in &self.terms {
            out.add_part(e.clone(), p.scale(c));
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = self.ctx.zero();
        for (ea, pa) in &self.terms {
            for (eb, pb) in &o.terms {
                let e: Grade = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_part(self.ctx.norm_grade(e), pa.mul_exact(pb));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(self.ctx.one(), |a, _| a.mul(self))
    }

    /// `F(z) -> F(zq^s)`.
    pub fn shift(&self, s: i32) -> Self {
        if s == 0 {
            return self.clone();
        }
        let mut out = self.ctx.zero();
        for (e, p) in &self.terms {
            let f = self.ctx.shift_factor(e, s);
            let shifted = Poly::from_terms(
                p.terms()
                    .map(|(m, c)| (shift_mono(m, s).mul(&f), c.clone())),
            );
            out.add_part(e.clone(), shifted);
        }
        out
    }

    /// The grade-0 part as a plain Laurent polynomial, or an error if any
    /// other grade is present.
    pub fn local(&self) -> Result<Poly<C>> {
        for e in self.terms.keys() {
            if e.iter().any(|&x| x != 0) {
                return Err(Error::Config(format!(
                    "expected an element free of Q, found grade {e:?}"
                )));
            }
        }
        Ok(self.part(&vec![0; self.ctx.n as usize]))
    }

    /// Applies a derivation of the fields, given by the images of `Λ_k(z)`
    /// for `k` in `ctx.fields()`, to a `Q`-free element.
    pub fn derive(&self, images: &[QExt<C>]) -> Result<Self> {
        let p = self.local()?;
        let mut out = self.ctx.zero();
        for g in p.gens() {
            let d = p.derivative(&g);
            let img = images[g.comp as usize - 1].shift(g.mode);
            out = out.add(&self.ctx.graded(vec![0; self.ctx.n as usize], d).mul(&img));
        }
        Ok(out)
    }

    /// `δ/δΛ_k(z)` of the density: `sum_j σ^{-j} ∂/∂Λ_k(zq^j)`.
    pub fn variational(&self, k: u16) -> Result<Self> {
        let p = self.local()?;
        let mut out = self.ctx.zero();
        for g in p.gens().into_iter().filter(|g| g.comp == k) {
            let d = self
                .ctx
                .graded(vec![0; self.ctx.n as usize], p.derivative(&g));
            out = out.add(&d.shift(-g.mode));
        }
        Ok(out)
    }

    /// The coefficient sum of every orbit class of `M ~ ρ_e σ(M)`, nonzero
    /// classes only. `∫F` vanishes iff this is empty.
    pub fn integral_classes(&self) -> BTreeMap<(Grade, Monomial), C> {
        let mut out: BTreeMap<(Grade, Monomial), C> = BTreeMap::new();
        for (e, p) in &self.terms {
            let rho = self.ctx.rho(e);
            for (m, c) in p.terms() {
                let key = (e.clone(), canonical(m, &rho));
                let s = out.get(&key).map(|x| x.add(c)).unwrap_or_else(|| c.clone());
                if s.is_zero() {
                    out.remove(&key);
                } else {
                    out.insert(key, s);
                }
            }
        }
        out
    }

    /// `∫F = 0`, i.e. `F` is a total difference `G(zq) - G(z)`.
    pub fn integral_is_zero(&self) -> bool {
        self.integral_classes().is_empty()
    }
}

fn span(m: &Monomial) -> (i32, i32) {
    let mut it = m.gens().map(|g| g.mode);
    match it.next() {
        None => (-1, 0),
        Some(first) => {
            let (lo, hi) = it.fold((first, first), |(a, b), x| (a.min(x), b.max(x)));
            (hi - lo, lo)
        }
    }
}

/// The orbit representative of `M` under `M -> ρ σ(M)` with the smallest
/// span, then the lowest shift closest to 0.
///
/// Along the orbit the `ρ` factors occupy a run of consecutive shifts, which
/// `σ^k M` can cancel on at most `span(M) + 1` of them. Every minimiser is
/// therefore within `2 span(M) + 4` steps of `M`.
pub fn canonical(m: &Monomial, rho: &Monomial) -> Monomial {
    let (s, _) = span(m);
    let r = 2 * s.max(0) + 4;
    let key = |x: &Monomial| {
        let (sp, lo) = span(x);
        (sp, lo.abs(), lo, x.clone())
    };
    let mut best = key(m);
    let mut up = m.clone();
    let mut down = m.clone();
    let rho_inv_down = inv_mono(&shift_mono(rho, -1));
    for _ in 0..r {
        up = rho.mul(&shift_mono(&up, 1));
        down = shift_mono(&down, -1).mul(&rho_inv_down);
        for c in [key(&up), key(&down)] {
            if c < best {
                best = c;
            }
        }
    }
    best.3
}

struct MonoFmt<'a>(&'a Monomial);

impl fmt::Display for MonoFmt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_mono(self.0, f)
    }
}

fn fmt_mono(m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (i, (g, e)) in m.factors().iter().enumerate() {
        if i > 0 {
            write!(f, "*")?;
        }
        match g.mode {
            0 => write!(f, "lam{}", g.comp)?,
            1 => write!(f, "lam{}(zq)", g.comp)?,
            j => write!(f, "lam{}(zq^{j})", g.comp)?,
        }
        if *e != 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// `c*Q1^a*Q2^b*lam1(zq)*... + ...`; zero prints as `0`.
impl<C: Coeff> fmt::Display for QExt<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, p) in &self.terms {
            for (m, c) in p.terms() {
                let mut body = String::new();
                for (k, x) in e.iter().enumerate().filter(|(_, x)| **x != 0) {
                    body += &format!("*Q{}", k + 1);
                    if *x != 1 {
                        body += &format!("^{x}");
                    }
                }
                if !m.is_one() {
                    body += &format!("*{}", MonoFmt(m));
                }
                write_term(f, first, &c.to_string(), body.trim_start_matches('*'))?;
                first = false;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for QExt<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `sum_d c_d D^d` with coefficients in the local algebra, `D F = F(zq) D`.
/// Terms below `floor` are dropped.
#[derive(Clone)]
pub struct LocalOp<C> {
    pub floor: i32,
    terms: BTreeMap<i32, QExt<C>>,
}

impl<C: Coeff> LocalOp<C> {
    pub fn term(d: i32, c: QExt<C>, floor: i32) -> Self {
        let mut terms = BTreeMap::new();
        if d >= floor && !c.is_zero() {
            terms.insert(d, c);
        }
        LocalOp { floor, terms }
    }

    pub fn coeff(&self, d: i32, ctx: &Ctx) -> QExt<C> {
        self.terms.get(&d).cloned().unwrap_or_else(|| ctx.zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i32, &QExt<C>)> {
        self.terms.iter()
    }

    fn insert_add(&mut self, d: i32, c: QExt<C>) {
        if d < self.floor {
            return;
        }
        let s = match self.terms.remove(&d) {
            Some(x) => x.add(&c),
            None => c,
        };
        if !s.is_zero() {
            self.terms.insert(d, s);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = LocalOp {
            floor: self.floor.max(o.floor),
            terms: BTreeMap::new(),
        };
        for (d, c) in self.terms.iter().chain(o.terms.iter()) {
            out.insert_add(*d, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LocalOp {
            floor: self.floor,
            terms: self.terms.iter().map(|(d, c)| (*d, c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = LocalOp {
            floor: self.floor.min(o.floor),
            terms: BTreeMap::new(),
        };
        for (i, a) in &self.terms {
            for (j, b) in &o.terms {
                out.insert_add(i + j, a.mul(&b.shift(*i)));
            }
        }
        out
    }

    /// `(D - c)^{-1} = sum_k D^{-1} (c D^{-1})^k`, down to `floor`.
    pub fn inv_d_minus(c: &QExt<C>, floor: i32) -> Self {
        let ctx = *c.ctx();
        let dinv = LocalOp::term(-1, ctx.one(), floor);
        let step = LocalOp::term(0, c.clone(), floor).mul(&dinv);
        let mut x = dinv.clone();
        let mut acc = dinv.clone();
        for _ in 0..(-floor).max(0) {
            x = x.mul(&step);
            acc = acc.add(&x);
        }
        acc
    }
}
