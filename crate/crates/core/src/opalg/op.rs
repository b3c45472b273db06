use std::collections::BTreeMap;
use std::fmt;

use crate::coeffs::Coeff;
use crate::error::{Error, Result};
use crate::modering::{Gen, Poly, Series, Window};

/// Marks an operator with no dropped tail.
pub const EXACT: i32 = i32::MIN / 4;

/// A pseudo-difference operator `sum_n R_n(z) D^n` with `D f(z) = f(zq)`.
///
/// Coefficients below `valid` are unknown and are not stored; everything at
/// exponents `>= valid` is exact.
#[derive(Clone)]
pub struct Op<C> {
    w: Window,
    c: BTreeMap<i32, Series<C>>,
    valid: i32,
}

impl<C: Coeff> PartialEq for Op<C> {
    fn eq(&self, o: &Self) -> bool {
        self.valid == o.valid && self.c == o.c
    }
}

impl<C: Coeff> Op<C> {
    pub fn zero(w: Window) -> Self {
        Op {
            w,
            c: BTreeMap::new(),
            valid: EXACT,
        }
    }

    pub fn one(w: Window) -> Self {
        Op::d_pow(w, 0)
    }

    /// `D^n`.
    pub fn d_pow(w: Window, n: i32) -> Self {
        Op::term(n, Series::one(w))
    }

    /// `s(z) D^n`.
    pub fn term(n: i32, s: Series<C>) -> Self {
        let mut o = Op::zero(*s.window());
        o.add_at(n, s);
        o
    }

    pub fn scalar(w: Window, c: C) -> Self {
        Op::term(0, Series::constant(w, c))
    }

    pub fn window(&self) -> &Window {
        &self.w
    }

    /// Lowest exponent known exactly; [`EXACT`] when nothing was dropped.
    pub fn valid_from(&self) -> i32 {
        self.valid
    }

    pub fn is_exact(&self) -> bool {
        self.valid <= EXACT
    }

    /// Forgets everything below `v`.
    pub fn with_valid(mut self, v: i32) -> Self {
        if v > self.valid {
            self.valid = v;
            self.c = self.c.split_off(&v);
        }
        self
    }

    /// Truncates to depth `k`, i.e. keeps exponents `>= -k`.
    pub fn truncate(self, k: i32) -> Self {
        self.with_valid(-k)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.c.keys().next_back().copied()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.c.keys().next().copied()
    }

    pub fn coeff(&self, n: i32) -> Series<C> {
        self.c
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Series::zero(self.w))
    }

    /// The coefficient at `n`, failing when it lies in the dropped tail.
    pub fn coeff_checked(&self, n: i32) -> Result<Series<C>> {
        if n < self.valid {
            return Err(Error::DepthInsufficient {
                needed: n,
                valid: self.valid,
            });
        }
        Ok(self.coeff(n))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Series<C>)> {
        self.c.iter().map(|(n, s)| (*n, s))
    }

    pub fn add_at(&mut self, n: i32, s: Series<C>) {
        if n < self.valid || s.is_zero() {
            return;
        }
        match self.c.get_mut(&n) {
            Some(e) => {
                let v = e.add(&s);
                if v.is_zero() {
                    self.c.remove(&n);
                } else {
                    *e = v;
                }
            }
            None => {
                self.c.insert(n, s);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone().with_valid(o.valid);
        for (n, s) in &o.c {
            r.add_at(*n, s.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_series(|s| s.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_series(|s| s.scale(c))
    }

    pub fn map_series(&self, f: impl Fn(&Series<C>) -> Series<C>) -> Self {
        let mut r = Op {
            w: self.w,
            c: BTreeMap::new(),
            valid: self.valid,
        };
        for (n, s) in &self.c {
            r.add_at(*n, f(s));
        }
        r
    }

    /// Left multiplication by a function of `z`.
    pub fn lmul_series(&self, s: &Series<C>) -> Self {
        self.map_series(|x| s.mul(x))
    }

    /// Product, computing only exponents `>= lo` in addition to the depth
    /// truncation of the window.
    pub fn mul_from(&self, o: &Self, lo: i32) -> Self {
        let (Some(na), Some(nb)) = (self.max_exp(), o.max_exp()) else {
            return Op {
                w: self.w,
                c: BTreeMap::new(),
                valid: self.valid.max(o.valid).max(lo),
            };
        };
        let shifted_valid = |v: i32, n: i32| if v <= EXACT { EXACT } else { v + n };
        let mut valid = shifted_valid(self.valid, nb).max(shifted_valid(o.valid, na));
        let lowest = self.min_exp().unwrap() + o.min_exp().unwrap();
        if lowest < -self.w.k {
            valid = valid.max(-self.w.k);
        }
        if lowest < lo {
            valid = valid.max(lo);
        }
        let mut r = Op {
            w: self.w,
            c: BTreeMap::new(),
            valid,
        };
        // shifted copies of the right factor are reused across rows
        let mut shifted: BTreeMap<i32, BTreeMap<i32, Series<C>>> = BTreeMap::new();
        for (i, a) in self.c.iter().rev() {
            if i + nb < valid {
                break;
            }
            let row = shifted.entry(*i).or_insert_with(|| {
                o.c.iter()
                    .map(|(j, b)| (*j, b.q_shift(*i as i64)))
                    .collect()
            });
            for (j, b) in row.iter().rev() {
                if i + j < valid {
                    break;
                }
                r.add_at(i + j, a.mul(b));
            }
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.mul_from(o, EXACT)
    }

    /// `self^n`, computing only exponents `>= lo`.
    pub fn pow_from(&self, n: u32, lo: i32) -> Self {
        if n == 0 {
            return Op::one(self.w);
        }
        let top = self.max_exp().unwrap_or(0).max(0);
        let mut acc = self.clone();
        for r in 2..=n {
            // the remaining factors raise exponents by at most `top` each
            let bound = lo.saturating_sub((n - r) as i32 * top);
            acc = acc.mul_from(self, bound);
        }
        acc
    }

    pub fn pow(&self, n: u32) -> Self {
        self.pow_from(n, EXACT)
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// `(A)_+`: exponents `>= 0`.
    pub fn plus(&self) -> Self {
        let mut r = Op::zero(self.w);
        for (n, s) in self.c.range(0..) {
            r.add_at(*n, s.clone());
        }
        if self.valid > 0 {
            r.valid = self.valid;
        }
        r
    }

    /// `(A)_-`: exponents `< 0`, with the same dropped tail.
    pub fn minus(&self) -> Self {
        let mut r = Op {
            w: self.w,
            c: BTreeMap::new(),
            valid: self.valid,
        };
        for (n, s) in self.c.range(..0) {
            r.add_at(*n, s.clone());
        }
        r
    }

    /// `Res A`, the `D^0` coefficient.
    pub fn res(&self) -> Result<Series<C>> {
        self.coeff_checked(0)
    }

    pub fn parts(&self) -> Result<(Self, Self, Series<C>)> {
        Ok((self.plus(), self.minus(), self.res()?))
    }

    pub fn with_window(&self, w: Window) -> Self {
        let mut r = Op {
            w,
            c: BTreeMap::new(),
            valid: self.valid,
        };
        for (n, s) in &self.c {
            r.add_at(*n, s.with_window(w));
        }
        r
    }

    pub fn at_point(&self) -> Self {
        self.with_window(self.w.at_point())
    }

    pub fn substitute(&self, f: &(dyn Fn(&Gen) -> Option<Poly<C>> + Sync)) -> Self {
        self.map_series(|s| s.substitute(f))
    }

    /// First coefficient where the two operators differ on their common
    /// exact range, as `(exponent, mode, difference)`.
    pub fn diff_witness(&self, o: &Self) -> Option<(i32, i32, Poly<C>)> {
        let v = self.valid.max(o.valid);
        let d = self.sub(o);
        for (n, s) in d.c.iter().rev() {
            if *n < v {
                break;
            }
            if let Some((m, p)) = s.modes().next() {
                return Some((*n, m, p.clone()));
            }
        }
        None
    }

    /// Equality on the common exact range.
    pub fn agrees_with(&self, o: &Self) -> bool {
        self.diff_witness(o).is_none()
    }
}

/// The unique `P = D + p_0 + p_{-1} D^{-1} + ... + p_{-k} D^{-k}` with
/// `P^n = L`, for `L = D^n + lower terms`.
pub fn nth_root<C: Coeff>(l: &Op<C>, n: u32, k: i32) -> Result<Op<C>> {
    if n == 0 {
        return Err(Error::Malformed("root of order 0".into()));
    }
    let w = l.window().with_k(k.max(l.window().k));
    let l = l.with_window(w);
    let ni = n as i32;
    if l.max_exp() != Some(ni) || l.coeff(ni) != Series::one(w) {
        return Err(Error::Malformed(format!("leading term must be D^{n}")));
    }
    let mut p = Op::d_pow(w, 1);
    for j in 0..=k {
        let e = ni - 1 - j;
        let target = l.coeff_checked(e)?;
        let known = p.pow_from(n, e).coeff(e);
        let pj = target.sub(&known).cyclic_sum_invert(n)?;
        p.add_at(-j, pj);
    }
    Ok(p.with_valid(-k))
}

/// `A^{-1}` to depth `k`, for `A = a D^n + lower` with `a` invertible.
pub fn op_inverse<C: Coeff>(a: &Op<C>, k: i32) -> Result<Op<C>> {
    let w = a.window().with_k(k);
    let a = a.with_window(w);
    let n = a.max_exp().ok_or(Error::DivisionByZero)?;
    let lead = a.coeff(n);
    let lead_inv = if lead == Series::one(w) {
        lead.clone()
    } else {
        lead.inverse()?
    };
    // A = lead D^n (1 + X) with X = D^{-n} lead^{-1} (A - lead D^n)
    let dn_inv = Op::term(-n, Series::one(w));
    let rest = a.sub(&Op::term(n, lead.clone()));
    let x = dn_inv.mul(&Op::term(0, lead_inv.clone())).mul(&rest);
    let minus_x = x.neg();
    let tail = dn_inv.mul(&Op::term(0, lead_inv));
    let mut geom = Op::one(w);
    let mut pw = Op::one(w);
    loop {
        pw = pw.mul(&minus_x);
        if pw.is_zero() {
            break;
        }
        geom = geom.add(&pw);
    }
    Ok(geom.mul(&tail))
}

/// The `f_0, ..., f_k` with `D = P + sum_i f_i P^{-i}` to depth `k`.
pub fn expand_in_root<C: Coeff>(p: &Op<C>, k: i32) -> Result<Vec<Series<C>>> {
    let w = p.window().with_k(k);
    let p = p.with_window(w);
    let pinv = op_inverse(&p, k)?;
    let mut r = Op::d_pow(w, 1).sub(&p);
    let mut pi = Op::one(w);
    let mut out = Vec::new();
    for i in 0..=k {
        let f = r.coeff_checked(-i)?;
        r = r.sub(&pi.lmul_series(&f));
        out.push(f);
        pi = pi.mul(&pinv);
    }
    Ok(out)
}

impl<C: Coeff> fmt::Debug for Op<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `(s)*D^n + ...` from the top exponent down.
impl<C: Coeff> fmt::Display for Op<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            write!(f, "0")?;
        }
        for (i, (n, s)) in self.c.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({s})*D^{n}")?;
        }
        if !self.is_exact() {
            write!(f, " + O(D^{})", self.valid - 1)?;
        }
        Ok(())
    }
}
