use std::collections::{BTreeMap, HashMap};

use crate::coeffs::Coeff;
use crate::error::{Error, Result};
use crate::hierarchy_kdv::lax_operator;
use crate::modering::{Family, Gen, Poly, Series, Window};
use crate::opalg::Op;

use super::KernelSet;

/// A functional `∫f`, stored as its 0th Fourier coefficient together with
/// the window it was built in.
#[derive(Clone, PartialEq)]
pub struct Functional<C> {
    pub value: Poly<C>,
    pub w: Window,
}

impl<C: Coeff> std::fmt::Debug for Functional<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "∫({:?})", self.value)
    }
}

impl<C: Coeff> Functional<C> {
    pub fn new(value: Poly<C>, w: Window) -> Self {
        Functional {
            value: value.truncate(&w),
            w,
        }
    }

    /// `∫f` for a density series.
    pub fn integral(f: &Series<C>) -> Self {
        Functional {
            value: f.integral(),
            w: *f.window(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.value.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn at_point(&self) -> Poly<C> {
        self.value.truncate(&self.w.at_point())
    }

    pub fn with_window(&self, w: Window) -> Self {
        Functional::new(self.value.clone(), w)
    }
}

/// The window a bracket result is exact in: one order of jet less.
pub fn lowered(w: &Window) -> Window {
    if w.jet <= 1 {
        w.at_point()
    } else {
        Window {
            jet: w.jet - 1,
            ..*w
        }
    }
}

fn check_window(w: &Window, degree: u32) -> Result<()> {
    if w.jet == 0 {
        return Err(Error::WindowTooSmall(
            "brackets need a window with outside generators (jet >= 1)".into(),
        ));
    }
    let need = degree.max(1) as i32 * w.m_pt;
    if w.m_expr < need {
        return Err(Error::WindowTooSmall(format!(
            "degree {degree} at m_pt {} needs m_expr >= {need}, have {}",
            w.m_pt, w.m_expr
        )));
    }
    Ok(())
}

fn gradients<C: Coeff>(f: &Poly<C>, out: &Window) -> Vec<(Gen, Poly<C>)> {
    f.gens()
        .into_iter()
        .filter_map(|g| {
            let d = f.derivative(&g).truncate(out);
            (!d.is_zero()).then_some((g, d))
        })
        .collect()
}

/// Mode brackets, memoized for one evaluation.
struct ModeCache<'a, C> {
    ks: &'a KernelSet,
    w: Window,
    memo: HashMap<(Gen, Gen), Poly<C>>,
}

impl<'a, C: Coeff> ModeCache<'a, C> {
    fn new(ks: &'a KernelSet, w: Window) -> Self {
        ModeCache {
            ks,
            w,
            memo: HashMap::new(),
        }
    }

    fn get(&mut self, x: &Gen, y: &Gen) -> Result<&Poly<C>> {
        if !self.memo.contains_key(&(*x, *y)) {
            let p = self.ks.mode_bracket::<C>(x, y, &self.w)?;
            self.memo.insert((*x, *y), p);
        }
        Ok(&self.memo[&(*x, *y)])
    }
}

/// `{F, G} = sum (∂F/∂g[p]) (∂G/∂g'[p']) {g[p], g'[p']}`.
///
/// The inputs must share a window with `jet >= 1`; the result lives in
/// [`lowered`] of it, so one bracket at `jet = 1` lands on the point.
pub fn bracket<C: Coeff>(
    f: &Functional<C>,
    g: &Functional<C>,
    ks: &KernelSet,
) -> Result<Functional<C>> {
    if f.w != g.w {
        return Err(Error::WindowMismatch);
    }
    check_window(&f.w, f.degree().max(g.degree()))?;
    let out = lowered(&f.w);
    let gf = gradients(&f.value, &out);
    let gg = gradients(&g.value, &out);
    let mut cache = ModeCache::new(ks, out);
    let mut acc = Poly::zero();
    for (x, dx) in &gf {
        for (y, dy) in &gg {
            let k = cache.get(x, y)?;
            if k.is_zero() {
                continue;
            }
            acc.add_assign(&dx.mul(dy, &out).mul(k, &out));
        }
    }
    Ok(Functional { value: acc, w: out })
}

/// The series `{g(z), H}` for a field `g`, over modes `|a| <= m_expr`.
pub fn field_bracket<C: Coeff>(
    family: Family,
    comp: u16,
    h: &Functional<C>,
    ks: &KernelSet,
) -> Result<Series<C>> {
    check_window(&h.w, h.degree())?;
    let out = lowered(&h.w);
    let gh = gradients(&h.value, &out);
    let mut cache = ModeCache::new(ks, out);
    let mut s = Series::zero(out);
    for a in -h.w.m_expr..=h.w.m_expr {
        let x = Gen::new(family, comp, a);
        let mut acc = Poly::zero();
        for (y, dy) in &gh {
            let k = cache.get(&x, y)?;
            if !k.is_zero() {
                acc.add_assign(&dy.mul(k, &out));
            }
        }
        s.add_at(a, acc);
    }
    Ok(s)
}

/// `{{F,G},H} + {{G,H},F} + {{H,F},G}`; needs inputs at `jet >= 2`.
pub fn jacobiator<C: Coeff>(
    f: &Functional<C>,
    g: &Functional<C>,
    h: &Functional<C>,
    ks: &KernelSet,
) -> Result<Poly<C>> {
    if f.w.jet < 2 {
        return Err(Error::WindowTooSmall(
            "the jacobiator needs inputs at jet >= 2".into(),
        ));
    }
    let mid = lowered(&f.w);
    let cyc = [(f, g, h), (g, h, f), (h, f, g)];
    let mut acc = Poly::zero();
    for (a, b, c) in cyc {
        let ab = bracket(a, b, ks)?;
        let outer = bracket(&ab, &c.with_window(mid), ks)?;
        acc.add_assign(&outer.at_point());
    }
    Ok(acc)
}

/// Both sides of `{ℓ_X, ℓ_Y}(L) = ∫Res(L[X,Y])` for `ℓ_X(L) = ∫Res(LX)`,
/// the left one computed with `ks` (a bracket on the reduced `t_1..t_{N-1}`).
///
/// `x` and `y` give the coefficients of `D^{-1}, ..., D^{-(N-1)}` as
/// constant-coefficient series (`(i, modes)` maps `D^{-i}` to
/// `sum c_m z^{-m}`). Returns `(Leibniz side, residue side)` at the point.
pub fn linear_functional_bracket<C: Coeff>(
    n: u16,
    x: &BTreeMap<i32, BTreeMap<i32, C>>,
    y: &BTreeMap<i32, BTreeMap<i32, C>>,
    m_pt: i32,
    ks: &KernelSet,
) -> Result<(Poly<C>, Poly<C>)> {
    for k in x.keys().chain(y.keys()) {
        if *k < 1 || *k >= n as i32 {
            return Err(Error::Malformed(format!(
                "linear functional needs D^-i with 1 <= i <= N-1, got D^-{k}"
            )));
        }
    }
    let reach = x
        .values()
        .chain(y.values())
        .flat_map(|s| s.keys())
        .map(|m| m.abs())
        .max()
        .unwrap_or(0);
    let w = Window {
        m_pt,
        m_expr: m_pt + reach,
        jet: 1,
        k: n as i32 + 2,
        degcap: None,
    };
    let l = lax_operator::<C>(n, w, true);
    let to_op = |x: &BTreeMap<i32, BTreeMap<i32, C>>| {
        let mut o = Op::zero(w);
        for (i, modes) in x {
            let mut s = Series::zero(w);
            for (m, c) in modes {
                s.add_at(*m, Poly::constant(c.clone()));
            }
            o.add_at(-i, s);
        }
        o
    };
    let (xo, yo) = (to_op(x), to_op(y));
    let lx = Functional::integral(&l.mul(&xo).res()?);
    let ly = Functional::integral(&l.mul(&yo).res()?);
    let leibniz = bracket(&lx, &ly, ks)?.at_point();
    let comm = xo.commutator(&yo);
    let residue = l.mul(&comm).res()?.integral().truncate(&w.at_point());
    Ok((leibniz, residue))
}
