//! q-Miura transformations and the q-mKdV hierarchy on `N`-tuples
//! `(D - Λ_1(z), ..., D - Λ_N(z))`.

use std::collections::BTreeMap;

use crate::coeffs::Coeff;
use crate::error::{Error, Result};
use crate::hierarchy_kdv::FlowDerivation;
use crate::modering::{Family, Gen, Poly, Series, Window};
use crate::opalg::{mat_commutator, nth_root, MatrixOp, Op};
use crate::poisson::Functional;

pub mod verify;

#[cfg(test)]
mod tests;

/// A point of the space of `N`-tuples, with `Λ_{N+j} = Λ_j`.
///
/// When `reduced`, `Λ_N = (Λ_1 ... Λ_{N-1})^{-1}`, expanded to the window's
/// degree cap.
#[derive(Clone)]
pub struct MKdVState<C> {
    pub n: u16,
    pub w: Window,
    pub reduced: bool,
    lam: Vec<Series<C>>,
}

impl<C: Coeff> MKdVState<C> {
    pub fn new(n: u16, w: Window, reduced: bool) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config(format!("N must be >= 2, got {n}")));
        }
        w.validate()?;
        let top = if reduced { n - 1 } else { n };
        let mut lam: Vec<Series<C>> = (1..=top)
            .map(|i| Series::gen_series(w, Family::Lam, i))
            .collect();
        if reduced {
            if w.degcap.is_none() {
                return Err(Error::Config(
                    "the reduced mKdV state needs a degree cap".into(),
                ));
            }
            let prod = lam.iter().skip(1).fold(lam[0].clone(), |a, b| a.mul(b));
            lam.push(prod.inverse()?);
        }
        Ok(MKdVState { n, w, reduced, lam })
    }

    /// `Λ_i(z)`, with the index taken mod `N` (1-based).
    pub fn lam(&self, i: i32) -> &Series<C> {
        &self.lam[(i - 1).rem_euclid(self.n as i32) as usize]
    }

    /// The free fields.
    pub fn fields(&self) -> std::ops::RangeInclusive<u16> {
        1..=if self.reduced { self.n - 1 } else { self.n }
    }

    fn factor(&self, i: i32) -> Op<C> {
        Op::d_pow(self.w, 1).sub(&Op::term(0, self.lam(i).clone()))
    }

    /// `L_i = (D - Λ_i)(D - Λ_{i+1}) ... (D - Λ_{N+i-1})`.
    pub fn miura(&self, i: i32) -> Op<C> {
        let mut l = Op::one(self.w);
        for k in i..i + self.n as i32 {
            l = l.mul(&self.factor(k));
        }
        l
    }

    /// The `t_j` coordinates of `L_i`: `(-1)^j [D^{N-j}] L_i`, `j = 1..N`.
    pub fn t_images(&self, i: i32) -> Vec<Series<C>> {
        let l = self.miura(i);
        (1..=self.n as i32)
            .map(|j| {
                let c = l.coeff(self.n as i32 - j);
                if j % 2 == 1 {
                    c.neg()
                } else {
                    c
                }
            })
            .collect()
    }

    /// The cyclic matrix with `D - Λ_i` at `(i, i+1)`.
    pub fn lax_matrix(&self) -> MatrixOp<C> {
        let n = self.n as usize;
        let mut m = MatrixOp::zero(self.w, n);
        for i in 0..n {
            m.set(i, (i + 1) % n, self.factor(i as i32 + 1));
        }
        m
    }

    /// `tL` together with `tP = diag(L_i^{1/N})` to depth `w.k`, after
    /// checking `[tL, tP] = 0` and `tL^N = diag(L_1, ..., L_N)`.
    pub fn lax_pair(&self) -> Result<LaxPair<C>> {
        let tl = self.lax_matrix();
        let n = self.n as i32;
        let roots: Vec<Op<C>> = (1..=n)
            .map(|i| nth_root(&self.miura(i), n as u32, self.w.k))
            .collect::<Result<_>>()?;
        let tp = MatrixOp::diag(roots);
        if let Some((i, j, wit)) = mat_commutator(&tl, &tp)?.nonzero_witness() {
            return Err(Error::CheckFailed(format!(
                "[tL,tP] entry ({},{}): {wit}",
                i + 1,
                j + 1
            )));
        }
        let ln = tl.pow(n as u32)?;
        let diag = MatrixOp::diag((1..=n).map(|i| self.miura(i)).collect());
        if let Some((i, j, wit)) = ln.sub(&diag)?.nonzero_witness() {
            return Err(Error::CheckFailed(format!(
                "tL^N - diag(L_i) entry ({},{}): {wit}",
                i + 1,
                j + 1
            )));
        }
        Ok(LaxPair { tl, tp })
    }
}

#[derive(Clone)]
pub struct LaxPair<C> {
    pub tl: MatrixOp<C>,
    pub tp: MatrixOp<C>,
}

impl<C: Coeff> LaxPair<C> {
    pub fn p(&self, i: usize) -> &Op<C> {
        self.tp.get(i - 1, i - 1)
    }
}

/// `[tL, (tP^n)_+]` read off the cyclic superdiagonal: `∂Λ_i` for
/// `i = 1..N`. Fails if the commutator has any other term.
pub fn qmkdv_velocities<C: Coeff>(
    s: &MKdVState<C>,
    lp: &LaxPair<C>,
    n: u32,
) -> Result<Vec<Series<C>>> {
    if n == 0 {
        return Err(Error::Config("flows are indexed from 1".into()));
    }
    let big = s.n as usize;
    let a: Vec<Op<C>> = (1..=big)
        .map(|i| {
            let pn = lp.p(i).pow_from(n, 0);
            if pn.valid_from() > 0 {
                return Err(Error::DepthInsufficient {
                    needed: 0,
                    valid: pn.valid_from(),
                });
            }
            Ok(pn.plus())
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(big);
    for i in 0..big {
        let f = lp.tl.get(i, (i + 1) % big);
        let c = f.mul(&a[(i + 1) % big]).sub(&a[i].mul(f));
        for (d, s) in c.terms() {
            if d != 0 && !s.is_zero() {
                return Err(Error::CheckFailed(format!(
                    "[tL,(tP^{n})+] entry ({},{}) has a D^{d} term",
                    i + 1,
                    (i + 1) % big + 1
                )));
            }
        }
        out.push(c.coeff(0).neg());
    }
    Ok(out)
}

/// `∂_{t_n}` as a derivation on the free `Λ` modes.
pub fn qmkdv_flow<C: Coeff>(
    s: &MKdVState<C>,
    lp: &LaxPair<C>,
    n: u32,
) -> Result<FlowDerivation<C>> {
    let v = qmkdv_velocities(s, lp, n)?;
    Ok(FlowDerivation::from_series(
        s.w,
        s.fields()
            .map(|i| (Family::Lam, i, v[i as usize - 1].clone()))
            .collect::<Vec<_>>(),
    ))
}

/// `(1/n) ∫ Tr Res tP^n`.
pub fn mkdv_hamiltonian<C: Coeff>(
    s: &MKdVState<C>,
    lp: &LaxPair<C>,
    n: u32,
) -> Result<Functional<C>> {
    let mut acc = Series::zero(s.w);
    for i in 1..=s.n as usize {
        let pn = lp.p(i).pow_from(n, -1);
        if pn.valid_from() > -1 {
            return Err(Error::DepthInsufficient {
                needed: -1,
                valid: pn.valid_from(),
            });
        }
        acc = acc.add(&pn.res()?);
    }
    let c = C::from_i64(n as i64).inv()?;
    Ok(Functional::new(acc.integral().scale(&c), s.w))
}

/// Substitution `t_j[m] -> (t_j-image of L_i)[m]`, for pulling functions of
/// `t` back along `μ_{i,q}`.
pub fn pullback_map<C: Coeff>(s: &MKdVState<C>, i: i32) -> BTreeMap<Gen, Poly<C>> {
    let mut map = BTreeMap::new();
    for (j, img) in s.t_images(i).into_iter().enumerate() {
        for (m, p) in img.modes() {
            map.insert(Gen::t(j as u16 + 1, m), p.clone());
        }
    }
    map
}

/// Pulls a polynomial in the `t` modes back to the `Λ` modes. Any `t` mode
/// outside the image's support maps to zero.
pub fn pull_back<C: Coeff>(p: &Poly<C>, map: &BTreeMap<Gen, Poly<C>>, w: &Window) -> Poly<C> {
    p.substitute(
        |g| Some(map.get(g).cloned().unwrap_or_else(Poly::zero)),
        Some(w),
    )
}

/// `x` applied to a series of degree `<= deg` built in a jet-1 window, at the
/// point. Only modes `|j| <= m_expr - (deg-1) m_pt` see every generator whose
/// velocity contributes, so the others are dropped.
pub fn derive_series<C: Coeff>(
    x: &FlowDerivation<C>,
    s: &Series<C>,
    deg: u32,
) -> Result<Series<C>> {
    let w = *s.window();
    let reach = w.m_expr - (deg.max(1) as i32 - 1) * w.m_pt;
    Ok(restrict(&x.apply_series(s, &w.at_point())?, reach))
}

/// Drops the modes `|j| > reach`.
pub fn restrict<C: Coeff>(s: &Series<C>, reach: i32) -> Series<C> {
    s.map_modes(|j, p| {
        if j.abs() <= reach {
            p.clone()
        } else {
            Poly::zero()
        }
    })
}
