use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use crate::coeffs::Coeff;
use crate::error::{Error, Result};
use crate::modering::{Family, Gen, Poly, Series, Window};
use crate::opalg::{nth_root, Op};

/// `L = D^N - t_1 D^{N-1} + ... + (-1)^N t_N`, with `t_N = 1` when reduced.
pub fn lax_operator<C: Coeff>(n: u16, w: Window, reduced: bool) -> Op<C> {
    let mut l = Op::d_pow(w, n as i32);
    for i in 1..=n {
        let t = if reduced && i == n {
            Series::one(w)
        } else {
            Series::gen_series(w, Family::T, i)
        };
        let t = if i % 2 == 1 { t.neg() } else { t };
        l.add_at(n as i32 - i as i32, t);
    }
    l
}

/// A Lax operator together with its lazily computed `N`-th root.
pub struct KdVState<C> {
    pub n: u16,
    pub w: Window,
    pub reduced: bool,
    pub l: Op<C>,
    root: OnceLock<Result<Op<C>>>,
}

impl<C: Coeff> KdVState<C> {
    pub fn new(n: u16, w: Window, reduced: bool) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config(format!("N must be >= 2, got {n}")));
        }
        w.validate()?;
        Ok(KdVState {
            n,
            w,
            reduced,
            l: lax_operator(n, w, reduced),
            root: OnceLock::new(),
        })
    }

    /// A state for an explicit `L = D^N + ...`, e.g. with numbers substituted.
    pub fn from_op(n: u16, l: Op<C>, reduced: bool) -> Result<Self> {
        if l.max_exp() != Some(n as i32) || l.coeff(n as i32) != Series::one(*l.window()) {
            return Err(Error::Malformed(format!("leading term must be D^{n}")));
        }
        Ok(KdVState {
            n,
            w: *l.window(),
            reduced,
            l,
            root: OnceLock::new(),
        })
    }

    /// The fields `t_i` that are coordinates of this state.
    pub fn fields(&self) -> std::ops::RangeInclusive<u16> {
        1..=if self.reduced { self.n - 1 } else { self.n }
    }

    /// `P = L^{1/N}` to the window depth.
    pub fn root(&self) -> Result<&Op<C>> {
        self.root
            .get_or_init(|| nth_root(&self.l, self.n as u32, self.w.k))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `Res L^{m/N}` as a density series.
    pub fn res_power(&self, m: u32) -> Result<Series<C>> {
        let need = m as i32 - 1;
        if self.w.k < need {
            return Err(Error::DepthInsufficient {
                needed: -need,
                valid: -self.w.k,
            });
        }
        self.root()?.pow_from(m, 0).res()
    }
}

/// A derivation given on generators: `g -> ∂g`. It is defined on every
/// generator of the listed fields; generators missing from `map` go to zero.
#[derive(Clone, PartialEq)]
pub struct FlowDerivation<C> {
    pub w: Window,
    pub fields: BTreeSet<(Family, u16)>,
    pub map: BTreeMap<Gen, Poly<C>>,
}

impl<C: Coeff> std::fmt::Debug for FlowDerivation<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map()
            .entries(self.map.iter().map(|(g, p)| (g.to_string(), p)))
            .finish()
    }
}

impl<C: Coeff> FlowDerivation<C> {
    pub fn from_series(
        w: Window,
        fields: impl IntoIterator<Item = (Family, u16, Series<C>)>,
    ) -> Self {
        let mut map = BTreeMap::new();
        let mut covered = BTreeSet::new();
        for (f, i, s) in fields {
            covered.insert((f, i));
            for (m, p) in s.modes() {
                map.insert(Gen::new(f, i, m), p.clone());
            }
        }
        FlowDerivation {
            w,
            fields: covered,
            map,
        }
    }

    pub fn get(&self, g: &Gen) -> Poly<C> {
        self.map.get(g).cloned().unwrap_or_default()
    }

    pub fn series(&self, family: Family, comp: u16) -> Series<C> {
        let mut s = Series::zero(self.w);
        for (g, p) in &self.map {
            if g.family == family && g.comp == comp {
                s.add_at(g.mode, p.clone());
            }
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.map.values().all(|p| p.is_zero())
    }

    /// `∂p = sum_g (∂p/∂g) ∂g`, truncated by `out`. Fails on generators of
    /// fields the derivation does not cover.
    pub fn apply(&self, p: &Poly<C>, out: &Window) -> Result<Poly<C>> {
        let mut acc = Poly::zero();
        for g in p.gens() {
            if !self.fields.contains(&(g.family, g.comp)) {
                return Err(Error::Config(format!("derivation undefined on {g}")));
            }
            if let Some(x) = self.map.get(&g) {
                acc.add_assign(&p.derivative(&g).truncate(out).mul(x, out));
            }
        }
        Ok(acc)
    }

    pub fn apply_series(&self, s: &Series<C>, out: &Window) -> Result<Series<C>> {
        let mut r = Series::zero(*out);
        for (m, p) in s.modes() {
            r.add_at(m, self.apply(p, out)?);
        }
        Ok(r)
    }

    /// `[X, Y] g = X(Y g) - Y(X g)` on the given generators.
    pub fn commutator(
        &self,
        o: &Self,
        gens: impl IntoIterator<Item = Gen>,
        out: &Window,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut fields = BTreeSet::new();
        for g in gens {
            fields.insert((g.family, g.comp));
            let v = self
                .apply(&o.get(&g), out)?
                .sub(&o.apply(&self.get(&g), out)?);
            if !v.is_zero() {
                map.insert(g, v);
            }
        }
        Ok(FlowDerivation {
            w: *out,
            fields,
            map,
        })
    }
}
