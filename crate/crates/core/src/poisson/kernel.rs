use std::collections::BTreeMap;
use std::sync::Arc;

use malachite_base::num::basic::traits::One;

use crate::coeffs::{Coeff, Rat};
use crate::error::{Error, Result};
use crate::modering::{Family, Gen, Monomial, Poly, Window};

/// A field `g_i(z)` of the phase space: family and component.
pub type Slot = (Family, u16);

/// A series factor in a kernel term. `Unit` is the constant series `1`,
/// which is what `t_0` (and `t_N` after reduction) compile to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    Unit,
    Field(Family, u16),
}

impl Factor {
    /// The `m`-th mode as a polynomial, if the window admits it.
    fn mode(&self, m: i32, w: &Window) -> Option<Monomial> {
        match self {
            Factor::Unit => (m == 0).then(Monomial::one),
            Factor::Field(f, c) => {
                let g = Gen::new(*f, *c, m);
                w.admits_gen(&g).then(|| Monomial::gen(g))
            }
        }
    }
}

/// `c x^shift prod(1 - x^a) / prod(1 - x^b)`, evaluated at `x = q^m`.
///
/// At `m = 0` the removable singularity is resolved: each `1 - x^a` behaves
/// like `-a log x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phi {
    pub c: Rat,
    pub shift: i32,
    pub num: Vec<i32>,
    pub den: Vec<i32>,
}

impl Phi {
    pub fn value<C: Coeff>(&self, m: i32) -> Result<C> {
        let c = C::from_rat(&self.c);
        if m == 0 {
            use std::cmp::Ordering::*;
            return match self.num.len().cmp(&self.den.len()) {
                Greater => Ok(C::zero()),
                Less => Err(Error::Pole(format!("kernel singular at m = 0: {self:?}"))),
                Equal => {
                    let n: i64 = self.num.iter().map(|&a| a as i64).product();
                    let d: i64 = self.den.iter().map(|&b| b as i64).product();
                    Ok(c.mul(&C::from_rat(&Rat::from_signeds(n, d))))
                }
            };
        }
        let m = m as i64;
        let mut v = c.mul_qpow(self.shift as i64 * m);
        for &a in &self.num {
            v = v.mul(&C::one().sub(&C::q_pow(a as i64 * m)));
        }
        let mut d = C::one();
        for &b in &self.den {
            d = d.mul(&C::one().sub(&C::q_pow(b as i64 * m)));
        }
        v.div(&d)
    }
}

/// `sum_m (w/z)^m φ(q^m) Z(z) W(w)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothTerm {
    pub phi: Phi,
    pub z: Factor,
    pub w: Factor,
}

/// `coeff δ(w q^r / z) Z(z) W(w)` with `δ(x) = sum_m x^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaTerm {
    pub r: i32,
    pub coeff: Rat,
    pub z: Factor,
    pub w: Factor,
}

/// The bracket `{g_i(z), g_j(w)}` for one ordered pair of fields.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketKernel {
    pub left: Slot,
    pub right: Slot,
    pub smooth: Vec<SmoothTerm>,
    pub deltas: Vec<DeltaTerm>,
}

/// Candidate `m` for a product `Z[a - m] W[b + m]`.
fn m_range(z: &Factor, wf: &Factor, a: i32, b: i32, w: &Window) -> std::ops::RangeInclusive<i32> {
    match (z, wf) {
        (Factor::Unit, _) => a..=a,
        (_, Factor::Unit) => -b..=-b,
        _ => {
            let r = w.m_expr;
            (a - r).max(-b - r)..=(a + r).min(-b + r)
        }
    }
}

fn pair_monomial(z: &Factor, wf: &Factor, a: i32, b: i32, m: i32, w: &Window) -> Option<Monomial> {
    let x = z.mode(a - m, w)?;
    let y = wf.mode(b + m, w)?;
    let p = x.mul(&y);
    w.admits(&p).then_some(p)
}

/// `{g_i[a], g_j[b]}`: the coefficient of `z^{-a} w^{-b}`, truncated by `w`.
///
/// A smooth term gives `sum_m φ(q^m) Z[a-m] W[b+m]`, a delta term
/// `sum_m q^{rm} Z[a-m] W[b+m]`.
pub fn kernel_to_mode_bracket<C: Coeff>(
    k: &BracketKernel,
    a: i32,
    b: i32,
    w: &Window,
) -> Result<Poly<C>> {
    let mut out = Poly::zero();
    for t in &k.smooth {
        for m in m_range(&t.z, &t.w, a, b, w) {
            if let Some(p) = pair_monomial(&t.z, &t.w, a, b, m, w) {
                let c: C = t.phi.value(m)?;
                if !c.is_zero() {
                    out.add_term(p, c);
                }
            }
        }
    }
    for t in &k.deltas {
        let c = C::from_rat(&t.coeff);
        for m in m_range(&t.z, &t.w, a, b, w) {
            if let Some(p) = pair_monomial(&t.z, &t.w, a, b, m, w) {
                out.add_term(p, c.mul_qpow(t.r as i64 * m as i64));
            }
        }
    }
    Ok(out)
}

/// A declarative table of kernels over a fixed set of fields.
///
/// Pairs missing from the table whose reverse is present are obtained by
/// antisymmetry; pairs of known fields missing both ways bracket to zero.
#[derive(Clone, Debug)]
pub struct KernelTable {
    pub name: String,
    pub fields: Vec<Slot>,
    pub entries: BTreeMap<(Slot, Slot), BracketKernel>,
}

impl KernelTable {
    fn new(name: impl Into<String>, fields: Vec<Slot>) -> Self {
        KernelTable {
            name: name.into(),
            fields,
            entries: BTreeMap::new(),
        }
    }

    fn insert(&mut self, k: BracketKernel) {
        self.entries.insert((k.left, k.right), k);
    }

    pub fn mode_bracket<C: Coeff>(&self, x: &Gen, y: &Gen, w: &Window) -> Result<Poly<C>> {
        let (sx, sy) = ((x.family, x.comp), (y.family, y.comp));
        if let Some(k) = self.entries.get(&(sx, sy)) {
            return kernel_to_mode_bracket(k, x.mode, y.mode, w);
        }
        if let Some(k) = self.entries.get(&(sy, sx)) {
            return Ok(kernel_to_mode_bracket::<C>(k, y.mode, x.mode, w)?.neg());
        }
        if self.fields.contains(&sx) && self.fields.contains(&sy) {
            return Ok(Poly::zero());
        }
        Err(Error::UnknownPair(format!("{x}, {y} in {}", self.name)))
    }
}

/// A weighted sum of kernel tables, e.g. `{,}_1 + λ {,}_2`.
#[derive(Clone, Debug)]
pub struct KernelSet {
    parts: Vec<(Rat, Arc<KernelTable>)>,
}

impl KernelSet {
    pub fn single(t: KernelTable) -> Self {
        KernelSet {
            parts: vec![(Rat::ONE, Arc::new(t))],
        }
    }

    /// `self + λ other`.
    pub fn plus(&self, lambda: Rat, other: &KernelSet) -> Self {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().map(|(c, t)| (c * &lambda, t.clone())));
        KernelSet { parts }
    }

    pub fn name(&self) -> String {
        let names: Vec<String> = self
            .parts
            .iter()
            .map(|(c, t)| {
                if *c == Rat::ONE {
                    t.name.clone()
                } else {
                    format!("{c}*{}", t.name)
                }
            })
            .collect();
        names.join(" + ")
    }

    pub fn tables(&self) -> impl Iterator<Item = &KernelTable> {
        self.parts.iter().map(|(_, t)| t.as_ref())
    }

    pub fn mode_bracket<C: Coeff>(&self, x: &Gen, y: &Gen, w: &Window) -> Result<Poly<C>> {
        let mut out = Poly::zero();
        for (c, t) in &self.parts {
            let p = t.mode_bracket::<C>(x, y, w)?;
            if *c == Rat::ONE {
                out.add_assign(&p);
            } else {
                out.add_assign(&p.scale(&C::from_rat(c)));
            }
        }
        Ok(out)
    }

    /// The first q-KdV bracket `{,}_1`.
    ///
    /// The `t_N` of the kernel is read as the `D^0` coefficient of `L`, which
    /// is `(-1)^N t_N`. This is the bracket for which `{ℓ_X,ℓ_Y}_1 = ∫Res(L[X,Y])`
    /// and the first hamiltonian form of the flows hold.
    pub fn kdv1(n: u16, reduced: bool) -> Self {
        KernelSet::single(kdv_first(n, reduced, false))
    }

    /// The first bracket with a bare `t_N` in the kernel; equal to
    /// `(-1)^N` times [`KernelSet::kdv1`].
    pub fn kdv1_printed(n: u16, reduced: bool) -> Self {
        KernelSet::single(kdv_first(n, reduced, true))
    }

    /// The second q-KdV bracket `{,}_2`.
    pub fn kdv2(n: u16, reduced: bool) -> Self {
        KernelSet::single(kdv_second(n, reduced))
    }

    /// The bracket on the Miura fields `Λ_1..Λ_N`.
    pub fn mkdv(n: u16) -> Self {
        KernelSet::single(miura_table(n))
    }
}

fn t_factor(n: u16, reduced: bool, i: i32) -> Option<Factor> {
    if i == 0 || (reduced && i == n as i32) {
        Some(Factor::Unit)
    } else if i > 0 && i <= n as i32 {
        Some(Factor::Field(Family::T, i as u16))
    } else {
        None
    }
}

fn t_fields(n: u16, reduced: bool) -> Vec<Slot> {
    let top = if reduced { n - 1 } else { n };
    (1..=top).map(|i| (Family::T, i)).collect()
}

fn kdv_first(n: u16, reduced: bool, printed: bool) -> KernelTable {
    let name = if printed { "kdv1_printed" } else { "kdv1" };
    let mut t = KernelTable::new(name, t_fields(n, reduced));
    let ni = n as i32;
    let sign = if printed || n.is_multiple_of(2) {
        Rat::ONE
    } else {
        -Rat::ONE
    };
    for &(_, i) in &t.fields.clone() {
        for &(_, j) in &t.fields.clone() {
            let (i, j) = (i as i32, j as i32);
            let mut deltas = Vec::new();
            if i != ni && j != ni && i + j >= ni {
                let top = t_factor(n, reduced, ni).unwrap();
                let low = t_factor(n, reduced, i + j - ni).unwrap();
                deltas.push(DeltaTerm {
                    r: ni - j,
                    coeff: sign.clone(),
                    z: top,
                    w: low,
                });
                deltas.push(DeltaTerm {
                    r: -(ni - i),
                    coeff: -sign.clone(),
                    z: low,
                    w: top,
                });
            }
            t.insert(BracketKernel {
                left: (Family::T, i as u16),
                right: (Family::T, j as u16),
                smooth: Vec::new(),
                deltas,
            });
        }
    }
    t
}

/// Only `i <= j` is tabulated; `i > j` follows by antisymmetry.
fn kdv_second(n: u16, reduced: bool) -> KernelTable {
    let mut t = KernelTable::new("kdv2", t_fields(n, reduced));
    let ni = n as i32;
    for &(_, i) in &t.fields.clone() {
        for &(_, j) in &t.fields.clone() {
            if i > j {
                continue;
            }
            let (i, j) = (i as i32, j as i32);
            let mut smooth = Vec::new();
            if i != ni && j != ni {
                smooth.push(SmoothTerm {
                    phi: Phi {
                        c: Rat::ONE,
                        shift: 0,
                        num: vec![i, ni - j],
                        den: vec![ni],
                    },
                    z: Factor::Field(Family::T, i as u16),
                    w: Factor::Field(Family::T, j as u16),
                });
            }
            let mut deltas = Vec::new();
            for r in 1..=i.min(ni - j) {
                let lo = t_factor(n, reduced, i - r).unwrap();
                let hi = t_factor(n, reduced, j + r).unwrap();
                deltas.push(DeltaTerm {
                    r,
                    coeff: Rat::ONE,
                    z: hi,
                    w: lo,
                });
                deltas.push(DeltaTerm {
                    r: -(j - i + r),
                    coeff: -Rat::ONE,
                    z: lo,
                    w: hi,
                });
            }
            t.insert(BracketKernel {
                left: (Family::T, i as u16),
                right: (Family::T, j as u16),
                smooth,
                deltas,
            });
        }
    }
    t
}

/// Diagonal and `i < j` entries; `i > j` by antisymmetry.
fn miura_table(n: u16) -> KernelTable {
    let fields: Vec<Slot> = (1..=n).map(|i| (Family::Lam, i)).collect();
    let mut t = KernelTable::new("mkdv", fields);
    let ni = n as i32;
    for i in 1..=n {
        for j in i..=n {
            let (ii, jj) = (i as i32, j as i32);
            let phi = if i == j {
                Phi {
                    c: Rat::ONE,
                    shift: 0,
                    num: vec![1, ni - 1],
                    den: vec![ni],
                }
            } else {
                Phi {
                    c: -Rat::ONE,
                    shift: ni + ii - jj - 1,
                    num: vec![1, 1],
                    den: vec![ni],
                }
            };
            t.insert(BracketKernel {
                left: (Family::Lam, i),
                right: (Family::Lam, j),
                smooth: vec![SmoothTerm {
                    phi,
                    z: Factor::Field(Family::Lam, i),
                    w: Factor::Field(Family::Lam, j),
                }],
                deltas: Vec::new(),
            });
        }
    }
    t
}

/// Builds a single-entry table from explicit terms, for tests and for
/// brackets assembled by other modules.
pub fn custom_table(name: &str, fields: Vec<Slot>, kernels: Vec<BracketKernel>) -> KernelTable {
    let mut t = KernelTable::new(name, fields);
    for k in kernels {
        t.insert(k);
    }
    t
}
