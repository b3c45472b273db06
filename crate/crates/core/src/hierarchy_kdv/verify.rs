use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeffs::{rat, Coeff};
use crate::error::{Error, Result};
use crate::modering::{Family, Gen, Monomial, Poly, Series, Window};
use crate::opalg::{nth_root, Op};
use crate::poisson::{bracket, field_bracket, Functional, KernelSet};
use crate::report::{expect, expect_poly_eq, expect_poly_zero, expect_series_eq, Checker};

use super::*;

/// Which flows and hamiltonians the suite exercises for a given `N`.
pub fn default_orders(n: u16) -> (Vec<u32>, Vec<u32>) {
    match n {
        2 => (vec![1, 3], vec![1, 3, 5]),
        3 => (vec![1, 2], vec![1, 2, 4]),
        _ => (vec![1], vec![1, 2]),
    }
}

/// Substitutes random rationals for every `t_i[m]` of the point window.
pub fn random_point<C: Coeff>(l: &Op<C>, seed: u64) -> Op<C> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = *l.window();
    let mut vals: HashMap<Gen, Poly<C>> = HashMap::new();
    for s in l.terms().map(|(_, s)| s) {
        for (_, p) in s.modes() {
            for g in p.gens() {
                vals.entry(g).or_insert_with(|| {
                    Poly::constant(C::from_rat(&rat(
                        rng.gen_range(-9..=9),
                        rng.gen_range(1..=4),
                    )))
                });
            }
        }
    }
    let f = move |g: &Gen| vals.get(g).cloned();
    l.substitute(&f).with_window(w)
}

/// `nth_root(L)^N = L` at a random point of the window, to depth `k`.
pub fn check_root_random<C: Coeff>(n: u16, m_pt: i32, k: i32, seed: u64) -> Result<()> {
    let w = Window::point(m_pt, k);
    let l = random_point(&lax_operator::<C>(n, w, true), seed);
    let p = nth_root(&l, n as u32, k)?;
    let back = p.pow(n as u32);
    expect(back.valid_from() <= 0, || {
        format!("P^N exact only from D^{}", back.valid_from())
    })?;
    match back.diff_witness(&l) {
        None => Ok(()),
        Some((d, m, c)) => Err(Error::CheckFailed(format!(
            "P^N - L at D^{d} z^{}: {c}",
            -m
        ))),
    }
}

fn t1(m: i32) -> Monomial {
    Monomial::gen(Gen::t(1, m))
}

fn inv_one_plus<C: Coeff>(k: i32) -> Result<C> {
    C::one().add(&C::q_pow(k as i64)).inv()
}

/// `(1/3) sum_{i+j+k=0} t_i t_j t_k / ((1+q^i)(1+q^j)(1+q^k))` over the point.
pub fn h3_cubic_formula<C: Coeff>(m: i32) -> Result<Poly<C>> {
    let third = C::from_rat(&rat(1, 3));
    let mut p = Poly::zero();
    for i in -m..=m {
        for j in -m..=m {
            let k = -i - j;
            if k.abs() > m {
                continue;
            }
            let c = inv_one_plus::<C>(i)?
                .mul(&inv_one_plus(j)?)
                .mul(&inv_one_plus(k)?)
                .mul(&third);
            p.add_term(t1(i).mul(&t1(j)).mul(&t1(k)), c);
        }
    }
    Ok(p)
}

/// `-sum_{i,j} (1-q^{i+j}) / ((1+q^i)(1+q^j)) t_i t_j z^{-i-j}`.
fn tau1_quadratic<C: Coeff>(m: i32, w: Window) -> Result<Series<C>> {
    let mut s = Series::zero(w);
    for i in -m..=m {
        for j in -m..=m {
            let c = C::one()
                .sub(&C::q_pow((i + j) as i64))
                .mul(&inv_one_plus(i)?)
                .mul(&inv_one_plus(j)?)
                .neg();
            s.add_at(i + j, Poly::term(c, t1(i).mul(&t1(j))));
        }
    }
    Ok(s)
}

/// The displayed `∂_{τ_3} t(z)` for `N = 2`: `3/2` times the `τ_1` sum plus
/// the four-index sum.
pub fn tau3_formula<C: Coeff>(m: i32, w: Window) -> Result<Series<C>> {
    let mut s = tau1_quadratic::<C>(m, w)?.scale(&C::from_rat(&rat(3, 2)));
    for i in -m..=m {
        for j in -m..=m {
            let ij = C::one()
                .add(&C::q_pow((i + j) as i64))
                .mul(&C::one().add(&C::q_pow(-(i + j) as i64)));
            let base = inv_one_plus::<C>(i)?
                .mul(&inv_one_plus(j)?)
                .mul(&ij.inv()?.mul(&C::one().add(&C::q_pow((i + j) as i64))));
            for k in -m..=m {
                let c3 = C::one()
                    .sub(&C::q_pow((i + j + k) as i64))
                    .mul(&inv_one_plus(i + j + k)?);
                let c = base.mul(&c3);
                if c.is_zero() {
                    continue;
                }
                for l in -m..=m {
                    s.add_at(
                        i + j + k + l,
                        Poly::term(c.clone(), t1(i).mul(&t1(j)).mul(&t1(k)).mul(&t1(l))),
                    );
                }
            }
        }
    }
    Ok(s)
}

/// `J_2 = sum_{i>0} i q^i / (1 - q^{2i}) t_i t_{-i}` up to `m_expr`.
pub fn j2<C: Coeff>(w: Window) -> Result<Functional<C>> {
    let mut p = Poly::zero();
    for i in 1..=w.m_expr {
        let c = C::from_i64(i as i64)
            .mul_qpow(i as i64)
            .div(&C::one().sub(&C::q_pow(2 * i as i64)))?;
        p.add_term(t1(i).mul(&t1(-i)), c);
    }
    Ok(Functional::new(p, w))
}

pub struct KdvSuite {
    pub n: u16,
    pub m_pt: i32,
    pub seed: u64,
    pub flows: Vec<u32>,
    pub hams: Vec<u32>,
}

impl KdvSuite {
    pub fn new(n: u16, m_pt: i32, seed: u64) -> Self {
        let (flows, hams) = default_orders(n);
        KdvSuite {
            n,
            m_pt,
            seed,
            flows,
            hams,
        }
    }

    pub fn run<C: Coeff>(&self, ck: &mut Checker) {
        let (n, m) = (self.n, self.m_pt);
        let ni = n as i32;
        ck.check(
            "root^N = L at a random point (K=8)",
            "Lemma: unique N-th root P = D + ...",
            || check_root_random::<C>(n, m, 8, self.seed),
        );
        ck.check(
            "first flow equals closed form",
            "first flow: dt_i = t_i(b(zq^{N-i}) - b(z)) + t_{i+1}(zq) - t_{i+1}(z)",
            || {
                let w = Window::point(m, ni);
                let s = KdVState::<C>::new(n, w, true)?;
                let f = qkdv_flow(&s, 1)?;
                let want = qkdv1_formula::<C>(n, w, true)?;
                for (i, wi) in s.fields().zip(&want) {
                    expect_series_eq(&format!("dt_{i}"), &f.series(Family::T, i), wi)?;
                }
                Ok(())
            },
        );
        ck.check(
            "t_N is constant along the flows",
            "reduction t_N = 1",
            || {
                let s = KdVState::<C>::new(n, Window::point(m, ni), false)?;
                let f = qkdv_flow(&s, 1)?;
                expect(f.series(Family::T, n).is_zero(), || "dt_N != 0".into())
            },
        );
        ck.check(
            "flow n = N vanishes",
            "tau_n trivial for n divisible by N",
            || {
                let s = KdVState::<C>::new(n, Window::point(m.min(2), 2 * ni), true)?;
                expect(qkdv_flow(&s, n as u32)?.is_zero(), || {
                    "flow n=N is nonzero".into()
                })
            },
        );
        ck.check("H_1 = -t_1[0]", "H_1 = N b[0] = -t_1[0]", || {
            let s = KdVState::<C>::new(n, Window::point(m, 1), true)?;
            let h = hamiltonian_res(&s, 1)?;
            expect_poly_eq(
                "H_1",
                &h.value,
                &Poly::term(C::one().neg(), Monomial::gen(Gen::t(1, 0))),
            )
        });
        if n == 2 {
            self.n2_formulas::<C>(ck);
        }
        for &k in &self.flows {
            ck.check(
                format!(
                    "heredity n={k}: d_tau L = {{L,H_{}}}_1 = {{L,H_{k}}}_2",
                    k + n as u32
                ),
                "bihamiltonian: d_tau_n L = {L,H_{n+N}}_1 = {L,H_n}_2",
                || self.heredity::<C>(k),
            );
        }
        let hams = self.hams.clone();
        ck.check(
            format!("{{H_a,H_b}}_1 = {{H_a,H_b}}_2 = 0 for a,b in {hams:?}"),
            "hamiltonians commute under both brackets",
            || self.commuting_hamiltonians::<C>(),
        );
        if self.flows.len() >= 2 {
            let (a, b) = (self.flows[0], self.flows[1]);
            ck.check(
                format!("[d_tau{a}, d_tau{b}] = 0 on window generators"),
                "flows commute",
                || self.flows_commute::<C>(a, b),
            );
        }
        for &a in &self.flows {
            for &b in &self.flows {
                ck.check(
                    format!("d_tau{a} Res L^{b}/N = (1-D) g"),
                    "conserved densities: time derivative is a total difference",
                    || self.conservation::<C>(a, b),
                );
            }
        }
        if n == 2 {
            ck.check(
                "{J_2,H_1} = {J_2,H_3} = 0 under both brackets",
                "J_2 = sum i q^i/(1-q^{2i}) t_i t_-i",
                || self.j2_commutes::<C>(),
            );
        }
        ck.check(
            "Int h_n = (1/n) Int Res L^{n/N} with witness, n <= 3",
            "second construction of hamiltonians",
            || {
                let s = KdVState::<C>::new(n, Window::point(m.min(2), 3), true)?;
                for k in 1..=3 {
                    let wit = hamiltonian_cwf(&s, k)?;
                    expect_series_eq(
                        &format!("(1-D)g_{k}"),
                        &wit.g.one_minus_d(),
                        &wit.h.sub(&wit.res),
                    )?;
                }
                Ok(())
            },
        );
    }

    pub fn n2_formulas<C: Coeff>(&self, ck: &mut Checker) {
        let m = self.m_pt;
        ck.check(
            "H_3 = -t[0]/2 + triple sum",
            "H_3 = -t_0/2 + (1/3) sum t_i t_j t_k / ((1+q^i)(1+q^j)(1+q^k))",
            || {
                let s = KdVState::<C>::new(2, Window::point(m, 2), true)?;
                let h = hamiltonian_res(&s, 3)?.value;
                let cubic = h.degree_part(3);
                expect_poly_eq("cubic part", &cubic, &h3_cubic_formula::<C>(m)?)?;
                expect_poly_eq(
                    "rest",
                    &h.sub(&cubic),
                    &Poly::term(C::from_rat(&rat(-1, 2)), t1(0)),
                )
            },
        );
        ck.check(
            "d_tau1 t(z) mode formula",
            "d_tau1 t = -sum (1-q^{i+j})/((1+q^i)(1+q^j)) t_i t_j z^{-i-j}",
            || {
                let w = Window::point(m, 2);
                let s = KdVState::<C>::new(2, w, true)?;
                let f = qkdv_flow(&s, 1)?.series(Family::T, 1);
                expect_series_eq("d_tau1 t", &f, &tau1_quadratic::<C>(m, w)?)
            },
        );
        ck.check(
            "d_tau3 t(z) mode formula",
            "d_tau3 t = -(3/2) sum ... + four-index sum",
            || {
                let w = Window::point(m, 4);
                let s = KdVState::<C>::new(2, w, true)?;
                let f = qkdv_flow(&s, 3)?.series(Family::T, 1);
                expect_series_eq("d_tau3 t", &f, &tau3_formula::<C>(m, w)?)
            },
        );
    }

    pub fn heredity<C: Coeff>(&self, k: u32) -> Result<()> {
        let n = self.n as u32;
        let w = Window::inflated(self.m_pt, k + n, (k + n - 1) as i32);
        let s = KdVState::<C>::new(self.n, w, true)?;
        let flow = qkdv_flow(&s, k)?;
        let h_first = hamiltonian_res(&s, k + n)?;
        let h_second = hamiltonian_res(&s, k)?;
        let (k1, k2) = (KernelSet::kdv1(self.n, true), KernelSet::kdv2(self.n, true));
        for i in s.fields() {
            let lax = flow.series(Family::T, i).at_point();
            let b1 = field_bracket(Family::T, i, &h_first, &k1)?;
            let b2 = field_bracket(Family::T, i, &h_second, &k2)?;
            expect_series_eq(&format!("{{t_{i}, H_{}}}_1 vs Lax", k + n), &b1, &lax)?;
            expect_series_eq(&format!("{{t_{i}, H_{k}}}_2 vs Lax"), &b2, &lax)?;
        }
        Ok(())
    }

    pub fn commuting_hamiltonians<C: Coeff>(&self) -> Result<()> {
        let top = *self.hams.iter().max().unwrap();
        let w = Window::inflated(self.m_pt, top, top as i32 - 1);
        let s = KdVState::<C>::new(self.n, w, true)?;
        let hs: Vec<Functional<C>> = self
            .hams
            .iter()
            .map(|&h| hamiltonian_res(&s, h))
            .collect::<Result<_>>()?;
        for ks in [KernelSet::kdv1(self.n, true), KernelSet::kdv2(self.n, true)] {
            for a in 0..hs.len() {
                for b in a + 1..hs.len() {
                    let v = bracket(&hs[a], &hs[b], &ks)?;
                    expect_poly_zero(
                        &format!("{{H_{},H_{}}} in {}", self.hams[a], self.hams[b], ks.name()),
                        &v.value,
                    )?;
                }
            }
        }
        Ok(())
    }

    pub fn flows_commute<C: Coeff>(&self, a: u32, b: u32) -> Result<()> {
        let n = self.n as u32;
        let w = Window::inflated(self.m_pt, a + b, (a.max(b) + n - 1) as i32);
        let s = KdVState::<C>::new(self.n, w, true)?;
        let (fa, fb) = (qkdv_flow(&s, a)?, qkdv_flow(&s, b)?);
        let gens: Vec<Gen> = s
            .fields()
            .flat_map(|i| (-self.m_pt..=self.m_pt).map(move |m| Gen::t(i, m)))
            .collect();
        let c = fa.commutator(&fb, gens, &w.at_point())?;
        match c.map.iter().next() {
            None => Ok(()),
            Some((g, p)) => Err(Error::CheckFailed(format!("[d_a,d_b] {g} = {p}"))),
        }
    }

    /// `d_tau_a Res L^{b/N}` on the modes `|j| <= (a+1) m_pt` it is exact on,
    /// written as `(1 - D) g`.
    pub fn conservation<C: Coeff>(&self, a: u32, b: u32) -> Result<()> {
        let n = self.n as u32;
        let w = Window::inflated(self.m_pt, a + b, (a + n - 1).max(b) as i32);
        let s = KdVState::<C>::new(self.n, w, true)?;
        let flow = qkdv_flow(&s, a)?;
        let rho = s.res_power(b)?;
        let reach = w.m_expr - (b as i32 - 1) * self.m_pt;
        let mut drho = flow.apply_series(&rho, &w.at_point())?;
        drho = drho.map_modes(|j, p| {
            if j.abs() <= reach {
                p.clone()
            } else {
                Poly::zero()
            }
        });
        let g = drho.total_difference_witness()?;
        expect_series_eq("(1-D)g", &g.one_minus_d(), &drho)
    }

    pub fn j2_commutes<C: Coeff>(&self) -> Result<()> {
        let w = Window::inflated(self.m_pt, 3, 2);
        let s = KdVState::<C>::new(2, w, true)?;
        let j = j2::<C>(w)?;
        for h in [1, 3] {
            let hh = hamiltonian_res(&s, h)?;
            for ks in [KernelSet::kdv1(2, true), KernelSet::kdv2(2, true)] {
                let v = bracket(&j, &hh, &ks)?;
                expect_poly_zero(&format!("{{J_2,H_{h}}} in {}", ks.name()), &v.value)?;
            }
        }
        Ok(())
    }
}
