use crate::coeffs::Coeff;
use crate::error::{Error, Result};
use crate::hierarchy_kdv::{hamiltonian_res, qkdv_flow_op, KdVState};
use crate::modering::{Family, Gen, Poly, Window};
use crate::poisson::{bracket, field_bracket, Functional, KernelSet};
use crate::report::{expect, expect_poly_eq, expect_series_eq, Checker};

use super::*;

pub struct MkdvSuite {
    pub n: u16,
    pub m_pt: i32,
    pub flows: Vec<u32>,
    pub degcap: u32,
}

impl MkdvSuite {
    pub fn new(n: u16, m_pt: i32) -> Self {
        let flows = if n == 2 { vec![1, 3] } else { vec![1, 2] };
        MkdvSuite {
            n,
            m_pt,
            flows,
            degcap: 3,
        }
    }

    fn point<C: Coeff>(&self, k: i32) -> Result<(MKdVState<C>, LaxPair<C>)> {
        let s = MKdVState::new(self.n, Window::point(self.m_pt, k.max(1)), false)?;
        let lp = s.lax_pair()?;
        Ok((s, lp))
    }

    pub fn run<C: Coeff>(&self, ck: &mut Checker) {
        let (n, m) = (self.n, self.m_pt);
        let big = n as u32;
        ck.check(
            "[tL,tP] = 0 and tL^N = diag(L_1..L_N)",
            "unique diagonal tP commuting with the cyclic tL",
            || {
                self.point::<C>(*self.flows.iter().max().unwrap() as i32)
                    .map(|_| ())
            },
        );
        for &k in &self.flows {
            ck.check(
                format!("t_{k} flow induces the tau_{k} flow on every L_i"),
                "mKdV hierarchy is the pull-back of q-KdV along each Miura map",
                || self.pullback::<C>(k),
            );
        }
        ck.check(
            format!("t_{big} flow vanishes"),
            "d_t_n trivial for n divisible by N",
            || {
                let s = MKdVState::<C>::new(n, Window::point(m, n as i32 - 1), false)?;
                let lp = s.lax_pair()?;
                expect(qmkdv_flow(&s, &lp, big)?.is_zero(), || {
                    "flow n=N is nonzero".into()
                })
            },
        );
        for &k in &self.flows {
            ck.check(
                format!("d_t{k} Lam_i = {{Lam_i, H_{k}}} (bold H)"),
                "hamiltonian form of the mKdV flows with bold H_n = (1/n) Int Tr Res tP^n",
                || self.hamiltonian_form::<C>(k),
            );
        }
        ck.check(
            "{mu*F, mu*G} = mu*{F,G}_2 for F, G = t_i[a], t_j[b]",
            "first Miura map is hamiltonian for the second bracket",
            || self.homomorphism::<C>(),
        );
        ck.check(
            "mu*H_1 = bold H_1",
            "first Miura map sends H_n to bold H_n",
            || self.pulled_hamiltonian::<C>(1),
        );
        ck.check(
            "bold H_n != 0 for n not divisible by N",
            "bold H_n nonzero iff N does not divide n",
            || {
                let top = *self.flows.iter().max().unwrap();
                let (s, lp) = self.point::<C>(top as i32)?;
                for &k in &self.flows {
                    let h = mkdv_hamiltonian(&s, &lp, k)?;
                    expect(!h.is_zero(), || format!("bold H_{k} = 0"))?;
                }
                Ok(())
            },
        );
        if self.flows.len() >= 2 {
            let (a, b) = (self.flows[0], self.flows[1]);
            ck.check(
                format!("[d_t{a}, d_t{b}] = 0 on window generators"),
                "mKdV flows commute",
                || self.commute::<C>(a, b),
            );
        }
        ck.check(
            "d_t_n (Lam_1 ... Lam_N) = 0",
            "the product of the Lam_i is conserved",
            || self.product::<C>(),
        );
        ck.check(
            format!(
                "reduced Lam_1...Lam_N = 1 is preserved (degree cap {})",
                self.degcap
            ),
            "restriction to Lam_1 ... Lam_N = 1",
            || self.reduced::<C>(),
        );
    }

    fn jet_state<C: Coeff>(&self, m_expr: i32) -> Result<MKdVState<C>> {
        MKdVState::new(
            self.n,
            Window::point(self.m_pt, 1).with_jet(1, m_expr),
            false,
        )
    }

    fn pullback<C: Coeff>(&self, k: u32) -> Result<()> {
        let n = self.n;
        let (s, lp) = self.point::<C>(k as i32 - 1)?;
        let x = qmkdv_flow(&s, &lp, k)?;
        let sj = self.jet_state::<C>((k as i32 + 2 * n as i32) * self.m_pt)?;
        let kdv_depth = s.w.with_k(k as i32 - 1 + n as i32);
        for i in 1..=n as i32 {
            let want = qkdv_flow_op(
                &KdVState::from_op(n, s.miura(i).with_window(kdv_depth), false)?,
                k,
            )?;
            let l = sj.miura(i);
            for d in 0..n as i32 {
                let got = derive_series(&x, &l.coeff(d), n as u32)?;
                expect_series_eq(&format!("dL_{i} at D^{d}"), &got, &want.coeff(d))?;
            }
        }
        Ok(())
    }

    fn hamiltonian_form<C: Coeff>(&self, k: u32) -> Result<()> {
        let (s, lp) = self.point::<C>(k as i32 - 1)?;
        let v = qmkdv_velocities(&s, &lp, k)?;
        let w = Window::inflated(self.m_pt, k + 1, k as i32);
        let sj = MKdVState::<C>::new(self.n, w, false)?;
        let h = mkdv_hamiltonian(&sj, &sj.lax_pair()?, k)?;
        let ks = KernelSet::mkdv(self.n);
        for i in 1..=self.n {
            let b = field_bracket(Family::Lam, i, &h, &ks)?;
            expect_series_eq(
                &format!("{{Lam_{i}, H_{k}}} vs d_t{k} Lam_{i}"),
                &b,
                &v[i as usize - 1],
            )?;
        }
        Ok(())
    }

    fn homomorphism<C: Coeff>(&self) -> Result<()> {
        let (n, m) = (self.n, self.m_pt);
        let wj = Window::inflated(m, n as u32, 1);
        let sj = MKdVState::<C>::new(n, wj, false)?;
        let images = sj.t_images(1);
        let sp = MKdVState::<C>::new(n, wj.at_point(), false)?;
        let map = pullback_map(&sp, 1);
        let wt = Window::point(n as i32 * m, 1);
        let (ks_l, ks_t) = (KernelSet::mkdv(n), KernelSet::kdv2(n, false));
        let mut nonzero = 0;
        for i in 1..=n {
            for j in 1..=n {
                for a in -m..=m {
                    for b in -m..=m {
                        let f = Functional::new(images[i as usize - 1].coeff(a), wj);
                        let g = Functional::new(images[j as usize - 1].coeff(b), wj);
                        let lhs = bracket(&f, &g, &ks_l)?.at_point();
                        let tb: Poly<C> = ks_t.mode_bracket(&Gen::t(i, a), &Gen::t(j, b), &wt)?;
                        let rhs = pull_back(&tb, &map, &wj.at_point());
                        expect_poly_eq(&format!("{{t_{i}[{a}], t_{j}[{b}]}}"), &lhs, &rhs)?;
                        nonzero += !lhs.is_zero() as usize;
                    }
                }
            }
        }
        expect(nonzero > 0, || "every bracket was zero".into())
    }

    fn pulled_hamiltonian<C: Coeff>(&self, k: u32) -> Result<()> {
        let (s, lp) = self.point::<C>(k as i32)?;
        let bold = mkdv_hamiltonian(&s, &lp, k)?;
        let ws = Window::point(self.n as i32 * self.m_pt, k as i32);
        let h = hamiltonian_res(&KdVState::<C>::new(self.n, ws, false)?, k)?;
        let pulled = pull_back(&h.value, &pullback_map(&s, 1), &s.w);
        expect_poly_eq(&format!("mu*H_{k} - bold H_{k}"), &pulled, &bold.value)
    }

    fn commute<C: Coeff>(&self, a: u32, b: u32) -> Result<()> {
        let w = Window::inflated(self.m_pt, a + b, a.max(b) as i32 - 1);
        let s = MKdVState::<C>::new(self.n, w, false)?;
        let lp = s.lax_pair()?;
        let (xa, xb) = (qmkdv_flow(&s, &lp, a)?, qmkdv_flow(&s, &lp, b)?);
        let gens: Vec<Gen> = s
            .fields()
            .flat_map(|i| (-self.m_pt..=self.m_pt).map(move |m| Gen::lam(i, m)))
            .collect();
        let c = xa.commutator(&xb, gens, &w.at_point())?;
        match c.map.iter().next() {
            None => Ok(()),
            Some((g, p)) => Err(Error::CheckFailed(format!("[d_a,d_b] {g} = {p}"))),
        }
    }

    fn product<C: Coeff>(&self) -> Result<()> {
        let n = self.n;
        let top = *self.flows.iter().max().unwrap();
        let (s, lp) = self.point::<C>(top as i32 - 1)?;
        let sj = self.jet_state::<C>((top as i32 + 2 * n as i32) * self.m_pt)?;
        let prod = (2..=n as i32).fold(sj.lam(1).clone(), |a, j| a.mul(sj.lam(j)));
        for &k in &self.flows {
            let x = qmkdv_flow(&s, &lp, k)?;
            let d = derive_series(&x, &prod, n as u32)?;
            expect(d.is_zero(), || format!("d_t{k} of the product is nonzero"))?;
        }
        Ok(())
    }

    /// On the reduced tuple, the Lax velocity of `Λ_N` equals the chain-rule
    /// derivative of `(Λ_1 ... Λ_{N-1})^{-1}`.
    fn reduced<C: Coeff>(&self) -> Result<()> {
        let n = self.n;
        let top = *self.flows.iter().max().unwrap();
        let w = Window::point(self.m_pt, top as i32 - 1).with_degcap(self.degcap);
        let s = MKdVState::<C>::new(n, w, true)?;
        let lp = s.lax_pair()?;
        let sj = MKdVState::<C>::new(n, w.with_jet(1, (self.degcap as i32 + 1) * self.m_pt), true)?;
        for &k in &self.flows {
            let v = qmkdv_velocities(&s, &lp, k)?;
            let x = qmkdv_flow(&s, &lp, k)?;
            let reach = sj.w.m_expr - (self.degcap as i32 - 1) * self.m_pt;
            let got = derive_series(&x, sj.lam(n as i32), self.degcap)?;
            expect_series_eq(
                &format!("d_t{k} Lam_{n}"),
                &got,
                &restrict(&v[n as usize - 1], reach),
            )?;
        }
        Ok(())
    }
}
