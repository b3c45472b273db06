use crate::coeffs::{Coeff, HSeries, QRat, Ring};
use crate::error::{Error, Result};
use crate::hierarchy_kdv::{hamiltonian_res, KdVState};
use crate::modering::{Family, Gen, Poly, Series, Window};
use crate::poisson::KernelSet;
use crate::report::{expect, expect_poly_eq, Checker};

use super::*;

pub struct LimitsSuite {
    pub n: u16,
    pub m_pt: i32,
    /// `h` order budget.
    pub order: i64,
    /// Classical `H_n^{(0)}` found by the hamiltonian check.
    pub h0: Vec<(u32, Poly<QRat>)>,
}

/// `c` with `leading = c target`, from one probe with a nonzero target.
fn probe_constant(leading: &Poly<QRat>, target: &Poly<QRat>) -> Result<QRat> {
    let (m, t) = target
        .first_term()
        .ok_or_else(|| Error::Config("probe target is zero".into()))?;
    let c = leading.coeff(m).div(t)?;
    expect(!c.is_zero(), || {
        format!("probe gives a zero constant for {target}")
    })?;
    Ok(c)
}

/// Orders below `lead` vanish and the `h^lead` coefficient equals `target`.
fn expect_leading(what: &str, s: &Poly<HSeries>, lead: i64, target: &Poly<QRat>) -> Result<()> {
    for k in 0..lead {
        let c = h_coeff(s, k)?;
        expect(c.is_zero(), || format!("{what}: h^{k} coefficient {c}"))?;
    }
    expect_poly_eq(&format!("{what} at h^{lead}"), &h_coeff(s, lead)?, target)
}

impl LimitsSuite {
    pub fn new(n: u16, m_pt: i32) -> Self {
        LimitsSuite {
            n,
            m_pt,
            order: 6,
            h0: Vec::new(),
        }
    }

    pub fn run(&mut self, ck: &mut Checker) {
        let m = self.m_pt;
        let order = self.order;
        ck.check(
            "{t[a],t[b]}_2 -> h^3 [(a-b)u[a+b] + (a^3/2) delta_{a+b,0}]",
            "second bracket tends to Virasoro",
            || {
                let w = Window::point(2 * m, 1);
                let ks = KernelSet::kdv2(2, true);
                let lim = |a: i32, b: i32| -> Result<Poly<HSeries>> {
                    let p: Poly<QRat> = ks.mode_bracket(&Gen::t(1, a), &Gen::t(1, b), &w)?;
                    substitute_h(&p, order, classical_image)
                };
                let c = probe_constant(&h_coeff(&lim(1, 0)?, 3)?, &virasoro(1, 0))?;
                for a in -m..=m {
                    for b in -m..=m {
                        expect_leading(
                            &format!("{{t[{a}],t[{b}]}}_2"),
                            &lim(a, b)?,
                            3,
                            &virasoro(a, b).scale(&c),
                        )?;
                    }
                }
                expect(c.is_one(), || format!("global constant {c}"))
            },
        );
        ck.check(
            "{t[a],t[b]}_1 -> 2ha delta_{a+b,0}",
            "first bracket tends to the first KdV structure",
            || {
                let w = Window::point(2 * m, 1);
                let ks = KernelSet::kdv1(2, true);
                for a in -m..=m {
                    for b in -m..=m {
                        let p: Poly<QRat> = ks.mode_bracket(&Gen::t(1, a), &Gen::t(1, b), &w)?;
                        let want = if a + b == 0 {
                            Poly::constant(QRat::from_i64(2 * a as i64))
                        } else {
                            Poly::zero()
                        };
                        expect_leading(
                            &format!("{{t[{a}],t[{b}]}}_1"),
                            &substitute_h(&p, order, classical_image)?,
                            1,
                            &want,
                        )?;
                    }
                }
                Ok(())
            },
        );
        for n in [2u16, 3] {
            ck.check(
                format!("N={n}: {{Lam_i[a],Lam_j[b]}} -> h a H_ij delta_{{a+b,0}}, H_ii = -(N-1)/N, H_ij = 1/N"),
                "mKdV bracket tends to the Heisenberg algebra",
                || self.heisenberg(n),
            );
        }
        let mut h0 = Vec::new();
        ck.check(
            "H_n = const + h^{n+1} H_n^(0), H_2 constant (N=2)",
            "h-expansion of the hamiltonians",
            || {
                for k in 1..=3u32 {
                    let s = KdVState::<QRat>::new(2, Window::point(m, k as i32), true)?;
                    let hn = hamiltonian_res(&s, k)?.value;
                    let lim = substitute_h(&hn, k as i64 + 3, classical_image)?;
                    for j in 1..=k as i64 {
                        let c = h_coeff(&lim, j)?;
                        expect(c.is_zero(), || format!("H_{k} at h^{j}: {c}"))?;
                    }
                    let lead = h_coeff(&lim, k as i64 + 1)?;
                    if k % 2 == 1 {
                        expect(!lead.is_zero(), || format!("H_{k}^(0) = 0"))?;
                    } else {
                        expect(
                            lead.is_zero() && h_coeff(&lim, k as i64 + 2)?.is_zero(),
                            || format!("H_{k} is not constant"),
                        )?;
                    }
                    h0.push((k, lead));
                }
                let u0: Poly<QRat> = Poly::gen(u(0));
                expect_poly_eq("H_1^(0)", &h0[0].1, &u0)
            },
        );
        self.h0 = h0;
        for reduced in [false, true] {
            let n = if reduced { 2 } else { self.n };
            let name = if reduced {
                "sine-Gordon: A_1(zq) - A_1 - (Lam_2/Lam_1 - 1)A_1 -> h[d a_1 - 2 v_1 a_1]"
                    .to_string()
            } else {
                format!("N={n}: A_i(zq) - A_i - (Lam_{{i-1}}/Lam_i - 1)A_i -> h[d a_i - (v_i - v_{{i-1}}) a_i]")
            };
            ck.check(
                name,
                "classical Toda limit d a_i = (v_i - v_{i-1}) a_i",
                || self.toda(n, reduced),
            );
        }
    }

    fn heisenberg(&self, n: u16) -> Result<()> {
        let m = self.m_pt;
        let w = Window::point(2 * m, 1);
        let ks = KernelSet::mkdv(n);
        let lim = |i: u16, j: u16, a: i32, b: i32| -> Result<Poly<HSeries>> {
            let p: Poly<QRat> = ks.mode_bracket(&Gen::lam(i, a), &Gen::lam(j, b), &w)?;
            substitute_h(&p, self.order, classical_image)
        };
        let c = probe_constant(
            &h_coeff(&lim(1, 1, 1, -1)?, 1)?,
            &heisenberg(n, 1, 1, 1, -1),
        )?;
        for i in 1..=n {
            for j in 1..=n {
                for a in -m..=m {
                    for b in -m..=m {
                        let t = heisenberg(n, i, j, a, b).scale(&c);
                        expect_leading(
                            &format!("{{Lam_{i}[{a}],Lam_{j}[{b}]}}"),
                            &lim(i, j, a, b)?,
                            1,
                            &t,
                        )?;
                    }
                }
            }
        }
        expect(c.is_one(), || format!("global constant {c}"))
    }

    /// `D` acts on mode `j` as `q^{-j} = e^{-hj}`, so the `h^1` term of
    /// `A(zq) - A(z)` is `-j a[j]`, the mode form of `z d/dz a`.
    fn toda(&self, n: u16, reduced: bool) -> Result<()> {
        let m = self.m_pt;
        let w = Window::point(m, 1).with_degcap(3);
        let lam: Vec<Series<QRat>> = if reduced {
            let l = Series::gen_series(w, Family::Lam, 1);
            vec![l.clone(), l.inverse()?]
        } else {
            (1..=n)
                .map(|i| Series::gen_series(w, Family::Lam, i))
                .collect()
        };
        let vfield = |i: u16| -> Poly<QRat> {
            if reduced && i == 2 {
                Poly::gen(v(1, 0)).neg()
            } else {
                Poly::gen(v(i, 0))
            }
        };
        for i in 1..=n {
            let prev = if i == 1 { n } else { i - 1 };
            let ai = Series::gen_series(w, Family::A, i);
            let ratio = lam[prev as usize - 1].mul(&lam[i as usize - 1].inverse()?);
            let e = ai
                .q_shift(1)
                .sub(&ai)
                .sub(&ratio.sub(&Series::one(w)).mul(&ai));
            for j in -m..=m {
                let s = substitute_h(&e.coeff(j), 3, classical_image)?;
                let mut want = Poly::term(
                    QRat::from_i64(-j as i64),
                    crate::modering::Monomial::gen(a(i, j)),
                );
                for p in -m..=m {
                    if (j - p).abs() <= m {
                        let dv = vfield(i).sub(&vfield(prev));
                        let dv = dv.map_gens(|g| g.with_mode(p));
                        want = want.sub(&dv.mul_exact(&Poly::gen(a(i, j - p))));
                    }
                }
                expect_leading(&format!("mode {j} of the a_{i} equation"), &s, 1, &want)?;
            }
        }
        Ok(())
    }
}
