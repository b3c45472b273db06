use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeffs::{rat, Coeff};
use crate::hierarchy_kdv::{hamiltonian_res, KdVState};
use crate::modering::{Family, Gen, Monomial, Poly, Window};
use crate::report::{expect, expect_poly_eq, expect_poly_zero, Checker};

use super::*;

/// Three random terms of degree 1 or 2 in `t_1..t_comps` over `|m| <= m_pt`.
pub fn random_functional<C: Coeff>(
    rng: &mut ChaCha8Rng,
    comps: u16,
    m_pt: i32,
    w: Window,
) -> Functional<C> {
    let mut p = Poly::zero();
    for _ in 0..3 {
        let deg = rng.gen_range(1..=2);
        let mut mono = Monomial::one();
        for _ in 0..deg {
            let g = Gen::t(rng.gen_range(1..=comps), rng.gen_range(-m_pt..=m_pt));
            mono = mono.mul(&Monomial::gen(g));
        }
        p.add_term(
            mono,
            C::from_rat(&rat(rng.gen_range(-3..=3), rng.gen_range(1..=2))),
        );
    }
    Functional::new(p, w)
}

/// Random `X = sum x_i D^{-i}` with every mode `|m| <= m_pt` of each `x_i` set.
pub fn random_x<C: Coeff>(
    rng: &mut ChaCha8Rng,
    n: u16,
    m_pt: i32,
) -> BTreeMap<i32, BTreeMap<i32, C>> {
    (1..n as i32)
        .map(|i| {
            let modes = (-m_pt..=m_pt)
                .map(|m| (m, C::from_i64(rng.gen_range(1..=3))))
                .collect();
            (i, modes)
        })
        .collect()
}

pub struct PoissonSuite {
    pub n: u16,
    pub m_pt: i32,
    pub seed: u64,
    pub samples: usize,
}

impl PoissonSuite {
    pub fn new(n: u16, m_pt: i32, seed: u64) -> Self {
        PoissonSuite {
            n,
            m_pt,
            seed,
            samples: 2,
        }
    }

    fn sets(&self) -> Vec<KernelSet> {
        let (a, b) = (KernelSet::kdv1(self.n, true), KernelSet::kdv2(self.n, true));
        let c = a.plus(rat(1, 1), &b);
        vec![a, b, c]
    }

    pub fn run<C: Coeff>(&self, ck: &mut Checker) {
        let (n, m) = (self.n, self.m_pt);
        ck.check(
            "mode tables are antisymmetric",
            "{x,y} = -{y,x} on generator modes",
            || {
                let w = Window::point(m, 4);
                for reduced in [true, false] {
                    for ks in [KernelSet::kdv1(n, reduced), KernelSet::kdv2(n, reduced)] {
                        let top = if reduced { n - 1 } else { n };
                        for i in 1..=top {
                            for j in 1..=top {
                                for a in -m..=m {
                                    for b in -m..=m {
                                        let (x, y) = (Gen::t(i, a), Gen::t(j, b));
                                        let l: Poly<C> = ks.mode_bracket(&x, &y, &w)?;
                                        let r: Poly<C> = ks.mode_bracket(&y, &x, &w)?;
                                        expect_poly_eq(
                                            &format!("{} {x} {y}", ks.name()),
                                            &l,
                                            &r.neg(),
                                        )?;
                                    }
                                }
                            }
                        }
                    }
                }
                Ok(())
            },
        );
        if n == 2 {
            ck.check(
                "N=2 mode tables",
                "{t[a],t[b]}_1 = (q^a - q^-a) delta_{a+b,0}",
                || {
                    let w = Window::point(m, 4);
                    let ks = KernelSet::kdv1(2, true);
                    for a in -m..=m {
                        for b in -m..=m {
                            let got: Poly<C> = ks.mode_bracket(&Gen::t(1, a), &Gen::t(1, b), &w)?;
                            let want = if a + b == 0 {
                                Poly::constant(C::q_pow(a as i64).sub(&C::q_pow(-a as i64)))
                            } else {
                                Poly::zero()
                            };
                            expect_poly_eq(&format!("{{t[{a}],t[{b}]}}_1"), &got, &want)?;
                        }
                    }
                    Ok(())
                },
            );
        }
        ck.check(
            "printed first bracket is (-1)^N times kdv1",
            "first bracket kernel with t_N read as the D^0 coefficient of L",
            || {
                let w = Window::point(m, 4);
                let (a, b) = (KernelSet::kdv1(n, false), KernelSet::kdv1_printed(n, false));
                let s = if n % 2 == 0 { C::one() } else { C::one().neg() };
                for i in 1..n {
                    for j in 1..n {
                        for d in -m..=m {
                            let (x, y) = (Gen::t(i, d), Gen::t(j, -d));
                            let p: Poly<C> = a.mode_bracket(&x, &y, &w)?;
                            expect_poly_eq(
                                &format!("{x} {y}"),
                                &p.scale(&s),
                                &b.mode_bracket(&x, &y, &w)?,
                            )?;
                        }
                    }
                }
                Ok(())
            },
        );
        ck.check(
            "functional brackets are antisymmetric",
            "{F,G} = -{G,F}",
            || {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                let w = Window::inflated(m, 2, 4);
                for ks in self.sets() {
                    for _ in 0..self.samples {
                        let f = random_functional::<C>(&mut rng, n - 1, m, w);
                        let g = random_functional::<C>(&mut rng, n - 1, m, w);
                        let (a, b) = (bracket(&f, &g, &ks)?, bracket(&g, &f, &ks)?);
                        expect_poly_eq(&ks.name(), &a.value, &b.value.neg())?;
                    }
                }
                Ok(())
            },
        );
        for ks in self.sets() {
            ck.check(
                format!("Jacobi for {} on random degree <= 2 functionals", ks.name()),
                "brackets are Poisson and compatible",
                || {
                    let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                    let w = Window {
                        m_pt: m,
                        m_expr: 4 * m,
                        jet: 2,
                        k: 4,
                        degcap: None,
                    };
                    for _ in 0..self.samples {
                        let f = random_functional::<C>(&mut rng, n - 1, m, w);
                        let g = random_functional::<C>(&mut rng, n - 1, m, w);
                        let h = random_functional::<C>(&mut rng, n - 1, m, w);
                        expect_poly_zero("jacobiator", &jacobiator(&f, &g, &h, &ks)?)?;
                    }
                    Ok(())
                },
            );
        }
        ck.check(
            "{l_X,l_Y}_1 = Int Res(L[X,Y]) on random X, Y",
            "linear functionals l_X(L) = Int Res(LX)",
            || {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                let ks = KernelSet::kdv1(n, true);
                let mut nonzero = 0;
                for _ in 0..3 * self.samples {
                    let (x, y) = (random_x::<C>(&mut rng, n, m), random_x::<C>(&mut rng, n, m));
                    let (lhs, rhs) = linear_functional_bracket(n, &x, &y, m, &ks)?;
                    expect_poly_eq("{l_X,l_Y}_1 - Int Res(L[X,Y])", &lhs, &rhs)?;
                    nonzero += !lhs.is_zero() as usize;
                }
                expect(nonzero > 0, || "every sample was trivially zero".into())
            },
        );
        ck.check(
            "H_1..H_{N-1} are central for the first bracket",
            "first N-1 hamiltonians are Casimirs of {,}_1",
            || {
                let w = Window::inflated(m, (n - 1).max(2) as u32, n as i32 - 1);
                let s = KdVState::<C>::new(n, w, true)?;
                let ks = KernelSet::kdv1(n, true);
                for k in 1..n as u32 {
                    let h = hamiltonian_res(&s, k)?;
                    for i in s.fields() {
                        let b = field_bracket(Family::T, i, &h, &ks)?;
                        expect(b.is_zero(), || format!("{{t_{i}, H_{k}}}_1 != 0"))?;
                    }
                }
                Ok(())
            },
        );
    }
}
