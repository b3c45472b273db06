use crate::coeffs::Coeff;
use crate::error::{Error, Result};
use crate::miura_mkdv::{mkdv_hamiltonian, MKdVState};
use crate::modering::{Gen, Poly, Window};
use crate::report::{expect, expect_poly_eq, Checker};

use super::*;

pub struct TodaSuite {
    pub n: u16,
    pub m_pt: i32,
    /// Depth of the `(D - Λ)^{-1}` expansions in the Lax check.
    pub k: i32,
}

fn expect_eq<C: Coeff>(what: &str, a: &QExt<C>, b: &QExt<C>) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::CheckFailed(format!("{what}: {a} != {b}")))
    }
}

impl TodaSuite {
    pub fn new(n: u16, m_pt: i32) -> Self {
        TodaSuite { n, m_pt, k: 4 }
    }

    fn reach(&self) -> i32 {
        2 * self.n as i32 + 2
    }

    pub fn run<C: Coeff>(&self, ck: &mut Checker) {
        let n = self.n;
        let Ok(ctx) = Ctx::new(n, false) else {
            ck.check("configuration", "N >= 2", || {
                Err(Error::Config(format!("N must be >= 2, got {n}")))
            });
            return;
        };
        ck.check(
            "(q^m - 1) {Lam_k,Q_j} kernel = {Lam_k,Lam_j} kernel",
            "Q_j(zq) = Lam_j(z) Q_j(z) is compatible with the brackets",
            || q_kernel_consistency::<C>(n, 3),
        );
        let kappa = s_bracket_table::<C>(n, self.reach());
        ck.check(
            "{Lam_i(z), S_j(w)} = (delta_{i,j+1} - delta_ij) delta(w/z) Lam_i S_j",
            "local form of the screening brackets",
            || {
                let k = kappa.clone()?;
                for i in 1..=n {
                    for j in 1..=n {
                        let want = if j == i {
                            C::one().neg()
                        } else if j % n + 1 == i {
                            C::one()
                        } else {
                            C::zero()
                        };
                        expect(k[i as usize - 1][j as usize - 1] == want, || {
                            format!("kappa_{i}{j} = {}", k[i as usize - 1][j as usize - 1])
                        })?;
                    }
                }
                Ok(())
            },
        );
        let Ok(kappa) = kappa else { return };
        ck.check(
            "A_i(zq) = Lam_{i-1} Lam_i^{-1} A_i",
            "q-difference constraint on A_i = Q_{i-1}/Q_i",
            || {
                for i in 1..=n as i32 {
                    let rhs = ctx
                        .fields_mono(&[(i - 1, 0, 1), (i, 0, -1)])
                        .mul(&a::<C>(&ctx, i));
                    expect_eq(&format!("A_{i}(zq)"), &a::<C>(&ctx, i).shift(1), &rhs)?;
                }
                Ok(())
            },
        );
        ck.check(
            format!(
                "[tL, tA tL^-1] gives d_t Lam_i = A_i(z) - A_{{i+1}}(zq) (to D^-{})",
                self.k
            ),
            "Lax form of the q-Toda flow",
            || {
                for i in 1..=n as i32 {
                    let v = toda_velocity::<C>(&ctx, i);
                    let e = lax_entry::<C>(&ctx, i, self.k);
                    for d in -self.k..=1 {
                        let want = if d == 0 { v.neg() } else { ctx.zero() };
                        expect_eq(
                            &format!("entry ({i},{}) at D^{d}", i % n as i32 + 1),
                            &e.coeff(d, &ctx),
                            &want,
                        )?;
                    }
                }
                Ok(())
            },
        );
        ck.check(
            "d_t Lam_i = {Lam_i, Int(S_1 + ... + S_N)}",
            "hamiltonian form of the q-Toda flow",
            || {
                let flow = toda_hamiltonian_flow(&ctx, &kappa, true);
                for i in ctx.fields() {
                    expect_eq(
                        &format!("Lam_{i}"),
                        &flow[i as usize - 1],
                        &toda_velocity(&ctx, i as i32),
                    )?;
                }
                Ok(())
            },
        );
        ck.check(
            "bold H_1 = -Int(Lam_1 + ... + Lam_N)",
            "local density of bold H_1",
            || {
                let s = MKdVState::<C>::new(n, Window::point(self.m_pt, 1), false)?;
                let h = mkdv_hamiltonian(&s, &s.lax_pair()?, 1)?;
                let want = (1..=n).fold(Poly::zero(), |acc: Poly<C>, k| {
                    acc.sub(&Poly::gen(Gen::lam(k, 0)))
                });
                expect_poly_eq("bold H_1", &h.value, &want)
            },
        );
        ck.check(
            "{bold H_1, Int S_i} = 0 for i = 1..N (exact, no degree cap)",
            "bold H_n commute with every screening charge",
            || {
                let h = bold_h1_density::<C>(&ctx);
                for j in 1..=n as i32 {
                    let b = functional_screening(&h, &kappa, j)?;
                    if let Some(((e, m), c)) = b.integral_classes().into_iter().next() {
                        return Err(Error::CheckFailed(format!(
                            "S_{j}: class Q^{e:?} {m} has coefficient {c}"
                        )));
                    }
                }
                Ok(())
            },
        );
        ck.check(
            "{t_j-image of L_1, Int S_i} = 0 for i = 1..N-1",
            "W-algebra is the kernel of the finite screenings",
            || {
                let t = t_images::<C>(&ctx);
                for i in 1..n as i32 {
                    let d = screening(&ctx, &kappa, i);
                    for (j, tj) in t.iter().enumerate() {
                        let r = tj.derive(&d)?;
                        expect(r.is_zero(), || format!("{{t_{}, Int S_{i}}} = {r}", j + 1))?;
                    }
                }
                let r = t[0].derive(&screening(&ctx, &kappa, n as i32))?;
                expect(!r.is_zero(), || format!("S_{n} also annihilates t_1"))
            },
        );
        ck.check(
            "finite Toda flow {., Int(S_1 + ... + S_{N-1})} fixes every t_j-image",
            "finite q-Toda",
            || {
                let d = toda_hamiltonian_flow(&ctx, &kappa, false);
                for (j, tj) in t_images::<C>(&ctx).iter().enumerate() {
                    let r = tj.derive(&d)?;
                    expect(r.is_zero(), || format!("d t_{} = {r}", j + 1))?;
                }
                Ok(())
            },
        );
        if n == 2 {
            ck.check(
                "sine-Gordon: d_t Lam = Q^-2 - Q(zq)^2, H = Int(Q(z)Q(zq) + Q(z)^-1 Q(zq)^-1)",
                "reduced N = 2 q-Toda",
                || {
                    let r = Ctx::new(2, true)?;
                    let q: QExt<C> = r.q(1, 1);
                    let qi: QExt<C> = r.q(1, -1);
                    expect_eq(
                        "d_t Lam",
                        &toda_velocity(&r, 1),
                        &r.q(1, -2).sub(&q.shift(1).pow(2)),
                    )?;
                    expect_eq(
                        "density",
                        &toda_density(&r),
                        &q.mul(&q.shift(1)).add(&qi.mul(&qi.shift(1))),
                    )?;
                    let flow = toda_hamiltonian_flow(&r, &kappa, true);
                    expect_eq("{Lam, H}", &flow[0], &toda_velocity(&r, 1))
                },
            );
        }
    }
}
