//! The q-deformed affine Toda flow in the local `Q`-extension, its
//! hamiltonian structure through the screening currents `S_i`, and the
//! finite and sine-Gordon specialisations.

use crate::coeffs::{rat, Coeff};
use crate::error::{Error, Result};
use crate::modering::{Gen, Monomial, Poly, Window};
use crate::poisson::{KernelSet, Phi};

pub mod local;
pub mod verify;

#[cfg(test)]
mod tests;

pub use local::{Ctx, Grade, LocalOp, QExt};

/// `A_i = Q_{i-1} Q_i^{-1}`.
pub fn a<C: Coeff>(ctx: &Ctx, i: i32) -> QExt<C> {
    ctx.q(i - 1, 1).mul(&ctx.q(i, -1))
}

/// `S_i(z) = Q_i(z) Q_{i+1}(zq)^{-1}`.
pub fn s<C: Coeff>(ctx: &Ctx, i: i32) -> QExt<C> {
    ctx.q(i, 1).mul(&ctx.q(i + 1, -1).shift(1))
}

/// `∂_t Λ_i = A_i(z) - A_{i+1}(zq)`.
pub fn toda_velocity<C: Coeff>(ctx: &Ctx, i: i32) -> QExt<C> {
    a(ctx, i).sub(&a(ctx, i + 1).shift(1))
}

/// `(D - Λ_i) A_{i+1} (D - Λ_{i+1})^{-1} - A_i (D - Λ_i)^{-1} (D - Λ_i)`,
/// the `(i, i+1)` entry of `[tL, tA tL^{-1}]`, exact for `D^d`, `d >= -k`.
pub fn lax_entry<C: Coeff>(ctx: &Ctx, i: i32, k: i32) -> LocalOp<C> {
    let floor = -k - 1;
    let factor =
        |j: i32| LocalOp::term(1, ctx.one(), floor).sub(&LocalOp::term(0, ctx.lam(j, 0), floor));
    let b = |j: i32| {
        LocalOp::term(0, a(ctx, j), floor).mul(&LocalOp::inv_d_minus(&ctx.lam(j, 0), floor))
    };
    factor(i).mul(&b(i + 1)).sub(&b(i).mul(&factor(i)))
}

/// `{Λ_i(z), Q_j(w)} = sum_m (w/z)^m φ_ij(q^m) Λ_i(z) Q_j(w)`, reading the
/// printed `Λ_j(w)` of the off-diagonal entries as `Q_j(w)`.
pub fn lam_q_kernel(n: u16, i: u16, j: u16) -> Phi {
    let (n, i, j) = (n as i32, i as i32, j as i32);
    match i.cmp(&j) {
        std::cmp::Ordering::Equal => Phi {
            c: rat(-1, 1),
            shift: 0,
            num: vec![n - 1],
            den: vec![n],
        },
        std::cmp::Ordering::Less => Phi {
            c: rat(1, 1),
            shift: n + i - j - 1,
            num: vec![1],
            den: vec![n],
        },
        std::cmp::Ordering::Greater => Phi {
            c: rat(1, 1),
            shift: i - j - 1,
            num: vec![1],
            den: vec![n],
        },
    }
}

/// `κ_ij(m) = φ_ij(q^m) - q^m φ_{i,j+1}(q^m)`, the mode kernel of
/// `{Λ_i(z), S_j(w)} / Λ_i(z) S_j(w)`.
pub fn s_kernel_mode<C: Coeff>(n: u16, i: u16, j: u16, m: i32) -> Result<C> {
    let next = (j % n) + 1;
    let a: C = lam_q_kernel(n, i, j).value(m)?;
    let b: C = lam_q_kernel(n, i, next).value(m)?;
    Ok(a.sub(&b.mul_qpow(m as i64)))
}

/// The constants `κ_ij` with `{Λ_i(z), S_j(w)} = κ_ij δ(w/z) Λ_i(z) S_j(w)`,
/// derived from the `Q` kernels on `|m| <= reach`. Fails if some `κ_ij(m)`
/// is not constant in `m`, since the bracket is then not local.
pub fn s_bracket_table<C: Coeff>(n: u16, reach: i32) -> Result<Vec<Vec<C>>> {
    let mut out = Vec::new();
    for i in 1..=n {
        let mut row = Vec::new();
        for j in 1..=n {
            let k0: C = s_kernel_mode(n, i, j, 0)?;
            for m in -reach..=reach {
                let km: C = s_kernel_mode(n, i, j, m)?;
                if km != k0 {
                    return Err(Error::CheckFailed(format!(
                        "{{Lam_{i}, S_{j}}}: kernel at m={m} is {km}, at m=0 {k0}"
                    )));
                }
            }
            row.push(k0);
        }
        out.push(row);
    }
    Ok(out)
}

/// `(q^m - 1) φ_kj(q^m)` against the `Λ` kernel of the mKdV bracket: the
/// `Q` kernels must reproduce it through `Q_j(zq) = Λ_j(z) Q_j(z)`.
pub fn q_kernel_consistency<C: Coeff>(n: u16, reach: i32) -> Result<()> {
    let (a, b) = (4 * reach, 8 * reach);
    let w = Window::point(b + 2 * reach, 1);
    let ks = KernelSet::mkdv(n);
    for k in 1..=n {
        for j in 1..=n {
            let br: Poly<C> = ks.mode_bracket(&Gen::lam(k, a), &Gen::lam(j, b), &w)?;
            for m in -reach..=reach {
                let mono =
                    Monomial::from_factors(vec![(Gen::lam(k, a - m), 1), (Gen::lam(j, b + m), 1)]);
                let want = br.coeff(&mono);
                let g = |m: i32| -> Result<C> {
                    let phi: C = lam_q_kernel(n, k, j).value(m)?;
                    Ok(phi.mul(&C::q_pow(m as i64).sub(&C::one())))
                };
                // for k = j the same monomial also comes from mode a - b - m
                let got = if k == j {
                    g(m)?.add(&g(a - b - m)?)
                } else {
                    g(m)?
                };
                if got != want {
                    return Err(Error::CheckFailed(format!(
                        "{{Lam_{k},Lam_{j}}} mode {m}: (q^m-1) phi = {got}, kernel gives {want}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// The derivation `{·, ∫S_j}` on the fields: `Λ_k(z) -> κ_kj Λ_k(z) S_j(z)`.
pub fn screening<C: Coeff>(ctx: &Ctx, kappa: &[Vec<C>], j: i32) -> Vec<QExt<C>> {
    let sj = s::<C>(ctx, j);
    let jj = ctx.idx(j) as usize - 1;
    (1..=ctx.n as i32)
        .map(|k| ctx.lam(k, 0).mul(&sj).scale(&kappa[k as usize - 1][jj]))
        .collect()
}

/// Sum of derivations given by field images.
pub fn sum_images<C: Coeff>(ctx: &Ctx, parts: &[Vec<QExt<C>>]) -> Vec<QExt<C>> {
    (0..ctx.n as usize)
        .map(|k| parts.iter().fold(ctx.zero(), |a, p| a.add(&p[k])))
        .collect()
}

/// `{·, ∫(S_1 + ... + S_N)}` (affine) or `{·, ∫(S_1 + ... + S_{N-1})}` (finite).
pub fn toda_hamiltonian_flow<C: Coeff>(ctx: &Ctx, kappa: &[Vec<C>], affine: bool) -> Vec<QExt<C>> {
    let top = if affine {
        ctx.n as i32
    } else {
        ctx.n as i32 - 1
    };
    let parts: Vec<_> = (1..=top).map(|j| screening(ctx, kappa, j)).collect();
    sum_images(ctx, &parts)
}

/// `sum_i S_i(z)`, the density of the affine Toda hamiltonian.
pub fn toda_density<C: Coeff>(ctx: &Ctx) -> QExt<C> {
    (1..=ctx.n as i32).fold(ctx.zero(), |acc, i| acc.add(&s(ctx, i)))
}

/// The coordinates `t_j` of `L_1 = (D - Λ_1) ... (D - Λ_N)`: `(-1)^j [D^{N-j}]`.
pub fn t_images<C: Coeff>(ctx: &Ctx) -> Vec<QExt<C>> {
    let mut l = LocalOp::term(0, ctx.one(), 0);
    for k in 1..=ctx.n as i32 {
        l = l.mul(&LocalOp::term(1, ctx.one(), 0).sub(&LocalOp::term(0, ctx.lam(k, 0), 0)));
    }
    (1..=ctx.n as i32)
        .map(|j| {
            let c = l.coeff(ctx.n as i32 - j, ctx);
            if j % 2 == 1 {
                c.neg()
            } else {
                c
            }
        })
        .collect()
}

/// Local density of bold `H_1`: `-(Λ_1 + ... + Λ_N)`.
pub fn bold_h1_density<C: Coeff>(ctx: &Ctx) -> QExt<C> {
    (1..=ctx.n as i32).fold(ctx.zero(), |acc, k| acc.sub(&ctx.lam(k, 0)))
}

/// `{∫h, ∫S_j} = ∫ sum_k (δh/δΛ_k) {Λ_k(z), ∫S_j}` for a local density `h`.
pub fn functional_screening<C: Coeff>(h: &QExt<C>, kappa: &[Vec<C>], j: i32) -> Result<QExt<C>> {
    let ctx = *h.ctx();
    let img = screening(&ctx, kappa, j);
    let mut out = ctx.zero();
    for k in ctx.fields() {
        out = out.add(&h.variational(k)?.mul(&img[k as usize - 1]));
    }
    Ok(out)
}
