use crate::coeffs::Coeff;
use crate::error::{Error, Result};
use crate::modering::{Family, Series, Window};
use crate::opalg::Op;

use super::{FlowDerivation, KdVState};

/// `[L, (L^{n/N})_+]` as an operator, cross-checked against
/// `-[L, (L^{n/N})_-]` and against its support `D^0 .. D^{N-1}`.
pub fn qkdv_flow_op<C: Coeff>(s: &KdVState<C>, n: u32) -> Result<Op<C>> {
    if n == 0 {
        return Err(Error::Config("flows are indexed from 1".into()));
    }
    let big_n = s.n as i32;
    let need = n as i32 - 1 + big_n;
    if s.w.k < need {
        return Err(Error::DepthInsufficient {
            needed: -need,
            valid: -s.w.k,
        });
    }
    let pn = s.root()?.pow_from(n, -big_n);
    let a = s.l.commutator(&pn.plus());
    let b =
        s.l.mul_from(&pn.minus(), 0)
            .sub(&pn.minus().mul_from(&s.l, 0))
            .neg()
            .with_valid(0);
    if let Some((d, m, p)) = a.diff_witness(&b) {
        return Err(Error::CheckFailed(format!(
            "[L,(P^n)+] != -[L,(P^n)-] at D^{d} z^{}: {p}",
            -m
        )));
    }
    for (d, c) in a.terms() {
        if !c.is_zero() && (d < 0 || d >= big_n) {
            return Err(Error::CheckFailed(format!("flow has a D^{d} term")));
        }
    }
    Ok(a)
}

/// `∂_{τ_n} t_i(z) = (-1)^i [D^{N-i}] [L, (L^{n/N})_+]`.
pub fn qkdv_flow<C: Coeff>(s: &KdVState<C>, n: u32) -> Result<FlowDerivation<C>> {
    let a = qkdv_flow_op(s, n)?;
    if s.reduced && !a.coeff(0).is_zero() {
        return Err(Error::CheckFailed("reduced flow moves t_N".into()));
    }
    let fields = s.fields().map(|i| {
        let c = a.coeff(s.n as i32 - i as i32);
        (Family::T, i, if i % 2 == 1 { c.neg() } else { c })
    });
    Ok(FlowDerivation::from_series(s.w, fields.collect::<Vec<_>>()))
}

/// The closed form of the first flow,
/// `∂t_i = t_i(z)(b(zq^{N-i}) - b(z)) + t_{i+1}(zq) - t_{i+1}(z)` with
/// `(1 + D + ... + D^{N-1}) b = -t_1` and `t_{N+1} = 0`.
pub fn qkdv1_formula<C: Coeff>(n: u16, w: Window, reduced: bool) -> Result<Vec<Series<C>>> {
    let t = |i: u16| -> Series<C> {
        if i == 0 || (reduced && i == n) {
            Series::one(w)
        } else if i > n {
            Series::zero(w)
        } else {
            Series::gen_series(w, Family::T, i)
        }
    };
    let b = t(1).neg().cyclic_sum_invert(n as u32)?;
    let top = if reduced { n - 1 } else { n };
    let mut out = Vec::new();
    for i in 1..=top {
        let ti = t(i);
        let db = b.q_shift((n - i) as i64).sub(&b);
        let next = t(i + 1);
        out.push(ti.mul(&db).add(&next.q_shift(1)).sub(&next));
    }
    Ok(out)
}

/// `[P, (P^n)_+]`, the q-KP flow of `P = D + p_0 + p_{-1} D^{-1} + ...`.
pub fn qkp_flow<C: Coeff>(p: &Op<C>, n: u32) -> Result<Op<C>> {
    if p.max_exp() != Some(1) || p.coeff(1) != Series::one(*p.window()) {
        return Err(Error::Malformed("q-KP operator must start with D".into()));
    }
    let pn = p.pow_from(n, 0).plus();
    Ok(p.commutator(&pn))
}

/// A generic q-KP operator `D + sum_{k=0}^{depth} p_{-k}(z) D^{-k}` over the
/// `Kp` family (component `k + 1` holds `p_{-k}`).
pub fn generic_kp<C: Coeff>(w: Window, depth: i32) -> Op<C> {
    let mut p = Op::d_pow(w, 1);
    for k in 0..=depth {
        p.add_at(-k, Series::gen_series(w, Family::Kp, k as u16 + 1));
    }
    p.with_valid(-depth)
}

/// The derivation `p_{-k} -> [D^{-k}] [P, (P^n)_+]` of a generic q-KP
/// operator with coefficients down to `p_{-depth}`. It is defined on the
/// `p_{-k}` whose flow is exact at that depth, `k <= depth - n`.
pub fn qkp_derivation<C: Coeff>(w: Window, depth: i32, n: u32) -> Result<FlowDerivation<C>> {
    let p = generic_kp::<C>(w, depth);
    let f = qkp_flow(&p, n)?;
    let mut fields = Vec::new();
    for k in 0..=depth {
        match f.coeff_checked(-k) {
            Ok(c) => fields.push((Family::Kp, k as u16 + 1, c)),
            Err(_) => break,
        }
    }
    Ok(FlowDerivation::from_series(w, fields))
}

/// `∂(P^N) = sum_j P^j (∂P) P^{N-1-j}`.
pub fn induced_power_flow<C: Coeff>(p: &Op<C>, dp: &Op<C>, big_n: u32) -> Op<C> {
    let mut acc = Op::zero(*p.window());
    for j in 0..big_n {
        acc = acc.add(&p.pow(j).mul(dp).mul(&p.pow(big_n - 1 - j)));
    }
    acc
}
