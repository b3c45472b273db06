use crate::coeffs::{rat, Coeff};
use crate::error::{Error, Result};
use crate::modering::Series;
use crate::opalg::expand_in_root;
use crate::poisson::Functional;

use super::KdVState;

/// `H_n = (N/n) ∫Res L^{n/N}`.
pub fn hamiltonian_res<C: Coeff>(s: &KdVState<C>, n: u32) -> Result<Functional<C>> {
    let r = s.res_power(n)?;
    let c = C::from_rat(&rat(s.n as i64, n as i64));
    Ok(Functional::new(r.integral().scale(&c), s.w))
}

/// The densities `h_1..h_n` from `sum_n h_n s^n = -log(1 + sum_{i>=0} f_i s^{i+1})`
/// where `D = P + sum_i f_i P^{-i}`.
///
/// The generating series is read with `s = t^{-1}` on both sides.
pub fn cwf_densities<C: Coeff>(s: &KdVState<C>, n: u32) -> Result<Vec<Series<C>>> {
    let f = cwf_coefficients(s, n)?;
    Ok(neg_log_coefficients(&f, n, s.w))
}

/// `f_0, ..., f_{n-1}`.
pub fn cwf_coefficients<C: Coeff>(s: &KdVState<C>, n: u32) -> Result<Vec<Series<C>>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let k = n as i32 - 1;
    if s.w.k < k {
        return Err(Error::DepthInsufficient {
            needed: -k,
            valid: -s.w.k,
        });
    }
    let mut f = expand_in_root(s.root()?, k)?;
    f.truncate(n as usize);
    Ok(f.into_iter().map(|x| x.with_window(s.w)).collect())
}

/// Coefficients of `s^1..s^n` in `-log(1 + X)`, `X = sum_i f_i s^{i+1}`.
fn neg_log_coefficients<C: Coeff>(
    f: &[Series<C>],
    n: u32,
    w: crate::modering::Window,
) -> Vec<Series<C>> {
    let n = n as usize;
    // x[d] = coefficient of s^d in X
    let mut x = vec![Series::zero(w); n + 1];
    for (i, fi) in f.iter().enumerate() {
        if i < n {
            x[i + 1] = fi.clone();
        }
    }
    let mut out = vec![Series::zero(w); n + 1];
    // pw = X^k, truncated at s^n
    let mut pw = x.clone();
    for k in 1..=n {
        // -log(1 + X) = sum_k (-1)^k X^k / k
        let c = C::from_rat(&rat(if k % 2 == 0 { 1 } else { -1 }, k as i64));
        for d in 1..=n {
            if !pw[d].is_zero() {
                out[d] = out[d].add(&pw[d].scale(&c));
            }
        }
        let mut next = vec![Series::zero(w); n + 1];
        for a in 1..=n {
            if pw[a].is_zero() {
                continue;
            }
            for b in 1..=n - a {
                if !x[b].is_zero() {
                    next[a + b] = next[a + b].add(&pw[a].mul(&x[b]));
                }
            }
        }
        pw = next;
    }
    out.remove(0);
    out
}

/// The witness of `h_n - (1/n) Res L^{n/N} = (1 - D) g_n`.
pub struct CwfWitness<C> {
    pub h: Series<C>,
    pub res: Series<C>,
    pub g: Series<C>,
}

/// Builds `h_n`, `(1/n) Res L^{n/N}` and the `g_n` with `(1 - D) g_n` equal
/// to their difference, and checks that identity.
pub fn hamiltonian_cwf<C: Coeff>(s: &KdVState<C>, n: u32) -> Result<CwfWitness<C>> {
    let hs = cwf_densities(s, n)?;
    let h = hs[n as usize - 1].clone();
    let res = s.res_power(n)?.scale(&C::from_rat(&rat(1, n as i64)));
    let diff = h.sub(&res);
    let g = diff.total_difference_witness()?;
    if g.one_minus_d() != diff {
        return Err(Error::CheckFailed(
            "(1 - D) g differs from the density difference".into(),
        ));
    }
    Ok(CwfWitness { h, res, g })
}
