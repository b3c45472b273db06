use super::*;
use crate::coeffs::{QRat, Ring};

type Q = QExt<QRat>;

fn kappa(n: u16) -> Vec<Vec<QRat>> {
    s_bracket_table(n, 2 * n as i32 + 2).unwrap()
}

#[test]
fn s_brackets_are_delta_functions() {
    for n in 2..=4u16 {
        let k = kappa(n);
        for i in 1..=n {
            for j in 1..=n {
                let want = if j == i {
                    -1
                } else if j % n + 1 == i {
                    1
                } else {
                    0
                };
                assert_eq!(
                    k[i as usize - 1][j as usize - 1],
                    QRat::from_i64(want),
                    "N={n} i={i} j={j}"
                );
            }
        }
    }
}

#[test]
fn q_kernels_match_the_lam_kernels() {
    for n in 2..=3u16 {
        q_kernel_consistency::<QRat>(n, 3).unwrap();
    }
}

#[test]
fn shift_is_multiplicative() {
    let ctx = Ctx::new(3, false).unwrap();
    let x: Q = ctx.q(1, 2).mul(&ctx.lam(2, 1)).add(&ctx.q(3, -1));
    let y: Q = ctx.q(2, 1).mul(&ctx.lam(1, -1));
    assert_eq!(x.mul(&y).shift(2), x.shift(2).mul(&y.shift(2)));
    assert_eq!(x.shift(3).shift(-1), x.shift(2));
    assert_eq!(
        ctx.q::<QRat>(1, 1).shift(1),
        ctx.lam(1, 0).mul(&ctx.q(1, 1))
    );
}

#[test]
fn total_differences_integrate_to_zero() {
    let ctx = Ctx::new(3, false).unwrap();
    let g: Q = ctx
        .q(1, 1)
        .mul(&ctx.q(2, -1))
        .mul(&ctx.lam(3, 2).add(&ctx.lam(1, -1).mul(&ctx.lam(2, 0))));
    assert!(g.shift(1).sub(&g).integral_is_zero());
    assert!(g.shift(-3).sub(&g).integral_is_zero());
    assert!(!g.integral_is_zero());
    let h: Q = ctx.lam(1, 0).mul(&ctx.lam(2, 1));
    assert!(h.shift(4).sub(&h).integral_is_zero());
    assert!(!ctx.one::<QRat>().integral_is_zero());
}

#[test]
fn hamiltonian_form_and_lax_entry() {
    for n in 2..=3u16 {
        let ctx = Ctx::new(n, false).unwrap();
        let flow = toda_hamiltonian_flow::<QRat>(&ctx, &kappa(n), true);
        for i in 1..=n as i32 {
            let v = toda_velocity::<QRat>(&ctx, i);
            assert_eq!(flow[i as usize - 1], v);
            let e = lax_entry::<QRat>(&ctx, i, 3);
            for (d, c) in e.terms() {
                if *d >= -3 {
                    let want = if *d == 0 { v.neg() } else { ctx.zero() };
                    assert_eq!(*c, want, "N={n} i={i} D^{d}");
                }
            }
        }
    }
}

#[test]
fn screening_kills_the_t_images() {
    for n in 2..=4u16 {
        let ctx = Ctx::new(n, false).unwrap();
        let k = kappa(n);
        let t = t_images::<QRat>(&ctx);
        for j in 1..n as i32 {
            let d = screening(&ctx, &k, j);
            for (l, tl) in t.iter().enumerate() {
                assert!(tl.derive(&d).unwrap().is_zero(), "N={n} S_{j} t_{}", l + 1);
            }
        }
        let d = screening(&ctx, &k, n as i32);
        assert!(!t[0].derive(&d).unwrap().is_zero());
    }
}

#[test]
fn h1_commutes_with_every_screening_charge() {
    for n in 2..=3u16 {
        let ctx = Ctx::new(n, false).unwrap();
        let k = kappa(n);
        let h = bold_h1_density::<QRat>(&ctx);
        for j in 1..=n as i32 {
            assert!(
                functional_screening(&h, &k, j).unwrap().integral_is_zero(),
                "N={n} S_{j}"
            );
        }
        let sq = ctx.lam::<QRat>(1, 0).pow(2);
        assert!(!functional_screening(&sq, &k, 1).unwrap().integral_is_zero());
    }
}

#[test]
fn sine_gordon() {
    let ctx = Ctx::new(2, true).unwrap();
    let q: Q = ctx.q(1, 1);
    let v = toda_velocity::<QRat>(&ctx, 1);
    assert_eq!(v, ctx.q(1, -2).sub(&q.shift(1).pow(2)));
    let h = q
        .mul(&q.shift(1))
        .add(&ctx.q(1, -1).mul(&ctx.q(1, -1).shift(1)));
    assert_eq!(toda_density::<QRat>(&ctx), h);
}
