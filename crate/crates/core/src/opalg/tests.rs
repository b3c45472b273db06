use super::*;
use crate::coeffs::{Coeff, QRat, Ring};
use crate::modering::{Family, Gen, Poly, Series, Window};

type O = Op<QRat>;
type S = Series<QRat>;

fn gen(w: Window, f: Family, i: u16) -> S {
    S::gen_series(w, f, i)
}

fn lax(w: Window, n: u32) -> O {
    let mut l = O::d_pow(w, n as i32);
    for i in 1..=n {
        let s = gen(w, Family::T, i as u16);
        let s = if i % 2 == 1 { s.neg() } else { s };
        l = l.add(&O::term((n - i) as i32, s));
    }
    l
}

#[test]
fn shift_rule() {
    let w = Window::point(2, 4);
    let t = gen(w, Family::T, 1);
    let lhs = O::d_pow(w, 1).mul(&O::term(0, t.clone()));
    assert_eq!(lhs, O::term(1, t.q_shift(1)));
}

#[test]
fn two_factor_miura() {
    let w = Window::point(1, 4);
    let l1 = gen(w, Family::Lam, 1);
    let l2 = gen(w, Family::Lam, 2);
    let a = O::d_pow(w, 1).sub(&O::term(0, l1.clone()));
    let b = O::d_pow(w, 1).sub(&O::term(0, l2.clone()));
    let expect = O::d_pow(w, 2)
        .sub(&O::term(1, l2.q_shift(1).add(&l1)))
        .add(&O::term(0, l1.mul(&l2)));
    assert_eq!(a.mul(&b), expect);
}

#[test]
fn associativity_and_parts() {
    let w = Window::point(1, 3);
    let t = gen(w, Family::T, 1);
    let u = gen(w, Family::T, 2);
    let a = O::d_pow(w, 1).add(&O::term(-1, t.clone()));
    let b = O::term(0, u.clone()).add(&O::term(-2, t.clone()));
    let c = O::d_pow(w, 2).add(&O::term(-1, u.clone()));
    assert!(a.mul(&b.mul(&c)).agrees_with(&a.mul(&b).mul(&c)));

    let t0 = S::from_mode(w, 0, Poly::gen(Gen::t(1, 0)));
    let t1 = S::from_mode(w, 1, Poly::gen(Gen::t(1, 1)));
    let x = O::d_pow(w, 1)
        .add(&O::term(0, t0.clone()))
        .add(&O::term(-1, t1.clone()));
    let (p, m, r) = x.parts().unwrap();
    assert_eq!(p, O::d_pow(w, 1).add(&O::term(0, t0.clone())));
    assert_eq!(m, O::term(-1, t1));
    assert_eq!(r, t0);
    assert!(O::d_pow(w, 3).res().unwrap().is_zero());

    let ab = a.mul(&b).res().unwrap();
    let ba = b.mul(&a).res().unwrap();
    assert!(ab.sub(&ba).integral().is_zero());
}

#[test]
fn roots() {
    let w = Window::point(1, 6);
    for n in 2..=3u32 {
        let p = nth_root(&O::d_pow(w, n as i32), n, 4).unwrap();
        assert!(p.agrees_with(&O::d_pow(w, 1)));
    }
    let l = lax(w, 2)
        .sub(&O::term(0, gen(w, Family::T, 2)))
        .add(&O::one(w));
    let p = nth_root(&l, 2, 4).unwrap();
    let b = gen(w, Family::T, 1).neg().cyclic_sum_invert(2).unwrap();
    assert_eq!(p.coeff(0), b);
    assert!(p.pow(2).agrees_with(&l));
    assert_eq!(p.pow(2).valid_from(), 1 - 4);
}

#[test]
fn root_multiply_back() {
    for n in 2..=4u32 {
        let w = Window::point(1, 6);
        let l = lax(w, n);
        let p = nth_root(&l, n, 5).unwrap();
        assert!(p.pow(n).agrees_with(&l), "N = {n}");
        let mut bad = p.clone();
        bad.add_at(-1, S::constant(w, QRat::one()));
        assert!(!bad.pow(n).agrees_with(&l));
    }
}

#[test]
fn inverses() {
    let w = Window::point(1, 5).with_degcap(3);
    let d = O::d_pow(w, 1);
    assert!(op_inverse(&d, 5).unwrap().agrees_with(&O::d_pow(w, -1)));

    let lam = gen(w, Family::Lam, 1);
    let a = d.sub(&O::term(0, lam.clone()));
    let inv = op_inverse(&a, 5).unwrap();
    assert_eq!(inv.coeff(-1), S::one(w));
    assert_eq!(inv.coeff(-2), lam.q_shift(-1));
    assert!(a.mul(&inv).agrees_with(&O::one(w)));
    assert!(inv.mul(&a).agrees_with(&O::one(w)));

    // leading coefficient a unit series
    let b = O::term(1, lam.clone()).add(&O::term(0, gen(w, Family::Lam, 2)));
    let binv = op_inverse(&b, 5).unwrap();
    assert!(b.mul(&binv).agrees_with(&O::one(w)));

    let l = lax(Window::point(1, 6), 2);
    let p = nth_root(&l, 2, 6).unwrap();
    let pinv = op_inverse(&p, 6).unwrap();
    let back = op_inverse(&pinv, 6).unwrap();
    assert!(back.agrees_with(&p));
}

#[test]
fn expansion_in_root() {
    let w = Window::point(1, 5);
    let f = expand_in_root(&O::d_pow(w, 1), 4).unwrap();
    assert!(f.iter().all(|x| x.is_zero()));

    for n in 2..=3u32 {
        let l = lax(w, n);
        let p = nth_root(&l, n, 5).unwrap();
        let f = expand_in_root(&p, 4).unwrap();
        assert_eq!(f[0], p.coeff(0).neg());
        assert_eq!(f[1], p.coeff(-1).neg());
        let pinv = op_inverse(&p, 5).unwrap();
        let mut rebuilt = p.clone();
        let mut pi = O::one(w);
        for fi in &f {
            rebuilt = rebuilt.add(&pi.lmul_series(fi));
            pi = pi.mul(&pinv);
        }
        let rebuilt = rebuilt.with_valid(-4);
        assert!(rebuilt.agrees_with(&O::d_pow(w, 1)));
    }
}

#[test]
fn matrix_commutators() {
    let w = Window::point(1, 4);
    let lam = |i| gen(w, Family::Lam, i);
    let mut tl = MatrixOp::zero(w, 2);
    tl.set(0, 1, O::d_pow(w, 1).sub(&O::term(0, lam(1))));
    tl.set(1, 0, O::d_pow(w, 1).sub(&O::term(0, lam(2))));
    assert!(mat_commutator(&tl, &tl)
        .unwrap()
        .nonzero_witness()
        .is_none());
    let sq = tl.pow(2).unwrap();
    assert!(mat_commutator(&tl, &sq)
        .unwrap()
        .nonzero_witness()
        .is_none());
    assert!(mat_commutator(&tl, &MatrixOp::zero(w, 3)).is_err());
    let _ = QRat::q_pow(1);
}

mod props {
    use proptest::prelude::*;

    use super::*;

    fn w() -> Window {
        Window::point(1, 4).with_degcap(3)
    }

    fn arb_series() -> impl Strategy<Value = S> {
        let term = (-1i32..=1, -2i64..=2, -1i64..=1, prop::option::of(-1i32..=1));
        prop::collection::vec(term, 0..3).prop_map(|ts| {
            let mut s = S::zero(w());
            for (m, c, k, g) in ts {
                let p = match g {
                    Some(g) => Poly::gen(Gen::t(1, g)),
                    None => Poly::one(),
                };
                s.add_at(m, p.scale(&QRat::from_i64(c).mul_qpow(k)));
            }
            s
        })
    }

    /// `sum_d s_d D^d` over `d` in `lo..=hi`.
    fn arb_op(lo: i32, hi: i32) -> impl Strategy<Value = O> {
        prop::collection::vec(arb_series(), (hi - lo + 1) as usize).prop_map(move |ss| {
            let mut o = O::zero(w());
            for (d, s) in (lo..=hi).zip(ss) {
                o.add_at(d, s);
            }
            o
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn differential_operators_associate(a in arb_op(0, 1), b in arb_op(0, 1), c in arb_op(0, 1)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn root_of_a_power_is_the_base(tail in arb_op(-2, 0), n in 2u32..=3) {
            let p = O::d_pow(w(), 1).add(&tail).truncate(2);
            let r = nth_root(&p.pow(n), n, 2).unwrap();
            prop_assert!(r.agrees_with(&p));
        }

        #[test]
        fn commutator_is_antisymmetric(a in arb_op(-1, 1), b in arb_op(-1, 1)) {
            let (a, b) = (a.truncate(2), b.truncate(2));
            prop_assert!(a.commutator(&b).agrees_with(&b.commutator(&a).neg()));
        }
    }
}
