use super::*;
use crate::coeffs::{rat, Coeff, QRat, Ring};
use crate::modering::{Family, Gen, Monomial, Poly, Series, Window};
use crate::opalg::Op;
use crate::poisson::{bracket, field_bracket, KernelSet};

type P = Poly<QRat>;

fn t(m: i32) -> Monomial {
    Monomial::gen(Gen::t(1, m))
}

fn inv_one_plus(k: i32) -> QRat {
    QRat::one_plus_qpow(k as i64).inv().unwrap()
}

#[test]
fn flow_n_equal_big_n_is_zero() {
    for n in 2..=3u16 {
        let s = KdVState::<QRat>::new(n, Window::point(1, 2 * n as i32), true).unwrap();
        assert!(qkdv_flow(&s, n as u32).unwrap().is_zero());
    }
}

#[test]
fn first_flow_matches_closed_form() {
    for n in 2..=4u16 {
        for reduced in [true, false] {
            let w = Window::point(2, n as i32);
            let s = KdVState::<QRat>::new(n, w, reduced).unwrap();
            let f = qkdv_flow(&s, 1).unwrap();
            let want = qkdv1_formula::<QRat>(n, w, reduced).unwrap();
            for (i, wi) in s.fields().zip(&want) {
                assert_eq!(&f.series(Family::T, i), wi, "N={n} reduced={reduced} i={i}");
            }
            if !reduced {
                assert!(f.series(Family::T, n).is_zero());
            }
        }
    }
}

#[test]
fn depth_is_checked() {
    let s = KdVState::<QRat>::new(2, Window::point(1, 2), true).unwrap();
    assert!(matches!(
        qkdv_flow(&s, 3),
        Err(crate::Error::DepthInsufficient { .. })
    ));
}

#[test]
fn first_hamiltonian() {
    for n in 2..=3u16 {
        let s = KdVState::<QRat>::new(n, Window::point(2, 2), true).unwrap();
        let h = hamiltonian_res(&s, 1).unwrap();
        assert_eq!(
            h.value,
            P::term(QRat::one().neg(), Monomial::gen(Gen::t(1, 0)))
        );
    }
    let s = KdVState::<QRat>::new(2, Window::point(2, 2), true).unwrap();
    assert!(hamiltonian_res(&s, 2).unwrap().value.degree() == 0);
}

fn h3_formula(m: i32) -> P {
    let mut p = P::zero();
    for i in -m..=m {
        for j in -m..=m {
            let k = -i - j;
            if k.abs() > m {
                continue;
            }
            let c = inv_one_plus(i)
                .mul(&inv_one_plus(j))
                .mul(&inv_one_plus(k))
                .mul(&QRat::from_rat(&rat(1, 3)));
            p.add_term(t(i).mul(&t(j)).mul(&t(k)), c);
        }
    }
    p
}

#[test]
fn third_hamiltonian_n2() {
    let m = 2;
    let s = KdVState::<QRat>::new(2, Window::point(m, 3), true).unwrap();
    let h = hamiltonian_res(&s, 3).unwrap().value;
    let cubic = h.degree_part(3);
    assert_eq!(cubic, h3_formula(m));
    // the remaining part is the linear term -t[0]/2
    let rest = h.sub(&cubic);
    assert_eq!(rest, P::term(QRat::from_rat(&rat(-1, 2)), t(0)));
}

fn tau1_formula(m: i32, w: Window) -> Series<QRat> {
    let mut s = Series::zero(w);
    for i in -m..=m {
        for j in -m..=m {
            let c = QRat::one_minus_qpow((i + j) as i64)
                .mul(&inv_one_plus(i))
                .mul(&inv_one_plus(j))
                .neg();
            s.add_at(i + j, P::term(c, t(i).mul(&t(j))));
        }
    }
    s
}

#[test]
fn tau1_n2_mode_formula() {
    let w = Window::point(2, 2);
    let s = KdVState::<QRat>::new(2, w, true).unwrap();
    let f = qkdv_flow(&s, 1).unwrap();
    assert_eq!(f.series(Family::T, 1), tau1_formula(2, w));
}

#[test]
fn first_heredity_n2() {
    let w = Window::inflated(2, 3, 4);
    let s = KdVState::<QRat>::new(2, w, true).unwrap();
    let flow = qkdv_flow(&s, 1).unwrap().series(Family::T, 1).at_point();
    let h3 = hamiltonian_res(&s, 3).unwrap();
    let h1 = hamiltonian_res(&s, 1).unwrap();
    let b1 = field_bracket(Family::T, 1, &h3, &KernelSet::kdv1(2, true)).unwrap();
    let b2 = field_bracket(Family::T, 1, &h1, &KernelSet::kdv2(2, true)).unwrap();
    assert_eq!(b2, flow);
    assert_eq!(b1, flow);
}

#[test]
fn hamiltonians_commute_n2() {
    let w = Window::inflated(2, 3, 4);
    let s = KdVState::<QRat>::new(2, w, true).unwrap();
    let h1 = hamiltonian_res(&s, 1).unwrap();
    let h3 = hamiltonian_res(&s, 3).unwrap();
    for ks in [KernelSet::kdv1(2, true), KernelSet::kdv2(2, true)] {
        assert!(bracket(&h1, &h3, &ks).unwrap().is_zero());
    }
}

#[test]
fn second_construction_small() {
    for n in 2..=3u16 {
        let s = KdVState::<QRat>::new(n, Window::point(1, 3), true).unwrap();
        for m in 1..=3 {
            let wit = hamiltonian_cwf(&s, m).unwrap();
            assert_eq!(wit.g.one_minus_d(), wit.h.sub(&wit.res));
        }
        let h1 = &cwf_densities(&s, 1).unwrap()[0];
        assert_eq!(h1.integral(), s.res_power(1).unwrap().integral());
    }
}

#[test]
fn trivial_operator_has_no_densities() {
    let w = Window::point(1, 3);
    let s = KdVState::<QRat>::from_op(2, Op::d_pow(w, 2), true).unwrap();
    for h in cwf_densities(&s, 3).unwrap() {
        assert!(h.is_zero());
    }
}

#[test]
fn kp_flows() {
    let w = Window::point(1, 3);
    assert!(qkp_flow(&Op::<QRat>::d_pow(w, 1), 1).unwrap().is_zero());
    // a root of L induces the KdV flow on L
    let s = KdVState::<QRat>::new(2, w, true).unwrap();
    let p = s.root().unwrap().clone();
    let dp = qkp_flow(&p, 1).unwrap();
    let dl = induced_power_flow(&p, &dp, 2).with_valid(0);
    let want = qkdv_flow_op(&s, 1).unwrap();
    assert!(dl.agrees_with(&want));
    for (d, _) in dl.terms() {
        assert!((0..2).contains(&d));
    }
}

#[test]
fn kp_flows_commute_on_first_coefficient() {
    let w = Window::inflated(1, 3, 3);
    let out = w.at_point();
    let f1 = qkp_derivation::<QRat>(w, 4, 1).unwrap();
    let f2 = qkp_derivation::<QRat>(w, 4, 2).unwrap();
    let gens = (-1..=1).map(|m| Gen::new(Family::Kp, 2, m));
    let c = f1.commutator(&f2, gens.clone(), &out).unwrap();
    assert!(c.fields.contains(&(Family::Kp, 2)));
    for m in -1..=1 {
        assert!(c.get(&Gen::new(Family::Kp, 2, m)).is_zero(), "mode {m}");
    }
    // too shallow: p_{-1} flows reach coefficients that are not there
    let f1 = qkp_derivation::<QRat>(w, 3, 1).unwrap();
    let f2 = qkp_derivation::<QRat>(w, 3, 2).unwrap();
    assert!(f1.commutator(&f2, gens, &out).is_err());
}
