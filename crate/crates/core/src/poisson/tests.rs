use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::coeffs::{rat, Coeff, QRat, Ring};
use crate::modering::{Family, Gen, Monomial, Poly, Window};

type P = Poly<QRat>;

fn t(m: i32) -> Gen {
    Gen::t(1, m)
}

fn q(k: i64) -> QRat {
    QRat::q_pow(k)
}

fn qvir(m: i64) -> QRat {
    QRat::one_minus_qpow(m)
        .div(&QRat::one_plus_qpow(m))
        .unwrap()
}

#[test]
fn first_bracket_modes_n2() {
    let w = Window::point(3, 4);
    let ks = KernelSet::kdv1(2, true);
    for a in -3..=3 {
        for b in -3..=3 {
            let got: P = ks.mode_bracket(&t(a), &t(b), &w).unwrap();
            let want = if a + b == 0 {
                P::constant(q(a as i64).sub(&q(-a as i64)))
            } else {
                P::zero()
            };
            assert_eq!(got, want, "a={a} b={b}");
        }
    }
}

#[test]
fn second_bracket_modes_n2() {
    let w = Window::point(3, 4);
    let ks = KernelSet::kdv2(2, true);
    for a in -3..=3 {
        for b in -3..=3 {
            let got: P = ks.mode_bracket(&t(a), &t(b), &w).unwrap();
            let mut want = P::zero();
            for m in -6..=6 {
                let (x, y) = (t(a - m), t(b + m));
                if x.mode.abs() <= 3 && y.mode.abs() <= 3 && m != 0 {
                    want.add_term(Monomial::gen(x).mul(&Monomial::gen(y)), qvir(m as i64));
                }
            }
            if a + b == 0 {
                want.add_term(Monomial::one(), q(a as i64).sub(&q(-a as i64)));
            }
            assert_eq!(got, want, "a={a} b={b}");
        }
    }
    let z: P = ks.mode_bracket(&t(0), &t(0), &w).unwrap();
    assert!(z.is_zero());
}

#[test]
fn tables_are_antisymmetric() {
    let w = Window::point(2, 4);
    for n in 2..=4u16 {
        let sets = [
            (KernelSet::kdv1(n, true), Family::T, n - 1),
            (KernelSet::kdv2(n, true), Family::T, n - 1),
            (KernelSet::kdv1(n, false), Family::T, n),
            (KernelSet::kdv2(n, false), Family::T, n),
            (KernelSet::mkdv(n), Family::Lam, n),
        ];
        for (ks, fam, top) in &sets {
            for i in 1..=*top {
                for j in 1..=*top {
                    for a in -2..=2 {
                        for b in -2..=2 {
                            let x = Gen::new(*fam, i, a);
                            let y = Gen::new(*fam, j, b);
                            let l: P = ks.mode_bracket(&x, &y, &w).unwrap();
                            let r: P = ks.mode_bracket(&y, &x, &w).unwrap();
                            assert_eq!(l, r.neg(), "{} {x} {y}", ks.name());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn reduced_brackets_have_no_top_field() {
    let w = Window::point(2, 4);
    for n in 2..=4u16 {
        for ks in [KernelSet::kdv1(n, true), KernelSet::kdv2(n, true)] {
            for i in 1..n {
                for j in 1..n {
                    let p: P = ks.mode_bracket(&Gen::t(i, 1), &Gen::t(j, -2), &w).unwrap();
                    assert!(p.gens().iter().all(|g| g.comp < n));
                }
            }
        }
    }
}

#[test]
fn unknown_pairs_are_errors() {
    let w = Window::point(2, 4);
    let ks = KernelSet::kdv2(2, true);
    assert!(ks.mode_bracket::<QRat>(&Gen::lam(1, 0), &t(0), &w).is_err());
}

fn h1(w: Window) -> Functional<QRat> {
    Functional::new(P::gen(t(0)).neg(), w)
}

#[test]
fn tau1_flow_from_second_bracket_n2() {
    let w = Window::inflated(2, 2, 4);
    let s = field_bracket(Family::T, 1, &h1(w), &KernelSet::kdv2(2, true)).unwrap();
    for m in -2..=2 {
        let mut want = P::zero();
        for i in -2..=2i32 {
            let j = m - i;
            if j.abs() > 2 {
                continue;
            }
            let c = QRat::one_minus_qpow((i + j) as i64)
                .div(&QRat::one_plus_qpow(i as i64).mul(&QRat::one_plus_qpow(j as i64)))
                .unwrap();
            want.add_term(Monomial::gen(t(i)).mul(&Monomial::gen(t(j))), c.neg());
        }
        assert_eq!(s.coeff(m), want, "mode {m}");
        // the unsymmetrized form
        let mut raw = P::zero();
        for i in -2..=2i32 {
            let j = m - i;
            if j.abs() <= 2 {
                raw.add_term(
                    Monomial::gen(t(i)).mul(&Monomial::gen(t(j))),
                    qvir(j as i64).neg(),
                );
            }
        }
        assert_eq!(raw, want);
    }
}

#[test]
fn low_hamiltonians_are_central_for_first_bracket() {
    for n in 2..=3u16 {
        let w = Window::inflated(2, 2, 4);
        let s = field_bracket(Family::T, 1, &h1(w), &KernelSet::kdv1(n, true)).unwrap();
        assert!(s.is_zero());
    }
}

fn j2(w: Window) -> Functional<QRat> {
    let mut p = P::zero();
    for i in 1..=w.m_expr {
        let c = q(i as i64)
            .mul(&QRat::from_i64(i as i64))
            .div(&QRat::one_minus_qpow(2 * i as i64))
            .unwrap();
        p.add_term(Monomial::gen(t(i)).mul(&Monomial::gen(t(-i))), c);
    }
    Functional::new(p, w)
}

#[test]
fn j2_commutes_with_h1() {
    let w = Window::inflated(3, 2, 4);
    for ks in [KernelSet::kdv1(2, true), KernelSet::kdv2(2, true)] {
        let b = bracket(&j2(w), &h1(w), &ks).unwrap();
        assert!(b.is_zero(), "{}: {:?}", ks.name(), b.value);
    }
}

#[test]
fn bracket_is_antisymmetric_and_needs_room() {
    let w = Window::inflated(2, 2, 4);
    let ks = KernelSet::kdv2(2, true);
    let f = j2(w);
    let g = Functional::new(P::gen(t(1)).mul(&P::gen(t(-1)), &w).add(&P::gen(t(0))), w);
    let a = bracket(&f, &g, &ks).unwrap();
    let b = bracket(&g, &f, &ks).unwrap();
    assert_eq!(a.value, b.value.neg());
    assert!(bracket(&h1(Window::point(2, 4)), &h1(Window::point(2, 4)), &ks).is_err());
    let narrow = Window::inflated(2, 1, 4);
    assert!(bracket(&j2(narrow), &h1(narrow), &ks).is_err());
}

fn random_functional(rng: &mut ChaCha8Rng, comps: u16, m_pt: i32, w: Window) -> Functional<QRat> {
    let mut p = P::zero();
    for _ in 0..3 {
        let deg = rng.gen_range(1..=2);
        let mut mono = Monomial::one();
        for _ in 0..deg {
            let g = Gen::t(rng.gen_range(1..=comps), rng.gen_range(-m_pt..=m_pt));
            mono = mono.mul(&Monomial::gen(g));
        }
        p.add_term(
            mono,
            QRat::from_rat(&rat(rng.gen_range(-3..=3), rng.gen_range(1..=2))),
        );
    }
    Functional::new(p, w)
}

#[test]
fn jacobi_for_random_quadratic_functionals() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let w = Window {
        m_pt: 2,
        m_expr: 8,
        jet: 2,
        k: 4,
        degcap: None,
    };
    let sets = [
        KernelSet::kdv1(2, true),
        KernelSet::kdv2(2, true),
        KernelSet::kdv1(2, true).plus(rat(1, 1), &KernelSet::kdv2(2, true)),
    ];
    for ks in &sets {
        for _ in 0..2 {
            let f = random_functional(&mut rng, 1, 2, w);
            let g = random_functional(&mut rng, 1, 2, w);
            let h = random_functional(&mut rng, 1, 2, w);
            let j = jacobiator(&f, &g, &h, ks).unwrap();
            assert!(j.is_zero(), "{}: {j:?}", ks.name());
        }
    }
}

#[test]
fn jacobiator_detects_a_broken_bracket() {
    // (1 - x) alone is not a Poisson kernel on t(z)
    let k = BracketKernel {
        left: (Family::T, 1),
        right: (Family::T, 1),
        smooth: vec![SmoothTerm {
            phi: Phi {
                c: rat(1, 1),
                shift: 0,
                num: vec![1],
                den: vec![],
            },
            z: Factor::Field(Family::T, 1),
            w: Factor::Unit,
        }],
        deltas: vec![],
    };
    let ks = KernelSet::single(custom_table("broken", vec![(Family::T, 1)], vec![k]));
    let w = Window {
        m_pt: 1,
        m_expr: 6,
        jet: 2,
        k: 4,
        degcap: None,
    };
    let f = Functional::new(P::gen(t(1)), w);
    let g = Functional::new(P::gen(t(-1)), w);
    let h = Functional::new(P::gen(t(0)).mul(&P::gen(t(0)), &w), w);
    let j = jacobiator(&f, &g, &h, &ks).unwrap();
    assert!(!j.is_zero());
}

#[test]
fn linear_functionals_n2() {
    let one = QRat::one();
    for a in -2..=2 {
        for b in -2..=2 {
            let x = BTreeMap::from([(1, BTreeMap::from([(-a, one.clone())]))]);
            let y = BTreeMap::from([(1, BTreeMap::from([(-b, one.clone())]))]);
            let (lhs, rhs) =
                linear_functional_bracket(2, &x, &y, 2, &KernelSet::kdv1(2, true)).unwrap();
            assert_eq!(lhs, rhs, "a={a} b={b}");
        }
    }
}

fn random_x(rng: &mut ChaCha8Rng, n: u16) -> BTreeMap<i32, BTreeMap<i32, QRat>> {
    let mut x = BTreeMap::new();
    for i in 1..n as i32 {
        let mut s = BTreeMap::new();
        s.insert(rng.gen_range(-2..=2), QRat::from_i64(rng.gen_range(1..=3)));
        x.insert(i, s);
    }
    x
}

#[test]
fn linear_functionals_n4() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..3 {
        let (x, y) = (random_x(&mut rng, 4), random_x(&mut rng, 4));
        let (lhs, rhs) =
            linear_functional_bracket(4, &x, &y, 2, &KernelSet::kdv1(4, true)).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn linear_functionals_n3() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (ks, printed) = (KernelSet::kdv1(3, true), KernelSet::kdv1_printed(3, true));
    let mut nonzero = 0;
    for _ in 0..6 {
        let (x, y) = (random_x(&mut rng, 3), random_x(&mut rng, 3));
        let (lhs, rhs) = linear_functional_bracket(3, &x, &y, 2, &ks).unwrap();
        nonzero += !lhs.is_zero() as u32;
        assert_eq!(lhs, rhs);
        // a bare t_N in the kernel flips the sign at odd N
        let (bare, _) = linear_functional_bracket(3, &x, &y, 2, &printed).unwrap();
        assert_eq!(bare, rhs.neg());
        let (z, _) = linear_functional_bracket(3, &x, &x, 2, &ks).unwrap();
        assert!(z.is_zero());
    }
    assert!(nonzero > 0);
    let bad = BTreeMap::from([(3, BTreeMap::from([(0, QRat::one())]))]);
    assert!(linear_functional_bracket(3, &bad, &bad, 2, &ks).is_err());
}

#[test]
fn printed_first_bracket_is_a_sign_flip() {
    let w = Window::point(2, 4);
    for n in 2..=5u16 {
        let (a, b) = (KernelSet::kdv1(n, false), KernelSet::kdv1_printed(n, false));
        let s = if n % 2 == 0 {
            QRat::one()
        } else {
            QRat::one().neg()
        };
        for i in 1..n {
            for j in 1..n {
                let (x, y) = (Gen::t(i, 1), Gen::t(j, -1));
                let p: P = a.mode_bracket(&x, &y, &w).unwrap();
                assert_eq!(p.scale(&s), b.mode_bracket(&x, &y, &w).unwrap());
            }
        }
    }
}
