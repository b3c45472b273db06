use super::*;
use crate::coeffs::QRat;
use crate::hierarchy_kdv::{qkdv_flow_op, KdVState};

type S = MKdVState<QRat>;

fn lam(w: Window, i: u16) -> Series<QRat> {
    Series::gen_series(w, Family::Lam, i)
}

#[test]
fn n2_images() {
    let w = Window::point(2, 4);
    let s = S::new(2, w, false).unwrap();
    let t = s.t_images(1);
    assert_eq!(t[0], lam(w, 1).add(&lam(w, 2).q_shift(1)));
    assert_eq!(t[1], lam(w, 1).mul(&lam(w, 2)));
    assert_eq!(s.miura(3), s.miura(1));
}

#[test]
fn zero_tuple_gives_d_to_the_n() {
    let w = Window::point(1, 4);
    let s = S::new(3, w, false).unwrap();
    let zero = |_: &Gen| Some(Poly::zero());
    assert_eq!(s.miura(2).substitute(&zero), Op::d_pow(w, 3));
}

#[test]
fn reduced_tuple_lands_on_t_n_equal_one() {
    for n in 2..=3u16 {
        let w = Window::point(1, 4).with_degcap(3);
        let s = S::new(n, w, true).unwrap();
        let t = s.t_images(1);
        assert_eq!(t[n as usize - 1], Series::one(w));
    }
}

#[test]
fn lax_pair_commutes() {
    for n in 2..=3u16 {
        let s = S::new(n, Window::point(1, 4), false).unwrap();
        let lp = s.lax_pair().unwrap();
        let zero = |_: &Gen| Some(Poly::zero());
        assert_eq!(
            lp.p(1).substitute(&zero),
            Op::d_pow(s.w, 1).with_valid(lp.p(1).valid_from())
        );
    }
}

#[test]
fn perturbed_root_does_not_commute() {
    let s = S::new(2, Window::point(1, 4), false).unwrap();
    let lp = s.lax_pair().unwrap();
    let mut d = vec![lp.p(1).clone(), lp.p(2).clone()];
    d[0] = d[0].add(&Op::term(-1, Series::one(s.w)));
    let c = mat_commutator(&lp.tl, &MatrixOp::diag(d)).unwrap();
    assert!(c.nonzero_witness().is_some());
}

#[test]
fn flows_are_pullbacks_of_kdv_flows() {
    for (n, flows) in [(2u16, vec![1, 2, 3]), (3, vec![1])] {
        let w = Window::point(1, 2);
        let s = S::new(n, w, false).unwrap();
        let lp = s.lax_pair().unwrap();
        for k in flows {
            let x = qmkdv_flow(&s, &lp, k).unwrap();
            if k % n as u32 == 0 {
                assert!(x.is_zero(), "N={n} n={k}");
            }
            // every mode of the flow is within reach
            let wj = w.with_jet(1, (k as i32 + 2 * n as i32) * w.m_pt);
            let sj = S::new(n, wj, false).unwrap();
            for i in 1..=n as i32 {
                let l = s.miura(i).with_window(w.with_k(k as i32 - 1 + n as i32));
                let want = qkdv_flow_op(&KdVState::from_op(n, l, false).unwrap(), k).unwrap();
                let l = sj.miura(i);
                for d in 0..n as i32 {
                    let got = derive_series(&x, &l.coeff(d), n as u32).unwrap();
                    assert_eq!(got, want.coeff(d), "N={n} n={k} i={i} D^{d}");
                }
            }
            let prod = (2..=n as i32).fold(sj.lam(1).clone(), |a, j| a.mul(sj.lam(j)));
            assert!(derive_series(&x, &prod, n as u32).unwrap().is_zero());
        }
    }
}
