use super::*;
use crate::coeffs::QRat;

#[test]
fn h1_substitution() {
    let h1: Poly<QRat> = Poly::gen(Gen::t(1, 0)).neg();
    let s = substitute_h(&h1, 4, classical_image).unwrap();
    assert_eq!(h_coeff(&s, 0).unwrap(), Poly::constant(QRat::from_i64(-2)));
    assert_eq!(h_coeff(&s, 2).unwrap(), Poly::gen(u(0)));
}

#[test]
fn inverse_of_a_unit_generator() {
    let p: Poly<QRat> = Poly::term(
        QRat::one(),
        Monomial::from_factors(vec![(Gen::lam(1, 0), -1)]),
    );
    let s = substitute_h(&p, 4, classical_image).unwrap();
    for k in 0..4 {
        let want = Poly::term(
            QRat::one(),
            Monomial::from_factors(if k == 0 {
                vec![]
            } else {
                vec![(v(1, 0), k as i32)]
            }),
        );
        assert_eq!(h_coeff(&s, k).unwrap(), want);
    }
    assert!(h_coeff(&s, 4).is_err());
}

#[test]
fn suite_passes_at_window_one() {
    let mut ck = crate::report::Checker::new(false);
    let mut s = verify::LimitsSuite::new(2, 1);
    s.run(&mut ck);
    for r in &ck.records {
        assert!(
            matches!(r.status, crate::report::Status::Pass),
            "{} {:?}",
            r.name,
            r.witness
        );
    }
}
