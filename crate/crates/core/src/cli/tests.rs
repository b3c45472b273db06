use proptest::prelude::*;

use super::*;
use crate::coeffs::{rat, QPoly, Ring};
use crate::modering::Monomial;
use crate::opalg::Op;

fn w() -> Window {
    Window::point(2, 4)
}

fn parse(s: &str) -> Op<QRat> {
    parse_op(s, w()).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn cli(args: &[&str]) -> Output {
    let cfg =
        RunConfig::try_parse_from(std::iter::once("qkdv").chain(args.iter().copied())).unwrap();
    run(&cfg).unwrap()
}

#[test]
fn monomial_prints_and_parses() {
    let p = Poly::<QRat>::term(
        QRat::one(),
        Monomial::from_factors(vec![(Gen::t(1, 0), 1), (Gen::t(1, 1), 1)]),
    );
    assert_eq!(p.to_string(), "t1[0]*t1[1]");
    assert_eq!(parse_poly::<QRat>("t1[0]*t1[1]", w()).unwrap(), p);
}

#[test]
fn hand_written_operators() {
    let l = parse("D^2 - t1(z) D + 1");
    assert_eq!(l, crate::hierarchy_kdv::lax_operator(2, w(), true));
    let a = parse("lam1[0]^-1 * lam1[0]");
    assert_eq!(a, Op::one(w()));
    let b = parse("(q^2 - 1)/(q + 1) * z^-1");
    assert_eq!(b, parse("(q - 1) z^-1"));
    assert_eq!(
        parse("t1(zq)"),
        Op::term(0, Series::gen_series(w(), Family::T, 1).q_shift(1))
    );
    assert_eq!(parse("D + O(D^-2)").valid_from(), -1);
}

#[test]
fn parse_errors_point_at_the_input() {
    for bad in ["t1[0]^-1", "D / D", "t1(", "3 $", "O(D^2)*D", "foo1[0]"] {
        assert!(
            matches!(parse_op::<QRat>(bad, w()), Err(Error::Parse { .. })),
            "{bad}"
        );
    }
}

#[test]
fn generic_root_round_trips() {
    let s = KdVState::<QRat>::new(2, w(), true).unwrap();
    let p = s.root().unwrap().clone();
    assert!(!p.is_exact());
    assert_eq!(parse(&p.to_string()), p);
}

#[test]
fn ham_prints_h1() {
    let out = cli(&["ham", "--N", "2", "--n", "1"]);
    assert_eq!(out.to_text(), "H1 = -t1[0]\n");
}

#[test]
fn flow_is_the_first_flow_formula() {
    let Output::Values { values, .. } = cli(&["flow", "--N", "3", "--n", "1", "--window", "1"])
    else {
        panic!()
    };
    let w = Window::point(1, 3);
    let want = crate::hierarchy_kdv::qkdv1_formula::<QRat>(3, w, true).unwrap();
    for (i, s) in want.iter().enumerate() {
        for m in -1..=1 {
            let key = format!("d_tau1 t{}[{m}]", i + 1);
            let got = &values.iter().find(|(k, _)| *k == key).unwrap().1;
            assert_eq!(parse_poly::<QRat>(got, w).unwrap(), s.coeff(m), "{key}");
        }
    }
}

#[test]
fn verify_json_has_the_schema() {
    let out = cli(&["verify", "toda", "--json"]);
    assert!(out.pass());
    let v: serde_json::Value = serde_json::from_str(&out.to_json()).unwrap();
    assert_eq!(v["suite"], "toda");
    assert_eq!(v["pass"], true);
    let c = &v["checks"][0];
    assert!(c["name"].is_string() && c["anchor"].is_string() && c["status"] == "pass");
    assert!(c.get("ms").is_none());
}

#[test]
fn reports_are_deterministic() {
    let a = cli(&["verify", "limits", "--window", "1", "--json"]).to_json();
    let b = cli(&["verify", "limits", "--window", "1", "--json"]).to_json();
    assert_eq!(a, b);
}

#[test]
fn config_is_validated() {
    for args in [
        &["--N", "1", "ham"][..],
        &["--window", "0", "ham"],
        &["--m-expr", "3", "--window", "2", "ham", "--n", "2"],
        &["--numeric", "x", "ham"],
    ] {
        let cfg =
            RunConfig::try_parse_from(std::iter::once("qkdv").chain(args.iter().copied())).unwrap();
        assert!(matches!(run(&cfg), Err(Error::Config(_))), "{args:?}");
    }
}

#[test]
fn bracket_of_generators() {
    let out = cli(&["bracket", "t1[1]", "t1[-1]", "--structure", "first"]);
    assert!(out.to_text().starts_with("{t1[1],t1[-1]}_1 = "));
    assert!(
        RunConfig::try_parse_from(["qkdv", "bracket", "2*t1[1]", "t1[0]"])
            .map(|c| run(&c).is_err())
            .unwrap()
    );
}

fn arb_qrat() -> impl Strategy<Value = QRat> {
    (-3i64..=3, 1i64..=3, -2i64..=2, 0usize..3).prop_map(|(a, b, c, d)| {
        let num = QPoly::new(vec![rat(a, b), Rat::from(c)]);
        let den = [
            QPoly::from_ints(&[1]),
            QPoly::from_ints(&[1, 1]),
            QPoly::from_ints(&[-1, 0, 1]),
        ][d]
            .clone();
        QRat::new(num, den).unwrap()
    })
}

fn arb_gen() -> impl Strategy<Value = (Gen, i32)> {
    prop_oneof![
        (1u16..=2, -2i32..=2, 1i32..=2).prop_map(|(c, m, e)| (Gen::t(c, m), e)),
        (1u16..=2, -2i32..=2, 1i32..=2).prop_map(|(c, m, e)| (Gen::lam(c, m), e)),
        (1u16..=2, -2i32..=-1).prop_map(|(c, e)| (Gen::lam(c, 0), e)),
    ]
}

fn arb_op() -> impl Strategy<Value = Op<QRat>> {
    let term = (
        -2i32..=2,
        -2i32..=2,
        arb_qrat(),
        prop::collection::vec(arb_gen(), 0..3),
    );
    (
        prop::collection::vec(term, 0..5),
        prop::option::of(-4i32..=-3),
    )
        .prop_map(|(ts, valid)| {
            let mut o = Op::zero(w());
            for (d, m, c, f) in ts {
                let p = Poly::term(c, Monomial::from_factors(f)).truncate(&w());
                o.add_at(d, Series::from_mode(w(), m, p));
            }
            match valid {
                Some(v) => o.with_valid(v),
                None => o,
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parse_inverts_display(o in arb_op()) {
        prop_assert_eq!(parse(&o.to_string()), o);
    }
}
