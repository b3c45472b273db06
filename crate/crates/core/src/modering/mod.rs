//! The windowed ring of Fourier modes.
//!
//! Generators `g_i[m]` are the modes of series `g_i(z) = sum_m g_i[m] z^{-m}`.
//! Polynomials in them carry exact coefficients; series are finite maps from
//! mode to polynomial. A [`Window`] fixes which generators survive.

mod gen;
mod poly;
mod series;
mod window;

pub use gen::{Family, Gen};
pub(crate) use poly::write_term;
pub use poly::{Monomial, Poly};
pub use series::Series;
pub use window::Window;

/// `∂F/∂g`.
pub fn gradient<C: crate::coeffs::Ring>(f: &Poly<C>, g: &Gen) -> Poly<C> {
    f.derivative(g)
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::coeffs::{Coeff, QRat, Ring};

    fn w() -> Window {
        Window::point(2, 1).with_degcap(4)
    }

    fn arb_series() -> impl Strategy<Value = Series<QRat>> {
        let term = (
            -2i32..=2,
            -3i64..=3,
            -1i64..=1,
            prop::collection::vec((1u16..=2, -2i32..=2), 0..3),
        );
        prop::collection::vec(term, 0..4).prop_map(|ts| {
            let mut s = Series::zero(w());
            for (m, c, k, gens) in ts {
                let mono = Monomial::from_factors(
                    gens.into_iter().map(|(i, g)| (Gen::t(i, g), 1)).collect(),
                );
                s.add_at(
                    m,
                    Poly::term(QRat::from_i64(c).mul_qpow(k), mono).truncate(&w()),
                );
            }
            s
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn series_form_a_commutative_ring(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert!(a.sub(&a).is_zero());
        }

        #[test]
        fn q_shift_is_a_ring_automorphism(a in arb_series(), b in arb_series(), j in -2i64..=2) {
            prop_assert_eq!(a.mul(&b).q_shift(j), a.q_shift(j).mul(&b.q_shift(j)));
            prop_assert_eq!(a.q_shift(j).q_shift(-j), a);
        }

        #[test]
        fn one_minus_d_has_zero_integral(a in arb_series()) {
            prop_assert!(a.one_minus_d().integral().is_zero());
        }
    }
}
