use mirror_gw_core::algebra::rational::{decode, encode, ratio, Rational};
use mirror_gw_core::algebra::{lagrange_interpolate, Poly, RatFn, TruncatedSeries, Var};
use mirror_gw_core::localization::{psi_by_string_equation, psi_integral};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=12).prop_map(|(n, d)| ratio(n, d))
}

fn poly(max_len: usize) -> impl Strategy<Value = Poly<Rational>> {
    prop::collection::vec(rational(), 0..=max_len).prop_map(Poly::from_coeffs)
}

fn nonzero_poly(max_len: usize) -> impl Strategy<Value = Poly<Rational>> {
    poly(max_len).prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfn() -> impl Strategy<Value = RatFn> {
    (poly(4), nonzero_poly(4)).prop_map(|(n, d)| RatFn::new(n, d).unwrap())
}

fn series(order: usize) -> impl Strategy<Value = TruncatedSeries<Rational>> {
    prop::collection::vec(rational(), order + 1).prop_map(move |c| TruncatedSeries::new(Var::U, order, c).unwrap())
}

proptest! {
    #[test]
    fn rational_text_round_trips(r in rational()) {
        prop_assert_eq!(decode(&encode(&r)).unwrap(), r);
    }

    #[test]
    fn polynomials_distribute(a in poly(5), b in poly(5), c in poly(5)) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
    }

    #[test]
    fn division_with_remainder(a in poly(7), b in nonzero_poly(4)) {
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.is_zero() || r.degree() < b.degree());
    }

    #[test]
    fn gcd_divides_both(a in nonzero_poly(5), b in nonzero_poly(5), c in nonzero_poly(3)) {
        let (x, y) = (&a * &c, &b * &c);
        let g = x.gcd(&y);
        prop_assert!(x.div_rem(&g).unwrap().1.is_zero());
        prop_assert!(y.div_rem(&g).unwrap().1.is_zero());
        prop_assert!(g.degree() >= c.degree());
    }

    #[test]
    fn rational_functions_form_a_field(f in ratfn(), g in ratfn()) {
        prop_assert_eq!(&(&f + &g) - &g, f.clone());
        if !f.is_zero() {
            prop_assert_eq!(&f * &f.inv().unwrap(), RatFn::one());
        }
        prop_assert_eq!(f.neg_h().neg_h(), f);
    }

    #[test]
    fn evaluation_is_a_homomorphism(f in ratfn(), g in ratfn(), at in rational()) {
        if let (Ok(x), Ok(y)) = (f.eval(&at), g.eval(&at)) {
            prop_assert_eq!((&f * &g).eval(&at).unwrap(), &x * &y);
            prop_assert_eq!((&f + &g).eval(&at).unwrap(), &x + &y);
        }
    }

    #[test]
    fn series_reciprocal(s in series(6), c in rational()) {
        let mut s = s;
        let c = if c.is_zero() { Rational::one() } else { c };
        s.set_coeff(0, c);
        prop_assert_eq!(s.checked_mul(&s.recip().unwrap()).unwrap(), TruncatedSeries::one(Var::U, 6));
    }

    #[test]
    fn log_inverts_exp(s in series(6)) {
        let mut s = s;
        s.set_coeff(0, Rational::zero());
        prop_assert_eq!(s.exp().unwrap().log().unwrap(), s);
    }

    #[test]
    fn exponential_reversion(g in series(6)) {
        let mut g = g;
        g.set_coeff(0, Rational::zero());
        let phi = TruncatedSeries::revert_exp(&g, Var::U).unwrap();
        let back = phi.checked_mul(&g.compose(&phi).unwrap().exp().unwrap()).unwrap();
        prop_assert_eq!(back, TruncatedSeries::variable(Var::U, 6));
    }

    #[test]
    fn interpolation_recovers_polynomials(
        coeffs in prop::collection::vec(ratfn(), 1..=5),
        alpha in prop::collection::btree_set(-20i64..=20, 5),
    ) {
        let target = Poly::from_coeffs(coeffs.clone());
        let alpha: Vec<i64> = alpha.into_iter().collect();
        // Nodes α_m + mℏ stay pairwise distinct as rational functions.
        let nodes: Vec<Poly<Rational>> = (0..coeffs.len())
            .map(|m| Poly::linear(ratio(alpha[m], 1), ratio(m as i64, 1)))
            .collect();
        let values: Vec<RatFn> = nodes.iter().map(|x| target.eval(&RatFn::from_poly(x.clone()))).collect();
        prop_assert_eq!(lagrange_interpolate(&nodes, &values).unwrap(), target);
    }

    #[test]
    fn psi_closed_form_matches_string_equation(exps in prop::collection::vec(0usize..4, 3..=10)) {
        let k = exps.len();
        let mut e = exps;
        // Force the dimension constraint half the time so nonzero values are exercised.
        let total: usize = e.iter().sum();
        if total > k - 3 && e[0] >= total - (k - 3) {
            e[0] -= total - (k - 3);
        }
        prop_assert_eq!(psi_integral(&e).unwrap(), psi_by_string_equation(&e).unwrap());
    }
}
