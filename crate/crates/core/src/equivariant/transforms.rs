//! Transforms preserving recursivity and mutual polynomiality, and deliberate mutants.

use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::{AlphaSpec, FixedPointSeries};
use crate::algebra::rational::{ratio, Rational};
use crate::algebra::{Poly, RatFn, Ring, TruncatedSeries};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Transform {
    /// Z ↦ (x + ℏ u d/du)Z.
    Derivative,
    /// Z ↦ f(u)Z.
    MulUPoly(Poly<Rational>),
    /// Z ↦ f(ℏ)Z.
    MulHPoly(Poly<Rational>),
    /// Y, Z ↦ e^{f(u)/ℏ}Y, e^{f(u)/ℏ}Z with f(0) = 0.
    ExpFOverH(Poly<Rational>),
    /// Y, Z ↦ e^{xg(u)/ℏ}·(series)(ℏ, x, ue^{g(u)}) with g(0) = 0.
    Mirror(Poly<Rational>),
}

impl Transform {
    pub fn name(&self) -> &'static str {
        match self {
            Transform::Derivative => "derivative",
            Transform::MulUPoly(_) => "mul_u_poly",
            Transform::MulHPoly(_) => "mul_h_poly",
            Transform::ExpFOverH(_) => "exp_f_over_h",
            Transform::Mirror(_) => "mirror",
        }
    }

    /// One representative of each kind.
    pub fn samples() -> Vec<Transform> {
        let p = |c: &[(i64, i64)]| Poly::from_coeffs(c.iter().map(|&(a, b)| ratio(a, b)).collect());
        vec![
            Transform::Derivative,
            Transform::MulUPoly(p(&[(1, 1), (2, 1), (-1, 3)])),
            Transform::MulHPoly(p(&[(1, 2), (1, 1)])),
            Transform::ExpFOverH(p(&[(0, 1), (3, 1), (1, 2)])),
            Transform::Mirror(p(&[(0, 1), (2, 1), (-1, 1)])),
        ]
    }
}

fn as_series(f: &Poly<Rational>, like: &FixedPointSeries) -> TruncatedSeries<Rational> {
    TruncatedSeries::from_prefix(like.var(), like.u_order(), f.coeffs())
}

fn exp_over_h(f: &TruncatedSeries<Rational>, scale: &RatFn) -> Result<TruncatedSeries<RatFn>> {
    let h_inv = RatFn::h_pow(-1);
    f.map(|c| RatFn::constant(c.clone()) * &h_inv * scale).exp()
}

fn mirror_one(m: &FixedPointSeries, spec: &AlphaSpec, g: &TruncatedSeries<Rational>) -> Result<FixedPointSeries> {
    let inner = TruncatedSeries::variable(m.var(), m.u_order()).checked_mul(&g.exp()?)?;
    m.map(|i, s| {
        let factor = exp_over_h(g, &RatFn::constant(spec.alpha[i].clone()))?;
        s.compose(&inner)?.checked_mul(&factor)
    })
}

/// Applies `kind` to the pair (Y, Z), evaluated at every fixed point.
pub fn apply_transform(
    kind: &Transform,
    y: &FixedPointSeries,
    z: &FixedPointSeries,
    spec: &AlphaSpec,
) -> Result<(FixedPointSeries, FixedPointSeries)> {
    match kind {
        Transform::Derivative => Ok((y.clone(), z.x_plus_h_theta(spec)?)),
        Transform::MulUPoly(f) => Ok((y.clone(), z.mul_series(&as_series(f, z))?)),
        Transform::MulHPoly(f) => {
            let f = RatFn::from_poly(f.clone());
            Ok((y.clone(), z.scale_each(|_| f.clone())?))
        }
        Transform::ExpFOverH(f) => {
            if !f.coeff(0).is_zero() {
                return Err(Error::NonZeroConstant);
            }
            let apply = |m: &FixedPointSeries| {
                let factor = exp_over_h(&as_series(f, m), &RatFn::one())?;
                m.map(|_, s| s.checked_mul(&factor))
            };
            Ok((apply(y)?, apply(z)?))
        }
        Transform::Mirror(g) => {
            if !g.coeff(0).is_zero() {
                return Err(Error::NonZeroConstant);
            }
            Ok((mirror_one(y, spec, &as_series(g, y))?, mirror_one(z, spec, &as_series(g, z))?))
        }
    }
}

/// Adds 1/(ℏ − c) to [u^d]Z(ℏ, α_i).
pub fn inject_pole(z: &FixedPointSeries, i: usize, d: usize, c: &Rational) -> Result<FixedPointSeries> {
    if i >= z.n || d > z.u_order() {
        return Err(Error::InvalidParams(format!("no coefficient ({i}, {d}) to mutate")));
    }
    let pole = RatFn::new(Poly::one(), Poly::linear(-c.clone(), Rational::one()))?;
    let mut out = z.clone();
    let s = &mut out.evals[i];
    let updated = s.coeff(d) + &pole;
    s.set_coeff(d, updated);
    Ok(out)
}

/// A seeded series whose coefficients are random Laurent polynomials in ℏ.
pub fn random_laurent(like: &FixedPointSeries, seed: u64) -> FixedPointSeries {
    let mut rng = StdRng::seed_from_u64(seed);
    FixedPointSeries::from_fn(like.n, like.var(), like.u_order(), |_, _| {
        (-3i64..=1).fold(RatFn::zero(), |acc, e| {
            let c = ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5));
            acc + RatFn::h_pow(e).scale(&c)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::equivariant::mpc::{phi_series, MpcMode};
    use crate::equivariant::{build_y_equivariant, check_mpc, check_recursive, EqVariant};
    use crate::hypergeometric::build_i_table;

    fn pair(n: usize, d: usize) -> (AlphaSpec, FixedPointSeries, FixedPointSeries) {
        let spec = AlphaSpec::generic(n, d, 0).unwrap();
        let t = build_i_table(n, n, n - 1, d).unwrap();
        let y = build_y_equivariant(&spec, &t, EqVariant::YOverX).unwrap();
        let ym = build_y_equivariant(&spec, &t, EqVariant::YMinusOne).unwrap();
        (spec, y, ym)
    }

    #[test]
    fn h_multiplication_negates_phi() {
        let (spec, y, ym) = pair(2, 2);
        let (y2, z2) = apply_transform(&Transform::MulHPoly(Poly::var()), &y, &ym, &spec).unwrap();
        let lhs = phi_series(&y2, &z2, &spec, 2, 3).unwrap();
        let rhs = phi_series(&y, &ym, &spec, 2, 3).unwrap();
        for d in 0..=2 {
            for q in 0..=3 {
                assert_eq!(lhs.coeff(d, q), &(rhs.coeff(d, q) * &RatFn::h()).scale(&rat(-1)));
            }
        }
    }

    #[test]
    fn derivative_differentiates_phi_in_z() {
        let (spec, y, ym) = pair(2, 2);
        let (_, zbar) = apply_transform(&Transform::Derivative, &y, &ym, &spec).unwrap();
        // Φ_{Z̄,Y} = d/dz Φ_{Z,Y}
        let lhs = phi_series(&zbar, &y, &spec, 2, 3).unwrap();
        let rhs = phi_series(&ym, &y, &spec, 2, 4).unwrap();
        for d in 0..=2 {
            for q in 0..=3 {
                assert_eq!(lhs.coeff(d, q), &rhs.coeff(d, q + 1).scale(&rat(q as i64 + 1)));
            }
        }
    }

    #[test]
    fn trivial_mirror_is_identity() {
        let (spec, y, ym) = pair(2, 2);
        let (y2, z2) = apply_transform(&Transform::Mirror(Poly::from_coeffs(vec![])), &y, &ym, &spec).unwrap();
        assert_eq!((&y2, &z2), (&y, &ym));
        assert!(apply_transform(&Transform::Mirror(Poly::constant(rat(1))), &y, &ym, &spec).is_err());
    }

    #[test]
    fn transforms_keep_pair_valid() {
        let (spec, y, ym) = pair(3, 2);
        for t in Transform::samples() {
            let (y2, z2) = apply_transform(&t, &y, &ym, &spec).unwrap();
            assert!(check_recursive(&z2, &spec, 3, 2).unwrap().passed(), "{}", t.name());
            assert!(check_mpc(&y2, &z2, &spec, 2, MpcMode::Interpolation).unwrap().passed(), "{}", t.name());
        }
    }

    #[test]
    fn transforms_keep_mutant_invalid() {
        let (spec, y, ym) = pair(3, 2);
        let c = &rat(1) + &spec.alpha[1] - &spec.alpha[0];
        let mutant = inject_pole(&ym, 0, 1, &c).unwrap();
        for t in Transform::samples() {
            let (_, z2) = apply_transform(&t, &y, &mutant, &spec).unwrap();
            assert!(!check_recursive(&z2, &spec, 3, 2).unwrap().passed(), "{}", t.name());
        }
    }

    #[test]
    fn random_series_fails_mpc() {
        let (spec, y, _) = pair(2, 1);
        let r = check_mpc(&y, &random_laurent(&y, 7), &spec, 1, MpcMode::Interpolation).unwrap();
        assert!(!r.passed());
    }
}
