//! The recursion coefficients C_i^j(d) and the C-recursivity check.

use num_traits::{One, Zero};
use serde_json::json;

use super::report::{Failure, Report};
use super::{AlphaSpec, FixedPointSeries};
use crate::algebra::rational::{encode, rat, Rational};
use crate::algebra::{Poly, RatFn};
use crate::error::{Error, Result};

/// C_i^j(d) = ∏_{r=0}^{ad−1}(aα_i + rδ) / [d·∏_{(r,k)≠(d,j)}(α_i − α_k + rδ)] with δ = (α_j − α_i)/d.
pub fn recursion_coeff(spec: &AlphaSpec, a: usize, i: usize, j: usize, d: usize) -> Result<Rational> {
    if i == j || d == 0 {
        return Err(Error::InvalidParams(format!("recursion coefficient needs i ≠ j and d ≥ 1 (i = {i}, j = {j}, d = {d})")));
    }
    let al = &spec.alpha;
    let delta = (&al[j] - &al[i]) / rat(d as i64);
    let ax = &al[i] * rat(a as i64);
    let num = (0..a * d).fold(Rational::one(), |acc, r| acc * (&ax + &delta * rat(r as i64)));
    let mut den = rat(d as i64);
    for r in 1..=d {
        for k in 0..spec.n {
            if (r, k) == (d, j) {
                continue;
            }
            let f = &al[i] - &al[k] + &delta * rat(r as i64);
            if f.is_zero() {
                return Err(Error::Resonance(format!("C_{}^{}({d}) has a vanishing denominator factor", i + 1, j + 1)));
            }
            den *= f;
        }
    }
    Ok(num / den)
}

/// The remainder [u^d]Z(ℏ, α_i) − Σ_{d₀ ≤ d, j ≠ i} C_i^j(d₀)[u^{d−d₀}]Z(c, α_j)/(ℏ − c), c = (α_j − α_i)/d₀.
pub fn recursion_remainder(z: &FixedPointSeries, spec: &AlphaSpec, a: usize, i: usize, d: usize) -> Result<RatFn> {
    let mut rem = z.coeff(i, d).clone();
    for d0 in 1..=d {
        for j in (0..spec.n).filter(|&j| j != i) {
            let c = (&spec.alpha[j] - &spec.alpha[i]) / rat(d0 as i64);
            let value = z.coeff(j, d - d0).eval(&c)?;
            if value.is_zero() {
                continue;
            }
            let coeff = recursion_coeff(spec, a, i, j, d0)? * value;
            let pole = RatFn::new(Poly::constant(coeff), Poly::linear(-c, Rational::one()))?;
            rem = rem - pole;
        }
    }
    Ok(rem)
}

/// A single pole is reported by its location, several by their defining polynomial.
fn describe_poles(den: &Poly<Rational>) -> String {
    match den.degree() {
        Some(1) => format!("pole at ℏ = {}", encode(&(-den.coeff(0) / den.coeff(1)))),
        _ => format!("poles at the roots of {den}"),
    }
}

/// PASS iff every remainder after pole subtraction is a Laurent polynomial in ℏ.
pub fn check_recursive(z: &FixedPointSeries, spec: &AlphaSpec, a: usize, d_max: usize) -> Result<Report> {
    let d_max = d_max.min(z.u_order());
    let mut failures = Vec::new();
    for i in 0..spec.n {
        for d in 0..=d_max {
            let rem = recursion_remainder(z, spec, a, i, d)?;
            if !rem.is_laurent_in_h() {
                failures.push(Failure::at(Some(i), Some(d), describe_poles(&rem.den_without_h())));
            }
        }
    }
    Ok(Report::new(
        "recursion",
        json!({"n": spec.n, "a": a, "alpha": spec.describe(), "d_max": d_max}),
        failures,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Var;
    use crate::equivariant::{build_y_equivariant, EqVariant};
    use crate::hypergeometric::build_i_table;

    #[test]
    fn quadric_coefficient() {
        let spec = AlphaSpec::from_ints(&[1, 2]).unwrap();
        assert_eq!(recursion_coeff(&spec, 2, 0, 1, 1).unwrap(), rat(6));
        assert!(recursion_coeff(&spec, 2, 0, 0, 1).is_err());
    }

    #[test]
    fn constant_series_passes() {
        let spec = AlphaSpec::generic(3, 2, 0).unwrap();
        let one = FixedPointSeries::constant(3, Var::Q, 2, |_| RatFn::one());
        // Z = 1 has no poles, but the recursion subtracts C·1/(ℏ − c) terms in degree ≥ 1.
        let r = check_recursive(&one, &spec, 3, 0).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn y_minus_one_is_recursive_and_mutant_is_not() {
        for n in [2usize, 3, 4] {
            let spec = AlphaSpec::generic(n, 3, 0).unwrap();
            let t = build_i_table(n, n, n - 1, 3).unwrap();
            let ym = build_y_equivariant(&spec, &t, EqVariant::YMinusOne).unwrap();
            assert!(check_recursive(&ym, &spec, n, 3).unwrap().passed(), "n = {n}");
        }
        let spec = AlphaSpec::generic(3, 3, 0).unwrap();
        let t = build_i_table(3, 3, 2, 3).unwrap();
        let ym = build_y_equivariant(&spec, &t, EqVariant::YMinusOne).unwrap();
        let c = rat(1) + &spec.alpha[1] - &spec.alpha[0];
        let bad = crate::equivariant::transforms::inject_pole(&ym, 0, 2, &c).unwrap();
        let r = check_recursive(&bad, &spec, 3, 3).unwrap();
        assert!(!r.passed());
        assert_eq!(r.failures[0].i, Some(0));
        assert_eq!(r.failures[0].d, Some(2));
        assert!(r.failures[0].detail.contains(&encode(&c)), "{}", r.failures[0].detail);
    }
}
