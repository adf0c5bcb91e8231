//! Lagrange interpolation over ℚ(ℏ) at nodes that are affine in ℏ.

use num_traits::{One, Zero};

use super::poly::Poly;
use super::rational::Rational;
use super::ratfn::RatFn;
use crate::error::{Error, Result};

/// The unique polynomial in Ω of degree < L over ℚ(ℏ) taking `values[m]` at `nodes[m]`.
///
/// Newton divided differences; every node difference is inverted exactly.
pub fn lagrange_interpolate(nodes: &[Poly<Rational>], values: &[RatFn]) -> Result<Poly<RatFn>> {
    if nodes.len() != values.len() {
        return Err(Error::LengthMismatch {
            nodes: nodes.len(),
            values: values.len(),
        });
    }
    let nodes: Vec<RatFn> = nodes.iter().map(|p| RatFn::from_poly(p.clone())).collect();
    let l = nodes.len();
    let mut inv_diff = vec![vec![RatFn::zero(); l]; l];
    for i in 0..l {
        for j in 0..i {
            let d = &nodes[i] - &nodes[j];
            if d.is_zero() {
                return Err(Error::RepeatedNode(i));
            }
            inv_diff[i][j] = d.inv()?;
        }
    }
    let mut table: Vec<RatFn> = values.to_vec();
    let mut newton = Vec::with_capacity(l);
    for level in 0..l {
        newton.push(table[level].clone());
        for i in (level + 1..l).rev() {
            let num = &table[i] - &table[i - 1];
            table[i] = &num * &inv_diff[i][i - level - 1];
        }
    }
    // Horner on the Newton form: c_0 + (Ω − x_0)(c_1 + (Ω − x_1)(…)).
    let mut acc: Poly<RatFn> = Poly::zero();
    for k in (0..l).rev() {
        let factor = Poly::linear(-nodes[k].clone(), RatFn::one());
        acc = acc * &factor + &Poly::constant(newton[k].clone());
    }
    Ok(acc)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    #[test]
    fn identity_line() {
        let nodes = [Poly::constant(rat(0)), Poly::constant(rat(1))];
        let values = [RatFn::zero(), RatFn::constant(rat(1))];
        let p = lagrange_interpolate(&nodes, &values).unwrap();
        assert_eq!(p, Poly::var());
    }

    #[test]
    fn affine_nodes_reproduce_values() {
        // nodes α, α + ℏ with values ℏ, −ℏ
        let a = rat(3);
        let nodes = [Poly::constant(a.clone()), Poly::linear(a.clone(), rat(1))];
        let values = [RatFn::h(), -RatFn::h()];
        let p = lagrange_interpolate(&nodes, &values).unwrap();
        assert_eq!(p.degree(), Some(1));
        for (n, v) in nodes.iter().zip(&values) {
            assert_eq!(&p.eval(&RatFn::from_poly(n.clone())), v);
        }
        // slope −2, intercept ℏ + 2α
        assert_eq!(p.coeff(1), RatFn::constant(rat(-2)));
    }

    #[test]
    fn errors() {
        let n = [Poly::constant(rat(1)), Poly::constant(rat(1))];
        let v = [RatFn::zero(), RatFn::zero()];
        assert_eq!(lagrange_interpolate(&n, &v), Err(Error::RepeatedNode(1)));
        assert!(matches!(lagrange_interpolate(&n, &v[..1]), Err(Error::LengthMismatch { .. })));
    }
}
