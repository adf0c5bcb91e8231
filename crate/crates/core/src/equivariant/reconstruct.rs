//! Degree-by-degree reconstruction of a C-recursive Z from its polynomial part.

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::mpc::{e_nodes, e_values};
use super::recursion::recursion_coeff;
use super::{AlphaSpec, FixedPointSeries};
use crate::algebra::rational::{rat, Rational};
use crate::algebra::{lagrange_interpolate, linalg, Poly, RatFn, Ring};
use crate::error::{Error, Result};

/// The prescribed part of Z(ℏ, α_i, u) surviving modulo ℏ^{-1}, per fixed point and degree.
#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionSeed {
    /// `polys[i][d]`.
    pub polys: Vec<Vec<Poly<Rational>>>,
}

impl ReconstructionSeed {
    pub fn zero(n: usize, d_max: usize) -> Self {
        Self {
            polys: vec![vec![Poly::zero(); d_max + 1]; n],
        }
    }

    /// The polynomial parts of every coefficient of `z`.
    pub fn from_series(z: &FixedPointSeries) -> Self {
        Self {
            polys: z
                .evals
                .iter()
                .map(|s| s.coeffs().iter().map(RatFn::polynomial_part).collect())
                .collect(),
        }
    }

    pub fn get(&self, i: usize, d: usize) -> Poly<Rational> {
        self.polys.get(i).and_then(|v| v.get(d)).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.polys.len().max(rhs.polys.len());
        let len = |s: &Self| s.polys.iter().map(Vec::len).max().unwrap_or(0);
        let d = len(self).max(len(rhs));
        Self {
            polys: (0..n)
                .map(|i| (0..d).map(|k| self.get(i, k) + &rhs.get(i, k)).collect())
                .collect(),
        }
    }
}

/// Default cap on the ℏ^{-1}-tail length: d + n + 2.
pub fn default_bound(n: usize) -> impl Fn(usize) -> usize {
    move |d| d + n + 2
}

/// Σ_{d₀ ≤ d, j ≠ i} C_i^j(d₀)·[u^{d−d₀}]Z(c, α_j)/(ℏ − c), c = (α_j − α_i)/d₀.
fn pole_part(z: &FixedPointSeries, spec: &AlphaSpec, a: usize, i: usize, d: usize) -> Result<RatFn> {
    let mut acc = RatFn::zero();
    for d0 in 1..=d {
        for j in (0..spec.n).filter(|&j| j != i) {
            let c = (&spec.alpha[j] - &spec.alpha[i]) / rat(d0 as i64);
            let value = z.coeff(j, d - d0).eval(&c)?;
            if value.is_zero() {
                continue;
            }
            let coeff = recursion_coeff(spec, a, i, j, d0)? * value;
            acc = acc + RatFn::new(Poly::constant(coeff), Poly::linear(-c, Rational::one()))?;
        }
    }
    Ok(acc)
}

fn lcm(a: &Poly<Rational>, b: &Poly<Rational>) -> Result<Poly<Rational>> {
    Ok((a.clone() * b).div_exact(&a.gcd(b))?.monic())
}

/// Coefficients of `f·den` reduced modulo `den`, as a vector of length deg(den).
fn residue_vector(f: &RatFn, den: &Poly<Rational>) -> Result<Vec<Rational>> {
    let width = den.degree().unwrap_or(0);
    let lifted = f.num().clone() * &den.div_exact(f.den())?;
    let (_, rem) = lifted.div_rem(den)?;
    Ok((0..width).map(|e| rem.coeff(e)).collect())
}

/// Builds Z to order `d_max` from the recursion, the seed and the requirement that every
/// E_{Z,Y;d} be polynomial in ℏ. The ℏ^{-1} tails are the unknowns, solved exactly.
pub fn reconstruct(
    y: &FixedPointSeries,
    spec: &AlphaSpec,
    a: usize,
    seed: &ReconstructionSeed,
    n_bound: impl Fn(usize) -> usize,
    d_max: usize,
) -> Result<FixedPointSeries> {
    let n = spec.n;
    if y.n != n || d_max > y.u_order() {
        return Err(Error::InvalidParams("Y must match the weights and reach order D".into()));
    }
    for i in 0..n {
        if y.coeff(i, 0).is_zero() {
            return Err(Error::InvalidParams(format!("Y(ℏ, α_{}, 0) vanishes", i + 1)));
        }
    }
    let mut z = FixedPointSeries::constant(n, y.var(), d_max, |_| RatFn::zero());
    for d in 0..=d_max {
        let known = (0..n)
            .into_par_iter()
            .map(|i| Ok(pole_part(&z, spec, a, i, d)? + RatFn::from_poly(seed.get(i, d))))
            .collect::<Result<Vec<_>>>()?;
        for (i, k) in known.iter().enumerate() {
            z.evals[i].set_coeff(d, k.clone());
        }
        let bound = n_bound(d);
        if bound == 0 {
            continue;
        }
        let nodes = e_nodes(spec, d);
        let base = lagrange_interpolate(&nodes, &e_values(&z, y, spec, d))?;
        // The unknown z_{i,r} enters only through the node α_i + dℏ, with value
        // Q_d(ℏ, α_i)·ℏ^{-r}·Y(−ℏ, α_i, 0).
        let basis = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut unit = vec![RatFn::zero(); nodes.len()];
                unit[d * n + i] = spec.q_factor(i, d) * y.coeff(i, 0).neg_h();
                lagrange_interpolate(&nodes, &unit)
            })
            .collect::<Result<Vec<_>>>()?;
        let unknowns: Vec<(usize, usize)> = (0..n).flat_map(|i| (1..=bound).map(move |r| (i, r))).collect();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for s in 0..(d + 1) * n {
            let k = base.coeff(s);
            let cols: Vec<RatFn> = unknowns
                .iter()
                .map(|&(i, r)| basis[i].coeff(s) * RatFn::h_pow(-(r as i64)))
                .collect();
            let den = cols.iter().try_fold(k.den().clone(), |acc, c| lcm(&acc, c.den()))?;
            let k_res = residue_vector(&k, &den)?;
            let col_res = cols.iter().map(|c| residue_vector(c, &den)).collect::<Result<Vec<_>>>()?;
            for e in 0..k_res.len() {
                rows.push(col_res.iter().map(|c| c[e].clone()).collect::<Vec<_>>());
                rhs.push(-k_res[e].clone());
            }
        }
        let context = format!("degree {d} with ℏ⁻¹-tail bound {bound}");
        let sol = linalg::solve(&rows, &rhs, &context)?;
        for (&(i, r), c) in unknowns.iter().zip(sol) {
            if c.is_zero() {
                continue;
            }
            let updated = z.coeff(i, d) + &RatFn::h_pow(-(r as i64)).scale(&c);
            z.evals[i].set_coeff(d, updated);
        }
    }
    Ok(z)
}
