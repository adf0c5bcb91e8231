//! Torus-equivariant series at specialized weights α and the structural checks on them.
//!
//! Every series is stored through its n fixed-point evaluations x = α_i, with
//! exact coefficients in ℚ(ℏ).

pub mod identities;
pub mod ladder;
pub mod mpc;
pub mod recursion;
pub mod reconstruct;
pub mod report;
pub mod transforms;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{encode, rat, Rational};
use crate::algebra::{RatFn, Ring, TruncatedSeries, Var};
use crate::error::{Error, Result};
use crate::hypergeometric::{validate_degrees, HGTable};

pub use ladder::{build_yp_equivariant, mirror_transform_equivariant, EquivariantLadder, TildeLedger};
pub use mpc::{check_mpc, e_family, phi_series, EPolyFamily, MpcMode, PhiSeries};
pub use recursion::{check_recursive, recursion_coeff};
pub use reconstruct::{reconstruct, ReconstructionSeed};
pub use report::{Failure, Report, Status};
pub use transforms::{apply_transform, Transform};

/// Specialized torus weights α₁, …, α_n and their elementary symmetric values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaSpec {
    pub n: usize,
    #[serde(with = "rational_list")]
    pub alpha: Vec<Rational>,
    #[serde(with = "rational_list")]
    pub sigma: Vec<Rational>,
}

mod rational_list {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use crate::algebra::rational::{decode, encode, Rational};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(encode))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| decode(s).map_err(D::Error::custom))
            .collect()
    }
}

impl AlphaSpec {
    /// Requires distinct, nonzero weights.
    pub fn new(alpha: Vec<Rational>) -> Result<Self> {
        let n = alpha.len();
        if n < 2 {
            return Err(Error::InvalidParams("at least two weights are needed".into()));
        }
        for (i, a) in alpha.iter().enumerate() {
            if a.is_zero() {
                return Err(Error::Resonance(format!("α_{} = 0", i + 1)));
            }
            if alpha[..i].contains(a) {
                return Err(Error::Resonance(format!("α_{} repeats an earlier weight", i + 1)));
            }
        }
        let mut sigma = vec![Rational::one()];
        for a in &alpha {
            let mut next = sigma.clone();
            next.push(Rational::zero());
            for r in 1..next.len() {
                next[r] = &sigma.get(r).cloned().unwrap_or_else(Rational::zero) + &(&sigma[r - 1] * a);
            }
            sigma = next;
        }
        Ok(Self { n, alpha, sigma })
    }

    pub fn from_ints(alpha: &[i64]) -> Result<Self> {
        Self::new(alpha.iter().map(|&a| rat(a)).collect())
    }

    /// α_i = i.
    pub fn standard(n: usize) -> Result<Self> {
        Self::new((1..=n as i64).map(rat).collect())
    }

    /// Checks every non-degeneracy the recursion and its evaluations need up to degree `d_max`:
    /// the denominators of C_i^j(d) and the points (α_j − α_i)/d, which must avoid the
    /// poles (α_k − α_j)/r, r ≤ d_max − d, of the coefficients evaluated there.
    pub fn check_generic(&self, d_max: usize) -> Result<()> {
        let a = &self.alpha;
        for i in 0..self.n {
            for j in (0..self.n).filter(|&j| j != i) {
                for d in 1..=d_max {
                    let c = (&a[j] - &a[i]) / rat(d as i64);
                    for r in 1..=d {
                        for k in 0..self.n {
                            if (r, k) != (d, j) && (&a[i] - &a[k] + &c * rat(r as i64)).is_zero() {
                                return Err(Error::Resonance(format!(
                                    "α_{} − α_{} + {r}(α_{} − α_{})/{d} = 0",
                                    i + 1,
                                    k + 1,
                                    j + 1,
                                    i + 1
                                )));
                            }
                        }
                    }
                    for r in 1..=d_max - d {
                        for k in (0..self.n).filter(|&k| k != j) {
                            if c == (&a[k] - &a[j]) / rat(r as i64) {
                                return Err(Error::Resonance(format!(
                                    "(α_{} − α_{})/{d} is a pole of the restriction to α_{}",
                                    j + 1,
                                    i + 1,
                                    j + 1
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Deterministic candidate weight vectors: 1..n, the first n primes, then k^i + i for k = 2, 3, ….
    pub fn candidates(n: usize) -> impl Iterator<Item = Vec<i64>> {
        let standard = (1..=n as i64).collect::<Vec<_>>();
        let primes = first_primes(n);
        let powers = (2i64..).map(move |k| (1..=n as u32).map(|i| k.pow(i) + i as i64).collect::<Vec<_>>());
        [standard, primes].into_iter().chain(powers)
    }

    /// The first candidate passing [`AlphaSpec::check_generic`], after skipping `skip` passing ones.
    pub fn generic(n: usize, d_max: usize, skip: usize) -> Result<Self> {
        Self::candidates(n)
            .take(64)
            .filter_map(|c| Self::from_ints(&c).ok())
            .filter(|s| s.check_generic(d_max).is_ok())
            .nth(skip)
            .ok_or_else(|| Error::Resonance(format!("no generic weights found for n = {n}, d ≤ {d_max}")))
    }

    /// 1/∏_{k≠i}(α_i − α_k).
    pub fn weight(&self, i: usize) -> Rational {
        (0..self.n)
            .filter(|&k| k != i)
            .fold(Rational::one(), |acc, k| acc * (&self.alpha[i] - &self.alpha[k]))
            .recip()
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.alpha.iter().map(encode).collect();
        format!("({})", parts.join(", "))
    }

    /// Q_d(ℏ, α_i) = ∏_{r=1}^{d}∏_k(α_i − α_k + rℏ).
    pub fn q_factor(&self, i: usize, d: usize) -> RatFn {
        let mut acc = RatFn::one();
        for r in 1..=d {
            for k in 0..self.n {
                acc = acc * RatFn::linear(&self.alpha[i] - &self.alpha[k], rat(r as i64));
            }
        }
        acc
    }
}

fn first_primes(n: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(n);
    let mut c = 2i64;
    while out.len() < n {
        if (2..c).take_while(|p| p * p <= c).all(|p| c % p != 0) {
            out.push(c);
        }
        c += 1;
    }
    out
}

/// A series Z(ℏ, x, u) through its restrictions Z(ℏ, α_i, u), i = 1..n.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointSeries {
    pub n: usize,
    pub evals: Vec<TruncatedSeries<RatFn>>,
}

impl FixedPointSeries {
    pub fn new(evals: Vec<TruncatedSeries<RatFn>>) -> Result<Self> {
        let first = evals.first().ok_or_else(|| Error::InvalidParams("no fixed points".into()))?;
        let (var, order) = (first.var(), first.order());
        if evals.iter().any(|s| s.var() != var || s.order() != order) {
            return Err(Error::InvalidParams("fixed-point series disagree in variable or order".into()));
        }
        Ok(Self { n: evals.len(), evals })
    }

    pub fn from_fn(n: usize, var: Var, order: usize, mut f: impl FnMut(usize, usize) -> RatFn) -> Self {
        let evals = (0..n)
            .map(|i| TruncatedSeries::from_fn(var, order, |d| f(i, d)))
            .collect();
        Self { n, evals }
    }

    pub fn constant(n: usize, var: Var, order: usize, c: impl Fn(usize) -> RatFn) -> Self {
        Self::from_fn(n, var, order, |i, d| if d == 0 { c(i) } else { RatFn::zero() })
    }

    pub fn u_order(&self) -> usize {
        self.evals[0].order()
    }

    pub fn var(&self) -> Var {
        self.evals[0].var()
    }

    pub fn coeff(&self, i: usize, d: usize) -> &RatFn {
        self.evals[i].coeff(d)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self {
            n: self.n,
            evals: self.evals.iter().map(|s| s.truncate(order)).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(usize, &TruncatedSeries<RatFn>) -> Result<TruncatedSeries<RatFn>>) -> Result<Self> {
        let evals = self
            .evals
            .iter()
            .enumerate()
            .map(|(i, s)| f(i, s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(evals)
    }

    pub fn zip(&self, rhs: &Self, f: impl Fn(&TruncatedSeries<RatFn>, &TruncatedSeries<RatFn>) -> Result<TruncatedSeries<RatFn>>) -> Result<Self> {
        if self.n != rhs.n {
            return Err(Error::InvalidParams("fixed-point counts differ".into()));
        }
        Self::new(self.evals.iter().zip(&rhs.evals).map(|(a, b)| f(a, b)).collect::<Result<_>>()?)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| a.checked_add(b))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| a.checked_sub(b))
    }

    /// Multiplies every restriction by a ℚ-coefficient series in the same variable.
    pub fn mul_series(&self, f: &TruncatedSeries<Rational>) -> Result<Self> {
        let lifted = f.map(RatFn::from_rational);
        self.map(|_, s| s.checked_mul(&lifted))
    }

    /// Multiplies the restriction at α_i by `c(i)`.
    pub fn scale_each(&self, c: impl Fn(usize) -> RatFn) -> Result<Self> {
        self.map(|i, s| Ok(s.scale(&c(i))))
    }

    /// (x + ℏ u d/du) at every fixed point.
    pub fn x_plus_h_theta(&self, spec: &AlphaSpec) -> Result<Self> {
        let h = RatFn::h();
        self.map(|i, s| {
            let x = RatFn::constant(spec.alpha[i].clone());
            Ok(TruncatedSeries::from_fn(s.var(), s.order(), |d| {
                s.coeff(d) * &x + &(s.coeff(d) * &h).scale(&rat(d as i64))
            }))
        })
    }

    /// The q-series [ℏ^e] (expansion at ℏ = ∞) at fixed point i.
    pub fn h_coeff_series(&self, i: usize, e: i64) -> TruncatedSeries<Rational> {
        let s = &self.evals[i];
        TruncatedSeries::from_fn(s.var(), s.order(), |d| s.coeff(d).coeff_at_infinity(e))
    }

    /// Keeps only the part that survives modulo ℏ^{-1} (the polynomial part at ℏ = ∞).
    pub fn mod_h_inverse(&self) -> Self {
        Self {
            n: self.n,
            evals: self
                .evals
                .iter()
                .map(|s| s.map(|c| RatFn::from_poly(c.polynomial_part())))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.evals.iter().all(|s| s.is_zero())
    }
}

/// Which equivariant hypergeometric series to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EqVariant {
    /// 𝒴 = I_{0,0}^{-1}·x·Σ q^d ∏_{r=1}^{ad}(ax + rℏ)/Q_d(ℏ, x).
    Y,
    /// 𝒴₋₁ = Σ q^d ∏_{r=0}^{ad−1}(ax + rℏ)/Q_d(ℏ, x).
    YMinusOne,
    /// 𝒴/x.
    YOverX,
}

/// Restrictions of 𝒴, 𝒴₋₁ or 𝒴/x to the fixed points, as series in q.
pub fn build_y_equivariant(spec: &AlphaSpec, table: &HGTable, variant: EqVariant) -> Result<FixedPointSeries> {
    validate_degrees(spec.n, table.a)?;
    if table.n != spec.n {
        return Err(Error::InvalidParams("table and weights disagree on n".into()));
    }
    let a = table.a;
    let order = table.u_order;
    let mut evals = Vec::with_capacity(spec.n);
    for i in 0..spec.n {
        let ax = &spec.alpha[i] * rat(a as i64);
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut acc = RatFn::one();
        coeffs.push(acc.clone());
        for d in 1..=order {
            let range = match variant {
                EqVariant::YMinusOne => a * (d - 1)..a * d,
                EqVariant::Y | EqVariant::YOverX => a * (d - 1) + 1..a * d + 1,
            };
            for r in range {
                acc = acc * RatFn::linear(ax.clone(), rat(r as i64));
            }
            for k in 0..spec.n {
                let f = RatFn::linear(&spec.alpha[i] - &spec.alpha[k], rat(d as i64));
                acc = acc * f.inv()?;
            }
            coeffs.push(acc.clone());
        }
        evals.push(TruncatedSeries::new(Var::Q, order, coeffs)?);
    }
    let mut y = FixedPointSeries::new(evals)?;
    if variant != EqVariant::YMinusOne {
        y = y.mul_series(&table.diagonal(0)?.recip()?)?;
    }
    if variant == EqVariant::Y {
        y = y.scale_each(|i| RatFn::constant(spec.alpha[i].clone()))?;
    }
    Ok(y)
}

/// 𝔇^p at every fixed point: M ↦ I_{k,k}^{-1}(x + ℏ d/dt)M for k = 1..p.
pub fn dp_apply_equivariant(p: usize, spec: &AlphaSpec, table: &HGTable, m: &FixedPointSeries) -> Result<FixedPointSeries> {
    if p > table.p_max {
        return Err(Error::InvalidParams(format!("p = {p} exceeds table p_max = {}", table.p_max)));
    }
    let mut out = m.clone();
    for k in 1..=p {
        out = out.x_plus_h_theta(spec)?.mul_series(&table.diagonal(k)?.recip()?)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeometric::build_i_table;

    #[test]
    fn sigma_values() {
        let s = AlphaSpec::from_ints(&[1, 2, 3]).unwrap();
        assert_eq!(s.sigma, vec![rat(1), rat(6), rat(11), rat(6)]);
        assert!(AlphaSpec::from_ints(&[1, 1]).is_err());
        assert!(AlphaSpec::from_ints(&[0, 1]).is_err());
    }

    #[test]
    fn standard_weights_resonate_from_degree_two() {
        let s = AlphaSpec::standard(3).unwrap();
        assert!(s.check_generic(1).is_ok());
        assert!(s.check_generic(2).is_err());
        assert!(AlphaSpec::standard(2).unwrap().check_generic(3).is_ok());
        let g = AlphaSpec::generic(4, 3, 0).unwrap();
        assert!(g.check_generic(3).is_ok());
        assert_ne!(g, AlphaSpec::generic(4, 3, 1).unwrap());
    }

    #[test]
    fn y_minus_one_degree_zero_and_one() {
        let spec = AlphaSpec::from_ints(&[1, 2]).unwrap();
        let t = build_i_table(2, 2, 1, 2).unwrap();
        let y = build_y_equivariant(&spec, &t, EqVariant::YMinusOne).unwrap();
        assert_eq!(y.coeff(0, 0), &RatFn::one());
        // 2α₁(2α₁ + ℏ)/((ℏ)(α₁ − α₂ + ℏ)) at α = (1, 2)
        let num = crate::algebra::Poly::from_coeffs(vec![rat(4), rat(2)]);
        let den = crate::algebra::Poly::from_coeffs(vec![rat(0), rat(-1), rat(1)]);
        assert_eq!(y.coeff(0, 1), &RatFn::new(num, den).unwrap());
    }

    #[test]
    fn y_equals_y_zero_from_y_minus_one() {
        let spec = AlphaSpec::generic(3, 3, 0).unwrap();
        let t = build_i_table(3, 3, 2, 3).unwrap();
        let ym = build_y_equivariant(&spec, &t, EqVariant::YMinusOne).unwrap();
        let y = build_y_equivariant(&spec, &t, EqVariant::Y).unwrap();
        let y0 = ym.x_plus_h_theta(&spec).unwrap().mul_series(&t.diagonal(0).unwrap().recip().unwrap()).unwrap();
        assert_eq!(y, y0);
    }
}
