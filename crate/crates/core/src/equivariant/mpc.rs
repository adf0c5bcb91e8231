//! Φ_{Y,Z}, the interpolated polynomials E_{Y,Z;d} and the mutual polynomiality check.

use num_traits::{One, Zero};
use serde_json::json;

use super::report::{Failure, Report};
use super::{AlphaSpec, FixedPointSeries};
use crate::algebra::rational::{rat, Rational};
use crate::algebra::{lagrange_interpolate, Poly, RatFn, Ring, TruncatedSeries, Var};
use crate::error::{Error, Result};

/// Coefficients of u^d z^q in Φ_{Y,Z}(ℏ, u, z).
#[derive(Clone, Debug, PartialEq)]
pub struct PhiSeries {
    pub coeffs: Vec<Vec<RatFn>>,
}

impl PhiSeries {
    pub fn coeff(&self, d: usize, q: usize) -> &RatFn {
        &self.coeffs[d][q]
    }

    /// True iff every stored coefficient is a polynomial in ℏ.
    pub fn is_polynomial(&self) -> bool {
        self.coeffs.iter().flatten().all(RatFn::is_polynomial)
    }
}

fn check_pair(y: &FixedPointSeries, z: &FixedPointSeries, spec: &AlphaSpec, d_max: usize) -> Result<()> {
    if y.n != spec.n || z.n != spec.n {
        return Err(Error::InvalidParams("series and weights disagree on n".into()));
    }
    if d_max > y.u_order() || d_max > z.u_order() {
        return Err(Error::BeyondOrder {
            index: d_max,
            order: y.u_order().min(z.u_order()),
        });
    }
    Ok(())
}

/// Numerators of F_{d,q} = q!·[u^d z^q]Φ over one shared denominator, where
/// F_{d,q} = Σ_i w_i Σ_{d'} Y_{d'}(ℏ, α_i)Z_{d−d'}(−ℏ, α_i)(α_i + d'ℏ)^q.
fn f_numerators(
    y: &FixedPointSeries,
    z: &FixedPointSeries,
    spec: &AlphaSpec,
    d: usize,
    q_count: usize,
) -> (Vec<Poly<Rational>>, Poly<Rational>) {
    let mut terms = Vec::new();
    for i in 0..spec.n {
        for dp in 0..=d {
            let prod = y.coeff(i, dp) * &z.coeff(i, d - dp).neg_h();
            if !prod.is_zero() {
                terms.push((i, dp, prod));
            }
        }
    }
    let common = terms.iter().fold(Poly::one(), |acc: Poly<Rational>, (_, _, t)| {
        let g = acc.gcd(t.den());
        &acc * &t.den().div_exact(&g).expect("gcd divides")
    });
    let mut out = vec![Poly::zero(); q_count];
    for (i, dp, prod) in &terms {
        let cofactor = common.div_exact(prod.den()).expect("denominator divides the lcm");
        let base = Poly::linear(spec.alpha[*i].clone(), rat(*dp as i64));
        let mut term = (prod.num() * &cofactor).scale(&spec.weight(*i));
        for slot in out.iter_mut() {
            *slot = &*slot + &term;
            term = &term * &base;
        }
    }
    (out, common)
}

fn f_values(y: &FixedPointSeries, z: &FixedPointSeries, spec: &AlphaSpec, d: usize, q_count: usize) -> Vec<RatFn> {
    let (nums, den) = f_numerators(y, z, spec, d, q_count);
    nums.into_iter().map(|p| RatFn::new(p, den.clone()).expect("nonzero denominator")).collect()
}

/// Φ_{Y,Z} = Σ_i e^{α_i z}/∏_{k≠i}(α_i − α_k)·Y(ℏ, α_i, ue^{ℏz})·Z(−ℏ, α_i, u), to u^{u_order} z^{z_order}.
pub fn phi_series(
    y: &FixedPointSeries,
    z: &FixedPointSeries,
    spec: &AlphaSpec,
    u_order: usize,
    z_order: usize,
) -> Result<PhiSeries> {
    check_pair(y, z, spec, u_order)?;
    let coeffs = (0..=u_order)
        .map(|d| {
            let mut fact = Rational::one();
            f_values(y, z, spec, d, z_order + 1)
                .into_iter()
                .enumerate()
                .map(|(q, f)| {
                    if q > 0 {
                        fact *= rat(q as i64);
                    }
                    f.scale(&fact.recip())
                })
                .collect()
        })
        .collect();
    Ok(PhiSeries { coeffs })
}

/// E_{Y,Z;d}(ℏ, Ω) for d = 0..=D, each of Ω-degree below (d+1)n.
#[derive(Clone, Debug, PartialEq)]
pub struct EPolyFamily {
    pub polys: Vec<Poly<RatFn>>,
}

impl EPolyFamily {
    /// (d, s) for every Ω^s coefficient of E_d that is not polynomial in ℏ.
    pub fn non_polynomial(&self) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for (d, e) in self.polys.iter().enumerate() {
            for (s, c) in e.coeffs().iter().enumerate() {
                if !c.is_polynomial() {
                    bad.push((d, s));
                }
            }
        }
        bad
    }

    /// E(ℏ, Ω) ↦ E(−ℏ, Ω − dℏ) in every degree.
    pub fn reflected(&self) -> Self {
        let polys = self
            .polys
            .iter()
            .enumerate()
            .map(|(d, e)| {
                let flipped = e.map(RatFn::neg_h);
                let shift = Poly::from_coeffs(vec![RatFn::linear(Rational::zero(), rat(-(d as i64))), RatFn::one()]);
                flipped.compose(&shift)
            })
            .collect();
        Self { polys }
    }
}

/// N_{Y;d}(ℏ, α_i) = Q_d(ℏ, α_i)·[u^d]Y(ℏ, α_i).
pub fn n_value(y: &FixedPointSeries, spec: &AlphaSpec, i: usize, d: usize) -> RatFn {
    spec.q_factor(i, d) * y.coeff(i, d)
}

/// Interpolation nodes α_i + d'ℏ in the order (d', i).
pub fn e_nodes(spec: &AlphaSpec, d: usize) -> Vec<Poly<Rational>> {
    (0..=d)
        .flat_map(|dp| (0..spec.n).map(move |i| (dp, i)))
        .map(|(dp, i)| Poly::linear(spec.alpha[i].clone(), rat(dp as i64)))
        .collect()
}

/// Values N_{Y;d'}(ℏ, α_i)·N_{Z;d−d'}(−ℏ, α_i) at the nodes of [`e_nodes`].
pub fn e_values(y: &FixedPointSeries, z: &FixedPointSeries, spec: &AlphaSpec, d: usize) -> Vec<RatFn> {
    (0..=d)
        .flat_map(|dp| (0..spec.n).map(move |i| (dp, i)))
        .map(|(dp, i)| n_value(y, spec, i, dp) * n_value(z, spec, i, d - dp).neg_h())
        .collect()
}

pub fn e_family(y: &FixedPointSeries, z: &FixedPointSeries, spec: &AlphaSpec, d_max: usize) -> Result<EPolyFamily> {
    check_pair(y, z, spec, d_max)?;
    let polys = (0..=d_max)
        .map(|d| lagrange_interpolate(&e_nodes(spec, d), &e_values(y, z, spec, d)))
        .collect::<Result<Vec<_>>>()?;
    Ok(EPolyFamily { polys })
}

/// R_s^d = 𝒟_w^s ∏_{r=0}^{d}∏_k (1 − (α_k + rℏ)w)^{-1} for s < `count`.
pub fn r_coefficients(spec: &AlphaSpec, d: usize, count: usize) -> Result<Vec<Poly<Rational>>> {
    let order = count.saturating_sub(1);
    let mut prod = TruncatedSeries::<Poly<Rational>>::one(Var::W, order);
    for r in 0..=d {
        for a in &spec.alpha {
            let factor = TruncatedSeries::new(
                Var::W,
                order,
                vec![Poly::one(), -Poly::linear(a.clone(), rat(r as i64))],
            )?;
            prod = prod.checked_mul(&factor)?;
        }
    }
    Ok(prod.recip()?.into_coeffs())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MpcMode {
    Interpolation,
    ZExpansion,
}

/// Polynomiality of E_{Y,Z;d} for d ≤ D.
///
/// The z-expansion mode recovers every f_{d,s} from F_{d,0..(d+1)n−1} through the
/// triangular R-system, judges polynomiality on F, and insists that the recovered
/// coefficients equal the interpolated ones.
pub fn check_mpc(y: &FixedPointSeries, z: &FixedPointSeries, spec: &AlphaSpec, d_max: usize, mode: MpcMode) -> Result<Report> {
    let family = e_family(y, z, spec, d_max)?;
    let mut failures = Vec::new();
    match mode {
        MpcMode::Interpolation => {
            for (d, s) in family.non_polynomial() {
                failures.push(Failure::at(None, Some(d), format!("Ω^{s} coefficient of E is not polynomial in ℏ")));
            }
        }
        MpcMode::ZExpansion => {
            for d in 0..=d_max {
                let len = (d + 1) * spec.n;
                let (f_num, den) = f_numerators(y, z, spec, d, len);
                let r = r_coefficients(spec, d, len)?;
                // The triangular system runs on numerators over the shared denominator.
                let mut solved = vec![Poly::<Rational>::zero(); len];
                for q in 0..len {
                    let mut acc = f_num[q].clone();
                    for m in 1..=q {
                        acc = acc - &(&r[m] * &solved[len - 1 - q + m]);
                    }
                    solved[len - 1 - q] = acc;
                }
                let to_ratfn = |p: &Poly<Rational>| RatFn::new(p.clone(), den.clone());
                let f = f_num.iter().map(to_ratfn).collect::<Result<Vec<_>>>()?;
                let coeffs = solved.iter().map(to_ratfn).collect::<Result<Vec<_>>>()?;
                let interpolated: Vec<RatFn> = (0..len).map(|s| family.polys[d].coeff(s)).collect();
                if coeffs != interpolated {
                    return Err(Error::ModeDisagreement(format!("E coefficients differ in degree {d}")));
                }
                let f_poly = f.iter().all(RatFn::is_polynomial);
                let e_poly = coeffs.iter().all(RatFn::is_polynomial);
                if f_poly != e_poly {
                    return Err(Error::ModeDisagreement(format!("polynomiality verdicts differ in degree {d}")));
                }
                for (q, fq) in f.iter().enumerate() {
                    if !fq.is_polynomial() {
                        failures.push(Failure::at(None, Some(d), format!("F_{{{d},{q}}} is not polynomial in ℏ")));
                    }
                }
            }
        }
    }
    let mode_name = match mode {
        MpcMode::Interpolation => "interpolation",
        MpcMode::ZExpansion => "z_expansion",
    };
    Ok(Report::new(
        "mpc",
        json!({"n": spec.n, "alpha": spec.describe(), "d_max": d_max, "mode": mode_name}),
        failures,
    ))
}

/// Checks E_{Z,Y;d}(ℏ, Ω) = E_{Y,Z;d}(−ℏ, Ω − dℏ) for d ≤ D.
pub fn check_e_symmetry(y: &FixedPointSeries, z: &FixedPointSeries, spec: &AlphaSpec, d_max: usize) -> Result<Report> {
    let yz = e_family(y, z, spec, d_max)?.reflected();
    let zy = e_family(z, y, spec, d_max)?;
    let failures = (0..=d_max)
        .filter(|&d| yz.polys[d] != zy.polys[d])
        .map(|d| Failure::at(None, Some(d), "E_{Z,Y;d}(ℏ,Ω) ≠ E_{Y,Z;d}(−ℏ,Ω−dℏ)"))
        .collect();
    Ok(Report::new(
        "e_symmetry",
        json!({"n": spec.n, "alpha": spec.describe(), "d_max": d_max}),
        failures,
    ))
}
