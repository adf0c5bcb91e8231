//! Coefficientwise identity checks on the equivariant 𝒵-family.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::ladder::EquivariantLadder;
use super::mpc::check_e_symmetry;
use super::report::{Failure, Report};
use super::{build_y_equivariant, mirror_transform_equivariant, EqVariant, FixedPointSeries};
use crate::algebra::rational::{pow, rat, Rational};
use crate::algebra::{Poly, RatFn, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentitySuite {
    /// Σ_{r=0}^{n}(−1)^r σ_r 𝒵_{n−1−r} = 0.
    SymmetricSum,
    /// 𝒵̃(ℏ₁, ℏ₂, α_i, α_j) = 𝒵̃(ℏ₂, ℏ₁, α_j, α_i), with no pole at ℏ₁ = −ℏ₂ in positive degree.
    ZtildeSwap,
    /// 𝒵_p ≡ α_i^{p+1} mod ℏ^{-1}.
    ModHInverse,
    /// 𝒵₀ = α_i𝒵.
    ZeroRelation,
    /// E_{Z,Y;d}(ℏ, Ω) = E_{Y,Z;d}(−ℏ, Ω − dℏ) for (Y, Z) = (𝒵, 𝒵_p).
    ESymmetry,
}

impl IdentitySuite {
    pub const ALL: [IdentitySuite; 5] = [
        IdentitySuite::SymmetricSum,
        IdentitySuite::ZtildeSwap,
        IdentitySuite::ModHInverse,
        IdentitySuite::ZeroRelation,
        IdentitySuite::ESymmetry,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentitySuite::SymmetricSum => "symmetric_sum",
            IdentitySuite::ZtildeSwap => "ztilde_swap",
            IdentitySuite::ModHInverse => "mod_h_inverse",
            IdentitySuite::ZeroRelation => "zero_relation",
            IdentitySuite::ESymmetry => "e_symmetry",
        }
    }
}

/// 𝒵, 𝒵_{−1}, …, 𝒵_{n−1} at every fixed point.
#[derive(Clone, Debug)]
pub struct EquivariantZ {
    pub ladder: EquivariantLadder,
    /// `zs[p + 1]` is 𝒵_p.
    pub zs: Vec<FixedPointSeries>,
    pub z: FixedPointSeries,
}

impl EquivariantZ {
    pub fn new(ladder: EquivariantLadder) -> Result<Self> {
        let zs = (-1..ladder.spec.n as i64).map(|p| ladder.z(p)).collect::<Result<Vec<_>>>()?;
        let y = build_y_equivariant(&ladder.spec, &ladder.table, EqVariant::YOverX)?;
        let z = mirror_transform_equivariant(&y, &ladder.spec, &ladder.map, &ladder.c01)?;
        Ok(Self { ladder, zs, z })
    }

    pub fn z_p(&self, p: i64) -> &FixedPointSeries {
        &self.zs[(p + 1) as usize]
    }

    pub fn u_order(&self) -> usize {
        self.z.u_order()
    }
}

fn params(z: &EquivariantZ, d_max: usize) -> serde_json::Value {
    json!({
        "n": z.ladder.spec.n,
        "a": z.ladder.table.a,
        "alpha": z.ladder.spec.describe(),
        "d_max": d_max,
    })
}

pub fn check_identities(suite: IdentitySuite, z: &EquivariantZ, d_max: usize) -> Result<Report> {
    if d_max > z.u_order() {
        return Err(Error::BeyondOrder {
            index: d_max,
            order: z.u_order(),
        });
    }
    let failures = match suite {
        IdentitySuite::SymmetricSum => symmetric_sum(z, d_max),
        IdentitySuite::ZtildeSwap => ztilde_swap(z, d_max)?,
        IdentitySuite::ModHInverse => mod_h_inverse(z, d_max),
        IdentitySuite::ZeroRelation => zero_relation(z, d_max),
        IdentitySuite::ESymmetry => {
            let mut out = Vec::new();
            for p in -1..z.ladder.spec.n as i64 {
                let r = check_e_symmetry(&z.z, z.z_p(p), &z.ladder.spec, d_max)?;
                out.extend(r.failures.into_iter().map(|f| Failure::at(f.i, f.d, format!("p = {p}: {}", f.detail))));
            }
            out
        }
    };
    Ok(Report::new(suite.name(), params(z, d_max), failures))
}

fn symmetric_sum(z: &EquivariantZ, d_max: usize) -> Vec<Failure> {
    let spec = &z.ladder.spec;
    let n = spec.n;
    let mut failures = Vec::new();
    for i in 0..n {
        for d in 0..=d_max {
            let total = (0..=n).fold(RatFn::zero(), |acc, r| {
                let sign = if r % 2 == 0 { rat(1) } else { rat(-1) };
                acc + z.z_p(n as i64 - 1 - r as i64).coeff(i, d).scale(&(sign * &spec.sigma[r]))
            });
            if !total.is_zero() {
                failures.push(Failure::at(Some(i), Some(d), format!("Σ(−1)^r σ_r 𝒵_(n−1−r) = {total}")));
            }
        }
    }
    failures
}

fn mod_h_inverse(z: &EquivariantZ, d_max: usize) -> Vec<Failure> {
    let spec = &z.ladder.spec;
    let mut failures = Vec::new();
    for p in -1..spec.n as i64 {
        let reduced = z.z_p(p).mod_h_inverse();
        for i in 0..spec.n {
            for d in 0..=d_max {
                let want = if d == 0 {
                    Poly::constant(pow(&spec.alpha[i], (p + 1) as u32))
                } else {
                    Poly::zero()
                };
                let got = reduced.coeff(i, d).num().clone();
                if got != want {
                    failures.push(Failure::at(Some(i), Some(d), format!("𝒵_{p} mod ℏ⁻¹ is {got}")));
                }
            }
        }
    }
    failures
}

fn zero_relation(z: &EquivariantZ, d_max: usize) -> Vec<Failure> {
    let spec = &z.ladder.spec;
    let mut failures = Vec::new();
    for i in 0..spec.n {
        for d in 0..=d_max {
            if z.z_p(0).coeff(i, d) != &z.z.coeff(i, d).scale(&spec.alpha[i]) {
                failures.push(Failure::at(Some(i), Some(d), "𝒵₀ ≠ α_i𝒵"));
            }
        }
    }
    failures
}

/// A polynomial in (ℏ₁, ℏ₂): outer variable ℏ₁, coefficients in ℏ₂.
type BiPoly = Poly<Poly<Rational>>;

fn lcm(a: &Poly<Rational>, b: &Poly<Rational>) -> Result<Poly<Rational>> {
    let g = a.gcd(b);
    Ok((a.clone() * b).div_exact(&g)?.monic())
}

fn outer(a: &Poly<Rational>, b: &Poly<Rational>) -> BiPoly {
    Poly::from_coeffs(a.coeffs().iter().map(|c| b.scale(c)).collect())
}

fn transpose(p: &BiPoly) -> BiPoly {
    let width = p.coeffs().iter().filter_map(Poly::degree).max().map_or(0, |m| m + 1);
    Poly::from_coeffs(
        (0..width)
            .map(|m| Poly::from_coeffs(p.coeffs().iter().map(|c| c.coeff(m)).collect()))
            .collect(),
    )
}

/// The lcm of the denominators of [u^{d'}]𝒵_p(ℏ, α_i) over all p and d' ≤ d.
fn common_den(z: &EquivariantZ, i: usize, d: usize) -> Result<Poly<Rational>> {
    let mut den = Poly::one();
    for zp in &z.zs {
        for dp in 0..=d {
            den = lcm(&den, zp.coeff(i, dp).den())?;
        }
    }
    Ok(den)
}

/// Numerator of (ℏ₁ + ℏ₂)·[u^d]𝒵̃(ℏ₁, ℏ₂, α_i, α_j) over D_i(ℏ₁)·D_j(ℏ₂).
fn ztilde_numerator(z: &EquivariantZ, i: usize, j: usize, d: usize, dens: &[Poly<Rational>]) -> Result<BiPoly> {
    let spec = &z.ladder.spec;
    let n = spec.n;
    let a = rat(z.ladder.table.a as i64);
    let lift = |f: &RatFn, den: &Poly<Rational>| -> Result<Poly<Rational>> { Ok(f.num().clone() * &den.div_exact(f.den())?) };
    let mut acc = BiPoly::zero();
    for r in 0..n {
        let weight = if r % 2 == 0 { &a * &spec.sigma[r] } else { -(&a * &spec.sigma[r]) };
        for p in 0..n - r {
            let q = n - 1 - r - p;
            let left = z.z_p(p as i64);
            let right = z.z_p(q as i64 - 1);
            for d1 in 0..=d {
                let f1 = left.coeff(i, d1);
                let f2 = right.coeff(j, d - d1);
                if f1.is_zero() || f2.is_zero() {
                    continue;
                }
                let term = outer(&lift(f1, &dens[i])?.scale_rational(&weight), &lift(f2, &dens[j])?);
                acc = acc + &term;
            }
        }
    }
    Ok(acc)
}

fn ztilde_swap(z: &EquivariantZ, d_max: usize) -> Result<Vec<Failure>> {
    let n = z.ladder.spec.n;
    let minus_h = Poly::linear(Rational::zero(), rat(-1));
    let mut failures = Vec::new();
    for d in 0..=d_max {
        let dens = (0..n).map(|i| common_den(z, i, d)).collect::<Result<Vec<_>>>()?;
        let nums = (0..n)
            .map(|i| (0..n).map(|j| ztilde_numerator(z, i, j, d, &dens)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        for (i, row) in nums.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                if *entry != transpose(&nums[j][i]) {
                    failures.push(Failure::at(Some(i), Some(d), format!("𝒵̃ not symmetric under (ℏ₁, α_{}) ↔ (ℏ₂, α_{})", i + 1, j + 1)));
                }
                if d >= 1 && !entry.eval(&minus_h).is_zero() {
                    failures.push(Failure::at(Some(i), Some(d), format!("pole at ℏ₁ = −ℏ₂ for j = {}", j + 1)));
                }
            }
        }
    }
    Ok(failures)
}
