//! Non-equivariant one- and two-point series, invariant extraction and the BPS transform.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{rat, Rational};
use crate::algebra::{BiLaurent, NilClass, TruncatedSeries, Var, WindowCap};
use crate::error::{Error, Result};
use crate::hypergeometric::{build_y, MirrorMap, MirrorSeries, YLadder, YVariant};

/// e^{(t−T)x/ℏ − C_{0,1}^{(1)}/ℏ}·M re-expanded in u = e^T.
///
/// `c01` is zero whenever n − a ≠ 1; passing `None` omits the factor.
pub fn mirror_transform(
    m: &MirrorSeries,
    map: &MirrorMap,
    c01: Option<&TruncatedSeries<Rational>>,
) -> Result<MirrorSeries> {
    let n = m.n;
    let order = m.u_order();
    let exponent = TruncatedSeries::from_fn(Var::Q, order, |d| {
        let mut c = NilClass::monomial(n, -map.g.coeff(d).clone(), 1, -1);
        if let Some(c01) = c01 {
            c = c - NilClass::monomial(n, c01.coeff(d).clone(), 0, -1);
        }
        c
    });
    let factor = exponent.exp()?;
    let conjugated = m.series.checked_mul(&factor)?;
    let phi = TruncatedSeries::revert_exp(&map.g, Var::U)?;
    let series = conjugated.compose(&phi)?;
    let out = MirrorSeries {
        n,
        a: m.a,
        series,
    };
    out.check_cap()?;
    Ok(out)
}

/// Everything derived from one (n, a, u_order): the ladder, 𝒵 and 𝒵_{−1}, …, 𝒵_{n−1}.
#[derive(Clone, Debug)]
pub struct MirrorEngine {
    pub ladder: YLadder,
    /// `zs[p + 1]` is 𝒵_p.
    pub zs: Vec<MirrorSeries>,
    pub z: MirrorSeries,
}

impl MirrorEngine {
    pub fn build(n: usize, a: usize, u_order: usize) -> Result<Self> {
        let ladder = YLadder::build(n, a, u_order)?;
        let zs = ladder
            .ys
            .par_iter()
            .map(|y| mirror_transform(y, &ladder.map, Some(&ladder.c01)))
            .collect::<Result<Vec<_>>>()?;
        let y_over_x = build_y(&ladder.table, YVariant::YOverX)?;
        let z = mirror_transform(&y_over_x, &ladder.map, Some(&ladder.c01))?;
        Ok(Self { ladder, zs, z })
    }

    pub fn n(&self) -> usize {
        self.ladder.table.n
    }

    pub fn a(&self) -> usize {
        self.ladder.table.a
    }

    pub fn u_order(&self) -> usize {
        self.ladder.table.u_order
    }

    pub fn z_p(&self, p: i64) -> Result<&MirrorSeries> {
        if p < -1 || p >= self.n() as i64 {
            return Err(Error::InvalidParams(format!("p = {p} outside [-1, {}]", self.n() - 1)));
        }
        Ok(&self.zs[(p + 1) as usize])
    }

    /// (ℏ₁+ℏ₂)𝒵̃ = a·Σ_{p=0}^{n−1} 𝒵_p(ℏ₁,x₁)𝒵_{n−2−p}(ℏ₂,x₂), divided exactly in every degree d ≥ 1.
    pub fn two_point(&self) -> Result<TwoPointSeries> {
        let (n, a, order) = (self.n(), self.a(), self.u_order());
        let cap = MirrorSeries::cap(n, a, order);
        let coeffs = (1..=order)
            .into_par_iter()
            .map(|d| self.two_point_degree(d, &cap))
            .collect::<Result<Vec<_>>>()?;
        let mut all = vec![Vec::new()];
        all.extend(coeffs);
        Ok(TwoPointSeries {
            n,
            a,
            u_order: order,
            coeffs: all,
        })
    }

    fn two_point_degree(&self, d: usize, cap: &WindowCap) -> Result<Vec<Vec<BiLaurent>>> {
        let n = self.n();
        let scale = rat(self.a() as i64);
        let mut grid = vec![vec![BiLaurent::default(); n]; n];
        for p in 0..n {
            let left = &self.zs[p + 1];
            let right = &self.zs[n - 1 - p];
            for d1 in 0..=d {
                let (c1, c2) = (left.class(d1), right.class(d - d1));
                for (k1, w1) in c1.x_coeffs().iter().enumerate() {
                    if w1.is_zero() {
                        continue;
                    }
                    for (k2, w2) in c2.x_coeffs().iter().enumerate() {
                        if !w2.is_zero() {
                            grid[k1][k2] = grid[k1][k2].add(&BiLaurent::outer(w1, w2));
                        }
                    }
                }
            }
        }
        let mut out = vec![Vec::with_capacity(n); n];
        for (k1, row) in grid.into_iter().enumerate() {
            for (k2, b) in row.into_iter().enumerate() {
                let q = b
                    .scale(&scale)
                    .div_by_sum()
                    .ok_or(Error::NotDivisible { d, k1, k2 })?;
                q.check_cap(cap)?;
                out[k1].push(q);
            }
        }
        Ok(out)
    }
}

pub fn z_p_series(p: i64, n: usize, a: usize, u_order: usize) -> Result<MirrorSeries> {
    MirrorEngine::build(n, a, u_order)?.z_p(p).cloned()
}

pub fn z_onepoint(n: usize, a: usize, u_order: usize) -> Result<MirrorSeries> {
    Ok(MirrorEngine::build(n, a, u_order)?.z)
}

pub fn z_two_point(n: usize, a: usize, u_order: usize) -> Result<TwoPointSeries> {
    MirrorEngine::build(n, a, u_order)?.two_point()
}

/// 𝒵̃ in degrees 1..=u_order; `coeffs[d][k1][k2]` is the (ℏ₁, ℏ₂) coefficient of x₁^{k1}x₂^{k2}u^d.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoPointSeries {
    pub n: usize,
    pub a: usize,
    pub u_order: usize,
    /// `coeffs[0]` is empty: the degree-zero term is never formed.
    pub coeffs: Vec<Vec<Vec<BiLaurent>>>,
}

impl TwoPointSeries {
    pub fn coeff(&self, d: usize, k1: usize, k2: usize) -> Option<&BiLaurent> {
        self.coeffs.get(d)?.get(k1)?.get(k2)
    }

    /// Pairs (d, k1, k2) whose coefficient differs from the swapped partner.
    pub fn asymmetries(&self) -> Vec<(usize, usize, usize)> {
        let mut bad = Vec::new();
        for d in 1..=self.u_order {
            for k1 in 0..self.n {
                for k2 in 0..self.n {
                    if self.coeffs[d][k1][k2] != self.coeffs[d][k2][k1].swapped() {
                        bad.push((d, k1, k2));
                    }
                }
            }
        }
        bad
    }
}

/// ⟨τ_{a1}H^{b1}, τ_{a2}H^{b2}⟩_d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InvariantKey {
    pub d: usize,
    pub a1: usize,
    pub b1: usize,
    pub a2: usize,
    pub b2: usize,
}

impl InvariantKey {
    pub fn new(d: usize, (a1, b1): (usize, usize), (a2, b2): (usize, usize)) -> Self {
        Self { d, a1, b1, a2, b2 }
    }

    /// Required total degree n − 3 + (n − a)d.
    pub fn expected_dimension(&self, n: usize, a: usize) -> i64 {
        n as i64 - 3 + ((n - a) * self.d) as i64
    }

    pub fn dimension(&self) -> i64 {
        (self.a1 + self.b1 + self.a2 + self.b2) as i64
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.d == 0 {
            return Err(Error::InvalidParams("degree must be at least 1".into()));
        }
        if self.b1 >= n || self.b2 >= n {
            return Err(Error::InvalidParams(format!(
                "hyperplane powers ({}, {}) exceed n − 1 = {}",
                self.b1,
                self.b2,
                n - 1
            )));
        }
        Ok(())
    }
}

/// Why an extracted invariant is zero without reading the series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroReason {
    DimensionMismatch { expected: i64, actual: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extracted {
    pub value: Rational,
    pub zero_reason: Option<ZeroReason>,
}

/// Coefficient of u^d ℏ₁^{−1−a1} ℏ₂^{−1−a2} x₁^{n−1−b1} x₂^{n−1−b2}.
pub fn extract_gw(z: &TwoPointSeries, key: &InvariantKey) -> Result<Extracted> {
    key.validate(z.n)?;
    let expected = key.expected_dimension(z.n, z.a);
    if key.dimension() != expected {
        return Ok(Extracted {
            value: Rational::zero(),
            zero_reason: Some(ZeroReason::DimensionMismatch {
                expected,
                actual: key.dimension(),
            }),
        });
    }
    if key.d > z.u_order {
        return Err(Error::BeyondOrder {
            index: key.d,
            order: z.u_order,
        });
    }
    let c = &z.coeffs[key.d][z.n - 1 - key.b1][z.n - 1 - key.b2];
    Ok(Extracted {
        value: c.coeff(-1 - key.a1 as i64, -1 - key.a2 as i64),
        zero_reason: None,
    })
}

/// n_d = GW_d − Σ_{k | d, k ≥ 2} n_{d/k}/k.
pub fn bps_transform(gw: &BTreeMap<usize, Rational>, d_max: usize) -> Result<BTreeMap<usize, Rational>> {
    let mut bps = BTreeMap::new();
    for d in 1..=d_max {
        let g = gw
            .get(&d)
            .ok_or_else(|| Error::InvalidParams(format!("missing invariant in degree {d}")))?;
        let covers = (2..=d)
            .filter(|k| d % k == 0)
            .fold(Rational::zero(), |acc, k| acc + &bps[&(d / k)] / rat(k as i64));
        bps.insert(d, g - covers);
    }
    Ok(bps)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BpsEntry {
    pub d: usize,
    #[serde(with = "crate::algebra::rational::as_string")]
    pub gw: Rational,
    #[serde(with = "crate::algebra::rational::as_string")]
    pub bps: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BPSTable {
    pub n: usize,
    pub a: usize,
    pub insertions: [(usize, usize); 2],
    pub entries: Vec<BpsEntry>,
}

impl BPSTable {
    /// GW and BPS numbers for insertions (τ_{a1}H^{b1}, τ_{a2}H^{b2}) in degrees 1..=u_order.
    pub fn from_series(z: &TwoPointSeries, insertions: [(usize, usize); 2]) -> Result<Self> {
        let [(a1, b1), (a2, b2)] = insertions;
        let gw = (1..=z.u_order)
            .map(|d| {
                let e = extract_gw(z, &InvariantKey::new(d, (a1, b1), (a2, b2)))?;
                Ok((d, e.value))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        let bps = bps_transform(&gw, z.u_order)?;
        let entries = gw
            .into_iter()
            .map(|(d, gw)| BpsEntry {
                d,
                gw,
                bps: bps[&d].clone(),
            })
            .collect();
        Ok(Self {
            n: z.n,
            a: z.a,
            insertions,
            entries,
        })
    }

    /// Degrees whose BPS value is not an integer.
    pub fn non_integral(&self) -> Vec<usize> {
        self.entries.iter().filter(|e| !e.bps.is_integer()).map(|e| e.d).collect()
    }
}

/// Primary insertion pairs (H^{b1}, H^{b2}) with 1 ≤ b1 ≤ b2 and b1 + b2 = n − 3.
pub fn primary_pairs(n: usize) -> Vec<[(usize, usize); 2]> {
    if n < 5 {
        return Vec::new();
    }
    (1..=(n - 3) / 2).map(|b1| [(0, b1), (0, n - 3 - b1)]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::ratio;
    use crate::hypergeometric::build_i_table;

    fn modded_is(z: &MirrorSeries, k: usize) -> bool {
        let m = z.mod_h_inverse();
        let expect = NilClass::monomial(z.n, rat(1), k, 0);
        (0..=z.u_order()).all(|d| m.class(d) == &if d == 0 { expect.clone() } else { NilClass::zero_n(z.n) })
    }

    #[test]
    fn trivial_map_is_identity() {
        let t = build_i_table(7, 5, 1, 3).unwrap();
        let map = crate::hypergeometric::mirror_map(&t).unwrap();
        let y = build_y(&t, YVariant::Y).unwrap();
        let z = mirror_transform(&y, &map, None).unwrap();
        assert_eq!(z.series.coeffs(), y.series.coeffs());
        assert_eq!(z.series.var(), Var::U);
    }

    #[test]
    fn quintic_normalizations() {
        let e = MirrorEngine::build(5, 5, 3).unwrap();
        assert!(modded_is(&e.z, 0));
        for p in -1..5 {
            assert!(modded_is(e.z_p(p).unwrap(), (p + 1) as usize), "p = {p}");
        }
        let x_z = e.z.series.map(|c| c.mul_x());
        assert_eq!(e.z_p(0).unwrap().series, x_z);
        assert!(e.z_p(4).unwrap().is_zero());
        assert!(e.z_p(5).is_err());
    }

    #[test]
    fn fano_normalizations() {
        for (n, a) in [(4, 3), (5, 4), (5, 3), (3, 2)] {
            let e = MirrorEngine::build(n, a, 3).unwrap();
            assert!(modded_is(&e.z, 0), "n = {n}, a = {a}");
            for p in -1..n as i64 {
                assert!(modded_is(e.z_p(p).unwrap(), (p + 1) as usize), "n = {n}, a = {a}, p = {p}");
            }
            assert!(e.z_p(n as i64 - 1).unwrap().is_zero());
        }
    }

    #[test]
    fn corrections_vanish_away_from_index_one() {
        let e = MirrorEngine::build(7, 5, 3).unwrap();
        assert!(e.ladder.c01.is_zero());
        let y = build_y(&e.ladder.table, YVariant::YOverX).unwrap();
        assert_eq!(e.z.series.coeffs(), y.series.coeffs());
        let cubic = MirrorEngine::build(4, 3, 2).unwrap();
        assert_eq!(cubic.ladder.c01.coeff(1), &rat(6));
    }

    #[test]
    fn septic_table_first_rows() {
        let z = z_two_point(7, 7, 3).unwrap();
        assert!(z.asymmetries().is_empty());
        let t = BPSTable::from_series(&z, [(0, 2), (0, 2)]).unwrap();
        let bps: Vec<_> = t.entries.iter().map(|e| e.bps.clone()).collect();
        assert_eq!(bps[0], rat(1707797));
        assert_eq!(bps[1], rat(510787745643));
        assert_eq!(bps[2], "222548537108926490".parse::<num_bigint::BigInt>().unwrap().into());
    }

    #[test]
    fn lines_on_cubic_surface() {
        // 27 lines, each meeting a generic hyperplane class once on either side.
        let z = z_two_point(4, 3, 1).unwrap();
        let e = extract_gw(&z, &InvariantKey::new(1, (0, 1), (0, 1))).unwrap();
        assert_eq!(e.value, rat(27));
    }

    #[test]
    fn conic_through_two_points() {
        // a = 1 in ℙ³ is ℙ²: one line through two points.
        let z = z_two_point(4, 1, 1).unwrap();
        let e = extract_gw(&z, &InvariantKey::new(1, (0, 2), (0, 2))).unwrap();
        assert_eq!(e.value, rat(1));
    }

    #[test]
    fn dimension_filter_gives_typed_zero() {
        let z = z_two_point(5, 5, 1).unwrap();
        let e = extract_gw(&z, &InvariantKey::new(1, (0, 1), (0, 2))).unwrap();
        assert!(e.value.is_zero());
        assert_eq!(
            e.zero_reason,
            Some(ZeroReason::DimensionMismatch {
                expected: 2,
                actual: 3
            })
        );
        assert!(extract_gw(&z, &InvariantKey::new(1, (0, 5), (0, 0))).is_err());
        assert!(extract_gw(&z, &InvariantKey::new(2, (0, 1), (0, 1))).is_err());
    }

    #[test]
    fn bps_multiple_covers() {
        let gw: BTreeMap<usize, Rational> = [(1, rat(10)), (2, rat(7)), (3, rat(4)), (4, rat(9))].into();
        let b = bps_transform(&gw, 4).unwrap();
        assert_eq!(b[&1], rat(10));
        assert_eq!(b[&2], rat(2));
        assert_eq!(b[&3], rat(4) - ratio(10, 3));
        assert_eq!(b[&4], rat(9) - rat(1) - ratio(10, 4));
        assert!(bps_transform(&gw, 5).is_err());
    }

    #[test]
    fn primary_pair_enumeration() {
        assert_eq!(primary_pairs(7), vec![[(0, 1), (0, 3)], [(0, 2), (0, 2)]]);
        assert_eq!(primary_pairs(5), vec![[(0, 1), (0, 1)]]);
        assert!(primary_pairs(4).is_empty());
    }
}
