//! The equivariant ladder 𝒴_{−1}, …, 𝒴_{n−1}, its tilde-C ledger and the equivariant mirror transform.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{build_y_equivariant, dp_apply_equivariant, AlphaSpec, EqVariant, FixedPointSeries};
use crate::algebra::rational::{pow, Rational};
use crate::algebra::{linalg, Poly, RatFn, Ring, TruncatedSeries, Var};
use crate::error::{Error, Result};
use crate::hypergeometric::{mirror_map, HGTable, MirrorMap};

/// Coefficients L_{p,q}(ℏ, q) with 𝒴_p = Σ_{k ≤ p} L_{p,k}·𝔇^k𝒴₀.
///
/// Each L_{p,k} is a q-series whose coefficients are polynomials in ℏ of degree ≤ p − k.
#[derive(Clone, Debug, PartialEq)]
pub struct TildeLedger {
    pub entries: BTreeMap<(usize, usize), TruncatedSeries<Poly<Rational>>>,
}

impl TildeLedger {
    pub fn get(&self, p: usize, k: usize) -> Option<&TruncatedSeries<Poly<Rational>>> {
        self.entries.get(&(p, k))
    }

    /// C̃^{(r)}_{p,k}(q) = [ℏ^{p−r−k}]L_{p,k}.
    pub fn tilde_c(&self, p: usize, r: usize, k: usize) -> Option<TruncatedSeries<Rational>> {
        let e = p.checked_sub(r + k)?;
        self.get(p, k).map(|l| l.map(|c| c.coeff(e)))
    }
}

/// The fixed-point restrictions of 𝒴_{−1}, …, 𝒴_{n−1} and the correction series read off on the way.
#[derive(Clone, Debug)]
pub struct EquivariantLadder {
    pub spec: AlphaSpec,
    pub table: HGTable,
    pub map: MirrorMap,
    /// `ys[p + 1]` is 𝒴_p.
    pub ys: Vec<FixedPointSeries>,
    /// `corrections[(p, r)]` = C_{p−1,1}^{(r)}(q), r = 0..=p, at the specialized weights.
    pub corrections: BTreeMap<(usize, usize), TruncatedSeries<Rational>>,
    /// C_{0,1}^{(1)}(q) from the p = 1 solve.
    pub c01: TruncatedSeries<Rational>,
    pub ledger: TildeLedger,
}

/// Solves [ℏ^{-1}]M(α_i) = Σ_{r=0}^{p} c_r α_i^{p+1−r} for every u-degree.
fn fit_h_inverse(m: &FixedPointSeries, spec: &AlphaSpec, p: usize) -> Result<Vec<TruncatedSeries<Rational>>> {
    let order = m.u_order();
    let rows: Vec<Vec<Rational>> = spec
        .alpha
        .iter()
        .map(|a| (0..=p).map(|r| pow(a, (p + 1 - r) as u32)).collect())
        .collect();
    let sols = (0..=order)
        .map(|d| {
            let rhs: Vec<Rational> = (0..spec.n).map(|i| m.coeff(i, d).coeff_at_infinity(-1)).collect();
            linalg::solve(&rows, &rhs, &format!("ℏ⁻¹ coefficients of 𝒴_{} at u^{d}", p as i64 - 1))
        })
        .collect::<Result<Vec<_>>>()?;
    (0..=p)
        .map(|r| TruncatedSeries::new(m.var(), order, sols.iter().map(|s| s[r].clone()).collect()))
        .collect()
}

fn lift(s: &TruncatedSeries<Rational>) -> TruncatedSeries<Poly<Rational>> {
    s.map(|c| Poly::constant(c.clone()))
}

impl EquivariantLadder {
    pub fn build(spec: &AlphaSpec, table: &HGTable) -> Result<Self> {
        let n = spec.n;
        if table.p_max + 1 < n {
            return Err(Error::InvalidParams(format!("ladder needs p_max ≥ {}", n - 1)));
        }
        let order = table.u_order;
        let map = mirror_map(table)?;
        let mut ys = vec![build_y_equivariant(spec, table, EqVariant::YMinusOne)?];
        let mut corrections = BTreeMap::new();
        let h_poly = Poly::<Rational>::var();
        let mut ledger: BTreeMap<(usize, usize), TruncatedSeries<Poly<Rational>>> = BTreeMap::new();
        for p in 0..n {
            let prev = &ys[p];
            let diag = table.diagonal(p)?;
            let inv_diag = diag.recip()?;
            let cs = if p == 0 {
                vec![fit_h_inverse(prev, spec, 0)?.remove(0)]
            } else {
                fit_h_inverse(prev, spec, p)?
            };
            let expect = &TruncatedSeries::one(Var::Q, order) + &cs[0].theta();
            if expect != diag {
                return Err(Error::Inconsistent(format!("I_({p},{p}) disagrees with the leading ℏ⁻¹ term of 𝒴_{}", p as i64 - 1)));
            }
            let mut base = prev.x_plus_h_theta(spec)?;
            for r in 1..=p {
                if !cs[r].is_zero() {
                    base = base.sub(&ys[p - r + 1].mul_series(&cs[r].theta())?)?;
                }
            }
            ys.push(base.mul_series(&inv_diag)?);
            for (r, c) in cs.into_iter().enumerate() {
                corrections.insert((p, r), c);
            }
            if p == 0 {
                ledger.insert((0, 0), TruncatedSeries::one(Var::Q, order));
                continue;
            }
            let inv = lift(&inv_diag);
            for k in 0..=p {
                let mut acc = TruncatedSeries::<Poly<Rational>>::zero(Var::Q, order);
                if let Some(l) = ledger.get(&(p - 1, k)) {
                    acc = acc.checked_add(&l.theta().scale(&h_poly))?;
                }
                if k >= 1 {
                    if let Some(l) = ledger.get(&(p - 1, k - 1)) {
                        acc = acc.checked_add(&l.checked_mul(&lift(&table.diagonal(k)?))?)?;
                    }
                }
                for r in 1..=p {
                    if let Some(l) = ledger.get(&(p - r, k)) {
                        acc = acc.checked_sub(&l.checked_mul(&lift(&corrections[&(p, r)].theta()))?)?;
                    }
                }
                ledger.insert((p, k), acc.checked_mul(&inv)?);
            }
        }
        let c01 = if n >= 2 {
            corrections[&(1, 1)].clone()
        } else {
            TruncatedSeries::zero(Var::Q, order)
        };
        Ok(Self {
            spec: spec.clone(),
            table: table.clone(),
            map,
            ys,
            corrections,
            c01,
            ledger: TildeLedger { entries: ledger },
        })
    }

    pub fn y(&self, p: i64) -> &FixedPointSeries {
        &self.ys[(p + 1) as usize]
    }

    /// Σ_k L_{p,k}·𝔇^k𝒴₀ at every fixed point.
    pub fn from_ledger(&self, p: usize) -> Result<FixedPointSeries> {
        let y0 = self.y(0);
        let mut acc = FixedPointSeries::constant(y0.n, y0.var(), y0.u_order(), |_| RatFn::zero());
        for k in 0..=p {
            let l = self
                .ledger
                .get(p, k)
                .ok_or_else(|| Error::InvalidParams(format!("no ledger entry ({p}, {k})")))?;
            let lifted = l.map(|c| RatFn::from_poly(c.clone()));
            let dk = dp_apply_equivariant(k, &self.spec, &self.table, y0)?;
            acc = acc.add(&dk.map(|_, s| s.checked_mul(&lifted))?)?;
        }
        Ok(acc)
    }

    /// 𝒵_p at every fixed point.
    pub fn z(&self, p: i64) -> Result<FixedPointSeries> {
        mirror_transform_equivariant(self.y(p), &self.spec, &self.map, &self.c01)
    }
}

/// 𝒴_p with its ledger; `p` ranges over −1..=n−1.
pub fn build_yp_equivariant(p: i64, spec: &AlphaSpec, table: &HGTable) -> Result<(FixedPointSeries, TildeLedger)> {
    if p < -1 || p >= spec.n as i64 {
        return Err(Error::InvalidParams(format!("p = {p} outside −1..={}", spec.n - 1)));
    }
    let ladder = EquivariantLadder::build(spec, table)?;
    Ok((ladder.y(p).clone(), ladder.ledger))
}

/// e^{−(g(q)α_i + c₀₁(q))/ℏ}·M(ℏ, α_i, q) re-expanded in u = qe^{g(q)}.
pub fn mirror_transform_equivariant(
    m: &FixedPointSeries,
    spec: &AlphaSpec,
    map: &MirrorMap,
    c01: &TruncatedSeries<Rational>,
) -> Result<FixedPointSeries> {
    let order = m.u_order().min(map.g.order()).min(c01.order());
    let phi = TruncatedSeries::revert_exp(&map.g.truncate(order), Var::U)?;
    let h_inv = RatFn::h_pow(-1);
    m.truncate(order).map(|i, s| {
        let exponent = TruncatedSeries::from_fn(Var::Q, order, |d| {
            let c = -(map.g.coeff(d) * &spec.alpha[i] + c01.coeff(d));
            h_inv.scale(&c)
        });
        s.clone().with_var(Var::Q).checked_mul(&exponent.exp()?)?.compose(&phi)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::equivariant::check_recursive;
    use crate::hypergeometric::build_i_table;

    fn ladder(n: usize, a: usize, d: usize) -> EquivariantLadder {
        let spec = AlphaSpec::generic(n, d, 0).unwrap();
        let t = build_i_table(n, a, n - 1, d).unwrap();
        EquivariantLadder::build(&spec, &t).unwrap()
    }

    fn is_power(m: &FixedPointSeries, spec: &AlphaSpec, e: u32) -> bool {
        let reduced = m.mod_h_inverse();
        (0..spec.n).all(|i| {
            (0..=m.u_order()).all(|d| {
                let want = if d == 0 { RatFn::constant(pow(&spec.alpha[i], e)) } else { RatFn::zero() };
                reduced.coeff(i, d) == &want
            })
        })
    }

    #[test]
    fn y_zero_is_alpha_times_y() {
        let l = ladder(3, 3, 3);
        let y = build_y_equivariant(&l.spec, &l.table, EqVariant::YOverX).unwrap();
        let scaled = y.scale_each(|i| RatFn::constant(l.spec.alpha[i].clone())).unwrap();
        assert_eq!(l.y(0), &scaled);
    }

    #[test]
    fn every_rung_is_a_power_mod_h_inverse() {
        for (n, a) in [(2, 2), (3, 3), (4, 4), (3, 2), (4, 3)] {
            let l = ladder(n, a, 3);
            for p in -1..n as i64 {
                let z = l.z(p).unwrap();
                assert!(is_power(&z, &l.spec, (p + 1) as u32), "n = {n}, a = {a}, p = {p}");
            }
        }
    }

    #[test]
    fn overdetermined_fit_is_consistent() {
        // n = 4, p = 2: four equations, three unknowns, for every d ≤ 3
        let l = ladder(4, 4, 3);
        assert!(l.corrections.contains_key(&(2, 2)));
        assert!(l.corrections.contains_key(&(3, 3)));
    }

    #[test]
    fn ledger_reproduces_the_ladder() {
        for (n, a) in [(3, 3), (4, 3)] {
            let l = ladder(n, a, 2);
            for p in 0..n {
                assert_eq!(&l.from_ledger(p).unwrap(), l.y(p as i64), "n = {n}, p = {p}");
                assert!(l.ledger.get(p, p).unwrap().coeffs().iter().enumerate().all(|(d, c)| {
                    *c == if d == 0 { Poly::constant(rat(1)) } else { Poly::zero() }
                }));
            }
        }
    }

    #[test]
    fn rungs_are_recursive() {
        let l = ladder(3, 3, 3);
        for p in -1..3 {
            assert!(check_recursive(l.y(p), &l.spec, 3, 3).unwrap().passed(), "p = {p}");
        }
    }

    #[test]
    fn trivial_transform_is_identity() {
        let l = ladder(2, 2, 2);
        let zero = MirrorMap { g: TruncatedSeries::zero(Var::Q, 2) };
        let out = mirror_transform_equivariant(l.y(0), &l.spec, &zero, &TruncatedSeries::zero(Var::Q, 2)).unwrap();
        assert_eq!(out, l.y(0).clone().map(|_, s| Ok(s.clone().with_var(Var::U))).unwrap());
    }

    #[test]
    fn range_is_checked() {
        let l = ladder(2, 2, 1);
        assert!(build_yp_equivariant(2, &l.spec, &l.table).is_err());
        assert!(build_yp_equivariant(-1, &l.spec, &l.table).is_ok());
    }
}
