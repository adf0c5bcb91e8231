//! The I_{p,q} ladder, the mirror map and the hypergeometric series 𝒴, 𝒴₋₁, 𝒴_p
//! in the non-equivariant limit (all torus weights zero, x^n = 0).

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{decode, encode, rat, ratio, Rational};
use crate::algebra::{LaurentWindow, NilClass, Poly, Ring, TPolySeries, TruncatedSeries, Var, WindowCap};
use crate::error::{Error, Result};

/// I_{p,q}(t) for 0 ≤ p ≤ q ≤ `p_max`, as series in q = e^t with t-polynomial coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct HGTable {
    pub n: usize,
    pub a: usize,
    pub u_order: usize,
    pub p_max: usize,
    entries: BTreeMap<(usize, usize), TPolySeries>,
}

pub fn validate_degrees(n: usize, a: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("n = {n} must be at least 2")));
    }
    if a == 0 || a > n {
        return Err(Error::InvalidParams(format!("hypersurface degree a = {a} must lie in 1..={n}")));
    }
    Ok(())
}

/// Power series in w of ∏_{r=1}^{ad}(aw + r) / ∏_{r=1}^{d}(w + r)^n.
fn i_generating_coeff(n: usize, a: usize, d: usize, order: usize) -> Result<TruncatedSeries<Rational>> {
    let lin = |c0: i64, c1: i64| TruncatedSeries::new(Var::W, order, vec![rat(c0), rat(c1)]);
    let mut num = TruncatedSeries::one(Var::W, order);
    for r in 1..=(a * d) as i64 {
        num = num.checked_mul(&lin(r, a as i64)?)?;
    }
    let mut den = TruncatedSeries::one(Var::W, order);
    for r in 1..=d as i64 {
        den = den.checked_mul(&lin(r, 1)?.pow(n))?;
    }
    num.checked_mul(&den.recip()?)
}

/// Builds the ladder I_{p,q} = d/dt(I_{p−1,q}/I_{p−1,p−1}) on top of
/// Σ_q I_{0,q} w^q = e^{wt} Σ_d e^{dt} ∏_{r=1}^{ad}(aw+r)/∏_{r=1}^{d}(w+r)^n.
///
/// For a < n the q^d terms carry ℏ-degree (a − n)d and never reach the
/// top-x coefficients the ladder describes, so only d = 0 contributes.
pub fn build_i_table(n: usize, a: usize, p_max: usize, u_order: usize) -> Result<HGTable> {
    validate_degrees(n, a)?;
    let degrees: Vec<usize> = if a == n { (0..=u_order).collect() } else { vec![0] };
    let gen: Vec<(usize, TruncatedSeries<Rational>)> = degrees
        .iter()
        .map(|&d| Ok((d, i_generating_coeff(n, a, d, p_max)?)))
        .collect::<Result<_>>()?;
    let inv_fact: Vec<Rational> = (0..=p_max)
        .scan(Rational::one(), |f, k| {
            if k > 0 {
                *f /= rat(k as i64);
            }
            Some(f.clone())
        })
        .collect();
    let mut entries = BTreeMap::new();
    for q in 0..=p_max {
        let mut coeffs = vec![Poly::<Rational>::zero(); u_order + 1];
        for (d, f) in &gen {
            // [w^q] e^{wt} f(w) = Σ_j f_j t^{q−j}/(q−j)!
            let p = (0..=q).fold(Poly::zero(), |acc, j| {
                acc + Poly::monomial(f.coeff(j) * &inv_fact[q - j], q - j)
            });
            coeffs[*d] = p;
        }
        let s = TruncatedSeries::new(Var::Q, u_order, coeffs)?;
        entries.insert((0, q), TPolySeries::new(s, q)?);
    }
    for p in 1..=p_max {
        let diag_inv = entries[&(p - 1, p - 1)].to_pure()?.recip()?;
        for q in p..=p_max {
            let next = entries[&(p - 1, q)].mul_pure(&diag_inv).dt_derivative();
            entries.insert((p, q), next);
        }
    }
    let table = HGTable {
        n,
        a,
        u_order,
        p_max,
        entries,
    };
    table.check_diagonals()?;
    Ok(table)
}

impl HGTable {
    pub fn get(&self, p: usize, q: usize) -> Result<&TPolySeries> {
        self.entries
            .get(&(p, q))
            .ok_or_else(|| Error::InvalidParams(format!("I_({p},{q}) not in table (p_max = {})", self.p_max)))
    }

    /// I_{p,p} as a pure q-series.
    pub fn diagonal(&self, p: usize) -> Result<TruncatedSeries<Rational>> {
        self.get(p, p)?.to_pure()
    }

    fn check_diagonals(&self) -> Result<()> {
        for p in 0..=self.p_max {
            let d = self.diagonal(p)?;
            if !d.coeff(0).is_one() {
                return Err(Error::InvalidParams(format!("I_({p},{p}) has constant term {}", d.coeff(0))));
            }
        }
        Ok(())
    }

    /// Serializable snapshot with decimal-string rationals.
    pub fn to_record(&self) -> HGTableRecord {
        let entries = self
            .entries
            .iter()
            .map(|(&(p, q), s)| {
                let coeffs = s
                    .series()
                    .coeffs()
                    .iter()
                    .map(|poly| poly.coeffs().iter().map(encode).collect())
                    .collect();
                HGEntryRecord {
                    p,
                    q,
                    t_cap: s.t_cap(),
                    coeffs,
                }
            })
            .collect();
        HGTableRecord {
            n: self.n,
            a: self.a,
            u_order: self.u_order,
            p_max: self.p_max,
            entries,
        }
    }

    pub fn from_record(r: &HGTableRecord) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for e in &r.entries {
            let coeffs = e
                .coeffs
                .iter()
                .map(|poly| Ok(Poly::from_coeffs(poly.iter().map(|s| decode(s)).collect::<Result<_>>()?)))
                .collect::<Result<Vec<_>>>()?;
            let s = TruncatedSeries::new(Var::Q, r.u_order, coeffs)?;
            entries.insert((e.p, e.q), TPolySeries::new(s, e.t_cap)?);
        }
        let table = Self {
            n: r.n,
            a: r.a,
            u_order: r.u_order,
            p_max: r.p_max,
            entries,
        };
        table.check_diagonals()?;
        Ok(table)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HGEntryRecord {
    pub p: usize,
    pub q: usize,
    pub t_cap: usize,
    /// `coeffs[d][j]` is the coefficient of q^d t^j.
    pub coeffs: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HGTableRecord {
    pub n: usize,
    pub a: usize,
    pub u_order: usize,
    pub p_max: usize,
    pub entries: Vec<HGEntryRecord>,
}

/// g(q) = T − t with T = I_{0,1}/I_{0,0}.
#[derive(Clone, Debug, PartialEq)]
pub struct MirrorMap {
    pub g: TruncatedSeries<Rational>,
}

pub fn mirror_map(table: &HGTable) -> Result<MirrorMap> {
    if table.p_max < 1 {
        return Err(Error::InvalidParams("mirror map needs I_(0,1)".into()));
    }
    let ratio_series = table.get(0, 1)?.mul_pure(&table.diagonal(0)?.recip()?);
    let t = TPolySeries::new(
        TruncatedSeries::new(Var::Q, table.u_order, vec![Poly::var()])?,
        1,
    )?;
    let g = ratio_series
        .sub(&t)
        .to_pure()
        .map_err(|_| Error::ResidualT("I_(0,1)/I_(0,0) − t".into()))?;
    Ok(MirrorMap { g })
}

/// Which hypergeometric series to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum YVariant {
    /// 𝒴 = I_{0,0}^{-1} x Σ_d q^d ∏_{r=1}^{ad}(ax+rℏ)/∏_{r=1}^{d}(x+rℏ)^n.
    Y,
    /// 𝒴₋₁ = Σ_d q^d ∏_{r=0}^{ad−1}(ax+rℏ)/∏_{r=1}^{d}(x+rℏ)^n.
    YMinusOne,
    /// 𝒴 without its leading factor x (the one-point series before the mirror transform).
    YOverX,
}

/// Σ_d u^d Σ_{k<n} x^k (ℏ-Laurent); the variable tag is q before the mirror
/// transform and u after it.
#[derive(Clone, Debug, PartialEq)]
pub struct MirrorSeries {
    pub n: usize,
    pub a: usize,
    pub series: TruncatedSeries<NilClass>,
}

impl MirrorSeries {
    pub fn u_order(&self) -> usize {
        self.series.order()
    }

    /// Coefficient window of u^d x^k.
    pub fn coeff(&self, d: usize, k: usize) -> LaurentWindow {
        self.series.coeff(d).x_coeff(k)
    }

    pub fn class(&self, d: usize) -> &NilClass {
        self.series.coeff(d)
    }

    /// Default ℏ-window cap for degree bound `u_order`.
    pub fn cap(n: usize, a: usize, u_order: usize) -> WindowCap {
        let spread = (n - a).max(1) as i64;
        WindowCap {
            lo: -(spread * u_order as i64 + n as i64 + 2),
            hi: n as i64 + 2,
        }
    }

    pub fn check_cap(&self) -> Result<()> {
        let cap = Self::cap(self.n, self.a, self.u_order());
        self.series.coeffs().iter().try_for_each(|c| c.check_cap(&cap))
    }

    fn with_series(&self, series: TruncatedSeries<NilClass>) -> Self {
        Self {
            n: self.n,
            a: self.a,
            series,
        }
    }

    /// (x + ℏ d/dt) applied in q = e^t.
    pub fn x_plus_h_theta(&self) -> Self {
        let s = TruncatedSeries::from_fn(self.series.var(), self.u_order(), |d| {
            let c = self.series.coeff(d);
            c.mul_x() + c.shift_h(1).scale(&rat(d as i64))
        });
        self.with_series(s)
    }

    pub fn mul_series(&self, f: &TruncatedSeries<Rational>) -> Result<Self> {
        let lifted = f.map(|c| NilClass::from_rational(c).with_nil(self.n));
        Ok(self.with_series(self.series.checked_mul(&lifted)?))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        Ok(self.with_series(self.series.checked_sub(&rhs.series)?))
    }

    /// The q-series [x^k ℏ^e] of every coefficient.
    pub fn coeff_series(&self, k: usize, e: i64) -> TruncatedSeries<Rational> {
        TruncatedSeries::from_fn(self.series.var(), self.u_order(), |d| self.series.coeff(d).coeff(k, e))
    }

    /// Drops every negative power of ℏ: the part that survives modulo ℏ^{-1}.
    pub fn mod_h_inverse(&self) -> Self {
        self.with_series(self.series.map(|c| c.truncate_h_below(0)))
    }

    pub fn is_zero(&self) -> bool {
        self.series.is_zero()
    }
}

/// Non-equivariant 𝒴-type series, expanded with x^n = 0.
pub fn build_y(table: &HGTable, variant: YVariant) -> Result<MirrorSeries> {
    let (n, a, order) = (table.n, table.a, table.u_order);
    let lin = |r: i64| {
        NilClass::linear(
            n,
            if r == 0 { LaurentWindow::zero() } else { LaurentWindow::monomial(rat(r), 1) },
            LaurentWindow::constant(rat(a as i64)),
        )
    };
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut acc = NilClass::one().with_nil(n);
    coeffs.push(acc.clone());
    for d in 1..=order {
        let range = match variant {
            YVariant::YMinusOne => a * (d - 1)..a * d,
            YVariant::Y | YVariant::YOverX => a * (d - 1) + 1..a * d + 1,
        };
        for r in range {
            acc = acc * &lin(r as i64);
        }
        let den = NilClass::linear(n, LaurentWindow::monomial(rat(d as i64), 1), LaurentWindow::one());
        let inv = den.try_inv().expect("unit");
        for _ in 0..n {
            acc = acc * &inv;
        }
        coeffs.push(acc.clone());
    }
    let series = TruncatedSeries::new(Var::Q, order, coeffs)?;
    let mut m = MirrorSeries { n, a, series };
    if variant != YVariant::YMinusOne {
        m = m.mul_series(&table.diagonal(0)?.recip()?)?;
    }
    if variant == YVariant::Y {
        m = m.with_series(m.series.map(|c| c.mul_x()));
    }
    m.check_cap()?;
    Ok(m)
}

/// 𝔇^p in conjugated form: M ↦ I_{k,k}^{-1}(x + ℏ d/dt)M for k = 1..p.
pub fn dp_apply(p: usize, table: &HGTable, m: &MirrorSeries) -> Result<MirrorSeries> {
    if p > table.p_max {
        return Err(Error::InvalidParams(format!("p = {p} exceeds table p_max = {}", table.p_max)));
    }
    let mut out = m.clone();
    for k in 1..=p {
        out = out.x_plus_h_theta().mul_series(&table.diagonal(k)?.recip()?)?;
    }
    out.check_cap()?;
    Ok(out)
}

/// The family 𝒴₋₁, 𝒴₀, …, 𝒴_{n−1} together with the data read off along the way.
#[derive(Clone, Debug)]
pub struct YLadder {
    pub table: HGTable,
    pub map: MirrorMap,
    /// C_{0,1}^{(1)}(q): the x¹ℏ^{-1} coefficient of 𝒴₀.
    pub c01: TruncatedSeries<Rational>,
    /// `ys[p + 1]` is 𝒴_p.
    pub ys: Vec<MirrorSeries>,
    /// `corrections[(p, r)]` = C_{p−1,1}^{(r)}(q) for r ≥ 1 (zero for a = n).
    pub corrections: BTreeMap<(usize, usize), TruncatedSeries<Rational>>,
}

impl YLadder {
    /// Runs 𝒴_p = I_{p,p}^{-1}[(x + ℏ d/dt)𝒴_{p−1} − Σ_{r=1}^{p}(d/dt C_{p−1,1}^{(r)})𝒴_{p−r}],
    /// reading C_{p−1,1}^{(r)} off the x^{p+1−r}ℏ^{-1} coefficients of 𝒴_{p−1}.
    pub fn build(n: usize, a: usize, u_order: usize) -> Result<Self> {
        let table = build_i_table(n, a, n - 1, u_order)?;
        Self::from_table(table)
    }

    pub fn from_table(table: HGTable) -> Result<Self> {
        let (n, u_order) = (table.n, table.u_order);
        if table.p_max + 1 < n {
            return Err(Error::InvalidParams(format!("ladder needs p_max ≥ {}", n - 1)));
        }
        let map = mirror_map(&table)?;
        let mut ys = vec![build_y(&table, YVariant::YMinusOne)?];
        let mut corrections = BTreeMap::new();
        for p in 0..n {
            let prev = &ys[p];
            let stray = prev.coeff_series(0, -1);
            if !stray.is_zero() {
                return Err(Error::Inconsistent(format!("𝒴_{} has an x⁰ℏ⁻¹ term", p as i64 - 1)));
            }
            let diag = table.diagonal(p)?;
            if p + 1 < n {
                let top = prev.coeff_series(p + 1, -1);
                let expect = &TruncatedSeries::one(Var::Q, u_order) + &top.theta();
                if expect != diag {
                    return Err(Error::Inconsistent(format!("I_({p},{p}) disagrees with 𝒴_{}", p as i64 - 1)));
                }
            }
            let mut base = prev.x_plus_h_theta();
            for r in 1..=p {
                let c = prev.coeff_series(p + 1 - r, -1);
                if !c.is_zero() {
                    base = base.sub(&ys[p + 1 - r].mul_series(&c.theta())?)?;
                }
                corrections.insert((p, r), c);
            }
            let y = base.mul_series(&diag.recip()?)?;
            y.check_cap()?;
            ys.push(y);
        }
        let c01 = ys[1].coeff_series(1, -1);
        if n >= 3 && ys[1].coeff_series(2, -1) != map.g {
            return Err(Error::Inconsistent("top coefficient of 𝒴₀ differs from the mirror map".into()));
        }
        Ok(Self {
            table,
            map,
            c01,
            ys,
            corrections,
        })
    }

    pub fn y(&self, p: i64) -> &MirrorSeries {
        &self.ys[(p + 1) as usize]
    }
}

/// q^d ↦ 1/d on the u-independent part; convenience for tests.
pub fn period_coefficient(n: usize, d: usize) -> Rational {
    use crate::algebra::rational::{factorial, from_bigint};
    from_bigint(factorial((n * d) as u64)) / from_bigint(factorial(d as u64).pow(n as u32))
}

/// Σ_{r=lo}^{hi} n/r, used by the closed forms of I₁ and C_{0,1}^{(1)}.
pub fn harmonic_tail(n: usize, lo: usize, hi: usize) -> Rational {
    (lo..=hi).fold(Rational::zero(), |acc, r| acc + ratio(n as i64, r as i64))
}
