//! Series in q = e^t whose coefficients are polynomials in t.

use num_traits::Zero;

use super::poly::Poly;
use super::rational::Rational;
use super::series::{TruncatedSeries, Var};
use crate::error::{Error, Result};

/// Σ_d p_d(t) q^d with q = e^t.
#[derive(Clone, PartialEq, Debug)]
pub struct TPolySeries {
    series: TruncatedSeries<Poly<Rational>>,
    t_cap: usize,
}

impl TPolySeries {
    /// `t_cap` bounds the t-degree of every coefficient beyond its q-degree.
    pub fn new(series: TruncatedSeries<Poly<Rational>>, t_cap: usize) -> Result<Self> {
        if series.var() != Var::Q {
            return Err(Error::VariableMismatch(series.var(), Var::Q));
        }
        let s = Self { series, t_cap };
        s.check_cap()?;
        Ok(s)
    }

    /// Embeds a pure q-series (constant in t).
    pub fn from_pure(s: &TruncatedSeries<Rational>) -> Self {
        Self {
            series: s.map(|c| Poly::constant(c.clone())),
            t_cap: 0,
        }
    }

    fn check_cap(&self) -> Result<()> {
        for (d, p) in self.series.coeffs().iter().enumerate() {
            if p.degree().is_some_and(|deg| deg > d + self.t_cap) {
                return Err(Error::InvalidParams(format!(
                    "t-degree {} of q^{d} exceeds cap {}",
                    p.degree().unwrap_or(0),
                    d + self.t_cap
                )));
            }
        }
        Ok(())
    }

    pub fn series(&self) -> &TruncatedSeries<Poly<Rational>> {
        &self.series
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn t_cap(&self) -> usize {
        self.t_cap
    }

    pub fn coeff(&self, d: usize) -> &Poly<Rational> {
        self.series.coeff(d)
    }

    /// Largest t-degree over all coefficients (`None` if identically zero).
    pub fn t_degree(&self) -> Option<usize> {
        self.series.coeffs().iter().filter_map(|p| p.degree()).max()
    }

    /// Drops t: returns the q-series if every coefficient is t-free.
    pub fn to_pure(&self) -> Result<TruncatedSeries<Rational>> {
        if self.t_degree().unwrap_or(0) > 0 {
            return Err(Error::ResidualT(format!("t-degree {:?}", self.t_degree())));
        }
        Ok(self.series.map(|p| p.coeff(0)))
    }

    /// d/dt: q^d p_d(t) ↦ q^d (p_d'(t) + d p_d(t)).
    pub fn dt_derivative(&self) -> Self {
        let s = TruncatedSeries::from_fn(Var::Q, self.order(), |d| {
            let p = self.series.coeff(d);
            p.derivative() + &p.scale(&Rational::from_integer(d.into()))
        });
        Self {
            series: s,
            t_cap: self.t_cap,
        }
    }

    pub fn mul_pure(&self, s: &TruncatedSeries<Rational>) -> Self {
        let lifted = s.map(|c| Poly::constant(c.clone()));
        Self {
            series: &self.series * &lifted,
            t_cap: self.t_cap,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self {
            series: &self.series - &rhs.series,
            t_cap: self.t_cap.max(rhs.t_cap),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.series.coeffs().iter().all(|p| p.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn t() -> Poly<Rational> {
        Poly::var()
    }

    fn series(cs: Vec<Poly<Rational>>) -> TPolySeries {
        TPolySeries::new(TruncatedSeries::new(Var::Q, 3, cs).unwrap(), 1).unwrap()
    }

    #[test]
    fn derivative_examples() {
        let s = series(vec![t()]);
        assert_eq!(s.dt_derivative().coeff(0), &Poly::constant(rat(1)));
        let tq = series(vec![Poly::zero(), t()]);
        assert_eq!(tq.dt_derivative().coeff(1), &Poly::linear(rat(1), rat(1)));
        let q2 = series(vec![Poly::zero(), Poly::zero(), Poly::constant(rat(1))]);
        assert_eq!(q2.dt_derivative().coeff(2), &Poly::constant(rat(2)));
    }

    #[test]
    fn pure_conversion() {
        let s = series(vec![Poly::constant(rat(1)), Poly::constant(rat(3))]);
        assert_eq!(s.to_pure().unwrap().coeff(1), &rat(3));
        assert!(series(vec![t()]).to_pure().is_err());
    }

    #[test]
    fn cap_enforced() {
        let cs = vec![t().pow(3)];
        assert!(TPolySeries::new(TruncatedSeries::new(Var::Q, 2, cs).unwrap(), 1).is_err());
    }
}
