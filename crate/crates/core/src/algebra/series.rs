//! Truncated power series in one formal variable, generic over the coefficient ring.
//!
//! Binary operations return the minimum of the two truncation orders and require
//! matching variable tags.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::rational::{ratio, Rational};
use super::ring::Ring;
use crate::error::{Error, Result};

/// Formal-variable tag of a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Var {
    /// u = e^T, the GW-side coordinate.
    U,
    /// q = e^t, the hypergeometric coordinate.
    Q,
    Z,
    W,
}

/// Σ_{k ≤ order} c_k v^k; `coeffs.len() == order + 1`.
#[derive(Clone, PartialEq, Debug)]
pub struct TruncatedSeries<R> {
    var: Var,
    order: usize,
    coeffs: Vec<R>,
}

impl<R: Ring> TruncatedSeries<R> {
    /// Pads missing coefficients with zero; errors when more than `order + 1` are given.
    pub fn new(var: Var, order: usize, mut coeffs: Vec<R>) -> Result<Self> {
        if coeffs.len() > order + 1 {
            return Err(Error::BeyondOrder {
                index: coeffs.len() - 1,
                order,
            });
        }
        coeffs.resize(order + 1, R::zero());
        Ok(Self { var, order, coeffs })
    }

    /// Keeps the first `order + 1` of the given coefficients.
    pub fn from_prefix(var: Var, order: usize, coeffs: &[R]) -> Self {
        let mut c: Vec<R> = coeffs.iter().take(order + 1).cloned().collect();
        c.resize(order + 1, R::zero());
        Self {
            var,
            order,
            coeffs: c,
        }
    }

    pub fn from_fn(var: Var, order: usize, f: impl FnMut(usize) -> R) -> Self {
        Self {
            var,
            order,
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn zero(var: Var, order: usize) -> Self {
        Self::from_fn(var, order, |_| R::zero())
    }

    pub fn constant(var: Var, order: usize, c: R) -> Self {
        let mut s = Self::zero(var, order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(var: Var, order: usize) -> Self {
        Self::constant(var, order, R::one())
    }

    /// The series `v` itself (zero if `order == 0`).
    pub fn variable(var: Var, order: usize) -> Self {
        let mut s = Self::zero(var, order);
        if order >= 1 {
            s.coeffs[1] = R::one();
        }
        s
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &R {
        &self.coeffs[k]
    }

    pub fn try_coeff(&self, k: usize) -> Result<&R> {
        self.coeffs.get(k).ok_or(Error::BeyondOrder {
            index: k,
            order: self.order,
        })
    }

    pub fn set_coeff(&mut self, k: usize, c: R) {
        self.coeffs[k] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_prefix(self.var, order.min(self.order), &self.coeffs)
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> TruncatedSeries<S> {
        TruncatedSeries {
            var: self.var,
            order: self.order,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn try_map<S: Ring>(&self, f: impl Fn(&R) -> Result<S>) -> Result<TruncatedSeries<S>> {
        Ok(TruncatedSeries {
            var: self.var,
            order: self.order,
            coeffs: self.coeffs.iter().map(f).collect::<Result<_>>()?,
        })
    }

    fn check_var(&self, rhs: &Self) -> Result<usize> {
        if self.var != rhs.var {
            return Err(Error::VariableMismatch(self.var, rhs.var));
        }
        Ok(self.order.min(rhs.order))
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        let order = self.check_var(rhs)?;
        Ok(Self::from_fn(self.var, order, |k| {
            self.coeffs[k].clone() + &rhs.coeffs[k]
        }))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        let order = self.check_var(rhs)?;
        Ok(Self::from_fn(self.var, order, |k| {
            self.coeffs[k].clone() - &rhs.coeffs[k]
        }))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        let order = self.check_var(rhs)?;
        let mut out = vec![R::zero(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(order + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] = std::mem::replace(&mut out[i + j], R::zero()) + &(a.clone() * b);
                }
            }
        }
        Ok(Self {
            var: self.var,
            order,
            coeffs: out,
        })
    }

    /// Coefficientwise product with a ring element.
    pub fn scale(&self, c: &R) -> Self {
        self.map(|x| x.clone() * c)
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.map(|x| x.scale(c))
    }

    /// `v·d/dv`: multiplies the k-th coefficient by k (this is d/dt when v = e^t).
    pub fn theta(&self) -> Self {
        Self::from_fn(self.var, self.order, |k| {
            self.coeffs[k].scale(&Rational::from_integer(k.into()))
        })
    }

    /// Multiplies by `v^k`, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        Self::from_fn(self.var, self.order, |j| {
            if j >= k {
                self.coeffs[j - k].clone()
            } else {
                R::zero()
            }
        })
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn recip(&self) -> Result<Self> {
        let inv0 = self.coeffs[0]
            .try_inv()
            .ok_or_else(|| Error::NotInvertible(format!("{:?}", self.coeffs[0])))?;
        let mut out: Vec<R> = Vec::with_capacity(self.order + 1);
        out.push(inv0.clone());
        for k in 1..=self.order {
            let mut acc = R::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc = acc + &(self.coeffs[j].clone() * &out[k - j]);
                }
            }
            out.push(-(acc * &inv0));
        }
        Ok(Self {
            var: self.var,
            order: self.order,
            coeffs: out,
        })
    }

    /// Exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonZeroConstant);
        }
        // f' = g' f, so k f_k = Σ_{j=1}^k j g_j f_{k-j}.
        let mut out: Vec<R> = Vec::with_capacity(self.order + 1);
        out.push(R::one());
        for k in 1..=self.order {
            let mut acc = R::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc = acc + &(self.coeffs[j].scale(&Rational::from_integer(j.into())) * &out[k - j]);
                }
            }
            out.push(acc.scale(&ratio(1, k as i64)));
        }
        Ok(Self {
            var: self.var,
            order: self.order,
            coeffs: out,
        })
    }

    /// Logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::ConstantNotOne);
        }
        // (log s)' = s'/s; integrate termwise.
        let quotient = self.theta().checked_mul(&self.recip()?)?;
        Ok(Self::from_fn(self.var, self.order, |k| {
            if k == 0 {
                R::zero()
            } else {
                quotient.coeffs[k].scale(&ratio(1, k as i64))
            }
        }))
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one(self.var, self.order);
        for _ in 0..e {
            acc = acc.checked_mul(self).expect("same variable");
        }
        acc
    }

    /// `self(inner(v))` for `inner` with rational coefficients and zero constant term.
    pub fn compose(&self, inner: &TruncatedSeries<Rational>) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonZeroConstant);
        }
        let order = self.order.min(inner.order);
        let inner = inner.truncate(order);
        let mut out = vec![R::zero(); order + 1];
        let mut power = TruncatedSeries::<Rational>::one(inner.var, order);
        for k in 0..=order {
            let c = &self.coeffs[k];
            if !c.is_zero() {
                for (j, p) in power.coeffs.iter().enumerate().skip(k) {
                    if !p.is_zero() {
                        out[j] = std::mem::replace(&mut out[j], R::zero()) + &c.scale(p);
                    }
                }
            }
            if k < order {
                power = power.checked_mul(&inner)?;
            }
        }
        Ok(Self {
            var: inner.var,
            order,
            coeffs: out,
        })
    }
}

impl TruncatedSeries<Rational> {
    /// The series `φ` with `φ(u)·e^{g(φ(u))} = u`, for `g` with zero constant term.
    ///
    /// Fixed-point iteration `φ ← u·e^{−g(φ)}`, one correct order per step.
    pub fn revert_exp(g: &Self, var: Var) -> Result<Self> {
        if !g.coeffs[0].is_zero() {
            return Err(Error::NonZeroConstant);
        }
        let order = g.order;
        let u = Self::variable(var, order);
        let mut phi = u.clone();
        for _ in 0..order {
            let e = (-g.compose(&phi)?.with_var(var)).exp()?;
            phi = u.checked_mul(&e)?;
        }
        Ok(phi)
    }
}

/// Coefficient of `w^s`, i.e. (1/s!)·(d/dw)^s f at w = 0.
pub fn dw_coeff<R: Ring>(f: &TruncatedSeries<R>, s: usize) -> Result<R> {
    f.try_coeff(s).cloned()
}

impl<R: Ring> Neg for TruncatedSeries<R> {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            var: self.var,
            order: self.order,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! series_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl<R: Ring> $tr<&TruncatedSeries<R>> for &TruncatedSeries<R> {
            type Output = TruncatedSeries<R>;
            /// Panics when the variable tags differ; use the `checked_` form to recover.
            fn $method(self, rhs: &TruncatedSeries<R>) -> TruncatedSeries<R> {
                self.$inner(rhs).expect("series variables must match")
            }
        }
        impl<R: Ring> $tr<TruncatedSeries<R>> for TruncatedSeries<R> {
            type Output = TruncatedSeries<R>;
            fn $method(self, rhs: TruncatedSeries<R>) -> TruncatedSeries<R> {
                self.$inner(&rhs).expect("series variables must match")
            }
        }
    };
}

series_binop!(Add, add, checked_add);
series_binop!(Sub, sub, checked_sub);
series_binop!(Mul, mul, checked_mul);
