//! Dense univariate polynomials over a coefficient ring.
//!
//! `Poly<Rational>` carries the symbols ℏ and t; `Poly<RatFn>` carries Ω over
//! the field ℚ(ℏ). Euclidean operations are provided for `Poly<Rational>`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{rat, Rational};
use super::ring::Ring;
use crate::error::{Error, Result};

/// Coefficients lowest degree first; the last stored coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> Poly<R> {
    pub fn from_coeffs(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The variable itself.
    pub fn var() -> Self {
        Self::monomial(R::one(), 1)
    }

    pub fn monomial(c: R, k: usize) -> Self {
        let mut coeffs = vec![R::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    /// `c0 + c1·var`.
    pub fn linear(c0: R, c1: R) -> Self {
        Self::from_coeffs(vec![c0, c1])
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn eval(&self, at: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(), |acc, c| acc * at + c)
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&rat(k as i64)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x.clone() * c).collect())
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x.scale(c)).collect())
    }

    /// Multiplies by `var^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![R::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// `self(inner)` by Horner's rule.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc * inner + &Self::constant(c.clone()))
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc * self)
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Self::from_coeffs((0..len).map(|k| self.coeff(k) + &rhs.coeff(k)).collect())
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Self::from_coeffs((0..len).map(|k| self.coeff(k) - &rhs.coeff(k)).collect())
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = std::mem::replace(&mut out[i + j], R::zero()) + &(a.clone() * b);
            }
        }
        Self::from_coeffs(out)
    }
}

impl Poly<Rational> {
    /// Rational evaluation, convenience alias.
    pub fn at(&self, x: &Rational) -> Rational {
        self.eval(x)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division `self = q·rhs + r` with `deg r < deg rhs`.
    pub fn div_rem(&self, rhs: &Self) -> Result<(Self, Self)> {
        let dr = rhs.degree().ok_or(Error::DivisionByZero)?;
        let lc_inv = rhs.coeffs[dr].recip();
        let mut rem = self.coeffs.clone();
        let Some(ds) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if ds < dr {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); ds - dr + 1];
        for k in (0..=ds - dr).rev() {
            let c = &rem[k + dr] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    rem[k + j] -= &c * b;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dr);
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Exact quotient; errors when the remainder is nonzero.
    pub fn div_exact(&self, rhs: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(rhs)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotExact(format!("{self} / {rhs}")))
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.monic(), rhs.monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a
    }

    /// Substitutes `var → c·var`.
    pub fn scale_var(&self, c: &Rational) -> Self {
        let mut pw = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pw);
            pw *= c;
        }
        Self::from_coeffs(out)
    }

    /// Order of vanishing at 0 (`None` for the zero polynomial).
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

impl<R: Ring> Zero for Poly<R> {
    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<R: Ring> One for Poly<R> {
    fn one() -> Self {
        Self::constant(R::one())
    }
}

impl<R: Ring> Neg for Poly<R> {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! poly_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl<R: Ring> $tr<&Poly<R>> for Poly<R> {
            type Output = Poly<R>;
            fn $method(self, rhs: &Poly<R>) -> Poly<R> {
                self.$inner(rhs)
            }
        }
        impl<R: Ring> $tr<Poly<R>> for Poly<R> {
            type Output = Poly<R>;
            fn $method(self, rhs: Poly<R>) -> Poly<R> {
                self.$inner(&rhs)
            }
        }
        impl<R: Ring> $tr<&Poly<R>> for &Poly<R> {
            type Output = Poly<R>;
            fn $method(self, rhs: &Poly<R>) -> Poly<R> {
                self.$inner(rhs)
            }
        }
    };
}

poly_binop!(Add, add, add_ref);
poly_binop!(Sub, sub, sub_ref);
poly_binop!(Mul, mul, mul_ref);

impl<R: Ring> Ring for Poly<R> {
    fn from_rational(r: &Rational) -> Self {
        Self::constant(R::from_rational(r))
    }

    fn try_inv(&self) -> Option<Self> {
        match self.degree() {
            Some(0) => self.coeffs[0].try_inv().map(Self::constant),
            _ => None,
        }
    }
}

impl<R: Ring> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl fmt::Display for Poly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})h"),
                _ => format!("({c})h^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::ratio;

    fn p(cs: &[i64]) -> Poly<Rational> {
        Poly::from_coeffs(cs.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn normalization_drops_trailing_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(p(&[0, 0]).is_zero());
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]); // h^2 - 1
        let b = p(&[1, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        let g = p(&[2, 2]).gcd(&p(&[-3, 0, 3]));
        assert_eq!(g, p(&[1, 1]));
        assert!(a.div_exact(&p(&[2, 1])).is_err());
    }

    #[test]
    fn compose_and_derivative() {
        let f = p(&[0, 0, 1]);
        assert_eq!(f.compose(&p(&[1, 1])), p(&[1, 2, 1]));
        assert_eq!(p(&[5, 3, 1]).derivative(), p(&[3, 2]));
        assert_eq!(p(&[1, 1]).scale_var(&ratio(1, 2)), Poly::from_coeffs(vec![rat(1), ratio(1, 2)]));
    }
}
