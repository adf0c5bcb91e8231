//! Rational functions in ℏ over ℚ, kept reduced with a monic denominator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::Poly;
use super::rational::{encode, Rational};
use super::ring::Ring;
use crate::error::{Error, Result};

/// `num/den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly<Rational>,
    den: Poly<Rational>,
}

impl RatFn {
    pub fn new(num: Poly<Rational>, den: Poly<Rational>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly<Rational>, den: Poly<Rational>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading().expect("nonzero").recip();
        Self {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn from_poly(p: Poly<Rational>) -> Self {
        Self {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// The symbol ℏ.
    pub fn h() -> Self {
        Self::from_poly(Poly::var())
    }

    /// `ℏ^k` for any integer `k`.
    pub fn h_pow(k: i64) -> Self {
        if k >= 0 {
            Self::from_poly(Poly::monomial(Rational::one(), k as usize))
        } else {
            Self {
                num: Poly::one(),
                den: Poly::monomial(Rational::one(), (-k) as usize),
            }
        }
    }

    /// `c0 + c1·ℏ`.
    pub fn linear(c0: Rational, c1: Rational) -> Self {
        Self::from_poly(Poly::linear(c0, c1))
    }

    pub fn num(&self) -> &Poly<Rational> {
        &self.num
    }

    pub fn den(&self) -> &Poly<Rational> {
        &self.den
    }

    /// True iff the denominator is constant.
    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// True iff the denominator is a power of ℏ.
    pub fn is_laurent_in_h(&self) -> bool {
        let k = self.den.degree().expect("nonzero");
        self.den.low_order() == Some(k)
    }

    /// Denominator with all factors of ℏ removed.
    pub fn den_without_h(&self) -> Poly<Rational> {
        let k = self.den.low_order().expect("nonzero");
        Poly::from_coeffs(self.den.coeffs()[k..].to_vec())
    }

    pub fn eval(&self, at: &Rational) -> Result<Rational> {
        let d = self.den.at(at);
        if d.is_zero() {
            return Err(Error::Pole(encode(at)));
        }
        Ok(self.num.at(at) / d)
    }

    /// Substitutes `ℏ → c·ℏ`; `c = −1` gives `f(−ℏ)`.
    pub fn scale_var(&self, c: &Rational) -> Self {
        Self::normalized(self.num.scale_var(c), self.den.scale_var(c))
    }

    pub fn neg_h(&self) -> Self {
        self.scale_var(&-Rational::one())
    }

    /// The part that survives modulo ℏ^{-1}: the polynomial quotient `num div den`.
    pub fn polynomial_part(&self) -> Poly<Rational> {
        self.num.div_rem(&self.den).expect("nonzero").0
    }

    /// Coefficients of ℏ^{-1}, …, ℏ^{-k} in the expansion at ℏ = ∞.
    pub fn tail_at_infinity(&self, k: usize) -> Vec<Rational> {
        let (_, mut rem) = self.num.div_rem(&self.den).expect("nonzero");
        let dd = self.den.degree().expect("nonzero");
        let mut out = Vec::with_capacity(k);
        for _ in 0..k {
            rem = rem.shift(1);
            let c = if rem.degree() == Some(dd) {
                rem.coeff(dd)
            } else {
                Rational::zero()
            };
            if !c.is_zero() {
                rem = rem - &self.den.scale(&c);
            }
            out.push(c);
        }
        out
    }

    /// Coefficient of ℏ^e in the expansion at ℏ = ∞.
    pub fn coeff_at_infinity(&self, e: i64) -> Rational {
        if e >= 0 {
            self.polynomial_part().coeff(e as usize)
        } else {
            self.tail_at_infinity((-e) as usize).pop().expect("nonempty")
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc * self)
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return Self::normalized(self.num.clone() + &rhs.num, self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        let a = self.den.div_exact(&g).expect("gcd divides");
        let b = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &self.num * &b + &rhs.num * &a;
        Self::normalized(num, &a * &rhs.den)
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        let lc = den.leading().expect("nonzero").recip();
        Self {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self.add_ref(&-rhs.clone())
    }
}

impl Zero for RatFn {
    fn zero() -> Self {
        Self {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFn {
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
}

impl Neg for RatFn {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            num: -self.num,
            den: self.den,
        }
    }
}

macro_rules! ratfn_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&RatFn> for RatFn {
            type Output = RatFn;
            fn $method(self, rhs: &RatFn) -> RatFn {
                self.$inner(rhs)
            }
        }
        impl $tr<RatFn> for RatFn {
            type Output = RatFn;
            fn $method(self, rhs: RatFn) -> RatFn {
                self.$inner(&rhs)
            }
        }
        impl $tr<&RatFn> for &RatFn {
            type Output = RatFn;
            fn $method(self, rhs: &RatFn) -> RatFn {
                self.$inner(rhs)
            }
        }
    };
}

ratfn_binop!(Add, add, add_ref);
ratfn_binop!(Sub, sub, sub_ref);
ratfn_binop!(Mul, mul, mul_ref);

impl Ring for RatFn {
    fn from_rational(r: &Rational) -> Self {
        Self::constant(r.clone())
    }

    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }

    fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(r),
            den: self.den.clone(),
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{rat, ratio};

    fn p(cs: &[i64]) -> Poly<Rational> {
        Poly::from_coeffs(cs.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn predicates() {
        let f = RatFn::from_poly(p(&[1, 0, 1]));
        assert!(f.is_polynomial() && f.is_laurent_in_h());
        let g = RatFn::h_pow(-3);
        assert!(!g.is_polynomial() && g.is_laurent_in_h());
        let h = RatFn::new(p(&[1]), p(&[-2, 1])).unwrap();
        assert!(!h.is_polynomial() && !h.is_laurent_in_h());
    }

    #[test]
    fn reduction_and_monic_denominator() {
        let f = RatFn::new(p(&[-2, 0, 2]), p(&[2, 2])).unwrap();
        assert_eq!(f, RatFn::from_poly(p(&[-1, 1])));
        let g = RatFn::new(p(&[3]), p(&[0, 6])).unwrap();
        assert_eq!(g.den(), &p(&[0, 1]));
        assert_eq!(g.num(), &Poly::constant(ratio(1, 2)));
    }

    #[test]
    fn expansion_at_infinity() {
        // h/(h-1) = 1 + h^-1 + h^-2 + ...
        let f = RatFn::new(p(&[0, 1]), p(&[-1, 1])).unwrap();
        assert_eq!(f.polynomial_part(), p(&[1]));
        assert_eq!(f.tail_at_infinity(3), vec![rat(1), rat(1), rat(1)]);
        assert_eq!(f.coeff_at_infinity(-2), rat(1));
    }

    #[test]
    fn arithmetic() {
        let a = RatFn::new(p(&[1]), p(&[-1, 1])).unwrap();
        let b = RatFn::new(p(&[1]), p(&[1, 1])).unwrap();
        let s = &a + &b;
        assert_eq!(s, RatFn::new(p(&[0, 2]), p(&[-1, 0, 1])).unwrap());
        assert_eq!(&(&a * &b) * &RatFn::from_poly(p(&[-1, 0, 1])), RatFn::one());
        assert!((&a - &a).is_zero());
        assert_eq!(a.eval(&rat(3)).unwrap(), ratio(1, 2));
        assert!(a.eval(&rat(1)).is_err());
        assert_eq!(b.neg_h(), RatFn::new(p(&[-1]), p(&[-1, 1])).unwrap());
    }
}
