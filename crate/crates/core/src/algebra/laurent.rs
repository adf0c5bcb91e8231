//! Finite ℏ-Laurent windows, x-nilpotent classes built on them, and the
//! bivariate (ℏ₁, ℏ₂) windows used by two-point series.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::Rational;
use super::ring::Ring;
use crate::error::{Error, Result};

/// Allowed exponent range for ℏ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowCap {
    pub lo: i64,
    pub hi: i64,
}

impl WindowCap {
    pub fn check(&self, lo: i64, hi: i64) -> Result<()> {
        if lo < self.lo || hi > self.hi {
            return Err(Error::WindowOverflow {
                lo,
                hi,
                cap_lo: self.lo,
                cap_hi: self.hi,
            });
        }
        Ok(())
    }
}

/// Σ_{e=lo}^{hi} c_e ℏ^e with rational entries. Stored trimmed; the zero
/// window has no entries.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentWindow {
    lo: i64,
    coeffs: Vec<Rational>,
}

impl LaurentWindow {
    pub fn new(lo: i64, coeffs: Vec<Rational>) -> Self {
        let mut w = Self { lo, coeffs };
        w.trim();
        w
    }

    pub fn monomial(c: Rational, e: i64) -> Self {
        Self::new(e, vec![c])
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.lo += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.lo = 0;
        }
    }

    /// Lowest stored exponent (`None` when zero).
    pub fn lo(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.lo)
    }

    /// Highest stored exponent (`None` when zero).
    pub fn hi(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.lo + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, e: i64) -> Rational {
        let k = e - self.lo;
        if k < 0 {
            return Rational::zero();
        }
        self.coeffs.get(k as usize).cloned().unwrap_or_else(Rational::zero)
    }

    /// `(exponent, coefficient)` pairs of nonzero entries.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.lo + k as i64, c))
    }

    /// Multiplies by ℏ^k.
    pub fn shift(&self, k: i64) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        Self {
            lo: self.lo + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Substitutes ℏ → −ℏ.
    pub fn neg_h(&self) -> Self {
        Self::new(
            self.lo,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if (self.lo + k as i64) % 2 == 0 { c.clone() } else { -c })
                .collect(),
        )
    }

    /// Keeps only exponents `e ≥ min_exp`.
    pub fn truncate_below(&self, min_exp: i64) -> Self {
        Self::new(
            self.lo.max(min_exp),
            self.terms_from(min_exp),
        )
    }

    fn terms_from(&self, min_exp: i64) -> Vec<Rational> {
        let skip = (min_exp - self.lo).max(0) as usize;
        self.coeffs.iter().skip(skip).cloned().collect()
    }

    pub fn check_cap(&self, cap: &WindowCap) -> Result<()> {
        match (self.lo(), self.hi()) {
            (Some(lo), Some(hi)) => cap.check(lo, hi),
            _ => Ok(()),
        }
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        if rhs.coeffs.is_empty() {
            return self.clone();
        }
        if self.coeffs.is_empty() {
            return rhs.clone();
        }
        let lo = self.lo.min(rhs.lo);
        let hi = self.hi().unwrap().max(rhs.hi().unwrap());
        Self::new(lo, (lo..=hi).map(|e| self.coeff(e) + rhs.coeff(e)).collect())
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::default();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(self.lo + rhs.lo, out)
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self.add_ref(&-rhs.clone())
    }
}

impl Zero for LaurentWindow {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for LaurentWindow {
    fn one() -> Self {
        Self::constant(Rational::one())
    }
}

impl Neg for LaurentWindow {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            lo: self.lo,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! binops {
    ($ty:ty) => {
        impl Add<&$ty> for $ty {
            type Output = $ty;
            fn add(self, rhs: &$ty) -> $ty {
                self.add_ref(rhs)
            }
        }
        impl Add<$ty> for $ty {
            type Output = $ty;
            fn add(self, rhs: $ty) -> $ty {
                self.add_ref(&rhs)
            }
        }
        impl Sub<&$ty> for $ty {
            type Output = $ty;
            fn sub(self, rhs: &$ty) -> $ty {
                self.sub_ref(rhs)
            }
        }
        impl Sub<$ty> for $ty {
            type Output = $ty;
            fn sub(self, rhs: $ty) -> $ty {
                self.sub_ref(&rhs)
            }
        }
        impl Mul<&$ty> for $ty {
            type Output = $ty;
            fn mul(self, rhs: &$ty) -> $ty {
                self.mul_ref(rhs)
            }
        }
        impl Mul<$ty> for $ty {
            type Output = $ty;
            fn mul(self, rhs: $ty) -> $ty {
                self.mul_ref(&rhs)
            }
        }
        impl Mul<&$ty> for &$ty {
            type Output = $ty;
            fn mul(self, rhs: &$ty) -> $ty {
                self.mul_ref(rhs)
            }
        }
        impl Add<&$ty> for &$ty {
            type Output = $ty;
            fn add(self, rhs: &$ty) -> $ty {
                self.add_ref(rhs)
            }
        }
        impl Sub<&$ty> for &$ty {
            type Output = $ty;
            fn sub(self, rhs: &$ty) -> $ty {
                self.sub_ref(rhs)
            }
        }
    };
}

binops!(LaurentWindow);
binops!(NilClass);

impl Ring for LaurentWindow {
    fn from_rational(r: &Rational) -> Self {
        Self::constant(r.clone())
    }

    fn try_inv(&self) -> Option<Self> {
        (self.coeffs.len() == 1).then(|| Self::monomial(self.coeffs[0].recip(), -self.lo))
    }

    fn scale(&self, r: &Rational) -> Self {
        Self::new(self.lo, self.coeffs.iter().map(|c| c * r).collect())
    }
}

/// Σ_{k<n} x^k · (ℏ-Laurent window), with x^n = 0.
///
/// `nil == 0` marks a bare constant whose nilpotency order is inherited from
/// whatever it meets; every product truncates at the larger known order.
#[derive(Clone, Debug, Default)]
pub struct NilClass {
    nil: usize,
    coeffs: Vec<LaurentWindow>,
}

impl NilClass {
    pub fn new(nil: usize, mut coeffs: Vec<LaurentWindow>) -> Self {
        if nil > 0 {
            coeffs.truncate(nil);
        }
        let mut c = Self { nil, coeffs };
        c.trim();
        c
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|w| w.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn zero_n(nil: usize) -> Self {
        Self::new(nil, Vec::new())
    }

    /// `c·x^k·ℏ^e`.
    pub fn monomial(nil: usize, c: Rational, k: usize, e: i64) -> Self {
        let mut coeffs = vec![LaurentWindow::zero(); k + 1];
        coeffs[k] = LaurentWindow::monomial(c, e);
        Self::new(nil, coeffs)
    }

    /// `c0·ℏ^e0 + c1·x·ℏ^e1`, the shape of the linear factors (ax + rℏ).
    pub fn linear(nil: usize, h_part: LaurentWindow, x_part: LaurentWindow) -> Self {
        Self::new(nil, vec![h_part, x_part])
    }

    pub fn nil(&self) -> usize {
        self.nil
    }

    pub fn with_nil(mut self, nil: usize) -> Self {
        self.nil = nil;
        if nil > 0 {
            self.coeffs.truncate(nil);
            self.trim();
        }
        self
    }

    pub fn x_coeff(&self, k: usize) -> LaurentWindow {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn x_coeffs(&self) -> &[LaurentWindow] {
        &self.coeffs
    }

    /// Coefficient of x^k ℏ^e.
    pub fn coeff(&self, k: usize, e: i64) -> Rational {
        self.coeffs.get(k).map(|w| w.coeff(e)).unwrap_or_else(Rational::zero)
    }

    /// Multiplies by x.
    pub fn mul_x(&self) -> Self {
        let mut coeffs = vec![LaurentWindow::zero()];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(self.nil, coeffs)
    }

    /// Multiplies by ℏ^k.
    pub fn shift_h(&self, k: i64) -> Self {
        Self::new(self.nil, self.coeffs.iter().map(|w| w.shift(k)).collect())
    }

    /// Keeps only ℏ-exponents `e ≥ min_exp` in every x-coefficient.
    pub fn truncate_h_below(&self, min_exp: i64) -> Self {
        Self::new(self.nil, self.coeffs.iter().map(|w| w.truncate_below(min_exp)).collect())
    }

    pub fn check_cap(&self, cap: &WindowCap) -> Result<()> {
        self.coeffs.iter().try_for_each(|w| w.check_cap(cap))
    }

    /// Largest and smallest ℏ-exponents present.
    pub fn h_range(&self) -> Option<(i64, i64)> {
        let lo = self.coeffs.iter().filter_map(|w| w.lo()).min()?;
        let hi = self.coeffs.iter().filter_map(|w| w.hi()).max()?;
        Some((lo, hi))
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Self::new(
            self.nil.max(rhs.nil),
            (0..len).map(|k| self.x_coeff(k) + rhs.x_coeff(k)).collect(),
        )
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Self::new(
            self.nil.max(rhs.nil),
            (0..len).map(|k| self.x_coeff(k) - rhs.x_coeff(k)).collect(),
        )
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        let nil = self.nil.max(rhs.nil);
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::zero_n(nil);
        }
        let mut len = self.coeffs.len() + rhs.coeffs.len() - 1;
        if nil > 0 {
            len = len.min(nil);
        }
        let mut out = vec![LaurentWindow::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(len.saturating_sub(i)) {
                if !b.is_zero() {
                    out[i + j] = std::mem::take(&mut out[i + j]) + a * b;
                }
            }
        }
        Self::new(nil, out)
    }
}

/// The nilpotency tag is bookkeeping; equality is on coefficients.
impl PartialEq for NilClass {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for NilClass {}

impl Zero for NilClass {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for NilClass {
    fn one() -> Self {
        Self::new(0, vec![LaurentWindow::one()])
    }
}

impl Neg for NilClass {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(self.nil, self.coeffs.into_iter().map(|w| -w).collect())
    }
}

impl Ring for NilClass {
    fn from_rational(r: &Rational) -> Self {
        Self::new(0, vec![LaurentWindow::constant(r.clone())])
    }

    /// Units are `c·ℏ^e + (nilpotent)`; inverted by the finite geometric series.
    fn try_inv(&self) -> Option<Self> {
        let head = self.coeffs.first()?.try_inv()?;
        if self.nil == 0 && self.coeffs.len() > 1 {
            return None;
        }
        let head_class = Self::new(self.nil, vec![head]);
        let rest = Self::new(self.nil, {
            let mut c = self.coeffs.clone();
            c[0] = LaurentWindow::zero();
            c
        });
        // (h + r)^{-1} = h^{-1} Σ (−r h^{-1})^k, finite since r is nilpotent.
        let step = -(rest * &head_class);
        let mut acc = Self::one().with_nil(self.nil);
        let mut power = acc.clone();
        for _ in 1..self.nil.max(1) {
            power = power * &step;
            if power.is_zero() {
                break;
            }
            acc = acc + &power;
        }
        Some(acc * &head_class)
    }

    fn scale(&self, r: &Rational) -> Self {
        Self::new(self.nil, self.coeffs.iter().map(|w| w.scale(r)).collect())
    }
}

/// Σ c_{e₁,e₂} ℏ₁^{e₁} ℏ₂^{e₂}, dense over a rectangle; zero has empty rows.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BiLaurent {
    lo1: i64,
    lo2: i64,
    rows: Vec<Vec<Rational>>,
}

impl BiLaurent {
    pub fn new(lo1: i64, lo2: i64, rows: Vec<Vec<Rational>>) -> Self {
        let mut b = Self { lo1, lo2, rows };
        b.trim();
        b
    }

    fn width(&self) -> usize {
        self.rows.iter().map(|r| r.len()).max().unwrap_or(0)
    }

    fn trim(&mut self) {
        let w = self.width();
        for r in &mut self.rows {
            r.resize(w, Rational::zero());
        }
        while self.rows.last().is_some_and(|r| r.iter().all(|c| c.is_zero())) {
            self.rows.pop();
        }
        let lead = self.rows.iter().take_while(|r| r.iter().all(|c| c.is_zero())).count();
        self.rows.drain(..lead);
        self.lo1 += lead as i64;
        let w = self.width();
        let right = (0..w).rev().take_while(|&j| self.rows.iter().all(|r| r[j].is_zero())).count();
        let left = (0..w).take_while(|&j| self.rows.iter().all(|r| r[j].is_zero())).count();
        if left == w {
            self.rows.clear();
        }
        if self.rows.is_empty() {
            self.lo1 = 0;
            self.lo2 = 0;
            return;
        }
        for r in &mut self.rows {
            r.truncate(w - right);
            r.drain(..left);
        }
        self.lo2 += left as i64;
    }

    /// `a(ℏ₁)·b(ℏ₂)`.
    pub fn outer(a: &LaurentWindow, b: &LaurentWindow) -> Self {
        let (Some(lo1), Some(lo2)) = (a.lo(), b.lo()) else {
            return Self::default();
        };
        let rows = a
            .coeffs
            .iter()
            .map(|x| b.coeffs.iter().map(|y| x * y).collect())
            .collect();
        Self::new(lo1, lo2, rows)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn coeff(&self, e1: i64, e2: i64) -> Rational {
        let (i, j) = (e1 - self.lo1, e2 - self.lo2);
        if i < 0 || j < 0 {
            return Rational::zero();
        }
        self.rows
            .get(i as usize)
            .and_then(|r| r.get(j as usize))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// `(e₁, e₂, c)` for every nonzero entry, ordered by (e₁, e₂).
    pub fn terms(&self) -> Vec<(i64, i64, Rational)> {
        let mut out = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            for (j, c) in r.iter().enumerate() {
                if !c.is_zero() {
                    out.push((self.lo1 + i as i64, self.lo2 + j as i64, c.clone()));
                }
            }
        }
        out
    }

    /// Exchanges the roles of ℏ₁ and ℏ₂.
    pub fn swapped(&self) -> Self {
        let w = self.width();
        let rows = (0..w)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        Self::new(self.lo2, self.lo1, rows)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let lo1 = self.lo1.min(rhs.lo1);
        let lo2 = self.lo2.min(rhs.lo2);
        let hi1 = (self.lo1 + self.rows.len() as i64).max(rhs.lo1 + rhs.rows.len() as i64);
        let hi2 = (self.lo2 + self.width() as i64).max(rhs.lo2 + rhs.width() as i64);
        let rows = (lo1..hi1)
            .map(|e1| (lo2..hi2).map(|e2| self.coeff(e1, e2) + rhs.coeff(e1, e2)).collect())
            .collect();
        Self::new(lo1, lo2, rows)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(
            self.lo1,
            self.lo2,
            self.rows.iter().map(|r| r.iter().map(|x| x * c).collect()).collect(),
        )
    }

    /// Exact quotient by (ℏ₁ + ℏ₂), or `None` when not divisible.
    pub fn div_by_sum(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        // Treat as a polynomial in ℏ₁ (after removing ℏ₁^{lo1}) with ℏ₂-Laurent
        // coefficients and run synthetic division by ℏ₁ − (−ℏ₂).
        let m = self.rows.len();
        let row = |i: usize| LaurentWindow::new(self.lo2, self.rows[i].clone());
        let mut quot: Vec<LaurentWindow> = vec![LaurentWindow::zero(); m.saturating_sub(1)];
        let mut carry = LaurentWindow::zero();
        for i in (0..m).rev() {
            let c = row(i) + &carry;
            if i == 0 {
                if !c.is_zero() {
                    return None;
                }
            } else {
                quot[i - 1] = c.clone();
                carry = -c.shift(1);
            }
        }
        let lo2 = quot.iter().filter_map(|w| w.lo()).min().unwrap_or(0);
        let hi2 = quot.iter().filter_map(|w| w.hi()).max().unwrap_or(0);
        let rows = quot
            .iter()
            .map(|w| (lo2..=hi2).map(|e| w.coeff(e)).collect())
            .collect();
        Some(Self::new(self.lo1, lo2, rows))
    }

    /// Multiplies by (ℏ₁ + ℏ₂).
    pub fn mul_by_sum(&self) -> Self {
        let a = Self::new(self.lo1 + 1, self.lo2, self.rows.clone());
        let b = Self::new(self.lo1, self.lo2 + 1, self.rows.clone());
        a.add(&b)
    }

    pub fn check_cap(&self, cap: &WindowCap) -> Result<()> {
        if self.is_zero() {
            return Ok(());
        }
        cap.check(self.lo1, self.lo1 + self.rows.len() as i64 - 1)?;
        cap.check(self.lo2, self.lo2 + self.width() as i64 - 1)
    }
}
