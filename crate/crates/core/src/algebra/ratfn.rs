//! Quotients of Hermitian polynomials.
//!
//! Numerator and denominator are kept as constructed: there is no gcd
//! normalization, and equality is decided by cross-multiplication.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::One;

use super::poly::{DerivKind, HermitianPoly};
use super::radical::RadicalNumber;
use crate::error::AlgebraError;

/// How the denominator is known not to vanish on the sphere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Certification {
    /// Constant denominator, or sampled minimum above the threshold.
    Checked,
    /// Taken on trust from the caller.
    Asserted,
}

impl Certification {
    fn and(self, other: Self) -> Self {
        if self == Certification::Checked && other == Certification::Checked {
            Certification::Checked
        } else {
            Certification::Asserted
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: HermitianPoly,
    den: HermitianPoly,
    cert: Certification,
}

impl RationalFunction {
    pub fn from_poly(p: HermitianPoly) -> Self {
        let nvars = p.nvars();
        Self { num: p, den: HermitianPoly::one(nvars), cert: Certification::Checked }
    }

    /// `num / den` with the denominator asserted nonvanishing on the sphere.
    pub fn new(num: HermitianPoly, den: HermitianPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if num.nvars() != den.nvars() {
            return Err(AlgebraError::NvarsMismatch(num.nvars(), den.nvars()));
        }
        let cert = if den.as_constant().is_some() { Certification::Checked } else { Certification::Asserted };
        Ok(Self { num, den, cert }.normalize_constant_den())
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(HermitianPoly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(HermitianPoly::one(nvars))
    }

    pub fn constant(nvars: usize, c: RadicalNumber) -> Self {
        Self::from_poly(HermitianPoly::constant(nvars, c))
    }

    /// Folds a constant denominator into the numerator.
    fn normalize_constant_den(self) -> Self {
        match self.den.as_constant() {
            Some(c) if !c.is_one() => {
                let inv = c.inv().expect("nonzero constant");
                Self::from_poly(self.num.scale(&inv))
            }
            Some(_) => Self { cert: Certification::Checked, ..self },
            None => self,
        }
    }

    pub fn num(&self) -> &HermitianPoly {
        &self.num
    }

    pub fn den(&self) -> &HermitianPoly {
        &self.den
    }

    pub fn into_parts(self) -> (HermitianPoly, HermitianPoly) {
        (self.num, self.den)
    }

    pub fn certification(&self) -> Certification {
        self.cert
    }

    pub fn with_certification(mut self, cert: Certification) -> Self {
        self.cert = cert;
        self
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Applies `f` to numerator and denominator separately.
    pub fn map_parts(&self, f: impl Fn(&HermitianPoly) -> HermitianPoly) -> Self {
        Self { num: f(&self.num), den: f(&self.den), cert: self.cert }
    }

    pub fn conj(&self) -> Self {
        self.map_parts(HermitianPoly::conj)
    }

    pub fn scale(&self, c: &RadicalNumber) -> Self {
        Self { num: self.num.scale(c), den: self.den.clone(), cert: self.cert }
    }

    /// Exact equality as rational functions (no ideal reduction).
    pub fn eq_exact(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    /// Equality modulo the ideal generated by `rho`.
    pub fn eq_mod(&self, other: &Self, rho: &HermitianPoly) -> bool {
        let diff = &(&self.num * &other.den) - &(&other.num * &self.den);
        diff.is_zero() || diff.exact_divide(rho).is_ok()
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let cert = self.cert.and(other.cert);
        if self.den == other.den {
            return Self { num: &self.num + &other.num, den: self.den.clone(), cert };
        }
        Self { num: &(&self.num * &other.den) + &(&other.num * &self.den), den: &self.den * &other.den, cert }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars());
        }
        Self { num: &self.num * &other.num, den: &self.den * &other.den, cert: self.cert.and(other.cert) }
    }

    pub fn mul_poly(&self, p: &HermitianPoly) -> Self {
        Self { num: &self.num * p, den: self.den.clone(), cert: self.cert }
    }

    pub fn div_ref(&self, other: &Self) -> Result<Self, AlgebraError> {
        if other.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let den = &self.den * &other.num;
        let cert = if den.as_constant().is_some() { Certification::Checked } else { Certification::Asserted };
        Ok(Self { num: &self.num * &other.den, den, cert }.normalize_constant_den())
    }

    pub fn neg_ref(&self) -> Self {
        Self { num: self.num.neg_ref(), den: self.den.clone(), cert: self.cert }
    }

    pub fn pow(&self, e: u32) -> Self {
        Self { num: self.num.pow(e), den: self.den.pow(e), cert: self.cert }
    }

    /// Quotient rule.
    pub fn derivative(&self, var: usize, kind: DerivKind) -> Result<Self, AlgebraError> {
        let dn = self.num.derivative(var, kind)?;
        if self.den.as_constant().is_some() {
            return Ok(Self { num: dn, den: self.den.clone(), cert: self.cert });
        }
        let dd = self.den.derivative(var, kind)?;
        Ok(Self { num: &(&dn * &self.den) - &(&self.num * &dd), den: &self.den * &self.den, cert: self.cert })
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &RationalFunction) -> RationalFunction {
        self.add_ref(o)
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &RationalFunction) -> RationalFunction {
        self.sub_ref(o)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &RationalFunction) -> RationalFunction {
        self.mul_ref(o)
    }
}

impl<'a> Div<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn div(self, o: &RationalFunction) -> RationalFunction {
        self.div_ref(o).expect("division by zero rational function")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        self.neg_ref()
    }
}

impl From<HermitianPoly> for RationalFunction {
    fn from(p: HermitianPoly) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::report::canonical_ratfn(self))
    }
}
