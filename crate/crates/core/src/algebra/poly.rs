//! Polynomials in `z_1..z_m` and their formal conjugates.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use smallvec::SmallVec;

use super::radical::RadicalNumber;
use super::rational::{GaussianRational, Rational};
use crate::error::AlgebraError;

/// Which Wirtinger derivative to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivKind {
    /// `∂/∂z_j`
    Holo,
    /// `∂/∂z̄_j`
    Anti,
}

/// `z^holo · z̄^anti`. Stored as one exponent vector `[holo.., anti..]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: SmallVec<[u16; 8]>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Self { exps: SmallVec::from_elem(0, 2 * nvars) }
    }

    pub fn new(holo: &[u16], anti: &[u16]) -> Self {
        assert_eq!(holo.len(), anti.len());
        let mut exps = SmallVec::with_capacity(2 * holo.len());
        exps.extend_from_slice(holo);
        exps.extend_from_slice(anti);
        Self { exps }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len() / 2
    }

    pub fn holo(&self) -> &[u16] {
        &self.exps[..self.nvars()]
    }

    pub fn anti(&self) -> &[u16] {
        &self.exps[self.nvars()..]
    }

    pub fn holo_exp(&self, j: usize) -> u16 {
        self.exps[j]
    }

    pub fn anti_exp(&self, j: usize) -> u16 {
        self.exps[self.nvars() + j]
    }

    pub fn set_holo(&mut self, j: usize, e: u16) {
        self.exps[j] = e;
    }

    pub fn set_anti(&mut self, j: usize, e: u16) {
        let n = self.nvars();
        self.exps[n + j] = e;
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn holo_degree(&self) -> u32 {
        self.holo().iter().map(|&e| e as u32).sum()
    }

    pub fn anti_degree(&self) -> u32 {
        self.anti().iter().map(|&e| e as u32).sum()
    }

    pub fn conj(&self) -> Self {
        let n = self.nvars();
        let mut exps = SmallVec::with_capacity(2 * n);
        exps.extend_from_slice(&self.exps[n..]);
        exps.extend_from_slice(&self.exps[..n]);
        Self { exps }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect() }
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Self) -> Self {
        Self { exps: self.exps.iter().zip(&other.exps).map(|(a, b)| b - a).collect() }
    }

    /// Equal holomorphic and antiholomorphic degree in every variable.
    pub fn is_balanced(&self) -> bool {
        self.holo() == self.anti()
    }
}

/// Graded lexicographic order on `[holo.., anti..]`; a monomial order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}|{:?}", self.holo(), self.anti())
    }
}

/// Polynomial in `z_1..z_m, z̄_1..z̄_m` (`m = nvars`) with radical
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HermitianPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, RadicalNumber>,
}

impl HermitianPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, RadicalNumber::one())
    }

    pub fn constant(nvars: usize, c: RadicalNumber) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn from_rational(nvars: usize, q: Rational) -> Self {
        Self::constant(nvars, RadicalNumber::from_rational(q))
    }

    pub fn from_int(nvars: usize, n: i64) -> Self {
        Self::constant(nvars, RadicalNumber::from_int(n))
    }

    /// The coordinate `z_j` (0-based).
    pub fn var(nvars: usize, j: usize) -> Self {
        let mut m = Monomial::one(nvars);
        m.set_holo(j, 1);
        Self::monomial(m, RadicalNumber::one())
    }

    /// The conjugate coordinate `z̄_j` (0-based).
    pub fn conj_var(nvars: usize, j: usize) -> Self {
        let mut m = Monomial::one(nvars);
        m.set_anti(j, 1);
        Self::monomial(m, RadicalNumber::one())
    }

    pub fn monomial(m: Monomial, c: RadicalNumber) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, RadicalNumber)>) -> Self {
        let mut acc: HashMap<Monomial, RadicalNumber> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            add_into(&mut acc, m, c);
        }
        Self::from_map(nvars, acc)
    }

    fn from_map(nvars: usize, acc: HashMap<Monomial, RadicalNumber>) -> Self {
        Self { nvars, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    /// `Σ_j z_j z̄_j`.
    pub fn norm_sq(nvars: usize) -> Self {
        Self::from_terms(
            nvars,
            (0..nvars).map(|j| {
                let mut m = Monomial::one(nvars);
                m.set_holo(j, 1);
                m.set_anti(j, 1);
                (m, RadicalNumber::one())
            }),
        )
    }

    /// `Σ_j z_j z̄_j − 1`, the defining function of the unit sphere.
    pub fn sphere_rho(nvars: usize) -> Self {
        &Self::norm_sq(nvars) - &Self::one(nvars)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &RadicalNumber)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&RadicalNumber> {
        self.terms.get(m)
    }

    /// The constant value, when the polynomial has no variables.
    pub fn as_constant(&self) -> Option<RadicalNumber> {
        match self.terms.len() {
            0 => Some(RadicalNumber::zero()),
            1 => self.constant_term().cloned(),
            _ => None,
        }
    }

    fn constant_term(&self) -> Option<&RadicalNumber> {
        self.terms.get(&Monomial::one(self.nvars))
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn holo_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::holo_degree).max().unwrap_or(0)
    }

    pub fn anti_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::anti_degree).max().unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &RadicalNumber)> {
        self.terms.iter().next_back()
    }

    fn check_nvars(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(AlgebraError::NvarsMismatch(self.nvars, other.nvars))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_nvars(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.get_mut(m) {
                Some(v) => {
                    *v = v.add_ref(c);
                    if v.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        Ok(Self { nvars: self.nvars, terms })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_nvars(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.nvars));
        }
        if let Some(c) = other.as_constant() {
            return Ok(self.scale(&c));
        }
        if let Some(c) = self.as_constant() {
            return Ok(other.scale(&c));
        }
        let mut acc: HashMap<Monomial, RadicalNumber> = HashMap::with_capacity(self.len() * other.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                add_into(&mut acc, m1.mul(m2), c1.mul_ref(c2));
            }
        }
        Ok(Self::from_map(self.nvars, acc))
    }

    pub fn neg_ref(&self) -> Self {
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect() }
    }

    pub fn scale(&self, c: &RadicalNumber) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        if c.is_one() {
            return self.clone();
        }
        Self::from_terms(self.nvars, self.terms.iter().map(|(m, k)| (m.clone(), k.mul_ref(c))))
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&RadicalNumber::from_rational(q.clone()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Swaps holomorphic and antiholomorphic exponents and conjugates the
    /// coefficients.
    pub fn conj(&self) -> Self {
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.conj(), c.conj())).collect() }
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// `(p + p̄)/2`.
    pub fn re(&self) -> Self {
        (self + &self.conj()).scale_rational(&Rational::new(1.into(), 2.into()))
    }

    /// Formal partial derivative, treating `z` and `z̄` as independent.
    pub fn derivative(&self, var: usize, kind: DerivKind) -> Result<Self, AlgebraError> {
        if var >= self.nvars {
            return Err(AlgebraError::VarOutOfRange { index: var, nvars: self.nvars });
        }
        let mut acc = HashMap::new();
        for (m, c) in &self.terms {
            let e = match kind {
                DerivKind::Holo => m.holo_exp(var),
                DerivKind::Anti => m.anti_exp(var),
            };
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            match kind {
                DerivKind::Holo => m2.set_holo(var, e - 1),
                DerivKind::Anti => m2.set_anti(var, e - 1),
            }
            add_into(&mut acc, m2, c.scale(&Rational::from_integer(e.into())));
        }
        Ok(Self::from_map(self.nvars, acc))
    }

    /// `∂/∂z_j`, panicking on an out-of-range index.
    pub fn d(&self, var: usize) -> Self {
        self.derivative(var, DerivKind::Holo).expect("variable index")
    }

    /// `∂/∂z̄_j`, panicking on an out-of-range index.
    pub fn dbar(&self, var: usize) -> Self {
        self.derivative(var, DerivKind::Anti).expect("variable index")
    }

    /// Exact multivariate division. Returns the quotient when `d` divides
    /// `self`; otherwise reports the remainder of the division algorithm
    /// (graded-lex order), which for a single divisor is zero exactly when
    /// `d` divides `self`.
    pub fn exact_divide(&self, d: &Self) -> Result<Self, AlgebraError> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(AlgebraError::NotDivisible { remainder: Box::new(r) })
        }
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), AlgebraError> {
        self.check_nvars(d)?;
        let (lm, lc) = d.leading_term().ok_or(AlgebraError::DivisionByZero)?;
        let lc_inv = lc.inv().ok_or(AlgebraError::DivisionByZero)?;
        let mut p = self.terms.clone();
        let mut quotient: HashMap<Monomial, RadicalNumber> = HashMap::new();
        let mut remainder: HashMap<Monomial, RadicalNumber> = HashMap::new();
        while let Some((m, c)) = p.pop_last() {
            if lm.divides(&m) {
                let qm = lm.quotient_of(&m);
                let qc = c.mul_ref(&lc_inv);
                for (dm, dc) in d.terms.iter().rev().skip(1) {
                    let mm = dm.mul(&qm);
                    let delta = dc.mul_ref(&qc).neg_ref();
                    match p.get_mut(&mm) {
                        Some(v) => {
                            *v = v.add_ref(&delta);
                            if v.is_zero() {
                                p.remove(&mm);
                            }
                        }
                        None => {
                            p.insert(mm, delta);
                        }
                    }
                }
                add_into(&mut quotient, qm, qc);
            } else {
                add_into(&mut remainder, m, c);
            }
        }
        Ok((Self::from_map(self.nvars, quotient), Self::from_map(self.nvars, remainder)))
    }

    /// Replaces `z_j` and `z̄_j` by zero.
    pub fn set_var_zero(&self, j: usize) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.holo_exp(j) == 0 && m.anti_exp(j) == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Exact value at a point with Gaussian-rational coordinates
    /// (`z̄_j` is evaluated at the conjugate coordinate).
    pub fn eval_exact(&self, point: &[GaussianRational]) -> RadicalNumber {
        assert_eq!(point.len(), self.nvars);
        let conj: Vec<GaussianRational> = point.iter().map(GaussianRational::conj).collect();
        let mut total = RadicalNumber::zero();
        for (m, c) in &self.terms {
            let mut v = GaussianRational::one();
            for j in 0..self.nvars {
                for _ in 0..m.holo_exp(j) {
                    v = v.mul_ref(&point[j]);
                }
                for _ in 0..m.anti_exp(j) {
                    v = v.mul_ref(&conj[j]);
                }
            }
            total = total.add_ref(&c.mul_gaussian(&v));
        }
        total
    }

    /// Every monomial has equal holomorphic and antiholomorphic degree in
    /// each variable (the polynomial is invariant under the torus action).
    pub fn is_balanced(&self) -> bool {
        self.terms.keys().all(Monomial::is_balanced)
    }

    /// True when all coefficients are rational (radical-free, real).
    pub fn has_rational_coefficients(&self) -> bool {
        self.terms.values().all(RadicalNumber::is_rational)
    }

    /// Re-embeds into a ring with `nvars` variables (must be at least the
    /// current count); new variables are appended at the end.
    pub fn extend_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        Self::from_terms(
            nvars,
            self.terms.iter().map(|(m, c)| {
                let mut holo = m.holo().to_vec();
                let mut anti = m.anti().to_vec();
                holo.resize(nvars, 0);
                anti.resize(nvars, 0);
                (Monomial::new(&holo, &anti), c.clone())
            }),
        )
    }
}

pub(crate) fn add_into(acc: &mut HashMap<Monomial, RadicalNumber>, m: Monomial, c: RadicalNumber) {
    match acc.get_mut(&m) {
        Some(v) => *v = v.add_ref(&c),
        None => {
            acc.insert(m, c);
        }
    }
}

impl<'a> Add<&'a HermitianPoly> for &'a HermitianPoly {
    type Output = HermitianPoly;
    fn add(self, o: &HermitianPoly) -> HermitianPoly {
        self.try_add(o).expect("nvars mismatch in add")
    }
}

impl<'a> Sub<&'a HermitianPoly> for &'a HermitianPoly {
    type Output = HermitianPoly;
    fn sub(self, o: &HermitianPoly) -> HermitianPoly {
        self.try_sub(o).expect("nvars mismatch in sub")
    }
}

impl<'a> Mul<&'a HermitianPoly> for &'a HermitianPoly {
    type Output = HermitianPoly;
    fn mul(self, o: &HermitianPoly) -> HermitianPoly {
        self.try_mul(o).expect("nvars mismatch in mul")
    }
}

impl Add for HermitianPoly {
    type Output = HermitianPoly;
    fn add(self, o: HermitianPoly) -> HermitianPoly {
        &self + &o
    }
}

impl Sub for HermitianPoly {
    type Output = HermitianPoly;
    fn sub(self, o: HermitianPoly) -> HermitianPoly {
        &self - &o
    }
}

impl Mul for HermitianPoly {
    type Output = HermitianPoly;
    fn mul(self, o: HermitianPoly) -> HermitianPoly {
        &self * &o
    }
}

impl Neg for HermitianPoly {
    type Output = HermitianPoly;
    fn neg(self) -> HermitianPoly {
        self.neg_ref()
    }
}

impl Neg for &HermitianPoly {
    type Output = HermitianPoly;
    fn neg(self) -> HermitianPoly {
        self.neg_ref()
    }
}

impl fmt::Debug for HermitianPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::report::canonical_poly(self))
    }
}

impl fmt::Display for HermitianPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::report::canonical_poly(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn zw() -> (HermitianPoly, HermitianPoly, HermitianPoly, HermitianPoly) {
        (
            HermitianPoly::var(2, 0),
            HermitianPoly::var(2, 1),
            HermitianPoly::conj_var(2, 0),
            HermitianPoly::conj_var(2, 1),
        )
    }

    #[test]
    fn sum_of_norms() {
        let (z, w, zb, wb) = zw();
        let p = &(&z * &zb) + &(&w * &wb);
        assert_eq!(p, HermitianPoly::norm_sq(2));
    }

    #[test]
    fn product_of_reals_is_real() {
        let (z, _, zb, _) = zw();
        let x = &z + &zb;
        assert!((&x * &x).is_real());
    }

    #[test]
    fn whitney_norm() {
        let (z, w, zb, wb) = zw();
        let comps = [z.clone(), &z * &w, &w * &w];
        let mut n = HermitianPoly::zero(2);
        for c in &comps {
            n = &n + &(c * &c.conj());
        }
        let expected = &(&(&z * &zb) + &(&(&z * &zb) * &(&w * &wb))) + &(&(&w * &w) * &(&wb * &wb));
        assert_eq!(n, expected);
    }

    #[test]
    fn conj_examples() {
        let (z, w, zb, wb) = zw();
        let iz = z.scale(&RadicalNumber::i());
        assert_eq!(iz.conj(), zb.scale(&RadicalNumber::i().neg_ref()));
        let rho = HermitianPoly::sphere_rho(2);
        assert_eq!(rho.conj(), rho);
        let r2 = RadicalNumber::sqrt_term(GaussianRational::from_int(1), 2);
        assert_eq!((&z * &w).scale(&r2).conj(), (&zb * &wb).scale(&r2));
    }

    #[test]
    fn derivatives() {
        let (z, w, zb, wb) = zw();
        let rho = HermitianPoly::sphere_rho(2);
        assert_eq!(rho.d(0), zb);
        assert!((&z * &z).dbar(0).is_zero());
        let p = &(&z * &zb) * &(&w * &wb);
        assert_eq!(p.d(1), &(&z * &zb) * &wb);
        assert!(p.derivative(2, DerivKind::Holo).is_err());
    }

    #[test]
    fn exact_division_examples() {
        let (z, w, zb, wb) = zw();
        let rho = HermitianPoly::sphere_rho(2);
        assert_eq!((&rho * &rho).exact_divide(&rho).unwrap(), rho);

        let zz = &z * &zb;
        let ww = &w * &wb;
        let num = &(&(&zz + &(&zz * &ww)) + &(&ww * &ww)) - &HermitianPoly::one(2);
        let q = num.exact_divide(&rho).unwrap();
        assert_eq!(q, &HermitianPoly::one(2) + &ww);
        assert_eq!(&q * &rho, num);

        match (&zz - &HermitianPoly::one(2)).exact_divide(&rho) {
            Err(AlgebraError::NotDivisible { remainder }) => assert_eq!(*remainder, ww.neg_ref()),
            other => panic!("expected NotDivisible, got {other:?}"),
        }
    }

    #[test]
    fn nvars_mismatch_is_an_error() {
        let a = HermitianPoly::var(2, 0);
        let b = HermitianPoly::var(3, 0);
        assert!(matches!(a.try_add(&b), Err(AlgebraError::NvarsMismatch(2, 3))));
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn exact_evaluation() {
        let rho = HermitianPoly::sphere_rho(2);
        let p = [GaussianRational::new(rat(3, 5), rat(0, 1)), GaussianRational::new(rat(0, 1), rat(4, 5))];
        assert!(rho.eval_exact(&p).is_zero());
    }
}
