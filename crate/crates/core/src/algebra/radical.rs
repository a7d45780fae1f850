//! Finite sums `Σ q_m·√m` over squarefree `m` with Gaussian-rational `q_m`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::{fmt_rational, rational_to_f64, GaussianRational, Rational};
use crate::error::AlgebraError;

/// Exact coefficient in the multi-radical field `Q(i)(√2, √3, √5, …)`.
///
/// Terms are kept sorted by radicand, every radicand is squarefree and no
/// coefficient is zero, so structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RadicalNumber {
    terms: Vec<(u64, GaussianRational)>,
}

impl RadicalNumber {
    pub fn from_gaussian(q: GaussianRational) -> Self {
        if q.is_zero() {
            Self::default()
        } else {
            Self { terms: vec![(1, q)] }
        }
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::from_gaussian(GaussianRational::real(q))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn i() -> Self {
        Self::from_gaussian(GaussianRational::i())
    }

    /// `q·√m` for an arbitrary positive integer `m`; square factors of `m`
    /// are pulled out.
    pub fn sqrt_term(q: GaussianRational, m: u64) -> Self {
        if m == 0 || q.is_zero() {
            return Self::default();
        }
        let (outer, inner) = split_square(m);
        Self::normalized(vec![(inner, q.scale(&Rational::from_integer(BigInt::from(outer))))])
    }

    /// Exact square root of a nonnegative rational `a/b = √(ab)/b`.
    pub fn sqrt_rational(q: &Rational) -> Result<Self, AlgebraError> {
        if q.is_negative() {
            return Err(AlgebraError::NegativeRadicand(fmt_rational(q)));
        }
        if q.is_zero() {
            return Ok(Self::default());
        }
        let ab = q.numer() * q.denom();
        let (outer, inner) = split_square_big(&ab)?;
        let coeff = Rational::new(outer, q.denom().clone());
        Ok(Self::normalized(vec![(inner, GaussianRational::real(coeff))]))
    }

    fn normalized(mut terms: Vec<(u64, GaussianRational)>) -> Self {
        terms.sort_by_key(|(m, _)| *m);
        let mut out: Vec<(u64, GaussianRational)> = Vec::with_capacity(terms.len());
        for (m, q) in terms {
            match out.last_mut() {
                Some((lm, lq)) if *lm == m => *lq += &q,
                _ => out.push((m, q)),
            }
        }
        out.retain(|(_, q)| !q.is_zero());
        Self { terms: out }
    }

    pub fn terms(&self) -> &[(u64, GaussianRational)] {
        &self.terms
    }

    pub fn is_rational(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0 == 1 && self.terms[0].1.is_real())
    }

    /// The value as a plain Gaussian rational, when no radical is present.
    pub fn as_gaussian(&self) -> Option<GaussianRational> {
        match self.terms.as_slice() {
            [] => Some(GaussianRational::zero()),
            [(1, q)] => Some(q.clone()),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.as_gaussian().filter(|q| q.is_real()).map(|q| q.re)
    }

    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(|(m, q)| (*m, q.conj())).collect() }
    }

    /// Real part (conjugation fixes each `√m`).
    pub fn re(&self) -> Self {
        Self::normalized(self.terms.iter().map(|(m, q)| (*m, GaussianRational::real(q.re.clone()))).collect())
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(_, q)| q.is_real())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::default();
        }
        Self { terms: self.terms.iter().map(|(m, c)| (*m, c.scale(q))).collect() }
    }

    pub fn mul_gaussian(&self, q: &GaussianRational) -> Self {
        if q.is_zero() {
            return Self::default();
        }
        Self { terms: self.terms.iter().map(|(m, c)| (*m, c.mul_ref(q))).collect() }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.terms.len() == 1 && other.terms.len() == 1 && self.terms[0].0 == 1 {
            return other.mul_gaussian(&self.terms[0].1);
        }
        if other.terms.len() == 1 && other.terms[0].0 == 1 {
            return self.mul_gaussian(&other.terms[0].1);
        }
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m1, q1) in &self.terms {
            for (m2, q2) in &other.terms {
                // √m1·√m2 = g·√((m1/g)(m2/g)) with g = gcd; the cofactors are
                // coprime and squarefree
                let g = m1.gcd(m2);
                let m = (m1 / g).checked_mul(m2 / g).expect("radicand overflow");
                let q = q1.mul_ref(q2).scale(&Rational::from_integer(BigInt::from(g)));
                out.push((m, q));
            }
        }
        Self::normalized(out)
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((ma, qa)), Some((mb, qb))) => {
                    if ma == mb {
                        let s = qa + qb;
                        if !s.is_zero() {
                            out.push((*ma, s));
                        }
                        a.next();
                        b.next();
                    } else if ma < mb {
                        out.push((*ma, qa.clone()));
                        a.next();
                    } else {
                        out.push((*mb, qb.clone()));
                        b.next();
                    }
                }
                (Some(t), None) => {
                    out.push((*t).clone());
                    a.next();
                }
                (None, Some(t)) => {
                    out.push((*t).clone());
                    b.next();
                }
                (None, None) => break,
            }
        }
        Self { terms: out }
    }

    pub fn neg_ref(&self) -> Self {
        Self { terms: self.terms.iter().map(|(m, q)| (*m, -q.clone())).collect() }
    }

    /// Flips the sign of every term whose radicand is divisible by `p`
    /// (the Galois automorphism `√p ↦ −√p`).
    fn galois_flip(&self, p: u64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, q)| if m % p == 0 { (*m, -q.clone()) } else { (*m, q.clone()) })
                .collect(),
        }
    }

    /// Multiplicative inverse, computed by clearing one prime from the
    /// denominator at a time with its Galois conjugate.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let mut num = Self::from_int(1);
        let mut den = self.clone();
        while let Some(p) = den.terms.iter().map(|(m, _)| *m).filter(|m| *m > 1).map(smallest_prime_factor).min() {
            let c = den.galois_flip(p);
            num = num.mul_ref(&c);
            den = den.mul_ref(&c);
        }
        let g = den.as_gaussian()?.inv()?;
        Some(num.mul_gaussian(&g))
    }

    /// Sign of a real radical number, decided exactly by repeated squaring
    /// when floating point is inconclusive.
    pub fn real_sign(&self) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering;
        if !self.is_real() {
            return None;
        }
        if self.is_zero() {
            return Some(Ordering::Equal);
        }
        let v = self.to_complex().0;
        let scale: f64 = self.terms.iter().map(|(m, q)| (rational_to_f64(&q.re) * (*m as f64).sqrt()).abs()).sum();
        if v.abs() > 1e-9 * scale.max(1e-300) {
            return Some(if v > 0.0 { Ordering::Greater } else { Ordering::Less });
        }
        // split on the largest prime p: x = a + b·√p with a, b free of √p
        let p = self.terms.iter().map(|(m, _)| largest_prime_factor(*m)).max().unwrap_or(1);
        if p == 1 {
            return Some(self.terms[0].1.re.cmp(&Rational::zero()));
        }
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (m, q) in &self.terms {
            if m % p == 0 {
                b.push((m / p, q.clone()));
            } else {
                a.push((*m, q.clone()));
            }
        }
        let a = Self::normalized(a);
        let b = Self::normalized(b);
        let sa = a.real_sign()?;
        let sb = b.real_sign()?;
        if sb == Ordering::Equal {
            return Some(sa);
        }
        if sa == Ordering::Equal || sa == sb {
            return Some(sb);
        }
        // opposite signs: compare a² with p·b²
        let diff = a.mul_ref(&a).add_ref(&b.mul_ref(&b).scale(&Rational::from_integer(BigInt::from(p))).neg_ref());
        let sd = diff.real_sign()?;
        Some(match sd {
            Ordering::Equal => Ordering::Equal,
            Ordering::Greater => sa,
            Ordering::Less => sb,
        })
    }

    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (m, q) in &self.terms {
            let r = (*m as f64).sqrt();
            re += rational_to_f64(&q.re) * r;
            im += rational_to_f64(&q.im) * r;
        }
        (re, im)
    }

    /// Canonical atoms `a/b`, `a/b*i`, `a/b*sqrt(m)`, `a/b*i*sqrt(m)` with
    /// their signs, in radicand order.
    pub fn atoms(&self) -> Vec<(bool, String)> {
        let mut out = Vec::new();
        for (m, q) in &self.terms {
            let rad = if *m == 1 { String::new() } else { format!("sqrt({m})") };
            for (part, imag) in [(&q.re, false), (&q.im, true)] {
                if part.is_zero() {
                    continue;
                }
                let neg = part.is_negative();
                let mag = fmt_rational(&part.abs());
                let mut s = mag;
                if imag {
                    s.push_str("*i");
                }
                if !rad.is_empty() {
                    s.push('*');
                    s.push_str(&rad);
                }
                out.push((neg, s));
            }
        }
        out
    }
}

impl Zero for RadicalNumber {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for RadicalNumber {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl Add for RadicalNumber {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.add_ref(&o)
    }
}

impl Sub for RadicalNumber {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.add_ref(&o.neg_ref())
    }
}

impl Mul for RadicalNumber {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_ref(&o)
    }
}

impl Neg for RadicalNumber {
    type Output = Self;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}

impl fmt::Debug for RadicalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RadicalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atoms = self.atoms();
        if atoms.is_empty() {
            return write!(f, "0");
        }
        for (k, (neg, s)) in atoms.iter().enumerate() {
            match (k, neg) {
                (0, true) => write!(f, "-{s}")?,
                (0, false) => write!(f, "{s}")?,
                (_, true) => write!(f, " - {s}")?,
                (_, false) => write!(f, " + {s}")?,
            }
        }
        Ok(())
    }
}

fn smallest_prime_factor(m: u64) -> u64 {
    if m % 2 == 0 {
        return 2;
    }
    let mut d = 3;
    while d * d <= m {
        if m % d == 0 {
            return d;
        }
        d += 2;
    }
    m
}

fn largest_prime_factor(mut m: u64) -> u64 {
    let mut best = 1;
    while m > 1 {
        let p = smallest_prime_factor(m);
        best = best.max(p);
        while m % p == 0 {
            m /= p;
        }
    }
    best
}

/// `m = outer²·inner` with `inner` squarefree.
fn split_square(mut m: u64) -> (u64, u64) {
    let mut outer = 1u64;
    let mut inner = 1u64;
    let mut d = 2u64;
    while d * d <= m {
        let mut e = 0;
        while m % d == 0 {
            m /= d;
            e += 1;
        }
        outer *= d.pow(e / 2);
        if e % 2 == 1 {
            inner *= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    (outer, inner * m)
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Square-part extraction for big radicands. Trial division up to 10⁶;
/// a leftover cofactor below 10¹⁸ is prime, a product of two primes or a
/// prime square, which a perfect-square test separates.
fn split_square_big(n: &BigInt) -> Result<(BigInt, u64), AlgebraError> {
    let mut m = n.clone();
    let mut outer = BigInt::one();
    let mut inner = 1u64;
    let mut d = 2u64;
    while d <= TRIAL_LIMIT && BigInt::from(d) * BigInt::from(d) <= m {
        let bd = BigInt::from(d);
        let mut e = 0;
        while (&m % &bd).is_zero() {
            m /= &bd;
            e += 1;
        }
        if e > 0 {
            outer *= bd.pow(e / 2);
            if e % 2 == 1 {
                inner = inner.checked_mul(d).ok_or(AlgebraError::RadicandTooLarge)?;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m.is_one() {
        return Ok((outer, inner));
    }
    let r = m.sqrt();
    if &r * &r == m {
        return Ok((outer * r, inner));
    }
    if m > BigInt::from(10u64.pow(18)) && BigInt::from(TRIAL_LIMIT) * BigInt::from(TRIAL_LIMIT) < m {
        return Err(AlgebraError::RadicandTooLarge);
    }
    let rest = m.to_u64().ok_or(AlgebraError::RadicandTooLarge)?;
    Ok((outer, inner.checked_mul(rest).ok_or(AlgebraError::RadicandTooLarge)?))
}
