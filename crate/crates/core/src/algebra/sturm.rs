//! Dense univariate polynomials over the rationals and Sturm-sequence root
//! isolation on `[0, 1]`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::rational::{fmt_rational, rat_int, Rational};

/// Coefficients in ascending degree; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| rat_int(x)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(vec![Rational::one()])
    }

    /// The monomial `s`.
    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use super::rational::rational_to_f64;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + rational_to_f64(c))
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let zero = Rational::zero();
        Self::new((0..n).map(|i| self.coeffs.get(i).unwrap_or(&zero) + o.coeffs.get(i).unwrap_or(&zero)).collect())
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * q).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * rat_int(i as i64)).collect())
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dl = d.lc().expect("division by zero polynomial").clone();
        let dd = d.degree().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &dl;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        (Self::new(q), Self::new(r))
    }

    pub fn monic(&self) -> Self {
        match self.lc() {
            Some(l) => self.scale(&l.recip()),
            None => Self::zero(),
        }
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`: same distinct roots, all simple.
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            self.clone()
        } else {
            self.div_rem(&g).0
        }
    }

    /// Sturm chain `p0 = p, p1 = p', p_{k+1} = −rem(p_{k−1}, p_k)`.
    pub fn sturm_chain(&self) -> Vec<Self> {
        let mut chain = vec![self.clone(), self.derivative()];
        while !chain.last().unwrap().is_zero() {
            let n = chain.len();
            let r = chain[n - 2].div_rem(&chain[n - 1]).1.neg();
            chain.push(r);
        }
        chain.pop();
        chain
    }
}

fn sign_changes(chain: &[UniPoly], x: &Rational) -> usize {
    let signs: Vec<i8> = chain
        .iter()
        .map(|p| {
            let v = p.eval(x);
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// One isolated root: `lo < root < hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedRoot {
    pub lo: Rational,
    pub hi: Rational,
    /// The root is simple in the original (not squarefree-reduced) polynomial.
    pub simple: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SturmResult {
    /// Roots strictly inside `(0, 1)`, left to right.
    pub interior: Vec<IsolatedRoot>,
    pub root_at_zero: bool,
    pub root_at_one: bool,
}

impl SturmResult {
    pub fn is_empty(&self) -> bool {
        self.interior.is_empty() && !self.root_at_zero && !self.root_at_one
    }

    pub fn count(&self) -> usize {
        self.interior.len() + self.root_at_zero as usize + self.root_at_one as usize
    }
}

/// Distinct real roots of `p` in the closed interval `[0, 1]`.
pub fn sturm_roots_unit_interval(p: &UniPoly) -> SturmResult {
    assert!(!p.is_zero(), "zero polynomial has every point as a root");
    let zero = Rational::zero();
    let one = Rational::one();
    let root_at_zero = p.eval(&zero).is_zero();
    let root_at_one = p.eval(&one).is_zero();
    let sf = p.squarefree_part();
    let repeated = p.gcd(&p.derivative());
    let chain = sf.sturm_chain();
    let count = |a: &Rational, b: &Rational| sign_changes(&chain, a) - sign_changes(&chain, b);

    // roots in (0, 1): V(0) − V(1) counts (0, 1]; drop a root at 1
    let mut interior = Vec::new();
    let mut stack = vec![(zero.clone(), one.clone())];
    while let Some((a, b)) = stack.pop() {
        let mut n = count(&a, &b);
        if b == one && root_at_one {
            n -= 1;
        }
        if n == 0 {
            continue;
        }
        let mid = (&a + &b) / rat_int(2);
        if n == 1 && !sf.eval(&b).is_zero() {
            let simple = repeated.degree() == Some(0) || {
                let rc = repeated.sturm_chain();
                let m = sign_changes(&rc, &a) - sign_changes(&rc, &b);
                m == 0 && !repeated.eval(&b).is_zero()
            };
            interior.push(IsolatedRoot { lo: a, hi: b, simple });
            continue;
        }
        if sf.eval(&mid).is_zero() {
            // the midpoint is an exact root: isolate it in a tiny interval
            let eps = (&b - &a) / rat_int(1 << 20);
            let lo = &mid - &eps;
            let hi = &mid + &eps;
            stack.push((a, lo.clone()));
            stack.push((hi.clone(), b));
            let simple = repeated.eval(&mid).is_zero().then_some(false).unwrap_or(true);
            interior.push(IsolatedRoot { lo, hi, simple });
        } else {
            stack.push((a, mid.clone()));
            stack.push((mid, b));
        }
    }
    interior.sort_by(|x, y| x.lo.cmp(&y.lo));
    SturmResult { interior, root_at_zero, root_at_one }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_in("s"))
    }
}

impl UniPoly {
    /// Descending-degree canonical form, e.g. `2*s^2 - s + 1/3`.
    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            let body = match (i, mag.is_one()) {
                (0, _) => fmt_rational(&mag),
                (1, true) => var.to_string(),
                (1, false) => format!("{}*{var}", fmt_rational(&mag)),
                (_, true) => format!("{var}^{i}"),
                (_, false) => format!("{}*{var}^{i}", fmt_rational(&mag)),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}
