use num_complex::Complex64;
use num_traits::{One, Zero};

use super::sphere_map::{MapSource, SphereMap};
use crate::algebra::{GaussianRational, HermitianPoly, RadicalNumber, Rational, RationalFunction};
use crate::error::{Error, Result};

/// `x ↦ U·φ_a(x)` with the Möbius involution
///
/// ```text
/// φ_a(x) = (a − s_a x + (s_a − 1)(⟨x,a⟩/|a|²) a) / (1 − ⟨x,a⟩),   s_a = √(1 − |a|²)
/// ```
///
/// and `⟨x,a⟩ = Σ x_j ā_j`. The center `a = 0` gives the identity
/// (times `U`), not `x ↦ −x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallAutomorphism {
    center: Vec<GaussianRational>,
    s_a: RadicalNumber,
    unitary: Option<Vec<Vec<RadicalNumber>>>,
}

impl BallAutomorphism {
    pub fn new(center: Vec<GaussianRational>) -> Result<Self> {
        let norm: Rational = center.iter().map(GaussianRational::norm_sq).sum();
        let one = Rational::one();
        if norm >= one {
            return Err(Error::CenterOutsideBall);
        }
        let s_a = RadicalNumber::sqrt_rational(&(one - norm))?;
        Ok(Self { center, s_a, unitary: None })
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(vec![GaussianRational::zero(); dim]).expect("origin is inside")
    }

    /// Composes with a unitary matrix on the left; `U U* = I` is checked exactly.
    pub fn with_unitary(mut self, u: Vec<Vec<RadicalNumber>>) -> Result<Self> {
        let d = self.dim();
        if u.len() != d || u.iter().any(|r| r.len() != d) {
            return Err(Error::WrongDimension { expected: d, got: u.len() });
        }
        for i in 0..d {
            for j in 0..d {
                let s = (0..d).fold(RadicalNumber::zero(), |acc, k| acc.add_ref(&u[i][k].mul_ref(&u[j][k].conj())));
                let e = if i == j { RadicalNumber::one() } else { RadicalNumber::zero() };
                if s != e {
                    return Err(Error::InvalidParameter("matrix is not unitary".into()));
                }
            }
        }
        self.unitary = Some(u);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[GaussianRational] {
        &self.center
    }

    pub fn s_a(&self) -> &RadicalNumber {
        &self.s_a
    }

    pub fn is_mobius_identity(&self) -> bool {
        self.center.iter().all(Zero::is_zero)
    }

    fn norm_sq(&self) -> Rational {
        self.center.iter().map(GaussianRational::norm_sq).sum()
    }

    /// Applies the automorphism to `x = P / D` (numerators over a common
    /// denominator), returning numerators and the new common denominator.
    fn apply_parts(&self, p: &[HermitianPoly], d: &HermitianPoly) -> (Vec<HermitianPoly>, HermitianPoly) {
        let nvars = d.nvars();
        let (mut nums, den) = if self.is_mobius_identity() {
            (p.to_vec(), d.clone())
        } else {
            let a: Vec<RadicalNumber> = self.center.iter().map(|c| RadicalNumber::from_gaussian(c.clone())).collect();
            let pa = p.iter().zip(&a).fold(HermitianPoly::zero(nvars), |acc, (x, aj)| &acc + &x.scale(&aj.conj()));
            let den = d - &pa;
            // (s_a − 1)/|a|²
            let c = (self.s_a.clone() - RadicalNumber::one()).scale(&self.norm_sq().recip());
            let nums = p
                .iter()
                .zip(&a)
                .map(|(x, ab)| {
                    let t1 = d.scale(ab);
                    let t2 = x.scale(&self.s_a);
                    let t3 = pa.scale(&c.mul_ref(ab));
                    &(&t1 - &t2) + &t3
                })
                .collect();
            (nums, den)
        };
        if let Some(u) = &self.unitary {
            nums = u
                .iter()
                .map(|row| row.iter().zip(&nums).fold(HermitianPoly::zero(nvars), |acc, (c, x)| &acc + &x.scale(c)))
                .collect();
        }
        (nums, den)
    }

    /// `φ(x)` for rational-function inputs sharing the denominator `d`.
    pub fn apply(&self, p: &[HermitianPoly], d: &HermitianPoly) -> Vec<RationalFunction> {
        let (nums, den) = self.apply_parts(p, d);
        nums.into_iter().map(|n| RationalFunction::new(n, den.clone()).expect("nonzero denominator")).collect()
    }

    /// `(1 − |a|²) / |1 − ⟨z,a⟩|²` in `dim` variables: `e^φ` for the
    /// conformal factor of the pullback.
    pub fn conformal_factor(&self) -> RationalFunction {
        let m = self.dim();
        let one = HermitianPoly::one(m);
        let za = (0..m).fold(HermitianPoly::zero(m), |acc, j| {
            &acc + &HermitianPoly::var(m, j).scale(&RadicalNumber::from_gaussian(self.center[j].conj()))
        });
        let d = &one - &za;
        RationalFunction::new(HermitianPoly::from_rational(m, Rational::one() - self.norm_sq()), &d * &d.conj())
            .expect("nonzero denominator")
    }

    /// Floating-point evaluation.
    pub fn eval(&self, x: &[Complex64]) -> Vec<Complex64> {
        let a: Vec<Complex64> = self
            .center
            .iter()
            .map(|c| Complex64::new(crate::algebra::rational_to_f64(&c.re), crate::algebra::rational_to_f64(&c.im)))
            .collect();
        let mut y: Vec<Complex64> = if self.is_mobius_identity() {
            x.to_vec()
        } else {
            let (sr, _) = self.s_a.to_complex();
            let na: f64 = a.iter().map(Complex64::norm_sqr).sum();
            let xa: Complex64 = x.iter().zip(&a).map(|(xi, ai)| xi * ai.conj()).sum();
            let den = Complex64::new(1.0, 0.0) - xa;
            x.iter().zip(&a).map(|(xi, ai)| (ai - sr * xi + (sr - 1.0) * xa / na * ai) / den).collect()
        };
        if let Some(u) = &self.unitary {
            y = u
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&y)
                        .map(|(c, v)| {
                            let (re, im) = c.to_complex();
                            Complex64::new(re, im) * v
                        })
                        .sum()
                })
                .collect();
        }
        y
    }
}

/// `φ ∘ F` for a target automorphism `φ` of the ball in `C^{N+1}`.
pub fn compose_target_automorphism(f: &SphereMap, phi: &BallAutomorphism) -> Result<SphereMap> {
    if phi.dim() != f.components.len() {
        return Err(Error::WrongDimension { expected: f.components.len(), got: phi.dim() });
    }
    let (p, d) = f.common_denominator();
    let comps = phi.apply(&p, &d);
    let mut out = SphereMap::new_unchecked(format!("phi∘{}", f.name), f.source_n, comps, f.source.clone())?;
    out.params = f.params.clone();
    if !out.is_sphere_map() {
        return Err(Error::NotASphereMap {
            remainder: out.sphere_remainder().map(|r| r.to_string()).unwrap_or_default(),
        });
    }
    Ok(out)
}

/// Substitutes `z_j ↦ g_j / d` (holomorphic images over one denominator)
/// into `p`; conjugate variables receive the conjugate images.
fn substitute(p: &HermitianPoly, g: &[HermitianPoly], d: &HermitianPoly) -> RationalFunction {
    let m = d.nvars();
    let k = p.terms().map(|(mm, _)| mm.holo_degree()).max().unwrap_or(0);
    let kb = p.terms().map(|(mm, _)| mm.anti_degree()).max().unwrap_or(0);
    let gb: Vec<HermitianPoly> = g.iter().map(HermitianPoly::conj).collect();
    let db = d.conj();
    let mut num = HermitianPoly::zero(m);
    for (mono, c) in p.terms() {
        let mut t = HermitianPoly::constant(m, c.clone());
        for (j, gj) in g.iter().enumerate() {
            t = &t * &gj.pow(mono.holo_exp(j) as u32);
            t = &t * &gb[j].pow(mono.anti_exp(j) as u32);
        }
        t = &t * &d.pow(k - mono.holo_degree());
        t = &t * &db.pow(kb - mono.anti_degree());
        num = &num + &t;
    }
    RationalFunction::new(num, &d.pow(k) * &db.pow(kb)).expect("nonzero denominator")
}

/// `F ∘ γ` for a source automorphism `γ` of the ball in `C^{n+1}`.
pub fn precompose_source_automorphism(f: &SphereMap, gamma: &BallAutomorphism) -> Result<SphereMap> {
    if !matches!(f.source, MapSource::Sphere) {
        return Err(Error::NonSphereSource);
    }
    let m = f.nvars();
    if gamma.dim() != m {
        return Err(Error::WrongDimension { expected: m, got: gamma.dim() });
    }
    let vars: Vec<HermitianPoly> = (0..m).map(|j| HermitianPoly::var(m, j)).collect();
    let (g, d) = gamma.apply_parts(&vars, &HermitianPoly::one(m));
    let comps = f
        .components
        .iter()
        .map(|c| {
            let num = substitute(c.num(), &g, &d);
            if c.is_polynomial() {
                Ok(num)
            } else {
                num.div_ref(&substitute(c.den(), &g, &d)).map_err(Error::from)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = SphereMap::new_unchecked(format!("{}∘gamma", f.name), f.source_n, comps, MapSource::Sphere)?;
    out.params = f.params.clone();
    if !out.is_sphere_map() {
        return Err(Error::NotASphereMap {
            remainder: out.sphere_remainder().map(|r| r.to_string()).unwrap_or_default(),
        });
    }
    Ok(out)
}
