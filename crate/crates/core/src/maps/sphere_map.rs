use std::collections::BTreeMap;

use crate::algebra::{reduce_mod_sphere, HermitianPoly, RadicalNumber, RationalFunction};
use crate::error::{Error, Result};
use crate::geometry::{DefiningFunction, LogArg};
use crate::numeric::{CompiledPoly, Sampler, DEFAULT_SEED};

/// Where the source hypersurface comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapSource {
    /// The unit sphere `Σ|z_j|² = 1`.
    Sphere,
    /// Any real hypersurface `ρ = 0`.
    Hypersurface(DefiningFunction),
}

/// A map `F = (F_0, …, F_N)` from a source hypersurface in `C^{n+1}` into
/// the unit sphere of `C^{N+1}`.
#[derive(Clone, Debug)]
pub struct SphereMap {
    pub name: String,
    pub source_n: usize,
    pub target_n: usize,
    pub components: Vec<RationalFunction>,
    pub params: BTreeMap<String, String>,
    pub source: MapSource,
}

/// `Q_F` with `‖F‖² − 1 = Q_F·ρ`, held as `num / den`.
#[derive(Clone, Debug)]
pub struct Quotient {
    /// `(Σ|P_A|² − |D|²) / ρ`, an exact polynomial quotient.
    pub num: HermitianPoly,
    /// `D·conj(D)` for the common denominator `D` of the components.
    pub den: HermitianPoly,
    pub log_arg: LogArg,
}

impl Quotient {
    pub fn as_ratfn(&self) -> RationalFunction {
        RationalFunction::new(self.num.clone(), self.den.clone()).expect("nonzero denominator")
    }
}

impl SphereMap {
    /// Builds a map from the standard sphere and checks it is a sphere map.
    pub fn new(name: impl Into<String>, source_n: usize, components: Vec<RationalFunction>) -> Result<Self> {
        let map = Self::new_unchecked(name, source_n, components, MapSource::Sphere)?;
        map.ensure_sphere_map()?;
        Ok(map)
    }

    /// Builds a map from the hypersurface `ρ = 0`, checking divisibility by `ρ`.
    pub fn from_hypersurface(
        name: impl Into<String>,
        rho: DefiningFunction,
        components: Vec<RationalFunction>,
    ) -> Result<Self> {
        let n = rho.cr_dim();
        let map = Self::new_unchecked(name, n, components, MapSource::Hypersurface(rho))?;
        map.ensure_sphere_map()?;
        Ok(map)
    }

    /// Builds without the sphere-map check (dimensions are still checked).
    pub fn new_unchecked(
        name: impl Into<String>,
        source_n: usize,
        components: Vec<RationalFunction>,
        source: MapSource,
    ) -> Result<Self> {
        let nvars = source_n + 1;
        if components.is_empty() {
            return Err(Error::InvalidParameter("a map needs at least one component".into()));
        }
        if let Some(c) = components.iter().find(|c| c.nvars() != nvars) {
            return Err(Error::WrongDimension { expected: nvars, got: c.nvars() });
        }
        if let MapSource::Hypersurface(rho) = &source {
            if rho.nvars() != nvars {
                return Err(Error::WrongDimension { expected: nvars, got: rho.nvars() });
            }
        }
        let target_n = components.len() - 1;
        Ok(Self { name: name.into(), source_n, target_n, components, params: BTreeMap::new(), source })
    }

    pub fn with_params(mut self, params: BTreeMap<String, String>) -> Self {
        self.params = params;
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn nvars(&self) -> usize {
        self.source_n + 1
    }

    pub fn defining_function(&self) -> DefiningFunction {
        match &self.source {
            MapSource::Sphere => DefiningFunction::sphere(self.nvars()),
            MapSource::Hypersurface(rho) => rho.clone(),
        }
    }

    pub fn has_sphere_source(&self) -> bool {
        matches!(self.source, MapSource::Sphere)
    }

    pub fn is_polynomial(&self) -> bool {
        self.components.iter().all(RationalFunction::is_polynomial)
    }

    /// `(z, w, 0, …)`-style padding with zero components.
    pub fn padded(&self, extra: usize) -> Self {
        let mut m = self.clone();
        m.components.extend((0..extra).map(|_| RationalFunction::zero(self.nvars())));
        m.target_n += extra;
        m
    }

    /// Numerators over one common denominator `D`: `F_A = P_A / D`.
    ///
    /// Uses the denominator of largest degree when it is divisible by all
    /// the others (the usual case after composing with automorphisms),
    /// otherwise the product of the distinct denominators.
    pub fn common_denominator(&self) -> (Vec<HermitianPoly>, HermitianPoly) {
        let dens: Vec<&HermitianPoly> = self.components.iter().map(RationalFunction::den).collect();
        let biggest = dens.iter().max_by_key(|d| (d.degree(), d.len())).copied().expect("nonempty");
        let d = if dens.iter().all(|x| *x == biggest || x.is_one() || biggest.exact_divide(x).is_ok()) {
            biggest.clone()
        } else {
            let mut distinct: Vec<&HermitianPoly> = Vec::new();
            for x in &dens {
                if !x.is_one() && !distinct.contains(x) {
                    distinct.push(x);
                }
            }
            distinct.iter().fold(HermitianPoly::one(self.nvars()), |acc, x| &acc * x)
        };
        let nums = self
            .components
            .iter()
            .map(|c| {
                let k = d.exact_divide(c.den()).expect("common denominator is a multiple");
                c.num() * &k
            })
            .collect();
        (nums, d)
    }

    /// `‖F‖² = Σ|P_A|² / |D|²`.
    pub fn hermitian_norm_sq(&self) -> RationalFunction {
        let (nums, d) = self.common_denominator();
        let sum = nums.iter().fold(HermitianPoly::zero(self.nvars()), |acc, p| &acc + &(p * &p.conj()));
        RationalFunction::new(sum, &d * &d.conj()).expect("nonzero denominator")
    }

    /// The cleared numerator `Σ|P_A|² − |D|²` of `‖F‖² − 1`.
    pub fn cleared_defect(&self) -> HermitianPoly {
        let (nums, d) = self.common_denominator();
        let sum = nums.iter().fold(HermitianPoly::zero(self.nvars()), |acc, p| &acc + &(p * &p.conj()));
        &sum - &(&d * &d.conj())
    }

    /// `None` when `ρ` divides the cleared defect; otherwise a nonzero
    /// witness (the sphere normal form, or the division remainder).
    pub fn sphere_remainder(&self) -> Option<HermitianPoly> {
        let defect = self.cleared_defect();
        let rho = self.defining_function();
        match defect.exact_divide(rho.rho()) {
            Ok(_) => None,
            Err(crate::error::AlgebraError::NotDivisible { remainder }) => {
                Some(if rho.is_standard_sphere() { reduce_mod_sphere(&defect) } else { *remainder })
            }
            Err(_) => Some(defect),
        }
    }

    pub fn is_sphere_map(&self) -> bool {
        self.sphere_remainder().is_none()
    }

    fn ensure_sphere_map(&self) -> Result<()> {
        match self.sphere_remainder() {
            None => Ok(()),
            Some(r) => Err(Error::NotASphereMap { remainder: r.to_string() }),
        }
    }

    /// The exact quotient `Q_F`; for sphere sources it is also checked to be
    /// positive at 256 seeded sample points.
    pub fn quotient(&self) -> Result<Quotient> {
        let defect = self.cleared_defect();
        let rho = self.defining_function();
        let num = defect.exact_divide(rho.rho()).map_err(|_| Error::NotASphereMap {
            remainder: self.sphere_remainder().map(|r| r.to_string()).unwrap_or_default(),
        })?;
        let (_, d) = self.common_denominator();
        let db = d.conj();
        let den = &d * &db;
        if self.has_sphere_source() {
            let cn = CompiledPoly::new(&num);
            let cd = CompiledPoly::new(&den);
            for p in Sampler::new(DEFAULT_SEED, self.source_n).sample(256) {
                let v = cn.eval(&p.coords) / cd.eval(&p.coords);
                if !(v.re > 0.0) {
                    return Err(Error::SignAnomaly { value: v.re });
                }
            }
        }
        let log_arg = if d.is_one() {
            LogArg::from_poly(num.clone())
        } else {
            LogArg::new(vec![(1, num.clone()), (-1, d), (-1, db)])
        };
        Ok(Quotient { num, den, log_arg })
    }

    /// For a monomial map, each component's exponent vector and coefficient.
    pub fn monomial_data(&self) -> Option<Vec<(Vec<u16>, RadicalNumber)>> {
        let mut out = Vec::new();
        for c in &self.components {
            if !c.is_polynomial() {
                return None;
            }
            if c.is_zero() {
                continue;
            }
            if c.num().len() != 1 {
                return None;
            }
            let (m, coef) = c.num().terms().next()?;
            if m.anti_degree() != 0 {
                return None;
            }
            out.push((m.holo().to_vec(), coef.clone()));
        }
        Some(out)
    }

    pub fn is_monomial(&self) -> bool {
        self.has_sphere_source() && self.monomial_data().is_some()
    }

    /// Dimension of the source as a string like `S^3` or `{ρ = 0} ⊂ C^3`.
    pub fn source_label(&self) -> String {
        match &self.source {
            MapSource::Sphere => format!("S^{}", 2 * self.source_n + 1),
            MapSource::Hypersurface(rho) => format!("{{{} = 0}}", rho.rho()),
        }
    }
}

/// `‖F‖² − 1` divisible by the source defining function.
pub fn is_sphere_map(f: &SphereMap) -> bool {
    f.is_sphere_map()
}
