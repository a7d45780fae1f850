//! Ahlfors invariants of sphere maps: mixed tensor, trace, tracefree part,
//! `A₁`, umbilical loci, equivalence tests and monomial obstructions.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::algebra::{
    rat_int, ratfn_eq_on_sphere, reduce_mod_sphere, reduce_ratfn, sturm_roots_unit_interval, DerivKind,
    GaussianRational, HermitianPoly, IsolatedRoot, Monomial, RadicalNumber, Rational, RationalFunction, UniPoly,
};
use crate::error::{Error, Result};
use crate::geometry::{
    a1_coefficient, d_log_operator, d_log_trace, levi_data, transverse_curvature, DefiningFunction, LeviData,
};
use crate::maps::{BallAutomorphism, Quotient, SphereMap};
use crate::numeric::{CompiledRatfn, SpherePoint};

/// Mixed Ahlfors tensor of a sphere-to-sphere map in the frame `Z_α`.
#[derive(Clone, Debug)]
pub struct AhlforsData {
    pub mixed: Vec<Vec<RationalFunction>>,
    /// `A_{αβ}`; identically zero between spheres (both torsions vanish).
    pub holomorphic: Vec<Vec<RationalFunction>>,
    pub trace: RationalFunction,
    pub tracefree: Vec<Vec<RationalFunction>>,
    /// `L L L̄ log Q` against `θ¹ = w dz − z dw`; only for the 3-sphere.
    pub a1: Option<RationalFunction>,
    pub levi: LeviData,
    pub quotient: Quotient,
}

impl AhlforsData {
    pub fn n(&self) -> usize {
        self.mixed.len()
    }

    /// The mixed tensor in the frame `Z̃_α = ρ_w Z_α` (for the sphere
    /// `w̄∂_α − z̄_α∂_w`): every component picks up `ρ_w ρ_w̄`.
    pub fn mixed_in_tilde_frame(&self) -> Vec<Vec<RationalFunction>> {
        self.mixed.iter().map(|row| row.iter().map(|a| a.mul_poly(&self.levi.chart_den)).collect()).collect()
    }
}

/// `A_{αβ̄}(F) = D^ρ_{αβ̄} log Q_F` for a map from the standard sphere.
pub fn ahlfors_mixed(f: &SphereMap) -> Result<AhlforsData> {
    if !f.has_sphere_source() {
        return Err(Error::NonSphereSource);
    }
    let rho = f.defining_function();
    let quotient = f.quotient()?;
    let levi = levi_data(&rho)?;
    let mixed = d_log_operator(&rho, &quotient.log_arg)?;
    let trace = d_log_trace(&rho, &levi, &quotient.log_arg)?;
    let tracefree = levi.tracefree(&mixed, &trace);
    let n = f.source_n;
    let a1 = if n == 1 { Some(a1_coefficient(&quotient.log_arg)?) } else { None };
    let holomorphic = vec![vec![RationalFunction::zero(f.nvars()); n]; n];
    Ok(AhlforsData { mixed, holomorphic, trace, tracefree, a1, levi, quotient })
}

/// Tracefree part of `D^ρ log Q` for a map from any Levi-nondegenerate
/// hypersurface; the Fefferman-determinant terms only add multiples of `h`.
pub fn tracefree_general(f: &SphereMap) -> Result<Vec<Vec<RationalFunction>>> {
    let rho = f.defining_function();
    let quotient = f.quotient()?;
    let levi = levi_data(&rho)?;
    let mixed = d_log_operator(&rho, &quotient.log_arg)?;
    let trace = d_log_trace(&rho, &levi, &quotient.log_arg)?;
    Ok(levi.tracefree(&mixed, &trace))
}

/// `A₁(F)` coefficient, reduced modulo the sphere for presentation.
pub fn a1_invariant(f: &SphereMap) -> Result<RationalFunction> {
    if !f.has_sphere_source() {
        return Err(Error::NonSphereSource);
    }
    if f.nvars() != 2 {
        return Err(Error::WrongDimension { expected: 2, got: f.nvars() });
    }
    let q = f.quotient()?;
    Ok(reduce_ratfn(&a1_coefficient(&q.log_arg)?))
}

/// `r[‖F‖² − 1] − 1`: the squared mean curvature of the image, pulled back.
pub fn mean_curvature_sq(f: &SphereMap) -> Result<RationalFunction> {
    if !f.is_polynomial() {
        return Err(Error::RequiresPolynomialMap);
    }
    let pull = DefiningFunction::new(&f.hermitian_norm_sq().num().clone() - &HermitianPoly::one(f.nvars()))?;
    let r = transverse_curvature(&pull)?;
    Ok(r.sub_ref(&RationalFunction::one(f.nvars())))
}

/// `|II|² = 2(n+1)·trace / Q_F`.
pub fn ii_norm_sq(f: &SphereMap) -> Result<RationalFunction> {
    let data = ahlfors_mixed(f)?;
    ii_norm_sq_from(f, &data)
}

pub fn ii_norm_sq_from(f: &SphereMap, data: &AhlforsData) -> Result<RationalFunction> {
    let k = RadicalNumber::from_int(2 * (f.source_n as i64 + 1));
    Ok(data.trace.scale(&k).div_ref(&data.quotient.as_ratfn())?)
}

// ---------------------------------------------------------------------------
// Functions of s = |z|² on the 3-sphere

/// A polynomial in `z, w` and conjugates, reduced mod the sphere, as a
/// rational polynomial in `s = z z̄`; `None` when it depends on anything else.
pub fn poly_in_s(p: &HermitianPoly) -> Option<UniPoly> {
    if p.nvars() != 2 {
        return None;
    }
    let r = reduce_mod_sphere(p);
    let mut coeffs: Vec<Rational> = Vec::new();
    for (m, c) in r.terms() {
        if m.holo_exp(1) != 0 || m.anti_exp(1) != 0 || m.holo_exp(0) != m.anti_exp(0) {
            return None;
        }
        let k = m.holo_exp(0) as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, Rational::zero());
        }
        coeffs[k] = c.as_rational()?;
    }
    Some(UniPoly::new(coeffs))
}

/// `num(s) / den(s)` with the common factor cancelled and `den` monic.
pub fn ratfn_in_s(f: &RationalFunction) -> Option<(UniPoly, UniPoly)> {
    let num = poly_in_s(f.num())?;
    let den = poly_in_s(f.den())?;
    if den.is_zero() {
        return None;
    }
    if num.is_zero() {
        return Some((num, UniPoly::one()));
    }
    let g = num.gcd(&den);
    let (n, _) = num.div_rem(&g);
    let (d, _) = den.div_rem(&g);
    let lc = d.lc().expect("nonzero").clone();
    let inv = Rational::one() / lc;
    Some((n.scale(&inv), d.scale(&inv)))
}

/// The trace as a function of `s`, for maps whose trace is torus-invariant.
pub fn trace_in_s(data: &AhlforsData) -> Option<(UniPoly, UniPoly)> {
    ratfn_in_s(&data.trace)
}

// ---------------------------------------------------------------------------
// Umbilical locus

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UmbilicKind {
    Empty,
    WholeSphere,
    /// `S₁ = {(e^{it}, 0)}`
    CircleS1,
    /// `S₂ = {(0, e^{it})}`
    CircleS2,
    UnionS1S2,
    /// Tori `|z|² = s₀` for interior roots (possibly together with circles).
    Torus,
    /// A non-monomial map: isolated witness points from a scan.
    NotMonomialPointSet,
}

impl UmbilicKind {
    /// Stable machine-readable label.
    pub fn label(&self) -> &'static str {
        match self {
            UmbilicKind::Empty => "empty",
            UmbilicKind::WholeSphere => "whole-sphere",
            UmbilicKind::CircleS1 => "S1",
            UmbilicKind::CircleS2 => "S2",
            UmbilicKind::UnionS1S2 => "S1+S2",
            UmbilicKind::Torus => "torus",
            UmbilicKind::NotMonomialPointSet => "points",
        }
    }

    /// Typeset form used in tables.
    pub fn latex(&self) -> &'static str {
        match self {
            UmbilicKind::Empty => r"$\emptyset$",
            UmbilicKind::WholeSphere => r"$\mathbb{S}^3$",
            UmbilicKind::CircleS1 => r"$S_1$",
            UmbilicKind::CircleS2 => r"$S_2$",
            UmbilicKind::UnionS1S2 => r"$S_1 \cup S_2$",
            UmbilicKind::Torus => r"torus",
            UmbilicKind::NotMonomialPointSet => r"points",
        }
    }
}

impl fmt::Display for UmbilicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UmbilicKind::Empty => "∅",
            UmbilicKind::WholeSphere => "S³",
            UmbilicKind::CircleS1 => "S₁",
            UmbilicKind::CircleS2 => "S₂",
            UmbilicKind::UnionS1S2 => "S₁ ∪ S₂",
            UmbilicKind::Torus => "torus",
            UmbilicKind::NotMonomialPointSet => "point set",
        })
    }
}

#[derive(Clone, Debug)]
pub struct UmbilicDescription {
    pub kind: UmbilicKind,
    /// Exact classification (Sturm) rather than a numerical scan.
    pub exact: bool,
    /// Trace numerator in `s` after cancelling common factors (monomial case).
    pub trace_numerator: Option<UniPoly>,
    /// Isolating intervals of interior roots in `s`.
    pub interior_roots: Vec<IsolatedRoot>,
    pub root_at_zero: bool,
    pub root_at_one: bool,
    /// Exactly confirmed zeros of the trace (non-monomial case).
    pub witnesses: Vec<Vec<GaussianRational>>,
    /// Grid points where the trace is numerically zero (non-monomial case).
    pub near_zeros: Vec<SpherePoint>,
    /// Minimum of the trace over the scan grid (non-monomial case).
    pub scan_min: Option<f64>,
}

impl UmbilicDescription {
    fn exact(kind: UmbilicKind) -> Self {
        Self {
            kind,
            exact: true,
            trace_numerator: None,
            interior_roots: Vec::new(),
            root_at_zero: false,
            root_at_one: false,
            witnesses: Vec::new(),
            near_zeros: Vec::new(),
            scan_min: None,
        }
    }

    /// Human-readable root descriptions, e.g. `"s = 0"`, `"s in (1/4, 1/2)"`.
    pub fn root_strings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.root_at_zero {
            out.push("s = 0".to_string());
        }
        for r in &self.interior_roots {
            out.push(format!(
                "s in ({}, {})",
                crate::algebra::fmt_rational(&r.lo),
                crate::algebra::fmt_rational(&r.hi)
            ));
        }
        if self.root_at_one {
            out.push("s = 1".to_string());
        }
        for w in &self.witnesses {
            out.push(format!("({})", w.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")));
        }
        out
    }
}

/// s-values of the non-monomial scan.
pub const SCAN_S_STEPS: usize = 200;
/// Angle steps per torus direction of the non-monomial scan.
pub const SCAN_ANGLE_STEPS: usize = 24;
const SCAN_ZERO_TOL: f64 = 1e-8;

pub fn umbilic_locus(f: &SphereMap) -> Result<UmbilicDescription> {
    let data = ahlfors_mixed(f)?;
    umbilic_locus_from(f, &data)
}

pub fn umbilic_locus_from(f: &SphereMap, data: &AhlforsData) -> Result<UmbilicDescription> {
    if f.nvars() != 2 {
        return Err(Error::WrongDimension { expected: 2, got: f.nvars() });
    }
    if reduce_mod_sphere(data.trace.num()).is_zero() {
        return Ok(UmbilicDescription::exact(UmbilicKind::WholeSphere));
    }
    match trace_in_s(data) {
        Some((num, _)) => Ok(classify_s_roots(num)),
        None => Ok(scan_umbilic(&data.trace)),
    }
}

fn classify_s_roots(num: UniPoly) -> UmbilicDescription {
    let roots = sturm_roots_unit_interval(&num);
    let kind = match (roots.interior.is_empty(), roots.root_at_zero, roots.root_at_one) {
        (false, _, _) => UmbilicKind::Torus,
        (true, true, true) => UmbilicKind::UnionS1S2,
        (true, true, false) => UmbilicKind::CircleS2,
        (true, false, true) => UmbilicKind::CircleS1,
        (true, false, false) => UmbilicKind::Empty,
    };
    let mut d = UmbilicDescription::exact(kind);
    d.trace_numerator = Some(num);
    d.interior_roots = roots.interior;
    d.root_at_zero = roots.root_at_zero;
    d.root_at_one = roots.root_at_one;
    d
}

/// Gaussian-rational points of the 3-sphere tried as exact witnesses.
fn candidate_points() -> Vec<Vec<GaussianRational>> {
    let units =
        [GaussianRational::from_int(1), GaussianRational::from_int(-1), GaussianRational::i(), -GaussianRational::i()];
    let mut out = Vec::new();
    for u in &units {
        out.push(vec![GaussianRational::zero(), u.clone()]);
    }
    for u in &units {
        out.push(vec![u.clone(), GaussianRational::zero()]);
    }
    out
}

fn scan_umbilic(trace: &RationalFunction) -> UmbilicDescription {
    let compiled = CompiledRatfn::new(trace);
    let mut min = f64::INFINITY;
    let mut near: Vec<SpherePoint> = Vec::new();
    let tau = std::f64::consts::TAU;
    for i in 0..SCAN_S_STEPS {
        let s = i as f64 / (SCAN_S_STEPS - 1) as f64;
        let (rz, rw) = (s.sqrt(), (1.0 - s).max(0.0).sqrt());
        // on the boundary circles one angle is irrelevant
        let na = if i == 0 { 1 } else { SCAN_ANGLE_STEPS };
        let nb = if i == SCAN_S_STEPS - 1 { 1 } else { SCAN_ANGLE_STEPS };
        for a in 0..na {
            for b in 0..nb {
                let z = Complex64::from_polar(rz, tau * a as f64 / SCAN_ANGLE_STEPS as f64);
                let w = Complex64::from_polar(rw, tau * b as f64 / SCAN_ANGLE_STEPS as f64);
                let Ok(v) = compiled.eval(&[z, w]) else { continue };
                min = min.min(v.re);
                if v.norm() < SCAN_ZERO_TOL {
                    near.push(SpherePoint::new(vec![z, w]));
                }
            }
        }
    }
    let witnesses: Vec<Vec<GaussianRational>> = candidate_points()
        .into_iter()
        .filter(|p| !trace.den().eval_exact(p).is_zero() && trace.num().eval_exact(p).is_zero())
        .collect();
    let kind =
        if witnesses.is_empty() && near.is_empty() { UmbilicKind::Empty } else { UmbilicKind::NotMonomialPointSet };
    UmbilicDescription {
        kind,
        exact: false,
        trace_numerator: None,
        interior_roots: Vec::new(),
        root_at_zero: false,
        root_at_one: false,
        witnesses,
        near_zeros: near,
        scan_min: Some(min),
    }
}

// ---------------------------------------------------------------------------
// Equivalence

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Invariant {
    Trace,
    Tracefree,
    A1,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Invariant::Trace => "trace",
            Invariant::Tracefree => "tracefree",
            Invariant::A1 => "a1",
        })
    }
}

/// `Distinguished` proves the maps are not left equivalent; the converse
/// verdict proves nothing.
#[derive(Clone, Debug)]
pub enum EquivalenceVerdict {
    Distinguished { witness: Invariant, difference: RationalFunction },
    IndistinguishableByAhlfors,
}

impl EquivalenceVerdict {
    pub fn is_distinguished(&self) -> bool {
        matches!(self, EquivalenceVerdict::Distinguished { .. })
    }
}

impl fmt::Display for EquivalenceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivalenceVerdict::Distinguished { witness, .. } => write!(f, "Distinguished ({witness} differs)"),
            EquivalenceVerdict::IndistinguishableByAhlfors => f.write_str("IndistinguishableByAhlfors"),
        }
    }
}

pub fn equivalence_test(f: &SphereMap, g: &SphereMap) -> Result<EquivalenceVerdict> {
    if !f.has_sphere_source() || !g.has_sphere_source() {
        return Err(Error::SourceMismatch("both maps need the standard sphere as source".into()));
    }
    if f.source_n != g.source_n {
        return Err(Error::SourceMismatch(format!("source dimensions {} and {}", f.source_n, g.source_n)));
    }
    let (a, b) = (ahlfors_mixed(f)?, ahlfors_mixed(g)?);
    Ok(compare_data(&a, &b))
}

pub fn compare_data(a: &AhlforsData, b: &AhlforsData) -> EquivalenceVerdict {
    let differ = |x: &RationalFunction, y: &RationalFunction| {
        let d = x.sub_ref(y);
        (!reduce_mod_sphere(d.num()).is_zero()).then(|| reduce_ratfn(&d))
    };
    if let Some(d) = differ(&a.trace, &b.trace) {
        return EquivalenceVerdict::Distinguished { witness: Invariant::Trace, difference: d };
    }
    for (ra, rb) in a.tracefree.iter().zip(&b.tracefree) {
        for (x, y) in ra.iter().zip(rb) {
            if let Some(d) = differ(x, y) {
                return EquivalenceVerdict::Distinguished { witness: Invariant::Tracefree, difference: d };
            }
        }
    }
    if let (Some(x), Some(y)) = (&a.a1, &b.a1) {
        if let Some(d) = differ(x, y) {
            return EquivalenceVerdict::Distinguished { witness: Invariant::A1, difference: d };
        }
    }
    EquivalenceVerdict::IndistinguishableByAhlfors
}

/// Componentwise difference of the mixed tensors vanishes on the sphere.
pub fn mixed_agree(a: &AhlforsData, b: &AhlforsData) -> bool {
    a.mixed.iter().zip(&b.mixed).all(|(ra, rb)| ra.iter().zip(rb).all(|(x, y)| ratfn_eq_on_sphere(x, y)))
}

// ---------------------------------------------------------------------------
// Monomial obstructions

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonomialObstruction {
    /// The reduced trace depends only on the moduli `|z_j|`.
    pub moduli_only: bool,
    /// The tracefree part vanishes on the circle `|w| = 1`.
    pub circle_tracefree: bool,
    /// `A₁ = z̄ w̄ · (torus-invariant) / (torus-invariant)`; `None` unless `n = 1`.
    pub a1_shape: Option<bool>,
}

impl MonomialObstruction {
    /// Every necessary condition for a monomial map holds.
    pub fn passes(&self) -> bool {
        self.moduli_only && self.circle_tracefree && self.a1_shape.unwrap_or(true)
    }
}

fn balanced(p: &HermitianPoly) -> bool {
    p.terms().all(|(m, _)| m.is_balanced())
}

pub fn monomial_obstruction(f: &SphereMap) -> Result<MonomialObstruction> {
    let data = ahlfors_mixed(f)?;
    Ok(monomial_obstruction_from(&data))
}

pub fn monomial_obstruction_from(data: &AhlforsData) -> MonomialObstruction {
    let moduli_only = balanced(&reduce_mod_sphere(data.trace.num())) && balanced(&reduce_mod_sphere(data.trace.den()));
    let n = data.n();
    let circle_tracefree = data.tracefree.iter().flatten().all(|t| {
        let on_circle = (0..n).fold(t.num().clone(), |p, a| p.set_var_zero(a));
        reduce_mod_sphere(&on_circle).is_zero()
    });
    let a1_shape = data.a1.as_ref().map(|a1| {
        let num = reduce_mod_sphere(a1.num());
        let den = reduce_mod_sphere(a1.den());
        let zw = Monomial::new(&[0, 0], &[1, 1]);
        let cofactor_ok = num.terms().all(|(m, _)| zw.divides(m) && zw.quotient_of(m).is_balanced());
        cofactor_ok && balanced(&den)
    });
    MonomialObstruction { moduli_only, circle_tracefree, a1_shape }
}

// ---------------------------------------------------------------------------
// The g(t) path for monomial maps

/// `g(t)` with `Σ|c_A|² t^{e_A} − 1 = g(t)·(Σ t_j − 1)`, in holomorphic
/// variables `t_j`.
pub fn monomial_g(f: &SphereMap) -> Result<HermitianPoly> {
    if !f.has_sphere_source() {
        return Err(Error::NonSphereSource);
    }
    let data = f.monomial_data().ok_or(Error::NotMonomialForm)?;
    let m = f.nvars();
    let mut fpoly = HermitianPoly::from_int(m, -1);
    for (e, c) in data {
        let w = c.mul_ref(&c.conj());
        fpoly = &fpoly + &HermitianPoly::monomial(Monomial::new(&e, &vec![0; m]), w);
    }
    let sum_t = (0..m).fold(HermitianPoly::from_int(m, -1), |acc, j| &acc + &HermitianPoly::var(m, j));
    Ok(fpoly.exact_divide(&sum_t)?)
}

/// `t_j ↦ z_j z̄_j`.
fn substitute_moduli(p: &HermitianPoly) -> HermitianPoly {
    let m = p.nvars();
    let terms = p.terms().map(|(mono, c)| {
        let e: Vec<u16> = (0..m).map(|j| mono.holo_exp(j)).collect();
        (Monomial::new(&e, &e), c.clone())
    });
    HermitianPoly::from_terms(m, terms)
}

struct LogG {
    g: HermitianPoly,
    d1: Vec<HermitianPoly>,
    d2: Vec<Vec<HermitianPoly>>,
}

impl LogG {
    fn new(g: HermitianPoly) -> Self {
        let m = g.nvars();
        let d1: Vec<HermitianPoly> = (0..m).map(|j| g.d(j)).collect();
        let d2 = (0..m).map(|i| (0..m).map(|j| d1[i].d(j)).collect()).collect();
        Self { g, d1, d2 }
    }

    /// `∂_i log g` as a rational function of `t`.
    fn first(&self, i: usize) -> RationalFunction {
        RationalFunction::new(self.d1[i].clone(), self.g.clone()).expect("g ≠ 0")
    }

    /// `∂_i ∂_j log g = (g g_ij − g_i g_j)/g²`.
    fn second(&self, i: usize, j: usize) -> RationalFunction {
        let num = &(&self.g * &self.d2[i][j]) - &(&self.d1[i] * &self.d1[j]);
        RationalFunction::new(num, &self.g * &self.g).expect("g ≠ 0")
    }

    /// `(∂_α∂_β − ∂_β∂_w − ∂_α∂_w + ∂_w²) log g`.
    fn phi2(&self, a: usize, b: usize, w: usize) -> RationalFunction {
        self.second(a, b).sub_ref(&self.second(b, w)).sub_ref(&self.second(a, w)).add_ref(&self.second(w, w))
    }
}

fn moduli(f: &RationalFunction) -> RationalFunction {
    RationalFunction::new(substitute_moduli(f.num()), substitute_moduli(f.den())).expect("nonzero")
}

/// The trace via `φ_α = ∂_α log g` and the four-term `φ_{αβ}`, exactly as
/// `Σφ_α + Σ(φ_αα − φ_α)|z_α|² − Σφ_αβ|z_α|²|z_β|²`.
pub fn monomial_trace_verbatim(f: &SphereMap) -> Result<RationalFunction> {
    let lg = LogG::new(monomial_g(f)?);
    let m = f.nvars();
    let n = m - 1;
    let t = |j: usize| RationalFunction::from_poly(HermitianPoly::var(m, j));
    let mut acc = RationalFunction::zero(m);
    for a in 0..n {
        let phi_a = lg.first(a);
        acc = acc.add_ref(&phi_a);
        acc = acc.add_ref(&lg.phi2(a, a, n).sub_ref(&phi_a).mul_ref(&t(a)));
        for b in 0..n {
            acc = acc.sub_ref(&lg.phi2(a, b, n).mul_ref(&t(a)).mul_ref(&t(b)));
        }
    }
    Ok(moduli(&acc))
}

/// The verbatim formula plus the term `(∂_w log g)·Σ|z_α|²` produced by
/// `∂_w∂_w̄` acting on `log g(|z|²)`, which the verbatim form omits.
pub fn monomial_trace_corrected(f: &SphereMap) -> Result<RationalFunction> {
    let verbatim = monomial_trace_verbatim(f)?;
    let lg = LogG::new(monomial_g(f)?);
    let m = f.nvars();
    let n = m - 1;
    let sum = (0..n).fold(HermitianPoly::zero(m), |acc, a| &acc + &HermitianPoly::var(m, a));
    let extra = moduli(&lg.first(n).mul_poly(&sum));
    Ok(verbatim.add_ref(&extra))
}

// ---------------------------------------------------------------------------
// A₁ transformation law under source automorphisms

/// `L = w̄∂_z − z̄∂_w` on a rational function of two variables.
fn op_l_ratfn(f: &RationalFunction) -> Result<RationalFunction> {
    let zb = RationalFunction::from_poly(HermitianPoly::conj_var(2, 0));
    let wb = RationalFunction::from_poly(HermitianPoly::conj_var(2, 1));
    let dz = f.derivative(0, DerivKind::Holo)?;
    let dw = f.derivative(1, DerivKind::Holo)?;
    Ok(wb.mul_ref(&dz).sub_ref(&zb.mul_ref(&dw)))
}

/// Maximum relative deviation from `a(F∘γ)(p) = e^{ψ(p)} λ(p) a(F)(γ(p))`,
/// where `e^ψ = (1 − |a|²)/|1 − ⟨p,a⟩|²` and `λ = γ₂·Lγ₁ − γ₁·Lγ₂`.
pub fn a1_law_residual(f: &SphereMap, gamma: &BallAutomorphism, points: &[SpherePoint]) -> Result<f64> {
    let fg = crate::maps::precompose_source_automorphism(f, gamma)?;
    let a_f = CompiledRatfn::new(&a1_coefficient(&f.quotient()?.log_arg)?);
    let a_fg = CompiledRatfn::new(&a1_coefficient(&fg.quotient()?.log_arg)?);
    let vars: Vec<HermitianPoly> = (0..2).map(|j| HermitianPoly::var(2, j)).collect();
    let g = gamma.apply(&vars, &HermitianPoly::one(2));
    let lam = g[1].mul_ref(&op_l_ratfn(&g[0])?).sub_ref(&g[0].mul_ref(&op_l_ratfn(&g[1])?));
    let lam = CompiledRatfn::new(&lam);
    let conf = CompiledRatfn::new(&gamma.conformal_factor());
    let mut worst: f64 = 0.0;
    for p in points {
        let x = &p.coords;
        let lhs = a_fg.eval(x)?;
        let rhs = conf.eval(x)? * lam.eval(x)? * a_f.eval(&gamma.eval(x))?;
        let scale = lhs.norm().max(rhs.norm()).max(1.0);
        worst = worst.max((lhs - rhs).norm() / scale);
    }
    Ok(worst)
}

/// Exact value of the trace at a Gaussian-rational sphere point.
pub fn trace_at(data: &AhlforsData, point: &[GaussianRational]) -> Option<RadicalNumber> {
    let den = data.trace.den().eval_exact(point);
    if den.is_zero() {
        return None;
    }
    let num = data.trace.num().eval_exact(point);
    Some(num.mul_ref(&den.inv()?))
}

/// The constant function `q`.
pub fn rational_constant(nvars: usize, q: i64) -> RationalFunction {
    RationalFunction::constant(nvars, RadicalNumber::from_rational(rat_int(q)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::catalog;
    use crate::parse::parse_expression;

    fn s_expr(src: &str) -> RationalFunction {
        let z = HermitianPoly::var(2, 0);
        crate::parse::ParseContext::new(2)
            .with_binding("s", RationalFunction::from_poly(&z * &z.conj()))
            .parse(src)
            .unwrap()
    }

    #[test]
    fn linear_embedding_is_flat() {
        let d = ahlfors_mixed(&catalog("table1/row1").unwrap().map).unwrap();
        assert!(d.trace.is_zero());
        assert!(d.a1.unwrap().is_zero());
        assert!(d.mixed[0][0].is_zero());
    }

    #[test]
    fn whitney_trace_and_a1() {
        let e = catalog("table1/row2").unwrap();
        let d = ahlfors_mixed(&e.map).unwrap();
        assert!(ratfn_eq_on_sphere(&d.trace, &s_expr("s/(s-2)^2")));
        assert!(ratfn_eq_on_sphere(d.a1.as_ref().unwrap(), &e.expected_a1.unwrap().value));
        let (num, den) = trace_in_s(&d).unwrap();
        assert_eq!(num.to_string_in("s"), "s");
        assert_eq!(den.to_string_in("s"), "s^2 - 4*s + 4");
    }

    #[test]
    fn row3_constant_trace() {
        let d = ahlfors_mixed(&catalog("table1/row3").unwrap().map).unwrap();
        assert!(ratfn_eq_on_sphere(&d.trace, &s_expr("1/2")));
        assert!(reduce_mod_sphere(d.a1.unwrap().num()).is_zero());
    }

    #[test]
    fn umbilic_kinds() {
        for (id, kind) in [
            ("table1/row1", UmbilicKind::WholeSphere),
            ("table1/row2", UmbilicKind::CircleS2),
            ("table1/row3", UmbilicKind::Empty),
            ("table1/row4", UmbilicKind::UnionS1S2),
            ("table1/row12", UmbilicKind::CircleS1),
        ] {
            let u = umbilic_locus(&catalog(id).unwrap().map).unwrap();
            assert_eq!(u.kind, kind, "{id}");
            assert!(u.exact);
        }
    }

    #[test]
    fn cubic_umbilic_witness() {
        let u = umbilic_locus(&catalog("cubic-dangelo-1991").unwrap().map).unwrap();
        assert_eq!(u.kind, UmbilicKind::NotMonomialPointSet);
        assert!(!u.exact);
        let wit = vec![GaussianRational::zero(), GaussianRational::one()];
        assert_eq!(u.witnesses, vec![wit]);
        assert!(u.scan_min.unwrap() > -1e-9);
    }

    #[test]
    fn equivalence_verdicts() {
        let r2 = catalog("table1/row2").unwrap().map;
        let r3 = catalog("table1/row3").unwrap().map;
        let v = equivalence_test(&r2, &r3).unwrap();
        assert_eq!(v.to_string(), "Distinguished (trace differs)");
        assert!(!equivalence_test(&r2, &r2).unwrap().is_distinguished());
        let w2 = catalog("whitney:n=2").unwrap().map;
        assert!(matches!(equivalence_test(&r2, &w2), Err(Error::SourceMismatch(_))));
    }

    #[test]
    fn padding_does_not_change_invariants() {
        let r2 = catalog("table1/row2").unwrap().map;
        assert!(!equivalence_test(&r2, &r2.padded(3)).unwrap().is_distinguished());
    }

    #[test]
    fn obstructions() {
        let o = monomial_obstruction(&catalog("table1/row4").unwrap().map).unwrap();
        assert!(o.passes());
        let o = monomial_obstruction(&catalog("faran-3-9").unwrap().map).unwrap();
        assert_eq!(o.a1_shape, Some(false));
        let o = monomial_obstruction(&catalog("cubic-dangelo-1991").unwrap().map).unwrap();
        assert!(!o.moduli_only);
    }

    #[test]
    fn g_path_corrected_matches_general() {
        for k in [1, 2, 3, 4, 7] {
            let m = catalog(&format!("table1/row{k}")).unwrap().map;
            let d = ahlfors_mixed(&m).unwrap();
            assert!(ratfn_eq_on_sphere(&monomial_trace_corrected(&m).unwrap(), &d.trace), "row {k}");
        }
        let m = catalog("whitney:n=2").unwrap().map;
        let d = ahlfors_mixed(&m).unwrap();
        let c = monomial_trace_corrected(&m).unwrap();
        let diff = c.sub_ref(&d.trace);
        assert!(reduce_mod_sphere(diff.num()).is_zero());
    }

    #[test]
    fn g_of_whitney() {
        let g = monomial_g(&catalog("table1/row2").unwrap().map).unwrap();
        // f(t) = t1 + t1 t2 + t2² − 1 = (1 + t2)(t1 + t2 − 1)
        assert!(g.eq(&parse_expression("1 + w", 2).unwrap().num().clone()));
    }

    #[test]
    fn mean_curvature_of_linear_is_zero() {
        let h = mean_curvature_sq(&catalog("table1/row1").unwrap().map).unwrap();
        assert!(ratfn_eq_on_sphere(&h, &RationalFunction::zero(2)));
        let h = mean_curvature_sq(&catalog("table1/row2").unwrap().map).unwrap();
        assert!(!ratfn_eq_on_sphere(&h, &RationalFunction::zero(2)));
    }

    #[test]
    fn ii_norm_row3() {
        let m = catalog("table1/row3").unwrap().map;
        let ii = ii_norm_sq(&m).unwrap();
        let q = m.quotient().unwrap().as_ratfn();
        let expected = RationalFunction::constant(2, RadicalNumber::from_int(2)).div_ref(&q).unwrap();
        assert!(ratfn_eq_on_sphere(&ii, &expected));
    }

    #[test]
    fn webster_tracefree_vanishes() {
        let m = catalog("webster-quadric").unwrap().map;
        let tf = tracefree_general(&m).unwrap();
        let rho = m.defining_function();
        assert!(tf.iter().flatten().all(|t| rho.zero_on_hypersurface(t)));
        assert!(matches!(ahlfors_mixed(&m), Err(Error::NonSphereSource)));
    }

    #[test]
    fn dangelo_tilde_frame() {
        let e = catalog("dangelo-family:n=2").unwrap();
        let d = ahlfors_mixed(&e.map).unwrap();
        let tilde = d.mixed_in_tilde_frame();
        for (ra, rb) in tilde.iter().zip(e.expected_mixed_tilde.as_ref().unwrap()) {
            for (x, y) in ra.iter().zip(rb) {
                assert!(ratfn_eq_on_sphere(x, &y.value));
            }
        }
        assert!(ratfn_eq_on_sphere(&d.trace, &e.expected_trace.unwrap().value));
    }
}
