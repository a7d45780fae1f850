//! Differential operators attached to a polynomial defining function.
//!
//! Everything lives on the chart where `ρ_w ≠ 0`, `w` the last variable.
//! The tangential frame is `Z_α = ∂_α − (ρ_α/ρ_w)∂_w`; contracting a
//! complex Hessian `M_{jk̄}` against it gives, over `ρ_w ρ_w̄`,
//!
//! ```text
//! ρ_w ρ_w̄ M_{αβ̄} − ρ_w ρ_β̄ M_{αw̄} − ρ_α ρ_w̄ M_{wβ̄} + ρ_α ρ_β̄ M_{ww̄}
//! ```
//!
//! Logarithms are never formed: `log Q` is carried as a signed list of
//! polynomial factors and differentiated factor by factor.

use crate::algebra::{
    poly_matrix_adjugate, poly_matrix_det, reduce_mod_sphere, DerivKind, HermitianPoly, RationalFunction,
};
use crate::error::{Error, Result};

/// A real polynomial `ρ` whose zero set is the hypersurface of interest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningFunction {
    rho: HermitianPoly,
}

impl DefiningFunction {
    pub fn new(rho: HermitianPoly) -> Result<Self> {
        if !rho.is_real() {
            return Err(Error::NotReal);
        }
        Ok(Self { rho })
    }

    /// `Σ z_j z̄_j − 1`.
    pub fn sphere(nvars: usize) -> Self {
        Self { rho: HermitianPoly::sphere_rho(nvars) }
    }

    pub fn rho(&self) -> &HermitianPoly {
        &self.rho
    }

    pub fn nvars(&self) -> usize {
        self.rho.nvars()
    }

    /// CR dimension `n = nvars − 1`.
    pub fn cr_dim(&self) -> usize {
        self.nvars() - 1
    }

    pub fn is_standard_sphere(&self) -> bool {
        self.rho == HermitianPoly::sphere_rho(self.nvars())
    }

    /// `ρ_j`
    pub fn grad(&self) -> Vec<HermitianPoly> {
        (0..self.nvars()).map(|j| self.rho.d(j)).collect()
    }

    /// `ρ_k̄`
    pub fn grad_bar(&self) -> Vec<HermitianPoly> {
        (0..self.nvars()).map(|k| self.rho.dbar(k)).collect()
    }

    /// `ρ_{jk̄}`
    pub fn complex_hessian(&self) -> Vec<Vec<HermitianPoly>> {
        let m = self.nvars();
        (0..m).map(|j| (0..m).map(|k| self.rho.d(j).dbar(k)).collect()).collect()
    }

    /// Equality of rational functions modulo `(ρ)`. The standard sphere
    /// uses normal forms; other hypersurfaces use exact division by `ρ`.
    pub fn eq_on_hypersurface(&self, f: &RationalFunction, g: &RationalFunction) -> bool {
        if self.is_standard_sphere() {
            crate::algebra::ratfn_eq_on_sphere(f, g)
        } else {
            f.eq_mod(g, &self.rho)
        }
    }

    pub fn zero_on_hypersurface(&self, f: &RationalFunction) -> bool {
        if self.is_standard_sphere() {
            reduce_mod_sphere(f.num()).is_zero()
        } else {
            f.num().is_zero() || f.num().exact_divide(&self.rho).is_ok()
        }
    }
}

/// `J(ρ) = −det [[ρ, ρ_k̄], [ρ_j, ρ_{jk̄}]]`.
pub fn fefferman_j(rho: &DefiningFunction) -> HermitianPoly {
    let m = rho.nvars();
    let g = rho.grad();
    let gb = rho.grad_bar();
    let h = rho.complex_hessian();
    let mut bordered = Vec::with_capacity(m + 1);
    let mut top = vec![rho.rho().clone()];
    top.extend(gb);
    bordered.push(top);
    for j in 0..m {
        let mut row = vec![g[j].clone()];
        row.extend(h[j].iter().cloned());
        bordered.push(row);
    }
    poly_matrix_det(&bordered).neg_ref()
}

/// `r[ρ] = det[ρ_{jk̄}] / J(ρ)`.
pub fn transverse_curvature(rho: &DefiningFunction) -> Result<RationalFunction> {
    let det = poly_matrix_det(&rho.complex_hessian());
    if det.is_zero() {
        return Err(Error::DegenerateHessian);
    }
    let j = fefferman_j(rho);
    RationalFunction::new(det, j).map_err(|_| Error::DegenerateHessian)
}

/// The transverse field `ξ` together with the curvature normalizing it.
#[derive(Clone, Debug)]
pub struct TransverseVector {
    pub xi: Vec<RationalFunction>,
    /// `det[ρ_{jk̄}] / (ρ_j ρ^{jk̄} ρ_k̄ · det)`; agrees with
    /// [`transverse_curvature`] on `ρ = 0`.
    pub r: RationalFunction,
}

/// `ξ^j = N^j / S` with `N^j = Σ_k adj[k][j] ρ_k̄` and `S = Σ_j ρ_j N^j`,
/// so that `∂ρ(ξ) = 1` holds identically.
pub fn transverse_vector(rho: &DefiningFunction) -> Result<TransverseVector> {
    let h = rho.complex_hessian();
    let det = poly_matrix_det(&h);
    if det.is_zero() {
        return Err(Error::DegenerateHessian);
    }
    let adj = poly_matrix_adjugate(&h);
    let g = rho.grad();
    let gb = rho.grad_bar();
    let m = rho.nvars();
    let nvec: Vec<HermitianPoly> =
        (0..m).map(|j| (0..m).fold(HermitianPoly::zero(m), |acc, k| &acc + &(&adj[k][j] * &gb[k]))).collect();
    let s = (0..m).fold(HermitianPoly::zero(m), |acc, j| &acc + &(&g[j] * &nvec[j]));
    if s.is_zero() {
        return Err(Error::DegenerateHessian);
    }
    let xi = nvec.into_iter().map(|n| RationalFunction::new(n, s.clone())).collect::<Result<Vec<_>, _>>()?;
    let r = RationalFunction::new(det, s)?;
    Ok(TransverseVector { xi, r })
}

impl TransverseVector {
    /// Checks `∂ρ(ξ) = 1` and `ξ^j ρ_{jk̄} = r ρ_k̄` exactly (no ideal).
    pub fn verify(&self, rho: &DefiningFunction) -> bool {
        let m = rho.nvars();
        let g = rho.grad();
        let h = rho.complex_hessian();
        let gb = rho.grad_bar();
        let one = RationalFunction::one(m);
        let d_rho = (0..m).fold(RationalFunction::zero(m), |acc, j| acc.add_ref(&self.xi[j].mul_poly(&g[j])));
        if !d_rho.eq_exact(&one) {
            return false;
        }
        (0..m).all(|k| {
            let lhs = (0..m).fold(RationalFunction::zero(m), |acc, j| acc.add_ref(&self.xi[j].mul_poly(&h[j][k])));
            lhs.eq_exact(&self.r.mul_poly(&gb[k]))
        })
    }
}

/// `Σ e_i log p_i`, the logarithm of `Π p_i^{e_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogArg {
    factors: Vec<(i32, HermitianPoly)>,
}

impl LogArg {
    pub fn new(factors: Vec<(i32, HermitianPoly)>) -> Self {
        let factors = factors.into_iter().filter(|(e, _)| *e != 0).collect();
        Self { factors }
    }

    pub fn from_poly(p: HermitianPoly) -> Self {
        Self::new(vec![(1, p)])
    }

    /// `log(num/den)`.
    pub fn from_ratfn(f: &RationalFunction) -> Self {
        Self::new(vec![(1, f.num().clone()), (-1, f.den().clone())])
    }

    pub fn factors(&self) -> &[(i32, HermitianPoly)] {
        &self.factors
    }

    pub fn nvars(&self) -> Option<usize> {
        self.factors.first().map(|(_, p)| p.nvars())
    }

    /// `log(a·b)`.
    pub fn plus(&self, other: &Self) -> Self {
        let mut f = self.factors.clone();
        f.extend(other.factors.iter().cloned());
        Self::new(f)
    }

    /// `log(a/b)`.
    pub fn minus(&self, other: &Self) -> Self {
        let mut f = self.factors.clone();
        f.extend(other.factors.iter().map(|(e, p)| (-e, p.clone())));
        Self::new(f)
    }

    /// The argument `Π p_i^{e_i}` as a rational function.
    pub fn to_ratfn(&self, nvars: usize) -> RationalFunction {
        let mut num = HermitianPoly::one(nvars);
        let mut den = HermitianPoly::one(nvars);
        for (e, p) in &self.factors {
            if *e > 0 {
                num = &num * &p.pow(*e as u32);
            } else {
                den = &den * &p.pow(e.unsigned_abs());
            }
        }
        RationalFunction::new(num, den).expect("nonzero factors")
    }

    fn check(&self) -> Result<()> {
        if self.factors.iter().any(|(_, p)| p.is_zero()) {
            return Err(Error::VanishingLogArgument);
        }
        Ok(())
    }

    /// Factors whose complex Hessian of `log p` can be nonzero: constants,
    /// holomorphic and antiholomorphic polynomials are pluriharmonic.
    fn curved(&self) -> impl Iterator<Item = &(i32, HermitianPoly)> {
        self.factors.iter().filter(|(_, p)| p.holo_degree() > 0 && p.anti_degree() > 0)
    }
}

/// Levi matrix `h_{αβ̄}` in the frame `Z_α`, and its inverse.
#[derive(Clone, Debug)]
pub struct LeviData {
    pub levi: Vec<Vec<RationalFunction>>,
    pub levi_inverse: Vec<Vec<RationalFunction>>,
    /// `ρ_w ρ_w̄ · h_{αβ̄}`
    pub levi_num: Vec<Vec<HermitianPoly>>,
    pub levi_num_det: HermitianPoly,
    pub levi_num_adj: Vec<Vec<HermitianPoly>>,
    /// `ρ_w ρ_w̄`
    pub chart_den: HermitianPoly,
}

/// Frame contraction of a Hessian-like matrix `m[j][k]` (numerator over `ρ_w ρ_w̄`).
fn frame_contract(
    g: &[HermitianPoly],
    gb: &[HermitianPoly],
    m: &[Vec<HermitianPoly>],
    a: usize,
    b: usize,
) -> HermitianPoly {
    let w = g.len() - 1;
    let t1 = &(&g[w] * &gb[w]) * &m[a][b];
    let t2 = &(&g[w] * &gb[b]) * &m[a][w];
    let t3 = &(&g[a] * &gb[w]) * &m[w][b];
    let t4 = &(&g[a] * &gb[b]) * &m[w][w];
    &(&(&t1 - &t2) - &t3) + &t4
}

pub fn levi_data(rho: &DefiningFunction) -> Result<LeviData> {
    let m = rho.nvars();
    let n = m - 1;
    if n == 0 {
        return Err(Error::WrongDimension { expected: 2, got: m });
    }
    let g = rho.grad();
    let gb = rho.grad_bar();
    if g[n].is_zero() {
        return Err(Error::DegenerateLevi);
    }
    let h = rho.complex_hessian();
    let chart_den = &g[n] * &gb[n];
    let levi_num: Vec<Vec<HermitianPoly>> =
        (0..n).map(|a| (0..n).map(|b| frame_contract(&g, &gb, &h, a, b)).collect()).collect();
    let det = poly_matrix_det(&levi_num);
    if det.is_zero() {
        return Err(Error::DegenerateLevi);
    }
    let adj = poly_matrix_adjugate(&levi_num);
    let levi = levi_num
        .iter()
        .map(|row| row.iter().map(|p| RationalFunction::new(p.clone(), chart_den.clone())).collect())
        .collect::<Result<Vec<Vec<_>>, _>>()?;
    let levi_inverse = adj
        .iter()
        .map(|row| row.iter().map(|p| RationalFunction::new(p * &chart_den, det.clone())).collect())
        .collect::<Result<Vec<Vec<_>>, _>>()?;
    Ok(LeviData { levi, levi_inverse, levi_num, levi_num_det: det, levi_num_adj: adj, chart_den })
}

impl LeviData {
    pub fn n(&self) -> usize {
        self.levi.len()
    }

    /// `h^{αβ̄} A_{αβ̄} = Σ_{αβ} inv[β][α] · A[α][β]`.
    pub fn trace(&self, a: &[Vec<RationalFunction>]) -> RationalFunction {
        let n = self.n();
        let nvars = self.chart_den.nvars();
        let mut acc = RationalFunction::zero(nvars);
        for al in 0..n {
            for be in 0..n {
                acc = acc.add_ref(&self.levi_inverse[be][al].mul_ref(&a[al][be]));
            }
        }
        acc
    }

    /// `A − (trace/n)·h`.
    pub fn tracefree(&self, a: &[Vec<RationalFunction>], trace: &RationalFunction) -> Vec<Vec<RationalFunction>> {
        let n = self.n();
        let nvars = self.chart_den.nvars();
        let per = trace.mul_ref(&RationalFunction::constant(
            nvars,
            crate::algebra::RadicalNumber::from_rational(crate::algebra::rat(1, n as i64)),
        ));
        (0..n).map(|al| (0..n).map(|be| a[al][be].sub_ref(&per.mul_ref(&self.levi[al][be]))).collect()).collect()
    }

    /// `Σ inv[β][α] ω_α conj(ω_β)` for a (1,0)-form given by its frame values.
    pub fn norm_sq(&self, omega: &[RationalFunction]) -> RationalFunction {
        let n = self.n();
        let nvars = self.chart_den.nvars();
        let mut acc = RationalFunction::zero(nvars);
        for al in 0..n {
            for be in 0..n {
                acc = acc.add_ref(&self.levi_inverse[be][al].mul_ref(&omega[al]).mul_ref(&omega[be].conj()));
            }
        }
        acc
    }
}

/// Numerators of `D^ρ_{αβ̄} log p` over `ρ_w ρ_w̄ p²`, one per frame pair.
fn d_log_factor(g: &[HermitianPoly], gb: &[HermitianPoly], p: &HermitianPoly) -> Vec<Vec<HermitianPoly>> {
    let m = g.len();
    let n = m - 1;
    let pj: Vec<HermitianPoly> = (0..m).map(|j| p.d(j)).collect();
    let pk: Vec<HermitianPoly> = (0..m).map(|k| p.dbar(k)).collect();
    // only rows/columns α, β and w of the log-Hessian numerator are needed
    let mut hess = vec![vec![HermitianPoly::zero(m); m]; m];
    for j in 0..m {
        for k in 0..m {
            hess[j][k] = &(p * &pj[j].dbar(k)) - &(&pj[j] * &pk[k]);
        }
    }
    (0..n).map(|a| (0..n).map(|b| frame_contract(g, gb, &hess, a, b)).collect()).collect()
}

/// `D^ρ_{αβ̄} log Q`: the frame contraction of the complex Hessian of `log Q`.
pub fn d_log_operator(rho: &DefiningFunction, q: &LogArg) -> Result<Vec<Vec<RationalFunction>>> {
    q.check()?;
    let m = rho.nvars();
    let n = m - 1;
    let g = rho.grad();
    let gb = rho.grad_bar();
    let chart_den = &g[n] * &gb[n];
    let mut out = vec![vec![RationalFunction::zero(m); n]; n];
    for (e, p) in q.curved() {
        let nums = d_log_factor(&g, &gb, p);
        let den = &chart_den * &(p * p);
        for a in 0..n {
            for b in 0..n {
                let term =
                    RationalFunction::new(nums[a][b].scale_rational(&crate::algebra::rat_int(*e as i64)), den.clone())?;
                out[a][b] = out[a][b].add_ref(&term);
            }
        }
    }
    Ok(out)
}

/// `h^{αβ̄} D^ρ_{αβ̄} log Q` assembled with the chart factor cancelled:
/// each factor contributes `e · Σ adj[β][α]·num[α][β] / (det · p²)`.
pub fn d_log_trace(rho: &DefiningFunction, levi: &LeviData, q: &LogArg) -> Result<RationalFunction> {
    q.check()?;
    let m = rho.nvars();
    let n = m - 1;
    let g = rho.grad();
    let gb = rho.grad_bar();
    let mut acc = RationalFunction::zero(m);
    for (e, p) in q.curved() {
        let nums = d_log_factor(&g, &gb, p);
        let mut s = HermitianPoly::zero(m);
        for a in 0..n {
            for b in 0..n {
                s = &s + &(&levi.levi_num_adj[b][a] * &nums[a][b]);
            }
        }
        let den = &levi.levi_num_det * &(p * p);
        acc = acc.add_ref(&RationalFunction::new(s.scale_rational(&crate::algebra::rat_int(*e as i64)), den)?);
    }
    Ok(acc)
}

/// `L = w̄∂_z − z̄∂_w` on the 3-sphere.
pub fn op_l(p: &HermitianPoly) -> HermitianPoly {
    let m = p.nvars();
    let zb = HermitianPoly::conj_var(m, 0);
    let wb = HermitianPoly::conj_var(m, 1);
    &(&wb * &p.d(0)) - &(&zb * &p.d(1))
}

/// `L̄ = w∂_z̄ − z∂_w̄`.
pub fn op_lbar(p: &HermitianPoly) -> HermitianPoly {
    let m = p.nvars();
    let z = HermitianPoly::var(m, 0);
    let w = HermitianPoly::var(m, 1);
    &(&w * &p.dbar(0)) - &(&z * &p.dbar(1))
}

/// `L L L̄ log Q`, the coefficient of `A₁` against `θ¹ = w dz − z dw`.
pub fn a1_coefficient(q: &LogArg) -> Result<RationalFunction> {
    q.check()?;
    let nvars = q.nvars().unwrap_or(2);
    if nvars != 2 {
        return Err(Error::WrongDimension { expected: 2, got: nvars });
    }
    let mut acc = RationalFunction::zero(2);
    for (e, p) in q.factors() {
        // L̄ log p = u/p; L(u/p) = v/p²; L(v/p²) = (L(v)p − 2vL(p))/p³
        let u = op_lbar(p);
        if u.is_zero() {
            continue;
        }
        let lp = op_l(p);
        let v = &(&op_l(&u) * p) - &(&u * &lp);
        let num = &(&op_l(&v) * p) - &(&v * &lp).scale_rational(&crate::algebra::rat_int(2));
        if num.is_zero() {
            continue;
        }
        let term = RationalFunction::new(num.scale_rational(&crate::algebra::rat_int(*e as i64)), p.pow(3))?;
        acc = acc.add_ref(&term);
    }
    Ok(acc)
}

/// Applies the frame field `Z_α` to a rational function.
pub fn frame_apply(rho: &DefiningFunction, alpha: usize, f: &RationalFunction) -> Result<RationalFunction> {
    let n = rho.cr_dim();
    let g = rho.grad();
    let da = f.derivative(alpha, DerivKind::Holo)?;
    let dw = f.derivative(n, DerivKind::Holo)?;
    let coef = RationalFunction::new(g[alpha].clone(), g[n].clone())?;
    Ok(da.sub_ref(&coef.mul_ref(&dw)))
}

/// Applies the (1,0) field `ξ` to a rational function.
fn xi_apply(xi: &[RationalFunction], f: &RationalFunction) -> Result<RationalFunction> {
    let m = f.nvars();
    let mut acc = RationalFunction::zero(m);
    for (j, x) in xi.iter().enumerate() {
        acc = acc.add_ref(&x.mul_ref(&f.derivative(j, DerivKind::Holo)?));
    }
    Ok(acc)
}

/// For `ρ̂ = h·ρ` with `h > 0` a real polynomial, checks modulo `(ρ)`
///
/// ```text
/// h·r[ρ̂] = r[ρ] + ξ(log h) + conj(ξ(log h)) − h^{αβ̄} Z_α(log h) conj(Z_β(log h))
/// ```
///
/// where every log-derivative is the rational function `(∂h)/h`.
pub fn rescale_identity_check(rho: &DefiningFunction, h: &HermitianPoly) -> Result<bool> {
    if !h.is_real() {
        return Err(Error::NotReal);
    }
    if rho.is_standard_sphere() && reduce_mod_sphere(h).is_zero() || h.is_zero() {
        return Err(Error::VanishingLogArgument);
    }
    let m = rho.nvars();
    let n = m - 1;
    let rho_hat = DefiningFunction::new(h * rho.rho())?;
    let r = transverse_curvature(rho)?;
    let r_hat = transverse_curvature(&rho_hat)?;
    let lhs = r_hat.mul_poly(h);

    let tv = transverse_vector(rho)?;
    let hf = RationalFunction::from_poly(h.clone());
    let inv_h = RationalFunction::new(HermitianPoly::one(m), h.clone())?;
    let xi_sigma = xi_apply(&tv.xi, &hf)?.mul_ref(&inv_h);
    let levi = levi_data(rho)?;
    let zs: Vec<RationalFunction> =
        (0..n).map(|a| frame_apply(rho, a, &hf).map(|f| f.mul_ref(&inv_h))).collect::<Result<_>>()?;
    let grad_b_sq = levi.norm_sq(&zs);
    let rhs = r.add_ref(&xi_sigma).add_ref(&xi_sigma.conj()).sub_ref(&grad_b_sq);
    Ok(rho.eq_on_hypersurface(&lhs, &rhs))
}
