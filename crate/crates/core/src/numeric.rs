//! Floating-point cross-checks for the exact layer.
//!
//! Nothing here feeds back into a symbolic verdict; these routines sample
//! the sphere, evaluate expressions in `Complex64` and compare.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::{HermitianPoly, RationalFunction};
use crate::error::{Error, Result};
use crate::geometry::{d_log_operator, DefiningFunction, LogArg};

/// Default oracle seed; the CLI lets `CR_AHLFORS_SEED` override it.
pub const DEFAULT_SEED: u64 = 42;
/// Frame-based checks need `|w|` at least this large.
pub const CHART_GUARD: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct SpherePoint {
    pub coords: Vec<Complex64>,
}

impl SpherePoint {
    pub fn new(coords: Vec<Complex64>) -> Self {
        Self { coords }
    }

    /// `s = |z_1|²`
    pub fn s(&self) -> f64 {
        self.coords[0].norm_sqr()
    }

    pub fn w(&self) -> Complex64 {
        *self.coords.last().expect("nonempty point")
    }

    pub fn distance(&self, other: &[Complex64]) -> f64 {
        self.coords.iter().zip(other).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Deterministic sampler of the unit sphere in `C^{n+1}`.
pub struct Sampler {
    pub seed: u64,
    pub n: usize,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64, n: usize) -> Self {
        Self { seed, n, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn point(&mut self) -> SpherePoint {
        let m = self.n + 1;
        let mut v: Vec<Complex64> = (0..m)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut self.rng);
                let im: f64 = StandardNormal.sample(&mut self.rng);
                Complex64::new(re, im)
            })
            .collect();
        let norm = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        for c in &mut v {
            *c /= norm;
        }
        SpherePoint { coords: v }
    }

    /// Normalized complex Gaussian vectors: uniform on the sphere.
    pub fn sample(&mut self, count: usize) -> Vec<SpherePoint> {
        (0..count).map(|_| self.point()).collect()
    }

    /// Like [`Sampler::sample`] but resamples points with `|w| < CHART_GUARD`.
    pub fn sample_chart(&mut self, count: usize) -> Vec<SpherePoint> {
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let p = self.point();
            if p.w().norm() >= CHART_GUARD {
                out.push(p);
            }
        }
        out
    }
}

pub fn sample_sphere(seed: u64, n: usize, count: usize) -> Vec<SpherePoint> {
    Sampler::new(seed, n).sample(count)
}

/// A polynomial flattened for repeated floating-point evaluation.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    nvars: usize,
    terms: Vec<(Complex64, Vec<u16>)>,
}

impl CompiledPoly {
    pub fn new(p: &HermitianPoly) -> Self {
        let terms = p
            .terms()
            .map(|(m, c)| {
                let (re, im) = c.to_complex();
                let mut e = m.holo().to_vec();
                e.extend_from_slice(m.anti());
                (Complex64::new(re, im), e)
            })
            .collect();
        Self { nvars: p.nvars(), terms }
    }

    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        let m = self.nvars;
        let maxe = self.terms.iter().flat_map(|(_, e)| e.iter().copied()).max().unwrap_or(0) as usize;
        // powers[v][k] = x_v^k (v < m) or conj(x_{v−m})^k
        let mut powers: Vec<Vec<Complex64>> = Vec::with_capacity(2 * m);
        for v in 0..2 * m {
            let base = if v < m { x[v] } else { x[v - m].conj() };
            let mut row = Vec::with_capacity(maxe + 1);
            row.push(Complex64::new(1.0, 0.0));
            for k in 1..=maxe {
                row.push(row[k - 1] * base);
            }
            powers.push(row);
        }
        self.terms.iter().map(|(c, e)| e.iter().enumerate().fold(*c, |acc, (v, &k)| acc * powers[v][k as usize])).sum()
    }
}

#[derive(Clone, Debug)]
pub struct CompiledRatfn {
    num: CompiledPoly,
    den: CompiledPoly,
}

impl CompiledRatfn {
    pub fn new(f: &RationalFunction) -> Self {
        Self { num: CompiledPoly::new(f.num()), den: CompiledPoly::new(f.den()) }
    }

    pub fn eval(&self, x: &[Complex64]) -> Result<Complex64> {
        let d = self.den.eval(x);
        if d.norm() < 1e-9 {
            return Err(Error::NearZeroDenominator(d.norm()));
        }
        Ok(self.num.eval(x) / d)
    }
}

pub fn eval_poly(p: &HermitianPoly, x: &[Complex64]) -> Complex64 {
    CompiledPoly::new(p).eval(x)
}

pub fn eval_ratfn(f: &RationalFunction, x: &[Complex64]) -> Result<Complex64> {
    CompiledRatfn::new(f).eval(x)
}

/// Evaluates `Π p_i^{e_i}` for a [`LogArg`].
fn eval_log_arg(q: &[(i32, CompiledPoly)], x: &[Complex64]) -> Complex64 {
    q.iter().fold(Complex64::new(1.0, 0.0), |acc, (e, p)| acc * p.eval(x).powi(*e))
}

/// Frame vectors `Z_α(p) = e_α − (ρ_α/ρ_w)(p) e_w`.
fn frame_vectors(rho: &DefiningFunction, x: &[Complex64]) -> Vec<Vec<Complex64>> {
    let m = rho.nvars();
    let n = m - 1;
    let g: Vec<Complex64> = rho.grad().iter().map(|p| eval_poly(p, x)).collect();
    (0..n)
        .map(|a| {
            let mut v = vec![Complex64::new(0.0, 0.0); m];
            v[a] = Complex64::new(1.0, 0.0);
            v[n] = -g[a] / g[n];
            v
        })
        .collect()
}

/// Compares `D^ρ_{αβ̄} log Q` at `p` with central second differences of
/// `log Q` along the frame directions, polarized from the Levi form
/// `L(u, u) = [f(p+hu) + f(p−hu) + f(p+ihu) + f(p−ihu) − 4f(p)] / (4h²)`.
///
/// Returns `max|Δ| / max(max|D|, 1)` over all frame pairs.
pub fn finite_diff_hessian_check(rho: &DefiningFunction, q: &LogArg, p: &SpherePoint, h: f64) -> Result<f64> {
    if !(1e-6..=1e-2).contains(&h) {
        return Err(Error::InvalidParameter(format!("finite-difference step {h} outside [1e-6, 1e-2]")));
    }
    let w = p.w().norm();
    if w < CHART_GUARD {
        return Err(Error::ChartDegeneracy(w));
    }
    let symbolic = d_log_operator(rho, q)?;
    let compiled: Vec<(i32, CompiledPoly)> = q.factors().iter().map(|(e, f)| (*e, CompiledPoly::new(f))).collect();
    let f = |x: &[Complex64]| eval_log_arg(&compiled, x).re.ln();
    let x0 = &p.coords;
    let f0 = f(x0);
    let levi_form = |u: &[Complex64]| {
        let shifted = |c: Complex64| -> f64 {
            let x: Vec<Complex64> = x0.iter().zip(u).map(|(a, b)| a + c * b * h).collect();
            f(&x)
        };
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        (shifted(one) + shifted(-one) + shifted(i) + shifted(-i) - 4.0 * f0) / (4.0 * h * h)
    };
    // step along unit directions, then rescale: the form is sesquilinear and
    // |Z_α| ~ |z|/|w| would otherwise inflate the effective step
    let frame = frame_vectors(rho, x0);
    let lengths: Vec<f64> = frame.iter().map(|v| v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()).collect();
    let frame: Vec<Vec<Complex64>> =
        frame.iter().zip(&lengths).map(|(v, l)| v.iter().map(|x| x / l).collect()).collect();
    let n = frame.len();
    let mut max_diff: f64 = 0.0;
    let mut max_sym: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let mut num = Complex64::new(0.0, 0.0);
            for k in 0..4 {
                let ik = Complex64::i().powi(k);
                let v: Vec<Complex64> = frame[a].iter().zip(&frame[b]).map(|(x, y)| x + ik * y).collect();
                num += ik * levi_form(&v);
            }
            let fd = num / 4.0 * lengths[a] * lengths[b];
            let sym = eval_ratfn(&symbolic[a][b], x0)?;
            max_diff = max_diff.max((fd - sym).norm());
            max_sym = max_sym.max(sym.norm());
        }
    }
    Ok(max_diff / max_sym.max(1.0))
}

#[derive(Clone, Debug)]
pub struct PositivityScan {
    pub min: f64,
    pub argmin: SpherePoint,
    pub max_imag: f64,
}

/// Minimum of the real part of `f` over `count` seeded sphere points.
pub fn positivity_scan(f: &RationalFunction, n: usize, count: usize, seed: u64) -> Result<PositivityScan> {
    let compiled = CompiledRatfn::new(f);
    let pts = Sampler::new(seed, n).sample(count.max(1));
    let mut best: Option<(f64, SpherePoint)> = None;
    let mut max_imag: f64 = 0.0;
    for p in pts {
        let v = compiled.eval(&p.coords)?;
        max_imag = max_imag.max(v.im.abs() / v.re.abs().max(1.0));
        if best.as_ref().map_or(true, |(m, _)| v.re < *m) {
            best = Some((v.re, p));
        }
    }
    let (min, argmin) = best.expect("at least one point");
    Ok(PositivityScan { min, argmin, max_imag })
}

/// Minimum of `|den|` over `count` seeded sphere points.
pub fn min_abs_on_sphere(den: &HermitianPoly, count: usize, seed: u64) -> f64 {
    let c = CompiledPoly::new(den);
    let n = den.nvars() - 1;
    Sampler::new(seed, n).sample(count).iter().map(|p| c.eval(&p.coords).norm()).fold(f64::INFINITY, f64::min)
}

/// `min |den| > 1e-6` over `10⁴` seeded sphere points.
pub fn certify_denominator(den: &HermitianPoly, seed: u64) -> bool {
    den.as_constant().is_some() || min_abs_on_sphere(den, 10_000, seed) > 1e-6
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn solve_complex(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm()))?;
        if a[piv][k].norm() < 1e-300 {
            return None;
        }
        a.swap(k, piv);
        b.swap(k, piv);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                let t = a[k][j];
                a[i][j] -= f * t;
            }
            let t = b[k];
            b[i] -= f * t;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for k in (0..n).rev() {
        let s: Complex64 = (k + 1..n).map(|j| a[k][j] * x[j]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    Some(x)
}

/// Transverse curvature at a point by solving `ρ_{jk̄} v^j = ρ_k̄` numerically:
/// `r = 1 / (ρ_j v^j)` on `ρ = 0`.
pub fn numeric_transverse_curvature(rho: &HermitianPoly, x: &[Complex64]) -> Option<f64> {
    let m = rho.nvars();
    let hess: Vec<Vec<Complex64>> = (0..m).map(|k| (0..m).map(|j| eval_poly(&rho.d(j).dbar(k), x)).collect()).collect();
    let rhs: Vec<Complex64> = (0..m).map(|k| eval_poly(&rho.dbar(k), x)).collect();
    let v = solve_complex(hess, rhs)?;
    let s: Complex64 = (0..m).map(|j| eval_poly(&rho.d(j), x) * v[j]).sum();
    Some(1.0 / s.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expression;

    #[test]
    fn points_lie_on_sphere() {
        let pts = sample_sphere(7, 1, 1);
        assert_eq!(pts.len(), 1);
        let r: f64 = pts[0].coords.iter().map(Complex64::norm_sqr).sum();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(sample_sphere(3, 2, 50), sample_sphere(3, 2, 50));
        assert_ne!(sample_sphere(3, 2, 5), sample_sphere(4, 2, 5));
    }

    #[test]
    fn first_moment() {
        // E|z_1|² = 1/(n+1); variance of |z_1|² is n/((n+1)²(n+2))
        for n in [1usize, 2] {
            let pts = sample_sphere(11, n, 10_000);
            let mean = pts.iter().map(SpherePoint::s).sum::<f64>() / 1e4;
            let m = n as f64;
            let sigma = (m / ((m + 1.0).powi(2) * (m + 2.0)) / 1e4).sqrt();
            assert!((mean - 1.0 / (m + 1.0)).abs() < 3.0 * sigma, "n={n} mean {mean}");
        }
    }

    #[test]
    fn evaluation() {
        let rho = HermitianPoly::sphere_rho(2);
        for p in sample_sphere(1, 1, 20) {
            assert!(eval_poly(&rho, &p.coords).norm() < 1e-12);
        }
        let q = parse_expression("1 + w*conj(w)", 2).unwrap();
        let v = eval_ratfn(&q, &[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
        assert!((v - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        let f = parse_expression("1/z", 2).unwrap();
        assert!(matches!(eval_ratfn(&f, &[Complex64::new(0.0, 0.0); 2]), Err(Error::NearZeroDenominator(_))));
    }

    #[test]
    fn fd_oracle_constant_and_whitney() {
        let rho = DefiningFunction::sphere(2);
        let one = LogArg::from_poly(HermitianPoly::one(2));
        let whitney = LogArg::from_poly(parse_expression("1 + w*conj(w)", 2).unwrap().num().clone());
        for p in Sampler::new(5, 1).sample_chart(20) {
            assert!(finite_diff_hessian_check(&rho, &one, &p, 1e-4).unwrap() < 1e-9);
            let e = finite_diff_hessian_check(&rho, &whitney, &p, 1e-4).unwrap();
            assert!(e < 1e-6, "{e}");
        }
    }

    #[test]
    fn fd_oracle_guards() {
        let rho = DefiningFunction::sphere(2);
        let q = LogArg::from_poly(HermitianPoly::one(2));
        let p = SpherePoint::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        assert!(matches!(finite_diff_hessian_check(&rho, &q, &p, 1e-4), Err(Error::ChartDegeneracy(_))));
        let p = SpherePoint::new(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!(finite_diff_hessian_check(&rho, &q, &p, 1.0).is_err());
    }

    #[test]
    fn fd_oracle_catches_a_wrong_tensor() {
        // log Q against the Hessian of a different Q must disagree
        let rho = DefiningFunction::sphere(2);
        let q = LogArg::from_poly(parse_expression("1 + w*conj(w)", 2).unwrap().num().clone());
        let wrong = LogArg::from_poly(parse_expression("2 - z*conj(z)", 2).unwrap().num().clone());
        let p = Sampler::new(9, 1).sample_chart(1).remove(0);
        let sym_q = d_log_operator(&rho, &q).unwrap();
        let sym_w = d_log_operator(&rho, &wrong).unwrap();
        let a = eval_ratfn(&sym_q[0][0], &p.coords).unwrap();
        let b = eval_ratfn(&sym_w[0][0], &p.coords).unwrap();
        assert!((a - b).norm() > 1e-3);
    }

    #[test]
    fn positivity_of_norm() {
        let f = parse_expression("z*conj(z)", 2).unwrap();
        let scan = positivity_scan(&f, 1, 1000, 2).unwrap();
        assert!(scan.min >= 0.0 && scan.min < 1e-2);
        assert!(scan.max_imag < 1e-12);
    }

    #[test]
    fn numeric_r_of_sphere() {
        let rho = HermitianPoly::sphere_rho(2);
        for p in sample_sphere(1, 1, 5) {
            assert!((numeric_transverse_curvature(&rho, &p.coords).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}
