use cr_ahlfors::algebra::ratfn_eq_on_sphere;
use cr_ahlfors::algebra::rational_to_f64;
use cr_ahlfors::invariants::{ahlfors_mixed, mean_curvature_sq, monomial_trace_corrected, trace_at};
use cr_ahlfors::maps::{catalog, compose_target_automorphism, BallAutomorphism};
use cr_ahlfors::numeric::{numeric_transverse_curvature, sample_sphere, CompiledRatfn};
use cr_ahlfors::{rat, GaussianRational, HermitianPoly};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rows() -> impl Iterator<Item = String> {
    (1..=16).map(|k| format!("table1/row{k}"))
}

#[test]
fn corrected_monomial_path_matches_general_trace() {
    for id in rows() {
        let e = catalog(&id).unwrap();
        let general = ahlfors_mixed(&e.map).unwrap().trace;
        let g = monomial_trace_corrected(&e.map).unwrap();
        assert!(ratfn_eq_on_sphere(&general, &g), "{id}");
    }
}

#[test]
fn quotients_have_rational_coefficients() {
    let extra = ["whitney:n=2", "homogeneous:n=1,d=3", "dangelo-family", "faran-3-9", "cubic-dangelo-1991"];
    for id in rows().chain(extra.iter().map(|s| s.to_string())) {
        let q = catalog(&id).unwrap().map.quotient().unwrap();
        for (_, c) in q.num.terms() {
            assert!(c.as_rational().is_some(), "{id}: {c}");
        }
    }
}

#[test]
fn target_automorphism_of_identity_gives_conformal_factor() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let id = catalog("homogeneous:n=1,d=1").unwrap().map;
    for _ in 0..6 {
        let center: Vec<GaussianRational> = (0..2)
            .map(|_| GaussianRational::new(rat(rng.gen_range(-2..=2), 7), rat(rng.gen_range(-2..=2), 7)))
            .collect();
        let phi = BallAutomorphism::new(center).unwrap();
        let moved = compose_target_automorphism(&id, &phi).unwrap();
        let q = moved.quotient().unwrap();
        assert!(ratfn_eq_on_sphere(&q.as_ratfn(), &phi.conformal_factor()));
    }
}

#[test]
fn parametric_rows_at_pythagorean_values() {
    for row in [14, 15] {
        for t in ["3/5", "5/13", "8/17", "20/29"] {
            let e = catalog(&format!("table1/row{row}:t={t}")).unwrap();
            assert!(e.map.is_sphere_map(), "row{row} t={t}");
            let d = ahlfors_mixed(&e.map).unwrap();
            let want = e.expected_trace.unwrap().value;
            assert!(ratfn_eq_on_sphere(&d.trace, &want), "row{row} t={t}");
        }
    }
}

#[test]
fn mean_curvature_matches_numeric_transverse_curvature() {
    for id in ["whitney:n=1", "whitney:n=2", "table1/row14:t=3/5"] {
        let f = catalog(id).unwrap().map;
        let h = CompiledRatfn::new(&mean_curvature_sq(&f).unwrap());
        let pull = &f.hermitian_norm_sq().num().clone() - &HermitianPoly::one(f.nvars());
        for p in sample_sphere(5, f.source_n, 20) {
            let exact = h.eval(&p.coords).unwrap().re;
            let numeric = numeric_transverse_curvature(&pull, &p.coords).unwrap() - 1.0;
            assert!((exact - numeric).abs() <= 1e-8 * exact.abs().max(1.0), "{id}: {exact} vs {numeric}");
        }
    }
}

/// Rational points on the 3-sphere `(a/c)·u, (b/c)·v` with unit Gaussian
/// rationals `u, v` from Pythagorean triples.
fn rational_sphere_points() -> Vec<Vec<GaussianRational>> {
    let triples = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25), (20, 21, 29)];
    let units: Vec<GaussianRational> = triples
        .iter()
        .flat_map(|&(a, b, c)| {
            [GaussianRational::new(rat(a, c), rat(b, c)), GaussianRational::new(rat(-b, c), rat(a, c))]
        })
        .chain([GaussianRational::from_int(1)])
        .collect();
    let mut out = Vec::new();
    for &(a, b, c) in &triples {
        for u in &units {
            for v in &units {
                let z = u.scale(&rat(a, c));
                let w = v.scale(&rat(b, c));
                out.push(vec![z, w]);
            }
        }
    }
    out.truncate(100);
    out
}

#[test]
fn exact_trace_values_agree_with_floating_evaluation() {
    let pts = rational_sphere_points();
    assert_eq!(pts.len(), 100);
    for id in ["table1/row2", "table1/row4", "table1/row13", "faran-3-9"] {
        let d = ahlfors_mixed(&catalog(id).unwrap().map).unwrap();
        let t = CompiledRatfn::new(&d.trace);
        for p in &pts {
            let Some(exact) = trace_at(&d, p) else { continue };
            let x: Vec<Complex64> =
                p.iter().map(|g| Complex64::new(rational_to_f64(&g.re), rational_to_f64(&g.im))).collect();
            let float = t.eval(&x).unwrap();
            let (re, im) = exact.to_complex();
            let exact = Complex64::new(re, im);
            assert!((exact - float).norm() <= 1e-9 * exact.norm().max(1.0), "{id}");
            assert!(exact.im.abs() < 1e-12, "{id}: trace is real");
        }
    }
}
