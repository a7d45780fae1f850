//! End-to-end acceptance run: one `[PASS]` / `[FAIL]` line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed; the
//! process exits nonzero if any criterion fails.

use std::time::Instant;

use cr_ahlfors::algebra::{ratfn_eq_on_sphere, reduce_mod_sphere};
use cr_ahlfors::geometry::{fefferman_j, rescale_identity_check, DefiningFunction};
use cr_ahlfors::invariants::{
    a1_law_residual, ahlfors_mixed, ii_norm_sq_from, mixed_agree, monomial_obstruction, monomial_trace_verbatim,
    trace_at, tracefree_general, umbilic_locus_from,
};
use cr_ahlfors::maps::{catalog, catalog_ids, compose_target_automorphism, BallAutomorphism, CatalogEntry};
use cr_ahlfors::numeric::{finite_diff_hessian_check, positivity_scan, sample_sphere, Sampler, DEFAULT_SEED};
use cr_ahlfors::parse::parse_expression;
use cr_ahlfors::report::{a1_string, trace_string};
use cr_ahlfors::{GaussianRational, HermitianPoly, Rational, RationalFunction};
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// The sixteen rows plus the radical parameter choice for rows 14 and 15.
fn table_ids() -> Vec<String> {
    let mut ids: Vec<String> = (1..=16).map(|k| format!("table1/row{k}")).collect();
    ids.push("table1/row14:s=1/2".into());
    ids.push("table1/row15:s=1/2".into());
    ids
}

fn entry(id: &str) -> Result<CatalogEntry, String> {
    catalog(id).map_err(|e| format!("{id}: {e}"))
}

fn table_column(column: &str) -> Outcome {
    let started = Instant::now();
    let mut bad = Vec::new();
    for id in table_ids() {
        let e = entry(&id)?;
        let d = ahlfors_mixed(&e.map).map_err(|err| format!("{id}: {err}"))?;
        let (ok, computed, expected) = match column {
            "trace" => {
                let g = e.expected_trace.as_ref().expect("golden trace");
                (ratfn_eq_on_sphere(&d.trace, &g.value), trace_string(&d.trace), g.src.clone())
            }
            "a1" => {
                let g = e.expected_a1.as_ref().expect("golden a1");
                let a1 = d.a1.as_ref().expect("n = 1");
                (ratfn_eq_on_sphere(a1, &g.value), a1_string(a1), g.src.clone())
            }
            _ => {
                let u = umbilic_locus_from(&e.map, &d).map_err(|err| err.to_string())?;
                let want = e.expected_umbilic.expect("golden umbilic");
                (u.kind == want, u.kind.to_string(), want.to_string())
            }
        };
        if !ok {
            println!("    golden-data dispute in {id} ({column} column)");
            println!("      computed: {computed}");
            println!("      printed:  {expected}");
            bad.push(id);
        }
    }
    let secs = started.elapsed().as_secs_f64();
    if bad.is_empty() {
        Ok(format!("{} maps exact, {secs:.1}s", table_ids().len()))
    } else {
        Err(format!("golden-data dispute: {}", bad.join(", ")))
    }
}

fn criterion4() -> Outcome {
    let e = entry("faran-3-9")?;
    let d = ahlfors_mixed(&e.map).map_err(|x| x.to_string())?;
    let t = ratfn_eq_on_sphere(&d.trace, &e.expected_trace.as_ref().unwrap().value);
    let a = ratfn_eq_on_sphere(d.a1.as_ref().unwrap(), &e.expected_a1.as_ref().unwrap().value);
    if !t {
        let corrected = parse_expression("(30*z*conj(z) + 24*re(z) + 18)/(17 + 8*re(z) - z*conj(z))^2", 2).unwrap();
        println!("    golden-data dispute in faran-3-9 (trace)");
        println!("      printed:  {}", e.expected_trace.as_ref().unwrap().src);
        println!("      computed: {}", trace_string(&d.trace));
        println!(
            "      computed trace equals (30|z|^2 + 24 Re z + 18)/(17 + 8 Re z - |z|^2)^2: {}",
            ratfn_eq_on_sphere(&d.trace, &corrected)
        );
    }
    match (t, a) {
        (true, true) => Ok("trace and A1 exact".into()),
        (false, true) => Err("A1 exact; trace disagrees with the printed denominator (golden-data dispute)".into()),
        (true, false) => Err("trace exact; A1 differs".into()),
        (false, false) => Err("trace and A1 differ".into()),
    }
}

fn criterion5() -> Outcome {
    let e = entry("cubic-dangelo-1991")?;
    let d = ahlfors_mixed(&e.map).map_err(|x| x.to_string())?;
    let at =
        trace_at(&d, &[GaussianRational::zero(), GaussianRational::one()]).ok_or("denominator vanishes at (0,1)")?;
    if !at.is_zero() {
        return Err(format!("trace at (0,1) is {at}"));
    }
    let scan = positivity_scan(&d.trace, 1, 10_000, DEFAULT_SEED).map_err(|x| x.to_string())?;
    let dist = scan.argmin.distance(&[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
    if scan.min < -1e-9 {
        return Err(format!("trace min {:e}", scan.min));
    }
    if dist > 0.1 {
        return Err(format!("argmin at distance {dist:.3} from (0,1)"));
    }
    let o = monomial_obstruction(&e.map).map_err(|x| x.to_string())?;
    if o.moduli_only {
        return Err("trace reported as depending on moduli only".into());
    }
    Ok(format!("trace(0,1) = 0, min {:.2e} at distance {dist:.3}, moduli check fails", scan.min))
}

fn criterion6() -> Outcome {
    let mut n_checked = 0;
    for n in [1, 2] {
        for (c, s) in [("1", "0"), ("4/5", "3/5")] {
            let id = format!("dangelo-family:n={n},c={c},s={s}");
            let e = entry(&id)?;
            let q = e.map.quotient().map_err(|x| x.to_string())?.as_ratfn();
            if !q.eq_exact(&e.expected_q.as_ref().unwrap().value) {
                return Err(format!("{id}: Q differs"));
            }
            let d = ahlfors_mixed(&e.map).map_err(|x| x.to_string())?;
            if !ratfn_eq_on_sphere(&d.trace, &e.expected_trace.as_ref().unwrap().value) {
                return Err(format!("{id}: trace differs: {}", trace_string(&d.trace)));
            }
            let tilde = d.mixed_in_tilde_frame();
            for (r, g) in tilde.iter().zip(e.expected_mixed_tilde.as_ref().unwrap()) {
                for (x, y) in r.iter().zip(g) {
                    if !ratfn_eq_on_sphere(x, &y.value) {
                        return Err(format!("{id}: mixed component differs from {}", y.src));
                    }
                }
            }
            n_checked += 1;
        }
    }
    Ok(format!("{n_checked} parameter choices: Q, trace and frame-adjusted mixed tensor exact"))
}

fn criterion7() -> Outcome {
    let e = entry("webster-quadric")?;
    let rho = e.map.defining_function();
    let j = RationalFunction::from_poly(fefferman_j(&rho));
    if !j.eq_exact(&e.expected_fefferman.as_ref().unwrap().value) {
        return Err("J differs from rho + 2".into());
    }
    let tf = tracefree_general(&e.map).map_err(|x| x.to_string())?;
    if !tf.iter().flatten().all(|t| rho.zero_on_hypersurface(t)) {
        return Err("tracefree part nonzero".into());
    }
    Ok("J = rho + 2 and tf A = 0 exact (n = 2)".into())
}

/// A seeded Gaussian-rational point with coordinates `k/7`, `|k| ≤ 2`,
/// so `|a|² ≤ 40/49 < 1` in up to five dimensions.
fn random_center(rng: &mut ChaCha8Rng, dim: usize) -> Vec<GaussianRational> {
    loop {
        let a: Vec<GaussianRational> = (0..dim)
            .map(|_| {
                GaussianRational::new(
                    Rational::new(rng.gen_range(-2..=2).into(), 7.into()),
                    Rational::new(rng.gen_range(-2..=2).into(), 7.into()),
                )
            })
            .collect();
        if a.iter().any(|c| !c.is_zero()) {
            return a;
        }
    }
}

fn criterion8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut count = 0;
    for id in ["table1/row2", "table1/row5", "faran-3-9", "whitney:n=2"] {
        let f = entry(id)?.map;
        let base = ahlfors_mixed(&f).map_err(|x| x.to_string())?;
        for _ in 0..5 {
            let phi = BallAutomorphism::new(random_center(&mut rng, f.components.len())).map_err(|x| x.to_string())?;
            let g = compose_target_automorphism(&f, &phi).map_err(|x| format!("{id}: {x}"))?;
            let dg = ahlfors_mixed(&g).map_err(|x| x.to_string())?;
            if !mixed_agree(&base, &dg) {
                return Err(format!("{id}: mixed tensor changed under {:?}", phi.center()));
            }
            count += 1;
        }
    }
    Ok(format!("{count} compositions leave every mixed component unchanged"))
}

fn criterion9() -> Outcome {
    let mut ids = catalog_ids();
    ids.extend(
        ["table1/row14:s=1/2", "table1/row15:s=1/2", "dangelo-family:n=2", "whitney:n=2", "homogeneous:n=2,d=3"]
            .map(String::from),
    );
    let mut worst = f64::INFINITY;
    let mut checked = 0;
    for id in &ids {
        let e = entry(id)?;
        if !e.map.has_sphere_source() {
            continue;
        }
        let d = ahlfors_mixed(&e.map).map_err(|x| x.to_string())?;
        let t = positivity_scan(&d.trace, e.map.source_n, 10_000, DEFAULT_SEED).map_err(|x| x.to_string())?;
        let ii = ii_norm_sq_from(&e.map, &d).map_err(|x| x.to_string())?;
        let s = positivity_scan(&ii, e.map.source_n, 10_000, DEFAULT_SEED).map_err(|x| x.to_string())?;
        if t.min < -1e-9 || s.min < -1e-9 {
            return Err(format!("{id}: trace min {:e}, |II|² min {:e}", t.min, s.min));
        }
        worst = worst.min(t.min).min(s.min);
        checked += 1;
    }
    Ok(format!("{checked} sphere-source maps, smallest value {worst:.2e}"))
}

fn criterion10() -> Outcome {
    let mut worst: f64 = 0.0;
    for id in ["table1/row2", "table1/row4", "table1/row13", "faran-3-9", "whitney:n=2"] {
        let f = entry(id)?.map;
        let q = f.quotient().map_err(|x| x.to_string())?;
        let rho = f.defining_function();
        for p in Sampler::new(DEFAULT_SEED, f.source_n).sample_chart(20) {
            let err = finite_diff_hessian_check(&rho, &q.log_arg, &p, 1e-4).map_err(|x| x.to_string())?;
            worst = worst.max(err);
        }
    }
    if worst < 1e-6 {
        Ok(format!("max error {worst:.2e} over 100 points"))
    } else {
        Err(format!("max error {worst:.2e}"))
    }
}

fn criterion11() -> Outcome {
    let rho = DefiningFunction::sphere(2);
    for src in ["1", "2", "1 + (z + conj(z))/4"] {
        let h: HermitianPoly = parse_expression(src, 2).unwrap().num().clone();
        if !rescale_identity_check(&rho, &h).map_err(|x| x.to_string())? {
            return Err(format!("identity fails for h = {src}"));
        }
    }
    Ok("h = 1, 2, 1 + (z + conj z)/4 exact".into())
}

fn criterion12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED + 12);
    let points = sample_sphere(DEFAULT_SEED, 1, 20);
    let mut worst: f64 = 0.0;
    for id in ["table1/row4", "faran-3-9"] {
        let f = entry(id)?.map;
        for _ in 0..3 {
            let gamma = BallAutomorphism::new(random_center(&mut rng, 2)).map_err(|x| x.to_string())?;
            worst = worst.max(a1_law_residual(&f, &gamma, &points).map_err(|x| x.to_string())?);
        }
    }
    if worst < 1e-8 {
        Ok(format!("max relative error {worst:.2e}"))
    } else {
        Err(format!("max relative error {worst:.2e}"))
    }
}

fn criterion13() -> Outcome {
    let mut bad = Vec::new();
    for k in 1..=16 {
        let f = entry(&format!("table1/row{k}"))?.map;
        let d = ahlfors_mixed(&f).map_err(|x| x.to_string())?;
        let g = monomial_trace_verbatim(&f).map_err(|x| x.to_string())?;
        if !ratfn_eq_on_sphere(&g, &d.trace) {
            let diff = g.sub_ref(&d.trace);
            if k <= 3 {
                println!(
                    "    row {k}: monomial formula gives {}, general path {}",
                    trace_string(&g),
                    trace_string(&d.trace)
                );
                println!("      difference {}", trace_string(&diff));
            }
            bad.push(k);
        }
    }
    if bad.is_empty() {
        Ok("all 16 rows agree".into())
    } else {
        let _ = reduce_mod_sphere;
        Err(format!("verbatim monomial formula disagrees on rows {bad:?}"))
    }
}

fn main() {
    // `cargo test` passes filter arguments; this target runs everything
    let criteria: [(u32, &str, fn() -> Outcome); 13] = [
        (1, "monomial table trace column", || table_column("trace")),
        (2, "monomial table A1 column", || table_column("a1")),
        (3, "monomial table umbilic column", || table_column("umbilic")),
        (4, "Faran map trace and A1", criterion4),
        (5, "cubic map umbilic point and positivity", criterion5),
        (6, "D'Angelo family", criterion6),
        (7, "Webster quadric", criterion7),
        (8, "target automorphism invariance", criterion8),
        (9, "trace and |II|^2 positivity", criterion9),
        (10, "finite-difference oracle", criterion10),
        (11, "rescaling identity", criterion11),
        (12, "A1 transformation law", criterion12),
        (13, "monomial trace formula", criterion13),
    ];
    let _ = Rational::one();
    let mut failed = 0;
    for (k, name, run) in criteria {
        let started = Instant::now();
        let outcome = run();
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("[PASS] criterion {k}: {name} — {msg} ({secs:.1}s)"),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] criterion {k}: {name} — {msg} ({secs:.1}s)");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 13 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
