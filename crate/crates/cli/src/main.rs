mod document;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use cr_ahlfors::invariants::{a1_law_residual, ahlfors_mixed, equivalence_test, mixed_agree, umbilic_locus_from};
use cr_ahlfors::maps::{catalog, catalog_ids, compose_target_automorphism, BallAutomorphism, CatalogEntry, SphereMap};
use cr_ahlfors::numeric::{positivity_scan, Sampler, DEFAULT_SEED};
use cr_ahlfors::report::{
    canonical_poly, canonical_ratfn, check_entry, fd_max_error, latex_row, latex_table, report_from_data,
    verdict_string, EntryCheck, Report, ReportOptions,
};
use cr_ahlfors::{rat, GaussianRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use document::{DocumentError, MapDocument};

const EXIT_FAILURE: u8 = 1;
const EXIT_UNKNOWN_ID: u8 = 3;
const EXIT_PARSE: u8 = 4;
const EXIT_NOT_SPHERE_MAP: u8 = 5;
const EXIT_GOLDEN_DISPUTE: u8 = 6;

#[derive(Parser)]
#[command(name = "cr-ahlfors", version, about = "Exact CR Ahlfors invariants of sphere maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify that a map document sends the sphere into the sphere
    Check { file: PathBuf },
    /// Full invariants of a catalog id or map document
    Invariants {
        map: String,
        #[arg(long, value_name = "OUT")]
        json: Option<PathBuf>,
        #[arg(long, value_name = "OUT")]
        latex: Option<PathBuf>,
    },
    /// Try to tell two maps apart by their Ahlfors invariants
    Equiv { a: String, b: String },
    /// Recompute the monomial table and diff it against the transcribed columns
    Table1 {
        /// `3`, `2..5`, or a comma list such as `1,4,13`
        #[arg(long, default_value = "1..16")]
        rows: String,
        #[arg(long, value_name = "OUT")]
        latex: Option<PathBuf>,
    },
    /// Floating-point cross-checks: finite differences, positivity, invariance
    Oracle {
        map: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, default_value_t = 10_000)]
        scan: usize,
    },
    /// List catalog ids
    Catalog,
}

/// Failures whose exit code is fixed by the command rather than the cause.
#[derive(Debug, thiserror::Error)]
enum Outcome {
    #[error("{0}")]
    GoldenDispute(String),
    #[error("{0}")]
    NotASphereMap(String),
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use cr_ahlfors::Error as E;
    for cause in err.chain() {
        if let Some(o) = cause.downcast_ref::<Outcome>() {
            return match o {
                Outcome::GoldenDispute(_) => EXIT_GOLDEN_DISPUTE,
                Outcome::NotASphereMap(_) => EXIT_NOT_SPHERE_MAP,
            };
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::UnknownId(_) | E::InvalidParameter(_) => EXIT_UNKNOWN_ID,
                E::Parse(_) => EXIT_PARSE,
                E::NotASphereMap { .. } => EXIT_NOT_SPHERE_MAP,
                _ => EXIT_FAILURE,
            };
        }
        if let Some(e) = cause.downcast_ref::<DocumentError>() {
            return match e {
                DocumentError::Io { .. } => EXIT_FAILURE,
                _ => EXIT_PARSE,
            };
        }
    }
    EXIT_FAILURE
}

fn seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("CR_AHLFORS_SEED") {
        Ok(v) => v.trim().parse().with_context(|| format!("CR_AHLFORS_SEED=`{v}` is not an integer")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// A path to an existing file is a map document; anything else a catalog id.
fn resolve(arg: &str) -> Result<(SphereMap, Option<CatalogEntry>)> {
    let path = Path::new(arg);
    if path.is_file() {
        let doc = MapDocument::load(path)?;
        return Ok((doc.to_map()?, None));
    }
    let e = catalog(arg)?;
    Ok((e.map.clone(), Some(e)))
}

fn cmd_check(file: &Path) -> Result<()> {
    let doc = MapDocument::load(file)?;
    let f = doc.to_map_unchecked()?;
    if let Some(r) = f.sphere_remainder() {
        println!("{}: NOT a sphere map", f.name);
        println!("remainder of ‖F‖² − 1 mod the sphere: {}", canonical_poly(&r));
        return Err(Outcome::NotASphereMap(format!("{} is not a sphere map", f.name)).into());
    }
    let q = f.quotient()?;
    println!("{}: sphere map S^{} → S^{}", f.name, 2 * f.source_n + 1, 2 * f.target_n + 1);
    println!("Q = {}", canonical_ratfn(&q.as_ratfn()));
    Ok(())
}

fn print_report(r: &Report) {
    println!("map:        {}", r.map);
    println!("Q:          {}", r.q);
    println!("trace:      {}", r.trace);
    if let Some(a1) = &r.a1 {
        println!("A1:         {a1}");
    } else {
        println!("tracefree:  {:?}", r.tracefree);
    }
    if r.umbilic.roots.is_empty() {
        println!("umbilic:    {}", r.umbilic.kind);
    } else {
        println!("umbilic:    {} (roots {})", r.umbilic.kind, r.umbilic.roots.join(", "));
    }
    let o = &r.obstructions;
    println!(
        "monomial obstructions: moduli_only={} circle_tracefree={} a1_shape={}",
        o.moduli_only, o.circle_tracefree, o.a1_shape
    );
    println!(
        "checks:     positivity_min={:.3e} fd_max_rel_err={:.3e}",
        r.checks.positivity_min, r.checks.fd_max_rel_err
    );
}

fn cmd_invariants(arg: &str, json: Option<&Path>, latex: Option<&Path>) -> Result<()> {
    let (f, entry) = resolve(arg)?;
    let opts = ReportOptions { seed: seed(None)?, ..Default::default() };
    let mut timings = BTreeMap::new();
    let t = Instant::now();
    let report = if f.has_sphere_source() {
        let data = ahlfors_mixed(&f)?;
        timings.insert("ahlfors".to_string(), t.elapsed().as_millis() as u64);
        let t = Instant::now();
        let mut r = report_from_data(&f, arg.to_string(), &data, &opts)?;
        timings.insert("report".to_string(), t.elapsed().as_millis() as u64);
        if let Some(path) = latex {
            let umbilic = if f.nvars() == 2 { Some(umbilic_locus_from(&f, &data)?.kind) } else { None };
            let row = latex_row(arg, &f, &data, umbilic);
            std::fs::write(path, latex_table(&[row])).with_context(|| format!("writing {}", path.display()))?;
        }
        r.timings_ms = Some(timings);
        r
    } else {
        if latex.is_some() {
            bail!("--latex needs a map from the standard sphere");
        }
        let mut r = cr_ahlfors::report::build_report(&f, &opts)?;
        r.map = arg.to_string();
        timings.insert("report".to_string(), t.elapsed().as_millis() as u64);
        r.timings_ms = Some(timings);
        r
    };
    print_report(&report);
    if let Some(e) = entry {
        let check = check_entry(&e)?;
        print_golden(&check);
    }
    if let Some(path) = json {
        // timings vary between runs; keep the file reproducible
        let stable = Report { timings_ms: None, ..report.clone() };
        std::fs::write(path, stable.to_json() + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn print_golden(check: &EntryCheck) {
    for c in &check.columns {
        if c.matches {
            log::info!("{} {}: matches", check.id, c.column);
        } else {
            println!("golden-data dispute in {} column `{}`:", check.id, c.column);
            println!("  computed: {}", c.computed);
            println!("  printed:  {}", c.expected);
        }
    }
}

fn cmd_equiv(a: &str, b: &str) -> Result<()> {
    let (f, _) = resolve(a)?;
    let (g, _) = resolve(b)?;
    let v = equivalence_test(&f, &g)?;
    println!("{}", verdict_string(a, b, &v));
    Ok(())
}

fn parse_rows(spec: &str) -> Result<Vec<usize>> {
    let mut rows = Vec::new();
    for part in spec.split(',').map(str::trim) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: usize = lo.trim().parse().with_context(|| format!("bad row range `{part}`"))?;
            let hi: usize =
                hi.trim().trim_start_matches('=').parse().with_context(|| format!("bad row range `{part}`"))?;
            rows.extend(lo..=hi);
        } else {
            rows.push(part.parse().with_context(|| format!("bad row `{part}`"))?);
        }
    }
    if let Some(r) = rows.iter().find(|r| !(1..=16).contains(*r)) {
        return Err(cr_ahlfors::Error::UnknownId(format!("table1/row{r}")).into());
    }
    rows.dedup();
    Ok(rows)
}

fn cmd_table1(rows: &str, latex: Option<&Path>) -> Result<()> {
    let rows = parse_rows(rows)?;
    let start = Instant::now();
    let results: Vec<Result<(EntryCheck, CatalogEntry, f64)>> = rows
        .par_iter()
        .map(|k| {
            let t = Instant::now();
            let e = catalog(&format!("table1/row{k}"))?;
            let check = check_entry(&e)?;
            Ok((check, e, t.elapsed().as_secs_f64()))
        })
        .collect();
    let mut matched = 0;
    let mut disputes = Vec::new();
    let mut latex_rows = Vec::new();
    for (k, res) in rows.iter().zip(results) {
        let (check, e, secs) = res?;
        let ok = check.all_match();
        println!("row {k:>2}: {} ({secs:.2}s)", if ok { "match" } else { "MISMATCH" });
        if ok {
            matched += 1;
        } else {
            print_golden(&check);
            disputes.push(*k);
        }
        if latex.is_some() {
            let data = ahlfors_mixed(&e.map)?;
            let kind = umbilic_locus_from(&e.map, &data)?.kind;
            latex_rows.push(latex_row(&k.to_string(), &e.map, &data, Some(kind)));
        }
    }
    println!("{matched}/{} rows matched in {:.2}s", rows.len(), start.elapsed().as_secs_f64());
    if let Some(path) = latex {
        std::fs::write(path, latex_table(&latex_rows)).with_context(|| format!("writing {}", path.display()))?;
    }
    if !disputes.is_empty() {
        let list = disputes.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(", ");
        return Err(Outcome::GoldenDispute(format!("golden-data dispute in rows {list}")).into());
    }
    Ok(())
}

fn random_center(rng: &mut ChaCha8Rng, dim: usize) -> GaussianRational {
    // coordinates k/(7·dim) keep the center well inside the ball
    let d = 7 * dim as i64;
    GaussianRational::new(rat(rng.gen_range(-2..=2), d), rat(rng.gen_range(-2..=2), d))
}

fn cmd_oracle(arg: &str, seed_flag: Option<u64>, points: usize, scan: usize) -> Result<()> {
    let seed = seed(seed_flag)?;
    let (f, _) = resolve(arg)?;
    let q = f.quotient()?;
    println!("map {arg}, seed {seed}");
    let fd = fd_max_error(&f, &q.log_arg, points, seed, 1e-4)?;
    println!("finite-difference Hessian: max rel err {fd:.3e} over {points} points (h = 1e-4)");
    if !f.has_sphere_source() {
        return Ok(());
    }
    let data = ahlfors_mixed(&f)?;
    let pos = positivity_scan(&data.trace, f.source_n, scan, seed)?;
    let at: Vec<String> = pos.argmin.coords.iter().map(|c| format!("{:.4}{:+.4}i", c.re, c.im)).collect();
    println!("positivity: min trace {:.3e} at ({}) over {scan} points", pos.min, at.join(", "));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target_dim = f.target_n + 1;
    let phi = BallAutomorphism::new((0..target_dim).map(|_| random_center(&mut rng, target_dim)).collect())?;
    let moved = ahlfors_mixed(&compose_target_automorphism(&f, &phi)?)?;
    println!("target automorphism invariance: {}", if mixed_agree(&data, &moved) { "exact" } else { "FAILED" });

    if f.nvars() == 2 {
        let gamma = BallAutomorphism::new((0..2).map(|_| random_center(&mut rng, 2)).collect())?;
        let pts = Sampler::new(seed, 1).sample(points);
        let res = a1_law_residual(&f, &gamma, &pts)?;
        println!("A1 transformation law: max rel err {res:.3e} over {points} points");
    }
    Ok(())
}

fn cmd_catalog() {
    for id in catalog_ids() {
        let note = match catalog(&id) {
            Ok(e) => format!("S^{} → S^{}", 2 * e.map.source_n + 1, 2 * e.map.target_n + 1),
            Err(err) => format!("unavailable: {err}"),
        };
        println!("{id:<22} {note}");
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Check { file } => cmd_check(&file),
        Command::Invariants { map, json, latex } => cmd_invariants(&map, json.as_deref(), latex.as_deref()),
        Command::Equiv { a, b } => cmd_equiv(&a, &b),
        Command::Table1 { rows, latex } => cmd_table1(&rows, latex.as_deref()),
        Command::Oracle { map, seed, points, scan } => cmd_oracle(&map, seed, points, scan),
        Command::Catalog => {
            cmd_catalog();
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_specs() {
        assert_eq!(parse_rows("1..16").unwrap().len(), 16);
        assert_eq!(parse_rows("2..=4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_rows("1, 4,13").unwrap(), vec![1, 4, 13]);
        assert!(parse_rows("0").is_err());
        assert!(parse_rows("x").is_err());
    }

    #[test]
    fn exit_codes_by_cause() {
        let unknown: anyhow::Error = cr_ahlfors::Error::UnknownId("x".into()).into();
        assert_eq!(exit_code(&unknown), EXIT_UNKNOWN_ID);
        let dispute: anyhow::Error = Outcome::GoldenDispute("row 6".into()).into();
        assert_eq!(exit_code(&dispute.context("table1")), EXIT_GOLDEN_DISPUTE);
        assert_eq!(exit_code(&anyhow::anyhow!("other")), EXIT_FAILURE);
    }
}
