//! Canonical string forms, JSON reports and the LaTeX table emitter.
//!
//! Canonical polynomial strings list terms in descending graded-lex order,
//! coefficients as signed `a/b`, `a/b*i`, `a/b*sqrt(m)` atoms, and parse
//! back to the identical polynomial.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algebra::{
    ratfn_eq_on_sphere, reduce_mod_sphere, reduce_ratfn, HermitianPoly, Monomial, RadicalNumber, Rational,
    RationalFunction, UniPoly,
};
use crate::error::Result;
use crate::geometry::fefferman_j;
use crate::invariants::{
    ahlfors_mixed, monomial_obstruction_from, ratfn_in_s, tracefree_general, umbilic_locus_from, AhlforsData,
    EquivalenceVerdict, UmbilicKind,
};
use crate::maps::{CatalogEntry, SphereMap};
use crate::numeric::{finite_diff_hessian_check, positivity_scan, Sampler};

/// Display names of the holomorphic variables for a given variable count.
pub fn var_names(nvars: usize) -> Vec<String> {
    match nvars {
        1 => vec!["z".into()],
        2 => vec!["z".into(), "w".into()],
        _ => (1..=nvars).map(|j| format!("z{j}")).collect(),
    }
}

fn monomial_factors(m: &Monomial, names: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let push = |out: &mut Vec<String>, base: String, e: u16| match e {
        0 => {}
        1 => out.push(base),
        _ => out.push(format!("{base}^{e}")),
    };
    for (j, name) in names.iter().enumerate() {
        push(&mut out, name.clone(), m.holo_exp(j));
    }
    for (j, name) in names.iter().enumerate() {
        push(&mut out, format!("conj({name})"), m.anti_exp(j));
    }
    out
}

/// One signed term; returns (negative, body).
fn term_string(m: &Monomial, c: &RadicalNumber, names: &[String]) -> (bool, String) {
    let factors = monomial_factors(m, names);
    let atoms = c.atoms();
    if atoms.len() == 1 {
        let (neg, a) = &atoms[0];
        if factors.is_empty() {
            return (*neg, a.clone());
        }
        let body = if a == "1" { factors.join("*") } else { format!("{a}*{}", factors.join("*")) };
        return (*neg, body);
    }
    // several atoms: parenthesize the coefficient, leading sign kept inside
    let mut coeff = String::new();
    for (k, (neg, a)) in atoms.iter().enumerate() {
        match (k, neg) {
            (0, true) => coeff.push_str(&format!("-{a}")),
            (0, false) => coeff.push_str(a),
            (_, true) => coeff.push_str(&format!(" - {a}")),
            (_, false) => coeff.push_str(&format!(" + {a}")),
        }
    }
    if factors.is_empty() {
        (false, format!("({coeff})"))
    } else {
        (false, format!("({coeff})*{}", factors.join("*")))
    }
}

pub fn canonical_poly(p: &HermitianPoly) -> String {
    canonical_poly_named(p, &var_names(p.nvars()))
}

pub fn canonical_poly_named(p: &HermitianPoly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (m, c) in p.terms().rev() {
        let (neg, body) = term_string(m, c, names);
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

/// `num` or `(num)/(den)`; a rational denominator is scaled to coprime
/// integer coefficients.
pub fn canonical_ratfn(f: &RationalFunction) -> String {
    if f.is_polynomial() {
        return canonical_poly(f.num());
    }
    match integer_scale(f.den()) {
        Some(c) => format!(
            "({})/({})",
            canonical_poly(&f.num().scale_rational(&c)),
            canonical_poly(&f.den().scale_rational(&c))
        ),
        None => format!("({})/({})", canonical_poly(f.num()), canonical_poly(f.den())),
    }
}

/// `lcm(denominators)/gcd(numerators)` of the coefficients, if all are rational.
fn integer_scale(p: &HermitianPoly) -> Option<Rational> {
    use num_integer::Integer;
    let mut l = num_bigint::BigInt::from(1);
    let mut g = num_bigint::BigInt::from(0);
    for (_, c) in p.terms() {
        let q = c.as_rational()?;
        l = l.lcm(q.denom());
        g = g.gcd(q.numer());
    }
    if g == num_bigint::BigInt::from(0) {
        return None;
    }
    Some(Rational::new(l, g))
}

fn wrap(x: String) -> String {
    if x.contains(' ') {
        format!("({x})")
    } else {
        x
    }
}

/// `p(s)/q(s)`, or `p(s)` when `q = 1`.
pub fn s_fraction(num: &UniPoly, den: &UniPoly) -> String {
    if *den == UniPoly::one() {
        num.to_string_in("s")
    } else {
        format!("{}/{}", wrap(num.to_string_in("s")), wrap(den.to_string_in("s")))
    }
}

/// `A₁ = z̄ w̄ · p(s)/q(s)` on the 3-sphere, when it has that shape.
pub fn a1_in_s(a1: &RationalFunction) -> Option<(UniPoly, UniPoly)> {
    let num = reduce_mod_sphere(a1.num());
    let zw = Monomial::new(&[0, 0], &[1, 1]);
    if !num.terms().all(|(m, _)| zw.divides(m)) {
        return None;
    }
    let cof = HermitianPoly::from_terms(2, num.terms().map(|(m, c)| (zw.quotient_of(m), c.clone())));
    let f = RationalFunction::new(cof, a1.den().clone()).ok()?;
    ratfn_in_s(&f)
}

/// Trace printed in `s` when it is torus invariant, otherwise in `z, z̄`.
pub fn trace_string(trace: &RationalFunction) -> String {
    match ratfn_in_s(trace) {
        Some((n, d)) => s_fraction(&n, &d),
        None => canonical_ratfn(&reduce_ratfn(trace)),
    }
}

pub fn a1_string(a1: &RationalFunction) -> String {
    if reduce_mod_sphere(a1.num()).is_zero() {
        return "0".into();
    }
    match a1_in_s(a1) {
        Some((n, d)) => {
            let zw = "conj(z)*conj(w)";
            let p = n.to_string_in("s");
            let num = match p.as_str() {
                "1" => zw.to_string(),
                "-1" => format!("-{zw}"),
                _ if !p.contains(' ') => format!("{p}*{zw}"),
                _ => format!("{zw}*({p})"),
            };
            if d == UniPoly::one() {
                num
            } else {
                format!("{num}/{}", wrap(d.to_string_in("s")))
            }
        }
        None => canonical_ratfn(&reduce_ratfn(a1)),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UmbilicReport {
    pub kind: String,
    pub roots: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub moduli_only: bool,
    pub circle_tracefree: bool,
    /// Vacuously true outside CR dimension one.
    pub a1_shape: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChecksReport {
    pub positivity_min: f64,
    pub fd_max_rel_err: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub map: String,
    #[serde(rename = "Q")]
    pub q: String,
    pub trace: String,
    pub tracefree: Vec<Vec<String>>,
    pub a1: Option<String>,
    pub umbilic: UmbilicReport,
    pub obstructions: ObstructionReport,
    pub checks: ChecksReport,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub equivalence: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Numeric settings for the cross-checks embedded in a report.
#[derive(Clone, Copy, Debug)]
pub struct ReportOptions {
    pub seed: u64,
    pub positivity_points: usize,
    pub fd_points: usize,
    pub fd_step: f64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self { seed: crate::numeric::DEFAULT_SEED, positivity_points: 10_000, fd_points: 20, fd_step: 1e-4 }
    }
}

fn matrix_strings(m: &[Vec<RationalFunction>]) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(|x| canonical_ratfn(&reduce_ratfn(x))).collect()).collect()
}

/// Largest finite-difference deviation over `count` chart points.
pub fn fd_max_error(f: &SphereMap, log_arg: &crate::geometry::LogArg, count: usize, seed: u64, h: f64) -> Result<f64> {
    let rho = f.defining_function();
    let mut worst: f64 = 0.0;
    for p in Sampler::new(seed, f.source_n).sample_chart(count) {
        worst = worst.max(finite_diff_hessian_check(&rho, log_arg, &p, h)?);
    }
    Ok(worst)
}

/// Everything the `invariants` command reports for one map.
pub fn build_report(f: &SphereMap, opts: &ReportOptions) -> Result<Report> {
    let q = f.quotient()?;
    let map = if f.params.is_empty() {
        f.name.clone()
    } else {
        format!("{}:{}", f.name, f.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(","))
    };
    if !f.has_sphere_source() {
        let tf = tracefree_general(f)?;
        return Ok(Report {
            map,
            q: canonical_ratfn(&q.as_ratfn()),
            trace: "unavailable for a non-spherical source".into(),
            tracefree: matrix_strings(&tf),
            a1: None,
            umbilic: UmbilicReport { kind: "unknown".into(), roots: Vec::new() },
            obstructions: ObstructionReport { moduli_only: false, circle_tracefree: false, a1_shape: false },
            checks: ChecksReport {
                positivity_min: f64::NAN,
                fd_max_rel_err: fd_max_error(f, &q.log_arg, opts.fd_points, opts.seed, opts.fd_step)?,
            },
            equivalence: Vec::new(),
            timings_ms: None,
        });
    }
    let data = ahlfors_mixed(f)?;
    report_from_data(f, map, &data, opts)
}

pub fn report_from_data(f: &SphereMap, map: String, data: &AhlforsData, opts: &ReportOptions) -> Result<Report> {
    let q = &data.quotient;
    let umbilic = if f.nvars() == 2 {
        let u = umbilic_locus_from(f, data)?;
        UmbilicReport { kind: u.kind.label().into(), roots: u.root_strings() }
    } else {
        UmbilicReport { kind: "unclassified".into(), roots: Vec::new() }
    };
    let o = monomial_obstruction_from(data);
    let pos = positivity_scan(&data.trace, f.source_n, opts.positivity_points, opts.seed)?;
    let fd = fd_max_error(f, &q.log_arg, opts.fd_points, opts.seed, opts.fd_step)?;
    Ok(Report {
        map,
        q: canonical_ratfn(&q.as_ratfn()),
        trace: trace_string(&data.trace),
        tracefree: matrix_strings(&data.tracefree),
        a1: data.a1.as_ref().map(a1_string),
        umbilic,
        obstructions: ObstructionReport {
            moduli_only: o.moduli_only,
            circle_tracefree: o.circle_tracefree,
            a1_shape: o.a1_shape.unwrap_or(true),
        },
        checks: ChecksReport { positivity_min: pos.min, fd_max_rel_err: fd },
        equivalence: Vec::new(),
        timings_ms: None,
    })
}

pub fn verdict_string(a: &str, b: &str, v: &EquivalenceVerdict) -> String {
    match v {
        EquivalenceVerdict::Distinguished { difference, .. } => {
            format!("{a} vs {b}: {v}; difference {}", trace_string(difference))
        }
        EquivalenceVerdict::IndistinguishableByAhlfors => format!("{a} vs {b}: {v}"),
    }
}

// ---------------------------------------------------------------------------
// Golden comparisons

/// One compared column.
#[derive(Clone, Debug)]
pub struct ColumnCheck {
    pub column: &'static str,
    pub matches: bool,
    pub computed: String,
    pub expected: String,
}

#[derive(Clone, Debug)]
pub struct EntryCheck {
    pub id: String,
    pub columns: Vec<ColumnCheck>,
}

impl EntryCheck {
    pub fn all_match(&self) -> bool {
        self.columns.iter().all(|c| c.matches)
    }

    pub fn column(&self, name: &str) -> Option<&ColumnCheck> {
        self.columns.iter().find(|c| c.column == name)
    }
}

fn compare_column(
    column: &'static str,
    computed: &RationalFunction,
    expected: &crate::maps::Golden,
    shown: String,
) -> ColumnCheck {
    ColumnCheck {
        column,
        matches: ratfn_eq_on_sphere(computed, &expected.value),
        computed: shown,
        expected: expected.src.clone(),
    }
}

/// Recomputes every transcribed column of a catalog entry and compares exactly.
pub fn check_entry(e: &CatalogEntry) -> Result<EntryCheck> {
    let mut columns = Vec::new();
    let f = &e.map;
    if let Some(g) = &e.expected_fefferman {
        let j = RationalFunction::from_poly(fefferman_j(&f.defining_function()));
        columns.push(ColumnCheck {
            column: "fefferman",
            matches: j.eq_exact(&g.value),
            computed: canonical_ratfn(&j),
            expected: g.src.clone(),
        });
    }
    if let Some(g) = &e.expected_q {
        let q = f.quotient()?.as_ratfn();
        columns.push(ColumnCheck {
            column: "Q",
            matches: q.eq_exact(&g.value),
            computed: canonical_ratfn(&q),
            expected: g.src.clone(),
        });
    }
    if !f.has_sphere_source() {
        let tf = tracefree_general(f)?;
        let rho = f.defining_function();
        let zero = tf.iter().flatten().all(|t| rho.zero_on_hypersurface(t));
        columns.push(ColumnCheck {
            column: "tracefree",
            matches: zero,
            computed: if zero { "0".into() } else { "nonzero".into() },
            expected: "0".into(),
        });
        return Ok(EntryCheck { id: e.id.clone(), columns });
    }
    let data = ahlfors_mixed(f)?;
    if let Some(g) = &e.expected_trace {
        columns.push(compare_column("trace", &data.trace, g, trace_string(&data.trace)));
    }
    if let (Some(g), Some(a1)) = (&e.expected_a1, &data.a1) {
        columns.push(compare_column("a1", a1, g, a1_string(a1)));
    }
    if let Some(kind) = e.expected_umbilic {
        if f.nvars() == 2 {
            let u = umbilic_locus_from(f, &data)?;
            columns.push(ColumnCheck {
                column: "umbilic",
                matches: u.kind == kind,
                computed: u.kind.to_string(),
                expected: kind.to_string(),
            });
        }
    }
    if let Some(rows) = &e.expected_mixed_tilde {
        let tilde = data.mixed_in_tilde_frame();
        let ok = tilde.iter().zip(rows).all(|(r, g)| r.iter().zip(g).all(|(x, y)| ratfn_eq_on_sphere(x, &y.value)));
        columns.push(ColumnCheck {
            column: "mixed_tilde",
            matches: ok,
            computed: format!("{:?}", matrix_strings(&tilde)),
            expected: format!(
                "{:?}",
                rows.iter().map(|r| r.iter().map(|g| g.src.clone()).collect::<Vec<_>>()).collect::<Vec<_>>()
            ),
        });
    }
    Ok(EntryCheck { id: e.id.clone(), columns })
}

// ---------------------------------------------------------------------------
// LaTeX

/// Rewrites a canonical string (`sqrt(2)*z^2*conj(w)`) into LaTeX.
pub fn latex_from_canonical(src: &str) -> String {
    let mut out = String::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let rest: String = chars[i..].iter().collect();
        if let Some(r) = rest.strip_prefix("sqrt(") {
            let end = r.find(')').unwrap_or(r.len());
            let _ = write!(out, r"\sqrt{{{}}}", &r[..end]);
            i += 5 + end + 1;
        } else if let Some(r) = rest.strip_prefix("conj(") {
            let end = r.find(')').unwrap_or(r.len());
            let _ = write!(out, r"\bar {}", &r[..end]);
            i += 5 + end + 1;
            if !out.ends_with(' ') && chars.get(i).is_some_and(|c| c.is_alphanumeric()) {
                out.push(' ');
            }
        } else if chars[i] == '^' {
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let _ = write!(out, "^{{{}}}", chars[i + 1..j].iter().collect::<String>());
            i = j;
        } else if chars[i] == '*' {
            out.push(' ');
            i += 1;
        } else {
            out.push(chars[i]);
            i += 1;
        }
    }
    out
}

/// Table rows: map components, trace in `s`, `A₁`, umbilic locus.
pub struct LatexRow {
    pub label: String,
    pub components: Vec<String>,
    pub trace: String,
    pub a1: String,
    pub umbilic: Option<UmbilicKind>,
}

pub fn latex_row(label: &str, f: &SphereMap, data: &AhlforsData, umbilic: Option<UmbilicKind>) -> LatexRow {
    LatexRow {
        label: label.to_string(),
        components: f.components.iter().map(canonical_ratfn).collect(),
        trace: trace_string(&data.trace),
        a1: data.a1.as_ref().map(a1_string).unwrap_or_else(|| "--".into()),
        umbilic,
    }
}

pub fn latex_table(rows: &[LatexRow]) -> String {
    let mut out = String::new();
    out.push_str("\\begin{tabular}{|c|c|c|c|c|}\n\\hline\n");
    out.push_str("No. & Map & $\\operatorname{trace}\\mathcal{A}$ & $\\mathcal{A}_1$ & Umbilic \\\\ \\hline\n");
    for r in rows {
        let comps = r.components.iter().map(|c| latex_from_canonical(c)).collect::<Vec<_>>().join(", ");
        let _ = writeln!(
            out,
            "{} & $({})$ & ${}$ & ${}$ & {} \\\\ \\hline",
            r.label,
            comps,
            latex_from_canonical(&r.trace),
            latex_from_canonical(&r.a1),
            r.umbilic.map(|k| k.latex()).unwrap_or("--"),
        );
    }
    out.push_str("\\end{tabular}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expression;
    #[test]
    fn s_strings_for_table_rows() {
        let e = crate::maps::catalog("table1/row2").unwrap();
        let d = ahlfors_mixed(&e.map).unwrap();
        assert_eq!(trace_string(&d.trace), "s/(s^2 - 4*s + 4)");
        assert_eq!(a1_string(d.a1.as_ref().unwrap()), "-4*conj(z)*conj(w)/(s^3 - 6*s^2 + 12*s - 8)");
    }

    #[test]
    fn entry_check_row3() {
        let c = check_entry(&crate::maps::catalog("table1/row3").unwrap()).unwrap();
        assert!(c.all_match(), "{c:?}");
        assert_eq!(c.columns.len(), 3);
    }

    #[test]
    fn json_schema_fields() {
        let f = crate::maps::catalog("table1/row2").unwrap().map;
        let opts = ReportOptions { positivity_points: 200, fd_points: 3, ..Default::default() };
        let r = build_report(&f, &opts).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for k in ["map", "Q", "trace", "tracefree", "a1", "umbilic", "obstructions", "checks"] {
            assert!(v.get(k).is_some(), "{k}");
        }
        assert_eq!(v["umbilic"]["kind"], "S2");
        assert_eq!(v["umbilic"]["roots"][0], "s = 0");
        assert!(v["checks"]["fd_max_rel_err"].as_f64().unwrap() < 1e-6);
        // same inputs, same bytes
        assert_eq!(r.to_json(), build_report(&f, &opts).unwrap().to_json());
    }

    #[test]
    fn latex_rewrites() {
        assert_eq!(latex_from_canonical("sqrt(2)*z*w"), r"\sqrt{2} z w");
        assert_eq!(latex_from_canonical("z^2*conj(w)^3"), r"z^{2} \bar w^{3}");
        let rows = [LatexRow {
            label: "1".into(),
            components: vec!["z".into(), "w".into()],
            trace: "0".into(),
            a1: "0".into(),
            umbilic: Some(UmbilicKind::WholeSphere),
        }];
        let t = latex_table(&rows);
        assert!(t.contains(r"1 & $(z, w)$ & $0$ & $0$ & $\mathbb{S}^3$"));
    }

    #[test]
    fn prints_and_reparses() {
        for src in
            ["z*conj(z) + w*conj(w) - 1", "sqrt(2)*z*w - 3/4*i*conj(w)^2", "(1 + sqrt(3))*z - (2 - i)*w", "0", "-z"]
        {
            let p = parse_expression(src, 2).unwrap();
            let printed = canonical_ratfn(&p);
            let back = parse_expression(&printed, 2).unwrap();
            assert!(p.eq_exact(&back), "{src} -> {printed}");
        }
    }

    #[test]
    fn canonical_order_is_deterministic() {
        let a = parse_expression("w + z + 1", 2).unwrap();
        let b = parse_expression("1 + z + w", 2).unwrap();
        assert_eq!(canonical_ratfn(&a), canonical_ratfn(&b));
        assert_eq!(canonical_ratfn(&a), "z + w + 1");
    }
}
