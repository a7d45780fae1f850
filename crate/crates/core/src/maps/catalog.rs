use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::sphere_map::SphereMap;
use crate::algebra::{HermitianPoly, RadicalNumber, Rational, RationalFunction};
use crate::error::{Error, Result};
use crate::geometry::DefiningFunction;
use crate::invariants::UmbilicKind;
use crate::parse::{parse_expression, ParseContext};

/// A transcribed expected value: the source text and its parsed form.
#[derive(Clone, Debug)]
pub struct Golden {
    pub src: String,
    pub value: RationalFunction,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub map: SphereMap,
    pub expected_q: Option<Golden>,
    pub expected_trace: Option<Golden>,
    /// Numerator only, when the reference gives the trace up to an
    /// unspecified positive denominator.
    pub expected_trace_numerator: Option<Golden>,
    pub expected_a1: Option<Golden>,
    pub expected_umbilic: Option<UmbilicKind>,
    /// Mixed components in the frame `w̄∂_α − z̄_α∂_w`, indexed `[α][β]`.
    pub expected_mixed_tilde: Option<Vec<Vec<Golden>>>,
    /// Fefferman determinant of the source defining function.
    pub expected_fefferman: Option<Golden>,
}

impl CatalogEntry {
    fn new(id: String, map: SphereMap) -> Self {
        Self {
            id,
            map,
            expected_q: None,
            expected_trace: None,
            expected_trace_numerator: None,
            expected_a1: None,
            expected_umbilic: None,
            expected_mixed_tilde: None,
            expected_fefferman: None,
        }
    }
}

struct Row {
    comps: &'static [&'static str],
    trace: &'static str,
    a1: &'static str,
    umbilic: UmbilicKind,
}

use UmbilicKind::*;

/// Transcribed table of monomial maps `S³ → S⁷`; `s = |z|²`, `zb = z̄`, `wb = w̄`.
const TABLE1: [Row; 16] = [
    Row { comps: &["z", "w", "0", "0"], trace: "0", a1: "0", umbilic: WholeSphere },
    Row { comps: &["z", "z*w", "w^2", "0"], trace: "s/(s-2)^2", a1: "-4*zb*wb/(s-2)^3", umbilic: CircleS2 },
    Row { comps: &["z^2", "sqrt(2)*z*w", "w^2", "0"], trace: "1/2", a1: "0", umbilic: Empty },
    Row {
        comps: &["z^3", "sqrt(3)*z*w", "w^3", "0"],
        trace: "-3*s*(s-1)/(s^2-s+1)^2",
        a1: "2*zb*wb*(s-2)*(s+1)*(2*s-1)/(s^2-s+1)^3",
        umbilic: UnionS1S2,
    },
    Row { comps: &["z^3", "sqrt(3)*z^2*w", "sqrt(3)*z*w^2", "w^3"], trace: "1", a1: "0", umbilic: Empty },
    Row {
        comps: &["z^3", "z^2*w", "z*w", "w"],
        trace: "(1-s)*(s^2+4*s+1)/(s^2+s+1)^2",
        a1: "-18*zb*wb*s*(s+1)/(s^2+s+1)^3",
        umbilic: CircleS2,
    },
    Row {
        comps: &["z^2", "z^2*w", "z*w^2", "w"],
        trace: "(s^3+4*s^2-5*s+2)/(-s^2+2*s+1)^2",
        a1: "-8*zb*wb*(s^3+3*s-2)/(s^2-2*s-1)^3",
        umbilic: Empty,
    },
    Row {
        comps: &["z^2", "sqrt(2)*z^2*w", "sqrt(2)*z*w^2", "w^2"],
        trace: "(7*s^2-7*s+3)/(2*(-s^2+s+1)^2)",
        a1: "-2*zb*wb*(2*s-1)*(s^2-s+4)/(s^2-s-1)^3",
        umbilic: Empty,
    },
    Row {
        comps: &["z^3", "sqrt(3)*z^2*w", "sqrt(2)*z*w^2", "w^2"],
        trace: "(9*s^2-6*s+6)/(-s^2+2*s+2)^2",
        a1: "-12*zb*wb*(s^3+6*s-4)/(s^2-2*s-2)^3",
        umbilic: Empty,
    },
    Row {
        comps: &["z", "z^2*w", "sqrt(2)*z*w^2", "w^3"],
        trace: "(2*s^2-3*s+3)/(3-2*s)^2",
        a1: "-12*zb*wb/(2*s-3)^3",
        umbilic: Empty,
    },
    Row {
        comps: &["z^4", "z^3*w", "sqrt(3)*z*w", "w^3"],
        trace: "-3*s*(s^4-4*s^3+12*s^2-9)/(s^3+3*s^2-3*s+3)^2",
        a1: "-36*zb*wb*(s^2-2*s-1)*(s^4-2*s^3-6*s+3)/(s^3+3*s^2-3*s+3)^3",
        umbilic: UnionS1S2,
    },
    Row {
        comps: &["z^4", "sqrt(3)*z^2*w", "z*w^3", "w"],
        trace: "-3*(9*s^4-12*s^2+4*s-1)/(3*s^3-3*s^2+3*s+1)^2",
        a1: "36*zb*wb*(s^2+2*s-1)*(3*s^4-6*s^3-2*s+1)/(3*s^3-3*s^2+3*s+1)^3",
        umbilic: CircleS1,
    },
    Row {
        comps: &["z^5", "sqrt(5)*z^3*w", "sqrt(5)*z*w^2", "w^5"],
        trace: "s*(s^6-7*s^5+15*s^4-25*s^3+35*s^2-27*s+9)/(s^4-3*s^3+4*s^2-2*s+1)^2",
        a1: "2*zb*wb*(2*s^9-6*s^8+18*s^7-64*s^6+117*s^5-114*s^4+42*s^3+24*s^2-27*s+6)/(s^4-3*s^3+4*s^2-2*s+1)^3",
        umbilic: CircleS2,
    },
    Row {
        comps: &["z", "t*w", "sqrt(1-t^2)*z*w", "sqrt(1-t^2)*w^2"],
        trace: "-(t^2-1)*s/(t^2*(1-s)+s-2)^2",
        a1: "2*zb*wb*(t^4-3*t^2+2)/((t^2-1)*s-t^2+2)^3",
        umbilic: CircleS2,
    },
    Row {
        comps: &["z^2", "sqrt(1+t^2)*z*w", "t*w^2", "sqrt(1-t^2)*w"],
        trace: "(t^2*(s+1)-s+1)/(t^2*(1-s)+s+1)^2",
        a1: "4*zb*wb*(1-t^4)/((t^2-1)*s-t^2-1)^3",
        umbilic: Empty,
    },
    Row {
        comps: &["z^2", "sqrt(2)*z*w", "z*w^2", "w^3"],
        trace: "(-7*s^2+6*s+3)/(s^2-2*s+3)^2",
        a1: "8*zb*wb*(s^3-9*s+6)/(s^2-2*s+3)^3",
        umbilic: Empty,
    },
];

/// Every stable catalog id (parametric ones at their default parameters).
pub fn catalog_ids() -> Vec<String> {
    let mut ids: Vec<String> = (1..=16).map(|k| format!("table1/row{k}")).collect();
    for id in ["faran-3-9", "cubic-dangelo-1991", "dangelo-family", "webster-quadric", "whitney", "homogeneous"] {
        ids.push(id.into());
    }
    ids
}

/// Splits `"id:key=value,key=value"` into the id and its parameters.
pub fn parse_catalog_id(spec: &str) -> Result<(String, BTreeMap<String, String>)> {
    let (id, rest) = match spec.split_once(':') {
        Some((id, rest)) => (id.trim(), Some(rest)),
        None => (spec.trim(), None),
    };
    let mut params = BTreeMap::new();
    if let Some(rest) = rest {
        for kv in rest.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) =
                kv.split_once('=').ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got `{kv}`")))?;
            params.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    Ok((id.to_string(), params))
}

/// A constant parameter value such as `3/5` or `sqrt(3)/2`.
fn param_value(src: &str) -> Result<RadicalNumber> {
    let f = parse_expression(src, 1)?;
    if !f.is_polynomial() {
        return Err(Error::InvalidParameter(format!("`{src}` is not a constant")));
    }
    let c = f.num().as_constant().ok_or_else(|| Error::InvalidParameter(format!("`{src}` is not a constant")))?;
    if !c.is_real() {
        return Err(Error::InvalidParameter(format!("`{src}` is not real")));
    }
    Ok(c)
}

fn param_usize(params: &BTreeMap<String, String>, key: &str, default: usize, min: usize) -> Result<usize> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => {
            let k: usize = v.parse().map_err(|_| Error::InvalidParameter(format!("{key} = `{v}` is not a count")))?;
            if k < min {
                return Err(Error::InvalidParameter(format!("{key} must be at least {min}")));
            }
            Ok(k)
        }
    }
}

fn check_keys(params: &BTreeMap<String, String>, allowed: &[&str]) -> Result<()> {
    match params.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::InvalidParameter(format!("unknown parameter `{k}`"))),
        None => Ok(()),
    }
}

/// `√(1 − x²)` for a real `x` with `x² ≤ 1` rational.
fn complement(x: &RadicalNumber, name: &str) -> Result<RadicalNumber> {
    let sq = x.mul_ref(x);
    let q = sq.as_rational().ok_or_else(|| Error::InvalidParameter(format!("{name}² must be rational")))?;
    let rest = Rational::one() - q;
    if rest < Rational::zero() {
        return Err(Error::InvalidParameter(format!("1 − {name}² must be nonnegative")));
    }
    Ok(RadicalNumber::sqrt_rational(&rest)?)
}

/// The cosine-like parameter `t` of rows 14–15, given as `t`, `c` (= t) or
/// `s` (t = √(1 − s²)).
fn row_param(params: &BTreeMap<String, String>) -> Result<RadicalNumber> {
    check_keys(params, &["t", "c", "s"])?;
    if params.len() > 1 {
        return Err(Error::InvalidParameter("give only one of t, c, s".into()));
    }
    let t = if let Some(v) = params.get("t").or_else(|| params.get("c")) {
        param_value(v)?
    } else if let Some(v) = params.get("s") {
        complement(&param_value(v)?, "s")?
    } else {
        RadicalNumber::from_rational(crate::algebra::rat(4, 5))
    };
    complement(&t, "t")?;
    Ok(t)
}

fn golden(ctx: &ParseContext, src: &str) -> Result<Golden> {
    Ok(Golden { src: src.to_string(), value: ctx.parse(src)? })
}

/// Context for two-variable golden formulas: `s = z z̄`, `zb`, `wb`.
fn s_context() -> ParseContext {
    let z = HermitianPoly::var(2, 0);
    let s = RationalFunction::from_poly(&z * &z.conj());
    ParseContext::new(2)
        .with_binding("s", s)
        .with_binding("zb", RationalFunction::from_poly(HermitianPoly::conj_var(2, 0)))
        .with_binding("wb", RationalFunction::from_poly(HermitianPoly::conj_var(2, 1)))
}

fn build(name: &str, nvars: usize, ctx: &ParseContext, comps: &[&str]) -> Result<SphereMap> {
    let comps = comps.iter().map(|c| ctx.parse(c).map_err(Error::from)).collect::<Result<Vec<_>>>()?;
    SphereMap::new(name, nvars - 1, comps)
}

fn table1(k: usize, params: &BTreeMap<String, String>) -> Result<CatalogEntry> {
    let row = &TABLE1[k - 1];
    let id = format!("table1/row{k}");
    let mut ctx = s_context();
    let mut shown = BTreeMap::new();
    if k == 14 || k == 15 {
        let t = row_param(params)?;
        shown.insert("t".to_string(), t.to_string());
        ctx = ctx.with_param("t", t);
    } else {
        check_keys(params, &[])?;
    }
    let map = build(&id, 2, &ctx, row.comps)?.with_params(shown);
    let mut e = CatalogEntry::new(id, map);
    e.expected_trace = Some(golden(&ctx, row.trace)?);
    e.expected_a1 = Some(golden(&ctx, row.a1)?);
    e.expected_umbilic = Some(row.umbilic);
    Ok(e)
}

fn faran() -> Result<CatalogEntry> {
    let ctx = ParseContext::new(2);
    let map = build(
        "faran-3-9",
        2,
        &ctx,
        &[
            "sqrt(3)/9*(z^2 + 4*z - 2)",
            "sqrt(6)/9*(z^2 + z + 1)",
            "sqrt(3)/12*w*(3*z + 5)",
            "sqrt(6)/6*w^2",
            "sqrt(13)/12*w*(z - 1)",
        ],
    )?;
    let mut e = CatalogEntry::new("faran-3-9".into(), map);
    e.expected_trace = Some(golden(
        &ctx,
        "(30*z*conj(z) + 24*re(z) + 18)/((z*conj(z))^2 - 16*z*conj(z)*re(z) + 32*re(z^2) + 272*re(z) + 289)",
    )?);
    e.expected_a1 = Some(golden(&ctx, "264*conj(w)*(1 + 4*conj(z) + conj(z)^2)/(17 + 8*re(z) - z*conj(z))^3")?);
    e.expected_umbilic = Some(Empty);
    Ok(e)
}

fn cubic() -> Result<CatalogEntry> {
    let ctx = ParseContext::new(2);
    let map = build(
        "cubic-dangelo-1991",
        2,
        &ctx,
        &["(z^2 - z^2*w)/sqrt(2)", "(z*w - z*w^2)/sqrt(2)", "(z + z*w)/sqrt(2)", "w^2"],
    )?;
    let mut e = CatalogEntry::new("cubic-dangelo-1991".into(), map);
    let ww = "w*conj(w)";
    e.expected_trace_numerator =
        Some(golden(&ctx, &format!("({ww})^3 + 4*({ww})^2 + 2*re(w)*(1 - 3*{ww}) - 5*{ww} + 4"))?);
    e.expected_umbilic = Some(NotMonomialPointSet);
    Ok(e)
}

fn var_names(nvars: usize) -> Vec<String> {
    crate::report::var_names(nvars)
}

fn dangelo(params: &BTreeMap<String, String>) -> Result<CatalogEntry> {
    check_keys(params, &["n", "c", "s"])?;
    let n = param_usize(params, "n", 1, 1)?;
    let (c, s) = match (params.get("c"), params.get("s")) {
        (None, None) => (
            RadicalNumber::from_rational(crate::algebra::rat(4, 5)),
            RadicalNumber::from_rational(crate::algebra::rat(3, 5)),
        ),
        (Some(c), None) => {
            let c = param_value(c)?;
            let s = complement(&c, "c")?;
            (c, s)
        }
        (None, Some(s)) => {
            let s = param_value(s)?;
            let c = complement(&s, "s")?;
            (c, s)
        }
        (Some(c), Some(s)) => {
            let (c, s) = (param_value(c)?, param_value(s)?);
            if c.mul_ref(&c).add_ref(&s.mul_ref(&s)) != RadicalNumber::one() {
                return Err(Error::InvalidParameter("c² + s² must equal 1".into()));
            }
            (c, s)
        }
    };
    let nvars = n + 1;
    let names = var_names(nvars);
    let w = &names[n];
    let mut comps: Vec<String> = names[..n].to_vec();
    comps.push(format!("c*{w}"));
    comps.extend(names[..n].iter().map(|z| format!("s*{z}*{w}")));
    comps.push(format!("s*{w}^2"));
    let ctx = ParseContext::new(nvars).with_param("c", c.clone()).with_param("s", s.clone());
    let refs: Vec<&str> = comps.iter().map(String::as_str).collect();
    let mut shown = BTreeMap::new();
    shown.insert("n".to_string(), n.to_string());
    shown.insert("c".to_string(), c.to_string());
    shown.insert("s".to_string(), s.to_string());
    let map = build("dangelo-family", nvars, &ctx, &refs)?.with_params(shown);
    let mut e = CatalogEntry::new("dangelo-family".into(), map);
    let ww = format!("{w}*conj({w})");
    e.expected_q = Some(golden(&ctx, &format!("1 + s^2*{ww}"))?);
    e.expected_trace = Some(golden(&ctx, &format!("s^2*(1 - {ww})/(1 + s^2*{ww})^2"))?);
    e.expected_mixed_tilde = Some(
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| golden(&ctx, &format!("s^2*conj({})*{}/(1 + s^2*{ww})^2", names[a], names[b])))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?,
    );
    Ok(e)
}

/// `ρ = |z|² + b + b̄ − 1` with `b = ½Σ z_k²`, and `F = (z, b)/(1 − b)`.
fn webster(params: &BTreeMap<String, String>) -> Result<CatalogEntry> {
    check_keys(params, &["n"])?;
    let n = param_usize(params, "n", 2, 1)?;
    let nvars = n + 1;
    let names = var_names(nvars);
    let b = format!("({})/2", names.iter().map(|z| format!("{z}^2")).collect::<Vec<_>>().join(" + "));
    let ctx = ParseContext::new(nvars);
    let rho_src = format!(
        "{} + {b} + conj({b}) - 1",
        names.iter().map(|z| format!("{z}*conj({z})")).collect::<Vec<_>>().join(" + ")
    );
    let rho = DefiningFunction::new(ctx.parse(&rho_src)?.num().clone())?;
    let mut comps: Vec<String> = names.iter().map(|z| format!("{z}/(1 - {b})")).collect();
    comps.push(format!("{b}/(1 - {b})"));
    let comps = comps.iter().map(|c| ctx.parse(c).map_err(Error::from)).collect::<Result<Vec<_>>>()?;
    let mut shown = BTreeMap::new();
    shown.insert("n".to_string(), n.to_string());
    let map = SphereMap::from_hypersurface("webster-quadric", rho, comps)?.with_params(shown);
    let mut e = CatalogEntry::new("webster-quadric".into(), map);
    e.expected_fefferman = Some(golden(&ctx, &format!("{rho_src} + 2"))?);
    Ok(e)
}

fn whitney(params: &BTreeMap<String, String>) -> Result<CatalogEntry> {
    check_keys(params, &["n"])?;
    let n = param_usize(params, "n", 1, 1)?;
    let nvars = n + 1;
    let names = var_names(nvars);
    let w = &names[n];
    let mut comps: Vec<String> = names[..n].to_vec();
    comps.extend(names[..n].iter().map(|z| format!("{z}*{w}")));
    comps.push(format!("{w}^2"));
    let refs: Vec<&str> = comps.iter().map(String::as_str).collect();
    let ctx = ParseContext::new(nvars);
    let mut shown = BTreeMap::new();
    shown.insert("n".to_string(), n.to_string());
    let map = build("whitney", nvars, &ctx, &refs)?.with_params(shown);
    let mut e = CatalogEntry::new("whitney".into(), map);
    let ww = format!("{w}*conj({w})");
    e.expected_q = Some(golden(&ctx, &format!("1 + {ww}"))?);
    if n == 1 {
        e.expected_umbilic = Some(CircleS2);
    }
    Ok(e)
}

/// All exponent vectors of total degree `d` in `m` variables, descending lex.
fn compositions(m: usize, d: u16) -> Vec<Vec<u16>> {
    if m == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in compositions(m - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn multinomial(d: u16, alpha: &[u16]) -> num_bigint::BigInt {
    let fact = |k: u16| (1..=k as u64).fold(num_bigint::BigInt::from(1), |acc, j| acc * j);
    alpha.iter().fold(fact(d), |acc, &a| acc / fact(a))
}

/// `z ↦ (√(d!/α!) z^α)_{|α| = d}`, isometric on the sphere.
fn homogeneous(params: &BTreeMap<String, String>) -> Result<CatalogEntry> {
    check_keys(params, &["n", "d"])?;
    let n = param_usize(params, "n", 1, 1)?;
    let d = param_usize(params, "d", 2, 1)?;
    if d > 12 {
        return Err(Error::InvalidParameter("degree d must be at most 12".into()));
    }
    let nvars = n + 1;
    let comps = compositions(nvars, d as u16)
        .into_iter()
        .map(|alpha| {
            let c = RadicalNumber::sqrt_rational(&Rational::from_integer(multinomial(d as u16, &alpha)))?;
            let mono = crate::algebra::Monomial::new(&alpha, &vec![0; nvars]);
            Ok(RationalFunction::from_poly(HermitianPoly::monomial(mono, c)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut shown = BTreeMap::new();
    shown.insert("n".to_string(), n.to_string());
    shown.insert("d".to_string(), d.to_string());
    let map = SphereMap::new("homogeneous", n, comps)?.with_params(shown);
    let mut e = CatalogEntry::new("homogeneous".into(), map);
    let ctx = ParseContext::new(nvars);
    let norm = var_names(nvars).iter().map(|z| format!("{z}*conj({z})")).collect::<Vec<_>>().join(" + ");
    // (|z|^{2d} − 1)/(|z|² − 1) = Σ_{k<d} |z|^{2k}
    let q = (0..d).map(|k| format!("({norm})^{k}")).collect::<Vec<_>>().join(" + ");
    e.expected_q = Some(golden(&ctx, &q)?);
    if n == 1 {
        e.expected_umbilic = Some(if d == 1 { WholeSphere } else { Empty });
    }
    Ok(e)
}

/// Looks up `id` or `id:key=value,...`.
pub fn catalog(spec: &str) -> Result<CatalogEntry> {
    let (id, params) = parse_catalog_id(spec)?;
    if let Some(k) = id.strip_prefix("table1/row") {
        return match k.parse::<usize>() {
            Ok(k @ 1..=16) => table1(k, &params),
            _ => Err(Error::UnknownId(id)),
        };
    }
    let no_params = |p: &BTreeMap<String, String>| check_keys(p, &[]);
    match id.as_str() {
        "faran-3-9" => no_params(&params).and_then(|_| faran()),
        "cubic-dangelo-1991" => no_params(&params).and_then(|_| cubic()),
        "dangelo-family" => dangelo(&params),
        "webster-quadric" => webster(&params),
        "whitney" => whitney(&params),
        "homogeneous" => homogeneous(&params),
        _ => Err(Error::UnknownId(id)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratfn_eq_on_sphere;

    #[test]
    fn every_id_builds() {
        for id in catalog_ids() {
            let e = catalog(&id).unwrap_or_else(|err| panic!("{id}: {err}"));
            assert!(e.map.is_sphere_map(), "{id}");
        }
    }

    #[test]
    fn row5_components() {
        let e = catalog("table1/row5").unwrap();
        assert_eq!(e.map.components.len(), 4);
        assert_eq!(e.expected_umbilic, Some(Empty));
        assert!(e.expected_trace.unwrap().value.eq_exact(&RationalFunction::one(2)));
    }

    #[test]
    fn row14_pythagorean_and_radical() {
        let e = catalog("table1/row14:t=4/5").unwrap();
        let expected = parse_expression("3/5*z*w", 2).unwrap();
        assert!(e.map.components[2].eq_exact(&expected));
        assert!(e.map.components[1].eq_exact(&parse_expression("4/5*w", 2).unwrap()));
        let r = catalog("table1/row14:t=1/2").unwrap();
        assert!(r.map.is_sphere_map());
        let s = catalog("table1/row15:s=3/5").unwrap();
        assert!(s.map.is_sphere_map());
        for t in ["3/5", "5/13", "8/17", "0", "1"] {
            assert!(catalog(&format!("table1/row15:t={t}")).unwrap().map.is_sphere_map(), "{t}");
        }
        assert!(catalog("table1/row14:t=2").is_err());
    }

    #[test]
    fn whitney_n2() {
        let e = catalog("whitney:n=2").unwrap();
        let names = ["z1", "z2", "z1*z3", "z2*z3", "z3^2"];
        for (c, s) in e.map.components.iter().zip(names) {
            assert!(c.eq_exact(&parse_expression(s, 3).unwrap()));
        }
    }

    #[test]
    fn quotients_match() {
        for id in ["dangelo-family", "dangelo-family:n=2,c=1,s=0", "whitney:n=3", "homogeneous:n=2,d=3"] {
            let e = catalog(id).unwrap();
            let q = e.map.quotient().unwrap().as_ratfn();
            assert!(q.eq_exact(&e.expected_q.unwrap().value), "{id}");
        }
    }

    #[test]
    fn webster_is_a_hypersurface_map() {
        let e = catalog("webster-quadric").unwrap();
        assert!(!e.map.has_sphere_source());
        assert_eq!(e.map.nvars(), 3);
        let q = e.map.quotient().unwrap().as_ratfn();
        // ‖F‖² − 1 = ρ/|1 − b|²
        assert!(q.num().is_one());
    }

    #[test]
    fn bad_ids_and_params() {
        assert!(matches!(catalog("table1/row17"), Err(Error::UnknownId(_))));
        assert!(matches!(catalog("nope"), Err(Error::UnknownId(_))));
        assert!(matches!(catalog("whitney:m=2"), Err(Error::InvalidParameter(_))));
        assert!(matches!(catalog("dangelo-family:c=1/2,s=1/2"), Err(Error::InvalidParameter(_))));
        assert!(matches!(catalog("table1/row3:t=1/2"), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn golden_s_binding() {
        let e = catalog("table1/row2").unwrap();
        let g = e.expected_trace.unwrap().value;
        let direct = parse_expression("z*conj(z)/(z*conj(z) - 2)^2", 2).unwrap();
        assert!(ratfn_eq_on_sphere(&g, &direct));
    }
}
