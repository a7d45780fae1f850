//! Normal forms modulo the sphere ideal `(Σ z_j z̄_j − 1)`.
//!
//! The last variable `w = z_m` is ordered highest, so the leading monomial of
//! `ρ` is `w w̄` and the single rewrite rule `w w̄ → 1 − Σ_{j<m} z_j z̄_j`
//! is confluent. A normal form never contains `w` and `w̄` together.

use std::collections::HashMap;

use super::poly::{add_into, HermitianPoly, Monomial};
use super::ratfn::RationalFunction;

/// Canonical representative of `p` modulo the sphere ideal.
pub fn reduce_mod_sphere(p: &HermitianPoly) -> HermitianPoly {
    let nvars = p.nvars();
    let w = nvars - 1;
    let max_k = p.terms().map(|(m, _)| m.holo_exp(w).min(m.anti_exp(w))).max().unwrap_or(0);
    if max_k == 0 {
        return p.clone();
    }
    // powers of 1 − Σ_{j<w} z_j z̄_j
    let base = &HermitianPoly::one(nvars) - &HermitianPoly::norm_sq(w).extend_vars(nvars);
    let mut powers = vec![HermitianPoly::one(nvars)];
    for k in 1..=max_k as usize {
        let next = &powers[k - 1] * &base;
        powers.push(next);
    }
    let mut acc: HashMap<Monomial, _> = HashMap::new();
    for (m, c) in p.terms() {
        let k = m.holo_exp(w).min(m.anti_exp(w));
        if k == 0 {
            add_into(&mut acc, m.clone(), c.clone());
            continue;
        }
        let mut rest = m.clone();
        rest.set_holo(w, m.holo_exp(w) - k);
        rest.set_anti(w, m.anti_exp(w) - k);
        for (bm, bc) in powers[k as usize].terms() {
            add_into(&mut acc, bm.mul(&rest), bc.mul_ref(c));
        }
    }
    HermitianPoly::from_terms(nvars, acc)
}

/// `f = g` as functions on the sphere.
pub fn ratfn_eq_on_sphere(f: &RationalFunction, g: &RationalFunction) -> bool {
    let lhs = &reduce_mod_sphere(f.num()) * &reduce_mod_sphere(g.den());
    let rhs = &reduce_mod_sphere(g.num()) * &reduce_mod_sphere(f.den());
    reduce_mod_sphere(&(&lhs - &rhs)).is_zero()
}

pub fn ratfn_zero_on_sphere(f: &RationalFunction) -> bool {
    reduce_mod_sphere(f.num()).is_zero()
}

/// Numerator and denominator replaced by their normal forms.
pub fn reduce_ratfn(f: &RationalFunction) -> RationalFunction {
    f.map_parts(reduce_mod_sphere)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zw() -> (HermitianPoly, HermitianPoly, HermitianPoly, HermitianPoly) {
        (
            HermitianPoly::var(2, 0),
            HermitianPoly::var(2, 1),
            HermitianPoly::conj_var(2, 0),
            HermitianPoly::conj_var(2, 1),
        )
    }

    #[test]
    fn rho_plus_one_reduces_to_one() {
        assert_eq!(reduce_mod_sphere(&HermitianPoly::norm_sq(2)), HermitianPoly::one(2));
    }

    #[test]
    fn one_step_rewrite() {
        let (z, w, zb, wb) = zw();
        let p = &(&w * &wb) * &z;
        assert_eq!(reduce_mod_sphere(&p), &z - &(&(&z * &z) * &zb));
    }

    #[test]
    fn squared_rewrite() {
        let (z, w, zb, wb) = zw();
        let ww = &w * &wb;
        let zz = &z * &zb;
        let expected = &(&HermitianPoly::one(2) - &zz.scale_rational(&crate::algebra::rat(2, 1))) + &(&zz * &zz);
        assert_eq!(reduce_mod_sphere(&(&ww * &ww)), expected);
    }

    #[test]
    fn equality_on_sphere() {
        let (z, w, zb, wb) = zw();
        let f = RationalFunction::from_poly(&HermitianPoly::one(2) + &(&w * &wb));
        let g = RationalFunction::from_poly(&HermitianPoly::from_int(2, 2) - &(&z * &zb));
        assert!(ratfn_eq_on_sphere(&f, &g));
        let a = RationalFunction::from_poly(&z * &zb);
        let b = RationalFunction::from_poly(&w * &wb);
        assert!(!ratfn_eq_on_sphere(&a, &b));
    }
}
