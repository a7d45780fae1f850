use cr_ahlfors::algebra::{reduce_mod_sphere, sturm_roots_unit_interval, UniPoly};
use cr_ahlfors::parse::parse_expression;
use cr_ahlfors::report::canonical_poly;
use cr_ahlfors::{rat, GaussianRational, HermitianPoly, Monomial, RadicalNumber, Rational};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = RadicalNumber> {
    (-4i64..=4, 1i64..=3, -2i64..=2, prop::sample::select(vec![1u64, 2, 3, 6])).prop_map(|(re, d, im, m)| {
        let q = GaussianRational::new(rat(re, d), rat(im, 3));
        if m == 1 {
            RadicalNumber::from_gaussian(q)
        } else {
            RadicalNumber::sqrt_term(q, m)
        }
    })
}

fn poly(max_terms: usize) -> impl Strategy<Value = HermitianPoly> {
    prop::collection::vec((prop::array::uniform4(0u16..=2), coeff()), 0..=max_terms).prop_map(|terms| {
        HermitianPoly::from_terms(2, terms.into_iter().map(|(e, c)| (Monomial::new(&e[..2], &e[2..]), c)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conj_is_an_involution(p in poly(6)) {
        prop_assert_eq!(p.conj().conj(), p);
    }

    #[test]
    fn norm_is_real(p in poly(4)) {
        let n = &p * &p.conj();
        prop_assert!(n.is_real());
    }

    #[test]
    fn normal_form_idempotent(p in poly(6)) {
        let r = reduce_mod_sphere(&p);
        prop_assert_eq!(reduce_mod_sphere(&r), r);
    }

    #[test]
    fn normal_form_homomorphism(p in poly(4), q in poly(4)) {
        let nf = reduce_mod_sphere;
        prop_assert_eq!(nf(&(&p + &q)), nf(&(&nf(&p) + &nf(&q))));
        prop_assert_eq!(nf(&(&p * &q)), nf(&(&nf(&p) * &nf(&q))));
    }

    #[test]
    fn exact_divide_round_trip(q in poly(4), d in poly(3)) {
        prop_assume!(!d.is_zero());
        let prod = &q * &d;
        prop_assert_eq!(prod.exact_divide(&d).unwrap(), q);
    }

    #[test]
    fn print_parse_round_trip(p in poly(6)) {
        let s = canonical_poly(&p);
        let back = parse_expression(&s, 2).unwrap();
        prop_assert!(back.is_polynomial());
        prop_assert_eq!(back.num(), &p, "{}", s);
    }

    #[test]
    fn sphere_relation_reduces_to_zero(p in poly(4)) {
        let rho = HermitianPoly::sphere_rho(2);
        prop_assert!(reduce_mod_sphere(&(&p * &rho)).is_zero());
    }
}

/// Distinct roots in `[0, 1]` seen by dense sampling: sign changes on a
/// grid plus exact zeros at the endpoints.
fn sampled_root_count(p: &UniPoly, n: usize) -> usize {
    let sf = p.squarefree_part();
    let mut count = 0;
    if sf.eval(&Rational::zero()).is_zero() {
        count += 1;
    }
    if sf.eval(&rat(1, 1)).is_zero() {
        count += 1;
    }
    let mut prev = sf.eval_f64(1.0 / n as f64).signum();
    for i in 2..n {
        let v = sf.eval_f64(i as f64 / n as f64).signum();
        if v != 0.0 && prev != 0.0 && v != prev {
            count += 1;
        }
        if v != 0.0 {
            prev = v;
        }
    }
    count
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    /// Products of distinct linear factors `s − k/7`, a definite quadratic
    /// and repeated factors, so roots are well separated from each other.
    #[test]
    fn sturm_matches_sampling(
        ks in prop::collection::btree_set(-3i64..=10, 0..=5),
        quad in prop::option::of((-3i64..=3, 1i64..=4)),
        repeat in prop::option::of(-3i64..=10),
        lead in prop::sample::select(vec![-3i64, -1, 1, 2]),
    ) {
        let mut p = UniPoly::constant(rat(lead, 1));
        for k in &ks {
            p = p.mul(&UniPoly::new(vec![rat(-k, 7), rat(1, 1)]));
        }
        if let Some((b, c)) = quad {
            // s² + b s + c with b² < 4c
            let c = c * c + b * b;
            p = p.mul(&UniPoly::new(vec![rat(c, 1), rat(b, 1), rat(1, 1)]));
        }
        if let Some(k) = repeat {
            let f = UniPoly::new(vec![rat(-k, 7), rat(1, 1)]);
            p = p.mul(&f).mul(&f);
        }
        prop_assume!(p.degree().unwrap_or(0) <= 8);
        let sturm = sturm_roots_unit_interval(&p);
        prop_assert_eq!(sturm.count(), sampled_root_count(&p, 10_000));
        for r in &sturm.interior {
            prop_assert!(r.lo < r.hi);
            prop_assert!(!r.lo.is_negative());
        }
    }
}
