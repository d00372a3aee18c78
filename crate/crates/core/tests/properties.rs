use hcns_core::algebra::validate;
use hcns_core::ops::{conjug, in_add, in_multi, norma, scalar_mul, unit};
use hcns_core::transforms::{dir_sum2, gen_iso, multi_dim, sys_izo, trans, BasisTransform, ProductMode};
use hcns_core::{AlgebraDef, HNumber, Registry, Scalar, Symbol};
use proptest::prelude::*;
use std::collections::BTreeMap;
use std::sync::OnceLock;

fn get(name: &str) -> AlgebraDef {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(Registry::in_memory).search_hns(name).unwrap().clone()
}

fn rational() -> impl Strategy<Value = Scalar> {
    (-12i64..12, 1i64..5).prop_map(|(n, d)| Scalar::ratio(n, d))
}

/// Up to four terms in `x, y, z`, total degree at most 4.
fn polynomial() -> impl Strategy<Value = Scalar> {
    let term = (-9i64..10, 1i64..4, 0u32..=4, 0u32..=4, 0u32..=4).prop_map(|(n, d, i, j, k)| {
        let (j, k) = (j.min(4 - i), k.min(4 - i - j.min(4 - i)));
        format!("({n}/{d})*x^{i}*y^{j}*z^{k}")
    });
    prop::collection::vec(term, 1..=4).prop_map(|t| t.join(" + ").parse().unwrap())
}

fn number(n: usize) -> impl Strategy<Value = HNumber> {
    prop::collection::vec(rational(), n).prop_map(|c| HNumber::new(c).unwrap())
}

fn triple(n: usize) -> impl Strategy<Value = (HNumber, HNumber, HNumber)> {
    (number(n), number(n), number(n))
}

fn with_params(def: &AlgebraDef, values: &[(&str, i64)]) -> AlgebraDef {
    let b: BTreeMap<Symbol, Scalar> = values.iter().map(|(s, v)| (Symbol::new(s).unwrap(), Scalar::int(*v))).collect();
    let g = def
        .gamma()
        .iter()
        .map(|r| r.iter().map(|c| c.iter().map(|x| x.substitute(&b).unwrap()).collect()).collect())
        .collect();
    AlgebraDef::new(def.name(), vec![], g).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn polynomial_ring_axioms(a in polynomial(), b in polynomial(), c in polynomial()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &a), &Scalar::zero());
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
            prop_assert_eq!(&(&a / &b) + &(&c / &b), &(&a + &c) / &b);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn scalar_field_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a);
        }
    }

    #[test]
    fn bilinearity_in_q4n((a, a2, b) in triple(4), l in rational()) {
        let q = get("Q4N");
        prop_assert_eq!(in_multi(&in_add(&a, &a2).unwrap(), &b, &q).unwrap(),
            in_add(&in_multi(&a, &b, &q).unwrap(), &in_multi(&a2, &b, &q).unwrap()).unwrap());
        prop_assert_eq!(in_multi(&b, &in_add(&a, &a2).unwrap(), &q).unwrap(),
            in_add(&in_multi(&b, &a, &q).unwrap(), &in_multi(&b, &a2, &q).unwrap()).unwrap());
        prop_assert_eq!(in_multi(&scalar_mul(&l, &a).unwrap(), &b, &q).unwrap(),
            scalar_mul(&l, &in_multi(&a, &b, &q).unwrap()).unwrap());
        prop_assert_eq!(in_multi(&a, &scalar_mul(&l, &b).unwrap(), &q).unwrap(),
            scalar_mul(&l, &in_multi(&a, &b, &q).unwrap()).unwrap());
    }

    #[test]
    fn associative_algebras((a, b, c) in triple(4), (x, y, z) in triple(3)) {
        for name in ["H", "Hab"] {
            let h = get(name);
            prop_assert_eq!(in_multi(&in_multi(&a, &b, &h).unwrap(), &c, &h).unwrap(),
                in_multi(&a, &in_multi(&b, &c, &h).unwrap(), &h).unwrap());
        }
        for name in ["T", "RplusC"] {
            let t = get(name);
            prop_assert_eq!(in_multi(&in_multi(&x, &y, &t).unwrap(), &z, &t).unwrap(),
                in_multi(&x, &in_multi(&y, &z, &t).unwrap(), &t).unwrap());
            prop_assert_eq!(in_multi(&x, &y, &t).unwrap(), in_multi(&y, &x, &t).unwrap());
        }
        let q0 = with_params(&get("Q4N"), &[("p", -3), ("q", 0)]);
        prop_assert_eq!(in_multi(&in_multi(&a, &b, &q0).unwrap(), &c, &q0).unwrap(),
            in_multi(&a, &in_multi(&b, &c, &q0).unwrap(), &q0).unwrap());
    }

    #[test]
    fn norm_is_multiplicative((a, b, _) in triple(4)) {
        for name in ["H", "Hab"] {
            let h = get(name);
            let ab = in_multi(&a, &b, &h).unwrap();
            prop_assert_eq!(norma(&ab, &h).unwrap(), &norma(&a, &h).unwrap() * &norma(&b, &h).unwrap());
        }
    }

    #[test]
    fn conjugation_is_an_involution(a in number(4)) {
        let h = get("Hab");
        prop_assert_eq!(conjug(&conjug(&a, &h).unwrap(), &h).unwrap(), a.clone());
        let u = unit(&h).unwrap();
        prop_assert_eq!(in_multi(&a, &u, &h).unwrap(), a.clone());
        prop_assert_eq!(in_multi(&u, &a, &h).unwrap(), a);
    }

    #[test]
    fn direct_sum_decomposes((a, b) in (number(1), number(2)), (c, d) in (number(1), number(2))) {
        let sum = dir_sum2(&get("R"), &get("C"), "S").unwrap();
        let join = |x: &HNumber, y: &HNumber| HNumber::new([x.coeffs(), y.coeffs()].concat()).unwrap();
        let whole = in_multi(&join(&a, &b), &join(&c, &d), &sum).unwrap();
        let parts = join(&in_multi(&a, &c, &get("R")).unwrap(), &in_multi(&b, &d, &get("C")).unwrap());
        prop_assert_eq!(whole, parts);
    }
}

#[test]
fn trans_matches_gen_iso() {
    for name in ["Q4N", "Hab", "T"] {
        let def = get(name);
        let n = def.dim();
        for s in 1..=n {
            for t in 1..=n {
                let swap = BasisTransform::swap(n, s, t).unwrap();
                let swapped = trans(&def, s, t).unwrap();
                assert_eq!(swapped.gamma(), gen_iso(&swap, &def, name).unwrap().gamma());
                assert_eq!(trans(&swapped, s, t).unwrap(), def);
                assert!(sys_izo(&swapped, &def).unwrap().admits(swap.matrix()).unwrap());
            }
        }
    }
}

#[test]
fn q4n_is_not_associative_unless_q_vanishes() {
    let q4n = get("Q4N");
    let bad = q4n.non_associative_triples();
    assert!(!bad.is_empty());
    assert!(bad.contains(&(3, 2, 2)));
    assert!(bad.iter().all(|&(i, _, _)| i >= 3));
    assert_eq!(validate(&q4n).associative(), Some(false));
    assert!(with_params(&q4n, &[("p", 2), ("q", 0)]).is_associative());
    assert!(!with_params(&q4n, &[("p", 2), ("q", 1)]).is_associative());
}

#[test]
fn verdicts_survive_basis_change() {
    let l: Vec<Vec<Scalar>> = [[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, 1, 0], [2, 0, 0, 3]]
        .iter()
        .map(|r| r.iter().map(|&v| Scalar::int(v)).collect())
        .collect();
    let l = BasisTransform::new(l).unwrap();
    for name in ["H", "Hab", "Q4N"] {
        let def = get(name);
        let iso = gen_iso(&l, &def, "Iso").unwrap();
        let (v0, v1) = (validate(&def), validate(&iso));
        assert_eq!(v0.associative(), v1.associative(), "{name}");
        assert_eq!(v0.commutative(), v1.commutative(), "{name}");
        assert!(unit(&iso).is_ok(), "{name}");
    }
}

#[test]
fn doubling_complex_numbers_gives_quaternions() {
    let c = get("C");
    let h = multi_dim(&c, &c, ProductMode::NonCommutative, "H").unwrap();
    assert_eq!(h.gamma(), get("H").gamma());
    let hab = with_params(&get("Hab"), &[("alpha", 1), ("beta", 1)]);
    assert_eq!(h.gamma(), hab.gamma());
}
