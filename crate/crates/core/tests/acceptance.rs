//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p hcns-core --test acceptance`.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use hcns_core::algebra::{in_convert_hns_text, parse_gamma_list, viz_hns};
use hcns_core::hcnumber::{convert_a, hns_number, parse_natural, viz_in_a};
use hcns_core::ops::{divis, in_multi, nat_multi, norma, quadratic_residual, rad2, sqrt_eq, ROOT_RESIDUAL};
use hcns_core::registry::{save_file, load_file};
use hcns_core::rotation::{self, example, RotationSpec, Vec3};
use hcns_core::transforms::{dir_sum2, multi_dim, sys_izo, BasisTransform, ProductMode};
use hcns_core::{AlgebraDef, Error, HNumber, NaturalForm, Registry, Scalar, Side, Symbol};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn s(text: &str) -> Scalar {
    text.parse().unwrap()
}

fn registry() -> Registry {
    Registry::in_memory()
}

fn get(name: &str) -> AlgebraDef {
    registry().search_hns(name).unwrap().clone()
}

fn random_rational(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

fn random_exact(rng: &mut ChaCha8Rng, n: usize) -> HNumber {
    HNumber::new((0..n).map(|_| random_rational(rng)).collect()).unwrap()
}

fn random_float(rng: &mut ChaCha8Rng, n: usize, r: f64) -> HNumber {
    HNumber::from_f64(&(0..n).map(|_| rng.gen_range(-r..r)).collect::<Vec<_>>())
}

fn c1_q4n_symbolic_product() -> Outcome {
    let q4n = get("Q4N");
    let (a, _) = hns_number(4, "a", "e").unwrap();
    let (b, _) = hns_number(4, "b", "e").unwrap();
    let reference = HNumber::new(vec![
        s("a_1*b_1 + a_2*b_2*p + a_3*b_3*p - a_4*b_4*p^2"),
        s("a_1*b_2 + a_2*b_1 + a_2*b_2*q + a_3*b_4*p - a_4*b_3*p - a_4*b_4*p*q"),
        s("a_1*b_3 - a_2*b_4*p + a_3*b_1 + a_3*b_3*q + a_4*b_2*p - a_4*b_4*p*q"),
        s("a_1*b_4 - a_2*b_3 - a_2*b_4*q + a_3*b_2 + a_3*b_4*q + a_4*b_1 + a_4*b_2*q - a_4*b_3*q - a_4*b_4*q^2"),
    ])
    .unwrap();
    let start = Instant::now();
    let ab = in_multi(&a, &b, &q4n).unwrap();
    let elapsed = start.elapsed();
    check(elapsed.as_secs_f64() < 1.0, || format!("took {elapsed:?}"))?;
    if ab == reference {
        return Ok(format!("all 4 components equal ({elapsed:?})"));
    }
    let differing: Vec<String> = (0..4)
        .filter(|&k| ab[k] != reference[k])
        .map(|k| (k + 1).to_string())
        .collect();
    let ba = in_multi(&b, &a, &q4n).unwrap();
    Err(format!(
        "components {} differ; computed A*B = {ab}; the expected block equals B*A under the same table: {}",
        differing.join(","),
        ba == reference
    ))
}

fn c2_triplex_and_direct_sum_products() -> Outcome {
    let a = parse_natural("a_1*e1 + a_2*e2 + a_3*e3").unwrap();
    let b = parse_natural("b_1*e1 + b_2*e2 + b_3*e3").unwrap();
    let cases = [
        (
            "T",
            "(a_1*b_1 - 1/2*a_2*b_2 + a_3*b_3)*f1 + (a_1*b_2 + a_2*b_1 - a_2*b_3 - a_3*b_2)*f2 + (a_1*b_3 + 1/2*a_2*b_2 + a_3*b_1)*f3",
        ),
        ("RplusC", "a_1*b_1*f1 + (a_2*b_2 - a_3*b_3)*f2 + (a_2*b_3 + a_3*b_2)*f3"),
    ];
    for (name, expected) in cases {
        let got = nat_multi(&a, &b, &get(name), "f").unwrap();
        let want = parse_natural(expected).unwrap();
        check(got == want, || format!("{name}: got {got}, want {want}"))?;
        check(got.basis() == Some("f"), || format!("{name}: basis {:?}", got.basis()))?;
    }
    Ok("T and RplusC products equal, rendered in f".into())
}

fn c3_hab_list_form() -> Outcome {
    let natural = [
        vec!["e1", "e2", "e3", "e4"],
        vec!["e2", "-alpha*e1", "e4", "-alpha*e3"],
        vec!["e3", "-e4", "-beta*e1", "beta*e2"],
        vec!["e4", "alpha*e3", "-beta*e2", "-alpha*beta*e1"],
    ];
    let list = "[[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]], \
                [[0,1,0,0],[-alpha,0,0,0],[0,0,0,1],[0,0,-alpha,0]], \
                [[0,0,1,0],[0,0,0,-1],[-beta,0,0,0],[0,beta,0,0]], \
                [[0,0,0,1],[0,0,alpha,0],[0,-beta,0,0],[-alpha*beta,0,0,0]]]";
    let def = in_convert_hns_text(&natural, "Hab").unwrap();
    let want = parse_gamma_list(list).unwrap();
    let mut count = 0;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                check(def.constant(i, j, k) == &want[i][j][k], || {
                    format!("gamma[{}][{}][{}] = {}", i + 1, j + 1, k + 1, def.constant(i, j, k))
                })?;
                count += 1;
            }
        }
    }
    check(def.gamma() == get("Hab").gamma(), || "registry Hab differs".into())?;
    Ok(format!("{count} constants equal"))
}

/// Distributes every `a_i e_i * b_j e_j` through the rendered Cayley table.
fn brute_force(a: &HNumber, b: &HNumber, table: &[Vec<NaturalForm>]) -> HNumber {
    let n = a.dim();
    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let w = &a[i] * &b[j];
            for (k, c) in table[i][j].terms() {
                let e = acc.entry(*k).or_insert_with(Scalar::zero);
                *e = &*e + &(&w * c);
            }
        }
    }
    HNumber::new((1..=n).map(|k| acc.remove(&k).unwrap_or_else(Scalar::zero)).collect()).unwrap()
}

fn c4_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let reg = registry();
    let mut total = 0;
    for def in reg.iter() {
        let table: Vec<Vec<NaturalForm>> = viz_hns(def, "e")
            .unwrap()
            .cells
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| if c.is_zero() { NaturalForm::zero() } else { parse_natural(&c.to_string()).unwrap() })
                    .collect()
            })
            .collect();
        for _ in 0..500 {
            let a = random_exact(&mut rng, def.dim());
            let b = random_exact(&mut rng, def.dim());
            let engine = in_multi(&a, &b, def).unwrap();
            let oracle = brute_force(&a, &b, &table);
            check(engine == oracle, || format!("{}: {a} * {b}: {engine} vs {oracle}", def.name()))?;
            total += 1;
        }
    }
    Ok(format!("{total} pairs over {} algebras", reg.len()))
}

fn c5_division_round_trip() -> Outcome {
    let h = get("H");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut done = 0;
    while done < 200 {
        let a = random_exact(&mut rng, 4);
        let b = random_exact(&mut rng, 4);
        if norma(&b, &h).unwrap().is_zero() {
            continue;
        }
        let ab = in_multi(&a, &b, &h).unwrap();
        let back = divis(&ab, &b, &h, Side::Right).unwrap();
        check(back == a, || format!("({ab}) / ({b}) = {back}, want {a}"))?;
        done += 1;
    }
    let rc = get("RplusC");
    for side in [Side::Left, Side::Right] {
        for divisor in [HNumber::basis(3, 1).unwrap(), HNumber::from_ints(&[0, 1, 1])] {
            let r = divis(&HNumber::from_ints(&[1, 2, 3]), &divisor, &rc, side);
            check(matches!(r, Err(Error::SingularDivisor)), || format!("{side:?} by {divisor}: {r:?}"))?;
        }
    }
    Ok("200 quotients recovered; RplusC zero divisors rejected".into())
}

fn c6_doubling_reproduces_q4n() -> Outcome {
    let w = get("W");
    let doubled = multi_dim(&w, &w, ProductMode::NonCommutative, "Q4N").unwrap();
    let q4n = get("Q4N");
    for row in 1..=4 {
        for col in 1..=4 {
            let (x, y) = (doubled.cell(row, col).unwrap(), q4n.cell(row, col).unwrap());
            check(x == y, || format!("cell ({row},{col}): {:?} vs {:?}", x.value, y.value))?;
        }
    }
    check(doubled.params() == q4n.params(), || "parameters differ".into())?;
    Ok("16 cells equal".into())
}

fn c7_direct_sum_r_c() -> Outcome {
    let sum = dir_sum2(&get("R"), &get("C"), "RC").unwrap();
    let want = in_convert_hns_text(&[vec!["e1", "0", "0"], vec!["0", "e2", "e3"], vec!["0", "e3", "-e2"]], "RC").unwrap();
    check(sum == want, || format!("{sum:?}"))?;
    Ok("9 cells equal".into())
}

fn c8_rotation_cross_validation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut worst_oracle, mut worst_norm) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let axis: Vec3 = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let angle = rng.gen_range(-std::f64::consts::TAU..std::f64::consts::TAU);
        let r: Vec3 = [rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)];
        let spec = RotationSpec::new(axis, angle).unwrap();
        let q = rotation::quat_from_rotation(&spec);
        let via_q = rotation::rotate(&r, &q).unwrap();
        let via_m = rotation::apply(&rotation::rotation_matrix_oracle(&spec), &r);
        let dev = via_q.iter().zip(&via_m).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        worst_oracle = worst_oracle.max(dev);
        worst_norm = worst_norm.max((rotation::norm(&via_q) - rotation::norm(&r)).abs());
    }
    check(worst_oracle <= 1e-10, || format!("oracle deviation {worst_oracle:e}"))?;
    check(worst_norm <= 1e-12, || format!("norm drift {worst_norm:e}"))?;

    let q = rotation::quat_from_rotation(&RotationSpec::new(example::AXIS1, example::ANGLE1).unwrap());
    let p = rotation::quat_from_rotation(&RotationSpec::new(example::AXIS2, example::ANGLE2).unwrap());
    let out = rotation::rotate2(&example::POINT, &q, &p).unwrap();
    let dev = out.iter().zip(&example::expected()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    check(dev <= 1e-12, || format!("worked example gives {out:?}"))?;
    let quoted = example::quoted();
    let quoted_sq = rotation::norm(&quoted).powi(2);
    check((quoted_sq - 14.0).abs() > 1.0, || "quoted value unexpectedly length-preserving".into())?;
    let far = out.iter().zip(&quoted).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    check(far > 0.1, || "quoted value reproduced".into())?;
    Ok(format!(
        "1000 cases, oracle dev {worst_oracle:.1e}, norm drift {worst_norm:.1e}; example -> ({:.6}, {:.6}, {:.6}), |r'|^2 = 14; quoted value has |r'|^2 = {quoted_sq:.1}",
        out[0], out[1], out[2]
    ))
}

fn c9_iso_system_identity() -> Outcome {
    let reg = registry();
    let mut eqs = 0;
    for def in reg.iter() {
        let n = def.dim();
        let sys = sys_izo(def, def).unwrap();
        check(sys.equations.len() == n * n * n, || format!("{}: {} equations", def.name(), sys.equations.len()))?;
        let (values, det) = sys.substitute(BasisTransform::identity(n).matrix()).unwrap();
        check(values.iter().all(Scalar::is_zero), || format!("{}: identity leaves a nonzero equation", def.name()))?;
        check(det == Scalar::one(), || format!("{}: det {det}", def.name()))?;
        eqs += values.len();
    }
    Ok(format!("{eqs} equations over {} algebras vanish at L = I", reg.len()))
}

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    prop_oneof![
        3 => Just(Scalar::zero()),
        4 => (-20i64..20, 1i64..6).prop_map(|(n, d)| Scalar::ratio(n, d)),
        2 => (-5i64..5, 1i64..4, prop::sample::select(vec!["p", "q", "alpha"]))
            .prop_map(|(n, d, v)| format!("{n}/{d}*{v} + 1").parse().unwrap()),
        1 => (1i64..5, prop::sample::select(vec!["p", "q"]))
            .prop_map(|(n, v)| format!("{n}/({v} - 2)").parse().unwrap()),
    ]
}

fn algebra_strategy() -> impl Strategy<Value = AlgebraDef> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(prop::collection::vec(scalar_strategy(), n), n), n).prop_map(|g| {
            let params = ["alpha", "p", "q"].iter().map(|s| Symbol::new(s).unwrap()).collect();
            AlgebraDef::new("Gen", params, g).unwrap().with_meta("generated", "test")
        })
    })
}

fn c10_round_trips() -> Outcome {
    let mut cases = 0;
    let config = |n| Config { cases: n, failure_persistence: None, ..Config::default() };

    let mut runner = TestRunner::new(config(400));
    runner
        .run(&(1usize..=6).prop_flat_map(|n| prop::collection::vec(scalar_strategy(), n)), |coeffs| {
            let n = coeffs.len();
            let h = HNumber::new(coeffs).unwrap();
            let nat = viz_in_a(&h, "e").unwrap();
            let back = convert_a(&parse_natural(&nat.to_string()).unwrap(), n).unwrap();
            prop_assert_eq!(&back, &h);
            prop_assert_eq!(convert_a(&nat, n).unwrap(), h);
            Ok(())
        })
        .map_err(|e| format!("natural/list: {e}"))?;
    cases += 400;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut runner = TestRunner::new(config(400));
    runner
        .run(&algebra_strategy(), |def| {
            let text = def.to_file_string();
            prop_assert_eq!(&AlgebraDef::from_file_str(&text).unwrap(), &def);
            let path = save_file(dir.path(), &def).unwrap();
            prop_assert_eq!(load_file(&path).unwrap(), def);
            Ok(())
        })
        .map_err(|e| format!("file: {e}"))?;
    cases += 400;

    let lib = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut runner = TestRunner::new(config(250));
    runner
        .run(&("[A-Z][a-z0-9]{1,6}", algebra_strategy()), |(name, def)| {
            let mut reg = Registry::open(lib.path()).unwrap();
            prop_assume!(!reg.is_builtin(&name));
            reg.add_hns(&name, def.clone(), "c", "k").unwrap();
            let reopened = Registry::open(lib.path()).unwrap();
            let stored = reopened.search_hns(&name).unwrap();
            prop_assert_eq!(stored.gamma(), def.gamma());
            prop_assert_eq!(stored.comment(), "c");
            reg.refill_hns(&name).unwrap();
            prop_assert!(Registry::open(lib.path()).unwrap().search_hns(&name).is_err());
            Ok(())
        })
        .map_err(|e| format!("registry: {e}"))?;
    cases += 250;
    Ok(format!("{cases} generated cases"))
}

fn c11_root_verification() -> Outcome {
    let h = get("H");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let close = |x: &HNumber, y: &HNumber| {
        let (x, y) = (x.to_f64().unwrap(), y.to_f64().unwrap());
        x.iter().zip(&y).all(|(a, b)| (a - b).abs() <= 1e-8)
    };
    let zero = HNumber::float_zeros(4);
    let (mut rad_hits, mut eq_hits, mut outputs) = (0, 0, 0);
    for _ in 0..100 {
        let x = random_float(&mut rng, 4, 2.0);
        let a = in_multi(&x, &x, &h).unwrap();
        let roots = rad2(&a, &h).map_err(|e| format!("rad2({a}): {e}"))?;
        for r in &roots {
            let res = quadratic_residual(None, &zero, &hcns_core::ops::neg(&a), r, &h).unwrap();
            check(res <= ROOT_RESIDUAL, || format!("rad2 output {r} residual {res:e}"))?;
            outputs += 1;
        }
        let minus = hcns_core::ops::neg(&x);
        if roots.iter().any(|r| close(r, &x)) && roots.iter().any(|r| close(r, &minus)) {
            rad_hits += 1;
        }
    }
    for _ in 0..100 {
        let a = random_float(&mut rng, 4, 2.0);
        let b = random_float(&mut rng, 4, 2.0);
        let x0 = random_float(&mut rng, 4, 2.0);
        let lead = in_multi(&a, &in_multi(&x0, &x0, &h).unwrap(), &h).unwrap();
        let c = hcns_core::ops::neg(&hcns_core::ops::in_add(&lead, &in_multi(&b, &x0, &h).unwrap()).unwrap());
        let roots = sqrt_eq(&a, &b, &c, &h).map_err(|e| format!("sqrt_eq: {e}"))?;
        for r in &roots {
            let res = quadratic_residual(Some(&a), &b, &c, r, &h).unwrap();
            check(res <= ROOT_RESIDUAL, || format!("sqrt_eq output {r} residual {res:e}"))?;
            outputs += 1;
        }
        if roots.iter().any(|r| close(r, &x0)) {
            eq_hits += 1;
        }
    }
    check(rad_hits == 100 && eq_hits == 100, || {
        format!("recovered rad2 {rad_hits}/100, sqrt_eq {eq_hits}/100")
    })?;
    Ok(format!("rad2 100/100 (both signs), sqrt_eq 100/100; {outputs} outputs verified"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("symbolic Q4N product", c1_q4n_symbolic_product),
        ("triplex and RplusC natural products", c2_triplex_and_direct_sum_products),
        ("Hab list form from natural table", c3_hab_list_form),
        ("product engine vs brute-force distribution", c4_oracle_equivalence),
        ("division round trip and zero divisors", c5_division_round_trip),
        ("doubling W(p,q) reproduces Q4N", c6_doubling_reproduces_q4n),
        ("direct sum R + C", c7_direct_sum_r_c),
        ("rotation cross-validation", c8_rotation_cross_validation),
        ("isomorphism system sanity", c9_iso_system_identity),
        ("round trips", c10_round_trips),
        ("root verification", c11_root_verification),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {title} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {title} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
