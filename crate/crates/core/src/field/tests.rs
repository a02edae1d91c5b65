use std::collections::{BTreeMap, HashSet};

use num_rational::BigRational;
use proptest::prelude::*;

use super::*;

fn q(n: i64, d: i64) -> FieldElement {
    FieldElement::Q(BigRational::new(n.into(), d.into()))
}

fn f5x() -> Field {
    Field::gf(5, 1).unwrap().laurent(["X"]).unwrap()
}

#[test]
fn spec_arithmetic() {
    let fq = Field::rationals();
    assert_eq!(fq.add(&q(1, 2), &q(1, 3)), q(5, 6));
    let f5 = Field::gf(5, 1).unwrap();
    assert_eq!(f5.mul(&f5.from_int(2), &f5.from_int(3)), f5.one());
    let f = f5x();
    let x = f.var(0);
    let lhs = f.add(&f.inv(&x).unwrap(), &f.from_int(2));
    let expect = f.add(&f.one(), &f.mul_int(&x, 2));
    assert_eq!(f.mul(&lhs, &x), expect);
    assert_eq!(f.format(&expect), "1 + 2*X");
}

#[test]
fn spec_squares() {
    let f5 = Field::gf(5, 1).unwrap();
    assert!(!f5.is_square(&f5.from_int(2)).unwrap());
    let cls = |n| f5.square_class(&f5.from_int(n)).unwrap();
    assert_eq!(cls(1), cls(4));
    assert_eq!(cls(2), cls(3));
    assert_ne!(cls(1), cls(2));

    let f = f5x();
    let x = f.var(0);
    let y = f.mul(&f.square(&x), &f.add(&f.from_int(4), &x));
    assert!(f.is_square(&y).unwrap());

    let fq = Field::rationals();
    assert!(fq.is_square(&q(9, 4)).unwrap());
    assert_eq!(fq.is_square(&fq.zero()), Err(FieldError::ZeroInput));
}

#[test]
fn spec_roots_of_unity() {
    let f5 = Field::gf(5, 1).unwrap();
    assert_eq!(f5.zeta(2), Some(f5.from_int(2)));
    assert_eq!(f5.zeta(3), None);
    let f25 = Field::gf(5, 2).unwrap();
    let z8 = f25.zeta(3).unwrap();
    assert_eq!(f25.multiplicative_order(&z8), Some(8));
    assert_eq!(f5.max_two_power_root(), 2);
    assert_eq!(Field::gf(41, 1).unwrap().max_two_power_root(), 3);
    assert_eq!(Field::rationals().max_two_power_root(), 1);
    assert_eq!(Field::rationals().zeta(1), Some(q(-1, 1)));
    assert_eq!(Field::rationals().zeta(2), None);
    // Laurent layers inherit their roots of unity
    assert_eq!(f5x().zeta(2), Some(f5x().from_int(2)));
}

#[test]
fn spec_valuations() {
    let f = Field::gf(5, 1).unwrap().laurent(["X1", "X2"]).unwrap();
    let (x1, x2) = (f.var(0), f.var(1));
    assert_eq!(f.valuation_vector(&x1).unwrap(), ValuationVector(vec![1, 0]));
    assert_eq!(f.valuation_vector(&x2).unwrap(), ValuationVector(vec![0, 1]));
    assert_eq!(gamma_mod2_rank(&f, &[x1.clone(), x2.clone()]).unwrap(), 2);
    assert_eq!(gamma_mod2_rank(&f, &[x1.clone(), f.pow(&x1, 3)]).unwrap(), 1);
    assert_eq!(gamma_mod2_rank(&f, &[f.from_int(4)]).unwrap(), 0);
    assert_eq!(
        gamma_mod2_rank(&f, &[x1.clone(), x2.clone(), f.mul(&x1, &x2)]).unwrap(),
        2
    );
    assert_eq!(f.valuation_vector(&f.zero()), Err(FieldError::ZeroInput));
}

#[test]
fn exact_division() {
    let f = Field::gf(5, 1).unwrap().laurent(["X", "Y"]).unwrap();
    let x = f.var(0);
    let y = f.var(1);
    let a = f.add(&f.one(), &f.mul(&x, &y));
    let b = f.sub(&f.mul_int(&y, 3), &f.inv(&x).unwrap());
    let p = f.mul(&a, &b);
    assert_eq!(f.div(&p, &a).unwrap(), b);
    assert_eq!(f.div(&p, &b).unwrap(), a);
    assert!(matches!(f.div(&f.one(), &a), Err(FieldError::NotRepresentable(_))));
    assert_eq!(f.div(&a, &f.zero()), Err(FieldError::DivisionByZero));
}

#[test]
fn json_round_trip() {
    let f = Field::gf(5, 2).unwrap().laurent(["X"]).unwrap();
    let x = f.var(0);
    let w = f.embed(0, FieldElement::Gf(5));
    let e = f.add(&f.mul(&w, &x), &f.powi(&x, -2).unwrap());
    let js = f.to_json(&e);
    assert_eq!(js, serde_json::json!({"-2": [1, 0], "1": [0, 1]}));
    assert_eq!(f.from_json(&js).unwrap(), e);
    assert_eq!(f.parse("\"X\"").unwrap(), x);
    assert_eq!(f.parse("X").unwrap(), x);
    assert_eq!(f.parse("7").unwrap(), f.from_int(2));

    let fq = Field::rationals().laurent(["T"]).unwrap();
    assert_eq!(fq.parse("\"3/4\"").unwrap(), fq.embed(0, q(3, 4)));
    assert_eq!(fq.to_json(&fq.embed(0, q(3, 4))), serde_json::json!({"0": "3/4"}));
    assert!(fq.parse("\"Z\"").is_err());
}

#[test]
fn descriptor_json() {
    let d: FieldDescriptor =
        serde_json::from_str(r#"{"base":{"kind":"GF","p":5,"k":2},"laurent_vars":["X","Y"]}"#).unwrap();
    let f = Field::new(&d).unwrap();
    assert_eq!(f.depth(), 2);
    assert_eq!(f.to_string(), "GF(5^2)((X))((Y))");
    let back = serde_json::to_value(f.descriptor()).unwrap();
    assert_eq!(back["base"]["modulus"], serde_json::json!([2, 0, 1]));
    let d: FieldDescriptor = serde_json::from_str(r#"{"base":{"kind":"Q"}}"#).unwrap();
    assert_eq!(Field::new(&d).unwrap(), Field::rationals());
    let bad: FieldDescriptor = serde_json::from_str(r#"{"base":{"kind":"GF","p":3},"laurent_vars":["X","X"]}"#).unwrap();
    assert!(Field::new(&bad).is_err());
}

#[test]
fn square_class_reps_count() {
    let f = Field::gf(13, 1).unwrap().laurent(["X", "Y"]).unwrap();
    let reps = f.square_class_reps().unwrap();
    assert_eq!(reps.len(), 8);
    let classes: HashSet<_> = reps.iter().map(|r| f.square_class(r).unwrap()).collect();
    assert_eq!(classes.len(), 8);
    for r in &reps {
        assert_eq!(&f.square_class(r).unwrap(), r);
    }
    assert!(Field::rationals().square_class_reps().is_err());
}

#[test]
fn two_is_zeta4_class() {
    // in every GF(q) containing ζ4 one has (1+ζ4)^2 = 2ζ4
    for (p, k) in [(5, 1), (13, 1), (17, 1), (5, 2), (3, 2), (7, 2), (41, 1)] {
        let f = Field::gf(p, k).unwrap();
        let Some(z4) = f.zeta(2) else { continue };
        let s = f.add(&f.one(), &z4);
        assert_eq!(f.square(&s), f.mul_int(&z4, 2));
        assert_eq!(
            f.square_class(&f.from_int(2)).unwrap(),
            f.square_class(&z4).unwrap(),
            "GF({p}^{k})"
        );
        if f.zeta(3).is_some() {
            assert!(f.is_square(&f.from_int(2)).unwrap());
        }
    }
}

/// All Laurent polynomials over GF(p) with support in `lo..=hi`.
fn all_laurent(f: &Field, lo: i64, hi: i64) -> Vec<FieldElement> {
    let p = f.characteristic() as u64;
    let width = (hi - lo + 1) as u32;
    (0..p.pow(width))
        .map(|mut code| {
            let mut m = BTreeMap::new();
            for e in lo..=hi {
                let c = (code % p) as u32;
                code /= p;
                if c != 0 {
                    m.insert(e, FieldElement::Gf(c));
                }
            }
            FieldElement::Laurent(m)
        })
        .collect()
}

/// `f` restricted to exponents below `bound`.
fn truncate(x: &FieldElement, bound: i64) -> FieldElement {
    let FieldElement::Laurent(m) = x else { unreachable!() };
    FieldElement::Laurent(m.range(..bound).map(|(e, c)| (*e, c.clone())).collect())
}

#[test]
fn laurent_squares_match_brute_force() {
    for p in [3, 5] {
        let f = Field::gf(p, 1).unwrap().laurent(["X"]).unwrap();
        let small = all_laurent(&f, -1, 1);
        let squares: HashSet<FieldElement> = small.iter().map(|s| f.square(s)).collect();
        for y in all_laurent(&f, -2, 2) {
            if f.is_zero(&y) {
                continue;
            }
            let got = f.is_square(&y).unwrap();
            if squares.contains(&y) {
                assert!(got, "{} is a square of a Laurent polynomial", f.format(&y));
            }
            // a square in F((X)) is detected by its low-order terms: y is a
            // square iff some s agrees with sqrt(y) on three terms
            let v = f.valuation(&y).unwrap();
            let window = v + 3;
            let target = truncate(&y, window);
            let truncated_root = v % 2 == 0
                && all_laurent(&f, v / 2, v / 2 + 2)
                    .iter()
                    .any(|s| truncate(&f.square(s), window) == target);
            assert_eq!(got, truncated_root, "{} over GF({p})", f.format(&y));
        }
    }
}

fn gf_tower() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::gf(3, 1).unwrap()),
        Just(Field::gf(5, 1).unwrap()),
        Just(Field::gf(13, 1).unwrap()),
        Just(Field::gf(5, 2).unwrap()),
        Just(Field::gf(5, 1).unwrap().laurent(["X"]).unwrap()),
        Just(Field::gf(3, 2).unwrap().laurent(["X"]).unwrap()),
        Just(Field::gf(5, 1).unwrap().laurent(["X", "Y"]).unwrap()),
        Just(Field::rationals()),
        Just(Field::rationals().laurent(["T"]).unwrap()),
    ]
}

/// A random element with small support and small coefficients.
fn random_element(f: &Field, seed: &[i64]) -> FieldElement {
    fn build(f: &Field, d: usize, seed: &mut std::slice::Iter<'_, i64>) -> FieldElement {
        let sub = Field {
            base: f.base.clone(),
            vars: f.vars[..d].into(),
        };
        if d == 0 {
            let n = *seed.next().unwrap_or(&1);
            if f.is_rational_base() {
                let den = seed.next().map_or(1, |x| x.rem_euclid(4) + 1);
                return sub.from_rational(&BigRational::new(n.into(), den.into())).unwrap();
            }
            let g = f.gf_context().unwrap();
            let k = g.k() as usize;
            let cs: Vec<u32> = (0..k).map(|i| if i == 0 { g.from_int(n) } else { g.from_int(*seed.next().unwrap_or(&0)) }).collect();
            return FieldElement::Gf(g.from_coefficients(&cs));
        }
        let mut out = sub.zero();
        let terms = seed.next().map_or(1, |x| x.rem_euclid(3) + 1);
        for _ in 0..terms {
            let e = seed.next().map_or(0, |x| x.rem_euclid(5) - 2);
            let c = build(f, d - 1, seed);
            let lower = Field { base: f.base.clone(), vars: f.vars[..d - 1].into() };
            if !lower.is_zero(&c) {
                out = sub.add(&out, &sub.monomial(c, e));
            }
        }
        out
    }
    build(f, f.depth(), &mut seed.iter())
}

fn nonzero(f: &Field, seed: &[i64]) -> FieldElement {
    let x = random_element(f, seed);
    if f.is_zero(&x) {
        f.one()
    } else {
        x
    }
}

proptest! {
    #[test]
    fn squares_are_squares(f in gf_tower(), s in prop::collection::vec(-7i64..8, 24)) {
        let a = nonzero(&f, &s);
        prop_assert!(f.is_square(&f.square(&a)).unwrap());
    }

    #[test]
    fn square_factors_do_not_change_squareness(
        f in gf_tower(),
        s in prop::collection::vec(-7i64..8, 24),
        t in prop::collection::vec(-7i64..8, 24),
    ) {
        let a = nonzero(&f, &s);
        let b = nonzero(&f, &t);
        let ab2 = f.mul(&a, &f.square(&b));
        prop_assert_eq!(f.is_square(&ab2).unwrap(), f.is_square(&a).unwrap());
        prop_assert_eq!(f.square_class(&ab2).unwrap(), f.square_class(&a).unwrap());
    }

    #[test]
    fn square_class_is_multiplicative(
        f in gf_tower(),
        s in prop::collection::vec(-7i64..8, 24),
        t in prop::collection::vec(-7i64..8, 24),
    ) {
        let x = nonzero(&f, &s);
        let y = nonzero(&f, &t);
        let cx = f.square_class(&x).unwrap();
        prop_assert_eq!(f.square_class(&cx).unwrap(), cx.clone());
        let cy = f.square_class(&y).unwrap();
        prop_assert_eq!(
            f.square_class(&f.mul(&x, &y)).unwrap(),
            f.square_class(&f.mul(&cx, &cy)).unwrap()
        );
        prop_assert_eq!(f.is_square(&f.mul(&x, &cx)).unwrap(), true);
    }

    #[test]
    fn ring_axioms(
        f in gf_tower(),
        s in prop::collection::vec(-7i64..8, 24),
        t in prop::collection::vec(-7i64..8, 24),
        u in prop::collection::vec(-7i64..8, 24),
    ) {
        let (a, b, c) = (random_element(&f, &s), random_element(&f, &t), random_element(&f, &u));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        prop_assert!(f.is_zero(&f.sub(&a, &a)));
        prop_assert!(f.validate(&f.mul(&a, &b)).is_ok());
        if !f.is_zero(&b) {
            prop_assert_eq!(f.div(&f.mul(&a, &b), &b).unwrap(), a.clone());
        }
        prop_assert_eq!(f.from_json(&f.to_json(&a)).unwrap(), a);
    }

    #[test]
    fn zeta_has_exact_order(f in gf_tower(), k in 1u32..6) {
        match f.zeta(k) {
            Some(z) => prop_assert_eq!(f.multiplicative_order(&z), Some(1u64 << k)),
            None => prop_assert!(k > f.max_two_power_root()),
        }
    }
}
