use std::sync::OnceLock;

use proptest::prelude::*;
use traceforms::corpus::two_group_corpus;
use traceforms::field::Field;
use traceforms::form::{is_hyperbolic, trace_form_multiquadratic};
use traceforms::group::{build_group, GroupTable, PresentationSpec};
use traceforms::iwasawa::condition_c;
use traceforms::oracle::{match_pfister_shape, predict, theorem0_e, Exponent, FieldProfile, Rule};

fn groups() -> &'static Vec<(String, GroupTable)> {
    static G: OnceLock<Vec<(String, GroupTable)>> = OnceLock::new();
    G.get_or_init(|| two_group_corpus().into_iter().map(|(e, g)| (e.name, g)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shape_exactly_when_not_forced(
        idx in 0usize..64,
        m in 2u32..=5,
        c_i in proptest::option::of(0u32..5),
        cd2 in proptest::option::of(0u32..5),
        number_field: bool,
        simple: bool,
    ) {
        let (name, g) = &groups()[idx % groups().len()];
        let mut prof = FieldProfile::declared(m);
        prof.c_i_level = c_i;
        prof.cd2_bound = cd2;
        prof.is_number_field = number_field;
        let p = predict(g, &prof, simple).unwrap();
        prop_assert_eq!(p.rule_fired == Rule::None, p.shape.is_some(), "{}", name);
        prop_assert_eq!(p.hyperbolic_forced, p.rule_fired != Rule::None);

        // recompute the first applicable rule
        let r = p.frattini_rank;
        let e = theorem0_e(g).unwrap();
        let thm0 = matches!(e, Exponent::Finite(x) if m >= x.trailing_zeros());
        let c = condition_c(g, m).unwrap().holds;
        let expected = if thm0 {
            Rule::Thm0
        } else if !c {
            Rule::Thm2
        } else if c_i.is_some_and(|i| i < r) {
            Rule::Prop81a
        } else if cd2.is_some_and(|b| b < r) {
            Rule::Prop81b
        } else if number_field && r >= 3 {
            Rule::Prop81c
        } else if simple && !g.is_abelian() {
            Rule::Prop82
        } else {
            Rule::None
        };
        prop_assert_eq!(p.rule_fired, expected, "{}", name);
        if thm0 {
            prop_assert!(!c);
        }
    }

    #[test]
    fn forced_fixtures_are_hyperbolic(idx in proptest::collection::vec(0usize..4, 3)) {
        // F5((X)) is C2, so (Z/2)^3 is forced; the explicit algebra must agree
        let f = Field::gf(5, 1).unwrap().laurent(["X"]).unwrap();
        let reps = f.square_class_reps().unwrap();
        let slots: Vec<_> = idx.iter().map(|&i| reps[i].clone()).collect();
        let g = build_group(&PresentationSpec::DirectProduct { factors: vec![PresentationSpec::Cyclic { n: 2 }; 3] }).unwrap();
        let p = predict(&g, &FieldProfile::of_field(&f).with_c_i(2), false).unwrap();
        prop_assert!(p.hyperbolic_forced);
        prop_assert!(is_hyperbolic(&trace_form_multiquadratic(&f, &slots).unwrap()).unwrap());
    }

    #[test]
    fn unforced_fixtures_match_shape(idx in proptest::collection::vec(0usize..8, 1..=3)) {
        let f = Field::gf(5, 1).unwrap().laurent(["X", "Y"]).unwrap();
        let reps = f.square_class_reps().unwrap();
        let slots: Vec<_> = idx.iter().map(|&i| reps[i].clone()).collect();
        let g = build_group(&PresentationSpec::DirectProduct { factors: vec![PresentationSpec::Cyclic { n: 2 }; slots.len()] }).unwrap();
        let p = predict(&g, &FieldProfile::of_field(&f), false).unwrap();
        let shape = p.shape.expect("abelian Sylow with no declared C_i is not forced");
        let q = trace_form_multiquadratic(&f, &slots).unwrap();
        prop_assert!(match_pfister_shape(&q, shape.scale, shape.pfister_rank).unwrap().is_some());
    }
}
