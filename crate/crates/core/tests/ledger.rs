use proptest::prelude::*;

use tamedef::ledger::{
    golden_scenarios, parse_scenario, run_scenario, wiles_difference, ModuleLabel, PlaceRecord,
    PlaceRole, Scenario, ScenarioBody, SelmerScenario,
};
use tamedef::Error;

fn scenario(name: &str) -> Scenario {
    let (_, text) = golden_scenarios().into_iter().find(|(n, _)| *n == name).unwrap();
    parse_scenario(text).unwrap()
}

#[test]
fn golden_files_evaluate_to_stated_values() {
    for (name, text) in golden_scenarios() {
        let s = parse_scenario(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let out = run_scenario(&s).unwrap();
        assert!(out.passed, "{name}: {:?}", out.details);
    }
}

#[test]
fn differences_match_independent_sums() {
    // hand-summed: 1 - 0 + (4-2) + (2-2) + (0-2)
    let expected = [("selmer_difference.toml", 1), ("selmer_difference_aux.toml", 1), ("balanced_ad0.toml", 0)];
    for (name, d) in expected {
        let ScenarioBody::Wiles { scenario, .. } = scenario(name).body else { panic!() };
        let manual = scenario.h0_global - scenario.h0_global_dual
            + scenario.places.iter().map(|p| p.dim_l - p.h0).sum::<i64>();
        assert_eq!(manual, d);
        assert_eq!(wiles_difference(&scenario).unwrap().difference, d);
    }
}

#[test]
fn corrupted_value_fails() {
    let text = golden_scenarios()[0].1.replace("expect_difference = 1", "expect_difference = 2");
    assert!(!run_scenario(&parse_scenario(&text).unwrap()).unwrap().passed);
    // a wrong h0 at p for the declared local case is rejected outright
    let text = golden_scenarios()[0].1.replace("dim_L = 4\nh0 = 2", "dim_L = 5\nh0 = 2");
    assert!(matches!(run_scenario(&parse_scenario(&text).unwrap()), Err(Error::Ledger(_))));
}

#[test]
fn missing_infinity_rejected() {
    let text = golden_scenarios()[0].1;
    let cut = text.find("[[place]]\nlabel = \"inf\"").unwrap();
    assert!(matches!(run_scenario(&parse_scenario(&text[..cut]).unwrap()), Err(Error::Ledger(_))));
}

#[test]
fn character_flags_required() {
    let text = golden_scenarios()
        .into_iter()
        .find(|(n, _)| *n == "tangent_split.toml")
        .unwrap()
        .1
        .replace("nontrivial = true", "nontrivial = false");
    assert!(matches!(run_scenario(&parse_scenario(&text).unwrap()), Err(Error::Precondition(_))));
}

#[test]
fn malformed_scenario_is_a_parse_error() {
    assert!(matches!(parse_scenario("kind = \"wiles\"\nclaim = 3"), Err(Error::Parse(_))));
    assert!(matches!(parse_scenario("claim = \"x\"\nkind = \"nope\""), Err(Error::Parse(_))));
}

fn base() -> SelmerScenario {
    SelmerScenario {
        module: ModuleLabel::Ad,
        h0_global: 1,
        h0_global_dual: 0,
        places: vec![PlaceRecord {
            label: "inf".into(),
            dim_l: 0,
            h0: 2,
            role: Some(PlaceRole::Infinity),
            case: None,
        }],
    }
}

proptest! {
    #[test]
    fn balanced_places_do_not_change_the_difference(
        dims in proptest::collection::vec((0i64..6, 0i64..6), 0..6),
        extra in 0i64..6,
    ) {
        let mut s = base();
        for (i, (d, h)) in dims.iter().enumerate() {
            s.places.push(PlaceRecord { label: format!("q{i}"), dim_l: *d, h0: *h, role: None, case: None });
        }
        let before = wiles_difference(&s).unwrap().difference;
        s.places.push(PlaceRecord { label: "new".into(), dim_l: extra, h0: extra, role: None, case: None });
        prop_assert_eq!(wiles_difference(&s).unwrap().difference, before);
    }

    #[test]
    fn difference_is_additive_over_places(
        a in proptest::collection::vec((0i64..6, 0i64..6), 0..5),
        b in proptest::collection::vec((0i64..6, 0i64..6), 0..5),
    ) {
        let build = |xs: &[(i64, i64)]| {
            let mut s = base();
            for (i, (d, h)) in xs.iter().enumerate() {
                s.places.push(PlaceRecord { label: format!("q{i}"), dim_l: *d, h0: *h, role: None, case: None });
            }
            wiles_difference(&s).unwrap().difference
        };
        let joined: Vec<_> = a.iter().chain(&b).cloned().collect();
        prop_assert_eq!(build(&joined) - build(&[]), (build(&a) - build(&[])) + (build(&b) - build(&[])));
    }
}
