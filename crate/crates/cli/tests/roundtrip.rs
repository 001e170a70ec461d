use getzler_cli::json;
use getzler_core::borel::BorelSpec;
use getzler_core::random::{self, SymbolShape};
use getzler_core::rational::{frac, int};
use getzler_core::symbolic::HalfInt;
use getzler_core::{GaussSymbol, ScalarResult};
use std::collections::BTreeMap;

fn reparse<T: serde::de::DeserializeOwned>(v: &serde_json::Value) -> T {
    json::parse(&json::to_pretty(v), "test").unwrap()
}

#[test]
fn symbols_models_and_taylor_symbols_round_trip() {
    let mut r = random::rng(99);
    for i in 0..60 {
        let n = 1 + i % 6;
        let s = random::symbol(&mut r, n, &SymbolShape::small());
        let back = reparse::<json::SymbolJson>(&json::symbol_to_json(&s))
            .build()
            .unwrap();
        assert_eq!(back, s);
        let t = random::taylor_symbol(&mut r, n, i % 4, &SymbolShape::small());
        let back = reparse::<json::TaylorJson>(&json::taylor_to_json(&t))
            .build()
            .unwrap();
        assert_eq!(back, t);
        if n % 2 == 0 {
            let m = random::model(&mut r, n, 0.5);
            let back = reparse::<json::ModelJson>(&json::model_to_json(&m))
                .build()
                .unwrap();
            assert_eq!(back, m);
        }
    }
}

#[test]
fn scalar_results_round_trip() {
    let mut cases = vec![
        ScalarResult::zero(),
        ScalarResult::rational(frac(-3, 8)),
        ScalarResult::monomial(
            frac(1, 2),
            HalfInt::from_halves(-3),
            HalfInt::from_halves(-4),
            3,
        ),
        ScalarResult::new(
            BTreeMap::from([
                (HalfInt::ZERO, int(2)),
                (HalfInt::from_halves(1), frac(5, 7)),
            ]),
            HalfInt::from_int(2),
            1,
        ),
    ];
    let mut r = random::rng(5);
    let shape = SymbolShape {
        weights: vec![int(1), frac(1, 2), int(2)],
        ..SymbolShape::small()
    };
    for n in [2, 4] {
        for _ in 0..10 {
            let s = random::symbol(&mut r, n, &shape);
            for (_, v) in s.integrate_xi().unwrap().terms() {
                cases.push(v.clone());
            }
        }
    }
    for s in cases {
        let v = json::scalar_to_json(&s);
        assert_eq!(reparse::<json::ScalarJson>(&v).build().unwrap(), s);
    }
}

#[test]
fn borel_specs_round_trip() {
    let mut r = random::rng(17);
    for _ in 0..10 {
        let coeffs: Vec<GaussSymbol> = (0..3)
            .map(|_| random::symbol(&mut r, 2, &SymbolShape::polynomial()))
            .collect();
        let b = BorelSpec::build_with(coeffs, None, 1, 0.75).unwrap();
        let back = reparse::<json::BorelJson>(&json::borel_spec_to_json(&b))
            .build()
            .unwrap();
        assert_eq!(back, b);
    }
}

#[test]
fn serialization_is_canonical() {
    let s = GaussSymbol::rational(2, frac(4, -6));
    let text = json::to_pretty(&json::symbol_to_json(&s));
    assert!(text.contains("\"-2/3\""));
    assert_eq!(json::format_float(0.1), "1.0000000000000001e-1");
    // keys come out sorted
    let v = json::scalar_to_json(&ScalarResult::rational(int(1)));
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["iPower", "piPower", "terms"]);
}

#[test]
fn parse_errors_name_the_field() {
    let bad = r#"{"n": 2, "s": "1/0", "kappa": []}"#;
    let err = json::parse::<json::ModelJson>(bad, "model").err().unwrap();
    let msg = err.to_string();
    assert!(msg.contains("line 1") && msg.contains("`s`"), "{msg}");
    assert_eq!(err.exit_code(), 2);
    let bad = "{\"n\": 2,\n \"terms\": [{\"q\": \"0\", \"xi\": [1], \"form\": [{\"coef\": \"1\", \"index\": []}]}]}";
    let msg = json::parse::<json::SymbolJson>(bad, "a")
        .err()
        .unwrap()
        .to_string();
    assert!(
        msg.contains("line 2") && msg.contains("terms[0].form[0]"),
        "{msg}"
    );
}
