use std::path::{Path, PathBuf};

use operadkit::alg::AlgebraPresentation;
use operadkit::operad::Operad;
use operadkit::Q;
use proptest::prelude::*;

fn corpus(target: &str) -> Vec<(PathBuf, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut seeds: Vec<(PathBuf, String)> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| {
            let text = String::from_utf8_lossy(&std::fs::read(&p).unwrap()).into_owned();
            (p, text)
        })
        .collect();
    seeds.sort();
    assert!(!seeds.is_empty(), "no seeds in {}", dir.display());
    seeds
}

fn check_rational(s: &str) {
    if let Ok(q) = s.parse::<Q>() {
        let back: Q = q.to_string().parse().unwrap();
        assert_eq!(back, q, "{s:?}");
    }
}

fn check_operad(s: &str) {
    if let Ok(op) = Operad::from_json(s) {
        let again = Operad::from_json(&op.to_json()).unwrap();
        assert_eq!(again.to_json(), op.to_json());
    }
}

fn check_algebra(s: &str) {
    if let Ok(a) = AlgebraPresentation::from_json(s, 4) {
        let again = AlgebraPresentation::from_json(&a.to_json(), 4).unwrap();
        assert_eq!(again.to_json(), a.to_json());
    }
}

#[test]
fn rational_seeds_round_trip() {
    for (_, s) in corpus("rational") {
        check_rational(&s);
    }
    assert_eq!("-12/8".parse::<Q>().unwrap(), "-3/2".parse::<Q>().unwrap());
    assert!("1/0".parse::<Q>().is_err());
}

#[test]
fn operad_seeds_parse_and_round_trip() {
    for (path, s) in corpus("operad_json") {
        Operad::from_json(&s).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        check_operad(&s);
    }
}

#[test]
fn algebra_seeds_parse_and_round_trip() {
    for (path, s) in corpus("algebra_json") {
        AlgebraPresentation::from_json(&s, 4).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        check_algebra(&s);
    }
}

/// Single-byte and truncation mutations of every JSON seed.
#[test]
fn mutated_json_seeds_never_panic() {
    for (_, s) in corpus("operad_json")
        .into_iter()
        .chain(corpus("algebra_json"))
    {
        let bytes = s.as_bytes();
        for cut in (0..bytes.len()).step_by(7) {
            let prefix = String::from_utf8_lossy(&bytes[..cut]);
            check_operad(&prefix);
            check_algebra(&prefix);
        }
        for pos in (0..bytes.len()).step_by(3) {
            for replacement in *b"09-\"[]}" {
                let mut m = bytes.to_vec();
                m[pos] = replacement;
                let m = String::from_utf8_lossy(&m);
                check_operad(&m);
                check_algebra(&m);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rational_parser_never_panics(s in "[-+ 0-9/]{0,40}") {
        check_rational(&s);
    }

    #[test]
    fn rational_display_round_trips(n in any::<i64>(), d in any::<i64>().prop_filter("nonzero", |d| *d != 0)) {
        check_rational(&format!("{n}/{d}"));
    }

    #[test]
    fn json_parsers_never_panic(s in "[{}\\[\\]\",:0-9a-z_ -]{0,80}") {
        check_operad(&s);
        check_algebra(&s);
    }
}
