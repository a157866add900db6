#![no_main]

use libfuzzer_sys::fuzz_target;
use operadkit::alg::AlgebraPresentation;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(a) = AlgebraPresentation::from_json(s, 4) {
        let again =
            AlgebraPresentation::from_json(&a.to_json(), 4).expect("serialized algebras parse");
        assert_eq!(again.to_json(), a.to_json());
    }
});
