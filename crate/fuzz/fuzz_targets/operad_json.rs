#![no_main]

use libfuzzer_sys::fuzz_target;
use operadkit::operad::Operad;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(op) = Operad::from_json(s) {
        let again = Operad::from_json(&op.to_json()).expect("serialized operads parse");
        assert_eq!(again.to_json(), op.to_json());
    }
});
