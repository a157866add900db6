#![no_main]

use libfuzzer_sys::fuzz_target;
use operadkit::rational::Q;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(q) = s.parse::<Q>() {
        let back: Q = q.to_string().parse().expect("display output parses");
        assert_eq!(back, q);
    }
});
