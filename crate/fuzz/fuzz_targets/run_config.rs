#![no_main]

use libfuzzer_sys::fuzz_target;
use operadkit_cli::config::parse_args;

// Arguments are separated by NUL bytes.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let args = std::iter::once("operadkit").chain(s.split('\0'));
    if let Ok(cfg) = parse_args(args) {
        let _ = cfg.destination(None);
    }
});
