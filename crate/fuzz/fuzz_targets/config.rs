#![no_main]

use libfuzzer_sys::fuzz_target;
use walgebra_cli::parse_config;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    for json in [false, true] {
        if let Ok(c) = parse_config(s, json) {
            let text = serde_json::to_string(&c).unwrap();
            assert_eq!(parse_config(&text, true).unwrap(), c);
        }
    }
});
