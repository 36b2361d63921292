#![no_main]

use libfuzzer_sys::fuzz_target;
use walgebra_cli::decode_derivation;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = decode_derivation(s) {
        // expressions of deep shared DAGs grow exponentially, so only small reports are rendered
        if r.nodes.len() <= 24 {
            for id in 0..=r.nodes.len() {
                let _ = r.expression(id);
            }
        }
        let back = decode_derivation(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }
});
