#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use walgebra::json::{element_from_str, element_to_string};
use walgebra::liestruct::{LieData, PartitionSpec};
use walgebra::{RatFunc, Q};

fn lie() -> &'static LieData {
    static L: OnceLock<LieData> = OnceLock::new();
    L.get_or_init(|| LieData::new(&PartitionSpec::superalg(&[2], &[1]).unwrap()).unwrap())
}

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let cd = &lie().cdata;
    if let Ok(p) = element_from_str::<Q>(s, cd) {
        let again = element_from_str::<Q>(&element_to_string(&p), cd).unwrap();
        assert_eq!(again, p);
    }
    if let Ok(p) = element_from_str::<RatFunc>(s, cd) {
        let again = element_from_str::<RatFunc>(&element_to_string(&p), cd).unwrap();
        assert_eq!(again, p);
    }
});
