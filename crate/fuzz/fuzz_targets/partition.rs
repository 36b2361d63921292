#![no_main]

use libfuzzer_sys::fuzz_target;
use walgebra::liestruct::{parse_partition, LieData, PartitionSpec};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let (left, right) = match s.split_once('|') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let Ok(p1) = parse_partition(left) else { return };
    let spec = match right.map(parse_partition) {
        None => PartitionSpec::plain(&p1),
        Some(Ok(p2)) => PartitionSpec::superalg(&p1, &p2),
        Some(Err(_)) => return,
    };
    let Ok(spec) = spec else { return };
    // keep the linear algebra small
    if spec.n() <= 6 {
        let _ = LieData::new(&spec);
    }
});
