#![no_main]

use libfuzzer_sys::fuzz_target;
use nestcomb::io::{parse_complex, to_canonical_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(k) = parse_complex(text) {
        let again = parse_complex(&to_canonical_json(&k)).expect("emitted complex re-parses");
        assert_eq!(again, k);
        let _ = k.euler_characteristic();
        let _ = k.is_pseudomanifold();
    }
});
