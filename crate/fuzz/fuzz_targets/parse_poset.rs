#![no_main]

use libfuzzer_sys::fuzz_target;
use nestcomb::io::{parse_poset, to_canonical_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = parse_poset(text) {
        let again = parse_poset(&to_canonical_json(&p)).expect("emitted poset re-parses");
        assert_eq!(again, p);
        let _ = p.linear_extension();
        let _ = p.big_cuts();
    }
});
