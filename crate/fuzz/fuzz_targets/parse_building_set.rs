#![no_main]

use libfuzzer_sys::fuzz_target;
use nestcomb::io::parse_building_set;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = parse_building_set(None, text) {
        if g.poset().len() <= 12 {
            assert_eq!(g.nested_complex(), g.nested_complex_by_subsets().unwrap());
        }
    }
});
