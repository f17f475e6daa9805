#![no_main]

use libfuzzer_sys::fuzz_target;
use nestcomb::io::parse_ideal;
use nestcomb::Poset;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let b3 = Poset::boolean_lattice(3).unwrap();
    if let Ok(ideal) = parse_ideal(&b3, text) {
        assert!(b3.is_ideal(ideal.members()).unwrap());
        assert!(ideal.contains(b3.least().unwrap()));
        assert!(!ideal.contains(b3.greatest().unwrap()));
    }
});
