#![no_main]
use joint_spectra::io::{algebra_to_json, parse_algebra};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(l) = parse_algebra(text) {
        let _ = l.validate();
        let back = parse_algebra(&algebra_to_json(&l).to_string()).expect("serialized algebra reparses");
        assert_eq!(back, l);
    }
});
