#![no_main]
use joint_spectra::numeric::{parse_exact, Scalar};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(v) = parse_exact(text) {
        // Printed form is canonical: it parses back to the same value.
        let again = parse_exact(&v.text()).expect("printed scalar reparses");
        assert_eq!(again, v);
    }
});
