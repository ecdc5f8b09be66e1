#![no_main]
use joint_spectra::io::{parse_representation, representation_to_json};
use joint_spectra::numeric::Tolerances;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(rep) = parse_representation(text) {
        // Validation cost grows as n²·m³; keep iterations fast.
        if rep.dim() <= 16 {
            let _ = rep.validate(&Tolerances::default());
        }
        let back = parse_representation(&representation_to_json(&rep).to_string()).expect("serialized rep reparses");
        assert_eq!(back, rep);
    }
});
