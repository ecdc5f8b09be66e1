#![no_main]
use joint_spectra::spectra::SpectrumKind;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(kind) = text.parse::<SpectrumKind>() {
        assert_eq!(kind.to_string().parse::<SpectrumKind>().unwrap(), kind);
    }
});
