#![no_main]
use joint_spectra::io::parse_proxy_config;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = parse_proxy_config(text);
});
