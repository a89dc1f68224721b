#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(v) = gck_cli::parse::parse_element(s) {
        assert!(v.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
    }
});
