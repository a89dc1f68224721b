#![no_main]

use gck::GroupDescriptor;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(d) = s.parse::<GroupDescriptor>() else { return };
    let again: GroupDescriptor = d.to_string().parse().expect("display output must parse");
    assert_eq!(d, again);
    // keep closures small so each run stays fast
    if s.len() <= 64 {
        let _ = gck::build_group(s);
    }
});
