#![no_main]

use gck::PaperOrder;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(order) = PaperOrder::from_json(s) {
        let n = order.len();
        let x: Vec<usize> = (0..n).collect();
        let there = order.classes_to_paper(&x).expect("length matches");
        assert_eq!(order.classes_to_canonical(&there).expect("length matches"), x);
    }
});
