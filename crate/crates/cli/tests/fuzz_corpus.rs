//! Replays the checked-in fuzz corpus through the same checks the fuzz targets make.

use std::fs;
use std::path::PathBuf;

use gck::{GroupDescriptor, PaperOrder};
use gck_cli::parse::{parse_element, parse_vector};

fn seeds(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut paths: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    paths.sort();
    assert!(!paths.is_empty(), "no seeds for {target}");
    paths.iter().map(|p| fs::read_to_string(p).unwrap()).collect()
}

#[test]
fn descriptor_seeds() {
    let mut accepted = 0;
    for s in seeds("descriptor") {
        if let Ok(d) = s.parse::<GroupDescriptor>() {
            accepted += 1;
            assert_eq!(d.to_string().parse::<GroupDescriptor>().unwrap(), d, "{s}");
            let _ = gck::build_group(&s);
        }
    }
    assert!(accepted >= 5);
}

#[test]
fn vector_seeds() {
    for s in seeds("vector") {
        if let Ok(v) = parse_vector(&s) {
            assert!(!v.is_empty() && v.iter().all(|x| x.is_finite()), "{s}");
        }
    }
}

#[test]
fn element_seeds() {
    for s in seeds("element") {
        if let Ok(v) = parse_element(&s) {
            assert!(v.iter().all(|z| z.re.is_finite() && z.im.is_finite()), "{s}");
        }
    }
}

#[test]
fn paper_order_seeds() {
    let mut accepted = 0;
    for s in seeds("paper_order") {
        if let Ok(order) = PaperOrder::from_json(&s) {
            accepted += 1;
            let x: Vec<usize> = (0..order.len()).collect();
            let there = order.classes_to_paper(&x).unwrap();
            assert_eq!(order.classes_to_canonical(&there).unwrap(), x);
        }
    }
    assert_eq!(accepted, 2);
}
