#![allow(dead_code)]

use gck::{character_table, make_length, phi_inverse, CharacterTable, FiniteGroup, LengthFunction};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Built groups of order at most 24.
pub const SMALL_GROUPS: &[&str] = &[
    "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z12", "Z16", "Z24",
    "S3", "S4", "D2", "D4", "D5", "D6", "D7", "D8", "D10", "D12", "Q8",
    "prod(Z2,Z2)", "prod(Z2,Z4)", "prod(Z3,Z3)", "prod(S3,Z2)", "prod(Z2,Q8)",
    "prod(S3,Z3)", "prod(D4,Z3)", "prod(S3,S1)",
    "perm:[(1 2 3),(1 2)(3 4)]",
    "perm:[(1 2 3 4 5),(2 5)(3 4)]",
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn setup(d: &str) -> (FiniteGroup, CharacterTable) {
    let g = gck::build_group(d).unwrap();
    let ct = character_table(&g).unwrap();
    (g, ct)
}

/// Uniform values on each pair `{C, C^-1}`, zero at the identity.
pub fn random_length(g: &FiniteGroup, rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> LengthFunction {
    let inv = &g.classes().inverse_class;
    let mut v = vec![0.0; g.num_classes()];
    for c in 1..v.len() {
        v[c] = if inv[c] < c { v[inv[c]] } else { rng.random_range(lo..hi) };
    }
    make_length(g, &v).unwrap()
}

/// A length whose `Phi` entries are drawn from `[lo, hi]`, equal on conjugate
/// irrep pairs. `None` when the preimage is not a valid length.
pub fn length_from_phi(ct: &CharacterTable, rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Option<LengthFunction> {
    let k = ct.num_irreps();
    let mut full = vec![0.0; k];
    for r in 1..k {
        let c = ct.conjugate_irrep(r);
        full[r] = if c < r { full[c] } else { rng.random_range(lo..hi) };
    }
    phi_inverse(ct, &full[1..]).ok()
}

/// Random `f` with `f(C^-1) = conj f(C)` and real `f(e)`.
pub fn random_hermitian_class_function(g: &FiniteGroup, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let inv = &g.classes().inverse_class;
    let mut f = vec![Complex64::new(0.0, 0.0); g.num_classes()];
    for c in 0..f.len() {
        f[c] = if inv[c] < c {
            f[inv[c]].conj()
        } else if inv[c] == c {
            Complex64::new(rng.random_range(-1.0..1.0), 0.0)
        } else {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        };
    }
    f
}

/// `p_r(t)` straight from the definition `(1/|G|) sum_g exp(-t l(g)) conj(chi_r(g))`,
/// summed over elements rather than classes.
pub fn p_by_elements(g: &FiniteGroup, ct: &CharacterTable, l: &LengthFunction, t: f64) -> Vec<f64> {
    (0..ct.num_irreps())
        .map(|r| {
            let s: Complex64 = g
                .elements()
                .map(|e| ct.value(r, g.class_of(e)).conj() * (-t * l.at(g, e)).exp())
                .sum();
            s.re / g.order() as f64
        })
        .collect()
}

pub fn report(n: usize, name: &str, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("criterion {n:>2} [{status}] {name}: {detail}");
}
