//! Character-induced Kraus-like decomposition `P_t = sum_r p_r(t) sigma_r`.
//!
//! `P_t lambda(g) = exp(-t l(g)) lambda(g)` and `sigma_r lambda(g) = chi_r(g) lambda(g)`.
//! Because `l` is a class function both sides are constant on classes, and the
//! coefficients follow from character orthogonality:
//! `p_r(t) = sum_j (#C_j/|G|) exp(-t l(C_j)) conj(chi_r(C_j))`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::GroupAlgebraElement;
use crate::characters::{fusion_coefficients, CharacterTable};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::lengths::{is_cond_negative_constraints, LengthFunction, SMALL_T_PROBES_LOG2};
use crate::tol;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct KrausCoefficients {
    pub t: f64,
    pub p: Vec<f64>,
    /// `|sum_i p_i chi_i(e) - 1|`.
    pub sum_rule_residual: f64,
    /// Sum-rule weights `chi_i(e)`.
    pub alpha: Vec<f64>,
}

impl KrausCoefficients {
    pub fn min(&self) -> f64 {
        self.p.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() {
        Err(Error::NonFinite)
    } else if t < 0.0 {
        Err(Error::TimeOutOfRange(t))
    } else {
        Ok(())
    }
}

/// Coefficients `p_r(t)` of the character-induced decomposition.
pub fn decompose(ct: &CharacterTable, l: &LengthFunction, t: f64) -> Result<KrausCoefficients> {
    l.check_group(ct.group_id())?;
    check_time(t)?;
    let f: Vec<Complex64> = l
        .values()
        .iter()
        .map(|&v| Complex64::new((-t * v).exp(), 0.0))
        .collect();
    let p = real_coefficients(ct, &f)?;
    let alpha: Vec<f64> = ct.degrees.iter().map(|&d| d as f64).collect();
    let sum: f64 = p.iter().zip(&alpha).map(|(p, a)| p * a).sum();
    let sum_rule_residual = (sum - 1.0).abs();
    if sum_rule_residual > tol::SUM_RULE {
        return Err(Error::InternalInconsistency(format!(
            "sum rule residual {sum_rule_residual:e}"
        )));
    }
    Ok(KrausCoefficients {
        t,
        p,
        sum_rule_residual,
        alpha,
    })
}

/// `<chi_r, f>` for every irrep, requiring real results.
fn real_coefficients(ct: &CharacterTable, f: &[Complex64]) -> Result<Vec<f64>> {
    (0..ct.num_irreps())
        .map(|r| {
            let z = ct.inner(&ct.row(r), f);
            if z.im.abs() > tol::IMAGINARY_RESIDUE {
                Err(Error::ImaginaryResidueTooLarge(z.im.abs()))
            } else {
                Ok(z.re)
            }
        })
        .collect()
}

/// `p_r(t) / t` for nontrivial irreps, evaluated without cancellation.
fn scaled_small_t_coefficients(ct: &CharacterTable, l: &LengthFunction, t: f64) -> Result<Vec<f64>> {
    let f: Vec<Complex64> = l
        .values()
        .iter()
        .map(|&v| Complex64::new((-t * v).exp_m1() / t, 0.0))
        .collect();
    Ok(real_coefficients(ct, &f)?[1..].to_vec())
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConvexityVerdict {
    /// The decision, taken from the linear constraints.
    pub convex: bool,
    /// Smallest coefficient seen on the audit grid (scaled by `1/t` below the grid).
    pub audit_min: f64,
    /// Time of the smallest audit coefficient.
    pub audit_t: f64,
}

/// Convexity of the decomposition for all `t >= 0`.
///
/// The verdict comes from the constraints `Phi_i(l) >= 0`. As an audit, every
/// `p_i(t)` is evaluated on `grid` (and on small-time probes below it, as
/// `p_i(t)/t`); the two must agree.
pub fn is_convex(ct: &CharacterTable, l: &LengthFunction, grid: &[f64]) -> Result<ConvexityVerdict> {
    let convex = is_cond_negative_constraints(ct, l)?;
    let mut audit_min = f64::INFINITY;
    let mut audit_t = 0.0;
    for e in SMALL_T_PROBES_LOG2 {
        let t = e.exp2();
        for q in scaled_small_t_coefficients(ct, l, t)? {
            if q < audit_min {
                audit_min = q;
                audit_t = t;
            }
        }
    }
    for &t in grid {
        let m = decompose(ct, l, t)?.min();
        if m < audit_min {
            audit_min = m;
            audit_t = t;
        }
    }
    let audit_ok = audit_min >= -tol::PSD;
    if audit_ok != convex {
        return Err(Error::InternalInconsistency(format!(
            "constraint route says {convex}, coefficient audit found min {audit_min:e} at t = {audit_t}"
        )));
    }
    Ok(ConvexityVerdict {
        convex,
        audit_min,
        audit_t,
    })
}

/// `P_t x`: multiply the coefficient of `lambda(g)` by `exp(-t l(g))`.
pub fn apply_semigroup(
    g: &FiniteGroup,
    l: &LengthFunction,
    t: f64,
    x: &GroupAlgebraElement,
) -> Result<GroupAlgebraElement> {
    l.check_group(g.id())?;
    check_time(t)?;
    check_element(g, x)?;
    Ok(GroupAlgebraElement {
        coeffs: x
            .coeffs
            .iter()
            .enumerate()
            .map(|(e, c)| c * (-t * l.at(g, e)).exp())
            .collect(),
    })
}

/// `sigma_r x`: multiply the coefficient of `lambda(g)` by `chi_r(g)`.
pub fn apply_sigma(
    g: &FiniteGroup,
    ct: &CharacterTable,
    r: usize,
    x: &GroupAlgebraElement,
) -> Result<GroupAlgebraElement> {
    ct.check_group(g)?;
    ct.check_irrep(r)?;
    check_element(g, x)?;
    Ok(GroupAlgebraElement {
        coeffs: x
            .coeffs
            .iter()
            .enumerate()
            .map(|(e, c)| c * ct.value(r, g.class_of(e)))
            .collect(),
    })
}

/// `sum_r p_r sigma_r x`.
pub fn apply_decomposition(
    g: &FiniteGroup,
    ct: &CharacterTable,
    coefficients: &KrausCoefficients,
    x: &GroupAlgebraElement,
) -> Result<GroupAlgebraElement> {
    let mut out = GroupAlgebraElement::zero(g.order());
    for (r, &p) in coefficients.p.iter().enumerate() {
        out = &out + &(&apply_sigma(g, ct, r, x)? * p);
    }
    Ok(out)
}

fn check_element(g: &FiniteGroup, x: &GroupAlgebraElement) -> Result<()> {
    if x.len() == g.order() {
        Ok(())
    } else {
        Err(Error::WrongLength {
            expected: g.order(),
            got: x.len(),
        })
    }
}

/// All fusion coefficients, indexed `[a][b][c]`.
pub fn fusion_tensor(ct: &CharacterTable) -> Result<Vec<Vec<Vec<u32>>>> {
    let k = ct.num_irreps();
    (0..k)
        .map(|a| (0..k).map(|b| fusion_coefficients(ct, a, b)).collect())
        .collect()
}

/// `max_c |p_c(t1+t2) - sum_ab p_a(t1) p_b(t2) n_ab^c|`.
pub fn convolution_check(ct: &CharacterTable, l: &LengthFunction, t1: f64, t2: f64) -> Result<f64> {
    let fusion = fusion_tensor(ct)?;
    convolution_residual(ct, l, &fusion, t1, t2)
}

/// As [`convolution_check`] with a precomputed fusion tensor.
pub fn convolution_residual(
    ct: &CharacterTable,
    l: &LengthFunction,
    fusion: &[Vec<Vec<u32>>],
    t1: f64,
    t2: f64,
) -> Result<f64> {
    let p1 = decompose(ct, l, t1)?.p;
    let p2 = decompose(ct, l, t2)?.p;
    let p12 = decompose(ct, l, t1 + t2)?.p;
    let k = ct.num_irreps();
    let mut composed = vec![0.0; k];
    for a in 0..k {
        for b in 0..k {
            for (c, slot) in composed.iter_mut().enumerate() {
                *slot += p1[a] * p2[b] * fusion[a][b][c] as f64;
            }
        }
    }
    Ok(p12
        .iter()
        .zip(&composed)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

/// Central idempotent `e_r = (chi_r(e)/|G|) sum_g chi_r(g^-1) lambda(g)`.
pub fn idempotent(ct: &CharacterTable, g: &FiniteGroup, r: usize) -> Result<GroupAlgebraElement> {
    ct.check_group(g)?;
    ct.check_irrep(r)?;
    let scale = ct.degrees[r] as f64 / g.order() as f64;
    Ok(GroupAlgebraElement {
        coeffs: g
            .elements()
            .map(|e| ct.value(r, g.class_of(g.inv(e))) * scale)
            .collect(),
    })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct NonexistenceReport {
    pub t: f64,
    /// Largest coefficient of `h lambda(g) - lambda(g) h` over all `g`.
    pub centrality_residual: f64,
    /// `||P_t h - h||` for `h = sum_{g != e} lambda(g)`.
    pub discrepancy: f64,
    /// `sqrt(sum_{C != {e}} #C (1 - exp(-t l(C)))^2)`.
    pub closed_form: f64,
    /// `||sum_i E_i h E_i* - h||` for a sample family with `sum_i E_i E_i* = lambda(e)`:
    /// any such family fixes the central element `h`.
    pub kraus_image_residual: f64,
    /// `||sum_i E_i E_i* - lambda(e)||` for the sample family.
    pub kraus_normalization_residual: f64,
}

/// Seed for the sample Kraus family in [`nonexistence_demo`].
pub const KRAUS_SAMPLE_SEED: u64 = 17;

/// Shows that `P_t` for a strict length cannot be written as `x -> sum E_i x E_i*`
/// with `E_i` in the group algebra: such maps fix the central element `h`, but
/// `P_t` moves it.
pub fn nonexistence_demo(g: &FiniteGroup, l: &LengthFunction, t: f64) -> Result<NonexistenceReport> {
    l.check_group(g.id())?;
    check_time(t)?;
    if !l.is_strict() {
        return Err(Error::LengthNotStrict);
    }
    if g.order() < 2 {
        return Err(Error::InvalidGroup("trivial group has no non-identity elements".into()));
    }
    let n = g.order();
    let mut h = GroupAlgebraElement::zero(n);
    for e in 1..n {
        h.coeffs[e] = Complex64::new(1.0, 0.0);
    }
    let centrality_residual = g
        .elements()
        .map(|e| {
            let b = GroupAlgebraElement::basis(n, e);
            h.mul(&b, g).max_abs_diff(&b.mul(&h, g))
        })
        .fold(0.0, f64::max);
    let discrepancy = (&apply_semigroup(g, l, t, &h)? - &h).norm();
    let closed_form = g
        .classes()
        .class_sizes
        .iter()
        .zip(l.values())
        .skip(1)
        .map(|(&size, &v)| size as f64 * (-(-t * v).exp_m1()).powi(2))
        .sum::<f64>()
        .sqrt();

    let mut rng = ChaCha8Rng::seed_from_u64(KRAUS_SAMPLE_SEED);
    let terms = n.min(5);
    let weights: Vec<f64> = (0..terms).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let family: Vec<GroupAlgebraElement> = weights
        .iter()
        .map(|w| {
            let e = rng.random_range(0..n);
            &GroupAlgebraElement::basis(n, e) * (w / total).sqrt()
        })
        .collect();
    let mut normalization = GroupAlgebraElement::zero(n);
    let mut image = GroupAlgebraElement::zero(n);
    for e in &family {
        normalization = &normalization + &e.mul(&e.star(g), g);
        image = &image + &e.mul(&h, g).mul(&e.star(g), g);
    }
    Ok(NonexistenceReport {
        t,
        centrality_residual,
        discrepancy,
        closed_form,
        kraus_image_residual: (&image - &h).norm(),
        kraus_normalization_residual: (&normalization - &GroupAlgebraElement::unit(n)).norm(),
    })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct AbelianCheck {
    pub p: Vec<f64>,
    pub is_probability: bool,
}

/// For abelian groups every `chi(e) = 1`, so the decomposition is a probability
/// vector exactly when all coefficients are nonnegative.
pub fn abelian_probability_check(
    g: &FiniteGroup,
    ct: &CharacterTable,
    l: &LengthFunction,
    t: f64,
) -> Result<AbelianCheck> {
    ct.check_group(g)?;
    if !g.is_abelian() {
        return Err(Error::GroupNotAbelian);
    }
    let k = decompose(ct, l, t)?;
    let total: f64 = k.p.iter().sum();
    let is_probability = k.min() >= -tol::PSD && (total - 1.0).abs() <= tol::SUM_RULE;
    Ok(AbelianCheck {
        p: k.p,
        is_probability,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::character_table;
    use crate::group::build_group;
    use crate::lengths::{make_length, t_grid};

    fn setup(d: &str) -> (FiniteGroup, CharacterTable) {
        let g = build_group(d).unwrap();
        let ct = character_table(&g).unwrap();
        (g, ct)
    }

    // canonical S3: classes (e, 3-cycles, transpositions), irreps (trivial, sign, standard)
    fn s3_closed_form(l2: f64, l3: f64, t: f64) -> [f64; 3] {
        let (a, b) = ((-t * l2).exp(), (-t * l3).exp());
        [
            (1.0 + 3.0 * a + 2.0 * b) / 6.0,
            (1.0 - 3.0 * a + 2.0 * b) / 6.0,
            (2.0 - 2.0 * b) / 6.0,
        ]
    }

    #[test]
    fn s3_matches_closed_form() {
        let (g, ct) = setup("S3");
        for &(l2, l3, t) in &[(1.0, 2.0, 0.1), (0.3, 1.7, 2.5), (2.0, 0.5, 0.01), (1.0, 2f64.sqrt(), 1.0)] {
            let l = make_length(&g, &[0.0, l3, l2]).unwrap();
            let k = decompose(&ct, &l, t).unwrap();
            let expect = s3_closed_form(l2, l3, t);
            for i in 0..3 {
                assert!((k.p[i] - expect[i]).abs() < 1e-14, "{l2} {l3} {t}");
            }
            assert!(k.sum_rule_residual <= 1e-10);
        }
    }

    #[test]
    fn s3_word_length_goes_negative() {
        let (g, ct) = setup("S3");
        let l = make_length(&g, &[0.0, 2.0, 1.0]).unwrap();
        let k = decompose(&ct, &l, 0.1).unwrap();
        // closed form (1 - 3e^-0.1 + 2e^-0.2)/6
        assert!((k.p[1] - (-0.012_841_791)).abs() < 1e-8);
    }

    #[test]
    fn time_zero_is_identity() {
        let (g, ct) = setup("Q8");
        let l = make_length(&g, &[0.0, 1.0, 0.4, 0.7, 0.2]).unwrap();
        let k = decompose(&ct, &l, 0.0).unwrap();
        assert_eq!(k.p.len(), 5);
        assert!((k.p[0] - 1.0).abs() < 1e-15);
        assert!(k.p[1..].iter().all(|p| p.abs() < 1e-15));
        assert!(matches!(decompose(&ct, &l, -1.0), Err(Error::TimeOutOfRange(_))));
    }

    #[test]
    fn convexity_verdicts() {
        let (g, ct) = setup("S3");
        let good = make_length(&g, &[0.0, 2f64.sqrt(), 1.0]).unwrap();
        assert!(is_convex(&ct, &good, &t_grid()).unwrap().convex);
        let bad = make_length(&g, &[0.0, 2.0, 1.0]).unwrap();
        let v = is_convex(&ct, &bad, &t_grid()).unwrap();
        assert!(!v.convex);
        assert!(v.audit_min < 0.0);
    }

    #[test]
    fn semigroup_law_and_unit() {
        let (g, _) = setup("D4");
        let l = make_length(&g, &vec![0.0, 0.5, 1.0, 1.5, 2.0][..g.num_classes()]).unwrap();
        let x = GroupAlgebraElement {
            coeffs: (0..8).map(|i| Complex64::new(i as f64 - 3.0, 0.5 * i as f64)).collect(),
        };
        let a = apply_semigroup(&g, &l, 0.3, &apply_semigroup(&g, &l, 0.9, &x).unwrap()).unwrap();
        let b = apply_semigroup(&g, &l, 1.2, &x).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
        assert_eq!(apply_semigroup(&g, &l, 0.0, &x).unwrap(), x);
        let unit = GroupAlgebraElement::unit(8);
        assert_eq!(apply_semigroup(&g, &l, 5.0, &unit).unwrap(), unit);
    }

    #[test]
    fn reconstruction_s3() {
        let (g, ct) = setup("S3");
        let l = make_length(&g, &[0.0, 0.8, 1.3]).unwrap();
        let k = decompose(&ct, &l, 0.7).unwrap();
        for e in g.elements() {
            let x = GroupAlgebraElement::basis(6, e);
            let lhs = apply_decomposition(&g, &ct, &k, &x).unwrap();
            let rhs = apply_semigroup(&g, &l, 0.7, &x).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-10);
        }
        let x = GroupAlgebraElement::basis(6, 3);
        assert_eq!(apply_sigma(&g, &ct, 0, &x).unwrap(), x);
    }

    #[test]
    fn prototype_two_point_decomposition() {
        // Z2 with l = 1 - delta_e: P_t = (1-p) I + p sigma, p = (1 - e^-t)/2
        let (g, ct) = setup("Z2");
        let l = make_length(&g, &[0.0, 1.0]).unwrap();
        for &t in &[0.0, 0.2, 1.0, 4.0] {
            let k = decompose(&ct, &l, t).unwrap();
            let p = (1.0 - (-t as f64).exp()) / 2.0;
            assert!((k.p[0] - (1.0 - p)).abs() < 1e-15);
            assert!((k.p[1] - p).abs() < 1e-15);
            let x = GroupAlgebraElement {
                coeffs: vec![Complex64::new(2.0, 1.0), Complex64::new(-1.0, 3.0)],
            };
            let sigma = apply_sigma(&g, &ct, 1, &x).unwrap();
            let expect = &(&x * (1.0 - p)) + &(&sigma * p);
            assert!(apply_semigroup(&g, &l, t, &x).unwrap().max_abs_diff(&expect) < 1e-14);
        }
    }

    #[test]
    fn convolution_small_cases() {
        let (g, ct) = setup("S3");
        let l = make_length(&g, &[0.0, 2f64.sqrt(), 1.0]).unwrap();
        assert!(convolution_check(&ct, &l, 0.0, 0.0).unwrap() < 1e-15);
        assert!(convolution_check(&ct, &l, 0.3, 0.7).unwrap() < 1e-10);
    }

    #[test]
    fn idempotents_s3() {
        let (g, ct) = setup("S3");
        let e: Vec<_> = (0..3).map(|r| idempotent(&ct, &g, r).unwrap()).collect();
        let avg = GroupAlgebraElement {
            coeffs: vec![Complex64::new(1.0 / 6.0, 0.0); 6],
        };
        assert!(e[0].max_abs_diff(&avg) < 1e-15);
        for r in 0..3 {
            for s in 0..3 {
                let prod = e[r].mul(&e[s], &g);
                let expect = if r == s { e[r].clone() } else { GroupAlgebraElement::zero(6) };
                assert!(prod.max_abs_diff(&expect) < 1e-12);
            }
        }
        let total = e.iter().fold(GroupAlgebraElement::zero(6), |acc, x| &acc + x);
        assert!(total.max_abs_diff(&GroupAlgebraElement::unit(6)) < 1e-12);
    }

    #[test]
    fn nonexistence_cases() {
        let (g, _) = setup("S3");
        let l = make_length(&g, &[0.0, 2f64.sqrt(), 1.0]).unwrap();
        let rep = nonexistence_demo(&g, &l, 1.0).unwrap();
        assert!(rep.discrepancy > 0.5);
        let exact = (2.0 * (1.0 - (-(2f64.sqrt())).exp()).powi(2)
            + 3.0 * (1.0 - (-1.0f64).exp()).powi(2))
        .sqrt();
        assert!((rep.discrepancy - exact).abs() < 1e-12);
        assert_eq!(rep.centrality_residual, 0.0);
        assert!(rep.kraus_image_residual < 1e-12);
        assert!(rep.kraus_normalization_residual < 1e-12);
        assert_eq!(nonexistence_demo(&g, &l, 0.0).unwrap().discrepancy, 0.0);

        let (z2, _) = setup("Z2");
        let l = make_length(&z2, &[0.0, 1.0]).unwrap();
        let rep = nonexistence_demo(&z2, &l, 1.0).unwrap();
        assert!((rep.discrepancy - (1.0 - (-1.0f64).exp())).abs() < 1e-15);

        let weak = make_length(&g, &[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(nonexistence_demo(&g, &weak, 1.0), Err(Error::LengthNotStrict));
    }

    #[test]
    fn abelian_checks() {
        let (z2, ct) = setup("Z2");
        let l = make_length(&z2, &[0.0, 1.0]).unwrap();
        let c = abelian_probability_check(&z2, &ct, &l, 1.0).unwrap();
        let e = (-1.0f64).exp();
        assert!((c.p[0] - (1.0 + e) / 2.0).abs() < 1e-15);
        assert!((c.p[1] - (1.0 - e) / 2.0).abs() < 1e-15);
        assert!(c.is_probability);

        let (z1, ct1) = setup("Z1");
        let l1 = make_length(&z1, &[0.0]).unwrap();
        assert_eq!(abelian_probability_check(&z1, &ct1, &l1, 3.0).unwrap().p, vec![1.0]);

        let (z5, ct5) = setup("Z5");
        let l0 = make_length(&z5, &[0.0; 5]).unwrap();
        let c = abelian_probability_check(&z5, &ct5, &l0, 2.0).unwrap();
        assert_eq!(c.p[0], 1.0);
        assert!(c.p[1..].iter().all(|p| p.abs() < 1e-15));

        let (s3, ct3) = setup("S3");
        let l3 = make_length(&s3, &[0.0, 1.0, 1.0]).unwrap();
        assert_eq!(abelian_probability_check(&s3, &ct3, &l3, 1.0), Err(Error::GroupNotAbelian));
    }
}
