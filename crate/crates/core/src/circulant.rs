//! G-circulant matrices `A_ij = f(g_i g_j^-1)` for class functions `f`.
//!
//! The rescaled character matrices `Pi_r = (chi_r(e)/|G|) (chi_r(g_i g_j^-1))` are
//! mutually orthogonal projections of rank `chi_r(e)^2` summing to the identity,
//! and `A = sum_r (|G| p_r / chi_r(e)) Pi_r` with `p_r = <chi_r, f>`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::characters::CharacterTable;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::lengths::{is_cond_negative_definition, make_length};
use crate::linalg;
use crate::tol;

/// Which product indexes the matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub enum Orientation {
    /// `A_ij = f(g_i g_j^-1)`.
    #[default]
    RightInverse,
    /// `A_ij = f(g_i^-1 g_j)`, the transpose for class functions.
    LeftInverse,
}

#[derive(Debug, Clone)]
pub struct GCirculant {
    pub matrix: DMatrix<Complex64>,
    pub f: Vec<Complex64>,
    pub hermitian: bool,
    pub orientation: Orientation,
}

/// `f(C^-1) = conj f(C)` on every class.
pub fn is_hermitian_class_function(g: &FiniteGroup, f: &[Complex64]) -> bool {
    let inv = &g.classes().inverse_class;
    f.iter()
        .enumerate()
        .all(|(c, z)| (f[inv[c]] - z.conj()).norm() <= 1e-12)
}

pub fn build_circulant(g: &FiniteGroup, f: &[Complex64]) -> Result<GCirculant> {
    build_circulant_oriented(g, f, Orientation::RightInverse)
}

pub fn build_circulant_oriented(
    g: &FiniteGroup,
    f: &[Complex64],
    orientation: Orientation,
) -> Result<GCirculant> {
    if f.len() != g.num_classes() {
        return Err(Error::WrongLength {
            expected: g.num_classes(),
            got: f.len(),
        });
    }
    if f.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite);
    }
    let n = g.order();
    let matrix = DMatrix::from_fn(n, n, |i, j| {
        let e = match orientation {
            Orientation::RightInverse => g.mul(i, g.inv(j)),
            Orientation::LeftInverse => g.mul(g.inv(i), j),
        };
        f[g.class_of(e)]
    });
    Ok(GCirculant {
        matrix,
        f: f.to_vec(),
        hermitian: is_hermitian_class_function(g, f),
        orientation,
    })
}

#[derive(Debug, Clone)]
pub struct ProjectionFamily {
    pub projections: Vec<DMatrix<Complex64>>,
    pub ranks: Vec<usize>,
}

/// The projections `Pi_r`, checked for orthogonality, rank and completeness.
pub fn projection_family(ct: &CharacterTable, g: &FiniteGroup) -> Result<ProjectionFamily> {
    ct.check_group(g)?;
    let n = g.order();
    let projections: Vec<DMatrix<Complex64>> = (0..ct.num_irreps())
        .map(|r| {
            let scale = ct.degrees[r] as f64 / n as f64;
            DMatrix::from_fn(n, n, |i, j| ct.value(r, g.class_of(g.mul(i, g.inv(j)))) * scale)
        })
        .collect();
    let max_dev = |m: &DMatrix<Complex64>, target: &DMatrix<Complex64>| {
        (m - target).iter().map(|z| z.norm()).fold(0.0, f64::max)
    };
    let zero = DMatrix::<Complex64>::zeros(n, n);
    for (r, pr) in projections.iter().enumerate() {
        for (s, ps) in projections.iter().enumerate() {
            let target = if r == s { pr } else { &zero };
            let dev = max_dev(&(pr * ps), target);
            if dev > tol::TABLE {
                return Err(Error::TableCorrupt(format!(
                    "Pi_{r} Pi_{s} deviates from its target by {dev:e}"
                )));
            }
        }
    }
    let sum = projections.iter().fold(zero.clone(), |acc, p| acc + p);
    let dev = max_dev(&sum, &DMatrix::identity(n, n));
    if dev > tol::TABLE {
        return Err(Error::TableCorrupt(format!("projections sum to I within {dev:e} only")));
    }
    let ranks = projections
        .iter()
        .zip(&ct.degrees)
        .map(|(p, &d)| {
            let trace = p.trace();
            let rank = trace.re.round();
            if (trace - rank).norm() > tol::TABLE || rank as usize != d * d {
                Err(Error::TableCorrupt(format!("projection trace {trace} != {}", d * d)))
            } else {
                Ok(rank as usize)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProjectionFamily { projections, ranks })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct IrrepEigenvalue {
    pub irrep: usize,
    /// Decomposition coefficient `p_r = <chi_r, f>`.
    pub coefficient: f64,
    /// `|G| p_r / chi_r(e)`.
    pub eigenvalue: f64,
    /// `chi_r(e)^2`.
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SpectralDecomposition {
    pub irreps: Vec<IrrepEigenvalue>,
    /// Dense eigensolver spectrum, ascending.
    pub dense: Vec<f64>,
    /// Largest gap between the predicted and the dense sorted spectra.
    pub max_mismatch: f64,
}

/// Eigenvalues from the character decomposition, cross-checked against a dense
/// Hermitian eigensolver.
pub fn spectral_decompose(
    a: &GCirculant,
    g: &FiniteGroup,
    ct: &CharacterTable,
) -> Result<SpectralDecomposition> {
    ct.check_group(g)?;
    if a.f.len() != ct.num_classes() || a.matrix.nrows() != g.order() {
        return Err(Error::GroupMismatch);
    }
    if !a.hermitian {
        return Err(Error::NotHermitian);
    }
    let n = g.order() as f64;
    let irreps = (0..ct.num_irreps())
        .map(|r| {
            let p = ct.inner(&ct.row(r), &a.f);
            if p.im.abs() > tol::IMAGINARY_RESIDUE {
                return Err(Error::ImaginaryResidueTooLarge(p.im.abs()));
            }
            let d = ct.degrees[r];
            Ok(IrrepEigenvalue {
                irrep: r,
                coefficient: p.re,
                eigenvalue: n * p.re / d as f64,
                multiplicity: d * d,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut predicted: Vec<f64> = irreps
        .iter()
        .flat_map(|e| std::iter::repeat_n(e.eigenvalue, e.multiplicity))
        .collect();
    predicted.sort_by(f64::total_cmp);
    let dense = linalg::hermitian_eigenvalues(&a.matrix);
    let max_mismatch = predicted
        .iter()
        .zip(&dense)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let scale = dense.iter().map(|x| x.abs()).fold(1.0, f64::max);
    if predicted.len() != dense.len() || max_mismatch > tol::SPECTRAL_MATCH * scale {
        return Err(Error::SpectralMismatch(max_mismatch));
    }
    Ok(SpectralDecomposition {
        irreps,
        dense,
        max_mismatch,
    })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct MultiplicityCheck {
    /// Two irreps share an eigenvalue (within the cluster gap), so per-irrep
    /// multiplicities cannot be read off the spectrum.
    pub collision: bool,
    /// Dense cluster sizes equal `chi_r(e)^2` for every irrep.
    pub confirmed: bool,
    /// `(eigenvalue, multiplicity)` clusters of the dense spectrum.
    pub clusters: Vec<(f64, usize)>,
}

/// Cluster the dense spectrum and compare each irrep's eigenvalue multiplicity.
pub fn check_multiplicities(s: &SpectralDecomposition) -> MultiplicityCheck {
    let clusters = linalg::cluster(&s.dense, tol::CLUSTER_GAP);
    let gap = 10.0 * tol::CLUSTER_GAP;
    let collision = s.irreps.iter().enumerate().any(|(i, a)| {
        s.irreps[i + 1..]
            .iter()
            .any(|b| (a.eigenvalue - b.eigenvalue).abs() < gap)
    });
    let confirmed = !collision
        && clusters.len() == s.irreps.len()
        && s.irreps.iter().all(|e| {
            clusters
                .iter()
                .find(|(v, _)| (v - e.eigenvalue).abs() < gap)
                .is_some_and(|&(_, m)| m == e.multiplicity)
        });
    MultiplicityCheck {
        collision,
        confirmed,
        clusters,
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PsdReport {
    /// Dense minimum eigenvalue is at least `-1e-9`.
    pub dense_psd: bool,
    /// Every decomposition coefficient is at least `-1e-9`.
    pub coefficients_nonnegative: bool,
    /// `-ln f` is a conditionally negative-definite length; `None` when `f` is not
    /// real with values in `(0, 1]`.
    pub log_length_cond_negative: Option<bool>,
    pub min_eigenvalue: f64,
    pub min_coefficient: f64,
}

/// PSD verdicts for the circulant of `f` by the dense, coefficient and
/// log-length routes.
///
/// The dense and coefficient routes must agree. Conditional negativity of
/// `-ln f` implies positivity of the circulant, but not conversely: positivity
/// at a single scale does not make `-ln f` conditionally negative.
pub fn psd_equivalence(ct: &CharacterTable, g: &FiniteGroup, f: &[Complex64]) -> Result<PsdReport> {
    let a = build_circulant(g, f)?;
    if !a.hermitian {
        return Err(Error::NotHermitian);
    }
    if (f[0] - 1.0).norm() > 1e-12 {
        return Err(Error::InvalidInput("class function must equal 1 at the identity".into()));
    }
    let s = spectral_decompose(&a, g, ct)?;
    let min_eigenvalue = s.dense.first().copied().unwrap_or(0.0);
    let min_coefficient = s
        .irreps
        .iter()
        .map(|e| e.coefficient)
        .fold(f64::INFINITY, f64::min);
    let dense_psd = min_eigenvalue >= -tol::PSD;
    let coefficients_nonnegative = min_coefficient >= -tol::PSD;
    if dense_psd != coefficients_nonnegative {
        return Err(Error::InternalInconsistency(format!(
            "dense min eigenvalue {min_eigenvalue:e} vs min coefficient {min_coefficient:e}"
        )));
    }
    let log_length_cond_negative = log_length(g, f)
        .map(|l| is_cond_negative_definition(g, &l).map(|v| v.holds))
        .transpose()?;
    if log_length_cond_negative == Some(true) && !dense_psd {
        return Err(Error::InternalInconsistency(
            "conditionally negative log-length with a non-PSD kernel".into(),
        ));
    }
    Ok(PsdReport {
        dense_psd,
        coefficients_nonnegative,
        log_length_cond_negative,
        min_eigenvalue,
        min_coefficient,
    })
}

fn log_length(g: &FiniteGroup, f: &[Complex64]) -> Option<crate::lengths::LengthFunction> {
    if f.iter().any(|z| z.im.abs() > 1e-12 || z.re <= 0.0 || z.re > 1.0) {
        return None;
    }
    let values: Vec<f64> = f.iter().map(|z| (-z.re.ln()).max(0.0)).collect();
    make_length(g, &values).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::character_table;
    use crate::group::build_group;
    use crate::kraus::decompose;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn setup(d: &str) -> (FiniteGroup, CharacterTable) {
        let g = build_group(d).unwrap();
        let ct = character_table(&g).unwrap();
        (g, ct)
    }

    #[test]
    fn identity_and_constant_patterns() {
        let (g, ct) = setup("S3");
        let delta = [c(1.0), c(0.0), c(0.0)];
        let a = build_circulant(&g, &delta).unwrap();
        assert_eq!(a.matrix, DMatrix::identity(6, 6));
        let s = spectral_decompose(&a, &g, &ct).unwrap();
        for e in &s.irreps {
            assert!((e.eigenvalue - 1.0).abs() < 1e-12);
            assert!((e.coefficient - ct.degrees[e.irrep] as f64 / 6.0).abs() < 1e-12);
        }
        let ones = build_circulant(&g, &[c(1.0); 3]).unwrap();
        assert!(ones.matrix.iter().all(|z| *z == c(1.0)));
        let s = spectral_decompose(&ones, &g, &ct).unwrap();
        assert!((s.irreps[0].eigenvalue - 6.0).abs() < 1e-12);
        assert!(s.irreps[1..].iter().all(|e| e.eigenvalue.abs() < 1e-12));
    }

    #[test]
    fn projection_ranks() {
        let (g, ct) = setup("S3");
        let fam = projection_family(&ct, &g).unwrap();
        // canonical irreps: trivial, sign, standard
        assert_eq!(fam.ranks, vec![1, 1, 4]);
        let avg = DMatrix::from_element(6, 6, c(1.0 / 6.0));
        assert!((&fam.projections[0] - avg).iter().all(|z| z.norm() < 1e-15));
        let (g4, ct4) = setup("S4");
        let mut r = projection_family(&ct4, &g4).unwrap().ranks;
        r.sort();
        assert_eq!(r, vec![1, 1, 4, 9, 9]);
    }

    #[test]
    fn s3_kernel_eigenvalues_match_kraus_coefficients() {
        let (g, ct) = setup("S3");
        let l = make_length(&g, &[0.0, 2f64.sqrt(), 1.0]).unwrap();
        let f: Vec<Complex64> = l.values().iter().map(|v| c((-v).exp())).collect();
        let a = build_circulant(&g, &f).unwrap();
        let s = spectral_decompose(&a, &g, &ct).unwrap();
        let p = decompose(&ct, &l, 1.0).unwrap().p;
        for e in &s.irreps {
            assert!((e.coefficient - p[e.irrep]).abs() < 1e-14);
        }
        assert!(s.dense[0] > 0.0);
        assert!(check_multiplicities(&s).confirmed);
    }

    #[test]
    fn orientations_agree() {
        let (g, ct) = setup("Q8");
        let f = [c(1.0), c(-0.3), c(0.2), c(0.5), c(0.1)];
        let a = build_circulant_oriented(&g, &f, Orientation::RightInverse).unwrap();
        let b = build_circulant_oriented(&g, &f, Orientation::LeftInverse).unwrap();
        assert_eq!(a.matrix.transpose(), b.matrix);
        let sa = spectral_decompose(&a, &g, &ct).unwrap();
        let sb = spectral_decompose(&b, &g, &ct).unwrap();
        for (x, y) in sa.dense.iter().zip(&sb.dense) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn psd_reports() {
        let (g, ct) = setup("S3");
        let f = |l2: f64, l3: f64| [c(1.0), c((-l3).exp()), c((-l2).exp())];
        let r = psd_equivalence(&ct, &g, &f(1.0, 2f64.sqrt())).unwrap();
        assert!(r.dense_psd && r.coefficients_nonnegative);
        assert_eq!(r.log_length_cond_negative, Some(true));
        // (0,1,2) scaled by 0.1 lies in the p_3 < 0 region
        let r = psd_equivalence(&ct, &g, &f(0.1, 0.2)).unwrap();
        assert!(!r.dense_psd && !r.coefficients_nonnegative);
        assert_eq!(r.log_length_cond_negative, Some(false));
        // at scale 1 the kernel is PSD although (0,1,2) is not conditionally negative
        let r = psd_equivalence(&ct, &g, &f(1.0, 2.0)).unwrap();
        assert!(r.dense_psd);
        assert_eq!(r.log_length_cond_negative, Some(false));
        let r = psd_equivalence(&ct, &g, &[c(1.0), c(0.0), c(0.0)]).unwrap();
        assert!(r.dense_psd && r.coefficients_nonnegative);
        assert_eq!(r.log_length_cond_negative, None);
    }

    #[test]
    fn psd_errors() {
        let (g, ct) = setup("Z3");
        let f = [c(1.0), Complex64::new(0.2, 0.1), Complex64::new(0.2, 0.1)];
        assert_eq!(psd_equivalence(&ct, &g, &f).unwrap_err(), Error::NotHermitian);
        let f = [c(2.0), c(0.1), c(0.1)];
        assert!(psd_equivalence(&ct, &g, &f).is_err());
    }
}
