//! Numerical tolerances shared across the crate.

use serde::Serialize;

/// Character-table equality, orthogonality and unitarity.
pub const TABLE: f64 = 1e-9;
/// Relative separation required between eigenvalues of the combined class matrix.
pub const EIGEN_COLLISION: f64 = 1e-6;
/// Allowed distance of a fusion coefficient from an integer.
pub const FUSION_INTEGRALITY: f64 = 1e-6;
/// Inversion symmetry of length values.
pub const LENGTH_SYMMETRY: f64 = 1e-12;
/// Imaginary parts discarded below this when a quantity must be real.
pub const IMAGINARY_RESIDUE: f64 = 1e-9;
/// Positive semidefiniteness on minimum eigenvalues, and nonnegativity of coefficients.
pub const PSD: f64 = 1e-9;
/// Sum rule `sum_i p_i chi_i(e) = 1`.
pub const SUM_RULE: f64 = 1e-10;
/// Eigenvalue clustering gap for multiplicity counting.
pub const CLUSTER_GAP: f64 = 1e-7;
/// Dense-spectrum vs character-decomposition agreement.
pub const SPECTRAL_MATCH: f64 = 1e-8;

#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct Tolerances {
    pub table: f64,
    pub psd: f64,
    pub sum_rule: f64,
    pub imaginary_residue: f64,
    pub cluster_gap: f64,
    pub spectral_match: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            table: TABLE,
            psd: PSD,
            sum_rule: SUM_RULE,
            imaginary_residue: IMAGINARY_RESIDUE,
            cluster_gap: CLUSTER_GAP,
            spectral_match: SPECTRAL_MATCH,
        }
    }
}
