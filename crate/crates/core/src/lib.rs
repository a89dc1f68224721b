pub mod algebra;
pub mod characters;
pub mod circulant;
pub mod descriptor;
pub mod error;
pub mod fixtures;
pub mod group;
pub mod kraus;
pub mod lengths;
pub mod linalg;
pub mod tol;

pub use algebra::GroupAlgebraElement;
pub use characters::{character_table, fusion_coefficients, validate_table, CharacterTable};
pub use circulant::{
    build_circulant, projection_family, psd_equivalence, spectral_decompose, GCirculant,
    Orientation, ProjectionFamily, PsdReport, SpectralDecomposition,
};
pub use descriptor::GroupDescriptor;
pub use error::{Error, Result};
pub use fixtures::{golden_table, PaperOrder};
pub use group::{build_group, conjugacy_classes, ConjugacyClasses, FiniteGroup, GroupId};
pub use lengths::{
    is_cond_negative_constraints, is_cond_negative_definition, kernel_sweep, make_length, phi,
    phi_inverse, schoenberg_kernel, t_grid, word_length_from_cycles, LengthFunction, PhiVector,
};
pub use kraus::{
    abelian_probability_check, apply_semigroup, apply_sigma, convolution_check, decompose,
    idempotent, is_convex, nonexistence_demo, KrausCoefficients,
};

pub use nalgebra::DMatrix;
pub use num_complex::Complex64;
pub use tol::Tolerances;

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
pub struct ReadmeDoctests;
