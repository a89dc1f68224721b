//! Irreducible character tables via the Burnside–Dixon class-sum method.
//!
//! The class multiplication coefficients `a[i][j][k]` (number of ways to write a
//! fixed element of class `k` as a product `x y` with `x` in class `i`, `y` in class
//! `j`) define commuting matrices whose common eigenvectors are the central
//! characters `omega_r(C_k) = #C_k chi_r(C_k) / chi_r(e)`. A random real
//! combination of those matrices almost surely has simple spectrum, so each
//! eigenvector is one central character.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupId};
use crate::tol;

/// Retries of the random class-sum combination before giving up.
pub const MAX_SPLIT_ATTEMPTS: usize = 20;
pub const DEFAULT_SEED: u64 = 0x6763_6b5f_6368_6172;

#[derive(Debug, Clone)]
pub struct CharacterTable {
    /// `chi[(i, j)] = chi_i(C_j)`, irreps by classes.
    pub chi: DMatrix<Complex64>,
    pub class_sizes: Vec<usize>,
    pub group_order: usize,
    pub degrees: Vec<usize>,
    /// `chi_hat[(i, j)] = chi[(i, j)] * sqrt(#C_j / |G|)`; unitary.
    pub chi_hat: DMatrix<Complex64>,
    pub inverse_class: Vec<usize>,
    group_id: GroupId,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ValidationReport {
    pub row_orthogonality: f64,
    pub column_orthogonality: f64,
    pub unitarity: f64,
    pub degree_integrality: f64,
    pub trivial_row: f64,
    pub passed: bool,
}

impl ValidationReport {
    pub fn max_deviation(&self) -> f64 {
        [
            self.row_orthogonality,
            self.column_orthogonality,
            self.unitarity,
            self.degree_integrality,
            self.trivial_row,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Character table with the default seed.
pub fn character_table(g: &FiniteGroup) -> Result<CharacterTable> {
    character_table_seeded(g, DEFAULT_SEED)
}

pub fn character_table_seeded(g: &FiniteGroup, seed: u64) -> Result<CharacterTable> {
    let k = g.num_classes();
    let constants = class_constants(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_SPLIT_ATTEMPTS {
        let weights: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
        if let Some(table) = try_split(g, &constants, &weights) {
            return Ok(table);
        }
    }
    Err(Error::EigenSplittingFailed {
        attempts: MAX_SPLIT_ATTEMPTS,
    })
}

/// `a[i][j][k]`: pairs `(x, y)` with `x` in `C_i`, `y` in `C_j`, `x y = z_k`.
fn class_constants(g: &FiniteGroup) -> Vec<Vec<Vec<f64>>> {
    let cls = g.classes();
    let k = cls.len();
    let reps: Vec<usize> = (0..k).map(|c| cls.representative(c)).collect();
    let mut a = vec![vec![vec![0.0; k]; k]; k];
    for x in g.elements() {
        let i = g.class_of(x);
        let xinv = g.inv(x);
        for (c, &z) in reps.iter().enumerate() {
            let j = g.class_of(g.mul(xinv, z));
            a[i][j][c] += 1.0;
        }
    }
    a
}

fn try_split(g: &FiniteGroup, a: &[Vec<Vec<f64>>], weights: &[f64]) -> Option<CharacterTable> {
    let k = weights.len();
    let m = DMatrix::from_fn(k, k, |j, c| {
        (0..k).map(|i| weights[i] * a[i][j][c]).sum::<f64>()
    });
    let eig = m.clone().complex_eigenvalues();
    let eig: Vec<Complex64> = eig.iter().copied().collect();
    let scale = eig.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for (p, x) in eig.iter().enumerate() {
        for y in &eig[p + 1..] {
            if (x - y).norm() < tol::EIGEN_COLLISION * scale {
                return None;
            }
        }
    }
    let mc = m.map(|x| Complex64::new(x, 0.0));
    let order = g.order() as f64;
    let sizes = &g.classes().class_sizes;
    let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(k);
    for &lambda in &eig {
        let shifted = &mc - DMatrix::from_diagonal_element(k, k, lambda);
        let omega = null_vector(shifted)?;
        if omega[0].norm() < 1e-8 {
            return None;
        }
        let omega: Vec<Complex64> = omega.iter().map(|w| w / omega[0]).collect();
        let norm: f64 = omega
            .iter()
            .zip(sizes)
            .map(|(w, &s)| w.norm_sqr() / s as f64)
            .sum();
        let degree = (order / norm).sqrt();
        let rounded = degree.round();
        if (degree - rounded).abs() > 1e-6 || rounded < 1.0 {
            return None;
        }
        let row = omega
            .iter()
            .zip(sizes)
            .map(|(w, &s)| snap(w * rounded / s as f64))
            .collect();
        rows.push(row);
    }
    rows.sort_by(compare_rows);
    let chi = DMatrix::from_fn(k, k, |i, j| rows[i][j]);
    let table = CharacterTable::from_parts(g, chi).ok()?;
    if validate_table(&table).passed {
        Some(table)
    } else {
        None
    }
}

/// Right singular vector for the smallest singular value.
fn null_vector(m: DMatrix<Complex64>) -> Option<Vec<Complex64>> {
    let n = m.ncols();
    let svd = m.svd(false, true);
    let v_t = svd.v_t?;
    let (idx, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))?;
    Some((0..n).map(|c| v_t[(idx, c)].conj()).collect())
}

/// Rounds components lying within 1e-12 of an integer.
fn snap(z: Complex64) -> Complex64 {
    let f = |x: f64| {
        let r = x.round();
        if (x - r).abs() < 1e-12 {
            // + 0.0 turns a rounded -0.0 into 0.0
            r + 0.0
        } else {
            x
        }
    };
    Complex64::new(f(z.re), f(z.im))
}

fn is_trivial(row: &[Complex64]) -> bool {
    row.iter().all(|z| (z - 1.0).norm() < tol::TABLE)
}

fn cmp_tol(a: f64, b: f64) -> Ordering {
    if (a - b).abs() < tol::TABLE {
        Ordering::Equal
    } else {
        a.total_cmp(&b)
    }
}

/// Trivial first, then ascending degree, then lexicographic on real parts,
/// then on imaginary parts.
fn compare_rows(a: &Vec<Complex64>, b: &Vec<Complex64>) -> Ordering {
    (!is_trivial(a))
        .cmp(&!is_trivial(b))
        .then_with(|| cmp_tol(a[0].re, b[0].re))
        .then_with(|| {
            a.iter()
                .zip(b)
                .map(|(x, y)| cmp_tol(x.re, y.re))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
        .then_with(|| {
            a.iter()
                .zip(b)
                .map(|(x, y)| cmp_tol(x.im, y.im))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
}

impl CharacterTable {
    /// Wrap an explicit irreps-by-classes matrix for `g` (classes in canonical
    /// order). Degrees are read from column 0; no validation beyond shape and
    /// degree positivity is done here.
    pub fn from_parts(g: &FiniteGroup, chi: DMatrix<Complex64>) -> Result<Self> {
        let k = g.num_classes();
        if chi.nrows() != k || chi.ncols() != k {
            return Err(Error::WrongLength {
                expected: k,
                got: chi.nrows().max(chi.ncols()),
            });
        }
        let class_sizes = g.classes().class_sizes.clone();
        let order = g.order();
        let degrees = (0..k)
            .map(|i| {
                let d = chi[(i, 0)].re.round();
                if d < 1.0 {
                    Err(Error::TableCorrupt(format!("irrep {i} has non-positive degree")))
                } else {
                    Ok(d as usize)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let chi_hat = DMatrix::from_fn(k, k, |i, j| {
            chi[(i, j)] * (class_sizes[j] as f64 / order as f64).sqrt()
        });
        Ok(CharacterTable {
            chi,
            class_sizes,
            group_order: order,
            degrees,
            chi_hat,
            inverse_class: g.classes().inverse_class.clone(),
            group_id: g.id(),
        })
    }

    pub fn group_id(&self) -> GroupId {
        self.group_id
    }

    pub fn num_irreps(&self) -> usize {
        self.chi.nrows()
    }

    pub fn num_classes(&self) -> usize {
        self.chi.ncols()
    }

    pub fn value(&self, irrep: usize, class: usize) -> Complex64 {
        self.chi[(irrep, class)]
    }

    pub fn row(&self, irrep: usize) -> Vec<Complex64> {
        self.chi.row(irrep).iter().copied().collect()
    }

    /// `<f, g> = sum_j (#C_j/|G|) conj(f(C_j)) g(C_j)`.
    pub fn inner(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        f.iter()
            .zip(g)
            .zip(&self.class_sizes)
            .map(|((a, b), &s)| a.conj() * b * (s as f64 / self.group_order as f64))
            .sum()
    }

    /// Index of the irrep whose character is the complex conjugate of `irrep`'s.
    pub fn conjugate_irrep(&self, irrep: usize) -> usize {
        let target: Vec<Complex64> = self.row(irrep).iter().map(|z| z.conj()).collect();
        (0..self.num_irreps())
            .min_by(|&a, &b| {
                let da = row_distance(&self.row(a), &target);
                let db = row_distance(&self.row(b), &target);
                da.total_cmp(&db)
            })
            .unwrap_or(irrep)
    }

    pub(crate) fn check_group(&self, g: &FiniteGroup) -> Result<()> {
        if self.group_id == g.id() {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub(crate) fn check_irrep(&self, r: usize) -> Result<()> {
        if r < self.num_irreps() {
            Ok(())
        } else {
            Err(Error::IrrepOutOfRange {
                index: r,
                count: self.num_irreps(),
            })
        }
    }
}

fn row_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Orthogonality, unitarity and integrality deviations of a table.
pub fn validate_table(ct: &CharacterTable) -> ValidationReport {
    let k = ct.num_irreps();
    let order = ct.group_order as f64;
    let mut row = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            let ip = ct.inner(&ct.row(i), &ct.row(j));
            let expect = if i == j { 1.0 } else { 0.0 };
            row = row.max((ip - expect).norm());
        }
    }
    let mut col = 0.0f64;
    for a in 0..k {
        for b in 0..k {
            let s: Complex64 = (0..k).map(|i| ct.chi[(i, a)].conj() * ct.chi[(i, b)]).sum();
            let expect = if a == b { order / ct.class_sizes[a] as f64 } else { 0.0 };
            col = col.max((s - expect).norm());
        }
    }
    let prod = &ct.chi_hat * ct.chi_hat.adjoint();
    let mut unitarity = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            let expect = if i == j { 1.0 } else { 0.0 };
            unitarity = unitarity.max((prod[(i, j)] - expect).norm());
        }
    }
    let degree_integrality = (0..k)
        .map(|i| (ct.chi[(i, 0)] - ct.degrees[i] as f64).norm())
        .fold(0.0, f64::max);
    let trivial_row = (0..k)
        .map(|j| (ct.chi[(0, j)] - 1.0).norm())
        .fold(0.0, f64::max);
    let degree_sum: usize = ct.degrees.iter().map(|d| d * d).sum();
    let mut report = ValidationReport {
        row_orthogonality: row,
        column_orthogonality: col,
        unitarity,
        degree_integrality,
        trivial_row,
        passed: false,
    };
    report.passed = report.max_deviation() <= tol::TABLE && degree_sum == ct.group_order;
    report
}

/// Multiplicities `n_ab^c` of irrep `c` in the tensor product of `a` and `b`.
pub fn fusion_coefficients(ct: &CharacterTable, a: usize, b: usize) -> Result<Vec<u32>> {
    ct.check_irrep(a)?;
    ct.check_irrep(b)?;
    let product: Vec<Complex64> = (0..ct.num_classes())
        .map(|j| ct.chi[(a, j)] * ct.chi[(b, j)])
        .collect();
    (0..ct.num_irreps())
        .map(|c| {
            let n = ct.inner(&ct.row(c), &product);
            let r = n.re.round();
            if (n - r).norm() > tol::FUSION_INTEGRALITY || r < 0.0 {
                Err(Error::TableCorrupt(format!(
                    "fusion coefficient n_{a}{b}^{c} = {n} is not a nonnegative integer"
                )))
            } else {
                Ok(r as u32)
            }
        })
        .collect()
}
