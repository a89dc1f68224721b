//! Class-function length functions and conditional negative-definiteness.
//!
//! Three independent deciders are provided:
//!
//! * [`is_cond_negative_definition`]: the quadratic form `sum a_i conj(a_j) l(g_i^-1 g_j)`
//!   restricted to coefficient vectors summing to zero, via a dense eigensolver.
//! * [`kernel_sweep`]: positive semidefiniteness of `exp(-t l(g h^-1))` over a grid of `t`.
//! * [`is_cond_negative_constraints`]: nonnegativity of the linear functionals
//!   `Phi_i(l) = -sum_j (#C_j/|G|) l(C_j) conj(chi_i(C_j))` for every nontrivial irrep.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::characters::CharacterTable;
use crate::error::{Error, Result};
use crate::group::{build_group, FiniteGroup, GroupId};
use crate::linalg;
use crate::tol;

/// Number of log-spaced points in the standard time grid.
pub const T_GRID_POINTS: usize = 25;
pub const T_GRID_MIN_LOG2: f64 = -8.0;
pub const T_GRID_MAX_LOG2: f64 = 3.0;
/// Extra small-time probes used by the kernel route (log2 of t).
pub const SMALL_T_PROBES_LOG2: [f64; 4] = [-32.0, -24.0, -16.0, -12.0];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthFunction {
    values: Vec<f64>,
    strict: bool,
    #[serde(skip)]
    group_id: GroupId,
}

impl LengthFunction {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Positive on every non-identity class.
    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn group_id(&self) -> GroupId {
        self.group_id
    }

    /// Value on a group element.
    pub fn at(&self, g: &FiniteGroup, element: usize) -> f64 {
        self.values[g.class_of(element)]
    }

    pub fn scaled(&self, factor: f64) -> Result<LengthFunction> {
        self.combine(factor, self, 0.0)
    }

    /// `a * self + b * other`, revalidated.
    pub fn combine(&self, a: f64, other: &LengthFunction, b: f64) -> Result<LengthFunction> {
        if self.group_id != other.group_id {
            return Err(Error::GroupMismatch);
        }
        let values: Vec<f64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        let strict = values[1..].iter().all(|&v| v > 0.0);
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some((class, &value)) = values.iter().enumerate().find(|(_, v)| **v < 0.0) {
            return Err(Error::NegativeValue { class, value });
        }
        Ok(LengthFunction {
            values,
            strict,
            group_id: self.group_id,
        })
    }

    pub(crate) fn check_group(&self, id: GroupId) -> Result<()> {
        if self.group_id == id {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }
}

/// Validate per-class values as a length function on `g`.
pub fn make_length(g: &FiniteGroup, values: &[f64]) -> Result<LengthFunction> {
    let strict = validate_values(values, &g.classes().inverse_class)?;
    Ok(LengthFunction {
        values: values.to_vec(),
        strict,
        group_id: g.id(),
    })
}

/// Returns the strictness flag.
fn validate_values(values: &[f64], inverse_class: &[usize]) -> Result<bool> {
    if values.len() != inverse_class.len() {
        return Err(Error::WrongLength {
            expected: inverse_class.len(),
            got: values.len(),
        });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    if values[0] != 0.0 {
        return Err(Error::NonzeroAtIdentity(values[0]));
    }
    if let Some((class, &value)) = values.iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Err(Error::NegativeValue { class, value });
    }
    for (class, &inverse) in inverse_class.iter().enumerate() {
        if (values[class] - values[inverse]).abs() > tol::LENGTH_SYMMETRY {
            return Err(Error::InversionAsymmetric { class, inverse });
        }
    }
    Ok(values[1..].iter().all(|&v| v > 0.0))
}

/// `l(C) = (n - #cycles(C))^exponent` on `S_n`, in canonical class order.
pub fn word_length_from_cycles(n: usize, exponent: f64) -> Result<LengthFunction> {
    if !(exponent.is_finite() && exponent > 0.0) {
        return Err(Error::NonFinite);
    }
    let g = build_group(&format!("S{n}"))?;
    let values: Vec<f64> = (0..g.num_classes())
        .map(|c| {
            let perm = g
                .permutation(g.classes().representative(c))
                .expect("symmetric groups are permutation groups");
            let moved = n - cycle_count(perm, n);
            if moved == 0 {
                0.0
            } else {
                (moved as f64).powf(exponent)
            }
        })
        .collect();
    make_length(&g, &values)
}

/// Cycles of a permutation on the first `n` points, fixed points included.
pub fn cycle_count(images: &[u8], n: usize) -> usize {
    let mut seen = vec![false; n];
    let mut cycles = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = images.get(x).map_or(x, |&y| y as usize);
        }
    }
    cycles
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DefinitionVerdict {
    pub holds: bool,
    /// Largest eigenvalue of the length matrix projected onto sum-zero vectors.
    pub max_eigenvalue: f64,
    /// A sum-zero coefficient vector on which the form is positive, when it fails.
    pub witness: Option<Vec<f64>>,
}

/// Conditional negativity straight from the definition.
pub fn is_cond_negative_definition(g: &FiniteGroup, l: &LengthFunction) -> Result<DefinitionVerdict> {
    l.check_group(g.id())?;
    let n = g.order();
    let m = DMatrix::from_fn(n, n, |i, j| l.at(g, g.mul(g.inv(i), j)));
    let projected = linalg::center(&m);
    let (max_eigenvalue, vector) = linalg::max_eigenpair(&projected);
    let holds = max_eigenvalue <= tol::PSD;
    Ok(DefinitionVerdict {
        holds,
        max_eigenvalue,
        witness: (!holds).then(|| vector.iter().copied().collect()),
    })
}

/// `K_ij = exp(-t l(g_i g_j^-1))`.
pub fn schoenberg_kernel(g: &FiniteGroup, l: &LengthFunction, t: f64) -> Result<DMatrix<f64>> {
    l.check_group(g.id())?;
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::TimeOutOfRange(t));
    }
    let n = g.order();
    Ok(DMatrix::from_fn(n, n, |i, j| {
        (-t * l.at(g, g.mul(i, g.inv(j)))).exp()
    }))
}

/// The standard 25-point log grid on `[2^-8, 2^3]`.
pub fn t_grid() -> Vec<f64> {
    let steps = (T_GRID_POINTS - 1) as f64;
    (0..T_GRID_POINTS)
        .map(|k| {
            let e = T_GRID_MIN_LOG2 + (T_GRID_MAX_LOG2 - T_GRID_MIN_LOG2) * k as f64 / steps;
            e.exp2()
        })
        .collect()
}

/// Standard grid preceded by the small-time probes.
pub fn kernel_probe_grid() -> Vec<f64> {
    SMALL_T_PROBES_LOG2
        .iter()
        .map(|e| e.exp2())
        .chain(t_grid())
        .collect()
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct KernelPoint {
    pub t: f64,
    /// Minimum eigenvalue of the kernel; below the standard grid this is the
    /// minimum over sum-zero vectors divided by `t`.
    pub min_eigenvalue: f64,
    pub psd: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct KernelSweep {
    pub holds: bool,
    pub points: Vec<KernelPoint>,
}

impl KernelSweep {
    pub fn first_failure(&self) -> Option<&KernelPoint> {
        self.points.iter().find(|p| !p.psd)
    }
}

/// Kernel positivity on the default probe grid.
pub fn kernel_sweep(g: &FiniteGroup, l: &LengthFunction) -> Result<KernelSweep> {
    kernel_sweep_on(g, l, &kernel_probe_grid())
}

/// Kernel positivity at every `t` in `grid`.
///
/// For `t >= 2^-8` the kernel is built directly and its minimum eigenvalue must be
/// at least `-1e-9`. Smaller `t` use `K = J - t M` with `M = (1 - exp(-t l)) / t`
/// evaluated through `expm1`: the all-ones vector is an eigenvector of `K` with
/// positive eigenvalue, and on its complement `K` equals `-t P M P`, so the test
/// becomes `max eig(P M P) <= 1e-9`.
pub fn kernel_sweep_on(g: &FiniteGroup, l: &LengthFunction, grid: &[f64]) -> Result<KernelSweep> {
    l.check_group(g.id())?;
    let small = T_GRID_MIN_LOG2.exp2();
    let n = g.order();
    let points = grid
        .iter()
        .map(|&t| {
            let min_eigenvalue = if t >= small {
                linalg::min_symmetric_eigenvalue(&schoenberg_kernel(g, l, t)?)
            } else {
                if !(t.is_finite() && t > 0.0) {
                    return Err(Error::TimeOutOfRange(t));
                }
                let m = DMatrix::from_fn(n, n, |i, j| {
                    -(-t * l.at(g, g.mul(i, g.inv(j)))).exp_m1() / t
                });
                -linalg::max_eigenpair(&linalg::center(&m)).0
            };
            Ok(KernelPoint {
                t,
                min_eigenvalue,
                psd: min_eigenvalue >= -tol::PSD,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KernelSweep {
        holds: points.iter().all(|p| p.psd),
        points,
    })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PhiVector {
    /// `Phi_i(l)` for every irrep, trivial first.
    pub full: Vec<f64>,
}

impl PhiVector {
    /// Entries for the nontrivial irreps.
    pub fn constrained(&self) -> &[f64] {
        &self.full[1..]
    }
}

/// `Phi_i(l) = -sum_j (#C_j/|G|) l(C_j) conj(chi_ij)`, the derivative of `p_i` at `t = 0`.
pub fn phi(ct: &CharacterTable, l: &LengthFunction) -> Result<PhiVector> {
    l.check_group(ct.group_id())?;
    let lc: Vec<Complex64> = l.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let full = (0..ct.num_irreps())
        .map(|i| {
            // inner() conjugates its first argument
            let z = -ct.inner(&ct.row(i), &lc);
            if z.im.abs() > tol::IMAGINARY_RESIDUE {
                Err(Error::ImaginaryResidueTooLarge(z.im.abs()))
            } else {
                Ok(z.re)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhiVector { full })
}

/// Recover the length whose nontrivial `Phi` entries are `constrained`.
///
/// `Phi_1` is fixed by the sum rule `sum_i chi_i(e) Phi_i = 0` (which encodes
/// `l(e) = 0`), then the linear system `-conj(chi) D l = Phi` is solved.
pub fn phi_inverse(ct: &CharacterTable, constrained: &[f64]) -> Result<LengthFunction> {
    let k = ct.num_irreps();
    if constrained.len() + 1 != k {
        return Err(Error::WrongLength {
            expected: k - 1,
            got: constrained.len(),
        });
    }
    if constrained.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let phi1: f64 = -constrained
        .iter()
        .zip(&ct.degrees[1..])
        .map(|(x, &d)| x * d as f64)
        .sum::<f64>();
    let rhs = DVector::from_iterator(
        k,
        std::iter::once(phi1)
            .chain(constrained.iter().copied())
            .map(|x| Complex64::new(x, 0.0)),
    );
    let order = ct.group_order as f64;
    let a = DMatrix::from_fn(k, k, |i, j| {
        -ct.chi[(i, j)].conj() * (ct.class_sizes[j] as f64 / order)
    });
    let solution = a.lu().solve(&rhs).ok_or(Error::SingularSystem)?;
    let scale = solution.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut values = Vec::with_capacity(k);
    for (j, z) in solution.iter().enumerate() {
        if z.im.abs() > tol::IMAGINARY_RESIDUE * scale {
            return Err(Error::ImaginaryResidueTooLarge(z.im.abs()));
        }
        let v = if z.re.abs() <= 1e-12 * scale || j == 0 { 0.0 } else { z.re };
        values.push(v);
    }
    // exact inversion symmetry
    let sym: Vec<f64> = (0..k)
        .map(|c| 0.5 * (values[c] + values[ct.inverse_class[c]]))
        .collect();
    let strict = validate_values(&sym, &ct.inverse_class)?;
    Ok(LengthFunction {
        values: sym,
        strict,
        group_id: ct.group_id(),
    })
}

/// Conditional negativity via the semidefinite linear constraints `Phi_i(l) >= 0`, `i >= 2`.
pub fn is_cond_negative_constraints(ct: &CharacterTable, l: &LengthFunction) -> Result<bool> {
    let p = phi(ct, l)?;
    Ok(p.constrained().iter().all(|&x| x >= -tol::PSD))
}
