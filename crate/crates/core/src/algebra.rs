//! The group algebra: complex combinations of left-regular operators `lambda(g)`.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// Coefficients of `lambda(g)` indexed by canonical element id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupAlgebraElement {
    pub coeffs: Vec<Complex64>,
}

impl GroupAlgebraElement {
    pub fn zero(order: usize) -> Self {
        GroupAlgebraElement {
            coeffs: vec![Complex64::new(0.0, 0.0); order],
        }
    }

    /// `lambda(g)`.
    pub fn basis(order: usize, g: usize) -> Self {
        let mut x = Self::zero(order);
        x.coeffs[g] = Complex64::new(1.0, 0.0);
        x
    }

    /// `lambda(e)`, the unit.
    pub fn unit(order: usize) -> Self {
        Self::basis(order, 0)
    }

    pub fn from_coeffs(g: &FiniteGroup, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != g.order() {
            return Err(Error::WrongLength {
                expected: g.order(),
                got: coeffs.len(),
            });
        }
        if coeffs.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite);
        }
        Ok(GroupAlgebraElement { coeffs })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Convolution product induced by `lambda(g) lambda(h) = lambda(gh)`.
    pub fn mul(&self, other: &Self, g: &FiniteGroup) -> Self {
        let mut out = Self::zero(g.order());
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.norm_sqr() == 0.0 {
                continue;
            }
            for (b, y) in other.coeffs.iter().enumerate() {
                out.coeffs[g.mul(a, b)] += x * y;
            }
        }
        out
    }

    /// `sum a_g lambda(g) -> sum conj(a_g) lambda(g^-1)`.
    pub fn star(&self, g: &FiniteGroup) -> Self {
        let mut out = Self::zero(g.order());
        for (a, x) in self.coeffs.iter().enumerate() {
            out.coeffs[g.inv(a)] = x.conj();
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        GroupAlgebraElement {
            coeffs: self.coeffs.iter().map(|x| x * s).collect(),
        }
    }

    /// `<x, y> = <delta_e, x* y delta_e>`, i.e. the coefficient of `lambda(e)` in `x* y`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x.conj() * y)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.max(0.0).sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

impl Add for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;

    fn add(self, rhs: Self) -> GroupAlgebraElement {
        GroupAlgebraElement {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;

    fn sub(self, rhs: Self) -> GroupAlgebraElement {
        GroupAlgebraElement {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<f64> for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;

    fn mul(self, rhs: f64) -> GroupAlgebraElement {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;
    use proptest::prelude::*;

    fn element(order: usize) -> impl Strategy<Value = GroupAlgebraElement> {
        prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), order).prop_map(|v| GroupAlgebraElement {
            coeffs: v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect(),
        })
    }

    #[test]
    fn basis_products_follow_the_table() {
        let g = build_group("Q8").unwrap();
        for a in g.elements() {
            for b in g.elements() {
                let p = GroupAlgebraElement::basis(8, a).mul(&GroupAlgebraElement::basis(8, b), &g);
                assert_eq!(p, GroupAlgebraElement::basis(8, g.mul(a, b)));
            }
        }
    }

    proptest! {
        #[test]
        fn star_is_antilinear_involution(x in element(6), y in element(6)) {
            let g = build_group("S3").unwrap();
            prop_assert!(x.star(&g).star(&g).max_abs_diff(&x) < 1e-15);
            // (xy)* = y* x*
            let lhs = x.mul(&y, &g).star(&g);
            let rhs = y.star(&g).mul(&x.star(&g), &g);
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }

        #[test]
        fn product_is_associative(x in element(8), y in element(8), z in element(8)) {
            let g = build_group("D4").unwrap();
            let a = x.mul(&y, &g).mul(&z, &g);
            let b = x.mul(&y.mul(&z, &g), &g);
            prop_assert!(a.max_abs_diff(&b) < 1e-12);
        }
    }

    #[test]
    fn inner_product_is_coefficient_of_unit() {
        let g = build_group("S3").unwrap();
        let x = GroupAlgebraElement {
            coeffs: (0..6).map(|i| Complex64::new(i as f64, 1.0)).collect(),
        };
        let y = GroupAlgebraElement {
            coeffs: (0..6).map(|i| Complex64::new(1.0, -(i as f64))).collect(),
        };
        let via_product = x.star(&g).mul(&y, &g).coeffs[0];
        assert!((via_product - x.inner(&y)).norm() < 1e-12);
    }
}
