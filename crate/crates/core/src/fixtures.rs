//! Published conventions for S3, Q8 and S4: printed character tables and the
//! permutations between their class/irrep order and the canonical one.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::characters::CharacterTable;
use crate::error::{Error, Result};

const S3_JSON: &str = include_str!("../data/paper_order/S3.json");
const Q8_JSON: &str = include_str!("../data/paper_order/Q8.json");
const S4_JSON: &str = include_str!("../data/paper_order/S4.json");

/// Position `j` of the published order is canonical class `class_order[j]`,
/// and published row `i` is canonical irrep `irrep_order[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PaperOrder {
    pub group: String,
    pub class_order: Vec<usize>,
    pub irrep_order: Vec<usize>,
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&i| i < p.len() && !std::mem::replace(&mut seen[i], true))
}

impl PaperOrder {
    pub fn from_json(s: &str) -> Result<Self> {
        let order: PaperOrder = serde_json::from_str(s).map_err(|e| Error::InvalidInput(e.to_string()))?;
        if order.class_order.len() != order.irrep_order.len() {
            return Err(Error::InvalidInput("class and irrep orders differ in length".into()));
        }
        if !is_permutation(&order.class_order) || !is_permutation(&order.irrep_order) {
            return Err(Error::InvalidInput("order is not a permutation".into()));
        }
        Ok(order)
    }

    /// Built-in order for `S3`, `Q8` or `S4`.
    pub fn builtin(group: &str) -> Option<Self> {
        let json = match group {
            "S3" => S3_JSON,
            "Q8" => Q8_JSON,
            "S4" => S4_JSON,
            _ => return None,
        };
        Some(Self::from_json(json).expect("shipped order files are valid"))
    }

    pub fn len(&self) -> usize {
        self.class_order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_order.is_empty()
    }

    /// Reorder per-class values from published to canonical order.
    pub fn classes_to_canonical<T: Copy + Default>(&self, values: &[T]) -> Result<Vec<T>> {
        self.check_len(values.len())?;
        let mut out = vec![T::default(); values.len()];
        for (j, &c) in self.class_order.iter().enumerate() {
            out[c] = values[j];
        }
        Ok(out)
    }

    pub fn classes_to_paper<T: Copy>(&self, values: &[T]) -> Result<Vec<T>> {
        self.check_len(values.len())?;
        Ok(self.class_order.iter().map(|&c| values[c]).collect())
    }

    pub fn irreps_to_paper<T: Copy>(&self, values: &[T]) -> Result<Vec<T>> {
        self.check_len(values.len())?;
        Ok(self.irrep_order.iter().map(|&r| values[r]).collect())
    }

    pub fn irreps_to_canonical<T: Copy + Default>(&self, values: &[T]) -> Result<Vec<T>> {
        self.check_len(values.len())?;
        let mut out = vec![T::default(); values.len()];
        for (i, &r) in self.irrep_order.iter().enumerate() {
            out[r] = values[i];
        }
        Ok(out)
    }

    /// The table with rows and columns in published order.
    pub fn table_to_paper(&self, ct: &CharacterTable) -> Result<DMatrix<Complex64>> {
        self.check_len(ct.num_classes())?;
        Ok(DMatrix::from_fn(self.len(), self.len(), |i, j| {
            ct.chi[(self.irrep_order[i], self.class_order[j])]
        }))
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.len() {
            return Err(Error::WrongLength {
                expected: self.len(),
                got,
            });
        }
        Ok(())
    }
}

/// A printed integer character table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoldenTable {
    pub group: &'static str,
    pub chi: Vec<Vec<i64>>,
    pub class_sizes: Vec<usize>,
}

impl GoldenTable {
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let k = self.chi.len();
        DMatrix::from_fn(k, k, |i, j| Complex64::new(self.chi[i][j] as f64, 0.0))
    }
}

pub fn golden_table(group: &str) -> Option<GoldenTable> {
    let (group, chi, class_sizes): (&'static str, &[&[i64]], &[usize]) = match group {
        "S3" => ("S3", &[&[1, 1, 1], &[2, 0, -1], &[1, -1, 1]], &[1, 3, 2]),
        "Q8" => (
            "Q8",
            &[
                &[1, 1, 1, 1, 1],
                &[1, 1, 1, -1, -1],
                &[1, 1, -1, 1, -1],
                &[1, 1, -1, -1, 1],
                &[2, -2, 0, 0, 0],
            ],
            &[1, 1, 2, 2, 2],
        ),
        "S4" => (
            "S4",
            &[
                &[1, 1, 1, 1, 1],
                &[3, 1, 0, -1, -1],
                &[2, 0, -1, 2, 0],
                &[3, -1, 0, -1, 1],
                &[1, -1, 1, 1, -1],
            ],
            &[1, 6, 8, 3, 6],
        ),
        _ => return None,
    };
    Some(GoldenTable {
        group,
        chi: chi.iter().map(|r| r.to_vec()).collect(),
        class_sizes: class_sizes.to_vec(),
    })
}

/// Largest entrywise deviation between a computed table, viewed in published
/// order, and the printed one.
pub fn golden_deviation(ct: &CharacterTable, order: &PaperOrder, golden: &GoldenTable) -> Result<f64> {
    let t = order.table_to_paper(ct)?;
    let m = golden.matrix();
    if t.shape() != m.shape() {
        return Err(Error::WrongLength {
            expected: m.nrows(),
            got: t.nrows(),
        });
    }
    let sizes = order.classes_to_paper(&ct.class_sizes)?;
    if sizes != golden.class_sizes {
        return Ok(f64::INFINITY);
    }
    Ok((t - m).iter().map(|z| z.norm()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::character_table;
    use crate::group::build_group;

    #[test]
    fn computed_tables_match_printed_ones() {
        for name in ["S3", "Q8", "S4"] {
            let g = build_group(name).unwrap();
            let ct = character_table(&g).unwrap();
            let order = PaperOrder::builtin(name).unwrap();
            let dev = golden_deviation(&ct, &order, &golden_table(name).unwrap()).unwrap();
            assert!(dev < 1e-9, "{name}: {dev}");
        }
    }

    #[test]
    fn reorderings_are_inverse() {
        let order = PaperOrder::builtin("S4").unwrap();
        let v = [0.0, 1.0, 2.0, 3.0, 4.0];
        let c = order.classes_to_canonical(&v).unwrap();
        assert_eq!(order.classes_to_paper(&c).unwrap(), v);
        let r = order.irreps_to_canonical(&v).unwrap();
        assert_eq!(order.irreps_to_paper(&r).unwrap(), v);
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(PaperOrder::from_json(r#"{"group":"x","class_order":[0,0],"irrep_order":[0,1]}"#).is_err());
        assert!(PaperOrder::from_json(r#"{"group":"x","class_order":[0,1],"irrep_order":[0]}"#).is_err());
        assert!(PaperOrder::from_json(r#"{"group":"x","class_order":[0,2],"irrep_order":[1,0]}"#).is_err());
        assert!(PaperOrder::from_json("[").is_err());
        assert!(PaperOrder::builtin("S5").is_none());
    }
}
