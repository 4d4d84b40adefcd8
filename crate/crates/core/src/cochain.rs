use nalgebra::DVector;

use crate::complex::CellRef;
use crate::error::{Error, Result};

/// A real signal on an ordered list of cells.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain {
    ids: Vec<CellRef>,
    values: Vec<f64>,
}

impl Cochain {
    pub fn new(ids: Vec<CellRef>, values: Vec<f64>) -> Result<Self> {
        if ids.len() != values.len() {
            return Err(Error::IndexMismatch(format!(
                "{} cells but {} values",
                ids.len(),
                values.len()
            )));
        }
        Ok(Cochain { ids, values })
    }

    pub fn zeros(ids: Vec<CellRef>) -> Self {
        let values = vec![0.0; ids.len()];
        Cochain { ids, values }
    }

    pub(crate) fn from_vector(ids: Vec<CellRef>, v: &DVector<f64>) -> Self {
        debug_assert_eq!(ids.len(), v.len());
        Cochain {
            ids,
            values: v.iter().copied().collect(),
        }
    }

    pub fn ids(&self) -> &[CellRef] {
        &self.ids
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, cell: &CellRef) -> Option<f64> {
        self.ids
            .iter()
            .position(|c| c == cell)
            .map(|i| self.values[i])
    }

    pub fn to_vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.values)
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &Cochain) -> Result<f64> {
        self.check_same(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: f64) -> Cochain {
        Cochain {
            ids: self.ids.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    fn zip_with(&self, other: &Cochain, f: impl Fn(f64, f64) -> f64) -> Result<Cochain> {
        self.check_same(other)?;
        Ok(Cochain {
            ids: self.ids.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        })
    }

    /// Fails unless the cochain is indexed exactly by `ids`.
    pub fn check_index(&self, ids: &[CellRef]) -> Result<()> {
        if self.ids == ids {
            return Ok(());
        }
        let detail = match self.ids.iter().zip(ids).find(|(a, b)| a != b) {
            Some((found, expected)) => format!("expected {expected}, found {found}"),
            None => format!("expected {} cells, found {}", ids.len(), self.ids.len()),
        };
        Err(Error::IndexMismatch(detail))
    }

    fn check_same(&self, other: &Cochain) -> Result<()> {
        other.check_index(&self.ids)
    }
}
