//! Validated collection of data points, optionally with row labels.

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// N points of dimension n, every entry finite. Labels, when present,
/// are unique and aligned with the rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    points: Matrix,
    labels: Option<Vec<String>>,
}

impl Dataset {
    pub fn new(points: Matrix) -> Result<Self> {
        for (i, row) in points.iter_rows().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        row: i + 1,
                        col: j + 1,
                    });
                }
            }
        }
        Ok(Self {
            points,
            labels: None,
        })
    }

    pub fn with_labels(points: Matrix, labels: Vec<String>) -> Result<Self> {
        if labels.len() != points.rows() {
            return Err(Error::LabelCountMismatch {
                labels: labels.len(),
                points: points.rows(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        let mut data = Self::new(points)?;
        data.labels = Some(labels);
        Ok(data)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    /// Number of points N.
    pub fn len(&self) -> usize {
        self.points.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.points.rows() == 0
    }

    /// Feature dimension n.
    pub fn dim(&self) -> usize {
        self.points.cols()
    }

    pub fn point(&self, j: usize) -> &[f64] {
        self.points.row(j)
    }

    pub fn points(&self) -> &Matrix {
        &self.points
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_entries() {
        let err = Dataset::from_rows(&[vec![1.0, f64::NAN]]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { row: 1, col: 2 }));
        let err = Dataset::from_rows(&[vec![1.0], vec![f64::INFINITY]]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { row: 2, col: 1 }));
    }

    #[test]
    fn rejects_duplicate_labels() {
        let m = Matrix::from_rows(&[vec![1.0], vec![2.0]]).unwrap();
        let err = Dataset::with_labels(m, vec!["a".into(), "a".into()]).unwrap_err();
        assert!(matches!(err, Error::DuplicateLabel(l) if l == "a"));
    }

    #[test]
    fn rejects_label_count_mismatch() {
        let m = Matrix::from_rows(&[vec![1.0], vec![2.0]]).unwrap();
        let err = Dataset::with_labels(m, vec!["a".into()]).unwrap_err();
        assert!(matches!(
            err,
            Error::LabelCountMismatch {
                labels: 1,
                points: 2
            }
        ));
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(matches!(
            Dataset::from_rows(&[]).unwrap_err(),
            Error::EmptyDataset
        ));
    }
}
