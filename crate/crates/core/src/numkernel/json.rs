use serde::{Deserialize, Serialize};

use super::{c, CMatrix};
use crate::error::{Error, Result};

/// Wire format for a dense complex matrix:
/// `{"rows": n, "cols": m, "entries": [[re, im], ...]}` in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let mut entries = Vec::with_capacity(m.nrows() * m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            entries,
        }
    }

    /// Rejects a wrong entry count and any NaN or infinite component.
    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::InvalidInput("matrix dimensions must be positive".into()));
        }
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {}x{} matrix, found {}",
                self.rows * self.cols,
                self.rows,
                self.cols,
                self.entries.len()
            )));
        }
        if self
            .entries
            .iter()
            .any(|[re, im]| !re.is_finite() || !im.is_finite())
        {
            return Err(Error::InvalidInput("matrix entries must be finite".into()));
        }
        Ok(CMatrix::from_fn(self.rows, self.cols, |i, j| {
            let [re, im] = self.entries[i * self.cols + j];
            c(re, im)
        }))
    }
}

impl From<&CMatrix> for MatrixJson {
    fn from(m: &CMatrix) -> Self {
        Self::from_matrix(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_layout() {
        let m = CMatrix::from_fn(2, 3, |i, j| c((3 * i + j) as f64, -(j as f64)));
        let j = MatrixJson::from_matrix(&m);
        assert_eq!(j.entries[1], [1.0, -1.0]);
        assert_eq!(j.entries[3], [3.0, 0.0]);
        assert_eq!(j.to_matrix().unwrap(), m);
    }

    #[test]
    fn rejects_bad_input() {
        let short = MatrixJson {
            rows: 2,
            cols: 2,
            entries: vec![[1.0, 0.0]],
        };
        assert!(short.to_matrix().is_err());
        let nan = MatrixJson {
            rows: 1,
            cols: 1,
            entries: vec![[f64::NAN, 0.0]],
        };
        assert!(nan.to_matrix().is_err());
        let text = r#"{"rows":1,"cols":1,"entries":[[1e400,0]]}"#;
        let parsed: std::result::Result<MatrixJson, _> = serde_json::from_str(text);
        assert!(parsed.is_err() || parsed.unwrap().to_matrix().is_err());
    }
}
