//! The matrix exchange format: JSON with complex entries as `[re, im]` pairs.

use std::path::Path;

use kipp_core::linalg::{ComplexMatrix, C64};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed matrix document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("matrix document declares n = {n} but row {row} has {len} entries")]
    RowLength { n: usize, row: usize, len: usize },
    #[error("matrix document declares n = {n} but has {rows} rows")]
    RowCount { n: usize, rows: usize },
    #[error("matrix document has n = 0")]
    Empty,
    #[error("entry ({row}, {col}) is not finite")]
    NotFinite { row: usize, col: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub n: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

impl MatrixDocument {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        assert!(m.is_square(), "matrix documents hold square matrices");
        let n = m.rows();
        let entries = (0..n).map(|i| (0..n).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
        Self {
            n,
            entries,
            label: None,
            source: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = Some(source.into());
        self
    }

    /// Checks the declared shape and finiteness.
    pub fn check(&self) -> Result<(), FormatError> {
        if self.n == 0 {
            return Err(FormatError::Empty);
        }
        if self.entries.len() != self.n {
            return Err(FormatError::RowCount {
                n: self.n,
                rows: self.entries.len(),
            });
        }
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.n {
                return Err(FormatError::RowLength {
                    n: self.n,
                    row: i,
                    len: row.len(),
                });
            }
            if let Some(j) = row.iter().position(|z| !z[0].is_finite() || !z[1].is_finite()) {
                return Err(FormatError::NotFinite { row: i, col: j });
            }
        }
        Ok(())
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, FormatError> {
        self.check()?;
        Ok(ComplexMatrix::from_fn(self.n, self.n, |i, j| {
            let [re, im] = self.entries[i][j];
            C64::new(re, im)
        }))
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let doc: Self = serde_json::from_str(text)?;
        doc.check()?;
        Ok(doc)
    }

    pub fn load(path: &Path) -> Result<Self, FormatError> {
        let text = std::fs::read_to_string(path).map_err(|source| FormatError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }
}
