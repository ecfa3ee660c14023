//! JSON interchange format for Hermitian matrices.
//!
//! ```json
//! {"dim": 2, "real": [[1, 0], [0, 1]], "imag": [[0, 0], [0, 0]]}
//! ```
//!
//! `imag` is optional. Rows are row-major. Input that is Hermitian only up to
//! round-off is symmetrized; asymmetry above [`HARD_ASYMMETRY_LIMIT`] is rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use opconvex::HermitianMatrix;

use crate::error::{CliError, CliResult};

/// Asymmetry above which parsing emits a warning.
pub const WARN_ASYMMETRY: f64 = 1e-8;
/// Asymmetry above which parsing fails.
pub const HARD_ASYMMETRY_LIMIT: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub real: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imag: Option<Vec<Vec<f64>>>,
}

impl From<&HermitianMatrix> for MatrixFile {
    fn from(h: &HermitianMatrix) -> Self {
        Self {
            dim: h.dim(),
            real: h.real_rows(),
            // any set bit, so that −0.0 survives a round trip
            imag: h.as_matrix().iter().any(|z| z.im.to_bits() != 0).then(|| h.imag_rows()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ParsedMatrix {
    pub matrix: HermitianMatrix,
    /// `max |M − M†|` of the document before symmetrization.
    pub asymmetry: f64,
}

impl ParsedMatrix {
    pub fn warning(&self) -> Option<String> {
        (self.asymmetry > WARN_ASYMMETRY)
            .then(|| format!("input asymmetry {:.3e} exceeds {WARN_ASYMMETRY:e}; matrix was symmetrized", self.asymmetry))
    }
}

fn check_shape(name: &str, rows: &[Vec<f64>], dim: usize) -> CliResult<()> {
    if rows.len() != dim {
        return Err(CliError::DimensionMismatch(format!("`{name}` has {} rows, dim is {dim}", rows.len())));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != dim) {
        return Err(CliError::DimensionMismatch(format!("`{name}` row {i} has {} entries, dim is {dim}", r.len())));
    }
    Ok(())
}

pub fn parse_matrix_checked(text: &[u8]) -> CliResult<ParsedMatrix> {
    let doc: MatrixFile = serde_json::from_slice(text).map_err(|e| CliError::Malformed(e.to_string()))?;
    if doc.dim == 0 {
        return Err(CliError::Malformed("dim must be at least 1".into()));
    }
    check_shape("real", &doc.real, doc.dim)?;
    let imag = match doc.imag {
        Some(im) => {
            check_shape("imag", &im, doc.dim)?;
            im
        }
        None => vec![vec![0.0; doc.dim]; doc.dim],
    };

    let n = doc.dim;
    let mut asymmetry = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let dr = doc.real[i][j] - doc.real[j][i];
            let di = imag[i][j] + imag[j][i];
            asymmetry = asymmetry.max(dr.hypot(di));
        }
    }
    if asymmetry > HARD_ASYMMETRY_LIMIT {
        return Err(CliError::Asymmetric(asymmetry));
    }
    let matrix = HermitianMatrix::from_parts(&doc.real, &imag)?;
    Ok(ParsedMatrix { matrix, asymmetry })
}

pub fn parse_matrix(text: &[u8]) -> CliResult<HermitianMatrix> {
    parse_matrix_checked(text).map(|p| p.matrix)
}

pub fn serialize_matrix(h: &HermitianMatrix) -> String {
    serde_json::to_string(&MatrixFile::from(h)).expect("finite matrix serializes")
}

/// Reads and parses a matrix file, printing any asymmetry warning to stderr.
pub fn read_matrix(path: &Path) -> CliResult<HermitianMatrix> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let parsed = parse_matrix_checked(&bytes).map_err(|e| e.in_file(path))?;
    if let Some(w) = parsed.warning() {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(parsed.matrix)
}
