//! JSON shapes: matrices are row-major nested arrays, complex entries are
//! `[re, im]` pairs.

use crate::linalg::{CMat, RMat};
use crate::{Error, Result};
use num_complex::Complex64;

pub type Rows = Vec<Vec<f64>>;
pub type ComplexRows = Vec<Vec<[f64; 2]>>;

pub fn to_rows(m: &RMat) -> Rows {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn from_rows(rows: &[Vec<f64>]) -> Result<RMat> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::InvalidDimension("ragged matrix rows".into()));
    }
    Ok(RMat::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

pub fn to_complex_rows(m: &CMat) -> ComplexRows {
    m.row_iter().map(|r| r.iter().map(|c| [c.re, c.im]).collect()).collect()
}

pub fn from_complex_rows(rows: &[Vec<[f64; 2]>]) -> Result<CMat> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::InvalidDimension("ragged matrix rows".into()));
    }
    Ok(CMat::from_fn(nrows, ncols, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_are_row_major() {
        let m = RMat::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(to_rows(&m), vec![vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]);
        assert_eq!(from_rows(&to_rows(&m)).unwrap(), m);
    }

    #[test]
    fn complex_entries_are_pairs() {
        let m = CMat::from_row_slice(1, 2, &[Complex64::new(1.0, -2.0), Complex64::new(0.5, 0.0)]);
        let json = serde_json::to_string(&to_complex_rows(&m)).unwrap();
        assert_eq!(json, "[[[1.0,-2.0],[0.5,0.0]]]");
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(from_rows(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    }
}
