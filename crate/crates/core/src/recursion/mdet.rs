use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec};

/// Relative tolerance for the pairwise commutation check.
pub const COMMUTE_TOL: f64 = 1e-10;

/// An `m x m` grid whose cells are `k x k` matrices.
#[derive(Debug, Clone)]
pub struct MatrixGrid {
    m: usize,
    k: usize,
    cells: Vec<CMat>,
}

impl MatrixGrid {
    /// `cells` in row-major order.
    pub fn new(m: usize, cells: Vec<CMat>) -> Result<MatrixGrid> {
        if m == 0 || cells.len() != m * m {
            return Err(Error::InvalidArgument(format!("a {m}x{m} grid needs {} cells, got {}", m * m, cells.len())));
        }
        let k = cells[0].nrows();
        if cells.iter().any(|c| c.nrows() != k || c.ncols() != k) {
            return Err(Error::InvalidArgument("grid cells must be square and of equal size".into()));
        }
        Ok(MatrixGrid { m, k, cells })
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn cell_size(&self) -> usize {
        self.k
    }

    pub fn cell(&self, row: usize, col: usize) -> &CMat {
        &self.cells[row * self.m + col]
    }

    /// Checks `‖A(Bv) - B(Av)‖ ≤ tol ‖A‖ ‖B‖ ‖v‖` on a fixed probe vector for every pair of
    /// cells. A full `AB - BA` would cost `k³` per pair; the probe keeps this at `k²`.
    pub fn check_commuting(&self, tol: f64) -> Result<()> {
        let probe = CVec::from_fn(self.k, |i, _| Complex64::new(1.0 + 0.37 * i as f64, 0.61 - 0.13 * i as f64).unit_scale());
        let norms: Vec<f64> = self.cells.iter().map(|c| c.norm()).collect();
        let images: Vec<CVec> = self.cells.iter().map(|c| c * &probe).collect();
        for a in 0..self.cells.len() {
            for b in a + 1..self.cells.len() {
                let diff = &self.cells[a] * &images[b] - &self.cells[b] * &images[a];
                let scale = norms[a] * norms[b] * probe.norm();
                let residual = if scale > 0.0 { diff.norm() / scale } else { 0.0 };
                if residual > tol {
                    return Err(Error::NonCommuting { a, b, residual });
                }
            }
        }
        Ok(())
    }
}

trait UnitScale {
    fn unit_scale(self) -> Self;
}

impl UnitScale for Complex64 {
    fn unit_scale(self) -> Self {
        self / self.norm()
    }
}

/// `Σ_σ sgn(σ) ∏_i M_{i,σ(i)}`.
pub fn mdet(grid: &MatrixGrid) -> Result<CMat> {
    grid.check_commuting(COMMUTE_TOL)?;
    let k = grid.cell_size();
    let cols = (0..k).map(|j| {
        let e = CVec::from_fn(k, |i, _| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) });
        expand(grid, &e)
    });
    let cols: Vec<CVec> = cols.collect();
    Ok(CMat::from_columns(&cols))
}

/// `Mdet(grid) · v` without forming any `k x k` product.
pub fn mdet_apply(grid: &MatrixGrid, v: &CVec) -> Result<CVec> {
    if v.len() != grid.cell_size() {
        return Err(Error::RankMismatch { expected: grid.cell_size(), got: v.len() });
    }
    grid.check_commuting(COMMUTE_TOL)?;
    Ok(expand(grid, v))
}

/// Laplace expansion from the last row up, memoized over the set of used columns:
/// `W(S) = Σ_{c ∈ S} (-1)^{#{c' ∈ S : c' < c}} M_{m-|S|, c} W(S \ c)`, `W(∅) = v`.
fn expand(grid: &MatrixGrid, v: &CVec) -> CVec {
    let m = grid.size();
    let mut memo: Vec<Option<CVec>> = vec![None; 1 << m];
    memo[0] = Some(v.clone());
    for set in 1usize..1 << m {
        let row = m - set.count_ones() as usize;
        let mut acc = CVec::zeros(v.len());
        for c in (0..m).filter(|c| set >> c & 1 == 1) {
            let below = (set & ((1 << c) - 1)).count_ones();
            let w = memo[set & !(1 << c)].as_ref().expect("subsets are filled first");
            let term = grid.cell(row, c) * w;
            if below % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        memo[set] = Some(acc);
    }
    memo.pop().flatten().expect("full set computed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, max_abs};

    #[test]
    fn one_by_one_grid() {
        let a = CMat::from_fn(3, 3, |i, j| c((i * 3 + j) as f64));
        assert_eq!(mdet(&MatrixGrid::new(1, vec![a.clone()]).unwrap()).unwrap(), a);
    }

    #[test]
    fn scalar_cells() {
        let id = CMat::identity(4, 4);
        let grid = MatrixGrid::new(2, vec![&id * c(2.0), id.clone(), id.clone(), &id * c(2.0)]).unwrap();
        assert!(max_abs(&(mdet(&grid).unwrap() - &id * c(3.0))) < 1e-15);
    }

    #[test]
    fn reduces_to_determinant() {
        let vals = [[1.0, 2.0, 0.5], [-1.0, 3.0, 2.0], [0.3, 0.2, 4.0]];
        let cells = vals.iter().flatten().map(|&v| CMat::from_element(1, 1, c(v))).collect();
        let d = mdet(&MatrixGrid::new(3, cells).unwrap()).unwrap()[(0, 0)];
        let want = nalgebra::Matrix3::from_fn(|i, j| vals[i][j]).determinant();
        assert!((d - want).norm() < 1e-13);
    }

    #[test]
    fn commuting_diagonal_cells() {
        let cells: Vec<CMat> = (0..9)
            .map(|k| CMat::from_diagonal(&CVec::from_fn(3, |i, _| c(((k + 1) * (i + 2)) as f64 % 7.0 + 0.5))))
            .collect();
        let grid = MatrixGrid::new(3, cells).unwrap();
        let full = mdet(&grid).unwrap();
        // diagonal cells: each diagonal entry is an ordinary 3x3 determinant
        for i in 0..3 {
            let scalar = nalgebra::Matrix3::from_fn(|r, s| grid.cell(r, s)[(i, i)].re).determinant();
            assert!((full[(i, i)] - scalar).norm() < 1e-12);
        }
        let v = CVec::from_fn(3, |i, _| c(i as f64 - 1.0));
        assert!((mdet_apply(&grid, &v).unwrap() - &full * &v).norm() < 1e-12);
    }

    #[test]
    fn rejects_non_commuting() {
        let a = CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        let b = a.transpose();
        let id = CMat::identity(2, 2);
        let grid = MatrixGrid::new(2, vec![a, id.clone(), id, b]).unwrap();
        assert!(matches!(mdet(&grid), Err(Error::NonCommuting { .. })));
    }
}
