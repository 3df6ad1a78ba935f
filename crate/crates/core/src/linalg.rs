//! Dense complex matrix helpers shared by the evaluators.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `1/z`, with a point at infinity mapped to zero.
pub fn recip(z: Complex64) -> Complex64 {
    if z.re.is_infinite() || z.im.is_infinite() {
        Complex64::new(0.0, 0.0)
    } else {
        z.inv()
    }
}

pub fn is_infinite(z: Complex64) -> bool {
    z.re.is_infinite() || z.im.is_infinite()
}

/// `(z - A)^{-1}` by an LU solve against the identity.
pub fn resolvent(z: Complex64, a: &CMat) -> Result<CMat> {
    let n = a.nrows();
    let shifted = CMat::from_diagonal_element(n, n, z) - a;
    shifted
        .lu()
        .solve(&CMat::identity(n, n))
        .ok_or_else(|| Error::SingularResolvent(format!("{z}")))
}

pub fn trace(m: &CMat) -> Complex64 {
    m.diagonal().sum()
}

pub fn det_real(m: &DMatrix<f64>) -> f64 {
    m.clone().lu().determinant()
}

pub fn to_complex(m: &DMatrix<f64>) -> CMat {
    m.map(c)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}
