use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, PoleSide, Result};
use crate::linalg::is_infinite;

/// Pole-avoidance threshold on `|s x_i ± α|` and `|t y_j ± β|`.
pub const POLE_TOL: f64 = 1e-8;

/// Resolvent arguments `x_1..x_R` and `y_1..y_R`. Infinite entries are allowed and make the
/// corresponding resolvents vanish.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralPoints {
    x: Vec<Complex64>,
    y: Vec<Complex64>,
}

impl SpectralPoints {
    pub fn new(x: Vec<Complex64>, y: Vec<Complex64>) -> Result<SpectralPoints> {
        if x.len() != y.len() {
            return Err(Error::RankMismatch { expected: x.len(), got: y.len() });
        }
        if x.is_empty() {
            return Err(Error::InvalidArgument("at least one spectral point is needed".into()));
        }
        if x.iter().chain(&y).any(|z| z.is_nan()) {
            return Err(Error::InvalidArgument("spectral points must not be NaN".into()));
        }
        Ok(SpectralPoints { x, y })
    }

    pub fn real(x: &[f64], y: &[f64]) -> Result<SpectralPoints> {
        SpectralPoints::new(x.iter().map(|&v| v.into()).collect(), y.iter().map(|&v| v.into()).collect())
    }

    pub fn rank(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[Complex64] {
        &self.x
    }

    pub fn y(&self) -> &[Complex64] {
        &self.y
    }

    pub fn scaled(&self, lambda: f64) -> SpectralPoints {
        let f = |v: &Complex64| if is_infinite(*v) { *v } else { v * lambda };
        SpectralPoints { x: self.x.iter().map(f).collect(), y: self.y.iter().map(f).collect() }
    }

    /// Copy with `x_i` and `y_j` sent to infinity for every `(i, j)` in `pairs`.
    pub fn with_infinite(&self, pairs: &[(usize, usize)]) -> SpectralPoints {
        let mut out = self.clone();
        let inf = Complex64::new(f64::INFINITY, 0.0);
        for &(i, j) in pairs {
            out.x[i] = inf;
            out.y[j] = inf;
        }
        out
    }

    /// Fails if any `±x_i ± α` or `±y_j ± β` is within [`POLE_TOL`] of zero.
    pub fn check_poles(&self, alpha: Complex64, beta: Complex64) -> Result<()> {
        let scan = |pts: &[Complex64], shift: Complex64, side: PoleSide| -> Result<()> {
            for (index, &p) in pts.iter().enumerate() {
                if is_infinite(p) {
                    continue;
                }
                for (sign, d) in [(1i8, p + shift), (1, p - shift), (-1, -p + shift), (-1, -p - shift)] {
                    if d.norm() < POLE_TOL {
                        return Err(Error::Pole { side, index, sign, modulus: d.norm() });
                    }
                }
            }
            Ok(())
        };
        scan(&self.x, alpha, PoleSide::X)?;
        scan(&self.y, beta, PoleSide::Y)
    }
}
