use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::initial::{initial_condition, Center};
use super::matrix::recursion_matrix_bar;
use super::mdet::{mdet_apply, MatrixGrid};
use super::points::SpectralPoints;
use super::BasisVector;
use crate::combinatorics::ClassTable;
use crate::error::{Error, Result};
use crate::groups::{Form, GroupFamily, GroupSpectrum};
use crate::linalg::{c, det_real, CMat, CVec, I};

/// `⟨F(pts; iX + T, iY + T†)⟩` over the Gaussian `𝒥`-triangular ensemble of size `n`
/// (unit propagators), as `∏_k M̄(pts, iX_k, iY_k) · I`.
///
/// `x` and `y` hold the `⌊n/2⌋` diagonal parameters. The matrices are applied for
/// `k = 1..m` in order.
pub fn triangular_expectation(
    form: Form,
    n: usize,
    x: &[f64],
    y: &[f64],
    pts: &SpectralPoints,
    table: &ClassTable,
) -> Result<BasisVector> {
    let m = n / 2;
    if x.len() != m || y.len() != m {
        return Err(Error::RankMismatch { expected: m, got: x.len().min(y.len()) });
    }
    if form == Form::JTilde && n % 2 == 1 {
        return Err(Error::ParityMismatch { form: form.to_string(), n });
    }
    let init = initial_condition(form, Center::of_size(n), table, Some(pts))?;
    let mut v = init.into_vector();
    for k in 0..m {
        let mb = recursion_matrix_bar(table, pts, I * x[k], I * y[k])?;
        v = &mb.entries * v;
    }
    Ok(BasisVector::from_vector(table.rank(), v))
}

fn initial_for(family: GroupFamily, table: &ClassTable, pts: &SpectralPoints) -> Result<BasisVector> {
    match family {
        GroupFamily::OEven(_) => initial_condition(Form::J, Center::Empty, table, None),
        GroupFamily::OOdd(_) => initial_condition(Form::J, Center::Single, table, Some(pts)),
        GroupFamily::Sp(_) => initial_condition(Form::JTilde, Center::Empty, table, None),
        GroupFamily::U(_) => Err(Error::UnsupportedFamily(family.to_string())),
    }
}

fn denominator(family: GroupFamily, x: &[f64], y: &[f64], gamma: f64) -> Result<f64> {
    let m = x.len();
    let kernel = DMatrix::from_fn(m, m, |k, j| {
        let a = 2.0 * gamma * x[k] * y[j];
        2.0 * if family.is_odd_type() { a.sinh() } else { a.cosh() }
    });
    let det = det_real(&kernel);
    let scale: f64 = kernel.row_iter().map(|r| r.norm()).product();
    if !det.is_finite() || det.abs() <= 1e-14 * scale {
        return Err(Error::SingularDenominator(det));
    }
    Ok(det)
}

fn check_half(gamma: f64) -> Result<()> {
    if (gamma - 0.5).abs() > 1e-15 {
        return Err(Error::CouplingNotHalf(gamma));
    }
    Ok(())
}

fn check_inputs(x: &GroupSpectrum, y: &GroupSpectrum, pts: &SpectralPoints, table: &ClassTable) -> Result<()> {
    x.check_pair(y)?;
    if pts.rank() != table.rank() {
        return Err(Error::RankMismatch { expected: table.rank(), got: pts.rank() });
    }
    Ok(())
}

/// The normalized correlation vector `⟨F(X, ΩYΩ⁻¹) e^{-γ tr}⟩ / ⟨e^{-γ tr}⟩` at `γ = 1/2`:
///
/// `Mdet(e^{2γX_kY_j} M̄(iX_k, iY_j) ± e^{-2γX_kY_j} M̄(iX_k, -iY_j)) · I / det(2cosh | 2sinh)`
///
/// with `+` for O(2m) and `-` for O(2m+1) and Sp(2m).
pub fn correlator_vector(
    x: &GroupSpectrum,
    y: &GroupSpectrum,
    pts: &SpectralPoints,
    gamma: f64,
    table: &ClassTable,
) -> Result<BasisVector> {
    check_half(gamma)?;
    check_inputs(x, y, pts, table)?;
    let family = x.family();
    let (xv, yv) = (x.eigenvalues(), y.eigenvalues());
    let m = xv.len();
    let eps = if family.is_odd_type() { -1.0 } else { 1.0 };
    let mut cells = Vec::with_capacity(m * m);
    for &xk in xv {
        let plus: Vec<CMat> = yv
            .iter()
            .map(|&yj| recursion_matrix_bar(table, pts, I * xk, I * yj).map(|r| r.entries))
            .collect::<Result<_>>()?;
        for (j, &yj) in yv.iter().enumerate() {
            let minus = recursion_matrix_bar(table, pts, I * xk, -I * yj)?.entries;
            let a = 2.0 * gamma * xk * yj;
            cells.push(&plus[j] * c(a.exp()) + minus * c(eps * (-a).exp()));
        }
    }
    let grid = MatrixGrid::new(m, cells)?;
    let init = initial_for(family, table, pts)?;
    let num = mdet_apply(&grid, init.vector())?;
    let den = denominator(family, xv, yv, gamma)?;
    Ok(BasisVector::from_vector(table.rank(), num / c(den)))
}

/// The same vector as an explicit sum over `t ∈ Z_2^m` of matrix determinants, with the
/// `∏ t_j` weight for O(2m+1) and Sp(2m).
pub fn correlator_vector_weyl_sum(
    x: &GroupSpectrum,
    y: &GroupSpectrum,
    pts: &SpectralPoints,
    gamma: f64,
    table: &ClassTable,
) -> Result<BasisVector> {
    check_half(gamma)?;
    check_inputs(x, y, pts, table)?;
    let family = x.family();
    let (xv, yv) = (x.eigenvalues(), y.eigenvalues());
    let m = xv.len();
    let init = initial_for(family, table, pts)?;
    let mut total = CVec::zeros(table.len());
    for bits in 0..1usize << m {
        let t: Vec<f64> = (0..m).map(|j| if bits >> j & 1 == 1 { -1.0 } else { 1.0 }).collect();
        let weight: f64 = if family.is_odd_type() { t.iter().product() } else { 1.0 };
        let mut cells = Vec::with_capacity(m * m);
        for &xk in xv {
            for (j, &yj) in yv.iter().enumerate() {
                let mb = recursion_matrix_bar(table, pts, I * xk, I * t[j] * yj)?.entries;
                cells.push(mb * c((2.0 * gamma * t[j] * xk * yj).exp()));
            }
        }
        total += mdet_apply(&MatrixGrid::new(m, cells)?, init.vector())? * c(weight);
    }
    let den = denominator(family, xv, yv, gamma)?;
    Ok(BasisVector::from_vector(table.rank(), total / c(den)))
}

/// Correlation vector at any `γ > 0`, reduced to `γ = 1/2` with `λ = √(2γ)`.
///
/// Rescaling `(X, Y, x, y)` by `λ` multiplies each trace over a cycle of length `L` by
/// `λ^{2L}` but leaves the additive constant of a length-one cycle alone. Expanding the
/// product over cycles, class `ω` becomes
/// `Σ_D (1-λ²)^{|D|} λ^{2(R-|D|)} C_ω^{1/2}(λX, λY, λx, λy)`, the sum running over sets
/// `D` of length-one cycles of `ω`, whose points are sent to infinity.
pub fn correlator_vector_rescaled(
    x: &GroupSpectrum,
    y: &GroupSpectrum,
    pts: &SpectralPoints,
    gamma: f64,
    table: &ClassTable,
) -> Result<BasisVector> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidArgument(format!("coupling must be positive, got {gamma}")));
    }
    check_inputs(x, y, pts, table)?;
    let lambda = (2.0 * gamma).sqrt();
    let scale = |s: &GroupSpectrum| GroupSpectrum::new(s.family(), s.eigenvalues().iter().map(|v| v * lambda).collect());
    let (xs, ys) = (scale(x)?, scale(y)?);
    let base = pts.scaled(lambda);
    let r = table.rank();
    let mut cache: BTreeMap<Vec<(usize, usize)>, BasisVector> = BTreeMap::new();
    let mut out = Vec::with_capacity(table.len());
    for (idx, class) in table.classes().iter().enumerate() {
        let short: Vec<(usize, usize)> = class.cycles.iter().filter(|c| c.len() == 1).map(|c| c[0]).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for mask in 0..1usize << short.len() {
            let d: Vec<(usize, usize)> = (0..short.len()).filter(|b| mask >> b & 1 == 1).map(|b| short[b]).collect();
            let coeff = (1.0 - lambda * lambda).powi(d.len() as i32) * lambda.powi(2 * (r - d.len()) as i32);
            if coeff == 0.0 {
                continue;
            }
            if !cache.contains_key(&d) {
                let v = correlator_vector(&xs, &ys, &base.with_infinite(&d), 0.5, table)?;
                cache.insert(d.clone(), v);
            }
            acc += cache[&d].entries()[idx] * coeff;
        }
        out.push(acc);
    }
    Ok(BasisVector::new(r, out))
}
