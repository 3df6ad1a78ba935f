//! Partition functions, normalization constants, Jacobians and the Selberg-Laguerre integral.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_rational::Ratio;
use serde::Serialize;
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};
use crate::groups::{generalized_vandermonde, weyl_elements, Form, GroupFamily, GroupSpectrum};
use crate::linalg::det_real;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionResult {
    pub value: f64,
    pub family: GroupFamily,
    pub gamma: f64,
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidArgument(format!("coupling must be positive and finite, got {gamma}")));
    }
    Ok(())
}

/// `ln ∏_{j=lo}^{hi} (step·j - off)!` through log-Gamma.
fn ln_factorial_product(lo: u64, hi: u64, step: u64, off: u64) -> f64 {
    (lo..=hi).map(|j| ln_gamma((step * j - off) as f64 + 1.0)).sum()
}

/// Normalization making the partition function of a Haar-normalized group tend to 1 as
/// `γ → 0`. For O(2m+1) and Sp(2m) the constant is the same.
pub fn haar_constant(family: GroupFamily, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let two_g = (2.0 * gamma).ln();
    let ln = match family {
        GroupFamily::OEven(m) => {
            let m = m as u64;
            ln_factorial_product(1, m.saturating_sub(1), 2, 0)
                - m as f64 * 2f64.ln()
                - (m * m.saturating_sub(1)) as f64 * two_g
        }
        GroupFamily::OOdd(m) | GroupFamily::Sp(m) => {
            let m = m as u64;
            ln_factorial_product(1, m, 2, 1) - m as f64 * 2f64.ln() - (m * m) as f64 * two_g
        }
        GroupFamily::U(n) => {
            let n = n as u64;
            ln_factorial_product(1, n.saturating_sub(1), 1, 0) - (n * n.saturating_sub(1) / 2) as f64 * gamma.ln()
        }
    };
    let sign = match family {
        // (-γ)^{n(n-1)/2} in the denominator
        GroupFamily::U(n) if (n * n.saturating_sub(1) / 2) % 2 == 1 => -1.0,
        _ => 1.0,
    };
    Ok(sign * ln.exp())
}

fn kernel_matrix(family: GroupFamily, x: &[f64], y: &[f64], gamma: f64) -> DMatrix<f64> {
    let m = x.len();
    DMatrix::from_fn(m, m, |i, j| {
        let a = x[i] * y[j];
        match family {
            GroupFamily::OEven(_) => 2.0 * (2.0 * gamma * a).cosh(),
            GroupFamily::OOdd(_) | GroupFamily::Sp(_) => 2.0 * (2.0 * gamma * a).sinh(),
            GroupFamily::U(_) => (-gamma * a).exp(),
        }
    })
}

/// Haar-normalized `∫dΩ exp(-γ tr(X Ω Y Ω⁻¹))` with `X, Y` in block (O), quaternionic (Sp)
/// or diagonal (U) form.
pub fn partition(x: &GroupSpectrum, y: &GroupSpectrum, gamma: f64) -> Result<PartitionResult> {
    x.check_pair(y)?;
    let family = x.family();
    let k = haar_constant(family, gamma)?;
    let det = det_real(&kernel_matrix(family, x.eigenvalues(), y.eigenvalues(), gamma));
    let value = k * det / (generalized_vandermonde(x) * generalized_vandermonde(y));
    Ok(PartitionResult { value, family, gamma })
}

/// The same quantity as [`partition`], from the explicit sum over the Weyl group.
pub fn partition_weyl_sum(x: &GroupSpectrum, y: &GroupSpectrum, gamma: f64) -> Result<PartitionResult> {
    x.check_pair(y)?;
    let family = x.family();
    let k = haar_constant(family, gamma)?;
    let (xv, yv) = (x.eigenvalues(), y.eigenvalues());
    let sum: f64 = weyl_elements(family)?
        .iter()
        .map(|w| {
            let exponent: f64 =
                (0..xv.len()).map(|i| w.t[i].value() * xv[i] * yv[w.tau.apply(i)]).sum();
            f64::from(w.weight) * (2.0 * gamma * exponent).exp()
        })
        .sum();
    let value = k * sum / (generalized_vandermonde(x) * generalized_vandermonde(y));
    Ok(PartitionResult { value, family, gamma })
}

/// A rational prefactor times `γ^{-gamma_power}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KConstant {
    pub prefactor: Ratio<u128>,
    pub gamma_power: u32,
}

impl KConstant {
    pub fn value(&self, gamma: f64) -> f64 {
        *self.prefactor.numer() as f64 / *self.prefactor.denom() as f64 / gamma.powi(self.gamma_power as i32)
    }
}

fn exact_factorial(n: u64) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))
}

fn exact_product(mut it: impl Iterator<Item = Option<u128>>) -> Option<u128> {
    it.try_fold(1u128, |acc, v| acc.checked_mul(v?))
}

/// The conventional prefactors `K_{2m}`, `K_{2m+1}` and `K̃_{2m}` of the determinant
/// formulas, kept exact.
///
/// They are tied to the unnormalized angular measure and differ from [`haar_constant`] by a
/// power-of-two rescaling of `γ` and, for `K̃`, by the missing `γ` dependence.
pub fn k_constant(family: GroupFamily) -> Result<KConstant> {
    let too_large = || Error::RankTooLarge { r: family.rank(), max: 7 };
    let (num, den, gamma_power) = match family {
        GroupFamily::OEven(m) => {
            let m = m as u64;
            let num = exact_product((1..m).map(|j| exact_factorial(2 * j)));
            (num, 1u128.checked_shl(m as u32), (m * m.saturating_sub(1)) as u32)
        }
        GroupFamily::OOdd(m) => {
            let m = m as u64;
            let num = exact_product((1..=m).map(|j| exact_factorial(2 * j - 1)));
            (num, 1u128.checked_shl(m as u32), (m * m) as u32)
        }
        GroupFamily::Sp(m) => {
            let m = m as u64;
            let num = exact_product((1..=m).map(|j| exact_factorial(2 * j - 1)));
            (num, 1u128.checked_shl((m * m + 3 * m) as u32), 0)
        }
        GroupFamily::U(_) => return Err(Error::UnsupportedFamily(family.to_string())),
    };
    let (num, den) = (num.ok_or_else(too_large)?, den.ok_or_else(too_large)?);
    Ok(KConstant { prefactor: Ratio::new(num, den), gamma_power })
}

/// `Jac · c = 2^{n(n-1)/2} / (4^m m!)` for O, and `1/(2^m m! 4^m Jac^O_{2m})` for Sp.
pub fn c_constant(family: GroupFamily) -> Result<f64> {
    let m = family.rank() as i32;
    let m_fact = gamma(f64::from(m) + 1.0);
    match family {
        GroupFamily::OEven(_) | GroupFamily::OOdd(_) => {
            let n = family.matrix_size() as i32;
            let jac = jacobian(JacobianKind::O, n as usize)?;
            Ok(2f64.powi(n * (n - 1) / 2) / (4f64.powi(m) * m_fact * jac))
        }
        GroupFamily::Sp(_) => {
            let jac = jacobian(JacobianKind::O, 2 * m as usize)?;
            Ok(1.0 / (2f64.powi(m) * m_fact * jac * 4f64.powi(m)))
        }
        GroupFamily::U(_) => Err(Error::UnsupportedFamily(family.to_string())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobianKind {
    O,
    Sp,
    UJ,
    UJTilde,
}

/// Jacobians of the block-diagonal, quaternionic and Schur decompositions.
pub fn jacobian(kind: JacobianKind, size: usize) -> Result<f64> {
    if size == 0 {
        return Err(Error::InvalidArgument("matrix size must be positive".into()));
    }
    let m = size / 2;
    let even = size % 2 == 0;
    if matches!(kind, JacobianKind::Sp | JacobianKind::UJTilde) && !even {
        return Err(Error::ParityMismatch { form: format!("{kind:?}"), n: size });
    }
    let mi = m as i32;
    let m_fact = gamma(m as f64 + 1.0);
    let even_facts = ln_factorial_product(1, (m as u64).saturating_sub(1), 2, 0).exp();
    let odd_facts = ln_factorial_product(1, m as u64, 2, 1).exp();
    let jac_o = || {
        if even {
            (PI * 2.0).powi(mi * (mi - 1)) / (m_fact * even_facts)
        } else {
            (PI * 2.0).powi(mi * mi) / (m_fact * odd_facts)
        }
    };
    let jac_sp = || PI.powi(mi * mi) * 2f64.powi(mi) / (m_fact * odd_facts);
    Ok(match kind {
        JacobianKind::O => jac_o(),
        JacobianKind::Sp => jac_sp(),
        JacobianKind::UJ if even => jac_o() * 2f64.powi(mi - mi * mi),
        JacobianKind::UJ => jac_o() * 2f64.powi(-mi * mi),
        JacobianKind::UJTilde => jac_sp() * 2f64.powi(-2 * mi),
    })
}

/// `I(a, 1, n) = ∏_{j<n} Γ(2+j) Γ(a+j)`, the Laguerre limit of the Selberg integral at unit exponent.
pub fn selberg_laguerre(a: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("Selberg dimension must be positive".into()));
    }
    if a.is_nan() || a <= 0.0 {
        return Err(Error::InvalidArgument(format!("Selberg exponent must be positive, got {a}")));
    }
    Ok((0..n).map(|j| (ln_gamma(2.0 + j as f64) + ln_gamma(a + j as f64)).exp()).product())
}

/// Factorial closed forms of `I(1/2,1,m)` and `I(3/2,1,m)`.
pub fn selberg_closed_form(half_odd: bool, m: usize) -> f64 {
    let mi = m as i32;
    let base = gamma(m as f64 + 1.0) * PI.sqrt().powi(mi);
    if half_odd {
        base / 2f64.powi(mi * mi) * ln_factorial_product(1, m as u64, 2, 1).exp()
    } else {
        base / 2f64.powi(mi * (mi - 1)) * ln_factorial_product(1, (m as u64).saturating_sub(1), 2, 0).exp()
    }
}

/// `∫ exp(-γ tr T†T) d²T` over strictly upper triangular `𝒥`-antisymmetric `T` of size `n`.
///
/// Off-antidiagonal variables appear twice in the trace; the `J̃` antidiagonal ones once.
pub fn triangular_gaussian_volume(form: Form, n: usize, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if form == Form::JTilde && n % 2 != 0 {
        return Err(Error::ParityMismatch { form: form.to_string(), n });
    }
    let paired = (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).filter(|(a, b)| a + b < n + 1).count();
    let single = if form == Form::JTilde { n / 2 } else { 0 };
    Ok((PI / (2.0 * gamma)).powi(paired as i32) * (PI / gamma).powi(single as i32))
}
