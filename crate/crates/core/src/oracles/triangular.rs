//! Gaussian `𝒥`-antisymmetric strictly upper triangular matrices.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::basis::{trace_form, SignedResolvents};
use super::stats::{complex_estimate, run_sharded, ComplexMoments, McConfig, McEstimate, Moments};
use crate::combinatorics::ClassTable;
use crate::error::{Error, Result};
use crate::groups::{j_diagonal, Form};
use crate::linalg::{CMat, I};
use crate::recursion::SpectralPoints;

#[derive(Debug, Clone, PartialEq)]
pub struct TriangularSample {
    pub matrix: CMat,
    pub form: Form,
}

/// How entry `(a, b)` depends on the independent variables: `coef · z_{(a0, b0)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntryLink {
    pub var: (usize, usize),
    pub coef: f64,
}

fn check_size(form: Form, n: usize) -> Result<()> {
    if n == 0 || (form == Form::JTilde && n % 2 == 1) {
        return Err(Error::ParityMismatch { form: form.to_string(), n });
    }
    Ok(())
}

/// Independent variables `(a, b, ⟨|z|²⟩)`: the entries above the antidiagonal have variance 1,
/// and for `J̃` the upper antidiagonal entries have variance 2.
pub fn independent_variables(form: Form, n: usize) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if a + b + 1 < n {
                out.push((a, b, 1.0));
            } else if a + b + 1 == n && form == Form::JTilde {
                out.push((a, b, 2.0));
            }
        }
    }
    out
}

/// Entry `(a, b)` in terms of the independent variables; `None` for structural zeros.
/// Below the antidiagonal `T_{n-1-b, n-1-a} = -d_a d_b T_{a,b}` with the row signs of `𝒥`.
pub fn entry_link(form: Form, n: usize, a: usize, b: usize) -> Option<EntryLink> {
    if a >= b {
        return None;
    }
    if a + b + 1 < n || (a + b + 1 == n && form == Form::JTilde) {
        return Some(EntryLink { var: (a, b), coef: 1.0 });
    }
    if a + b + 1 == n {
        return None;
    }
    let (a0, b0) = (n - 1 - b, n - 1 - a);
    let d = form.row_signs(n);
    Some(EntryLink { var: (a0, b0), coef: -d[a0] * d[b0] })
}

pub fn sample_triangular<G: Rng + ?Sized>(form: Form, n: usize, rng: &mut G) -> Result<TriangularSample> {
    check_size(form, n)?;
    let vars = independent_variables(form, n);
    let mut z = std::collections::HashMap::with_capacity(vars.len());
    for &(a, b, var) in &vars {
        let s = (var / 2.0).sqrt();
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        z.insert((a, b), Complex64::new(re * s, im * s));
    }
    let mut matrix = CMat::zeros(n, n);
    for a in 0..n {
        for b in a + 1..n {
            if let Some(link) = entry_link(form, n, a, b) {
                matrix[(a, b)] = z[&link.var] * link.coef;
            }
        }
    }
    Ok(TriangularSample { matrix, form })
}

/// Monte Carlo estimate of every basis function at `(iX + T, iY + T†)`.
#[allow(clippy::too_many_arguments)]
pub fn mc_triangular_expectation(
    form: Form,
    n: usize,
    x: &[f64],
    y: &[f64],
    pts: &SpectralPoints,
    table: &ClassTable,
    cfg: &McConfig,
) -> Result<Vec<McEstimate>> {
    check_size(form, n)?;
    let zx: Vec<Complex64> = x.iter().map(|&v| I * v).collect();
    let zy: Vec<Complex64> = y.iter().map(|&v| I * v).collect();
    let dx = j_diagonal(&zx, n)?;
    let dy = j_diagonal(&zy, n)?;
    if pts.rank() != table.rank() {
        return Err(Error::RankMismatch { expected: table.rank(), got: pts.rank() });
    }
    let k = table.len();
    let moments = run_sharded(
        cfg,
        |rng, count| -> Result<Vec<ComplexMoments>> {
            let mut acc = vec![ComplexMoments::default(); k];
            for _ in 0..count {
                let t = sample_triangular(form, n, rng)?.matrix;
                let a = &dx + &t;
                let b = &dy + t.adjoint();
                let xr = SignedResolvents::new(pts.x(), &a)?;
                let yr = SignedResolvents::new(pts.y(), &b)?;
                for (m, cl) in acc.iter_mut().zip(table.classes()) {
                    let f = trace_form(form, cl, &xr, &yr);
                    m.push([f.re, f.im]);
                }
            }
            Ok(acc)
        },
        |a, b| {
            let (a, b) = (a?, b?);
            Ok(a.into_iter().zip(b).map(|(p, q)| Moments::merge(p, q)).collect())
        },
    )?;
    Ok(moments.iter().map(|m| complex_estimate(m, cfg.seed)).collect())
}
