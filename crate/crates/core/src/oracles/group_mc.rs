//! Haar Monte Carlo for partition functions and normalized correlators.

use num_complex::Complex64;
use rand::Rng;

use super::basis::{trace_form, SignedResolvents};
use super::haar::{haar_orthogonal, haar_symplectic};
use super::stats::{complex_estimate, ratio_estimate, run_sharded, ComplexMoments, McConfig, McEstimate, Moments, RatioMoments};
use crate::combinatorics::ClassTable;
use crate::error::{Error, Result};
use crate::groups::{embed, EmbeddingKind, GroupFamily, GroupSpectrum};
use crate::linalg::{to_complex, trace, CMat};
use crate::recursion::SpectralPoints;

/// The Cartan element in the representation the Haar sampler acts on.
pub fn group_cartan(spec: &GroupSpectrum) -> Result<CMat> {
    let kind = match spec.family() {
        GroupFamily::OEven(_) | GroupFamily::OOdd(_) => EmbeddingKind::RealAntisymmetricBlocks,
        GroupFamily::Sp(_) => EmbeddingKind::Quaternionic,
        f @ GroupFamily::U(_) => return Err(Error::UnsupportedFamily(f.to_string())),
    };
    Ok(embed(spec, kind)?.matrix)
}

pub fn sample_group<G: Rng + ?Sized>(family: GroupFamily, rng: &mut G) -> Result<CMat> {
    match family {
        GroupFamily::OEven(_) | GroupFamily::OOdd(_) => Ok(to_complex(&haar_orthogonal(family.matrix_size(), rng))),
        GroupFamily::Sp(m) => Ok(haar_symplectic(m, rng)),
        GroupFamily::U(_) => Err(Error::UnsupportedFamily(family.to_string())),
    }
}

/// `exp(-γ tr(X Ω Y Ω⁻¹))`; for Sp the complex trace is twice the real part of the
/// quaternionic one, which is the trace the closed form uses.
fn weight(a: &CMat, omega: &CMat, b0: &CMat, gamma: f64) -> f64 {
    let b = omega * b0 * omega.adjoint();
    (-gamma * trace(&(a * b)).re).exp()
}

/// Mean of the Boltzmann weight over Haar samples.
pub fn mc_group_partition(x: &GroupSpectrum, y: &GroupSpectrum, gamma: f64, cfg: &McConfig) -> Result<McEstimate> {
    mc_group_partition_shifted(x, y, gamma, cfg, None)
}

/// As [`mc_group_partition`], with every sample replaced by `left · Ω`.
pub fn mc_group_partition_shifted(
    x: &GroupSpectrum,
    y: &GroupSpectrum,
    gamma: f64,
    cfg: &McConfig,
    left: Option<&CMat>,
) -> Result<McEstimate> {
    x.check_pair(y)?;
    let family = x.family();
    let (a, b0) = (group_cartan(x)?, group_cartan(y)?);
    let m = run_sharded(
        cfg,
        |rng, count| -> Result<ComplexMoments> {
            let mut acc = ComplexMoments::default();
            for _ in 0..count {
                let mut omega = sample_group(family, rng)?;
                if let Some(l) = left {
                    omega = l * omega;
                }
                acc.push([weight(&a, &omega, &b0, gamma), 0.0]);
            }
            Ok(acc)
        },
        |p, q| Ok(Moments::merge(p?, q?)),
    )?;
    Ok(complex_estimate(&m, cfg.seed))
}

/// Ratio estimates `E[F e^{-γ tr}] / E[e^{-γ tr}]` for every class and every set of points,
/// sharing the Haar samples. Indexed `[points][class]`.
///
/// `F` is the trace form of the basis function, signed for O and unsigned for Sp. Being a
/// product of traces of resolvents it is invariant under conjugation, so it equals the
/// labelled basis function evaluated in the frame where both arguments are
/// `𝒥`-antisymmetric. The `y` resolvents are conjugated from those of the fixed Cartan
/// element instead of being solved per sample.
pub fn mc_group_correlators(
    x: &GroupSpectrum,
    y: &GroupSpectrum,
    points: &[SpectralPoints],
    gamma: f64,
    table: &ClassTable,
    cfg: &McConfig,
) -> Result<Vec<Vec<McEstimate>>> {
    x.check_pair(y)?;
    let family = x.family();
    let form = family.form()?;
    let (a, b0) = (group_cartan(x)?, group_cartan(y)?);
    if let Some(p) = points.iter().find(|p| p.rank() != table.rank()) {
        return Err(Error::RankMismatch { expected: table.rank(), got: p.rank() });
    }
    let xr: Vec<SignedResolvents> = points.iter().map(|p| SignedResolvents::new(p.x(), &a)).collect::<Result<_>>()?;
    let yr0: Vec<SignedResolvents> = points.iter().map(|p| SignedResolvents::new(p.y(), &b0)).collect::<Result<_>>()?;
    let k = table.len();
    let moments = run_sharded(
        cfg,
        |rng, count| -> Result<Vec<RatioMoments>> {
            let mut acc = vec![RatioMoments::default(); points.len() * k];
            for _ in 0..count {
                let omega = sample_group(family, rng)?;
                let w = weight(&a, &omega, &b0, gamma);
                for (p, (xp, yp0)) in xr.iter().zip(&yr0).enumerate() {
                    let yp = yp0.conjugated(&omega);
                    for (c, cl) in table.classes().iter().enumerate() {
                        let f: Complex64 = trace_form(form, cl, xp, &yp);
                        acc[p * k + c].push([w, w * f.re, w * f.im]);
                    }
                }
            }
            Ok(acc)
        },
        |p, q| Ok(p?.into_iter().zip(q?).map(|(u, v)| Moments::merge(u, v)).collect()),
    )?;
    Ok(moments.chunks(k).map(|row| row.iter().map(|m| ratio_estimate(m, cfg.seed)).collect()).collect())
}

/// One class at one set of points.
pub fn mc_group_correlator(
    x: &GroupSpectrum,
    y: &GroupSpectrum,
    pts: &SpectralPoints,
    class: usize,
    gamma: f64,
    table: &ClassTable,
    cfg: &McConfig,
) -> Result<McEstimate> {
    if class >= table.len() {
        return Err(Error::InvalidArgument(format!("class index {class} out of range {}", table.len())));
    }
    let all = mc_group_correlators(x, y, std::slice::from_ref(pts), gamma, table, cfg)?;
    Ok(all[0][class])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::to_form_frame;
    use crate::oracles::basis::correlator_eval;
    use crate::oracles::stats::shard_rng;

    #[test]
    fn trace_form_equals_labelled_form_in_the_form_frame() {
        let table = ClassTable::new(2).unwrap();
        let pts = SpectralPoints::new(
            vec![Complex64::new(2.0, 0.0), Complex64::new(3.0, 1.0)],
            vec![Complex64::new(3.0, 0.0), Complex64::new(2.0, -1.0)],
        )
        .unwrap();
        let mut rng = shard_rng(1, 0);
        for f in [GroupFamily::OEven(2), GroupFamily::OOdd(1), GroupFamily::Sp(2)] {
            let m = f.rank();
            let x = GroupSpectrum::new(f, (0..m).map(|i| 0.7 + 0.5 * i as f64).collect()).unwrap();
            let y = GroupSpectrum::new(f, (0..m).map(|i| 1.1 + 0.3 * i as f64).collect()).unwrap();
            let (a, b0) = (group_cartan(&x).unwrap(), group_cartan(&y).unwrap());
            let omega = sample_group(f, &mut rng).unwrap();
            let b = &omega * b0 * omega.adjoint();
            let xr = SignedResolvents::new(pts.x(), &a).unwrap();
            let yr = SignedResolvents::new(pts.y(), &b).unwrap();
            let (af, bf) = (to_form_frame(f, &a).unwrap(), to_form_frame(f, &b).unwrap());
            let form = f.form().unwrap();
            for cl in table.classes() {
                let tf = trace_form(form, cl, &xr, &yr);
                let lit = correlator_eval(&cl.canonical, &pts, &af, &bf, form).unwrap();
                assert!((tf - lit).norm() < 1e-12 * (1.0 + tf.norm()), "{f} {cl}");
            }
        }
    }

    #[test]
    fn zero_coupling_partition_is_one() {
        let f = GroupFamily::OOdd(1);
        let (x, y) = (GroupSpectrum::new(f, vec![1.0]).unwrap(), GroupSpectrum::new(f, vec![2.0]).unwrap());
        let e = mc_group_partition(&x, &y, 0.0, &McConfig::new(100, 3)).unwrap();
        assert_eq!(e.mean, Complex64::new(1.0, 0.0));
        assert_eq!(e.stderr, 0.0);
    }
}
