//! Correlation vectors: the two determinant forms, the general-coupling route and Haar sampling.

use hcorr::combinatorics::ClassTable;
use hcorr::groups::{GroupFamily, GroupSpectrum};
use hcorr::oracles::{mc_group_correlators, McConfig};
use hcorr::recursion::{correlator_vector, correlator_vector_rescaled, correlator_vector_weyl_sum, SpectralPoints};
use num_complex::Complex64;

fn spec(f: GroupFamily, v: &[f64]) -> GroupSpectrum {
    GroupSpectrum::new(f, v.to_vec()).unwrap()
}

fn cases() -> Vec<(GroupFamily, GroupSpectrum, GroupSpectrum)> {
    [
        (GroupFamily::OEven(1), &[0.9][..], &[1.4][..]),
        (GroupFamily::OOdd(1), &[1.2], &[0.7]),
        (GroupFamily::Sp(1), &[0.8], &[1.5]),
        (GroupFamily::OEven(2), &[0.6, 1.5], &[1.1, 1.9]),
        (GroupFamily::OOdd(2), &[0.8, 1.7], &[0.5, 1.3]),
        (GroupFamily::Sp(2), &[1.0, 1.6], &[0.7, 1.8]),
    ]
    .into_iter()
    .map(|(f, x, y)| (f, spec(f, x), spec(f, y)))
    .collect()
}

fn points(r: usize) -> SpectralPoints {
    let x = [Complex64::new(2.0, 0.3), Complex64::new(-2.4, 1.1)];
    let y = [Complex64::new(2.7, -0.5), Complex64::new(1.9, 1.6)];
    SpectralPoints::new(x[..r].to_vec(), y[..r].to_vec()).unwrap()
}

#[test]
fn mdet_form_equals_explicit_sign_sum() {
    for r in 1..=2 {
        let table = ClassTable::new(r).unwrap();
        for (f, x, y) in cases() {
            let a = correlator_vector(&x, &y, &points(r), 0.5, &table).unwrap();
            let b = correlator_vector_weyl_sum(&x, &y, &points(r), 0.5, &table).unwrap();
            let err = (a.vector() - b.vector()).norm() / a.vector().norm();
            assert!(err < 1e-10, "{f} R={r}: {err:e}");
        }
    }
}

#[test]
fn rescaled_route_is_exact_at_half() {
    let table = ClassTable::new(2).unwrap();
    for (f, x, y) in cases() {
        let a = correlator_vector(&x, &y, &points(2), 0.5, &table).unwrap();
        let b = correlator_vector_rescaled(&x, &y, &points(2), 0.5, &table).unwrap();
        assert!((a.vector() - b.vector()).norm() < 1e-12 * a.vector().norm(), "{f}");
    }
}

#[test]
fn direct_route_requires_half() {
    let table = ClassTable::new(1).unwrap();
    let (_, x, y) = &cases()[0];
    assert!(correlator_vector(x, y, &points(1), 0.3, &table).is_err());
}

#[test]
fn general_coupling_against_haar_sampling() {
    let cfg = McConfig::new(200_000, 41);
    for gamma in [0.3, 0.8] {
        for r in 1..=2 {
            let table = ClassTable::new(r).unwrap();
            for (f, x, y) in cases().into_iter().filter(|(f, _, _)| f.rank() == 1 || r == 1) {
                let pts = points(r);
                let cf = correlator_vector_rescaled(&x, &y, &pts, gamma, &table).unwrap();
                let mc = mc_group_correlators(&x, &y, std::slice::from_ref(&pts), gamma, &table, &cfg).unwrap();
                for (k, est) in mc[0].iter().enumerate() {
                    let z = est.z_score(cf.entries()[k]);
                    assert!(z < 4.0, "{f} γ={gamma} R={r} class {k}: {} vs {} ± {} (z={z:.2})", cf.entries()[k], est.mean, est.stderr);
                }
            }
        }
    }
}
