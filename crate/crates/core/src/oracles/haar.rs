use nalgebra::{DMatrix, Quaternion};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::CMat;

/// Haar-distributed `O(n)`: QR of a Gaussian matrix with `diag(R) > 0` enforced.
pub fn haar_orthogonal<G: Rng + ?Sized>(n: usize, rng: &mut G) -> DMatrix<f64> {
    loop {
        let z = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let qr = z.qr();
        let r = qr.r();
        if (0..n).any(|j| r[(j, j)].abs() < 1e-300) {
            continue;
        }
        let mut q = qr.q();
        for j in 0..n {
            if r[(j, j)] < 0.0 {
                q.column_mut(j).neg_mut();
            }
        }
        return q;
    }
}

/// `a + b e₁ + c e₂ + d e₃ ↦ [[a - id, -c - ib], [c - ib, a + id]]`
pub fn quaternion_image(q: &Quaternion<f64>) -> [[Complex64; 2]; 2] {
    let (a, b, c, d) = (q.w, q.i, q.j, q.k);
    [
        [Complex64::new(a, -d), Complex64::new(-c, -b)],
        [Complex64::new(c, -b), Complex64::new(a, d)],
    ]
}

/// Complex `2m x 2m` image of an `m x m` quaternion matrix.
pub fn complex_image(q: &[Vec<Quaternion<f64>>]) -> CMat {
    let m = q.len();
    let mut out = CMat::zeros(2 * m, 2 * m);
    for (r, row) in q.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            let b = quaternion_image(v);
            for (i, bi) in b.iter().enumerate() {
                for (j, &z) in bi.iter().enumerate() {
                    out[(2 * r + i, 2 * c + j)] = z;
                }
            }
        }
    }
    out
}

/// Haar-distributed `Sp(2m)` (the compact symplectic group `USp(2m)`) in its complex
/// representation: Gram-Schmidt on the columns of a quaternionic Gaussian matrix, done
/// in quaternion arithmetic so each `2x2` block is quaternion-real by construction.
pub fn haar_symplectic<G: Rng + ?Sized>(m: usize, rng: &mut G) -> CMat {
    'draw: loop {
        let mut cols: Vec<Vec<Quaternion<f64>>> = Vec::with_capacity(m);
        for _ in 0..m {
            let mut v: Vec<Quaternion<f64>> = (0..m)
                .map(|_| {
                    let mut g = || rng.sample::<f64, _>(StandardNormal);
                    Quaternion::new(g(), g(), g(), g())
                })
                .collect();
            for u in &cols {
                // v ← v - u ⟨u, v⟩ with ⟨u, v⟩ = Σ conj(u_i) v_i
                let coeff = u.iter().zip(&v).fold(Quaternion::new(0.0, 0.0, 0.0, 0.0), |acc, (a, b)| acc + a.conjugate() * b);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= ui * coeff;
                }
            }
            let norm = v.iter().map(|q| q.norm_squared()).sum::<f64>().sqrt();
            if norm < 1e-300 {
                continue 'draw;
            }
            v.iter_mut().for_each(|q| *q /= norm);
            cols.push(v);
        }
        let rows: Vec<Vec<Quaternion<f64>>> = (0..m).map(|r| (0..m).map(|c| cols[c][r]).collect()).collect();
        return complex_image(&rows);
    }
}

/// Largest deviation of the `2x2` blocks from the form `[[p, q], [-q̄, p̄]]`.
pub fn quaternion_reality_defect(u: &CMat) -> f64 {
    let m = u.nrows() / 2;
    let mut worst: f64 = 0.0;
    for r in 0..m {
        for c in 0..m {
            let (p, q) = (u[(2 * r, 2 * c)], u[(2 * r, 2 * c + 1)]);
            worst = worst
                .max((u[(2 * r + 1, 2 * c)] + q.conj()).norm())
                .max((u[(2 * r + 1, 2 * c + 1)] - p.conj()).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use crate::oracles::stats::shard_rng;

    fn image(q: Quaternion<f64>) -> CMat {
        complex_image(&[vec![q]])
    }

    #[test]
    fn image_is_a_homomorphism() {
        let p = Quaternion::new(0.3, -1.2, 0.7, 2.0);
        let q = Quaternion::new(-0.5, 0.4, 1.1, -0.9);
        assert!(max_abs(&(image(p * q) - image(p) * image(q))) < 1e-14);
        assert!(max_abs(&(image(p.conjugate()) - image(p).adjoint())) < 1e-15);
        let e1 = Quaternion::new(0.0, 1.0, 0.0, 0.0);
        let e2 = Quaternion::new(0.0, 0.0, 1.0, 0.0);
        assert_eq!(image(e1 * e2), image(Quaternion::new(0.0, 0.0, 0.0, 1.0)));
    }

    #[test]
    fn orthogonal_samples() {
        let mut rng = shard_rng(7, 0);
        for n in 1..=8 {
            let q = haar_orthogonal(n, &mut rng);
            let e = (q.transpose() * &q - DMatrix::identity(n, n)).abs().max();
            assert!(e < 1e-12);
        }
    }

    #[test]
    fn symplectic_samples() {
        let mut rng = shard_rng(8, 0);
        for m in 1..=4 {
            let u = haar_symplectic(m, &mut rng);
            assert!(max_abs(&(u.adjoint() * &u - CMat::identity(2 * m, 2 * m))) < 1e-12);
            assert!(quaternion_reality_defect(&u) < 1e-12);
        }
    }
}
