use num_complex::Complex64;

use super::points::SpectralPoints;
use crate::combinatorics::{lehmer_rank, ClassTable, Perm, Sign, TetradClass};
use crate::error::{Error, Result};
use crate::linalg::{recip, CMat};

/// `M̄` at one evaluation point, rows and columns in basis order.
#[derive(Debug, Clone)]
pub struct RecursionMatrix {
    pub entries: CMat,
    pub alpha: Complex64,
    pub beta: Complex64,
}

/// Per-class factor layout: black vertex `i` contributes two factors, one for each sign of
/// its `x` argument. Factor `2i` pairs `s_i x_i` with `t(σ_i) y_{σ_i}`; factor `2i+1` pairs
/// `-s_i x_i` with `-t(τ_i) y_{τ_i}`.
struct Layout {
    x_sign: Vec<Sign>,
    y: Vec<(Sign, usize)>,
}

impl Layout {
    fn of(class: &TetradClass) -> Layout {
        let t = &class.canonical;
        let r = t.rank();
        let mut x_sign = Vec::with_capacity(2 * r);
        let mut y = Vec::with_capacity(2 * r);
        for i in 0..r {
            let (a, b) = (t.sigma.apply(i), t.tau.apply(i));
            x_sign.push(t.s[i]);
            y.push((t.t[a], a));
            x_sign.push(-t.s[i]);
            y.push((-t.t[b], b));
        }
        Layout { x_sign, y }
    }

    /// Index of the factor in `other` carrying the same `x` argument as factor `f` here.
    fn aligned(&self, other: &Layout, f: usize) -> usize {
        if self.x_sign[f] == other.x_sign[f] {
            f
        } else {
            f ^ 1
        }
    }
}

fn y_slot(r: usize, (sign, j): (Sign, usize)) -> usize {
    match sign {
        Sign::Plus => j,
        Sign::Minus => r + j,
    }
}

/// The recursion matrix that peels one eigenvalue pair `(α, β)` off a triangular integral.
///
/// Entry `(row, col)` is `∏_i (d¹_i + u v)(d²_i + u' v')` where each black vertex contributes
/// two resolvent factors `1/((±s_i x_i + α)(·y + β))` and the Kronecker factors compare the
/// column's factor with the same `x` argument. When `s_i` differs between row and column
/// that factor sits on the opposite side of the column's vertex, with `σ` and `τ` exchanged
/// and the white sign flipped.
///
/// The product is grouped as
/// `∏_{agreeing}(1 + u v) · ∏_{others} u · ∏_{others} v`, walking `x` and `y` slots in a fixed
/// order. The disagreeing `y` slots form the same set seen from the row or from the column,
/// so `M̄` is symmetric bit for bit.
pub fn recursion_matrix_bar(
    table: &ClassTable,
    pts: &SpectralPoints,
    alpha: Complex64,
    beta: Complex64,
) -> Result<RecursionMatrix> {
    let r = table.rank();
    if pts.rank() != r {
        return Err(Error::RankMismatch { expected: r, got: pts.rank() });
    }
    pts.check_poles(alpha, beta)?;
    let ux: Vec<[Complex64; 2]> =
        pts.x().iter().map(|&x| [recip(x + alpha), recip(-x + alpha)]).collect();
    let vy: Vec<Complex64> = (0..2 * r)
        .map(|q| {
            let y = pts.y()[q % r];
            recip(if q < r { y + beta } else { -y + beta })
        })
        .collect();
    let u = |sign: Sign, i: usize| ux[i][usize::from(sign == Sign::Minus)];

    let layouts: Vec<Layout> = table.classes().iter().map(Layout::of).collect();
    let k = layouts.len();
    let mut entries = CMat::zeros(k, k);
    // per x slot: Some(y slot) where row and column agree, None otherwise
    let mut by_x: Vec<(Complex64, Option<usize>)> = vec![(Complex64::new(0.0, 0.0), None); 2 * r];
    let mut slots = Vec::with_capacity(2 * r);
    for (row, lr) in layouts.iter().enumerate() {
        for (col, lc) in layouts.iter().enumerate() {
            slots.clear();
            for f in 0..2 * r {
                let g = lr.aligned(lc, f);
                let i = f / 2;
                let xs = y_slot(r, (lr.x_sign[f], i));
                let slot = y_slot(r, lr.y[f]);
                let agree = lr.y[f] == lc.y[g];
                by_x[xs] = (u(lr.x_sign[f], i), agree.then_some(slot));
                if !agree {
                    slots.push(slot);
                }
            }
            slots.sort_unstable();
            let mut acc = Complex64::new(1.0, 0.0);
            for &(xu, agree) in &by_x {
                acc *= match agree {
                    Some(q) => 1.0 + xu * vy[q],
                    None => xu,
                };
            }
            for &q in &slots {
                acc *= vy[q];
            }
            entries[(row, col)] = acc;
        }
    }
    Ok(RecursionMatrix { entries, alpha, beta })
}

/// Largest `2R` for which the unitary matrix is built (`6! = 720` rows).
pub const UNITARY_MAX_POINTS: usize = 6;

/// `M^{(n)}_{π,π'} = ∏_p (δ_{π(p),π'(p)} + 1/((x_p - ξ)(y_{π(p)} - η)))` over `S_n` in
/// lexicographic order.
pub fn recursion_matrix_unitary(
    x: &[Complex64],
    y: &[Complex64],
    xi: Complex64,
    eta: Complex64,
) -> Result<CMat> {
    let n = x.len();
    if y.len() != n {
        return Err(Error::RankMismatch { expected: n, got: y.len() });
    }
    if n == 0 || n > UNITARY_MAX_POINTS {
        return Err(Error::RankTooLarge { r: n, max: UNITARY_MAX_POINTS });
    }
    let pts = SpectralPoints::new(x.to_vec(), y.to_vec())?;
    pts.check_poles(xi, eta)?;
    let u: Vec<Complex64> = x.iter().map(|&v| recip(v - xi)).collect();
    let v: Vec<Complex64> = y.iter().map(|&w| recip(w - eta)).collect();
    let perms: Vec<Perm> = Perm::all(n).collect();
    debug_assert!(perms.iter().enumerate().all(|(k, p)| lehmer_rank(p) == k));
    let size = perms.len();
    Ok(CMat::from_fn(size, size, |a, b| {
        let (p, q) = (&perms[a], &perms[b]);
        (0..n)
            .map(|i| {
                let d = if p.apply(i) == q.apply(i) { 1.0 } else { 0.0 };
                d + u[i] * v[p.apply(i)]
            })
            .product()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::doubled_points;
    use crate::linalg::{c, max_abs};

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rank_one_closed_form() {
        let table = ClassTable::new(1).unwrap();
        let pts = SpectralPoints::real(&[2.0], &[3.0]).unwrap();
        let m = recursion_matrix_bar(&table, &pts, c(0.0), c(0.0)).unwrap().entries;
        let want = [[49.0 / 36.0, 1.0 / 36.0], [1.0 / 36.0, 25.0 / 36.0]];
        for (a, row) in want.iter().enumerate() {
            for (b, &w) in row.iter().enumerate() {
                assert!((m[(a, b)] - w).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn large_points_give_identity() {
        let table = ClassTable::new(2).unwrap();
        let inf = Complex64::new(f64::INFINITY, 0.0);
        let pts = SpectralPoints::new(vec![inf; 2], vec![inf; 2]).unwrap();
        let m = recursion_matrix_bar(&table, &pts, cx(0.3, 0.1), c(0.2)).unwrap().entries;
        assert_eq!(m, CMat::identity(24, 24));
        let u = recursion_matrix_unitary(&[c(1e12); 3], &[c(1e12); 3], c(0.0), c(0.0)).unwrap();
        assert!(max_abs(&(u - CMat::identity(6, 6))) < 1e-20);
    }

    #[test]
    fn morozov_rank_one_general() {
        let table = ClassTable::new(1).unwrap();
        let (x, y, a, b) = (cx(1.3, 0.4), cx(-0.7, 2.0), cx(0.2, -0.5), cx(0.9, 0.1));
        let pts = SpectralPoints::new(vec![x], vec![y]).unwrap();
        let m = recursion_matrix_bar(&table, &pts, a, b).unwrap().entries;
        let g = |sx: f64, sy: f64, sa: f64| 1.0 / ((sx * x + sa * a) * (sy * y + sa * b));
        let want = [
            [(1.0 + g(1.0, 1.0, 1.0)) * (1.0 + g(1.0, 1.0, -1.0)), g(1.0, 1.0, 1.0) * g(1.0, 1.0, -1.0)],
            [g(1.0, -1.0, 1.0) * g(1.0, -1.0, -1.0), (1.0 + g(1.0, -1.0, 1.0)) * (1.0 + g(1.0, -1.0, -1.0))],
        ];
        for a in 0..2 {
            for b in 0..2 {
                assert!((m[(a, b)] - want[a][b]).norm() < 1e-14, "{a}{b}");
            }
        }
    }

    #[test]
    fn identity_with_unitary_matrix() {
        for r in 1..=2 {
            let table = ClassTable::new(r).unwrap();
            let x: Vec<_> = (0..r).map(|i| cx(1.5 + i as f64, 0.3)).collect();
            let y: Vec<_> = (0..r).map(|i| cx(0.7, -0.4 - i as f64)).collect();
            let (a, b) = (cx(0.2, 0.9), cx(-0.3, 0.5));
            let pts = SpectralPoints::new(x.clone(), y.clone()).unwrap();
            let bar = recursion_matrix_bar(&table, &pts, a, b).unwrap().entries;
            let uni = recursion_matrix_unitary(&doubled_points(&x), &doubled_points(&y), -a, -b).unwrap();
            assert!(max_abs(&(&bar - &uni)) < 1e-13 * max_abs(&uni));
            assert_eq!(bar, bar.transpose());
        }
    }

    #[test]
    fn pole_is_reported() {
        let table = ClassTable::new(1).unwrap();
        let pts = SpectralPoints::real(&[2.0], &[3.0]).unwrap();
        let err = recursion_matrix_bar(&table, &pts, c(-2.0), c(0.0)).unwrap_err();
        assert!(matches!(err, Error::Pole { index: 0, .. }));
    }
}
