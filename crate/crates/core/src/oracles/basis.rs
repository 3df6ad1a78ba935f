//! Direct evaluation of basis correlation functions on explicit matrices.

use num_complex::Complex64;

use crate::combinatorics::{Sign, Tetrad, TetradClass};
use crate::error::Result;
use crate::groups::Form;
use crate::linalg::{is_infinite, resolvent, to_complex, trace, CMat};
use crate::recursion::SpectralPoints;

/// `(s z_k - M)^{-1}` for every point `z_k` and both signs `s`. A point at infinity gives
/// the zero matrix.
#[derive(Debug, Clone)]
pub struct SignedResolvents {
    plus: Vec<CMat>,
    minus: Vec<CMat>,
}

impl SignedResolvents {
    pub fn new(points: &[Complex64], m: &CMat) -> Result<SignedResolvents> {
        let n = m.nrows();
        let one = |z: Complex64| if is_infinite(z) { Ok(CMat::zeros(n, n)) } else { resolvent(z, m) };
        Ok(SignedResolvents {
            plus: points.iter().map(|&z| one(z)).collect::<Result<_>>()?,
            minus: points.iter().map(|&z| one(-z)).collect::<Result<_>>()?,
        })
    }

    pub fn get(&self, sign: Sign, k: usize) -> &CMat {
        match sign {
            Sign::Plus => &self.plus[k],
            Sign::Minus => &self.minus[k],
        }
    }

    /// Resolvents of `U M U†` from those of `M`, for unitary `U`.
    pub fn conjugated(&self, u: &CMat) -> SignedResolvents {
        let ud = u.adjoint();
        let f = |v: &Vec<CMat>| v.iter().map(|r| u * r * &ud).collect();
        SignedResolvents { plus: f(&self.plus), minus: f(&self.minus) }
    }
}

/// `Π(s)Π(t)` for `J`, `1` for `J̃`, times `∏_cycles (δ_{L,1} + tr ∏_l R_{s x}(A) R_{t y}(B))`
/// with `R_{s x}(A) = (s x - A)^{-1}`.
///
/// This is the normalization in which the recursion holds. It needs no `𝒥` and no
/// transposes, so it applies in any frame.
pub fn trace_form(form: Form, class: &TetradClass, xr: &SignedResolvents, yr: &SignedResolvents) -> Complex64 {
    let t = &class.canonical;
    let prefactor = match form {
        Form::J => Sign::product(t.s.iter().chain(&t.t).copied()).value(),
        Form::JTilde => 1.0,
    };
    let body: Complex64 = class
        .cycles
        .iter()
        .map(|cyc| {
            let mut prod: Option<CMat> = None;
            for &(i, j) in cyc {
                let step = xr.get(t.s[i], i) * yr.get(t.t[j], j);
                prod = Some(match prod {
                    None => step,
                    Some(p) => p * step,
                });
            }
            let head = if cyc.len() == 1 { 1.0 } else { 0.0 };
            head + trace(&prod.expect("cycles are non-empty"))
        })
        .product();
    body * prefactor
}

/// The product of traces exactly as labelled by the tetrad: resolvents `(x_i - A)^{-1}` and
/// `(y_j - B)^{-1}`, transposed when the vertex sign is `-`, with `𝒥` inserted between
/// neighbours of opposite sign, and `t(j)` (`J`) or `1` (`J̃`) added for each length-one cycle.
///
/// The traces do not depend on the representative. The `J` constant `t(j)` does, and is meant
/// for the canonical one, where every cycle starts with `s = +`.
pub fn basis_eval(tetrad: &Tetrad, pts: &SpectralPoints, a: &CMat, b: &CMat, form: Form) -> Result<Complex64> {
    let n = a.nrows();
    let jm = to_complex(&form.matrix(n)?);
    let rx = pts.x().iter().map(|&x| resolvent(x, a)).collect::<Result<Vec<_>>>()?;
    let ry = pts.y().iter().map(|&y| resolvent(y, b)).collect::<Result<Vec<_>>>()?;
    let pick = |r: &CMat, s: Sign| if s == Sign::Minus { r.transpose() } else { r.clone() };
    let mut value = Complex64::new(1.0, 0.0);
    for cyc in tetrad.cycles() {
        let len = cyc.len();
        let mut prod = CMat::identity(n, n);
        for (l, &(i, j)) in cyc.iter().enumerate() {
            let next = cyc[(l + 1) % len].0;
            prod *= pick(&rx[i], tetrad.s[i]);
            if tetrad.s[i] != tetrad.t[j] {
                prod *= &jm;
            }
            prod *= pick(&ry[j], tetrad.t[j]);
            if tetrad.t[j] != tetrad.s[next] {
                prod *= &jm;
            }
        }
        let head = match (len, form) {
            (1, Form::J) => tetrad.t[cyc[0].1].value(),
            (1, Form::JTilde) => 1.0,
            _ => 0.0,
        };
        value *= head + trace(&prod);
    }
    Ok(value)
}

/// [`basis_eval`] rescaled to the recursion normalization: unchanged for `J`, and multiplied
/// by `(-1)^{N/2} Π(s)Π(t)` for `J̃`, `N` being the number of `𝒥` insertions. On
/// `𝒥`-antisymmetric arguments this equals [`trace_form`].
pub fn correlator_eval(tetrad: &Tetrad, pts: &SpectralPoints, a: &CMat, b: &CMat, form: Form) -> Result<Complex64> {
    let raw = basis_eval(tetrad, pts, a, b, form)?;
    Ok(match form {
        Form::J => raw,
        Form::JTilde => {
            let insertions: usize = tetrad.cycles().iter().map(|c| tetrad.insertions(c)).sum();
            let parity = if (insertions / 2) % 2 == 0 { 1.0 } else { -1.0 };
            raw * parity * Sign::product(tetrad.s.iter().chain(&tetrad.t).copied()).value()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::ClassTable;
    use crate::linalg::c;
    use crate::oracles::stats::shard_rng;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn random_antisymmetric(form: Form, n: usize, seed: u64) -> CMat {
        let mut rng = shard_rng(seed, 0);
        let mut g = || Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        let m = CMat::from_fn(n, n, |_, _| g());
        let j = to_complex(&form.matrix(n).unwrap());
        let jinv = j.clone().try_inverse().unwrap();
        (&m - &j * m.transpose() * jinv) * c(0.5)
    }

    #[test]
    fn zero_matrices_rank_one() {
        let table = ClassTable::new(1).unwrap();
        let pts = SpectralPoints::real(&[2.0], &[3.0]).unwrap();
        let z = CMat::zeros(2, 2);
        let vals: Vec<Complex64> =
            table.classes().iter().map(|cl| basis_eval(&cl.canonical, &pts, &z, &z, Form::J).unwrap()).collect();
        assert!((vals[0] - 4.0 / 3.0).norm() < 1e-15);
        assert!((vals[1] + 2.0 / 3.0).norm() < 1e-15);
    }

    #[test]
    fn literal_and_trace_forms_agree() {
        for (form, n) in [(Form::J, 2), (Form::J, 3), (Form::J, 4), (Form::JTilde, 2), (Form::JTilde, 4)] {
            let a = random_antisymmetric(form, n, 1 + n as u64);
            let b = random_antisymmetric(form, n, 100 + n as u64);
            for r in 1..=2 {
                let table = ClassTable::new(r).unwrap();
                let x: Vec<Complex64> = (0..r).map(|i| Complex64::new(2.5 + i as f64, 0.4)).collect();
                let y: Vec<Complex64> = (0..r).map(|i| Complex64::new(-1.0, 2.2 + i as f64)).collect();
                let pts = SpectralPoints::new(x.clone(), y.clone()).unwrap();
                let xr = SignedResolvents::new(&x, &a).unwrap();
                let yr = SignedResolvents::new(&y, &b).unwrap();
                for cl in table.classes() {
                    let lit = correlator_eval(&cl.canonical, &pts, &a, &b, form).unwrap();
                    let tr = trace_form(form, cl, &xr, &yr);
                    assert!((lit - tr).norm() < 1e-12 * (1.0 + tr.norm()), "{form} n={n} {cl}");
                }
            }
        }
    }

    /// The traces are twist invariant. The `J` constant `t(j)` of a length-one cycle is read
    /// off the canonical representative, so those twists are checked for `J̃` only.
    #[test]
    fn twisting_a_cycle_changes_nothing() {
        for (form, n) in [(Form::J, 3), (Form::JTilde, 4)] {
            let a = random_antisymmetric(form, n, 5);
            let b = random_antisymmetric(form, n, 6);
            let table = ClassTable::new(2).unwrap();
            let pts = SpectralPoints::real(&[2.0, 3.5], &[1.5, -2.5]).unwrap();
            for cl in table.classes() {
                let base = basis_eval(&cl.canonical, &pts, &a, &b, form).unwrap();
                for k in 0..cl.cycles.len() {
                    if form == Form::J && cl.cycles[k].len() == 1 {
                        continue;
                    }
                    let mut tw = cl.canonical.clone();
                    tw.twist_cycle(k);
                    let v = basis_eval(&tw, &pts, &a, &b, form).unwrap();
                    assert!((v - base).norm() < 1e-12 * (1.0 + base.norm()), "{form} {cl}");
                }
            }
        }
    }
}
