//! Group families, Cartan spectra, their matrix embeddings and Weyl groups.

use std::fmt;

use itertools::Itertools;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{Perm, Sign};
use crate::error::{Error, Result};
use crate::linalg::{c, CMat, I};

/// Relative tolerance below which two squared eigenvalues count as coincident.
pub const COINCIDENCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "tag", content = "rank", rename_all = "kebab-case")]
pub enum GroupFamily {
    /// O(2m)
    OEven(usize),
    /// O(2m+1)
    OOdd(usize),
    /// Sp(2m), represented on C^{2m}
    Sp(usize),
    /// U(n), used only for partition functions
    U(usize),
}

impl GroupFamily {
    pub fn rank(self) -> usize {
        match self {
            GroupFamily::OEven(m) | GroupFamily::OOdd(m) | GroupFamily::Sp(m) | GroupFamily::U(m) => m,
        }
    }

    pub fn matrix_size(self) -> usize {
        match self {
            GroupFamily::OEven(m) | GroupFamily::Sp(m) => 2 * m,
            GroupFamily::OOdd(m) => 2 * m + 1,
            GroupFamily::U(n) => n,
        }
    }

    /// True for O(2m+1) and Sp(2m), where the closed forms use `sinh` and carry `∏X_i`.
    pub fn is_odd_type(self) -> bool {
        matches!(self, GroupFamily::OOdd(_) | GroupFamily::Sp(_))
    }

    /// The antisymmetry form of the triangular reduction.
    pub fn form(self) -> Result<Form> {
        match self {
            GroupFamily::OEven(_) | GroupFamily::OOdd(_) => Ok(Form::J),
            GroupFamily::Sp(_) => Ok(Form::JTilde),
            GroupFamily::U(_) => Err(Error::UnsupportedFamily(self.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupFamily::OEven(_) => "o-even",
            GroupFamily::OOdd(_) => "o-odd",
            GroupFamily::Sp(_) => "sp",
            GroupFamily::U(_) => "u",
        }
    }

    pub fn with_rank(self, m: usize) -> GroupFamily {
        match self {
            GroupFamily::OEven(_) => GroupFamily::OEven(m),
            GroupFamily::OOdd(_) => GroupFamily::OOdd(m),
            GroupFamily::Sp(_) => GroupFamily::Sp(m),
            GroupFamily::U(_) => GroupFamily::U(m),
        }
    }

    fn require_rank(self) -> Result<()> {
        if self.rank() == 0 {
            return Err(Error::InvalidArgument(format!("{} needs a positive rank", self.name())));
        }
        Ok(())
    }
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupFamily::OEven(m) => write!(f, "O({})", 2 * m),
            GroupFamily::OOdd(m) => write!(f, "O({})", 2 * m + 1),
            GroupFamily::Sp(m) => write!(f, "Sp({})", 2 * m),
            GroupFamily::U(n) => write!(f, "U({n})"),
        }
    }
}

/// `J` is the flip matrix; `J̃` is the antidiagonal symplectic form with `+1` in the upper half.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Form {
    J,
    #[serde(rename = "j-tilde")]
    JTilde,
}

impl Form {
    pub fn matrix(self, n: usize) -> Result<DMatrix<f64>> {
        if self == Form::JTilde && n % 2 != 0 {
            return Err(Error::ParityMismatch { form: self.to_string(), n });
        }
        Ok(DMatrix::from_fn(n, n, |a, b| {
            if a + b + 1 != n {
                0.0
            } else if self == Form::JTilde && 2 * a >= n {
                -1.0
            } else {
                1.0
            }
        }))
    }

    /// Sign of the form under transposition: `-1` for `J`, `+1` for `J̃` (the constant `b`).
    pub fn b(self) -> f64 {
        match self {
            Form::J => -1.0,
            Form::JTilde => 1.0,
        }
    }

    /// Row signs `d_a` with `J̃_{a, n-1-a} = d_a`; all `+1` for `J`.
    pub fn row_signs(self, n: usize) -> Vec<f64> {
        (0..n).map(|a| if self == Form::JTilde && 2 * a >= n { -1.0 } else { 1.0 }).collect()
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Form::J => "J",
            Form::JTilde => "J~",
        })
    }
}

/// Eigenvalue parameters of a Cartan element, validated for the family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSpectrum {
    family: GroupFamily,
    eigenvalues: Vec<f64>,
}

impl GroupSpectrum {
    /// The rank of `family` is taken from `eigenvalues.len()`.
    pub fn new(family: GroupFamily, eigenvalues: Vec<f64>) -> Result<GroupSpectrum> {
        let family = family.with_rank(eigenvalues.len());
        family.require_rank()?;
        for (i, &x) in eigenvalues.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFiniteEigenvalue { i });
            }
            if family.is_odd_type() && x.abs() < COINCIDENCE_TOL {
                return Err(Error::ZeroEigenvalue { i, family: family.to_string() });
            }
        }
        for (i, j) in (0..eigenvalues.len()).tuple_combinations() {
            let (a, b) = (eigenvalues[i], eigenvalues[j]);
            let clash = match family {
                GroupFamily::U(_) => (a - b).abs() < COINCIDENCE_TOL * 1f64.max(a.abs()).max(b.abs()),
                _ => (a * a - b * b).abs() < COINCIDENCE_TOL * 1f64.max(a * a).max(b * b),
            };
            if clash {
                return Err(Error::CoincidentEigenvalues { i, j });
            }
        }
        Ok(GroupSpectrum { family, eigenvalues })
    }

    pub fn family(&self) -> GroupFamily {
        self.family
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Checks that two spectra can be paired in one integral.
    pub fn check_pair(&self, other: &GroupSpectrum) -> Result<()> {
        if self.family != other.family {
            return Err(Error::FamilyMismatch(self.family.to_string(), other.family.to_string()));
        }
        Ok(())
    }
}

/// Product over positive roots evaluated on the spectrum.
pub fn generalized_vandermonde(spec: &GroupSpectrum) -> f64 {
    let x = spec.eigenvalues();
    let pairs = (0..x.len()).tuple_combinations::<(_, _)>();
    match spec.family() {
        GroupFamily::U(_) => pairs.map(|(i, j)| x[i] - x[j]).product(),
        fam => {
            let base: f64 = pairs.map(|(i, j)| x[i] * x[i] - x[j] * x[j]).product();
            if fam.is_odd_type() {
                base * x.iter().product::<f64>()
            } else {
                base
            }
        }
    }
}

/// One signed permutation with its weight in the Weyl sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    pub tau: Perm,
    pub t: Vec<Sign>,
    pub weight: i8,
}

/// All `2^m m!` elements of `S_m ⋉ Z_2^m`, permutations in lexicographic order and signs
/// counting up from all-plus.
pub fn weyl_elements(family: GroupFamily) -> Result<Vec<WeylElement>> {
    if matches!(family, GroupFamily::U(_)) {
        return Err(Error::UnsupportedFamily(family.to_string()));
    }
    family.require_rank()?;
    let m = family.rank();
    let mut out = Vec::with_capacity((1usize << m) * (1..=m).product::<usize>());
    for tau in Perm::all(m) {
        for bits in 0..1usize << m {
            let t: Vec<Sign> =
                (0..m).map(|i| if bits >> i & 1 == 1 { Sign::Minus } else { Sign::Plus }).collect();
            let mut weight = tau.signature();
            if family.is_odd_type() {
                weight *= Sign::product(t.iter().copied()).as_i8();
            }
            out.push(WeylElement { tau: tau.clone(), t, weight });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbeddingKind {
    /// 2x2 real antisymmetric blocks `[[0, X], [-X, 0]]`, with a trailing zero for odd size.
    RealAntisymmetricBlocks,
    /// `diag(Z_1..Z_m, [0,] -Z_m..-Z_1)` with `Z_k = i X_k`.
    JAntisymmetricDiagonal,
    /// Complex image of `X_j e_2` on each 2x2 block: `[[0, -X], [X, 0]]`.
    Quaternionic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedCartan {
    pub matrix: CMat,
    pub kind: EmbeddingKind,
}

pub fn embed(spec: &GroupSpectrum, kind: EmbeddingKind) -> Result<EmbeddedCartan> {
    let family = spec.family();
    let n = family.matrix_size();
    let x = spec.eigenvalues();
    let incompatible = || Error::IncompatibleEmbedding {
        kind: format!("{kind:?}"),
        family: family.to_string(),
    };
    let matrix = match kind {
        EmbeddingKind::RealAntisymmetricBlocks => {
            if !matches!(family, GroupFamily::OEven(_) | GroupFamily::OOdd(_)) {
                return Err(incompatible());
            }
            let mut a = CMat::zeros(n, n);
            for (j, &v) in x.iter().enumerate() {
                a[(2 * j, 2 * j + 1)] = c(v);
                a[(2 * j + 1, 2 * j)] = c(-v);
            }
            a
        }
        EmbeddingKind::JAntisymmetricDiagonal => {
            if matches!(family, GroupFamily::U(_)) {
                return Err(incompatible());
            }
            let z: Vec<Complex64> = x.iter().map(|&v| I * v).collect();
            j_diagonal(&z, n)?
        }
        EmbeddingKind::Quaternionic => {
            if !matches!(family, GroupFamily::Sp(_)) {
                return Err(incompatible());
            }
            let mut a = CMat::zeros(n, n);
            for (j, &v) in x.iter().enumerate() {
                a[(2 * j, 2 * j + 1)] = c(-v);
                a[(2 * j + 1, 2 * j)] = c(v);
            }
            a
        }
    };
    Ok(EmbeddedCartan { matrix, kind })
}

/// `diag(z_1..z_m, [0,] -z_m..-z_1)` of size `n`, which must be `2m` or `2m+1`.
pub fn j_diagonal(z: &[Complex64], n: usize) -> Result<CMat> {
    if n / 2 != z.len() {
        return Err(Error::RankMismatch { expected: n / 2, got: z.len() });
    }
    let mut d = CMat::zeros(n, n);
    for (k, &v) in z.iter().enumerate() {
        d[(k, k)] = v;
        d[(n - 1 - k, n - 1 - k)] = -v;
    }
    Ok(d)
}

/// Unitary change of basis taking the family's defining representation to the frame where
/// antisymmetric (O) or quaternionic (Sp) Lie-algebra elements become `𝒥`-antisymmetric.
pub fn frame_change(family: GroupFamily) -> Result<CMat> {
    let n = family.matrix_size();
    match family {
        GroupFamily::OEven(_) | GroupFamily::OOdd(_) => {
            let a = Complex64::new(0.5, 0.5);
            let b = Complex64::new(0.5, -0.5);
            let j = Form::J.matrix(n)?;
            Ok(CMat::from_fn(n, n, |r, s| b * j[(r, s)] + if r == s { a } else { c(0.0) }))
        }
        GroupFamily::Sp(m) => {
            let mut p = CMat::zeros(n, n);
            for a in 0..m {
                p[(a, 2 * a)] = c(1.0);
                p[(n - 1 - a, 2 * a + 1)] = c(1.0);
            }
            Ok(p)
        }
        GroupFamily::U(_) => Err(Error::UnsupportedFamily(family.to_string())),
    }
}

/// `V A V†`
pub fn to_form_frame(family: GroupFamily, a: &CMat) -> Result<CMat> {
    let v = frame_change(family)?;
    Ok(&v * a * v.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    fn spec(f: GroupFamily, x: &[f64]) -> GroupSpectrum {
        GroupSpectrum::new(f, x.to_vec()).unwrap()
    }

    #[test]
    fn vandermonde_examples() {
        assert_eq!(generalized_vandermonde(&spec(GroupFamily::OEven(1), &[1.0])), 1.0);
        assert_eq!(generalized_vandermonde(&spec(GroupFamily::OEven(2), &[1.0, 2.0])), -3.0);
        assert_eq!(generalized_vandermonde(&spec(GroupFamily::OOdd(2), &[1.0, 2.0])), -6.0);
        assert_eq!(generalized_vandermonde(&spec(GroupFamily::Sp(2), &[1.0, 2.0])), -6.0);
        assert_eq!(generalized_vandermonde(&spec(GroupFamily::U(3), &[1.0, 2.0, 4.0])), -6.0);
    }

    #[test]
    fn validation_rules() {
        let f = GroupFamily::OEven(0);
        assert_eq!(
            GroupSpectrum::new(f, vec![1.0, -1.0]).unwrap_err(),
            Error::CoincidentEigenvalues { i: 0, j: 1 }
        );
        assert!(GroupSpectrum::new(f, vec![0.0, 1.0]).is_ok());
        assert!(matches!(
            GroupSpectrum::new(GroupFamily::Sp(0), vec![0.0, 1.0]),
            Err(Error::ZeroEigenvalue { i: 0, .. })
        ));
        assert!(GroupSpectrum::new(f, vec![1.0, 1.0 + 1e-13]).is_err());
        assert!(GroupSpectrum::new(f, vec![1.0, 1.0 + 1e-11]).is_ok());
        assert!(GroupSpectrum::new(GroupFamily::U(0), vec![1.0, -1.0]).is_ok());
        assert!(GroupSpectrum::new(f, vec![f64::NAN]).is_err());
        assert!(GroupSpectrum::new(f, vec![]).is_err());
    }

    #[test]
    fn weyl_enumeration() {
        let w = weyl_elements(GroupFamily::OEven(1)).unwrap();
        assert_eq!(w.iter().map(|e| e.weight).collect::<Vec<_>>(), vec![1, 1]);
        let w = weyl_elements(GroupFamily::OOdd(1)).unwrap();
        assert_eq!(w.iter().map(|e| (e.t[0], e.weight)).collect::<Vec<_>>(), vec![(Sign::Plus, 1), (Sign::Minus, -1)]);
        let w = weyl_elements(GroupFamily::OOdd(2)).unwrap();
        assert_eq!(w.len(), 8);
        let e = w.iter().find(|e| !e.tau.is_identity() && e.t == [Sign::Minus, Sign::Plus]).unwrap();
        assert_eq!(e.weight, 1);
        let w3 = weyl_elements(GroupFamily::Sp(3)).unwrap();
        assert_eq!(w3.len(), 48);
        assert!(w3.iter().map(|e| (e.tau.clone(), e.t.clone())).all_unique());
        assert!(weyl_elements(GroupFamily::U(2)).is_err());
    }

    #[test]
    fn embeddings() {
        let a = embed(&spec(GroupFamily::OEven(1), &[0.7]), EmbeddingKind::RealAntisymmetricBlocks).unwrap();
        assert_eq!(a.matrix, CMat::from_row_slice(2, 2, &[c(0.0), c(0.7), c(-0.7), c(0.0)]));
        let d = j_diagonal(&[c(2.0)], 3).unwrap();
        assert_eq!(d, CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(2.0), c(0.0), c(-2.0)])));
        let q = embed(&spec(GroupFamily::Sp(1), &[0.7]), EmbeddingKind::Quaternionic).unwrap();
        assert_eq!(q.matrix[(0, 1)], c(-0.7));
        assert!(embed(&spec(GroupFamily::OEven(1), &[0.7]), EmbeddingKind::Quaternionic).is_err());
        assert!(embed(&spec(GroupFamily::Sp(1), &[0.7]), EmbeddingKind::RealAntisymmetricBlocks).is_err());
    }

    #[test]
    fn block_singular_values() {
        let a = embed(&spec(GroupFamily::OOdd(2), &[0.5, -1.5]), EmbeddingKind::RealAntisymmetricBlocks).unwrap();
        let re = a.matrix.map(|z| z.re);
        assert!(max_abs(&(a.matrix.transpose() + &a.matrix)) == 0.0);
        let mut sv: Vec<f64> = re.singular_values().iter().copied().collect();
        sv.sort_by(f64::total_cmp);
        let want = [0.0, 0.5, 0.5, 1.5, 1.5];
        assert!(sv.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-14));
    }

    #[test]
    fn frames_make_cartan_form_antisymmetric() {
        for (fam, kind) in [
            (GroupFamily::OEven(2), EmbeddingKind::RealAntisymmetricBlocks),
            (GroupFamily::OOdd(2), EmbeddingKind::RealAntisymmetricBlocks),
            (GroupFamily::Sp(2), EmbeddingKind::Quaternionic),
        ] {
            let a = embed(&spec(fam, &[0.5, 1.5]), kind).unwrap().matrix;
            let b = to_form_frame(fam, &a).unwrap();
            let n = fam.matrix_size();
            let j = crate::linalg::to_complex(&fam.form().unwrap().matrix(n).unwrap());
            assert!(max_abs(&(&j * b.transpose() + &b * &j)) < 1e-14, "{fam}");
        }
    }
}
