use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use super::perm::{Perm, Sign};
use super::tetrad::{Cycle, Tetrad};
use crate::error::{Error, Result};

/// Default cap on the basis rank: (2R)! = 720 classes at R = 3.
pub const R_MAX: usize = 3;

/// Relabels positions `0..2R` as signed vertex labels and provides the mirror involution.
///
/// Position `p < R` carries `+(p)`, position `R + k` carries `-(k)`. The mirror
/// `e(p) = p ± R` swaps the two signs of one label, so `alpha(e(p)) = -alpha(p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignedIndexMap {
    r: usize,
}

impl SignedIndexMap {
    pub fn new(r: usize) -> SignedIndexMap {
        SignedIndexMap { r }
    }

    pub fn alpha(&self, p: usize) -> (Sign, usize) {
        if p < self.r {
            (Sign::Plus, p)
        } else {
            (Sign::Minus, p - self.r)
        }
    }

    pub fn position(&self, sign: Sign, k: usize) -> usize {
        match sign {
            Sign::Plus => k,
            Sign::Minus => self.r + k,
        }
    }

    pub fn mirror(&self, p: usize) -> usize {
        if p < self.r {
            p + self.r
        } else {
            p - self.r
        }
    }
}

/// A class in the correlator basis: its canonical tetrad, the cycle bookkeeping and
/// the matching permutation of `2R` points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TetradClass {
    pub canonical: Tetrad,
    pub cycles: Vec<Cycle>,
    pub perm2r: Perm,
}

impl TetradClass {
    pub fn rank(&self) -> usize {
        self.canonical.rank()
    }

    /// True when `sigma = tau`, i.e. every cycle has length one.
    pub fn is_diagonal(&self) -> bool {
        self.canonical.sigma == self.canonical.tau
    }
}

impl fmt::Display for TetradClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical)
    }
}

#[derive(Serialize)]
struct ClassRecord {
    index: usize,
    pi: Vec<usize>,
    tetrad: String,
}

pub fn perm_to_tetrad(pi: &Perm) -> Result<TetradClass> {
    let n = pi.len();
    if n == 0 || n % 2 != 0 {
        return Err(Error::MalformedPermutation(format!("length {n} is not a positive even number")));
    }
    let r = n / 2;
    let map = SignedIndexMap::new(r);
    let pi_inv = pi.inverse();
    let mut sigma = vec![usize::MAX; r];
    let mut tau = vec![usize::MAX; r];
    let mut s = vec![Sign::Plus; r];
    let mut t = vec![Sign::Plus; r];
    let mut used = vec![false; r];
    while let Some(start) = used.iter().position(|u| !u) {
        let mut i = start;
        loop {
            let (si, bi) = map.alpha(i);
            used[bi] = true;
            s[bi] = si;
            let j = pi.apply(i);
            let (tj, wj) = map.alpha(j);
            sigma[bi] = wj;
            t[wj] = tj;
            let k = map.mirror(pi_inv.apply(map.mirror(j)));
            let (_, bk) = map.alpha(k);
            tau[bk] = wj;
            if bk == start {
                debug_assert_eq!(k, start);
                break;
            }
            i = k;
        }
    }
    let canonical = Tetrad::new(Perm::new(sigma)?, Perm::new(tau)?, s, t)?;
    let cycles = canonical.cycles();
    Ok(TetradClass { canonical, cycles, perm2r: pi.clone() })
}

/// Works for any representative of the class, canonical or not.
pub fn tetrad_to_perm(tetrad: &Tetrad) -> Perm {
    let r = tetrad.rank();
    let map = SignedIndexMap::new(r);
    let mut images = vec![0; 2 * r];
    for i in 0..r {
        let si = tetrad.s[i];
        let a = tetrad.sigma.apply(i);
        let b = tetrad.tau.apply(i);
        images[map.position(si, i)] = map.position(tetrad.t[a], a);
        images[map.position(-si, i)] = map.position(-tetrad.t[b], b);
    }
    Perm::new(images).expect("a well-formed tetrad always yields a bijection")
}

/// `(2R)!`
pub fn class_count(r: usize) -> usize {
    (1..=2 * r).product()
}

/// Position of a permutation in lexicographic order of its one-line notation.
pub fn lehmer_rank(pi: &Perm) -> usize {
    let n = pi.len();
    let img = pi.images();
    (0..n)
        .map(|i| {
            let smaller = img[i + 1..].iter().filter(|&&v| v < img[i]).count();
            smaller * (1..n - i).product::<usize>()
        })
        .sum()
}

/// All `(2R)!` classes in lexicographic order of `pi`, which is the basis layout used everywhere.
pub fn enumerate_classes(r: usize) -> Result<Vec<TetradClass>> {
    ClassTable::with_limit(r, R_MAX).map(|t| t.classes)
}

/// Basis classes for one rank, with lookup from any representative.
#[derive(Debug, Clone)]
pub struct ClassTable {
    r: usize,
    classes: Vec<TetradClass>,
}

impl ClassTable {
    pub fn new(r: usize) -> Result<ClassTable> {
        ClassTable::with_limit(r, R_MAX)
    }

    pub fn with_limit(r: usize, max: usize) -> Result<ClassTable> {
        if r == 0 {
            return Err(Error::InvalidArgument("rank R must be positive".into()));
        }
        if r > max {
            return Err(Error::RankTooLarge { r, max });
        }
        let classes = Perm::all(2 * r).map(|pi| perm_to_tetrad(&pi)).collect::<Result<Vec<_>>>()?;
        Ok(ClassTable { r, classes })
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[TetradClass] {
        &self.classes
    }

    pub fn get(&self, k: usize) -> &TetradClass {
        &self.classes[k]
    }

    pub fn index_of_perm(&self, pi: &Perm) -> Result<usize> {
        if pi.len() != 2 * self.r {
            return Err(Error::RankMismatch { expected: 2 * self.r, got: pi.len() });
        }
        Ok(lehmer_rank(pi))
    }

    pub fn index_of(&self, tetrad: &Tetrad) -> Result<usize> {
        if tetrad.rank() != self.r {
            return Err(Error::RankMismatch { expected: self.r, got: tetrad.rank() });
        }
        Ok(lehmer_rank(&tetrad_to_perm(tetrad)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<ClassRecord> = self
            .classes
            .iter()
            .enumerate()
            .map(|(index, c)| ClassRecord { index, pi: c.perm2r.one_line(), tetrad: c.to_string() })
            .collect();
        serde_json::to_value(rows).expect("records serialize")
    }
}

/// Spreads `R` points over `2R` positions: `(z_1..z_R, -z_1..-z_R)`.
pub fn doubled_points(z: &[Complex64]) -> Vec<Complex64> {
    z.iter().copied().chain(z.iter().map(|v| -v)).collect()
}
