use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::perm::{Perm, Sign};
use crate::error::{Error, Result};

/// A labelled product of resolvent traces: black vertex `i` (an `x` resolvent) is
/// joined to white vertex `sigma(i)` and back to black `tau^{-1}(sigma(i))`.
/// Indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tetrad {
    pub sigma: Perm,
    pub tau: Perm,
    pub s: Vec<Sign>,
    pub t: Vec<Sign>,
}

/// One cycle of `sigma ∘ tau^{-1}` as `(black, white)` pairs with
/// `sigma(black_l) = white_l` and `tau^{-1}(white_l) = black_{l+1}`.
pub type Cycle = Vec<(usize, usize)>;

impl Tetrad {
    pub fn new(sigma: Perm, tau: Perm, s: Vec<Sign>, t: Vec<Sign>) -> Result<Tetrad> {
        let r = sigma.len();
        if tau.len() != r || s.len() != r || t.len() != r {
            return Err(Error::MalformedTetrad(format!(
                "lengths sigma={} tau={} s={} t={}",
                r,
                tau.len(),
                s.len(),
                t.len()
            )));
        }
        if r == 0 {
            return Err(Error::MalformedTetrad("empty tetrad".into()));
        }
        Ok(Tetrad { sigma, tau, s, t })
    }

    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    pub fn cycles(&self) -> Vec<Cycle> {
        let r = self.rank();
        let tau_inv = self.tau.inverse();
        let mut seen = vec![false; r];
        let mut out = Vec::new();
        for start in 0..r {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                let j = self.sigma.apply(i);
                cyc.push((i, j));
                i = tau_inv.apply(j);
            }
            out.push(cyc);
        }
        out
    }

    /// Flips every sign on cycle `k` and reverses its orientation (swaps `sigma` and
    /// `tau` on its black vertices). This is the move that generates a class.
    pub fn twist_cycle(&mut self, k: usize) {
        let cycles = self.cycles();
        let Some(cyc) = cycles.get(k) else { return };
        let mut sigma = self.sigma.images().to_vec();
        let mut tau = self.tau.images().to_vec();
        for &(i, j) in cyc {
            self.s[i] = -self.s[i];
            self.t[j] = -self.t[j];
            std::mem::swap(&mut sigma[i], &mut tau[i]);
        }
        self.sigma = Perm::new(sigma).expect("swap on a cycle keeps bijectivity");
        self.tau = Perm::new(tau).expect("swap on a cycle keeps bijectivity");
    }

    pub fn is_canonical(&self) -> bool {
        self.cycles().iter().all(|c| self.s[c[0].0] == Sign::Plus)
    }

    /// Number of `𝒥` insertions needed in the trace product of a cycle, written with `𝒥`
    /// between factors whose signs differ.
    pub fn insertions(&self, cyc: &Cycle) -> usize {
        let len = cyc.len();
        (0..len)
            .map(|l| {
                let (i, j) = cyc[l];
                let next = cyc[(l + 1) % len].0;
                usize::from(self.s[i] != self.t[j]) + usize::from(self.t[j] != self.s[next])
            })
            .sum()
    }
}

impl fmt::Display for Tetrad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{},{},({}),({})}}",
            self.sigma,
            self.tau,
            self.s.iter().join(","),
            self.t.iter().join(",")
        )
    }
}

/// Returns the representative whose smallest black vertex in every cycle has `s = +`.
pub fn canonicalize(raw: &Tetrad) -> Result<Tetrad> {
    let mut out = Tetrad::new(raw.sigma.clone(), raw.tau.clone(), raw.s.clone(), raw.t.clone())?;
    let cycles = out.cycles();
    for (k, cyc) in cycles.iter().enumerate() {
        if out.s[cyc[0].0] == Sign::Minus {
            out.twist_cycle(k);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sign::{Minus as M, Plus as P};

    fn tetrad(sigma: &[&[usize]], tau: &[&[usize]], s: &[Sign], t: &[Sign]) -> Tetrad {
        let r = s.len();
        Tetrad::new(
            Perm::from_cycles(r, sigma).unwrap(),
            Perm::from_cycles(r, tau).unwrap(),
            s.to_vec(),
            t.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn single_cycle_flip() {
        let raw = tetrad(&[], &[], &[M], &[M]);
        let c = canonicalize(&raw).unwrap();
        assert_eq!((c.s[0], c.t[0]), (P, P));
        let raw = tetrad(&[], &[], &[P], &[M]);
        assert_eq!(canonicalize(&raw).unwrap(), raw);
    }

    #[test]
    fn worked_diagram_is_canonical() {
        let raw = tetrad(&[&[1, 3], &[2, 4]], &[&[2, 4, 3]], &[P, P, P, M], &[P, M, M, P]);
        assert!(raw.is_canonical());
        assert_eq!(canonicalize(&raw).unwrap(), raw);
        let cycles = raw.cycles();
        assert_eq!(cycles, vec![vec![(0, 2), (3, 1), (2, 0)], vec![(1, 3)]]);
    }

    #[test]
    fn cycle_bookkeeping() {
        let raw = tetrad(&[&[1, 2, 3]], &[&[1, 3]], &[P, M, P], &[M, P, P]);
        let tau_inv = raw.tau.inverse();
        for cyc in raw.cycles() {
            for (l, &(i, j)) in cyc.iter().enumerate() {
                assert_eq!(raw.sigma.apply(i), j);
                assert_eq!(tau_inv.apply(j), cyc[(l + 1) % cyc.len()].0);
            }
        }
    }

    #[test]
    fn twist_preserves_cycle_vertex_sets() {
        let raw = tetrad(&[&[1, 2, 3]], &[&[1, 3]], &[P, M, P], &[M, P, P]);
        let mut tw = raw.clone();
        tw.twist_cycle(0);
        let verts = |t: &Tetrad| {
            t.cycles()
                .into_iter()
                .map(|c| c.into_iter().map(|(i, _)| i).sorted().collect::<Vec<_>>())
                .collect::<Vec<_>>()
        };
        assert_eq!(verts(&raw), verts(&tw));
        tw.twist_cycle(0);
        assert_eq!(tw, raw);
    }
}
