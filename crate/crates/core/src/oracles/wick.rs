//! Exact Gaussian moments of triangular entries by summing over pairings.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::triangular::{entry_link, independent_variables};
use crate::error::{Error, Result};
use crate::groups::Form;
use crate::linalg::CMat;

/// Longest word accepted: `7!! = 105` pairings.
pub const WICK_MAX: usize = 8;

/// `T_{row,col}` or `T†_{row,col} = conj(T_{col,row})`, zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Symbol {
    pub row: usize,
    pub col: usize,
    pub dagger: bool,
}

impl Symbol {
    pub fn t(row: usize, col: usize) -> Symbol {
        Symbol { row, col, dagger: false }
    }

    pub fn t_dagger(row: usize, col: usize) -> Symbol {
        Symbol { row, col, dagger: true }
    }

    /// Value on a concrete matrix.
    pub fn eval(&self, t: &CMat) -> Complex64 {
        if self.dagger {
            t[(self.col, self.row)].conj()
        } else {
            t[(self.row, self.col)]
        }
    }
}

/// `⟨a b⟩`; only `T`-`T†` pairs are nonzero.
pub fn propagator(form: Form, n: usize, a: Symbol, b: Symbol) -> f64 {
    let (plain, dag) = match (a.dagger, b.dagger) {
        (false, true) => (a, b),
        (true, false) => (b, a),
        _ => return 0.0,
    };
    let (Some(l1), Some(l2)) = (entry_link(form, n, plain.row, plain.col), entry_link(form, n, dag.col, dag.row))
    else {
        return 0.0;
    };
    if l1.var != l2.var {
        return 0.0;
    }
    let var = independent_variables(form, n)
        .into_iter()
        .find(|&(p, q, _)| (p, q) == l1.var)
        .map_or(0.0, |v| v.2);
    l1.coef * l2.coef * var
}

fn pairings(form: Form, n: usize, word: &[Symbol]) -> f64 {
    let Some((&first, rest)) = word.split_first() else { return 1.0 };
    (0..rest.len())
        .map(|k| {
            let p = propagator(form, n, first, rest[k]);
            if p == 0.0 {
                return 0.0;
            }
            let remaining: Vec<Symbol> = rest.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, s)| *s).collect();
            p * pairings(form, n, &remaining)
        })
        .sum()
}

/// `⟨∏ word⟩` as the sum over all pairings of products of propagators.
pub fn wick_enumerate(word: &[Symbol], form: Form, n: usize) -> Result<f64> {
    if word.len() % 2 == 1 {
        return Err(Error::OddWord(word.len()));
    }
    if word.len() > WICK_MAX {
        return Err(Error::WordTooLong { len: word.len(), max: WICK_MAX });
    }
    if form == Form::JTilde && n % 2 == 1 {
        return Err(Error::ParityMismatch { form: form.to_string(), n });
    }
    if let Some(s) = word.iter().find(|s| s.row >= n || s.col >= n) {
        return Err(Error::InvalidArgument(format!("index ({}, {}) outside size {n}", s.row, s.col)));
    }
    Ok(pairings(form, n, word))
}

pub fn word_value(word: &[Symbol], t: &CMat) -> Complex64 {
    word.iter().map(|s| s.eval(t)).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use Symbol as S;

    #[test]
    fn table_values() {
        for (form, b) in [(Form::J, -1.0), (Form::JTilde, 1.0)] {
            let n = 6;
            assert_eq!(wick_enumerate(&[S::t(0, 1), S::t_dagger(1, 0)], form, n).unwrap(), 1.0);
            assert_eq!(wick_enumerate(&[S::t(0, n - 1), S::t_dagger(n - 1, 0)], form, n).unwrap(), 1.0 + b);
            assert_eq!(wick_enumerate(&[S::t(0, 1), S::t(2, 3)], form, n).unwrap(), 0.0);
            let w = [S::t(0, n - 1), S::t_dagger(n - 1, 0), S::t(0, 1), S::t_dagger(1, 0)];
            assert_eq!(wick_enumerate(&w, form, n).unwrap(), 1.0 + b);
        }
    }

    #[test]
    fn symmetry_propagators() {
        // ⟨T_{i,n} T†_{n,j}⟩ = δ, ⟨T_{1,i} T†_{n,j}⟩ = -𝒥_{ij}, ⟨T_{i,n} T†_{j,1}⟩ = -(𝒥⁻¹)_{ij}
        for form in [Form::J, Form::JTilde] {
            let n = 6;
            let j = form.matrix(n).unwrap();
            let jinv = j.clone().try_inverse().unwrap();
            for i in 1..n - 1 {
                for k in 1..n - 1 {
                    let p = |a, b| propagator(form, n, a, b);
                    assert_eq!(p(S::t(i, n - 1), S::t_dagger(n - 1, k)), if i == k { 1.0 } else { 0.0 });
                    assert_eq!(p(S::t(0, i), S::t_dagger(n - 1, k)), -j[(i, k)]);
                    assert_eq!(p(S::t(i, n - 1), S::t_dagger(k, 0)), -jinv[(i, k)]);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_words() {
        assert_eq!(wick_enumerate(&[S::t(0, 1)], Form::J, 3).unwrap_err(), Error::OddWord(1));
        assert!(matches!(wick_enumerate(&[S::t(0, 1); 10], Form::J, 3), Err(Error::WordTooLong { .. })));
    }
}
