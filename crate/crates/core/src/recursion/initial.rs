use num_complex::Complex64;

use super::points::SpectralPoints;
use super::BasisVector;
use crate::combinatorics::{ClassTable, Sign, TetradClass};
use crate::error::{Error, Result};
use crate::groups::Form;
use crate::linalg::recip;

/// Where the recursion stops: an empty (size 0) or a single-entry (size 1) centre.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Center {
    Empty,
    Single,
}

impl Center {
    pub fn of_size(n: usize) -> Center {
        if n % 2 == 0 {
            Center::Empty
        } else {
            Center::Single
        }
    }
}

fn sign_product(class: &TetradClass) -> f64 {
    let t = &class.canonical;
    Sign::product(t.s.iter().chain(&t.t).copied()).value()
}

/// `I₀^J = Π(s)Π(t) δ_{σ,τ}`, `I₀^{J̃} = δ_{σ,τ}` and
/// `I₁^J = ∏_k (t(j_{k,1}) δ_{R_k,1} + ∏_l 1/(x_{i_{k,l}} y_{j_{k,l}}))`.
pub fn initial_condition(
    form: Form,
    center: Center,
    table: &ClassTable,
    pts: Option<&SpectralPoints>,
) -> Result<BasisVector> {
    let entries = match (form, center) {
        (Form::JTilde, Center::Single) => return Err(Error::ParityMismatch { form: form.to_string(), n: 1 }),
        (_, Center::Empty) => table
            .classes()
            .iter()
            .map(|cl| {
                let v = match (cl.is_diagonal(), form) {
                    (false, _) => 0.0,
                    (true, Form::J) => sign_product(cl),
                    (true, Form::JTilde) => 1.0,
                };
                Complex64::new(v, 0.0)
            })
            .collect(),
        (Form::J, Center::Single) => {
            let pts = pts.ok_or(Error::MissingPoints)?;
            if pts.rank() != table.rank() {
                return Err(Error::RankMismatch { expected: table.rank(), got: pts.rank() });
            }
            table
                .classes()
                .iter()
                .map(|cl| {
                    cl.cycles
                        .iter()
                        .map(|cyc| {
                            let tail: Complex64 =
                                cyc.iter().map(|&(i, j)| recip(pts.x()[i] * pts.y()[j])).product();
                            let head = if cyc.len() == 1 { cl.canonical.t[cyc[0].1].value() } else { 0.0 };
                            head + tail
                        })
                        .product()
                })
                .collect()
        }
    };
    Ok(BasisVector::new(table.rank(), entries))
}
