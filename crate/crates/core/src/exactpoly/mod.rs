//! Exact rational arithmetic, sparse integer polynomials and determinants.

mod det;
mod linalg;
mod poly;
mod rational;
mod var;

pub use det::{poly_det, poly_det_bounded, poly_minor, DEFAULT_MAX_SIDE};
pub use linalg::QMatrix;
pub use poly::{exact_divide, substitute, t_degree_split, Monomial, MultiPoly};
pub use rational::{fmt_q, parse_q, primitive_integer_vector, q, qi, Rational};
pub use var::Var;

/// Matrix of polynomials, row-major.
pub type PolyMatrix = Vec<Vec<MultiPoly>>;

/// Evaluate every entry under `val`.
pub fn eval_matrix<F>(m: &PolyMatrix, mut val: F) -> crate::Result<QMatrix>
where
    F: FnMut(Var) -> Option<Rational>,
{
    let rows = m
        .iter()
        .map(|row| row.iter().map(|e| e.eval_with(&mut val)).collect::<crate::Result<Vec<_>>>())
        .collect::<crate::Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Ok(QMatrix::zeros(0, 0));
    }
    QMatrix::from_rows(rows)
}
