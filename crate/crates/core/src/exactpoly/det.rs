use super::poly::exact_divide;
use super::MultiPoly;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_SIDE: usize = 8;

/// Sides up to this use cofactor expansion, larger ones Bareiss.
const COFACTOR_LIMIT: usize = 5;

pub fn poly_det(m: &[Vec<MultiPoly>]) -> Result<MultiPoly> {
    poly_det_bounded(m, DEFAULT_MAX_SIDE)
}

pub fn poly_det_bounded(m: &[Vec<MultiPoly>], max_side: usize) -> Result<MultiPoly> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::Dimension("determinant of a non-square matrix".into()));
    }
    if n > max_side {
        return Err(Error::Dimension(format!("side {n} exceeds bound {max_side}")));
    }
    if n <= COFACTOR_LIMIT {
        let cols: Vec<usize> = (0..n).collect();
        Ok(cofactor(m, 0, &cols))
    } else {
        bareiss(m)
    }
}

fn cofactor(m: &[Vec<MultiPoly>], row: usize, cols: &[usize]) -> MultiPoly {
    match cols.len() {
        0 => MultiPoly::one(),
        1 => m[row][cols[0]].clone(),
        _ => {
            let mut acc = MultiPoly::zero();
            for (k, &c) in cols.iter().enumerate() {
                if m[row][c].is_zero() {
                    continue;
                }
                let rest: Vec<usize> = cols.iter().copied().filter(|&d| d != c).collect();
                let t = &m[row][c] * &cofactor(m, row + 1, &rest);
                acc = if k % 2 == 0 { acc + t } else { acc - t };
            }
            acc
        }
    }
}

fn bareiss(m: &[Vec<MultiPoly>]) -> Result<MultiPoly> {
    let n = m.len();
    let mut a: Vec<Vec<MultiPoly>> = m.to_vec();
    let mut sign = false;
    let mut prev = MultiPoly::one();
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(MultiPoly::zero());
            };
            a.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = exact_divide(&num, &prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if sign { -d } else { d })
}

/// Minor on the given rows and columns, in the given order.
pub fn poly_minor(m: &[Vec<MultiPoly>], rows: &[usize], cols: &[usize]) -> Result<MultiPoly> {
    let sub: Vec<Vec<MultiPoly>> = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect()).collect();
    poly_det(&sub)
}
