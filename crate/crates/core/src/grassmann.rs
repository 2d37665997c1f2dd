//! Index sets, Plücker coordinates, block charts and the strata of G(p,n)
//! with respect to the split E = E1 ⊕ E2, E1 spanned by the first s basis vectors.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactpoly::{fmt_q, parse_q, primitive_integer_vector, QMatrix, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Params {
    s: usize,
    p: usize,
    n: usize,
    r: usize,
}

impl Params {
    /// Requires 2p ≤ n ≤ 2s.
    pub fn new(s: usize, p: usize, n: usize) -> Result<Params> {
        let par = Params::unnormalized(s, p, n)?;
        if 2 * p > n || n > 2 * s {
            return Err(Error::InvalidParams(format!("need 2p <= n <= 2s, got (s,p,n) = ({s},{p},{n})")));
        }
        Ok(par)
    }

    pub fn unnormalized(s: usize, p: usize, n: usize) -> Result<Params> {
        if p == 0 || p >= n || s == 0 || s >= n {
            return Err(Error::InvalidParams(format!("need 0 < p < n and 0 < s < n, got ({s},{p},{n})")));
        }
        let r = s.min(n - s).min(p).min(n - p);
        Ok(Params { s, p, n, r })
    }

    pub fn s(&self) -> usize {
        self.s
    }
    pub fn p(&self) -> usize {
        self.p
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn r(&self) -> usize {
        self.r
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.s, self.p, self.n)
    }
}

/// Strictly decreasing tuple of 1-based column indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct IndexTuple(Vec<usize>);

impl IndexTuple {
    pub fn new(entries: Vec<usize>, n: usize) -> Result<IndexTuple> {
        if entries.iter().any(|&e| e == 0 || e > n) || entries.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidParameter(format!("{entries:?} is not strictly decreasing in [1,{n}]")));
        }
        Ok(IndexTuple(entries))
    }

    /// Sorts a set of distinct columns into a tuple.
    pub fn from_set(mut cols: Vec<usize>) -> IndexTuple {
        cols.sort_unstable_by(|a, b| b.cmp(a));
        cols.dedup();
        IndexTuple(cols)
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// 0-based columns in ascending order.
    pub fn columns(&self) -> Vec<usize> {
        self.0.iter().rev().map(|&i| i - 1).collect()
    }

    pub fn weight(&self, s: usize) -> usize {
        self.0.iter().filter(|&&i| i > s).count()
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn weight(i: &IndexTuple, par: &Params) -> usize {
    i.weight(par.s)
}

/// All p-subsets of [1,n] as decreasing tuples, in lexicographic order of the tuples.
pub fn index_set(p: usize, n: usize) -> Vec<IndexTuple> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(p);
    fn rec(start: usize, p: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<IndexTuple>) {
        if cur.len() == p {
            out.push(IndexTuple::from_set(cur.clone()));
            return;
        }
        for i in start..=n {
            cur.push(i);
            rec(i + 1, p, n, cur, out);
            cur.pop();
        }
    }
    rec(1, p, n, &mut cur, &mut out);
    out.sort();
    out
}

pub fn enum_index_set(par: &Params) -> Vec<IndexTuple> {
    index_set(par.p, par.n)
}

pub fn enum_stratum(par: &Params, k: usize) -> Result<Vec<IndexTuple>> {
    check_k(par, k)?;
    Ok(enum_index_set(par).into_iter().filter(|i| i.weight(par.s) == k).collect())
}

fn check_k(par: &Params, k: usize) -> Result<()> {
    if k > par.r {
        return Err(Error::Range { what: "k", value: k as i64, lo: 0, hi: par.r as i64 });
    }
    Ok(())
}

/// A p×n rational matrix of rank p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GrassPoint {
    m: QMatrix,
}

impl GrassPoint {
    pub fn new(m: QMatrix) -> Result<GrassPoint> {
        if m.rows() == 0 || m.rows() >= m.cols() {
            return Err(Error::Dimension(format!("{}x{} is not a p×n shape with 0<p<n", m.rows(), m.cols())));
        }
        if m.rank() != m.rows() {
            return Err(Error::Rank(format!("rank {} < {}", m.rank(), m.rows())));
        }
        Ok(GrassPoint { m })
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.m
    }

    pub fn p(&self) -> usize {
        self.m.rows()
    }

    pub fn n(&self) -> usize {
        self.m.cols()
    }

    /// Left multiplication by an invertible p×p matrix.
    pub fn row_op(&self, g: &QMatrix) -> Result<GrassPoint> {
        GrassPoint::new(g.mul(&self.m)?)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<GrassPoint> {
        let rows =
            v.get("rows").unwrap_or(v).as_array().ok_or_else(|| Error::Parse("expected an array of rows".into()))?;
        let rows = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Parse("row is not an array".into()))?
                    .iter()
                    .map(|e| match e {
                        serde_json::Value::String(s) => parse_q(s),
                        serde_json::Value::Number(k) => parse_q(&k.to_string()),
                        _ => Err(Error::Parse(format!("bad entry {e}"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        GrassPoint::new(QMatrix::from_rows(rows)?)
    }
}

impl Serialize for GrassPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GrassPoint", 1)?;
        st.serialize_field("rows", &self.m.to_strings())?;
        st.end()
    }
}

/// Canonical projective point: coprime integers, first nonzero entry positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    labels: Vec<IndexTuple>,
    coords: Vec<BigInt>,
}

impl ProjPoint {
    pub fn new(labels: Vec<IndexTuple>, coords: &[Rational]) -> Result<ProjPoint> {
        if labels.len() != coords.len() {
            return Err(Error::Dimension(format!("{} labels, {} coordinates", labels.len(), coords.len())));
        }
        Ok(ProjPoint { labels, coords: primitive_integer_vector(coords)? })
    }

    pub fn labels(&self) -> &[IndexTuple] {
        &self.labels
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn coord(&self, label: &IndexTuple) -> Option<&BigInt> {
        self.labels.iter().position(|l| l == label).map(|i| &self.coords[i])
    }

    pub fn coords_q(&self) -> Vec<Rational> {
        self.coords.iter().map(|c| Rational::from_integer(c.clone())).collect()
    }

    /// Unit vector at `label`.
    pub fn basis(labels: Vec<IndexTuple>, label: &IndexTuple) -> Result<ProjPoint> {
        let coords: Vec<Rational> =
            labels.iter().map(|l| if l == label { Rational::one() } else { Rational::zero() }).collect();
        ProjPoint::new(labels, &coords)
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ProjPoint", 2)?;
        st.serialize_field("labels", &self.labels)?;
        let coords: Vec<String> = self.coords.iter().map(|c| format!("{c}/1")).collect();
        st.serialize_field("coords", &coords)?;
        st.end()
    }
}

/// Minors of `m` on the ascending columns of each label.
pub fn raw_minors(m: &QMatrix, labels: &[IndexTuple]) -> Vec<Rational> {
    labels.iter().map(|l| m.select_cols(&l.columns()).det().expect("square")).collect()
}

pub fn plucker(x: &GrassPoint) -> ProjPoint {
    let labels = index_set(x.p(), x.n());
    let minors = raw_minors(&x.m, &labels);
    ProjPoint::new(labels, &minors).expect("rank p matrix has a nonzero minor")
}

pub fn stratum_projection(v: &ProjPoint, par: &Params, k: usize) -> Result<ProjPoint> {
    check_k(par, k)?;
    let (labels, coords): (Vec<IndexTuple>, Vec<Rational>) =
        v.labels.iter().zip(v.coords_q()).filter(|(l, _)| l.weight(par.s) == k).map(|(l, c)| (l.clone(), c)).unzip();
    ProjPoint::new(labels, &coords).map_err(|e| match e {
        Error::ZeroVector => Error::UndefinedPoint { k },
        e => e,
    })
}

/// Assembles the block matrix of the chart U_l:
/// columns 1..s−p+l carry Z over Y, then (0; I_{p−l}), then (I_l; 0), then X over W.
pub fn chart_matrix_ul(
    par: &Params,
    l: usize,
    z: &QMatrix,
    x: &QMatrix,
    y: &QMatrix,
    w: &QMatrix,
) -> Result<GrassPoint> {
    let (s, p, n) = (par.s, par.p, par.n);
    if l > par.r {
        return Err(Error::Range { what: "l", value: l as i64, lo: 0, hi: par.r as i64 });
    }
    if s + l < p {
        return Err(Error::InvalidParams(format!("chart U_{l} needs s + l >= p")));
    }
    let left = s + l - p;
    let right = n - s - l;
    let shape = |m: &QMatrix, r: usize, c: usize, name: &str| -> Result<()> {
        if (m.rows(), m.cols()) != (r, c) && !(r * c == 0 && m.rows() * m.cols() == 0) {
            return Err(Error::Dimension(format!("{name} is {}x{}, expected {r}x{c}", m.rows(), m.cols())));
        }
        Ok(())
    };
    shape(z, l, left, "Z")?;
    shape(x, l, right, "X")?;
    shape(y, p - l, left, "Y")?;
    shape(w, p - l, right, "W")?;
    let m = QMatrix::from_fn(p, n, |i, j| {
        let top = i < l;
        if j < left {
            if top {
                z[(i, j)].clone()
            } else {
                y[(i - l, j)].clone()
            }
        } else if j < s {
            if !top && j - left == i - l {
                Rational::one()
            } else {
                Rational::zero()
            }
        } else if j < s + l {
            if top && j - s == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        } else if top {
            x[(i, j - s - l)].clone()
        } else {
            w[(i - l, j - s - l)].clone()
        }
    });
    GrassPoint::new(m)
}

/// (g1, g2) ∈ GL_s × GL_{n−s} acting by x ↦ x · diag(g1, g2)ᵀ.
pub fn gl_act(g1: &QMatrix, g2: &QMatrix, x: &GrassPoint) -> Result<GrassPoint> {
    let (p, n) = (x.p(), x.n());
    let s = g1.rows();
    if g1.cols() != s || g2.rows() != n - s || g2.cols() != n - s {
        return Err(Error::Dimension("group element does not match the split".into()));
    }
    if g1.det()?.is_zero() || g2.det()?.is_zero() {
        return Err(Error::InvalidGroupElement);
    }
    let a = x.m.select_cols(&(0..s).collect::<Vec<_>>()).mul(&g1.transpose())?;
    let b = x.m.select_cols(&(s..n).collect::<Vec<_>>()).mul(&g2.transpose())?;
    GrassPoint::new(QMatrix::from_fn(p, n, |i, j| if j < s { a[(i, j)].clone() } else { b[(i, j - s)].clone() }))
}

/// Ranks of the projections of the row space to E1 and E2.
pub fn block_ranks(x: &GrassPoint, s: usize) -> (usize, usize) {
    let n = x.n();
    let r1 = x.m.select_cols(&(0..s).collect::<Vec<_>>()).rank();
    let r2 = x.m.select_cols(&(s..n).collect::<Vec<_>>()).rank();
    (r1, r2)
}

/// Membership in S_k: vanishing of the weight-k coordinates, and the rank description.
pub fn stratum_membership(x: &GrassPoint, par: &Params, k: usize) -> Result<(bool, bool)> {
    let labels = enum_stratum(par, k)?;
    let plucker_test = raw_minors(&x.m, &labels).iter().all(Zero::is_zero);
    let (r1, r2) = block_ranks(x, par.s);
    let rank_test = r2 < k || r1 + k < par.p;
    Ok((plucker_test, rank_test))
}

/// Reconstructs a matrix from a vector over the full index set, if it is a Plücker vector.
pub fn plucker_oracle(v: &ProjPoint) -> Option<GrassPoint> {
    let p = v.labels.first()?.entries().len();
    let n = v.labels.iter().flat_map(|l| l.entries().first().copied()).max()?;
    if p == 0 || p >= n || v.labels != index_set(p, n) {
        return None;
    }
    let pos: HashMap<&IndexTuple, usize> = v.labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let di = v.coords.iter().position(|c| !c.is_zero())?;
    let delta = v.labels[di].columns();
    let vd = Rational::from_integer(v.coords[di].clone());
    let mut m = QMatrix::zeros(p, n);
    for (a, &c) in delta.iter().enumerate() {
        m[(a, c)] = Rational::one();
        for j in (0..n).filter(|j| !delta.contains(j)) {
            let mut cols: Vec<usize> = delta.iter().copied().filter(|&d| d != c).collect();
            cols.push(j);
            cols.sort_unstable();
            let q = cols.iter().position(|&d| d == j).unwrap();
            let label = IndexTuple::from_set(cols.iter().map(|d| d + 1).collect());
            let val = Rational::from_integer(v.coords[pos[&label]].clone()) / &vd;
            m[(a, j)] = if (q + a) % 2 == 0 { val } else { -val };
        }
    }
    let x = GrassPoint::new(m).ok()?;
    (plucker(&x) == *v).then_some(x)
}

pub fn fmt_matrix_json(m: &QMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(fmt_q).collect()).collect()
}
