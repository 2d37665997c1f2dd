//! Mille Crêpes charts: layered rank-one parametrizations of the strata blocks
//! and their extension to the product of projective spaces.

mod jtau;
mod orbit;
mod retraction;
mod special;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

pub use jtau::{
    chart_transition, j_tau, j_tau_inverse, j_tau_symbolic, kausz_total_map, permutation_sign, predicted_unit,
    ChartNormalForm, Factor, FactorForm, MultiProjPoint,
};
pub use orbit::{admissible_signatures, orbit_signature, signature_admissible, OrbitSignature};
pub use retraction::{first_l0_chart_for, retraction_chart};
pub use special::{special_indices, SpecialIndices};

use crate::error::{Error, Result};
use crate::exactpoly::{fmt_q, MultiPoly, PolyMatrix, Rational, Var};
use crate::grassmann::{GrassPoint, Params};

/// τ ∈ 𝕁_l: pivot rows (i_1..i_r) and pivot columns (j_1..j_r), 1-based.
/// Layers 1..r−l live in the lower-right block, layers r−l+1..r in the upper-left block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ChartIndex {
    l: usize,
    rows: Vec<usize>,
    cols: Vec<usize>,
}

fn distinct_within(xs: &[usize], lo: usize, hi: usize) -> bool {
    let mut seen = std::collections::BTreeSet::new();
    xs.iter().all(|&x| x >= lo && x <= hi && seen.insert(x))
}

impl ChartIndex {
    pub fn new(par: &Params, l: usize, rows: Vec<usize>, cols: Vec<usize>) -> Result<ChartIndex> {
        let (s, p, n, r) = (par.s(), par.p(), par.n(), par.r());
        if l > r {
            return Err(Error::Range { what: "l", value: l as i64, lo: 0, hi: r as i64 });
        }
        let m = r - l;
        let ok = rows.len() == r
            && cols.len() == r
            && distinct_within(&rows[..m], l + 1, p)
            && distinct_within(&rows[m..], 1, l)
            && distinct_within(&cols[..m], s + l + 1, n)
            && distinct_within(&cols[m..], 1, s + l - p);
        if !ok {
            return Err(Error::InvalidParameter(format!("({rows:?}, {cols:?}) is not a chart index at l = {l}")));
        }
        Ok(ChartIndex { l, rows, cols })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    fn r(&self) -> usize {
        self.rows.len()
    }

    /// Whether layer k (1-based) sits in the lower-right block.
    fn is_bottom(&self, k: usize) -> bool {
        k <= self.r() - self.l
    }

    /// Pivot variable of layer k: b for the lower block, a for the upper one.
    pub fn pivot_var(&self, k: usize) -> Var {
        let (i, j) = (self.rows[k - 1] as u16, self.cols[k - 1] as u16);
        if self.is_bottom(k) {
            Var::B(i, j)
        } else {
            Var::A(i, j)
        }
    }
}

impl fmt::Display for ChartIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l={} rows={:?} cols={:?}", self.l, self.rows, self.cols)
    }
}

/// Ordered sequences of `len` distinct elements of `pool`.
fn partial_perms(pool: &[usize], len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in pool.iter().enumerate() {
        let rest: Vec<usize> = pool.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &y)| y).collect();
        for mut tail in partial_perms(&rest, len - 1) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

pub fn enum_chart_indices(par: &Params, l: usize) -> Result<Vec<ChartIndex>> {
    let (s, p, n, r) = (par.s(), par.p(), par.n(), par.r());
    if l > r {
        return Err(Error::Range { what: "l", value: l as i64, lo: 0, hi: r as i64 });
    }
    let m = r - l;
    let low_rows = partial_perms(&(l + 1..=p).collect::<Vec<_>>(), m);
    let top_rows = partial_perms(&(1..=l).collect::<Vec<_>>(), l);
    let low_cols = partial_perms(&(s + l + 1..=n).collect::<Vec<_>>(), m);
    let top_cols = partial_perms(&(1..=s + l - p).collect::<Vec<_>>(), l);
    let mut out = Vec::new();
    for lr in &low_rows {
        for tr in &top_rows {
            for lc in &low_cols {
                for tc in &top_cols {
                    let rows = [lr.as_slice(), tr.as_slice()].concat();
                    let cols = [lc.as_slice(), tc.as_slice()].concat();
                    out.push(ChartIndex { l, rows, cols });
                }
            }
        }
    }
    Ok(out)
}

pub fn all_chart_indices(par: &Params) -> Vec<ChartIndex> {
    (0..=par.r()).flat_map(|l| enum_chart_indices(par, l).expect("l in range")).collect()
}

/// The chart's coordinate variables in canonical order.
pub fn chart_variables(par: &Params, tau: &ChartIndex) -> Vec<Var> {
    let (s, p, n) = (par.s(), par.p(), par.n());
    let l = tau.l;
    let mut vars = Vec::new();
    for k in 1..=tau.r() {
        let (row_block, col_block) = layer_blocks(par, tau, k);
        let (ik, jk) = (tau.rows[k - 1], tau.cols[k - 1]);
        let (prev_rows, prev_cols) = earlier_pivots(tau, k);
        vars.push(tau.pivot_var(k));
        for &j in col_block.iter().filter(|&&j| j != jk && !prev_cols.contains(&j)) {
            vars.push(Var::Xi(k as u16, ik as u16, j as u16));
        }
        for &i in row_block.iter().filter(|&&i| i != ik && !prev_rows.contains(&i)) {
            vars.push(Var::Xi(k as u16, i as u16, jk as u16));
        }
    }
    for i in 1..=l {
        for j in s + l + 1..=n {
            vars.push(Var::X(i as u16, j as u16));
        }
    }
    for i in l + 1..=p {
        for j in 1..=s + l - p {
            vars.push(Var::Y(i as u16, j as u16));
        }
    }
    vars.sort();
    vars
}

fn layer_blocks(par: &Params, tau: &ChartIndex, k: usize) -> (Vec<usize>, Vec<usize>) {
    let (s, p, n, l) = (par.s(), par.p(), par.n(), tau.l);
    if tau.is_bottom(k) {
        ((l + 1..=p).collect(), (s + l + 1..=n).collect())
    } else {
        ((1..=l).collect(), (1..=s + l - p).collect())
    }
}

/// Pivot rows and columns of the earlier layers in the same block as layer k.
fn earlier_pivots(tau: &ChartIndex, k: usize) -> (Vec<usize>, Vec<usize>) {
    let start = if tau.is_bottom(k) { 1 } else { tau.r() - tau.l + 1 };
    ((start..k).map(|t| tau.rows[t - 1]).collect(), (start..k).map(|t| tau.cols[t - 1]).collect())
}

/// Γ^τ as a p×n matrix of polynomials in the chart variables.
pub fn gamma_tau_symbolic(par: &Params, tau: &ChartIndex) -> PolyMatrix {
    let (s, p, n) = (par.s(), par.p(), par.n());
    let l = tau.l;
    let r = tau.r();
    let mut g: PolyMatrix = vec![vec![MultiPoly::zero(); n]; p];
    // identity bands
    for i in l + 1..=p {
        g[i - 1][s - p + i - 1] = MultiPoly::one();
    }
    for i in 1..=l {
        g[i - 1][s + i - 1] = MultiPoly::one();
    }
    for i in 1..=l {
        for j in s + l + 1..=n {
            g[i - 1][j - 1] = MultiPoly::var(Var::X(i as u16, j as u16));
        }
    }
    for i in l + 1..=p {
        for j in 1..=s + l - p {
            g[i - 1][j - 1] = MultiPoly::var(Var::Y(i as u16, j as u16));
        }
    }
    let mut coeff = MultiPoly::one();
    for k in 1..=r {
        if k == r - l + 1 {
            coeff = MultiPoly::one();
        }
        coeff = &coeff * &MultiPoly::var(tau.pivot_var(k));
        let (row_block, col_block) = layer_blocks(par, tau, k);
        let (ik, jk) = (tau.rows[k - 1], tau.cols[k - 1]);
        let (prev_rows, prev_cols) = earlier_pivots(tau, k);
        let v: Vec<(usize, MultiPoly)> = row_block
            .iter()
            .filter(|i| !prev_rows.contains(i))
            .map(|&i| {
                let e = if i == ik { MultiPoly::one() } else { MultiPoly::var(Var::Xi(k as u16, i as u16, jk as u16)) };
                (i, e)
            })
            .collect();
        let w: Vec<(usize, MultiPoly)> = col_block
            .iter()
            .filter(|j| !prev_cols.contains(j))
            .map(|&j| {
                let e = if j == jk { MultiPoly::one() } else { MultiPoly::var(Var::Xi(k as u16, ik as u16, j as u16)) };
                (j, e)
            })
            .collect();
        for (i, vi) in &v {
            let cv = &coeff * vi;
            for (j, wj) in &w {
                let cell = &mut g[i - 1][j - 1];
                *cell = &*cell + &(&cv * wj);
            }
        }
    }
    g
}

/// A point of a chart: values for every chart variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MCCoords {
    par: Params,
    tau: ChartIndex,
    values: BTreeMap<Var, Rational>,
}

impl MCCoords {
    pub fn new(par: &Params, tau: &ChartIndex, values: BTreeMap<Var, Rational>) -> Result<MCCoords> {
        let vars = chart_variables(par, tau);
        if values.len() != vars.len() || vars.iter().any(|v| !values.contains_key(v)) {
            return Err(Error::Dimension(format!("coordinates do not match the variables of chart {tau}")));
        }
        Ok(MCCoords { par: *par, tau: tau.clone(), values })
    }

    /// Builds coordinates from a value function over the chart variables.
    pub fn from_fn(par: &Params, tau: &ChartIndex, mut f: impl FnMut(Var) -> Rational) -> MCCoords {
        let values = chart_variables(par, tau).into_iter().map(|v| (v, f(v))).collect();
        MCCoords { par: *par, tau: tau.clone(), values }
    }

    pub fn params(&self) -> &Params {
        &self.par
    }

    pub fn tau(&self) -> &ChartIndex {
        &self.tau
    }

    pub fn values(&self) -> &BTreeMap<Var, Rational> {
        &self.values
    }

    pub fn get(&self, v: Var) -> Option<&Rational> {
        self.values.get(&v)
    }

    /// The value of the layer-k pivot.
    pub fn pivot(&self, k: usize) -> &Rational {
        &self.values[&self.tau.pivot_var(k)]
    }

    /// Random point with every coordinate nonzero.
    pub fn random(par: &Params, tau: &ChartIndex, rng: &mut crate::sampling::Sampler) -> MCCoords {
        MCCoords::from_fn(par, tau, |_| rng.nonzero())
    }

    pub fn with(&self, v: Var, x: Rational) -> Result<MCCoords> {
        if !self.values.contains_key(&v) {
            return Err(Error::InvalidParameter(format!("{v} is not a coordinate of chart {}", self.tau)));
        }
        let mut out = self.clone();
        out.values.insert(v, x);
        Ok(out)
    }
}

impl Serialize for MCCoords {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MCCoords", 3)?;
        st.serialize_field("params", &self.par)?;
        st.serialize_field("chart", &self.tau)?;
        let coords: BTreeMap<String, String> = self.values.iter().map(|(v, x)| (v.to_string(), fmt_q(x))).collect();
        st.serialize_field("coords", &coords)?;
        st.end()
    }
}

pub fn gamma_tau(c: &MCCoords) -> GrassPoint {
    let nf = j_tau_symbolic(&c.par, &c.tau).expect("chart normal form");
    let m =
        crate::exactpoly::eval_matrix(&nf.gamma, |v| c.values.get(&v).cloned()).expect("all chart variables assigned");
    GrassPoint::new(m).expect("identity bands force full rank")
}

/// Values of a chart point with every coordinate zero.
pub fn chart_origin(par: &Params, tau: &ChartIndex) -> MCCoords {
    MCCoords::from_fn(par, tau, |_| Rational::zero())
}
