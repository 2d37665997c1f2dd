//! The Kausz side: determinantal centers of the iterated blow-up of P^{p(n−p)},
//! its affine charts R(α,β,l), the Landsberg–Manivel map (X | x00·I), and the
//! comparison with the Kausz-type map on G(p,n) for s = n − p.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactpoly::{
    fmt_q, poly_minor, primitive_integer_vector, Monomial, MultiPoly, PolyMatrix, QMatrix, Rational, Var,
};
use crate::grassmann::{index_set, plucker, stratum_projection, GrassPoint, IndexTuple, Params, ProjPoint};
use crate::millecrepes::{kausz_total_map, MultiProjPoint};
use crate::sampling::Sampler;

/// All `size`-subsets of 0..n, lexicographic.
fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, size, &mut Vec::new(), &mut out);
    out
}

fn check_pn(p: usize, n: usize) -> Result<()> {
    if p == 0 || 2 * p > n {
        return Err(Error::InvalidParams(format!("need 0 < p and 2p <= n, got p={p}, n={n}")));
    }
    Ok(())
}

/// Params (n−p, p, n) of the matching Kausz-type space.
pub fn kausz_params(p: usize, n: usize) -> Result<Params> {
    check_pn(p, n)?;
    Params::new(n - p, p, n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum IdealKind {
    Y,
    Z,
}

/// The symbolic p×(n−p) matrix (x_{ij}), entries `Var::X(i,j)`; x00 is `Var::X(0,0)`.
pub fn symbolic_x(p: usize, n: usize) -> PolyMatrix {
    (1..=p).map(|i| (1..=n - p).map(|j| MultiPoly::var(Var::X(i as u16, j as u16))).collect()).collect()
}

fn all_minors(m: &PolyMatrix, rows: usize, cols: usize, size: usize) -> Result<Vec<MultiPoly>> {
    let mut out = Vec::new();
    for r in subsets(rows, size) {
        for c in subsets(cols, size) {
            out.push(poly_minor(m, &r, &c)?);
        }
    }
    Ok(out)
}

/// Generators of I_l (the (l+1)-minors) or of J_l = (x00) + I_{p−l}.
pub fn determinantal_ideal_gens(p: usize, n: usize, l: usize, which: IdealKind) -> Result<Vec<MultiPoly>> {
    check_pn(p, n)?;
    if l + 1 > p {
        return Err(Error::Range { what: "l", value: l as i64, lo: 0, hi: p as i64 - 1 });
    }
    let x = symbolic_x(p, n);
    match which {
        IdealKind::Y => all_minors(&x, p, n - p, l + 1),
        IdealKind::Z => {
            let mut gens = vec![MultiPoly::var(Var::X(0, 0))];
            if l > 0 {
                gens.extend(all_minors(&x, p, n - p, p - l + 1)?);
            }
            Ok(gens)
        }
    }
}

/// A point [x00 : X] of P^{p(n−p)}, stored as a primitive integer vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomPoint {
    x00: BigInt,
    x: Vec<Vec<BigInt>>,
}

impl HomPoint {
    pub fn new(x00: &Rational, x: &QMatrix) -> Result<HomPoint> {
        let mut flat = vec![x00.clone()];
        for i in 0..x.rows() {
            flat.extend(x.row(i).iter().cloned());
        }
        let ints = primitive_integer_vector(&flat)?;
        let cols = x.cols();
        Ok(HomPoint { x00: ints[0].clone(), x: ints[1..].chunks(cols.max(1)).map(<[BigInt]>::to_vec).collect() })
    }

    pub fn x00(&self) -> Rational {
        Rational::from_integer(self.x00.clone())
    }

    pub fn x(&self) -> QMatrix {
        let rows = self.x.iter().map(|r| r.iter().map(|e| Rational::from_integer(e.clone())).collect()).collect();
        QMatrix::from_rows(rows).expect("rectangular")
    }
}

impl Serialize for HomPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("HomPoint", 2)?;
        st.serialize_field("x00", &format!("{}/1", self.x00))?;
        let x: Vec<Vec<String>> = self.x.iter().map(|r| r.iter().map(|e| format!("{e}/1")).collect()).collect();
        st.serialize_field("x", &x)?;
        st.end()
    }
}

/// [x00 : X] ↦ row space of (X | x00·I).
pub fn lm_map(h: &HomPoint) -> Result<GrassPoint> {
    let x = h.x();
    let (p, m) = (x.rows(), x.cols());
    let x00 = h.x00();
    let mat = QMatrix::from_fn(p, m + p, |i, j| {
        if j < m {
            x[(i, j)].clone()
        } else if j - m == i {
            x00.clone()
        } else {
            Rational::zero()
        }
    });
    GrassPoint::new(mat)
}

/// (α, β, l): α ∈ S_p, β ∈ S_{n−p} (1-based images), 0 ≤ l ≤ p.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct KauszChart {
    p: usize,
    n: usize,
    alpha: Vec<usize>,
    beta: Vec<usize>,
    l: usize,
}

fn is_perm(v: &[usize]) -> bool {
    let mut seen = vec![false; v.len()];
    v.iter().all(|&a| a >= 1 && a <= v.len() && !std::mem::replace(&mut seen[a - 1], true))
}

impl KauszChart {
    pub fn new(p: usize, n: usize, alpha: Vec<usize>, beta: Vec<usize>, l: usize) -> Result<KauszChart> {
        check_pn(p, n)?;
        if alpha.len() != p || !is_perm(&alpha) {
            return Err(Error::InvalidParameter(format!("alpha {alpha:?} is not a permutation of 1..{p}")));
        }
        if beta.len() != n - p || !is_perm(&beta) {
            return Err(Error::InvalidParameter(format!("beta {beta:?} is not a permutation of 1..{}", n - p)));
        }
        if l > p {
            return Err(Error::Range { what: "l", value: l as i64, lo: 0, hi: p as i64 });
        }
        Ok(KauszChart { p, n, alpha, beta, l })
    }

    pub fn identity(p: usize, n: usize, l: usize) -> Result<KauszChart> {
        KauszChart::new(p, n, (1..=p).collect(), (1..=n - p).collect(), l)
    }

    pub fn p(&self) -> usize {
        self.p
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }
    pub fn beta(&self) -> &[usize] {
        &self.beta
    }
    pub fn l(&self) -> usize {
        self.l
    }

    /// ι_l read as a sequence: the order in which t_0..t_p enter the ratios.
    pub fn iota(&self) -> Vec<usize> {
        (1..=self.l).chain(std::iter::once(0)).chain(self.l + 1..=self.p).collect()
    }

    pub fn random(p: usize, n: usize, rng: &mut Sampler) -> Result<KauszChart> {
        let mut alpha: Vec<usize> = (1..=p).collect();
        let mut beta: Vec<usize> = (1..=n - p).collect();
        shuffle(&mut alpha, rng);
        shuffle(&mut beta, rng);
        let l = rng.index(p + 1);
        KauszChart::new(p, n, alpha, beta, l)
    }
}

fn shuffle(v: &mut [usize], rng: &mut Sampler) {
    for i in (1..v.len()).rev() {
        v.swap(i, rng.index(i + 1));
    }
}

impl std::fmt::Display for KauszChart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "alpha={:?} beta={:?} l={}", self.alpha, self.beta, self.l)
    }
}

/// The chart variables: ratios `t[i]` (1 ≤ i ≤ p), `y[j,i]` (i < j ≤ p), `z[i,j]` (i ≤ p, i < j ≤ n−p).
pub fn kausz_chart_vars(p: usize, n: usize) -> Vec<Var> {
    let mut v: Vec<Var> = (1..=p).map(|i| Var::Ratio(i as u16)).collect();
    for i in 1..=p {
        for j in i + 1..=p {
            v.push(Var::Y(j as u16, i as u16));
        }
    }
    for i in 1..=p {
        for j in i + 1..=n - p {
            v.push(Var::Z(i as u16, j as u16));
        }
    }
    v.sort();
    v
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KauszCoords {
    chart: KauszChart,
    values: BTreeMap<Var, Rational>,
}

impl KauszCoords {
    pub fn new(chart: &KauszChart, values: BTreeMap<Var, Rational>) -> Result<KauszCoords> {
        let vars = kausz_chart_vars(chart.p, chart.n);
        if !values.keys().copied().eq(vars.iter().copied()) {
            return Err(Error::Dimension("coordinates do not match the chart variables".into()));
        }
        Ok(KauszCoords { chart: chart.clone(), values })
    }

    pub fn random(chart: &KauszChart, rng: &mut Sampler) -> KauszCoords {
        let values = kausz_chart_vars(chart.p, chart.n).into_iter().map(|v| (v, rng.nonzero())).collect();
        KauszCoords { chart: chart.clone(), values }
    }

    pub fn chart(&self) -> &KauszChart {
        &self.chart
    }

    pub fn values(&self) -> &BTreeMap<Var, Rational> {
        &self.values
    }

    pub fn get(&self, v: Var) -> Option<&Rational> {
        self.values.get(&v)
    }

    pub fn with(&self, v: Var, x: Rational) -> Result<KauszCoords> {
        let mut values = self.values.clone();
        match values.get_mut(&v) {
            Some(slot) => *slot = x,
            None => return Err(Error::MissingAssignment(v)),
        }
        Ok(KauszCoords { chart: self.chart.clone(), values })
    }

    fn ratio(&self, i: usize) -> &Rational {
        &self.values[&Var::Ratio(i as u16)]
    }
    fn y(&self, j: usize, i: usize) -> &Rational {
        &self.values[&Var::Y(j as u16, i as u16)]
    }
    fn z(&self, i: usize, j: usize) -> &Rational {
        &self.values[&Var::Z(i as u16, j as u16)]
    }
}

impl Serialize for KauszCoords {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("KauszCoords", 2)?;
        st.serialize_field("chart", &self.chart)?;
        let coords: BTreeMap<String, String> = self.values.iter().map(|(v, x)| (v.to_string(), fmt_q(x))).collect();
        st.serialize_field("coords", &coords)?;
        st.end()
    }
}

/// Output of the elimination recursion, in the relabelled frame x^{(0)}_{ij} = x_{α(i)β(j)}/x00.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KauszTable {
    /// `stages[k]` is x^{(k)} on rows and columns k+1.. (0-based corner at (k, k)).
    pub stages: Vec<QMatrix>,
    /// `y[(j, i)]`, 1-based.
    pub y: BTreeMap<(usize, usize), Rational>,
    /// `z[(i, j)]`, 1-based.
    pub z: BTreeMap<(usize, usize), Rational>,
    /// t_0..t_p.
    pub t: Vec<Rational>,
}

pub fn kausz_recursion(alpha: &[usize], beta: &[usize], x00: &Rational, x: &QMatrix) -> Result<KauszTable> {
    let (p, m) = (x.rows(), x.cols());
    if alpha.len() != p || beta.len() != m || !is_perm(alpha) || !is_perm(beta) || p > m {
        return Err(Error::Dimension("permutations do not match the matrix".into()));
    }
    if x00.is_zero() {
        return Err(Error::Pivot { k: 0 });
    }
    let mut cur = QMatrix::from_fn(p, m, |i, j| &x[(alpha[i] - 1, beta[j] - 1)] / x00);
    let mut stages = vec![cur.clone()];
    let (mut y, mut z) = (BTreeMap::new(), BTreeMap::new());
    let mut t = vec![x00.clone()];
    for k in 1..=p {
        // cur is x^{(k−1)} padded to p×m; only the corner from (k−1, k−1) is meaningful.
        let d = cur[(k - 1, k - 1)].clone();
        if d.is_zero() {
            return Err(Error::Pivot { k });
        }
        t.push(&t[k - 1] * &d);
        for i in k + 1..=p {
            y.insert((i, k), &cur[(i - 1, k - 1)] / &d);
        }
        for j in k + 1..=m {
            z.insert((k, j), &cur[(k - 1, j - 1)] / &d);
        }
        let next = QMatrix::from_fn(p, m, |i, j| {
            if i < k || j < k {
                Rational::zero()
            } else {
                &cur[(i, j)] / &d - &y[&(i + 1, k)] * &z[&(k, j + 1)]
            }
        });
        cur = next;
        stages.push(cur.clone());
    }
    Ok(KauszTable { stages, y, z, t })
}

/// Reads chart coordinates off a recursion table.
pub fn table_to_coords(chart: &KauszChart, table: &KauszTable) -> Result<KauszCoords> {
    let seq = chart.iota();
    let mut values = BTreeMap::new();
    for i in 1..=chart.p {
        values.insert(Var::Ratio(i as u16), &table.t[seq[i]] / &table.t[seq[i - 1]]);
    }
    for (&(j, i), v) in &table.y {
        values.insert(Var::Y(j as u16, i as u16), v.clone());
    }
    for (&(i, j), v) in &table.z {
        values.insert(Var::Z(i as u16, j as u16), v.clone());
    }
    KauszCoords::new(chart, values)
}

/// Layer scales relative to t_{ι_l(1)}: x00 = ∏_{i≤l} u_i, c_k = ∏_{i<k} u_i (k ≤ l), ∏_{i≤k} u_i (k > l).
fn scale_ranges(l: usize, k: usize) -> std::ops::RangeInclusive<usize> {
    if k == 0 {
        1..=l
    } else if k <= l {
        1..=k - 1
    } else {
        1..=k
    }
}

/// The blow-down KA on one chart, numerically.
pub fn ka_blowdown(c: &KauszCoords) -> Result<HomPoint> {
    let ch = &c.chart;
    let (p, m, l) = (ch.p, ch.n - ch.p, ch.l);
    let scale = |k: usize| scale_ranges(l, k).fold(Rational::one(), |acc, i| acc * c.ratio(i));
    let lower = |i: usize, k: usize| -> Rational {
        match i.cmp(&k) {
            std::cmp::Ordering::Equal => Rational::one(),
            std::cmp::Ordering::Greater => c.y(i, k).clone(),
            std::cmp::Ordering::Less => Rational::zero(),
        }
    };
    let upper = |k: usize, j: usize| -> Rational {
        match j.cmp(&k) {
            std::cmp::Ordering::Equal => Rational::one(),
            std::cmp::Ordering::Greater => c.z(k, j).clone(),
            std::cmp::Ordering::Less => Rational::zero(),
        }
    };
    let scales: Vec<Rational> = (0..=p).map(scale).collect();
    let mut x = QMatrix::zeros(p, m);
    for i in 1..=p {
        for j in 1..=m {
            let v = (1..=p.min(i).min(j)).fold(Rational::zero(), |acc, k| acc + &scales[k] * lower(i, k) * upper(k, j));
            x[(ch.alpha[i - 1] - 1, ch.beta[j - 1] - 1)] = v;
        }
    }
    HomPoint::new(&scales[0], &x)
}

/// The blow-down KA on one chart, as polynomials in the chart variables: (x00, X).
pub fn ka_blowdown_symbolic(ch: &KauszChart) -> (MultiPoly, PolyMatrix) {
    let (p, m, l) = (ch.p, ch.n - ch.p, ch.l);
    let scale =
        |k: usize| MultiPoly::term(1, Monomial::from_powers(scale_ranges(l, k).map(|i| (Var::Ratio(i as u16), 1))));
    let mut x = vec![vec![MultiPoly::zero(); m]; p];
    for i in 1..=p {
        for j in 1..=m {
            let mut v = MultiPoly::zero();
            for k in 1..=i.min(j) {
                let mut term = scale(k);
                if i > k {
                    term = term * MultiPoly::var(Var::Y(i as u16, k as u16));
                }
                if j > k {
                    term = term * MultiPoly::var(Var::Z(k as u16, j as u16));
                }
                v = v + term;
            }
            x[ch.alpha[i - 1] - 1][ch.beta[j - 1] - 1] = v;
        }
    }
    (scale(0), x)
}

/// Symbolic K∘LM∘KA on one chart, each factor divided by its monomial and integer content.
#[derive(Clone, Debug)]
pub struct KauszNormalForm {
    pub chart: KauszChart,
    pub labels: Vec<IndexTuple>,
    pub main: Vec<MultiPoly>,
    pub strata: Vec<(Vec<IndexTuple>, Vec<MultiPoly>)>,
}

fn strip_content(polys: &[MultiPoly]) -> Vec<MultiPoly> {
    let nonzero: Vec<&MultiPoly> = polys.iter().filter(|q| !q.is_zero()).collect();
    let Some(first) = nonzero.first() else { return polys.to_vec() };
    let mono = nonzero.iter().fold(first.monomial_content(), |g, q| g.gcd(&q.monomial_content()));
    let int = nonzero.iter().fold(BigInt::zero(), |g, q| num_integer::Integer::gcd(&g, &q.integer_content()));
    polys
        .iter()
        .map(|q| {
            let d = q.div_monomial(&mono).expect("common monomial divides");
            MultiPoly::from_terms(d.terms().map(|(m, c)| (m.clone(), c / &int)))
        })
        .collect()
}

fn compute_kausz_nf(ch: &KauszChart) -> Result<KauszNormalForm> {
    let par = kausz_params(ch.p, ch.n)?;
    let (x00, x) = ka_blowdown_symbolic(ch);
    let (p, m) = (ch.p, ch.n - ch.p);
    let lm: PolyMatrix = (0..p)
        .map(|i| {
            (0..m + p)
                .map(|j| {
                    if j < m {
                        x[i][j].clone()
                    } else if j - m == i {
                        x00.clone()
                    } else {
                        MultiPoly::zero()
                    }
                })
                .collect()
        })
        .collect();
    let labels = index_set(p, ch.n);
    let rows: Vec<usize> = (0..p).collect();
    let minors = labels.iter().map(|l| poly_minor(&lm, &rows, &l.columns())).collect::<Result<Vec<_>>>()?;
    let strata = (0..=par.r())
        .map(|k| {
            let (ls, ps): (Vec<IndexTuple>, Vec<MultiPoly>) = labels
                .iter()
                .zip(&minors)
                .filter(|(l, _)| l.weight(par.s()) == k)
                .map(|(l, q)| (l.clone(), q.clone()))
                .unzip();
            (ls, strip_content(&ps))
        })
        .collect();
    Ok(KauszNormalForm { chart: ch.clone(), main: strip_content(&minors), labels, strata })
}

type NfCache = HashMap<KauszChart, Arc<KauszNormalForm>>;

fn nf_cache() -> &'static RwLock<NfCache> {
    static CACHE: OnceLock<RwLock<NfCache>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

pub fn kausz_normal_form(ch: &KauszChart) -> Result<Arc<KauszNormalForm>> {
    if let Some(nf) = nf_cache().read().unwrap().get(ch) {
        return Ok(nf.clone());
    }
    let nf = Arc::new(compute_kausz_nf(ch)?);
    Ok(nf_cache().write().unwrap().entry(ch.clone()).or_insert(nf).clone())
}

/// K∘LM∘KA(c) through the symbolic normal form.
pub fn kausz_composite(c: &KauszCoords) -> Result<MultiProjPoint> {
    let nf = kausz_normal_form(&c.chart)?;
    let eval = |labels: &[IndexTuple], polys: &[MultiPoly], k: Option<usize>| -> Result<ProjPoint> {
        let vals = polys.iter().map(|q| q.eval_with(|v| c.get(v).cloned())).collect::<Result<Vec<_>>>()?;
        ProjPoint::new(labels.to_vec(), &vals).map_err(|e| match (e, k) {
            (Error::ZeroVector, Some(k)) => Error::UndefinedPoint { k },
            (e, _) => e,
        })
    };
    let main = eval(&nf.labels, &nf.main, None)?;
    let strata = nf.strata.iter().enumerate().map(|(k, (ls, ps))| eval(ls, ps, Some(k))).collect::<Result<Vec<_>>>()?;
    Ok(MultiProjPoint { main, strata })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagramStatus {
    Pass,
    Mismatch,
    Undefined,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagramRecord {
    pub params: Params,
    pub chart: KauszChart,
    pub sample: KauszCoords,
    pub status: DiagramStatus,
    pub mismatch_factor: Option<String>,
}

/// Compares K(LM(KA(c))) computed numerically with the symbolic composite, per sample.
pub fn diagram_check(par: &Params, samples: &[KauszCoords]) -> Result<Vec<DiagramRecord>> {
    if par.s() + par.p() != par.n() {
        return Err(Error::InvalidParams(format!("diagram needs s = n - p, got {par}")));
    }
    samples
        .iter()
        .map(|c| {
            if (c.chart.p, c.chart.n) != (par.p(), par.n()) {
                return Err(Error::Dimension(format!("sample chart {} does not match {par}", c.chart)));
            }
            let record = |status, mismatch_factor| DiagramRecord {
                params: *par,
                chart: c.chart.clone(),
                sample: c.clone(),
                status,
                mismatch_factor,
            };
            let numeric = ka_blowdown(c).and_then(|h| lm_map(&h)).and_then(|g| kausz_total_map(par, &g));
            let symbolic = kausz_composite(c);
            Ok(match (numeric, symbolic) {
                (Ok(a), Ok(b)) if a == b => record(DiagramStatus::Pass, None),
                (Ok(a), Ok(b)) => {
                    let which = if a.main != b.main {
                        "main".to_string()
                    } else {
                        let k = a.strata.iter().zip(&b.strata).position(|(u, v)| u != v).unwrap_or(0);
                        format!("stratum {k}")
                    };
                    record(DiagramStatus::Mismatch, Some(which))
                }
                (Err(e), _) | (_, Err(e)) => record(DiagramStatus::Undefined, Some(e.to_string())),
            })
        })
        .collect()
}

/// η(u, w): with w = (C | D) in G(p, s+p) and u a p×(n−s) matrix, returns (C | D·u).
pub fn fibration_eta(par: &Params, u: &GrassPoint, w: &GrassPoint) -> Result<GrassPoint> {
    let (s, p, n) = (par.s(), par.p(), par.n());
    if p >= n - s {
        return Err(Error::InvalidParams(format!("fibration over G(p, n-s) needs p < n - s, got {par}")));
    }
    if (u.p(), u.n()) != (p, n - s) || (w.p(), w.n()) != (p, s + p) {
        return Err(Error::Dimension(format!(
            "u is {}x{}, w is {}x{}; expected {p}x{} and {p}x{}",
            u.p(),
            u.n(),
            w.p(),
            w.n(),
            n - s,
            s + p
        )));
    }
    let wm = w.matrix();
    let d = wm.select_cols(&(s..s + p).collect::<Vec<_>>());
    let b = d.mul(u.matrix())?;
    GrassPoint::new(QMatrix::from_fn(p, n, |i, j| if j < s { wm[(i, j)].clone() } else { b[(i, j - s)].clone() }))
}

/// The weight-p factor of η(u, w), relabelled to G(p, n−s) by subtracting s.
pub fn eta_top_stratum(par: &Params, x: &GrassPoint) -> Result<ProjPoint> {
    let top = stratum_projection(&plucker(x), par, par.p())?;
    let labels = top
        .labels()
        .iter()
        .map(|l| IndexTuple::new(l.entries().iter().map(|e| e - par.s()).collect(), par.n() - par.s()))
        .collect::<Result<Vec<_>>>()?;
    ProjPoint::new(labels, &top.coords_q())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{q, qi};

    #[test]
    fn chart_coordinate_count_is_p_times_n_minus_p() {
        for (p, n) in [(1, 2), (2, 4), (2, 5), (3, 6), (3, 7), (4, 9)] {
            assert_eq!(kausz_chart_vars(p, n).len(), p * (n - p), "(p,n)=({p},{n})");
        }
    }

    #[test]
    fn iota_sequences() {
        assert_eq!(KauszChart::identity(3, 6, 0).unwrap().iota(), [0, 1, 2, 3]);
        assert_eq!(KauszChart::identity(3, 6, 2).unwrap().iota(), [1, 2, 0, 3]);
        assert_eq!(KauszChart::identity(3, 6, 3).unwrap().iota(), [1, 2, 3, 0]);
        assert!(KauszChart::identity(3, 6, 4).is_err());
        assert!(KauszChart::new(2, 4, vec![1, 1], vec![1, 2], 0).is_err());
    }

    #[test]
    fn ideal_generators() {
        let y0 = determinantal_ideal_gens(2, 4, 0, IdealKind::Y).unwrap();
        let entries: Vec<String> = y0.iter().map(|g| g.to_string()).collect();
        assert_eq!(entries, ["x[1,1]", "x[1,2]", "x[2,1]", "x[2,2]"]);
        let y1 = determinantal_ideal_gens(2, 4, 1, IdealKind::Y).unwrap();
        assert_eq!(y1.len(), 1);
        assert_eq!(y1[0], "x[1,1]*x[2,2] - x[1,2]*x[2,1]".parse().unwrap());
        assert_eq!(determinantal_ideal_gens(2, 5, 1, IdealKind::Y).unwrap().len(), 3);
        assert_eq!(determinantal_ideal_gens(3, 6, 0, IdealKind::Z).unwrap(), vec![MultiPoly::var(Var::X(0, 0))]);
        // J_1 for p = 3: x00 and the single 3-minor of a 3×3 matrix.
        assert_eq!(determinantal_ideal_gens(3, 6, 1, IdealKind::Z).unwrap().len(), 2);
        assert_eq!(determinantal_ideal_gens(3, 6, 2, IdealKind::Z).unwrap().len(), 10);
        assert!(determinantal_ideal_gens(2, 4, 2, IdealKind::Y).is_err());
    }

    #[test]
    fn recursion_small_example() {
        let x = QMatrix::from_ints(&[&[1, 2], &[3, 7]]);
        let tab = kausz_recursion(&[1, 2], &[1, 2], &qi(1), &x).unwrap();
        assert_eq!(tab.stages[1][(1, 1)], qi(1));
        assert_eq!(tab.y[&(2, 1)], qi(3));
        assert_eq!(tab.z[&(1, 2)], qi(2));
        assert_eq!(tab.t, [qi(1), qi(1), qi(1)]);
        let tab = kausz_recursion(&[1, 2], &[1, 2], &qi(5), &x).unwrap();
        assert_eq!(&tab.t[1] / &tab.t[0], q(1, 5));
        let x0 = QMatrix::from_ints(&[&[0, 2], &[3, 7]]);
        assert_eq!(kausz_recursion(&[1, 2], &[1, 2], &qi(1), &x0), Err(Error::Pivot { k: 1 }));
        assert!(kausz_recursion(&[2, 1], &[1, 2], &qi(1), &x0).is_ok());
    }

    #[test]
    fn lm_map_cases() {
        let h = HomPoint::new(&qi(1), &QMatrix::zeros(2, 2)).unwrap();
        assert_eq!(lm_map(&h).unwrap().matrix(), &QMatrix::from_ints(&[&[0, 0, 1, 0], &[0, 0, 0, 1]]));
        let h = HomPoint::new(&qi(0), &QMatrix::from_ints(&[&[1, 2], &[3, 4]])).unwrap();
        let g = lm_map(&h).unwrap();
        assert_eq!(crate::grassmann::block_ranks(&g, 2), (2, 0));
        let h = HomPoint::new(&qi(0), &QMatrix::from_ints(&[&[1, 2], &[2, 4]])).unwrap();
        assert!(matches!(lm_map(&h), Err(Error::Rank(_))));
    }

    #[test]
    fn blowdown_round_trip_on_every_chart() {
        let mut rng = Sampler::new(5, 0);
        for (p, n) in [(1, 2), (2, 4), (2, 5), (3, 6)] {
            for _ in 0..20 {
                let ch = KauszChart::random(p, n, &mut rng).unwrap();
                let c = KauszCoords::random(&ch, &mut rng);
                let h = ka_blowdown(&c).unwrap();
                let tab = kausz_recursion(&ch.alpha, &ch.beta, &h.x00(), &h.x()).unwrap();
                assert_eq!(table_to_coords(&ch, &tab).unwrap(), c);
            }
        }
    }

    #[test]
    fn symbolic_blowdown_matches_numeric() {
        let mut rng = Sampler::new(6, 0);
        let ch = KauszChart::new(3, 6, vec![2, 3, 1], vec![3, 1, 2], 1).unwrap();
        let c = KauszCoords::random(&ch, &mut rng);
        let (x00, x) = ka_blowdown_symbolic(&ch);
        let val = |v: Var| c.get(v).cloned();
        let xq = crate::exactpoly::eval_matrix(&x, val).unwrap();
        assert_eq!(HomPoint::new(&x00.eval_with(val).unwrap(), &xq).unwrap(), ka_blowdown(&c).unwrap());
    }

    #[test]
    fn diagram_small_cases() {
        let mut rng = Sampler::new(7, 1);
        for (p, n) in [(1, 2), (2, 4)] {
            let par = kausz_params(p, n).unwrap();
            let samples: Vec<KauszCoords> =
                (0..20).map(|_| KauszCoords::random(&KauszChart::random(p, n, &mut rng).unwrap(), &mut rng)).collect();
            let report = diagram_check(&par, &samples).unwrap();
            assert!(report.iter().all(|r| r.status == DiagramStatus::Pass), "{report:?}");
        }
    }

    #[test]
    fn composite_extends_over_the_boundary() {
        // Zero ratios and elimination variables put the point on the exceptional divisors.
        let mut rng = Sampler::new(8, 0);
        for l in 0..=2 {
            let ch = KauszChart::identity(2, 4, l).unwrap();
            let c = KauszCoords::random(&ch, &mut rng);
            for v in kausz_chart_vars(2, 4) {
                let b = c.with(v, qi(0)).unwrap();
                assert!(kausz_composite(&b).is_ok(), "chart {ch}, {v} = 0");
            }
            let all_zero = kausz_chart_vars(2, 4).into_iter().fold(c.clone(), |acc, v| acc.with(v, qi(0)).unwrap());
            assert!(kausz_composite(&all_zero).is_ok(), "chart {ch}, origin");
        }
    }

    #[test]
    fn eta_identity_base_and_top_stratum() {
        let par = Params::new(3, 2, 6).unwrap();
        let mut rng = Sampler::new(9, 0);
        let w = GrassPoint::new(rng.matrix(2, 5)).unwrap();
        let id = GrassPoint::new(QMatrix::from_ints(&[&[1, 0, 0], &[0, 1, 0]])).unwrap();
        let base = fibration_eta(&par, &id, &w).unwrap();
        assert_eq!(base.matrix().select_cols(&[3, 4]), w.matrix().select_cols(&[3, 4]));
        let u = GrassPoint::new(rng.matrix(2, 3)).unwrap();
        let x = fibration_eta(&par, &u, &w).unwrap();
        assert_eq!(eta_top_stratum(&par, &x).unwrap(), plucker(&u));
        assert!(fibration_eta(&par, &w, &u).is_err());
        assert!(fibration_eta(&Params::new(2, 2, 4).unwrap(), &id, &w).is_err());
    }
}
