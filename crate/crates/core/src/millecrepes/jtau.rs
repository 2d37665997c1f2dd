use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::{chart_variables, gamma_tau_symbolic, ChartIndex, MCCoords};
use crate::error::{Error, Result};
use crate::exactpoly::{exact_divide, poly_minor, Monomial, MultiPoly, PolyMatrix, Rational, Var};
use crate::grassmann::{enum_index_set, plucker, stratum_projection, GrassPoint, IndexTuple, Params, ProjPoint};

/// A point of P^{N} × ∏_k P^{N^k}: the Plücker vector and one vector per weight stratum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MultiProjPoint {
    pub main: ProjPoint,
    pub strata: Vec<ProjPoint>,
}

impl MultiProjPoint {
    pub fn factor(&self, f: Factor) -> &ProjPoint {
        match f {
            Factor::Main => &self.main,
            Factor::Stratum(k) => &self.strata[k],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    Main,
    Stratum(usize),
}

pub fn kausz_total_map(par: &Params, x: &GrassPoint) -> Result<MultiProjPoint> {
    let main = plucker(x);
    let strata = (0..=par.r()).map(|k| stratum_projection(&main, par, k)).collect::<Result<Vec<_>>>()?;
    Ok(MultiProjPoint { main, strata })
}

/// One factor of J^τ after cancelling its known monomial.
#[derive(Clone, Debug)]
pub struct FactorForm {
    pub labels: Vec<IndexTuple>,
    pub polys: Vec<MultiPoly>,
    /// The cancelled monomial (1 for the main factor).
    pub divisor: Monomial,
    /// Position of the label whose entry is the constant ±1.
    pub unit: usize,
    pub unit_sign: i8,
}

#[derive(Clone, Debug)]
struct SolveStep {
    var: Var,
    factor: Factor,
    label: usize,
    coeff: BigInt,
    rest: MultiPoly,
}

/// Symbolic normal form of J^τ on one chart.
#[derive(Debug)]
pub struct ChartNormalForm {
    pub par: Params,
    pub tau: ChartIndex,
    pub vars: Vec<Var>,
    pub gamma: PolyMatrix,
    pub main: FactorForm,
    pub strata: Vec<FactorForm>,
    plan: Vec<SolveStep>,
    strata_plan: Option<Vec<SolveStep>>,
}

impl ChartNormalForm {
    pub fn factor(&self, f: Factor) -> &FactorForm {
        match f {
            Factor::Main => &self.main,
            Factor::Stratum(k) => &self.strata[k],
        }
    }

    fn factors(&self) -> impl Iterator<Item = Factor> {
        std::iter::once(Factor::Main).chain((0..self.strata.len()).map(Factor::Stratum))
    }
}

/// Unit label, cancelled monomial and sign of the unit entry for the weight-k factor of chart τ.
///
/// The sign is that of the permutation matrix obtained by keeping the pivot skeleton of Γ^τ
/// on the label's columns.
pub fn predicted_unit(par: &Params, tau: &ChartIndex, k: usize) -> (IndexTuple, Monomial, i8) {
    let (s, p) = (par.s(), par.p());
    let (l, r) = (tau.l(), tau.rows().len());
    let pivot_col = |row: usize| if row <= l { s + row } else { s - p + row };
    let (layers, mono): (Vec<usize>, Monomial) = if k >= l {
        let m = k - l;
        ((1..=m).collect(), Monomial::from_powers((1..=m).map(|t| (tau.pivot_var(t), (m + 1 - t) as u32))))
    } else {
        let m = l - k;
        let base = r - l;
        (
            (base + 1..=base + m).collect(),
            Monomial::from_powers((1..=m).map(|t| (tau.pivot_var(base + t), (m + 1 - t) as u32))),
        )
    };
    let mut col_of_row: Vec<usize> = (1..=p).map(pivot_col).collect();
    for &t in &layers {
        col_of_row[tau.rows()[t - 1] - 1] = tau.cols()[t - 1];
    }
    let label = IndexTuple::from_set(col_of_row.clone());
    let asc = label.columns();
    let perm: Vec<usize> = col_of_row.iter().map(|c| asc.iter().position(|&d| d == c - 1).unwrap()).collect();
    (label, mono, permutation_sign(&perm))
}

pub fn permutation_sign(perm: &[usize]) -> i8 {
    let mut inv = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn build_factor(
    minors: &[(IndexTuple, MultiPoly)],
    labels: Vec<IndexTuple>,
    unit_label: &IndexTuple,
    divisor: Monomial,
    sign: i8,
    what: &str,
) -> Result<FactorForm> {
    let d = MultiPoly::term(1, divisor.clone());
    let lookup: HashMap<&IndexTuple, &MultiPoly> = minors.iter().map(|(l, q)| (l, q)).collect();
    let polys = labels
        .iter()
        .map(|l| {
            exact_divide(lookup[l], &d)
                .map_err(|_| Error::LemmaFalsified(format!("{what}: {divisor} does not divide P_{l} = {}", lookup[l])))
        })
        .collect::<Result<Vec<_>>>()?;
    let unit = labels
        .iter()
        .position(|l| l == unit_label)
        .ok_or_else(|| Error::Internal(format!("{what}: unit label {unit_label} has the wrong weight")))?;
    let want = MultiPoly::constant(sign);
    if polys[unit] != want {
        return Err(Error::LemmaFalsified(format!(
            "{what}: entry at {unit_label} is {} after cancelling {divisor}, expected {want}",
            polys[unit]
        )));
    }
    Ok(FactorForm { labels, polys, divisor, unit, unit_sign: sign })
}

fn compute_normal_form(par: &Params, tau: &ChartIndex) -> Result<ChartNormalForm> {
    let gamma = gamma_tau_symbolic(par, tau);
    let rows: Vec<usize> = (0..par.p()).collect();
    let minors: Vec<(IndexTuple, MultiPoly)> = enum_index_set(par)
        .into_iter()
        .map(|l| {
            let q = poly_minor(&gamma, &rows, &l.columns())?;
            Ok((l, q))
        })
        .collect::<Result<_>>()?;
    let what = format!("chart {tau} of {par}");
    let (base, _, base_sign) = predicted_unit(par, tau, tau.l());
    let main = build_factor(
        &minors,
        minors.iter().map(|(l, _)| l.clone()).collect(),
        &base,
        Monomial::one(),
        base_sign,
        &what,
    )?;
    let strata = (0..=par.r())
        .map(|k| {
            let (label, mono, sign) = predicted_unit(par, tau, k);
            let labels: Vec<IndexTuple> =
                minors.iter().filter(|(l, _)| l.weight(par.s()) == k).map(|(l, _)| l.clone()).collect();
            build_factor(&minors, labels, &label, mono, sign, &format!("{what}, stratum {k}"))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut nf = ChartNormalForm {
        par: *par,
        tau: tau.clone(),
        vars: chart_variables(par, tau),
        gamma,
        main,
        strata,
        plan: Vec::new(),
        strata_plan: None,
    };
    let all: Vec<Factor> = nf.factors().collect();
    nf.plan = build_plan(&nf, &all, &[])?;
    if tau.l() == 0 {
        let strata_only: Vec<Factor> = (0..nf.strata.len()).map(Factor::Stratum).collect();
        nf.strata_plan = Some(build_plan(&nf, &strata_only, &[tau.pivot_var(1)])?);
    }
    Ok(nf)
}

/// Orders the chart variables so that each one is read off a single entry of the normal form:
/// that entry must be `c·v + g` with c a nonzero constant and g in already-read variables.
fn build_plan(nf: &ChartNormalForm, factors: &[Factor], preset: &[Var]) -> Result<Vec<SolveStep>> {
    let mut unsolved: BTreeSet<Var> = nf.vars.iter().copied().collect();
    for v in preset {
        unsolved.remove(v);
    }
    let mut plan = Vec::new();
    while !unsolved.is_empty() {
        let mut progress = false;
        for &f in factors {
            let form = nf.factor(f);
            for (li, q) in form.polys.iter().enumerate() {
                let open: Vec<Var> = q.vars().into_iter().filter(|v| unsolved.contains(v)).collect();
                let [v] = open[..] else { continue };
                let (with_v, rest): (Vec<_>, Vec<_>) = q.terms().partition(|(m, _)| m.exponent(v) > 0);
                let [(m, c)] = with_v[..] else { continue };
                if *m != Monomial::var(v) {
                    continue;
                }
                plan.push(SolveStep {
                    var: v,
                    factor: f,
                    label: li,
                    coeff: c.clone(),
                    rest: MultiPoly::from_terms(rest.into_iter().map(|(m, c)| (m.clone(), c.clone()))),
                });
                unsolved.remove(&v);
                progress = true;
            }
        }
        if !progress {
            return Err(Error::Internal(format!(
                "chart {} of {}: cannot read off {:?}",
                nf.tau,
                nf.par,
                unsolved.iter().map(|v| v.to_string()).collect::<Vec<_>>()
            )));
        }
    }
    Ok(plan)
}

type CacheMap = HashMap<(Params, ChartIndex), Arc<ChartNormalForm>>;

fn cache() -> &'static RwLock<CacheMap> {
    static CACHE: OnceLock<RwLock<CacheMap>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The cached symbolic normal form of J^τ.
pub fn j_tau_symbolic(par: &Params, tau: &ChartIndex) -> Result<Arc<ChartNormalForm>> {
    let key = (*par, tau.clone());
    if let Some(nf) = cache().read().unwrap().get(&key) {
        return Ok(nf.clone());
    }
    let nf = Arc::new(compute_normal_form(par, tau)?);
    let mut w = cache().write().unwrap();
    Ok(w.entry(key).or_insert(nf).clone())
}

fn eval_factor(form: &FactorForm, c: &MCCoords) -> ProjPoint {
    let vals: Vec<Rational> =
        form.polys.iter().map(|q| q.eval_with(|v| c.get(v).cloned()).expect("chart variables assigned")).collect();
    ProjPoint::new(form.labels.clone(), &vals).expect("unit entry is nonzero")
}

/// J^τ(c), evaluated through the cancelled normal form, so it is defined on the whole chart.
pub fn j_tau(c: &MCCoords) -> MultiProjPoint {
    let nf = j_tau_symbolic(c.params(), c.tau()).expect("chart normal form");
    MultiProjPoint { main: eval_factor(&nf.main, c), strata: nf.strata.iter().map(|f| eval_factor(f, c)).collect() }
}

fn run_plan(
    nf: &ChartNormalForm,
    plan: &[SolveStep],
    m: &MultiProjPoint,
    preset: &[(Var, Rational)],
) -> Result<MCCoords> {
    let mut values: std::collections::BTreeMap<Var, Rational> = preset.iter().cloned().collect();
    let mut ratio_cache: HashMap<Factor, Rational> = HashMap::new();
    for f in plan.iter().map(|s| s.factor).collect::<BTreeSet<_>>() {
        let form = nf.factor(f);
        let pt = m.factor(f);
        let u = &pt.coords()[form.unit];
        if u.is_zero() {
            return Err(Error::ChartDomain(format!(
                "pivot {} of factor {:?} vanishes for chart {}",
                form.labels[form.unit], f, nf.tau
            )));
        }
        // value of a normalized entry = coordinate · sign / pivot coordinate
        let scale = Rational::new(BigInt::from(form.unit_sign), u.clone());
        ratio_cache.insert(f, scale);
    }
    for step in plan {
        let coord = &m.factor(step.factor).coords()[step.label];
        let q = Rational::from_integer(coord.clone()) * &ratio_cache[&step.factor];
        let g = step.rest.eval_with(|v| values.get(&v).cloned())?;
        values.insert(step.var, (q - g) / Rational::from_integer(step.coeff.clone()));
    }
    MCCoords::new(&nf.par, &nf.tau, values)
}

/// Reads chart coordinates off a point; certifies the result by re-evaluating J^τ.
pub fn j_tau_inverse(par: &Params, tau: &ChartIndex, m: &MultiProjPoint) -> Result<MCCoords> {
    let nf = j_tau_symbolic(par, tau)?;
    check_shape(&nf, m)?;
    for f in nf.factors() {
        let form = nf.factor(f);
        if m.factor(f).coords()[form.unit].is_zero() {
            return Err(Error::ChartDomain(format!(
                "pivot {} of factor {:?} vanishes for chart {tau}",
                form.labels[form.unit], f
            )));
        }
    }
    let c = run_plan(&nf, &nf.plan, m, &[])?;
    if j_tau(&c) != *m {
        return Err(Error::ChartDomain(format!("point is not in the image of chart {tau}")));
    }
    Ok(c)
}

/// Strata-only inverse on an l=0 chart with the first pivot preset.
pub(crate) fn strata_inverse(par: &Params, tau: &ChartIndex, strata: &[ProjPoint], b1: Rational) -> Result<MCCoords> {
    let nf = j_tau_symbolic(par, tau)?;
    let plan =
        nf.strata_plan.as_ref().ok_or_else(|| Error::InvalidParameter(format!("chart {tau} is not an l=0 chart")))?;
    for (k, form) in nf.strata.iter().enumerate() {
        if strata[k].coords()[form.unit].is_zero() {
            return Err(Error::ChartDomain(format!("stratum {k} pivot vanishes for chart {tau}")));
        }
    }
    // the main factor is never read by the strata plan
    let m = MultiProjPoint { main: strata[0].clone(), strata: strata.to_vec() };
    let c = run_plan(&nf, plan, &m, &[(tau.pivot_var(1), b1)])?;
    if j_tau(&c).strata != strata {
        return Err(Error::ChartDomain(format!("strata are not in the image of chart {tau}")));
    }
    Ok(c)
}

fn check_shape(nf: &ChartNormalForm, m: &MultiProjPoint) -> Result<()> {
    let ok = m.main.labels() == nf.main.labels.as_slice()
        && m.strata.len() == nf.strata.len()
        && m.strata.iter().zip(&nf.strata).all(|(a, b)| a.labels() == b.labels.as_slice());
    if !ok {
        return Err(Error::Dimension(format!("point does not live in the target of {}", nf.par)));
    }
    Ok(())
}

pub fn chart_transition(tau2: &ChartIndex, c: &MCCoords) -> Result<MCCoords> {
    j_tau_inverse(c.params(), tau2, &j_tau(c))
}
