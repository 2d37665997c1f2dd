//! Verification suites shared by the CLI and the acceptance tests.
//!
//! Each check yields one `CheckRecord`; suites return them in a fixed order so
//! that reports are reproducible whatever the thread count.

use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactpoly::{exact_divide, poly_minor, MultiPoly, QMatrix, Rational, Var};
use crate::grassmann::{
    enum_stratum, index_set, plucker, plucker_oracle, stratum_membership, GrassPoint, Params, ProjPoint,
};
use crate::kauszlm::{
    determinantal_ideal_gens, diagram_check, kausz_params, lm_map, DiagramStatus, HomPoint, IdealKind, KauszChart,
    KauszCoords,
};
use crate::millecrepes::{
    admissible_signatures, all_chart_indices, chart_transition, enum_chart_indices, gamma_tau_symbolic, j_tau,
    j_tau_inverse, j_tau_symbolic, orbit_signature, predicted_unit, retraction_chart, special_indices, ChartIndex,
    MCCoords,
};
use crate::par::{self, Strategy};
use crate::sampling::{retry, Sampler};
use crate::torusflow::{
    fixed_component, gm_act, is_fixed_symbolic, limit, orbit_boundary_data, orbit_curve_degree, same_fiber, Direction,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub suite: &'static str,
    pub check: String,
    pub params: Option<String>,
    pub anchor: &'static str,
    pub pass: bool,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub witness: Value,
}

impl CheckRecord {
    fn new(suite: &'static str, anchor: &'static str, check: impl Into<String>, params: Option<&Params>) -> Self {
        CheckRecord {
            suite,
            check: check.into(),
            params: params.map(|p| p.to_string()),
            anchor,
            pass: true,
            witness: Value::Null,
        }
    }

    fn verdict(mut self, pass: bool, witness: Value) -> Self {
        self.pass = pass;
        if !pass {
            self.witness = witness;
        }
        self
    }

    fn error(mut self, e: &Error) -> Self {
        self.pass = false;
        self.witness = json!({ "error": e.to_string() });
        self
    }
}

pub fn all_pass(records: &[CheckRecord]) -> bool {
    records.iter().all(|r| r.pass)
}

/// Sampling settings shared by the randomized suites.
#[derive(Clone, Copy, Debug)]
pub struct SampleConfig {
    pub samples: usize,
    pub seed: u64,
    pub strategy: Strategy,
}

impl SampleConfig {
    pub fn new(samples: usize, seed: u64) -> SampleConfig {
        SampleConfig { samples, seed, strategy: Strategy::default() }
    }

    /// The sampler for item `i` of the sub-check `tag`.
    fn rng(&self, tag: u64, i: usize) -> Sampler {
        Sampler::new(self.seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15), i as u64)
    }
}

fn count_failures<T: Sync>(
    cfg: &SampleConfig,
    items: &[T],
    f: impl Fn(&T) -> Option<Value> + Sync + Send,
) -> Vec<Value> {
    par::map(cfg.strategy, items, f).into_iter().flatten().collect()
}

fn first_witness(fails: &[Value]) -> Value {
    json!({ "failures": fails.len(), "first": fails.first().cloned().unwrap_or(Value::Null) })
}

pub fn random_point(rng: &mut Sampler, p: usize, n: usize) -> Result<GrassPoint> {
    retry(|| GrassPoint::new(rng.matrix(p, n)).ok())
}

/// A point whose E1 and E2 blocks have ranks (r1, r2).
pub fn point_with_block_ranks(rng: &mut Sampler, par: &Params, r1: usize, r2: usize) -> Result<GrassPoint> {
    let (s, p, n) = (par.s(), par.p(), par.n());
    retry(|| {
        let a = rng.matrix_of_rank(p, s, r1).ok()?;
        let b = rng.matrix_of_rank(p, n - s, r2).ok()?;
        let m = QMatrix::from_fn(p, n, |i, j| if j < s { a[(i, j)].clone() } else { b[(i, j - s)].clone() });
        GrassPoint::new(m).ok()
    })
}

/// Random admissible block ranks: r1 ≤ min(p,s), r2 ≤ min(p,n−s), r1 + r2 ≥ p.
fn random_block_ranks(rng: &mut Sampler, par: &Params) -> (usize, usize) {
    let (s, p, n) = (par.s(), par.p(), par.n());
    loop {
        let r1 = rng.int(0, p.min(s) as i64) as usize;
        let r2 = rng.int(0, p.min(n - s) as i64) as usize;
        if r1 + r2 >= p {
            return (r1, r2);
        }
    }
}

// ---------------------------------------------------------------------------
// Mille Crêpes normal forms

pub const ANCHOR_UNIT: &str = "millecrepes/unit-pivot";
pub const ANCHOR_ROUND_TRIP: &str = "millecrepes/embedding";

/// The chart ((p,…,1), (s,…,s−p+1)) of U_p.
pub fn standard_upper_chart(par: &Params) -> Result<ChartIndex> {
    let (s, p) = (par.s(), par.p());
    ChartIndex::new(par, p, (1..=p).rev().collect(), (s + 1 - p..=s).rev().collect())
}

/// Every chart of U_p and every weight k: the minor at the unit label is ±(pivot monomial),
/// and after dividing the stratum by that monomial the unit entry is the constant ±1.
pub fn check_lemma_em(par: &Params, strategy: Strategy) -> Vec<CheckRecord> {
    let rec = |check: String| CheckRecord::new("lemma-em", ANCHOR_UNIT, check, Some(par));
    let charts = match enum_chart_indices(par, par.p()) {
        Ok(c) => c,
        Err(e) => return vec![rec("charts of U_p".into()).error(&e)],
    };
    let standard = standard_upper_chart(par).ok();
    let mut out = par::map(strategy, &charts, |tau| {
        (0..=par.p())
            .map(|k| {
                let r = rec(format!("chart {tau}, k={k}"));
                match lemma_em_one(par, tau, k, standard.as_ref() == Some(tau)) {
                    Ok(None) => r,
                    Ok(Some(w)) => r.verdict(false, w),
                    Err(e) => r.error(&e),
                }
            })
            .collect::<Vec<_>>()
    })
    .concat();
    out.insert(0, rec("U_p has charts".into()).verdict(!charts.is_empty(), json!({ "charts": 0 })));
    out
}

fn lemma_em_one(par: &Params, tau: &ChartIndex, k: usize, standard: bool) -> Result<Option<Value>> {
    let p = par.p();
    let gamma = gamma_tau_symbolic(par, tau);
    let rows: Vec<usize> = (0..p).collect();
    let (label, mono, sign) = predicted_unit(par, tau, k);
    if standard {
        let ik = special_indices(par, k)?.ik;
        let expect_sign = if (k * (p - k)).is_multiple_of(2) { 1 } else { -1 };
        if label != ik || sign != expect_sign {
            return Ok(Some(json!({ "label": label.to_string(), "ik": ik.to_string(), "sign": sign })));
        }
    }
    let minor = poly_minor(&gamma, &rows, &label.columns())?;
    let expected = MultiPoly::term(sign, mono.clone());
    if minor != expected {
        return Ok(Some(
            json!({ "label": label.to_string(), "minor": minor.to_string(), "expected": expected.to_string() }),
        ));
    }
    let divisor = MultiPoly::term(1, mono);
    let nf = j_tau_symbolic(par, tau)?;
    let form = &nf.strata[k];
    for (l, q) in enum_stratum(par, k)?.iter().zip(&form.polys) {
        let direct = exact_divide(&poly_minor(&gamma, &rows, &l.columns())?, &divisor)?;
        if &direct != q {
            return Ok(Some(
                json!({ "label": l.to_string(), "normal_form": q.to_string(), "direct": direct.to_string() }),
            ));
        }
        if *l == label && direct != MultiPoly::constant(sign) {
            return Ok(Some(json!({ "unit": l.to_string(), "entry": direct.to_string() })));
        }
    }
    Ok(None)
}

/// j_tau_inverse ∘ j_tau = id on random coordinates, one record per chart.
pub fn check_round_trip(par: &Params, cfg: &SampleConfig) -> Vec<CheckRecord> {
    let charts = all_chart_indices(par);
    par::map(cfg.strategy, &(0..charts.len()).collect::<Vec<_>>(), |&ci| {
        let tau = &charts[ci];
        let r = CheckRecord::new("lemma-em", ANCHOR_ROUND_TRIP, format!("round trip on {tau}"), Some(par));
        let mut rng = cfg.rng(3, ci);
        let mut fails = Vec::new();
        for _ in 0..cfg.samples {
            let c = MCCoords::random(par, tau, &mut rng);
            match j_tau_inverse(par, tau, &j_tau(&c)) {
                Ok(back) if back == c => {}
                Ok(_) => fails.push(serde_json::to_value(&c).unwrap()),
                Err(e) => fails.push(json!({ "coords": serde_json::to_value(&c).unwrap(), "error": e.to_string() })),
            }
        }
        r.verdict(fails.is_empty(), first_witness(&fails))
    })
}

// ---------------------------------------------------------------------------
// Orbits

pub const ANCHOR_ORBITS: &str = "millecrepes/orbit-signature";

/// Desk-scale Params with the given r.
pub fn params_for_r(r: usize) -> Result<Params> {
    Params::new(r, r, 2 * r)
}

/// Sweeps every chart and every pattern of vanishing pivots; compares the realized
/// signatures with the admissible ones in both directions.
pub fn check_orbits(r: usize, seed: u64, strategy: Strategy) -> Vec<CheckRecord> {
    let rec = |check: &str| CheckRecord::new("orbits", ANCHOR_ORBITS, check, None);
    let par = match params_for_r(r) {
        Ok(p) => p,
        Err(e) => return vec![rec("params").error(&e)],
    };
    let charts = all_chart_indices(&par);
    let realized: BTreeSet<_> = par::map(strategy, &(0..charts.len()).collect::<Vec<_>>(), |&ci| {
        let tau = &charts[ci];
        let base = MCCoords::random(&par, tau, &mut Sampler::new(seed, ci as u64));
        (0u32..1 << r)
            .map(|mask| {
                let c = (1..=r)
                    .filter(|k| mask >> (k - 1) & 1 == 1)
                    .fold(base.clone(), |c, k| c.with(tau.pivot_var(k), Rational::zero()).expect("pivot var"));
                orbit_signature(&c)
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    let admissible = admissible_signatures(r);
    let extra: Vec<_> = realized.difference(&admissible).cloned().collect();
    let missing: Vec<_> = admissible.difference(&realized).cloned().collect();
    vec![
        rec(&format!("r={r}: realized ⊆ admissible")).verdict(extra.is_empty(), json!({ "not_admissible": extra })),
        rec(&format!("r={r}: admissible ⊆ realized ({} signatures)", admissible.len()))
            .verdict(missing.is_empty(), json!({ "not_realized": missing })),
    ]
}

// ---------------------------------------------------------------------------
// Kausz diagram and the determinantal dictionary

pub const ANCHOR_DIAGRAM: &str = "kauszlm/commutative-diagram";
pub const ANCHOR_IDEALS: &str = "kauszlm/determinantal-ideals";

pub fn check_diagram(p: usize, n: usize, cfg: &SampleConfig) -> Vec<CheckRecord> {
    let rec = |check: String| CheckRecord::new("diagram", ANCHOR_DIAGRAM, check, None);
    let par = match kausz_params(p, n) {
        Ok(par) => par,
        Err(e) => return vec![rec(format!("(p,n)=({p},{n})")).error(&e)],
    };
    let samples: Vec<KauszCoords> = (0..cfg.samples)
        .map(|i| {
            let mut rng = cfg.rng(7, i);
            let ch = KauszChart::random(p, n, &mut rng).expect("valid (p,n)");
            KauszCoords::random(&ch, &mut rng)
        })
        .collect();
    let chunks: Vec<&[KauszCoords]> = samples.chunks(1).collect();
    let reports = par::map(cfg.strategy, &chunks, |c| diagram_check(&par, c));
    reports
        .into_iter()
        .zip(&samples)
        .enumerate()
        .map(|(i, (rep, c))| {
            let r = CheckRecord::new("diagram", ANCHOR_DIAGRAM, format!("sample {i}, chart {}", c.chart()), Some(&par));
            match rep {
                Ok(recs) => {
                    let d = &recs[0];
                    r.verdict(d.status == DiagramStatus::Pass, serde_json::to_value(d).unwrap())
                }
                Err(e) => r.error(&e),
            }
        })
        .collect()
}

fn eval_gens(gens: &[MultiPoly], x00: &Rational, x: &QMatrix) -> Result<bool> {
    for g in gens {
        let v = g.eval_with(|v| match v {
            Var::X(0, 0) => Some(x00.clone()),
            Var::X(i, j) => Some(x[(i as usize - 1, j as usize - 1)].clone()),
            _ => None,
        })?;
        if !v.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Vanishing of I_l and J_l against matrix rank, and I_l against the stratum test through LM.
pub fn check_ideal_dictionary(p: usize, n: usize, cfg: &SampleConfig) -> Vec<CheckRecord> {
    let par = match kausz_params(p, n) {
        Ok(par) => par,
        Err(e) => return vec![CheckRecord::new("strata", ANCHOR_IDEALS, "params", None).error(&e)],
    };
    (0..p)
        .map(|l| {
            let r = CheckRecord::new("strata", ANCHOR_IDEALS, format!("l={l}"), Some(&par));
            let (ys, zs) = match (
                determinantal_ideal_gens(p, n, l, IdealKind::Y),
                determinantal_ideal_gens(p, n, l, IdealKind::Z),
            ) {
                (Ok(y), Ok(z)) => (y, z),
                (Err(e), _) | (_, Err(e)) => return r.error(&e),
            };
            let idx: Vec<usize> = (0..cfg.samples).collect();
            let fails = count_failures(cfg, &idx, |&i| {
                let mut rng = cfg.rng(11 + l as u64, i);
                let rank = rng.int(0, p as i64) as usize;
                let x = rng.matrix_of_rank(p, n - p, rank).ok()?;
                let x00 = if rng.int(0, 3) == 0 { Rational::zero() } else { rng.nonzero() };
                let y_vanish = eval_gens(&ys, &x00, &x).ok()?;
                let z_vanish = eval_gens(&zs, &x00, &x).ok()?;
                let z_expect = x00.is_zero() && (l == 0 || rank <= p - l);
                let mut ok = y_vanish == (rank <= l) && z_vanish == z_expect;
                if !x00.is_zero() {
                    let g = lm_map(&HomPoint::new(&x00, &x).ok()?).ok()?;
                    let (a, b) = stratum_membership(&g, &par, p - l - 1).ok()?;
                    ok &= a == y_vanish && b == y_vanish;
                }
                (!ok).then(|| json!({ "rank": rank, "x00": x00.to_string(), "y": y_vanish, "z": z_vanish }))
            });
            r.verdict(fails.is_empty(), first_witness(&fails))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Strata and the Plücker oracle

pub const ANCHOR_STRATA: &str = "grassmann/strata-ranks";
pub const ANCHOR_ORACLE: &str = "grassmann/plucker-relations";

pub fn check_strata(par: &Params, cfg: &SampleConfig) -> Vec<CheckRecord> {
    (0..=par.r())
        .map(|k| {
            let r = CheckRecord::new("strata", ANCHOR_STRATA, format!("k={k}: vanishing vs block ranks"), Some(par));
            let idx: Vec<usize> = (0..cfg.samples).collect();
            let fails = count_failures(cfg, &idx, |&i| {
                let mut rng = cfg.rng(13 + k as u64, i);
                let (r1, r2) = random_block_ranks(&mut rng, par);
                let x = point_with_block_ranks(&mut rng, par, r1, r2).ok()?;
                match stratum_membership(&x, par, k) {
                    Ok((a, b)) if a == b => None,
                    Ok((a, b)) => Some(json!({ "x": x, "plucker_test": a, "rank_test": b })),
                    Err(e) => Some(json!({ "error": e.to_string() })),
                }
            });
            r.verdict(fails.is_empty(), first_witness(&fails))
        })
        .collect()
}

pub fn check_oracle(par: &Params, cfg: &SampleConfig) -> Vec<CheckRecord> {
    let r = CheckRecord::new("strata", ANCHOR_ORACLE, "oracle ∘ plucker = id", Some(par));
    let idx: Vec<usize> = (0..cfg.samples).collect();
    let fails = count_failures(cfg, &idx, |&i| {
        let mut rng = cfg.rng(17, i);
        let x = random_point(&mut rng, par.p(), par.n()).ok()?;
        let v = plucker(&x);
        match plucker_oracle(&v) {
            Some(y) if plucker(&y) == v => None,
            _ => Some(json!({ "x": x })),
        }
    });
    let mut out = vec![r.verdict(fails.is_empty(), first_witness(&fails))];
    // P_{21} P_{43} − P_{31} P_{42} + P_{41} P_{32} = 1 on this vector.
    let labels = index_set(2, 4);
    let bad: Vec<Rational> =
        labels
            .iter()
            .map(|l| {
                if [vec![2, 1], vec![4, 3]].contains(&l.entries().to_vec()) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
    let rejected = ProjPoint::new(labels, &bad).map(|v| plucker_oracle(&v).is_none()).unwrap_or(false);
    out.push(
        CheckRecord::new("strata", ANCHOR_ORACLE, "G(2,4) non-Plücker vector rejected", None)
            .verdict(rejected, json!({ "vector": "e_(2,1) + e_(4,3)" })),
    );
    out
}

// ---------------------------------------------------------------------------
// Retraction

pub const ANCHOR_RETRACTION: &str = "millecrepes/retraction";
pub const ANCHOR_FLAT: &str = "millecrepes/flat-normal-form";

pub fn check_retraction(par: &Params, cfg: &SampleConfig) -> Vec<CheckRecord> {
    let rec = |check: &str, anchor| CheckRecord::new("retraction", anchor, check, Some(par));
    let charts = all_chart_indices(par);
    let idx: Vec<usize> = (0..cfg.samples).collect();

    let idempotent = count_failures(cfg, &idx, |&i| {
        let mut rng = cfg.rng(19, i);
        let tau = &charts[rng.index(charts.len())];
        let c = MCCoords::random(par, tau, &mut rng);
        let once = retraction_chart(&c);
        let twice = once.as_ref().map_err(Clone::clone).and_then(retraction_chart);
        match (once, twice) {
            (Ok(a), Ok(b)) if a == b && j_tau(&a).strata == j_tau(&c).strata => None,
            (a, b) => Some(json!({ "coords": c, "once": a.map_err(|e| e.to_string()).ok(), "twice_ok": b.is_ok() })),
        }
    });

    let compatible = count_failures(cfg, &idx, |&i| {
        let mut rng = cfg.rng(23, i);
        let (c, c2) = retry(|| {
            let tau = &charts[rng.index(charts.len())];
            let tau2 = &charts[rng.index(charts.len())];
            let c = MCCoords::random(par, tau, &mut rng);
            chart_transition(tau2, &c).ok().map(|c2| (c, c2))
        })
        .ok()?;
        let a = retraction_chart(&c).map(|x| j_tau(&x));
        let b = retraction_chart(&c2).map(|x| j_tau(&x));
        match (a, b) {
            (Ok(a), Ok(b)) if a == b => None,
            (a, b) => Some(json!({ "coords": c, "other_chart": c2.tau(), "a_ok": a.is_ok(), "b_ok": b.is_ok() })),
        }
    });

    let fibers = count_failures(cfg, &idx, |&i| {
        let mut rng = cfg.rng(29, i);
        let x = random_point(&mut rng, par.p(), par.n()).ok()?;
        let t = rng.nonzero();
        let y = gm_act(par, &t, &x).ok()?;
        match same_fiber(par, &x, &y) {
            Ok(true) => None,
            other => Some(json!({ "x": x, "t": t.to_string(), "result": format!("{other:?}") })),
        }
    });

    vec![
        rec("retraction is idempotent and keeps the strata", ANCHOR_RETRACTION)
            .verdict(idempotent.is_empty(), first_witness(&idempotent)),
        rec("retraction agrees on chart overlaps", ANCHOR_RETRACTION)
            .verdict(compatible.is_empty(), first_witness(&compatible)),
        rec("same_fiber along G_m translates", ANCHOR_RETRACTION).verdict(fibers.is_empty(), first_witness(&fibers)),
        check_flat_normal_form(par),
    ]
}

/// On a mixed chart (0 < l < r) the strata depend on b = pivot 1 and a = pivot r−l+1 only
/// through t = a·b: every term carries equal powers of the two. For r = 1 the l = 0 strata
/// must not involve b at all.
pub fn check_flat_normal_form(par: &Params) -> CheckRecord {
    let r = par.r();
    let l = if r >= 2 { 1 } else { 0 };
    let rec = CheckRecord::new("retraction", ANCHOR_FLAT, format!("strata through a·b on an l={l} chart"), Some(par));
    let tau = match enum_chart_indices(par, l) {
        Ok(c) => c[0].clone(),
        Err(e) => return rec.error(&e),
    };
    let nf = match j_tau_symbolic(par, &tau) {
        Ok(nf) => nf,
        Err(e) => return rec.error(&e),
    };
    let b = tau.pivot_var(1);
    let a = (l > 0).then(|| tau.pivot_var(r - l + 1));
    let mut bad = Vec::new();
    let mut sees_t = false;
    for form in &nf.strata {
        for q in &form.polys {
            for (m, _) in q.terms() {
                let eb = m.exponent(b);
                let ea = a.map_or(0, |a| m.exponent(a));
                sees_t |= eb > 0;
                if eb != ea {
                    bad.push(q.to_string());
                }
            }
        }
    }
    let pass = bad.is_empty() && (l == 0 || sees_t);
    rec.verdict(pass, json!({ "chart": tau.to_string(), "unbalanced": bad.into_iter().take(3).collect::<Vec<_>>() }))
}

// ---------------------------------------------------------------------------
// Torus flow

pub const ANCHOR_DEGREE: &str = "torusflow/orbit-degree";
pub const ANCHOR_LIMITS: &str = "torusflow/limits";
pub const ANCHOR_FIXED: &str = "torusflow/fixed-components";
pub const ANCHOR_BOUNDARY: &str = "torusflow/source-sink";

pub fn check_flow(par: &Params, cfg: &SampleConfig) -> Vec<CheckRecord> {
    let rec = |check: &str, anchor| CheckRecord::new("flow", anchor, check, Some(par));
    let idx: Vec<usize> = (0..cfg.samples).collect();
    let r = par.r();

    let generic = count_failures(cfg, &idx, |&i| {
        let mut rng = cfg.rng(31, i);
        let x = random_point(&mut rng, par.p(), par.n()).ok()?;
        match orbit_curve_degree(par, &x) {
            Ok(d) if d == r => None,
            other => Some(json!({ "x": x, "degree": format!("{other:?}") })),
        }
    });

    // Structured non-fixed, non-generic points: r1 + r2 > p; the degree is r1 + r2 − p.
    let candidates: Vec<(usize, usize)> = (0..=par.p().min(par.s()))
        .flat_map(|a| (0..=par.p().min(par.n() - par.s())).map(move |b| (a, b)))
        .filter(|&(a, b)| a + b > par.p() && (a, b) != (par.p(), r))
        .collect();
    let structured = count_failures(cfg, &idx, |&i| {
        let mut rng = cfg.rng(37, i);
        let (r1, r2) = *candidates.get(rng.index(candidates.len().max(1)))?;
        let x = point_with_block_ranks(&mut rng, par, r1, r2).ok()?;
        match orbit_curve_degree(par, &x) {
            Ok(d) if d == r1 + r2 - par.p() && d <= r => None,
            other => Some(json!({ "x": x, "ranks": [r1, r2], "degree": format!("{other:?}") })),
        }
    });

    // Limits read off plucker(x) directly, and the limit points are fixed in the right component.
    let limits = count_failures(cfg, &idx, |&i| {
        let mut rng = cfg.rng(41, i);
        let (r1, r2) = random_block_ranks(&mut rng, par);
        let x = point_with_block_ranks(&mut rng, par, r1, r2).ok()?;
        let v = plucker(&x);
        let weights: Vec<usize> =
            v.labels().iter().zip(v.coords()).filter(|(_, c)| !c.is_zero()).map(|(l, _)| l.weight(par.s())).collect();
        let (lo, hi) = (*weights.iter().min()?, *weights.iter().max()?);
        let zero = limit(par, &x, Direction::ToZero).ok()?;
        let inf = limit(par, &x, Direction::ToInfinity).ok()?;
        let ok = zero.component == lo
            && inf.component == hi
            && fixed_component(par, &zero.limit).ok()? == Some(lo)
            && fixed_component(par, &inf.limit).ok()? == Some(hi);
        (!ok).then(|| json!({ "x": x, "weights": [lo, hi], "components": [zero.component, inf.component] }))
    });

    // Fixed points: block test against the symbolic t-grading, on a mix of fixed and moving points.
    let fixed = count_failures(cfg, &idx, |&i| {
        let mut rng = cfg.rng(43, i);
        let x = if i % 2 == 0 {
            let k = rng.int(0, r as i64) as usize;
            point_with_block_ranks(&mut rng, par, par.p() - k, k).ok()?
        } else {
            let (r1, r2) = random_block_ranks(&mut rng, par);
            point_with_block_ranks(&mut rng, par, r1, r2).ok()?
        };
        let block = fixed_component(par, &x).ok()?;
        let symbolic = is_fixed_symbolic(par, &x).ok()?;
        let t = Rational::from_integer(2.into());
        let moved = plucker(&gm_act(par, &t, &x).ok()?) != plucker(&x);
        (block.is_some() != symbolic || symbolic == moved)
            .then(|| json!({ "x": x, "block": block, "symbolic": symbolic }))
    });

    vec![
        rec("degree = r on generic points", ANCHOR_DEGREE).verdict(generic.is_empty(), first_witness(&generic)),
        rec("degree = r1 + r2 - p <= r on structured points", ANCHOR_DEGREE)
            .verdict(structured.is_empty(), first_witness(&structured)),
        rec("limit components are the extreme weights", ANCHOR_LIMITS)
            .verdict(limits.is_empty(), first_witness(&limits)),
        rec("fixed_component agrees with the symbolic action", ANCHOR_FIXED)
            .verdict(fixed.is_empty(), first_witness(&fixed)),
        check_source_sink(par, cfg),
    ]
}

/// Generic points together with a rescaled, row-reduced copy of each. Equal source data must
/// force equal sink data, and the number of distinct sources must equal the number of sinks.
pub fn check_source_sink(par: &Params, cfg: &SampleConfig) -> CheckRecord {
    let rec = CheckRecord::new("flow", ANCHOR_BOUNDARY, "equal source data => equal sink data", Some(par));
    let idx: Vec<usize> = (0..cfg.samples).collect();
    let pairs = par::map(cfg.strategy, &idx, |&i| -> Result<_> {
        let mut rng = cfg.rng(47, i);
        let x = random_point(&mut rng, par.p(), par.n())?;
        let lambda = rng.nonzero();
        let h = rng.invertible(par.p())?;
        let y = gm_act(par, &lambda, &x)?.row_op(&h)?;
        Ok([orbit_boundary_data(par, &x)?, orbit_boundary_data(par, &y)?])
    });
    let data = match pairs.into_iter().collect::<Result<Vec<_>>>() {
        Ok(d) => d.concat(),
        Err(e) => return rec.error(&e),
    };
    let mut sink_of = HashMap::new();
    let mut conflicts = 0usize;
    let mut matched = 0usize;
    for (src, snk) in &data {
        match sink_of.get(src) {
            Some(s) if s == snk => matched += 1,
            Some(_) => conflicts += 1,
            None => {
                sink_of.insert(src.clone(), snk.clone());
            }
        }
    }
    let sinks: BTreeSet<String> = data.iter().map(|(_, s)| serde_json::to_string(s).unwrap()).collect();
    let pass = conflicts == 0 && matched >= cfg.samples && sinks.len() == sink_of.len();
    rec.verdict(
        pass,
        json!({ "conflicts": conflicts, "matched_pairs": matched, "sources": sink_of.len(), "sinks": sinks.len() }),
    )
}
