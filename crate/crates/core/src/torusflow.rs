//! The G_m action t·(e1, e2) = (e1, t·e2), its limits and orbit data.
//!
//! Everything is read off the weight grading of the raw minors: P_I(t·x) = t^{w(I)} P_I(x).

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactpoly::{fmt_q, poly_minor, t_degree_split, MultiPoly, PolyMatrix, QMatrix, Rational, Var};
use crate::grassmann::{block_ranks, index_set, plucker_oracle, raw_minors, GrassPoint, IndexTuple, Params, ProjPoint};
use crate::millecrepes::{kausz_total_map, MultiProjPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    ToZero,
    ToInfinity,
}

/// Raw minors of the integer-cleared base matrix, grouped by weight.
/// Each weight carries a full-length vector that is zero off its stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowCurve {
    base: GrassPoint,
    labels: Vec<IndexTuple>,
    by_weight: BTreeMap<usize, Vec<Rational>>,
}

impl FlowCurve {
    pub fn new(par: &Params, x: &GrassPoint) -> Result<FlowCurve> {
        check_shape(par, x)?;
        let cleared = clear_denominators(x.matrix());
        let labels = index_set(par.p(), par.n());
        let minors = raw_minors(&cleared, &labels);
        let mut by_weight: BTreeMap<usize, Vec<Rational>> = BTreeMap::new();
        for (i, (label, m)) in labels.iter().zip(&minors).enumerate() {
            if m.is_zero() {
                continue;
            }
            by_weight.entry(label.weight(par.s())).or_insert_with(|| vec![Rational::zero(); labels.len()])[i] =
                m.clone();
        }
        Ok(FlowCurve { base: x.clone(), labels, by_weight })
    }

    pub fn base(&self) -> &GrassPoint {
        &self.base
    }

    pub fn labels(&self) -> &[IndexTuple] {
        &self.labels
    }

    /// Nonvanishing weights, ascending.
    pub fn weights(&self) -> Vec<usize> {
        self.by_weight.keys().copied().collect()
    }

    pub fn coefficients(&self, k: usize) -> Option<&[Rational]> {
        self.by_weight.get(&k).map(Vec::as_slice)
    }

    pub fn kmin(&self) -> usize {
        *self.by_weight.keys().next().expect("rank p point has a nonzero minor")
    }

    pub fn kmax(&self) -> usize {
        *self.by_weight.keys().next_back().expect("rank p point has a nonzero minor")
    }

    /// Σ_k t^k c_k.
    pub fn evaluate(&self, t: &Rational) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.labels.len()];
        for (&k, c) in &self.by_weight {
            let tk = num_traits::pow(t.clone(), k);
            for (o, ci) in out.iter_mut().zip(c) {
                *o += ci * &tk;
            }
        }
        out
    }
}

impl Serialize for FlowCurve {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.by_weight.len()))?;
        for (k, c) in &self.by_weight {
            let v: Vec<String> = c.iter().map(fmt_q).collect();
            map.serialize_entry(&k.to_string(), &v)?;
        }
        map.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BoundaryData {
    pub limit: GrassPoint,
    pub component: usize,
    /// Next nonvanishing weight vector, canonicalized on its own. None at fixed points.
    pub normal: Option<ProjPoint>,
}

fn check_shape(par: &Params, x: &GrassPoint) -> Result<()> {
    if (x.p(), x.n()) != (par.p(), par.n()) {
        return Err(Error::Dimension(format!("point is {}x{}, params {par}", x.p(), x.n())));
    }
    Ok(())
}

/// Scales each row by the lcm of its denominators.
fn clear_denominators(m: &QMatrix) -> QMatrix {
    let lcms: Vec<_> =
        (0..m.rows()).map(|i| m.row(i).iter().fold(num_bigint::BigInt::one(), |a, e| a.lcm(e.denom()))).collect();
    QMatrix::from_fn(m.rows(), m.cols(), |i, j| &m[(i, j)] * Rational::from_integer(lcms[i].clone()))
}

pub fn gm_act(par: &Params, t: &Rational, x: &GrassPoint) -> Result<GrassPoint> {
    check_shape(par, x)?;
    if t.is_zero() {
        return Err(Error::InvalidParameter("t = 0 is not in G_m; use limit".into()));
    }
    let m = x.matrix();
    GrassPoint::new(QMatrix::from_fn(
        m.rows(),
        m.cols(),
        |i, j| {
            if j < par.s() {
                m[(i, j)].clone()
            } else {
                &m[(i, j)] * t
            }
        },
    ))
}

/// t·x with t the symbolic variable `Var::T`, rows cleared to integers.
pub fn gm_act_symbolic(par: &Params, x: &GrassPoint) -> Result<PolyMatrix> {
    check_shape(par, x)?;
    let m = clear_denominators(x.matrix());
    Ok((0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let c = MultiPoly::constant(m[(i, j)].numer().clone());
                    if j < par.s() {
                        c
                    } else {
                        c * MultiPoly::var(Var::T)
                    }
                })
                .collect()
        })
        .collect())
}

/// Fixed iff every Plücker coordinate of t·x is homogeneous of one common t-degree.
pub fn is_fixed_symbolic(par: &Params, x: &GrassPoint) -> Result<bool> {
    let m = gm_act_symbolic(par, x)?;
    let rows: Vec<usize> = (0..par.p()).collect();
    let mut degrees = std::collections::BTreeSet::new();
    for label in index_set(par.p(), par.n()) {
        let minor = poly_minor(&m, &rows, &label.columns())?;
        degrees.extend(t_degree_split(&minor, Var::T).into_iter().map(|(e, _)| e));
    }
    Ok(degrees.len() == 1)
}

pub fn limit(par: &Params, x: &GrassPoint, dir: Direction) -> Result<BoundaryData> {
    let fc = FlowCurve::new(par, x)?;
    limit_of(&fc, dir)
}

fn limit_of(fc: &FlowCurve, dir: Direction) -> Result<BoundaryData> {
    let weights = fc.weights();
    let (k, next) = match dir {
        Direction::ToZero => (weights[0], weights.get(1).copied()),
        Direction::ToInfinity => {
            let last = weights.len() - 1;
            (weights[last], last.checked_sub(1).map(|i| weights[i]))
        }
    };
    let lead = ProjPoint::new(fc.labels.clone(), &fc.by_weight[&k])?;
    let limit = plucker_oracle(&lead)
        .ok_or_else(|| Error::Internal(format!("weight-{k} leading vector is not a Plücker vector")))?;
    let normal = next.map(|w| ProjPoint::new(fc.labels.clone(), &fc.by_weight[&w])).transpose()?;
    Ok(BoundaryData { limit, component: k, normal })
}

/// k with x ∈ V_{(p−k,k)}, or None when x moves.
pub fn fixed_component(par: &Params, x: &GrassPoint) -> Result<Option<usize>> {
    check_shape(par, x)?;
    let (r1, r2) = block_ranks(x, par.s());
    Ok((r1 + r2 == par.p()).then_some(r2))
}

/// (kplus, kminus): components of the limits at ∞ and at 0.
pub fn bb_class(par: &Params, x: &GrassPoint) -> Result<(usize, usize)> {
    let fc = FlowCurve::new(par, x)?;
    Ok((fc.kmax(), fc.kmin()))
}

pub fn orbit_curve_degree(par: &Params, x: &GrassPoint) -> Result<usize> {
    let fc = FlowCurve::new(par, x)?;
    match fc.kmax() - fc.kmin() {
        0 => Err(Error::DegenerateOrbit),
        d => Ok(d),
    }
}

/// Drops the Plücker factor.
pub fn retraction_total(m: &MultiProjPoint) -> Vec<ProjPoint> {
    m.strata.clone()
}

pub fn same_fiber(par: &Params, x: &GrassPoint, y: &GrassPoint) -> Result<bool> {
    let a = retraction_total(&kausz_total_map(par, x)?);
    let b = retraction_total(&kausz_total_map(par, y)?);
    Ok(a == b)
}

/// Source and sink data of a generic orbit.
pub fn orbit_boundary_data(par: &Params, x: &GrassPoint) -> Result<(BoundaryData, BoundaryData)> {
    let fc = FlowCurve::new(par, x)?;
    let (kminus, kplus) = (fc.kmin(), fc.kmax());
    if kminus != 0 || kplus != par.r() {
        return Err(Error::StratifiedOrbit { kminus, kplus });
    }
    Ok((limit_of(&fc, Direction::ToZero)?, limit_of(&fc, Direction::ToInfinity)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{q, qi};
    use crate::grassmann::plucker;
    use crate::sampling::Sampler;

    fn pt(rows: &[&[i64]]) -> GrassPoint {
        GrassPoint::new(QMatrix::from_ints(rows)).unwrap()
    }

    #[test]
    fn diagonal_example_in_g24() {
        let par = Params::new(2, 2, 4).unwrap();
        let x = pt(&[&[1, 0, 1, 0], &[0, 1, 0, 1]]);
        let zero = limit(&par, &x, Direction::ToZero).unwrap();
        let inf = limit(&par, &x, Direction::ToInfinity).unwrap();
        assert_eq!(plucker(&zero.limit), plucker(&pt(&[&[1, 0, 0, 0], &[0, 1, 0, 0]])));
        assert_eq!(plucker(&inf.limit), plucker(&pt(&[&[0, 0, 1, 0], &[0, 0, 0, 1]])));
        assert_eq!((zero.component, inf.component), (0, 2));
        // (I | tI): the weight-1 minors are P_{32} = -1 and P_{41} = 1.
        let normal = zero.normal.unwrap();
        let ones: Vec<String> = normal
            .labels()
            .iter()
            .zip(normal.coords())
            .filter(|(_, c)| !c.is_zero())
            .map(|(l, c)| format!("{l}:{c}"))
            .collect();
        assert_eq!(ones, ["(3,2):1", "(4,1):-1"]);
        assert_eq!(inf.normal, Some(normal));
        assert_eq!(orbit_curve_degree(&par, &x).unwrap(), 2);
    }

    #[test]
    fn fixed_points() {
        let par = Params::new(2, 2, 4).unwrap();
        let e = pt(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        assert_eq!(fixed_component(&par, &e).unwrap(), Some(0));
        let mixed = pt(&[&[1, 0, 0, 0], &[0, 0, 1, 0]]);
        assert_eq!(fixed_component(&par, &mixed).unwrap(), Some(1));
        assert_eq!(bb_class(&par, &mixed).unwrap(), (1, 1));
        assert!(is_fixed_symbolic(&par, &mixed).unwrap());
        assert_eq!(orbit_curve_degree(&par, &mixed), Err(Error::DegenerateOrbit));
        let lim = limit(&par, &mixed, Direction::ToZero).unwrap();
        assert_eq!(plucker(&lim.limit), plucker(&mixed));
        assert_eq!(lim.normal, None);
    }

    #[test]
    fn gm_act_rules() {
        let par = Params::new(3, 2, 5).unwrap();
        let mut s = Sampler::new(3, 0);
        let x = GrassPoint::new(s.matrix(2, 5)).unwrap();
        assert_eq!(gm_act(&par, &qi(1), &x).unwrap(), x);
        assert!(matches!(gm_act(&par, &qi(0), &x), Err(Error::InvalidParameter(_))));
        let t = q(-3, 7);
        let fc = FlowCurve::new(&par, &x).unwrap();
        let moved = gm_act(&par, &t, &x).unwrap();
        assert_eq!(ProjPoint::new(fc.labels().to_vec(), &fc.evaluate(&t)).unwrap(), plucker(&moved));
        let raw = raw_minors(x.matrix(), fc.labels());
        let raw_t = raw_minors(moved.matrix(), fc.labels());
        for ((l, a), b) in fc.labels().iter().zip(&raw).zip(&raw_t) {
            assert_eq!(b, &(a * num_traits::pow(t.clone(), l.weight(3))));
        }
    }

    #[test]
    fn generic_classes() {
        for (s, p, n) in [(2, 2, 4), (3, 2, 5), (4, 3, 7)] {
            let par = Params::new(s, p, n).unwrap();
            let mut rng = Sampler::new(11, n as u64);
            let x = GrassPoint::new(rng.matrix(p, n)).unwrap();
            assert_eq!(bb_class(&par, &x).unwrap(), (par.r(), 0));
            assert_eq!(fixed_component(&par, &x).unwrap(), None);
            assert!(!is_fixed_symbolic(&par, &x).unwrap());
        }
    }

    #[test]
    fn rank_one_e2_projection() {
        let par = Params::new(3, 2, 5).unwrap();
        let x = pt(&[&[1, 2, 0, 1, 1], &[0, 1, 3, 2, 2]]);
        assert_eq!(bb_class(&par, &x).unwrap(), (1, 0));
        assert_eq!(orbit_curve_degree(&par, &x).unwrap(), 1);
        assert!(matches!(orbit_boundary_data(&par, &x), Err(Error::StratifiedOrbit { kminus: 0, kplus: 1 })));
    }

    #[test]
    fn flow_json_is_keyed_by_weight() {
        let par = Params::new(2, 2, 4).unwrap();
        let x = pt(&[&[1, 0, 1, 0], &[0, 1, 0, 1]]);
        let v = serde_json::to_value(FlowCurve::new(&par, &x).unwrap()).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["0", "1", "2"]);
        assert_eq!(v["2"][5], "1/1");
    }
}
