use std::collections::HashMap;

use grassblow::exactpoly::{
    exact_divide, poly_det, substitute, t_degree_split, Monomial, MultiPoly, QMatrix, Rational, Var,
};
use grassblow::grassmann::{enum_index_set, enum_stratum, plucker, plucker_oracle, raw_minors, GrassPoint, Params};
use grassblow::sampling::Sampler;
use grassblow::torusflow::gm_act;
use num_bigint::BigInt;
use proptest::prelude::*;

const VARS: [Var; 4] = [Var::A(1, 1), Var::B(1, 2), Var::X(2, 1), Var::T];

fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((-5i64..=5, prop::collection::vec(0u32..3, VARS.len())), 0..5).prop_map(|ts| {
        MultiPoly::from_terms(
            ts.into_iter().map(|(c, es)| (Monomial::from_powers(VARS.iter().copied().zip(es)), BigInt::from(c))),
        )
    })
}

fn point() -> impl Strategy<Value = HashMap<Var, Rational>> {
    prop::collection::vec((-20i64..=20, 1i64..=7), VARS.len()).prop_map(|xs| {
        VARS.iter().copied().zip(xs.into_iter().map(|(a, b)| Rational::new(a.into(), b.into()))).collect()
    })
}

fn params() -> impl Strategy<Value = Params> {
    prop::sample::select(vec![(2, 2, 4), (3, 2, 5), (4, 3, 6), (3, 3, 6), (5, 2, 7)])
        .prop_map(|(s, p, n)| Params::new(s, p, n).unwrap())
}

proptest! {
    #[test]
    fn ring_axioms(f in poly(), g in poly(), h in poly()) {
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn evaluation_is_a_ring_map(f in poly(), g in poly(), x in point()) {
        let ev = |p: &MultiPoly| substitute(p, &x).unwrap();
        prop_assert_eq!(ev(&(&f * &g)), ev(&f) * ev(&g));
        prop_assert_eq!(ev(&(&f + &g)), ev(&f) + ev(&g));
    }

    #[test]
    fn exact_divide_recovers_the_cofactor(f in poly(), g in poly()) {
        prop_assume!(!g.is_zero());
        prop_assert_eq!(exact_divide(&(&f * &g), &g).unwrap(), f);
    }

    #[test]
    fn display_parses_back(f in poly()) {
        prop_assert_eq!(f.to_string().parse::<MultiPoly>().unwrap(), f);
    }

    #[test]
    fn t_split_sums_back(f in poly()) {
        let mut sum = MultiPoly::zero();
        for (e, part) in t_degree_split(&f, Var::T) {
            prop_assert_eq!(part.degree_in(Var::T), 0);
            sum = &sum + &part.mul_monomial(&Monomial::from_powers([(Var::T, e)]));
        }
        prop_assert_eq!(sum, f);
    }

    #[test]
    fn symbolic_det_matches_numeric(side in 1usize..=5, entries in prop::collection::vec(poly(), 25), x in point()) {
        let m: Vec<Vec<MultiPoly>> = (0..side).map(|i| entries[i * side..(i + 1) * side].to_vec()).collect();
        let numeric = QMatrix::from_fn(side, side, |i, j| substitute(&m[i][j], &x).unwrap());
        prop_assert_eq!(substitute(&poly_det(&m).unwrap(), &x).unwrap(), numeric.det().unwrap());
    }

    #[test]
    fn strata_partition_the_index_set(par in params()) {
        let mut all: Vec<_> = (0..=par.r()).flat_map(|k| enum_stratum(&par, k).unwrap()).collect();
        all.sort();
        let mut want = enum_index_set(&par);
        want.sort();
        prop_assert_eq!(all, want);
    }

    #[test]
    fn plucker_is_row_invariant_and_oracle_sound(par in params(), seed in any::<u64>()) {
        let mut rng = Sampler::new(seed, 0);
        let x = GrassPoint::new(rng.matrix(par.p(), par.n())).unwrap();
        let g = rng.matrix(par.p(), par.p());
        prop_assume!(g.rank() == par.p());
        let v = plucker(&x);
        prop_assert_eq!(plucker(&x.row_op(&g).unwrap()), v.clone());
        let y = plucker_oracle(&v).expect("plucker vectors are accepted");
        prop_assert_eq!(plucker(&y), v);
    }

    #[test]
    fn minors_scale_by_weight(par in params(), seed in any::<u64>(), t in (-9i64..=9).prop_filter("nonzero", |t| *t != 0)) {
        let mut rng = Sampler::new(seed, 1);
        let x = GrassPoint::new(rng.matrix(par.p(), par.n())).unwrap();
        let t = Rational::from_integer(t.into());
        let y = gm_act(&par, &t, &x).unwrap();
        for k in 0..=par.r() {
            let labels = enum_stratum(&par, k).unwrap();
            let scale = num_traits::pow(t.clone(), k);
            for (a, b) in raw_minors(x.matrix(), &labels).iter().zip(raw_minors(y.matrix(), &labels)) {
                prop_assert_eq!(a * &scale, b);
            }
        }
    }
}
