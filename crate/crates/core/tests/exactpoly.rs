use std::collections::HashMap;

use grassblow::exactpoly::{exact_divide, poly_minor, substitute, t_degree_split, MultiPoly, QMatrix, Var};
use grassblow::grassmann::{GrassPoint, Params};
use grassblow::millecrepes::{gamma_tau_symbolic, ChartIndex};
use grassblow::sampling::Sampler;
use grassblow::torusflow::gm_act_symbolic;

fn p(s: &str) -> MultiPoly {
    s.parse().unwrap()
}

fn g36() -> Vec<Vec<MultiPoly>> {
    let par = Params::new(3, 3, 6).unwrap();
    gamma_tau_symbolic(&par, &ChartIndex::new(&par, 3, vec![1, 2, 3], vec![1, 2, 3]).unwrap())
}

// The leading 3x3 minor of the G(3,6) example carries a11^3 a22^2 a33, not a11^2 a22 a33.
#[test]
fn g36_leading_minor() {
    let m = g36();
    let minor = poly_minor(&m, &[0, 1, 2], &[0, 1, 2]).unwrap();
    assert_eq!(minor, p("a[1,1]^3*a[2,2]^2*a[3,3]"));

    let mut rng = Sampler::new(7, 0);
    for _ in 0..20 {
        let vals: HashMap<Var, _> = m.iter().flatten().flat_map(|e| e.vars()).map(|v| (v, rng.nonzero())).collect();
        let numeric = QMatrix::from_fn(3, 3, |i, j| substitute(&m[i][j], &vals).unwrap());
        assert_eq!(substitute(&minor, &vals).unwrap(), numeric.det().unwrap());
    }
}

#[test]
fn weight_one_minor_divides_to_its_sign() {
    // standard upper chart of (3,3,6): pivots at (3,3), (2,2), (1,1)
    let par = Params::new(3, 3, 6).unwrap();
    let tau = ChartIndex::new(&par, 3, vec![3, 2, 1], vec![3, 2, 1]).unwrap();
    let m = gamma_tau_symbolic(&par, &tau);
    // I_1 = (4,3,2), predicted monomial a33^2 a22, sign (-1)^{1*2}
    let minor = poly_minor(&m, &[0, 1, 2], &[1, 2, 3]).unwrap();
    assert_eq!(exact_divide(&minor, &p("a[3,3]^2*a[2,2]")).unwrap(), MultiPoly::one());
}

#[test]
fn scaled_g24_top_minor_is_pure_t_squared() {
    let par = Params::new(2, 2, 4).unwrap();
    let x = GrassPoint::new(QMatrix::from_ints(&[&[1, 0, 1, 0], &[0, 1, 0, 1]])).unwrap();
    let m = gm_act_symbolic(&par, &x).unwrap();
    let minor = poly_minor(&m, &[0, 1], &[2, 3]).unwrap();
    assert_eq!(t_degree_split(&minor, Var::T), vec![(2, MultiPoly::one())]);
}

#[test]
fn divide_failures() {
    assert!(exact_divide(&p("a[1,1]*b[1,2] + 1"), &p("a[1,1]")).is_err());
    assert!(exact_divide(&p("a[1,1]"), &MultiPoly::zero()).is_err());
    assert_eq!(exact_divide(&p("x[1,1]^2 - x[1,2]^2"), &p("x[1,1] + x[1,2]")).unwrap(), p("x[1,1] - x[1,2]"));
}
