use grassblow::exactpoly::{q, qi, Rational};
use grassblow::grassmann::{GrassPoint, Params};
use grassblow::millecrepes::{enum_chart_indices, j_tau, j_tau_inverse, kausz_total_map, MCCoords};
use grassblow::sampling::Sampler;
use grassblow::suites::random_point;
use grassblow::torusflow::*;
use num_traits::Zero;

fn params(s: usize, p: usize, n: usize) -> Params {
    Params::new(s, p, n).unwrap()
}

#[test]
fn retraction_forgets_the_first_lower_pivot() {
    let par = params(3, 2, 5);
    let mut rng = Sampler::new(1, 0);
    for tau in enum_chart_indices(&par, 0).unwrap() {
        let c = MCCoords::random(&par, &tau, &mut rng);
        let d = c.with(tau.pivot_var(1), rng.nonzero()).unwrap();
        assert_eq!(retraction_total(&j_tau(&c)), retraction_total(&j_tau(&d)), "{tau}");
    }
}

#[test]
fn retraction_is_injective_on_the_divisor() {
    let par = params(3, 2, 5);
    let mut rng = Sampler::new(2, 0);
    let charts = enum_chart_indices(&par, 0).unwrap();
    for tau in &charts {
        let c = MCCoords::random(&par, tau, &mut rng).with(tau.pivot_var(1), Rational::zero()).unwrap();
        let m = j_tau(&c);
        assert_eq!(j_tau_inverse(&par, tau, &m).unwrap(), c);
        // another divisor point with different strata gives different output
        let d = MCCoords::random(&par, tau, &mut rng).with(tau.pivot_var(1), Rational::zero()).unwrap();
        assert_ne!(retraction_total(&m), retraction_total(&j_tau(&d)));
    }
}

#[test]
fn fibers_are_orbit_closures() {
    let par = params(3, 2, 5);
    let mut rng = Sampler::new(3, 0);
    for _ in 0..20 {
        let x = random_point(&mut rng, 2, 5).unwrap();
        let y = random_point(&mut rng, 2, 5).unwrap();
        let tx = gm_act(&par, &rng.nonzero(), &x).unwrap();
        assert!(same_fiber(&par, &x, &tx).unwrap());
        assert_eq!(
            retraction_total(&kausz_total_map(&par, &x).unwrap()),
            retraction_total(&kausz_total_map(&par, &tx).unwrap())
        );
        assert!(!same_fiber(&par, &x, &y).unwrap());
        // the limit is a fixed point, outside the domain of the mixed strata
        let lim = limit(&par, &x, Direction::ToZero).unwrap().limit;
        assert!(same_fiber(&par, &x, &lim).is_err());
    }
}

#[test]
fn boundary_data_is_orbit_invariant() {
    let par = params(2, 2, 4);
    let mut rng = Sampler::new(4, 0);
    for _ in 0..20 {
        let x = random_point(&mut rng, 2, 4).unwrap();
        let tx = gm_act(&par, &q(-7, 3), &x).unwrap();
        let (a, b) = orbit_boundary_data(&par, &x).unwrap();
        let (c, d) = orbit_boundary_data(&par, &tx).unwrap();
        assert_eq!(grassblow::grassmann::plucker(&a.limit), grassblow::grassmann::plucker(&c.limit));
        assert_eq!(a.normal, c.normal);
        assert_eq!(b.normal, d.normal);
        assert_eq!((a.component, b.component), (0, 2));
    }
}

#[test]
fn degree_drops_on_structured_points() {
    let par = params(3, 2, 5);
    // E2 block of rank 1: the flow reaches only weight 1
    let x = GrassPoint::new(grassblow::exactpoly::QMatrix::from_ints(&[&[1, 2, 0, 1, 1], &[0, 1, 3, 2, 2]])).unwrap();
    assert_eq!(bb_class(&par, &x).unwrap(), (1, 0));
    assert_eq!(orbit_curve_degree(&par, &x).unwrap(), 1);
    assert!(orbit_boundary_data(&par, &x).is_err());
    let fixed =
        GrassPoint::new(grassblow::exactpoly::QMatrix::from_ints(&[&[1, 0, 0, 0, 0], &[0, 0, 0, 1, 0]])).unwrap();
    assert_eq!(fixed_component(&par, &fixed).unwrap(), Some(1));
    assert!(orbit_curve_degree(&par, &fixed).is_err());
    assert_eq!(gm_act(&par, &qi(1), &x).unwrap(), x);
}
