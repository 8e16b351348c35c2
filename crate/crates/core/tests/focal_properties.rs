mod common;

use common::{family, library, mixed_partial};
use proptest::prelude::*;
use secant_dyn::extrapolate::Schedule;
use secant_dyn::focal::{curve_point, deriv_n_at_pair, deriv_q_at_pair, PairDerivatives};
use secant_dyn::{
    curvature_to_landing, focal_points, g_d, landing_to_curvature, mixed_focal_landing, numeric_curve_limit,
    CurveSpec, FocalKind, LandingMap, PlanePoint, Polynomial,
};

const ONE: PlanePoint = PlanePoint { x: 1.0, y: 1.0 };

fn landing_map(p: &Polynomial, alpha: f64) -> LandingMap {
    LandingMap::new(p.find_root(alpha).unwrap()).unwrap()
}

#[test]
fn classification_matches_multiplicities() {
    for p in library() {
        let fps = focal_points(&p);
        let n = p.roots().len();
        let multiple = p.roots().iter().filter(|r| r.multiplicity() >= 2).count();
        assert_eq!(fps.len(), n * (n - 1) + multiple);
        for fp in fps {
            let (i, j) = fp.roots;
            let (ri, rj) = (&p.roots()[i], &p.roots()[j]);
            let (nv, dv) = p.n_d(fp.location.x, fp.location.y);
            assert!(nv.abs() <= 1e-10 && dv.abs() <= 1e-10, "{p} {fp:?}");
            assert_eq!(fp.prefocal_x, fp.location.y);
            if i == j {
                // gradients vanish for d >= 3 and are parallel for d = 2
                assert_eq!(fp.kind, FocalKind::NonSimple, "{p} {fp:?}");
            } else if ri.is_simple() && rj.is_simple() {
                assert_eq!(fp.kind, FocalKind::Simple, "{p} {fp:?}");
            }
        }
    }
}

#[test]
fn focal_examples() {
    let fps = focal_points(&family(2));
    assert_eq!(fps.len(), 7);
    let diag: Vec<_> = fps.iter().filter(|f| f.location.x == f.location.y).collect();
    assert_eq!(diag.len(), 1);
    assert_eq!(diag[0].location, ONE);
    assert_eq!(diag[0].kind, FocalKind::NonSimple);

    let q = Polynomial::from_coeffs(&[-1.0, 0.0, 1.0]).unwrap();
    let fps = focal_points(&q);
    let mut locs: Vec<_> = fps.iter().map(|f| (f.location.x, f.location.y)).collect();
    locs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(locs, vec![(-1.0, 1.0), (1.0, -1.0)]);
    assert!(fps.iter().all(|f| f.kind == FocalKind::Simple));

    let cube = Polynomial::from_factored(&[(0.0, 3)], &[]).unwrap();
    let fps = focal_points(&cube);
    assert_eq!(fps.len(), 1);
    assert_eq!(fps[0].kind, FocalKind::NonSimple);
    assert_eq!(fps[0].grad_n, (0.0, 0.0));
    assert_eq!(fps[0].grad_d, (0.0, 0.0));
}

#[test]
fn odd_multiplicity_lands_on_the_fixed_point() {
    let s = Schedule::default();
    for d in [3, 5] {
        let p = family(d);
        for m in [-2.0, -1.0, 0.0, 1.0, 3.0] {
            let lim = numeric_curve_limit(&p, &CurveSpec::new(ONE, m, 0.0), &s).unwrap();
            assert!(lim.point.dist(ONE) <= 1e-4, "d={d} m={m}: {lim:?}");
        }
    }
}

#[test]
fn even_multiplicity_generic_slope_lands_on_the_fixed_point() {
    let s = Schedule::default();
    for d in [2, 4] {
        let p = family(d);
        for m in [-2.0, -0.5, 0.0, 1.0, 3.0] {
            for kappa in [0.0, 2.0] {
                let lim = numeric_curve_limit(&p, &CurveSpec::new(ONE, m, kappa), &s).unwrap();
                assert!(lim.point.dist(ONE) <= 1e-4, "d={d} m={m}: {lim:?}");
            }
        }
    }
}

#[test]
fn even_multiplicity_slope_minus_one_follows_landing_map() {
    let s = Schedule::default();
    for d in [2, 4] {
        let p = family(d);
        let lm = landing_map(&p, 1.0);
        for kappa in [-3.0, -0.5, 0.0, 1.0, 4.0] {
            let want = curvature_to_landing(&lm, kappa).unwrap();
            let got = numeric_curve_limit(&p, &CurveSpec::new(ONE, -1.0, kappa), &s).unwrap();
            assert_eq!(got.point.x, 1.0);
            assert!(
                (got.point.y - want).abs() <= 1e-4,
                "d={d} κ={kappa}: {} vs {want}",
                got.point.y
            );
        }
    }
}

#[test]
fn landing_examples() {
    let p = family(2);
    let lm = landing_map(&p, 1.0);
    assert_eq!((lm.lambda_d, lm.lambda_d1), (3.0, 4.0));
    let y0 = curvature_to_landing(&lm, 0.0).unwrap();
    assert!((y0 - 5.0 / 11.0).abs() < 1e-15);
    assert!(landing_to_curvature(&lm, 5.0 / 11.0).unwrap().abs() < 1e-12);
    // κ = -1 gives α - λ_d / λ_{d+1}
    assert!((curvature_to_landing(&lm, -1.0).unwrap() - 0.25).abs() < 1e-15);
    let far = curvature_to_landing(&lm, 1e12).unwrap();
    assert!((far - 1.0).abs() < 1e-9);
    assert!(curvature_to_landing(&lm, lm.singular_curvature()).is_err());
    assert!(landing_to_curvature(&lm, 1.0).is_err());
    let odd = landing_map(&family(3), 1.0);
    assert!(curvature_to_landing(&odd, 0.0).is_err());
}

#[test]
fn landing_is_monotone_on_each_side_of_the_pole() {
    for d in [2, 4, 6] {
        let p = family(d);
        let lm = landing_map(&p, 1.0);
        let k0 = lm.singular_curvature();
        for side in [-1.0, 1.0] {
            let ys: Vec<f64> = (1..400)
                .map(|i| k0 + side * 0.05 * i as f64)
                .map(|k| curvature_to_landing(&lm, k).unwrap())
                .collect();
            let inc = ys.windows(2).all(|w| w[1] > w[0]);
            let dec = ys.windows(2).all(|w| w[1] < w[0]);
            assert!(inc || dec, "d={d} side {side}");
        }
    }
}

#[test]
fn mixed_landing_matches_numeric_limit() {
    let p = Polynomial::from_factored(&[(0.0, 1), (1.0, 2)], &[]).unwrap();
    let s = Schedule::default();
    let base = PlanePoint::new(1.0, 0.0);
    for kappa in [0.5, 1.0, 3.0] {
        let closed = mixed_focal_landing(&p, 1.0, 0.0, kappa).unwrap();
        let numeric = numeric_curve_limit(&p, &CurveSpec::new(base, 0.0, kappa), &s).unwrap();
        assert!(
            closed.dist(numeric.point) <= 1e-4,
            "κ={kappa}: {closed:?} vs {numeric:?}"
        );
    }
    assert_eq!(
        mixed_focal_landing(&p, 1.0, 0.0, 1.0).unwrap(),
        PlanePoint::new(0.0, -1.0)
    );
    assert!(mixed_focal_landing(&p, 1.0, 0.0, 2.0).is_err());
    // closed form is limited to double roots
    assert!(mixed_focal_landing(&family(4), 1.0, 0.0, 1.0).is_err());
}

#[test]
fn pair_recursions_match_finite_differences() {
    for p in library() {
        let roots: Vec<f64> = p.roots().iter().map(|r| r.alpha()).collect();
        for &a in &roots {
            for &b in &roots {
                if a == b {
                    continue;
                }
                let pd = PairDerivatives::new(&p, a, b, 4).unwrap();
                for m in 0..=4 {
                    for l in 0..=m {
                        let fq = mixed_partial(&|x, y| p.q(x, y), a, b, m, l);
                        let fnn = mixed_partial(&|x, y| p.n_d(x, y).0, a, b, m, l);
                        let tol = |v: f64| 1e-6 * v.abs().max(1.0);
                        assert!(
                            (pd.q(m, l) - fq).abs() <= tol(fq),
                            "{p} q[{m}][{l}] at ({a},{b}): {} vs {fq}",
                            pd.q(m, l)
                        );
                        assert!(
                            (pd.n(m, l) - fnn).abs() <= tol(fnn),
                            "{p} N[{m}][{l}] at ({a},{b}): {} vs {fnn}",
                            pd.n(m, l)
                        );
                        assert_eq!(deriv_q_at_pair(&p, a, b, m, l).unwrap(), pd.q(m, l));
                        assert_eq!(deriv_n_at_pair(&p, a, b, m, l).unwrap(), pd.n(m, l));
                    }
                }
            }
        }
    }
}

#[test]
fn curve_point_examples() {
    let base = PlanePoint::new(0.3, -0.7);
    let c = CurveSpec::new(base, 0.0, 1.0);
    assert_eq!(curve_point(&c, 0.0), base);
    let pt = curve_point(&c, 0.1);
    assert!((pt.x - (0.3 + 0.105_170_833_333_333_33)).abs() < 1e-15);
    assert!((pt.y - (-0.7 + 0.005)).abs() < 1e-15);
    let sym = CurveSpec {
        torsion: 1.0,
        sigma: 1.0,
        ..CurveSpec::new(base, 1.0, 1.0)
    };
    for t in [0.01, 0.2, -0.3] {
        let (xi, mu) = sym.offsets(t);
        assert_eq!(xi, mu);
    }
}

#[test]
fn g_d_examples() {
    for d in 2..=5 {
        assert_eq!(g_d(1.0, d), d as f64);
    }
    assert_eq!(g_d(-1.0, 2), 0.0);
    assert_eq!(g_d(-1.0, 3), 1.0);
}

proptest! {
    #[test]
    fn g_d_positive_for_odd_d(m in -10.0..10.0f64, half in 1usize..=4) {
        let d = 2 * half + 1;
        prop_assert!(g_d(m, d) > 0.0);
    }

    #[test]
    fn landing_round_trip(kappa in -50.0..50.0f64, d in prop::sample::select(vec![2usize, 4, 6])) {
        let p = family(d);
        let lm = landing_map(&p, 1.0);
        prop_assume!((kappa - lm.singular_curvature()).abs() > 1e-3);
        let y = curvature_to_landing(&lm, kappa).unwrap();
        let back = landing_to_curvature(&lm, y).unwrap();
        prop_assert!((back - kappa).abs() <= 1e-12 * kappa.abs().max(1.0), "{kappa} -> {y} -> {back}");
    }
}
