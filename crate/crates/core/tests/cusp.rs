use std::f64::consts::PI;

use proptest::prelude::*;
use wp_geom::cat0_engine::{glue, GeodesicSpace, GlueSet, ProductCuspSpace, Side};
use wp_geom::cusp_model::*;

fn params() -> ModelParams {
    ModelParams::default()
}

#[test]
fn paper_formulas() {
    // ℓ = 2π²/log(1/|t|); at |t| = 1/e this is 2π².
    assert_eq!(waist_length((-1.0f64).exp()).unwrap(), 2.0 * PI * PI);
    for u in [0.05, 0.2, 0.7, 1.0] {
        let kl = curvature(u, &params()).unwrap() * waist_length_from_u(u);
        assert!((kl + 3.0 / PI).abs() < 1e-14);
    }
    let t = 0.01f64;
    assert!((waist_length_from_u(u_from_t(t).unwrap()) - waist_length(t).unwrap()).abs() < 1e-12);
    assert_eq!(curvature(1.0, &ModelParams::new(1.0).unwrap()).unwrap(), -6.0);
}

#[test]
fn universal_half_angle_is_a_beta_value() {
    // Θ∞ = B(5/6, 1/2)/3, evaluated here from the Gamma-function identity
    // B(a, b) = Γ(a)Γ(b)/Γ(a+b) with Γ(1/2) = √π and tabulated Γ values.
    let gamma_5_6 = 1.128_787_029_908_125_9;
    let gamma_4_3 = 0.892_979_511_569_249_2;
    let beta = gamma_5_6 * PI.sqrt() / gamma_4_3;
    assert!((universal_half_angle() - beta / 3.0).abs() < 1e-14);
}

#[test]
fn density_formulas() {
    // Annulus density is symmetric under z ↦ t/z (the core geodesic is |z| = √t).
    let t = 0.05;
    let (z1, z2) = (0.1, t / 0.1);
    let (a, b) = (annulus_density(z1, t).unwrap() * z1, annulus_density(z2, t).unwrap() * z2);
    assert!((a - b).abs() < 1e-12 * a);
    assert!(annulus_density(0.01, t).is_err());
    // The cusp density is the t → 0 limit.
    let z = 0.3;
    let lim = cusp_density(z).unwrap();
    assert!((annulus_density(z, 1e-12).unwrap() - lim).abs() < 1e-2 * lim);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // Closed form against Newton shooting on the geodesic ODE.
    #[test]
    fn closed_form_distance_matches_shooting(u1 in 0.05f64..1.0, u2 in 0.05f64..1.0, dth in -0.4f64..0.4) {
        let (p, q) = (CuspPoint::new(u1, 0.0).unwrap(), CuspPoint::new(u2, dth).unwrap());
        let closed = cusp_distance(&p, &q, &params());
        if let Ok(shot) = shoot_distance(&p, &q, &params()) {
            prop_assert!((closed - shot.length).abs() <= 1e-6 * (1.0 + closed), "{} vs {}", closed, shot.length);
        } else {
            // Shooting is only attempted where the geodesic stays off the stratum.
            let through = c_of() * (u1 + u2);
            prop_assert!(closed <= through + 1e-12);
        }
    }

    #[test]
    fn distance_is_a_metric(u1 in 0.02f64..1.5, u2 in 0.02f64..1.5, u3 in 0.02f64..1.5,
                            t1 in -3.0f64..3.0, t2 in -3.0f64..3.0, t3 in -3.0f64..3.0) {
        let ps = [CuspPoint::new(u1, t1).unwrap(), CuspPoint::new(u2, t2).unwrap(), CuspPoint::new(u3, t3).unwrap()];
        let d = |i: usize, j: usize| cusp_distance(&ps[i], &ps[j], &params());
        prop_assert!((d(0, 1) - d(1, 0)).abs() <= 1e-10 * (1.0 + d(0, 1)));
        prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-9);
        // Never longer than the path through the stratum.
        prop_assert!(d(0, 1) <= c_of() * (u1 + u2) + 1e-9);
    }

    #[test]
    fn point_along_splits_length(u1 in 0.05f64..1.0, u2 in 0.05f64..1.0, dth in -3.0f64..3.0, l in 0.0f64..1.0) {
        let (p, q) = (CuspPoint::new(u1, 0.0).unwrap(), CuspPoint::new(u2, dth).unwrap());
        let d = cusp_distance(&p, &q, &params());
        let m = cusp_point_along(&p, &q, l, &params());
        let (a, b) = (cusp_distance(&p, &m, &params()), cusp_distance(&m, &q, &params()));
        prop_assert!((a - l * d).abs() <= 1e-7 * (1.0 + d), "{} vs {}", a, l * d);
        prop_assert!((b - (1.0 - l) * d).abs() <= 1e-7 * (1.0 + d));
    }
}

fn c_of() -> f64 {
    params().c()
}

#[test]
fn clairaut_is_conserved_along_ode() {
    let p = CuspPoint::new(0.6, 0.0).unwrap();
    let v = CuspTangent { radial: -0.3, angular: 0.8 };
    let path = geodesic(&p, &v, 20.0, 200, &params()).unwrap();
    let j0 = path.samples[0].clairaut(&params());
    for s in &path.samples {
        assert!((s.clairaut(&params()) - j0).abs() < 1e-9 * j0.abs());
        assert!((s.velocity.speed() - v.speed()).abs() < 1e-9);
    }
    assert!(path.to_csv().starts_with("t,u,theta,v_radial,v_angular\n"));
}

#[test]
fn radial_geodesic_reaches_stratum_at_cu() {
    for u in [0.05, 0.4, 1.0] {
        let p = CuspPoint::new(u, 1.0).unwrap();
        let d = integrated_radial_distance(&p, &params()).unwrap();
        assert!((d - distance_to_stratum(&p, &params())).abs() < 1e-9 * d);
    }
}

// A k = 2 product point against the independent 4D integration: the
// product geodesic is the pair of factor geodesics run at speeds d₁/d and d₂/d.
#[test]
fn product_geodesic_matches_factor_odes() {
    let x = ProductCuspPoint::new(vec![CuspPoint::new(0.5, 0.0).unwrap(), CuspPoint::new(0.8, 0.3).unwrap()]).unwrap();
    let y = ProductCuspPoint::new(vec![CuspPoint::new(0.7, 0.25).unwrap(), CuspPoint::new(0.4, -0.2).unwrap()]).unwrap();
    let d = product_distance(&x, &y, &params()).unwrap();
    let mut total = 0.0f64;
    for (a, b) in x.factors.iter().zip(&y.factors) {
        let shot = shoot_distance(a, b, &params()).unwrap();
        total = total.hypot(shot.length);
        let path = geodesic(a, &shot.direction, shot.length, 1, &params()).unwrap();
        let end = path.last().point;
        assert!((end.u - b.u).abs() < 1e-7 && (end.theta - b.theta).abs() < 1e-6);
    }
    assert!((d - total).abs() < 1e-6 * d);
    let mid = product_point_along(&x, &y, 0.5, &params()).unwrap();
    assert!((product_distance(&x, &mid, &params()).unwrap() - 0.5 * d).abs() < 1e-7 * d);
    let z = ProductCuspPoint::new(vec![CuspPoint::new(0.5, 0.0).unwrap()]).unwrap();
    assert!(product_distance(&x, &z, &params()).is_err());
}

// Reflection across the wall {u₀ = 0} of a k = 2 product: the glued distance
// across the two-parameter wall reproduces the factorwise formula
// hypot(c(u_p + u_q), d₁(p₁, q₁)).
#[test]
fn two_parameter_wall_glue() {
    let wall = |a: &[f64]| {
        ProductCuspPoint::new(vec![CuspPoint::stratum(), CuspPoint::new(a[0], a[1]).unwrap()]).unwrap()
    };
    let set = GlueSet::new(vec![(0.05, 1.5), (-1.0, 1.0)], wall, wall).unwrap();
    let space = glue(ProductCuspSpace::default(), ProductCuspSpace::default(), set).unwrap();
    let p = ProductCuspPoint::new(vec![CuspPoint::new(0.3, 0.1).unwrap(), CuspPoint::new(0.6, -0.2).unwrap()]).unwrap();
    let q = ProductCuspPoint::new(vec![CuspPoint::new(0.5, -0.4).unwrap(), CuspPoint::new(0.8, 0.3).unwrap()]).unwrap();
    let glued = space.distance(&Side::Left(p.clone()), &Side::Right(q.clone())).unwrap();
    let c = params().c();
    let expected = (c * (p.factors[0].u + q.factors[0].u)).hypot(cusp_distance(&p.factors[1], &q.factors[1], &params()));
    assert!((glued - expected).abs() < 1e-6 * expected, "{glued} vs {expected}");
}
