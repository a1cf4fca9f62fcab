use proptest::prelude::*;
use wp_geom::cusp_model::{CuspPoint, ProductCuspPoint};
use wp_geom::funk_metrics::*;

fn square() -> ConvexPolytope {
    ConvexPolytope::cube(&[0.0, 0.0], &[1.0, 1.0]).unwrap()
}

#[test]
fn unit_square_examples() {
    let sq = square();
    // Horizontal chord with endpoints 0 and 1: F(x, y) = log((1 - x)/(1 - y)) for y > x.
    let (x, y) = ([0.25, 0.5], [0.5, 0.5]);
    assert!((funk_ray(&sq, &x, &y).unwrap() - (0.75f64 / 0.5).ln()).abs() < 1e-14);
    assert!((funk_sup(&sq, &x, &y).unwrap() - (0.75f64 / 0.5).ln()).abs() < 1e-14);
    // Hilbert distance is half the log cross-ratio.
    let h = hilbert(&sq, &x, &y).unwrap();
    let cross = (0.5 * 0.75) / (0.25 * 0.5);
    assert!((h - 0.5 * f64::ln(cross)).abs() < 1e-14);
    assert_eq!(funk_ray(&sq, &x, &x).unwrap(), 0.0);
}

#[test]
fn polytope_text_roundtrip() {
    let text = "# triangle\n1 0 1\n0 1 1\n-1 -1 1\n";
    let p = ConvexPolytope::from_text(text).unwrap();
    assert_eq!((p.dim(), p.len()), (2, 3));
    let q = ConvexPolytope::from_text(&p.to_text()).unwrap();
    assert_eq!(p.to_text(), q.to_text());
    assert!(p.contains_interior(p.interior_point()));
    assert!(ConvexPolytope::from_text("1 0\n1").is_err());
    // Empty interior.
    assert!(ConvexPolytope::new(vec![(vec![1.0], 0.0), (vec![-1.0], 0.0)]).is_err());
}

fn inside(sq: &ConvexPolytope, p: [f64; 2]) -> bool {
    sq.slacks(&p).iter().all(|&s| s > 1e-3)
}

fn pentagon() -> ConvexPolytope {
    let hs = (0..5)
        .map(|k| {
            let a = k as f64 * std::f64::consts::TAU / 5.0;
            (vec![a.cos(), a.sin()], 1.0)
        })
        .collect();
    ConvexPolytope::new(hs).unwrap()
}

proptest! {
    #[test]
    fn ray_equals_sup(x in prop::array::uniform2(-0.75f64..0.75), y in prop::array::uniform2(-0.75f64..0.75)) {
        let p = pentagon();
        prop_assume!(inside(&p, x) && inside(&p, y));
        let (r, s) = (funk_ray(&p, &x, &y).unwrap(), funk_sup(&p, &x, &y).unwrap());
        prop_assert!((r - s).abs() <= 1e-10, "{} vs {}", r, s);
    }

    #[test]
    fn funk_is_asymmetric_metric(x in prop::array::uniform2(-0.75f64..0.75), y in prop::array::uniform2(-0.75f64..0.75),
                                 z in prop::array::uniform2(-0.75f64..0.75)) {
        let p = pentagon();
        prop_assume!(inside(&p, x) && inside(&p, y) && inside(&p, z));
        let f = |a: &[f64; 2], b: &[f64; 2]| funk_sup(&p, a, b).unwrap();
        prop_assert!(f(&x, &y) >= 0.0);
        prop_assert!(f(&x, &z) <= f(&x, &y) + f(&y, &z) + 1e-12);
        let h = |a: &[f64; 2], b: &[f64; 2]| hilbert(&p, a, b).unwrap();
        prop_assert!((h(&x, &y) - h(&y, &x)).abs() <= 1e-12);
    }

    // Projective invariance under a homothety centred at an interior point.
    #[test]
    fn funk_is_invariant_under_homothety(x in prop::array::uniform2(-0.5f64..0.5), y in prop::array::uniform2(-0.5f64..0.5), s in 0.3f64..3.0) {
        let p = pentagon();
        prop_assume!(inside(&p, x) && inside(&p, y));
        let scaled = ConvexPolytope::new(p.halfspaces().map(|(a, b)| (a.to_vec(), b * s)).collect()).unwrap();
        let (xs, ys) = ([x[0] * s, x[1] * s], [y[0] * s, y[1] * s]);
        prop_assert!((funk_sup(&p, &x, &y).unwrap() - funk_sup(&scaled, &xs, &ys).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn wp_funk_model_triangle(u in prop::array::uniform6(0.01f64..2.0)) {
        let pt = |a: f64, b: f64| ProductCuspPoint::new(vec![CuspPoint::new(a, 0.0).unwrap(), CuspPoint::new(b, 1.0).unwrap()]).unwrap();
        let (x, y, z) = (pt(u[0], u[1]), pt(u[2], u[3]), pt(u[4], u[5]));
        let f = |a: &ProductCuspPoint, b: &ProductCuspPoint| wp_funk_model(a, b).unwrap();
        prop_assert!(f(&x, &z) <= f(&x, &y) + f(&y, &z) + 1e-12);
        prop_assert_eq!(f(&x, &x), 0.0);
    }
}

#[test]
fn wp_funk_model_rejects_stratum_points() {
    let a = ProductCuspPoint::new(vec![CuspPoint::stratum()]).unwrap();
    let b = ProductCuspPoint::new(vec![CuspPoint::new(0.5, 0.0).unwrap()]).unwrap();
    assert!(wp_funk_model(&a, &b).is_err());
}
