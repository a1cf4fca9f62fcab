use num_complex::Complex64;
use proptest::prelude::*;
use wp_geom::circle_fields::*;

fn field() -> impl Strategy<Value = FourierVectorField> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..24)
        .prop_map(|c| FourierVectorField::from_positive(c.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()))
}

fn b() -> impl Strategy<Value = PairingConstants> {
    (0.1f64..3.0).prop_map(|b| PairingConstants::new(b).unwrap())
}

proptest! {
    #[test]
    fn kahler_triple(v in field(), w in field(), k in b()) {
        let (jv, jw) = (complex_structure(&v), complex_structure(&w));
        let scale = (wp_pairing(&v, &v, &k) * wp_pairing(&w, &w, &k)).sqrt().max(1e-300);
        prop_assert_eq!(complex_structure(&jv), v.scale(-1.0));
        prop_assert!((wp_pairing(&v, &w, &k) + kk_form(&v, &jw, &k)).abs() <= 1e-12 * scale);
        prop_assert!((wp_pairing(&jv, &jw, &k) - wp_pairing(&v, &w, &k)).abs() <= 1e-12 * scale);
        prop_assert!((kk_form(&jv, &jw, &k) - kk_form(&v, &w, &k)).abs() <= 1e-12 * scale);
        prop_assert!((kk_form(&v, &w, &k) + kk_form(&w, &v, &k)).abs() <= 1e-12 * scale);
        prop_assert_eq!(kk_form(&v, &v, &k), 0.0);
    }

    #[test]
    fn ratio_bounds(v in field()) {
        let k = PairingConstants::default();
        if let Some(r) = wp_h32_ratio(&v, &k) {
            prop_assert!((0.75 - 1e-15..1.0).contains(&r));
        }
    }

    // The conjugate function on samples is J̃ under Θ = u(θ) ∂/∂θ.
    #[test]
    fn hilbert_is_complex_structure(v in field()) {
        let n = 64;
        let lhs = hilbert_transform_fn(&v.sample(n)).unwrap();
        let rhs = complex_structure(&v).sample(n);
        let err = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-12, "{}", err);
    }
}

#[test]
fn text_format() {
    let f = FourierVectorField::from_text("# modes\n2 1 0\n4 0 -0.5\n").unwrap();
    assert_eq!(f.bandlimit(), 4);
    assert_eq!(f.get(4), Complex64::new(0.0, -0.5));
    assert_eq!(f.get(-4), Complex64::new(0.0, 0.5));
    assert_eq!(f.get(3), Complex64::new(0.0, 0.0));
    assert!(FourierVectorField::from_text("1 1 0").is_err());
    assert!(FourierVectorField::from_text("2 1").is_err());
}

// Finite WP energy of |v_m| ~ m^{-α} needs Σ m³ m^{-2α} < ∞, i.e. α > 2:
// doubling the bandlimit adds a vanishing amount only above the threshold.
#[test]
fn convergence_threshold() {
    let k = PairingConstants::default();
    let energy = |alpha: f64, m: usize| {
        let v = FourierVectorField::from_positive((2..=m).map(|j| Complex64::new((j as f64).powf(-alpha), 0.0)).collect());
        wp_pairing(&v, &v, &k)
    };
    let growth = |alpha: f64| energy(alpha, 4096) - energy(alpha, 2048);
    assert!(growth(2.5) < 1e-2 * energy(2.5, 2048));
    assert!(growth(2.0) > 0.5);
    assert!(growth(1.5) > 100.0);
}

// Harmonic Beltrami differentials are fixed by the Ahlfors projection, so
// μ(z) is the oracle at every z.
#[test]
fn ahlfors_fixes_harmonic_differentials() {
    for (a, n, z) in [
        (Complex64::new(0.0, 1.0), 4, Complex64::new(0.0, 1.0)),
        (Complex64::new(0.0, 1.0), 4, Complex64::new(0.7, 0.5)),
        (Complex64::new(0.5, 2.0), 5, Complex64::new(-1.0, 1.5)),
    ] {
        let t = HarmonicTest::new(a, n).unwrap();
        let r = ahlfors_projection(|e| t.mu(e), t.decay(), z, AhlforsOptions::default()).unwrap();
        let exact = t.mu(z);
        assert!((r.value - exact).norm() <= r.error_estimate().max(1e-9), "{z}: {} vs {exact} (est {})", r.value, r.error_estimate());
        assert!(!r.flagged);
    }
    assert!(HarmonicTest::parse("(eta+i)^-4").is_ok());
    assert!(HarmonicTest::parse("(eta-i)^-4").is_err());
}
