use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use wp_geom::coxeter_curves::*;
use wp_geom::cusp_model::{CuspPoint, ModelParams, ProductCuspPoint};
use wp_geom::torus_teich::{enumerate_classes, CurveClass};

/// The Tits representation of a right-angled Coxeter group: `B(e_s, e_s) = 1`,
/// `B(e_s, e_t) = 0` for commuting and `-1` for free pairs, `σ_s v = v - 2B(e_s, v) e_s`.
/// It is faithful and integral, so equal matrices decide the word problem exactly.
fn tits(m: &CoxeterMatrix, w: &Word) -> Vec<i64> {
    let n = m.rank();
    let b = |s: usize, t: usize| -> i64 {
        if s == t {
            1
        } else if m.commute(s, t) {
            0
        } else {
            -1
        }
    };
    let mut mat: Vec<i64> = (0..n * n).map(|k| i64::from(k / n == k % n)).collect();
    // Columns are images of basis vectors; apply generators right to left.
    for &s in w.0.iter().rev() {
        for col in 0..n {
            let coeff: i64 = (0..n).map(|i| b(s, i) * mat[i * n + col]).sum();
            mat[s * n + col] -= 2 * coeff;
        }
    }
    mat
}

fn words(gens: usize, max_len: usize) -> Vec<Word> {
    let mut all = vec![Word::identity()];
    let mut layer = vec![Word::identity()];
    for _ in 0..max_len {
        layer = layer.iter().flat_map(|w| (0..gens).map(move |s| w.concat(&Word(vec![s])))).collect();
        all.extend(layer.iter().cloned());
    }
    all
}

#[test]
fn normal_forms_decide_the_word_problem() {
    for commuting in [vec![], vec![(0, 1)], vec![(0, 1), (1, 2)], vec![(0, 1), (1, 2), (0, 2)]] {
        let m = CoxeterMatrix::right_angled(3, &commuting).unwrap();
        let mut by_matrix: BTreeMap<Vec<i64>, BTreeSet<Word>> = BTreeMap::new();
        let mut shortest: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
        for w in words(3, 6) {
            let r = reduce_word(&w, &m).unwrap();
            let key = tits(&m, &w);
            assert_eq!(key, tits(&m, &r), "{w} and its normal form {r} differ");
            by_matrix.entry(key.clone()).or_default().insert(r);
            let len = shortest.entry(key).or_insert(usize::MAX);
            *len = (*len).min(w.len());
        }
        for (key, forms) in &by_matrix {
            // One normal form per element, and it is geodesic.
            assert_eq!(forms.len(), 1);
            assert_eq!(forms.iter().next().unwrap().len(), shortest[key]);
        }
        // Growth matches the number of distinct elements per length.
        let en = enumerate_group(&m, 6).unwrap();
        let mut growth = vec![0usize; 7];
        for len in shortest.values() {
            growth[*len] += 1;
        }
        // Elements of length ≤ 3 are reached by words of length ≤ 6 together with
        // all their extensions; compare only where enumeration is complete.
        assert_eq!(&en.growth[..=3], &growth[..=3]);
        assert_eq!(en.elements.len(), en.growth.iter().sum::<usize>());
    }
}

#[test]
fn finite_and_infinite_groups() {
    let disjoint = CurveSystem::new(vec!["a".into(), "b".into(), "c".into()], vec![vec![0; 3]; 3]).unwrap();
    let en = enumerate_group(&coxeter_matrix(&disjoint), 12).unwrap();
    assert_eq!(en.order, Some(8));
    assert_eq!(en.growth, vec![1, 3, 3, 1]);
    // Free product of three Z/2: 1, 3, 6, 12, ...
    let free = CoxeterMatrix::right_angled(3, &[]).unwrap();
    let en = enumerate_group(&free, 5).unwrap();
    assert_eq!(en.growth, vec![1, 3, 6, 12, 24, 48]);
    assert_eq!(en.order, None);
    assert!(enumerate_group(&free, 40).is_err());
}

#[test]
fn curve_systems() {
    let classes = enumerate_classes(10);
    let m = coxeter_matrix(&CurveSystem::torus(&classes));
    for a in 0..m.rank() {
        assert_eq!(m.get(a, a), CoxeterEntry::Finite(1));
        for b in 0..m.rank() {
            if a != b {
                assert_eq!(m.get(a, b), CoxeterEntry::Infinite);
            }
        }
    }
    let g2 = CurveSystem::genus_two();
    let m = coxeter_matrix(&g2);
    assert!(m.is_right_angled());
    assert!(m.commute(0, 1) && m.commute(1, 2) && m.commute(0, 2));
    let text = "3\n0 1 0\n0 2 1\n1 2 0\n";
    let cs = CurveSystem::from_text(text).unwrap();
    assert_eq!(cs.intersection(0, 2), 1);
    // Asymmetric matrices are rejected.
    let (one, two, inf) = (CoxeterEntry::Finite(1), CoxeterEntry::Finite(2), CoxeterEntry::Infinite);
    assert!(CoxeterMatrix::new(vec![vec![one, two], vec![inf, one]]).is_err());
    // Two torus classes meeting once never commute.
    let pair = CurveSystem::torus(&[CurveClass::new(1, 0).unwrap(), CurveClass::new(1, 1).unwrap()]);
    assert_eq!(coxeter_matrix(&pair).get(0, 1), inf);
}

#[test]
fn word_parsing() {
    assert_eq!(Word::parse("s1,s2,s1").unwrap(), Word(vec![1, 2, 1]));
    assert_eq!(Word::parse("e").unwrap(), Word::identity());
    assert_eq!(Word(vec![0, 2]).to_string(), "s0,s2");
    assert!(Word::parse("s1,,x").is_err());
    let nonra = CoxeterMatrix::new(vec![
        vec![CoxeterEntry::Finite(1), CoxeterEntry::Finite(3)],
        vec![CoxeterEntry::Finite(3), CoxeterEntry::Finite(1)],
    ])
    .unwrap();
    assert!(reduce_word(&Word(vec![0, 1]), &nonra).is_err());
}

fn dev() -> Development {
    Development::new(CoxeterMatrix::right_angled(3, &[(0, 1), (1, 2)]).unwrap(), ModelParams::default()).unwrap()
}

fn y(sigma: &[usize]) -> ProductCuspPoint {
    ProductCuspPoint::new(
        (0..3).map(|j| if sigma.contains(&j) { CuspPoint::stratum() } else { CuspPoint::new(0.3 + 0.2 * j as f64, 0.1 * j as f64).unwrap() }).collect(),
    )
    .unwrap()
}

#[test]
fn development_identifications() {
    let d = dev();
    let p = DevelopmentPoint::new(Word::identity(), y(&[0, 1]));
    // Reflections fixing the face of y identify copies.
    assert!(d.dev_equal(&p, &p.act(&Word(vec![0]))).unwrap());
    assert!(d.dev_equal(&p, &p.act(&Word(vec![1, 0]))).unwrap());
    assert!(!d.dev_equal(&p, &p.act(&Word(vec![2]))).unwrap());
    // Non-simplex faces are rejected.
    assert!(d.dev_equal(&DevelopmentPoint::new(Word::identity(), y(&[0, 2])), &p).is_err());
}

#[test]
fn development_distances() {
    let d = dev();
    let params = ModelParams::default();
    let x = DevelopmentPoint::new(Word::identity(), y(&[]));
    // Reflection across one wall: twice the distance to the stratum of that factor.
    let sx = x.act(&Word(vec![0]));
    let expected = 2.0 * params.c() * x.y.factors[0].u;
    assert!((d.dev_distance(&x, &sx).unwrap() - expected).abs() < 1e-9 * expected);
    // Commuting reflections combine factorwise.
    let s01 = x.act(&Word(vec![0, 1]));
    let e2 = (2.0 * params.c() * x.y.factors[0].u).hypot(2.0 * params.c() * x.y.factors[1].u);
    assert!((d.dev_distance(&x, &s01).unwrap() - e2).abs() < 1e-9 * e2);
    assert_eq!(d.dev_distance(&x, &x).unwrap(), 0.0);
    // Copies separated by non-commuting letters are out of range.
    assert!(d.dev_distance(&x, &x.act(&Word(vec![0, 2]))).is_err());
}

proptest! {
    #[test]
    fn dev_equal_is_an_equivalence(gs in prop::collection::vec(prop::collection::vec(0usize..3, 0..4), 3),
                                   faces in prop::collection::vec(0usize..3, 3)) {
        let d = dev();
        let simplices: [&[usize]; 3] = [&[], &[0, 1], &[1]];
        let pts: Vec<DevelopmentPoint> = gs.iter().zip(&faces).map(|(g, &f)| DevelopmentPoint::new(Word(g.clone()), y(simplices[f]))).collect();
        let eq = |a: usize, b: usize| d.dev_equal(&pts[a], &pts[b]).unwrap();
        for a in 0..3 {
            prop_assert!(eq(a, a));
            for b in 0..3 {
                prop_assert_eq!(eq(a, b), eq(b, a));
                for c in 0..3 {
                    prop_assert!(!(eq(a, b) && eq(b, c)) || eq(a, c));
                }
            }
        }
    }

    #[test]
    fn reduction_is_idempotent_and_inverse_cancels(w in prop::collection::vec(0usize..4, 0..14)) {
        let m = CoxeterMatrix::right_angled(4, &[(0, 1), (2, 3), (1, 3)]).unwrap();
        let w = Word(w);
        let r = reduce_word(&w, &m).unwrap();
        prop_assert_eq!(reduce_word(&r, &m).unwrap(), r.clone());
        prop_assert!(reduce_word(&w.concat(&w.inverse()), &m).unwrap().is_empty());
        prop_assert_eq!((w.len() - r.len()) % 2, 0);
        prop_assert_eq!(tits(&m, &w), tits(&m, &r));
    }
}
