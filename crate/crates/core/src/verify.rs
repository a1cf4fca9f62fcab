//! The acceptance suite: thirteen numbered criteria, each a list of measured
//! checks against expected values. Shared by the `wp-geom verify` command and
//! the `acceptance` test target.
//!
//! Every criterion draws its randomness from `SplitMix64::stream(seed, id)`, so
//! a report depends only on the seed. Timings are kept out of the serialized
//! report for the same reason.

use std::f64::consts::{LN_2, PI};
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::cat0_engine::{
    cat0_sample, fr_diagnostic, glue, CuspSpace, Euclidean, GlueSet, GluedSpace, HyperbolicPlane, ProductCuspSpace,
    Side, SlackReport,
};
use crate::circle_fields::{
    ahlfors_projection, complex_structure, hilbert_transform_fn, kk_form, wp_h32_ratio, wp_pairing,
    AhlforsOptions, FourierVectorField, HarmonicTest, PairingConstants,
};
use crate::coxeter_curves::{
    coxeter_matrix, enumerate_group, reduce_word, CoxeterEntry, CoxeterMatrix, CurveSystem, Development,
    DevelopmentPoint, Word,
};
use crate::cusp_model::{
    curvature, distance_to_stratum, integrated_radial_distance, waist_length, waist_length_from_u, CuspPoint,
    ModelParams, ProductCuspPoint,
};
use crate::error::{contract, Result};
use crate::funk_metrics::{funk_ray, funk_sup, wp_funk_model, ConvexPolytope};
use crate::harmonic_energy::{affine_energy, dbar_derivatives};
use crate::rng::SplitMix64;
use crate::tensor_core::field::{conformal_adjoint, lie_derivative_flat};
use crate::tensor_core::{l2_decompose, lichnerowicz, trace_and_divergence, Metric2, SymTensor2, TensorField};
use crate::torus_teich::{
    enumerate_classes, estimate_curvature, teich_distance_ext, wp_geodesic, wp_geodesic_ode, wp_velocity,
    TangentTT, TorusPoint,
};

/// How a measured value is compared with its expected value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `|value - expected| ≤ tolerance`
    Within,
    /// `value ≥ expected - tolerance`
    AtLeast,
    /// `value ≤ expected + tolerance`
    AtMost,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, expected: f64, tolerance: f64, relation: Relation) -> Self {
        let pass = match relation {
            Relation::Within => (value - expected).abs() <= tolerance,
            Relation::AtLeast => value >= expected - tolerance,
            Relation::AtMost => value <= expected + tolerance,
        };
        Self { name: name.into(), value, expected, tolerance, relation, pass }
    }

    fn within(name: &str, value: f64, expected: f64, tol: f64) -> Self {
        Self::new(name, value, expected, tol, Relation::Within)
    }

    fn at_most(name: &str, value: f64, bound: f64) -> Self {
        Self::new(name, value, 0.0, bound, Relation::AtMost)
    }

    /// `value ≥ bound` for a bound of the form `-tolerance`.
    fn at_least(name: &str, value: f64, bound: f64) -> Self {
        Self::new(name, value, 0.0, -bound, Relation::AtLeast)
    }

    fn strict_positive(mut self) -> Self {
        self.pass = self.value > 0.0;
        self
    }

    fn strictly_below(mut self, bound: f64) -> Self {
        self.pass = self.value < bound;
        self
    }

    /// A count that must be zero.
    fn none(name: &str, count: usize) -> Self {
        Self::new(name, count as f64, 0.0, 0.0, Relation::Within)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip)]
    pub seconds: f64,
    #[serde(skip)]
    pub budget_seconds: f64,
}

impl CriterionReport {
    pub fn within_budget(&self) -> bool {
        self.seconds < self.budget_seconds
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub seed: u64,
    pub criteria: Vec<CriterionReport>,
    pub pass: bool,
}

/// `(id, title, runtime budget in seconds)`.
pub const CRITERIA: [(u8, &str, f64); 13] = [
    (1, "dbar-energy Hessian", 1.0),
    (2, "energy convexity", 5.0),
    (3, "torus WP curvature", 5.0),
    (4, "geodesic cross-check", 5.0),
    (5, "Teichmuller distance", 10.0),
    (6, "L2 decomposition", 10.0),
    (7, "cusp model", 5.0),
    (8, "CAT(0) comparison", 60.0),
    (9, "Funk equivalence", 30.0),
    (10, "Coxeter word calculus", 10.0),
    (11, "circle fields", 5.0),
    (12, "Ahlfors projection", 60.0),
    (13, "FR diagnostics", 5.0),
];

/// Runs one criterion.
pub fn run_criterion(id: u8, seed: u64) -> Result<CriterionReport> {
    let &(_, title, budget) = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .ok_or_else(|| crate::GeomError::Contract(format!("no criterion {id}")))?;
    let mut rng = SplitMix64::stream(seed, id as u64);
    let start = Instant::now();
    let checks = match id {
        1 => dbar_hessian(&mut rng)?,
        2 => energy_convexity(&mut rng)?,
        3 => torus_curvature(&mut rng)?,
        4 => geodesic_cross_check(&mut rng)?,
        5 => teichmuller(&mut rng)?,
        6 => decomposition(&mut rng)?,
        7 => cusp()?,
        8 => cat0(seed)?,
        9 => funk(&mut rng)?,
        10 => coxeter(&mut rng)?,
        11 => circle(&mut rng)?,
        12 => ahlfors()?,
        13 => fr()?,
        _ => return contract(format!("no criterion {id}")),
    };
    let seconds = start.elapsed().as_secs_f64();
    let pass = checks.iter().all(|c| c.pass);
    Ok(CriterionReport { id, title, checks, pass, seconds, budget_seconds: budget })
}

/// Runs the given criteria in order.
pub fn run_suite(ids: &[u8], seed: u64) -> Result<RunReport> {
    let criteria = ids.iter().map(|&id| run_criterion(id, seed)).collect::<Result<Vec<_>>>()?;
    let pass = criteria.iter().all(|c| c.pass);
    Ok(RunReport { seed, criteria, pass })
}

fn random_point(rng: &mut SplitMix64) -> Result<TorusPoint> {
    TorusPoint::from_tau(Complex64::new(rng.range(-0.5, 0.5), rng.range(0.6, 2.0)))
}

fn unit_direction(rng: &mut SplitMix64, base: TorusPoint) -> TangentTT {
    let v = TangentTT::from_components(base, rng.normal(), rng.normal());
    v.scaled(1.0 / v.norm())
}

fn dbar_hessian(rng: &mut SplitMix64) -> Result<Vec<Check>> {
    let base = TorusPoint::from_tau(Complex64::new(0.0, 1.0))?;
    let mut worst = 0.5f64;
    for _ in 0..20 {
        let (_, second) = dbar_derivatives(&unit_direction(rng, base), 1e-3)?;
        if (second - 0.5).abs() > (worst - 0.5).abs() {
            worst = second;
        }
    }
    Ok(vec![Check::within("worst E_dbar'' over 20 unit directions", worst, 0.5, 1e-6)])
}

fn energy_convexity(rng: &mut SplitMix64) -> Result<Vec<Check>> {
    let mut min_second = f64::INFINITY;
    let n = 201;
    let dt = 2.0 / (n - 1) as f64;
    for _ in 0..100 {
        // The reference metric is independent of the geodesic.
        let g0 = random_point(rng)?;
        let base = random_point(rng)?;
        let v = unit_direction(rng, base).scaled(rng.range(0.2, 1.5));
        let e: Vec<f64> = (0..n).map(|k| affine_energy(&g0, &wp_geodesic(&v, -1.0 + k as f64 * dt))).collect();
        for w in e.windows(3) {
            min_second = min_second.min((w[0] - 2.0 * w[1] + w[2]) / (dt * dt));
        }
    }
    Ok(vec![Check::new("min interior E'' over 100 geodesics", min_second, 0.0, 0.0, Relation::AtLeast)
        .strict_positive()])
}

fn torus_curvature(rng: &mut SplitMix64) -> Result<Vec<Check>> {
    let mut worst = -0.5;
    for _ in 0..20 {
        let tau = random_point(rng)?.tau();
        let k = estimate_curvature(tau, 1e-2)?.value;
        if (k + 0.5).abs() > (worst + 0.5_f64).abs() {
            worst = k;
        }
    }
    Ok(vec![Check::within("worst curvature estimate over 20 points", worst, -0.5, 1e-3)])
}

fn geodesic_cross_check(rng: &mut SplitMix64) -> Result<Vec<Check>> {
    let (mut dev, mut trace) = (0.0f64, 0.0f64);
    for _ in 0..10 {
        let base = random_point(rng)?;
        let v = unit_direction(rng, base).scaled(rng.range(0.2, 1.5));
        for (t, g) in wp_geodesic_ode(&v, 1.0, 1e-3)? {
            dev = dev.max((g.tensor() - wp_geodesic(&v, t).metric().tensor()).max_abs());
        }
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            let g = wp_geodesic(&v, t).metric();
            let gd = wp_velocity(&v, t);
            let h = 1e-4;
            let gdd = (wp_velocity(&v, t + h) - wp_velocity(&v, t - h)) * (0.5 / h);
            let lhs = gdd.trace_wrt(&g);
            let rhs = gd.norm_wrt(&g).powi(2);
            trace = trace.max((lhs - rhs).abs() / rhs.max(1.0));
        }
    }
    Ok(vec![
        Check::at_most("max |G_ode - G_closed| on [0,1]", dev, 1e-6),
        Check::at_most("max relative |Tr_G G'' - |G'|^2|", trace, 1e-6),
    ])
}

fn teichmuller(rng: &mut SplitMix64) -> Result<Vec<Check>> {
    let (a, b) = (TorusPoint::from_tau(Complex64::new(0.0, 1.0))?, TorusPoint::from_tau(Complex64::new(0.0, 2.0))?);
    let d = teich_distance_ext(&a, &b, 50)?.value;
    let mut asym = 0.0f64;
    for _ in 0..1000 {
        let (p, q) = (random_point(rng)?, random_point(rng)?);
        let (pq, qp) = (teich_distance_ext(&p, &q, 50)?.value, teich_distance_ext(&q, &p, 50)?.value);
        asym = asym.max((pq - qp).abs());
    }
    Ok(vec![
        Check::within("d_T(i, 2i), cutoff 50", d, 0.5 * LN_2, 1e-12),
        Check::at_most("max |d_T(a,b) - d_T(b,a)| over 1000 pairs", asym, 1e-12),
    ])
}

fn random_tensor_field(rng: &mut SplitMix64, n: usize) -> Result<TensorField> {
    let modes: Vec<(f64, f64, f64, [f64; 3])> = (0..12)
        .map(|_| {
            let (k1, k2) = (rng.int_range(-6, 6) as f64, rng.int_range(-6, 6) as f64);
            (k1, k2, rng.range(0.0, 2.0 * PI), [rng.normal(), rng.normal(), rng.normal()])
        })
        .collect();
    let shift = SymTensor2 { h11: rng.normal(), h12: rng.normal(), h22: rng.normal() };
    TensorField::from_fn(n, move |x, y| {
        let mut t = shift;
        for (k1, k2, ph, a) in &modes {
            let s = (2.0 * PI * (k1 * x + k2 * y) + ph).cos();
            t += SymTensor2 { h11: a[0] * s, h12: a[1] * s, h22: a[2] * s };
        }
        t
    })
}

fn decomposition(rng: &mut SplitMix64) -> Result<Vec<Check>> {
    let h = random_tensor_field(rng, 64)?;
    let dec = l2_decompose(&h)?;
    let hn = h.norm();
    let recon = h.sub(&dec.reassemble())?.norm() / hn;
    let parts = dec.parts();
    let mut ortho = 0.0f64;
    for i in 0..4 {
        for j in i + 1..4 {
            ortho = ortho.max(parts[i].inner(&parts[j])?.abs() / (hn * hn));
        }
    }
    let flat = Metric2::diag(1.0, 1.0)?;
    let (_, div) = trace_and_divergence(&conformal_adjoint(&dec.potential), &flat);
    let lich = lichnerowicz(&lie_derivative_flat(&dec.vector));
    Ok(vec![
        Check::at_most("relative reconstruction error", recon, 1e-10),
        Check::at_most("max relative pairwise inner product", ortho, 1e-10),
        Check::at_most("|div L*f| / |h|", div.norm() / hn, 1e-10),
        Check::at_most("|Lichnerowicz(L_X g)| / |h|", lich.norm() / hn, 1e-10),
    ])
}

fn cusp() -> Result<Vec<Check>> {
    let params = ModelParams::default();
    let mut kl = 0.0f64;
    for k in 0..=40 {
        let u = 0.05 + 0.95 * k as f64 / 40.0;
        let v = curvature(u, &params)? * waist_length_from_u(u);
        kl = kl.max((v + 3.0 / PI).abs() / (3.0 / PI));
    }
    let mut radial = 0.0f64;
    for u in [0.05, 0.1, 0.3, 0.6, 1.0] {
        let p = CuspPoint::new(u, 0.7)?;
        let d = distance_to_stratum(&p, &params);
        radial = radial.max((integrated_radial_distance(&p, &params)? - d).abs() / d);
    }
    let waist = waist_length((-1.0f64).exp())?;
    Ok(vec![
        Check::at_most("max relative |K l + 3/pi| on u in [0.05, 1]", kl, 1e-8),
        Check::at_most("max relative |d_stratum - integrated radial|", radial, 1e-6),
        Check::within("waist length at |t| = 1/e", waist, 2.0 * PI * PI, 1e-12),
    ])
}

/// The spaces sampled by the CAT(0) criterion, with their triangle samplers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleSpace {
    /// `ℝ³`, coordinates uniform in `[-1, 1]`.
    Euclid,
    /// Upper half-plane, `x ∈ [-2, 2]`, `log y ∈ [-2, 1]`.
    H2,
    /// One cusp model, `u ∈ [0.05, 1]`, `θ ∈ [-3, 3]`.
    Cusp,
    /// Product of two cusp models, same ranges per factor.
    ProductCusp,
    /// Two half-planes glued along their boundary line, `x ∈ [-2, 2]`, `y ∈ [0, 2]`.
    GluedHalfplanes,
}

impl SampleSpace {
    pub const ALL: [SampleSpace; 5] =
        [SampleSpace::Euclid, SampleSpace::H2, SampleSpace::Cusp, SampleSpace::ProductCusp, SampleSpace::GluedHalfplanes];

    pub fn name(self) -> &'static str {
        match self {
            SampleSpace::Euclid => "euclid",
            SampleSpace::H2 => "h2",
            SampleSpace::Cusp => "cusp",
            SampleSpace::ProductCusp => "product-cusp",
            SampleSpace::GluedHalfplanes => "glued-halfplanes",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    /// Slack statistics over `trials` random triangles.
    pub fn slack_report(self, trials: usize, seed: u64) -> Result<SlackReport> {
        let cusp_point = |r: &mut SplitMix64| CuspPoint::new(r.range(0.05, 1.0), r.range(-3.0, 3.0)).expect("u > 0");
        match self {
            SampleSpace::Euclid => cat0_sample(&Euclidean::new(3), trials, seed, |r| {
                std::array::from_fn(|_| (0..3).map(|_| r.range(-1.0, 1.0)).collect())
            }),
            SampleSpace::H2 => cat0_sample(&HyperbolicPlane, trials, seed, |r| {
                std::array::from_fn(|_| Complex64::new(r.range(-2.0, 2.0), r.range(-2.0, 1.0).exp()))
            }),
            SampleSpace::Cusp => {
                cat0_sample(&CuspSpace::default(), trials, seed, |r| std::array::from_fn(|_| cusp_point(r)))
            }
            SampleSpace::ProductCusp => cat0_sample(&ProductCuspSpace::default(), trials, seed, |r| {
                std::array::from_fn(|_| ProductCuspPoint::new(vec![cusp_point(r), cusp_point(r)]).expect("nonempty"))
            }),
            SampleSpace::GluedHalfplanes => cat0_sample(&glued_halfplanes()?, trials, seed, |r| {
                std::array::from_fn(|_| {
                    let p = vec![r.range(-2.0, 2.0), r.range(0.0, 2.0)];
                    if r.uniform() < 0.5 {
                        Side::Left(p)
                    } else {
                        Side::Right(p)
                    }
                })
            }),
        }
    }
}

/// Two closed upper half-planes glued along `y = 0` (a copy of the plane).
pub fn glued_halfplanes() -> Result<GluedSpace<Euclidean, Euclidean>> {
    let set = GlueSet::new(vec![(-8.0, 8.0)], |a: &[f64]| vec![a[0], 0.0], |a: &[f64]| vec![a[0], 0.0])?;
    glue(Euclidean::new(2), Euclidean::new(2), set)
}

fn cat0(seed: u64) -> Result<Vec<Check>> {
    const TRIALS: usize = 10_000;
    let mut checks = Vec::new();
    for space in SampleSpace::ALL {
        let r = space.slack_report(TRIALS, seed)?;
        if space == SampleSpace::Euclid {
            checks.push(Check::at_least("euclid min slack", r.min_slack, -1e-12));
            checks.push(Check::at_most("euclid max slack", r.max_slack, 1e-12));
        } else {
            checks.push(Check::at_least(&format!("{} min slack", space.name()), r.min_slack, -1e-9));
        }
    }
    Ok(checks)
}

/// A random bounded polytope containing the origin, with a few points well
/// inside it.
fn random_polytope(rng: &mut SplitMix64) -> Result<(ConvexPolytope, Vec<Vec<f64>>)> {
    let d = rng.int_range(2, 4) as usize;
    // The cube keeps the polytope bounded; the extra facets are random.
    let mut hs: Vec<(Vec<f64>, f64)> = (0..d)
        .flat_map(|i| {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            let neg: Vec<f64> = e.iter().map(|v| -v).collect();
            [(e, 2.0), (neg, 2.0)]
        })
        .collect();
    for _ in 0..rng.int_range(2, 8) {
        let a: Vec<f64> = (0..d).map(|_| rng.normal()).collect();
        let n = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        hs.push((a.iter().map(|v| v / n).collect(), rng.range(0.5, 1.5)));
    }
    let omega = ConvexPolytope::new(hs)?;
    let pts = (0..3)
        .map(|_| {
            let mut x: Vec<f64> = (0..d).map(|_| rng.range(-2.0, 2.0)).collect();
            while omega.slacks(&x).iter().any(|&s| s < 0.05) {
                x.iter_mut().for_each(|v| *v *= 0.8);
            }
            x
        })
        .collect();
    Ok((omega, pts))
}

fn funk(rng: &mut SplitMix64) -> Result<Vec<Check>> {
    let mut agree = 0.0f64;
    for _ in 0..1000 {
        let (omega, pts) = random_polytope(rng)?;
        let (ray, sup) = (funk_ray(&omega, &pts[0], &pts[1])?, funk_sup(&omega, &pts[0], &pts[1])?);
        agree = agree.max((ray - sup).abs());
    }
    let mut tri = f64::INFINITY;
    let mut model = f64::INFINITY;
    for _ in 0..10_000 {
        let (omega, p) = random_polytope(rng)?;
        let f = |a: &[f64], b: &[f64]| funk_sup(&omega, a, b);
        tri = tri.min(f(&p[0], &p[1])? + f(&p[1], &p[2])? - f(&p[0], &p[2])?);
        let q: Vec<ProductCuspPoint> = (0..3)
            .map(|_| {
                ProductCuspPoint::new(
                    (0..2).map(|_| CuspPoint::new(rng.range(0.01, 2.0), rng.range(-3.0, 3.0))).collect::<Result<_>>()?,
                )
            })
            .collect::<Result<_>>()?;
        model = model.min(wp_funk_model(&q[0], &q[1])? + wp_funk_model(&q[1], &q[2])? - wp_funk_model(&q[0], &q[2])?);
    }
    Ok(vec![
        Check::at_most("max |F_ray - F_sup| over 1000 instances", agree, 1e-10),
        Check::at_least("funk_sup min triangle slack over 1e4 triples", tri, -1e-12),
        Check::at_least("wp_funk_model min triangle slack over 1e4 triples", model, -1e-12),
    ])
}

fn all_words(gens: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    let mut layer = vec![Word::identity()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| (0..gens).map(move |s| w.concat(&Word(vec![s]))))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn coxeter(rng: &mut SplitMix64) -> Result<Vec<Check>> {
    // Path 0 - 1 - 2 of commuting pairs: mixes commuting and free letters.
    let matrices = [
        CoxeterMatrix::right_angled(3, &[(0, 1), (1, 2)])?,
        CoxeterMatrix::right_angled(3, &[])?,
        CoxeterMatrix::right_angled(3, &[(0, 2)])?,
    ];
    let words = all_words(3, 6);
    let mut bad = 0usize;
    for m in &matrices {
        let en = enumerate_group(m, 6)?;
        let elements: std::collections::BTreeSet<&Word> = en.elements.iter().collect();
        let mut reduced_set = std::collections::BTreeSet::new();
        for w in &words {
            let r = reduce_word(w, m)?;
            let ok = reduce_word(&r, m)? == r
                && r.len() <= w.len()
                && (w.len() - r.len()) % 2 == 0
                && reduce_word(&w.concat(&w.inverse()), m)?.is_empty()
                && reduce_word(&w.inverse(), m)? == reduce_word(&r.inverse(), m)?
                && elements.contains(&r);
            bad += usize::from(!ok);
            reduced_set.insert(r);
        }
        // Every element of length ≤ 6 is the normal form of some word.
        bad += usize::from(reduced_set.len() != en.elements.len());
        for (i, u) in words.iter().enumerate().step_by(7) {
            let v = &words[(i * 31 + 5) % words.len()];
            let lhs = reduce_word(&u.concat(v), m)?;
            let rhs = reduce_word(&reduce_word(u, m)?.concat(&reduce_word(v, m)?), m)?;
            bad += usize::from(lhs != rhs);
        }
    }

    let disjoint = CurveSystem::new(vec!["a".into(), "b".into(), "c".into()], vec![vec![0; 3]; 3])?;
    let order = enumerate_group(&coxeter_matrix(&disjoint), 12)?.order.map_or(f64::NAN, |o| o as f64);

    let dev = Development::new(CoxeterMatrix::right_angled(3, &[(0, 1), (1, 2)])?, ModelParams::default())?;
    // σ(y) must be a simplex: pairwise commuting generators.
    let simplices: [&[usize]; 6] = [&[], &[0], &[1], &[2], &[0, 1], &[1, 2]];
    let ys: Vec<ProductCuspPoint> = (0..6)
        .map(|_| {
            let sigma = simplices[rng.int_range(0, 5) as usize];
            let factors = (0..3)
                .map(|j| {
                    if sigma.contains(&j) {
                        Ok(CuspPoint::stratum())
                    } else {
                        CuspPoint::new(rng.range(0.1, 1.0), rng.range(-1.0, 1.0))
                    }
                })
                .collect::<Result<_>>()?;
            ProductCuspPoint::new(factors)
        })
        .collect::<Result<_>>()?;
    let short = all_words(3, 3);
    let pick = |rng: &mut SplitMix64| {
        let g = short[rng.int_range(0, short.len() as i64 - 1) as usize].clone();
        DevelopmentPoint::new(g, ys[rng.int_range(0, ys.len() as i64 - 1) as usize].clone())
    };
    let mut eq_bad = 0usize;
    let mut nontrivial = 0usize;
    for _ in 0..1000 {
        let (p, q, r) = (pick(rng), pick(rng), pick(rng));
        let (pq, qp, qr, pr) = (dev.dev_equal(&p, &q)?, dev.dev_equal(&q, &p)?, dev.dev_equal(&q, &r)?, dev.dev_equal(&p, &r)?);
        nontrivial += usize::from(pq && p.g != q.g);
        eq_bad += usize::from(!dev.dev_equal(&p, &p)?);
        eq_bad += usize::from(pq != qp);
        eq_bad += usize::from(pq && qr && !pr);
    }

    let torus = CurveSystem::torus(&enumerate_classes(10));
    let m = coxeter_matrix(&torus);
    let finite = (0..m.rank())
        .flat_map(|a| (0..m.rank()).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && m.get(a, b) != CoxeterEntry::Infinite)
        .count();

    Ok(vec![
        Check::none("word-calculus inconsistencies (length <= 6, 3 generators)", bad),
        Check::within("group order for 3 disjoint curves", order, 8.0, 0.0),
        Check::none("dev_equal equivalence violations over 1000 triples", eq_bad),
        Check::new("dev_equal pairs identified across different g", nontrivial as f64, 1.0, 0.0, Relation::AtLeast),
        Check::none("finite off-diagonal entries, torus classes to cutoff 10", finite),
    ])
}

fn random_field(rng: &mut SplitMix64, bandlimit: usize) -> FourierVectorField {
    FourierVectorField::from_positive(
        (2..=bandlimit)
            .map(|m| Complex64::new(rng.normal(), rng.normal()) / (m as f64).powi(2))
            .collect(),
    )
}

fn circle(rng: &mut SplitMix64) -> Result<Vec<Check>> {
    let k = PairingConstants::default();
    let (mut jj, mut compat, mut ratio_lo, mut ratio_hi) = (0usize, 0.0f64, f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..200 {
        let (v, w) = (random_field(rng, 32), random_field(rng, 32));
        let (jv, jw) = (complex_structure(&v), complex_structure(&w));
        jj += usize::from(complex_structure(&jv) != v.scale(-1.0));
        let g = wp_pairing(&v, &w, &k);
        let scale = wp_pairing(&v, &v, &k).sqrt() * wp_pairing(&w, &w, &k).sqrt();
        compat = compat
            .max((g + kk_form(&v, &jw, &k)).abs() / scale)
            .max((wp_pairing(&jv, &jw, &k) - g).abs() / scale)
            .max((kk_form(&jv, &jw, &k) - kk_form(&v, &w, &k)).abs() / scale);
        let r = wp_h32_ratio(&v, &k).unwrap_or(f64::NAN);
        ratio_lo = ratio_lo.min(r);
        ratio_hi = ratio_hi.max(r);
    }
    // The extremes: a pure mode 2 gives exactly 3/4.
    let pure2 = FourierVectorField::from_positive(vec![Complex64::new(1.0, 0.0)]);
    ratio_lo = ratio_lo.min(wp_h32_ratio(&pure2, &k).unwrap_or(f64::NAN));

    let n = 128;
    let mut hilbert = 0.0f64;
    for m in 2..=32 {
        let th = |j: usize| 2.0 * PI * (m * j) as f64 / n as f64;
        let cos: Vec<f64> = (0..n).map(|j| th(j).cos()).collect();
        let out = hilbert_transform_fn(&cos)?;
        hilbert = hilbert.max(out.iter().enumerate().map(|(j, v)| (v - th(j).sin()).abs()).fold(0.0, f64::max));
    }
    let v = random_field(rng, 32);
    let lhs = hilbert_transform_fn(&v.sample(n))?;
    let rhs = complex_structure(&v).sample(n);
    let ident = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    Ok(vec![
        Check::none("J^2 != -Id (exact) over 200 fields", jj),
        Check::at_most("max relative g/omega/J compatibility defect", compat, 1e-12),
        Check::at_most("max |H(cos m theta) - sin m theta|, 2 <= m <= 32", hilbert, 1e-12),
        Check::at_most("max |H(u) - J(u)| on samples", ident, 1e-12),
        Check::new("min WP/H^{3/2} ratio", ratio_lo, 0.75, 1e-15, Relation::AtLeast),
        Check::new("max WP/H^{3/2} ratio (strictly below 1)", ratio_hi, 1.0, 0.0, Relation::AtMost)
            .strictly_below(1.0),
    ])
}

fn ahlfors() -> Result<Vec<Check>> {
    let test = HarmonicTest::new(Complex64::new(0.0, 1.0), 4)?;
    let z = Complex64::new(0.0, 1.0);
    let r = ahlfors_projection(|e| test.mu(e), test.decay(), z, AhlforsOptions { tol: 1e-6, max_cells: 200_000 })?;
    let target = test.mu(z);
    Ok(vec![
        Check::within("Re P[mu](i)", r.value.re, target.re, 1e-2),
        Check::within("Im P[mu](i)", r.value.im, target.im, 1e-2),
        Check::at_most("reported error estimate", r.error_estimate(), 1e-2),
    ])
}

fn regular_simplex(k: usize) -> Vec<Vec<f64>> {
    // Vertices e_0..e_k of R^{k+1}, side length √2.
    (0..=k)
        .map(|i| {
            let mut e = vec![0.0; k + 1];
            e[i] = 1.0;
            e
        })
        .collect()
}

fn fr() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let tri = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 0.75f64.sqrt()]];
    let r = fr_diagnostic(&Euclidean::new(2), &tri)?;
    checks.push(Check::within("equilateral triangle D/R", r.ratio, 3f64.sqrt(), 1e-9));
    for k in 1..=6 {
        let r = fr_diagnostic(&Euclidean::new(k + 1), &regular_simplex(k))?;
        let exact = (2.0 * (k + 1) as f64 / k as f64).sqrt();
        checks.push(Check::within(&format!("regular {k}-simplex D/R"), r.ratio, exact, 1e-9));
    }
    Ok(checks)
}
