//! Teichmüller space of the torus.
//!
//! A marked flat torus of unit area is a unit-determinant metric `G` on `ℝ²/ℤ²`,
//! identified with `τ = x + iy` in the upper half-plane through
//!
//! ```text
//! G(τ) = (1/y) [[1, x], [x, x² + y²]]
//! ```
//!
//! The Weil-Petersson metric restricts the pairing `Tr(G⁻¹ h G⁻¹ k)` to traceless
//! `h`, which makes this space the symmetric space `SL(2,ℝ)/SO(2)` with constant
//! curvature `-1/2` in this normalization. Geodesics and distances are closed
//! form; the Teichmüller and Thurston metrics are brute-force suprema over
//! simple closed curve classes `(p, q)`.

use std::cmp::Ordering;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{contract, domain, Result};
use crate::tensor_core::{l2_pairing, levi_civita, mat2, Metric2, SymTensor2};

const UNIT_DET_TOL: f64 = 1e-12;

/// A point of the torus Teichmüller space: a unit-determinant flat metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TorusPoint {
    metric: Metric2,
}

impl TorusPoint {
    pub fn from_tau(tau: Complex64) -> Result<Self> {
        let (x, y) = (tau.re, tau.im);
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return domain(format!("tau = {tau} is not in the upper half-plane"));
        }
        let metric = Metric2::new(1.0 / y, x / y, (x * x + y * y) / y)?;
        Ok(Self { metric })
    }

    pub fn from_metric(metric: Metric2) -> Result<Self> {
        if !metric.is_unit_det(UNIT_DET_TOL) {
            return domain(format!("det G = {} is not 1", metric.det()));
        }
        Ok(Self { metric })
    }

    pub fn metric(&self) -> Metric2 {
        self.metric
    }

    pub fn tau(&self) -> Complex64 {
        let g = &self.metric;
        Complex64::new(g.g12() / g.g11(), 1.0 / g.g11())
    }
}

pub fn metric_from_tau(tau: Complex64) -> Result<TorusPoint> {
    TorusPoint::from_tau(tau)
}

pub fn tau_from_metric(g: &Metric2) -> Result<Complex64> {
    Ok(TorusPoint::from_metric(*g)?.tau())
}

/// A Weil-Petersson tangent vector: a symmetric tensor traceless with respect
/// to the base point. On the torus these are exactly the TT tensors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangentTT {
    base: TorusPoint,
    h: SymTensor2,
}

impl TangentTT {
    pub fn new(base: TorusPoint, h: SymTensor2) -> Result<Self> {
        let g = base.metric();
        let tr = h.trace_wrt(&g);
        if tr.abs() > 1e-12 * (1.0 + h.norm_wrt(&g)) {
            return contract(format!("tangent vector has trace {tr:e} with respect to G"));
        }
        Ok(Self { base, h })
    }

    /// `G^{1/2} [[a, b], [b, -a]] G^{1/2}`: the traceless direction with
    /// normalized components `(a, b)`; its WP norm is `sqrt(2(a² + b²))`.
    pub fn from_components(base: TorusPoint, a: f64, b: f64) -> Self {
        let root = mat2::spd_sqrt(&base.metric().tensor());
        let h = mat2::congruence(&root, &SymTensor2::new(a, b, -a));
        Self { base, h }
    }

    pub fn zero(base: TorusPoint) -> Self {
        Self { base, h: SymTensor2::ZERO }
    }

    pub fn base(&self) -> TorusPoint {
        self.base
    }

    pub fn tensor(&self) -> SymTensor2 {
        self.h
    }

    pub fn norm(&self) -> f64 {
        self.h.norm_wrt(&self.base.metric())
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { base: self.base, h: self.h * s }
    }

    /// `Ĥ = G^{-1/2} h G^{-1/2}`.
    fn normalized(&self) -> SymTensor2 {
        let inv_root = mat2::spd_inv_sqrt(&self.base.metric().tensor());
        mat2::congruence(&inv_root, &self.h)
    }
}

/// `G_t = G^{1/2} exp(tĤ) G^{1/2}`.
pub fn wp_geodesic(v: &TangentTT, t: f64) -> TorusPoint {
    let root = mat2::spd_sqrt(&v.base.metric().tensor());
    let e = mat2::sym_exp(&(v.normalized() * t));
    let g = mat2::congruence(&root, &e);
    // Positive definite by construction; renormalize the round-off in det.
    let metric = Metric2::from_tensor(g).expect("congruence of SPD matrices").unit_det();
    TorusPoint { metric }
}

/// `Ġ_t = G^{1/2} Ĥ exp(tĤ) G^{1/2}` (Ĥ commutes with its exponential).
pub fn wp_velocity(v: &TangentTT, t: f64) -> SymTensor2 {
    let root = mat2::spd_sqrt(&v.base.metric().tensor());
    let hat = v.normalized();
    let e = mat2::sym_exp(&(hat * t));
    let prod = SymTensor2::from_matrix(&mat2::mul(&hat.matrix(), &e.matrix()));
    mat2::congruence(&root, &prod)
}

/// `‖log(G₁^{-1/2} G₂ G₁^{-1/2})‖_F`.
pub fn wp_distance(a: &TorusPoint, b: &TorusPoint) -> f64 {
    let inv_root = mat2::spd_inv_sqrt(&a.metric().tensor());
    let m = mat2::congruence(&inv_root, &b.metric().tensor());
    // Eigenvalues written as 1 + ε to keep accuracy for nearby points.
    let p = m.h11 - 1.0;
    let q = m.h22 - 1.0;
    let r = (0.5 * (p - q)).hypot(m.h12);
    let mid = 0.5 * (p + q);
    let (e1, e2) = (mid + r, mid - r);
    e1.ln_1p().hypot(e2.ln_1p())
}

/// Integrates the WP geodesic equation on unit-determinant metrics with the
/// classical fourth-order Runge-Kutta scheme.
///
/// The acceleration is the tangential part of `-D_Ġ Ġ` (the pairing's
/// connection) plus the normal correction `½‖Ġ‖² G` that keeps `det G = 1`;
/// after every step `G` is rescaled to unit determinant and `Ġ` projected to
/// be traceless. Returns `(t, G_t)` samples at every step.
pub fn wp_geodesic_ode(v: &TangentTT, t_end: f64, step: f64) -> Result<Vec<(f64, Metric2)>> {
    if !(step > 0.0) || !(t_end >= 0.0) {
        return contract("step must be positive and t_end nonnegative");
    }
    let accel = |g: &SymTensor2, gd: &SymTensor2| -> Result<SymTensor2> {
        let m = Metric2::from_tensor(*g)?;
        let d = levi_civita(&m, gd, gd);
        let tangential = -(d.traceless_part(&m));
        Ok(tangential + 0.5 * l2_pairing(&m, gd, gd) * *g)
    };
    let steps = (t_end / step).round().max(1.0) as usize;
    let h = t_end / steps as f64;
    let mut g = v.base.metric().tensor();
    let mut gd = v.h;
    let mut out = Vec::with_capacity(steps + 1);
    out.push((0.0, v.base.metric()));
    for k in 0..steps {
        let a1 = accel(&g, &gd)?;
        let (g2, v2) = (g + (0.5 * h) * gd, gd + (0.5 * h) * a1);
        let a2 = accel(&g2, &v2)?;
        let (g3, v3) = (g + (0.5 * h) * v2, gd + (0.5 * h) * a2);
        let a3 = accel(&g3, &v3)?;
        let (g4, v4) = (g + h * v3, gd + h * a3);
        let a4 = accel(&g4, &v4)?;
        g += (h / 6.0) * (gd + 2.0 * v2 + 2.0 * v3 + v4);
        gd += (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        let m = Metric2::from_tensor(g)?.unit_det();
        g = m.tensor();
        gd = gd.traceless_part(&m);
        out.push(((k + 1) as f64 * h, m));
    }
    Ok(out)
}

/// A simple closed curve class on the torus: a primitive lattice vector up to
/// sign. Stored in the canonical form `q > 0`, or `q = 0, p = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CurveClass {
    pub p: i64,
    pub q: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl CurveClass {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if gcd(p, q) != 1 {
            return contract(format!("({p}, {q}) is not a primitive class"));
        }
        Ok(if q < 0 || (q == 0 && p < 0) { Self { p: -p, q: -q } } else { Self { p, q } })
    }

    /// Geometric intersection number `|p q' - q p'|`.
    pub fn intersection(&self, other: &Self) -> u64 {
        (self.p * other.q - self.q * other.p).unsigned_abs()
    }
}

impl std::fmt::Display for CurveClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// All classes with `max(|p|, |q|) <= cutoff`, in lexicographic order.
pub fn enumerate_classes(cutoff: u32) -> Vec<CurveClass> {
    let n = cutoff as i64;
    let mut out = Vec::new();
    for p in -n..=n {
        for q in 0..=n {
            if (q > 0 || p > 0) && gcd(p, q) == 1 {
                out.push(CurveClass { p, q });
            }
        }
    }
    out
}

/// Flat length `sqrt(vᵀ G v)` of the class `v = (p, q)`.
pub fn curve_length(g: &Metric2, c: &CurveClass) -> f64 {
    let (p, q) = (c.p as f64, c.q as f64);
    (g.g11() * p * p + 2.0 * g.g12() * p * q + g.g22() * q * q).sqrt()
}

/// Value of a supremum over curve classes and the class attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupResult {
    pub value: f64,
    pub argmax_class: CurveClass,
    pub cutoff: u32,
}

fn sup_over_classes(cutoff: u32, f: impl Fn(&CurveClass) -> f64 + Sync) -> Result<SupResult> {
    if cutoff == 0 {
        return contract("cutoff must be at least 1");
    }
    let classes = enumerate_classes(cutoff);
    let pick = |a: (f64, CurveClass), b: (f64, CurveClass)| match a.0.total_cmp(&b.0) {
        Ordering::Greater => a,
        Ordering::Less => b,
        Ordering::Equal => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    };
    let (value, argmax_class) = classes
        .par_iter()
        .map(|c| (f(c), *c))
        .reduce(|| (f64::NEG_INFINITY, CurveClass { p: i64::MAX, q: i64::MAX }), pick);
    Ok(SupResult { value, argmax_class, cutoff })
}

/// Teichmüller distance `½ sup log(Ext₁(σ)/Ext₂(σ))` with the unit-area torus
/// extremal length `Ext(σ) = ℓ_σ²`, over classes up to `cutoff`.
pub fn teich_distance_ext(a: &TorusPoint, b: &TorusPoint, cutoff: u32) -> Result<SupResult> {
    let (ga, gb) = (a.metric(), b.metric());
    sup_over_classes(cutoff, |c| {
        let (la, lb) = (curve_length(&ga, c), curve_length(&gb, c));
        0.5 * ((la * la) / (lb * lb)).ln()
    })
}

/// Thurston's asymmetric metric `sup log(ℓ_σ(G₁)/ℓ_σ(G₂))`, with the ratio
/// oriented as written (numerator from the first argument).
pub fn thurston_metric(a: &TorusPoint, b: &TorusPoint, cutoff: u32) -> Result<SupResult> {
    let (ga, gb) = (a.metric(), b.metric());
    sup_over_classes(cutoff, |c| (curve_length(&ga, c) / curve_length(&gb, c)).ln())
}

/// Curvature estimate with a Richardson error bar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureEstimate {
    pub value: f64,
    pub error: f64,
    /// Raw estimates at `scale` and `scale / 2`.
    pub raw: [f64; 2],
}

/// Gauss curvature of the WP metric at `tau` from the second-order distance
/// expansion: for orthonormal `e₁, e₂` and `d = d(exp(s e₁), exp(s e₂))`,
/// `d² = 2s² - (K/3) s⁴ + O(s⁶)`. The estimates at `s` and `s/2` are combined
/// by Richardson extrapolation.
pub fn estimate_curvature(tau: Complex64, scale: f64) -> Result<CurvatureEstimate> {
    if !(scale > 0.0 && scale <= 1e-2) {
        return contract(format!("scale must be in (0, 1e-2], got {scale}"));
    }
    let p = TorusPoint::from_tau(tau)?;
    let raw_at = |s: f64, rot: f64| -> f64 {
        let (c, sn) = (rot.cos(), rot.sin());
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let e1 = TangentTT::from_components(p, r * c, r * sn);
        let e2 = TangentTT::from_components(p, -r * sn, r * c);
        let d = wp_distance(&wp_geodesic(&e1, s), &wp_geodesic(&e2, s));
        3.0 * (2.0 * s * s - d * d) / s.powi(4)
    };
    for rot in [0.0, std::f64::consts::FRAC_PI_8, std::f64::consts::FRAC_PI_4] {
        let k1 = raw_at(scale, rot);
        let k2 = raw_at(0.5 * scale, rot);
        if k1.is_finite() && k2.is_finite() {
            let value = (4.0 * k2 - k1) / 3.0;
            return Ok(CurvatureEstimate { value, error: (k2 - k1).abs() / 3.0, raw: [k1, k2] });
        }
    }
    domain("degenerate sample triangle in every frame")
}
