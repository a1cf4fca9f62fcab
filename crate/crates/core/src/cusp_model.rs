//! The model WP metric transverse to a one-node stratum,
//! `c² (du² + f(u)² dθ²)` with `f(u) = u³/2` and `c² = 4π³` by default.
//!
//! `u = (log 1/|t|)^{-1/2}` measures the distance to the stratum and `θ = arg t`
//! is the twist. The twist is not reduced modulo anything: the model lives on
//! the universal cover, and the stratum `u = 0` is a single completion point.
//!
//! Two-point geodesics are solved in closed form up to one scalar root: every
//! non-radial geodesic is a rescaled copy of a single universal curve
//! (Clairaut), whose angle and length integrals are incomplete beta functions
//! (see [`CuspGeodesic`]). The ODE integrator [`geodesic`] and the shooting
//! solver [`shoot_distance`] are independent cross-checks.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{contract, domain, GeomError, Result};
use crate::numeric::{bisect, dopri5, integrate_gl, OdeOptions};

/// `4π³`, the constant in front of the pinching expansion.
pub const WP_PREFACTOR: f64 = 4.0 * PI * PI * PI;

/// Integrations stop once `u` falls to this value.
pub const U_MIN: f64 = 1e-6;

/// `f(u) = u³/2`.
pub fn profile(u: f64) -> f64 {
    0.5 * u * u * u
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// `c²`.
    pub prefactor: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self { prefactor: WP_PREFACTOR }
    }
}

impl ModelParams {
    pub fn new(prefactor: f64) -> Result<Self> {
        if !(prefactor > 0.0 && prefactor.is_finite()) {
            return domain(format!("prefactor must be positive, got {prefactor}"));
        }
        Ok(Self { prefactor })
    }

    pub fn c(&self) -> f64 {
        self.prefactor.sqrt()
    }
}

/// A point `(u, θ)`; `u = 0` is the stratum point, where `θ` carries no
/// information.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspPoint {
    pub u: f64,
    pub theta: f64,
}

impl CuspPoint {
    pub fn new(u: f64, theta: f64) -> Result<Self> {
        if !(u > 0.0 && u.is_finite()) || !theta.is_finite() {
            return domain(format!("cusp point needs u > 0 and finite θ, got ({u}, {theta})"));
        }
        Ok(Self { u, theta })
    }

    pub fn stratum() -> Self {
        Self { u: 0.0, theta: 0.0 }
    }

    pub fn is_stratum(&self) -> bool {
        self.u == 0.0
    }
}

/// Tangent vector in orthonormal components: `radial` along `∂_u/c`,
/// `angular` along `∂_θ/(c f)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspTangent {
    pub radial: f64,
    pub angular: f64,
}

impl CuspTangent {
    pub fn speed(&self) -> f64 {
        self.radial.hypot(self.angular)
    }
}

/// Gaussian curvature `-f''/(c² f) = -6/(c² u²)`.
pub fn curvature(u: f64, params: &ModelParams) -> Result<f64> {
    if !(u > 0.0) {
        return domain(format!("curvature needs u > 0, got {u}"));
    }
    Ok(-6.0 / (params.prefactor * u * u))
}

fn check_modulus(t: f64) -> Result<()> {
    if !(t > 0.0 && t < 1.0) {
        return domain(format!("|t| must lie in (0, 1), got {t}"));
    }
    Ok(())
}

/// Length `2π²/log(1/|t|)` of the pinching geodesic.
pub fn waist_length(t: f64) -> Result<f64> {
    check_modulus(t)?;
    Ok(2.0 * PI * PI / -t.ln())
}

/// `u = (log 1/|t|)^{-1/2}`.
pub fn u_from_t(t: f64) -> Result<f64> {
    check_modulus(t)?;
    Ok((-t.ln()).sqrt().recip())
}

/// `ℓ = 2π² u²`.
pub fn waist_length_from_u(u: f64) -> f64 {
    2.0 * PI * PI * u * u
}

/// Distance `c·u` to the stratum along the radial line.
pub fn distance_to_stratum(p: &CuspPoint, params: &ModelParams) -> f64 {
    params.c() * p.u
}

/// Density of the hyperbolic cylinder `{|t| < |z| < 1}`:
/// `(π/log(1/|t|)) csc(π log|z| / log|t|) / |z|`.
pub fn annulus_density(z: f64, t: f64) -> Result<f64> {
    check_modulus(t)?;
    let r = z.abs();
    if !(r > t && r < 1.0) {
        return domain(format!("|z| = {r} outside the annulus ({t}, 1)"));
    }
    let lt = t.ln();
    Ok(PI / -lt / ((PI * r.ln() / lt).sin() * r))
}

/// Density `1/(|z| log(1/|z|))` of the punctured-disk cusp.
pub fn cusp_density(z: f64) -> Result<f64> {
    let r = z.abs();
    if !(r > 0.0 && r < 1.0) {
        return domain(format!("|z| = {r} outside the punctured disk"));
    }
    Ok(1.0 / (r * -r.ln()))
}

// ---------------------------------------------------------------------------
// The universal geodesic. With turning point u* and x = u/u*, a unit-speed
// geodesic satisfies dθ = 2 dx / (u*² x³ √(x⁶-1)) and dσ = u* x³ dx / √(x⁶-1).
// In w = x⁻⁶ both become incomplete beta integrals of w^a (1-w)^{-1/2}; for
// w ≤ ½ they are summed as binomial series, for w > ½ the substitution
// 1 - w = v² leaves smooth integrands for Gauss-Legendre.

const W_SPLIT: f64 = 0.5;

/// Σ c_n wⁿ/(n + shift) for n ≥ n0, c_n = C(2n,n)/4ⁿ.
fn binomial_series(w: f64, shift: f64, n0: usize) -> f64 {
    let mut c = 1.0;
    let mut wn = 1.0;
    let mut sum = 0.0;
    for n in 0..200 {
        if n > 0 {
            c *= (2 * n - 1) as f64 / (2 * n) as f64;
            wn *= w;
        }
        if n >= n0 {
            let term = c * wn / (n as f64 + shift);
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
        }
    }
    sum
}

/// `(2/3) ∫₀^√(1-w) (1-v²)^{-1/6} dv`: angle swept from the turning point.
fn theta_near(one_minus_w: f64) -> f64 {
    (2.0 / 3.0) * integrate_gl(0.0, one_minus_w.sqrt(), |v| (1.0 - v * v).powf(-1.0 / 6.0))
}

/// `(1/3) ∫₀^√(1-w) (1-v²)^{-7/6} dv`: arclength from the turning point.
fn length_near(one_minus_w: f64) -> f64 {
    (1.0 / 3.0) * integrate_gl(0.0, one_minus_w.sqrt(), |v| (1.0 - v * v).powf(-7.0 / 6.0))
}

struct Universal {
    theta_inf: f64,
    excess_inf: f64,
}

fn universal() -> &'static Universal {
    static U: OnceLock<Universal> = OnceLock::new();
    U.get_or_init(|| {
        let x0 = 2f64.powf(1.0 / 6.0);
        let theta_inf = theta_near(W_SPLIT) + x0.powi(-5) / 3.0 * binomial_series(W_SPLIT, 5.0 / 6.0, 0);
        let excess_inf = length_near(W_SPLIT) - x0 + x0 * binomial_series(W_SPLIT, -1.0 / 6.0, 1) / 6.0;
        Universal { theta_inf, excess_inf }
    })
}

/// Total angle `B(5/6, 1/2)/3` swept by the universal geodesic from its turning
/// point out to `u = ∞`.
pub fn universal_half_angle() -> f64 {
    universal().theta_inf
}

/// `1 - x⁻⁶` from `x - 1`, without cancellation near the turning point.
fn one_minus_w(x: f64, xm1: f64) -> f64 {
    let x2 = x * x;
    xm1 * (1.0 + x + x2 + x2 * x + x2 * x2 + x2 * x2 * x) / (x2 * x2 * x2)
}

/// Angle still to be swept beyond `x`: `Θ∞ - θ_U(x)`.
fn theta_tail(x: f64, xm1: f64) -> f64 {
    let w = x.recip().powi(6);
    if w <= W_SPLIT {
        x.recip().powi(5) / 3.0 * binomial_series(w, 5.0 / 6.0, 0)
    } else {
        universal().theta_inf - theta_near(one_minus_w(x, xm1))
    }
}

/// `ℓ_U(x) - x`, bounded on `[1, ∞)`.
fn length_excess(x: f64, xm1: f64) -> f64 {
    let w = x.recip().powi(6);
    if w <= W_SPLIT {
        universal().excess_inf - x * binomial_series(w, -1.0 / 6.0, 1) / 6.0
    } else {
        length_near(one_minus_w(x, xm1)) - x
    }
}

fn scaled(u: f64, ustar: f64) -> (f64, f64) {
    (u / ustar, (u - ustar) / ustar)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum GeodesicKind {
    /// Constant `θ`.
    Radial,
    /// Straight through the stratum point.
    ThroughStratum,
    /// `u` monotone along the segment.
    SameBranch,
    /// The segment contains the turning point.
    OppositeBranch,
}

/// The unique geodesic between two points of the model.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CuspGeodesic {
    pub kind: GeodesicKind,
    pub start: CuspPoint,
    pub end: CuspPoint,
    /// Turning point `u*` (zero for radial and stratum geodesics).
    pub u_star: f64,
    c: f64,
    length: f64,
}

impl CuspGeodesic {
    pub fn new(p: &CuspPoint, q: &CuspPoint, params: &ModelParams) -> Self {
        let c = params.c();
        let mut g = Self { kind: GeodesicKind::Radial, start: *p, end: *q, u_star: 0.0, c, length: 0.0 };
        if p.is_stratum() || q.is_stratum() {
            g.kind = GeodesicKind::ThroughStratum;
            g.length = c * (p.u + q.u);
            return g;
        }
        let dtheta = (q.theta - p.theta).abs();
        if dtheta == 0.0 {
            g.length = c * (q.u - p.u).abs();
            return g;
        }
        let (lo, hi) = if p.u <= q.u { (p.u, q.u) } else { (q.u, p.u) };
        let u = universal();
        let tails = |us: f64| {
            let (xl, xl1) = scaled(lo, us);
            let (xh, xh1) = scaled(hi, us);
            (theta_tail(xl, xl1), theta_tail(xh, xh1))
        };
        let same = |us: f64| {
            let (tl, th) = tails(us);
            (tl - th) / (us * us)
        };
        let opposite = |us: f64| {
            let (tl, th) = tails(us);
            (2.0 * u.theta_inf - tl - th) / (us * us)
        };
        let critical = same(lo);
        let ustar = if dtheta <= critical {
            g.kind = GeodesicKind::SameBranch;
            let mut lb = 0.5 * lo;
            while same(lb) > dtheta && lb > 0.0 {
                lb *= 0.5;
            }
            if same(lb) == dtheta { lb } else { bisect(lb, (2.0 * lb).min(lo), |us| same(us) - dtheta) }
        } else {
            g.kind = GeodesicKind::OppositeBranch;
            let mut lb = 0.5 * lo;
            while opposite(lb) < dtheta {
                lb *= 0.5;
            }
            bisect(lb, (2.0 * lb).min(lo), |us| opposite(us) - dtheta)
        };
        g.u_star = ustar;
        let (xl, xl1) = scaled(lo, ustar);
        let (xh, xh1) = scaled(hi, ustar);
        let (el, eh) = (length_excess(xl, xl1), length_excess(xh, xh1));
        g.length = c * match g.kind {
            GeodesicKind::SameBranch => (hi - lo) + ustar * (eh - el),
            _ => lo + hi + ustar * (el + eh),
        };
        g
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Point at fraction `λ ∈ [0, 1]` of the arclength from `start`.
    pub fn point_at(&self, lambda: f64) -> CuspPoint {
        if lambda <= 0.0 {
            return self.start;
        }
        if lambda >= 1.0 {
            return self.end;
        }
        let (a, b) = (self.start, self.end);
        match self.kind {
            GeodesicKind::Radial => CuspPoint { u: a.u + lambda * (b.u - a.u), theta: a.theta },
            GeodesicKind::ThroughStratum => {
                let s = lambda * (a.u + b.u);
                if s < a.u {
                    CuspPoint { u: a.u - s, theta: a.theta }
                } else if s > a.u {
                    CuspPoint { u: s - a.u, theta: b.theta }
                } else {
                    CuspPoint::stratum()
                }
            }
            _ => {
                // Walk from the lower endpoint; flip λ if the segment starts high.
                let (lo, hi, lam) = if a.u <= b.u { (a, b, lambda) } else { (b, a, 1.0 - lambda) };
                let us = self.u_star;
                let sgn = (hi.theta - lo.theta).signum();
                let (xl, xl1) = scaled(lo.u, us);
                let tail_lo = theta_tail(xl, xl1);
                let sigma = lam * self.length / self.c;
                // u + u* E(u/u*) is the arclength from the turning point.
                let from_turn = |u: f64| u + us * length_excess(u / us, (u - us) / us);
                let theta_inf = universal().theta_inf;
                let (u, dth) = if self.kind == GeodesicKind::SameBranch {
                    let base = from_turn(lo.u);
                    let u = bisect(lo.u, hi.u, |u| from_turn(u) - base - sigma);
                    (u, tail_lo - theta_tail(u / us, (u - us) / us))
                } else {
                    let s1 = from_turn(lo.u);
                    if sigma <= s1 {
                        let u = bisect(us, lo.u, |u| from_turn(u) - (s1 - sigma));
                        (u, theta_tail(u / us, (u - us) / us) - tail_lo)
                    } else {
                        let u = bisect(us, hi.u, |u| from_turn(u) - (sigma - s1));
                        (u, 2.0 * theta_inf - tail_lo - theta_tail(u / us, (u - us) / us))
                    }
                };
                CuspPoint { u, theta: lo.theta + sgn * dth / (us * us) }
            }
        }
    }

    /// Unit initial tangent at `start`.
    pub fn initial_direction(&self) -> CuspTangent {
        let (a, b) = (self.start, self.end);
        match self.kind {
            GeodesicKind::Radial => CuspTangent { radial: (b.u - a.u).signum(), angular: 0.0 },
            GeodesicKind::ThroughStratum => {
                CuspTangent { radial: if a.is_stratum() { 1.0 } else { -1.0 }, angular: 0.0 }
            }
            _ => {
                let x = a.u / self.u_star;
                let angular = (b.theta - a.theta).signum() * x.recip().powi(3);
                let outward = self.kind == GeodesicKind::SameBranch && a.u <= b.u;
                let radial = one_minus_w(x, (a.u - self.u_star) / self.u_star).max(0.0).sqrt();
                CuspTangent { radial: if outward { radial } else { -radial }, angular }
            }
        }
    }
}

/// Geodesic distance in the model (completed by the stratum point).
pub fn cusp_distance(p: &CuspPoint, q: &CuspPoint, params: &ModelParams) -> f64 {
    CuspGeodesic::new(p, q, params).length()
}

/// `point_along(p, q, λ)` for the model.
pub fn cusp_point_along(p: &CuspPoint, q: &CuspPoint, lambda: f64, params: &ModelParams) -> CuspPoint {
    CuspGeodesic::new(p, q, params).point_at(lambda)
}

// ---------------------------------------------------------------------------
// ODE geodesics.

fn geodesic_rhs(state: &[f64; 4]) -> [f64; 4] {
    let [u, _, p, q] = *state;
    let f = profile(u);
    let fp = 1.5 * u * u;
    [p, q, f * fp * q * q, -2.0 * (fp / f) * p * q]
}

/// One sample of an integrated geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CuspSample {
    pub t: f64,
    pub point: CuspPoint,
    pub velocity: CuspTangent,
}

impl CuspSample {
    /// Clairaut momentum `c² f² θ' = c f b`.
    pub fn clairaut(&self, params: &ModelParams) -> f64 {
        params.c() * profile(self.point.u) * self.velocity.angular
    }
}

/// An integrated geodesic; `stratum_hit` records the time at which `u` fell
/// to [`U_MIN`], after which the path is not continued.
#[derive(Debug, Clone, Serialize)]
pub struct CuspPath {
    pub samples: Vec<CuspSample>,
    pub stratum_hit: Option<f64>,
}

impl CuspPath {
    pub fn last(&self) -> &CuspSample {
        self.samples.last().expect("paths hold the initial sample")
    }

    pub fn to_csv(&self) -> String {
        use crate::format::fmt17;
        let mut out = String::from("t,u,theta,v_radial,v_angular\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt17(s.t),
                fmt17(s.point.u),
                fmt17(s.point.theta),
                fmt17(s.velocity.radial),
                fmt17(s.velocity.angular)
            ));
        }
        out
    }
}

fn to_state(p: &CuspPoint, v: &CuspTangent, c: f64) -> [f64; 4] {
    [p.u, p.theta, v.radial / c, v.angular / (c * profile(p.u))]
}

fn to_sample(t: f64, y: &[f64; 4], c: f64) -> CuspSample {
    CuspSample {
        t,
        point: CuspPoint { u: y[0], theta: y[1] },
        velocity: CuspTangent { radial: c * y[2], angular: c * profile(y[0]) * y[3] },
    }
}

/// Integrates `u'' = f f' θ'²`, `θ'' = -2 (f'/f) u' θ'` from `p0` with
/// initial velocity `v0`, sampling `n_out` equal steps on `[0, t_end]`.
pub fn geodesic(p0: &CuspPoint, v0: &CuspTangent, t_end: f64, n_out: usize, params: &ModelParams) -> Result<CuspPath> {
    if p0.is_stratum() || p0.u <= U_MIN {
        return domain("geodesics start at interior points");
    }
    if !(t_end >= 0.0) || n_out == 0 {
        return contract("need t_end >= 0 and at least one output step");
    }
    let c = params.c();
    let y0 = to_state(p0, v0, c);
    let outputs: Vec<f64> = (1..=n_out).map(|k| t_end * k as f64 / n_out as f64).collect();
    let run = dopri5(|_, y| geodesic_rhs(y), 0.0, y0, &outputs, OdeOptions::default(), |y| y[0] <= U_MIN)
        .map_err(|residual| GeomError::NonConvergence { what: "cusp geodesic integration", residual })?;
    let mut samples = vec![to_sample(0.0, &y0, c)];
    samples.extend(run.samples.iter().map(|(t, y)| to_sample(*t, y, c)));
    let stratum_hit = run.stopped.map(|(t, y)| {
        samples.push(to_sample(t, &y, c));
        t
    });
    Ok(CuspPath { samples, stratum_hit })
}

/// Length of the inward radial geodesic from `p`, integrated until the
/// stratum clamp; the last `u ≤ U_MIN` is closed with the final velocity.
pub fn integrated_radial_distance(p: &CuspPoint, params: &ModelParams) -> Result<f64> {
    let c = params.c();
    let horizon = 2.0 * c * p.u + 1.0;
    let path = geodesic(p, &CuspTangent { radial: -1.0, angular: 0.0 }, horizon, 1, params)?;
    let t_hit = path.stratum_hit.ok_or_else(|| GeomError::NonConvergence {
        what: "radial geodesic did not reach the stratum",
        residual: path.last().point.u,
    })?;
    let last = path.last();
    Ok(t_hit + last.point.u * c / last.velocity.radial.abs())
}

/// Result of [`shoot_distance`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Shot {
    pub length: f64,
    pub direction: CuspTangent,
    pub residual: f64,
    pub iterations: usize,
}

/// Two-point boundary solve by Newton shooting on the launch angle and the
/// length, integrating the geodesic ODE. Independent of the closed-form
/// construction; used as its oracle.
pub fn shoot_distance(p: &CuspPoint, q: &CuspPoint, params: &ModelParams) -> Result<Shot> {
    if p.is_stratum() || q.is_stratum() {
        return domain("shooting needs interior endpoints");
    }
    let c = params.c();
    let fq = profile(q.u);
    let end = |phi: f64, len: f64| -> Option<[f64; 2]> {
        let v = CuspTangent { radial: phi.cos(), angular: phi.sin() };
        let path = geodesic(p, &v, len, 1, params).ok()?;
        if path.stratum_hit.is_some() {
            return None;
        }
        let e = path.last().point;
        Some([c * (e.u - q.u), c * fq * (e.theta - q.theta)])
    };
    let norm = |r: &[f64; 2]| r[0].hypot(r[1]);
    let fmid = profile(0.5 * (p.u + q.u));
    let (dx, dy) = (c * (q.u - p.u), c * fmid * (q.theta - p.theta));
    let (mut phi, mut len) = (dy.atan2(dx), dx.hypot(dy));
    let mut r = end(phi, len).ok_or(GeomError::NonConvergence { what: "shooting start", residual: f64::NAN })?;
    let tol = 1e-12 * (1.0 + len);
    for it in 0..100 {
        if norm(&r) <= tol {
            return Ok(Shot {
                length: len,
                direction: CuspTangent { radial: phi.cos(), angular: phi.sin() },
                residual: norm(&r),
                iterations: it,
            });
        }
        let h = 1e-7;
        let rp = end(phi + h, len);
        let rl = end(phi, len * (1.0 + h));
        let (Some(rp), Some(rl)) = (rp, rl) else {
            return Err(GeomError::NonConvergence { what: "shooting jacobian", residual: norm(&r) });
        };
        let j = [
            [(rp[0] - r[0]) / h, (rl[0] - r[0]) / (len * h)],
            [(rp[1] - r[1]) / h, (rl[1] - r[1]) / (len * h)],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        let dphi = -(j[1][1] * r[0] - j[0][1] * r[1]) / det;
        let dlen = -(-j[1][0] * r[0] + j[0][0] * r[1]) / det;
        let mut step = 1.0;
        loop {
            let (np, nl) = (phi + step * dphi, (len + step * dlen).max(0.5 * len));
            if let Some(nr) = end(np, nl) {
                if norm(&nr) < norm(&r) {
                    phi = np;
                    len = nl;
                    r = nr;
                    break;
                }
            }
            step *= 0.5;
            if step < 1e-6 {
                return Err(GeomError::NonConvergence { what: "shooting line search", residual: norm(&r) });
            }
        }
    }
    Err(GeomError::NonConvergence { what: "shooting", residual: norm(&r) })
}

// ---------------------------------------------------------------------------
// Products.

/// A point of the `k`-node product model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductCuspPoint {
    pub factors: Vec<CuspPoint>,
}

impl ProductCuspPoint {
    pub fn new(factors: Vec<CuspPoint>) -> Result<Self> {
        if factors.is_empty() {
            return contract("a product point needs at least one factor");
        }
        Ok(Self { factors })
    }

    pub fn k(&self) -> usize {
        self.factors.len()
    }
}

fn same_k(x: &ProductCuspPoint, y: &ProductCuspPoint) -> Result<()> {
    if x.k() != y.k() {
        return contract(format!("factor counts differ: {} vs {}", x.k(), y.k()));
    }
    Ok(())
}

/// Riemannian product distance `(Σ_j d_j²)^{1/2}`.
pub fn product_distance(x: &ProductCuspPoint, y: &ProductCuspPoint, params: &ModelParams) -> Result<f64> {
    same_k(x, y)?;
    Ok(x.factors.iter().zip(&y.factors).map(|(a, b)| cusp_distance(a, b, params)).fold(0.0, f64::hypot))
}

/// Product geodesics move every factor along its own geodesic at the same
/// fraction of arclength.
pub fn product_point_along(
    x: &ProductCuspPoint,
    y: &ProductCuspPoint,
    lambda: f64,
    params: &ModelParams,
) -> Result<ProductCuspPoint> {
    same_k(x, y)?;
    Ok(ProductCuspPoint {
        factors: x.factors.iter().zip(&y.factors).map(|(a, b)| cusp_point_along(a, b, lambda, params)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(u: f64, th: f64) -> CuspPoint {
        CuspPoint::new(u, th).unwrap()
    }

    #[test]
    fn universal_constants() {
        // B(5/6, 1/2)/3 from mpmath. The limit of ℓ_U(x) - x is
        // (1/6)∫₀¹ t^{-7/6}((1-t)^{-1/2} - 1) dt - 1, which equals -B(5/6, 1/2)/3.
        assert!((universal_half_angle() - 0.746_834_200_222_186_8).abs() < 1e-15);
        assert!((universal().excess_inf + 0.746_834_200_222_186_8).abs() < 1e-15);
        // θ_U(2) and ℓ_U(2), mpmath quadrature of the beta-form integrands.
        let th = universal_half_angle() - theta_tail(2.0, 1.0);
        assert!((th - 0.734_289_471_151_783_6).abs() < 1e-15);
        assert!((length_excess(2.0, 1.0) + 2.0 - 1.250_024_012_146_659_3).abs() < 1e-14);
        // Both branches of the piecewise evaluation agree at the split.
        let x0 = 2f64.powf(1.0 / 6.0);
        for x in [x0 * (1.0 - 1e-12), x0 * (1.0 + 1e-12)] {
            assert!((theta_tail(x, x - 1.0) - theta_tail(x0, x0 - 1.0)).abs() < 1e-11);
            assert!((length_excess(x, x - 1.0) - length_excess(x0, x0 - 1.0)).abs() < 1e-11);
        }
    }

    #[test]
    fn curvature_and_waist() {
        let unit = ModelParams::new(1.0).unwrap();
        assert_eq!(curvature(1.0, &unit).unwrap(), -6.0);
        assert!(curvature(0.0, &unit).is_err());
        let wp = ModelParams::default();
        for u in [0.05, 0.3, 1.0] {
            let kl = curvature(u, &wp).unwrap() * waist_length_from_u(u);
            assert!((kl + 3.0 / PI).abs() < 1e-14);
        }
        let t = (-1f64).exp();
        assert_eq!(waist_length(t).unwrap(), 2.0 * PI * PI);
        assert_eq!(u_from_t(t).unwrap(), 1.0);
        assert!(waist_length(1.0).is_err() && u_from_t(0.0).is_err());
    }

    #[test]
    fn densities() {
        let e = 1f64.exp();
        assert!((cusp_density(1.0 / e).unwrap() - e).abs() < 1e-14);
        let t: f64 = 1e-4;
        let waist = annulus_density(t.sqrt(), t).unwrap();
        assert!((waist - PI / -t.ln() / t.sqrt()).abs() < 1e-12 * waist);
        assert!(annulus_density(0.5 * t, t).is_err());
        assert!(cusp_density(1.0).is_err());
    }

    #[test]
    fn radial_and_stratum_distances() {
        let p = ModelParams::default();
        let c = p.c();
        assert!((cusp_distance(&pt(0.2, 1.0), &pt(0.7, 1.0), &p) - 0.5 * c).abs() < 1e-15);
        assert_eq!(cusp_distance(&CuspPoint::stratum(), &pt(0.3, 2.0), &p), 0.3 * c);
        let d = cusp_distance(&pt(0.3, 0.0), &pt(0.4, 5.0), &p);
        assert!(d < 0.7 * c);
        let mid = cusp_point_along(&pt(0.3, 0.0), &CuspPoint::stratum(), 0.5, &p);
        assert!((mid.u - 0.15).abs() < 1e-16);
    }

    #[test]
    fn symmetric_and_midpoint_consistent() {
        let p = ModelParams::default();
        for (a, b) in [(pt(0.3, 0.0), pt(0.5, 0.4)), (pt(0.5, 0.0), pt(0.5, 20.0)), (pt(0.1, 1.0), pt(0.9, 1.0001))] {
            let d = cusp_distance(&a, &b, &p);
            assert!((d - cusp_distance(&b, &a, &p)).abs() < 1e-13 * d);
            for lam in [0.1, 0.5, 0.9] {
                let m = cusp_point_along(&a, &b, lam, &p);
                assert!((cusp_distance(&a, &m, &p) - lam * d).abs() < 1e-10 * d);
                assert!((cusp_distance(&m, &b, &p) - (1.0 - lam) * d).abs() < 1e-10 * d);
            }
        }
    }

    #[test]
    fn geodesic_conserves_invariants() {
        let p = ModelParams::default();
        let path = geodesic(&pt(0.5, 0.0), &CuspTangent { radial: 0.3, angular: 0.8 }, 1.0, 10, &p).unwrap();
        let j0 = path.samples[0].clairaut(&p);
        let s0 = path.samples[0].velocity.speed();
        for s in &path.samples {
            assert!((s.clairaut(&p) - j0).abs() < 1e-9);
            assert!((s.velocity.speed() - s0).abs() < 1e-9);
        }
        let d = integrated_radial_distance(&pt(0.3, 0.0), &p).unwrap();
        assert!((d - distance_to_stratum(&pt(0.3, 0.0), &p)).abs() < 1e-10);
    }

    #[test]
    fn shooting_matches_closed_form() {
        let p = ModelParams::default();
        let (a, b) = (pt(0.4, 0.0), pt(0.6, 1.5));
        let shot = shoot_distance(&a, &b, &p).unwrap();
        let g = CuspGeodesic::new(&a, &b, &p);
        assert!((shot.length - g.length()).abs() < 1e-8 * g.length(), "{} {}", shot.length, g.length());
        let dir = g.initial_direction();
        assert!((dir.radial - shot.direction.radial).abs() < 1e-6);
        assert!((dir.angular - shot.direction.angular).abs() < 1e-6);
    }
}
