//! Geodesic metric spaces and CAT(0) diagnostics: the comparison inequality,
//! Alexandrov angles, Reshetnyak gluing and FR (finite-rank) reports.

mod fr;
mod glue;
mod spaces;

pub use fr::{fr_diagnostic, FrReport};
pub use glue::{glue, GlueSet, GluedSpace, Side};
pub use spaces::{CuspSpace, Euclidean, HalfLine, HyperbolicPlane, ProductCuspSpace};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{contract, domain, Result};
use crate::rng::SplitMix64;

/// A uniquely geodesic metric space with constant-speed geodesics.
pub trait GeodesicSpace: Sync {
    type Point: Clone + Send + Sync + std::fmt::Debug;

    fn distance(&self, x: &Self::Point, y: &Self::Point) -> Result<f64>;

    /// The point at fraction `λ ∈ [0, 1]` of the way from `x` to `y`.
    fn point_along(&self, x: &Self::Point, y: &Self::Point, lambda: f64) -> Result<Self::Point>;
}

/// 17 Chebyshev points in `(0, 1)`.
pub fn lambda_grid() -> [f64; 17] {
    std::array::from_fn(|k| 0.5 * (1.0 - ((2 * k + 1) as f64 * std::f64::consts::PI / 34.0).cos()))
}

/// Minimum over `lambdas` of the comparison slack
/// `(1-λ) d²(P,Q) + λ d²(P,R) - λ(1-λ) d²(Q,R) - d²(P, Q_λ)`,
/// `Q_λ` running along the geodesic from `Q` to `R`. CAT(0) means `≥ 0`.
pub fn cat0_check<S: GeodesicSpace>(
    space: &S,
    p: &S::Point,
    q: &S::Point,
    r: &S::Point,
    lambdas: &[f64],
) -> Result<f64> {
    let pq = space.distance(p, q)?.powi(2);
    let pr = space.distance(p, r)?.powi(2);
    let qr = space.distance(q, r)?.powi(2);
    let mut min = f64::INFINITY;
    for &l in lambdas {
        let ql = space.point_along(q, r, l)?;
        let d = space.distance(p, &ql)?;
        min = min.min((1.0 - l) * pq + l * pr - l * (1.0 - l) * qr - d * d);
    }
    Ok(min)
}

/// Result of a sampled CAT(0) run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlackReport {
    pub trials: usize,
    pub min_slack: f64,
    pub max_slack: f64,
    pub worst_trial: usize,
    pub seed: u64,
}

/// Runs [`cat0_check`] on `trials` random triangles drawn by `sample` from
/// per-trial SplitMix64 streams, in parallel, with deterministic output.
pub fn cat0_sample<S: GeodesicSpace>(
    space: &S,
    trials: usize,
    seed: u64,
    sample: impl Fn(&mut SplitMix64) -> [S::Point; 3] + Sync,
) -> Result<SlackReport> {
    if trials == 0 {
        return contract("need at least one trial");
    }
    let grid = lambda_grid();
    let slacks: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = SplitMix64::stream(seed, i as u64);
            let [p, q, r] = sample(&mut rng);
            cat0_check(space, &p, &q, &r, &grid)
        })
        .collect::<Result<_>>()?;
    let (mut worst, mut min, mut max) = (0, f64::INFINITY, f64::NEG_INFINITY);
    for (i, &s) in slacks.iter().enumerate() {
        if s < min {
            min = s;
            worst = i;
        }
        max = max.max(s);
    }
    Ok(SlackReport { trials, min_slack: min, max_slack: max, worst_trial: worst, seed })
}

/// Extrapolated Alexandrov angle with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleEstimate {
    pub value: f64,
    pub error: f64,
    /// Comparison angle at the smallest distance.
    pub raw: f64,
}

/// Alexandrov angle at `q` between the geodesics to `x` and `y`: comparison
/// angles of the points at distance `s` from `q` on both geodesics, for each
/// `s` in `distances`, extrapolated to `s → 0` by Neville's scheme.
pub fn alexandrov_angle<S: GeodesicSpace>(
    space: &S,
    q: &S::Point,
    x: &S::Point,
    y: &S::Point,
    distances: &[f64],
) -> Result<AngleEstimate> {
    let (dx, dy) = (space.distance(q, x)?, space.distance(q, y)?);
    if dx == 0.0 || dy == 0.0 {
        return domain("angle needs geodesics of positive length");
    }
    if distances.is_empty() {
        return contract("need at least one distance");
    }
    let mut s_vals = Vec::with_capacity(distances.len());
    let mut angles = Vec::with_capacity(distances.len());
    for &s in distances {
        if !(s > 0.0 && s <= dx.min(dy)) {
            return domain(format!("sample distance {s} outside (0, {}]", dx.min(dy)));
        }
        let xs = space.point_along(q, x, s / dx)?;
        let ys = space.point_along(q, y, s / dy)?;
        let d = space.distance(&xs, &ys)?;
        angles.push(2.0 * (0.5 * d / s).min(1.0).asin());
        s_vals.push(s);
    }
    let raw = *angles.last().unwrap_or(&0.0);
    // Neville tableau at s = 0; the last two diagonal entries give the error.
    let n = angles.len();
    let mut p = angles.clone();
    let mut prev = p[n - 1];
    for m in 1..n {
        prev = p[n - 1];
        for i in (m..n).rev() {
            let (si, sj) = (s_vals[i], s_vals[i - m]);
            p[i] = (sj * p[i] - si * p[i - 1]) / (sj - si);
        }
    }
    let value = p[n - 1].clamp(0.0, std::f64::consts::PI);
    Ok(AngleEstimate { value, error: (p[n - 1] - prev).abs(), raw })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn grid_is_symmetric_chebyshev() {
        let g = lambda_grid();
        assert!(g.iter().all(|&l| l > 0.0 && l < 1.0));
        for k in 0..17 {
            assert!((g[k] + g[16 - k] - 1.0).abs() < 1e-15);
        }
        assert!((g[8] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn euclidean_slack_vanishes() {
        let e = Euclidean::new(2);
        let s = cat0_check(&e, &vec![0.0, 0.0], &vec![1.0, 0.3], &vec![-0.2, 0.9], &lambda_grid()).unwrap();
        assert!(s.abs() < 1e-15);
        let s = cat0_check(&e, &vec![0.0, 0.0], &vec![1.0, 1.0], &vec![2.0, 2.0], &lambda_grid()).unwrap();
        assert!(s.abs() < 1e-14);
    }

    #[test]
    fn hyperbolic_slack_positive() {
        let h = HyperbolicPlane;
        let pts = [Complex64::new(0.0, 1.0), Complex64::new(2.0, 0.5), Complex64::new(-1.0, 3.0)];
        assert!(cat0_check(&h, &pts[0], &pts[1], &pts[2], &lambda_grid()).unwrap() > 1e-3);
    }

    #[test]
    fn euclidean_angle() {
        let e = Euclidean::new(2);
        let (q, x) = (vec![0.0, 0.0], vec![1.0, 0.0]);
        let y = vec![0.5, 0.75f64.sqrt()];
        let a = alexandrov_angle(&e, &q, &x, &y, &[0.5, 0.25, 0.125]).unwrap();
        assert!((a.value - std::f64::consts::FRAC_PI_3).abs() < 1e-12);
        assert_eq!(alexandrov_angle(&e, &q, &x, &x, &[0.5]).unwrap().value, 0.0);
        assert!(alexandrov_angle(&e, &q, &q, &x, &[0.5]).is_err());
    }

    #[test]
    fn hyperbolic_angle_extrapolates() {
        // Geodesics from i along the imaginary axis and the unit circle meet at π/2.
        let h = HyperbolicPlane;
        let q = Complex64::new(0.0, 1.0);
        let x = Complex64::new(0.0, 3.0);
        let y = Complex64::new(0.6, 0.8);
        let s: Vec<f64> = (0..6).map(|k| 0.2 * 0.5f64.powi(k)).collect();
        let a = alexandrov_angle(&h, &q, &x, &y, &s).unwrap();
        assert!((a.value - std::f64::consts::FRAC_PI_2).abs() < 1e-8, "{:?}", a);
    }
}
