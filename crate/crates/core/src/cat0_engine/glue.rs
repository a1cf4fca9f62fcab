use serde::Serialize;

use super::GeodesicSpace;
use crate::error::{contract, domain, GeomError, Result};

/// A point of `X₁ ⊔_A X₂`. Points of `A` have two representatives; both
/// give the same distances.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Side<P1, P2> {
    Left(P1),
    Right(P2),
}

type Embed<P> = Box<dyn Fn(&[f64]) -> P + Send + Sync>;

/// A complete convex set `A` given by a 0-, 1- or 2-parameter family and its
/// isometric embeddings into both sides.
pub struct GlueSet<P1, P2> {
    bounds: Vec<(f64, f64)>,
    left: Embed<P1>,
    right: Embed<P2>,
}

impl<P1, P2> GlueSet<P1, P2> {
    pub fn new(
        bounds: Vec<(f64, f64)>,
        left: impl Fn(&[f64]) -> P1 + Send + Sync + 'static,
        right: impl Fn(&[f64]) -> P2 + Send + Sync + 'static,
    ) -> Result<Self> {
        if bounds.len() > 2 {
            return contract("glue sets have at most two parameters");
        }
        if bounds.iter().any(|(lo, hi)| !(lo <= hi && lo.is_finite() && hi.is_finite())) {
            return contract("glue parameter bounds must be finite intervals");
        }
        Ok(Self { bounds, left: Box::new(left), right: Box::new(right) })
    }

    /// A single glue point.
    pub fn point(left: P1, right: P2) -> Self
    where
        P1: Clone + Send + Sync + 'static,
        P2: Clone + Send + Sync + 'static,
    {
        Self { bounds: Vec::new(), left: Box::new(move |_| left.clone()), right: Box::new(move |_| right.clone()) }
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn left(&self, a: &[f64]) -> P1 {
        (self.left)(a)
    }

    pub fn right(&self, a: &[f64]) -> P2 {
        (self.right)(a)
    }
}

/// `X₁ ⊔_A X₂` with the Reshetnyak distance.
pub struct GluedSpace<X1: GeodesicSpace, X2: GeodesicSpace> {
    pub left: X1,
    pub right: X2,
    set: GlueSet<X1::Point, X2::Point>,
}

/// Glues two spaces after checking on a parameter grid that the two
/// embeddings of `A` induce the same distances.
pub fn glue<X1: GeodesicSpace, X2: GeodesicSpace>(
    left: X1,
    right: X2,
    set: GlueSet<X1::Point, X2::Point>,
) -> Result<GluedSpace<X1, X2>> {
    let samples = grid(&set.bounds, 5);
    for a in &samples {
        for b in &samples {
            let d1 = left.distance(&set.left(a), &set.left(b))?;
            let d2 = right.distance(&set.right(a), &set.right(b))?;
            if (d1 - d2).abs() > 1e-9 * (1.0 + d1.max(d2)) {
                return domain(format!("glue maps are not isometric at {a:?}, {b:?}: {d1} vs {d2}"));
            }
        }
    }
    Ok(GluedSpace { left, right, set })
}

fn grid(bounds: &[(f64, f64)], n: usize) -> Vec<Vec<f64>> {
    let axis = |(lo, hi): (f64, f64)| -> Vec<f64> {
        if n == 1 || lo == hi {
            return vec![lo];
        }
        (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
    };
    match bounds {
        [] => vec![Vec::new()],
        [b] => axis(*b).into_iter().map(|a| vec![a]).collect(),
        [b0, b1] => {
            let (a0, a1) = (axis(*b0), axis(*b1));
            a0.iter().flat_map(|&x| a1.iter().map(move |&y| vec![x, y])).collect()
        }
        _ => unreachable!("glue sets have at most two parameters"),
    }
}

/// Golden-section minimization of `f` on `[lo, hi]`.
fn golden(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    const R: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - R * (hi - lo);
    let mut x2 = lo + R * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo <= 1e-9 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - R * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + R * (hi - lo);
            f2 = f(x2);
        }
    }
    // Keep the endpoints in play: minimizers on the boundary of A are common.
    [(lo, f(lo)), (hi, f(hi)), (x1, f1), (x2, f2)]
        .into_iter()
        .fold((lo, f64::INFINITY), |b, c| if c.1 < b.1 { c } else { b })
}

/// Polishes a golden-section minimizer: value comparisons cannot place a
/// smooth minimum better than `√ε`, so bisect on a Richardson-extrapolated
/// central-difference derivative instead. The difference step follows the
/// shorter leg, which sets the curvature scale of the objective. Minimizers on
/// the boundary of the parameter interval, or where the derivative does not
/// change sign nearby (a kink), are left alone.
fn polish(a: f64, lo: f64, hi: f64, legs: impl Fn(f64) -> (f64, f64)) -> f64 {
    let f = |x: f64| {
        let (l, r) = legs(x);
        l + r
    };
    let (l0, r0) = legs(a);
    let h = 1e-3 * l0.min(r0);
    let delta = 1e-6 * (1.0 + a.abs() + (hi - lo));
    if h == 0.0 || a - delta - h <= lo || a + delta + h >= hi {
        return a;
    }
    let d = |x: f64, h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    let g = |x: f64| (4.0 * d(x, 0.5 * h) - d(x, h)) / 3.0;
    let (mut l, mut r) = (a - delta, a + delta);
    if !(g(l) < 0.0 && g(r) > 0.0) {
        return a;
    }
    for _ in 0..60 {
        let m = 0.5 * (l + r);
        if m <= l || m >= r {
            break;
        }
        if g(m) < 0.0 {
            l = m;
        } else {
            r = m;
        }
    }
    let m = 0.5 * (l + r);
    if f(m) <= f(a) * (1.0 + 8.0 * f64::EPSILON) {
        m
    } else {
        a
    }
}

/// The optimal crossing of `A` by a geodesic from the left to the right side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Crossing {
    pub param: Vec<f64>,
    pub left_length: f64,
    pub right_length: f64,
}

impl Crossing {
    pub fn length(&self) -> f64 {
        self.left_length + self.right_length
    }
}

impl<X1: GeodesicSpace, X2: GeodesicSpace> GluedSpace<X1, X2> {
    pub fn glue_set(&self) -> &GlueSet<X1::Point, X2::Point> {
        &self.set
    }

    /// `inf_a d₁(x, i₁(a)) + d₂(i₂(a), y)`: grid search (64 points) and
    /// golden-section refinement.
    pub fn crossing(&self, x: &X1::Point, y: &X2::Point) -> Result<Crossing> {
        let cost = |a: &[f64]| -> Result<(f64, f64)> {
            Ok((self.left.distance(x, &self.set.left(a))?, self.right.distance(&self.set.right(a), y)?))
        };
        let total = |a: &[f64]| cost(a).map(|(l, r)| l + r).unwrap_or(f64::INFINITY);
        let legs = |a: &[f64]| cost(a).unwrap_or((f64::INFINITY, f64::INFINITY));
        let bounds = &self.set.bounds;
        let param = match bounds.len() {
            0 => Vec::new(),
            1 => {
                let (lo, hi) = bounds[0];
                let pts = grid(bounds, 64);
                let best = argmin(&pts, &total);
                let h = (hi - lo) / 63.0;
                let a = pts[best][0];
                let (a, _) = golden((a - h).max(lo), (a + h).min(hi), |t| total(&[t]));
                vec![polish(a, lo, hi, |t| legs(&[t]))]
            }
            _ => {
                let pts = grid(bounds, 8);
                let mut a = pts[argmin(&pts, &total)].clone();
                let mut h: Vec<f64> = bounds.iter().map(|(lo, hi)| (hi - lo) / 7.0).collect();
                let mut fa = total(&a);
                for _ in 0..100 {
                    let before = fa;
                    for k in 0..2 {
                        let (lo, hi) = bounds[k];
                        let (t, ft) = golden((a[k] - h[k]).max(lo), (a[k] + h[k]).min(hi), |t| {
                            let mut trial = a.clone();
                            trial[k] = t;
                            total(&trial)
                        });
                        if ft <= fa {
                            a[k] = t;
                            fa = ft;
                        }
                    }
                    if before - fa <= 1e-15 * (1.0 + fa) {
                        h.iter_mut().for_each(|v| *v *= 0.5);
                        if h.iter().zip(bounds).all(|(v, (lo, hi))| *v <= 1e-12 * (1.0 + hi - lo)) {
                            break;
                        }
                    }
                }
                for _ in 0..2 {
                    for k in 0..2 {
                        let (lo, hi) = bounds[k];
                        let fixed = a.clone();
                        a[k] = polish(a[k], lo, hi, |t| {
                            let mut trial = fixed.clone();
                            trial[k] = t;
                            legs(&trial)
                        });
                    }
                }
                a
            }
        };
        let (left_length, right_length) = cost(&param)?;
        if !(left_length + right_length).is_finite() {
            return Err(GeomError::NonConvergence { what: "glue crossing", residual: f64::INFINITY });
        }
        Ok(Crossing { param, left_length, right_length })
    }
}

fn argmin(pts: &[Vec<f64>], f: &impl Fn(&[f64]) -> f64) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, p) in pts.iter().enumerate() {
        let v = f(p);
        if v < best.1 {
            best = (i, v);
        }
    }
    best.0
}

impl<X1: GeodesicSpace, X2: GeodesicSpace> GeodesicSpace for GluedSpace<X1, X2> {
    type Point = Side<X1::Point, X2::Point>;

    fn distance(&self, x: &Self::Point, y: &Self::Point) -> Result<f64> {
        match (x, y) {
            (Side::Left(a), Side::Left(b)) => self.left.distance(a, b),
            (Side::Right(a), Side::Right(b)) => self.right.distance(a, b),
            (Side::Left(a), Side::Right(b)) | (Side::Right(b), Side::Left(a)) => {
                self.crossing(a, b).map(|c| c.length())
            }
        }
    }

    fn point_along(&self, x: &Self::Point, y: &Self::Point, lambda: f64) -> Result<Self::Point> {
        let (a, b, lam) = match (x, y) {
            (Side::Left(a), Side::Left(b)) => return self.left.point_along(a, b, lambda).map(Side::Left),
            (Side::Right(a), Side::Right(b)) => return self.right.point_along(a, b, lambda).map(Side::Right),
            (Side::Left(a), Side::Right(b)) => (a, b, lambda),
            (Side::Right(b), Side::Left(a)) => (a, b, 1.0 - lambda),
        };
        let c = self.crossing(a, b)?;
        let s = lam * c.length();
        if s <= c.left_length {
            if c.left_length == 0.0 {
                return Ok(Side::Left(a.clone()));
            }
            let m = self.set.left(&c.param);
            self.left.point_along(a, &m, s / c.left_length).map(Side::Left)
        } else {
            let m = self.set.right(&c.param);
            self.right.point_along(&m, b, (s - c.left_length) / c.right_length).map(Side::Right)
        }
    }
}
