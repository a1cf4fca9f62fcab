//! Funk and Hilbert metrics on convex polytopes `Ω = ∩ {a_i·x ≤ b_i}`, and the
//! WP-Funk metric on the product cusp model.
//!
//! Values are weak metrics: `F(x, x) = 0` and the triangle inequality hold,
//! symmetry does not. They are finite for interior points of a polytope.

use std::fmt::Write as _;

use serde::Serialize;

use crate::cusp_model::ProductCuspPoint;
use crate::error::{contract, domain, GeomError, Result};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Intersection of half-spaces with unit normals and a strict interior point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexPolytope {
    normals: Vec<Vec<f64>>,
    offsets: Vec<f64>,
    interior: Vec<f64>,
}

impl ConvexPolytope {
    /// Builds `∩ {a·x ≤ b}` from `(a, b)` pairs, normalizing each `a`.
    pub fn new(halfspaces: Vec<(Vec<f64>, f64)>) -> Result<Self> {
        let Some(dim) = halfspaces.first().map(|(a, _)| a.len()) else {
            return contract("a polytope needs at least one half-space");
        };
        if dim == 0 {
            return contract("dimension must be positive");
        }
        let mut normals = Vec::with_capacity(halfspaces.len());
        let mut offsets = Vec::with_capacity(halfspaces.len());
        for (a, b) in halfspaces {
            if a.len() != dim {
                return contract("half-space normals have mixed dimensions");
            }
            let mut n = dot(&a, &a).sqrt();
            if !(n > 0.0 && n.is_finite()) || !b.is_finite() {
                return domain("half-space normal must be nonzero and finite");
            }
            // Already unit up to rounding: keep as is so text round trips are exact.
            if (n - 1.0).abs() <= 4.0 * f64::EPSILON {
                n = 1.0;
            }
            normals.push(a.iter().map(|x| x / n).collect());
            offsets.push(b / n);
        }
        let mut poly = Self { normals, offsets, interior: vec![0.0; dim] };
        poly.interior = poly.find_interior()?;
        Ok(poly)
    }

    /// Axis-aligned box `Π [lo_k, hi_k]`.
    pub fn cube(lo: &[f64], hi: &[f64]) -> Result<Self> {
        let d = lo.len();
        let mut hs = Vec::with_capacity(2 * d);
        for k in 0..d {
            let mut e = vec![0.0; d];
            e[k] = 1.0;
            hs.push((e.clone(), hi[k]));
            e[k] = -1.0;
            hs.push((e, -lo[k]));
        }
        Self::new(hs)
    }

    pub fn dim(&self) -> usize {
        self.interior.len()
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn interior_point(&self) -> &[f64] {
        &self.interior
    }

    pub fn halfspaces(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.normals.iter().map(Vec::as_slice).zip(self.offsets.iter().copied())
    }

    /// Distance from `x` to each supporting hyperplane, `b_i - a_i·x`.
    pub fn slacks(&self, x: &[f64]) -> Vec<f64> {
        self.halfspaces().map(|(a, b)| b - dot(a, x)).collect()
    }

    pub fn contains_interior(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && self.slacks(x).iter().all(|&s| s > 0.0)
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if !self.contains_interior(x) {
            return domain(format!("{x:?} is not an interior point"));
        }
        Ok(())
    }

    /// Minimizes `max_i (a_i·x - b_i)` by subgradient steps; any negative value
    /// certifies an interior point.
    fn find_interior(&self) -> Result<Vec<f64>> {
        let d = self.dim();
        let scale = self.offsets.iter().fold(1.0f64, |m, b| m.max(b.abs()));
        let violation = |x: &[f64]| -> (f64, usize) {
            self.halfspaces()
                .enumerate()
                .map(|(i, (a, b))| (dot(a, x) - b, i))
                .fold((f64::NEG_INFINITY, 0), |m, v| if v.0 > m.0 { v } else { m })
        };
        let mut x = vec![0.0; d];
        let (mut best, mut best_val) = (x.clone(), violation(&x).0);
        for k in 0..4000 {
            let (v, i) = violation(&x);
            if v < best_val {
                best_val = v;
                best.clone_from(&x);
            }
            let step = scale / (1.0 + k as f64).sqrt();
            for (xj, aj) in x.iter_mut().zip(&self.normals[i]) {
                *xj -= step * aj;
            }
        }
        if best_val < 0.0 {
            Ok(best)
        } else {
            Err(GeomError::Domain(format!("polytope has empty interior (best violation {best_val:e})")))
        }
    }

    /// Parses one half-space per line, `a_1 ... a_d b`; `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut hs = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let nums: std::result::Result<Vec<f64>, _> = line.split_whitespace().map(str::parse).collect();
            let mut nums = nums.map_err(|e| GeomError::Parse(format!("line {}: {e}", ln + 1)))?;
            if nums.len() < 2 {
                return Err(GeomError::Parse(format!("line {}: need a_1 .. a_d b", ln + 1)));
            }
            let b = nums.pop().unwrap_or_default();
            hs.push((nums, b));
        }
        Self::new(hs)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (a, b) in self.halfspaces() {
            for x in a {
                let _ = write!(out, "{x:e} ");
            }
            let _ = writeln!(out, "{b:e}");
        }
        out
    }
}

/// `F(x, y) = log(t*/(t* - 1))`, where `x + t*(y - x)` is the first boundary
/// point on the ray from `x` through `y`. A ray that never leaves `Ω` gives 0.
pub fn funk_ray(omega: &ConvexPolytope, x: &[f64], y: &[f64]) -> Result<f64> {
    omega.check(x)?;
    omega.check(y)?;
    let dir: Vec<f64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
    let sx = omega.slacks(x);
    let t_exit = omega
        .normals
        .iter()
        .zip(&sx)
        .filter_map(|(a, s)| {
            let rate = dot(a, &dir);
            (rate > 0.0).then(|| s / rate)
        })
        .fold(f64::INFINITY, f64::min);
    if t_exit.is_infinite() {
        return Ok(0.0);
    }
    Ok(-(-t_exit.recip()).ln_1p())
}

/// `F(x, y) = sup_π log(d(x, π)/d(y, π))` over supporting hyperplanes, with
/// the maximizing face (`None` when the supremum is the value 0 contributed by
/// hyperplanes at infinity).
pub fn funk_sup_with_face(omega: &ConvexPolytope, x: &[f64], y: &[f64]) -> Result<(f64, Option<usize>)> {
    omega.check(x)?;
    omega.check(y)?;
    let (sx, sy) = (omega.slacks(x), omega.slacks(y));
    let mut best = (0.0, None);
    for (i, (a, b)) in sx.iter().zip(&sy).enumerate() {
        let v = (a / b).ln();
        if v > best.0 {
            best = (v, Some(i));
        }
    }
    Ok(best)
}

pub fn funk_sup(omega: &ConvexPolytope, x: &[f64], y: &[f64]) -> Result<f64> {
    funk_sup_with_face(omega, x, y).map(|(v, _)| v)
}

/// Hilbert metric `½ (F(x, y) + F(y, x))`.
pub fn hilbert(omega: &ConvexPolytope, x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(0.5 * (funk_ray(omega, x, y)? + funk_ray(omega, y, x)?))
}

/// WP-Funk metric on the product cusp model: `max_j log(u_j(x)/u_j(y))`,
/// the distance to stratum `j` being `c·u_j`. May be negative.
pub fn wp_funk_model(x: &ProductCuspPoint, y: &ProductCuspPoint) -> Result<f64> {
    if x.k() != y.k() {
        return contract(format!("factor counts differ: {} vs {}", x.k(), y.k()));
    }
    let mut best = f64::NEG_INFINITY;
    for (a, b) in x.factors.iter().zip(&y.factors) {
        if !(a.u > 0.0 && b.u > 0.0) {
            return domain("WP-Funk needs interior points (u > 0)");
        }
        best = best.max((a.u / b.u).ln());
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cusp_model::CuspPoint;

    #[test]
    fn unit_square() {
        let sq = ConvexPolytope::cube(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let (x, y) = ([0.5, 0.5], [0.75, 0.5]);
        assert!((funk_ray(&sq, &x, &y).unwrap() - 2f64.ln()).abs() < 1e-15);
        let (v, face) = funk_sup_with_face(&sq, &x, &y).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-15);
        let (a, b) = sq.halfspaces().nth(face.unwrap()).unwrap();
        assert_eq!((a, b), (&[1.0, 0.0][..], 1.0));
        // Backwards the exit is (0, 0.5): log(0.75/0.5).
        assert!((hilbert(&sq, &x, &y).unwrap() - 0.5 * 3f64.ln()).abs() < 1e-15);
        assert_eq!(funk_ray(&sq, &x, &x).unwrap(), 0.0);
        assert_eq!(funk_sup(&sq, &x, &x).unwrap(), 0.0);
        assert!(funk_ray(&sq, &x, &[1.0, 0.5]).is_err());
    }

    #[test]
    fn slab_never_exits() {
        let slab = ConvexPolytope::new(vec![(vec![1.0, 0.0], 1.0), (vec![-1.0, 0.0], 1.0)]).unwrap();
        assert_eq!(funk_ray(&slab, &[0.0, 0.0], &[0.0, 5.0]).unwrap(), 0.0);
        assert_eq!(funk_sup(&slab, &[0.0, 0.0], &[0.0, 5.0]).unwrap(), 0.0);
    }

    #[test]
    fn empty_interior_rejected() {
        let r = ConvexPolytope::new(vec![(vec![1.0], 0.0), (vec![-1.0], 0.0)]);
        assert!(r.is_err());
    }

    #[test]
    fn text_round_trip() {
        let sq = ConvexPolytope::cube(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let back = ConvexPolytope::from_text(&sq.to_text()).unwrap();
        assert_eq!(back.halfspaces().count(), 4);
        assert!(ConvexPolytope::from_text("1 x 2").is_err());
    }

    #[test]
    fn wp_funk_examples() {
        let x = ProductCuspPoint::new(vec![CuspPoint::new(1.0, 0.0).unwrap()]).unwrap();
        let y = ProductCuspPoint::new(vec![CuspPoint::new((-1f64).exp(), 3.0).unwrap()]).unwrap();
        assert!((wp_funk_model(&x, &y).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(wp_funk_model(&x, &x).unwrap(), 0.0);
        assert!((wp_funk_model(&y, &x).unwrap() + 1.0).abs() < 1e-15);
    }
}
