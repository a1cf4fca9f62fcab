use num_complex::Complex64;

use super::GeodesicSpace;
use crate::cusp_model::{self, CuspPoint, ModelParams, ProductCuspPoint};
use crate::error::{contract, domain, Result};

/// `ℝⁿ` with the Euclidean metric.
#[derive(Debug, Clone, Copy)]
pub struct Euclidean {
    pub dim: usize,
}

impl Euclidean {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return contract(format!("point of dimension {} in ℝ^{}", x.len(), self.dim));
        }
        Ok(())
    }
}

impl GeodesicSpace for Euclidean {
    type Point = Vec<f64>;

    fn distance(&self, x: &Vec<f64>, y: &Vec<f64>) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        Ok(x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
    }

    fn point_along(&self, x: &Vec<f64>, y: &Vec<f64>, lambda: f64) -> Result<Vec<f64>> {
        self.check(x)?;
        self.check(y)?;
        Ok(x.iter().zip(y).map(|(a, b)| a + lambda * (b - a)).collect())
    }
}

/// `[0, ∞)`, the building block of tripods.
#[derive(Debug, Clone, Copy)]
pub struct HalfLine;

impl GeodesicSpace for HalfLine {
    type Point = f64;

    fn distance(&self, x: &f64, y: &f64) -> Result<f64> {
        if !(*x >= 0.0 && *y >= 0.0) {
            return domain("half-line points must be nonnegative");
        }
        Ok((x - y).abs())
    }

    fn point_along(&self, x: &f64, y: &f64, lambda: f64) -> Result<f64> {
        self.distance(x, y)?;
        Ok(x + lambda * (y - x))
    }
}

/// The upper half-plane with curvature `-1`.
#[derive(Debug, Clone, Copy)]
pub struct HyperbolicPlane;

impl HyperbolicPlane {
    fn check(z: &Complex64) -> Result<()> {
        if !(z.im > 0.0 && z.re.is_finite() && z.im.is_finite()) {
            return domain(format!("{z} is not in the upper half-plane"));
        }
        Ok(())
    }

    /// Hyperboloid coordinates `(t, a, b)` with `t² - a² - b² = 1`.
    fn lift(z: &Complex64) -> [f64; 3] {
        let (x, y) = (z.re, z.im);
        let r2 = x * x + y * y;
        [(r2 + 1.0) / (2.0 * y), x / y, (r2 - 1.0) / (2.0 * y)]
    }

    fn project(p: &[f64; 3]) -> Complex64 {
        let y = 1.0 / (p[0] - p[2]);
        Complex64::new(p[1] * y, y)
    }
}

impl GeodesicSpace for HyperbolicPlane {
    type Point = Complex64;

    fn distance(&self, z: &Complex64, w: &Complex64) -> Result<f64> {
        Self::check(z)?;
        Self::check(w)?;
        Ok(2.0 * ((z - w).norm() / (2.0 * (z.im * w.im).sqrt())).asinh())
    }

    fn point_along(&self, z: &Complex64, w: &Complex64, lambda: f64) -> Result<Complex64> {
        let d = self.distance(z, w)?;
        if d == 0.0 {
            return Ok(*z);
        }
        let (p, q) = (Self::lift(z), Self::lift(w));
        let (a, b) = if d < 1e-6 {
            (1.0 - lambda, lambda)
        } else {
            (((1.0 - lambda) * d).sinh() / d.sinh(), (lambda * d).sinh() / d.sinh())
        };
        let m: [f64; 3] = std::array::from_fn(|k| a * p[k] + b * q[k]);
        // Renormalize onto the hyperboloid (exact up to rounding for d ≥ 1e-6).
        let n = (m[0] * m[0] - m[1] * m[1] - m[2] * m[2]).sqrt();
        Ok(Self::project(&m.map(|v| v / n)))
    }
}

/// One cusp model `c²(du² + ¼u⁶ dθ²)` completed by its stratum point.
#[derive(Debug, Clone, Copy, Default)]
pub struct CuspSpace {
    pub params: ModelParams,
}

impl GeodesicSpace for CuspSpace {
    type Point = CuspPoint;

    fn distance(&self, x: &CuspPoint, y: &CuspPoint) -> Result<f64> {
        Ok(cusp_model::cusp_distance(x, y, &self.params))
    }

    fn point_along(&self, x: &CuspPoint, y: &CuspPoint, lambda: f64) -> Result<CuspPoint> {
        Ok(cusp_model::cusp_point_along(x, y, lambda, &self.params))
    }
}

/// Riemannian product of cusp models.
#[derive(Debug, Clone, Copy, Default)]
pub struct ProductCuspSpace {
    pub params: ModelParams,
}

impl GeodesicSpace for ProductCuspSpace {
    type Point = ProductCuspPoint;

    fn distance(&self, x: &ProductCuspPoint, y: &ProductCuspPoint) -> Result<f64> {
        cusp_model::product_distance(x, y, &self.params)
    }

    fn point_along(&self, x: &ProductCuspPoint, y: &ProductCuspPoint, lambda: f64) -> Result<ProductCuspPoint> {
        cusp_model::product_point_along(x, y, lambda, &self.params)
    }
}
