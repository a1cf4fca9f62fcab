use serde::Serialize;

use super::GeodesicSpace;
use crate::error::{contract, Result};

/// Diameter versus circumradius of a finite point set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrReport {
    pub diameter: f64,
    pub circumradius: f64,
    /// `D/R`, between 1 and 2.
    pub ratio: f64,
    /// Smallest `k` with `D/R ≥ √2 √((k+1)/k)`; `None` when `D/R ≤ √2`.
    pub implied_k: Option<u64>,
    /// Indices of the points on the final circumsphere.
    pub active: Vec<usize>,
    /// Whether the equidistance refinement converged; otherwise the radius is
    /// the best iterated-midpoint estimate.
    pub converged: bool,
}

/// The point reached by walking geodesically through `points[idx]` with
/// barycentric weights `w`: `c₁ = p₀`, `c_j = c_{j-1} →_{w_j/(w₀+…+w_j)} p_j`.
/// In Euclidean space this is exactly `Σ w_i p_i`.
fn inductive_mean<S: GeodesicSpace>(space: &S, points: &[S::Point], idx: &[usize], w: &[f64]) -> Result<S::Point> {
    let mut c = points[idx[0]].clone();
    let mut acc = w[0];
    for (j, &i) in idx.iter().enumerate().skip(1) {
        acc += w[j];
        if acc != 0.0 {
            c = space.point_along(&c, &points[i], w[j] / acc)?;
        }
    }
    Ok(c)
}

fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Newton iteration for the weights making the inductive mean equidistant
/// from all points of `idx`.
fn equidistant_center<S: GeodesicSpace>(
    space: &S,
    points: &[S::Point],
    idx: &[usize],
    scale: f64,
) -> Result<Option<(Vec<f64>, S::Point, f64)>> {
    let m = idx.len();
    let full = |free: &[f64]| -> Vec<f64> {
        let mut w = Vec::with_capacity(m);
        w.push(1.0 - free.iter().sum::<f64>());
        w.extend_from_slice(free);
        w
    };
    let residual = |free: &[f64]| -> Result<(Vec<f64>, S::Point, f64)> {
        let c = inductive_mean(space, points, idx, &full(free))?;
        let d0 = space.distance(&c, &points[idx[0]])?;
        let mut r = Vec::with_capacity(m - 1);
        for &i in &idx[1..] {
            let di = space.distance(&c, &points[i])?;
            r.push((di - d0) * (di + d0));
        }
        Ok((r, c, d0))
    };
    // Far-off weights extrapolate geodesics beyond their ends, which some
    // spaces cannot represent; such a step counts as a failed solve.
    let residual = |free: &[f64]| residual(free).ok().filter(|(r, _, d0)| d0.is_finite() && r.iter().all(|v| v.is_finite()));
    let mut free = vec![1.0 / m as f64; m - 1];
    for _ in 0..60 {
        let Some((r, c, d0)) = residual(&free) else {
            return Ok(None);
        };
        let size = r.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if size <= 1e-15 * scale * scale {
            return Ok(Some((full(&free), c, d0)));
        }
        let h = 1e-6;
        let mut jac = vec![vec![0.0; m - 1]; m - 1];
        for k in 0..m - 1 {
            let mut fp = free.clone();
            let mut fm = free.clone();
            fp[k] += h;
            fm[k] -= h;
            let (Some((rp, _, _)), Some((rm, _, _))) = (residual(&fp), residual(&fm)) else {
                return Ok(None);
            };
            for i in 0..m - 1 {
                jac[i][k] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let Some(step) = solve(jac, r.iter().map(|v| -v).collect()) else {
            return Ok(None);
        };
        for (f, s) in free.iter_mut().zip(step) {
            *f += s;
        }
        if free.iter().any(|f| !f.is_finite()) {
            return Ok(None);
        }
    }
    Ok(None)
}

/// Diameter, circumradius and the FR ratio of a finite point set.
///
/// The center search starts with Bădoiu-Clarkson iterated geodesic steps
/// toward the farthest point, then refines with an active-set Newton solve
/// for the equidistant point on the circumsphere.
pub fn fr_diagnostic<S: GeodesicSpace>(space: &S, points: &[S::Point]) -> Result<FrReport> {
    let n = points.len();
    if n < 2 {
        return contract("FR diagnostics need at least two points");
    }
    let mut diameter = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            diameter = diameter.max(space.distance(&points[i], &points[j])?);
        }
    }
    let farthest = |c: &S::Point| -> Result<(usize, f64)> {
        let mut best = (0, -1.0);
        for (i, p) in points.iter().enumerate() {
            let d = space.distance(c, p)?;
            if d > best.1 {
                best = (i, d);
            }
        }
        Ok(best)
    };

    let mut c = points[0].clone();
    let mut best_r = f64::INFINITY;
    let mut best_c = c.clone();
    for k in 1..=400 {
        let (i, r) = farthest(&c)?;
        if r < best_r {
            best_r = r;
            best_c = c.clone();
        }
        c = space.point_along(&c, &points[i], 1.0 / (k as f64 + 1.0))?;
    }

    let mut active: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if space.distance(&best_c, p)? >= (1.0 - 2e-2) * best_r {
            active.push(i);
        }
    }
    let mut converged = false;
    let mut radius = best_r;
    for _ in 0..4 * n {
        if active.len() < 2 {
            break;
        }
        let Some((w, center, r)) = equidistant_center(space, points, &active, diameter)? else {
            break;
        };
        if let Some((pos, &wmin)) = w.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)) {
            if wmin < -1e-12 {
                active.remove(pos);
                continue;
            }
        }
        let (far, dfar) = farthest(&center)?;
        if dfar > r * (1.0 + 1e-12) {
            active.push(far);
            active.sort_unstable();
            continue;
        }
        if dfar <= radius * (1.0 + 1e-12) {
            radius = dfar.min(radius);
            converged = true;
        }
        break;
    }
    let ratio = diameter / radius;
    let excess = 0.5 * ratio * ratio - 1.0;
    let implied_k = (excess > 1e-12).then(|| (1.0 / excess - 1e-6).ceil().max(1.0) as u64);
    Ok(FrReport { diameter, circumradius: radius, ratio, implied_k, active, converged })
}

#[cfg(test)]
mod tests {
    use super::super::spaces::Euclidean;
    use super::*;

    #[test]
    fn equilateral_triangle() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 0.75f64.sqrt()]];
        let rep = fr_diagnostic(&Euclidean::new(2), &pts).unwrap();
        assert!(rep.converged);
        assert!((rep.diameter - 1.0).abs() < 1e-15);
        assert!((rep.circumradius - 3f64.sqrt().recip()).abs() < 1e-12);
        assert!((rep.ratio - 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(rep.implied_k, Some(2));
    }

    #[test]
    fn obtuse_triangle_uses_the_long_side() {
        let pts = vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![1.0, 0.2]];
        let rep = fr_diagnostic(&Euclidean::new(2), &pts).unwrap();
        assert!((rep.circumradius - 1.0).abs() < 1e-12, "{rep:?}");
        assert_eq!(rep.active, vec![0, 1]);
        assert_eq!(rep.implied_k, Some(1));
    }
}
