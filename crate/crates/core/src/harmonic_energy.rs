//! Harmonic-map energy between flat tori and its convexity along WP geodesics.
//!
//! Between unit-area flat tori over the same lattice the harmonic map in the
//! homotopy class of the identity is the identity itself, so the energy is
//! `E(G₀, G) = ½ Tr(G₀⁻¹ G)`. The ∂̄-energy differs from it by the degree term:
//! `E_∂̄ = E - 1`. A spectral grid solver ([`discrete_harmonic`]) minimizes the
//! discrete Dirichlet energy independently and confirms the affine answer.

use std::fmt::Write as _;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{contract, GeomError, Result};
use crate::format::fmt17;
use crate::tensor_core::{Metric2, VectorField2};
use crate::torus_teich::{wp_geodesic, TangentTT, TorusPoint};

/// `E = ½ Tr(G₀⁻¹ G)`.
pub fn affine_energy(g0: &TorusPoint, g: &TorusPoint) -> f64 {
    0.5 * g.metric().tensor().trace_wrt(&g0.metric())
}

/// `E_∂̄ = E - 1` (zero Euler characteristic, degree one).
pub fn dbar_energy(g0: &TorusPoint, g: &TorusPoint) -> f64 {
    affine_energy(g0, g) - 1.0
}

/// Energy sampled along a WP geodesic, with three-point second differences at
/// the interior nodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyProfile {
    pub t: Vec<f64>,
    pub energy: Vec<f64>,
    /// `second[k]` belongs to node `k + 1`.
    pub second: Vec<f64>,
}

impl EnergyProfile {
    pub fn min_second(&self) -> f64 {
        self.second.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// CSV with header `t,E,E_second`; the endpoint rows leave `E_second` empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,E,E_second\n");
        let last = self.t.len().saturating_sub(1);
        for k in 0..self.t.len() {
            let second = if k == 0 || k == last { String::new() } else { fmt17(self.second[k - 1]) };
            let _ = writeln!(out, "{},{},{}", fmt17(self.t[k]), fmt17(self.energy[k]), second);
        }
        out
    }
}

/// Energy `E(G₀, G_t)` along the WP geodesic `G_t` with initial velocity `v`
/// (based at `G₀`), sampled uniformly on `[t0, t1]`.
pub fn energy_profile(v: &TangentTT, t_range: (f64, f64), n_samples: usize) -> Result<EnergyProfile> {
    if n_samples < 3 {
        return contract(format!("need at least 3 samples, got {n_samples}"));
    }
    let (t0, t1) = t_range;
    if !(t1 > t0) {
        return contract("empty time range");
    }
    let g0 = v.base();
    let dt = (t1 - t0) / (n_samples - 1) as f64;
    let t: Vec<f64> = (0..n_samples).map(|k| t0 + k as f64 * dt).collect();
    let energy: Vec<f64> = t.iter().map(|&s| affine_energy(&g0, &wp_geodesic(v, s))).collect();
    let second = energy.windows(3).map(|w| (w[0] - 2.0 * w[1] + w[2]) / (dt * dt)).collect();
    Ok(EnergyProfile { t, energy, second })
}

/// First and second derivatives of `E_∂̄` at `s = 0` along the unit-speed WP
/// geodesic in direction `v`, by central differences with step `h`.
pub fn dbar_derivatives(v: &TangentTT, h: f64) -> Result<(f64, f64)> {
    let norm = v.norm();
    if norm == 0.0 {
        return contract("direction must be nonzero");
    }
    let unit = v.scaled(1.0 / norm);
    let g0 = v.base();
    let e = |s: f64| dbar_energy(&g0, &wp_geodesic(&unit, s));
    let (em, e0, ep) = (e(-h), e(0.0), e(h));
    Ok(((ep - em) / (2.0 * h), (ep - 2.0 * e0 + em) / (h * h)))
}

/// A degree-one periodic map `u(x) = x + d(x)` sampled on an `N×N` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMap {
    pub displacement: VectorField2,
}

impl GridMap {
    pub fn n(&self) -> usize {
        self.displacement.n()
    }

    /// Image of node `(i, j)` in the universal cover.
    pub fn image(&self, i: usize, j: usize) -> [f64; 2] {
        let n = self.n() as f64;
        let d = self.displacement.get(i, j);
        [i as f64 / n + d[0], j as f64 / n + d[1]]
    }
}

/// Result of [`discrete_harmonic`].
#[derive(Debug, Clone)]
pub struct DiscreteHarmonic {
    pub map: GridMap,
    pub energy: f64,
    pub iterations: usize,
    pub residual: f64,
}

struct GridOps {
    n: usize,
    fwd: std::sync::Arc<dyn rustfft::Fft<f64>>,
    inv: std::sync::Arc<dyn rustfft::Fft<f64>>,
}

impl GridOps {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self { n, fwd: planner.plan_fft_forward(n), inv: planner.plan_fft_inverse(n) }
    }

    fn fft2(&self, data: &mut [Complex64], inverse: bool) {
        let n = self.n;
        let fft = if inverse { &self.inv } else { &self.fwd };
        for row in data.chunks_exact_mut(n) {
            fft.process(row);
        }
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            for i in 0..n {
                col[i] = data[i * n + j];
            }
            fft.process(&mut col);
            for i in 0..n {
                data[i * n + j] = col[i];
            }
        }
        if inverse {
            let s = 1.0 / (n * n) as f64;
            data.iter_mut().for_each(|c| *c *= s);
        }
    }

    fn xi(&self, idx: usize) -> f64 {
        let n = self.n;
        if idx == n / 2 {
            0.0
        } else if idx < n / 2 {
            std::f64::consts::TAU * idx as f64
        } else {
            std::f64::consts::TAU * (idx as f64 - n as f64)
        }
    }

    /// `(∂₁ f, ∂₂ f)`.
    fn gradient(&self, f: &[f64]) -> [Vec<f64>; 2] {
        let n = self.n;
        let mut s: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft2(&mut s, false);
        let mut out = [vec![0.0; n * n], vec![0.0; n * n]];
        for (axis, dst) in out.iter_mut().enumerate() {
            let mut d: Vec<Complex64> = s
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    let xi = if axis == 0 { self.xi(k / n) } else { self.xi(k % n) };
                    c * Complex64::new(0.0, xi)
                })
                .collect();
            self.fft2(&mut d, true);
            for (o, c) in dst.iter_mut().zip(d) {
                *o = c.re;
            }
        }
        out
    }

    /// `∂₁ a + ∂₂ b`.
    fn divergence(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let ga = self.gradient(a);
        let gb = self.gradient(b);
        ga[0].iter().zip(&gb[1]).map(|(x, y)| x + y).collect()
    }

    /// Apply the inverse of `-Δ` on zero-mean fields.
    fn inverse_laplacian(&self, f: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut s: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft2(&mut s, false);
        for (k, c) in s.iter_mut().enumerate() {
            let (a, b) = (self.xi(k / n), self.xi(k % n));
            let w = a * a + b * b;
            *c = if w == 0.0 { Complex64::new(0.0, 0.0) } else { *c / w };
        }
        self.fft2(&mut s, true);
        s.into_iter().map(|c| c.re).collect()
    }
}

/// Jacobian `J_{ai} = δ_ai + ∂_i d_a` at every node.
fn jacobians(ops: &GridOps, d: &[Vec<f64>; 2]) -> Vec<[[f64; 2]; 2]> {
    let g1 = ops.gradient(&d[0]);
    let g2 = ops.gradient(&d[1]);
    (0..d[0].len())
        .map(|k| [[1.0 + g1[0][k], g1[1][k]], [g2[0][k], 1.0 + g2[1][k]]])
        .collect()
}

/// `-∇E`: the components `Σ_i ∂_i (G J G₀⁻¹)_{ai}`, evaluated with `J` built
/// from `d` (with `identity = false` the constant part of `J` is dropped,
/// giving the linear operator `-A d`).
fn flux_divergence(ops: &GridOps, d: &[Vec<f64>; 2], g: &Metric2, g0inv: &[[f64; 2]; 2], identity: bool) -> [Vec<f64>; 2] {
    let gm = g.tensor().matrix();
    let jac = jacobians(ops, d);
    let len = jac.len();
    let mut flux = [[vec![0.0; len], vec![0.0; len]], [vec![0.0; len], vec![0.0; len]]];
    for (k, j) in jac.iter().enumerate() {
        let mut jj = *j;
        if !identity {
            jj[0][0] -= 1.0;
            jj[1][1] -= 1.0;
        }
        let gj = crate::tensor_core::mat2::mul(&gm, &jj);
        let m = crate::tensor_core::mat2::mul(&gj, g0inv);
        for a in 0..2 {
            for i in 0..2 {
                flux[a][i][k] = m[a][i];
            }
        }
    }
    [ops.divergence(&flux[0][0], &flux[0][1]), ops.divergence(&flux[1][0], &flux[1][1])]
}

fn dirichlet_energy(ops: &GridOps, d: &[Vec<f64>; 2], g0: &Metric2, g: &Metric2) -> f64 {
    let g0inv = g0.inverse().matrix();
    let gm = g.tensor().matrix();
    let jac = jacobians(ops, d);
    use crate::tensor_core::mat2::{mul, trace, transpose};
    let sum: f64 = jac
        .iter()
        .map(|j| 0.5 * trace(&mul(&g0inv, &mul(&transpose(j), &mul(&gm, j)))))
        .sum();
    sum / jac.len() as f64
}

fn dot(a: &[Vec<f64>; 2], b: &[Vec<f64>; 2]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>()).sum()
}

fn zero_mean(v: &mut [Vec<f64>; 2]) {
    for c in v.iter_mut() {
        let m = c.iter().sum::<f64>() / c.len() as f64;
        c.iter_mut().for_each(|x| *x -= m);
    }
}

/// Minimizes the discrete Dirichlet energy
/// `½ (1/N²) Σ Tr_{G₀}((du)ᵀ G (du))` over degree-one periodic maps by
/// preconditioned conjugate gradients (preconditioner `(-Δ)⁻¹`), starting from
/// a smooth nonzero displacement. The displacement is gauge-fixed to zero mean.
pub fn discrete_harmonic(g0: &TorusPoint, g: &TorusPoint, n: usize) -> Result<DiscreteHarmonic> {
    if n < 16 || n % 2 != 0 {
        return contract(format!("grid size must be even and >= 16, got {n}"));
    }
    let ops = GridOps::new(n);
    let (m0, m) = (g0.metric(), g.metric());
    let g0inv = m0.inverse().matrix();
    let start = VectorField2::from_fn(n, |x, y| {
        use std::f64::consts::TAU;
        [0.05 * (TAU * y).sin() + 0.02 * (TAU * (x + y)).cos(), 0.04 * (TAU * x).cos()]
    })?;
    let mut d = [start.x().to_vec(), start.y().to_vec()];

    // r = -∇E(d); zero at the minimizer.
    let mut r = flux_divergence(&ops, &d, &m, &g0inv, true);
    zero_mean(&mut r);
    let r0 = dot(&r, &r).sqrt();
    let tol = 1e-12 * r0.max(1.0);
    let precond = |r: &[Vec<f64>; 2]| [ops.inverse_laplacian(&r[0]), ops.inverse_laplacian(&r[1])];
    let mut z = precond(&r);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut iterations = 0;
    let mut residual = r0;
    while residual > tol {
        if iterations >= 500 {
            return Err(GeomError::NonConvergence { what: "harmonic map solver", residual });
        }
        // A p = -(linear part of the flux divergence).
        let mut ap = flux_divergence(&ops, &p, &m, &g0inv, false);
        ap.iter_mut().for_each(|c| c.iter_mut().for_each(|x| *x = -*x));
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            break;
        }
        let alpha = rz / pap;
        for c in 0..2 {
            for k in 0..d[c].len() {
                d[c][k] += alpha * p[c][k];
                r[c][k] -= alpha * ap[c][k];
            }
        }
        zero_mean(&mut r);
        residual = dot(&r, &r).sqrt();
        z = precond(&r);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for c in 0..2 {
            for k in 0..p[c].len() {
                p[c][k] = z[c][k] + beta * p[c][k];
            }
        }
        iterations += 1;
    }
    zero_mean(&mut d);
    let energy = dirichlet_energy(&ops, &d, &m0, &m);
    let [dx, dy] = d;
    Ok(DiscreteHarmonic {
        map: GridMap { displacement: VectorField2::new(n, dx, dy)? },
        energy,
        iterations,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor_core::SymTensor2;

    fn point(g: Metric2) -> TorusPoint {
        TorusPoint::from_metric(g).unwrap()
    }

    #[test]
    fn energy_examples() {
        let id = point(Metric2::IDENTITY);
        let e = 1f64.exp();
        let stretched = point(Metric2::diag(e, 1.0 / e).unwrap());
        assert_eq!(affine_energy(&id, &id), 1.0);
        assert!((affine_energy(&id, &stretched) - 1f64.cosh()).abs() < 1e-15);
        assert_eq!(affine_energy(&id, &point(Metric2::diag(0.5, 2.0).unwrap())), 1.25);
        assert_eq!(dbar_energy(&id, &id), 0.0);
        assert!((dbar_energy(&id, &stretched) - (1f64.cosh() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn profile_of_diagonal_direction_is_cosh() {
        let id = point(Metric2::IDENTITY);
        let v = TangentTT::new(id, SymTensor2::diag(1.0, -1.0)).unwrap();
        let prof = energy_profile(&v, (-1.0, 1.0), 201).unwrap();
        for (t, e) in prof.t.iter().zip(&prof.energy) {
            assert!((e - t.cosh()).abs() < 1e-14);
        }
        // E''(0) = 1; node 100 is t = 0, second-difference error ~ h²/12.
        assert!((prof.second[99] - 1.0).abs() < 1e-4);
        assert!(prof.min_second() > 0.0);
        let (d1, d2) = dbar_derivatives(&v, 1e-3).unwrap();
        assert!(d1.abs() < 1e-8);
        assert!((d2 - 0.5).abs() < 1e-6);
    }

    #[test]
    fn zero_direction_is_flat() {
        let id = point(Metric2::IDENTITY);
        let prof = energy_profile(&TangentTT::zero(id), (-1.0, 1.0), 11).unwrap();
        assert!(prof.second.iter().all(|&s| s == 0.0));
        assert!(energy_profile(&TangentTT::zero(id), (0.0, 1.0), 2).is_err());
        assert!(dbar_derivatives(&TangentTT::zero(id), 1e-3).is_err());
    }

    #[test]
    fn csv_layout() {
        let id = point(Metric2::IDENTITY);
        let v = TangentTT::new(id, SymTensor2::diag(1.0, -1.0)).unwrap();
        let csv = energy_profile(&v, (0.0, 1.0), 3).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,E,E_second");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].ends_with(','));
        assert!(!lines[2].ends_with(','));
    }

    #[test]
    fn grid_solver_recovers_identity() {
        let id = point(Metric2::IDENTITY);
        let sol = discrete_harmonic(&id, &id, 16).unwrap();
        assert!(sol.map.displacement.max_abs() <= 1e-8);
        assert!((sol.energy - 1.0).abs() <= 1e-8);
        let g = point(Metric2::diag(0.5, 2.0).unwrap());
        let sol = discrete_harmonic(&id, &g, 32).unwrap();
        assert!(sol.map.displacement.max_abs() <= 1e-8, "{}", sol.map.displacement.max_abs());
        assert!((sol.energy - 1.25).abs() <= 1e-8);
        assert!(discrete_harmonic(&id, &g, 8).is_err());
    }
}
