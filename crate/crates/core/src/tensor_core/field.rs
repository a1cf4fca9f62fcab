//! Periodic fields on the flat unit torus and their spectral operators.
//!
//! Fields are sampled at the nodes `(i/N, j/N)` of an `N×N` grid, `N` even and
//! at least 8, stored row major with `i` indexing `x₁`. Derivatives are Fourier
//! multipliers `iξ` with `ξ = 2πk`; the Nyquist wavenumber is mapped to zero so
//! that derivatives of real fields stay real. Every operator below is built
//! from the same multipliers, so identities such as `𝓛(Hess f) = 0` or
//! `δ L* f = 0` hold mode by mode up to round-off.

use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::{Metric2, SymTensor2};
use crate::error::{contract, GeomError, Result};
use crate::format::fmt17;

fn check_grid(n: usize) -> Result<()> {
    if n < 8 || n % 2 != 0 {
        return contract(format!("grid size must be even and >= 8, got {n}"));
    }
    Ok(())
}

fn check_same(a: usize, b: usize) -> Result<()> {
    if a != b {
        return contract(format!("grid size mismatch: {a} vs {b}"));
    }
    Ok(())
}

fn node_values(n: usize, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    let h = 1.0 / n as f64;
    (0..n * n).map(|idx| f((idx / n) as f64 * h, (idx % n) as f64 * h)).collect()
}

/// Scalar field on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    n: usize,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        check_grid(n)?;
        if values.len() != n * n {
            return contract(format!("expected {} values, got {}", n * n, values.len()));
        }
        Ok(Self { n, values })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        check_grid(n)?;
        Ok(Self { n, values: node_values(n, f) })
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::from_fn(n, |_, _| c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i % self.n) * self.n + j % self.n]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Discrete L² inner product `(1/N²) Σ f g`.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        check_same(self.n, other.n)?;
        let s: f64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum();
        Ok(s / self.values.len() as f64)
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).unwrap_or(0.0).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { n: self.n, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same(self.n, other.n)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(Self { n: self.n, values })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (idx, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{} {} {}", idx / self.n, idx % self.n, fmt17(*v));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (n, rows) = parse_grid_text(text, 1)?;
        Self::new(n, rows.into_iter().map(|r| r[0]).collect())
    }
}

/// Vector field on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField2 {
    n: usize,
    x: Vec<f64>,
    y: Vec<f64>,
}

impl VectorField2 {
    pub fn new(n: usize, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        check_grid(n)?;
        if x.len() != n * n || y.len() != n * n {
            return contract("vector field component length mismatch");
        }
        Ok(Self { n, x, y })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64, f64) -> [f64; 2]) -> Result<Self> {
        check_grid(n)?;
        let h = 1.0 / n as f64;
        let (x, y) = (0..n * n)
            .map(|idx| {
                let v = f((idx / n) as f64 * h, (idx % n) as f64 * h);
                (v[0], v[1])
            })
            .unzip();
        Ok(Self { n, x, y })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn get(&self, i: usize, j: usize) -> [f64; 2] {
        let idx = (i % self.n) * self.n + j % self.n;
        [self.x[idx], self.y[idx]]
    }

    pub fn inner(&self, other: &Self) -> Result<f64> {
        check_same(self.n, other.n)?;
        let s: f64 = (0..self.x.len())
            .map(|k| self.x[k] * other.x[k] + self.y[k] * other.y[k])
            .sum();
        Ok(s / self.x.len() as f64)
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).unwrap_or(0.0).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.x.iter().chain(&self.y).fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn mean(&self) -> [f64; 2] {
        let len = self.x.len() as f64;
        [self.x.iter().sum::<f64>() / len, self.y.iter().sum::<f64>() / len]
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same(self.n, other.n)?;
        let x = self.x.iter().zip(&other.x).map(|(a, b)| a - b).collect();
        let y = self.y.iter().zip(&other.y).map(|(a, b)| a - b).collect();
        Ok(Self { n: self.n, x, y })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for idx in 0..self.x.len() {
            let _ = writeln!(
                out,
                "{} {} {} {}",
                idx / self.n,
                idx % self.n,
                fmt17(self.x[idx]),
                fmt17(self.y[idx])
            );
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (n, rows) = parse_grid_text(text, 2)?;
        let (x, y) = rows.into_iter().map(|r| (r[0], r[1])).unzip();
        Self::new(n, x, y)
    }
}

/// Symmetric (0,2)-tensor field on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorField {
    n: usize,
    values: Vec<SymTensor2>,
}

impl TensorField {
    pub fn new(n: usize, values: Vec<SymTensor2>) -> Result<Self> {
        check_grid(n)?;
        if values.len() != n * n {
            return contract(format!("expected {} tensors, got {}", n * n, values.len()));
        }
        Ok(Self { n, values })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64, f64) -> SymTensor2) -> Result<Self> {
        check_grid(n)?;
        let h = 1.0 / n as f64;
        let values = (0..n * n).map(|idx| f((idx / n) as f64 * h, (idx % n) as f64 * h)).collect();
        Ok(Self { n, values })
    }

    pub fn constant(n: usize, t: SymTensor2) -> Result<Self> {
        Self::from_fn(n, |_, _| t)
    }

    /// `f · G` for a scalar field `f` and constant metric `G`.
    pub fn conformal(f: &ScalarField, g: &Metric2) -> Self {
        let values = f.values.iter().map(|&v| v * g.tensor()).collect();
        Self { n: f.n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[SymTensor2] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> SymTensor2 {
        self.values[(i % self.n) * self.n + j % self.n]
    }

    pub fn mean(&self) -> SymTensor2 {
        let sum = self.values.iter().fold(SymTensor2::ZERO, |acc, t| acc + *t);
        sum * (1.0 / self.values.len() as f64)
    }

    /// Flat discrete L² pairing `(1/N²) Σ h_ij k_ij`.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        check_same(self.n, other.n)?;
        let s: f64 = self.values.iter().zip(&other.values).map(|(a, b)| a.frobenius(b)).sum();
        Ok(s / self.values.len() as f64)
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).unwrap_or(0.0).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, t| m.max(t.max_abs()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same(self.n, other.n)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| *a + *b).collect();
        Ok(Self { n: self.n, values })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same(self.n, other.n)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| *a - *b).collect();
        Ok(Self { n: self.n, values })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { n: self.n, values: self.values.iter().map(|t| *t * s).collect() }
    }

    fn component(&self, c: usize) -> Vec<f64> {
        self.values
            .iter()
            .map(|t| match c {
                0 => t.h11,
                1 => t.h12,
                _ => t.h22,
            })
            .collect()
    }

    fn from_components(n: usize, h11: &[f64], h12: &[f64], h22: &[f64]) -> Self {
        let values = (0..n * n).map(|k| SymTensor2::new(h11[k], h12[k], h22[k])).collect();
        Self { n, values }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (idx, t) in self.values.iter().enumerate() {
            let _ = writeln!(
                out,
                "{} {} {} {} {}",
                idx / self.n,
                idx % self.n,
                fmt17(t.h11),
                fmt17(t.h12),
                fmt17(t.h22)
            );
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (n, rows) = parse_grid_text(text, 3)?;
        Self::new(n, rows.into_iter().map(|r| SymTensor2::new(r[0], r[1], r[2])).collect())
    }
}

/// Parse `N` followed by `N²` lines `i j v...` with `width` values each.
fn parse_grid_text(text: &str, width: usize) -> Result<(usize, Vec<Vec<f64>>)> {
    let bad = |msg: String| GeomError::Parse(msg);
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let n: usize = lines
        .next()
        .ok_or_else(|| bad("empty field file".into()))?
        .parse()
        .map_err(|e| bad(format!("bad grid size: {e}")))?;
    check_grid(n)?;
    let mut rows: Vec<Option<Vec<f64>>> = vec![None; n * n];
    for (lineno, line) in lines.enumerate() {
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != width + 2 {
            return Err(bad(format!("line {}: expected {} fields", lineno + 2, width + 2)));
        }
        let i: usize = parts[0].parse().map_err(|e| bad(format!("line {}: {e}", lineno + 2)))?;
        let j: usize = parts[1].parse().map_err(|e| bad(format!("line {}: {e}", lineno + 2)))?;
        if i >= n || j >= n {
            return Err(bad(format!("line {}: node ({i}, {j}) outside grid", lineno + 2)));
        }
        let vals = parts[2..]
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| bad(format!("line {}: {e}", lineno + 2)))?;
        rows[i * n + j] = Some(vals);
    }
    let rows = rows
        .into_iter()
        .enumerate()
        .map(|(k, r)| r.ok_or_else(|| bad(format!("missing node ({}, {})", k / n, k % n))))
        .collect::<Result<Vec<_>>>()?;
    Ok((n, rows))
}

/// Two-dimensional DFT on an `N×N` grid with the derivative conventions of
/// this module.
struct Spectral {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Spectral {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self { n, fwd: planner.plan_fft_forward(n), inv: planner.plan_fft_inverse(n) }
    }

    fn transform(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let n = self.n;
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
    }

    fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform(&mut data, &self.fwd);
        data
    }

    fn inverse(&self, mut spec: Vec<Complex64>) -> Vec<f64> {
        self.transform(&mut spec, &self.inv);
        let scale = 1.0 / (self.n * self.n) as f64;
        spec.into_iter().map(|c| c.re * scale).collect()
    }

    /// Signed integer frequency of a DFT index; the Nyquist index maps to `N/2`.
    fn freq(&self, idx: usize) -> i64 {
        if idx <= self.n / 2 {
            idx as i64
        } else {
            idx as i64 - self.n as i64
        }
    }

    /// Wavenumber used by derivatives (zero at Nyquist).
    fn xi(&self, idx: usize) -> f64 {
        if idx == self.n / 2 {
            0.0
        } else {
            std::f64::consts::TAU * self.freq(idx) as f64
        }
    }

    fn xi_pair(&self, k: usize) -> (f64, f64) {
        (self.xi(k / self.n), self.xi(k % self.n))
    }
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `∂f/∂x_axis`.
pub fn derivative(f: &ScalarField, axis: usize) -> ScalarField {
    let sp = Spectral::new(f.n);
    let mut s = sp.forward(&f.values);
    for (k, c) in s.iter_mut().enumerate() {
        let (x1, x2) = sp.xi_pair(k);
        *c *= I * if axis == 0 { x1 } else { x2 };
    }
    ScalarField { n: f.n, values: sp.inverse(s) }
}

/// Flat Laplacian `∂₁² + ∂₂²`.
pub fn laplacian(f: &ScalarField) -> ScalarField {
    let sp = Spectral::new(f.n);
    let mut s = sp.forward(&f.values);
    for (k, c) in s.iter_mut().enumerate() {
        let (x1, x2) = sp.xi_pair(k);
        *c *= -(x1 * x1 + x2 * x2);
    }
    ScalarField { n: f.n, values: sp.inverse(s) }
}

/// Hessian `∂_i ∂_j f`.
pub fn hessian(f: &ScalarField) -> TensorField {
    let sp = Spectral::new(f.n);
    let s = sp.forward(&f.values);
    let comp = |w: &dyn Fn(f64, f64) -> f64| {
        let spec = s.iter().enumerate().map(|(k, c)| {
            let (x1, x2) = sp.xi_pair(k);
            c * -w(x1, x2)
        });
        sp.inverse(spec.collect())
    };
    let h11 = comp(&|a, _| a * a);
    let h12 = comp(&|a, b| a * b);
    let h22 = comp(&|_, b| b * b);
    TensorField::from_components(f.n, &h11, &h12, &h22)
}

/// Lie derivative of the flat metric, `(L_X δ)_ij = ∂_i X_j + ∂_j X_i`.
pub fn lie_derivative_flat(x: &VectorField2) -> TensorField {
    let sp = Spectral::new(x.n);
    let (s1, s2) = (sp.forward(&x.x), sp.forward(&x.y));
    let (spec11, spec12, spec22) = lie_symbol(&sp, &s1, &s2);
    TensorField::from_components(x.n, &sp.inverse(spec11), &sp.inverse(spec12), &sp.inverse(spec22))
}

type Spec3 = (Vec<Complex64>, Vec<Complex64>, Vec<Complex64>);

fn lie_symbol(sp: &Spectral, s1: &[Complex64], s2: &[Complex64]) -> Spec3 {
    let len = s1.len();
    let (mut a, mut b, mut c) = (Vec::with_capacity(len), Vec::with_capacity(len), Vec::with_capacity(len));
    for k in 0..len {
        let (x1, x2) = sp.xi_pair(k);
        a.push(I * 2.0 * x1 * s1[k]);
        b.push(I * (x1 * s2[k] + x2 * s1[k]));
        c.push(I * 2.0 * x2 * s2[k]);
    }
    (a, b, c)
}

fn conformal_symbol(sp: &Spectral, f: &[Complex64]) -> Spec3 {
    let len = f.len();
    let (mut a, mut b, mut c) = (Vec::with_capacity(len), Vec::with_capacity(len), Vec::with_capacity(len));
    for k in 0..len {
        let (x1, x2) = sp.xi_pair(k);
        a.push(f[k] * (x2 * x2));
        b.push(f[k] * (-x1 * x2));
        c.push(f[k] * (x1 * x1));
    }
    (a, b, c)
}

/// Formal adjoint of the flat Lichnerowicz operator,
/// `L* f = (-Δf) δ + Hess f`.
pub fn conformal_adjoint(f: &ScalarField) -> TensorField {
    let sp = Spectral::new(f.n);
    let s = sp.forward(&f.values);
    let (a, b, c) = conformal_symbol(&sp, &s);
    TensorField::from_components(f.n, &sp.inverse(a), &sp.inverse(b), &sp.inverse(c))
}

/// Trace `Tr_G h` and divergence `(δ_G h)_i = G^{jk} ∂_k h_ij` for a constant
/// background metric `G`.
pub fn trace_and_divergence(h: &TensorField, g: &Metric2) -> (ScalarField, VectorField2) {
    let gi = g.inverse();
    let trace = ScalarField { n: h.n, values: h.values.iter().map(|t| gi.frobenius(t)).collect() };
    let d = |c: usize, axis: usize| {
        derivative(&ScalarField { n: h.n, values: h.component(c) }, axis).values
    };
    // ∂_k h_ij for (ij) in {11, 12, 22} and k in {1, 2}.
    let (d11_1, d11_2) = (d(0, 0), d(0, 1));
    let (d12_1, d12_2) = (d(1, 0), d(1, 1));
    let (d22_1, d22_2) = (d(2, 0), d(2, 1));
    let len = h.values.len();
    let mut x = Vec::with_capacity(len);
    let mut y = Vec::with_capacity(len);
    for k in 0..len {
        x.push(gi.h11 * d11_1[k] + gi.h12 * (d11_2[k] + d12_1[k]) + gi.h22 * d12_2[k]);
        y.push(gi.h11 * d12_1[k] + gi.h12 * (d12_2[k] + d22_1[k]) + gi.h22 * d22_2[k]);
    }
    (trace, VectorField2 { n: h.n, x, y })
}

/// Flat Lichnerowicz operator `𝓛 h = -Δ Tr h + δδh`.
pub fn lichnerowicz(h: &TensorField) -> ScalarField {
    let sp = Spectral::new(h.n);
    let s11 = sp.forward(&h.component(0));
    let s12 = sp.forward(&h.component(1));
    let s22 = sp.forward(&h.component(2));
    let spec = (0..s11.len())
        .map(|k| {
            let (x1, x2) = sp.xi_pair(k);
            // -Δ → |ξ|², ∂_i∂_j → -ξ_iξ_j
            (x2 * x2) * s11[k] - 2.0 * x1 * x2 * s12[k] + (x1 * x1) * s22[k]
        })
        .collect();
    ScalarField { n: h.n, values: sp.inverse(spec) }
}

/// The four mutually orthogonal pieces of a tensor field on the flat torus:
///
/// `h = P + L_X δ + [(-Δf) δ + Hess f] + (c/2) δ`
///
/// with `P` constant and traceless, `X` and `f` of zero mean, and `c` the mean
/// trace.
#[derive(Debug, Clone)]
pub struct L2Decomposition {
    pub traceless_mean: SymTensor2,
    pub vector: VectorField2,
    pub potential: ScalarField,
    pub mean_trace: f64,
    pub diagnostics: DecompositionDiagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionDiagnostics {
    /// Largest 1-norm condition number among the per-mode systems.
    pub max_condition: f64,
    /// Frequency attaining `max_condition`.
    pub worst_mode: (i64, i64),
    /// Magnitude of round-off content dropped from pure Nyquist modes.
    pub discarded: f64,
}

impl L2Decomposition {
    pub fn tt_part(&self) -> TensorField {
        TensorField { n: self.potential.n, values: vec![self.traceless_mean; self.potential.values.len()] }
    }

    pub fn lie_part(&self) -> TensorField {
        lie_derivative_flat(&self.vector)
    }

    pub fn conformal_part(&self) -> TensorField {
        conformal_adjoint(&self.potential)
    }

    pub fn trace_part(&self) -> TensorField {
        let t = SymTensor2::IDENTITY * (0.5 * self.mean_trace);
        TensorField { n: self.potential.n, values: vec![t; self.potential.values.len()] }
    }

    pub fn parts(&self) -> [TensorField; 4] {
        [self.tt_part(), self.lie_part(), self.conformal_part(), self.trace_part()]
    }

    pub fn reassemble(&self) -> TensorField {
        let [a, b, c, d] = self.parts();
        let values = (0..a.values.len())
            .map(|k| a.values[k] + b.values[k] + c.values[k] + d.values[k])
            .collect();
        TensorField { n: a.n, values }
    }
}

type C3 = [Complex64; 3];

/// Gaussian elimination with partial pivoting. Returns `None` for a
/// numerically singular matrix.
fn solve3(mut a: [C3; 3], mut b: C3) -> Option<C3> {
    let scale = a.iter().flatten().fold(0.0f64, |m, z| m.max(z.norm()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&r, &s| a[r][col].norm().total_cmp(&a[s][col].norm()))?;
        if a[piv][col].norm() <= 1e-13 * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..3 {
            let factor = a[r][col] / a[col][col];
            for c in col..3 {
                let v = a[col][c];
                a[r][c] -= factor * v;
            }
            let v = b[col];
            b[r] -= factor * v;
        }
    }
    let mut x = [Complex64::new(0.0, 0.0); 3];
    for r in (0..3).rev() {
        let mut acc = b[r];
        for c in r + 1..3 {
            acc -= a[r][c] * x[c];
        }
        x[r] = acc / a[r][r];
    }
    Some(x)
}

fn norm1(a: &[C3; 3]) -> f64 {
    (0..3).map(|c| (0..3).map(|r| a[r][c].norm()).sum::<f64>()).fold(0.0, f64::max)
}

fn condition1(a: &[C3; 3]) -> f64 {
    let zero = Complex64::new(0.0, 0.0);
    let mut inv_cols = [[zero; 3]; 3];
    for (c, col) in inv_cols.iter_mut().enumerate() {
        let mut e = [zero; 3];
        e[c] = Complex64::new(1.0, 0.0);
        match solve3(*a, e) {
            Some(x) => *col = x,
            None => return f64::INFINITY,
        }
    }
    let inv_norm = inv_cols.iter().map(|col| col.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
    norm1(a) * inv_norm
}

/// L² decomposition of a tensor field on the flat torus, solved mode by mode.
///
/// For each nonzero frequency `ξ` the symmetric-tensor Fourier mode is spanned
/// by the images of the Lie derivative (`X̂`, two unknowns) and the conformal
/// adjoint (`f̂`, one unknown); the 3×3 system is solved by elimination.
pub fn l2_decompose(h: &TensorField) -> Result<L2Decomposition> {
    let n = h.n;
    let sp = Spectral::new(n);
    let s11 = sp.forward(&h.component(0));
    let s12 = sp.forward(&h.component(1));
    let s22 = sp.forward(&h.component(2));
    let scale = s11.iter().chain(&s12).chain(&s22).fold(0.0f64, |m, z| m.max(z.norm()));
    let zero = Complex64::new(0.0, 0.0);

    // Each mode writes its own slot; the output is independent of scheduling.
    let solved: Vec<Result<(C3, f64, f64)>> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            if k == 0 {
                return Ok(([zero; 3], 0.0, 0.0));
            }
            let (x1, x2) = sp.xi_pair(k);
            let rhs = [s11[k], s12[k], s22[k]];
            let content = rhs.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if x1 == 0.0 && x2 == 0.0 {
                // Pure Nyquist mode: not reachable by any derivative.
                if content > 1e-9 * scale.max(f64::MIN_POSITIVE) {
                    return Err(GeomError::SingularMode {
                        k1: sp.freq(k / n),
                        k2: sp.freq(k % n),
                    });
                }
                return Ok(([zero; 3], 0.0, content));
            }
            let c = |v: f64| Complex64::new(v, 0.0);
            let a = [
                [I * 2.0 * x1, zero, c(x2 * x2)],
                [I * x2, I * x1, c(-x1 * x2)],
                [zero, I * 2.0 * x2, c(x1 * x1)],
            ];
            let sol = solve3(a, rhs).ok_or(GeomError::SingularMode {
                k1: sp.freq(k / n),
                k2: sp.freq(k % n),
            })?;
            Ok((sol, condition1(&a), 0.0))
        })
        .collect();

    let mut sx = vec![zero; n * n];
    let mut sy = vec![zero; n * n];
    let mut sf = vec![zero; n * n];
    let mut diagnostics = DecompositionDiagnostics { max_condition: 0.0, worst_mode: (0, 0), discarded: 0.0 };
    for (k, r) in solved.into_iter().enumerate() {
        let (sol, cond, dropped) = r?;
        sx[k] = sol[0];
        sy[k] = sol[1];
        sf[k] = sol[2];
        diagnostics.discarded = diagnostics.discarded.max(dropped);
        if cond > diagnostics.max_condition {
            diagnostics.max_condition = cond;
            diagnostics.worst_mode = (sp.freq(k / n), sp.freq(k % n));
        }
    }

    let mean = h.mean();
    let mean_trace = mean.trace();
    Ok(L2Decomposition {
        traceless_mean: mean - SymTensor2::IDENTITY * (0.5 * mean_trace),
        vector: VectorField2 { n, x: sp.inverse(sx), y: sp.inverse(sy) },
        potential: ScalarField { n, values: sp.inverse(sf) },
        mean_trace,
        diagnostics,
    })
}
