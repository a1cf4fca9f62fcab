//! Symmetric 2-tensors over a two-dimensional metric.
//!
//! A point of the space of metrics on a surface is (pointwise) a positive
//! definite symmetric matrix `G`; a tangent vector is a symmetric tensor `h`.
//! The natural pairing is
//!
//! ```text
//! <h, k>_G = Tr(G⁻¹ h G⁻¹ k) = G^{ij} G^{kl} h_ik k_jl
//! ```
//!
//! and [`levi_civita`] gives the covariant derivative of this pairing for
//! locally constant tensor fields. The [`field`] submodule lifts everything to
//! periodic tensor fields on the flat torus and provides the spectral operators
//! (trace, divergence, Lichnerowicz operator, L² decomposition).

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub mod field;
pub mod mat2;

pub use field::{
    l2_decompose, lichnerowicz, trace_and_divergence, DecompositionDiagnostics, L2Decomposition,
    ScalarField, TensorField, VectorField2,
};

/// A plain 2×2 matrix, row major.
pub type Mat2 = [[f64; 2]; 2];

/// Symmetric (0,2)-tensor on a two-dimensional space. Only the three
/// independent components are stored.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SymTensor2 {
    pub h11: f64,
    pub h12: f64,
    pub h22: f64,
}

impl SymTensor2 {
    pub const ZERO: Self = Self { h11: 0.0, h12: 0.0, h22: 0.0 };
    pub const IDENTITY: Self = Self { h11: 1.0, h12: 0.0, h22: 1.0 };

    pub const fn new(h11: f64, h12: f64, h22: f64) -> Self {
        Self { h11, h12, h22 }
    }

    pub const fn diag(a: f64, b: f64) -> Self {
        Self::new(a, 0.0, b)
    }

    pub const fn offdiag(b: f64) -> Self {
        Self::new(0.0, b, 0.0)
    }

    pub fn matrix(&self) -> Mat2 {
        [[self.h11, self.h12], [self.h12, self.h22]]
    }

    /// Symmetric part of a general 2×2 matrix.
    pub fn from_matrix(m: &Mat2) -> Self {
        Self::new(m[0][0], 0.5 * (m[0][1] + m[1][0]), m[1][1])
    }

    pub fn det(&self) -> f64 {
        self.h11 * self.h22 - self.h12 * self.h12
    }

    /// Euclidean trace `h11 + h22`.
    pub fn trace(&self) -> f64 {
        self.h11 + self.h22
    }

    /// Frobenius pairing `h_ij k_ij` (the flat pairing with `G = δ`).
    pub fn frobenius(&self, other: &Self) -> f64 {
        self.h11 * other.h11 + 2.0 * self.h12 * other.h12 + self.h22 * other.h22
    }

    pub fn max_abs(&self) -> f64 {
        self.h11.abs().max(self.h12.abs()).max(self.h22.abs())
    }

    /// `Tr_G h = G^{ij} h_ij`.
    pub fn trace_wrt(&self, g: &Metric2) -> f64 {
        g.inverse().frobenius(self)
    }

    /// `|h|_G = <h, h>_G^{1/2}`.
    pub fn norm_wrt(&self, g: &Metric2) -> f64 {
        l2_pairing(g, self, self).max(0.0).sqrt()
    }

    /// `h - ½ (Tr_G h) G`.
    pub fn traceless_part(&self, g: &Metric2) -> Self {
        *self - 0.5 * self.trace_wrt(g) * g.tensor()
    }
}

impl Add for SymTensor2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.h11 + o.h11, self.h12 + o.h12, self.h22 + o.h22)
    }
}

impl AddAssign for SymTensor2 {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for SymTensor2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.h11 - o.h11, self.h12 - o.h12, self.h22 - o.h22)
    }
}

impl Neg for SymTensor2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.h11, -self.h12, -self.h22)
    }
}

impl Mul<f64> for SymTensor2 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.h11 * s, self.h12 * s, self.h22 * s)
    }
}

impl Mul<SymTensor2> for f64 {
    type Output = SymTensor2;
    fn mul(self, t: SymTensor2) -> SymTensor2 {
        t * self
    }
}

/// A positive definite symmetric 2×2 tensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SymTensor2", into = "SymTensor2")]
pub struct Metric2(SymTensor2);

impl TryFrom<SymTensor2> for Metric2 {
    type Error = crate::error::GeomError;
    fn try_from(t: SymTensor2) -> Result<Self> {
        Self::from_tensor(t)
    }
}

impl From<Metric2> for SymTensor2 {
    fn from(g: Metric2) -> Self {
        g.0
    }
}

impl Metric2 {
    pub const IDENTITY: Self = Self(SymTensor2::IDENTITY);

    pub fn new(g11: f64, g12: f64, g22: f64) -> Result<Self> {
        Self::from_tensor(SymTensor2::new(g11, g12, g22))
    }

    pub fn from_tensor(t: SymTensor2) -> Result<Self> {
        let finite = t.h11.is_finite() && t.h12.is_finite() && t.h22.is_finite();
        if !finite || t.h11 <= 0.0 || t.det() <= 0.0 {
            return domain(format!(
                "metric ({}, {}, {}) is not positive definite",
                t.h11, t.h12, t.h22
            ));
        }
        Ok(Self(t))
    }

    pub fn diag(a: f64, b: f64) -> Result<Self> {
        Self::new(a, 0.0, b)
    }

    pub fn tensor(&self) -> SymTensor2 {
        self.0
    }

    pub fn g11(&self) -> f64 {
        self.0.h11
    }

    pub fn g12(&self) -> f64 {
        self.0.h12
    }

    pub fn g22(&self) -> f64 {
        self.0.h22
    }

    pub fn det(&self) -> f64 {
        self.0.det()
    }

    /// `G⁻¹` as a symmetric tensor.
    pub fn inverse(&self) -> SymTensor2 {
        let d = self.det();
        SymTensor2::new(self.0.h22 / d, -self.0.h12 / d, self.0.h11 / d)
    }

    /// `G / sqrt(det G)`.
    pub fn unit_det(&self) -> Self {
        Self(self.0 * (1.0 / self.det().sqrt()))
    }

    pub fn is_unit_det(&self, tol: f64) -> bool {
        (self.det() - 1.0).abs() <= tol
    }
}

/// Pointwise pairing `Tr((G⁻¹h)(G⁻¹k))`.
pub fn l2_pairing(g: &Metric2, h: &SymTensor2, k: &SymTensor2) -> f64 {
    let gi = g.inverse().matrix();
    let a = mat2::mul(&gi, &h.matrix());
    let b = mat2::mul(&gi, &k.matrix());
    mat2::trace(&mat2::mul(&a, &b))
}

/// Covariant derivative `D_{h1} h2` of the pairing on locally constant
/// tensors:
///
/// ```text
/// D_{h1} h2 = -½ [h1 G⁻¹ h2 + h2 G⁻¹ h1]
///             + ¼ [(Tr_G h1) h2 + (Tr_G h2) h1 - <h1, h2>_G G]
/// ```
///
/// Symmetric in `h1` and `h2`.
pub fn levi_civita(g: &Metric2, h1: &SymTensor2, h2: &SymTensor2) -> SymTensor2 {
    let gi = g.inverse().matrix();
    let a = h1.matrix();
    let b = h2.matrix();
    let prod = mat2::add(
        &mat2::mul(&mat2::mul(&a, &gi), &b),
        &mat2::mul(&mat2::mul(&b, &gi), &a),
    );
    let product_term = SymTensor2::from_matrix(&prod) * -0.5;
    let trace_term = h1.trace_wrt(g) * *h2 + h2.trace_wrt(g) * *h1 - l2_pairing(g, h1, h2) * g.tensor();
    product_term + 0.25 * trace_term
}
