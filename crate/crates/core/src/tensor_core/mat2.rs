//! Closed-form 2×2 matrix functions.
//!
//! Functions of symmetric matrices go through the spectral projector
//! `f(S) = f(λ₁) P + f(λ₂) (I - P)`, which stays accurate when the eigenvalues
//! nearly coincide (the projector becomes ill-determined exactly when its
//! coefficient difference vanishes).

use super::{Mat2, SymTensor2};

pub fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

pub fn add(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] + b[0][0], a[0][1] + b[0][1]],
        [a[1][0] + b[1][0], a[1][1] + b[1][1]],
    ]
}

pub fn trace(a: &Mat2) -> f64 {
    a[0][0] + a[1][1]
}

pub fn transpose(a: &Mat2) -> Mat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

/// `A X A` for symmetric `A` and `X`; the result is symmetric.
pub fn congruence(a: &SymTensor2, x: &SymTensor2) -> SymTensor2 {
    let am = a.matrix();
    SymTensor2::from_matrix(&mul(&mul(&am, &x.matrix()), &am))
}

/// Eigen-decomposition of a symmetric matrix: `(λ_max, λ_min, v)` where `v` is
/// a unit eigenvector for `λ_max`.
pub fn sym_eigen(s: &SymTensor2) -> (f64, f64, [f64; 2]) {
    let half_diff = 0.5 * (s.h11 - s.h22);
    let mean = 0.5 * (s.h11 + s.h22);
    let r = half_diff.hypot(s.h12);
    let (l1, l2) = (mean + r, mean - r);
    if r == 0.0 {
        return (l1, l2, [1.0, 0.0]);
    }
    // Rotation angle of the principal axis.
    let phi = 0.5 * s.h12.atan2(half_diff);
    (l1, l2, [phi.cos(), phi.sin()])
}

/// `f(S)` for symmetric `S` through its spectral decomposition.
pub fn sym_fn(s: &SymTensor2, f: impl Fn(f64) -> f64) -> SymTensor2 {
    let (l1, l2, v) = sym_eigen(s);
    let (f1, f2) = (f(l1), f(l2));
    let p = SymTensor2::new(v[0] * v[0], v[0] * v[1], v[1] * v[1]);
    f1 * p + f2 * (SymTensor2::IDENTITY - p)
}

pub fn spd_sqrt(s: &SymTensor2) -> SymTensor2 {
    sym_fn(s, f64::sqrt)
}

pub fn spd_inv_sqrt(s: &SymTensor2) -> SymTensor2 {
    sym_fn(s, |x| 1.0 / x.sqrt())
}

pub fn spd_log(s: &SymTensor2) -> SymTensor2 {
    sym_fn(s, f64::ln)
}

/// Matrix exponential of a symmetric matrix.
///
/// The traceless part is exponentiated in closed form,
/// `exp(A) = cosh(λ) I + sinh(λ)/λ · A` with `λ² = -det A`.
pub fn sym_exp(s: &SymTensor2) -> SymTensor2 {
    let m = 0.5 * s.trace();
    let a = *s - m * SymTensor2::IDENTITY;
    let lambda = (-a.det()).max(0.0).sqrt();
    let sinhc = if lambda < 1e-8 {
        1.0 + lambda * lambda / 6.0
    } else {
        lambda.sinh() / lambda
    };
    m.exp() * (lambda.cosh() * SymTensor2::IDENTITY + sinhc * a)
}
