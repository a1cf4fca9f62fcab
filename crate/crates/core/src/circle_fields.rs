//! Vector fields on the circle in Fourier form, with the WP (Kähler) structure
//! of the universal Teichmüller space at the identity: the pairing
//! `g = 2b Re Σ_{m≥2} (m³ - m) v_m w̄_m`, the complex structure
//! `v_m ↦ -i sgn(m) v_m` (the Hilbert transform), the Kirillov-Kostant form,
//! Sobolev norms, and the Ahlfors projection by quadrature.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{contract, domain, GeomError, Result};
use crate::numeric::gauss_legendre;

/// `Θ = Σ v_m e^{imθ} ∂/∂θ` over `2 ≤ |m| ≤ M`; only `m ≥ 2` is stored and
/// `v_{-m} = conj(v_m)` is implied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierVectorField {
    coeffs: Vec<Complex64>,
}

impl FourierVectorField {
    pub fn zero(bandlimit: usize) -> Self {
        Self { coeffs: vec![Complex64::new(0.0, 0.0); bandlimit.saturating_sub(1)] }
    }

    /// From `(v_2, v_3, …, v_M)`.
    pub fn from_positive(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    /// From explicit `(m, v_m)` pairs. Negative modes must be conjugates of
    /// the positive ones; modes `0, ±1` must vanish.
    pub fn from_modes(modes: &[(i64, Complex64)]) -> Result<Self> {
        let bandlimit = modes.iter().map(|(m, _)| m.unsigned_abs() as usize).max().unwrap_or(0);
        let mut f = Self::zero(bandlimit);
        let mut neg: Vec<Option<Complex64>> = vec![None; f.coeffs.len()];
        for &(m, v) in modes {
            match m {
                -1..=1 if v != Complex64::new(0.0, 0.0) => {
                    return domain(format!("mode {m} is not a tangent direction"));
                }
                -1..=1 => {}
                m if m > 1 => f.coeffs[m as usize - 2] = v,
                m => neg[(-m) as usize - 2] = Some(v),
            }
        }
        for (k, n) in neg.iter().enumerate() {
            if let Some(n) = n {
                if (n - f.coeffs[k].conj()).norm() > 1e-14 * (1.0 + n.norm()) {
                    return domain(format!("v_-{} is not the conjugate of v_{}", k + 2, k + 2));
                }
            }
        }
        Ok(f)
    }

    /// Highest mode `M`.
    pub fn bandlimit(&self) -> usize {
        self.coeffs.len() + 1
    }

    pub fn positive(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn get(&self, m: i64) -> Complex64 {
        let k = m.unsigned_abs() as usize;
        if k < 2 || k > self.bandlimit() {
            return Complex64::new(0.0, 0.0);
        }
        let v = self.coeffs[k - 2];
        if m > 0 {
            v
        } else {
            v.conj()
        }
    }

    /// `(m, v_m)` for `m ≥ 2`.
    fn modes(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.coeffs.iter().enumerate().map(|(k, v)| ((k + 2) as f64, *v))
    }

    fn zip_with<'a>(&'a self, other: &'a Self) -> impl Iterator<Item = (f64, Complex64, Complex64)> + 'a {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        (0..n).map(move |k| {
            ((k + 2) as f64, *self.coeffs.get(k).unwrap_or(&zero), *other.coeffs.get(k).unwrap_or(&zero))
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|v| v * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { coeffs: self.zip_with(other).map(|(_, a, b)| a + b).collect() }
    }

    /// `u(θ_j) = Σ_{|m|≥2} v_m e^{imθ_j}` at `θ_j = 2πj/n`.
    pub fn sample(&self, n: usize) -> Vec<f64> {
        (0..n)
            .map(|j| {
                let th = std::f64::consts::TAU * j as f64 / n as f64;
                self.modes().map(|(m, v)| 2.0 * (v * Complex64::from_polar(1.0, m * th)).re).sum()
            })
            .collect()
    }

    /// Parses lines `m re im` (`m ≥ 2`).
    pub fn from_text(text: &str) -> Result<Self> {
        let mut modes = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let f: Vec<&str> = line.split_whitespace().collect();
            let parse_err = |e: String| GeomError::Parse(format!("`{line}`: {e}"));
            if f.len() != 3 {
                return Err(parse_err("expected `m re im`".into()));
            }
            let m: i64 = f[0].parse().map_err(|e: std::num::ParseIntError| parse_err(e.to_string()))?;
            let re: f64 = f[1].parse().map_err(|e: std::num::ParseFloatError| parse_err(e.to_string()))?;
            let im: f64 = f[2].parse().map_err(|e: std::num::ParseFloatError| parse_err(e.to_string()))?;
            if m < 2 {
                return Err(parse_err("modes start at 2".into()));
            }
            modes.push((m, Complex64::new(re, im)));
        }
        Self::from_modes(&modes)
    }
}

/// `a = i b` with `b > 0`; `b = ½` by default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairingConstants {
    pub b: f64,
}

impl Default for PairingConstants {
    fn default() -> Self {
        Self { b: 0.5 }
    }
}

impl PairingConstants {
    pub fn new(b: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return domain(format!("b must be positive for a positive definite metric, got {b}"));
        }
        Ok(Self { b })
    }
}

/// `g(Θ₁, Θ₂) = 2b Re Σ_{m≥2} (m³ - m) v_m w̄_m`.
pub fn wp_pairing(x: &FourierVectorField, y: &FourierVectorField, k: &PairingConstants) -> f64 {
    2.0 * k.b * x.zip_with(y).map(|(m, v, w)| (m * m * m - m) * (v * w.conj()).re).sum::<f64>()
}

/// `ω(Θ₁, Θ₂) = -2b Σ_{m≥2} (m³ - m) Im(v_m w̄_m)`.
pub fn kk_form(x: &FourierVectorField, y: &FourierVectorField, k: &PairingConstants) -> f64 {
    -2.0 * k.b * x.zip_with(y).map(|(m, v, w)| (m * m * m - m) * (v * w.conj()).im).sum::<f64>()
}

/// `J̃: v_m ↦ -i sgn(m) v_m`.
pub fn complex_structure(x: &FourierVectorField) -> FourierVectorField {
    FourierVectorField { coeffs: x.coeffs.iter().map(|v| Complex64::new(v.im, -v.re)).collect() }
}

/// `(Σ_{|m|≥2} |v_m|² |m|^{2s})^{1/2}`.
pub fn sobolev_norm(x: &FourierVectorField, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return domain(format!("Sobolev order must be nonnegative, got {s}"));
    }
    Ok((2.0 * x.modes().map(|(m, v)| v.norm_sqr() * m.powf(2.0 * s)).sum::<f64>()).sqrt())
}

/// `g(Θ, Θ) / (b ‖Θ‖²_{H^{3/2}})`: the `2b` of the pairing and the two
/// signs of `m` in the Sobolev sum cancel, leaving a weighted mean of
/// `(m³ - m)/m³ ∈ [3/4, 1)`. `None` for the zero field.
pub fn wp_h32_ratio(x: &FourierVectorField, k: &PairingConstants) -> Option<f64> {
    let h = sobolev_norm(x, 1.5).ok()?;
    (h > 0.0).then(|| wp_pairing(x, x, k) / (k.b * h * h))
}

/// Conjugate function of real samples `u(2πj/N)`: multiplier `-i sgn(m)`,
/// with modes `0, ±1` sent to zero. `N` must be a power of two and the input
/// must have no content at the Nyquist mode.
pub fn hilbert_transform_fn(samples: &[f64]) -> Result<Vec<f64>> {
    let n = samples.len();
    if n < 8 || !n.is_power_of_two() {
        return contract(format!("sample count must be a power of two >= 8, got {n}"));
    }
    let mut planner = FftPlanner::new();
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut buf);
    let scale = samples.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(f64::MIN_POSITIVE);
    if buf[n / 2].norm() / n as f64 > 1e-10 * scale {
        return Err(GeomError::Domain("input bandwidth reaches the Nyquist mode (aliasing)".into()));
    }
    for (k, c) in buf.iter_mut().enumerate() {
        let m = if k <= n / 2 { k as i64 } else { k as i64 - n as i64 };
        *c = match m {
            -1..=1 => Complex64::new(0.0, 0.0),
            m if m == (n / 2) as i64 => Complex64::new(0.0, 0.0),
            m if m > 0 => Complex64::new(c.im, -c.re),
            _ => Complex64::new(-c.im, c.re),
        };
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    Ok(buf.into_iter().map(|c| c.re / n as f64).collect())
}

// ---------------------------------------------------------------------------
// Ahlfors projection.

/// Decay bound `|μ(η)| ≤ c |η|^{-alpha}` for `|η| ≥ r0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Decay {
    pub c: f64,
    pub alpha: f64,
    pub r0: f64,
}

/// The harmonic Beltrami differential `μ = y² conj(φ)` of `φ(η) = (η + a)^{-n}`
/// (`Im a > 0` keeps the pole in the lower half-plane).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarmonicTest {
    pub a: Complex64,
    pub n: i32,
}

impl HarmonicTest {
    pub fn new(a: Complex64, n: i32) -> Result<Self> {
        if !(a.im > 0.0) || n < 3 {
            return domain("need Im a > 0 and n >= 3 for a decaying harmonic test");
        }
        Ok(Self { a, n })
    }

    pub fn mu(&self, eta: Complex64) -> Complex64 {
        eta.im * eta.im * (eta + self.a).powi(-self.n).conj()
    }

    /// For `|η| ≥ 2|a|`, `|η + a| ≥ |η|/2` and `y ≤ |η|`.
    pub fn decay(&self) -> Decay {
        Decay { c: 2f64.powi(self.n), alpha: (self.n - 2) as f64, r0: 2.0 * self.a.norm() }
    }

    /// Parses `(eta+A)^-N`, with `A` a complex literal such as `i`, `2i`,
    /// `1+i` or `0.5+2i`.
    pub fn parse(text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || GeomError::Parse(format!("expected `(eta+A)^-N`, got `{text}`"));
        let inner = t.strip_prefix("(eta").ok_or_else(bad)?;
        let (a_txt, rest) = inner.split_once(')').ok_or_else(bad)?;
        let n: i32 = rest.strip_prefix("^-").ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let a = parse_complex(a_txt.strip_prefix('+').unwrap_or(a_txt))?;
        Self::new(a, n)
    }
}

/// Parses `x`, `yi`, `x+yi`, `x-yi`, `i`, `-i`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || GeomError::Parse(format!("bad complex number `{text}`"));
    let imag = |s: &str| -> Result<f64> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            s => s.parse().map_err(|_| bad()),
        }
    };
    if let Some(body) = t.strip_suffix('i') {
        // Split at the last sign that is not an exponent sign or the leading sign.
        let split = body
            .char_indices()
            .rev()
            .find(|&(k, c)| (c == '+' || c == '-') && k > 0 && !matches!(body.as_bytes()[k - 1], b'e' | b'E'))
            .map(|(k, _)| k);
        match split {
            Some(k) => Ok(Complex64::new(body[..k].parse().map_err(|_| bad())?, imag(&body[k..])?)),
            None => Ok(Complex64::new(0.0, imag(body)?)),
        }
    } else {
        Ok(Complex64::new(t.parse().map_err(|_| bad())?, 0.0))
    }
}

/// Quadrature settings for [`ahlfors_projection`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AhlforsOptions {
    /// Target for the total error estimate (quadrature plus tail).
    pub tol: f64,
    pub max_cells: usize,
}

impl Default for AhlforsOptions {
    fn default() -> Self {
        Self { tol: 1e-6, max_cells: 200_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AhlforsResult {
    pub value: Complex64,
    /// Estimated quadrature error (refinement differences).
    pub quadrature_error: f64,
    /// Rigorous bound on the truncated tail.
    pub tail_bound: f64,
    /// Truncation half-width `R` of the box `[-R, R] × [0, R]`.
    pub radius: f64,
    pub cells: usize,
    /// Set when the error estimate exceeds the requested tolerance.
    pub flagged: bool,
}

impl AhlforsResult {
    pub fn error_estimate(&self) -> f64 {
        self.quadrature_error + self.tail_bound
    }
}

struct Cell {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    value: Complex64,
    error: f64,
}

/// `P[μ](z) = -(3 (z - z̄)²/π) ∫_H μ(η) (η - z̄)⁻⁴ dσ(η)`.
///
/// The half-plane is truncated to `[-R, R] × [0, R]` with `R` chosen from the
/// decay bound so the tail stays below half the tolerance; the box is
/// integrated by adaptive 8×8 Gauss-Legendre cells, always splitting the cell
/// with the largest refinement difference.
pub fn ahlfors_projection(
    mu: impl Fn(Complex64) -> Complex64,
    decay: Decay,
    z: Complex64,
    opts: AhlforsOptions,
) -> Result<AhlforsResult> {
    if !(z.im > 0.0) {
        return domain("evaluation point must lie in the upper half-plane");
    }
    if !(decay.alpha + 2.0 > 0.0 && decay.c >= 0.0) {
        return domain("μ must decay faster than |η|^{-2} against the kernel");
    }
    let zbar = z.conj();
    let prefactor = -3.0 * (z - zbar) * (z - zbar) / std::f64::consts::PI;
    let pre = prefactor.norm();
    // For |η| ≥ 2|z|, |η - z̄| ≥ |η|/2; the tail outside radius R is then at most
    // |pre| · 16 π c R^{-α-2} / (α + 2).
    let tail_at = |r: f64| pre * 16.0 * std::f64::consts::PI * decay.c * r.powf(-decay.alpha - 2.0) / (decay.alpha + 2.0);
    let r_min = decay.r0.max(2.0 * z.norm()).max(1.0);
    let mut radius = (pre * 16.0 * std::f64::consts::PI * decay.c / ((decay.alpha + 2.0) * 0.5 * opts.tol))
        .powf(1.0 / (decay.alpha + 2.0));
    radius = radius.max(r_min);
    let tail_bound = if decay.c == 0.0 { 0.0 } else { tail_at(radius) };

    let (gx, gw) = gauss_legendre(8);
    let f = |eta: Complex64| mu(eta) * (eta - zbar).powi(-4);
    let rule = |x0: f64, x1: f64, y0: f64, y1: f64| -> Complex64 {
        let (hx, hy) = (0.5 * (x1 - x0), 0.5 * (y1 - y0));
        let (mx, my) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
        let mut s = Complex64::new(0.0, 0.0);
        for (xi, wi) in gx.iter().zip(&gw) {
            for (yj, wj) in gx.iter().zip(&gw) {
                s += wi * wj * f(Complex64::new(mx + hx * xi, my + hy * yj));
            }
        }
        s * hx * hy
    };
    let make = |x0: f64, x1: f64, y0: f64, y1: f64| -> Cell {
        let coarse = rule(x0, x1, y0, y1);
        let (xm, ym) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
        let fine = rule(x0, xm, y0, ym) + rule(xm, x1, y0, ym) + rule(x0, xm, ym, y1) + rule(xm, x1, ym, y1);
        Cell { x0, x1, y0, y1, value: fine, error: (fine - coarse).norm() }
    };

    // Start from a graded grid so the peak near z is resolved from the outset.
    let edges: Vec<f64> = {
        let mut e = vec![0.0];
        let mut h = z.im.min(1.0) * 0.5;
        while *e.last().unwrap_or(&0.0) < radius {
            let next = (e.last().copied().unwrap_or(0.0) + h).min(radius);
            e.push(next);
            h *= 1.5;
        }
        e
    };
    let mut xs: Vec<f64> = edges.iter().rev().map(|v| z.re - v).chain(edges.iter().skip(1).map(|v| z.re + v)).collect();
    xs.retain(|&x| x >= -radius && x <= radius);
    if xs.first().is_none_or(|&x| x > -radius) {
        xs.insert(0, -radius);
    }
    if xs.last().is_none_or(|&x| x < radius) {
        xs.push(radius);
    }
    let mut cells: Vec<Cell> = Vec::new();
    for w in xs.windows(2) {
        for h in edges.windows(2) {
            cells.push(make(w[0], w[1], h[0], h[1]));
        }
    }
    let quad_tol = (opts.tol - tail_bound).max(0.25 * opts.tol) / pre;
    loop {
        let total_err: f64 = cells.iter().map(|c| c.error).sum();
        if total_err <= quad_tol || cells.len() >= opts.max_cells {
            break;
        }
        let (worst, _) = cells
            .iter()
            .enumerate()
            .fold((0, -1.0), |b, (i, c)| if c.error > b.1 { (i, c.error) } else { b });
        let c = cells.swap_remove(worst);
        let (xm, ym) = (0.5 * (c.x0 + c.x1), 0.5 * (c.y0 + c.y1));
        cells.push(make(c.x0, xm, c.y0, ym));
        cells.push(make(xm, c.x1, c.y0, ym));
        cells.push(make(c.x0, xm, ym, c.y1));
        cells.push(make(xm, c.x1, ym, c.y1));
    }
    // Deterministic summation order regardless of refinement history.
    cells.sort_by(|a, b| (a.x0, a.y0).partial_cmp(&(b.x0, b.y0)).unwrap_or(std::cmp::Ordering::Equal));
    let integral: Complex64 = cells.iter().map(|c| c.value).sum();
    let quadrature_error = pre * cells.iter().map(|c| c.error).sum::<f64>();
    let result = AhlforsResult {
        value: prefactor * integral,
        quadrature_error,
        tail_bound,
        radius,
        cells: cells.len(),
        flagged: quadrature_error + tail_bound > opts.tol,
    };
    if !result.value.re.is_finite() || !result.value.im.is_finite() {
        return Err(GeomError::NonConvergence { what: "Ahlfors quadrature", residual: f64::NAN });
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pairing_examples() {
        let k = PairingConstants::default();
        let v2 = FourierVectorField::from_modes(&[(2, c(1.0, 0.0))]).unwrap();
        let v3 = FourierVectorField::from_modes(&[(3, c(0.0, 1.0))]).unwrap();
        assert_eq!(wp_pairing(&v2, &v2, &k), 6.0);
        assert_eq!(wp_pairing(&v2, &v3, &k), 0.0);
        assert_eq!(wp_pairing(&v3, &v3, &k), 24.0);
        let w2 = FourierVectorField::from_modes(&[(2, c(0.0, 1.0))]).unwrap();
        assert_eq!(kk_form(&v2, &w2, &k), 6.0);
        assert_eq!(sobolev_norm(&v2, 1.5).unwrap(), 4.0);
        assert!(FourierVectorField::from_modes(&[(1, c(1.0, 0.0))]).is_err());
        assert!(FourierVectorField::from_modes(&[(2, c(1.0, 1.0)), (-2, c(1.0, 1.0))]).is_err());
        assert!(PairingConstants::new(0.0).is_err());
    }

    #[test]
    fn complex_structure_squares_to_minus_one() {
        let v = FourierVectorField::from_positive(vec![c(0.3, -1.2), c(2.0, 0.5), c(-0.7, 0.1)]);
        let jj = complex_structure(&complex_structure(&v));
        assert_eq!(jj, v.scale(-1.0));
    }

    #[test]
    fn hilbert_examples() {
        let n = 64;
        let th = |j: usize| std::f64::consts::TAU * j as f64 / n as f64;
        let cos2: Vec<f64> = (0..n).map(|j| (2.0 * th(j)).cos()).collect();
        let out = hilbert_transform_fn(&cos2).unwrap();
        for (j, v) in out.iter().enumerate() {
            assert!((v - (2.0 * th(j)).sin()).abs() < 1e-14);
        }
        let sin5: Vec<f64> = (0..n).map(|j| (5.0 * th(j)).sin()).collect();
        for (j, v) in hilbert_transform_fn(&sin5).unwrap().iter().enumerate() {
            assert!((v + (5.0 * th(j)).cos()).abs() < 1e-14);
        }
        assert!(hilbert_transform_fn(&[3.0; 64]).unwrap().iter().all(|v| v.abs() < 1e-15));
        let nyq: Vec<f64> = (0..n).map(|j| (32.0 * th(j)).cos()).collect();
        assert!(hilbert_transform_fn(&nyq).is_err());
        assert!(hilbert_transform_fn(&[0.0; 48]).is_err());
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("0+1i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-2.5-3i").unwrap(), c(-2.5, -3.0));
        assert_eq!(parse_complex("1e-3+2i").unwrap(), c(1e-3, 2.0));
        assert_eq!(parse_complex("4").unwrap(), c(4.0, 0.0));
        assert!(parse_complex("x").is_err());
        let t = HarmonicTest::parse("(eta+i)^-4").unwrap();
        assert_eq!((t.a, t.n), (c(0.0, 1.0), 4));
    }

    #[test]
    fn zero_mu_projects_to_zero() {
        let r = ahlfors_projection(|_| c(0.0, 0.0), Decay { c: 0.0, alpha: 2.0, r0: 1.0 }, c(0.0, 1.0), AhlforsOptions::default())
            .unwrap();
        assert_eq!(r.value, c(0.0, 0.0));
        assert!(!r.flagged);
    }
}
