//! Small numerical kernels shared by the model modules: Gauss-Legendre rules,
//! bracketed root finding and an adaptive Dormand-Prince integrator.

use std::sync::OnceLock;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, computed by Newton
/// iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn gl24() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(24))
}

/// 24-point Gauss-Legendre integral of a smooth function over `[a, b]`.
pub fn integrate_gl(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let (x, w) = gl24();
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    half * x.iter().zip(w).map(|(xi, wi)| wi * f(mid + half * xi)).sum::<f64>()
}

/// Bisection for a sign change of `f` on `[lo, hi]`. Runs until the bracket
/// stops shrinking, so the answer is correct to the last bit.
pub fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let flo = f(lo);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Tolerances for [`dopri5`].
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-12, atol: 1e-14, max_steps: 1_000_000 }
    }
}

/// Output of [`dopri5`]: the state at each requested output time, and the
/// accepted step at which `stop` first fired, if it did.
#[derive(Debug, Clone)]
pub struct OdeRun<const N: usize> {
    pub samples: Vec<(f64, [f64; N])>,
    pub stopped: Option<(f64, [f64; N])>,
}

/// Adaptive Dormand-Prince 5(4) integration of `y' = f(t, y)` from `t0`,
/// landing exactly on every time in `outputs` (ascending, ≥ `t0`).
pub fn dopri5<const N: usize>(
    f: impl Fn(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    y0: [f64; N],
    outputs: &[f64],
    opts: OdeOptions,
    stop: impl Fn(&[f64; N]) -> bool,
) -> Result<OdeRun<N>, f64> {
    const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];

    let mut t = t0;
    let mut y = y0;
    let mut samples = Vec::with_capacity(outputs.len());
    let mut h = 1e-3;
    let mut steps = 0;
    for &target in outputs {
        while t < target {
            if steps >= opts.max_steps {
                return Err(target - t);
            }
            steps += 1;
            let last = h >= target - t;
            let step = if last { target - t } else { h };
            let mut k = [[0.0; N]; 7];
            for s in 0..7 {
                let mut ys = y;
                for (j, kj) in k.iter().enumerate().take(s) {
                    for i in 0..N {
                        ys[i] += step * A[s][j] * kj[i];
                    }
                }
                k[s] = f(t + C[s] * step, &ys);
            }
            let mut y5 = y;
            let mut err = 0.0f64;
            for i in 0..N {
                let (mut d5, mut d4) = (0.0, 0.0);
                for s in 0..7 {
                    d5 += B5[s] * k[s][i];
                    d4 += B4[s] * k[s][i];
                }
                y5[i] += step * d5;
                let sc = opts.atol + opts.rtol * y[i].abs().max(y5[i].abs());
                err = err.max((step * (d5 - d4) / sc).abs());
            }
            if !err.is_finite() {
                h = 0.25 * step;
                continue;
            }
            if err <= 1.0 {
                t = if last { target } else { t + step };
                y = y5;
                if stop(&y) {
                    return Ok(OdeRun { samples, stopped: Some((t, y)) });
                }
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            // A step truncated to hit an output time says little about the natural size.
            if !(last && err <= 1.0) {
                h = step * factor;
            }
        }
        samples.push((target, y));
    }
    Ok(OdeRun { samples, stopped: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(5);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-15);
        let m8: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((m8 - 2.0 / 9.0).abs() < 1e-15);
        assert!((integrate_gl(0.0, 1.0, f64::exp) - (1f64.exp() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn bisection_hits_last_bit() {
        let r = bisect(1.0, 2.0, |x| x * x - 2.0);
        assert!((r - 2f64.sqrt()).abs() <= 4e-16);
    }

    #[test]
    fn harmonic_oscillator() {
        let outs: Vec<f64> = (1..=10).map(|k| k as f64).collect();
        let run = dopri5(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, [1.0, 0.0], &outs, OdeOptions::default(), |_| false)
            .unwrap();
        for (t, y) in &run.samples {
            assert!((y[0] - t.cos()).abs() < 1e-10, "{t} {}", y[0] - t.cos());
        }
        let run = dopri5(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, [1.0, 0.0], &[10.0], OdeOptions::default(), |y| y[0] < 0.0)
            .unwrap();
        let (t, _) = run.stopped.unwrap();
        assert!(t > std::f64::consts::FRAC_PI_2 && t < 2.0);
    }
}
