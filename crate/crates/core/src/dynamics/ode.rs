//! Adaptive Dormand–Prince 5(4) integration for linear, matrix-free
//! right-hand sides.

use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Element type of an integrated state vector.
pub trait Scalar: Copy + Default + Add<Output = Self> + Mul<f64, Output = Self> {
    fn magnitude(self) -> f64;
}

impl Scalar for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Mixed error control: a component passes when its local error is below
/// `atol + rtol·|y|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Tolerance {
    pub fn uniform(tol: f64) -> Self {
        Self { rtol: tol, atol: tol }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::uniform(1e-10)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
// 5th-order weights (also row 7 of the tableau, FSAL).
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between 5th- and 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const MAX_STEPS: usize = 50_000_000;

fn combine<T: Scalar>(out: &mut [T], y: &[T], h: f64, terms: &[(f64, &[T])]) {
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = T::default();
        for (c, k) in terms {
            acc = acc + k[i] * *c;
        }
        *o = y[i] + acc * h;
    }
}

/// Integrates `y' = f(t, y)` from `t0`, calling `on_sample(k, y)` at each
/// `samples[k]` (which must be `≥ t0` and strictly increasing). Steps are
/// clipped so every sample time is hit exactly.
pub fn integrate<T, F, S>(
    mut rhs: F,
    y0: &[T],
    t0: f64,
    samples: &[f64],
    tol: Tolerance,
    mut on_sample: S,
) -> Result<IntegrationStats>
where
    T: Scalar,
    F: FnMut(f64, &[T], &mut [T]),
    S: FnMut(usize, &[T]),
{
    let n = y0.len();
    let mut stats = IntegrationStats::default();
    if samples.windows(2).any(|w| !(w[1] > w[0])) || samples.first().is_some_and(|&s| s < t0) {
        return Err(Error::InvalidParameter("sample times must be increasing and ≥ t0".into()));
    }
    let Some(&t_end) = samples.last() else {
        return Ok(stats);
    };

    let mut y = y0.to_vec();
    let mut y_new = vec![T::default(); n];
    let mut tmp = vec![T::default(); n];
    let mut k = vec![vec![T::default(); n]; 7];

    let scale = |a: &[T], b: &[T], i: usize| tol.atol + tol.rtol * a[i].magnitude().max(b[i].magnitude());

    let mut t = t0;
    rhs(t, &y, &mut k[0]);
    stats.evaluations += 1;

    let mut next = 0;
    while next < samples.len() && samples[next] == t {
        on_sample(next, &y);
        next += 1;
    }
    if next == samples.len() {
        return Ok(stats);
    }

    // Initial step from the derivative scale (Hairer & Wanner, II.4).
    let d0 = rms(n, |i| y[i].magnitude() / scale(&y, &y, i));
    let d1 = rms(n, |i| k[0][i].magnitude() / scale(&y, &y, i));
    let mut h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h = h.min(t_end - t);

    let mut steps = 0usize;
    while next < samples.len() {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::Integration { t, msg: "step budget exhausted".into() });
        }
        let target = samples[next];
        let clipped = t + h >= target;
        let step = if clipped { target - t } else { h };
        if step <= 1e-14 * t.abs().max(1.0) {
            return Err(Error::Integration { t, msg: format!("step size underflow (h = {step:e})") });
        }

        let (k1, rest) = k.split_first_mut().unwrap();
        let [k2, k3, k4, k5, k6, k7] = rest else { unreachable!() };
        combine(&mut tmp, &y, step, &[(A21, k1)]);
        rhs(t + C2 * step, &tmp, k2);
        combine(&mut tmp, &y, step, &[(A31, k1), (A32, k2)]);
        rhs(t + C3 * step, &tmp, k3);
        combine(&mut tmp, &y, step, &[(A41, k1), (A42, k2), (A43, k3)]);
        rhs(t + C4 * step, &tmp, k4);
        combine(&mut tmp, &y, step, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)]);
        rhs(t + C5 * step, &tmp, k5);
        combine(&mut tmp, &y, step, &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)]);
        rhs(t + step, &tmp, k6);
        combine(&mut y_new, &y, step, &[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)]);
        rhs(t + step, &y_new, k7);
        stats.evaluations += 6;

        let err = rms(n, |i| {
            let e = (*k1)[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7;
            (e * step).magnitude() / scale(&y, &y_new, i)
        });
        if !err.is_finite() {
            return Err(Error::Integration { t, msg: "non-finite error estimate".into() });
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };

        if err <= 1.0 {
            stats.accepted += 1;
            t = if clipped { target } else { t + step };
            std::mem::swap(&mut y, &mut y_new);
            k.swap(0, 6);
            if clipped {
                on_sample(next, &y);
                next += 1;
                // Keep the unclipped proposal unless the clipped step was the limiting one.
                h = h.max(step * factor);
            } else {
                h = step * factor;
            }
        } else {
            stats.rejected += 1;
            h = step * factor.min(1.0);
        }
    }
    Ok(stats)
}

fn rms(n: usize, f: impl Fn(usize) -> f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    ((0..n).map(|i| f(i).powi(2)).sum::<f64>() / n as f64).sqrt()
}
