//! Adaptive Dormand-Prince 5(4) integrator for small non-stiff systems.

use crate::error::{Error, Result};

const MAX_STEPS: usize = 100_000;

// Butcher tableau
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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b - b*, the embedded error weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrates `y' = rhs(t, y)` from `t0` to `t1` (either direction) with
/// mixed absolute/relative local error control.
pub fn integrate<F>(mut rhs: F, t0: f64, t1: f64, y0: &[f64], tol: f64) -> Result<Vec<f64>>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let n = y0.len();
    let mut y = y0.to_vec();
    if t1 == t0 || n == 0 {
        return Ok(y);
    }
    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();
    let mut t = t0;
    let mut h = dir * (span * 0.01).min(0.1);

    let mut k: [Vec<f64>; 7] = std::array::from_fn(|_| vec![0.0; n]);
    let mut tmp = vec![0.0; n];
    let mut y5 = vec![0.0; n];
    rhs(t, &y, &mut k[0]);

    for _ in 0..MAX_STEPS {
        if (t1 - t) * dir <= 0.0 {
            return Ok(y);
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        let stage = |tmp: &mut [f64], k: &[Vec<f64>], coeffs: &[f64]| {
            for i in 0..n {
                let mut acc = y[i];
                for (kk, a) in k.iter().zip(coeffs) {
                    acc += h * a * kk[i];
                }
                tmp[i] = acc;
            }
        };
        stage(&mut tmp, &k[..1], &[A21]);
        rhs(t + C2 * h, &tmp, &mut k[1]);
        stage(&mut tmp, &k[..2], &[A31, A32]);
        rhs(t + C3 * h, &tmp, &mut k[2]);
        stage(&mut tmp, &k[..3], &[A41, A42, A43]);
        rhs(t + C4 * h, &tmp, &mut k[3]);
        stage(&mut tmp, &k[..4], &[A51, A52, A53, A54]);
        rhs(t + C5 * h, &tmp, &mut k[4]);
        stage(&mut tmp, &k[..5], &[A61, A62, A63, A64, A65]);
        rhs(t + h, &tmp, &mut k[5]);
        for i in 0..n {
            y5[i] = y[i]
                + h * (B1 * k[0][i] + B3 * k[2][i] + B4 * k[3][i] + B5 * k[4][i] + B6 * k[5][i]);
        }
        rhs(t + h, &y5, &mut k[6]);

        let mut err: f64 = 0.0;
        for i in 0..n {
            let e = h
                * (E1 * k[0][i]
                    + E3 * k[2][i]
                    + E4 * k[3][i]
                    + E5 * k[4][i]
                    + E6 * k[5][i]
                    + E7 * k[6][i]);
            let scale = tol * (1.0 + y[i].abs().max(y5[i].abs()));
            err = err.max((e / scale).abs());
        }

        if err <= 1.0 {
            t += h;
            y.copy_from_slice(&y5);
            k.swap(0, 6);
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h.abs() < 1e-14 * span {
            break;
        }
    }
    Err(Error::Integration(format!(
        "stopped at t = {t} before reaching {t1} (step size {h:e})"
    )))
}
