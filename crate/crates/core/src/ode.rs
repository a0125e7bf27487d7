//! Adaptive fourth-order Runge–Kutta with step doubling.

use crate::error::{Error, Result};

const MIN_STEP: f64 = 1e-12;
const MAX_STEPS: usize = 2_000_000;

fn rk4_step<F>(field: &F, y: &[f64], h: f64, out: &mut [f64], scratch: &mut [Vec<f64>; 5])
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = y.len();
    let [k1, k2, k3, k4, tmp] = scratch;
    field(y, k1);
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k1[i];
    }
    field(tmp, k2);
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k2[i];
    }
    field(tmp, k3);
    for i in 0..n {
        tmp[i] = y[i] + h * k3[i];
    }
    field(tmp, k4);
    for i in 0..n {
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

/// Integrate the autonomous system `ẏ = field(y)` over time `t_end` (either sign).
///
/// Each accepted step of size `h` has estimated local error at most `tol·|h|`;
/// the accepted value is the Richardson-extrapolated two-half-step result.
pub fn integrate<F>(field: F, y0: &[f64], t_end: f64, tol: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = y0.len();
    let mut y = y0.to_vec();
    if t_end == 0.0 {
        return Ok(y);
    }
    let dir = t_end.signum();
    let total = t_end.abs();
    let f = |z: &[f64], out: &mut [f64]| {
        field(z, out);
        if dir < 0.0 {
            out.iter_mut().for_each(|v| *v = -*v);
        }
    };
    let mut scratch: [Vec<f64>; 5] = std::array::from_fn(|_| vec![0.0; n]);
    let (mut full, mut half, mut two) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut t = 0.0;
    let mut h = (total / 16.0).min(0.05);
    let mut steps = 0;
    while t < total {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::NoConvergence(format!("ODE step budget exhausted at t = {:e}", t * dir)));
        }
        let h_try = h.min(total - t);
        rk4_step(&f, &y, h_try, &mut full, &mut scratch);
        rk4_step(&f, &y, 0.5 * h_try, &mut half, &mut scratch);
        rk4_step(&f, &half, 0.5 * h_try, &mut two, &mut scratch);
        let err = full.iter().zip(&two).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / 15.0;
        // never ask for less than rounding noise in the state
        let scale = y.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let bound = (tol * h_try).max(64.0 * f64::EPSILON * scale);
        if err <= bound || h_try <= MIN_STEP {
            if h_try <= MIN_STEP && err > bound {
                return Err(Error::NoConvergence(format!("ODE step size underflow at t = {:e}", t * dir)));
            }
            for i in 0..n {
                y[i] = two[i] + (two[i] - full[i]) / 15.0;
            }
            t += h_try;
            if !y.iter().all(|v| v.is_finite()) {
                return Err(Error::NoConvergence("ODE solution is not finite".into()));
            }
        }
        let fac = if err == 0.0 { 4.0 } else { (0.9 * (bound / err).powf(0.25)).clamp(0.1, 4.0) };
        h = (h_try * fac).max(MIN_STEP);
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_quarter_period() {
        let field = |y: &[f64], out: &mut [f64]| {
            out[0] = y[1];
            out[1] = -y[0];
        };
        let y = integrate(field, &[1.0, 0.0], std::f64::consts::FRAC_PI_2, 1e-12).unwrap();
        assert!(y[0].abs() < 1e-10 && (y[1] + 1.0).abs() < 1e-10);
        let back = integrate(field, &y, -std::f64::consts::FRAC_PI_2, 1e-12).unwrap();
        assert!((back[0] - 1.0).abs() < 1e-10 && back[1].abs() < 1e-10);
    }
}
