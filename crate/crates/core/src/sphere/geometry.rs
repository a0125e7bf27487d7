use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of `Σ = {|x| = 1, x·ξ = 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    pub x: [f64; 3],
    pub xi: [f64; 3],
}

/// An oriented great circle, `y = x × ξ/|ξ|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedPoint {
    pub y: [f64; 3],
}

pub(crate) fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm3(a: &[f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

impl SpherePoint {
    pub fn new(x: [f64; 3], xi: [f64; 3]) -> Result<Self> {
        let p = SpherePoint { x, xi };
        if (dot3(&x, &x) - 1.0).abs() > 1e-12 || dot3(&x, &xi).abs() > 1e-12 {
            return Err(Error::Precondition("point is not on Σ (|x| = 1, x·ξ = 0)".into()));
        }
        Ok(p)
    }

    /// `(x₁, x₂, x₃, ξ₁, ξ₂, ξ₃)`.
    pub fn coords(&self) -> [f64; 6] {
        [self.x[0], self.x[1], self.x[2], self.xi[0], self.xi[1], self.xi[2]]
    }

    pub fn h1(&self) -> f64 {
        dot3(&self.x, &self.x) - 1.0
    }

    pub fn h2(&self) -> f64 {
        dot3(&self.x, &self.xi)
    }

    pub fn xi_norm(&self) -> f64 {
        norm3(&self.xi)
    }

    /// The oriented great circle through this point.
    pub fn reduce(&self) -> ReducedPoint {
        let c = cross(&self.x, &self.xi);
        let n = self.xi_norm();
        ReducedPoint { y: [c[0] / n, c[1] / n, c[2] / n] }
    }
}

/// `exp(tH_p^Σ/2)`: unit-speed-in-`|ξ|` great-circle motion.
pub fn geodesic_flow(pt: &SpherePoint, t: f64) -> Result<SpherePoint> {
    let r = pt.xi_norm();
    if r == 0.0 {
        return Err(Error::Precondition("geodesic flow needs ξ ≠ 0".into()));
    }
    let (s, c) = (r * t).sin_cos();
    let mut x = [0.0; 3];
    let mut xi = [0.0; 3];
    for j in 0..3 {
        x[j] = c * pt.x[j] + s * pt.xi[j] / r;
        xi[j] = -r * s * pt.x[j] + c * pt.xi[j];
    }
    Ok(SpherePoint { x, xi })
}

/// Uniformly distributed unit vector.
pub fn random_unit<R: Rng>(rng: &mut R) -> [f64; 3] {
    loop {
        let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n = norm3(&v);
        if n > 1e-3 && n <= 1.0 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Random point of `Σ` with `|ξ| = speed`.
pub fn random_sigma_point<R: Rng>(rng: &mut R, speed: f64) -> SpherePoint {
    let x = random_unit(rng);
    let v = random_unit(rng);
    let d = dot3(&x, &v);
    let mut t = [v[0] - d * x[0], v[1] - d * x[1], v[2] - d * x[2]];
    let n = norm3(&t);
    if n < 1e-6 {
        return random_sigma_point(rng, speed);
    }
    t.iter_mut().for_each(|c| *c *= speed / n);
    SpherePoint { x, xi: t }
}

/// The chart `y ↦ (x, ξ)` with `x = (−y₂, y₁, 0)/ρ`, `ξ = y × x`, `ρ = (y₁² + y₂²)^{1/2}`.
/// Degenerates at the poles `y = ±e₃`.
pub fn chart_lift(y: &[f64; 3]) -> Result<SpherePoint> {
    let rho = (y[0] * y[0] + y[1] * y[1]).sqrt();
    if rho < 1e-8 {
        return Err(Error::Precondition("chart is singular at y = ±e₃".into()));
    }
    let x = [-y[1] / rho, y[0] / rho, 0.0];
    let xi = cross(y, &x);
    Ok(SpherePoint { x, xi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_turn() {
        let p = SpherePoint::new([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]).unwrap();
        let q = geodesic_flow(&p, std::f64::consts::FRAC_PI_2).unwrap();
        let want = [0.0, 1.0, 0.0, -1.0, 0.0, 0.0];
        for (a, b) in q.coords().iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn chart_inverts_reduction() {
        let y = [0.6, 0.0, 0.8];
        let p = chart_lift(&y).unwrap();
        let r = p.reduce();
        for j in 0..3 {
            assert!((r.y[j] - y[j]).abs() < 1e-15);
        }
    }
}
