//! Hamiltonian dynamics on the reduced sphere `|y| = 1` of oriented great
//! circles, with the Lie–Poisson structure `{y_i, y_j} = −ε_ijk y_k`.

use crate::corrections::critical::fibonacci_sphere;
use crate::error::{Error, Result};
use crate::ode;
use crate::symbolalg::{CompiledPoly, PolySymbol};

use super::geometry::{cross, dot3, norm3};
use super::radon::check_sphere_symbol;

/// A real function `s(y)` on the reduced sphere together with its Hamilton field `ẏ = ∇s × y`.
#[derive(Clone, Debug)]
pub struct ReducedHamiltonian {
    s: CompiledPoly,
    grad: Vec<CompiledPoly>,
}

impl ReducedHamiltonian {
    pub fn new(s: &PolySymbol) -> Result<Self> {
        check_sphere_symbol(s)?;
        if s.terms().keys().any(|m| m.kdegree() > 0) {
            return Err(Error::Precondition("reduced-sphere functions depend on y only".into()));
        }
        let s = CompiledPoly::new(s).truncate_vars(3);
        let grad = s.gradient();
        Ok(ReducedHamiltonian { s, grad })
    }

    pub fn value(&self, y: &[f64]) -> f64 {
        self.s.eval_re(y)
    }

    pub fn field(&self, y: &[f64], out: &mut [f64]) {
        let g = [self.grad[0].eval_re(y), self.grad[1].eval_re(y), self.grad[2].eval_re(y)];
        let v = cross(&g, &[y[0], y[1], y[2]]);
        out[..3].copy_from_slice(&v);
    }

    pub fn flow(&self, y: &[f64; 3], t: f64, tol: f64) -> Result<[f64; 3]> {
        let out = ode::integrate(|z, o| self.field(z, o), y, t, tol)?;
        let n = norm3(&[out[0], out[1], out[2]]);
        Ok([out[0] / n, out[1] / n, out[2] / n])
    }

    /// Sample points where `s` is largest and smallest.
    pub fn extremes(&self) -> ([f64; 3], [f64; 3]) {
        let pts = fibonacci_sphere(4096);
        let by = |a: &&[f64; 3], b: &&[f64; 3]| self.value(*a).total_cmp(&self.value(*b));
        (*pts.iter().max_by(by).unwrap(), *pts.iter().min_by(by).unwrap())
    }

    /// A point of `{s = level}` on the great-circle arc from `hi` to `lo`.
    pub fn level_point(&self, level: f64, hi: &[f64; 3], lo: &[f64; 3]) -> Result<[f64; 3]> {
        let (shi, slo) = (self.value(hi), self.value(lo));
        if !(shi > level && level > slo) {
            return Err(Error::Precondition(format!(
                "level {level} is outside the band ({slo}, {shi}) between the anchors"
            )));
        }
        let c = dot3(hi, lo).clamp(-1.0, 1.0);
        let theta = c.acos();
        let mut u = [lo[0] - c * hi[0], lo[1] - c * hi[1], lo[2] - c * hi[2]];
        let un = norm3(&u);
        if un < 1e-12 {
            return Err(Error::Precondition("anchors are antipodal or equal".into()));
        }
        u.iter_mut().for_each(|v| *v /= un);
        let at = |a: f64| [hi[0] * a.cos() + u[0] * a.sin(), hi[1] * a.cos() + u[1] * a.sin(), hi[2] * a.cos() + u[2] * a.sin()];
        let (mut a, mut b) = (0.0, theta);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if self.value(&at(m)) > level {
                a = m;
            } else {
                b = m;
            }
            if b - a < 1e-15 {
                break;
            }
        }
        Ok(at(0.5 * (a + b)))
    }

    /// Period of the closed orbit through `y0` and `samples` equally spaced points along it.
    pub fn trace_orbit(&self, y0: &[f64; 3], samples: usize, tol: f64) -> Result<LevelCurve> {
        let mut v0 = [0.0; 3];
        self.field(y0, &mut v0);
        let speed = norm3(&v0);
        if speed < 1e-9 {
            return Err(Error::Precondition("orbit starts at a critical point".into()));
        }
        let g = |y: &[f64; 3]| (0..3).map(|i| (y[i] - y0[i]) * v0[i]).sum::<f64>();
        // keep the turning of the velocity per probe step small
        let mut dt = 0.02 / speed;
        loop {
            let mut v1 = [0.0; 3];
            self.field(&self.flow(y0, dt, tol)?, &mut v1);
            let cos = dot3(&v0, &v1) / (speed * norm3(&v1));
            if cos > 0.99 || dt * speed < 1e-9 {
                break;
            }
            dt *= 0.5;
        }
        let (mut t, mut y) = (0.0, *y0);
        let mut left = false;
        let period = loop {
            let next = self.flow(&y, dt, tol)?;
            let (g0, g1) = (g(&y), g(&next));
            if g0 < 0.0 {
                left = true;
            }
            if left && g0 < 0.0 && g1 >= 0.0 && dot3(&next, y0) > 0.0 {
                let (mut a, mut b) = (0.0, dt);
                for _ in 0..60 {
                    let m = 0.5 * (a + b);
                    if g(&self.flow(&y, m, tol)?) < 0.0 {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                break t + 0.5 * (a + b);
            }
            t += dt;
            y = next;
            if t * speed > 1e5 {
                return Err(Error::NoConvergence("orbit did not close".into()));
            }
        };
        let mut points = Vec::with_capacity(samples);
        let mut cur = *y0;
        for _ in 0..samples {
            points.push(cur);
            cur = self.flow(&cur, period / samples as f64, tol)?;
        }
        Ok(LevelCurve { period, points })
    }
}

/// A closed orbit sampled at equal time steps.
#[derive(Clone, Debug)]
pub struct LevelCurve {
    pub period: f64,
    pub points: Vec<[f64; 3]>,
}

impl LevelCurve {
    /// Area of the region to the left of the geodesic polygon through the points,
    /// by spherical Gauss–Bonnet.
    pub fn polygon_left_area(points: &[[f64; 3]]) -> f64 {
        let n = points.len();
        let mut turning = 0.0;
        for i in 0..n {
            let a = points[(i + n - 1) % n];
            let b = points[i];
            let c = points[(i + 1) % n];
            let (ab, cb) = (dot3(&a, &b), dot3(&c, &b));
            let tin = [-(a[0] - ab * b[0]), -(a[1] - ab * b[1]), -(a[2] - ab * b[2])];
            let tout = [c[0] - cb * b[0], c[1] - cb * b[1], c[2] - cb * b[2]];
            turning += dot3(&b, &cross(&tin, &tout)).atan2(dot3(&tin, &tout));
        }
        2.0 * std::f64::consts::PI - turning
    }

    /// Left area of the curve, Richardson-extrapolated from the full, half and
    /// quarter samplings (the polygon error is even in `1/N`).
    pub fn left_area(&self) -> f64 {
        let n = self.points.len();
        if !n.is_multiple_of(4) || n < 16 {
            return Self::polygon_left_area(&self.points);
        }
        let sub = |k: usize| Self::polygon_left_area(&self.points.iter().step_by(k).copied().collect::<Vec<_>>());
        let (a1, a2, a4) = (sub(1), sub(2), sub(4));
        let r1 = (4.0 * a1 - a2) / 3.0;
        let r2 = (4.0 * a2 - a4) / 3.0;
        (16.0 * r1 - r2) / 15.0
    }
}
