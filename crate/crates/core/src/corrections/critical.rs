//! Critical values of an averaged symbol on a compact constraint manifold.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolalg::{frame::to_frame, CompiledPoly, Frame, PolySymbol};

/// Where the critical points are sought.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ConstraintManifold {
    /// The energy shell `p₂ = Σ(λ_j/2)(x_j² + ξ_j²) = 1`.
    EnergyShell { lambda: Vec<i64> },
    /// The unit sphere `|y| = 1` in the position slots of an `n = 3` symbol.
    UnitSphere,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalValue {
    pub value: f64,
    /// Number of seeds that converged to this value.
    pub seeds: usize,
    /// `min`, `max` or `interior`.
    pub kind: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriticalReport {
    pub values: Vec<CriticalValue>,
    pub seeds: usize,
    pub nonconverged: usize,
}

pub const DEFAULT_SEEDS: usize = 10_000;
const GRAD_TOL: f64 = 1e-10;
const CLUSTER_TOL: f64 = 1e-8;

struct Problem {
    f: CompiledPoly,
    grad: Vec<CompiledPoly>,
    hess: Vec<Vec<CompiledPoly>>,
    weights: Vec<f64>,
}

impl Problem {
    fn dim(&self) -> usize {
        self.weights.len()
    }

    fn constraint(&self, z: &[f64]) -> f64 {
        z.iter().zip(&self.weights).map(|(v, w)| w * v * v).sum()
    }

    fn project(&self, z: &mut [f64]) {
        let c = self.constraint(z).sqrt();
        z.iter_mut().for_each(|v| *v /= c);
    }

    fn grad_at(&self, z: &[f64]) -> Vec<f64> {
        self.grad.iter().map(|g| g.eval_re(z)).collect()
    }

    fn cgrad(&self, z: &[f64]) -> Vec<f64> {
        z.iter().zip(&self.weights).map(|(v, w)| 2.0 * w * v).collect()
    }

    fn projected_grad_norm(&self, z: &[f64]) -> f64 {
        let g = self.grad_at(z);
        let c = self.cgrad(z);
        let mu = dot(&g, &c) / dot(&c, &c);
        g.iter().zip(&c).map(|(a, b)| (a - mu * b).powi(2)).sum::<f64>().sqrt()
    }

    fn residual(&self, z: &[f64], mu: f64) -> DVector<f64> {
        let d = self.dim();
        let g = self.grad_at(z);
        let c = self.cgrad(z);
        let mut r = DVector::zeros(d + 1);
        for i in 0..d {
            r[i] = g[i] - mu * c[i];
        }
        r[d] = self.constraint(z) - 1.0;
        r
    }

    fn jacobian(&self, z: &[f64], mu: f64) -> DMatrix<f64> {
        let d = self.dim();
        let c = self.cgrad(z);
        let mut j = DMatrix::zeros(d + 1, d + 1);
        for a in 0..d {
            for b in 0..d {
                j[(a, b)] = self.hess[a][b].eval_re(z);
            }
            j[(a, a)] -= 2.0 * mu * self.weights[a];
            j[(a, d)] = -c[a];
            j[(d, a)] = c[a];
        }
        j
    }

    /// Levenberg–Marquardt on the Lagrange system; returns the converged point.
    fn refine(&self, seed: &[f64]) -> Option<Vec<f64>> {
        let d = self.dim();
        let mut z = seed.to_vec();
        self.project(&mut z);
        let g = self.grad_at(&z);
        let c = self.cgrad(&z);
        let mut mu = dot(&g, &c) / dot(&c, &c);
        let mut nu = 1e-3;
        let mut r = self.residual(&z, mu);
        for _ in 0..200 {
            if self.projected_grad_norm(&z) <= GRAD_TOL * 0.1 {
                break;
            }
            let j = self.jacobian(&z, mu);
            let jt = j.transpose();
            let a = &jt * &j;
            let b = -(&jt * &r);
            let mut accepted = false;
            for _ in 0..30 {
                let mut m = a.clone();
                for i in 0..=d {
                    m[(i, i)] += nu * (1.0 + a[(i, i)]);
                }
                let Some(step) = m.lu().solve(&b) else {
                    nu *= 10.0;
                    continue;
                };
                let mut zn: Vec<f64> = (0..d).map(|i| z[i] + step[i]).collect();
                self.project(&mut zn);
                let mun = mu + step[d];
                let rn = self.residual(&zn, mun);
                if rn.norm() < r.norm() {
                    z = zn;
                    mu = mun;
                    r = rn;
                    nu = (nu / 3.0).max(1e-12);
                    accepted = true;
                    break;
                }
                nu *= 4.0;
            }
            if !accepted {
                break;
            }
        }
        (self.projected_grad_norm(&z) <= GRAD_TOL).then_some(z)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Fibonacci lattice on the unit 2-sphere.
pub fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let rho = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            [rho * phi.cos(), rho * phi.sin(), z]
        })
        .collect()
}

fn gaussian_seeds(dim: usize, n: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c417);
    (0..n)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    // Box–Muller
                    let u: f64 = rng.gen_range(f64::EPSILON..1.0);
                    let v: f64 = rng.gen();
                    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
                })
                .collect()
        })
        .collect()
}

fn build_problem(s: &PolySymbol, manifold: &ConstraintManifold) -> Result<Problem> {
    let (f, weights) = match manifold {
        ConstraintManifold::EnergyShell { lambda } => {
            if s.n() != lambda.len() {
                return Err(Error::DimensionMismatch { expected: lambda.len(), found: s.n() });
            }
            let sx = to_frame(s, Frame::Xk);
            let w: Vec<f64> = lambda.iter().chain(lambda.iter()).map(|&l| l as f64 / 2.0).collect();
            (CompiledPoly::new(&sx), w)
        }
        ConstraintManifold::UnitSphere => {
            if s.n() != 3 {
                return Err(Error::NotThreeDimensional(s.n()));
            }
            if s.frame() != Frame::Xk || s.terms().keys().any(|m| m.kdegree() > 0) {
                return Err(Error::Precondition("reduced-sphere symbols are polynomials in y = (x₁, x₂, x₃) only".into()));
            }
            (CompiledPoly::new(s).truncate_vars(3), vec![1.0; 3])
        }
    };
    let grad = f.gradient();
    let hess = grad.iter().map(|g| g.gradient()).collect();
    Ok(Problem { f, grad, hess, weights })
}

/// Critical values of `Re s` on the manifold, from `seeds` starting points.
pub fn critical_values(s: &PolySymbol, manifold: &ConstraintManifold, seeds: usize) -> Result<CriticalReport> {
    let prob = build_problem(s, manifold)?;
    let starts: Vec<Vec<f64>> = match manifold {
        ConstraintManifold::UnitSphere => fibonacci_sphere(seeds).into_iter().map(|p| p.to_vec()).collect(),
        ConstraintManifold::EnergyShell { .. } => gaussian_seeds(prob.dim(), seeds),
    };
    let results: Vec<Option<f64>> = starts
        .par_iter()
        .map(|z0| prob.refine(z0).map(|z| prob.f.eval_re(&z)))
        .collect();
    let nonconverged = results.iter().filter(|r| r.is_none()).count();
    let mut vals: Vec<f64> = results.into_iter().flatten().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut groups: Vec<Vec<f64>> = Vec::new();
    for v in vals {
        match groups.last_mut() {
            Some(g) if v - g[g.len() - 1] <= CLUSTER_TOL => g.push(v),
            _ => groups.push(vec![v]),
        }
    }
    let ng = groups.len();
    let values = groups
        .into_iter()
        .enumerate()
        .map(|(i, g)| CriticalValue {
            value: g[g.len() / 2],
            seeds: g.len(),
            kind: if i == 0 {
                "min"
            } else if i + 1 == ng {
                "max"
            } else {
                "interior"
            }
            .into(),
        })
        .collect();
    Ok(CriticalReport { values, seeds, nonconverged })
}

/// Distinct critical values with the default seed count.
pub fn critical_values_on_sphere3(s_avg: &PolySymbol, manifold: &ConstraintManifold) -> Result<Vec<CriticalValue>> {
    Ok(critical_values(s_avg, manifold, DEFAULT_SEEDS)?.values)
}
